//! Single-linkage agglomeration of registry sites.
//!
//! Two sites are linkable when their horizontal (or 3D) separation is within
//! `dist_th` and their height difference within `z_th`. Clusters are the
//! connected components of that relation, so the result does not depend on
//! merge order.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::{LandingSite, SiteRegistry};
use crate::error::{Error, Result};
use crate::geometry::Vec3;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClusterMetric {
    /// Distance in the horizontal plane; height is tested only by `z_th`.
    #[default]
    Xy,
    /// Full 3D distance, plus the `z_th` test.
    Xyz,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClusterParams {
    pub dist_th: f64,
    pub z_th: f64,
    pub metric: ClusterMetric,
}

impl ClusterParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.dist_th > 0.0 && self.z_th > 0.0) {
            return Err(Error::config(format!(
                "cluster thresholds must be positive (dist {}, z {})",
                self.dist_th, self.z_th
            )));
        }
        Ok(())
    }

    /// The pairwise linkage predicate.
    #[inline]
    pub fn linkable(&self, a: &Vec3, b: &Vec3) -> bool {
        let d = a - b;
        let planar = match self.metric {
            ClusterMetric::Xy => d.x * d.x + d.y * d.y,
            ClusterMetric::Xyz => d.x * d.x + d.y * d.y + d.z * d.z,
        };
        planar <= self.dist_th * self.dist_th && d.z.abs() <= self.z_th
    }

    /// Radius of a ball guaranteed to contain every linkable neighbor.
    fn search_radius2(&self) -> f64 {
        let r2 = match self.metric {
            ClusterMetric::Xy => self.dist_th * self.dist_th + self.z_th * self.z_th,
            ClusterMetric::Xyz => self.dist_th * self.dist_th,
        };
        r2 * (1.0 + 1e-9)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClusterSite {
    pub cx: f64,
    pub cy: f64,
    pub cz: f64,
    pub mean_score: f64,
    /// Number of member sites.
    pub members: usize,
    /// Registry indices of the members, ascending.
    #[serde(skip)]
    pub member_ids: Vec<usize>,
}

impl ClusterSite {
    pub fn centroid(&self) -> Vec3 {
        Vec3::new(self.cx, self.cy, self.cz)
    }

    fn from_members(ids: Vec<usize>, sites: &[LandingSite]) -> Self {
        let n = ids.len() as f64;
        let mut sum = Vec3::zeros();
        let mut score = 0.0;
        for &i in &ids {
            sum += sites[i].position;
            score += sites[i].score;
        }
        let c = sum / n;
        Self {
            cx: c.x,
            cy: c.y,
            cz: c.z,
            mean_score: score / n,
            members: ids.len(),
            member_ids: ids,
        }
    }
}

struct DisjointSet {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl DisjointSet {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            Ordering::Less => self.parent[ra] = rb,
            Ordering::Greater => self.parent[rb] = ra,
            Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
    }
}

/// Clusters sorted by mean score (desc), then size (desc), then centroid
/// (lexicographic asc).
pub fn cluster_sites(reg: &SiteRegistry, params: &ClusterParams) -> Result<Vec<ClusterSite>> {
    params.validate()?;
    let sites = reg.sites();
    let mut sets = DisjointSet::new(sites.len());
    let r2 = params.search_radius2();
    for (i, s) in sites.iter().enumerate() {
        let q = [s.position.x, s.position.y, s.position.z];
        for j in reg.tree().within(&q, r2) {
            if j > i && params.linkable(&s.position, &sites[j].position) {
                sets.union(i, j);
            }
        }
    }

    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; sites.len()];
    for i in 0..sites.len() {
        let root = sets.find(i);
        if slot[root] == usize::MAX {
            slot[root] = groups.len();
            groups.push(Vec::new());
        }
        groups[slot[root]].push(i);
    }

    let mut clusters: Vec<ClusterSite> = groups
        .into_iter()
        .map(|ids| ClusterSite::from_members(ids, sites))
        .collect();
    clusters.sort_by(|a, b| {
        b.mean_score
            .total_cmp(&a.mean_score)
            .then(b.members.cmp(&a.members))
            .then(a.cx.total_cmp(&b.cx))
            .then(a.cy.total_cmp(&b.cy))
            .then(a.cz.total_cmp(&b.cz))
    });
    Ok(clusters)
}
