//! Global world-frame site list with spatial deduplication, plus clustering.

mod cluster;
mod kdtree;

pub use cluster::{cluster_sites, ClusterMetric, ClusterParams, ClusterSite};
pub use kdtree::KdTree;

pub use crate::detection::LandingSite;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Vec3;

/// Sites kept at least `dedup_radius` apart, indexed by a k-d tree.
#[derive(Clone, Debug)]
pub struct SiteRegistry {
    sites: Vec<LandingSite>,
    tree: KdTree,
    dedup_radius: f64,
}

/// JSON form of a registry.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegistrySnapshot {
    pub dedup_radius_m: f64,
    pub sites: Vec<LandingSite>,
}

impl SiteRegistry {
    pub fn new(dedup_radius: f64) -> Result<Self> {
        if !(dedup_radius >= 0.0 && dedup_radius.is_finite()) {
            return Err(Error::config(format!(
                "dedup radius must be finite and non-negative, got {dedup_radius}"
            )));
        }
        Ok(Self {
            sites: Vec::new(),
            tree: KdTree::new(),
            dedup_radius,
        })
    }

    pub fn dedup_radius(&self) -> f64 {
        self.dedup_radius
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    /// Sites in insertion order.
    pub fn sites(&self) -> &[LandingSite] {
        &self.sites
    }

    pub fn tree(&self) -> &KdTree {
        &self.tree
    }

    /// Inserts `site` unless a stored site lies strictly closer than the
    /// dedup radius. Returns whether it was stored.
    pub fn insert(&mut self, site: LandingSite) -> Result<bool> {
        if !site.position.iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidQuery(format!(
                "non-finite site position {:?}",
                site.position
            )));
        }
        if !(0.0..=1.0).contains(&site.score) {
            return Err(Error::InvalidQuery(format!("site score {} outside [0, 1]", site.score)));
        }
        if let Some((_, d)) = self.nearest(&site.position) {
            if d < self.dedup_radius {
                return Ok(false);
            }
        }
        self.tree.insert(site.position.into());
        self.sites.push(site);
        Ok(true)
    }

    /// Closest stored site and its distance; ties go to the earlier insertion.
    pub fn nearest(&self, q: &Vec3) -> Option<(&LandingSite, f64)> {
        self.tree
            .nearest(&[q.x, q.y, q.z])
            .map(|(i, d2)| (&self.sites[i], d2.sqrt()))
    }

    pub fn snapshot(&self) -> RegistrySnapshot {
        RegistrySnapshot {
            dedup_radius_m: self.dedup_radius,
            sites: self.sites.clone(),
        }
    }

    /// Rebuilds a registry by replaying the snapshot's sites in order.
    pub fn from_snapshot(snapshot: &RegistrySnapshot) -> Result<Self> {
        let mut reg = Self::new(snapshot.dedup_radius_m)?;
        for s in &snapshot.sites {
            if !reg.insert(*s)? {
                log::warn!("snapshot site at {:?} violates the dedup radius; dropped", s.position);
            }
        }
        Ok(reg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn site(x: f64, y: f64, z: f64) -> LandingSite {
        LandingSite {
            position: Vec3::new(x, y, z),
            score: 0.8,
            frame_id: 0,
            timestamp: 0.0,
        }
    }

    #[test]
    fn dedup_examples() {
        let mut r = SiteRegistry::new(0.5).unwrap();
        assert!(r.insert(site(0.0, 0.0, 0.0)).unwrap());
        assert!(!r.insert(site(0.4, 0.0, 0.0)).unwrap());
        assert!(r.insert(site(0.5, 0.0, 0.0)).unwrap());
        assert_eq!(r.len(), 2);
    }

    #[test]
    fn rejects_non_finite() {
        let mut r = SiteRegistry::new(0.5).unwrap();
        assert!(r.insert(site(f64::NAN, 0.0, 0.0)).is_err());
        assert!(r.insert(site(0.0, f64::INFINITY, 0.0)).is_err());
        assert!(r.is_empty());
    }

    #[test]
    fn nearest_examples() {
        let mut r = SiteRegistry::new(0.0).unwrap();
        assert!(r.nearest(&Vec3::zeros()).is_none());
        r.insert(site(1.0, 1.0, 1.0)).unwrap();
        let (s, d) = r.nearest(&Vec3::zeros()).unwrap();
        assert_eq!(s.position, Vec3::new(1.0, 1.0, 1.0));
        assert!((d - 3f64.sqrt()).abs() < 1e-15);

        let mut r = SiteRegistry::new(0.0).unwrap();
        r.insert(site(2.0, 0.0, 0.0)).unwrap();
        r.insert(site(-2.0, 0.0, 0.0)).unwrap();
        let (s, _) = r.nearest(&Vec3::zeros()).unwrap();
        assert_eq!(s.position.x, 2.0);
    }

    #[test]
    fn snapshot_round_trip() {
        let mut r = SiteRegistry::new(0.5).unwrap();
        for i in 0..10 {
            r.insert(site(i as f64 * 0.3, 0.0, 0.0)).unwrap();
        }
        let snap = r.snapshot();
        let json = serde_json::to_string(&snap).unwrap();
        let back: RegistrySnapshot = serde_json::from_str(&json).unwrap();
        assert_eq!(back, snap);
        assert_eq!(SiteRegistry::from_snapshot(&back).unwrap().sites(), r.sites());
    }

    #[test]
    fn registry_is_send() {
        fn assert_send<T: Send + Sync>() {}
        assert_send::<SiteRegistry>();
    }
}
