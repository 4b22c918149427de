use serde::{Deserialize, Serialize};

use super::{Costmap, CostmapKind};
use crate::error::{Error, Result};
use crate::grid::Grid;

/// Tolerance on `c1 + c2 + c3 + c4 = 1`.
pub const WEIGHT_SUM_TOLERANCE: f64 = 1e-6;

/// Decision-map weights and thresholds.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FusionWeights {
    /// Depth confidence.
    pub c1: f64,
    /// Flatness.
    pub c2: f64,
    /// Steepness.
    pub c3: f64,
    /// Energy.
    pub c4: f64,
    pub decision_threshold: f64,
    /// Maximum tolerable slope (radians).
    pub theta_th: f64,
}

impl FusionWeights {
    pub fn validate(&self) -> Result<()> {
        let c = [self.c1, self.c2, self.c3, self.c4];
        if c.iter().any(|v| !(0.0..=1.0).contains(v)) {
            return Err(Error::config(format!("weights must lie in [0, 1]: {c:?}")));
        }
        let sum: f64 = c.iter().sum();
        if (sum - 1.0).abs() > WEIGHT_SUM_TOLERANCE {
            return Err(Error::config(format!("weights must sum to 1, got {sum}")));
        }
        if !(self.theta_th > 0.0 && self.theta_th.is_finite()) {
            return Err(Error::config("theta_th must be positive"));
        }
        if !self.decision_threshold.is_finite() {
            return Err(Error::config("decision threshold must be finite"));
        }
        Ok(())
    }
}

/// `J = c1·J_DE + c2·J_FL + c3·J_N + c4·J_EC`; a pixel is valid only if all
/// four inputs are.
pub fn decision_map(
    jde: &Costmap,
    jfl: &Costmap,
    jn: &Costmap,
    jec: &Costmap,
    w: &FusionWeights,
) -> Result<Costmap> {
    w.validate()?;
    let shape = jde.shape();
    for m in [jfl, jn, jec] {
        m.values.ensure_shape(shape)?;
    }
    let (width, height) = shape;
    let mut values = Grid::filled(width, height, 0.0);
    let mut valid = Grid::filled(width, height, false);
    for i in 0..width * height {
        if !(jde.valid.as_slice()[i]
            && jfl.valid.as_slice()[i]
            && jn.valid.as_slice()[i]
            && jec.valid.as_slice()[i])
        {
            continue;
        }
        let j = w.c1 * jde.values.as_slice()[i]
            + w.c2 * jfl.values.as_slice()[i]
            + w.c3 * jn.values.as_slice()[i]
            + w.c4 * jec.values.as_slice()[i];
        values.as_mut_slice()[i] = j.clamp(0.0, 1.0);
        valid.as_mut_slice()[i] = true;
    }
    Ok(Costmap {
        values,
        valid,
        kind: CostmapKind::Decision,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn weights(c: [f64; 4]) -> FusionWeights {
        FusionWeights {
            c1: c[0],
            c2: c[1],
            c3: c[2],
            c4: c[3],
            decision_threshold: 0.72,
            theta_th: 15f64.to_radians(),
        }
    }

    fn constant(v: f64, kind: CostmapKind) -> Costmap {
        Costmap::new(Grid::filled(2, 2, v), Grid::filled(2, 2, true), kind).unwrap()
    }

    fn fuse(inputs: [f64; 4], w: &FusionWeights) -> Costmap {
        decision_map(
            &constant(inputs[0], CostmapKind::DepthConfidence),
            &constant(inputs[1], CostmapKind::Flatness),
            &constant(inputs[2], CostmapKind::Steepness),
            &constant(inputs[3], CostmapKind::Energy),
            w,
        )
        .unwrap()
    }

    #[test]
    fn examples() {
        let sim = weights([0.05, 0.4, 0.4, 0.15]);
        assert!((fuse([1.0; 4], &sim).values.at(0, 0) - 1.0).abs() < 1e-12);
        assert!((fuse([1.0, 1.0, 1.0, 0.0], &sim).values.at(0, 0) - 0.85).abs() < 1e-12);
        let real = weights([0.15, 0.35, 0.4, 0.1]);
        assert!((fuse([0.5; 4], &real).values.at(1, 1) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_weights() {
        assert!(weights([0.5, 0.5, 0.5, -0.5]).validate().is_err());
        assert!(weights([0.3, 0.3, 0.3, 0.3]).validate().is_err());
        let mut w = weights([0.25; 4]);
        w.theta_th = 0.0;
        assert!(w.validate().is_err());
        let c = constant(1.0, CostmapKind::Energy);
        assert!(matches!(
            decision_map(&c, &c, &c, &c, &weights([0.3, 0.3, 0.3, 0.3])),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn any_invalid_input_invalidates() {
        let mut jn = constant(1.0, CostmapKind::Steepness);
        jn.valid.set(1, 0, false);
        let one = constant(1.0, CostmapKind::Flatness);
        let j = decision_map(&one, &one, &jn, &one, &weights([0.25; 4])).unwrap();
        assert!(!j.valid.at(1, 0));
        assert!(j.valid.at(0, 0));
    }
}
