use serde::{Deserialize, Serialize};

use super::Costmap;

/// Ranges narrower than this carry no ranking information.
pub const DEGENERATE_RANGE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Orientation {
    HigherIsBetter,
    LowerIsBetter,
}

/// Min-max rescale of valid pixels onto `[0, 1]` with 1 the most favorable.
/// A (near-)constant map becomes 0.5 everywhere.
pub fn minmax_normalize(map: &Costmap, orientation: Orientation) -> Costmap {
    let mut out = map.clone();
    let Some((lo, hi)) = map.valid_range() else {
        return out;
    };
    let span = hi - lo;
    for (v, &ok) in out
        .values
        .as_mut_slice()
        .iter_mut()
        .zip(map.valid.as_slice())
    {
        if !ok {
            continue;
        }
        *v = if span < DEGENERATE_RANGE {
            0.5
        } else {
            match orientation {
                Orientation::HigherIsBetter => (*v - lo) / span,
                Orientation::LowerIsBetter => (hi - *v) / span,
            }
        };
    }
    out
}
