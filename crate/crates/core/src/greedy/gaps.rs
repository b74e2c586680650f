use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::point_set::{wrap_unit, PointSet};

/// An open circle arc `(start, end)` in unwrapped coordinates:
/// `start` is in `[0, 1)` up to the shrink, `end` may exceed 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Arc {
    pub start: f64,
    pub end: f64,
}

impl Arc {
    pub fn len(&self) -> f64 {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.end <= self.start
    }

    /// Unwrapped coordinate of `x` inside the arc, if it lies there.
    pub fn locate(&self, x: f64) -> Option<f64> {
        let y = self.start + wrap_unit(x - self.start);
        (y <= self.end).then_some(y)
    }
}

/// Arcs between circularly consecutive points, each shrunk by `radius` at both ends.
pub fn admissible_gaps(points: &PointSet, radius: f64) -> Result<Vec<Arc>> {
    let values = points.values()?;
    let reduced: Vec<f64> = values.iter().map(|&v| wrap_unit(v)).collect();
    arcs_around(&reduced, radius)
}

pub(crate) fn arcs_around(reduced: &[f64], radius: f64) -> Result<Vec<Arc>> {
    if reduced.is_empty() {
        return Err(Error::EmptySet);
    }
    let mut sorted = reduced.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    let arcs: Vec<Arc> = (0..n)
        .filter_map(|i| {
            let a = sorted[i];
            let b = if i + 1 < n { sorted[i + 1] } else { sorted[0] + 1.0 };
            let arc = Arc { start: a + radius, end: b - radius };
            (!arc.is_empty()).then_some(arc)
        })
        .collect();
    if arcs.is_empty() {
        return Err(Error::NoAdmissibleRegion { radius, points: n });
    }
    Ok(arcs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::point_set::Provenance;

    fn set(v: &[f64]) -> PointSet {
        PointSet::from_values(v, Provenance::File).unwrap()
    }

    fn approx(arc: &Arc, s: f64, e: f64) -> bool {
        (arc.start - s).abs() < 1e-15 && (arc.end - e).abs() < 1e-15
    }

    #[test]
    fn two_points_give_two_arcs() {
        let arcs = admissible_gaps(&set(&[0.75, 0.25]), 0.05).unwrap();
        assert_eq!(arcs.len(), 2);
        assert!(approx(&arcs[0], 0.30, 0.70));
        assert!(approx(&arcs[1], 0.80, 1.20));
    }

    #[test]
    fn single_point_gives_full_circle_minus_hole() {
        let arcs = admissible_gaps(&set(&[0.5]), 0.1).unwrap();
        assert_eq!(arcs.len(), 1);
        assert!(approx(&arcs[0], 0.6, 1.4));
    }

    #[test]
    fn too_large_radius_leaves_nothing() {
        assert!(matches!(
            admissible_gaps(&set(&[0.0, 0.5]), 0.3),
            Err(Error::NoAdmissibleRegion { .. })
        ));
    }

    #[test]
    fn coincident_points_drop_their_gap() {
        // 1.0 and 0.0 are the same point on the circle
        let arcs = admissible_gaps(&set(&[1.0, 0.0, 0.5]), 1e-3).unwrap();
        assert_eq!(arcs.len(), 2);
    }

    #[test]
    fn locate_handles_wraparound() {
        let arc = Arc { start: 0.8, end: 1.2 };
        assert!((arc.locate(0.1).unwrap() - 1.1).abs() < 1e-15);
        assert!(arc.locate(0.5).is_none());
        assert_eq!(arc.locate(0.9), Some(0.9));
    }
}
