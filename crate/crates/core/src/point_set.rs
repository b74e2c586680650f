use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Where a point set came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Greedy,
    Baseline,
    File,
}

/// An ordered list of points in the unit cube.
///
/// Coordinates live in `[0, 1]`. The value `1.0` is kept verbatim because
/// the star discrepancy distinguishes it from `0.0`; energy evaluation
/// reduces it mod 1. Points are kept in insertion order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointSet {
    dim: usize,
    coords: Vec<f64>,
    provenance: Provenance,
}

impl PointSet {
    pub fn new(dim: usize, provenance: Provenance) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInput("dimension must be at least 1".into()));
        }
        Ok(Self { dim, coords: Vec::new(), provenance })
    }

    /// Builds a point set from a flat coordinate list (`dim` values per point).
    pub fn from_flat(dim: usize, coords: Vec<f64>, provenance: Provenance) -> Result<Self> {
        let mut set = Self::new(dim, provenance)?;
        if !coords.len().is_multiple_of(dim) {
            return Err(Error::InvalidInput(format!(
                "{} coordinates do not split into points of dimension {dim}",
                coords.len()
            )));
        }
        for p in coords.chunks(dim) {
            set.push(p)?;
        }
        Ok(set)
    }

    pub fn from_points<P: AsRef<[f64]>>(
        dim: usize,
        points: &[P],
        provenance: Provenance,
    ) -> Result<Self> {
        let mut set = Self::new(dim, provenance)?;
        for p in points {
            set.push(p.as_ref())?;
        }
        Ok(set)
    }

    /// One-dimensional convenience constructor.
    pub fn from_values(values: &[f64], provenance: Provenance) -> Result<Self> {
        Self::from_flat(1, values.to_vec(), provenance)
    }

    pub fn push(&mut self, point: &[f64]) -> Result<()> {
        if point.len() != self.dim {
            return Err(Error::InvalidInput(format!(
                "point has {} coordinates, expected {}",
                point.len(),
                self.dim
            )));
        }
        if let Some(bad) = point.iter().find(|c| !(0.0..=1.0).contains(*c)) {
            return Err(Error::InvalidInput(format!("coordinate {bad} outside [0, 1]")));
        }
        self.coords.extend_from_slice(point);
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn set_provenance(&mut self, provenance: Provenance) {
        self.provenance = provenance;
    }

    /// The `i`-th point (0-based).
    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.coords.chunks_exact(self.dim)
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    /// Coordinates of a one-dimensional set, in sequence order.
    pub fn values(&self) -> Result<&[f64]> {
        if self.dim != 1 {
            return Err(Error::UnsupportedDimension(self.dim));
        }
        Ok(&self.coords)
    }

    /// The first `n` points as a new set.
    pub fn prefix(&self, n: usize) -> Result<PointSet> {
        if n > self.len() {
            return Err(Error::InsufficientPoints { needed: n, available: self.len() });
        }
        Ok(PointSet {
            dim: self.dim,
            coords: self.coords[..n * self.dim].to_vec(),
            provenance: self.provenance,
        })
    }

    /// Column `axis` of the set, in sequence order.
    pub fn axis(&self, axis: usize) -> Vec<f64> {
        self.iter().map(|p| p[axis]).collect()
    }
}

/// Reduces `x` into `[0, 1)`.
pub fn wrap_unit(x: f64) -> f64 {
    let y = x.rem_euclid(1.0);
    if y >= 1.0 {
        0.0
    } else {
        y
    }
}

/// Torus distance between two scalars.
pub fn torus_distance(a: f64, b: f64) -> f64 {
    let t = wrap_unit(a - b);
    t.min(1.0 - t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_out_of_range_coordinates() {
        assert!(PointSet::from_values(&[0.5, 1.2], Provenance::File).is_err());
        assert!(PointSet::from_values(&[-0.1], Provenance::File).is_err());
        let set = PointSet::from_values(&[0.5, 1.0], Provenance::File).unwrap();
        assert_eq!(set.values().unwrap(), &[0.5, 1.0]);
    }

    #[test]
    fn flat_construction_checks_shape() {
        assert!(PointSet::from_flat(2, vec![0.1, 0.2, 0.3], Provenance::File).is_err());
        let set = PointSet::from_flat(2, vec![0.1, 0.2, 0.3, 0.4], Provenance::File).unwrap();
        assert_eq!(set.len(), 2);
        assert_eq!(set.point(1), &[0.3, 0.4]);
        assert_eq!(set.axis(0), vec![0.1, 0.3]);
    }

    #[test]
    fn torus_distance_wraps() {
        assert!((torus_distance(0.95, 0.05) - 0.1).abs() < 1e-15);
        assert_eq!(torus_distance(1.0, 0.0), 0.0);
        assert_eq!(wrap_unit(-1e-20), 0.0);
    }
}
