//! Classical low-discrepancy comparison sets.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::point_set::{PointSet, Provenance};

/// Digit reversal of `n` in base `base`, placed after the radix point.
///
/// Digits are accumulated as integers so that `n < base^m` maps exactly
/// onto `j / base^m` whenever `base^m` fits in a `u64`.
pub fn radical_inverse(mut n: u64, base: u32) -> f64 {
    assert!(base >= 2, "radical inverse needs base >= 2");
    let b = base as u64;
    let mut reversed: u64 = 0;
    let mut denom: u64 = 1;
    while n > 0 {
        match denom.checked_mul(b).zip(reversed.checked_mul(b)) {
            Some((d, r)) => {
                reversed = r + n % b;
                denom = d;
                n /= b;
            }
            None => {
                // remaining digits fall below double resolution in this regime
                let mut value = reversed as f64 / denom as f64;
                let mut scale = 1.0 / denom as f64;
                while n > 0 {
                    scale /= base as f64;
                    value += (n % b) as f64 * scale;
                    n /= b;
                }
                return value;
            }
        }
    }
    reversed as f64 / denom as f64
}

/// Halton point with index `n`.
pub fn halton(n: u64, bases: &[u32]) -> Vec<f64> {
    bases.iter().map(|&b| radical_inverse(n, b)).collect()
}

/// Counts from 0 or from 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum IndexOrigin {
    Zero,
    #[default]
    One,
}

impl IndexOrigin {
    pub fn first(self) -> u64 {
        match self {
            IndexOrigin::Zero => 0,
            IndexOrigin::One => 1,
        }
    }

    pub fn from_u64(v: u64) -> Result<Self> {
        match v {
            0 => Ok(IndexOrigin::Zero),
            1 => Ok(IndexOrigin::One),
            _ => Err(Error::InvalidInput(format!("index origin must be 0 or 1, got {v}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum BaselineFamily {
    VanDerCorput { base: u32 },
    Halton { bases: Vec<u32> },
    Hammersley { base: u32 },
    Kronecker { alpha: f64 },
    Equispaced,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaselineSpec {
    pub family: BaselineFamily,
    #[serde(default)]
    pub index_origin: IndexOrigin,
}

impl BaselineSpec {
    pub fn new(family: BaselineFamily) -> Self {
        Self { family, index_origin: IndexOrigin::One }
    }

    pub fn with_origin(mut self, origin: IndexOrigin) -> Self {
        self.index_origin = origin;
        self
    }

    pub fn dimension(&self) -> usize {
        match &self.family {
            BaselineFamily::VanDerCorput { .. } | BaselineFamily::Equispaced => 1,
            BaselineFamily::Halton { bases } => bases.len(),
            BaselineFamily::Hammersley { .. } | BaselineFamily::Kronecker { .. } => 2,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match &self.family {
            BaselineFamily::VanDerCorput { base } | BaselineFamily::Hammersley { base } => check_base(*base),
            BaselineFamily::Halton { bases } => {
                if bases.is_empty() {
                    return Err(Error::InvalidInput("Halton needs at least one base".into()));
                }
                for (i, &a) in bases.iter().enumerate() {
                    check_base(a)?;
                    for &b in &bases[..i] {
                        if gcd(a, b) != 1 {
                            return Err(Error::InvalidInput(format!("bases {b} and {a} are not coprime")));
                        }
                    }
                }
                Ok(())
            }
            BaselineFamily::Kronecker { alpha } => {
                if alpha.is_finite() {
                    Ok(())
                } else {
                    Err(Error::InvalidInput("alpha must be finite".into()))
                }
            }
            BaselineFamily::Equispaced => Ok(()),
        }
    }

    /// The first `count` points of the family.
    pub fn generate(&self, count: usize) -> Result<PointSet> {
        self.validate()?;
        if count == 0 {
            return Err(Error::InvalidInput("count must be positive".into()));
        }
        let o = self.index_origin;
        match &self.family {
            BaselineFamily::VanDerCorput { base } => Ok(van_der_corput(count, *base, o)),
            BaselineFamily::Halton { bases } => Ok(halton_set(count, bases, o)),
            BaselineFamily::Hammersley { base } => Ok(hammersley_set(count, *base, o)),
            BaselineFamily::Kronecker { alpha } => Ok(kronecker_set(count, *alpha, o)),
            BaselineFamily::Equispaced => Ok(equispaced(count)),
        }
    }
}

fn check_base(b: u32) -> Result<()> {
    if b >= 2 {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("base must be >= 2, got {b}")))
    }
}

fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn indices(count: usize, origin: IndexOrigin) -> impl Iterator<Item = u64> {
    let first = origin.first();
    first..first + count as u64
}

fn baseline(dim: usize, coords: Vec<f64>) -> PointSet {
    PointSet::from_flat(dim, coords, Provenance::Baseline).expect("generated coordinates lie in [0, 1]")
}

pub fn van_der_corput(count: usize, base: u32, origin: IndexOrigin) -> PointSet {
    baseline(1, indices(count, origin).map(|n| radical_inverse(n, base)).collect())
}

pub fn halton_set(count: usize, bases: &[u32], origin: IndexOrigin) -> PointSet {
    baseline(bases.len(), indices(count, origin).flat_map(|n| halton(n, bases)).collect())
}

/// `{(n/N, radical_inverse(n, b))}` over the index range.
pub fn hammersley_set(count: usize, base: u32, origin: IndexOrigin) -> PointSet {
    let nf = count as f64;
    baseline(2, indices(count, origin).flat_map(|n| [n as f64 / nf, radical_inverse(n, base)]).collect())
}

/// `{(n/N, frac(alpha n))}` over the index range.
pub fn kronecker_set(count: usize, alpha: f64, origin: IndexOrigin) -> PointSet {
    let nf = count as f64;
    baseline(
        2,
        indices(count, origin)
            .flat_map(|n| {
                let y = alpha * n as f64;
                [n as f64 / nf, y - y.floor()]
            })
            .collect(),
    )
}

/// `{n/N : 1 <= n <= N}`.
pub fn equispaced(count: usize) -> PointSet {
    let nf = count as f64;
    baseline(1, (1..=count).map(|n| n as f64 / nf).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radical_inverse_examples() {
        assert_eq!(radical_inverse(3, 2), 0.75);
        assert_eq!(radical_inverse(4, 2), 0.125);
        assert!((radical_inverse(1, 3) - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(radical_inverse(0, 5), 0.0);
        let big = radical_inverse(u64::MAX, 3);
        assert!((0.0..1.0).contains(&big));
    }

    #[test]
    fn radical_inverse_is_a_bijection_onto_the_grid() {
        for b in [2u32, 3, 5] {
            for m in 1..=8u32 {
                let size = (b as u64).pow(m);
                if size > 400_000 {
                    continue;
                }
                let mut seen = vec![false; size as usize];
                for n in 0..size {
                    let x = radical_inverse(n, b);
                    let j = (x * size as f64).round() as usize;
                    assert_eq!(x, j as f64 / size as f64);
                    assert!(!seen[j]);
                    seen[j] = true;
                }
            }
        }
    }

    #[test]
    fn halton_examples() {
        let p = halton(1, &[2, 3]);
        assert_eq!(p[0], 0.5);
        assert!((p[1] - 1.0 / 3.0).abs() < 1e-15);
        let p = halton(2, &[2, 3]);
        assert_eq!(p[0], 0.25);
        assert!((p[1] - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn hammersley_example() {
        let s = hammersley_set(4, 2, IndexOrigin::One);
        assert_eq!(s.coords(), &[0.25, 0.5, 0.5, 0.25, 0.75, 0.75, 1.0, 0.125]);
        assert_eq!(s.provenance(), Provenance::Baseline);
    }

    #[test]
    fn kronecker_examples() {
        let s = kronecker_set(1, 133f64.sqrt(), IndexOrigin::One);
        assert!((s.point(0)[1] - 0.5325626).abs() < 1e-7);
        let s = kronecker_set(4, 0.5, IndexOrigin::One);
        assert_eq!(s.axis(1), vec![0.5, 0.0, 0.5, 0.0]);
    }

    #[test]
    fn van_der_corput_prefix_is_a_dyadic_grid() {
        for m in 0..10u32 {
            let size = 1usize << m;
            let s = van_der_corput(size, 2, IndexOrigin::Zero);
            let mut v: Vec<f64> = s.values().unwrap().iter().map(|x| x * size as f64).collect();
            v.sort_by(f64::total_cmp);
            assert!(v.iter().enumerate().all(|(k, &x)| x == k as f64));
        }
    }

    #[test]
    fn spec_validation() {
        assert!(BaselineSpec::new(BaselineFamily::Halton { bases: vec![2, 4] }).generate(3).is_err());
        assert!(BaselineSpec::new(BaselineFamily::VanDerCorput { base: 1 }).generate(3).is_err());
        let s = BaselineSpec::new(BaselineFamily::Halton { bases: vec![2, 3, 5] }).generate(7).unwrap();
        assert_eq!((s.dim(), s.len()), (3, 7));
        let a = BaselineSpec::new(BaselineFamily::Kronecker { alpha: 2f64.sqrt() });
        assert_eq!(a.generate(50).unwrap(), a.generate(50).unwrap());
    }
}
