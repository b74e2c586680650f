//! Exact star discrepancy and exponential-sum diagnostics.
//!
//! The supremum over anchored boxes `[0, c]` is attained as a one-sided
//! limit at corners whose coordinates are point coordinates or 1. At each
//! candidate corner both the closed count (`x <= c`) and the open count
//! (`x < c`) are evaluated, giving `closed/N - vol` and `vol - open/N`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::point_set::{PointSet, Provenance};
use crate::weyl::WeylSums;

/// Which one-sided limit attains the supremum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CountingMode {
    /// `#{x <= c} / N - vol(c)`.
    Closed,
    /// `vol(c) - #{x < c} / N`.
    Open,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscrepancyReport {
    pub value: f64,
    pub corner: Vec<f64>,
    pub mode: CountingMode,
    pub n: usize,
    pub dim: usize,
}

impl DiscrepancyReport {
    /// Recomputes the local discrepancy at the witness box.
    pub fn reevaluate(&self, points: &PointSet) -> f64 {
        local_discrepancy(points, &self.corner, self.mode)
    }
}

/// Signed local discrepancy of the anchored box with corner `corner`.
pub fn local_discrepancy(points: &PointSet, corner: &[f64], mode: CountingMode) -> f64 {
    let n = points.len() as f64;
    let vol = corner.iter().product::<f64>();
    match mode {
        CountingMode::Closed => {
            let c = points.iter().filter(|p| p.iter().zip(corner).all(|(x, c)| x <= c)).count();
            c as f64 / n - vol
        }
        CountingMode::Open => {
            let c = points.iter().filter(|p| p.iter().zip(corner).all(|(x, c)| x < c)).count();
            vol - c as f64 / n
        }
    }
}

/// One-dimensional star discrepancy via the sorted-order formula.
pub fn star_disc_1d(points: &PointSet) -> Result<DiscrepancyReport> {
    let values = points.values()?;
    if values.is_empty() {
        return Err(Error::EmptySet);
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mut best = (f64::NEG_INFINITY, 0.0, CountingMode::Closed);
    for (i, &x) in sorted.iter().enumerate() {
        let closed = (i + 1) as f64 / n - x;
        if closed > best.0 {
            best = (closed, x, CountingMode::Closed);
        }
        let open = x - i as f64 / n;
        if open > best.0 {
            best = (open, x, CountingMode::Open);
        }
    }
    Ok(DiscrepancyReport { value: best.0, corner: vec![best.1], mode: best.2, n: sorted.len(), dim: 1 })
}

/// Exact star discrepancy for `d` in `{2, 3}`.
pub fn star_disc_dd(points: &PointSet) -> Result<DiscrepancyReport> {
    if points.is_empty() {
        return Err(Error::EmptySet);
    }
    match points.dim() {
        2 => {
            let pts: Vec<(f64, f64)> = points.iter().map(|p| (p[0], p[1])).collect();
            let xs = candidates(pts.iter().map(|p| p.0));
            let ys = candidates(pts.iter().map(|p| p.1));
            let best = sweep_2d(&pts, &pts, &xs, &ys, points.len(), 1.0);
            Ok(DiscrepancyReport {
                value: best.value,
                corner: vec![best.x, best.y],
                mode: best.mode,
                n: points.len(),
                dim: 2,
            })
        }
        3 => {
            let xs = candidates(points.iter().map(|p| p[0]));
            let ys = candidates(points.iter().map(|p| p[1]));
            let zs = candidates(points.iter().map(|p| p[2]));
            let slices: Vec<(f64, Best)> = zs
                .par_iter()
                .map(|&cz| {
                    let closed: Vec<(f64, f64)> =
                        points.iter().filter(|p| p[2] <= cz).map(|p| (p[0], p[1])).collect();
                    let open: Vec<(f64, f64)> =
                        points.iter().filter(|p| p[2] < cz).map(|p| (p[0], p[1])).collect();
                    (cz, sweep_2d(&closed, &open, &xs, &ys, points.len(), cz))
                })
                .collect();
            let (cz, best) = slices
                .into_iter()
                .reduce(|a, b| if b.1.value > a.1.value { b } else { a })
                .expect("at least the corner 1");
            Ok(DiscrepancyReport {
                value: best.value,
                corner: vec![best.x, best.y, cz],
                mode: best.mode,
                n: points.len(),
                dim: 3,
            })
        }
        d => Err(Error::UnsupportedDimension(d)),
    }
}

/// Star discrepancy for any supported dimension (1, 2 or 3).
pub fn star_discrepancy(points: &PointSet) -> Result<DiscrepancyReport> {
    match points.dim() {
        1 => star_disc_1d(points),
        _ => star_disc_dd(points),
    }
}

fn candidates(coords: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut c: Vec<f64> = coords.chain(std::iter::once(1.0)).collect();
    c.sort_by(f64::total_cmp);
    c.dedup();
    c
}

#[derive(Debug, Clone, Copy)]
struct Best {
    value: f64,
    x: f64,
    y: f64,
    mode: CountingMode,
}

/// Sweep over x-candidates keeping per-y-rank counts; `scale` multiplies the
/// box volume (the z extent in three dimensions).
fn sweep_2d(
    closed: &[(f64, f64)],
    open: &[(f64, f64)],
    xs: &[f64],
    ys: &[f64],
    n: usize,
    scale: f64,
) -> Best {
    let rank = |y: f64| ys.binary_search_by(|c| c.total_cmp(&y)).expect("y is a candidate");
    let sorted = |pts: &[(f64, f64)]| {
        let mut v: Vec<(f64, usize)> = pts.iter().map(|&(x, y)| (x, rank(y))).collect();
        v.sort_by(|a, b| a.0.total_cmp(&b.0));
        v
    };
    let closed = sorted(closed);
    let open = sorted(open);
    let nf = n as f64;
    let mut cl_counts = vec![0usize; ys.len()];
    let mut op_counts = vec![0usize; ys.len()];
    let (mut ci, mut oi) = (0, 0);
    let mut best = Best { value: f64::NEG_INFINITY, x: 1.0, y: 1.0, mode: CountingMode::Closed };
    for &cx in xs {
        while ci < closed.len() && closed[ci].0 <= cx {
            cl_counts[closed[ci].1] += 1;
            ci += 1;
        }
        while oi < open.len() && open[oi].0 < cx {
            op_counts[open[oi].1] += 1;
            oi += 1;
        }
        let (mut cl, mut op) = (0usize, 0usize);
        for (r, &cy) in ys.iter().enumerate() {
            cl += cl_counts[r];
            let vol = cx * cy * scale;
            let closed_val = cl as f64 / nf - vol;
            if closed_val > best.value {
                best = Best { value: closed_val, x: cx, y: cy, mode: CountingMode::Closed };
            }
            let open_val = vol - op as f64 / nf;
            if open_val > best.value {
                best = Best { value: open_val, x: cx, y: cy, mode: CountingMode::Open };
            }
            op += op_counts[r];
        }
    }
    best
}

/// The set `{(n/N, x_n) : 1 <= n <= N}` pairing index and value.
pub fn xn_embed(sequence: &PointSet, n: usize) -> Result<PointSet> {
    let values = sequence.values()?;
    if n == 0 {
        return Err(Error::InvalidInput("embedding needs N >= 1".into()));
    }
    if values.len() < n {
        return Err(Error::InsufficientPoints { needed: n, available: values.len() });
    }
    let coords: Vec<f64> = values[..n]
        .iter()
        .enumerate()
        .flat_map(|(i, &x)| [(i + 1) as f64 / n as f64, x])
        .collect();
    PointSet::from_flat(2, coords, Provenance::File)
}

/// `|sum_n e^{2 pi i k x_n}| / N`.
pub fn weyl_sum(points: &PointSet, k: i64) -> Result<f64> {
    let values = points.values()?;
    if values.is_empty() {
        return Err(Error::EmptySet);
    }
    let k = k.unsigned_abs() as usize;
    if k == 0 {
        return Ok(1.0);
    }
    let s: Complex64 = values.iter().map(|&x| crate::weyl::unit_phase(k, x)).sum();
    Ok((s.norm() / values.len() as f64).min(1.0))
}

/// Normalized Weyl-sum moduli for frequencies `0..=kmax`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeylSumTable {
    pub moduli: Vec<f64>,
}

impl WeylSumTable {
    pub fn new(points: &PointSet, kmax: usize) -> Result<Self> {
        let values = points.values()?;
        if values.is_empty() {
            return Err(Error::EmptySet);
        }
        let n = values.len() as f64;
        let sums = WeylSums::from_values(values, kmax);
        let moduli = std::iter::once(1.0)
            .chain((1..=kmax).map(|k| (sums.get(k).norm() / n).min(1.0)))
            .collect();
        Ok(Self { moduli })
    }

    pub fn get(&self, k: usize) -> f64 {
        self.moduli[k]
    }
}

/// `1/K + sum_{k=1}^{K} |W_k| / (k N)`: the Erdős–Turán bound shape with
/// unit constants. Diagnostic only, not a certified upper bound.
pub fn erdos_turan_diag(points: &PointSet, kmax: usize) -> Result<f64> {
    if kmax == 0 {
        return Err(Error::InvalidInput("K must be positive".into()));
    }
    let table = WeylSumTable::new(points, kmax)?;
    let tail: f64 = (1..=kmax).rev().map(|k| table.get(k) / k as f64).sum();
    Ok(1.0 / kmax as f64 + tail)
}

/// Frequency vectors beyond this count are refused.
pub const KOKSMA_MAX_TERMS: u128 = 10_000_000;

/// `sum_{0 < |k|_inf <= K} |sum_l e^{2 pi i <k, x_l>}| / (N r(2k))` with
/// `r(2k) = prod_j max(1, 2|k_j|)`. Diagnostic only.
pub fn erdos_turan_koksma_diag(points: &PointSet, kmax: usize) -> Result<f64> {
    if points.is_empty() {
        return Err(Error::EmptySet);
    }
    let d = points.dim();
    if d < 2 {
        return Err(Error::UnsupportedDimension(d));
    }
    if kmax == 0 {
        return Err(Error::InvalidInput("K must be positive".into()));
    }
    let side = 2 * kmax as u128 + 1;
    let terms = side.checked_pow(d as u32).unwrap_or(u128::MAX);
    if terms > KOKSMA_MAX_TERMS {
        return Err(Error::CostGuard { terms, limit: KOKSMA_MAX_TERMS });
    }
    let n = points.len() as f64;
    let side = side as usize;
    let k_of = |mut idx: usize| -> Vec<i64> {
        let mut k = vec![0i64; d];
        for slot in k.iter_mut().rev() {
            *slot = (idx % side) as i64 - kmax as i64;
            idx /= side;
        }
        k
    };
    let parts: Vec<f64> = (0..terms as usize)
        .into_par_iter()
        .map(|idx| {
            let k = k_of(idx);
            if k.iter().all(|&c| c == 0) {
                return 0.0;
            }
            let r: f64 = k.iter().map(|&c| (2 * c.unsigned_abs()).max(1) as f64).product();
            let s: Complex64 = points
                .iter()
                .map(|p| {
                    let phase: f64 = k.iter().zip(p).map(|(&c, &x)| c as f64 * x).sum();
                    let a = 2.0 * PI * (phase - phase.floor());
                    Complex64::new(a.cos(), a.sin())
                })
                .sum();
            (s.norm() / n).min(1.0) / r
        })
        .collect();
    Ok(parts.iter().sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn set1(v: &[f64]) -> PointSet {
        PointSet::from_values(v, Provenance::File).unwrap()
    }

    fn set2(v: &[[f64; 2]]) -> PointSet {
        PointSet::from_points(2, v, Provenance::File).unwrap()
    }

    /// Candidate-corner enumeration with an independent triple loop.
    fn naive_dd(points: &PointSet) -> f64 {
        let d = points.dim();
        let mut axes: Vec<Vec<f64>> = (0..d)
            .map(|j| {
                let mut c = points.axis(j);
                c.push(1.0);
                c
            })
            .collect();
        for a in &mut axes {
            a.sort_by(f64::total_cmp);
            a.dedup();
        }
        let n = points.len() as f64;
        let mut best: f64 = 0.0;
        let mut idx = vec![0usize; d];
        loop {
            let corner: Vec<f64> = idx.iter().enumerate().map(|(j, &i)| axes[j][i]).collect();
            let vol: f64 = corner.iter().product();
            let mut closed = 0usize;
            let mut open = 0usize;
            for p in points.iter() {
                let mut le = true;
                let mut lt = true;
                for j in 0..d {
                    le &= p[j] <= corner[j];
                    lt &= p[j] < corner[j];
                }
                closed += le as usize;
                open += lt as usize;
            }
            best = best.max(closed as f64 / n - vol).max(vol - open as f64 / n);
            let mut j = 0;
            loop {
                if j == d {
                    return best;
                }
                idx[j] += 1;
                if idx[j] < axes[j].len() {
                    break;
                }
                idx[j] = 0;
                j += 1;
            }
        }
    }

    #[test]
    fn one_dimensional_examples() {
        assert_eq!(star_disc_1d(&set1(&[0.5])).unwrap().value, 0.5);
        let r = star_disc_1d(&set1(&[0.125, 0.375, 0.625, 0.875])).unwrap();
        assert!((r.value - 0.125).abs() < 1e-15);
        let r = star_disc_1d(&set1(&[0.75, 0.25])).unwrap();
        assert!((r.value - 0.25).abs() < 1e-15);
        assert!(matches!(star_disc_1d(&PointSet::new(1, Provenance::File).unwrap()), Err(Error::EmptySet)));
    }

    #[test]
    fn two_dimensional_single_point() {
        let pts = set2(&[[0.5, 0.5]]);
        let r = star_disc_dd(&pts).unwrap();
        // closed box [0, 0.5]^2 holds the point: 1 - 0.25
        assert!((r.value - 0.75).abs() < 1e-15);
        assert!((r.value - naive_dd(&pts)).abs() < 1e-15);
        assert_eq!(r.mode, CountingMode::Closed);
        assert!((r.reevaluate(&pts) - r.value).abs() < 1e-12);
    }

    #[test]
    fn two_point_embedding_matches_threshold_grid() {
        let pts = set2(&[[0.5, 0.5], [1.0, 0.95]]);
        let exact = star_disc_dd(&pts).unwrap().value;
        let g = 2000;
        let mut grid_best: f64 = 0.0;
        for i in 0..=g {
            for j in 0..=g {
                let c = [i as f64 / g as f64, j as f64 / g as f64];
                let count = pts.iter().filter(|p| p[0] <= c[0] && p[1] <= c[1]).count() as f64;
                grid_best = grid_best.max((count / 2.0 - c[0] * c[1]).abs());
            }
        }
        assert!((exact - grid_best).abs() <= 1e-3, "{exact} vs {grid_best}");
    }

    #[test]
    fn unsupported_dimension() {
        let pts = PointSet::from_flat(4, vec![0.1; 4], Provenance::File).unwrap();
        assert!(matches!(star_disc_dd(&pts), Err(Error::UnsupportedDimension(4))));
    }

    #[test]
    fn sweep_matches_naive_in_two_and_three_dimensions() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for d in [2usize, 3] {
            for _ in 0..20 {
                let n = rng.gen_range(1..=25);
                // coarse values force repeated coordinates
                let coords: Vec<f64> = (0..n * d).map(|_| rng.gen_range(0..=16) as f64 / 16.0).collect();
                let pts = PointSet::from_flat(d, coords, Provenance::File).unwrap();
                let r = star_disc_dd(&pts).unwrap();
                assert!((r.value - naive_dd(&pts)).abs() <= 1e-12);
                assert!((r.reevaluate(&pts) - r.value).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn witness_moves_by_at_most_one_over_n_after_append() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(11);
        for _ in 0..30 {
            let n = rng.gen_range(2..30);
            let coords: Vec<f64> = (0..2 * n).map(|_| rng.gen::<f64>()).collect();
            let mut pts = PointSet::from_flat(2, coords, Provenance::File).unwrap();
            let r = star_disc_dd(&pts).unwrap();
            let before = r.reevaluate(&pts);
            pts.push(&[rng.gen::<f64>(), rng.gen::<f64>()]).unwrap();
            let after = r.reevaluate(&pts);
            assert!((after - before).abs() <= 1.0 / pts.len() as f64 + 1e-15);
        }
    }

    #[test]
    fn embedding() {
        let seq = set1(&[0.5, 0.95]);
        let x = xn_embed(&seq, 2).unwrap();
        assert_eq!(x.coords(), &[0.5, 0.5, 1.0, 0.95]);
        let x = xn_embed(&seq, 1).unwrap();
        assert_eq!(x.coords(), &[1.0, 0.5]);
        assert!(matches!(xn_embed(&seq, 3), Err(Error::InsufficientPoints { .. })));
    }

    #[test]
    fn weyl_sums_of_simple_sets() {
        let eq4 = set1(&[0.25, 0.5, 0.75, 1.0]);
        assert!(weyl_sum(&eq4, 1).unwrap() < 1e-15);
        assert!((weyl_sum(&eq4, 4).unwrap() - 1.0).abs() < 1e-15);
        assert!((weyl_sum(&set1(&[0.5]), 1).unwrap() - 1.0).abs() < 1e-15);
        let table = WeylSumTable::new(&eq4, 8).unwrap();
        assert_eq!(table.get(0), 1.0);
        assert!(table.moduli.iter().all(|m| (0.0..=1.0).contains(m)));
    }

    #[test]
    fn erdos_turan_examples() {
        let n = 10;
        let eq: Vec<f64> = (1..=n).map(|i| i as f64 / n as f64).collect();
        let v = erdos_turan_diag(&set1(&eq), n - 1).unwrap();
        assert!((v - 1.0 / (n - 1) as f64).abs() < 1e-12);
        assert!((erdos_turan_diag(&set1(&[0.5]), 1).unwrap() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn koksma_examples() {
        let single = set2(&[[0.3, 0.7]]);
        assert!((erdos_turan_koksma_diag(&single, 1).unwrap() - 3.0).abs() < 1e-12);
        let copies = set2(&[[0.3, 0.7], [0.3, 0.7], [0.3, 0.7]]);
        for k in 1..4 {
            let a = erdos_turan_koksma_diag(&single, k).unwrap();
            let b = erdos_turan_koksma_diag(&copies, k).unwrap();
            assert!((a - b).abs() < 1e-12);
        }
        assert!(matches!(erdos_turan_koksma_diag(&single, 5000), Err(Error::CostGuard { .. })));
    }

    #[test]
    fn koksma_on_diagonal_only_sees_resonant_frequencies() {
        let n = 8usize;
        let k = 3i64;
        let diag: Vec<[f64; 2]> = (1..=n).map(|i| [i as f64 / n as f64; 2]).collect();
        let got = erdos_turan_koksma_diag(&set2(&diag), k as usize).unwrap();
        let mut expected = 0.0;
        for k1 in -k..=k {
            for k2 in -k..=k {
                if (k1, k2) != (0, 0) && (k1 + k2).rem_euclid(n as i64) == 0 {
                    expected += 1.0 / ((2 * k1.abs()).max(1) * (2 * k2.abs()).max(1)) as f64;
                }
            }
        }
        assert!((got - expected).abs() < 1e-12, "{got} vs {expected}");
    }
}
