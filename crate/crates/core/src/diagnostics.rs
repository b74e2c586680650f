//! Per-step certificates and discrepancy-growth scans.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::discrepancy::{star_disc_1d, star_disc_dd, xn_embed};
use crate::error::{Error, Result};
use crate::greedy::{build_sequence, minimize_scalar, product_condition, GreedyConfig, StepRecord};
use crate::kernels::{eval_truncated_fourier, EnergyKernel};
use crate::point_set::PointSet;
use crate::weyl::WeylSums;

/// `sum_n sum_{k<=M} cos(2 pi k (x - x_n)) / k` for a one-dimensional set.
pub fn lemma3_negativity(points: &PointSet, x: f64, terms: usize) -> Result<f64> {
    let values = points.values()?;
    if terms == 0 {
        return Err(Error::InvalidInput("M must be positive".into()));
    }
    Ok(values.iter().map(|&v| eval_truncated_fourier(x - v, terms)).sum())
}

/// Harmonic sums of each point against its prefix, with `M = multiplier * n`.
pub fn lemma3_sweep(sequence: &PointSet, first_step: usize, multiplier: usize) -> Result<Vec<(usize, f64)>> {
    let values = sequence.values()?;
    if multiplier == 0 {
        return Err(Error::InvalidInput("multiplier must be positive".into()));
    }
    let start = first_step.max(2);
    let mut weyl = WeylSums::from_values(&values[..(start - 1).min(values.len())], multiplier * values.len());
    let mut out = Vec::new();
    for n in start..=values.len() {
        let x = values[n - 1];
        out.push((n, weyl.harmonic_energy(x, multiplier * n)));
        weyl.push(x);
    }
    Ok(out)
}

/// Recorded harmonic sums checked against a gate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Lemma3Summary {
    pub multiplier: usize,
    pub checked: usize,
    pub violations: Vec<usize>,
    pub worst: f64,
}

impl Lemma3Summary {
    pub fn from_records(records: &[StepRecord], multiplier: usize, first_step: usize, gate: f64) -> Self {
        let mut summary = Self { multiplier, checked: 0, violations: Vec::new(), worst: f64::NEG_INFINITY };
        for r in records.iter().filter(|r| r.index >= first_step) {
            if let Some(v) = r.lemma3.iter().find(|v| v.multiplier == multiplier) {
                summary.checked += 1;
                summary.worst = summary.worst.max(v.sum);
                if v.sum > gate {
                    summary.violations.push(r.index);
                }
            }
        }
        summary
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Product-kernel condition value with both candidate thresholds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Theorem3Check {
    pub value: f64,
    pub prior_points: usize,
    /// `value <= 1`.
    pub within_unit: bool,
    /// `value <= N - 1`, the number of earlier points.
    pub within_prior_count: bool,
}

pub fn theorem3_condition(points: &PointSet, x: &[f64], terms: usize) -> Result<Theorem3Check> {
    if x.len() != points.dim() {
        return Err(Error::InvalidInput(format!(
            "candidate has {} coordinates, set has dimension {}",
            x.len(),
            points.dim()
        )));
    }
    if terms == 0 {
        return Err(Error::InvalidInput("M must be positive".into()));
    }
    let value = product_condition(points, x, terms);
    Ok(Theorem3Check {
        value,
        prior_points: points.len(),
        within_unit: value <= 1.0,
        within_prior_count: value <= points.len() as f64,
    })
}

/// Admissible minimizer of `sum_n -ln(2 sin(pi |x - x_n|))` and its value.
pub fn min_energy_report(points: &PointSet, radius: f64) -> Result<(f64, f64)> {
    let values = points.values()?;
    let kernel = EnergyKernel::log_sin_with_offset(0.0);
    let config = GreedyConfig::new(kernel.clone());
    minimize_scalar(values, &kernel, radius, &config)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub n: usize,
    /// Star discrepancy of the index embedding (1D) or of the prefix (d >= 2).
    pub discrepancy: f64,
    /// One-dimensional star discrepancy of the prefix itself.
    pub prefix_discrepancy: Option<f64>,
    /// `D N / (ln N)^d`.
    pub log_ratio: f64,
    /// `D sqrt(N) / ln N`.
    pub sqrt_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanReport {
    pub dim: usize,
    pub rows: Vec<ScanRow>,
    pub max_log_ratio: f64,
    pub max_sqrt_ratio: f64,
}

/// Builds the sequence to `n_max` and scans it.
pub fn conjecture_scan(initial: &PointSet, n_max: usize, config: &GreedyConfig, stride: usize) -> Result<ScanReport> {
    if n_max <= initial.len() {
        return Err(Error::InvalidInput(format!(
            "N_max {n_max} must exceed the initial count {}",
            initial.len()
        )));
    }
    let (sequence, _) = build_sequence(initial, n_max, config)?;
    scan_sequence(&sequence, stride, n_max)
}

/// Scans an existing sequence at `N = stride, 2 stride, ...` up to `n_max`, skipping `N < 2`.
pub fn scan_sequence(sequence: &PointSet, stride: usize, n_max: usize) -> Result<ScanReport> {
    if stride == 0 {
        return Err(Error::InvalidInput("stride must be positive".into()));
    }
    if sequence.len() < n_max {
        return Err(Error::InsufficientPoints { needed: n_max, available: sequence.len() });
    }
    let dim = sequence.dim();
    let ns: Vec<usize> = (stride..=n_max).step_by(stride).filter(|&n| n >= 2).collect();
    let rows = ns
        .par_iter()
        .map(|&n| scan_row(sequence, n))
        .collect::<Result<Vec<_>>>()?;
    let max_log_ratio = rows.iter().map(|r| r.log_ratio).fold(0.0, f64::max);
    let max_sqrt_ratio = rows.iter().map(|r| r.sqrt_ratio).fold(0.0, f64::max);
    Ok(ScanReport { dim, rows, max_log_ratio, max_sqrt_ratio })
}

fn scan_row(sequence: &PointSet, n: usize) -> Result<ScanRow> {
    let dim = sequence.dim();
    let prefix = sequence.prefix(n)?;
    let (discrepancy, prefix_discrepancy) = if dim == 1 {
        let d = star_disc_dd(&xn_embed(sequence, n)?)?.value;
        (d, Some(star_disc_1d(&prefix)?.value))
    } else {
        (star_disc_dd(&prefix)?.value, None)
    };
    let nf = n as f64;
    let ln = nf.ln();
    Ok(ScanRow {
        n,
        discrepancy,
        prefix_discrepancy,
        log_ratio: discrepancy * nf / ln.powi(dim as i32),
        sqrt_ratio: discrepancy * nf.sqrt() / ln,
    })
}

/// True iff indices `2^(j-1)+1 ..= 2^j` hold the odd multiples of `2^-j`
/// for every `2 <= j <= depth`, and indices 1..2 hold `{1/2, 1}` with `0 == 1`.
pub fn dyadic_block_check(sequence: &PointSet, depth: u32, tol: f64) -> Result<bool> {
    let values = sequence.values()?;
    if depth == 0 || depth >= 63 {
        return Err(Error::InvalidInput(format!("depth must be in 1..63, got {depth}")));
    }
    let needed = 1usize << depth;
    if values.len() < needed {
        return Err(Error::InsufficientPoints { needed, available: values.len() });
    }
    let matches = |got: &[f64], expected: &[f64]| {
        let mut got = got.to_vec();
        got.sort_by(f64::total_cmp);
        got.iter().zip(expected).all(|(a, b)| (a - b).abs() <= tol)
    };
    let seed: Vec<f64> = values[..2].iter().map(|&v| if v.abs() <= tol { 1.0 } else { v }).collect();
    if !matches(&seed, &[0.5, 1.0]) {
        return Ok(false);
    }
    for j in 2..=depth {
        let lo = 1usize << (j - 1);
        let hi = 1usize << j;
        let expected: Vec<f64> = (0..lo).map(|i| (2 * i + 1) as f64 / hi as f64).collect();
        if !matches(&values[lo..hi], &expected) {
            return Ok(false);
        }
    }
    Ok(true)
}
