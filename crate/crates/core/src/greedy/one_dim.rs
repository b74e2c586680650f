use rayon::prelude::*;

use super::gaps::{arcs_around, Arc};
use super::{canonical, select, GreedyConfig, Placement};
use crate::error::{Error, Result};
use crate::kernels::EnergyKernel;
use crate::search::{convex_by_slope, golden_then_slope};
use crate::weyl::WeylSums;

/// Golden-section stops here and hands over to slope bisection.
const COARSE_BRACKET: f64 = 1e-7;

/// Total energy of a position against the (reduced) prefix.
enum Energy<'a> {
    Direct { kernel: &'a EnergyKernel, values: &'a [f64] },
    Spectral { offset_total: f64, coefs: Vec<f64>, weyl: &'a WeylSums },
}

impl Energy<'_> {
    fn value(&self, x: f64) -> f64 {
        match self {
            Energy::Direct { kernel, values } => values.iter().map(|&v| kernel.eval_or_inf(x - v)).sum(),
            Energy::Spectral { offset_total, coefs, weyl } => offset_total + weyl.cosine_energy(x, coefs),
        }
    }

    fn slope(&self, x: f64) -> f64 {
        match self {
            Energy::Direct { kernel, values } => values.iter().map(|&v| kernel.slope(x - v)).sum(),
            Energy::Spectral { coefs, weyl, .. } => weyl.cosine_slope(x, coefs),
        }
    }
}

/// Minimizes the energy of `kernel` against `values` (already reduced mod 1)
/// over the complement of the `radius`-neighbourhoods of the points.
pub(crate) fn place(
    values: &[f64],
    kernel: &EnergyKernel,
    radius: f64,
    config: &GreedyConfig,
    spectral: Option<&WeylSums>,
) -> Result<Placement> {
    let arcs = arcs_around(values, radius)?;
    let winner = if kernel.is_singular() {
        convex_gaps(values, kernel, &arcs, config)
    } else {
        let energy = match spectral {
            Some(weyl) => Energy::Spectral {
                offset_total: kernel.offset * values.len() as f64,
                coefs: kernel.spectral_coefficients().expect("finite kernel"),
                weyl,
            },
            None => Energy::Direct { kernel, values },
        };
        sampled_gaps(&energy, kernel, values.len(), &arcs, config)
    };
    winner.ok_or(Error::NoAdmissibleRegion { radius, points: values.len() })
}

/// The log-sine energy is strictly convex between consecutive points, so
/// each gap holds exactly one minimum.
fn convex_gaps(values: &[f64], kernel: &EnergyKernel, arcs: &[Arc], config: &GreedyConfig) -> Option<Placement> {
    let tol = config.refine_tolerance;
    let candidates: Vec<Placement> = arcs
        .par_iter()
        .map(|arc| {
            let slope_curvature = |x: f64| {
                values.iter().fold((0.0, 0.0), |(s, c), &v| {
                    (s + kernel.slope(x - v), c + EnergyKernel::logsin_curvature(x - v))
                })
            };
            let m = convex_by_slope(slope_curvature, arc.start, arc.end, tol);
            let x = canonical(m.x, tol);
            let energy = values.iter().map(|&v| kernel.eval_or_inf(x - v)).sum();
            Placement { point: vec![x], energy, evaluations: m.evaluations + 1 }
        })
        .collect();
    select(candidates, config.tie_tolerance)
}

/// Grid scan followed by refinement around every grid-local minimum.
fn sampled_gaps(
    energy: &Energy<'_>,
    kernel: &EnergyKernel,
    count: usize,
    arcs: &[Arc],
    config: &GreedyConfig,
) -> Option<Placement> {
    let terms = kernel.terms().unwrap_or(1);
    let samples = config.grid().max(16 * terms);
    let grid_values = match energy {
        Energy::Spectral { offset_total, coefs, weyl } => Some(
            weyl.cosine_energy_grid(coefs, samples)
                .into_iter()
                .map(|v| v + offset_total)
                .collect::<Vec<f64>>(),
        ),
        Energy::Direct { .. } => None,
    };

    // |E''| <= count * sum_k c_k (2 pi k)^2 bounds how far a refined
    // minimum can drop below the best nearby sample.
    let curvature_bound = kernel
        .spectral_coefficients()
        .unwrap_or_default()
        .iter()
        .enumerate()
        .map(|(i, c)| c * (2.0 * std::f64::consts::PI * (i + 1) as f64).powi(2))
        .sum::<f64>()
        * count as f64;

    let scans: Vec<Vec<(f64, f64)>> = arcs
        .par_iter()
        .map(|arc| {
            let first = (arc.start * samples as f64).floor() as i64 + 1;
            let last = (arc.end * samples as f64).ceil() as i64 - 1;
            let mut pts = Vec::with_capacity((last - first + 3).max(2) as usize);
            pts.push((arc.start, energy.value(arc.start)));
            for j in first..=last {
                let x = j as f64 / samples as f64;
                if x <= arc.start || x >= arc.end {
                    continue;
                }
                let v = match &grid_values {
                    Some(g) => g[j.rem_euclid(samples as i64) as usize],
                    None => energy.value(x),
                };
                pts.push((x, v));
            }
            pts.push((arc.end, energy.value(arc.end)));
            pts
        })
        .collect();

    let best_sample = scans
        .iter()
        .flatten()
        .map(|p| p.1)
        .fold(f64::INFINITY, f64::min);
    let spacing = 1.0 / samples as f64;
    let slack = 0.5 * curvature_bound * spacing * spacing;

    let brackets: Vec<(f64, f64)> = scans
        .iter()
        .flat_map(|pts| {
            let n = pts.len();
            (0..n).filter_map(move |i| {
                let v = pts[i].1;
                let left_ok = i == 0 || v < pts[i - 1].1;
                let right_ok = i + 1 == n || v <= pts[i + 1].1;
                if !(left_ok && right_ok) || v - slack > best_sample {
                    return None;
                }
                let lo = if i == 0 { pts[0].0 } else { pts[i - 1].0 };
                let hi = if i + 1 == n { pts[n - 1].0 } else { pts[i + 1].0 };
                Some((lo, hi))
            })
        })
        .collect();

    let tol = config.refine_tolerance;
    let sample_evals = scans.iter().map(|p| p.len() as u64).sum::<u64>();
    let mut candidates: Vec<Placement> = brackets
        .par_iter()
        .map(|&(lo, hi)| {
            let m = golden_then_slope(|x| energy.value(x), |x| energy.slope(x), lo, hi, COARSE_BRACKET, tol);
            let x = canonical(m.x, tol);
            Placement { point: vec![x], energy: energy.value(x), evaluations: m.evaluations + 1 }
        })
        .collect();
    if let Some(first) = candidates.first_mut() {
        first.evaluations += sample_evals;
    }
    select(candidates, config.tie_tolerance)
}
