use rayon::prelude::*;

use super::gaps::{arcs_around, Arc};
use super::{canonical, select, GreedyConfig, Placement};
use crate::error::{Error, Result};
use crate::kernels::{EnergyKernel, ProductForm, ProductKernelSpec};
use crate::point_set::{wrap_unit, PointSet};
use crate::search::{convex_by_slope, golden_then_slope};
use crate::weyl::WeylSums;

const MAX_SWEEPS: usize = 64;
const MAX_REFINED: usize = 64;
const COARSE_BRACKET: f64 = 1e-7;

struct Axis {
    values: Vec<f64>,
    arcs: Vec<Arc>,
    /// Unwrapped node coordinate and its arc, `None` when the node is excluded.
    nodes: Vec<Option<(f64, usize)>>,
}

/// Tensor-grid scan of the product energy, then cyclic coordinate refinement
/// of the best node(s).
pub(crate) fn place(
    points: &PointSet,
    spec: &ProductKernelSpec,
    radius: f64,
    config: &GreedyConfig,
) -> Result<Placement> {
    let dim = points.dim();
    let n = points.len();
    let grid = config.grid();
    let factor = spec.factor();

    let mut axes = Vec::with_capacity(dim);
    for j in 0..dim {
        let values: Vec<f64> = points.iter().map(|p| wrap_unit(p[j])).collect();
        let arcs = arcs_around(&values, radius)?;
        let nodes: Vec<Option<(f64, usize)>> = (0..grid)
            .map(|i| {
                let g = (i as f64 + 0.5) / grid as f64;
                arcs.iter().enumerate().find_map(|(a, arc)| arc.locate(g).map(|y| (y, a)))
            })
            .collect();
        if nodes.iter().all(Option::is_none) {
            return Err(Error::NoAdmissibleRegion { radius, points: n });
        }
        axes.push(Axis { values, arcs, nodes });
    }

    // tables[j][i * n + p] = factor at (node i on axis j) - (point p)
    let factor_ref = &factor;
    let tables: Vec<Vec<f64>> = axes
        .iter()
        .map(|axis| {
            axis.nodes
                .par_iter()
                .flat_map_iter(|node| {
                    let y = node.map(|(y, _)| y);
                    axis.values.iter().map(move |&v| match y {
                        Some(y) => factor_ref.eval_or_inf(y - v),
                        None => f64::INFINITY,
                    })
                })
                .collect()
        })
        .collect();

    let total_nodes = grid.checked_pow(dim as u32).ok_or(Error::UnsupportedDimension(dim))?;
    let energies: Vec<f64> = (0..total_nodes)
        .into_par_iter()
        .map(|node| {
            let idx = node_indices(node, grid, dim);
            if idx.iter().zip(&axes).any(|(&i, axis)| axis.nodes[i].is_none()) {
                return f64::INFINITY;
            }
            (0..n)
                .map(|p| idx.iter().enumerate().map(|(j, &i)| tables[j][i * n + p]).product::<f64>())
                .sum()
        })
        .collect();

    let best = energies.iter().copied().fold(f64::INFINITY, f64::min);
    if !best.is_finite() {
        return Err(Error::NoAdmissibleRegion { radius, points: n });
    }
    let threshold = best + config.tie_tolerance * best.abs().max(1.0);
    let starts: Vec<usize> = energies
        .iter()
        .enumerate()
        .filter(|(_, e)| **e <= threshold)
        .map(|(i, _)| i)
        .take(MAX_REFINED)
        .collect();

    let candidates: Vec<Placement> = starts
        .par_iter()
        .map(|&node| {
            let idx = node_indices(node, grid, dim);
            let start: Vec<(f64, usize)> =
                idx.iter().zip(&axes).map(|(&i, axis)| axis.nodes[i].expect("admissible node")).collect();
            refine(points, spec, &factor, &axes, start, grid, config)
        })
        .collect();
    let grid_evals = (total_nodes * n) as u64;
    let mut winner =
        select(candidates, config.tie_tolerance).ok_or(Error::NoAdmissibleRegion { radius, points: n })?;
    winner.evaluations += grid_evals;
    Ok(winner)
}

fn node_indices(mut node: usize, grid: usize, dim: usize) -> Vec<usize> {
    let mut idx = vec![0; dim];
    for slot in idx.iter_mut().rev() {
        *slot = node % grid;
        node /= grid;
    }
    idx
}

fn refine(
    points: &PointSet,
    spec: &ProductKernelSpec,
    factor: &EnergyKernel,
    axes: &[Axis],
    start: Vec<(f64, usize)>,
    grid: usize,
    config: &GreedyConfig,
) -> Placement {
    let dim = axes.len();
    let n = points.len();
    let tol = config.refine_tolerance;
    let half_width = 1.0 / grid as f64;
    let mut x: Vec<f64> = start.iter().map(|s| s.0).collect();
    let arc_of: Vec<usize> = start.iter().map(|s| s.1).collect();
    let mut evaluations = 0u64;
    let mut weights = vec![0.0; n];

    for _ in 0..MAX_SWEEPS {
        let mut moved: f64 = 0.0;
        for j in 0..dim {
            for (p, w) in weights.iter_mut().enumerate() {
                let point = points.point(p);
                *w = (0..dim)
                    .filter(|&i| i != j)
                    .map(|i| factor.eval_or_inf(x[i] - point[i]))
                    .product();
            }
            let arc = axes[j].arcs[arc_of[j]];
            let lo = arc.start.max(x[j] - half_width);
            let hi = arc.end.min(x[j] + half_width);
            let values = &axes[j].values;
            let y = match spec.form {
                ProductForm::LogSin if weights.iter().all(|w| *w > 0.0 && w.is_finite()) => {
                    let sc = |y: f64| {
                        values.iter().zip(&weights).fold((0.0, 0.0), |(s, c), (&v, &w)| {
                            (s + w * factor.slope(y - v), c + w * EnergyKernel::logsin_curvature(y - v))
                        })
                    };
                    let m = convex_by_slope(sc, lo, hi, tol);
                    evaluations += m.evaluations;
                    m.x
                }
                ProductForm::LogSin => {
                    let value = |y: f64| -> f64 {
                        values.iter().zip(&weights).map(|(&v, &w)| w * factor.eval_or_inf(y - v)).sum()
                    };
                    let slope = |y: f64| -> f64 {
                        values.iter().zip(&weights).map(|(&v, &w)| w * factor.slope(y - v)).sum()
                    };
                    let m = golden_then_slope(value, slope, lo, hi, COARSE_BRACKET, tol);
                    evaluations += m.evaluations;
                    m.x
                }
                ProductForm::OnePlusFourier { terms } => {
                    let sums = WeylSums::weighted(values, &weights, terms);
                    let base = sums.total_weight();
                    let coefs: Vec<f64> = (1..=terms).map(|k| 1.0 / k as f64).collect();
                    let m = golden_then_slope(
                        |y| base + sums.cosine_energy(y, &coefs),
                        |y| sums.cosine_slope(y, &coefs),
                        lo,
                        hi,
                        COARSE_BRACKET,
                        tol,
                    );
                    evaluations += m.evaluations;
                    m.x
                }
            };
            moved = moved.max((y - x[j]).abs());
            x[j] = y;
        }
        if moved < tol {
            break;
        }
    }

    let point: Vec<f64> = x.iter().map(|&c| canonical(c, tol)).collect();
    let energy = points
        .iter()
        .map(|p| p.iter().zip(&point).map(|(a, b)| factor.eval_or_inf(b - a)).product::<f64>())
        .sum();
    Placement { point, energy, evaluations: evaluations + 1 }
}
