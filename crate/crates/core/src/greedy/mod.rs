//! Greedy construction: each new point minimizes the total pair energy
//! against the existing prefix, subject to an exclusion radius
//! `r_N = max(N^-l, floor)` around occupied sites (per axis when `d >= 2`).
//!
//! Ties are broken by taking the lexicographically smallest point among the
//! candidates whose energy is within the tie tolerance of the best one, so a
//! run is a pure function of its initial set and configuration.

mod gaps;
mod multi_dim;
mod one_dim;

pub use gaps::{admissible_gaps, Arc};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernels::{eval_truncated_fourier, EnergyKernel, Kernel};
use crate::point_set::{torus_distance, wrap_unit, PointSet, Provenance};
use crate::weyl::WeylSums;

/// How the Fourier truncation order follows the step index `N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FourierTermsRule {
    /// Keep the order stored in the kernel.
    Fixed,
    /// `M = N`.
    EqualN,
    /// `M = c N`.
    Multiple(usize),
}

impl FourierTermsRule {
    pub fn terms(&self, step: usize, fixed: usize) -> usize {
        match *self {
            FourierTermsRule::Fixed => fixed,
            FourierTermsRule::EqualN => step,
            FourierTermsRule::Multiple(c) => c * step,
        }
        .max(1)
    }
}

/// Evaluation strategy for finite cosine-series energies in one dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Engine {
    /// Sum the kernel over every prefix point.
    Direct,
    /// Read the energy off incrementally maintained Weyl sums.
    Spectral,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GreedyConfig {
    pub kernel: Kernel,
    pub exclusion_exponent: u32,
    pub exclusion_floor: f64,
    pub fourier_terms: FourierTermsRule,
    /// Samples per axis; `None` picks a default from the dimension.
    pub grid_per_axis: Option<usize>,
    pub refine_tolerance: f64,
    /// Relative energy tolerance under which candidates count as tied.
    pub tie_tolerance: f64,
    pub engine: Engine,
    /// Certificate truncation orders recorded per 1D step, as multiples of `N`.
    pub certificate_multipliers: Vec<usize>,
}

impl GreedyConfig {
    pub fn new(kernel: impl Into<Kernel>) -> Self {
        Self {
            kernel: kernel.into(),
            exclusion_exponent: 10,
            exclusion_floor: 1e-15,
            fourier_terms: FourierTermsRule::EqualN,
            grid_per_axis: None,
            refine_tolerance: 1e-12,
            tie_tolerance: 1e-12,
            engine: Engine::Direct,
            certificate_multipliers: vec![1, 10, 100],
        }
    }

    pub fn with_engine(mut self, engine: Engine) -> Self {
        self.engine = engine;
        self
    }

    pub fn with_fourier_terms(mut self, rule: FourierTermsRule) -> Self {
        self.fourier_terms = rule;
        self
    }

    pub fn with_grid(mut self, grid: usize) -> Self {
        self.grid_per_axis = Some(grid);
        self
    }

    pub fn with_certificates(mut self, multipliers: Vec<usize>) -> Self {
        self.certificate_multipliers = multipliers;
        self
    }

    /// Exclusion radius when placing the `step`-th point.
    pub fn exclusion_radius(&self, step: usize) -> f64 {
        let exponent = i32::try_from(self.exclusion_exponent).unwrap_or(i32::MAX);
        (step as f64).powi(-exponent).max(self.exclusion_floor)
    }

    pub fn grid(&self) -> usize {
        self.grid_per_axis.unwrap_or(match self.kernel.dimension() {
            1 => 4096,
            2 => 64,
            3 => 32,
            _ => 16,
        })
    }

    /// The kernel with its Fourier order set for the `step`-th point.
    pub fn kernel_for_step(&self, step: usize) -> Kernel {
        match self.kernel.fourier_terms() {
            Some(fixed) if self.kernel.has_fourier_terms() => {
                self.kernel.with_terms(self.fourier_terms.terms(step, fixed))
            }
            _ => self.kernel.clone(),
        }
    }

    fn validate(&self) -> Result<()> {
        let positive = |v: f64| v.is_finite() && v > 0.0;
        if self.exclusion_exponent == 0 {
            return Err(Error::InvalidInput("exclusion exponent must be positive".into()));
        }
        if !positive(self.exclusion_floor)
            || !positive(self.refine_tolerance)
            || !(self.tie_tolerance.is_finite() && self.tie_tolerance >= 0.0)
        {
            return Err(Error::InvalidInput("tolerances must be positive and finite".into()));
        }
        if self.grid() < 2 {
            return Err(Error::InvalidInput("grid needs at least two samples per axis".into()));
        }
        if let FourierTermsRule::Multiple(0) = self.fourier_terms {
            return Err(Error::InvalidInput("Fourier multiple must be positive".into()));
        }
        if self.certificate_multipliers.contains(&0) {
            return Err(Error::InvalidInput("certificate multipliers must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Lemma3Value {
    pub multiplier: usize,
    pub terms: usize,
    pub sum: f64,
}

/// Audit trail of one greedy step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    /// 1-based sequence index of the new point.
    pub index: usize,
    pub point: Vec<f64>,
    /// Minimum total energy (kernel offsets included).
    pub energy: f64,
    pub exclusion_radius: f64,
    /// Fourier order used by the energy, if the kernel has one.
    pub fourier_terms: Option<usize>,
    /// `sum_n sum_{k<=M} cos(2 pi k (x - x_n))/k` at `M = multiplier * index` (1D only).
    #[serde(default)]
    pub lemma3: Vec<Lemma3Value>,
    /// `sum_n prod_j (1 + sum_{k<=N} cos(2 pi k (x_j - x_{n,j}))/k)` (d >= 2 only).
    #[serde(default)]
    pub theorem3: Option<f64>,
    /// Smallest torus distance to an earlier point (per axis when d >= 2).
    pub min_distance: f64,
    pub evaluations: u64,
}

/// Where a step ended up, before bookkeeping.
#[derive(Debug, Clone)]
pub(crate) struct Placement {
    pub point: Vec<f64>,
    pub energy: f64,
    pub evaluations: u64,
}

/// Stateful sequence builder.
#[derive(Debug, Clone)]
pub struct GreedyBuilder {
    config: GreedyConfig,
    points: PointSet,
    reduced: Vec<f64>,
    records: Vec<StepRecord>,
    weyl: Option<WeylSums>,
}

impl GreedyBuilder {
    pub fn new(initial: PointSet, config: GreedyConfig) -> Result<Self> {
        config.validate()?;
        if initial.is_empty() {
            return Err(Error::EmptySet);
        }
        if initial.dim() != config.kernel.dimension() {
            return Err(Error::InvalidInput(format!(
                "kernel dimension {} does not match point dimension {}",
                config.kernel.dimension(),
                initial.dim()
            )));
        }
        let reduced: Vec<f64> = initial.coords().iter().map(|&c| wrap_unit(c)).collect();
        let weyl = matches!(config.kernel, Kernel::Scalar(_)).then(|| {
            let mut w = WeylSums::new();
            for &x in &reduced {
                w.push(x);
            }
            w
        });
        Ok(Self { config, points: initial, reduced, records: Vec::new(), weyl })
    }

    pub fn config(&self) -> &GreedyConfig {
        &self.config
    }

    pub fn points(&self) -> &PointSet {
        &self.points
    }

    pub fn records(&self) -> &[StepRecord] {
        &self.records
    }

    pub fn finish(self) -> (PointSet, Vec<StepRecord>) {
        (self.points, self.records)
    }

    /// Places one more point.
    pub fn step(&mut self) -> Result<&StepRecord> {
        let step = self.points.len() + 1;
        let radius = self.config.exclusion_radius(step);
        let kernel = self.config.kernel_for_step(step);
        let record = match &kernel {
            Kernel::Scalar(k) => {
                let terms = k.terms();
                let max_mult = self.config.certificate_multipliers.iter().copied().max().unwrap_or(0);
                let need = (max_mult * step).max(terms.unwrap_or(0));
                let weyl = self.weyl.as_mut().expect("scalar kernels keep Weyl sums");
                weyl.extend_to(need);
                let spectral = (self.config.engine == Engine::Spectral).then_some(&*weyl);
                let placed = one_dim::place(&self.reduced, k, radius, &self.config, spectral)?;
                let x = placed.point[0];
                let lemma3 = self
                    .config
                    .certificate_multipliers
                    .iter()
                    .map(|&multiplier| {
                        let terms = multiplier * step;
                        Lemma3Value { multiplier, terms, sum: weyl.harmonic_energy(x, terms) }
                    })
                    .collect();
                let min_distance = self
                    .reduced
                    .iter()
                    .map(|&v| torus_distance(x, v))
                    .fold(f64::INFINITY, f64::min);
                weyl.push(x);
                StepRecord {
                    index: step,
                    point: placed.point,
                    energy: placed.energy,
                    exclusion_radius: radius,
                    fourier_terms: terms.filter(|_| kernel.has_fourier_terms()),
                    lemma3,
                    theorem3: None,
                    min_distance,
                    evaluations: placed.evaluations,
                }
            }
            Kernel::Product(spec) => {
                let placed = multi_dim::place(&self.points, spec, radius, &self.config)?;
                let terms = kernel.fourier_terms().unwrap_or(step);
                let theorem3 = product_condition(&self.points, &placed.point, terms);
                let min_distance = self
                    .points
                    .iter()
                    .flat_map(|p| p.iter().zip(&placed.point).map(|(a, b)| torus_distance(*a, *b)))
                    .fold(f64::INFINITY, f64::min);
                StepRecord {
                    index: step,
                    point: placed.point,
                    energy: placed.energy,
                    exclusion_radius: radius,
                    fourier_terms: kernel.fourier_terms(),
                    lemma3: Vec::new(),
                    theorem3: Some(theorem3),
                    min_distance,
                    evaluations: placed.evaluations,
                }
            }
        };
        self.points.push(&record.point)?;
        self.reduced.extend(record.point.iter().map(|&c| wrap_unit(c)));
        self.records.push(record);
        Ok(self.records.last().expect("just pushed"))
    }

    /// Steps until the set holds `target` points.
    pub fn run_to(&mut self, target: usize) -> Result<()> {
        while self.points.len() < target {
            self.step()?;
        }
        Ok(())
    }
}

/// `sum_n prod_j (1 + sum_{k<=M} cos(2 pi k (x_j - x_{n,j}))/k)`.
pub(crate) fn product_condition(points: &PointSet, x: &[f64], terms: usize) -> f64 {
    points
        .iter()
        .map(|p| {
            p.iter()
                .zip(x)
                .map(|(a, b)| 1.0 + eval_truncated_fourier(b - a, terms))
                .product::<f64>()
        })
        .sum()
}

/// Picks the winner among `(point, energy)` candidates: lowest energy, ties
/// (within `tie_tolerance` relative) resolved to the lexicographically smallest point.
pub(crate) fn select(candidates: Vec<Placement>, tie_tolerance: f64) -> Option<Placement> {
    let best = candidates
        .iter()
        .map(|c| c.energy)
        .filter(|e| e.is_finite())
        .fold(f64::INFINITY, f64::min);
    if !best.is_finite() {
        return None;
    }
    let threshold = best + tie_tolerance * best.abs().max(1.0);
    let evaluations: u64 = candidates.iter().map(|c| c.evaluations).sum();
    candidates
        .into_iter()
        .filter(|c| c.energy <= threshold)
        .min_by(|a, b| lexicographic(&a.point, &b.point))
        .map(|mut c| {
            c.evaluations = evaluations;
            c
        })
}

fn lexicographic(a: &[f64], b: &[f64]) -> std::cmp::Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or(std::cmp::Ordering::Equal)
}

/// Reduces into `[0, 1)`, snapping values within `tol` below 1 to 0.
pub(crate) fn canonical(x: f64, tol: f64) -> f64 {
    let y = wrap_unit(x);
    if 1.0 - y <= tol {
        0.0
    } else {
        y
    }
}

/// Admissible minimizer `(x, energy)` of a scalar kernel against `values`.
pub(crate) fn minimize_scalar(
    values: &[f64],
    kernel: &EnergyKernel,
    radius: f64,
    config: &GreedyConfig,
) -> Result<(f64, f64)> {
    let reduced: Vec<f64> = values.iter().map(|&v| wrap_unit(v)).collect();
    let placed = one_dim::place(&reduced, kernel, radius, config, None)?;
    Ok((placed.point[0], placed.energy))
}

/// Computes the next point of a one-dimensional sequence.
pub fn next_point_1d(points: &PointSet, config: &GreedyConfig) -> Result<(f64, StepRecord)> {
    if points.dim() != 1 || !matches!(config.kernel, Kernel::Scalar(_)) {
        return Err(Error::UnsupportedDimension(points.dim()));
    }
    let mut builder = GreedyBuilder::new(points.clone(), config.clone())?;
    let record = builder.step()?.clone();
    Ok((record.point[0], record))
}

/// Computes the next point for a product kernel (any dimension, usually `d >= 2`).
pub fn next_point_dd(points: &PointSet, config: &GreedyConfig) -> Result<(Vec<f64>, StepRecord)> {
    if !matches!(config.kernel, Kernel::Product(_)) {
        return Err(Error::InvalidInput("next_point_dd needs a product kernel".into()));
    }
    let mut builder = GreedyBuilder::new(points.clone(), config.clone())?;
    let record = builder.step()?.clone();
    Ok((record.point.clone(), record))
}

/// Extends `initial` greedily to `target` points.
pub fn build_sequence(
    initial: &PointSet,
    target: usize,
    config: &GreedyConfig,
) -> Result<(PointSet, Vec<StepRecord>)> {
    if target < initial.len() {
        return Err(Error::InvalidInput(format!(
            "target {target} is smaller than the initial set ({})",
            initial.len()
        )));
    }
    let mut builder = GreedyBuilder::new(initial.clone(), config.clone())?;
    builder.run_to(target)?;
    let (mut points, records) = builder.finish();
    if !records.is_empty() {
        points.set_provenance(Provenance::Greedy);
    }
    Ok((points, records))
}
