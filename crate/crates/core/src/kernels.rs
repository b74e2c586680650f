//! Periodic pair-energy kernels.
//!
//! Every kernel is a one-periodic, even function of the difference between
//! two points on the circle. Three families are supported:
//!
//! * the log-sine kernel `offset - ln(2 sin(pi t))`, singular at `t = 0`;
//! * its Fourier truncation `sum_{k=1}^{M} cos(2 pi k t) / k` (plus offset);
//! * a general cosine series `sum_k c_k cos(2 pi k t)` with `c_k >= 0`.
//!
//! Products of one-dimensional factors give the kernels used on `[0,1)^d`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::point_set::{wrap_unit, PointSet};

/// Distances closer than this to an integer are treated as coincident points.
pub const DEGENERATE_DISTANCE: f64 = 1e-15;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum KernelVariant {
    LogSin,
    TruncatedFourier { terms: usize },
    CosineSeries { coefficients: Vec<f64> },
}

/// A one-periodic symmetric pair energy plus a constant offset per pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyKernel {
    pub variant: KernelVariant,
    pub offset: f64,
}

impl EnergyKernel {
    /// `1 - ln(2 sin(pi t))`.
    pub fn log_sin() -> Self {
        Self::log_sin_with_offset(1.0)
    }

    pub fn log_sin_with_offset(offset: f64) -> Self {
        Self { variant: KernelVariant::LogSin, offset }
    }

    pub fn truncated_fourier(terms: usize) -> Result<Self> {
        if terms == 0 {
            return Err(Error::InvalidInput("Fourier truncation needs at least one term".into()));
        }
        Ok(Self { variant: KernelVariant::TruncatedFourier { terms }, offset: 0.0 })
    }

    /// Cosine series with coefficients `c_1, c_2, ...`; all must be finite and nonnegative.
    pub fn cosine_series(coefficients: Vec<f64>) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(Error::InvalidInput("cosine series needs at least one coefficient".into()));
        }
        if let Some(c) = coefficients.iter().find(|c| !c.is_finite() || **c < 0.0) {
            return Err(Error::InvalidInput(format!("cosine coefficient {c} is not >= 0")));
        }
        Ok(Self { variant: KernelVariant::CosineSeries { coefficients }, offset: 0.0 })
    }

    pub fn with_offset(mut self, offset: f64) -> Self {
        self.offset = offset;
        self
    }

    /// Replaces the truncation order of a Fourier kernel; other variants are returned unchanged.
    pub fn with_terms(&self, terms: usize) -> Self {
        match self.variant {
            KernelVariant::TruncatedFourier { .. } => Self {
                variant: KernelVariant::TruncatedFourier { terms: terms.max(1) },
                offset: self.offset,
            },
            _ => self.clone(),
        }
    }

    pub fn is_singular(&self) -> bool {
        matches!(self.variant, KernelVariant::LogSin)
    }

    /// Number of Fourier modes, `None` for the log-sine kernel.
    pub fn terms(&self) -> Option<usize> {
        match &self.variant {
            KernelVariant::LogSin => None,
            KernelVariant::TruncatedFourier { terms } => Some(*terms),
            KernelVariant::CosineSeries { coefficients } => Some(coefficients.len()),
        }
    }

    /// Cosine coefficients `c_1..c_M` for the finite variants.
    pub fn spectral_coefficients(&self) -> Option<Vec<f64>> {
        match &self.variant {
            KernelVariant::LogSin => None,
            KernelVariant::TruncatedFourier { terms } => {
                Some((1..=*terms).map(|k| 1.0 / k as f64).collect())
            }
            KernelVariant::CosineSeries { coefficients } => Some(coefficients.clone()),
        }
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        match &self.variant {
            KernelVariant::LogSin => eval_logsin(t, self.offset),
            KernelVariant::TruncatedFourier { terms } => {
                Ok(self.offset + eval_truncated_fourier(t, *terms))
            }
            KernelVariant::CosineSeries { coefficients } => {
                Ok(self.offset + eval_cosine_series(t, coefficients))
            }
        }
    }

    /// Like [`eval`](Self::eval) but maps a degenerate distance to `+inf`.
    pub(crate) fn eval_or_inf(&self, t: f64) -> f64 {
        self.eval(t).unwrap_or(f64::INFINITY)
    }

    /// Derivative with respect to `t`.
    pub(crate) fn slope(&self, t: f64) -> f64 {
        let t = wrap_unit(t);
        match &self.variant {
            KernelVariant::LogSin => {
                let (s, c) = (PI * t).sin_cos();
                -PI * c / s
            }
            KernelVariant::TruncatedFourier { terms } => {
                let mut acc = 0.0;
                for k in (1..=*terms).rev() {
                    acc += (2.0 * PI * frac(k as f64 * t)).sin();
                }
                -2.0 * PI * acc
            }
            KernelVariant::CosineSeries { coefficients } => {
                let mut acc = 0.0;
                for (i, c) in coefficients.iter().enumerate().rev() {
                    let k = (i + 1) as f64;
                    acc += c * k * (2.0 * PI * frac(k * t)).sin();
                }
                -2.0 * PI * acc
            }
        }
    }

    /// Second derivative of the log-sine kernel, `pi^2 / sin^2(pi t)`.
    pub(crate) fn logsin_curvature(t: f64) -> f64 {
        let s = (PI * wrap_unit(t)).sin();
        PI * PI / (s * s)
    }
}

fn frac(x: f64) -> f64 {
    x - x.floor()
}

/// Torus-reduced argument in `[0, 1/2]`.
fn fold(t: f64) -> f64 {
    let t = wrap_unit(t);
    t.min(1.0 - t)
}

/// `offset - ln(2 sin(pi t))` for `t` taken mod 1.
pub fn eval_logsin(t: f64, offset: f64) -> Result<f64> {
    let d = fold(t);
    if d < DEGENERATE_DISTANCE {
        return Err(Error::DegenerateDistance { t });
    }
    Ok(offset - (2.0 * (PI * d).sin()).ln())
}

/// `sum_{k=1}^{M} cos(2 pi k t) / k`, accumulated from `k = M` down to `k = 1`.
pub fn eval_truncated_fourier(t: f64, terms: usize) -> f64 {
    let d = fold(t);
    let mut acc = 0.0;
    for k in (1..=terms).rev() {
        acc += (2.0 * PI * frac(k as f64 * d)).cos() / k as f64;
    }
    acc
}

fn eval_cosine_series(t: f64, coefficients: &[f64]) -> f64 {
    let d = fold(t);
    let mut acc = 0.0;
    for (i, c) in coefficients.iter().enumerate().rev() {
        acc += c * (2.0 * PI * frac((i + 1) as f64 * d)).cos();
    }
    acc
}

/// `|(-ln(2 sin(pi t))) - sum_{k<=M} cos(2 pi k t)/k|`, the size of the Fourier tail.
pub fn fourier_tail_residual(t: f64, terms: usize) -> Result<f64> {
    if terms == 0 {
        return Err(Error::InvalidInput("residual needs at least one term".into()));
    }
    let exact = eval_logsin(t, 0.0)?;
    Ok((exact - eval_truncated_fourier(t, terms)).abs())
}

/// Per-axis factor of a product kernel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ProductForm {
    /// Factors `1 + sum_{k<=M} cos(2 pi k t)/k`.
    OnePlusFourier { terms: usize },
    /// Factors `1 - ln(2 sin(pi t))`.
    LogSin,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProductKernelSpec {
    pub form: ProductForm,
    pub dimension: usize,
}

impl ProductKernelSpec {
    pub fn one_plus_fourier(dimension: usize, terms: usize) -> Result<Self> {
        if dimension == 0 || terms == 0 {
            return Err(Error::InvalidInput("dimension and terms must be positive".into()));
        }
        Ok(Self { form: ProductForm::OnePlusFourier { terms }, dimension })
    }

    pub fn log_sin(dimension: usize) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::InvalidInput("dimension must be positive".into()));
        }
        Ok(Self { form: ProductForm::LogSin, dimension })
    }

    /// The scalar kernel used on every axis.
    pub fn factor(&self) -> EnergyKernel {
        match self.form {
            ProductForm::OnePlusFourier { terms } => EnergyKernel {
                variant: KernelVariant::TruncatedFourier { terms },
                offset: 1.0,
            },
            ProductForm::LogSin => EnergyKernel::log_sin(),
        }
    }

    pub fn with_terms(&self, terms: usize) -> Self {
        match self.form {
            ProductForm::OnePlusFourier { .. } => Self {
                form: ProductForm::OnePlusFourier { terms: terms.max(1) },
                dimension: self.dimension,
            },
            ProductForm::LogSin => self.clone(),
        }
    }

    pub fn is_singular(&self) -> bool {
        matches!(self.form, ProductForm::LogSin)
    }
}

/// Product of per-axis factors at the componentwise difference `delta`.
pub fn eval_product(delta: &[f64], spec: &ProductKernelSpec) -> Result<f64> {
    if delta.len() != spec.dimension {
        return Err(Error::InvalidInput(format!(
            "difference has {} components, kernel dimension is {}",
            delta.len(),
            spec.dimension
        )));
    }
    let factor = spec.factor();
    delta.iter().try_fold(1.0, |acc, &t| Ok(acc * factor.eval(t)?))
}

/// Either a scalar kernel (for `d = 1`) or a product kernel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kernel {
    Scalar(EnergyKernel),
    Product(ProductKernelSpec),
}

impl Kernel {
    pub fn dimension(&self) -> usize {
        match self {
            Kernel::Scalar(_) => 1,
            Kernel::Product(spec) => spec.dimension,
        }
    }

    pub fn is_singular(&self) -> bool {
        match self {
            Kernel::Scalar(k) => k.is_singular(),
            Kernel::Product(spec) => spec.is_singular(),
        }
    }

    /// Whether the kernel has a Fourier truncation order that a step rule may set.
    pub fn has_fourier_terms(&self) -> bool {
        matches!(
            self,
            Kernel::Scalar(EnergyKernel { variant: KernelVariant::TruncatedFourier { .. }, .. })
                | Kernel::Product(ProductKernelSpec { form: ProductForm::OnePlusFourier { .. }, .. })
        )
    }

    pub fn fourier_terms(&self) -> Option<usize> {
        match self {
            Kernel::Scalar(k) => k.terms(),
            Kernel::Product(ProductKernelSpec { form: ProductForm::OnePlusFourier { terms }, .. }) => {
                Some(*terms)
            }
            Kernel::Product(_) => None,
        }
    }

    pub fn with_terms(&self, terms: usize) -> Self {
        match self {
            Kernel::Scalar(k) => Kernel::Scalar(k.with_terms(terms)),
            Kernel::Product(spec) => Kernel::Product(spec.with_terms(terms)),
        }
    }

    /// Pair energy at the difference `delta` (length = dimension).
    pub fn eval(&self, delta: &[f64]) -> Result<f64> {
        match self {
            Kernel::Scalar(k) => {
                if delta.len() != 1 {
                    return Err(Error::InvalidInput("scalar kernel needs a 1-component difference".into()));
                }
                k.eval(delta[0])
            }
            Kernel::Product(spec) => eval_product(delta, spec),
        }
    }
}

impl From<EnergyKernel> for Kernel {
    fn from(k: EnergyKernel) -> Self {
        Kernel::Scalar(k)
    }
}

impl From<ProductKernelSpec> for Kernel {
    fn from(spec: ProductKernelSpec) -> Self {
        Kernel::Product(spec)
    }
}

/// Sum of pair energies between `x` and every point of `points`.
pub fn total_energy(x: &[f64], points: &PointSet, kernel: &Kernel) -> Result<f64> {
    if x.len() != points.dim() || kernel.dimension() != points.dim() {
        return Err(Error::InvalidInput(format!(
            "point of dimension {} against set of dimension {} with kernel dimension {}",
            x.len(),
            points.dim(),
            kernel.dimension()
        )));
    }
    let mut delta = vec![0.0; x.len()];
    let mut total = 0.0;
    for p in points.iter() {
        for ((d, a), b) in delta.iter_mut().zip(x).zip(p) {
            *d = a - b;
        }
        total += kernel.eval(&delta)?;
    }
    Ok(total)
}
