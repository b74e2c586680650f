//! Exponential sums `W_k = sum_n w_n e^{2 pi i k x_n}` and the cosine
//! energies that can be read off them in `O(M)` per evaluation.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

/// `e^{2 pi i k x}` with the phase reduced mod 1 before the trig call.
pub(crate) fn unit_phase(k: usize, x: f64) -> Complex64 {
    let p = k as f64 * x;
    let a = 2.0 * PI * (p - p.floor());
    let (s, c) = a.sin_cos();
    Complex64::new(c, s)
}

/// Weighted exponential sums for frequencies `1..=len()`.
#[derive(Debug, Clone, Default)]
pub struct WeylSums {
    sums: Vec<Complex64>,
    values: Vec<f64>,
    weights: Vec<f64>,
}

impl WeylSums {
    pub fn new() -> Self {
        Self::default()
    }

    /// Unit-weight sums over `values` for `k = 1..=kmax`.
    pub fn from_values(values: &[f64], kmax: usize) -> Self {
        let mut w = Self::new();
        for &x in values {
            w.push(x);
        }
        w.extend_to(kmax);
        w
    }

    pub fn weighted(values: &[f64], weights: &[f64], kmax: usize) -> Self {
        debug_assert_eq!(values.len(), weights.len());
        let mut sums = vec![Complex64::new(0.0, 0.0); kmax];
        for (&x, &w) in values.iter().zip(weights) {
            for (i, s) in sums.iter_mut().enumerate() {
                *s += w * unit_phase(i + 1, x);
            }
        }
        Self { sums, values: values.to_vec(), weights: weights.to_vec() }
    }

    /// Highest frequency held.
    pub fn len(&self) -> usize {
        self.sums.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sums.is_empty()
    }

    pub fn count(&self) -> usize {
        self.values.len()
    }

    /// Total weight, i.e. the `k = 0` sum.
    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn get(&self, k: usize) -> Complex64 {
        self.sums[k - 1]
    }

    /// Adds a unit-weight point to every held frequency.
    pub fn push(&mut self, x: f64) {
        for (i, s) in self.sums.iter_mut().enumerate() {
            *s += unit_phase(i + 1, x);
        }
        self.values.push(x);
        self.weights.push(1.0);
    }

    /// Grows the table to `kmax` frequencies, computing the new ones from the stored points.
    pub fn extend_to(&mut self, kmax: usize) {
        for k in self.sums.len() + 1..=kmax {
            let mut s = Complex64::new(0.0, 0.0);
            for (&x, &w) in self.values.iter().zip(&self.weights) {
                s += w * unit_phase(k, x);
            }
            self.sums.push(s);
        }
    }

    /// `sum_k c_k sum_n w_n cos(2 pi k (x - x_n))` using the first `coefs.len()` frequencies.
    pub fn cosine_energy(&self, x: f64, coefs: &[f64]) -> f64 {
        debug_assert!(coefs.len() <= self.sums.len());
        let mut acc = 0.0;
        for (i, c) in coefs.iter().enumerate().rev() {
            acc += c * (unit_phase(i + 1, x) * self.sums[i].conj()).re;
        }
        acc
    }

    /// Derivative of [`cosine_energy`](Self::cosine_energy) in `x`.
    pub fn cosine_slope(&self, x: f64, coefs: &[f64]) -> f64 {
        debug_assert!(coefs.len() <= self.sums.len());
        let mut acc = 0.0;
        for (i, c) in coefs.iter().enumerate().rev() {
            acc += c * (i + 1) as f64 * (unit_phase(i + 1, x) * self.sums[i].conj()).im;
        }
        -2.0 * PI * acc
    }

    /// `sum_n sum_{k=1}^{terms} w_n cos(2 pi k (x - x_n)) / k`.
    pub fn harmonic_energy(&self, x: f64, terms: usize) -> f64 {
        debug_assert!(terms <= self.sums.len());
        let mut acc = 0.0;
        for k in (1..=terms).rev() {
            acc += (unit_phase(k, x) * self.sums[k - 1].conj()).re / k as f64;
        }
        acc
    }

    /// [`cosine_energy`](Self::cosine_energy) on the grid `j / samples`, via one FFT.
    pub fn cosine_energy_grid(&self, coefs: &[f64], samples: usize) -> Vec<f64> {
        let mut buffer = vec![Complex64::new(0.0, 0.0); samples];
        for (i, c) in coefs.iter().enumerate() {
            buffer[(i + 1) % samples] += c * self.sums[i].conj();
        }
        let mut planner = FftPlanner::<f64>::new();
        planner.plan_fft_inverse(samples).process(&mut buffer);
        buffer.into_iter().map(|z| z.re).collect()
    }
}
