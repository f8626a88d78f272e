#![allow(dead_code)]

use std::sync::Arc;

use latapprox::core::systems::{basis_eval, Target};
use latapprox::core::{Complex64, FrequencySet, Method, TransformKind, WeightFunction};
use rand::Rng;

pub fn random_coeffs(rng: &mut impl Rng, n: usize, real: bool) -> Vec<Complex64> {
    (0..n)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), if real { 0.0 } else { rng.gen_range(-1.0..1.0) }))
        .collect()
}

/// `e^{2πi k·x}`.
pub fn naive_exp(k: &[i64], x: &[f64]) -> Complex64 {
    let t: f64 = k.iter().zip(x).map(|(&a, &b)| a as f64 * b).sum();
    let t = t - t.floor();
    Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * t)
}

/// `Σ c_k φ_k` in the basis of `method`; transformed Fourier targets supply
/// their periodized samples `Σ c_k e^{2πi k·x}` directly.
pub struct Polynomial {
    pub method: Method,
    pub set: Arc<FrequencySet>,
    pub coeffs: Vec<Complex64>,
    pub real: bool,
}

impl Target for Polynomial {
    fn dim(&self) -> usize {
        self.set.dim()
    }
    fn eval(&self, y: &[f64]) -> Complex64 {
        self.set.iter().zip(&self.coeffs).map(|(k, c)| c * basis_eval(&self.method, k, y).unwrap()).sum()
    }
    fn is_real(&self) -> bool {
        self.real
    }
    fn periodized(&self, x: &[f64], _t: &TransformKind, _w: &WeightFunction) -> Option<Complex64> {
        Some(self.set.iter().zip(&self.coeffs).map(|(k, c)| c * naive_exp(k, x)).sum())
    }
}

pub fn max_rel_error(got: &[Complex64], want: &[Complex64]) -> f64 {
    let scale = want.iter().map(|c| c.norm()).fold(0.0, f64::max);
    got.iter().zip(want).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max) / scale
}
