#![allow(dead_code)]

use std::sync::Arc;

use latapprox_core::lattice::{find_reconstructing_lattice, SearchOptions};
use latapprox_core::systems::{basis_eval, Target};
use latapprox_core::{Complex64, FrequencySet, Method, Rank1Lattice, TransformKind, WeightFunction};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_coeffs(rng: &mut impl Rng, n: usize, real: bool) -> Vec<Complex64> {
    (0..n)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), if real { 0.0 } else { rng.gen_range(-1.0..1.0) }))
        .collect()
}

/// `Σ c_k φ_k(y)` for the basis of `method`. For transformed Fourier the
/// periodized samples `Σ c_k e^{2πi k·x}` are supplied directly unless
/// `black_box` is set: `φ_k` carries the unbounded factor `√(ϱ/ω)`, and
/// `ψ^{-1}(ψ(x))` loses digits where `ψ` flattens out near the boundary.
pub struct Polynomial {
    pub method: Method,
    pub set: Arc<FrequencySet>,
    pub coeffs: Vec<Complex64>,
    pub real: bool,
    pub black_box: bool,
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
        if self.black_box {
            return None;
        }
        Some(self.set.iter().zip(&self.coeffs).map(|(k, c)| c * naive_exp(k, x)).sum())
    }
}

/// `e^{2πi k·x}`.
pub fn naive_exp(k: &[i64], x: &[f64]) -> Complex64 {
    let t: f64 = k.iter().zip(x).map(|(&a, &b)| a as f64 * b).sum();
    let t = t - t.floor();
    Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * t)
}

/// A reconstructing lattice for the full cross of level `n`, which also
/// serves the non-negative cross of the cosine and Chebyshev methods.
pub fn lattice_for(n: u64, d: usize, seed: u64) -> Rank1Lattice {
    let full = FrequencySet::hyperbolic_cross(n, d, false).unwrap();
    find_reconstructing_lattice(&full, &SearchOptions::with_seed(seed)).unwrap()
}

pub fn max_rel_error(got: &[Complex64], want: &[Complex64]) -> f64 {
    let scale = want.iter().map(|c| c.norm()).fold(0.0, f64::max);
    got.iter().zip(want).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max) / scale
}

/// Gauss–Legendre nodes and weights on `[0, 1]`.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    (0..n)
        .map(|i| {
            let mut t = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, t);
                for j in 2..=n {
                    let p2 = ((2 * j - 1) as f64 * t * p1 - (j - 1) as f64 * p0) / j as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (t * p1 - p0) / (t * t - 1.0);
                let step = p1 / dp;
                t -= step;
                if step.abs() < 1e-16 {
                    break;
                }
            }
            ((1.0 - t) / 2.0, 1.0 / ((1.0 - t * t) * dp * dp))
        })
        .collect()
}

/// Composite Gauss–Legendre rule for `f` on `[a, b]`.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize, rule: &[(f64, f64)]) -> f64 {
    let h = (b - a) / panels as f64;
    (0..panels)
        .map(|p| {
            let lo = a + p as f64 * h;
            rule.iter().map(|&(t, w)| w * f(lo + t * h)).sum::<f64>() * h
        })
        .sum()
}
