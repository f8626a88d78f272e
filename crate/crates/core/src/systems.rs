//! The four approximation pipelines: Fourier on plain lattices, cosine on
//! tent-transformed lattices, Chebyshev on Chebyshev-transformed lattices and
//! transformed Fourier systems on torus-to-cube transformed lattices.
//!
//! All of them sample once per lattice node and run one lattice DFT. The
//! cosine and Chebyshev coefficients are folded out of the Fourier
//! coefficients of `h∘ψ` on the sign-flip closure of the frequency set:
//!
//! ```text
//! c_k = s_k 2^{-||k||_0/2} Σ_{σ} F(σ∘k),   s_k = 1 (cosine), (-1)^{|k|_1} (Chebyshev)
//! ```
//!
//! where `σ` runs over the distinct coordinate sign flips of `k`.

use alloc::sync::Arc;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fourier::{CoefficientVector, LatticeTransform, Verification};
use crate::index_sets::{for_each_flip, FrequencySet};
use crate::lattice::Rank1Lattice;
use crate::math::{acos, cis_turns, cos, sqrt, PI};
use crate::transforms::{TransformKind, Univariate, WeightFunction};

const SQRT2: f64 = core::f64::consts::SQRT_2;

#[derive(Debug, Clone, PartialEq)]
pub enum Method {
    Fourier,
    Cosine,
    Chebyshev,
    TransformedFourier { transform: TransformKind, weight: WeightFunction },
}

impl Method {
    /// Transformed Fourier with `ω ≡ 1`.
    pub fn transformed(transform: TransformKind) -> Self {
        Method::TransformedFourier { transform, weight: WeightFunction::One }
    }

    /// Whether the method works on the non-negative quadrant of the cross.
    pub fn uses_nonneg_set(&self) -> bool {
        matches!(self, Method::Cosine | Method::Chebyshev)
    }

    /// Short name: `four`, `cos`, `cheb`, `log`, `erf` (or `ttc` for mixed transforms).
    pub fn tag(&self) -> &'static str {
        match self {
            Method::Fourier => "four",
            Method::Cosine => "cos",
            Method::Chebyshev => "cheb",
            Method::TransformedFourier { transform, .. } => {
                let c = transform.coords();
                match c[0] {
                    Univariate::Logarithmic { .. } if c.iter().all(|u| matches!(u, Univariate::Logarithmic { .. })) => "log",
                    Univariate::Erf { .. } if c.iter().all(|u| matches!(u, Univariate::Erf { .. })) => "erf",
                    _ => "ttc",
                }
            }
        }
    }

    /// The parameter of an isotropic transformed method.
    pub fn eta(&self) -> Option<f64> {
        match self {
            Method::TransformedFourier { transform, .. } => {
                let e = transform.coords()[0].eta()?;
                transform.coords().iter().all(|u| u.eta() == Some(e)).then_some(e)
            }
            _ => None,
        }
    }

    fn check(&self, set: &FrequencySet) -> Result<()> {
        match self {
            Method::Cosine | Method::Chebyshev if !set.is_nonneg() => {
                Err(Error::InvalidArgument("cosine and Chebyshev methods need non-negative frequencies"))
            }
            Method::TransformedFourier { transform, weight } => {
                if !transform.is_invertible() {
                    return Err(Error::NotInvertible(transform.coords()[0].name()));
                }
                if transform.dim() != set.dim() {
                    return Err(Error::DimensionMismatch { expected: transform.dim(), found: set.dim() });
                }
                if let WeightFunction::DensityOf(t) = weight {
                    if t.dim() != set.dim() {
                        return Err(Error::DimensionMismatch { expected: t.dim(), found: set.dim() });
                    }
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// Maps a torus point to the cube point where `h` is sampled.
    fn node_into(&self, x: &[f64], y: &mut [f64]) {
        match self {
            Method::Fourier => y.copy_from_slice(x),
            Method::Cosine => {
                for (o, &v) in y.iter_mut().zip(x) {
                    *o = Univariate::Tent.forward_unchecked(v);
                }
            }
            Method::Chebyshev => {
                for (o, &v) in y.iter_mut().zip(x) {
                    *o = Univariate::Chebyshev.forward_unchecked(v);
                }
            }
            Method::TransformedFourier { transform, .. } => {
                for ((o, &v), u) in y.iter_mut().zip(x).zip(transform.coords()) {
                    *o = u.forward_unchecked(v);
                }
            }
        }
    }

    /// `∏ √(ω_l(ψ_l(x_l)) ψ'_l(x_l))` for the transformed Fourier method, 1 otherwise.
    ///
    /// On the boundary (and wherever `ψ_l(x_l)` rounds onto 0 or 1) the factor
    /// is 1 when `ω_l` is the density of `ψ_l`, and 0 otherwise.
    fn periodization_factor(&self, x: &[f64], y: &[f64]) -> f64 {
        let Method::TransformedFourier { transform, weight } = self else {
            return 1.0;
        };
        let mut f = 1.0;
        for (l, u) in transform.coords().iter().enumerate() {
            if weight.is_density_of(l, u) {
                continue;
            }
            let (xl, yl) = (x[l], y[l]);
            if xl <= 0.0 || xl >= 1.0 || yl <= 0.0 || yl >= 1.0 {
                return 0.0;
            }
            let w = match weight.coordinate(l, yl) {
                Ok(w) => w,
                Err(_) => return 0.0,
            };
            f *= sqrt(w * u.derivative_unchecked(xl));
        }
        f
    }
}

/// A function on the cube to be approximated.
pub trait Target: Sync {
    fn dim(&self) -> usize;

    fn eval(&self, y: &[f64]) -> Complex64;

    /// Whether `eval` is real-valued; cosine and Chebyshev coefficients are
    /// then returned with zero imaginary part.
    fn is_real(&self) -> bool {
        false
    }

    /// The periodized value `h(ψ(x)) √(ω(ψ(x)) ψ'(x))` at a torus point, for
    /// targets that know it in closed form (needed where `h` itself is
    /// singular on the boundary). `None` falls back to `eval`.
    fn periodized(&self, _x: &[f64], _transform: &TransformKind, _weight: &WeightFunction) -> Option<Complex64> {
        None
    }
}

/// Wraps a closure as a [`Target`].
pub struct FnTarget<F> {
    pub dim: usize,
    pub real: bool,
    pub f: F,
}

impl<F: Fn(&[f64]) -> Complex64 + Sync> Target for FnTarget<F> {
    fn dim(&self) -> usize {
        self.dim
    }
    fn eval(&self, y: &[f64]) -> Complex64 {
        (self.f)(y)
    }
    fn is_real(&self) -> bool {
        self.real
    }
}

/// The value fed to the lattice DFT at torus point `x`.
pub fn node_sample<T: Target + ?Sized>(method: &Method, target: &T, x: &[f64], scratch: &mut [f64]) -> Complex64 {
    if let Method::TransformedFourier { transform, weight } = method {
        if let Some(v) = target.periodized(x, transform, weight) {
            return v;
        }
    }
    method.node_into(x, scratch);
    let f = method.periodization_factor(x, scratch);
    if f == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    target.eval(scratch) * f
}

/// Samples for all nodes `j` in `range` (node order).
pub fn sample_range<T: Target + ?Sized>(
    method: &Method,
    target: &T,
    lattice: &Rank1Lattice,
    range: core::ops::Range<u64>,
    out: &mut [Complex64],
) -> Result<()> {
    let d = lattice.dim();
    let mut x = alloc::vec![0.0; d];
    let mut y = alloc::vec![0.0; d];
    for (j, o) in range.zip(out.iter_mut()) {
        lattice.node_into(j, &mut x);
        let v = node_sample(method, target, &x, &mut y);
        if !v.re.is_finite() || !v.im.is_finite() {
            return Err(Error::NonFiniteSample { node: j as usize });
        }
        *o = v;
    }
    Ok(())
}

/// Samples at every lattice node.
pub fn lattice_samples<T: Target + ?Sized>(method: &Method, target: &T, lattice: &Rank1Lattice) -> Result<Vec<Complex64>> {
    if target.dim() != lattice.dim() {
        return Err(Error::DimensionMismatch { expected: lattice.dim(), found: target.dim() });
    }
    let mut out = alloc::vec![Complex64::new(0.0, 0.0); lattice.size() as usize];
    sample_range(method, target, lattice, 0..lattice.size(), &mut out)?;
    Ok(out)
}

/// The cube points where `h` is sampled, flat in lattice order.
pub fn transformed_lattice_nodes(method: &Method, lattice: &Rank1Lattice) -> Vec<f64> {
    let d = lattice.dim();
    let mut nodes = lattice.nodes();
    let mut y = alloc::vec![0.0; d];
    for row in nodes.chunks_exact_mut(d) {
        method.node_into(row, &mut y);
        row.copy_from_slice(&y);
    }
    nodes
}

/// One univariate basis factor for frequency `k` at cube coordinate `y`
/// (without the `√(ϱ/ω)` scale of the transformed system).
fn factor(method: &Method, k: i64, y: f64, arg: f64) -> Complex64 {
    match method {
        Method::Fourier | Method::TransformedFourier { .. } => cis_turns(k as f64 * arg),
        Method::Cosine => {
            let c = cos(PI * (k as f64) * y);
            Complex64::new(if k == 0 { 1.0 } else { SQRT2 * c }, 0.0)
        }
        Method::Chebyshev => {
            let c = cos(k as f64 * arg);
            Complex64::new(if k == 0 { 1.0 } else { SQRT2 * c }, 0.0)
        }
    }
}

/// Per-coordinate argument of the basis factors and the scale `√(ϱ_l/ω_l)`.
fn coordinate_setup(method: &Method, l: usize, y: f64) -> Result<(f64, f64)> {
    if !(0.0..=1.0).contains(&y) {
        return Err(Error::Domain { what: "evaluation point", value: y });
    }
    match method {
        Method::Fourier | Method::Cosine => Ok((y, 1.0)),
        Method::Chebyshev => Ok((acos(2.0 * y - 1.0), 1.0)),
        Method::TransformedFourier { transform, weight } => {
            let u = transform.coords()[l];
            let arg = u.inverse(y)?;
            if weight.is_density_of(l, &u) {
                return Ok((arg, 1.0));
            }
            let singular = |_| Error::BoundarySingularity { coordinate: l, value: y };
            let rho = u.density(y).map_err(singular)?;
            let w = weight.coordinate(l, y).map_err(singular)?;
            Ok((arg, sqrt(rho / w)))
        }
    }
}

/// The basis function of `method` with frequency `k` at `y`.
pub fn basis_eval(method: &Method, k: &[i64], y: &[f64]) -> Result<Complex64> {
    if k.len() != y.len() {
        return Err(Error::DimensionMismatch { expected: k.len(), found: y.len() });
    }
    if let Method::TransformedFourier { transform, .. } = method {
        if transform.dim() != y.len() {
            return Err(Error::DimensionMismatch { expected: transform.dim(), found: y.len() });
        }
    }
    let mut v = Complex64::new(1.0, 0.0);
    for (l, (&kl, &yl)) in k.iter().zip(y).enumerate() {
        let (arg, scale) = coordinate_setup(method, l, yl)?;
        v *= factor(method, kl, yl, arg) * scale;
    }
    Ok(v)
}

/// Coefficients of a method together with the lattice they came from.
#[derive(Debug, Clone, PartialEq)]
pub struct Approximant {
    pub method: Method,
    pub coeffs: CoefficientVector,
    pub lattice: Rank1Lattice,
}

/// Samples `target` along the (transformed) lattice and computes the
/// approximated coefficients on `set`.
///
/// `set` is the full cross for Fourier and transformed Fourier and the
/// non-negative cross for cosine and Chebyshev; in the latter case the
/// lattice has to reconstruct the sign-flip closure of `set`.
pub fn approximate<T: Target + ?Sized>(
    method: &Method,
    target: &T,
    set: &Arc<FrequencySet>,
    lattice: &Rank1Lattice,
    verification: Verification,
) -> Result<Approximant> {
    method.check(set)?;
    let samples = lattice_samples(method, target, lattice)?;
    let transform = LatticeTransform::new(lattice.clone());
    approximate_from_samples(method, &samples, target.is_real(), set, &transform, verification)
}

/// The coefficient step of [`approximate`] for samples produced by
/// [`lattice_samples`] (or [`sample_range`]).
pub fn approximate_from_samples(
    method: &Method,
    samples: &[Complex64],
    real: bool,
    set: &Arc<FrequencySet>,
    transform: &LatticeTransform,
    verification: Verification,
) -> Result<Approximant> {
    method.check(set)?;
    let lattice = transform.lattice().clone();
    let coeffs = match method {
        Method::Fourier | Method::TransformedFourier { .. } => transform.reconstruct(samples, set, verification)?,
        Method::Cosine | Method::Chebyshev => {
            if verification == Verification::Verify {
                let mirror = set.mirror()?;
                if !lattice.is_reconstructing(&mirror) {
                    return Err(Error::NotReconstructing);
                }
            }
            let spec = transform.spectrum(samples)?;
            let cheb = matches!(method, Method::Chebyshev);
            let mut values = Vec::with_capacity(set.len());
            for k in set.iter() {
                let mut acc = Complex64::new(0.0, 0.0);
                let mut nnz = 0u32;
                for_each_flip(k, |f| acc += spec[lattice.bin(f) as usize]);
                let mut abs_sum = 0i64;
                for &c in k {
                    if c != 0 {
                        nnz += 1;
                    }
                    abs_sum += c;
                }
                let mut v = acc * libm::pow(0.5, 0.5 * nnz as f64);
                if cheb && abs_sum % 2 != 0 {
                    v = -v;
                }
                if real {
                    v.im = 0.0;
                }
                values.push(v);
            }
            CoefficientVector::new(set.clone(), values)?
        }
    };
    Ok(Approximant { method: method.clone(), coeffs, lattice })
}

/// Evaluates a partial sum at arbitrary points.
///
/// The per-point cost is one pass over the frequency set: the products of
/// univariate factors are shared between consecutive indices through their
/// common lexicographic prefix.
pub struct PartialSum<'a> {
    method: &'a Method,
    coeffs: &'a CoefficientVector,
    /// Per index: first coordinate differing from the previous index.
    split: Vec<u8>,
    lo: Vec<i64>,
    width: Vec<usize>,
}

impl<'a> PartialSum<'a> {
    pub fn new(a: &'a Approximant) -> Self {
        let set = a.coeffs.support();
        let d = set.dim();
        let mut split = Vec::with_capacity(set.len());
        let mut prev: Option<&[i64]> = None;
        for k in set.iter() {
            let p = match prev {
                None => 0,
                Some(q) => q.iter().zip(k).position(|(a, b)| a != b).unwrap_or(d - 1),
            };
            split.push(p as u8);
            prev = Some(k);
        }
        let mut lo = alloc::vec![0i64; d];
        let mut hi = alloc::vec![0i64; d];
        for k in set.iter() {
            for l in 0..d {
                lo[l] = lo[l].min(k[l]);
                hi[l] = hi[l].max(k[l]);
            }
        }
        let width = lo.iter().zip(&hi).map(|(a, b)| (b - a + 1) as usize).collect();
        PartialSum { method: &a.method, coeffs: &a.coeffs, split, lo, width }
    }

    /// `S(y)`; `tables` and `prefix` are scratch buffers reused between calls.
    pub fn eval_with(&self, y: &[f64], tables: &mut Vec<Vec<Complex64>>, prefix: &mut Vec<Complex64>) -> Result<Complex64> {
        let set = self.coeffs.support();
        let d = set.dim();
        if y.len() != d {
            return Err(Error::DimensionMismatch { expected: d, found: y.len() });
        }
        tables.resize_with(d, Vec::new);
        let mut scale = 1.0;
        for l in 0..d {
            let (arg, s) = coordinate_setup(self.method, l, y[l])?;
            scale *= s;
            let t = &mut tables[l];
            t.clear();
            match self.method {
                Method::Fourier | Method::TransformedFourier { .. } => {
                    // Powers of one root of unity, anchored at exact values every 64 steps.
                    let step = cis_turns(arg);
                    let mut cur = cis_turns(self.lo[l] as f64 * arg);
                    for i in 0..self.width[l] {
                        if i % 64 == 0 {
                            cur = cis_turns((self.lo[l] + i as i64) as f64 * arg);
                        }
                        t.push(cur);
                        cur *= step;
                    }
                }
                _ => {
                    for i in 0..self.width[l] {
                        t.push(factor(self.method, self.lo[l] + i as i64, y[l], arg));
                    }
                }
            }
        }
        prefix.clear();
        prefix.resize(d, Complex64::new(1.0, 0.0));
        let mut acc = Complex64::new(0.0, 0.0);
        for ((k, &c), &p) in set.iter().zip(self.coeffs.values()).zip(&self.split) {
            for l in p as usize..d - 1 {
                let f = tables[l][(k[l] - self.lo[l]) as usize];
                prefix[l + 1] = if l == 0 { f } else { prefix[l] * f };
            }
            let last = tables[d - 1][(k[d - 1] - self.lo[d - 1]) as usize];
            let base = if d == 1 { Complex64::new(1.0, 0.0) } else { prefix[d - 1] };
            acc += c * base * last;
        }
        Ok(acc * scale)
    }

    pub fn eval(&self, y: &[f64]) -> Result<Complex64> {
        self.eval_with(y, &mut Vec::new(), &mut Vec::new())
    }
}

/// `S_I h(y)` at each point of `points` (flat, `d` values per point).
pub fn eval_partial_sum(a: &Approximant, points: &[f64]) -> Result<Vec<Complex64>> {
    let d = a.coeffs.support().dim();
    if points.len() % d != 0 {
        return Err(Error::DimensionMismatch { expected: d, found: points.len() % d });
    }
    let ps = PartialSum::new(a);
    let (mut t, mut p) = (Vec::new(), Vec::new());
    points.chunks_exact(d).map(|y| ps.eval_with(y, &mut t, &mut p)).collect()
}

/// Largest deviation `|c_k(y) - T_k(y)|` over `0 <= k <= n` and the grid,
/// where `c_k` is built from the transformed Fourier system with the
/// Chebyshev transform, `ψ^{-1}(y) = 1/2 + arccos(2y-1)/(2π)` and `ω = ϱ`:
/// `c_0 = φ_0`, `c_k = (-1)^k (φ_k + φ_{-k}) / √2`.
pub fn chebyshev_equivalence_check(n: u64, grid: &[f64]) -> Result<f64> {
    let cheb = Univariate::Chebyshev;
    let weight = WeightFunction::DensityOf(TransformKind::isotropic(cheb, 1)?);
    let mut worst: f64 = 0.0;
    for &y in grid {
        if !(y > 0.0 && y < 1.0) {
            return Err(Error::Domain { what: "grid point", value: y });
        }
        let theta = acos(2.0 * y - 1.0);
        let inv = 0.5 + theta / (2.0 * PI);
        let scale = sqrt(cheb.density(y)? / weight.coordinate(0, y)?);
        let phi = |k: i64| cis_turns(k as f64 * inv) * scale;
        for k in 0..=n as i64 {
            let combined = if k == 0 {
                phi(0)
            } else {
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                (phi(k) + phi(-k)) * (sign / SQRT2)
            };
            let t = if k == 0 { 1.0 } else { SQRT2 * cos(k as f64 * theta) };
            worst = worst.max((combined - t).norm());
        }
    }
    Ok(worst)
}
