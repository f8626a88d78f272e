//! Thin wrappers so the numerics read the same with and without `std`.

pub(crate) const PI: f64 = core::f64::consts::PI;
pub(crate) const TAU: f64 = core::f64::consts::TAU;

#[inline]
pub(crate) fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}
#[inline]
pub(crate) fn exp(x: f64) -> f64 {
    libm::exp(x)
}
#[inline]
pub(crate) fn ln(x: f64) -> f64 {
    libm::log(x)
}
#[inline]
pub(crate) fn powf(x: f64, y: f64) -> f64 {
    libm::pow(x, y)
}
#[inline]
pub(crate) fn sin(x: f64) -> f64 {
    libm::sin(x)
}
#[inline]
pub(crate) fn cos(x: f64) -> f64 {
    libm::cos(x)
}
#[inline]
pub(crate) fn acos(x: f64) -> f64 {
    libm::acos(x)
}
#[inline]
pub(crate) fn floor(x: f64) -> f64 {
    libm::floor(x)
}

/// `exp(2πi t)` for a turn count `t`, reduced to `[0,1)` first.
#[inline]
pub(crate) fn cis_turns(t: f64) -> num_complex::Complex64 {
    let r = t - floor(t);
    let a = TAU * r;
    num_complex::Complex64::new(cos(a), sin(a))
}

/// `exp(-2πi num/den)` evaluated with exact integer reduction.
#[inline]
pub(crate) fn root_of_unity(num: u64, den: u64) -> num_complex::Complex64 {
    let r = num % den;
    let a = -TAU * (r as f64) / (den as f64);
    num_complex::Complex64::new(cos(a), sin(a))
}

/// Pairwise (cascade) summation of complex values.
pub(crate) fn pairwise_sum(v: &[num_complex::Complex64]) -> num_complex::Complex64 {
    const BLOCK: usize = 128;
    if v.len() <= BLOCK {
        return v.iter().fold(num_complex::Complex64::new(0.0, 0.0), |a, &b| a + b);
    }
    let mid = v.len() / 2;
    pairwise_sum(&v[..mid]) + pairwise_sum(&v[mid..])
}
