//! The B2-cutoff `B_2` on `[0,1]`, the right half of a centred quadratic
//! B-spline, and its tensor products.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::math::PI;
use crate::systems::Target;

/// `-x² + 3/4` on `[0, 1/2)`, `(x² - 3x + 9/4)/2` on `[1/2, 1]`.
pub fn eval_b2(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain { what: "B2 argument", value: x });
    }
    Ok(b2_unchecked(x))
}

#[inline]
pub(crate) fn b2_unchecked(x: f64) -> f64 {
    if x < 0.5 {
        0.75 - x * x
    } else {
        0.5 * (x * x - 3.0 * x + 2.25)
    }
}

/// `∏ B_2(x_l)`.
pub fn eval_tensor(x: &[f64]) -> Result<f64> {
    x.iter().try_fold(1.0, |acc, &v| Ok(acc * eval_b2(v)?))
}

/// `x ↦ ∏ B_2(x_l)` in dimension `dim` as an approximation target.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct B2Tensor {
    pub dim: usize,
}

impl Target for B2Tensor {
    fn dim(&self) -> usize {
        self.dim
    }
    fn eval(&self, y: &[f64]) -> Complex64 {
        y.iter().map(|&v| b2_unchecked(v)).product::<f64>().into()
    }
    fn is_real(&self) -> bool {
        true
    }
}

/// Coefficients `[c0, c1, c2]` of the two quadratic branches.
const BRANCHES: [(f64, f64, [f64; 3]); 2] = [(0.0, 0.5, [0.75, 0.0, -1.0]), (0.5, 1.0, [1.125, -1.5, 0.5])];

/// `∫_0^1 B_2(x) e^{-2πikx} dx`, integrated branch by branch in closed form.
///
/// For `c = -2πik ≠ 0` an antiderivative of `p(x) e^{cx}` with quadratic `p`
/// is `e^{cx} (p/c - p'/c² + p''/c³)`.
pub fn b2_fourier_coefficient(k: i64) -> Complex64 {
    if k == 0 {
        return BRANCHES
            .iter()
            .map(|&(a, b, [c0, c1, c2])| {
                let f = |x: f64| c0 * x + c1 * x * x / 2.0 + c2 * x * x * x / 3.0;
                f(b) - f(a)
            })
            .sum::<f64>()
            .into();
    }
    let c = Complex64::new(0.0, -2.0 * PI * k as f64);
    // e^{c x} at x in {0, 1/2, 1}.
    let phase = |x: f64| -> Complex64 {
        if x == 0.5 && k % 2 != 0 {
            Complex64::new(-1.0, 0.0)
        } else {
            Complex64::new(1.0, 0.0)
        }
    };
    let mut total = Complex64::new(0.0, 0.0);
    for &(a, b, [c0, c1, c2]) in &BRANCHES {
        let anti = |x: f64| {
            let p = c0 + c1 * x + c2 * x * x;
            let dp = c1 + 2.0 * c2 * x;
            let ddp = 2.0 * c2;
            phase(x) * (p / c - dp / (c * c) + ddp / (c * c * c))
        };
        total += anti(b) - anti(a);
    }
    total
}
