//! Maps from the torus `[0,1)` to the cube `[0,1]`: tent, Chebyshev, and the
//! parameterized logarithmic and error-function families, applied
//! coordinate-wise.
//!
//! For the parameterized kinds `ψ(·,η)` is a smooth increasing bijection of
//! `[0,1]` with `ψ^{-1}(·,η) = ψ(·,1/η)` and density `ϱ = (ψ^{-1})'`.
//! Closed forms used here:
//!
//! * logarithmic: `ψ(x,η) = x^η / (x^η + (1-x)^η)`
//! * erf: `ψ(x,η) = ½ erfc(-η u)`, `u = erf^{-1}(2x-1)`, `ψ'(x,η) = η e^{(1-η²)u²}`
//!
//! Both are written so that no `1 - tiny` cancellation happens near the
//! boundary.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::{exp, powf, sin, sqrt, PI};
use crate::special::{erfc, erfcinv};

/// A one-dimensional transform.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Univariate {
    Tent,
    Chebyshev,
    Logarithmic { eta: f64 },
    Erf { eta: f64 },
}

fn check_unit(what: &'static str, x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::Domain { what, value: x })
    }
}

fn check_interior(what: &'static str, x: f64) -> Result<()> {
    if x > 0.0 && x < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain { what, value: x })
    }
}

/// `x^η/(x^η+(1-x)^η)` and its derivative, for `x` in `(0,1)`.
fn log_map(x: f64, eta: f64) -> (f64, f64) {
    let (small, large) = if x <= 0.5 { (x, 1.0 - x) } else { (1.0 - x, x) };
    let t = powf(small / large, eta);
    let psi = if x <= 0.5 { t / (1.0 + t) } else { 1.0 / (1.0 + t) };
    let dpsi = eta * t / (x * (1.0 - x) * (1.0 + t) * (1.0 + t));
    (psi, dpsi)
}

/// `erf^{-1}(2x-1)` without forming `2x-1`.
fn erf_arg(x: f64) -> f64 {
    if x <= 0.5 {
        -erfcinv(2.0 * x)
    } else {
        erfcinv(2.0 * (1.0 - x))
    }
}

fn erf_map(x: f64, eta: f64) -> f64 {
    let u = erf_arg(x);
    if u <= 0.0 {
        0.5 * erfc(-eta * u)
    } else {
        1.0 - 0.5 * erfc(eta * u)
    }
}

fn erf_derivative(x: f64, eta: f64) -> f64 {
    let u = erf_arg(x);
    eta * exp((1.0 - eta * eta) * u * u)
}

impl Univariate {
    pub fn name(&self) -> &'static str {
        match self {
            Univariate::Tent => "tent",
            Univariate::Chebyshev => "chebyshev",
            Univariate::Logarithmic { .. } => "logarithmic",
            Univariate::Erf { .. } => "erf",
        }
    }

    pub fn eta(&self) -> Option<f64> {
        match *self {
            Univariate::Logarithmic { eta } | Univariate::Erf { eta } => Some(eta),
            _ => None,
        }
    }

    /// Whether this is a parameterized torus-to-cube bijection.
    pub fn is_invertible(&self) -> bool {
        self.eta().is_some()
    }

    fn validate(&self) -> Result<()> {
        match self.eta() {
            Some(eta) if !(eta > 0.0 && eta.is_finite()) => Err(Error::InvalidArgument("eta must be positive")),
            _ => Ok(()),
        }
    }

    fn with_eta(&self, eta: f64) -> Self {
        match *self {
            Univariate::Logarithmic { .. } => Univariate::Logarithmic { eta },
            Univariate::Erf { .. } => Univariate::Erf { eta },
            other => other,
        }
    }

    /// `ψ(x)` for `x` in `[0,1]`.
    pub fn forward(&self, x: f64) -> Result<f64> {
        check_unit("transform argument", x)?;
        self.validate()?;
        Ok(self.forward_unchecked(x))
    }

    pub(crate) fn forward_unchecked(&self, x: f64) -> f64 {
        match *self {
            Univariate::Tent => {
                if x < 0.5 {
                    2.0 * x
                } else {
                    2.0 - 2.0 * x
                }
            }
            Univariate::Chebyshev => {
                let s = sin(PI * x);
                s * s
            }
            _ if x <= 0.0 => 0.0,
            _ if x >= 1.0 => 1.0,
            Univariate::Logarithmic { eta } => log_map(x, eta).0,
            Univariate::Erf { eta } => erf_map(x, eta),
        }
    }

    /// `ψ^{-1}(y) = ψ(y, 1/η)`; tent and Chebyshev are two-to-one.
    pub fn inverse(&self, y: f64) -> Result<f64> {
        match self.eta() {
            None => Err(Error::NotInvertible(self.name())),
            Some(eta) => self.with_eta(1.0 / eta).forward(y),
        }
    }

    /// `ψ'(x)` at an interior point.
    pub fn derivative(&self, x: f64) -> Result<f64> {
        check_interior("transform derivative argument", x)?;
        self.validate()?;
        Ok(self.derivative_unchecked(x))
    }

    /// `ψ'(x)`, extended by 0 at the boundary for the parameterized kinds.
    pub(crate) fn derivative_unchecked(&self, x: f64) -> f64 {
        match *self {
            Univariate::Tent => {
                if x < 0.5 {
                    2.0
                } else {
                    -2.0
                }
            }
            Univariate::Chebyshev => PI * sin(2.0 * PI * x),
            _ if x <= 0.0 || x >= 1.0 => 0.0,
            Univariate::Logarithmic { eta } => log_map(x, eta).1,
            Univariate::Erf { eta } => erf_derivative(x, eta),
        }
    }

    /// `ϱ(y) = (ψ^{-1})'(y)` at an interior point. For Chebyshev this is the
    /// density `1/(2π√(y(1-y)))` of one branch of the inverse.
    pub fn density(&self, y: f64) -> Result<f64> {
        check_interior("density argument", y)?;
        self.validate()?;
        match *self {
            Univariate::Tent => Err(Error::NotInvertible("tent")),
            Univariate::Chebyshev => Ok(1.0 / (2.0 * PI * sqrt(y * (1.0 - y)))),
            Univariate::Logarithmic { eta } => Ok(log_map(y, 1.0 / eta).1),
            Univariate::Erf { eta } => Ok(erf_derivative(y, 1.0 / eta)),
        }
    }
}

/// A coordinate-wise transform of `[0,1]^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransformKind {
    coords: Vec<Univariate>,
}

impl TransformKind {
    pub fn new(coords: Vec<Univariate>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidArgument("transform needs at least one coordinate"));
        }
        for c in &coords {
            c.validate()?;
        }
        Ok(TransformKind { coords })
    }

    /// The same univariate map in every coordinate.
    pub fn isotropic(u: Univariate, d: usize) -> Result<Self> {
        Self::new(alloc::vec![u; d])
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Univariate] {
        &self.coords
    }

    pub fn is_invertible(&self) -> bool {
        self.coords.iter().all(Univariate::is_invertible)
    }

    fn check_dim(&self, n: usize) -> Result<()> {
        if n != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: n });
        }
        Ok(())
    }

    pub fn forward(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_dim(x.len())?;
        self.coords.iter().zip(x).map(|(u, &v)| u.forward(v)).collect()
    }

    pub fn inverse(&self, y: &[f64]) -> Result<Vec<f64>> {
        self.check_dim(y.len())?;
        self.coords.iter().zip(y).map(|(u, &v)| u.inverse(v)).collect()
    }

    /// `∏ ϱ_l(y_l)`.
    pub fn density(&self, y: &[f64]) -> Result<f64> {
        self.check_dim(y.len())?;
        self.coords.iter().zip(y).try_fold(1.0, |acc, (u, &v)| Ok(acc * u.density(v)?))
    }

    /// `∏ ψ'_l(x_l)`.
    pub fn derivative(&self, x: &[f64]) -> Result<f64> {
        self.check_dim(x.len())?;
        self.coords.iter().zip(x).try_fold(1.0, |acc, (u, &v)| Ok(acc * u.derivative(v)?))
    }
}

/// A product weight `ω(y) = ∏ ω_l(y_l)` on the cube.
#[derive(Debug, Clone, PartialEq)]
pub enum WeightFunction {
    One,
    /// `1/(π√(y(1-y)))` per coordinate, the Chebyshev orthogonality weight.
    Chebyshev,
    /// The density `ϱ` of a transform.
    DensityOf(TransformKind),
}

impl WeightFunction {
    /// `ω_l(y)` at an interior point.
    pub fn coordinate(&self, l: usize, y: f64) -> Result<f64> {
        match self {
            WeightFunction::One => Ok(1.0),
            WeightFunction::Chebyshev => {
                check_interior("weight argument", y)?;
                Ok(1.0 / (PI * sqrt(y * (1.0 - y))))
            }
            WeightFunction::DensityOf(t) => match t.coords.get(l) {
                Some(u) => u.density(y),
                None => Err(Error::DimensionMismatch { expected: t.dim(), found: l + 1 }),
            },
        }
    }

    pub fn eval(&self, y: &[f64]) -> Result<f64> {
        y.iter().enumerate().try_fold(1.0, |acc, (l, &v)| Ok(acc * self.coordinate(l, v)?))
    }

    /// Whether `ω_l` is the density of `u`, so `ω_l(ψ(x)) ψ'(x) ≡ 1`.
    pub(crate) fn is_density_of(&self, l: usize, u: &Univariate) -> bool {
        matches!(self, WeightFunction::DensityOf(t) if t.coords.get(l) == Some(u))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    const ETAS: [f64; 3] = [2.0, 2.5, 4.0];

    fn kinds() -> Vec<Univariate> {
        let mut v = Vec::new();
        for &eta in &ETAS {
            v.push(Univariate::Logarithmic { eta });
            v.push(Univariate::Erf { eta });
        }
        v
    }

    #[test]
    fn tent_and_chebyshev_values() {
        let t = Univariate::Tent;
        assert_eq!(t.forward(0.25).unwrap(), 0.5);
        assert_eq!(t.forward(0.75).unwrap(), 0.5);
        let c = Univariate::Chebyshev;
        assert_eq!(c.forward(0.0).unwrap(), 0.0);
        assert_eq!(c.forward(0.5).unwrap(), 1.0);
        assert!((c.forward(0.25).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(c.inverse(0.3), Err(Error::NotInvertible("chebyshev")));
        assert_eq!(t.inverse(0.3), Err(Error::NotInvertible("tent")));
        for i in 0..=50 {
            let x = i as f64 / 100.0;
            assert!((t.forward(x).unwrap() - t.forward(1.0 - x).unwrap()).abs() < 1e-15);
        }
    }

    #[test]
    fn logarithmic_identity_and_center() {
        let id = Univariate::Logarithmic { eta: 1.0 };
        for i in 1..100 {
            let x = i as f64 / 100.0;
            assert!((id.forward(x).unwrap() - x).abs() < 1e-15);
            assert!((id.density(x).unwrap() - 1.0).abs() < 1e-14);
            assert!((id.derivative(x).unwrap() - 1.0).abs() < 1e-14);
        }
        for u in kinds() {
            assert!((u.forward(0.5).unwrap() - 0.5).abs() < 1e-15);
            assert_eq!(u.forward(0.0).unwrap(), 0.0);
            assert_eq!(u.forward(1.0).unwrap(), 1.0);
        }
        assert!((Univariate::Logarithmic { eta: 2.0 }.density(0.5).unwrap() - 0.5).abs() < 1e-15);
        assert!((Univariate::Erf { eta: 2.5 }.density(0.5).unwrap() - 0.4).abs() < 1e-15);
    }

    #[test]
    fn reference_values() {
        // High-precision reference values (mpmath, 40 digits).
        let e2 = Univariate::Erf { eta: 2.0 };
        assert!(rel(e2.forward(0.75).unwrap(), 0.911328224673824028270721) < 1e-14);
        let cases = [
            (1e-6, 9.826294656427880310300368e-22, 3.81659851907274433635585e-15),
            (0.01, 1.63811739185466798430676e-6, 5.963430519177434561261225e-4),
            (0.3, 0.1471348527206143477069111, 1.323994540434293280704317),
        ];
        for (x, psi, dpsi) in cases {
            assert!(rel(e2.forward(x).unwrap(), psi) < 1e-12, "erf psi({x})");
            assert!(rel(e2.derivative(x).unwrap(), dpsi) < 1e-12, "erf psi'({x})");
        }
        let l = Univariate::Logarithmic { eta: 2.5 };
        let cases = [
            (1e-6, 1.000002500004374006557509e-15),
            (0.01, 1.025433638672965027730686e-5),
            (0.3, 0.1073361435326929149302903),
        ];
        for (x, psi) in cases {
            assert!(rel(l.forward(x).unwrap(), psi) < 1e-13, "log psi({x})");
        }
    }

    #[test]
    fn inverse_is_forward_with_reciprocal_eta() {
        // Above 1/2 the image crowds against 1 and the absolute round-trip
        // error grows like ϱ(y)·ulp(1), so the fine grid stays on (0, 1/2].
        for i in 1..=50 {
            let x = i as f64 / 100.0;
            for u in kinds() {
                let y = u.forward(x).unwrap();
                assert!((u.inverse(y).unwrap() - x).abs() < 1e-12, "{u:?} at {x}");
                assert_eq!(u.inverse(x).unwrap(), u.with_eta(1.0 / u.eta().unwrap()).forward(x).unwrap());
            }
        }
        let l4 = Univariate::Logarithmic { eta: 4.0 };
        for i in 1..=9 {
            let x = i as f64 / 10.0;
            assert!((l4.inverse(l4.forward(x).unwrap()).unwrap() - x).abs() < 1e-12);
        }
    }

    #[test]
    fn monotone_and_symmetric() {
        // Strict increase is only observable while ψ(x) is not rounded onto
        // 1; beyond 1/2 the check is for non-decrease.
        for u in kinds() {
            let mut prev = 0.0;
            for i in 1..1000 {
                let x = i as f64 / 1000.0;
                let y = u.forward(x).unwrap();
                if x <= 0.5 {
                    assert!(y > prev, "{u:?} not increasing at {x}");
                } else {
                    assert!(y >= prev, "{u:?} decreasing at {x}");
                }
                prev = y;
                assert!((u.forward(1.0 - x).unwrap() - (1.0 - y)).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn derivative_density_identity_and_finite_differences() {
        // On (0, 1/2]; the other half follows from ψ(1-x) = 1-ψ(x).
        for u in kinds() {
            for i in 1..=25 {
                let x = i as f64 / 50.0;
                let y = u.forward(x).unwrap();
                let prod = u.derivative(x).unwrap() * u.density(y).unwrap();
                assert!((prod - 1.0).abs() < 1e-12, "{u:?} at {x}: {prod}");
                let h = 1e-6;
                let fd = (u.inverse(x + h).unwrap() - u.inverse(x - h).unwrap()) / (2.0 * h);
                assert!(rel(fd, u.density(x).unwrap()) < 1e-6, "{u:?} density at {x}");
            }
        }
    }

    #[test]
    fn derivative_vanishes_at_boundary() {
        assert!(Univariate::Logarithmic { eta: 2.0 }.derivative(1e-6).unwrap() < 1e-3);
        for u in kinds() {
            assert!(u.derivative(0.0).is_err());
            assert!(u.density(1.0).is_err());
            assert_eq!(u.derivative_unchecked(0.0), 0.0);
        }
        assert!(Univariate::Tent.forward(1.5).is_err());
        assert!(Univariate::Erf { eta: -1.0 }.forward(0.5).is_err());
    }

    #[test]
    fn multivariate_products() {
        let t = TransformKind::new(vec![Univariate::Logarithmic { eta: 2.0 }, Univariate::Erf { eta: 2.5 }]).unwrap();
        let y = [0.5, 0.5];
        assert!((t.density(&y).unwrap() - 0.5 * 0.4).abs() < 1e-15);
        assert!(t.forward(&[0.5]).is_err());
        let w = WeightFunction::DensityOf(t.clone());
        assert!((w.eval(&y).unwrap() - 0.2).abs() < 1e-15);
        assert!(w.is_density_of(1, &Univariate::Erf { eta: 2.5 }));
        assert!(!w.is_density_of(1, &Univariate::Erf { eta: 2.0 }));
        let c = WeightFunction::Chebyshev.eval(&[0.5]).unwrap();
        assert!((c - 2.0 / PI).abs() < 1e-15);
    }
}
