//! Method strings `name[:eta=<float>]` and `N` ranges `a..b[:step]`.

use std::fmt;
use std::str::FromStr;

use latapprox_core::systems::Method;
use latapprox_core::{TransformKind, Univariate};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Fourier,
    Cosine,
    Chebyshev,
    Logarithmic,
    Erf,
}

impl Family {
    pub fn tag(self) -> &'static str {
        match self {
            Family::Fourier => "four",
            Family::Cosine => "cos",
            Family::Chebyshev => "cheb",
            Family::Logarithmic => "log",
            Family::Erf => "erf",
        }
    }

    pub fn takes_eta(self) -> bool {
        matches!(self, Family::Logarithmic | Family::Erf)
    }
}

/// A parsed method string. `eta` is `None` for the unparameterized families
/// and, in sweep lists, for `log`/`erf` given without a parameter (which then
/// expand to an η grid).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MethodSpec {
    pub family: Family,
    pub eta: Option<f64>,
}

impl MethodSpec {
    pub fn new(family: Family, eta: Option<f64>) -> Self {
        MethodSpec { family, eta }
    }

    /// The isotropic method in dimension `d`; `log`/`erf` need `eta`.
    pub fn to_method(&self, d: usize) -> Result<Method> {
        let param = |u: fn(f64) -> Univariate| -> Result<Method> {
            let eta = self.eta.ok_or_else(|| Error::Parse(format!("method {} needs eta", self.family.tag())))?;
            Ok(Method::transformed(TransformKind::isotropic(u(eta), d)?))
        };
        match self.family {
            Family::Fourier => Ok(Method::Fourier),
            Family::Cosine => Ok(Method::Cosine),
            Family::Chebyshev => Ok(Method::Chebyshev),
            Family::Logarithmic => param(|eta| Univariate::Logarithmic { eta }),
            Family::Erf => param(|eta| Univariate::Erf { eta }),
        }
    }

    /// Expands a parameter-free `log`/`erf` into one spec per η.
    pub fn expand(&self, etas: &[f64]) -> Vec<MethodSpec> {
        if self.family.takes_eta() && self.eta.is_none() {
            etas.iter().map(|&e| MethodSpec::new(self.family, Some(e))).collect()
        } else {
            vec![*self]
        }
    }
}

impl fmt::Display for MethodSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.eta {
            Some(eta) => write!(f, "{}:eta={}", self.family.tag(), eta),
            None => f.write_str(self.family.tag()),
        }
    }
}

impl FromStr for MethodSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, rest) = match s.split_once(':') {
            Some((n, r)) => (n, Some(r)),
            None => (s, None),
        };
        let family = match name.trim() {
            "four" => Family::Fourier,
            "cos" => Family::Cosine,
            "cheb" => Family::Chebyshev,
            "log" => Family::Logarithmic,
            "erf" => Family::Erf,
            other => return Err(Error::Parse(format!("unknown method `{other}`"))),
        };
        let eta = match rest {
            None => None,
            Some(r) => {
                let v = r
                    .trim()
                    .strip_prefix("eta=")
                    .ok_or_else(|| Error::Parse(format!("expected `eta=<float>` in `{s}`")))?;
                let eta: f64 = v.parse().map_err(|_| Error::Parse(format!("bad eta in `{s}`")))?;
                if !(eta > 0.0 && eta.is_finite()) {
                    return Err(Error::Parse(format!("eta must be positive in `{s}`")));
                }
                if !family.takes_eta() {
                    return Err(Error::Parse(format!("method `{name}` takes no eta")));
                }
                Some(eta)
            }
        };
        Ok(MethodSpec { family, eta })
    }
}

/// Comma-separated method list.
pub fn parse_method_list(s: &str) -> Result<Vec<MethodSpec>> {
    let v: Vec<MethodSpec> = s.split(',').filter(|p| !p.trim().is_empty()).map(str::parse).collect::<Result<_>>()?;
    if v.is_empty() {
        return Err(Error::Parse("empty method list".into()));
    }
    Ok(v)
}

/// `a..b[:step]` (inclusive) or a single value.
pub fn parse_n_range(s: &str) -> Result<Vec<u64>> {
    let bad = || Error::Parse(format!("bad N range `{s}`, expected a..b[:step]"));
    let (body, step) = match s.split_once(':') {
        Some((b, st)) => (b, st.trim().parse::<u64>().map_err(|_| bad())?),
        None => (s, 1),
    };
    let (a, b) = match body.split_once("..") {
        Some((a, b)) => (a.trim().parse::<u64>().map_err(|_| bad())?, b.trim().parse::<u64>().map_err(|_| bad())?),
        None => {
            let v = body.trim().parse::<u64>().map_err(|_| bad())?;
            (v, v)
        }
    };
    if a == 0 || b < a || step == 0 {
        return Err(bad());
    }
    Ok((a..=b).step_by(step as usize).collect())
}
