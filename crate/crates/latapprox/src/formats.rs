//! File formats: the line-based frequency-set text format and the
//! coefficient-vector file (a JSON header line followed by little-endian
//! `f64` pairs).

use std::io::{BufRead, Write};
use std::sync::Arc;

use latapprox_core::systems::Method;
use latapprox_core::{CoefficientVector, Complex64, FrequencySet, SetKind, TransformKind, Univariate, WeightFunction};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Writes `d N kind` followed by one space-separated index per line.
pub fn write_frequency_set(set: &FrequencySet, mut w: impl Write) -> Result<()> {
    writeln!(w, "{} {} {}", set.dim(), set.level(), set.kind().as_str())?;
    let mut line = String::new();
    for k in set.iter() {
        line.clear();
        for (i, c) in k.iter().enumerate() {
            if i > 0 {
                line.push(' ');
            }
            line.push_str(&c.to_string());
        }
        writeln!(w, "{line}")?;
    }
    Ok(())
}

pub fn read_frequency_set(r: impl BufRead) -> Result<FrequencySet> {
    let mut lines = r.lines();
    let header = lines.next().ok_or_else(|| Error::Parse("empty frequency-set file".into()))??;
    let parts: Vec<&str> = header.split_whitespace().collect();
    let [d, n, kind] = parts[..] else {
        return Err(Error::Parse(format!("bad header `{header}`, expected `d N kind`")));
    };
    let d: usize = d.parse().map_err(|_| Error::Parse(format!("bad dimension `{d}`")))?;
    let n: u64 = n.parse().map_err(|_| Error::Parse(format!("bad level `{n}`")))?;
    let kind = SetKind::parse(kind).ok_or_else(|| Error::Parse(format!("unknown set kind `{kind}`")))?;
    let mut flat = Vec::new();
    for (no, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let k: Vec<i64> = line
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| Error::Parse(format!("line {}: bad integer `{t}`", no + 2))))
            .collect::<Result<_>>()?;
        if k.len() != d {
            return Err(Error::Parse(format!("line {}: expected {d} integers, found {}", no + 2, k.len())));
        }
        flat.push(k);
    }
    let set = FrequencySet::from_indices(d, flat.iter().map(|k| k.as_slice()))?;
    Ok(set.with_kind(kind, n)?)
}

/// The JSON header of a coefficient file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientHeader {
    pub method: String,
    /// Per-coordinate η of a transformed method.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub etas: Vec<f64>,
    /// `one`, `cheb` or `density`.
    pub weight: String,
    pub d: usize,
    #[serde(rename = "N")]
    pub n: u64,
    pub kind: String,
    pub z: Vec<i64>,
    #[serde(rename = "M")]
    pub m: u64,
    pub len: usize,
    /// The indices, present only for custom sets.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub indices: Option<Vec<Vec<i64>>>,
}

fn weight_name(w: &WeightFunction) -> &'static str {
    match w {
        WeightFunction::One => "one",
        WeightFunction::Chebyshev => "cheb",
        WeightFunction::DensityOf(_) => "density",
    }
}

impl CoefficientHeader {
    pub fn new(method: &Method, coeffs: &CoefficientVector, lattice: &latapprox_core::Rank1Lattice) -> Self {
        let set = coeffs.support();
        let (etas, weight) = match method {
            Method::TransformedFourier { transform, weight } => {
                (transform.coords().iter().filter_map(|u| u.eta()).collect(), weight_name(weight))
            }
            _ => (Vec::new(), "one"),
        };
        CoefficientHeader {
            method: method.tag().to_string(),
            etas,
            weight: weight.to_string(),
            d: set.dim(),
            n: set.level(),
            kind: set.kind().as_str().to_string(),
            z: lattice.z().to_vec(),
            m: lattice.size(),
            len: set.len(),
            indices: (set.kind() == SetKind::Custom).then(|| set.iter().map(|k| k.to_vec()).collect()),
        }
    }

    /// The method described by the header.
    pub fn method(&self) -> Result<Method> {
        let iso = |u: fn(f64) -> Univariate| -> Result<TransformKind> {
            if self.etas.len() != self.d {
                return Err(Error::Parse(format!("expected {} eta values, found {}", self.d, self.etas.len())));
            }
            Ok(TransformKind::new(self.etas.iter().map(|&e| u(e)).collect())?)
        };
        let transform = match self.method.as_str() {
            "four" => return Ok(Method::Fourier),
            "cos" => return Ok(Method::Cosine),
            "cheb" => return Ok(Method::Chebyshev),
            "log" => iso(|eta| Univariate::Logarithmic { eta })?,
            "erf" => iso(|eta| Univariate::Erf { eta })?,
            other => return Err(Error::Parse(format!("unsupported method `{other}` in header"))),
        };
        let weight = match self.weight.as_str() {
            "one" => WeightFunction::One,
            "cheb" => WeightFunction::Chebyshev,
            "density" => WeightFunction::DensityOf(transform.clone()),
            other => return Err(Error::Parse(format!("unknown weight `{other}`"))),
        };
        Ok(Method::TransformedFourier { transform, weight })
    }

    /// Rebuilds the support set.
    pub fn support(&self) -> Result<FrequencySet> {
        match SetKind::parse(&self.kind) {
            Some(SetKind::FullCross) => Ok(FrequencySet::hyperbolic_cross(self.n, self.d, false)?),
            Some(SetKind::NonnegCross) => Ok(FrequencySet::hyperbolic_cross(self.n, self.d, true)?),
            Some(SetKind::Custom) => {
                let idx = self.indices.as_ref().ok_or_else(|| Error::Parse("custom set without indices".into()))?;
                let set = FrequencySet::from_indices(self.d, idx.iter().map(|k| k.as_slice()))?;
                Ok(set.with_kind(SetKind::Custom, self.n)?)
            }
            None => Err(Error::Parse(format!("unknown set kind `{}`", self.kind))),
        }
    }
}

pub fn write_coefficients(header: &CoefficientHeader, coeffs: &CoefficientVector, mut w: impl Write) -> Result<()> {
    serde_json::to_writer(&mut w, header)?;
    w.write_all(b"\n")?;
    let mut buf = Vec::with_capacity(coeffs.values().len() * 16);
    for c in coeffs.values() {
        buf.extend_from_slice(&c.re.to_le_bytes());
        buf.extend_from_slice(&c.im.to_le_bytes());
    }
    w.write_all(&buf)?;
    Ok(())
}

pub fn read_coefficients(mut r: impl BufRead) -> Result<(CoefficientHeader, CoefficientVector)> {
    let mut line = String::new();
    r.read_line(&mut line)?;
    let header: CoefficientHeader = serde_json::from_str(line.trim_end())?;
    let set = Arc::new(header.support()?);
    if set.len() != header.len {
        return Err(Error::Parse(format!("header says {} coefficients, set has {}", header.len, set.len())));
    }
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes)?;
    if bytes.len() != header.len * 16 {
        return Err(Error::Parse(format!("expected {} bytes of coefficients, found {}", header.len * 16, bytes.len())));
    }
    let values = bytes
        .chunks_exact(16)
        .map(|b| {
            let re = f64::from_le_bytes(b[..8].try_into().expect("8 bytes"));
            let im = f64::from_le_bytes(b[8..].try_into().expect("8 bytes"));
            Complex64::new(re, im)
        })
        .collect();
    Ok((header, CoefficientVector::new(set, values)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use latapprox_core::Rank1Lattice;

    #[test]
    fn frequency_set_round_trip() {
        let set = FrequencySet::hyperbolic_cross(8, 2, false).unwrap();
        let mut buf = Vec::new();
        write_frequency_set(&set, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("2 8 full\n"));
        assert_eq!(text.lines().count(), 1 + set.len());
        assert_eq!(read_frequency_set(&buf[..]).unwrap(), set);
    }

    #[test]
    fn custom_set_round_trip() {
        let set = FrequencySet::from_indices(2, [[0i64, 1], [3, -2]].iter().map(|k| &k[..])).unwrap();
        let mut buf = Vec::new();
        write_frequency_set(&set, &mut buf).unwrap();
        assert_eq!(read_frequency_set(&buf[..]).unwrap(), set);
    }

    #[test]
    fn bad_set_files() {
        assert!(read_frequency_set(&b""[..]).is_err());
        assert!(read_frequency_set(&b"2 8\n"[..]).is_err());
        assert!(read_frequency_set(&b"2 8 full\n1 2 3\n"[..]).is_err());
        assert!(read_frequency_set(&b"1 0 custom\nx\n"[..]).is_err());
    }

    #[test]
    fn coefficients_round_trip() {
        let set = Arc::new(FrequencySet::hyperbolic_cross(4, 1, false).unwrap());
        let values: Vec<Complex64> = (0..set.len()).map(|i| Complex64::new(i as f64 * 0.1, -1.0 / (1.0 + i as f64))).collect();
        let coeffs = CoefficientVector::new(set, values).unwrap();
        let lat = Rank1Lattice::new(vec![1], 9).unwrap();
        let method = Method::transformed(TransformKind::isotropic(Univariate::Erf { eta: 2.5 }, 1).unwrap());
        let header = CoefficientHeader::new(&method, &coeffs, &lat);
        let mut buf = Vec::new();
        write_coefficients(&header, &coeffs, &mut buf).unwrap();
        let (h2, c2) = read_coefficients(&buf[..]).unwrap();
        assert_eq!(h2, header);
        assert_eq!(c2, coeffs);
        assert_eq!(h2.method().unwrap(), method);
        assert!(read_coefficients(&buf[..buf.len() - 1]).is_err());
    }
}
