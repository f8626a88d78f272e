//! Error metrics, sweeps over `N` and decay-rate fits.

use std::sync::Arc;
use std::time::Instant;

use latapprox_core::fourier::LatticeTransform;
use latapprox_core::lattice::{SearchOptions, SearchStrategy};
use latapprox_core::systems::{approximate_from_samples, sample_range, Approximant, Method, PartialSum, Target};
use latapprox_core::{Complex64, FrequencySet, Rank1Lattice, Verification};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::cache::LatticeCache;
use crate::spec::MethodSpec;
use crate::{Error, Result};

/// Evaluation points closer than this to the boundary are redrawn.
pub const BOUNDARY_MARGIN: f64 = 1e-12;

/// The default η grid for `log`/`erf` given without a parameter.
pub const DEFAULT_ETAS: [f64; 3] = [2.0, 2.5, 4.0];

/// `{2.1, 2.2, …, 3.9}`.
pub fn fine_etas() -> Vec<f64> {
    (21..=39).map(|i| i as f64 / 10.0).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Norm {
    L2,
    Inf,
}

/// `‖h - s‖_p / ‖h‖_p`.
pub fn relative_error(h: &[f64], approx: &[f64], p: Norm) -> Result<f64> {
    if h.len() != approx.len() || h.is_empty() {
        return Err(Error::Parse("relative_error needs two nonempty arrays of equal length".into()));
    }
    let (num, den) = match p {
        Norm::L2 => {
            let num: f64 = h.iter().zip(approx).map(|(a, b)| (a - b) * (a - b)).sum();
            let den: f64 = h.iter().map(|a| a * a).sum();
            (num.sqrt(), den.sqrt())
        }
        Norm::Inf => {
            let num = h.iter().zip(approx).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            let den = h.iter().map(|a| a.abs()).fold(0.0, f64::max);
            (num, den)
        }
    };
    if den == 0.0 {
        return Err(Error::DegenerateReference);
    }
    Ok(num / den)
}

/// A 64-bit seed for the named sub-stream `name` of `seed`.
pub fn derive_seed(seed: u64, name: &str) -> u64 {
    let mut h = Sha256::new();
    h.update(name.as_bytes());
    h.update(seed.to_le_bytes());
    let out = h.finalize();
    u64::from_le_bytes(out[..8].try_into().expect("digest has 32 bytes"))
}

/// `r` pseudo-uniform points in `[0,1)^d` (flat), from ChaCha20 on the
/// `points` sub-stream of `seed`.
pub fn uniform_points(r: usize, d: usize, seed: u64) -> Result<Vec<f64>> {
    interior_points(r, d, seed, 0.0)
}

/// Like [`uniform_points`], redrawing any point with a coordinate within
/// `margin` of 0 or 1.
pub fn interior_points(r: usize, d: usize, seed: u64, margin: f64) -> Result<Vec<f64>> {
    if r == 0 || d == 0 {
        return Err(Error::Parse("need at least one point and one dimension".into()));
    }
    let mut rng = ChaCha20Rng::seed_from_u64(derive_seed(seed, "points"));
    let mut out = Vec::with_capacity(r * d);
    let mut p = vec![0.0; d];
    for _ in 0..r {
        loop {
            for v in p.iter_mut() {
                *v = rng.gen::<f64>();
            }
            if p.iter().all(|&v| v >= margin && v <= 1.0 - margin) {
                break;
            }
        }
        out.extend_from_slice(&p);
    }
    Ok(out)
}

/// Hex SHA-256 of the little-endian bytes of a point set.
pub fn points_hash(points: &[f64]) -> String {
    let mut h = Sha256::new();
    for v in points {
        h.update(v.to_le_bytes());
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub methods: Vec<MethodSpec>,
    pub d: usize,
    pub ns: Vec<u64>,
    /// Number of evaluation points.
    pub r: usize,
    pub seed: u64,
    pub strategy: SearchStrategy,
    /// Report `ε_∞` for transformed Fourier methods in the `√(ω/ϱ)`-weighted form.
    pub weighted_inf: bool,
    /// Fill the `wall_ms` column (makes the output time-dependent).
    pub timing: bool,
}

impl SweepConfig {
    pub fn new(methods: Vec<MethodSpec>, d: usize, ns: Vec<u64>) -> Self {
        SweepConfig {
            methods,
            d,
            ns,
            r: 100_000,
            seed: 1,
            strategy: SearchStrategy::GrowRandom,
            weighted_inf: false,
            timing: false,
        }
    }

    pub fn search_options(&self) -> SearchOptions {
        SearchOptions { strategy: self.strategy, seed: derive_seed(self.seed, "lattice"), ..SearchOptions::default() }
    }

    fn validate(&self) -> Result<()> {
        if self.r == 0 {
            return Err(Error::Parse("R must be at least 1".into()));
        }
        if self.d == 0 {
            return Err(Error::Parse("d must be at least 1".into()));
        }
        if self.ns.is_empty() || self.ns.contains(&0) {
            return Err(Error::Parse("N range must be nonempty and positive".into()));
        }
        if self.methods.iter().any(|m| m.family.takes_eta() && m.eta.is_none()) {
            return Err(Error::Parse("log/erf methods need eta (expand them first)".into()));
        }
        Ok(())
    }
}

/// One row of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentRecord {
    pub method: String,
    pub d: usize,
    #[serde(rename = "N")]
    pub n: u64,
    #[serde(rename = "card_I")]
    pub card_i: usize,
    #[serde(rename = "M")]
    pub m: u64,
    pub z: Vec<i64>,
    pub eta: Option<f64>,
    #[serde(rename = "R")]
    pub r: usize,
    pub seed: u64,
    pub eps2: Option<f64>,
    /// `None` when undefined (unweighted transformed Fourier) or failed.
    pub epsinf: Option<f64>,
    pub epsinf_weighted: bool,
    pub wall_ms: Option<u128>,
    pub error: Option<String>,
    pub points_hash: String,
}

pub const CSV_HEADER: [&str; 13] =
    ["method", "d", "N", "card_I", "M", "z", "eta", "R", "seed", "eps2", "epsinf", "wall_ms", "error"];

impl ExperimentRecord {
    pub fn csv_fields(&self) -> [String; 13] {
        let opt = |v: Option<f64>| v.map(|x| format!("{x:e}")).unwrap_or_default();
        let epsinf = match (self.epsinf, self.error.is_some()) {
            (Some(v), _) => format!("{v:e}"),
            (None, true) => String::new(),
            (None, false) => "undefined".to_string(),
        };
        [
            self.method.clone(),
            self.d.to_string(),
            self.n.to_string(),
            self.card_i.to_string(),
            self.m.to_string(),
            self.z.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" "),
            self.eta.map(|e| e.to_string()).unwrap_or_default(),
            self.r.to_string(),
            self.seed.to_string(),
            opt(self.eps2),
            epsinf,
            self.wall_ms.map(|w| w.to_string()).unwrap_or_default(),
            self.error.clone().unwrap_or_default(),
        ]
    }
}

/// Samples `target` on every node of the lattice, in parallel over fixed
/// chunks.
pub fn parallel_samples(method: &Method, target: &dyn Target, lattice: &Rank1Lattice) -> Result<Vec<Complex64>> {
    const CHUNK: usize = 1 << 15;
    let m = lattice.size() as usize;
    let mut out = vec![Complex64::new(0.0, 0.0); m];
    out.par_chunks_mut(CHUNK).enumerate().try_for_each(|(c, buf)| {
        let start = (c * CHUNK) as u64;
        sample_range(method, target, lattice, start..start + buf.len() as u64, buf)
    })?;
    Ok(out)
}

/// Partial sum values at every point, in parallel over points.
pub fn parallel_partial_sum(a: &Approximant, points: &[f64]) -> Result<Vec<Complex64>> {
    let d = a.coeffs.support().dim();
    let ps = PartialSum::new(a);
    let out: Vec<latapprox_core::Result<Vec<Complex64>>> = points
        .par_chunks(d * 256)
        .map(|chunk| {
            let (mut t, mut p) = (Vec::new(), Vec::new());
            chunk.chunks_exact(d).map(|y| ps.eval_with(y, &mut t, &mut p)).collect()
        })
        .collect();
    let mut v = Vec::with_capacity(points.len() / d);
    for c in out {
        v.extend(c?);
    }
    Ok(v)
}

/// `√(ω/ϱ)` at `y` for a transformed Fourier method.
fn inf_weight(method: &Method, y: &[f64]) -> Result<f64> {
    match method {
        Method::TransformedFourier { transform, weight } => Ok((weight.eval(y)? / transform.density(y)?).sqrt()),
        _ => Ok(1.0),
    }
}

struct PerN {
    full: Arc<FrequencySet>,
    nonneg: Arc<FrequencySet>,
    transform: LatticeTransform,
}

/// Runs the sweep, calling `on_record` for each record in `(N, method)`
/// order. Failures are recorded in the `error` field and the sweep goes on.
pub fn run_sweep(
    cfg: &SweepConfig,
    target: &dyn Target,
    cache: &mut LatticeCache,
    mut on_record: impl FnMut(&ExperimentRecord) -> Result<()>,
) -> Result<Vec<ExperimentRecord>> {
    cfg.validate()?;
    if target.dim() != cfg.d {
        return Err(latapprox_core::Error::DimensionMismatch { expected: cfg.d, found: target.dim() }.into());
    }
    let points = interior_points(cfg.r, cfg.d, cfg.seed, BOUNDARY_MARGIN)?;
    let hash = points_hash(&points);
    let reference: Vec<f64> = points.par_chunks(cfg.d).map(|y| target.eval(y).re).collect();
    let opts = cfg.search_options();
    let mut records = Vec::new();
    for &n in &cfg.ns {
        // One lattice per N, reconstructing the full cross; it also serves the
        // cosine and Chebyshev methods, whose sign-flip closure is that cross.
        let setup = (|| -> Result<PerN> {
            let full = Arc::new(FrequencySet::hyperbolic_cross(n, cfg.d, false)?);
            let nonneg = Arc::new(FrequencySet::hyperbolic_cross(n, cfg.d, true)?);
            let lattice = cache.get_or_search(&full, &opts)?;
            Ok(PerN { full, nonneg, transform: LatticeTransform::new(lattice) })
        })();
        for spec in &cfg.methods {
            let start = Instant::now();
            let mut rec = ExperimentRecord {
                method: spec.to_string(),
                d: cfg.d,
                n,
                card_i: 0,
                m: 0,
                z: Vec::new(),
                eta: spec.eta,
                r: cfg.r,
                seed: cfg.seed,
                eps2: None,
                epsinf: None,
                epsinf_weighted: false,
                wall_ms: None,
                error: None,
                points_hash: hash.clone(),
            };
            let outcome = match &setup {
                Err(e) => Err(Error::Parse(e.to_string())),
                Ok(per) => run_one(cfg, spec, target, per, &points, &reference, &mut rec),
            };
            if let Err(e) = outcome {
                rec.error = Some(e.to_string());
                rec.eps2 = None;
                rec.epsinf = None;
            }
            if cfg.timing {
                rec.wall_ms = Some(start.elapsed().as_millis());
            }
            on_record(&rec)?;
            records.push(rec);
        }
    }
    Ok(records)
}

fn run_one(
    cfg: &SweepConfig,
    spec: &MethodSpec,
    target: &dyn Target,
    per: &PerN,
    points: &[f64],
    reference: &[f64],
    rec: &mut ExperimentRecord,
) -> Result<()> {
    let method = spec.to_method(cfg.d)?;
    let set = if method.uses_nonneg_set() { &per.nonneg } else { &per.full };
    let lattice = per.transform.lattice();
    rec.card_i = set.len();
    rec.m = lattice.size();
    rec.z = lattice.z().to_vec();
    let samples = parallel_samples(&method, target, lattice)?;
    let a = approximate_from_samples(&method, &samples, target.is_real(), set, &per.transform, Verification::Trusted)?;
    drop(samples);
    let values: Vec<f64> = parallel_partial_sum(&a, points)?.iter().map(|v| v.re).collect();
    rec.eps2 = Some(relative_error(reference, &values, Norm::L2)?);
    match &method {
        Method::TransformedFourier { .. } if cfg.weighted_inf => {
            let w: Vec<f64> = points.chunks(cfg.d).map(|y| inf_weight(&method, y)).collect::<Result<_>>()?;
            let hw: Vec<f64> = reference.iter().zip(&w).map(|(h, w)| h * w).collect();
            let sw: Vec<f64> = values.iter().zip(&w).map(|(s, w)| s * w).collect();
            rec.epsinf = Some(relative_error(&hw, &sw, Norm::Inf)?);
            rec.epsinf_weighted = true;
        }
        Method::TransformedFourier { .. } => rec.epsinf = None,
        _ => rec.epsinf = Some(relative_error(reference, &values, Norm::Inf)?),
    }
    Ok(())
}

/// Least-squares slope of `log ε` against `log N` over the points with `N`
/// in `window`; `ε ≈ c N^{slope}`.
pub fn fit_decay_rate(points: &[(u64, f64)], window: std::ops::RangeInclusive<u64>) -> Result<f64> {
    let sel: Vec<(f64, f64)> = points
        .iter()
        .filter(|(n, e)| window.contains(n) && *e > 0.0 && e.is_finite())
        .map(|&(n, e)| ((n as f64).ln(), e.ln()))
        .collect();
    let mut distinct: Vec<u64> = points.iter().filter(|(n, _)| window.contains(n)).map(|p| p.0).collect();
    distinct.sort_unstable();
    distinct.dedup();
    if sel.len() < 3 || distinct.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "need at least 3 positive errors with distinct N in {}..={}",
            window.start(),
            window.end()
        )));
    }
    let k = sel.len() as f64;
    let mx = sel.iter().map(|p| p.0).sum::<f64>() / k;
    let my = sel.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = sel.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = sel.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    Ok(sxy / sxx)
}

/// The upper half `[⌈(lo+hi)/2⌉, hi]` of the `N` values present.
pub fn upper_half_window(ns: &[u64]) -> Option<std::ops::RangeInclusive<u64>> {
    let lo = *ns.iter().min()?;
    let hi = *ns.iter().max()?;
    Some((lo + hi).div_ceil(2)..=hi)
}

/// One fitted rate of the decay table.
#[derive(Debug, Clone, PartialEq)]
pub struct DecayRow {
    pub method: String,
    pub d: usize,
    pub window: std::ops::RangeInclusive<u64>,
    pub points: usize,
    pub rate: Result<f64, String>,
}

/// `(method, d, N, eps2)` from sweep CSV output; failed rows are skipped.
pub fn read_sweep_csv(r: impl std::io::Read) -> Result<Vec<(String, usize, u64, f64)>> {
    let mut rdr = csv::Reader::from_reader(r);
    let headers = rdr.headers()?.clone();
    let col = |name: &str| {
        headers.iter().position(|h| h == name).ok_or_else(|| Error::Parse(format!("missing column `{name}`")))
    };
    let (cm, cd, cn, ce) = (col("method")?, col("d")?, col("N")?, col("eps2")?);
    let mut out = Vec::new();
    for (i, row) in rdr.records().enumerate() {
        let row = row?;
        let field = |c: usize| row.get(c).unwrap_or("").trim().to_string();
        let bad = |what: &str| Error::Parse(format!("row {}: bad {what}", i + 2));
        let eps = field(ce);
        if eps.is_empty() {
            continue;
        }
        out.push((
            field(cm),
            field(cd).parse().map_err(|_| bad("d"))?,
            field(cn).parse().map_err(|_| bad("N"))?,
            eps.parse().map_err(|_| bad("eps2"))?,
        ));
    }
    Ok(out)
}

/// Slopes per `(method, d)` in first-appearance order. Without `window`
/// each group uses the upper half of its own `N` range.
pub fn decay_table(rows: &[(String, usize, u64, f64)], window: Option<std::ops::RangeInclusive<u64>>) -> Result<Vec<DecayRow>> {
    let mut keys: Vec<(String, usize)> = Vec::new();
    for (m, d, _, _) in rows {
        if !keys.iter().any(|(km, kd)| km == m && kd == d) {
            keys.push((m.clone(), *d));
        }
    }
    if keys.is_empty() {
        return Err(Error::InsufficientData("no successful records".into()));
    }
    Ok(keys
        .into_iter()
        .map(|(method, d)| {
            let pts: Vec<(u64, f64)> =
                rows.iter().filter(|r| r.0 == method && r.1 == d).map(|r| (r.2, r.3)).collect();
            let ns: Vec<u64> = pts.iter().map(|p| p.0).collect();
            let w = window.clone().or_else(|| upper_half_window(&ns)).expect("group is nonempty");
            let points = pts.iter().filter(|p| w.contains(&p.0)).count();
            let rate = fit_decay_rate(&pts, w.clone()).map_err(|e| e.to_string());
            DecayRow { method, d, window: w, points, rate }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relative_errors() {
        let h = [1.0, 2.0, -3.0];
        assert_eq!(relative_error(&h, &h, Norm::L2).unwrap(), 0.0);
        assert_eq!(relative_error(&h, &[0.0; 3], Norm::L2).unwrap(), 1.0);
        assert_eq!(relative_error(&[1.0, 1.0], &[1.0, 0.0], Norm::Inf).unwrap(), 1.0);
        assert!(matches!(relative_error(&[0.0], &[1.0], Norm::L2), Err(Error::DegenerateReference)));
        assert!(relative_error(&[1.0], &[1.0, 2.0], Norm::L2).is_err());
    }

    #[test]
    fn points_are_reproducible_and_uniform() {
        let a = uniform_points(100_000, 2, 5).unwrap();
        assert_eq!(a, uniform_points(100_000, 2, 5).unwrap());
        assert_ne!(a, uniform_points(100_000, 2, 6).unwrap());
        let bound = 4.0 / (12.0f64 * 100_000.0).sqrt();
        for l in 0..2 {
            let mean = a.iter().skip(l).step_by(2).sum::<f64>() / 100_000.0;
            assert!((mean - 0.5).abs() < bound);
        }
        assert!(uniform_points(0, 2, 1).is_err());
        assert!(interior_points(1000, 3, 1, 0.01).unwrap().iter().all(|&v| (0.01..=0.99).contains(&v)));
    }

    #[test]
    fn decay_fit() {
        let exact: Vec<(u64, f64)> = (1..=20).map(|n| (n, (n as f64).powf(-2.0))).collect();
        assert!((fit_decay_rate(&exact, 1..=20).unwrap() + 2.0).abs() < 1e-10);
        let scaled: Vec<(u64, f64)> = (1..=20).map(|n| (n, 5.0 * (n as f64).powf(-1.5))).collect();
        assert!((fit_decay_rate(&scaled, 5..=20).unwrap() + 1.5).abs() < 1e-10);
        let noisy: Vec<(u64, f64)> = (1..=30).map(|n| (n, (1.0 + 0.3 * (n as f64).sin()) / n as f64)).collect();
        let tripled: Vec<(u64, f64)> = noisy.iter().map(|&(n, e)| (n, 3.0 * e)).collect();
        let (a, b) = (fit_decay_rate(&noisy, 1..=30).unwrap(), fit_decay_rate(&tripled, 1..=30).unwrap());
        assert!((a - b).abs() < 1e-12);
        assert!(fit_decay_rate(&exact[..2], 1..=20).is_err());
        assert_eq!(upper_half_window(&[1, 5, 137]).unwrap(), 69..=137);
    }

    #[test]
    fn seeds_differ_by_name() {
        assert_ne!(derive_seed(1, "points"), derive_seed(1, "lattice"));
        assert_eq!(derive_seed(1, "points"), derive_seed(1, "points"));
    }
}
