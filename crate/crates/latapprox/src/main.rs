use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use latapprox::cache::{LatticeCache, LatticeRecord};
use latapprox::experiments::{self, ExperimentRecord, SweepConfig, CSV_HEADER, DEFAULT_ETAS};
use latapprox::formats;
use latapprox::spec::{parse_method_list, parse_n_range, MethodSpec};
use latapprox_core::lattice::{SearchOptions, SearchStrategy};
use latapprox_core::systems::{approximate, chebyshev_equivalence_check};
use latapprox_core::testfunctions::B2Tensor;
use latapprox_core::{FrequencySet, Verification};

/// Approximation of non-periodic functions on rank-1 lattices.
#[derive(Parser)]
#[command(name = "latapprox", version)]
struct Cli {
    /// Worker threads (default: available cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Find a reconstructing lattice for a hyperbolic cross and print its record.
    Lattice(LatticeArgs),
    /// Write a hyperbolic cross in the text format.
    IndexSet(IndexSetArgs),
    /// Approximate a test function and write the coefficients.
    Approx(ApproxArgs),
    /// Run an error sweep over N.
    Sweep(SweepArgs),
    /// Fit decay rates from a sweep CSV.
    Decay(DecayArgs),
    /// Compare the folded transformed Fourier basis with Chebyshev polynomials.
    ChebEquiv(ChebArgs),
    /// Import or export lattice cache records.
    Cache(CacheArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Strategy {
    Random,
    Cbc,
}

impl From<Strategy> for SearchStrategy {
    fn from(s: Strategy) -> Self {
        match s {
            Strategy::Random => SearchStrategy::GrowRandom,
            Strategy::Cbc => SearchStrategy::Cbc,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct SetArgs {
    #[arg(long)]
    d: usize,
    #[arg(long = "N")]
    n: u64,
    /// Use the non-negative quadrant of the cross.
    #[arg(long)]
    nonneg: bool,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long, value_enum, default_value = "random")]
    strategy: Strategy,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Lattice cache file (overrides LATTICE_CACHE).
    #[arg(long)]
    cache: Option<PathBuf>,
}

#[derive(Args)]
struct LatticeArgs {
    #[command(flatten)]
    set: SetArgs,
    #[command(flatten)]
    search: SearchArgs,
}

#[derive(Args)]
struct IndexSetArgs {
    #[command(flatten)]
    set: SetArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ApproxArgs {
    /// Method string, e.g. `cheb` or `erf:eta=2.5`.
    #[arg(long)]
    method: String,
    #[arg(long)]
    d: usize,
    #[arg(long = "N")]
    n: u64,
    /// Test function.
    #[arg(long, default_value = "b2")]
    function: String,
    #[command(flatten)]
    search: SearchArgs,
    /// Coefficient file to write.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    d: usize,
    /// Comma-separated methods; `log`/`erf` without eta expand to 2, 2.5 and 4.
    #[arg(long, default_value = "cos,cheb,log,erf")]
    methods: String,
    /// `a..b[:step]`.
    #[arg(long = "N")]
    n: String,
    #[arg(long = "R", default_value_t = 100_000)]
    r: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, value_enum, default_value = "random")]
    strategy: Strategy,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also sweep eta over 2.1, 2.2, ..., 3.9 for `log`/`erf` without eta.
    #[arg(long)]
    eta_fine: bool,
    /// Report the sqrt(omega/rho)-weighted max error for transformed methods.
    #[arg(long)]
    weighted_inf: bool,
    /// Fill the wall_ms column.
    #[arg(long)]
    timing: bool,
    #[arg(long, default_value = "b2")]
    function: String,
    /// Lattice cache file (overrides LATTICE_CACHE).
    #[arg(long)]
    cache: Option<PathBuf>,
}

#[derive(Args)]
struct DecayArgs {
    /// Sweep CSV file.
    input: PathBuf,
    /// N window `a..b`; default is the upper half of each group's range.
    #[arg(long)]
    window: Option<String>,
}

#[derive(Args)]
struct ChebArgs {
    /// Largest degree.
    #[arg(long = "N", default_value_t = 16)]
    n: u64,
    /// Number of grid points (i + 0.5)/m.
    #[arg(long, default_value_t = 101)]
    grid: usize,
}

#[derive(Args)]
struct CacheArgs {
    #[command(subcommand)]
    action: CacheAction,
    /// Cache file (overrides LATTICE_CACHE).
    #[arg(long)]
    cache: Option<PathBuf>,
}

#[derive(Subcommand)]
enum CacheAction {
    /// Print all records as JSON lines.
    Export,
    /// Verify and add records from a JSON-lines file.
    Import { file: PathBuf },
}

enum Failure {
    Usage(String),
    Numerical(String),
}

impl From<latapprox::Error> for Failure {
    fn from(e: latapprox::Error) -> Self {
        match e {
            latapprox::Error::Parse(_) | latapprox::Error::Io(_) | latapprox::Error::Csv(_) | latapprox::Error::Json(_) => {
                Failure::Usage(e.to_string())
            }
            other => Failure::Numerical(other.to_string()),
        }
    }
}

impl From<latapprox_core::Error> for Failure {
    fn from(e: latapprox_core::Error) -> Self {
        match e {
            latapprox_core::Error::InvalidArgument(_) | latapprox_core::Error::DimensionMismatch { .. } => {
                Failure::Usage(e.to_string())
            }
            other => Failure::Numerical(other.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type CmdResult = Result<(), Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn open_cache(path: &Option<PathBuf>) -> Result<LatticeCache, Failure> {
    Ok(match path {
        Some(p) => LatticeCache::open(p)?,
        None => LatticeCache::from_env()?,
    })
}

fn output(path: &Option<PathBuf>) -> Result<Box<dyn Write>, Failure> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn target(name: &str, d: usize) -> Result<B2Tensor, Failure> {
    match name {
        "b2" => Ok(B2Tensor { dim: d }),
        other => Err(usage(format!("unknown function `{other}` (available: b2)"))),
    }
}

fn check_set_args(d: usize, n: u64) -> CmdResult {
    if d == 0 {
        return Err(usage("--d must be at least 1"));
    }
    if n == 0 {
        return Err(usage("--N must be at least 1"));
    }
    Ok(())
}

fn search_options(s: &SearchArgs) -> SearchOptions {
    SearchOptions { strategy: s.strategy.into(), seed: s.seed, ..SearchOptions::default() }
}

fn cmd_lattice(a: &LatticeArgs) -> CmdResult {
    check_set_args(a.set.d, a.set.n)?;
    let set = FrequencySet::hyperbolic_cross(a.set.n, a.set.d, a.set.nonneg)?;
    let opts = search_options(&a.search);
    let lat = open_cache(&a.search.cache)?.get_or_search(&set, &opts)?;
    let rec = LatticeRecord::new(&set, &lat, &opts);
    println!("{}", serde_json::to_string(&rec).map_err(|e| Failure::Numerical(e.to_string()))?);
    if rec.verified {
        Ok(())
    } else {
        Err(Failure::Numerical("lattice failed verification".into()))
    }
}

fn cmd_index_set(a: &IndexSetArgs) -> CmdResult {
    check_set_args(a.set.d, a.set.n)?;
    let set = FrequencySet::hyperbolic_cross(a.set.n, a.set.d, a.set.nonneg)?;
    let mut w = output(&a.out)?;
    formats::write_frequency_set(&set, &mut w)?;
    w.flush()?;
    Ok(())
}

fn cmd_approx(a: &ApproxArgs) -> CmdResult {
    check_set_args(a.d, a.n)?;
    let spec: MethodSpec = a.method.parse()?;
    let method = spec.to_method(a.d)?;
    let h = target(&a.function, a.d)?;
    let full = FrequencySet::hyperbolic_cross(a.n, a.d, false)?;
    let lat = open_cache(&a.search.cache)?.get_or_search(&full, &search_options(&a.search))?;
    let set = if method.uses_nonneg_set() { Arc::new(FrequencySet::hyperbolic_cross(a.n, a.d, true)?) } else { Arc::new(full) };
    let approx = approximate(&method, &h, &set, &lat, Verification::Trusted)?;
    eprintln!("{spec} d={} N={} |I|={} M={} z={:?}", a.d, a.n, set.len(), lat.size(), lat.z());
    if let Some(path) = &a.out {
        let header = formats::CoefficientHeader::new(&method, &approx.coeffs, &lat);
        let mut w = BufWriter::new(File::create(path)?);
        formats::write_coefficients(&header, &approx.coeffs, &mut w)?;
        w.flush()?;
    }
    Ok(())
}

fn cmd_sweep(a: &SweepArgs) -> CmdResult {
    if a.d == 0 {
        return Err(usage("--d must be at least 1"));
    }
    if a.r == 0 {
        return Err(usage("--R must be at least 1"));
    }
    let ns = parse_n_range(&a.n)?;
    let mut etas = DEFAULT_ETAS.to_vec();
    if a.eta_fine {
        etas.extend(experiments::fine_etas());
    }
    let methods: Vec<MethodSpec> = parse_method_list(&a.methods)?.iter().flat_map(|m| m.expand(&etas)).collect();
    let h = target(&a.function, a.d)?;
    let mut cfg = SweepConfig::new(methods, a.d, ns);
    cfg.r = a.r;
    cfg.seed = a.seed;
    cfg.strategy = a.strategy.into();
    cfg.weighted_inf = a.weighted_inf;
    cfg.timing = a.timing;
    let mut cache = open_cache(&a.cache)?;

    let sink = output(&a.out)?;
    let to_stdout = a.out.is_none();
    let mut csv_out = None;
    let mut json_out = None;
    match a.format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(sink);
            w.write_record(CSV_HEADER).map_err(latapprox::Error::from)?;
            csv_out = Some(w);
        }
        Format::Json => json_out = Some(sink),
    }
    let records = experiments::run_sweep(&cfg, &h, &mut cache, |rec: &ExperimentRecord| {
        if let Some(w) = csv_out.as_mut() {
            w.write_record(rec.csv_fields())?;
            w.flush()?;
        }
        if let Some(w) = json_out.as_mut() {
            serde_json::to_writer(&mut *w, rec)?;
            w.write_all(b"\n")?;
            w.flush()?;
        }
        let summary = match (&rec.error, rec.eps2) {
            (Some(e), _) => format!("{} d={} N={}: error: {e}", rec.method, rec.d, rec.n),
            (None, Some(e2)) => format!("{} d={} N={} |I|={} M={} eps2={e2:e}", rec.method, rec.d, rec.n, rec.card_i, rec.m),
            (None, None) => format!("{} d={} N={}", rec.method, rec.d, rec.n),
        };
        if to_stdout {
            eprintln!("{summary}");
        } else {
            println!("{summary}");
        }
        Ok(())
    })?;
    if records.iter().any(|r| r.error.is_none()) {
        Ok(())
    } else {
        Err(Failure::Numerical("every record failed".into()))
    }
}

fn parse_window(s: &str) -> Result<std::ops::RangeInclusive<u64>, Failure> {
    let (a, b) = s.split_once("..").ok_or_else(|| usage(format!("bad window `{s}`, expected a..b")))?;
    let a = a.trim().parse().map_err(|_| usage(format!("bad window `{s}`")))?;
    let b = b.trim().parse().map_err(|_| usage(format!("bad window `{s}`")))?;
    Ok(a..=b)
}

fn cmd_decay(a: &DecayArgs) -> CmdResult {
    let window = a.window.as_deref().map(parse_window).transpose()?;
    let rows = experiments::read_sweep_csv(BufReader::new(File::open(&a.input)?))?;
    let table = experiments::decay_table(&rows, window)?;
    println!("{:<16} {:>2} {:>12} {:>6} {:>8}", "method", "d", "window", "points", "rate");
    let mut ok = false;
    for row in &table {
        let w = format!("{}..{}", row.window.start(), row.window.end());
        match &row.rate {
            Ok(r) => {
                ok = true;
                println!("{:<16} {:>2} {:>12} {:>6} {:>8.2}", row.method, row.d, w, row.points, r);
            }
            Err(e) => println!("{:<16} {:>2} {:>12} {:>6}  {e}", row.method, row.d, w, row.points),
        }
    }
    if ok {
        Ok(())
    } else {
        Err(Failure::Numerical("no group had enough data for a fit".into()))
    }
}

fn cmd_cheb_equiv(a: &ChebArgs) -> CmdResult {
    if a.grid == 0 {
        return Err(usage("--grid must be at least 1"));
    }
    let m = a.grid as f64;
    let grid: Vec<f64> = (0..a.grid).map(|i| (i as f64 + 0.5) / m).collect();
    let dev = chebyshev_equivalence_check(a.n, &grid)?;
    println!("max deviation {dev:e} over k <= {} at {} points", a.n, a.grid);
    if dev <= 1e-10 {
        Ok(())
    } else {
        Err(Failure::Numerical(format!("deviation {dev:e} exceeds 1e-10")))
    }
}

fn cmd_cache(a: &CacheArgs) -> CmdResult {
    let mut cache = open_cache(&a.cache)?;
    match &a.action {
        CacheAction::Export => {
            let mut w = output(&None)?;
            for r in cache.records() {
                writeln!(w, "{}", serde_json::to_string(r).map_err(latapprox::Error::from)?)?;
            }
            w.flush()?;
        }
        CacheAction::Import { file } => {
            let incoming = LatticeCache::open(file)?;
            let (mut added, mut rejected) = (0, 0);
            for r in incoming.records() {
                let set = match r.set_kind.as_str() {
                    "full" => FrequencySet::hyperbolic_cross(r.n, r.d, false)?,
                    "nonneg" => FrequencySet::hyperbolic_cross(r.n, r.d, true)?,
                    _ => {
                        rejected += 1;
                        continue;
                    }
                };
                let ok = r.lattice().map(|l| l.is_reconstructing(&set)).unwrap_or(false);
                if ok && !cache.records().contains(r) {
                    let mut rec = r.clone();
                    rec.verified = true;
                    cache.insert(rec)?;
                    added += 1;
                } else if !ok {
                    rejected += 1;
                }
            }
            println!("imported {added} records, rejected {rejected}");
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if t == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let result = match &cli.cmd {
        Cmd::Lattice(a) => cmd_lattice(a),
        Cmd::IndexSet(a) => cmd_index_set(a),
        Cmd::Approx(a) => cmd_approx(a),
        Cmd::Sweep(a) => cmd_sweep(a),
        Cmd::Decay(a) => cmd_decay(a),
        Cmd::ChebEquiv(a) => cmd_cheb_equiv(a),
        Cmd::Cache(a) => cmd_cache(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Numerical(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
