//! Verified lattices persisted as JSON lines, one record per lattice.

use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use latapprox_core::lattice::{find_reconstructing_lattice, SearchOptions, SearchStrategy};
use latapprox_core::{FrequencySet, Rank1Lattice, SetKind};
use serde::{Deserialize, Serialize};

use crate::Result;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatticeRecord {
    pub d: usize,
    #[serde(rename = "M")]
    pub m: u64,
    pub z: Vec<i64>,
    /// `full`, `nonneg` or `custom`.
    pub set_kind: String,
    #[serde(rename = "N")]
    pub n: u64,
    pub card_i: usize,
    pub strategy: String,
    pub seed: u64,
    pub verified: bool,
}

impl LatticeRecord {
    pub fn new(set: &FrequencySet, lattice: &Rank1Lattice, opts: &SearchOptions) -> Self {
        LatticeRecord {
            d: set.dim(),
            m: lattice.size(),
            z: lattice.z().to_vec(),
            set_kind: set.kind().as_str().to_string(),
            n: set.level(),
            card_i: set.len(),
            strategy: strategy_name(opts.strategy).to_string(),
            seed: opts.seed,
            verified: lattice.is_reconstructing(set),
        }
    }

    pub fn lattice(&self) -> Result<Rank1Lattice> {
        Ok(Rank1Lattice::new(self.z.clone(), self.m)?)
    }

    fn matches(&self, set: &FrequencySet, opts: &SearchOptions) -> bool {
        self.d == set.dim()
            && self.n == set.level()
            && self.set_kind == set.kind().as_str()
            && self.card_i == set.len()
            && self.strategy == strategy_name(opts.strategy)
            && self.seed == opts.seed
    }
}

pub fn strategy_name(s: SearchStrategy) -> &'static str {
    match s {
        SearchStrategy::GrowRandom => "random",
        SearchStrategy::Cbc => "cbc",
    }
}

/// In-memory view of a cache file; new lattices are appended on insert.
#[derive(Debug, Default)]
pub struct LatticeCache {
    path: Option<PathBuf>,
    records: Vec<LatticeRecord>,
}

impl LatticeCache {
    /// A cache that is not backed by a file.
    pub fn in_memory() -> Self {
        Self::default()
    }

    /// Loads `path` if it exists; later inserts are appended to it.
    pub fn open(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        let mut records = Vec::new();
        if path.exists() {
            for line in BufReader::new(File::open(&path)?).lines() {
                let line = line?;
                if line.trim().is_empty() {
                    continue;
                }
                records.push(serde_json::from_str(&line)?);
            }
        }
        Ok(LatticeCache { path: Some(path), records })
    }

    /// From the `LATTICE_CACHE` environment variable, or in memory.
    pub fn from_env() -> Result<Self> {
        match std::env::var_os("LATTICE_CACHE") {
            Some(p) if !p.is_empty() => Self::open(p),
            _ => Ok(Self::in_memory()),
        }
    }

    pub fn records(&self) -> &[LatticeRecord] {
        &self.records
    }

    /// A cached lattice for this set and search, re-verified before use.
    pub fn lookup(&self, set: &FrequencySet, opts: &SearchOptions) -> Option<Rank1Lattice> {
        if set.kind() == SetKind::Custom {
            return None;
        }
        self.records
            .iter()
            .filter(|r| r.matches(set, opts))
            .filter_map(|r| r.lattice().ok())
            .find(|l| l.is_reconstructing(set))
    }

    pub fn insert(&mut self, record: LatticeRecord) -> Result<()> {
        if let Some(p) = &self.path {
            let mut f = OpenOptions::new().create(true).append(true).open(p)?;
            writeln!(f, "{}", serde_json::to_string(&record)?)?;
        }
        self.records.push(record);
        Ok(())
    }

    /// Cached lattice or a fresh search, which is then recorded.
    pub fn get_or_search(&mut self, set: &FrequencySet, opts: &SearchOptions) -> Result<Rank1Lattice> {
        if let Some(l) = self.lookup(set, opts) {
            return Ok(l);
        }
        let l = find_reconstructing_lattice(set, opts)?;
        if set.kind() != SetKind::Custom {
            self.insert(LatticeRecord::new(set, &l, opts))?;
        }
        Ok(l)
    }
}
