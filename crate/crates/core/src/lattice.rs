//! Rank-1 lattices `{ (j z mod M) / M : j = 0..M-1 }`, the reconstruction
//! property for a frequency set, and lattice search.

use alloc::vec::Vec;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::error::{Error, Result};
use crate::index_sets::FrequencySet;
use crate::math::pairwise_sum;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rank1Lattice {
    z: Vec<i64>,
    m: u64,
}

impl Rank1Lattice {
    pub fn new(z: Vec<i64>, m: u64) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidArgument("lattice size M must be at least 1"));
        }
        if z.is_empty() {
            return Err(Error::InvalidArgument("generating vector must be nonempty"));
        }
        Ok(Rank1Lattice { z, m })
    }

    pub fn dim(&self) -> usize {
        self.z.len()
    }

    /// The number of nodes `M`.
    pub fn size(&self) -> u64 {
        self.m
    }

    pub fn z(&self) -> &[i64] {
        &self.z
    }

    /// `z` reduced to `[0, M)`.
    pub fn z_reduced(&self) -> Vec<u64> {
        self.z.iter().map(|&c| (c as i128).rem_euclid(self.m as i128) as u64).collect()
    }

    /// Integer numerators `(j z_l) mod M` of node `j`.
    pub fn node_numerators(&self, j: u64, out: &mut [u64]) {
        let m = self.m as i128;
        for (o, &c) in out.iter_mut().zip(&self.z) {
            *o = ((j as i128 % m) * c as i128).rem_euclid(m) as u64;
        }
    }

    /// Node `j`, written to `out` (length `d`).
    pub fn node_into(&self, j: u64, out: &mut [f64]) {
        let m = self.m as i128;
        for (o, &c) in out.iter_mut().zip(&self.z) {
            *o = ((j as i128 % m) * c as i128).rem_euclid(m) as f64 / self.m as f64;
        }
    }

    pub fn node(&self, j: u64) -> Vec<f64> {
        let mut v = alloc::vec![0.0; self.dim()];
        self.node_into(j, &mut v);
        v
    }

    /// All nodes, flat in node order (`M * d` values).
    pub fn nodes(&self) -> Vec<f64> {
        let d = self.dim();
        let zr = self.z_reduced();
        let mut out = alloc::vec![0.0; self.m as usize * d];
        let mut cur = alloc::vec![0u64; d];
        for row in out.chunks_exact_mut(d) {
            for l in 0..d {
                row[l] = cur[l] as f64 / self.m as f64;
                cur[l] += zr[l];
                if cur[l] >= self.m {
                    cur[l] -= self.m;
                }
            }
        }
        out
    }

    /// The DFT bin `k·z mod M` of frequency `k`.
    pub fn bin(&self, k: &[i64]) -> u64 {
        let dot: i128 = k.iter().zip(&self.z).map(|(&a, &b)| a as i128 * b as i128).sum();
        dot.rem_euclid(self.m as i128) as u64
    }

    /// Bins of every index of `set`, in set order.
    pub fn bins(&self, set: &FrequencySet) -> Result<Vec<u64>> {
        if set.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: set.dim() });
        }
        Ok(set.iter().map(|k| self.bin(k)).collect())
    }

    /// Whether `k -> k·z mod M` is injective on `set`.
    pub fn is_reconstructing(&self, set: &FrequencySet) -> bool {
        match self.bins(set) {
            Ok(b) => all_distinct(b),
            Err(_) => false,
        }
    }
}

fn all_distinct(mut v: Vec<u64>) -> bool {
    v.sort_unstable();
    v.windows(2).all(|w| w[0] != w[1])
}

/// Reconstruction check through the difference set: no nonzero `t = k1 - k2`
/// with `t·z ≡ 0 (mod M)`. Iterates pairs on the fly, `O(|I|²)`; meant as an
/// independent check of [`Rank1Lattice::is_reconstructing`].
pub fn is_reconstructing_by_differences(lat: &Rank1Lattice, set: &FrequencySet) -> bool {
    if set.dim() != lat.dim() {
        return false;
    }
    let d = set.dim();
    let mut t = alloc::vec![0i64; d];
    for (i, a) in set.iter().enumerate() {
        for b in set.iter().skip(i + 1) {
            for l in 0..d {
                t[l] = a[l] - b[l];
            }
            if lat.bin(&t) == 0 {
                return false;
            }
        }
    }
    true
}

/// Exact lattice quadrature: the mean of the samples.
pub fn exact_quadrature(samples: &[Complex64]) -> Result<Complex64> {
    if samples.is_empty() {
        return Err(Error::InvalidArgument("quadrature needs at least one sample"));
    }
    Ok(pairwise_sum(samples) / samples.len() as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchStrategy {
    /// Prime sizes growing geometrically, several random generating vectors
    /// per size.
    GrowRandom,
    /// Component-by-component: for each prime size, choose `z_l` greedily so
    /// that the projection onto the first `l` coordinates stays injective.
    Cbc,
}

#[derive(Debug, Clone)]
pub struct SearchOptions {
    pub strategy: SearchStrategy,
    pub seed: u64,
    /// Random generating vectors tried per lattice size.
    pub draws_per_size: usize,
    /// Factor between consecutive candidate sizes.
    pub growth: f64,
    /// Total number of candidate lattices before giving up.
    pub max_attempts: usize,
    /// Lower bound on the first candidate size (the default starts at `|I|`).
    pub min_size: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            strategy: SearchStrategy::GrowRandom,
            seed: 0,
            draws_per_size: 16,
            growth: 1.2,
            max_attempts: 4096,
            min_size: 0,
        }
    }
}

impl SearchOptions {
    pub fn with_seed(seed: u64) -> Self {
        SearchOptions { seed, ..Self::default() }
    }

    pub fn cbc() -> Self {
        SearchOptions { strategy: SearchStrategy::Cbc, ..Self::default() }
    }
}

/// Searches a lattice whose bin map is injective on `set`.
///
/// Candidate sizes are primes, starting at the first prime `>= max(|I|,
/// min_size)` and growing by `growth`. Under `GrowRandom`, `z_1 = 1` and the
/// other components are drawn uniformly from `[1, M)` with a ChaCha20 stream
/// seeded from `seed`; for prime `M` fixing `z_1` loses nothing since `c z`
/// generates the same node set for every unit `c`. The result depends only
/// on `set` and `opts`.
pub fn find_reconstructing_lattice(set: &FrequencySet, opts: &SearchOptions) -> Result<Rank1Lattice> {
    if set.is_empty() {
        return Err(Error::InvalidArgument("cannot search a lattice for an empty set"));
    }
    let d = set.dim();
    if set.len() == 1 {
        return Rank1Lattice::new(alloc::vec![1; d], 1);
    }
    if !(opts.growth > 1.0) || opts.draws_per_size == 0 {
        return Err(Error::InvalidArgument("growth must exceed 1 and draws must be positive"));
    }
    match opts.strategy {
        SearchStrategy::GrowRandom => grow_random(set, opts),
        SearchStrategy::Cbc => cbc(set, opts),
    }
}

fn next_size(m: u64, growth: f64) -> u64 {
    let g = (m as f64 * growth) as u64;
    next_prime(g.max(m + 1))
}

fn grow_random(set: &FrequencySet, opts: &SearchOptions) -> Result<Rank1Lattice> {
    let d = set.dim();
    let mut rng = ChaCha20Rng::seed_from_u64(opts.seed);
    let mut m = next_prime((set.len() as u64).max(opts.min_size).max(2));
    let mut attempts = 0usize;
    let mut residues = alloc::vec![0u64; set.len()];
    loop {
        for _ in 0..opts.draws_per_size {
            if attempts >= opts.max_attempts {
                return Err(Error::SearchExhausted { attempts, last_size: m });
            }
            attempts += 1;
            let mut z = alloc::vec![1i64; d];
            for c in z.iter_mut().skip(1) {
                *c = rng.gen_range(1..m) as i64;
            }
            let lat = Rank1Lattice { z, m };
            for (r, k) in residues.iter_mut().zip(set.iter()) {
                *r = lat.bin(k);
            }
            if all_distinct(residues.clone()) {
                return Ok(lat);
            }
            if d == 1 {
                // Every z gives the same bins up to a permutation.
                break;
            }
        }
        m = next_size(m, opts.growth);
    }
}

fn cbc(set: &FrequencySet, opts: &SearchOptions) -> Result<Rank1Lattice> {
    let d = set.dim();
    if d == 1 {
        let (lo, hi) = set.iter().fold((i64::MAX, i64::MIN), |(a, b), k| (a.min(k[0]), b.max(k[0])));
        let m = ((hi - lo) as u64 + 1).max(opts.min_size);
        return Rank1Lattice::new(alloc::vec![1], m);
    }
    // Distinct prefixes of every length, as positions into the set.
    let prefixes: Vec<Vec<usize>> = (1..=d)
        .map(|l| {
            let mut idx = Vec::new();
            for (i, k) in set.iter().enumerate() {
                if idx.last().is_none_or(|&p: &usize| set.get(p)[..l] != k[..l]) {
                    idx.push(i);
                }
            }
            idx
        })
        .collect();
    const CANDIDATES: usize = 256;
    let mut m = next_prime((set.len() as u64).max(opts.min_size).max(2));
    let mut attempts = 0usize;
    'size: loop {
        let step = ((m as f64 * 0.618_033_988_749_894_9) as u64).max(1);
        let mut z = alloc::vec![1i64; d];
        let mut partial = alloc::vec![0u64; set.len()];
        // Coordinate 1 with z_1 = 1.
        for (p, k) in partial.iter_mut().zip(set.iter()) {
            *p = (k[0] as i128).rem_euclid(m as i128) as u64;
        }
        if !all_distinct(prefixes[0].iter().map(|&i| partial[i]).collect()) {
            attempts += 1;
            if attempts >= opts.max_attempts {
                return Err(Error::SearchExhausted { attempts, last_size: m });
            }
            m = next_size(m, opts.growth);
            continue 'size;
        }
        for l in 1..d {
            let mut found = None;
            for j in 0..CANDIDATES.min(m as usize - 1) {
                attempts += 1;
                if attempts >= opts.max_attempts {
                    return Err(Error::SearchExhausted { attempts, last_size: m });
                }
                let c = 1 + (j as u64 * step) % (m - 1);
                let res: Vec<u64> = prefixes[l]
                    .iter()
                    .map(|&i| {
                        let t = set.get(i)[l] as i128 * c as i128;
                        ((partial[i] as i128 + t).rem_euclid(m as i128)) as u64
                    })
                    .collect();
                if all_distinct(res) {
                    found = Some(c);
                    break;
                }
            }
            match found {
                Some(c) => {
                    z[l] = c as i64;
                    for (p, k) in partial.iter_mut().zip(set.iter()) {
                        *p = ((*p as i128 + k[l] as i128 * c as i128).rem_euclid(m as i128)) as u64;
                    }
                }
                None => {
                    m = next_size(m, opts.growth);
                    continue 'size;
                }
            }
        }
        return Ok(Rank1Lattice { z, m });
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Smallest prime `>= n`.
pub fn next_prime(n: u64) -> u64 {
    let mut c = n.max(2);
    while !is_prime(c) {
        c += 1;
    }
    c
}
