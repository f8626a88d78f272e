//! Frequency index sets: hyperbolic crosses, their non-negative quadrant,
//! difference sets and sign-flip closures.
//!
//! Sets are stored flat (`len * dim` integers) in lexicographic order, which
//! is also the order of every coefficient vector built on top of them.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::math::{powf, sqrt};

/// Default cap on the number of indices (or index pairs) a single call may
/// materialize.
pub const DEFAULT_CAP: u128 = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SetKind {
    FullCross,
    NonnegCross,
    Custom,
}

impl SetKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SetKind::FullCross => "full",
            SetKind::NonnegCross => "nonneg",
            SetKind::Custom => "custom",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "full" => Some(SetKind::FullCross),
            "nonneg" => Some(SetKind::NonnegCross),
            "custom" => Some(SetKind::Custom),
            _ => None,
        }
    }
}

impl fmt::Display for SetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A finite, duplicate-free, lexicographically sorted set of indices in `Z^d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrequencySet {
    dim: usize,
    /// Refinement `N` for crosses, 0 for custom sets.
    level: u64,
    kind: SetKind,
    data: Vec<i64>,
}

/// `∏ max(1, |k_l|)`.
pub fn hc_weight(k: &[i64]) -> u128 {
    k.iter().map(|&c| c.unsigned_abs().max(1) as u128).product()
}

/// Number of indices in the hyperbolic cross without materializing it.
pub fn hyperbolic_cross_len(n: u64, d: usize, nonneg: bool) -> u128 {
    fn count(d: usize, budget: u64, nonneg: bool) -> u128 {
        if d == 1 {
            return if nonneg { budget as u128 + 1 } else { 2 * budget as u128 + 1 };
        }
        let mut total = count(d - 1, budget, nonneg);
        let mult = if nonneg { 1 } else { 2 };
        for a in 1..=budget {
            total += mult * count(d - 1, budget / a, nonneg);
        }
        total
    }
    if d == 0 {
        return 0;
    }
    count(d, n, nonneg)
}

impl FrequencySet {
    /// The hyperbolic cross `{k : ∏ max(1,|k_l|) <= n}` (or its part in
    /// `N_0^d`), with the default size cap.
    pub fn hyperbolic_cross(n: u64, d: usize, nonneg: bool) -> Result<Self> {
        Self::hyperbolic_cross_capped(n, d, nonneg, DEFAULT_CAP)
    }

    pub fn hyperbolic_cross_capped(n: u64, d: usize, nonneg: bool, cap: u128) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("hyperbolic cross needs N >= 1"));
        }
        if d == 0 {
            return Err(Error::InvalidArgument("dimension must be at least 1"));
        }
        let len = hyperbolic_cross_len(n, d, nonneg);
        if len > cap {
            return Err(Error::ResourceLimit { what: "hyperbolic cross", required: len, cap });
        }
        let mut data = Vec::with_capacity(len as usize * d);
        let mut prefix = Vec::with_capacity(d);
        enumerate(d, n, nonneg, &mut prefix, &mut data);
        debug_assert_eq!(data.len(), len as usize * d);
        Ok(FrequencySet {
            dim: d,
            level: n,
            kind: if nonneg { SetKind::NonnegCross } else { SetKind::FullCross },
            data,
        })
    }

    /// Builds a custom set from arbitrary indices; sorts and removes duplicates.
    pub fn from_indices<I, K>(dim: usize, indices: I) -> Result<Self>
    where
        I: IntoIterator<Item = K>,
        K: AsRef<[i64]>,
    {
        if dim == 0 {
            return Err(Error::InvalidArgument("dimension must be at least 1"));
        }
        let mut rows: Vec<Vec<i64>> = Vec::new();
        for k in indices {
            let k = k.as_ref();
            if k.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: k.len() });
            }
            rows.push(k.to_vec());
        }
        rows.sort_unstable();
        rows.dedup();
        Ok(FrequencySet { dim, level: 0, kind: SetKind::Custom, data: rows.concat() })
    }

    /// Reassembles a set with a given tag, e.g. when reading it back from
    /// disk. The contents must match the tag.
    pub fn with_kind(mut self, kind: SetKind, level: u64) -> Result<Self> {
        match kind {
            SetKind::Custom => {}
            SetKind::FullCross | SetKind::NonnegCross => {
                let expect = Self::hyperbolic_cross(level, self.dim, kind == SetKind::NonnegCross)?;
                if expect.data != self.data {
                    return Err(Error::InvalidArgument("indices do not match the set kind"));
                }
            }
        }
        self.kind = kind;
        self.level = level;
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.data.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn kind(&self) -> SetKind {
        self.kind
    }

    /// The refinement `N` of a cross; 0 for custom sets.
    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn get(&self, i: usize) -> &[i64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter(&self) -> core::slice::ChunksExact<'_, i64> {
        self.data.chunks_exact(self.dim)
    }

    pub fn as_flat(&self) -> &[i64] {
        &self.data
    }

    /// Position of `k` in the set order, if present.
    pub fn position(&self, k: &[i64]) -> Option<usize> {
        if k.len() != self.dim {
            return None;
        }
        let (mut lo, mut hi) = (0usize, self.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.get(mid).cmp(k) {
                core::cmp::Ordering::Less => lo = mid + 1,
                core::cmp::Ordering::Greater => hi = mid,
                core::cmp::Ordering::Equal => return Some(mid),
            }
        }
        None
    }

    pub fn contains(&self, k: &[i64]) -> bool {
        self.position(k).is_some()
    }

    pub fn is_nonneg(&self) -> bool {
        self.data.iter().all(|&c| c >= 0)
    }

    /// Largest `|k_l|` over the set, per coordinate.
    pub fn max_abs(&self) -> Vec<u64> {
        let mut m = alloc::vec![0u64; self.dim];
        for k in self.iter() {
            for (a, &c) in m.iter_mut().zip(k) {
                *a = (*a).max(c.unsigned_abs());
            }
        }
        m
    }

    /// The closure of the set under all coordinate sign flips. For a
    /// non-negative cross this is the full cross of the same level.
    pub fn mirror(&self) -> Result<Self> {
        match self.kind {
            SetKind::FullCross => return Ok(self.clone()),
            SetKind::NonnegCross => return Self::hyperbolic_cross(self.level, self.dim, false),
            SetKind::Custom => {}
        }
        let mut out: BTreeSet<Vec<i64>> = BTreeSet::new();
        for k in self.iter() {
            for_each_flip(k, |f| {
                out.insert(f.to_vec());
            });
        }
        Self::from_indices(self.dim, out)
    }

    /// The difference set `{k1 - k2 : k1, k2 in I}` with the default cap on
    /// the number of pairs.
    pub fn difference_set(&self) -> Result<Self> {
        self.difference_set_capped(DEFAULT_CAP)
    }

    pub fn difference_set_capped(&self, cap: u128) -> Result<Self> {
        if self.is_empty() {
            return Err(Error::InvalidArgument("difference set of an empty set"));
        }
        let pairs = (self.len() as u128).pow(2);
        if pairs > cap {
            return Err(Error::ResourceLimit { what: "difference set pairs", required: pairs, cap });
        }
        let mut out: BTreeSet<Vec<i64>> = BTreeSet::new();
        let mut t = alloc::vec![0i64; self.dim];
        for a in self.iter() {
            for b in self.iter() {
                for ((t, &x), &y) in t.iter_mut().zip(a).zip(b) {
                    *t = x - y;
                }
                if !out.contains(&t) {
                    out.insert(t.clone());
                }
            }
        }
        Self::from_indices(self.dim, out)
    }
}

fn enumerate(d: usize, budget: u64, nonneg: bool, prefix: &mut Vec<i64>, out: &mut Vec<i64>) {
    let b = budget as i64;
    let lo = if nonneg { 0 } else { -b };
    if d == 1 {
        for c in lo..=b {
            out.extend_from_slice(prefix);
            out.push(c);
        }
        return;
    }
    for c in lo..=b {
        prefix.push(c);
        enumerate(d - 1, budget / c.unsigned_abs().max(1), nonneg, prefix, out);
        prefix.pop();
    }
}

/// Calls `f` once for every distinct sign pattern of `k` (coordinates equal
/// to zero are not flipped, so there are `2^{||k||_0}` calls).
pub fn for_each_flip(k: &[i64], mut f: impl FnMut(&[i64])) {
    let nz: Vec<usize> = (0..k.len()).filter(|&l| k[l] != 0).collect();
    let mut buf = k.to_vec();
    for mask in 0u64..(1u64 << nz.len()) {
        for (bit, &l) in nz.iter().enumerate() {
            buf[l] = if mask >> bit & 1 == 1 { -k[l] } else { k[l] };
        }
        f(&buf);
    }
}

/// Truncated `H^β` norm `(Σ ω_hc(k)^{2β} |c_k|²)^{1/2}` over the given support.
pub fn hnorm(support: &FrequencySet, values: &[Complex64], beta: f64) -> f64 {
    let s: f64 = support
        .iter()
        .zip(values)
        .map(|(k, c)| powf(hc_weight(k) as f64, 2.0 * beta) * c.norm_sqr())
        .sum();
    sqrt(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn brute(n: i64, d: usize, nonneg: bool) -> Vec<Vec<i64>> {
        let lo = if nonneg { 0 } else { -n };
        let mut out = vec![];
        let mut k = vec![lo; d];
        loop {
            if hc_weight(&k) <= n as u128 {
                out.push(k.clone());
            }
            let mut l = d;
            loop {
                if l == 0 {
                    return out;
                }
                l -= 1;
                if k[l] < n {
                    k[l] += 1;
                    break;
                }
                k[l] = lo;
            }
        }
    }

    #[test]
    fn weights() {
        assert_eq!(hc_weight(&[0, 0]), 1);
        assert_eq!(hc_weight(&[-8, 1]), 8);
        assert_eq!(hc_weight(&[2, -4]), 8);
    }

    #[test]
    fn small_cross_sizes() {
        assert_eq!(FrequencySet::hyperbolic_cross(8, 1, false).unwrap().len(), 17);
        assert_eq!(FrequencySet::hyperbolic_cross(8, 2, true).unwrap().len(), 37);
        assert_eq!(FrequencySet::hyperbolic_cross(8, 2, false).unwrap().len(), 113);
    }

    #[test]
    fn larger_cross_sizes_match_independent_count() {
        // Counts from a separate brute-force enumeration script.
        assert_eq!(hyperbolic_cross_len(80, 2, false), 1793);
        assert_eq!(hyperbolic_cross_len(80, 2, true), 529);
        assert_eq!(hyperbolic_cross_len(50, 4, false), 43385);
        assert_eq!(hyperbolic_cross_len(50, 4, true), 4947);
        assert_eq!(hyperbolic_cross_len(10, 7, false), 280017);
        assert_eq!(hyperbolic_cross_len(30, 7, false), 2160945);
        assert_eq!(hyperbolic_cross_len(30, 7, true), 67384);
    }

    #[test]
    fn enumeration_matches_brute_force() {
        for d in 1..=3 {
            for n in 1..=16 {
                for nonneg in [false, true] {
                    let s = FrequencySet::hyperbolic_cross(n as u64, d, nonneg).unwrap();
                    let b = brute(n, d, nonneg);
                    assert_eq!(s.len(), b.len());
                    for (x, y) in s.iter().zip(&b) {
                        assert_eq!(x, &y[..]);
                    }
                }
            }
        }
    }

    #[test]
    fn nonneg_is_filtered_full_cross() {
        for d in 1..=3 {
            for n in 1..=16u64 {
                let full = FrequencySet::hyperbolic_cross(n, d, false).unwrap();
                let nn = FrequencySet::hyperbolic_cross(n, d, true).unwrap();
                let filtered: Vec<&[i64]> = full.iter().filter(|k| k.iter().all(|&c| c >= 0)).collect();
                assert_eq!(filtered, nn.iter().collect::<Vec<_>>());
            }
        }
    }

    #[test]
    fn cap_is_enforced() {
        let e = FrequencySet::hyperbolic_cross_capped(30, 7, false, 1000).unwrap_err();
        assert!(matches!(e, Error::ResourceLimit { required: 2160945, .. }));
        assert!(FrequencySet::hyperbolic_cross(0, 2, false).is_err());
    }

    #[test]
    fn difference_sets() {
        let s = FrequencySet::from_indices(1, [[0i64]]).unwrap();
        assert_eq!(s.difference_set().unwrap().as_flat(), &[0]);
        let s = FrequencySet::from_indices(1, [[0i64], [1]]).unwrap();
        assert_eq!(s.difference_set().unwrap().as_flat(), &[-1, 0, 1]);
        let s = FrequencySet::hyperbolic_cross(2, 1, false).unwrap();
        let dset = s.difference_set().unwrap();
        assert_eq!(dset.as_flat(), &[-4, -3, -2, -1, 0, 1, 2, 3, 4]);
        let s = FrequencySet::hyperbolic_cross(4, 2, true).unwrap();
        let dset = s.difference_set().unwrap();
        for k in s.iter() {
            assert!(dset.contains(k));
            let neg: Vec<i64> = k.iter().map(|c| -c).collect();
            assert!(dset.contains(&neg));
        }
        assert!(s.difference_set_capped(10).is_err());
    }

    #[test]
    fn mirror_of_nonneg_cross_is_full_cross() {
        let nn = FrequencySet::hyperbolic_cross(6, 3, true).unwrap();
        let custom = FrequencySet::from_indices(3, nn.iter()).unwrap();
        let full = FrequencySet::hyperbolic_cross(6, 3, false).unwrap();
        assert_eq!(custom.mirror().unwrap().as_flat(), full.as_flat());
        assert_eq!(nn.mirror().unwrap(), full);
    }

    #[test]
    fn positions() {
        let s = FrequencySet::hyperbolic_cross(5, 2, false).unwrap();
        for (i, k) in s.iter().enumerate() {
            assert_eq!(s.position(k), Some(i));
        }
        assert_eq!(s.position(&[3, 3]), None);
        assert_eq!(s.position(&[1]), None);
    }

    #[test]
    fn hnorm_values() {
        let one = FrequencySet::from_indices(1, [[0i64]]).unwrap();
        assert_eq!(hnorm(&one, &[Complex64::new(1.0, 0.0)], 7.0), 1.0);
        let two = FrequencySet::from_indices(1, [[2i64]]).unwrap();
        assert!((hnorm(&two, &[Complex64::new(1.0, 0.0)], 1.0) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn flips() {
        let mut seen = vec![];
        for_each_flip(&[2, 0, -1], |f| seen.push(f.to_vec()));
        assert_eq!(seen, vec![vec![2, 0, -1], vec![-2, 0, -1], vec![2, 0, 1], vec![-2, 0, 1]]);
    }
}
