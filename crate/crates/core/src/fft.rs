//! Arbitrary-length complex DFT.
//!
//! Lengths whose prime factors are all small use a recursive mixed-radix
//! decimation-in-time transform (radix 4 and 2 specialised, other small
//! primes through a generic butterfly). Anything with a larger prime factor
//! goes through Bluestein's chirp-z algorithm on a power-of-two plan.
//!
//! Conventions: `forward` computes `X_b = Σ_j x_j e^{-2πi j b / n}`
//! (unnormalized); `inverse` computes `x_j = (1/n) Σ_b X_b e^{2πi j b / n}`.

use alloc::boxed::Box;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::math::root_of_unity;

type C = Complex64;

const MAX_DIRECT_PRIME: usize = 31;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

/// Powers of `e^{-2πi/n}` from a two-level table: `W^t = coarse[t >> s] * fine[t & mask]`.
#[derive(Debug, Clone)]
struct Twiddles {
    n: usize,
    shift: u32,
    mask: usize,
    coarse: Vec<C>,
    fine: Vec<C>,
}

impl Twiddles {
    fn new(n: usize) -> Self {
        let mut shift = 0u32;
        while (1usize << (2 * shift)) < n {
            shift += 1;
        }
        let s = 1usize << shift;
        let fine = (0..s).map(|j| root_of_unity(j as u64, n as u64)).collect();
        let coarse = (0..n.div_ceil(s)).map(|i| root_of_unity((i * s) as u64, n as u64)).collect();
        Twiddles { n, shift, mask: s - 1, coarse, fine }
    }

    #[inline]
    fn get(&self, t: usize) -> C {
        let t = t % self.n;
        self.coarse[t >> self.shift] * self.fine[t & self.mask]
    }
}

#[derive(Debug, Clone)]
enum Kind {
    Trivial,
    MixedRadix { factors: Vec<usize>, tw: Twiddles },
    Bluestein { inner: Box<FftPlan>, chirp: Vec<C>, kernel: Vec<C> },
}

/// A reusable transform plan for one length.
#[derive(Debug, Clone)]
pub struct FftPlan {
    n: usize,
    kind: Kind,
}

fn factorize(mut n: usize) -> Vec<usize> {
    let mut f = Vec::new();
    while n % 4 == 0 {
        f.push(4);
        n /= 4;
    }
    if n % 2 == 0 {
        f.push(2);
        n /= 2;
    }
    let mut p = 3;
    while p * p <= n {
        while n % p == 0 {
            f.push(p);
            n /= p;
        }
        p += 2;
    }
    if n > 1 {
        f.push(n);
    }
    f
}

impl FftPlan {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "transform length must be positive");
        if n == 1 {
            return FftPlan { n, kind: Kind::Trivial };
        }
        let factors = factorize(n);
        if factors.iter().all(|&p| p <= MAX_DIRECT_PRIME) {
            return FftPlan { n, kind: Kind::MixedRadix { factors, tw: Twiddles::new(n) } };
        }
        let l = (2 * n - 1).next_power_of_two();
        let inner = FftPlan::new(l);
        // chirp_j = e^{-iπ j²/n}, with j² reduced mod 2n exactly.
        let two_n = 2 * n as u64;
        let chirp: Vec<C> = (0..n as u64)
            .map(|j| root_of_unity(((j as u128 * j as u128) % two_n as u128) as u64, two_n))
            .collect();
        let mut kernel = alloc::vec![C::new(0.0, 0.0); l];
        kernel[0] = chirp[0].conj();
        for j in 1..n {
            kernel[j] = chirp[j].conj();
            kernel[l - j] = chirp[j].conj();
        }
        inner.forward(&mut kernel);
        let scale = 1.0 / l as f64;
        for v in kernel.iter_mut() {
            *v *= scale;
        }
        FftPlan { n, kind: Kind::Bluestein { inner: Box::new(inner), chirp, kernel } }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// In-place unnormalized forward transform.
    pub fn forward(&self, data: &mut [C]) {
        assert_eq!(data.len(), self.n, "buffer length does not match the plan");
        match &self.kind {
            Kind::Trivial => {}
            Kind::MixedRadix { factors, tw } => {
                let input = data.to_vec();
                mixed_radix(&input, 1, data, factors, tw, self.n);
            }
            Kind::Bluestein { inner, chirp, kernel } => {
                let l = kernel.len();
                let mut work = alloc::vec![C::new(0.0, 0.0); l];
                for ((w, &x), &c) in work.iter_mut().zip(data.iter()).zip(chirp) {
                    *w = x * c;
                }
                inner.forward(&mut work);
                for (w, &k) in work.iter_mut().zip(kernel) {
                    *w = (*w * k).conj();
                }
                // Inverse through conjugation; the 1/l factor is in the kernel.
                inner.forward(&mut work);
                for ((x, &w), &c) in data.iter_mut().zip(&work).zip(chirp) {
                    *x = w.conj() * c;
                }
            }
        }
    }

    /// In-place inverse transform without the `1/n` factor.
    pub fn inverse_unnormalized(&self, data: &mut [C]) {
        for v in data.iter_mut() {
            *v = v.conj();
        }
        self.forward(data);
        for v in data.iter_mut() {
            *v = v.conj();
        }
    }

    /// In-place inverse transform including the `1/n` factor.
    pub fn inverse(&self, data: &mut [C]) {
        self.inverse_unnormalized(data);
        let s = 1.0 / self.n as f64;
        for v in data.iter_mut() {
            *v *= s;
        }
    }
}

fn mixed_radix(input: &[C], stride: usize, out: &mut [C], factors: &[usize], tw: &Twiddles, full: usize) {
    let n = out.len();
    if n == 1 {
        out[0] = input[0];
        return;
    }
    let p = factors[0];
    let m = n / p;
    for q in 0..p {
        mixed_radix(&input[q * stride..], stride * p, &mut out[q * m..(q + 1) * m], &factors[1..], tw, full);
    }
    // Twiddle W_n^{qk} = W_full^{qk * full/n}.
    let tstep = full / n;
    match p {
        2 => {
            for k in 0..m {
                let a = out[k];
                let b = out[m + k] * tw.get(k * tstep);
                out[k] = a + b;
                out[m + k] = a - b;
            }
        }
        4 => {
            for k in 0..m {
                let t0 = out[k];
                let t1 = out[m + k] * tw.get(k * tstep);
                let t2 = out[2 * m + k] * tw.get(2 * k * tstep);
                let t3 = out[3 * m + k] * tw.get(3 * k * tstep);
                let s02 = t0 + t2;
                let d02 = t0 - t2;
                let s13 = t1 + t3;
                let d13 = t1 - t3;
                // -i * d13
                let rot = C::new(d13.im, -d13.re);
                out[k] = s02 + s13;
                out[m + k] = d02 + rot;
                out[2 * m + k] = s02 - s13;
                out[3 * m + k] = d02 - rot;
            }
        }
        _ => {
            let wp: Vec<C> = (0..p).map(|r| tw.get(r * (full / p))).collect();
            let mut t = [C::new(0.0, 0.0); MAX_DIRECT_PRIME];
            for k in 0..m {
                t[0] = out[k];
                for q in 1..p {
                    t[q] = out[q * m + k] * tw.get(q * k * tstep);
                }
                for qq in 0..p {
                    let mut acc = t[0];
                    for q in 1..p {
                        acc += t[q] * wp[(q * qq) % p];
                    }
                    out[qq * m + k] = acc;
                }
            }
        }
    }
}

/// One-shot transform with the module conventions (inverse is `1/n`-normalized).
pub fn dft(values: &[C], direction: Direction) -> Vec<C> {
    let mut v = values.to_vec();
    if v.is_empty() {
        return v;
    }
    let plan = FftPlan::new(v.len());
    match direction {
        Direction::Forward => plan.forward(&mut v),
        Direction::Inverse => plan.inverse(&mut v),
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn naive(x: &[C]) -> Vec<C> {
        let n = x.len() as u64;
        (0..n)
            .map(|b| {
                x.iter()
                    .enumerate()
                    .map(|(j, &v)| v * root_of_unity((j as u64 * b) % n, n))
                    .fold(C::new(0.0, 0.0), |a, b| a + b)
            })
            .collect()
    }

    fn rel_l2(a: &[C], b: &[C]) -> f64 {
        let num: f64 = a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum();
        let den: f64 = b.iter().map(|y| y.norm_sqr()).sum();
        (num / den).sqrt()
    }

    fn random(n: usize, seed: u64) -> Vec<C> {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect()
    }

    #[test]
    fn identity_and_delta() {
        let x = [C::new(2.5, -1.0)];
        assert_eq!(dft(&x, Direction::Forward), x.to_vec());
        let mut e0 = alloc::vec![C::new(0.0, 0.0); 12];
        e0[0] = C::new(1.0, 0.0);
        for v in dft(&e0, Direction::Forward) {
            assert_eq!(v, C::new(1.0, 0.0));
        }
    }

    #[test]
    fn matches_naive_for_many_lengths() {
        for n in (1..=130).chain([210, 256, 343, 961, 997, 1000, 1009, 1024, 2 * 37 * 41, 4096]) {
            let x = random(n, n as u64);
            let got = dft(&x, Direction::Forward);
            let e = rel_l2(&got, &naive(&x));
            assert!(e < 1e-12, "n = {n}: {e}");
            let back = dft(&got, Direction::Inverse);
            assert!(rel_l2(&back, &x) < 1e-12, "round trip n = {n}");
        }
    }

    #[test]
    fn parseval() {
        let x = random(1013, 9);
        let y = dft(&x, Direction::Forward);
        let ex: f64 = x.iter().map(|v| v.norm_sqr()).sum();
        let ey: f64 = y.iter().map(|v| v.norm_sqr()).sum();
        assert!((ey / 1013.0 - ex).abs() < 1e-12 * ex);
    }

    #[test]
    fn real_input_is_hermitian() {
        let n = 77;
        let x: Vec<C> = random(n, 4).iter().map(|v| C::new(v.re, 0.0)).collect();
        let y = dft(&x, Direction::Forward);
        for b in 1..n {
            assert!((y[b] - y[n - b].conj()).norm() < 1e-12);
        }
    }
}
