mod common;

use std::sync::Arc;

use common::*;
use latapprox_core::fft::{dft, Direction, FftPlan};
use latapprox_core::fourier::{evaluate, reconstruct};
use latapprox_core::lattice::{
    exact_quadrature, find_reconstructing_lattice, is_reconstructing_by_differences, SearchOptions,
};
use latapprox_core::{CoefficientVector, Complex64, FrequencySet, Rank1Lattice, Verification};
use proptest::prelude::*;

fn small_set() -> impl Strategy<Value = FrequencySet> {
    (1usize..=3, 1u64..=12).prop_filter_map("at most 200 indices", |(d, n)| {
        let s = FrequencySet::hyperbolic_cross(n, d, false).ok()?;
        (s.len() <= 200).then_some(s)
    })
}

fn lattice_for_set(d: usize) -> impl Strategy<Value = Rank1Lattice> {
    (2u64..400).prop_flat_map(move |m| {
        proptest::collection::vec(0..m as i64, d).prop_map(move |z| Rank1Lattice::new(z, m).unwrap())
    })
}

/// Brute force over all pairs of the set.
fn injective_by_pairs(lat: &Rank1Lattice, set: &FrequencySet) -> bool {
    let bins: Vec<u64> = set.iter().map(|k| lat.bin(k)).collect();
    (0..bins.len()).all(|a| (a + 1..bins.len()).all(|b| bins[a] != bins[b]))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn reconstruction_checks_agree(
        (set, lat) in small_set().prop_flat_map(|s| { let d = s.dim(); (Just(s), lattice_for_set(d)) })
    ) {
        let brute = injective_by_pairs(&lat, &set);
        prop_assert_eq!(lat.is_reconstructing(&set), brute);
        prop_assert_eq!(is_reconstructing_by_differences(&lat, &set), brute);
    }

    #[test]
    fn fft_matches_naive_dft(n in 1usize..300, seed in any::<u64>()) {
        let mut r = rng(seed);
        let x = random_coeffs(&mut r, n, false);
        let mut fast = x.clone();
        FftPlan::new(n).forward(&mut fast);
        let naive: Vec<Complex64> = (0..n)
            .map(|k| (0..n).map(|j| x[j] * naive_exp(&[(j * k) as i64], &[-1.0 / n as f64])).sum())
            .collect();
        prop_assert!(max_rel_error(&fast, &naive) < 1e-12);
        prop_assert!(max_rel_error(&dft(&fast, Direction::Inverse), &x) < 1e-12);
    }
}

#[test]
fn evaluate_matches_naive_sum() {
    for (d, n, seed) in [(1, 20, 1), (2, 8, 2), (3, 6, 3), (4, 4, 4)] {
        let set = Arc::new(FrequencySet::hyperbolic_cross(n, d, false).unwrap());
        let lat = lattice_for(n, d, seed);
        let mut r = rng(seed);
        let c = CoefficientVector::new(set.clone(), random_coeffs(&mut r, set.len(), false)).unwrap();
        let fast = evaluate(&c, &lat).unwrap();
        let naive: Vec<Complex64> = (0..lat.size())
            .map(|j| {
                let x = lat.node(j);
                set.iter().zip(c.values()).map(|(k, v)| v * naive_exp(k, &x)).sum()
            })
            .collect();
        assert!(max_rel_error(fast.values(), &naive) < 1e-12);
        let back = reconstruct(&fast, &set, Verification::Verify).unwrap();
        assert!(max_rel_error(back.values(), c.values()) < 1e-12);
    }
}

/// Products of two polynomials on `I` live on `I - I`, which a
/// reconstructing lattice integrates exactly.
#[test]
fn products_integrate_exactly() {
    for (d, n, seed) in [(1, 16, 5), (2, 8, 6), (3, 4, 7)] {
        let set = Arc::new(FrequencySet::hyperbolic_cross(n, d, false).unwrap());
        let lat = find_reconstructing_lattice(&set, &SearchOptions::with_seed(seed)).unwrap();
        let mut r = rng(seed);
        let a = CoefficientVector::new(set.clone(), random_coeffs(&mut r, set.len(), false)).unwrap();
        let b = CoefficientVector::new(set.clone(), random_coeffs(&mut r, set.len(), false)).unwrap();
        let fa = evaluate(&a, &lat).unwrap();
        let fb = evaluate(&b, &lat).unwrap();
        let prod: Vec<Complex64> = fa.values().iter().zip(fb.values()).map(|(x, y)| x.conj() * y).collect();
        let exact: Complex64 = a.values().iter().zip(b.values()).map(|(x, y)| x.conj() * y).sum();
        let q = exact_quadrature(&prod).unwrap();
        assert!((q - exact).norm() <= 1e-12 * exact.norm().max(1.0), "d={d}: {q} vs {exact}");
    }
}

#[test]
fn search_results_reconstruct_and_are_reproducible() {
    for (d, n) in [(1, 30), (2, 16), (3, 8), (5, 4)] {
        let set = FrequencySet::hyperbolic_cross(n, d, false).unwrap();
        for opts in [SearchOptions::with_seed(11), SearchOptions::cbc()] {
            let l = find_reconstructing_lattice(&set, &opts).unwrap();
            assert!(injective_by_pairs(&l, &set));
            assert_eq!(l, find_reconstructing_lattice(&set, &opts).unwrap());
        }
    }
}
