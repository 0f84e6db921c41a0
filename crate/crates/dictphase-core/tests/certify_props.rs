//! Certifier properties against independent enumerations.

use dictphase_core::certify::{
    drip_exact, nsp_real_check, nsp_real_counterexample_to_failure, sdrip_exact, NspStatus,
    NspWitness, DEFAULT_CERT_BUDGET,
};
use dictphase_core::frames::{make_identity_frame, make_random_tight_frame, Frame};
use dictphase_core::linalg::{self, symmetric_eigen_extremes, Matrix};
use dictphase_core::measure::{gaussian_ensemble, phaseless_forward, MeasurementEnsemble};
use dictphase_core::rng::RngStream;
use dictphase_core::subsets::combinations;

/// Classical restricted-isometry constant for the identity dictionary:
/// eigenvalue extremes of the support submatrices `A_S^T A_S`, computed
/// without any deflation machinery.
fn classical_rip_brute(a: &MeasurementEnsemble, k: usize) -> f64 {
    let mut delta: f64 = 0.0;
    for support in combinations(a.cols(), k) {
        let block = a.matrix().select_cols(&support);
        let (lo, hi) = symmetric_eigen_extremes(&block.gram());
        delta = delta.max((1.0 - lo).max(hi - 1.0));
    }
    delta
}

/// Naive two-sided envelope over ALL row subsets with `|I| >= m/2`,
/// including the non-minimal sizes the fast path skips.
fn sdrip_naive(a: &MeasurementEnsemble, frame: &Frame, k: usize) -> (f64, f64) {
    let m = a.rows();
    let d = frame.matrix().unwrap();
    let mut theta_minus = f64::INFINITY;
    let mut theta_plus = f64::NEG_INFINITY;
    for size in m.div_ceil(2)..=m {
        for subset in combinations(m, size) {
            let a_i = a.matrix().select_rows(&subset);
            for support in combinations(d.cols(), k) {
                let block = d.select_cols(&support);
                let dec = linalg::svd(&block);
                if dec.rank(linalg::RANK_REL_TOL) == 0 {
                    continue;
                }
                let q = dec.range_basis(linalg::RANK_REL_TOL);
                let (lo, hi) = symmetric_eigen_extremes(&a_i.matmul(&q).gram());
                theta_minus = theta_minus.min(lo);
                theta_plus = theta_plus.max(hi);
            }
        }
    }
    (theta_minus, theta_plus)
}

#[test]
fn identity_dictionary_reduces_to_classical_rip() {
    for seed in 0..4u64 {
        let m = 6 + (seed % 3) as usize;
        let n = 4 + (seed % 2) as usize;
        let a = gaussian_ensemble(m, n, seed).scaled(1.0 / (m as f64).sqrt());
        let frame = make_identity_frame(n);
        for k in 1..=3usize.min(n) {
            let rep = drip_exact(&a, &frame, k, DEFAULT_CERT_BUDGET).unwrap();
            let brute = classical_rip_brute(&a, k);
            assert!(
                (rep.delta - brute).abs() <= 1e-10 * (1.0 + brute),
                "seed {} k {}: {} vs {}",
                seed,
                k,
                rep.delta,
                brute
            );
        }
    }
}

#[test]
fn sdrip_fast_path_matches_naive_enumeration() {
    for seed in 0..3u64 {
        let m = 6 + (seed % 2) as usize * 3; // 6 or 9: even and odd
        let n = 3;
        let a = gaussian_ensemble(m, n, 40 + seed).scaled(1.0 / (m as f64).sqrt());
        let frame = make_random_tight_frame(n, 5, 40 + seed).unwrap();
        let rep = sdrip_exact(&a, &frame, 1, DEFAULT_CERT_BUDGET).unwrap();
        let (naive_minus, naive_plus) = sdrip_naive(&a, &frame, 1);
        assert!(
            (rep.theta_minus.unwrap() - naive_minus).abs() <= 1e-10,
            "seed {}: {} vs {}",
            seed,
            rep.theta_minus.unwrap(),
            naive_minus
        );
        assert!(
            (rep.theta_plus.unwrap() - naive_plus).abs() <= 1e-10,
            "seed {}: {} vs {}",
            seed,
            rep.theta_plus.unwrap(),
            naive_plus
        );
    }
}

#[test]
fn subset_growth_never_shrinks_energy() {
    let mut rng = RngStream::from_seed(12);
    for seed in 0..20u64 {
        let a = gaussian_ensemble(8, 4, 70 + seed);
        let small = rng.subset(8, 3);
        let mut grown = small.clone();
        for i in 0..8 {
            if !grown.contains(&i) {
                grown.push(i);
                break;
            }
        }
        grown.sort_unstable();
        let x = rng.normal_vec(4);
        let e_small = linalg::norm2(&a.matrix().select_rows(&small).matvec(&x));
        let e_big = linalg::norm2(&a.matrix().select_rows(&grown).matvec(&x));
        assert!(e_small <= e_big + 1e-12);
    }
}

#[test]
fn sdrip_envelope_widens_with_order() {
    let m = 8;
    let a = gaussian_ensemble(m, 4, 55).scaled(1.0 / (m as f64).sqrt());
    let frame = make_random_tight_frame(4, 6, 55).unwrap();
    let mut prev_minus = f64::INFINITY;
    let mut prev_plus = f64::NEG_INFINITY;
    for k in 1..=3 {
        let rep = sdrip_exact(&a, &frame, k, DEFAULT_CERT_BUDGET).unwrap();
        let lo = rep.theta_minus.unwrap();
        let hi = rep.theta_plus.unwrap();
        assert!(lo <= prev_minus + 1e-12);
        assert!(hi >= prev_plus - 1e-12);
        prev_minus = lo;
        prev_plus = hi;
    }
}

#[test]
fn nsp_counterexamples_become_equal_magnitude_pairs() {
    // Single-measurement planar instances are always ambiguous: the l1
    // minimizer on the feasible line sits at an analysis-zero vertex,
    // which generically differs from the dictionary ray of the truth.
    // Every returned counterexample must convert into a pair with
    // identical phaseless data and no worse analysis objective.
    let mut found = 0;
    for seed in 0..10u64 {
        let (n, m, frame) = if seed % 2 == 0 {
            (2usize, 1usize, make_identity_frame(2))
        } else {
            (2, 1, make_random_tight_frame(2, 3, 90 + seed).unwrap())
        };
        let a = gaussian_ensemble(m, n, 90 + seed);
        let verdict = nsp_real_check(&a, &frame, 1, 100_000, seed).unwrap();
        assert_eq!(
            verdict.status,
            NspStatus::Counterexample,
            "seed {}: single-row instance must be ambiguous",
            seed
        );
        found += 1;
        let Some(NspWitness::Real(w)) = verdict.witness else {
            panic!("real witness expected")
        };
        let (x0, xt) = nsp_real_counterexample_to_failure(&a, &w.u, &w.v).unwrap();
        let b0 = phaseless_forward(&a, &x0).unwrap();
        let bt = phaseless_forward(&a, &xt).unwrap();
        assert!(linalg::norm_inf(&linalg::sub(&b0, &bt)) <= 1e-9);
        let d = frame.matrix().unwrap();
        assert!(linalg::norm1(&d.tr_matvec(&xt)) <= linalg::norm1(&d.tr_matvec(&x0)) + 1e-9);
    }
    assert_eq!(found, 10);
}

#[test]
fn drip_rejects_shape_mismatch() {
    let a = gaussian_ensemble(4, 3, 1);
    let frame = make_random_tight_frame(4, 6, 1).unwrap();
    assert!(drip_exact(&a, &frame, 1, DEFAULT_CERT_BUDGET).is_err());
}

#[test]
fn doubled_orthogonal_rows_have_unit_half_extremes() {
    // Each copy of an orthogonal block acts isometrically on every
    // support image.
    let g = make_random_tight_frame(3, 3, 3).unwrap().re_matrix().clone();
    let doubled = MeasurementEnsemble::from_matrix(g.vstack(&g), 0).unwrap();
    let frame = make_identity_frame(3);
    let d: &Matrix = frame.re_matrix();
    for half in [[0usize, 1, 2], [3, 4, 5]] {
        let block = doubled.matrix().select_rows(&half);
        for support in combinations(d.cols(), 1) {
            let cols = d.select_cols(&support);
            let q = linalg::svd(&cols).range_basis(linalg::RANK_REL_TOL);
            let (lo, hi) = symmetric_eigen_extremes(&block.matmul(&q).gram());
            assert!((lo - 1.0).abs() <= 1e-12 && (hi - 1.0).abs() <= 1e-12);
        }
    }
}
