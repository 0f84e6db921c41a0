//! Randomized sweeps over the lemma checkers.

use dictphase_core::certify::{drip_exact, DEFAULT_CERT_BUDGET};
use dictphase_core::frames::{make_identity_frame, make_random_tight_frame};
use dictphase_core::lemmas::{check_lemma_bound, polytope_decompose, polytope_verify, power_sum_check};
use dictphase_core::linalg;
use dictphase_core::measure::{gaussian_ensemble, phaseless_forward, PhaselessObservation};
use dictphase_core::rng::RngStream;
use dictphase_core::solver::{oracle_sign_enumeration, pr_l1_analysis, SolverConfig};

/// Random member of `T(alpha, s)` with support up to `max_support`.
fn random_polytope_instance(rng: &mut RngStream, max_support: usize) -> (Vec<f64>, f64, usize) {
    let len = 1 + rng.below(max_support + 2);
    let nnz = 1 + rng.below(max_support.min(len));
    let support = rng.subset(len, nnz);
    let mut v = vec![0.0; len];
    for &i in &support {
        v[i] = rng.normal() * (1.0 + 2.0 * rng.uniform01());
    }
    let linf = linalg::norm_inf(&v).max(1e-6);
    // Mix strict-interior and near-boundary caps.
    let alpha = if rng.uniform01() < 0.3 {
        linf
    } else {
        linf * (1.0 + 2.0 * rng.uniform01())
    };
    let min_s = (linalg::norm1(&v) / alpha).ceil() as usize;
    let s = min_s.max(1) + rng.below(3);
    (v, alpha, s)
}

#[test]
fn decomposition_round_trip_500() {
    let mut rng = RngStream::from_seed(21);
    for trial in 0..500 {
        let (v, alpha, s) = random_polytope_instance(&mut rng, 8);
        let dec = polytope_decompose(&v, alpha, s)
            .unwrap_or_else(|e| panic!("trial {}: decompose failed: {}", trial, e));
        polytope_verify(&v, alpha, s, &dec)
            .unwrap_or_else(|e| panic!("trial {}: verification failed: {}", trial, e));
    }
}

#[test]
fn power_sum_random_sweep() {
    let mut rng = RngStream::from_seed(22);
    let exponents = [1.0, 1.5, 2.0, 3.0];
    let mut checked = 0u32;
    while checked < 10_000 {
        let len = 2 + rng.below(10);
        let mut a: Vec<f64> = (0..len).map(|_| rng.uniform01() * 3.0).collect();
        a.sort_by(|x, y| y.partial_cmp(x).unwrap());
        let r = 1 + rng.below(len);
        let top: f64 = a[..r].iter().sum();
        let tail: f64 = a[r..].iter().sum();
        if top < tail {
            continue;
        }
        let alpha = exponents[rng.below(4)];
        assert!(
            power_sum_check(&a, r, alpha).unwrap(),
            "power-sum contradiction at len {} r {} alpha {}",
            len,
            r,
            alpha
        );
        checked += 1;
    }
}

#[test]
fn bound_holds_for_solver_output_with_certified_delta() {
    // Identity dictionary, heavily oversampled: delta at order 2 is
    // comfortably admissible for t = 2, and the solver recovers exactly,
    // so the bound holds with slack.
    let n = 6;
    let m = 32;
    let k = 1;
    let t = 2.0;
    let a = gaussian_ensemble(m, n, 1234).scaled(1.0 / (m as f64).sqrt());
    let frame = make_identity_frame(n);
    let mut rng = RngStream::from_seed(4321);
    let mut x0 = vec![0.0; n];
    x0[rng.below(n)] = 1.0 + rng.uniform01();

    let delta = drip_exact(&a, &frame, 2, DEFAULT_CERT_BUDGET).unwrap().delta;
    assert!(delta < (0.5f64).sqrt(), "inadmissible delta {}", delta);

    let b = phaseless_forward(&a, &x0).unwrap();
    let cfg = SolverConfig {
        restarts: 8,
        ..SolverConfig::default()
    };
    let res = pr_l1_analysis(&a, &PhaselessObservation::exact(b.clone()), &frame, &cfg).unwrap();
    assert!(res.converged);

    // Orient the estimate to the closer sign before applying the bound.
    let xhat = if linalg::norm2(&linalg::sub(&res.estimate, &x0))
        <= linalg::norm2(&linalg::add(&res.estimate, &x0))
    {
        res.estimate.clone()
    } else {
        linalg::scaled(-1.0, &res.estimate)
    };
    let eps_lin = linalg::norm2(&linalg::sub(
        &a.matrix().matvec(&xhat),
        &a.matrix().matvec(&x0),
    ));
    let rho = (res.objective - linalg::norm1(&frame.analyze(&x0).unwrap())).max(0.0) + 1e-12;
    let ok = check_lemma_bound(&a, &frame, &x0, &xhat, rho, eps_lin + 1e-12, t, delta, k).unwrap();
    assert!(ok, "stability bound violated on a certified instance");

    // Same bound for the oracle path at oracle scale.
    let m2 = 16;
    let a2 = gaussian_ensemble(m2, n, 77).scaled(1.0 / (m2 as f64).sqrt());
    let delta2 = drip_exact(&a2, &frame, 2, DEFAULT_CERT_BUDGET).unwrap().delta;
    let t2 = 4.0;
    let edge = ((t2 - 1.0) / t2 as f64).sqrt();
    if delta2 < edge {
        let b2 = phaseless_forward(&a2, &x0).unwrap();
        let oracle = oracle_sign_enumeration(&a2, &b2, &frame).unwrap();
        let est = &oracle.result.estimate;
        let xhat2 = if linalg::norm2(&linalg::sub(est, &x0))
            <= linalg::norm2(&linalg::add(est, &x0))
        {
            est.clone()
        } else {
            linalg::scaled(-1.0, est)
        };
        let eps2 = linalg::norm2(&linalg::sub(
            &a2.matrix().matvec(&xhat2),
            &a2.matrix().matvec(&x0),
        ));
        let obj0 = linalg::norm1(&frame.analyze(&x0).unwrap());
        let rho2 = (oracle.result.objective - obj0).max(0.0) + 1e-12;
        let ok2 =
            check_lemma_bound(&a2, &frame, &x0, &xhat2, rho2, eps2 + 1e-12, t2, delta2, k)
                .unwrap();
        assert!(ok2, "bound violated for the oracle minimizer");
    }
}

#[test]
fn bound_holds_under_feasible_rejection_sampling() {
    // Random points of the feasible set around x0, all within the bound.
    let n = 5;
    let m = 24;
    let k = 1;
    let t = 2.0;
    let a = gaussian_ensemble(m, n, 999).scaled(1.0 / (m as f64).sqrt());
    let frame = make_random_tight_frame(n, 7, 999).unwrap();
    let delta = drip_exact(&a, &frame, 2, DEFAULT_CERT_BUDGET).unwrap().delta;
    let edge = ((t - 1.0) / t as f64).sqrt();
    assert!(delta < edge, "pick a milder instance: delta = {}", delta);

    let mut rng = RngStream::from_seed(1000);
    let mut z0 = vec![0.0; 7];
    z0[2] = 1.5;
    let x0 = frame.synthesize(&z0).unwrap();
    let obj0 = linalg::norm1(&frame.analyze(&x0).unwrap());

    let mut accepted = 0;
    let mut trial = 0;
    while accepted < 500 && trial < 50_000 {
        trial += 1;
        let scale = 0.3 * rng.uniform01();
        let mut xhat = x0.clone();
        let dir = rng.normal_vec(n);
        linalg::axpy(scale / linalg::norm2(&dir).max(1e-12), &dir, &mut xhat);
        let objh = linalg::norm1(&frame.analyze(&xhat).unwrap());
        let rho = 0.05 * obj0;
        if objh > obj0 + rho {
            continue;
        }
        let eps = 0.25;
        let lin = linalg::norm2(&linalg::sub(
            &a.matrix().matvec(&xhat),
            &a.matrix().matvec(&x0),
        ));
        if lin > eps {
            continue;
        }
        accepted += 1;
        assert!(
            check_lemma_bound(&a, &frame, &x0, &xhat, rho, eps, t, delta, k).unwrap(),
            "bound violated by a feasible perturbation (trial {})",
            trial
        );
    }
    assert!(accepted >= 500, "rejection sampling starved: {}", accepted);
}
