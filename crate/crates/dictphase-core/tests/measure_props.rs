//! Property tests for ensembles, the forward model, and bounded noise.

use dictphase_core::linalg;
use dictphase_core::measure::{
    add_bounded_noise, gaussian_ensemble, phaseless_forward, row_restrict,
};
use dictphase_core::rng::RngStream;

#[test]
fn forward_model_equals_entrywise_abs() {
    let mut rng = RngStream::from_seed(31);
    for trial in 0..1000u64 {
        let m = 1 + (trial % 6) as usize;
        let n = 1 + (trial % 4) as usize;
        let a = gaussian_ensemble(m, n, trial);
        let x = rng.normal_vec(n);
        let b = phaseless_forward(&a, &x).unwrap();
        let ax = a.matrix().matvec(&x);
        for (bi, axi) in b.iter().zip(&ax) {
            assert_eq!(*bi, axi.abs());
        }
    }
}

#[test]
fn gaussian_sample_mean_is_small() {
    // 200x200 draw: |mean| <= 0.02 covers 3 sigma / sqrt(mn) with margin.
    let a = gaussian_ensemble(200, 200, 424242);
    let mean: f64 = a.matrix().data().iter().sum::<f64>() / 40_000.0;
    assert!(mean.abs() <= 0.02, "sample mean {}", mean);
}

#[test]
fn row_partition_reassembles_the_ensemble() {
    let mut rng = RngStream::from_seed(9);
    for trial in 0..50u64 {
        let m = 2 + (trial % 7) as usize;
        let n = 1 + (trial % 3) as usize;
        let a = gaussian_ensemble(m, n, 100 + trial);
        let size = rng.below(m + 1);
        let t = rng.subset(m, size);
        let tc: Vec<usize> = (0..m).filter(|i| !t.contains(i)).collect();
        let top = row_restrict(&a, &t).unwrap();
        let bottom = row_restrict(&a, &tc).unwrap();
        // Stacking the two restrictions is the original up to the row
        // permutation that sorts (t, tc).
        let stacked = top.matrix().vstack(bottom.matrix());
        let perm: Vec<usize> = t.iter().chain(tc.iter()).copied().collect();
        let reordered = a.matrix().select_rows(&perm);
        assert_eq!(stacked.data(), reordered.data());
    }
}

#[test]
fn noise_budget_holds_over_many_draws() {
    let mut rng = RngStream::from_seed(77);
    for trial in 0..1000u64 {
        let m = 1 + (trial % 8) as usize;
        let b: Vec<f64> = (0..m).map(|_| rng.uniform01() * 3.0).collect();
        let eps = rng.uniform01() * 0.5;
        let obs = add_bounded_noise(&b, eps, trial).unwrap();
        let dev = linalg::norm2(&linalg::sub(obs.magnitudes(), &b));
        assert!(dev <= eps + 1e-15, "budget violated: {} > {}", dev, eps);
        assert!(obs.magnitudes().iter().all(|&x| x >= 0.0));
    }
}

#[test]
fn noise_with_zero_budget_is_identity() {
    let b = vec![0.5, 0.0, 2.0];
    let obs = add_bounded_noise(&b, 0.0, 3).unwrap();
    assert_eq!(obs.magnitudes(), &b[..]);
}
