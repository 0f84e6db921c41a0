use alloc::vec::Vec;

use crate::frames::Frame;
use crate::linalg::{self, eig::symmetric_eigen_extremes, svd::svd, Matrix, RANK_REL_TOL};
use crate::measure::MeasurementEnsemble;
use crate::rng::{streams, RngStream};
use crate::subsets::{binomial, combinations};

use super::{CertMethod, CertifyError, SdripReport, SdripStatus};

/// Per-support orthonormal range bases of the dictionary blocks,
/// shared across all row subsets.
fn support_bases(d: &Matrix, k: usize) -> Vec<Matrix> {
    combinations(d.cols(), k)
        .filter_map(|support| {
            let dec = svd(&d.select_cols(&support));
            if dec.rank(RANK_REL_TOL) == 0 {
                None
            } else {
                Some(dec.range_basis(RANK_REL_TOL))
            }
        })
        .collect()
}

fn validate(a: &MeasurementEnsemble, frame: &Frame, k: usize) -> Result<Matrix, CertifyError> {
    let d = frame.matrix()?.clone();
    if a.cols() != d.rows() {
        return Err(CertifyError::ShapeMismatch {
            expected: d.rows(),
            got: a.cols(),
        });
    }
    if k == 0 || k > d.cols() {
        return Err(CertifyError::InvalidOrder { k, atoms: d.cols() });
    }
    Ok(d)
}

fn status_from_envelope(theta_minus: f64, theta_plus: f64) -> SdripStatus {
    if theta_minus > 0.0 && theta_plus < 2.0 {
        SdripStatus::Satisfied
    } else {
        SdripStatus::Violated
    }
}

/// Exact two-sided envelope.
///
/// `||A_I x||^2` is monotone in `I` (adding rows adds nonnegative terms),
/// so over the family `|I| >= m/2` the minimum is attained at some subset
/// of size exactly `ceil(m/2)` and the maximum at the full row set. Only
/// those are enumerated; this is an exactness-preserving reduction.
pub fn sdrip_exact(
    a: &MeasurementEnsemble,
    frame: &Frame,
    k: usize,
    budget: u128,
) -> Result<SdripReport, CertifyError> {
    let d = validate(a, frame, k)?;
    let m = a.rows();
    let half = m.div_ceil(2);
    let required = binomial(m, half).saturating_mul(binomial(d.cols(), k));
    if required > budget {
        return Err(CertifyError::BudgetExceeded { required, budget });
    }

    let bases = support_bases(&d, k);
    let amat = a.matrix();
    let mut checked = 0u64;

    let mut theta_plus = f64::NEG_INFINITY;
    for q in &bases {
        checked += 1;
        let (_, hi) = symmetric_eigen_extremes(&amat.matmul(q).gram());
        theta_plus = theta_plus.max(hi);
    }

    let mut theta_minus = f64::INFINITY;
    let mut argmin: Option<Vec<usize>> = None;
    for subset in combinations(m, half) {
        let a_i = amat.select_rows(&subset);
        for q in &bases {
            checked += 1;
            let (lo, _) = symmetric_eigen_extremes(&a_i.matmul(q).gram());
            if lo < theta_minus {
                theta_minus = lo;
                argmin = Some(subset.clone());
            }
        }
    }

    if bases.is_empty() {
        return Err(CertifyError::InvalidOrder { k, atoms: d.cols() });
    }
    let status = status_from_envelope(theta_minus, theta_plus);
    let witness = match status {
        SdripStatus::Violated if theta_minus <= 0.0 => argmin,
        SdripStatus::Violated => Some((0..m).collect()),
        _ => None,
    };
    Ok(SdripReport {
        order: k,
        theta_minus: Some(theta_minus),
        theta_plus: Some(theta_plus),
        status,
        witness_subset: witness,
        method: CertMethod::Exact,
        checked,
    })
}

/// Monte Carlo envelope estimate: random half-size subsets `I` and random
/// k-sparse `z`. The probes bound the envelope from inside (true
/// `theta_minus <=` reported, true `theta_plus >=` reported), so the
/// outcome is either a certain violation or inconclusive.
pub fn sdrip_montecarlo(
    a: &MeasurementEnsemble,
    frame: &Frame,
    k: usize,
    trials: u64,
    seed: u64,
) -> Result<SdripReport, CertifyError> {
    let d = validate(a, frame, k)?;
    if trials == 0 {
        return Ok(SdripReport {
            order: k,
            theta_minus: None,
            theta_plus: None,
            status: SdripStatus::Inconclusive,
            witness_subset: None,
            method: CertMethod::MonteCarloLowerBound,
            checked: 0,
        });
    }
    let m = a.rows();
    let half = m.div_ceil(2);
    let amat = a.matrix();
    let mut rng = RngStream::for_stream(seed, streams::CERTIFY);

    let mut theta_minus = f64::INFINITY;
    let mut theta_plus = f64::NEG_INFINITY;
    let mut argmin: Option<Vec<usize>> = None;
    let mut done = 0u64;
    for _ in 0..trials {
        let subset = rng.subset(m, half);
        let support = rng.subset(d.cols(), k);
        let coeffs = rng.normal_vec(k);
        let mut z = alloc::vec![0.0; d.cols()];
        for (slot, &j) in support.iter().enumerate() {
            z[j] = coeffs[slot];
        }
        let dz = d.matvec(&z);
        let denom = linalg::dot(&dz, &dz);
        if denom <= 1e-300 {
            continue;
        }
        done += 1;
        let a_i_dz = amat.select_rows(&subset).matvec(&dz);
        let r_lo = linalg::dot(&a_i_dz, &a_i_dz) / denom;
        let adz = amat.matvec(&dz);
        let r_hi = linalg::dot(&adz, &adz) / denom;
        if r_lo < theta_minus {
            theta_minus = r_lo;
            argmin = Some(subset);
        }
        theta_plus = theta_plus.max(r_hi);
    }
    if done == 0 {
        return Ok(SdripReport {
            order: k,
            theta_minus: None,
            theta_plus: None,
            status: SdripStatus::Inconclusive,
            witness_subset: None,
            method: CertMethod::MonteCarloLowerBound,
            checked: 0,
        });
    }

    let (status, witness) = if theta_minus <= 0.0 {
        (SdripStatus::Violated, argmin)
    } else if theta_plus >= 2.0 {
        (SdripStatus::Violated, Some((0..m).collect()))
    } else {
        (SdripStatus::Inconclusive, None)
    };
    Ok(SdripReport {
        order: k,
        theta_minus: Some(theta_minus),
        theta_plus: Some(theta_plus),
        status,
        witness_subset: witness,
        method: CertMethod::MonteCarloLowerBound,
        checked: done,
    })
}
