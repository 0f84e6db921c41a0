// Used by no_std builds; test builds resolve these methods from std.
#[allow(unused_imports)]
use num_traits::Float;

use super::{CertifyError, StabilityConstants};

/// Smallest oversparsity factor compatible with a two-sided envelope
/// `(theta_minus, theta_plus)`:
/// `max(1 / (2 t_- - t_-^2), 1 / (2 t_+ - t_+^2))`.
pub fn admissible_t(theta_minus: f64, theta_plus: f64) -> Result<f64, CertifyError> {
    for theta in [theta_minus, theta_plus] {
        if !(theta > 0.0 && theta < 2.0) {
            return Err(CertifyError::DomainError(
                "theta constants must lie in the open interval (0, 2)",
            ));
        }
    }
    let term = |theta: f64| 1.0 / (2.0 * theta - theta * theta);
    Ok(term(theta_minus).max(term(theta_plus)))
}

/// Closed-form stability multipliers:
/// `c1 = sqrt(2 (1 + delta)) / (1 - sqrt(t/(t-1)) delta)` and
/// `c2 = (sqrt(2) delta + sqrt(t (sqrt((t-1)/t) - delta) delta))
///        / (t (sqrt((t-1)/t) - delta)) + 1`.
///
/// Requires `t > 1` and `0 <= delta < sqrt((t-1)/t)`; at the right edge
/// both constants blow up and the bound is vacuous, so that is a domain
/// error rather than an infinity.
pub fn stability_constants(delta: f64, t: f64) -> Result<StabilityConstants, CertifyError> {
    if !(t > 1.0) {
        return Err(CertifyError::DomainError("t must exceed 1"));
    }
    if !(delta >= 0.0) {
        return Err(CertifyError::DomainError("delta must be nonnegative"));
    }
    let edge = ((t - 1.0) / t).sqrt();
    if delta >= edge {
        return Err(CertifyError::DomainError(
            "delta must be strictly below sqrt((t-1)/t)",
        ));
    }
    let c1 = (2.0 * (1.0 + delta)).sqrt() / (1.0 - (t / (t - 1.0)).sqrt() * delta);
    let gap = edge - delta;
    let c2 = (2.0f64.sqrt() * delta + (t * gap * delta).sqrt()) / (t * gap) + 1.0;
    Ok(StabilityConstants { t, delta, c1, c2 })
}

/// Right-hand side of the recovery bound:
/// `c1 eps + c2 (2 sigma + rho) / sqrt(k)`.
pub fn error_bound(c: &StabilityConstants, eps: f64, sigma: f64, k: usize, rho: f64) -> f64 {
    assert!(eps >= 0.0 && sigma >= 0.0 && rho >= 0.0, "inputs must be nonnegative");
    assert!(k >= 1, "k must be at least 1");
    c.c1 * eps + c.c2 * (2.0 * sigma + rho) / (k as f64).sqrt()
}
