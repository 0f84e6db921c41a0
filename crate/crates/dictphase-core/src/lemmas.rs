//! Executable checkers for the supporting facts behind the stability
//! guarantee: a sparse polytope decomposition, a power-sum inequality,
//! and the end-to-end error bound itself.

use alloc::vec;
use alloc::vec::Vec;
// Used by no_std builds; test builds resolve these methods from std.
#[allow(unused_imports)]
use num_traits::Float;

use crate::certify::{error_bound, stability_constants, CertifyError};
use crate::frames::{best_k_term_error, Frame};
use crate::linalg;
use crate::measure::MeasurementEnsemble;

/// Largest support size accepted by the polytope decomposition.
pub const POLYTOPE_SUPPORT_BUDGET: usize = 12;

#[derive(Debug, Clone, PartialEq)]
pub enum LemmaError {
    /// `v` is outside `T(alpha, s)`: names which membership clause broke.
    NotInPolytope {
        clause: PolytopeMembershipClause,
        value: f64,
        limit: f64,
    },
    SupportBudget {
        nnz: usize,
        max: usize,
    },
    InvalidAlpha,
    InvalidS,
    /// Power-sum inputs must be sorted nonincreasing.
    Unsorted {
        index: usize,
    },
    NegativeEntry {
        index: usize,
    },
    /// Power-sum premise `sum_top >= sum_tail` fails (distinct from a
    /// false conclusion, which would contradict the lemma).
    PremiseViolated {
        top: f64,
        tail: f64,
    },
    ExponentBelowOne,
    IndexOutOfRange {
        r: usize,
        len: usize,
    },
    /// A verifiable precondition of the bound check does not hold; no
    /// verdict is rendered.
    PreconditionFailed(&'static str),
    Certify(CertifyError),
    /// The vertex-peeling loop failed to make progress (not expected on
    /// valid inputs; reported rather than looping).
    DecompositionStalled,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolytopeMembershipClause {
    /// `||v||_inf <= alpha`
    InfinityCap,
    /// `||v||_1 <= s * alpha`
    L1Budget,
}

impl core::fmt::Display for LemmaError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            LemmaError::NotInPolytope {
                clause,
                value,
                limit,
            } => {
                let name = match clause {
                    PolytopeMembershipClause::InfinityCap => "max-norm cap",
                    PolytopeMembershipClause::L1Budget => "l1 budget",
                };
                write!(f, "not in T(alpha, s): {} {} > {}", name, value, limit)
            }
            LemmaError::SupportBudget { nnz, max } => {
                write!(f, "support size {} exceeds the budget {}", nnz, max)
            }
            LemmaError::InvalidAlpha => write!(f, "alpha must be positive"),
            LemmaError::InvalidS => write!(f, "s must be a positive integer"),
            LemmaError::Unsorted { index } => {
                write!(f, "input increases at position {}", index)
            }
            LemmaError::NegativeEntry { index } => {
                write!(f, "negative entry at position {}", index)
            }
            LemmaError::PremiseViolated { top, tail } => {
                write!(f, "premise fails: head sum {} < tail sum {}", top, tail)
            }
            LemmaError::ExponentBelowOne => write!(f, "exponent must be >= 1"),
            LemmaError::IndexOutOfRange { r, len } => {
                write!(f, "split index {} out of range for length {}", r, len)
            }
            LemmaError::PreconditionFailed(msg) => write!(f, "precondition failed: {}", msg),
            LemmaError::Certify(e) => write!(f, "{}", e),
            LemmaError::DecompositionStalled => write!(f, "vertex peeling stalled"),
        }
    }
}

impl core::error::Error for LemmaError {}

impl From<CertifyError> for LemmaError {
    fn from(e: CertifyError) -> Self {
        LemmaError::Certify(e)
    }
}

/// Convex decomposition of `v` into s-sparse, l1-preserving, capped atoms.
#[derive(Debug, Clone, PartialEq)]
pub struct PolytopeDecomposition {
    /// Positive weights summing to one.
    pub weights: Vec<f64>,
    /// Atoms: support inside `supp(v)`, at most `s` nonzeros,
    /// `||u||_1 = ||v||_1`, `||u||_inf <= alpha`.
    pub atoms: Vec<Vec<f64>>,
    pub alpha: f64,
    pub s: usize,
}

impl PolytopeDecomposition {
    /// Number of atoms `M`. The construction emits finitely many (at most
    /// one per support coordinate hitting zero or the cap); no tight
    /// a-priori bound is asserted.
    pub fn atom_count(&self) -> usize {
        self.atoms.len()
    }
}

/// First violated clause of a claimed decomposition, in a fixed check
/// order (weights, then per-atom constraints, then recomposition).
#[derive(Debug, Clone, PartialEq)]
pub enum PolytopeViolation {
    WeightOutOfRange { index: usize, weight: f64 },
    WeightsSum { sum: f64 },
    AtomSupport { atom: usize, coord: usize },
    AtomSparsity { atom: usize, nnz: usize },
    AtomL1 { atom: usize, l1: f64, expected: f64 },
    AtomInfinityCap { atom: usize, linf: f64 },
    Recompose { max_dev: f64 },
    EmptyDecomposition,
}

impl core::fmt::Display for PolytopeViolation {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            PolytopeViolation::WeightOutOfRange { index, weight } => {
                write!(f, "weight {} out of range: {}", index, weight)
            }
            PolytopeViolation::WeightsSum { sum } => {
                write!(f, "weights-sum violation: sum = {}", sum)
            }
            PolytopeViolation::AtomSupport { atom, coord } => {
                write!(f, "atom {} leaves the support at coordinate {}", atom, coord)
            }
            PolytopeViolation::AtomSparsity { atom, nnz } => {
                write!(f, "atom-sparsity violation: atom {} has {} nonzeros", atom, nnz)
            }
            PolytopeViolation::AtomL1 { atom, l1, expected } => {
                write!(f, "atom {} has l1 {} instead of {}", atom, l1, expected)
            }
            PolytopeViolation::AtomInfinityCap { atom, linf } => {
                write!(f, "atom {} exceeds the cap: {}", atom, linf)
            }
            PolytopeViolation::Recompose { max_dev } => {
                write!(f, "recomposition deviates by {}", max_dev)
            }
            PolytopeViolation::EmptyDecomposition => write!(f, "no atoms"),
        }
    }
}

/// Decomposes `v` in `T(alpha, s)` as a convex combination of atoms from
/// `U(alpha, s, v)`.
///
/// Construction: work on the magnitude profile scaled to unit l1 mass, a
/// point of the polytope `{r >= 0 on supp(v), sum r = 1, r <= alpha/L}`
/// whose vertices are exactly the (scaled) valid atoms. Repeatedly peel
/// off the greedy vertex along the largest-magnitude coordinates with the
/// maximal feasible step; every step drives at least one coordinate to
/// zero or to the cap permanently, so at most `2 |supp(v)|` atoms are
/// emitted. Correctness is defined by [`polytope_verify`], not by the
/// construction path.
pub fn polytope_decompose(
    v: &[f64],
    alpha: f64,
    s: usize,
) -> Result<PolytopeDecomposition, LemmaError> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(LemmaError::InvalidAlpha);
    }
    if s == 0 {
        return Err(LemmaError::InvalidS);
    }
    let linf = linalg::norm_inf(v);
    if linf > alpha * (1.0 + 1e-12) {
        return Err(LemmaError::NotInPolytope {
            clause: PolytopeMembershipClause::InfinityCap,
            value: linf,
            limit: alpha,
        });
    }
    let l1 = linalg::norm1(v);
    let budget = s as f64 * alpha;
    if l1 > budget * (1.0 + 1e-12) {
        return Err(LemmaError::NotInPolytope {
            clause: PolytopeMembershipClause::L1Budget,
            value: l1,
            limit: budget,
        });
    }
    let support: Vec<usize> = (0..v.len()).filter(|&i| v[i] != 0.0).collect();
    if support.len() > POLYTOPE_SUPPORT_BUDGET {
        return Err(LemmaError::SupportBudget {
            nnz: support.len(),
            max: POLYTOPE_SUPPORT_BUDGET,
        });
    }

    // Already an atom?
    if support.len() <= s {
        return Ok(PolytopeDecomposition {
            weights: vec![1.0],
            atoms: vec![v.to_vec()],
            alpha,
            s,
        });
    }

    // Scaled magnitude profile: r on the support with sum 1, cap a.
    let scale = l1;
    let cap = alpha / scale;
    let signs: Vec<f64> = support.iter().map(|&i| linalg::sign_pm1(v[i])).collect();
    let mut r: Vec<f64> = support.iter().map(|&i| v[i].abs() / scale).collect();

    let emit = |profile: &[f64]| -> Vec<f64> {
        let mut atom = vec![0.0; v.len()];
        for (slot, &i) in support.iter().enumerate() {
            atom[i] = signs[slot] * profile[slot] * scale;
        }
        atom
    };

    let mut weights: Vec<f64> = Vec::new();
    let mut atoms: Vec<Vec<f64>> = Vec::new();
    let mut remaining = 1.0f64;
    let frac_tol = 1e-14 * cap.max(1.0);

    for _round in 0..4 * support.len() + 8 {
        // Vertex check: at most one coordinate strictly between 0 and cap.
        let fractional = r
            .iter()
            .filter(|&&x| x > frac_tol && x < cap - frac_tol)
            .count();
        if fractional <= 1 {
            weights.push(remaining);
            atoms.push(emit(&r));
            return Ok(PolytopeDecomposition {
                weights,
                atoms,
                alpha,
                s,
            });
        }

        // Greedy vertex: cap the largest coordinates until the unit mass
        // is spent (ties broken by index for determinism).
        let mut order: Vec<usize> = (0..r.len()).collect();
        order.sort_by(|&i, &j| r[j].partial_cmp(&r[i]).unwrap().then(i.cmp(&j)));
        let mut vertex = vec![0.0; r.len()];
        let mut mass = 1.0f64;
        for &i in &order {
            if mass <= 0.0 {
                break;
            }
            let take = cap.min(mass);
            vertex[i] = take;
            mass -= take;
        }

        // Largest step theta with (r - theta * vertex) / (1 - theta)
        // still in the polytope.
        let mut theta = 1.0f64;
        for i in 0..r.len() {
            if vertex[i] > 0.0 {
                theta = theta.min(r[i] / vertex[i]);
            }
            if vertex[i] < cap - frac_tol {
                let headroom = cap - r[i];
                let denom = cap - vertex[i];
                if denom > 0.0 {
                    theta = theta.min(headroom / denom);
                }
            }
        }
        if theta >= 1.0 - 1e-13 {
            weights.push(remaining);
            atoms.push(emit(&vertex));
            return Ok(PolytopeDecomposition {
                weights,
                atoms,
                alpha,
                s,
            });
        }
        if theta <= 1e-13 {
            return Err(LemmaError::DecompositionStalled);
        }

        weights.push(remaining * theta);
        atoms.push(emit(&vertex));
        remaining *= 1.0 - theta;
        for i in 0..r.len() {
            let w = (r[i] - theta * vertex[i]) / (1.0 - theta);
            r[i] = if w < frac_tol {
                0.0
            } else if w > cap {
                cap
            } else {
                w
            };
        }
        // Keep the profile on the simplex despite rounding drift.
        let total: f64 = r.iter().sum();
        if total > 0.0 {
            for x in r.iter_mut() {
                *x /= total;
            }
        }
    }
    Err(LemmaError::DecompositionStalled)
}

/// Verifies a claimed decomposition against all invariants; reports the
/// first violated clause.
pub fn polytope_verify(
    v: &[f64],
    alpha: f64,
    s: usize,
    dec: &PolytopeDecomposition,
) -> Result<(), PolytopeViolation> {
    if dec.atoms.is_empty() || dec.weights.len() != dec.atoms.len() {
        return Err(PolytopeViolation::EmptyDecomposition);
    }
    for (i, &w) in dec.weights.iter().enumerate() {
        if !(w > 0.0 && w <= 1.0 + 1e-12) {
            return Err(PolytopeViolation::WeightOutOfRange { index: i, weight: w });
        }
    }
    let sum: f64 = dec.weights.iter().sum();
    if (sum - 1.0).abs() > 1e-12 {
        return Err(PolytopeViolation::WeightsSum { sum });
    }
    let l1_v = linalg::norm1(v);
    for (idx, atom) in dec.atoms.iter().enumerate() {
        if atom.len() != v.len() {
            return Err(PolytopeViolation::AtomSupport { atom: idx, coord: 0 });
        }
        for (coord, (&ui, &vi)) in atom.iter().zip(v).enumerate() {
            if vi == 0.0 && ui != 0.0 {
                return Err(PolytopeViolation::AtomSupport { atom: idx, coord });
            }
        }
        let nnz = atom.iter().filter(|&&x| x != 0.0).count();
        if nnz > s {
            return Err(PolytopeViolation::AtomSparsity { atom: idx, nnz });
        }
        let l1 = linalg::norm1(atom);
        if (l1 - l1_v).abs() > 1e-10 {
            return Err(PolytopeViolation::AtomL1 {
                atom: idx,
                l1,
                expected: l1_v,
            });
        }
        let linf = linalg::norm_inf(atom);
        if linf > alpha + 1e-12 {
            return Err(PolytopeViolation::AtomInfinityCap { atom: idx, linf });
        }
    }
    let mut recomposed = vec![0.0; v.len()];
    for (w, atom) in dec.weights.iter().zip(&dec.atoms) {
        linalg::axpy(*w, atom, &mut recomposed);
    }
    let max_dev = linalg::norm_inf(&linalg::sub(&recomposed, v));
    if max_dev > 1e-10 {
        return Err(PolytopeViolation::Recompose { max_dev });
    }
    Ok(())
}

/// Power-sum comparison: for `a_1 >= ... >= a_len >= 0` with
/// `sum_{i < r} a_i >= sum_{j >= r} a_j` and any exponent `alpha >= 1`,
/// checks `sum_{j >= r} a_j^alpha <= sum_{i < r} a_i^alpha`.
///
/// The conclusion is a theorem; a `false` return on premise-satisfying
/// input indicates an implementation bug somewhere and fails the test
/// suite. Premise violations are a distinct error, not a `false`.
pub fn power_sum_check(a: &[f64], r: usize, alpha: f64) -> Result<bool, LemmaError> {
    if alpha < 1.0 {
        return Err(LemmaError::ExponentBelowOne);
    }
    if r > a.len() {
        return Err(LemmaError::IndexOutOfRange { r, len: a.len() });
    }
    for (i, pair) in a.windows(2).enumerate() {
        if pair[0] < pair[1] {
            return Err(LemmaError::Unsorted { index: i + 1 });
        }
    }
    if let Some(&last) = a.last() {
        if last < 0.0 {
            let index = a.len() - 1;
            return Err(LemmaError::NegativeEntry { index });
        }
    }
    let top: f64 = a[..r].iter().sum();
    let tail: f64 = a[r..].iter().sum();
    if top < tail {
        return Err(LemmaError::PremiseViolated { top, tail });
    }
    let lhs: f64 = a[r..].iter().map(|x| x.powf(alpha)).sum();
    let rhs: f64 = a[..r].iter().map(|x| x.powf(alpha)).sum();
    Ok(lhs <= rhs * (1.0 + 1e-12) + 1e-300)
}

/// Checks the end-to-end stability bound
/// `||xhat - x0||_2 <= c1 eps + c2 (2 sigma_k(D* x0)_1 + rho) / sqrt(k)`
/// for a point `xhat` in the feasible set
/// `{ ||D* x||_1 <= ||D* x0||_1 + rho, ||A x - A x0||_2 <= eps }`.
///
/// Both membership conditions are verified here (refusal if either
/// fails); `delta` must be a certified restricted-isometry constant of
/// `(A, D)` at order `ceil(t k)` — that certification is the caller's
/// responsibility (see `drip_exact`). A `false` return on verified inputs
/// contradicts the underlying theorem and fails the suite.
#[allow(clippy::too_many_arguments)]
pub fn check_lemma_bound(
    a: &MeasurementEnsemble,
    frame: &Frame,
    x0: &[f64],
    xhat: &[f64],
    rho: f64,
    eps: f64,
    t: f64,
    delta: f64,
    k: usize,
) -> Result<bool, LemmaError> {
    if !frame.is_tight() || frame.im_matrix().is_some() {
        return Err(LemmaError::PreconditionFailed("real tight frame required"));
    }
    let d = frame
        .matrix()
        .map_err(|_| LemmaError::PreconditionFailed("real tight frame required"))?;
    if x0.len() != d.rows() || xhat.len() != d.rows() || a.cols() != d.rows() {
        return Err(LemmaError::PreconditionFailed("shape mismatch"));
    }
    if k == 0 {
        return Err(LemmaError::PreconditionFailed("k must be at least 1"));
    }
    if rho < 0.0 || eps < 0.0 {
        return Err(LemmaError::PreconditionFailed(
            "rho and eps must be nonnegative",
        ));
    }

    let z0 = d.tr_matvec(x0);
    let zh = d.tr_matvec(xhat);
    let obj0 = linalg::norm1(&z0);
    let objh = linalg::norm1(&zh);
    if objh > obj0 + rho + 1e-12 * (1.0 + obj0) {
        return Err(LemmaError::PreconditionFailed(
            "analysis objective exceeds the stated radius",
        ));
    }
    let ax0 = a.matrix().matvec(x0);
    let axh = a.matrix().matvec(xhat);
    let lin_res = linalg::norm2(&linalg::sub(&axh, &ax0));
    if lin_res > eps + 1e-12 * (1.0 + linalg::norm2(&ax0)) {
        return Err(LemmaError::PreconditionFailed(
            "linear residual exceeds the stated eps",
        ));
    }

    let constants = stability_constants(delta, t)?;
    let sigma = best_k_term_error(&z0, k)
        .map_err(|_| LemmaError::PreconditionFailed("k out of range for the dictionary"))?;
    let bound = error_bound(&constants, eps, sigma, k, rho);
    let lhs = linalg::norm2(&linalg::sub(xhat, x0));
    Ok(lhs <= bound + 1e-9 * (1.0 + bound))
}
