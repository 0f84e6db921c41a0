//! Alternating sign refinement for the phaseless program.
//!
//! The nonconvex program `min ||D* x||_1 s.t. || |Ax| - b ||_2 <= eps`
//! is attacked by fixing a measurement sign vector `s`, solving the
//! convex inner problem with data `y = s . b`, refreshing `s` from the
//! signs of `A x`, and iterating to a fixed point. Restarts with
//! different sign initializations guard against local fixed points; the
//! best feasible candidate over all restarts wins.

use alloc::vec::Vec;

use crate::frames::Frame;
use crate::linalg::{self, sign_pm1};
use crate::measure::{MeasurementEnsemble, PhaselessObservation};
use crate::rng::{streams, RngStream};

use super::admm::{solve_linear, WarmState, Workspace};
use super::{RecoveryResult, SolverConfig, SolverError};

/// Tolerance relaxation used for the inner solves during sign search;
/// only the final candidate is solved at the configured tolerance.
const SEARCH_TOL_RELAX: f64 = 1e3;

pub fn pr_l1_analysis(
    a: &MeasurementEnsemble,
    obs: &PhaselessObservation,
    frame: &Frame,
    cfg: &SolverConfig,
) -> Result<RecoveryResult, SolverError> {
    cfg.validate()?;
    let mut ws = Workspace::new(a, frame)?;
    if obs.len() != ws.m() {
        return Err(SolverError::ShapeMismatch {
            expected: ws.m(),
            got: obs.len(),
        });
    }
    let b = obs.magnitudes();
    let eps = obs.noise_budget();
    let b_norm = linalg::norm2(b);
    if b_norm == 0.0 {
        // The zero signal is feasible with minimal objective.
        return Ok(RecoveryResult::at_point(
            alloc::vec![0.0; ws.n()],
            0.0,
            0.0,
        ));
    }
    let feas_tol = 1e-8 * (1.0 + b_norm);

    let mut candidates: Vec<RecoveryResult> = Vec::new();
    for restart in 0..cfg.restarts {
        let mut signs = initial_signs(&ws, b, cfg, restart);
        pin_zero_rows(&mut signs, b);

        let mut warm: Option<WarmState> = None;
        let mut outer = 0usize;
        let mut inner_total = 0usize;

        while outer < cfg.max_outer_iters {
            outer += 1;
            let y = apply_signs(&signs, b);
            let step = inner_step(&mut ws, &y, eps, cfg, SEARCH_TOL_RELAX, warm.as_ref())?;
            inner_total += step.0.inner_iters;
            let mut new_signs: Vec<f64> = ws
                .a
                .matvec(&step.0.estimate)
                .iter()
                .map(|&v| sign_pm1(v))
                .collect();
            pin_zero_rows(&mut new_signs, b);
            let fixed_point = new_signs == signs;
            warm = Some(step.1);
            if fixed_point {
                break;
            }
            signs = new_signs;
        }

        // Full-tolerance solve on the final sign pattern.
        let y = apply_signs(&signs, b);
        let (mut result, _) = inner_step(&mut ws, &y, eps, cfg, 1.0, warm.as_ref())?;
        result.inner_iters += inner_total;
        result.outer_iters = outer;
        let residual = phaseless_residual(&ws, &result.estimate, b);
        result.residual = residual;
        result.converged = result.converged && residual <= eps + feas_tol;
        candidates.push(result);
    }

    // Lowest objective among feasible candidates; ties broken by
    // residual, then by restart order. If nothing is feasible, the
    // lowest-residual candidate is returned flagged unconverged.
    let feasible_best = candidates
        .iter()
        .filter(|c| c.residual <= eps + feas_tol)
        .min_by(|x, y| {
            x.objective
                .partial_cmp(&y.objective)
                .unwrap()
                .then(x.residual.partial_cmp(&y.residual).unwrap())
        });
    let chosen = match feasible_best {
        Some(c) => c.clone(),
        None => {
            let mut worst = candidates
                .iter()
                .min_by(|x, y| x.residual.partial_cmp(&y.residual).unwrap())
                .expect("restarts >= 1")
                .clone();
            worst.converged = false;
            worst
        }
    };
    Ok(chosen)
}

fn initial_signs(ws: &Workspace, b: &[f64], cfg: &SolverConfig, restart: usize) -> Vec<f64> {
    if restart == 0 {
        // Signs of A x_ls, where x_ls least-squares fits b with random
        // signs.
        let mut rng = RngStream::for_indexed(cfg.seed, streams::SOLVER, &[0]);
        let sigma = rng.sign_vec(b.len());
        let y0 = apply_signs(&sigma, b);
        let x_ls = ws.least_squares_point(&y0);
        ws.a.matvec(&x_ls).iter().map(|&v| sign_pm1(v)).collect()
    } else {
        let mut rng = RngStream::for_stream(cfg.seed ^ restart as u64, streams::SOLVER);
        rng.sign_vec(b.len())
    }
}

fn pin_zero_rows(signs: &mut [f64], b: &[f64]) {
    for (s, &bi) in signs.iter_mut().zip(b) {
        if bi == 0.0 {
            *s = 1.0;
        }
    }
}

fn apply_signs(signs: &[f64], b: &[f64]) -> Vec<f64> {
    signs.iter().zip(b).map(|(s, bi)| s * bi).collect()
}

/// One inner solve. An infeasible equality system (wrong sign pattern on
/// an overdetermined instance) degrades to a sparsity-biased penalized
/// fit so the sign iteration keeps moving with the analysis-l1 structure
/// still in play; such steps are never feasible candidates on their own.
fn inner_step(
    ws: &mut Workspace,
    y: &[f64],
    eps: f64,
    cfg: &SolverConfig,
    tol_relax: f64,
    warm: Option<&WarmState>,
) -> Result<(RecoveryResult, WarmState), SolverError> {
    match solve_linear(ws, y, eps, cfg, tol_relax, warm) {
        Ok(pair) => Ok(pair),
        Err(SolverError::InfeasibleEquality { .. }) => {
            Ok(super::admm::solve_sparsity_biased(ws, y, cfg, tol_relax, warm))
        }
        Err(e) => Err(e),
    }
}

fn phaseless_residual(ws: &Workspace, x: &[f64], b: &[f64]) -> f64 {
    let ax = ws.a.matvec(x);
    let dev: Vec<f64> = ax.iter().zip(b).map(|(v, bi)| v.abs() - bi).collect();
    linalg::norm2(&dev)
}
