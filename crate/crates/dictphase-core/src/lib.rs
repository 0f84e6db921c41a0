//! Phase retrieval for signals that are sparse in a redundant dictionary.
//!
//! The crate implements the `l1`-analysis recovery model
//! `min ||D* x||_1  s.t.  || |Ax| - b ||_2 <= eps` for a tight frame `D`,
//! together with executable certificates for the matrix conditions under
//! which that model succeeds:
//!
//! * [`frames`] — tight-frame construction, analysis/synthesis operators,
//!   best k-term approximation, dictionary-sparse membership tests.
//! * [`measure`] — Gaussian sensing ensembles, magnitude-only forward
//!   models, norm-bounded noise.
//! * [`solver`] — ADMM solvers for the convex inner problems, an
//!   alternating sign-refinement outer loop, and an exact sign-enumeration
//!   oracle for desk-scale ground truth.
//! * [`certify`] — restricted-isometry constants over dictionary-sparse
//!   images (exact and Monte Carlo), row-subset isometry envelopes,
//!   null-space-property checks with constructive counterexample
//!   witnesses, and closed-form stability constants.
//! * [`lemmas`] — standalone checkers for the supporting facts the
//!   stability analysis relies on: a sparse polytope decomposition, a
//!   power-sum inequality, and the end-to-end error bound.
//!
//! Everything is deterministic given the seeds carried by the inputs; see
//! [`rng`] for the generator contract. The crate is `no_std` (with
//! `alloc`): all IO, serialization, and experiment-harness code lives in
//! the companion CLI crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod certify;
pub mod frames;
pub mod lemmas;
pub mod linalg;
pub mod measure;
pub mod rng;
pub mod solver;
pub mod subsets;

pub use frames::Frame;
