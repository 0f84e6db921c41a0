//! Redundant dictionaries (frames) and dictionary-sparsity utilities.
//!
//! A [`Frame`] is an `n x N` synthesis dictionary `D` with `N >= n` and
//! full row rank. Tight frames (`D D* = I`) are the ones the solver and
//! the stability certificates accept; the analysis operator `D*` is then
//! an isometry. Complex entries are supported only so the complex
//! null-space-property checker has something to chew on — every solver
//! path rejects them.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::linalg::{self, svd::least_squares, svd::svd, Matrix, RANK_REL_TOL};
use crate::rng::{streams, RngStream};
use crate::subsets::{binomial, combinations};

/// Default max-norm tolerance for the tightness check `||D D* - I||`.
pub const DEFAULT_TIGHT_TOL: f64 = 1e-10;

/// Default support-enumeration budget for membership tests.
pub const DEFAULT_MEMBERSHIP_BUDGET: u128 = 1_000_000;

/// Default membership tolerance, relative to the signal scale.
pub fn default_membership_tol(x: &[f64]) -> f64 {
    1e-8 * linalg::norm2(x).max(1.0)
}

/// Scalar field of the frame entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Field {
    Real,
    Complex,
}

#[derive(Debug, Clone, PartialEq)]
pub enum FrameError {
    /// `N < n`: not a redundant dictionary.
    NotRedundant { rows: usize, cols: usize },
    /// Row-major data length does not match the declared shape.
    DataLength { expected: usize, got: usize },
    NonFinite,
    /// Smallest singular value is numerically zero: not a frame.
    RankDeficient { sigma_min: f64, sigma_max: f64 },
    /// Claimed tight but `||D D* - I||_max` exceeds the tolerance.
    NotTight { deviation: f64, tol: f64 },
    /// A deterministic construction kept drawing degenerate samples.
    DegenerateDraw { attempts: usize },
    /// Real-only operation applied to a complex frame.
    ComplexUnsupported,
    /// Vector length does not match the operator shape.
    ShapeMismatch { expected: usize, got: usize },
    /// `k` exceeds the number of dictionary atoms.
    SparsityOutOfRange { k: usize, atoms: usize },
}

impl core::fmt::Display for FrameError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            FrameError::NotRedundant { rows, cols } => {
                write!(f, "frame must have cols >= rows, got {}x{}", rows, cols)
            }
            FrameError::DataLength { expected, got } => {
                write!(f, "expected {} entries, got {}", expected, got)
            }
            FrameError::NonFinite => write!(f, "frame entries must be finite"),
            FrameError::RankDeficient {
                sigma_min,
                sigma_max,
            } => write!(
                f,
                "frame is rank deficient (sigma_min {:e}, sigma_max {:e})",
                sigma_min, sigma_max
            ),
            FrameError::NotTight { deviation, tol } => write!(
                f,
                "tightness violated: ||DD* - I||_max = {:e} > {:e}",
                deviation, tol
            ),
            FrameError::DegenerateDraw { attempts } => {
                write!(f, "degenerate random draw after {} attempts", attempts)
            }
            FrameError::ComplexUnsupported => {
                write!(f, "operation is defined for real frames only")
            }
            FrameError::ShapeMismatch { expected, got } => {
                write!(f, "vector length {} does not match {}", got, expected)
            }
            FrameError::SparsityOutOfRange { k, atoms } => {
                write!(f, "sparsity {} out of range for {} atoms", k, atoms)
            }
        }
    }
}

impl core::error::Error for FrameError {}

/// An `n x N` synthesis dictionary with tightness metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    re: Matrix,
    im: Option<Matrix>,
    tight: bool,
    tight_tol: f64,
}

impl Frame {
    /// Builds and validates a real frame from row-major entries.
    pub fn real(
        rows: usize,
        cols: usize,
        data: &[f64],
        tight: bool,
        tight_tol: f64,
    ) -> Result<Frame, FrameError> {
        if cols < rows {
            return Err(FrameError::NotRedundant { rows, cols });
        }
        if data.len() != rows * cols {
            return Err(FrameError::DataLength {
                expected: rows * cols,
                got: data.len(),
            });
        }
        if !data.iter().all(|x| x.is_finite()) {
            return Err(FrameError::NonFinite);
        }
        let re = Matrix::from_row_major(rows, cols, data);
        let frame = Frame {
            re,
            im: None,
            tight,
            tight_tol,
        };
        frame.validate()?;
        Ok(frame)
    }

    /// Builds and validates a complex frame from row-major real and
    /// imaginary parts.
    pub fn complex(
        rows: usize,
        cols: usize,
        re: &[f64],
        im: &[f64],
        tight: bool,
        tight_tol: f64,
    ) -> Result<Frame, FrameError> {
        if cols < rows {
            return Err(FrameError::NotRedundant { rows, cols });
        }
        if re.len() != rows * cols || im.len() != rows * cols {
            return Err(FrameError::DataLength {
                expected: rows * cols,
                got: re.len().max(im.len()),
            });
        }
        if !re.iter().chain(im.iter()).all(|x| x.is_finite()) {
            return Err(FrameError::NonFinite);
        }
        let frame = Frame {
            re: Matrix::from_row_major(rows, cols, re),
            im: Some(Matrix::from_row_major(rows, cols, im)),
            tight,
            tight_tol,
        };
        frame.validate()?;
        Ok(frame)
    }

    fn validate(&self) -> Result<(), FrameError> {
        // Full row rank, checked on the real matrix or on the stacked
        // real representation of a complex one.
        let stacked = self.stacked_real();
        let dec = svd(&stacked);
        let smax = dec.sigma_max();
        let smin = dec
            .s
            .get(stacked.rows().min(stacked.cols()).saturating_sub(1))
            .copied()
            .unwrap_or(0.0);
        if dec.rank(RANK_REL_TOL) < stacked.rows() {
            return Err(FrameError::RankDeficient {
                sigma_min: smin,
                sigma_max: smax,
            });
        }
        if self.tight {
            let dev = self.tightness_deviation();
            if dev > self.tight_tol {
                return Err(FrameError::NotTight {
                    deviation: dev,
                    tol: self.tight_tol,
                });
            }
        }
        Ok(())
    }

    /// Signal dimension `n`.
    pub fn dim(&self) -> usize {
        self.re.rows()
    }

    /// Number of dictionary atoms `N`.
    pub fn atoms(&self) -> usize {
        self.re.cols()
    }

    pub fn field(&self) -> Field {
        if self.im.is_some() {
            Field::Complex
        } else {
            Field::Real
        }
    }

    pub fn is_tight(&self) -> bool {
        self.tight
    }

    pub fn tight_tol(&self) -> f64 {
        self.tight_tol
    }

    /// Real part of the dictionary (the whole dictionary for real frames).
    pub fn re_matrix(&self) -> &Matrix {
        &self.re
    }

    /// Imaginary part, if the frame is complex.
    pub fn im_matrix(&self) -> Option<&Matrix> {
        self.im.as_ref()
    }

    /// The dictionary as a dense real matrix; errors on complex frames.
    pub fn matrix(&self) -> Result<&Matrix, FrameError> {
        match self.im {
            None => Ok(&self.re),
            Some(_) => Err(FrameError::ComplexUnsupported),
        }
    }

    /// Stacked real representation: `D` itself for real frames,
    /// `[[Re, -Im], [Im, Re]]` (a `2n x 2N` matrix) for complex ones.
    pub fn stacked_real(&self) -> Matrix {
        match &self.im {
            None => self.re.clone(),
            Some(im) => {
                let top = self.re.hstack(&im.scale(-1.0));
                let bottom = im.hstack(&self.re);
                top.vstack(&bottom)
            }
        }
    }

    /// `||D D* - I||_max` (complex modulus entries for complex frames).
    pub fn tightness_deviation(&self) -> f64 {
        match &self.im {
            None => {
                let g = self.re.matmul(&self.re.transpose());
                g.max_abs_dev_from_identity()
            }
            Some(im) => {
                let rr = self.re.matmul(&self.re.transpose());
                let ii = im.matmul(&im.transpose());
                let re_part = rr.add(&ii);
                let ir = im.matmul(&self.re.transpose());
                let ri = self.re.matmul(&im.transpose());
                let im_part = ir.sub(&ri);
                let n = self.dim();
                let mut worst = 0.0f64;
                for i in 0..n {
                    for j in 0..n {
                        let target = if i == j { 1.0 } else { 0.0 };
                        let dr = re_part[(i, j)] - target;
                        let di = im_part[(i, j)];
                        worst = worst.max(linalg::norm2(&[dr, di]));
                    }
                }
                worst
            }
        }
    }

    /// Analysis operator `D* x` (real frames).
    pub fn analyze(&self, x: &[f64]) -> Result<Vec<f64>, FrameError> {
        let d = self.matrix()?;
        if x.len() != d.rows() {
            return Err(FrameError::ShapeMismatch {
                expected: d.rows(),
                got: x.len(),
            });
        }
        Ok(d.tr_matvec(x))
    }

    /// Synthesis operator `D z` (real frames).
    pub fn synthesize(&self, z: &[f64]) -> Result<Vec<f64>, FrameError> {
        let d = self.matrix()?;
        if z.len() != d.cols() {
            return Err(FrameError::ShapeMismatch {
                expected: d.cols(),
                got: z.len(),
            });
        }
        Ok(d.matvec(z))
    }
}

/// The `n x n` identity dictionary, trivially tight.
pub fn make_identity_frame(n: usize) -> Frame {
    assert!(n >= 1, "identity frame needs n >= 1");
    Frame {
        re: Matrix::identity(n),
        im: None,
        tight: true,
        tight_tol: DEFAULT_TIGHT_TOL,
    }
}

const TIGHT_FRAME_MAX_ATTEMPTS: usize = 8;

/// Random tight frame: draw an `N x n` standard-normal matrix,
/// orthonormalize its columns, transpose. Deterministic per seed;
/// resamples internally on a (measure-zero) degenerate draw.
pub fn make_random_tight_frame(n: usize, cols: usize, seed: u64) -> Result<Frame, FrameError> {
    if cols < n {
        return Err(FrameError::NotRedundant { rows: n, cols });
    }
    assert!(n >= 1, "tight frame needs n >= 1");
    let mut rng = RngStream::for_stream(seed, streams::FRAME);
    for _attempt in 0..TIGHT_FRAME_MAX_ATTEMPTS {
        let g = Matrix::from_fn(cols, n, |_, _| rng.normal());
        if let Some(q) = orthonormalize_columns(&g) {
            let frame = Frame {
                re: q.transpose(),
                im: None,
                tight: true,
                tight_tol: DEFAULT_TIGHT_TOL,
            };
            if frame.tightness_deviation() <= DEFAULT_TIGHT_TOL {
                return Ok(frame);
            }
        }
    }
    Err(FrameError::DegenerateDraw {
        attempts: TIGHT_FRAME_MAX_ATTEMPTS,
    })
}

/// Modified Gram-Schmidt with one re-orthogonalization pass.
/// Returns `None` if a column is (numerically) in the span of the others.
fn orthonormalize_columns(g: &Matrix) -> Option<Matrix> {
    let rows = g.rows();
    let cols = g.cols();
    let mut q = Matrix::zeros(rows, cols);
    for j in 0..cols {
        let mut v = g.col(j);
        let original = linalg::norm2(&v);
        for _pass in 0..2 {
            for i in 0..j {
                let qi = q.col(i);
                let proj = linalg::dot(&qi, &v);
                linalg::axpy(-proj, &qi, &mut v);
            }
        }
        let norm = linalg::norm2(&v);
        if norm <= 1e-10 * original.max(1.0) {
            return None;
        }
        for i in 0..rows {
            q[(i, j)] = v[i] / norm;
        }
    }
    Some(q)
}

/// A coefficient vector together with its claimed sparsity level.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseCoefVector {
    values: Vec<f64>,
    sparsity: usize,
}

impl SparseCoefVector {
    /// Validates that the vector has at most `sparsity` nonzero entries.
    pub fn new(values: Vec<f64>, sparsity: usize) -> Result<SparseCoefVector, FrameError> {
        let nnz = values.iter().filter(|x| **x != 0.0).count();
        if nnz > sparsity {
            return Err(FrameError::SparsityOutOfRange {
                k: sparsity,
                atoms: nnz,
            });
        }
        Ok(SparseCoefVector { values, sparsity })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn sparsity(&self) -> usize {
        self.sparsity
    }
}

/// Best k-term approximation error in `l1`: the sum of all but the `k`
/// largest magnitudes.
pub fn best_k_term_error(v: &[f64], k: usize) -> Result<f64, FrameError> {
    if k > v.len() {
        return Err(FrameError::SparsityOutOfRange { k, atoms: v.len() });
    }
    let mut mags: Vec<f64> = v.iter().map(|x| x.abs()).collect();
    // Stable sort: equal magnitudes keep index order (the value is
    // tie-independent either way).
    mags.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Ok(mags[k..].iter().sum())
}

/// Outcome of a dictionary-sparse membership test.
#[derive(Debug, Clone, PartialEq)]
pub enum Membership {
    /// `x = D z` for a k-sparse `z` within tolerance; `witness` is the
    /// full-length coefficient vector and `support` its (lowest
    /// lexicographic) support.
    Member {
        support: Vec<usize>,
        witness: Vec<f64>,
        residual: f64,
    },
    /// Every support was tried and none fits within tolerance.
    NotMember { min_residual: f64 },
    /// The support family is too large for the stated budget; no verdict.
    Inconclusive { required: u128, budget: u128 },
}

impl Membership {
    pub fn is_member(&self) -> bool {
        matches!(self, Membership::Member { .. })
    }
}

/// Tests whether `x` lies in the image of the k-sparse coefficient
/// vectors, by per-support least squares over all `binomial(N, k)`
/// supports (lexicographic; first support within tolerance wins).
pub fn is_in_d_sigma_k(
    frame: &Frame,
    x: &[f64],
    k: usize,
    tol: f64,
    budget: u128,
) -> Result<Membership, FrameError> {
    let d = frame.matrix()?;
    if x.len() != d.rows() {
        return Err(FrameError::ShapeMismatch {
            expected: d.rows(),
            got: x.len(),
        });
    }
    let atoms = d.cols();
    if k > atoms {
        return Err(FrameError::SparsityOutOfRange { k, atoms });
    }
    let required = binomial(atoms, k);
    if required > budget {
        return Ok(Membership::Inconclusive { required, budget });
    }

    let mut min_residual = f64::INFINITY;
    for support in combinations(atoms, k) {
        let block = d.select_cols(&support);
        let (coeffs, residual) = least_squares(&block, x);
        if residual < min_residual {
            min_residual = residual;
        }
        if residual <= tol {
            let mut witness = vec![0.0; atoms];
            for (slot, &j) in support.iter().enumerate() {
                witness[j] = coeffs[slot];
            }
            return Ok(Membership::Member {
                support,
                witness,
                residual,
            });
        }
    }
    Ok(Membership::NotMember { min_residual })
}

/// Human-readable shape tag, used by reports.
pub fn shape_string(frame: &Frame) -> String {
    format!(
        "{}x{} {}",
        frame.dim(),
        frame.atoms(),
        match frame.field() {
            Field::Real => "real",
            Field::Complex => "complex",
        }
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_frame_is_tight_and_trivial() {
        let f = make_identity_frame(3);
        assert_eq!(f.dim(), 3);
        assert_eq!(f.atoms(), 3);
        assert!(f.is_tight());
        assert_eq!(f.tightness_deviation(), 0.0);

        let f1 = make_identity_frame(1);
        assert_eq!(f1.re_matrix().data(), &[1.0]);

        let f4 = make_identity_frame(4);
        let x = [1.0, -2.0, 3.0, 0.5];
        assert_eq!(f4.analyze(&x).unwrap(), x.to_vec());
        assert_eq!(f4.synthesize(&x).unwrap(), x.to_vec());
    }

    #[test]
    fn random_tight_frame_is_tight_and_deterministic() {
        let a = make_random_tight_frame(4, 6, 1).unwrap();
        assert!(a.tightness_deviation() <= 1e-10);
        let b = make_random_tight_frame(4, 6, 1).unwrap();
        assert_eq!(a.re_matrix().data(), b.re_matrix().data());

        // Square tight frame is orthogonal.
        let sq = make_random_tight_frame(5, 5, 9).unwrap();
        let g = sq.re_matrix().matmul(&sq.re_matrix().transpose());
        assert!(g.max_abs_dev_from_identity() <= 1e-10);
    }

    #[test]
    fn analysis_is_an_isometry_for_tight_frames() {
        let f = make_random_tight_frame(4, 7, 3).unwrap();
        let mut rng = crate::rng::RngStream::from_seed(11);
        for _ in 0..100 {
            let x = rng.normal_vec(4);
            let z = f.analyze(&x).unwrap();
            let back = f.synthesize(&z).unwrap();
            let nx = crate::linalg::norm2(&x);
            assert!((crate::linalg::norm2(&z) - nx).abs() <= 1e-8 * nx);
            for (b, xi) in back.iter().zip(&x) {
                assert!((b - xi).abs() <= 1e-10 * nx.max(1.0));
            }
        }
    }

    #[test]
    fn best_k_term_examples() {
        assert_eq!(best_k_term_error(&[3.0, -1.0, 0.5], 1).unwrap(), 1.5);
        assert_eq!(
            best_k_term_error(&[5.0, 4.0, 3.0, 2.0, 1.0], 2).unwrap(),
            6.0
        );
        assert_eq!(best_k_term_error(&[0.0, 2.0, 0.0], 1).unwrap(), 0.0);
        assert_eq!(best_k_term_error(&[1.0, 1.0], 2).unwrap(), 0.0);
        assert!(best_k_term_error(&[1.0], 2).is_err());
    }

    #[test]
    fn membership_finds_planted_support() {
        let f = make_random_tight_frame(4, 6, 5).unwrap();
        let mut z = vec![0.0; 6];
        z[2] = 1.7;
        let x = f.synthesize(&z).unwrap();
        let tol = default_membership_tol(&x);
        match is_in_d_sigma_k(&f, &x, 1, tol, DEFAULT_MEMBERSHIP_BUDGET).unwrap() {
            Membership::Member { support, .. } => assert_eq!(support, vec![2]),
            other => panic!("expected membership, got {:?}", other),
        }
    }

    #[test]
    fn membership_of_zero_vector() {
        let f = make_random_tight_frame(3, 5, 2).unwrap();
        let x = [0.0; 3];
        match is_in_d_sigma_k(&f, &x, 1, 1e-12, DEFAULT_MEMBERSHIP_BUDGET).unwrap() {
            Membership::Member { witness, .. } => {
                assert!(witness.iter().all(|&w| w.abs() <= 1e-12))
            }
            other => panic!("expected membership, got {:?}", other),
        }
    }

    #[test]
    fn membership_budget_is_explicit() {
        let f = make_random_tight_frame(4, 6, 5).unwrap();
        let x = [1.0, 0.0, 0.0, 0.0];
        match is_in_d_sigma_k(&f, &x, 3, 1e-8, 2).unwrap() {
            Membership::Inconclusive { required, budget } => {
                assert_eq!(required, 20);
                assert_eq!(budget, 2);
            }
            other => panic!("expected inconclusive, got {:?}", other),
        }
    }

    #[test]
    fn validation_rejects_bad_frames() {
        assert!(matches!(
            Frame::real(3, 2, &[0.0; 6], false, 1e-10),
            Err(FrameError::NotRedundant { .. })
        ));
        // Rank-deficient 2x3 (second row is a multiple of the first).
        assert!(matches!(
            Frame::real(2, 3, &[1.0, 2.0, 0.0, 2.0, 4.0, 0.0], false, 1e-10),
            Err(FrameError::RankDeficient { .. })
        ));
        // Tightness claim that does not hold.
        assert!(matches!(
            Frame::real(2, 2, &[2.0, 0.0, 0.0, 2.0], true, 1e-10),
            Err(FrameError::NotTight { .. })
        ));
    }
}
