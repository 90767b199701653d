//! Dense complex linear algebra for small Hilbert spaces.
//!
//! Self-contained kernel: hermitian eigendecomposition (cyclic Jacobi with
//! complex rotations), spectral matrix functions (sqrt and log of PSD
//! matrices), Kronecker product, partial trace and Hilbert-Schmidt inner
//! product. Everything operates on row-major `ndarray` matrices of
//! `Complex64` and is a pure function of its inputs.

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tol;

/// Carrier for all matrix-valued quantities in this crate.
pub type ComplexMatrix = Array2<Complex64>;

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// n x n identity matrix.
pub fn identity(n: usize) -> ComplexMatrix {
    Array2::from_diag_elem(n, ONE)
}

/// Conjugate transpose.
pub fn dagger(m: &ComplexMatrix) -> ComplexMatrix {
    m.t().mapv(|z| z.conj())
}

/// Trace.
pub fn mat_trace(m: &ComplexMatrix) -> Complex64 {
    m.diag().sum()
}

/// Frobenius norm.
pub fn frobenius_norm(m: &ComplexMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Hilbert-Schmidt inner product Tr[a^dag b].
pub fn hs_inner(a: &ComplexMatrix, b: &ComplexMatrix) -> Complex64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

/// Largest entrywise absolute difference between two matrices.
pub fn max_abs_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    assert_eq!(a.dim(), b.dim(), "max_abs_diff requires equal shapes");
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Frobenius norm of m - m^dag.
pub fn hermiticity_deviation(m: &ComplexMatrix) -> f64 {
    frobenius_norm(&(m - &dagger(m)))
}

fn require_square(m: &ComplexMatrix) -> Result<usize> {
    let (r, c) = m.dim();
    if r != c {
        return Err(Error::DimensionMismatch(format!(
            "expected a square matrix, got {r}x{c}"
        )));
    }
    Ok(r)
}

/// Reject NaN/infinite entries up front: they would otherwise slip through
/// tolerance comparisons (NaN > tol is false) and poison the solvers.
pub(crate) fn require_finite(m: &ComplexMatrix) -> Result<()> {
    if m.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::InvalidSpec(
            "matrix contains non-finite entries".into(),
        ))
    }
}

fn symmetrize(m: &ComplexMatrix) -> ComplexMatrix {
    let half = Complex64::new(0.5, 0.0);
    (m + &dagger(m)).mapv(|z| z * half)
}

/// Kronecker product, (a (x) b)_{(i,k),(j,l)} = a_{ij} b_{kl}.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    ndarray::linalg::kron(a, b)
}

/// Trace out the second factor of a bipartite operator on C^{da} (x) C^{db}.
///
/// Index convention is row-major: (r, s) -> db*r + s, so for two qubits the
/// basis ordering is |00>, |01>, |10>, |11>.
pub fn partial_trace_second(m: &ComplexMatrix, dims: (usize, usize)) -> Result<ComplexMatrix> {
    let (da, db) = dims;
    let n = require_square(m)?;
    if n != da * db || da == 0 || db == 0 {
        return Err(Error::DimensionMismatch(format!(
            "partial trace over ({da},{db}) needs a {0}x{0} matrix, got {n}x{n}",
            da * db
        )));
    }
    let mut out = Array2::from_elem((da, da), ZERO);
    for r in 0..da {
        for rp in 0..da {
            let mut acc = ZERO;
            for s in 0..db {
                acc += m[[db * r + s, db * rp + s]];
            }
            out[[r, rp]] = acc;
        }
    }
    Ok(out)
}

/// Eigendecomposition of a hermitian matrix.
///
/// Eigenvalues are sorted descending; degenerate pairs (within
/// [`tol::EIGEN_TIE`]) are ordered lexicographically on the phase-fixed
/// eigenvector entries so identical inputs always yield identical output.
/// Each eigenvector has its first component of magnitude above
/// [`tol::PHASE`] rotated to the positive real axis.
#[derive(Debug, Clone)]
pub struct HermitianEig {
    /// Real eigenvalues, descending.
    pub eigenvalues: Vec<f64>,
    /// Columns are the matching orthonormal eigenvectors.
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEig {
    /// Rebuild V diag(lambda) V^dag.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.eigenvalues.len();
        let mut out = Array2::from_elem((n, n), ZERO);
        for (mu, &lam) in self.eigenvalues.iter().enumerate() {
            let v = self.eigenvectors.column(mu);
            for i in 0..n {
                for j in 0..n {
                    out[[i, j]] += Complex64::new(lam, 0.0) * v[i] * v[j].conj();
                }
            }
        }
        out
    }
}

/// Diagonalize a hermitian matrix with cyclic Jacobi rotations.
///
/// The input is checked against `||m - m^dag||_F / ||m||_F <= 1e-10` and
/// symmetrized before iteration, so the decomposition is exactly hermitian.
pub fn eig_hermitian(m: &ComplexMatrix) -> Result<HermitianEig> {
    let n = require_square(m)?;
    require_finite(m)?;
    let scale = frobenius_norm(m);
    let dev = hermiticity_deviation(m);
    // relative criterion; the zero matrix passes with dev = scale = 0
    if dev > tol::HERMITICITY * scale {
        return Err(Error::NotHermitian {
            deviation: dev / scale,
        });
    }

    let mut a = symmetrize(m);
    let mut v = identity(n);
    let target = 1e-14 * scale.max(1.0);

    const MAX_SWEEPS: usize = 64;
    for _ in 0..MAX_SWEEPS {
        if off_diag_norm(&a) <= target {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                jacobi_rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut pairs: Vec<(f64, Vec<Complex64>)> = (0..n)
        .map(|mu| {
            let lam = a[[mu, mu]].re;
            let mut col: Vec<Complex64> = v.column(mu).to_vec();
            fix_phase(&mut col);
            (lam, col)
        })
        .collect();

    // Descending by eigenvalue, then lexicographic within degenerate runs.
    pairs.sort_by(|x, y| y.0.partial_cmp(&x.0).unwrap());
    let tie = tol::EIGEN_TIE * scale.max(1.0);
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && (pairs[end - 1].0 - pairs[end].0).abs() <= tie {
            end += 1;
        }
        if end - start > 1 {
            pairs[start..end].sort_by(|x, y| lex_cmp(&x.1, &y.1));
        }
        start = end;
    }

    let eigenvalues: Vec<f64> = pairs.iter().map(|(lam, _)| *lam).collect();
    let mut eigenvectors = Array2::from_elem((n, n), ZERO);
    for (mu, (_, col)) in pairs.iter().enumerate() {
        for (i, z) in col.iter().enumerate() {
            eigenvectors[[i, mu]] = *z;
        }
    }
    Ok(HermitianEig {
        eigenvalues,
        eigenvectors,
    })
}

fn off_diag_norm(a: &ComplexMatrix) -> f64 {
    let n = a.nrows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a[[i, j]].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// One complex Jacobi rotation zeroing a[[p, q]].
///
/// The plane rotation is J = D R with D = diag(1, e^{-i phi}) absorbing the
/// phase of a_pq and R the classical real rotation; A <- J^dag A J keeps A
/// hermitian and V <- V J accumulates eigenvectors.
fn jacobi_rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let n = a.nrows();
    let apq = a[[p, q]];
    let r = apq.norm();
    if r <= 1e-300 {
        a[[p, q]] = ZERO;
        a[[q, p]] = ZERO;
        return;
    }
    let phase = apq / r;
    let app = a[[p, p]].re;
    let aqq = a[[q, q]].re;
    let tau = (aqq - app) / (2.0 * r);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    let jc = Complex64::new(c, 0.0);
    let js = Complex64::new(s, 0.0);
    let jqp = -js * phase.conj();
    let jqq = jc * phase.conj();

    // A <- A J (columns p, q)
    for i in 0..n {
        let aip = a[[i, p]];
        let aiq = a[[i, q]];
        a[[i, p]] = aip * jc + aiq * jqp;
        a[[i, q]] = aip * js + aiq * jqq;
    }
    // A <- J^dag A (rows p, q)
    for j in 0..n {
        let apj = a[[p, j]];
        let aqj = a[[q, j]];
        a[[p, j]] = apj * jc + aqj * jqp.conj();
        a[[q, j]] = apj * js + aqj * jqq.conj();
    }
    // V <- V J
    for i in 0..n {
        let vip = v[[i, p]];
        let viq = v[[i, q]];
        v[[i, p]] = vip * jc + viq * jqp;
        v[[i, q]] = vip * js + viq * jqq;
    }

    a[[p, q]] = ZERO;
    a[[q, p]] = ZERO;
    a[[p, p]] = Complex64::new(app - t * r, 0.0);
    a[[q, q]] = Complex64::new(aqq + t * r, 0.0);
}

fn fix_phase(col: &mut [Complex64]) {
    if let Some(lead) = col.iter().find(|z| z.norm() > tol::PHASE) {
        let factor = lead.conj() / lead.norm();
        for z in col.iter_mut() {
            *z *= factor;
        }
    }
}

fn lex_cmp(a: &[Complex64], b: &[Complex64]) -> std::cmp::Ordering {
    use std::cmp::Ordering;
    for (x, y) in a.iter().zip(b.iter()) {
        match x.re.partial_cmp(&y.re).unwrap_or(Ordering::Equal) {
            Ordering::Equal => {}
            ord => return ord,
        }
        match x.im.partial_cmp(&y.im).unwrap_or(Ordering::Equal) {
            Ordering::Equal => {}
            ord => return ord,
        }
    }
    Ordering::Equal
}

/// Principal square root of a hermitian PSD matrix.
///
/// Eigenvalues in [-1e-10, 0) are clamped to zero; anything lower is a
/// genuine violation and yields [`Error::NotPsd`].
pub fn mat_sqrt_psd(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = eig_hermitian(m)?;
    let clamped = clamp_psd(&eig.eigenvalues)?;
    Ok(spectral_apply(&eig, &clamped, f64::sqrt))
}

/// Logarithm of a hermitian PSD matrix taken on its support.
#[derive(Debug, Clone)]
pub struct SpectralLog {
    /// sum_{lambda > support} ln(lambda) v v^dag; zero on the kernel.
    pub log: ComplexMatrix,
    /// Projector onto the support (eigenvalues above [`tol::SUPPORT`]).
    pub support: ComplexMatrix,
    /// Rank of the support projector.
    pub support_dim: usize,
}

/// Spectral logarithm with the support projector, so callers can apply the
/// 0 ln 0 = 0 convention and detect support violations.
pub fn mat_log_spectral(m: &ComplexMatrix) -> Result<SpectralLog> {
    let eig = eig_hermitian(m)?;
    let clamped = clamp_psd(&eig.eigenvalues)?;
    let n = clamped.len();
    let mut log = Array2::from_elem((n, n), ZERO);
    let mut support = Array2::from_elem((n, n), ZERO);
    let mut support_dim = 0;
    for (mu, &lam) in clamped.iter().enumerate() {
        if lam > tol::SUPPORT {
            support_dim += 1;
            let v = eig.eigenvectors.column(mu);
            let ln = Complex64::new(lam.ln(), 0.0);
            for i in 0..n {
                for j in 0..n {
                    let proj = v[i] * v[j].conj();
                    log[[i, j]] += ln * proj;
                    support[[i, j]] += proj;
                }
            }
        }
    }
    Ok(SpectralLog {
        log,
        support,
        support_dim,
    })
}

fn clamp_psd(eigenvalues: &[f64]) -> Result<Vec<f64>> {
    let min = eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    if min < -tol::PSD_CLAMP {
        return Err(Error::NotPsd {
            min_eigenvalue: min,
        });
    }
    Ok(eigenvalues.iter().map(|&l| l.max(0.0)).collect())
}

fn spectral_apply(
    eig: &HermitianEig,
    eigenvalues: &[f64],
    f: impl Fn(f64) -> f64,
) -> ComplexMatrix {
    let n = eigenvalues.len();
    let mut out = Array2::from_elem((n, n), ZERO);
    for (mu, &lam) in eigenvalues.iter().enumerate() {
        let v = eig.eigenvectors.column(mu);
        let w = Complex64::new(f(lam), 0.0);
        for i in 0..n {
            for j in 0..n {
                out[[i, j]] += w * v[i] * v[j].conj();
            }
        }
    }
    out
}

/// Pauli matrices and the operator bases built from them.
pub mod pauli {
    use super::{Complex64, ComplexMatrix, ONE, ZERO};
    use ndarray::array;

    pub fn identity() -> ComplexMatrix {
        array![[ONE, ZERO], [ZERO, ONE]]
    }

    pub fn x() -> ComplexMatrix {
        array![[ZERO, ONE], [ONE, ZERO]]
    }

    pub fn y() -> ComplexMatrix {
        array![
            [ZERO, Complex64::new(0.0, -1.0)],
            [Complex64::new(0.0, 1.0), ZERO]
        ]
    }

    pub fn z() -> ComplexMatrix {
        array![[ONE, ZERO], [ZERO, Complex64::new(-1.0, 0.0)]]
    }

    /// {I, x, y, z} / sqrt(2): orthonormal under the Hilbert-Schmidt inner
    /// product, in that order.
    pub fn normalized_basis() -> Vec<ComplexMatrix> {
        let w = Complex64::new(1.0 / 2.0_f64.sqrt(), 0.0);
        [identity(), x(), y(), z()]
            .into_iter()
            .map(|m| m.mapv(|e| e * w))
            .collect()
    }
}

/// Matrix-unit basis {|r><s|} of n x n matrices, row-major order.
pub fn matrix_unit_basis(n: usize) -> Vec<ComplexMatrix> {
    let mut basis = Vec::with_capacity(n * n);
    for r in 0..n {
        for s in 0..n {
            let mut e = Array2::from_elem((n, n), ZERO);
            e[[r, s]] = ONE;
            basis.push(e);
        }
    }
    basis
}
