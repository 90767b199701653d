//! Dynamical-map algebra.
//!
//! An A-map acts linearly on the flattened density matrix,
//! `[rho(t)]_{r's'} = sum_{rs} A_{r's';rs} [rho(0)]_{rs}`, with the row-major
//! flattening (r, s) -> n*r + s. Hermiticity preservation requires
//! `A_{s'r';sr} = conj(A_{r's';rs})` and trace preservation
//! `sum_{r'} A_{r'r';rs} = delta_{rs}`; both are validated on construction.
//!
//! Expanding A over an orthonormal operator basis {T_a} gives the hermitian
//! coefficient matrix `M_{ab} = Tr[A (T_a^dag (x) T_b^T)]` whose
//! eigendecomposition yields the canonical form
//! `A = sum_mu lambda_mu C_mu (x) C_mu^*` with Hilbert-Schmidt-orthonormal
//! operators C_mu. The map is completely positive exactly when every
//! lambda_mu is non-negative. The index realignment
//! `B_{r'r;s's} = A_{r's';rs}` produces a hermitian matrix with the same
//! spectrum, which is how the two routes cross-check each other.

use ndarray::Array2;
use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{
    self, dagger, eig_hermitian, frobenius_norm, hs_inner, identity, kron, ComplexMatrix,
};
use crate::tol;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// A quantum state: hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Validate hermiticity, unit trace and positivity (eigenvalues above
    /// -1e-10) and wrap the matrix.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let rho = Self::hermitian_unit_trace(matrix)?;
        let min = rho.min_eigenvalue();
        if min < -tol::PSD_CLAMP {
            return Err(Error::NotPsd {
                min_eigenvalue: min,
            });
        }
        Ok(rho)
    }

    /// Validate hermiticity and unit trace only. Used for the output of map
    /// application, where an NCP map may push an eigenvalue negative; the
    /// caller records that in [`Evolved::positivity_violation`].
    pub(crate) fn hermitian_unit_trace(matrix: ComplexMatrix) -> Result<Self> {
        let (r, c) = matrix.dim();
        if r != c || r == 0 {
            return Err(Error::DimensionMismatch(format!(
                "density matrix must be square and non-empty, got {r}x{c}"
            )));
        }
        linalg::require_finite(&matrix)?;
        let scale = frobenius_norm(&matrix).max(1.0);
        let dev = linalg::hermiticity_deviation(&matrix);
        if dev > tol::HERMITICITY * scale {
            return Err(Error::NotHermitian {
                deviation: dev / scale,
            });
        }
        let trace = linalg::mat_trace(&matrix);
        if (trace - Complex64::new(1.0, 0.0)).norm() > tol::TRACE {
            return Err(Error::InvalidSpec(format!(
                "density matrix trace is {trace}, expected 1"
            )));
        }
        Ok(Self { matrix })
    }

    /// The maximally mixed state I/n.
    pub fn maximally_mixed(n: usize) -> Self {
        Self {
            matrix: identity(n).mapv(|z| z / n as f64),
        }
    }

    /// Projector |psi><psi| onto a (normalized) ket.
    pub fn pure(ket: &[Complex64]) -> Result<Self> {
        let n = ket.len();
        let norm_sqr: f64 = ket.iter().map(|z| z.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > tol::TRACE {
            return Err(Error::InvalidSpec(format!(
                "ket norm^2 is {norm_sqr}, expected 1"
            )));
        }
        let mut matrix = Array2::from_elem((n, n), ZERO);
        for i in 0..n {
            for j in 0..n {
                matrix[[i, j]] = ket[i] * ket[j].conj();
            }
        }
        Self::new(matrix)
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// Eigenvalues, descending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        eig_hermitian(&self.matrix)
            .expect("density matrix is hermitian by construction")
            .eigenvalues
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues().into_iter().fold(f64::INFINITY, f64::min)
    }

    /// Bloch vector (r_x, r_y, r_z) for a qubit state, None otherwise.
    pub fn bloch_vector(&self) -> Option<[f64; 3]> {
        if self.dim() != 2 {
            return None;
        }
        let m = &self.matrix;
        Some([
            2.0 * m[[0, 1]].re,
            -2.0 * m[[0, 1]].im,
            m[[0, 0]].re - m[[1, 1]].re,
        ])
    }
}

/// Output of applying a dynamical map: the evolved state plus a flag set
/// when an NCP map pushed an eigenvalue below -1e-10. Hermiticity and unit
/// trace always hold; positivity is checked, not enforced.
#[derive(Debug, Clone)]
pub struct Evolved {
    pub state: DensityMatrix,
    pub positivity_violation: bool,
}

/// The n^2 x n^2 matrix of a linear dynamical map, indexed A_{r's';rs}.
#[derive(Debug, Clone, PartialEq)]
pub struct AMap {
    dim: usize,
    matrix: ComplexMatrix,
}

impl AMap {
    /// Validate the hermiticity-preservation and trace-preservation
    /// conditions and wrap the matrix.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let (rows, cols) = matrix.dim();
        if rows != cols {
            return Err(Error::DimensionMismatch(format!(
                "map matrix must be square, got {rows}x{cols}"
            )));
        }
        let dim = (rows as f64).sqrt().round() as usize;
        if dim * dim != rows || dim == 0 {
            return Err(Error::DimensionMismatch(format!(
                "map matrix side {rows} is not a perfect square"
            )));
        }
        linalg::require_finite(&matrix)?;
        let scale = frobenius_norm(&matrix).max(1.0);
        let mut herm_dev = 0.0_f64;
        for rp in 0..dim {
            for sp in 0..dim {
                for r in 0..dim {
                    for s in 0..dim {
                        let swapped = matrix[[dim * sp + rp, dim * s + r]];
                        let original = matrix[[dim * rp + sp, dim * r + s]];
                        herm_dev = herm_dev.max((swapped - original.conj()).norm());
                    }
                }
            }
        }
        if herm_dev > tol::HERMITICITY * scale {
            return Err(Error::NotHermitian {
                deviation: herm_dev / scale,
            });
        }
        for r in 0..dim {
            for s in 0..dim {
                let mut acc = ZERO;
                for rp in 0..dim {
                    acc += matrix[[dim * rp + rp, dim * r + s]];
                }
                let want = if r == s { 1.0 } else { 0.0 };
                if (acc - Complex64::new(want, 0.0)).norm() > tol::TRACE {
                    return Err(Error::InvalidSpec(format!(
                        "map is not trace preserving at column ({r},{s})"
                    )));
                }
            }
        }
        Ok(Self { dim, matrix })
    }

    /// The identity map on n x n density matrices.
    pub fn identity(n: usize) -> Self {
        Self {
            dim: n,
            matrix: identity(n * n),
        }
    }

    /// System dimension n (the matrix is n^2 x n^2).
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// Entry A_{r's';rs}.
    pub fn entry(&self, rp: usize, sp: usize, r: usize, s: usize) -> Complex64 {
        self.matrix[[self.dim * rp + sp, self.dim * r + s]]
    }
}

/// Hermitian realignment B_{r'r;s's} = A_{r's';rs} of a dynamical map.
#[derive(Debug, Clone, PartialEq)]
pub struct BMatrix {
    dim: usize,
    matrix: ComplexMatrix,
}

impl BMatrix {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// Spectrum, descending. Equal to the spectrum of the coefficient
    /// matrix of the originating map.
    pub fn eigenvalues(&self) -> Vec<f64> {
        eig_hermitian(&self.matrix)
            .expect("realignment of a valid map is hermitian")
            .eigenvalues
    }

    /// Undo the realignment (the permutation is an involution).
    pub fn to_amap(&self) -> Result<AMap> {
        AMap::new(realign(&self.matrix, self.dim))
    }
}

/// Classification of a dynamical map by the sign of its canonical spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Classification {
    #[serde(rename = "CP")]
    Cp,
    #[serde(rename = "NCP")]
    Ncp,
}

impl std::fmt::Display for Classification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Classification::Cp => write!(f, "CP"),
            Classification::Ncp => write!(f, "NCP"),
        }
    }
}

/// Spectral form A = sum_mu lambda_mu C_mu (x) C_mu^* of a dynamical map.
///
/// The operator list always has n^2 entries, including those with zero
/// eigenvalue; callers filter by |lambda| when they need the effective rank.
#[derive(Debug, Clone)]
pub struct CanonicalDecomposition {
    dim: usize,
    eigenvalues: Vec<f64>,
    operators: Vec<ComplexMatrix>,
    classification: Classification,
    negativity: f64,
}

impl CanonicalDecomposition {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Real canonical eigenvalues, descending.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// The operators C_mu, Hilbert-Schmidt orthonormal, matching the
    /// eigenvalue order.
    pub fn operators(&self) -> &[ComplexMatrix] {
        &self.operators
    }

    pub fn classification(&self) -> Classification {
        self.classification
    }

    /// -sum of the negative eigenvalues (0 for a CP map).
    pub fn negativity(&self) -> f64 {
        self.negativity
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    /// Rebuild the map matrix sum_mu lambda_mu C_mu (x) C_mu^*.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n2 = self.dim * self.dim;
        let mut out = Array2::from_elem((n2, n2), ZERO);
        for (lam, op) in self.eigenvalues.iter().zip(&self.operators) {
            let term = kron(op, &op.mapv(|z| z.conj()));
            out = out + term.mapv(|z| z * *lam);
        }
        out
    }
}

fn check_basis(basis: &[ComplexMatrix], dim: usize) -> Result<()> {
    if basis.len() != dim * dim {
        return Err(Error::DimensionMismatch(format!(
            "operator basis needs {} elements for dimension {dim}, got {}",
            dim * dim,
            basis.len()
        )));
    }
    for (i, a) in basis.iter().enumerate() {
        if a.dim() != (dim, dim) {
            return Err(Error::DimensionMismatch(format!(
                "basis element {i} is {:?}, expected ({dim},{dim})",
                a.dim()
            )));
        }
        for (j, b) in basis.iter().enumerate() {
            let want = if i == j { 1.0 } else { 0.0 };
            if (hs_inner(a, b) - Complex64::new(want, 0.0)).norm() > tol::HERMITICITY {
                return Err(Error::BasisNotOrthonormal);
            }
        }
    }
    Ok(())
}

/// Coefficient matrix M_{ab} = Tr[A (T_a^dag (x) T_b^T)] of a map over an
/// orthonormal operator basis. Hermitian whenever the map preserves
/// hermiticity.
pub fn coefficient_matrix(a: &AMap, basis: &[ComplexMatrix]) -> Result<ComplexMatrix> {
    let n = a.dim();
    check_basis(basis, n)?;
    let n2 = n * n;
    let mut m = Array2::from_elem((n2, n2), ZERO);
    for (al, ta) in basis.iter().enumerate() {
        let ta_dag = dagger(ta);
        for (be, tb) in basis.iter().enumerate() {
            let tb_t = tb.t().to_owned();
            let probe = kron(&ta_dag, &tb_t);
            m[[al, be]] = linalg::mat_trace(&a.matrix().dot(&probe));
        }
    }
    Ok(m)
}

/// Canonical decomposition of a map over an orthonormal operator basis:
/// diagonalize the coefficient matrix and assemble C_mu = sum_a V_{a mu} T_a
/// from its eigenvector columns.
pub fn canonical_decompose(a: &AMap, basis: &[ComplexMatrix]) -> Result<CanonicalDecomposition> {
    let n = a.dim();
    let coeff = coefficient_matrix(a, basis)?;
    let eig = eig_hermitian(&coeff)?;
    let mut operators = Vec::with_capacity(n * n);
    for mu in 0..n * n {
        let mut op = Array2::from_elem((n, n), ZERO);
        for (al, t) in basis.iter().enumerate() {
            let w = eig.eigenvectors[[al, mu]];
            op = op + t.mapv(|z| z * w);
        }
        operators.push(op);
    }
    let negativity = -eig
        .eigenvalues
        .iter()
        .filter(|&&l| l < -tol::NEGATIVITY)
        .sum::<f64>();
    let classification = if eig.eigenvalues.iter().any(|&l| l < -tol::NEGATIVITY) {
        Classification::Ncp
    } else {
        Classification::Cp
    };
    Ok(CanonicalDecomposition {
        dim: n,
        eigenvalues: eig.eigenvalues,
        operators,
        classification,
        negativity,
    })
}

fn realign(matrix: &ComplexMatrix, n: usize) -> ComplexMatrix {
    let mut out = Array2::from_elem((n * n, n * n), ZERO);
    for rp in 0..n {
        for r in 0..n {
            for sp in 0..n {
                for s in 0..n {
                    out[[n * rp + r, n * sp + s]] = matrix[[n * rp + sp, n * r + s]];
                }
            }
        }
    }
    out
}

/// Realign a map into its hermitian B form, B_{r'r;s's} = A_{r's';rs}.
pub fn realign_to_b(a: &AMap) -> BMatrix {
    BMatrix {
        dim: a.dim(),
        matrix: realign(a.matrix(), a.dim()),
    }
}

/// Apply a map to a state through its matrix on the flattened state.
pub fn apply_map(a: &AMap, rho: &DensityMatrix) -> Result<Evolved> {
    let n = a.dim();
    if rho.dim() != n {
        return Err(Error::DimensionMismatch(format!(
            "map dimension {n} vs state dimension {}",
            rho.dim()
        )));
    }
    let flat = ndarray::Array1::from_iter(rho.matrix().iter().copied());
    let out = a.matrix().dot(&flat);
    let matrix = Array2::from_shape_fn((n, n), |(r, s)| out[n * r + s]);
    finish_evolved(matrix)
}

/// Apply a map through its canonical form,
/// rho(t) = sum_mu lambda_mu C_mu rho(0) C_mu^dag.
pub fn apply_canonical(d: &CanonicalDecomposition, rho: &DensityMatrix) -> Result<Evolved> {
    let n = d.dim();
    if rho.dim() != n {
        return Err(Error::DimensionMismatch(format!(
            "decomposition dimension {n} vs state dimension {}",
            rho.dim()
        )));
    }
    let mut matrix = Array2::from_elem((n, n), ZERO);
    for (lam, op) in d.eigenvalues().iter().zip(d.operators()) {
        let term = op.dot(rho.matrix()).dot(&dagger(op));
        matrix = matrix + term.mapv(|z| z * *lam);
    }
    finish_evolved(matrix)
}

fn finish_evolved(matrix: ComplexMatrix) -> Result<Evolved> {
    let state = DensityMatrix::hermitian_unit_trace(matrix)?;
    let positivity_violation = state.min_eigenvalue() < -tol::PSD_CLAMP;
    Ok(Evolved {
        state,
        positivity_violation,
    })
}

/// Frobenius deviation ||A(t+tau) - A(t) A(tau)||_F from the one-parameter
/// semigroup property at a single (t, tau) point. Zero (within 1e-10)
/// certifies the relation there.
pub fn check_semigroup<F>(family: F, t: f64, tau: f64) -> f64
where
    F: Fn(f64) -> AMap,
{
    let combined = family(t + tau);
    let product = family(t).matrix().dot(family(tau).matrix());
    frobenius_norm(&(combined.matrix() - &product))
}

// ---- JSON representation ----
//
// Complex numbers serialize as [re, im] pairs and matrices as nested
// row-major arrays.

fn matrix_to_rows(m: &ComplexMatrix) -> Vec<Vec<[f64; 2]>> {
    m.outer_iter()
        .map(|row| row.iter().map(|z| [z.re, z.im]).collect())
        .collect()
}

fn rows_to_matrix(rows: &[Vec<[f64; 2]>]) -> Result<ComplexMatrix> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    if nrows == 0 || rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::DimensionMismatch(
            "matrix rows are empty or ragged".into(),
        ));
    }
    Ok(Array2::from_shape_fn((nrows, ncols), |(i, j)| {
        Complex64::new(rows[i][j][0], rows[i][j][1])
    }))
}

#[derive(Serialize, Deserialize)]
struct AMapRepr {
    dim: usize,
    matrix: Vec<Vec<[f64; 2]>>,
}

impl Serialize for AMap {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        AMapRepr {
            dim: self.dim,
            matrix: matrix_to_rows(&self.matrix),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for AMap {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = AMapRepr::deserialize(deserializer)?;
        let matrix = rows_to_matrix(&repr.matrix).map_err(D::Error::custom)?;
        let amap = AMap::new(matrix).map_err(D::Error::custom)?;
        if amap.dim() != repr.dim {
            return Err(D::Error::custom(format!(
                "declared dim {} does not match matrix side {}",
                repr.dim,
                amap.dim()
            )));
        }
        Ok(amap)
    }
}

#[derive(Serialize, Deserialize)]
struct DecompositionRepr {
    dim: usize,
    eigenvalues: Vec<f64>,
    operators: Vec<Vec<Vec<[f64; 2]>>>,
    classification: Classification,
    negativity: f64,
}

impl Serialize for CanonicalDecomposition {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        DecompositionRepr {
            dim: self.dim,
            eigenvalues: self.eigenvalues.clone(),
            operators: self.operators.iter().map(matrix_to_rows).collect(),
            classification: self.classification,
            negativity: self.negativity,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CanonicalDecomposition {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = DecompositionRepr::deserialize(deserializer)?;
        let n = repr.dim;
        if repr.eigenvalues.len() != n * n || repr.operators.len() != n * n {
            return Err(D::Error::custom(
                "decomposition needs n^2 eigenvalues and operators",
            ));
        }
        let mut operators = Vec::with_capacity(n * n);
        for rows in &repr.operators {
            let op = rows_to_matrix(rows).map_err(D::Error::custom)?;
            if op.dim() != (n, n) {
                return Err(D::Error::custom("operator shape does not match dim"));
            }
            operators.push(op);
        }
        Ok(CanonicalDecomposition {
            dim: n,
            eigenvalues: repr.eigenvalues,
            operators,
            classification: repr.classification,
            negativity: repr.negativity,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{matrix_unit_basis, max_abs_diff, pauli};
    use ndarray::array;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// The explicit qubit-pair map at parameters (a1, a2) and phase wt;
    /// duplicated here from the model module's closed form so dynmap tests
    /// do not depend on it.
    fn model_map(a1: f64, a2: f64, wt: f64) -> AMap {
        let a = c(a1, a2);
        let (cc, ss) = (wt.cos(), wt.sin());
        let h = c(0.5 * ss, 0.0);
        let matrix = array![
            [c(1.0, 0.0), ZERO, ZERO, ZERO],
            [h * a.conj(), c(cc, 0.0), ZERO, h * a.conj()],
            [h * a, ZERO, c(cc, 0.0), h * a],
            [ZERO, ZERO, ZERO, c(1.0, 0.0)]
        ];
        AMap::new(matrix).unwrap()
    }

    fn example_state() -> DensityMatrix {
        // rho_1(0) of the pure-entangled example at phi = 0
        DensityMatrix::new(
            array![[c(1.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(2.0, 0.0)]].mapv(|z| z / 3.0),
        )
        .unwrap()
    }

    #[test]
    fn identity_map_coefficient_matrix_is_rank_one() {
        let a = AMap::identity(2);
        let m = coefficient_matrix(&a, &pauli::normalized_basis()).unwrap();
        let mut expected = Array2::from_elem((4, 4), ZERO);
        expected[[0, 0]] = c(2.0, 0.0);
        assert!(max_abs_diff(&m, &expected) < 1e-14);
    }

    #[test]
    fn identity_map_canonical_form() {
        let a = AMap::identity(2);
        let d = canonical_decompose(&a, &pauli::normalized_basis()).unwrap();
        assert_eq!(d.classification(), Classification::Cp);
        assert!((d.eigenvalues()[0] - 2.0).abs() < 1e-13);
        for &l in &d.eigenvalues()[1..] {
            assert!(l.abs() < 1e-13);
        }
        // leading operator is I/sqrt(2) after the phase fix
        let expected = identity(2).mapv(|z| z / 2.0_f64.sqrt());
        assert!(max_abs_diff(&d.operators()[0], &expected) < 1e-13);
        assert!((d.negativity() - 0.0).abs() < 1e-13);
    }

    #[test]
    fn model_map_matches_closed_coefficient_matrix() {
        let (a1, a2, wt) = (0.3, -0.5, 1.234);
        let a = model_map(a1, a2, wt);
        let m = coefficient_matrix(&a, &pauli::normalized_basis()).unwrap();
        let (cc, ss) = (wt.cos(), wt.sin());
        let expected = array![
            [
                c(1.0 + cc, 0.0),
                c(0.5 * a1 * ss, 0.0),
                c(0.5 * a2 * ss, 0.0),
                ZERO
            ],
            [c(0.5 * a1 * ss, 0.0), ZERO, ZERO, c(0.0, 0.5 * a2 * ss)],
            [c(0.5 * a2 * ss, 0.0), ZERO, ZERO, c(0.0, -0.5 * a1 * ss)],
            [
                ZERO,
                c(0.0, -0.5 * a2 * ss),
                c(0.0, 0.5 * a1 * ss),
                c(1.0 - cc, 0.0)
            ]
        ];
        assert!(max_abs_diff(&m, &expected) < 1e-13);
    }

    #[test]
    fn canonical_reconstructs_the_map() {
        for (a1, a2, wt) in [(0.3, -0.5, 1.234), (0.0, 2.0 / 3.0, 2.9), (0.6, 0.6, 0.4)] {
            let a = model_map(a1, a2, wt);
            let d = canonical_decompose(&a, &pauli::normalized_basis()).unwrap();
            assert!(max_abs_diff(&d.reconstruct(), a.matrix()) < 1e-12);
            // Hilbert-Schmidt orthonormality of the C_mu
            for (i, x) in d.operators().iter().enumerate() {
                for (j, y) in d.operators().iter().enumerate() {
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!((hs_inner(x, y) - c(want, 0.0)).norm() < 1e-12);
                }
            }
            // trace identity sum lambda C^dag C = I
            let mut acc = Array2::from_elem((2, 2), ZERO);
            for (lam, op) in d.eigenvalues().iter().zip(d.operators()) {
                acc = acc + dagger(op).dot(op).mapv(|z| z * *lam);
            }
            assert!(max_abs_diff(&acc, &identity(2)) < 1e-12);
        }
    }

    #[test]
    fn quarter_period_map_is_ncp() {
        let d = canonical_decompose(
            &model_map(0.0, 2.0 / 3.0, std::f64::consts::FRAC_PI_2),
            &pauli::normalized_basis(),
        )
        .unwrap();
        assert_eq!(d.classification(), Classification::Ncp);
        let root = (1.0_f64 + 4.0 / 9.0).sqrt();
        let expected = [
            0.5 * (1.0 + root),
            0.5 * (1.0 + root),
            0.5 * (1.0 - root),
            0.5 * (1.0 - root),
        ];
        for (got, want) in d.eigenvalues().iter().zip(expected) {
            assert!((got - want).abs() < 1e-12);
        }
        assert!((d.negativity() - (root - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn zero_phase_map_is_identity_and_cp() {
        let d =
            canonical_decompose(&model_map(0.4, -0.9, 0.0), &pauli::normalized_basis()).unwrap();
        assert_eq!(d.classification(), Classification::Cp);
        let expected = [2.0, 0.0, 0.0, 0.0];
        for (got, want) in d.eigenvalues().iter().zip(expected) {
            assert!((got - want).abs() < 1e-13);
        }
    }

    #[test]
    fn basis_independence_of_spectrum() {
        let a = model_map(0.25, 0.55, 2.1);
        let d_pauli = canonical_decompose(&a, &pauli::normalized_basis()).unwrap();
        let d_unit = canonical_decompose(&a, &matrix_unit_basis(2)).unwrap();
        for (x, y) in d_pauli.eigenvalues().iter().zip(d_unit.eigenvalues()) {
            assert!((x - y).abs() < 1e-12);
        }
        assert!(max_abs_diff(&d_unit.reconstruct(), a.matrix()) < 1e-12);
    }

    #[test]
    fn rejects_non_orthonormal_basis() {
        let a = AMap::identity(2);
        let mut basis = pauli::normalized_basis();
        basis[1] = basis[1].mapv(|z| z * c(2.0, 0.0));
        assert!(matches!(
            coefficient_matrix(&a, &basis),
            Err(Error::BasisNotOrthonormal)
        ));
    }

    #[test]
    fn realign_identity_map_spectrum() {
        let b = realign_to_b(&AMap::identity(2));
        let ev = b.eigenvalues();
        let expected = [2.0, 0.0, 0.0, 0.0];
        for (got, want) in ev.iter().zip(expected) {
            assert!((got - want).abs() < 1e-13);
        }
    }

    #[test]
    fn realign_is_involutive_and_spectrum_matches_coefficients() {
        let a = model_map(0.3, -0.5, 1.234);
        let b = realign_to_b(&a);
        assert!(linalg::hermiticity_deviation(b.matrix()) < 1e-13);
        assert!(max_abs_diff(b.to_amap().unwrap().matrix(), a.matrix()) < 1e-14);
        let coeff = coefficient_matrix(&a, &pauli::normalized_basis()).unwrap();
        let ev_coeff = eig_hermitian(&coeff).unwrap().eigenvalues;
        for (x, y) in ev_coeff.iter().zip(b.eigenvalues()) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn apply_identity_is_identity() {
        let rho = example_state();
        let out = apply_map(&AMap::identity(2), &rho).unwrap();
        assert!(!out.positivity_violation);
        assert!(max_abs_diff(out.state.matrix(), rho.matrix()) < 1e-15);
        // mismatched dimensions are rejected
        let big = DensityMatrix::maximally_mixed(4);
        assert!(matches!(
            apply_map(&AMap::identity(2), &big),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn apply_model_map_reproduces_displayed_action() {
        // a1 = 0, a2 = 2/3 on rho = (1/3)[[1,1],[1,2]] must give
        // (1/3)[[1, C - iS],[C + iS, 2]].
        for wt in [0.7, 1.9, 4.4] {
            let a = model_map(0.0, 2.0 / 3.0, wt);
            let out = apply_map(&a, &example_state()).unwrap();
            let (cc, ss) = (wt.cos(), wt.sin());
            let expected =
                array![[c(1.0, 0.0), c(cc, -ss)], [c(cc, ss), c(2.0, 0.0)]].mapv(|z| z / 3.0);
            assert!(max_abs_diff(out.state.matrix(), &expected) < 1e-13);
        }
    }

    #[test]
    fn apply_canonical_agrees_with_direct_application() {
        let basis = pauli::normalized_basis();
        for (a1, a2, wt) in [(0.0, 2.0 / 3.0, 1.1), (0.4, -0.2, 2.7), (0.0, 0.0, 0.9)] {
            let a = model_map(a1, a2, wt);
            let d = canonical_decompose(&a, &basis).unwrap();
            let rho = example_state();
            let direct = apply_map(&a, &rho).unwrap();
            let canonical = apply_canonical(&d, &rho).unwrap();
            assert!(max_abs_diff(direct.state.matrix(), canonical.state.matrix()) < 1e-12);
            assert_eq!(direct.positivity_violation, canonical.positivity_violation);
        }
    }

    #[test]
    fn semigroup_identity_family_has_no_deviation() {
        let dev = check_semigroup(|_| AMap::identity(2), 0.4, 1.7);
        assert!(dev < 1e-15);
    }

    #[test]
    fn semigroup_deviation_at_a_zero() {
        // even at a = 0 the family is not a semigroup:
        // cos(2 pi/3) != cos^2(pi/3); deviation is 0.75*sqrt(2).
        let t = std::f64::consts::FRAC_PI_3;
        let dev = check_semigroup(|u| model_map(0.0, 0.0, u), t, t);
        assert!(dev > 0.1);
        assert!((dev - 0.75 * 2.0_f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn semigroup_deviation_generic_point() {
        let t = std::f64::consts::FRAC_PI_4;
        let dev = check_semigroup(|u| model_map(0.0, 2.0 / 3.0, u), t, t);
        assert!(dev > 0.1);
    }

    #[test]
    fn amap_constructor_rejects_bad_maps() {
        // breaks trace preservation
        let mut m = identity(4);
        m[[0, 0]] = c(0.5, 0.0);
        assert!(AMap::new(m).is_err());
        // breaks hermiticity preservation
        let mut m = identity(4);
        m[[1, 0]] = c(0.3, 0.1);
        m[[2, 0]] = c(0.3, 0.2); // should be conj of the above
        assert!(matches!(AMap::new(m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn density_matrix_validation() {
        // not unit trace
        let m = identity(2);
        assert!(DensityMatrix::new(m).is_err());
        // negative eigenvalue
        let m = array![[c(1.5, 0.0), ZERO], [ZERO, c(-0.5, 0.0)]];
        assert!(matches!(DensityMatrix::new(m), Err(Error::NotPsd { .. })));
        // valid
        let rho = example_state();
        assert_eq!(rho.dim(), 2);
        let b = rho.bloch_vector().unwrap();
        assert!((b[0] - 2.0 / 3.0).abs() < 1e-15);
        assert!(b[1].abs() < 1e-15);
        assert!((b[2] + 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn ncp_map_flags_positivity_violation_outside_its_domain() {
        // the quarter-period NCP map applied to a state inconsistent with
        // the fixed (a1, a2) can leave the state space: at wt = pi/2 the
        // output off-diagonal is a*/2 regardless of the input, so any
        // population imbalance pushes an eigenvalue negative
        let a = model_map(0.0, 1.0, std::f64::consts::FRAC_PI_2);
        let skewed = DensityMatrix::new(array![[c(0.8, 0.0), ZERO], [ZERO, c(0.2, 0.0)]]).unwrap();
        let out = apply_map(&a, &skewed).unwrap();
        assert!(out.positivity_violation);
        assert!(out.state.min_eigenvalue() < -tol::PSD_CLAMP);
        // trace and hermiticity still hold
        assert!((linalg::mat_trace(out.state.matrix()) - c(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn json_round_trip_and_field_names() {
        let a = model_map(0.0, 2.0 / 3.0, std::f64::consts::FRAC_PI_2);
        let json = serde_json::to_value(&a).unwrap();
        assert!(json.get("dim").is_some());
        assert!(json.get("matrix").is_some());
        assert_eq!(json["dim"], 2);
        assert_eq!(json["matrix"][1][0][1], -1.0 / 3.0); // -i/3 entry
        let back: AMap = serde_json::from_value(json).unwrap();
        assert!(max_abs_diff(back.matrix(), a.matrix()) < 1e-15);

        let d = canonical_decompose(&a, &pauli::normalized_basis()).unwrap();
        let json = serde_json::to_value(&d).unwrap();
        for field in [
            "dim",
            "eigenvalues",
            "operators",
            "classification",
            "negativity",
        ] {
            assert!(json.get(field).is_some(), "missing field {field}");
        }
        assert_eq!(json["classification"], "NCP");
        let back: CanonicalDecomposition = serde_json::from_value(json).unwrap();
        assert_eq!(back.classification(), Classification::Ncp);
        assert!(max_abs_diff(&back.reconstruct(), a.matrix()) < 1e-12);
    }
}
