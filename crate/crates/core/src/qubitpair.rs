//! The concrete two-qubit model behind every map in this crate.
//!
//! A system qubit couples to a single environment qubit through
//! H = (1/2) hbar omega sigma_{1z} sigma_{2x}; internally hbar = omega = 1
//! and all time arguments are the dimensionless product omega*t. The joint
//! unitary is block diagonal in the qubit-1 sectors,
//! exp(-i (wt/2) sigma_x) (+) exp(+i (wt/2) sigma_x), and the reduced
//! dynamics of qubit 1 depends on the initial joint state only through the
//! two correlators a1 = -<sigma_{1y} sigma_{2x}> and
//! a2 = <sigma_{1x} sigma_{2x}>. Those two numbers parameterize an explicit
//! 4x4 dynamical map whose coefficient-matrix spectrum is known in closed
//! form; both are reproduced here and cross-checked against the general
//! machinery in [`crate::dynmap`].

use ndarray::array;
use num_complex::Complex64;

use crate::dynmap::{AMap, DensityMatrix};
use crate::error::{Error, Result};
use crate::linalg::{self, dagger, kron, partial_trace_second, pauli, ComplexMatrix};
use crate::tol;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A joint state of the system qubit (first factor) and the environment
/// qubit (second factor), in the basis |00>, |01>, |10>, |11>.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoQubitState {
    state: DensityMatrix,
}

impl TwoQubitState {
    pub fn new(state: DensityMatrix) -> Result<Self> {
        if state.dim() != 4 {
            return Err(Error::DimensionMismatch(format!(
                "two-qubit state must be 4x4, got {0}x{0}",
                state.dim()
            )));
        }
        Ok(Self { state })
    }

    pub fn from_matrix(matrix: ComplexMatrix) -> Result<Self> {
        Self::new(DensityMatrix::new(matrix)?)
    }

    pub fn density(&self) -> &DensityMatrix {
        &self.state
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        self.state.matrix()
    }

    /// Reduced state of the system qubit at t = 0.
    pub fn reduced(&self) -> DensityMatrix {
        let m = partial_trace_second(self.matrix(), (2, 2))
            .expect("two-qubit state is 4x4 by construction");
        DensityMatrix::new(m).expect("partial trace of a state is a state")
    }
}

/// The correlators of the initial joint state that fix the reduced map.
///
/// For genuine states both |a1| and |a2| are bounded by 1; the constructor
/// enforces that so directly supplied parameters stay inside the model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitParams {
    a1: f64,
    a2: f64,
}

impl InitParams {
    pub fn new(a1: f64, a2: f64) -> Result<Self> {
        if !(a1.is_finite() && a2.is_finite())
            || a1.abs() > 1.0 + tol::TRACE
            || a2.abs() > 1.0 + tol::TRACE
        {
            return Err(Error::InvalidSpec(format!(
                "initial-state parameters must satisfy |a1|, |a2| <= 1, got ({a1}, {a2})"
            )));
        }
        Ok(Self { a1, a2 })
    }

    pub fn a1(&self) -> f64 {
        self.a1
    }

    pub fn a2(&self) -> f64 {
        self.a2
    }

    /// a = a1 + i a2.
    pub fn a(&self) -> Complex64 {
        Complex64::new(self.a1, self.a2)
    }

    pub fn abs_a(&self) -> f64 {
        self.a().norm()
    }
}

/// The joint unitary at dimensionless phase wt (period 4 pi).
///
/// Block diagonal with blocks [[c, -is], [-is, c]] and [[c, is], [is, c]],
/// c = cos(wt/2), s = sin(wt/2).
pub fn unitary(omega_t: f64) -> ComplexMatrix {
    assert!(omega_t.is_finite(), "omega_t must be finite");
    let c = Complex64::new((omega_t / 2.0).cos(), 0.0);
    let ms = Complex64::new(0.0, -(omega_t / 2.0).sin());
    let ps = -ms;
    array![
        [c, ms, ZERO, ZERO],
        [ms, c, ZERO, ZERO],
        [ZERO, ZERO, c, ps],
        [ZERO, ZERO, ps, c]
    ]
}

/// Read the correlators a1 = -Tr[rho sigma_{1y} sigma_{2x}] and
/// a2 = Tr[rho sigma_{1x} sigma_{2x}] off a joint state.
pub fn extract_params(rho12: &TwoQubitState) -> InitParams {
    let yx = kron(&pauli::y(), &pauli::x());
    let xx = kron(&pauli::x(), &pauli::x());
    let a1 = -linalg::mat_trace(&rho12.matrix().dot(&yx)).re;
    let a2 = linalg::mat_trace(&rho12.matrix().dot(&xx)).re;
    InitParams::new(a1, a2).expect("correlators of a state are bounded by 1")
}

/// Reduced state of the system qubit after joint unitary evolution,
/// Tr_2[U rho12 U^dag]. Joint unitarity guarantees a valid state.
pub fn reduced_dynamics(rho12: &TwoQubitState, omega_t: f64) -> DensityMatrix {
    let u = unitary(omega_t);
    let evolved = u.dot(rho12.matrix()).dot(&dagger(&u));
    let m = partial_trace_second(&evolved, (2, 2)).expect("evolved state is 4x4");
    DensityMatrix::new(m).expect("reduced state of a unitarily evolved state is a state")
}

/// The explicit dynamical map for fixed correlators, acting on the
/// flattened qubit state (rho00, rho01, rho10, rho11):
///
/// ```text
///     ( 1        0  0  0       )
///     ( S a*/2   C  0  S a*/2  )
///     ( S a /2   0  C  S a /2  )
///     ( 0        0  0  1       )
/// ```
///
/// with a = a1 + i a2, C = cos(wt), S = sin(wt). Consistent with
/// [`reduced_dynamics`] for every joint state that produces (a1, a2).
pub fn amap(params: &InitParams, omega_t: f64) -> AMap {
    assert!(omega_t.is_finite(), "omega_t must be finite");
    let a = params.a();
    let c = Complex64::new(omega_t.cos(), 0.0);
    let h = Complex64::new(0.5 * omega_t.sin(), 0.0);
    let matrix = array![
        [ONE, ZERO, ZERO, ZERO],
        [h * a.conj(), c, ZERO, h * a.conj()],
        [h * a, ZERO, c, h * a],
        [ZERO, ZERO, ZERO, ONE]
    ];
    AMap::new(matrix).expect("the closed-form map preserves hermiticity and trace")
}

/// Closed form of the coefficient matrix of [`amap`] over the normalized
/// Pauli basis {I, x, y, z}/sqrt(2):
///
/// ```text
///  1/2 ( 2(1+C)   a1 S    a2 S    0       )
///      ( a1 S     0       0       i a2 S  )
///      ( a2 S     0       0      -i a1 S  )
///      ( 0       -i a2 S  i a1 S  2(1-C)  )
/// ```
pub fn coefficient_matrix_closed(params: &InitParams, omega_t: f64) -> ComplexMatrix {
    let (a1, a2) = (params.a1(), params.a2());
    let c = omega_t.cos();
    let s = omega_t.sin();
    let re = |x: f64| Complex64::new(x, 0.0);
    let im = |x: f64| Complex64::new(0.0, x);
    array![
        [re(1.0 + c), re(0.5 * a1 * s), re(0.5 * a2 * s), ZERO],
        [re(0.5 * a1 * s), ZERO, ZERO, im(0.5 * a2 * s)],
        [re(0.5 * a2 * s), ZERO, ZERO, im(-0.5 * a1 * s)],
        [ZERO, im(-0.5 * a2 * s), im(0.5 * a1 * s), re(1.0 - c)]
    ]
}

/// Closed-form spectrum of the coefficient matrix, sorted descending:
///
/// ```text
/// lambda_{1 +-} = ( (1 + C) +- sqrt((1 + C)^2 + |a|^2 S^2) ) / 2
/// lambda_{2 +-} = ( (1 - C) +- sqrt((1 - C)^2 + |a|^2 S^2) ) / 2
/// ```
///
/// The two minus branches are negative whenever |a| sin(wt) != 0, which is
/// what makes the map NCP away from the trivial points.
pub fn eigenvalues_closed(params: &InitParams, omega_t: f64) -> [f64; 4] {
    let c = omega_t.cos();
    let s = omega_t.sin();
    let aa = params.abs_a() * params.abs_a();
    let branch = |x: f64| {
        let root = (x * x + aa * s * s).sqrt();
        (0.5 * (x + root), 0.5 * (x - root))
    };
    let (l1p, l1m) = branch(1.0 + c);
    let (l2p, l2m) = branch(1.0 - c);
    let mut out = [l1p, l1m, l2p, l2m];
    out.sort_by(|x, y| y.partial_cmp(x).unwrap());
    out
}
