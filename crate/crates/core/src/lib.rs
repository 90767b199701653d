//! Dynamical maps for open-system qubit evolution.
//!
//! The crate builds the linear maps that connect a system density matrix at
//! time zero to its reduced state at time t, diagonalizes their hermitian
//! coefficient matrix into the canonical form sum_mu lambda_mu C_mu (x)
//! C_mu^*, classifies the map as completely positive (all lambda_mu >= 0) or
//! not (some lambda_mu < 0), and evaluates two non-Markovianity witnesses,
//! the relative-entropy difference S(t, tau) and the fidelity difference
//! G(t, tau), for a concrete two-qubit model with correlated initial states.
//!
//! Modules:
//! - [`linalg`]: dense complex kernel (hermitian eigensolver, matrix sqrt and
//!   log, Kronecker product, partial trace).
//! - [`dynmap`]: map algebra: A-map representation, B-matrix realignment,
//!   canonical decomposition, CP/NCP classification, semigroup deviation.
//! - [`qubitpair`]: the two-qubit model (exact unitary, reduced dynamics,
//!   explicit map and its closed-form spectrum).
//! - [`witness`]: relative entropy, Uhlmann fidelity and the two witnesses.
//! - [`scenarios`]: the three initial-state families with closed-form
//!   witness expressions mirroring the numerical path.
//! - [`random`]: random states and random CPTP maps for testing and
//!   exploration.

pub mod dynmap;
pub mod error;
pub mod linalg;
pub mod qubitpair;
pub mod random;
pub mod scenarios;
pub mod tol;
pub mod witness;

pub use dynmap::{AMap, BMatrix, CanonicalDecomposition, Classification, DensityMatrix, Evolved};
pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, HermitianEig};
