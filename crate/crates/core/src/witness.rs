//! Non-Markovianity witnesses.
//!
//! For a state family t -> rho(t), two scalar diagnostics are compared
//! against their values at t = 0:
//!
//! - relative-entropy difference
//!   `S(t, tau) = S[rho(0)||rho(tau)] - S[rho(t)||rho(t+tau)]`, which is
//!   non-negative under any trace-preserving CP semigroup because relative
//!   entropy is monotone under CP maps;
//! - fidelity difference
//!   `G(t, tau) = (F[rho(t), rho(t+tau)] - F[rho(0), rho(tau)]) / F[rho(0), rho(tau)]`,
//!   non-negative for the same reason applied to the fidelity.
//!
//! A negative value of either is a sufficient (not necessary) signature
//! that the evolution is not a CP Markovian semigroup. Divergent relative
//! entropies (support violations) propagate as IEEE infinities with a flag;
//! a vanishing fidelity baseline flags the sample instead of dividing by
//! zero.

use num_complex::Complex64;

use crate::dynmap::DensityMatrix;
use crate::error::{Error, Result};
use crate::linalg::{self, identity, mat_log_spectral, mat_sqrt_psd};
use crate::tol;

/// Flags attached to a witness evaluation.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct WitnessFlags {
    /// A relative-entropy term diverged: support(rho) is not contained in
    /// support(gamma).
    pub support_violation: bool,
    /// The fidelity baseline F[rho(0), rho(tau)] is numerically zero, so
    /// the fidelity difference is undefined.
    pub baseline_degenerate: bool,
    /// A closed-form expression was numerically unstable and the value was
    /// computed through the numerical path instead.
    pub fallback_used: bool,
}

impl WitnessFlags {
    pub fn is_empty(&self) -> bool {
        !(self.support_violation || self.baseline_degenerate || self.fallback_used)
    }

    /// Stable token list used by text output, semicolon-joined by Display.
    pub fn tokens(&self) -> Vec<&'static str> {
        let mut t = Vec::new();
        if self.support_violation {
            t.push("SupportViolation");
        }
        if self.baseline_degenerate {
            t.push("BaselineDegenerate");
        }
        if self.fallback_used {
            t.push("FallbackUsed");
        }
        t
    }
}

impl std::fmt::Display for WitnessFlags {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.tokens().join(";"))
    }
}

/// Point evaluation of both witnesses at (t, tau).
#[derive(Debug, Clone)]
pub struct WitnessSample {
    pub omega_t: f64,
    pub omega_tau: f64,
    /// S(t, tau); +-infinity on support violations, NaN if both terms
    /// diverge.
    pub rel_entropy_diff: f64,
    /// G(t, tau); NaN when the baseline is degenerate.
    pub fidelity_diff: f64,
    pub flags: WitnessFlags,
}

/// Relative entropy S(rho || gamma) = Tr[rho (ln rho - ln gamma)] in nats.
///
/// Uses the 0 ln 0 = 0 convention on the support of each state; returns
/// +infinity when rho carries more than 1e-10 weight outside the support of
/// gamma. Errors on dimension mismatch or non-PSD input.
pub fn relative_entropy(rho: &DensityMatrix, gamma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != gamma.dim() {
        return Err(Error::DimensionMismatch(format!(
            "relative entropy needs equal dimensions, got {} and {}",
            rho.dim(),
            gamma.dim()
        )));
    }
    let log_gamma = mat_log_spectral(gamma.matrix())?;
    let weight_outside = 1.0 - linalg::mat_trace(&rho.matrix().dot(&log_gamma.support)).re;
    if weight_outside > tol::SUPPORT_WEIGHT {
        return Ok(f64::INFINITY);
    }
    let log_rho = mat_log_spectral(rho.matrix())?;
    let s_self = linalg::mat_trace(&rho.matrix().dot(&log_rho.log)).re;
    let s_cross = linalg::mat_trace(&rho.matrix().dot(&log_gamma.log)).re;
    Ok(s_self - s_cross)
}

/// Uhlmann fidelity F(rho, gamma) = (Tr sqrt(sqrt(rho) gamma sqrt(rho)))^2.
pub fn fidelity(rho: &DensityMatrix, gamma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != gamma.dim() {
        return Err(Error::DimensionMismatch(format!(
            "fidelity needs equal dimensions, got {} and {}",
            rho.dim(),
            gamma.dim()
        )));
    }
    let sqrt_rho = mat_sqrt_psd(rho.matrix())?;
    let inner = sqrt_rho.dot(gamma.matrix()).dot(&sqrt_rho);
    let root = mat_sqrt_psd(&inner)?;
    let t = linalg::mat_trace(&root).re;
    Ok(t * t)
}

/// Qubit closed form F = Tr[rho gamma] + 2 sqrt(det rho det gamma);
/// agrees with [`fidelity`] on all 2x2 states.
pub fn fidelity_qubit(rho: &DensityMatrix, gamma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != 2 || gamma.dim() != 2 {
        return Err(Error::DimensionMismatch(
            "qubit fidelity needs 2x2 states".into(),
        ));
    }
    let overlap = linalg::mat_trace(&rho.matrix().dot(gamma.matrix())).re;
    // determinants of valid states are real and >= -1e-10; roundoff is
    // clamped before the square root
    let det = |m: &crate::linalg::ComplexMatrix| {
        (m[[0, 0]] * m[[1, 1]] - m[[0, 1]] * m[[1, 0]]).re.max(0.0)
    };
    Ok(overlap + 2.0 * (det(rho.matrix()) * det(gamma.matrix())).sqrt())
}

/// Relative-entropy difference S(t, tau) for a state family.
///
/// Negative values certify non-CP-Markovian dynamics. Divergences follow
/// IEEE arithmetic; at t = 0 the two terms coincide and the result is
/// exactly zero.
pub fn rel_entropy_difference<F>(family: F, t: f64, tau: f64) -> f64
where
    F: Fn(f64) -> DensityMatrix,
{
    if t == 0.0 {
        return 0.0;
    }
    let baseline = relative_entropy(&family(0.0), &family(tau))
        .expect("witness families must produce valid equal-dimension states");
    let current = relative_entropy(&family(t), &family(t + tau))
        .expect("witness families must produce valid equal-dimension states");
    baseline - current
}

/// Fidelity difference G(t, tau) for a state family.
///
/// Negative values are a sufficient non-Markovianity signature. Returns NaN
/// when the baseline fidelity is below 1e-12 (flagged by
/// [`witness_sample`]).
pub fn fidelity_difference<F>(family: F, t: f64, tau: f64) -> f64
where
    F: Fn(f64) -> DensityMatrix,
{
    let baseline = fidelity(&family(0.0), &family(tau))
        .expect("witness families must produce valid equal-dimension states");
    if baseline <= tol::BASELINE {
        return f64::NAN;
    }
    let current = fidelity(&family(t), &family(t + tau))
        .expect("witness families must produce valid equal-dimension states");
    (current - baseline) / baseline
}

/// Evaluate both witnesses at (t, tau) with explicit flags.
pub fn witness_sample<F>(family: F, omega_t: f64, omega_tau: f64) -> WitnessSample
where
    F: Fn(f64) -> DensityMatrix,
{
    let rho0 = family(0.0);
    let rho_tau = family(omega_tau);
    let rho_t = family(omega_t);
    let rho_tt = family(omega_t + omega_tau);

    let s_baseline = relative_entropy(&rho0, &rho_tau)
        .expect("witness families must produce valid equal-dimension states");
    let s_current = relative_entropy(&rho_t, &rho_tt)
        .expect("witness families must produce valid equal-dimension states");
    let support_violation = s_baseline.is_infinite() || s_current.is_infinite();
    let rel_entropy_diff = if omega_t == 0.0 {
        0.0
    } else {
        s_baseline - s_current
    };

    let f_baseline = fidelity(&rho0, &rho_tau)
        .expect("witness families must produce valid equal-dimension states");
    let baseline_degenerate = f_baseline <= tol::BASELINE;
    let fidelity_diff = if baseline_degenerate {
        f64::NAN
    } else {
        let f_current = fidelity(&rho_t, &rho_tt)
            .expect("witness families must produce valid equal-dimension states");
        (f_current - f_baseline) / f_baseline
    };

    WitnessSample {
        omega_t,
        omega_tau,
        rel_entropy_diff,
        fidelity_diff,
        flags: WitnessFlags {
            support_violation,
            baseline_degenerate,
            fallback_used: false,
        },
    }
}

/// Qubit depolarizing semigroup rho(t) = e^{-t} rho(0) + (1 - e^{-t}) I/n:
/// a genuinely CP-Markovian family on which both witnesses stay
/// non-negative. Serves as the negative control for the witness tests.
pub fn depolarizing_semigroup(rho0: DensityMatrix) -> impl Fn(f64) -> DensityMatrix + Send + Sync {
    let n = rho0.dim();
    move |t: f64| {
        let w = (-t).exp();
        let mixed = Complex64::new((1.0 - w) / n as f64, 0.0);
        let m = rho0.matrix().mapv(|z| z * w) + identity(n).mapv(|z| z * mixed);
        DensityMatrix::new(m).expect("convex mixture of states is a state")
    }
}
