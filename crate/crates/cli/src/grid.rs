//! Grid evaluation behind the CLI subcommands: evolution traces, witness
//! surfaces and the three figure-data surfaces.
//!
//! Rows fan out over a rayon pool; results are assembled in grid order
//! (parameter outer, omega_t inner) regardless of scheduling, so output is
//! byte-stable for a fixed resolution.

use rayon::prelude::*;
use std::f64::consts::PI;

use qdynmap::dynmap::DensityMatrix;
use qdynmap::error::{Error, Result};
use qdynmap::scenarios::ScenarioSpec;
use qdynmap::witness::{self, WitnessSample};

use crate::format;

/// Separable-family default s_x = s_y = s_z = d = 1/sqrt(6), the setting of
/// the third figure.
pub fn default_separable() -> f64 {
    1.0 / 6.0_f64.sqrt()
}

/// Rectangular grid: omega_t range plus the number of steps along each
/// axis (endpoints included).
#[derive(Debug, Clone, Copy)]
pub struct GridConfig {
    pub t_min: f64,
    pub t_max: f64,
    pub t_steps: usize,
    pub param_steps: usize,
}

impl GridConfig {
    /// resolution x resolution over omega_t in [0, 2 pi].
    pub fn square(resolution: usize) -> Self {
        Self {
            t_min: 0.0,
            t_max: 2.0 * PI,
            t_steps: resolution,
            param_steps: resolution,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t_min.is_finite() && self.t_max.is_finite()) || self.t_min >= self.t_max {
            return Err(Error::InvalidSpec(format!(
                "omega_t range [{}, {}] is not well ordered",
                self.t_min, self.t_max
            )));
        }
        if self.t_steps < 2 || self.param_steps < 2 {
            return Err(Error::InvalidSpec(
                "grids need at least 2 steps per axis".into(),
            ));
        }
        Ok(())
    }
}

/// `steps` evenly spaced points including both endpoints.
pub fn linspace(min: f64, max: f64, steps: usize) -> Vec<f64> {
    let last = (steps - 1) as f64;
    (0..steps)
        .map(|i| min + (max - min) * i as f64 / last)
        .collect()
}

/// What the second axis of a witness sweep means for each family:
/// the pure family sweeps phi, the Werner family sweeps x (both with a
/// fixed omega_tau), and the separable family keeps (s, d) fixed and
/// sweeps omega_tau itself.
#[derive(Debug, Clone, Copy)]
pub enum SweepScenario {
    Pure {
        omega_tau: f64,
    },
    Werner {
        omega_tau: f64,
    },
    Separable {
        s_x: f64,
        s_y: f64,
        s_z: f64,
        d: f64,
    },
}

impl SweepScenario {
    pub fn axis_name(&self) -> &'static str {
        match self {
            SweepScenario::Pure { .. } => "phi",
            SweepScenario::Werner { .. } => "x",
            SweepScenario::Separable { .. } => "omega_tau",
        }
    }

    pub fn param_range(&self) -> (f64, f64) {
        match self {
            SweepScenario::Pure { .. } | SweepScenario::Separable { .. } => (0.0, 2.0 * PI),
            SweepScenario::Werner { .. } => (0.0, 1.0),
        }
    }

    fn point(&self, param: f64) -> (ScenarioSpec, f64) {
        match *self {
            SweepScenario::Pure { omega_tau } => {
                (ScenarioSpec::PureEntangled { phi: param }, omega_tau)
            }
            SweepScenario::Werner { omega_tau } => (ScenarioSpec::Werner { x: param }, omega_tau),
            SweepScenario::Separable { s_x, s_y, s_z, d } => {
                (ScenarioSpec::SeparableMixed { s_x, s_y, s_z, d }, param)
            }
        }
    }
}

/// One parameter value of a witness surface with its omega_t samples.
#[derive(Debug, Clone)]
pub struct SurfaceRow {
    pub param: f64,
    pub samples: Vec<WitnessSample>,
}

/// Evaluate the witness surface of a sweep over the grid through the
/// numerical path.
pub fn witness_surface(sweep: &SweepScenario, grid: &GridConfig) -> Result<Vec<SurfaceRow>> {
    grid.validate()?;
    let (lo, hi) = sweep.param_range();
    let params = linspace(lo, hi, grid.param_steps);
    let ts = linspace(grid.t_min, grid.t_max, grid.t_steps);
    // validate every row before fanning out
    let points: Vec<(f64, ScenarioSpec, f64)> = params
        .iter()
        .map(|&p| {
            let (spec, tau) = sweep.point(p);
            spec.validate()?;
            // tau = 0 is allowed on the figure-3 axis edge (both witnesses
            // compare a state with itself and vanish there)
            if !(tau.is_finite() && tau >= 0.0) {
                return Err(Error::InvalidSpec(format!(
                    "omega_tau must be non-negative and finite, got {tau}"
                )));
            }
            Ok((p, spec, tau))
        })
        .collect::<Result<_>>()?;

    Ok(points
        .par_iter()
        .map(|&(param, spec, tau)| {
            let family = spec
                .reduced_family()
                .expect("scenario was validated before dispatch");
            let samples = ts
                .iter()
                .map(|&t| witness::witness_sample(&family, t, tau))
                .collect();
            SurfaceRow { param, samples }
        })
        .collect())
}

/// CSV for the `witness` subcommand:
/// `omega_t,param,S_diff,G_diff,flags` with divergences as "inf"/"-inf"
/// and flags as semicolon-joined tokens.
pub fn witness_csv(rows: &[SurfaceRow]) -> String {
    let mut out = String::from("omega_t,param,S_diff,G_diff,flags\n");
    for row in rows {
        for s in &row.samples {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                format::float(s.omega_t),
                format::float(row.param),
                format::float(s.rel_entropy_diff),
                format::float(s.fidelity_diff),
                s.flags
            ));
        }
    }
    out
}

/// The sweep that reproduces one of the three figure settings.
pub fn figure_sweep(which: u8) -> Result<SweepScenario> {
    match which {
        1 => Ok(SweepScenario::Pure { omega_tau: PI }),
        2 => Ok(SweepScenario::Werner { omega_tau: PI }),
        3 => {
            let v = default_separable();
            Ok(SweepScenario::Separable {
                s_x: v,
                s_y: v,
                s_z: v,
                d: v,
            })
        }
        _ => Err(Error::InvalidSpec(format!(
            "figure must be 1, 2 or 3, got {which}"
        ))),
    }
}

/// The two long-format figure surfaces (S_diff and G_diff) at the given
/// resolution: columns `omega_t,<axis>,value`.
pub fn figure_csvs(which: u8, resolution: usize) -> Result<(String, String)> {
    let sweep = figure_sweep(which)?;
    let rows = witness_surface(&sweep, &GridConfig::square(resolution))?;
    let axis = sweep.axis_name();
    let mut s_csv = format!("omega_t,{axis},S_diff\n");
    let mut g_csv = format!("omega_t,{axis},G_diff\n");
    for row in &rows {
        for s in &row.samples {
            let t = format::float(s.omega_t);
            let p = format::float(row.param);
            s_csv.push_str(&format!("{t},{p},{}\n", format::float(s.rel_entropy_diff)));
            g_csv.push_str(&format!("{t},{p},{}\n", format::float(s.fidelity_diff)));
        }
    }
    Ok((s_csv, g_csv))
}

/// One evolution sample of the reduced system state.
#[derive(Debug, Clone)]
pub struct EvolveRow {
    pub omega_t: f64,
    pub state: DensityMatrix,
}

/// Reduced state of the scenario along an omega_t grid.
pub fn evolve_trace(
    spec: &ScenarioSpec,
    t_min: f64,
    t_max: f64,
    steps: usize,
) -> Result<Vec<EvolveRow>> {
    GridConfig {
        t_min,
        t_max,
        t_steps: steps,
        param_steps: 2,
    }
    .validate()?;
    let family = spec.reduced_family()?;
    Ok(linspace(t_min, t_max, steps)
        .into_iter()
        .map(|omega_t| EvolveRow {
            omega_t,
            state: family(omega_t),
        })
        .collect())
}

/// CSV for the `evolve` subcommand:
/// `omega_t,rho00_re,rho01_re,rho01_im,rho11_re,bloch_x,bloch_y,bloch_z,min_eig`.
pub fn evolve_csv(rows: &[EvolveRow]) -> String {
    let mut out = String::from(
        "omega_t,rho00_re,rho01_re,rho01_im,rho11_re,bloch_x,bloch_y,bloch_z,min_eig\n",
    );
    for row in rows {
        let m = row.state.matrix();
        let bloch = row.state.bloch_vector().expect("reduced states are qubits");
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            format::float(row.omega_t),
            format::float(m[[0, 0]].re),
            format::float(m[[0, 1]].re),
            format::float(m[[0, 1]].im),
            format::float(m[[1, 1]].re),
            format::float(bloch[0]),
            format::float(bloch[1]),
            format::float(bloch[2]),
            format::float(row.state.min_eigenvalue()),
        ));
    }
    out
}
