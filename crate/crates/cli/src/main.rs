use std::f64::consts::{PI, TAU};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use qdynmap::dynmap::canonical_decompose;
use qdynmap::linalg::pauli;
use qdynmap::qubitpair::{self, InitParams};
use qdynmap::scenarios::ScenarioSpec;

use qdynmap_cli::grid::{self, GridConfig, SweepScenario};

#[derive(Parser)]
#[command(
    name = "qdynmap",
    version,
    about = "Dynamical maps and non-Markovianity witnesses for a driven qubit pair",
    after_help = "Exit codes: 0 success, 2 usage or specification error, 3 numerical failure."
)]
struct Cli {
    /// Output path (default: stdout; `figure` treats it as a directory)
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Worker threads for grid evaluation (default: all cores)
    #[arg(long, global = true)]
    jobs: Option<usize>,

    /// Grid steps per axis
    #[arg(long, global = true, default_value_t = 200)]
    resolution: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScenarioName {
    /// Pure entangled two-qubit state with relative phase --phi
    Pure,
    /// Werner mixture with parameter --x
    Werner,
    /// Separable mixed state with --sx --sy --sz --d
    Separable,
}

#[derive(Args)]
struct ScenarioArgs {
    /// Initial-state family
    #[arg(long, value_enum)]
    scenario: Option<ScenarioName>,

    /// Relative phase of the pure entangled family (radians)
    #[arg(long, default_value_t = 0.0)]
    phi: f64,

    /// Werner mixing parameter, 0 <= x <= 4/3
    #[arg(long, default_value_t = 0.0)]
    x: f64,

    /// Separable family: system Bloch x component
    #[arg(long, default_value_t = grid::default_separable())]
    sx: f64,

    /// Separable family: system Bloch y component
    #[arg(long, default_value_t = grid::default_separable())]
    sy: f64,

    /// Separable family: system Bloch z component
    #[arg(long, default_value_t = grid::default_separable())]
    sz: f64,

    /// Separable family: correlation strength
    #[arg(long, default_value_t = grid::default_separable())]
    d: f64,
}

impl ScenarioArgs {
    fn spec(&self) -> Result<ScenarioSpec, CliError> {
        let spec = match self.scenario {
            Some(ScenarioName::Pure) => ScenarioSpec::PureEntangled { phi: self.phi },
            Some(ScenarioName::Werner) => ScenarioSpec::Werner { x: self.x },
            Some(ScenarioName::Separable) => ScenarioSpec::SeparableMixed {
                s_x: self.sx,
                s_y: self.sy,
                s_z: self.sz,
                d: self.d,
            },
            None => return Err(CliError::Usage("--scenario is required".into())),
        };
        spec.validate()
            .map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(spec)
    }

    fn sweep(&self, omega_tau: f64) -> Result<SweepScenario, CliError> {
        match self.scenario {
            Some(ScenarioName::Pure) => Ok(SweepScenario::Pure { omega_tau }),
            Some(ScenarioName::Werner) => Ok(SweepScenario::Werner { omega_tau }),
            Some(ScenarioName::Separable) => {
                // the separable surface sweeps omega_tau itself
                let spec = self.spec()?;
                let ScenarioSpec::SeparableMixed { s_x, s_y, s_z, d } = spec else {
                    unreachable!()
                };
                Ok(SweepScenario::Separable { s_x, s_y, s_z, d })
            }
            None => Err(CliError::Usage("--scenario is required".into())),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Canonical decomposition of the map at --omega-t as a JSON report
    Decompose {
        #[command(flatten)]
        scenario: ScenarioArgs,

        /// Correlator a1 = -<sigma_1y sigma_2x> (with --a2, instead of --scenario)
        #[arg(long)]
        a1: Option<f64>,

        /// Correlator a2 = <sigma_1x sigma_2x> (with --a1, instead of --scenario)
        #[arg(long)]
        a2: Option<f64>,

        /// Dimensionless phase omega*t (radians)
        #[arg(long)]
        omega_t: f64,
    },

    /// Reduced system state along an omega-t grid as CSV
    Evolve {
        #[command(flatten)]
        scenario: ScenarioArgs,

        #[arg(long, default_value_t = 0.0)]
        t_min: f64,

        #[arg(long, default_value_t = TAU)]
        t_max: f64,
    },

    /// Witness surface over omega-t and the family parameter as CSV
    Witness {
        #[command(flatten)]
        scenario: ScenarioArgs,

        /// Fixed omega*tau for pure/werner sweeps (the separable family
        /// sweeps omega_tau as its second axis instead)
        #[arg(long, default_value_t = PI)]
        omega_tau: f64,

        #[arg(long, default_value_t = 0.0)]
        t_min: f64,

        #[arg(long, default_value_t = TAU)]
        t_max: f64,
    },

    /// Reproduce the data surfaces of one of the three figures
    Figure {
        /// 1: pure (omega_t x phi, omega_tau = pi); 2: werner (omega_t x x,
        /// omega_tau = pi); 3: separable (omega_t x omega_tau, s = d = 1/sqrt(6))
        which: u8,
    },
}

enum CliError {
    Usage(String),
    Numerical(String),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            eprintln!("error: --jobs must be at least 1");
            return ExitCode::from(2);
        }
        // ignore the error if a pool already exists (tests call run twice)
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global();
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Numerical(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Decompose {
            scenario,
            a1,
            a2,
            omega_t,
        } => {
            if !omega_t.is_finite() {
                return Err(CliError::Usage(format!(
                    "--omega-t must be finite, got {omega_t}"
                )));
            }
            let params = decompose_params(&scenario, a1, a2)?;
            let map = qubitpair::amap(&params, omega_t);
            let decomposition = canonical_decompose(&map, &pauli::normalized_basis())
                .map_err(|e| CliError::Numerical(e.to_string()))?;
            let mut json = serde_json::to_string_pretty(&decomposition)
                .map_err(|e| CliError::Numerical(e.to_string()))?;
            json.push('\n');
            write_output(cli.output.as_deref(), &json)
        }
        Command::Evolve {
            scenario,
            t_min,
            t_max,
        } => {
            let spec = scenario.spec()?;
            let rows = grid::evolve_trace(&spec, t_min, t_max, cli.resolution)
                .map_err(|e| CliError::Usage(e.to_string()))?;
            write_output(cli.output.as_deref(), &grid::evolve_csv(&rows))
        }
        Command::Witness {
            scenario,
            omega_tau,
            t_min,
            t_max,
        } => {
            let sweep = scenario.sweep(omega_tau)?;
            let config = GridConfig {
                t_min,
                t_max,
                t_steps: cli.resolution,
                param_steps: cli.resolution,
            };
            let rows = grid::witness_surface(&sweep, &config)
                .map_err(|e| CliError::Usage(e.to_string()))?;
            write_output(cli.output.as_deref(), &grid::witness_csv(&rows))
        }
        Command::Figure { which } => {
            let (s_csv, g_csv) = grid::figure_csvs(which, cli.resolution)
                .map_err(|e| CliError::Usage(e.to_string()))?;
            let dir = cli.output.clone().unwrap_or_else(|| PathBuf::from("."));
            std::fs::create_dir_all(&dir)
                .map_err(|e| CliError::Numerical(format!("cannot create {dir:?}: {e}")))?;
            for (name, content) in [
                (format!("figure{which}_S_diff.csv"), s_csv),
                (format!("figure{which}_G_diff.csv"), g_csv),
            ] {
                let path = dir.join(&name);
                std::fs::write(&path, content)
                    .map_err(|e| CliError::Numerical(format!("cannot write {path:?}: {e}")))?;
                eprintln!("wrote {}", path.display());
            }
            Ok(())
        }
    }
}

fn decompose_params(
    scenario: &ScenarioArgs,
    a1: Option<f64>,
    a2: Option<f64>,
) -> Result<InitParams, CliError> {
    match (a1, a2, scenario.scenario) {
        (Some(a1), Some(a2), None) => {
            InitParams::new(a1, a2).map_err(|e| CliError::Usage(e.to_string()))
        }
        (None, None, Some(_)) => {
            let spec = scenario.spec()?;
            spec.init_params()
                .map_err(|e| CliError::Usage(e.to_string()))
        }
        _ => Err(CliError::Usage(
            "provide either --scenario (with its parameters) or both --a1 and --a2".into(),
        )),
    }
}

fn write_output(path: Option<&Path>, content: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, content)
            .map_err(|e| CliError::Numerical(format!("cannot write {p:?}: {e}"))),
        None => std::io::stdout()
            .write_all(content.as_bytes())
            .map_err(|e| CliError::Numerical(format!("cannot write to stdout: {e}"))),
    }
}
