//! `cavity-walk`: command-line front end for the two-photon cavity-array
//! dynamics library. Subcommands emit CSV or JSON datasets (propagator
//! matrices, evolved amplitudes, coincidence tables, delocalization
//! sweeps) or run the numeric self-verification suites.
//!
//! Exit status: 0 on success, 1 on a numeric/verification failure, 2 on a
//! usage error.

mod config;
mod output;
mod verify;

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::process::ExitCode;

use cavity_walk::{
    evolve_oracle, max_delocalization, n_sweep, negativity, psi_state, report_from_state,
    theta_phi_sweep, ArrayModel, SweepRow,
};
use clap::{Parser, Subcommand};

use config::{Flags, Settings};

/// A dispatch failure, split by exit status.
#[derive(Debug)]
pub enum Failure {
    /// Bad invocation or config: exit 2.
    Usage(String),
    /// Numeric or I/O failure during a valid run: exit 1.
    Runtime(String),
}

#[derive(Parser)]
#[command(
    name = "cavity-walk",
    version,
    about = "Two-photon localization and delocalization dynamics in a linear chain of coupled cavities",
    after_help = "Angles are radians. Defaults: omega = 1.0, J = 0.1, theta = phi = 0, \
                  photons on the central cavity pair (r = N/2, s = r + 1)."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Subcommand)]
enum Command {
    /// Print the single-photon propagator matrix G(t) for an N-cavity chain
    #[command(name = "propagator")]
    Propagator,
    /// Evolve the two-photon superposition to time t and print its amplitudes
    #[command(name = "evolve")]
    Evolve,
    /// Joint and normalized coincidence matrices at time t, plus the delocalization degree S
    #[command(name = "correlations")]
    Correlations,
    /// Scan a time grid for the maximum delocalization of one (theta, phi) superposition
    #[command(name = "max-deloc")]
    MaxDeloc,
    /// Delocalization maxima over a (theta, phi) grid at fixed N
    #[command(name = "fig1")]
    Fig1,
    /// Delocalization maxima across chain lengths N = 2..=cap at two reference settings
    #[command(name = "fig2")]
    Fig2,
    /// Negativity of the initial (theta, phi) superposition
    #[command(name = "negativity")]
    Negativity,
    /// Run the seeded numeric self-verification suites
    #[command(name = "verify")]
    Verify,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}

fn runtime(err: cavity_walk::Error) -> Failure {
    Failure::Runtime(err.to_string())
}

fn execute(cli: &Cli) -> Result<(), Failure> {
    let settings = Settings::resolve(&cli.flags)?;
    let text = match cli.command {
        Command::Propagator => {
            let model = settings.model()?;
            let g = model.normal_modes().propagator(settings.time()?).map_err(runtime)?;
            output::propagator_table(settings.format, &g)
        }
        Command::Evolve => {
            let model = settings.model()?;
            let t = settings.time()?;
            let family = settings.family(model.n_cavities())?;
            let initial = psi_state(&family, model.n_cavities()).map_err(runtime)?;
            let evolved = evolve_oracle(&model, &initial, t).map_err(runtime)?;
            output::state_table(settings.format, &evolved)
        }
        Command::Correlations => {
            let model = settings.model()?;
            let t = settings.time()?;
            let family = settings.family(model.n_cavities())?;
            let initial = psi_state(&family, model.n_cavities()).map_err(runtime)?;
            let evolved = evolve_oracle(&model, &initial, t).map_err(runtime)?;
            let report = report_from_state(&evolved).map_err(runtime)?;
            output::correlation_table(settings.format, &report)
        }
        Command::MaxDeloc => {
            let model = settings.model()?;
            let family = settings.family(model.n_cavities())?;
            let grid = settings.time_grid()?;
            let (s_max, t_at_max) =
                max_delocalization(&model, &family, &grid).map_err(runtime)?;
            let row = SweepRow {
                n_cavities: model.n_cavities(),
                r: family.r(),
                s: family.s(),
                theta: settings.theta,
                phi: settings.phi,
                s_max,
                t_at_max,
                negativity: negativity(&family).value(),
            };
            output::sweep_table(settings.format, &[row])
        }
        Command::Fig1 => {
            reject_pinned_flags(&cli.flags, "fig1")?;
            let model = settings.model()?;
            if model.n_cavities() < 2 {
                return Err(Failure::Usage("fig1 needs --n of at least 2".into()));
            }
            let grid = settings.time_grid()?;
            // 33 mixing angles spanning a quarter period, five evenly
            // spaced phases up to the dark setting.
            let thetas: Vec<f64> = (0..33).map(|i| i as f64 * (FRAC_PI_2 / 32.0)).collect();
            let phis = [0.0, FRAC_PI_4, FRAC_PI_2, 3.0 * FRAC_PI_4, PI];
            let result = theta_phi_sweep(&model, &thetas, &phis, &grid).map_err(runtime)?;
            output::sweep_table(settings.format, result.rows())
        }
        Command::Fig2 => {
            reject_pinned_flags(&cli.flags, "fig2")?;
            let cap = settings.n.unwrap_or(16);
            if cap < 2 {
                return Err(Failure::Usage(format!(
                    "fig2 sweeps chains N = 2..=cap; --n = {cap} leaves that range empty"
                )));
            }
            let models = (2..=cap)
                .map(|n| ArrayModel::new(n, settings.omega, settings.hopping))
                .collect::<Result<Vec<_>, _>>()
                .map_err(runtime)?;
            let reference = [(FRAC_PI_4, FRAC_PI_4), (FRAC_PI_4, 3.0 * FRAC_PI_4)];
            let grid = settings.time_grid()?;
            let result = n_sweep(&models, &reference, &grid).map_err(runtime)?;
            output::sweep_table(settings.format, result.rows())
        }
        Command::Negativity => {
            let family = settings.angle_family()?;
            output::negativity_table(
                settings.format,
                settings.theta,
                settings.phi,
                negativity(&family).value(),
            )
        }
        Command::Verify => {
            let report = verify::run(settings.seed)?;
            output::emit(settings.out.as_deref(), &report.render())?;
            return if report.passed() {
                Ok(())
            } else {
                Err(Failure::Runtime("verification failed".into()))
            };
        }
    };
    output::emit(settings.out.as_deref(), &text)
}

/// The figure sweeps pin (r, s) to the central pair and scan their own
/// (θ, φ) grids; explicit command-line overrides of those flags are
/// contradictions, not inputs. Config-file values are ignored silently so
/// one config can serve several commands.
fn reject_pinned_flags(flags: &Flags, command: &str) -> Result<(), Failure> {
    let explicit = [
        ("--r", flags.r.is_some()),
        ("--s", flags.s.is_some()),
        ("--theta", flags.theta.is_some()),
        ("--phi", flags.phi.is_some()),
    ];
    if let Some((name, _)) = explicit.iter().find(|(_, set)| *set) {
        return Err(Failure::Usage(format!(
            "{command} scans a fixed grid; {name} cannot be overridden"
        )));
    }
    Ok(())
}
