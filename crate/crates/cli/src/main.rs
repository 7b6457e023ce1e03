use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use gh_lab::manifest::{load_manifest, ConfigSource, CurveSource, Manifest, Scenario, Task, TestFunction};
use gh_lab::output::DEFAULT_PRECISION;
use gh_lab::{run_manifest, RunOptions, RunReport, Status};
use ghlab::plane::PlaneFrame;

#[derive(Parser)]
#[command(name = "gh-lab", version, about = "Geodesic orbits, flows and Lagrangian curves in Gibbons-Hawking spaces")]
struct Cli {
    /// Write artifacts under DIR/<scenario>/ instead of printing the main one.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Scenarios run in parallel.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// Seed for randomized steps (ray directions, test points).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Significant digits of floats in CSV and JSON output.
    #[arg(long, global = true, default_value_t = DEFAULT_PRECISION)]
    precision: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FunctionArg {
    RadialSquare,
    Mixed,
}

#[derive(Subcommand)]
enum Command {
    /// Critical points of the potential with Morse indices.
    Orbits {
        /// Configuration file, or `gallery:NAME`.
        #[arg(long)]
        config: String,
        #[arg(long)]
        grid_density: Option<usize>,
    },
    /// Integrate the orbit-length flow from a starting point.
    OrbitFlow {
        #[arg(long)]
        config: String,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        start: Vec<f64>,
        #[arg(long, default_value_t = 100.0)]
        t_max: f64,
    },
    /// Orbit-flow vectors and rest points on a horizontal grid.
    Portrait {
        #[arg(long)]
        config: String,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        u_range: Vec<f64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        w_range: Vec<f64>,
        /// Height of the horizontal plane.
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        z: f64,
        #[arg(long, default_value_t = 41)]
        n: usize,
        /// Also draw this many level sets of the orbit length.
        #[arg(long)]
        levels: Option<usize>,
    },
    /// Weighted curve shortening flow of a planar curve.
    Flow {
        /// Configuration file, or `gallery:NAME`; defaults to the curve's gallery entry.
        #[arg(long)]
        config: Option<String>,
        /// Curve file, or `gallery:NAME`.
        #[arg(long)]
        curve: String,
        #[arg(long, default_value_t = 128)]
        nodes: usize,
        #[arg(long, default_value_t = 0.4)]
        cfl: f64,
        #[arg(long, default_value_t = 0.01)]
        checkpoint_dt: f64,
        #[arg(long, default_value_t = 10.0)]
        t_max: f64,
    },
    /// Thomas and flow stability of an arc between two centers.
    Stability {
        #[arg(long)]
        config: Option<String>,
        #[arg(long)]
        curve: String,
        #[arg(long, default_value_t = 0.1)]
        delta: f64,
    },
    /// Convex hull chain of an unstable arc.
    JordanHolder {
        #[arg(long)]
        config: Option<String>,
        #[arg(long)]
        curve: String,
    },
    /// Gauss curvature of the invariant sphere over a chord.
    Curvature {
        #[arg(long)]
        config: String,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        chord: Vec<usize>,
        #[arg(long, default_value_t = 2000)]
        samples: usize,
    },
    /// Compare the closed-form invariant Hessian with a finite-difference oracle.
    HessianCheck {
        #[arg(long)]
        config: String,
        #[arg(long, default_value_t = 20)]
        points: usize,
        #[arg(long, value_enum, default_value_t = FunctionArg::Mixed)]
        function: FunctionArg,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "0,0,0")]
        about: Vec<f64>,
        #[arg(long, default_value_t = 3.0)]
        half_width: f64,
        #[arg(long)]
        expect_positive: bool,
    },
    /// Run a manifest file, or a bundled one: `paper-figures`, `closed-forms`.
    Run { manifest: String },
}

fn config_source(s: &str) -> ConfigSource {
    match s.strip_prefix("gallery:") {
        Some(name) => ConfigSource::Gallery { gallery: name.into() },
        None => ConfigSource::Path(s.into()),
    }
}

fn curve_source(s: &str) -> CurveSource {
    match s.strip_prefix("gallery:") {
        Some(name) => CurveSource::Gallery { gallery: name.into() },
        None => CurveSource::Path(s.into()),
    }
}

/// `--config`, falling back to the configuration of a gallery curve.
fn config_for_curve(config: Option<&str>, curve: &str) -> Result<ConfigSource, String> {
    match (config, curve.strip_prefix("gallery:")) {
        (Some(c), _) => Ok(config_source(c)),
        (None, Some(name)) => Ok(ConfigSource::Gallery { gallery: name.into() }),
        (None, None) => Err("--config is required unless --curve names a gallery entry".into()),
    }
}

fn exactly<T: Copy, const N: usize>(flag: &str, v: &[T]) -> Result<[T; N], String> {
    <[T; N]>::try_from(v).map_err(|_| format!("--{flag} takes {N} comma-separated values, got {}", v.len()))
}

fn single(command: Command) -> Result<(String, ConfigSource, Task), String> {
    Ok(match command {
        Command::Orbits { config, grid_density } => ("orbits".into(), config_source(&config), Task::Orbits { grid_density }),
        Command::OrbitFlow { config, start, t_max } => (
            "orbit-flow".into(),
            config_source(&config),
            Task::OrbitFlow { start: exactly("start", &start)?, t_max, check: None, check_until: None },
        ),
        Command::Portrait { config, u_range, w_range, z, n, levels } => (
            "portrait".into(),
            config_source(&config),
            Task::Portrait {
                plane: PlaneFrame::horizontal_at(ghlab::Vec3::new(0.0, 0.0, z)),
                u_range: exactly("u-range", &u_range)?,
                w_range: exactly("w-range", &w_range)?,
                n,
                levels,
            },
        ),
        Command::Flow { config, curve, nodes, cfl, checkpoint_dt, t_max } => (
            "flow".into(),
            config_for_curve(config.as_deref(), &curve)?,
            Task::CurveFlow {
                curve: curve_source(&curve),
                nodes,
                cfl,
                checkpoint_dt,
                t_max,
                conv_tol: 1e-3,
                singularity_threshold: 1e6,
                check: None,
                expect: None,
            },
        ),
        Command::Stability { config, curve, delta } => (
            "stability".into(),
            config_for_curve(config.as_deref(), &curve)?,
            Task::Stability { curve: curve_source(&curve), delta, expect: None },
        ),
        Command::JordanHolder { config, curve } => (
            "jordan-holder".into(),
            config_for_curve(config.as_deref(), &curve)?,
            Task::JordanHolder { curve: curve_source(&curve), expect_tau: None },
        ),
        Command::Curvature { config, chord, samples } => {
            ("curvature".into(), config_source(&config), Task::Curvature { chord: exactly("chord", &chord)?, samples })
        }
        Command::HessianCheck { config, points, function, about, half_width, expect_positive } => (
            "hessian-check".into(),
            config_source(&config),
            Task::HessianCheck {
                points,
                function: match function {
                    FunctionArg::RadialSquare => TestFunction::RadialSquare,
                    FunctionArg::Mixed => TestFunction::Mixed,
                },
                about: exactly("about", &about)?,
                half_width,
                expect_positive,
            },
        ),
        Command::Run { .. } => unreachable!("manifests are handled separately"),
    })
}

fn emit(report: &RunReport, out: Option<&Path>, precision: usize, summary_to_stdout: bool) -> Result<(), String> {
    for s in &report.scenarios {
        if let Some(m) = &s.message {
            eprintln!("{}: {m}", s.name);
        }
    }
    if let Some(dir) = out {
        return report.write(dir, precision).map_err(|e| format!("{}: {e}", dir.display()));
    }
    let bytes = if summary_to_stdout {
        report.summary_csv(precision)
    } else {
        match report.scenarios.first().and_then(|s| s.artifacts.first()) {
            Some(a) => a.bytes.clone(),
            None => return Ok(()),
        }
    };
    std::io::stdout().write_all(&bytes).map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let opts = RunOptions { seed: cli.seed, jobs: cli.jobs, precision: cli.precision };
    let (manifest, base, is_run) = match cli.command {
        Command::Run { manifest } => match load_manifest(&manifest) {
            Ok((m, base)) => (m, base, true),
            Err(e) => {
                eprintln!("{e}");
                return ExitCode::from(2);
            }
        },
        command => match single(command) {
            Ok((name, config, task)) => (Manifest { seed: None, scenarios: vec![Scenario { name, config, task }] }, PathBuf::from("."), false),
            Err(e) => {
                eprintln!("{e}");
                return ExitCode::from(2);
            }
        },
    };
    let report = match run_manifest(&manifest, &base, opts) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(2);
        }
    };
    if let Err(e) = emit(&report, cli.out.as_deref(), cli.precision, is_run) {
        eprintln!("{e}");
        return ExitCode::from(1);
    }
    if !is_run && report.scenarios.iter().any(|s| s.status == Status::Invalid) {
        return ExitCode::from(2);
    }
    ExitCode::from(report.exit_code() as u8)
}
