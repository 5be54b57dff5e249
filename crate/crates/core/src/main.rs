//! `diracsim` command-line driver.
//!
//! Exit codes: 0 success, 2 configuration error, 3 numerical failure.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use diracsim::fdtd;
use diracsim::grid::{slice_scalar, Plane};
use diracsim::io::config::RunConfig;
use diracsim::io::dump::read_dump;
use diracsim::io::presets::{preset_names, preset_text, preset_title, preset_with};
use diracsim::io::scenario::{
    fdtd_dt, oracle_rows, parameter_line, read_report, run_scenario, series_times, validate_sampled, write_w_curve,
    ScenarioReport,
};
use diracsim::io::series_csv::write_series;
use diracsim::io::slice::{export_slice, TextSlice};
use diracsim::io::parse_config_with;
use diracsim::observables::{probability_density, spin_density};
use diracsim::spectral::split::{default_pz_samples, w_curve, w_totals};
use diracsim::Error;

#[derive(Parser)]
#[command(name = "diracsim", version, about = "Free 3D Dirac wave packets: spectral and leap-frog evolution")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Source {
    /// TOML run configuration.
    config: Option<PathBuf>,
    /// Use a built-in preset instead of a file.
    #[arg(long, conflicts_with = "config")]
    preset: Option<String>,
    /// Override a key, e.g. `--set grid.dt=0.05` or `--set packet.k0=1`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

impl Source {
    fn load(&self) -> Result<RunConfig, Error> {
        match (&self.config, &self.preset) {
            (_, Some(name)) => preset_with(name, &self.overrides),
            (Some(path), None) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
                parse_config_with(&text, &self.overrides)
            }
            (None, None) => Err(Error::Config("give a config file or --preset NAME".into())),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SliceQuantity {
    Density,
    SpinX,
    SpinY,
    SpinZ,
}

#[derive(Subcommand)]
enum Command {
    /// Check a configuration, including the sampled initial state, and print it resolved.
    Validate {
        #[command(flatten)]
        source: Source,
    },
    /// Run a scenario and write all requested outputs.
    Run {
        #[command(flatten)]
        source: Source,
        /// Output directory (default: outputs.directory from the config).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cut a plane out of a field dump as a text matrix.
    Slice {
        dump: PathBuf,
        /// Plane such as `z=0` or `y=1.5`.
        #[arg(long, default_value = "z=0")]
        plane: String,
        #[arg(long, value_enum, default_value = "density")]
        quantity: SliceQuantity,
        /// Output file (default: standard output).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Velocity and spin expectation series from momentum quadrature, as CSV.
    Series {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// W± curves over p_z, as CSV; the integrals go to standard error.
    Wsplit {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Summarize a run directory's report.json.
    Report { path: PathBuf },
    /// List the built-in presets, or print one.
    Presets { name: Option<String> },
}

fn out_writer(path: &Option<PathBuf>) -> Result<Box<dyn Write>, Error> {
    Ok(match path {
        Some(p) => Box::new(std::io::BufWriter::new(std::fs::File::create(p)?)),
        None => Box::new(std::io::stdout().lock()),
    })
}

fn validate(source: &Source) -> Result<(), Error> {
    let cfg = source.load()?;
    let field = validate_sampled(&cfg)?;
    eprintln!("initial norm on the grid: {:.9}", field.norm());
    if cfg.engine.uses_fdtd() {
        let g = cfg.position_grid()?;
        let dt = fdtd_dt(&cfg)?;
        eprintln!(
            "leap-frog dt = {dt:.6}, stability margin = {:.6}, largest stable dt = {:.6}",
            fdtd::stability_margin(&g, dt)?,
            fdtd::max_stable_dt(cfg.grid.spacing[0])
        );
    }
    print!("{}", cfg.to_toml());
    Ok(())
}

fn print_report(r: &ScenarioReport) {
    println!("parameters: {}", r.parameters);
    println!("complete:   {}", r.complete);
    if let Some(d) = r.drift_exact {
        println!("exact drift velocity: ({:.6e}, {:.6e}, {:.6e})", d[0], d[1], d[2]);
    }
    let fits = |label: &str, fits: &[diracsim::io::scenario::ComponentFit]| {
        for f in fits {
            let freq = f.frequency.map_or("-".to_string(), |w| format!("{w:.4}"));
            println!(
                "  {label:<9} {:<8} {}  drift {:+.6e}  amplitude {:.3e}  frequency {freq}",
                f.quantity, f.axis, f.drift, f.amplitude
            );
        }
    };
    fits("oracle", &r.oracle_fits);
    for e in &r.engines {
        println!(
            "engine {}: complete {}, steps {}, max norm deviation {:.3e}{}",
            e.engine,
            e.complete,
            e.steps,
            e.max_norm_deviation,
            e.dt.map_or(String::new(), |dt| format!(", dt {dt:.6}"))
        );
        fits(&e.engine, &e.fits);
        for s in &e.snapshots {
            println!(
                "  t = {:.4}: norm {:.9}, axial {:.3e}{}, z-parity {:.3e}, xy-parity {:.3e}",
                s.time,
                s.norm,
                s.axial,
                s.axial_spectral.map_or(String::new(), |a| format!(" (exact rotation {a:.3e})")),
                s.z_parity,
                s.xy_parity
            );
        }
        for n in &e.notes {
            println!("  note: {n}");
        }
        if let Some(err) = &e.error {
            println!("  error: {err}");
        }
    }
    for c in &r.comparisons {
        println!("fdtd vs spectral density at t = {:.4}: relative L2 {:.4e}", c.time, c.density_rel_l2);
    }
    if let Some(w) = &r.w {
        println!(
            "W+ total {:.9}, W- total {:.9}, peaks at pz = {:.4} / {:.4}",
            w.totals[0], w.totals[1], w.peaks[0], w.peaks[1]
        );
    }
    for n in &r.notes {
        println!("note: {n}");
    }
    for e in &r.errors {
        println!("error: {e}");
    }
}

fn execute(cmd: Command) -> Result<i32, Error> {
    match cmd {
        Command::Validate { source } => validate(&source)?,
        Command::Run { source, out } => {
            let cfg = source.load()?;
            let dir = out.clone().unwrap_or_else(|| cfg.outputs.directory.clone());
            eprintln!("running into {}", dir.display());
            let report = run_scenario(&cfg, Some(&dir))?;
            print_report(&report);
            return Ok(report.exit_code);
        }
        Command::Slice {
            dump,
            plane,
            quantity,
            out,
        } => {
            let field = read_dump(&dump)?;
            let plane = Plane::parse(&plane).map_err(|e| Error::Config(e.to_string()))?;
            let (name, values) = match quantity {
                SliceQuantity::Density => ("density", probability_density(&field)),
                q => {
                    let s = spin_density(&field);
                    let (name, axis) = match q {
                        SliceQuantity::SpinX => ("spin_x", 0),
                        SliceQuantity::SpinY => ("spin_y", 1),
                        _ => ("spin_z", 2),
                    };
                    (name, s.component(axis).to_vec())
                }
            };
            let slice = slice_scalar(&field.grid, &values, plane).map_err(|e| Error::Config(e.to_string()))?;
            let text = export_slice(&TextSlice {
                quantity: name.into(),
                time: field.time,
                parameters: format!("source={}", dump.display()),
                slice,
            });
            out_writer(&out)?.write_all(text.as_bytes())?;
        }
        Command::Series { source, out } => {
            let cfg = source.load()?;
            if cfg.packet.m_axial != 0 {
                return Err(Error::Unsupported("quadrature series need m_axial = 0".into()));
            }
            let times = series_times(&cfg);
            if times.is_empty() {
                return Err(Error::Config("schedule.series_dt is 0; nothing to sample".into()));
            }
            let state = cfg.state()?;
            eprintln!("{}", parameter_line(&cfg, &state));
            write_series(out_writer(&out)?, &oracle_rows(&state, &times)?)?;
        }
        Command::Wsplit { source, samples, out } => {
            let cfg = source.load()?;
            let state = cfg.state()?;
            let c = w_curve(&state, &default_pz_samples(&state, samples.unwrap_or(cfg.outputs.w_samples)))?;
            let path = out.unwrap_or_else(|| PathBuf::from("/dev/stdout"));
            write_w_curve(&path, &c.pz, &c.w_plus, &c.w_minus)?;
            let (p, m) = w_totals(&state)?;
            eprintln!("integral W+ = {p:.12}, integral W- = {m:.12}, sum = {:.12}", p + m);
        }
        Command::Report { path } => {
            let file = if path.is_dir() { path.join("report.json") } else { path };
            let r = read_report(Path::new(&file))?;
            print_report(&r);
            return Ok(r.exit_code);
        }
        Command::Presets { name } => match name {
            Some(n) => print!("{}", preset_text(&n)?),
            None => {
                for n in preset_names() {
                    println!("{n:<11} {}", preset_title(n)?);
                }
            }
        },
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
