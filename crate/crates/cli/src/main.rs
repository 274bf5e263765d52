use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qcorr::Method;
use qcorr_cli::band::{cmd_band, BandOutcome, BandScan, DEFAULT_BISECT_TOL};
use qcorr_cli::config::Settings;
use qcorr_cli::grid::{Axis, AxisSpec, SweepGrid};
use qcorr_cli::point::cmd_point;
use qcorr_cli::sweep::{cmd_sweep, SweepOptions};
use qcorr_cli::validate::{cmd_validate, Tolerances};
use qcorr_cli::{CliError, MethodChoice, OutputFormat, Result};

#[derive(Parser)]
#[command(name = "qcorr", version, about = "Stationary correlations of two damped oscillators in a common Ohmic bath")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one parameter point
    Point(CommonArgs),
    /// Evaluate a one- or two-axis grid
    Sweep(CommonArgs),
    /// Find the omega2 interval with nonzero entanglement
    Band(CommonArgs),
    /// Run the built-in consistency checks
    Validate(CommonArgs),
}

#[derive(Args, Debug, Default)]
struct CommonArgs {
    #[arg(long)]
    omega1: Option<f64>,
    #[arg(long)]
    omega2: Option<f64>,
    #[arg(long)]
    k: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long = "omega-c")]
    omega_c: Option<f64>,
    #[arg(long)]
    temp: Option<f64>,
    #[arg(long, value_enum)]
    method: Option<MethodChoice>,
    /// key = value file; flags take precedence
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
    #[arg(long)]
    workers: Option<usize>,
    /// axis:lo:hi:n with axis in {k, omega2, temperature, gamma}; give twice for 2-D
    #[arg(long)]
    grid: Vec<String>,
    #[arg(long = "bisect-tol")]
    bisect_tol: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Inputs per check for `validate`
    #[arg(long)]
    cases: Option<usize>,
}

impl CommonArgs {
    fn settings(self) -> Result<Settings> {
        let file = match &self.config {
            Some(path) => Settings::from_file(path)?,
            None => Settings::default(),
        };
        let flags = Settings {
            omega1: self.omega1,
            omega2: self.omega2,
            k: self.k,
            gamma: self.gamma,
            omega_c: self.omega_c,
            temp: self.temp,
            method: self.method,
            out: self.out,
            format: self.format,
            workers: self.workers,
            grid: self.grid,
            bisect_tol: self.bisect_tol,
            seed: self.seed,
            cases: self.cases,
        };
        Ok(flags.over(file))
    }
}

fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    match path {
        Some(p) => {
            let f = File::create(p).map_err(|source| CliError::Io { path: p.display().to_string(), source })?;
            Ok(Box::new(BufWriter::new(f)))
        }
        None => Ok(Box::new(io::stdout().lock())),
    }
}

fn io_err(path: Option<&Path>) -> impl Fn(io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.map_or("<stdout>".into(), |p| p.display().to_string()), source }
}

fn write_json<T: serde::Serialize>(value: &T, path: Option<&Path>) -> Result<()> {
    let mut w = open_output(path)?;
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| io_err(path)(e.into()))?;
    writeln!(w).and_then(|_| w.flush()).map_err(io_err(path))
}

fn write_text(text: &str, path: Option<&Path>) -> Result<()> {
    let mut w = open_output(path)?;
    w.write_all(text.as_bytes()).and_then(|_| w.flush()).map_err(io_err(path))
}

fn single_method(choice: MethodChoice) -> Method {
    match choice {
        MethodChoice::Quadrature => Method::Quadrature,
        _ => Method::Analytic,
    }
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Point(args) => {
            let s = args.settings()?;
            let out = cmd_point(&s.params(), s.method.unwrap_or(MethodChoice::Analytic))?;
            match s.format {
                Some(OutputFormat::Json) => write_json(&out, s.out.as_deref())?,
                _ => write_text(&out.to_text(), s.out.as_deref())?,
            }
            if s.out.is_some() {
                print!("{}", out.to_text());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Sweep(args) => {
            let s = args.settings()?;
            let specs = s.grid.iter().map(|g| g.parse::<AxisSpec>()).collect::<Result<Vec<_>>>()?;
            let (axis1, axis2) = match specs[..] {
                [a] => (a, None),
                [a, b] => (a, Some(b)),
                _ => return Err(CliError::Input(format!("sweep needs one or two --grid axes, got {}", specs.len()))),
            };
            let grid = SweepGrid::new(axis1, axis2, s.params(), s.method.unwrap_or(MethodChoice::Analytic))?;
            let opts = SweepOptions { workers: s.workers.unwrap_or(1), seed: s.seed.unwrap_or(0), progress: true };
            let out = cmd_sweep(&grid, &opts)?;
            let path = s.out.as_deref();
            let mut w = open_output(path)?;
            match s.format.unwrap_or(OutputFormat::Csv) {
                OutputFormat::Csv => out.write_csv(&mut w),
                OutputFormat::Json => out.write_json(&mut w).and_then(|_| writeln!(w)),
            }
            .and_then(|_| w.flush())
            .map_err(io_err(path))?;
            out.check_failures()?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Band(args) => {
            let s = args.settings()?;
            let params = s.params();
            let mut scan = BandScan::around(params.omega1);
            if let Some(g) = s.grid.first() {
                let spec: AxisSpec = g.parse()?;
                if spec.axis != Axis::Omega2 {
                    return Err(CliError::Input("band scans omega2; use --grid omega2:lo:hi:n".into()));
                }
                scan = BandScan { lo: spec.lo, hi: spec.hi, points: spec.points };
            }
            let method = single_method(s.method.unwrap_or(MethodChoice::Analytic));
            let outcome = cmd_band(&params, &scan, s.bisect_tol.unwrap_or(DEFAULT_BISECT_TOL), method)?;
            match s.format {
                Some(OutputFormat::Json) => write_json(&outcome, s.out.as_deref())?,
                _ => {
                    let text = match outcome {
                        BandOutcome::Empty => "band: empty\n".to_string(),
                        BandOutcome::Found(b) => format!(
                            "omega_prime = {}\nomega_double_prime = {}\nwidth = {}\nmax_E_N = {} at omega2 = {}\ntolerance = {:e}\ntruncated = {}\n",
                            b.omega_prime,
                            b.omega_double_prime,
                            b.width(),
                            b.max_log_negativity,
                            b.omega2_at_max,
                            b.tolerance,
                            b.truncated
                        ),
                    };
                    write_text(&text, s.out.as_deref())?;
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Validate(args) => {
            let s = args.settings()?;
            let tol = Tolerances::from_env()?;
            let report = cmd_validate(s.seed.unwrap_or(0), s.cases.unwrap_or(20), &tol);
            match s.format {
                Some(OutputFormat::Json) => write_json(&report, s.out.as_deref())?,
                _ => write_text(&report.to_text(), s.out.as_deref())?,
            }
            Ok(if report.passed() { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("{{\"error\":{:?},\"message\":{:?}}}", e.kind(), e.to_string());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
