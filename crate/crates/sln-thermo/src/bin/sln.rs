use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sln_core::kernels::{KernelSystem, ShiftChoice};
use sln_thermo::nlie::{Grid, NlieParams, NlieSystem};
use sln_thermo::oracle::{self, SPIN2_COEFFS};
use sln_thermo::thermo::{self, Spacing, ThermoOptions};
use sln_thermo::verify::{run_suite, Suite, SuiteSize};
use sln_thermo::{Result, ThermoError};

/// Finite-temperature thermodynamics of sl(n) permutation chains.
#[derive(Parser)]
#[command(name = "sln", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run randomized identity suites and print a JSON report.
    Verify {
        #[arg(long, default_value = "all")]
        suite: Suite,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        draws: usize,
        #[arg(long, default_value_t = 10)]
        points: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve the integral equations at one temperature and write the state.
    Solve(SolveArgs),
    /// Thermodynamic curves over a temperature range, as CSV.
    Sweep(SweepArgs),
    /// Brute-force oracles.
    #[command(subcommand)]
    Oracle(OracleCommand),
    /// Kernel matrix and driving terms on a k grid, as CSV.
    DumpKernel {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "bounded")]
        shifts: Shifts,
        #[arg(long, default_value_t = -20.0, allow_hyphen_values = true)]
        kmin: f64,
        #[arg(long, default_value_t = 20.0)]
        kmax: f64,
        #[arg(long, default_value_t = 401)]
        count: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Shifts {
    Bounded,
    Printed,
}

impl From<Shifts> for ShiftChoice {
    fn from(s: Shifts) -> Self {
        match s {
            Shifts::Bounded => ShiftChoice::Bounded,
            Shifts::Printed => ShiftChoice::Printed,
        }
    }
}

#[derive(Args)]
struct Physics {
    #[arg(long)]
    n: usize,
    /// Chemical potentials, comma separated (default: all zero).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    mu: Vec<f64>,
    #[arg(long = "J", default_value_t = 1.0, allow_hyphen_values = true)]
    coupling: f64,
}

impl Physics {
    fn mu(&self) -> Result<Vec<f64>> {
        match self.mu.len() {
            0 => Ok(vec![0.0; self.n]),
            k if k == self.n => Ok(self.mu.clone()),
            k => Err(ThermoError::Config(format!("--mu has {k} entries, expected {}", self.n))),
        }
    }
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    physics: Physics,
    #[arg(long)]
    temp: f64,
    #[arg(long, default_value_t = 4096)]
    points: usize,
    /// Half width of the x window (default: clamp(6/T, 40, 200)).
    #[arg(long)]
    half_width: Option<f64>,
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    #[arg(long, default_value_t = 0.0)]
    damping: f64,
    /// Anderson mixing depth (0: plain damped iteration).
    #[arg(long, default_value_t = 0)]
    anderson: usize,
    #[arg(long, default_value_t = 1000)]
    max_iter: usize,
    #[arg(long, value_enum, default_value = "bounded")]
    shifts: Shifts,
    #[arg(long, default_value = "state.json")]
    out: PathBuf,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    physics: Physics,
    /// min:max:count followed by `log` or `lin`, e.g. 0.05:100:60log.
    #[arg(long)]
    temp: String,
    #[arg(long)]
    no_densities: bool,
    #[arg(long)]
    susceptibilities: bool,
    #[arg(long, value_enum, default_value = "bounded")]
    shifts: Shifts,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum OracleCommand {
    /// Exact diagonalization of a finite chain.
    Ed {
        #[command(flatten)]
        physics: Physics,
        #[arg(long)]
        sites: usize,
        #[arg(long)]
        temp: f64,
        #[arg(long)]
        open: bool,
    },
    /// Dominant eigenvalue of the finite-Trotter transfer matrix.
    Qtm {
        #[command(flatten)]
        physics: Physics,
        #[arg(long)]
        trotter: usize,
        #[arg(long)]
        temp: f64,
    },
    /// Yang-Baxter residual at random spectral parameters.
    Ybe {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 10)]
        draws: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Spin-2 polynomial against the permutation operator.
    Spin2,
}

fn parse_range(spec: &str) -> Result<Vec<f64>> {
    let bad = || ThermoError::Config(format!("temperature range {spec:?} is not min:max:count(log|lin)"));
    let parts: Vec<&str> = spec.split(':').collect();
    let [min, max, last] = parts[..] else { return Err(bad()) };
    let (count, spacing) = if let Some(c) = last.strip_suffix("log") {
        (c, Spacing::Log)
    } else if let Some(c) = last.strip_suffix("lin") {
        (c, Spacing::Linear)
    } else {
        return Err(bad());
    };
    let min: f64 = min.parse().map_err(|_| bad())?;
    let max: f64 = max.parse().map_err(|_| bad())?;
    let count: usize = count.parse().map_err(|_| bad())?;
    thermo::temperatures(min, max, count, spacing)
}

fn sink(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

fn emit_json<T: Serialize>(value: &T, path: &Option<PathBuf>) -> Result<()> {
    let mut w = sink(path)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct Residual {
    check: &'static str,
    n: usize,
    residual: f64,
    tolerance: f64,
    passed: bool,
}

#[derive(Serialize)]
struct EdReport {
    n: usize,
    sites: usize,
    periodic: bool,
    temperature: f64,
    mu: Vec<f64>,
    coupling: f64,
    free_energy: f64,
}

/// Ok(true) on success, Ok(false) when an assertion failed.
fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Verify { suite, seed, draws, points, out } => {
            let report = run_suite(suite, seed, SuiteSize { draws, points })?;
            emit_json(&report, &out)?;
            Ok(report.passed)
        }
        Command::Solve(a) => {
            let mu = a.physics.mu()?;
            let mut p = NlieParams::new(a.physics.n, a.temp, &mu);
            p.coupling = a.physics.coupling;
            p.tol = a.tol;
            p.damping = a.damping;
            p.anderson = a.anderson;
            p.max_iter = a.max_iter;
            p.shifts = a.shifts.into();
            let width = a.half_width.unwrap_or_else(|| Grid::for_temperature(a.temp).half_width);
            let grid = Grid::new(a.points, width)?;
            let state = NlieSystem::shared(p.n, grid, p.shifts)?.solve(&p, None)?;
            for w in &state.warnings {
                eprintln!("warning: {w}");
            }
            eprintln!(
                "f = {:.12} after {} iterations (residual {:.2e}, tail {:.2e})",
                state.f, state.iterations, state.residual, state.tail
            );
            emit_json(&state, &Some(a.out))?;
            Ok(true)
        }
        Command::Sweep(a) => {
            let mu = a.physics.mu()?;
            let temps = parse_range(&a.temp)?;
            let opts = ThermoOptions {
                coupling: a.physics.coupling,
                densities: !a.no_densities,
                susceptibilities: a.susceptibilities,
                shifts: a.shifts.into(),
                ..Default::default()
            };
            let result = thermo::sweep(a.physics.n, &temps, &mu, &opts)?;
            for (t, e) in &result.failures {
                eprintln!("T = {t}: {e}");
            }
            thermo::write_csv(sink(&a.out)?, a.physics.n, &result.points)?;
            Ok(result.failures.is_empty())
        }
        Command::Oracle(o) => match o {
            OracleCommand::Ed { physics, sites, temp, open } => {
                let mu = physics.mu()?;
                let f = oracle::finite_free_energy(physics.n, sites, !open, temp, physics.coupling, &mu)?;
                let report = EdReport {
                    n: physics.n,
                    sites,
                    periodic: !open,
                    temperature: temp,
                    mu,
                    coupling: physics.coupling,
                    free_energy: f,
                };
                emit_json(&report, &None)?;
                Ok(true)
            }
            OracleCommand::Qtm { physics, trotter, temp } => {
                let mu = physics.mu()?;
                let report = oracle::qtm_eigenvalue(physics.n, trotter, temp, physics.coupling, &mu)?;
                emit_json(&report, &None)?;
                Ok(true)
            }
            OracleCommand::Ybe { n, draws, seed } => {
                let residual = oracle::ybe_residual(n, draws, seed, 1.0);
                let r = Residual { check: "yang-baxter", n, residual, tolerance: 1e-13, passed: residual <= 1e-13 };
                emit_json(&r, &None)?;
                Ok(r.passed)
            }
            OracleCommand::Spin2 => {
                let r = oracle::spin2_identity(SPIN2_COEFFS);
                emit_json(&r, &None)?;
                Ok(r.residual <= 1e-12)
            }
        },
        Command::DumpKernel { n, shifts, kmin, kmax, count, out } => {
            let s = KernelSystem::new(n, shifts.into())?;
            if count < 2 || kmax <= kmin {
                return Err(ThermoError::Config("need count ≥ 2 and kmax > kmin".into()));
            }
            let d = s.dim();
            let mut w = csv::Writer::from_writer(sink(&out)?);
            let mut header = vec!["k".to_string()];
            for r in 0..d {
                header.extend((0..d).map(|c| format!("K_{r}_{c}")));
            }
            header.extend((0..d).map(|r| format!("d_{r}")));
            w.write_record(&header)?;
            for i in 0..count {
                let k = kmin + (kmax - kmin) * i as f64 / (count - 1) as f64;
                let mut row = vec![format!("{k:.15e}")];
                row.extend(s.matrix(k).iter().chain(s.driving(k).iter()).map(|v| format!("{v:.15e}")));
                w.write_record(&row)?;
            }
            w.flush()?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e @ ThermoError::Config(_)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            let mut src = std::error::Error::source(&e);
            while let Some(s) = src {
                eprintln!("  caused by: {s}");
                src = s.source();
            }
            ExitCode::from(1)
        }
    }
}
