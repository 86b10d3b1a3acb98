mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use fgauss::fidelity::{gaussian_fidelity_with, FidelityOptions, TOL_SINGULAR};
use fgauss::gaussian::{CorrelationMatrix, GroundStateOptions, ZeroModePolicy};
use fgauss::io::read_correlation;
use fgauss::models::{ModelKind, ModelSpec};
use fgauss::observables::{
    self, boundary_effect_function_with, entanglement_entropy_profile, two_point_correlation, BefOptions, EntropyBase,
    Precision, SweepSeries,
};
use fgauss::verify::{run_all, VerifyOptions};

use output::{fit_summary, render, Format, Meta};

#[derive(Parser, Debug)]
#[command(name = "fgauss", version, about = "Free-fermion chain observables from Majorana correlation matrices")]
struct Cli {
    /// Worker threads for per-r work
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    threads: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct SeriesArgs {
    #[arg(long, default_value_t = ModelKind::Ising)]
    model: ModelKind,

    /// Transverse field
    #[arg(long, default_value_t = 0.8, allow_negative_numbers = true)]
    h: f64,

    /// Chain length
    #[arg(long, default_value_t = 1000)]
    n: usize,

    /// Largest r (default n/4)
    #[arg(long)]
    rmax: Option<usize>,

    /// Output file (stdout if absent)
    #[arg(long)]
    out: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,

    /// Treatment of vanishing quasiparticle energies
    #[arg(long, value_enum, default_value_t = ZeroModes::ZeroTemperature)]
    zero_modes: ZeroModes,
}

impl SeriesArgs {
    fn spec(&self) -> ModelSpec {
        ModelSpec::new(self.model, self.n, self.h)
    }

    fn r_max(&self) -> usize {
        self.rmax.unwrap_or((self.n / 4).max(1))
    }

    fn meta(&self, command: &str) -> Meta {
        let mut m = Meta::default();
        m.push("command", command);
        m.push("model", self.model);
        m.push("h", self.h);
        m.push("n", self.n);
        m.push("rmax", self.r_max());
        if let Some(v) = self.zero_modes.to_possible_value() {
            m.push("zero_modes", v.get_name());
        }
        m
    }

    fn ground(&self) -> GroundStateOptions {
        GroundStateOptions { policy: self.zero_modes.into(), ..Default::default() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ZeroModes {
    Strict,
    ZeroTemperature,
}

impl From<ZeroModes> for ZeroModePolicy {
    fn from(z: ZeroModes) -> Self {
        match z {
            ZeroModes::Strict => ZeroModePolicy::Strict,
            ZeroModes::ZeroTemperature => ZeroModePolicy::ZeroTemperature,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Boundary effect function mu_n(r), r = 1..rmax
    Bef {
        #[command(flatten)]
        series: SeriesArgs,
        #[arg(long, default_value_t = TOL_SINGULAR)]
        tol_singular: f64,
        #[arg(long, default_value_t = Precision::Double)]
        precision: Precision,
    },
    /// Ground-state two-point correlation Corr(r)
    Corr {
        #[command(flatten)]
        series: SeriesArgs,
    },
    /// Entanglement entropy of the block n/2+1 ..= n/2+r
    Entropy {
        #[command(flatten)]
        series: SeriesArgs,
        #[arg(long, default_value_t = EntropyBase::Nats)]
        entropy_base: EntropyBase,
    },
    /// Fidelity between two correlation-matrix files
    Fidelity {
        file_a: PathBuf,
        file_b: PathBuf,
        #[arg(long, default_value_t = TOL_SINGULAR)]
        tol_singular: f64,
    },
    /// Seeded comparison of the Gaussian routines against exact diagonalization
    Verify {
        #[arg(long, default_value_t = VerifyOptions::default().seed)]
        seed: u64,
        /// Overrides every suite tolerance
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, default_value_t = TOL_SINGULAR)]
        tol_singular: f64,
    },
}

/// Failures carry their exit code.
#[derive(Debug)]
enum Failure {
    Config(anyhow::Error),
    Degenerate(anyhow::Error),
    Verify(String),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        match e.downcast_ref::<fgauss::Error>() {
            Some(fgauss::Error::DegenerateGroundState { .. }) => Failure::Degenerate(e),
            _ => Failure::Config(e),
        }
    }
}

impl From<fgauss::Error> for Failure {
    fn from(e: fgauss::Error) -> Self {
        anyhow::Error::from(e).into()
    }
}

fn emit(series: &SweepSeries, mut meta: Meta, args: &SeriesArgs) -> anyhow::Result<()> {
    meta.push("fit", fit_summary(series));
    meta.push("version", concat!("fgauss ", env!("CARGO_PKG_VERSION")));
    let text = render(series, &meta, args.format);
    match &args.out {
        Some(path) => write_file(path, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn write_file(path: &Path, text: &str) -> anyhow::Result<()> {
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn run_bef(series: &SeriesArgs, tol_singular: f64, precision: Precision) -> Result<(), Failure> {
    let opts = BefOptions {
        ground: series.ground(),
        fidelity: FidelityOptions { tol_singular, ..Default::default() },
        precision,
    };
    let s = boundary_effect_function_with(&series.spec(), series.r_max(), &opts)?;
    let mut meta = series.meta("bef");
    meta.push("precision", precision);
    Ok(emit(&s, meta, series)?)
}

fn pure_ground_state(series: &SeriesArgs) -> Result<CorrelationMatrix, Failure> {
    Ok(observables::pure_ground_state(&series.spec(), &series.ground())?.correlation)
}

fn run_corr(series: &SeriesArgs) -> Result<(), Failure> {
    if !series.n.is_multiple_of(4) {
        return Err(fgauss::Error::NotDivisibleByFour(series.n).into());
    }
    let g = pure_ground_state(series)?;
    let s = two_point_correlation(&g, series.n, series.r_max())?;
    Ok(emit(&s, series.meta("corr"), series)?)
}

fn run_entropy(series: &SeriesArgs, base: EntropyBase) -> Result<(), Failure> {
    if !series.n.is_multiple_of(2) {
        return Err(fgauss::Error::NotEven(series.n).into());
    }
    let g = pure_ground_state(series)?;
    let s = entanglement_entropy_profile(&g, series.n, series.r_max(), base)?;
    let mut meta = series.meta("entropy");
    meta.push("entropy_base", base);
    Ok(emit(&s, meta, series)?)
}

fn run_fidelity(a: &Path, b: &Path, tol_singular: f64) -> Result<(), Failure> {
    let ga = read_correlation(a).with_context(|| format!("reading {}", a.display()))?;
    let gb = read_correlation(b).with_context(|| format!("reading {}", b.display()))?;
    let f = gaussian_fidelity_with(&ga, &gb, &FidelityOptions { tol_singular, ..Default::default() })?;
    println!("F={:.15} d1={:e} singular={}", f.value, f.first_determinant, f.singular);
    Ok(())
}

fn run_verify(seed: u64, tol: Option<f64>, tol_singular: f64) -> Result<(), Failure> {
    let opts = VerifyOptions { seed, tolerance: tol, fidelity: FidelityOptions { tol_singular, ..Default::default() } };
    let reports = run_all(&opts)?;
    println!("{:<14} {:>6} {:>12} {:>10}  status", "suite", "cases", "max_dev", "tol");
    for r in &reports {
        let status = if r.passed() { "pass" } else { "FAIL" };
        println!("{:<14} {:>6} {:>12.3e} {:>10.1e}  {status}", r.name, r.cases, r.max_deviation, r.tolerance);
    }
    let failed: Vec<&str> = reports.iter().filter(|r| !r.passed()).map(|r| r.name).collect();
    if !failed.is_empty() {
        return Err(Failure::Verify(failed.join(", ")));
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Bef { series, tol_singular, precision } => run_bef(series, *tol_singular, *precision),
        Command::Corr { series } => run_corr(series),
        Command::Entropy { series, entropy_base } => run_entropy(series, *entropy_base),
        Command::Fidelity { file_a, file_b, tol_singular } => run_fidelity(file_a, file_b, *tol_singular),
        Command::Verify { seed, tol, tol_singular } => run_verify(*seed, *tol, *tol_singular),
    }
}

fn pool(threads: Option<u64>) -> anyhow::Result<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(t) = threads {
        let Ok(t) = usize::try_from(t) else { bail!("--threads {t} is too large") };
        b = b.num_threads(t);
    }
    Ok(b.build()?)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = match pool(cli.threads) {
        Ok(p) => p.install(|| run(&cli)),
        Err(e) => Err(Failure::Config(e)),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Degenerate(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Verify(names)) => {
            eprintln!("verification failed: {names}");
            ExitCode::from(3)
        }
    }
}
