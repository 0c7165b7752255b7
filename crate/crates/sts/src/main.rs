//! `sts` — inspect, sample, and exactly compute statistics of random
//! square-tiled surfaces.

use std::fs::File;
use std::io::{self, BufWriter, Write as _};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use sts::exact::{
    commutator_class_distribution, l2_discrepancy, tail_bound, tv_distance,
    tv_upper_bound, uniform_an_distribution, vertex_count_pgf,
    vertex_count_pgf_standard, ExactError, Model, PgfPoly,
};
use sts::montecarlo::{
    run_experiment, summary_to_json, ExperimentConfig, McError, ModelSpec, CSV_HEADER,
};
use sts::partition::largest_classes;
use sts::perm::{parse_cycles, ParseCyclesError};
use sts::surface::SquareTiledSurface;
use sts::verify::{
    all_passed, suite_bounds, suite_oracle, suite_orthogonality,
    suite_reference_surface, Check,
};
use sts::{character, Partition};

#[derive(Parser)]
#[command(
    name = "sts",
    version,
    about = "Statistics of random square-tiled surfaces built from permutation pairs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze one surface given by its gluing permutations.
    Inspect {
        /// Number of squares.
        #[arg(long)]
        n: u32,
        /// Right-neighbor gluing, in cycle notation (e.g. "(1,2)(3,4,5)").
        #[arg(long)]
        sigma: String,
        /// Top-neighbor gluing, in cycle notation.
        #[arg(long)]
        tau: String,
        /// Emit the machine-readable JSON report instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Exact distribution statistics of a random model (degrees up to 30).
    Exact {
        /// Number of squares.
        #[arg(long)]
        n: u32,
        /// Random model: both permutations uniform, or horizontal
        /// restricted to a class.
        #[arg(long, value_enum)]
        model: ExactModelArg,
        /// Cycle type of the horizontal permutation (dot notation, e.g.
        /// "3.2.1"); required for --model hr.
        #[arg(long)]
        mu: Option<Partition>,
        /// Which statistic to print.
        #[arg(long, value_enum)]
        stat: StatArg,
    },
    /// Run seeded Monte Carlo trials, streaming one CSV row per trial.
    Sample {
        /// Number of squares.
        #[arg(long)]
        n: u32,
        /// Random model; hr needs --mu, hr-random needs --mu-max-parts.
        #[arg(long, value_enum)]
        model: SampleModelArg,
        /// Cycle type of the horizontal permutation for --model hr.
        #[arg(long)]
        mu: Option<Partition>,
        /// For --model hr-random: the cycle type is redrawn each trial,
        /// uniformly over partitions with at most this many parts.
        #[arg(long)]
        mu_max_parts: Option<u32>,
        /// Number of trials.
        #[arg(long)]
        trials: u64,
        /// RNG seed; together with the trial index it determines each draw.
        #[arg(long)]
        seed: u64,
        /// Worker threads (never changes the results, only the speed).
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// CSV output path.
        #[arg(long)]
        out: PathBuf,
        /// Optional path for the summary JSON (also printed to stdout).
        #[arg(long)]
        summary: Option<PathBuf>,
    },
    /// One irreducible character value of the symmetric group.
    Char {
        /// Shape (irreducible) in dot notation.
        #[arg(long)]
        lambda: Partition,
        /// Conjugacy class in dot notation.
        #[arg(long)]
        mu: Partition,
    },
    /// Conjugacy classes of S_n sorted by size.
    Classes {
        #[arg(long)]
        n: u32,
        /// Print only the K largest classes.
        #[arg(long)]
        top: Option<usize>,
    },
    /// Self-verification suites; exits 4 if any check fails.
    Verify {
        #[arg(long, value_enum)]
        suite: SuiteArg,
        /// Largest degree the suite covers (defaults: oracle 5,
        /// orthogonality 8, bounds 7).
        #[arg(long)]
        max_n: Option<u32>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ExactModelArg {
    #[value(name = "standard")]
    Standard,
    #[value(name = "hr")]
    Hr,
}

#[derive(Clone, Copy, ValueEnum)]
enum SampleModelArg {
    #[value(name = "standard")]
    Standard,
    #[value(name = "hr")]
    Hr,
    #[value(name = "hr-random")]
    HrRandom,
}

#[derive(Clone, Copy, ValueEnum)]
enum StatArg {
    #[value(name = "classdist")]
    ClassDist,
    #[value(name = "vertices")]
    Vertices,
    #[value(name = "tv")]
    Tv,
    #[value(name = "bounds")]
    Bounds,
    #[value(name = "moments")]
    Moments,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    #[value(name = "orthogonality")]
    Orthogonality,
    #[value(name = "oracle")]
    Oracle,
    #[value(name = "bounds")]
    Bounds,
    #[value(name = "figure1")]
    Figure1,
    #[value(name = "all")]
    All,
}

/// A failure destined for a specific exit code: 2 usage, 3 feasibility,
/// 4 verification, 1 internal. Code 0 with an empty message is the graceful
/// stop used when the stdout consumer goes away mid-stream.
struct Failure {
    code: u8,
    message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

fn feasibility(message: impl Into<String>) -> Failure {
    Failure { code: 3, message: message.into() }
}

fn internal(message: impl Into<String>) -> Failure {
    Failure { code: 1, message: message.into() }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        internal(e.to_string())
    }
}

/// Print a line to stdout; a broken pipe means the consumer has seen all it
/// wants, so stop quietly instead of panicking.
fn say(line: impl std::fmt::Display) -> Result<(), Failure> {
    let mut out = io::stdout().lock();
    match writeln!(out, "{line}") {
        Ok(()) => Ok(()),
        Err(e) if e.kind() == io::ErrorKind::BrokenPipe => {
            Err(Failure { code: 0, message: String::new() })
        }
        Err(e) => Err(internal(e.to_string())),
    }
}

impl From<ExactError> for Failure {
    fn from(e: ExactError) -> Self {
        match e {
            ExactError::DegreeTooLarge { .. } | ExactError::PairBudgetExceeded { .. } => {
                feasibility(e.to_string())
            }
            _ => usage(e.to_string()),
        }
    }
}

impl From<McError> for Failure {
    fn from(e: McError) -> Self {
        match e {
            McError::Io(inner) => internal(inner.to_string()),
            other => usage(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            if !failure.message.is_empty() {
                eprintln!("error: {}", failure.message);
            }
            ExitCode::from(failure.code)
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Inspect { n, sigma, tau, json } => cmd_inspect(n, &sigma, &tau, json),
        Command::Exact { n, model, mu, stat } => cmd_exact(n, model, mu, stat),
        Command::Sample { n, model, mu, mu_max_parts, trials, seed, workers, out, summary } => {
            cmd_sample(n, model, mu, mu_max_parts, trials, seed, workers, &out, summary.as_deref())
        }
        Command::Char { lambda, mu } => cmd_char(&lambda, &mu),
        Command::Classes { n, top } => cmd_classes(n, top),
        Command::Verify { suite, max_n } => cmd_verify(suite, max_n),
    }
}

/// Render a cycle-notation parse failure with a caret under the offending
/// character.
fn cycle_parse_failure(flag: &str, text: &str, error: &ParseCyclesError) -> Failure {
    let caret = " ".repeat(error.position.saturating_sub(1));
    usage(format!(
        "{flag}: {} at position {}\n  {text}\n  {caret}^",
        error.kind, error.position
    ))
}

fn cmd_inspect(n: u32, sigma_text: &str, tau_text: &str, json: bool) -> Result<(), Failure> {
    let sigma = parse_cycles(sigma_text, n)
        .map_err(|e| cycle_parse_failure("--sigma", sigma_text, &e))?;
    let tau = parse_cycles(tau_text, n)
        .map_err(|e| cycle_parse_failure("--tau", tau_text, &e))?;
    let surface = SquareTiledSurface::new(sigma, tau)
        .map_err(|e| usage(e.to_string()))?;
    let report = surface.analyze();
    if json {
        return say(
            serde_json::to_string_pretty(&report.to_json()).expect("report serializes"),
        );
    }

    let perm = |p: &sts::Permutation| {
        let s = p.to_string();
        if s.is_empty() {
            "id".to_string()
        } else {
            s
        }
    };
    use std::fmt::Write;
    let mut text = String::new();
    writeln!(text, "n: {}", report.n).unwrap();
    writeln!(text, "sigma: {}", perm(&report.sigma)).unwrap();
    writeln!(text, "tau: {}", perm(&report.tau)).unwrap();
    writeln!(text, "commutator: {}", perm(&report.commutator)).unwrap();
    writeln!(text, "vertex profile: {}", report.vertex_profile).unwrap();
    writeln!(text, "vertices: {}", report.vertex_count).unwrap();
    writeln!(text, "connected: {}", if report.connected { "yes" } else { "no" }).unwrap();
    writeln!(text, "components: {}", report.num_components).unwrap();
    if !report.connected {
        for (i, comp) in report.per_component.iter().enumerate() {
            writeln!(
                text,
                "  component {}: {} squares, {} vertices, genus {}",
                i + 1,
                comp.n,
                comp.vertices,
                comp.genus
            )
            .unwrap();
        }
    }
    writeln!(text, "genus: {}", report.genus).unwrap();
    writeln!(
        text,
        "stratum: {} (marked points: {})",
        report.stratum.orders_string(),
        report.stratum.marked_points
    )
    .unwrap();
    writeln!(text, "cylinders: {}", report.cylinders.len()).unwrap();
    for (i, cyl) in report.cylinders.iter().enumerate() {
        let squares: Vec<String> = cyl.squares.iter().map(u32::to_string).collect();
        writeln!(
            text,
            "  cylinder {}: squares {{{}}}, circumference {}, height {}",
            i + 1,
            squares.join(","),
            cyl.circumference,
            cyl.height
        )
        .unwrap();
    }
    write!(text, "holonomy: {}", report.holonomy.letter()).unwrap();
    say(text)
}

/// Exact fraction plus a 6-significant-digit decimal rendering.
fn cell(value: &BigRational) -> String {
    format!("{value} ≈{}", sig6(value.to_f64().unwrap_or(f64::NAN)))
}

fn sig6(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v:.6}");
    }
    let magnitude = v.abs().log10().floor() as i32;
    let precision = (5 - magnitude).max(0) as usize;
    format!("{v:.precision$}")
}

fn exact_model(n: u32, model: ExactModelArg, mu: Option<Partition>) -> Result<Model, Failure> {
    match (model, mu) {
        (ExactModelArg::Standard, None) => Ok(Model::Standard),
        (ExactModelArg::Standard, Some(_)) => {
            Err(usage("--mu only applies to --model hr"))
        }
        (ExactModelArg::Hr, Some(mu)) => {
            if mu.n() != n {
                return Err(usage(format!(
                    "--mu {mu} is a partition of {}, not of --n {n}",
                    mu.n()
                )));
            }
            Ok(Model::Hr(mu))
        }
        (ExactModelArg::Hr, None) => Err(usage("--model hr requires --mu")),
    }
}

fn cmd_exact(
    n: u32,
    model_arg: ExactModelArg,
    mu: Option<Partition>,
    stat: StatArg,
) -> Result<(), Failure> {
    let model = exact_model(n, model_arg, mu)?;
    let mut lines: Vec<String> = Vec::new();
    match stat {
        StatArg::ClassDist => {
            let dist = commutator_class_distribution(&model, n)?;
            lines.push("class,mass".into());
            for (class, mass) in &dist.masses {
                if !mass.is_zero() {
                    lines.push(format!("{class},{}", cell(mass)));
                }
            }
        }
        StatArg::Vertices => {
            let pgf = model_pgf(&model, n)?;
            lines.push("vertices,probability".into());
            for (x, coeff) in pgf.coeffs.iter().enumerate() {
                if !coeff.is_zero() {
                    lines.push(format!("{x},{}", cell(coeff)));
                }
            }
        }
        StatArg::Tv => {
            let dist = commutator_class_distribution(&model, n)?;
            let uniform = uniform_an_distribution(n)?;
            let tv = tv_distance(&dist, &uniform)?;
            lines.push(cell(&tv));
        }
        StatArg::Bounds => {
            let mu = match &model {
                Model::Hr(mu) => mu.clone(),
                Model::Standard => {
                    return Err(usage("--stat bounds requires --model hr"));
                }
            };
            let dist = commutator_class_distribution(&model, n)?;
            let uniform = uniform_an_distribution(n)?;
            let tv = tv_distance(&dist, &uniform)?;
            lines.push("bound,value".into());
            lines.push(format!("tv,{}", cell(&tv)));
            lines.push(format!("tv_squared,{}", cell(&(&tv * &tv))));
            if n >= 5 {
                lines.push(format!(
                    "tv_squared_upper_bound,{}",
                    cell(&tv_upper_bound(&mu)?)
                ));
            }
            if n >= 2 {
                lines.push(format!("l2_discrepancy,{}", cell(&l2_discrepancy(&mu)?)));
            }
            for t in 1..=n {
                lines.push(format!("vertex_tail_{t},{}", cell(&tail_bound(&mu, t)?)));
            }
        }
        StatArg::Moments => {
            let pgf = model_pgf(&model, n)?;
            let mean_v = pgf.expectation();
            let var_v = pgf.variance();
            let two = BigRational::from_integer(BigInt::from(2));
            let mean_g = (BigRational::from_integer(BigInt::from(n)) - &mean_v) / &two
                + BigRational::from_integer(BigInt::from(1));
            let var_g = &var_v / (&two * &two);
            lines.push("moment,value".into());
            lines.push(format!("vertex_mean,{}", cell(&mean_v)));
            lines.push(format!("vertex_variance,{}", cell(&var_v)));
            lines.push(format!("genus_mean,{}", cell(&mean_g)));
            lines.push(format!("genus_variance,{}", cell(&var_g)));
        }
    }
    say(lines.join("\n"))
}

fn model_pgf(model: &Model, n: u32) -> Result<PgfPoly, ExactError> {
    match model {
        Model::Standard => vertex_count_pgf_standard(n),
        Model::Hr(mu) => vertex_count_pgf(mu),
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_sample(
    n: u32,
    model_arg: SampleModelArg,
    mu: Option<Partition>,
    mu_max_parts: Option<u32>,
    trials: u64,
    seed: u64,
    workers: usize,
    out: &std::path::Path,
    summary_path: Option<&std::path::Path>,
) -> Result<(), Failure> {
    let model = match (model_arg, mu, mu_max_parts) {
        (SampleModelArg::Standard, None, None) => ModelSpec::Standard,
        (SampleModelArg::Hr, Some(mu), None) => ModelSpec::HrFixed(mu),
        (SampleModelArg::HrRandom, None, Some(max_parts)) => {
            ModelSpec::HrRandom { max_parts }
        }
        (SampleModelArg::Standard, _, _) => {
            return Err(usage("--model standard takes neither --mu nor --mu-max-parts"));
        }
        (SampleModelArg::Hr, _, _) => {
            return Err(usage("--model hr requires --mu (and not --mu-max-parts)"));
        }
        (SampleModelArg::HrRandom, _, _) => {
            return Err(usage("--model hr-random requires --mu-max-parts (and not --mu)"));
        }
    };
    let config = ExperimentConfig { n, model, trials, seed, workers };

    let file = File::create(out)
        .map_err(|e| internal(format!("cannot create {}: {e}", out.display())))?;
    let mut writer = BufWriter::new(file);
    writeln!(writer, "{CSV_HEADER}")?;
    let summary = run_experiment(&config, |record| {
        writeln!(writer, "{}", record.to_csv_line())
    })?;
    writer.flush()?;

    let json = summary_to_json(&summary);
    let rendered = serde_json::to_string_pretty(&json).expect("summary serializes");
    if let Some(path) = summary_path {
        let mut file = File::create(path)
            .map_err(|e| internal(format!("cannot create {}: {e}", path.display())))?;
        writeln!(file, "{rendered}")?;
    }
    say(rendered)
}

fn cmd_char(lambda: &Partition, mu: &Partition) -> Result<(), Failure> {
    if lambda.n() != mu.n() {
        return Err(usage(format!(
            "--lambda partitions {} but --mu partitions {}",
            lambda.n(),
            mu.n()
        )));
    }
    let value = character::mn_character(lambda, mu).map_err(|e| usage(e.to_string()))?;
    say(value)
}

fn cmd_classes(n: u32, top: Option<usize>) -> Result<(), Failure> {
    if n == 0 {
        return Err(usage("--n must be at least 1"));
    }
    let mut lines = vec!["class,size".to_string()];
    for (class, size) in largest_classes(n, top.unwrap_or(usize::MAX)) {
        lines.push(format!("{class},{size}"));
    }
    say(lines.join("\n"))
}

fn cmd_verify(suite: SuiteArg, max_n: Option<u32>) -> Result<(), Failure> {
    let mut checks: Vec<Check> = Vec::new();
    let run_suite = |s: SuiteArg, checks: &mut Vec<Check>| -> Result<(), Failure> {
        match s {
            SuiteArg::Figure1 => checks.extend(suite_reference_surface()),
            SuiteArg::Oracle => checks.extend(suite_oracle(max_n.unwrap_or(5))?),
            SuiteArg::Orthogonality => {
                checks.extend(suite_orthogonality(max_n.unwrap_or(8)))
            }
            SuiteArg::Bounds => checks.extend(suite_bounds(max_n.unwrap_or(7))?),
            SuiteArg::All => unreachable!("expanded by caller"),
        }
        Ok(())
    };
    match suite {
        SuiteArg::All => {
            run_suite(SuiteArg::Figure1, &mut checks)?;
            run_suite(SuiteArg::Orthogonality, &mut checks)?;
            run_suite(SuiteArg::Bounds, &mut checks)?;
            run_suite(SuiteArg::Oracle, &mut checks)?;
        }
        other => run_suite(other, &mut checks)?,
    }

    for check in &checks {
        let status = if check.pass { "[PASS]" } else { "[FAIL]" };
        say(format!("{status} {} ({})", check.name, check.detail))?;
    }
    let failures = checks.iter().filter(|c| !c.pass).count();
    say(format!("{} checks, {failures} failures", checks.len()))?;
    if all_passed(&checks) {
        Ok(())
    } else {
        Err(Failure { code: 4, message: format!("{failures} verification checks failed") })
    }
}
