use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;

use nullseq_cli::schema::{
    self, ApproxFile, DichotomyFile, OrbitFile, PointsFile, SeparatorFile, SequencesFile,
    TraceFile, WitnessFile,
};
use nullseq_cli::{exit_code, plot, testdata, BUDGET_ENV};
use nullseq_core::ambient::{GroupElement, Radius};
use nullseq_core::duality;
use nullseq_core::monothetic::{
    self, ApproximationOutcome, BuildConfig, BuildOutcome, DEFAULT_SEARCH_BUDGET,
};
use nullseq_core::nullseq::NullSeq;
use nullseq_core::rat::parse_rat;
use nullseq_core::separation::{self, DichotomyResult};

#[derive(Parser)]
#[command(name = "nullseq")]
#[command(about = "Certified computations in groups of null sequences: generator traces, density certificates, dichotomy verdicts, and duality witnesses")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct OutputOpts {
    /// Output path for the JSON artifact.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Omit the timestamp so identical runs are byte-identical.
    #[arg(long)]
    no_timestamp: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Run the staged generator construction and write a trace-v1 file.
    BuildGenerator {
        /// Number of stages to build.
        #[arg(long)]
        stages: usize,
        /// Search budget in candidate attempts (falls back to
        /// NULLSEQ_BUDGET_DEFAULT, then the built-in default).
        #[arg(long)]
        budget: Option<u64>,
        /// Seed echoed into the artifact; the search itself is deterministic.
        #[arg(long, default_value_t = testdata::DEFAULT_SEED)]
        seed: u64,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Re-derive every certificate of a stored artifact from scratch.
    Verify {
        /// Artifact file (trace-v1, witness-v1, dichotomy-v1, separator-v1,
        /// approx-v1, or orbit-v1).
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Find a certified multiple of the trace center near a target.
    Approx {
        /// trace-v1 file with the generator trace.
        #[arg(long = "in")]
        input: PathBuf,
        /// Target sequence in canonical text form, e.g. "[T: 2/5 | tail<=0]".
        #[arg(long, conflicts_with = "target_file")]
        target: Option<String>,
        /// File containing the target in canonical text form.
        #[arg(long)]
        target_file: Option<PathBuf>,
        /// Tolerance, e.g. "3/8".
        #[arg(long)]
        epsilon: String,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Build the Schur-failure witness for an embedded point.
    SchurDemo {
        /// Witness point, e.g. "T:1/3".
        #[arg(long, default_value = "T:1/3")]
        t: String,
        /// Length of the embedded sequence.
        #[arg(long, default_value_t = 20)]
        horizon: usize,
        /// Characters supported on positions up to this bound.
        #[arg(long, default_value_t = 10)]
        max_support: usize,
        /// Character entries range over [-bound, bound] \ {0}.
        #[arg(long, default_value_t = 3)]
        entry_bound: i64,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Cover-or-discrete dichotomy over a finite point family.
    Dichotomy {
        /// Comma-separated canonical points, e.g. "T:0,T:1/10,T:1/5".
        #[arg(long, conflicts_with = "input")]
        points: Option<String>,
        /// JSON file {"points": ["T:0", ...]}.
        #[arg(long = "in")]
        input: Option<PathBuf>,
        /// Scale radius u, e.g. "1/10".
        #[arg(long)]
        epsilon: String,
        /// Cover-size threshold separating the two verdicts.
        #[arg(long)]
        threshold: usize,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Separating character schedule for a non-null sequence in c0(X).
    Gclosed {
        /// JSON file {"sequences": [{descriptor, prefix, tail_bound}, ...]}.
        #[arg(long = "in")]
        input: PathBuf,
        /// Escape threshold delta, e.g. "1/4".
        #[arg(long)]
        delta: String,
        /// Number of random null test sequences to certify against.
        #[arg(long, default_value_t = 50)]
        tests: usize,
        /// Seed for the null test generator.
        #[arg(long, default_value_t = testdata::DEFAULT_SEED)]
        seed: u64,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Orbit gaps of a circle point, with CSV and SVG views.
    OrbitPlot {
        /// Circle point, e.g. "T:2/7".
        #[arg(long)]
        z: String,
        /// Multiple bound.
        #[arg(long)]
        n: i64,
        /// Use the one-sided orbit 0..=n instead of the symmetric one.
        #[arg(long)]
        forward: bool,
        /// CSV output path (sorted multiples and gaps).
        #[arg(long)]
        out_csv: Option<PathBuf>,
        /// SVG output path (orbit points on the circle).
        #[arg(long)]
        out_svg: Option<PathBuf>,
        #[command(flatten)]
        output: OutputOpts,
    },
}

/// Failure with a process exit code.
struct Failure {
    code: i32,
    message: String,
}

type CmdResult = Result<i32, Failure>;

fn fail(code: i32, err: impl std::fmt::Display) -> Failure {
    Failure { code, message: err.to_string() }
}

fn io_fail(err: impl std::fmt::Display) -> Failure {
    fail(exit_code::IO_PARSE, err)
}

fn main() {
    let cli = Cli::parse();
    let code = match dispatch(cli.command) {
        Ok(code) => code,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            failure.code
        }
    };
    std::process::exit(code);
}

fn dispatch(command: Command) -> CmdResult {
    match command {
        Command::BuildGenerator { stages, budget, seed, output } => {
            cmd_build_generator(stages, budget, seed, &output)
        }
        Command::Verify { input } => cmd_verify(&input),
        Command::Approx { input, target, target_file, epsilon, output } => {
            cmd_approx(&input, target, target_file, &epsilon, &output)
        }
        Command::SchurDemo { t, horizon, max_support, entry_bound, output } => {
            cmd_schur_demo(&t, horizon, max_support, entry_bound, &output)
        }
        Command::Dichotomy { points, input, epsilon, threshold, output } => {
            cmd_dichotomy(points, input, &epsilon, threshold, &output)
        }
        Command::Gclosed { input, delta, tests, seed, output } => {
            cmd_gclosed(&input, &delta, tests, seed, &output)
        }
        Command::OrbitPlot { z, n, forward, out_csv, out_svg, output } => {
            cmd_orbit_plot(&z, n, forward, out_csv, out_svg, &output)
        }
    }
}

fn timestamp(output: &OutputOpts) -> Option<String> {
    if output.no_timestamp {
        None
    } else {
        Some(
            SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs().to_string())
                .unwrap_or_else(|_| "0".to_string()),
        )
    }
}

fn write_artifact<T: serde::Serialize>(path: &Path, artifact: &T) -> Result<(), Failure> {
    let text = schema::to_json_string(artifact).map_err(io_fail)?;
    std::fs::write(path, text)
        .with_context(|| format!("write {}", path.display()))
        .map_err(io_fail)
}

fn read_file(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .with_context(|| format!("read {}", path.display()))
        .map_err(io_fail)
}

fn default_budget(flag: Option<u64>) -> u64 {
    flag.or_else(|| std::env::var(BUDGET_ENV).ok().and_then(|v| v.parse().ok()))
        .unwrap_or(DEFAULT_SEARCH_BUDGET)
}

fn cmd_build_generator(
    stages: usize,
    budget: Option<u64>,
    _seed: u64,
    output: &OutputOpts,
) -> CmdResult {
    if stages == 0 {
        eprintln!("warning: building the empty trace (0 stages)");
    }
    let config = BuildConfig { budget: default_budget(budget), ..BuildConfig::default() };
    let outcome = monothetic::build_generator(stages, &config)
        .map_err(|e| fail(exit_code::INVARIANT_FAIL, e))?;

    let (trace, exhausted) = match outcome {
        BuildOutcome::Built(trace) => (trace, None),
        BuildOutcome::Exhausted { partial, failed_stage, attempts } => {
            (partial, Some((failed_stage, attempts)))
        }
    };

    println!("{:<7} {:<24} {:<14} {:<14} slack", "stage", "n_m", "eps_m", "max_gap");
    for stage in &trace.stages {
        println!(
            "{:<7} {:<24} {:<14} {:<14} {}",
            stage.stage,
            stage.multiple_bound.to_string(),
            stage.epsilon.to_string(),
            stage.certificate.max_gap.to_string(),
            stage.slack
        );
    }
    println!("z_center = {}", trace.z_center);

    let artifact = TraceFile::from_core(&trace, timestamp(output));
    if let Some((failed_stage, attempts)) = exhausted {
        if let Some(path) = &output.out {
            let mut partial_path = path.as_os_str().to_owned();
            partial_path.push(".partial");
            write_artifact(Path::new(&partial_path), &artifact)?;
            println!("partial trace saved to {}", Path::new(&partial_path).display());
        }
        return Err(fail(
            exit_code::BUDGET,
            format!("budget exhausted at stage {failed_stage} after {attempts} attempts"),
        ));
    }
    if let Some(path) = &output.out {
        write_artifact(path, &artifact)?;
        println!("trace written to {}", path.display());
    }
    Ok(exit_code::OK)
}

fn cmd_verify(input: &Path) -> CmdResult {
    let text = read_file(input)?;
    let probe: serde_json::Value = serde_json::from_str(&text).map_err(io_fail)?;
    let format = probe
        .get("format")
        .and_then(|f| f.as_str())
        .ok_or_else(|| io_fail("artifact has no format field"))?
        .to_string();

    match format.as_str() {
        schema::TRACE_FORMAT => {
            let file: TraceFile = schema::from_json_str(&text).map_err(io_fail)?;
            let trace = file.to_core().map_err(io_fail)?;
            let report = monothetic::verify_trace(&trace)
                .map_err(|e| fail(exit_code::INVARIANT_FAIL, e))?;
            for check in &report.checks {
                println!(
                    "{} {:<34} {}",
                    if check.passed { "pass" } else { "FAIL" },
                    check.name,
                    check.detail
                );
            }
            if report.passed() {
                println!("trace verified: all {} checks passed", report.checks.len());
                Ok(exit_code::OK)
            } else {
                Err(fail(exit_code::INVARIANT_FAIL, "trace verification failed"))
            }
        }
        other => {
            let outcome = match other {
                schema::WITNESS_FORMAT => schema::from_json_str::<WitnessFile>(&text)
                    .map_err(io_fail)?
                    .verify(),
                schema::DICHOTOMY_FORMAT => schema::from_json_str::<DichotomyFile>(&text)
                    .map_err(io_fail)?
                    .verify(),
                schema::SEPARATOR_FORMAT => schema::from_json_str::<SeparatorFile>(&text)
                    .map_err(io_fail)?
                    .verify(),
                schema::APPROX_FORMAT => {
                    schema::from_json_str::<ApproxFile>(&text).map_err(io_fail)?.verify()
                }
                schema::ORBIT_FORMAT => {
                    schema::from_json_str::<OrbitFile>(&text).map_err(io_fail)?.verify()
                }
                unknown => return Err(io_fail(format!("unknown artifact format {unknown:?}"))),
            };
            match outcome {
                Ok(()) => {
                    println!("{format} verified: replay reproduces every recorded value");
                    Ok(exit_code::OK)
                }
                Err(e) => Err(fail(exit_code::INVARIANT_FAIL, e)),
            }
        }
    }
}

fn cmd_approx(
    input: &Path,
    target: Option<String>,
    target_file: Option<PathBuf>,
    epsilon: &str,
    output: &OutputOpts,
) -> CmdResult {
    let text = read_file(input)?;
    let file: TraceFile = schema::from_json_str(&text).map_err(io_fail)?;
    let trace = file.to_core().map_err(io_fail)?;

    let target_text = match (target, target_file) {
        (Some(t), None) => t,
        (None, Some(path)) => read_file(&path)?.trim().to_string(),
        _ => return Err(io_fail("provide exactly one of --target or --target-file")),
    };
    let target: NullSeq = target_text.parse().map_err(io_fail)?;
    let epsilon = parse_rat(epsilon).map_err(io_fail)?;

    match monothetic::approximate_target(&trace, &target, &epsilon)
        .map_err(|e| fail(exit_code::INVARIANT_FAIL, e))?
    {
        ApproximationOutcome::Approximated(approx) => {
            println!("k = {}", approx.multiple);
            println!("stage = {}", approx.stage);
            println!("distance in [{}, {}]", approx.distance.lo, approx.distance.hi);
            if let Some(path) = &output.out {
                let artifact = ApproxFile::from_core(
                    &target,
                    &epsilon,
                    &approx,
                    &trace.z_center,
                    timestamp(output),
                );
                write_artifact(path, &artifact)?;
                println!("certificate written to {}", path.display());
            }
            Ok(exit_code::OK)
        }
        ApproximationOutcome::InsufficientDepth { required_stages } => {
            let needed = match required_stages {
                Some(m) => format!("required stages: {m}"),
                None => "no finite depth reaches this tolerance (tail bound too large)".to_string(),
            };
            Err(fail(
                exit_code::INSUFFICIENT_DEPTH,
                format!("trace depth {} insufficient; {needed}", trace.depth()),
            ))
        }
    }
}

fn cmd_schur_demo(
    t: &str,
    horizon: usize,
    max_support: usize,
    entry_bound: i64,
    output: &OutputOpts,
) -> CmdResult {
    let point: GroupElement = t.parse().map_err(io_fail)?;
    let family = testdata::singleton_char_family(max_support, entry_bound);
    let report = duality::schur_witness(&point, horizon, &family)
        .map_err(|e| fail(exit_code::INVARIANT_FAIL, e))?;
    println!(
        "embedded sequence of {} up to n = {}: uniformly discrete at exact separation {}",
        point, horizon, report.separation
    );
    println!(
        "pairings against {} characters vanish exactly for n > {} ({} pairwise distances checked)",
        family.len(),
        report.vanish_after,
        report.pairs_checked
    );
    if let Some(path) = &output.out {
        let artifact = WitnessFile::from_core(&report, &family, timestamp(output));
        write_artifact(path, &artifact)?;
        println!("witness written to {}", path.display());
    }
    Ok(exit_code::OK)
}

fn cmd_dichotomy(
    points: Option<String>,
    input: Option<PathBuf>,
    epsilon: &str,
    threshold: usize,
    output: &OutputOpts,
) -> CmdResult {
    let texts: Vec<String> = match (points, input) {
        (Some(inline), None) => inline
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(str::to_string)
            .collect(),
        (None, Some(path)) => {
            let file: PointsFile = schema::from_json_str(&read_file(&path)?).map_err(io_fail)?;
            file.points
        }
        _ => return Err(io_fail("provide exactly one of --points or --in")),
    };
    let elements = texts
        .iter()
        .map(|t| t.parse::<GroupElement>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(io_fail)?;
    let scale =
        Radius::new(parse_rat(epsilon).map_err(io_fail)?).map_err(io_fail)?;

    let result = separation::dichotomy(&elements, &scale, threshold)
        .map_err(|e| fail(exit_code::INVARIANT_FAIL, e))?;
    match &result {
        DichotomyResult::Cover { centers, radius, checked_pairs } => {
            println!(
                "cover: {} centers at radius {} ({} distances checked)",
                centers.len(),
                radius,
                checked_pairs
            );
        }
        DichotomyResult::DiscreteWitness { points, separation, checked_pairs } => {
            println!(
                "discrete witness: {} points pairwise >= {} apart ({} distances checked)",
                points.len(),
                separation,
                checked_pairs
            );
        }
    }
    if let Some(path) = &output.out {
        let artifact =
            DichotomyFile::from_core(&result, &elements, threshold, &scale, timestamp(output));
        write_artifact(path, &artifact)?;
        println!("verdict written to {}", path.display());
    }
    Ok(exit_code::OK)
}

fn cmd_gclosed(
    input: &Path,
    delta: &str,
    tests: usize,
    seed: u64,
    output: &OutputOpts,
) -> CmdResult {
    let file: SequencesFile = schema::from_json_str(&read_file(input)?).map_err(io_fail)?;
    let ys = file
        .sequences
        .iter()
        .map(|s| s.to_core())
        .collect::<Result<Vec<_>, _>>()
        .map_err(io_fail)?;
    let delta = parse_rat(delta).map_err(io_fail)?;

    let schedule = duality::gclosed_separator(&ys, &delta)
        .map_err(|e| fail(exit_code::INVARIANT_FAIL, e))?;
    println!(
        "{} separating characters; pairings stay >= {} from the trivial pairing",
        schedule.chars.len(),
        schedule.separation_bound
    );

    let mut rng = testdata::rng(seed);
    let mut certificates = Vec::with_capacity(tests);
    for index in 0..tests {
        let test = testdata::random_null_test(&mut rng, ys.len());
        let cert = schedule
            .certify_null(&test)
            .map_err(|e| fail(exit_code::INVARIANT_FAIL, e))?;
        if cert.deviations[cert.vanish_after..].iter().any(|d| !num_traits::Zero::is_zero(d)) {
            return Err(fail(
                exit_code::INVARIANT_FAIL,
                format!("null test {index} kept a nonzero deviation past its vanish index"),
            ));
        }
        certificates.push(cert);
    }
    println!("{tests} random null test sequences: deviations vanish past a finite index");

    if let Some(path) = &output.out {
        let artifact =
            SeparatorFile::from_core(&schedule, &ys, &certificates, timestamp(output));
        write_artifact(path, &artifact)?;
        println!("schedule written to {}", path.display());
    }
    Ok(exit_code::OK)
}

fn cmd_orbit_plot(
    z: &str,
    n: i64,
    forward: bool,
    out_csv: Option<PathBuf>,
    out_svg: Option<PathBuf>,
    output: &OutputOpts,
) -> CmdResult {
    let point: GroupElement = z.parse().map_err(io_fail)?;
    let n = BigInt::from(n);
    let orbit = if forward {
        monothetic::forward_orbit_gaps(&point, &n)
    } else {
        monothetic::orbit_gaps(&point, &n)
    }
    .map_err(|e| fail(exit_code::INVARIANT_FAIL, e))?;

    println!(
        "{} multiples, max gap {} ({} distinct gap lengths)",
        orbit.multiples.len(),
        orbit.max_gap,
        orbit.distinct_gap_values().len()
    );
    if let Some(path) = &out_csv {
        std::fs::write(path, plot::orbit_csv(&orbit))
            .with_context(|| format!("write {}", path.display()))
            .map_err(io_fail)?;
        println!("CSV written to {}", path.display());
    }
    if let Some(path) = &out_svg {
        std::fs::write(path, plot::orbit_svg(z, &n, &orbit))
            .with_context(|| format!("write {}", path.display()))
            .map_err(io_fail)?;
        println!("SVG written to {}", path.display());
    }
    if let Some(path) = &output.out {
        let artifact = OrbitFile::from_core(&point, &n, forward, &orbit, timestamp(output));
        write_artifact(path, &artifact)?;
        println!("orbit report written to {}", path.display());
    }
    Ok(exit_code::OK)
}
