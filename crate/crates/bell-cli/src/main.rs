//! `bell`: seeded correlation experiments with machine-readable reports.

use std::path::PathBuf;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use bell_core::contextuality::{find_noncontextual_assignment, simulate_spin1_agreement};
use bell_core::exec::ExecMode;
use bell_core::hidden::{
    chsh_disjoint, chsh_shared_estimate, draw_shared_sample, Angles, ChshEstimate,
    CorrelationEstimate, ModelContextSampler, QuantumContextSampler, SignModel,
};
use bell_core::input::{AlgebraInputDoc, CompatibilityDoc, TriadDoc};
use bell_core::measure::{is_physically_admissible, verify_measure};
use bell_core::quantum::quantum_correlation;
use bell_core::report::{AlgebraReport, ChshReport, KsReport, SamplingMode, Spin1Report};
use bell_core::rng::StreamPlan;

#[derive(Parser)]
#[command(
    name = "bell",
    version,
    about = "Correlation experiments on shared and per-context probability spaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a CHSH experiment and report the four correlations and I.
    Chsh(ChshArgs),
    /// Generate a σ-algebra from a JSON document; optionally verify its
    /// measure and check physical admissibility.
    Algebra(AlgebraArgs),
    /// Search a triad system for a noncontextual {0,1} assignment.
    Ks(KsArgs),
    /// Simulate the two-device spin-1 agreement experiment.
    Spin1(Spin1Args),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModelArg {
    /// Closed-form quantum correlations, no sampling.
    Quantum,
    /// Deterministic hemisphere-sign hidden-variable model.
    LhvSign,
    /// Sample each context from its own singlet joint distribution.
    Contextual,
}

impl ModelArg {
    fn as_str(self) -> &'static str {
        match self {
            ModelArg::Quantum => "quantum",
            ModelArg::LhvSign => "lhv-sign",
            ModelArg::Contextual => "contextual",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SamplingArg {
    /// One state collection evaluated by all four contexts.
    Shared,
    /// Four disjoint state collections, one per context.
    PerContext,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Clone, Copy)]
struct AnglesArg([f64; 4]);

fn parse_angles(text: &str) -> Result<AnglesArg, String> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 4 {
        return Err(format!("expected 4 comma-separated radians, got {}", parts.len()));
    }
    let mut angles = [0.0f64; 4];
    for (slot, part) in parts.iter().enumerate() {
        let value: f64 = part
            .trim()
            .parse()
            .map_err(|_| format!("{part:?} is not a decimal angle in radians"))?;
        if !value.is_finite() {
            return Err(format!("angle {part:?} must be finite"));
        }
        angles[slot] = value;
    }
    Ok(AnglesArg(angles))
}

#[derive(Args)]
struct ChshArgs {
    #[arg(long, value_enum)]
    model: ModelArg,
    #[arg(long, value_enum)]
    sampling: SamplingArg,
    /// Four analyzer angles a,b,a',b' in radians, comma-separated.
    #[arg(long, value_parser = parse_angles)]
    angles: AnglesArg,
    /// Trials per correlation estimate.
    #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
    samples: u64,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,
}

#[derive(Args)]
struct AlgebraArgs {
    /// JSON document: {"space_size", "generators", "tags"?, "weights"?}.
    #[arg(long)]
    input: PathBuf,
    /// JSON document: {"observables", "compatible"}.
    #[arg(long)]
    check_admissible: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,
}

#[derive(Args)]
struct KsArgs {
    /// JSON document: {"directions", "triads"}.
    #[arg(long)]
    triads: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,
}

#[derive(Args)]
struct Spin1Args {
    /// Probability that a type-2 device flips the carried value.
    #[arg(long)]
    flip_prob: f64,
    #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
    samples: u64,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,
}

fn main() {
    if let Err(error) = run() {
        eprintln!("error: {error:#}");
        std::process::exit(1);
    }
}

fn run() -> Result<()> {
    let cli = Cli::parse();
    let mode = configure_workers()?;
    let started = Instant::now();
    let rendered = match cli.command {
        Command::Chsh(args) => run_chsh(&args, mode, started)?,
        Command::Algebra(args) => run_algebra(&args)?,
        Command::Ks(args) => run_ks(&args)?,
        Command::Spin1(args) => run_spin1(&args, mode)?,
    };
    emit(&rendered.text, rendered.out.as_deref())?;
    eprintln!("wall time: {:.1} ms", started.elapsed().as_secs_f64() * 1e3);
    Ok(())
}

struct Rendered {
    text: String,
    out: Option<PathBuf>,
}

/// Applies BELL_THREADS to the worker pool and picks the execution mode.
/// Results are identical in both modes; the cap only limits parallelism.
fn configure_workers() -> Result<ExecMode> {
    let requested = match std::env::var("BELL_THREADS") {
        Ok(text) => {
            let threads: usize = text
                .parse()
                .ok()
                .filter(|&t| t >= 1)
                .with_context(|| format!("BELL_THREADS={text:?} is not a positive integer"))?;
            Some(threads)
        }
        Err(_) => None,
    };
    #[cfg(feature = "parallel")]
    {
        if let Some(threads) = requested {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build_global()
                .context("worker pool already initialized")?;
        }
        Ok(ExecMode::Parallel)
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = requested;
        Ok(ExecMode::Sequential)
    }
}

fn usage_error(message: &str) -> ! {
    eprintln!("error: {message}");
    std::process::exit(2);
}

fn run_chsh(args: &ChshArgs, mode: ExecMode, started: Instant) -> Result<Rendered> {
    let AnglesArg([a, b, a2, b2]) = args.angles;
    let angles = Angles::new(a, b, a2, b2);
    let plan = StreamPlan::new(args.seed);

    let (estimate, certified_disjoint) = match (args.model, args.sampling) {
        (ModelArg::Quantum, SamplingArg::PerContext) => {
            let contexts = angles.contexts();
            let estimates = contexts.map(|context| CorrelationEstimate {
                value: quantum_correlation(context.a, context.b),
                std_error: 0.0,
                n: args.samples,
            });
            (ChshEstimate::from_contexts(estimates), None)
        }
        (ModelArg::Quantum, SamplingArg::Shared) => usage_error(
            "model=quantum has no shared-sample realization; use --sampling per-context",
        ),
        (ModelArg::LhvSign, SamplingArg::Shared) => {
            let states = draw_shared_sample(&plan, args.samples, mode)?;
            (chsh_shared_estimate(mode, &SignModel, &angles, &states)?, None)
        }
        (ModelArg::LhvSign, SamplingArg::PerContext) => {
            let sampler = ModelContextSampler { model: SignModel };
            let outcome = chsh_disjoint(&sampler, &angles, args.samples, &plan, mode)?;
            (outcome.chsh, Some(outcome.certified_disjoint))
        }
        (ModelArg::Contextual, SamplingArg::Shared) => usage_error(
            "model=contextual samples per-context measures; use --sampling per-context",
        ),
        (ModelArg::Contextual, SamplingArg::PerContext) => {
            let outcome =
                chsh_disjoint(&QuantumContextSampler, &angles, args.samples, &plan, mode)?;
            (outcome.chsh, Some(outcome.certified_disjoint))
        }
    };

    let report = ChshReport {
        model: args.model.as_str().to_string(),
        sampling: match args.sampling {
            SamplingArg::Shared => SamplingMode::Shared,
            SamplingArg::PerContext => SamplingMode::PerContext,
        },
        angles: [a, b, a2, b2],
        samples: args.samples,
        seed: args.seed,
        estimate,
        certified_disjoint,
        wall_time_ms: started.elapsed().as_secs_f64() * 1e3,
    };
    Ok(Rendered {
        text: match args.format {
            FormatArg::Json => report.to_json(),
            FormatArg::Csv => report.to_csv(),
        },
        out: args.out.clone(),
    })
}

fn run_algebra(args: &AlgebraArgs) -> Result<Rendered> {
    let text = std::fs::read_to_string(&args.input)
        .with_context(|| format!("reading {}", args.input.display()))?;
    let doc = AlgebraInputDoc::from_json(&text)?;
    let (algebra, measure) = doc.build()?;
    let measure_report = measure.as_ref().map(verify_measure);
    let admissibility = match &args.check_admissible {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            let relation = CompatibilityDoc::from_json(&text)?.build()?;
            Some(is_physically_admissible(&algebra, &relation)?)
        }
        None => None,
    };
    let report = AlgebraReport::new(
        &algebra,
        measure.as_ref().zip(measure_report.as_ref()),
        admissibility.as_ref(),
    );
    Ok(Rendered {
        text: match args.format {
            FormatArg::Json => report.to_json(),
            FormatArg::Csv => report.to_csv(),
        },
        out: args.out.clone(),
    })
}

fn run_ks(args: &KsArgs) -> Result<Rendered> {
    let text = std::fs::read_to_string(&args.triads)
        .with_context(|| format!("reading {}", args.triads.display()))?;
    let system = TriadDoc::from_json(&text)?.build()?;
    let assignment = find_noncontextual_assignment(&system);
    let report = KsReport {
        directions: system.directions().len(),
        triads: system.triads().len(),
        satisfiable: assignment.is_some(),
        assignment: assignment.map(|a| a.as_map(&system)),
    };
    Ok(Rendered {
        text: match args.format {
            FormatArg::Json => report.to_json(),
            FormatArg::Csv => report.to_csv(),
        },
        out: args.out.clone(),
    })
}

fn run_spin1(args: &Spin1Args, mode: ExecMode) -> Result<Rendered> {
    let plan = StreamPlan::new(args.seed);
    let estimate = simulate_spin1_agreement(args.flip_prob, args.samples, &plan, mode)?;
    let report = Spin1Report {
        flip_prob: args.flip_prob,
        samples: args.samples,
        seed: args.seed,
        agreement: estimate.agreement,
        std_error: estimate.std_error,
        marginal_one: estimate.marginal_one,
    };
    Ok(Rendered {
        text: match args.format {
            FormatArg::Json => report.to_json(),
            FormatArg::Csv => report.to_csv(),
        },
        out: args.out.clone(),
    })
}

fn emit(text: &str, out: Option<&std::path::Path>) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)
            .with_context(|| format!("writing {}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}
