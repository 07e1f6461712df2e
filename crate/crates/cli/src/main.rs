use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use monosupport::report::{self, ReportOptions};
use monosupport::{parse_input, FieldSpec, Presentation, SamplingConfig};

/// Cohomological support varieties of monomial rings.
#[derive(Parser, Debug)]
#[command(name = "monosupport", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Full report: graphs, support variety, deformation, cid.
    Analyze(Common),
    /// Support variety only.
    Support(Common),
    /// Closed-form classification of components with at most five generators.
    Classify(Common),
    /// Embedded deformation, height, cid and polarization.
    Deform(Common),
    /// GCD graph and Taylor graph, optionally written as DOT files.
    Graph(Common),
    /// Run the built-in fixture suite; exits with status 2 on any mismatch.
    Verify(VerifyArgs),
    /// Coordinate-subspace profile by sampling alone.
    Sample(Common),
}

#[derive(Args, Debug)]
struct Sampling {
    /// Ground field: `rational` or `fp:<prime>`.
    #[arg(long, default_value = "rational", global = true)]
    field: FieldSpec,
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
    /// Samples per containment verdict.
    #[arg(long, default_value_t = 5, global = true)]
    trials: usize,
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
}

#[derive(Args, Debug)]
struct Common {
    /// Input file in the plain grammar or JSON; `-` reads standard input.
    input: PathBuf,
    #[command(flatten)]
    sampling: Sampling,
    /// Directory for gcd.dot and taylor.dot.
    #[arg(long)]
    dot_out: Option<PathBuf>,
    /// Cross-check against symbolic minors (at most four generators).
    #[arg(long)]
    exact_minors: bool,
    /// Drop generators divisible by another one instead of failing.
    #[arg(long)]
    reduce: bool,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    sampling: Sampling,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

impl Sampling {
    fn config(&self) -> SamplingConfig {
        SamplingConfig {
            field: self.field,
            seed: self.seed,
            trials: self.trials,
            ..SamplingConfig::default()
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn read_input(path: &Path, reduce: bool) -> Result<(Presentation, Vec<(usize, usize)>)> {
    let text = if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        s
    } else {
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?
    };
    let (pres, dropped) = parse_input(&text, reduce)?;
    for &(d, by) in &dropped {
        eprintln!("warning: dropped generator {d}, divisible by generator {by}");
    }
    Ok((pres, dropped))
}

fn emit<T: serde::Serialize>(format: Format, doc: &T, text: impl FnOnce(&T) -> String) -> Result<()> {
    match format {
        Format::Json => print!("{}", report::to_json(doc)?),
        Format::Text => print!("{}", text(doc)),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode> {
    let common = match &cli.command {
        Command::Verify(args) => {
            let rep = report::verify(&args.sampling.config())?;
            emit(args.sampling.format, &rep, report::VerifyReport::render_text)?;
            return Ok(if rep.passed() { ExitCode::SUCCESS } else { ExitCode::from(2) });
        }
        Command::Analyze(c)
        | Command::Support(c)
        | Command::Classify(c)
        | Command::Deform(c)
        | Command::Graph(c)
        | Command::Sample(c) => c,
    };
    let (pres, dropped) = read_input(&common.input, common.reduce)?;
    let cfg = common.sampling.config();
    let format = common.sampling.format;
    match &cli.command {
        Command::Analyze(_) => {
            let opts = ReportOptions {
                exact_minors: common.exact_minors,
            };
            let rep = report::analyze(&pres, &dropped, &cfg, opts)?;
            emit(format, &rep, report::AnalysisReport::render_text)?;
        }
        Command::Support(_) => emit(format, &report::support(&pres, &dropped, &cfg)?, report::SupportReport::render_text)?,
        Command::Classify(_) => emit(format, &report::classify(&pres, &dropped)?, report::ClassifyReport::render_text)?,
        Command::Deform(_) => emit(format, &report::deform(&pres, &dropped, &cfg)?, report::DeformReport::render_text)?,
        Command::Sample(_) => emit(format, &report::sample(&pres, &dropped, &cfg)?, report::SampleReport::render_text)?,
        Command::Graph(_) => {
            let rep = report::graph(&pres, &dropped)?;
            if let Some(dir) = &common.dot_out {
                std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
                std::fs::write(dir.join("gcd.dot"), &rep.gcd_dot)?;
                std::fs::write(dir.join("taylor.dot"), &rep.taylor_dot)?;
            }
            emit(format, &rep, report::GraphReport::render_text)?;
        }
        Command::Verify(_) => unreachable!("handled above"),
    }
    Ok(ExitCode::SUCCESS)
}
