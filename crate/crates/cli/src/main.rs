//! `attrisk` command-line interface.
//!
//! Exit codes: 0 success, 1 runtime failure, 2 usage or configuration error.
//! Reports go to standard output (or `--out`); diagnostics go to standard
//! error.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use attrisk::attribution::{analytic_product_moments, propagate_attribution_with};
use attrisk::scenario::{
    parse_scenario, render_json, render_report, resolve_scenario, Format, LoadOptions, Override, ScenarioConfig,
    ScenarioError,
};
use attrisk::selftest::{run_selftest, CheckStatus};
use attrisk::uq::{Family, Tail, UncertainScalar};
use attrisk::{Execution, DEFAULT_SAMPLES, DEFAULT_SEED};
use clap::{Args, Parser, Subcommand, ValueEnum};

const SEED_ENV: &str = "ATTRISK_SEED";

#[derive(Debug, Parser)]
#[command(
    name = "attrisk",
    version,
    about = "Attribute excess outcome risk to the anthropogenic part of a climate anomaly"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a scenario and print the attribution report (human text by default).
    Attribute(ScenarioArgs),
    /// Run a scenario and emit the full report bundle with plot data (JSON by default).
    Report(ScenarioArgs),
    /// Propagate a dose-response coefficient and an anthropogenic anomaly given inline.
    Propagate(PropagateArgs),
    /// Replay the bundled reference scenario and check every headline number.
    Selftest(SelftestArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OutputFormat {
    Human,
    Csv,
    Json,
}

impl From<OutputFormat> for Format {
    fn from(f: OutputFormat) -> Self {
        match f {
            OutputFormat::Human => Format::Human,
            OutputFormat::Csv => Format::Csv,
            OutputFormat::Json => Format::Json,
        }
    }
}

#[derive(Debug, Args)]
struct RunArgs {
    /// Override a scenario field, e.g. `--set mc.samples=100000` (repeatable).
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    /// Monte Carlo seed (beats `--set mc.seed` and the scenario file).
    #[arg(long)]
    seed: Option<u64>,
    /// Monte Carlo sample count.
    #[arg(long)]
    samples: Option<usize>,
    /// Disable multi-threading. Results are identical either way.
    #[arg(long)]
    sequential: bool,
}

#[derive(Debug, Args)]
struct ScenarioArgs {
    /// Scenario file, or the name of a bundled scenario such as `syria_2010`.
    scenario: String,
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
    /// Write the report here instead of standard output.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Debug, Args)]
struct PropagateArgs {
    /// Dose-response coefficient, percent excess risk per σ.
    #[arg(long, allow_hyphen_values = true)]
    beta: f64,
    /// One standard deviation of the coefficient.
    #[arg(long, default_value_t = 0.0)]
    beta_sd: f64,
    /// Anthropogenic anomaly in σ.
    #[arg(long, allow_hyphen_values = true)]
    dprime: f64,
    /// One standard deviation of the anthropogenic anomaly.
    #[arg(long, default_value_t = 0.0)]
    dprime_sd: f64,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: usize,
    #[arg(long, value_enum, default_value_t = OutputFormat::Human)]
    format: OutputFormat,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    #[arg(long)]
    sequential: bool,
}

#[derive(Debug, Args)]
struct SelftestArgs {
    /// Scenario to replay.
    #[arg(long, default_value = "syria_2010")]
    scenario: String,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Runtime(String),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Runtime(_) => 1,
            Failure::Usage(_) => 2,
        }
    }
}

impl From<ScenarioError> for Failure {
    fn from(e: ScenarioError) -> Self {
        if e.is_config_error() {
            Failure::Usage(e.to_string())
        } else {
            Failure::Runtime(e.to_string())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    let outcome = match cli.command {
        Command::Attribute(args) => cmd_scenario(args, Format::Human),
        Command::Report(args) => cmd_scenario(args, Format::Json),
        Command::Propagate(args) => cmd_propagate(args),
        Command::Selftest(args) => cmd_selftest(args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            match &failure {
                Failure::Usage(m) => eprintln!("error: {m}"),
                Failure::Runtime(m) => eprintln!("error: {m}"),
            }
            ExitCode::from(failure.exit_code())
        }
    }
}

fn execution(sequential: bool) -> Execution {
    if sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    }
}

fn env_seed() -> Result<Option<u64>, Failure> {
    match std::env::var(SEED_ENV) {
        Ok(raw) => raw
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| Failure::Usage(format!("{SEED_ENV} must be an unsigned integer, got `{raw}`"))),
        Err(_) => Ok(None),
    }
}

/// Precedence, highest first: `--seed`/`--samples`, `--set`, the scenario
/// file, `ATTRISK_SEED`, built-in defaults.
fn load(spec: &str, run: &RunArgs) -> Result<ScenarioConfig, Failure> {
    let (text, _label) = resolve_scenario(spec)?;
    let mut overrides = run
        .overrides
        .iter()
        .map(|o| o.parse::<Override>())
        .collect::<Result<Vec<_>, _>>()?;
    if let Some(seed) = run.seed {
        let seed = i64::try_from(seed).map_err(|_| Failure::Usage("--seed exceeds the i64 range".into()))?;
        overrides.push(Override::new("mc.seed", seed.into())?);
    }
    if let Some(samples) = run.samples {
        let samples = i64::try_from(samples).map_err(|_| Failure::Usage("--samples is too large".into()))?;
        overrides.push(Override::new("mc.samples", samples.into())?);
    }
    let opts = LoadOptions {
        overrides,
        fallback_seed: env_seed()?,
    };
    Ok(parse_scenario(&text, &opts)?)
}

fn write_output(out: Option<&PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => {
            fs::write(path, text).map_err(|e| Failure::Runtime(format!("cannot write {}: {e}", path.display())))
        }
        None => {
            let mut stdout = io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| Failure::Runtime(format!("cannot write report: {e}")))
        }
    }
}

fn cmd_scenario(args: ScenarioArgs, default_format: Format) -> Result<(), Failure> {
    let cfg = load(&args.scenario, &args.run)?;
    let bundle = attrisk::scenario::run_scenario_with(&cfg, execution(args.run.sequential))?;
    for w in &bundle.warnings {
        eprintln!("warning: {w}");
    }
    let format = args.format.map(Format::from).unwrap_or(default_format);
    write_output(args.out.as_ref(), &render_report(&bundle, format))
}

fn cmd_propagate(args: PropagateArgs) -> Result<(), Failure> {
    let usage = |e: attrisk::Error| Failure::Usage(e.to_string());
    let beta = UncertainScalar::from_spread(args.beta, args.beta_sd, "percent-per-sigma").map_err(usage)?;
    let dprime = UncertainScalar::from_spread(args.dprime, args.dprime_sd, "sigma").map_err(usage)?;
    if args.samples < 2 {
        return Err(Failure::Usage(format!(
            "--samples must be at least 2, got {}",
            args.samples
        )));
    }
    let seed = match args.seed {
        Some(seed) => seed,
        None => env_seed()?.unwrap_or(DEFAULT_SEED),
    };
    let runtime = |e: attrisk::Error| Failure::Runtime(e.to_string());
    let dist =
        propagate_attribution_with(&beta, &dprime, seed, args.samples, execution(args.sequential)).map_err(runtime)?;
    let summary = dist.summarize().map_err(runtime)?;
    let p_value = dist.tail_probability(0.0, Tail::AtOrBelow).map_err(runtime)?;
    let variance = dist.variance();
    let analytic = if beta.family() == Family::Normal && dprime.family() == Family::Normal {
        analytic_product_moments(&beta, &dprime).ok()
    } else {
        None
    };

    let text = match args.format {
        OutputFormat::Json => render_json(&serde_json::json!({
            "seed": seed,
            "samples": args.samples,
            "summary": summary,
            "variance": variance,
            "p_value": p_value,
            "analytic_mean": analytic.map(|m| m.mean),
            "analytic_variance": analytic.map(|m| m.variance),
        })),
        OutputFormat::Csv => {
            let f = |x: f64| attrisk::scenario::format_sig(x, 6);
            let mut rows = vec!["statistic,value".to_owned()];
            for (name, v) in [
                ("mean", summary.mean),
                ("variance", variance),
                ("p005", summary.p005),
                ("p05", summary.p05),
                ("q25", summary.q25),
                ("median", summary.median),
                ("q75", summary.q75),
                ("p95", summary.p95),
                ("p995", summary.p995),
                ("p_value", p_value),
            ] {
                rows.push(format!("{name},{}", f(v)));
            }
            rows.join("\n") + "\n"
        }
        OutputFormat::Human => {
            let mut s = format!("beta x dprime, percent (n = {}, seed = {seed})\n", args.samples);
            s += &format!("  mean       {:.4}\n", summary.mean);
            s += &format!("  variance   {variance:.4}\n");
            s += &format!("  median     {:.4}\n", summary.median);
            s += &format!("  50% range  [{:.4}, {:.4}]\n", summary.q25, summary.q75);
            s += &format!("  90% range  [{:.4}, {:.4}]\n", summary.p05, summary.p95);
            s += &format!("  99% range  [{:.4}, {:.4}]\n", summary.p005, summary.p995);
            s += &format!(
                "  p-value (excess <= 0)  {}\n",
                attrisk::scenario::format_sig(p_value, 3)
            );
            if let Some(m) = analytic {
                s += &format!("  analytic mean {:.4}, variance {:.4}\n", m.mean, m.variance);
            }
            s
        }
    };
    write_output(args.out.as_ref(), &text)
}

fn cmd_selftest(args: SelftestArgs) -> Result<(), Failure> {
    let cfg = load(&args.scenario, &args.run)?;
    let report = run_selftest(&cfg, execution(args.run.sequential))?;
    write_output(None, &report.render_table())?;
    if report.checks.iter().any(|c| c.status == CheckStatus::WidenedPass) {
        eprintln!(
            "warning: n = {} is below {DEFAULT_SAMPLES}; Monte Carlo tolerances widened by {:.2}x",
            report.samples, report.widening
        );
    }
    if report.passed() {
        Ok(())
    } else {
        let names: Vec<&str> = report.failures().map(|c| c.name).collect();
        Err(Failure::Runtime(format!("selftest failed: {}", names.join(", "))))
    }
}
