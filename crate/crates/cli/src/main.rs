//! gaugelab command-line interface.
//!
//! Exit codes are stable: 0 success/certified, 1 property failure,
//! 2 configuration or infrastructure error, 3 uncertified run.

mod config;
mod output;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use gaugelab_core::catalog::{catalog_get, Catalog};
use gaugelab_core::harness::{suites, Harness, PropertyReport};
use gaugelab_core::{integrate_sequential, StoppingRule};

use config::{
    parse_float_list, parse_interval, parse_params, GaugeSpec, IntegrateConfig, ParamValue,
    PolicySpec, VerifyConfig,
};

#[derive(Parser)]
#[command(
    name = "gaugelab",
    version,
    about = "Gauge-based sequential integration driver and property harness"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the sequential driver on a catalog integrand.
    Integrate(IntegrateArgs),
    /// Run property-check suites over the catalog.
    Verify(VerifyArgs),
    /// Print the catalog manifest.
    Catalog(CatalogArgs),
}

#[derive(Args)]
struct IntegrateArgs {
    /// Catalog id of the integrand.
    #[arg(long = "fn")]
    function: String,

    /// Scalar parameters, `key=value` comma-separated.
    #[arg(long)]
    params: Option<String>,

    /// Polynomial coefficients (ascending powers), comma-separated.
    /// Shorthand for the `coeffs` list parameter.
    #[arg(long)]
    coeffs: Option<String>,

    /// Integration interval `a:b`.
    #[arg(long)]
    interval: String,

    /// Gauge-sequence spec (halving, thirding, sloped, dirichlet[:eps=..,depth=..],
    /// cubic[:scale=..,zero=..], quartic[:..], min(a,b)).
    #[arg(long, default_value = "halving")]
    gauge: String,

    /// Cauchy-gap certification threshold.
    #[arg(long, default_value_t = 1e-6)]
    tau: f64,

    /// Last gauge index to try before reporting uncertified.
    #[arg(long, default_value_t = 40)]
    max_index: u32,

    /// Independent partitions per gauge index.
    #[arg(long, default_value_t = 3)]
    replicates: usize,

    /// Tag policy (midpoint, left, right, random, hint-random, hint-midpoint).
    #[arg(long, default_value = "hint-random")]
    policy: String,

    /// Random seed (GAUGELAB_SEED overrides).
    #[arg(long, default_value_t = 42)]
    seed: u64,

    /// Output format: json, csv or table.
    #[arg(long, default_value = "json")]
    format: String,

    /// Write the report here (otherwise only the summary is printed).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite name: algebraic, ftc, parts, henstock-lemma, uniform,
    /// monotone, darboux-bracket, or all.
    #[arg(long, default_value = "all")]
    suite: String,

    /// Restrict the ftc suite to one pair (parabola, cubic, trig,
    /// pathological).
    #[arg(long)]
    pair: Option<String>,

    /// Random seed (GAUGELAB_SEED overrides).
    #[arg(long, default_value_t = 42)]
    seed: u64,

    /// Write the merged report here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CatalogArgs {
    /// Show a single entry.
    #[arg(long)]
    id: Option<String>,

    /// Output format: json or table.
    #[arg(long, default_value = "table")]
    format: String,
}

const EXIT_OK: u8 = 0;
const EXIT_PROPERTY_FAILURE: u8 = 1;
const EXIT_INFRASTRUCTURE: u8 = 2;
const EXIT_UNCERTIFIED: u8 = 3;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Integrate(args) => cmd_integrate(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Catalog(args) => cmd_catalog(args),
    };
    match code {
        Ok(code) => ExitCode::from(code),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(EXIT_INFRASTRUCTURE)
        }
    }
}

/// `GAUGELAB_SEED` overrides a `--seed` flag when set.
fn resolve_seed(flag: u64) -> Result<u64, String> {
    match std::env::var("GAUGELAB_SEED") {
        Ok(value) => value
            .trim()
            .parse()
            .map_err(|e| format!("GAUGELAB_SEED is not an integer: {e}")),
        Err(_) => Ok(flag),
    }
}

fn cmd_integrate(args: IntegrateArgs) -> Result<u8, String> {
    let mut params: BTreeMap<String, ParamValue> = match &args.params {
        Some(text) => parse_params(text)?,
        None => BTreeMap::new(),
    };
    if let Some(coeffs) = &args.coeffs {
        params.insert("coeffs".into(), ParamValue::List(parse_float_list(coeffs)?));
    }
    let config = IntegrateConfig {
        function: args.function.clone(),
        params,
        interval: parse_interval(&args.interval)?,
        gauge: GaugeSpec::parse(&args.gauge)?,
        tau: args.tau,
        max_index: args.max_index,
        replicates: args.replicates,
        policy: PolicySpec::parse(&args.policy)?,
        seed: resolve_seed(args.seed)?,
    };
    if config.tau <= 0.0 {
        return Err("tau must be positive".into());
    }
    if config.replicates < 2 {
        return Err("replicates must be at least 2".into());
    }
    if config.max_index < 1 {
        return Err("max-index must be at least 1".into());
    }

    let interval = config.interval().map_err(|e| e.to_string())?;
    let (integrand, _) =
        catalog_get(&config.function, &config.catalog_params()).map_err(|e| e.to_string())?;
    let gauges = config.gauge.to_sequence(interval);
    let rule = StoppingRule::new(config.tau, config.max_index, config.replicates);
    let policy = config.policy.to_policy(config.seed);

    let report = integrate_sequential(&integrand, &gauges, interval, &rule, &policy, config.seed)
        .map_err(|e| e.to_string())?;

    let rendered = match args.format.as_str() {
        "json" => output::integrate_report_json(&config, &report),
        "csv" => output::integrate_report_csv(&report),
        "table" => output::integrate_report_table(&report),
        other => return Err(format!("unknown format `{other}`")),
    };
    match &args.out {
        Some(path) => output::write_atomic(path, &rendered).map_err(|e| e.to_string())?,
        None if args.format != "json" => print!("{rendered}"),
        None => {}
    }
    println!("{}", output::summary_line(&report));
    Ok(if report.certified {
        EXIT_OK
    } else {
        EXIT_UNCERTIFIED
    })
}

fn cmd_verify(args: VerifyArgs) -> Result<u8, String> {
    let suites_to_run =
        suites::Suite::parse(&args.suite).ok_or(format!("unknown suite `{}`", args.suite))?;
    if let Some(pair) = &args.pair {
        if !suites_to_run.contains(&suites::Suite::Ftc) {
            return Err(format!("--pair {pair} only applies to the ftc suite"));
        }
    }
    let config = VerifyConfig {
        suite: args.suite.clone(),
        pair: args.pair.clone(),
        seed: resolve_seed(args.seed)?,
    };

    let harness = Harness::new();
    let mut reports: Vec<PropertyReport> = Vec::new();
    for (i, suite) in suites_to_run.iter().enumerate() {
        let suite_seed = gaugelab_core::seeded::derive(config.seed, i as u64);
        let batch = if *suite == suites::Suite::Ftc && config.pair.is_some() {
            suites::ftc_suite(&harness, suite_seed, config.pair.as_deref())
        } else {
            suites::run_suite(&harness, *suite, suite_seed)
        }
        .map_err(|e| e.to_string())?;
        reports.extend(batch);
    }

    for report in &reports {
        println!("{}", report.one_line());
    }
    let rendered = output::verify_report_json(&config, &reports);
    if let Some(path) = &args.out {
        output::write_atomic(path, &rendered).map_err(|e| e.to_string())?;
    }
    let passed = reports.iter().all(|r| r.passed);
    println!(
        "verify: {} ({} reports)",
        if passed { "PASS" } else { "FAIL" },
        reports.len()
    );
    Ok(if passed { EXIT_OK } else { EXIT_PROPERTY_FAILURE })
}

fn cmd_catalog(args: CatalogArgs) -> Result<u8, String> {
    let manifest = Catalog::global().manifest();
    let selected: Vec<_> = match &args.id {
        Some(id) => {
            let hit: Vec<_> = manifest.into_iter().filter(|m| m.id == id).collect();
            if hit.is_empty() {
                return Err(format!("unknown catalog id `{id}`"));
            }
            hit
        }
        None => manifest,
    };
    match args.format.as_str() {
        "json" => println!(
            "{}",
            serde_json::to_string_pretty(&selected).expect("manifest serializes")
        ),
        "table" => {
            println!("{:<28} {:<12} params", "id", "reference");
            for entry in &selected {
                println!(
                    "{:<28} {:<12} {}",
                    entry.id, entry.reference_rule, entry.params
                );
            }
        }
        other => return Err(format!("unknown format `{other}`")),
    }
    Ok(EXIT_OK)
}
