use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use nge::sweep::{gnuplot_script, parse_key_values, run_sweep, to_csv, SweepSpec};
use nge::teleport::thresholds::{DEFAULT_BRACKET, DEFAULT_TOLERANCE};
use nge::teleport::{threshold_scan, QuadratureRule, Route, ThresholdKind, DEFAULT_NODES};
use nge::{table, validate, DEFAULT_CUTOFF};

const EXIT_FAILURE: u8 = 1;
const EXIT_INVALID_SPEC: u8 = 2;
const EXIT_NOT_CONVERGED: u8 = 3;

/// Entanglement, EPR correlation and teleportation fidelity of
/// photon-subtracted non-Gaussian two-mode resources.
#[derive(Parser, Debug)]
#[command(name = "nge", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sweep |alpha| (or lambda for TMSS families) and write metrics as CSV.
    Sweep(Box<SweepArgs>),
    /// Locate the fidelity and EPR crossing points by bisection.
    Thresholds(ThresholdArgs),
    /// Classify reference resources by fidelity, entanglement and EPR correlation.
    Table1(Table1Args),
    /// Cross-check closed forms against Fock-space numerics.
    Validate,
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// key=value configuration file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// PACS_SPLIT, ODD_CAT_SPLIT, TMSS, TMSS_SUB_A, TMSS_ADD_AB or TMSS_ADDSUB_AB.
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    alpha_min: Option<f64>,
    #[arg(long)]
    alpha_max: Option<f64>,
    #[arg(long)]
    alpha_step: Option<f64>,
    /// Comma-separated phases in radians, or `auto` to optimize per row.
    #[arg(long)]
    phase: Option<String>,
    /// Comma-separated subtraction totals n+m.
    #[arg(long)]
    nm: Option<String>,
    #[arg(long)]
    cutoff: Option<usize>,
    /// Comma-separated subset of entropy, epr, fidelity.
    #[arg(long)]
    metrics: Option<String>,
    #[arg(long)]
    quadrature_nodes: Option<usize>,
    /// Output CSV path (stdout if absent).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write a gnuplot script to this path.
    #[arg(long)]
    gnuplot: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum RouteArg {
    Closed,
    Numeric,
    Both,
}

#[derive(Args, Debug)]
struct ThresholdArgs {
    /// Bisection width on |alpha|.
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    tolerance: f64,
    /// Photon-number cutoff for the numeric route.
    #[arg(long, default_value_t = DEFAULT_CUTOFF)]
    cutoff: usize,
    #[arg(long, value_enum, default_value_t = RouteArg::Both)]
    route: RouteArg,
}

#[derive(Args, Debug)]
struct Table1Args {
    #[arg(long, default_value_t = DEFAULT_NODES)]
    quadrature_nodes: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e:#}");
        return ExitCode::from(EXIT_INVALID_SPEC);
    }
    let outcome = match cli.command {
        Command::Sweep(args) => sweep(*args),
        Command::Thresholds(args) => thresholds(args),
        Command::Table1(args) => table1(args),
        Command::Validate => validate_cmd(),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            let code = match e.downcast_ref::<nge::Error>() {
                Some(nge::Error::InvalidSpec(_)) => EXIT_INVALID_SPEC,
                _ => EXIT_FAILURE,
            };
            ExitCode::from(code)
        }
    }
}

fn configure_threads() -> Result<()> {
    let Ok(value) = std::env::var("NGE_THREADS") else {
        return Ok(());
    };
    let threads: usize = value.trim().parse().map_err(|_| {
        nge::Error::InvalidSpec(format!(
            "NGE_THREADS must be a positive integer, got '{value}'"
        ))
    })?;
    if threads == 0 {
        return Err(nge::Error::InvalidSpec("NGE_THREADS must be positive".into()).into());
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .context("configuring the thread pool")
}

fn sweep_map(args: &SweepArgs) -> Result<BTreeMap<String, String>> {
    let mut map = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("reading config {}", path.display()))?;
            parse_key_values(&text)?
        }
        None => BTreeMap::new(),
    };
    // the output path may come from the file but is not part of the sweep
    map.remove("out");
    map.remove("gnuplot");
    let mut set = |k: &str, v: Option<String>| {
        if let Some(v) = v {
            map.insert(k.to_string(), v);
        }
    };
    set("family", args.family.clone());
    set("alpha_min", args.alpha_min.map(|v| v.to_string()));
    set("alpha_max", args.alpha_max.map(|v| v.to_string()));
    set("alpha_step", args.alpha_step.map(|v| v.to_string()));
    set("phase", args.phase.clone());
    set("nm", args.nm.clone());
    set("cutoff", args.cutoff.map(|v| v.to_string()));
    set("metrics", args.metrics.clone());
    set(
        "quadrature_nodes",
        args.quadrature_nodes.map(|v| v.to_string()),
    );
    Ok(map)
}

fn config_value(args: &SweepArgs, key: &str) -> Result<Option<PathBuf>> {
    let Some(path) = &args.config else {
        return Ok(None);
    };
    let text =
        fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
    Ok(parse_key_values(&text)?.get(key).map(|v| resolve(path, v)))
}

/// Paths in a config file are relative to the file.
fn resolve(config: &Path, value: &str) -> PathBuf {
    let p = PathBuf::from(value);
    if p.is_absolute() {
        p
    } else {
        config.parent().unwrap_or(Path::new(".")).join(p)
    }
}

fn sweep(args: SweepArgs) -> Result<u8> {
    let spec = SweepSpec::from_map(&sweep_map(&args)?)?;
    for w in spec.subtraction_totals.iter().filter(|&&nm| nm > 4) {
        eprintln!("warning: n+m = {w} exceeds the validated range (<= 4); check convergence");
    }
    let start = Instant::now();
    let records = run_sweep(&spec)?;
    let csv = to_csv(&records);
    let out = match args.out.clone() {
        Some(p) => Some(p),
        None => config_value(&args, "out")?,
    };
    match &out {
        Some(path) => {
            fs::write(path, &csv).with_context(|| format!("writing {}", path.display()))?
        }
        None => io::stdout().write_all(csv.as_bytes())?,
    }
    let failed: Vec<_> = records.iter().filter(|r| !r.converged).collect();
    for r in &failed {
        eprintln!(
            "warning: {} alpha={} n+m={}: {}",
            r.family,
            r.alpha_mod,
            r.n_plus_m,
            r.reason.as_deref().unwrap_or("not converged")
        );
    }
    let gnuplot = match args.gnuplot.clone() {
        Some(p) => Some(p),
        None => config_value(&args, "gnuplot")?,
    };
    if let Some(script_path) = gnuplot {
        let csv_name = out
            .as_ref()
            .map(|p| p.display().to_string())
            .unwrap_or_else(|| "sweep.csv".to_string());
        let stem = script_path.with_extension("");
        let mut script = String::new();
        for &metric in &spec.metrics {
            script.push_str("set terminal pngcairo size 800,600\n");
            script.push_str(&format!(
                "set output '{}_{}.png'\n",
                stem.display(),
                metric.name()
            ));
            script.push_str(&gnuplot_script(&spec, &csv_name, metric));
        }
        fs::write(&script_path, script)
            .with_context(|| format!("writing {}", script_path.display()))?;
    }
    eprintln!(
        "{} rows ({} not converged) in {:.2?}",
        records.len(),
        failed.len(),
        start.elapsed()
    );
    Ok(0)
}

fn thresholds(args: ThresholdArgs) -> Result<u8> {
    if args.tolerance.is_nan() || args.tolerance <= 0.0 {
        return Err(nge::Error::InvalidSpec("tolerance must be positive".into()).into());
    }
    let routes: Vec<(&str, Route)> = match args.route {
        RouteArg::Closed => vec![("closed", Route::ClosedForm)],
        RouteArg::Numeric => vec![(
            "numeric",
            Route::Numeric {
                cutoff: args.cutoff,
            },
        )],
        RouteArg::Both => vec![
            ("closed", Route::ClosedForm),
            (
                "numeric",
                Route::Numeric {
                    cutoff: args.cutoff,
                },
            ),
        ],
    };
    println!("route,threshold,alpha,residual,bracket_width");
    let mut code = 0;
    for (label, route) in routes {
        for kind in ThresholdKind::ALL {
            match threshold_scan(kind, route, DEFAULT_BRACKET, args.tolerance) {
                Ok(t) => println!(
                    "{label},{},{:.9},{:.3e},{:.3e}",
                    kind, t.alpha, t.residual, t.width
                ),
                Err(e) => {
                    eprintln!("error: {label} {kind}: {e}");
                    code = EXIT_NOT_CONVERGED;
                }
            }
        }
    }
    Ok(code)
}

fn table1(args: Table1Args) -> Result<u8> {
    let rule = QuadratureRule::gauss_hermite(args.quadrature_nodes)?;
    println!(
        "{:<46} {:>10} {:>8} {:>10} {:>8} {:>9} {:>4} {:>8}",
        "state", "fidelity", "class", "entropy", "entangled", "epr_var", "epr", "expected"
    );
    let mut all_match = true;
    for scenario in table::scenarios() {
        let row = table::classify_scenario(&scenario, &rule)?;
        let class = match row.fidelity_class {
            table::FidelityClass::AboveHalf => "F>1/2",
            table::FidelityClass::BelowHalf if row.fidelity_boundary => "F=1/2*",
            table::FidelityClass::BelowHalf => "F<1/2",
        };
        let ok = row.matches_expected();
        all_match &= ok;
        println!(
            "{:<46} {:>10.6} {:>8} {:>10.6} {:>8} {:>9.6} {:>4} {:>8}",
            row.state_label,
            row.fidelity,
            class,
            row.entropy_bits,
            yes_no(row.entangled),
            row.epr_variance,
            yes_no(row.epr_second_order),
            if ok { "match" } else { "MISMATCH" }
        );
    }
    println!("* boundary value, classed below one half");
    Ok(if all_match { 0 } else { EXIT_FAILURE })
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn validate_cmd() -> Result<u8> {
    let mut all = true;
    for c in validate::run_validation() {
        all &= c.passed;
        println!(
            "[{}] {} (max deviation {:.3e}, tolerance {:.0e}, {} samples)",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.max_deviation,
            c.tolerance,
            c.samples
        );
    }
    Ok(if all { 0 } else { EXIT_FAILURE })
}
