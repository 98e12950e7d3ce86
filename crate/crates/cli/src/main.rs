//! `zenolab`: bound sweeps, protocol simulations and verification suites.
//!
//! Exit codes: 0 success, 1 invariant failure (or numerical failure), 2 usage error.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use zenolab::bounds::{sweep_bounds, SweepGrid};
use zenolab::experiment::{run_experiment, BathState, ExperimentSpec};
use zenolab::hilbert::LogicalState;
use zenolab::measurement::Strength;
use zenolab::protocol::Variant;
use zenolab::verify::{
    run_verification, two_local_table, Fault, Suite, VerifyOptions, TWO_LOCAL_SEEDS, TWO_LOCAL_STRENGTHS,
};
use zenolab::Error;

#[derive(Parser)]
#[command(name = "zenolab", version, about = "Weak-measurement Zeno protection lab")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the generators, group and strong bounds over a parameter grid.
    Sweep(SweepArgs),
    /// Simulate the protocol and compare each deviation with its bound.
    Simulate(SimulateArgs),
    /// Run the self-check suites.
    Verify(VerifyArgs),
    /// Compare the gate-level many-body measurement with the direct channel.
    Twolocal(TwoLocalArgs),
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum Panel {
    /// Surface over (M, λ) at ζ = 0.5.
    Left,
    /// Surface over (M, ζ) at λ = 0.1.
    Right,
}

#[derive(Args, Serialize)]
struct SweepArgs {
    /// Reference grid; cannot be combined with explicit grid flags.
    #[arg(long, value_enum, conflicts_with_all = ["j0tau", "qbar", "m", "lambda", "zeta"])]
    panel: Option<Panel>,
    #[arg(long, default_value_t = 1.0)]
    j0tau: f64,
    #[arg(long, default_value_t = 4)]
    qbar: usize,
    /// M values: comma list and/or `start:step:stop` ranges.
    #[arg(long, required_unless_present = "panel")]
    m: Option<String>,
    /// λ = J₁/J₀ values, same syntax as `--m`.
    #[arg(long, required_unless_present = "panel")]
    lambda: Option<String>,
    /// ζ values, same syntax as `--m`.
    #[arg(long, required_unless_present = "panel")]
    zeta: Option<String>,
    /// Output CSV (stdout if omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct SimulateArgs {
    /// Experiment JSON; flags below override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    bath_dim: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    j0: Option<f64>,
    #[arg(long)]
    j1: Option<f64>,
    #[arg(long)]
    tau: Option<f64>,
    /// Comma-separated M values.
    #[arg(long, value_delimiter = ',')]
    m: Option<Vec<usize>>,
    /// Comma-separated strengths (`strong` for projective).
    #[arg(long, value_delimiter = ',')]
    epsilon: Option<Vec<String>>,
    /// Comma-separated variants: group, generators, strong, none.
    #[arg(long, value_delimiter = ',')]
    variant: Option<Vec<String>>,
    /// Physical basis string for the initial codeword, e.g. 0000.
    #[arg(long, conflicts_with = "logical")]
    bits: Option<String>,
    /// Logical basis string, e.g. 01.
    #[arg(long)]
    logical: Option<String>,
    /// Pure bath basis state instead of the maximally mixed bath.
    #[arg(long)]
    bath_basis: Option<usize>,
    /// Output CSV (stdout if omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct VerifyArgs {
    /// Comma-separated suite names; default runs all.
    #[arg(long, value_delimiter = ',')]
    only: Vec<String>,
    /// Deliberately break a component to check the suites notice.
    #[arg(long, hide = true)]
    inject_fault: Option<String>,
    /// Write the suite results as JSON.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct TwoLocalArgs {
    /// Comma-separated seeds for the perturbed codeword.
    #[arg(long, value_delimiter = ',')]
    seeds: Option<Vec<u64>>,
    /// Comma-separated strengths.
    #[arg(long, value_delimiter = ',')]
    epsilon: Option<Vec<String>>,
    /// Output CSV (stdout if omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Failure categories mapped onto the exit-code contract.
enum Failure {
    Usage(anyhow::Error),
    Invariant(anyhow::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidArgument(_) | Error::Parse(_) | Error::DenseCap { .. } | Error::InvalidCode(_) => {
                Failure::Usage(e.into())
            }
            other => Failure::Invariant(other.into()),
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Invariant(e)
    }
}

type Outcome = Result<(), Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(anyhow!(msg.into()))
}

/// Everything needed to reproduce an output file.
#[derive(Serialize)]
struct RunManifest<'a, P: Serialize> {
    command: &'a str,
    parameters: &'a P,
    seed: Option<u64>,
    version: &'a str,
    outputs: Vec<String>,
}

fn manifest_path(out: &Path) -> PathBuf {
    out.with_extension("manifest.json")
}

fn write_manifest<P: Serialize>(command: &str, parameters: &P, seed: Option<u64>, out: &Path) -> anyhow::Result<()> {
    let manifest = RunManifest {
        command,
        parameters,
        seed,
        version: env!("CARGO_PKG_VERSION"),
        outputs: vec![out.display().to_string()],
    };
    let path = manifest_path(out);
    let mut json = serde_json::to_string_pretty(&manifest)?;
    json.push('\n');
    fs::write(&path, json).with_context(|| format!("writing {}", path.display()))
}

/// Writes rows as CSV with a header, to `out` or stdout.
fn write_csv<T: Serialize>(rows: &[T], header: &[&str], out: Option<&Path>) -> anyhow::Result<()> {
    let sink: Box<dyn Write> = match out {
        Some(p) => Box::new(fs::File::create(p).with_context(|| format!("creating {}", p.display()))?),
        None => Box::new(io::stdout().lock()),
    };
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(sink);
    w.write_record(header)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Parses `1,2,5` and `start:step:stop` items (inclusive stop) into a list.
fn parse_values(spec: &str) -> Result<Vec<f64>, Failure> {
    let mut out = Vec::new();
    for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let parts: Vec<&str> = item.split(':').collect();
        let num = |s: &str| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| usage(format!("bad number {s:?} in {spec:?}")))
        };
        match parts.as_slice() {
            [v] => out.push(num(v)?),
            [a, step, b] => {
                let (a, step, b) = (num(a)?, num(step)?, num(b)?);
                if !(step > 0.0) {
                    return Err(usage(format!("range step must be positive in {item:?}")));
                }
                let count = ((b - a) / step + 1e-9).floor();
                if count >= 0.0 {
                    for k in 0..=(count as usize) {
                        out.push(((a + k as f64 * step) * 1e12).round() / 1e12);
                    }
                }
            }
            _ => return Err(usage(format!("bad range {item:?}; use start:step:stop"))),
        }
    }
    Ok(out)
}

fn parse_m_values(spec: &str) -> Result<Vec<usize>, Failure> {
    parse_values(spec)?
        .into_iter()
        .map(|v| {
            if v >= 1.0 && v.fract() == 0.0 {
                Ok(v as usize)
            } else {
                Err(usage(format!("M must be a positive integer, got {v}")))
            }
        })
        .collect()
}

fn parse_list<T: std::str::FromStr<Err = Error>>(items: &[String]) -> Result<Vec<T>, Failure> {
    items.iter().map(|s| s.parse::<T>().map_err(Failure::from)).collect()
}

fn cmd_sweep(args: &SweepArgs) -> Outcome {
    let grid = match args.panel {
        Some(Panel::Left) => SweepGrid::left_panel(),
        Some(Panel::Right) => SweepGrid::right_panel(),
        None => SweepGrid {
            j0tau: args.j0tau,
            qbar: args.qbar,
            m_values: parse_m_values(args.m.as_deref().unwrap_or_default())?,
            lambdas: parse_values(args.lambda.as_deref().unwrap_or_default())?,
            zetas: parse_values(args.zeta.as_deref().unwrap_or_default())?,
        },
    };
    if grid.is_empty() {
        return Err(usage("sweep grid is empty"));
    }
    let rows = sweep_bounds(&grid)?;
    let records: Vec<_> = rows.iter().flat_map(|r| r.records()).collect();
    write_csv(&records, &["variant", "M", "lambda", "zeta", "J0tau", "Qbar", "B"], args.out.as_deref())?;
    if let Some(out) = &args.out {
        write_manifest("sweep", args, None, out)?;
    }
    let unordered = rows.iter().filter(|r| !r.ordered(1e-12)).count();
    if unordered > 0 {
        eprintln!("warning: {unordered} grid points violate generators >= group >= strong");
    }
    Ok(())
}

fn build_spec(args: &SimulateArgs) -> Result<ExperimentSpec, Failure> {
    let mut spec = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| usage(format!("reading {}: {e}", path.display())))?;
            serde_json::from_str(&text).map_err(|e| usage(format!("parsing {}: {e}", path.display())))?
        }
        None => ExperimentSpec::default(),
    };
    if let Some(n) = args.n {
        spec.n = n;
        if args.bits.is_none() && args.logical.is_none() && args.config.is_none() {
            spec.logical_state = LogicalState::Bits("0".repeat(n));
        }
    }
    if let Some(v) = args.bath_dim {
        spec.bath_dim = v;
    }
    if let Some(v) = args.seed {
        spec.seed = v;
    }
    if let Some(v) = args.j0 {
        spec.j0 = v;
    }
    if let Some(v) = args.j1 {
        spec.j1 = v;
    }
    if let Some(v) = args.tau {
        spec.tau = v;
    }
    if let Some(v) = &args.m {
        spec.m_list = v.clone();
    }
    if let Some(v) = &args.epsilon {
        spec.epsilon_list = parse_list::<Strength>(v)?;
    }
    if let Some(v) = &args.variant {
        spec.variant_list = parse_list::<Variant>(v)?;
    }
    if let Some(b) = &args.bits {
        spec.logical_state = LogicalState::Bits(b.clone());
    }
    if let Some(l) = &args.logical {
        spec.logical_state = LogicalState::Logical(l.clone());
    }
    if let Some(k) = args.bath_basis {
        spec.bath_state = BathState::Basis(k);
    }
    spec.validate()?;
    Ok(spec)
}

fn cmd_simulate(args: &SimulateArgs) -> Outcome {
    let spec = build_spec(args)?;
    let report = run_experiment(&spec)?;
    if !report.scales_ordered {
        eprintln!(
            "warning: J0 = {} does not exceed J1 = {}; outside the regime the bounds assume",
            report.j0, report.j1
        );
    }
    write_csv(
        &report.rows,
        &["variant", "M", "epsilon", "zeta", "deviation", "bound", "bound_ok"],
        args.out.as_deref(),
    )?;
    if let Some(out) = &args.out {
        // The manifest records the resolved spec so the run can be replayed with --config.
        write_manifest("simulate", &spec, Some(spec.seed), out)?;
    }
    let violations: Vec<_> = report.violations().collect();
    if violations.is_empty() {
        return Ok(());
    }
    for r in &violations {
        eprintln!(
            "bound violated: variant={} M={} epsilon={} deviation={:e} bound={:e}",
            r.variant,
            r.m,
            r.epsilon,
            r.deviation,
            r.bound.unwrap_or(f64::NAN)
        );
    }
    Err(Failure::Invariant(anyhow!("{} rows exceed their bound", violations.len())))
}

fn cmd_verify(args: &VerifyArgs) -> Outcome {
    let only = parse_list::<Suite>(&args.only)?;
    let fault = args.inject_fault.as_deref().map(str::parse::<Fault>).transpose()?;
    let results = run_verification(&VerifyOptions { only, fault });
    if let Some(f) = fault {
        eprintln!("note: running with injected fault {f:?}");
    }
    let mut stdout = io::stdout().lock();
    for r in &results {
        writeln!(
            stdout,
            "{:<4} {:<12} checks={:<5} failures={:<4} worst={:.3e} tol={:.0e}  {}",
            if r.passed { "PASS" } else { "FAIL" },
            r.suite.name(),
            r.checks,
            r.failures,
            r.worst,
            r.tolerance,
            r.detail
        )
        .map_err(anyhow::Error::from)?;
    }
    if let Some(out) = &args.out {
        let mut json = serde_json::to_string_pretty(&results).map_err(anyhow::Error::from)?;
        json.push('\n');
        fs::write(out, json).with_context(|| format!("writing {}", out.display()))?;
        write_manifest("verify", args, None, out)?;
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    if failed == 0 {
        Ok(())
    } else {
        Err(Failure::Invariant(anyhow!("{failed} of {} suites failed", results.len())))
    }
}

fn cmd_twolocal(args: &TwoLocalArgs) -> Outcome {
    let seeds = args.seeds.clone().unwrap_or_else(|| TWO_LOCAL_SEEDS.to_vec());
    let strengths = match &args.epsilon {
        Some(e) => parse_list::<Strength>(e)?,
        None => TWO_LOCAL_STRENGTHS.to_vec(),
    };
    if seeds.is_empty() || strengths.is_empty() {
        return Err(usage("need at least one seed and one strength"));
    }
    let rows = two_local_table(&seeds, &strengths)?;
    write_csv(&rows, &["v_hat", "seed", "epsilon", "residual", "pass"], args.out.as_deref())?;
    if let Some(out) = &args.out {
        write_manifest("twolocal", args, None, out)?;
    }
    let failed = rows.iter().filter(|r| !r.pass).count();
    if failed == 0 {
        Ok(())
    } else {
        Err(Failure::Invariant(anyhow!("{failed} cases exceed the equivalence tolerance")))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Sweep(a) => cmd_sweep(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Twolocal(a) => cmd_twolocal(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Invariant(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(e)) => {
            eprintln!("usage error: {e:#}");
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn value_lists_and_ranges() {
        let v = parse_values("0:0.05:0.2, 0.5").ok().unwrap();
        assert_eq!(v, vec![0.0, 0.05, 0.1, 0.15, 0.2, 0.5]);
        assert!(parse_values("3:1:1").ok().unwrap().is_empty());
        assert!(parse_values("1:0:3").is_err());
        assert!(parse_values("a").is_err());
        assert_eq!(parse_m_values("1:1:3,8").ok().unwrap(), vec![1, 2, 3, 8]);
        assert!(parse_m_values("0").is_err());
        assert!(parse_m_values("1.5").is_err());
    }
}
