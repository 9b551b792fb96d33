//! The `oske` command line.
//!
//! Exit codes: 0 on success, 2 for invalid arguments or input files, 3 when a
//! game breaks an invariant while it is simulated, 1 for I/O failures on output.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;

use crate::adversaries::{duel, AdversaryKind, AdversaryParams, DEFAULT_EPSILON};
use crate::algorithms::PolicyKind;
use crate::grid::Grid;
use crate::model::{play_instance, Instance, Mode, Transcript};
use crate::offline::opt_auto;
use crate::ratios::{delta_range, delta_star_additive, ratio_bundle, removability_bundle};
use crate::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_SIMULATION: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "oske", version, about = "Online simple knapsack with item size estimates")]
pub struct Cli {
    /// Grid resolution D (sizes are multiples of 1/D). Overrides OSKE_GRID_D.
    #[arg(long, global = true, value_name = "D")]
    pub grid: Option<u64>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the competitive ratios for one accuracy.
    Ratio(RatioArgs),
    /// Exact offline optimum of an instance file.
    Opt(OptArgs),
    /// Run a policy over an instance file and print the transcript.
    Run(RunArgs),
    /// Play a policy against an adaptive adversary.
    Duel(DuelArgs),
    /// Tabulate the ratios over a range of accuracies as CSV.
    Sweep(SweepArgs),
}

#[derive(Debug, Args)]
pub struct RatioArgs {
    #[arg(long)]
    pub delta: f64,
    /// Ratios of the variant where packed items may be discarded.
    #[arg(long)]
    pub removable: bool,
    #[arg(long, default_value = "additive")]
    pub mode: Mode,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct OptArgs {
    #[arg(long)]
    pub instance: PathBuf,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub instance: PathBuf,
    #[arg(long)]
    pub alg: PolicyKind,
    /// Also write the transcript here.
    #[arg(long)]
    pub transcript: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DuelArgs {
    #[arg(long)]
    pub adv: AdversaryKind,
    #[arg(long)]
    pub alg: PolicyKind,
    #[arg(long)]
    pub delta: f64,
    #[arg(long, default_value_t = DEFAULT_EPSILON)]
    pub epsilon: f64,
    /// Write the full transcript here.
    #[arg(long)]
    pub transcript: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, default_value_t = 0.005)]
    pub from: f64,
    #[arg(long, default_value_t = 0.495)]
    pub to: f64,
    #[arg(long, default_value_t = 0.005)]
    pub step: f64,
    /// Write the CSV here instead of stdout.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Add the worst ratio the adversaries force on alg2 and alg3.
    #[arg(long)]
    pub measure: bool,
    #[arg(long, default_value_t = DEFAULT_EPSILON)]
    pub epsilon: f64,
}

/// A failure together with the exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn invalid(message: impl Into<String>) -> Self {
        Failure { code: EXIT_INVALID, message: message.into() }
    }

    fn io(path: &Path, err: std::io::Error) -> Self {
        Failure { code: EXIT_IO, message: format!("{}: {err}", path.display()) }
    }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        let code = if err.is_simulation() { EXIT_SIMULATION } else { EXIT_INVALID };
        Failure { code, message: err.to_string() }
    }
}

/// Parses `std::env::args`, runs the command and returns the exit code.
pub fn main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return if err.use_stderr() { EXIT_INVALID } else { EXIT_OK };
        }
    };
    match execute(&cli) {
        Ok(out) => {
            print!("{out}");
            EXIT_OK
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

/// Runs a parsed command and returns what it prints on stdout.
pub fn execute(cli: &Cli) -> Result<String, Failure> {
    let grid = match cli.grid {
        Some(d) => Grid::new(d).ok_or_else(|| Failure::invalid("--grid must be positive"))?,
        None => Grid::from_env().map_err(Failure::invalid)?,
    };
    match &cli.command {
        Command::Ratio(args) => cmd_ratio(args),
        Command::Opt(args) => cmd_opt(args, grid),
        Command::Run(args) => cmd_run(args, grid),
        Command::Duel(args) => cmd_duel(args, grid),
        Command::Sweep(args) => cmd_sweep(args, grid),
    }
}

fn cmd_ratio(args: &RatioArgs) -> Result<String, Failure> {
    let value = if args.removable {
        if !(args.delta.is_finite() && args.delta >= 0.0) {
            return Err(Failure::invalid(format!("delta must be >= 0, got {}", args.delta)));
        }
        serde_json::to_value(removability_bundle(args.delta))
    } else {
        if args.mode == Mode::Multiplicative {
            return Err(Failure::invalid(
                "no closed-form ratio for multiplicative accuracy without removals; add --removable",
            ));
        }
        let bundle = ratio_bundle(args.delta).map_err(Error::from)?;
        serde_json::to_value(bundle)
    }
    .expect("bundles serialize");
    if args.json {
        return Ok(format!("{}\n", serde_json::to_string_pretty(&value).expect("valid json")));
    }
    let mut out = String::new();
    for (key, v) in value.as_object().expect("bundle is an object") {
        let _ = writeln!(out, "{key:<20} {v}");
    }
    Ok(out)
}

fn read_instance(path: &Path, grid: Grid) -> Result<Instance, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))?;
    Instance::from_json(&text, grid).map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))
}

fn to_json<T: Serialize>(value: &T) -> String {
    format!("{}\n", serde_json::to_string_pretty(value).expect("serializable"))
}

fn write_transcript(path: &Path, t: &Transcript) -> Result<(), Failure> {
    std::fs::write(path, t.to_json()).map_err(|e| Failure::io(path, e))
}

fn cmd_opt(args: &OptArgs, grid: Grid) -> Result<String, Failure> {
    let instance = read_instance(&args.instance, grid)?;
    let opt = opt_auto(&instance.actual_sizes(), grid).map_err(Error::from)?;
    Ok(to_json(&opt))
}

fn cmd_run(args: &RunArgs, grid: Grid) -> Result<String, Failure> {
    let instance = read_instance(&args.instance, grid)?;
    let transcript = play_instance(&instance, args.alg, grid)?;
    if let Some(path) = &args.transcript {
        write_transcript(path, &transcript)?;
    }
    Ok(transcript.to_json() + "\n")
}

#[derive(Serialize)]
struct DuelSummary<'a> {
    adversary: &'a str,
    policy: &'a str,
    delta: f64,
    epsilon: f64,
    case: &'a str,
    items: usize,
    final_gain: f64,
    opt_value: f64,
    #[serde(with = "crate::model::ratio_serde")]
    ratio: f64,
    #[serde(with = "crate::model::ratio_serde")]
    target_ratio: f64,
    tolerance: f64,
}

fn cmd_duel(args: &DuelArgs, grid: Grid) -> Result<String, Failure> {
    let params = AdversaryParams::new(args.epsilon, grid);
    let transcript = duel(args.adv, args.alg, args.delta, params)?;
    if let Some(path) = &args.transcript {
        write_transcript(path, &transcript)?;
    }
    let info = transcript.adversary.as_ref().expect("duel records the adversary");
    Ok(to_json(&DuelSummary {
        adversary: &info.name,
        policy: &transcript.policy,
        delta: args.delta,
        epsilon: args.epsilon,
        case: &info.case,
        items: transcript.reveals.len(),
        final_gain: transcript.final_gain,
        opt_value: transcript.opt_value,
        ratio: transcript.ratio,
        target_ratio: info.target_ratio,
        tolerance: params.tolerance(),
    }))
}

/// One line of the sweep CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub delta: f64,
    pub p: f64,
    pub q: f64,
    pub c: f64,
    pub greedy_bound: f64,
    pub removability_ratio: f64,
    pub measured_ratio_alg2: Option<f64>,
    pub measured_ratio_alg3: Option<f64>,
}

/// Worst ratio that the applicable adversaries force on `policy` at `delta`.
fn worst_forced(policy: PolicyKind, delta: f64, params: AdversaryParams) -> Result<Option<f64>, Error> {
    let mut worst: Option<f64> = None;
    for adv in AdversaryKind::ALL {
        let applicable = match policy {
            PolicyKind::Alg3 => adv == AdversaryKind::Removability,
            _ => adv != AdversaryKind::Removability && adv != AdversaryKind::NonCompetitive,
        };
        if !applicable || !adv.accepts_delta(delta) {
            continue;
        }
        let ratio = match duel(adv, policy, delta, params) {
            Ok(t) => t.ratio,
            // ε too coarse for this δ
            Err(Error::Param(_)) => continue,
            Err(e) => return Err(e),
        };
        worst = Some(worst.map_or(ratio, |w: f64| w.max(ratio)));
    }
    Ok(worst)
}

/// Rows for every `δ` from `from` to `to`, in increasing order.
pub fn sweep_rows(
    from: f64,
    to: f64,
    step: f64,
    measure: Option<AdversaryParams>,
) -> Result<Vec<SweepRow>, Error> {
    let deltas = delta_range(from, to, step);
    deltas
        .par_iter()
        .map(|&delta| {
            let b = ratio_bundle(delta)?;
            let removability_ratio = removability_bundle(delta).effective_ratio_add;
            let (alg2, alg3) = match measure {
                Some(params) => {
                    let alg2 = worst_forced(PolicyKind::Alg2, delta, params)?;
                    let alg3 = if delta <= delta_star_additive() {
                        worst_forced(PolicyKind::Alg3, delta, params)?
                    } else {
                        None
                    };
                    (alg2, alg3)
                }
                None => (None, None),
            };
            Ok(SweepRow {
                delta,
                p: b.p,
                q: b.q,
                c: b.c,
                greedy_bound: b.greedy_bound,
                removability_ratio,
                measured_ratio_alg2: alg2,
                measured_ratio_alg3: alg3,
            })
        })
        .collect()
}

/// Decimal with 9 significant digits and no trailing zeros; `inf` for infinity.
pub fn format_sig9(x: f64) -> String {
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 || x.is_nan() {
        return if x.is_nan() { "nan".into() } else { "0".into() };
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (8 - magnitude).max(0) as usize;
    let s = format!("{x:.decimals$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

pub fn sweep_csv(rows: &[SweepRow], measured: bool) -> String {
    let mut out = String::from("delta,p,q,c,greedy_bound,removability_ratio");
    if measured {
        out.push_str(",measured_ratio_alg2,measured_ratio_alg3");
    }
    out.push('\n');
    for r in rows {
        let cells = [r.delta, r.p, r.q, r.c, r.greedy_bound, r.removability_ratio];
        let mut line: Vec<String> = cells.iter().map(|&v| format_sig9(v)).collect();
        if measured {
            for m in [r.measured_ratio_alg2, r.measured_ratio_alg3] {
                line.push(m.map(format_sig9).unwrap_or_default());
            }
        }
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

fn cmd_sweep(args: &SweepArgs, grid: Grid) -> Result<String, Failure> {
    if !(args.step > 0.0) || args.from <= 0.0 || args.to >= 0.5 || args.to < args.from {
        return Err(Failure::invalid("sweep needs 0 < from <= to < 0.5 and step > 0"));
    }
    let measure = args.measure.then(|| AdversaryParams::new(args.epsilon, grid));
    let rows = sweep_rows(args.from, args.to, args.step, measure)?;
    let csv = sweep_csv(&rows, args.measure);
    match &args.csv {
        Some(path) => {
            std::fs::write(path, csv).map_err(|e| Failure::io(path, e))?;
            Ok(String::new())
        }
        None => Ok(csv),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig9() {
        assert_eq!(format_sig9(4.0), "4");
        assert_eq!(format_sig9(0.01), "0.01");
        assert_eq!(format_sig9(2.0271484375), "2.02714844");
        assert_eq!(format_sig9(1000.0), "1000");
        assert_eq!(format_sig9(f64::INFINITY), "inf");
    }

    #[test]
    fn exit_codes() {
        let sim = Error::Sim(crate::model::SimError::BandViolation { index: 0, announced: 0.5, actual: 0.9 });
        assert_eq!(Failure::from(sim).code, EXIT_SIMULATION);
        let bad = Error::Ratio(crate::ratios::RatioError::OutOfRange(0.7));
        assert_eq!(Failure::from(bad).code, EXIT_INVALID);
    }

    #[test]
    fn sweep_header_and_rows() {
        let rows = sweep_rows(0.01, 0.49, 0.01, None).unwrap();
        assert_eq!(rows.len(), 49);
        let csv = sweep_csv(&rows, false);
        assert!(csv.starts_with("delta,p,q,c,greedy_bound,removability_ratio\n"));
        assert_eq!(csv.lines().count(), 50);
    }
}
