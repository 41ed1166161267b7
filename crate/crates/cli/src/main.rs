//! `frio`: CSV sweeps of minimal-error curves at a fixed inconclusive rate.

use std::f64::consts::FRAC_PI_4;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use frio_core::closedform::{TrineProblem, TwoPureProblem};
use frio_core::curve::{linspace, CriticalData, FrioCurve};
use frio_core::oracle::{optimize_fixed_q, OracleConfig};
use frio_core::simulate::estimate_rates;
use frio_core::state::Ensemble;
use serde_json::json;

/// Agreement required between closed form and oracle in `compare`.
const COMPARE_TOL: f64 = 1e-3;
/// How far the oracle may fall below the closed form before it is flagged.
const OPTIMALITY_SLACK: f64 = 1e-6;

#[derive(Parser, Debug)]
#[command(name = "frio", version, about = "Minimal error at a fixed rate of inconclusive outcomes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// P_e^min(Q) for two pure states.
    CurveTwoPure {
        #[command(flatten)]
        pair: PairArgs,
        #[command(flatten)]
        sweep: SweepArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// P_e^min(Q) for the symmetric trine.
    CurveTrine {
        /// Polar angle of the trine states in radians, 0 < θ ≤ π/4.
        #[arg(long)]
        theta: f64,
        #[command(flatten)]
        sweep: SweepArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Q_c and Q_th across priors η₁ at fixed overlap.
    Regions {
        #[arg(long)]
        cos_theta: f64,
        #[arg(long, default_value_t = 101)]
        steps: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Closed form against the numerical oracle on [0, Q_c].
    Compare {
        #[command(flatten)]
        family: FamilyArgs,
        #[command(flatten)]
        range: RangeArgs,
        #[command(flatten)]
        oracle: OracleArgs,
        #[command(flatten)]
        out: OutputArgs,
        /// Print a JSON summary instead of CSV.
        #[arg(long)]
        json: bool,
    },
    /// Monte Carlo rates of the optimal measurements.
    Simulate {
        #[command(flatten)]
        family: FamilyArgs,
        #[command(flatten)]
        range: RangeArgs,
        #[arg(long, default_value_t = 1_000_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: OutputArgs,
        /// Print a JSON summary instead of CSV.
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args, Debug)]
struct PairArgs {
    /// Prior of the first state.
    #[arg(long)]
    eta1: f64,
    /// Overlap |⟨ψ₁|ψ₂⟩|.
    #[arg(long)]
    cos_theta: f64,
}

/// Two pure states by default; `--theta` selects the trine instead.
#[derive(Args, Debug)]
struct FamilyArgs {
    #[arg(long, conflicts_with = "theta")]
    eta1: Option<f64>,
    #[arg(long, conflicts_with = "theta")]
    cos_theta: Option<f64>,
    #[arg(long)]
    theta: Option<f64>,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(long, default_value_t = 0.0)]
    q_min: f64,
    #[arg(long, default_value_t = 1.0)]
    q_max: f64,
    #[arg(long, default_value_t = 101)]
    steps: usize,
}

/// Like [`SweepArgs`], but `q_max` defaults to the critical rate.
#[derive(Args, Debug)]
struct RangeArgs {
    #[arg(long, default_value_t = 0.0)]
    q_min: f64,
    #[arg(long)]
    q_max: Option<f64>,
    #[arg(long, default_value_t = 11)]
    steps: usize,
}

#[derive(Args, Debug)]
struct OracleArgs {
    #[arg(long, default_value_t = OracleConfig::default().orientation_grid_size)]
    grid_size: usize,
    #[arg(long, default_value_t = OracleConfig::default().refinement_iterations)]
    refine: usize,
    #[arg(long, default_value_t = OracleConfig::default().random_restarts)]
    restarts: usize,
    #[arg(long = "oracle-seed", default_value_t = 0)]
    seed: u64,
    /// Also search full-rank inconclusive elements.
    #[arg(long)]
    full_rank: bool,
}

#[derive(Args, Debug)]
struct OutputArgs {
    /// Write to this file instead of standard output.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Numerical(String),
    Io(io::Error),
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<frio_core::Error> for Failure {
    fn from(e: frio_core::Error) -> Self {
        Failure::Numerical(e.to_string())
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

enum Family {
    Pair(TwoPureProblem),
    Trine(TrineProblem),
}

impl Family {
    fn ensemble(&self) -> Ensemble {
        match self {
            Family::Pair(p) => p.ensemble(),
            Family::Trine(t) => t.ensemble(),
        }
    }

    fn critical(&self) -> CriticalData {
        match self {
            Family::Pair(p) => p.critical(),
            Family::Trine(t) => t.critical(),
        }
    }

    fn pe_min(&self, q: f64) -> f64 {
        match self {
            Family::Pair(p) => p.pe_min(q).pe_min,
            Family::Trine(t) => t.pe_min(q).pe_min,
        }
    }

    fn curve(&self, qs: &[f64], with_povms: bool) -> frio_core::Result<FrioCurve> {
        match self {
            Family::Pair(p) => p.curve(qs, with_povms),
            Family::Trine(t) => t.curve(qs, with_povms),
        }
    }

    fn describe(&self) -> serde_json::Value {
        match self {
            Family::Pair(p) => json!({"family": "two-pure", "eta1": p.eta1(), "cos_theta": p.cos_theta()}),
            Family::Trine(t) => json!({"family": "trine", "theta": t.theta()}),
        }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn probability(name: &str, v: f64) -> Outcome<f64> {
    if (0.0..=1.0).contains(&v) {
        Ok(v)
    } else {
        Err(usage(format!("--{name} must lie in [0, 1], got {v}")))
    }
}

fn pair(eta1: f64, cos_theta: f64) -> Outcome<TwoPureProblem> {
    probability("eta1", eta1)?;
    probability("cos-theta", cos_theta)?;
    TwoPureProblem::new(eta1, cos_theta).map_err(|e| usage(e.to_string()))
}

fn trine(theta: f64) -> Outcome<TrineProblem> {
    if !(theta > 0.0 && theta <= FRAC_PI_4 + 1e-15) {
        return Err(usage(format!("--theta must lie in (0, pi/4], got {theta}")));
    }
    TrineProblem::new(theta).map_err(|e| usage(e.to_string()))
}

fn family(args: &FamilyArgs) -> Outcome<Family> {
    match (args.theta, args.eta1, args.cos_theta) {
        (Some(theta), _, _) => Ok(Family::Trine(trine(theta)?)),
        (None, Some(eta1), Some(c)) => Ok(Family::Pair(pair(eta1, c)?)),
        _ => Err(usage("give either --theta or both --eta1 and --cos-theta")),
    }
}

fn grid(q_min: f64, q_max: f64, steps: usize) -> Outcome<Vec<f64>> {
    probability("q-min", q_min)?;
    probability("q-max", q_max)?;
    if q_min > q_max {
        return Err(usage(format!("--q-min {q_min} exceeds --q-max {q_max}")));
    }
    if steps < 2 {
        return Err(usage(format!("--steps must be at least 2, got {steps}")));
    }
    if q_min == q_max {
        return Err(usage("--q-min and --q-max must differ"));
    }
    Ok(linspace(q_min, q_max, steps))
}

/// `%.12g`: twelve significant digits, trailing zeros dropped.
fn g(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.into();
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..12).contains(&exp) {
        let fixed = format!("{x:.*}", (11 - exp) as usize);
        trim_zeros(&fixed).to_string()
    } else {
        format!("{}e{}{:02}", trim_zeros(mantissa), if exp < 0 { '-' } else { '+' }, exp.abs())
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn open(out: &OutputArgs) -> Outcome<Box<dyn Write>> {
    Ok(match &out.output {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_curve(curve: &FrioCurve, alpha: f64, out: &OutputArgs) -> Outcome<()> {
    let mut w = open(out)?;
    writeln!(w, "q,pe_min,pe_conditional,regime")?;
    for pt in &curve.points {
        // On the tail P_e/(1 − Q) equals α, which is also its limit at Q = 1.
        let cond = pt.conditional_error().unwrap_or(alpha);
        writeln!(w, "{},{},{},{}", g(pt.q), g(pt.pe_min), g(cond), pt.regime)?;
    }
    w.flush()?;
    Ok(())
}

fn regions(cos_theta: f64, steps: usize, out: &OutputArgs) -> Outcome<()> {
    probability("cos-theta", cos_theta)?;
    if steps < 2 {
        return Err(usage(format!("--steps must be at least 2, got {steps}")));
    }
    let mut w = open(out)?;
    writeln!(w, "eta1,q_c,q_th,region")?;
    // η₁ = 0 and η₁ = 1 are single-state ensembles and are skipped.
    for i in 1..steps - 1 {
        let eta1 = i as f64 / (steps - 1) as f64;
        let p = pair(eta1, cos_theta)?;
        writeln!(w, "{},{},{},{}", g(eta1), g(p.qc()), g(p.qth()), p.region().region)?;
    }
    w.flush()?;
    Ok(())
}

fn range(fam: &Family, args: &RangeArgs) -> Outcome<Vec<f64>> {
    grid(args.q_min, args.q_max.unwrap_or(fam.critical().q_c), args.steps)
}

fn compare(fam: &Family, qs: &[f64], oracle: &OracleArgs, out: &OutputArgs, as_json: bool) -> Outcome<()> {
    let cfg = OracleConfig {
        orientation_grid_size: oracle.grid_size,
        refinement_iterations: oracle.refine,
        random_restarts: oracle.restarts,
        seed: oracle.seed,
        allow_full_rank_pi0: oracle.full_rank,
        ..OracleConfig::default()
    };
    cfg.validate().map_err(|e| usage(e.to_string()))?;
    let ensemble = fam.ensemble();
    let rows: Vec<(f64, f64, f64, String)> = qs
        .iter()
        .map(|&q| {
            let closed = fam.pe_min(q);
            match optimize_fixed_q(&ensemble, q, &cfg) {
                Ok(r) => {
                    let delta = r.pe - closed;
                    let status = if delta < -OPTIMALITY_SLACK {
                        "below-closed-form"
                    } else if delta.abs() > COMPARE_TOL {
                        "above-tolerance"
                    } else {
                        "ok"
                    };
                    (q, closed, r.pe, status.to_string())
                }
                Err(e) => (q, closed, f64::NAN, format!("failed: {e}").replace(',', ";")),
            }
        })
        .collect();

    let mut w = open(out)?;
    if as_json {
        let max_delta = rows.iter().map(|r| (r.2 - r.1).abs()).fold(0.0, f64::max);
        let summary = json!({
            "problem": fam.describe(),
            "points": rows.len(),
            "max_abs_delta": if rows.iter().all(|r| r.2.is_finite()) { json!(max_delta) } else { json!(null) },
            "all_ok": rows.iter().all(|r| r.3 == "ok"),
            "rows": rows.iter().map(|r| json!({
                "q": r.0, "pe_closed": r.1,
                "pe_oracle": r.2.is_finite().then_some(r.2),
                "delta": r.2.is_finite().then_some(r.2 - r.1),
                "status": r.3,
            })).collect::<Vec<_>>(),
        });
        writeln!(w, "{}", serde_json::to_string_pretty(&summary).expect("serializable"))?;
    } else {
        writeln!(w, "q,pe_closed,pe_oracle,delta,status")?;
        for (q, closed, oracle, status) in &rows {
            writeln!(w, "{},{},{},{},{}", g(*q), g(*closed), g(*oracle), g(oracle - closed), status)?;
        }
    }
    w.flush()?;
    Ok(())
}

fn simulate(fam: &Family, qs: &[f64], trials: u64, seed: u64, out: &OutputArgs, as_json: bool) -> Outcome<()> {
    if trials == 0 {
        return Err(usage("--trials must be positive"));
    }
    let ensemble = fam.ensemble();
    let curve = fam.curve(qs, true)?;
    let mut reports = Vec::with_capacity(qs.len());
    for (i, pt) in curve.points.iter().enumerate() {
        let povm = pt
            .optimal_povm
            .as_ref()
            .ok_or_else(|| Failure::Numerical(format!("no measurement at q = {}", pt.q)))?;
        reports.push((pt.q, estimate_rates(&ensemble, povm, trials, seed.wrapping_add(i as u64))?));
    }

    let mut w = open(out)?;
    if as_json {
        let max_z = reports.iter().map(|(_, r)| r.max_abs_z()).fold(0.0, f64::max);
        let summary = json!({
            "problem": fam.describe(),
            "trials": trials,
            "seed": seed,
            "max_abs_z": max_z,
            "rows": reports.iter().map(|(q, r)| json!({
                "q": q,
                "reference": r.reference.as_array(),
                "empirical": r.empirical.as_array(),
                "z": r.z_scores,
            })).collect::<Vec<_>>(),
        });
        writeln!(w, "{}", serde_json::to_string_pretty(&summary).expect("serializable"))?;
    } else {
        writeln!(w, "q,ref_ps,ref_pe,ref_q,emp_ps,emp_pe,emp_q,z_ps,z_pe,z_q")?;
        for (q, r) in &reports {
            let cols: Vec<String> = std::iter::once(*q)
                .chain(r.reference.as_array())
                .chain(r.empirical.as_array())
                .chain(r.z_scores)
                .map(g)
                .collect();
            writeln!(w, "{}", cols.join(","))?;
        }
    }
    w.flush()?;
    Ok(())
}

fn run(cli: Cli) -> Outcome<()> {
    match cli.command {
        Command::CurveTwoPure { pair: a, sweep, out } => {
            let p = pair(a.eta1, a.cos_theta)?;
            let qs = grid(sweep.q_min, sweep.q_max, sweep.steps)?;
            write_curve(&p.curve(&qs, false)?, p.critical().alpha, &out)
        }
        Command::CurveTrine { theta, sweep, out } => {
            let t = trine(theta)?;
            let qs = grid(sweep.q_min, sweep.q_max, sweep.steps)?;
            write_curve(&t.curve(&qs, false)?, t.critical().alpha, &out)
        }
        Command::Regions { cos_theta, steps, out } => regions(cos_theta, steps, &out),
        Command::Compare {
            family: f,
            range: r,
            oracle,
            out,
            json,
        } => {
            let fam = family(&f)?;
            compare(&fam, &range(&fam, &r)?, &oracle, &out, json)
        }
        Command::Simulate {
            family: f,
            range: r,
            trials,
            seed,
            out,
            json,
        } => {
            let fam = family(&f)?;
            simulate(&fam, &range(&fam, &r)?, trials, seed, &out, json)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("frio: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Numerical(msg)) => {
            eprintln!("frio: numerical failure: {msg}");
            ExitCode::from(3)
        }
        Err(Failure::Io(e)) => {
            eprintln!("frio: {e}");
            ExitCode::from(1)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(g(0.0), "0");
        assert_eq!(g(0.5), "0.5");
        assert_eq!(g(1.0), "1");
        assert_eq!(g(1.0 / 3.0), "0.333333333333");
        assert_eq!(g(2.0 / 3.0), "0.666666666667");
        assert_eq!(g(-0.0669872981078), "-0.0669872981078");
        assert_eq!(g(1.5e-7), "1.5e-07");
        assert_eq!(g(123456789012345.0), "1.23456789012e+14");
        assert_eq!(g(0.99999999999999), "1");
        assert_eq!(g(f64::NAN), "nan");
    }

    #[test]
    fn grids_are_validated() {
        assert!(grid(0.0, 1.0, 2).is_ok());
        assert!(matches!(grid(0.0, 1.0, 1), Err(Failure::Usage(_))));
        assert!(matches!(grid(0.5, 0.2, 5), Err(Failure::Usage(_))));
        assert!(matches!(grid(-0.1, 0.2, 5), Err(Failure::Usage(_))));
        assert!(matches!(trine(0.0), Err(Failure::Usage(_))));
        assert!(matches!(trine(1.0), Err(Failure::Usage(_))));
        assert!(trine(FRAC_PI_4).is_ok());
    }
}
