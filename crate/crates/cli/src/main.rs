//! `advdual`: solve, sweep, attack and verify adversarial surrogate-risk
//! instances.
//!
//! Exit codes: 0 success, 1 certified gap above tolerance, 2 usage, parse or
//! validation error, 3 solver did not converge, 4 verification mismatch.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use advdual::dualsolve::brute_dual;
use advdual::io::{
    load_instance, load_result, save_result, sweep_csv, sweep_svg, to_canonical_json, verify_result, DualRecord,
    Instance, ResultFile,
};
use advdual::measures::winf_distance;
use advdual::pipeline::{default_tol, solve, sweep};
use advdual::primalsolve::grid_search_primal;
use advdual::{Error, Loss};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

const EXIT_GAP: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_NONCONVERGED: u8 = 3;
const EXIT_MISMATCH: u8 = 4;

#[derive(Parser, Debug)]
#[command(name = "advdual", version, about = "Adversarial surrogate risks, their duals, and optimality certificates")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// Gap tolerance, relative to max(1, total mass) [default: 1e-4 for exp, 1e-3 otherwise]
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Seed recorded in results and passed to the solvers [default: from the instance file]
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads for ball operators (0 = all cores)
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    #[arg(long, global = true, default_value = "exp", value_parser = parse_loss)]
    loss: Loss,
    /// Output file (result JSON, sweep CSV or attack JSON)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Format of the summary printed on stdout
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

fn parse_loss(s: &str) -> Result<Loss, String> {
    s.parse::<Loss>().map_err(|e| e.to_string())
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve and certify one instance for --loss
    Solve { instance: PathBuf },
    /// Solve over a grid of epsilon values and write a CSV table
    Sweep {
        instance: PathBuf,
        /// Comma-separated epsilon values
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        eps: Vec<f64>,
        /// Also draw primal and dual against epsilon
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// W-infinity distance between the class measures (equal totals), or
    /// between each class and its stored attack when --result is given
    Winf {
        instance: PathBuf,
        #[arg(long)]
        result: Option<PathBuf>,
    },
    /// Emit the optimal attack: couplings as (source, target, mass) and the attacked masses
    Attack { instance: PathBuf },
    /// Recompute a stored result from its witnesses
    Verify { instance: PathBuf, result: PathBuf },
    /// Brute-force dual and grid-search primal values (small instances only)
    Oracle {
        instance: PathBuf,
        /// Subdivisions of each source simplex
        #[arg(long, default_value_t = 40)]
        grid_steps: usize,
    },
}

/// A failure mapped to an exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure { code: EXIT_INPUT, message: e.to_string() }
    }
}

type Outcome = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.common.threads).build_global() {
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_INPUT);
    }
    let outcome = match &cli.command {
        Command::Solve { instance } => cmd_solve(&cli.common, instance),
        Command::Sweep { instance, eps, svg } => cmd_sweep(&cli.common, instance, eps, svg.as_deref()),
        Command::Winf { instance, result } => cmd_winf(&cli.common, instance, result.as_deref()),
        Command::Attack { instance } => cmd_attack(&cli.common, instance),
        Command::Verify { instance, result } => cmd_verify(&cli.common, instance, result),
        Command::Oracle { instance, grid_steps } => cmd_oracle(&cli.common, instance, *grid_steps),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn load(path: &Path, common: &Common) -> Result<Instance, Failure> {
    let mut inst = load_instance(path)?;
    if let Some(seed) = common.seed {
        inst.file.primal.seed = seed;
        inst.file.dual.seed = seed;
    }
    Ok(inst)
}

fn write_out(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure { code: EXIT_INPUT, message: format!("{}: {e}", path.display()) })
}

fn losses_for(requested: Loss) -> Vec<Loss> {
    if requested == Loss::Exponential {
        vec![Loss::Exponential]
    } else {
        vec![Loss::Exponential, requested]
    }
}

fn fmt(v: f64) -> String {
    format!("{v:.10e}")
}

fn cmd_solve(common: &Common, path: &Path) -> Outcome {
    let inst = load(path, common)?;
    let tol = common.tol.unwrap_or_else(|| default_tol(common.loss));
    let start = Instant::now();
    let sol = solve(&inst.ground, &inst.measure, &losses_for(common.loss), &inst.file.primal, &inst.file.dual)?;
    let elapsed = start.elapsed().as_secs_f64() * 1e3;
    let result = ResultFile::new(&inst, &sol, common.loss, tol, inst.file.primal.seed, None);
    if let Some(out) = &common.out {
        save_result(out, &result)?;
    }
    let total = inst.measure.total();
    let cert = sol.certificate(common.loss).expect("requested loss certified");
    let ok = cert.within(tol, total);
    match common.format {
        Format::Text => {
            let tag = if cert.diagnostic {
                "DIAGNOSTIC"
            } else if ok {
                "CERTIFIED"
            } else {
                "GAP_EXCEEDED"
            };
            println!(
                "{} primal={} dual={} gap={} r1={} r0={} r_pt={} support={} winf_ok={} {tag} ({elapsed:.1} ms)",
                cert.loss,
                fmt(cert.primal_value),
                fmt(cert.dual_value),
                fmt(cert.gap),
                fmt(cert.slack_sup_r1),
                fmt(cert.slack_sup_r0),
                fmt(cert.slack_pointwise),
                fmt(cert.support_violation),
                cert.winf_ok,
            );
        }
        Format::Json => {
            let mut v = serde_json::to_value(advdual::io::CertificateRecord::from(cert)).expect("serializable");
            v["within_tol"] = json!(ok);
            v["converged"] = json!(sol.converged());
            println!("{v}");
        }
    }
    if cert.diagnostic {
        eprintln!("warning: zero-one results are diagnostic only; the gap is reported, not certified");
    }
    if !sol.converged() {
        eprintln!("error: solver did not converge (best iterate written)");
        return Ok(EXIT_NONCONVERGED);
    }
    if !cert.diagnostic && !ok {
        eprintln!("error: gap {} exceeds tolerance {tol}", cert.gap);
        return Ok(EXIT_GAP);
    }
    Ok(0)
}

fn cmd_sweep(common: &Common, path: &Path, grid: &[f64], svg: Option<&Path>) -> Outcome {
    let inst = load(path, common)?;
    if grid.is_empty() {
        return Err(Failure { code: EXIT_INPUT, message: "empty epsilon grid (use --eps a,b,c)".into() });
    }
    if let Some(bad) = grid.iter().find(|e| !(**e >= 0.0) || !e.is_finite()) {
        return Err(Failure { code: EXIT_INPUT, message: format!("invalid epsilon {bad}") });
    }
    let mut eps: Vec<f64> = grid.to_vec();
    eps.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    let before = eps.len();
    eps.dedup();
    if eps.len() < before {
        eprintln!("warning: removed {} duplicate epsilon value(s)", before - eps.len());
    }
    let losses = losses_for(common.loss);
    let rows = sweep(&inst.ground, &inst.measure, &eps, &losses, &inst.file.primal, &inst.file.dual);
    let csv = sweep_csv(&rows)?;
    match &common.out {
        Some(out) => write_out(out, &csv)?,
        None => print!("{csv}"),
    }
    if let Some(svg) = svg {
        write_out(svg, &sweep_svg(&rows))?;
    }
    let failed = rows.iter().filter(|r| r.values.is_none()).count();
    if failed > 0 {
        eprintln!("error: {failed} sweep row(s) failed");
        return Ok(EXIT_NONCONVERGED);
    }
    Ok(0)
}

fn cmd_winf(common: &Common, path: &Path, result: Option<&Path>) -> Outcome {
    let inst = load(path, common)?;
    let g = &inst.ground;
    let report = match result {
        None => {
            let d = winf_distance(g, &inst.measure.mass0, &inst.measure.mass1)?;
            json!({ "winf_class0_class1": d })
        }
        Some(r) => {
            let res = load_result(r)?;
            let dual = res.dual.to_solution(g.len())?;
            let d0 = winf_distance(g, &inst.measure.mass0, &dual.m0)?;
            let d1 = winf_distance(g, &inst.measure.mass1, &dual.m1)?;
            let eps = g.epsilon();
            json!({ "winf_class0": d0, "winf_class1": d1, "epsilon": eps, "within_epsilon": d0 <= eps && d1 <= eps })
        }
    };
    emit(common, &report)?;
    Ok(0)
}

fn cmd_attack(common: &Common, path: &Path) -> Outcome {
    let inst = load(path, common)?;
    let sol = solve(&inst.ground, &inst.measure, &[Loss::Exponential], &inst.file.primal, &inst.file.dual)?;
    let rec = DualRecord::from_solution(&sol.dual);
    let report = json!({
        "coupling0": rec.coupling0,
        "coupling1": rec.coupling1,
        "m0": rec.m0,
        "m1": rec.m1,
        "points": inst.ground.points(),
    });
    emit(common, &report)?;
    if !sol.converged() {
        eprintln!("error: solver did not converge");
        return Ok(EXIT_NONCONVERGED);
    }
    Ok(0)
}

fn cmd_verify(common: &Common, path: &Path, result: &Path) -> Outcome {
    let inst = load(path, common)?;
    let res = load_result(result)?;
    match verify_result(&inst, &res) {
        Ok(()) => {
            println!("verified: {} certificate(s) reproduce from stored witnesses", res.certificates.len());
            Ok(0)
        }
        Err(msg) => Err(Failure { code: EXIT_MISMATCH, message: format!("verification failed: {msg}") }),
    }
}

fn cmd_oracle(common: &Common, path: &Path, steps: usize) -> Outcome {
    let inst = load(path, common)?;
    let (g, m) = (&inst.ground, &inst.measure);
    let dual = brute_dual(&common.loss, g, m, steps)?;
    let primal = match grid_search_primal(common.loss, g, m) {
        Ok((_, r)) => Some(r),
        Err(Error::InstanceTooLarge(_)) => None,
        Err(e) => return Err(e.into()),
    };
    emit(common, &json!({ "loss": common.loss.key(), "brute_dual": dual, "grid_primal": primal, "grid_steps": steps }))?;
    Ok(0)
}

/// JSON reports go to --out when given, else stdout.
fn emit(common: &Common, report: &serde_json::Value) -> Result<(), Failure> {
    let text = to_canonical_json(report)?;
    match &common.out {
        Some(out) => write_out(out, &text),
        None => {
            match common.format {
                Format::Json => println!("{report}"),
                Format::Text => print!("{text}"),
            }
            Ok(())
        }
    }
}
