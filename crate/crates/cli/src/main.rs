use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use serde_json::json;

use fpair_core::constructions::op_polar_dual;
use fpair_core::geometry::VPolytope;
use fpair_core::lattice::{lattice_of, FPair};
use fpair_core::oracle::{self, Status};
use fpair_core::planner::{
    self, verify_polytope, write_bundle, Budget, CertifyError, ConstructError, PlanError, Planner,
};

/// Feasibility of (f0, f1) pairs for d-polytopes, with certified witnesses.
///
/// Exit status: 0 success, 1 negative answer, 2 error.
#[derive(Parser, Debug)]
#[command(name = "fpair", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classify a pair.
    Feasible {
        d: usize,
        f0: usize,
        f1: usize,
        #[arg(long)]
        json: bool,
    },
    /// Plan, execute and certify a witness, then write its bundle.
    Construct {
        d: usize,
        f0: usize,
        f1: usize,
        #[arg(short = 'o', long = "out")]
        out: PathBuf,
        /// Maximum recipe length.
        #[arg(long)]
        budget: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Recompute hull, lattice and pair of a polytope file and run the invariant checks.
    Verify {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Verdicts for the band of every f0 up to a bound.
    Table {
        d: usize,
        #[arg(long = "f0-max")]
        f0_max: usize,
        /// Also plan and certify every feasible pair.
        #[arg(long)]
        certify: bool,
        #[arg(long)]
        budget: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Write the polar dual of a polytope file.
    Dual {
        file: PathBuf,
        #[arg(short = 'o', long = "out")]
        out: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Print the f-vector of a polytope file.
    Fvector {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
}

const NEGATIVE: u8 = 1;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn print_json(v: &impl serde::Serialize) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(v)?);
    Ok(())
}

fn read_polytope(path: &Path) -> Result<VPolytope> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    VPolytope::from_json_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn budget(max_len: Option<usize>) -> Budget {
    let mut b = Budget::default();
    if let Some(n) = max_len {
        b.max_len = n;
    }
    b
}

fn run(cmd: Command) -> Result<u8> {
    match cmd {
        Command::Feasible { d, f0, f1, json } => {
            let v = oracle::feasible(d, f0, f1)?;
            if json {
                print_json(&v)?;
            } else {
                print!("{v}");
            }
            Ok(if v.status == Status::Infeasible { NEGATIVE } else { 0 })
        }
        Command::Construct {
            d,
            f0,
            f1,
            out,
            budget: b,
            json,
        } => construct(FPair::new(d, f0, f1), &out, budget(b), json),
        Command::Verify { file, json } => {
            let p = read_polytope(&file)?;
            let report = verify_polytope(&p)?;
            if json {
                print_json(&report)?;
            } else {
                let FPair { d, f0, f1 } = report.fpair;
                println!(
                    "{}: d = {d}, (f0, f1) = ({f0}, {f1})",
                    if report.pass { "pass" } else { "fail" }
                );
                println!("f-vector {:?}", report.fvector);
                for i in &report.redundant {
                    println!("point {i} is not a vertex");
                }
                for (check, ok) in &report.checks {
                    println!("  {check}: {}", if *ok { "ok" } else { "FAILED" });
                }
            }
            Ok(if report.pass { 0 } else { NEGATIVE })
        }
        Command::Table {
            d,
            f0_max,
            certify,
            budget: b,
            json,
        } => {
            let mut planner = Planner::new(budget(b));
            let t = planner::table(d, f0_max, certify.then_some(&mut planner))?;
            if json {
                print_json(&t)?;
            } else {
                print!("{t}");
            }
            Ok(0)
        }
        Command::Dual { file, out, json } => {
            let p = read_polytope(&file)?;
            let q = op_polar_dual(&p)?;
            std::fs::write(&out, q.to_json_string() + "\n").with_context(|| format!("writing {}", out.display()))?;
            if json {
                print_json(&json!({ "out": out, "dimension": q.dim(), "vertices": q.nvertices() }))?;
            } else {
                println!("wrote {} ({} vertices)", out.display(), q.nvertices());
            }
            Ok(0)
        }
        Command::Fvector { file, json } => {
            let p = read_polytope(&file)?;
            let l = lattice_of(&p)?;
            if json {
                print_json(&json!({ "dimension": l.dim(), "fvector": l.fvector() }))?;
            } else {
                let parts: Vec<String> = l.fvector().iter().map(usize::to_string).collect();
                println!("({})", parts.join(", "));
            }
            Ok(0)
        }
    }
}

fn construct(target: FPair, out: &Path, budget: Budget, json: bool) -> Result<u8> {
    let mut planner = Planner::new(budget);
    match planner.construct(target) {
        Ok(w) => {
            write_bundle(out, &w).with_context(|| format!("writing bundle to {}", out.display()))?;
            if json {
                print_json(&json!({
                    "fpair": w.fpair,
                    "recipe": w.recipe.to_string(),
                    "steps": w.recipe.total_steps(),
                    "checks": w.checks,
                    "out": out,
                }))?;
            } else {
                println!("{}: {}", w.fpair, w.recipe);
                println!("wrote {}", out.display());
            }
            Ok(0)
        }
        Err(ConstructError::Plan(PlanError::NotFeasible(v))) => {
            if json {
                print_json(&v)?;
            } else {
                print!("{v}");
            }
            Ok(NEGATIVE)
        }
        Err(ConstructError::Plan(PlanError::NoPlanFound(f))) => {
            if json {
                print_json(&f)?;
            } else {
                print!("{f}");
            }
            Ok(NEGATIVE)
        }
        Err(ConstructError::Certify(e @ CertifyError::LawViolation { .. })) => {
            Err(anyhow::Error::new(e).context("certification rejected the planned recipe"))
        }
        Err(e) => Err(e.into()),
    }
}
