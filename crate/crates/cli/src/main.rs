use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hyperfactor::combinatorics::{enumerate_types, LevelSet, TypeVector};
use hyperfactor::constructors::{construct_div, construct_general_l_div, plan, Branch};
use hyperfactor::decide::{decide, decide_general, Status, Verdict, Witness};
use hyperfactor::error::Error;
use hyperfactor::factorization::Factorization;
use hyperfactor::flow::FlowOptions;
use hyperfactor::format::{parse_document, write_certificate, write_factorization, Document};
use hyperfactor::pipeline::{construct_general_with, construct_with};
use hyperfactor::system::{verify_certificate_streaming, SolutionVector};
use hyperfactor::exec::Execution;
use hyperfactor::verifier::verify_factorization;

const OK: u8 = 0;
const NO: u8 = 1;
const FAILED: u8 = 2;
const UNKNOWN: u8 = 3;

#[derive(Parser)]
#[command(name = "hyperfactor", version, about = "Decide and construct 1-factorizations of binom([n], L)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Problem {
    /// Ground set size.
    #[arg(long)]
    n: usize,
    /// All sizes 1..=k.
    #[arg(long, conflicts_with = "levels", required_unless_present = "levels")]
    k: Option<usize>,
    /// Explicit sizes, comma separated.
    #[arg(long)]
    levels: Option<LevelSet>,
}

impl Problem {
    fn levels(&self) -> LevelSet {
        match (&self.levels, self.k) {
            (Some(l), _) => l.clone(),
            (None, Some(k)) => LevelSet::up_to(k),
            (None, None) => unreachable!("clap requires one of --k and --levels"),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a 1-factorization exists.
    Decide(Problem),
    /// Build a verified 1-factorization.
    Construct {
        #[command(flatten)]
        problem: Problem,
        /// Write the factorization here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Report every flow step on stderr.
        #[arg(long)]
        trace: bool,
    },
    /// Print a non-negative integer solution of the counting system.
    Solve(Problem),
    /// Print a Farkas certificate of non-factorability.
    Certificate {
        #[command(flatten)]
        problem: Problem,
        /// Write a certificate file here instead of printing the vector.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a factorization or certificate file.
    Verify {
        #[arg(long)]
        file: PathBuf,
    },
    /// List the types of n with parts in L, in canonical order.
    Types(Problem),
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let code = match run(cli.command) {
        Ok(code) => code,
        Err(Error::NotFactorable(m)) => {
            eprintln!("not factorable: {m}");
            NO
        }
        Err(e) => {
            eprintln!("error: {e}");
            FAILED
        }
    };
    ExitCode::from(code)
}

fn status_code(s: Status) -> u8 {
    match s {
        Status::Factorable => OK,
        Status::NotFactorable => NO,
        Status::RationallyFeasibleUnknownIntegral | Status::Unknown => UNKNOWN,
    }
}

fn verdict(p: &Problem) -> Result<Verdict, Error> {
    match p.k {
        Some(k) => decide(p.n, k),
        None => decide_general(p.n, &p.levels()),
    }
}

fn run(command: Command) -> Result<u8, Error> {
    match command {
        Command::Decide(p) => {
            let v = verdict(&p)?;
            println!("{}", v.status);
            println!("reason: {}", v.reason);
            match &v.witness {
                Witness::Plan(plan) => println!("plan: {plan}"),
                Witness::Certificate { n, levels, certificate, .. } => {
                    println!("certificate: {certificate} (n={n} levels={levels})")
                }
                Witness::Solution(x) => println!("solution: {} types, {} factors", x.support_len(), x.total()),
                Witness::SearchExhausted { nodes } => println!("search exhausted after {nodes} nodes"),
                Witness::None => {}
            }
            Ok(status_code(v.status))
        }
        Command::Construct { problem, out, trace } => {
            let f = construct(&problem, trace)?;
            let text = write_factorization(&f);
            match out {
                Some(path) => {
                    fs::write(&path, text).map_err(|e| io_error(&path, e))?;
                    eprintln!("wrote {} factors to {}", f.len(), path.display());
                }
                None => print!("{text}"),
            }
            Ok(OK)
        }
        Command::Solve(p) => {
            let x = solve(&p)?;
            print!("{x}");
            Ok(OK)
        }
        Command::Certificate { problem, out } => {
            let v = verdict(&problem)?;
            let Witness::Certificate { n, levels, certificate, .. } = &v.witness else {
                eprintln!("no certificate: {v}");
                return Ok(match v.status {
                    Status::Factorable | Status::NotFactorable => NO,
                    _ => UNKNOWN,
                });
            };
            if (*n, levels) != (problem.n, &problem.levels()) {
                eprintln!("certificate is for the reduced problem n={n}, levels={levels}");
            }
            match out {
                Some(path) => {
                    fs::write(&path, write_certificate(*n, levels, certificate)).map_err(|e| io_error(&path, e))?;
                }
                None => println!("{certificate}"),
            }
            Ok(OK)
        }
        Command::Verify { file } => {
            let text = fs::read_to_string(&file).map_err(|e| io_error(&file, e))?;
            match parse_document(&text)? {
                Document::Factorization(f) => {
                    let v = verify_factorization(&f)?;
                    if v.is_empty() {
                        println!("OK: {} factors over n={} levels={}", f.len(), f.n(), f.levels());
                        return Ok(OK);
                    }
                    println!("INVALID: {} violation(s)", v.len());
                    for x in &v {
                        println!("  {x}");
                    }
                    Ok(NO)
                }
                Document::Certificate(c) => {
                    let check = verify_certificate_streaming(c.n, &c.levels, &c.certificate, Execution::default())?;
                    if check.is_valid() {
                        println!("OK: certificate valid for n={} levels={}", c.n, c.levels);
                        Ok(OK)
                    } else {
                        println!("INVALID: {check:?}");
                        Ok(NO)
                    }
                }
            }
        }
        Command::Types(p) => {
            let levels = p.levels();
            levels.check_for(p.n)?;
            let mut out = std::io::stdout().lock();
            for t in enumerate_types(p.n, &levels) {
                writeln!(out, "{t}").map_err(|e| Error::Internal(e.to_string()))?;
            }
            Ok(OK)
        }
    }
}

fn construct(p: &Problem, trace: bool) -> Result<Factorization, Error> {
    let options = FlowOptions::default();
    let mut observer = |r: &hyperfactor::flow::StepReport, _: &hyperfactor::flow::EvolutionState| {
        if trace {
            eprintln!("step ell={} flow={} occurrence_nodes={}", r.ell, r.flow_value, r.occurrence_nodes);
        }
    };
    match p.k {
        Some(k) => construct_with(p.n, k, &options, &mut observer),
        None => construct_general_with(p.n, &p.levels(), &options, &mut observer),
    }
}

/// A solution of the system for `(n, L)` itself: closed form where one
/// exists, otherwise the type counts of a constructed factorization.
fn solve(p: &Problem) -> Result<SolutionVector, Error> {
    let levels = p.levels();
    levels.check_for(p.n)?;
    if levels.is_initial_segment() {
        let k = levels.max();
        if matches!(plan(p.n, k)?.branch, Branch::DivGeneric | Branch::DivEdge) {
            return construct_div(p.n, k);
        }
    } else if let Ok(x) = construct_general_l_div(p.n, &levels) {
        return Ok(x);
    }
    let f = construct(p, false)?;
    let k = levels.max();
    let mut x = SolutionVector::new();
    for factor in f.factors() {
        let mut lambda = vec![0u32; k];
        for s in factor {
            lambda[s.len() - 1] += 1;
        }
        x.add(TypeVector::new(lambda), 1u32.into());
    }
    Ok(x)
}

fn io_error(path: &std::path::Path, e: std::io::Error) -> Error {
    Error::InvalidArgument(format!("{}: {e}", path.display()))
}
