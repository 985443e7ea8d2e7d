//! Command-line interface. Exit codes: 0 success, 1 mathematical failure
//! (verification rejected, reproduction diff, conjecture counterexample),
//! 2 usage error.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;

use rnforge::app::{config, conjecture, jsonl, reproduce};
use rnforge::certify::{certify_equation, verify_certificate, CertifyOutcome, Strategy};
use rnforge::families;
use rnforge::model::{enumerate_solutions, Equation, DEFAULT_N_MAX, DEFAULT_SIEVE_MODULI};
use rnforge::pell::{self, PellProblem};
use rnforge::search::{run_search, SearchConfig, SearchMode};
use rnforge::RnError;

#[derive(Parser)]
#[command(name = "rnforge", version, about = "Ramanujan-Nagell type equation toolkit")]
struct Cli {
    /// write JSONL output here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct EquationArgs {
    #[arg(long = "A", allow_hyphen_values = true)]
    a: BigInt,
    #[arg(long)]
    k: u64,
    #[arg(long = "B", allow_hyphen_values = true)]
    b: BigInt,
}

impl EquationArgs {
    fn equation(&self) -> rnforge::Result<Equation> {
        Equation::new(self.a.clone(), self.k, self.b.clone())
    }
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate all solutions with n <= n-max
    Enumerate {
        #[command(flatten)]
        eq: EquationArgs,
        #[arg(long = "n-max", default_value_t = DEFAULT_N_MAX)]
        n_max: u64,
    },
    /// Divisor-method search for equations with many solutions
    Search {
        #[arg(long, default_value_t = 2)]
        k: u64,
        #[arg(long = "p-max", default_value_t = 30)]
        p_max: u32,
        #[arg(long = "a-max", default_value_t = 2000)]
        a_max: u64,
        #[arg(long = "n-max", default_value_t = 60)]
        n_max: u64,
        #[arg(long = "min-solutions", default_value_t = 5)]
        min_solutions: usize,
        /// search mode: general, unit-a, or negative-a
        #[arg(long, default_value = "general")]
        mode: String,
        #[arg(long, default_value_t = 0)]
        workers: usize,
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        /// flat key=value config file; explicit flags win
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Build a completeness certificate
    Certify {
        #[command(flatten)]
        eq: EquationArgs,
        #[arg(long = "n-direct")]
        n_direct: Option<u64>,
        /// comma-separated strategy: kadic_reduction,modular,factor_even,pell_sieve
        #[arg(long)]
        strategy: Option<String>,
    },
    /// Verify a certificate file (JSONL, one certificate per line)
    VerifyCert { path: PathBuf },
    /// Construct and verify a parametric family instance
    Family {
        /// construct_four | k2_five | beukers | even_k | neg_conj
        id: String,
        /// named integer parameters, e.g. k=2 p=1 q=2 r=3
        params: Vec<String>,
    },
    /// Pell utilities: fundamental unit and class representatives
    Pell {
        #[arg(long, allow_hyphen_values = true)]
        d: BigInt,
        #[arg(long = "N", allow_hyphen_values = true)]
        n: Option<BigInt>,
    },
    /// Box scans for the y^n + B conjectures and the negative-A census
    Conjecture {
        #[arg(long = "B", allow_hyphen_values = true)]
        b: Option<BigInt>,
        #[arg(long = "y-max", default_value_t = conjecture::CONJ_Y_MAX)]
        y_max: u64,
        #[arg(long = "value-cap", default_value_t = conjecture::CONJ_VALUE_CAP)]
        value_cap: u64,
        /// run the negative-A census instead (uses --census-* boxes)
        #[arg(long)]
        census: bool,
        #[arg(long = "census-a-max", default_value_t = 1)]
        census_a_max: u64,
        #[arg(long = "census-b-max", default_value_t = 5000)]
        census_b_max: u64,
        #[arg(long = "census-bound", default_value_t = 3)]
        census_bound: usize,
    },
    /// Re-derive a published target and diff against expectations
    Reproduce {
        /// one of thm2.2 thm2.3 thm2.5 thm3.2 table13 tables1-12 remark-1088 stiller, or "all"
        target: String,
    },
}

struct Output {
    sink: Box<dyn Write>,
}

impl Output {
    fn new(out: &Option<PathBuf>) -> rnforge::Result<Output> {
        let sink: Box<dyn Write> = match out {
            Some(path) => Box::new(std::fs::File::create(path)?),
            None => Box::new(std::io::stdout()),
        };
        Ok(Output { sink })
    }

    fn emit(&mut self, v: &serde_json::Value) -> rnforge::Result<()> {
        writeln!(self.sink, "{v}")?;
        Ok(())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(math_ok) => {
            if math_ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(RnError::Domain(msg)) | Err(RnError::UnknownTarget(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> rnforge::Result<bool> {
    let mut out = Output::new(&cli.out)?;
    match cli.command {
        Command::Enumerate { eq, n_max } => {
            let eq = eq.equation()?;
            let set = enumerate_solutions(&eq, n_max, Some(&DEFAULT_SIEVE_MODULI));
            for sol in &set.solutions {
                out.emit(&jsonl::solution_record(&eq, sol))?;
            }
            Ok(true)
        }
        Command::Search {
            k,
            p_max,
            a_max,
            n_max,
            min_solutions,
            mode,
            workers,
            checkpoint,
            config: config_path,
        } => {
            let mut cfg = SearchConfig {
                k,
                p_range: (1, p_max),
                a_range: (1, a_max),
                n_max,
                min_solutions,
                require_sqfree_gcd: true,
                mode: match mode.as_str() {
                    "general" => SearchMode::General,
                    "unit-a" => SearchMode::UnitA {
                        q_range: (1, p_max.saturating_sub(1)),
                        coprime_filter: true,
                    },
                    "negative-a" => SearchMode::NegativeA,
                    other => return Err(RnError::Domain(format!("unknown mode '{other}'"))),
                },
                workers: config::effective_workers(workers),
                checkpoint_path: checkpoint,
                b_formula_kp: false,
            };
            if let Some(path) = config_path {
                apply_search_config(&mut cfg, &config::load_config(&path)?)?;
            }
            let hits = run_search(&cfg)?;
            for hit in &hits {
                out.emit(&jsonl::hit_record(hit))?;
            }
            Ok(true)
        }
        Command::Certify {
            eq,
            n_direct,
            strategy,
        } => {
            let eq = eq.equation()?;
            let strat: Vec<Strategy> = match strategy {
                Some(text) => text
                    .split(',')
                    .map(|s| s.trim().parse())
                    .collect::<rnforge::Result<_>>()?,
                None => rnforge::certify::DEFAULT_STRATEGY.to_vec(),
            };
            let n_direct = n_direct.unwrap_or_else(|| default_n_direct(&eq));
            match certify_equation(&eq, n_direct, &strat)? {
                CertifyOutcome::Certified(cert) => {
                    let ok = verify_certificate(&cert)?;
                    out.emit(&jsonl::certificate_record(&cert))?;
                    Ok(ok)
                }
                CertifyOutcome::Bounded(set) => {
                    for sol in &set.solutions {
                        out.emit(&jsonl::solution_record(&set.equation, sol))?;
                    }
                    out.emit(&jsonl::report_record(
                        "certify",
                        "bounded-only",
                        &[format!("no certificate within caps; exhaustive to n = {n_direct}")],
                    ))?;
                    Ok(false)
                }
            }
        }
        Command::VerifyCert { path } => {
            let text = std::fs::read_to_string(&path)?;
            let mut all_ok = true;
            for line in text.lines().filter(|l| !l.trim().is_empty()) {
                let value: serde_json::Value = serde_json::from_str(line)?;
                let cert = jsonl::parse_certificate(&value)?;
                let ok = verify_certificate(&cert)?;
                all_ok &= ok;
                out.emit(&jsonl::report_record(
                    "verify-cert",
                    if ok { "accepted" } else { "rejected" },
                    &[],
                ))?;
            }
            Ok(all_ok)
        }
        Command::Family { id, params } => {
            let get = |key: &str| -> rnforge::Result<i64> {
                params
                    .iter()
                    .find_map(|p| p.strip_prefix(&format!("{key}=")))
                    .ok_or_else(|| RnError::Domain(format!("missing parameter {key}=")))?
                    .parse()
                    .map_err(|_| RnError::Domain(format!("bad integer for {key}")))
            };
            let inst = match id.as_str() {
                "construct_four" => families::construct_four(
                    get("k")? as u64,
                    get("p")? as u32,
                    get("q")? as u32,
                    get("r")? as u32,
                )?,
                "k2_five" => families::family_k2_five(get("variant")? as u8, get("m")? as u32)?,
                "beukers" => {
                    families::family_beukers(get("t")? as u32, get("eps")? as i8, get("m")? as u32)?
                }
                "even_k" => families::family_even_k(get("t")? as u32, get("m")? as u32)?,
                "neg_conj" => {
                    families::family_neg_conj(get("variant")? as u8, get("m")? as u32)?
                }
                other => return Err(RnError::Domain(format!("unknown family '{other}'"))),
            };
            let reports = families::verify_family_range(std::slice::from_ref(&inst), None);
            let rep = &reports[0];
            for sol in &inst.promised_solutions {
                out.emit(&jsonl::solution_record(&inst.equation, sol))?;
            }
            out.emit(&jsonl::report_record(
                &format!("family:{}", inst.family_id),
                if rep.promised_ok { "verified" } else { "failed" },
                &rep.extras
                    .iter()
                    .map(|s| format!("extra solution at n = {}", s.n))
                    .collect::<Vec<_>>(),
            ))?;
            Ok(rep.promised_ok)
        }
        Command::Pell { d, n } => {
            let unit = pell::pell_fundamental(&d)?;
            out.emit(&serde_json::json!({
                "type": "pell-unit",
                "D": d.to_string(), "u": unit.u.to_string(), "v": unit.v.to_string(),
            }))?;
            if let Some(n) = n {
                let pr = PellProblem::new(d, n)?;
                for cl in pell::pell_class_reps(&pr)? {
                    out.emit(&serde_json::json!({
                        "type": "pell-class",
                        "x0": cl.x0.to_string(), "y0": cl.y0.to_string(),
                    }))?;
                }
            }
            Ok(true)
        }
        Command::Conjecture {
            b,
            y_max,
            value_cap,
            census,
            census_a_max,
            census_b_max,
            census_bound,
        } => {
            if census {
                let rep = conjecture::census_max_solutions(
                    &[2, 3, 5],
                    census_a_max,
                    census_b_max,
                    64,
                    census_bound,
                )?;
                let consistent = rep.counterexamples.is_empty();
                out.emit(&serde_json::json!({
                    "type": "census",
                    "max_count": rep.max_count.to_string(),
                    "histogram": rep.histogram.iter()
                        .map(|(k, v)| (k.to_string(), v.to_string()))
                        .collect::<std::collections::BTreeMap<_, _>>(),
                    "status": if consistent { "no counterexample in box" } else { "counterexample found" },
                }))?;
                for set in &rep.counterexamples {
                    for sol in &set.solutions {
                        out.emit(&jsonl::solution_record(&set.equation, sol))?;
                    }
                }
                Ok(consistent)
            } else {
                let b = b.ok_or_else(|| RnError::Domain("--B required without --census".into()))?;
                let triples = conjecture::conjecture_yn(&b, y_max, &BigInt::from(value_cap))?;
                for (x, y, n) in &triples {
                    out.emit(&serde_json::json!({
                        "type": "yn-solution",
                        "B": b.to_string(), "x": x.to_string(),
                        "y": y.to_string(), "n": n.to_string(),
                    }))?;
                }
                Ok(true)
            }
        }
        Command::Reproduce { target } => {
            let targets: Vec<&str> = if target == "all" {
                reproduce::TARGETS.to_vec()
            } else {
                vec![target.as_str()]
            };
            let mut all_ok = true;
            for t in targets {
                let rep = reproduce::reproduce(t)?;
                all_ok &= rep.passed;
                out.emit(&jsonl::report_record(
                    &rep.target,
                    if rep.passed { "pass" } else { "fail" },
                    &rep.diffs,
                ))?;
            }
            Ok(all_ok)
        }
    }
}

/// Default direct range: past any k-adic reduction depth and the largest
/// solution found by a quick bounded scan, with margin.
fn default_n_direct(eq: &Equation) -> u64 {
    let mut n = DEFAULT_N_MAX;
    if let Some(step) = rnforge::certify::reduce_kadic(eq) {
        n = n.max(step.low_range_checked + 2);
    }
    let quick = enumerate_solutions(eq, n, Some(&DEFAULT_SIEVE_MODULI));
    quick
        .solutions
        .iter()
        .map(|s| s.n)
        .max()
        .unwrap_or(0)
        .max(n.min(40))
        + 8
}

fn apply_search_config(
    cfg: &mut SearchConfig,
    map: &std::collections::BTreeMap<String, String>,
) -> rnforge::Result<()> {
    let parse = |key: &str, v: &str| -> rnforge::Result<u64> {
        v.parse()
            .map_err(|_| RnError::Domain(format!("config: bad integer for {key}")))
    };
    for (key, value) in map {
        match key.as_str() {
            "k" => cfg.k = parse(key, value)?,
            "p_max" => cfg.p_range.1 = parse(key, value)? as u32,
            "a_max" => cfg.a_range.1 = parse(key, value)?,
            "n_max" => cfg.n_max = parse(key, value)?,
            "min_solutions" => cfg.min_solutions = parse(key, value)? as usize,
            "workers" => cfg.workers = config::effective_workers(parse(key, value)? as usize),
            other => {
                return Err(RnError::Domain(format!("config: unknown key '{other}'")));
            }
        }
    }
    Ok(())
}
