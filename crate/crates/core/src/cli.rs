//! Command-line front end. [`dispatch`] is the whole program; `main` only
//! wires it to the process streams.
//!
//! Exit codes: 0 success, 1 negative verdict, 2 usage or precondition error.

use std::io::Write;
use std::path::PathBuf;

use clap::{ArgAction, Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::duplication::{
    almost_inclusion_from_reduction, verify_m_equivalence, verify_one_reduction, DuplicationError,
    InclusionConclusion, InclusionOutcome,
};
use crate::funcdsl::{bi_immune_refuter, FuncTerm};
use crate::harness::{run_suite, SuiteConfig};
use crate::oracle::Oracle;
use crate::paramsets::{antichain_family, AlmostInclusion, PeriodicSet};
use crate::randomness::{coverage_experiment, test_level, DEFAULT_SEARCH_CAP};
use crate::Nat;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "rigiditylab",
    version,
    about = "Finite experiments on m-rigidity, duplication and randomness tests"
)]
struct Cli {
    #[arg(long, value_enum, default_value = "text", global = true)]
    format: Format,
    /// Omit the timestamp from report file names.
    #[arg(long, global = true)]
    no_timestamp: bool,
    /// Report path for `suite`.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate a term at a point.
    Eval {
        #[arg(short = 'f')]
        term: FuncTerm,
        #[arg(short = 'x')]
        x: Nat,
    },
    /// Print the antichain family member S_i.
    Family {
        #[arg(short = 'i')]
        i: u32,
    },
    /// Decide S ⊆* T.
    AlmostSubset {
        #[arg(short = 's')]
        s: PeriodicSet,
        #[arg(short = 't')]
        t: PeriodicSet,
    },
    /// Check B_S ≡_m A on a window.
    DupVerify {
        #[arg(short = 's')]
        s: PeriodicSet,
        #[arg(short = 'c')]
        c: Nat,
        #[arg(short = 'a')]
        a: Oracle,
        #[arg(long, default_value_t = 5000)]
        bound: u64,
    },
    /// Build the test level U_n for k.
    MlTest {
        #[arg(short = 'k')]
        k: FuncTerm,
        #[arg(short = 'n')]
        n: usize,
        #[arg(long)]
        measure_only: bool,
        #[arg(long, default_value_t = DEFAULT_SEARCH_CAP)]
        search_cap: u64,
    },
    /// Check a candidate 1-reduction between two oracles.
    #[command(disable_help_flag = true)]
    VerifyReduction {
        #[arg(short = 'h')]
        h: FuncTerm,
        #[arg(long)]
        src: Oracle,
        #[arg(long)]
        tgt: Oracle,
        #[arg(long, default_value_t = 10_000)]
        bound: u64,
        #[arg(long, action = ArgAction::Help)]
        help: Option<bool>,
    },
    /// Run the key-claim pipeline from a reduction B_S ≤₁ B_T.
    #[command(disable_help_flag = true)]
    DeriveInclusion {
        #[arg(short = 'h')]
        h: FuncTerm,
        #[arg(short = 's')]
        s: PeriodicSet,
        #[arg(short = 't')]
        t: PeriodicSet,
        #[arg(short = 'a')]
        a: Oracle,
        /// Duplication fallback; defaults to the least zero of A.
        #[arg(short = 'c')]
        c: Option<Nat>,
        #[arg(long, default_value_t = 0)]
        n0: u64,
        #[arg(long, default_value_t = 2000)]
        bound: u64,
        #[arg(long, action = ArgAction::Help)]
        help: Option<bool>,
    },
    /// Monte Carlo coverage of U_n by seeded random oracles.
    Coverage {
        #[arg(short = 'k')]
        k: FuncTerm,
        #[arg(short = 'n')]
        n: usize,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 3.0)]
        sigmas: f64,
    },
    /// Print the autoreduction moving every point of an infinite set.
    RefuteRigidity {
        #[arg(short = 's')]
        s: PeriodicSet,
        #[arg(long, default_value_t = 10)]
        show: usize,
        #[arg(long, default_value_t = 10_000)]
        bound: u64,
    },
    /// Run a named suite and write its report.
    Suite(SuiteArgs),
}

#[derive(Debug, Args)]
struct SuiteArgs {
    name: String,
    /// Suite parameter as key=value; repeatable.
    #[arg(long = "param", value_parser = parse_param)]
    params: Vec<(String, Value)>,
}

fn parse_param(s: &str) -> Result<(String, Value), String> {
    let (k, v) = s
        .split_once('=')
        .ok_or_else(|| format!("expected key=value, got `{s}`"))?;
    let value = match v.parse::<u64>() {
        Ok(n) => Value::from(n),
        Err(_) => Value::from(v),
    };
    Ok((k.to_string(), value))
}

struct Outcome {
    command: &'static str,
    input: Vec<(&'static str, Value)>,
    result: Vec<(&'static str, Value)>,
    exit: i32,
}

impl Outcome {
    fn new(command: &'static str, input: Vec<(&'static str, Value)>) -> Self {
        Outcome {
            command,
            input,
            result: Vec::new(),
            exit: EXIT_OK,
        }
    }

    fn put(&mut self, key: &'static str, value: impl Into<Value>) {
        self.result.push((key, value.into()));
    }

    fn verdict(&mut self, ok: bool) {
        self.put("verdict", ok);
        if !ok {
            self.exit = EXIT_NEGATIVE;
        }
    }

    fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let obj = |pairs: &[(&str, Value)]| {
                    pairs
                        .iter()
                        .map(|(k, v)| (k.to_string(), v.clone()))
                        .collect::<Map<_, _>>()
                };
                let doc = json!({
                    "command": self.command,
                    "input": obj(&self.input),
                    "result": obj(&self.result),
                    "exit_code": self.exit,
                });
                format!("{doc}\n")
            }
            Format::Text => {
                let mut out = String::new();
                for (k, v) in &self.input {
                    out.push_str(&format!("input {k}: {}\n", text_value(v)));
                }
                for (k, v) in &self.result {
                    out.push_str(&format!("{k}: {}\n", text_value(v)));
                }
                out
            }
        }
    }
}

fn text_value(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Bool(true) => "True".into(),
        Value::Bool(false) => "False".into(),
        other => other.to_string(),
    }
}

struct Precondition(String);

impl<E: std::fmt::Display> From<E> for Precondition {
    fn from(e: E) -> Self {
        Precondition(e.to_string())
    }
}

/// Runs one invocation. `argv[0]` is the program name.
pub fn dispatch<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    EXIT_USAGE
                }
            };
        }
    };
    match run(&cli) {
        Ok(outcome) => {
            let _ = out.write_all(outcome.render(cli.format).as_bytes());
            outcome.exit
        }
        Err(Precondition(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
    }
}

fn s(v: &impl ToString) -> Value {
    Value::String(v.to_string())
}

fn run(cli: &Cli) -> Result<Outcome, Precondition> {
    Ok(match &cli.command {
        Command::Eval { term, x } => {
            let mut o = Outcome::new("eval", vec![("f", s(term)), ("x", s(x))]);
            o.put("value", s(&term.eval(x)));
            o
        }
        Command::Family { i } => {
            let mut o = Outcome::new("family", vec![("i", (*i).into())]);
            if *i > 64 {
                return Err(Precondition("family index must be at most 64".into()));
            }
            o.put("set", s(&antichain_family(*i)));
            o
        }
        Command::AlmostSubset { s: a, t } => {
            let mut o = Outcome::new("almost-subset", vec![("s", s(a)), ("t", s(t))]);
            match a.almost_subset(t) {
                AlmostInclusion::Holds => o.verdict(true),
                AlmostInclusion::Fails(w) => {
                    o.verdict(false);
                    o.put("witness_modulus", s(&w.modulus));
                    o.put("witness_residue", s(&w.residue));
                    o.put("witness_threshold", s(&w.threshold));
                    o.put(
                        "witnesses",
                        w.witnesses
                            .iter()
                            .map(|x| x.to_string())
                            .collect::<Vec<_>>(),
                    );
                }
            }
            o
        }
        Command::DupVerify {
            s: set,
            c,
            a,
            bound,
        } => {
            let mut o = Outcome::new(
                "dup-verify",
                vec![
                    ("s", s(set)),
                    ("c", s(c)),
                    ("a", s(a)),
                    ("bound", (*bound).into()),
                ],
            );
            let v = verify_m_equivalence(a, set, c, *bound)?;
            o.verdict(v.is_ok());
            o.put("report", serde_json::to_value(&v)?);
            o
        }
        Command::MlTest {
            k,
            n,
            measure_only,
            search_cap,
        } => {
            let mut o = Outcome::new(
                "ml-test",
                vec![
                    ("k", s(k)),
                    ("n", (*n).into()),
                    ("search_cap", (*search_cap).into()),
                ],
            );
            let level = test_level(k, *n, *search_cap)?;
            let measure = serde_json::to_value(level.exact_measure())?;
            if !measure_only {
                let (v, c) = level.vertices_and_components();
                o.put("pairs", serde_json::to_value(&level)?);
                o.put("vertices", v);
                o.put("components", c);
            }
            o.put("measure", measure);
            o
        }
        Command::VerifyReduction {
            h, src, tgt, bound, ..
        } => {
            let mut o = Outcome::new(
                "verify-reduction",
                vec![
                    ("h", s(h)),
                    ("src", s(src)),
                    ("tgt", s(tgt)),
                    ("bound", (*bound).into()),
                ],
            );
            let v = verify_one_reduction(h, src, tgt, *bound);
            o.verdict(v.is_ok());
            o.put("report", serde_json::to_value(&v)?);
            o
        }
        Command::DeriveInclusion {
            h,
            s: set_s,
            t,
            a,
            c,
            n0,
            bound,
            ..
        } => {
            let c = match c {
                Some(c) => c.clone(),
                None => a.find_zero(DEFAULT_SEARCH_CAP)?,
            };
            let mut o = Outcome::new(
                "derive-inclusion",
                vec![
                    ("h", s(h)),
                    ("s", s(set_s)),
                    ("t", s(t)),
                    ("a", s(a)),
                    ("c", s(&c)),
                    ("n0", (*n0).into()),
                    ("bound", (*bound).into()),
                ],
            );
            match almost_inclusion_from_reduction(h, set_s, t, a, &c, &c, *n0, *bound) {
                Ok(outcome) => {
                    let ok = matches!(
                        &outcome,
                        InclusionOutcome::Report(r)
                            if r.conclusion == InclusionConclusion::SSubsetStarTOnWindow
                    );
                    o.verdict(ok);
                    o.put("report", serde_json::to_value(&outcome)?);
                }
                Err(DuplicationError::ReductionFailed(v)) => {
                    o.verdict(false);
                    o.put("reduction", serde_json::to_value(&v)?);
                }
                Err(e) => return Err(e.into()),
            }
            o
        }
        Command::Coverage {
            k,
            n,
            trials,
            seed,
            sigmas,
        } => {
            let mut o = Outcome::new(
                "coverage",
                vec![
                    ("k", s(k)),
                    ("n", (*n).into()),
                    ("trials", (*trials).into()),
                    ("seed", (*seed).into()),
                    ("sigmas", (*sigmas).into()),
                ],
            );
            let report = coverage_experiment(k, *n, *trials, *seed, DEFAULT_SEARCH_CAP)?;
            o.verdict(report.z_score() <= *sigmas);
            o.put("inside", report.inside);
            o.put("fraction", report.fraction);
            o.put("target", serde_json::to_value(&report.target)?);
            o.put("std_error", report.std_error);
            o.put("z_score", report.z_score());
            o
        }
        Command::RefuteRigidity {
            s: set,
            show,
            bound,
        } => {
            let mut o = Outcome::new(
                "refute-rigidity",
                vec![
                    ("s", s(set)),
                    ("show", (*show).into()),
                    ("bound", (*bound).into()),
                ],
            );
            let k = bi_immune_refuter(set)?;
            let moved = k.nonfixed_points(*bound);
            let a = Oracle::from_set(set.clone());
            let autoreduction = crate::randomness::fix_violation_witness(&a, &k, *bound);
            o.put("k", s(&k));
            o.put(
                "nonfixed_points",
                moved.iter().take(*show).copied().collect::<Vec<_>>(),
            );
            o.put("nonfixed_count", moved.len());
            o.verdict(autoreduction.is_none() && !moved.is_empty());
            o
        }
        Command::Suite(args) => {
            let config: SuiteConfig = args.params.iter().cloned().collect();
            let report = run_suite(&args.name, &config)?;
            let mut o = Outcome::new(
                "suite",
                vec![
                    ("name", s(&args.name)),
                    ("parameters", serde_json::to_value(&report.parameters)?),
                ],
            );
            let path = report.write(cli.out.as_deref(), !cli.no_timestamp)?;
            o.put("verdicts", report.verdicts.len());
            let failures: Vec<_> = report.failures().map(|v| v.name.clone()).collect();
            o.put("failed", failures.len());
            if !failures.is_empty() {
                o.put("failures", failures);
            }
            o.put("report", s(&path.display()));
            o.verdict(report.all_pass());
            o
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("rigiditylab").chain(args.iter().copied());
        let code = dispatch(argv, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn measure_only() {
        let (code, out, _) = call(&["ml-test", "-k", "add(1)", "-n", "3", "--measure-only"]);
        assert_eq!(code, 0);
        assert!(
            out.lines()
                .last()
                .unwrap()
                .ends_with(r#"{"num":1,"exp":3}"#),
            "{out}"
        );
    }

    #[test]
    fn eval_and_echo() {
        let (code, out, _) = call(&["eval", "-f", "dup( residues(2;{1}) , 0)", "-x", "9"]);
        assert_eq!(code, 0);
        assert_eq!(
            out,
            "input f: dup(residues(2;{1}),0)\ninput x: 9\nvalue: 0\n"
        );
    }

    #[test]
    fn almost_subset_negative() {
        let (code, out, _) = call(&[
            "almost-subset",
            "-s",
            "residues(4;{2})",
            "-t",
            "residues(8;{4})",
        ]);
        assert_eq!(code, 1);
        assert!(out.contains("verdict: False"));
        assert!(out.contains("witness_modulus: 8"));
    }

    #[test]
    fn usage_errors() {
        let (code, _, err) = call(&["frobnicate"]);
        assert_eq!(code, 2);
        assert!(err.contains("Usage"));
        let (code, _, _) = call(&["eval", "-f", "id", "-x", "1", "--bogus"]);
        assert_eq!(code, 2);
        let (code, _, err) = call(&[
            "dup-verify",
            "-s",
            "residues(2;{1})",
            "-c",
            "1",
            "-a",
            "set:residues(2;{1})",
        ]);
        assert_eq!(code, 2);
        assert!(err.contains("c = 1"));
    }

    #[test]
    fn lowercase_h_is_a_term() {
        let (code, out, _) = call(&[
            "verify-reduction",
            "-h",
            "id",
            "--src",
            "random:1",
            "--tgt",
            "random:1",
            "--bound",
            "100",
        ]);
        assert_eq!(code, 0, "{out}");
    }
}
