//! Named experiment suites. Each suite is a pure function of its effective
//! parameters; cases run in parallel and verdicts keep case order.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use super::brute::brute_measure;
use super::report::{ExperimentReport, Verdict, ARTIFACT_VERSION};
use super::HarnessError;
use crate::duplication::{
    almost_inclusion_from_reduction, construct_subset_reduction, dup_set, fiber,
    induced_autoreductions, verify_m_equivalence, verify_one_reduction, InclusionConclusion,
    InclusionOutcome,
};
use crate::funcdsl::{bi_immune_refuter, FuncTerm};
use crate::oracle::{derive_seed, Oracle};
use crate::paramsets::{antichain_family, AlmostInclusion, PeriodicSet};
use crate::randomness::{
    coverage_experiment, fix_violation_witness, level_contains, test_level, ConstraintSet,
    DyadicRational, DEFAULT_SEARCH_CAP,
};
use crate::Nat;

pub type SuiteConfig = BTreeMap<String, Value>;

pub const SUITE_NAMES: [&str; 7] = [
    "measure-law",
    "duplication-law",
    "antichain-family",
    "key-claim-pipeline",
    "capture-demo",
    "coverage-montecarlo",
    "oracle-agreement",
];

/// Bound for picking `c` with `A(c) = 0` in random oracles.
const ZERO_SEARCH: u64 = 1000;

pub fn run_suite(name: &str, config: &SuiteConfig) -> Result<ExperimentReport, HarnessError> {
    let mut params = Params::new(config);
    let (seeds, verdicts) = match name {
        "measure-law" => measure_law(&mut params)?,
        "duplication-law" => duplication_law(&mut params)?,
        "antichain-family" => antichain(&mut params)?,
        "key-claim-pipeline" => key_claim(&mut params)?,
        "capture-demo" => capture(&mut params)?,
        "coverage-montecarlo" => coverage(&mut params)?,
        "oracle-agreement" => oracle_agreement(&mut params)?,
        other => return Err(HarnessError::UnknownSuite(other.to_string())),
    };
    Ok(ExperimentReport {
        experiment: name.to_string(),
        version: ARTIFACT_VERSION.to_string(),
        parameters: params.finish()?,
        seeds,
        verdicts,
    })
}

/// Re-runs a report from its recorded parameters.
pub fn replay(report: &ExperimentReport) -> Result<ExperimentReport, HarnessError> {
    run_suite(&report.experiment, &report.parameters)
}

struct Params<'a> {
    given: &'a SuiteConfig,
    used: BTreeMap<String, Value>,
}

impl<'a> Params<'a> {
    fn new(given: &'a SuiteConfig) -> Self {
        Params {
            given,
            used: BTreeMap::new(),
        }
    }

    fn invalid(name: &str, reason: impl Into<String>) -> HarnessError {
        HarnessError::InvalidParameter {
            name: name.to_string(),
            reason: reason.into(),
        }
    }

    fn u64(&mut self, name: &str, default: u64) -> Result<u64, HarnessError> {
        let value = match self.given.get(name) {
            None => default,
            Some(Value::Number(n)) => n
                .as_u64()
                .ok_or_else(|| Self::invalid(name, "expected a natural number"))?,
            Some(Value::String(s)) => s
                .parse()
                .map_err(|_| Self::invalid(name, "expected a natural number"))?,
            Some(_) => return Err(Self::invalid(name, "expected a natural number")),
        };
        self.used.insert(name.to_string(), value.into());
        Ok(value)
    }

    fn term(&mut self, name: &str, default: &str) -> Result<FuncTerm, HarnessError> {
        let text = match self.given.get(name) {
            None => default.to_string(),
            Some(Value::String(s)) => s.clone(),
            Some(_) => return Err(Self::invalid(name, "expected a term string")),
        };
        let term: FuncTerm = text
            .parse()
            .map_err(|e: crate::TermError| Self::invalid(name, e.to_string()))?;
        self.used.insert(name.to_string(), term.to_string().into());
        Ok(term)
    }

    fn finish(self) -> Result<BTreeMap<String, Value>, HarnessError> {
        if let Some(extra) = self.given.keys().find(|k| !self.used.contains_key(*k)) {
            return Err(Self::invalid(extra, "not a parameter of this suite"));
        }
        Ok(self.used)
    }
}

fn usize_param(params: &mut Params<'_>, name: &str, default: u64) -> Result<usize, HarnessError> {
    let v = params.u64(name, default)?;
    usize::try_from(v).map_err(|_| Params::invalid(name, "too large"))
}

/// Terms that move infinitely many points and admit at least 20 fresh points
/// below `10^6`.
pub fn measure_corpus() -> Vec<FuncTerm> {
    [
        "add(1)",
        "add(2)",
        "add(5)",
        "add(1000)",
        "sub(1)",
        "sub(3)",
        "div(2)",
        "div(3)",
        "mod(10)",
        "mod(2)",
        "compose(div(2),mul(3))",
        "compose(div(4),mul(5))",
        "compose(mod(1000),add(1))",
        "const(0)",
        "const(17)",
        "dup(residues(2;{1}),0)",
        "dup(residues(4;{2}),3)",
        "piecewise(residues(2;{0}),add(1),id)",
        "piecewise(residues(3;{1}),add(1),sub(1))",
        "piecewise(residues(10;{0})-{0},const(1),id)",
        "next(residues(5;{0,2}))",
    ]
    .iter()
    .map(|s| s.parse().expect("corpus term parses"))
    .chain(
        ["residues(2;{0})", "residues(8;{4})", "residues(3;{0})+{1}"]
            .iter()
            .map(|s| bi_immune_refuter(&s.parse().expect("set parses")).expect("infinite")),
    )
    .collect()
}

fn measure_law(params: &mut Params<'_>) -> Result<(Vec<u64>, Vec<Verdict>), HarnessError> {
    let max_n = usize_param(params, "max_n", 20)?;
    let cap = params.u64("search_cap", DEFAULT_SEARCH_CAP)?;
    let verdicts = measure_corpus()
        .par_iter()
        .map(|k| match test_level(k, max_n, cap) {
            Err(e) => vec![Verdict::new(
                format!("k={k}"),
                false,
                Some(json!({ "error": e.to_string() })),
            )],
            Ok(full) => (0..=max_n)
                .map(|n| {
                    let level = ConstraintSet::from_pairs(full.pairs()[..n].iter().cloned())
                        .expect("pairs come from a valid set");
                    let measure = level.exact_measure();
                    let (v, c) = level.vertices_and_components();
                    let pass = measure == DyadicRational::half_pow(n as u64) && v - c == n;
                    Verdict::new(
                        format!("k={k}/n={n}"),
                        pass,
                        Some(json!({ "measure": measure, "v": v, "c": c })),
                    )
                })
                .collect(),
        })
        .flatten()
        .collect();
    Ok((vec![], verdicts))
}

fn duplication_law(params: &mut Params<'_>) -> Result<(Vec<u64>, Vec<Verdict>), HarnessError> {
    let max_i = params.u64("max_i", 9)?;
    let oracles = params.u64("oracles", 10)?;
    let bound = params.u64("bound", 5000)?;
    let base_seed = params.u64("base_seed", 42)?;
    if max_i > 64 {
        return Err(Params::invalid("max_i", "family index limit is 64"));
    }
    let seeds: Vec<u64> = (0..oracles).map(|j| derive_seed(base_seed, j)).collect();
    let cases: Vec<(u32, u64)> = (0..max_i as u32)
        .flat_map(|i| seeds.iter().map(move |&s| (i, s)))
        .collect();
    let verdicts = cases
        .par_iter()
        .map(|&(i, seed)| {
            let s = antichain_family(i);
            let a = Oracle::seeded_random(seed);
            let tag = format!("i={i}/seed={seed}");
            let c = match a.find_zero(ZERO_SEARCH) {
                Ok(c) => c,
                Err(e) => {
                    return vec![Verdict::new(
                        format!("m-equivalence/{tag}"),
                        false,
                        Some(json!({ "error": e.to_string() })),
                    )]
                }
            };
            let eq = verify_m_equivalence(&a, &s, &c, bound).expect("c found as a zero");
            let fiber_bad = (0..bound).find(|&x| {
                let x = Nat::from(x);
                x != c && (fiber(&s, &c, &x).len() == Some(2)) != s.contains(&x)
            });
            vec![
                Verdict::new(
                    format!("m-equivalence/{tag}"),
                    eq.is_ok(),
                    Some(json!({ "c": c.to_string(), "verdict": eq })),
                ),
                Verdict::new(
                    format!("fiber-law/{tag}"),
                    fiber_bad.is_none(),
                    fiber_bad.map(|x| json!({ "x": x })),
                ),
            ]
        })
        .flatten()
        .collect();
    Ok((seeds, verdicts))
}

fn antichain(params: &mut Params<'_>) -> Result<(Vec<u64>, Vec<Verdict>), HarnessError> {
    let max_i = params.u64("max_i", 10)?;
    let confirm = params.u64("confirm", 100)?;
    if max_i > 64 {
        return Err(Params::invalid("max_i", "family index limit is 64"));
    }
    let pairs: Vec<(u32, u32)> = (0..max_i as u32)
        .flat_map(|i| {
            (0..max_i as u32)
                .filter(move |&j| j != i)
                .map(move |j| (i, j))
        })
        .collect();
    let verdicts = pairs
        .par_iter()
        .map(|&(i, j)| {
            let (si, sj) = (antichain_family(i), antichain_family(j));
            let name = format!("S_{i} not almost-subset of S_{j}");
            match si.almost_subset(&sj) {
                AlmostInclusion::Holds => Verdict::new(name, false, None),
                AlmostInclusion::Fails(w) => {
                    let start = if w.threshold <= w.residue {
                        w.residue.clone()
                    } else {
                        &w.residue + &w.modulus * ((&w.threshold - &w.residue) / &w.modulus + 1u32)
                    };
                    let confirmed = (0..confirm)
                        .map(|m| &start + &w.modulus * m)
                        .all(|x| si.contains(&x) && !sj.contains(&x));
                    Verdict::new(
                        name,
                        confirmed,
                        Some(json!({
                            "modulus": w.modulus.to_string(),
                            "residue": w.residue.to_string(),
                            "confirmed": confirm,
                        })),
                    )
                }
            }
        })
        .collect();
    Ok((vec![], verdicts))
}

/// Exact-subset pairs `(S, T)` with `S ∪ T` co-infinite.
pub fn subset_pair_fixtures() -> Vec<(PeriodicSet, PeriodicSet)> {
    let parse = |s: &str| s.parse::<PeriodicSet>().expect("fixture parses");
    let mut pairs: Vec<(PeriodicSet, PeriodicSet)> = [
        ("residues(4;{0})", "residues(2;{0})"),
        ("residues(2;{1})", "residues(2;{1})"),
        ("residues(1;{})", "residues(2;{1})"),
        ("residues(1;{})", "residues(4;{2})"),
        ("residues(6;{0})", "residues(3;{0})"),
        ("residues(6;{0})", "residues(2;{0})"),
        ("residues(5;{1})", "residues(5;{1,2})"),
        ("residues(5;{1})", "residues(5;{1,2,3,4})"),
        ("residues(4;{2})", "residues(4;{1,2})"),
        ("residues(4;{0})+{1}", "residues(2;{0})+{1,3}"),
        ("residues(3;{0})-{0,3}", "residues(3;{0})"),
        ("residues(1;{})+{2,5}", "residues(3;{2})"),
        ("residues(1;{})", "residues(7;{0,1,2,3,4,5})"),
        ("residues(10;{3,7})", "residues(5;{2,3})"),
        ("residues(9;{0})", "residues(3;{0})+{1}"),
        ("residues(2;{1})-{1,3,5}", "residues(2;{1})"),
        ("residues(6;{1,5})", "residues(2;{1})"),
        ("residues(12;{4})", "residues(4;{0})"),
        ("residues(32;{16})", "residues(64;{16,32,48})"),
        ("residues(8;{0,4})", "residues(8;{0,2,4})-{2}"),
    ]
    .iter()
    .map(|(s, t)| (parse(s), parse(t)))
    .collect();
    for i in 1..4 {
        pairs.push((antichain_family(i), antichain_family(i)));
    }
    pairs.push((antichain_family(3), PeriodicSet::evens()));
    pairs
}

fn key_claim(params: &mut Params<'_>) -> Result<(Vec<u64>, Vec<Verdict>), HarnessError> {
    let seed = params.u64("seed", 42)?;
    let reduction_bound = params.u64("reduction_bound", 10_000)?;
    let n0 = params.u64("n0", 0)?;
    let bound = params.u64("bound", 2000)?;
    let a = Oracle::seeded_random(seed);
    let c = a
        .find_zero(ZERO_SEARCH)
        .map_err(|e| Params::invalid("seed", e.to_string()))?;
    let verdicts = subset_pair_fixtures()
        .par_iter()
        .map(|(s, t)| key_claim_case(&a, &c, s, t, reduction_bound, n0, bound))
        .flatten()
        .collect();
    Ok((vec![seed], verdicts))
}

fn key_claim_case(
    a: &Oracle,
    c: &Nat,
    s: &PeriodicSet,
    t: &PeriodicSet,
    reduction_bound: u64,
    n0: u64,
    bound: u64,
) -> Vec<Verdict> {
    let tag = format!("S={s}/T={t}");
    let h = match construct_subset_reduction(s, t) {
        Ok(h) => h,
        Err(e) => {
            return vec![Verdict::new(
                format!("reduction/{tag}"),
                false,
                Some(json!({ "error": e.to_string() })),
            )]
        }
    };
    let b_s = dup_set(s, c, a).expect("c is a zero of A");
    let b_t = dup_set(t, c, a).expect("c is a zero of A");
    let reduction = verify_one_reduction(&h, &b_s, &b_t, reduction_bound);
    let inclusion = almost_inclusion_from_reduction(&h, s, t, a, c, c, n0, bound);
    let inclusion_ok = matches!(
        &inclusion,
        Ok(InclusionOutcome::Report(r))
            if r.conclusion == InclusionConclusion::SSubsetStarTOnWindow && r.violations.is_empty()
    );
    let (k0, k1) = induced_autoreductions(&h, s, t, c);
    let chain_bad = (0..bound).find(|&x| {
        let x = Nat::from(x);
        let bit = a.query(&x);
        bit != a.query(&k0.eval(&x)) || bit != a.query(&k1.eval(&x))
    });
    let inclusion_witness = match inclusion {
        Ok(outcome) => serde_json::to_value(outcome).ok(),
        Err(e) => Some(json!({ "error": e.to_string() })),
    };
    vec![
        Verdict::new(
            format!("reduction/{tag}"),
            reduction.is_ok(),
            Some(json!({ "h": h.to_string(), "verdict": reduction })),
        ),
        Verdict::new(format!("inclusion/{tag}"), inclusion_ok, inclusion_witness),
        Verdict::new(
            format!("autoreduction-chain/{tag}"),
            chain_bad.is_none(),
            chain_bad.map(|x| json!({ "x": x })),
        ),
    ]
}

/// Purely periodic sets with periods 2, 3, 4 and 8.
pub fn capture_fixtures() -> Vec<PeriodicSet> {
    [
        "residues(2;{0})",
        "residues(2;{1})",
        "residues(3;{0})",
        "residues(3;{1,2})",
        "residues(4;{2})",
        "residues(4;{0,1})",
        "residues(8;{4})",
        "residues(8;{1,2,3,7})",
    ]
    .iter()
    .map(|s| s.parse().expect("fixture parses"))
    .collect()
}

fn capture(params: &mut Params<'_>) -> Result<(Vec<u64>, Vec<Verdict>), HarnessError> {
    let max_n = usize_param(params, "max_n", 30)?;
    let bound = params.u64("bound", 10_000)?;
    let cap = params.u64("search_cap", DEFAULT_SEARCH_CAP)?;
    let verdicts = capture_fixtures()
        .par_iter()
        .map(|p| {
            let k = FuncTerm::add(p.period().clone());
            let a = Oracle::from_set(p.clone());
            let violation = fix_violation_witness(&a, &k, bound);
            let mut constructible = 0;
            let mut escaped = None;
            for n in 0..=max_n {
                let Ok(level) = test_level(&k, n, cap) else {
                    continue;
                };
                constructible += 1;
                if !level_contains(&level, &a) {
                    escaped = Some(n);
                    break;
                }
            }
            Verdict::new(
                format!("p={p}/k={k}"),
                violation.is_none() && escaped.is_none(),
                Some(json!({
                    "fix_violation": violation,
                    "levels_checked": constructible,
                    "escaped_at": escaped,
                })),
            )
        })
        .collect();
    Ok((vec![], verdicts))
}

fn coverage(params: &mut Params<'_>) -> Result<(Vec<u64>, Vec<Verdict>), HarnessError> {
    let k = params.term("k", "add(1)")?;
    let n = usize_param(params, "n", 10)?;
    let trials = params.u64("trials", 100_000)?;
    let seed = params.u64("seed", 42)?;
    let sigmas = params.u64("sigmas", 3)?;
    let report = coverage_experiment(&k, n, trials, seed, DEFAULT_SEARCH_CAP)
        .map_err(|e| Params::invalid("trials", e.to_string()))?;
    let pass = report.z_score() <= sigmas as f64;
    let verdict = Verdict::new(
        format!("coverage/k={k}/n={n}"),
        pass,
        serde_json::to_value(&report).ok(),
    );
    Ok((vec![seed], vec![verdict]))
}

/// Random constraint set over at most `max_v` coordinates.
pub fn random_constraint_set(rng: &mut impl Rng, max_v: usize) -> ConstraintSet {
    let v = rng.gen_range(0..=max_v);
    let span = 4 * max_v as u64 + 8;
    let mut coords: Vec<u64> = Vec::with_capacity(v);
    while coords.len() < v {
        let x = rng.gen_range(0..span);
        if !coords.contains(&x) {
            coords.push(x);
        }
    }
    let mut cs = ConstraintSet::new();
    if v >= 2 {
        for _ in 0..rng.gen_range(0..=2 * v) {
            let i = rng.gen_range(0..v);
            let j = rng.gen_range(0..v);
            if i != j {
                cs.push(Nat::from(coords[i]), Nat::from(coords[j]))
                    .expect("distinct coordinates");
            }
        }
    }
    cs
}

fn oracle_agreement(params: &mut Params<'_>) -> Result<(Vec<u64>, Vec<Verdict>), HarnessError> {
    let cases = params.u64("cases", 1000)?;
    let max_v = usize_param(params, "max_v", 16)?;
    let seed = params.u64("seed", 42)?;
    if max_v > super::MAX_BRUTE_COORDINATES {
        return Err(Params::invalid(
            "max_v",
            "brute force is limited to 24 coordinates",
        ));
    }
    let verdicts = (0..cases)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, i));
            let cs = random_constraint_set(&mut rng, max_v);
            let exact = cs.exact_measure();
            let brute = brute_measure(&cs);
            let pass = brute.as_ref() == Ok(&exact);
            Verdict::new(
                format!("case={i}"),
                pass,
                Some(json!({
                    "pairs": cs,
                    "exact": exact,
                    "brute": brute.ok(),
                })),
            )
        })
        .collect();
    Ok((vec![seed], verdicts))
}
