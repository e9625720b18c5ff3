//! Verification campaigns: netlists against the closure oracles, plus the
//! property suites over the FSM and the code.
//!
//! A campaign enumerates or samples tuples of valid Gray words, feeds their
//! concatenation to a compiled netlist and compares every output word with
//! the oracle. Cases are processed in fixed chunks so that results do not
//! depend on the number of worker threads.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fsm::{
    all_bracketings, column_pairs, diamond, diamond_m, diamond_m_closure, out_m, out_m_closure,
    prefix_state_oracle, FsmError, StatePair,
};
use crate::gray::{
    encode, enumerate_valid, is_valid, max_min_oracle, CodeValue, GrayError, ValidGrayWord,
};
use crate::netlist::{metrics, CompiledNetlist, GateKind, Metrics, Netlist, NetlistError};
use crate::network::{
    build_schedule_sort, builtin_schedule, oracle_sort_valid, ComparatorSchedule, NetworkError,
    NetworkVariant, Orientation,
};
use crate::synth::{build_two_sort, SynthError};
use crate::ternary::{closure_eval, LogicError, TernaryWord, Trit};

/// Cases per chunk. Each random chunk draws from its own generator stream.
pub const CHUNK: u64 = 1024;
/// Failures kept in a report; the count is always exact.
pub const MAX_FAILURES: usize = 100;
pub const MAX_EXHAUSTIVE_TWO_SORT_WIDTH: usize = 8;
pub const MAX_RANDOM_WIDTH: usize = 16;
pub const MAX_EXHAUSTIVE_CASES: u64 = 100_000_000;

const SAMPLER: &str = "ChaCha8Rng::seed_from_u64(seed), stream = case / 1024, \
                       ranks drawn with gen_range(0..count) per word in port order";

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("width {width} exceeds the limit of {limit} for this mode")]
    Width { width: usize, limit: usize },
    #[error("exhaustive run would need {0} cases; use random sampling")]
    TooManyCases(u128),
    #[error("random mode needs at least one sample")]
    NoSamples,
    #[error("netlist has {got} {what}, expected {expected}")]
    Ports {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error(transparent)]
    Netlist(#[from] NetlistError),
    #[error(transparent)]
    Network(#[from] NetworkError),
    #[error(transparent)]
    Synth(#[from] SynthError),
    #[error(transparent)]
    Gray(#[from] GrayError),
    #[error(transparent)]
    Fsm(#[from] FsmError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Mode {
    Exhaustive,
    Random { seed: u64, samples: u64 },
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Exhaustive => f.write_str("exhaustive"),
            Mode::Random { seed, samples } => write!(f, "random({samples} samples, seed {seed})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub case: u64,
    pub inputs: Vec<String>,
    pub expected: Vec<String>,
    pub actual: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteResult {
    pub name: String,
    pub cases: u64,
    pub failures: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub target: String,
    pub mode: Mode,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sampler: Option<String>,
    pub cases_run: u64,
    pub failure_count: u64,
    /// Lowest-numbered failures, at most [`MAX_FAILURES`].
    pub failures: Vec<Failure>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub metrics: Option<Metrics>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub suites: Vec<SuiteResult>,
}

impl VerifyReport {
    pub fn new(target: impl Into<String>, mode: Mode) -> Self {
        VerifyReport {
            target: target.into(),
            sampler: matches!(mode, Mode::Random { .. }).then(|| SAMPLER.to_string()),
            mode,
            cases_run: 0,
            failure_count: 0,
            failures: Vec::new(),
            metrics: None,
            suites: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failure_count == 0 && self.cases_run > 0
    }

    pub fn first_failure(&self) -> Option<&Failure> {
        self.failures.first()
    }

    fn record(&mut self, f: Failure) {
        self.failure_count += 1;
        if self.failures.len() < MAX_FAILURES {
            self.failures.push(f);
        }
    }

    /// Combines partial reports of the same campaign. Associative and
    /// commutative as long as case numbers are distinct.
    pub fn merge(mut self, other: VerifyReport) -> VerifyReport {
        self.cases_run += other.cases_run;
        self.failure_count += other.failure_count;
        self.failures.extend(other.failures);
        self.failures.sort_by_key(|f| f.case);
        self.failures.truncate(MAX_FAILURES);
        self.metrics = self.metrics.or(other.metrics);
        self.suites.extend(other.suites);
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialisation cannot fail")
    }

    /// One line per suite plus a verdict, for terminals.
    pub fn summary(&self) -> String {
        let mut s = format!(
            "{}: {} ({} cases, {} failures)",
            self.target,
            if self.passed() { "PASS" } else { "FAIL" },
            self.cases_run,
            self.failure_count
        );
        s.push_str(&format!("\n  mode: {}", self.mode));
        for suite in &self.suites {
            s.push_str(&format!(
                "\n  {}: {} cases, {} failures",
                suite.name, suite.cases, suite.failures
            ));
        }
        if let Some(f) = self.first_failure() {
            s.push_str(&format!(
                "\n  first failure (case {}): inputs {:?}, expected {:?}, got {:?}",
                f.case, f.inputs, f.expected, f.actual
            ));
        }
        s
    }
}

fn words_of(trits: &[Trit], width: usize) -> Vec<String> {
    trits
        .chunks(width)
        .map(|c| c.iter().map(|t| t.to_char()).collect())
        .collect()
}

/// Compares a netlist with `oracle` on tuples of `arity` valid words.
///
/// The netlist's inputs are the words concatenated in order, and so are its
/// outputs; `oracle` returns the expected output words.
pub fn run_word_campaign<O>(
    target: impl Into<String>,
    netlist: &Netlist,
    width: usize,
    arity: usize,
    out_words: usize,
    mode: Mode,
    oracle: O,
) -> Result<VerifyReport, VerifyError>
where
    O: Fn(&[ValidGrayWord]) -> Result<Vec<ValidGrayWord>, VerifyError> + Sync,
{
    let compiled = CompiledNetlist::new(netlist)?;
    if compiled.input_names().len() != width * arity {
        return Err(VerifyError::Ports {
            what: "inputs",
            expected: width * arity,
            got: compiled.input_names().len(),
        });
    }
    if compiled.output_names().len() != width * out_words {
        return Err(VerifyError::Ports {
            what: "outputs",
            expected: width * out_words,
            got: compiled.output_names().len(),
        });
    }
    let count = ValidGrayWord::count(width)?;
    let (total, table) = match mode {
        Mode::Exhaustive => {
            let total = (count as u128).pow(arity as u32);
            if total > MAX_EXHAUSTIVE_CASES as u128 {
                return Err(VerifyError::TooManyCases(total));
            }
            (total as u64, Some(enumerate_valid(width)?))
        }
        Mode::Random { samples, .. } => {
            if samples == 0 {
                return Err(VerifyError::NoSamples);
            }
            if width > MAX_RANDOM_WIDTH {
                return Err(VerifyError::Width {
                    width,
                    limit: MAX_RANDOM_WIDTH,
                });
            }
            (samples, None)
        }
    };
    let word = |rank: u64| -> Result<ValidGrayWord, VerifyError> {
        Ok(match &table {
            Some(t) => t[rank as usize].clone(),
            None => ValidGrayWord::from_rank(width, rank)?,
        })
    };

    let mut base = VerifyReport::new(target, mode);
    base.metrics = Some(metrics(netlist)?);

    let chunks = total.div_ceil(CHUNK);
    let partial = (0..chunks)
        .into_par_iter()
        .map(|chunk| -> Result<VerifyReport, VerifyError> {
            let mut report = VerifyReport::new(base.target.clone(), mode);
            let mut rng = match mode {
                Mode::Random { seed, .. } => {
                    let mut r = ChaCha8Rng::seed_from_u64(seed);
                    r.set_stream(chunk);
                    Some(r)
                }
                Mode::Exhaustive => None,
            };
            let mut ranks = vec![0u64; arity];
            let mut input = Vec::with_capacity(width * arity);
            let mut scratch = Vec::new();
            let mut out = Vec::new();
            let end = ((chunk + 1) * CHUNK).min(total);
            for case in chunk * CHUNK..end {
                match rng.as_mut() {
                    Some(r) => ranks.iter_mut().for_each(|k| *k = r.gen_range(0..count)),
                    None => {
                        let mut rest = case;
                        for k in ranks.iter_mut().rev() {
                            *k = rest % count;
                            rest /= count;
                        }
                    }
                }
                let words = ranks
                    .iter()
                    .map(|&r| word(r))
                    .collect::<Result<Vec<_>, _>>()?;
                input.clear();
                for w in &words {
                    input.extend_from_slice(w.word().trits());
                }
                compiled.eval_into(&input, &mut scratch, &mut out)?;
                let expected: Vec<Trit> = oracle(&words)?
                    .iter()
                    .flat_map(|w| w.word().trits().to_vec())
                    .collect();
                report.cases_run += 1;
                if expected != out {
                    report.record(Failure {
                        case,
                        inputs: words.iter().map(|w| w.to_string()).collect(),
                        expected: words_of(&expected, width),
                        actual: words_of(&out, width),
                    });
                }
            }
            Ok(report)
        })
        .try_reduce(
            || VerifyReport::new(base.target.clone(), mode),
            |a, b| Ok(a.merge(b)),
        )?;
    Ok(base.merge(partial))
}

fn two_sort_oracle(words: &[ValidGrayWord]) -> Result<Vec<ValidGrayWord>, VerifyError> {
    let (max, min) = max_min_oracle(&words[0], &words[1])?;
    Ok(vec![max, min])
}

fn check_exhaustive_width(width: usize, mode: Mode) -> Result<(), VerifyError> {
    if mode == Mode::Exhaustive && width > MAX_EXHAUSTIVE_TWO_SORT_WIDTH {
        return Err(VerifyError::Width {
            width,
            limit: MAX_EXHAUSTIVE_TWO_SORT_WIDTH,
        });
    }
    Ok(())
}

/// Any netlist with the `2-sort(B)` port layout against the closure oracle.
pub fn verify_two_sort_netlist(
    target: impl Into<String>,
    netlist: &Netlist,
    width: usize,
    mode: Mode,
) -> Result<VerifyReport, VerifyError> {
    check_exhaustive_width(width, mode)?;
    run_word_campaign(target, netlist, width, 2, 2, mode, two_sort_oracle)
}

pub fn verify_two_sort(width: usize, mode: Mode) -> Result<VerifyReport, VerifyError> {
    let n = build_two_sort(width)?;
    verify_two_sort_netlist(format!("2-sort({width})"), &n, width, mode)
}

/// Any descending `channels`-channel sorter netlist against the rank sort.
pub fn verify_network_netlist(
    target: impl Into<String>,
    netlist: &Netlist,
    channels: usize,
    width: usize,
    mode: Mode,
) -> Result<VerifyReport, VerifyError> {
    run_word_campaign(target, netlist, width, channels, channels, mode, |w| {
        Ok(oracle_sort_valid(w)?)
    })
}

pub fn verify_schedule(
    target: impl Into<String>,
    schedule: &ComparatorSchedule,
    width: usize,
    mode: Mode,
) -> Result<VerifyReport, VerifyError> {
    let n = build_schedule_sort(schedule, width, Orientation::Descending)?;
    verify_network_netlist(target, &n, schedule.channels(), width, mode)
}

pub fn verify_network(
    v: NetworkVariant,
    width: usize,
    mode: Mode,
) -> Result<VerifyReport, VerifyError> {
    let s = builtin_schedule(v)?;
    verify_schedule(format!("{v}, B={width}"), &s, width, mode)
}

/// Copy of `n` with its `k`-th AND gate turned into an OR gate, if there is
/// one. Used as a mutation control.
pub fn mutate_and_to_or(n: &Netlist, k: usize) -> Option<Netlist> {
    let mut m = n.clone();
    let g = m
        .gates
        .iter_mut()
        .filter(|g| g.kind == GateKind::And)
        .nth(k)?;
    g.kind = GateKind::Or;
    Some(m)
}

struct Suite {
    name: &'static str,
    cases: u64,
    failures: Vec<(Vec<String>, String, String)>,
}

impl Suite {
    fn new(name: &'static str) -> Self {
        Suite {
            name,
            cases: 0,
            failures: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, inputs: impl FnOnce() -> (Vec<String>, String, String)) {
        self.cases += 1;
        if !ok {
            self.failures.push(inputs());
        }
    }
}

fn suite_associativity() -> Suite {
    let mut s = Suite::new("diamond associativity on stable states");
    for a in StatePair::stable() {
        for b in StatePair::stable() {
            for c in StatePair::stable() {
                let l = diamond(diamond(a, b).unwrap(), c).unwrap();
                let r = diamond(a, diamond(b, c).unwrap()).unwrap();
                s.check(l == r, || {
                    (
                        vec![a.to_string(), b.to_string(), c.to_string()],
                        l.to_string(),
                        r.to_string(),
                    )
                });
            }
        }
    }
    s
}

fn suite_operator_tables() -> Suite {
    let mut s = Suite::new("closed operator tables match closures");
    for x in StatePair::all() {
        for y in StatePair::all() {
            let (want, got) = (diamond_m_closure(x, y), diamond_m(x, y));
            s.check(want == got, || {
                (
                    vec![x.to_string(), y.to_string()],
                    want.to_string(),
                    got.to_string(),
                )
            });
            let (want, got) = (out_m_closure(x, y), out_m(x, y));
            s.check(want == got, || {
                (
                    vec![x.to_string(), y.to_string()],
                    want.to_string(),
                    got.to_string(),
                )
            });
        }
    }
    s
}

fn add_mod4(a: &[TernaryWord]) -> Result<TernaryWord, LogicError> {
    let v = |x: &TernaryWord| {
        x.trits().iter().fold(0u8, |acc, t| {
            acc * 2 + u8::from(t.to_bool().unwrap_or(false))
        })
    };
    let s = (v(&a[0]) + v(&a[1])) % 4;
    TernaryWord::from_bools(&[s & 2 != 0, s & 1 != 0])
}

fn suite_non_associativity() -> Suite {
    let mut s = Suite::new("closed addition mod 4 is not associative");
    let w = |t: &str| t.parse::<TernaryWord>().unwrap();
    let l1 = closure_eval(add_mod4, &[w("0M"), w("01")]).unwrap();
    let left = closure_eval(add_mod4, &[l1, w("01")]).unwrap();
    let inner = closure_eval(add_mod4, &[w("01"), w("01")]).unwrap();
    let right = closure_eval(add_mod4, &[w("0M"), inner]).unwrap();
    let ok = left == w("MM") && right == w("1M") && left != right;
    s.check(ok, || {
        (
            vec!["0M".into(), "01".into(), "01".into()],
            "MM vs 1M".into(),
            format!("{left} vs {right}"),
        )
    });
    s
}

fn suite_bracketings(width: usize) -> Result<Suite, VerifyError> {
    let mut s = Suite::new("closed diamond is bracketing independent (B=5, 14 trees)");
    let all = enumerate_valid(width)?;
    for g in &all {
        for h in &all {
            let want = prefix_state_oracle(g, h, width)?;
            for got in all_bracketings(&column_pairs(g.word(), h.word())) {
                s.check(got == want, || {
                    (
                        vec![g.to_string(), h.to_string()],
                        want.to_string(),
                        got.to_string(),
                    )
                });
            }
        }
    }
    Ok(s)
}

fn suite_decomposition(max_width: usize) -> Result<Suite, VerifyError> {
    let mut s = Suite::new("out_M of prefix states yields max/min (B<=6)");
    for width in 1..=max_width {
        let all = enumerate_valid(width)?;
        for g in &all {
            for h in &all {
                let (max, min) = max_min_oracle(g, h)?;
                for i in 1..=width {
                    let st = prefix_state_oracle(g, h, i - 1)?;
                    let b = StatePair(g.word().trits()[i - 1], h.word().trits()[i - 1]);
                    let got = out_m(st, b);
                    let want = StatePair(max.word().trits()[i - 1], min.word().trits()[i - 1]);
                    s.check(got == want, || {
                        (
                            vec![g.to_string(), h.to_string(), i.to_string()],
                            want.to_string(),
                            got.to_string(),
                        )
                    });
                }
            }
        }
    }
    Ok(s)
}

fn suite_substrings(max_width: usize) -> Result<Suite, VerifyError> {
    let mut s = Suite::new("substrings of valid strings are valid (B<=8)");
    for width in 1..=max_width {
        for w in enumerate_valid(width)? {
            for i in 1..=width {
                for j in i..=width {
                    let sub = w.word().slice(i, j).map_err(GrayError::from)?;
                    s.check(is_valid(&sub).is_some(), || {
                        (
                            vec![w.to_string(), format!("{i}..{j}")],
                            "valid".into(),
                            sub.to_string(),
                        )
                    });
                }
            }
        }
    }
    Ok(s)
}

/// Bits `i..=j` of consecutive codewords, with immediate repetitions
/// removed, run up and down through the `(j−i+1)`-bit code.
fn suite_truncation(max_width: usize) -> Result<Suite, VerifyError> {
    let mut s = Suite::new("truncated code counts up and down (B<=8)");
    for width in 2..=max_width {
        let codes: Vec<TernaryWord> = (0..1u64 << width)
            .map(|x| encode(CodeValue::new(x, width).unwrap()))
            .collect();
        for i in 1..width {
            for j in i + 1..=width {
                let k = j - i + 1;
                let mut seq: Vec<TernaryWord> = Vec::new();
                for c in &codes {
                    let t = c.slice(i, j).map_err(GrayError::from)?;
                    if seq.last() != Some(&t) {
                        seq.push(t);
                    }
                }
                let top = (1u64 << k) - 1;
                let ok = seq.iter().enumerate().all(|(n, t)| {
                    let phase = n as u64 % (2 * top);
                    let x = if phase <= top { phase } else { 2 * top - phase };
                    *t == encode(CodeValue::new(x, k).unwrap())
                });
                s.check(ok, || {
                    (
                        vec![format!("B={width}"), format!("{i}..{j}")],
                        format!("{k}-bit code up and down"),
                        seq.iter()
                            .map(|t| t.to_string())
                            .collect::<Vec<_>>()
                            .join(" "),
                    )
                });
            }
        }
    }
    Ok(s)
}

/// Runs every property suite and folds them into one report.
pub fn run_property_suites() -> Result<VerifyReport, VerifyError> {
    let suites = vec![
        suite_associativity(),
        suite_operator_tables(),
        suite_non_associativity(),
        suite_bracketings(5)?,
        suite_decomposition(6)?,
        suite_substrings(8)?,
        suite_truncation(8)?,
    ];
    let mut report = VerifyReport::new("property suites", Mode::Exhaustive);
    let mut case = 0;
    for s in suites {
        for (inputs, expected, actual) in s.failures.iter().cloned() {
            let mut ins = vec![s.name.to_string()];
            ins.extend(inputs);
            report.record(Failure {
                case,
                inputs: ins,
                expected: vec![expected],
                actual: vec![actual],
            });
        }
        report.cases_run += s.cases;
        case += s.cases;
        report.suites.push(SuiteResult {
            name: s.name.to_string(),
            cases: s.cases,
            failures: s.failures.len() as u64,
        });
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_sort_width4_exhaustive() {
        let r = verify_two_sort(4, Mode::Exhaustive).unwrap();
        assert_eq!(r.cases_run, 961);
        assert!(r.passed(), "{}", r.summary());
        assert_eq!(r.metrics.unwrap().total, 55);
    }

    #[test]
    fn mutated_two_sort_is_caught() {
        let n = build_two_sort(4).unwrap();
        for k in 0..4 {
            let m = mutate_and_to_or(&n, k).unwrap();
            let r = verify_two_sort_netlist("mutant", &m, 4, Mode::Exhaustive).unwrap();
            assert!(r.failure_count >= 1, "AND #{k}");
            let f = r.first_failure().unwrap();
            assert_eq!(f.inputs.len(), 2);
            assert_ne!(f.expected, f.actual);
        }
    }

    #[test]
    fn random_mode_is_deterministic_and_thread_independent() {
        let mode = Mode::Random {
            seed: 7,
            samples: 5000,
        };
        let a = verify_two_sort(10, mode).unwrap();
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let b = pool.install(|| verify_two_sort(10, mode).unwrap());
        assert_eq!(a, b);
        assert_eq!(a.cases_run, 5000);
        assert!(a.sampler.is_some());

        let m = mutate_and_to_or(&build_two_sort(10).unwrap(), 0).unwrap();
        let x = verify_two_sort_netlist("m", &m, 10, mode).unwrap();
        let y = pool.install(|| verify_two_sort_netlist("m", &m, 10, mode).unwrap());
        assert_eq!(x, y);
        assert!(x.failure_count > 0);
        assert!(x.failures.len() <= MAX_FAILURES);
        assert!(x.failures.windows(2).all(|w| w[0].case < w[1].case));
    }

    #[test]
    fn different_seeds_sample_differently() {
        let m = mutate_and_to_or(&build_two_sort(6).unwrap(), 3).unwrap();
        let a = verify_two_sort_netlist(
            "m",
            &m,
            6,
            Mode::Random {
                seed: 1,
                samples: 3000,
            },
        )
        .unwrap();
        let b = verify_two_sort_netlist(
            "m",
            &m,
            6,
            Mode::Random {
                seed: 2,
                samples: 3000,
            },
        )
        .unwrap();
        assert_ne!(a.failures, b.failures);
    }

    #[test]
    fn merge_is_associative() {
        let mk = |cases: &[u64]| {
            let mut r = VerifyReport::new("t", Mode::Exhaustive);
            r.cases_run = 10;
            for &c in cases {
                r.record(Failure {
                    case: c,
                    inputs: vec![],
                    expected: vec![],
                    actual: vec![],
                });
            }
            r
        };
        let a = mk(&(0..60).collect::<Vec<_>>());
        let b = mk(&(100..160).collect::<Vec<_>>());
        let c = mk(&(60..100).collect::<Vec<_>>());
        let l = a.clone().merge(b.clone()).merge(c.clone());
        let r = a.clone().merge(b.clone().merge(c.clone()));
        assert_eq!(l, r);
        assert_eq!(l, c.merge(a).merge(b));
        assert_eq!(l.failure_count, 160);
        assert_eq!(l.failures.len(), MAX_FAILURES);
        assert_eq!(l.failures.last().unwrap().case, 99);
    }

    #[test]
    fn network_sort4_exhaustive_and_mutation() {
        let r = verify_network(NetworkVariant::Sort4, 2, Mode::Exhaustive).unwrap();
        assert_eq!(r.cases_run, 2401);
        assert!(r.passed());
        assert_eq!(r.metrics.unwrap().total, 65);

        let s = builtin_schedule(NetworkVariant::Sort4)
            .unwrap()
            .without_comparator(4);
        let r = verify_schedule("mutant", &s, 2, Mode::Exhaustive).unwrap();
        assert!(r.failure_count >= 1);
    }

    #[test]
    fn network_sort10_random_sample() {
        let mode = Mode::Random {
            seed: 42,
            samples: 20_000,
        };
        let r = verify_network(NetworkVariant::Sort10Size, 4, mode).unwrap();
        assert!(r.passed(), "{}", r.summary());
    }

    #[test]
    fn campaign_limits() {
        assert!(matches!(
            verify_two_sort(9, Mode::Exhaustive),
            Err(VerifyError::Width { limit: 8, .. })
        ));
        assert!(matches!(
            verify_two_sort(
                17,
                Mode::Random {
                    seed: 0,
                    samples: 1
                }
            ),
            Err(VerifyError::Width { limit: 16, .. })
        ));
        assert!(matches!(
            verify_two_sort(
                3,
                Mode::Random {
                    seed: 0,
                    samples: 0
                }
            ),
            Err(VerifyError::NoSamples)
        ));
        assert!(matches!(
            verify_network(NetworkVariant::Sort10Size, 2, Mode::Exhaustive),
            Err(VerifyError::TooManyCases(_))
        ));
        let n = build_two_sort(3).unwrap();
        assert!(matches!(
            verify_two_sort_netlist("x", &n, 4, Mode::Exhaustive),
            Err(VerifyError::Ports { what: "inputs", .. })
        ));
    }

    #[test]
    fn property_suites_pass() {
        let r = run_property_suites().unwrap();
        assert!(r.passed(), "{}", r.summary());
        let cases = |prefix: &str| {
            r.suites
                .iter()
                .find(|s| s.name.starts_with(prefix))
                .unwrap()
                .cases
        };
        assert_eq!(cases("diamond associativity"), 64);
        assert_eq!(cases("closed operator tables"), 162);
        assert_eq!(cases("closed addition"), 1);
        assert_eq!(cases("closed diamond is bracketing"), 63 * 63 * 14);
    }

    #[test]
    fn report_json_has_all_fields() {
        let r = verify_two_sort(
            2,
            Mode::Random {
                seed: 3,
                samples: 10,
            },
        )
        .unwrap();
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        for key in [
            "target",
            "mode",
            "sampler",
            "cases_run",
            "failure_count",
            "failures",
            "metrics",
        ] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert_eq!(v["mode"]["kind"], "random");
        assert_eq!(v["mode"]["seed"], 3);
        let back: VerifyReport = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
    }
}
