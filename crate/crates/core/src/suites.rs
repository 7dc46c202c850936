//! Seeded property suites over random terms. Every sample is reproducible
//! from its seed alone; samples run in parallel and are reported in index
//! order.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::combinatorics::index_assignments;
use crate::gen::{sample_seed, GenConfig, Generator};
use crate::lamu;
use crate::measures::bold_ms;
use crate::oracle::{explore, reaches};
use crate::resource::{
    contract, linear_named_app, linear_named_app_pair, linear_subst, normalize_term, redex_kind, redexes, step_r,
    step_sum, StepMode, Strategy,
};
use crate::sum::{bag_product, Bool, Nat, Semiring, Sum};
use crate::syntax::{Bag, Ref, ResTerm, Syntax};
use crate::taylor::{
    find_covering_step, interference, simulate_step, simulation_preimage, taylor_enum, taylor_member, Budget,
};
use crate::textio::parse_res_term;
use crate::Error;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Sn,
    Confluence,
    Support,
    Simulation,
    Injectivity,
    Lemmas,
    Counterexamples,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Sn,
        Suite::Confluence,
        Suite::Support,
        Suite::Simulation,
        Suite::Injectivity,
        Suite::Lemmas,
        Suite::Counterexamples,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Sn => "sn",
            Suite::Confluence => "confluence",
            Suite::Support => "support",
            Suite::Simulation => "simulation",
            Suite::Injectivity => "injectivity",
            Suite::Lemmas => "lemmas",
            Suite::Counterexamples => "counterexamples",
        }
    }

    /// Term size used when none is given.
    pub fn default_size(self) -> usize {
        match self {
            Suite::Sn => 30,
            Suite::Confluence => 14,
            Suite::Support => 20,
            Suite::Simulation => 9,
            Suite::Injectivity => 12,
            Suite::Lemmas | Suite::Counterexamples => 8,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL.into_iter().find(|k| k.name() == s).ok_or_else(|| format!("unknown suite `{s}`"))
    }
}

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub samples: usize,
    pub seed: u64,
    pub max_term_size: Option<usize>,
    pub node_cap: usize,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Failure {
    pub index: usize,
    pub seed: u64,
    pub input: String,
    pub expected: String,
    pub actual: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub samples: usize,
    pub failures: Vec<Failure>,
    /// Kept out of the serialized report so that it is reproducible.
    #[serde(skip)]
    pub wall_time: Duration,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "suite {}: {} samples, {} failures", self.suite, self.samples, self.failures.len())?;
        for x in &self.failures {
            writeln!(f, "  #{} seed {}", x.index, x.seed)?;
            writeln!(f, "    input:    {}", x.input)?;
            writeln!(f, "    expected: {}", x.expected)?;
            writeln!(f, "    actual:   {}", x.actual)?;
        }
        Ok(())
    }
}

struct Mismatch {
    input: String,
    expected: String,
    actual: String,
}

type Outcome = Result<(), Mismatch>;

fn mismatch(input: impl fmt::Display, expected: impl fmt::Display, actual: impl fmt::Display) -> Outcome {
    Err(Mismatch { input: input.to_string(), expected: expected.to_string(), actual: actual.to_string() })
}

fn check_eq<T: PartialEq + fmt::Display>(input: impl fmt::Display, expected: &T, actual: &T) -> Outcome {
    if expected == actual {
        Ok(())
    } else {
        mismatch(input, expected, actual)
    }
}

fn run_samples(suite: Suite, cfg: &SuiteConfig, n: usize, f: impl Fn(usize, u64) -> Outcome + Sync) -> SuiteReport {
    let start = Instant::now();
    let results: Vec<Option<Failure>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let seed = sample_seed(cfg.seed, i as u64);
            f(i, seed).err().map(|m| Failure { index: i, seed, input: m.input, expected: m.expected, actual: m.actual })
        })
        .collect();
    SuiteReport { suite, samples: n, failures: results.into_iter().flatten().collect(), wall_time: start.elapsed() }
}

pub fn run(suite: Suite, cfg: &SuiteConfig) -> SuiteReport {
    let size = cfg.max_term_size.unwrap_or(suite.default_size());
    match suite {
        Suite::Sn => run_samples(suite, cfg, cfg.samples, |_, seed| sn_sample(seed, size)),
        Suite::Confluence => {
            run_samples(suite, cfg, cfg.samples, |_, seed| confluence_sample(seed, size, cfg.node_cap))
        }
        Suite::Support => run_samples(suite, cfg, cfg.samples, |_, seed| support_sample(seed, size)),
        Suite::Simulation => run_samples(suite, cfg, cfg.samples, |_, seed| simulation_sample(seed, size)),
        Suite::Injectivity => run_samples(suite, cfg, cfg.samples, |_, seed| injectivity_sample(seed, size)),
        Suite::Lemmas => {
            let k = LEMMAS.len();
            run_samples(suite, cfg, cfg.samples * k, |i, seed| {
                let (name, check) = LEMMAS[i % k];
                let mut g = Generator::new(GenConfig::default(), seed);
                check(&mut g, size, cfg.node_cap).map_err(|m| Mismatch { input: format!("[{name}] {}", m.input), ..m })
            })
        }
        Suite::Counterexamples => {
            let pack = counterexamples();
            run_samples(suite, cfg, pack.len(), |i, _| (pack[i].1)())
        }
    }
}

/// Bound on steps along one strategy before declaring divergence.
const STEP_LIMIT: usize = 200_000;

fn sn_sample(seed: u64, size: usize) -> Outcome {
    let t = Generator::with_seed(seed).res_term(size);
    let strategies =
        [("leftmost", Strategy::Leftmost), ("rightmost", Strategy::Rightmost), ("random", Strategy::random(seed))];
    for (label, mut strategy) in strategies {
        let mut cur = Sum::<Bool>::term(t.clone());
        for steps in 0.. {
            if steps > STEP_LIMIT {
                return mismatch(
                    &t,
                    format!("{label} reduction terminates"),
                    format!("still running after {STEP_LIMIT} steps"),
                );
            }
            let step = match step_sum(&cur, &mut strategy) {
                Ok(s) => s,
                Err(Error::Normal) => break,
                Err(e) => return mismatch(&t, "a step", e),
            };
            let before = bold_ms(&step.addend);
            let reduct = step_r::<Bool>(&step.addend, &step.redex.path).expect("step_sum picked a redex");
            if let Some(u) = reduct.terms().find(|u| bold_ms(u) >= before) {
                return mismatch(
                    &t,
                    format!("{label}: every reduct of {} below {before}", step.addend),
                    format!("{u} has {}", bold_ms(u)),
                );
            }
            cur = step.result;
        }
    }
    Ok(())
}

fn confluence_sample(seed: u64, size: usize, cap: usize) -> Outcome {
    let t = Generator::with_seed(seed).res_term(size);
    let bool_sink = unique_sink::<Bool>(&t, cap)?;
    let nat_sink = unique_sink::<Nat>(&t, cap)?;
    check_eq(&t, &bool_sink, &nat_sink.support())
}

fn unique_sink<S: Semiring>(t: &ResTerm, cap: usize) -> Result<Sum<S>, Mismatch> {
    let tag = format!("{:?}", S::TAG).to_lowercase();
    let fail = |e: String, a: String| Mismatch { input: t.to_string(), expected: format!("{tag}: {e}"), actual: a };
    let g = explore(&Sum::<S>::term(t.clone()), StepMode::Whole, cap)
        .map_err(|e| fail("a complete graph".into(), e.to_string()))?;
    if !g.is_acyclic() {
        return Err(fail("an acyclic graph".into(), "a cycle".into()));
    }
    let sink = g.unique_sink().map_err(|(a, b)| fail("one sink".into(), format!("{a} and {b}")))?.clone();
    let engine = normalize_term::<S>(t);
    if engine != sink {
        return Err(fail(format!("engine normal form {engine}"), format!("graph sink {sink}")));
    }
    Ok(sink)
}

fn support_sample(seed: u64, size: usize) -> Outcome {
    let t = Generator::with_seed(seed).res_term(size);
    let nat = normalize_term::<Nat>(&t);
    check_eq(&t, &normalize_term::<Bool>(&t), &nat.support())?;
    // a random strategy reaches the same quantitative normal form
    let mut strategy = Strategy::random(seed);
    let mut cur = Sum::<Nat>::term(t.clone());
    while let Ok(s) = step_sum(&cur, &mut strategy) {
        cur = s.result;
    }
    check_eq(&t, &nat, &cur)
}

/// Budgets for the simulation suite.
const SIM_FORWARD: Budget = Budget { max_size: 10, max_count: Some(5_000) };
const SIM_TARGETS: Budget = Budget { max_size: 4, max_count: Some(8) };

fn simulation_sample(seed: u64, size: usize) -> Outcome {
    let mut g = Generator::with_seed(seed);
    let mut m = g.term(size);
    for _ in 0..64 {
        if !lamu::redexes(&m).is_empty() {
            break;
        }
        m = g.term(size);
    }
    let rs = lamu::redexes(&m);
    if rs.is_empty() {
        return Ok(());
    }
    let r = &rs[g.rng().gen_range(0..rs.len())];
    let n = lamu::reduce_redex(&m, &r.path).expect("listed redex");
    let input = format!("{m} at {:?}", r.path);
    for s in taylor_enum(&m, &SIM_FORWARD) {
        let Some(reduct) = simulate_step(&s, &m, &r.path) else {
            return mismatch(&input, format!("{s} steps with the redex"), "no matching redex");
        };
        if let Some(u) = reduct.terms().find(|u| !taylor_member(u, &n)) {
            return mismatch(&input, format!("reduct of {s} inside T({n})"), u);
        }
        if redex_kind(&s).is_some() {
            let base = contract::<Bool>(&s).expect("root redex");
            if find_covering_step(&m, &base).is_none() {
                return mismatch(&input, format!("a one-step reduct covering {base}"), "none");
            }
        }
    }
    for target in taylor_enum(&n, &SIM_TARGETS) {
        let budget = Budget { max_size: 3 * target.size() + 2, max_count: Some(200_000) };
        if simulation_preimage(&m, &r.path, &target, &budget).is_none() {
            return mismatch(&input, format!("an approximant reducing to {target} + ..."), "none within budget");
        }
    }
    Ok(())
}

const INJECTIVITY_BUDGET: Budget = Budget { max_size: 10, max_count: None };

fn injectivity_sample(seed: u64, size: usize) -> Outcome {
    let m = Generator::with_seed(seed).term(size);
    match interference(&m, &INJECTIVITY_BUDGET) {
        None => Ok(()),
        Some((t, s, h)) => mismatch(&m, "disjoint normal forms", format!("{t} and {s} share {h}")),
    }
}

// Identities between linear substitution, linear named application and
// renaming. The right-hand sides are computed independently, by summing over
// all index assignments of the outer bag.

type N = Sum<Nat>;
type LemmaCheck = fn(&mut Generator, usize, usize) -> Outcome;

const VARS: [&str; 3] = ["x", "y", "z"];
const NAMES: [&str; 3] = ["a", "b", "c"];
/// Never generated, so fresh.
const FRESH: &str = "d";

fn lsub(t: &ResTerm, b: &Bag, x: &Ref) -> N {
    linear_subst::<Nat>(t, b, x)
}

fn lnap(t: &ResTerm, a: &Ref, b: &Bag) -> N {
    linear_named_app::<Nat>(t, a, b)
}

fn lnap_sum(s: &N, a: &Ref, b: &Bag) -> N {
    s.flat_map(|t| lnap(t, a, b))
}

fn lsub_sum(s: &N, b: &Bag, x: &Ref) -> N {
    s.flat_map(|t| lsub(t, b, x))
}

/// `Σ_W f(w⁰, …, wⁿ)` over `W : positions of u → {0..n}`.
fn w_sum(u: &Bag, n: usize, mut f: impl FnMut(&[Bag]) -> N) -> N {
    let mut out = N::zero();
    for w in index_assignments(u, n) {
        out.add_sum(&f(&w.composition));
    }
    out
}

/// `Σ_W f(w¹, …, wⁿ)` over `W : positions of u → {1..n}`.
fn w_sum_from_one(u: &Bag, n: usize, mut f: impl FnMut(&[Bag]) -> N) -> N {
    if n == 0 {
        return if u.is_empty() { f(&[]) } else { N::zero() };
    }
    w_sum(u, n - 1, f)
}

/// `Σ c · f(bag)` over bags `[p₁, …, pₙ]` with `pᵢ` an addend of `parts[i]`.
fn over_bags(parts: &[N], mut f: impl FnMut(&Bag) -> N) -> N {
    let mut out = N::zero();
    for (bag, c) in bag_product(parts) {
        out.add_scaled(&f(&bag), c);
    }
    out
}

fn pick<'a>(g: &mut Generator, pool: &[&'a str]) -> &'a str {
    pool[g.rng().gen_range(0..pool.len())]
}

fn without<'a>(pool: &[&'a str], drop: &[&str]) -> Vec<&'a str> {
    pool.iter().copied().filter(|p| !drop.contains(p)).collect()
}

fn term(g: &mut Generator, size: usize, names: &[&str]) -> ResTerm {
    g.res_over(size, &VARS, names)
}

fn bag_of(g: &mut Generator, k: usize, vars: &[&str], names: &[&str]) -> Bag {
    (0..k).map(|_| g.res_over(3, vars, names)).collect()
}

fn small_bag(g: &mut Generator, vars: &[&str], names: &[&str]) -> Bag {
    let k = g.rng().gen_range(0..=2);
    bag_of(g, k, vars, names)
}

/// A term with between 1 and `max` free occurrences of `x`, if one turns
/// up quickly.
fn term_with_var(g: &mut Generator, size: usize, x: &Ref, max: usize, names: &[&str]) -> ResTerm {
    let mut t = term(g, size, names);
    for _ in 0..32 {
        let d = t.degree_var(x);
        if (1..=max).contains(&d) {
            break;
        }
        t = term(g, size, names);
    }
    t
}

fn term_with_name(g: &mut Generator, size: usize, a: &Ref, names: &[&str]) -> ResTerm {
    let mut t = term(g, size, names);
    for _ in 0..32 {
        if t.degree_name(a) > 0 {
            break;
        }
        t = term(g, size, names);
    }
    t
}

fn show_bag(b: &Bag) -> String {
    b.to_string()
}

const LEMMAS: [(&str, LemmaCheck); 16] = [
    ("renamings commute", renamings_commute),
    ("renaming after substitution", renaming_after_substitution),
    ("renaming after named application", renaming_after_named_application),
    ("renaming after named application on a named term", renaming_after_named_pair),
    ("two substitutions", two_substitutions),
    ("substitution after named application", substitution_after_named_application),
    ("named application through a bag", named_application_through_bag),
    ("nested named applications on distinct names", nested_named_applications),
    ("swap of independent named applications", swap_independent),
    ("swap with a fresh name, first form", swap_fresh_first),
    ("swap with a fresh name, second form", swap_fresh_second),
    ("named application after renaming to the same name", named_application_after_renaming),
    ("named application after substitution", named_application_after_substitution),
    ("two named applications", two_named_applications),
    ("two named applications on a named term", two_named_applications_on_pair),
    ("reduction is monotone under substitution and named application", monotonicity),
];

pub fn lemma_names() -> Vec<&'static str> {
    LEMMAS.iter().map(|l| l.0).collect()
}

fn renamings_commute(g: &mut Generator, size: usize, _: usize) -> Outcome {
    let pool = ["a", "b", "c", "d"];
    let t = term(g, size, &NAMES);
    loop {
        let (al, be, ga, et) = (pick(g, &pool), pick(g, &pool), pick(g, &pool), pick(g, &pool));
        if al == et || be == et || be == ga {
            continue;
        }
        let (al, be, ga, et) = (Ref::free(al), Ref::free(be), Ref::free(ga), Ref::free(et));
        let lhs = t.rename_name(&al, &be).rename_name(&ga, &et);
        let rhs = t.rename_name(&ga, &et).rename_name(&al, &be);
        return check_eq(format!("{t} {{'{al}/'{be}}} {{'{ga}/'{et}}}"), &lhs, &rhs);
    }
}

fn renaming_after_substitution(g: &mut Generator, size: usize, _: usize) -> Outcome {
    let x = Ref::free("x");
    let t = term_with_var(g, size, &x, 3, &NAMES);
    let u = bag_of(g, t.degree_var(&x), &VARS, &NAMES);
    let (al, be) = (Ref::free(pick(g, &NAMES)), Ref::free(pick(g, &NAMES)));
    let lhs = lsub(&t, &u, &x).rename_name(&al, &be);
    let rhs = lsub(&t.rename_name(&al, &be), &u.rename_name(&al, &be), &x);
    check_eq(format!("{t}<{}/x>{{'{al}/'{be}}}", show_bag(&u)), &lhs, &rhs)
}

fn renaming_after_named_application(g: &mut Generator, size: usize, _: usize) -> Outcome {
    let ga = pick(g, &NAMES);
    let rest = without(&NAMES, &[ga]);
    let (al, be) = (pick(g, &rest), pick(g, &rest));
    let (al, be, ga) = (Ref::free(al), Ref::free(be), Ref::free(ga));
    let t = term_with_name(g, size, &ga, &NAMES);
    let u = small_bag(g, &VARS, &NAMES);
    let lhs = lnap(&t, &ga, &u).rename_name(&al, &be);
    let rhs = lnap(&t.rename_name(&al, &be), &ga, &u.rename_name(&al, &be));
    check_eq(format!("<{t}>_'{ga} {}", show_bag(&u)), &lhs, &rhs)
}

fn renaming_after_named_pair(g: &mut Generator, size: usize, _: usize) -> Outcome {
    let ga = pick(g, &NAMES);
    let rest = without(&NAMES, &[ga]);
    let (al, be) = (pick(g, &rest), pick(g, &rest));
    let et = pick(g, &NAMES);
    let (al, be, ga, et) = (Ref::free(al), Ref::free(be), Ref::free(ga), Ref::free(et));
    let t = term(g, size, &NAMES);
    let u = small_bag(g, &VARS, &NAMES);
    let et2 = if et == be { al.clone() } else { et.clone() };
    let lhs = linear_named_app_pair::<Nat>(&et, &t, &ga, &u).rename_name(&al, &be);
    let rhs = linear_named_app_pair::<Nat>(&et2, &t.rename_name(&al, &be), &ga, &u.rename_name(&al, &be));
    check_eq(format!("<<'{et}|{t}>>_'{ga} {}", show_bag(&u)), &lhs, &rhs)
}

fn two_substitutions(g: &mut Generator, size: usize, _: usize) -> Outcome {
    let (x, y) = (Ref::free("x"), Ref::free("y"));
    let t = term_with_var(g, size, &y, 3, &NAMES);
    let v = bag_of(g, t.degree_var(&y), &VARS, &NAMES);
    let k = t.degree_var(&x) + v.iter().map(|e| e.degree_var(&x)).sum::<usize>();
    if k > 5 {
        return Ok(());
    }
    let u = bag_of(g, k, &["x", "z"], &NAMES);
    let lhs = lsub_sum(&lsub(&t, &v, &y), &u, &x);
    let vs = v.as_slice();
    let rhs = w_sum(&u, vs.len(), |w| {
        let parts: Vec<N> = vs.iter().zip(&w[1..]).map(|(vi, wi)| lsub(vi, wi, &x)).collect();
        lsub(&t, &w[0], &x).flat_map(|s| over_bags(&parts, |b| lsub(s, b, &y)))
    });
    check_eq(format!("{t}<{}/y><{}/x>", show_bag(&v), show_bag(&u)), &lhs, &rhs)
}

fn substitution_after_named_application(g: &mut Generator, size: usize, _: usize) -> Outcome {
    let x = Ref::free("x");
    let al = pick(g, &NAMES);
    let others = without(&NAMES, &[al]);
    let al = Ref::free(al);
    let t = term_with_name(g, size, &al, &NAMES);
    let v = small_bag(g, &VARS, &NAMES);
    let k = t.degree_var(&x) + v.iter().map(|e| e.degree_var(&x)).sum::<usize>();
    if k > 5 {
        return Ok(());
    }
    let u = bag_of(g, k, &VARS, &others);
    let lhs = lsub_sum(&lnap(&t, &al, &v), &u, &x);
    let vs = v.as_slice();
    let rhs = w_sum(&u, vs.len(), |w| {
        let parts: Vec<N> = vs.iter().zip(&w[1..]).map(|(vi, wi)| lsub(vi, wi, &x)).collect();
        lsub(&t, &w[0], &x).flat_map(|s| over_bags(&parts, |b| lnap(s, &al, b)))
    });
    check_eq(format!("(<{t}>_'{al} {})<{}/x>", show_bag(&v), show_bag(&u)), &lhs, &rhs)
}

fn named_application_through_bag(g: &mut Generator, size: usize, _: usize) -> Outcome {
    let al = pick(g, &NAMES);
    let others = without(&NAMES, &[al]);
    let al = Ref::free(al);
    let t = term_with_name(g, size, &al, &NAMES);
    let v = small_bag(g, &VARS, &others);
    let u = small_bag(g, &VARS, &NAMES);
    let lhs = lnap(&ResTerm::App(Arc::new(t.clone()), v.clone()), &al, &u);
    let rhs = lnap(&t, &al, &u).app_to(&v);
    check_eq(format!("<{t}{}>_'{al} {}", show_bag(&v), show_bag(&u)), &lhs, &rhs)
}

fn nested_named_applications(g: &mut Generator, size: usize, _: usize) -> Outcome {
    let al = pick(g, &NAMES);
    let be = pick(g, &without(&NAMES, &[al]));
    let t_names = without(&NAMES, &[be]);
    let (al, be) = (Ref::free(al), Ref::free(be));
    let t = term_with_name(g, size, &al, &t_names);
    let v = small_bag(g, &VARS, &NAMES);
    let u = small_bag(g, &VARS, &NAMES);
    let lhs = lnap_sum(&lnap(&t, &al, &v), &be, &u);
    let vs = v.as_slice();
    let rhs = w_sum_from_one(&u, vs.len(), |w| {
        let parts: Vec<N> = vs.iter().zip(w).map(|(vi, wi)| lnap(vi, &be, wi)).collect();
        over_bags(&parts, |b| lnap(&t, &al, b))
    });
    check_eq(format!("<<{t}>_'{al} {}>_'{be} {}", show_bag(&v), show_bag(&u)), &lhs, &rhs)
}

fn two_distinct_names(g: &mut Generator) -> (&'static str, &'static str) {
    let al = pick(g, &NAMES);
    (al, pick(g, &without(&NAMES, &[al])))
}

fn swap_independent(g: &mut Generator, size: usize, _: usize) -> Outcome {
    let (a, b) = two_distinct_names(g);
    let (al, be) = (Ref::free(a), Ref::free(b));
    let t = term_with_name(g, size, &al, &NAMES);
    let u = small_bag(g, &VARS, &without(&NAMES, &[b]));
    let v = small_bag(g, &VARS, &without(&NAMES, &[a]));
    let lhs = lnap_sum(&lnap(&t, &al, &u), &be, &v);
    let rhs = lnap_sum(&lnap(&t, &be, &v), &al, &u);
    check_eq(format!("<<{t}>_'{al} {}>_'{be} {}", show_bag(&u), show_bag(&v)), &lhs, &rhs)
}

fn swap_fresh_first(g: &mut Generator, size: usize, _: usize) -> Outcome {
    let (a, b) = two_distinct_names(g);
    let (al, be, de) = (Ref::free(a), Ref::free(b), Ref::free(FRESH));
    let t = term_with_name(g, size, &al, &NAMES);
    let u = small_bag(g, &VARS, &NAMES);
    let v = small_bag(g, &VARS, &without(&NAMES, &[a]));
    let lhs = lnap_sum(&lnap(&t, &al, &u), &be, &v);
    let u_de = u.rename_name(&de, &be);
    let rhs =
        w_sum(&v, 1, |w| lnap_sum(&lnap_sum(&lnap(&t, &be, &w[0]), &al, &u_de), &de, &w[1]).rename_name(&be, &de));
    check_eq(format!("<<{t}>_'{al} {}>_'{be} {}", show_bag(&u), show_bag(&v)), &lhs, &rhs)
}

fn swap_fresh_second(g: &mut Generator, size: usize, _: usize) -> Outcome {
    let (a, b) = two_distinct_names(g);
    let (al, be, de) = (Ref::free(a), Ref::free(b), Ref::free(FRESH));
    let t = term_with_name(g, size, &al, &NAMES);
    let u = small_bag(g, &VARS, &without(&NAMES, &[b]));
    let v = small_bag(g, &VARS, &NAMES);
    let lhs = lnap_sum(&lnap(&t, &al, &u), &be, &v);
    let rhs = lnap_sum(&lnap(&t, &be, &v.rename_name(&de, &al)), &al, &u).rename_name(&al, &de);
    check_eq(format!("<<{t}>_'{al} {}>_'{be} {}", show_bag(&u), show_bag(&v)), &lhs, &rhs)
}

fn named_application_after_renaming(g: &mut Generator, size: usize, _: usize) -> Outcome {
    let (a, b) = two_distinct_names(g);
    let (al, be) = (Ref::free(a), Ref::free(b));
    let t = term_with_name(g, size, &be, &NAMES);
    let u = small_bag(g, &VARS, &without(&NAMES, &[b]));
    let lhs = lnap(&t.rename_name(&al, &be), &al, &u);
    let rhs = w_sum(&u, 1, |w| lnap_sum(&lnap(&t, &al, &w[0]), &be, &w[1]).rename_name(&al, &be));
    check_eq(format!("<{t}{{'{al}/'{be}}}>_'{al} {}", show_bag(&u)), &lhs, &rhs)
}

fn named_application_after_substitution(g: &mut Generator, size: usize, _: usize) -> Outcome {
    let x = Ref::free("x");
    let al = Ref::free(pick(g, &NAMES));
    let t = term_with_var(g, size, &x, 3, &NAMES);
    let v = bag_of(g, t.degree_var(&x), &VARS, &NAMES);
    let u = small_bag(g, &["y", "z"], &NAMES);
    let lhs = lnap_sum(&lsub(&t, &v, &x), &al, &u);
    let vs = v.as_slice();
    let rhs = w_sum(&u, vs.len(), |w| {
        let parts: Vec<N> = vs.iter().zip(&w[1..]).map(|(vi, wi)| lnap(vi, &al, wi)).collect();
        lnap(&t, &al, &w[0]).flat_map(|s| over_bags(&parts, |b| lsub(s, b, &x)))
    });
    check_eq(format!("<{t}<{}/x>>_'{al} {}", show_bag(&v), show_bag(&u)), &lhs, &rhs)
}

fn two_named_applications(g: &mut Generator, size: usize, _: usize) -> Outcome {
    let (a, c) = two_distinct_names(g);
    let (al, ga) = (Ref::free(a), Ref::free(c));
    let t = term_with_name(g, size, &ga, &NAMES);
    let v = small_bag(g, &VARS, &NAMES);
    let u = small_bag(g, &VARS, &without(&NAMES, &[c]));
    let lhs = lnap_sum(&lnap(&t, &ga, &v), &al, &u);
    let vs = v.as_slice();
    let rhs = w_sum(&u, vs.len(), |w| {
        let parts: Vec<N> = vs.iter().zip(&w[1..]).map(|(vi, wi)| lnap(vi, &al, wi)).collect();
        lnap(&t, &al, &w[0]).flat_map(|s| over_bags(&parts, |b| lnap(s, &ga, b)))
    });
    check_eq(format!("<<{t}>_'{ga} {}>_'{al} {}", show_bag(&v), show_bag(&u)), &lhs, &rhs)
}

fn two_named_applications_on_pair(g: &mut Generator, size: usize, _: usize) -> Outcome {
    let (a, c) = two_distinct_names(g);
    let (al, ga) = (Ref::free(a), Ref::free(c));
    let et = Ref::free(pick(g, &NAMES));
    let t = term(g, size, &NAMES);
    let v = small_bag(g, &VARS, &NAMES);
    let u = small_bag(g, &VARS, &without(&NAMES, &[c]));
    let pair = |body: &ResTerm, name: &Ref, b: &Bag| linear_named_app_pair::<Nat>(&et, body, name, b);
    let lhs = pair(&t, &ga, &v).flat_map(|s| pair(s, &al, &u));
    let vs = v.as_slice();
    let rhs = w_sum(&u, vs.len(), |w| {
        let parts: Vec<N> = vs.iter().zip(&w[1..]).map(|(vi, wi)| lnap(vi, &al, wi)).collect();
        pair(&t, &al, &w[0]).flat_map(|s| over_bags(&parts, |b| pair(s, &ga, b)))
    });
    check_eq(format!("<<<'{et}|{t}>>_'{ga} {}>_'{al} {}", show_bag(&v), show_bag(&u)), &lhs, &rhs)
}

/// `μα.B` for each body `B` in which `α` occurs free as `'a`.
fn mu_close(bodies: &N, named: &Ref) -> N {
    let named = if *named == Ref::free("a") { Ref::Bound(0) } else { named.clone() };
    bodies.map_terms(|b| ResTerm::Mu(named.clone(), Arc::new(b.close_name("a"))))
}

/// `Σ c · f([s', rest])` over the addends `s'` of `big`.
fn with_first(big: &N, rest: &Bag, mut f: impl FnMut(&Bag) -> N) -> N {
    let mut out = N::zero();
    for (s, c) in big.iter() {
        out.add_scaled(&f(&Bag::singleton(s.clone()).union(rest)), c);
    }
    out
}

fn monotonicity(g: &mut Generator, size: usize, cap: usize) -> Outcome {
    let x = Ref::free("x");
    let al = Ref::free("a");
    let mut s = term(g, size.min(6), &NAMES);
    for _ in 0..64 {
        if !redexes(&s).is_empty() {
            break;
        }
        s = term(g, size.min(6), &NAMES);
    }
    let rs = redexes(&s);
    if rs.is_empty() {
        return Ok(());
    }
    let r = &rs[g.rng().gen_range(0..rs.len())];
    let big = step_r::<Nat>(&s, &r.path).expect("listed redex");
    let clause = g.rng().gen_range(1..=7);
    let (lhs, rhs) = match clause {
        1 => {
            let (a, b) = (Ref::free(pick(g, &NAMES)), Ref::free(pick(g, &NAMES)));
            (N::term(s.rename_name(&a, &b)), big.rename_name(&a, &b))
        }
        2 => {
            let t = term_with_var(g, 5, &x, 3, &NAMES);
            let u = bag_of(g, t.degree_var(&x).saturating_sub(1), &VARS, &NAMES);
            let lhs = lsub(&t, &Bag::singleton(s.clone()).union(&u), &x);
            (lhs, with_first(&big, &u, |b| lsub(&t, b, &x)))
        }
        3 => {
            let k = s.degree_var(&x);
            if k > 3 {
                return Ok(());
            }
            let u = bag_of(g, k, &VARS, &NAMES);
            (lsub(&s, &u, &x), lsub_sum(&big, &u, &x))
        }
        4 => {
            let t = term_with_name(g, 5, &al, &NAMES);
            let k = g.rng().gen_range(0..=1);
            let u = bag_of(g, k, &VARS, &NAMES);
            let lhs = lnap(&t, &al, &Bag::singleton(s.clone()).union(&u));
            (lhs, with_first(&big, &u, |b| lnap(&t, &al, b)))
        }
        5 => {
            let be = Ref::free(pick(g, &NAMES));
            let t = term(g, 5, &NAMES);
            let k = g.rng().gen_range(0..=1);
            let u = bag_of(g, k, &VARS, &NAMES);
            let pair = |b: &Bag| mu_close(&linear_named_app_pair::<Nat>(&be, &t, &al, b), &be);
            (pair(&Bag::singleton(s.clone()).union(&u)), with_first(&big, &u, pair))
        }
        6 => {
            let u = small_bag(g, &VARS, &NAMES);
            (lnap(&s, &al, &u), lnap_sum(&big, &al, &u))
        }
        _ => {
            let be = Ref::free(pick(g, &NAMES));
            let u = small_bag(g, &VARS, &NAMES);
            let pair = |body: &ResTerm| mu_close(&linear_named_app_pair::<Nat>(&be, body, &al, &u), &be);
            (pair(&s), big.flat_map(pair))
        }
    };
    let input = format!("clause {clause}: {s} -> {big}");
    match reaches(&lhs, &rhs, StepMode::PerOccurrence, cap) {
        Ok(true) => Ok(()),
        Ok(false) => mismatch(input, format!("{lhs} reduces to {rhs}"), "not reachable"),
        Err(e) => mismatch(input, format!("{lhs} reduces to {rhs}"), e),
    }
}

// Published failure instances, reproduced exactly.

fn r(s: &str) -> ResTerm {
    parse_res_term(s).expect("fixed counterexample parses")
}

fn bag(elems: &[&str]) -> Bag {
    elems.iter().map(|s| r(s)).collect()
}

type Check = fn() -> Outcome;

pub fn counterexample_names() -> Vec<&'static str> {
    counterexamples().into_iter().map(|c| c.0).collect()
}

fn counterexamples() -> Vec<(&'static str, Check)> {
    vec![
        ("rho and mu steps do not commute", rho_mu_non_commutation),
        ("two substitutions on the same variable", same_variable_substitutions),
        ("renaming to the same name", renaming_same_name),
        ("renaming with the renamed name in the bag", renaming_name_in_bag),
        ("named application with the variable in the bag", named_application_variable_in_bag),
        ("two named applications on the same name", named_applications_same_name),
        ("two named applications with the inner name in the bag", named_applications_name_in_bag),
        ("qualitative duplication is not monotone", qualitative_duplication),
    ]
}

fn rho_mu_non_commutation() -> Outcome {
    let t = r("(mu 'a.<'a> mu 'g.<'e> x) 1");
    let blocked = r("mu 'a.<'a> (mu 'g.<'e> x) 1");
    let target = r("mu 'a.<'e> x");
    let input = &t;
    let mu_step = redexes(&t).into_iter().find(|x| x.kind == lamu::RedexKind::Mu).expect("root μ-redex");
    check_eq(input, &Sum::<Nat>::term(blocked.clone()), &step_r::<Nat>(&t, &mu_step.path).unwrap())?;
    let rho_only = |from: &ResTerm| -> Vec<N> {
        redexes(from)
            .into_iter()
            .filter(|x| x.kind == lamu::RedexKind::Rho)
            .map(|x| step_r::<Nat>(from, &x.path).unwrap())
            .collect()
    };
    // the ρ-path: one ρ-step, then the remaining empty-bag step
    let after_rho = rho_only(&t);
    check_eq(input, &N::term(r("(mu 'a.<'e> x) 1")), &after_rho[0])?;
    check_eq(input, &N::term(target.clone()), &normalize_term::<Nat>(&t))?;
    if rho_only(&blocked).iter().any(|s| *s == N::term(target.clone())) {
        return mismatch(input, format!("no ρ-step from {blocked} to {target}"), "one exists");
    }
    let cap = 1000;
    match reaches(&N::term(blocked.clone()), &N::term(target.clone()), StepMode::Whole, cap) {
        Ok(true) => Ok(()),
        other => mismatch(input, "the diagram closes", format!("{other:?}")),
    }
}

fn same_variable_substitutions() -> Outcome {
    let x = Ref::free("x");
    let t = r("x");
    let lhs = lsub_sum(&lsub(&t, &Bag::empty(), &x), &bag(&["z"]), &x);
    let rhs = lsub_sum(&lsub(&t, &bag(&["z"]), &x), &Bag::empty(), &x);
    check_eq("x<1/x><[z]/x>", &N::zero(), &lhs)?;
    check_eq("x<[z]/x><1/x>", &N::term(r("z")), &rhs)
}

/// Right-hand side of the renaming identity, for `α` and `β` possibly equal.
fn renaming_rhs(t: &ResTerm, al: &Ref, be: &Ref, u: &Bag) -> N {
    w_sum(u, 1, |w| lnap_sum(&lnap(t, al, &w[0]), be, &w[1]).rename_name(al, be))
}

fn renaming_same_name() -> Outcome {
    let a = Ref::free("a");
    let t = r("mu 'g.<'a> x");
    let lhs = lnap(&t.rename_name(&a, &a), &a, &Bag::empty());
    let rhs = renaming_rhs(&t, &a, &a, &Bag::empty());
    check_eq("lhs", &N::term(r("mu 'g.<'a> x 1")), &lhs)?;
    check_eq("rhs", &N::term(r("mu 'g.<'a> x 1 1")), &rhs)
}

fn renaming_name_in_bag() -> Outcome {
    let (a, b) = (Ref::free("a"), Ref::free("b"));
    let t = r("mu 'g.<'a> x");
    let u = bag(&["mu 'h.<'b> y"]);
    let lhs = lnap(&t.rename_name(&a, &b), &a, &u);
    let rhs = renaming_rhs(&t, &a, &b, &u);
    check_eq("lhs", &N::term(r("mu 'g.<'a> x[mu 'h.<'b> y]")), &lhs)?;
    // the final renaming also reaches the bag element
    check_eq("rhs", &N::term(r("mu 'g.<'a> x[mu 'h.<'a> y 1]")), &rhs)?;
    if lhs == rhs {
        return mismatch("lhs vs rhs", "different", "equal");
    }
    Ok(())
}

fn named_application_variable_in_bag() -> Outcome {
    let (x, a) = (Ref::free("x"), Ref::free("a"));
    let t = r("mu 'g.<'a> y");
    let u = bag(&["x"]);
    let lhs = lnap_sum(&lsub(&t, &Bag::empty(), &x), &a, &u);
    let rhs = w_sum(&u, 0, |w| lnap(&t, &a, &w[0]).flat_map(|s| lsub(s, &Bag::empty(), &x)));
    check_eq("lhs", &N::term(r("mu 'g.<'a> y[x]")), &lhs)?;
    check_eq("rhs", &N::zero(), &rhs)
}

/// Right-hand side of the two-named-applications identity, names possibly
/// equal.
fn two_named_rhs(t: &ResTerm, al: &Ref, ga: &Ref, v: &Bag, u: &Bag) -> N {
    let vs = v.as_slice();
    w_sum(u, vs.len(), |w| {
        let parts: Vec<N> = vs.iter().zip(&w[1..]).map(|(vi, wi)| lnap(vi, al, wi)).collect();
        lnap(t, al, &w[0]).flat_map(|s| over_bags(&parts, |b| lnap(s, ga, b)))
    })
}

fn named_applications_same_name() -> Outcome {
    let a = Ref::free("a");
    let t = r("mu 'd.<'a> x");
    let u = bag(&["mu 'd.<'d> x"]);
    let v = bag(&["mu 'd.<'d> y"]);
    let lhs = lnap_sum(&lnap(&t, &a, &v), &a, &u);
    let rhs = two_named_rhs(&t, &a, &a, &v, &u);
    check_eq("lhs", &N::term(r("mu 'd.<'a> x[mu 'e.<'e> y][mu 'e.<'e> x]")), &lhs)?;
    check_eq("rhs", &N::term(r("mu 'd.<'a> x[mu 'e.<'e> x][mu 'e.<'e> y]")), &rhs)
}

fn named_applications_name_in_bag() -> Outcome {
    let (a, c) = (Ref::free("a"), Ref::free("c"));
    let t = r("mu 'd.<'a> x");
    let u = bag(&["mu 'd.<'c> x"]);
    let v = bag(&["mu 'd.<'d> x"]);
    let lhs = lnap_sum(&lnap(&t, &c, &v), &a, &u);
    let rhs = two_named_rhs(&t, &a, &c, &v, &u);
    check_eq("lhs", &N::zero(), &lhs)?;
    check_eq("rhs", &N::term(r("mu 'd.<'a> x[mu 'e.<'c> x[mu 'f.<'f> x]]")), &rhs)
}

fn qualitative_duplication() -> Outcome {
    let x = Ref::free("x");
    let t = r("x[x]");
    let s = r("(\\z.z)[y]");
    let s1 = r("y");
    let before = bag(&["(\\z.z)[y]", "(\\z.z)[y]"]);
    let after = Bag::new(vec![s.clone(), s1.clone()]);
    let target = format!("{s}[{s1}] + {s1}[{s}]");
    // quantitative: 2 s[s] reaches s[s'] + s'[s]
    let lhs = lsub(&t, &before, &x);
    let rhs = lsub(&t, &after, &x);
    check_eq("(x[x])<[s,s]/x> over Nat", &crate::textio::parse_sum::<Nat>(&format!("2*{s}[{s}]")).unwrap(), &lhs)?;
    match reaches(&lhs, &rhs, StepMode::PerOccurrence, 1000) {
        Ok(true) => {}
        other => return mismatch("Nat", format!("2*{s}[{s}] reaches {target}"), format!("{other:?}")),
    }
    // qualitative: s[s] does not
    let lhs_b = linear_subst::<Bool>(&t, &before, &x);
    let rhs_b = linear_subst::<Bool>(&t, &after, &x);
    match reaches(&lhs_b, &rhs_b, StepMode::Whole, 1000) {
        Ok(false) => Ok(()),
        other => mismatch("Bool", format!("{s}[{s}] does not reach {target}"), format!("{other:?}")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(samples: usize) -> SuiteConfig {
        SuiteConfig { samples, seed: 11, max_term_size: None, node_cap: 50_000 }
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn counterexample_pack_reproduces() {
        let rep = run(Suite::Counterexamples, &cfg(0));
        assert!(rep.passed(), "{rep}");
        assert_eq!(rep.samples, counterexample_names().len());
    }

    #[test]
    fn small_runs_pass() {
        for s in [Suite::Sn, Suite::Confluence, Suite::Support, Suite::Simulation, Suite::Injectivity, Suite::Lemmas] {
            let rep = run(s, &cfg(12));
            assert!(rep.passed(), "{rep}");
        }
    }

    #[test]
    fn reports_are_deterministic() {
        let a = serde_json::to_string(&run(Suite::Lemmas, &cfg(5))).unwrap();
        let b = serde_json::to_string(&run(Suite::Lemmas, &cfg(5))).unwrap();
        assert_eq!(a, b);
    }
}
