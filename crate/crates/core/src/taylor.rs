//! Taylor expansion: the resource approximants of a λμ-term, truncated by
//! size, and the normal-form sets built from them.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::lamu::{self, head_run, HeadRun};
use crate::resource::{self, contract, head_step, linear_named_app, linear_subst, normalize_term, redex_kind};
use crate::sum::{app_lift, Bool, Sum};
use crate::syntax::{Bag, Ref, ResTerm, Syntax, Term};
use crate::{Error, Result};

/// Truncation of the (infinite) expansion.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct Budget {
    pub max_size: usize,
    pub max_count: Option<usize>,
}

impl Budget {
    pub fn size(max_size: usize) -> Budget {
        Budget { max_size, max_count: None }
    }
}

/// `t ∈ T(M)`.
pub fn taylor_member(t: &ResTerm, m: &Term) -> bool {
    match (t, m) {
        (ResTerm::Var(a), Term::Var(b)) => a == b,
        (ResTerm::Lam(s), Term::Lam(n)) => taylor_member(s, n),
        (ResTerm::Mu(a, s), Term::Mu(b, n)) => a == b && taylor_member(s, n),
        (ResTerm::App(h, bag), Term::App(f, a)) => taylor_member(h, f) && bag.iter().all(|u| taylor_member(u, a)),
        _ => false,
    }
}

/// Approximants of `m` grouped by exact size, for sizes `0..=max`.
fn by_size(m: &Term, max: usize) -> Vec<Vec<ResTerm>> {
    let mut out = vec![Vec::new(); max + 1];
    if max == 0 {
        return out;
    }
    match m {
        Term::Var(r) => out[1].push(ResTerm::Var(r.clone())),
        Term::Lam(b) => {
            for (s, ts) in by_size(b, max - 1).into_iter().enumerate() {
                out[s + 1] = ts.into_iter().map(|t| ResTerm::Lam(Arc::new(t))).collect();
            }
        }
        Term::Mu(nm, b) => {
            for (s, ts) in by_size(b, max - 1).into_iter().enumerate() {
                out[s + 1] = ts.into_iter().map(|t| ResTerm::Mu(nm.clone(), Arc::new(t))).collect();
            }
        }
        Term::App(f, a) => {
            let heads = by_size(f, max - 1);
            // a bag element of size s costs s + 1
            let args = by_size(a, max.saturating_sub(3));
            let items: Vec<(usize, &ResTerm)> =
                args.iter().enumerate().flat_map(|(s, ts)| ts.iter().map(move |t| (s + 1, t))).collect();
            let bags = bags_by_cost(&items, max.saturating_sub(2));
            for (h, hs) in heads.iter().enumerate() {
                for (c, bs) in bags.iter().enumerate() {
                    let size = 1 + h + c;
                    if size > max {
                        break;
                    }
                    for head in hs {
                        for bag in bs {
                            out[size].push(ResTerm::App(Arc::new(head.clone()), bag.clone()));
                        }
                    }
                }
            }
        }
    }
    out
}

/// Multisets over `items` grouped by total cost, for costs `0..=max`.
fn bags_by_cost(items: &[(usize, &ResTerm)], max: usize) -> Vec<Vec<Bag>> {
    let mut out = vec![Vec::new(); max + 1];
    let mut cur: Vec<ResTerm> = Vec::new();
    fn go(
        items: &[(usize, &ResTerm)],
        from: usize,
        left: usize,
        cost: usize,
        cur: &mut Vec<ResTerm>,
        out: &mut Vec<Vec<Bag>>,
    ) {
        out[cost].push(Bag::new(cur.clone()));
        for i in from..items.len() {
            let (c, t) = items[i];
            if c > left {
                continue;
            }
            cur.push(t.clone());
            go(items, i, left - c, cost + c, cur, out);
            cur.pop();
        }
    }
    go(items, 0, max, 0, &mut cur, &mut out);
    out
}

/// `{ t ∈ T(M) : size(t) ≤ maxSize }`, ordered by size then canonically,
/// cut at `max_count` if given.
pub fn taylor_enum(m: &Term, b: &Budget) -> Vec<ResTerm> {
    let mut out = Vec::new();
    for mut ts in by_size(m, b.max_size) {
        ts.sort();
        out.extend(ts);
    }
    if let Some(k) = b.max_count {
        out.truncate(k);
    }
    out
}

/// The unique approximant whose bags are all empty.
pub fn empty_bag_approximant(m: &Term) -> ResTerm {
    match m {
        Term::Var(r) => ResTerm::Var(r.clone()),
        Term::Lam(b) => ResTerm::Lam(Arc::new(empty_bag_approximant(b))),
        Term::Mu(nm, b) => ResTerm::Mu(nm.clone(), Arc::new(empty_bag_approximant(b))),
        Term::App(f, _) => ResTerm::App(Arc::new(empty_bag_approximant(f)), Bag::empty()),
    }
}

/// Union of the normal forms of the truncated expansion.
pub fn nft_truncated(m: &Term, b: &Budget) -> BTreeSet<ResTerm> {
    let approx = taylor_enum(m, b);
    let nfs: Vec<Sum<Bool>> = approx.par_iter().map(normalize_term::<Bool>).collect();
    nfs.iter().flat_map(|s| s.terms().cloned()).collect()
}

/// Outcome of a budget-relative comparison.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Verdict {
    pub holds: bool,
    /// Budgets used on the left and on the right.
    pub budgets: (usize, usize),
    /// A normal form on the left missing on the right, when `holds` fails.
    pub witness: Option<ResTerm>,
}

/// `NFT(M) ⊆ NFT(N)` restricted to the given budgets.
pub fn leq_truncated_with(m: &Term, bm: &Budget, n: &Term, bn: &Budget) -> Verdict {
    let left = nft_truncated(m, bm);
    let right = nft_truncated(n, bn);
    let witness = left.iter().find(|t| !right.contains(*t)).cloned();
    Verdict { holds: witness.is_none(), budgets: (bm.max_size, bn.max_size), witness }
}

pub fn leq_truncated(m: &Term, n: &Term, b: &Budget) -> Verdict {
    leq_truncated_with(m, b, n, b)
}

pub fn nft_eq_truncated(m: &Term, n: &Term, b: &Budget) -> Verdict {
    let left = nft_truncated(m, b);
    let right = nft_truncated(n, b);
    let witness = left.symmetric_difference(&right).next().cloned();
    Verdict { holds: witness.is_none(), budgets: (b.max_size, b.max_size), witness }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum Solvability {
    Solvable(usize),
    Unknown,
}

pub fn solvable(m: &Term, fuel: usize) -> Solvability {
    match head_run(m, fuel) {
        HeadRun::Hnf { steps, .. } => Solvability::Solvable(steps),
        HeadRun::FuelExhausted(_) => Solvability::Unknown,
    }
}

/// Reduces, in an approximant `s` of `m`, every copy of the redex that `m`
/// has at `path`. `None` if `s ∉ T(m)` along the path.
pub fn simulate_step(s: &ResTerm, m: &Term, path: &[u32]) -> Option<Sum<Bool>> {
    let Some((&i, rest)) = path.split_first() else {
        lamu::redex_kind(m)?;
        redex_kind(s)?;
        return contract::<Bool>(s);
    };
    match (s, m, i) {
        (ResTerm::Lam(sb), Term::Lam(mb), 0) => Some(simulate_step(sb, mb, rest)?.lam()),
        (ResTerm::Mu(nm, sb), Term::Mu(_, mb), 0) => Some(simulate_step(sb, mb, rest)?.mu(nm)),
        (ResTerm::App(h, bag), Term::App(f, _), 0) => Some(simulate_step(h, f, rest)?.app_to(bag)),
        (ResTerm::App(h, bag), Term::App(_, a), 1) => {
            let parts = bag.iter().map(|u| simulate_step(u, a, rest)).collect::<Option<Vec<_>>>()?;
            Some(app_lift(&Sum::term((**h).clone()), &parts))
        }
        _ => None,
    }
}

/// An approximant of `m` whose simulated reduct contains `s_prime`,
/// searched up to `b`.
pub fn simulation_preimage(m: &Term, path: &[u32], s_prime: &ResTerm, b: &Budget) -> Option<ResTerm> {
    taylor_enum(m, b).into_iter().find(|s| simulate_step(s, m, path).is_some_and(|t| t.contains(s_prime)))
}

/// A one-step λμ-reduct `N` of `m` with every addend of `reduct` in `T(N)`.
pub fn find_covering_step(m: &Term, reduct: &Sum<Bool>) -> Option<Term> {
    lamu::redexes(m)
        .into_iter()
        .map(|r| lamu::reduce_redex(m, &r.path).expect("listed redex"))
        .find(|n| reduct.terms().all(|t| taylor_member(t, n)))
}

/// Breadth-first search for `M ↠ N` with `targets ⊆ T(N)`, up to `max_nodes`
/// visited terms. Returns `N` and its distance.
pub fn find_covering_reduct(m: &Term, targets: &BTreeSet<ResTerm>, max_nodes: usize) -> Option<(Term, usize)> {
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::from([(m.clone(), 0usize)]);
    seen.insert(m.clone());
    while let Some((n, d)) = queue.pop_front() {
        if targets.iter().all(|t| taylor_member(t, &n)) {
            return Some((n, d));
        }
        for r in lamu::redexes(&n) {
            let next = lamu::reduce_redex(&n, &r.path).expect("listed redex");
            if seen.len() < max_nodes && seen.insert(next.clone()) {
                queue.push_back((next, d + 1));
            }
        }
    }
    None
}

/// Comparison of `T(H(M))` with `H(T(M))`, both cut at size `B`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CommuteCheck {
    pub holds: bool,
    pub expansion_of_reduct: usize,
    pub reducts_of_expansion: usize,
    pub witness: Option<ResTerm>,
}

pub fn taylor_head_commute_check(m: &Term, b: &Budget) -> Result<CommuteCheck> {
    let path = lamu::head_redex_path(m).ok_or(Error::HeadNormal)?;
    let n = lamu::reduce_redex(m, &path)?;
    let lhs: BTreeSet<ResTerm> = taylor_enum(&n, b).into_iter().collect();
    // a λ-step can shrink an approximant by up to 2 + 2k with k ≤ B bag
    // elements; μ- and ρ-steps by at most 1
    let source = match m.subterm(&path).and_then(lamu::redex_kind) {
        Some(lamu::RedexKind::Lambda) => 3 * b.max_size + 2,
        _ => b.max_size + 1,
    };
    let rhs: BTreeSet<ResTerm> = taylor_enum(m, &Budget::size(source))
        .par_iter()
        .map(head_step)
        .collect::<Vec<_>>()
        .into_iter()
        .flat_map(|s| s.terms().cloned().collect::<Vec<_>>())
        .filter(|t| t.size() <= b.max_size)
        .collect();
    let witness = lhs.symmetric_difference(&rhs).next().cloned();
    Ok(CommuteCheck {
        holds: witness.is_none(),
        expansion_of_reduct: lhs.len(),
        reducts_of_expansion: rhs.len(),
        witness,
    })
}

/// Bags of size `k` over `items` (with repetition) whose element sizes sum
/// to at most `max_total`.
fn bags_of_len(items: &[ResTerm], k: usize, max_total: usize) -> Vec<Bag> {
    let mut out = Vec::new();
    fn go(items: &[ResTerm], from: usize, k: usize, left: usize, cur: &mut Vec<ResTerm>, out: &mut Vec<Bag>) {
        if k == 0 {
            out.push(Bag::new(cur.clone()));
            return;
        }
        for i in from..items.len() {
            let s = items[i].size();
            if s > left {
                continue;
            }
            cur.push(items[i].clone());
            go(items, i, k - 1, left - s, cur, out);
            cur.pop();
        }
    }
    go(items, 0, k, max_total, &mut Vec::new(), &mut out);
    out
}

/// `T(M{N/x})` against `⋃ t⟨u/x⟩` over approximants of `M` and bags over
/// `T(N)`, both cut at size `B`. Returns a differing element if any.
pub fn substitution_expansion_check(m: &Term, x: &str, n: &Term, b: &Budget) -> Option<ResTerm> {
    let lhs: BTreeSet<ResTerm> = taylor_enum(&lamu::subst(m, x, n), b).into_iter().collect();
    let xr = Ref::free(x);
    let args = taylor_enum(n, b);
    let mut rhs = BTreeSet::new();
    // the result has size |t| - k + Σ|u|, and Σ|u| ≥ k
    for t in taylor_enum(m, &Budget::size(2 * b.max_size)) {
        let k = t.degree_var(&xr);
        if t.size() > b.max_size + k {
            continue;
        }
        let room = b.max_size + k - t.size();
        for bag in bags_of_len(&args, k, room) {
            for u in linear_subst::<Bool>(&t, &bag, &xr).terms() {
                if u.size() <= b.max_size {
                    rhs.insert(u.clone());
                }
            }
        }
    }
    lhs.symmetric_difference(&rhs).next().cloned()
}

/// `T((M)_α N)` against `⋃ ⟨t⟩_α u`, both cut at size `B`.
pub fn named_app_expansion_check(m: &Term, alpha: &str, n: &Term, b: &Budget) -> Option<ResTerm> {
    let ar = Ref::free(alpha);
    let lhs: BTreeSet<ResTerm> = taylor_enum(&lamu::named_app(m, &ar, n), b).into_iter().collect();
    let args = taylor_enum(n, b);
    let mut rhs = BTreeSet::new();
    // every element of u adds its size plus one
    for t in taylor_enum(m, b) {
        let room = b.max_size - t.size();
        for k in 0..=room / 2 {
            for bag in bags_of_len(&args, k, room) {
                for u in linear_named_app::<Bool>(&t, &ar, &bag).terms() {
                    if u.size() <= b.max_size {
                        rhs.insert(u.clone());
                    }
                }
            }
        }
    }
    lhs.symmetric_difference(&rhs).next().cloned()
}

/// Distinct approximants with a common normal form: `(t, s, shared)`.
pub fn interference(m: &Term, b: &Budget) -> Option<(ResTerm, ResTerm, ResTerm)> {
    let approx = taylor_enum(m, b);
    let nfs: Vec<Sum<Bool>> = approx.par_iter().map(normalize_term::<Bool>).collect();
    let mut owner: BTreeMap<&ResTerm, &ResTerm> = BTreeMap::new();
    for (t, nf) in approx.iter().zip(&nfs) {
        for h in nf.terms() {
            if let Some(prev) = owner.insert(h, t) {
                return Some((prev.clone(), t.clone(), h.clone()));
            }
        }
    }
    None
}

/// Lifts [`resource::is_normal`] to check a truncated NFT.
pub fn all_normal(set: &BTreeSet<ResTerm>) -> bool {
    set.iter().all(resource::is_normal)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::textio::{parse_res_term, parse_term};

    fn t(s: &str) -> Term {
        parse_term(s).unwrap()
    }
    fn r(s: &str) -> ResTerm {
        parse_res_term(s).unwrap()
    }

    #[test]
    fn membership() {
        assert!(taylor_member(&r("x"), &t("x")));
        assert!(taylor_member(&r("\\x.x[x,x]"), &t("\\x.x x")));
        assert!(!taylor_member(&r("x 1"), &t("\\x.x")));
        assert!(taylor_member(&r("mu 'a.<'b> x"), &t("mu 'a.<'b> x")));
        assert!(!taylor_member(&r("mu 'a.<'a> x"), &t("mu 'a.<'b> x")));
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(taylor_enum(&t("x"), &Budget::size(10)), vec![r("x")]);
        let e = taylor_enum(&t("\\x.x x"), &Budget::size(6));
        assert!(e.contains(&r("\\x.x 1")) && e.contains(&r("\\x.x[x]")));
        assert_eq!(taylor_enum(&t("mu 'a.<'b> x"), &Budget::size(5)), vec![r("mu 'a.<'b> x")]);
        assert_eq!(taylor_enum(&t("x y"), &Budget { max_size: 20, max_count: Some(2) }).len(), 2);
    }

    /// Every resource term up to a size whose shape fits, filtered by
    /// membership, must coincide with the enumeration.
    #[test]
    fn enumeration_matches_membership_filter() {
        fn all_res(vars: &[ResTerm], max: usize) -> Vec<Vec<ResTerm>> {
            // closed under the shapes of the test terms below
            let mut by: Vec<Vec<ResTerm>> = vec![Vec::new(); max + 1];
            if max >= 1 {
                by[1] = vars.to_vec();
            }
            for s in 2..=max {
                let mut cur = Vec::new();
                for t in &by[s - 1] {
                    cur.push(ResTerm::Lam(Arc::new(t.clone())));
                }
                for h in 1..s {
                    let rest = s - 1 - h;
                    let items: Vec<(usize, &ResTerm)> =
                        (1..rest.max(1)).flat_map(|k| by[k].iter().map(move |u| (k + 1, u))).collect();
                    for bag in &bags_by_cost(&items, rest)[rest] {
                        for head in &by[h] {
                            cur.push(ResTerm::App(Arc::new(head.clone()), bag.clone()));
                        }
                    }
                }
                by[s] = cur;
            }
            by
        }
        let vars = vec![r("x"), r("y"), ResTerm::Var(Ref::Bound(0))];
        let universe: Vec<ResTerm> = all_res(&vars, 7).into_iter().flatten().collect();
        for m in ["\\x.x x", "x (y x)", "(\\x.x) y", "x y y"] {
            let m = t(m);
            let mut expect: Vec<ResTerm> = universe.iter().filter(|u| taylor_member(u, &m)).cloned().collect();
            expect.sort_by_key(|u| (u.size(), u.clone()));
            assert_eq!(taylor_enum(&m, &Budget::size(7)), expect, "{m}");
        }
    }

    #[test]
    fn truncated_normal_forms() {
        let b = Budget::size(8);
        assert_eq!(nft_truncated(&t("\\x.x"), &b), BTreeSet::from([r("\\x.x")]));
        let omega = t("(\\x.x x) (\\x.x x)");
        assert!(nft_truncated(&omega, &Budget::size(14)).is_empty());
        assert_eq!(nft_truncated(&t("(\\x.x) y"), &b), BTreeSet::from([r("y")]));
    }

    #[test]
    fn budget_relative_comparisons() {
        let b = Budget::size(8);
        let tru = t("\\x.\\y.x");
        let fls = t("\\x.\\y.y");
        assert!(nft_eq_truncated(&tru, &tru, &b).holds);
        assert!(leq_truncated(&t("(\\x.x x) (\\x.x x)"), &t("\\x.x"), &b).holds);
        let v = nft_eq_truncated(&tru, &fls, &b);
        assert!(!v.holds && v.witness.is_some());
    }

    #[test]
    fn solvability() {
        let callcc = t("\\y. mu 'a.<'a> y (\\x. mu 'd.<'a> x)");
        assert_eq!(solvable(&callcc, 1), Solvability::Solvable(0));
        assert_eq!(solvable(&t("(\\x.x x) (\\x.x x)"), 100), Solvability::Unknown);
        assert_eq!(solvable(&t("(\\x.x) y"), 5), Solvability::Solvable(1));
    }

    #[test]
    fn head_step_commutes_with_expansion() {
        let b = Budget::size(7);
        for m in [
            "(\\x.x) y",
            "mu 'g.<'a> mu 'b.<'e> x",
            "(mu 'a.<'a> x) y",
            "(\\x.x x) y",
            "mu 'g.<'a> mu 'b.<'b> (\\z.z) (mu 'c.<'b> y)",
        ] {
            let c = taylor_head_commute_check(&t(m), &b).unwrap();
            assert!(c.holds, "{m}: {:?}", c.witness);
        }
        assert!(taylor_head_commute_check(&t("x y"), &b).is_err());
    }

    #[test]
    fn expansion_of_substitutions() {
        let b = Budget::size(7);
        assert_eq!(substitution_expansion_check(&t("x (x z)"), "x", &t("\\y.y y"), &b), None);
        assert_eq!(substitution_expansion_check(&t("mu 'a.<'a> x y"), "x", &t("y z"), &b), None);
        assert_eq!(named_app_expansion_check(&t("mu 'b.<'a> x (mu 'c.<'a> y)"), "a", &t("z w"), &b), None);
        assert_eq!(named_app_expansion_check(&t("\\x. mu 'b.<'a> x"), "a", &t("x"), &b), None);
    }

    #[test]
    fn simulation_on_a_duplicating_redex() {
        let m = t("x ((\\y.y) z)");
        let n = lamu::reduce_redex(&m, &[1]).unwrap();
        for s in taylor_enum(&m, &Budget::size(12)) {
            let tt = simulate_step(&s, &m, &[1]).unwrap();
            assert!(tt.terms().all(|u| taylor_member(u, &n)));
        }
        let target = r("x[z,z]");
        let pre = simulation_preimage(&m, &[1], &target, &Budget::size(14)).unwrap();
        assert_eq!(pre, r("x[(\\y.y)[z],(\\y.y)[z]]"));
    }

    #[test]
    fn root_steps_of_approximants_are_covered() {
        let m = t("(\\x. x x) y");
        for s in taylor_enum(&m, &Budget::size(9)) {
            let red = contract::<Bool>(&s).unwrap();
            assert!(find_covering_step(&m, &red).is_some());
        }
        let targets: BTreeSet<ResTerm> = normalize_term::<Bool>(&r("(\\x.x[x])[y,y]")).terms().cloned().collect();
        let (n, d) = find_covering_reduct(&m, &targets, 100).unwrap();
        assert_eq!((n, d), (t("y y"), 1));
    }

    #[test]
    fn non_interference_small() {
        for m in ["(\\x.x x) (\\y.y)", "(mu 'a.<'a> x) y", "(\\x. x (x y)) (\\z.z)"] {
            assert_eq!(interference(&t(m), &Budget::size(10)), None, "{m}");
        }
    }
}
