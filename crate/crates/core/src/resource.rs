//! Resource λμ-calculus: linear substitution, linear named application and
//! the reduction on sums, over either coefficient semiring.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::combinatorics::{weighted_compositions_with, PartSpec};
use crate::lamu::{Redex, RedexKind};
use crate::sum::{app_lift, Bool, Semiring, SemiringTag, Sum};
use crate::syntax::{rho_ref, Bag, Path, Ref, ResTerm, Syntax};
use crate::{Error, Result};

/// `t⟨b/x⟩`: the elements of `b` distributed bijectively over the free
/// occurrences of `x`, summed over all distributions.
pub fn linear_subst<S: Semiring>(t: &ResTerm, b: &Bag, x: &Ref) -> Sum<S> {
    let deg = t.degree_var(x);
    if deg != b.len() {
        return Sum::zero();
    }
    if deg == 0 {
        return Sum::term(t.clone());
    }
    match t {
        ResTerm::Var(_) => Sum::term(b.as_slice()[0].clone()),
        ResTerm::Lam(body) => linear_subst::<S>(body, &b.shift(1, 0), &x.shifted(1)).lam(),
        ResTerm::Mu(nm, body) => linear_subst::<S>(body, &b.shift(0, 1), x).mu(nm),
        ResTerm::App(h, args) => {
            let mut specs = vec![PartSpec::Exactly(h.degree_var(x))];
            specs.extend(args.iter().map(|u| PartSpec::Exactly(u.degree_var(x))));
            let mut out = Sum::zero();
            for (parts, mult) in weighted_compositions_with(b, &specs) {
                let heads = linear_subst::<S>(h, &parts[0], x);
                if heads.is_zero() {
                    continue;
                }
                let subs: Vec<Sum<S>> = args.iter().zip(&parts[1..]).map(|(u, p)| linear_subst::<S>(u, p, x)).collect();
                out.add_scaled(&app_lift(&heads, &subs), S::from_count(mult));
            }
            out
        }
    }
}

/// `⟨t⟩_α b`: the elements of `b` handed out as extra arguments to the
/// subterms named `α`.
pub fn linear_named_app<S: Semiring>(t: &ResTerm, alpha: &Ref, b: &Bag) -> Sum<S> {
    if t.degree_name(alpha) == 0 {
        return if b.is_empty() { Sum::term(t.clone()) } else { Sum::zero() };
    }
    match t {
        ResTerm::Var(_) => unreachable!("a variable carries no name"),
        ResTerm::Lam(body) => linear_named_app::<S>(body, alpha, &b.shift(1, 0)).lam(),
        ResTerm::Mu(nm, body) => linear_named_app_pair::<S>(nm, body, &alpha.shifted(1), &b.shift(0, 1)).mu(nm),
        ResTerm::App(h, args) => {
            let spec = |u: &ResTerm| {
                if u.degree_name(alpha) == 0 {
                    PartSpec::Exactly(0)
                } else {
                    PartSpec::Any
                }
            };
            let mut specs = vec![spec(h)];
            specs.extend(args.iter().map(spec));
            let mut out = Sum::zero();
            for (parts, mult) in weighted_compositions_with(b, &specs) {
                let heads = linear_named_app::<S>(h, alpha, &parts[0]);
                if heads.is_zero() {
                    continue;
                }
                let subs: Vec<Sum<S>> =
                    args.iter().zip(&parts[1..]).map(|(u, p)| linear_named_app::<S>(u, alpha, p)).collect();
                out.add_scaled(&app_lift(&heads, &subs), S::from_count(mult));
            }
            out
        }
    }
}

/// `⟨⟨named|body⟩⟩_α b`, returning the new bodies (the naming is unchanged).
/// When `named = α` the bag splits into a part fed inside and a part
/// appended as-is.
pub fn linear_named_app_pair<S: Semiring>(named: &Ref, body: &ResTerm, alpha: &Ref, b: &Bag) -> Sum<S> {
    if named != alpha {
        return linear_named_app(body, alpha, b);
    }
    let inner = if body.degree_name(alpha) == 0 { PartSpec::Exactly(0) } else { PartSpec::Any };
    let mut out = Sum::zero();
    for (parts, mult) in weighted_compositions_with(b, &[inner, PartSpec::Any]) {
        let fed = linear_named_app::<S>(body, alpha, &parts[0]);
        out.add_scaled(&fed.app_to(&parts[1]), S::from_count(mult));
    }
    out
}

pub fn redex_kind(t: &ResTerm) -> Option<RedexKind> {
    match t {
        ResTerm::App(h, _) => match &**h {
            ResTerm::Lam(_) => Some(RedexKind::Lambda),
            ResTerm::Mu(..) => Some(RedexKind::Mu),
            _ => None,
        },
        ResTerm::Mu(_, b) if matches!(&**b, ResTerm::Mu(..)) => Some(RedexKind::Rho),
        _ => None,
    }
}

/// Contracts a redex sitting at the root.
pub fn contract<S: Semiring>(t: &ResTerm) -> Option<Sum<S>> {
    match t {
        ResTerm::App(h, b) => match &**h {
            ResTerm::Lam(body) => {
                Some(linear_subst::<S>(body, &b.shift(1, 0), &Ref::Bound(0)).map_terms(|u| u.unshift_vars()))
            }
            ResTerm::Mu(nm, body) => Some(linear_named_app_pair::<S>(nm, body, &Ref::Bound(0), &b.shift(0, 1)).mu(nm)),
            _ => None,
        },
        ResTerm::Mu(a, inner) => match &**inner {
            ResTerm::Mu(h, body) => {
                let h2 = rho_ref(h, 0, a).unwrap_or_else(|| h.clone());
                Some(Sum::term(ResTerm::Mu(h2, Arc::new(body.rho_rename(a)))))
            }
            _ => None,
        },
        _ => None,
    }
}

/// All redexes, leftmost-outermost first.
pub fn redexes(t: &ResTerm) -> Vec<Redex> {
    let mut out = Vec::new();
    collect(t, &mut Vec::new(), &mut out, false);
    out
}

/// The leftmost-outermost redex.
pub fn first_redex(t: &ResTerm) -> Option<Redex> {
    let mut out = Vec::new();
    collect(t, &mut Vec::new(), &mut out, true);
    out.pop()
}

pub fn is_normal(t: &ResTerm) -> bool {
    first_redex(t).is_none()
}

fn collect(t: &ResTerm, path: &mut Path, out: &mut Vec<Redex>, first_only: bool) {
    if first_only && !out.is_empty() {
        return;
    }
    if let Some(kind) = redex_kind(t) {
        out.push(Redex { path: path.clone(), kind });
        if first_only {
            return;
        }
    }
    match t {
        ResTerm::Var(_) => {}
        ResTerm::Lam(b) | ResTerm::Mu(_, b) => {
            path.push(0);
            collect(b, path, out, first_only);
            path.pop();
        }
        ResTerm::App(h, bag) => {
            path.push(0);
            collect(h, path, out, first_only);
            path.pop();
            for (i, u) in bag.iter().enumerate() {
                path.push(1 + i as u32);
                collect(u, path, out, first_only);
                path.pop();
            }
        }
    }
}

/// Rebuilds `t` with the subterm at `path` replaced by each addend of
/// `f(subterm)`, lifting constructors linearly.
pub fn replace_with_sum<S: Semiring>(
    t: &ResTerm,
    path: &[u32],
    f: &mut dyn FnMut(&ResTerm) -> Option<Sum<S>>,
) -> Option<Sum<S>> {
    let Some((&i, rest)) = path.split_first() else {
        return f(t);
    };
    Some(match (t, i) {
        (ResTerm::Lam(b), 0) => replace_with_sum(b, rest, f)?.lam(),
        (ResTerm::Mu(nm, b), 0) => replace_with_sum(b, rest, f)?.mu(nm),
        (ResTerm::App(h, bag), 0) => replace_with_sum(h, rest, f)?.app_to(bag),
        (ResTerm::App(h, bag), i) => {
            let k = i as usize - 1;
            let sub = replace_with_sum(bag.as_slice().get(k)?, rest, f)?;
            let mut out = Sum::zero();
            for (u, c) in sub.iter() {
                let mut elems = bag.as_slice().to_vec();
                elems[k] = u.clone();
                out.add_term(ResTerm::App(h.clone(), Bag::new(elems)), c);
            }
            out
        }
        _ => return None,
    })
}

/// One resource step at `path`.
pub fn step_r<S: Semiring>(t: &ResTerm, path: &[u32]) -> Result<Sum<S>> {
    replace_with_sum(t, path, &mut contract::<S>).ok_or_else(|| Error::NotARedex(path.to_vec()))
}

/// How a `Nat` coefficient `m·t` is treated when `t` steps.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum StepMode {
    /// `m·t ↦ m·T`
    Whole,
    /// `m·t ↦ (m-1)·t + T`
    PerOccurrence,
}

/// Which addend and redex `step_sum` picks.
#[derive(Clone, Debug)]
pub enum Strategy {
    Leftmost,
    Rightmost,
    Random(Box<ChaCha8Rng>),
}

impl Strategy {
    pub fn random(seed: u64) -> Strategy {
        Strategy::Random(Box::new(ChaCha8Rng::seed_from_u64(seed)))
    }
}

#[derive(Clone, Debug)]
pub struct Step<S> {
    pub addend: ResTerm,
    pub redex: Redex,
    pub result: Sum<S>,
}

/// Replaces `addend` (which must occur in `sum`) by its reduct at `path`.
pub fn step_sum_at<S: Semiring>(sum: &Sum<S>, addend: &ResTerm, path: &[u32], mode: StepMode) -> Result<Sum<S>> {
    let c = sum.coeff(addend);
    if c.is_zero() {
        return Err(Error::NotARedex(path.to_vec()));
    }
    let reduct = step_r::<S>(addend, path)?;
    let mut out = sum.clone();
    match (S::TAG, mode) {
        (SemiringTag::Nat, StepMode::PerOccurrence) => {
            out.sub_term(addend, 1);
            out.add_sum(&reduct);
        }
        _ => {
            out.remove(addend);
            out.add_scaled(&reduct, c);
        }
    }
    Ok(out)
}

/// One step on a sum, one addend at a time.
pub fn step_sum<S: Semiring>(sum: &Sum<S>, strategy: &mut Strategy) -> Result<Step<S>> {
    let (addend, redex) = match strategy {
        Strategy::Leftmost => sum.terms().find_map(|t| first_redex(t).map(|r| (t.clone(), r))),
        Strategy::Rightmost => sum.terms().rev().find_map(|t| redexes(t).pop().map(|r| (t.clone(), r))),
        Strategy::Random(rng) => {
            let all: Vec<(ResTerm, Redex)> =
                sum.terms().flat_map(|t| redexes(t).into_iter().map(move |r| (t.clone(), r))).collect();
            all.choose(rng).cloned()
        }
    }
    .ok_or(Error::Normal)?;
    let result = step_sum_at(sum, &addend, &redex.path, StepMode::Whole)?;
    Ok(Step { addend, redex, result })
}

pub fn sum_is_normal<S: Semiring>(sum: &Sum<S>) -> bool {
    sum.terms().all(is_normal)
}

/// The normal form. Addends are reduced independently (leftmost-outermost)
/// and merged as they meet.
pub fn normalize<S: Semiring>(sum: &Sum<S>) -> Sum<S> {
    let mut pending = sum.clone();
    let mut done = Sum::zero();
    while let Some((t, c)) = pending.pop_first() {
        match first_redex(&t) {
            None => done.add_term(t, c),
            Some(r) => {
                let reduct = step_r::<S>(&t, &r.path).expect("first_redex returns a redex");
                pending.add_scaled(&reduct, c);
            }
        }
    }
    done
}

pub fn normalize_term<S: Semiring>(t: &ResTerm) -> Sum<S> {
    normalize(&Sum::term(t.clone()))
}

/// Head prefix/head/spine view of a resource term.
#[derive(Clone, Debug)]
pub struct ResHeadShape {
    /// `None` for a λ, `Some(naming)` for a μ.
    pub prefix: Vec<Option<Ref>>,
    pub head_is_var: bool,
    pub spine_len: usize,
}

pub fn head_shape(t: &ResTerm) -> ResHeadShape {
    let mut prefix = Vec::new();
    let mut cur = t;
    loop {
        match cur {
            ResTerm::Lam(b) => {
                prefix.push(None);
                cur = b;
            }
            ResTerm::Mu(nm, b) => {
                prefix.push(Some(nm.clone()));
                cur = b;
            }
            _ => break,
        }
    }
    let mut spine_len = 0;
    while let ResTerm::App(h, _) = cur {
        spine_len += 1;
        cur = h;
    }
    let head_is_var = matches!(cur, ResTerm::Var(_));
    if !head_is_var {
        spine_len -= 1;
    }
    ResHeadShape { prefix, head_is_var, spine_len }
}

pub fn head_redex_path(t: &ResTerm) -> Option<Path> {
    let h = head_shape(t);
    if let Some(i) = h.prefix.windows(2).position(|w| w[0].is_some() && w[1].is_some()) {
        return Some(vec![0; i]);
    }
    if h.head_is_var {
        return None;
    }
    Some(vec![0; h.prefix.len() + h.spine_len])
}

pub fn is_hnf(t: &ResTerm) -> bool {
    head_redex_path(t).is_none()
}

/// `H(t)`; a head normal form gives `0`.
pub fn head_step(t: &ResTerm) -> Sum<Bool> {
    match head_redex_path(t) {
        None => Sum::zero(),
        Some(p) => step_r(t, &p).expect("head position holds a redex"),
    }
}

/// `Hⁿ`, applied addend-wise.
pub fn head_iter(sum: &Sum<Bool>, n: usize) -> Sum<Bool> {
    let mut cur = sum.clone();
    for _ in 0..n {
        cur = cur.flat_map(head_step);
    }
    cur
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sum::Nat;
    use crate::textio::{parse_res_term, parse_sum};

    fn r(s: &str) -> ResTerm {
        parse_res_term(s).unwrap()
    }
    fn bag(xs: &[&str]) -> Bag {
        Bag::new(xs.iter().map(|s| r(s)).collect())
    }
    fn nat(s: &str) -> Sum<Nat> {
        parse_sum(s).unwrap()
    }
    fn boo(s: &str) -> Sum<Bool> {
        parse_sum(s).unwrap()
    }

    #[test]
    fn linear_substitution_cases() {
        let x = Ref::free("x");
        assert_eq!(linear_subst::<Bool>(&r("x"), &bag(&["v"]), &x), boo("v"));
        assert!(linear_subst::<Bool>(&r("x"), &bag(&[]), &x).is_zero());
        assert!(linear_subst::<Bool>(&r("x"), &bag(&["v", "w"]), &x).is_zero());
        assert_eq!(linear_subst::<Bool>(&r("y"), &bag(&[]), &x), boo("y"));
        assert!(linear_subst::<Bool>(&r("y"), &bag(&["v"]), &x).is_zero());
        assert_eq!(linear_subst::<Nat>(&r("x[x]"), &bag(&["y", "z"]), &x), nat("y[z] + z[y]"));
        assert_eq!(linear_subst::<Bool>(&r("x[x]"), &bag(&["y", "z"]), &x), boo("y[z] + z[y]"));
        let s = "(\\y.y)[z]";
        let got = linear_subst::<Nat>(&r("x[x]"), &bag(&[s, s]), &x);
        assert_eq!(got, nat(&format!("2*{s}[{s}]")));
    }

    #[test]
    fn linear_substitution_avoids_capture() {
        let x = Ref::free("x");
        // the bag element mentions a free y and a free 'a under binders named alike
        let got = linear_subst::<Bool>(&r("\\y. mu 'a.<'a> x"), &bag(&["mu 'b.<'a> y"]), &x);
        assert_eq!(got, boo("\\z. mu 'c.<'c> mu 'b.<'a> y"));
    }

    #[test]
    fn linear_named_application_cases() {
        let a = Ref::free("a");
        assert_eq!(linear_named_app::<Bool>(&r("x"), &a, &bag(&[])), boo("x"));
        assert!(linear_named_app::<Bool>(&r("x"), &a, &bag(&["v"])).is_zero());
        assert_eq!(linear_named_app::<Bool>(&r("mu 'b.<'a> x"), &a, &bag(&["y"])), boo("mu 'b.<'a> x[y]"));
        assert_eq!(linear_named_app::<Bool>(&r("mu 'b.<'a> x"), &a, &bag(&[])), boo("mu 'b.<'a> x 1"));
        assert!(linear_named_app::<Bool>(&r("mu 'b.<'c> x"), &a, &bag(&["y"])).is_zero());
    }

    #[test]
    fn quantitative_mu_step() {
        let t = r("(mu 'a.<'a> mu 'e.<'a> x)[y,y]");
        let got = step_r::<Nat>(&t, &[]).unwrap();
        let expect = nat(
            "mu 'a.<'a> (mu 'e.<'a> x 1)[y,y] + 2*mu 'a.<'a> (mu 'e.<'a> x[y])[y] + mu 'a.<'a> (mu 'e.<'a> x[y,y]) 1",
        );
        assert_eq!(got, expect);
        assert_eq!(step_r::<Bool>(&t, &[]).unwrap(), expect.support());
    }

    #[test]
    fn rule_examples() {
        assert!(step_r::<Bool>(&r("(\\x.x[x])[y]"), &[]).unwrap().is_zero());
        assert_eq!(step_r::<Bool>(&r("mu 'g.<'a> mu 'b.<'e> x"), &[]).unwrap(), boo("mu 'g.<'e> x"));
        assert_eq!(step_r::<Bool>(&r("(mu 'a.<'b> x) 1"), &[]).unwrap(), boo("mu 'a.<'b> x"));
        assert!(step_r::<Bool>(&r("(mu 'a.<'b> x)[y]"), &[]).unwrap().is_zero());
        assert_eq!(step_r::<Bool>(&r("(mu 'a.<'a> x) 1"), &[]).unwrap(), boo("mu 'a.<'a> x 1"));
        assert!(step_r::<Bool>(&r("x[y]"), &[]).is_err());
    }

    #[test]
    fn steps_in_context() {
        let t = r("z[(\\x.x)[y], w]");
        let rs = redexes(&t);
        assert_eq!(rs.len(), 1);
        assert_eq!(step_r::<Bool>(&t, &rs[0].path).unwrap(), boo("z[y,w]"));
    }

    #[test]
    fn sums_step_one_addend() {
        let s = boo("(\\x.x)[y] + y");
        let mut st = Strategy::Leftmost;
        assert_eq!(step_sum(&s, &mut st).unwrap().result, boo("y"));
        let n = nat("3*(\\x.x[x])[y,z]");
        let step = step_sum(&n, &mut Strategy::Leftmost).unwrap();
        assert_eq!(step.result, nat("3*y[z] + 3*z[y]"));
        let per = step_sum_at(&n, &r("(\\x.x[x])[y,z]"), &[], StepMode::PerOccurrence).unwrap();
        assert_eq!(per, nat("2*(\\x.x[x])[y,z] + y[z] + z[y]"));
        assert!(step_sum(&boo("x"), &mut st).is_err());
    }

    #[test]
    fn normal_forms() {
        assert_eq!(normalize_term::<Bool>(&r("(\\x.x)[y]")), boo("y"));
        assert!(normalize_term::<Bool>(&r("(\\x.x[x])[y]")).is_zero());
        let t = r("(mu 'a.<'a> mu 'e.<'a> x)[y,y]");
        let n = normalize_term::<Nat>(&t);
        assert_eq!(n.support(), normalize_term::<Bool>(&t));
    }

    #[test]
    fn head_reduction() {
        assert!(head_step(&r("x[y]")).is_zero());
        assert_eq!(head_step(&r("(\\x.x)[y]")), boo("y"));
        assert_eq!(head_iter(&boo("(\\x.(\\z.z)[x])[y]"), 2), boo("y"));
        assert_eq!(head_step(&r("mu 'g.<'a> mu 'b.<'e> (\\x.x)[y]")), boo("mu 'g.<'e> (\\x.x)[y]"));
    }
}
