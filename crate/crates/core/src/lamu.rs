//! λμ-calculus: named application, the λ/μ/ρ rules, head reduction.

use std::sync::Arc;

use serde::Serialize;

use crate::syntax::{Path, Ref, Syntax, Term};
use crate::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RedexKind {
    Lambda,
    Mu,
    Rho,
}

impl std::fmt::Display for RedexKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            RedexKind::Lambda => "lambda",
            RedexKind::Mu => "mu",
            RedexKind::Rho => "rho",
        })
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Redex {
    pub path: Path,
    pub kind: RedexKind,
}

/// `(M)_α N`: every free `⟨α|P⟩` in `M` becomes `⟨α|P' N⟩`.
pub fn named_app(m: &Term, alpha: &Ref, n: &Term) -> Term {
    if m.degree_name(alpha) == 0 {
        return m.clone();
    }
    match m {
        Term::Var(_) => m.clone(),
        Term::Lam(b) => Term::Lam(Arc::new(named_app(b, alpha, &n.shift(1, 0)))),
        Term::App(f, a) => Term::app(named_app(f, alpha, n), named_app(a, alpha, n)),
        Term::Mu(nm, b) => {
            let (alpha, n) = (alpha.shifted(1), n.shift(0, 1));
            Term::Mu(nm.clone(), Arc::new(named_pair_app(nm, b, &alpha, &n)))
        }
    }
}

/// Named application on the pair `⟨nm|body⟩`; returns the new body.
fn named_pair_app(nm: &Ref, body: &Term, alpha: &Ref, n: &Term) -> Term {
    let inner = named_app(body, alpha, n);
    if nm == alpha {
        Term::app(inner, n.clone())
    } else {
        inner
    }
}

enum Target<'a> {
    /// The variable bound by a λ that is being removed.
    Top,
    Free(&'a str),
}

fn substitute(t: &Term, target: &Target, n: &Term, dv: u32, dn: u32) -> Term {
    match t {
        Term::Var(r) => match (r, target) {
            (Ref::Bound(i), Target::Top) if *i == dv => n.shift(dv, dn),
            (Ref::Bound(i), Target::Top) if *i > dv => Term::Var(Ref::Bound(i - 1)),
            (Ref::Free(s), Target::Free(x)) if &**s == *x => n.shift(dv, dn),
            _ => t.clone(),
        },
        Term::Lam(b) => Term::Lam(Arc::new(substitute(b, target, n, dv + 1, dn))),
        Term::App(f, a) => Term::app(substitute(f, target, n, dv, dn), substitute(a, target, n, dv, dn)),
        Term::Mu(nm, b) => Term::Mu(nm.clone(), Arc::new(substitute(b, target, n, dv, dn + 1))),
    }
}

/// `M{N/x}` for a free variable `x`.
pub fn subst(m: &Term, x: &str, n: &Term) -> Term {
    substitute(m, &Target::Free(x), n, 0, 0)
}

/// Contracts a redex sitting at the root.
pub fn contract(t: &Term) -> Option<(RedexKind, Term)> {
    match t {
        Term::App(f, n) => match &**f {
            Term::Lam(body) => Some((RedexKind::Lambda, substitute(body, &Target::Top, n, 0, 0))),
            Term::Mu(nm, body) => {
                let n = n.shift(0, 1);
                let nb = named_pair_app(nm, body, &Ref::Bound(0), &n);
                Some((RedexKind::Mu, Term::Mu(nm.clone(), Arc::new(nb))))
            }
            _ => None,
        },
        Term::Mu(a, inner) => match &**inner {
            Term::Mu(h, body) => {
                let h2 = crate::syntax::rho_ref(h, 0, a).unwrap_or_else(|| h.clone());
                Some((RedexKind::Rho, Term::Mu(h2, Arc::new(body.rho_rename(a)))))
            }
            _ => None,
        },
        _ => None,
    }
}

pub fn redex_kind(t: &Term) -> Option<RedexKind> {
    match t {
        Term::App(f, _) => match &**f {
            Term::Lam(_) => Some(RedexKind::Lambda),
            Term::Mu(..) => Some(RedexKind::Mu),
            _ => None,
        },
        Term::Mu(_, b) if matches!(&**b, Term::Mu(..)) => Some(RedexKind::Rho),
        _ => None,
    }
}

/// All redexes, leftmost-outermost first.
pub fn redexes(m: &Term) -> Vec<Redex> {
    let mut out = Vec::new();
    let mut path = Vec::new();
    collect_redexes(m, &mut path, &mut out);
    out
}

fn collect_redexes(t: &Term, path: &mut Path, out: &mut Vec<Redex>) {
    if let Some(kind) = redex_kind(t) {
        out.push(Redex { path: path.clone(), kind });
    }
    match t {
        Term::Var(_) => {}
        Term::Lam(b) | Term::Mu(_, b) => {
            path.push(0);
            collect_redexes(b, path, out);
            path.pop();
        }
        Term::App(f, a) => {
            path.push(0);
            collect_redexes(f, path, out);
            path.pop();
            path.push(1);
            collect_redexes(a, path, out);
            path.pop();
        }
    }
}

pub fn reduce_redex(m: &Term, path: &[u32]) -> Result<Term> {
    let mut failed = false;
    let out = m.replace_at(path, &mut |sub| match contract(sub) {
        Some((_, t)) => t,
        None => {
            failed = true;
            sub.clone()
        }
    });
    match out {
        Some(t) if !failed => Ok(t),
        _ => Err(Error::NotARedex(path.to_vec())),
    }
}

/// One binder of a head prefix.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Binder {
    Lam,
    /// `μ·.⟨named|…⟩`
    Mu(Ref),
}

/// `prefix · head · spine`; head is a variable or a λ/μ-redex. Indices in
/// head and spine are relative to the inside of the prefix.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HeadShape {
    pub prefix: Vec<Binder>,
    pub head: Term,
    pub spine: Vec<Term>,
}

impl HeadShape {
    pub fn reassemble(&self) -> Term {
        let core = Term::apps(self.head.clone(), self.spine.iter().cloned());
        self.prefix.iter().rev().fold(core, |acc, b| match b {
            Binder::Lam => Term::Lam(Arc::new(acc)),
            Binder::Mu(nm) => Term::Mu(nm.clone(), Arc::new(acc)),
        })
    }

    /// Index in the prefix of the leftmost `μ` directly naming a `μ`.
    pub fn leftmost_rho(&self) -> Option<usize> {
        self.prefix.windows(2).position(|w| matches!(w, [Binder::Mu(_), Binder::Mu(_)]))
    }

    pub fn head_is_var(&self) -> bool {
        matches!(self.head, Term::Var(_))
    }
}

pub fn head_decompose(m: &Term) -> HeadShape {
    let mut prefix = Vec::new();
    let mut cur = m;
    loop {
        match cur {
            Term::Lam(b) => {
                prefix.push(Binder::Lam);
                cur = b;
            }
            Term::Mu(nm, b) => {
                prefix.push(Binder::Mu(nm.clone()));
                cur = b;
            }
            _ => break,
        }
    }
    let mut spine = Vec::new();
    while let Term::App(f, a) = cur {
        spine.push((**a).clone());
        cur = f;
    }
    spine.reverse();
    let head = if matches!(cur, Term::Var(_)) {
        cur.clone()
    } else {
        // a λ or μ applied to the first spine argument
        Term::app(cur.clone(), spine.remove(0))
    };
    HeadShape { prefix, head, spine }
}

pub fn is_hnf(m: &Term) -> bool {
    let h = head_decompose(m);
    h.head_is_var() && h.leftmost_rho().is_none()
}

/// Position of the redex contracted by head reduction: the leftmost
/// ρ-redex of the prefix, otherwise the head λ/μ-redex.
pub fn head_redex_path(m: &Term) -> Option<Path> {
    let h = head_decompose(m);
    if let Some(i) = h.leftmost_rho() {
        return Some(vec![0; i]);
    }
    if h.head_is_var() {
        return None;
    }
    let mut p = vec![0; h.prefix.len()];
    p.extend(std::iter::repeat_n(0, h.spine.len()));
    Some(p)
}

pub fn head_step(m: &Term) -> Option<Term> {
    let p = head_redex_path(m)?;
    Some(reduce_redex(m, &p).expect("head position holds a redex"))
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum HeadRun {
    Hnf { steps: usize, term: Term },
    FuelExhausted(Term),
}

pub fn head_run(m: &Term, fuel: usize) -> HeadRun {
    let mut cur = m.clone();
    for steps in 0..=fuel {
        match head_step(&cur) {
            None => return HeadRun::Hnf { steps, term: cur },
            Some(next) if steps < fuel => cur = next,
            Some(_) => break,
        }
    }
    HeadRun::FuelExhausted(cur)
}
