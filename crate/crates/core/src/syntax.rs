//! Nameless syntax for λμ-terms and resource terms.
//!
//! Variables and names live in two separate de Bruijn index spaces: a variable
//! index counts enclosing λ's only, a name index counts enclosing μ's only.
//! The naming of a μ-node is read inside its own binder, so
//! `Mu(Ref::Bound(0), body)` is `μα.⟨α|body⟩`.
//!
//! Structural equality of these values is alpha-equivalence; bags are kept
//! sorted, so equality of resource terms is also multiset-aware.

use std::collections::BTreeSet;
use std::sync::Arc;

/// Interned identifier of a free variable or free name.
pub type Sym = Arc<str>;

/// Child-index path from the root to a subterm.
///
/// Term: `Lam` body 0, `App` function 0 / argument 1, `Mu` body 0.
/// ResTerm: `Lam`/`Mu` body 0, `App` head 0, bag element `i` at `1 + i`.
pub type Path = Vec<u32>;

/// Occurrence of a variable or a name.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Ref {
    Bound(u32),
    Free(Sym),
}

impl Ref {
    pub fn free(s: &str) -> Ref {
        Ref::Free(Arc::from(s))
    }

    /// The same reference seen from under `by` more binders of its kind.
    pub fn shifted(&self, by: u32) -> Ref {
        match self {
            Ref::Bound(i) => Ref::Bound(i + by),
            Ref::Free(_) => self.clone(),
        }
    }

    pub fn is_free(&self) -> bool {
        matches!(self, Ref::Free(_))
    }

    pub fn free_sym(&self) -> Option<&Sym> {
        match self {
            Ref::Free(s) => Some(s),
            Ref::Bound(_) => None,
        }
    }
}

/// λμ-term.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Term {
    Var(Ref),
    Lam(Arc<Term>),
    App(Arc<Term>, Arc<Term>),
    /// `μα.⟨β|M⟩`: the binder is implicit, the `Ref` is `β`.
    Mu(Ref, Arc<Term>),
}

/// Resource term.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum ResTerm {
    Var(Ref),
    Lam(Arc<ResTerm>),
    App(Arc<ResTerm>, Bag),
    Mu(Ref, Arc<ResTerm>),
}

/// Finite multiset of resource terms, stored sorted.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Bag(Arc<[ResTerm]>);

impl Default for Bag {
    fn default() -> Self {
        Bag::empty()
    }
}

impl Bag {
    pub fn empty() -> Bag {
        Bag(Arc::from(Vec::new()))
    }

    pub fn new(mut elems: Vec<ResTerm>) -> Bag {
        elems.sort();
        Bag(Arc::from(elems))
    }

    pub fn singleton(t: ResTerm) -> Bag {
        Bag(Arc::from(vec![t]))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[ResTerm] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, ResTerm> {
        self.0.iter()
    }

    /// Multiset union `self * other`.
    pub fn union(&self, other: &Bag) -> Bag {
        if other.is_empty() {
            return self.clone();
        }
        if self.is_empty() {
            return other.clone();
        }
        let mut v: Vec<ResTerm> = self.0.to_vec();
        v.extend(other.0.iter().cloned());
        Bag::new(v)
    }

    /// Distinct elements with their multiplicities, in canonical order.
    pub fn groups(&self) -> Vec<(&ResTerm, usize)> {
        let mut out: Vec<(&ResTerm, usize)> = Vec::new();
        for t in self.0.iter() {
            match out.last_mut() {
                Some((last, n)) if *last == t => *n += 1,
                _ => out.push((t, 1)),
            }
        }
        out
    }

    pub fn map(&self, f: impl FnMut(&ResTerm) -> ResTerm) -> Bag {
        Bag::new(self.0.iter().map(f).collect())
    }

    pub fn shift(&self, var_by: u32, name_by: u32) -> Bag {
        if var_by == 0 && name_by == 0 {
            return self.clone();
        }
        self.map(|t| t.shift(var_by, name_by))
    }

    pub fn rename_name(&self, to: &Ref, from: &Ref) -> Bag {
        self.map(|t| t.rename_name(to, from))
    }

    pub fn degree_name(&self, a: &Ref) -> usize {
        self.iter().map(|t| t.degree_name(a)).sum()
    }

    pub fn degree_var(&self, x: &Ref) -> usize {
        self.iter().map(|t| t.degree_var(x)).sum()
    }
}

impl FromIterator<ResTerm> for Bag {
    fn from_iter<I: IntoIterator<Item = ResTerm>>(iter: I) -> Self {
        Bag::new(iter.into_iter().collect())
    }
}

/// Traversals shared by both syntaxes.
///
/// `map_refs_at` rewrites every variable and name occurrence; the callbacks get
/// the occurrence and the number of binders of its kind crossed so far, and
/// return `None` to leave it unchanged. Untouched subtrees are shared.
pub trait Syntax: Sized + Clone {
    fn map_refs_at<FV, FN>(&self, fv: &FV, fnm: &FN, dv: u32, dn: u32) -> Option<Self>
    where
        FV: Fn(&Ref, u32) -> Option<Ref>,
        FN: Fn(&Ref, u32) -> Option<Ref>;

    fn fold_refs_at(&self, fv: &mut dyn FnMut(&Ref, u32), fnm: &mut dyn FnMut(&Ref, u32), dv: u32, dn: u32);

    fn map_refs<FV, FN>(&self, fv: &FV, fnm: &FN) -> Self
    where
        FV: Fn(&Ref, u32) -> Option<Ref>,
        FN: Fn(&Ref, u32) -> Option<Ref>,
    {
        self.map_refs_at(fv, fnm, 0, 0).unwrap_or_else(|| self.clone())
    }

    /// Adds `var_by` / `name_by` to every loose index.
    fn shift(&self, var_by: u32, name_by: u32) -> Self {
        if var_by == 0 && name_by == 0 {
            return self.clone();
        }
        self.map_refs(&|r, d| shift_ref(r, d, var_by), &|r, d| shift_ref(r, d, name_by))
    }

    /// Removes one loose variable level; the removed index must not occur.
    fn unshift_vars(&self) -> Self {
        self.map_refs(&unshift_ref, &|_, _| None)
    }

    /// Removes one loose name level; the removed index must not occur.
    fn unshift_names(&self) -> Self {
        self.map_refs(&|_, _| None, &unshift_ref)
    }

    /// `t{to/from}`: every free occurrence of the name `from` becomes `to`.
    fn rename_name(&self, to: &Ref, from: &Ref) -> Self {
        if to == from {
            return self.clone();
        }
        self.map_refs(&|_, _| None, &|r, d| {
            if *r == from.shifted(d) {
                Some(to.shifted(d))
            } else {
                None
            }
        })
    }

    /// Number of free occurrences of variable `x`.
    fn degree_var(&self, x: &Ref) -> usize {
        let mut n = 0;
        self.fold_refs_at(
            &mut |r, d| {
                if *r == x.shifted(d) {
                    n += 1
                }
            },
            &mut |_, _| {},
            0,
            0,
        );
        n
    }

    /// Number of free occurrences of name `a` (as a naming).
    fn degree_name(&self, a: &Ref) -> usize {
        let mut n = 0;
        self.fold_refs_at(
            &mut |_, _| {},
            &mut |r, d| {
                if *r == a.shifted(d) {
                    n += 1
                }
            },
            0,
            0,
        );
        n
    }

    fn free_vars(&self) -> BTreeSet<Sym> {
        let mut out = BTreeSet::new();
        self.fold_refs_at(
            &mut |r, _| {
                if let Ref::Free(s) = r {
                    out.insert(s.clone());
                }
            },
            &mut |_, _| {},
            0,
            0,
        );
        out
    }

    fn free_names(&self) -> BTreeSet<Sym> {
        let mut out = BTreeSet::new();
        self.fold_refs_at(
            &mut |_, _| {},
            &mut |r, _| {
                if let Ref::Free(s) = r {
                    out.insert(s.clone());
                }
            },
            0,
            0,
        );
        out
    }

    /// True when no index escapes the term.
    fn is_locally_closed(&self) -> bool {
        let mut ok = true;
        let mut ok2 = true;
        self.fold_refs_at(
            &mut |r, d| {
                if matches!(r, Ref::Bound(i) if *i >= d) {
                    ok = false
                }
            },
            &mut |r, d| {
                if matches!(r, Ref::Bound(i) if *i >= d) {
                    ok2 = false
                }
            },
            0,
            0,
        );
        ok && ok2
    }

    /// Binds the free variable `x` one λ-level up (used to build `λx.t`).
    fn close_var(&self, x: &str) -> Self {
        self.map_refs(
            &|r, d| match r {
                Ref::Bound(i) if *i >= d => Some(Ref::Bound(i + 1)),
                Ref::Free(s) if &**s == x => Some(Ref::Bound(d)),
                _ => None,
            },
            &|_, _| None,
        )
    }

    /// Binds the free name `a` one μ-level up (used to build `μa.⟨…⟩`).
    fn close_name(&self, a: &str) -> Self {
        self.map_refs(&|_, _| None, &|r, d| match r {
            Ref::Bound(i) if *i >= d => Some(Ref::Bound(i + 1)),
            Ref::Free(s) if &**s == a => Some(Ref::Bound(d)),
            _ => None,
        })
    }

    /// Contracts a ρ-shaped pair: the term is the body of `μβ.⟨η|·⟩` sitting
    /// under `μγ.⟨a|·⟩`; the result lives directly under `μγ` with every
    /// occurrence of `β` replaced by `a`.
    fn rho_rename(&self, a: &Ref) -> Self {
        self.map_refs(&|_, _| None, &|r, e| rho_ref(r, e, a))
    }
}

pub(crate) fn shift_ref(r: &Ref, depth: u32, by: u32) -> Option<Ref> {
    match r {
        Ref::Bound(i) if *i >= depth => Some(Ref::Bound(i + by)),
        _ => None,
    }
}

pub(crate) fn unshift_ref(r: &Ref, depth: u32) -> Option<Ref> {
    match r {
        Ref::Bound(i) if *i > depth => Some(Ref::Bound(i - 1)),
        Ref::Bound(i) if *i == depth => panic!("unshift of an occurring index"),
        _ => None,
    }
}

pub(crate) fn rho_ref(r: &Ref, e: u32, a: &Ref) -> Option<Ref> {
    match r {
        Ref::Bound(i) if *i < e => None,
        Ref::Bound(i) if *i == e => Some(a.shifted(e)),
        Ref::Bound(i) => Some(Ref::Bound(i - 1)),
        Ref::Free(_) => None,
    }
}

fn pick<T: Clone>(new: Option<T>, old: &T) -> T {
    new.unwrap_or_else(|| old.clone())
}

impl Syntax for Term {
    fn map_refs_at<FV, FN>(&self, fv: &FV, fnm: &FN, dv: u32, dn: u32) -> Option<Self>
    where
        FV: Fn(&Ref, u32) -> Option<Ref>,
        FN: Fn(&Ref, u32) -> Option<Ref>,
    {
        match self {
            Term::Var(r) => fv(r, dv).map(Term::Var),
            Term::Lam(b) => b.map_refs_at(fv, fnm, dv + 1, dn).map(|b| Term::Lam(Arc::new(b))),
            Term::App(f, a) => {
                let f2 = f.map_refs_at(fv, fnm, dv, dn);
                let a2 = a.map_refs_at(fv, fnm, dv, dn);
                if f2.is_none() && a2.is_none() {
                    return None;
                }
                Some(Term::App(pick(f2.map(Arc::new), f), pick(a2.map(Arc::new), a)))
            }
            Term::Mu(nm, b) => {
                let nm2 = fnm(nm, dn + 1);
                let b2 = b.map_refs_at(fv, fnm, dv, dn + 1);
                if nm2.is_none() && b2.is_none() {
                    return None;
                }
                Some(Term::Mu(pick(nm2, nm), pick(b2.map(Arc::new), b)))
            }
        }
    }

    fn fold_refs_at(&self, fv: &mut dyn FnMut(&Ref, u32), fnm: &mut dyn FnMut(&Ref, u32), dv: u32, dn: u32) {
        match self {
            Term::Var(r) => fv(r, dv),
            Term::Lam(b) => b.fold_refs_at(fv, fnm, dv + 1, dn),
            Term::App(f, a) => {
                f.fold_refs_at(fv, fnm, dv, dn);
                a.fold_refs_at(fv, fnm, dv, dn);
            }
            Term::Mu(nm, b) => {
                fnm(nm, dn + 1);
                b.fold_refs_at(fv, fnm, dv, dn + 1);
            }
        }
    }
}

impl Syntax for ResTerm {
    fn map_refs_at<FV, FN>(&self, fv: &FV, fnm: &FN, dv: u32, dn: u32) -> Option<Self>
    where
        FV: Fn(&Ref, u32) -> Option<Ref>,
        FN: Fn(&Ref, u32) -> Option<Ref>,
    {
        match self {
            ResTerm::Var(r) => fv(r, dv).map(ResTerm::Var),
            ResTerm::Lam(b) => b.map_refs_at(fv, fnm, dv + 1, dn).map(|b| ResTerm::Lam(Arc::new(b))),
            ResTerm::App(h, bag) => {
                let h2 = h.map_refs_at(fv, fnm, dv, dn);
                let elems: Vec<Option<ResTerm>> = bag.iter().map(|u| u.map_refs_at(fv, fnm, dv, dn)).collect();
                if h2.is_none() && elems.iter().all(Option::is_none) {
                    return None;
                }
                let bag2 = if elems.iter().all(Option::is_none) {
                    bag.clone()
                } else {
                    Bag::new(elems.into_iter().zip(bag.iter()).map(|(n, o)| pick(n, o)).collect())
                };
                Some(ResTerm::App(pick(h2.map(Arc::new), h), bag2))
            }
            ResTerm::Mu(nm, b) => {
                let nm2 = fnm(nm, dn + 1);
                let b2 = b.map_refs_at(fv, fnm, dv, dn + 1);
                if nm2.is_none() && b2.is_none() {
                    return None;
                }
                Some(ResTerm::Mu(pick(nm2, nm), pick(b2.map(Arc::new), b)))
            }
        }
    }

    fn fold_refs_at(&self, fv: &mut dyn FnMut(&Ref, u32), fnm: &mut dyn FnMut(&Ref, u32), dv: u32, dn: u32) {
        match self {
            ResTerm::Var(r) => fv(r, dv),
            ResTerm::Lam(b) => b.fold_refs_at(fv, fnm, dv + 1, dn),
            ResTerm::App(h, bag) => {
                h.fold_refs_at(fv, fnm, dv, dn);
                for u in bag.iter() {
                    u.fold_refs_at(fv, fnm, dv, dn);
                }
            }
            ResTerm::Mu(nm, b) => {
                fnm(nm, dn + 1);
                b.fold_refs_at(fv, fnm, dv, dn + 1);
            }
        }
    }
}

fn named_ref(alpha: &str, beta: &str) -> Ref {
    if alpha == beta {
        Ref::Bound(0)
    } else {
        Ref::free(beta)
    }
}

impl Term {
    pub fn var(x: &str) -> Term {
        Term::Var(Ref::free(x))
    }

    /// `λx.body`, binding the free variable `x` of `body`.
    pub fn lam(x: &str, body: Term) -> Term {
        Term::Lam(Arc::new(body.close_var(x)))
    }

    pub fn app(f: Term, a: Term) -> Term {
        Term::App(Arc::new(f), Arc::new(a))
    }

    pub fn apps(f: Term, args: impl IntoIterator<Item = Term>) -> Term {
        args.into_iter().fold(f, Term::app)
    }

    /// `μα.⟨β|body⟩`; `beta` may equal `alpha`.
    pub fn mu(alpha: &str, beta: &str, body: Term) -> Term {
        Term::Mu(named_ref(alpha, beta), Arc::new(body.close_name(alpha)))
    }

    /// `|x| = 1`, binders add 1, application adds 1.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::Lam(b) | Term::Mu(_, b) => 1 + b.size(),
            Term::App(f, a) => 1 + f.size() + a.size(),
        }
    }

    pub fn subterm(&self, path: &[u32]) -> Option<&Term> {
        let Some((&i, rest)) = path.split_first() else {
            return Some(self);
        };
        match (self, i) {
            (Term::Lam(b), 0) | (Term::Mu(_, b), 0) => b.subterm(rest),
            (Term::App(f, _), 0) => f.subterm(rest),
            (Term::App(_, a), 1) => a.subterm(rest),
            _ => None,
        }
    }

    /// Replaces the subterm at `path` (capture-permitting).
    pub fn replace_at(&self, path: &[u32], f: &mut dyn FnMut(&Term) -> Term) -> Option<Term> {
        let Some((&i, rest)) = path.split_first() else {
            return Some(f(self));
        };
        Some(match (self, i) {
            (Term::Lam(b), 0) => Term::Lam(Arc::new(b.replace_at(rest, f)?)),
            (Term::Mu(nm, b), 0) => Term::Mu(nm.clone(), Arc::new(b.replace_at(rest, f)?)),
            (Term::App(g, a), 0) => Term::App(Arc::new(g.replace_at(rest, f)?), a.clone()),
            (Term::App(g, a), 1) => Term::App(g.clone(), Arc::new(a.replace_at(rest, f)?)),
            _ => return None,
        })
    }

    pub fn count_mu(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::Lam(b) => b.count_mu(),
            Term::Mu(_, b) => 1 + b.count_mu(),
            Term::App(f, a) => f.count_mu() + a.count_mu(),
        }
    }
}

impl ResTerm {
    pub fn var(x: &str) -> ResTerm {
        ResTerm::Var(Ref::free(x))
    }

    /// `λx.body`, binding the free variable `x` of `body`.
    pub fn lam(x: &str, body: ResTerm) -> ResTerm {
        ResTerm::Lam(Arc::new(body.close_var(x)))
    }

    pub fn app(head: ResTerm, bag: Vec<ResTerm>) -> ResTerm {
        ResTerm::App(Arc::new(head), Bag::new(bag))
    }

    pub fn app_bag(head: ResTerm, bag: Bag) -> ResTerm {
        ResTerm::App(Arc::new(head), bag)
    }

    /// `μα.⟨β|body⟩`; `beta` may equal `alpha`.
    pub fn mu(alpha: &str, beta: &str, body: ResTerm) -> ResTerm {
        ResTerm::Mu(named_ref(alpha, beta), Arc::new(body.close_name(alpha)))
    }

    /// `|x| = 1`, `|λx.t| = |μα.⟨β|t⟩| = 1+|t|`, `|t0[t1..tk]| = 1+k+Σ|ti|`.
    pub fn size(&self) -> usize {
        match self {
            ResTerm::Var(_) => 1,
            ResTerm::Lam(b) | ResTerm::Mu(_, b) => 1 + b.size(),
            ResTerm::App(h, bag) => 1 + bag.len() + h.size() + bag.iter().map(ResTerm::size).sum::<usize>(),
        }
    }

    /// Number of μ-constructors.
    pub fn deg_mu(&self) -> usize {
        match self {
            ResTerm::Var(_) => 0,
            ResTerm::Lam(b) => b.deg_mu(),
            ResTerm::Mu(_, b) => 1 + b.deg_mu(),
            ResTerm::App(h, bag) => h.deg_mu() + bag.iter().map(ResTerm::deg_mu).sum::<usize>(),
        }
    }

    pub fn subterm(&self, path: &[u32]) -> Option<&ResTerm> {
        let Some((&i, rest)) = path.split_first() else {
            return Some(self);
        };
        match (self, i) {
            (ResTerm::Lam(b), 0) | (ResTerm::Mu(_, b), 0) => b.subterm(rest),
            (ResTerm::App(h, _), 0) => h.subterm(rest),
            (ResTerm::App(_, bag), i) => bag.as_slice().get(i as usize - 1)?.subterm(rest),
            _ => None,
        }
    }

    /// Replaces the subterm at `path` (capture-permitting).
    pub fn replace_at(&self, path: &[u32], t: &ResTerm) -> Option<ResTerm> {
        let Some((&i, rest)) = path.split_first() else {
            return Some(t.clone());
        };
        Some(match (self, i) {
            (ResTerm::Lam(b), 0) => ResTerm::Lam(Arc::new(b.replace_at(rest, t)?)),
            (ResTerm::Mu(nm, b), 0) => ResTerm::Mu(nm.clone(), Arc::new(b.replace_at(rest, t)?)),
            (ResTerm::App(h, bag), 0) => ResTerm::App(Arc::new(h.replace_at(rest, t)?), bag.clone()),
            (ResTerm::App(h, bag), i) => {
                let mut elems = bag.as_slice().to_vec();
                let slot = elems.get_mut(i as usize - 1)?;
                *slot = slot.replace_at(rest, t)?;
                ResTerm::App(h.clone(), Bag::new(elems))
            }
            _ => return None,
        })
    }

    /// True when some bag anywhere in the term is nonempty.
    pub fn has_nonempty_bag(&self) -> bool {
        match self {
            ResTerm::Var(_) => false,
            ResTerm::Lam(b) | ResTerm::Mu(_, b) => b.has_nonempty_bag(),
            ResTerm::App(h, bag) => !bag.is_empty() || h.has_nonempty_bag(),
        }
    }
}

/// Alpha-equivalence; structural equality on the nameless representation.
pub fn alpha_eq<T: PartialEq>(a: &T, b: &T) -> bool {
    a == b
}

/// Multihole λμ-context; filling is capture-permitting.
///
/// Stored with names rather than indices, since a hole may be filled under
/// binders that capture the argument's free variables.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Context {
    Var(String),
    Lam(String, Box<Context>),
    App(Box<Context>, Box<Context>),
    Mu(String, String, Box<Context>),
    Hole(usize),
}

impl Context {
    pub fn hole(i: usize) -> Context {
        Context::Hole(i)
    }

    /// Distinct hole indices, ascending.
    pub fn holes(&self) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        self.collect_holes(&mut out);
        out
    }

    fn collect_holes(&self, out: &mut BTreeSet<usize>) {
        match self {
            Context::Var(_) => {}
            Context::Hole(i) => {
                out.insert(*i);
            }
            Context::Lam(_, b) | Context::Mu(_, _, b) => b.collect_holes(out),
            Context::App(f, a) => {
                f.collect_holes(out);
                a.collect_holes(out);
            }
        }
    }

    pub fn arity(&self) -> usize {
        self.holes().len()
    }

    /// Embeds a term (converted to named syntax) as a hole-free context.
    pub fn from_term(t: &Term) -> Context {
        crate::textio::term_to_context(t)
    }

    /// Replaces `Hole(i)` by `args[i - 1]`; binders of the context capture
    /// free variables and names of the arguments.
    pub fn fill(&self, args: &[Term]) -> Result<Term, crate::Error> {
        for i in self.holes() {
            if i == 0 || i > args.len() {
                return Err(crate::Error::Arity {
                    expected: self.holes().into_iter().max().unwrap_or(0),
                    got: args.len(),
                });
            }
        }
        let named: Vec<Context> = args.iter().map(Context::from_term).collect();
        let plugged = self.plug(&named);
        Ok(crate::textio::context_to_term(&plugged))
    }

    fn plug(&self, args: &[Context]) -> Context {
        match self {
            Context::Var(_) => self.clone(),
            Context::Hole(i) => args[i - 1].clone(),
            Context::Lam(x, b) => Context::Lam(x.clone(), Box::new(b.plug(args))),
            Context::Mu(a, n, b) => Context::Mu(a.clone(), n.clone(), Box::new(b.plug(args))),
            Context::App(f, a) => Context::App(Box::new(f.plug(args)), Box::new(a.plug(args))),
        }
    }
}

/// Single-hole resource context: a term with a placeholder variable at
/// `hole`. Filling is capture-permitting.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ResContext {
    pub skeleton: ResTerm,
    pub hole: Path,
}

impl ResContext {
    pub const HOLE: &'static str = "_hole";

    pub fn trivial() -> ResContext {
        ResContext { skeleton: ResTerm::var(Self::HOLE), hole: Vec::new() }
    }

    pub fn is_trivial(&self) -> bool {
        self.hole.is_empty()
    }

    pub fn fill(&self, t: &ResTerm) -> ResTerm {
        self.skeleton.replace_at(&self.hole, t).expect("hole path is valid")
    }

    /// Number of μ-constructors above the hole.
    pub fn hole_depth(&self) -> usize {
        let mut cur = &self.skeleton;
        let mut n = 0;
        for &i in &self.hole {
            if matches!(cur, ResTerm::Mu(..)) {
                n += 1;
            }
            cur = cur.subterm(&[i]).expect("hole path is valid");
        }
        n
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::textio::{parse_res_term, parse_term};

    fn r(s: &str) -> ResTerm {
        parse_res_term(s).unwrap()
    }

    #[test]
    fn bound_renaming_is_structural() {
        assert!(alpha_eq(&parse_term("\\x.x").unwrap(), &parse_term("\\y.y").unwrap()));
        assert!(alpha_eq(&r("mu 'a.<'a> x"), &r("mu 'b.<'b> x")));
        assert!(alpha_eq(&r("x[y,z]"), &r("x[z,y]")));
        assert!(!alpha_eq(&r("mu 'a.<'b> x"), &r("mu 'a.<'c> x")));
    }

    #[test]
    fn degrees_count_free_occurrences() {
        assert_eq!(r("x[x]").degree_var(&Ref::free("x")), 2);
        assert_eq!(r("mu 'b.<'a> x").degree_name(&Ref::free("a")), 1);
        assert_eq!(r("mu 'a.<'a> x").degree_name(&Ref::free("a")), 0);
        assert_eq!(r("\\x.x[y]").degree_var(&Ref::free("x")), 0);
    }

    #[test]
    fn renaming_free_names() {
        let a = Ref::free("a");
        let b = Ref::free("b");
        assert_eq!(r("mu 'g.<'b> x").rename_name(&a, &b), r("mu 'g.<'a> x"));
        assert_eq!(r("x").rename_name(&a, &b), r("x"));
        // the binder is nameless, so a free 'a can never be captured
        let t = r("mu 'a.<'b> x").rename_name(&a, &b);
        assert_eq!(t.degree_name(&a), 1);
        assert_eq!(t, r("mu 'c.<'a> x"));
    }

    #[test]
    fn sizes() {
        assert_eq!(r("x").size(), 1);
        assert_eq!(r("\\x.x").size(), 2);
        assert_eq!(r("x[y]").size(), 4);
        assert_eq!(r("x 1").size(), 2);
        assert_eq!(r("x[y,z]").size(), 6);
    }

    #[test]
    fn bag_union_laws() {
        let a = Bag::new(vec![r("x"), r("y")]);
        let b = Bag::new(vec![r("x")]);
        assert_eq!(a.union(&b), b.union(&a));
        assert_eq!(a.union(&Bag::empty()), a);
        assert_eq!(a.union(&b).len(), 3);
        assert_eq!(a.union(&b).groups()[0].1, 2);
    }

    #[test]
    fn context_fill_captures() {
        let c = crate::textio::parse_context("\\x._1").unwrap();
        let t = c.fill(&[parse_term("x").unwrap()]).unwrap();
        assert_eq!(t, parse_term("\\x.x").unwrap());
        let id = crate::textio::parse_context("_1").unwrap();
        let m = parse_term("(\\x.x) y").unwrap();
        assert_eq!(id.fill(std::slice::from_ref(&m)).unwrap(), m);
        assert!(id.fill(&[]).is_err());
    }

    #[test]
    fn builders_match_parser() {
        let t = Term::lam(
            "y",
            Term::mu("a", "a", Term::app(Term::var("y"), Term::lam("x", Term::mu("d", "a", Term::var("x"))))),
        );
        assert_eq!(t, parse_term("\\y. mu 'a.<'a> y (\\x. mu 'd.<'a> x)").unwrap());
    }
}
