//! Coefficient semirings and finite formal sums of resource terms.

use std::collections::BTreeMap;
use std::fmt::Debug;
use std::hash::Hash;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::syntax::{Bag, Ref, ResTerm, Syntax};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SemiringTag {
    Bool,
    Nat,
}

pub trait Semiring: Copy + Eq + Ord + Hash + Debug + Send + Sync + 'static {
    const TAG: SemiringTag;
    fn zero() -> Self;
    fn one() -> Self;
    fn add(self, other: Self) -> Self;
    fn mul(self, other: Self) -> Self;
    /// Image of the natural number `n`.
    fn from_count(n: u64) -> Self;
    /// Natural number printed as the coefficient.
    fn count(self) -> u64;

    fn is_zero(self) -> bool {
        self == Self::zero()
    }
}

/// Qualitative coefficients: `1 + 1 = 1`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Bool(pub bool);

/// Quantitative coefficients.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Nat(pub u64);

impl Semiring for Bool {
    const TAG: SemiringTag = SemiringTag::Bool;
    fn zero() -> Self {
        Bool(false)
    }
    fn one() -> Self {
        Bool(true)
    }
    fn add(self, o: Self) -> Self {
        Bool(self.0 || o.0)
    }
    fn mul(self, o: Self) -> Self {
        Bool(self.0 && o.0)
    }
    fn from_count(n: u64) -> Self {
        Bool(n > 0)
    }
    fn count(self) -> u64 {
        self.0 as u64
    }
}

impl Semiring for Nat {
    const TAG: SemiringTag = SemiringTag::Nat;
    fn zero() -> Self {
        Nat(0)
    }
    fn one() -> Self {
        Nat(1)
    }
    fn add(self, o: Self) -> Self {
        Nat(self.0.checked_add(o.0).expect("coefficient overflow"))
    }
    fn mul(self, o: Self) -> Self {
        Nat(self.0.checked_mul(o.0).expect("coefficient overflow"))
    }
    fn from_count(n: u64) -> Self {
        Nat(n)
    }
    fn count(self) -> u64 {
        self.0
    }
}

/// Finite sum with nonzero coefficients; the empty sum is `0`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Sum<S> {
    terms: BTreeMap<ResTerm, S>,
}

impl<S: Semiring> Default for Sum<S> {
    fn default() -> Self {
        Sum::zero()
    }
}

impl<S: Semiring> Sum<S> {
    pub fn zero() -> Self {
        Sum { terms: BTreeMap::new() }
    }

    pub fn term(t: ResTerm) -> Self {
        Self::with_coeff(t, S::one())
    }

    pub fn with_coeff(t: ResTerm, c: S) -> Self {
        let mut s = Self::zero();
        s.add_term(t, c);
        s
    }

    pub fn add_term(&mut self, t: ResTerm, c: S) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(t).or_insert(S::zero());
        *slot = slot.add(c);
    }

    /// Removes `c` from the coefficient of `t`; only meaningful for `Nat`.
    pub fn sub_term(&mut self, t: &ResTerm, c: u64) {
        if let Some(old) = self.terms.get(t).copied() {
            let left = old.count().saturating_sub(c);
            if left == 0 || S::TAG == SemiringTag::Bool {
                self.terms.remove(t);
            } else {
                self.terms.insert(t.clone(), S::from_count(left));
            }
        }
    }

    pub fn pop_first(&mut self) -> Option<(ResTerm, S)> {
        self.terms.pop_first()
    }

    pub fn remove(&mut self, t: &ResTerm) -> Option<S> {
        self.terms.remove(t)
    }

    pub fn add_sum(&mut self, other: &Sum<S>) {
        for (t, c) in other.iter() {
            self.add_term(t.clone(), c);
        }
    }

    pub fn add_scaled(&mut self, other: &Sum<S>, k: S) {
        for (t, c) in other.iter() {
            self.add_term(t.clone(), c.mul(k));
        }
    }

    pub fn plus(mut self, other: &Sum<S>) -> Self {
        self.add_sum(other);
        self
    }

    pub fn scale(&self, k: S) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        Sum { terms: self.terms.iter().map(|(t, c)| (t.clone(), c.mul(k))).collect() }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = (&ResTerm, S)> + ExactSizeIterator {
        self.terms.iter().map(|(t, c)| (t, *c))
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = &ResTerm> + ExactSizeIterator {
        self.terms.keys()
    }

    pub fn contains(&self, t: &ResTerm) -> bool {
        self.terms.contains_key(t)
    }

    pub fn coeff(&self, t: &ResTerm) -> S {
        self.terms.get(t).copied().unwrap_or(S::zero())
    }

    /// Linear extension of `f`: `Σ c·f(t)`.
    pub fn flat_map(&self, mut f: impl FnMut(&ResTerm) -> Sum<S>) -> Self {
        let mut out = Self::zero();
        for (t, c) in self.iter() {
            out.add_scaled(&f(t), c);
        }
        out
    }

    /// Lifts a unary constructor.
    pub fn map_terms(&self, mut f: impl FnMut(&ResTerm) -> ResTerm) -> Self {
        let mut out = Self::zero();
        for (t, c) in self.iter() {
            out.add_term(f(t), c);
        }
        out
    }

    pub fn lam(&self) -> Self {
        self.map_terms(|t| ResTerm::Lam(Arc::new(t.clone())))
    }

    pub fn mu(&self, named: &Ref) -> Self {
        self.map_terms(|t| ResTerm::Mu(named.clone(), Arc::new(t.clone())))
    }

    /// `t ↦ t b` for a fixed bag.
    pub fn app_to(&self, bag: &Bag) -> Self {
        self.map_terms(|t| ResTerm::App(Arc::new(t.clone()), bag.clone()))
    }

    pub fn rename_name(&self, to: &Ref, from: &Ref) -> Self {
        self.map_terms(|t| t.rename_name(to, from))
    }

    pub fn support(&self) -> Sum<Bool> {
        Sum { terms: self.terms.keys().map(|t| (t.clone(), Bool(true))).collect() }
    }

    /// Reinterprets coefficients through their natural-number image.
    pub fn convert<T: Semiring>(&self) -> Sum<T> {
        let mut out = Sum::zero();
        for (t, c) in self.iter() {
            out.add_term(t.clone(), T::from_count(c.count()));
        }
        out
    }
}

impl<S: Semiring> FromIterator<(ResTerm, S)> for Sum<S> {
    fn from_iter<I: IntoIterator<Item = (ResTerm, S)>>(iter: I) -> Self {
        let mut out = Sum::zero();
        for (t, c) in iter {
            out.add_term(t, c);
        }
        out
    }
}

/// Multilinear product: all bags `[u1..un]` with `ui` an addend of
/// `parts[i]`, coefficient the product. Any zero part gives no bag.
pub fn bag_product<S: Semiring>(parts: &[Sum<S>]) -> Vec<(Bag, S)> {
    let mut acc: Vec<(Vec<ResTerm>, S)> = vec![(Vec::new(), S::one())];
    for p in parts {
        if p.is_zero() {
            return Vec::new();
        }
        let mut next = Vec::with_capacity(acc.len() * p.len());
        for (elems, c) in &acc {
            for (t, d) in p.iter() {
                let mut e = elems.clone();
                e.push(t.clone());
                next.push((e, c.mul(d)));
            }
        }
        acc = next;
    }
    acc.into_iter().map(|(e, c)| (Bag::new(e), c)).collect()
}

/// Application lifted to sums: `heads · [parts]`.
pub fn app_lift<S: Semiring>(heads: &Sum<S>, parts: &[Sum<S>]) -> Sum<S> {
    let mut out = Sum::zero();
    if heads.is_zero() {
        return out;
    }
    for (bag, c) in bag_product(parts) {
        for (h, d) in heads.iter() {
            out.add_term(ResTerm::App(Arc::new(h.clone()), bag.clone()), c.mul(d));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::textio::parse_res_term;

    fn r(s: &str) -> ResTerm {
        parse_res_term(s).unwrap()
    }

    #[test]
    fn lifting_is_linear() {
        let s: Sum<Bool> = Sum::term(r("x")).plus(&Sum::term(r("y")));
        let l = s.lam();
        assert!(l.contains(&r("\\z.x")) && l.contains(&r("\\z.y")));
        assert_eq!(l.len(), 2);
        assert!(app_lift(&s, &[Sum::zero()]).is_zero());
        assert!(app_lift(&Sum::<Bool>::zero(), &[]).is_zero());
    }

    #[test]
    fn support_drops_coefficients() {
        let mut s: Sum<Nat> = Sum::with_coeff(r("t"), Nat(2));
        s.add_term(r("s"), Nat(1));
        let b = s.support();
        assert_eq!(b, Sum::term(r("t")).plus(&Sum::term(r("s"))));
    }

    #[test]
    fn bool_addition_is_idempotent_nat_adds() {
        let b: Sum<Bool> = Sum::term(r("x")).plus(&Sum::term(r("x")));
        assert_eq!(b.len(), 1);
        let n: Sum<Nat> = Sum::term(r("x")).plus(&Sum::term(r("x")));
        assert_eq!(n.coeff(&r("x")), Nat(2));
    }

    #[test]
    fn product_of_parts_multiplies_coefficients() {
        let p: Sum<Nat> = Sum::with_coeff(r("x"), Nat(2)).plus(&Sum::term(r("y")));
        let q: Sum<Nat> = Sum::with_coeff(r("z"), Nat(3));
        let s = app_lift(&Sum::term(r("f")), &[p, q]);
        assert_eq!(s.coeff(&r("f[x,z]")), Nat(6));
        assert_eq!(s.coeff(&r("f[y,z]")), Nat(3));
    }
}
