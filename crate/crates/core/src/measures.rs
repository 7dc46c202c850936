//! Termination measures on resource terms.
//!
//! `ms(t)` collects, for every bag occurrence `b`, the number of μ's of `t`
//! minus the number of μ's above `b`. The full measure orders
//! `(ms, deg_μ, size)` lexicographically, with `ms` under the multiset order.

use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;

use crate::syntax::{Path, ResTerm};

/// Multiset of naturals, stored in descending order.
///
/// Ordered by the Dershowitz–Manna extension of `<` on naturals, which for a
/// total base order is the lexicographic order of the descending sequences
/// (a proper prefix being smaller).
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default, Serialize)]
pub struct Multiset(Vec<usize>);

impl Multiset {
    pub fn new(mut v: Vec<usize>) -> Multiset {
        v.sort_unstable_by(|a, b| b.cmp(a));
        Multiset(v)
    }

    pub fn elements(&self) -> &[usize] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn union(&self, other: &Multiset) -> Multiset {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Multiset::new(v)
    }

    pub fn add_to_all(&self, k: usize) -> Multiset {
        Multiset(self.0.iter().map(|x| x + k).collect())
    }
}

impl Ord for Multiset {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.cmp(&other.0)
    }
}

impl PartialOrd for Multiset {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Multiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "}}")
    }
}

/// `(ms, deg_μ, size)`, compared lexicographically.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
pub struct Measure {
    pub ms: Multiset,
    pub deg_mu: usize,
    pub size: usize,
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.ms, self.deg_mu, self.size)
    }
}

/// For each application node, its path and the number of μ's above it.
pub fn bag_depths(t: &ResTerm) -> Vec<(Path, usize)> {
    fn go(t: &ResTerm, path: &mut Path, depth: usize, out: &mut Vec<(Path, usize)>) {
        match t {
            ResTerm::Var(_) => {}
            ResTerm::Lam(b) => {
                path.push(0);
                go(b, path, depth, out);
                path.pop();
            }
            ResTerm::Mu(_, b) => {
                path.push(0);
                go(b, path, depth + 1, out);
                path.pop();
            }
            ResTerm::App(h, bag) => {
                out.push((path.clone(), depth));
                path.push(0);
                go(h, path, depth, out);
                path.pop();
                for (i, u) in bag.iter().enumerate() {
                    path.push(1 + i as u32);
                    go(u, path, depth, out);
                    path.pop();
                }
            }
        }
    }
    let mut out = Vec::new();
    go(t, &mut Vec::new(), 0, &mut out);
    out
}

pub fn ms(t: &ResTerm) -> Multiset {
    let deg = t.deg_mu();
    Multiset::new(bag_depths(t).into_iter().map(|(_, d)| deg - d).collect())
}

/// The pair `(ms, deg_μ)`.
pub fn snm(t: &ResTerm) -> (Multiset, usize) {
    (ms(t), t.deg_mu())
}

pub fn bold_ms(t: &ResTerm) -> Measure {
    Measure { ms: ms(t), deg_mu: t.deg_mu(), size: t.size() }
}

/// `a > b` in the multiset order, straight from the definition: `b` arises
/// from `a` by removing a nonempty sub-multiset `X` and adding elements each
/// below some element of `X`.
pub fn dm_greater_bruteforce(a: &[usize], b: &[usize]) -> bool {
    let mut a = a.to_vec();
    a.sort_unstable();
    let n = a.len();
    for mask in 1u32..(1 << n) {
        let mut kept = Vec::new();
        let mut removed = Vec::new();
        for (i, &x) in a.iter().enumerate() {
            if mask & (1 << i) != 0 {
                removed.push(x);
            } else {
                kept.push(x);
            }
        }
        // b must contain kept; the rest are the added elements
        let mut rest = b.to_vec();
        let mut ok = true;
        for k in &kept {
            match rest.iter().position(|y| y == k) {
                Some(p) => {
                    rest.swap_remove(p);
                }
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if ok && rest.iter().all(|y| removed.iter().any(|x| x > y)) {
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::resource::step_r;
    use crate::sum::Bool;
    use crate::textio::parse_res_term;

    fn r(s: &str) -> ResTerm {
        parse_res_term(s).unwrap()
    }

    #[test]
    fn depth_and_ms_examples() {
        assert_eq!(bag_depths(&r("x[y]")), vec![(vec![], 0)]);
        assert_eq!(bag_depths(&r("mu 'a.<'b> x[y]")), vec![(vec![0], 1)]);
        assert!(bag_depths(&r("x")).is_empty());
        assert!(ms(&r("mu 'g.<'a> mu 'b.<'e> x")).is_empty());
        assert_eq!(ms(&r("x[y]")), Multiset::new(vec![0]));
        assert_eq!(ms(&r("mu 'a.<'b> x[y]")), Multiset::new(vec![0]));
    }

    #[test]
    fn minimum_is_a_variable() {
        let m = bold_ms(&r("x"));
        assert_eq!(m, Measure { ms: Multiset::default(), deg_mu: 0, size: 1 });
    }

    #[test]
    fn steps_decrease() {
        let t = r("(mu 'a.<'a> mu 'e.<'a> x)[y,y]");
        for u in step_r::<Bool>(&t, &[]).unwrap().terms() {
            assert!(bold_ms(&t) > bold_ms(u));
        }
        let t = r("mu 'g.<'a> mu 'b.<'e> x");
        let u = r("mu 'g.<'e> x");
        assert_eq!(ms(&t), ms(&u));
        assert!(t.deg_mu() > u.deg_mu());
    }

    #[test]
    fn multiset_order_matches_definition() {
        let mut all: Vec<Vec<usize>> = vec![vec![]];
        for len in 1..=3 {
            let mut next = Vec::new();
            for v in all.iter().filter(|v| v.len() == len - 1) {
                for x in 0..3 {
                    let mut w = v.clone();
                    w.push(x);
                    next.push(w);
                }
            }
            all.extend(next);
        }
        for a in &all {
            for b in &all {
                let fast = Multiset::new(a.clone()) > Multiset::new(b.clone());
                assert_eq!(fast, dm_greater_bruteforce(a, b), "{a:?} vs {b:?}");
            }
        }
    }
}
