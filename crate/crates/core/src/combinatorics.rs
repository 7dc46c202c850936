//! Splitting a bag into a fixed number of possibly-empty parts.
//!
//! Two routes to the same decompositions: [`index_assignments`] maps every
//! bag position to a part, giving `(n+1)^k` assignments with repetitions;
//! [`weighted_compositions`] enumerates each distinct tuple once together with
//! the number of assignments generating it. The reduction engine uses the
//! weighted route; the tests check the two against each other.

use crate::syntax::{Bag, ResTerm};

/// Ordered tuple of bags whose union is the input bag.
pub type WeakComposition = Vec<Bag>;

/// A function from bag positions (canonical order) to parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexAssignment {
    /// `map[j]` is the part receiving the `j`-th element.
    pub map: Vec<usize>,
    pub composition: WeakComposition,
}

/// Constraint on one part of a composition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PartSpec {
    Any,
    Exactly(usize),
}

impl PartSpec {
    fn cap(self) -> usize {
        match self {
            PartSpec::Any => usize::MAX,
            PartSpec::Exactly(k) => k,
        }
    }
}

/// All distinct `n`-part weak compositions of `b`.
pub fn weak_compositions(b: &Bag, n: usize) -> Vec<WeakComposition> {
    weighted_compositions(b, n).into_iter().map(|(c, _)| c).collect()
}

/// Distinct `n`-part weak compositions with the number of index assignments
/// generating each.
pub fn weighted_compositions(b: &Bag, n: usize) -> Vec<(WeakComposition, u64)> {
    weighted_compositions_with(b, &vec![PartSpec::Any; n])
}

/// Distinct weak compositions respecting per-part size constraints.
pub fn weighted_compositions_with(b: &Bag, specs: &[PartSpec]) -> Vec<(WeakComposition, u64)> {
    let groups = b.groups();
    let demand: usize = specs
        .iter()
        .map(|s| match s {
            PartSpec::Exactly(k) => *k,
            PartSpec::Any => 0,
        })
        .sum();
    let all_exact = specs.iter().all(|s| matches!(s, PartSpec::Exactly(_)));
    if demand > b.len() || (all_exact && demand != b.len()) {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut parts: Vec<Vec<ResTerm>> = vec![Vec::new(); specs.len()];
    let mut caps: Vec<usize> = specs.iter().map(|s| s.cap()).collect();
    place_groups(&groups, 0, &mut parts, &mut caps, specs, 1, &mut out);
    out
}

fn place_groups(
    groups: &[(&ResTerm, usize)],
    g: usize,
    parts: &mut Vec<Vec<ResTerm>>,
    caps: &mut Vec<usize>,
    specs: &[PartSpec],
    weight: u64,
    out: &mut Vec<(WeakComposition, u64)>,
) {
    if g == groups.len() {
        let full = specs.iter().zip(parts.iter()).all(|(s, p)| !matches!(s, PartSpec::Exactly(k) if *k != p.len()));
        if full {
            out.push((parts.iter().map(|p| Bag::new(p.clone())).collect(), weight));
        }
        return;
    }
    let (elem, m) = groups[g];
    if parts.is_empty() {
        return;
    }
    let mut counts = vec![0usize; parts.len()];
    distribute(groups, g, elem, m, 0, &mut counts, parts, caps, specs, weight, out);
}

#[allow(clippy::too_many_arguments)]
fn distribute(
    groups: &[(&ResTerm, usize)],
    g: usize,
    elem: &ResTerm,
    left: usize,
    i: usize,
    counts: &mut Vec<usize>,
    parts: &mut Vec<Vec<ResTerm>>,
    caps: &mut Vec<usize>,
    specs: &[PartSpec],
    weight: u64,
    out: &mut Vec<(WeakComposition, u64)>,
) {
    let last = i + 1 == parts.len();
    let lo = if last { left } else { 0 };
    let hi = left.min(caps[i]);
    if lo > hi {
        return;
    }
    for k in lo..=hi {
        let w = weight.checked_mul(binomial(left, k)).expect("multiplicity overflow");
        counts[i] = k;
        caps[i] = caps[i].saturating_sub(k);
        for _ in 0..k {
            parts[i].push(elem.clone());
        }
        if last {
            place_groups(groups, g + 1, parts, caps, specs, w, out);
        } else {
            distribute(groups, g, elem, left - k, i + 1, counts, parts, caps, specs, w, out);
        }
        for _ in 0..k {
            parts[i].pop();
        }
        if caps[i] != usize::MAX {
            caps[i] += k;
        }
    }
}

pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    u64::try_from(acc).expect("binomial overflow")
}

/// All `(n+1)^|b|` maps from positions of `b` to parts `0..=n`, in
/// base-`(n+1)` counter order (position 0 least significant).
pub fn index_assignments(b: &Bag, n: usize) -> Vec<IndexAssignment> {
    let k = b.len();
    let base = n + 1;
    let total = base.checked_pow(k as u32).expect("too many assignments");
    let mut out = Vec::with_capacity(total);
    let mut map = vec![0usize; k];
    for _ in 0..total {
        let mut parts: Vec<Vec<ResTerm>> = vec![Vec::new(); base];
        for (j, &p) in map.iter().enumerate() {
            parts[p].push(b.as_slice()[j].clone());
        }
        out.push(IndexAssignment { map: map.clone(), composition: parts.into_iter().map(Bag::new).collect() });
        for d in map.iter_mut() {
            *d += 1;
            if *d < base {
                break;
            }
            *d = 0;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::textio::parse_res_term;
    use std::collections::BTreeMap;

    fn bag(xs: &[&str]) -> Bag {
        Bag::new(xs.iter().map(|s| parse_res_term(s).unwrap()).collect())
    }

    #[test]
    fn singleton_into_two_parts() {
        let got = weak_compositions(&bag(&["x"]), 2);
        assert_eq!(got.len(), 2);
        assert!(got.contains(&vec![bag(&["x"]), bag(&[])]));
        assert!(got.contains(&vec![bag(&[]), bag(&["x"])]));
    }

    #[test]
    fn empty_bag_has_one_composition() {
        assert_eq!(weak_compositions(&bag(&[]), 3), vec![vec![bag(&[]); 3]]);
        assert_eq!(weak_compositions(&bag(&[]), 0), vec![Vec::<Bag>::new()]);
        assert!(weak_compositions(&bag(&["x"]), 0).is_empty());
        assert_eq!(index_assignments(&bag(&[]), 5).len(), 1);
    }

    #[test]
    fn doubled_element_into_two_parts() {
        let got = weighted_compositions(&bag(&["x", "x"]), 2);
        let as_map: BTreeMap<_, _> = got.into_iter().collect();
        assert_eq!(as_map.len(), 3);
        assert_eq!(as_map[&vec![bag(&["x"]), bag(&["x"])]], 2);
        assert_eq!(as_map[&vec![bag(&["x", "x"]), bag(&[])]], 1);
    }

    #[test]
    fn assignment_count_law() {
        assert_eq!(index_assignments(&bag(&["y", "y"]), 2).len(), 9);
        assert_eq!(index_assignments(&bag(&["x", "y", "z"]), 3).len(), 64);
    }

    #[test]
    fn mixed_assignments_share_a_composition() {
        let asg = index_assignments(&bag(&["y", "y"]), 1);
        let split = vec![bag(&["y"]), bag(&["y"])];
        assert_eq!(asg.iter().filter(|a| a.composition == split).count(), 2);
        assert_eq!(asg.iter().filter(|a| a.composition == vec![bag(&["y", "y"]), bag(&[])]).count(), 1);
    }

    #[test]
    fn weighted_route_agrees_with_assignments() {
        for xs in [&["x", "x", "y"][..], &["x", "y", "z"], &["a", "a", "a", "b"], &[]] {
            let b = bag(xs);
            for n in 0..4 {
                let mut counted: BTreeMap<WeakComposition, u64> = BTreeMap::new();
                for a in index_assignments(&b, n) {
                    let union = a.composition.iter().fold(Bag::empty(), |acc, p| acc.union(p));
                    assert_eq!(union, b);
                    *counted.entry(a.composition).or_default() += 1;
                }
                let weighted: BTreeMap<_, _> = weighted_compositions(&b, n + 1).into_iter().collect();
                assert_eq!(counted, weighted);
            }
        }
    }

    #[test]
    fn exact_specs_filter_the_weighted_route() {
        let b = bag(&["x", "x", "y"]);
        let specs = [PartSpec::Exactly(1), PartSpec::Any, PartSpec::Exactly(0)];
        let got: BTreeMap<_, _> = weighted_compositions_with(&b, &specs).into_iter().collect();
        let expect: BTreeMap<_, _> =
            weighted_compositions(&b, 3).into_iter().filter(|(c, _)| c[0].len() == 1 && c[2].is_empty()).collect();
        assert_eq!(got, expect);
    }
}
