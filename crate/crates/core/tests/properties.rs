// Randomized properties over the seeded generator. proptest drives the seeds;
// the generator does the structure.

use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::Rng;

use mulam_core::gen::{GenConfig, Generator};
use mulam_core::lamu::{self, head_decompose};
use mulam_core::measures::bold_ms;
use mulam_core::oracle::explore;
use mulam_core::resource::{linear_named_app, linear_subst, normalize_term, redexes, step_r, StepMode};
use mulam_core::taylor::{
    find_covering_reduct, named_app_expansion_check, substitution_expansion_check, taylor_enum,
    taylor_head_commute_check, taylor_member, Budget,
};
use mulam_core::textio::{parse_res_term, parse_sum, parse_term};
use mulam_core::{alpha_eq, Bag, Bool, Nat, Ref, ResContext, ResTerm, Sum, Syntax, Term};

fn res(seed: u64, size: usize) -> ResTerm {
    Generator::with_seed(seed).res_term(size)
}

fn lamu_term(seed: u64, size: usize) -> Term {
    Generator::with_seed(seed).term(size)
}

fn closed_lamu(seed: u64, size: usize) -> Term {
    Generator::new(GenConfig { closed: true, ..GenConfig::default() }, seed).term(size)
}

fn total(s: &Sum<Nat>) -> u64 {
    s.iter().map(|(_, c)| c.0).sum()
}

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn printed_terms_parse_back(seed: u64) {
        let m = lamu_term(seed, 20);
        let back = parse_term(&m.to_string()).unwrap();
        prop_assert!(alpha_eq(&m, &back), "{m} vs {back}");
        let t = res(seed, 20);
        prop_assert_eq!(parse_res_term(&t.to_string()).unwrap(), t);
    }

    #[test]
    fn printed_sums_parse_back(seed: u64) {
        let mut g = Generator::with_seed(seed);
        let mut s = Sum::<Nat>::zero();
        for k in 1..4u64 {
            s.add_term(g.res_term(10), Nat(k));
        }
        prop_assert_eq!(parse_sum::<Nat>(&s.to_string()).unwrap(), s);
    }

    #[test]
    fn linear_substitution_counts_bijections(seed: u64) {
        let mut g = Generator::with_seed(seed);
        let t = g.res_term(14);
        let x = Ref::free("x");
        let k = g.rng().gen_range(0..4usize);
        // bag elements avoid x so the count is exact
        let elems: Vec<ResTerm> = (0..k).map(|_| g.res_over(4, &["y", "z"], &["a"])).collect();
        let bag = Bag::new(elems.clone());
        let out = linear_subst::<Nat>(&t, &bag, &x);
        let d = t.degree_var(&x);
        if d == k {
            prop_assert_eq!(total(&out), factorial(k));
            for u in out.terms() {
                prop_assert_eq!(u.degree_var(&x), 0);
                prop_assert_eq!(u.size() + k, t.size() + elems.iter().map(ResTerm::size).sum::<usize>());
            }
        } else {
            prop_assert!(out.is_zero());
        }
    }

    #[test]
    fn linear_named_application_distributes_every_element(seed: u64) {
        let mut g = Generator::with_seed(seed);
        let t = g.res_term(14);
        let a = Ref::free("a");
        let k = g.rng().gen_range(0..3usize);
        let elems: Vec<ResTerm> = (0..k).map(|_| g.res_over(4, &["y", "z"], &["b"])).collect();
        let out = linear_named_app::<Nat>(&t, &a, &Bag::new(elems));
        let d = t.degree_name(&a) as u64;
        // each element independently picks one of the d named positions
        prop_assert_eq!(total(&out), d.pow(k as u32));
        for u in out.terms() {
            prop_assert_eq!(u.degree_name(&a), t.degree_name(&a));
        }
    }

    #[test]
    fn head_decomposition_reassembles(seed: u64) {
        let m = lamu_term(seed, 20);
        prop_assert_eq!(head_decompose(&m).reassemble(), m);
    }

    #[test]
    fn every_reduct_has_smaller_measure(seed: u64) {
        let t = res(seed, 24);
        for r in redexes(&t) {
            let before = bold_ms(&t);
            for u in step_r::<Nat>(&t, &r.path).unwrap().terms() {
                prop_assert!(bold_ms(u) < before, "{t} -> {u}");
            }
        }
    }

    #[test]
    fn reduction_commutes_with_taking_support(seed: u64) {
        let t = res(seed, 20);
        let nat = normalize_term::<Nat>(&t);
        prop_assert_eq!(nat.support(), normalize_term::<Bool>(&t));
        for r in redexes(&t) {
            let s = step_r::<Nat>(&t, &r.path).unwrap();
            prop_assert_eq!(s.support(), step_r::<Bool>(&t, &r.path).unwrap());
        }
    }

    #[test]
    fn reduction_under_a_context(seed: u64) {
        let mut g = Generator::with_seed(seed);
        let t = g.res_term(10);
        // a context built by descending through heads and binders only
        let outer = g.res_term(10);
        let mut hole = Vec::new();
        let mut cur = &outer;
        while let Some(next) = cur.subterm(&[0]) {
            if !g.rng().gen_bool(0.6) {
                break;
            }
            hole.push(0);
            cur = next;
        }
        let c = ResContext { skeleton: outer.replace_at(&hole, &ResTerm::var(ResContext::HOLE)).unwrap(), hole: hole.clone() };
        for r in redexes(&t) {
            let inner = step_r::<Nat>(&t, &r.path).unwrap();
            let expected = inner.map_terms(|u| c.fill(u));
            let path: Vec<u32> = hole.iter().chain(&r.path).copied().collect();
            prop_assert_eq!(step_r::<Nat>(&c.fill(&t), &path).unwrap(), expected);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn oracle_sink_is_the_normal_form(seed: u64) {
        let t = res(seed, 12);
        let g = explore(&Sum::<Nat>::term(t.clone()), StepMode::Whole, 50_000).unwrap();
        prop_assert!(g.is_acyclic());
        prop_assert_eq!(g.unique_sink().unwrap(), &normalize_term::<Nat>(&t));
    }

    #[test]
    fn normal_forms_of_approximants_are_covered_by_a_reduct(seed: u64) {
        let m = closed_lamu(seed, 8);
        for s in taylor_enum(&m, &Budget { max_size: 8, max_count: Some(40) }) {
            let nf: BTreeSet<ResTerm> = normalize_term::<Bool>(&s).terms().cloned().collect();
            for h in nf {
                let targets = BTreeSet::from([h.clone()]);
                prop_assert!(find_covering_reduct(&m, &targets, 20_000).is_some(), "{h} from {s} of {m}");
            }
        }
    }

    #[test]
    fn head_step_commutes_with_expansion(seed: u64) {
        let m = lamu_term(seed, 8);
        if let Ok(c) = taylor_head_commute_check(&m, &Budget::size(6)) {
            prop_assert!(c.holds, "{m}: {:?}", c.witness);
        }
    }

    #[test]
    fn expansion_of_substitution(seed: u64) {
        let mut g = Generator::with_seed(seed);
        let m = g.term(6);
        let n = g.term(4);
        prop_assert_eq!(substitution_expansion_check(&m, "x", &n, &Budget::size(8)), None);
    }

    #[test]
    fn expansion_of_named_application(seed: u64) {
        let mut g = Generator::with_seed(seed);
        let m = g.term(6);
        let n = g.term(4);
        prop_assert_eq!(named_app_expansion_check(&m, "a", &n, &Budget::size(8)), None);
    }

    #[test]
    fn one_step_reducts_of_approximants_stay_in_the_expansion(seed: u64) {
        let m = lamu_term(seed, 9);
        for r in lamu::redexes(&m) {
            let n = lamu::reduce_redex(&m, &r.path).unwrap();
            for s in taylor_enum(&m, &Budget { max_size: 9, max_count: Some(200) }) {
                let reduct = mulam_core::taylor::simulate_step(&s, &m, &r.path).unwrap();
                for u in reduct.terms() {
                    prop_assert!(taylor_member(u, &n));
                }
            }
        }
    }
}
