//! Seeded random generation of λμ-terms and resource terms.

use std::sync::Arc;

use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::syntax::{Bag, Ref, ResTerm, Syntax, Term};

/// Relative constructor weights.
#[derive(Clone, Copy, Debug)]
pub struct Weights {
    pub var: u32,
    pub lam: u32,
    pub app: u32,
    pub mu: u32,
}

#[derive(Clone, Debug)]
pub struct GenConfig {
    pub weights: Weights,
    /// Weights of bag lengths `0, 1, 2, ...`.
    pub bag_len: Vec<u32>,
    pub max_mu_depth: usize,
    /// Probability that an application head is built as a λ or μ.
    pub redex_bias: f64,
    /// Probability that a μ body is itself a μ.
    pub rho_bias: f64,
    /// Chance that a redex bag matches what its head can consume.
    pub balance_bias: f64,
    pub closed: bool,
    pub free_vars: Vec<String>,
    pub free_names: Vec<String>,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            weights: Weights { var: 3, lam: 2, app: 3, mu: 2 },
            bag_len: vec![3, 4, 2],
            max_mu_depth: 3,
            redex_bias: 0.4,
            rho_bias: 0.2,
            balance_bias: 0.85,
            closed: false,
            free_vars: vec!["x".into(), "y".into(), "z".into()],
            free_names: vec!["a".into(), "b".into()],
        }
    }
}

/// Mixes a base seed with a sample index.
pub fn sample_seed(seed: u64, index: u64) -> u64 {
    seed ^ index.wrapping_add(1).wrapping_mul(0x9e37_79b9_7f4a_7c15)
}

#[derive(Clone, Copy, Debug)]
enum Shape {
    Var,
    Lam,
    App,
    Mu,
}

pub struct Generator {
    cfg: GenConfig,
    rng: ChaCha8Rng,
}

struct Scope {
    vars: u32,
    names: u32,
    mu_depth: usize,
}

impl Generator {
    pub fn new(cfg: GenConfig, seed: u64) -> Generator {
        Generator { cfg, rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn with_seed(seed: u64) -> Generator {
        Generator::new(GenConfig::default(), seed)
    }

    fn shape(&mut self, budget: usize, sc: &Scope) -> Shape {
        let w = self.cfg.weights;
        let big = budget >= 2;
        let can_var = sc.vars > 0 || !self.cfg.closed && !self.cfg.free_vars.is_empty();
        // leaves get rarer as the budget grows, so samples land near the requested size
        let var_w = if budget <= 2 { w.var * 4 } else { w.var * 4 / budget as u32 };
        let opts = [
            (Shape::Var, if can_var { var_w } else { 0 }),
            (Shape::Lam, if big { w.lam } else { 0 }),
            (Shape::App, if big { w.app } else { 0 }),
            (Shape::Mu, if big && sc.mu_depth < self.cfg.max_mu_depth { w.mu } else { 0 }),
        ];
        match WeightedIndex::new(opts.iter().map(|o| o.1)) {
            Ok(d) => opts[d.sample(&mut self.rng)].0,
            // nothing fits: a closed scope at budget 1
            Err(_) => Shape::Var,
        }
    }

    fn var_ref(&mut self, sc: &Scope) -> Ref {
        let free = if self.cfg.closed { 0 } else { self.cfg.free_vars.len() as u32 };
        let k = self.rng.gen_range(0..(sc.vars + free).max(1));
        if k < sc.vars {
            Ref::Bound(k)
        } else if free > 0 {
            Ref::free(&self.cfg.free_vars[(k - sc.vars) as usize])
        } else {
            // only reached for a closed term with no binder in scope
            Ref::free(self.cfg.free_vars.first().map_or("x", String::as_str))
        }
    }

    fn name_ref(&mut self, sc: &Scope) -> Ref {
        // the μ being built binds index 0
        let bound = sc.names + 1;
        let free = if self.cfg.closed { 0 } else { self.cfg.free_names.len() as u32 };
        let k = self.rng.gen_range(0..bound + free);
        if k < bound {
            Ref::Bound(k)
        } else {
            Ref::free(&self.cfg.free_names[(k - bound) as usize])
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// Like [`Generator::res_term`] with the given free identifiers, which
    /// may be empty.
    pub fn res_over(&mut self, budget: usize, vars: &[&str], names: &[&str]) -> ResTerm {
        let saved = (self.cfg.free_vars.clone(), self.cfg.free_names.clone(), self.cfg.closed);
        self.cfg.free_vars = vars.iter().map(|s| s.to_string()).collect();
        self.cfg.free_names = names.iter().map(|s| s.to_string()).collect();
        self.cfg.closed = false;
        let t = self.res(budget.max(1), &Scope { vars: 0, names: 0, mu_depth: 0 });
        (self.cfg.free_vars, self.cfg.free_names, self.cfg.closed) = saved;
        t
    }

    /// A resource term of size at most `budget` (at least 1).
    pub fn res_term(&mut self, budget: usize) -> ResTerm {
        let t = self.res(budget.max(1), &Scope { vars: 0, names: 0, mu_depth: 0 });
        if self.cfg.closed {
            close_res(t)
        } else {
            t
        }
    }

    fn res(&mut self, budget: usize, sc: &Scope) -> ResTerm {
        match self.shape(budget, sc) {
            Shape::Var => ResTerm::Var(self.var_ref(sc)),
            Shape::Lam => ResTerm::Lam(Arc::new(self.res(budget - 1, &Scope { vars: sc.vars + 1, ..*sc }))),
            Shape::Mu => self.res_mu(budget, sc),
            Shape::App => {
                let max_len = (budget - 2) / 2;
                let lens = &self.cfg.bag_len[..self.cfg.bag_len.len().min(max_len + 1)];
                let k = WeightedIndex::new(lens).map_or(0, |d| d.sample(&mut self.rng));
                // head gets at least 1, each element at least 2 (itself plus its slot)
                let spare = budget - 1 - 1 - 2 * k;
                let mut cuts: Vec<usize> = (0..=k).map(|_| 0).collect();
                for _ in 0..spare {
                    if self.rng.gen_bool(0.9) {
                        let i = self.rng.gen_range(0..=k);
                        cuts[i] += 1;
                    }
                }
                let head = self.res_head(1 + cuts[0], sc);
                // a bag that misses the variable count kills the redex at once, so
                // usually match it
                let wanted = match &head {
                    ResTerm::Lam(body) => Some(body.degree_var(&Ref::Bound(0))),
                    ResTerm::Mu(a, body) if *a != Ref::Bound(0) && body.degree_name(&Ref::Bound(0)) == 0 => Some(0),
                    _ => None,
                };
                if let Some(d) = wanted {
                    let room = budget - 1 - head.size();
                    if d != k && 2 * d <= room && self.rng.gen_bool(self.cfg.balance_bias) {
                        let mut cuts = vec![0; d];
                        for _ in 0..room - 2 * d {
                            if d > 0 && self.rng.gen_bool(0.9) {
                                let i = self.rng.gen_range(0..d);
                                cuts[i] += 1;
                            }
                        }
                        let elems: Vec<ResTerm> = cuts.iter().map(|c| self.res(1 + c, sc)).collect();
                        return ResTerm::App(Arc::new(head), Bag::new(elems));
                    }
                }
                let elems: Vec<ResTerm> = (1..=k).map(|i| self.res(1 + cuts[i], sc)).collect();
                ResTerm::App(Arc::new(head), Bag::new(elems))
            }
        }
    }

    fn res_head(&mut self, budget: usize, sc: &Scope) -> ResTerm {
        if budget >= 2 && self.rng.gen_bool(self.cfg.redex_bias) {
            if sc.mu_depth < self.cfg.max_mu_depth && self.rng.gen_bool(0.5) {
                return self.res_mu(budget, sc);
            }
            return ResTerm::Lam(Arc::new(self.res(budget - 1, &Scope { vars: sc.vars + 1, ..*sc })));
        }
        self.res(budget, sc)
    }

    fn res_mu(&mut self, budget: usize, sc: &Scope) -> ResTerm {
        let named = self.name_ref(sc);
        let inner = Scope { vars: sc.vars, names: sc.names + 1, mu_depth: sc.mu_depth + 1 };
        let body = if budget >= 3 && inner.mu_depth < self.cfg.max_mu_depth && self.rng.gen_bool(self.cfg.rho_bias) {
            self.res_mu(budget - 1, &inner)
        } else {
            self.res(budget - 1, &inner)
        };
        ResTerm::Mu(named, Arc::new(body))
    }

    /// A λμ-term of size at most `budget` (at least 1).
    pub fn term(&mut self, budget: usize) -> Term {
        let t = self.lamu(budget.max(1), &Scope { vars: 0, names: 0, mu_depth: 0 });
        if self.cfg.closed {
            close_term(t)
        } else {
            t
        }
    }

    fn lamu(&mut self, budget: usize, sc: &Scope) -> Term {
        match self.shape(budget, sc) {
            Shape::Var => Term::Var(self.var_ref(sc)),
            Shape::Lam => Term::Lam(Arc::new(self.lamu(budget - 1, &Scope { vars: sc.vars + 1, ..*sc }))),
            Shape::Mu => self.lamu_mu(budget, sc),
            Shape::App if budget < 3 => Term::Var(self.var_ref(sc)),
            Shape::App => {
                let head_budget = self.rng.gen_range(1..budget - 1);
                let head = if head_budget >= 2 && self.rng.gen_bool(self.cfg.redex_bias) {
                    if sc.mu_depth < self.cfg.max_mu_depth && self.rng.gen_bool(0.4) {
                        self.lamu_mu(head_budget, sc)
                    } else {
                        Term::Lam(Arc::new(self.lamu(head_budget - 1, &Scope { vars: sc.vars + 1, ..*sc })))
                    }
                } else {
                    self.lamu(head_budget, sc)
                };
                let arg = self.lamu(budget - 1 - head_budget, sc);
                Term::App(Arc::new(head), Arc::new(arg))
            }
        }
    }

    fn lamu_mu(&mut self, budget: usize, sc: &Scope) -> Term {
        let named = self.name_ref(sc);
        let inner = Scope { vars: sc.vars, names: sc.names + 1, mu_depth: sc.mu_depth + 1 };
        let body = if budget >= 3 && inner.mu_depth < self.cfg.max_mu_depth && self.rng.gen_bool(self.cfg.rho_bias) {
            self.lamu_mu(budget - 1, &inner)
        } else {
            self.lamu(budget - 1, &inner)
        };
        Term::Mu(named, Arc::new(body))
    }
}

fn close_res(t: ResTerm) -> ResTerm {
    let free: Vec<_> = t.free_vars().into_iter().collect();
    free.iter().rev().fold(t, |acc, x| ResTerm::Lam(Arc::new(acc.close_var(x))))
}

fn close_term(t: Term) -> Term {
    let free: Vec<_> = t.free_vars().into_iter().collect();
    free.iter().rev().fold(t, |acc, x| Term::Lam(Arc::new(acc.close_var(x))))
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Kind {
    Term,
    ResTerm,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Generated {
    Term(Term),
    ResTerm(ResTerm),
}

pub fn gen_random(kind: Kind, size: usize, seed: u64) -> Generated {
    let mut g = Generator::with_seed(seed);
    match kind {
        Kind::Term => Generated::Term(g.term(size)),
        Kind::ResTerm => Generated::ResTerm(g.res_term(size)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_term() {
        assert_eq!(gen_random(Kind::ResTerm, 20, 3), gen_random(Kind::ResTerm, 20, 3));
        assert_eq!(gen_random(Kind::Term, 20, 3), gen_random(Kind::Term, 20, 3));
    }

    #[test]
    fn sizes_stay_within_budget() {
        for seed in 0..500 {
            for budget in [1, 2, 3, 7, 14, 30] {
                let mut g = Generator::with_seed(seed);
                let r = g.res_term(budget);
                assert!(r.size() <= budget, "{r} exceeds {budget}");
                assert!(r.is_locally_closed());
                let t = g.term(budget);
                assert!(t.size() <= budget, "{t} exceeds {budget}");
                assert!(t.is_locally_closed());
            }
        }
    }

    #[test]
    fn closed_terms_have_no_free_variables() {
        let cfg = GenConfig { closed: true, ..GenConfig::default() };
        for seed in 0..200 {
            let mut g = Generator::new(cfg.clone(), seed);
            assert!(g.term(12).free_vars().is_empty());
            let r = g.res_term(12);
            assert!(r.free_vars().is_empty() && r.free_names().is_empty());
        }
    }

    #[test]
    fn all_resource_constructors_appear() {
        // variable, abstraction, μ, application to an empty bag and to a nonempty bag
        let mut seen = [false; 5];
        fn visit(t: &ResTerm, seen: &mut [bool; 5]) {
            match t {
                ResTerm::Var(_) => seen[0] = true,
                ResTerm::Lam(b) => {
                    seen[1] = true;
                    visit(b, seen);
                }
                ResTerm::Mu(_, b) => {
                    seen[2] = true;
                    visit(b, seen);
                }
                ResTerm::App(h, bag) => {
                    seen[if bag.is_empty() { 3 } else { 4 }] = true;
                    visit(h, seen);
                    bag.iter().for_each(|u| visit(u, seen));
                }
            }
        }
        for seed in 0..1000 {
            visit(&Generator::with_seed(seed).res_term(10), &mut seen);
        }
        assert_eq!(seen, [true; 5]);
    }
}
