//! Exhaustive reduction graphs of resource sums, one addend stepping at a
//! time. Used to check unique normal forms and joinability by brute force.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde_json::{json, Value};

use crate::lamu::RedexKind;
use crate::resource::{redexes, step_sum_at, StepMode};
use crate::sum::{Semiring, Sum};
use crate::syntax::{Path, ResTerm};
use crate::{Error, Result};

pub const DEFAULT_NODE_CAP: usize = 50_000;

/// `MULAM_NODE_CAP` if set and valid, else [`DEFAULT_NODE_CAP`].
pub fn node_cap_from_env() -> usize {
    std::env::var("MULAM_NODE_CAP").ok().and_then(|v| v.trim().parse().ok()).unwrap_or(DEFAULT_NODE_CAP)
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub addend: ResTerm,
    pub path: Path,
    pub kind: RedexKind,
}

/// Every sum reachable from `nodes[0]`, in discovery order.
#[derive(Clone, Debug)]
pub struct ReductionGraph<S> {
    pub nodes: Vec<Sum<S>>,
    pub edges: Vec<Edge>,
    pub sinks: Vec<usize>,
}

pub fn explore<S: Semiring>(root: &Sum<S>, mode: StepMode, cap: usize) -> Result<ReductionGraph<S>> {
    let mut index: BTreeMap<Sum<S>, usize> = BTreeMap::new();
    let mut nodes = vec![root.clone()];
    index.insert(root.clone(), 0);
    let mut edges = Vec::new();
    let mut sinks = Vec::new();
    let mut seen_edges = BTreeSet::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let cur = nodes[i].clone();
        let mut out_degree = 0;
        for t in cur.terms() {
            for r in redexes(t) {
                let next = step_sum_at(&cur, t, &r.path, mode)?;
                let j = match index.get(&next) {
                    Some(&j) => j,
                    None => {
                        if nodes.len() >= cap {
                            return Err(Error::NodeCapExceeded(cap));
                        }
                        nodes.push(next.clone());
                        index.insert(next, nodes.len() - 1);
                        queue.push_back(nodes.len() - 1);
                        nodes.len() - 1
                    }
                };
                out_degree += 1;
                if seen_edges.insert((i, j, t.clone(), r.path.clone())) {
                    edges.push(Edge { from: i, to: j, addend: t.clone(), path: r.path, kind: r.kind });
                }
            }
        }
        if out_degree == 0 {
            sinks.push(i);
        }
    }
    sinks.sort_unstable();
    Ok(ReductionGraph { nodes, edges, sinks })
}

pub fn explore_term<S: Semiring>(t: &ResTerm, mode: StepMode, cap: usize) -> Result<ReductionGraph<S>> {
    explore(&Sum::term(t.clone()), mode, cap)
}

impl<S: Semiring> ReductionGraph<S> {
    pub fn root(&self) -> &Sum<S> {
        &self.nodes[0]
    }

    /// Kahn's algorithm; a leftover node lies on a cycle.
    pub fn is_acyclic(&self) -> bool {
        let mut indeg = vec![0usize; self.nodes.len()];
        let mut succ = vec![Vec::new(); self.nodes.len()];
        for e in &self.edges {
            indeg[e.to] += 1;
            succ[e.from].push(e.to);
        }
        let mut ready: Vec<usize> = (0..self.nodes.len()).filter(|&i| indeg[i] == 0).collect();
        let mut done = 0;
        while let Some(i) = ready.pop() {
            done += 1;
            for &j in &succ[i] {
                indeg[j] -= 1;
                if indeg[j] == 0 {
                    ready.push(j);
                }
            }
        }
        done == self.nodes.len()
    }

    /// The only sink, or two distinct ones.
    pub fn unique_sink(&self) -> std::result::Result<&Sum<S>, (&Sum<S>, &Sum<S>)> {
        match self.sinks.as_slice() {
            [i] => Ok(&self.nodes[*i]),
            [i, j, ..] => Err((&self.nodes[*i], &self.nodes[*j])),
            [] => unreachable!("a finite graph explored to completion has a sink"),
        }
    }

    pub fn contains(&self, s: &Sum<S>) -> bool {
        self.nodes.contains(s)
    }

    /// Adjacency listing: printed sums plus labelled edges.
    pub fn to_json(&self) -> Value {
        json!({
            "semiring": S::TAG,
            "nodes": self.nodes.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
            "edges": self.edges.iter().map(|e| json!({
                "from": e.from,
                "to": e.to,
                "addend": e.addend.to_string(),
                "path": e.path,
                "kind": e.kind,
            })).collect::<Vec<_>>(),
            "sinks": self.sinks,
        })
    }
}

/// Whether `a` and `b` have a common reduct.
pub fn joinable<S: Semiring>(a: &Sum<S>, b: &Sum<S>, mode: StepMode, cap: usize) -> Result<bool> {
    let ga = explore(a, mode, cap)?;
    let gb = explore(b, mode, cap)?;
    let na: BTreeSet<&Sum<S>> = ga.nodes.iter().collect();
    Ok(gb.nodes.iter().any(|s| na.contains(s)))
}

/// Whether `a ↠ b`.
pub fn reaches<S: Semiring>(a: &Sum<S>, b: &Sum<S>, mode: StepMode, cap: usize) -> Result<bool> {
    Ok(explore(a, mode, cap)?.contains(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::resource::normalize;
    use crate::sum::{Bool, Nat};
    use crate::textio::{parse_res_term, parse_sum};

    fn boo(s: &str) -> Sum<Bool> {
        parse_sum(s).unwrap()
    }
    fn nat(s: &str) -> Sum<Nat> {
        parse_sum(s).unwrap()
    }

    #[test]
    fn small_graphs() {
        let g = explore(&boo("(\\x.x)[y]"), StepMode::Whole, 100).unwrap();
        assert_eq!(g.nodes.len(), 2);
        assert_eq!(g.unique_sink().unwrap(), &boo("y"));
        let g = explore(&boo("x"), StepMode::Whole, 100).unwrap();
        assert_eq!((g.nodes.len(), g.sinks.clone()), (1, vec![0]));
        assert!(g.is_acyclic());
    }

    #[test]
    fn quantitative_example_has_one_sink() {
        let t = nat("(mu 'a.<'a> mu 'e.<'a> x)[y,y]");
        let g = explore(&t, StepMode::Whole, 1000).unwrap();
        assert!(g.is_acyclic());
        assert_eq!(g.unique_sink().unwrap(), &normalize(&t));
        let gb = explore(&t.support(), StepMode::Whole, 1000).unwrap();
        assert_eq!(gb.unique_sink().unwrap(), &g.unique_sink().unwrap().support());
    }

    #[test]
    fn cap_overflow_is_reported() {
        let t = boo("(mu 'a.<'a> mu 'e.<'a> x)[y,y]");
        assert_eq!(explore(&t, StepMode::Whole, 1).unwrap_err(), Error::NodeCapExceeded(1));
    }

    #[test]
    fn rho_mu_critical_pair_closes() {
        let t = parse_res_term("(mu 'a.<'a> mu 'g.<'a> x)[y]").unwrap();
        let rs = redexes(&t);
        assert_eq!(rs.len(), 2);
        let left = step_sum_at(&Sum::<Nat>::term(t.clone()), &t, &rs[0].path, StepMode::Whole).unwrap();
        let right = step_sum_at(&Sum::<Nat>::term(t.clone()), &t, &rs[1].path, StepMode::Whole).unwrap();
        assert_ne!(left, right);
        assert!(joinable(&left, &right, StepMode::Whole, 1000).unwrap());
    }

    #[test]
    fn distinct_normal_forms_do_not_join() {
        assert!(!joinable(&boo("(\\x.x[x])[y]"), &boo("z"), StepMode::Whole, 100).unwrap());
        let t = boo("(\\x.(\\y.y)[x])[z]");
        assert!(joinable(&t, &normalize(&t), StepMode::Whole, 100).unwrap());
        assert!(reaches(&t, &boo("z"), StepMode::Whole, 100).unwrap());
    }

    #[test]
    fn json_export_lists_edges() {
        let g = explore(&boo("(\\x.x)[y]"), StepMode::Whole, 10).unwrap();
        let v = g.to_json();
        assert_eq!(v["nodes"][1], "y");
        assert_eq!(v["edges"][0]["kind"], "lambda");
        assert_eq!(v["sinks"][0], 1);
    }
}
