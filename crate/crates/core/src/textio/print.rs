use std::collections::BTreeSet;
use std::fmt::Write;

use super::RawRes;
use crate::syntax::{Context, Ref, ResTerm, Sym, Syntax, Term};

const VAR_BASE: [&str; 6] = ["x", "y", "z", "w", "v", "u"];
const NAME_BASE: [&str; 8] = ["a", "b", "c", "d", "e", "f", "g", "h"];

fn candidate(base: &[&str], k: usize) -> String {
    if k < base.len() {
        base[k].to_string()
    } else {
        format!("{}{}", base[0], k - base.len() + 1)
    }
}

/// Chooses binder names by depth, skipping the free identifiers of the whole
/// term, so distinct binders on a path never clash and nothing is captured.
pub(crate) struct Namer {
    free_vars: BTreeSet<Sym>,
    free_names: BTreeSet<Sym>,
    vars: Vec<String>,
    names: Vec<String>,
}

fn nth_fresh(base: &[&str], avoid: &BTreeSet<Sym>, n: usize) -> String {
    let mut seen = 0;
    for k in 0.. {
        let c = candidate(base, k);
        if avoid.contains(c.as_str()) || c == "mu" {
            continue;
        }
        if seen == n {
            return c;
        }
        seen += 1;
    }
    unreachable!()
}

impl Namer {
    pub(crate) fn new<T: Syntax>(t: &T) -> Namer {
        Namer { free_vars: t.free_vars(), free_names: t.free_names(), vars: Vec::new(), names: Vec::new() }
    }

    fn push_var(&mut self) -> String {
        let x = nth_fresh(&VAR_BASE, &self.free_vars, self.vars.len());
        self.vars.push(x.clone());
        x
    }

    fn push_name(&mut self) -> String {
        let a = nth_fresh(&NAME_BASE, &self.free_names, self.names.len());
        self.names.push(a.clone());
        a
    }

    fn var(&self, r: &Ref) -> String {
        show(&self.vars, r)
    }

    fn name(&self, r: &Ref) -> String {
        show(&self.names, r)
    }

    pub(crate) fn term(&mut self, t: &Term) -> Context {
        match t {
            Term::Var(r) => Context::Var(self.var(r)),
            Term::Lam(b) => {
                let x = self.push_var();
                let body = self.term(b);
                self.vars.pop();
                Context::Lam(x, Box::new(body))
            }
            Term::App(f, a) => Context::App(Box::new(self.term(f)), Box::new(self.term(a))),
            Term::Mu(nm, b) => {
                let a = self.push_name();
                let named = self.name(nm);
                let body = self.term(b);
                self.names.pop();
                Context::Mu(a, named, Box::new(body))
            }
        }
    }

    pub(crate) fn res(&mut self, t: &ResTerm) -> RawRes {
        match t {
            ResTerm::Var(r) => RawRes::Var(self.var(r)),
            ResTerm::Lam(b) => {
                let x = self.push_var();
                let body = self.res(b);
                self.vars.pop();
                RawRes::Lam(x, Box::new(body))
            }
            ResTerm::App(h, bag) => RawRes::App(Box::new(self.res(h)), bag.iter().map(|u| self.res(u)).collect()),
            ResTerm::Mu(nm, b) => {
                let a = self.push_name();
                let named = self.name(nm);
                let body = self.res(b);
                self.names.pop();
                RawRes::Mu(a, named, Box::new(body))
            }
        }
    }
}

fn show(stack: &[String], r: &Ref) -> String {
    match r {
        Ref::Free(s) => s.to_string(),
        Ref::Bound(i) => {
            let i = *i as usize;
            if i < stack.len() {
                stack[stack.len() - 1 - i].clone()
            } else {
                format!("?{}", i - stack.len())
            }
        }
    }
}

pub(crate) fn context_text(c: &Context, out: &mut String) {
    match c {
        Context::Var(x) => out.push_str(x),
        Context::Hole(i) => {
            let _ = write!(out, "_{i}");
        }
        Context::Lam(x, b) => {
            let _ = write!(out, "\\{x}.");
            context_text(b, out);
        }
        Context::Mu(a, n, b) => {
            let _ = write!(out, "mu '{a}.<'{n}> ");
            context_text(b, out);
        }
        Context::App(f, a) => {
            match **f {
                Context::Lam(..) | Context::Mu(..) => paren(out, |o| context_text(f, o)),
                _ => context_text(f, out),
            }
            out.push(' ');
            match **a {
                Context::Var(_) | Context::Hole(_) => context_text(a, out),
                _ => paren(out, |o| context_text(a, o)),
            }
        }
    }
}

fn paren(out: &mut String, f: impl FnOnce(&mut String)) {
    out.push('(');
    f(out);
    out.push(')');
}

pub(crate) fn res_text(t: &RawRes, out: &mut String) {
    match t {
        RawRes::Var(x) => out.push_str(x),
        RawRes::Lam(x, b) => {
            let _ = write!(out, "\\{x}.");
            res_text(b, out);
        }
        RawRes::Mu(a, n, b) => {
            let _ = write!(out, "mu '{a}.<'{n}> ");
            res_text(b, out);
        }
        RawRes::App(h, elems) => {
            match **h {
                RawRes::Lam(..) | RawRes::Mu(..) => paren(out, |o| res_text(h, o)),
                _ => res_text(h, out),
            }
            if elems.is_empty() {
                out.push_str(" 1");
            } else {
                out.push('[');
                for (i, u) in elems.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    res_text(u, out);
                }
                out.push(']');
            }
        }
    }
}
