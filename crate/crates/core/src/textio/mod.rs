//! Concrete syntax.
//!
//! ```text
//! term   ::= \x.term | mu 'a.<'b> term | term term | x | (term) | _1
//! res    ::= \x.res | mu 'a.<'b> res | res[res,...] | res 1 | x | (res)
//! sum    ::= 0 | [k*]res + ... + [k*]res
//! ```
//!
//! Printing chooses binder names deterministically, so equal values print
//! identically and `parse(print(v)) == v`.

mod lex;
mod parse;
mod print;

use std::fmt;

use serde::Serialize;
use serde_json::{json, Value};

use crate::sum::{Semiring, Sum};
use crate::syntax::{Bag, Context, Ref, ResTerm, Term};
use crate::Error;
use parse::Parser;
use print::Namer;

/// Byte offsets into the parsed text.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct SourceSpan {
    pub start: usize,
    pub end: usize,
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

/// Named resource syntax, as written.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum RawRes {
    Var(String),
    Lam(String, Box<RawRes>),
    App(Box<RawRes>, Vec<RawRes>),
    Mu(String, String, Box<RawRes>),
}

pub fn parse_context(src: &str) -> Result<Context, Error> {
    let mut p = Parser::new(src, true)?;
    let c = p.term()?;
    p.finish()?;
    Ok(c)
}

pub fn parse_term(src: &str) -> Result<Term, Error> {
    let mut p = Parser::new(src, false)?;
    let c = p.term()?;
    p.finish()?;
    Ok(context_to_term(&c))
}

pub fn parse_res_term(src: &str) -> Result<ResTerm, Error> {
    let mut p = Parser::new(src, false)?;
    let raw = p.res()?;
    p.finish()?;
    Ok(parse::resolve_res(&raw, &mut Vec::new(), &mut Vec::new()))
}

pub fn parse_sum<S: Semiring>(src: &str) -> Result<Sum<S>, Error> {
    let mut p = Parser::new(src, false)?;
    let addends = p.sum()?;
    p.finish()?;
    let mut out = Sum::zero();
    for (k, raw) in addends {
        out.add_term(parse::resolve_res(&raw, &mut Vec::new(), &mut Vec::new()), S::from_count(k));
    }
    Ok(out)
}

/// Resolves a hole-free context; panics on holes (callers check arity).
pub(crate) fn context_to_term(c: &Context) -> Term {
    parse::resolve_term(c, &mut Vec::new(), &mut Vec::new()).expect("context has no holes left")
}

pub(crate) fn term_to_context(t: &Term) -> Context {
    Namer::new(t).term(t)
}

pub fn res_to_raw(t: &ResTerm) -> RawRes {
    Namer::new(t).res(t)
}

/// A free identifier prints as itself, a bound one as its index.
impl fmt::Display for Ref {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ref::Free(s) => f.write_str(s),
            Ref::Bound(i) => write!(f, "#{i}"),
        }
    }
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        print::context_text(self, &mut s);
        f.write_str(&s)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", term_to_context(self))
    }
}

impl fmt::Display for RawRes {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        print::res_text(self, &mut s);
        f.write_str(&s)
    }
}

impl fmt::Display for ResTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", res_to_raw(self))
    }
}

impl fmt::Display for Bag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("1");
        }
        f.write_str("[")?;
        for (i, u) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{u}")?;
        }
        f.write_str("]")
    }
}

impl<S: Semiring> fmt::Display for Sum<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (t, c)) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if c.count() != 1 {
                write!(f, "{}*", c.count())?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

pub fn context_json(c: &Context) -> Value {
    match c {
        Context::Var(x) => json!({"tag": "Var", "name": x}),
        Context::Hole(i) => json!({"tag": "Hole", "index": i}),
        Context::Lam(x, b) => json!({"tag": "Lam", "var": x, "body": context_json(b)}),
        Context::App(g, a) => json!({"tag": "App", "fun": context_json(g), "arg": context_json(a)}),
        Context::Mu(a, n, b) => json!({"tag": "Mu", "binder": a, "named": n, "body": context_json(b)}),
    }
}

pub fn term_json(t: &Term) -> Value {
    context_json(&term_to_context(t))
}

fn raw_json(t: &RawRes) -> Value {
    match t {
        RawRes::Var(x) => json!({"tag": "Var", "name": x}),
        RawRes::Lam(x, b) => json!({"tag": "Lam", "var": x, "body": raw_json(b)}),
        RawRes::App(h, elems) => json!({
            "tag": "AppBag",
            "head": raw_json(h),
            "bag": elems.iter().map(raw_json).collect::<Vec<_>>(),
        }),
        RawRes::Mu(a, n, b) => json!({"tag": "Mu", "binder": a, "named": n, "body": raw_json(b)}),
    }
}

pub fn res_json(t: &ResTerm) -> Value {
    raw_json(&res_to_raw(t))
}

pub fn sum_json<S: Semiring>(s: &Sum<S>) -> Value {
    json!({
        "tag": "Sum",
        "semiring": S::TAG,
        "addends": s.iter().map(|(t, c)| json!({"coeff": c.count(), "term": res_json(t)})).collect::<Vec<_>>(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sum::{Bool, Nat};

    #[test]
    fn callcc_parses() {
        let t = parse_term("\\y. mu 'a.<'a> y (\\x. mu 'd.<'a> x)").unwrap();
        assert!(matches!(t, Term::Lam(_)));
        assert_eq!(t.to_string(), "\\x.mu 'a.<'a> x (\\y.mu 'b.<'a> y)");
        assert_eq!(parse_term(&t.to_string()).unwrap(), t);
    }

    #[test]
    fn resource_syntax() {
        let t = parse_res_term("(\\x. x[x])[y,z]").unwrap();
        assert!(matches!(&t, ResTerm::App(h, b) if matches!(**h, ResTerm::Lam(_)) && b.len() == 2));
        assert_eq!(parse_res_term("x [ y , z ]").unwrap().to_string(), "x[y,z]");
        assert_eq!(parse_res_term("x 1").unwrap().to_string(), "x 1");
        assert_eq!(Bag::empty().to_string(), "1");
        assert_eq!(Sum::<Bool>::zero().to_string(), "0");
        assert_eq!(parse_sum::<Nat>("0").unwrap(), Sum::zero());
    }

    #[test]
    fn errors_carry_spans() {
        let Err(Error::Parse { span, .. }) = parse_res_term("x[") else { panic!() };
        assert_eq!(span, SourceSpan { start: 2, end: 2 });
        let Err(Error::Parse { span, .. }) = parse_term("\\x x") else { panic!() };
        assert_eq!(span.start, 3);
        assert!(parse_res_term("x y").is_err());
        assert!(parse_term("mu 'a. x").is_err());
        assert!(parse_term("x _1").is_err());
        assert!(parse_context("x _1").is_ok());
    }

    #[test]
    fn printing_avoids_free_identifiers() {
        let t = parse_res_term("\\z. x[z]").unwrap();
        let s = t.to_string();
        assert_eq!(s, "\\y.x[y]");
        assert_eq!(parse_res_term(&s).unwrap(), t);
        let m = parse_term("mu 'q.<'a> x").unwrap();
        assert_eq!(m.to_string(), "mu 'b.<'a> x");
    }

    #[test]
    fn sums_print_coefficients() {
        let s: Sum<Nat> = parse_sum("x + 2*y + x").unwrap();
        assert_eq!(s.to_string(), "2*x + 2*y");
        let b: Sum<Bool> = parse_sum("x + 2*y + x").unwrap();
        assert_eq!(b.to_string(), "x + y");
    }

    #[test]
    fn json_is_tagged() {
        let v = res_json(&parse_res_term("x[y]").unwrap());
        assert_eq!(v["tag"], "AppBag");
        assert_eq!(v["bag"][0]["name"], "y");
        let c = context_json(&parse_context("\\x._1").unwrap());
        assert_eq!(c["body"]["tag"], "Hole");
    }
}
