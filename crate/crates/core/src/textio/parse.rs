use std::sync::Arc;

use super::lex::{lex, Tok};
use super::{RawRes, SourceSpan};
use crate::syntax::{Bag, Context, Ref, ResTerm, Term};
use crate::Error;

pub(crate) struct Parser {
    toks: Vec<(Tok, SourceSpan)>,
    pos: usize,
    holes: bool,
}

type PResult<T> = Result<T, Error>;

impl Parser {
    pub(crate) fn new(src: &str, holes: bool) -> PResult<Parser> {
        Ok(Parser { toks: lex(src)?, pos: 0, holes })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn span(&self) -> SourceSpan {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, expected: &str) -> PResult<T> {
        Err(Error::Parse {
            span: self.span(),
            message: format!("expected {expected}, found {}", self.peek().describe()),
        })
    }

    fn expect(&mut self, t: Tok, what: &str) -> PResult<()> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            self.error(what)
        }
    }

    fn ident(&mut self) -> PResult<String> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            _ => self.error("a variable"),
        }
    }

    fn name(&mut self) -> PResult<String> {
        match self.peek().clone() {
            Tok::Name(s) => {
                self.bump();
                Ok(s)
            }
            _ => self.error("a name like 'a"),
        }
    }

    pub(crate) fn finish(&mut self) -> PResult<()> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            self.error("end of input")
        }
    }

    /// `mu 'a.<'b>` header, returning `(binder, named)`.
    fn mu_header(&mut self) -> PResult<(String, String)> {
        self.expect(Tok::Mu, "`mu`")?;
        let a = self.name()?;
        self.expect(Tok::Dot, "`.`")?;
        self.expect(Tok::LAngle, "`<`")?;
        let b = self.name()?;
        self.expect(Tok::RAngle, "`>`")?;
        Ok((a, b))
    }

    fn lam_header(&mut self) -> PResult<String> {
        self.expect(Tok::Backslash, "`\\`")?;
        let x = self.ident()?;
        self.expect(Tok::Dot, "`.`")?;
        Ok(x)
    }

    pub(crate) fn term(&mut self) -> PResult<Context> {
        match self.peek() {
            Tok::Backslash => {
                let x = self.lam_header()?;
                Ok(Context::Lam(x, Box::new(self.term()?)))
            }
            Tok::Mu => {
                let (a, b) = self.mu_header()?;
                Ok(Context::Mu(a, b, Box::new(self.term()?)))
            }
            _ => {
                let mut acc = self.atom()?;
                loop {
                    match self.peek() {
                        Tok::Ident(_) | Tok::Hole(_) | Tok::LParen => {
                            let a = self.atom()?;
                            acc = Context::App(Box::new(acc), Box::new(a));
                        }
                        Tok::Backslash | Tok::Mu => {
                            let a = self.term()?;
                            return Ok(Context::App(Box::new(acc), Box::new(a)));
                        }
                        _ => return Ok(acc),
                    }
                }
            }
        }
    }

    fn atom(&mut self) -> PResult<Context> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(Context::Var(s))
            }
            Tok::Hole(i) if self.holes => {
                if i == 0 {
                    return self.error("a hole index starting at 1");
                }
                self.bump();
                Ok(Context::Hole(i))
            }
            Tok::LParen => {
                self.bump();
                let t = self.term()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(t)
            }
            _ => self.error("a term"),
        }
    }

    pub(crate) fn res(&mut self) -> PResult<RawRes> {
        match self.peek() {
            Tok::Backslash => {
                let x = self.lam_header()?;
                Ok(RawRes::Lam(x, Box::new(self.res()?)))
            }
            Tok::Mu => {
                let (a, b) = self.mu_header()?;
                Ok(RawRes::Mu(a, b, Box::new(self.res()?)))
            }
            _ => {
                let mut acc = match self.peek().clone() {
                    Tok::Ident(s) => {
                        self.bump();
                        RawRes::Var(s)
                    }
                    Tok::LParen => {
                        self.bump();
                        let t = self.res()?;
                        self.expect(Tok::RParen, "`)`")?;
                        t
                    }
                    _ => return self.error("a resource term"),
                };
                loop {
                    match self.peek() {
                        Tok::Num(1) => {
                            self.bump();
                            acc = RawRes::App(Box::new(acc), Vec::new());
                        }
                        Tok::LBracket => {
                            self.bump();
                            let mut elems = Vec::new();
                            if *self.peek() != Tok::RBracket {
                                elems.push(self.res()?);
                                while *self.peek() == Tok::Comma {
                                    self.bump();
                                    elems.push(self.res()?);
                                }
                            }
                            self.expect(Tok::RBracket, "`,` or `]`")?;
                            acc = RawRes::App(Box::new(acc), elems);
                        }
                        Tok::Ident(_) | Tok::LParen | Tok::Backslash | Tok::Mu => {
                            return self.error("a bag `[...]` or `1` (resource application takes bags)");
                        }
                        _ => return Ok(acc),
                    }
                }
            }
        }
    }

    /// `addend (+ addend)*`, each with an optional `k*` coefficient; `0` is
    /// the empty sum.
    pub(crate) fn sum(&mut self) -> PResult<Vec<(u64, RawRes)>> {
        let mut out = Vec::new();
        loop {
            match self.peek().clone() {
                Tok::Num(0) if !matches!(self.toks[self.pos + 1].0, Tok::Star) => {
                    self.bump();
                }
                Tok::Num(k) => {
                    self.bump();
                    self.expect(Tok::Star, "`*` after a coefficient")?;
                    out.push((k, self.res()?));
                }
                _ => out.push((1, self.res()?)),
            }
            if *self.peek() == Tok::Plus {
                self.bump();
            } else {
                return Ok(out);
            }
        }
    }
}

fn lookup(stack: &[String], x: &str) -> Ref {
    match stack.iter().rev().position(|y| y == x) {
        Some(i) => Ref::Bound(i as u32),
        None => Ref::free(x),
    }
}

pub(crate) fn resolve_res(raw: &RawRes, vars: &mut Vec<String>, names: &mut Vec<String>) -> ResTerm {
    match raw {
        RawRes::Var(x) => ResTerm::Var(lookup(vars, x)),
        RawRes::Lam(x, b) => {
            vars.push(x.clone());
            let body = resolve_res(b, vars, names);
            vars.pop();
            ResTerm::Lam(Arc::new(body))
        }
        RawRes::App(h, elems) => {
            let head = resolve_res(h, vars, names);
            let bag = Bag::new(elems.iter().map(|u| resolve_res(u, vars, names)).collect());
            ResTerm::App(Arc::new(head), bag)
        }
        RawRes::Mu(a, b, body) => {
            names.push(a.clone());
            let named = lookup(names, b);
            let body = resolve_res(body, vars, names);
            names.pop();
            ResTerm::Mu(named, Arc::new(body))
        }
    }
}

/// Resolves a hole-free named tree; `None` if a hole remains.
pub(crate) fn resolve_term(c: &Context, vars: &mut Vec<String>, names: &mut Vec<String>) -> Option<Term> {
    Some(match c {
        Context::Var(x) => Term::Var(lookup(vars, x)),
        Context::Hole(_) => return None,
        Context::Lam(x, b) => {
            vars.push(x.clone());
            let body = resolve_term(b, vars, names);
            vars.pop();
            Term::Lam(Arc::new(body?))
        }
        Context::App(f, a) => Term::app(resolve_term(f, vars, names)?, resolve_term(a, vars, names)?),
        Context::Mu(a, b, body) => {
            names.push(a.clone());
            let named = lookup(names, b);
            let body = resolve_term(body, vars, names);
            names.pop();
            Term::Mu(named, Arc::new(body?))
        }
    })
}
