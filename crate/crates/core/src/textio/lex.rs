use super::SourceSpan;
use crate::Error;

#[derive(Clone, PartialEq, Eq, Debug)]
pub(crate) enum Tok {
    Ident(String),
    Name(String),
    Hole(usize),
    Num(u64),
    Mu,
    Backslash,
    Dot,
    LAngle,
    RAngle,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Plus,
    Star,
    Eof,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("variable `{s}`"),
            Tok::Name(s) => format!("name `'{s}`"),
            Tok::Hole(i) => format!("hole `_{i}`"),
            Tok::Num(n) => format!("number `{n}`"),
            Tok::Mu => "`mu`".into(),
            Tok::Backslash => "`\\`".into(),
            Tok::Dot => "`.`".into(),
            Tok::LAngle => "`<`".into(),
            Tok::RAngle => "`>`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Star => "`*`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

fn ident_tail(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

fn take_while(
    it: &mut std::iter::Peekable<std::str::CharIndices<'_>>,
    first: usize,
    pred: &dyn Fn(char) -> bool,
) -> usize {
    let mut end = first;
    while let Some(&(i, c)) = it.peek() {
        if !pred(c) {
            break;
        }
        end = i + c.len_utf8();
        it.next();
    }
    end
}

pub(crate) fn lex(src: &str) -> Result<Vec<(Tok, SourceSpan)>, Error> {
    let mut out = Vec::new();
    let mut it = src.char_indices().peekable();
    while let Some(&(start, c)) = it.peek() {
        if c.is_whitespace() {
            it.next();
            continue;
        }
        let single = match c {
            '\\' | 'λ' => Some(Tok::Backslash),
            '.' => Some(Tok::Dot),
            '<' => Some(Tok::LAngle),
            '>' => Some(Tok::RAngle),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '[' => Some(Tok::LBracket),
            ']' => Some(Tok::RBracket),
            ',' => Some(Tok::Comma),
            '+' => Some(Tok::Plus),
            '*' => Some(Tok::Star),
            _ => None,
        };
        if let Some(t) = single {
            it.next();
            out.push((t, SourceSpan { start, end: start + c.len_utf8() }));
            continue;
        }
        if c.is_ascii_lowercase() {
            let end = take_while(&mut it, start, &ident_tail);
            let word = &src[start..end];
            let tok = if word == "mu" { Tok::Mu } else { Tok::Ident(word.to_string()) };
            out.push((tok, SourceSpan { start, end }));
        } else if c.is_ascii_digit() {
            let end = take_while(&mut it, start, &|c| c.is_ascii_digit());
            let n = src[start..end]
                .parse()
                .map_err(|_| Error::Parse { span: SourceSpan { start, end }, message: "number too large".into() })?;
            out.push((Tok::Num(n), SourceSpan { start, end }));
        } else if c == '\'' || c == '_' {
            it.next();
            let body_start = start + 1;
            let ok_first = match it.peek() {
                Some(&(_, d)) if c == '\'' => d.is_ascii_lowercase(),
                Some(&(_, d)) => d.is_ascii_digit(),
                None => false,
            };
            if !ok_first {
                let what = if c == '\'' { "a name like 'a" } else { "a hole like _1" };
                return Err(Error::Parse {
                    span: SourceSpan { start, end: body_start },
                    message: format!("expected {what}"),
                });
            }
            let end = if c == '\'' {
                take_while(&mut it, body_start, &ident_tail)
            } else {
                take_while(&mut it, body_start, &|c| c.is_ascii_digit())
            };
            let text = &src[body_start..end];
            let span = SourceSpan { start, end };
            if c == '\'' {
                out.push((Tok::Name(text.to_string()), span));
            } else {
                let i = text.parse().map_err(|_| Error::Parse { span, message: "hole index too large".into() })?;
                out.push((Tok::Hole(i), span));
            }
        } else {
            return Err(Error::Parse {
                span: SourceSpan { start, end: start + c.len_utf8() },
                message: format!("unexpected character `{c}`"),
            });
        }
    }
    out.push((Tok::Eof, SourceSpan { start: src.len(), end: src.len() }));
    Ok(out)
}
