//! Text syntax for polynomials.
//!
//! ```text
//! poly   := term (('+' | '-') term)*
//! term   := coeff? '*'? factor? ('^' int)?
//! factor := 'x' | '(' poly ')'
//! ```
//!
//! Coefficients use the element syntax (`1`, `g^k`, `0x…`, `0b…`). A
//! parenthesized factor must reduce to a sparse polynomial without expansion.
//! Whitespace is ignored.

use super::{CompositePoly, SparsePoly, Term};
use crate::error::{parse_err, Error, Result};
use crate::field::{Elem, FieldCtx};

struct Parser<'a> {
    ctx: &'a FieldCtx,
    src: String,
    // byte offset in the original text of each byte of `src`
    origin: Vec<usize>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(ctx: &'a FieldCtx, text: &str) -> Self {
        let mut src = String::new();
        let mut origin = Vec::new();
        for (i, ch) in text.char_indices() {
            if !ch.is_whitespace() {
                src.push(ch);
                origin.extend(std::iter::repeat_n(i, ch.len_utf8()));
            }
        }
        origin.push(text.len());
        Parser { ctx, src, origin, pos: 0 }
    }

    fn at(&self, pos: usize) -> usize {
        self.origin[pos.min(self.origin.len() - 1)]
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        parse_err(self.at(self.pos), msg)
    }

    fn peek(&self) -> Option<u8> {
        self.src.as_bytes().get(self.pos).copied()
    }

    fn poly(&mut self) -> Result<CompositePoly> {
        let mut terms = Vec::new();
        let mut negate = false;
        if self.peek() == Some(b'-') {
            negate = true;
            self.pos += 1;
        }
        loop {
            let mut t = self.term()?;
            if negate {
                t.coeff = self.ctx.neg(t.coeff);
            }
            terms.push(t);
            match self.peek() {
                Some(b'+') => negate = false,
                Some(b'-') => negate = true,
                _ => break,
            }
            self.pos += 1;
        }
        Ok(CompositePoly::new(terms))
    }

    fn term(&mut self) -> Result<Term> {
        let coeff = match self.peek() {
            Some(b'g') | Some(b'0'..=b'9') => {
                let (e, used) = self
                    .ctx
                    .parse_element_prefix(&self.src[self.pos..], self.at(self.pos))
                    .map_err(|e| match e {
                        Error::Parse { msg, .. } => self.err(msg),
                        other => other,
                    })?;
                self.pos += used;
                Some(e)
            }
            _ => None,
        };
        let starred = self.peek() == Some(b'*');
        if starred {
            if coeff.is_none() {
                return Err(self.err("'*' without a coefficient"));
            }
            self.pos += 1;
        }
        let base = match self.peek() {
            Some(b'x') => {
                self.pos += 1;
                Some(SparsePoly::x())
            }
            Some(b'(') => {
                let open = self.pos;
                self.pos += 1;
                let inner = self.poly()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Some(inner.to_sparse(self.ctx).ok_or_else(|| {
                    parse_err(
                        self.at(open),
                        "parenthesized expression must be a sparse polynomial (no nested powers of sums)",
                    )
                })?)
            }
            _ if starred => return Err(self.err("expected 'x' or '(' after '*'")),
            _ => None,
        };
        let exp = if self.peek() == Some(b'^') {
            if base.is_none() {
                return Err(self.err("an exponent must follow 'x' or a parenthesized factor"));
            }
            self.pos += 1;
            self.int()?
        } else {
            1
        };
        match (coeff, base) {
            (None, None) => Err(self.err("expected a term")),
            (Some(c), None) => Ok(Term::constant(c)),
            (c, Some(base)) => Ok(Term::new(c.unwrap_or(Elem::ONE), base, exp)),
        }
    }

    fn int(&mut self) -> Result<i64> {
        let start = self.pos;
        if self.peek() == Some(b'-') {
            self.pos += 1;
        }
        let digits = self.src[self.pos..]
            .bytes()
            .take_while(|b| b.is_ascii_digit())
            .count();
        if digits == 0 {
            return Err(self.err("expected an integer exponent"));
        }
        self.pos += digits;
        self.src[start..self.pos]
            .parse()
            .map_err(|_| parse_err(self.at(start), "exponent overflow"))
    }
}

/// Parses one polynomial in the text syntax.
pub fn parse_poly(ctx: &FieldCtx, text: &str) -> Result<CompositePoly> {
    let mut p = Parser::new(ctx, text);
    if p.src.is_empty() {
        return Err(parse_err(0, "empty polynomial"));
    }
    let f = p.poly()?;
    if p.pos != p.src.len() {
        return Err(p.err("unexpected input"));
    }
    Ok(f)
}

/// Parses text that must describe a sparse polynomial, e.g. `x + g^5`.
pub fn parse_sparse(ctx: &FieldCtx, text: &str) -> Result<SparsePoly> {
    parse_poly(ctx, text)?
        .to_sparse(ctx)
        .ok_or_else(|| parse_err(0, "expected a sparse polynomial"))
}

/// One polynomial per non-empty line; `#` starts a comment.
pub fn parse_poly_file(ctx: &FieldCtx, text: &str) -> Result<Vec<CompositePoly>> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("");
        if body.trim().is_empty() {
            continue;
        }
        let f = parse_poly(ctx, body).map_err(|e| match e {
            Error::Parse { pos, msg } => Error::Parse {
                pos,
                msg: format!("line {}: {msg}", lineno + 1),
            },
            other => other,
        })?;
        out.push(f);
    }
    Ok(out)
}
