//! Sparse polynomials and the composite expressions `sum c * base(x)^e`.
//!
//! Evaluation is pointwise under the field's exponent convention. Symbolic
//! expansion modulo `x^q - x` exists only as a cross-check for small fields.

mod parse;

pub use parse::{parse_poly, parse_poly_file, parse_sparse};

use crate::error::{Error, Result};
use crate::field::{Elem, FieldCtx};

/// Largest field order accepted by [`reduce_mod_field`].
pub const REDUCE_LIMIT: u32 = 1 << 12;

/// `sum c_i x^(e_i)` with strictly increasing exponents and nonzero
/// coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SparsePoly {
    terms: Vec<(u64, Elem)>,
}

impl SparsePoly {
    pub fn zero() -> Self {
        SparsePoly { terms: Vec::new() }
    }

    pub fn constant(c: Elem) -> Self {
        Self::monomial(c, 0)
    }

    pub fn one() -> Self {
        Self::constant(Elem::ONE)
    }

    /// The identity polynomial `x`.
    pub fn x() -> Self {
        Self::monomial(Elem::ONE, 1)
    }

    pub fn monomial(c: Elem, e: u64) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        SparsePoly { terms: vec![(e, c)] }
    }

    /// Collects `(exponent, coefficient)` pairs, combining like terms and
    /// dropping zeros.
    pub fn from_terms(ctx: &FieldCtx, terms: impl IntoIterator<Item = (u64, Elem)>) -> Self {
        let mut v: Vec<(u64, Elem)> = terms.into_iter().collect();
        v.sort_by_key(|t| t.0);
        let mut out: Vec<(u64, Elem)> = Vec::with_capacity(v.len());
        for (e, c) in v {
            match out.last_mut() {
                Some(last) if last.0 == e => last.1 = ctx.add(last.1, c),
                _ => out.push((e, c)),
            }
        }
        out.retain(|t| !t.1.is_zero());
        SparsePoly { terms: out }
    }

    pub fn terms(&self) -> &[(u64, Elem)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_x(&self) -> bool {
        self.terms == [(1, Elem::ONE)]
    }

    /// The constant value if the polynomial has no `x` terms.
    pub fn as_constant(&self) -> Option<Elem> {
        match self.terms.as_slice() {
            [] => Some(Elem::ZERO),
            [(0, c)] => Some(*c),
            _ => None,
        }
    }

    pub fn degree(&self) -> Option<u64> {
        self.terms.last().map(|t| t.0)
    }

    /// All exponents are below q, i.e. the polynomial is in reduced form
    /// modulo `x^q - x`.
    pub fn is_reduced(&self, ctx: &FieldCtx) -> bool {
        self.terms.iter().all(|t| t.0 < ctx.order() as u64)
    }

    #[inline]
    pub fn eval(&self, ctx: &FieldCtx, x: Elem) -> Elem {
        self.terms.iter().fold(Elem::ZERO, |acc, &(e, c)| {
            ctx.add(acc, ctx.mul(c, ctx.pow_u64(x, e)))
        })
    }

    /// `h(x^k)`.
    pub fn substitute_power(&self, k: u64) -> Self {
        SparsePoly {
            terms: self.terms.iter().map(|&(e, c)| (e * k, c)).collect(),
        }
    }

    /// `x^r * h(x)`.
    pub fn shift(&self, r: u64) -> Self {
        SparsePoly {
            terms: self.terms.iter().map(|&(e, c)| (e + r, c)).collect(),
        }
    }

    pub fn to_text(&self, ctx: &FieldCtx) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.terms
            .iter()
            .rev()
            .map(|&(e, c)| {
                let mono = match e {
                    0 => return ctx.format(c),
                    1 => "x".to_string(),
                    _ => format!("x^{e}"),
                };
                if c == Elem::ONE {
                    mono
                } else {
                    format!("{}*{mono}", ctx.format(c))
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// One summand `coeff * base(x)^exp` of a [`CompositePoly`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub coeff: Elem,
    pub base: SparsePoly,
    pub exp: i64,
}

impl Term {
    pub fn new(coeff: Elem, base: SparsePoly, exp: i64) -> Self {
        Term { coeff, base, exp }
    }

    /// `c * x^e`.
    pub fn monomial(coeff: Elem, exp: i64) -> Self {
        Term { coeff, base: SparsePoly::x(), exp }
    }

    pub fn constant(c: Elem) -> Self {
        Term { coeff: c, base: SparsePoly::one(), exp: 1 }
    }

    #[inline]
    pub fn eval(&self, ctx: &FieldCtx, x: Elem) -> Elem {
        let inner = if self.base.is_x() { x } else { self.base.eval(ctx, x) };
        ctx.mul(self.coeff, ctx.pow(inner, self.exp))
    }
}

/// A sum of powered sparse polynomials, the common shape of every family.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CompositePoly {
    terms: Vec<Term>,
}

impl CompositePoly {
    /// Terms with a zero outer coefficient are dropped.
    pub fn new(terms: impl IntoIterator<Item = Term>) -> Self {
        CompositePoly {
            terms: terms.into_iter().filter(|t| !t.coeff.is_zero()).collect(),
        }
    }

    pub fn zero() -> Self {
        CompositePoly { terms: Vec::new() }
    }

    pub fn identity() -> Self {
        Self::new([Term::monomial(Elem::ONE, 1)])
    }

    pub fn from_sparse(base: SparsePoly) -> Self {
        Self::new([Term::new(Elem::ONE, base, 1)])
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    /// `self + x`.
    pub fn plus_x(&self) -> Self {
        let mut terms = self.terms.clone();
        terms.push(Term::monomial(Elem::ONE, 1));
        CompositePoly { terms }
    }

    #[inline]
    pub fn evaluate(&self, ctx: &FieldCtx, x: Elem) -> Elem {
        self.terms
            .iter()
            .fold(Elem::ZERO, |acc, t| ctx.add(acc, t.eval(ctx, x)))
    }

    /// Rewrites the expression as a sparse polynomial when that needs no
    /// expansion: every term is either taken to the first power or has a
    /// single-monomial base with a non-negative exponent.
    pub fn to_sparse(&self, ctx: &FieldCtx) -> Option<SparsePoly> {
        let mut out = Vec::new();
        for t in &self.terms {
            if t.exp == 1 {
                out.extend(t.base.terms().iter().map(|&(e, c)| (e, ctx.mul(t.coeff, c))));
            } else if t.exp >= 0 {
                match t.base.terms() {
                    [] => {
                        if t.exp == 0 {
                            out.push((0, t.coeff));
                        }
                    }
                    [(e, c)] => {
                        let k = t.exp as u64;
                        out.push((e.checked_mul(k)?, ctx.mul(t.coeff, ctx.pow_u64(*c, k))));
                    }
                    _ => return None,
                }
            } else {
                return None;
            }
        }
        Some(SparsePoly::from_terms(ctx, out))
    }

    pub fn to_text(&self, ctx: &FieldCtx) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|t| term_text(ctx, t))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

fn term_text(ctx: &FieldCtx, t: &Term) -> String {
    let bare_constant = t.base == SparsePoly::one() && t.exp == 1;
    if bare_constant {
        return ctx.format(t.coeff);
    }
    let factor = if t.base.is_x() {
        "x".to_string()
    } else {
        format!("({})", t.base.to_text(ctx))
    };
    let powered = if t.exp == 1 { factor } else { format!("{factor}^{}", t.exp) };
    if t.coeff == Elem::ONE {
        powered
    } else {
        format!("{}*{powered}", ctx.format(t.coeff))
    }
}

/// Reduces an exponent so that `x^e` and `x^(reduced)` agree as functions
/// on GF(q): 0 stays 0, positive exponents land in `1..=q-1`.
fn reduce_exponent(e: u64, q: u64) -> u64 {
    if e == 0 {
        0
    } else {
        (e - 1) % (q - 1) + 1
    }
}

/// Normalized exponent applied to a base: 0 for the constant 1, otherwise a
/// value in `1..=q-1` with the same action on nonzero and zero bases.
fn normalize_outer(e: i64, q: u64) -> u64 {
    let order = q as i64 - 1;
    match e {
        0 => 0,
        e if e > 0 => reduce_exponent(e as u64, q),
        e => match e.rem_euclid(order) {
            0 => order as u64,
            r => r as u64,
        },
    }
}

fn dense_mul(ctx: &FieldCtx, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    let q = ctx.order() as u64;
    let mut out = vec![Elem::ZERO; q as usize];
    for (i, &x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            if y.is_zero() {
                continue;
            }
            let k = reduce_exponent((i + j) as u64, q) as usize;
            out[k] = ctx.add(out[k], ctx.mul(x, y));
        }
    }
    out
}

/// Expands `f` modulo `x^q - x` into the unique reduced polynomial that
/// agrees with it at every point. Only for q up to [`REDUCE_LIMIT`].
pub fn reduce_mod_field(ctx: &FieldCtx, f: &CompositePoly) -> Result<SparsePoly> {
    let q = ctx.order() as u64;
    if ctx.order() > REDUCE_LIMIT {
        return Err(Error::TooLarge(format!(
            "symbolic reduction is limited to q <= {REDUCE_LIMIT}, got q = {q}; use pointwise evaluation"
        )));
    }
    let mut acc = vec![Elem::ZERO; q as usize];
    for t in f.terms() {
        let power = normalize_outer(t.exp, q);
        let mut dense = vec![Elem::ZERO; q as usize];
        if power == 0 {
            dense[0] = Elem::ONE;
        } else if let [(e, c)] = t.base.terms() {
            let k = reduce_exponent(e * power, q) as usize;
            dense[k] = ctx.pow_u64(*c, power);
        } else {
            let mut base = vec![Elem::ZERO; q as usize];
            for &(e, c) in t.base.terms() {
                let k = reduce_exponent(e, q) as usize;
                base[k] = ctx.add(base[k], c);
            }
            let mut result: Option<Vec<Elem>> = None;
            let mut e = power;
            while e > 0 {
                if e & 1 == 1 {
                    result = Some(match result {
                        None => base.clone(),
                        Some(r) => dense_mul(ctx, &r, &base),
                    });
                }
                e >>= 1;
                if e > 0 {
                    base = dense_mul(ctx, &base, &base);
                }
            }
            dense = result.expect("power is positive");
        }
        for (a, d) in acc.iter_mut().zip(dense) {
            *a = ctx.add(*a, ctx.mul(t.coeff, d));
        }
    }
    Ok(SparsePoly::from_terms(
        ctx,
        acc.into_iter().enumerate().map(|(e, c)| (e as u64, c)),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(n: u32) -> FieldCtx {
        FieldCtx::binary(n).unwrap()
    }

    #[test]
    fn identity_evaluates_to_argument() {
        let ctx = gf(6);
        let f = CompositePoly::identity();
        for a in ctx.elements() {
            assert_eq!(f.evaluate(&ctx, a), a);
        }
        assert_eq!(f.to_sparse(&ctx), Some(SparsePoly::x()));
    }

    #[test]
    fn negative_power_of_vanishing_base_is_zero() {
        let ctx = gf(6);
        let delta = ctx.subfield_elements(3).unwrap()[3];
        let b = ctx.generator();
        let inner = SparsePoly::from_terms(&ctx, [(8, Elem::ONE), (1, Elem::ONE), (0, delta)]);
        let f = CompositePoly::new([Term::new(Elem::ONE, inner.clone(), -6), Term::monomial(b, 1)]);
        let roots: Vec<_> = ctx.elements().filter(|&x| inner.eval(&ctx, x).is_zero()).collect();
        assert!(!roots.is_empty());
        for x in roots {
            assert_eq!(f.evaluate(&ctx, x), ctx.mul(b, x));
        }
    }

    #[test]
    fn trace_like_base_lands_in_subfield() {
        let ctx = gf(6);
        for delta in ctx.subfield_elements(3).unwrap() {
            let base = SparsePoly::from_terms(&ctx, [(8, Elem::ONE), (1, Elem::ONE), (0, delta)]);
            for x in ctx.elements() {
                let t = base.eval(&ctx, x);
                assert_eq!(ctx.frobenius(t, 3), t);
            }
        }
    }

    #[test]
    fn reduce_fermat_and_zero() {
        let ctx = gf(4);
        let xq = CompositePoly::new([Term::monomial(Elem::ONE, 16)]);
        assert_eq!(reduce_mod_field(&ctx, &xq).unwrap(), SparsePoly::x());
        assert!(reduce_mod_field(&ctx, &CompositePoly::zero()).unwrap().is_zero());
        let big = gf(13);
        assert!(matches!(reduce_mod_field(&big, &xq), Err(Error::TooLarge(_))));
    }

    #[test]
    fn reduce_agrees_pointwise() {
        let ctx = gf(5);
        let g = ctx.generator();
        let f = parse_poly(&ctx, "(x^3 + g^2*x + 1)^-7 + g^4*(x^2 + x)^40 + x^31 + g^3").unwrap();
        let r = reduce_mod_field(&ctx, &f).unwrap();
        assert!(r.is_reduced(&ctx));
        for x in ctx.elements() {
            assert_eq!(r.eval(&ctx, x), f.evaluate(&ctx, x));
        }
        let _ = g;
    }

    #[test]
    fn reduction_normalizes_exponents() {
        assert_eq!(reduce_exponent(0, 16), 0);
        assert_eq!(reduce_exponent(15, 16), 15);
        assert_eq!(reduce_exponent(16, 16), 1);
        assert_eq!(normalize_outer(-15, 16), 15);
        assert_eq!(normalize_outer(-1, 16), 14);
    }
}
