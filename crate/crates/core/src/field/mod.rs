//! Finite fields GF(p^n) in the polynomial basis.
//!
//! Elements are packed into a `u32` code: the coefficient vector read as a
//! base-p integer, constant term least significant. For p = 2 this is the
//! usual bit vector. Fields up to 2^20 elements carry exp/log tables; larger
//! ones multiply by reduction modulo the defining polynomial.

mod gfp;

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{parse_err, Error, Result};

pub(crate) use gfp::prime_factors;

/// Largest supported field order (exclusive).
pub const MAX_ORDER: u64 = 1 << 31;

/// Fields with at most this many elements get discrete-log tables.
pub const LOG_TABLE_LIMIT: u64 = 1 << 20;

/// One field element, identified by its packed coefficient code.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Elem(u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    /// Wraps a raw code. The code is not checked against any field; use
    /// [`FieldCtx::elem`] for a validated conversion.
    pub const fn from_code(code: u32) -> Self {
        Elem(code)
    }

    pub const fn code(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "0x{:x}", self.0)
    }
}

impl Serialize for Elem {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Elem {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        let hex = text
            .strip_prefix("0x")
            .ok_or_else(|| serde::de::Error::custom(format!("expected 0x-prefixed code, got {text}")))?;
        u32::from_str_radix(hex, 16)
            .map(Elem)
            .map_err(serde::de::Error::custom)
    }
}

/// Result of an exponentiation together with the convention flag.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Power {
    pub value: Elem,
    /// Set when the base was zero and the exponent negative, in which case
    /// the value is 0 by convention.
    pub zero_to_negative: bool,
}

struct LogTables {
    // exp has 2(q-1) entries so a sum of two logs indexes it directly.
    exp: Vec<u32>,
    // log[0] is unused.
    log: Vec<u32>,
}

/// A concrete finite field GF(p^n). Immutable once built.
pub struct FieldCtx {
    p: u32,
    n: u32,
    q: u32,
    modulus: Vec<u32>,
    modulus_code: u64,
    generator: Elem,
    tables: Option<LogTables>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.p)
            .field("n", &self.n)
            .field("modulus", &format_args!("{:#x}", self.modulus_code))
            .field("generator", &self.generator)
            .field("log_tables", &self.tables.is_some())
            .finish()
    }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl FieldCtx {
    /// Builds GF(p^n). Without an explicit modulus the lexicographically
    /// smallest monic irreducible of degree n is used.
    pub fn new(p: u64, n: u32, modulus: Option<&[u32]>) -> Result<Self> {
        if !gfp::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if n == 0 {
            return Err(Error::ZeroDegree);
        }
        let q = (p as u128).pow(n);
        if q >= MAX_ORDER as u128 {
            return Err(Error::FieldTooLarge { p, n });
        }
        let p = p as u32;
        let q = q as u32;

        let modulus = match modulus {
            Some(m) => {
                if m.len() != n as usize + 1 || m[n as usize] != 1 {
                    return Err(Error::BadModulus(format!(
                        "expected a monic polynomial of degree {n}, got {}",
                        gfp::to_string(m)
                    )));
                }
                if let Some(&c) = m.iter().find(|&&c| c >= p) {
                    return Err(Error::BadModulus(format!(
                        "coefficient {c} is not in GF({p})"
                    )));
                }
                if !gfp::is_irreducible(m, p) {
                    let factor = gfp::smallest_factor(m, p)
                        .map(|f| gfp::to_string(&f))
                        .unwrap_or_else(|| "?".into());
                    return Err(Error::ReducibleModulus {
                        modulus: gfp::to_string(m),
                        factor,
                    });
                }
                m.to_vec()
            }
            None => gfp::smallest_irreducible(p, n as usize),
        };
        let modulus_code = gfp::to_code(&modulus, p);

        let mut ctx = FieldCtx {
            p,
            n,
            q,
            modulus,
            modulus_code,
            generator: Elem::ONE,
            tables: None,
        };
        ctx.generator = ctx.find_generator();
        if q as u64 <= LOG_TABLE_LIMIT {
            ctx.tables = Some(ctx.build_tables());
        }
        Ok(ctx)
    }

    /// GF(2^n) with the canonical modulus.
    pub fn binary(n: u32) -> Result<Self> {
        Self::new(2, n, None)
    }

    /// Parses `"p^n"` (or a bare prime) with an optional `":modulus=0x…"`
    /// suffix. The modulus code is the base-p integer of its coefficients.
    pub fn from_descriptor(text: &str) -> Result<Self> {
        let (p, n, modulus) = parse_descriptor(text)?;
        Self::from_parts(p, n, modulus)
    }

    /// Builds a field from characteristic, degree and an optional modulus
    /// code (base-p integer of the coefficient vector, leading term included).
    pub fn from_parts(p: u64, n: u32, modulus_code: Option<u64>) -> Result<Self> {
        match modulus_code {
            None => Self::new(p, n, None),
            Some(code) => {
                if !gfp::is_prime(p) {
                    return Err(Error::NotPrime(p));
                }
                let coeffs = gfp::digits(code, p as u32, n as usize + 1);
                if gfp::to_code(&coeffs, p as u32) != code {
                    return Err(Error::BadModulus(format!(
                        "code {code:#x} has degree above {n}"
                    )));
                }
                Self::new(p, n, Some(&coeffs))
            }
        }
    }

    fn find_generator(&self) -> Elem {
        let order = self.q as u64 - 1;
        let factors = prime_factors(order);
        (1..self.q)
            .map(Elem)
            .find(|&a| {
                factors
                    .iter()
                    .all(|&r| self.pow_slow(a, order / r) != Elem::ONE)
            })
            .expect("the multiplicative group is cyclic")
    }

    fn build_tables(&self) -> LogTables {
        let order = self.q as usize - 1;
        let mut exp = vec![0u32; 2 * order];
        let mut log = vec![u32::MAX; self.q as usize];
        let mut x = Elem::ONE;
        for i in 0..order {
            exp[i] = x.0;
            exp[i + order] = x.0;
            debug_assert_eq!(log[x.0 as usize], u32::MAX);
            log[x.0 as usize] = i as u32;
            x = self.mul_slow(x, self.generator);
        }
        LogTables { exp, log }
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.n
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    /// Coefficients of the defining polynomial, constant term first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn modulus_code(&self) -> u64 {
        self.modulus_code
    }

    pub fn modulus_text(&self) -> String {
        gfp::to_string(&self.modulus)
    }

    /// Descriptor that rebuilds exactly this field.
    pub fn descriptor(&self) -> String {
        format!("{}^{}:modulus={:#x}", self.p, self.n, self.modulus_code)
    }

    pub fn generator(&self) -> Elem {
        self.generator
    }

    pub fn has_log_tables(&self) -> bool {
        self.tables.is_some()
    }

    /// Validates a raw code.
    pub fn elem(&self, code: u64) -> Result<Elem> {
        if code >= self.q as u64 {
            return Err(Error::Domain(format!(
                "element code {code:#x} is outside GF({}^{})",
                self.p, self.n
            )));
        }
        Ok(Elem(code as u32))
    }

    pub fn contains(&self, a: Elem) -> bool {
        a.0 < self.q
    }

    pub fn minus_one(&self) -> Elem {
        if self.p == 2 {
            Elem::ONE
        } else {
            Elem(self.p - 1)
        }
    }

    pub fn coefficients(&self, a: Elem) -> Vec<u32> {
        gfp::digits(a.0 as u64, self.p, self.n as usize)
    }

    pub fn from_coefficients(&self, coeffs: &[u32]) -> Result<Elem> {
        if coeffs.len() > self.n as usize {
            return Err(Error::Domain(format!(
                "{} coefficients given for a degree-{} field",
                coeffs.len(),
                self.n
            )));
        }
        if let Some(&c) = coeffs.iter().find(|&&c| c >= self.p) {
            return Err(Error::Domain(format!("coefficient {c} is not in GF({})", self.p)));
        }
        Ok(Elem(gfp::to_code(coeffs, self.p) as u32))
    }

    // ---- arithmetic -------------------------------------------------------

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if self.p == 2 {
            return Elem(a.0 ^ b.0);
        }
        let p = self.p as u64;
        let (mut x, mut y) = (a.0 as u64, b.0 as u64);
        let (mut out, mut place) = (0u64, 1u64);
        while x > 0 || y > 0 {
            out += ((x % p + y % p) % p) * place;
            place *= p;
            x /= p;
            y /= p;
        }
        Elem(out as u32)
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        if self.p == 2 {
            return a;
        }
        let p = self.p as u64;
        let mut x = a.0 as u64;
        let (mut out, mut place) = (0u64, 1u64);
        while x > 0 {
            out += ((p - x % p) % p) * place;
            place *= p;
            x /= p;
        }
        Elem(out as u32)
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.0 == 0 || b.0 == 0 {
            return Elem::ZERO;
        }
        match &self.tables {
            Some(t) => Elem(t.exp[(t.log[a.0 as usize] + t.log[b.0 as usize]) as usize]),
            None => self.mul_slow(a, b),
        }
    }

    /// Multiplication by polynomial reduction, independent of the tables.
    pub fn mul_slow(&self, a: Elem, b: Elem) -> Elem {
        if self.p == 2 {
            let (mut acc, mut x, mut y) = (0u64, a.0 as u64, b.0);
            while y != 0 {
                if y & 1 == 1 {
                    acc ^= x;
                }
                x <<= 1;
                y >>= 1;
            }
            let n = self.n;
            for bit in (n..2 * n).rev() {
                if acc >> bit & 1 == 1 {
                    acc ^= self.modulus_code << (bit - n);
                }
            }
            return Elem(acc as u32);
        }
        let n = self.n as usize;
        let p = self.p as u64;
        let da = gfp::digits(a.0 as u64, self.p, n);
        let db = gfp::digits(b.0 as u64, self.p, n);
        let mut prod = [0u64; 64];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        for deg in (n..2 * n - 1).rev() {
            let c = prod[deg];
            if c == 0 {
                continue;
            }
            for (i, &f) in self.modulus.iter().enumerate() {
                let idx = deg - n + i;
                prod[idx] = (prod[idx] + (p - c) * f as u64) % p;
            }
        }
        Elem(prod[..n].iter().rev().fold(0u64, |acc, &c| acc * p + c) as u32)
    }

    fn pow_slow(&self, a: Elem, mut e: u64) -> Elem {
        let mut base = a;
        let mut acc = Elem::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_slow(acc, base);
            }
            base = self.mul_slow(base, base);
            e >>= 1;
        }
        acc
    }

    #[inline]
    fn pow_nonzero(&self, a: Elem, e: u64) -> Elem {
        let order = self.q as u64 - 1;
        let e = e % order;
        match &self.tables {
            Some(t) => {
                let l = t.log[a.0 as usize] as u64 * e % order;
                Elem(t.exp[l as usize])
            }
            None => self.pow_slow(a, e),
        }
    }

    /// `a^e` for a non-negative exponent; `0^0 = 1`.
    #[inline]
    pub fn pow_u64(&self, a: Elem, e: u64) -> Elem {
        if a.0 == 0 {
            return if e == 0 { Elem::ONE } else { Elem::ZERO };
        }
        self.pow_nonzero(a, e)
    }

    /// `a^e` with exponents reduced mod q-1 for nonzero bases, `0^0 = 1`,
    /// and `0^e = 0` for every other exponent, negative ones included.
    #[inline]
    pub fn pow(&self, a: Elem, e: i64) -> Elem {
        self.pow_flagged(a, e).value
    }

    pub fn pow_flagged(&self, a: Elem, e: i64) -> Power {
        if a.0 == 0 {
            return Power {
                value: if e == 0 { Elem::ONE } else { Elem::ZERO },
                zero_to_negative: e < 0,
            };
        }
        let order = self.q as i64 - 1;
        Power {
            value: self.pow_nonzero(a, e.rem_euclid(order) as u64),
            zero_to_negative: false,
        }
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a.0 == 0 {
            return Err(Error::Domain("0 has no inverse".into()));
        }
        Ok(self.pow_nonzero(a, self.q as u64 - 2))
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `x^(p^i)`; `i` is taken mod n.
    pub fn frobenius(&self, x: Elem, i: i64) -> Elem {
        let i = i.rem_euclid(self.n as i64) as u32;
        self.pow_u64(x, (self.p as u64).pow(i))
    }

    fn check_divisor(&self, m: u32) -> Result<()> {
        if m == 0 || !self.n.is_multiple_of(m) {
            return Err(Error::NotDivisor { m: m as u64, n: self.n as u64 });
        }
        Ok(())
    }

    /// `Tr_m^n(x) = sum_{i < n/m} x^(p^(m i))`.
    pub fn relative_trace(&self, m: u32, x: Elem) -> Result<Elem> {
        self.check_divisor(m)?;
        Ok((0..self.n / m).fold(Elem::ZERO, |acc, i| {
            self.add(acc, self.frobenius(x, (m * i) as i64))
        }))
    }

    /// Absolute trace to GF(p).
    pub fn trace(&self, x: Elem) -> Elem {
        self.relative_trace(1, x).expect("1 divides n")
    }

    /// `N_m^n(x) = x^((p^n - 1)/(p^m - 1))`.
    pub fn relative_norm(&self, m: u32, x: Elem) -> Result<Elem> {
        self.check_divisor(m)?;
        let sub = (self.p as u64).pow(m) - 1;
        Ok(self.pow_u64(x, (self.q as u64 - 1) / sub))
    }

    pub fn in_subfield(&self, m: u32, x: Elem) -> Result<bool> {
        self.check_divisor(m)?;
        Ok(self.frobenius(x, m as i64) == x)
    }

    /// All `p^m` elements of the degree-m subfield, 0 first and then in
    /// generator-power order.
    pub fn subfield_elements(&self, m: u32) -> Result<Vec<Elem>> {
        self.check_divisor(m)?;
        let size = (self.p as u64).pow(m);
        let step = (self.q as u64 - 1) / (size - 1);
        let w = self.pow_u64(self.generator, step);
        let mut out = Vec::with_capacity(size as usize);
        out.push(Elem::ZERO);
        let mut x = Elem::ONE;
        for _ in 0..size - 1 {
            out.push(x);
            x = self.mul(x, w);
        }
        Ok(out)
    }

    // ---- canonical ordering -------------------------------------------------

    /// The i-th element in canonical order: 0, then g^0, g^1, ..., g^(q-2).
    #[inline]
    pub fn element_at(&self, i: u32) -> Elem {
        if i == 0 {
            return Elem::ZERO;
        }
        match &self.tables {
            Some(t) => Elem(t.exp[i as usize - 1]),
            None => self.pow_nonzero(self.generator, i as u64 - 1),
        }
    }

    /// Iterates the field in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = Elem> + '_ {
        let mut cur = Elem::ZERO;
        (0..self.q).map(move |i| {
            if i == 0 {
                return Elem::ZERO;
            }
            cur = if i == 1 { Elem::ONE } else { self.mul(cur, self.generator) };
            cur
        })
    }

    /// Discrete logarithm to the base of the generator, when tables exist.
    pub fn log(&self, a: Elem) -> Option<u32> {
        if a.0 == 0 {
            return None;
        }
        self.tables.as_ref().map(|t| t.log[a.0 as usize])
    }

    // ---- text -------------------------------------------------------------

    /// Human-oriented text: `0`, `1`, `g^k`, or the hex code when no log
    /// tables are available.
    pub fn format(&self, a: Elem) -> String {
        match a.0 {
            0 => "0".into(),
            1 => "1".into(),
            _ => match self.log(a) {
                Some(k) => format!("g^{k}"),
                None => a.to_string(),
            },
        }
    }

    /// Parses one element in the element text syntax.
    pub fn parse_element(&self, text: &str) -> Result<Elem> {
        let t = text.trim();
        let (e, used) = self.parse_element_prefix(t, 0)?;
        if used != t.len() {
            return Err(parse_err(used, format!("unexpected trailing input in element {t:?}")));
        }
        Ok(e)
    }

    /// Parses an element at the start of `text`; returns it with the number
    /// of bytes consumed. `offset` is only used for error positions.
    pub(crate) fn parse_element_prefix(&self, text: &str, offset: usize) -> Result<(Elem, usize)> {
        let bytes = text.as_bytes();
        let digits_end = |start: usize, radix: u32| {
            start
                + text[start..]
                    .chars()
                    .take_while(|c| c.is_digit(radix))
                    .count()
        };
        match bytes.first() {
            Some(b'g') => {
                let mut pos = 1;
                let mut k: i64 = 1;
                if bytes.get(pos) == Some(&b'^') {
                    pos += 1;
                    let start = pos;
                    if bytes.get(pos) == Some(&b'-') {
                        pos += 1;
                    }
                    let end = digits_end(pos, 10);
                    if end == pos {
                        return Err(parse_err(offset + pos, "expected exponent after g^"));
                    }
                    k = text[start..end]
                        .parse()
                        .map_err(|_| parse_err(offset + start, "exponent overflow"))?;
                    pos = end;
                }
                Ok((self.pow(self.generator, k), pos))
            }
            Some(b'0') if matches!(bytes.get(1), Some(b'x') | Some(b'b')) => {
                let radix = if bytes[1] == b'x' { 16 } else { 2 };
                let end = digits_end(2, radix);
                if end == 2 {
                    // "0" followed by something else, e.g. "0x" meaning 0*x
                    return Ok((Elem::ZERO, 1));
                }
                let code = u64::from_str_radix(&text[2..end], radix)
                    .map_err(|_| parse_err(offset + 2, "element code overflow"))?;
                Ok((self.elem(code)?, end))
            }
            Some(c) if c.is_ascii_digit() => {
                let end = digits_end(0, 10);
                let code: u64 = text[..end]
                    .parse()
                    .map_err(|_| parse_err(offset, "element code overflow"))?;
                Ok((self.elem(code)?, end))
            }
            _ => Err(parse_err(offset, "expected an element (0, 1, g^k, 0x…, 0b…)")),
        }
    }
}

/// Splits a field descriptor into (p, n, modulus code).
pub fn parse_descriptor(text: &str) -> Result<(u64, u32, Option<u64>)> {
    let text = text.trim();
    let (base, modulus) = match text.split_once(':') {
        Some((b, rest)) => {
            let hex = rest
                .trim()
                .strip_prefix("modulus=")
                .and_then(|m| m.strip_prefix("0x"))
                .ok_or_else(|| parse_err(b.len() + 1, "expected modulus=0x…"))?;
            let code = u64::from_str_radix(hex, 16)
                .map_err(|_| parse_err(b.len() + 10, "bad modulus code"))?;
            (b, Some(code))
        }
        None => (text, None),
    };
    let (p, n) = match base.split_once('^') {
        Some((p, n)) => (p.trim(), n.trim()),
        None => (base.trim(), "1"),
    };
    let p: u64 = p
        .parse()
        .map_err(|_| parse_err(0, format!("bad characteristic in {text:?}")))?;
    let n: u32 = n
        .parse()
        .map_err(|_| parse_err(0, format!("bad degree in {text:?}")))?;
    Ok((p, n, modulus))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_gf2() {
        let f = FieldCtx::new(2, 1, None).unwrap();
        assert_eq!(f.order(), 2);
        assert_eq!(f.generator(), Elem::ONE);
        assert_eq!(f.modulus(), &[0, 1]);
    }

    #[test]
    fn gf64_canonical() {
        let f = FieldCtx::binary(6).unwrap();
        assert_eq!(f.modulus_code(), 0x43);
        // generator order is exactly 63, checked by repeated multiplication
        let g = f.generator();
        let mut x = g;
        let mut order = 1;
        while x != Elem::ONE {
            x = f.mul_slow(x, g);
            order += 1;
        }
        assert_eq!(order, 63);
    }

    #[test]
    fn gf625_canonical() {
        let f = FieldCtx::new(5, 4, None).unwrap();
        assert_eq!(f.order(), 625);
        assert!(f.has_log_tables());
        let g = f.generator();
        assert_eq!(f.pow(g, 624), Elem::ONE);
        assert_ne!(f.pow(g, 312), Elem::ONE);
        assert_ne!(f.pow(g, 208), Elem::ONE);
        assert_ne!(f.pow(g, 48), Elem::ONE);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(FieldCtx::new(4, 2, None), Err(Error::NotPrime(4))));
        assert!(matches!(FieldCtx::new(2, 0, None), Err(Error::ZeroDegree)));
        match FieldCtx::new(2, 2, Some(&[1, 0, 1])) {
            Err(Error::ReducibleModulus { factor, .. }) => assert_eq!(factor, "x + 1"),
            other => panic!("expected reducible modulus, got {other:?}"),
        }
        assert!(matches!(
            FieldCtx::from_descriptor("2^4:modulus=0x15"),
            Err(Error::ReducibleModulus { .. })
        ));
        assert!(FieldCtx::new(2, 40, None).is_err());
    }

    #[test]
    fn modulus_override() {
        // x^4 + x^3 + 1
        let f = FieldCtx::from_descriptor("2^4:modulus=0x19").unwrap();
        assert_eq!(f.modulus(), &[1, 0, 0, 1, 1]);
        assert_eq!(f.descriptor(), "2^4:modulus=0x19");
    }

    #[test]
    fn pow_conventions() {
        let f = FieldCtx::binary(6).unwrap();
        let b = f.generator();
        assert_eq!(f.pow(b, 0), Elem::ONE);
        assert_eq!(f.pow(b, -15), f.pow(b, 48));
        assert_eq!(f.pow(Elem::ZERO, 0), Elem::ONE);
        assert_eq!(f.pow(Elem::ZERO, 5), Elem::ZERO);
        let p = f.pow_flagged(Elem::ZERO, -1);
        assert_eq!(p.value, Elem::ZERO);
        assert!(p.zero_to_negative);
        assert!(!f.pow_flagged(b, -1).zero_to_negative);
    }

    #[test]
    fn inverse() {
        let f = FieldCtx::binary(2).unwrap();
        let g = f.generator();
        assert_eq!(f.inv(Elem::ONE).unwrap(), Elem::ONE);
        assert_eq!(f.inv(g).unwrap(), f.mul(g, g));
        assert!(matches!(f.inv(Elem::ZERO), Err(Error::Domain(_))));
        let f = FieldCtx::new(5, 4, None).unwrap();
        for a in f.elements().skip(1) {
            assert_eq!(f.mul(a, f.inv(a).unwrap()), Elem::ONE);
        }
    }

    #[test]
    fn traces() {
        let f = FieldCtx::binary(8).unwrap();
        for x in f.elements() {
            assert_eq!(f.relative_trace(8, x).unwrap(), x);
        }
        let ones = f.elements().filter(|&x| f.trace(x) == Elem::ONE).count();
        assert_eq!(ones, 128);
        assert!(matches!(f.relative_trace(3, Elem::ONE), Err(Error::NotDivisor { .. })));

        let f4 = FieldCtx::binary(2).unwrap();
        let g = f4.generator();
        // direct evaluation of g + g^2
        let direct = f4.add(g, f4.mul_slow(g, g));
        assert_eq!(direct, Elem::ONE);
        assert_eq!(f4.relative_trace(1, g).unwrap(), Elem::ONE);
    }

    #[test]
    fn subfields() {
        let f = FieldCtx::binary(6).unwrap();
        assert_eq!(f.subfield_elements(1).unwrap(), vec![Elem::ZERO, Elem::ONE]);
        let f8 = f.subfield_elements(3).unwrap();
        assert_eq!(f8.len(), 8);
        assert!(f8.iter().all(|&x| f.frobenius(x, 3) == x));
        let f = FieldCtx::binary(8).unwrap();
        assert_eq!(f.subfield_elements(4).unwrap().len(), 16);
        assert!(f.subfield_elements(3).is_err());
    }

    #[test]
    fn frobenius_identities() {
        let f = FieldCtx::binary(4).unwrap();
        let g = f.generator();
        assert_eq!(f.frobenius(g, 2), f.pow(g, 4));
        for x in f.elements() {
            assert_eq!(f.frobenius(x, 0), x);
            assert_eq!(f.frobenius(x, 4), x);
        }
    }

    #[test]
    fn odd_characteristic_arithmetic() {
        let f = FieldCtx::new(5, 4, None).unwrap();
        for a in f.elements().take(40) {
            assert_eq!(f.add(a, f.neg(a)), Elem::ZERO);
            for b in f.elements().take(40) {
                assert_eq!(f.mul(a, b), f.mul_slow(a, b));
                assert_eq!(f.sub(f.add(a, b), b), a);
            }
        }
        assert_eq!(f.add(f.minus_one(), Elem::ONE), Elem::ZERO);
    }

    #[test]
    fn element_text() {
        let f = FieldCtx::binary(6).unwrap();
        let g = f.generator();
        assert_eq!(f.parse_element("g^1").unwrap(), g);
        assert_eq!(f.parse_element("g").unwrap(), g);
        assert_eq!(f.parse_element("g^-1").unwrap(), f.inv(g).unwrap());
        assert_eq!(f.parse_element("0b101").unwrap(), Elem::from_code(5));
        assert_eq!(f.parse_element("0x3f").unwrap(), Elem::from_code(63));
        assert!(f.parse_element("0x40").is_err());
        assert!(f.parse_element("h").is_err());
        for x in f.elements() {
            assert_eq!(f.parse_element(&f.format(x)).unwrap(), x);
        }
    }

    #[test]
    fn canonical_order_matches_iterator() {
        let f = FieldCtx::binary(5).unwrap();
        let listed: Vec<_> = f.elements().collect();
        let indexed: Vec<_> = (0..f.order()).map(|i| f.element_at(i)).collect();
        assert_eq!(listed, indexed);
        let mut sorted = listed.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), 32);
    }

    #[test]
    fn large_field_without_tables() {
        let f = FieldCtx::binary(21).unwrap();
        assert!(!f.has_log_tables());
        let g = f.generator();
        assert_eq!(f.pow(g, (1 << 21) - 1), Elem::ONE);
        let a = f.element_at(12345);
        assert_eq!(f.mul(a, f.inv(a).unwrap()), Elem::ONE);
        assert_eq!(f.format(g).as_str(), "0x2");
    }
}
