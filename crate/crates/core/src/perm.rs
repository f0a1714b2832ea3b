//! Permutation and complete-permutation checks by exhaustive evaluation,
//! plus the arithmetic criteria they cross-check.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::{self, Exec};
use crate::field::{gcd, Elem, FieldCtx};
use crate::poly::{CompositePoly, SparsePoly};

/// Largest field order accepted by the exhaustive checks.
pub const EXHAUSTIVE_LIMIT: u32 = 1 << 24;

// Below this order the image loop always runs on the calling thread.
const PARALLEL_MIN_ORDER: u32 = 1 << 14;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Permutation,
    NotPermutation,
}

impl Verdict {
    pub fn is_permutation(self) -> bool {
        self == Verdict::Permutation
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Permutation => "permutation",
            Verdict::NotPermutation => "not-permutation",
        }
    }
}

/// Outcome of an exhaustive permutation check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermReport {
    pub verdict: Verdict,
    /// First colliding pair `(x1, x2)` in canonical order, `x1` earlier.
    pub witness: Option<(Elem, Elem)>,
    pub image_size: u64,
    /// Filled by [`is_complete_permutation`].
    pub complete: Option<bool>,
}

impl PermReport {
    pub fn is_permutation(&self) -> bool {
        self.verdict.is_permutation()
    }
}

fn guard(ctx: &FieldCtx) -> Result<()> {
    if ctx.order() > EXHAUSTIVE_LIMIT {
        return Err(Error::TooLarge(format!(
            "exhaustive checks are limited to q <= 2^24, got q = {}",
            ctx.order()
        )));
    }
    Ok(())
}

/// Checks whether `map` is a bijection of the field. Elements are visited in
/// canonical order (0, then powers of the generator).
pub fn check_map<F>(ctx: &FieldCtx, exec: Exec, map: F) -> Result<PermReport>
where
    F: Fn(Elem) -> Elem + Sync + Send,
{
    guard(ctx)?;
    let q = ctx.order() as usize;
    let mut images = vec![Elem::ZERO; q];
    if exec.is_parallel() && ctx.order() >= PARALLEL_MIN_ORDER {
        exec::fill(exec, &mut images, 4096, |i| map(ctx.element_at(i as u32)));
    } else {
        for (slot, x) in images.iter_mut().zip(ctx.elements()) {
            *slot = map(x);
        }
    }

    let mut seen = vec![0u64; q.div_ceil(64)];
    let mut first_collision = None;
    let mut image_size = 0u64;
    for (j, y) in images.iter().enumerate() {
        let (word, bit) = (y.code() as usize / 64, y.code() % 64);
        if seen[word] >> bit & 1 == 1 {
            if first_collision.is_none() {
                first_collision = Some(j);
            }
        } else {
            seen[word] |= 1 << bit;
            image_size += 1;
        }
    }

    let witness = first_collision.map(|j| {
        let i = images[..j]
            .iter()
            .position(|&y| y == images[j])
            .expect("a collision has an earlier preimage");
        let (x1, x2) = (ctx.element_at(i as u32), ctx.element_at(j as u32));
        assert_eq!(map(x1), map(x2), "witness must collide on re-evaluation");
        (x1, x2)
    });
    let verdict = if witness.is_none() {
        Verdict::Permutation
    } else {
        Verdict::NotPermutation
    };
    debug_assert_eq!(verdict.is_permutation(), image_size == q as u64);
    Ok(PermReport { verdict, witness, image_size, complete: None })
}

/// Exhaustive permutation check of a composite polynomial.
pub fn is_permutation(ctx: &FieldCtx, f: &CompositePoly) -> Result<PermReport> {
    is_permutation_with(ctx, f, Exec::default())
}

pub fn is_permutation_with(ctx: &FieldCtx, f: &CompositePoly, exec: Exec) -> Result<PermReport> {
    check_map(ctx, exec, |x| f.evaluate(ctx, x))
}

/// Checks `f` and `f + x`. The returned report describes `f`; `complete`
/// is set to whether both are permutations.
pub fn is_complete_permutation(ctx: &FieldCtx, f: &CompositePoly) -> Result<PermReport> {
    let mut report = is_permutation(ctx, f)?;
    let complete = report.is_permutation() && is_permutation(ctx, &f.plus_x())?.is_permutation();
    report.complete = Some(complete);
    Ok(report)
}

/// `x^n` permutes GF(q) iff `gcd(n, q - 1) = 1`.
pub fn monomial_pp_check(ctx: &FieldCtx, n: u64) -> bool {
    gcd(n, ctx.order() as u64 - 1) == 1
}

/// The d-th roots of unity, `g^((q-1)/d * i)` for `i` in `0..d`.
pub fn mu_d_roots(ctx: &FieldCtx, d: u64) -> Result<Vec<Elem>> {
    let order = ctx.order() as u64 - 1;
    if d == 0 || !order.is_multiple_of(d) {
        return Err(Error::NotDivisor { m: d, n: order });
    }
    let w = ctx.pow_u64(ctx.generator(), order / d);
    let mut out = Vec::with_capacity(d as usize);
    let mut x = Elem::ONE;
    for _ in 0..d {
        out.push(x);
        x = ctx.mul(x, w);
    }
    Ok(out)
}

/// Sub-verdicts of the root-of-unity criterion for `x^r h(x^((q-1)/d))`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Lemma1Report {
    /// `gcd(r, (q-1)/d) = 1`.
    pub gcd_condition: bool,
    /// `x^r h(x)^((q-1)/d)` sends every d-th root of unity to one.
    pub maps_into_mu_d: bool,
    /// ... and does so injectively.
    pub injective_on_mu_d: bool,
    pub verdict: bool,
}

/// `x^r h(x^((q-1)/d))`, the polynomial the criterion speaks about.
pub fn lemma1_polynomial(ctx: &FieldCtx, r: u64, d: u64, h: &SparsePoly) -> Result<SparsePoly> {
    let order = ctx.order() as u64 - 1;
    if d == 0 || !order.is_multiple_of(d) {
        return Err(Error::NotDivisor { m: d, n: order });
    }
    Ok(h.substitute_power(order / d).shift(r))
}

/// Decides whether `x^r h(x^((q-1)/d))` permutes GF(q) through its two
/// conditions: the gcd condition and the action of `x^r h(x)^((q-1)/d)` on
/// the d-th roots of unity, enumerated directly.
pub fn lemma1_check(ctx: &FieldCtx, r: u64, d: u64, h: &SparsePoly) -> Result<Lemma1Report> {
    if r == 0 {
        return Err(Error::InvalidParams("r must be positive".into()));
    }
    let order = ctx.order() as u64 - 1;
    let roots = mu_d_roots(ctx, d)?;
    let k = order / d;
    let gcd_condition = gcd(r, k) == 1;

    let mut seen = vec![false; ctx.order() as usize];
    let mut maps_into = true;
    let mut injective = true;
    for &x in &roots {
        let y = ctx.mul(ctx.pow_u64(x, r), ctx.pow_u64(h.eval(ctx, x), k));
        if ctx.pow_u64(y, d) != Elem::ONE {
            maps_into = false;
        }
        let slot = &mut seen[y.code() as usize];
        if *slot {
            injective = false;
        }
        *slot = true;
    }
    Ok(Lemma1Report {
        gcd_condition,
        maps_into_mu_d: maps_into,
        injective_on_mu_d: injective,
        verdict: gcd_condition && maps_into && injective,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_poly, Term};

    fn gf(n: u32) -> FieldCtx {
        FieldCtx::binary(n).unwrap()
    }

    #[test]
    fn identity_is_permutation() {
        let ctx = gf(6);
        let r = is_permutation(&ctx, &CompositePoly::identity()).unwrap();
        assert_eq!(r.verdict, Verdict::Permutation);
        assert_eq!(r.image_size, 64);
        assert!(r.witness.is_none());
    }

    #[test]
    fn x2_plus_x_collides_at_zero_and_one() {
        for n in 1..=8 {
            let ctx = gf(n);
            let f = parse_poly(&ctx, "x^2 + x").unwrap();
            let r = is_permutation(&ctx, &f).unwrap();
            assert_eq!(r.verdict, Verdict::NotPermutation);
            assert_eq!(r.witness, Some((Elem::ZERO, Elem::ONE)));
            assert_eq!(r.image_size, (ctx.order() / 2) as u64);
        }
    }

    #[test]
    fn complete_permutations() {
        let ctx = gf(2);
        let zero = CompositePoly::zero();
        assert_eq!(is_complete_permutation(&ctx, &zero).unwrap().complete, Some(false));
        let gx = CompositePoly::new([Term::monomial(ctx.generator(), 1)]);
        assert_eq!(is_complete_permutation(&ctx, &gx).unwrap().complete, Some(true));
        let x = CompositePoly::identity();
        let r = is_complete_permutation(&ctx, &x).unwrap();
        assert!(r.is_permutation());
        assert_eq!(r.complete, Some(false));
    }

    #[test]
    fn monomials() {
        let ctx = gf(6);
        assert!(monomial_pp_check(&ctx, 1));
        assert!(monomial_pp_check(&ctx, 5));
        assert!(!monomial_pp_check(&ctx, 9));
    }

    #[test]
    fn roots_of_unity() {
        let ctx = gf(4);
        assert_eq!(mu_d_roots(&ctx, 1).unwrap(), vec![Elem::ONE]);
        let u = mu_d_roots(&ctx, 5).unwrap();
        assert_eq!(u.len(), 5);
        assert!(u.iter().all(|&x| ctx.pow(x, 5) == Elem::ONE));
        assert!(mu_d_roots(&ctx, 4).is_err());

        let f = FieldCtx::new(5, 4, None).unwrap();
        let mu = mu_d_roots(&f, 156).unwrap();
        let filtered: Vec<_> = f
            .elements()
            .skip(1)
            .filter(|&x| f.pow(x, 156) == Elem::ONE)
            .collect();
        assert_eq!(mu.len(), 156);
        assert_eq!(filtered.len(), 156);
        let mut a = mu.clone();
        let mut b = filtered;
        a.sort();
        b.sort();
        assert_eq!(a, b);
    }

    #[test]
    fn lemma1_monomial_case() {
        let ctx = gf(6);
        for r in [1u64, 5, 11, 13] {
            let rep = lemma1_check(&ctx, r, 9, &SparsePoly::one()).unwrap();
            assert!(rep.verdict);
        }
        assert!(lemma1_check(&ctx, 0, 9, &SparsePoly::one()).is_err());
        assert!(lemma1_check(&ctx, 1, 10, &SparsePoly::one()).is_err());
    }

    #[test]
    fn lemma1_agrees_with_brute_force_gf16() {
        let ctx = gf(4);
        for d in [1u64, 3, 5, 15] {
            for r in 1..6u64 {
                for a in ctx.elements() {
                    let h = SparsePoly::from_terms(&ctx, [(1, Elem::ONE), (0, a)]);
                    let rep = lemma1_check(&ctx, r, d, &h).unwrap();
                    let f = CompositePoly::from_sparse(lemma1_polynomial(&ctx, r, d, &h).unwrap());
                    let brute = is_permutation(&ctx, &f).unwrap();
                    assert_eq!(rep.verdict, brute.is_permutation(), "d={d} r={r} a={a}");
                }
            }
        }
    }

    #[test]
    fn parallel_and_sequential_agree() {
        let ctx = gf(15);
        let f = parse_poly(&ctx, "x^3 + g^5*x").unwrap();
        let a = is_permutation_with(&ctx, &f, Exec::Sequential).unwrap();
        let b = is_permutation_with(&ctx, &f, Exec::Threads(4)).unwrap();
        assert_eq!(a, b);
    }
}
