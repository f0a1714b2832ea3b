//! Unit circle of GF(2^2m) and quadratic equations in characteristic 2.

use crate::error::{Error, Result};
use crate::field::{Elem, FieldCtx};
use crate::perm::mu_d_roots;

/// `x = u * lambda` with `u` in GF(2^m)* and `lambda` on the unit circle.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct CircleDecomposition {
    pub u: Elem,
    pub lambda: Elem,
}

fn require_char2(ctx: &FieldCtx) -> Result<()> {
    if ctx.characteristic() != 2 {
        return Err(Error::Domain(format!(
            "characteristic 2 required, field has characteristic {}",
            ctx.characteristic()
        )));
    }
    Ok(())
}

/// m for GF(2^2m).
pub fn half_degree(ctx: &FieldCtx) -> Result<u32> {
    require_char2(ctx)?;
    if !ctx.degree().is_multiple_of(2) {
        return Err(Error::Domain(format!(
            "the unit circle needs an even extension degree, got {}",
            ctx.degree()
        )));
    }
    Ok(ctx.degree() / 2)
}

/// The `2^m + 1` elements with `eta^(2^m + 1) = 1`.
pub fn unit_circle(ctx: &FieldCtx) -> Result<Vec<Elem>> {
    let m = half_degree(ctx)?;
    mu_d_roots(ctx, (1u64 << m) + 1)
}

pub fn on_unit_circle(ctx: &FieldCtx, x: Elem) -> Result<bool> {
    let m = half_degree(ctx)?;
    Ok(ctx.pow_u64(x, (1u64 << m) + 1) == Elem::ONE)
}

/// `sqrt(x) = x^(2^(n-1))`.
pub fn sqrt(ctx: &FieldCtx, x: Elem) -> Result<Elem> {
    require_char2(ctx)?;
    Ok(ctx.frobenius(x, ctx.degree() as i64 - 1))
}

/// Splits a nonzero x into its subfield part `u = sqrt(x^(2^m + 1))` and
/// circle part `lambda = x / u`.
pub fn decompose(ctx: &FieldCtx, x: Elem) -> Result<CircleDecomposition> {
    let m = half_degree(ctx)?;
    if x.is_zero() {
        return Err(Error::Domain("0 has no unit-circle decomposition".into()));
    }
    let norm = ctx.pow_u64(x, (1u64 << m) + 1);
    // square root inside GF(2^m)
    let u = ctx.pow_u64(norm, 1u64 << (m - 1));
    let lambda = ctx.div(x, u)?;
    Ok(CircleDecomposition { u, lambda })
}

/// One root of `y^2 + y = c`, or `None` when `Tr(c) = 1`.
pub fn solve_artin_schreier(ctx: &FieldCtx, c: Elem) -> Result<Option<Elem>> {
    require_char2(ctx)?;
    if ctx.trace(c) != Elem::ZERO {
        return Ok(None);
    }
    let k = ctx.degree();
    let y = if k % 2 == 1 {
        // half-trace
        (0..=(k - 1) / 2).fold(Elem::ZERO, |acc, i| ctx.add(acc, ctx.frobenius(c, 2 * i as i64)))
    } else {
        solve_linear(ctx, c).expect("trace-zero right-hand sides are in the image")
    };
    Ok(Some(y))
}

// Gaussian elimination over GF(2) for the linear map y -> y^2 + y. Its kernel
// is GF(2), so exactly one column is free; it is pinned to 0.
fn solve_linear(ctx: &FieldCtx, c: Elem) -> Option<Elem> {
    let k = ctx.degree() as usize;
    let columns: Vec<u32> = (0..k)
        .map(|j| {
            let e = Elem::from_code(1 << j);
            ctx.add(ctx.mul(e, e), e).code()
        })
        .collect();
    // row i: bit j = bit i of column j; bit k = bit i of c
    let mut rows: Vec<u64> = (0..k)
        .map(|i| {
            let coeffs = columns
                .iter()
                .enumerate()
                .fold(0u64, |acc, (j, &col)| acc | (((col >> i) & 1) as u64) << j);
            coeffs | (((c.code() >> i) & 1) as u64) << k
        })
        .collect();
    let mut pivot_of_col = vec![None; k];
    let mut rank = 0;
    for (col, pivot) in pivot_of_col.iter_mut().enumerate() {
        let Some(r) = (rank..k).find(|&r| rows[r] >> col & 1 == 1) else {
            continue;
        };
        rows.swap(rank, r);
        for other in 0..k {
            if other != rank && rows[other] >> col & 1 == 1 {
                rows[other] ^= rows[rank];
            }
        }
        *pivot = Some(rank);
        rank += 1;
    }
    if rows[rank..].iter().any(|r| r >> k & 1 == 1) {
        return None;
    }
    let code = pivot_of_col
        .iter()
        .enumerate()
        .fold(0u32, |acc, (col, p)| match p {
            Some(r) => acc | ((rows[*r] >> k & 1) as u32) << col,
            None => acc,
        });
    Some(Elem::from_code(code))
}

/// Both roots of `x^2 + u x + v` over GF(2^k), or `None` when
/// `Tr(v / u^2) = 1`. `u = 0` is rejected; use [`sqrt`] for that case.
pub fn solve_quadratic(ctx: &FieldCtx, u: Elem, v: Elem) -> Result<Option<(Elem, Elem)>> {
    require_char2(ctx)?;
    if u.is_zero() {
        return Err(Error::InvalidParams(
            "u = 0 gives the single root sqrt(v); use the square-root path".into(),
        ));
    }
    let c = ctx.div(v, ctx.mul(u, u))?;
    let Some(y) = solve_artin_schreier(ctx, c)? else {
        return Ok(None);
    };
    let x1 = ctx.mul(u, y);
    let x2 = ctx.add(x1, u);
    for x in [x1, x2] {
        let value = ctx.add(ctx.add(ctx.mul(x, x), ctx.mul(u, x)), v);
        assert!(value.is_zero(), "quadratic root failed substitution");
    }
    Ok(Some((x1, x2)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(n: u32) -> FieldCtx {
        FieldCtx::binary(n).unwrap()
    }

    #[test]
    fn circle_sizes() {
        assert_eq!(unit_circle(&gf(4)).unwrap().len(), 5);
        let u = unit_circle(&gf(8)).unwrap();
        assert_eq!(u.len(), 17);
        assert!(u.contains(&Elem::ONE));
        assert!(unit_circle(&gf(5)).is_err());
        assert!(unit_circle(&FieldCtx::new(3, 2, None).unwrap()).is_err());
    }

    #[test]
    fn decompose_basics() {
        let ctx = gf(4);
        assert_eq!(
            decompose(&ctx, Elem::ONE).unwrap(),
            CircleDecomposition { u: Elem::ONE, lambda: Elem::ONE }
        );
        for u in ctx.subfield_elements(2).unwrap().into_iter().skip(1) {
            assert_eq!(decompose(&ctx, u).unwrap(), CircleDecomposition { u, lambda: Elem::ONE });
        }
        assert!(decompose(&ctx, Elem::ZERO).is_err());
    }

    #[test]
    fn decompose_g7_in_gf16() {
        let ctx = gf(4);
        let g = ctx.generator();
        let x = ctx.pow(g, 7);
        // oracle: search GF(4)* x circle for the factorization
        let sub = ctx.subfield_elements(2).unwrap();
        let circle = unit_circle(&ctx).unwrap();
        let found: Vec<_> = sub[1..]
            .iter()
            .flat_map(|&u| circle.iter().map(move |&l| (u, l)))
            .filter(|&(u, l)| ctx.mul(u, l) == x)
            .collect();
        assert_eq!(found, vec![(ctx.pow(g, 10), ctx.pow(g, 12))]);
        let d = decompose(&ctx, x).unwrap();
        assert_eq!((d.u, d.lambda), (ctx.pow(g, 10), ctx.pow(g, 12)));
    }

    #[test]
    fn small_quadratics() {
        let ctx = gf(3);
        let (a, b) = solve_quadratic(&ctx, Elem::ONE, Elem::ZERO).unwrap().unwrap();
        let mut roots = [a, b];
        roots.sort();
        assert_eq!(roots, [Elem::ZERO, Elem::ONE]);

        let ctx = gf(2);
        let g = ctx.generator();
        // oracle: try every element
        assert!(ctx
            .elements()
            .all(|x| !ctx.add(ctx.add(ctx.mul(x, x), x), g).is_zero()));
        assert_eq!(solve_quadratic(&ctx, Elem::ONE, g).unwrap(), None);
        assert!(solve_quadratic(&ctx, Elem::ZERO, g).is_err());
    }

    #[test]
    fn roots_sum_to_u() {
        let ctx = gf(6);
        for u in ctx.elements().skip(1) {
            for v in ctx.elements() {
                if let Some((a, b)) = solve_quadratic(&ctx, u, v).unwrap() {
                    assert_ne!(a, b);
                    assert_eq!(ctx.add(a, b), u);
                }
            }
        }
    }

    #[test]
    fn sqrt_squares_back() {
        let ctx = gf(7);
        for x in ctx.elements() {
            let r = sqrt(&ctx, x).unwrap();
            assert_eq!(ctx.mul(r, r), x);
        }
    }
}
