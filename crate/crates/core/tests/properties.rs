use std::collections::HashSet;
use std::sync::OnceLock;

use proptest::prelude::*;

use permupoly::circle::{decompose, on_unit_circle};
use permupoly::perm::{is_permutation_with, monomial_pp_check};
use permupoly::poly::{parse_poly, reduce_mod_field};
use permupoly::{CompositePoly, Elem, Exec, FieldCtx, SparsePoly, Term};

// (p, n): binary with and without log tables, odd characteristic, prime fields
const SHAPES: [(u64, u32); 7] = [(2, 1), (2, 8), (2, 21), (3, 5), (5, 4), (7, 1), (13, 2)];

fn fields() -> &'static [FieldCtx] {
    static FIELDS: OnceLock<Vec<FieldCtx>> = OnceLock::new();
    FIELDS.get_or_init(|| {
        SHAPES
            .iter()
            .map(|&(p, n)| FieldCtx::new(p, n, None).unwrap())
            .collect()
    })
}

fn field_and<T: std::fmt::Debug>(
    k: usize,
    f: impl Fn(&'static FieldCtx) -> BoxedStrategy<T> + 'static,
) -> impl Strategy<Value = (&'static FieldCtx, T)> {
    (0..fields().len().min(k)).prop_flat_map(move |i| {
        let ctx = &fields()[i];
        f(ctx).prop_map(move |v| (ctx, v))
    })
}

fn elem(ctx: &'static FieldCtx) -> BoxedStrategy<Elem> {
    (0..ctx.order()).prop_map(Elem::from_code).boxed()
}

fn nonzero(ctx: &'static FieldCtx) -> BoxedStrategy<Elem> {
    (1..ctx.order()).prop_map(Elem::from_code).boxed()
}

fn schoolbook(ctx: &FieldCtx, a: Elem, e: u64) -> Elem {
    (0..e).fold(Elem::ONE, |acc, _| ctx.mul(acc, a))
}

proptest! {
    #[test]
    fn ring_axioms((ctx, (a, b, c)) in field_and(7, |ctx| (elem(ctx), elem(ctx), elem(ctx)).boxed())) {
        prop_assert_eq!(ctx.add(a, b), ctx.add(b, a));
        prop_assert_eq!(ctx.mul(a, b), ctx.mul(b, a));
        prop_assert_eq!(ctx.add(ctx.add(a, b), c), ctx.add(a, ctx.add(b, c)));
        prop_assert_eq!(ctx.mul(ctx.mul(a, b), c), ctx.mul(a, ctx.mul(b, c)));
        prop_assert_eq!(ctx.mul(a, ctx.add(b, c)), ctx.add(ctx.mul(a, b), ctx.mul(a, c)));
        prop_assert_eq!(ctx.add(a, ctx.neg(a)), Elem::ZERO);
        prop_assert_eq!(ctx.sub(ctx.add(a, b), b), a);
        prop_assert_eq!(ctx.mul(a, Elem::ONE), a);
        prop_assert_eq!(ctx.mul(a, b), ctx.mul_slow(a, b));
    }

    #[test]
    fn inverses((ctx, a) in field_and(7, nonzero)) {
        let inv = ctx.inv(a).unwrap();
        prop_assert_eq!(ctx.mul(a, inv), Elem::ONE);
        prop_assert_eq!(ctx.pow(a, -1), inv);
        prop_assert_eq!(ctx.div(Elem::ONE, a).unwrap(), inv);
    }

    #[test]
    fn exponent_laws((ctx, (a, e1, e2)) in field_and(7, |ctx| (nonzero(ctx), -2000i64..2000, -2000i64..2000).boxed())) {
        prop_assert_eq!(ctx.pow(a, e1 + e2), ctx.mul(ctx.pow(a, e1), ctx.pow(a, e2)));
        prop_assert_eq!(ctx.pow(ctx.pow(a, e1), e2), ctx.pow(a, e1 * e2));
        prop_assert_eq!(ctx.pow(a, ctx.order() as i64 - 1), Elem::ONE);
    }

    #[test]
    fn pow_matches_repeated_multiplication((ctx, (a, e)) in field_and(7, |ctx| (elem(ctx), 0u64..300).boxed())) {
        prop_assert_eq!(ctx.pow_u64(a, e), schoolbook(ctx, a, e));
    }

    #[test]
    fn zero_exponent_convention((ctx, e) in field_and(7, |_| (-50i64..50).boxed())) {
        let z = ctx.pow_flagged(Elem::ZERO, e);
        prop_assert_eq!(z.value, if e == 0 { Elem::ONE } else { Elem::ZERO });
        prop_assert_eq!(z.zero_to_negative, e < 0);
    }

    #[test]
    fn frobenius_is_a_field_automorphism((ctx, (a, b, i)) in field_and(7, |ctx| (elem(ctx), elem(ctx), -5i64..10).boxed())) {
        let f = |x| ctx.frobenius(x, i);
        prop_assert_eq!(f(ctx.add(a, b)), ctx.add(f(a), f(b)));
        prop_assert_eq!(f(ctx.mul(a, b)), ctx.mul(f(a), f(b)));
        prop_assert_eq!(ctx.frobenius(a, ctx.degree() as i64), a);
        prop_assert_eq!(ctx.frobenius(a, 1), ctx.pow_u64(a, ctx.characteristic() as u64));
    }

    #[test]
    fn trace_lands_in_prime_field((ctx, (a, b)) in field_and(7, |ctx| (elem(ctx), elem(ctx)).boxed())) {
        let t = ctx.trace(a);
        prop_assert!(t.code() < ctx.characteristic());
        prop_assert_eq!(ctx.trace(ctx.add(a, b)), ctx.add(t, ctx.trace(b)));
    }

    #[test]
    fn element_text_round_trip((ctx, a) in field_and(7, elem)) {
        prop_assert_eq!(ctx.parse_element(&ctx.format(a)).unwrap(), a);
        prop_assert_eq!(ctx.parse_element(&a.to_string()).unwrap(), a);
    }

    #[test]
    fn circle_decomposition_multiplies_back(m in 1u32..=6, raw in any::<u32>()) {
        let ctx = FieldCtx::binary(2 * m).unwrap();
        let x = Elem::from_code(1 + raw % (ctx.order() - 1));
        let d = decompose(&ctx, x).unwrap();
        prop_assert_eq!(ctx.mul(d.u, d.lambda), x);
        prop_assert!(ctx.in_subfield(m, d.u).unwrap());
        prop_assert!(on_unit_circle(&ctx, d.lambda).unwrap());
    }
}

fn small_field(ctx: &'static FieldCtx) -> bool {
    ctx.order() <= 1 << 12
}

fn composite(ctx: &'static FieldCtx) -> BoxedStrategy<CompositePoly> {
    let base = prop::collection::vec((0u64..40, elem(ctx)), 1..4)
        .prop_map(move |t| SparsePoly::from_terms(ctx, t));
    let term = (elem(ctx), base, -70i64..70).prop_map(|(c, b, e)| Term::new(c, b, e));
    prop::collection::vec(term, 0..4).prop_map(CompositePoly::new).boxed()
}

fn small_fields_and<T: std::fmt::Debug>(
    f: impl Fn(&'static FieldCtx) -> BoxedStrategy<T> + 'static,
) -> impl Strategy<Value = (&'static FieldCtx, T)> {
    let idx: Vec<usize> = (0..fields().len()).filter(|&i| small_field(&fields()[i])).collect();
    prop::sample::select(idx).prop_flat_map(move |i| {
        let ctx = &fields()[i];
        f(ctx).prop_map(move |v| (ctx, v))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn poly_text_round_trip((ctx, f) in small_fields_and(composite)) {
        let text = f.to_text(ctx);
        let back = parse_poly(ctx, &text).unwrap();
        prop_assert_eq!(&back, &f, "{}", text);
    }

    #[test]
    fn reduction_preserves_values((ctx, f) in small_fields_and(composite)) {
        let r = reduce_mod_field(ctx, &f).unwrap();
        prop_assert!(r.is_reduced(ctx));
        for x in ctx.elements() {
            prop_assert_eq!(r.eval(ctx, x), f.evaluate(ctx, x));
        }
    }

    #[test]
    fn permutation_verdict_matches_image_set((ctx, f) in small_fields_and(composite)) {
        let image: HashSet<Elem> = ctx.elements().map(|x| f.evaluate(ctx, x)).collect();
        let seq = is_permutation_with(ctx, &f, Exec::Sequential).unwrap();
        let par = is_permutation_with(ctx, &f, Exec::Threads(3)).unwrap();
        prop_assert_eq!(&seq, &par);
        prop_assert_eq!(seq.image_size, image.len() as u64);
        prop_assert_eq!(seq.is_permutation(), image.len() == ctx.order() as usize);
        if let Some((a, b)) = seq.witness {
            prop_assert_ne!(a, b);
            prop_assert_eq!(f.evaluate(ctx, a), f.evaluate(ctx, b));
        }
    }

    #[test]
    fn monomial_criterion((ctx, e) in small_fields_and(|ctx| (1u64..ctx.order() as u64 * 3).boxed())) {
        let f = CompositePoly::new([Term::monomial(Elem::ONE, e as i64)]);
        let brute = is_permutation_with(ctx, &f, Exec::Sequential).unwrap();
        prop_assert_eq!(brute.is_permutation(), monomial_pp_check(ctx, e));
    }
}
