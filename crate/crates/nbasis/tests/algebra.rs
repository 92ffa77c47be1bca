//! Property tests for the exact arithmetic layers: field axioms on a
//! prime field, an extension, and a two-level tower, plus ring laws
//! for polynomials over each.

use std::sync::{Arc, OnceLock};

use proptest::prelude::*;

use nbasis::field::{extend, frobenius, make_field, FFElement, FieldCtx};
use nbasis::poly::Poly;

fn f7() -> Arc<FieldCtx> {
    static CTX: OnceLock<Arc<FieldCtx>> = OnceLock::new();
    CTX.get_or_init(|| make_field(7, 1, 0).unwrap()).clone()
}

fn f32() -> Arc<FieldCtx> {
    static CTX: OnceLock<Arc<FieldCtx>> = OnceLock::new();
    CTX.get_or_init(|| {
        let base = make_field(2, 1, 0).unwrap();
        extend(&base, 5, 0).unwrap()
    })
    .clone()
}

fn f9_cubed() -> Arc<FieldCtx> {
    static CTX: OnceLock<Arc<FieldCtx>> = OnceLock::new();
    CTX.get_or_init(|| {
        let f9 = make_field(3, 2, 0).unwrap();
        extend(&f9, 3, 0).unwrap()
    })
    .clone()
}

fn elem(ctx: &Arc<FieldCtx>, index: u128) -> FFElement {
    FFElement::from_index(ctx, index % ctx.cardinality()).unwrap()
}

fn field_laws(ctx: &Arc<FieldCtx>, ia: u128, ib: u128, ic: u128) {
    let (a, b, c) = (elem(ctx, ia), elem(ctx, ib), elem(ctx, ic));
    let zero = FFElement::zero(ctx);
    let one = FFElement::one(ctx);
    assert_eq!(a.add(&b), b.add(&a));
    assert_eq!(a.mul(&b), b.mul(&a));
    assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
    assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
    assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
    assert_eq!(a.add(&zero), a);
    assert_eq!(a.mul(&one), a);
    assert_eq!(a.sub(&a), zero);
    assert_eq!(a.add(&a.neg()), zero);
    if !a.is_zero() {
        assert_eq!(a.mul(&a.inv().unwrap()), one);
    }
    // Index transport is a bijection on the canonical enumeration.
    assert_eq!(elem(ctx, a.to_index()), a);
}

fn frobenius_laws(ctx: &Arc<FieldCtx>, ia: u128, ib: u128) {
    let (a, b) = (elem(ctx, ia), elem(ctx, ib));
    let q = match ctx.base() {
        Some(base) => base.cardinality(),
        None => ctx.cardinality(),
    };
    assert_eq!(frobenius(&a.add(&b), 1), frobenius(&a, 1).add(&frobenius(&b, 1)));
    assert_eq!(frobenius(&a.mul(&b), 1), frobenius(&a, 1).mul(&frobenius(&b, 1)));
    assert_eq!(frobenius(&a, 1), a.pow(q));
    assert_eq!(frobenius(&a, ctx.degree() as u64), a);
}

fn poly_from(ctx: &Arc<FieldCtx>, coords: &[u128]) -> Poly {
    let coeffs: Vec<FFElement> = coords.iter().map(|&i| elem(ctx, i)).collect();
    Poly::from_elem_coeffs(ctx, coeffs)
}

fn poly_laws(ctx: &Arc<FieldCtx>, ca: &[u128], cb: &[u128], cc: &[u128]) {
    let (a, b, c) = (poly_from(ctx, ca), poly_from(ctx, cb), poly_from(ctx, cc));
    assert_eq!(a.add(&b), b.add(&a));
    assert_eq!(a.mul(&b), b.mul(&a));
    assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
    assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
    assert_eq!(a.sub(&a), Poly::zero(ctx));
    if !b.is_zero() {
        let (quot, rem) = a.divrem(&b).unwrap();
        assert_eq!(quot.mul(&b).add(&rem), a);
        if let (Some(dr), Some(db)) = (rem.deg(), b.deg()) {
            assert!(dr < db);
        }
    }
}

proptest! {
    #[test]
    fn prime_field_laws(a in 0u128..7, b in 0u128..7, c in 0u128..7) {
        field_laws(&f7(), a, b, c);
    }

    #[test]
    fn extension_field_laws(a in 0u128..32, b in 0u128..32, c in 0u128..32) {
        field_laws(&f32(), a, b, c);
    }

    #[test]
    fn tower_field_laws(a in 0u128..729, b in 0u128..729, c in 0u128..729) {
        field_laws(&f9_cubed(), a, b, c);
    }

    #[test]
    fn extension_frobenius_laws(a in 0u128..32, b in 0u128..32) {
        frobenius_laws(&f32(), a, b);
    }

    #[test]
    fn tower_frobenius_laws(a in 0u128..729, b in 0u128..729) {
        frobenius_laws(&f9_cubed(), a, b);
    }

    #[test]
    fn prime_poly_laws(
        a in proptest::collection::vec(0u128..7, 0..6),
        b in proptest::collection::vec(0u128..7, 0..6),
        c in proptest::collection::vec(0u128..7, 0..6),
    ) {
        poly_laws(&f7(), &a, &b, &c);
    }

    #[test]
    fn extension_poly_laws(
        a in proptest::collection::vec(0u128..9, 0..5),
        b in proptest::collection::vec(0u128..9, 0..5),
        c in proptest::collection::vec(0u128..9, 0..5),
    ) {
        let f9 = make_field(3, 2, 0).unwrap();
        poly_laws(&f9, &a, &b, &c);
    }

    #[test]
    fn cyclic_reduction_is_a_ring_map(
        a in proptest::collection::vec(0u128..2, 0..12),
        b in proptest::collection::vec(0u128..2, 0..12),
    ) {
        let ctx = make_field(2, 1, 0).unwrap();
        let n = 5;
        let (pa, pb) = (poly_from(&ctx, &a), poly_from(&ctx, &b));
        let direct = pa.mul(&pb).mod_xn_minus_1(n);
        let reduced = pa.mod_xn_minus_1(n).mul(&pb.mod_xn_minus_1(n)).mod_xn_minus_1(n);
        prop_assert_eq!(direct, reduced);
    }
}
