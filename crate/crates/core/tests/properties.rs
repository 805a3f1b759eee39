//! Algebraic invariants checked on random inputs.

use proptest::prelude::*;

use diamond_core::composed::composed_product;
use diamond_core::poly::monic_from_index;
use diamond_core::{BivarPoly, DiamondOp, FieldCtx, FieldElem, Limits, Poly};

fn f(p: u64) -> FieldCtx {
    FieldCtx::prime(p).unwrap()
}

/// Fields covering each multiplication route: prime bases, small
/// non-prime bases, a large two-level base and a three-level tower.
fn fields() -> Vec<FieldCtx> {
    let f4 = f(2).extension_of_degree(2).unwrap();
    let f9 = f(3).extension_of_degree(2).unwrap();
    let f289 = f(17).extension_of_degree(2).unwrap();
    let f512 = f(2)
        .extension_of_degree(3)
        .unwrap()
        .extension_of_degree(3)
        .unwrap();
    vec![
        f(2).extension_of_degree(6).unwrap(),
        f(5).extension_of_degree(3).unwrap(),
        f4.extension_of_degree(5).unwrap(),
        f9.extension_of_degree(2).unwrap(),
        f289.extension_of_degree(2).unwrap(),
        f512.extension_of_degree(2).unwrap(),
    ]
}

fn elem(k: &FieldCtx, seed: u128) -> FieldElem {
    k.element_from_index(seed % k.cardinality())
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::with_cases(64) })]

    #[test]
    fn field_axioms(which in 0usize..6, a in any::<u128>(), b in any::<u128>(), c in any::<u128>()) {
        let k = &fields()[which];
        let (a, b, c) = (elem(k, a), elem(k, b), elem(k, c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        }
        prop_assert_eq!(a.pow(k.cardinality()), a);
    }

    #[test]
    fn frobenius_is_a_homomorphism(which in 0usize..6, a in any::<u128>(), b in any::<u128>()) {
        let k = &fields()[which];
        let (a, b) = (elem(k, a), elem(k, b));
        for q in [k.p() as u128, k.base().unwrap().cardinality()] {
            let s = |x: &FieldElem| x.frobenius(q).unwrap();
            prop_assert_eq!(s(&(&a + &b)), &s(&a) + &s(&b));
            prop_assert_eq!(s(&(&a * &b)), &s(&a) * &s(&b));
        }
    }

    #[test]
    fn membership_routes_agree(which in 0usize..4, a in any::<u128>()) {
        let k = &fields()[which];
        let a = elem(k, a);
        let q = k.p() as u128;
        for m in (1..=k.abs_degree()).filter(|m| k.abs_degree().is_multiple_of(*m)) {
            prop_assert_eq!(a.in_calf(q, m).unwrap(), a.in_calf_by_order(q, m, Limits::default().cap).unwrap());
        }
        prop_assert_eq!(a.subfield_degree(q).unwrap(), a.frobenius_orbit(q).unwrap().len());
    }

    #[test]
    fn diamonds_commute_with_frobenius(
        coeffs in proptest::collection::vec(0u128..3, 9),
        a in any::<u128>(),
        b in any::<u128>(),
    ) {
        let base = f(3);
        let rows: Vec<Vec<FieldElem>> =
            coeffs.chunks(3).map(|r| r.iter().map(|&c| base.element_from_index(c)).collect()).collect();
        let phi = BivarPoly::new(&base, rows);
        let k = base.extension_of_degree(6).unwrap();
        let (a, b) = (elem(&k, a), elem(&k, b));
        let s = |x: &FieldElem| x.frobenius(3).unwrap();
        for d in [DiamondOp::Add, DiamondOp::Mul, DiamondOp::Bivar(phi)] {
            prop_assert_eq!(s(&d.eval(&a, &b).unwrap()), d.eval(&s(&a), &s(&b)).unwrap());
        }
    }

    #[test]
    fn composed_degree_is_multiplicative(
        p in prop::sample::select(vec![2u64, 3, 5]),
        m in 1usize..4,
        n in 1usize..4,
        i in any::<u128>(),
        j in any::<u128>(),
        op in 0usize..3,
    ) {
        let k = f(p);
        let fp = monic_from_index(&k, m, i % (p as u128).pow(m as u32));
        let gp = monic_from_index(&k, n, j % (p as u128).pow(n as u32));
        let d = [DiamondOp::Add, DiamondOp::Mul, DiamondOp::parse("phi=x*y+x+y", &k).unwrap()][op].clone();
        let h = composed_product(&fp, &gp, &d, 1, &Limits::default()).unwrap().poly;
        prop_assert_eq!(h.degree(), Some(m * n));
        prop_assert!(h.is_monic());
    }

    #[test]
    fn poly_text_round_trip(which in 0usize..6, coeffs in proptest::collection::vec(any::<u128>(), 0..6)) {
        let k = &fields()[which];
        let poly = Poly::new(k, coeffs.iter().map(|&c| elem(k, c)).collect());
        let text = poly.to_string();
        prop_assert_eq!(Poly::parse(&text, k).unwrap(), poly);
    }

    #[test]
    fn element_text_round_trip(which in 0usize..6, a in any::<u128>()) {
        let k = &fields()[which];
        let a = elem(k, a);
        prop_assert_eq!(k.parse_elem(&a.to_string()).unwrap(), a);
    }

    #[test]
    fn bivariate_text_round_trip(coeffs in proptest::collection::vec(0u128..4, 6)) {
        let k = f(2).extension_of_degree(2).unwrap();
        let rows = coeffs.chunks(3).map(|r| r.iter().map(|&c| k.element_from_index(c)).collect()).collect();
        let phi = BivarPoly::new(&k, rows);
        prop_assert_eq!(BivarPoly::parse(&phi.to_string(), &k).unwrap(), phi);
    }
}
