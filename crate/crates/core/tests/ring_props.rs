mod common;

use common::*;
use opcalc::ring::{poly_arith, ps_arith, PolyOp, PolyOperand, PowerSeries1, Ring, SeriesOp};
use proptest::prelude::*;

proptest! {
    #[test]
    fn ring_axioms((r, (a, b, c)) in ring_with(|r| (value(r), value(r), value(r)))) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &r.one(), a.clone());
        prop_assert_eq!(&a + &r.zero(), a.clone());
        prop_assert!((&a + &(-a.clone())).is_zero());
    }

    #[test]
    fn polynomial_product_is_convolution((_r, (p, q)) in ring_with(|r| (poly(r, 10), poly(r, 10)))) {
        let prod = poly_arith(PolyOp::Mul, &p, PolyOperand::Poly(&q)).unwrap();
        let top = p.degree().unwrap_or(0) + q.degree().unwrap_or(0);
        for k in 0..=top + 1 {
            prop_assert_eq!(prod.coeff(k), convolution(&p, &q, k));
        }
    }

    #[test]
    fn polynomial_sum_is_coefficientwise((_r, (p, q)) in ring_with(|r| (poly(r, 10), poly(r, 10)))) {
        let sum = poly_arith(PolyOp::Add, &p, PolyOperand::Poly(&q)).unwrap();
        for k in 0..=11 {
            prop_assert_eq!(sum.coeff(k), &p.coeff(k) + &q.coeff(k));
        }
    }

    #[test]
    fn exp_times_exp_of_negative_is_one(cs in prop::collection::vec(value(Q), 1..8)) {
        let order = cs.len();
        let mut coeffs = vec![Q.zero()];
        coeffs.extend(cs);
        let a = PowerSeries1::new(Q, order, coeffs).unwrap();
        let e = ps_arith(SeriesOp::Exp, &a, None).unwrap();
        let f = ps_arith(SeriesOp::Exp, &a.neg(), None).unwrap();
        prop_assert_eq!(ps_arith(SeriesOp::Mul, &e, Some(&f)).unwrap(), PowerSeries1::one(Q, order));
    }

    #[test]
    fn series_inverse((r, cs) in ring_with(|r| prop::collection::vec(value(r), 1..8))) {
        let order = cs.len() - 1;
        let mut cs = cs;
        cs[0] = r.one();
        let a = PowerSeries1::new(r, order, cs).unwrap();
        prop_assert_eq!(a.checked_mul(&a.inverse().unwrap()).unwrap(), PowerSeries1::one(r, order));
    }

    #[test]
    fn composition_is_substitution(p in poly(Q, 5), q in poly(Q, 4), t in value(Q)) {
        // p(q(y)) with q(0) = 0, truncated at an order above both degrees' product
        let q = q.shift(1);
        let order = 30;
        let comp = PowerSeries1::from_poly(&p, order).compose(&PowerSeries1::from_poly(&q, order)).unwrap();
        prop_assert_eq!(comp.to_poly().eval(&t), p.eval(&q.eval(&t)));
    }
}

#[test]
fn integers_reject_fractions() {
    assert!(Ring::Integers.parse_value("1/2").is_err());
    assert!(Ring::Mod(7).parse_value("3/2").is_err());
    assert_eq!(
        Ring::Mod(7).parse_value("-1").unwrap(),
        Ring::Mod(7).from_int(6)
    );
}
