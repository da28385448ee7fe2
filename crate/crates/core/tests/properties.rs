//! Randomized invariants of the exact and numeric layers.

use apery_moments::exactnum::{rat, BigFloat, PowerSeries, QSqrt2, Rational};
use apery_moments::modular::QExpansion;
use apery_moments::moments::{graded_panels, QuadratureSpec};
use num_traits::Signed;
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational> {
    (-200i64..200, 1i64..50).prop_map(|(n, d)| rat(n, d))
}

fn qsqrt2() -> impl Strategy<Value = QSqrt2> {
    (rational(), rational()).prop_map(|(a, b)| QSqrt2::new(a, b))
}

fn series(order: usize) -> impl Strategy<Value = PowerSeries<Rational>> {
    proptest::collection::vec(rational(), order).prop_map(move |c| PowerSeries::new(c, order))
}

fn float(v: &QSqrt2, prec: usize) -> BigFloat {
    let s2 = BigFloat::from_i64(2, prec).sqrt();
    BigFloat::from_rational(&v.a, prec) + BigFloat::from_rational(&v.b, prec) * s2
}

proptest! {
    #[test]
    fn field_axioms(x in qsqrt2(), y in qsqrt2(), z in qsqrt2()) {
        prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!(&(&x - &y) + &y, x.clone());
        if let Some(inv) = x.inverse() {
            prop_assert_eq!(&x * &inv, QSqrt2::from_ints(1, 0));
        } else {
            prop_assert_eq!(x.sign(), 0);
        }
    }

    #[test]
    fn sign_matches_float(x in qsqrt2()) {
        let f = float(&x, 200);
        let s = if f.is_zero() { 0 } else if f.is_negative() { -1 } else { 1 };
        prop_assert_eq!(x.sign(), s);
    }

    #[test]
    fn sign_near_cancellation(k in 1i64..10_000) {
        // a + b√2 with a the nearest integer to −b√2, so the sum nearly cancels.
        let b = Rational::from_integer(k.into());
        let a = rat((-(k as f64) * std::f64::consts::SQRT_2).round() as i64, 1);
        let x = QSqrt2::new(a, b);
        let f = float(&x, 400);
        let s = if f.is_zero() { 0 } else if f.is_negative() { -1 } else { 1 };
        prop_assert_eq!(x.sign(), s);
    }

    #[test]
    fn conversion_error_bound(x in qsqrt2(), prec in 64usize..300) {
        let exact = float(&x, prec + 200);
        let got = x.to_bigfloat(prec).with_prec(prec + 200);
        let scale = x.a.clone().abs() + x.b.clone().abs() * rat(3, 2);
        let bound = BigFloat::from_rational(&scale, 64) * BigFloat::epsilon(prec).with_prec(64) * 4;
        prop_assert!((got - exact).abs() <= bound);
    }

    #[test]
    fn series_div_round_trip(f in series(12), g in series(12)) {
        prop_assume!(g.coeff(0) != &rat(0, 1));
        let h = f.mul(&g);
        prop_assert_eq!(h.div(&g).unwrap(), f.clone());
        prop_assert_eq!(f.mul(&g.inverse().unwrap()).mul(&g), f);
    }

    #[test]
    fn theta_is_a_derivation(f in series(10), g in series(10), a in -3i64..3, b in -3i64..3, d in 1i64..4) {
        let f = QExpansion::new(rat(a, d), f);
        let g = QExpansion::new(rat(b, d), g);
        let lhs = f.mul(&g).theta();
        let r1 = f.theta().mul(&g);
        let r2 = f.mul(&g.theta());
        prop_assert_eq!(&lhs.lead, &r1.lead);
        prop_assert_eq!(lhs.unit, r1.unit.add(&r2.unit));
    }

    #[test]
    fn panels_tile_the_interval(lo in -5.0f64..5.0, w in 0.01f64..40.0, ratio in 0.2f64..0.8,
                                levels in 1usize..30, gl: bool, gr: bool) {
        let spec = QuadratureSpec { ratio, levels, prec: 128, ..QuadratureSpec::default() };
        let a = BigFloat::from_f64(lo, 128);
        let b = BigFloat::from_f64(lo + w, 128);
        let p = graded_panels(&a, &b, gl, gr, &spec);
        prop_assert_eq!(&p[0].a, &a);
        prop_assert_eq!(&p[p.len() - 1].b, &b);
        for w in p.windows(2) {
            prop_assert_eq!(&w[0].b, &w[1].a);
        }
        prop_assert!(p.iter().all(|q| q.a < q.b));
    }
}
