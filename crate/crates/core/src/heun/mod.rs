//! Heun general functions H(a, q; α, β, γ, δ; z).
//!
//! The Maclaurin coefficients obey
//!
//! R_n p_{n+1} − (q + Q_n) p_n + P_n p_{n−1} = 0,  p_0 = 1, p_1 = q/(aγ),
//!
//! with R_n = a(n+1)(n+γ), Q_n = n((n−1+γ)(1+a) + aδ + ε) and
//! P_n = (n−1+α)(n−1+β), where ε = α + β + 1 − γ − δ. Coefficient streams are
//! exact in ℚ(√2); [`eval`] sums them numerically and [`certify`] proves
//! positivity of every coefficient.

pub mod certify;
pub mod eval;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{consts, int, rat, Poly, PowerSeries, QSqrt2, Rational};

pub use certify::{certify_positive, scan_ratios, CertifyFailure, PositivityCertificate, Witness};
pub use eval::{heun_eval, HeunEvaluator, HeunValue};

#[derive(Clone, Debug, PartialEq)]
pub struct HeunParams {
    pub a: QSqrt2,
    pub q: QSqrt2,
    pub alpha: QSqrt2,
    pub beta: QSqrt2,
    pub gamma: QSqrt2,
    pub delta: QSqrt2,
}

impl HeunParams {
    pub fn new(
        a: QSqrt2,
        q: QSqrt2,
        alpha: QSqrt2,
        beta: QSqrt2,
        gamma: QSqrt2,
        delta: QSqrt2,
    ) -> Result<Self> {
        let p = HeunParams {
            a,
            q,
            alpha,
            beta,
            gamma,
            delta,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.a.is_zero() {
            return Err(Error::InvalidParameter("Heun parameter a must be nonzero".into()));
        }
        if self.gamma.is_rational() {
            let g = &self.gamma.a;
            if g.is_integer() && *g <= int(0) {
                return Err(Error::InvalidParameter(format!(
                    "Heun parameter gamma = {g} is zero or a negative integer"
                )));
            }
        }
        Ok(())
    }

    /// ε = α + β + 1 − γ − δ.
    pub fn epsilon(&self) -> QSqrt2 {
        &(&(&(&self.alpha + &self.beta) + 1) - &self.gamma) - &self.delta
    }

    /// R_n, Q_n, P_n as polynomials in n.
    pub fn recurrence_polys(&self) -> [Poly<QSqrt2>; 3] {
        let n = Poly::<QSqrt2>::x();
        let shift = |s: QSqrt2| Poly::x_plus(s);
        let one = QSqrt2::one();
        let r = shift(one.clone())
            .mul(&shift(self.gamma.clone()))
            .scale(&self.a);
        let inner = shift(&self.gamma - 1)
            .scale(&(&one + &self.a))
            .add(&Poly::constant(&(&self.a * &self.delta) + &self.epsilon()));
        let q = n.mul(&inner);
        let p = shift(&self.alpha - 1).mul(&shift(&self.beta - 1));
        [r, q, p]
    }

    /// (R_n, Q_n, P_n) at an integer n.
    pub fn recurrence_at(&self, n: u64) -> (QSqrt2, QSqrt2, QSqrt2) {
        let nn = QSqrt2::from_ints(n as i64, 0);
        let r = &(&(&nn + 1) * &(&nn + &self.gamma)) * &self.a;
        let inner = &(&(&nn - 1) + &self.gamma) * &(&self.a + 1);
        let inner = &(&inner + &(&self.a * &self.delta)) + &self.epsilon();
        let q = &nn * &inner;
        let p = &(&(&nn - 1) + &self.alpha) * &(&(&nn - 1) + &self.beta);
        (r, q, p)
    }

    /// The same parameters with a different accessory parameter q.
    pub fn with_q(&self, q: QSqrt2) -> Self {
        HeunParams { q, ..self.clone() }
    }
}

/// Parameters (a₁, q₁; 3/2, 3/2, 3/2, 1) of the first right-branch factor.
pub fn params_l2() -> HeunParams {
    let h = QSqrt2::rational(rat(3, 2));
    HeunParams::new(consts::a1(), consts::q1(), h.clone(), h.clone(), h, QSqrt2::one())
        .expect("valid constant parameters")
}

/// Parameters (a₁, q₂; 1, 1, 1/2, 1) of the second right-branch factor.
pub fn params_l6() -> HeunParams {
    let one = QSqrt2::one();
    HeunParams::new(
        consts::a1(),
        consts::q2(),
        one.clone(),
        one.clone(),
        QSqrt2::rational(rat(1, 2)),
        one,
    )
    .expect("valid constant parameters")
}

/// Parameters (a₂, q₄; 1/2, 1/2, 1, 1/2) whose square generates the Apéry numbers.
pub fn params_apery() -> HeunParams {
    let h = QSqrt2::rational(rat(1, 2));
    HeunParams::new(consts::a2(), consts::q4(), h.clone(), h.clone(), QSqrt2::one(), h)
        .expect("valid constant parameters")
}

#[derive(Clone, Debug, PartialEq)]
pub struct HeunSeries {
    pub params: HeunParams,
    pub coeffs: Vec<QSqrt2>,
}

impl HeunSeries {
    /// R_n p_{n+1} − (q+Q_n)p_n + P_n p_{n−1} for 1 ≤ n < N.
    pub fn residuals(&self) -> Vec<QSqrt2> {
        let c = &self.coeffs;
        (1..c.len().saturating_sub(1))
            .map(|n| {
                let (r, q, p) = self.params.recurrence_at(n as u64);
                let lhs = &(&r * &c[n + 1]) - &(&(&self.params.q + &q) * &c[n]);
                &lhs + &(&p * &c[n - 1])
            })
            .collect()
    }
}

/// Exact p_0..=p_N.
pub fn heun_coeffs(params: &HeunParams, n_max: usize) -> Result<HeunSeries> {
    params.validate()?;
    let mut c = vec![QSqrt2::one()];
    if n_max >= 1 {
        c.push(&params.q / &(&params.a * &params.gamma));
    }
    for n in 1..n_max {
        let (r, q, p) = params.recurrence_at(n as u64);
        if r.is_zero() {
            return Err(Error::InvalidParameter(format!("R_{n} vanishes")));
        }
        let next = &(&(&(&params.q + &q) * &c[n]) - &(&p * &c[n - 1])) / &r;
        c.push(next);
    }
    Ok(HeunSeries {
        params: params.clone(),
        coeffs: c,
    })
}

/// Coefficients of H(a₂, q₄; 1/2, 1/2, 1, 1/2; c·x)², n < `order`.
pub fn apery_square_coeffs(order: usize) -> Result<Vec<QSqrt2>> {
    let h = heun_coeffs(&params_apery(), order)?;
    let s = PowerSeries::new(h.coeffs, order).scale_arg(&consts::c());
    Ok(s.mul(&s).into_coeffs())
}

/// True when every entry is an integer with no √2 part; returns those integers.
pub fn as_integers(v: &[QSqrt2]) -> Option<Vec<Rational>> {
    v.iter()
        .map(|x| (x.b.is_zero() && x.a.is_integer()).then(|| x.a.clone()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::apery::apery_binomial;

    #[test]
    fn first_coefficients() {
        let s = heun_coeffs(&params_apery(), 3).unwrap();
        assert_eq!(s.coeffs[0], QSqrt2::one());
        assert_eq!(s.coeffs[1], &consts::q4() / &consts::a2());
        assert!(s.residuals().iter().all(|r| r.is_zero()));
        let s = heun_coeffs(&params_l2(), 40).unwrap();
        assert!(s.residuals().iter().all(|r| r.is_zero()));
    }

    #[test]
    fn epsilon_identity() {
        let p = params_l2();
        assert_eq!(p.epsilon(), QSqrt2::rational(rat(3, 2)));
        assert_eq!(&(&(&p.alpha + &p.beta) + 1) - &(&p.gamma + &p.delta), p.epsilon());
        assert_eq!(params_l6().epsilon(), QSqrt2::rational(rat(3, 2)));
        assert_eq!(params_apery().epsilon(), QSqrt2::rational(rat(1, 2)));
    }

    #[test]
    fn polys_match_pointwise() {
        for p in [params_l2(), params_l6(), params_apery()] {
            let [r, q, pp] = p.recurrence_polys();
            for n in 0..7u64 {
                let (r1, q1, p1) = p.recurrence_at(n);
                let nn = QSqrt2::from_ints(n as i64, 0);
                assert_eq!(r.eval(&nn), r1);
                assert_eq!(q.eval(&nn), q1);
                assert_eq!(pp.eval(&nn), p1);
            }
        }
    }

    #[test]
    fn gamma_validation() {
        let p = params_l2();
        let bad = HeunParams::new(
            p.a.clone(),
            p.q.clone(),
            p.alpha.clone(),
            p.beta.clone(),
            QSqrt2::from_ints(-2, 0),
            p.delta.clone(),
        );
        assert!(bad.is_err());
        assert!(HeunParams::new(
            QSqrt2::zero(),
            p.q.clone(),
            p.alpha.clone(),
            p.beta.clone(),
            p.gamma.clone(),
            p.delta.clone()
        )
        .is_err());
    }

    #[test]
    fn square_gives_apery_numbers() {
        let v = apery_square_coeffs(8).unwrap();
        let ints = as_integers(&v).expect("integral coefficients");
        assert_eq!(ints[2], int(73));
        for (n, a) in ints.iter().enumerate() {
            assert_eq!(a.numer(), &apery_binomial(n as u64));
        }
    }
}
