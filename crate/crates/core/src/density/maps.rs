//! The algebraic maps feeding the hypergeometric closed forms.
//!
//! With D = x² − 34x + 1, N = x³ + 30x² − 24x + 1, M = x² − 7x + 1 and
//! K = x³ − 24x² + 30x + 1 (so N + K = 2(x+1)³):
//!
//! μ² = 4/(3 − 3x + √D),           μ₂² = (3 − 3x + √D)/(2(x+1)²),
//! λ  = (N − M√D)/(2(x+1)³),        λ₂  = (N + M√D)/(2(x+1)³).
//!
//! Since N² − M²D = 108x²(x+1)³ and K² − M²D = 108x(x+1)³, each of λ, λ₂,
//! 1 − λ, 1 − λ₂ has a second form, e.g. λ = 54x²/(N + M√D) and
//! 1 − λ₂ = 54x/(K + M√D). The form whose numerator does not cancel is used,
//! which keeps full relative accuracy as λ → 0 or λ₂ → 1 and also removes
//! the (x+1)³ denominator where possible.

use crate::error::{Error, Result};
use crate::exactnum::{BigFloat, Jet};

/// Values of the maps at a real point.
#[derive(Clone, Debug)]
pub struct AlgebraicMaps {
    pub x: BigFloat,
    pub discriminant: BigFloat,
    pub mu: BigFloat,
    pub mu2: BigFloat,
    pub lambda: BigFloat,
    pub lambda2: BigFloat,
    pub one_minus_lambda: BigFloat,
    pub one_minus_lambda2: BigFloat,
}

pub(crate) fn poly(coeffs: &[i64], x: &Jet) -> Jet {
    let p = x.prec();
    let mut acc = Jet::constant(BigFloat::zero(p));
    for &c in coeffs.iter().rev() {
        acc = &(&acc * x) + &Jet::constant(BigFloat::from_i64(c, p));
    }
    acc
}

fn is_constant(j: &Jet) -> bool {
    j.c[1..].iter().all(|v| v.is_zero())
}

/// √ of a jet; a constant jet with value 0 is allowed.
fn sqrt_jet(j: &Jet) -> Jet {
    if is_constant(j) {
        Jet::constant(j.value().sqrt())
    } else {
        j.sqrt()
    }
}

fn konst(v: i64, p: usize) -> Jet {
    Jet::constant(BigFloat::from_i64(v, p))
}

/// The pieces shared by every map at one point.
pub(crate) struct Pieces {
    x: Jet,
    n: Jet,
    k: Jet,
    m_sqrt_d: Jet,
    sqrt_d: Jet,
    same_nm: bool,
    same_km: bool,
}

pub(crate) fn pieces(x: &Jet) -> Result<Pieces> {
    let p = x.prec();
    let mut d = poly(&[1, -34, 1], x);
    if d.value().is_negative() {
        // Round-off at c₀ or c can push D slightly below zero.
        let tol = BigFloat::epsilon(p / 2) * (x.value().abs() * 34 + 1);
        if d.value().abs() > tol {
            return Err(Error::Domain(format!(
                "x = {} lies strictly between c0 and c, where x^2 - 34x + 1 < 0",
                x.value().to_f64()
            )));
        }
        d.c[0] = BigFloat::zero(p);
    }
    if x.value().to_f64() >= 1.0 {
        return Err(Error::Domain(format!(
            "maps are real only for x < 1 here, got {}",
            x.value().to_f64()
        )));
    }
    let sqrt_d = sqrt_jet(&d);
    let m = poly(&[1, -7, 1], x);
    let n = poly(&[1, -24, 30, 1], x);
    let k = poly(&[1, 30, -24, 1], x);
    let sm = m.value().signum();
    Ok(Pieces {
        x: x.clone(),
        same_nm: n.value().signum() == sm,
        same_km: k.value().signum() == sm,
        m_sqrt_d: &m * &sqrt_d,
        n,
        k,
        sqrt_d,
    })
}

impl Pieces {
    fn cube2(&self) -> Jet {
        let x1 = &self.x + &konst(1, self.x.prec());
        (&(&x1 * &x1) * &x1).scale(&BigFloat::from_i64(2, self.x.prec()))
    }

    fn x2_54(&self) -> Jet {
        (&self.x * &self.x).scale(&BigFloat::from_i64(54, self.x.prec()))
    }

    fn x_54(&self) -> Jet {
        self.x.scale(&BigFloat::from_i64(54, self.x.prec()))
    }

    pub fn mu_sq(&self) -> Jet {
        let p = self.x.prec();
        let den = &(&konst(3, p) - &self.x.scale(&BigFloat::from_i64(3, p))) + &self.sqrt_d;
        &konst(4, p) / &den
    }

    pub fn mu2_sq(&self) -> Jet {
        let p = self.x.prec();
        let num = &(&konst(3, p) - &self.x.scale(&BigFloat::from_i64(3, p))) + &self.sqrt_d;
        let x1 = &self.x + &konst(1, p);
        &num / &(&x1 * &x1).scale(&BigFloat::from_i64(2, p))
    }

    pub fn lambda(&self) -> Jet {
        if self.same_nm {
            &self.x2_54() / &(&self.n + &self.m_sqrt_d)
        } else {
            &(&self.n - &self.m_sqrt_d) / &self.cube2()
        }
    }

    pub fn lambda2(&self) -> Jet {
        if self.same_nm {
            &(&self.n + &self.m_sqrt_d) / &self.cube2()
        } else {
            &self.x2_54() / &(&self.n - &self.m_sqrt_d)
        }
    }

    pub fn one_minus_lambda(&self) -> Jet {
        if self.same_km {
            &(&self.k + &self.m_sqrt_d) / &self.cube2()
        } else {
            &self.x_54() / &(&self.k - &self.m_sqrt_d)
        }
    }

    pub fn one_minus_lambda2(&self) -> Jet {
        if self.same_km {
            &self.x_54() / &(&self.k + &self.m_sqrt_d)
        } else {
            &(&self.k - &self.m_sqrt_d) / &self.cube2()
        }
    }
}

/// μ, μ₂, λ, λ₂ at x with x ≤ c₀ (or x ≥ c, where they are not real here)
/// and x > −1.
pub fn algebraic_maps(x: &BigFloat, prec: usize) -> Result<AlgebraicMaps> {
    let x = x.with_prec(prec + 32);
    if x <= BigFloat::from_i64(-1, x.prec()) {
        return Err(Error::Domain("maps need x > -1".into()));
    }
    let pc = pieces(&Jet::constant(x.clone()))?;
    let out = |j: Jet| j.value().with_prec(prec);
    Ok(AlgebraicMaps {
        discriminant: out(poly(&[1, -34, 1], &Jet::constant(x.clone()))),
        mu: out(pc.mu_sq()).sqrt(),
        mu2: out(pc.mu2_sq()).sqrt(),
        lambda: out(pc.lambda()),
        lambda2: out(pc.lambda2()),
        one_minus_lambda: out(pc.one_minus_lambda()),
        one_minus_lambda2: out(pc.one_minus_lambda2()),
        x: x.with_prec(prec),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::consts;

    fn f(v: f64) -> BigFloat {
        BigFloat::from_f64(v, 200)
    }

    #[test]
    fn values_at_zero() {
        let m = algebraic_maps(&f(0.0), 200).unwrap();
        assert_eq!(m.mu.to_f64(), 1.0);
        assert!(m.lambda.is_zero());
        assert!((m.mu2.to_f64() - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(m.lambda2.to_f64(), 1.0);
        assert!(m.one_minus_lambda2.is_zero());
    }

    #[test]
    fn values_at_c0() {
        let c0 = consts::c0().to_bigfloat(200);
        let m = algebraic_maps(&c0, 200).unwrap();
        let z0 = consts::z0().to_bigfloat(200);
        assert!((&m.lambda - &z0).abs().to_f64() < 1e-25);
        assert!((&m.lambda2 - &z0).abs().to_f64() < 1e-25);
    }

    #[test]
    fn identities_on_left_interval() {
        let sqrt2 = BigFloat::from_i64(2, 200).sqrt();
        for v in [1e-9, 1e-4, 0.003, 0.01, 0.02, 0.029] {
            let x = f(v);
            let m = algebraic_maps(&x, 200).unwrap();
            let x1 = &x + 1;
            assert!((&m.mu * &m.mu2 * &x1 - &sqrt2).abs().to_f64() < 1e-50);
            assert!(m.mu.to_f64() > 1.0 && m.mu2.to_f64() > 1.0);
            assert!(m.lambda.is_positive() && m.lambda.to_f64() < 1.0);
            assert!(m.lambda2.is_positive() && m.lambda2.to_f64() < 1.0);
            assert!((&m.lambda + &m.one_minus_lambda - 1).abs().to_f64() < 1e-50);
            assert!((&m.lambda2 + &m.one_minus_lambda2 - 1).abs().to_f64() < 1e-50);
            // λ + λ₂ = N/(x+1)³ and λλ₂ = 27x²/(x+1)³ carry no radical.
            let cube = &x1 * &x1 * &x1;
            let n = ((&x + 30) * &x - 24) * &x + 1;
            assert!((&m.lambda + &m.lambda2 - n / &cube).abs().to_f64() < 1e-30);
            assert!((&m.lambda * &m.lambda2 - &x * &x * 27 / &cube).abs().to_f64() < 1e-30);
        }
    }

    #[test]
    fn negative_arguments() {
        let m = algebraic_maps(&f(-0.5), 200).unwrap();
        assert!(m.lambda.is_positive() && m.lambda.to_f64() < 1.0);
        let pc = pieces(&Jet::constant(f(-1.0))).unwrap();
        assert!((pc.lambda().value().to_f64() - 0.5).abs() < 1e-40);
        assert!((pc.one_minus_lambda().value().to_f64() - 0.5).abs() < 1e-40);
        assert!((pc.mu_sq().value().to_f64() - 1.0 / 3.0).abs() < 1e-15);
        assert!(algebraic_maps(&f(1.0), 200).is_err());
        assert!(algebraic_maps(&f(-2.0), 200).is_err());
    }
}
