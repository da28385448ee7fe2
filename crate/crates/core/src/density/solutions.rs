//! The closed forms of u₀, v₀ and u∞ as jets.
//!
//! u₀(x) = μ²F(λ)², v₀(x) = −2π/(√3(x+1))·F(λ)F(λ₂), u∞(x) = u₀(1/x)/x,
//! with F = ₂F₁(1/3, 2/3; 1; ·). Every value comes with a relative error
//! estimate assembled from the hypergeometric bounds.

use super::maps::pieces;
use crate::error::{Error, Result};
use crate::exactnum::{consts, BigFloat, Jet, PowerSeries, Rational};
use crate::hyper::{f21_derivs_split, maclaurin_coeffs};

/// A jet with a bound on the relative error of its value.
#[derive(Clone, Debug)]
pub struct Evaluated {
    pub jet: Jet,
    pub rel_err: f64,
}

impl Evaluated {
    pub fn value(&self) -> &BigFloat {
        self.jet.value()
    }

    pub fn error_bound(&self) -> BigFloat {
        self.jet.value().abs().with_prec(64) * BigFloat::from_f64(self.rel_err, 64)
    }
}

fn constant_jet(j: &Jet) -> bool {
    j.c[1..].iter().all(|v| v.is_zero())
}

/// F∘z, with δ = 1 − z supplied separately for accuracy near z = 1.
fn f21_jet(z: &Jet, delta: &Jet) -> Result<(Jet, f64)> {
    let prec = z.prec();
    let kmax = if constant_jet(z) { 0 } else { 3 };
    let d = f21_derivs_split(z.value(), delta.value(), prec, kmax)?;
    let rel = (&d.err[0] / d.d[0].abs().with_prec(64)).to_f64();
    Ok((z.compose(&d.d), rel))
}

fn working(x: &Jet, prec: usize) -> Jet {
    Jet {
        c: x.c.clone().map(|v| v.with_prec(prec + 32)),
    }
}

fn round_err(prec: usize) -> f64 {
    2f64.powi(-(prec as i32) + 6)
}

/// u₀ = μ²F(λ)² for x < c₀.
pub fn u0_jet(x: &Jet, prec: usize) -> Result<Evaluated> {
    let c0 = consts::c0().to_bigfloat(prec + 32);
    if *x.value() >= c0 {
        return Err(Error::Domain(format!("u0 closed form needs x < c0, got {}", x.value().to_f64())));
    }
    let xw = working(x, prec);
    let pc = pieces(&xw)?;
    let (f, e) = f21_jet(&pc.lambda(), &pc.one_minus_lambda())?;
    let jet = &pc.mu_sq() * &(&f * &f);
    Ok(Evaluated {
        jet: Jet { c: jet.c.map(|v| v.with_prec(prec)) },
        rel_err: 2.0 * e + round_err(prec),
    })
}

/// v₀ = −2π/(√3(x+1))·F(λ)F(λ₂) on (0, c₀].
pub fn v0_jet(x: &Jet, prec: usize) -> Result<Evaluated> {
    let wp = prec + 32;
    let c0 = consts::c0().to_bigfloat(wp);
    if !x.value().is_positive() || *x.value() > c0 {
        return Err(Error::Domain(format!("v0 needs 0 < x <= c0, got {}", x.value().to_f64())));
    }
    let xw = working(x, prec);
    let pc = pieces(&xw)?;
    let (f1, e1) = f21_jet(&pc.lambda(), &pc.one_minus_lambda())?;
    let (f2, e2) = f21_jet(&pc.lambda2(), &pc.one_minus_lambda2())?;
    let k = BigFloat::pi(wp).mul_pow2(1) / BigFloat::from_i64(3, wp).sqrt();
    let x1 = &xw + &Jet::constant(BigFloat::one(wp));
    let pre = &Jet::constant(-k) / &x1;
    let jet = &pre * &(&f1 * &f2);
    Ok(Evaluated {
        jet: Jet { c: jet.c.map(|v| v.with_prec(prec)) },
        rel_err: e1 + e2 + round_err(prec),
    })
}

/// u∞(x) = u₀(1/x)/x for x < 0 or x > c.
pub fn uinf_jet(x: &Jet, prec: usize) -> Result<Evaluated> {
    let wp = prec + 32;
    let c = consts::c().to_bigfloat(wp);
    let xv = x.value();
    if !(xv.is_negative() || *xv > c) {
        return Err(Error::Domain(format!("u_inf needs x < 0 or x > c, got {}", xv.to_f64())));
    }
    let w = working(x, prec).recip();
    let u = u0_jet(&w, wp)?;
    let jet = &w * &u.jet;
    Ok(Evaluated {
        jet: Jet { c: jet.c.map(|v| v.with_prec(prec)) },
        rel_err: u.rel_err + round_err(prec),
    })
}

fn value_only(x: &BigFloat) -> Jet {
    Jet::constant(x.clone())
}

pub fn u0_eval(x: &BigFloat, prec: usize) -> Result<(BigFloat, BigFloat)> {
    let e = u0_jet(&value_only(x), prec)?;
    Ok((e.value().clone(), e.error_bound()))
}

pub fn v0_eval(x: &BigFloat, prec: usize) -> Result<(BigFloat, BigFloat)> {
    let e = v0_jet(&value_only(x), prec)?;
    Ok((e.value().clone(), e.error_bound()))
}

pub fn uinf_eval(x: &BigFloat, prec: usize) -> Result<(BigFloat, BigFloat)> {
    let e = uinf_jet(&value_only(x), prec)?;
    Ok((e.value().clone(), e.error_bound()))
}

/// Exact Taylor coefficients of μ²F(λ)² at 0, computed by series
/// arithmetic over ℚ (√D = √(1 − 34x + x²) has a rational expansion).
pub fn u0_coeffs(order: usize) -> Result<Vec<Rational>> {
    type S = PowerSeries<Rational>;
    let p = |c: &[i64]| S::new(c.iter().map(|&v| Rational::from_integer(v.into())).collect(), order);
    let sqrt_d = p(&[1, -34, 1]).nth_root(2)?;
    let msd = p(&[1, -7, 1]).mul(&sqrt_d);
    let lambda = p(&[0, 0, 54]).div(&p(&[1, -24, 30, 1]).add(&msd))?;
    let mu_sq = p(&[4]).div(&p(&[3, -3]).add(&sqrt_d))?;
    let f = S::new(maclaurin_coeffs(order), order).compose(&lambda)?;
    Ok(mu_sq.mul(&f.mul(&f)).into_coeffs())
}

/// Σ_{n<N} A_n xⁿ with the geometric tail bound for |x| < c₀, as a check
/// on the closed form.
pub fn apery_partial_sum(a: &[BigFloat], x: &BigFloat) -> (BigFloat, BigFloat) {
    let prec = x.prec();
    let mut s = BigFloat::zero(prec);
    let mut pw = BigFloat::one(prec);
    let mut last = BigFloat::zero(prec);
    for an in a {
        last = an * &pw;
        s += &last;
        pw *= x;
    }
    // A_{n+1}/A_n < c, so the tail is at most last·r/(1−r) with r = c|x|.
    let r = (consts::c().to_f64() * x.to_f64().abs()).min(0.999);
    (s, last.abs().with_prec(64) * BigFloat::from_f64(r / (1.0 - r), 64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::apery::apery_recurrence;

    fn f(v: f64) -> BigFloat {
        BigFloat::from_f64(v, 256)
    }

    #[test]
    fn u0_series_is_apery() {
        let c = u0_coeffs(14).unwrap();
        let a = apery_recurrence(13).unwrap().values;
        for n in 0..14 {
            assert_eq!(c[n], Rational::from_integer(a[n].clone()));
        }
    }

    #[test]
    fn u0_matches_partial_sum() {
        let a: Vec<BigFloat> = apery_recurrence(300)
            .unwrap()
            .values
            .iter()
            .map(|v| BigFloat::from_bigint(v, 256))
            .collect();
        let x = consts::c0().to_bigfloat(256).mul_pow2(-1);
        let (u, e) = u0_eval(&x, 256).unwrap();
        let (s, t) = apery_partial_sum(&a, &x);
        assert!((&u - &s).abs().to_f64() < 1e-20, "{} {}", u, s);
        assert!(e.to_f64() < 1e-60 && t.to_f64() < 1e-60);
    }

    #[test]
    fn v0_log_behaviour() {
        for (x, tol) in [(1e-6, 1e-3), (1e-8, 1e-3)] {
            let (v, _) = v0_eval(&f(x), 256).unwrap();
            assert!((v.to_f64() - x.ln()).abs() < tol, "{}", v.to_f64() - x.ln());
        }
        let x = consts::c0().to_f64() * 0.9;
        let (v, _) = v0_eval(&f(x), 256).unwrap();
        assert!(v.is_negative() && v.to_f64().abs() < x.ln().abs() + 10.0);
    }

    #[test]
    fn uinf_laurent() {
        let x = f(1e6);
        let (u, _) = uinf_eval(&x, 256).unwrap();
        let approx = 1e-6 + 5e-12 + 73e-18;
        assert!(((u.to_f64() - approx) / approx).abs() < 1e-10);
        assert!(uinf_eval(&f(10.0), 256).is_err());
        let (m1, _) = uinf_eval(&f(-1.0), 256).unwrap();
        assert!(m1.is_negative());
    }
}
