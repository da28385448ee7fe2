//! Numeric local solutions of the ODE: Taylor series at ordinary points
//! from prescribed initial data, and Frobenius series t^ρ Σ c_m t^m at a
//! singular point. Both are generated by the local recurrence in floating
//! point and summed with a geometric tail estimate based on the distance to
//! the nearest other singular point.

use num_traits::Zero;

use super::{de3, LocalOperator};
use crate::error::{Error, Result};
use crate::exactnum::{BigFloat, Jet, QSqrt2, Rational};

#[derive(Clone, Debug)]
pub struct LocalSeries {
    pub center: BigFloat,
    pub rho: Rational,
    pub coeffs: Vec<BigFloat>,
    /// Distance to the nearest other singular point.
    pub radius: f64,
}

fn falling(s: &BigFloat, k: usize) -> BigFloat {
    (0..k).fold(BigFloat::one(s.prec()), |acc, j| acc * (s - j as i64))
}

/// Recurrence data with floating coefficients p_{j,i}.
struct NumericRecurrence {
    p: [Vec<BigFloat>; 4],
    s_min: i64,
    width: usize,
}

impl NumericRecurrence {
    fn g(&self, k: usize, sigma: &BigFloat) -> BigFloat {
        let mut acc = BigFloat::zero(sigma.prec());
        for j in 0..4 {
            let i = j as i64 + self.s_min + k as i64;
            if i < 0 {
                continue;
            }
            if let Some(c) = self.p[j].get(i as usize) {
                if !c.is_zero() {
                    acc += c * falling(sigma, j);
                }
            }
        }
        acc
    }

    /// Extends `c` to n terms; indices in `free` keep the value zero.
    fn run(&self, rho: &BigFloat, c: &mut Vec<BigFloat>, n: usize, free: &[usize]) -> Result<()> {
        let prec = rho.prec();
        while c.len() < n {
            let m = c.len();
            if free.contains(&m) {
                c.push(BigFloat::zero(prec));
                continue;
            }
            let mut rhs = BigFloat::zero(prec);
            for k in 1..self.width.min(m + 1) {
                let s = rho + (m - k) as i64;
                rhs -= &c[m - k] * self.g(k, &s);
            }
            let d = self.g(0, &(rho + m as i64));
            if d.is_zero() {
                return Err(Error::NotInvertible(format!("indicial polynomial vanishes at order {m}")));
            }
            c.push(rhs / d);
        }
        Ok(())
    }
}

/// Terms needed for 2^{−prec} at |t| = reach.
fn terms_for(prec: usize, reach: f64, radius: f64) -> usize {
    let r = (reach / radius).clamp(1e-6, 0.97);
    ((prec as f64 + 16.0) * std::f64::consts::LN_2 / -r.ln()).ceil() as usize + 24
}

impl LocalSeries {
    /// Taylor series at an ordinary point with u, u', u'' prescribed, good
    /// for |t| ≤ reach < radius.
    pub fn taylor(center: &BigFloat, init: &[BigFloat; 3], radius: f64, reach: f64) -> Result<Self> {
        if reach >= radius {
            return Err(Error::Domain("Taylor reach exceeds the radius".into()));
        }
        let prec = center.prec();
        let p = de3().shifted_numeric(center);
        if p[3][0].is_zero() {
            return Err(Error::Domain("Taylor center is a singular point".into()));
        }
        let rec = NumericRecurrence { p, s_min: -3, width: 5 };
        let mut c = vec![init[0].clone(), init[1].clone(), init[2].mul_pow2(-1)];
        rec.run(&BigFloat::zero(prec), &mut c, terms_for(prec, reach, radius), &[])?;
        Ok(LocalSeries {
            center: center.clone(),
            rho: Rational::zero(),
            coeffs: c,
            radius,
        })
    }

    /// Frobenius series t^ρ(1 + Σ c_m t^m) at an exact center. Resonant
    /// coefficients (where g_0(ρ+m) = 0) are set to zero.
    pub fn frobenius(
        op: &LocalOperator,
        center: &QSqrt2,
        rho: &Rational,
        radius: f64,
        reach: f64,
        prec: usize,
    ) -> Result<Self> {
        let shifted = de3().shifted(center);
        let p = shifted.map(|pj| pj.coeffs().iter().map(|c| c.to_bigfloat(prec)).collect::<Vec<_>>());
        let rq = QSqrt2::rational(rho.clone());
        let n = terms_for(prec, reach, radius);
        let free: Vec<usize> = (1..n)
            .filter(|&m| op.g[0].eval(&(&rq + &QSqrt2::from_ints(m as i64, 0))).is_zero())
            .collect();
        let rec = NumericRecurrence {
            p,
            s_min: op.s_min,
            width: op.g.len(),
        };
        let mut c = vec![BigFloat::one(prec)];
        rec.run(&rq.to_bigfloat(prec), &mut c, n, &free)?;
        Ok(LocalSeries {
            center: center.to_bigfloat(prec),
            rho: rho.clone(),
            coeffs: c,
            radius,
        })
    }

    /// Jet in t at t (value and three derivatives) with a bound on the
    /// value's truncation error. Non-integer exponents need t > 0.
    pub fn eval(&self, t: &BigFloat) -> Result<(Jet, BigFloat)> {
        let prec = t.prec().max(self.coeffs[0].prec());
        let t = t.with_prec(prec);
        let tf = t.to_f64().abs();
        if tf >= self.radius {
            return Err(Error::Domain(format!("|t| = {tf} outside the local radius {}", self.radius)));
        }
        let integral = self.rho.is_integer();
        if !integral && !t.is_positive() {
            return Err(Error::Domain("fractional exponent needs t > 0".into()));
        }
        let rho = BigFloat::from_rational(&self.rho, prec);
        let mut d: [BigFloat; 4] = std::array::from_fn(|_| BigFloat::zero(prec));
        let mut last = BigFloat::zero(64);
        if integral {
            // Σ c_m (m+ρ)_k t^{m+ρ−k} with integer powers; terms with m+ρ < k vanish.
            let r: i64 = self.rho.to_integer().try_into().expect("small exponent");
            let mut powers: Vec<BigFloat> = vec![BigFloat::one(prec)];
            for (m, c) in self.coeffs.iter().enumerate() {
                let e = m as i64 + r;
                while (powers.len() as i64) <= e {
                    let nxt = powers.last().expect("nonempty") * &t;
                    powers.push(nxt);
                }
                for (k, dk) in d.iter_mut().enumerate() {
                    if e < k as i64 {
                        continue;
                    }
                    let f = falling(&BigFloat::from_i64(e, prec), k);
                    *dk += c * f * &powers[(e - k as i64) as usize];
                }
                if m + 1 == self.coeffs.len() {
                    last = (c * &powers[e as usize]).abs().with_prec(64);
                }
            }
        } else {
            let tr = t.powf(&rho);
            let inv = t.recip();
            let mut pw = BigFloat::one(prec);
            for (m, c) in self.coeffs.iter().enumerate() {
                let s = &rho + m as i64;
                let base = c * &pw;
                for (k, dk) in d.iter_mut().enumerate() {
                    *dk += &base * falling(&s, k);
                }
                if m + 1 == self.coeffs.len() {
                    last = (&base * &tr).abs().with_prec(64);
                }
                pw *= &t;
            }
            let mut scale = tr;
            for dk in d.iter_mut() {
                *dk *= &scale;
                scale *= &inv;
            }
        }
        let r = tf / self.radius;
        let tail = last * BigFloat::from_f64(r / (1.0 - r) * 4.0, 64);
        let round = d[0].abs().with_prec(64) * BigFloat::epsilon(prec) * (self.coeffs.len() as i64 * 4 + 16);
        Ok((Jet::from_derivs(d), tail + round))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::apery::apery_recurrence;
    use crate::exactnum::consts;
    use crate::odecheck::local_operator;

    #[test]
    fn taylor_at_origin_neighbour_matches_apery_series() {
        // Seed a Taylor series at x₀ = 0.01 from Σ A_n xⁿ and compare at 0.015.
        let prec = 200;
        let a: Vec<BigFloat> = apery_recurrence(400)
            .unwrap()
            .values
            .iter()
            .map(|v| BigFloat::from_bigint(v, prec))
            .collect();
        let sum = |x: &BigFloat, k: usize| -> BigFloat {
            let mut acc = BigFloat::zero(prec);
            let mut pw = BigFloat::one(prec);
            for (n, an) in a.iter().enumerate() {
                if n >= k {
                    let f: i64 = (0..k as i64).map(|j| n as i64 - j).product();
                    acc += an * f * &pw;
                    pw *= x;
                }
            }
            acc
        };
        let x0 = BigFloat::from_f64(0.01, prec);
        let s = LocalSeries::taylor(&x0, &[sum(&x0, 0), sum(&x0, 1), sum(&x0, 2)], 0.01, 0.006).unwrap();
        for h in [0.005, -0.005] {
            let t = BigFloat::from_f64(h, prec);
            let (j, _) = s.eval(&t).unwrap();
            let want = sum(&(&x0 + &t), 0);
            assert!(((j.value() - &want) / &want).abs().to_f64() < 1e-40);
        }
    }

    #[test]
    fn frobenius_series_solve_the_ode() {
        let c0 = consts::c0();
        let op = local_operator(&c0);
        let prec = 256;
        for rho in [Rational::zero(), Rational::new(1.into(), 2.into()), Rational::from_integer(1.into())] {
            let s = LocalSeries::frobenius(&op, &c0, &rho, c0.to_f64(), 0.015, prec).unwrap();
            let t = BigFloat::from_f64(0.01, prec);
            let (j, err) = s.eval(&t).unwrap();
            let x = &s.center + &t;
            let r = crate::odecheck::de3_residual(&j, &x).unwrap();
            assert!(r.value.abs() <= r.scale * BigFloat::parse("1e-60", 64).unwrap());
            assert!(err.to_f64() < 1e-60);
        }
    }
}
