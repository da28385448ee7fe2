//! Numeric summation of Heun series with truncation bounds.
//!
//! Coefficients are generated once in floating point by the forward
//! recurrence (the wanted solution is the dominant one) and cached, so
//! repeated evaluations at many points only pay for the summation.

use std::sync::RwLock;

use super::HeunParams;
use crate::error::{Error, Result};
use crate::exactnum::BigFloat;

pub const DEFAULT_MAX_TERMS: usize = 1_000_000;

/// Value and first `kmax` derivatives at one point.
#[derive(Clone, Debug)]
pub struct HeunValue {
    pub d: [BigFloat; 4],
    pub err: [BigFloat; 4],
    pub terms: usize,
}

impl HeunValue {
    pub fn value(&self) -> &BigFloat {
        &self.d[0]
    }
}

pub struct HeunEvaluator {
    params: HeunParams,
    wp: usize,
    prec: usize,
    a: BigFloat,
    q: BigFloat,
    alpha: BigFloat,
    beta: BigFloat,
    gamma: BigFloat,
    delta: BigFloat,
    eps: BigFloat,
    /// |a| and the limiting term ratio 1/min(1, |a|).
    radius: BigFloat,
    coeffs: RwLock<Vec<BigFloat>>,
    /// Index from which 0 < p_{n+1}/p_n < 1/a is proven.
    certified_from: Option<usize>,
}

impl HeunEvaluator {
    pub fn new(params: &HeunParams, prec: usize) -> Self {
        let wp = prec + 32;
        let f = |x: &crate::exactnum::QSqrt2| x.to_bigfloat(wp);
        let a = f(&params.a);
        let one = BigFloat::one(wp);
        let radius = a.abs().min(one.clone());
        let c0 = one;
        let c1 = f(&params.q) / (&a * f(&params.gamma));
        HeunEvaluator {
            params: params.clone(),
            wp,
            prec,
            q: f(&params.q),
            alpha: f(&params.alpha),
            beta: f(&params.beta),
            gamma: f(&params.gamma),
            delta: f(&params.delta),
            eps: f(&params.epsilon()),
            a,
            radius,
            coeffs: RwLock::new(vec![c0, c1]),
            certified_from: None,
        }
    }

    /// Uses the proven ratio bound r_n < 1/a for tail estimates from `n0` on.
    pub fn with_certified_ratio(mut self, n0: usize) -> Self {
        self.certified_from = Some(n0);
        self
    }

    pub fn params(&self) -> &HeunParams {
        &self.params
    }

    pub fn prec(&self) -> usize {
        self.prec
    }

    /// Radius of convergence min(1, |a|).
    pub fn radius(&self) -> &BigFloat {
        &self.radius
    }

    fn ensure(&self, n: usize) {
        if self.coeffs.read().expect("coefficient cache poisoned").len() > n {
            return;
        }
        let mut c = self.coeffs.write().expect("coefficient cache poisoned");
        let wp = self.wp;
        let one = BigFloat::one(wp);
        while c.len() <= n {
            let m = c.len() - 1;
            let mf = BigFloat::from_u64(m as u64, wp);
            let r = &self.a * (&mf + &one) * (&mf + &self.gamma);
            let inner = (&mf - &one + &self.gamma) * (&one + &self.a) + &self.a * &self.delta + &self.eps;
            let qn = &mf * inner;
            let pn = (&mf - &one + &self.alpha) * (&mf - &one + &self.beta);
            let next = ((&self.q + qn) * &c[m] - pn * &c[m - 1]) / r;
            c.push(next);
        }
    }

    /// Coefficient p_n (floating point).
    pub fn coeff(&self, n: usize) -> BigFloat {
        self.ensure(n);
        self.coeffs.read().expect("coefficient cache poisoned")[n].clone()
    }

    /// H and its derivatives up to order `kmax` ≤ 3 at z, summed until the
    /// tail bound drops below 2^{−prec−4} relative to each sum.
    pub fn eval(&self, z: &BigFloat, kmax: usize, max_terms: usize) -> Result<HeunValue> {
        assert!(kmax <= 3);
        let wp = self.wp;
        let z = z.with_prec(wp);
        if z.abs() >= self.radius {
            return Err(Error::Domain(format!(
                "Heun argument {} outside the disk of radius {}",
                z.to_f64(),
                self.radius.to_f64()
            )));
        }
        let zero = || BigFloat::zero(wp);
        let mut sums: [BigFloat; 4] = std::array::from_fn(|_| zero());
        let mut abs_sums: [BigFloat; 4] = std::array::from_fn(|_| zero());
        let mut pw: [BigFloat; 4] = std::array::from_fn(|_| zero());
        let mut tails: [BigFloat; 4] = std::array::from_fn(|_| BigFloat::zero(64));
        let target = BigFloat::epsilon(self.prec + 4);
        let zabs = z.abs().with_prec(64);
        let limit = (&zabs / self.radius.with_prec(64)).to_f64();
        let cert_ratio = (&zabs / self.a.abs().with_prec(64)).to_f64();
        let chunk = 512;
        let mut n = 0usize;
        while n < max_terms {
            self.ensure(n + chunk);
            let coeffs = self.coeffs.read().expect("coefficient cache poisoned");
            let end = (n + chunk).min(max_terms);
            while n < end {
                let mut last: [BigFloat; 4] = std::array::from_fn(|_| zero());
                for k in 0..=kmax {
                    if n < k {
                        continue;
                    }
                    pw[k] = if n == k { BigFloat::one(wp) } else { &pw[k] * &z };
                    let t = &coeffs[n] * &pw[k] * falling(n, k);
                    abs_sums[k] += t.abs();
                    sums[k] += &t;
                    last[k] = t;
                }
                if n > kmax + 2 {
                    let observed = if coeffs[n - 1].is_zero() {
                        limit
                    } else {
                        (&coeffs[n] / &coeffs[n - 1]).abs().to_f64() * zabs.to_f64()
                    };
                    let base = match self.certified_from {
                        Some(n0) if n >= n0 => cert_ratio,
                        _ => observed.max(limit),
                    };
                    let mut done = true;
                    for k in 0..=kmax {
                        let nf = n as f64;
                        let rho = base * (nf + 1.0) / (nf + 1.0 - k as f64);
                        if rho >= 1.0 {
                            done = false;
                            continue;
                        }
                        let factor = BigFloat::from_f64(rho / (1.0 - rho) * (1.0 + 1e-12), 64);
                        tails[k] = last[k].abs().with_prec(64) * factor;
                        if tails[k] > &target * sums[k].abs().with_prec(64) {
                            done = false;
                        }
                    }
                    if done {
                        let round = BigFloat::epsilon(wp) * (4 * n as i64 + 16);
                        let err = std::array::from_fn(|k| (&abs_sums[k] * &round).with_prec(64) + &tails[k]);
                        return Ok(HeunValue {
                            d: sums.map(|s| s.with_prec(self.prec)),
                            err,
                            terms: n + 1,
                        });
                    }
                }
                n += 1;
            }
        }
        Err(Error::NotConverged {
            terms: max_terms,
            bound: tails[0].to_f64(),
        })
    }
}

fn falling(n: usize, k: usize) -> i64 {
    (0..k).map(|j| n as i64 - j as i64).product()
}

/// H(z) with its error bound.
pub fn heun_eval(
    params: &HeunParams,
    z: &BigFloat,
    prec: usize,
    max_terms: usize,
) -> Result<(BigFloat, BigFloat)> {
    let v = HeunEvaluator::new(params, prec).eval(z, 0, max_terms)?;
    let [value, ..] = v.d;
    let [err, ..] = v.err;
    Ok((value, err))
}
