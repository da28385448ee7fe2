//! ₂F₁(1/3, 2/3; 1; z) on [0, 1) with derivatives, and the constants built
//! from it.
//!
//! Below z = 3/4 the Maclaurin series is summed directly. Above, the
//! logarithmic expansion around z = 1 is used:
//!
//! F(z) = (√3/2π) Σ_n c_n δⁿ [h_n − ln δ],  δ = 1 − z,
//!
//! with c_n = (1/3)_n (2/3)_n / n!² and h_n = 2ψ(n+1) − ψ(n+1/3) − ψ(n+2/3).
//! Its n = 0 term is the classical −(√3/2π) ln δ + 3√3 ln 3/(2π) behaviour.
//! Both branches return F and its first three derivatives with a bound on
//! the truncation error.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;

use crate::error::{Error, Result};
use crate::exactnum::{consts, rat, BigFloat, Rational};

/// Switch point between the Maclaurin and the connection expansions.
pub const Z_SWITCH: f64 = 0.75;

/// Largest z accepted by [`f21_deriv`], which only uses the Maclaurin series.
pub const DERIV_SERIES_LIMIT: f64 = 0.95;

const MAX_TERMS: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    Series,
    Connection,
}

#[derive(Clone, Debug)]
pub struct HyperEval {
    pub z: BigFloat,
    pub value: BigFloat,
    pub error_bound: BigFloat,
    pub branch: Branch,
}

/// F and its first three derivatives at one point.
#[derive(Clone, Debug)]
pub struct HyperDerivs {
    pub d: [BigFloat; 4],
    /// Truncation-plus-rounding bound for each entry of `d`.
    pub err: [BigFloat; 4],
    pub branch: Branch,
}

/// Exact ratio of consecutive Maclaurin coefficients a_{n+1}/a_n
/// = (n+1/3)(n+2/3)/(n+1)².
pub fn coeff_ratio(n: u64) -> Rational {
    let n = n as i64;
    rat((3 * n + 1) * (3 * n + 2), 9 * (n + 1) * (n + 1))
}

/// Exact Maclaurin coefficients (3n)!/(n!³ 27ⁿ), n < `order`.
pub fn maclaurin_coeffs(order: usize) -> Vec<Rational> {
    let mut out = Vec::with_capacity(order);
    let mut a = rat(1, 1);
    for n in 0..order {
        out.push(a.clone());
        a *= coeff_ratio(n as u64);
    }
    out
}

fn check_domain(z: &BigFloat) -> Result<()> {
    if z.is_negative() {
        return Err(Error::Domain(format!("2F1 argument {} < 0", z.to_f64())));
    }
    if *z >= BigFloat::one(z.prec()) {
        return Err(Error::Domain(format!("2F1 argument {} >= 1", z.to_f64())));
    }
    Ok(())
}

/// F(z) with an error bound.
pub fn f21_eval(z: &BigFloat, prec: usize) -> Result<HyperEval> {
    let r = f21_derivs(z, prec, 0)?;
    let [value, ..] = r.d;
    let [error_bound, ..] = r.err;
    Ok(HyperEval {
        z: z.clone(),
        value,
        error_bound,
        branch: r.branch,
    })
}

/// F'(z) by the term-wise differentiated Maclaurin series.
pub fn f21_deriv(z: &BigFloat, prec: usize) -> Result<BigFloat> {
    if z.to_f64() > DERIV_SERIES_LIMIT {
        return Err(Error::Domain(format!(
            "series derivative needs z <= {DERIV_SERIES_LIMIT}, got {}",
            z.to_f64()
        )));
    }
    check_domain(z)?;
    let r = series_derivs(z, prec, 1)?;
    Ok(r.d[1].clone())
}

/// F, F', F'', F''' at z (entries above `kmax` are zero), branch chosen by z.
pub fn f21_derivs(z: &BigFloat, prec: usize, kmax: usize) -> Result<HyperDerivs> {
    check_domain(z)?;
    if z.to_f64() <= Z_SWITCH {
        series_derivs(z, prec, kmax)
    } else {
        connection_derivs(z, prec, kmax)
    }
}

fn zeros(p: usize) -> [BigFloat; 4] {
    std::array::from_fn(|_| BigFloat::zero(p))
}

/// Σ a_n (n)_k z^{n−k} for k ≤ kmax.
pub fn series_derivs(z: &BigFloat, prec: usize, kmax: usize) -> Result<HyperDerivs> {
    let wp = prec + 32;
    let z = z.with_prec(wp);
    let zf = z.to_f64();
    let mut sums = zeros(wp);
    let mut abs_sums = zeros(wp);
    // pw[k] = z^{n−k} once n ≥ k.
    let mut pw = zeros(wp);
    let mut a = BigFloat::one(wp);
    let target = BigFloat::epsilon(prec + 4);
    let mut tails = zeros(64);
    for n in 0..MAX_TERMS {
        let mut last = zeros(wp);
        for k in 0..=kmax {
            if n < k {
                continue;
            }
            pw[k] = if n == k { BigFloat::one(wp) } else { &pw[k] * &z };
            let t = &a * &pw[k] * falling(n as i64, k);
            abs_sums[k] += t.abs();
            sums[k] += &t;
            last[k] = t;
        }
        if n > kmax + 2 {
            let mut done = true;
            for k in 0..=kmax {
                let rho = if k == 0 {
                    zf
                } else {
                    let nf = n as f64;
                    (9.0 * nf * nf + 9.0 * nf + 2.0) / (9.0 * (nf + 1.0) * (nf + 1.0 - k as f64)) * zf
                };
                if rho >= 1.0 {
                    done = false;
                    break;
                }
                let factor = BigFloat::from_f64(rho / (1.0 - rho) * (1.0 + 1e-12), 64);
                tails[k] = last[k].abs().with_prec(64) * factor;
                if tails[k] > &target * &sums[k].abs().with_prec(64) && !tails[k].is_zero() {
                    done = false;
                }
            }
            if done {
                return Ok(finish(sums, abs_sums, tails, n, prec, Branch::Series));
            }
        }
        a *= BigFloat::from_rational(&coeff_ratio(n as u64), wp);
    }
    Err(Error::NotConverged {
        terms: MAX_TERMS,
        bound: tails[0].to_f64(),
    })
}

fn falling(n: i64, k: usize) -> i64 {
    (0..k as i64).map(|j| n - j).product()
}

/// d/ds of the falling factorial (s)_k at s = n.
fn falling_deriv(n: i64, k: usize) -> i64 {
    match k {
        0 => 0,
        1 => 1,
        2 => 2 * n - 1,
        3 => 3 * n * n - 6 * n + 2,
        _ => unreachable!("derivative order above 3"),
    }
}

fn finish(
    sums: [BigFloat; 4],
    abs_sums: [BigFloat; 4],
    tails: [BigFloat; 4],
    terms: usize,
    prec: usize,
    branch: Branch,
) -> HyperDerivs {
    let wp = sums[0].prec();
    let round = BigFloat::epsilon(wp) * (4 * terms as i64 + 16);
    let err: [BigFloat; 4] =
        std::array::from_fn(|k| (&abs_sums[k] * &round).with_prec(64) + &tails[k]);
    HyperDerivs {
        d: sums.map(|s| s.with_prec(prec)),
        err,
        branch,
    }
}

/// Like [`f21_derivs`] but with δ = 1 − z supplied by the caller, who can
/// often compute it without the cancellation of forming 1 − z.
pub fn f21_derivs_split(z: &BigFloat, delta: &BigFloat, prec: usize, kmax: usize) -> Result<HyperDerivs> {
    if z.to_f64() <= Z_SWITCH {
        check_domain(z)?;
        series_derivs(z, prec, kmax)
    } else {
        // z itself may have rounded to 1; δ decides.
        connection_derivs_delta(delta, prec, kmax)
    }
}

/// The expansion around z = 1, differentiated in δ = 1 − z.
pub fn connection_derivs(z: &BigFloat, prec: usize, kmax: usize) -> Result<HyperDerivs> {
    let wp = prec + 32;
    let delta = BigFloat::one(wp) - z.with_prec(wp);
    connection_derivs_delta(&delta, prec, kmax)
}

fn connection_derivs_delta(delta: &BigFloat, prec: usize, kmax: usize) -> Result<HyperDerivs> {
    let wp = prec + 32;
    let one = BigFloat::one(wp);
    let delta = delta.with_prec(wp);
    if !delta.is_positive() {
        return Err(Error::Domain("2F1 argument at or above 1".into()));
    }
    if delta.to_f64() >= 0.5 {
        return Err(Error::Domain("connection expansion needs 1 − z < 1/2".into()));
    }
    let ln_d = delta.ln();
    let inv_d = delta.recip();
    let df = delta.to_f64();
    // h_0 = 2ψ(1) − ψ(1/3) − ψ(2/3) = 3 ln 3.
    let mut h = (digamma_rational(1, 1, wp) * 2) - digamma_rational(1, 3, wp) - digamma_rational(2, 3, wp);
    let mut c = BigFloat::one(wp);
    let mut dn = BigFloat::one(wp);
    let mut sums = zeros(wp);
    let mut abs_sums = zeros(wp);
    let mut tails = zeros(64);
    let inv_pows: [BigFloat; 4] = [
        one.clone(),
        inv_d.clone(),
        &inv_d * &inv_d,
        &inv_d * &inv_d * &inv_d,
    ];
    let big_l = 3.0 * 3f64.ln() + ln_d.abs().to_f64();
    let target = BigFloat::epsilon(prec + 4);
    for n in 0..MAX_TERMS {
        let ni = n as i64;
        let base = &c * &dn;
        let hl = &h - &ln_d;
        for k in 0..=kmax {
            let inner = &hl * falling(ni, k) - BigFloat::from_i64(falling_deriv(ni, k), wp);
            let t = &base * &inv_pows[k] * inner;
            abs_sums[k] += t.abs();
            sums[k] += t;
        }
        if n > kmax + 2 {
            let mut done = true;
            for k in 0..=kmax {
                let nf = n as f64;
                let rho = df * ((nf + 3.0) / (nf + 2.0)).powi(k as i32);
                let maj = (nf + 2.0).powi(k as i32) * (big_l + k as f64) * df / (1.0 - rho) * (1.0 + 1e-12);
                tails[k] = (&base * &inv_pows[k]).abs().with_prec(64) * BigFloat::from_f64(maj, 64);
                if tails[k] > &target * &sums[k].abs().with_prec(64) {
                    done = false;
                }
            }
            if done {
                let pre = BigFloat::from_i64(3, wp).sqrt() / (BigFloat::pi(wp) * 2);
                let mut out = sums.clone();
                let mut abs_out = abs_sums.clone();
                let mut tails_out = tails.clone();
                for k in 0..4 {
                    let s = if k % 2 == 1 { -(&pre) } else { pre.clone() };
                    out[k] = &out[k] * &s;
                    abs_out[k] = &abs_out[k] * &pre;
                    tails_out[k] = &tails_out[k] * &pre.with_prec(64);
                }
                return Ok(finish(out, abs_out, tails_out, n, prec, Branch::Connection));
            }
        }
        let three_n = 3 * ni;
        h += BigFloat::from_i64(2, wp) / (ni + 1)
            - BigFloat::from_i64(3, wp) / (three_n + 1)
            - BigFloat::from_i64(3, wp) / (three_n + 2);
        c = c * ((three_n + 1) * (three_n + 2)) / (9 * (ni + 1) * (ni + 1));
        dn *= &delta;
    }
    Err(Error::NotConverged {
        terms: MAX_TERMS,
        bound: tails[0].to_f64(),
    })
}

/// Euler's constant by the Brent–McMillan formula γ ≈ A/B.
pub fn euler_gamma(prec: usize) -> BigFloat {
    let wp = prec + 64;
    // Error is O(e^{−4n}).
    let n = ((prec as f64 + 16.0) * std::f64::consts::LN_2 / 4.0).ceil() as i64 + 1;
    let ln_n = BigFloat::from_i64(n, wp).ln();
    let mut u = BigFloat::one(wp);
    let mut harmonic = BigFloat::zero(wp);
    let mut a = -&ln_n;
    let mut b = BigFloat::one(wp);
    let eps = BigFloat::epsilon(wp);
    let mut k = 1i64;
    loop {
        u = &u * n / k;
        harmonic += BigFloat::one(wp) / k;
        let u2 = &u * &u;
        a += &u2 * (&harmonic - &ln_n);
        b += &u2;
        if k > n && u2 < &b * &eps {
            break;
        }
        k += 1;
    }
    (a / b).with_prec(prec)
}

/// ψ(p/q) for 0 < p ≤ q by Gauss's digamma theorem.
pub fn digamma_rational(p: i64, q: i64, prec: usize) -> BigFloat {
    assert!(0 < p && p <= q, "digamma_rational needs 0 < p <= q");
    let g = p.gcd(&q);
    let (p, q) = (p / g, q / g);
    let wp = prec + 32;
    let gamma = euler_gamma(wp);
    if q == 1 {
        return (-gamma).with_prec(prec);
    }
    let pi = BigFloat::pi(wp);
    let arg = &pi * p / q;
    let cot = arg.cos() / arg.sin();
    let mut s = -gamma - BigFloat::from_i64(2 * q, wp).ln() - (pi.mul_pow2(-1) * cot);
    let upper = (q + 1) / 2 - 1;
    for k in 1..=upper {
        let cos_t = (&pi * (2 * k * p) / q).cos();
        let ln_sin = (&pi * k / q).sin().ln();
        s += (cos_t * ln_sin).mul_pow2(1);
    }
    s.with_prec(prec)
}

/// K = ₂F₁(1/6, 1/3; 1; 1/2).
pub fn constant_k(prec: usize) -> BigFloat {
    let wp = prec + 32;
    let half = BigFloat::one(wp).mul_pow2(-1);
    let mut t = BigFloat::one(wp);
    let mut s = BigFloat::zero(wp);
    let eps = BigFloat::epsilon(wp);
    let mut n = 0i64;
    loop {
        s += &t;
        // Term ratio < 1/2, so the tail is below the current term.
        t = &t * ((6 * n + 1) * (3 * n + 1)) / (18 * (n + 1) * (n + 1)) * &half;
        if t < &s * &eps {
            break;
        }
        n += 1;
    }
    s.with_prec(prec)
}

/// Constants shared by several modules, computed once per precision.
#[derive(Clone, Debug)]
pub struct SpecialConstants {
    pub prec: usize,
    pub euler_gamma: BigFloat,
    pub psi_third: BigFloat,
    pub psi_twothirds: BigFloat,
    pub k: BigFloat,
    pub s0: BigFloat,
    pub s1: BigFloat,
    pub z0: BigFloat,
}

impl SpecialConstants {
    fn compute(prec: usize) -> Result<Self> {
        let z0 = consts::z0().to_bigfloat(prec);
        let d = series_derivs(&z0, prec, 1)?;
        Ok(SpecialConstants {
            prec,
            euler_gamma: euler_gamma(prec),
            psi_third: digamma_rational(1, 3, prec),
            psi_twothirds: digamma_rational(2, 3, prec),
            k: constant_k(prec),
            s0: d.d[0].clone(),
            s1: d.d[1].clone(),
            z0,
        })
    }

    /// S₀(3S₁ + √2 S₀), which should equal 3√6/π.
    pub fn s0_s1_product(&self) -> BigFloat {
        let p = self.prec;
        let sqrt2 = BigFloat::from_i64(2, p).sqrt();
        &self.s0 * (&self.s1 * 3 + sqrt2 * &self.s0)
    }
}

/// Cached [`SpecialConstants`] at `prec` bits.
pub fn special_constants(prec: usize) -> Result<Arc<SpecialConstants>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<SpecialConstants>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(c) = cache.lock().expect("constants cache poisoned").get(&prec) {
        return Ok(c.clone());
    }
    let c = Arc::new(SpecialConstants::compute(prec)?);
    cache
        .lock()
        .expect("constants cache poisoned")
        .insert(prec, c.clone());
    Ok(c)
}

/// (3n)!/(n!)³ as an integer; the Maclaurin numerators over 27ⁿ.
pub fn central_trinomial(n: u64) -> BigInt {
    let mut v = BigInt::from(1);
    for j in 1..=n {
        v = v * (3 * j - 2) * (3 * j - 1) * (3 * j) / (j * j * j);
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: usize = 256;

    fn f(x: f64) -> BigFloat {
        BigFloat::from_f64(x, P)
    }

    #[test]
    fn value_at_zero() {
        let r = f21_eval(&f(0.0), P).unwrap();
        assert_eq!(r.value, BigFloat::one(P));
        assert_eq!(r.branch, Branch::Series);
        let d = f21_deriv(&f(0.0), P).unwrap();
        assert_eq!(d, BigFloat::from_i64(2, P) / 9);
    }

    #[test]
    fn domain_errors() {
        assert!(f21_eval(&f(-0.1), P).is_err());
        assert!(f21_eval(&f(1.0), P).is_err());
        assert!(f21_deriv(&f(0.99), P).is_err());
    }

    #[test]
    fn euler_gamma_digits() {
        let g = euler_gamma(P);
        let want = BigFloat::parse(
            "0.57721566490153286060651209008240243104215933593992359880576723488486772677766467",
            P,
        )
        .unwrap();
        assert!((g - want).abs() < BigFloat::epsilon(P).mul_pow2(4));
    }

    #[test]
    fn digamma_identities() {
        let g = euler_gamma(P);
        let ln2 = BigFloat::ln2(P);
        let ln3 = BigFloat::from_i64(3, P).ln();
        let tol = BigFloat::epsilon(P).mul_pow2(10);
        assert!((digamma_rational(1, 1, P) + &g).abs() < tol);
        assert!((digamma_rational(1, 2, P) + &g + ln2.mul_pow2(1)).abs() < tol);
        let sum = digamma_rational(1, 3, P) + digamma_rational(2, 3, P);
        assert!((sum + g.mul_pow2(1) + ln3 * 3).abs() < tol);
        // Reduction of non-lowest terms.
        assert_eq!(digamma_rational(2, 4, P), digamma_rational(1, 2, P));
        // ψ(1/4) = −γ − π/2 − 3 ln 2
        let pi = BigFloat::pi(P);
        let want = -euler_gamma(P) - pi.mul_pow2(-1) - BigFloat::ln2(P) * 3;
        assert!((digamma_rational(1, 4, P) - want).abs() < tol);
    }

    #[test]
    fn k_value() {
        let k = constant_k(64);
        assert!((k.to_f64() - 1.0354935).abs() < 1e-7);
        let k = constant_k(P);
        let want = BigFloat::parse("1.0354935370745241071293414132920", P).unwrap();
        assert!((k - want).abs().to_f64() < 1e-30);
    }

    #[test]
    fn branches_agree() {
        for i in 0..=10 {
            let z = f(0.7 + 0.02 * i as f64);
            let s = series_derivs(&z, P, 3).unwrap();
            let c = connection_derivs(&z, P, 3).unwrap();
            for k in 0..4 {
                let diff = (&s.d[k] - &c.d[k]).abs();
                let tol = (&s.err[k] + &c.err[k]).with_prec(P) + BigFloat::epsilon(P - 8) * s.d[k].abs();
                assert!(diff <= tol, "k={k} z={} diff {}", z.to_f64(), diff.to_f64());
            }
        }
    }

    #[test]
    fn series_derivative_matches_finite_difference() {
        let z = f(0.3);
        let d = f21_deriv(&z, P).unwrap();
        let h = BigFloat::parse("1e-20", P).unwrap();
        let fp = f21_eval(&(&z + &h), P).unwrap().value;
        let fm = f21_eval(&(&z - &h), P).unwrap().value;
        let fd = (fp - fm) / h.mul_pow2(1);
        assert!((fd - d).abs().to_f64() <= 1e-30);
    }

    #[test]
    fn logarithmic_limit() {
        let pi = BigFloat::pi(P);
        let sqrt3 = BigFloat::from_i64(3, P).sqrt();
        let limit = &sqrt3 * BigFloat::from_i64(3, P).ln() * 3 / (&pi * 2);
        let delta = BigFloat::parse("1e-8", P).unwrap();
        let v = f21_eval(&(BigFloat::one(P) - &delta), P).unwrap();
        assert_eq!(v.branch, Branch::Connection);
        let g = v.value + &sqrt3 / (&pi * 2) * delta.ln();
        assert!((g - limit).abs().to_f64() < 1e-6);
    }

    #[test]
    fn s0_s1_and_product() {
        let c = special_constants(P).unwrap();
        assert!((&c.s0 - &c.k).abs().to_f64() < 1e-60);
        let pi = BigFloat::pi(P);
        let six = BigFloat::from_i64(6, P).sqrt();
        let sqrt2 = BigFloat::from_i64(2, P).sqrt();
        let s1 = &six / (&pi * &c.k) - &sqrt2 * &c.k / 3;
        assert!((&c.s1 - s1).abs().to_f64() < 1e-60);
        let diff = c.s0_s1_product() - six * 3 / pi;
        assert!(diff.abs().to_f64() < 1e-60);
    }

    #[test]
    fn exact_coefficients() {
        let a = maclaurin_coeffs(6);
        for (n, an) in a.iter().enumerate() {
            let want = Rational::new(central_trinomial(n as u64), BigInt::from(27).pow(n as u32));
            assert_eq!(an, &want);
        }
        assert_eq!(a[1], rat(2, 9));
        assert_eq!(central_trinomial(2), BigInt::from(90));
    }
}
