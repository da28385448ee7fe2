//! q-expansions of η, E₂ and j₃B = η¹²/η(3τ)¹², the identities linking
//! them, and their values on the imaginary axis.
//!
//! Formal checks run over exact rationals. Numeric values are taken at
//! τ = i·t only, where q = e^{−2πt} is real, so no complex arithmetic is
//! needed. The special point is t = √6/3, where 27/(j₃B + 27) = z₀.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exactnum::{consts, int, rat, BigFloat, PowerSeries, Rational};
use crate::hyper::{constant_k, maclaurin_coeffs, special_constants};

type Series = PowerSeries<Rational>;

/// q^lead · unit(q), with the unit known through q^{order−1}.
#[derive(Clone, Debug, PartialEq)]
pub struct QExpansion {
    pub lead: Rational,
    pub unit: Series,
}

impl QExpansion {
    pub fn new(lead: Rational, unit: Series) -> Self {
        QExpansion { lead, unit }
    }

    pub fn order(&self) -> usize {
        self.unit.order()
    }

    pub fn mul(&self, o: &Self) -> Self {
        QExpansion::new(&self.lead + &o.lead, self.unit.mul(&o.unit))
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(QExpansion::new(&self.lead - &o.lead, self.unit.div(&o.unit)?))
    }

    pub fn pow(&self, e: u32) -> Self {
        QExpansion::new(&self.lead * int(e as i64), self.unit.pow(e))
    }

    /// f(q^m).
    pub fn at_power(&self, m: usize) -> Self {
        QExpansion::new(&self.lead * int(m as i64), self.unit.substitute_power(m))
    }

    /// θ = q·d/dq: θ(q^a u) = q^a (a·u + θu).
    pub fn theta(&self) -> Self {
        QExpansion::new(self.lead.clone(), self.unit.scale(&self.lead).add(&self.unit.theta()))
    }

    /// The plain power series, when the leading exponent is 0.
    pub fn into_series(self) -> Result<Series> {
        if !self.lead.is_zero() {
            return Err(Error::CheckFailed(format!(
                "monomial q^({}) did not cancel",
                self.lead
            )));
        }
        Ok(self.unit)
    }

    /// Laurent coefficients (exponent, value) when the lead is an integer.
    pub fn laurent(&self) -> Result<Vec<(i64, Rational)>> {
        if !self.lead.is_integer() {
            return Err(Error::Domain(format!("fractional leading exponent {}", self.lead)));
        }
        let l: i64 = self.lead.to_integer().try_into().map_err(|_| Error::Domain("exponent too large".into()))?;
        Ok(self.unit.coeffs().iter().enumerate().map(|(k, c)| (l + k as i64, c.clone())).collect())
    }

    /// The truncated expansion summed at a real 0 < q < 1.
    pub fn eval_truncated(&self, q: &BigFloat) -> BigFloat {
        let p = q.prec();
        let mut s = BigFloat::zero(p);
        let mut pw = BigFloat::one(p);
        for c in self.unit.coeffs() {
            s += BigFloat::from_rational(c, p) * &pw;
            pw *= q;
        }
        let lead = BigFloat::from_rational(&self.lead, p);
        s * (q.ln() * lead).exp()
    }
}

/// σ(k), the sum of the divisors of k.
pub fn sigma(k: u64) -> u64 {
    let mut s = 0;
    let mut d = 1;
    while d * d <= k {
        if k % d == 0 {
            s += d;
            if d * d != k {
                s += k / d;
            }
        }
        d += 1;
    }
    s
}

/// Exponents k(3k−1)/2, k = 0, 1, −1, 2, −2, … below `order`, with signs.
fn pentagonal(order: usize) -> Vec<(usize, i64)> {
    let mut out = vec![(0, 1)];
    for k in 1i64.. {
        let a = (k * (3 * k - 1) / 2) as usize;
        if a >= order {
            break;
        }
        let sign = if k % 2 == 0 { 1 } else { -1 };
        out.push((a, sign));
        let b = (k * (3 * k + 1) / 2) as usize;
        if b < order {
            out.push((b, sign));
        }
    }
    out
}

/// η = q^{1/24}·Π(1 − qⁿ), unit part from the pentagonal number theorem.
pub fn eta_expansion(order: usize) -> QExpansion {
    let mut c = vec![int(0); order];
    for (e, s) in pentagonal(order) {
        c[e] = int(s);
    }
    QExpansion::new(rat(1, 24), Series::new(c, order))
}

/// Π(1 − qⁿ) multiplied out directly.
pub fn eta_product_unit(order: usize) -> Series {
    let mut acc = Series::one(order);
    for n in 1..order {
        let mut f = vec![int(0); order];
        f[0] = int(1);
        f[n] = int(-1);
        acc = acc.mul(&Series::new(f, order));
    }
    acc
}

/// E₂ = 1 − 24 Σ σ(k) q^k.
pub fn e2_expansion(order: usize) -> QExpansion {
    let c = (0..order)
        .map(|k| if k == 0 { int(1) } else { int(-24 * sigma(k as u64) as i64) })
        .collect();
    QExpansion::new(int(0), Series::new(c, order))
}

/// 24·θ(η)/η, which should be E₂.
pub fn e2_from_eta(order: usize) -> Result<QExpansion> {
    let eta = eta_expansion(order);
    Ok(eta.theta().div(&eta)?.mul(&QExpansion::new(int(0), Series::constant(int(24), order))))
}

/// j₃B = η(τ)¹²/η(3τ)¹², leading term q⁻¹.
pub fn j3b_expansion(order: usize) -> Result<QExpansion> {
    let eta = eta_expansion(order);
    eta.pow(12).div(&eta.at_power(3).pow(12))
}

/// Outcome of an exact formal identity check.
#[derive(Clone, Debug, PartialEq)]
pub struct IdentityCheck {
    pub terms: usize,
    /// Exponent of the first coefficient where the sides differ.
    pub first_mismatch: Option<i64>,
}

impl IdentityCheck {
    pub fn passed(&self) -> bool {
        self.first_mismatch.is_none()
    }
}

fn compare(lhs: &Series, rhs: &Series, terms: usize) -> IdentityCheck {
    IdentityCheck {
        terms,
        first_mismatch: lhs.truncate(terms).first_mismatch(&rhs.truncate(terms)).map(|k| k as i64),
    }
}

/// θ(j₃B)/j₃B = E₂(τ)/2 − f·E₂(3τ) through q^{n−1}; f = 3/2 is the true
/// identity, any other f is a deliberate fault.
pub fn theta_logderiv_with(n: usize, f: &Rational) -> Result<IdentityCheck> {
    if n < 10 {
        return Err(Error::InvalidParameter(format!("need at least 10 terms, got {n}")));
    }
    let j = j3b_expansion(n)?;
    let lhs = j.theta().div(&j)?.into_series()?;
    let e2 = e2_expansion(n).into_series()?;
    let rhs = e2.scale(&rat(1, 2)).sub(&e2.substitute_power(3).scale(f));
    Ok(compare(&lhs, &rhs, n))
}

pub fn theta_logderiv_identity(n: usize) -> Result<IdentityCheck> {
    theta_logderiv_with(n, &rat(3, 2))
}

/// F(27/(j₃B + 27)) = η(3τ)³/η(τ)·(j₃B + 27)^{1/3} through q^{n−1}.
pub fn parameterization_check(n: usize) -> Result<IdentityCheck> {
    if n < 10 {
        return Err(Error::InvalidParameter(format!("need at least 10 terms, got {n}")));
    }
    let j = j3b_expansion(n + 1)?;
    if j.lead != int(-1) {
        return Err(Error::CheckFailed(format!("j3B leads with q^({})", j.lead)));
    }
    // j + 27 = q⁻¹(u + 27q).
    let w = j.unit.add(&Series::x(n + 1).scale(&int(27))).truncate(n);
    let z = Series::x(n).scale(&int(27)).div(&w)?;
    let lhs = Series::new(maclaurin_coeffs(n), n).compose(&z)?;
    let eta = eta_expansion(n);
    let pre = eta.at_power(3).pow(3).div(&eta)?;
    let root = QExpansion::new(rat(-1, 3), w.nth_root(3)?);
    let rhs = pre.mul(&root).into_series()?;
    Ok(compare(&lhs, &rhs, n))
}

/// q = e^{−2πt}.
pub fn nome(t: &BigFloat) -> BigFloat {
    (-(BigFloat::pi(t.prec()).mul_pow2(1) * t)).exp()
}

fn tiny(prec: usize) -> BigFloat {
    BigFloat::epsilon(prec + 16)
}

/// η(i·t).
pub fn eta_value(t: &BigFloat, prec: usize) -> BigFloat {
    let wp = prec + 32;
    let t = t.with_prec(wp);
    let q = nome(&t);
    let eps = tiny(wp);
    let mut s = BigFloat::one(wp);
    for k in 1i64.. {
        let sign = if k % 2 == 0 { 1 } else { -1 };
        let a = q.powi((k * (3 * k - 1) / 2) as u32);
        let b = q.powi((k * (3 * k + 1) / 2) as u32);
        s += (&a + &b) * sign;
        if a < eps {
            break;
        }
    }
    let pre = (-(BigFloat::pi(wp) * &t) / 12).exp();
    (pre * s).with_prec(prec)
}

/// E₂(i·t) = 1 − 24 Σ k q^k/(1 − q^k).
pub fn e2_value(t: &BigFloat, prec: usize) -> BigFloat {
    let wp = prec + 32;
    let q = nome(&t.with_prec(wp));
    let eps = tiny(wp);
    let mut s = BigFloat::zero(wp);
    let mut qk = q.clone();
    for k in 1i64.. {
        let term = &qk * k / (BigFloat::one(wp) - &qk);
        s += &term;
        if term < eps {
            break;
        }
        qk *= &q;
    }
    (BigFloat::one(wp) - s * 24).with_prec(prec)
}

/// j₃B(i·t).
pub fn j3b_value(t: &BigFloat, prec: usize) -> BigFloat {
    let wp = prec + 32;
    let t3 = t.with_prec(wp) * 3;
    (eta_value(t, wp) / eta_value(&t3, wp)).powi(12).with_prec(prec)
}

/// θ(j₃B) at i·t, through the logarithmic-derivative identity.
pub fn j3b_theta_value(t: &BigFloat, prec: usize) -> BigFloat {
    let wp = prec + 32;
    let t3 = t.with_prec(wp) * 3;
    let f = e2_value(t, wp).mul_pow2(-1) - e2_value(&t3, wp) * 3 / 2;
    (j3b_value(t, wp) * f).with_prec(prec)
}

/// t = √6/3, so τ = i√6/3 and 3τ = i√6.
pub fn special_t(prec: usize) -> BigFloat {
    BigFloat::from_i64(6, prec).sqrt() / 3
}

/// S₀ = F(z₀) and S₁ = F'(z₀) along the modular route.
///
/// G = η(3τ)³/η·(j+27)^{1/3} equals F(Z) with Z = 27/(j+27). Logarithmic
/// differentiation gives θG/G = (9E₂(3τ) − E₂)/24 + (E₂ − 3E₂(3τ))/6·j/(j+27)
/// and θZ = −27θj/(j+27)², so F'(Z) = θG/θZ.
pub fn s0_s1_from_modular(prec: usize) -> (BigFloat, BigFloat) {
    let wp = prec + 32;
    let t = special_t(wp);
    let t3 = &t * 3;
    let e = e2_value(&t, wp);
    let e3 = e2_value(&t3, wp);
    let j = j3b_value(&t, wp);
    let tj = j3b_theta_value(&t, wp);
    let j27 = &j + 27;
    let g = eta_value(&t3, wp).powi(3) / eta_value(&t, wp) * j27.cbrt();
    let log_g = (&e3 * 9 - &e) / 24 + (&e - &e3 * 3) / 6 * &j / &j27;
    let theta_z = -(tj * 27) / j27.square();
    let s1 = &g * log_g / theta_z;
    (g.with_prec(prec), s1.with_prec(prec))
}

/// One row of the table of values at τ = i√6/3.
#[derive(Clone, Debug)]
pub struct SpecialValue {
    pub name: &'static str,
    pub computed: BigFloat,
    pub stated: BigFloat,
    pub error: f64,
    pub pass: bool,
}

pub const SPECIAL_TOL: f64 = 1e-20;

fn row(name: &'static str, computed: BigFloat, stated: BigFloat, prec: usize) -> SpecialValue {
    let error = (&computed - &stated).abs().to_f64();
    SpecialValue {
        name,
        computed: computed.with_prec(prec),
        stated: stated.with_prec(prec),
        error,
        pass: error <= SPECIAL_TOL,
    }
}

struct Closed {
    sqrt2: BigFloat,
    sqrt6: BigFloat,
    pi: BigFloat,
    k: BigFloat,
    k2: BigFloat,
}

impl Closed {
    fn new(wp: usize) -> Self {
        let k = constant_k(wp);
        Closed {
            sqrt2: BigFloat::from_i64(2, wp).sqrt(),
            sqrt6: BigFloat::from_i64(6, wp).sqrt(),
            pi: BigFloat::pi(wp),
            k2: k.square(),
            k,
        }
    }
}

/// The eight tabulated values, each compared as printed.
pub fn special_values(prec: usize) -> Vec<SpecialValue> {
    let wp = prec + 32;
    let c = Closed::new(wp);
    let t = special_t(wp);
    let t3 = &t * 3;
    let r = |a: i64, b: i64| BigFloat::from_i64(a, wp) / b;
    let two = BigFloat::from_i64(2, wp);
    let three = BigFloat::from_i64(3, wp);
    let one_plus = &c.sqrt2 + 1;
    let minus_one = &c.sqrt2 - 1;
    let sqrt_k = c.k.sqrt();
    let eta_t = two.powf(&r(3, 4)) * three.powf(&r(7, 8)) * one_plus.powf(&r(1, 12)) * &sqrt_k / 6;
    let eta_3t = two.powf(&r(3, 4)) * three.powf(&r(5, 8)) * minus_one.powf(&r(1, 12)) * &sqrt_k / 6;
    let e2_t = &c.sqrt6 * 3 / (c.pi.mul_pow2(1)) + &one_plus * &c.k2 / &c.sqrt2;
    let e2_3t = &c.sqrt6 / (c.pi.mul_pow2(1)) + &one_plus * &c.k2 / (&c.sqrt2 * 3);
    let j_stated = one_plus.square() * 27;
    let j = j3b_value(&t, wp);
    let (s0, _) = s0_s1_from_modular(wp);
    vec![
        row("eta(tau)", eta_value(&t, wp), eta_t, prec),
        row("eta(3tau)", eta_value(&t3, wp), eta_3t, prec),
        row("E2(tau)", e2_value(&t, wp), e2_t, prec),
        row("E2(3tau)", e2_value(&t3, wp), e2_3t, prec),
        row("j3B(tau)", j.clone(), j_stated.clone(), prec),
        row("27/(j3B+27)", BigFloat::from_i64(27, wp) / (&j + 27), consts::z0().to_bigfloat(wp), prec),
        row("theta j3B(tau)", j3b_theta_value(&t, wp), &j_stated * &c.k2, prec),
        row("S0 = K", s0, c.k.clone(), prec),
    ]
}

/// Closed forms that do hold for the two rows whose printed values fail:
/// E₂(τ) = 3√6/(2π) − (√2−1)K²/√2 and θj₃B(τ) = −27(1+√2)²K².
pub fn corrected_special_values(prec: usize) -> Vec<SpecialValue> {
    let wp = prec + 32;
    let c = Closed::new(wp);
    let t = special_t(wp);
    let e2_t = &c.sqrt6 * 3 / c.pi.mul_pow2(1) - (&c.sqrt2 - 1) * &c.k2 / &c.sqrt2;
    let tj = -((&c.sqrt2 + 1).square() * 27 * &c.k2);
    vec![
        row("E2(tau)", e2_value(&t, wp), e2_t, prec),
        row("theta j3B(tau)", j3b_theta_value(&t, wp), tj, prec),
    ]
}

/// Modular S₀, S₁ against the direct series values at z₀.
#[derive(Clone, Debug)]
pub struct ProductCheck {
    pub s0_modular: BigFloat,
    pub s1_modular: BigFloat,
    pub s0_direct: BigFloat,
    pub s1_direct: BigFloat,
    /// |S₀(3S₁ + √2S₀) − 3√6/π| with the direct values.
    pub product_error: f64,
    pub agreement: f64,
}

pub fn product_check(prec: usize) -> Result<ProductCheck> {
    let sc = special_constants(prec)?;
    let (s0, s1) = s0_s1_from_modular(prec);
    let target = BigFloat::from_i64(6, prec).sqrt() * 3 / BigFloat::pi(prec);
    let product_error = (sc.s0_s1_product() - target).abs().to_f64();
    let agreement = (&s0 - &sc.s0).abs().to_f64().max((&s1 - &sc.s1).abs().to_f64());
    Ok(ProductCheck {
        s0_modular: s0,
        s1_modular: s1,
        s0_direct: sc.s0.clone(),
        s1_direct: sc.s1.clone(),
        product_error,
        agreement,
    })
}

/// Integer Laurent coefficients of j₃B from q⁻¹ on.
pub fn j3b_prefix(n: usize) -> Result<Vec<BigInt>> {
    let j = j3b_expansion(n + 1)?;
    j.laurent()?
        .into_iter()
        .take(n)
        .map(|(_, c)| {
            if c.is_integer() {
                Ok(c.to_integer())
            } else {
                Err(Error::CheckFailed(format!("non-integral coefficient {c}")))
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn divisor_sum(k: u64) -> u64 {
        (1..=k).filter(|d| k % d == 0).sum()
    }

    #[test]
    fn sigma_values() {
        assert_eq!(sigma(6), 12);
        for k in 1..300 {
            assert_eq!(sigma(k), divisor_sum(k));
        }
        for p in 2..1000u64 {
            if (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0) {
                assert_eq!(sigma(p), p + 1);
            }
        }
    }

    #[test]
    fn eta_prefix_and_product() {
        let e = eta_expansion(51);
        let head: Vec<i64> = e.unit.coeffs()[..8].iter().map(|c| c.to_integer().try_into().unwrap()).collect();
        assert_eq!(head, [1, -1, -1, 0, 0, 1, 0, 1]);
        assert_eq!(e.unit, eta_product_unit(51));
        assert_eq!(e.lead, rat(1, 24));
    }

    #[test]
    fn e2_two_ways() {
        let e = e2_expansion(40);
        assert_eq!(e.unit.coeffs()[0], int(1));
        assert_eq!(e.unit.coeffs()[1], int(-24));
        assert_eq!(e, e2_from_eta(40).unwrap());
    }

    #[test]
    fn j3b_prefix_matches() {
        let p = j3b_prefix(12).unwrap();
        let want = [1, -12, 54, -76, -243, 1188, -1384, -2916, 11934, -11580, -21870];
        for (a, b) in p.iter().zip(want) {
            assert_eq!(*a, BigInt::from(b));
        }
    }

    #[test]
    fn theta_of_monomial() {
        let m = QExpansion::new(int(-1), Series::one(5));
        let t = m.theta();
        assert_eq!(t.lead, int(-1));
        assert_eq!(t.unit, Series::constant(int(-1), 5));
    }

    #[test]
    fn formal_identities() {
        assert!(theta_logderiv_identity(40).unwrap().passed());
        assert!(parameterization_check(40).unwrap().passed());
        let broken = theta_logderiv_with(40, &int(1)).unwrap();
        assert_eq!(broken.first_mismatch, Some(0));
        assert!(theta_logderiv_identity(5).is_err());
    }

    #[test]
    fn truncation_margin() {
        let t = special_t(256);
        let q = nome(&t);
        assert!(q.to_f64() < 0.006 && q.to_f64().powi(40) < 1e-80);
        let e = eta_expansion(40).eval_truncated(&q);
        assert!((e - eta_value(&t, 256)).abs().to_f64() < 1e-20);
        let j = j3b_expansion(41).unwrap().eval_truncated(&q);
        assert!((j - j3b_value(&t, 256)).abs().to_f64() < 1e-20);
    }

    #[test]
    fn values_sharpen_with_precision() {
        let a = special_values(256);
        let b = special_values(512);
        for (x, y) in a.iter().zip(&b) {
            if x.pass {
                assert!(y.pass && y.error <= x.error.max(1e-140), "{}: {} {}", x.name, x.error, y.error);
                assert!(y.error < 1e-100, "{} {}", y.name, y.error);
            }
        }
    }

    #[test]
    fn corrected_rows_hold() {
        for r in corrected_special_values(256) {
            assert!(r.pass, "{} {}", r.name, r.error);
        }
    }
}
