//! The third-order Fuchsian operator
//!
//! L u = x²(x²−34x+1)u''' + 3x(2x²−51x+1)u'' + (7x²−112x+1)u' + (x−5)u
//!
//! whose solution regular at 0 is Σ A_n xⁿ. This module holds the operator
//! with exact coefficients, its local recurrences at 0, c₀, c and ∞, the
//! indicial data there, and residual checks for numerically evaluated
//! solutions. [`local`] turns the same recurrences into numeric series.
//!
//! Around a center x₀ write p_j(x₀ + t) = Σ_i p_{j,i} tⁱ. Applying L to t^σ
//! gives Σ_k g_k(σ) t^{σ+s_min+k} with g_k(σ) = Σ_j p_{j,j+s_min+k}·(σ)_j, so
//! a local series Σ_m c_m t^{m+ρ} solves L u = 0 exactly when
//! Σ_k c_{m−k} g_k(m−k+ρ) = 0 for every m. The indicial polynomial is g_0.

pub mod local;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{consts, int, rat, BigFloat, Jet, Poly, QSqrt2, Rational};

pub use local::LocalSeries;

/// Coefficients p_0..p_3 of L; `p[j]` multiplies the j-th derivative.
#[derive(Clone, Debug, PartialEq)]
pub struct De3Coefficients {
    pub p: [Poly<Rational>; 4],
}

pub fn de3() -> De3Coefficients {
    De3Coefficients {
        p: [
            Poly::from_i64s(&[-5, 1]),
            Poly::from_i64s(&[1, -112, 7]),
            Poly::from_i64s(&[0, 3, -153, 6]),
            Poly::from_i64s(&[0, 0, 1, -34, 1]),
        ],
    }
}

fn to_q(p: &Poly<Rational>) -> Poly<QSqrt2> {
    Poly::new(p.coeffs().iter().map(|c| QSqrt2::rational(c.clone())).collect())
}

impl De3Coefficients {
    pub fn over_qsqrt2(&self) -> [Poly<QSqrt2>; 4] {
        std::array::from_fn(|j| to_q(&self.p[j]))
    }

    /// p_j(center + t) as polynomials in t.
    pub fn shifted(&self, center: &QSqrt2) -> [Poly<QSqrt2>; 4] {
        self.over_qsqrt2().map(|p| p.shift(center))
    }

    /// Coefficients of p_j(center + t) in t, numerically.
    pub fn shifted_numeric(&self, center: &BigFloat) -> [Vec<BigFloat>; 4] {
        let prec = center.prec();
        std::array::from_fn(|j| {
            let mut c: Vec<BigFloat> =
                self.p[j].coeffs().iter().map(|r| BigFloat::from_rational(r, prec)).collect();
            let n = c.len();
            for i in 0..n {
                for k in (i..n - 1).rev() {
                    let t = &c[k + 1] * center;
                    c[k] += t;
                }
            }
            c
        })
    }

    /// p_0(x)..p_3(x).
    pub fn eval(&self, x: &BigFloat) -> [BigFloat; 4] {
        std::array::from_fn(|j| {
            let mut acc = BigFloat::zero(x.prec());
            for r in self.p[j].coeffs().iter().rev() {
                acc = acc * x + BigFloat::from_rational(r, x.prec());
            }
            acc
        })
    }
}

/// L u at one point, with Σ|p_j u^{(j)}| as the natural size of the
/// cancelling terms.
#[derive(Clone, Debug)]
pub struct Residual {
    pub value: BigFloat,
    pub scale: BigFloat,
}

/// L u at x for a solution given as a jet at x.
pub fn de3_residual(u: &Jet, x: &BigFloat) -> Result<Residual> {
    let prec = x.prec();
    let guard = BigFloat::epsilon(prec / 2);
    let c0 = consts::c0().to_bigfloat(prec);
    let c = consts::c().to_bigfloat(prec);
    for s in [BigFloat::zero(prec), c0, c] {
        if (x - &s).abs() < guard {
            return Err(Error::Domain(format!("x = {} is a singular point of the ODE", x.to_f64())));
        }
    }
    let p = de3().eval(x);
    let d = u.derivs();
    let terms: Vec<BigFloat> = (0..4).map(|j| &p[j] * &d[j]).collect();
    Ok(Residual {
        scale: terms.iter().map(|t| t.abs()).sum(),
        value: terms.into_iter().sum(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Singularity {
    Zero,
    C0,
    C,
    Infinity,
}

impl Singularity {
    pub const ALL: [Singularity; 4] = [Singularity::Zero, Singularity::C0, Singularity::C, Singularity::Infinity];

    /// The finite location, if any.
    pub fn center(self) -> Option<QSqrt2> {
        match self {
            Singularity::Zero => Some(QSqrt2::zero()),
            Singularity::C0 => Some(consts::c0()),
            Singularity::C => Some(consts::c()),
            Singularity::Infinity => None,
        }
    }
}

impl fmt::Display for Singularity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Singularity::Zero => "0",
            Singularity::C0 => "c0",
            Singularity::C => "c",
            Singularity::Infinity => "inf",
        })
    }
}

/// (σ)_j = σ(σ−1)…(σ−j+1).
fn falling_poly(j: usize) -> Poly<QSqrt2> {
    (0..j).fold(Poly::constant(QSqrt2::one()), |acc, i| {
        acc.mul(&Poly::x_plus(QSqrt2::from_ints(-(i as i64), 0)))
    })
}

/// p(−σ).
fn neg_arg(p: &Poly<QSqrt2>) -> Poly<QSqrt2> {
    Poly::new(
        p.coeffs()
            .iter()
            .enumerate()
            .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
            .collect(),
    )
}

/// The local recurrence Σ_k c_{m−k} g_k(m−k+ρ) = 0 at one point.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalOperator {
    pub g: Vec<Poly<QSqrt2>>,
    pub s_min: i64,
}

/// Local recurrence around a finite center.
pub fn local_operator(center: &QSqrt2) -> LocalOperator {
    let p = de3().shifted(center);
    let (mut s_min, mut s_max) = (i64::MAX, i64::MIN);
    for (j, pj) in p.iter().enumerate() {
        for (i, c) in pj.coeffs().iter().enumerate() {
            if !c.is_zero() {
                let s = i as i64 - j as i64;
                s_min = s_min.min(s);
                s_max = s_max.max(s);
            }
        }
    }
    let g = (0..=(s_max - s_min))
        .map(|k| {
            (0..4).fold(Poly::zero(), |acc, j| {
                let i = j as i64 + s_min + k;
                if i < 0 {
                    return acc;
                }
                acc.add(&falling_poly(j).scale(&p[j].coeff(i as usize)))
            })
        })
        .collect();
    LocalOperator { g, s_min }
}

/// Local recurrence at ∞ for series Σ_m c_m x^{−m−ρ}.
///
/// L x^σ = Σ_d h_d(σ) x^{σ+d} with h_d(σ) = Σ_j p_{j,j+d}(σ)_j and d ≤ 1,
/// so g_k(τ) = h_{1−k}(−τ).
pub fn local_operator_at_infinity() -> LocalOperator {
    let p = de3().over_qsqrt2();
    let g = (0..=4)
        .map(|k: i64| {
            let d = 1 - k;
            let h = (0..4).fold(Poly::zero(), |acc, j| {
                let i = j as i64 + d;
                if i < 0 {
                    return acc;
                }
                acc.add(&falling_poly(j).scale(&p[j].coeff(i as usize)))
            });
            neg_arg(&h)
        })
        .collect();
    LocalOperator { g, s_min: -1 }
}

pub fn local_operator_for(s: Singularity) -> LocalOperator {
    match s.center() {
        Some(x0) => local_operator(&x0),
        None => local_operator_at_infinity(),
    }
}

impl LocalOperator {
    pub fn indicial(&self) -> &Poly<QSqrt2> {
        &self.g[0]
    }

    /// Left side of the m-th recurrence equation for given coefficients.
    pub fn equation(&self, rho: &QSqrt2, c: &[QSqrt2], m: usize) -> QSqrt2 {
        let mut acc = QSqrt2::zero();
        for (k, gk) in self.g.iter().enumerate() {
            if k > m || m - k >= c.len() {
                continue;
            }
            let sigma = &QSqrt2::from_ints((m - k) as i64, 0) + rho;
            acc += &(&c[m - k] * &gk.eval(&sigma));
        }
        acc
    }

    /// Exact c_0..c_{n−1} at exponent ρ extending `prefix`. At a resonance
    /// (g_0(m+ρ) = 0 beyond the prefix) the free coefficient is set to zero,
    /// provided the obstruction vanishes; otherwise the solution needs a
    /// logarithm and an error is returned.
    pub fn frobenius(&self, rho: &QSqrt2, prefix: &[QSqrt2], n: usize) -> Result<Vec<QSqrt2>> {
        let mut c: Vec<QSqrt2> = prefix.to_vec();
        for m in c.len()..n {
            let rhs = -&self.equation(rho, &c, m);
            let d = self.g[0].eval(&(&QSqrt2::from_ints(m as i64, 0) + rho));
            if d.is_zero() {
                if !rhs.is_zero() {
                    return Err(Error::CheckFailed(format!(
                        "logarithmic obstruction at order {m} for exponent {rho}"
                    )));
                }
                c.push(QSqrt2::zero());
            } else {
                c.push(&rhs / &d);
            }
        }
        Ok(c)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct IndicialData {
    pub singularity: Singularity,
    pub indicial: Poly<QSqrt2>,
    /// Roots with multiplicity, ascending.
    pub exponents: Vec<Rational>,
    /// Highest power of log in the local basis.
    pub log_rank: usize,
}

impl IndicialData {
    pub fn exponent_sum(&self) -> Rational {
        self.exponents.iter().fold(int(0), |a, e| a + e)
    }
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let mut out = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            out.push(d.clone());
            out.push(&n / &d);
        }
        d += 1;
    }
    out
}

/// Roots of a polynomial whose monic form has rational coefficients and
/// which splits over ℚ, with multiplicity.
pub fn rational_roots(p: &Poly<QSqrt2>) -> Result<Vec<Rational>> {
    let deg = p.degree().ok_or_else(|| Error::InvalidParameter("zero polynomial".into()))?;
    let lead = p.coeff(deg);
    let monic: Vec<QSqrt2> = p.coeffs().iter().map(|c| c / &lead).collect();
    if monic.iter().any(|c| !c.is_rational()) {
        return Err(Error::CheckFailed("indicial polynomial not rational after normalizing".into()));
    }
    let mut q: Vec<Rational> = monic.into_iter().map(|c| c.a).collect();
    let mut roots = Vec::new();
    while q.len() > 1 && q[0].is_zero() {
        roots.push(int(0));
        q.remove(0);
    }
    let deflate = |q: &[Rational], r: &Rational| -> Option<Vec<Rational>> {
        // Synthetic division by (x − r).
        let n = q.len() - 1;
        let mut out = vec![int(0); n];
        let mut acc = q[n].clone();
        for i in (0..n).rev() {
            out[i] = acc.clone();
            acc = &q[i] + &acc * r;
        }
        acc.is_zero().then_some(out)
    };
    while q.len() > 1 {
        let den = q.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        let ints: Vec<BigInt> = q.iter().map(|c| (c * Rational::from_integer(den.clone())).to_integer()).collect();
        let mut found = None;
        'search: for num in divisors(&ints[0]) {
            for d in divisors(ints.last().expect("nonempty")) {
                for s in [1, -1] {
                    let r = Rational::new(&num * s, d.clone());
                    if let Some(rest) = deflate(&q, &r) {
                        found = Some((r, rest));
                        break 'search;
                    }
                }
            }
        }
        let (r, rest) = found.ok_or_else(|| Error::CheckFailed("indicial polynomial has a non-rational root".into()))?;
        roots.push(r);
        q = rest;
    }
    roots.sort();
    Ok(roots)
}

/// Max over classes of exponents congruent mod 1 of (class size − 1 − number
/// of log-free resonances). A resonance between a simple exponent ρ and
/// ρ + d is log-free when the recurrence from ρ meets no obstruction at
/// order d.
fn log_rank(op: &LocalOperator, exps: &[Rational]) -> usize {
    let mut classes: Vec<Vec<Rational>> = Vec::new();
    for e in exps {
        match classes.iter_mut().find(|cl| (&cl[0] - e).is_integer()) {
            Some(cl) => cl.push(e.clone()),
            None => classes.push(vec![e.clone()]),
        }
    }
    classes
        .iter()
        .map(|cl| {
            let mut logfree = 0;
            let mut distinct = cl.clone();
            distinct.dedup();
            for w in distinct.windows(2) {
                let simple = cl.iter().filter(|e| **e == w[0]).count() == 1;
                let gap = (&w[1] - &w[0]).to_integer();
                let steps = gap.try_into().unwrap_or(usize::MAX);
                if simple
                    && op
                        .frobenius(&QSqrt2::rational(w[0].clone()), &[QSqrt2::one()], steps.saturating_add(1))
                        .is_ok()
                {
                    logfree += 1;
                }
            }
            cl.len() - 1 - logfree
        })
        .max()
        .unwrap_or(0)
}

/// Exponents and log structure at one of the four singular points. At ∞ the
/// exponents are those of 1/x.
pub fn indicial_exponents(s: Singularity) -> Result<IndicialData> {
    let op = local_operator_for(s);
    let exponents = rational_roots(op.indicial())?;
    let log_rank = log_rank(&op, &exponents);
    Ok(IndicialData {
        singularity: s,
        indicial: op.indicial().clone(),
        exponents,
        log_rank,
    })
}

/// The exponent-0 slope quoted for the analytic solution 1 + s(x−x₀) + … at
/// c₀ and c: −(240 ± 169√2)/48.
pub fn stated_slope(s: Singularity) -> Option<QSqrt2> {
    let b = match s {
        Singularity::C0 => 169,
        Singularity::C => -169,
        _ => return None,
    };
    Some(QSqrt2::new(rat(-240, 48), rat(-b, 48)))
}

#[derive(Clone, Debug)]
pub struct SlopeReport {
    pub singularity: Singularity,
    pub stated: QSqrt2,
    /// Order through which the series with the stated slope was checked.
    pub order: usize,
    /// Every recurrence equation through `order` holds exactly.
    pub extends: bool,
    /// The order-1 equation leaves the slope undetermined, so any slope
    /// extends (the difference is a multiple of the exponent-1 solution).
    pub slope_free: bool,
    /// Limit of the generic-exponent Frobenius slope −g_1(ρ)/g_0(ρ+1) as ρ → 0.
    pub canonical: QSqrt2,
    /// Perturbing c_2 of the extended series breaks the order-2 equation.
    pub perturbation_detected: bool,
}

pub fn check_slope(s: Singularity, stated: &QSqrt2, order: usize) -> Result<SlopeReport> {
    let op = local_operator_for(s);
    if s.center().is_none() || op.g.len() < 2 {
        return Err(Error::InvalidParameter(format!("no slope check at {s}")));
    }
    let zero = QSqrt2::zero();
    let one = QSqrt2::from_ints(1, 0);
    let slope_free = op.g[0].eval(&one).is_zero() && op.g[1].eval(&zero).is_zero();
    let canonical = if slope_free {
        let num = op.g[1].derivative().eval(&zero);
        let den = op.g[0].derivative().eval(&one);
        -&(&num / &den)
    } else {
        -&(&op.g[1].eval(&zero) / &op.g[0].eval(&one))
    };
    let series = op.frobenius(&zero, &[QSqrt2::one(), stated.clone()], order + 1);
    let extends = match &series {
        Ok(c) => (1..=order).all(|m| op.equation(&zero, c, m).is_zero()),
        Err(_) => false,
    };
    let perturbation_detected = match series {
        Ok(mut c) if c.len() > 2 => {
            c[2] += &QSqrt2::one();
            !op.equation(&zero, &c, 2).is_zero()
        }
        _ => false,
    };
    Ok(SlopeReport {
        singularity: s,
        stated: stated.clone(),
        order,
        extends,
        slope_free,
        canonical,
        perturbation_detected,
    })
}

/// Slope checks at c₀ and c against the quoted constants.
pub fn frobenius_slope_check() -> Result<[SlopeReport; 2]> {
    let at = |s| check_slope(s, &stated_slope(s).expect("finite conifold point"), 12);
    Ok([at(Singularity::C0)?, at(Singularity::C)?])
}

/// The recurrence of the local operator at 0, written for index n as
/// α(n)A_{n+1} + β(n)A_n + γ(n)A_{n−1} = 0.
#[derive(Clone, Debug)]
pub struct RecurrenceAtZero {
    pub alpha: Poly<QSqrt2>,
    pub beta: Poly<QSqrt2>,
    pub gamma: Poly<QSqrt2>,
}

pub fn recurrence_at_zero() -> RecurrenceAtZero {
    let op = local_operator(&QSqrt2::zero());
    let one = QSqrt2::one();
    RecurrenceAtZero {
        alpha: op.g[0].shift(&one),
        beta: op.g[1].clone(),
        gamma: op.g[2].shift(&-&one),
    }
}

impl RecurrenceAtZero {
    /// Equals (n+1)³, −(34n³+51n²+27n+5), n³.
    pub fn is_apery(&self) -> bool {
        self.alpha == Poly::from_i64s(&[1, 3, 3, 1])
            && self.beta == Poly::from_i64s(&[-5, -27, -51, -34])
            && self.gamma == Poly::from_i64s(&[0, 0, 0, 1])
    }
}

/// All recurrence equations at `s` with exponent ρ hold for the given
/// coefficient stream, up to the last fully determined index.
pub fn stream_satisfies(s: Singularity, rho: &Rational, c: &[QSqrt2]) -> bool {
    let op = local_operator_for(s);
    let rho = QSqrt2::rational(rho.clone());
    (0..c.len()).all(|m| op.equation(&rho, c, m).is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::apery::apery_recurrence;

    fn exps(s: Singularity) -> Vec<Rational> {
        indicial_exponents(s).unwrap().exponents
    }

    #[test]
    fn exponents_and_logs() {
        assert_eq!(exps(Singularity::Zero), vec![int(0); 3]);
        assert_eq!(exps(Singularity::C0), vec![int(0), rat(1, 2), int(1)]);
        assert_eq!(exps(Singularity::C), vec![int(0), rat(1, 2), int(1)]);
        assert_eq!(exps(Singularity::Infinity), vec![int(1); 3]);
        assert_eq!(indicial_exponents(Singularity::Zero).unwrap().log_rank, 2);
        assert_eq!(indicial_exponents(Singularity::Infinity).unwrap().log_rank, 2);
        assert_eq!(indicial_exponents(Singularity::C0).unwrap().log_rank, 0);
        assert_eq!(indicial_exponents(Singularity::C).unwrap().exponent_sum(), rat(3, 2));
    }

    #[test]
    fn constant_function_residual() {
        let x = BigFloat::one(128);
        let r = de3_residual(&Jet::constant(BigFloat::one(128)), &x).unwrap();
        assert_eq!(r.value.to_f64(), -4.0);
        assert!(de3_residual(&Jet::constant(BigFloat::one(128)), &BigFloat::zero(128)).is_err());
    }

    #[test]
    fn apery_recurrence_recovered() {
        assert!(recurrence_at_zero().is_apery());
        let a: Vec<QSqrt2> = apery_recurrence(40)
            .unwrap()
            .values
            .into_iter()
            .map(|v| QSqrt2::rational(Rational::from_integer(v)))
            .collect();
        assert!(stream_satisfies(Singularity::Zero, &int(0), &a));
        // Σ A_n x^{−n−1} at infinity.
        assert!(stream_satisfies(Singularity::Infinity, &int(1), &a));
        let mut bad = a.clone();
        bad[5] += &QSqrt2::one();
        assert!(!stream_satisfies(Singularity::Zero, &int(0), &bad));
    }

    #[test]
    fn slopes() {
        let [r0, rc] = frobenius_slope_check().unwrap();
        for r in [&r0, &rc] {
            assert!(r.extends);
            assert!(r.slope_free);
            assert!(r.perturbation_detected);
        }
        assert_eq!(r0.stated, QSqrt2::new(rat(-5, 1), rat(-169, 48)));
        assert_eq!(rc.canonical, rc.stated.scale(&int(2)));
        assert_eq!(r0.canonical, r0.stated.scale(&int(2)));
    }

    #[test]
    fn shifted_numeric_matches_exact() {
        let c0 = consts::c0();
        let exact = de3().shifted(&c0);
        let num = de3().shifted_numeric(&c0.to_bigfloat(200));
        for j in 0..4 {
            for (i, v) in num[j].iter().enumerate() {
                let e = exact[j].coeff(i).to_bigfloat(200);
                assert!((v - &e).abs().to_f64() < 1e-50);
            }
        }
        assert!(exact[3].coeff(0).is_zero());
    }
}
