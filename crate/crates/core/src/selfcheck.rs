//! The thirteen end-to-end acceptance checks.
//!
//! Each check returns a [`Criterion`] with a one-line detail. Details never
//! contain timings, so a full run prints the same bytes every time.

use std::time::{Duration, Instant};

use num_bigint::BigInt;

use crate::apery::{apery_binomial, apery_recurrence, hankel_positivity};
use crate::density::{phi, u0_eval, u0_jet, uinf_eval, uinf_jet, v0_jet, v2_jet, EndpointConstants};
use crate::density::solutions::apery_partial_sum;
use crate::error::Result;
use crate::exactnum::{consts, rat, BigFloat, Jet, Rational};
use crate::heun::certify::{certify_positive, scan_ratios};
use crate::heun::{apery_square_coeffs, as_integers, params_l2, params_l6, HeunParams};
use crate::hyper::f21_derivs_split;
use crate::modular::{product_check, parameterization_check, special_values, theta_logderiv_identity};
use crate::moments::{moment_suite, QuadratureSpec};
use crate::odecheck::{de3_residual, frobenius_slope_check, indicial_exponents, Singularity};

pub const COUNT: usize = 13;

#[derive(Clone, Debug)]
pub struct Criterion {
    pub id: usize,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

impl Criterion {
    pub fn line(&self) -> String {
        format!(
            "criterion {:>2} {:<28} {}  {}",
            self.id,
            self.name,
            if self.pass { "PASS" } else { "FAIL" },
            self.detail
        )
    }
}

pub const NAMES: [&str; COUNT] = [
    "sequence equivalence",
    "heun square identity",
    "positivity certificates",
    "moment identity",
    "S0 S1 product",
    "gauss asymptotic",
    "representation consistency",
    "ode residuals",
    "frobenius data",
    "endpoint asymptotics",
    "modular formal identities",
    "special values",
    "hankel positivity",
];

/// Runs criterion `id` (1-based) at `prec` bits.
pub fn run(id: usize, prec: usize) -> Criterion {
    let r = match id {
        1 => sequence_equivalence(),
        2 => heun_square(),
        3 => certificates(),
        4 => moments(prec),
        5 => s0_s1_product(prec),
        6 => gauss_asymptotic(prec),
        7 => representation(prec),
        8 => residuals(prec),
        9 => frobenius(),
        10 => endpoints(prec),
        11 => formal_identities(),
        12 => specials(prec),
        13 => hankel(),
        _ => Ok((false, format!("no criterion {id}"))),
    };
    let (pass, detail) = r.unwrap_or_else(|e| (false, format!("error: {e}")));
    Criterion {
        id,
        name: NAMES.get(id.wrapping_sub(1)).copied().unwrap_or("unknown"),
        pass,
        detail,
    }
}

pub fn run_all(prec: usize) -> Vec<Criterion> {
    (1..=COUNT).map(|i| run(i, prec)).collect()
}

type Outcome = Result<(bool, String)>;

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let v = f();
    (v, t.elapsed())
}

fn sequence_equivalence() -> Outcome {
    let (r, dt) = timed(|| -> Result<Option<u64>> {
        let rec = apery_recurrence(200)?.values;
        Ok((0..=200u64).find(|&n| apery_binomial(n) != rec[n as usize]))
    });
    let bad = r?;
    let fast = dt < Duration::from_secs(10);
    let detail = match bad {
        None => format!("n <= 200 identical; runtime {} 10 s", if fast { "under" } else { "over" }),
        Some(n) => format!("first difference at n = {n}"),
    };
    Ok((bad.is_none() && fast, detail))
}

fn heun_square() -> Outcome {
    let sq = apery_square_coeffs(31)?;
    let Some(ints) = as_integers(&sq) else {
        return Ok((false, "a coefficient has a nonzero sqrt(2) part".into()));
    };
    let a = apery_recurrence(30)?.values;
    let bad = (0..=30).find(|&n| ints[n] != Rational::from_integer(a[n].clone()));
    Ok(match bad {
        None => (true, "coefficients 0..=30 equal A_n, sqrt(2) parts vanish".into()),
        Some(n) => (false, format!("coefficient {n} differs")),
    })
}

fn certify_case(name: &str, p: &HeunParams, n0: usize, kappa: i64) -> (bool, String) {
    let k = rat(kappa, 1);
    let cert = certify_positive(p, n0, &k);
    let scan = scan_ratios(p, n0, &k, n0 + 500);
    match (cert, scan) {
        (Ok(c), Ok(_)) if c.is_valid() => (true, format!("{name} (N0={n0}, kappa={kappa}) certified, scan to {} ok", n0 + 500)),
        (Err(e), _) => (false, format!("{name}: {e}")),
        (_, Err(n)) => (false, format!("{name}: bracket fails at n = {n}")),
        _ => (false, format!("{name}: certificate incomplete")),
    }
}

fn certificates() -> Outcome {
    let a = certify_case("L2", &params_l2(), 45, 10);
    let b = certify_case("L6", &params_l6(), 18, 4);
    Ok((a.0 && b.0, format!("{}; {}", a.1, b.1)))
}

fn moments(prec: usize) -> Outcome {
    let spec = QuadratureSpec { prec, ..QuadratureSpec::default() };
    let s = moment_suite(12, &spec)?;
    let worst = s.reports.iter().map(|r| r.rel_error).fold(0.0, f64::max);
    Ok((s.all_pass(), format!("k = 0..=12, max relative error {worst:.2e} (tol {:.0e})", spec.tol)))
}

fn s0_s1_product(prec: usize) -> Outcome {
    let l = product_check(prec)?;
    let pass = l.product_error <= 1e-12 && l.agreement <= 1e-12;
    Ok((pass, format!("product error {:.2e}, modular vs direct {:.2e}", l.product_error, l.agreement)))
}

/// F(1−δ) + (√3/2π)ln δ against 3√3 ln 3/(2π).
pub fn gauss_errors(prec: usize) -> Result<Vec<(f64, f64)>> {
    let wp = prec + 32;
    let pi2 = BigFloat::pi(wp).mul_pow2(1);
    let s3 = BigFloat::from_i64(3, wp).sqrt();
    let limit = &s3 * 3 * BigFloat::from_i64(3, wp).ln() / &pi2;
    [4, 6, 8]
        .into_iter()
        .map(|e| {
            let d = BigFloat::from_i64(10, wp).powi(e).recip();
            let z = BigFloat::one(wp) - &d;
            let f = f21_derivs_split(&z, &d, prec, 0)?.d[0].clone();
            let v = f + &s3 / &pi2 * d.ln();
            Ok((d.to_f64(), (v - &limit).abs().to_f64()))
        })
        .collect()
}

fn gauss_asymptotic(prec: usize) -> Outcome {
    let errs = gauss_errors(prec)?;
    let shrinking = errs.windows(2).all(|w| w[1].1 < w[0].1);
    let last = errs.last().map(|e| e.1).unwrap_or(f64::NAN);
    Ok((shrinking && last <= 1e-4, format!("errors {:.2e}, {:.2e}, {:.2e}", errs[0].1, errs[1].1, errs[2].1)))
}

fn representation(prec: usize) -> Outcome {
    let a: Vec<BigInt> = apery_recurrence(4000)?.values;
    let af: Vec<BigFloat> = a.iter().map(|v| BigFloat::from_bigint(v, prec)).collect();
    let c0 = consts::c0().to_bigfloat(prec);
    let mut worst_u0: f64 = 0.0;
    for i in 1..=50 {
        let x = &c0 * i / 51;
        let (u, _) = u0_eval(&x, prec)?;
        let (s, tail) = apery_partial_sum(&af, &x);
        worst_u0 = worst_u0.max((u - s).abs().to_f64() + tail.to_f64());
    }
    let c = consts::c().to_bigfloat(prec);
    let mut worst_inf: f64 = 0.0;
    for i in 0..10 {
        // x in (2c, 10c)
        let x = &c * (21 + 8 * i) / 10;
        let (u, _) = uinf_eval(&x, prec)?;
        let y = x.recip();
        let (s, tail) = apery_partial_sum(&af[..400], &y);
        let s = s * &y;
        worst_inf = worst_inf.max(((&u - &s).abs() + tail * &y).to_f64() / u.abs().to_f64());
    }
    let pass = worst_u0 <= 1e-10 && worst_inf <= 1e-10;
    Ok((pass, format!("u0 grid max {worst_u0:.2e} incl. tail; u_inf relative max {worst_inf:.2e}")))
}

/// |DE3 residual| for each solution at its sample points.
pub fn residual_table(prec: usize) -> Result<Vec<(&'static str, f64, f64)>> {
    let c0 = consts::c0().to_f64();
    let c = consts::c().to_f64();
    let samples: [(&str, Vec<f64>); 4] = [
        ("u0", (1..=5).map(|i| c0 * i as f64 / 6.0).collect()),
        ("v0", (1..=5).map(|i| c0 * i as f64 / 6.0).collect()),
        ("v2", (1..=5).map(|i| c0 + (c - c0) * i as f64 / 6.0).collect()),
        ("u_inf", vec![2.0 * c, 3.0 * c, 6.0 * c, -1.0, -0.25]),
    ];
    let mut out = Vec::new();
    for (name, xs) in samples {
        for x in xs {
            let xb = BigFloat::from_f64(x, prec);
            let jet = Jet::variable(xb.clone());
            let e = match name {
                "u0" => u0_jet(&jet, prec)?,
                "v0" => v0_jet(&jet, prec)?,
                "v2" => v2_jet(&jet, prec)?,
                _ => uinf_jet(&jet, prec)?,
            };
            let r = de3_residual(&e.jet, &xb)?;
            out.push((name, x, r.value.abs().to_f64()));
        }
    }
    Ok(out)
}

fn residuals(prec: usize) -> Outcome {
    let t = residual_table(prec)?;
    let worst = t.iter().map(|r| r.2).fold(0.0, f64::max);
    Ok((worst <= 1e-15, format!("{} points, max |residual| {worst:.2e}", t.len())))
}

fn frobenius() -> Outcome {
    let want = [
        (Singularity::Zero, [0, 0, 0], 1),
        (Singularity::C0, [0, 1, 2], 2),
        (Singularity::C, [0, 1, 2], 2),
        (Singularity::Infinity, [1, 1, 1], 1),
    ];
    let mut ok = true;
    for (s, num, den) in want {
        let d = indicial_exponents(s)?;
        let mut got = d.exponents.clone();
        got.sort();
        let expect: Vec<Rational> = num.iter().map(|&n| rat(n, den)).collect();
        ok &= got == expect;
    }
    let slopes = frobenius_slope_check()?;
    let slopes_ok = slopes.iter().all(|r| r.extends && r.perturbation_detected);
    Ok((
        ok && slopes_ok,
        format!(
            "exponents {}; stated slopes {}",
            if ok { "exact" } else { "differ" },
            if slopes_ok { "extend exactly" } else { "do not extend" }
        ),
    ))
}

/// (δ, φ(δ)/(−ln δ)) and (δ, φ(c−δ)/√δ) over a δ-ladder.
pub fn endpoint_ladders(prec: usize) -> Result<(Vec<(f64, BigFloat)>, Vec<(f64, BigFloat)>)> {
    let c = consts::c().to_bigfloat(prec);
    let mut left = Vec::new();
    let mut right = Vec::new();
    for e in [2u32, 4, 6, 8] {
        let d = BigFloat::from_i64(10, prec).powi(e).recip();
        left.push((d.to_f64(), phi(&d, prec)?.phi / (-d.ln())));
        right.push((d.to_f64(), phi(&(&c - &d), prec)?.phi / d.sqrt()));
    }
    Ok((left, right))
}

fn endpoints(prec: usize) -> Outcome {
    let (left, right) = endpoint_ladders(prec)?;
    let k = EndpointConstants::new(prec);
    let six_pi2 = -k.scale_left.clone();
    let rel = |v: &BigFloat, t: &BigFloat| ((v - t) / t).abs().to_f64();
    let le: Vec<f64> = left.iter().map(|(_, v)| rel(v, &six_pi2)).collect();
    let re: Vec<f64> = right.iter().map(|(_, v)| rel(v, &k.scale_right)).collect();
    let mono = |e: &[f64]| e.windows(2).all(|w| w[1] <= w[0]);
    let pass = mono(&le) && mono(&re) && le[le.len() - 1] <= 0.01 && re[re.len() - 1] <= 0.01;
    Ok((pass, format!("relative gaps at delta = 1e-8: left {:.2e}, right {:.2e}; monotone", le[3], re[3])))
}

fn formal_identities() -> Outcome {
    let (r, dt) = timed(|| -> Result<(bool, bool)> {
        Ok((theta_logderiv_identity(40)?.passed(), parameterization_check(40)?.passed()))
    });
    let (a, b) = r?;
    let fast = dt < Duration::from_secs(30);
    Ok((
        a && b && fast,
        format!(
            "theta identity {}, parameterization {} through q^40; runtime {} 30 s",
            if a { "exact" } else { "mismatch" },
            if b { "exact" } else { "mismatch" },
            if fast { "under" } else { "over" }
        ),
    ))
}

fn specials(prec: usize) -> Outcome {
    let rows = special_values(prec);
    let failed: Vec<String> = rows.iter().filter(|r| !r.pass).map(|r| format!("{} off by {:.3e}", r.name, r.error)).collect();
    let detail = if failed.is_empty() {
        format!("all {} entries within 1e-20", rows.len())
    } else {
        format!("{}/{} entries within 1e-20; {}", rows.len() - failed.len(), rows.len(), failed.join(", "))
    };
    Ok((failed.is_empty(), detail))
}

fn hankel() -> Outcome {
    let h = hankel_positivity(15)?;
    let bad = h.iter().find(|r| r.signs() != (1, 1)).map(|r| r.m);
    Ok(match bad {
        None => (true, "det H_m and det H_m^(1) > 0 for m <= 15".into()),
        Some(m) => (false, format!("nonpositive determinant at m = {m}")),
    })
}
