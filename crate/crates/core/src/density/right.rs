//! v₂ on (c₀, c).
//!
//! v₂(x) = (x − c₀)(c − x)^{1/2}/(c − c₀) · H₁(1 − c₀x) · H₂(1 − c₀x)
//!
//! with H₁, H₂ the Heun functions of the two positivity certificates. As
//! x → c₀⁺ the Heun argument approaches the radius a₁ and the series needs
//! about 6000/(x − c₀) terms at 256 bits, so the Heun product is only summed
//! directly for x − c₀ ≥ 1.6. Closer in, v₂ is continued as a solution of
//! the third-order ODE:
//!
//! - Taylor anchors at c₀ + 0.06, c₀ + 0.25, c₀ + 1, each seeded with v₂,
//!   v₂', v₂'' from one (long, one-off) Heun summation;
//! - for x − c₀ ≤ c₀/2, the Frobenius basis t^ρ(1 + …), ρ ∈ {0, 1/2, 1},
//!   t = x − c₀, matched to the first anchor at t = 0.015.
//!
//! The anchors are independent of each other, so agreement between
//! neighbouring pieces at their shared boundary is a genuine check.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use super::solutions::Evaluated;
use crate::error::{Error, Result};
use crate::exactnum::{consts, rat, BigFloat, Jet, Rational};
use crate::heun::eval::DEFAULT_MAX_TERMS;
use crate::heun::{params_l2, params_l6, HeunEvaluator};
use crate::odecheck::{local_operator, LocalSeries};

/// (center, lower end, upper end) of each Taylor anchor in t = x − c₀.
pub const ANCHORS: [(f64, f64, f64); 3] = [(0.06, 0.0, 0.105), (0.25, 0.105, 0.45), (1.0, 0.45, 1.6)];

/// Where the Frobenius basis is matched to the first anchor.
pub const MATCH_T: f64 = 0.015;

/// Beyond this t the Heun product is summed directly.
pub const HEUN_FROM: f64 = 1.6;

struct Anchor {
    center_t: f64,
    lo: f64,
    hi: f64,
    x0: BigFloat,
    series: LocalSeries,
    rel_err: f64,
}

pub struct RightBranch {
    prec: usize,
    wp: usize,
    c0: BigFloat,
    c: BigFloat,
    span: BigFloat,
    h1: HeunEvaluator,
    h2: HeunEvaluator,
    anchors: Vec<Anchor>,
    frob: Vec<LocalSeries>,
    frob_coef: [BigFloat; 3],
    frob_rel: f64,
    frob_upto: f64,
}

fn solve3(mut a: [[BigFloat; 3]; 3], mut b: [BigFloat; 3]) -> Result<[BigFloat; 3]> {
    for col in 0..3 {
        let piv = (col..3)
            .max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).expect("finite"))
            .expect("nonempty");
        if a[piv][col].is_zero() {
            return Err(Error::NotInvertible("singular matching system".into()));
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..3 {
            let f = &a[r][col] / &a[col][col];
            for k in col..3 {
                let t = &f * &a[col][k];
                a[r][k] -= t;
            }
            let t = &f * &b[col];
            b[r] -= t;
        }
    }
    let mut x: [BigFloat; 3] = std::array::from_fn(|_| BigFloat::zero(b[0].prec()));
    for r in (0..3).rev() {
        let mut s = b[r].clone();
        for k in r + 1..3 {
            s -= &a[r][k] * &x[k];
        }
        x[r] = s / &a[r][r];
    }
    Ok(x)
}

fn rel(err: &BigFloat, v: &BigFloat) -> f64 {
    if v.is_zero() {
        return 0.0;
    }
    (err / v.abs().with_prec(64)).to_f64()
}

fn constant_jet(j: &Jet) -> bool {
    j.c[1..].iter().all(|v| v.is_zero())
}

impl RightBranch {
    pub fn new(prec: usize) -> Result<Self> {
        let wp = prec + 64;
        let c0 = consts::c0().to_bigfloat(wp);
        let c = consts::c().to_bigfloat(wp);
        let mut rb = RightBranch {
            prec,
            wp,
            span: &c - &c0,
            c0: c0.clone(),
            c,
            h1: HeunEvaluator::new(&params_l2(), wp).with_certified_ratio(45),
            h2: HeunEvaluator::new(&params_l6(), wp).with_certified_ratio(18),
            anchors: Vec::new(),
            frob: Vec::new(),
            frob_coef: std::array::from_fn(|_| BigFloat::zero(wp)),
            frob_rel: 0.0,
            frob_upto: consts::c0().to_f64() / 2.0,
        };
        let c0f = consts::c0().to_f64();
        for (tc, lo, hi) in ANCHORS {
            let lo = lo.max(rb.frob_upto);
            let x0 = &c0 + BigFloat::from_f64(tc, wp);
            let seed = rb.heun_jet(&Jet::variable(x0.clone()))?;
            let d = seed.jet.derivs();
            let radius = tc.min(tc + c0f).min(consts::c().to_f64() - c0f - tc);
            let reach = (tc - lo).max(hi - tc);
            let series = LocalSeries::taylor(&x0, &[d[0].clone(), d[1].clone(), d[2].clone()], radius, reach)?;
            rb.anchors.push(Anchor {
                center_t: tc,
                lo,
                hi,
                x0,
                series,
                rel_err: seed.rel_err * 16.0 + 2f64.powi(-(prec as i32)),
            });
        }
        let c0q = consts::c0();
        let op = local_operator(&c0q);
        let reach = MATCH_T * 1.1;
        for rho in [rat(0, 1), rat(1, 2), rat(1, 1)] {
            rb.frob.push(LocalSeries::frobenius(&op, &c0q, &rho, c0f, reach, wp)?);
        }
        let tm = BigFloat::from_f64(MATCH_T, wp);
        let basis: Vec<[BigFloat; 4]> = rb
            .frob
            .iter()
            .map(|s| s.eval(&tm).map(|(j, _)| j.derivs()))
            .collect::<Result<_>>()?;
        let a0 = &rb.anchors[0];
        let (target, _) = a0.series.eval(&(&c0 + &tm - &a0.x0))?;
        let target = target.derivs();
        let m: [[BigFloat; 3]; 3] = std::array::from_fn(|k| std::array::from_fn(|r| basis[r][k].clone()));
        rb.frob_coef = solve3(m, [target[0].clone(), target[1].clone(), target[2].clone()])?;
        rb.frob_rel = a0.rel_err * 16.0;
        Ok(rb)
    }

    pub fn prec(&self) -> usize {
        self.prec
    }

    /// Coefficients of v₂ = α f₀ + β f_{1/2} + γ f₁ in the Frobenius basis at
    /// c₀; in particular v₂(c₀⁺) = α.
    pub fn frobenius_coefficients(&self) -> &[BigFloat; 3] {
        &self.frob_coef
    }

    /// The Heun product directly, for any x in (c₀, c].
    pub fn heun_jet(&self, x: &Jet) -> Result<Evaluated> {
        let wp = self.wp;
        let xw = Jet { c: x.c.clone().map(|v| v.with_prec(wp)) };
        let kmax = if constant_jet(&xw) { 0 } else { 3 };
        let z = &Jet::constant(BigFloat::one(wp)) - &xw.scale(&self.c0);
        let e1 = self.h1.eval(z.value(), kmax, DEFAULT_MAX_TERMS)?;
        let e2 = self.h2.eval(z.value(), kmax, DEFAULT_MAX_TERMS)?;
        let hh = &z.compose(&e1.d) * &z.compose(&e2.d);
        let cx = &Jet::constant(self.c.clone()) - &xw;
        let root = if constant_jet(&cx) || cx.value().is_zero() {
            Jet::constant(cx.value().abs().sqrt())
        } else {
            cx.sqrt()
        };
        let pref = (&(&xw - &Jet::constant(self.c0.clone())) * &root).scale(&self.span.recip());
        Ok(Evaluated {
            jet: &pref * &hh,
            rel_err: rel(&e1.err[0], &e1.d[0]) + rel(&e2.err[0], &e2.d[0]) + 2f64.powi(-(wp as i32) + 8),
        })
    }

    /// v₂ as a jet at x, c₀ ≤ x ≤ c.
    pub fn v2_jet(&self, x: &Jet) -> Result<Evaluated> {
        let wp = self.wp;
        let xw = Jet { c: x.c.clone().map(|v| v.with_prec(wp)) };
        let t = xw.value() - &self.c0;
        let tf = t.to_f64();
        let out = |e: Evaluated| Evaluated {
            jet: Jet { c: e.jet.c.map(|v| v.with_prec(self.prec)) },
            rel_err: e.rel_err,
        };
        let tiny = BigFloat::epsilon(self.prec.saturating_sub(8));
        if t.abs() <= tiny {
            return Ok(out(Evaluated {
                jet: Jet::constant(self.frob_coef[0].clone()),
                rel_err: self.frob_rel,
            }));
        }
        if t.is_negative() || *xw.value() > self.c {
            return Err(Error::Domain(format!("v2 needs c0 <= x <= c, got {}", xw.value().to_f64())));
        }
        if tf <= self.frob_upto {
            let mut d: [BigFloat; 4] = std::array::from_fn(|_| BigFloat::zero(wp));
            let mut tail = BigFloat::zero(64);
            for (s, a) in self.frob.iter().zip(&self.frob_coef) {
                let (j, e) = s.eval(&t)?;
                for (k, dk) in d.iter_mut().enumerate() {
                    *dk += a * j.deriv(k);
                }
                tail += e * a.abs().with_prec(64);
            }
            let v = d[0].clone();
            return Ok(out(Evaluated {
                jet: xw.compose(&d),
                rel_err: self.frob_rel + rel(&tail, &v),
            }));
        }
        if tf < HEUN_FROM {
            let a = self
                .anchors
                .iter()
                .find(|a| tf <= a.hi)
                .expect("anchors cover up to HEUN_FROM");
            debug_assert!(tf >= a.lo && (a.center_t - tf).abs() < a.series.radius);
            let (j, e) = a.series.eval(&(xw.value() - &a.x0))?;
            let d = j.derivs();
            let r = rel(&e, &d[0]);
            return Ok(out(Evaluated {
                jet: xw.compose(&d),
                rel_err: a.rel_err + r,
            }));
        }
        self.heun_jet(&xw).map(out)
    }

    /// Agreement of neighbouring pieces at the region boundaries, as
    /// (t, relative difference) pairs.
    pub fn seam_report(&self) -> Result<Vec<(f64, f64)>> {
        let mut out = Vec::new();
        let wp = self.wp;
        let piece = |i: usize, t: &BigFloat| -> Result<BigFloat> {
            let a = &self.anchors[i];
            Ok(a.series.eval(&(&self.c0 + t - &a.x0))?.0.value().clone())
        };
        // Frobenius against the first anchor at the switch point.
        let t = BigFloat::from_f64(self.frob_upto, wp);
        let mut f = BigFloat::zero(wp);
        for (s, a) in self.frob.iter().zip(&self.frob_coef) {
            f += a * s.eval(&t)?.0.value();
        }
        let g = piece(0, &t)?;
        out.push((self.frob_upto, ((&f - &g) / &g).abs().to_f64()));
        for i in 0..self.anchors.len() {
            let t = BigFloat::from_f64(self.anchors[i].hi, wp);
            let here = piece(i, &t)?;
            let next = if i + 1 < self.anchors.len() {
                piece(i + 1, &t)?
            } else {
                self.heun_jet(&Jet::constant(&self.c0 + &t))?.jet.value().clone()
            };
            out.push((self.anchors[i].hi, ((&here - &next) / &next).abs().to_f64()));
        }
        Ok(out)
    }
}

fn cache() -> &'static Mutex<HashMap<usize, Arc<RightBranch>>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<RightBranch>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The right-branch evaluator at `prec`, built once per precision.
pub fn right_branch(prec: usize) -> Result<Arc<RightBranch>> {
    let mut map = cache().lock().expect("right-branch cache poisoned");
    if let Some(rb) = map.get(&prec) {
        return Ok(rb.clone());
    }
    let rb = Arc::new(RightBranch::new(prec)?);
    map.insert(prec, rb.clone());
    Ok(rb)
}

/// Exponent of the Frobenius piece as a rational, for reports.
pub fn frobenius_exponents() -> [Rational; 3] {
    [rat(0, 1), rat(1, 2), rat(1, 1)]
}
