//! Quadrature of the moments ∫₀^c x^k φ(x) dx against the exact A_k.
//!
//! Each interval is cut at its midpoint and each half is graded
//! geometrically toward its flagged end: panels [a + h rⁱ⁺¹, a + h rⁱ] for
//! i < levels, closed by [a, a + h r^levels]. Every panel gets an n-point
//! Gauss-Legendre rule, and the error estimate is the difference against
//! the same rule on the two halves of every panel. φ is evaluated once per
//! node and reused for every k. Node evaluations run in parallel; all sums
//! are taken in fixed panel order, so results do not depend on scheduling.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::apery::apery_recurrence;
use crate::density::phi;
use crate::error::{Error, Result};
use crate::exactnum::{consts, BigFloat};

#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureSpec {
    /// Gauss-Legendre points per panel.
    pub order: usize,
    /// Geometric levels toward each graded end.
    pub levels: usize,
    /// Grading ratio in (0, 1).
    pub ratio: f64,
    /// Split (0, c) at c₀ and grade toward c₀ from both sides.
    pub split_at_c0: bool,
    pub prec: usize,
    /// Relative tolerance against the exact A_k.
    pub tol: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            order: 30,
            levels: 40,
            ratio: 0.5,
            split_at_c0: true,
            prec: 256,
            tol: 1e-6,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.ratio > 0.0 && self.ratio < 1.0) {
            return Err(Error::InvalidParameter(format!("grading ratio {} not in (0,1)", self.ratio)));
        }
        if self.order < 2 || self.levels == 0 {
            return Err(Error::InvalidParameter("order >= 2 and levels >= 1 required".into()));
        }
        if self.tol <= 0.0 {
            return Err(Error::InvalidParameter("tolerance must be positive".into()));
        }
        Ok(())
    }
}

/// Gauss-Legendre nodes and weights on [−1, 1].
#[derive(Clone, Debug)]
pub struct GaussRule {
    pub nodes: Vec<BigFloat>,
    pub weights: Vec<BigFloat>,
}

/// P_n(x) and P_n'(x).
fn legendre(n: usize, x: &BigFloat) -> (BigFloat, BigFloat) {
    let p = x.prec();
    let mut p0 = BigFloat::one(p);
    let mut p1 = x.clone();
    for k in 1..n {
        let k = k as i64;
        let p2 = (x * &p1 * (2 * k + 1) - &p0 * k) / (k + 1);
        p0 = p1;
        p1 = p2;
    }
    let dp = (x * &p1 - &p0) * n as i64 / (x * x - 1);
    (p1, dp)
}

fn compute_rule(n: usize, prec: usize) -> GaussRule {
    let wp = prec + 32;
    let eps = BigFloat::epsilon(wp - 8);
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for i in 0..n {
        let guess = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut x = BigFloat::from_f64(guess, wp);
        for _ in 0..100 {
            let (pv, dp) = legendre(n, &x);
            let step = pv / &dp;
            x -= &step;
            if step.abs() <= eps {
                break;
            }
        }
        let (_, dp) = legendre(n, &x);
        let w = BigFloat::from_i64(2, wp) / ((BigFloat::one(wp) - &x * &x) * &dp * &dp);
        nodes.push(x.with_prec(prec));
        weights.push(w.with_prec(prec));
    }
    GaussRule { nodes, weights }
}

/// The n-point rule at `prec`, computed once.
pub fn gauss_legendre(n: usize, prec: usize) -> Arc<GaussRule> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, usize), Arc<GaussRule>>>> = OnceLock::new();
    let mut m = CACHE.get_or_init(|| Mutex::new(HashMap::new())).lock().expect("rule cache poisoned");
    m.entry((n, prec)).or_insert_with(|| Arc::new(compute_rule(n, prec))).clone()
}

#[derive(Clone, Debug)]
pub struct Panel {
    pub a: BigFloat,
    pub b: BigFloat,
}

/// Panels covering [a, b], graded toward the flagged ends.
pub fn graded_panels(a: &BigFloat, b: &BigFloat, grade_left: bool, grade_right: bool, spec: &QuadratureSpec) -> Vec<Panel> {
    let prec = spec.prec;
    let r = BigFloat::from_f64(spec.ratio, prec);
    let half = (b - a).mul_pow2(-1);
    let mid = a + &half;
    let toward = |end: &BigFloat, dir: i64| -> Vec<Panel> {
        // Breakpoints end + dir·h·rⁱ, i = 0..=levels, then end itself.
        let mut pts = Vec::with_capacity(spec.levels + 2);
        let mut h = half.clone();
        for _ in 0..=spec.levels {
            pts.push(end + &h * dir);
            h *= &r;
        }
        pts.push(end.clone());
        pts.windows(2)
            .map(|w| if dir > 0 { Panel { a: w[1].clone(), b: w[0].clone() } } else { Panel { a: w[0].clone(), b: w[1].clone() } })
            .collect()
    };
    let plain = |lo: &BigFloat, hi: &BigFloat| vec![Panel { a: lo.clone(), b: hi.clone() }];
    let mut left = if grade_left { toward(a, 1) } else { plain(a, &mid) };
    left.reverse();
    let right = if grade_right { toward(b, -1) } else { plain(&mid, b) };
    left.sort_by(|p, q| p.a.partial_cmp(&q.a).expect("finite"));
    let mut right = right;
    right.sort_by(|p, q| p.a.partial_cmp(&q.a).expect("finite"));
    left.extend(right);
    left
}

/// Nodes and weights of the rule mapped to a panel.
fn panel_rule(p: &Panel, rule: &GaussRule) -> Vec<(BigFloat, BigFloat)> {
    let half = (&p.b - &p.a).mul_pow2(-1);
    let mid = &p.a + &half;
    rule.nodes
        .iter()
        .zip(&rule.weights)
        .map(|(x, w)| (&mid + &half * x, &half * w))
        .collect()
}

/// For each panel: the rule on the panel and the rule on its two halves.
struct Discretization {
    coarse: Vec<Vec<(BigFloat, BigFloat)>>,
    fine: Vec<Vec<(BigFloat, BigFloat)>>,
}

fn discretize(panels: &[Panel], spec: &QuadratureSpec) -> Discretization {
    let rule = gauss_legendre(spec.order, spec.prec);
    let mut coarse = Vec::with_capacity(panels.len());
    let mut fine = Vec::with_capacity(panels.len());
    for p in panels {
        coarse.push(panel_rule(p, &rule));
        let m = (&p.a + &p.b).mul_pow2(-1);
        let mut f = panel_rule(&Panel { a: p.a.clone(), b: m.clone() }, &rule);
        f.extend(panel_rule(&Panel { a: m, b: p.b.clone() }, &rule));
        fine.push(f);
    }
    Discretization { coarse, fine }
}

fn eval_all<F>(pts: &[Vec<(BigFloat, BigFloat)>], f: &F) -> Result<Vec<Vec<BigFloat>>>
where
    F: Fn(&BigFloat) -> Result<BigFloat> + Sync,
{
    pts.par_iter()
        .map(|panel| panel.iter().map(|(x, _)| f(x)).collect::<Result<Vec<_>>>())
        .collect()
}

/// ∫_a^b f with the flagged ends graded; returns (value, error estimate).
pub fn integrate<F>(f: F, a: &BigFloat, b: &BigFloat, grade_left: bool, grade_right: bool, spec: &QuadratureSpec) -> Result<(BigFloat, BigFloat)>
where
    F: Fn(&BigFloat) -> Result<BigFloat> + Sync,
{
    spec.validate()?;
    let panels = graded_panels(a, b, grade_left, grade_right, spec);
    let d = discretize(&panels, spec);
    let fc = eval_all(&d.coarse, &f)?;
    let ff = eval_all(&d.fine, &f)?;
    let sum = |pts: &[Vec<(BigFloat, BigFloat)>], vals: &[Vec<BigFloat>]| -> BigFloat {
        let mut s = BigFloat::zero(spec.prec);
        for (p, v) in pts.iter().zip(vals) {
            for ((_, w), y) in p.iter().zip(v) {
                s += w * y;
            }
        }
        s
    };
    let coarse = sum(&d.coarse, &fc);
    let fine = sum(&d.fine, &ff);
    Ok((fine.clone(), (&fine - &coarse).abs()))
}

#[derive(Clone, Debug)]
pub struct MomentReport {
    pub k: usize,
    pub value: BigFloat,
    pub exact: BigInt,
    pub rel_error: f64,
    /// |fine − coarse| relative to the value.
    pub estimate: f64,
    pub panels: usize,
    pub pass: bool,
}

#[derive(Clone, Debug)]
pub struct MomentSuite {
    pub spec: QuadratureSpec,
    pub reports: Vec<MomentReport>,
    /// Nodes where φ was not strictly positive.
    pub nonpositive_nodes: usize,
    /// Fraction of ∫ x^k φ coming from x > c/2, per k.
    pub upper_half_mass: Vec<f64>,
    /// Some panel has c₀ strictly inside it, so a rule straddles the kink.
    pub kink_inside_panel: bool,
}

impl MomentSuite {
    pub fn all_pass(&self) -> bool {
        self.reports.iter().all(|r| r.pass)
    }

    /// The mesh is misconfigured or some moment missed its tolerance.
    pub fn flagged(&self) -> bool {
        self.kink_inside_panel || !self.all_pass()
    }
}

/// Panels of (0, c) for φ.
pub fn density_panels(spec: &QuadratureSpec) -> Vec<Panel> {
    let p = spec.prec + 16;
    let zero = BigFloat::zero(p);
    let c0 = consts::c0().to_bigfloat(p);
    let c = consts::c().to_bigfloat(p);
    if spec.split_at_c0 {
        let mut v = graded_panels(&zero, &c0, true, true, spec);
        v.extend(graded_panels(&c0, &c, true, true, spec));
        v
    } else {
        graded_panels(&zero, &c, true, true, spec)
    }
}

/// Moments 0..=k_max of φ compared with A_k.
pub fn moment_suite(k_max: usize, spec: &QuadratureSpec) -> Result<MomentSuite> {
    spec.validate()?;
    let prec = spec.prec;
    let panels = density_panels(spec);
    let d = discretize(&panels, spec);
    let f = |x: &BigFloat| -> Result<BigFloat> { Ok(phi(x, prec)?.phi) };
    let fc = eval_all(&d.coarse, &f)?;
    let ff = eval_all(&d.fine, &f)?;
    let nonpositive_nodes = fc.iter().chain(&ff).flatten().filter(|v| !v.is_positive()).count();
    let exact = apery_recurrence(k_max.max(1) as u64)?.values;
    let half_c = consts::c().to_bigfloat(prec).mul_pow2(-1);
    let c0 = consts::c0().to_bigfloat(prec + 16);
    let kink_inside_panel = panels.iter().any(|p| p.a < c0 && c0 < p.b);
    let moments = |pts: &[Vec<(BigFloat, BigFloat)>], vals: &[Vec<BigFloat>]| -> (Vec<BigFloat>, Vec<BigFloat>) {
        let mut s = vec![BigFloat::zero(prec); k_max + 1];
        let mut upper = vec![BigFloat::zero(prec); k_max + 1];
        for (p, v) in pts.iter().zip(vals) {
            for ((x, w), y) in p.iter().zip(v) {
                let mut t = w * y;
                for k in 0..=k_max {
                    s[k] += &t;
                    if *x > half_c {
                        upper[k] += &t;
                    }
                    t *= x;
                }
            }
        }
        (s, upper)
    };
    let (coarse, _) = moments(&d.coarse, &fc);
    let (fine, upper) = moments(&d.fine, &ff);
    let reports = (0..=k_max)
        .map(|k| {
            let a = BigFloat::from_bigint(&exact[k], prec);
            let rel_error = ((&fine[k] - &a) / &a).abs().to_f64();
            MomentReport {
                k,
                estimate: ((&fine[k] - &coarse[k]) / &a).abs().to_f64(),
                value: fine[k].clone(),
                exact: exact[k].clone(),
                rel_error,
                panels: panels.len(),
                pass: rel_error <= spec.tol,
            }
        })
        .collect();
    let upper_half_mass = (0..=k_max).map(|k| (&upper[k] / &fine[k]).to_f64()).collect();
    Ok(MomentSuite {
        spec: spec.clone(),
        reports,
        nonpositive_nodes,
        upper_half_mass,
        kink_inside_panel,
    })
}

/// A single moment.
pub fn moment(k: usize, spec: &QuadratureSpec) -> Result<MomentReport> {
    let mut s = moment_suite(k, spec)?;
    Ok(s.reports.swap_remove(k))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(prec: usize) -> QuadratureSpec {
        QuadratureSpec {
            prec,
            levels: 40,
            ..QuadratureSpec::default()
        }
    }

    #[test]
    fn rule_integrates_polynomials() {
        let r = gauss_legendre(30, 256);
        let s: BigFloat = r.weights.iter().cloned().sum();
        assert!((s - 2).abs().to_f64() < 1e-70);
        // ∫ x^58 = 2/59 is exact for 30 points.
        let m: BigFloat = r.nodes.iter().zip(&r.weights).map(|(x, w)| w * x.powi(58)).sum();
        assert!((m - BigFloat::from_i64(2, 256) / 59).abs().to_f64() < 1e-70);
    }

    #[test]
    fn singular_endpoints() {
        let s = spec(128);
        let zero = BigFloat::zero(128);
        let one = BigFloat::one(128);
        let (v, e) = integrate(|x| Ok(-x.ln()), &zero, &one, true, false, &s).unwrap();
        assert!((v - 1).abs().to_f64() < 1e-10);
        assert!(e.to_f64() < 1e-10);
        let (v, _) = integrate(|x| Ok((BigFloat::one(128) - x).sqrt()), &zero, &one, false, true, &s).unwrap();
        assert!((v - BigFloat::from_i64(2, 128) / 3).abs().to_f64() < 1e-10);
    }

    #[test]
    fn mixed_against_uniform_refinement() {
        // −ln(x)/√(1−x), graded at both ends, against a much finer mesh of
        // low-order panels (about 450 of them).
        let s = spec(128);
        let zero = BigFloat::zero(128);
        let one = BigFloat::one(128);
        let g = |x: &BigFloat| Ok(-x.ln() / (BigFloat::one(128) - x).sqrt());
        let (v, _) = integrate(g, &zero, &one, true, true, &s).unwrap();
        let brute = QuadratureSpec { levels: 110, order: 10, ratio: 0.6, ..s.clone() };
        let (w, _) = integrate(g, &zero, &one, true, true, &brute).unwrap();
        assert!((v - w).abs().to_f64() < 1e-8);
    }

    #[test]
    fn bad_spec_rejected() {
        let s = QuadratureSpec { ratio: 1.5, ..QuadratureSpec::default() };
        assert!(s.validate().is_err());
    }
}
