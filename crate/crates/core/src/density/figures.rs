//! CSV samples of the solutions and of φ, one file per curve with columns
//! `x,value` and twelve decimals.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use super::{algebraic_maps, phi, u0_eval, uinf_eval, v0_eval, v2_eval};
use crate::error::Result;
use crate::exactnum::{consts, BigFloat};

/// Points per curve.
pub const SAMPLES: usize = 200;

fn linspace(a: f64, b: f64, n: usize, open_left: bool, open_right: bool) -> Vec<f64> {
    let lo = usize::from(open_left);
    let hi = n - usize::from(open_right);
    (lo..=hi).map(|i| a + (b - a) * i as f64 / n as f64).collect()
}

fn write_csv(dir: &Path, name: &str, rows: &[(f64, f64)]) -> Result<PathBuf> {
    let path = dir.join(name);
    let mut f = fs::File::create(&path)?;
    writeln!(f, "x,value")?;
    for (x, v) in rows {
        writeln!(f, "{x:.12},{v:.12}")?;
    }
    Ok(path)
}

fn sample(xs: &[f64], prec: usize, g: impl Fn(&BigFloat) -> Result<BigFloat>) -> Result<Vec<(f64, f64)>> {
    xs.iter()
        .map(|&x| Ok((x, g(&BigFloat::from_f64(x, prec))?.to_f64())))
        .collect()
}

/// Writes every figure file into `dir` and returns their paths.
pub fn write_figures(dir: &Path, prec: usize) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let c0 = consts::c0().to_f64();
    let c = consts::c().to_f64();
    let mut out = Vec::new();

    let right = linspace(c, 4.0 * c, SAMPLES, true, false);
    out.push(write_csv(dir, "fig1_uinf_right.csv", &sample(&right, prec, |x| Ok(uinf_eval(x, prec)?.0))?)?);
    let left = linspace(-c, 0.0, SAMPLES, false, true);
    out.push(write_csv(dir, "fig1_uinf_left.csv", &sample(&left, prec, |x| Ok(uinf_eval(x, prec)?.0))?)?);

    let inner = linspace(0.0, c0, SAMPLES, true, true);
    out.push(write_csv(dir, "fig2_u0.csv", &sample(&inner, prec, |x| Ok(u0_eval(x, prec)?.0))?)?);
    out.push(write_csv(dir, "fig2_v0.csv", &sample(&inner, prec, |x| Ok(v0_eval(x, prec)?.0))?)?);

    let mid = linspace(c0, c, SAMPLES, true, true);
    out.push(write_csv(dir, "fig3_v2.csv", &sample(&mid, prec, |x| Ok(v2_eval(x, prec)?.0))?)?);

    // φ on (0, c) with extra points geometrically close to c₀ on both sides.
    let mut xs = linspace(0.0, c, SAMPLES, true, true);
    for k in 1..=30 {
        let h = c0 * 0.5f64.powi(k);
        xs.push(c0 - h);
        xs.push(c0 + h);
    }
    xs.push(c0);
    xs.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    xs.dedup();
    out.push(write_csv(dir, "fig4_phi.csv", &sample(&xs, prec, |x| Ok(phi(x, prec)?.phi))?)?);

    let maps: Vec<_> = inner
        .iter()
        .map(|&x| algebraic_maps(&BigFloat::from_f64(x, prec), prec).map(|m| (x, m)))
        .collect::<Result<_>>()?;
    let col = |f: &dyn Fn(&super::AlgebraicMaps) -> &BigFloat| -> Vec<(f64, f64)> {
        maps.iter().map(|(x, m)| (*x, f(m).to_f64())).collect()
    };
    out.push(write_csv(dir, "fig6_mu.csv", &col(&|m| &m.mu))?);
    out.push(write_csv(dir, "fig6_mu2.csv", &col(&|m| &m.mu2))?);
    out.push(write_csv(dir, "fig7_lambda.csv", &col(&|m| &m.lambda))?);
    out.push(write_csv(dir, "fig7_lambda2.csv", &col(&|m| &m.lambda2))?);
    Ok(out)
}
