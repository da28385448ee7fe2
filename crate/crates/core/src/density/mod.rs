//! The moment density φ on (0, c) and the solutions it is built from.
//!
//! φ(x) = −6 v₀(x)/π²                       on (0, c₀),
//! φ(x) = v₂(x)/(2^{5/4}(√2+1)⁴π²)          on [c₀, c).
//!
//! Near 0 φ grows like (6/π²)·(−ln x); near c it vanishes like a constant
//! times √(c − x). Both branches are real closed forms, so no complex
//! arithmetic is needed.

pub mod figures;
pub mod maps;
pub mod right;
pub mod solutions;

use crate::error::{Error, Result};
use crate::exactnum::{consts, BigFloat, Jet};

pub use maps::{algebraic_maps, AlgebraicMaps};
pub use right::{right_branch, RightBranch};
pub use solutions::{u0_coeffs, u0_eval, u0_jet, uinf_eval, uinf_jet, v0_eval, v0_jet, Evaluated};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PhiBranch {
    /// (0, c₀), through v₀.
    Left,
    /// [c₀, c), through v₂.
    Right,
}

#[derive(Clone, Debug)]
pub struct DensityPoint {
    pub x: BigFloat,
    pub phi: BigFloat,
    pub branch: PhiBranch,
    pub error_bound: BigFloat,
}

/// Constants of the endpoint expansions u∞(c+δ) ≈ u∞(c) + B√δ and
/// u∞(−δ) ≈ C(ln δ)², and the two scale factors of φ.
#[derive(Clone, Debug)]
pub struct EndpointConstants {
    pub b_right: BigFloat,
    pub c_left: BigFloat,
    pub scale_right: BigFloat,
    pub scale_left: BigFloat,
}

impl EndpointConstants {
    pub fn new(prec: usize) -> Self {
        let wp = prec + 32;
        let pi = BigFloat::pi(wp);
        let two = BigFloat::from_i64(2, wp);
        let s = (two.sqrt() + 1).powi(4) * two.powf(&(BigFloat::from_i64(5, wp) / 4));
        let b_right = -(&s * &pi).recip();
        let pi2 = &pi * &pi;
        EndpointConstants {
            scale_right: (&s * &pi2).recip().with_prec(prec),
            scale_left: (BigFloat::from_i64(-6, wp) / &pi2).with_prec(prec),
            c_left: (BigFloat::from_i64(-3, wp) / &pi2).with_prec(prec),
            b_right: b_right.with_prec(prec),
        }
    }
}

/// v₂ at c₀ ≤ x ≤ c with its error bound.
pub fn v2_eval(x: &BigFloat, prec: usize) -> Result<(BigFloat, BigFloat)> {
    let e = right_branch(prec)?.v2_jet(&Jet::constant(x.clone()))?;
    Ok((e.value().clone(), e.error_bound()))
}

pub fn v2_jet(x: &Jet, prec: usize) -> Result<Evaluated> {
    right_branch(prec)?.v2_jet(x)
}

/// φ(x) for 0 < x < c; x = c₀ belongs to the right branch.
pub fn phi(x: &BigFloat, prec: usize) -> Result<DensityPoint> {
    let c0 = consts::c0().to_bigfloat(x.prec().max(prec));
    let c = consts::c().to_bigfloat(x.prec().max(prec));
    if !x.is_positive() || *x >= c {
        return Err(Error::Domain(format!("phi needs 0 < x < c, got {}", x.to_f64())));
    }
    let k = EndpointConstants::new(prec);
    let (branch, e, scale) = if *x < c0 {
        (PhiBranch::Left, v0_jet(&Jet::constant(x.clone()), prec)?, k.scale_left)
    } else {
        (PhiBranch::Right, v2_jet(&Jet::constant(x.clone()), prec)?, k.scale_right)
    };
    let v = e.value() * &scale;
    Ok(DensityPoint {
        x: x.clone(),
        error_bound: v.abs().with_prec(64) * BigFloat::from_f64(e.rel_err, 64),
        phi: v,
        branch,
    })
}

/// One-sided limits of φ at c₀.
#[derive(Clone, Debug)]
pub struct KinkReport {
    /// φ(c₀⁻) = 4√3 K²/(π(1 + c₀)), from v₀(c₀) with λ = λ₂ = z₀.
    pub left: BigFloat,
    /// φ(c₀⁺) from the Frobenius constant term of v₂.
    pub right: BigFloat,
    pub gap: BigFloat,
    /// Coefficient of √(x − c₀) in φ just right of c₀.
    pub sqrt_coefficient: BigFloat,
}

pub fn kink_at_c0(prec: usize) -> Result<KinkReport> {
    let c0 = consts::c0().to_bigfloat(prec + 32);
    let left = v0_eval(&c0, prec)?.0 * EndpointConstants::new(prec).scale_left;
    let rb = right_branch(prec)?;
    let k = EndpointConstants::new(prec);
    let right = &rb.frobenius_coefficients()[0] * &k.scale_right;
    let sqrt_coefficient = &rb.frobenius_coefficients()[1] * &k.scale_right;
    Ok(KinkReport {
        gap: &left - &right,
        left,
        right: right.with_prec(prec),
        sqrt_coefficient: sqrt_coefficient.with_prec(prec),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(v: f64) -> BigFloat {
        BigFloat::from_f64(v, 256)
    }

    #[test]
    fn endpoint_constants_consistent() {
        let k = EndpointConstants::new(256);
        let pi = BigFloat::pi(256);
        assert!((&k.scale_right + &k.b_right / &pi).abs().to_f64() < 1e-70);
        assert!((&k.scale_left - k.c_left.mul_pow2(1)).abs().to_f64() < 1e-70);
        assert!((k.scale_right.to_f64() - 1.0 / 797.5).abs() < 1e-5);
    }

    #[test]
    fn phi_positive_on_both_branches() {
        for x in [consts::c0().to_f64() / 2.0, 1.0, 10.0, 30.0] {
            let p = phi(&f(x), 256).unwrap();
            assert!(p.phi.is_positive(), "phi({x}) = {}", p.phi);
        }
        assert_eq!(phi(&f(0.01), 256).unwrap().branch, PhiBranch::Left);
        let c0 = consts::c0().to_bigfloat(256);
        assert_eq!(phi(&c0, 256).unwrap().branch, PhiBranch::Right);
        assert!(phi(&f(0.0), 256).is_err());
    }
}
