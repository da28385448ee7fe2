//! Order-3 truncated Taylor arithmetic over [`BigFloat`].
//!
//! A jet at x₀ holds f(x₀), f'(x₀), f''(x₀)/2, f'''(x₀)/6. Propagating jets
//! through the closed forms gives exact-to-precision derivatives for the
//! third-order ODE residuals, with no finite differencing.

use std::ops::{Add, Div, Mul, Neg, Sub};

use super::BigFloat;

#[derive(Clone, Debug)]
pub struct Jet {
    /// Taylor coefficients c₀..c₃ (derivative k is c_k·k!).
    pub c: [BigFloat; 4],
}

impl Jet {
    pub fn constant(v: BigFloat) -> Self {
        let z = BigFloat::zero(v.prec());
        Jet {
            c: [v, z.clone(), z.clone(), z],
        }
    }

    /// The identity function x at x₀.
    pub fn variable(x0: BigFloat) -> Self {
        let p = x0.prec();
        let z = BigFloat::zero(p);
        Jet {
            c: [x0, BigFloat::one(p), z.clone(), z],
        }
    }

    /// Builds a jet from the value and first three derivatives.
    pub fn from_derivs(d: [BigFloat; 4]) -> Self {
        let [d0, d1, d2, d3] = d;
        Jet {
            c: [d0, d1, d2.mul_pow2(-1), d3 / 6],
        }
    }

    pub fn value(&self) -> &BigFloat {
        &self.c[0]
    }

    pub fn prec(&self) -> usize {
        self.c[0].prec()
    }

    /// k-th derivative, k ≤ 3.
    pub fn deriv(&self, k: usize) -> BigFloat {
        const FACT: [i64; 4] = [1, 1, 2, 6];
        &self.c[k] * FACT[k]
    }

    pub fn derivs(&self) -> [BigFloat; 4] {
        [self.deriv(0), self.deriv(1), self.deriv(2), self.deriv(3)]
    }

    pub fn scale(&self, s: &BigFloat) -> Self {
        Jet {
            c: self.c.clone().map(|x| x * s),
        }
    }

    /// F∘self, given F and its first three derivatives at self(x₀).
    pub fn compose(&self, f: &[BigFloat; 4]) -> Self {
        let [_, g1, g2, g3] = &self.c;
        // δ = g1 h + g2 h² + g3 h³, and its powers truncated at h³.
        let d2_2 = g1 * g1;
        let d2_3 = (g1 * g2).mul_pow2(1);
        let d3_3 = &d2_2 * g1;
        let f2 = f[2].mul_pow2(-1);
        let f3 = &f[3] / 6;
        Jet {
            c: [
                f[0].clone(),
                &f[1] * g1,
                &f[1] * g2 + &f2 * &d2_2,
                &f[1] * g3 + &f2 * &d2_3 + &f3 * &d3_3,
            ],
        }
    }

    pub fn recip(&self) -> Self {
        let v = self.c[0].recip();
        let v2 = &v * &v;
        let v3 = &v2 * &v;
        let v4 = &v3 * &v;
        self.compose(&[v, -v2, v3.mul_pow2(1), -(v4 * 6)])
    }

    pub fn sqrt(&self) -> Self {
        let s = self.c[0].sqrt();
        let inv = s.recip();
        let d1 = inv.mul_pow2(-1);
        let d2 = -(&d1 / &self.c[0]).mul_pow2(-1);
        let d3 = -(&d2 / &self.c[0]) * 3 / 2;
        self.compose(&[s, d1, d2, d3])
    }

    /// self^α for self(x₀) > 0.
    pub fn powf(&self, alpha: &BigFloat) -> Self {
        let g = &self.c[0];
        let v = g.powf(alpha);
        let a1 = alpha - 1;
        let a2 = alpha - 2;
        let d1 = &v * alpha / g;
        let d2 = &d1 * &a1 / g;
        let d3 = &d2 * &a2 / g;
        self.compose(&[v, d1, d2, d3])
    }

    pub fn ln(&self) -> Self {
        let g = &self.c[0];
        let r = g.recip();
        let r2 = &r * &r;
        let r3 = &r2 * &r;
        self.compose(&[g.ln(), r, -r2, r3.mul_pow2(1)])
    }
}

impl Add<&Jet> for &Jet {
    type Output = Jet;
    fn add(self, o: &Jet) -> Jet {
        Jet {
            c: std::array::from_fn(|k| &self.c[k] + &o.c[k]),
        }
    }
}

impl Sub<&Jet> for &Jet {
    type Output = Jet;
    fn sub(self, o: &Jet) -> Jet {
        Jet {
            c: std::array::from_fn(|k| &self.c[k] - &o.c[k]),
        }
    }
}

impl Mul<&Jet> for &Jet {
    type Output = Jet;
    fn mul(self, o: &Jet) -> Jet {
        let a = &self.c;
        let b = &o.c;
        Jet {
            c: [
                &a[0] * &b[0],
                &a[0] * &b[1] + &a[1] * &b[0],
                &a[0] * &b[2] + &a[1] * &b[1] + &a[2] * &b[0],
                &a[0] * &b[3] + &a[1] * &b[2] + &a[2] * &b[1] + &a[3] * &b[0],
            ],
        }
    }
}

impl Div<&Jet> for &Jet {
    type Output = Jet;
    fn div(self, o: &Jet) -> Jet {
        self * &o.recip()
    }
}

impl Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        Jet {
            c: self.c.clone().map(|x| -x),
        }
    }
}

macro_rules! owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<Jet> for Jet {
            type Output = Jet;
            fn $m(self, o: Jet) -> Jet { (&self).$m(&o) }
        }
        impl $tr<&Jet> for Jet {
            type Output = Jet;
            fn $m(self, o: &Jet) -> Jet { (&self).$m(o) }
        }
        impl $tr<Jet> for &Jet {
            type Output = Jet;
            fn $m(self, o: Jet) -> Jet { self.$m(&o) }
        }
    )*};
}
owned!(Add add, Sub sub, Mul mul, Div div);

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &BigFloat, b: f64, tol: f64) -> bool {
        (a.to_f64() - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn polynomial_derivatives() {
        let x = Jet::variable(BigFloat::from_i64(2, 128));
        let p = &(&x * &x) * &x;
        let d = p.derivs();
        assert!(close(&d[0], 8.0, 1e-30));
        assert!(close(&d[1], 12.0, 1e-30));
        assert!(close(&d[2], 12.0, 1e-30));
        assert!(close(&d[3], 6.0, 1e-30));
    }

    #[test]
    fn elementary_functions() {
        let x0 = 0.7f64;
        let x = Jet::variable(BigFloat::from_f64(x0, 128));
        let s = x.sqrt().derivs();
        assert!(close(&s[3], 3.0 / 8.0 * x0.powf(-2.5), 1e-14));
        let l = x.ln().derivs();
        assert!(close(&l[3], 2.0 / x0.powi(3), 1e-14));
        let r = (&Jet::constant(BigFloat::one(128)) / &x).derivs();
        assert!(close(&r[3], -6.0 / x0.powi(4), 1e-14));
        let third = BigFloat::from_i64(1, 128) / 3;
        let c = x.powf(&third).derivs();
        let expect = (1.0 / 3.0) * (-2.0 / 3.0) * (-5.0 / 3.0) * x0.powf(1.0 / 3.0 - 3.0);
        assert!(close(&c[3], expect, 1e-14));
    }

    #[test]
    fn chain_rule() {
        // ln(x²+1) at x = 1: derivatives 1, 0, -1.
        let x = Jet::variable(BigFloat::one(128));
        let g = (&(&x * &x) + &Jet::constant(BigFloat::one(128))).ln();
        let d = g.derivs();
        assert!(close(&d[1], 1.0, 1e-30));
        assert!(d[2].abs().to_f64() < 1e-30);
        assert!(close(&d[3], -1.0, 1e-30));
    }
}
