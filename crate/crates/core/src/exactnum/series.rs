//! Dense truncated power series over an exact field.
//!
//! A series of order `N` stores the coefficients of x⁰..x^{N−1}; everything
//! from x^N on is unknown. Binary operations truncate to the smaller order.

use crate::error::{Error, Result};

use super::{Field, Rational};

#[derive(Clone, PartialEq, Debug)]
pub struct PowerSeries<T> {
    coeffs: Vec<T>,
}

impl<T: Field> PowerSeries<T> {
    /// Takes the first `order` entries of `coeffs`, zero-padding if short.
    pub fn new(mut coeffs: Vec<T>, order: usize) -> Self {
        coeffs.truncate(order);
        coeffs.resize(order, T::zero());
        PowerSeries { coeffs }
    }

    pub fn from_fn(order: usize, f: impl FnMut(usize) -> T) -> Self {
        PowerSeries {
            coeffs: (0..order).map(f).collect(),
        }
    }

    pub fn zero(order: usize) -> Self {
        Self::new(Vec::new(), order)
    }

    pub fn one(order: usize) -> Self {
        Self::constant(T::one(), order)
    }

    pub fn constant(c: T, order: usize) -> Self {
        Self::new(vec![c], order)
    }

    /// The series x.
    pub fn x(order: usize) -> Self {
        Self::new(vec![T::zero(), T::one()], order)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &T {
        &self.coeffs[k]
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::new(self.coeffs.clone(), order.min(self.order()))
    }

    pub fn add(&self, g: &Self) -> Self {
        let n = self.order().min(g.order());
        Self::from_fn(n, |k| self.coeffs[k].add_ref(&g.coeffs[k]))
    }

    pub fn sub(&self, g: &Self) -> Self {
        let n = self.order().min(g.order());
        Self::from_fn(n, |k| self.coeffs[k].sub_ref(&g.coeffs[k]))
    }

    pub fn neg(&self) -> Self {
        Self::from_fn(self.order(), |k| self.coeffs[k].neg_ref())
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::from_fn(self.order(), |k| self.coeffs[k].mul_ref(c))
    }

    pub fn mul(&self, g: &Self) -> Self {
        let n = self.order().min(g.order());
        let mut out = vec![T::zero(); n];
        for (i, fi) in self.coeffs.iter().enumerate().take(n) {
            if fi.is_zero() {
                continue;
            }
            for (j, gj) in g.coeffs.iter().enumerate().take(n - i) {
                if !gj.is_zero() {
                    out[i + j] = out[i + j].add_ref(&fi.mul_ref(gj));
                }
            }
        }
        PowerSeries { coeffs: out }
    }

    /// Multiplicative inverse; needs an invertible constant term.
    pub fn inverse(&self) -> Result<Self> {
        let n = self.order();
        let inv0 = match self.coeffs.first() {
            None => return Ok(self.clone()),
            Some(c) => c
                .inv()
                .ok_or_else(|| Error::NotInvertible("series constant term is zero".into()))?,
        };
        let mut out: Vec<T> = Vec::with_capacity(n);
        out.push(inv0.clone());
        for k in 1..n {
            let mut s = T::zero();
            for j in 1..=k {
                if !self.coeffs[j].is_zero() {
                    s = s.add_ref(&self.coeffs[j].mul_ref(&out[k - j]));
                }
            }
            out.push(s.mul_ref(&inv0).neg_ref());
        }
        Ok(PowerSeries { coeffs: out })
    }

    pub fn div(&self, g: &Self) -> Result<Self> {
        Ok(self.mul(&g.inverse()?))
    }

    /// f(g(x)) by Horner's scheme; needs g(0) = 0.
    pub fn compose(&self, g: &Self) -> Result<Self> {
        let n = self.order().min(g.order());
        if n > 0 && !g.coeffs[0].is_zero() {
            return Err(Error::NotInvertible(
                "inner series of a composition must vanish at 0".into(),
            ));
        }
        let g = g.truncate(n);
        let mut acc = PowerSeries::zero(n);
        for c in self.coeffs[..n].iter().rev() {
            acc = acc.mul(&g);
            acc.coeffs[0] = acc.coeffs[0].add_ref(c);
        }
        Ok(acc)
    }

    /// The unique n-th root whose constant term is the exact n-th root of f(0).
    ///
    /// With f = Σ f_k x^k, g = f^α (α = 1/n) obeys
    /// f₀ g_k = (1/k) Σ_{j=1}^{k} (α j − (k − j)) f_j g_{k−j}.
    pub fn nth_root(&self, n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("zeroth root".into()));
        }
        let order = self.order();
        let Some(f0) = self.coeffs.first() else {
            return Ok(self.clone());
        };
        let g0 = f0.nth_root_exact(n).ok_or_else(|| {
            Error::NotInvertible(format!("constant term {f0:?} has no exact {n}-th root"))
        })?;
        let f0_inv = f0
            .inv()
            .ok_or_else(|| Error::NotInvertible("root of a series with zero constant term".into()))?;
        let alpha = Rational::new(1.into(), (n as i64).into());
        let mut g = Vec::with_capacity(order);
        g.push(g0);
        for k in 1..order {
            let mut s = T::zero();
            for j in 1..=k {
                if self.coeffs[j].is_zero() {
                    continue;
                }
                let w = &alpha * Rational::from_integer((j as i64).into())
                    - Rational::from_integer(((k - j) as i64).into());
                let term = self.coeffs[j].mul_ref(&g[k - j]).mul_ref(&T::from_rational(&w));
                s = s.add_ref(&term);
            }
            let kinv = T::from_rational(&Rational::new(1.into(), (k as i64).into()));
            g.push(s.mul_ref(&kinv).mul_ref(&f0_inv));
        }
        Ok(PowerSeries { coeffs: g })
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.order());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// d/dx; the order drops by one.
    pub fn derivative(&self) -> Self {
        let n = self.order().saturating_sub(1);
        Self::from_fn(n, |k| self.coeffs[k + 1].mul_ref(&T::from_i64(k as i64 + 1)))
    }

    /// x·d/dx, keeping the order.
    pub fn theta(&self) -> Self {
        Self::from_fn(self.order(), |k| self.coeffs[k].mul_ref(&T::from_i64(k as i64)))
    }

    /// f(c·x).
    pub fn scale_arg(&self, c: &T) -> Self {
        let mut p = T::one();
        Self::from_fn(self.order(), |k| {
            let v = self.coeffs[k].mul_ref(&p);
            p = p.mul_ref(c);
            v
        })
    }

    /// f(x^m), keeping the order.
    pub fn substitute_power(&self, m: usize) -> Self {
        assert!(m >= 1);
        let n = self.order();
        let mut out = vec![T::zero(); n];
        for (k, c) in self.coeffs.iter().enumerate() {
            if k * m < n {
                out[k * m] = c.clone();
            }
        }
        PowerSeries { coeffs: out }
    }

    /// x^s·f, keeping the order (high coefficients fall off).
    pub fn shift_up(&self, s: usize) -> Self {
        let n = self.order();
        Self::from_fn(n, |k| {
            if k < s {
                T::zero()
            } else {
                self.coeffs[k - s].clone()
            }
        })
    }

    /// f/x^s when the first `s` coefficients vanish; the order drops by `s`.
    pub fn shift_down(&self, s: usize) -> Result<Self> {
        if self.coeffs.iter().take(s).any(|c| !c.is_zero()) {
            return Err(Error::NotInvertible(format!("series not divisible by x^{s}")));
        }
        Ok(PowerSeries {
            coeffs: self.coeffs.iter().skip(s).cloned().collect(),
        })
    }

    /// Index of the first differing coefficient within the common order.
    pub fn first_mismatch(&self, g: &Self) -> Option<usize> {
        let n = self.order().min(g.order());
        (0..n).find(|&k| self.coeffs[k] != g.coeffs[k])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, rat, QSqrt2};

    type S = PowerSeries<Rational>;

    fn geometric(n: usize) -> S {
        S::from_fn(n, |_| int(1))
    }

    #[test]
    fn geometric_inverse() {
        let one_minus_x = S::new(vec![int(1), int(-1)], 12);
        assert_eq!(one_minus_x.mul(&geometric(12)), S::one(12));
        assert_eq!(one_minus_x.inverse().unwrap(), geometric(12));
    }

    #[test]
    fn cube_root_binomial() {
        let f = S::new(vec![int(1), int(15)], 6);
        let g = f.nth_root(3).unwrap();
        assert_eq!(g.coeff(0), &int(1));
        assert_eq!(g.coeff(1), &int(5));
        // (1+x)^{1/3} = 1 + x/3 − x²/9 + 5x³/81 − ...
        let h = S::new(vec![int(1), int(1)], 5).nth_root(3).unwrap();
        assert_eq!(h.coeffs(), &[int(1), rat(1, 3), rat(-1, 9), rat(5, 81), rat(-10, 243)]);
        assert_eq!(g.pow(3), f);
    }

    #[test]
    fn root_needs_exact_constant() {
        let f = S::new(vec![int(2), int(1)], 4);
        assert!(f.nth_root(2).is_err());
        let f = S::new(vec![int(4), int(1)], 4);
        assert_eq!(f.nth_root(2).unwrap().pow(2), f);
    }

    #[test]
    fn compose_with_exp_like_series() {
        // 1/(1−y) with y = x/(1−x)... equals (1−x)/(1−2x).
        let y = S::x(10).mul(&geometric(10));
        let lhs = geometric(10).compose(&y).unwrap();
        let rhs = S::new(vec![int(1), int(-1)], 10)
            .div(&S::new(vec![int(1), int(-2)], 10))
            .unwrap();
        assert_eq!(lhs, rhs);
        assert!(geometric(4).compose(&geometric(4)).is_err());
    }

    #[test]
    fn zero_constant_is_not_invertible() {
        assert!(S::x(5).inverse().is_err());
    }

    #[test]
    fn qsqrt2_series() {
        let c = QSqrt2::from_ints(17, 12);
        let f = PowerSeries::<QSqrt2>::new(vec![QSqrt2::from_ints(1, 0), QSqrt2::from_ints(0, 1)], 6);
        let g = f.scale_arg(&c);
        assert_eq!(g.coeff(1), &(&c * &QSqrt2::sqrt2()));
        assert_eq!(g.div(&g).unwrap(), PowerSeries::one(6));
    }

    #[test]
    fn shifts_and_theta() {
        let f = S::new(vec![int(0), int(0), int(3), int(4)], 4);
        assert_eq!(f.shift_down(2).unwrap().coeffs(), &[int(3), int(4)]);
        assert!(f.shift_down(3).is_err());
        assert_eq!(f.theta().coeffs(), &[int(0), int(0), int(6), int(12)]);
        assert_eq!(f.derivative().coeffs(), &[int(0), int(6), int(12)]);
        assert_eq!(geometric(7).substitute_power(3).coeffs()[3], int(1));
        assert_eq!(geometric(7).substitute_power(3).coeffs()[4], int(0));
    }
}
