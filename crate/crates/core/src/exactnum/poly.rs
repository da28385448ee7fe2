//! Dense univariate polynomials over an exact field.

use std::fmt;

use super::Field;

/// Coefficients in increasing degree, trailing zeros trimmed.
#[derive(Clone, PartialEq, Debug)]
pub struct Poly<T> {
    c: Vec<T>,
}

impl<T: Field> Poly<T> {
    pub fn new(mut c: Vec<T>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Poly { c }
    }

    pub fn from_i64s(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| T::from_i64(x)).collect())
    }

    pub fn zero() -> Self {
        Poly { c: Vec::new() }
    }

    pub fn constant(v: T) -> Self {
        Self::new(vec![v])
    }

    /// The polynomial x.
    pub fn x() -> Self {
        Self::new(vec![T::zero(), T::one()])
    }

    /// x + s.
    pub fn x_plus(s: T) -> Self {
        Self::new(vec![s, T::one()])
    }

    pub fn coeffs(&self) -> &[T] {
        &self.c
    }

    /// Coefficient of x^k (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> T {
        self.c.get(k).cloned().unwrap_or_else(T::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        Self::new((0..n).map(|k| self.coeff(k).add_ref(&o.coeff(k))).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        Self::new((0..n).map(|k| self.coeff(k).sub_ref(&o.coeff(k))).collect())
    }

    pub fn scale(&self, s: &T) -> Self {
        Self::new(self.c.iter().map(|x| x.mul_ref(s)).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut out = vec![T::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            for (j, b) in o.c.iter().enumerate() {
                out[i + j] = out[i + j].add_ref(&a.mul_ref(b));
            }
        }
        Self::new(out)
    }

    pub fn eval(&self, x: &T) -> T {
        self.c
            .iter()
            .rev()
            .fold(T::zero(), |acc, a| acc.mul_ref(x).add_ref(a))
    }

    /// p(x + s), by repeated synthetic division.
    pub fn shift(&self, s: &T) -> Self {
        let mut c = self.c.clone();
        let n = c.len();
        for i in 0..n {
            for j in (i..n - 1).rev() {
                let t = c[j + 1].mul_ref(s);
                c[j] = c[j].add_ref(&t);
            }
        }
        Self::new(c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, a)| a.mul_ref(&T::from_i64(k as i64)))
                .collect(),
        )
    }
}

impl<T: Field + fmt::Display> fmt::Display for Poly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "({a})")?,
                1 => write!(f, "({a})·m")?,
                _ => write!(f, "({a})·m^{k}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, Rational};

    type P = Poly<Rational>;

    #[test]
    fn taylor_shift_matches_evaluation() {
        let p = P::from_i64s(&[5, 27, 51, 34]);
        let q = p.shift(&int(45));
        for m in 0..6 {
            assert_eq!(q.eval(&int(m)), p.eval(&int(m + 45)));
        }
    }

    #[test]
    fn arithmetic() {
        let x1 = P::x_plus(int(1));
        let sq = x1.mul(&x1);
        assert_eq!(sq, P::from_i64s(&[1, 2, 1]));
        assert_eq!(sq.sub(&sq), P::zero());
        assert_eq!(sq.degree(), Some(2));
        assert_eq!(P::zero().degree(), None);
        assert_eq!(sq.derivative(), P::from_i64s(&[2, 2]));
        assert_eq!(sq.to_string(), "(1) + (2)·m + (1)·m^2");
    }
}
