//! Exact arithmetic foundation.
//!
//! Big rationals come from `num-rational`; everything else here is the
//! project's own: the field ℚ(√2), dense truncated power series over any
//! [`Field`], polynomials used by the positivity certificates, the
//! precision-carrying [`BigFloat`], and order-3 Taylor jets for ODE residuals.

pub mod bigfloat;
pub mod consts;
pub mod jet;
pub mod poly;
pub mod qsqrt2;
pub mod series;

use std::fmt::Debug;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};


pub use bigfloat::{BigFloat, DEFAULT_PREC};
pub use jet::Jet;
pub use poly::Poly;
pub use qsqrt2::QSqrt2;
pub use series::PowerSeries;

/// Arbitrary-precision rational, always stored in lowest terms with a
/// positive denominator.
pub type Rational = num_rational::BigRational;

/// `n / d` as a [`Rational`].
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// The integer `n` as a [`Rational`].
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// The exact coefficient fields used by series and polynomials.
pub trait Field: Clone + PartialEq + Debug + Send + Sync + Zero + One {
    fn from_i64(n: i64) -> Self;
    fn from_rational(r: &Rational) -> Self;
    fn add_ref(&self, o: &Self) -> Self;
    fn sub_ref(&self, o: &Self) -> Self;
    fn mul_ref(&self, o: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    /// Multiplicative inverse, `None` for zero.
    fn inv(&self) -> Option<Self>;
    /// An exact n-th root in the field, if one exists.
    fn nth_root_exact(&self, n: u32) -> Option<Self>;

    fn div_ref(&self, o: &Self) -> Option<Self> {
        o.inv().map(|i| self.mul_ref(&i))
    }
}

impl Field for Rational {
    fn from_i64(n: i64) -> Self {
        int(n)
    }
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn add_ref(&self, o: &Self) -> Self {
        self + o
    }
    fn sub_ref(&self, o: &Self) -> Self {
        self - o
    }
    fn mul_ref(&self, o: &Self) -> Self {
        self * o
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        (!Zero::is_zero(self)).then(|| self.recip())
    }
    fn nth_root_exact(&self, n: u32) -> Option<Self> {
        if n == 0 {
            return None;
        }
        if self.is_negative() && n % 2 == 0 {
            return None;
        }
        let root = |i: &BigInt| -> Option<BigInt> {
            let r = i.nth_root(n);
            (r.pow(n) == *i).then_some(r)
        };
        Some(Rational::new(root(self.numer())?, root(self.denom())?))
    }
}

/// Exact value of `r` rounded to `prec` bits (convenience re-export).
pub fn rational_to_float(r: &Rational, prec: usize) -> BigFloat {
    BigFloat::from_rational(r, prec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_roots() {
        assert_eq!(rat(8, 27).nth_root_exact(3), Some(rat(2, 3)));
        assert_eq!(rat(-8, 27).nth_root_exact(3), Some(rat(-2, 3)));
        assert_eq!(rat(2, 1).nth_root_exact(2), None);
        assert_eq!(rat(-4, 1).nth_root_exact(2), None);
    }

    #[test]
    fn rational_is_reduced() {
        let r = rat(6, -4);
        assert_eq!(r.numer(), &BigInt::from(-3));
        assert_eq!(r.denom(), &BigInt::from(2));
    }
}
