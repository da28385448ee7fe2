//! The real quadratic field ℚ(√2).
//!
//! Elements are `a + b√2` with big-rational parts. Signs are decided exactly
//! by comparing a² with 2b², so no floating point is ever consulted.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_traits::{One, Signed, Zero};

use super::{int, BigFloat, Field, Rational};

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct QSqrt2 {
    pub a: Rational,
    pub b: Rational,
}

impl QSqrt2 {
    pub fn new(a: Rational, b: Rational) -> Self {
        QSqrt2 { a, b }
    }

    pub fn from_ints(a: i64, b: i64) -> Self {
        QSqrt2::new(int(a), int(b))
    }

    pub fn rational(a: Rational) -> Self {
        QSqrt2::new(a, Rational::zero())
    }

    /// √2 itself.
    pub fn sqrt2() -> Self {
        QSqrt2::from_ints(0, 1)
    }

    pub fn conj(&self) -> Self {
        QSqrt2::new(self.a.clone(), -&self.b)
    }

    /// Field norm a² − 2b².
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - int(2) * &self.b * &self.b
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Exact sign of a + b√2.
    pub fn sign(&self) -> i32 {
        let sa = rsign(&self.a);
        let sb = rsign(&self.b);
        if sa == 0 {
            return sb;
        }
        if sb == 0 || sa == sb {
            return sa;
        }
        // Opposite signs: the larger of a² and 2b² wins.
        let a2 = &self.a * &self.a;
        let b2 = int(2) * &self.b * &self.b;
        match a2.cmp(&b2) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => 0,
        }
    }

    pub fn is_positive(&self) -> bool {
        self.sign() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.sign() < 0
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    pub fn inverse(&self) -> Option<Self> {
        let n = self.norm();
        if n.is_zero() {
            return None;
        }
        Some(QSqrt2::new(&self.a / &n, -&self.b / &n))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = QSqrt2::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn scale(&self, r: &Rational) -> Self {
        QSqrt2::new(&self.a * r, &self.b * r)
    }

    /// Rounded to `prec` bits with relative error at most 2^(1−prec).
    ///
    /// When a and b have opposite signs the value is computed as
    /// (a² − 2b²)/(a − b√2), whose terms no longer cancel.
    pub fn to_bigfloat(&self, prec: usize) -> BigFloat {
        let wp = prec + 16;
        let sqrt2 = BigFloat::from_i64(2, wp).sqrt();
        let a = BigFloat::from_rational(&self.a, wp);
        let b = BigFloat::from_rational(&self.b, wp);
        let opposite = rsign(&self.a) * rsign(&self.b) < 0;
        let v = if opposite {
            let n = BigFloat::from_rational(&self.norm(), wp);
            n / (a - b * sqrt2)
        } else {
            a + b * sqrt2
        };
        v.with_prec(prec)
    }

    pub fn to_f64(&self) -> f64 {
        self.to_bigfloat(64).to_f64()
    }
}

fn rsign(r: &Rational) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_negative() {
        -1
    } else {
        1
    }
}

impl Zero for QSqrt2 {
    fn zero() -> Self {
        QSqrt2::new(Rational::zero(), Rational::zero())
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

impl One for QSqrt2 {
    fn one() -> Self {
        QSqrt2::new(Rational::one(), Rational::zero())
    }
}

impl PartialOrd for QSqrt2 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QSqrt2 {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).sign().cmp(&0)
    }
}

impl fmt::Display for QSqrt2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => write!(f, "{}", self.a),
            (true, false) => write!(f, "{}√2", self.b),
            (false, false) if self.b.is_negative() => write!(f, "{} - {}√2", self.a, -&self.b),
            _ => write!(f, "{} + {}√2", self.a, self.b),
        }
    }
}

impl fmt::Debug for QSqrt2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QSqrt2({self})")
    }
}

impl Neg for &QSqrt2 {
    type Output = QSqrt2;
    fn neg(self) -> QSqrt2 {
        QSqrt2::new(-&self.a, -&self.b)
    }
}

impl Neg for QSqrt2 {
    type Output = QSqrt2;
    fn neg(self) -> QSqrt2 {
        QSqrt2::new(-self.a, -self.b)
    }
}

impl Add<&QSqrt2> for &QSqrt2 {
    type Output = QSqrt2;
    fn add(self, o: &QSqrt2) -> QSqrt2 {
        QSqrt2::new(&self.a + &o.a, &self.b + &o.b)
    }
}

impl Sub<&QSqrt2> for &QSqrt2 {
    type Output = QSqrt2;
    fn sub(self, o: &QSqrt2) -> QSqrt2 {
        QSqrt2::new(&self.a - &o.a, &self.b - &o.b)
    }
}

impl Mul<&QSqrt2> for &QSqrt2 {
    type Output = QSqrt2;
    fn mul(self, o: &QSqrt2) -> QSqrt2 {
        QSqrt2::new(
            &self.a * &o.a + int(2) * &self.b * &o.b,
            &self.a * &o.b + &self.b * &o.a,
        )
    }
}

impl Div<&QSqrt2> for &QSqrt2 {
    type Output = QSqrt2;
    fn div(self, o: &QSqrt2) -> QSqrt2 {
        self * &o.inverse().expect("division by zero in Q(sqrt 2)")
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<QSqrt2> for QSqrt2 {
            type Output = QSqrt2;
            fn $m(self, o: QSqrt2) -> QSqrt2 { (&self).$m(&o) }
        }
        impl $tr<&QSqrt2> for QSqrt2 {
            type Output = QSqrt2;
            fn $m(self, o: &QSqrt2) -> QSqrt2 { (&self).$m(o) }
        }
        impl $tr<QSqrt2> for &QSqrt2 {
            type Output = QSqrt2;
            fn $m(self, o: QSqrt2) -> QSqrt2 { self.$m(&o) }
        }
        impl $tr<Rational> for QSqrt2 {
            type Output = QSqrt2;
            fn $m(self, o: Rational) -> QSqrt2 { (&self).$m(&QSqrt2::rational(o)) }
        }
        impl $tr<&Rational> for &QSqrt2 {
            type Output = QSqrt2;
            fn $m(self, o: &Rational) -> QSqrt2 { self.$m(&QSqrt2::rational(o.clone())) }
        }
        impl $tr<i64> for &QSqrt2 {
            type Output = QSqrt2;
            fn $m(self, o: i64) -> QSqrt2 { self.$m(&QSqrt2::from_ints(o, 0)) }
        }
        impl $tr<i64> for QSqrt2 {
            type Output = QSqrt2;
            fn $m(self, o: i64) -> QSqrt2 { (&self).$m(&QSqrt2::from_ints(o, 0)) }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul, Div div);

impl AddAssign<&QSqrt2> for QSqrt2 {
    fn add_assign(&mut self, o: &QSqrt2) {
        self.a += &o.a;
        self.b += &o.b;
    }
}

impl SubAssign<&QSqrt2> for QSqrt2 {
    fn sub_assign(&mut self, o: &QSqrt2) {
        self.a -= &o.a;
        self.b -= &o.b;
    }
}

impl MulAssign<&QSqrt2> for QSqrt2 {
    fn mul_assign(&mut self, o: &QSqrt2) {
        *self = &*self * o;
    }
}

impl From<Rational> for QSqrt2 {
    fn from(r: Rational) -> Self {
        QSqrt2::rational(r)
    }
}

impl From<i64> for QSqrt2 {
    fn from(n: i64) -> Self {
        QSqrt2::from_ints(n, 0)
    }
}

impl Field for QSqrt2 {
    fn from_i64(n: i64) -> Self {
        n.into()
    }
    fn from_rational(r: &Rational) -> Self {
        QSqrt2::rational(r.clone())
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
        self.inverse()
    }
    fn nth_root_exact(&self, n: u32) -> Option<Self> {
        if self.b.is_zero() {
            return self.a.nth_root_exact(n).map(QSqrt2::rational);
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    #[test]
    fn signs() {
        assert_eq!(QSqrt2::from_ints(17, 12).sign(), 1);
        assert_eq!(QSqrt2::from_ints(-17, -12).sign(), -1);
        assert_eq!(QSqrt2::from_ints(577, -408).sign(), 1);
        assert_eq!(QSqrt2::from_ints(-577, 408).sign(), -1);
        assert_eq!(QSqrt2::from_ints(-576, 408).sign(), 1);
        assert_eq!(QSqrt2::from_ints(0, 0).sign(), 0);
        assert_eq!(QSqrt2::from_ints(0, -3).sign(), -1);
        assert_eq!(QSqrt2::from_ints(5, 0).sign(), 1);
        let c = QSqrt2::from_ints(17, 12);
        let c0 = QSqrt2::from_ints(17, -12);
        assert_eq!((&c * &c0 - QSqrt2::one()).sign(), 0);
    }

    #[test]
    fn inverse_and_division() {
        let a1 = QSqrt2::from_ints(-576, 408);
        assert_eq!(a1.norm(), int(-1152));
        assert_eq!(&a1 * &a1.inverse().unwrap(), QSqrt2::one());
        let x = QSqrt2::new(rat(85, 2), int(30));
        let y = QSqrt2::from_ints(577, 408);
        assert_eq!(&(&x / &y) * &y, x);
        assert!(QSqrt2::zero().inverse().is_none());
    }

    #[test]
    fn float_conversion_avoids_cancellation() {
        // 577 − 408√2 ≈ 8.66e-4 cancels catastrophically if summed directly.
        let x = QSqrt2::from_ints(577, -408);
        let f = x.to_bigfloat(128);
        let reference = x.conj().inverse().unwrap().to_bigfloat(256);
        let rel = ((f.with_prec(256) - &reference) / &reference).abs();
        assert!(rel <= BigFloat::epsilon(128));
    }

    #[test]
    fn display() {
        assert_eq!(QSqrt2::from_ints(17, -12).to_string(), "17 - 12√2");
        assert_eq!(QSqrt2::new(rat(85, 2), int(30)).to_string(), "85/2 + 30√2");
        assert_eq!(QSqrt2::from_ints(0, 2).to_string(), "2√2");
    }

    #[test]
    fn ordering() {
        let c = QSqrt2::from_ints(17, 12);
        let c0 = QSqrt2::from_ints(17, -12);
        assert!(c0 < c);
        assert!(QSqrt2::from_ints(33, 0) < c);
        assert!(QSqrt2::from_ints(34, 0) > c);
    }
}
