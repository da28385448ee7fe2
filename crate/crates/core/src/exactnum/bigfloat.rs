//! Arbitrary-precision binary floating point.
//!
//! A thin value type over `astro_float::BigFloat` that remembers its working
//! precision, so arithmetic reads like ordinary numeric code. Every result is
//! rounded to nearest-even at the larger precision of its operands.
//! Transcendental functions share a per-thread constants cache (π, ln 2, ...).

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use astro_float::{BigFloat as Af, Consts, Radix, RoundingMode, Sign, Word};
use num_bigint::{BigInt, Sign as BigSign};

use super::Rational;

const RM: RoundingMode = RoundingMode::ToEven;

/// Default working precision in bits.
pub const DEFAULT_PREC: usize = 256;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("astro-float constants cache"));
}

fn with_consts<R>(f: impl FnOnce(&mut Consts) -> R) -> R {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}

/// A real number carried at a fixed binary precision.
#[derive(Clone)]
pub struct BigFloat {
    v: Af,
    prec: usize,
}

impl BigFloat {
    fn wrap(v: Af, prec: usize) -> Self {
        debug_assert!(!v.is_nan(), "BigFloat operation produced NaN");
        BigFloat { v, prec }
    }

    pub fn zero(prec: usize) -> Self {
        Self::from_i64(0, prec)
    }

    pub fn one(prec: usize) -> Self {
        Self::from_i64(1, prec)
    }

    pub fn from_i64(i: i64, prec: usize) -> Self {
        Self::wrap(Af::from_i64(i, prec), prec)
    }

    pub fn from_u64(u: u64, prec: usize) -> Self {
        Self::wrap(Af::from_u64(u, prec), prec)
    }

    pub fn from_f64(f: f64, prec: usize) -> Self {
        assert!(f.is_finite(), "non-finite f64 {f}");
        Self::wrap(Af::from_f64(f, prec), prec)
    }

    /// Converts an integer, rounding once to `prec` bits.
    pub fn from_bigint(i: &BigInt, prec: usize) -> Self {
        let (sign, digits) = i.to_u64_digits();
        if digits.is_empty() {
            return Self::zero(prec);
        }
        let words: Vec<Word> = digits.iter().map(|&d| d as Word).collect();
        let s = if sign == BigSign::Minus { Sign::Neg } else { Sign::Pos };
        let e = (words.len() * 64) as i32;
        let mut v = Af::from_words(&words, s, e);
        v.set_precision(prec.max(64), RM)
            .expect("precision within astro-float limits");
        Self::wrap(v, prec)
    }

    /// Converts a rational with a single rounding (the quotient).
    pub fn from_rational(r: &Rational, prec: usize) -> Self {
        let num = Self::exact_int(r.numer());
        let den = Self::exact_int(r.denom());
        Self::wrap(num.v.div(&den.v, prec, RM), prec)
    }

    fn exact_int(i: &BigInt) -> Self {
        let bits = (i.bits() as usize).max(64);
        Self::from_bigint(i, bits.div_ceil(64) * 64)
    }

    /// Parses a decimal literal such as `"0.3"` or `"1e-8"`, rounding once.
    pub fn parse(s: &str, prec: usize) -> Option<Self> {
        let v = with_consts(|cc| Af::parse(s, Radix::Dec, prec, RM, cc));
        if v.is_nan() || v.is_inf() {
            None
        } else {
            Some(Self::wrap(v, prec))
        }
    }

    pub fn pi(prec: usize) -> Self {
        Self::wrap(with_consts(|cc| cc.pi(prec, RM)), prec)
    }

    pub fn ln2(prec: usize) -> Self {
        Self::wrap(with_consts(|cc| cc.ln_2(prec, RM)), prec)
    }

    pub fn prec(&self) -> usize {
        self.prec
    }

    /// The value rounded to a new working precision.
    pub fn with_prec(&self, prec: usize) -> Self {
        let mut v = self.v.clone();
        v.set_precision(prec, RM).expect("precision within astro-float limits");
        Self::wrap(v, prec)
    }

    /// 2^(1-prec): the relative rounding granularity at this precision.
    pub fn epsilon(prec: usize) -> Self {
        Self::one(prec.max(64)).mul_pow2(1 - prec as i64)
    }

    /// self * 2^k, exact.
    pub fn mul_pow2(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut v = self.v.clone();
        let e = v.exponent().expect("finite value") as i64 + k;
        v.set_exponent(e as i32);
        Self::wrap(v, self.prec)
    }

    pub fn is_zero(&self) -> bool {
        self.v.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        !self.is_zero() && self.v.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        !self.is_zero() && self.v.is_positive()
    }

    pub fn signum(&self) -> i32 {
        if self.is_zero() {
            0
        } else if self.v.is_negative() {
            -1
        } else {
            1
        }
    }

    pub fn abs(&self) -> Self {
        Self::wrap(self.v.abs(), self.prec)
    }

    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "reciprocal of zero");
        Self::wrap(self.v.reciprocal(self.prec, RM), self.prec)
    }

    pub fn square(&self) -> Self {
        self * self
    }

    pub fn sqrt(&self) -> Self {
        assert!(!self.is_negative(), "sqrt of negative value {}", self.to_f64());
        if self.is_zero() {
            return self.clone();
        }
        Self::wrap(self.v.sqrt(self.prec, RM), self.prec)
    }

    pub fn cbrt(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        Self::wrap(self.v.cbrt(self.prec, RM), self.prec)
    }

    pub fn ln(&self) -> Self {
        assert!(self.is_positive(), "ln of non-positive value {}", self.to_f64());
        Self::wrap(with_consts(|cc| self.v.ln(self.prec, RM, cc)), self.prec)
    }

    pub fn exp(&self) -> Self {
        Self::wrap(with_consts(|cc| self.v.exp(self.prec, RM, cc)), self.prec)
    }

    /// self^y for self > 0.
    pub fn powf(&self, y: &BigFloat) -> Self {
        assert!(self.is_positive(), "powf of non-positive base");
        let p = self.prec.max(y.prec);
        Self::wrap(with_consts(|cc| self.v.pow(&y.v, p, RM, cc)), p)
    }

    pub fn powi(&self, n: u32) -> Self {
        Self::wrap(self.v.powi(n as usize, self.prec, RM), self.prec)
    }

    pub fn sin(&self) -> Self {
        Self::wrap(with_consts(|cc| self.v.sin(self.prec, RM, cc)), self.prec)
    }

    pub fn cos(&self) -> Self {
        Self::wrap(with_consts(|cc| self.v.cos(self.prec, RM, cc)), self.prec)
    }

    pub fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    pub fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    /// Binary exponent e with 2^(e-1) <= |self| < 2^e; `None` for zero.
    pub fn exponent(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            self.v.exponent().map(|e| e as i64)
        }
    }

    /// Nearest double (saturating to ±inf, flushing tiny values to 0).
    pub fn to_f64(&self) -> f64 {
        let Some((words, _, sign, e, _)) = self.v.as_raw_parts() else {
            return f64::NAN;
        };
        let Some(&top) = words.last() else {
            return 0.0;
        };
        if top == 0 {
            return 0.0;
        }
        let mut m = top as f64;
        if words.len() > 1 {
            m += words[words.len() - 2] as f64 / 18446744073709551616.0;
        }
        let e = e.clamp(-1200, 1200) - 64;
        // Two steps so neither scale factor under- or overflows on its own.
        let mag = m * 2f64.powi(e / 2) * 2f64.powi(e - e / 2);
        if sign == Sign::Neg {
            -mag
        } else {
            mag
        }
    }

    /// Decimal scientific notation with `digits` significant digits (truncated).
    pub fn to_string_digits(&self, digits: usize) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let s = with_consts(|cc| self.v.format(Radix::Dec, RM, cc)).unwrap_or_else(|_| "NaN".into());
        let (mant, exp) = s.split_once('e').unwrap_or((&s, "+0"));
        let (sign, mant) = mant.strip_prefix('-').map_or(("", mant), |m| ("-", m));
        let all: String = mant.chars().filter(|c| c.is_ascii_digit()).collect();
        let mut kept: String = all.chars().take(digits.max(1)).collect();
        while kept.len() < digits {
            kept.push('0');
        }
        let exp: i64 = exp.trim_start_matches('+').parse().unwrap_or(0);
        if kept.len() == 1 {
            format!("{sign}{kept}e{exp}")
        } else {
            format!("{sign}{}.{}e{exp}", &kept[..1], &kept[1..])
        }
    }
}

impl fmt::Debug for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BigFloat({}, {} bits)", self.to_string_digits(24), self.prec)
    }
}

impl fmt::Display for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or((self.prec as f64 * std::f64::consts::LOG10_2) as usize);
        f.write_str(&self.to_string_digits(digits))
    }
}

impl PartialEq for BigFloat {
    fn eq(&self, other: &Self) -> bool {
        self.v.cmp(&other.v) == Some(0)
    }
}

impl PartialOrd for BigFloat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.v.cmp(&other.v).map(|c| c.cmp(&0))
    }
}

impl Neg for BigFloat {
    type Output = BigFloat;
    fn neg(self) -> BigFloat {
        BigFloat::wrap(self.v.neg(), self.prec)
    }
}

impl Neg for &BigFloat {
    type Output = BigFloat;
    fn neg(self) -> BigFloat {
        BigFloat::wrap(self.v.clone().neg(), self.prec)
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $assign_tr:ident, $assign:ident, $op:ident) => {
        impl $tr<&BigFloat> for &BigFloat {
            type Output = BigFloat;
            fn $method(self, rhs: &BigFloat) -> BigFloat {
                let p = self.prec.max(rhs.prec);
                BigFloat::wrap(self.v.$op(&rhs.v, p, RM), p)
            }
        }
        impl $tr<BigFloat> for BigFloat {
            type Output = BigFloat;
            fn $method(self, rhs: BigFloat) -> BigFloat {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&BigFloat> for BigFloat {
            type Output = BigFloat;
            fn $method(self, rhs: &BigFloat) -> BigFloat {
                (&self).$method(rhs)
            }
        }
        impl $tr<BigFloat> for &BigFloat {
            type Output = BigFloat;
            fn $method(self, rhs: BigFloat) -> BigFloat {
                self.$method(&rhs)
            }
        }
        impl $tr<i64> for &BigFloat {
            type Output = BigFloat;
            fn $method(self, rhs: i64) -> BigFloat {
                self.$method(&BigFloat::from_i64(rhs, self.prec))
            }
        }
        impl $tr<i64> for BigFloat {
            type Output = BigFloat;
            fn $method(self, rhs: i64) -> BigFloat {
                (&self).$method(rhs)
            }
        }
        impl $assign_tr<&BigFloat> for BigFloat {
            fn $assign(&mut self, rhs: &BigFloat) {
                *self = (&*self).$method(rhs);
            }
        }
        impl $assign_tr<BigFloat> for BigFloat {
            fn $assign(&mut self, rhs: BigFloat) {
                *self = (&*self).$method(&rhs);
            }
        }
    };
}

binop!(Add, add, AddAssign, add_assign, add);
binop!(Sub, sub, SubAssign, sub_assign, sub);
binop!(Mul, mul, MulAssign, mul_assign, mul);
binop!(Div, div, DivAssign, div_assign, div);

impl std::iter::Sum for BigFloat {
    fn sum<I: Iterator<Item = BigFloat>>(mut iter: I) -> BigFloat {
        let first = iter.next().expect("sum of empty BigFloat iterator");
        iter.fold(first, |acc, x| acc + x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn f64_round_trip() {
        for x in [1.0, -2.5, 33.9705, 1e-300, 6.02e23, -0.0294] {
            assert_eq!(BigFloat::from_f64(x, 128).to_f64(), x);
        }
    }

    #[test]
    fn big_integer_conversion_is_exact_when_it_fits() {
        let big: BigInt = BigInt::from(3).pow(100u32);
        let b = BigFloat::from_bigint(&big, 256);
        let back = &b / BigFloat::from_bigint(&BigInt::from(3).pow(99u32), 256);
        assert_eq!(back, BigFloat::from_i64(3, 256));
        let neg = BigFloat::from_bigint(&BigInt::from(-7), 64);
        assert_eq!(neg.to_f64(), -7.0);
    }

    #[test]
    fn rational_conversion() {
        let r = Rational::new(BigInt::from(1), BigInt::from(3));
        let x = BigFloat::from_rational(&r, 200);
        let err = (x * 3 - 1).abs();
        assert!(err <= BigFloat::epsilon(200));
    }

    #[test]
    fn transcendental_sanity() {
        let p = 256;
        let two = BigFloat::from_i64(2, p);
        let s = two.sqrt();
        assert!((&s * &s - &two).abs() < BigFloat::epsilon(p).mul_pow2(2));
        let e = BigFloat::one(p).exp();
        assert!((e.ln() - 1).abs() < BigFloat::epsilon(p).mul_pow2(3));
        let pi = BigFloat::pi(p);
        assert!((pi.to_f64() - std::f64::consts::PI).abs() < 1e-15);
        assert!(pi.sin().abs() < BigFloat::epsilon(p).mul_pow2(4));
        assert_eq!(BigFloat::from_i64(27, p).cbrt(), BigFloat::from_i64(3, p));
    }

    #[test]
    fn formatting_and_parsing() {
        let x = BigFloat::parse("1.0354935", 128).unwrap();
        assert_eq!(x.to_string_digits(8), "1.0354935e0");
        let y = BigFloat::parse("-1e-8", 128).unwrap();
        assert!((y.to_f64() + 1e-8).abs() < 1e-22);
        assert_eq!(BigFloat::from_i64(-250, 64).to_string_digits(3), "-2.50e2");
    }

    #[test]
    fn exponent_and_scaling() {
        let x = BigFloat::from_i64(5, 64);
        assert_eq!(x.exponent(), Some(3));
        assert_eq!(x.mul_pow2(-2).to_f64(), 1.25);
        assert_eq!(BigFloat::epsilon(10).to_f64(), 2f64.powi(-9));
    }
}
