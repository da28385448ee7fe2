//! The algebraic constants of the construction, all in ℚ(√2).

use super::{int, rat, QSqrt2};

/// Right endpoint of the support, c = 17 + 12√2 ≈ 33.9706.
pub fn c() -> QSqrt2 {
    QSqrt2::from_ints(17, 12)
}

/// Interior singular point c₀ = 17 − 12√2 = 1/c ≈ 0.0294.
pub fn c0() -> QSqrt2 {
    QSqrt2::from_ints(17, -12)
}

/// Heun singular parameter for the two right-branch factors.
pub fn a1() -> QSqrt2 {
    QSqrt2::from_ints(-576, 408)
}

/// Heun singular parameter for the Apéry generating function factor.
pub fn a2() -> QSqrt2 {
    QSqrt2::from_ints(577, 408)
}

pub fn q1() -> QSqrt2 {
    QSqrt2::new(rat(-1317, 4), int(234))
}

pub fn q2() -> QSqrt2 {
    QSqrt2::from_ints(-42, 30)
}

pub fn q4() -> QSqrt2 {
    QSqrt2::new(rat(85, 2), int(30))
}

/// z₀ = 1/2 − √2/4, the common value of λ and λ₂ at c₀.
pub fn z0() -> QSqrt2 {
    QSqrt2::new(rat(1, 2), rat(-1, 4))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn reciprocal_endpoints() {
        assert_eq!(&c() * &c0(), QSqrt2::one());
    }

    #[test]
    fn heun_parameters_relate_to_c() {
        // 1 − c₀x reaches a₁ exactly at x = c.
        assert_eq!(a1(), QSqrt2::one() - &c0() * &c0());
        assert!(a1().is_positive() && a1() < QSqrt2::one());
        assert!(a2() > c());
    }

    #[test]
    fn z0_matches_its_closed_form() {
        // 1/(2^{3/2}(√2+1)) = 1/(4 + 2√2).
        let denom = &QSqrt2::from_ints(0, 2) * &QSqrt2::from_ints(1, 1);
        assert_eq!(denom.inverse().unwrap(), z0());
    }
}
