//! The Apéry numbers A_n = Σ_k C(n,k)² C(n+k,k)².
//!
//! Two independent generators (the binomial sum and the three-term
//! recurrence) plus exact Hankel determinants, whose positivity is the
//! classical necessary condition for a Stieltjes moment sequence.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    Binomial,
    Recurrence,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AperySequence {
    pub values: Vec<BigInt>,
    pub provenance: Provenance,
}

/// A_n straight from the double-binomial sum.
pub fn apery_binomial(n: u64) -> BigInt {
    // C(n,k) and C(n+k,k) are advanced incrementally in k.
    let mut sum = BigInt::zero();
    let mut c1 = BigInt::one();
    let mut c2 = BigInt::one();
    for k in 0..=n {
        if k > 0 {
            c1 = c1 * (n - k + 1) / k;
            c2 = c2 * (n + k) / k;
        }
        let t = &c1 * &c2;
        sum += &t * &t;
    }
    sum
}

/// A_0..=A_{n_max} from (n+1)³A_{n+1} = (34n³+51n²+27n+5)A_n − n³A_{n−1}.
///
/// Every division by (n+1)³ is checked to be exact.
pub fn apery_recurrence(n_max: u64) -> Result<AperySequence> {
    let mut values = vec![BigInt::one(), BigInt::from(5)];
    for n in 1..n_max {
        let nb = BigInt::from(n);
        let n3 = &nb * &nb * &nb;
        let poly = BigInt::from(34) * &n3 + BigInt::from(51) * &nb * &nb + BigInt::from(27) * &nb + 5;
        let rhs: BigInt = poly * &values[n as usize] - n3 * &values[n as usize - 1];
        let d = BigInt::from(n + 1).pow(3);
        let (q, r) = rhs.div_rem(&d);
        if !r.is_zero() {
            return Err(Error::InexactDivision(n as usize + 1));
        }
        values.push(q);
    }
    values.truncate(n_max as usize + 1);
    Ok(AperySequence {
        values,
        provenance: Provenance::Recurrence,
    })
}

/// A_0..=A_{n_max} by the binomial sum.
pub fn apery_sequence_binomial(n_max: u64) -> AperySequence {
    AperySequence {
        values: (0..=n_max).map(apery_binomial).collect(),
        provenance: Provenance::Binomial,
    }
}

/// Determinant of an integer matrix by fraction-free Bareiss elimination.
pub fn bareiss_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = 1;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if sign < 0 {
        -d
    } else {
        d
    }
}

#[derive(Clone, Debug)]
pub struct HankelReport {
    pub m: usize,
    /// det [A_{i+j}]_{0≤i,j≤m}
    pub det: BigInt,
    /// det [A_{i+j+1}]_{0≤i,j≤m}
    pub det_shifted: BigInt,
}

impl HankelReport {
    pub fn signs(&self) -> (i32, i32) {
        (sign(&self.det), sign(&self.det_shifted))
    }
}

fn sign(x: &BigInt) -> i32 {
    if x.is_zero() {
        0
    } else if x.is_negative() {
        -1
    } else {
        1
    }
}

/// Hankel and shifted-Hankel determinants for every m ≤ `n_max`.
pub fn hankel_positivity(n_max: usize) -> Result<Vec<HankelReport>> {
    let a = apery_recurrence(2 * n_max as u64 + 2)?.values;
    Ok((0..=n_max)
        .map(|m| {
            let h = |s: usize| -> Vec<Vec<BigInt>> {
                (0..=m)
                    .map(|i| (0..=m).map(|j| a[i + j + s].clone()).collect())
                    .collect()
            };
            HankelReport {
                m,
                det: bareiss_det(h(0)),
                det_shifted: bareiss_det(h(1)),
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_values() {
        let expect = [1, 5, 73, 1445, 33001];
        for (n, &v) in expect.iter().enumerate() {
            assert_eq!(apery_binomial(n as u64), BigInt::from(v));
        }
        assert_eq!(apery_recurrence(1).unwrap().values, vec![BigInt::from(1), BigInt::from(5)]);
        let seq = apery_recurrence(4).unwrap();
        assert_eq!(seq.values, expect.map(BigInt::from).to_vec());
        assert_eq!(seq.provenance, Provenance::Recurrence);
    }

    #[test]
    fn second_term_from_recurrence_at_one() {
        // 8·A_2 = 117·5 − 1
        assert_eq!(BigInt::from(8) * apery_binomial(2), BigInt::from(117 * 5 - 1));
    }

    #[test]
    fn generators_agree() {
        let rec = apery_recurrence(60).unwrap();
        assert_eq!(rec.values, apery_sequence_binomial(60).values);
    }

    #[test]
    fn bareiss_small_cases() {
        let m = |rows: &[&[i64]]| -> Vec<Vec<BigInt>> {
            rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
        };
        assert_eq!(bareiss_det(m(&[&[2, 3], &[1, 4]])), BigInt::from(5));
        assert_eq!(bareiss_det(m(&[&[0, 1], &[1, 0]])), BigInt::from(-1));
        assert_eq!(bareiss_det(m(&[&[1, 2], &[2, 4]])), BigInt::zero());
        assert_eq!(
            bareiss_det(m(&[&[0, 2, 1], &[3, 0, 1], &[1, 1, 1]])),
            BigInt::from(-1)
        );
    }

    #[test]
    fn small_hankel_values() {
        let r = hankel_positivity(1).unwrap();
        assert_eq!(r[0].det, BigInt::from(1));
        assert_eq!(r[1].det, BigInt::from(48));
        assert_eq!(r[0].det_shifted, BigInt::from(5));
        assert_eq!(r[1].det_shifted, BigInt::from(5 * 1445 - 73 * 73));
    }
}
