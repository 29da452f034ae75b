//! Field abstraction so the Schur and kernel code runs on both `f64` and
//! exact rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, Signed};

pub trait Scalar: Clone + Num + Signed + PartialOrd + std::fmt::Debug + Send + Sync {
    /// Exact arithmetic: cancellation costs nothing.
    const EXACT: bool;

    fn from_u64(n: u64) -> Self;

    /// Lossy conversion used for reporting.
    fn to_f64(&self) -> f64;

    fn powu(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            base = base.clone() * base;
            e >>= 1;
        }
        acc
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;
    fn from_u64(n: u64) -> Self {
        n as f64
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn powu(&self, e: u32) -> Self {
        self.powi(e as i32)
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;
    fn from_u64(n: u64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
    fn to_f64(&self) -> f64 {
        num_traits::ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

/// Rational from a numerator/denominator pair.
pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Determinant by Gaussian elimination with partial pivoting on |entry|.
/// For exact types any nonzero pivot is fine; choosing the largest keeps the
/// float path stable too.
pub fn determinant<T: Scalar>(mut m: Vec<Vec<T>>) -> T {
    let n = m.len();
    if n == 0 {
        return T::one();
    }
    let mut det = T::one();
    for col in 0..n {
        let mut pivot = col;
        for row in col + 1..n {
            if m[row][col].abs() > m[pivot][col].abs() {
                pivot = row;
            }
        }
        if m[pivot][col].is_zero() {
            return T::zero();
        }
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        let p = m[col][col].clone();
        det = det * p.clone();
        for row in col + 1..n {
            if m[row][col].is_zero() {
                continue;
            }
            let factor = m[row][col].clone() / p.clone();
            for k in col..n {
                let sub = factor.clone() * m[col][k].clone();
                m[row][k] = m[row][k].clone() - sub;
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn det_small() {
        let m = vec![vec![2.0, 1.0], vec![1.0, 3.0]];
        assert!((determinant(m) - 5.0).abs() < 1e-15);
        let r = vec![
            vec![ratio(1, 2), ratio(1, 3)],
            vec![ratio(1, 4), ratio(1, 5)],
        ];
        assert_eq!(determinant(r), ratio(1, 10) - ratio(1, 12));
        let singular = vec![vec![1.0, 2.0], vec![2.0, 4.0]];
        assert_eq!(determinant(singular), 0.0);
    }

    #[test]
    fn pow_matches() {
        assert_eq!(Scalar::powu(&ratio(2, 3), 3), ratio(8, 27));
        assert_eq!(Scalar::powu(&2.0f64, 10), 1024.0);
        assert_eq!(Scalar::powu(&ratio(5, 7), 0), BigRational::one());
    }
}
