//! Schur-function evaluation and the equilibrium constants built from it.

use std::collections::HashMap;

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::scalar::{determinant, Scalar};
use crate::tableau::{enumerate_rectangular, Tableau};

pub use crate::partition::Partition as Shape;

/// Letter distribution p = (p_0, ..., p_κ).
#[derive(Debug, Clone, PartialEq)]
pub struct DensityVector {
    p: Vec<f64>,
}

impl DensityVector {
    /// Entries must be positive and sum to 1 within 1e-12.
    pub fn new(p: Vec<f64>) -> Result<Self> {
        if p.len() < 2 {
            return Err(Error::InvalidDensity("need at least two letters".into()));
        }
        if let Some(v) = p.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
            return Err(Error::InvalidDensity(format!("entry {v} is not positive")));
        }
        let s: f64 = p.iter().sum();
        if (s - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidDensity(format!("entries sum to {s}")));
        }
        Ok(DensityVector { p })
    }

    /// Rescale positive weights to a probability vector.
    pub fn from_weights(w: &[f64]) -> Result<Self> {
        let s: f64 = w.iter().sum();
        if !(s.is_finite() && s > 0.0) {
            return Err(Error::InvalidDensity("weights must have positive sum".into()));
        }
        Self::new(w.iter().map(|v| v / s).collect())
    }

    pub fn uniform(kappa: usize) -> Self {
        DensityVector { p: vec![1.0 / (kappa + 1) as f64; kappa + 1] }
    }

    /// p_i ∝ q^i.
    pub fn principal(q: f64, kappa: usize) -> Result<Self> {
        if !(q > 0.0 && q.is_finite()) {
            return Err(Error::InvalidDensity(format!("q = {q} must be positive")));
        }
        let w: Vec<f64> = (0..=kappa).map(|i| q.powi(i as i32)).collect();
        Self::from_weights(&w)
    }

    /// κ = 1 with ball density p_1.
    pub fn two_letter(p1: f64) -> Result<Self> {
        Self::new(vec![1.0 - p1, p1])
    }

    pub fn kappa(&self) -> usize {
        self.p.len() - 1
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.p
    }

    pub fn get(&self, i: usize) -> f64 {
        self.p[i]
    }

    pub fn is_strictly_decreasing(&self) -> bool {
        self.p.windows(2).all(|w| w[0] > w[1])
    }

    pub fn is_weakly_decreasing(&self) -> bool {
        self.p.windows(2).all(|w| w[0] >= w[1])
    }

    /// q = p_1 / p_0.
    pub fn q(&self) -> f64 {
        self.p[1] / self.p[0]
    }
}

/// h_0, ..., h_k evaluated at `w`.
pub fn complete_homogeneous<T: Scalar>(w: &[T], k: usize) -> Vec<T> {
    let mut h = vec![T::zero(); k + 1];
    h[0] = T::one();
    for x in w {
        for j in 1..=k {
            let add = x.clone() * h[j - 1].clone();
            h[j] = h[j].clone() + add;
        }
    }
    h
}

/// s_λ(w).
///
/// Exact types use the Jacobi–Trudi determinant. Floats use the
/// subtraction-free branching sum instead: the determinant loses roughly
/// log10(h_k^2 / s_λ) digits to cancellation, which already exceeds 1e-10
/// relative for moderate rectangles.
pub fn schur<T: Scalar>(lambda: &Partition, w: &[T]) -> T {
    if T::EXACT {
        schur_jacobi_trudi(lambda, w)
    } else {
        schur_branching(lambda, w)
    }
}

/// s_λ(w) by the Jacobi–Trudi determinant det(h_{λ_i - i + j}).
pub fn schur_jacobi_trudi<T: Scalar>(lambda: &Partition, w: &[T]) -> T {
    let l = lambda.len();
    if l == 0 {
        return T::one();
    }
    if l > w.len() {
        return T::zero();
    }
    let parts = lambda.parts();
    let h = complete_homogeneous(w, parts[0] + l);
    let m = (0..l)
        .map(|i| {
            (0..l)
                .map(|j| {
                    let idx = parts[i] as isize - i as isize + j as isize;
                    if idx < 0 {
                        T::zero()
                    } else {
                        h[idx as usize].clone()
                    }
                })
                .collect()
        })
        .collect();
    determinant(m)
}

/// s_λ(w) by the branching rule
/// s_λ(x_1..x_n) = Σ_{μ ≺ λ} s_μ(x_1..x_{n-1}) x_n^{|λ|-|μ|},
/// summing over μ interlacing λ. Every term is nonnegative for
/// nonnegative w.
pub fn schur_branching<T: Scalar>(lambda: &Partition, w: &[T]) -> T {
    if lambda.len() > w.len() {
        return T::zero();
    }
    let mut memo = HashMap::new();
    branch(lambda.parts(), w, &mut memo)
}

fn branch<T: Scalar>(lambda: &[usize], w: &[T], memo: &mut HashMap<(usize, Vec<usize>), T>) -> T {
    let n = w.len();
    if lambda.is_empty() {
        return T::one();
    }
    if lambda.len() > n {
        return T::zero();
    }
    if n == 1 {
        return w[0].powu(lambda[0] as u32);
    }
    let key = (n, lambda.to_vec());
    if let Some(v) = memo.get(&key) {
        return v.clone();
    }
    let size: usize = lambda.iter().sum();
    let x = &w[n - 1];
    let row = |j: usize| lambda.get(j).copied().unwrap_or(0);
    // μ_j ranges over [λ_{j+1}, λ_j] for j < n-1 (0-based), μ has n-1 rows.
    let m = lambda.len().min(n - 1);
    let mut mu: Vec<usize> = (0..m).map(|j| row(j + 1)).collect();
    let mut total = T::zero();
    loop {
        let mut trimmed = mu.clone();
        while trimmed.last() == Some(&0) {
            trimmed.pop();
        }
        let deg = size - mu.iter().sum::<usize>();
        total = total + branch(&trimmed, &w[..n - 1], memo) * x.powu(deg as u32);
        // Odometer over the interlacing ranges.
        let mut j = 0;
        loop {
            if j == m {
                memo.insert(key, total.clone());
                return total;
            }
            if mu[j] < row(j) {
                mu[j] += 1;
                break;
            }
            mu[j] = row(j + 1);
            j += 1;
        }
    }
}

/// s_λ(w) as the bialternant det(w_j^{λ_i + N - i}) / det(w_j^{N - i}).
pub fn schur_bialternant<T: Scalar>(lambda: &Partition, w: &[T]) -> Result<T> {
    let n = w.len();
    for i in 0..n {
        for j in i + 1..n {
            if w[i] == w[j] {
                return Err(Error::RepeatedVariables);
            }
        }
    }
    if lambda.len() > n {
        return Ok(T::zero());
    }
    let alt = |shift: &dyn Fn(usize) -> usize| -> T {
        let m = (0..n)
            .map(|i| (0..n).map(|j| w[j].powu((shift(i) + n - 1 - i) as u32)).collect())
            .collect();
        determinant(m)
    };
    let num = alt(&|i| lambda.row(i + 1));
    let den = alt(&|_| 0);
    Ok(num / den)
}

/// Z_c^(a) = s_{(c^a)}(p).
pub fn partition_z<T: Scalar>(c: usize, a: usize, p: &[T]) -> T {
    schur(&Partition::rectangle(c, a), p)
}

/// π(C) = Π p_i^{m_i(C)} / Z over B_c^(a).
pub fn stationary_pi<T: Scalar>(c: usize, a: usize, p: &[T], cap: u128) -> Result<Vec<(Tableau, T)>> {
    let kappa = p.len() - 1;
    let states = enumerate_rectangular(a, c, kappa, cap)?;
    let z = partition_z(c, a, p);
    Ok(states
        .into_iter()
        .map(|t| {
            let w = weight(&t, p);
            (t, w / z.clone())
        })
        .collect())
}

/// Π p_i^{m_i(C)}.
pub fn weight<T: Scalar>(t: &Tableau, p: &[T]) -> T {
    t.letter_counts(p.len() - 1)
        .iter()
        .zip(p)
        .fold(T::one(), |acc, (&m, x)| acc * x.powu(m as u32))
}

/// ε_c^(a) = s_{(c^a,1)} / s_{(c^a)}; ε_0 = 0.
pub fn epsilon<T: Scalar>(c: usize, a: usize, p: &[T]) -> T {
    if c == 0 {
        return T::zero();
    }
    schur(&Partition::rectangle_plus_one(c, a), p) / partition_z(c, a, p)
}

/// ε_c^(a) as the stationary mean of the local energy:
/// Σ_C π(C) Σ_{i > bottom-left(C)} p_i.
pub fn epsilon_by_enumeration<T: Scalar>(c: usize, a: usize, p: &[T], cap: u128) -> Result<T> {
    let pi = stationary_pi(c, a, p, cap)?;
    let tail = |z: usize| p[z + 1..].iter().fold(T::zero(), |s, x| s + x.clone());
    Ok(pi
        .into_iter()
        .fold(T::zero(), |s, (t, w)| s + w * tail(t.bottom_left() as usize)))
}

/// η_i^(a) = s_{((i-1)^{a-1})} s_{(i^{a+1})} / (s_{(i^a)} s_{((i-1)^a)}).
pub fn eta<T: Scalar>(i: usize, a: usize, p: &[T]) -> T {
    assert!(i >= 1 && a >= 1);
    let s = |c: usize, h: usize| schur(&Partition::rectangle(c, h), p);
    s(i - 1, a - 1) * s(i, a + 1) / (s(i, a) * s(i - 1, a))
}

/// η as the difference ε_i - ε_{i-1}.
pub fn eta_by_difference<T: Scalar>(i: usize, a: usize, p: &[T]) -> T {
    epsilon(i, a, p) - epsilon(i - 1, a, p)
}

/// Exact copy of a float density (each float is a dyadic rational).
pub fn to_rational(p: &[f64]) -> Vec<BigRational> {
    p.iter()
        .map(|&v| BigRational::from_float(v).expect("finite"))
        .collect()
}

/// One CSV row per (a, i): κ, a, i, p..., ε_i^(a), η_i^(a).
pub fn table_csv(p: &DensityVector, i_max: usize) -> String {
    use crate::fmt::sig12;
    let kappa = p.kappa();
    let mut s = String::from("kappa,a,i");
    for k in 0..=kappa {
        s.push_str(&format!(",p{k}"));
    }
    s.push_str(",epsilon,eta\n");
    for a in 1..=kappa {
        for i in 1..=i_max {
            s.push_str(&format!("{kappa},{a},{i}"));
            for v in p.as_slice() {
                s.push_str(&format!(",{}", sig12(*v)));
            }
            s.push_str(&format!(
                ",{},{}\n",
                sig12(epsilon(i, a, p.as_slice())),
                sig12(eta(i, a, p.as_slice()))
            ));
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;
    use num_traits::{One, Zero};

    fn part(v: &[usize]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn small_schur_values() {
        let p = [0.2, 0.3, 0.5];
        assert!((schur(&part(&[1]), &p) - 1.0).abs() < 1e-15);
        let w = [ratio(2, 3), ratio(5, 7)];
        assert_eq!(schur(&part(&[1, 1]), &w), ratio(10, 21));
        assert_eq!(schur(&part(&[1, 1, 1]), &w), BigRational::zero());
        assert_eq!(schur(&Partition::empty(), &w), BigRational::one());
        // s_(5) is the sum of all degree-5 monomials.
        let q = [ratio(1, 2), ratio(1, 3), ratio(1, 6)];
        let mut direct = BigRational::zero();
        for a in 0..=5u32 {
            for b in 0..=5 - a {
                let c = 5 - a - b;
                direct += q[0].powu(a) * q[1].powu(b) * q[2].powu(c);
            }
        }
        assert_eq!(schur(&part(&[5]), &q), direct);
    }

    #[test]
    fn bialternant_rejects_repeats() {
        let w = [0.5, 0.5, 0.25];
        assert_eq!(schur_bialternant(&part(&[2, 1]), &w), Err(Error::RepeatedVariables));
        let w = [ratio(1, 2), ratio(1, 3), ratio(1, 7)];
        for lam in [&[2, 1][..], &[3, 3], &[4, 2, 1], &[1]] {
            assert_eq!(schur_bialternant(&part(lam), &w).unwrap(), schur(&part(lam), &w));
        }
    }

    #[test]
    fn one_color_closed_forms() {
        let p1 = 0.3;
        let p = [1.0 - p1, p1];
        let q = p1 / (1.0 - p1);
        for c in 1..8 {
            let z = partition_z(c, 1, &p);
            let closed = (1.0 - p1).powi(c as i32) * (1.0 - q.powi(c as i32 + 1)) / (1.0 - q);
            assert!((z - closed).abs() < 1e-14);
            let eps = p1 * (1.0 - q.powi(c as i32)) / (1.0 - q.powi(c as i32 + 1));
            assert!((epsilon(c, 1, &p) - eps).abs() < 1e-14);
        }
        let half = [ratio(1, 2), ratio(1, 2)];
        for c in 1..8usize {
            assert_eq!(partition_z(c, 1, &half), ratio(c as i64 + 1, 1 << c));
            assert_eq!(epsilon(c, 1, &half), ratio(c as i64, 2 * (c as i64 + 1)));
        }
        for i in 1..8usize {
            assert_eq!(eta(i, 1, &half), ratio(1, 2 * (i * (i + 1)) as i64));
        }
    }

    #[test]
    fn two_color_values() {
        let p = [ratio(1, 2), ratio(1, 3), ratio(1, 6)];
        let e1 = p[0].clone() * p[1].clone() + p[1].clone() * p[2].clone() + p[2].clone() * p[0].clone();
        assert_eq!(epsilon(1, 1, &p), e1);
        let u = [ratio(1, 3), ratio(1, 3), ratio(1, 3)];
        assert_eq!(epsilon(2, 1, &u), ratio(4, 9));
        assert_eq!(eta(2, 1, &u), ratio(1, 9));
        assert_eq!(eta(1, 1, &u), ratio(1, 3));
    }

    #[test]
    fn stationary_examples() {
        let p = [ratio(1, 2), ratio(1, 3), ratio(1, 6)];
        let pi = stationary_pi(1, 1, &p, 1000).unwrap();
        let vals: Vec<_> = pi.iter().map(|(_, w)| w.clone()).collect();
        assert_eq!(vals, p.to_vec());
        let pi5 = stationary_pi(5, 1, &p, 1000).unwrap();
        let total = pi5.iter().fold(BigRational::zero(), |s, (_, w)| s + w);
        assert_eq!(total, BigRational::one());
        let z = partition_z(5, 1, &p);
        for (t, w) in &pi5 {
            let m = t.letter_counts(2);
            let expect = p[0].powu(m[0] as u32) * p[1].powu(m[1] as u32) * p[2].powu(m[2] as u32) / z.clone();
            assert_eq!(*w, expect);
        }
    }

    #[test]
    fn epsilon_forms_agree() {
        let p = [ratio(2, 5), ratio(3, 10), ratio(1, 5), ratio(1, 10)];
        for a in 1..=3 {
            for c in 1..=3 {
                assert_eq!(epsilon(c, a, &p), epsilon_by_enumeration(c, a, &p, 1 << 20).unwrap());
            }
        }
    }

    #[test]
    fn row_duality_for_one_color() {
        for i in 1..10 {
            let a = eta(i, 1, &[0.7, 0.3]);
            let b = eta(i, 1, &[0.3, 0.7]);
            assert!((a - b).abs() < 1e-14 * a);
        }
    }

    #[test]
    fn density_validation() {
        assert!(DensityVector::new(vec![0.5, 0.6]).is_err());
        assert!(DensityVector::new(vec![1.0, 0.0]).is_err());
        let d = DensityVector::principal(0.5, 2).unwrap();
        assert!(d.is_strictly_decreasing());
        assert!((d.q() - 0.5).abs() < 1e-15);
        assert!(DensityVector::uniform(3).is_weakly_decreasing());
    }
}
