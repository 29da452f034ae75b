//! Closed-form thermodynamic quantities under the principal specialization
//! p_a ∝ q^a, and residuals of the Q-system, Y-system, difference equation
//! and equation of state.

use crate::carrier::cartan;
use crate::equilibrium::{schur, DensityVector};
use crate::error::{Error, Result};
use crate::partition::Partition;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrincipalParams {
    pub q: f64,
    pub kappa: usize,
}

impl PrincipalParams {
    pub fn new(q: f64, kappa: usize) -> Result<Self> {
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::InvalidParameter(format!("q = {q} must lie in (0, 1)")));
        }
        if kappa == 0 {
            return Err(Error::InvalidParameter("kappa must be at least 1".into()));
        }
        Ok(PrincipalParams { q, kappa })
    }

    fn qp(&self, e: i64) -> f64 {
        self.q.powi(e as i32)
    }

    /// 1 - q^e.
    fn one_minus(&self, e: i64) -> f64 {
        -(self.q.ln() * e as f64).exp_m1()
    }

    /// p_a = q^a (1 - q) / (1 - q^{κ+1}).
    pub fn density(&self, a: usize) -> f64 {
        self.qp(a as i64) * self.one_minus(1) / self.one_minus(self.kappa as i64 + 1)
    }

    pub fn densities(&self) -> DensityVector {
        DensityVector::principal(self.q, self.kappa).expect("0 < q < 1")
    }

    /// z_a = q^{-a(κ+1-a)/2}, a = 0..=κ+1.
    pub fn z(&self, a: usize) -> f64 {
        let k = self.kappa as f64;
        let a = a as f64;
        self.q.powf(-a * (k + 1.0 - a) / 2.0)
    }

    /// w_a = z_a / z_{a-1}, a = 1..=κ+1.
    pub fn w(&self) -> Vec<f64> {
        (1..=self.kappa + 1).map(|a| self.z(a) / self.z(a - 1)).collect()
    }

    /// u = p_0 p_1 ... p_κ.
    pub fn u(&self) -> f64 {
        (0..=self.kappa).map(|a| self.density(a)).product()
    }

    /// Chemical potential β_a with e^{β_a} = p_{a-1} / p_a.
    pub fn beta(&self, a: usize) -> f64 {
        (self.density(a - 1) / self.density(a)).ln()
    }

    pub fn q_char(&self, i: i64, a: usize) -> f64 {
        q_char(i, a, &self.w())
    }

    /// y_i^(a) = q^{-i}(1-q^i)(1-q^{i+κ+1}) / ((1-q^a)(1-q^{κ+1-a})).
    pub fn y(&self, i: usize, a: usize) -> f64 {
        let (i, a, k) = (i as i64, a as i64, self.kappa as i64);
        self.qp(-i) * self.one_minus(i) * self.one_minus(i + k + 1)
            / (self.one_minus(a) * self.one_minus(k + 1 - a))
    }

    /// y from the characters: Q_{i-1} Q_{i+1} / Π_{b ~ a} Q_i^(b).
    pub fn y_from_q(&self, i: usize, a: usize) -> f64 {
        y_from_q(i, a, &self.w())
    }

    /// Scaled vacancy φ_i^(a), i >= 0.
    pub fn phi(&self, i: usize, a: usize) -> f64 {
        let (i, a, k) = (i as i64, a as i64, self.kappa as i64);
        let num = self.qp(a - 1)
            * self.one_minus(1).powi(2)
            * self.one_minus(i + k + 1)
            * (1.0 + self.qp(i + a));
        let den = self.one_minus(k + 1) * self.one_minus(i + a) * self.one_minus(i + a + 1);
        if a == 1 {
            // (1 - q^i)/(1 - q^{i+a-1}) cancels to 1, which also fixes i = 0.
            num / den
        } else {
            num * self.one_minus(i) / (den * self.one_minus(i + a - 1))
        }
    }

    /// φ_∞^(a) = δ_{a1} - Σ_b C_ab (p_b + ... + p_κ).
    pub fn phi_infinity(&self, a: usize) -> f64 {
        let tail = |b: usize| (b..=self.kappa).map(|c| self.density(c)).sum::<f64>();
        let own = if a == 1 { 1.0 } else { 0.0 };
        own - (1..=self.kappa).map(|b| cartan(a, b) as f64 * tail(b)).sum::<f64>()
    }

    /// Scaled column multiplicity ξ_i^(a).
    pub fn xi(&self, i: usize, a: usize) -> f64 {
        let (i, a, k) = (i as i64, a as i64, self.kappa as i64);
        self.qp(i + a - 1)
            * self.one_minus(1).powi(2)
            * self.one_minus(a)
            * self.one_minus(k + 1 - a)
            * (1.0 + self.qp(i + a))
            / (self.one_minus(k + 1)
                * self.one_minus(i + a - 1)
                * self.one_minus(i + a)
                * self.one_minus(i + a + 1))
    }

    /// Scaled row length η_i^(a).
    pub fn eta(&self, i: usize, a: usize) -> f64 {
        let (i, a, k) = (i as i64, a as i64, self.kappa as i64);
        self.qp(i + a - 1) * self.one_minus(1) * self.one_minus(a) * self.one_minus(k + 1 - a)
            / (self.one_minus(k + 1) * self.one_minus(i + a - 1) * self.one_minus(i + a))
    }

    /// ε_i^(a) = Σ_b (C^{-1})_ab (δ_{b1} - φ_i^(b)).
    pub fn epsilon(&self, i: usize, a: usize) -> f64 {
        (1..=self.kappa)
            .map(|b| {
                let own = if b == 1 { 1.0 } else { 0.0 };
                cartan_inverse(a, b, self.kappa) * (own - self.phi(i, b))
            })
            .sum()
    }

    /// φ_{i-1} - 2φ_i + φ_{i+1} - Σ_b C_ab φ_i^(b) / y_i^(b), i >= 1.
    pub fn difference_residual(&self, i: usize, a: usize) -> f64 {
        let lhs = self.phi(i - 1, a) - 2.0 * self.phi(i, a) + self.phi(i + 1, a);
        let rhs: f64 = (1..=self.kappa)
            .map(|b| cartan(a, b) as f64 * self.phi(i, b) / self.y(i, b))
            .sum();
        lhs - rhs
    }

    /// -(1/log q) log(q^{a-1}(1-q)(1-q^a)(1-q^{κ+1-a}) n / (1-q^{κ+1})).
    pub fn first_column_estimate(&self, n: f64, a: usize) -> f64 {
        let (a, k) = (a as i64, self.kappa as i64);
        let inner = self.qp(a - 1) * self.one_minus(1) * self.one_minus(a) * self.one_minus(k + 1 - a) * n
            / self.one_minus(k + 1);
        -inner.ln() / self.q.ln()
    }

    /// One CSV row per (a, i): q, κ, a, i, y, φ, ξ, η.
    pub fn table_csv(&self, i_max: usize) -> String {
        use crate::fmt::sig12;
        let mut s = String::from("q,kappa,a,i,y,phi,xi,eta\n");
        for a in 1..=self.kappa {
            for i in 1..=i_max {
                s.push_str(&format!(
                    "{},{},{},{},{},{},{},{}\n",
                    sig12(self.q),
                    self.kappa,
                    a,
                    i,
                    sig12(self.y(i, a)),
                    sig12(self.phi(i, a)),
                    sig12(self.xi(i, a)),
                    sig12(self.eta(i, a))
                ));
            }
        }
        s
    }
}

/// (C^{-1})_ab = min(a,b) - ab/(κ+1).
pub fn cartan_inverse(a: usize, b: usize, kappa: usize) -> f64 {
    a.min(b) as f64 - (a * b) as f64 / (kappa + 1) as f64
}

/// Q_i^(a) = s_{(i^a)}(w); Q_0 = 1 and Q_{-1} = 0.
pub fn q_char(i: i64, a: usize, w: &[f64]) -> f64 {
    match i {
        i if i < 0 => 0.0,
        0 => 1.0,
        i => schur(&Partition::rectangle(i as usize, a), w),
    }
}

/// w_a = z_a / z_{a-1} from z_1..z_κ (z_0 = z_{κ+1} = 1).
pub fn w_from_z(z: &[f64]) -> Vec<f64> {
    let kappa = z.len();
    let zz = |a: usize| if a == 0 || a == kappa + 1 { 1.0 } else { z[a - 1] };
    (1..=kappa + 1).map(|a| zz(a) / zz(a - 1)).collect()
}

fn neighbours(a: usize, kappa: usize) -> impl Iterator<Item = usize> {
    (1..=kappa).filter(move |&b| cartan(a, b) == -1)
}

pub fn y_from_q(i: usize, a: usize, w: &[f64]) -> f64 {
    let kappa = w.len() - 1;
    let i = i as i64;
    let den: f64 = neighbours(a, kappa).map(|b| q_char(i, b, w)).product();
    q_char(i - 1, a, w) * q_char(i + 1, a, w) / den
}

/// (Q_i)^2 - Q_{i-1} Q_{i+1} - Π_{b ~ a} Q_i^(b), relative to (Q_i)^2.
pub fn q_system_residual(i: usize, a: usize, w: &[f64]) -> f64 {
    let kappa = w.len() - 1;
    let i = i as i64;
    let qi = q_char(i, a, w);
    let prod: f64 = neighbours(a, kappa).map(|b| q_char(i, b, w)).product();
    (qi * qi - q_char(i - 1, a, w) * q_char(i + 1, a, w) - prod) / (qi * qi)
}

/// (1+y_i)^2 / ((1+y_{i-1})(1+y_{i+1})) - Π_b (1 + 1/y_i^(b))^{C_ab}, with
/// y_0 = 0.
pub fn y_system_residual(i: usize, a: usize, y: &dyn Fn(usize, usize) -> f64, kappa: usize) -> f64 {
    let yy = |i: usize, a: usize| if i == 0 { 0.0 } else { y(i, a) };
    let lhs = (1.0 + yy(i, a)).powi(2) / ((1.0 + yy(i - 1, a)) * (1.0 + yy(i + 1, a)));
    let rhs: f64 = (1..=kappa)
        .map(|b| (1.0 + 1.0 / yy(i, b)).powi(cartan(a, b) as i32))
        .product();
    lhs - rhs
}

/// z_a = u^{-a/(κ+1)} p_0 ... p_{a-1}, a = 1..=κ.
pub fn z_from_density(p: &DensityVector) -> Vec<f64> {
    let kappa = p.kappa();
    let ln_u: f64 = p.as_slice().iter().map(|v| v.ln()).sum();
    (1..=kappa)
        .map(|a| {
            let ln_prefix: f64 = p.as_slice()[..a].iter().map(|v| v.ln()).sum();
            (ln_prefix - a as f64 / (kappa + 1) as f64 * ln_u).exp()
        })
        .collect()
}

fn log_q11(z: &[f64]) -> f64 {
    w_from_z(z).iter().sum::<f64>().ln()
}

/// z_a ∂/∂z_a log(Σ_b z_{b+1}/z_b), analytically: (w_a - w_{a+1}) / Σ w.
pub fn eos_lhs_analytic(z: &[f64], a: usize) -> f64 {
    let w = w_from_z(z);
    (w[a - 1] - w[a]) / w.iter().sum::<f64>()
}

/// The same derivative by a central difference with relative step h.
pub fn eos_lhs_numeric(z: &[f64], a: usize, h: f64) -> f64 {
    let step = h * z[a - 1];
    let mut zp = z.to_vec();
    let mut zm = z.to_vec();
    zp[a - 1] += step;
    zm[a - 1] -= step;
    z[a - 1] * (log_q11(&zp) - log_q11(&zm)) / (2.0 * step)
}

/// Residuals of the equation of state, one per a.
pub fn equation_of_state_residual(p: &DensityVector) -> Vec<f64> {
    let kappa = p.kappa();
    let z = z_from_density(p);
    let tail = |b: usize| p.as_slice()[b..].iter().sum::<f64>();
    (1..=kappa)
        .map(|a| {
            let own = if a == 1 { 1.0 } else { 0.0 };
            let rhs = own - (1..=kappa).map(|b| cartan(a, b) as f64 * tail(b)).sum::<f64>();
            eos_lhs_analytic(&z, a) - rhs
        })
        .collect()
}

/// Uniform limit a(κ+1-a) / ((κ+1)(i+a-1)(i+a)).
pub fn eta_uniform_limit(i: usize, a: usize, kappa: usize) -> f64 {
    (a * (kappa + 1 - a)) as f64 / ((kappa + 1) * (i + a - 1) * (i + a)) as f64
}
