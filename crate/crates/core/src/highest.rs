//! Highest states, Weyl-chamber lattice paths and the ballot count.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use rand::Rng;
use statrs::function::gamma::ln_gamma;

use crate::bbs::Configuration;
use crate::carrier::{energy_matrix, vacancies_unchecked, young_diagrams, YoungTuple};
use crate::equilibrium::DensityVector;
use crate::error::{Error, Result};
use crate::mc::{trial_rng, LetterSampler};
use crate::tableau::Letter;

/// Largest C(n+κ, κ) accepted by the exact highest-state probability.
pub const COMPOSITION_GUARD: f64 = 1e7;

/// Default number of letters drawn before rejection sampling gives up.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// A lattice point m = (m_1, ..., m_r).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ChamberPoint(pub Vec<u64>);

impl ChamberPoint {
    /// Inside the Weyl chamber: m_1 >= m_2 >= ... >= m_r.
    pub fn in_chamber(&self) -> bool {
        self.0.windows(2).all(|w| w[0] >= w[1])
    }
}

/// True iff every prefix has at least as many i's as (i+1)'s, counting
/// empty boxes as color 0.
pub fn is_highest(x: &Configuration) -> bool {
    is_highest_word(x.cells(), x.kappa())
}

pub fn is_highest_word(cells: &[Letter], kappa: usize) -> bool {
    let mut counts = vec![0u64; kappa + 1];
    for &v in cells {
        let v = v as usize;
        counts[v] += 1;
        if v > 0 && counts[v] > counts[v - 1] {
            return false;
        }
    }
    true
}

/// Number of lattice paths from 0 to m with unit steps that stay in the
/// chamber:
/// G(m) = (Σm)! Π_{i<j}(m_i - m_j + j - i) / Π_k (m_k + r - k)!.
/// Zero outside the chamber.
pub fn ballot_count(m: &ChamberPoint) -> BigUint {
    if !m.in_chamber() {
        return BigUint::default();
    }
    let r = m.0.len();
    let total: u64 = m.0.iter().sum();
    let mut num = factorial(total);
    for i in 0..r {
        for j in i + 1..r {
            num *= BigUint::from(m.0[i] - m.0[j] + (j - i) as u64);
        }
    }
    let mut den = BigUint::one();
    for (k, &mk) in m.0.iter().enumerate() {
        den *= factorial(mk + (r - 1 - k) as u64);
    }
    num / den
}

fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * BigUint::from(k))
}

/// Brute-force path count by depth-first search over step sequences.
pub fn ballot_count_brute(m: &ChamberPoint) -> u64 {
    fn dfs(pos: &mut Vec<u64>, target: &[u64]) -> u64 {
        if pos.as_slice() == target {
            return 1;
        }
        let mut count = 0;
        for i in 0..pos.len() {
            if pos[i] < target[i] && (i == 0 || pos[i] < pos[i - 1]) {
                pos[i] += 1;
                count += dfs(pos, target);
                pos[i] -= 1;
            }
        }
        count
    }
    if !m.in_chamber() {
        return 0;
    }
    dfs(&mut vec![0; m.0.len()], &m.0)
}

/// Chamber points of total n in dimension r (partitions of n with at most
/// r parts, padded with zeros).
pub fn chamber_points(n: u64, r: usize) -> Vec<ChamberPoint> {
    fn rec(left: u64, max: u64, slots: usize, cur: &mut Vec<u64>, out: &mut Vec<ChamberPoint>) {
        if slots == 0 {
            if left == 0 {
                out.push(ChamberPoint(cur.clone()));
            }
            return;
        }
        let lo = left.div_ceil(slots as u64);
        for v in (lo..=max.min(left)).rev() {
            cur.push(v);
            rec(left - v, v, slots - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, r, &mut Vec::new(), &mut out);
    out
}

fn check_guard(n: u64, kappa: usize) -> Result<()> {
    let log_binom = ln_gamma((n + kappa as u64 + 1) as f64)
        - ln_gamma((n + 1) as f64)
        - ln_gamma((kappa + 1) as f64);
    if log_binom > COMPOSITION_GUARD.ln() {
        return Err(Error::InvalidParameter(format!(
            "n = {n} with kappa = {kappa} exceeds the exact-enumeration guard; use Monte Carlo"
        )));
    }
    Ok(())
}

/// P(X^{n,p} is highest) = Σ_{m in chamber, |m| = n} G(m) Π_k p_{k-1}^{m_k}.
pub fn prob_highest_exact(n: u64, p: &DensityVector) -> Result<f64> {
    let kappa = p.kappa();
    check_guard(n, kappa)?;
    let r = kappa + 1;
    let lp: Vec<f64> = p.as_slice().iter().map(|v| v.ln()).collect();
    let mut sum = 0.0;
    for m in chamber_points(n, r) {
        // log G(m) through log-gamma; exact integers would overflow f64.
        let mut lg = ln_gamma(n as f64 + 1.0);
        for i in 0..r {
            for j in i + 1..r {
                lg += ((m.0[i] - m.0[j]) as f64 + (j - i) as f64).ln();
            }
        }
        for (k, &mk) in m.0.iter().enumerate() {
            lg -= ln_gamma((mk + (r - 1 - k) as u64) as f64 + 1.0);
            lg += mk as f64 * lp[k];
        }
        sum += lg.exp();
    }
    Ok(sum)
}

/// The same probability by propagating the killed walk through the chamber.
pub fn prob_highest_dp(n: u64, p: &DensityVector) -> f64 {
    let r = p.kappa() + 1;
    let mut layer: HashMap<Vec<u64>, f64> = HashMap::from([(vec![0; r], 1.0)]);
    for _ in 0..n {
        let mut next = HashMap::with_capacity(layer.len() * 2);
        for (m, w) in &layer {
            for i in 0..r {
                if i == 0 || m[i] < m[i - 1] {
                    let mut m2 = m.clone();
                    m2[i] += 1;
                    *next.entry(m2).or_insert(0.0) += w * p.get(i);
                }
            }
        }
        layer = next;
    }
    layer.values().sum()
}

/// Exact ballot count as f64 (for reporting).
pub fn ballot_count_f64(m: &ChamberPoint) -> f64 {
    ballot_count(m).to_f64().unwrap_or(f64::INFINITY)
}

/// Half the number of tied pairs p_i = p_j: the polynomial decay exponent of
/// P(highest).
pub fn decay_exponent(p: &DensityVector) -> Result<f64> {
    if !p.is_weakly_decreasing() {
        return Err(Error::InvalidDensity("densities must be weakly decreasing".into()));
    }
    let v = p.as_slice();
    let mut ties = 0;
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            if (v[i] - v[j]).abs() <= 1e-12 * v[i] {
                ties += 1;
            }
        }
    }
    Ok(ties as f64 / 2.0)
}

/// Draw counts for rejection sampling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RejectionStats {
    /// Candidate configurations started.
    pub attempts: u64,
    /// Letters drawn in total (rejected candidates stop early).
    pub letters: u64,
}

impl RejectionStats {
    /// One accepted sample out of `attempts`.
    pub fn acceptance_rate(&self) -> f64 {
        1.0 / self.attempts as f64
    }
}

/// X^{n,p} conditioned on being highest, by rejection. A candidate is
/// abandoned as soon as its prefix leaves the chamber.
pub fn sample_highest_with<R: Rng>(
    n: usize,
    sampler: &LetterSampler,
    rng: &mut R,
    budget: u64,
) -> Result<(Configuration, RejectionStats)> {
    let kappa = sampler.kappa();
    let mut stats = RejectionStats::default();
    let mut cells = Vec::with_capacity(n);
    let mut counts = vec![0u64; kappa + 1];
    'attempt: loop {
        stats.attempts += 1;
        cells.clear();
        counts.iter_mut().for_each(|c| *c = 0);
        for _ in 0..n {
            if stats.letters >= budget {
                return Err(Error::BudgetExhausted { budget, accepted: 0 });
            }
            stats.letters += 1;
            let v = sampler.sample(rng);
            let vi = v as usize;
            counts[vi] += 1;
            if vi > 0 && counts[vi] > counts[vi - 1] {
                continue 'attempt;
            }
            cells.push(v);
        }
        return Ok((Configuration::from_raw(kappa, cells), stats));
    }
}

/// Seeded version of [`sample_highest_with`] on stream 0.
pub fn sample_highest(n: usize, p: &DensityVector, seed: u64, budget: u64) -> Result<(Configuration, RejectionStats)> {
    if !p.is_weakly_decreasing() {
        return Err(Error::InvalidDensity("conditioning needs weakly decreasing densities".into()));
    }
    let sampler = LetterSampler::new(p);
    sample_highest_with(n, &sampler, &mut trial_rng(seed, 0), budget)
}

/// Π_{a,i} binom(v_i^(a) + m_i^(a), m_i^(a)); zero when some v < 0 with
/// m > 0.
pub fn fermionic_count(y: &YoungTuple, n: usize) -> BigUint {
    let vac = vacancies_unchecked(y, n);
    let mut total = BigUint::one();
    for a in 1..=y.kappa() {
        for (k, &m) in y.column_multiplicities(a).iter().enumerate() {
            if m == 0 {
                continue;
            }
            let v = vac.get(k + 1, a);
            if v < 0 {
                return BigUint::default();
            }
            total *= binomial(v as u64 + m as u64, m as u64);
        }
    }
    total
}

fn binomial(n: u64, k: u64) -> BigUint {
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// Highest states of length n grouped by Young tuple, by enumerating all
/// (κ+1)^n words.
pub fn highest_states_by_shape(n: usize, kappa: usize) -> Result<HashMap<Vec<Vec<usize>>, u64>> {
    let total = (kappa as f64 + 1.0).powi(n as i32);
    if total > 1e7 {
        return Err(Error::InvalidParameter(format!("{total} words is too many to enumerate")));
    }
    let mut out = HashMap::new();
    let mut word = vec![0 as Letter; n];
    loop {
        if is_highest_word(&word, kappa) {
            let x = Configuration::new(kappa, word.clone())?;
            let y = young_diagrams(&energy_matrix(&x))?;
            let key = y.diagrams.iter().map(|d| d.parts().to_vec()).collect();
            *out.entry(key).or_insert(0) += 1;
        }
        let mut k = 0;
        loop {
            if k == n {
                return Ok(out);
            }
            if (word[k] as usize) < kappa {
                word[k] += 1;
                break;
            }
            word[k] = 0;
            k += 1;
        }
    }
}
