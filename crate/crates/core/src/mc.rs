//! Random configurations and Monte Carlo experiments.
//!
//! Every trial draws from its own ChaCha8 stream: the generator is seeded
//! with the master seed and the stream number is the trial index, so results
//! do not depend on thread count or scheduling.

use std::time::{Duration, Instant};

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bbs::Configuration;
use crate::carrier::{energy_matrix, row_energy_unchecked, young_diagrams};
use crate::equilibrium::{epsilon, eta, stationary_pi, DensityVector};
use crate::error::{Error, Result};
use crate::exec::{kahan_sum, Exec};
use crate::fmt::sig12;
use crate::highest::{sample_highest_with, DEFAULT_BUDGET};
use crate::ldp::{Functional, StateSpace, DEFAULT_STATE_CAP};
use crate::tableau::Letter;

/// Generator for trial `stream` under master seed `seed`.
pub fn trial_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Draws letters 0..=κ with probabilities p.
#[derive(Debug, Clone)]
pub struct LetterSampler {
    dist: WeightedIndex<f64>,
    kappa: usize,
}

impl LetterSampler {
    pub fn new(p: &DensityVector) -> Self {
        let dist = WeightedIndex::new(p.as_slice()).expect("density vector is validated");
        LetterSampler { dist, kappa: p.kappa() }
    }

    pub fn kappa(&self) -> usize {
        self.kappa
    }

    #[inline]
    pub fn sample<R: Rng>(&self, rng: &mut R) -> Letter {
        self.dist.sample(rng) as Letter
    }

    pub fn fill<R: Rng>(&self, rng: &mut R, out: &mut [Letter]) {
        for v in out {
            *v = self.sample(rng);
        }
    }
}

/// X^{n,p}: i.i.d. letters on 1..=n, zero elsewhere.
pub fn sample_config(n: usize, p: &DensityVector, seed: u64) -> Configuration {
    sample_config_with(n, &LetterSampler::new(p), &mut trial_rng(seed, 0))
}

pub fn sample_config_with<R: Rng>(n: usize, sampler: &LetterSampler, rng: &mut R) -> Configuration {
    let mut cells = vec![0; n];
    sampler.fill(rng, &mut cells);
    Configuration::from_raw(sampler.kappa(), cells)
}

/// Mean and standard error of a sample. The error is 0 for one sample.
pub fn mean_and_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = kahan_sum(xs.iter().copied()) / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = kahan_sum(xs.iter().map(|x| (x - mean).powi(2))) / (n - 1.0);
    (mean, (var / n).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Tolerance {
    Absolute(f64),
    /// Multiple of the estimate's standard error.
    StdErrors(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Target {
    pub value: f64,
    /// Where the value comes from, e.g. "schur" or "exact".
    pub source: String,
    pub tolerance: Tolerance,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Estimate {
    pub label: String,
    pub value: f64,
    pub std_err: f64,
    pub samples: u64,
    pub target: Option<Target>,
}

impl Estimate {
    pub fn new(label: impl Into<String>, value: f64, std_err: f64, samples: u64) -> Self {
        Estimate { label: label.into(), value, std_err, samples, target: None }
    }

    pub fn with_target(mut self, value: f64, source: &str, tolerance: Tolerance) -> Self {
        self.target = Some(Target { value, source: source.into(), tolerance });
        self
    }

    /// Allowed distance from the target.
    pub fn allowance(&self) -> Option<f64> {
        self.target.as_ref().map(|t| match t.tolerance {
            Tolerance::Absolute(a) => a,
            Tolerance::StdErrors(k) => k * self.std_err,
        })
    }

    /// None without a target.
    pub fn passed(&self) -> Option<bool> {
        let t = self.target.as_ref()?;
        Some((self.value - t.value).abs() <= self.allowance()?)
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentReport {
    pub name: String,
    pub seed: u64,
    pub estimates: Vec<Estimate>,
    pub wall_time: Duration,
}

impl ExperimentReport {
    /// True iff every targeted estimate is within tolerance.
    pub fn passed(&self) -> bool {
        self.estimates.iter().all(|e| e.passed() != Some(false))
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("label,value,std_err,samples,seed,target,source,allowance,pass\n");
        for e in &self.estimates {
            let (t, src) = match &e.target {
                Some(t) => (sig12(t.value), t.source.clone()),
                None => (String::new(), String::new()),
            };
            let allow = e.allowance().map(sig12).unwrap_or_default();
            let pass = e.passed().map(|b| b.to_string()).unwrap_or_default();
            s.push_str(&format!(
                "{},{},{},{},{},{},{},{},{}\n",
                e.label,
                sig12(e.value),
                sig12(e.std_err),
                e.samples,
                self.seed,
                t,
                src,
                allow,
                pass
            ));
        }
        s
    }

    pub fn summary(&self) -> String {
        let mut s = format!("{} (seed {}, {:.2?})\n", self.name, self.seed, self.wall_time);
        for e in &self.estimates {
            s.push_str(&format!("  {} = {} ± {}", e.label, sig12(e.value), sig12(e.std_err)));
            if let (Some(t), Some(ok)) = (&e.target, e.passed()) {
                s.push_str(&format!(
                    "  target {} ({})  {}",
                    sig12(t.value),
                    t.source,
                    if ok { "PASS" } else { "FAIL" }
                ));
            }
            s.push('\n');
        }
        s
    }
}

/// A requested row ρ_i^(a).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Row {
    pub a: usize,
    pub i: usize,
}

fn row_lengths(cells: &[Letter], kappa: usize, rows: &[Row]) -> Vec<f64> {
    rows.iter()
        .map(|r| {
            let e = |c: usize| if c == 0 { 0 } else { row_energy_unchecked(cells, r.a, c, kappa) };
            e(r.i) as f64 - e(r.i - 1) as f64
        })
        .collect()
}

fn check_rows(rows: &[Row], kappa: usize) -> Result<()> {
    for r in rows {
        if r.a == 0 || r.a > kappa {
            return Err(Error::ColorOutOfRange { color: r.a, kappa });
        }
        if r.i == 0 {
            return Err(Error::InvalidParameter("row index starts at 1".into()));
        }
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn rows_report(
    name: &str,
    n: usize,
    p: &DensityVector,
    rows: &[Row],
    per_trial: Vec<Vec<f64>>,
    seed: u64,
    tolerance: Tolerance,
    start: Instant,
) -> ExperimentReport {
    let estimates = rows
        .iter()
        .enumerate()
        .map(|(k, r)| {
            let xs: Vec<f64> = per_trial.iter().map(|v| v[k] / n as f64).collect();
            let (m, se) = mean_and_se(&xs);
            Estimate::new(format!("rho_{}^({})/n", r.i, r.a), m, se, xs.len() as u64)
                .with_target(eta(r.i, r.a, p.as_slice()), "schur", tolerance)
        })
        .collect();
    ExperimentReport { name: name.into(), seed, estimates, wall_time: start.elapsed() }
}

/// Mean of ρ_i^(a)/n over independent X^{n,p}, against η_i^(a).
pub fn estimate_rows(
    n: usize,
    p: &DensityVector,
    rows: &[Row],
    trials: usize,
    seed: u64,
    tolerance: Tolerance,
    exec: Exec,
) -> Result<ExperimentReport> {
    check_rows(rows, p.kappa())?;
    let start = Instant::now();
    let sampler = LetterSampler::new(p);
    let per_trial = exec.map_range(trials, |t| {
        let x = sample_config_with(n, &sampler, &mut trial_rng(seed, t as u64));
        row_lengths(x.cells(), p.kappa(), rows)
    });
    Ok(rows_report("rows", n, p, rows, per_trial, seed, tolerance, start))
}

/// As [`estimate_rows`] but each configuration is conditioned to be highest.
pub fn estimate_rows_conditioned(
    n: usize,
    p: &DensityVector,
    rows: &[Row],
    trials: usize,
    seed: u64,
    tolerance: Tolerance,
    exec: Exec,
) -> Result<ExperimentReport> {
    check_rows(rows, p.kappa())?;
    if !p.is_weakly_decreasing() {
        return Err(Error::InvalidDensity("conditioning needs weakly decreasing densities".into()));
    }
    let start = Instant::now();
    let sampler = LetterSampler::new(p);
    let per_trial = exec
        .map_range(trials, |t| {
            let (x, _) = sample_highest_with(n, &sampler, &mut trial_rng(seed, t as u64), DEFAULT_BUDGET)?;
            Ok(row_lengths(x.cells(), p.kappa(), rows))
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    Ok(rows_report("rows-highest", n, p, rows, per_trial, seed, tolerance, start))
}

/// A curve per color a: points (x, i) for rows i = 1..=i_max.
pub type ShapeCurves = Vec<Vec<(f64, usize)>>;

/// Limit shape: x = η_i^(a).
pub fn shape_curve(p: &DensityVector, i_max: usize) -> ShapeCurves {
    (1..=p.kappa())
        .map(|a| (1..=i_max).map(|i| (eta(i, a, p.as_slice()), i)).collect())
        .collect()
}

/// Rescaled diagram boundary (ρ_i^(a)/n, i) of one sample, for rows up to
/// the deepest diagram.
pub fn empirical_shape(n: usize, p: &DensityVector, seed: u64) -> Result<ShapeCurves> {
    let x = sample_config(n, p, seed);
    let y = young_diagrams(&energy_matrix(&x))?;
    Ok(y.diagrams
        .iter()
        .map(|mu| mu.parts().iter().enumerate().map(|(k, &r)| (r as f64 / n as f64, k + 1)).collect())
        .collect())
}

/// sup over rows i ≤ i_max of |x_emp(i) - x_lim(i)| for color a (1-based);
/// missing empirical rows count as 0.
pub fn shape_deviation(limit: &ShapeCurves, empirical: &ShapeCurves, a: usize, i_max: usize) -> f64 {
    let at = |c: &[(f64, usize)], i: usize| c.iter().find(|(_, k)| *k == i).map_or(0.0, |(x, _)| *x);
    (1..=i_max)
        .map(|i| (at(&empirical[a - 1], i) - at(&limit[a - 1], i)).abs())
        .fold(0.0, f64::max)
}

/// The carrier chain as a flat transition table plus an additive
/// functional, for fast simulation.
#[derive(Debug, Clone)]
pub struct ChainSim {
    n_carriers: usize,
    kappa: usize,
    /// next[k * (κ+1) + x]
    next: Vec<u32>,
    /// g[x * n_carriers + k], matching the state order of [`StateSpace`].
    g: Vec<f64>,
    ground: usize,
    sampler: LetterSampler,
}

impl ChainSim {
    pub fn new(space: &StateSpace, p: &DensityVector, g: Functional) -> Result<Self> {
        let kappa = space.kappa;
        let n = space.n_carriers();
        let next = (0..n)
            .flat_map(|k| (0..=kappa).map(move |x| (k, x)))
            .map(|(k, x)| space.next_carrier(k, x) as u32)
            .collect();
        Ok(ChainSim {
            n_carriers: n,
            kappa,
            next,
            g: space.functional(g)?,
            ground: space.ground(),
            sampler: LetterSampler::new(p),
        })
    }

    /// Chain whose partial sums are ρ_i^(a) of the prefix.
    pub fn for_row(i: usize, a: usize, p: &DensityVector, cap: u128) -> Result<Self> {
        if i == 0 {
            return Err(Error::InvalidParameter("row index starts at 1".into()));
        }
        if i == 1 {
            Self::new(&StateSpace::single(1, a, p.kappa(), cap)?, p, Functional::Energy)
        } else {
            Self::new(&StateSpace::joint(i - 1, a, p.kappa(), cap)?, p, Functional::RowIncrement)
        }
    }

    /// Chain whose partial sums are E_c^(a) of the prefix.
    pub fn for_energy(c: usize, a: usize, p: &DensityVector, cap: u128) -> Result<Self> {
        Self::new(&StateSpace::single(c, a, p.kappa(), cap)?, p, Functional::Energy)
    }

    /// One carrier, so letters are i.i.d. and g depends on the letter only.
    pub fn iid(p: &DensityVector, g: Vec<f64>) -> Self {
        let kappa = p.kappa();
        assert_eq!(g.len(), kappa + 1);
        ChainSim { n_carriers: 1, kappa, next: vec![0; kappa + 1], g, ground: 0, sampler: LetterSampler::new(p) }
    }

    pub fn ground(&self) -> usize {
        self.ground
    }

    pub fn n_carriers(&self) -> usize {
        self.n_carriers
    }

    /// Read one random letter: returns g(carrier, x) and moves the carrier.
    #[inline]
    pub fn step<R: Rng>(&self, carrier: &mut usize, rng: &mut R) -> f64 {
        let x = self.sampler.sample(rng) as usize;
        let v = self.g[x * self.n_carriers + *carrier];
        *carrier = self.next[*carrier * (self.kappa + 1) + x] as usize;
        v
    }
}

/// Regenerative and batch-means estimates of the limiting variance.
#[derive(Debug, Clone, PartialEq)]
pub struct VarianceEstimate {
    pub gamma2: f64,
    /// Spread of γ² across groups of blocks.
    pub std_err: f64,
    pub mean: f64,
    pub blocks: u64,
    pub steps: u64,
}

/// Minimum number of regeneration blocks accepted.
pub const MIN_BLOCKS: usize = 100;

/// γ² from regeneration blocks (G_j, L_j): with μ = ΣG/ΣL,
/// γ² = Σ(G_j - μ L_j)² / ΣL.
pub fn regenerative_variance(blocks: &[(f64, u64)]) -> Result<VarianceEstimate> {
    if blocks.len() < MIN_BLOCKS {
        return Err(Error::TooFewBlocks { blocks: blocks.len(), needed: MIN_BLOCKS });
    }
    let point = |bs: &[(f64, u64)]| {
        let total_len: u64 = bs.iter().map(|b| b.1).sum();
        let mean = kahan_sum(bs.iter().map(|b| b.0)) / total_len as f64;
        let g2 = kahan_sum(bs.iter().map(|(g, l)| (g - mean * *l as f64).powi(2))) / total_len as f64;
        (g2, mean, total_len)
    };
    let (gamma2, mean, steps) = point(blocks);
    let groups = 20;
    let size = blocks.len() / groups;
    let parts: Vec<f64> = (0..groups).map(|k| point(&blocks[k * size..(k + 1) * size]).0).collect();
    let (_, se) = mean_and_se(&parts);
    Ok(VarianceEstimate { gamma2, std_err: se, mean, blocks: blocks.len() as u64, steps })
}

/// Batch-means estimate from consecutive batch sums of equal length.
pub fn batch_means_variance(batch_sums: &[f64], batch_len: u64) -> f64 {
    let means: Vec<f64> = batch_sums.iter().map(|s| s / batch_len as f64).collect();
    let (_, se) = mean_and_se(&means);
    // se² = Var(batch mean) / batches; γ² ≈ batch_len · Var(batch mean).
    se * se * means.len() as f64 * batch_len as f64
}

/// Independent replicas started at the ground carrier; each contributes its
/// completed regeneration blocks (returns to the ground carrier).
pub fn regeneration_blocks(sim: &ChainSim, steps: u64, replicas: usize, seed: u64, exec: Exec) -> Vec<(f64, u64)> {
    let per = steps / replicas as u64;
    exec.map_range(replicas, |r| {
        let mut rng = trial_rng(seed, r as u64);
        let mut k = sim.ground();
        let mut out = Vec::new();
        let (mut g, mut len) = (0.0, 0u64);
        for _ in 0..per {
            g += sim.step(&mut k, &mut rng);
            len += 1;
            if k == sim.ground() {
                out.push((g, len));
                g = 0.0;
                len = 0;
            }
        }
        out
    })
    .concat()
}

/// γ² for ρ_c^(a) by the regenerative estimator.
pub fn limiting_variance(c: usize, a: usize, p: &DensityVector, steps: u64, seed: u64, exec: Exec) -> Result<VarianceEstimate> {
    let sim = ChainSim::for_row(c, a, p, DEFAULT_STATE_CAP)?;
    regenerative_variance(&regeneration_blocks(&sim, steps, 64, seed, exec))
}

/// Batch-means estimate of γ² over one trajectory of `steps` from ground,
/// cut into `batches` batches.
pub fn limiting_variance_batch_means(sim: &ChainSim, steps: u64, batches: usize, seed: u64) -> f64 {
    let len = steps / batches as u64;
    let mut rng = trial_rng(seed, u64::MAX);
    let mut k = sim.ground();
    let sums: Vec<f64> = (0..batches)
        .map(|_| (0..len).map(|_| sim.step(&mut k, &mut rng)).sum())
        .collect();
    batch_means_variance(&sums, len)
}

/// Survival probabilities of ρ̄(k) = ρ_c^(a)(X^{k,p}) - η k ≥ 0 for all
/// k ≤ n.
#[derive(Debug, Clone)]
pub struct PersistenceReport {
    pub c: usize,
    pub a: usize,
    pub trials: u64,
    pub n_grid: Vec<u64>,
    pub survival: Vec<f64>,
    pub survival_se: Vec<f64>,
    /// Least-squares slope of log P̂ against log n.
    pub slope: f64,
    /// P̂(n_max) √n_max.
    pub prefactor: f64,
    pub prefactor_se: f64,
    /// γ / ((1 - ε) √(2π)).
    pub prefactor_target: f64,
    pub variance: VarianceEstimate,
    pub eta: f64,
    pub epsilon: f64,
    pub seed: u64,
    pub wall_time: Duration,
}

impl PersistenceReport {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("n,survival,std_err,scaled\n");
        for (k, n) in self.n_grid.iter().enumerate() {
            s.push_str(&format!(
                "{},{},{},{}\n",
                n,
                sig12(self.survival[k]),
                sig12(self.survival_se[k]),
                sig12(self.survival[k] * (*n as f64).sqrt())
            ));
        }
        s
    }

    pub fn summary(&self) -> String {
        format!(
            "persistence c={} a={} trials={} seed={}\n  slope {}\n  prefactor {} ± {}  target {} (gamma^2 {}, eta {}, epsilon {})\n",
            self.c,
            self.a,
            self.trials,
            self.seed,
            sig12(self.slope),
            sig12(self.prefactor),
            sig12(self.prefactor_se),
            sig12(self.prefactor_target),
            sig12(self.variance.gamma2),
            sig12(self.eta),
            sig12(self.epsilon)
        )
    }
}

/// Least-squares slope of y on x.
pub fn ols_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}

/// Steps survived (ρ̄ ≥ 0) up to `n_max`, starting with ρ̄(0) = 0.
fn survival_time<R: Rng>(sim: &ChainSim, eta: f64, n_max: u64, rng: &mut R) -> u64 {
    let mut k = sim.ground();
    let mut s = 0.0;
    for step in 1..=n_max {
        s += sim.step(&mut k, rng);
        if s - eta * (step as f64) < -1e-9 {
            return step - 1;
        }
    }
    n_max
}

#[allow(clippy::too_many_arguments)]
pub fn persistence_experiment(
    c: usize,
    a: usize,
    p: &DensityVector,
    n_grid: &[u64],
    trials: u64,
    variance_steps: u64,
    seed: u64,
    exec: Exec,
) -> Result<PersistenceReport> {
    if n_grid.is_empty() || n_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter("n grid must be increasing and nonempty".into()));
    }
    let start = Instant::now();
    let sim = ChainSim::for_row(c, a, p, DEFAULT_STATE_CAP)?;
    let eta_c = eta(c, a, p.as_slice());
    let n_max = *n_grid.last().unwrap();
    let times = exec.map_range(trials as usize, |t| survival_time(&sim, eta_c, n_max, &mut trial_rng(seed, t as u64)));
    let survival: Vec<f64> = n_grid
        .iter()
        .map(|&n| times.iter().filter(|&&s| s >= n).count() as f64 / trials as f64)
        .collect();
    if *survival.last().unwrap() == 0.0 {
        return Err(Error::InvalidParameter(format!("no trial survived to n = {n_max}; use more trials")));
    }
    let survival_se: Vec<f64> = survival.iter().map(|q| (q * (1.0 - q) / trials as f64).sqrt()).collect();
    let lx: Vec<f64> = n_grid.iter().map(|&n| (n as f64).ln()).collect();
    let ly: Vec<f64> = survival.iter().map(|q| q.ln()).collect();
    let variance = regenerative_variance(&regeneration_blocks(&sim, variance_steps, 64, seed ^ 0x5eed, exec))?;
    let eps = epsilon(c, a, p.as_slice());
    let root_n = (n_max as f64).sqrt();
    Ok(PersistenceReport {
        c,
        a,
        trials,
        n_grid: n_grid.to_vec(),
        slope: ols_slope(&lx, &ly),
        prefactor: survival.last().unwrap() * root_n,
        prefactor_se: survival_se.last().unwrap() * root_n,
        prefactor_target: variance.gamma2.sqrt() / ((1.0 - eps) * (2.0 * std::f64::consts::PI).sqrt()),
        survival,
        survival_se,
        variance,
        eta: eta_c,
        epsilon: eps,
        seed,
        wall_time: start.elapsed(),
    })
}

/// Normality spot check of ρ̄(n)/(γ√n).
#[derive(Debug, Clone, PartialEq)]
pub struct FcltCheck {
    pub mean: f64,
    pub variance: f64,
    pub skewness: f64,
    pub kurtosis: f64,
    /// Jarque-Bera statistic; χ²(2) under normality.
    pub jarque_bera: f64,
    pub p_value: f64,
}

impl FcltCheck {
    pub fn passes(&self, level: f64) -> bool {
        self.p_value >= level
    }
}

pub fn jarque_bera(xs: &[f64]) -> FcltCheck {
    let n = xs.len() as f64;
    let mean = kahan_sum(xs.iter().copied()) / n;
    let m = |k: i32| kahan_sum(xs.iter().map(|x| (x - mean).powi(k))) / n;
    let (m2, m3, m4) = (m(2), m(3), m(4));
    let skewness = m3 / m2.powf(1.5);
    let kurtosis = m4 / (m2 * m2);
    let jb = n / 6.0 * (skewness.powi(2) + (kurtosis - 3.0).powi(2) / 4.0);
    FcltCheck { mean, variance: m2, skewness, kurtosis, jarque_bera: jb, p_value: (-jb / 2.0).exp() }
}

/// Standardized ρ̄(n)/(γ√n) over `trials` runs, with γ² supplied.
#[allow(clippy::too_many_arguments)]
pub fn fclt_samples(c: usize, a: usize, p: &DensityVector, n: u64, trials: usize, gamma2: f64, seed: u64, exec: Exec) -> Result<Vec<f64>> {
    let sim = ChainSim::for_row(c, a, p, DEFAULT_STATE_CAP)?;
    let eta_c = eta(c, a, p.as_slice());
    let scale = (gamma2 * n as f64).sqrt();
    Ok(exec.map_range(trials, |t| {
        let mut rng = trial_rng(seed, t as u64);
        let mut k = sim.ground();
        let s: f64 = (0..n).map(|_| sim.step(&mut k, &mut rng)).sum();
        (s - eta_c * n as f64) / scale
    }))
}

/// Total-variation distance between the empirical carrier occupation of the
/// B_c^(a) chain after `steps` steps from ground and the stationary law.
pub fn occupation_tv(c: usize, a: usize, p: &DensityVector, steps: u64, seed: u64) -> Result<f64> {
    let space = StateSpace::single(c, a, p.kappa(), DEFAULT_STATE_CAP)?;
    let sim = ChainSim::new(&space, p, Functional::Energy)?;
    let mut counts = vec![0u64; space.n_carriers()];
    let mut rng = trial_rng(seed, 0);
    let mut k = sim.ground();
    for _ in 0..steps {
        sim.step(&mut k, &mut rng);
        counts[k] += 1;
    }
    let pi = stationary_pi::<f64>(c, a, p.as_slice(), DEFAULT_STATE_CAP)?;
    let tv = pi
        .iter()
        .map(|(t, w)| {
            let k = space.carrier_index(t, None).expect("same enumeration");
            (counts[k] as f64 / steps as f64 - w).abs()
        })
        .sum::<f64>();
    Ok(tv / 2.0)
}

/// Mean of E_c^(a)(X^{n,p})/n against ε_c^(a).
pub fn estimate_epsilon(c: usize, a: usize, n: usize, p: &DensityVector, trials: usize, seed: u64, exec: Exec) -> Result<Estimate> {
    check_rows(&[Row { a, i: 1 }], p.kappa())?;
    let sampler = LetterSampler::new(p);
    let xs = exec.map_range(trials, |t| {
        let x = sample_config_with(n, &sampler, &mut trial_rng(seed, t as u64));
        row_energy_unchecked(x.cells(), a, c, p.kappa()) as f64 / n as f64
    });
    let (m, se) = mean_and_se(&xs);
    Ok(Estimate::new(format!("E_{c}^({a})/n"), m, se, trials as u64).with_target(
        epsilon(c, a, p.as_slice()),
        "schur",
        Tolerance::StdErrors(3.0),
    ))
}
