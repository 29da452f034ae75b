use std::fmt::Write;
use std::path::Path;

use anyhow::{bail, Context, Result};
use boxball::carrier::{energy_matrix, vacancies_unchecked, young_diagrams};
use boxball::fmt::sig12;
use boxball::highest::{
    ballot_count, ballot_count_brute, decay_exponent, is_highest, prob_highest_exact, sample_highest, ChamberPoint,
    DEFAULT_BUDGET,
};
use boxball::ldp::{CumulantGenerator, Functional, RateFunction, StateSpace};
use boxball::mc::{
    empirical_shape, estimate_rows, estimate_rows_conditioned, mean_and_se, persistence_experiment, sample_config_with,
    shape_curve, shape_deviation, trial_rng, LetterSampler, Row, Tolerance,
};
use boxball::svg::{shape_svg, young_svg};
use boxball::tba::{q_system_residual, y_system_residual, PrincipalParams};
use boxball::{Configuration, Exec};
use clap::Args;

use crate::density::DensityArgs;

/// What a subcommand produced. `passed` is set only by check modes.
#[derive(Debug, Default)]
pub struct Report {
    pub body: String,
    pub svg: Option<String>,
    pub passed: Option<bool>,
    pub log: String,
}

impl Report {
    fn body(body: String) -> Self {
        Report { body, ..Default::default() }
    }
}

/// A configuration string, or a path to a file whose first non-comment line
/// is one.
fn read_config(src: &str, kappa: Option<usize>) -> Result<Configuration> {
    let text = if Path::new(src).is_file() {
        let s = std::fs::read_to_string(src).with_context(|| format!("reading {src}"))?;
        s.lines().find(|l| !l.trim().is_empty() && !l.starts_with('#')).unwrap_or("").to_string()
    } else {
        src.to_string()
    };
    Ok(Configuration::parse(&text, kappa)?)
}

#[derive(Debug, Args)]
pub struct EvolveArgs {
    /// Configuration (digits, or comma separated) or a file holding one.
    #[arg(long)]
    pub config: String,
    /// Number of time steps; prints steps+1 lines.
    #[arg(long, default_value_t = 1)]
    pub steps: usize,
    #[arg(long)]
    pub kappa: Option<usize>,
    /// Use the B_c^(a) carrier map instead of the ball-moving rule.
    #[arg(long, requires = "c")]
    pub a: Option<usize>,
    /// Carrier capacity for --a (defaults a to 1 when given alone).
    #[arg(long)]
    pub c: Option<usize>,
}

pub fn evolve(args: &EvolveArgs) -> Result<Report> {
    let mut x = read_config(&args.config, args.kappa)?;
    let mut body = String::new();
    for t in 0..=args.steps {
        if t > 0 {
            x = match args.c {
                Some(c) => x.evolve_by_carrier(args.a.unwrap_or(1), c)?,
                None => x.evolve(),
            };
        }
        body.push_str(&x.to_spaced(0));
        body.push('\n');
    }
    Ok(Report::body(body))
}

#[derive(Debug, Args)]
pub struct EnergyArgs {
    #[arg(long)]
    pub config: String,
    #[arg(long)]
    pub kappa: Option<usize>,
    /// System size; adds the vacancy table.
    #[arg(long)]
    pub n: Option<usize>,
}

pub fn energy(args: &EnergyArgs, with_svg: bool) -> Result<Report> {
    let x = read_config(&args.config, args.kappa)?;
    let e = energy_matrix(&x);
    let y = young_diagrams(&e)?;
    let mut body = String::from("# energy matrix\n");
    if x.total_balls() == 0 {
        body.push_str(e.to_csv().lines().next().unwrap_or(""));
        body.push('\n');
    } else {
        body.push_str(&e.to_csv());
    }
    body.push_str("# young diagrams\n");
    body.push_str(&y.to_csv());
    if let Some(n) = args.n {
        if n < x.cells().len() {
            bail!("--n {n} is shorter than the configuration ({} cells)", x.cells().len());
        }
        let v = vacancies_unchecked(&y, n);
        body.push_str("# vacancies\ni");
        for a in 1..=x.kappa() {
            let _ = write!(body, ",v{a}");
        }
        body.push('\n');
        let rows = v.rows.iter().enumerate().map(|(i, r)| ((i + 1).to_string(), r));
        for (label, r) in rows.chain(std::iter::once(("inf".to_string(), &v.infinity))) {
            body.push_str(&label);
            for val in r {
                let _ = write!(body, ",{val}");
            }
            body.push('\n');
        }
        if let Some((i, a, val)) = v.first_negative() {
            let _ = writeln!(body, "# not a highest state: v[{i}][{a}] = {val}");
        }
    }
    Ok(Report { body, svg: with_svg.then(|| young_svg(&y, 14.0)), ..Default::default() })
}

#[derive(Debug, Args)]
pub struct ShapeArgs {
    #[command(flatten)]
    pub density: DensityArgs,
    /// Rows per diagram.
    #[arg(long, default_value_t = 10)]
    pub i_max: usize,
    /// Also sample one configuration of this length and report its diagrams.
    #[arg(long)]
    pub n: Option<usize>,
    /// Check mode: fail if any sampled row is farther than this from the limit.
    #[arg(long, requires = "n")]
    pub tol: Option<f64>,
}

pub fn shape(args: &ShapeArgs, seed: u64, with_svg: bool) -> Result<Report> {
    let p = args.density.resolve()?;
    let limit = shape_curve(&p, args.i_max);
    let emp = args.n.map(|n| empirical_shape(n, &p, seed)).transpose()?;
    let mut body = String::from(if emp.is_some() { "a,i,eta,empirical\n" } else { "a,i,eta\n" });
    for (k, curve) in limit.iter().enumerate() {
        for &(x, i) in curve {
            let _ = write!(body, "{},{},{}", k + 1, i, sig12(x));
            if let Some(e) = &emp {
                let v = e[k].iter().find(|q| q.1 == i).map_or(0.0, |q| q.0);
                let _ = write!(body, ",{}", sig12(v));
            }
            body.push('\n');
        }
    }
    let mut report = Report { svg: with_svg.then(|| shape_svg(&limit, emp.as_ref(), 640.0, 480.0)), ..Default::default() };
    if let (Some(e), Some(tol)) = (&emp, args.tol) {
        let worst = (1..=p.kappa()).map(|a| shape_deviation(&limit, e, a, args.i_max)).fold(0.0, f64::max);
        let _ = writeln!(body, "# max deviation {} (tolerance {})", sig12(worst), sig12(tol));
        report.passed = Some(worst <= tol);
    }
    report.body = body;
    Ok(report)
}

#[derive(Debug, Args)]
pub struct LdpArgs {
    #[command(flatten)]
    pub density: DensityArgs,
    /// Carrier width; the functional is E_c^(a).
    #[arg(long, default_value_t = 1)]
    pub c: usize,
    #[arg(long, default_value_t = 1)]
    pub a: usize,
    /// Use the row length rho_i^(a) instead of E_c^(a).
    #[arg(long, conflicts_with = "c")]
    pub row: Option<usize>,
    /// Explicit u values; otherwise an even grid over the range of the
    /// functional, plus Lambda'(0).
    #[arg(long, value_delimiter = ',')]
    pub u: Option<Vec<f64>>,
    #[arg(long, default_value_t = 41)]
    pub u_steps: usize,
    /// Also print Lambda(t) on an even grid over [-t_max, t_max].
    #[arg(long)]
    pub lambda: bool,
    #[arg(long, default_value_t = 10.0)]
    pub t_max: f64,
    #[arg(long, default_value_t = 81)]
    pub t_steps: usize,
    /// Largest chain state space to enumerate.
    #[arg(long, default_value_t = 1_000_000)]
    pub cap: u128,
}

fn grid(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    if steps < 2 {
        return vec![lo];
    }
    (0..steps).map(|k| lo + (hi - lo) * k as f64 / (steps - 1) as f64).collect()
}

pub fn ldp(args: &LdpArgs, exec: Exec) -> Result<Report> {
    let p = args.density.resolve()?;
    let gen = match args.row {
        Some(i) => CumulantGenerator::for_row(i, args.a, p.as_slice(), args.cap)?,
        None => {
            let space = StateSpace::single(args.c, args.a, p.kappa(), args.cap)?;
            CumulantGenerator::for_chain(&space, p.as_slice(), Functional::Energy)?
        }
    };
    let eta = gen.lambda_prime_at_zero()?;
    let us = match &args.u {
        Some(u) => u.clone(),
        None => {
            let g = gen.functional();
            let lo = g.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = g.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let mut us = grid(lo, hi, args.u_steps);
            us.push(eta);
            us.sort_by(f64::total_cmp);
            us
        }
    };
    let ts = if args.lambda { grid(-args.t_max, args.t_max, args.t_steps) } else { Vec::new() };
    let rf = RateFunction::sample(&gen, &ts, &us, exec)?;
    let mut body = format!("# eta {}\n", sig12(rf.eta));
    body.push_str(&rf.rate_csv());
    if args.lambda {
        body.push_str("# lambda\n");
        body.push_str(&rf.lambda_csv());
    }
    Ok(Report::body(body))
}

#[derive(Debug, Args)]
pub struct TbaArgs {
    /// Principal parameter, 0 < q < 1.
    #[arg(long)]
    pub q: f64,
    #[arg(long)]
    pub kappa: usize,
    #[arg(long, default_value_t = 10)]
    pub i_max: usize,
    /// Check the Q-system, Y-system, difference equation and equation of
    /// state for i <= i_max.
    #[arg(long)]
    pub check: bool,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
}

pub fn tba(args: &TbaArgs) -> Result<Report> {
    let pp = PrincipalParams::new(args.q, args.kappa)?;
    let mut report = Report::body(pp.table_csv(args.i_max));
    if args.check {
        let w = pp.w();
        let y = |i: usize, a: usize| pp.y(i, a);
        let mut worst = [0.0f64; 4];
        for a in 1..=args.kappa {
            for i in 1..=args.i_max {
                worst[0] = worst[0].max(q_system_residual(i, a, &w).abs());
                worst[1] = worst[1].max(y_system_residual(i, a, &y, args.kappa).abs());
                worst[2] = worst[2].max(pp.difference_residual(i, a).abs());
            }
        }
        let eos = boxball::tba::equation_of_state_residual(&pp.densities());
        worst[3] = eos.iter().fold(0.0, |m, r| m.max(r.abs()));
        report.body.push_str("# residuals\nidentity,max_abs\n");
        for (name, v) in ["q_system", "y_system", "difference", "equation_of_state"].iter().zip(worst) {
            let _ = writeln!(report.body, "{name},{}", sig12(v));
        }
        report.passed = Some(worst.iter().all(|&r| r < args.tol));
    }
    Ok(report)
}

#[derive(Debug, Args)]
pub struct BallotArgs {
    /// Chamber point m_1 >= m_2 >= ... (comma separated).
    #[arg(long, value_delimiter = ',', required = true)]
    pub m: Vec<u64>,
    /// Compare against path enumeration (small points only).
    #[arg(long)]
    pub brute: bool,
}

pub fn ballot(args: &BallotArgs) -> Result<Report> {
    let m = ChamberPoint(args.m.clone());
    if !m.in_chamber() {
        bail!("--m must be weakly decreasing");
    }
    let g = ballot_count(&m);
    let mut report = Report::body(format!("{g}\n"));
    if args.brute {
        if args.m.iter().sum::<u64>() > 16 {
            bail!("--brute is limited to points with total at most 16");
        }
        let b = ballot_count_brute(&m);
        let _ = writeln!(report.body, "# enumeration {b}");
        report.passed = Some(g == b.into());
    }
    Ok(report)
}

#[derive(Debug, Args)]
pub struct McArgs {
    #[command(flatten)]
    pub density: DensityArgs,
    /// Configuration length.
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    /// Rows as a:i pairs, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "1:1")]
    pub rows: Vec<String>,
    /// Condition each sample to be a highest state.
    #[arg(long)]
    pub highest: bool,
    /// Pass when within this many standard errors of the limit.
    #[arg(long, default_value_t = 3.0, conflicts_with = "abs_tol")]
    pub se_tol: f64,
    /// Pass when within this absolute distance of the limit.
    #[arg(long)]
    pub abs_tol: Option<f64>,
}

fn parse_row(s: &str) -> Result<Row> {
    let (a, i) = s.split_once(':').with_context(|| format!("row {s:?} is not a:i"))?;
    Ok(Row { a: a.trim().parse()?, i: i.trim().parse()? })
}

pub fn mc(args: &McArgs, seed: u64, exec: Exec) -> Result<Report> {
    let p = args.density.resolve()?;
    let rows = args.rows.iter().map(|s| parse_row(s)).collect::<Result<Vec<_>>>()?;
    let tol = match args.abs_tol {
        Some(t) => Tolerance::Absolute(t),
        None => Tolerance::StdErrors(args.se_tol),
    };
    let r = if args.highest {
        estimate_rows_conditioned(args.n, &p, &rows, args.trials, seed, tol, exec)?
    } else {
        estimate_rows(args.n, &p, &rows, args.trials, seed, tol, exec)?
    };
    Ok(Report { body: r.to_csv(), passed: Some(r.passed()), log: r.summary(), ..Default::default() })
}

#[derive(Debug, Args)]
pub struct PersistenceArgs {
    #[command(flatten)]
    pub density: DensityArgs,
    #[arg(long, default_value_t = 1)]
    pub c: usize,
    #[arg(long, default_value_t = 1)]
    pub a: usize,
    #[arg(long, value_delimiter = ',', default_value = "250,500,1000,2000")]
    pub n_grid: Vec<u64>,
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,
    /// Chain steps for the variance estimate.
    #[arg(long, default_value_t = 2_000_000)]
    pub variance_steps: u64,
    /// Check mode: slope in [-0.6, -0.4] and prefactor within 25% of target.
    #[arg(long)]
    pub check: bool,
}

pub fn persistence(args: &PersistenceArgs, seed: u64, exec: Exec) -> Result<Report> {
    let p = args.density.resolve()?;
    if args.n_grid.len() < 2 {
        bail!("--n-grid needs at least two sizes");
    }
    let r = persistence_experiment(args.c, args.a, &p, &args.n_grid, args.trials, args.variance_steps, seed, exec)?;
    let mut body = r.to_csv();
    let rel = (r.prefactor - r.prefactor_target).abs() / r.prefactor_target;
    let _ = writeln!(body, "# slope {}", sig12(r.slope));
    let _ = writeln!(
        body,
        "# prefactor {} +- {} target {} relative difference {}",
        sig12(r.prefactor),
        sig12(r.prefactor_se),
        sig12(r.prefactor_target),
        sig12(rel)
    );
    let _ = writeln!(body, "# gamma^2 {} eta {} epsilon {}", sig12(r.variance.gamma2), sig12(r.eta), sig12(r.epsilon));
    let passed = args.check.then(|| (-0.6..=-0.4).contains(&r.slope) && rel <= 0.25);
    Ok(Report { body, passed, log: r.summary(), ..Default::default() })
}

#[derive(Debug, Args)]
pub struct HighestArgs {
    #[command(flatten)]
    pub density: DensityArgs,
    #[arg(long)]
    pub n: usize,
    /// Estimate P(highest) from this many samples and check it against the
    /// exact value within 3 standard errors.
    #[arg(long)]
    pub trials: Option<usize>,
    /// Print one rejection-sampled highest state.
    #[arg(long)]
    pub sample: bool,
}

pub fn highest(args: &HighestArgs, seed: u64, exec: Exec) -> Result<Report> {
    let p = args.density.resolve()?;
    let exact = prob_highest_exact(args.n as u64, &p)?;
    let mut body = String::from("quantity,value\n");
    let _ = writeln!(body, "n,{}", args.n);
    let _ = writeln!(body, "prob_exact,{}", sig12(exact));
    let _ = writeln!(body, "decay_exponent,{}", sig12(decay_exponent(&p)?));
    let mut report = Report::default();
    if let Some(trials) = args.trials {
        let sampler = LetterSampler::new(&p);
        let hits = exec.map_range(trials, |t| {
            let x = sample_config_with(args.n, &sampler, &mut trial_rng(seed, t as u64));
            if is_highest(&x) { 1.0 } else { 0.0 }
        });
        let (m, se) = mean_and_se(&hits);
        let ok = (m - exact).abs() <= 3.0 * se.max(f64::MIN_POSITIVE);
        let _ = writeln!(body, "empirical,{}", sig12(m));
        let _ = writeln!(body, "std_err,{}", sig12(se));
        let _ = writeln!(body, "pass,{ok}");
        report.passed = Some(ok);
    }
    if args.sample {
        let (x, stats) = sample_highest(args.n, &p, seed, DEFAULT_BUDGET)?;
        let _ = writeln!(body, "sample,{}", x.to_spaced(args.n));
        let _ = writeln!(body, "attempts,{}", stats.attempts);
    }
    report.body = body;
    Ok(report)
}
