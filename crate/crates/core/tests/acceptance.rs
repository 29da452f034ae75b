//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs as a plain binary (`harness = false`). The process exits 0 so that
//! the workspace test run reports the lines without aborting; set
//! `BOXBALL_ACCEPTANCE_STRICT=1` to exit 1 when any criterion fails.

use std::collections::HashSet;
use std::time::{Duration, Instant};

use boxball::carrier::{energy_matrix, young_diagrams};
use boxball::equilibrium::{
    eta, eta_by_difference, schur_bialternant, schur_jacobi_trudi, stationary_pi, to_rational,
};
use boxball::exec::Exec;
use boxball::highest::{ballot_count, ballot_count_brute, chamber_points, is_highest, prob_highest_exact};
use boxball::ldp::{CumulantGenerator, Functional, StateSpace};
use boxball::mc::{
    estimate_rows, estimate_rows_conditioned, mean_and_se, ols_slope, persistence_experiment, sample_config_with,
    trial_rng, LetterSampler, Row, Tolerance,
};
use boxball::scalar::ratio;
use boxball::tableau::{combinatorial_r, count_rectangular_u128, enumerate_rectangular, Letter, Tableau};
use boxball::tba::{eta_uniform_limit, q_system_residual, y_system_residual, PrincipalParams};
use boxball::{Configuration, DensityVector, Partition};
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::Rng;

type Outcome = (bool, String);

struct Criterion {
    id: u32,
    name: &'static str,
    budget: Duration,
    run: fn() -> Outcome,
}

const TRAJECTORY: [&str; 7] = [
    "1 1 2 1 4 0 1 0 1 2 1 4 2 0 4 4 2 0 1 2",
    "0 0 1 0 2 4 0 1 0 1 0 2 1 4 2 1 1 4 0 1 4 2 2",
    "0 0 0 1 0 2 4 0 1 0 1 0 0 2 1 0 0 2 4 0 1 1 1 4 4 2 2",
    "0 0 0 0 1 0 2 4 0 1 0 1 0 0 0 2 1 0 2 4 0 0 0 1 1 1 0 4 4 2 2",
    "0 0 0 0 0 1 0 2 4 0 1 0 1 0 0 0 0 2 1 2 4 0 0 0 0 0 1 1 1 0 0 4 4 2 2",
    "0 0 0 0 0 0 1 0 2 4 0 1 0 1 0 0 0 0 0 1 2 4 2 0 0 0 0 0 0 1 1 1 0 0 0 4 4 2 2",
    "0 0 0 0 0 0 0 1 0 2 4 0 1 0 1 0 0 0 0 0 1 2 0 4 2 0 0 0 0 0 0 0 1 1 1 0 0 0 0 4 4 2 2",
];

fn golden_trajectory() -> Outcome {
    let mut x = Configuration::parse(TRAJECTORY[0], Some(4)).unwrap();
    for (t, line) in TRAJECTORY.iter().enumerate().skip(1) {
        x = x.evolve();
        let want = Configuration::parse(line, Some(4)).unwrap();
        if x != want {
            return (false, format!("t={t}: got {x}"));
        }
    }
    (true, "t=1..6 match".into())
}

fn golden_energy() -> Outcome {
    let x = Configuration::parse(TRAJECTORY[0], Some(4)).unwrap();
    let e = energy_matrix(&x);
    let want: Vec<Vec<u64>> = vec![
        vec![10, 5, 2, 1],
        vec![13, 7, 3, 2],
        vec![15, 8, 4, 3],
        vec![16, 9, 4, 4],
        vec![16, 9, 4, 4],
    ];
    if e.rows() != want.as_slice() {
        return (false, format!("energy rows {:?}", e.rows()));
    }
    let y = young_diagrams(&e).unwrap();
    let mus: [&[usize]; 4] = [&[10, 3, 2, 1], &[5, 2, 1, 1], &[2, 1, 1], &[1, 1, 1, 1]];
    for (a, mu) in mus.iter().enumerate() {
        if y.diagram(a + 1).parts() != *mu {
            return (false, format!("mu^({}) = {}", a + 1, y.diagram(a + 1)));
        }
    }
    (true, "matrix and four diagrams match".into())
}

fn time_invariance() -> Outcome {
    let mut rng = trial_rng(2024, 0);
    for k in 0..200 {
        let kappa = rng.random_range(1..=4);
        let n = rng.random_range(0..=60);
        let t = rng.random_range(1..=30);
        let cells: Vec<Letter> = (0..n).map(|_| rng.random_range(0..=kappa as Letter)).collect();
        let x = Configuration::new(kappa, cells).unwrap();
        let e0 = energy_matrix(&x);
        let et = energy_matrix(&x.evolve_steps(t));
        if e0 != et {
            return (false, format!("config {k}: {x} differs after {t} steps"));
        }
    }
    (true, "200 configurations".into())
}

const R_STATE_CAP: u128 = 100_000;
const R_KAPPA_MAX: usize = 8;
// Width bound: for small κ the state cap alone would admit c in the tens of
// thousands.
const R_C_MAX: usize = 16;

fn r_exhaustive(a: usize, c: usize, kappa: usize) -> std::result::Result<(), String> {
    let tabs = enumerate_rectangular(a, c, kappa, R_STATE_CAP).map_err(|e| e.to_string())?;
    let mut seen = HashSet::with_capacity(tabs.len() * (kappa + 1));
    for t in &tabs {
        for x in 0..=kappa as Letter {
            let (y, s) = combinatorial_r(t, x);
            if Tableau::new(s.rows()).is_err() || s.max_letter() as usize > kappa || y as usize > kappa {
                return Err(format!("{} <- {x}: invalid output", t.to_text()));
            }
            let mut before = t.letter_counts(kappa);
            before[x as usize] += 1;
            let mut after = s.letter_counts(kappa);
            after[y as usize] += 1;
            if before != after {
                return Err(format!("{} <- {x}: weight changed", t.to_text()));
            }
            let mut lhs = s.to_shaped();
            lhs.row_insert(y);
            let mut rhs = t.to_shaped();
            rhs.column_insert(x);
            if lhs != rhs {
                return Err(format!("{} <- {x}: factorization oracle disagrees", t.to_text()));
            }
            if !seen.insert((y, s)) {
                return Err(format!("{} <- {x}: output repeated", t.to_text()));
            }
        }
    }
    Ok(())
}

fn combinatorial_r_suite() -> Outcome {
    let t = |s: &str| s.parse::<Tableau>().unwrap();
    let printed = [
        (combinatorial_r(&t("011/234"), 3), (1, t("012/334"))),
        (combinatorial_r(&t("011/234"), 2), (4, t("011/223"))),
        (combinatorial_r(&t("011/224/445"), 3), (4, t("011/224/345"))),
        (combinatorial_r(&t("011/224/445"), 0), (1, t("001/224/445"))),
    ];
    for (k, (got, want)) in printed.iter().enumerate() {
        if got != want {
            return (false, format!("printed example {} gives {:?}", k + 1, got));
        }
    }
    let mut triples = Vec::new();
    for kappa in 1..=R_KAPPA_MAX {
        for a in 1..=kappa {
            let mut c = 1;
            while c <= R_C_MAX && count_rectangular_u128(a, c, kappa) * (kappa as u128 + 1) <= R_STATE_CAP {
                triples.push((kappa, a, c));
                c += 1;
            }
        }
    }
    let results = Exec::default().map_slice(&triples, |&(kappa, a, c)| r_exhaustive(a, c, kappa));
    for (tr, r) in triples.iter().zip(&results) {
        if let Err(e) = r {
            return (false, format!("(κ,a,c)={tr:?}: {e}"));
        }
    }
    (true, format!("4 printed examples, {} exhaustive (κ≤{R_KAPPA_MAX}, c≤{R_C_MAX}) cases", triples.len()))
}

fn stationarity() -> Outcome {
    let cases = [(1, 1, 1), (1, 1, 2), (1, 1, 3), (1, 1, 4), (2, 1, 1), (2, 1, 2), (2, 1, 3), (2, 2, 1), (2, 2, 2), (3, 2, 2)];
    for &(kappa, a, c) in &cases {
        // Distinct, unnormalized-looking rationals: (k+2)/T.
        let total: i64 = (0..=kappa as i64).map(|k| k + 2).sum();
        let p: Vec<BigRational> = (0..=kappa as i64).map(|k| ratio(k + 2, total)).collect();
        let space = StateSpace::single(c, a, kappa, 1 << 20).unwrap();
        let kernel = space.kernel(&p);
        let pi = stationary_pi(c, a, &p, 1 << 20).unwrap();
        let mut mu = vec![BigRational::zero(); space.len()];
        for (t, w) in &pi {
            let k = space.carrier_index(t, None).unwrap();
            for x in 0..=kappa {
                mu[space.state(k, x)] = w.clone() * p[x].clone();
            }
        }
        if kernel.left_multiply(&mu) != mu {
            return (false, format!("(κ,a,c)=({kappa},{a},{c}): πP ≠ π"));
        }
    }
    (true, format!("{} cases, exact", cases.len()))
}

fn ldp_anchors() -> Outcome {
    let mut rng = trial_rng(53, 0);
    let mut worst_anchor = 0.0f64;
    let mut worst_poly = 0.0f64;
    for _ in 0..3 {
        let w: Vec<f64> = (0..3).map(|_| rng.random_range(0.2..1.0)).collect();
        let p = DensityVector::from_weights(&w).unwrap();
        let v = p.as_slice();
        let gen = CumulantGenerator::for_chain(&StateSpace::single(1, 1, 2, 1 << 20).unwrap(), v, Functional::Energy).unwrap();
        let s = v[0] * v[1] + v[1] * v[2] + v[2] * v[0];
        let prod = v[0] * v[1] * v[2];
        worst_anchor = worst_anchor.max((gen.lambda_prime_at_zero().unwrap() - s).abs());
        for t in [-3.0, -1.0, -0.2, 0.3, 1.0, 2.5] {
            let x = gen.lambda(t).unwrap().exp();
            let et = f64::exp(t) - 1.0;
            let r = x.powi(3) - x * x - x * et * s - prod * et * et;
            worst_poly = worst_poly.max(r.abs());
        }
    }
    let third = 1.0 / 3.0;
    let uni = [third; 3];
    let gen = CumulantGenerator::for_chain(&StateSpace::single(2, 1, 2, 1 << 20).unwrap(), &uni, Functional::Energy).unwrap();
    worst_anchor = worst_anchor.max((gen.lambda_prime_at_zero().unwrap() - 4.0 / 9.0).abs());
    for t in [-3.0, -1.0, -0.2, 0.3, 1.0, 2.5] {
        let x: f64 = gen.lambda(t).unwrap().exp();
        let e = f64::exp(t);
        let r = x.powi(6) - x.powi(5) - (2.0 * e - 1.0) / 3.0 * x.powi(4)
            - (4.0 * e * e - 12.0 * e + 1.0) / 27.0 * x.powi(3)
            + e * (5.0 * e - 2.0) / 27.0 * x * x
            + 2.0 * e * e * (e - 2.0) / 81.0 * x
            - e.powi(3) * (e + 8.0) / 729.0;
        worst_poly = worst_poly.max(r.abs());
    }
    let eta0 = gen.lambda_prime_at_zero().unwrap();
    let rate_at_mean = gen.legendre(eta0).unwrap().value();
    let ts: Vec<f64> = (-40..=40).map(|k| k as f64 * 0.5).collect();
    let lam: Vec<f64> = ts.iter().map(|&t| gen.lambda(t).unwrap()).collect();
    let min_second = lam.windows(3).map(|w| w[0] - 2.0 * w[1] + w[2]).fold(f64::INFINITY, f64::min);
    let ok = worst_anchor < 1e-8 && worst_poly < 1e-9 && rate_at_mean <= 1e-8 && min_second >= -1e-9;
    (
        ok,
        format!(
            "anchor err {worst_anchor:.2e}, poly residual {worst_poly:.2e}, Λ*(η) {rate_at_mean:.2e}, min Δ²Λ {min_second:.2e}"
        ),
    )
}

fn rel_err(a: &BigRational, b: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    if a == b {
        return 0.0;
    }
    let d = (a - b).abs() / b.abs();
    d.to_f64().unwrap_or(f64::INFINITY)
}

fn schur_consistency() -> Outcome {
    let mut rng = trial_rng(77, 0);
    let (mut plucker, mut bialt, mut float_err) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..500 {
        let kappa = rng.random_range(1..=5usize);
        let i = rng.random_range(1..=10usize);
        let a = rng.random_range(1..=kappa);
        // Distinct positive integers; both identities are homogeneous, so
        // they hold for p iff they hold for the integer weights.
        let mut ints: Vec<i64> = (1..=40).collect();
        for k in 0..=kappa {
            let j = rng.random_range(k..ints.len());
            ints.swap(k, j);
        }
        let w: Vec<BigRational> = ints[..=kappa].iter().map(|&v| ratio(v, 1)).collect();
        plucker = plucker.max(rel_err(&eta_by_difference(i, a, &w), &eta(i, a, &w)));
        let lambda = Partition::rectangle(i, a);
        let jt = schur_jacobi_trudi(&lambda, &w);
        bialt = bialt.max(rel_err(&schur_bialternant(&lambda, &w).unwrap(), &jt));
        let total: i64 = ints[..=kappa].iter().sum();
        let pf: Vec<f64> = ints[..=kappa].iter().map(|&v| v as f64 / total as f64).collect();
        let exact = eta(i, a, &to_rational(&pf));
        use num_traits::ToPrimitive;
        let ef = exact.to_f64().unwrap();
        float_err = float_err.max(((eta(i, a, &pf) - ef) / ef).abs());
    }
    let ok = plucker < 1e-12 && bialt < 1e-12 && float_err < 1e-12;
    (ok, format!("Plücker {plucker:.1e}, bialternant {bialt:.1e}, float η {float_err:.1e} (relative)"))
}

fn tba_identities() -> Outcome {
    let mut worst = [0.0f64; 6];
    for q in [0.3, 0.5, 0.8] {
        for kappa in 1..=4 {
            let pp = PrincipalParams::new(q, kappa).unwrap();
            let w = pp.w();
            let ycl = |i: usize, a: usize| pp.y(i, a);
            for a in 1..=kappa {
                for i in 1..=20 {
                    worst[0] = worst[0].max(q_system_residual(i, a, &w).abs());
                    worst[1] = worst[1].max(y_system_residual(i, a, &ycl, kappa).abs());
                    worst[2] = worst[2].max(pp.difference_residual(i, a).abs());
                    let xi = pp.xi(i, a);
                    worst[3] = worst[3].max(((pp.phi(i, a) / pp.y(i, a) - xi) / xi).abs());
                    let tail: f64 = (i..i + 4000).map(|j| pp.xi(j, a)).sum();
                    worst[4] = worst[4].max((tail - pp.eta(i, a)).abs());
                }
                let y_char = ((pp.y_from_q(3, a) - pp.y(3, a)) / pp.y(3, a)).abs();
                worst[1] = worst[1].max(y_char);
            }
            let eos = boxball::tba::equation_of_state_residual(&pp.densities());
            worst[5] = worst[5].max(eos.iter().fold(0.0, |m, r| m.max(r.abs())));
        }
    }
    let mut lim = 0.0f64;
    for kappa in 1..=4 {
        let pp = PrincipalParams::new(1.0 - 1e-6, kappa).unwrap();
        for a in 1..=kappa {
            for i in 1..=20 {
                lim = lim.max((pp.eta(i, a) - eta_uniform_limit(i, a, kappa)).abs());
            }
        }
    }
    let ok = worst.iter().all(|&r| r < 1e-10) && lim < 1e-4;
    (
        ok,
        format!(
            "Q {:.1e}, Y {:.1e}, deq {:.1e}, ξ=φ/y {:.1e}, tail {:.1e}, EOS {:.1e}, q→1 {:.1e}",
            worst[0], worst[1], worst[2], worst[3], worst[4], worst[5], lim
        ),
    )
}

fn ballot() -> Outcome {
    let mut checked = 0;
    for r in 1..=4 {
        for n in 0..=8 {
            for m in chamber_points(n, r) {
                let brute = ballot_count_brute(&m);
                if ballot_count(&m) != brute.into() {
                    return (false, format!("G({:?}) ≠ {brute}", m.0));
                }
                checked += 1;
            }
        }
    }
    (true, format!("{checked} chamber points"))
}

fn slln() -> Outcome {
    let half = DensityVector::two_letter(0.5).unwrap();
    let rows = [Row { a: 1, i: 1 }, Row { a: 1, i: 2 }];
    let r1 = estimate_rows(200_000, &half, &rows, 1, 1, Tolerance::Absolute(5e-3), Exec::default()).unwrap();
    let uni = DensityVector::uniform(2);
    let r2 = estimate_rows(100_000, &uni, &[Row { a: 1, i: 1 }], 1, 2, Tolerance::Absolute(5e-3), Exec::default()).unwrap();
    let v = |r: &boxball::mc::ExperimentReport, k: usize| r.estimates[k].value;
    (
        r1.passed() && r2.passed(),
        format!("ρ1/n {:.5}, ρ2/n {:.5} (κ=1); ρ1/n {:.5} (κ=2)", v(&r1, 0), v(&r1, 1), v(&r2, 0)),
    )
}

fn highest_probability() -> Outcome {
    let p = DensityVector::two_letter(0.3).unwrap();
    let target = (2.0 * 0.7 - 1.0) / 0.7;
    let trials = 20_000;
    let sampler = LetterSampler::new(&p);
    let hits: Vec<f64> = Exec::default().map_range(trials, |t| {
        let x = sample_config_with(2000, &sampler, &mut trial_rng(11, t as u64));
        if is_highest(&x) {
            1.0
        } else {
            0.0
        }
    });
    let (m, se) = mean_and_se(&hits);
    let first = (m - target).abs() <= 3.0 * se;
    let uni = DensityVector::uniform(2);
    let ns: Vec<u64> = (8..=20).collect();
    let lx: Vec<f64> = ns.iter().map(|&n| (n as f64).ln()).collect();
    let ly: Vec<f64> = ns.iter().map(|&n| prob_highest_exact(n, &uni).unwrap().ln()).collect();
    let slope = ols_slope(&lx, &ly);
    let second = (-1.9..=-1.1).contains(&slope);
    (
        first && second,
        format!(
            "P̂ = {m:.4} ± {se:.4} vs (2p0-1)/p0 = {target:.4} (ruin probability 3/7 is {:.0} SE away); exact slope {slope:.3}",
            (m - 3.0 / 7.0).abs() / se
        ),
    )
}

fn conditioned_slln() -> Outcome {
    let p = DensityVector::new(vec![0.5, 0.3, 0.2]).unwrap();
    let rows = [Row { a: 1, i: 1 }, Row { a: 1, i: 2 }, Row { a: 2, i: 1 }];
    let r = estimate_rows_conditioned(20_000, &p, &rows, 50, 12, Tolerance::StdErrors(3.0), Exec::default()).unwrap();
    let detail = r
        .estimates
        .iter()
        .map(|e| format!("{} {:.5}±{:.5} (η {:.5})", e.label, e.value, e.std_err, e.target.as_ref().unwrap().value))
        .collect::<Vec<_>>()
        .join("; ");
    (r.passed(), detail)
}

fn persistence() -> Outcome {
    let p = DensityVector::two_letter(0.4).unwrap();
    let r = persistence_experiment(1, 1, &p, &[250, 500, 1000, 2000], 1_000_000, 20_000_000, 13, Exec::default()).unwrap();
    let slope_ok = (-0.6..=-0.4).contains(&r.slope);
    let rel = (r.prefactor - r.prefactor_target).abs() / r.prefactor_target;
    (
        slope_ok && rel <= 0.25,
        format!(
            "slope {:.4}; P̂(2000)√2000 = {:.4} vs γ/((1-ε)√(2π)) = {:.4} (γ² {:.4}, rel diff {:.2})",
            r.slope, r.prefactor, r.prefactor_target, r.variance.gamma2, rel
        ),
    )
}

fn main() {
    let ms = Duration::from_millis;
    let s = Duration::from_secs;
    let criteria = [
        Criterion { id: 1, name: "golden trajectory", budget: ms(1), run: golden_trajectory },
        Criterion { id: 2, name: "golden energy matrix", budget: ms(10), run: golden_energy },
        Criterion { id: 3, name: "time invariance", budget: s(10), run: time_invariance },
        Criterion { id: 4, name: "combinatorial R", budget: s(60), run: combinatorial_r_suite },
        Criterion { id: 5, name: "stationarity", budget: s(30), run: stationarity },
        Criterion { id: 6, name: "LDP anchors", budget: s(30), run: ldp_anchors },
        Criterion { id: 7, name: "Schur consistency", budget: s(30), run: schur_consistency },
        Criterion { id: 8, name: "TBA identities", budget: s(10), run: tba_identities },
        Criterion { id: 9, name: "ballot", budget: s(10), run: ballot },
        Criterion { id: 10, name: "SLLN", budget: s(60), run: slln },
        Criterion { id: 11, name: "highest-state probability", budget: s(60), run: highest_probability },
        Criterion { id: 12, name: "conditioned SLLN", budget: s(300), run: conditioned_slln },
        Criterion { id: 13, name: "persistence scaling", budget: s(600), run: persistence },
    ];
    let only: Option<u32> = std::env::var("BOXBALL_ACCEPTANCE_ONLY").ok().and_then(|v| v.parse().ok());
    let mut failed = 0;
    let mut run = 0;
    for c in criteria.iter().filter(|c| only.is_none_or(|k| k == c.id)) {
        let start = Instant::now();
        let (ok, detail) = (c.run)();
        let took = start.elapsed();
        let in_time = took <= c.budget;
        let pass = ok && in_time;
        run += 1;
        if !pass {
            failed += 1;
        }
        println!(
            "[{}] {:>2} {} ({:.3?}, budget {:?}{}): {}",
            if pass { "PASS" } else { "FAIL" },
            c.id,
            c.name,
            took,
            c.budget,
            if in_time { "" } else { ", over budget" },
            detail
        );
    }
    println!("acceptance: {}/{} passed", run - failed, run);
    if failed > 0 && std::env::var("BOXBALL_ACCEPTANCE_STRICT").is_ok_and(|v| v == "1") {
        std::process::exit(1);
    }
}
