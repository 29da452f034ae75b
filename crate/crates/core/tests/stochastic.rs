//! Monte Carlo estimates checked against exact values.

use boxball::exec::Exec;
use boxball::highest::{is_highest, prob_highest_exact, sample_highest, DEFAULT_BUDGET};
use boxball::ldp::{sum_distribution, CumulantGenerator, Functional, StateSpace};
use boxball::mc::{
    batch_means_variance, empirical_shape, fclt_samples, jarque_bera, limiting_variance, limiting_variance_batch_means,
    mean_and_se, persistence_experiment, regeneration_blocks, regenerative_variance, sample_config, shape_curve,
    shape_deviation, trial_rng, ChainSim, LetterSampler,
};
use boxball::DensityVector;
use rand::Rng;

#[test]
fn highest_probability_matches_sampling() {
    let p = DensityVector::new(vec![0.5, 0.3, 0.2]).unwrap();
    let trials = 20_000u64;
    for n in [5usize, 20, 50] {
        let hits = (0..trials).filter(|&t| is_highest(&sample_config(n, &p, 100 + t))).count() as f64;
        let f = hits / trials as f64;
        let se = (f * (1.0 - f) / trials as f64).sqrt();
        let exact = prob_highest_exact(n as u64, &p).unwrap();
        assert!((f - exact).abs() < 4.0 * se, "n={n}: {f} vs {exact}");
    }
}

#[test]
fn rejection_rate_tracks_limit() {
    let p = DensityVector::two_letter(0.3).unwrap();
    let (mut attempts, runs) = (0u64, 400u64);
    for s in 0..runs {
        let (x, stats) = sample_highest(400, &p, s, DEFAULT_BUDGET).unwrap();
        assert!(is_highest(&x));
        attempts += stats.attempts;
    }
    let rate = runs as f64 / attempts as f64;
    let exact = prob_highest_exact(400, &p).unwrap();
    assert!((rate - exact).abs() < 0.05, "{rate} vs {exact}");
}

#[test]
fn empirical_shape_near_limit() {
    let p = DensityVector::new(vec![0.5, 0.3, 0.2]).unwrap();
    let limit = shape_curve(&p, 12);
    let emp = empirical_shape(200_000, &p, 7).unwrap();
    for a in 1..=2 {
        let d = shape_deviation(&limit, &emp, a, 12);
        assert!(d < 0.01, "a={a}: {d}");
    }
}

#[test]
fn variance_estimators_agree() {
    let p = DensityVector::new(vec![0.5, 0.3, 0.2]).unwrap();
    let sim = ChainSim::for_energy(2, 1, &p, 1 << 20).unwrap();
    let reg = regenerative_variance(&regeneration_blocks(&sim, 2_000_000, 8, 3, Exec::default())).unwrap();
    assert!(reg.gamma2 > 0.0);
    let bm = limiting_variance_batch_means(&sim, 10_000_000, 100, 4);
    assert!((bm / reg.gamma2 - 1.0).abs() < 0.1, "{bm} vs {}", reg.gamma2);
    // Independent letters: batch means of a Bernoulli(0.3) variable.
    let mut rng = trial_rng(5, 0);
    let sums: Vec<f64> = (0..400).map(|_| (0..2500).filter(|_| rng.random::<f64>() < 0.3).count() as f64).collect();
    let v = batch_means_variance(&sums, 2500);
    assert!((v - 0.21).abs() < 0.03, "{v}");
}

#[test]
fn lower_tail_matches_rate_function() {
    let p = [1.0 / 3.0; 3];
    let space = StateSpace::single(1, 1, 2, 1 << 20).unwrap();
    let gen = CumulantGenerator::for_chain(&space, &p, Functional::Energy).unwrap();
    let n = 200;
    let (offset, law) = sum_distribution(&space, &p, Functional::Energy, n).unwrap();
    let tail = |u: f64| -> f64 {
        law.iter()
            .enumerate()
            .filter(|(k, _)| ((offset + *k as i64) as f64) <= u * n as f64)
            .map(|(_, w)| w)
            .sum()
    };
    let slack = (n as f64).ln() / n as f64;
    for u in [0.30, 0.25, 0.20] {
        let rate = gen.legendre(u).unwrap().value();
        let emp = -tail(u).ln() / n as f64;
        assert!((emp - rate).abs() < slack, "u={u}: {emp} vs {rate}");
    }
    // Monte Carlo agrees with the exact tail at u = 0.30.
    let sampler = LetterSampler::new(&DensityVector::uniform(2));
    let trials = 200_000usize;
    let hits = Exec::default().map_range(trials, |t| {
        let mut rng = trial_rng(11, t as u64);
        let x = boxball::mc::sample_config_with(n, &sampler, &mut rng);
        (boxball::carrier::row_energy(&x, 1, 1).unwrap() as f64 <= 0.30 * n as f64) as u8 as f64
    });
    let (f, se) = mean_and_se(&hits);
    assert!((f - tail(0.30)).abs() < 4.0 * se, "{f} ± {se} vs {}", tail(0.30));
}

#[test]
fn survival_decreases_in_n() {
    let p = DensityVector::new(vec![0.5, 0.3, 0.2]).unwrap();
    let r = persistence_experiment(1, 1, &p, &[50, 100, 200, 400], 20_000, 1_000_000, 9, Exec::default()).unwrap();
    assert!(r.survival.windows(2).all(|w| w[1] <= w[0]), "{:?}", r.survival);
    assert!(r.slope < 0.0);
}

#[test]
fn normalized_sums_look_gaussian() {
    let p = DensityVector::new(vec![0.5, 0.3, 0.2]).unwrap();
    let v = limiting_variance(1, 1, &p, 5_000_000, 21, Exec::default()).unwrap();
    let xs = fclt_samples(1, 1, &p, 10_000, 4_000, v.gamma2, 22, Exec::default()).unwrap();
    let (m, se) = mean_and_se(&xs);
    assert!(m.abs() < 4.0 * se, "{m} ± {se}");
    let var = xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (xs.len() - 1) as f64;
    assert!((var - 1.0).abs() < 0.1, "{var}");
    assert!(jarque_bera(&xs).passes(0.001));
}
