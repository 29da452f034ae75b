use std::process::{Command, Output};

const T0: &str = "1 1 2 1 4 0 1 0 1 2 1 4 2 0 4 4 2 0 1 2";

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_boxball"))
        .args(args)
        .env_remove("BOXBALL_SEED")
        .output()
        .expect("binary runs")
}

fn body(out: &Output) -> Vec<String> {
    String::from_utf8(out.stdout.clone())
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(String::from)
        .collect()
}

#[test]
fn evolve_reproduces_trajectory() {
    let out = run(&["evolve", "--config", T0, "--kappa", "4", "--steps", "6"]);
    assert!(out.status.success());
    let lines = body(&out);
    assert_eq!(lines.len(), 7);
    assert_eq!(lines[0], T0);
    assert_eq!(lines[3], "0 0 0 0 1 0 2 4 0 1 0 1 0 0 0 2 1 0 2 4 0 0 0 1 1 1 0 4 4 2 2");
    assert_eq!(lines[6], "0 0 0 0 0 0 0 1 0 2 4 0 1 0 1 0 0 0 0 0 1 2 0 4 2 0 0 0 0 0 0 0 1 1 1 0 0 0 0 4 4 2 2");
}

#[test]
fn evolve_zero_steps_and_empty() {
    assert_eq!(body(&run(&["evolve", "--config", "1203", "--steps", "0"])), vec!["1 2 0 3"]);
    assert_eq!(body(&run(&["evolve", "--config", "", "--kappa", "2", "--steps", "2"])), vec!["", "", ""]);
}

#[test]
fn evolve_parse_error_reports_column() {
    let out = run(&["evolve", "--config", "12x3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("column 3"));
}

#[test]
fn header_records_provenance() {
    let out = run(&["--seed", "9", "ballot", "--m", "3,1"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let head: Vec<&str> = text.lines().take(4).collect();
    assert_eq!(head[0], "# command: ballot");
    assert_eq!(head[1], "# flags: --seed 9 ballot --m 3,1");
    assert_eq!(head[2], "# seed: 9");
    assert!(head[3].starts_with("# version: boxball "));
}

#[test]
fn energy_running_example() {
    let lines = body(&run(&["energy", "--config", "11214010121420442012"]));
    assert_eq!(&lines[..6], ["c,E1,E2,E3,E4", "1,10,5,2,1", "2,13,7,3,2", "3,15,8,4,3", "4,16,9,4,4", "5,16,9,4,4"]);
    let rho: Vec<&str> = lines[7..].iter().map(String::as_str).collect();
    assert_eq!(rho.len(), 15);
    assert_eq!(rho[0], "1,1,10");
    assert_eq!(rho[14], "4,4,1");
}

#[test]
fn energy_of_empty_configuration() {
    let lines = body(&run(&["energy", "--config", "000", "--kappa", "2"]));
    assert_eq!(lines, ["c,E1,E2", "a,i,rho"]);
}

#[test]
fn energy_vacancies() {
    // Solitons of lengths 1 and 2 in 20 cells: E_1 = 2, E_2 = 3, v_i = 20 - 2 E_i.
    let lines = body(&run(&["energy", "--config", "1011", "--kappa", "1", "--n", "20"]));
    let vac = lines.iter().position(|l| l == "i,v1").unwrap();
    assert_eq!(&lines[vac + 1..], ["1,16", "2,14", "inf,14"]);
}

#[test]
fn ballot_counts() {
    assert_eq!(body(&run(&["ballot", "--m", "2,1"])), vec!["2"]);
    let out = run(&["ballot", "--m", "3,3,2", "--brute"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(body(&out)[0], "42");
    assert_eq!(run(&["ballot", "--m", "1,2"]).status.code(), Some(2));
}

#[test]
fn ldp_uniform_rate_vanishes_at_mean() {
    let out = run(&["ldp", "--kappa", "2", "--c", "1", "--a", "1", "--uniform"]);
    assert!(out.status.success());
    let rows: Vec<(f64, f64)> = body(&out)[1..]
        .iter()
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (f[0].parse().unwrap(), f[1].parse().unwrap())
        })
        .collect();
    let (u, rate) = rows.iter().min_by(|a, b| (a.0 - 1.0 / 3.0).abs().total_cmp(&(b.0 - 1.0 / 3.0).abs())).unwrap();
    assert!((u - 1.0 / 3.0).abs() < 1e-9);
    assert!(*rate < 1e-10);
    assert!(rows.iter().all(|r| r.1 >= -1e-12));
}

#[test]
fn shape_half_density_curve() {
    let lines = body(&run(&["shape", "--kappa", "1", "--p1", "0.5", "--i-max", "3"]));
    assert_eq!(lines, ["a,i,eta", "1,1,0.25", "1,2,0.0833333333333", "1,3,0.0416666666667"]);
}

#[test]
fn check_modes_set_exit_code() {
    let pass = run(&["tba", "--q", "0.5", "--kappa", "3", "--check"]);
    assert_eq!(pass.status.code(), Some(0));
    let fail = run(&["shape", "--uniform", "--kappa", "2", "--n", "200", "--tol", "1e-9"]);
    assert_eq!(fail.status.code(), Some(1));
    let usage = run(&["shape", "--p1", "0.5", "--uniform"]);
    assert_eq!(usage.status.code(), Some(2));
    let bad = run(&["mc", "--p", "0.2,0.8", "--n", "10", "--highest"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn deterministic_bodies() {
    let args = ["mc", "--p", "0.5,0.3,0.2", "--n", "500", "--trials", "20", "--rows", "1:1,2:1"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    let c = run(&["--threads", "1", args[0], args[1], args[2], args[3], args[4], args[5], args[6], args[7], args[8]]);
    assert_eq!(body(&a), body(&c));
    let env = Command::new(env!("CARGO_BIN_EXE_boxball")).args(args).env("BOXBALL_SEED", "1").output().unwrap();
    assert_eq!(body(&a), body(&env));
    let other = Command::new(env!("CARGO_BIN_EXE_boxball")).args(args).env("BOXBALL_SEED", "2").output().unwrap();
    assert_ne!(body(&a), body(&other));
}

#[test]
fn highest_check_and_svg() {
    let dir = std::env::temp_dir().join(format!("boxball-golden-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let svg = dir.join("shape.svg");
    let out = run(&["highest", "--p1", "0.3", "--n", "40", "--trials", "4000"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(body(&out).contains(&"pass,true".to_string()));
    let out = run(&["--svg", svg.to_str().unwrap(), "shape", "--p1", "0.5", "--n", "1000"]);
    assert!(out.status.success());
    assert!(std::fs::read_to_string(&svg).unwrap().starts_with("<svg"));
    std::fs::remove_dir_all(&dir).unwrap();
}
