use std::fs;
use std::process::{Command, Output};

fn cergraph(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cergraph"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn identical_copies_have_zero_conditional_entropy() {
    let o = cergraph(&["entropy", "--model", "subsampling", "--p", "0.5", "--gamma", "1"]);
    assert!(o.status.success());
    assert!(stdout(&o).lines().any(|l| l == "H(A|B)=0"), "{}", stdout(&o));
}

#[test]
fn oracle_lists_three_vertex_structures() {
    let o = cergraph(&["oracle", "--n", "3", "--k", "1"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("structures=4\n"));
    let counts: Vec<u64> = text
        .lines()
        .filter_map(|l| l.split("labelings=").nth(1))
        .map(|v| v.parse().unwrap())
        .collect();
    assert_eq!(counts, [1, 3, 3, 1]);
    assert!(text.ends_with("labelled_graphs=8\n"));
}

#[test]
fn zero_trials_is_a_config_error() {
    let o = cergraph(&["codec-sim", "--n", "3", "--trials", "0"]);
    assert_eq!(o.status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sim.json");
    fs::write(&cfg, r#"{"n": 3, "trials": 0}"#).unwrap();
    let o = cergraph(&["codec-sim", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn exit_codes_by_failure_kind() {
    assert_eq!(cergraph(&["oracle", "--n", "11"]).status.code(), Some(3));
    assert_eq!(cergraph(&["no-such-command"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{not json").unwrap();
    assert_eq!(
        cergraph(&["experiment", "--config", bad.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
    let missing = dir.path().join("missing.json");
    assert_eq!(
        cergraph(&["experiment", "--config", missing.to_str().unwrap()])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn codec_sim_is_reproducible_across_worker_counts() {
    let args = [
        "codec-sim",
        "--n",
        "4",
        "--trials",
        "40",
        "--gamma",
        "0.9",
        "--seed",
        "11",
    ];
    let a = cergraph(&args);
    let mut one = args.to_vec();
    one.extend(["--workers", "1"]);
    let b = cergraph(&one);
    assert!(a.status.success() && b.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).starts_with("variant,n,R,delta,seed,trials,"));
}

#[test]
fn flags_take_precedence_over_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sim.json");
    let csv = dir.path().join("out.csv");
    fs::write(
        &cfg,
        r#"{"n": 3, "trials": 5, "variant": "structure-given-structure", "seed": 3}"#,
    )
    .unwrap();
    let o = cergraph(&[
        "codec-sim",
        "--config",
        cfg.to_str().unwrap(),
        "--trials",
        "9",
        "--output",
        csv.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let text = fs::read_to_string(&csv).unwrap();
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[0], "structure-given-structure");
    assert_eq!(row[4], "3");
    assert_eq!(row[5], "9");
}

#[test]
fn sample_then_deanonymize() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let s = cergraph(&[
        "sample", "--n", "5", "--p", "0.5", "--gamma", "0.99", "--seed", "2", "--output", d,
    ]);
    assert!(s.status.success());
    let ga = dir.path().join("ga.txt");
    let gb = dir.path().join("gb.txt");
    let o = cergraph(&[
        "deanonymize",
        "--ga",
        ga.to_str().unwrap(),
        "--gb",
        gb.to_str().unwrap(),
        "--gamma",
        "0.99",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("5 1\n"));
    assert!(text.contains("recovered="));

    let a = cergraph(&["align", "--ga", ga.to_str().unwrap(), "--gb", gb.to_str().unwrap()]);
    let value: u64 = stdout(&a)
        .lines()
        .next()
        .unwrap()
        .trim_start_matches("value=")
        .parse()
        .unwrap();
    let identity: u64 = stdout(&a)
        .lines()
        .last()
        .unwrap()
        .trim_start_matches("identity_value=")
        .parse()
        .unwrap();
    assert!(value >= identity);
}

#[test]
fn sample_is_seeded() {
    let a = cergraph(&["sample", "--n", "6", "--seed", "5", "--trial", "2"]);
    let b = cergraph(&["sample", "--n", "6", "--seed", "5", "--trial", "2"]);
    let c = cergraph(&["sample", "--n", "6", "--seed", "6", "--trial", "2"]);
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn experiment_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("exp.json");
    let csv = dir.path().join("sandwich.csv");
    fs::write(&cfg, r#"{"kind": "SandwichCheck", "n_list": [3, 4]}"#).unwrap();
    let o = cergraph(&[
        "experiment",
        "--config",
        cfg.to_str().unwrap(),
        "--output",
        csv.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 13);
    assert!(text.lines().skip(1).all(|l| l.ends_with(",true")));
}
