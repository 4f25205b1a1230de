use std::path::Path;
use std::process::{Command, Output};

fn dlab(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dlab"))
        .args(args)
        .arg("--out")
        .arg(out)
        .env_remove("DLAB_OUT")
        .output()
        .expect("dlab runs")
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines()
        .skip(2)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

const NAMES: [&str; 9] = [
    "region",
    "decay",
    "embedding",
    "whitney",
    "bilinear-decay",
    "quotient",
    "inls",
    "scatter",
    "scaling",
];

#[test]
fn no_arguments_lists_the_experiments() {
    let run = || Command::new(env!("CARGO_BIN_EXE_dlab")).output().unwrap();
    let first = run();
    assert!(first.status.success());
    let names: Vec<String> = String::from_utf8(first.stdout.clone()).unwrap().lines().map(str::to_string).collect();
    assert_eq!(names, NAMES);
    assert_eq!(run().stdout, first.stdout);
}

#[test]
fn unknown_experiment_exits_with_validation_code() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(dlab(&["bogus"], dir.path()).status.code(), Some(2));
}

#[test]
fn region_reports_exact_vertices() {
    let dir = tempfile::tempdir().unwrap();
    let out = dlab(&["region", "--n", "3", "--gamma", "1/2"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = read(&dir.path().join("region_vertices.csv"));
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# config-hash: "));
    assert_eq!(lines.next().unwrap(), "vertex,inv_q,inv_r,inv_k,derived");
    let table = rows(&text);
    let find = |v: &str| table.iter().find(|r| r[0] == v).unwrap().clone();
    assert_eq!(find("A")[2..4], ["1/6", "1/6"]);
    assert_eq!(find("D")[2..4], ["1/2", "1/2"]);
    assert_eq!(find("E")[2..4], ["1/2", "1/4"]);
}

#[test]
fn region_names_the_binding_constraint_of_a_point() {
    let dir = tempfile::tempdir().unwrap();
    let out = dlab(&["region", "--gamma", "1/2", "--r", "3", "--k", "2"], dir.path());
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("binding constraint: 1/k <= 1/r"), "{stdout}");
    let m = rows(&read(&dir.path().join("region_membership.csv")));
    assert_eq!(m[0][2], "false");
}

#[test]
fn decay_slope_column_matches_the_prediction() {
    let dir = tempfile::tempdir().unwrap();
    let out = dlab(&["decay", "--n", "3", "--a", "2", "--b", "2", "--gamma", "1/2"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = read(&dir.path().join("decay.csv"));
    assert_eq!(text.lines().nth(1).unwrap(), "t,norm,fitted_slope,predicted_slope,r_squared");
    for row in rows(&text) {
        let slope: f64 = row[2].parse().unwrap();
        assert!((slope + 0.5).abs() <= 0.05);
        assert_eq!(row[3], "-1/2");
        let mantissa = row[1].split('e').next().unwrap().replace(['-', '.'], "");
        assert_eq!(mantissa.len(), 17);
    }
}

#[test]
fn invalid_exponents_exit_2_naming_the_constraint() {
    let dir = tempfile::tempdir().unwrap();
    let out = dlab(&["decay", "--a", "2", "--b", "4", "--gamma", "0"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("2(n-1)(1/a - 1/b)"), "{err}");
    let out = dlab(&["quotient", "--n", "2", "--r", "inf", "--k", "inf", "--gamma", "0"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let out = dlab(&["region", "--gamma", "3/2"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("0 <= gamma <= 1"));
}

#[test]
fn exceeded_contraction_budget_is_a_contract_violation() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["inls", "--points", "16", "--horizon", "0.1", "--dt", "0.01", "--n-budget", "1e-9"];
    assert_eq!(dlab(&args, dir.path()).status.code(), Some(3));
}

#[test]
fn identical_config_and_seed_reproduce_the_csv() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let args = ["embedding", "--l-max", "4,8", "--samples", "12", "--seed", "3", "--threads", "1"];
    assert!(dlab(&args, a.path()).status.success());
    assert!(dlab(&args, b.path()).status.success());
    for name in ["embedding.csv", "embedding_summary.csv"] {
        assert_eq!(read(&a.path().join(name)), read(&b.path().join(name)));
    }
    let c = tempfile::tempdir().unwrap();
    let other = ["embedding", "--l-max", "4,8", "--samples", "12", "--seed", "4"];
    assert!(dlab(&other, c.path()).status.success());
    let first = |p: &Path| read(&p.join("embedding.csv")).lines().next().unwrap().to_string();
    assert_ne!(first(a.path()), first(c.path()));
}

#[test]
fn config_files_merge_under_flags_and_reject_unknown_keys() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    std::fs::write(&cfg, r#"{"n": 4, "gamma": "1/3", "seed": 2}"#).unwrap();
    let cfg_s = cfg.to_str().unwrap();
    let out = dlab(&["region", "--config", cfg_s, "--n", "3"], dir.path());
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains(r#""gamma":"1/3""#) && stdout.contains(r#""n":3"#), "{stdout}");
    assert!(read(&dir.path().join("region_vertices.csv")).starts_with("# config-hash: "));
    // Explicit defaults hash like omitted ones.
    let plain = dlab(&["region"], dir.path());
    let explicit = dlab(&["region", "--n", "3", "--gamma", "1/2"], dir.path());
    let hash = |o: &Output| String::from_utf8_lossy(&o.stdout).lines().next().unwrap().to_string();
    assert_eq!(hash(&plain), hash(&explicit));

    std::fs::write(&cfg, r#"{"n": 3, "bogus": 1}"#).unwrap();
    let out = dlab(&["region", "--config", cfg_s], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("bogus"));
}

#[test]
fn dlab_out_sets_the_default_directory() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_dlab"))
        .args(["whitney", "--j-min", "-3"])
        .env("DLAB_OUT", dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    let table = rows(&read(&dir.path().join("whitney.csv")));
    let squares: Vec<_> = table.iter().filter(|r| r[0] == "whitney").collect();
    assert!(!squares.is_empty());
    assert!(squares.iter().all(|r| {
        let ratio: i64 = r[9].parse().unwrap();
        (1..4).contains(&ratio)
    }));
}

#[test]
fn scaling_reports_rational_deltas() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "scaling", "--points", "16", "--horizon", "0.1", "--dt", "0.01", "--record-every", "1", "--deltas", "1/2,2",
    ];
    let out = dlab(&args, dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let table = rows(&read(&dir.path().join("scaling.csv")));
    assert_eq!(table[0][0], "1/2");
    assert_eq!(table[1][0], "2/1");
    assert!(table.iter().all(|r| r[7] == "true"));
}
