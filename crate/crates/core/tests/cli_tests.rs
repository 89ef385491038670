use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_green-planner"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn tmp(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name)
}

#[test]
fn plan_reports_json() {
    let o = run(&["plan", "--field", "circle"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let r = &v["result"];
    assert_eq!(r["n_bs"], 3);
    assert_eq!(r["feasible"], true);
    let p = r["p_t_w"].as_f64().unwrap();
    let dbm = r["p_t_dbm"].as_f64().unwrap();
    assert!((10.0 * (p * 1000.0).log10() - dbm).abs() < 1e-9);
    assert_eq!(r["trace"].as_array().unwrap().len(), 35);
    assert_eq!(r["layout"]["points"].as_array().unwrap().len(), 3);
    assert!(v["config"].is_object());
}

#[test]
fn plan_writes_file_and_infeasible_exits_two() {
    let out = tmp("plan.json");
    let o = run(&["plan", "--field", "square", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["result"]["n_bs"], 4);

    let o = run(&["plan", "--field", "square", "--nmax", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn config_errors_exit_one() {
    let bad = tmp("bad.json");
    fs::write(&bad, "{ \"epsilon\": 0.1,,}").unwrap();
    let o = run(&["plan", "--config", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(o.stdout.is_empty());
    assert!(String::from_utf8_lossy(&o.stderr).contains("line"));

    let unknown = tmp("unknown.json");
    fs::write(&unknown, r#"{"sigma": 3}"#).unwrap();
    assert_eq!(run(&["plan", "--config", unknown.to_str().unwrap()]).status.code(), Some(1));

    assert_eq!(run(&["plan", "--epsilon", "1.5"]).status.code(), Some(1));
    assert_eq!(run(&["bogus"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn config_file_is_applied() {
    let cfg = tmp("circle.json");
    fs::write(&cfg, r#"{"field": "circle", "epsilon": 0.05, "user_mode": "moderate", "n_users": 20}"#).unwrap();
    let o = run(&["plan", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let cov = v["result"]["per_cell_coverage"].as_array().unwrap();
    assert!(cov.iter().all(|c| c.as_f64().unwrap() >= 0.95 - 0.005));
}

#[test]
fn sweep_csv() {
    let o = run(&["sweep", "--field", "circle", "--vary", "coverage", "--values", "0.90:0.99:0.01"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "vary_param,n_bs_star,p_t_star_w,p_t_star_dbm,total_power_w,feasible");
    assert_eq!(lines.len(), 11);
    let totals: Vec<f64> = lines[1..].iter().map(|l| l.split(',').nth(4).unwrap().parse().unwrap()).collect();
    assert!(totals.windows(2).all(|w| w[1] >= w[0]));
    assert!(!text.contains('\r'));

    let o = run(&["sweep", "--field", "square", "--vary", "sigma2", "--values", "-70,-60,-50"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 4);

    let o = run(&["sweep", "--vary", "sigma2", "--values", "-70,-20"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().nth(2).unwrap().ends_with(",false"));

    assert_eq!(run(&["sweep", "--vary", "alpha", "--values", ""]).status.code(), Some(1));
}

#[test]
fn dist_csv() {
    let o = run(&["dist", "--shape", "square", "--a", "500", "--d", "0", "--points", "100"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "r,cdf,pdf");
    assert_eq!(lines.len(), 101);
    let last: Vec<f64> = lines[100].split(',').map(|x| x.parse().unwrap()).collect();
    assert_eq!(last[1], 1.0);

    let o = run(&["dist", "--shape", "triangle", "--a", "500", "--d", "125", "--points", "10"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(run(&["dist", "--shape", "square", "--a", "500", "--d", "600"]).status.code(), Some(1));
}

#[test]
fn catalog_csv() {
    let o = run(&["catalog", "--field", "circle", "--nb", "3..20"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let rows: Vec<Vec<&str>> = text.lines().skip(1).map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 18);
    let kind = |n: usize| rows[n - 3][1];
    assert_eq!(kind(3), "q");
    assert_eq!(kind(6), "q");
    assert_eq!(kind(7), "q+1");
    assert_eq!(kind(17), "q+1");
    assert_eq!(kind(18), "2q");
    assert_eq!(kind(19), "q+1");
    assert_eq!(kind(20), "2q");

    let o = run(&["catalog", "--field", "square", "--nb", "12"]);
    let text = stdout(&o);
    assert_eq!(text.lines().nth(1).unwrap().split(',').take(3).collect::<Vec<_>>(), ["12", "3", "4"]);
}

#[test]
fn validate_is_reproducible() {
    let a = tmp("validate_a.txt");
    let b = tmp("validate_b.txt");
    for path in [&a, &b] {
        let o = run(&["validate", "--seed", "42", "--drops", "20000", "--out", path.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert!(fs::read_to_string(&a).unwrap().contains("PASS"));
}

#[test]
fn thread_cap_does_not_change_output() {
    let one = bin().env("GREEN_PLANNER_THREADS", "1").args(["plan", "--field", "circle", "--mode", "moderate", "--nu", "30"]).output().unwrap();
    let four = bin().env("GREEN_PLANNER_THREADS", "4").args(["plan", "--field", "circle", "--mode", "moderate", "--nu", "30"]).output().unwrap();
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, four.stdout);
}
