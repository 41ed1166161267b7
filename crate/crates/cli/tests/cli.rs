use std::process::{Command, Output};

fn frio(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_frio")).args(args).output().expect("binary runs")
}

fn rows(out: &Output) -> (String, Vec<Vec<String>>) {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    let mut lines = text.lines();
    let header = lines.next().expect("header").to_string();
    let body = lines.map(|l| l.split(',').map(str::to_string).collect()).collect();
    (header, body)
}

fn num(s: &str) -> f64 {
    s.parse().unwrap()
}

#[test]
fn trine_curve_switches_to_the_tail() {
    let (header, body) = rows(&frio(&["curve-trine", "--theta", "0.314159265", "--steps", "101"]));
    assert_eq!(header, "q,pe_min,pe_conditional,regime");
    assert_eq!(body.len(), 101);
    let first_tail = body.iter().position(|r| r[3] == "linear-tail").unwrap();
    let q_before = num(&body[first_tail - 1][0]);
    let q_after = num(&body[first_tail][0]);
    assert!(q_before < 0.809017 && 0.809017 <= q_after);
    for r in &body[first_tail..] {
        assert!((num(&r[2]) - 1.0 / 3.0).abs() < 1e-9, "{r:?}");
    }
    assert_eq!(body[0][3], "me-point");
}

#[test]
fn regions_cross_at_the_boundaries() {
    let (header, body) = rows(&frio(&["regions", "--cos-theta", "0.5", "--steps", "201"]));
    assert_eq!(header, "eta1,q_c,q_th,region");
    assert_eq!(body.len(), 199);
    let crossings: Vec<f64> = body
        .windows(2)
        .filter(|w| w[0][3] != w[1][3])
        .map(|w| num(&w[1][0]))
        .collect();
    assert_eq!(crossings.len(), 2);
    // Region II starts at 0.2 and region III starts just after 0.8.
    assert!((crossings[0] - 0.2).abs() < 1e-12);
    assert!((crossings[1] - 0.805).abs() < 1e-12);
    for r in &body {
        let eta = num(&r[0]);
        if (eta - 0.2).abs() < 1e-12 || (eta - 0.8).abs() < 1e-12 {
            assert!((num(&r[1]) - num(&r[2])).abs() < 1e-12, "{r:?}");
        }
    }
}

#[test]
fn compare_agrees_with_the_oracle() {
    let (header, body) = rows(&frio(&["compare", "--eta1", "0.5", "--cos-theta", "0.5", "--steps", "51"]));
    assert_eq!(header, "q,pe_closed,pe_oracle,delta,status");
    assert_eq!(body.len(), 51);
    for r in &body {
        assert!(num(&r[3]).abs() < 1e-3, "{r:?}");
        assert_eq!(r[4], "ok");
    }
}

#[test]
fn compare_json_summary() {
    let out = frio(&["compare", "--theta", "0.4", "--steps", "4", "--grid-size", "120", "--json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["points"], 4);
    assert_eq!(v["all_ok"], true);
    assert!(v["max_abs_delta"].as_f64().unwrap() < 1e-3);
}

#[test]
fn simulate_reports_small_z_scores() {
    let args = ["simulate", "--eta1", "0.3", "--cos-theta", "0.6", "--q-max", "1", "--steps", "5", "--trials", "200000"];
    let (header, body) = rows(&frio(&args));
    assert_eq!(header, "q,ref_ps,ref_pe,ref_q,emp_ps,emp_pe,emp_q,z_ps,z_pe,z_q");
    assert_eq!(body.len(), 5);
    for r in &body {
        assert!(r[7..].iter().all(|z| num(z).abs() < 5.0), "{r:?}");
        assert!((num(&r[0]) - num(&r[3])).abs() < 1e-9);
    }
}

#[test]
fn output_is_deterministic_and_can_go_to_a_file() {
    let path = std::env::temp_dir().join(format!("frio-cli-test-{}.csv", std::process::id()));
    let p = path.to_str().unwrap();
    let args = ["simulate", "--theta", "0.5", "--steps", "3", "--trials", "50000", "--seed", "9"];
    let piped = frio(&args);
    let written = frio(&[&args[..], &["--output", p]].concat());
    assert!(written.status.success() && written.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), piped.stdout);
    std::fs::remove_file(&path).ok();
}

#[test]
fn invalid_parameters_exit_with_usage_status() {
    for args in [
        &["curve-trine", "--theta", "0.9"][..],
        &["curve-trine", "--theta", "0"],
        &["curve-two-pure", "--eta1", "1.5", "--cos-theta", "0.5"],
        &["curve-two-pure", "--eta1", "0.5", "--cos-theta", "0.5", "--steps", "1"],
        &["regions", "--cos-theta", "-0.2"],
        &["compare", "--eta1", "0.5"],
        &["simulate", "--theta", "0.3", "--trials", "0"],
        &["bogus"],
    ] {
        let out = frio(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}
