use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

use oscphase::exactalg::parse_ratfun;
use oscphase::numlab::{ZeroReport, CSV_HEADER};
use oscphase::oscillate::{classify, OscVerdict, Verdict};
use oscphase::phaseseries::PhaseExpansion;
use oscphase_cli::{phase_of, Envelope, Reduction};

fn oscphase(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_oscphase")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn ok(args: &[&str]) -> String {
    let o = oscphase(args);
    assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stderr(&o));
    stdout(&o)
}

fn data(args: &[&str]) -> Value {
    let mut v: Value = serde_json::from_str(&ok(args)).unwrap();
    v["data"].take()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("oscphase-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn classify_examples() {
    assert!(ok(&["classify", "--q", "1"]).starts_with("Oscillates"));
    assert!(ok(&["classify", "--q", "-x"]).starts_with("NonOscillating"));
    assert!(ok(&["classify", "--q", "1/(4*x^2)"]).starts_with("NonOscillating"));
    assert!(ok(&["classify", "--q", "1/(2*x^2)"]).starts_with("Oscillates (CriticalCoefficient)"));
}

#[test]
fn reduce_examples() {
    let cheb = ok(&["reduce", "--a", "x/(x^2-1)", "--b", "1/(x^2-1)"]);
    assert_eq!(
        parse_ratfun(cheb.trim()).unwrap(),
        parse_ratfun("((5/4)*x^2 - 1/2)/(x^2-1)^2").unwrap()
    );
    assert_eq!(ok(&["reduce", "--a", "0", "--b", "x"]), "x\n");
    assert_eq!(ok(&["reduce", "--a", "2", "--b", "1"]), "0\n");
}

#[test]
fn phase_examples() {
    assert!(ok(&["phase", "--q", "1 - 2/x", "--order", "4"]).starts_with("x - log x + C + 1/2·x⁻¹ + 0·x⁻² "));
    assert_eq!(ok(&["phase", "--q", "1"]), "x + C\n");
    assert_eq!(ok(&["phase", "--q", "4"]), "2x + C\n");
}

#[test]
fn exit_codes() {
    let o = oscphase(&["verify", "--q", "x", "--tol", "1e-2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("integration unreliable"));

    let o = oscphase(&["classify", "--q", "1/(x"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("position 4"), "{}", stderr(&o));

    assert_eq!(oscphase(&["classify", "--q", "1", "--a", "x"]).status.code(), Some(2));
    assert_eq!(oscphase(&["classify"]).status.code(), Some(2));
    assert_eq!(oscphase(&["verify", "--q", "x", "--window", "5:1"]).status.code(), Some(2));
    assert_eq!(oscphase(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(oscphase(&["classify", "--q", "1", "--format", "csv"]).status.code(), Some(2));

    let o = oscphase(&["phase", "--q", "x"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("positive constant"));
    assert_eq!(oscphase(&["verify", "--q", "1/(x-3)", "--window", "1:5"]).status.code(), Some(3));
}

#[test]
fn verify_cauchy_euler() {
    let args = ["verify", "--q", "1/(2*x^2)", "--window", "1:1e12", "--format", "json"];
    let d = data(&args);
    let checks = d["checks"].as_array().unwrap();
    let ratio = checks.iter().find(|c| c["name"] == "log_law_ratio").unwrap();
    assert_eq!(ratio["status"], "Pass");
    assert!(ratio["detail"].as_str().unwrap().contains("535.49"));
    assert_eq!(d["passed"], true);
}

#[test]
fn verify_power_law() {
    let out = ok(&["verify", "--q", "x"]);
    assert!(out.contains("PASS leading_law"), "{out}");
    assert!(out.ends_with("result: PASS\n"));
}

#[test]
fn failing_check_exits_one() {
    // the leading law is asymptotic: the first zeros of cos are far from n pi
    let o = oscphase(&["verify", "--q", "1", "--window", "0:20"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL leading_law"));
}

#[test]
fn json_round_trips() {
    let v: OscVerdict = serde_json::from_value(data(&["classify", "--q", "1/(2*x^2)", "--format", "json"])).unwrap();
    assert_eq!(v, classify(&parse_ratfun("1/(2*x^2)").unwrap()));
    assert_eq!(v.verdict, Verdict::Oscillates);

    let r: Reduction = serde_json::from_value(data(&["reduce", "--a", "2", "--b", "1", "--format", "json"])).unwrap();
    assert_eq!(r.q, parse_ratfun("0").unwrap());

    let ph: PhaseExpansion = serde_json::from_value(data(&["phase", "--q", "1 - 2/x", "--format", "json"])).unwrap();
    assert_eq!(ph, phase_of(&parse_ratfun("1 - 2/x").unwrap(), 4).unwrap());

    let text = ok(&["verify", "--q", "1 + 1/x", "--window", "10:200", "--format", "json"]);
    let env: Envelope<ZeroReport> = serde_json::from_str(&text).unwrap();
    let again = serde_json::to_value(&env.data).unwrap();
    let orig: Value = serde_json::from_str::<Value>(&text).unwrap()["data"].clone();
    assert_eq!(again, orig);
    assert!(env.data.passed);
    assert_eq!(env.metadata.tool, "oscphase");
}

#[test]
fn deterministic_data() {
    let args = ["zeros", "--q", "1 - 2/x", "--window", "20:300", "--format", "json"];
    assert_eq!(data(&args), data(&args));
    let a: Value = serde_json::from_str(&ok(&args)).unwrap();
    assert!(a["metadata"]["elapsed_ms"].is_number());
    assert!(a["data"].get("elapsed_ms").is_none());
}

#[test]
fn csv_columns() {
    let csv = ok(&["zeros", "--q", "x", "--window", "1:100", "--format", "csv", "--report-last", "10"]);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], CSV_HEADER);
    assert_eq!(lines[0], "n,s_n,s_hat_n,t_n,abs_y_t_n,v_t_n");
    assert_eq!(lines.len(), 11);
    for l in &lines[1..] {
        let cells: Vec<&str> = l.split(',').collect();
        assert_eq!(cells.len(), 6);
        let s: f64 = cells[1].parse().unwrap();
        if cells[3].is_empty() {
            // no critical point left in the window
            assert_eq!(l, lines.last().unwrap());
            continue;
        }
        let t: f64 = cells[3].parse().unwrap();
        let y: f64 = cells[4].parse().unwrap();
        let v: f64 = cells[5].parse().unwrap();
        assert!(t > s);
        assert!((y - v).abs() / v < 1e-6);
    }
}

#[test]
fn config_file_with_flag_override() {
    let dir = scratch("config");
    let cfg = dir.join("job.toml");
    std::fs::write(&cfg, "q = \"1/(2*x^2)\"\nwindow = \"1:1e12\"\nformat = \"json\"\ntol = 1e-9\n").unwrap();
    let c = cfg.to_str().unwrap();
    let d = data(&["verify", "--config", c]);
    assert_eq!(d["tol"], 1e-9);
    let d = data(&["verify", "--config", c, "--tol", "1e-10"]);
    assert_eq!(d["tol"], 1e-10);
    let text = ok(&["classify", "--config", c, "--format", "text"]);
    assert!(text.starts_with("Oscillates"));

    std::fs::write(&cfg, "colour = 3\n").unwrap();
    assert_eq!(oscphase(&["classify", "--config", c]).status.code(), Some(2));
}

#[test]
fn out_file_and_report_directory() {
    let dir = scratch("out");
    let file = dir.join("phase.txt");
    assert_eq!(ok(&["phase", "--q", "4", "--out", file.to_str().unwrap()]), "");
    assert_eq!(std::fs::read_to_string(&file).unwrap(), "2x + C\n");

    let rep = dir.join("report");
    let out = ok(&["report", "--q", "(x^2 - 3/x^2)/4", "--window", "1:30", "--out", rep.to_str().unwrap()]);
    assert!(out.contains("result: PASS"), "{out}");
    let json: Value = serde_json::from_str(&std::fs::read_to_string(rep.join("report.json")).unwrap()).unwrap();
    assert_eq!(json["command"], "report");
    let csv = std::fs::read_to_string(rep.join("zeros.csv")).unwrap();
    assert!(csv.starts_with(CSV_HEADER));
    let fig = std::fs::read_to_string(rep.join("figure.dat")).unwrap();
    assert!(fig.starts_with("# t y -y v"));
    assert_eq!(fig.lines().count(), 2002);
}
