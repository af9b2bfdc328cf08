use serde_json::Value;

use oscphase_web::{analyze_json, plot_json, verify_json, MAX_SAMPLES};

fn json(s: Result<String, String>) -> Value {
    serde_json::from_str(&s.unwrap()).unwrap()
}

#[test]
fn analyze_reduces_classifies_and_expands() {
    let v = json(analyze_json("0", "1 - 2/x", 4));
    assert_eq!(v["verdict"]["verdict"], "Oscillates");
    assert!(v["phase"].as_str().unwrap().starts_with("x - log x + C + 1/2·x⁻¹"));
    assert!(v["phase_error"].is_null());

    let v = json(analyze_json("2", "1", 4));
    assert_eq!(v["q"], "0");
    assert_eq!(v["verdict"]["verdict"], "NonOscillating");
    assert!(v["phase"].is_null());
    assert!(v["phase_error"].is_string());

    let v = json(analyze_json("0", "1/(2*x^2)", 4));
    assert!(v["summary"].as_str().unwrap().starts_with("Oscillates (CriticalCoefficient)"));
}

#[test]
fn analyze_reports_parse_errors() {
    let e = analyze_json("0", "1/(x", 4).unwrap_err();
    assert!(e.starts_with("b: "), "{e}");
}

#[test]
fn plot_of_sine() {
    let v = json(plot_json("1", 0.0, 10.0, 101));
    let t = v["t"].as_array().unwrap();
    let y = v["y"].as_array().unwrap();
    let env = v["v"].as_array().unwrap();
    assert_eq!(t.len(), 101);
    for i in 0..t.len() {
        let ti = t[i].as_f64().unwrap();
        assert!((y[i].as_f64().unwrap() - ti.sin()).abs() < 1e-7);
        assert!((env[i].as_f64().unwrap() - 1.0).abs() < 1e-7);
    }
    let zeros: Vec<f64> = v["zeros"].as_array().unwrap().iter().map(|z| z.as_f64().unwrap()).collect();
    assert_eq!(zeros.len(), 4);
    for (n, z) in zeros.iter().enumerate() {
        assert!((z - n as f64 * std::f64::consts::PI).abs() < 1e-8);
    }
}

#[test]
fn plot_envelope_touches_humps() {
    let v = json(plot_json("x", 20.0, 60.0, 20_000));
    let f = |k: &str| -> Vec<f64> { v[k].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect() };
    let (t, y, env, zeros) = (f("t"), f("y"), f("v"), f("zeros"));
    assert!(zeros.len() > 70);
    for w in zeros.windows(2) {
        let hump = (0..t.len()).filter(|&i| t[i] > w[0] && t[i] < w[1]);
        let peak = hump.map(|i| y[i].abs() / env[i]).fold(0.0, f64::max);
        assert!((peak - 1.0).abs() < 1e-3, "hump ({}, {}): {peak}", w[0], w[1]);
    }
    let v = json(plot_json("1", 0.0, 1.0, 10 * MAX_SAMPLES));
    assert_eq!(v["t"].as_array().unwrap().len(), MAX_SAMPLES);
}

#[test]
fn plot_errors() {
    assert!(plot_json("1", 5.0, 1.0, 10).unwrap_err().contains("invalid window"));
    assert!(plot_json("1/(x-3)", 1.0, 5.0, 10).unwrap_err().contains("pole"));
}

#[test]
fn verify_power_law() {
    let v = json(verify_json("x", 1.0, 500.0, 4));
    assert_eq!(v["passed"], true);
    let checks = v["checks"].as_array().unwrap();
    assert!(checks.iter().any(|c| c["name"] == "leading_law" && c["status"] == "Pass"));
    assert!(v["zeros"].as_u64().unwrap() > 50);
}
