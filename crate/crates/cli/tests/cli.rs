use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn lab(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_uavsec-lab"))
        .args(args)
        .arg("--out")
        .arg(dir)
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, text: &str) -> String {
    let p = dir.join("cfg.toml");
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

const TAYLOR: &str = "[truncation]\nform = \"taylor\"\nd = 60\nr = 60\nq = 60\n";

#[test]
fn unit_weight_series_validate_cleanly() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), TAYLOR);
    for metric in ["cp", "sop"] {
        let out = lab(dir.path(), &["validate", metric, "--config", &cfg]);
        assert_eq!(out.status.code(), Some(0), "{metric}: {}", String::from_utf8_lossy(&out.stdout));
        let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join(format!("validate_{metric}.json"))).unwrap()).unwrap();
        assert_eq!(report["passed"], true);
        assert_eq!(report["rows"].as_array().unwrap().len(), 5);
        assert_eq!(report["run"]["frames"], 100_000);
    }
}

#[test]
fn tolerance_failure_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    // Depth-1 series cannot match the simulation.
    let out = lab(dir.path(), &["validate", "cp", "--truncation", "1,1,1", "--frames", "20000"]);
    assert_eq!(out.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("validate_cp.json")).unwrap()).unwrap();
    assert_eq!(report["passed"], false);
    assert_eq!(report["run"]["truncation"], serde_json::json!([1, 1, 1]));
}

#[test]
fn configuration_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    for text in ["[protocol]\npower_w = 10\n", "[geometry]\nrelay = [1, 2]\n", "[protocol]\nbeta = 2.0\n", "frames = 10\n"] {
        let cfg = write_config(dir.path(), text);
        let out = lab(dir.path(), &["sweep", "power", "--config", &cfg]);
        assert_eq!(out.status.code(), Some(2), "{text}");
    }
    let out = lab(dir.path(), &["sweep", "power", "--config", "/nonexistent/cfg.toml"]);
    assert_eq!(out.status.code(), Some(2));
    let out = lab(dir.path(), &["sweep", "power", "--truncation", "3,3"]);
    assert_eq!(out.status.code(), Some(2));
    let out = lab(dir.path(), &["sweep", "altitude", "--baseline", "ground_relay"]);
    assert_eq!(out.status.code(), Some(2));
    let out = lab(dir.path(), &["sweep", "lambda_beta", "--baseline", "uav_no_cj"]);
    assert_eq!(out.status.code(), Some(2));
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_path(path).unwrap();
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r.records().map(|rec| rec.unwrap().iter().map(String::from).collect()).collect();
    (header, rows)
}

#[test]
fn sweeps_are_byte_identical_and_self_describing() {
    let dir = tempfile::tempdir().unwrap();
    let small = "[sweep]\npower_dbw = [10.0, 20.0]\naltitude_betas = [0.5, 0.75]\n\
                 [sweep.lambda]\nmin = 0.2\nmax = 0.8\npoints = 3\n\
                 [sweep.beta]\nmin = 0.3\nmax = 0.7\npoints = 2\n\
                 [sweep.horizontal]\nmin = 0.1\nmax = 0.9\npoints = 3\n\
                 [sweep.altitude]\nmin = 1.0\nmax = 3.0\npoints = 3\n\
                 [sweep.opsa_lambda]\nmin = 0.1\nmax = 0.9\npoints = 5\n";
    let cfg = write_config(dir.path(), small);
    for (kind, file, rows) in [
        ("power", "sweep_power.csv", 2),
        ("lambda_beta", "sweep_lambda_beta.csv", 6),
        ("placement", "sweep_placement.csv", 6),
        ("altitude", "sweep_altitude.csv", 6),
    ] {
        let args = ["sweep", kind, "--config", &cfg, "--seed", "17", "--frames", "3000"];
        assert_eq!(lab(dir.path(), &args).status.code(), Some(0), "{kind}");
        let first = fs::read(dir.path().join(file)).unwrap();
        assert_eq!(lab(dir.path(), &args).status.code(), Some(0));
        assert_eq!(first, fs::read(dir.path().join(file)).unwrap(), "{kind} output changed between runs");

        let (header, body) = read_csv(&dir.path().join(file));
        assert_eq!(body.len(), rows, "{kind}");
        let seed = header.iter().position(|h| h == "seed").unwrap();
        let frames = header.iter().position(|h| h == "frames").unwrap();
        for row in &body {
            assert_eq!((row[seed].as_str(), row[frames].as_str()), ("17", "3000"));
            for cell in row {
                if let Ok(x) = cell.parse::<f64>() {
                    let mantissa = cell.trim_start_matches('-').split('e').next().unwrap().replace('.', "");
                    let digits = mantissa.trim_start_matches('0').len();
                    assert!(digits <= 9 || x.fract() == 0.0, "{cell} has more than 9 significant digits");
                    assert!(!cell.contains(','));
                }
            }
        }
    }
}

#[test]
fn seed_changes_the_simulation() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "[sweep]\npower_dbw = [20.0]\n");
    lab(dir.path(), &["sweep", "power", "--config", &cfg, "--seed", "1", "--frames", "2000"]);
    let a = fs::read_to_string(dir.path().join("sweep_power.csv")).unwrap();
    lab(dir.path(), &["sweep", "power", "--config", &cfg, "--seed", "2", "--frames", "2000"]);
    let b = fs::read_to_string(dir.path().join("sweep_power.csv")).unwrap();
    assert_ne!(a, b);
}

#[test]
fn placement_reports_both_curves() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "[sweep.horizontal]\nmin = 0.5\nmax = 0.9\npoints = 2\n[sweep.opsa_lambda]\nmin = 0.5\nmax = 0.9\npoints = 3\n");
    assert_eq!(lab(dir.path(), &["sweep", "placement", "--config", &cfg, "--frames", "4000"]).status.code(), Some(0));
    let (header, body) = read_csv(&dir.path().join("sweep_placement.csv"));
    let series = header.iter().position(|h| h == "series").unwrap();
    let kinds: Vec<&str> = body.iter().map(|r| r[series].as_str()).collect();
    assert_eq!(kinds, ["cj", "cj", "no_cj", "no_cj"]);

    assert_eq!(lab(dir.path(), &["sweep", "placement", "--config", &cfg, "--frames", "4000", "--baseline", "uav_no_cj"]).status.code(), Some(0));
    let (_, body) = read_csv(&dir.path().join("sweep_placement.csv"));
    assert!(body.iter().all(|r| r[series] == "no_cj" && r[0] == "uav_no_cj"));
}

#[test]
fn specfun_check_reports_every_row() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), TAYLOR);
    assert_eq!(lab(dir.path(), &["specfun-check", "--config", &cfg]).status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("specfun_check.json")).unwrap()).unwrap();
    assert_eq!(report["rows"].as_array().unwrap().len(), 7);
    // The weighted depth-25 series miss the truncation tolerances.
    assert_eq!(lab(dir.path(), &["specfun-check"]).status.code(), Some(1));
}
