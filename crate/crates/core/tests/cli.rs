use std::fs;
use std::path::Path;
use std::process::Command;

use rodwave::cli::{self, ExperimentConfig, SWEEP_COLUMNS};
use serde_json::Value;

const CANONICAL: &str = r#"
model = "camassa_holm"
L = 6.283185307179586
n = 1024
t_end = 3.0
record_every = 0.5
profile = "sine"
amplitude = -1.0
"#;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_rodwave"))
}

fn write_config(dir: &Path, name: &str, text: &str) -> std::path::PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn run(args: &[&str]) -> i32 {
    cli::run(std::iter::once("rodwave").chain(args.iter().copied()))
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn canonical_simulation_and_certificates_agree() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "canon.toml", CANONICAL);
    let out = dir.path().join("out");
    let (c, o) = (cfg.to_str().unwrap(), out.to_str().unwrap());
    let status = bin().args(["simulate", "--config", c, "--out", o]).status().unwrap();
    assert_eq!(status.code(), Some(0));
    let summary = json(&out.join("summary.json"));
    assert_eq!(summary["observation"]["blew_up"], true);
    let t_est = summary["observation"]["T_est"].as_f64().unwrap();
    assert!(t_est <= 2.0);
    assert_eq!(summary["consistent"], true);
    assert_eq!(summary["riccati"][0]["passed"], true);
    let snaps = fs::read_dir(out.join("snapshots")).unwrap().count();
    assert_eq!(snaps as u64, summary["snapshots"].as_u64().unwrap());
    assert!(snaps >= 3);
    let traces = fs::read_to_string(out.join("traces.csv")).unwrap();
    assert!(traces.starts_with("x0,t,q,A,B,h\n"));
    let diagnostics = fs::read_to_string(out.join("diagnostics.csv")).unwrap();
    assert!(diagnostics.starts_with("t,energy,min_ux,argmin_x,max_abs_u\n"));

    assert_eq!(run(&["analyze", "--config", c, "--out", o]), 0);
    let cert = json(&out.join("certificates.json"));
    let local = cert["certificates"]
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["kind"] == "local_thm2")
        .unwrap()
        .clone();
    assert_eq!(local["satisfied"], true);
    assert!((local["t_star_bound"].as_f64().unwrap() - 2.0).abs() < 1e-10);
    assert!(t_est <= 1.05 * cert["best_bound"].as_f64().unwrap());
}

#[test]
fn constant_datum_does_not_blow_up() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "c.toml",
        "profile = \"constant\"\nvalue = 0.0\nn = 64\nt_end = 0.5\nsnapshots = false\n",
    );
    let out = dir.path().join("o");
    let (c, o) = (cfg.to_str().unwrap(), out.to_str().unwrap());
    assert_eq!(run(&["simulate", "--config", c, "--out", o]), 0);
    let s = json(&out.join("summary.json"));
    assert_eq!(s["observation"]["blew_up"], false);
    assert!(!out.join("snapshots").exists());
    assert_eq!(run(&["analyze", "--config", c, "--out", o]), 0);
    let cert = json(&out.join("certificates.json"));
    assert!(cert["certificates"].as_array().unwrap().iter().all(|r| r["satisfied"] == false));
    assert!(cert["best_bound"].is_null());
}

#[test]
fn rod_outside_the_admissible_range_only_runs_the_global_check() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "r.toml", "model = \"rod\"\ngamma = 0.5\nn = 128\namplitude = -1.0\n");
    let out = dir.path().join("o");
    assert_eq!(run(&["analyze", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]), 0);
    let cert = json(&out.join("certificates.json"));
    let kinds: Vec<&str> = cert["certificates"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["kind"].as_str().unwrap())
        .collect();
    assert_eq!(kinds, ["tyz"]);
    assert_eq!(cert["params"]["case"], "none");
}

#[test]
fn config_errors_exit_with_two_and_name_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("n = 100\n", "n must be a power of two"),
        ("bogus = 1\n", "bogus"),
        ("model = \"rod\"\n", "gamma"),
        ("model = \"rod\"\ngamma = -1.0\n", "gamma"),
        ("cfl = 2.0\n", "cfl"),
        ("profile = \"wave\"\n", "profile"),
        ("profile = \"samples\"\n", "samples_path"),
        ("model = \"power\"\nQ = 2\n", "Q"),
    ];
    for (i, (text, needle)) in cases.iter().enumerate() {
        let cfg = write_config(dir.path(), &format!("bad{i}.toml"), text);
        let out = bin()
            .args(["simulate", "--config", cfg.to_str().unwrap(), "--out"])
            .arg(dir.path().join("o"))
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(2), "{text}");
        let err = String::from_utf8_lossy(&out.stderr);
        assert!(err.contains(needle), "{text}: {err}");
    }
    let missing = bin().args(["analyze", "--config", "/nonexistent/x.toml"]).output().unwrap();
    assert_eq!(missing.status.code(), Some(2));
    assert_eq!(bin().arg("simulate").output().unwrap().status.code(), Some(2));
}

#[test]
fn unwritable_output_is_an_internal_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.toml", "profile = \"constant\"\nn = 16\nt_end = 0.1\n");
    let blocker = dir.path().join("file");
    fs::write(&blocker, "").unwrap();
    let code = run(&["analyze", "--config", cfg.to_str().unwrap(), "--out", blocker.join("sub").to_str().unwrap()]);
    assert_eq!(code, 3);
}

#[test]
fn samples_are_read_relative_to_the_config() {
    let dir = tempfile::tempdir().unwrap();
    let g = rodwave::kernel::Grid::new(std::f64::consts::TAU, 64).unwrap();
    let field = rodwave::kernel::Field::from_fn(g, |x| -x.sin());
    let mut csv = Vec::new();
    rodwave::kernel::io::write_csv(&field, &mut csv).unwrap();
    fs::write(dir.path().join("u0.csv"), csv).unwrap();
    let cfg = write_config(
        dir.path(),
        "s.toml",
        "profile = \"samples\"\nsamples_path = \"u0.csv\"\nL = 6.283185307179586\nn = 64\n",
    );
    let out = dir.path().join("o");
    assert_eq!(run(&["analyze", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]), 0);
    let cert = json(&out.join("certificates.json"));
    assert!((cert["best_bound"].as_f64().unwrap() - 2.0).abs() < 1e-9);

    let wrong_n = write_config(
        dir.path(),
        "w.toml",
        "profile = \"samples\"\nsamples_path = \"u0.csv\"\nL = 6.283185307179586\nn = 128\n",
    );
    assert_eq!(run(&["analyze", "--config", wrong_n.to_str().unwrap(), "--out", out.to_str().unwrap()]), 2);
}

const SWEEP: &str = r#"
model = "rod"
gamma = 1.0
L = 6.283185307179586
n = 128
t_end = 6.0
amplitude = -1.0
sweep_gamma = [1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0]
sweep_simulate = false
"#;

fn sweep_rows(text: &str) -> Vec<Vec<String>> {
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), SWEEP_COLUMNS.join(","));
    lines.map(|l| l.split(',').map(str::to_string).collect()).collect()
}

#[test]
fn gamma_sweep_reproduces_the_closed_form_coefficient() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "s.toml", SWEEP);
    let out = dir.path().join("o");
    assert_eq!(run(&["sweep", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap(), "--jobs", "3"]), 0);
    let rows = sweep_rows(&fs::read_to_string(out.join("sweep.csv")).unwrap());
    let col = |name: &str| SWEEP_COLUMNS.iter().position(|c| *c == name).unwrap();
    assert_eq!(rows.len(), 7);
    for (row, gamma) in rows.iter().zip([1.0f64, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0]) {
        let g: f64 = row[col("gamma")].parse().unwrap();
        assert_eq!(g, gamma);
        let beta: f64 = row[col("beta")].parse().unwrap();
        let closed = ((12.0 - 3.0 * gamma).sqrt() - gamma.sqrt()).abs() / (2.0 * gamma.sqrt());
        assert!((beta - closed).abs() < 1e-12, "gamma {gamma}: {beta} vs {closed}");
        assert_eq!(row[col("blew_up")], "");
    }
}

#[test]
fn amplitude_sweep_scales_the_bound() {
    let dir = tempfile::tempdir().unwrap();
    let text = "model = \"rod\"\ngamma = 2.0\nL = 6.283185307179586\nn = 128\nt_end = 8.0\nsweep_amplitude = [-0.5, -1.0, -2.0]\n";
    let cfg = write_config(dir.path(), "a.toml", text);
    let out = dir.path().join("o");
    assert_eq!(run(&["sweep", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]), 0);
    let rows = sweep_rows(&fs::read_to_string(out.join("sweep.csv")).unwrap());
    let col = |name: &str| SWEEP_COLUMNS.iter().position(|c| *c == name).unwrap();
    let bounds: Vec<f64> = rows.iter().map(|r| r[col("local_bound")].parse().unwrap()).collect();
    assert!((bounds[0] - 2.0 * bounds[1]).abs() < 1e-12 * bounds[0]);
    assert!((bounds[1] - 2.0 * bounds[2]).abs() < 1e-12 * bounds[1]);
    for r in &rows {
        assert_eq!(r[col("blew_up")], "true");
        assert_eq!(r[col("consistent")], "true");
    }
}

#[test]
fn sweep_rejects_empty_and_mismatched_axes() {
    let dir = tempfile::tempdir().unwrap();
    for (i, text) in [
        "model = \"rod\"\ngamma = 2.0\nsweep_gamma = []\n",
        "model = \"rod\"\ngamma = 2.0\n",
        "sweep_gamma = [1.0]\n",
        "model = \"rod\"\ngamma = 2.0\nsweep_kappa = [1.0]\n",
        "model = \"rod\"\ngamma = 2.0\nsweep_gamma = [2.0, 0.0]\n",
    ]
    .iter()
    .enumerate()
    {
        let cfg = write_config(dir.path(), &format!("b{i}.toml"), text);
        let out = dir.path().join("o");
        assert_eq!(run(&["sweep", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]), 2, "{text}");
    }
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let text = format!("{CANONICAL}\nt_end = 1.0\nn = 256\nseeds = [0.0, 1.0]\n").replace("t_end = 3.0\n", "").replace("n = 1024\n", "");
    let cfg = write_config(dir.path(), "c.toml", &text);
    let sweep = write_config(dir.path(), "s.toml", &SWEEP.replace("sweep_simulate = false", "sweep_simulate = true"));
    let read_all = |out: &Path| -> Vec<(String, Vec<u8>)> {
        let mut files = Vec::new();
        let mut stack = vec![out.to_path_buf()];
        while let Some(d) = stack.pop() {
            for e in fs::read_dir(&d).unwrap() {
                let p = e.unwrap().path();
                if p.is_dir() {
                    stack.push(p);
                } else {
                    files.push((p.strip_prefix(out).unwrap().display().to_string(), fs::read(&p).unwrap()));
                }
            }
        }
        files.sort();
        files
    };
    let mut outputs = Vec::new();
    for (k, jobs) in [(0, "1"), (1, "4")] {
        let out = dir.path().join(format!("o{k}"));
        let o = out.to_str().unwrap();
        assert_eq!(run(&["simulate", "--config", cfg.to_str().unwrap(), "--out", o]), 0);
        assert_eq!(run(&["analyze", "--config", cfg.to_str().unwrap(), "--out", o]), 0);
        assert_eq!(run(&["sweep", "--config", sweep.to_str().unwrap(), "--out", o, "--jobs", jobs]), 0);
        outputs.push(read_all(&out));
    }
    assert_eq!(outputs[0].len(), 1 + 1 + 1 + 1 + 1 + 3);
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn seed_flag_overrides_the_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "r.toml", "profile = \"random_modes\"\nn = 64\nL = 10.0\nseed = 1\n");
    let c = cfg.to_str().unwrap();
    let read = |sub: &str, seed: Option<&str>| {
        let out = dir.path().join(sub);
        let mut args = vec!["analyze", "--config", c, "--out", out.to_str().unwrap()];
        if let Some(s) = seed {
            args.extend(["--seed", s]);
        }
        assert_eq!(run(&args), 0);
        fs::read(out.join("certificates.json")).unwrap()
    };
    let base = read("a", None);
    assert_eq!(read("b", Some("1")), base);
    assert_ne!(read("c", Some("2")), base);
}

#[test]
fn help_lists_every_config_key_with_its_default() {
    let out = bin().args(["simulate", "--help"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let help = String::from_utf8(out.stdout).unwrap();
    let defaults = serde_json::to_value(ExperimentConfig::default()).unwrap();
    for key in defaults.as_object().unwrap().keys() {
        assert!(help.contains(&format!("  {key} = ")), "missing {key}");
    }
    assert!(help.contains("[default: out]"));
    assert!(help.contains("n = 1024") && help.contains("cfl = 0.3") && help.contains("slope_floor = -10000.0"));
}
