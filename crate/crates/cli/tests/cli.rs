use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_holderlab");

fn scratch(name: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join("cli").join(name);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn holderlab(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

/// Sector profile rows with the given oscillation at every scale.
fn flat_profile(osc: f64) -> String {
    let mut text = String::from("# seed=0 config_hash=0\nk,r_k,osc,stderr,points_used\n");
    for k in 0..9 {
        text.push_str(&format!("{k},{},{osc},0,64\n", 0.5f64.powi(k)));
    }
    text
}

#[test]
fn presets_lists_every_bundled_config() {
    let text = stdout(&holderlab(&["presets"]));
    let names: Vec<&str> = text.lines().map(|l| l.split('\t').next().unwrap()).collect();
    for name in ["harmonic_ball", "sector", "perron_harmonic", "geometry_cone"] {
        assert!(names.contains(&name), "{name} missing from {names:?}");
    }
}

#[test]
fn show_config_round_trips_with_a_stable_hash() {
    let dir = scratch("show_config");
    let first = stdout(&holderlab(&["show-config", "--preset", "sector"]));
    let (header, body) = first.split_once('\n').unwrap();
    assert!(header.starts_with("# config_hash="));
    let path = write(&dir, "sector.toml", body);
    let second = stdout(&holderlab(&["show-config", "--config", &path]));
    assert_eq!(first, second);
}

#[test]
fn overrides_change_the_hash_and_the_value() {
    let base = stdout(&holderlab(&["show-config", "--preset", "sector"]));
    let changed = stdout(&holderlab(&["show-config", "--preset", "sector", "--set", "domain.aperture=0.5", "--seed", "99"]));
    assert_ne!(base.lines().next(), changed.lines().next());
    assert!(changed.contains("aperture = 0.5"));
    assert!(changed.contains("seed = 99"));
}

#[test]
fn unknown_key_is_reported_with_its_line() {
    let dir = scratch("unknown_key");
    let path = write(&dir, "bad.toml", "seed = 1\ndimension = 2\nfrobnicate = true\n");
    let out = holderlab(&["constants", "--config", &path]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 3"), "{err}");
    assert!(err.contains("frobnicate"), "{err}");
}

#[test]
fn paths_flag_is_rejected_where_meaningless() {
    let out = holderlab(&["perron", "--preset", "perron_geometric", "--paths", "10"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn strict_certify_sets_the_exit_status() {
    let dir = scratch("strict");
    let flat = write(&dir, "flat.csv", &flat_profile(1.0));
    let decayed = write(&dir, "decayed.csv", &flat_profile(1e-3));

    let lenient = holderlab(&["certify", "--preset", "sector", "--from-profile", &flat]);
    let verdict: Value = serde_json::from_str(&stdout(&lenient)).unwrap();
    assert_eq!(verdict["verdict"], "fail");

    let strict = holderlab(&["certify", "--preset", "sector", "--from-profile", &flat, "--strict"]);
    assert_eq!(strict.status.code(), Some(1));

    let passing = holderlab(&["certify", "--preset", "sector", "--from-profile", &decayed, "--strict"]);
    let verdict: Value = serde_json::from_str(&stdout(&passing)).unwrap();
    assert_eq!(verdict["verdict"], "pass");
}

#[test]
fn perron_reads_sequences_from_csv() {
    let dir = scratch("perron_input");
    let mut rows = String::from("k,a_k,omega_k\n");
    for k in 0..=10 {
        rows.push_str(&format!("{k},{},0\n", 0.5f64.powi(k)));
    }
    let input = write(&dir, "input.csv", &rows);
    let config = format!("seed = 10\n\n[perron]\nc0 = 0.5\nk_max = 10\ninput = {input:?}\n");
    let from_csv = stdout(&holderlab(&["perron", "--config", &write(&dir, "input.toml", &config)]));
    let family = stdout(&holderlab(&["perron", "--preset", "perron_geometric", "--set", "perron.k_max=10"]));
    let rows = |text: &str| text.lines().filter(|l| !l.starts_with('#')).map(str::to_string).collect::<Vec<_>>();
    assert_eq!(rows(&from_csv), rows(&family));
    assert_eq!(rows(&from_csv).len(), 12);
}

#[test]
fn solve_writes_one_stamped_line_per_point() {
    let text = stdout(&holderlab(&["solve", "--preset", "harmonic_ball", "--paths", "500"]));
    let lines: Vec<Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 1);
    assert_eq!(lines[0]["paths"], 500);
    assert_eq!(lines[0]["seed"], 1);
    assert_eq!(lines[0]["estimator"], "walk_on_spheres");
}
