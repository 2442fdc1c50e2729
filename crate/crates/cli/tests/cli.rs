use std::path::Path;
use std::process::{Command, Output};

use bohr_cli::{run, Command as Cmd, ExperimentConfig, LoadedConfig};

const BOARD: &str = r#"d = 2
alphas = "577/408,1351/780"
delta = "1/10"
N0 = 12
C = 3
k = 24
N2 = 100000
seed = 5
"#;

fn bohr(args: &[&str], seed_env: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_bohr"));
    cmd.args(args).env_remove("BOHR_SEED");
    if let Some(seed) = seed_env {
        cmd.env("BOHR_SEED", seed);
    }
    cmd.output().expect("binary runs")
}

fn write_config(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn scan_exit_zero_when_no_in_s_row_reaches_l() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.toml", &format!("{BOARD}y_lo = 1\ny_hi = 30\nL = 50\n"));
    let out = bohr(&["scan", "--config", &cfg], None);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stdout(&out).contains("construction_failed false"));
}

#[test]
fn scan_exit_one_when_some_in_s_row_reaches_l() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.toml", &format!("{BOARD}y_lo = 1\ny_hi = 30\nL = 50\n"));
    // Seed 0 has a length-50 run at y = 1, which lies in S.
    let out = bohr(&["scan", "--config", &cfg], Some("0"));
    assert_eq!(out.status.code(), Some(1), "{}", stderr(&out));
    assert!(stdout(&out).contains("construction_failed true"));
}

#[test]
fn malformed_alphas_exit_two_naming_the_key() {
    let dir = tempfile::tempdir().unwrap();
    let text = BOARD.replace("577/408,1351/780", "1/0,1351/780");
    let cfg = write_config(dir.path(), "c.toml", &text);
    let out = bohr(&["params", "--config", &cfg], None);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("`alphas`"), "{}", stderr(&out));
}

#[test]
fn config_errors_name_the_key() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        (format!("{BOARD}bogus = 3\n"), "bogus"),
        (BOARD.replace("k = 24\n", ""), "`k`"),
        (BOARD.replace("delta = \"1/10\"", "delta = \"3/4\""), "`delta`"),
        (BOARD.replace("C = 3", "C = 1"), "`C`"),
        (BOARD.replace("d = 2", "d = 3"), "`d`"),
    ];
    for (i, (text, key)) in cases.iter().enumerate() {
        let cfg = write_config(dir.path(), &format!("c{i}.toml"), text);
        let out = bohr(&["params", "--config", &cfg], None);
        assert_eq!(out.status.code(), Some(2), "case {i}");
        assert!(stderr(&out).contains(key), "case {i}: {}", stderr(&out));
    }
    let cfg = write_config(dir.path(), "s.toml", BOARD);
    let out = bohr(&["board", "--config", &cfg], Some("banana"));
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("BOHR_SEED"));
}

#[test]
fn scan_artifacts_are_byte_identical_and_manifested() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.toml", &format!("{BOARD}y_lo = 1\ny_hi = 40\nL = 20\n"));
    let serial = write_config(
        dir.path(),
        "s.toml",
        &format!("{BOARD}y_lo = 1\ny_hi = 40\nL = 20\nparallel = false\n"),
    );
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    let c = dir.path().join("c");
    for (config, out) in [(&cfg, &a), (&cfg, &b), (&serial, &c)] {
        let o = bohr(&["scan", "--config", config, "--out", &out.to_string_lossy()], None);
        assert!(o.status.code().unwrap() <= 1, "{}", stderr(&o));
    }
    let csv_a = std::fs::read(a.join("scan.csv")).unwrap();
    assert_eq!(csv_a, std::fs::read(b.join("scan.csv")).unwrap());
    assert_eq!(csv_a, std::fs::read(c.join("scan.csv")).unwrap());
    assert!(csv_a.starts_with(b"y,bohr_gap,in_S,max_len_seen,witness_x\n"));

    let manifest = std::fs::read_to_string(a.join("manifest.txt")).unwrap();
    let sha = bohr_cli::config::sha256_hex(&std::fs::read(&cfg).unwrap());
    assert!(manifest.contains(&format!("config_sha256 {sha}")));
    assert!(manifest.contains("board_hash d4ff393c110757e8"));
    assert_eq!(manifest, std::fs::read_to_string(b.join("manifest.txt")).unwrap());
}

#[test]
fn seed_override_changes_only_the_seed() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.toml", BOARD);
    let plain = stdout(&bohr(&["board", "--config", &cfg], None));
    let same = stdout(&bohr(&["board", "--config", &cfg], Some("5")));
    let other = stdout(&bohr(&["board", "--config", &cfg], Some("6")));
    assert_eq!(plain, same);
    assert_ne!(plain, other);
}

#[test]
fn every_command_writes_headed_csv_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let small = r#"d = 2
alphas = "577/408,1351/780"
delta = "1/10"
N0 = 12
C = 3
k = 4
N2 = 2000
seed = 1
x = 3
y = 7
R = 8
n_steps = 24
threshold = "1/4"
hj_d = 3
alpha = "99/70"
y_lo = 1
y_hi = 20
L = 8
x_hi = 1000
"#;
    let cfg = write_config(dir.path(), "c.toml", small);
    let expected: [(&str, &[&str]); 8] = [
        ("params", &["params.txt"]),
        ("board", &["board.txt"]),
        ("return-cert", &["return_cert.csv"]),
        ("eta", &["eta.csv"]),
        ("orbit-census", &["orbit_census.csv", "orbit_census_summary.txt"]),
        ("trace", &["trace.csv", "trace.svg"]),
        ("classic", &["classic.csv"]),
        ("scan", &["scan.csv"]),
    ];
    for (cmd, files) in expected {
        let out_dir = dir.path().join(cmd);
        let o = bohr(&[cmd, "--config", &cfg, "--out", &out_dir.to_string_lossy()], None);
        assert!(o.status.code().unwrap() <= 1, "{cmd}: {}", stderr(&o));
        let manifest = std::fs::read_to_string(out_dir.join("manifest.txt")).unwrap();
        assert!(manifest.contains(&format!("command {cmd}\n")));
        assert!(manifest.contains("config_sha256 "));
        assert!(manifest.contains("board_hash "));
        for f in files {
            let body = std::fs::read_to_string(out_dir.join(f)).unwrap();
            if f.ends_with(".csv") {
                let header = body.lines().next().unwrap();
                assert!(header.chars().all(|c| c.is_ascii_alphanumeric() || c == ',' || c == '_'), "{f}: {header}");
            }
            if f.ends_with(".svg") {
                assert!(body.starts_with("<svg"));
            }
        }
    }
    let board = std::fs::read_to_string(dir.path().join("board/board.txt")).unwrap();
    let mut lines = board.lines();
    assert_eq!(lines.next(), Some("2 4 12 3 48 1"));
    assert_eq!(lines.next().unwrap().len(), 16);
    let cert = std::fs::read_to_string(dir.path().join("return-cert/return_cert.csv")).unwrap();
    assert!(cert.trim_end().ends_with(",true"), "{cert}");
}

#[test]
fn hj_search_prints_coloring_or_none() {
    let o = bohr(&["hj", "search", "-d", "3"], None);
    assert_eq!(o.status.code(), Some(0));
    let first = stdout(&o).lines().next().unwrap().to_string();
    assert_eq!(first.len(), 27);
    assert!(first.chars().all(|c| c == 'R' || c == 'B'));

    let o = bohr(&["hj", "search", "-d", "4", "--budget", "50"], None);
    assert_eq!(stdout(&o).lines().next(), Some("NONE (budget)"));
}

#[test]
fn config_round_trips_through_toml() {
    let text = format!("{BOARD}y_lo = 1\ny_hi = 9\nL = 7\nthreshold = \"1/4\"\nparallel = false\n");
    let loaded = LoadedConfig::from_text(&text).unwrap();
    let again: ExperimentConfig = toml::from_str(&loaded.config.to_toml()).unwrap();
    assert_eq!(loaded.config, again);
    assert_eq!(again.n0, Some(12));
    assert_eq!(again.len, Some(7));
}

#[test]
fn library_run_matches_binary_exit_code() {
    let loaded = LoadedConfig::from_text(&format!("{BOARD}y_lo = 1\ny_hi = 5\nL = 50\n")).unwrap();
    let outcome = run(Cmd::Scan, &loaded, None).unwrap();
    assert_eq!(outcome.exit_code, 0);
    assert!(outcome.artifacts.is_empty());

    let bad = LoadedConfig::from_text("d = 1\nalphas = \"1/2\"\n").unwrap();
    let err = run(Cmd::Params, &bad, None).unwrap_err();
    assert_eq!(err.exit_code(), 2);
    assert!(err.to_string().contains("`delta`"));
}
