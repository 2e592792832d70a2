use std::path::Path;
use std::process::{Command, Output};

fn mixwave(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mixwave"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn out_arg(dir: &Path) -> String {
    dir.to_str().unwrap().to_string()
}

#[test]
fn help_lists_commands_and_config_keys() {
    let out = mixwave(&["--help"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    for cmd in [
        "forward",
        "spectrum",
        "observability",
        "invert",
        "table1",
        "table2",
        "table3",
        "time-sweep",
    ] {
        assert!(text.contains(cmd), "missing {cmd}");
    }
    for key in [
        "fine_factor",
        "grad_tol",
        "include_finest",
        "strategy",
        "minimizer",
    ] {
        assert!(text.contains(key), "missing {key}");
    }
}

#[test]
fn forward_writes_csv_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = mixwave(&["forward", "--n", "9", "--out", &out_arg(dir.path())]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    for name in ["energy.csv", "trace.csv"] {
        assert!(dir.path().join(name).exists());
    }
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let d = out_arg(dir.path());
    assert_eq!(code(&mixwave(&["spectrum", "--n", "2001", "--out", &d])), 2);
    assert_eq!(
        code(&mixwave(&[
            "invert",
            "--n",
            "9",
            "--t-final",
            "-1",
            "--out",
            &d
        ])),
        2
    );
    assert_eq!(
        code(&mixwave(&[
            "invert",
            "--n",
            "9",
            "--fine-factor",
            "2",
            "--out",
            &d
        ])),
        2
    );
    assert_eq!(code(&mixwave(&["bogus"])), 2);

    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "potential = \"nope\"\n").unwrap();
    assert_eq!(
        code(&mixwave(&[
            "spectrum",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            &d
        ])),
        2
    );
    std::fs::write(&cfg, "unknown_key = 1\n").unwrap();
    assert_eq!(
        code(&mixwave(&[
            "spectrum",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            &d
        ])),
        2
    );
    std::fs::write(&cfg, "command = \"table1\"\n").unwrap();
    assert_eq!(
        code(&mixwave(&[
            "spectrum",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            &d
        ])),
        2
    );
}

#[test]
fn missing_config_exits_3() {
    let out = mixwave(&["spectrum", "--config", "/nonexistent/run.toml"]);
    assert_eq!(code(&out), 3);
}

#[test]
fn capped_minimization_exits_5() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "n = 19\nmax_iter = 1\n").unwrap();
    let out = mixwave(&[
        "invert",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        &out_arg(dir.path()),
    ]);
    assert_eq!(code(&out), 5);
    assert!(dir.path().join("reconstruction.csv").exists());
}

#[test]
fn table_output_is_byte_identical_across_runs() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let cfg = a.path().join("run.toml");
    std::fs::write(&cfg, "n_list = [9, 19]\nrepeats = 3\nseed = 7\n").unwrap();
    for dir in [a.path(), b.path()] {
        let out = mixwave(&[
            "table2",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            &out_arg(dir),
        ]);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    }
    let x = std::fs::read(a.path().join("table2.csv")).unwrap();
    let y = std::fs::read(b.path().join("table2.csv")).unwrap();
    assert_eq!(x, y);
    assert!(!x.contains(&b'\r'));
}

#[test]
fn shipped_configs_parse() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut seen = 0;
    for entry in std::fs::read_dir(root).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "toml") {
            mixwave::experiments::RunConfig::load(&path)
                .and_then(|c| c.validate())
                .unwrap_or_else(|e| panic!("{}: {e}", path.display()));
            seen += 1;
        }
    }
    assert!(seen >= 5);
}
