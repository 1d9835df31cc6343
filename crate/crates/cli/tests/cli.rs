use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_streamchroma"))
}

fn run(args: &[&str], cwd: &Path) -> Output {
    bin().args(args).current_dir(cwd).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn planted(dir: &Path, delta: usize, seed: u64) {
    let o = run(&["gen", "planted", "--delta", &delta.to_string(), "--seed", &seed.to_string(), "-o", "g.txt"], dir);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn color_then_verify_planted() {
    let dir = tempfile::tempdir().unwrap();
    planted(dir.path(), 32, 3);
    let o = run(&["color", "g.txt", "-o", "out", "--seed", "7"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("status verified"));
    for f in ["coloring.txt", "attribution.txt", "space.json", "config.txt", "result.txt"] {
        assert!(dir.path().join("out").join(f).exists(), "{f} missing");
    }
    let config = fs::read_to_string(dir.path().join("out/config.txt")).unwrap();
    assert!(config.contains("seed = 7"));

    let v = run(&["verify", "g.txt", "out/coloring.txt"], dir.path());
    assert_eq!(v.status.code(), Some(0));
    assert!(stdout(&v).contains("\"proper\": true"));
}

#[test]
fn same_seed_same_bytes() {
    let dir = tempfile::tempdir().unwrap();
    planted(dir.path(), 24, 11);
    let a = run(&["color", "g.txt", "-o", "a", "--seed", "5"], dir.path());
    let b = run(&["color", "g.txt", "-o", "b", "--seed", "5"], dir.path());
    assert_eq!(a.status.code(), b.status.code());
    assert_eq!(stdout(&a), stdout(&b));
    let mut names: Vec<_> = fs::read_dir(dir.path().join("a")).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    assert!(!names.is_empty());
    for name in names {
        let x = fs::read(dir.path().join("a").join(&name)).unwrap();
        let y = fs::read(dir.path().join("b").join(&name)).unwrap();
        assert_eq!(x, y, "{name:?} differs");
    }
}

#[test]
fn truncated_palettes_exit_2_without_a_coloring() {
    let dir = tempfile::tempdir().unwrap();
    planted(dir.path(), 32, 3);
    let out = dir.path().join("out");
    fs::create_dir_all(&out).unwrap();
    // A stale file from an earlier run must not survive the failure.
    fs::write(out.join("coloring.txt"), "0 1\n").unwrap();
    let o = run(&["color", "g.txt", "-o", "out", "--set", "rate4=0", "--set", "rate5=0", "--set", "rate6=0"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    let report = fs::read_to_string(out.join("incomplete.txt")).unwrap();
    assert!(report.starts_with("status incomplete\nstep "), "{report}");
    assert!(report.contains("witness "));
    assert!(!out.join("coloring.txt").exists());
}

#[test]
fn small_delta_takes_the_fallback() {
    let dir = tempfile::tempdir().unwrap();
    let g = run(&["gen", "random", "--n", "150", "--delta", "6", "--p", "0.03", "--seed", "2", "-o", "r.txt"], dir.path());
    assert!(g.status.success());
    let o = run(&["color", "r.txt", "-o", "out"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("note delta below the fallback threshold"));
    assert_eq!(run(&["verify", "r.txt", "out/coloring.txt"], dir.path()).status.code(), Some(0));
}

#[test]
fn flag_beats_config_file() {
    let dir = tempfile::tempdir().unwrap();
    planted(dir.path(), 24, 1);
    fs::write(dir.path().join("run.cfg"), "seed = 40\nrho = 4\n").unwrap();
    let o = run(&["stream", "g.txt", "-o", "s", "--config", "run.cfg", "--seed", "41"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let config = fs::read_to_string(dir.path().join("s/config.txt")).unwrap();
    assert!(config.contains("seed = 41"));
    assert!(config.contains("rho = 4"));
    for f in ["palettes.bin", "sparsified.edges", "decomposition.json", "sketches.bin", "report.json"] {
        assert!(dir.path().join("s").join(f).exists(), "{f} missing");
    }
}

#[test]
fn verify_rejects_a_clash() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("g.txt"), "3 2\n0 1\n1 2\n").unwrap();
    fs::write(dir.path().join("c.txt"), "0 1\n1 1\n2 -\n").unwrap();
    let o = run(&["verify", "g.txt", "c.txt", "--q", "2"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("\"proper\": false"));
}

#[test]
fn figure_gadget_layout() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["gadget", "build", "--delta", "7", "--c", "6", "--x-bits", "10101011011000", "--i", "1"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    for line in ["n 31", "block_size 31", "max_degree 6", "bit 1"] {
        assert!(text.lines().any(|l| l == line), "missing `{line}` in\n{text}");
    }
}

#[test]
fn store_all_always_answers() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        &["gadget", "simulate", "--delta", "8", "--c", "6", "--alg", "storeall", "--trials", "20", "--workers", "3"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0));
    let rows: Vec<String> = stdout(&o).lines().filter(|l| l.starts_with("storeall")).map(String::from).collect();
    assert_eq!(rows.len(), 3);
    for row in rows {
        let cols: Vec<&str> = row.split_whitespace().collect();
        assert_eq!(cols[6], "20");
        assert_eq!(cols[7], "20", "{row}");
    }
}

#[test]
fn usage_errors_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(&["color"], dir.path()).status.code(), Some(1));
    assert_eq!(run(&["color", "missing.txt", "-o", "x"], dir.path()).status.code(), Some(1));
    assert_eq!(run(&["gadget", "build", "--delta", "7", "--c", "3", "--x-bits", "1", "--i", "1"], dir.path()).status.code(), Some(1));
}
