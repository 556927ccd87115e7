use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const FIGURES: [&str; 6] = ["fig1a", "fig1b", "fig2a", "fig2b", "fig3a", "fig3b"];
const GOLDEN_TOLERANCE: f64 = 1e-9;

fn manifest_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn nge() -> Command {
    Command::new(env!("CARGO_BIN_EXE_nge"))
}

fn run(cmd: &mut Command) -> Output {
    cmd.output().expect("binary runs")
}

fn sweep_to(config: &Path, out: &Path, threads: Option<usize>) -> Output {
    let mut cmd = nge();
    cmd.arg("sweep")
        .arg("--config")
        .arg(config)
        .arg("--out")
        .arg(out);
    if let Some(t) = threads {
        cmd.env("NGE_THREADS", t.to_string());
    }
    run(&mut cmd)
}

fn assert_csv_close(actual: &str, expected: &str, label: &str) {
    let a: Vec<_> = actual.lines().collect();
    let e: Vec<_> = expected.lines().collect();
    assert_eq!(a.len(), e.len(), "{label}: row count");
    assert_eq!(a[0], e[0], "{label}: header");
    for (row, (x, y)) in a.iter().zip(&e).enumerate().skip(1) {
        let xs: Vec<_> = x.split(',').collect();
        let ys: Vec<_> = y.split(',').collect();
        assert_eq!(xs.len(), ys.len(), "{label} row {row}");
        for (u, v) in xs.iter().zip(&ys) {
            match (u.parse::<f64>(), v.parse::<f64>()) {
                (Ok(u), Ok(v)) => assert!(
                    (u - v).abs() <= GOLDEN_TOLERANCE * v.abs().max(1.0),
                    "{label} row {row}: {u} vs {v}"
                ),
                _ => assert_eq!(u, v, "{label} row {row}"),
            }
        }
    }
}

#[test]
fn figure_sweeps_match_golden_files() {
    let dir = tempfile::tempdir().unwrap();
    for fig in FIGURES {
        let config = manifest_dir().join("configs").join(format!("{fig}.conf"));
        let out = dir.path().join(format!("{fig}.csv"));
        let o = sweep_to(&config, &out, None);
        assert!(
            o.status.success(),
            "{fig}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
        let golden = manifest_dir()
            .join("tests/golden")
            .join(format!("{fig}.csv"));
        assert_csv_close(
            &std::fs::read_to_string(&out).unwrap(),
            &std::fs::read_to_string(golden).unwrap(),
            fig,
        );
    }
}

#[test]
fn output_is_identical_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    for fig in ["fig1a", "fig3b"] {
        let config = manifest_dir().join("configs").join(format!("{fig}.conf"));
        let mut outputs = Vec::new();
        for threads in [1, 2, 8] {
            let out = dir.path().join(format!("{fig}-{threads}.csv"));
            assert!(sweep_to(&config, &out, Some(threads)).status.success());
            outputs.push(std::fs::read(&out).unwrap());
        }
        assert!(outputs.windows(2).all(|w| w[0] == w[1]), "{fig}");
    }
}

#[test]
fn invalid_specifications_exit_with_2() {
    let cases: [&[&str]; 4] = [
        &["sweep", "--family", "bogus"],
        &["sweep", "--alpha-min", "1", "--alpha-max", "0.5"],
        &["sweep", "--alpha-step", "0"],
        &["sweep", "--family", "TMSS", "--alpha-max", "1.2"],
    ];
    for args in cases {
        let o = run(nge().args(args));
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
    let o = run(nge()
        .args(["sweep", "--alpha-max", "0.1"])
        .env("NGE_THREADS", "zero"));
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn unknown_config_keys_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("bad.conf");
    std::fs::write(&config, "family = PACS_SPLIT\nalhpa_max = 1\n").unwrap();
    let o = run(nge().arg("sweep").arg("--config").arg(&config));
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("alhpa_max"));
}

#[test]
fn flags_override_config_values() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.conf");
    std::fs::write(
        &config,
        "# small run\nfamily = ODD_CAT_SPLIT\nalpha_min = 0.5\nalpha_max = 1.5\nalpha_step = 0.5\nphase = pi/2\nnm = 0,1\nmetrics = epr\n",
    )
    .unwrap();
    let o = run(nge().arg("sweep").arg("--config").arg(&config).args([
        "--alpha-max",
        "1.0",
        "--nm",
        "1",
    ]));
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = String::from_utf8(o.stdout).unwrap();
    let rows: Vec<_> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 2);
    for row in rows {
        let cols: Vec<_> = row.split(',').collect();
        assert_eq!(cols[0], "ODD_CAT_SPLIT");
        assert_eq!(cols[3], "1");
        assert!(cols[4].is_empty() && !cols[5].is_empty() && cols[6].is_empty());
    }
}

#[test]
fn gnuplot_script_is_written() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("out.csv");
    let plot = dir.path().join("out.gp");
    let o = run(nge()
        .args([
            "sweep",
            "--alpha-max",
            "0.5",
            "--metrics",
            "entropy",
            "--out",
        ])
        .arg(&csv)
        .arg("--gnuplot")
        .arg(&plot));
    assert!(o.status.success());
    let script = std::fs::read_to_string(plot).unwrap();
    assert!(script.contains("out.csv"));
    assert!(script.contains("plot"));
}

#[test]
fn thresholds_are_reported_for_both_routes() {
    let o = run(nge().args(["thresholds", "--route", "both"]));
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = String::from_utf8(o.stdout).unwrap();
    let expected = [
        ("fidelity_classical_limit", 0.685_840_106_4),
        ("fidelity_subtraction_crossover", 0.962_783_978_7),
        ("epr_subtraction_crossover", 1.454_272_168_9),
    ];
    let mut seen = 0;
    for line in text.lines().skip(1) {
        let cols: Vec<_> = line.split(',').collect();
        let (_, value) = expected.iter().find(|(n, _)| *n == cols[1]).unwrap();
        let alpha: f64 = cols[2].parse().unwrap();
        assert!((alpha - value).abs() < 1e-5, "{line}");
        seen += 1;
    }
    assert_eq!(seen, 6);
}

#[test]
fn table_one_matches() {
    let o = run(nge().arg("table1"));
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stdout));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("a |TMSS>, lambda=0.38"));
}

#[test]
fn validation_passes() {
    let o = run(nge().arg("validate"));
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stdout));
}
