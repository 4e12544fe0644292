use std::path::PathBuf;
use std::process::{Command, Output};

use permzero::{run, Cell, Command as Cmd, ExperimentSpec, Format, Grid};
use permzero_core::{Complex64, EntryDistribution};

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_permzero"))
        .args(args)
        .env_remove("PERMZERO_THREADS")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn data_lines(text: &str) -> Vec<&str> {
    text.lines().filter(|l| !l.starts_with('#') && !l.is_empty()).collect()
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("permzero-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn spec(command: Cmd) -> ExperimentSpec {
    ExperimentSpec {
        command,
        n: 4,
        dist: EntryDistribution::complex_gaussian(1.0),
        seed: 5,
        grid: "-2,2,-2,2,5".parse::<Grid>().unwrap(),
        samples: 200,
        degrees: vec![0, 2, 4],
        sizes: vec![3, 5],
        z: Complex64::new(0.5, 0.0),
        c: 0.3,
        out: None,
        format: Format::Csv,
    }
}

#[test]
fn missing_seed_is_an_error() {
    let o = bin(&["stability"]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("--seed"));
}

#[test]
fn metadata_header_echoes_the_spec() {
    let o = bin(&["stability", "--seed", "42", "--n", "3", "--samples", "300", "--c", "0.2"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let header: Vec<&str> = text.lines().take_while(|l| l.starts_with('#')).collect();
    for needle in ["# seed: 42", "# n: 3", "# samples: 300", "# c: 0.2", "# command: stability", "# version: "] {
        assert!(header.iter().any(|l| l.starts_with(needle)), "missing {needle}");
    }
    assert_eq!(data_lines(&text)[0], "check_id,value_a,value_b,tolerance,pass");
}

#[test]
fn heatmap_rows_and_roots_sidecar() {
    let out = tmp("heat.csv");
    let o = bin(&[
        "zeros-heatmap", "--seed", "1", "--n", "6", "--grid", "-3,3,-3,3,7", "--out", out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let main = std::fs::read_to_string(&out).unwrap();
    let rows = data_lines(&main);
    assert_eq!(rows[0], "re,im,log_mag,status");
    assert_eq!(rows.len() - 1, 49);
    let roots = std::fs::read_to_string(out.with_file_name("heat.roots.csv")).unwrap();
    let rrows = data_lines(&roots);
    assert_eq!(rrows[0], "re,im,residual");
    assert_eq!(rrows.len() - 1, 6);
    for r in &rrows[1..] {
        let residual: f64 = r.split(',').nth(2).unwrap().parse().unwrap();
        assert!(residual < 1e-10);
    }
}

#[test]
fn heatmap_single_entry_root() {
    // per(z + w) vanishes at z = -w
    let mut s = spec(Cmd::ZerosHeatmap);
    s.n = 1;
    let r = run(&s).unwrap();
    let w = permzero_core::sample_matrix(&s.dist, 1, permzero_core::SeededStream::new(s.seed, 0)).unwrap()[(0, 0)];
    let roots = &r.sidecars[0];
    assert_eq!(roots.rows.len(), 1);
    match (&roots.rows[0][0], &roots.rows[0][1]) {
        (Cell::Float(re), Cell::Float(im)) => {
            assert!((Complex64::new(*re, *im) + w).norm() < 1e-10);
        }
        _ => panic!("float cells"),
    }
}

#[test]
fn truncation_grid_shape_and_summary() {
    let mut s = spec(Cmd::TruncationGrid);
    s.grid = "-3,3,-3,3,6".parse().unwrap();
    s.degrees = (0..=9).collect();
    let r = run(&s).unwrap();
    assert_eq!(r.table.rows.len(), 10 * 36);
    let summary = &r.sidecars[0];
    assert_eq!(summary.name, "summary");
    let frac = |d: usize| match summary.rows[d][1] {
        Cell::Float(v) => v,
        _ => panic!(),
    };
    assert!(frac(9) >= frac(0));
    // each grid carries a status on every cell
    let status = r.table.column("status").unwrap();
    assert!(r.table.rows.iter().all(|row| matches!(&row[status], Cell::Text(t) if !t.is_empty())));
}

#[test]
fn json_mirrors_csv_rows() {
    let csv = bin(&["second-moment", "--seed", "3", "--n", "4", "--samples", "300"]);
    let json = bin(&["second-moment", "--seed", "3", "--n", "4", "--samples", "300", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&json.stdout).unwrap();
    let rows = v["rows"].as_array().unwrap();
    let csv_text = stdout(&csv);
    let csv_rows = data_lines(&csv_text);
    assert_eq!(rows.len(), csv_rows.len() - 1);
    assert_eq!(v["meta"]["seed"], "3");
    for (j, line) in rows.iter().zip(&csv_rows[1..]) {
        assert!(line.starts_with(j["check_id"].as_str().unwrap()));
    }
}

#[test]
fn nonstandard_distribution_rejected_by_gaussian_only_commands() {
    let o = bin(&["anticoncentration", "--seed", "1", "--n", "4", "--samples", "200", "--variance", "2"]);
    assert!(!o.status.success());
    assert!(o.stdout.is_empty());
}

#[test]
fn suite_exit_code_tracks_pass_column() {
    let o = bin(&["stability", "--seed", "7", "--n", "3", "--samples", "2000"]);
    let text = stdout(&o);
    let all_true = data_lines(&text)[1..].iter().all(|l| l.ends_with(",true"));
    assert_eq!(o.status.success(), all_true);
}

#[test]
fn guard_violations_are_reported() {
    let o = bin(&["truncation-grid", "--seed", "1", "--n", "15"]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("guard"));
    let o = bin(&["coeff-scaling", "--seed", "1", "--samples", "150"]);
    assert!(!o.status.success());
}

#[test]
fn scaling_rows_and_slopes() {
    let r = run(&spec(Cmd::CoeffScaling)).unwrap();
    assert_eq!(r.table.columns, vec!["k", "n", "estimate", "se"]);
    assert_eq!(r.table.rows.len(), 3 * 2);
    for k in 1..=3 {
        assert!(r.meta.iter().any(|(key, _)| key == &format!("slope_k{k}")));
    }
}

#[test]
fn rerun_is_identical() {
    for cmd in [Cmd::ZerosHeatmap, Cmd::HardcoreSuite, Cmd::Anticoncentration] {
        let s = spec(cmd);
        let a = run(&s).unwrap().render_all(Format::Csv);
        let b = run(&s).unwrap().render_all(Format::Csv);
        assert_eq!(a, b);
    }
}
