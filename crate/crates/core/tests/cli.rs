use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const BIN: &str = env!("CARGO_BIN_EXE_citelink");

fn fixture_copy() -> TempDir {
    let src = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/mini");
    let dir = tempfile::tempdir().unwrap();
    for entry in fs::read_dir(&src).unwrap() {
        let p = entry.unwrap().path();
        if p.is_file() {
            fs::copy(&p, dir.path().join(p.file_name().unwrap())).unwrap();
        }
    }
    dir
}

fn citelink(args: &[&str], cwd: &Path) -> Output {
    Command::new(BIN)
        .args(args)
        .current_dir(cwd)
        .env_remove("CITELINK_RESOLVER_URL")
        .env_remove("CITELINK_OFFLINE")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn read(p: PathBuf) -> String {
    fs::read_to_string(&p).unwrap_or_else(|e| panic!("{}: {e}", p.display()))
}

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    fs::write(dir.join(name), body).unwrap();
    name.to_string()
}

#[test]
fn ingest_counts_per_source() {
    let dir = fixture_copy();
    let o = citelink(&["ingest", "-c", "pipeline.json"], dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.contains("GS: 5 records, 0 rejects"), "{text}");
    assert!(text.contains("WOS: 4 records, 1 rejects"), "{text}");
    assert!(text.contains("SCOPUS: 4 records, 0 rejects"), "{text}");

    let out = dir.path().join("out");
    for (file, n) in [("gs.jsonl", 5), ("wos.jsonl", 4), ("scopus.jsonl", 4)] {
        assert_eq!(read(out.join("records").join(file)).lines().count(), n, "{file}");
    }
    let rejects = read(out.join("rejects.csv"));
    assert_eq!(rejects.lines().count(), 2, "{rejects}");
    assert!(rejects.contains("wos.tsv,5,"), "{rejects}");
}

#[test]
fn missing_input_exits_with_io_code() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.json", r#"{"inputs": {"wos": ["nope.tsv"]}}"#);
    let o = citelink(&["ingest", "-c", &cfg], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn missing_config_exits_with_io_code() {
    let dir = tempfile::tempdir().unwrap();
    let o = citelink(&["pipeline", "-c", "absent.json"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn empty_export_gives_empty_canonical_file() {
    let dir = fixture_copy();
    let cfg = write_config(dir.path(), "c.json", r#"{"inputs": {"wos": ["empty.tsv"]}}"#);
    let o = citelink(&["ingest", "-c", &cfg], dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("WOS: 0 records"));
    assert_eq!(read(dir.path().join("out/records/wos.jsonl")), "");
}

#[test]
fn out_of_range_threshold_is_a_validation_error() {
    let dir = fixture_copy();
    let o = citelink(&["match", "-c", "pipeline.json", "--high-sim-threshold", "1.01"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(!dir.path().join("out").exists());
}

#[test]
fn bad_usage_exits_one_and_help_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(citelink(&["frobnicate"], dir.path()).status.code(), Some(1));
    assert_eq!(citelink(&["--help"], dir.path()).status.code(), Some(0));
    assert_eq!(citelink(&["--version"], dir.path()).status.code(), Some(0));
}

#[test]
fn pipeline_report_matches_hand_computed_tables() {
    let dir = fixture_copy();
    let o = citelink(&["pipeline", "-c", "pipeline.json"], dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let out = dir.path().join("out");

    let edges = read(out.join("edges.csv"));
    assert_eq!(edges.lines().filter(|l| l.contains(",DOI,")).count(), 2, "{edges}");

    assert_eq!(
        read(out.join("report/regions.csv")),
        "group,G,W,S,GW,GSc,WS,GWS,total\n\
         ALL,2,1,1,1,1,1,1,8\n\
         Humanities,0,0,1,1,1,0,0,3\n\
         Social Sciences,2,1,0,0,0,1,1,5\n"
    );
    assert_eq!(
        read(out.join("report/coverage.csv")),
        "group,pct_gs_all,pct_wos_all,pct_scopus_all,pct_wos_in_gs,pct_scopus_in_gs,pct_wos_in_scopus\n\
         ALL,62.5000,50.0000,50.0000,50.0000,50.0000,50.0000\n\
         Humanities,66.6667,33.3333,66.6667,100.0000,50.0000,0.0000\n\
         Social Sciences,60.0000,60.0000,40.0000,33.3333,50.0000,66.6667\n"
    );

    let clusters = read(out.join("clusters.jsonl"));
    assert_eq!(clusters.lines().count(), 8);
    assert!(clusters.lines().all(|l| l.contains("\"flagged\":false")), "{clusters}");
}

#[test]
fn rerun_gives_identical_bytes() {
    let dir = fixture_copy();
    let snapshot = |dir: &Path| -> Vec<(String, Vec<u8>)> {
        let mut files = Vec::new();
        let mut stack = vec![dir.join("out")];
        while let Some(d) = stack.pop() {
            for e in fs::read_dir(&d).unwrap() {
                let p = e.unwrap().path();
                if p.is_dir() {
                    stack.push(p);
                } else {
                    files.push((p.display().to_string(), fs::read(&p).unwrap()));
                }
            }
        }
        files.sort();
        files
    };
    assert!(citelink(&["pipeline", "-c", "pipeline.json"], dir.path()).status.success());
    let first = snapshot(dir.path());
    assert!(citelink(&["pipeline", "-c", "pipeline.json", "--workers", "4"], dir.path())
        .status
        .success());
    assert_eq!(first, snapshot(dir.path()));
}

#[test]
fn no_category_map_skips_correlations_with_a_note() {
    let dir = fixture_copy();
    let o = citelink(&["pipeline", "-c", "pipeline.json"], dir.path());
    assert!(o.status.success());
    let report = dir.path().join("out/report");
    assert!(!report.join("correlation_gs_wos.csv").exists());
    assert!(!report.join("correlation_gs_scopus.csv").exists());
    let manifest: serde_json::Value = serde_json::from_str(&read(dir.path().join("out/manifest.json"))).unwrap();
    let notes = manifest["notes"].as_array().unwrap();
    assert!(
        notes.iter().any(|n| n.as_str().unwrap().contains("correlation tables skipped")),
        "{notes:?}"
    );
}

#[test]
fn category_map_enables_correlations() {
    let dir = fixture_copy();
    fs::write(
        dir.path().join("venues.csv"),
        "Journal of Librarianship,Information Science,Social Sciences,Q2\n\
         RESEARCH POLICY,Management,Social Sciences,Q1\n",
    )
    .unwrap();
    let cfg = write_config(
        dir.path(),
        "c.json",
        r#"{"inputs": {"gs": ["gs.jsonl"], "wos": ["wos.tsv"], "scopus": ["scopus.csv"]},
            "category_map": "venues.csv", "resolver": {"cache_dir": "cache"}}"#,
    );
    let o = citelink(&["pipeline", "-c", &cfg], dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let wos = read(dir.path().join("out/report/correlation_gs_wos.csv"));
    let lines: Vec<&str> = wos.lines().collect();
    assert_eq!(lines[0], "category,n,spearman_r,mean_ratio,mean_ln_gs,mean_ln_other");
    // GS 12 vs WoS 9 for the librarianship pair, GS 40 vs WoS 30 for the policy pair.
    assert!(lines.contains(&"Information Science,1,,1.3000,2.5649,2.3026"), "{wos}");
    assert!(lines.contains(&"Management,1,,1.3226,3.7136,3.4340"), "{wos}");
}

#[test]
fn sample_requires_seed() {
    let dir = fixture_copy();
    let o = citelink(&["sample", "-c", "pipeline.json"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    let o = citelink(&["pipeline", "-c", "pipeline.json"], dir.path());
    assert!(o.status.success());
    let o = citelink(&["sample", "-c", "pipeline.json", "--seed", "3"], dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    // g2 and g3 are the only clusters whose representative has no type.
    let sheet = read(dir.path().join("out/samples/social_sciences.csv"));
    assert_eq!(sheet.lines().count(), 3, "{sheet}");
    assert!(sheet.contains("g2") && sheet.contains("g3"), "{sheet}");
}
