use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use oridisc::harness::{read_log, RunRecord};
use oridisc::{parse_graph, validate_certificate, Certificate, Spanning};
use serde_json::Value;

fn oridisc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_oridisc"))
        .args(args)
        .env_remove("ORIDISC_LOG")
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}\nstderr: {}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn gen_extremal(dir: &Path, n: usize, h: usize) -> std::path::PathBuf {
    let file = dir.join(format!("ext_{n}_{h}.txt"));
    let out = oridisc(&["gen-extremal", "--n", &n.to_string(), "--h", &h.to_string(), "--out", path_str(&file)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    file
}

#[test]
fn gen_extremal_writes_graph_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let file = gen_extremal(dir.path(), 12, 14);
    let g = parse_graph(&fs::read_to_string(&file).unwrap()).unwrap();
    assert_eq!(g.n(), 12);
    assert_eq!(g.sigma2().unwrap(), 14);
    let side: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("ext_12_14.txt.params.json")).unwrap()).unwrap();
    assert_eq!(side["predicted"]["sigma2"], 14);
    assert_eq!(side["predicted"]["sigma_max_upper"], 7);
    assert_eq!(side["params"]["n"], 12);
}

#[test]
fn solve_exact_then_validate() {
    let dir = tempfile::tempdir().unwrap();
    let file = gen_extremal(dir.path(), 12, 14);
    for algo in ["dp", "bb"] {
        let out = oridisc(&["solve-exact", "--in", path_str(&file), "--algo", algo, "--json"]);
        assert!(out.status.success());
        let doc = json_of(&out);
        assert_eq!(doc["success"], true);
        assert_eq!(doc["certificate"]["sigma_max"], 7);
        assert_eq!(doc["certificate"]["optimal"], true);

        let cert_file = dir.path().join(format!("cert_{algo}.json"));
        fs::write(&cert_file, doc["certificate"].to_string()).unwrap();
        let out = oridisc(&["validate", "--in", path_str(&file), "--cert", path_str(&cert_file)]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    }
}

#[test]
fn tampered_certificate_fails_validation() {
    let dir = tempfile::tempdir().unwrap();
    let file = gen_extremal(dir.path(), 10, 12);
    let doc = json_of(&oridisc(&["solve-exact", "--in", path_str(&file), "--json"]));
    let mut cert: Certificate = serde_json::from_value(doc["certificate"].clone()).unwrap();
    cert.sigma_plus += 1;
    let cert_file = dir.path().join("bad.json");
    fs::write(&cert_file, serde_json::to_string(&cert).unwrap()).unwrap();
    let out = oridisc(&["validate", "--in", path_str(&file), "--cert", path_str(&cert_file), "--json"]);
    assert_eq!(out.status.code(), Some(1));
    let doc = json_of(&out);
    assert_eq!(doc["valid"], false);
    assert_eq!(doc["success"], false);
}

#[test]
fn verify_n4_reports_no_counterexamples() {
    let out = oridisc(&["verify", "--n", "4", "--claim", "half-sigma2", "--json"]);
    assert!(out.status.success());
    let doc = json_of(&out);
    assert_eq!(doc["graphs_scanned"], 729);
    assert_eq!(doc["counterexamples"].as_array().unwrap().len(), 0);
}

#[test]
fn solve_heur_gen_random_and_pipeline_emit_valid_certificates() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("r.txt");
    let out = oridisc(&[
        "gen-random", "--n", "60", "--p", "0.8", "--min-sigma2", "72", "--seed", "3", "--out", path_str(&file),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let g = parse_graph(&fs::read_to_string(&file).unwrap()).unwrap();
    assert!(g.sigma2().unwrap() >= 72);

    let doc = json_of(&oridisc(&["solve-heur", "--in", path_str(&file), "--seed", "1", "--restarts", "2", "--json"]));
    let cert: Certificate = serde_json::from_value(doc["certificate"].clone()).unwrap();
    assert!(validate_certificate(&g, &cert, Spanning::Required).valid);

    let doc = json_of(&oridisc(&["pipeline", "--in", path_str(&file), "--seed", "5", "--json"]));
    assert_eq!(doc["success"], true);
    let cert: Certificate = serde_json::from_value(doc["certificate"].clone()).unwrap();
    assert!(validate_certificate(&g, &cert, Spanning::Required).valid);
    assert!(cert.sigma_max >= 30);
}

#[test]
fn absorber_commands_run() {
    let dir = tempfile::tempdir().unwrap();
    let file = gen_extremal(dir.path(), 40, 52);
    let doc = json_of(&oridisc(&["analyze-absorbers", "--in", path_str(&file), "--json"]));
    assert_eq!(doc["n"], 40);
    let total = doc["strong"].as_u64().unwrap() + doc["weak"].as_u64().unwrap() + doc["neither"].as_u64().unwrap();
    assert_eq!(total, 40);

    let doc = json_of(&oridisc(&["build-absorbing", "--in", path_str(&file), "--seed", "2", "--json"]));
    let g = parse_graph(&fs::read_to_string(&file).unwrap()).unwrap();
    let path: Certificate = serde_json::from_value(doc["path"].clone()).unwrap();
    assert!(!path.cyclic);
    assert!(validate_certificate(&g, &path, Spanning::NotRequired).valid);
}

#[test]
fn tile_finds_a_tiling_on_an_extremal_graph() {
    let dir = tempfile::tempdir().unwrap();
    let file = gen_extremal(dir.path(), 12, 16);
    let doc = json_of(&oridisc(&["tile", "--in", path_str(&file), "--json"]));
    assert_eq!(doc["success"], true);
    assert_eq!(doc["search"]["status"], "found");
}

#[test]
fn computational_failure_is_data_unless_strict() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("path.txt");
    // a directed path has no Hamilton cycle
    fs::write(&file, "5\n0 1\n1 2\n2 3\n3 4\n").unwrap();
    let out = oridisc(&["solve-exact", "--in", path_str(&file), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["status"], "not-hamiltonian");
    let out = oridisc(&["solve-exact", "--in", path_str(&file), "--strict"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn usage_and_input_errors_have_distinct_statuses() {
    assert_eq!(oridisc(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(oridisc(&["solve-exact", "--in", "x", "--frobnicate"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bad.txt");
    fs::write(&file, "3\n0 1\n1 0\n").unwrap();
    let out = oridisc(&["solve-exact", "--in", path_str(&file)]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line"));
}

#[test]
fn run_log_is_append_only_and_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let file = gen_extremal(dir.path(), 14, 18);
    let log = dir.path().join("runs.jsonl");
    for _ in 0..2 {
        let out = oridisc(&["solve-heur", "--in", path_str(&file), "--seed", "9", "--log", path_str(&log)]);
        assert!(out.status.success());
    }
    let env_out = Command::new(env!("CARGO_BIN_EXE_oridisc"))
        .args(["verify", "--n", "3", "--claim", "hamiltonian"])
        .env("ORIDISC_LOG", &log)
        .output()
        .unwrap();
    assert!(env_out.status.success());

    let records: Vec<RunRecord> = read_log(&log).unwrap();
    assert_eq!(records.len(), 3);
    assert_eq!(records[0].command, "solve-heur");
    assert_eq!(records[0].params["seed"], 9);
    assert_eq!(records[0].params["restarts"], 8);
    assert_eq!(records[0].seed, Some(9));
    assert_eq!(records[0].input_digest, records[1].input_digest);
    assert_eq!(records[0].input_digest.as_ref().unwrap().len(), 64);
    assert_eq!(records[0].comparable_result(), records[1].comparable_result());
    assert_eq!(records[2].command, "verify");

    let mut text = fs::read_to_string(&log).unwrap();
    text.push_str("{\"timestamp\": 1");
    fs::write(&log, text).unwrap();
    assert!(read_log(&log).is_err());
}

#[test]
fn bench_csv_is_deterministic_apart_from_timing() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str, parallel: &str| {
        let csv = dir.path().join(name);
        let out = oridisc(&[
            "bench", "--family", "random-p", "--p", "0.6", "--sizes", "8,10", "--instances", "2", "--algos",
            "dp,bb,heuristic", "--seed", "4", "--parallel", parallel, "--csv", path_str(&csv),
        ]);
        assert!(out.status.success());
        let text = fs::read_to_string(csv).unwrap();
        // drop the wall_time_ms column
        text.lines()
            .map(|l| {
                let mut f: Vec<&str> = l.split(',').collect();
                f.remove(7);
                f.join(",")
            })
            .collect::<Vec<_>>()
    };
    let a = run("a.csv", "1");
    let b = run("b.csv", "3");
    assert_eq!(a, b);
    assert_eq!(a[0], "instance,n,sigma2,algorithm,value,optimal,work,status");
    assert_eq!(a.len(), 1 + 4 * 3);
    for rows in a[1..].chunks(3) {
        let value = |r: &str| r.split(',').nth(4).unwrap().to_string();
        assert_eq!(value(&rows[0]), value(&rows[1]));
    }
}
