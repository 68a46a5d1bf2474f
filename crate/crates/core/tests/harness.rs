use std::path::PathBuf;

use nemo::harness::{aggregate, read_csv, run_experiment, write_csv, ExperimentConfig, Kind, CSV_HEADER};

fn repo() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn small(kind: &str, extra: &str) -> ExperimentConfig {
    let text = format!(
        "kind = \"{kind}\"\nseed = 5\ntrials = 3\n{extra}\n[params]\nn = 200\nk = 12\np = 0.3\nbeta = 0.1\n"
    );
    let mut cfg = ExperimentConfig::from_toml(&text).unwrap();
    cfg.base_dir = Some(repo().join("configs"));
    cfg
}

fn csv(cfg: &ExperimentConfig) -> Vec<u8> {
    let mut out = Vec::new();
    write_csv(&run_experiment(cfg).unwrap(), &mut out).unwrap();
    out
}

#[test]
fn shipped_configs_parse() {
    let mut kinds = Vec::new();
    for entry in std::fs::read_dir(repo().join("configs")).unwrap() {
        let path = entry.unwrap().path();
        let cfg = ExperimentConfig::from_file(&path).unwrap_or_else(|e| panic!("{e}"));
        kinds.push(cfg.kind);
    }
    for kind in Kind::ALL {
        assert!(kinds.contains(&kind), "no config for {}", kind.name());
    }
}

#[test]
fn reruns_are_byte_identical() {
    let cfg = small("scaffold-seq", "length = [6]\npresentations = [1, 3]\naudit_homeostasis = true");
    let a = csv(&cfg);
    assert_eq!(a, csv(&cfg));
    let text = String::from_utf8(a).unwrap();
    assert!(text.starts_with(CSV_HEADER));
}

#[test]
fn adding_trials_keeps_existing_ones() {
    let mut cfg = small("simple-seq", "length = [5]\npresentations = [2]");
    let three = run_experiment(&cfg).unwrap();
    cfg.trials = 5;
    let five = run_experiment(&cfg).unwrap();
    assert_eq!(&five[..three.len()], &three[..]);
    assert!(five.windows(2).all(|w| w[0].trial <= w[1].trial));
}

#[test]
fn audit_reports_exact_normalisation() {
    let cfg = small("simple-seq", "length = [5]\npresentations = [4]\naudit_homeostasis = true");
    let rows = run_experiment(&cfg).unwrap();
    let errs: Vec<f64> = rows.iter().filter(|r| r.metric == "homeostasis_error").map(|r| r.metric_value).collect();
    assert_eq!(errs.len(), 3);
    assert!(errs.iter().all(|&e| e <= 1e-9), "{errs:?}");
    assert!(rows.iter().any(|r| r.metric == "homeostasis_passes" && r.metric_value == 4.0));
}

#[test]
fn sweep_rows_carry_the_value() {
    let cfg = small(
        "seq-sweep",
        "length = [5]\npresentations = [2]\n[sweep]\nparam = \"n\"\nvalues = [100, 200]\nk_sqrt = true",
    );
    let rows = run_experiment(&cfg).unwrap();
    for v in ["100", "200"] {
        assert!(rows.iter().any(|r| r.param == "n" && r.value == v && r.metric == "recall_last"));
    }
}

#[test]
fn capacity_reports_drop_length() {
    let cfg = small("seq-capacity", "length = [3, 40]\npresentations = [4]\ndelta = 4");
    let rows = run_experiment(&cfg).unwrap();
    assert_eq!(rows.iter().filter(|r| r.metric == "capacity_drop_length").count(), 3);
}

#[test]
fn fsm_kinds_emit_metrics() {
    let cfg = small(
        "fsm-train",
        "machine = \"../machines/even_zeros.fsm\"\npresentations = [2, 4]\nstrings = 5\nstring_lengths = [4]",
    );
    let rows = run_experiment(&cfg).unwrap();
    for m in ["recall_mean", "recall_min", "recall:even/0", "accuracy", "max_arc_overlap"] {
        assert!(rows.iter().any(|r| r.metric == m && r.value == "4"), "missing {m}");
    }
    let cfg = small(
        "fsm-run",
        "machine = \"../machines/even_zeros.fsm\"\npresentations = [4]\ninputs = [\"00\", \"0\"]",
    );
    let rows = run_experiment(&cfg).unwrap();
    assert_eq!(rows.iter().filter(|r| r.metric == "correct").count(), 6);
}

#[test]
fn missing_machine_is_reported() {
    let cfg = small("fsm-train", "machine = \"nope.fsm\"");
    let err = run_experiment(&cfg).unwrap_err().to_string();
    assert!(err.contains("nope.fsm"), "{err}");
}

#[test]
fn csv_and_aggregate_roundtrip() {
    let cfg = small("simple-seq", "length = [4]\npresentations = [1, 2]");
    let rows = run_experiment(&cfg).unwrap();
    let mut buf = Vec::new();
    write_csv(&rows, &mut buf).unwrap();
    let back = read_csv(buf.as_slice()).unwrap();
    assert_eq!(back, rows);
    let summary = aggregate(&back);
    for s in &summary {
        let vals: Vec<f64> = rows
            .iter()
            .filter(|r| r.param == s.param && r.value == s.value && r.metric == s.metric)
            .map(|r| r.metric_value)
            .collect();
        assert_eq!(s.count, vals.len());
        let mean = vals.iter().sum::<f64>() / vals.len() as f64;
        assert!((s.mean - mean).abs() < 1e-12);
        assert!(s.min <= s.mean && s.mean <= s.max);
    }
}
