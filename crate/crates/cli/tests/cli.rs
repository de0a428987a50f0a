use std::process::{Command, Output};

fn hurwitz(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hurwitz"))
        .args(args)
        .env_remove("HURWITZ_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).trim().to_string()
}

#[test]
fn complex_values_and_routes() {
    let o = hurwitz(&["hurwitz", "--g", "0", "--lambda", "[3]", "--mu", "[1,1,1]", "--route", "both"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "1 == 1 OK");
    let o = hurwitz(&["hurwitz", "--g", "0", "--lambda", "[1]", "--mu", "[1]"]);
    assert_eq!(stdout(&o), "1");
    let o = hurwitz(&["hurwitz", "--lambda", "[2]", "--mu", "[1,1]", "--route", "tropical"]);
    assert_eq!(stdout(&o), "1/2");
}

#[test]
fn exit_codes() {
    let o = hurwitz(&["hurwitz", "--g", "0", "--lambda", "[2]", "--mu", "[1,1,1]"]);
    assert_eq!(o.status.code(), Some(2));
    let o = hurwitz(&["hurwitz", "--lambda", "[0,1]", "--mu", "[1]"]);
    assert_eq!(o.status.code(), Some(2));
    let o = hurwitz(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
    let o = hurwitz(&["--budget", "5", "hurwitz", "--lambda", "[3,1]", "--mu", "[1,1,1,1]"]);
    assert_eq!(o.status.code(), Some(3));
    let o = Command::new(env!("CARGO_BIN_EXE_hurwitz"))
        .args(["hurwitz", "--lambda", "[3,1]", "--mu", "[1,1,1,1]"])
        .env("HURWITZ_BUDGET", "5")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn real_values() {
    let o = hurwitz(&["real", "--g", "0", "--lambda", "[2]", "--mu", "[1,1]", "--s", "1"]);
    assert_eq!(stdout(&o), "1");
    let o = hurwitz(&["real", "--g", "0", "--lambda", "[1]", "--mu", "[1]", "--s", "0"]);
    assert_eq!(stdout(&o), "1");
    let a = hurwitz(&["real", "--lambda", "[2,1]", "--mu", "[1,1,1]", "--s", "0"]);
    let b = hurwitz(&["real", "--lambda", "[2,1]", "--mu", "[1,1,1]", "--s", "3"]);
    assert_eq!(stdout(&a), stdout(&b));
    let t = hurwitz(&["real", "--lambda", "[2,1]", "--mu", "[1,1,1]", "--splitting", "1,3", "--route", "tropical"]);
    assert_eq!(stdout(&t), stdout(&a));
    let table = hurwitz(&["real", "--lambda", "[3]", "--mu", "[1,1,1]"]);
    let lines: Vec<String> = stdout(&table).lines().map(String::from).collect();
    assert_eq!(lines.len(), 1 + 3);
    for line in &lines[1..] {
        let cols: Vec<&str> = line.split('\t').collect();
        assert_eq!(cols[1], cols[2]);
    }
    let o = hurwitz(&["real", "--lambda", "[2]", "--mu", "[1,1]", "--s", "4"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_reports() {
    let o = hurwitz(&["verify", "--g", "0", "--lambda", "[2,1]", "--mu", "[1,1,1]"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["chain_ok"], true);
    assert_eq!(v["H_complex"], "4");
    let o = hurwitz(&["verify", "--g", "0", "--lambda", "[2]", "--mu", "[1,1]"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("hypothesis"));
    let o = hurwitz(&["verify", "--all-small"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["failures"].as_array().unwrap().len(), 0);
    assert!(v["instances"].as_u64().unwrap() > 0);
}

/// Minimal structural check of the DOT subset the emitter uses.
fn parses_as_dot(text: &str) -> bool {
    let mut lines = text.lines();
    let Some(head) = lines.next() else { return false };
    if !(head.starts_with("digraph \"") && head.ends_with(" {")) {
        return false;
    }
    let body: Vec<&str> = lines.collect();
    let Some((last, stmts)) = body.split_last() else { return false };
    *last == "}"
        && stmts.iter().all(|s| {
            let s = s.trim();
            s.ends_with(';') && s.matches('[').count() == s.matches(']').count() && s.matches('"').count() % 2 == 0
        })
}

#[test]
fn render_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("one");
    let o = hurwitz(&["render", "--g", "0", "--lambda", "[2]", "--mu", "[1,1]", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let files: Vec<_> = std::fs::read_dir(&out).unwrap().collect();
    assert_eq!(files.len(), 1);

    let all = dir.path().join("all");
    let zz = dir.path().join("zz");
    hurwitz(&["render", "--lambda", "[3,1]", "--mu", "[2,2]", "--out", all.to_str().unwrap()]);
    hurwitz(&["render", "--lambda", "[3,1]", "--mu", "[2,2]", "--out", zz.to_str().unwrap(), "--class", "zigzag"]);
    let count = |p: &std::path::Path| std::fs::read_dir(p).unwrap().count();
    assert!(count(&zz) <= count(&all));
    assert!(count(&all) > 0);

    let col = dir.path().join("col");
    hurwitz(&["render", "--lambda", "[2,1]", "--mu", "[1,1,1]", "--out", col.to_str().unwrap(), "--colourings"]);
    for entry in std::fs::read_dir(&col).unwrap() {
        let text = std::fs::read_to_string(entry.unwrap().path()).unwrap();
        assert!(parses_as_dot(&text), "{text}");
    }
}

#[test]
fn sweep_csv_and_cache() {
    let dir = tempfile::tempdir().unwrap();
    let csv1 = dir.path().join("a.csv");
    let csv2 = dir.path().join("b.csv");
    let cache = dir.path().join("cache.jsonl");
    let args = |csv: &std::path::Path| {
        vec![
            "--cache".to_string(),
            cache.to_str().unwrap().to_string(),
            "sweep".into(),
            "--lambda".into(),
            "[2,1]".into(),
            "--mu".into(),
            "[1,1,1]".into(),
            "--m-max".into(),
            "2".into(),
            "--csv".into(),
            csv.to_str().unwrap().to_string(),
        ]
    };
    let a: Vec<String> = args(&csv1);
    let o = hurwitz(&a.iter().map(String::as_str).collect::<Vec<_>>());
    assert!(o.status.success());
    assert!(stdout(&o).contains("m = 2"));
    let mut rd = csv::Reader::from_path(&csv1).unwrap();
    let header: Vec<String> = rd.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(&header[..5], ["m", "Z", "Zprime", "E", "H_complex"]);
    assert_eq!(header.last().unwrap(), "log_ratio_HC");
    let rows: Vec<csv::StringRecord> = rd.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 3);
    assert_eq!(&rows[0][4], "4");

    // Second run reads the cache and reproduces the file.
    let b: Vec<String> = args(&csv2);
    hurwitz(&b.iter().map(String::as_str).collect::<Vec<_>>());
    assert_eq!(std::fs::read(&csv1).unwrap(), std::fs::read(&csv2).unwrap());

    // A corrupted line is skipped with a warning and recomputed.
    let text = std::fs::read_to_string(&cache).unwrap();
    std::fs::write(&cache, text.replacen("8400", "8401", 1)).unwrap();
    let o = hurwitz(&b.iter().map(String::as_str).collect::<Vec<_>>());
    assert!(String::from_utf8_lossy(&o.stderr).contains("corrupt cache line"));
    assert_eq!(std::fs::read(&csv1).unwrap(), std::fs::read(&csv2).unwrap());
}

#[test]
fn sweep_marks_budget_rows() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("s.csv");
    let o = hurwitz(&[
        "--budget", "20", "sweep", "--lambda", "[2,1]", "--mu", "[1,1,1]", "--m-max", "2", "--csv",
        csv.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.contains("budget"), "{text}");
}
