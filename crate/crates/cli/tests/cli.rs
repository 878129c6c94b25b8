use std::process::{Command, Output};

fn galphac(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_galphac"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn aggregate(csv: &str, measure: &str) -> f64 {
    csv.lines()
        .find_map(|l| l.strip_prefix(&format!("{measure},aggregate,")))
        .unwrap_or_else(|| panic!("no aggregate for {measure} in\n{csv}"))
        .parse()
        .unwrap()
}

#[test]
fn measure_examples() {
    let out = galphac(&["measure", "ghz:3", "--measure", "galphac", "--alpha", "0.5"]);
    assert!(out.status.success());
    assert!((aggregate(&stdout(&out), "galphac(alpha=0.5)") - 0.414214).abs() < 1e-6);

    let out = galphac(&["measure", "w:3", "--measure", "gmc"]);
    assert!((aggregate(&stdout(&out), "gmc") - 0.942809).abs() < 1e-6);

    let out = galphac(&["measure", "typeB:0", "--measure", "fill"]);
    assert_eq!(aggregate(&stdout(&out), "fill"), 0.0);
}

#[test]
fn measure_json_lists_every_cut() {
    let out = galphac(&[
        "measure",
        "w:4",
        "--measure",
        "galphac",
        "--measure",
        "ggm",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 2);
    assert_eq!(v[0]["per_cut"].as_array().unwrap().len(), 7);
    assert_eq!(v[1]["measure_id"], "ggm");
}

#[test]
fn state_files_are_accepted_and_checked() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("ghz.json");
    let h = std::f64::consts::FRAC_1_SQRT_2;
    std::fs::write(
        &good,
        format!(r#"{{"local_dims":[2,2,2],"amplitudes":[[{h},0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0],[{h},0]]}}"#),
    )
    .unwrap();
    let out = galphac(&["measure", good.to_str().unwrap()]);
    assert!(out.status.success());
    assert!((aggregate(&stdout(&out), "galphac(alpha=0.5)") - (2f64.sqrt() - 1.0)).abs() < 1e-12);

    let unnormalized = dir.path().join("bad.json");
    std::fs::write(
        &unnormalized,
        r#"{"local_dims":[2,2,2],"amplitudes":[[1,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0],[1,0]]}"#,
    )
    .unwrap();
    assert_eq!(
        galphac(&["measure", unnormalized.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );

    let garbage = dir.path().join("garbage.json");
    std::fs::write(&garbage, "{not json").unwrap();
    assert_eq!(
        galphac(&["measure", garbage.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn input_errors_exit_with_two() {
    assert_eq!(galphac(&["measure", "ghz:x"]).status.code(), Some(2));
    assert_eq!(
        galphac(&["measure", "ghz:3", "--measure", "nope"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        galphac(&["measure", "ghz:3", "--alpha", "0.7"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        galphac(&["sweep", "typeB", "--end", "2.0"]).status.code(),
        Some(2)
    );
    assert_eq!(
        galphac(&["sweep", "typeB", "--step", "0"]).status.code(),
        Some(2)
    );
    assert_eq!(galphac(&["reproduce", "5"]).status.code(), Some(2));
    assert_eq!(
        galphac(&["bound-check", "--trials", "0"]).status.code(),
        Some(2)
    );
}

#[test]
fn sweep_csv_layout_and_determinism() {
    let args = [
        "sweep",
        "typeB",
        "--step",
        "0.01",
        "--measure",
        "gmc",
        "--measure",
        "fill",
    ];
    let first = galphac(&args);
    assert!(first.status.success());
    let text = stdout(&first);
    assert_eq!(text, stdout(&galphac(&args)));
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("# command: galphac sweep typeB"));
    assert!(lines[1].starts_with("# version: "));
    assert!(lines[2].starts_with("# seed: "));
    assert_eq!(lines[3], "theta,gmc,fill");
    assert_eq!(lines[4], "0,0,0");
    let rows: Vec<&str> = lines
        .iter()
        .copied()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .collect();
    assert_eq!(rows.len(), 159);
    assert_eq!(
        *rows.last().unwrap(),
        format!("{},0,0", std::f64::consts::FRAC_PI_2)
    );
    assert!(lines
        .iter()
        .any(|l| l.starts_with("# argmax gmc theta=0.79")));
}

#[test]
fn fam4_reproduction_passes_its_checks() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("fig4.csv");
    let gp = dir.path().join("fig4.gp");
    let out = galphac(&[
        "reproduce",
        "4",
        "--out",
        csv.to_str().unwrap(),
        "--gnuplot",
        gp.to_str().unwrap(),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.contains("theta,gqc(q=3),galphac(alpha=0.5),gmc,ggm"));
    assert!(text.contains("# argmax galphac(alpha=0.5) theta=0.866"));
    assert!(!text.contains("FAIL"));
    let script = std::fs::read_to_string(&gp).unwrap();
    assert!(script.contains("using 1:5"));
}

#[test]
fn ghz_w_reproduction() {
    let out = galphac(&["reproduce", "1", "--numeric-max-n", "8"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let rows: Vec<Vec<&str>> = text
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').collect())
        .collect();
    assert_eq!(rows.len(), 17);
    assert_eq!(rows[0][0], "5");
    assert!(!rows[3][4].is_empty());
    assert!(rows[16][4].is_empty());
    for r in &rows {
        assert!(r[3].parse::<f64>().unwrap() < 1.0);
    }
}

#[test]
fn bound_check_reports_no_violations() {
    let out = galphac(&[
        "bound-check",
        "--trials",
        "200",
        "--seed",
        "5",
        "--alpha",
        "0.5",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v[0]["cut_violations"], 0);
    assert_eq!(v[0]["aggregate_violations"], 0);
    assert_eq!(v[0]["zero_epsilon_max_diff"], 0.0);
    assert!(v[0]["max_cut_ratio"].as_f64().unwrap() <= 1.0);
}

#[test]
fn roof_examples() {
    let out = galphac(&["roof", "ghz:3", "--restarts", "2"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!((v["upper_bound"].as_f64().unwrap() - 0.414214).abs() < 1e-6);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("mix.json");
    let mut entries = vec![vec![[0.0, 0.0]; 8]; 8];
    entries[0][0] = [0.5, 0.0];
    entries[7][7] = [0.5, 0.0];
    std::fs::write(
        &path,
        serde_json::json!({"local_dims": [2, 2, 2], "entries": entries}).to_string(),
    )
    .unwrap();
    let run = || {
        galphac(&[
            "roof",
            path.to_str().unwrap(),
            "--restarts",
            "4",
            "--seed",
            "3",
        ])
    };
    let first = run();
    assert!(first.status.success());
    assert_eq!(stdout(&first), stdout(&run()));
    let v: serde_json::Value = serde_json::from_str(&stdout(&first)).unwrap();
    assert!(v["upper_bound"].as_f64().unwrap() <= 1e-3);
    assert_eq!(v["best_ensemble"]["weights"].as_array().unwrap().len(), 4);

    assert_eq!(
        galphac(&["roof", "ghz:3", "--measure", "gmc"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        galphac(&["roof", "ghz:3", "--cut", "0|1"]).status.code(),
        Some(2)
    );
}
