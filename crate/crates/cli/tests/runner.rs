use latspec_cli::config::{parse_config, parse_f64_list, parse_i64_grid};
use latspec_cli::runner::{exec_experiment, Ctx, Params};

fn params(pairs: &[(&str, &str)]) -> Params {
    pairs
        .iter()
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect()
}

fn ctx() -> Ctx {
    Ctx {
        seed: 7,
        quick: true,
    }
}

#[test]
fn config_parsing() {
    let text = "\n# comment\n[count]\ngroup = sl2\nLEVEL = 2\nnorm_bound = 10\n\n[tree]\nq = 2\n";
    let exps = parse_config(text).unwrap();
    assert_eq!(exps.len(), 2);
    assert_eq!(exps[0].kind, "count");
    assert_eq!(exps[0].params.get("level").unwrap(), "2");
    assert_eq!(exps[0].params.get("norm-bound").unwrap(), "10");
    assert_eq!(exps[1].kind, "tree");
    // errors carry line numbers and are input errors
    assert_eq!(parse_config("key = 1\n").unwrap_err().exit_code(), 2);
    assert!(parse_config("[unclosed\n").is_err());
    // empty config parses to an empty experiment list
    assert!(parse_config("# nothing\n").unwrap().is_empty());
}

#[test]
fn grid_parsing() {
    assert_eq!(parse_i64_grid("1,4,9").unwrap(), vec![1, 4, 9]);
    assert_eq!(parse_i64_grid("2:6:2").unwrap(), vec![2, 4, 6]);
    assert_eq!(parse_i64_grid("3:5").unwrap(), vec![3, 4, 5]);
    assert!(parse_i64_grid("5:1").is_err());
    assert!(parse_f64_list("2,inf").unwrap()[1].is_infinite());
}

#[test]
fn count_experiment_reports_oracle_equality() {
    let (report, outputs) = exec_experiment(
        "count",
        &params(&[("level", "2"), ("norm-bound", "10"), ("method", "both")]),
        &ctx(),
    )
    .unwrap();
    assert!(report.pass());
    let check = &report.checks[0];
    assert_eq!(check.name, "fast == brute");
    assert!(check.detail.contains("fast == brute: true"));
    let (_, csv) = &outputs[0];
    assert!(csv.starts_with("bound,count,reference,ratio\n"));
    assert!(csv.contains("#config-hash="), "{csv}");
    assert!(csv.contains("seed=7"));
}

#[test]
fn count_profile_both_routes() {
    let (report, _) = exec_experiment(
        "count",
        &params(&[
            ("kind", "gamma0"),
            ("level", "5"),
            ("length-bound", "1,2,3,4"),
            ("method", "both"),
        ]),
        &ctx(),
    )
    .unwrap();
    assert!(report.pass());
    assert_eq!(report.checks[0].name, "direct == fixed-point");
}

#[test]
fn quotient_table_rows_are_permutations() {
    let (report, outputs) = exec_experiment(
        "quotient",
        &params(&[("kind", "gamma0"), ("level", "5")]),
        &ctx(),
    )
    .unwrap();
    assert_eq!(report.measured.get("index"), Some(&6.0));
    let (_, csv) = &outputs[0];
    let mut rows = 0;
    let mut seen = std::collections::HashSet::new();
    for line in csv.lines().skip(1) {
        if line.starts_with('#') {
            continue;
        }
        let cells: Vec<u32> = line.split(',').map(|c| c.parse().unwrap()).collect();
        assert!(cells[0] < 6 && cells[2] < 6 && cells[1] < 4);
        assert!(seen.insert((cells[0], cells[1])), "duplicate table cell");
        rows += 1;
    }
    assert_eq!(rows, 6 * 4);
}

#[test]
fn experiments_are_deterministic() {
    for (kind, p) in [
        (
            "xi",
            params(&[("t-grid", "2"), ("p", "2"), ("samples", "20000")]),
        ),
        (
            "spectra",
            params(&[("family", "random"), ("params", "30,4"), ("nb", "true")]),
        ),
        ("lift", params(&[("level", "5"), ("t-grid", "1:10")])),
    ] {
        let a = exec_experiment(kind, &p, &ctx()).unwrap().1;
        let b = exec_experiment(kind, &p, &ctx()).unwrap().1;
        assert_eq!(a, b, "{kind} outputs differ between runs");
    }
}

#[test]
fn count_deterministic_across_thread_counts() {
    let p = params(&[("level", "3"), ("norm-bound", "40"), ("method", "brute")]);
    let single = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap()
        .install(|| exec_experiment("count", &p, &ctx()).unwrap().1);
    let many = rayon::ThreadPoolBuilder::new()
        .num_threads(4)
        .build()
        .unwrap()
        .install(|| exec_experiment("count", &p, &ctx()).unwrap().1);
    assert_eq!(single, many);
}

#[test]
fn tree_experiment_records_constant() {
    let (report, outputs) = exec_experiment(
        "tree",
        &params(&[("q", "2"), ("radius", "8"), ("check-convolution", "true")]),
        &ctx(),
    )
    .unwrap();
    assert!(report.pass());
    let measured = report.measured.get("convolution_constant").unwrap();
    assert!(*measured > 2.0 && *measured <= 3.5);
    assert!(outputs[0].1.contains("max-ratio="));
}

#[test]
fn spectra_profile_output() {
    let (report, outputs) = exec_experiment(
        "spectra",
        &params(&[
            ("family", "lps"),
            ("params", "5,13"),
            ("profile", "true"),
            ("p-grid", "2.5,3,4"),
        ]),
        &ctx(),
    )
    .unwrap();
    assert!(report.pass());
    assert_eq!(outputs.len(), 2);
    let profile = &outputs[1].1;
    for line in profile.lines().skip(1).filter(|l| !l.starts_with('#')) {
        let cells: Vec<&str> = line.split(',').collect();
        assert_eq!(cells[1], "0", "lps profile must vanish above p = 2");
    }
}

#[test]
fn diameter_reads_edge_list() {
    let dir = std::env::temp_dir().join("latspec-test-diameter");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("c10.txt");
    std::fs::write(
        &path,
        latspec_core::graphs::cycle(10).unwrap().to_edge_list(),
    )
    .unwrap();
    let (report, outputs) = exec_experiment(
        "diameter",
        &params(&[("graph-file", path.to_str().unwrap())]),
        &ctx(),
    )
    .unwrap();
    let mean = report.measured.get("mean_distance").unwrap();
    assert!((mean - 250.0 / 90.0).abs() < 1e-12);
    assert!(outputs[0].1.contains("mean="));
}

#[test]
fn unknown_kind_is_an_input_error() {
    let err = exec_experiment("banana", &params(&[]), &ctx()).unwrap_err();
    assert_eq!(err.exit_code(), 2);
}

#[test]
fn resource_caps_surface_from_experiments() {
    let err =
        exec_experiment("tree", &params(&[("q", "2"), ("radius", "30")]), &ctx()).unwrap_err();
    assert_eq!(err.exit_code(), 3);
}
