use std::path::{Path, PathBuf};
use std::process::{Child, Command, Output, Stdio};
use std::time::{Duration, Instant};

use riskcomp_core::composer::evaluate_scenario;
use riskcomp_core::fixtures::minimal_scenario;
use riskcomp_core::scenario::{
    parse_report, scenario_to_json, write_report, ReportDocument, ReportFormat, TABLE_COLUMNS,
};

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn riskcomp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_riskcomp"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Minimal scenario with a short Monte Carlo run, written to a temp dir.
fn minimal_file(dir: &Path) -> PathBuf {
    let path = dir.join("minimal.json");
    std::fs::write(&path, scenario_to_json(&minimal_scenario())).unwrap();
    path
}

#[test]
fn evaluate_matches_the_library_in_both_formats() {
    let dir = tempfile::tempdir().unwrap();
    let path = minimal_file(dir.path());
    let scenario = minimal_scenario();
    let doc = ReportDocument::new(
        &scenario.name,
        evaluate_scenario(&scenario, &scenario.params).unwrap(),
    );

    let out = riskcomp(&["evaluate", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(parse_report(&stdout(&out)).unwrap(), doc);

    let out = riskcomp(&["evaluate", path.to_str().unwrap(), "--format", "table"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text, write_report(&doc, ReportFormat::Table));
    assert_eq!(text.lines().next().unwrap(), TABLE_COLUMNS.join(","));

    let target = dir.path().join("report.json");
    let out = riskcomp(&[
        "evaluate",
        path.to_str().unwrap(),
        "--out",
        target.to_str().unwrap(),
    ]);
    assert!(out.status.success() && out.stdout.is_empty());
    assert_eq!(
        std::fs::read_to_string(target).unwrap(),
        write_report(&doc, ReportFormat::Structured)
    );
}

#[test]
fn rank_orders_the_tabletop_by_total() {
    let scenario = root().join("scenarios/tabletop.json");
    let out = riskcomp(&["rank", scenario.to_str().unwrap(), "--format", "table"]);
    assert!(out.status.success());
    let ids: Vec<String> = stdout(&out)
        .lines()
        .skip(1)
        .map(|l| l.split(',').next().unwrap().to_string())
        .collect();
    assert_eq!(ids, ["dual_arm", "right_arm", "left_arm"]);
}

#[test]
fn montecarlo_reports_rates_and_is_repeatable() {
    let scenario = root().join("scenarios/grazing.json");
    let args = [
        "montecarlo",
        scenario.to_str().unwrap(),
        "--trials",
        "200",
        "--seed",
        "3",
    ];
    let a = riskcomp(&args);
    let b = riskcomp(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let doc: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(doc["trials"], 200);
    assert_eq!(doc["seed"], 3);
    let rate = doc["compositions"][0]["collision_failure_rate"]
        .as_f64()
        .unwrap();
    assert!(rate > 0.8, "{rate}");
}

#[test]
fn sweep_writes_one_row_per_offset() {
    let fixture = root().join("fixtures/symmetric_sphere.json");
    let out = riskcomp(&[
        "sweep",
        fixture.to_str().unwrap(),
        "--grid",
        "x=-0.01:0.01:3,y=-0.01:0.01:3",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 10);
    assert!(lines[0].starts_with("offset_x,offset_y,offset_z"));
}

#[test]
fn exit_codes_follow_error_categories() {
    let dir = tempfile::tempdir().unwrap();
    let code = |args: &[&str]| riskcomp(args).status.code().unwrap();

    assert_eq!(code(&["--help"]), 0);
    assert_eq!(code(&["--version"]), 0);
    assert_eq!(code(&[]), 1);
    assert_eq!(code(&["frobnicate"]), 1);
    assert_eq!(code(&["montecarlo", "x.json", "--seed", "1"]), 1);
    assert_eq!(code(&["--workers", "0", "rank", "x.json"]), 1);

    let bad = |name: &str, text: &str| {
        let p = dir.path().join(name);
        std::fs::write(&p, text).unwrap();
        p.to_str().unwrap().to_string()
    };
    let parse = bad("parse.json", "{ not json");
    let schema = bad("schema.json", r#"{"schema_version": 7}"#);
    let mut v: serde_json::Value =
        serde_json::from_str(&scenario_to_json(&minimal_scenario())).unwrap();
    v["params"]["weights"]["w_fall"] = 0.9.into();
    let validation = bad("validation.json", &v.to_string());
    for path in [&parse, &schema, &validation] {
        assert_eq!(code(&["evaluate", path]), 2, "{path}");
    }
    let err = String::from_utf8(riskcomp(&["evaluate", &validation]).stderr).unwrap();
    assert!(err.contains("params.weights"), "{err}");

    let fixture = root().join("fixtures/symmetric_sphere.json");
    assert_eq!(
        code(&["sweep", fixture.to_str().unwrap(), "--grid", "w=1"]),
        2
    );
    let minimal = minimal_file(dir.path());
    assert_eq!(
        code(&[
            "montecarlo",
            minimal.to_str().unwrap(),
            "--trials",
            "0",
            "--seed",
            "1"
        ]),
        2
    );

    assert_eq!(
        code(&[
            "evaluate",
            dir.path().join("missing.json").to_str().unwrap()
        ]),
        3
    );
    let unwritable = dir.path().join("no/such/dir/out.json");
    assert_eq!(
        code(&[
            "evaluate",
            minimal.to_str().unwrap(),
            "--out",
            unwritable.to_str().unwrap()
        ]),
        3
    );
}

struct Server(Child);

impl Drop for Server {
    fn drop(&mut self) {
        let _ = self.0.kill();
        let _ = self.0.wait();
    }
}

fn free_port() -> u16 {
    std::net::TcpListener::bind("127.0.0.1:0")
        .unwrap()
        .local_addr()
        .unwrap()
        .port()
}

#[test]
fn serve_and_client_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = minimal_file(dir.path());
    let port = free_port().to_string();
    let _server = Server(
        Command::new(env!("CARGO_BIN_EXE_riskcomp"))
            .args([
                "serve",
                "--port",
                &port,
                "--scenario",
                scenario.to_str().unwrap(),
            ])
            .stdout(Stdio::null())
            .stderr(Stdio::null())
            .spawn()
            .unwrap(),
    );
    let url = format!("http://127.0.0.1:{port}");
    let client = |args: &[&str]| {
        let mut all = vec!["client", "--url", &url];
        all.extend_from_slice(args);
        riskcomp(&all)
    };
    let deadline = Instant::now() + Duration::from_secs(30);
    while !client(&["state"]).status.success() {
        assert!(Instant::now() < deadline, "service did not come up");
        std::thread::sleep(Duration::from_millis(100));
    }

    // Same weights and noise as the file: the what-if table equals `evaluate`.
    let w = minimal_scenario().params.weights;
    let n = minimal_scenario().params.noise;
    let (wc, wf, wg) = (
        w.w_collision.to_string(),
        w.w_fall.to_string(),
        w.w_grasp.to_string(),
    );
    let noise = [
        n.obstacle_pose_sigma.to_string(),
        n.com_sigma.to_string(),
        n.trials.to_string(),
        n.seed.to_string(),
    ];
    let what_if = client(&[
        "what-if",
        "--weights",
        &wc,
        &wf,
        &wg,
        "--noise",
        &noise[0],
        &noise[1],
        &noise[2],
        &noise[3],
        "--format",
        "table",
    ]);
    assert!(what_if.status.success());
    let evaluate = riskcomp(&["evaluate", scenario.to_str().unwrap(), "--format", "table"]);
    assert_eq!(stdout(&what_if), stdout(&evaluate));

    let report = client(&["report", "reach"]);
    assert!(report.status.success());
    let commit = client(&["commit", "reach", "--seed", "5"]);
    assert!(commit.status.success());
    let history: serde_json::Value = serde_json::from_slice(&client(&["history"]).stdout).unwrap();
    assert_eq!(history.as_array().unwrap().len(), 1);
    let series: serde_json::Value =
        serde_json::from_slice(&client(&["series", "reach"]).stdout).unwrap();
    assert_eq!(series["id"], "reach");

    assert_eq!(
        client(&["commit", "nope", "--seed", "1"]).status.code(),
        Some(2)
    );
    assert_eq!(
        client(&["what-if", "--weights", "0.5", "0.5", "0.5"])
            .status
            .code(),
        Some(2)
    );
    let dead = riskcomp(&[
        "client",
        "--url",
        &format!("http://127.0.0.1:{}", free_port()),
        "state",
    ]);
    assert_eq!(dead.status.code(), Some(3));
}
