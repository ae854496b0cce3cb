use std::sync::Arc;

use axum::body::Body;
use axum::http::{Request, StatusCode};
use http_body_util::BodyExt;
use riskcomp_core::composer::{
    evaluate_scenario, monte_carlo_failure, NoiseModel, Outcome, RiskReport, RiskWeights,
};
use riskcomp_core::fixtures::{minimal_scenario, tabletop_scenario};
use riskcomp_core::scenario::{load_scenario, scenario_to_json, ReportDocument, Scenario};
use riskcomp_service::http::{router, AppState};
use riskcomp_service::{ErrorBody, HistoryEntry, HistoryResponse, Overrides, Session, Snapshot};
use serde::de::DeserializeOwned;
use tower::ServiceExt;

/// Minimal scenario with the CoM parked on the support edge: fall risk
/// dominates and collision risk is zero.
fn edge_scenario() -> Scenario {
    let mut v: serde_json::Value =
        serde_json::from_str(&scenario_to_json(&minimal_scenario())).unwrap();
    for s in v["compositions"][0]["actions"][0]["trajectory"]
        .as_array_mut()
        .unwrap()
    {
        s["com_xy"] = serde_json::json!([0.12, 0.0]);
    }
    v["params"]["noise"]["trials"] = 50.into();
    load_scenario(&v.to_string()).unwrap()
}

fn app(scenario: Scenario) -> (axum::Router, Arc<AppState>) {
    let state = AppState::new(Session::new(scenario).unwrap());
    (router(state.clone()), state)
}

async fn call(
    app: &axum::Router,
    method: &str,
    uri: &str,
    body: Option<String>,
) -> (StatusCode, Vec<u8>) {
    let req = Request::builder()
        .method(method)
        .uri(uri)
        .header("content-type", "application/json")
        .body(body.map(Body::from).unwrap_or_else(Body::empty))
        .unwrap();
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp
        .into_body()
        .collect()
        .await
        .unwrap()
        .to_bytes()
        .to_vec();
    (status, bytes)
}

async fn call_json<T: DeserializeOwned>(
    app: &axum::Router,
    method: &str,
    uri: &str,
    body: Option<String>,
) -> (StatusCode, T) {
    let (status, bytes) = call(app, method, uri, body).await;
    let value = serde_json::from_slice(&bytes)
        .unwrap_or_else(|e| panic!("{uri}: {e}: {}", String::from_utf8_lossy(&bytes)));
    (status, value)
}

async fn state(app: &axum::Router) -> Snapshot {
    let (status, snap) = call_json(app, "GET", "/state", None).await;
    assert_eq!(status, StatusCode::OK);
    snap
}

#[tokio::test]
async fn fresh_state_matches_direct_evaluation() {
    let scenario = edge_scenario();
    let direct = evaluate_scenario(&scenario, &scenario.params).unwrap();
    let (app, _) = app(scenario);
    let snap = state(&app).await;
    assert!(snap.history.is_empty());
    assert_eq!(snap.reports, direct);
    assert_eq!(snap.ranking, vec!["reach".to_string()]);
    let (status, report): (_, RiskReport) = call_json(&app, "GET", "/reports/reach", None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(report, direct[0]);
}

#[tokio::test]
async fn reads_do_not_mutate() {
    let (app, _) = app(edge_scenario());
    let before = state(&app).await;
    for uri in [
        "/state",
        "/reports/reach",
        "/history",
        "/series/reach",
        "/reports/missing",
    ] {
        call(&app, "GET", uri, None).await;
    }
    assert_eq!(state(&app).await, before);
}

#[tokio::test]
async fn what_if_with_defaults_is_idempotent() {
    let scenario = edge_scenario();
    let params = scenario.params;
    let (app, _) = app(scenario);
    let before = state(&app).await;
    let body = serde_json::to_string(&Overrides {
        weights: Some(params.weights),
        noise: Some(params.noise),
    })
    .unwrap();
    let (status, doc): (_, ReportDocument) = call_json(&app, "POST", "/what-if", Some(body)).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(doc.compositions, before.reports);
    assert_eq!(state(&app).await.reports, before.reports);
}

#[tokio::test]
async fn raising_fall_weight_raises_fall_dominated_totals() {
    let scenario = edge_scenario();
    let (app, _) = app(scenario.clone());
    let before = state(&app).await.reports[0].clone();
    assert!(
        before.fall.combined > before.collision.combined && before.fall.combined > before.grasp
    );
    // w_fall 0.5 -> 0.8, the other two scaled to fill the remaining 0.2.
    let w = RiskWeights {
        w_collision: 0.12,
        w_fall: 0.8,
        w_grasp: 0.08,
    };
    let body = serde_json::json!({ "weights": w }).to_string();
    let (status, doc): (_, ReportDocument) = call_json(&app, "POST", "/what-if", Some(body)).await;
    assert_eq!(status, StatusCode::OK);
    let after = &doc.compositions[0];
    assert!(
        after.total > before.total,
        "{} -> {}",
        before.total,
        after.total
    );
    // Same numbers as recomputing directly under the new weights.
    let mut params = scenario.params;
    params.weights = w;
    assert_eq!(
        doc.compositions,
        evaluate_scenario(&scenario, &params).unwrap()
    );
    assert_eq!(state(&app).await.overrides.weights, Some(w));
}

#[tokio::test]
async fn invalid_weights_are_rejected_and_prior_reports_kept() {
    let (app, _) = app(edge_scenario());
    let before = state(&app).await;
    let body = r#"{"weights": {"w_collision": 0.5, "w_fall": 0.5, "w_grasp": 0.2}}"#.to_string();
    let (status, err): (_, ErrorBody) = call_json(&app, "POST", "/what-if", Some(body)).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(err.category, "validation");
    assert!(err.field_path.starts_with("weights"), "{}", err.field_path);
    assert_eq!(state(&app).await, before);
}

#[tokio::test]
async fn malformed_bodies_are_parse_or_schema_errors() {
    let (app, _) = app(edge_scenario());
    let (status, err): (_, ErrorBody) = call_json(&app, "POST", "/what-if", Some("{".into())).await;
    assert_eq!(
        (status, err.category.as_str()),
        (StatusCode::BAD_REQUEST, "parse")
    );

    let body = r#"{"weights": {"w_collision": 0.3, "w_fall": 0.5, "w_grasp": 0.2, "w_extra": 0}}"#;
    let (status, err): (_, ErrorBody) =
        call_json(&app, "POST", "/what-if", Some(body.into())).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(
        (err.category.as_str(), err.field_path.as_str()),
        ("schema", "weights.w_extra")
    );

    let (status, err): (_, ErrorBody) = call_json(
        &app,
        "POST",
        "/commit",
        Some(r#"{"composition_id": "reach"}"#.into()),
    )
    .await;
    assert_eq!(
        (status, err.category.as_str()),
        (StatusCode::UNPROCESSABLE_ENTITY, "schema")
    );
}

#[tokio::test]
async fn commits_are_deterministic_and_append_once() {
    let (app, _) = app(minimal_scenario());
    let zero = Overrides {
        weights: None,
        noise: Some(NoiseModel {
            obstacle_pose_sigma: 0.0,
            com_sigma: 0.0,
            trials: 10,
            seed: 1,
        }),
    };
    let (status, _): (_, ReportDocument) = call_json(
        &app,
        "POST",
        "/what-if",
        Some(serde_json::to_string(&zero).unwrap()),
    )
    .await;
    assert_eq!(status, StatusCode::OK);
    let commit = r#"{"composition_id": "reach", "seed": 42}"#.to_string();
    let (s1, a): (_, HistoryEntry) = call_json(&app, "POST", "/commit", Some(commit.clone())).await;
    let (s2, b): (_, HistoryEntry) = call_json(&app, "POST", "/commit", Some(commit)).await;
    assert_eq!((s1, s2), (StatusCode::OK, StatusCode::OK));
    assert_eq!(a.outcome, Outcome::Success);
    assert_eq!((a.outcome, a.detail, a.seed), (b.outcome, b.detail, b.seed));
    assert_eq!((a.seq, b.seq), (0, 1));
    let (_, history): (_, HistoryResponse) = call_json(&app, "GET", "/history", None).await;
    assert_eq!(history.entries, vec![a, b]);
}

#[tokio::test]
async fn unknown_composition_is_not_found_and_leaves_history() {
    let (app, _) = app(minimal_scenario());
    let (status, err): (_, ErrorBody) = call_json(
        &app,
        "POST",
        "/commit",
        Some(r#"{"composition_id": "nope", "seed": 1}"#.into()),
    )
    .await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    assert_eq!(
        (err.category.as_str(), err.field_path.as_str()),
        ("not_found", "composition_id")
    );
    assert!(state(&app).await.history.is_empty());
    let (status, _): (_, ErrorBody) = call_json(&app, "GET", "/series/nope", None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn uninitialized_state_reports_its_category() {
    let app = router(AppState::empty());
    let (status, err): (_, ErrorBody) = call_json(&app, "GET", "/state", None).await;
    assert_eq!(status, StatusCode::SERVICE_UNAVAILABLE);
    assert_eq!(err.category, "uninitialized");
}

#[tokio::test]
async fn series_expose_plot_data() {
    let scenario = tabletop_scenario();
    let session = Session::new(scenario).unwrap();
    let expected = session.series("dual_arm").unwrap();
    let app = router(AppState::new(session));
    let (status, series): (_, riskcomp_core::composer::CompositionSeries) =
        call_json(&app, "GET", "/series/dual_arm", None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(series, expected);
    assert_eq!(series.d_series.len(), series.track.len());
    assert!(series.track.iter().all(|p| p.support.len() >= 3));
}

#[tokio::test(flavor = "multi_thread", worker_threads = 4)]
async fn concurrent_commits_get_a_total_order() {
    let (app, _) = app(minimal_scenario());
    let tasks: Vec<_> = (0..16)
        .map(|seed| {
            let app = app.clone();
            tokio::spawn(async move {
                let body = format!(r#"{{"composition_id": "reach", "seed": {seed}}}"#);
                call_json::<HistoryEntry>(&app, "POST", "/commit", Some(body))
                    .await
                    .1
            })
        })
        .collect();
    let mut seqs = Vec::new();
    for t in tasks {
        seqs.push(t.await.unwrap().seq);
    }
    seqs.sort();
    assert_eq!(seqs, (0..16).collect::<Vec<u64>>());
    let snap = state(&app).await;
    let order: Vec<u64> = snap.history.iter().map(|e| e.seq).collect();
    assert_eq!(order, (0..16).collect::<Vec<u64>>());
}

#[test]
fn commit_outcomes_track_monte_carlo_rates() {
    let scenario = tabletop_scenario();
    let comp = scenario.composition("left_arm").unwrap().clone();
    let noise = scenario.params.noise;
    let mc = monte_carlo_failure(&comp, &scenario.obstacles, &noise).unwrap();
    let mut session = Session::new(scenario).unwrap();
    let n = 1000;
    let (mut coll, mut fall) = (0, 0);
    for seed in 0..n {
        let e = session.commit("left_arm", 10_000 + seed).unwrap();
        coll += e.detail.collided as u32;
        fall += e.detail.fell as u32;
    }
    let tol = 2.0 / (n as f64).sqrt();
    assert!((coll as f64 / n as f64 - mc.collision_failure_rate).abs() <= tol);
    assert!((fall as f64 / n as f64 - mc.fall_failure_rate).abs() <= tol);
    assert_eq!(session.history().len(), n as usize);
}
