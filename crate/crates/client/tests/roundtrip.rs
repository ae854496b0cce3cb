use riskcomp_client::{ClientError, RiskClient};
use riskcomp_core::composer::{NoiseModel, RiskWeights};
use riskcomp_core::fixtures::tabletop_scenario;
use riskcomp_service::http::{serve, AppState};
use riskcomp_service::{Overrides, Session};
use tokio::net::TcpListener;

async fn spawn(state: std::sync::Arc<AppState>) -> RiskClient {
    let listener = TcpListener::bind("127.0.0.1:0").await.unwrap();
    let addr = listener.local_addr().unwrap();
    tokio::spawn(serve(listener, state));
    RiskClient::new(format!("http://{addr}/"))
}

#[tokio::test]
async fn every_endpoint_round_trips() {
    let mut scenario = tabletop_scenario();
    scenario.params.noise.trials = 100;
    let session = Session::new(scenario).unwrap();
    let expected = session.snapshot();
    let client = spawn(AppState::new(session)).await;

    let snap = client.state().await.unwrap();
    assert_eq!(snap, expected);
    assert_eq!(snap.ranking, vec!["dual_arm", "right_arm", "left_arm"]);

    let report = client.report("dual_arm").await.unwrap();
    assert_eq!(
        &report,
        expected
            .reports
            .iter()
            .find(|r| r.id == "dual_arm")
            .unwrap()
    );

    let series = client.series("left_arm").await.unwrap();
    assert!(!series.d_series.is_empty());

    let overrides = Overrides {
        weights: Some(RiskWeights {
            w_collision: 0.1,
            w_fall: 0.8,
            w_grasp: 0.1,
        }),
        noise: Some(NoiseModel {
            obstacle_pose_sigma: 0.0,
            com_sigma: 0.0,
            trials: 10,
            seed: 3,
        }),
    };
    let doc = client.what_if(&overrides).await.unwrap();
    assert_eq!(doc.compositions.len(), 3);
    assert_eq!(client.state().await.unwrap().overrides, overrides);

    let a = client.commit("dual_arm", 9).await.unwrap();
    let b = client.commit("dual_arm", 9).await.unwrap();
    assert_eq!((a.outcome, a.detail), (b.outcome, b.detail));
    assert_eq!(client.history().await.unwrap(), vec![a, b]);
}

#[tokio::test]
async fn service_errors_surface_as_api_errors() {
    let client = spawn(AppState::new(Session::new(tabletop_scenario()).unwrap())).await;
    let err = client.commit("missing arm", 1).await.unwrap_err();
    assert!(err.is_request_error());
    match err {
        ClientError::Api { status, body } => {
            assert_eq!(status.as_u16(), 404);
            assert_eq!(body.category, "not_found");
        }
        other => panic!("unexpected {other}"),
    }
    let bad = Overrides {
        weights: Some(RiskWeights {
            w_collision: -1.0,
            w_fall: 1.0,
            w_grasp: 1.0,
        }),
        noise: None,
    };
    match client.what_if(&bad).await.unwrap_err() {
        ClientError::Api { status, body } => {
            assert_eq!(status.as_u16(), 422);
            assert_eq!(body.category, "validation");
        }
        other => panic!("unexpected {other}"),
    }

    let empty = spawn(AppState::empty()).await;
    match empty.state().await.unwrap_err() {
        ClientError::Api { status, body } => {
            assert_eq!(status.as_u16(), 503);
            assert_eq!(body.category, "uninitialized");
        }
        other => panic!("unexpected {other}"),
    }
}

#[tokio::test]
async fn unreachable_service_is_a_transport_error() {
    let listener = std::net::TcpListener::bind("127.0.0.1:0").unwrap();
    let addr = listener.local_addr().unwrap();
    drop(listener);
    let err = RiskClient::new(format!("http://{addr}"))
        .state()
        .await
        .unwrap_err();
    assert!(matches!(err, ClientError::Transport(_)));
    assert!(!err.is_request_error());
}
