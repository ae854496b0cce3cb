//! Async client for the riskcomp service endpoints.

use reqwest::{Client, StatusCode};
use riskcomp_core::composer::{CompositionSeries, RiskReport};
use riskcomp_core::scenario::ReportDocument;
use riskcomp_service::{
    CommitRequest, ErrorBody, HistoryEntry, HistoryResponse, Overrides, Snapshot,
};
use serde::de::DeserializeOwned;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ClientError {
    /// The service answered with a structured error.
    #[error("{status}: {} error at `{}`: {}", .body.category, .body.field_path, .body.message)]
    Api { status: StatusCode, body: ErrorBody },
    #[error("transport error: {0}")]
    Transport(#[from] reqwest::Error),
    #[error("unexpected response ({status}): {message}")]
    Decode { status: StatusCode, message: String },
}

impl ClientError {
    /// True for errors caused by the request itself (bad input or unknown id).
    pub fn is_request_error(&self) -> bool {
        matches!(self, ClientError::Api { status, .. } if status.is_client_error())
    }
}

#[derive(Debug, Clone)]
pub struct RiskClient {
    base: String,
    http: Client,
}

impl RiskClient {
    /// `base` is the service root, e.g. `http://127.0.0.1:8080`.
    pub fn new(base: impl Into<String>) -> Self {
        RiskClient {
            base: base.into().trim_end_matches('/').to_string(),
            http: Client::new(),
        }
    }

    fn url(&self, path: &str) -> String {
        format!("{}{}", self.base, path)
    }

    async fn decode<T: DeserializeOwned>(resp: reqwest::Response) -> Result<T, ClientError> {
        let status = resp.status();
        let bytes = resp.bytes().await?;
        if status.is_success() {
            return serde_json::from_slice(&bytes).map_err(|e| ClientError::Decode {
                status,
                message: e.to_string(),
            });
        }
        match serde_json::from_slice::<ErrorBody>(&bytes) {
            Ok(body) => Err(ClientError::Api { status, body }),
            Err(_) => Err(ClientError::Decode {
                status,
                message: String::from_utf8_lossy(&bytes).into_owned(),
            }),
        }
    }

    async fn get<T: DeserializeOwned>(&self, path: &str) -> Result<T, ClientError> {
        Self::decode(self.http.get(self.url(path)).send().await?).await
    }

    async fn post<B: Serialize, T: DeserializeOwned>(
        &self,
        path: &str,
        body: &B,
    ) -> Result<T, ClientError> {
        Self::decode(self.http.post(self.url(path)).json(body).send().await?).await
    }

    pub async fn state(&self) -> Result<Snapshot, ClientError> {
        self.get("/state").await
    }

    pub async fn report(&self, composition_id: &str) -> Result<RiskReport, ClientError> {
        self.get(&format!("/reports/{}", encode(composition_id)))
            .await
    }

    pub async fn what_if(&self, overrides: &Overrides) -> Result<ReportDocument, ClientError> {
        self.post("/what-if", overrides).await
    }

    pub async fn commit(
        &self,
        composition_id: &str,
        seed: u64,
    ) -> Result<HistoryEntry, ClientError> {
        let req = CommitRequest {
            composition_id: composition_id.to_string(),
            seed,
        };
        self.post("/commit", &req).await
    }

    pub async fn history(&self) -> Result<Vec<HistoryEntry>, ClientError> {
        Ok(self.get::<HistoryResponse>("/history").await?.entries)
    }

    pub async fn series(&self, composition_id: &str) -> Result<CompositionSeries, ClientError> {
        self.get(&format!("/series/{}", encode(composition_id)))
            .await
    }
}

/// Percent-encodes a path segment.
fn encode(segment: &str) -> String {
    let mut out = String::with_capacity(segment.len());
    for b in segment.bytes() {
        if b.is_ascii_alphanumeric() || matches!(b, b'-' | b'_' | b'.' | b'~') {
            out.push(b as char);
        } else {
            out.push_str(&format!("%{b:02X}"));
        }
    }
    out
}
