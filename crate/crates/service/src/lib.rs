//! Operator session over a single scenario, plus its HTTP/JSON surface.
//!
//! [`Session`] is plain synchronous state: current what-if overrides, the
//! reports they produce, and an append-only history of committed trials.
//! With the `server` feature, [`http`] exposes it over axum with many
//! concurrent readers and a single writer.

mod session;
pub mod wire;

#[cfg(feature = "server")]
pub mod http;

pub use session::Session;
pub use wire::{
    CommitRequest, CompositionSummary, ErrorBody, HistoryEntry, HistoryResponse, Overrides,
    ScenarioSummary, Snapshot,
};
