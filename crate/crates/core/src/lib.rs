//! Risk assessment for composed robot actions.
//!
//! The crate evaluates three risk families over candidate action compositions:
//! grasp risk from grasp-matrix quality and pose deviation, collision risk from
//! body/obstacle proximity along a trajectory, and fall risk from the overlap of
//! a CoM uncertainty disk with the support polygon. Monte Carlo perturbation
//! trials estimate the failure rates those risks are meant to predict.

pub mod balance;
pub mod collision;
pub mod composer;
pub mod error;
pub mod fixtures;
pub mod geom;
pub mod grasp;
pub mod scenario;
pub mod trajectory;

pub use error::{Result, RiskError};
