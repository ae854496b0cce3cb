//! Grasp analysis: grasp matrix, quality, unresisted motions, pose-deviation
//! risk, and a quasi-static pre-grasp study.

mod hand;
mod matrix;
mod risk;

pub use hand::{
    close_hand, pregrasp_sweep, quasi_static_shake, sweep_to_csv, Finger, GraspFixture, GridOffset,
    Hand, HandState, ShakeParams, ShakeResult, SweepCell, CONTACT_TOLERANCE,
};
pub use matrix::{
    build_grasp_matrix, free_motions, grasp_quality, Contact, ContactModel, GraspMatrix,
};
pub use risk::{
    combined_grasp_risk, deviation_risk, GraspDeviation, GraspRiskConfig, GraspRiskWeights,
    SigmoidParams,
};
