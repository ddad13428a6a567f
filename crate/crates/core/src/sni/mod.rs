//! Strong non-integrability: backward sequences, bump functions, the
//! perturbation construction, temporal distances and the evidence checker.

mod backward;
mod bump;
mod check;
mod construct;
mod plan;

pub use backward::{find_disjoint_backward_sequences, BackwardCase, BackwardSequence};
pub use bump::{BumpCore, BumpFunction, BumpParams, CombinatorialBall};
pub use check::{
    boundary_level, branch_depth, check_sni, four_term_sums, openness_radius, sampled_holder, temporal_distance,
    CheckConfig, EvidenceRow, HolderSample, SniReport, TailModel,
};
pub use construct::{construct_perturbation, find_target_tiles, openness_perturbation, PlanConfig};
pub use plan::{
    c26, c27, eps_bound, fmt_word, m0_lower, n0, parse_word, DeltaEntry, DeltaKey, DeltaTable, Perturbation,
    PerturbationPlan,
};

use crate::complex::ComplexError;
use crate::expansion::SelectError;

#[derive(Debug, thiserror::Error)]
pub enum SniError {
    #[error("the rule admits neither backward-sequence case; it cannot be expanding")]
    NoBackwardSequences,
    #[error("bump parameters need N >= 1 and D_N >= 2")]
    BadBumpParams,
    #[error("centre named at level {level}, beyond n + N = {max}")]
    CentreLevel { level: usize, max: usize },
    #[error("ball index {index} outside [0, {max}] or empty index word")]
    BallIndex { index: u32, max: u32 },
    #[error("ε = {eps} outside the admissible range (0, {bound})")]
    EpsRange { eps: f64, bound: f64 },
    #[error("base potential has no finite Hölder norm bound")]
    NoHolderBound,
    #[error("no intersecting target tiles inside the image of ξ₀ for M₀ in {from}..={to}")]
    NoTargetTiles { from: usize, to: usize },
    #[error("a non-constant base supports a single δ generation (got {0})")]
    ExactGenerations(usize),
    #[error("{count} tiles exceed the enumeration limit {limit}")]
    TooMany { count: u64, limit: u64 },
    #[error("witnesses u¹, u² of one colour are not separated")]
    WitnessSeparation,
    #[error("plan line {line}: {msg}")]
    Plan { line: usize, msg: String },
    #[error(transparent)]
    Select(#[from] SelectError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}
