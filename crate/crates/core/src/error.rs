use thiserror::Error;

use crate::digraph::TwoPartiteDigraph;
use crate::genericity::Requirement;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("vertex `{0}` appears twice on the same side")]
    DuplicateVertex(String),
    #[error("vertex `{0}` appears on both sides")]
    SideOverlap(String),
    #[error("edge ({0}, {1}) joins two vertices on the same side")]
    SameSideEdge(String, String),
    #[error("edges ({0}, {1}) and ({1}, {0}) are both present")]
    SymmetricEdgePair(String, String),
    #[error("edge ({0}, {1}) has an endpoint that is not a vertex")]
    UnknownEndpoint(String, String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),

    #[error("M_kappa needs kappa >= 2, got {0}")]
    KappaTooSmall(usize),
    #[error("invalid approximant spec: {0}")]
    InvalidSpec(String),
    #[error("no approximant found after {attempts} attempts (best level reached: {best_level:?}){}", .reason.as_deref().map(|r| format!("; {r}")).unwrap_or_default())]
    ApproximantNotFound { attempts: usize, best_level: Option<usize>, reason: Option<String> },
    #[error("witness closure hit the cap of {cap} new vertices with {} requirements unresolved", .remaining.len())]
    CapExceeded { cap: usize, partial: Box<TwoPartiteDigraph>, remaining: Vec<Requirement> },

    #[error("automorphism group exceeds the cap of {0} maps")]
    AutGroupTooLarge(usize),
    #[error("invalid partial map: {0}")]
    InvalidPartialMap(String),
    #[error("invalid requirement: {0}")]
    InvalidRequirement(String),

    #[error("back-and-forth step {step}: no witness for requirement ({requirement})")]
    InsufficientGenericity { step: usize, requirement: Requirement },
    #[error("target size {target} exceeds the largest possible partial map ({max})")]
    TargetExceedsStructure { target: usize, max: usize },
    #[error("underlying graph is not complete: `{0}` and `{1}` are not adjacent")]
    NotComplete(String, String),

    #[error("enumeration of {m}x{n} ({pairs} pairs) exceeds the budget of {budget} pairs")]
    BudgetExceeded { m: usize, n: usize, pairs: usize, budget: usize },
    #[error("{0}")]
    Format(String),
}
