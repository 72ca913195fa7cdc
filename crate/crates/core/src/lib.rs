//! Exact inference over small discrete causal networks, together with the
//! confidence that the network structure itself induces on each belief.
//!
//! A belief `BEL(E)` is accompanied by the distribution of `BEL(E | c)` over
//! the combinations `c` of a structurally derived contingency set. The mean
//! of that distribution is `BEL(E)`; its spread (standard deviation, range)
//! measures how firmly the belief is held.

pub mod confidence;
pub mod enumerate;
pub mod error;
pub mod inference;
pub mod model;
pub mod scenario;

pub use confidence::{
    belief_distribution, derive_contingency_set, refine_virtual_finding, summarize, top_k_distribution,
    BeliefDistribution, BeliefPoint, Combination, ConfidenceSummary, ContingencySet, Refinement, Target,
};
pub use enumerate::Strategy;
pub use error::{Error, Result, ValidationError};
pub use inference::{
    conditional_belief, evidence_weight, posterior, posterior_joint, probability_of_evidence, EvidenceSet,
    HardFinding, StateDistribution, VirtualFinding,
};
pub use model::{load_network, Assignment, Network, NetworkDoc, NodeDoc, Variable, VariableDoc};
pub use scenario::{run_scenario, Scenario, ScenarioReport, Snapshot, Step};
