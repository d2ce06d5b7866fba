//! Deterministic rankings from pairwise dominance probabilities, with
//! uncertainty quantified by simultaneous and individual rank confidence
//! intervals built through the Worst-Best method.
//!
//! The pipeline: a [`rank::RankMatrix`] of per-ranker orderings (missing
//! cells allowed) is canonicalized, pairwise dominance probabilities are
//! estimated over each pair's shared rankers, and the two criteria score
//! every entity — CPDP sums the dominance probabilities (generalizing Borda
//! count), CTPDP counts majority wins (generalizing Copeland). Asymptotic
//! variances of the scores turn into integer rank intervals by counting how
//! many competitors' score intervals lie certainly or possibly beyond each
//! entity's. The [`simulation`] module reproduces the supporting coverage
//! experiments against closed-form normal truth.

pub mod criteria;
pub mod dominance;
pub mod error;
pub mod inference;
pub mod numerics;
pub mod rank;
pub mod simulation;

pub use criteria::{Criterion, RankVector, ScoreVector};
pub use dominance::{DominanceEstimate, JointDirection, JointTable, ZeroOverlapPolicy};
pub use error::{RankError, ValidationIssue, ValidationReport};
pub use inference::{Analysis, CiMode, RankInterval, ScoreInterval, ZStyle};
pub use numerics::{BinomialTailQuery, Probability};
pub use rank::{MissingIndex, Orientation, RankMatrix};
pub use simulation::{CoverageReport, Missingness, Scenario, TruthTable};
