//! Correlated Erdős–Rényi graph pairs: exact enumeration oracles, conditional
//! probabilities of labelled graphs and structures, brute-force alignment,
//! and a simulated random-binning compressor with side information.
//!
//! Everything exhaustive is meant for small `n` and is bounded by
//! [`structure::Limits`].

pub mod alignment;
pub mod codec;
pub mod error;
pub mod exact;
pub mod experiments;
pub mod graph;
pub mod logprob;
pub mod model;
pub mod permutation;
pub mod rng;
pub mod structure;

pub use error::{Error, Result};
pub use graph::{apply_permutation, pair_count, LabelledGraph};
pub use logprob::{LogProb, LogSumExp2};
pub use model::{
    entropy_report, log_conditional, log_joint_graph_prob, sample_pair, subsampling_model, EntropyReport,
    JointEdgeDistribution, ObjectKind, Observation, Side, SourceVariant,
};
pub use permutation::{compose, Permutation};
pub use structure::{canonicalize, Limits, StructureKey};
