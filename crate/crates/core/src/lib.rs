//! Multiplex-network analysis toolkit.
//!
//! Pipeline: load a multi-layer edge list ([`network`]), score node pairs
//! per layer and derive each pair's similarity rate from the least-squares
//! line through its sorted similarity vector ([`similarity`]), integrate the
//! reflection layers into one weighted graph and the ground-truth layers
//! into an essentiality graph ([`integrate`]), detect communities on both by
//! weighted-modularity maximization ([`community`]), and compare them with
//! overlap and edge-frequency reports ([`validate`]). [`synth`] plants known
//! communities for end-to-end recovery checks.
//!
//! Every stage is deterministic: randomized routines take an explicit seed
//! and all file outputs are byte-stable for identical inputs.

pub mod community;
pub mod error;
pub mod graph;
pub mod integrate;
pub mod network;
pub mod rng;
pub mod similarity;
pub mod synth;
pub mod validate;

pub use community::{
    exhaustive_best_partition, louvain, louvain_with, modularity, Partition, LouvainOptions,
};
pub use error::{Error, Result};
pub use graph::WeightedGraph;
pub use integrate::{build_essentiality_network, build_rate_network, LayerWeightMap};
pub use network::{LayerStats, MultiplexBuilder, MultiplexNetwork, NodeId, Nodes};
pub use similarity::{
    fit_line, jaccard, similarity_rate, similarity_vector, LineFit, RateCase, SimilarityMetric,
    SimilarityVector, DEFAULT_E_MAX,
};
pub use synth::{generate, PlantedSpec};
pub use validate::{
    edge_frequency, overlap_rate, overlap_report, write_reports, EdgeFrequencyReport,
    OverlapReport, ReportMeta,
};
