//! Synthetic planted-community multiplex networks.
//!
//! Generates stochastic-block layers sharing one planted partition so the
//! full pipeline can be validated against known ground truth: a fraction of
//! layers (`persistence`) express the community structure at `p_in`/`p_out`,
//! the rest are pure noise at `p_out`. Generation is a single deterministic
//! pass over the ChaCha stream for the given seed.

use crate::community::Partition;
use crate::error::{Error, Result};
use crate::network::{MultiplexBuilder, MultiplexNetwork};
use crate::rng;

#[derive(Debug, Clone, PartialEq)]
pub struct PlantedSpec {
    pub nodes: usize,
    pub layers: usize,
    /// Community sizes; must sum to `nodes`.
    pub communities: Vec<usize>,
    /// Intra-community edge probability in structured layers.
    pub p_in: f64,
    /// Inter-community (and noise-layer) edge probability.
    pub p_out: f64,
    /// Fraction of layers expressing the community structure.
    pub persistence: f64,
    pub seed: u64,
}

impl Default for PlantedSpec {
    fn default() -> Self {
        PlantedSpec {
            nodes: 40,
            layers: 4,
            communities: vec![20, 20],
            p_in: 0.6,
            p_out: 0.05,
            persistence: 1.0,
            seed: 42,
        }
    }
}

impl PlantedSpec {
    pub fn validate(&self) -> Result<()> {
        if self.nodes == 0 {
            return Err(Error::InvalidSpec("node count must be positive".into()));
        }
        if self.layers < 2 {
            return Err(Error::InvalidSpec(format!(
                "a multiplex network needs at least 2 layers, got {}",
                self.layers
            )));
        }
        if self.communities.is_empty() || self.communities.iter().any(|&s| s == 0) {
            return Err(Error::InvalidSpec(
                "community sizes must be positive".into(),
            ));
        }
        let total: usize = self.communities.iter().sum();
        if total != self.nodes {
            return Err(Error::InvalidSpec(format!(
                "community sizes sum to {total}, expected {}",
                self.nodes
            )));
        }
        for (name, p) in [
            ("p_in", self.p_in),
            ("p_out", self.p_out),
            ("persistence", self.persistence),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidSpec(format!(
                    "{name} must be in [0, 1], got {p}"
                )));
            }
        }
        Ok(())
    }

    /// Number of leading layers that carry the planted structure.
    pub fn structured_layers(&self) -> usize {
        ((self.persistence * self.layers as f64).round() as usize).min(self.layers)
    }
}

/// Generate a network and its planted ground-truth partition.
pub fn generate(spec: &PlantedSpec) -> Result<(MultiplexNetwork, Partition)> {
    spec.validate()?;
    let node_width = spec.nodes.to_string().len();
    let layer_width = spec.layers.to_string().len();
    let labels: Vec<String> = (0..spec.nodes)
        .map(|i| format!("n{:0width$}", i + 1, width = node_width))
        .collect();

    // block id per node, in label order
    let mut block = Vec::with_capacity(spec.nodes);
    for (ci, &size) in spec.communities.iter().enumerate() {
        block.extend(std::iter::repeat(ci as u32).take(size));
    }

    let mut builder = MultiplexBuilder::new();
    for label in &labels {
        builder.node(label)?;
    }
    let structured = spec.structured_layers();
    let mut rng = rng::seeded(spec.seed);
    for l in 0..spec.layers {
        let name = format!("layer_{:0width$}", l + 1, width = layer_width);
        builder.layer(&name)?;
        for i in 0..spec.nodes {
            for j in (i + 1)..spec.nodes {
                let p = if l < structured && block[i] == block[j] {
                    spec.p_in
                } else {
                    spec.p_out
                };
                // draw unconditionally so the stream is independent of p
                if rng::unit_f64(&mut rng) < p {
                    builder.edge(&name, &labels[i], &labels[j])?;
                }
            }
        }
    }
    let net = builder.build();
    let planted =
        Partition::from_assignment(block.into_iter().map(Some).collect());
    Ok((net, planted))
}
