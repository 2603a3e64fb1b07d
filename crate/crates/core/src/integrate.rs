//! Network integration: rate network and essentiality network builders.
//!
//! The rate network aggregates a subset of layers (the "reflections") into
//! one weighted graph whose edge weights are the pairs' similarity rates;
//! pairs with an all-zero similarity vector fall into the rate-0 case and
//! produce no edge. The essentiality network sums configured per-layer
//! weights over the ground-truth layers.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::network::{Layer, MultiplexNetwork, NodeId};
use crate::similarity::{rate_outcome, LineFit, RateCase, SimilarityMetric};

/// Positive per-layer weights for essentiality aggregation, keyed by layer
/// name.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LayerWeightMap {
    entries: BTreeMap<String, f64>,
}

impl LayerWeightMap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, layer: impl Into<String>, weight: f64) {
        self.entries.insert(layer.into(), weight);
    }

    pub fn get(&self, layer: &str) -> Option<f64> {
        self.entries.get(layer).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries in layer-name order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.entries.iter().map(|(k, &v)| (k.as_str(), v))
    }
}

impl FromIterator<(String, f64)> for LayerWeightMap {
    fn from_iter<T: IntoIterator<Item = (String, f64)>>(iter: T) -> Self {
        LayerWeightMap {
            entries: iter.into_iter().collect(),
        }
    }
}

fn resolve_layers<'a, S: AsRef<str>>(
    net: &'a MultiplexNetwork,
    names: &[S],
) -> Result<Vec<&'a Layer>> {
    let mut seen = std::collections::HashSet::new();
    names
        .iter()
        .map(|name| {
            let name = name.as_ref();
            if !seen.insert(name) {
                return Err(Error::InvalidSpec(format!(
                    "layer {name:?} listed more than once"
                )));
            }
            net.layer(name)
        })
        .collect()
}

/// Nodes with at least one edge in any of the given layers, ascending.
/// Everything else has an all-zero similarity vector against every partner
/// and cannot contribute an edge.
fn active_candidates(net: &MultiplexNetwork, layers: &[&Layer]) -> Vec<NodeId> {
    net.nodes()
        .iter()
        .filter(|&u| layers.iter().any(|l| l.degree(u) > 0))
        .collect()
}

/// Build the weighted rate network over `layer_names`.
///
/// Every unordered node pair with at least one nonzero per-layer similarity
/// gets an edge weighted by its similarity rate; rate-0 pairs are omitted.
/// Pure per-pair work, parallelized over the candidate set with a
/// deterministic merge.
pub fn build_rate_network<S: AsRef<str> + Sync>(
    net: &MultiplexNetwork,
    layer_names: &[S],
    metric: SimilarityMetric,
    e_max: f64,
) -> Result<WeightedGraph> {
    if layer_names.len() < 2 {
        return Err(Error::TooFewLayers {
            got: layer_names.len(),
            min: 2,
        });
    }
    let layers = resolve_layers(net, layer_names)?;
    let candidates = active_candidates(net, &layers);

    let per_node: Vec<Vec<((NodeId, NodeId), f64)>> = candidates
        .par_iter()
        .enumerate()
        .map(|(i, &u)| {
            let mut out = Vec::new();
            let mut values = vec![0.0; layers.len()];
            for &v in &candidates[i + 1..] {
                let mut all_zero = true;
                for (li, layer) in layers.iter().enumerate() {
                    let s = metric.score(layer, u, v);
                    values[li] = s;
                    all_zero &= s == 0.0;
                }
                if all_zero {
                    continue;
                }
                let outcome = rate_outcome(&values, e_max)?;
                if outcome.rate > 0.0 {
                    out.push(((u, v), outcome.rate));
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;

    WeightedGraph::from_edges(net.nodes_arc(), per_node.into_iter().flatten())
}

/// Per-pair evaluation detail for the diagnostics dump: similarities in
/// layer order (before sorting), the fitted line, and the dispatched case.
#[derive(Debug, Clone)]
pub struct PairDiagnostic {
    pub a: NodeId,
    pub b: NodeId,
    pub values: Vec<f64>,
    pub fit: LineFit,
    pub case: RateCase,
    pub rate: f64,
}

/// Diagnostics for every pair that carries a nonzero similarity somewhere,
/// sorted by `(min label, max label)`.
pub fn pair_diagnostics<S: AsRef<str>>(
    net: &MultiplexNetwork,
    layer_names: &[S],
    metric: SimilarityMetric,
    e_max: f64,
) -> Result<Vec<PairDiagnostic>> {
    if layer_names.len() < 2 {
        return Err(Error::TooFewLayers {
            got: layer_names.len(),
            min: 2,
        });
    }
    let layers = resolve_layers(net, layer_names)?;
    let candidates = active_candidates(net, &layers);

    let mut rows = Vec::new();
    let mut values = vec![0.0; layers.len()];
    for (i, &u) in candidates.iter().enumerate() {
        for &v in &candidates[i + 1..] {
            let mut all_zero = true;
            for (li, layer) in layers.iter().enumerate() {
                let s = metric.score(layer, u, v);
                values[li] = s;
                all_zero &= s == 0.0;
            }
            if all_zero {
                continue;
            }
            let outcome = rate_outcome(&values, e_max)?;
            rows.push(PairDiagnostic {
                a: u,
                b: v,
                values: values.clone(),
                fit: outcome.fit,
                case: outcome.case,
                rate: outcome.rate,
            });
        }
    }
    let nodes = net.nodes();
    rows.sort_by(|x, y| {
        let kx = ordered_labels(nodes.label(x.a), nodes.label(x.b));
        let ky = ordered_labels(nodes.label(y.a), nodes.label(y.b));
        kx.cmp(&ky)
    });
    Ok(rows)
}

fn ordered_labels<'a>(a: &'a str, b: &'a str) -> (&'a str, &'a str) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Aggregate the weighted ground-truth layers into the essentiality network.
///
/// An edge exists iff the pair appears in at least one weighted layer; its
/// weight is the sum of the weights of the layers containing it. Nodes with
/// no edge in any weighted layer are left out of the graph's universe.
pub fn build_essentiality_network(
    net: &MultiplexNetwork,
    weights: &LayerWeightMap,
) -> Result<WeightedGraph> {
    if weights.is_empty() {
        return Err(Error::EmptyWeights);
    }
    for (name, w) in weights.iter() {
        net.layer(name)?;
        if !w.is_finite() || w <= 0.0 {
            return Err(Error::InvalidWeight {
                layer: name.to_string(),
                weight: w,
            });
        }
    }
    let mut acc: BTreeMap<(NodeId, NodeId), f64> = BTreeMap::new();
    for (name, w) in weights.iter() {
        for (u, v) in net.layer(name)?.edges() {
            *acc.entry((u, v)).or_insert(0.0) += w;
        }
    }
    WeightedGraph::from_edges(net.nodes_arc(), acc)
}
