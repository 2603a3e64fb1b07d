//! Ground-truth validation: overlap rates and per-edge layer frequency.
//!
//! Experiment communities are matched against essentiality communities by
//! best overlap `O = |EX ∩ ES| / |ES|`; one row per experiment community,
//! argmax recorded, ties toward the lowest essentiality community id. Node
//! universes may differ (set intersection handles nodes present on only one
//! side). Edge frequency counts, for every essentiality edge, the number of
//! reflection layers containing that exact pair.

use std::collections::BTreeSet;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::community::Partition;
use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::network::{MultiplexNetwork, NodeId, Nodes};

/// `O = |ex ∩ es| / |es|`: the fraction of an essentiality community
/// recovered inside an experiment community.
pub fn overlap_rate(ex: &BTreeSet<NodeId>, es: &BTreeSet<NodeId>) -> Result<f64> {
    if es.is_empty() {
        return Err(Error::EmptyCommunity);
    }
    Ok(ex.intersection(es).count() as f64 / es.len() as f64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct OverlapRow {
    pub ex_community: u32,
    pub size: usize,
    pub best_es_community: u32,
    pub overlap: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OverlapReport {
    /// One row per experiment community, ascending by community id.
    pub rows: Vec<OverlapRow>,
    /// Arithmetic mean of the rows' overlaps.
    pub mean_overlap: f64,
}

/// Best-match overlap of every experiment community against the
/// essentiality communities.
pub fn overlap_report(experiment: &Partition, essentiality: &Partition) -> Result<OverlapReport> {
    if experiment.community_count() == 0 || essentiality.community_count() == 0 {
        return Err(Error::EmptyPartition);
    }
    let ex_sets = experiment.community_sets();
    let es_sets = essentiality.community_sets();
    let mut rows = Vec::with_capacity(ex_sets.len());
    for (ex_id, ex_set) in ex_sets.iter().enumerate() {
        let mut best_id = 0u32;
        let mut best = -1.0;
        for (es_id, es_set) in es_sets.iter().enumerate() {
            let o = overlap_rate(ex_set, es_set)?;
            if o > best {
                best = o;
                best_id = es_id as u32;
            }
        }
        rows.push(OverlapRow {
            ex_community: ex_id as u32,
            size: ex_set.len(),
            best_es_community: best_id,
            overlap: best,
        });
    }
    let mean_overlap = rows.iter().map(|r| r.overlap).sum::<f64>() / rows.len() as f64;
    Ok(OverlapReport { rows, mean_overlap })
}

#[derive(Debug, Clone, PartialEq)]
pub struct EdgeFrequencyRow {
    pub a: NodeId,
    pub b: NodeId,
    /// Number of reflection layers containing this exact pair.
    pub frequency: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EdgeFrequencyReport {
    /// One row per essentiality edge, sorted by `(min label, max label)`.
    pub rows: Vec<EdgeFrequencyRow>,
    pub mean_frequency: f64,
}

/// For each essentiality edge, count the reflection layers containing it.
pub fn edge_frequency<S: AsRef<str>>(
    essentiality: &WeightedGraph,
    net: &MultiplexNetwork,
    reflection_layers: &[S],
) -> Result<EdgeFrequencyReport> {
    if reflection_layers.is_empty() {
        return Err(Error::TooFewLayers { got: 0, min: 1 });
    }
    let layers: Vec<_> = reflection_layers
        .iter()
        .map(|name| net.layer(name.as_ref()))
        .collect::<Result<_>>()?;

    let registry = essentiality.nodes();
    let mut rows: Vec<EdgeFrequencyRow> = essentiality
        .edges()
        .map(|(a, b, _)| {
            let frequency = layers
                .iter()
                .filter(|layer| layer.contains_edge(a, b))
                .count();
            EdgeFrequencyRow { a, b, frequency }
        })
        .collect();
    rows.sort_by(|x, y| {
        let kx = label_key(registry, x.a, x.b);
        let ky = label_key(registry, y.a, y.b);
        kx.cmp(&ky)
    });
    let mean_frequency = if rows.is_empty() {
        0.0
    } else {
        rows.iter().map(|r| r.frequency).sum::<usize>() as f64 / rows.len() as f64
    };
    Ok(EdgeFrequencyReport {
        rows,
        mean_frequency,
    })
}

fn label_key<'a>(nodes: &'a Nodes, a: NodeId, b: NodeId) -> (&'a str, &'a str) {
    let (la, lb) = (nodes.label(a), nodes.label(b));
    if la <= lb {
        (la, lb)
    } else {
        (lb, la)
    }
}

/// Everything `summary.json` needs beyond the two reports.
#[derive(Debug, Clone, Default)]
pub struct ReportMeta {
    pub seed: u64,
    pub es_community_count: usize,
    pub es_node_count: usize,
    pub es_edge_count: usize,
    /// Data-quality notes, e.g. deviations from expected reference counts.
    pub flags: Vec<String>,
}

#[derive(Serialize)]
struct Summary<'a> {
    mean_overlap: f64,
    mean_frequency: f64,
    ex_community_count: usize,
    es_community_count: usize,
    es_node_count: usize,
    es_edge_count: usize,
    seed: u64,
    flags: &'a [String],
}

/// Summary figures are rounded to 3 decimals; the CSVs keep full precision.
fn round3(x: f64) -> f64 {
    (x * 1000.0).round() / 1000.0
}

/// Write `overlap.csv`, `edge_frequency.csv`, and `summary.json` into
/// `dir`, returning the manifest in write order (summary last).
pub fn write_reports(
    overlap: &OverlapReport,
    freq: &EdgeFrequencyReport,
    meta: &ReportMeta,
    nodes: &Nodes,
    dir: &Path,
) -> Result<Vec<PathBuf>> {
    let overlap_path = dir.join("overlap.csv");
    {
        let file = File::create(&overlap_path).map_err(|e| Error::io(&overlap_path, e))?;
        let mut csv = csv::Writer::from_writer(BufWriter::new(file));
        csv.write_record(["ex_community", "size", "best_es_community", "overlap"])?;
        for row in &overlap.rows {
            csv.write_record([
                row.ex_community.to_string(),
                row.size.to_string(),
                row.best_es_community.to_string(),
                row.overlap.to_string(),
            ])?;
        }
        csv.flush().map_err(|e| Error::io(&overlap_path, e))?;
    }

    let freq_path = dir.join("edge_frequency.csv");
    {
        let file = File::create(&freq_path).map_err(|e| Error::io(&freq_path, e))?;
        let mut csv = csv::Writer::from_writer(BufWriter::new(file));
        csv.write_record(["node_a", "node_b", "frequency"])?;
        for row in &freq.rows {
            let (a, b) = label_key(nodes, row.a, row.b);
            csv.write_record([a, b, &row.frequency.to_string()])?;
        }
        csv.flush().map_err(|e| Error::io(&freq_path, e))?;
    }

    let summary_path = dir.join("summary.json");
    {
        let summary = Summary {
            mean_overlap: round3(overlap.mean_overlap),
            mean_frequency: round3(freq.mean_frequency),
            ex_community_count: overlap.rows.len(),
            es_community_count: meta.es_community_count,
            es_node_count: meta.es_node_count,
            es_edge_count: meta.es_edge_count,
            seed: meta.seed,
            flags: &meta.flags,
        };
        let mut text = serde_json::to_string_pretty(&summary)
            .expect("summary serialization cannot fail");
        text.push('\n');
        let mut file = File::create(&summary_path).map_err(|e| Error::io(&summary_path, e))?;
        file.write_all(text.as_bytes())
            .map_err(|e| Error::io(&summary_path, e))?;
    }

    Ok(vec![overlap_path, freq_path, summary_path])
}
