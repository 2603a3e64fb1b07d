//! Undirected weighted graphs over a shared node registry.
//!
//! Both integration products (the similarity-rate network and the
//! essentiality network) are [`WeightedGraph`]s: positive-weight edges over
//! the registry of the source multiplex network. The graph carries an
//! explicit node universe; builders derive it from edge endpoints, so nodes
//! isolated in the source layers stay in the registry but outside the graph.
//!
//! File format: `node_a<TAB>node_b<TAB>weight` with weights printed to nine
//! significant digits, edges sorted by `(min label, max label)`, and
//! `#`-prefixed header lines recording provenance.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::network::{MultiplexBuilder, NodeId, Nodes};

#[derive(Debug, Clone)]
pub struct WeightedGraph {
    nodes: Arc<Nodes>,
    universe: Vec<NodeId>,
    edges: BTreeMap<(NodeId, NodeId), f64>,
    adj: Vec<Vec<(NodeId, f64)>>,
    strength: Vec<f64>,
    total_weight: f64,
}

impl WeightedGraph {
    /// Build from `((u, v), w)` items; the universe is the endpoint set.
    /// Self-loops and non-positive or non-finite weights are rejected;
    /// repeated pairs accumulate.
    pub fn from_edges(
        nodes: Arc<Nodes>,
        items: impl IntoIterator<Item = ((NodeId, NodeId), f64)>,
    ) -> Result<Self> {
        Self::with_universe(nodes, Vec::new(), items)
    }

    /// Like [`WeightedGraph::from_edges`] but with extra universe nodes
    /// (for example isolated nodes that should still be partitioned).
    pub fn with_universe(
        nodes: Arc<Nodes>,
        extra_universe: Vec<NodeId>,
        items: impl IntoIterator<Item = ((NodeId, NodeId), f64)>,
    ) -> Result<Self> {
        let mut edges: BTreeMap<(NodeId, NodeId), f64> = BTreeMap::new();
        for ((u, v), w) in items {
            if u == v {
                return Err(Error::SelfEdge(nodes.label(u).to_string()));
            }
            if !w.is_finite() || w <= 0.0 {
                return Err(Error::BadWeight {
                    a: nodes.label(u).to_string(),
                    b: nodes.label(v).to_string(),
                    weight: w,
                });
            }
            let key = if u < v { (u, v) } else { (v, u) };
            *edges.entry(key).or_insert(0.0) += w;
        }

        let mut universe: Vec<NodeId> = extra_universe;
        universe.extend(edges.keys().flat_map(|&(u, v)| [u, v]));
        universe.sort_unstable();
        universe.dedup();

        let mut adj = vec![Vec::new(); nodes.len()];
        let mut strength = vec![0.0; nodes.len()];
        let mut total_weight = 0.0;
        for (&(u, v), &w) in &edges {
            adj[u.index()].push((v, w));
            adj[v.index()].push((u, w));
            strength[u.index()] += w;
            strength[v.index()] += w;
            total_weight += w;
        }
        for nbrs in &mut adj {
            nbrs.sort_unstable_by_key(|&(v, _)| v);
        }

        Ok(WeightedGraph {
            nodes,
            universe,
            edges,
            adj,
            strength,
            total_weight,
        })
    }

    pub fn nodes(&self) -> &Nodes {
        &self.nodes
    }

    pub fn nodes_arc(&self) -> Arc<Nodes> {
        Arc::clone(&self.nodes)
    }

    /// Nodes that belong to this graph, ascending by id.
    pub fn universe(&self) -> &[NodeId] {
        &self.universe
    }

    /// Universe size (for builder-produced graphs: the active node count).
    pub fn node_count(&self) -> usize {
        self.universe.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Sum of edge weights (the modularity `m`).
    pub fn total_weight(&self) -> f64 {
        self.total_weight
    }

    pub fn weight(&self, u: NodeId, v: NodeId) -> Option<f64> {
        let key = if u < v { (u, v) } else { (v, u) };
        self.edges.get(&key).copied()
    }

    /// Edges `(u, v, w)` with `u < v`, ascending by id pair.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId, f64)> + '_ {
        self.edges.iter().map(|(&(u, v), &w)| (u, v, w))
    }

    /// Weighted neighbors of `u`, ascending by neighbor id.
    pub fn neighbors(&self, u: NodeId) -> &[(NodeId, f64)] {
        &self.adj[u.index()]
    }

    /// Weighted degree of `u` (0 for nodes outside the universe).
    pub fn strength(&self, u: NodeId) -> f64 {
        self.strength[u.index()]
    }

    /// Serialize; `header` lines are emitted first, prefixed with `# `.
    pub fn write<W: Write>(&self, mut w: W, header: &[String]) -> io::Result<()> {
        for line in header {
            writeln!(w, "# {line}")?;
        }
        let mut rows: Vec<(&str, &str, f64)> = self
            .edges()
            .map(|(u, v, weight)| {
                let (a, b) = (self.nodes.label(u), self.nodes.label(v));
                if a <= b {
                    (a, b, weight)
                } else {
                    (b, a, weight)
                }
            })
            .collect();
        rows.sort_unstable_by(|x, y| (x.0, x.1).cmp(&(y.0, y.1)));
        for (a, b, weight) in rows {
            writeln!(w, "{a}\t{b}\t{weight:.8e}")?;
        }
        Ok(())
    }

    pub fn save(&self, path: &Path, header: &[String]) -> Result<()> {
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        let mut w = BufWriter::new(file);
        self.write(&mut w, header).map_err(|e| Error::io(path, e))?;
        w.flush().map_err(|e| Error::io(path, e))
    }

    /// Parse the weighted-graph format, building a fresh registry from the
    /// labels in the file (first-seen order).
    pub fn load<R: BufRead>(reader: R) -> Result<Self> {
        let mut registry = MultiplexBuilder::new();
        let mut items: Vec<((NodeId, NodeId), f64)> = Vec::new();
        for (i, line) in reader.lines().enumerate() {
            let line = line.map_err(|e| Error::io("<input>", e))?;
            let line = line.strip_suffix('\r').unwrap_or(&line);
            let lineno = i + 1;
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 3 {
                return Err(Error::MalformedRecord {
                    line: lineno,
                    msg: format!(
                        "expected `node_a<TAB>node_b<TAB>weight`, found {} field(s)",
                        fields.len()
                    ),
                });
            }
            if fields[0] == fields[1] {
                return Err(Error::MalformedRecord {
                    line: lineno,
                    msg: format!("self-loop on node {:?}", fields[0]),
                });
            }
            let weight: f64 = fields[2].parse().map_err(|_| Error::MalformedRecord {
                line: lineno,
                msg: format!("cannot parse weight {:?}", fields[2]),
            })?;
            let u = registry.node(fields[0])?;
            let v = registry.node(fields[1])?;
            items.push(((u, v), weight));
        }
        let nodes = registry.build().nodes_arc();
        Self::from_edges(nodes, items)
    }

    pub fn load_path(path: &Path) -> Result<Self> {
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        Self::load(BufReader::new(file))
    }
}
