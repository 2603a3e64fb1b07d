//! Multi-layer network data model and edge-list ingestion.
//!
//! A [`MultiplexNetwork`] is an ordered list of named layers over one shared
//! node registry. Layers are undirected simple graphs; a node registered
//! anywhere resolves in every layer (with an empty neighborhood where it has
//! no edges). Networks are immutable once built, so they can be read
//! concurrently without synchronization.
//!
//! The on-disk format is line oriented UTF-8: `#`-prefixed lines are
//! comments, blank lines are ignored, and every data line is
//! `layer<TAB>source<TAB>target` with literal tab separators. Serialization
//! emits layers in first-seen order with edges sorted by
//! `(min label, max label)`.

use std::collections::{BTreeSet, HashMap};
use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Dense handle for a node registered in a [`Nodes`] registry.
///
/// Ids are only meaningful relative to the registry that issued them; the
/// wrapped index is a bijection onto `0..len`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub(crate) u32);

impl NodeId {
    /// Position of this node in its registry.
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Registry mapping external node labels to dense indices.
#[derive(Debug, Default, Clone)]
pub struct Nodes {
    labels: Vec<String>,
    by_label: HashMap<String, NodeId>,
}

impl Nodes {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn get(&self, label: &str) -> Option<NodeId> {
        self.by_label.get(label).copied()
    }

    /// Like [`Nodes::get`] but failing with [`Error::UnknownNode`].
    pub fn require(&self, label: &str) -> Result<NodeId> {
        self.get(label)
            .ok_or_else(|| Error::UnknownNode(label.to_string()))
    }

    pub fn label(&self, id: NodeId) -> &str {
        &self.labels[id.index()]
    }

    /// All ids in index order.
    pub fn iter(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.labels.len() as u32).map(NodeId)
    }

    fn intern(&mut self, label: &str) -> NodeId {
        if let Some(id) = self.by_label.get(label) {
            return *id;
        }
        let id = NodeId(self.labels.len() as u32);
        self.labels.push(label.to_string());
        self.by_label.insert(label.to_string(), id);
        id
    }
}

/// One undirected simple graph of a multiplex network.
#[derive(Debug, Clone)]
pub struct Layer {
    name: String,
    adj: Vec<BTreeSet<NodeId>>,
    edge_count: usize,
}

impl Layer {
    pub fn name(&self) -> &str {
        &self.name
    }

    /// Open neighborhood of `node` in this layer. Empty for nodes without
    /// edges here, including nodes that only appear in other layers.
    pub fn neighbors(&self, node: NodeId) -> &BTreeSet<NodeId> {
        &self.adj[node.index()]
    }

    pub fn degree(&self, node: NodeId) -> usize {
        self.adj[node.index()].len()
    }

    pub fn contains_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.adj[u.index()].contains(&v)
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Number of nodes with degree >= 1 in this layer.
    pub fn active_node_count(&self) -> usize {
        self.adj.iter().filter(|n| !n.is_empty()).count()
    }

    /// Edges as `(u, v)` with `u < v`, ascending by index pair.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.adj.iter().enumerate().flat_map(|(i, nbrs)| {
            let u = NodeId(i as u32);
            nbrs.iter()
                .copied()
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }
}

/// Per-layer statistics in the shape of the dataset summary table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayerStats {
    pub name: String,
    pub active_nodes: usize,
    pub edges: usize,
}

/// Incremental constructor for [`MultiplexNetwork`].
#[derive(Debug, Default)]
pub struct MultiplexBuilder {
    nodes: Nodes,
    layers: Vec<(String, BTreeSet<(NodeId, NodeId)>)>,
    layer_index: HashMap<String, usize>,
}

impl MultiplexBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Register a node label (idempotent).
    pub fn node(&mut self, label: &str) -> Result<NodeId> {
        check_label(label, "node label")?;
        Ok(self.nodes.intern(label))
    }

    /// Declare a layer (idempotent); layer order is first-declaration order.
    pub fn layer(&mut self, name: &str) -> Result<usize> {
        check_label(name, "layer name")?;
        if name.starts_with('#') {
            return Err(Error::InvalidSpec(format!(
                "layer name {name:?} must not start with '#'"
            )));
        }
        Ok(self.layer_slot(name))
    }

    fn layer_slot(&mut self, name: &str) -> usize {
        if let Some(&i) = self.layer_index.get(name) {
            return i;
        }
        let i = self.layers.len();
        self.layers.push((name.to_string(), BTreeSet::new()));
        self.layer_index.insert(name.to_string(), i);
        i
    }

    /// Add an undirected edge, registering nodes and layer as needed.
    /// Returns `false` if the edge was already present.
    pub fn edge(&mut self, layer: &str, a: &str, b: &str) -> Result<bool> {
        if a == b {
            return Err(Error::SelfEdge(a.to_string()));
        }
        let slot = self.layer(layer)?;
        let ia = self.node(a)?;
        let ib = self.node(b)?;
        let key = if ia < ib { (ia, ib) } else { (ib, ia) };
        Ok(self.layers[slot].1.insert(key))
    }

    pub fn build(self) -> MultiplexNetwork {
        let n = self.nodes.len();
        let layers = self
            .layers
            .into_iter()
            .map(|(name, edges)| {
                let mut adj = vec![BTreeSet::new(); n];
                for &(u, v) in &edges {
                    adj[u.index()].insert(v);
                    adj[v.index()].insert(u);
                }
                Layer {
                    name,
                    adj,
                    edge_count: edges.len(),
                }
            })
            .collect();
        MultiplexNetwork {
            nodes: Arc::new(self.nodes),
            layers,
            layer_index: self.layer_index,
        }
    }
}

fn check_label(label: &str, what: &str) -> Result<()> {
    if label.is_empty() {
        return Err(Error::InvalidSpec(format!("{what} must not be empty")));
    }
    if label.contains(['\t', '\n', '\r']) {
        return Err(Error::InvalidSpec(format!(
            "{what} {label:?} contains tab or newline"
        )));
    }
    Ok(())
}

/// A set of named layers over one shared node registry.
#[derive(Debug, Clone)]
pub struct MultiplexNetwork {
    nodes: Arc<Nodes>,
    layers: Vec<Layer>,
    layer_index: HashMap<String, usize>,
}

impl MultiplexNetwork {
    /// Parse the edge-list format from any line-oriented reader.
    pub fn load<R: BufRead>(reader: R) -> Result<Self> {
        let mut builder = MultiplexBuilder::new();
        for (i, line) in reader.lines().enumerate() {
            let line = line.map_err(|e| Error::io("<input>", e))?;
            let line = line.strip_suffix('\r').unwrap_or(&line);
            let lineno = i + 1;
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 3 {
                return Err(Error::MalformedLine {
                    line: lineno,
                    found: fields.len(),
                });
            }
            let (layer, a, b) = (fields[0], fields[1], fields[2]);
            if a == b {
                return Err(Error::SelfLoop {
                    line: lineno,
                    label: a.to_string(),
                });
            }
            match builder.edge(layer, a, b) {
                Ok(_) => {}
                Err(Error::InvalidSpec(msg)) => {
                    return Err(Error::MalformedRecord { line: lineno, msg })
                }
                Err(e) => return Err(e),
            }
        }
        Ok(builder.build())
    }

    pub fn load_str(text: &str) -> Result<Self> {
        Self::load(text.as_bytes())
    }

    pub fn load_path(path: &Path) -> Result<Self> {
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        Self::load(BufReader::new(file))
    }

    pub fn nodes(&self) -> &Nodes {
        &self.nodes
    }

    /// Shared handle to the registry, for graphs derived from this network.
    pub fn nodes_arc(&self) -> Arc<Nodes> {
        Arc::clone(&self.nodes)
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn layer_count(&self) -> usize {
        self.layers.len()
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn layer(&self, name: &str) -> Result<&Layer> {
        self.layer_index
            .get(name)
            .map(|&i| &self.layers[i])
            .ok_or_else(|| Error::UnknownLayer(name.to_string()))
    }

    /// Open neighborhood of `node` in the named layer.
    pub fn neighbors(&self, layer: &str, node: NodeId) -> Result<&BTreeSet<NodeId>> {
        Ok(self.layer(layer)?.neighbors(node))
    }

    /// `(name, active nodes, edges)` per layer, in layer order.
    pub fn layer_stats(&self) -> Vec<LayerStats> {
        self.layers
            .iter()
            .map(|l| LayerStats {
                name: l.name.clone(),
                active_nodes: l.active_node_count(),
                edges: l.edge_count,
            })
            .collect()
    }

    /// Serialize to the edge-list format: layers in order, edges sorted by
    /// `(min label, max label)`.
    pub fn write<W: Write>(&self, mut w: W) -> io::Result<()> {
        for layer in &self.layers {
            let mut rows: Vec<(&str, &str)> = layer
                .edges()
                .map(|(u, v)| {
                    let (a, b) = (self.nodes.label(u), self.nodes.label(v));
                    if a <= b {
                        (a, b)
                    } else {
                        (b, a)
                    }
                })
                .collect();
            rows.sort_unstable();
            for (a, b) in rows {
                writeln!(w, "{}\t{}\t{}", layer.name, a, b)?;
            }
        }
        Ok(())
    }

    pub fn to_edge_list_string(&self) -> String {
        let mut buf = Vec::new();
        self.write(&mut buf).expect("writing to Vec cannot fail");
        String::from_utf8(buf).expect("labels are valid UTF-8")
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        let mut w = BufWriter::new(file);
        self.write(&mut w).map_err(|e| Error::io(path, e))?;
        w.flush().map_err(|e| Error::io(path, e))
    }
}
