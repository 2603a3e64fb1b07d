//! Weighted modularity and Louvain-style community detection.
//!
//! `modularity` implements the standard weighted form
//! `Q = (1/2m) Σ_ij [w_ij − s_i s_j / 2m] δ(c_i, c_j)` with `m` the total
//! edge weight and `s_i` the node strengths. `louvain` maximizes it by
//! seeded local moves plus graph coarsening; runs are bitwise reproducible
//! for a fixed `(graph, seed)`. `exhaustive_best_partition` enumerates all
//! set partitions of small graphs and serves as the correctness oracle.

use std::collections::{BTreeSet, HashMap};
use std::fs::File;
use std::io::{self, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::network::{NodeId, Nodes};
use crate::rng;

/// Sweep convergence threshold: local moves repeat until no move in a sweep
/// improves modularity by more than this. Rate networks mix weights across
/// dozens of orders of magnitude, so individual moves may legitimately gain
/// far less than this while still being worth taking; the threshold bounds
/// how long such tails are chased, not which moves are allowed.
pub const MOVE_TOLERANCE: f64 = 1e-12;

/// Node limit for [`exhaustive_best_partition`] unless the caller raises it.
pub const EXHAUSTIVE_MAX_NODES: usize = 10;

/// Assignment of nodes to dense community ids `0..community_count`.
///
/// The assignment vector spans an entire node registry; nodes outside the
/// partitioned universe carry `None`. Community ids are normalized to first
/// occurrence in node-index order, so equal groupings compare equal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    assignment: Vec<Option<u32>>,
    community_count: usize,
}

impl Partition {
    /// Normalize a raw assignment: community ids are renumbered densely by
    /// first occurrence in index order, dropping empty ids.
    pub fn from_assignment(raw: Vec<Option<u32>>) -> Partition {
        let mut remap: HashMap<u32, u32> = HashMap::new();
        let mut next = 0u32;
        let assignment = raw
            .into_iter()
            .map(|slot| {
                slot.map(|c| {
                    *remap.entry(c).or_insert_with(|| {
                        let id = next;
                        next += 1;
                        id
                    })
                })
            })
            .collect();
        Partition {
            assignment,
            community_count: next as usize,
        }
    }

    /// Build from explicit member lists over a registry of `total_nodes`.
    pub fn from_communities(total_nodes: usize, communities: &[Vec<NodeId>]) -> Result<Partition> {
        let mut raw = vec![None; total_nodes];
        for (ci, members) in communities.iter().enumerate() {
            for &node in members {
                if raw[node.index()].is_some() {
                    return Err(Error::DuplicateAssignment(node.index()));
                }
                raw[node.index()] = Some(ci as u32);
            }
        }
        Ok(Partition::from_assignment(raw))
    }

    pub fn community_of(&self, node: NodeId) -> Option<u32> {
        self.assignment.get(node.index()).copied().flatten()
    }

    pub fn community_count(&self) -> usize {
        self.community_count
    }

    /// Registry size this partition spans.
    pub fn total_nodes(&self) -> usize {
        self.assignment.len()
    }

    /// Assigned `(node, community)` pairs in node-index order.
    pub fn nodes(&self) -> impl Iterator<Item = (NodeId, u32)> + '_ {
        self.assignment
            .iter()
            .enumerate()
            .filter_map(|(i, slot)| slot.map(|c| (NodeId(i as u32), c)))
    }

    pub fn assigned_count(&self) -> usize {
        self.assignment.iter().flatten().count()
    }

    /// Member lists indexed by community id.
    pub fn communities(&self) -> Vec<Vec<NodeId>> {
        let mut out = vec![Vec::new(); self.community_count];
        for (node, c) in self.nodes() {
            out[c as usize].push(node);
        }
        out
    }

    /// Member sets indexed by community id.
    pub fn community_sets(&self) -> Vec<BTreeSet<NodeId>> {
        let mut out = vec![BTreeSet::new(); self.community_count];
        for (node, c) in self.nodes() {
            out[c as usize].insert(node);
        }
        out
    }
}

/// Weighted Newman-Girvan modularity of a partition.
///
/// The partition must cover every node of the graph universe that carries
/// edge weight; strength-0 universe nodes may be left out and contribute
/// nothing either way.
pub fn modularity(graph: &WeightedGraph, partition: &Partition) -> Result<f64> {
    let m = graph.total_weight();
    if m <= 0.0 {
        return Err(Error::EmptyGraph);
    }
    let c = partition.community_count();
    let mut internal = vec![0.0; c];
    let mut strength_sum = vec![0.0; c];
    for &u in graph.universe() {
        match partition.community_of(u) {
            Some(ci) => strength_sum[ci as usize] += graph.strength(u),
            None if graph.strength(u) > 0.0 => {
                return Err(Error::UncoveredNode(graph.nodes().label(u).to_string()))
            }
            None => {}
        }
    }
    for (u, v, w) in graph.edges() {
        let cu = partition.community_of(u);
        if cu == partition.community_of(v) {
            if let Some(ci) = cu {
                internal[ci as usize] += w;
            }
        }
    }
    let two_m = 2.0 * m;
    Ok(internal
        .iter()
        .zip(&strength_sum)
        .map(|(&lc, &sc)| lc / m - (sc / two_m) * (sc / two_m))
        .sum())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LouvainOptions {
    pub seed: u64,
    pub resolution: f64,
}

impl Default for LouvainOptions {
    fn default() -> Self {
        LouvainOptions {
            seed: 0,
            resolution: 1.0,
        }
    }
}

/// Progress record handed to the observer after every local-move sweep.
#[derive(Debug, Clone, Copy)]
pub struct SweepInfo {
    pub level: usize,
    pub sweep: usize,
    pub moves: usize,
    pub q_before: f64,
    pub q_after: f64,
}

/// Louvain at resolution 1.0; see [`louvain_with`].
pub fn louvain(graph: &WeightedGraph, seed: u64) -> Result<Partition> {
    louvain_with(
        graph,
        &LouvainOptions {
            seed,
            resolution: 1.0,
        },
    )
}

pub fn louvain_with(graph: &WeightedGraph, opts: &LouvainOptions) -> Result<Partition> {
    louvain_observed(graph, opts, |_| {})
}

/// Louvain with an instrumentation hook.
///
/// Node visit order is a seeded shuffle, re-drawn every sweep. A move is
/// taken whenever it strictly improves modularity; ties between candidate
/// communities break toward the lowest community id. Sweeps repeat until no
/// move gains more than [`MOVE_TOLERANCE`], then the graph is coarsened;
/// detection stops at the level whose sweep makes no move at all.
/// Strength-0 universe nodes end up in their own singleton communities.
pub fn louvain_observed(
    graph: &WeightedGraph,
    opts: &LouvainOptions,
    mut observe: impl FnMut(&SweepInfo),
) -> Result<Partition> {
    if graph.total_weight() <= 0.0 {
        return Err(Error::EmptyGraph);
    }
    let gamma = opts.resolution;
    let mut rng = rng::seeded(opts.seed);
    let mut coarse = CoarseGraph::from_graph(graph);
    // original universe position -> current coarse node
    let mut membership: Vec<usize> = (0..coarse.len()).collect();

    let mut level = 0;
    loop {
        level += 1;
        let n = coarse.len();
        let mut comm: Vec<usize> = (0..n).collect();
        let mut comm_strength = coarse.strength.clone();
        let mut order: Vec<usize> = (0..n).collect();
        let mut level_moves = 0;
        let mut sweep = 0;
        loop {
            sweep += 1;
            rng::shuffle(&mut rng, &mut order);
            let q_before = coarse.q(&comm, gamma);
            let mut moves = 0;
            let mut sweep_max_gain = 0.0f64;
            for &node in &order {
                let s_i = coarse.strength[node];
                let cur = comm[node];
                let mut by_comm: std::collections::BTreeMap<usize, f64> =
                    std::collections::BTreeMap::new();
                for &(v, w) in &coarse.adj[node] {
                    *by_comm.entry(comm[v]).or_insert(0.0) += w;
                }
                comm_strength[cur] -= s_i;
                let w_cur = by_comm.get(&cur).copied().unwrap_or(0.0);
                let base = w_cur - gamma * s_i * comm_strength[cur] / coarse.two_m;
                let mut best = cur;
                let mut best_dq = 0.0;
                for (&c, &w) in &by_comm {
                    if c == cur {
                        continue;
                    }
                    let dq =
                        2.0 * ((w - gamma * s_i * comm_strength[c] / coarse.two_m) - base)
                            / coarse.two_m;
                    if dq > best_dq {
                        best_dq = dq;
                        best = c;
                    }
                }
                if best_dq > 0.0 {
                    comm[node] = best;
                    comm_strength[best] += s_i;
                    moves += 1;
                    sweep_max_gain = sweep_max_gain.max(best_dq);
                } else {
                    comm_strength[cur] += s_i;
                }
            }
            let q_after = coarse.q(&comm, gamma);
            observe(&SweepInfo {
                level,
                sweep,
                moves,
                q_before,
                q_after,
            });
            level_moves += moves;
            if sweep_max_gain <= MOVE_TOLERANCE {
                break;
            }
        }
        if level_moves == 0 {
            break;
        }
        let (next, renumber) = coarse.aggregate(&comm);
        for slot in &mut membership {
            *slot = renumber[comm[*slot]];
        }
        coarse = next;
    }

    let mut raw = vec![None; graph.nodes().len()];
    for (pos, &u) in graph.universe().iter().enumerate() {
        raw[u.index()] = Some(membership[pos] as u32);
    }
    Ok(Partition::from_assignment(raw))
}

/// Working graph for Louvain levels. Aggregation introduces self-loops
/// (internal community weight), stored separately and counted twice in node
/// strength so modularity is preserved exactly across levels.
struct CoarseGraph {
    adj: Vec<Vec<(usize, f64)>>,
    self_weight: Vec<f64>,
    strength: Vec<f64>,
    two_m: f64,
}

impl CoarseGraph {
    fn len(&self) -> usize {
        self.adj.len()
    }

    fn from_graph(graph: &WeightedGraph) -> CoarseGraph {
        let universe = graph.universe();
        let mut pos = HashMap::with_capacity(universe.len());
        for (i, &u) in universe.iter().enumerate() {
            pos.insert(u, i);
        }
        let adj: Vec<Vec<(usize, f64)>> = universe
            .iter()
            .map(|&u| {
                graph
                    .neighbors(u)
                    .iter()
                    .map(|&(v, w)| (pos[&v], w))
                    .collect()
            })
            .collect();
        let strength: Vec<f64> = universe.iter().map(|&u| graph.strength(u)).collect();
        CoarseGraph {
            adj,
            self_weight: vec![0.0; universe.len()],
            strength,
            two_m: 2.0 * graph.total_weight(),
        }
    }

    /// Modularity of `comm` on this graph at resolution `gamma`.
    fn q(&self, comm: &[usize], gamma: f64) -> f64 {
        let n = self.len();
        let mut internal = vec![0.0; n];
        let mut strength_sum = vec![0.0; n];
        for u in 0..n {
            let c = comm[u];
            strength_sum[c] += self.strength[u];
            internal[c] += self.self_weight[u];
            for &(v, w) in &self.adj[u] {
                if v > u && comm[v] == c {
                    internal[c] += w;
                }
            }
        }
        let m = self.two_m / 2.0;
        internal
            .iter()
            .zip(&strength_sum)
            .map(|(&lc, &sc)| lc / m - gamma * (sc / self.two_m) * (sc / self.two_m))
            .sum()
    }

    /// Collapse communities into super-nodes. Returns the new graph and the
    /// dense renumbering (old community id -> new node id, ascending).
    fn aggregate(&self, comm: &[usize]) -> (CoarseGraph, Vec<usize>) {
        let n = self.len();
        let mut ids: Vec<usize> = comm.to_vec();
        ids.sort_unstable();
        ids.dedup();
        let mut renumber = vec![usize::MAX; n];
        for (new, &old) in ids.iter().enumerate() {
            renumber[old] = new;
        }
        let count = ids.len();

        let mut self_weight = vec![0.0; count];
        let mut cross: Vec<std::collections::BTreeMap<usize, f64>> =
            vec![std::collections::BTreeMap::new(); count];
        for u in 0..n {
            let cu = renumber[comm[u]];
            self_weight[cu] += self.self_weight[u];
            for &(v, w) in &self.adj[u] {
                if v < u {
                    continue;
                }
                let cv = renumber[comm[v]];
                if cu == cv {
                    self_weight[cu] += w;
                } else {
                    *cross[cu].entry(cv).or_insert(0.0) += w;
                    *cross[cv].entry(cu).or_insert(0.0) += w;
                }
            }
        }
        let adj: Vec<Vec<(usize, f64)>> = cross
            .into_iter()
            .map(|m| m.into_iter().collect())
            .collect();
        let strength: Vec<f64> = adj
            .iter()
            .zip(&self_weight)
            .map(|(nbrs, &sw)| nbrs.iter().map(|&(_, w)| w).sum::<f64>() + 2.0 * sw)
            .collect();
        (
            CoarseGraph {
                adj,
                self_weight,
                strength,
                two_m: self.two_m,
            },
            renumber,
        )
    }
}

/// Modularity-optimal partition by enumeration of all set partitions
/// (restricted-growth strings, lexicographic order). Ties break toward the
/// lexicographically smallest assignment.
pub fn exhaustive_best_partition(graph: &WeightedGraph, max_nodes: usize) -> Result<Partition> {
    let universe = graph.universe();
    let k = universe.len();
    if k > max_nodes {
        return Err(Error::TooManyNodes {
            got: k,
            max: max_nodes,
        });
    }
    if graph.total_weight() <= 0.0 {
        return Err(Error::EmptyGraph);
    }

    let mut pos = HashMap::with_capacity(k);
    for (i, &u) in universe.iter().enumerate() {
        pos.insert(u, i);
    }
    let edges: Vec<(usize, usize, f64)> = graph
        .edges()
        .map(|(u, v, w)| (pos[&u], pos[&v], w))
        .collect();
    let strength: Vec<f64> = universe.iter().map(|&u| graph.strength(u)).collect();
    let m = graph.total_weight();
    let two_m = 2.0 * m;

    let mut assignment = vec![0u32; k];
    let mut best = assignment.clone();
    let mut best_q = f64::NEG_INFINITY;
    let mut internal = vec![0.0; k];
    let mut strength_sum = vec![0.0; k];
    loop {
        internal.iter_mut().for_each(|x| *x = 0.0);
        strength_sum.iter_mut().for_each(|x| *x = 0.0);
        for (i, &c) in assignment.iter().enumerate() {
            strength_sum[c as usize] += strength[i];
        }
        for &(u, v, w) in &edges {
            if assignment[u] == assignment[v] {
                internal[assignment[u] as usize] += w;
            }
        }
        let q: f64 = internal
            .iter()
            .zip(&strength_sum)
            .map(|(&lc, &sc)| lc / m - (sc / two_m) * (sc / two_m))
            .sum();
        if q > best_q {
            best_q = q;
            best.copy_from_slice(&assignment);
        }
        if !next_restricted_growth(&mut assignment) {
            break;
        }
    }

    let total = graph.nodes().len();
    let mut raw = vec![None; total];
    for (i, &u) in universe.iter().enumerate() {
        raw[u.index()] = Some(best[i]);
    }
    Ok(Partition::from_assignment(raw))
}

/// Advance to the lexicographic successor among restricted-growth strings;
/// false once the last string has been visited.
fn next_restricted_growth(a: &mut [u32]) -> bool {
    let n = a.len();
    for j in (1..n).rev() {
        let prefix_max = a[..j].iter().copied().max().unwrap_or(0);
        if a[j] <= prefix_max {
            a[j] += 1;
            for slot in &mut a[j + 1..] {
                *slot = 0;
            }
            return true;
        }
    }
    false
}

/// Write the `node,community` CSV; `comments` become `#` header lines.
pub fn write_partition_csv<W: Write>(
    mut w: W,
    partition: &Partition,
    nodes: &Nodes,
    comments: &[String],
) -> Result<()> {
    let io_err = |e: io::Error| Error::io("<partition csv>", e);
    for line in comments {
        writeln!(w, "# {line}").map_err(io_err)?;
    }
    let mut csv = csv::Writer::from_writer(w);
    csv.write_record(["node", "community"])?;
    for (node, c) in partition.nodes() {
        csv.write_record([nodes.label(node), &c.to_string()])?;
    }
    csv.flush().map_err(io_err)?;
    Ok(())
}

pub fn save_partition_csv(
    path: &Path,
    partition: &Partition,
    nodes: &Nodes,
    comments: &[String],
) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    write_partition_csv(BufWriter::new(file), partition, nodes, comments)
}

/// Read a `node,community` CSV back over an existing registry. Community
/// ids are renumbered densely; unknown labels are an error.
pub fn read_partition_csv<R: Read>(reader: R, nodes: &Nodes) -> Result<Partition> {
    let mut csv = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(reader);
    let mut raw = vec![None; nodes.len()];
    for record in csv.records() {
        let record = record?;
        let label = record.get(0).unwrap_or("");
        let community = record.get(1).unwrap_or("");
        let node = nodes.require(label)?;
        let c: u32 = community.parse().map_err(|_| Error::MalformedRecord {
            line: record.position().map(|p| p.line() as usize).unwrap_or(0),
            msg: format!("cannot parse community id {community:?}"),
        })?;
        if raw[node.index()].is_some() {
            return Err(Error::DuplicateAssignment(node.index()));
        }
        raw[node.index()] = Some(c);
    }
    Ok(Partition::from_assignment(raw))
}

pub fn load_partition_csv(path: &Path, nodes: &Nodes) -> Result<Partition> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_partition_csv(file, nodes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::MultiplexBuilder;
    use std::sync::Arc;

    pub(crate) fn graph_from(labels: &[&str], edges: &[(&str, &str, f64)]) -> WeightedGraph {
        let mut b = MultiplexBuilder::new();
        for l in labels {
            b.node(l).unwrap();
        }
        let net = b.build();
        let nodes = net.nodes_arc();
        let items: Vec<((NodeId, NodeId), f64)> = edges
            .iter()
            .map(|&(a, bb, w)| ((nodes.get(a).unwrap(), nodes.get(bb).unwrap()), w))
            .collect();
        WeightedGraph::from_edges(nodes, items).unwrap()
    }

    /// Definitional O(n^2) oracle: the full double loop over ordered pairs.
    pub(crate) fn modularity_oracle(graph: &WeightedGraph, partition: &Partition) -> f64 {
        let m = graph.total_weight();
        let two_m = 2.0 * m;
        let mut q = 0.0;
        for &u in graph.universe() {
            for &v in graph.universe() {
                let same = partition.community_of(u).is_some()
                    && partition.community_of(u) == partition.community_of(v);
                if !same {
                    continue;
                }
                let w = if u == v {
                    0.0
                } else {
                    graph.weight(u, v).unwrap_or(0.0)
                };
                q += w - graph.strength(u) * graph.strength(v) / two_m;
            }
        }
        q / two_m
    }

    fn two_triangles() -> WeightedGraph {
        graph_from(
            &["a", "b", "c", "d", "e", "f"],
            &[
                ("a", "b", 1.0),
                ("b", "c", 1.0),
                ("a", "c", 1.0),
                ("d", "e", 1.0),
                ("e", "f", 1.0),
                ("d", "f", 1.0),
            ],
        )
    }

    fn bridged_triangles() -> WeightedGraph {
        graph_from(
            &["a", "b", "c", "d", "e", "f"],
            &[
                ("a", "b", 1.0),
                ("b", "c", 1.0),
                ("a", "c", 1.0),
                ("d", "e", 1.0),
                ("e", "f", 1.0),
                ("d", "f", 1.0),
                ("c", "d", 1.0),
            ],
        )
    }

    fn triangle_partition(g: &WeightedGraph) -> Partition {
        let n = g.nodes();
        Partition::from_communities(
            n.len(),
            &[
                vec![
                    n.get("a").unwrap(),
                    n.get("b").unwrap(),
                    n.get("c").unwrap(),
                ],
                vec![
                    n.get("d").unwrap(),
                    n.get("e").unwrap(),
                    n.get("f").unwrap(),
                ],
            ],
        )
        .unwrap()
    }

    #[test]
    fn all_in_one_community_has_zero_modularity() {
        let g = bridged_triangles();
        let all: Vec<NodeId> = g.universe().to_vec();
        let p = Partition::from_communities(g.nodes().len(), &[all]).unwrap();
        let q = modularity(&g, &p).unwrap();
        assert!(q.abs() <= 1e-12, "Q = {q}");
    }

    #[test]
    fn disjoint_triangles_score_one_half() {
        let g = two_triangles();
        let p = triangle_partition(&g);
        let q = modularity(&g, &p).unwrap();
        assert!((q - 0.5).abs() <= 1e-12, "Q = {q}");
        assert!((modularity_oracle(&g, &p) - 0.5).abs() <= 1e-12);
    }

    #[test]
    fn modularity_matches_oracle_on_random_graphs() {
        for seed in 0..60u64 {
            let (g, p) = random_graph_and_partition(seed, 12);
            let fast = modularity(&g, &p).unwrap();
            let slow = modularity_oracle(&g, &p);
            assert!((fast - slow).abs() <= 1e-12, "seed {seed}: {fast} vs {slow}");
            assert!((-1.0..=1.0).contains(&fast));
        }
    }

    #[test]
    fn modularity_rejects_uncovered_nodes_and_empty_graphs() {
        let g = two_triangles();
        let n = g.nodes();
        let partial = Partition::from_communities(
            n.len(),
            &[vec![n.get("a").unwrap(), n.get("b").unwrap()]],
        )
        .unwrap();
        assert!(matches!(
            modularity(&g, &partial),
            Err(Error::UncoveredNode(_))
        ));

        let empty = graph_from(&["a", "b"], &[]);
        let p = Partition::from_communities(2, &[]).unwrap();
        assert!(matches!(modularity(&empty, &p), Err(Error::EmptyGraph)));
    }

    #[test]
    fn restricted_growth_counts_bell_numbers() {
        for (k, bell) in [(1usize, 1usize), (2, 2), (3, 5), (4, 15), (5, 52)] {
            let mut a = vec![0u32; k];
            let mut count = 1;
            while next_restricted_growth(&mut a) {
                count += 1;
            }
            assert_eq!(count, bell, "Bell({k})");
        }
    }

    #[test]
    fn exhaustive_on_a_single_edge_groups_the_pair() {
        let g = graph_from(&["a", "b"], &[("a", "b", 1.0)]);
        let p = exhaustive_best_partition(&g, EXHAUSTIVE_MAX_NODES).unwrap();
        assert_eq!(p.community_count(), 1);
        let q = modularity(&g, &p).unwrap();
        assert!(q.abs() <= 1e-12);
        // singletons would score -0.5
        let n = g.nodes();
        let singles = Partition::from_communities(
            n.len(),
            &[vec![n.get("a").unwrap()], vec![n.get("b").unwrap()]],
        )
        .unwrap();
        assert!((modularity(&g, &singles).unwrap() + 0.5).abs() <= 1e-12);
    }

    #[test]
    fn exhaustive_on_a_triangle_keeps_it_whole() {
        let g = graph_from(&["a", "b", "c"], &[("a", "b", 1.0), ("b", "c", 1.0), ("a", "c", 1.0)]);
        let p = exhaustive_best_partition(&g, EXHAUSTIVE_MAX_NODES).unwrap();
        assert_eq!(p.community_count(), 1);
    }

    #[test]
    fn exhaustive_rejects_large_graphs() {
        let (g, _) = random_graph_and_partition(1, 12);
        assert!(matches!(
            exhaustive_best_partition(&g, 10),
            Err(Error::TooManyNodes { got: 12, max: 10 })
        ));
    }

    #[test]
    fn louvain_recovers_the_bridged_triangles_exactly() {
        let g = bridged_triangles();
        let detected = louvain(&g, 42).unwrap();
        assert_eq!(detected, triangle_partition(&g));
        let best = exhaustive_best_partition(&g, EXHAUSTIVE_MAX_NODES).unwrap();
        let q_detected = modularity(&g, &detected).unwrap();
        let q_best = modularity(&g, &best).unwrap();
        assert!((q_detected - q_best).abs() <= 1e-12);
        assert!((q_best - 5.0 / 14.0).abs() <= 1e-12);
    }

    #[test]
    fn louvain_merges_a_clique() {
        let g = graph_from(
            &["a", "b", "c", "d"],
            &[
                ("a", "b", 1.0),
                ("a", "c", 1.0),
                ("a", "d", 1.0),
                ("b", "c", 1.0),
                ("b", "d", 1.0),
                ("c", "d", 1.0),
            ],
        );
        let p = louvain(&g, 7).unwrap();
        let q = modularity(&g, &p).unwrap();
        assert!(q >= 0.0);
        assert_eq!(p.community_count(), 1);
    }

    #[test]
    fn louvain_recovers_a_planted_unit_weight_graph() {
        // one structured layer of a planted two-community instance, taken
        // as a unit-weight graph
        let spec = crate::synth::PlantedSpec {
            nodes: 20,
            layers: 2,
            communities: vec![10, 10],
            p_in: 0.9,
            p_out: 0.05,
            persistence: 1.0,
            seed: 3,
        };
        let (net, planted) = crate::synth::generate(&spec).unwrap();
        let items: Vec<((NodeId, NodeId), f64)> = net.layers()[0]
            .edges()
            .map(|(u, v)| ((u, v), 1.0))
            .collect();
        let g = WeightedGraph::from_edges(net.nodes_arc(), items).unwrap();
        let detected = louvain(&g, 42).unwrap();
        assert_eq!(detected, planted);
    }

    #[test]
    fn louvain_is_deterministic_per_seed() {
        let (g, _) = random_graph_and_partition(5, 14);
        let a = louvain(&g, 99).unwrap();
        let b = louvain(&g, 99).unwrap();
        assert_eq!(a, b);
        let qa = modularity(&g, &a).unwrap();
        let qb = modularity(&g, &b).unwrap();
        assert_eq!(qa.to_bits(), qb.to_bits());
    }

    #[test]
    fn louvain_beats_singletons_and_never_beats_exhaustive() {
        for seed in 0..40u64 {
            let (g, _) = random_graph_and_partition(seed, 7);
            let detected = louvain(&g, seed).unwrap();
            let q = modularity(&g, &detected).unwrap();

            let singles: Vec<Vec<NodeId>> = g.universe().iter().map(|&u| vec![u]).collect();
            let q_single = modularity(
                &g,
                &Partition::from_communities(g.nodes().len(), &singles).unwrap(),
            )
            .unwrap();
            assert!(q >= q_single - 1e-12);

            let best = exhaustive_best_partition(&g, 8).unwrap();
            let q_best = modularity(&g, &best).unwrap();
            assert!(q <= q_best + 1e-9, "seed {seed}: {q} > {q_best}");
        }
    }

    #[test]
    fn louvain_sweeps_never_lower_modularity() {
        let (g, _) = random_graph_and_partition(3, 15);
        let mut sweeps = 0;
        louvain_observed(&g, &LouvainOptions::default(), |info| {
            sweeps += 1;
            assert!(
                info.q_after >= info.q_before - 1e-12,
                "level {} sweep {}: {} -> {}",
                info.level,
                info.sweep,
                info.q_before,
                info.q_after
            );
        })
        .unwrap();
        assert!(sweeps > 0);
    }

    #[test]
    fn coarsening_preserves_modularity() {
        // Q of the aggregated graph under the induced singleton partition
        // must equal Q of the original graph under the expanded partition.
        let (g, _) = random_graph_and_partition(8, 12);
        let coarse = CoarseGraph::from_graph(&g);
        // group universe positions in pairs
        let comm: Vec<usize> = (0..coarse.len()).map(|i| i / 2).collect();
        let q_original = coarse.q(&comm, 1.0);
        let (aggregated, renumber) = coarse.aggregate(&comm);
        let induced: Vec<usize> = (0..aggregated.len()).collect();
        let q_coarse = aggregated.q(&induced, 1.0);
        assert!(
            (q_original - q_coarse).abs() <= 1e-9,
            "{q_original} vs {q_coarse}"
        );
        assert!(renumber.iter().any(|&r| r != usize::MAX));
    }

    #[test]
    fn isolated_universe_nodes_become_singletons() {
        let mut b = MultiplexBuilder::new();
        for l in ["a", "b", "z"] {
            b.node(l).unwrap();
        }
        let nodes = b.build().nodes_arc();
        let a = nodes.get("a").unwrap();
        let bb = nodes.get("b").unwrap();
        let z = nodes.get("z").unwrap();
        let g = WeightedGraph::with_universe(nodes, vec![z], [((a, bb), 2.0)]).unwrap();
        let p = louvain(&g, 0).unwrap();
        assert_eq!(p.community_count(), 2);
        assert_eq!(p.community_of(a), p.community_of(bb));
        assert_ne!(p.community_of(z), p.community_of(a));
        // and the singleton contributes nothing to Q
        let q = modularity(&g, &p).unwrap();
        assert!(q.abs() <= 1e-12);
    }

    #[test]
    fn partition_csv_round_trips() {
        let g = bridged_triangles();
        let p = louvain(&g, 13).unwrap();
        let mut buf = Vec::new();
        write_partition_csv(&mut buf, &p, g.nodes(), &["seed: 13".to_string()]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("# seed: 13\nnode,community\n"));
        let reread = read_partition_csv(text.as_bytes(), g.nodes()).unwrap();
        assert_eq!(reread, p);
    }

    #[test]
    fn partition_csv_rejects_unknown_nodes_and_duplicates() {
        let g = two_triangles();
        let bad = "node,community\nnobody,0\n";
        assert!(matches!(
            read_partition_csv(bad.as_bytes(), g.nodes()),
            Err(Error::UnknownNode(_))
        ));
        let dup = "node,community\na,0\na,1\n";
        assert!(matches!(
            read_partition_csv(dup.as_bytes(), g.nodes()),
            Err(Error::DuplicateAssignment(_))
        ));
    }

    /// Random weighted graph plus a random (valid) partition of it.
    pub(crate) fn random_graph_and_partition(seed: u64, n: usize) -> (WeightedGraph, Partition) {
        use crate::rng::{seeded, unit_f64};
        let mut rng = seeded(seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(1));
        let mut b = MultiplexBuilder::new();
        let labels: Vec<String> = (0..n).map(|i| format!("v{i:02}")).collect();
        for l in &labels {
            b.node(l).unwrap();
        }
        let nodes = b.build().nodes_arc();
        let mut items = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                if unit_f64(&mut rng) < 0.45 {
                    let w = 0.25 + 4.0 * unit_f64(&mut rng);
                    items.push((
                        (
                            nodes.get(&labels[i]).unwrap(),
                            nodes.get(&labels[j]).unwrap(),
                        ),
                        w,
                    ));
                }
            }
        }
        if items.is_empty() {
            let u = nodes.get(&labels[0]).unwrap();
            let v = nodes.get(&labels[1]).unwrap();
            items.push(((u, v), 1.0));
        }
        let g = WeightedGraph::from_edges(nodes, items).unwrap();
        let c = 1 + (seed as usize % 4);
        let raw: Vec<Option<u32>> = (0..g.nodes().len())
            .map(|i| {
                if g.universe().contains(&NodeId(i as u32)) {
                    Some((unit_f64(&mut rng) * c as f64) as u32)
                } else {
                    None
                }
            })
            .collect();
        (g, Partition::from_assignment(raw))
    }
}
