//! Graph filtrations: node and edge sublevel/superlevel filtrations of the
//! clique complex, the power (graph-distance Rips) filtration, and the two
//! diagram-preserving reductions (core reduction and dominated-vertex
//! pruning).

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::complex::FilteredComplex;
use crate::error::{Error, Result};
use crate::flag::flag_filtration;
use crate::image::{check_increasing, snap_index};
use crate::pointcloud::rips_unchecked;

pub type Edge = (usize, usize);

fn ordered(u: usize, v: usize) -> Edge {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

/// Simple undirected graph on vertices `0..n` with optional edge weights and
/// node values.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Graph {
    n: usize,
    edges: BTreeSet<Edge>,
    edge_weights: Option<BTreeMap<Edge, f64>>,
    node_values: Option<Vec<f64>>,
}

impl Graph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = Edge>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u == v {
                return Err(Error::param("edges", format!("self-loop at vertex {u}")));
            }
            if u >= n || v >= n {
                return Err(Error::param("edges", format!("edge ({u}, {v}) outside 0..{n}")));
            }
            if !set.insert(ordered(u, v)) {
                return Err(Error::param("edges", format!("duplicate edge ({u}, {v})")));
            }
        }
        Ok(Graph { n, edges: set, edge_weights: None, node_values: None })
    }

    /// Weighted graph; the weight map defines the edge set.
    pub fn weighted(n: usize, weights: impl IntoIterator<Item = (Edge, f64)>) -> Result<Self> {
        let weights: Vec<(Edge, f64)> = weights.into_iter().collect();
        let g = Graph::new(n, weights.iter().map(|&(e, _)| e))?;
        g.with_edge_weights(weights.into_iter().map(|((u, v), w)| (ordered(u, v), w)).collect())
    }

    pub fn with_edge_weights(mut self, weights: BTreeMap<Edge, f64>) -> Result<Self> {
        let weights: BTreeMap<Edge, f64> = weights.into_iter().map(|((u, v), w)| (ordered(u, v), w)).collect();
        if let Some(e) = self.edges.iter().find(|e| !weights.contains_key(e)) {
            return Err(Error::param("edge_weights", format!("missing weight for edge {e:?}")));
        }
        if let Some(e) = weights.keys().find(|e| !self.edges.contains(e)) {
            return Err(Error::param("edge_weights", format!("weight given for non-edge {e:?}")));
        }
        if let Some((e, w)) = weights.iter().find(|(_, w)| !w.is_finite()) {
            return Err(Error::param("edge_weights", format!("non-finite weight {w} on {e:?}")));
        }
        self.edge_weights = Some(weights);
        Ok(self)
    }

    pub fn with_node_values(mut self, values: Vec<f64>) -> Result<Self> {
        if values.len() != self.n {
            return Err(Error::param(
                "node_values",
                format!("{} values for {} vertices", values.len(), self.n),
            ));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::param("node_values", "node values must be finite"));
        }
        self.node_values = Some(values);
        Ok(self)
    }

    pub fn n_vertices(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.edges.iter().copied()
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&ordered(u, v))
    }

    pub fn edge_weights(&self) -> Option<&BTreeMap<Edge, f64>> {
        self.edge_weights.as_ref()
    }

    pub fn node_values(&self) -> Option<&[f64]> {
        self.node_values.as_deref()
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        adj
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for &(u, v) in &self.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg
    }

    /// Induced subgraph on `keep` (any order); vertices are renumbered by
    /// their position in the sorted `keep` list.
    pub fn induced(&self, keep: &[usize]) -> ReducedGraph {
        let mut kept: Vec<usize> = keep.to_vec();
        kept.sort_unstable();
        kept.dedup();
        let mut new_id = vec![None; self.n];
        for (i, &v) in kept.iter().enumerate() {
            new_id[v] = Some(i);
        }
        let map_edge = |&(u, v): &Edge| Some((new_id[u]?, new_id[v]?));
        let edges: BTreeSet<Edge> = self.edges.iter().filter_map(map_edge).collect();
        let edge_weights = self.edge_weights.as_ref().map(|w| {
            w.iter()
                .filter_map(|(e, &x)| map_edge(e).map(|e| (e, x)))
                .collect()
        });
        let node_values = self
            .node_values
            .as_ref()
            .map(|vals| kept.iter().map(|&v| vals[v]).collect());
        ReducedGraph {
            graph: Graph { n: kept.len(), edges, edge_weights, node_values },
            kept,
        }
    }

    /// Breadth-first hop distances from `source` (`None` if unreachable).
    pub fn hop_distances_from(&self, source: usize, adj: &[Vec<usize>]) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n];
        dist[source] = Some(0);
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap_or(0);
            for &w in &adj[u] {
                if dist[w].is_none() {
                    dist[w] = Some(du + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// All-pairs hop distances, `f64::INFINITY` between components.
    pub fn hop_distance_matrix(&self) -> Vec<Vec<f64>> {
        let adj = self.adjacency();
        (0..self.n)
            .map(|s| {
                self.hop_distances_from(s, &adj)
                    .into_iter()
                    .map(|d| d.map_or(f64::INFINITY, |d| d as f64))
                    .collect()
            })
            .collect()
    }
}

/// A subgraph together with the original id of each of its vertices.
#[derive(Clone, Debug, PartialEq)]
pub struct ReducedGraph {
    pub graph: Graph,
    pub kept: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NodeFunction {
    Degree,
    Eccentricity,
    Closeness,
    /// Use the graph's own node values.
    External,
}

/// Values of a node filtration function on every vertex.
pub fn node_filtration_values(g: &Graph, function: NodeFunction) -> Result<Vec<f64>> {
    match function {
        NodeFunction::Degree => Ok(g.degrees().into_iter().map(|d| d as f64).collect()),
        NodeFunction::External => g
            .node_values
            .clone()
            .ok_or_else(|| Error::param("node_values", "external function needs node values for every vertex")),
        NodeFunction::Eccentricity | NodeFunction::Closeness => {
            let adj = g.adjacency();
            (0..g.n)
                .map(|v| {
                    let dist = g.hop_distances_from(v, &adj);
                    let hops: Option<Vec<usize>> = dist.into_iter().collect();
                    let hops = hops.ok_or_else(|| {
                        Error::Undefined(format!("graph is disconnected; {function:?} is undefined at vertex {v}"))
                    })?;
                    Ok(match function {
                        NodeFunction::Eccentricity => hops.iter().copied().max().unwrap_or(0) as f64,
                        _ => {
                            let total: usize = hops.iter().sum();
                            if total == 0 {
                                0.0
                            } else {
                                (g.n - 1) as f64 / total as f64
                            }
                        }
                    })
                })
                .collect()
        }
    }
}

fn snap_all(values: &[f64], thresholds: &[f64], what: &str) -> Result<Vec<f64>> {
    let snapped: Vec<Option<f64>> = values.iter().map(|&v| snap_index(thresholds, v).map(|i| thresholds[i])).collect();
    let uncovered: Vec<usize> = (0..values.len()).filter(|&i| snapped[i].is_none()).collect();
    if !uncovered.is_empty() {
        return Err(Error::param(
            "thresholds",
            format!("{what} above the last threshold: {uncovered:?}"),
        ));
    }
    Ok(snapped.into_iter().flatten().collect())
}

/// Clique filtration where each vertex enters at the smallest threshold at
/// or above its node value, and each clique (dimension ≤ `use_clique_dim`)
/// once all its vertices are present.
pub fn sublevel_node_filtration(g: &Graph, thresholds: &[f64], use_clique_dim: usize) -> Result<FilteredComplex> {
    check_increasing(thresholds, "thresholds")?;
    let values = g
        .node_values
        .as_ref()
        .ok_or_else(|| Error::param("node_values", "node filtration needs node values"))?;
    let snapped = snap_all(values, thresholds, "vertices")?;
    let edges: Vec<(usize, usize, f64)> = g.edges.iter().map(|&(u, v)| (u, v, snapped[u].max(snapped[v]))).collect();
    let vv: Vec<Option<f64>> = snapped.into_iter().map(Some).collect();
    flag_filtration(&vv, &edges, use_clique_dim, Some(use_clique_dim))
}

/// Superlevel counterpart of [`sublevel_node_filtration`] for strictly
/// decreasing thresholds. Values in the result are negated node values.
pub fn superlevel_node_filtration(g: &Graph, thresholds: &[f64], use_clique_dim: usize) -> Result<FilteredComplex> {
    if thresholds.windows(2).any(|w| w[0] <= w[1]) {
        return Err(Error::param("thresholds", "superlevel thresholds must be strictly decreasing"));
    }
    let values = g
        .node_values
        .as_ref()
        .ok_or_else(|| Error::param("node_values", "node filtration needs node values"))?;
    let negated = g.clone().with_node_values(values.iter().map(|v| -v).collect())?;
    let t: Vec<f64> = thresholds.iter().map(|t| -t).collect();
    sublevel_node_filtration(&negated, &t, use_clique_dim)
}

/// Clique filtration driven by edge weights: an edge enters at the smallest
/// threshold ≥ its weight, a vertex with its first incident edge (isolated
/// vertices at the last threshold), and cliques at their latest edge.
pub fn sublevel_edge_filtration(g: &Graph, thresholds: &[f64], use_clique_dim: usize) -> Result<FilteredComplex> {
    check_increasing(thresholds, "thresholds")?;
    let weights = g
        .edge_weights
        .as_ref()
        .ok_or_else(|| Error::param("edge_weights", "edge filtration needs edge weights"))?;
    let edge_list: Vec<Edge> = weights.keys().copied().collect();
    let raw: Vec<f64> = weights.values().copied().collect();
    let snapped = snap_all(&raw, thresholds, "edges (by index)")?;
    let last = thresholds[thresholds.len() - 1];
    let mut vertex = vec![last; g.n];
    for (&(u, v), &w) in edge_list.iter().zip(&snapped) {
        vertex[u] = vertex[u].min(w);
        vertex[v] = vertex[v].min(w);
    }
    let edges: Vec<(usize, usize, f64)> = edge_list.iter().zip(&snapped).map(|(&(u, v), &w)| (u, v, w)).collect();
    let vv: Vec<Option<f64>> = vertex.into_iter().map(Some).collect();
    flag_filtration(&vv, &edges, use_clique_dim, Some(use_clique_dim))
}

/// Rips filtration of the hop-distance metric, stopped at `max_hops`.
/// Vertices in different components never connect.
pub fn power_filtration(g: &Graph, max_hops: usize, max_cell_dim: usize) -> Result<FilteredComplex> {
    if max_cell_dim < 1 {
        return Err(Error::param("max_cell_dim", "must be at least 1"));
    }
    let d = g.hop_distance_matrix();
    rips_unchecked(g.n, |i, j| d[i][j], max_hops as f64, max_cell_dim)
}

/// Default edge length for weighted power filtrations: heavy edges are short.
pub fn inverse_weight(w: f64) -> f64 {
    1.0 / w
}

/// Power filtration over shortest weighted paths with edge lengths
/// `length(weight)`.
pub fn weighted_power_filtration(
    g: &Graph,
    max_scale: f64,
    max_cell_dim: usize,
    length: impl Fn(f64) -> f64,
) -> Result<FilteredComplex> {
    if max_cell_dim < 1 {
        return Err(Error::param("max_cell_dim", "must be at least 1"));
    }
    let weights = g
        .edge_weights
        .as_ref()
        .ok_or_else(|| Error::param("edge_weights", "weighted power filtration needs edge weights"))?;
    let mut adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); g.n];
    for (&(u, v), &w) in weights {
        let l = length(w);
        if !(l >= 0.0) {
            return Err(Error::param("edge_weights", format!("edge ({u}, {v}) has invalid length {l}")));
        }
        adj[u].push((v, l));
        adj[v].push((u, l));
    }
    let dist: Vec<Vec<f64>> = (0..g.n).map(|s| dijkstra(&adj, s)).collect();
    rips_unchecked(g.n, |i, j| dist[i][j], max_scale, max_cell_dim)
}

fn dijkstra(adj: &[Vec<(usize, f64)>], source: usize) -> Vec<f64> {
    #[derive(PartialEq)]
    struct Key(f64);
    impl Eq for Key {}
    impl PartialOrd for Key {
        fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
            Some(self.cmp(other))
        }
    }
    impl Ord for Key {
        fn cmp(&self, other: &Self) -> std::cmp::Ordering {
            self.0.total_cmp(&other.0)
        }
    }
    let mut dist = vec![f64::INFINITY; adj.len()];
    dist[source] = 0.0;
    let mut heap = BinaryHeap::from([Reverse((Key(0.0), source))]);
    while let Some(Reverse((Key(d), u))) = heap.pop() {
        if d > dist[u] {
            continue;
        }
        for &(v, l) in &adj[u] {
            let nd = d + l;
            if nd < dist[v] {
                dist[v] = nd;
                heap.push(Reverse((Key(nd), v)));
            }
        }
    }
    dist
}

/// ω = [1 + α (A − A_min)/(A_max − A_min)]⁻¹, mapping amounts into
/// [1/(1+α), 1] with larger amounts getting smaller weights.
pub fn normalize_edge_weights(amounts: &BTreeMap<Edge, f64>, alpha: f64) -> Result<BTreeMap<Edge, f64>> {
    if !(alpha > 0.0) {
        return Err(Error::param("alpha", "must be positive"));
    }
    let min = amounts.values().copied().fold(f64::INFINITY, f64::min);
    let max = amounts.values().copied().fold(f64::NEG_INFINITY, f64::max);
    if !(max > min) {
        return Err(Error::param("amounts", "degenerate range: need at least two distinct amounts"));
    }
    Ok(amounts
        .iter()
        .map(|(&e, &a)| (e, 1.0 / (1.0 + alpha * (a - min) / (max - min))))
        .collect())
}

/// The (k+1)-core: repeatedly removes vertices of degree ≤ k. Preserves the
/// clique-filtration diagrams of dimension ≥ k (not dimension 0).
pub fn coral_reduce(g: &Graph, k: usize) -> Result<ReducedGraph> {
    if k < 1 {
        return Err(Error::param("k", "must be at least 1"));
    }
    let adj = g.adjacency();
    let mut degree = g.degrees();
    let mut removed = vec![false; g.n];
    let mut stack: Vec<usize> = (0..g.n).filter(|&v| degree[v] <= k).collect();
    for &v in &stack {
        removed[v] = true;
    }
    while let Some(v) = stack.pop() {
        for &w in &adj[v] {
            if !removed[w] {
                degree[w] -= 1;
                if degree[w] <= k {
                    removed[w] = true;
                    stack.push(w);
                }
            }
        }
    }
    let keep: Vec<usize> = (0..g.n).filter(|&v| !removed[v]).collect();
    Ok(g.induced(&keep))
}

/// Repeatedly removes a vertex `v` whose closed neighbourhood lies inside
/// the closed neighbourhood of some `u` that comes earlier in
/// `filtration_order`. With node values consistent with that order the
/// clique-filtration diagrams are unchanged in every dimension.
pub fn prune_dominated(g: &Graph, filtration_order: &[usize]) -> Result<ReducedGraph> {
    let mut position = vec![usize::MAX; g.n];
    for (i, &v) in filtration_order.iter().enumerate() {
        if v >= g.n || position[v] != usize::MAX {
            return Err(Error::param("filtration_order", format!("invalid or repeated vertex {v}")));
        }
        position[v] = i;
    }
    if let Some(v) = (0..g.n).find(|&v| position[v] == usize::MAX) {
        return Err(Error::param("filtration_order", format!("vertex {v} is missing from the order")));
    }

    let mut closed: Vec<BTreeSet<usize>> = g
        .adjacency()
        .into_iter()
        .enumerate()
        .map(|(v, nb)| nb.into_iter().chain([v]).collect())
        .collect();
    let mut alive = vec![true; g.n];
    loop {
        // Latest-entering dominated vertex first.
        let victim = filtration_order.iter().rev().copied().find(|&v| {
            alive[v]
                && closed[v].iter().any(|&u| {
                    u != v && position[u] < position[v] && closed[v].is_subset(&closed[u])
                })
        });
        let Some(v) = victim else { break };
        alive[v] = false;
        let nbrs: Vec<usize> = closed[v].iter().copied().filter(|&u| u != v).collect();
        for u in nbrs {
            closed[u].remove(&v);
        }
        closed[v].clear();
    }
    let keep: Vec<usize> = (0..g.n).filter(|&v| alive[v]).collect();
    Ok(g.induced(&keep))
}
