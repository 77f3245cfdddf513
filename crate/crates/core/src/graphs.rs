//! Undirected multigraphs with stable edge ids.
//!
//! Edge ids are assigned in lexicographic order of the (sorted) endpoint
//! pairs when a graph is built, and survive contraction unchanged. Every
//! matrix indexed by edges uses this id order.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{determinant, ExactMatrix};

pub type EdgeId = usize;

/// Default limit on the edge count accepted by spanning-tree enumeration.
pub const DEFAULT_EDGE_CAP: usize = 24;

/// An edge with endpoints stored as `u < v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub id: EdgeId,
    pub u: usize,
    pub v: usize,
}

impl Edge {
    pub fn shares_vertex(&self, other: &Edge) -> bool {
        self.u == other.u || self.u == other.v || self.v == other.u || self.v == other.v
    }
}

/// How to build a graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GraphSpec {
    /// `K_n` on vertices `0..n`.
    Complete(usize),
    /// `K_{m,n}`: the `m` side is vertices `0..m`, the `n` side `m..m+n`.
    CompleteBipartite(usize, usize),
    EdgeList {
        vertex_count: usize,
        pairs: Vec<(usize, usize)>,
    },
}

/// Loop-free undirected multigraph.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiGraph {
    vertex_count: usize,
    /// Sorted by id.
    edges: Vec<Edge>,
}

pub fn build_graph(spec: &GraphSpec) -> Result<MultiGraph> {
    match *spec {
        GraphSpec::Complete(n) => {
            let pairs = (0..n)
                .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                .collect();
            MultiGraph::from_pairs(n, pairs)
        }
        GraphSpec::CompleteBipartite(m, n) => {
            if m == 0 || n == 0 {
                return Err(Error::InvalidParameter(format!(
                    "complete bipartite graph needs both sides non-empty, got ({m}, {n})"
                )));
            }
            let pairs = (0..m)
                .flat_map(|x| (m..m + n).map(move |y| (x, y)))
                .collect();
            MultiGraph::from_pairs(m + n, pairs)
        }
        GraphSpec::EdgeList {
            vertex_count,
            ref pairs,
        } => MultiGraph::from_pairs(vertex_count, pairs.clone()),
    }
}

impl MultiGraph {
    /// Normalizes each pair to `u < v`, sorts lexicographically (stable for
    /// parallel edges) and numbers the edges `0..`.
    pub fn from_pairs(vertex_count: usize, pairs: Vec<(usize, usize)>) -> Result<Self> {
        if vertex_count == 0 {
            return Err(Error::EmptyGraph);
        }
        let mut normalized = Vec::with_capacity(pairs.len());
        for (a, b) in pairs {
            for x in [a, b] {
                if x >= vertex_count {
                    return Err(Error::VertexOutOfRange {
                        vertex: x,
                        vertex_count,
                    });
                }
            }
            if a == b {
                return Err(Error::SelfLoop(a));
            }
            normalized.push((a.min(b), a.max(b)));
        }
        normalized.sort();
        let edges = normalized
            .into_iter()
            .enumerate()
            .map(|(id, (u, v))| Edge { id, u, v })
            .collect();
        Ok(Self {
            vertex_count,
            edges,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_ids(&self) -> Vec<EdgeId> {
        self.edges.iter().map(|e| e.id).collect()
    }

    pub fn edge(&self, id: EdgeId) -> Option<&Edge> {
        self.edges
            .binary_search_by_key(&id, |e| e.id)
            .ok()
            .map(|i| &self.edges[i])
    }

    /// Position of an edge in id order (its row in edge-indexed matrices).
    pub fn edge_index(&self, id: EdgeId) -> Option<usize> {
        self.edges.binary_search_by_key(&id, |e| e.id).ok()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertex_count];
        for e in &self.edges {
            deg[e.u] += 1;
            deg[e.v] += 1;
        }
        deg
    }

    pub fn has_parallel_edges(&self) -> bool {
        let mut pairs: Vec<_> = self.edges.iter().map(|e| (e.u, e.v)).collect();
        pairs.sort_unstable();
        pairs.windows(2).any(|w| w[0] == w[1])
    }

    pub fn is_connected(&self) -> bool {
        let mut dsu = Dsu::new(self.vertex_count);
        let mut parts = self.vertex_count;
        for e in &self.edges {
            if dsu.union(e.u, e.v) {
                parts -= 1;
            }
        }
        parts == 1
    }

    fn lookup_all(&self, edge_ids: &[EdgeId]) -> Result<Vec<Edge>> {
        let unique: BTreeSet<EdgeId> = edge_ids.iter().copied().collect();
        unique
            .into_iter()
            .map(|id| self.edge(id).copied().ok_or(Error::UnknownEdge(id)))
            .collect()
    }

    /// Serializes to the edge-list text format, edges in id order.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("vertices {}\n", self.vertex_count);
        for e in &self.edges {
            let _ = writeln!(out, "{} {}", e.u, e.v);
        }
        out
    }
}

/// Parses the edge-list text format:
///
/// ```text
/// vertices 4
/// 0 1
/// 1 2
/// ```
///
/// Blank lines and `#` comments are ignored. Edge ids follow the usual
/// lexicographic numbering, not the line order.
pub fn parse_edge_list(text: &str) -> Result<MultiGraph> {
    let mut vertex_count = None;
    let mut pairs = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let parse_err = |message: String| Error::Parse {
            line: line_no,
            message,
        };
        let mut tokens = line.split_whitespace();
        match vertex_count {
            None => {
                if tokens.next() != Some("vertices") {
                    return Err(parse_err("expected `vertices N` header".into()));
                }
                let n = tokens
                    .next()
                    .ok_or_else(|| parse_err("missing vertex count".into()))?;
                let n: usize = n
                    .parse()
                    .map_err(|_| parse_err(format!("invalid vertex count `{n}`")))?;
                if tokens.next().is_some() {
                    return Err(parse_err("trailing tokens after vertex count".into()));
                }
                vertex_count = Some(n);
            }
            Some(_) => {
                let mut endpoint = || -> Result<usize> {
                    let tok = tokens
                        .next()
                        .ok_or_else(|| parse_err("expected two endpoints".into()))?;
                    tok.parse()
                        .map_err(|_| parse_err(format!("invalid vertex `{tok}`")))
                };
                let u = endpoint()?;
                let v = endpoint()?;
                if tokens.next().is_some() {
                    return Err(parse_err("trailing tokens after edge".into()));
                }
                pairs.push((u, v));
            }
        }
    }
    let vertex_count = vertex_count.ok_or(Error::Parse {
        line: 0,
        message: "missing `vertices N` header".into(),
    })?;
    MultiGraph::from_pairs(vertex_count, pairs)
}

/// Contracts an acyclic edge set. Surviving edges keep their ids, loops
/// created along the way are dropped and the merged vertices are numbered
/// by their smallest original vertex.
pub fn contract(g: &MultiGraph, edge_ids: &[EdgeId]) -> Result<MultiGraph> {
    let chosen = g.lookup_all(edge_ids)?;
    let mut dsu = Dsu::new(g.vertex_count);
    for e in &chosen {
        if !dsu.union(e.u, e.v) {
            return Err(Error::CyclicEdgeSet);
        }
    }
    let mut label = vec![usize::MAX; g.vertex_count];
    let mut root_label = vec![usize::MAX; g.vertex_count];
    let mut next = 0;
    for v in 0..g.vertex_count {
        let r = dsu.find(v);
        if root_label[r] == usize::MAX {
            root_label[r] = next;
            next += 1;
        }
        label[v] = root_label[r];
    }
    let removed: BTreeSet<EdgeId> = chosen.iter().map(|e| e.id).collect();
    let edges = g
        .edges
        .iter()
        .filter(|e| !removed.contains(&e.id))
        .filter_map(|e| {
            let (a, b) = (label[e.u], label[e.v]);
            (a != b).then(|| Edge {
                id: e.id,
                u: a.min(b),
                v: a.max(b),
            })
        })
        .collect();
    Ok(MultiGraph {
        vertex_count: next,
        edges,
    })
}

/// `L = D - A`, counting parallel edges with multiplicity.
pub fn laplacian(g: &MultiGraph) -> ExactMatrix {
    let n = g.vertex_count;
    let mut counts = vec![0i64; n * n];
    for e in &g.edges {
        counts[e.u * n + e.u] += 1;
        counts[e.v * n + e.v] += 1;
        counts[e.u * n + e.v] -= 1;
        counts[e.v * n + e.u] -= 1;
    }
    ExactMatrix::from_fn(n, n, |i, j| {
        BigRational::from_integer(counts[i * n + j].into())
    })
    .into_symmetric()
    .expect("laplacian is symmetric")
}

/// Number of spanning trees, as the (1,1) cofactor of the Laplacian.
/// The (2,2) cofactor is computed as well and must agree.
pub fn tree_count_cofactor(g: &MultiGraph) -> BigInt {
    if g.vertex_count == 1 {
        return BigInt::one();
    }
    let lap = laplacian(g);
    let first = cofactor(&lap, 0);
    let second = cofactor(&lap, 1);
    assert_eq!(first, second, "Laplacian cofactors disagree");
    first
}

fn cofactor(lap: &ExactMatrix, k: usize) -> BigInt {
    let det = determinant(&lap.minor(k, k)).expect("minor is square");
    debug_assert!(det.is_integer());
    det.to_integer()
}

/// Every spanning tree as a sorted list of edge ids, in lexicographic order.
pub fn enumerate_spanning_trees(g: &MultiGraph) -> Result<Vec<Vec<EdgeId>>> {
    enumerate_spanning_trees_capped(g, DEFAULT_EDGE_CAP)
}

/// Backtracking over edges in id order. An edge is taken only if it joins
/// two components; it is skipped only if the chosen edges plus the
/// remaining ones still connect the graph, so no branch dead-ends.
pub fn enumerate_spanning_trees_capped(g: &MultiGraph, cap: usize) -> Result<Vec<Vec<EdgeId>>> {
    if g.edge_count() > cap {
        return Err(Error::EdgeCapExceeded {
            edges: g.edge_count(),
            cap,
        });
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let mut out = Vec::new();
    let mut chosen = Vec::with_capacity(g.vertex_count - 1);
    let components: Vec<usize> = (0..g.vertex_count).collect();
    search_trees(g, 0, &components, &mut chosen, &mut out);
    Ok(out)
}

fn search_trees(
    g: &MultiGraph,
    idx: usize,
    components: &[usize],
    chosen: &mut Vec<EdgeId>,
    out: &mut Vec<Vec<EdgeId>>,
) {
    let needed = g.vertex_count - 1;
    if chosen.len() == needed {
        out.push(chosen.clone());
        return;
    }
    if g.edges.len() - idx < needed - chosen.len() {
        return;
    }
    let e = g.edges[idx];
    let (cu, cv) = (components[e.u], components[e.v]);
    if cu != cv {
        let merged: Vec<usize> = components
            .iter()
            .map(|&c| if c == cv { cu } else { c })
            .collect();
        chosen.push(e.id);
        search_trees(g, idx + 1, &merged, chosen, out);
        chosen.pop();
    }
    // skipping edge idx must leave the graph connectable
    let mut dsu = Dsu::new(g.vertex_count);
    let mut parts = g.vertex_count;
    for v in 0..g.vertex_count {
        if dsu.union(v, components[v]) {
            parts -= 1;
        }
    }
    for rest in &g.edges[idx + 1..] {
        if dsu.union(rest.u, rest.v) {
            parts -= 1;
        }
    }
    if parts == 1 {
        search_trees(g, idx + 1, components, chosen, out);
    }
}

/// Number of spanning trees containing every edge of an acyclic edge set,
/// computed as the tree count of the contraction.
pub fn trees_containing(g: &MultiGraph, edge_ids: &[EdgeId]) -> Result<BigInt> {
    let c = contract(g, edge_ids)?;
    Ok(tree_count_cofactor(&c))
}

/// An acyclic edge set of a host graph.
#[derive(Clone, Debug)]
pub struct Forest<'g> {
    host: &'g MultiGraph,
    edge_ids: Vec<EdgeId>,
}

impl<'g> Forest<'g> {
    pub fn new(host: &'g MultiGraph, edge_ids: &[EdgeId]) -> Result<Self> {
        let edges = host.lookup_all(edge_ids)?;
        let mut dsu = Dsu::new(host.vertex_count);
        for e in &edges {
            if !dsu.union(e.u, e.v) {
                return Err(Error::CyclicEdgeSet);
            }
        }
        Ok(Self {
            host,
            edge_ids: edges.iter().map(|e| e.id).collect(),
        })
    }

    pub fn host(&self) -> &MultiGraph {
        self.host
    }

    pub fn edge_ids(&self) -> &[EdgeId] {
        &self.edge_ids
    }

    /// Vertex counts of the components, isolated vertices included,
    /// largest first.
    pub fn component_sizes(&self) -> Vec<usize> {
        let mut dsu = Dsu::new(self.host.vertex_count);
        for id in &self.edge_ids {
            let e = self.host.edge(*id).expect("validated on construction");
            dsu.union(e.u, e.v);
        }
        let mut sizes = vec![0; self.host.vertex_count];
        for v in 0..self.host.vertex_count {
            sizes[dsu.find(v)] += 1;
        }
        let mut sizes: Vec<usize> = sizes.into_iter().filter(|&s| s > 0).collect();
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        sizes
    }

    pub fn component_count(&self) -> usize {
        self.host.vertex_count - self.edge_ids.len()
    }
}

/// Moon's count of labelled trees on `n` vertices containing a forest with
/// component sizes `j_1..j_k`: `n^(k-2) * prod j_i`.
pub fn moon_count(n: usize, forest: &Forest<'_>) -> Result<BigRational> {
    let host = forest.host();
    if host.vertex_count() != n || host.has_parallel_edges() {
        return Err(Error::NotInCompleteGraph(n));
    }
    let sizes = forest.component_sizes();
    let k = sizes.len() as i64;
    let product: BigInt = sizes.iter().map(|&s| BigInt::from(s)).product();
    let value = crate::linalg::rational_pow(&BigRational::from_integer(n.into()), k - 2)
        * BigRational::from_integer(product);
    if k == 1 {
        assert!(
            value.is_one(),
            "a spanning forest is contained in exactly one tree"
        );
    }
    Ok(value)
}

/// Random connected multigraph: a random spanning tree on `vertices`
/// vertices plus extra random edges (parallel edges allowed) up to
/// `max_edges` in total.
pub fn random_connected_graph<R: Rng + ?Sized>(
    rng: &mut R,
    vertices: usize,
    max_edges: usize,
) -> MultiGraph {
    assert!(vertices >= 1);
    let tree_edges = vertices - 1;
    assert!(max_edges >= tree_edges, "edge budget below a spanning tree");
    let mut pairs = Vec::with_capacity(max_edges);
    for v in 1..vertices {
        pairs.push((rng.random_range(0..v), v));
    }
    if vertices >= 2 {
        let extra = rng.random_range(0..=max_edges - tree_edges);
        for _ in 0..extra {
            let u = rng.random_range(0..vertices);
            let mut v = rng.random_range(0..vertices - 1);
            if v >= u {
                v += 1;
            }
            pairs.push((u, v));
        }
    }
    MultiGraph::from_pairs(vertices, pairs).expect("generated pairs are valid")
}

struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// False if already joined.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}

/// Counts trees in `trees` that contain every id in `subset`.
pub fn count_supersets(trees: &[Vec<EdgeId>], subset: &[EdgeId]) -> usize {
    trees
        .iter()
        .filter(|t| subset.iter().all(|id| t.binary_search(id).is_ok()))
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::int;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn complete(n: usize) -> MultiGraph {
        build_graph(&GraphSpec::Complete(n)).unwrap()
    }

    fn k23() -> MultiGraph {
        build_graph(&GraphSpec::CompleteBipartite(2, 3)).unwrap()
    }

    fn path(n: usize) -> MultiGraph {
        MultiGraph::from_pairs(n, (1..n).map(|v| (v - 1, v)).collect()).unwrap()
    }

    /// Edge id of `{x', y}` in K_{2,3}: X side is 0..2, Y side 2..5.
    fn k23_edge(g: &MultiGraph, x: usize, y: usize) -> EdgeId {
        g.edges()
            .iter()
            .find(|e| e.u == x && e.v == 2 + y)
            .unwrap()
            .id
    }

    #[test]
    fn build_examples() {
        let k3 = complete(3);
        assert_eq!((k3.vertex_count(), k3.edge_count()), (3, 3));
        let k4 = complete(4);
        assert_eq!(k4.edge_ids(), vec![0, 1, 2, 3, 4, 5]);
        let pairs: Vec<_> = k4.edges().iter().map(|e| (e.u, e.v)).collect();
        assert_eq!(pairs, vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        let b = k23();
        assert_eq!((b.vertex_count(), b.edge_count()), (5, 6));
    }

    #[test]
    fn build_errors() {
        assert_eq!(build_graph(&GraphSpec::Complete(0)), Err(Error::EmptyGraph));
        assert_eq!(
            MultiGraph::from_pairs(3, vec![(1, 1)]),
            Err(Error::SelfLoop(1))
        );
        assert_eq!(
            MultiGraph::from_pairs(2, vec![(0, 2)]),
            Err(Error::VertexOutOfRange {
                vertex: 2,
                vertex_count: 2
            })
        );
        assert!(build_graph(&GraphSpec::CompleteBipartite(0, 3)).is_err());
    }

    #[test]
    fn contraction_examples() {
        let k3 = complete(3);
        let c = contract(&k3, &[0]).unwrap();
        assert_eq!((c.vertex_count(), c.edge_count()), (2, 2));
        assert!(c.has_parallel_edges());

        let g = k23();
        let c = contract(&g, &[k23_edge(&g, 0, 0), k23_edge(&g, 0, 1)]).unwrap();
        assert_eq!((c.vertex_count(), c.edge_count()), (3, 4));
        assert!(c.has_parallel_edges());

        assert_eq!(contract(&g, &[]).unwrap(), g);
    }

    #[test]
    fn contraction_errors() {
        let k3 = complete(3);
        assert_eq!(contract(&k3, &[0, 1, 2]), Err(Error::CyclicEdgeSet));
        assert_eq!(contract(&k3, &[9]), Err(Error::UnknownEdge(9)));
        assert_eq!(trees_containing(&k3, &[0, 1, 2]), Err(Error::CyclicEdgeSet));
    }

    #[test]
    fn contraction_drops_loops_from_parallel_edges() {
        let g = MultiGraph::from_pairs(3, vec![(0, 1), (0, 1), (1, 2)]).unwrap();
        let c = contract(&g, &[0]).unwrap();
        assert_eq!(c.vertex_count(), 2);
        assert_eq!(c.edge_ids(), vec![2]);
    }

    #[test]
    fn laplacian_examples() {
        assert_eq!(
            laplacian(&complete(3)),
            ExactMatrix::from_int_rows(&[[2, -1, -1], [-1, 2, -1], [-1, -1, 2]])
        );
        let two = MultiGraph::from_pairs(2, vec![(0, 1), (0, 1)]).unwrap();
        assert_eq!(
            laplacian(&two),
            ExactMatrix::from_int_rows(&[[2, -2], [-2, 2]])
        );
        let lap = laplacian(&k23());
        assert!(lap.symmetric_flag());
        assert!((0..5).all(|i| lap.row(i).iter().sum::<BigRational>() == int(0)));
    }

    #[test]
    fn tree_count_examples() {
        assert_eq!(tree_count_cofactor(&complete(3)), BigInt::from(3));
        assert_eq!(tree_count_cofactor(&complete(4)), BigInt::from(16));
        assert_eq!(tree_count_cofactor(&k23()), BigInt::from(12));
        assert_eq!(tree_count_cofactor(&complete(1)), BigInt::from(1));
        let disconnected = MultiGraph::from_pairs(3, vec![(0, 1)]).unwrap();
        assert_eq!(tree_count_cofactor(&disconnected), BigInt::from(0));
    }

    #[test]
    fn enumeration_examples() {
        let trees = enumerate_spanning_trees(&complete(3)).unwrap();
        assert_eq!(trees, vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(enumerate_spanning_trees(&complete(4)).unwrap().len(), 16);
        assert_eq!(
            enumerate_spanning_trees(&path(4)).unwrap(),
            vec![vec![0, 1, 2]]
        );
        assert_eq!(
            enumerate_spanning_trees(&complete(1)).unwrap(),
            vec![Vec::<EdgeId>::new()]
        );
    }

    #[test]
    fn enumeration_errors() {
        let disconnected = MultiGraph::from_pairs(3, vec![(0, 1)]).unwrap();
        assert_eq!(
            enumerate_spanning_trees(&disconnected),
            Err(Error::Disconnected)
        );
        assert_eq!(
            enumerate_spanning_trees(&complete(8)),
            Err(Error::EdgeCapExceeded { edges: 28, cap: 24 })
        );
        assert!(enumerate_spanning_trees_capped(&complete(8), 28).is_ok());
    }

    #[test]
    fn worked_bipartite_pairs() {
        let g = k23();
        let a = k23_edge(&g, 0, 0);
        assert_eq!(
            trees_containing(&g, &[a, k23_edge(&g, 0, 1)]).unwrap(),
            BigInt::from(5)
        );
        assert_eq!(
            trees_containing(&g, &[a, k23_edge(&g, 1, 0)]).unwrap(),
            BigInt::from(4)
        );
        assert_eq!(
            trees_containing(&g, &[a, k23_edge(&g, 1, 1)]).unwrap(),
            BigInt::from(5)
        );
    }

    #[test]
    fn moon_examples() {
        let k4 = complete(4);
        let trees = enumerate_spanning_trees(&k4).unwrap();
        let single = Forest::new(&k4, &[0]).unwrap();
        assert_eq!(single.component_sizes(), vec![2, 1, 1]);
        assert_eq!(moon_count(4, &single).unwrap(), int(8));
        assert_eq!(count_supersets(&trees, &[0]), 8);
        let empty = Forest::new(&k4, &[]).unwrap();
        assert_eq!(moon_count(4, &empty).unwrap(), int(16));

        let k5 = complete(5);
        // {0,1} and {2,3}
        let e01 = 0;
        let e23 = k5.edges().iter().find(|e| (e.u, e.v) == (2, 3)).unwrap().id;
        let f = Forest::new(&k5, &[e01, e23]).unwrap();
        assert_eq!(moon_count(5, &f).unwrap(), int(20));
        let trees5 = enumerate_spanning_trees(&k5).unwrap();
        assert_eq!(count_supersets(&trees5, &[e01, e23]), 20);

        let spanning = Forest::new(&k4, &[0, 1, 2]).unwrap();
        assert_eq!(moon_count(4, &spanning).unwrap(), int(1));
    }

    #[test]
    fn moon_rejects_foreign_hosts() {
        let multi = MultiGraph::from_pairs(3, vec![(0, 1), (0, 1), (1, 2)]).unwrap();
        let f = Forest::new(&multi, &[0]).unwrap();
        assert_eq!(moon_count(3, &f), Err(Error::NotInCompleteGraph(3)));
        let k4 = complete(4);
        let f = Forest::new(&k4, &[0]).unwrap();
        assert_eq!(moon_count(5, &f), Err(Error::NotInCompleteGraph(5)));
        assert_eq!(
            Forest::new(&k4, &[0, 1, 3]).unwrap_err(),
            Error::CyclicEdgeSet
        );
    }

    #[test]
    fn edge_list_round_trip_and_errors() {
        let text = "# triangle\nvertices 3\n1 0\n\n2 1  # last\n0 2\n";
        let g = parse_edge_list(text).unwrap();
        assert_eq!(g, complete(3));
        assert_eq!(parse_edge_list(&g.to_edge_list()).unwrap(), g);
        assert!(matches!(
            parse_edge_list(""),
            Err(Error::Parse { line: 0, .. })
        ));
        assert!(matches!(
            parse_edge_list("vertices 2\n0 x\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_edge_list("edges 2\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_edge_list("vertices 2\n0 1 1\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert_eq!(
            parse_edge_list("vertices 2\n0 0\n"),
            Err(Error::SelfLoop(0))
        );
        assert_eq!(parse_edge_list("vertices 0\n"), Err(Error::EmptyGraph));
    }

    fn arb_graph() -> impl Strategy<Value = MultiGraph> {
        (any::<u64>(), 1usize..=6, 0usize..=5).prop_map(|(seed, v, extra)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            random_connected_graph(&mut rng, v, v - 1 + extra)
        })
    }

    proptest! {
        #[test]
        fn enumeration_matches_cofactor(g in arb_graph()) {
            let trees = enumerate_spanning_trees(&g).unwrap();
            prop_assert_eq!(BigInt::from(trees.len()), tree_count_cofactor(&g));
            let unique: BTreeSet<_> = trees.iter().cloned().collect();
            prop_assert_eq!(unique.len(), trees.len());
            let mut sorted = trees.clone();
            sorted.sort();
            prop_assert_eq!(&sorted, &trees);
            for t in &trees {
                prop_assert_eq!(t.len(), g.vertex_count() - 1);
                prop_assert!(Forest::new(&g, t).is_ok());
            }
        }

        #[test]
        fn contraction_commutes(g in arb_graph(), a in 0usize..16, b in 0usize..16) {
            prop_assume!(g.edge_count() >= 2);
            let (a, b) = (a % g.edge_count(), b % g.edge_count());
            prop_assume!(a != b);
            prop_assume!(Forest::new(&g, &[a, b]).is_ok());
            let ab = contract(&contract(&g, &[a]).unwrap(), &[b]).unwrap();
            let ba = contract(&contract(&g, &[b]).unwrap(), &[a]).unwrap();
            let both = contract(&g, &[a, b]).unwrap();
            prop_assert_eq!(tree_count_cofactor(&ab), tree_count_cofactor(&ba));
            let mut da = ab.degrees();
            let mut db = ba.degrees();
            da.sort();
            db.sort();
            prop_assert_eq!(da, db);
            prop_assert_eq!(&ab, &both);
            prop_assert_eq!(&ba, &both);
        }

        #[test]
        fn all_cofactors_agree(g in arb_graph()) {
            prop_assume!(g.vertex_count() >= 2);
            let lap = laplacian(&g);
            let c11 = determinant(&lap.minor(0, 0)).unwrap();
            let c22 = determinant(&lap.minor(1, 1)).unwrap();
            // (1,2) cofactor carries the sign (-1)^(1+2)
            let c12 = -determinant(&lap.minor(0, 1)).unwrap();
            prop_assert_eq!(&c11, &c22);
            prop_assert_eq!(&c11, &c12);
        }
    }
}
