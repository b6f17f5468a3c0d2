//! Simple undirected graphs with stable vertex and edge identifiers.

use std::collections::HashSet;
use std::fmt::Write as _;

use crate::error::{Error, Result};

pub type VertexId = usize;
pub type EdgeId = usize;

/// A simple undirected graph on vertices `0..vertex_count`.
///
/// Edge `e` is `edges()[e]`; its id never changes for the lifetime of the
/// graph. Adjacency lists hold incident edge ids in insertion order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    vertex_count: usize,
    edges: Vec<(VertexId, VertexId)>,
    adjacency: Vec<Vec<EdgeId>>,
}

impl Graph {
    /// Builds a graph, rejecting self-loops, duplicate edges and out-of-range
    /// endpoints.
    pub fn new(vertex_count: usize, edges: Vec<(VertexId, VertexId)>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(edges.len());
        let mut adjacency = vec![Vec::new(); vertex_count];
        for (id, &(u, v)) in edges.iter().enumerate() {
            if u >= vertex_count || v >= vertex_count {
                return Err(Error::input(format!(
                    "edge {id} ({u}, {v}) has an endpoint outside 0..{vertex_count}"
                )));
            }
            if u == v {
                return Err(Error::input(format!("edge {id} is a self-loop at {u}")));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::input(format!("edge {id} ({u}, {v}) is a duplicate")));
            }
            adjacency[u].push(id);
            adjacency[v].push(id);
        }
        Ok(Graph {
            vertex_count,
            edges,
            adjacency,
        })
    }

    pub fn empty(vertex_count: usize) -> Self {
        Graph {
            vertex_count,
            edges: Vec::new(),
            adjacency: vec![Vec::new(); vertex_count],
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut edges = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v));
            }
        }
        Graph::new(n, edges).expect("complete graph is simple")
    }

    /// Path on `n` vertices.
    pub fn path(n: usize) -> Self {
        let edges = (1..n).map(|v| (v - 1, v)).collect();
        Graph::new(n, edges).expect("path is simple")
    }

    /// Cycle on `n >= 3` vertices.
    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "a cycle needs at least three vertices");
        let edges = (0..n).map(|v| (v, (v + 1) % n)).collect();
        Graph::new(n, edges).expect("cycle is simple")
    }

    /// Star with centre 0 and `leaves` leaves.
    pub fn star(leaves: usize) -> Self {
        let edges = (1..=leaves).map(|v| (0, v)).collect();
        Graph::new(leaves + 1, edges).expect("star is simple")
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn endpoints(&self, e: EdgeId) -> (VertexId, VertexId) {
        self.edges[e]
    }

    /// The endpoint of `e` that is not `v`.
    pub fn other(&self, e: EdgeId, v: VertexId) -> VertexId {
        let (a, b) = self.edges[e];
        if a == v {
            b
        } else {
            a
        }
    }

    pub fn incident(&self, v: VertexId) -> &[EdgeId] {
        &self.adjacency[v]
    }

    pub fn neighbours(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.adjacency[v].iter().map(move |&e| self.other(e, v))
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adjacency[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn edge_between(&self, u: VertexId, v: VertexId) -> Option<EdgeId> {
        let (a, b) = if self.degree(u) <= self.degree(v) {
            (u, v)
        } else {
            (v, u)
        };
        self.adjacency[a]
            .iter()
            .copied()
            .find(|&e| self.other(e, a) == b)
    }

    /// Spanning subgraph keeping only `edge_ids`, in the given order.
    ///
    /// Edge `i` of the result is `edge_ids[i]` of `self`.
    pub fn spanning_subgraph(&self, edge_ids: &[EdgeId]) -> Graph {
        let mut adjacency = vec![Vec::new(); self.vertex_count];
        let mut edges = Vec::with_capacity(edge_ids.len());
        for (new_id, &e) in edge_ids.iter().enumerate() {
            let (u, v) = self.edges[e];
            adjacency[u].push(new_id);
            adjacency[v].push(new_id);
            edges.push((u, v));
        }
        Graph {
            vertex_count: self.vertex_count,
            edges,
            adjacency,
        }
    }

    /// Subgraph induced by `vertices`, relabelled to `0..vertices.len()` in
    /// the order given.
    pub fn induced_subgraph(&self, vertices: &[VertexId]) -> Graph {
        let mut index = vec![usize::MAX; self.vertex_count];
        for (i, &v) in vertices.iter().enumerate() {
            index[v] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(u, v)| index[u] != usize::MAX && index[v] != usize::MAX)
            .map(|&(u, v)| (index[u], index[v]))
            .collect();
        Graph::new(vertices.len(), edges).expect("induced subgraph of a simple graph is simple")
    }

    /// Number of edges with both endpoints in `vertices`.
    pub fn induced_edge_count(&self, vertices: &[VertexId]) -> usize {
        let mut inside = vec![false; self.vertex_count];
        for &v in vertices {
            inside[v] = true;
        }
        self.edges
            .iter()
            .filter(|&&(u, v)| inside[u] && inside[v])
            .count()
    }

    /// Adjacency as bitmasks; only for graphs with at most 64 vertices.
    pub fn adjacency_masks(&self) -> Vec<u64> {
        assert!(
            self.vertex_count <= 64,
            "bitmask adjacency needs <= 64 vertices"
        );
        let mut masks = vec![0u64; self.vertex_count];
        for &(u, v) in &self.edges {
            masks[u] |= 1 << v;
            masks[v] |= 1 << u;
        }
        masks
    }

    /// Renders the graph in the edge-list format accepted by [`parse_graph`].
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("n {}\n", self.vertex_count);
        for &(u, v) in &self.edges {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }
}

/// Parses a whitespace-separated edge list.
///
/// Lines starting with `#` and blank lines are ignored. An optional first
/// data line `n <count>` fixes the vertex count; otherwise it is one more
/// than the largest id seen. Edge ids follow file order.
pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut declared: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    let mut seen = HashSet::new();
    let mut max_id: Option<usize> = None;
    for (index, raw) in text.lines().enumerate() {
        let line_no = index + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parse_err = |message: String| Error::Parse {
            line: line_no,
            message,
        };
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() == 2 && fields[0] == "n" {
            if declared.is_some() || !edges.is_empty() {
                return Err(parse_err(
                    "vertex-count header must be the first data line".into(),
                ));
            }
            let count = fields[1]
                .parse()
                .map_err(|_| parse_err(format!("bad vertex count {:?}", fields[1])))?;
            declared = Some((count, line_no));
            continue;
        }
        if fields.len() != 2 {
            return Err(parse_err(format!(
                "expected two vertex ids, found {} fields",
                fields.len()
            )));
        }
        let id = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| parse_err(format!("bad vertex id {s:?}")))
        };
        let (u, v) = (id(fields[0])?, id(fields[1])?);
        if u == v {
            return Err(parse_err(format!("self-loop at vertex {u}")));
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(parse_err(format!("duplicate edge {u} {v}")));
        }
        max_id = Some(max_id.map_or(u.max(v), |m| m.max(u).max(v)));
        edges.push((u, v));
    }
    let needed = max_id.map_or(0, |m| m + 1);
    let vertex_count = match declared {
        Some((count, line)) if count < needed => {
            return Err(Error::Parse {
                line,
                message: format!(
                    "header declares {count} vertices but id {} appears",
                    needed - 1
                ),
            })
        }
        Some((count, _)) => count,
        None => needed,
    };
    Graph::new(vertex_count, edges)
}

struct DisjointSets {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false if `a` and `b` were already joined.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => self.parent[ra] = rb,
            std::cmp::Ordering::Greater => self.parent[rb] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
        true
    }
}

/// True iff `g` has no cycle.
pub fn is_forest(g: &Graph) -> bool {
    is_forest_edges(g, 0..g.edge_count())
}

/// True iff the given edges of `g` form an acyclic graph.
pub fn is_forest_edges(g: &Graph, edge_ids: impl IntoIterator<Item = EdgeId>) -> bool {
    let mut sets = DisjointSets::new(g.vertex_count());
    edge_ids.into_iter().all(|e| {
        let (u, v) = g.endpoints(e);
        sets.union(u, v)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_simple_list() {
        let g = parse_graph("0 1\n1 2").unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.endpoints(1), (1, 2));
    }

    #[test]
    fn parses_empty_document() {
        let g = parse_graph("").unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (0, 0));
    }

    #[test]
    fn comments_and_header() {
        let g = parse_graph("# a comment\nn 5\n\n0 1\n# more\n3 4\n").unwrap();
        assert_eq!(g.vertex_count(), 5);
        assert_eq!(g.edge_count(), 2);
    }

    #[test]
    fn rejects_duplicates_loops_and_junk() {
        match parse_graph("0 1\n0 1") {
            Err(Error::Parse { line: 2, message }) => assert!(message.contains("duplicate")),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            parse_graph("1 0\n0 1"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_graph("2 2"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_graph("0 1\n0 x"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_graph("0 1 2"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_graph("n 2\n0 5"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_graph("0 1\nn 4"),
            Err(Error::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn new_enforces_invariants() {
        assert!(Graph::new(2, vec![(0, 2)]).is_err());
        assert!(Graph::new(2, vec![(1, 1)]).is_err());
        assert!(Graph::new(3, vec![(0, 1), (1, 0)]).is_err());
        let g = Graph::complete(5);
        let total: usize = (0..5).map(|v| g.degree(v)).sum();
        assert_eq!(total, 2 * g.edge_count());
    }

    #[test]
    fn edge_list_round_trip() {
        let g = Graph::new(6, vec![(0, 3), (3, 1), (2, 1)]).unwrap();
        assert_eq!(parse_graph(&g.to_edge_list()).unwrap(), g);
    }

    #[test]
    fn forest_predicate() {
        assert!(is_forest(&Graph::path(4)));
        assert!(!is_forest(&Graph::complete(3)));
        assert!(is_forest(&Graph::empty(0)));
        assert!(is_forest(&Graph::empty(7)));
        let c5 = Graph::cycle(5);
        assert!(!is_forest(&c5));
        assert!(is_forest_edges(&c5, 0..4));
    }

    #[test]
    fn subgraphs() {
        let k4 = Graph::complete(4);
        let sub = k4.spanning_subgraph(&[5, 0]);
        assert_eq!(sub.vertex_count(), 4);
        assert_eq!(sub.endpoints(0), k4.endpoints(5));
        let tri = k4.induced_subgraph(&[3, 1, 2]);
        assert_eq!(tri.edge_count(), 3);
        assert_eq!(k4.induced_edge_count(&[0, 2]), 1);
        assert_eq!(k4.edge_between(2, 1), Some(3));
        assert_eq!(Graph::path(3).edge_between(0, 2), None);
    }
}
