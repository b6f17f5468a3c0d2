//! Degeneracy orderings and the forward orientations they induce.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, VertexId};

/// An edge of the base graph directed from `tail` to `head`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Arc {
    pub edge: EdgeId,
    pub tail: VertexId,
    pub head: VertexId,
}

/// A set of arcs, all pointing forward in a fixed linear order of the
/// vertices.
///
/// Sub-orientations produced while peeling share the order of the one they
/// came from, so every arc set derived from a single `orient_by_ordering`
/// call stays acyclic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orientation {
    order: Vec<VertexId>,
    position: Vec<usize>,
    arcs: Vec<Arc>,
}

impl Orientation {
    /// Builds an orientation from arcs, checking they all go forward.
    pub fn from_arcs(order: Vec<VertexId>, arcs: Vec<Arc>) -> Result<Self> {
        let position = positions(&order)?;
        let n = order.len();
        for a in &arcs {
            if a.tail >= n || a.head >= n {
                return Err(Error::input(format!("arc {a:?} leaves the vertex range")));
            }
            if position[a.tail] >= position[a.head] {
                return Err(Error::input(format!(
                    "arc {a:?} points backwards in the order"
                )));
            }
        }
        Ok(Orientation {
            order,
            position,
            arcs,
        })
    }

    /// Same order, different arc subset. Callers guarantee the arcs come
    /// from an orientation with this order.
    pub(crate) fn with_arcs(&self, arcs: Vec<Arc>) -> Orientation {
        Orientation {
            order: self.order.clone(),
            position: self.position.clone(),
            arcs,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.order.len()
    }

    pub fn order(&self) -> &[VertexId] {
        &self.order
    }

    pub fn position(&self, v: VertexId) -> usize {
        self.position[v]
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn out_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertex_count()];
        for a in &self.arcs {
            deg[a.tail] += 1;
        }
        deg
    }

    pub fn in_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertex_count()];
        for a in &self.arcs {
            deg[a.head] += 1;
        }
        deg
    }

    /// Maximum out-degree, zero when there are no arcs.
    pub fn max_out_degree(&self) -> usize {
        self.out_degrees().into_iter().max().unwrap_or(0)
    }

    /// Out-neighbour lists, each sorted ascending by head id.
    pub fn out_neighbours(&self) -> Vec<Vec<VertexId>> {
        let mut out = vec![Vec::new(); self.vertex_count()];
        for a in &self.arcs {
            out[a.tail].push(a.head);
        }
        for list in &mut out {
            list.sort_unstable();
        }
        out
    }

    /// The undirected graph on the same vertices; edge `i` is arc `i`.
    pub fn underlying_graph(&self) -> Graph {
        let edges = self.arcs.iter().map(|a| (a.tail, a.head)).collect();
        Graph::new(self.vertex_count(), edges).expect("arcs of an orientation form a simple graph")
    }

    /// Ids of the base-graph edges carried by this orientation, ascending.
    pub fn edge_ids(&self) -> Vec<EdgeId> {
        let mut ids: Vec<_> = self.arcs.iter().map(|a| a.edge).collect();
        ids.sort_unstable();
        ids
    }
}

fn positions(order: &[VertexId]) -> Result<Vec<usize>> {
    let n = order.len();
    let mut position = vec![usize::MAX; n];
    for (i, &v) in order.iter().enumerate() {
        if v >= n || position[v] != usize::MAX {
            return Err(Error::input(format!(
                "order is not a permutation of 0..{n} (offending entry {v} at index {i})"
            )));
        }
        position[v] = i;
    }
    Ok(position)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegeneracyOrdering {
    /// Vertices in removal order.
    pub order: Vec<VertexId>,
    /// Largest degree seen at removal time.
    pub degeneracy: usize,
}

/// Min-degree peeling with ties broken by lowest vertex id.
pub fn degeneracy_ordering(g: &Graph) -> DegeneracyOrdering {
    let n = g.vertex_count();
    let mut degree: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut buckets: Vec<BTreeSet<VertexId>> = vec![BTreeSet::new(); g.max_degree() + 1];
    for v in 0..n {
        buckets[degree[v]].insert(v);
    }
    let mut removed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut degeneracy = 0;
    let mut low = 0;
    for _ in 0..n {
        while buckets[low].is_empty() {
            low += 1;
        }
        let v = buckets[low].pop_first().expect("bucket is non-empty");
        degeneracy = degeneracy.max(low);
        removed[v] = true;
        order.push(v);
        for u in g.neighbours(v) {
            if !removed[u] {
                buckets[degree[u]].remove(&u);
                degree[u] -= 1;
                buckets[degree[u]].insert(u);
            }
        }
        low = low.saturating_sub(1);
    }
    DegeneracyOrdering { order, degeneracy }
}

/// Degeneracy of `g` (zero for edgeless graphs, including the empty graph).
pub fn exact_degeneracy(g: &Graph) -> usize {
    degeneracy_ordering(g).degeneracy
}

/// Directs every edge from its endpoint earlier in `order` to the later one.
pub fn orient_by_ordering(g: &Graph, order: &[VertexId]) -> Result<Orientation> {
    if order.len() != g.vertex_count() {
        return Err(Error::input(format!(
            "order has {} entries but the graph has {} vertices",
            order.len(),
            g.vertex_count()
        )));
    }
    let position = positions(order)?;
    let arcs = g
        .edges()
        .iter()
        .enumerate()
        .map(|(edge, &(u, v))| {
            let (tail, head) = if position[u] < position[v] {
                (u, v)
            } else {
                (v, u)
            };
            Arc { edge, tail, head }
        })
        .collect();
    Ok(Orientation {
        order: order.to_vec(),
        position,
        arcs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::is_forest_edges;
    use proptest::prelude::*;

    fn later_neighbours(g: &Graph, order: &[VertexId]) -> Vec<usize> {
        let mut pos = vec![0; order.len()];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        (0..g.vertex_count())
            .map(|v| g.neighbours(v).filter(|&u| pos[u] > pos[v]).count())
            .collect()
    }

    #[test]
    fn named_degeneracies() {
        assert_eq!(degeneracy_ordering(&Graph::complete(4)).degeneracy, 3);
        assert_eq!(degeneracy_ordering(&Graph::cycle(5)).degeneracy, 2);
        assert_eq!(degeneracy_ordering(&Graph::star(5)).degeneracy, 1);
        assert_eq!(exact_degeneracy(&Graph::complete(5)), 4);
        assert_eq!(exact_degeneracy(&Graph::path(6)), 1);
        assert_eq!(exact_degeneracy(&Graph::empty(4)), 0);
        assert_eq!(exact_degeneracy(&Graph::empty(0)), 0);
    }

    #[test]
    fn ties_break_by_lowest_id() {
        assert_eq!(
            degeneracy_ordering(&Graph::complete(4)).order,
            vec![0, 1, 2, 3]
        );
        // leaves first, lowest id first, centre once its degree drops
        assert_eq!(degeneracy_ordering(&Graph::star(3)).order, vec![1, 2, 0, 3]);
    }

    #[test]
    fn clique_forward_out_degrees() {
        let k4 = Graph::complete(4);
        let o = orient_by_ordering(&k4, &[0, 1, 2, 3]).unwrap();
        assert_eq!(o.out_degrees(), vec![3, 2, 1, 0]);
        let rev = orient_by_ordering(&k4, &[3, 2, 1, 0]).unwrap();
        assert_eq!(rev.out_degrees(), vec![0, 1, 2, 3]);
    }

    #[test]
    fn single_edge_orientation() {
        let g = Graph::path(2);
        assert_eq!(
            orient_by_ordering(&g, &[0, 1]).unwrap().out_degrees(),
            vec![1, 0]
        );
        assert_eq!(
            orient_by_ordering(&g, &[1, 0]).unwrap().out_degrees(),
            vec![0, 1]
        );
    }

    #[test]
    fn cycle_degeneracy_orientation() {
        let c5 = Graph::cycle(5);
        let ord = degeneracy_ordering(&c5);
        let o = orient_by_ordering(&c5, &ord.order).unwrap();
        assert!(o.max_out_degree() <= 2);
    }

    #[test]
    fn rejects_non_permutations() {
        let g = Graph::path(3);
        assert!(orient_by_ordering(&g, &[0, 1]).is_err());
        assert!(orient_by_ordering(&g, &[0, 1, 1]).is_err());
        assert!(orient_by_ordering(&g, &[0, 1, 3]).is_err());
        assert!(Orientation::from_arcs(
            vec![0, 1],
            vec![Arc {
                edge: 0,
                tail: 1,
                head: 0
            }]
        )
        .is_err());
    }

    fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
        (1..=max_n).prop_flat_map(|n| {
            let pairs = n * (n - 1) / 2;
            proptest::collection::vec(any::<bool>(), pairs).prop_map(move |bits| {
                let mut edges = Vec::new();
                let mut k = 0;
                for u in 0..n {
                    for v in u + 1..n {
                        if bits[k] {
                            edges.push((u, v));
                        }
                        k += 1;
                    }
                }
                Graph::new(n, edges).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn ordering_certifies_degeneracy(g in arb_graph(14)) {
            let ord = degeneracy_ordering(&g);
            let later = later_neighbours(&g, &ord.order);
            prop_assert!(later.iter().all(|&c| c <= ord.degeneracy));
            let o = orient_by_ordering(&g, &ord.order).unwrap();
            prop_assert_eq!(o.out_degrees(), later);
            for a in o.arcs() {
                prop_assert!(o.position(a.tail) < o.position(a.head));
            }
        }

        #[test]
        fn out_degree_one_forward_arcs_form_forest(g in arb_graph(12), pick in any::<u64>()) {
            let ord = degeneracy_ordering(&g);
            let o = orient_by_ordering(&g, &ord.order).unwrap();
            // keep at most one outgoing arc per vertex, chosen pseudo-randomly
            let outs = {
                let mut by_tail: Vec<Vec<&Arc>> = vec![Vec::new(); g.vertex_count()];
                for a in o.arcs() { by_tail[a.tail].push(a); }
                by_tail
            };
            let kept: Vec<EdgeId> = outs
                .iter()
                .enumerate()
                .filter(|(_, list)| !list.is_empty())
                .map(|(v, list)| list[(pick as usize).wrapping_add(v) % list.len()].edge)
                .collect();
            prop_assert!(is_forest_edges(&g, kept));
        }

        #[test]
        fn degeneracy_is_max_min_degree_on_small_graphs(g in arb_graph(9)) {
            // brute force: max over vertex subsets of the minimum induced degree
            let n = g.vertex_count();
            let masks = g.adjacency_masks();
            let mut best = 0;
            for s in 1u64..(1 << n) {
                let min_deg = (0..n)
                    .filter(|&v| s >> v & 1 == 1)
                    .map(|v| (masks[v] & s).count_ones() as usize)
                    .min()
                    .unwrap();
                best = best.max(min_deg);
            }
            prop_assert_eq!(exact_degeneracy(&g), best);
        }
    }
}
