//! Exact density functionals.
//!
//! * `m(G)`: the maximum of `e(G')/v(G')` over non-empty subgraphs.
//! * `d2(H) = (e_H - 1)/(v_H - 2)` for `v_H >= 3`.
//! * `m2(H)`: the maximum of `d2` over subgraphs on at least three
//!   vertices, floored at `1/2`.
//!
//! Every optimum over subgraphs is attained by an induced subgraph, so the
//! searches below range over vertex sets.

use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flow::FlowNetwork;
use crate::graph::{Graph, VertexId};
use crate::rational::Rational;

/// Largest graph accepted by [`max_density_bruteforce`].
pub const BRUTEFORCE_MAX_VERTICES: usize = 16;
/// Largest graph accepted by the exhaustive 2-density searches.
pub const TWO_DENSITY_MAX_VERTICES: usize = 24;

/// An optimal vertex set together with the value it attains.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DensityWitness {
    pub value: Rational,
    /// Sorted ascending.
    pub vertices: Vec<VertexId>,
    pub edge_count: usize,
    pub vertex_count: usize,
}

impl DensityWitness {
    fn density(g: &Graph, vertices: Vec<VertexId>) -> Self {
        let edge_count = g.induced_edge_count(&vertices);
        DensityWitness {
            value: Rational::new(edge_count as i128, vertices.len() as i128),
            vertex_count: vertices.len(),
            vertices,
            edge_count,
        }
    }

    fn two_density(vertices: Vec<VertexId>, edge_count: usize) -> Self {
        DensityWitness {
            value: Rational::new(edge_count as i128 - 1, vertices.len() as i128 - 2),
            vertex_count: vertices.len(),
            vertices,
            edge_count,
        }
    }
}

/// `m2(H)` with the subgraph attaining it.
///
/// `witness` is `None` exactly when no subgraph on three or more vertices
/// reaches the `1/2` floor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoDensity {
    pub value: Rational,
    pub witness: Option<DensityWitness>,
}

/// `e(g[s]) / |s|`.
pub fn subgraph_density(g: &Graph, s: &[VertexId]) -> Result<Rational> {
    if s.is_empty() {
        return Err(Error::input("density of an empty vertex set is undefined"));
    }
    let mut sorted = s.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != s.len() || sorted.last().is_some_and(|&v| v >= g.vertex_count()) {
        return Err(Error::input("vertex set has repeated or out-of-range ids"));
    }
    Ok(Rational::new(
        g.induced_edge_count(&sorted) as i128,
        sorted.len() as i128,
    ))
}

/// Maximises `b * e(S) - a * |S|` over vertex sets `S` as a maximum-weight
/// closure: edges are worth `b`, vertices cost `a`. Returns the value and the
/// smallest optimal `S`.
fn max_closure(g: &Graph, a: i128, b: i128) -> (i128, Vec<VertexId>) {
    let n = g.vertex_count();
    let m = g.edge_count();
    let source = n + m;
    let sink = source + 1;
    let (a, b) = (
        i64::try_from(a).expect("closure weight fits in i64"),
        i64::try_from(b).expect("closure weight fits in i64"),
    );
    let mut net = FlowNetwork::new(n + m + 2);
    let unbounded = b.saturating_mul(m as i64).saturating_add(1);
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        let node = n + e;
        net.add_edge(source, node, b);
        net.add_edge(node, u, unbounded);
        net.add_edge(node, v, unbounded);
    }
    for v in 0..n {
        net.add_edge(v, sink, a);
    }
    let cut = net.max_flow(source, sink);
    let side = net.source_side(source);
    let chosen = (0..n).filter(|&v| side[v]).collect();
    (i128::from(b) * m as i128 - i128::from(cut), chosen)
}

/// Exact `m(g)` by parametric maximum flow.
///
/// Starting from the density of the whole graph, each round solves a
/// closure problem at the current ratio `a/b`. A set with positive value has
/// strictly larger density and becomes the next ratio; a zero optimum proves
/// the current ratio is the maximum. Ratios are densities of actual vertex
/// sets, so every step is exact and the ratios strictly increase through a
/// finite set.
pub fn max_density(g: &Graph) -> Result<DensityWitness> {
    if g.edge_count() == 0 {
        return Err(Error::input("maximum density needs at least one edge"));
    }
    let mut best = DensityWitness::density(g, (0..g.vertex_count()).collect());
    loop {
        let (value, chosen) = max_closure(g, best.value.numer(), best.value.denom());
        if value <= 0 {
            return Ok(best);
        }
        let next = DensityWitness::density(g, chosen);
        if next.value <= best.value {
            return Err(Error::Invariant(format!(
                "closure step did not improve density ({} after {})",
                next.value, best.value
            )));
        }
        best = next;
    }
}

fn lex_less(a: &[VertexId], b: &[VertexId]) -> bool {
    a < b
}

fn mask_vertices(mask: u64) -> Vec<VertexId> {
    (0..64).filter(|&v| mask >> v & 1 == 1).collect()
}

/// `m(g)` by enumerating every non-empty vertex set. Ties go to the
/// lexicographically smallest set.
pub fn max_density_bruteforce(g: &Graph) -> Result<DensityWitness> {
    let n = g.vertex_count();
    if n > BRUTEFORCE_MAX_VERTICES {
        return Err(Error::input(format!(
            "brute-force density supports at most {BRUTEFORCE_MAX_VERTICES} vertices, got {n}"
        )));
    }
    if g.edge_count() == 0 {
        return Err(Error::input("maximum density needs at least one edge"));
    }
    let adj = g.adjacency_masks();
    let size = 1usize << n;
    let mut edges = vec![0u32; size];
    let mut best: Option<(u32, u32, Vec<VertexId>)> = None;
    for mask in 1..size {
        let low = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        edges[mask] = edges[rest] + (adj[low] & rest as u64).count_ones();
        let (e, v) = (edges[mask], mask.count_ones());
        let replace = match &best {
            None => true,
            Some((be, bv, set)) => {
                let lhs = u64::from(e) * u64::from(*bv);
                let rhs = u64::from(*be) * u64::from(v);
                lhs > rhs || (lhs == rhs && lex_less(&mask_vertices(mask as u64), set))
            }
        };
        if replace {
            best = Some((e, v, mask_vertices(mask as u64)));
        }
    }
    let (e, v, vertices) = best.expect("graph has vertices");
    Ok(DensityWitness {
        value: Rational::new(e as i128, v as i128),
        vertices,
        edge_count: e as usize,
        vertex_count: v as usize,
    })
}

/// `(e_h - 1)/(v_h - 2)`.
pub fn two_density(h: &Graph) -> Result<Rational> {
    let v = h.vertex_count();
    if v < 3 {
        return Err(Error::input(format!(
            "2-density needs at least 3 vertices, got {v}"
        )));
    }
    Ok(Rational::new(h.edge_count() as i128 - 1, v as i128 - 2))
}

/// Visits every vertex set of size >= 3 in lexicographic order of its sorted
/// vertex list, passing the set mask, its size and its induced edge count.
fn for_each_vertex_set<B>(
    adj: &[u64],
    visit: &mut impl FnMut(u64, u32, u32) -> ControlFlow<B>,
) -> ControlFlow<B> {
    fn go<B>(
        adj: &[u64],
        mask: u64,
        size: u32,
        edges: u32,
        next: usize,
        visit: &mut impl FnMut(u64, u32, u32) -> ControlFlow<B>,
    ) -> ControlFlow<B> {
        for v in next..adj.len() {
            let grown = mask | 1 << v;
            let e = edges + (adj[v] & mask).count_ones();
            if size + 1 >= 3 {
                visit(grown, size + 1, e)?;
            }
            go(adj, grown, size + 1, e, v + 1, visit)?;
        }
        ControlFlow::Continue(())
    }
    go(adj, 0, 0, 0, 0, visit)
}

fn check_two_density_size(h: &Graph) -> Result<()> {
    let n = h.vertex_count();
    if n > TWO_DENSITY_MAX_VERTICES {
        return Err(Error::input(format!(
            "exhaustive 2-density supports at most {TWO_DENSITY_MAX_VERTICES} vertices, got {n}"
        )));
    }
    Ok(())
}

/// Largest `d2` over vertex sets of size >= 3 as `(edges - 1, vertices - 2)`,
/// with the lexicographically first set attaining it.
fn best_two_density(adj: &[u64]) -> Option<(i64, i64, u64)> {
    let mut best: Option<(i64, i64, u64)> = None;
    let _ = for_each_vertex_set::<()>(adj, &mut |mask, v, e| {
        let (num, den) = (i64::from(e) - 1, i64::from(v) - 2);
        // visit order is lexicographic, so only strict improvements replace
        if best.is_none_or(|(bn, bd, _)| num * bd > bn * den) {
            best = Some((num, den, mask));
        }
        ControlFlow::Continue(())
    });
    best
}

/// `m2(h)` by exhaustive search over vertex sets, with the lexicographically
/// smallest optimal set as witness.
pub fn max_two_density(h: &Graph) -> Result<TwoDensity> {
    check_two_density_size(h)?;
    let adj = h.adjacency_masks();
    match best_two_density(&adj) {
        Some((num, den, mask)) if Rational::new(num.into(), den.into()) >= Rational::HALF => {
            let vertices = mask_vertices(mask);
            let edge_count = num as usize + 1;
            let witness = DensityWitness::two_density(vertices, edge_count);
            Ok(TwoDensity {
                value: witness.value,
                witness: Some(witness),
            })
        }
        _ => Ok(TwoDensity {
            value: Rational::HALF,
            witness: None,
        }),
    }
}

/// True iff every proper subgraph of `h` has strictly smaller `m2` than `h`.
///
/// This needs `d2(h) > 1/2`: otherwise a single edge already matches the
/// `1/2` floor.
pub fn is_strictly_two_balanced(h: &Graph) -> Result<bool> {
    check_two_density_size(h)?;
    let n = h.vertex_count();
    if n < 3 {
        return Ok(false);
    }
    let d2 = two_density(h)?;
    if d2 <= Rational::HALF {
        return Ok(false);
    }
    let full: u64 = if n == 64 { u64::MAX } else { (1 << n) - 1 };
    let (num, den) = (d2.numer() as i64, d2.denom() as i64);
    let adj = h.adjacency_masks();
    let blocked = for_each_vertex_set(&adj, &mut |mask, v, e| {
        let (pn, pd) = (i64::from(e) - 1, i64::from(v) - 2);
        if mask != full && pn * den >= num * pd {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    Ok(blocked.is_continue())
}

/// The lexicographically smallest vertex set whose induced subgraph attains
/// `m2(h)` and is strictly 2-balanced. The result is relabelled to
/// `0..k`; `vertices` gives the original ids in order.
pub fn strictly_two_balanced_core(h: &Graph) -> Result<(Graph, Vec<VertexId>)> {
    check_two_density_size(h)?;
    let adj = h.adjacency_masks();
    let (num, den, _) = match best_two_density(&adj) {
        Some(best) if best.0 * 2 > best.1 => best,
        _ => {
            return Err(Error::input(
                "strictly 2-balanced core needs m2 above 1/2 attained on >= 3 vertices",
            ))
        }
    };
    let found = for_each_vertex_set(&adj, &mut |mask, v, e| {
        let (sn, sd) = (i64::from(e) - 1, i64::from(v) - 2);
        if sn * den != num * sd {
            return ControlFlow::Continue(());
        }
        let vertices = mask_vertices(mask);
        let core = h.induced_subgraph(&vertices);
        match is_strictly_two_balanced(&core) {
            Ok(true) => ControlFlow::Break((core, vertices)),
            _ => ControlFlow::Continue(()),
        }
    });
    match found {
        ControlFlow::Break(core) => Ok(core),
        ControlFlow::Continue(()) => Err(Error::Invariant(
            "a minimal maximiser of d2 must be strictly 2-balanced".into(),
        )),
    }
}
