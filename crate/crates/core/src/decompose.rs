//! Degenerate forest decompositions.
//!
//! [`peel_layer`] removes one outgoing arc from every vertex of maximum
//! out-degree `d`, choosing the arcs through a bipartite matching in which
//! each out-neighbour may absorb at most `c = ceil(mu / (d - mu))` of them.
//! [`degenerate_decomposition`] applies it for `d = K, K-1, ..., k+1` to the
//! orientation given by a degeneracy ordering, producing forests `F_i` and a
//! residual graph.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::density::max_density;
use crate::error::{Error, Result};
use crate::graph::{is_forest_edges, EdgeId, Graph, VertexId};
use crate::matching::{saturating_matching, MatchingOutcome};
use crate::orientation::{
    degeneracy_ordering, exact_degeneracy, orient_by_ordering, Arc, Orientation,
};
use crate::rational::{ceil_div, Rational};
use crate::report::Report;

/// Output of one peel step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeelResult {
    /// Matched arcs; at most one leaves each vertex.
    pub forest_arcs: Vec<Arc>,
    pub remainder: Orientation,
    /// Copies of each out-neighbour in the auxiliary graph.
    pub copies: u64,
    /// Vertices whose out-degree was exactly `d`.
    pub saturated: Vec<VertexId>,
}

/// A set `U` of maximum out-degree vertices whose out-neighbourhood is too
/// small to absorb one arc from each of them.
///
/// The subgraph spanned by `U` and its out-neighbourhood then has density
/// strictly above `mu`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HallViolation {
    pub hall_set: Vec<VertexId>,
    pub out_neighbourhood: Vec<VertexId>,
    pub copies: u64,
    pub out_degree: usize,
    pub mu: Rational,
    /// `U ∪ N⁺(U)`, sorted.
    pub witness_vertices: Vec<VertexId>,
    /// Density of the arcs spanned by `witness_vertices`.
    pub witness_density: Rational,
}

impl fmt::Display for HallViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} vertices of out-degree {} reach only {} out-neighbours with {} copies each; \
             their span has density {} > {}",
            self.hall_set.len(),
            self.out_degree,
            self.out_neighbourhood.len(),
            self.copies,
            self.witness_density,
            self.mu
        )
    }
}

/// `ceil(mu / (d - mu))`, which requires `0 <= mu < d`.
pub fn copies_needed(d: usize, mu: Rational) -> u64 {
    let gap = Rational::from(d) - mu;
    let ratio = mu / gap;
    ceil_div(ratio.numer(), ratio.denom()).max(0) as u64
}

/// `ceil(d / (d - mu))`, the degree bound on a peeled forest.
pub fn forest_degree_bound(d: usize, mu: Rational) -> u64 {
    let ratio = Rational::from(d) / (Rational::from(d) - mu);
    ceil_div(ratio.numer(), ratio.denom()) as u64
}

/// Splits `j` into a matched arc set and a remainder of out-degree `d - 1`.
///
/// Requires `max_out_degree(j) <= d` and `0 <= mu < d`. When `mu` is below
/// the true maximum density of `j` the matching may fail; that failure is
/// returned as [`Error::DensityViolation`].
pub fn peel_layer(j: &Orientation, d: usize, mu: Rational) -> Result<PeelResult> {
    if d == 0 {
        return Err(Error::input("peel_layer needs d >= 1"));
    }
    if mu < Rational::ZERO || mu >= Rational::from(d) {
        return Err(Error::input(format!(
            "peel_layer needs 0 <= mu < d, got mu = {mu}, d = {d}"
        )));
    }
    let out_degree = j.out_degrees();
    if let Some(v) = out_degree.iter().position(|&deg| deg > d) {
        return Err(Error::input(format!(
            "vertex {v} has out-degree {} above d = {d}",
            out_degree[v]
        )));
    }
    let copies = copies_needed(d, mu);
    let out = j.out_neighbours();
    let saturated: Vec<VertexId> = (0..j.vertex_count())
        .filter(|&v| out_degree[v] == d)
        .collect();

    let mut right: Vec<VertexId> = saturated
        .iter()
        .flat_map(|&u| out[u].iter().copied())
        .collect();
    right.sort_unstable();
    right.dedup();
    let mut right_index = vec![usize::MAX; j.vertex_count()];
    for (i, &v) in right.iter().enumerate() {
        right_index[v] = i;
    }
    // More copies than saturated vertices can never be used.
    let slots = (copies as usize).min(saturated.len());
    let adjacency: Vec<Vec<usize>> = saturated
        .iter()
        .map(|&u| {
            out[u]
                .iter()
                .flat_map(|&v| {
                    let base = right_index[v] * slots;
                    base..base + slots
                })
                .collect()
        })
        .collect();

    match saturating_matching(right.len() * slots, &adjacency) {
        MatchingOutcome::Saturating(mate) => {
            let mut chosen_head = vec![usize::MAX; j.vertex_count()];
            for (li, &slot) in mate.iter().enumerate() {
                chosen_head[saturated[li]] = right[slot / slots];
            }
            let (forest_arcs, rest): (Vec<Arc>, Vec<Arc>) =
                j.arcs().iter().partition(|a| chosen_head[a.tail] == a.head);
            Ok(PeelResult {
                forest_arcs,
                remainder: j.with_arcs(rest),
                copies,
                saturated,
            })
        }
        MatchingOutcome::HallViolator { set, neighbourhood } => {
            let hall_set: Vec<VertexId> = set.iter().map(|&li| saturated[li]).collect();
            let mut out_neighbourhood: Vec<VertexId> = neighbourhood
                .iter()
                .map(|&slot| right[slot / slots])
                .collect();
            out_neighbourhood.dedup();
            let mut witness_vertices: Vec<VertexId> =
                hall_set.iter().chain(&out_neighbourhood).copied().collect();
            witness_vertices.sort_unstable();
            witness_vertices.dedup();
            let mut inside = vec![false; j.vertex_count()];
            witness_vertices.iter().for_each(|&v| inside[v] = true);
            let spanned = j
                .arcs()
                .iter()
                .filter(|a| inside[a.tail] && inside[a.head])
                .count();
            Err(Error::DensityViolation(Box::new(HallViolation {
                witness_density: Rational::new(spanned as i128, witness_vertices.len() as i128),
                hall_set,
                out_neighbourhood,
                copies,
                out_degree: d,
                mu,
                witness_vertices,
            })))
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DecomposeOptions {
    /// Peel each layer with `mu = m(J_i)` instead of `m(G)`; forests can
    /// only get smaller degree bounds this way.
    pub tight_mu: bool,
}

/// Forests `F_K, ..., F_{k+1}` and the residual `J_k`, as edge-id sets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    #[serde(rename = "m")]
    pub m_value: Rational,
    pub k: usize,
    #[serde(rename = "K")]
    pub big_k: usize,
    /// Degeneracy ordering used to orient every layer.
    pub order: Vec<VertexId>,
    /// Layer index `i` to sorted edge ids; every `i` in `k+1..=K` is present.
    #[serde(rename = "layers")]
    pub forests: BTreeMap<usize, Vec<EdgeId>>,
    pub residual: Vec<EdgeId>,
}

impl Decomposition {
    /// Edge ids of `B_j`, the union of the forests with index above `j`.
    pub fn bounded_part(&self, j: usize) -> Vec<EdgeId> {
        let mut ids: Vec<EdgeId> = self
            .forests
            .range(j + 1..)
            .flat_map(|(_, ids)| ids.iter().copied())
            .collect();
        ids.sort_unstable();
        ids.dedup();
        ids
    }

    /// Edge ids of `G \ B_j`.
    pub fn complement_part(&self, j: usize) -> Vec<EdgeId> {
        let mut ids: Vec<EdgeId> = self
            .forests
            .range(..=j)
            .flat_map(|(_, ids)| ids.iter().copied())
            .chain(self.residual.iter().copied())
            .collect();
        ids.sort_unstable();
        ids.dedup();
        ids
    }

    /// Degree bound `ceil(i / (i - m))` promised for layer `i`.
    pub fn layer_bound(&self, i: usize) -> u64 {
        forest_degree_bound(i, self.m_value)
    }
}

/// Decomposes `g` with `mu = m(G)` in every peel.
pub fn degenerate_decomposition(g: &Graph) -> Result<Decomposition> {
    degenerate_decomposition_with(g, DecomposeOptions::default())
}

pub fn degenerate_decomposition_with(
    g: &Graph,
    options: DecomposeOptions,
) -> Result<Decomposition> {
    let m = max_density(g)?.value;
    let k = m.floor() as usize;
    let big_k = (m * 2).floor() as usize;
    let order = degeneracy_ordering(g).order;
    let mut current = orient_by_ordering(g, &order)?;
    if current.max_out_degree() > big_k {
        return Err(Error::Invariant(format!(
            "degeneracy ordering has out-degree {} above floor(2m) = {big_k}",
            current.max_out_degree()
        )));
    }
    let mut forests = BTreeMap::new();
    for i in (k + 1..=big_k).rev() {
        let top = current.max_out_degree();
        if top < i {
            forests.insert(i, Vec::new());
            continue;
        }
        let mu = if options.tight_mu {
            max_density(&current.underlying_graph())?.value
        } else {
            m
        };
        let peeled = peel_layer(&current, i, mu).map_err(|e| match e {
            Error::DensityViolation(v) => {
                Error::Invariant(format!("peel at out-degree {i} failed: {v}"))
            }
            other => other,
        })?;
        let mut ids: Vec<EdgeId> = peeled.forest_arcs.iter().map(|a| a.edge).collect();
        ids.sort_unstable();
        forests.insert(i, ids);
        current = peeled.remainder;
    }
    Ok(Decomposition {
        m_value: m,
        k,
        big_k,
        order,
        forests,
        residual: current.edge_ids(),
    })
}

/// Checks every structural guarantee of `d` against `g`.
///
/// Clauses: parameters, partition of the edge set, per-layer forest and
/// degree bounds, per-layer out-degree under `order`, and for each
/// `k <= j <= K` the degeneracy of `B_j` and `G \ B_j` and the degree of
/// `B_j`. Never fails; problems are report entries.
pub fn verify_decomposition(g: &Graph, d: &Decomposition) -> Report {
    let mut report = Report::new();
    let e = g.edge_count();

    match max_density(g) {
        Ok(w) => {
            let k_ok = d.k as i128 == w.value.floor();
            let big_k_ok = d.big_k as i128 == (w.value * 2).floor();
            report.record(
                "parameters",
                w.value == d.m_value && k_ok && big_k_ok,
                format!(
                    "m = {} (recomputed {}), k = {}, K = {}",
                    d.m_value, w.value, d.k, d.big_k
                ),
            );
        }
        Err(err) => report.record("parameters", false, err.to_string()),
    }
    let expected_layers: Vec<usize> = (d.k + 1..=d.big_k).collect();
    let layers: Vec<usize> = d.forests.keys().copied().collect();
    report.record(
        "layer-indices",
        layers == expected_layers,
        format!("layers {layers:?}, expected k+1..=K"),
    );

    let mut seen = vec![0usize; e];
    let mut out_of_range = Vec::new();
    for &id in d.forests.values().flatten().chain(&d.residual) {
        match seen.get_mut(id) {
            Some(count) => *count += 1,
            None => out_of_range.push(id),
        }
    }
    let missing = seen.iter().filter(|&&c| c == 0).count();
    let repeated = seen.iter().filter(|&&c| c > 1).count();
    report.record(
        "partition",
        missing == 0 && repeated == 0 && out_of_range.is_empty(),
        format!(
            "{missing} edges missing, {repeated} repeated, {} out of range",
            out_of_range.len()
        ),
    );
    if !out_of_range.is_empty() {
        return report;
    }

    // later clauses look at each layer as a set
    let mut sanitized = d.clone();
    for ids in sanitized
        .forests
        .values_mut()
        .chain([&mut sanitized.residual])
    {
        ids.sort_unstable();
        ids.dedup();
    }
    let d = &sanitized;

    let position = order_positions(&d.order, g.vertex_count());
    if position.is_none() {
        report.record("order", false, "order is not a permutation of the vertices");
    }
    let m = d.m_value;
    let layer_degrees: BTreeMap<usize, usize> = d
        .forests
        .iter()
        .map(|(&i, ids)| (i, g.spanning_subgraph(ids).max_degree()))
        .collect();

    for (&i, ids) in &d.forests {
        if ids.is_empty() {
            report.record(format!("F_{i}/forest"), true, "empty layer");
            report.record(format!("F_{i}/degree"), true, "empty layer");
            continue;
        }
        report.record(
            format!("F_{i}/forest"),
            is_forest_edges(g, ids.iter().copied()),
            format!("{} edges", ids.len()),
        );
        let degree = layer_degrees[&i];
        if Rational::from(i) > m {
            let bound = forest_degree_bound(i, m);
            report.record(
                format!("F_{i}/degree"),
                degree as u64 <= bound,
                format!("max degree {degree}, bound ceil({i}/({i} - {m})) = {bound}"),
            );
        } else {
            report.record(
                format!("F_{i}/degree"),
                false,
                format!("layer {i} is not above m = {m}"),
            );
        }
        if let Some(pos) = &position {
            let out = forward_out_degree(g, ids, pos);
            report.record(
                format!("F_{i}/out-degree"),
                out <= 1,
                format!("max forward out-degree {out}"),
            );
        }
    }
    if let Some(pos) = &position {
        let out = forward_out_degree(g, &d.residual, pos);
        report.record(
            "residual/out-degree",
            out <= d.k,
            format!("max forward out-degree {out}, k = {}", d.k),
        );
    }

    for j in d.k..=d.big_k {
        let bounded = g.spanning_subgraph(&d.bounded_part(j));
        let rest = g.spanning_subgraph(&d.complement_part(j));
        let bounded_degeneracy = exact_degeneracy(&bounded);
        report.record(
            format!("B_{j}/degeneracy"),
            bounded_degeneracy <= d.big_k - j,
            format!(
                "degeneracy {bounded_degeneracy}, bound K - j = {}",
                d.big_k - j
            ),
        );
        let rest_degeneracy = exact_degeneracy(&rest);
        report.record(
            format!("G-B_{j}/degeneracy"),
            rest_degeneracy <= j,
            format!("degeneracy {rest_degeneracy}, bound j = {j}"),
        );
        let degree_sum: usize = layer_degrees.range(j + 1..).map(|(_, &deg)| deg).sum();
        report.record(
            format!("B_{j}/max-degree"),
            bounded.max_degree() <= degree_sum,
            format!(
                "max degree {}, sum of layer degrees {degree_sum}",
                bounded.max_degree()
            ),
        );
    }
    report
}

fn order_positions(order: &[VertexId], n: usize) -> Option<Vec<usize>> {
    if order.len() != n {
        return None;
    }
    let mut pos = vec![usize::MAX; n];
    for (i, &v) in order.iter().enumerate() {
        if v >= n || pos[v] != usize::MAX {
            return None;
        }
        pos[v] = i;
    }
    Some(pos)
}

fn forward_out_degree(g: &Graph, ids: &[EdgeId], position: &[usize]) -> usize {
    let mut out = vec![0usize; g.vertex_count()];
    for &id in ids {
        let (u, v) = g.endpoints(id);
        let tail = if position[u] < position[v] { u } else { v };
        out[tail] += 1;
    }
    out.into_iter().max().unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::CheckStatus;

    fn forward(g: &Graph) -> Orientation {
        let order: Vec<_> = (0..g.vertex_count()).collect();
        orient_by_ordering(g, &order).unwrap()
    }

    #[test]
    fn copies_formula() {
        assert_eq!(copies_needed(1, Rational::HALF), 1);
        assert_eq!(copies_needed(3, Rational::new(3, 2)), 1);
        assert_eq!(copies_needed(3, Rational::new(3, 4)), 1);
        assert_eq!(copies_needed(2, Rational::new(3, 2)), 3);
        assert_eq!(copies_needed(20, Rational::new(39, 2)), 39);
        assert_eq!(copies_needed(4, Rational::ZERO), 0);
        assert_eq!(forest_degree_bound(3, Rational::new(3, 2)), 2);
        assert_eq!(forest_degree_bound(2, Rational::new(3, 2)), 4);
        assert_eq!(forest_degree_bound(21, Rational::new(39, 2)), 14);
    }

    #[test]
    fn single_arc_peel() {
        let g = Graph::path(2);
        let r = peel_layer(&forward(&g), 1, Rational::HALF).unwrap();
        assert_eq!(r.copies, 1);
        assert_eq!(
            r.forest_arcs,
            vec![Arc {
                edge: 0,
                tail: 0,
                head: 1
            }]
        );
        assert_eq!(r.remainder.arc_count(), 0);
        assert_eq!(r.saturated, vec![0]);
    }

    #[test]
    fn clique_peel_takes_one_arc() {
        let j = forward(&Graph::complete(4));
        let r = peel_layer(&j, 3, Rational::new(3, 2)).unwrap();
        assert_eq!(r.copies, 1);
        assert_eq!(r.saturated, vec![0]);
        assert_eq!(
            r.forest_arcs,
            vec![Arc {
                edge: 0,
                tail: 0,
                head: 1
            }]
        );
        assert_eq!(r.remainder.max_out_degree(), 2);
    }

    #[test]
    fn star_peel() {
        let j = forward(&Graph::star(3));
        let r = peel_layer(&j, 3, Rational::new(3, 4)).unwrap();
        assert_eq!(r.copies, 1);
        assert_eq!(r.forest_arcs.len(), 1);
        assert_eq!(r.remainder.max_out_degree(), 2);
    }

    #[test]
    fn peel_below_top_degree_is_a_no_op() {
        let j = forward(&Graph::path(3));
        let r = peel_layer(&j, 2, Rational::ONE).unwrap();
        assert!(r.saturated.is_empty());
        assert!(r.forest_arcs.is_empty());
        assert_eq!(r.remainder.arc_count(), 2);
    }

    #[test]
    fn peel_rejects_bad_arguments() {
        let j = forward(&Graph::complete(4));
        assert!(matches!(
            peel_layer(&j, 2, Rational::ONE),
            Err(Error::Input(_))
        ));
        assert!(matches!(
            peel_layer(&j, 3, Rational::from_int(3)),
            Err(Error::Input(_))
        ));
        assert!(matches!(
            peel_layer(&j, 0, Rational::ZERO),
            Err(Error::Input(_))
        ));
    }

    #[test]
    fn underestimated_mu_yields_hall_certificate() {
        // K_{3,2}: three tails all pointing at the same two heads
        let g = Graph::new(5, vec![(0, 3), (0, 4), (1, 3), (1, 4), (2, 3), (2, 4)]).unwrap();
        let j = forward(&g);
        match peel_layer(&j, 2, Rational::HALF) {
            Err(Error::DensityViolation(v)) => {
                assert_eq!(v.copies, 1);
                assert!((v.out_neighbourhood.len() as u64) * v.copies < v.hall_set.len() as u64);
                assert!(v.witness_density > Rational::HALF);
                assert_eq!(v.witness_density, Rational::new(6, 5));
            }
            other => panic!("expected violation, got {other:?}"),
        }
        // the true density 6/5 is enough
        assert!(peel_layer(&j, 2, Rational::new(6, 5)).is_ok());
    }

    #[test]
    fn single_edge_decomposition() {
        let d = degenerate_decomposition(&Graph::path(2)).unwrap();
        assert_eq!(d.m_value, Rational::HALF);
        assert_eq!((d.k, d.big_k), (0, 1));
        assert_eq!(d.forests[&1], vec![0]);
        assert!(d.residual.is_empty());
        assert!(verify_decomposition(&Graph::path(2), &d).passed());
    }

    #[test]
    fn k4_decomposition() {
        let g = Graph::complete(4);
        let d = degenerate_decomposition(&g).unwrap();
        assert_eq!((d.k, d.big_k), (1, 3));
        assert_eq!(d.order, vec![0, 1, 2, 3]);
        let f3 = g.spanning_subgraph(&d.forests[&3]);
        let f2 = g.spanning_subgraph(&d.forests[&2]);
        assert!(f3.max_degree() <= 2);
        assert!(f2.max_degree() <= 4);
        assert!(is_forest_edges(&g, d.residual.iter().copied()));
        let report = verify_decomposition(&g, &d);
        assert!(report.passed(), "{report}");
    }

    #[test]
    fn forests_leave_an_edgeless_residual() {
        let g = Graph::star(5);
        let d = degenerate_decomposition(&g).unwrap();
        assert_eq!(d.k, 0);
        assert!(d.residual.is_empty());
        assert!(verify_decomposition(&g, &d).passed());
    }

    #[test]
    fn moved_edge_breaks_partition() {
        let g = Graph::complete(4);
        let mut d = degenerate_decomposition(&g).unwrap();
        let moved = d.residual.pop().unwrap();
        d.forests.get_mut(&3).unwrap().push(moved);
        d.forests.get_mut(&2).unwrap().push(moved);
        let report = verify_decomposition(&g, &d);
        assert_eq!(report.get("partition").unwrap().status, CheckStatus::Fail);
        assert!(!report.passed());
    }

    #[test]
    fn empty_layers_pass_vacuously() {
        // a 5-cycle: m = 1, k = 1, K = 2, and the degeneracy orientation
        // already has out-degree <= 1 except on one vertex
        let g = Graph::cycle(5);
        let d = degenerate_decomposition(&g).unwrap();
        let mut empty = d.clone();
        empty
            .residual
            .extend(empty.forests.values().flatten().copied());
        empty.residual.sort_unstable();
        empty.forests.values_mut().for_each(Vec::clear);
        let report = verify_decomposition(&g, &empty);
        assert_eq!(report.get("F_2/forest").unwrap().status, CheckStatus::Pass);
        assert_eq!(report.get("F_2/degree").unwrap().status, CheckStatus::Pass);
    }

    #[test]
    fn tight_mu_also_verifies() {
        let g = Graph::complete(7);
        let d = degenerate_decomposition_with(&g, DecomposeOptions { tight_mu: true }).unwrap();
        assert!(verify_decomposition(&g, &d).passed());
    }

    #[test]
    fn json_shape() {
        let d = degenerate_decomposition(&Graph::complete(4)).unwrap();
        let v: serde_json::Value = serde_json::to_value(&d).unwrap();
        assert_eq!(v["m"], "3/2");
        assert_eq!(v["K"], 3);
        assert!(v["layers"]["3"].is_array());
        let back: Decomposition = serde_json::from_value(v).unwrap();
        assert_eq!(back, d);
    }
}
