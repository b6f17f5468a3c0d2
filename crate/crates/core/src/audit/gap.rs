use crate::density::two_density;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rational::{binom2, Rational};

pub const DEGENERATE_ORACLE_MAX_VERTICES: usize = 16;

/// Largest edge count of a `d`-degenerate spanning subgraph of `h`, exactly.
///
/// For a fixed elimination order the best subgraph keeps, at each vertex,
/// `min(d, number of its neighbours later in the order)` edges. Dynamic
/// programming over the set of already-eliminated vertices maximises that
/// sum over all orders.
pub fn max_degenerate_subgraph_edges(h: &Graph, d: usize) -> Result<usize> {
    let n = h.vertex_count();
    if n > DEGENERATE_ORACLE_MAX_VERTICES {
        return Err(Error::input(format!(
            "exact degenerate-subgraph search supports at most \
             {DEGENERATE_ORACLE_MAX_VERTICES} vertices, got {n}"
        )));
    }
    let adj = h.adjacency_masks();
    let full = (1usize << n) - 1;
    let mut best = vec![-1i32; 1 << n];
    best[0] = 0;
    for done in 0..=full {
        let here = best[done];
        if here < 0 {
            continue;
        }
        for v in (0..n).filter(|&v| done >> v & 1 == 0) {
            let later = (adj[v] & !(done as u64)).count_ones() as usize;
            let next = done | 1 << v;
            let value = here + later.min(d) as i32;
            if value > best[next] {
                best[next] = value;
            }
        }
    }
    Ok(best[full] as usize)
}

/// `C(d-1, 2) - (d - k - eps) * (v_h - 2)`: a lower bound on how many edges
/// must go before `h` becomes `d`-degenerate, given `d2(h) >= k + eps`.
///
/// The value may be zero or negative, in which case it says nothing. The
/// counting behind it assumes `d <= v_h`; for larger `d` it can exceed the
/// true number of edges to remove.
pub fn degeneracy_gap_bound(h: &Graph, d: usize, k: i128, eps: Rational) -> Result<Rational> {
    if eps < Rational::ZERO || eps >= Rational::ONE {
        return Err(Error::input(format!("eps must lie in [0, 1), got {eps}")));
    }
    let d2 = two_density(h)?;
    let target = Rational::from_int(k) + eps;
    if d2 < target {
        return Err(Error::input(format!(
            "d2(H) = {d2} is below k + eps = {target}"
        )));
    }
    let d = d as i128;
    let v = h.vertex_count() as i128;
    Ok(Rational::from_int(binom2(d - 1)) - (Rational::from_int(d - k) - eps) * (v - 2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orientation::exact_degeneracy;
    use proptest::prelude::*;

    /// Largest d-degenerate spanning subgraph by trying every edge subset.
    fn oracle(h: &Graph, d: usize) -> usize {
        let e = h.edge_count();
        (0u32..1 << e)
            .filter(|mask| {
                let keep: Vec<usize> = (0..e).filter(|&i| mask >> i & 1 == 1).collect();
                exact_degeneracy(&h.spanning_subgraph(&keep)) <= d
            })
            .map(|mask| mask.count_ones() as usize)
            .max()
            .unwrap()
    }

    #[test]
    fn named_values() {
        assert_eq!(
            max_degenerate_subgraph_edges(&Graph::complete(5), 2).unwrap(),
            7
        );
        assert_eq!(
            max_degenerate_subgraph_edges(&Graph::complete(6), 3).unwrap(),
            12
        );
        assert_eq!(
            max_degenerate_subgraph_edges(&Graph::path(6), 1).unwrap(),
            5
        );
        assert_eq!(
            max_degenerate_subgraph_edges(&Graph::complete(5), 0).unwrap(),
            0
        );
        assert_eq!(
            max_degenerate_subgraph_edges(&Graph::empty(0), 3).unwrap(),
            0
        );
        assert!(max_degenerate_subgraph_edges(&Graph::empty(17), 1).is_err());
    }

    #[test]
    fn gap_bound_examples() {
        let k5 = Graph::complete(5);
        assert_eq!(
            degeneracy_gap_bound(&k5, 2, 3, Rational::ZERO).unwrap(),
            Rational::from_int(3)
        );
        assert_eq!(10 - max_degenerate_subgraph_edges(&k5, 2).unwrap(), 3);
        assert_eq!(
            degeneracy_gap_bound(&k5, 4, 3, Rational::ZERO).unwrap(),
            Rational::ZERO
        );
        let k6 = Graph::complete(6);
        assert_eq!(
            degeneracy_gap_bound(&k6, 3, 3, Rational::HALF).unwrap(),
            Rational::from_int(3)
        );
        assert_eq!(15 - max_degenerate_subgraph_edges(&k6, 3).unwrap(), 3);
    }

    #[test]
    fn gap_bound_preconditions() {
        let k5 = Graph::complete(5);
        assert!(degeneracy_gap_bound(&k5, 2, 3, Rational::ONE).is_err());
        assert!(degeneracy_gap_bound(&k5, 2, 3, Rational::new(1, 2)).is_err());
        assert!(degeneracy_gap_bound(&Graph::path(2), 1, 0, Rational::ZERO).is_err());
    }

    #[test]
    fn bound_overshoots_when_d_exceeds_vertex_count() {
        // K3 is already 2-degenerate, yet the formula asks for one removal at d = 4
        let k3 = Graph::complete(3);
        let bound = degeneracy_gap_bound(&k3, 4, 2, Rational::ZERO).unwrap();
        assert_eq!(bound, Rational::ONE);
        assert_eq!(3 - max_degenerate_subgraph_edges(&k3, 4).unwrap(), 0);
    }

    fn arb_small_graph() -> impl Strategy<Value = Graph> {
        (3usize..7).prop_flat_map(|n| {
            proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
                let mut edges = Vec::new();
                let mut i = 0;
                for u in 0..n {
                    for v in u + 1..n {
                        if bits[i] && edges.len() < 12 {
                            edges.push((u, v));
                        }
                        i += 1;
                    }
                }
                Graph::new(n, edges).unwrap()
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn dp_matches_edge_subset_oracle(h in arb_small_graph(), d in 0usize..5) {
            prop_assert_eq!(max_degenerate_subgraph_edges(&h, d).unwrap(), oracle(&h, d));
        }

        #[test]
        fn bound_is_sound_when_d_at_most_vertex_count(h in arb_small_graph(), d in 1usize..6) {
            prop_assume!(d <= h.vertex_count() && h.edge_count() >= 1);
            let d2 = two_density(&h).unwrap();
            prop_assume!(d2 >= Rational::ZERO);
            let (k, eps) = (d2.floor(), d2.fract());
            let removed = h.edge_count() - max_degenerate_subgraph_edges(&h, d).unwrap();
            let bound = degeneracy_gap_bound(&h, d, k, eps).unwrap();
            prop_assert!(Rational::from(removed) >= bound);
        }
    }
}
