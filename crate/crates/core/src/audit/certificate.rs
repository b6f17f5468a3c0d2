use std::collections::HashMap;

use crate::coloring::{r_value, EdgeColoring, LayerTag};
use crate::decompose::{forest_degree_bound, Decomposition};
use crate::graph::Graph;
use crate::rational::{binom2, Rational};
use crate::report::Report;

/// Verifies the colour budget behind the anti-rainbow guarantee.
///
/// * `palette/F_i`: colours on each forest stay within `ceil(i/(i-m))`.
/// * `r/definition`: the recorded `r` equals its defining sum.
/// * `colours/B_{k+1}`: at most `r` colours on the forests above `k+1`.
/// * `colours/B_k`: at most `r + ceil((k+1)/(1-eps))` colours on all forests.
/// * `residual/unique`: every residual colour is used exactly once.
/// * `threshold/*`: for `k >= 18`, `C(k-1,2) > k+2+r` and the chained
///   inequality `ceil((k+1)/(1-eps)) + r <= eps/(1-eps) (C(k,2) - r) + C(k-1,2)`.
pub fn certificate_check(g: &Graph, dec: &Decomposition, col: &EdgeColoring) -> Report {
    let mut report = Report::new();
    if col.colour.len() != g.edge_count() || col.layer_of.len() != g.edge_count() {
        report.record(
            "coverage",
            false,
            "colouring does not cover the graph's edges",
        );
        return report;
    }
    let e = g.edge_count();
    if let Some(&id) = dec
        .forests
        .values()
        .flatten()
        .chain(&dec.residual)
        .find(|&&id| id >= e)
    {
        report.record(
            "coverage",
            false,
            format!("decomposition names edge {id}, the graph has {e} edges"),
        );
        return report;
    }
    let m = dec.m_value;
    let (k, big_k) = (dec.k, dec.big_k);
    report.record(
        "parameters",
        col.m_value == m && col.k == k && col.big_k == big_k,
        format!(
            "colouring m = {}, k = {}, K = {}; decomposition m = {m}, k = {k}, K = {big_k}",
            col.m_value, col.k, col.big_k
        ),
    );

    for (&i, ids) in &dec.forests {
        let used = col.colours_on(ids.iter().copied());
        let bound = forest_degree_bound(i, m);
        let palette = col
            .palettes
            .get(&LayerTag::Forest(i))
            .map_or(0, |r| r.len());
        let tagged = ids.iter().all(|&e| col.layer_of[e] == LayerTag::Forest(i));
        report.record(
            format!("palette/F_{i}"),
            used as u64 <= bound && palette as u64 <= bound && tagged,
            format!("{used} colours used, palette {palette}, bound {bound}"),
        );
    }

    let r = r_value(m).unwrap_or(0);
    report.record(
        "r/definition",
        col.r_value == r,
        format!("recorded r = {}, defining sum = {r}", col.r_value),
    );

    let top = col.colours_on(dec.bounded_part(k + 1));
    report.record(
        format!("colours/B_{}", k + 1),
        top as u64 <= r,
        format!("{top} colours, budget r = {r}"),
    );

    let eps = m.fract();
    let one_minus = Rational::ONE - eps;
    let lead = (Rational::from(k + 1) / one_minus).ceil();
    let all = col.colours_on(dec.bounded_part(k));
    report.record(
        format!("colours/B_{k}"),
        all as i128 <= r as i128 + lead,
        format!(
            "{all} colours, budget r + ceil((k+1)/(1-eps)) = {}",
            r as i128 + lead
        ),
    );

    let mut uses: HashMap<usize, usize> = HashMap::new();
    for &c in &col.colour {
        *uses.entry(c).or_default() += 1;
    }
    let shared = dec
        .residual
        .iter()
        .filter(|&&e| uses[&col.colour[e]] != 1 || col.layer_of[e] != LayerTag::Residual)
        .count();
    report.record(
        "residual/unique",
        shared == 0,
        format!(
            "{shared} of {} residual edges share a colour or carry the wrong tag",
            dec.residual.len()
        ),
    );

    if k >= 18 {
        let (k, r) = (k as i128, r as i128);
        let lhs = binom2(k - 1);
        report.record(
            "threshold/binomial",
            lhs > k + 2 + r,
            format!("C(k-1,2) = {lhs} > k + 2 + r = {}", k + 2 + r),
        );
        let left = Rational::from_int(lead + r);
        let right =
            eps / one_minus * Rational::from_int(binom2(k) - r) + Rational::from_int(binom2(k - 1));
        report.record(
            "threshold/chain",
            left <= right,
            format!(
                "ceil((k+1)/(1-eps)) + r = {left} <= eps/(1-eps)(C(k,2) - r) + C(k-1,2) = {right}"
            ),
        );
    } else {
        report.not_applicable("threshold/binomial", format!("k = {k} < 18"));
        report.not_applicable("threshold/chain", format!("k = {k} < 18"));
    }
    report
}
