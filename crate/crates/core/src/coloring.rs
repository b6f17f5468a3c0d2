//! Proper edge colourings built on a degenerate decomposition.
//!
//! Each forest `F_i` gets its own palette of `Δ(F_i)` colours (forests are
//! bipartite, so this many suffice) and every residual edge gets a colour of
//! its own. Colour ids are contiguous: layer `K` first, then downwards, then
//! the residual edges in id order.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::decompose::{
    degenerate_decomposition_with, forest_degree_bound, DecomposeOptions, Decomposition,
};
use crate::error::{Error, Result};
use crate::graph::{is_forest, EdgeId, Graph};
use crate::rational::Rational;

/// Smallest `m(G)` at which every rainbow subgraph is guaranteed to have
/// 2-density below `m(G)`.
pub const GUARANTEE_THRESHOLD: i128 = 18;

pub type Colour = usize;

/// Which part of the decomposition an edge belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LayerTag {
    Forest(usize),
    Residual,
}

impl fmt::Display for LayerTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LayerTag::Forest(i) => write!(f, "F_{i}"),
            LayerTag::Residual => f.write_str("residual"),
        }
    }
}

impl FromStr for LayerTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "residual" {
            return Ok(LayerTag::Residual);
        }
        s.strip_prefix("F_")
            .and_then(|i| i.parse().ok())
            .map(LayerTag::Forest)
            .ok_or_else(|| Error::input(format!("unknown layer tag {s:?}")))
    }
}

impl Serialize for LayerTag {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for LayerTag {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(deserializer)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeColoring {
    /// Colour of each edge, indexed by edge id.
    pub colour: Vec<Colour>,
    pub layer_of: Vec<LayerTag>,
    /// Contiguous colour range reserved for each layer.
    pub palettes: BTreeMap<LayerTag, Range<Colour>>,
    pub m_value: Rational,
    pub k: usize,
    pub big_k: usize,
    pub r_value: u64,
    /// True when `m(G) >= 18`.
    pub guarantee: bool,
    pub warnings: Vec<String>,
}

impl EdgeColoring {
    pub fn distinct_colours(&self) -> usize {
        let mut seen: Vec<Colour> = self.colour.clone();
        seen.sort_unstable();
        seen.dedup();
        seen.len()
    }

    /// Number of distinct colours used on the given edges.
    pub fn colours_on(&self, edges: impl IntoIterator<Item = EdgeId>) -> usize {
        let mut seen: Vec<Colour> = edges.into_iter().map(|e| self.colour[e]).collect();
        seen.sort_unstable();
        seen.dedup();
        seen.len()
    }
}

/// `sum_{i = k+2}^{K} ceil(i / (i - m))` with `k = floor(m)`, `K = floor(2m)`.
pub fn r_value(m: Rational) -> Result<u64> {
    if m < Rational::HALF {
        return Err(Error::input(format!("r is defined for m >= 1/2, got {m}")));
    }
    let k = m.floor() as usize;
    let big_k = (m * 2).floor() as usize;
    Ok((k + 2..=big_k).map(|i| forest_degree_bound(i, m)).sum())
}

/// Proper colouring of a forest with exactly `Δ(f)` colours.
///
/// Trees are rooted at their lowest vertex and walked breadth-first; each
/// edge to a child takes the smallest colour not yet used at the parent.
pub fn color_forest(f: &Graph) -> Result<Vec<Colour>> {
    if !is_forest(f) {
        return Err(Error::input("color_forest needs an acyclic graph"));
    }
    let n = f.vertex_count();
    let mut colour = vec![usize::MAX; f.edge_count()];
    let mut visited = vec![false; n];
    let mut queue = VecDeque::new();
    for root in 0..n {
        if visited[root] {
            continue;
        }
        visited[root] = true;
        queue.push_back((root, usize::MAX));
        while let Some((v, parent_colour)) = queue.pop_front() {
            let mut next = 0;
            for &e in f.incident(v) {
                let child = f.other(e, v);
                if visited[child] {
                    continue;
                }
                if next == parent_colour {
                    next += 1;
                }
                colour[e] = next;
                next += 1;
                visited[child] = true;
                queue.push_back((child, colour[e]));
            }
        }
    }
    Ok(colour)
}

/// True iff no two edges sharing a vertex have the same colour.
pub fn is_proper_coloring(g: &Graph, colour: &[Colour]) -> Result<bool> {
    if colour.len() != g.edge_count() {
        return Err(Error::input(format!(
            "colouring covers {} edges but the graph has {}",
            colour.len(),
            g.edge_count()
        )));
    }
    let mut seen = HashMap::new();
    for v in 0..g.vertex_count() {
        seen.clear();
        for &e in g.incident(v) {
            if seen.insert(colour[e], e).is_some() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Decomposes `g` and colours it: one fresh palette per forest, one fresh
/// colour per residual edge.
pub fn anti_rainbow_coloring(g: &Graph) -> Result<(EdgeColoring, Decomposition)> {
    anti_rainbow_coloring_with(g, DecomposeOptions::default())
}

pub fn anti_rainbow_coloring_with(
    g: &Graph,
    options: DecomposeOptions,
) -> Result<(EdgeColoring, Decomposition)> {
    if g.edge_count() == 0 {
        return Err(Error::input("cannot colour an edgeless graph"));
    }
    let dec = degenerate_decomposition_with(g, options)?;
    let coloring = color_decomposition(g, &dec)?;
    Ok((coloring, dec))
}

/// Colours `g` along an existing decomposition of it.
pub fn color_decomposition(g: &Graph, dec: &Decomposition) -> Result<EdgeColoring> {
    let e = g.edge_count();
    let mut colour = vec![usize::MAX; e];
    let mut layer_of = vec![LayerTag::Residual; e];
    let mut palettes = BTreeMap::new();
    let mut next = 0;
    for (&i, ids) in dec.forests.iter().rev() {
        let forest = g.spanning_subgraph(ids);
        let local = color_forest(&forest)?;
        let width = local.iter().map(|&c| c + 1).max().unwrap_or(0);
        for (local_id, &id) in ids.iter().enumerate() {
            colour[id] = next + local[local_id];
            layer_of[id] = LayerTag::Forest(i);
        }
        palettes.insert(LayerTag::Forest(i), next..next + width);
        next += width;
    }
    let start = next;
    for &id in &dec.residual {
        colour[id] = next;
        next += 1;
    }
    palettes.insert(LayerTag::Residual, start..next);
    if let Some(id) = colour.iter().position(|&c| c == usize::MAX) {
        return Err(Error::input(format!(
            "edge {id} is not covered by the decomposition"
        )));
    }

    let guarantee = dec.m_value >= Rational::from_int(GUARANTEE_THRESHOLD);
    let mut warnings = Vec::new();
    if !guarantee {
        warnings.push(format!(
            "m(G) = {} is below {GUARANTEE_THRESHOLD}: the colouring is proper, but rainbow \
             subgraphs of 2-density >= m(G) are not ruled out",
            dec.m_value
        ));
    }
    Ok(EdgeColoring {
        colour,
        layer_of,
        palettes,
        m_value: dec.m_value,
        k: dec.k,
        big_k: dec.big_k,
        r_value: r_value(dec.m_value)?,
        guarantee,
        warnings,
    })
}

/// One edge of a serialized colouring.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColouredEdge {
    pub id: EdgeId,
    pub u: usize,
    pub v: usize,
    pub layer: LayerTag,
    pub color: Colour,
}

/// JSON form of an [`EdgeColoring`]. Palettes are half-open `[start, end)`
/// colour ranges.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoringDocument {
    pub m: Rational,
    pub k: usize,
    #[serde(rename = "K")]
    pub big_k: usize,
    pub r: u64,
    pub guarantee: bool,
    #[serde(default)]
    pub warnings: Vec<String>,
    pub edges: Vec<ColouredEdge>,
    pub palettes: BTreeMap<LayerTag, [Colour; 2]>,
}

impl EdgeColoring {
    pub fn to_document(&self, g: &Graph) -> ColoringDocument {
        let edges = g
            .edges()
            .iter()
            .enumerate()
            .map(|(id, &(u, v))| ColouredEdge {
                id,
                u,
                v,
                layer: self.layer_of[id],
                color: self.colour[id],
            })
            .collect();
        ColoringDocument {
            m: self.m_value,
            k: self.k,
            big_k: self.big_k,
            r: self.r_value,
            guarantee: self.guarantee,
            warnings: self.warnings.clone(),
            edges,
            palettes: self
                .palettes
                .iter()
                .map(|(&tag, range)| (tag, [range.start, range.end]))
                .collect(),
        }
    }

    /// Rebuilds a colouring of `g` from its document. Every edge of `g` must
    /// appear exactly once, with matching endpoints.
    pub fn from_document(g: &Graph, doc: &ColoringDocument) -> Result<Self> {
        let e = g.edge_count();
        if doc.edges.len() != e {
            return Err(Error::input(format!(
                "colouring lists {} edges but the graph has {e}",
                doc.edges.len()
            )));
        }
        let mut colour = vec![usize::MAX; e];
        let mut layer_of = vec![LayerTag::Residual; e];
        for edge in &doc.edges {
            if edge.id >= e {
                return Err(Error::input(format!("edge id {} out of range", edge.id)));
            }
            let (a, b) = g.endpoints(edge.id);
            if (a, b) != (edge.u, edge.v) && (b, a) != (edge.u, edge.v) {
                return Err(Error::input(format!(
                    "edge {} is {{{a},{b}}} in the graph but {{{},{}}} in the colouring",
                    edge.id, edge.u, edge.v
                )));
            }
            if colour[edge.id] != usize::MAX {
                return Err(Error::input(format!("edge {} listed twice", edge.id)));
            }
            colour[edge.id] = edge.color;
            layer_of[edge.id] = edge.layer;
        }
        Ok(EdgeColoring {
            colour,
            layer_of,
            palettes: doc
                .palettes
                .iter()
                .map(|(&tag, &[start, end])| (tag, start..end))
                .collect(),
            m_value: doc.m,
            k: doc.k,
            big_k: doc.big_k,
            r_value: doc.r,
            guarantee: doc.guarantee,
            warnings: doc.warnings.clone(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use proptest::prelude::*;

    fn colours_used(c: &[Colour]) -> usize {
        let mut v = c.to_vec();
        v.sort_unstable();
        v.dedup();
        v.len()
    }

    /// r by plain integer arithmetic on `m = p/q`: `ceil(i*q / (i*q - p))`.
    fn r_oracle(p: i128, q: i128) -> i128 {
        let k = p / q;
        let big_k = 2 * p / q;
        (k + 2..=big_k)
            .map(|i| {
                let (num, den) = (i * q, i * q - p);
                (num + den - 1) / den
            })
            .sum()
    }

    #[test]
    fn r_spot_values() {
        assert_eq!(r_value(Rational::HALF).unwrap(), 0);
        assert_eq!(r_value(Rational::new(39, 2)).unwrap(), 86);
        assert_eq!(r_value(Rational::from_int(18)).unwrap(), 69);
        assert_eq!(r_oracle(39, 2), 86);
        assert_eq!(r_oracle(18, 1), 69);
        assert!(r_value(Rational::new(1, 3)).is_err());
    }

    #[test]
    fn forest_examples() {
        let star = color_forest(&Graph::star(3)).unwrap();
        assert_eq!(colours_used(&star), 3);
        let p4 = color_forest(&Graph::path(4)).unwrap();
        assert_eq!(colours_used(&p4), 2);
        assert_eq!(p4[0], p4[2]);
        assert_ne!(p4[0], p4[1]);
        assert!(color_forest(&Graph::empty(3)).unwrap().is_empty());
        assert!(color_forest(&Graph::complete(3)).is_err());
    }

    #[test]
    fn proper_predicate() {
        let k3 = Graph::complete(3);
        assert!(is_proper_coloring(&k3, &[1, 2, 3]).unwrap());
        assert!(!is_proper_coloring(&k3, &[1, 1, 2]).unwrap());
        assert!(is_proper_coloring(&Graph::empty(0), &[]).unwrap());
        assert!(is_proper_coloring(&k3, &[1, 2]).is_err());
    }

    #[test]
    fn triangle_is_coloured_without_guarantee() {
        let (col, _) = anti_rainbow_coloring(&Graph::complete(3)).unwrap();
        assert!(is_proper_coloring(&Graph::complete(3), &col.colour).unwrap());
        assert!(!col.guarantee);
        assert_eq!(col.warnings.len(), 1);
        assert_eq!(col.distinct_colours(), 3);
    }

    #[test]
    fn k4_colour_budget() {
        let g = Graph::complete(4);
        let (col, dec) = anti_rainbow_coloring(&g).unwrap();
        assert!(is_proper_coloring(&g, &col.colour).unwrap());
        let budget = g.spanning_subgraph(&dec.forests[&3]).max_degree()
            + g.spanning_subgraph(&dec.forests[&2]).max_degree()
            + dec.residual.len();
        assert!(col.distinct_colours() <= budget);
        assert_eq!(col.palettes[&LayerTag::Forest(3)].start, 0);
        assert_eq!(col.layer_of[dec.residual[0]], LayerTag::Residual);
    }

    #[test]
    fn k40_has_fewer_colours_than_edges() {
        let g = Graph::complete(40);
        let (col, _) = anti_rainbow_coloring(&g).unwrap();
        assert!(is_proper_coloring(&g, &col.colour).unwrap());
        assert!(col.guarantee);
        assert_eq!(col.r_value, 86);
        assert!(col.distinct_colours() < 780);
    }

    #[test]
    fn edgeless_input_is_rejected() {
        assert!(anti_rainbow_coloring(&Graph::empty(4)).is_err());
    }

    #[test]
    fn layer_tags_round_trip() {
        for tag in [LayerTag::Forest(21), LayerTag::Residual] {
            assert_eq!(tag.to_string().parse::<LayerTag>().unwrap(), tag);
        }
        assert!("G_2".parse::<LayerTag>().is_err());
    }

    /// Chromatic index of a small graph by exhaustive search.
    fn chromatic_index(g: &Graph) -> usize {
        fn extend(g: &Graph, colours: usize, assigned: &mut Vec<usize>) -> bool {
            let e = assigned.len();
            if e == g.edge_count() {
                return true;
            }
            let (u, v) = g.endpoints(e);
            for c in 0..colours {
                let clash = (0..e).any(|f| {
                    let (a, b) = g.endpoints(f);
                    assigned[f] == c && (a == u || a == v || b == u || b == v)
                });
                if !clash {
                    assigned.push(c);
                    if extend(g, colours, assigned) {
                        return true;
                    }
                    assigned.pop();
                }
            }
            false
        }
        (0..=g.edge_count())
            .find(|&c| extend(g, c, &mut Vec::new()))
            .unwrap()
    }

    fn arb_forest() -> impl Strategy<Value = Graph> {
        (1usize..12).prop_flat_map(|n| {
            proptest::collection::vec((any::<bool>(), any::<prop::sample::Index>()), n).prop_map(
                move |choices| {
                    let mut edges = Vec::new();
                    for (v, (keep, parent)) in choices.into_iter().enumerate().skip(1) {
                        if keep && edges.len() < 10 {
                            edges.push((parent.index(v), v));
                        }
                    }
                    Graph::new(n, edges).unwrap()
                },
            )
        })
    }

    proptest! {
        #[test]
        fn forests_use_exactly_max_degree(f in arb_forest()) {
            let c = color_forest(&f).unwrap();
            prop_assert!(is_proper_coloring(&f, &c).unwrap());
            prop_assert_eq!(colours_used(&c), f.max_degree());
            prop_assert_eq!(chromatic_index(&f), f.max_degree());
        }

        #[test]
        fn r_matches_integer_oracle(q in 1i128..12, extra in 0i128..400) {
            let p = (q + 1) / 2 + extra;
            prop_assert_eq!(r_value(Rational::new(p, q)).unwrap() as i128, r_oracle(p, q));
        }

        #[test]
        fn r_monotone_while_k_and_big_k_fixed(q in 2i128..30, base in 1i128..40, a in 0i128..30, b in 0i128..30) {
            // sample two points in [base, base + 1/2) where floor(m) and floor(2m) are constant
            let (lo, hi) = (a.min(b) % q, a.max(b) % q);
            let (lo, hi) = (lo.min(hi), lo.max(hi));
            let m1 = Rational::from_int(base) + Rational::new(lo, 2 * q);
            let m2 = Rational::from_int(base) + Rational::new(hi, 2 * q);
            prop_assert!(r_value(m1).unwrap() <= r_value(m2).unwrap());
        }
    }

    #[test]
    fn document_round_trip() {
        let g = Graph::complete(6);
        let (col, _) = anti_rainbow_coloring(&g).unwrap();
        let json = serde_json::to_string(&col.to_document(&g)).unwrap();
        assert!(json.contains("\"m\":\"5/2\""));
        assert!(json.contains("\"K\":5"));
        let doc: ColoringDocument = serde_json::from_str(&json).unwrap();
        assert_eq!(EdgeColoring::from_document(&g, &doc).unwrap(), col);
    }

    #[test]
    fn document_must_match_graph() {
        let g = Graph::complete(4);
        let (col, _) = anti_rainbow_coloring(&g).unwrap();
        let mut doc = col.to_document(&g);
        doc.edges[0].v = 3;
        doc.edges[0].u = 2;
        assert!(EdgeColoring::from_document(&g, &doc).is_err());
        doc.edges.pop();
        assert!(EdgeColoring::from_document(&g, &doc).is_err());
    }
}
