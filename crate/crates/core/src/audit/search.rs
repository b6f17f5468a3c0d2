use serde::{Deserialize, Serialize};

use crate::coloring::{Colour, EdgeColoring};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, VertexId};

/// A copy of a pattern graph inside a host.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Embedding {
    /// Host vertex for each pattern vertex.
    pub mapping: Vec<VertexId>,
    /// Host edge for each pattern edge.
    pub edge_images: Vec<EdgeId>,
}

impl Embedding {
    pub fn is_rainbow(&self, colour: &[Colour]) -> bool {
        let mut seen: Vec<Colour> = self.edge_images.iter().map(|&e| colour[e]).collect();
        seen.sort_unstable();
        seen.windows(2).all(|w| w[0] != w[1])
    }
}

struct Step {
    vertex: VertexId,
    degree: usize,
    /// (earlier pattern vertex, pattern edge joining them)
    back: Vec<(VertexId, EdgeId)>,
}

/// Pattern vertices in search order: highest degree first, then the vertex
/// with most already-placed neighbours (ties to higher degree, then lower id).
fn search_plan(h: &Graph) -> Vec<Step> {
    let n = h.vertex_count();
    let mut placed = vec![false; n];
    let mut links = vec![0usize; n];
    let mut plan = Vec::with_capacity(n);
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| !placed[v])
            .max_by(|&a, &b| {
                (links[a], h.degree(a))
                    .cmp(&(links[b], h.degree(b)))
                    .then(b.cmp(&a))
            })
            .expect("unplaced vertex remains");
        let back = h
            .incident(v)
            .iter()
            .map(|&e| (h.other(e, v), e))
            .filter(|&(u, _)| placed[u])
            .collect();
        placed[v] = true;
        h.neighbours(v).for_each(|u| links[u] += 1);
        plan.push(Step {
            vertex: v,
            degree: h.degree(v),
            back,
        });
    }
    plan
}

struct Search<'a> {
    host: &'a Graph,
    colour: Option<&'a [Colour]>,
    plan: Vec<Step>,
    mapping: Vec<VertexId>,
    edge_images: Vec<EdgeId>,
    used_vertex: Vec<bool>,
    colour_uses: Vec<u32>,
}

impl Search<'_> {
    fn run(&mut self, depth: usize) -> bool {
        if depth == self.plan.len() {
            return true;
        }
        let (pv, pdeg) = (self.plan[depth].vertex, self.plan[depth].degree);
        for hv in 0..self.host.vertex_count() {
            if self.used_vertex[hv] || self.host.degree(hv) < pdeg {
                continue;
            }
            let mut added: Vec<(EdgeId, EdgeId)> = Vec::new();
            let mut ok = true;
            for i in 0..self.plan[depth].back.len() {
                let (pu, pe) = self.plan[depth].back[i];
                let Some(he) = self.host.edge_between(self.mapping[pu], hv) else {
                    ok = false;
                    break;
                };
                if let Some(colour) = self.colour {
                    let c = colour[he];
                    if self.colour_uses[c] > 0 {
                        ok = false;
                        break;
                    }
                    self.colour_uses[c] += 1;
                }
                added.push((pe, he));
            }
            if ok {
                self.used_vertex[hv] = true;
                self.mapping[pv] = hv;
                for &(pe, he) in &added {
                    self.edge_images[pe] = he;
                }
                if self.run(depth + 1) {
                    return true;
                }
                self.used_vertex[hv] = false;
                self.mapping[pv] = usize::MAX;
            }
            if let Some(colour) = self.colour {
                for &(_, he) in &added {
                    self.colour_uses[colour[he]] -= 1;
                }
            }
        }
        false
    }
}

fn find_copy(g: &Graph, colour: Option<&[Colour]>, h: &Graph) -> Option<Embedding> {
    if h.vertex_count() > g.vertex_count() || h.edge_count() > g.edge_count() {
        return None;
    }
    let colour_space = colour.map_or(0, |c| c.iter().map(|&x| x + 1).max().unwrap_or(0));
    let mut search = Search {
        host: g,
        colour,
        plan: search_plan(h),
        mapping: vec![usize::MAX; h.vertex_count()],
        edge_images: vec![usize::MAX; h.edge_count()],
        used_vertex: vec![false; g.vertex_count()],
        colour_uses: vec![0; colour_space],
    };
    search.run(0).then_some(Embedding {
        mapping: search.mapping,
        edge_images: search.edge_images,
    })
}

/// First copy of `h` in `g` whose edges all have distinct colours, in the
/// canonical search order, or `None`.
pub fn rainbow_copy_search(g: &Graph, col: &EdgeColoring, h: &Graph) -> Result<Option<Embedding>> {
    if h.edge_count() == 0 {
        return Err(Error::input("pattern must have at least one edge"));
    }
    if col.colour.len() != g.edge_count() {
        return Err(Error::input("colouring does not match the host graph"));
    }
    // pigeonhole: too few colours for any rainbow copy
    if col.distinct_colours() < h.edge_count() {
        return Ok(None);
    }
    Ok(find_copy(g, Some(&col.colour), h))
}

/// First copy of `h` in `g` ignoring colours.
pub fn contains_copy(g: &Graph, h: &Graph) -> Option<Embedding> {
    find_copy(g, None, h)
}
