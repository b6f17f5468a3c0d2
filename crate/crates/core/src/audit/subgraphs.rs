use serde::{Deserialize, Serialize};

use crate::coloring::EdgeColoring;
use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, VertexId};
use crate::rational::Rational;

pub const DEFAULT_AUDIT_BUDGET: u64 = 100_000_000;

/// A rainbow subgraph whose 2-density reaches `m(G)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<EdgeId>,
    pub two_density: Rational,
}

struct Enumerator<'a> {
    g: &'a Graph,
    colour: &'a [usize],
    threshold: Rational,
    max_edges: usize,
    budget: u64,
    visited: u64,
    edges: Vec<EdgeId>,
    /// Number of chosen edges at each vertex.
    cover: Vec<u32>,
    covered_vertices: usize,
    colour_used: Vec<bool>,
    violations: Vec<Violation>,
}

impl Enumerator<'_> {
    fn push(&mut self, e: EdgeId) {
        let (u, v) = self.g.endpoints(e);
        for x in [u, v] {
            if self.cover[x] == 0 {
                self.covered_vertices += 1;
            }
            self.cover[x] += 1;
        }
        self.colour_used[self.colour[e]] = true;
        self.edges.push(e);
    }

    fn pop(&mut self) {
        let e = self.edges.pop().expect("non-empty");
        let (u, v) = self.g.endpoints(e);
        for x in [u, v] {
            self.cover[x] -= 1;
            if self.cover[x] == 0 {
                self.covered_vertices -= 1;
            }
        }
        self.colour_used[self.colour[e]] = false;
    }

    fn inspect(&mut self) -> Result<()> {
        self.visited += 1;
        if self.visited > self.budget {
            return Err(Error::BudgetExceeded {
                budget: self.budget,
                partial: std::mem::take(&mut self.violations),
            });
        }
        let v = self.covered_vertices;
        if v >= 3 {
            let d2 = Rational::new(self.edges.len() as i128 - 1, v as i128 - 2);
            if d2 >= self.threshold {
                let mut vertices: Vec<VertexId> = (0..self.g.vertex_count())
                    .filter(|&x| self.cover[x] > 0)
                    .collect();
                vertices.sort_unstable();
                let mut edges = self.edges.clone();
                edges.sort_unstable();
                self.violations.push(Violation {
                    vertices,
                    edges,
                    two_density: d2,
                });
            }
        }
        Ok(())
    }

    /// ESU-style growth over the line graph: every connected edge set whose
    /// smallest edge is `root` is visited exactly once. Branches that would
    /// repeat a colour are cut, since no superset can be rainbow.
    fn extend(&mut self, mut frontier: Vec<EdgeId>, root: EdgeId) -> Result<()> {
        self.inspect()?;
        if self.edges.len() == self.max_edges {
            return Ok(());
        }
        while let Some(w) = frontier.pop() {
            if self.colour_used[self.colour[w]] {
                continue;
            }
            // new edges: those touching w's uncovered endpoint and no covered vertex
            let mut next = frontier.clone();
            let (a, b) = self.g.endpoints(w);
            for x in [a, b] {
                if self.cover[x] > 0 {
                    continue;
                }
                for &f in self.g.incident(x) {
                    let y = self.g.other(f, x);
                    if f > root && f != w && self.cover[y] == 0 {
                        next.push(f);
                    }
                }
            }
            self.push(w);
            let result = self.extend(next, root);
            self.pop();
            result?;
        }
        Ok(())
    }
}

/// Every connected rainbow subgraph with at least three vertices and at most
/// `max_edges` edges whose 2-density is at least `m(G)`.
///
/// Stops with [`Error::BudgetExceeded`] (carrying the violations found so
/// far) after visiting `budget` candidate subgraphs.
pub fn rainbow_subgraph_audit(
    g: &Graph,
    col: &EdgeColoring,
    max_edges: usize,
    budget: u64,
) -> Result<Vec<Violation>> {
    if col.colour.len() != g.edge_count() {
        return Err(Error::input("colouring does not match the host graph"));
    }
    let colour_space = col.colour.iter().map(|&c| c + 1).max().unwrap_or(0);
    let mut en = Enumerator {
        g,
        colour: &col.colour,
        threshold: col.m_value,
        max_edges,
        budget,
        visited: 0,
        edges: Vec::new(),
        cover: vec![0; g.vertex_count()],
        covered_vertices: 0,
        colour_used: vec![false; colour_space],
        violations: Vec::new(),
    };
    if max_edges == 0 {
        return Ok(Vec::new());
    }
    for root in 0..g.edge_count() {
        let (a, b) = g.endpoints(root);
        let mut frontier: Vec<EdgeId> = g
            .incident(a)
            .iter()
            .chain(g.incident(b))
            .copied()
            .filter(|&f| f > root)
            .collect();
        frontier.sort_unstable();
        en.push(root);
        let result = en.extend(frontier, root);
        en.pop();
        result?;
    }
    Ok(en.violations)
}
