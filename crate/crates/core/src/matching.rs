//! Hopcroft–Karp bipartite matching with Hall-violator extraction.

use std::collections::VecDeque;

const FREE: usize = usize::MAX;

/// Result of asking for a matching that covers every left vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MatchingOutcome {
    /// `mate[u]` is the right vertex matched to left vertex `u`.
    Saturating(Vec<usize>),
    /// A left set whose neighbourhood is strictly smaller than itself.
    HallViolator {
        set: Vec<usize>,
        neighbourhood: Vec<usize>,
    },
}

impl MatchingOutcome {
    pub fn is_saturating(&self) -> bool {
        matches!(self, MatchingOutcome::Saturating(_))
    }
}

struct HopcroftKarp<'a> {
    adj: &'a [Vec<usize>],
    mate_left: Vec<usize>,
    mate_right: Vec<usize>,
    dist: Vec<usize>,
}

impl HopcroftKarp<'_> {
    fn bfs(&mut self) -> bool {
        let mut queue = VecDeque::new();
        for u in 0..self.adj.len() {
            if self.mate_left[u] == FREE {
                self.dist[u] = 0;
                queue.push_back(u);
            } else {
                self.dist[u] = usize::MAX;
            }
        }
        let mut found = false;
        while let Some(u) = queue.pop_front() {
            for &r in &self.adj[u] {
                let w = self.mate_right[r];
                if w == FREE {
                    found = true;
                } else if self.dist[w] == usize::MAX {
                    self.dist[w] = self.dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        found
    }

    fn dfs(&mut self, u: usize) -> bool {
        for i in 0..self.adj[u].len() {
            let r = self.adj[u][i];
            let w = self.mate_right[r];
            if w == FREE || (self.dist[w] == self.dist[u] + 1 && self.dfs(w)) {
                self.mate_left[u] = r;
                self.mate_right[r] = u;
                return true;
            }
        }
        self.dist[u] = usize::MAX;
        false
    }
}

/// Finds a matching saturating `0..adjacency.len()` on the left, or a Hall
/// violator if none exists.
///
/// Neighbours are scanned in ascending order, and a final pass moves each
/// left vertex (ascending) to the lowest free right vertex below its current
/// partner. The result is fully determined by the input.
pub fn saturating_matching(right_count: usize, adjacency: &[Vec<usize>]) -> MatchingOutcome {
    let adj: Vec<Vec<usize>> = adjacency
        .iter()
        .map(|list| {
            let mut list = list.clone();
            list.sort_unstable();
            list.dedup();
            debug_assert!(list.iter().all(|&r| r < right_count));
            list
        })
        .collect();
    let left_count = adj.len();
    let mut hk = HopcroftKarp {
        adj: &adj,
        mate_left: vec![FREE; left_count],
        mate_right: vec![FREE; right_count],
        dist: vec![0; left_count],
    };
    while hk.bfs() {
        for u in 0..left_count {
            if hk.mate_left[u] == FREE {
                hk.dfs(u);
            }
        }
    }
    let HopcroftKarp {
        mut mate_left,
        mut mate_right,
        ..
    } = hk;

    if mate_left.iter().all(|&r| r != FREE) {
        for u in 0..left_count {
            let current = mate_left[u];
            if let Some(&r) = adj[u]
                .iter()
                .find(|&&r| r < current && mate_right[r] == FREE)
            {
                mate_right[current] = FREE;
                mate_right[r] = u;
                mate_left[u] = r;
            }
        }
        return MatchingOutcome::Saturating(mate_left);
    }

    // Alternating reachability from the unmatched left vertices. Every right
    // vertex reached is matched (the matching is maximum), and its partner is
    // reached too, so the reached left side outnumbers its neighbourhood.
    let mut seen_left = vec![false; left_count];
    let mut seen_right = vec![false; right_count];
    let mut queue: VecDeque<usize> = (0..left_count).filter(|&u| mate_left[u] == FREE).collect();
    for &u in &queue {
        seen_left[u] = true;
    }
    while let Some(u) = queue.pop_front() {
        for &r in &adj[u] {
            if !seen_right[r] {
                seen_right[r] = true;
                let w = mate_right[r];
                debug_assert!(w != FREE, "maximum matching left an augmenting path");
                if !seen_left[w] {
                    seen_left[w] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    MatchingOutcome::HallViolator {
        set: (0..left_count).filter(|&u| seen_left[u]).collect(),
        neighbourhood: (0..right_count).filter(|&r| seen_right[r]).collect(),
    }
}
