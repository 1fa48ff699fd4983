//! Unit-capacity maximum flow on undirected multigraphs.

use std::collections::VecDeque;

/// Flow on an undirected multigraph where every edge carries at most one
/// unit in either direction.
#[derive(Clone, Debug)]
pub struct UnitFlow {
    pub edges: Vec<(usize, usize)>,
    /// `+1` when edge `(a, b)` carries flow from `a` to `b`, `-1` for the
    /// reverse direction, `0` when unused.
    pub flow: Vec<i8>,
    pub value: usize,
    /// Nodes reachable from the source in the final residual graph.
    pub source_side: Vec<bool>,
    adj: Vec<Vec<(usize, usize)>>,
}

impl UnitFlow {
    fn residual(&self, e: usize, from: usize) -> bool {
        let (a, _) = self.edges[e];
        let dir = if from == a { 1 } else { -1 };
        self.flow[e] != dir
    }

    /// Edges with one end on each side of the final residual cut.
    pub fn cut_edges(&self) -> Vec<usize> {
        (0..self.edges.len())
            .filter(|&e| {
                let (a, b) = self.edges[e];
                self.source_side[a] != self.source_side[b]
            })
            .collect()
    }

    pub fn neighbors(&self, v: usize) -> &[(usize, usize)] {
        &self.adj[v]
    }
}

/// Breadth-first augmenting paths from `s` to `t`, stopping early once the
/// value reaches `limit`.
pub fn max_flow(
    n: usize,
    edges: &[(usize, usize)],
    s: usize,
    t: usize,
    limit: Option<usize>,
) -> UnitFlow {
    let mut adj = vec![Vec::new(); n];
    for (e, &(a, b)) in edges.iter().enumerate() {
        adj[a].push((b, e));
        adj[b].push((a, e));
    }
    let mut f = UnitFlow {
        edges: edges.to_vec(),
        flow: vec![0; edges.len()],
        value: 0,
        source_side: vec![false; n],
        adj,
    };
    loop {
        if limit.is_some_and(|l| f.value >= l) {
            break;
        }
        let mut prev: Vec<Option<(usize, usize)>> = vec![None; n];
        let mut seen = vec![false; n];
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            if v == t {
                break;
            }
            for &(w, e) in &f.adj[v] {
                if !seen[w] && f.residual(e, v) {
                    seen[w] = true;
                    prev[w] = Some((v, e));
                    queue.push_back(w);
                }
            }
        }
        if !seen[t] {
            break;
        }
        let mut v = t;
        while let Some((u, e)) = prev[v] {
            let (a, _) = f.edges[e];
            f.flow[e] += if u == a { 1 } else { -1 };
            v = u;
        }
        f.value += 1;
    }
    let mut seen = vec![false; n];
    seen[s] = true;
    let mut queue = VecDeque::from([s]);
    while let Some(v) = queue.pop_front() {
        for &(w, e) in &f.adj[v] {
            if !seen[w] && f.residual(e, v) {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    f.source_side = seen;
    f
}

/// Orients every edge of an even-degree multigraph along Euler circuits,
/// one component at a time, always leaving by the smallest unused edge.
/// Returns `true` for edges oriented `a -> b`.
pub fn euler_orientation(n: usize, edges: &[(usize, usize)]) -> Vec<bool> {
    let mut adj = vec![Vec::new(); n];
    for (e, &(a, b)) in edges.iter().enumerate() {
        adj[a].push((b, e));
        adj[b].push((a, e));
    }
    let mut used = vec![false; edges.len()];
    let mut forward = vec![false; edges.len()];
    let mut ptr = vec![0usize; n];
    for root in 0..n {
        // iterative Hierholzer; orientation follows the traversal direction
        let mut stack = vec![root];
        while let Some(&v) = stack.last() {
            while ptr[v] < adj[v].len() && used[adj[v][ptr[v]].1] {
                ptr[v] += 1;
            }
            if ptr[v] == adj[v].len() {
                stack.pop();
                continue;
            }
            let (w, e) = adj[v][ptr[v]];
            used[e] = true;
            forward[e] = edges[e].0 == v;
            stack.push(w);
        }
    }
    forward
}
