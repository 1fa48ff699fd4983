use crate::coloring::{Color, Coloring};
use crate::map::{EmbeddedGraph, Vertex};
use crate::solver::{SolveResult, Witness};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleOutcome {
    Colored(Vec<Color>),
    Uncolorable,
    /// The node limit was reached first.
    Aborted,
}

struct Search<'a> {
    adj: &'a [Vec<Vertex>],
    dom: Vec<u8>,
    fixed: Vec<bool>,
    nodes: u64,
    limit: Option<u64>,
}

impl Search<'_> {
    fn pick(&self) -> Option<Vertex> {
        (0..self.dom.len())
            .filter(|&v| !self.fixed[v])
            .min_by_key(|&v| (self.dom[v].count_ones(), usize::MAX - self.adj[v].len(), v))
    }

    // Some(true) solved, Some(false) exhausted, None aborted
    fn run(&mut self) -> Option<bool> {
        self.nodes += 1;
        if self.limit.is_some_and(|l| self.nodes > l) {
            return None;
        }
        let Some(v) = self.pick() else {
            return Some(true);
        };
        let options = self.dom[v];
        for c in 0..3u8 {
            let bit = 1 << c;
            if options & bit == 0 {
                continue;
            }
            let mut trail = Vec::new();
            self.fixed[v] = true;
            self.dom[v] = bit;
            let mut ok = true;
            let adj = self.adj;
            for &w in &adj[v] {
                if !self.fixed[w] && self.dom[w] & bit != 0 {
                    trail.push(w);
                    self.dom[w] &= !bit;
                    if self.dom[w] == 0 {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                match self.run() {
                    Some(true) => return Some(true),
                    None => return None,
                    Some(false) => {}
                }
            }
            for w in trail {
                self.dom[w] |= bit;
            }
            self.fixed[v] = false;
            self.dom[v] = options;
        }
        Some(false)
    }
}

/// Backtracking 3-coloring with forward checking and smallest-domain
/// branching on a plain graph.
pub fn backtrack(
    n: usize,
    edges: &[(Vertex, Vertex)],
    pre: &Coloring,
    node_limit: Option<u64>,
) -> OracleOutcome {
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    let mut dom = vec![0b111u8; n];
    let mut fixed = vec![false; n];
    for (v, c) in pre.assigned() {
        if v < n {
            dom[v] = 1 << (c - 1);
            fixed[v] = true;
        }
    }
    for &(u, v) in edges {
        if fixed[u] && fixed[v] && dom[u] == dom[v] {
            return OracleOutcome::Uncolorable;
        }
    }
    for v in 0..n {
        if fixed[v] {
            for &w in &adj[v] {
                if !fixed[w] {
                    dom[w] &= !dom[v];
                }
            }
        }
    }
    if dom.contains(&0) {
        return OracleOutcome::Uncolorable;
    }
    let mut s = Search {
        adj: &adj,
        dom,
        fixed,
        nodes: 0,
        limit: node_limit,
    };
    match s.run() {
        Some(true) => OracleOutcome::Colored(
            s.dom.iter().map(|d| d.trailing_zeros() as Color + 1).collect(),
        ),
        Some(false) => OracleOutcome::Uncolorable,
        None => OracleOutcome::Aborted,
    }
}

pub fn oracle_outcome(g: &EmbeddedGraph, pre: &Coloring, node_limit: Option<u64>) -> OracleOutcome {
    let edges: Vec<_> = g.edges().iter().map(|e| (e.u, e.v)).collect();
    backtrack(g.vertex_count(), &edges, pre, node_limit)
}

/// Exhaustive ground truth: Yes with a coloring, or No.
pub fn oracle_solve(g: &EmbeddedGraph, pre: &Coloring) -> SolveResult {
    match oracle_outcome(g, pre, None) {
        OracleOutcome::Colored(c) => SolveResult::Yes(Coloring::from_total(&c)),
        _ => SolveResult::No(Witness::Exhausted(vec!["exhaustive search".into()])),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::verify_coloring;
    use crate::testkit::{generate, GeneratorSpec};

    #[test]
    fn oracle_examples() {
        let g = generate(&GeneratorSpec::GridTorus(4, 4)).unwrap();
        let r = oracle_solve(&g, &Coloring::new(16));
        let SolveResult::Yes(c) = r else { panic!() };
        assert!(verify_coloring(&g, &c, &Coloring::new(16)));
        let g = generate(&GeneratorSpec::K5Torus).unwrap();
        assert!(oracle_solve(&g, &Coloring::new(5)).is_no());
        let g = generate(&GeneratorSpec::GridDisk(3, 3)).unwrap();
        let pre = Coloring::from_pairs(9, g.cuffs()[0].iter().copied().zip([2, 1, 2, 3, 1, 2, 1, 3]));
        assert!(oracle_solve(&g, &pre).is_no());
    }

    #[test]
    fn improper_precoloring_is_no() {
        let g = generate(&GeneratorSpec::GridDisk(2, 2)).unwrap();
        let pre = Coloring::from_pairs(4, [(0, 1), (1, 1)]);
        assert!(oracle_solve(&g, &pre).is_no());
    }

    #[test]
    fn node_limit_aborts() {
        let g = generate(&GeneratorSpec::GridTorus(5, 5)).unwrap();
        let pre = Coloring::new(25);
        assert_eq!(oracle_outcome(&g, &pre, Some(1)), OracleOutcome::Aborted);
    }

    #[test]
    fn relabeling_invariance() {
        let g = generate(&GeneratorSpec::GridCylinder(5, 3)).unwrap();
        let perm: Vec<_> = (0..15).map(|v| (v * 7) % 15).collect();
        let h = g.relabel(&perm).unwrap();
        for seed in 0..5u8 {
            let pre = Coloring::from_pairs(15, (0..5).map(|i| (i, [1, 2, 1, 2, 3][(i + seed as usize) % 5])));
            let pre_h = Coloring::from_pairs(15, pre.assigned().map(|(v, c)| (perm[v], c)));
            assert_eq!(
                oracle_solve(&g, &pre).is_yes(),
                oracle_solve(&h, &pre_h).is_yes()
            );
        }
    }
}
