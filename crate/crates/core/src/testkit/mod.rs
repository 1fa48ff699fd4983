//! Instance generators and a brute-force coloring oracle.

mod generators;
mod oracle;

pub use generators::{generate, GeneratorSpec};
pub use oracle::{backtrack, oracle_outcome, oracle_solve, OracleOutcome};

use crate::coloring::{Color, Coloring};
use crate::map::Vertex;

/// Every proper coloring of a cycle with `n` vertices, in lexicographic order.
pub fn proper_cycle_colorings(n: usize) -> Vec<Vec<Color>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn rec(n: usize, cur: &mut Vec<Color>, out: &mut Vec<Vec<Color>>) {
        if cur.len() == n {
            if n < 2 || cur[0] != cur[n - 1] {
                out.push(cur.clone());
            }
            return;
        }
        for c in 1..=3 {
            if cur.last() != Some(&c) {
                cur.push(c);
                rec(n, cur, out);
                cur.pop();
            }
        }
    }
    rec(n, &mut cur, &mut out);
    out
}

/// Precoloring assigning `colors[i]` to `walk[i]`.
pub fn precolor(vertex_count: usize, walk: &[Vertex], colors: &[Color]) -> Coloring {
    Coloring::from_pairs(vertex_count, walk.iter().copied().zip(colors.iter().copied()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_coloring_counts() {
        // (k-1)^n + (-1)^n (k-1) with k = 3
        assert_eq!(proper_cycle_colorings(4).len(), 18);
        assert_eq!(proper_cycle_colorings(8).len(), 258);
        assert_eq!(proper_cycle_colorings(10).len(), 1026);
    }
}
