//! Cylinder machinery: short non-contractible cycle sequences, the pair
//! coloring dynamic program, and tame extensions.

mod segment;
mod sequence;
mod solve;
mod tame;

use std::collections::{BTreeSet, HashSet, VecDeque};

pub use segment::{pair_extension_set, PairColoringSet, PairEntry, SegmentMode};
pub use sequence::{split_cylinder, verify_sequence, CycleSequence};
pub use solve::{solve_cylinder, solve_cylinder_with};
pub use tame::{layer_cycle, tame_extend};

use crate::coloring::{Color, Coloring};
use crate::error::{Error, Result};
use crate::map::{ClosedWalk, Dart, EdgeId, EmbeddedGraph, State, Vertex};

/// Normalized cylinder together with its dual adjacency.
#[derive(Clone, Debug)]
pub(crate) struct Cylinder {
    pub g: EmbeddedGraph,
    /// Orbit pairs on the two sides of every edge.
    pub sides: Vec<[usize; 2]>,
    pub b1: usize,
    pub b2: usize,
    dual_adj: Vec<Vec<(usize, EdgeId)>>,
}

impl Cylinder {
    pub fn new(g: &EmbeddedGraph) -> Result<Self> {
        let s = g.signature();
        if !s.is_cylinder() {
            return Err(Error::NotCylinder(format!(
                "signature has Euler genus {}, {} cuffs, orientable {}",
                s.euler_genus, s.cuffs, s.orientable
            )));
        }
        let g = g.orientation_normalize()?;
        let t = g.faces();
        let sides: Vec<[usize; 2]> = (0..g.edge_count()).map(|e| t.edge_sides(e)).collect();
        let mut dual_adj = vec![Vec::new(); t.orbit_count()];
        for (e, &[a, b]) in sides.iter().enumerate() {
            dual_adj[a].push((b, e));
            dual_adj[b].push((a, e));
        }
        let b1 = t.pair_of(t.cuff_orbit(0));
        let b2 = t.pair_of(t.cuff_orbit(1));
        Ok(Cylinder {
            g,
            sides,
            b1,
            b2,
            dual_adj,
        })
    }

    pub fn cuff(&self, i: usize) -> ClosedWalk {
        self.g.cuff_walk(i)
    }

    /// Genuine faces on the `B1` side of a cycle, or `None` when the
    /// cycle does not separate the cuffs.
    pub fn region(&self, cycle: &BTreeSet<EdgeId>) -> Option<BTreeSet<usize>> {
        let mut seen = HashSet::from([self.b1]);
        let mut queue = VecDeque::from([self.b1]);
        while let Some(f) = queue.pop_front() {
            for &(h, e) in &self.dual_adj[f] {
                if !cycle.contains(&e) && seen.insert(h) {
                    queue.push_back(h);
                }
            }
        }
        if seen.contains(&self.b2) {
            return None;
        }
        seen.remove(&self.b1);
        Some(seen.into_iter().collect())
    }

    pub fn face_count(&self) -> usize {
        self.g.faces().face_count()
    }

    /// Primal edges crossed by a shortest dual path from `B1` to `B2`.
    fn transversal(&self) -> HashSet<EdgeId> {
        let mut prev = vec![None; self.dual_adj.len()];
        let mut seen = vec![false; self.dual_adj.len()];
        seen[self.b1] = true;
        let mut queue = VecDeque::from([self.b1]);
        while let Some(f) = queue.pop_front() {
            for &(h, e) in &self.dual_adj[f] {
                if !seen[h] {
                    seen[h] = true;
                    prev[h] = Some((f, e));
                    queue.push_back(h);
                }
            }
        }
        let mut out = HashSet::new();
        let mut f = self.b2;
        while let Some((p, e)) = prev[f] {
            out.insert(e);
            f = p;
        }
        out
    }

    /// Shortest non-contractible cycle using only edges accepted by `keep`.
    /// A closed walk is non-contractible when it crosses a fixed
    /// cuff-to-cuff transversal an odd number of times.
    pub fn shortest_noncontractible(&self, keep: impl Fn(EdgeId) -> bool) -> Option<ClosedWalk> {
        let cross = self.transversal();
        let n = self.g.vertex_count();
        let adj = self.g.adjacency();
        let mut best: Option<Vec<(Vertex, EdgeId)>> = None;
        for root in 0..n {
            let mut prev: Vec<Option<(usize, EdgeId)>> = vec![None; 2 * n];
            let mut dist = vec![usize::MAX; 2 * n];
            dist[2 * root] = 0;
            let mut queue = VecDeque::from([2 * root]);
            while let Some(x) = queue.pop_front() {
                if best.as_ref().is_some_and(|b| dist[x] + 1 > b.len()) {
                    break;
                }
                let (v, p) = (x / 2, x % 2);
                for &(w, e) in &adj[v] {
                    if !keep(e) {
                        continue;
                    }
                    let y = 2 * w + (p ^ usize::from(cross.contains(&e)));
                    if dist[y] == usize::MAX {
                        dist[y] = dist[x] + 1;
                        prev[y] = Some((x, e));
                        queue.push_back(y);
                    }
                }
            }
            let target = 2 * root + 1;
            if dist[target] == usize::MAX || best.as_ref().is_some_and(|b| b.len() <= dist[target]) {
                continue;
            }
            let mut steps = Vec::new();
            let mut x = target;
            while let Some((p, e)) = prev[x] {
                steps.push((x / 2, e));
                x = p;
            }
            steps.reverse();
            best = Some(steps);
        }
        let steps = best?;
        let start = self.g.other_end(steps[0].1, steps[0].0);
        let mut verts = vec![start];
        verts.extend(steps.iter().map(|s| s.0));
        let edges: Vec<EdgeId> = steps.iter().map(|s| s.1).collect();
        Some(self.odd_subcycle(&verts, &edges, &cross))
    }

    /// Splits a closed walk at repeated vertices and keeps a simple piece
    /// crossing the transversal an odd number of times.
    fn odd_subcycle(&self, verts: &[Vertex], edges: &[EdgeId], cross: &HashSet<EdgeId>) -> ClosedWalk {
        let mut stack_v: Vec<Vertex> = vec![verts[0]];
        let mut stack_e: Vec<EdgeId> = Vec::new();
        for (i, &e) in edges.iter().enumerate() {
            let w = verts[i + 1];
            stack_e.push(e);
            if let Some(pos) = stack_v.iter().position(|&x| x == w) {
                let loop_edges: Vec<EdgeId> = stack_e.split_off(pos);
                let loop_verts: Vec<Vertex> = stack_v.split_off(pos);
                let odd = loop_edges.iter().filter(|e| cross.contains(e)).count() % 2 == 1;
                if odd {
                    return self.walk(&loop_verts, &loop_edges);
                }
                stack_v.push(w);
            } else {
                stack_v.push(w);
            }
        }
        self.walk(&stack_v[..stack_v.len() - 1], &stack_e)
    }

    fn walk(&self, verts: &[Vertex], edges: &[EdgeId]) -> ClosedWalk {
        ClosedWalk {
            vertices: verts.to_vec(),
            darts: verts.iter().zip(edges).map(|(&v, &e)| dart_from(&self.g, e, v)).collect(),
        }
    }
}

pub(crate) fn dart_from(g: &EmbeddedGraph, e: EdgeId, tail: Vertex) -> Dart {
    if g.edge(e).u == tail {
        Dart::first(e)
    } else {
        Dart::second(e)
    }
}

/// Orbit pair of the face traversing edge `e` from its first endpoint.
pub(crate) fn forward_side(g: &EmbeddedGraph, e: EdgeId) -> usize {
    let t = g.faces();
    t.pair_of(t.state_orbit(State::new(Dart::first(e), false)))
}

/// All simple cycles with at most `max_len` edges, one walk per edge set.
pub fn short_cycles(g: &EmbeddedGraph, max_len: usize) -> Vec<ClosedWalk> {
    let adj = g.adjacency();
    let mut seen: HashSet<Vec<EdgeId>> = HashSet::new();
    let mut out = Vec::new();
    for s in 0..g.vertex_count() {
        let mut verts = vec![s];
        let mut edges: Vec<EdgeId> = Vec::new();
        let mut on_path = vec![false; g.vertex_count()];
        on_path[s] = true;
        extend_cycles(g, &adj, max_len, &mut verts, &mut edges, &mut on_path, &mut seen, &mut out);
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn extend_cycles(
    g: &EmbeddedGraph,
    adj: &[Vec<(Vertex, EdgeId)>],
    max_len: usize,
    verts: &mut Vec<Vertex>,
    edges: &mut Vec<EdgeId>,
    on_path: &mut [bool],
    seen: &mut HashSet<Vec<EdgeId>>,
    out: &mut Vec<ClosedWalk>,
) {
    let s = verts[0];
    let v = verts[verts.len() - 1];
    if edges.len() >= max_len {
        return;
    }
    for &(w, e) in &adj[v] {
        if edges.contains(&e) {
            continue;
        }
        if w == s && !edges.is_empty() {
            edges.push(e);
            let mut key = edges.clone();
            key.sort_unstable();
            if seen.insert(key) {
                out.push(ClosedWalk {
                    vertices: verts.clone(),
                    darts: verts.iter().zip(edges.iter()).map(|(&x, &f)| dart_from(g, f, x)).collect(),
                });
            }
            edges.pop();
        } else if w > s && !on_path[w] {
            on_path[w] = true;
            verts.push(w);
            edges.push(e);
            extend_cycles(g, adj, max_len, verts, edges, on_path, seen, out);
            edges.pop();
            verts.pop();
            on_path[w] = false;
        }
    }
}

/// Every proper coloring of `vertices` along `edges`, subject to fixed colors.
pub(crate) fn proper_assignments(
    vertices: &[Vertex],
    edges: &[(Vertex, Vertex)],
    fixed: &Coloring,
) -> Vec<Vec<Color>> {
    let idx = |v: Vertex| vertices.iter().position(|&x| x == v);
    let nbrs: Vec<Vec<usize>> = vertices
        .iter()
        .map(|&v| {
            edges
                .iter()
                .filter_map(|&(a, b)| {
                    if a == v {
                        idx(b)
                    } else if b == v {
                        idx(a)
                    } else {
                        None
                    }
                })
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut cur: Vec<Color> = Vec::with_capacity(vertices.len());
    fn rec(
        i: usize,
        vertices: &[Vertex],
        nbrs: &[Vec<usize>],
        fixed: &Coloring,
        cur: &mut Vec<Color>,
        out: &mut Vec<Vec<Color>>,
    ) {
        if i == vertices.len() {
            out.push(cur.clone());
            return;
        }
        let choices: Vec<Color> = match fixed.get(vertices[i]) {
            Some(c) => vec![c],
            None => vec![1, 2, 3],
        };
        for c in choices {
            if nbrs[i].iter().any(|&j| j < i && cur[j] == c) || nbrs[i].contains(&i) {
                continue;
            }
            cur.push(c);
            rec(i + 1, vertices, nbrs, fixed, cur, out);
            cur.pop();
        }
    }
    rec(0, vertices, &nbrs, fixed, &mut cur, &mut out);
    out
}

/// Distinct vertices of a walk, sorted, with its edges as vertex pairs.
pub(crate) fn walk_support(g: &EmbeddedGraph, w: &ClosedWalk) -> (Vec<Vertex>, Vec<(Vertex, Vertex)>) {
    let vs: BTreeSet<Vertex> = w.vertices.iter().copied().collect();
    let es = w.darts.iter().map(|&d| (g.tail(d), g.head(d))).collect();
    (vs.into_iter().collect(), es)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map::{classify_cycle, CycleClass};
    use crate::testkit::{generate, GeneratorSpec};

    #[test]
    fn regions_of_rings() {
        let g = generate(&GeneratorSpec::GridCylinder(4, 5)).unwrap();
        let c = Cylinder::new(&g).unwrap();
        assert_eq!(c.region(&c.cuff(0).edge_set()).unwrap().len(), 0);
        assert_eq!(c.region(&c.cuff(1).edge_set()).unwrap().len(), 16);
        let ring2 = g.walk_from_vertices(&[8, 9, 10, 11]).unwrap();
        assert_eq!(c.region(&ring2.edge_set()).unwrap().len(), 8);
        let face = g.walk_from_vertices(&[0, 1, 5, 4]).unwrap();
        assert!(c.region(&face.edge_set()).is_none());
    }

    #[test]
    fn short_cycle_counts() {
        let g = generate(&GeneratorSpec::GridCylinder(4, 3)).unwrap();
        let cs = short_cycles(&g, 4);
        // 8 faces and 3 rings
        assert_eq!(cs.len(), 11);
        assert!(cs.iter().all(|c| c.is_cycle()));
    }

    #[test]
    fn shortest_noncontractible_is_a_ring() {
        let g = generate(&GeneratorSpec::GridCylinder(5, 4)).unwrap();
        let c = Cylinder::new(&g).unwrap();
        let w = c.shortest_noncontractible(|_| true).unwrap();
        assert_eq!(w.len(), 5);
        assert!(w.is_cycle());
        assert!(matches!(classify_cycle(&c.g, &w).unwrap(), CycleClass::SurroundsCuff(_)));
        let rungs_only = c.shortest_noncontractible(|e| {
            let ed = c.g.edge(e);
            ed.u % 5 == ed.v % 5
        });
        assert!(rungs_only.is_none());
    }

    #[test]
    fn assignments_respect_fixed_colors() {
        let fixed = Coloring::from_pairs(4, [(0, 1)]);
        let all = proper_assignments(&[0, 1, 2, 3], &[(0, 1), (1, 2), (2, 3), (3, 0)], &fixed);
        assert_eq!(all.len(), 6);
        assert!(all.iter().all(|c| c[0] == 1));
    }
}
