//! Exact precoloring extension on quadrangulated disks via edge-disjoint
//! paths in the dual.

use std::collections::{BTreeSet, VecDeque};

use crate::coloring::{
    clockwise_orbit, delta_edge, delta_path, next_color, prev_color, winding, winding_report, Coloring,
};
use crate::error::{Error, Result};
use crate::flow::{euler_orientation, max_flow, UnitFlow};
use crate::map::{ClosedWalk, Dart, EdgeId, EmbeddedGraph, State, Vertex};
use crate::result::{SolveResult, SpokeWitness, Witness};

/// Dual of the disk in the patched sphere, with the outer vertex split
/// into `s` (boundary edges with increment `+1`) and `t` (the rest).
#[derive(Clone, Debug)]
pub struct SplitDual {
    /// The disk with all edge signs positive.
    pub graph: EmbeddedGraph,
    pub node_count: usize,
    pub s: usize,
    pub t: usize,
    /// Dual edge of each primal edge, `(x, y)` with face `x` traversing
    /// the edge from its first to its second endpoint.
    pub edges: Vec<(usize, usize)>,
    /// Boundary walk in the clockwise direction.
    pub boundary: ClosedWalk,
    pub s_edges: Vec<EdgeId>,
    pub t_edges: Vec<EdgeId>,
    /// Node of every face orbit (`usize::MAX` for the cuff).
    orbit_node: Vec<usize>,
}

impl SplitDual {
    pub fn degree(&self, node: usize) -> usize {
        self.edges
            .iter()
            .map(|&(a, b)| usize::from(a == node) + usize::from(b == node))
            .sum()
    }

    /// Node of the genuine face on the given side of an edge; `None` for the cuff side.
    fn face_node(&self, e: EdgeId, end_first: bool) -> Option<usize> {
        let dart = if end_first { Dart::first(e) } else { Dart::second(e) };
        let o = self.graph.faces().state_orbit(State::new(dart, false));
        let n = self.orbit_node[o];
        (n != usize::MAX).then_some(n)
    }
}

fn check_disk(g: &EmbeddedGraph) -> Result<()> {
    let s = g.signature();
    if !s.is_disk() {
        return Err(Error::NotDiskQuadrangulation(format!(
            "signature has Euler genus {} and {} cuffs",
            s.euler_genus, s.cuffs
        )));
    }
    g.check_quadrangulation()
        .map_err(|e| Error::NotDiskQuadrangulation(e.to_string()))
}

fn check_boundary(g: &EmbeddedGraph, psi: &Coloring) -> Result<()> {
    for c in g.cuffs() {
        for i in 0..c.len() {
            let (u, v) = (c[i], c[(i + 1) % c.len()]);
            match (psi.get(u), psi.get(v)) {
                (Some(a), Some(b)) if a != b && (1..=3).contains(&a) => {}
                (None, _) => return Err(Error::ImproperBoundary(format!("vertex {u} uncolored"))),
                _ => return Err(Error::ImproperBoundary(format!("edge {u}-{v}"))),
            }
        }
    }
    Ok(())
}

/// Builds the split dual; the boundary coloring must have winding number 0.
pub fn build_split_dual(g: &EmbeddedGraph, psi: &Coloring) -> Result<SplitDual> {
    check_disk(g)?;
    check_boundary(g, psi)?;
    let n = g.orientation_normalize()?;
    let t = n.faces();
    let b = clockwise_orbit(&n, t.cuff_orbit(0));
    let boundary = t.orbit_walk(&n, b);
    let w = winding(psi, &boundary)?;
    if w != 0 {
        return Err(Error::NonzeroWinding(w));
    }
    let mut orbit_node = vec![usize::MAX; t.orbit_count()];
    for (i, &f) in t.faces().iter().enumerate() {
        orbit_node[f] = i;
        orbit_node[t.orbit(f).reverse] = i;
    }
    let (s_node, t_node) = (t.face_count(), t.face_count() + 1);
    let mut in_s = vec![None; n.edge_count()];
    let (mut s_edges, mut t_edges) = (Vec::new(), Vec::new());
    for d in &boundary.darts {
        let plus = delta_edge(psi, n.tail(*d), n.head(*d))? == 1;
        in_s[d.edge] = Some(plus);
        if plus {
            s_edges.push(d.edge);
        } else {
            t_edges.push(d.edge);
        }
    }
    let node = |o: usize, e: EdgeId| -> usize {
        if orbit_node[o] != usize::MAX {
            orbit_node[o]
        } else if in_s[e] == Some(true) {
            s_node
        } else {
            t_node
        }
    };
    let edges = (0..n.edge_count())
        .map(|e| {
            let x = t.state_orbit(State::new(Dart::first(e), false));
            let y = t.state_orbit(State::new(Dart::second(e), false));
            (node(x, e), node(y, e))
        })
        .collect();
    if s_edges.len() != t_edges.len() {
        return Err(Error::Internal("|S| differs from |T| at winding 0".into()));
    }
    let node_count = t.face_count() + 2;
    Ok(SplitDual {
        graph: n,
        node_count,
        s: s_node,
        t: t_node,
        edges,
        boundary,
        s_edges,
        t_edges,
        orbit_node,
    })
}

/// Maximum number of edge-disjoint `s`-`t` paths, capped at `|S|`.
pub fn max_edge_disjoint_paths(d: &SplitDual) -> UnitFlow {
    max_flow(d.node_count, &d.edges, d.s, d.t, Some(d.s_edges.len()))
}

/// Turns a saturating flow into a coloring extending `psi`.
pub fn flow_to_coloring(d: &SplitDual, psi: &Coloring, flow: &UnitFlow) -> Result<Coloring> {
    let g = &d.graph;
    let rest: Vec<usize> = (0..d.edges.len()).filter(|&e| flow.flow[e] == 0).collect();
    let rest_edges: Vec<(usize, usize)> = rest.iter().map(|&e| d.edges[e]).collect();
    let rest_fwd = euler_orientation(d.node_count, &rest_edges);
    let mut forward = vec![false; d.edges.len()];
    for e in 0..d.edges.len() {
        forward[e] = flow.flow[e] > 0;
    }
    for (i, &e) in rest.iter().enumerate() {
        forward[e] = rest_fwd[i];
    }
    // dual edge oriented away from the face traversing u -> v means +1 on (u, v)
    let mut color: Vec<Option<u8>> = vec![None; g.vertex_count()];
    let start = d.boundary.vertices[0];
    color[start] = psi.get(start);
    let adj = g.adjacency();
    let mut queue = VecDeque::from([start]);
    while let Some(u) = queue.pop_front() {
        let cu = color[u].unwrap_or(1);
        for &(v, e) in &adj[u] {
            let plus_uv = forward[e] == (g.edge(e).u == u);
            let cv = if plus_uv { next_color(cu) } else { prev_color(cu) };
            match color[v] {
                None => {
                    color[v] = Some(cv);
                    queue.push_back(v);
                }
                Some(c) if c != cv => return Err(Error::InconsistentFlow(Dart::first(e))),
                _ => {}
            }
        }
    }
    let out = Coloring::from_total(&color.iter().map(|c| c.unwrap_or(0)).collect::<Vec<_>>());
    for &v in &d.boundary.vertices {
        if out.get(v) != psi.get(v) {
            return Err(Error::Internal(format!("boundary vertex {v} recolored")));
        }
    }
    Ok(out)
}

fn side_stats(d: &SplitDual, side: &[bool]) -> (usize, usize) {
    let mut k = 0;
    let mut k0 = 0;
    for &(a, b) in &d.edges {
        if side[a] != side[b] {
            k += 1;
            if ![a, b].iter().any(|&x| x == d.s || x == d.t) {
                k0 += 1;
            }
        }
    }
    (k, k0)
}

fn side_components(d: &SplitDual, side: &[bool]) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); d.node_count];
    for &(a, b) in &d.edges {
        if side[a] == side[b] && a != d.s && a != d.t && b != d.s && b != d.t {
            adj[a].push(b);
            adj[b].push(a);
        }
    }
    let mut seen = vec![false; d.node_count];
    seen[d.s] = true;
    seen[d.t] = true;
    let mut comps = Vec::new();
    for r in 0..d.node_count {
        if seen[r] {
            continue;
        }
        seen[r] = true;
        let mut comp = vec![r];
        let mut i = 0;
        while i < comp.len() {
            let v = comp[i];
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    comp.push(w);
                }
            }
            i += 1;
        }
        comps.push(comp);
    }
    comps
}

/// Normalizes a small cut until it is spoke-shaped, then reads off the
/// spoke and its base.
pub fn extract_spoke_witness(d: &SplitDual, psi: &Coloring, flow: &UnitFlow) -> Result<SpokeWitness> {
    let limit = d.s_edges.len();
    let mut side = flow.source_side.clone();
    let (k, _) = side_stats(d, &side);
    if k >= limit || !side[d.s] || side[d.t] {
        return Err(Error::NotACut(format!("cut of size {k} with |S| = {limit}")));
    }
    loop {
        let (_, k0) = side_stats(d, &side);
        let mut next = None;
        for z in side_components(d, &side) {
            let on_s = side[z[0]];
            let mut flipped = side.clone();
            for &v in &z {
                flipped[v] = !on_s;
            }
            let mut only = vec![!on_s; d.node_count];
            only[d.s] = true;
            only[d.t] = false;
            for &v in &z {
                only[v] = on_s;
            }
            for cand in [flipped, only] {
                let (k2, k02) = side_stats(d, &cand);
                if k2 < limit && k02 < k0 {
                    next = Some(cand);
                    break;
                }
            }
            if next.is_some() {
                break;
            }
        }
        match next {
            Some(s) => side = s,
            None => break,
        }
    }
    let g = &d.graph;
    let k0: Vec<EdgeId> = (0..d.edges.len())
        .filter(|&e| {
            let (a, b) = d.edges[e];
            side[a] != side[b] && ![a, b].iter().any(|&x| x == d.s || x == d.t)
        })
        .collect();
    let spoke = order_path(g, &k0)
        .ok_or_else(|| Error::Internal("normalized cut is not spoke-shaped".into()))?;
    // base: boundary edges whose inner face lies on the source side
    let bw = &d.boundary;
    let m = bw.len();
    let in_q: Vec<bool> = bw
        .darts
        .iter()
        .map(|dart| {
            let e = dart.edge;
            let f = d
                .face_node(e, true)
                .or_else(|| d.face_node(e, false))
                .unwrap_or(d.t);
            side[f]
        })
        .collect();
    let start = (0..m)
        .find(|&i| in_q[i] && !in_q[(i + m - 1) % m])
        .ok_or_else(|| Error::Internal("base is empty or the whole boundary".into()))?;
    let mut base = vec![bw.vertices[start]];
    let mut i = start;
    while in_q[i % m] && base.len() <= m {
        base.push(bw.vertices[(i + 1) % m]);
        i += 1;
    }
    let w = orient_witness(spoke, base, psi)?;
    if !w.verify(g, psi) {
        return Err(Error::Internal("extracted spoke does not violate the condition".into()));
    }
    Ok(w)
}

fn orient_witness(mut spoke: Vec<Vertex>, base: Vec<Vertex>, psi: &Coloring) -> Result<SpokeWitness> {
    let (b0, b1) = (base[0], base[base.len() - 1]);
    if spoke[0] != b0 {
        spoke.reverse();
    }
    if spoke[0] != b0 || spoke[spoke.len() - 1] != b1 {
        return Err(Error::Internal("spoke and base endpoints differ".into()));
    }
    let delta_base = delta_path(psi, &base)?;
    Ok(SpokeWitness {
        spoke,
        base,
        delta_base,
    })
}

/// Orders an edge set forming a simple path; `None` otherwise.
fn order_path(g: &EmbeddedGraph, edges: &[EdgeId]) -> Option<Vec<Vertex>> {
    if edges.is_empty() {
        return None;
    }
    let mut inc: std::collections::BTreeMap<Vertex, Vec<EdgeId>> = Default::default();
    for &e in edges {
        inc.entry(g.edge(e).u).or_default().push(e);
        inc.entry(g.edge(e).v).or_default().push(e);
    }
    if inc.values().any(|v| v.len() > 2) {
        return None;
    }
    let ends: Vec<Vertex> = inc.iter().filter(|(_, v)| v.len() == 1).map(|(&k, _)| k).collect();
    if ends.len() != 2 {
        return None;
    }
    let mut path = vec![ends[0]];
    let mut used = BTreeSet::new();
    let mut cur = ends[0];
    while let Some(&e) = inc[&cur].iter().find(|e| !used.contains(*e)) {
        used.insert(e);
        cur = g.other_end(e, cur);
        path.push(cur);
    }
    (used.len() == edges.len()).then_some(path)
}

/// Direct search for a spoke violating the length condition: for each
/// pair of boundary vertices, a shortest interior path against both arcs.
pub fn find_violating_spoke(g: &EmbeddedGraph, psi: &Coloring) -> Option<SpokeWitness> {
    let b = g.cuff_walk(0);
    let m = b.len();
    let pos: std::collections::HashMap<Vertex, usize> =
        b.vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let b_edges = b.edge_set();
    let adj = g.adjacency();
    let mut best: Option<SpokeWitness> = None;
    for (ia, &a) in b.vertices.iter().enumerate() {
        let mut prev: Vec<Option<Vertex>> = vec![None; g.vertex_count()];
        let mut dist = vec![usize::MAX; g.vertex_count()];
        dist[a] = 0;
        let mut queue = VecDeque::from([a]);
        while let Some(v) = queue.pop_front() {
            if v != a && pos.contains_key(&v) {
                continue;
            }
            for &(w, e) in &adj[v] {
                if b_edges.contains(&e) || dist[w] != usize::MAX {
                    continue;
                }
                dist[w] = dist[v] + 1;
                prev[w] = Some(v);
                queue.push_back(w);
            }
        }
        for (ib, &bv) in b.vertices.iter().enumerate() {
            if ib == ia || dist[bv] == usize::MAX {
                continue;
            }
            let mut spoke = vec![bv];
            while let Some(p) = prev[*spoke.last().unwrap_or(&a)] {
                spoke.push(p);
            }
            spoke.reverse();
            let arc = |from: usize, to: usize| -> Vec<Vertex> {
                let len = (to + m - from) % m;
                (0..=len).map(|j| b.vertices[(from + j) % m]).collect()
            };
            let mut back = arc(ib, ia);
            back.reverse();
            for base in [arc(ia, ib), back] {
                let Ok(delta) = delta_path(psi, &base) else { continue };
                if (dist[bv] as i64) < delta.abs() {
                    let cand = SpokeWitness {
                        spoke: spoke.clone(),
                        base,
                        delta_base: delta,
                    };
                    let better = best.as_ref().is_none_or(|w| {
                        (cand.spoke_len(), cand.base.len()) < (w.spoke_len(), w.base.len())
                    });
                    if better {
                        best = Some(cand);
                    }
                }
            }
        }
    }
    best
}

/// Decides whether the boundary coloring of a quadrangulated disk extends.
pub fn solve_disk(g: &EmbeddedGraph, psi: &Coloring) -> Result<SolveResult> {
    check_disk(g)?;
    check_boundary(g, psi)?;
    let report = winding_report(g, psi)?;
    if !report.satisfied() {
        return Ok(SolveResult::No(Witness::WindingViolation(report)));
    }
    let d = build_split_dual(g, psi)?;
    let flow = max_edge_disjoint_paths(&d);
    if flow.value == d.s_edges.len() {
        let mut c = flow_to_coloring(&d, psi, &flow)?;
        for (v, col) in psi.assigned() {
            if v >= g.vertex_count() {
                c.set(v, col);
            }
        }
        return Ok(SolveResult::Yes(c));
    }
    let w = match extract_spoke_witness(&d, psi, &flow) {
        Ok(w) => w,
        Err(_) => find_violating_spoke(g, psi)
            .ok_or_else(|| Error::Internal("no spoke witness for a small cut".into()))?,
    };
    Ok(SolveResult::No(Witness::SpokeViolation(w)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::verify_coloring;
    use crate::testkit::{generate, oracle_solve, precolor, GeneratorSpec};

    fn disk33(colors: [u8; 8]) -> (EmbeddedGraph, Coloring) {
        let g = generate(&GeneratorSpec::GridDisk(3, 3)).unwrap();
        let psi = precolor(9, &g.cuffs()[0], &colors);
        (g, psi)
    }

    #[test]
    fn single_face() {
        let g = generate(&GeneratorSpec::GridDisk(2, 2)).unwrap();
        let psi = precolor(4, &g.cuffs()[0], &[1, 2, 1, 2]);
        let d = build_split_dual(&g, &psi).unwrap();
        assert_eq!((d.degree(d.s), d.degree(d.t)), (2, 2));
        assert_eq!(d.degree(0), 4);
        let f = max_edge_disjoint_paths(&d);
        assert_eq!(f.value, 2);
        let c = flow_to_coloring(&d, &psi, &f).unwrap();
        assert_eq!(c, psi);
    }

    #[test]
    fn alternating_boundary_extends() {
        let (g, psi) = disk33([1, 2, 1, 2, 1, 2, 1, 2]);
        let d = build_split_dual(&g, &psi).unwrap();
        assert_eq!((d.s_edges.len(), d.t_edges.len()), (4, 4));
        let r = solve_disk(&g, &psi).unwrap();
        let c = r.coloring().unwrap();
        assert!(verify_coloring(&g, c, &psi));
        assert!(matches!(c.get(4), Some(1) | Some(3)));
    }

    #[test]
    fn center_seeing_three_colors() {
        let (g, psi) = disk33([2, 1, 2, 3, 1, 2, 1, 3]);
        let d = build_split_dual(&g, &psi).unwrap();
        assert_eq!(d.s_edges.len(), 4);
        assert!(max_edge_disjoint_paths(&d).value < 4);
        let SolveResult::No(Witness::SpokeViolation(w)) = solve_disk(&g, &psi).unwrap() else {
            panic!("expected a spoke witness");
        };
        assert_eq!(w.spoke_len(), 2);
        assert_eq!(w.spoke[1], 4);
        assert_eq!(w.delta_base.abs(), 4);
        assert!(w.verify(&g, &psi));
        let f = max_edge_disjoint_paths(&d);
        assert!(extract_spoke_witness(&d, &psi, &f).unwrap().verify(&g, &psi));
    }

    #[test]
    fn nonzero_winding() {
        let (g, psi) = disk33([1, 2, 3, 1, 2, 3, 1, 2]);
        assert!(matches!(
            solve_disk(&g, &psi).unwrap(),
            SolveResult::No(Witness::WindingViolation(_))
        ));
        assert!(matches!(build_split_dual(&g, &psi), Err(Error::NonzeroWinding(_))));
    }

    #[test]
    fn rejects_non_disks() {
        let g = generate(&GeneratorSpec::GridCylinder(4, 3)).unwrap();
        assert!(matches!(
            solve_disk(&g, &Coloring::new(12)),
            Err(Error::NotDiskQuadrangulation(_))
        ));
        let (g, mut psi) = disk33([1, 2, 1, 2, 1, 2, 1, 2]);
        psi.set(1, 1);
        assert!(matches!(solve_disk(&g, &psi), Err(Error::ImproperBoundary(_))));
    }

    #[test]
    fn agrees_with_oracle_on_5x5_samples() {
        use rand::{Rng, SeedableRng};
        let g = generate(&GeneratorSpec::GridDisk(5, 5)).unwrap();
        let b = g.cuffs()[0].clone();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let mut tried = 0;
        while tried < 150 {
            let mut cols = vec![rng.gen_range(1..=3u8)];
            for _ in 1..b.len() {
                let last = *cols.last().unwrap();
                cols.push(if rng.gen_bool(0.5) { next_color(last) } else { prev_color(last) });
            }
            if cols[0] == cols[b.len() - 1] {
                continue;
            }
            let psi = precolor(25, &b, &cols);
            let r = solve_disk(&g, &psi).unwrap();
            let o = oracle_solve(&g, &psi);
            assert_eq!(r.is_yes(), o.is_yes(), "{cols:?}");
            match &r {
                SolveResult::Yes(c) => assert!(verify_coloring(&g, c, &psi)),
                SolveResult::No(Witness::SpokeViolation(w)) => {
                    assert!(w.verify(&g, &psi));
                    let d = build_split_dual(&g, &psi).unwrap();
                    let f = max_edge_disjoint_paths(&d);
                    let x = extract_spoke_witness(&d, &psi, &f).unwrap();
                    assert!(x.verify(&g, &psi));
                }
                _ => {}
            }
            tried += 1;
        }
    }
}
