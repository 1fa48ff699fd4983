use std::collections::{BTreeSet, VecDeque};

use super::Cylinder;
use super::solve_cylinder;
use crate::coloring::{is_tame, verify_coloring, winding_report, Color, Coloring};
use crate::result::SolveResult;
use crate::testkit::proper_cycle_colorings;
use crate::error::{Error, Result};
use crate::flow::max_flow;
use crate::map::{bfs_layers, cut_along, ClosedWalk, Dart, EdgeId, EmbeddedGraph, State, Vertex};

fn separates(g: &EmbeddedGraph, x: &BTreeSet<Vertex>) -> bool {
    let adj = g.adjacency();
    let b2: BTreeSet<Vertex> = g.cuffs()[1].iter().copied().collect();
    let mut seen = vec![false; g.vertex_count()];
    let mut queue: VecDeque<Vertex> = g.cuffs()[0].iter().copied().filter(|v| !x.contains(v)).collect();
    for &v in &queue {
        seen[v] = true;
    }
    while let Some(v) = queue.pop_front() {
        if b2.contains(&v) {
            return false;
        }
        for &(w, _) in &adj[v] {
            if !seen[w] && !x.contains(&w) {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    true
}

/// A shortest non-contractible cycle whose vertices outside `x` are
/// pairwise non-adjacent on it, each lying between two vertices of `x`
/// on a common face.
pub fn layer_cycle(g: &EmbeddedGraph, x: &[Vertex]) -> Result<ClosedWalk> {
    let cyl = Cylinder::new(g)?;
    let xs: BTreeSet<Vertex> = x.iter().copied().collect();
    if !separates(&cyl.g, &xs) {
        return Err(Error::NotSeparating);
    }
    let t = cyl.g.faces();
    let mut keep = vec![false; cyl.g.edge_count()];
    for &f in t.faces() {
        let states = &t.orbit(f).states;
        let vs = t.orbit_vertices(&cyl.g, f);
        let n = vs.len();
        for j in 0..n {
            let (p, q) = (vs[j], vs[(j + 1) % n]);
            let (pr, qr) = (vs[(j + 2) % n], vs[(j + n - 1) % n]);
            let (px, qx) = (xs.contains(&p), xs.contains(&q));
            if (px && qx) || (px && xs.contains(&pr)) || (qx && xs.contains(&qr)) {
                keep[states[j].dart.edge] = true;
            }
        }
    }
    cyl.shortest_noncontractible(|e| keep[e]).ok_or(Error::NotSeparating)
}

/// Extends a coloring of `B1` to the whole cylinder so that the result is
/// `(k, d)`-tame on `B2`, where `k = |B1|`.
///
/// The coloring follows `k` edge-disjoint dual paths from `B1` to `B2`:
/// every vertex is labelled by how many paths separate it from the first
/// vertex of `B1` (modulo `k`), and colored from the label and a 2-coloring.
/// When no fence system gives a tame result, every tame coloring of `B2`
/// is tried with the exact cylinder solver.
pub fn tame_extend(g: &EmbeddedGraph, psi: &Coloring, d: usize) -> Result<Coloring> {
    let cyl = Cylinder::new(g)?;
    let g = &cyl.g;
    g.check_quadrangulation().map_err(|e| Error::NotCylinder(e.to_string()))?;
    let b1 = cyl.cuff(0);
    let b2 = cyl.cuff(1);
    let k = b1.len();
    if !b1.is_cycle() {
        return Err(Error::NotACycle(format!("{:?}", b1.vertices)));
    }
    for i in 0..k {
        let (u, v) = (b1.vertices[i], b1.vertices[(i + 1) % k]);
        match (psi.get(u), psi.get(v)) {
            (Some(a), Some(b)) if a != b => {}
            _ => return Err(Error::ImproperBoundary(format!("edge {u}-{v}"))),
        }
    }
    if let Some(c) = cyl.shortest_noncontractible(|_| true) {
        if c.len() < k {
            return Err(Error::PreconditionViolated(format!(
                "non-contractible cycle {:?} of length {} is shorter than |B1| = {k}",
                c.vertices,
                c.len()
            )));
        }
    }
    let dist = bfs_layers(g, &b1.vertices);
    let gap = b2.vertices.iter().map(|&v| dist[v]).min().unwrap_or(0);
    if gap < 3 * k + 5 {
        let which = if gap < 3 * k + 4 { "3k+4" } else { "3k+5" };
        return Err(Error::PreconditionViolated(format!(
            "distance {gap} between B1 and B2 is below {which} = {}",
            if which == "3k+4" { 3 * k + 4 } else { 3 * k + 5 }
        )));
    }
    let m = b2.len();
    let mut last = String::from("no fence system of size |B1|");
    let mut fallback = None;
    for offset in 0..m {
        let t_pos: BTreeSet<usize> = (0..k).map(|j| (offset + j * m / k) % m).collect();
        if t_pos.len() < k {
            break;
        }
        let t_edges: BTreeSet<EdgeId> = t_pos.iter().map(|&p| b2.darts[p].edge).collect();
        let Some(cross) = fence_crossings(&cyl, &b2, &t_edges, k) else { continue };
        let phi = color_from_crossings(g, &b1, psi, &cross, k)?;
        if !verify_coloring(g, &phi, &psi.restrict(b1.vertices.iter().copied())) {
            return Err(Error::Internal("fence coloring is not proper".into()));
        }
        if is_tame(&phi, &b2.vertices, d, k)? {
            return Ok(phi);
        }
        last = format!("coloring of B2 is not ({k},{d})-tame for offset {offset}");
        fallback.get_or_insert(phi);
    }
    let found = match fallback {
        Some(phi) => retarget_near_b2(g, &phi, &b2, d, k)?,
        None => None,
    };
    match found {
        Some(c) => Ok(c),
        None => tame_by_search(g, psi, &b2, d, k)?
            .ok_or_else(|| Error::PreconditionViolated(format!("{last}; no tame coloring of B2 extends"))),
    }
}

/// Tame colorings of `B2` in lexicographic order.
fn tame_targets(b2: &ClosedWalk, n: usize, d: usize, k: usize) -> Vec<Vec<Color>> {
    proper_cycle_colorings(b2.len())
        .into_iter()
        .filter(|colors| {
            let c = Coloring::from_pairs(n, b2.vertices.iter().copied().zip(colors.iter().copied()));
            matches!(is_tame(&c, &b2.vertices, d, k), Ok(true))
        })
        .collect()
}

/// Keeps `phi` beyond a layer cycle near `B2` and recolors the band between
/// that cycle and `B2` towards a tame target, widening the band on failure.
fn retarget_near_b2(g: &EmbeddedGraph, phi: &Coloring, b2: &ClosedWalk, d: usize, k: usize) -> Result<Option<Coloring>> {
    let n = g.vertex_count();
    let targets = tame_targets(b2, n, d, k);
    let dist = bfs_layers(g, &b2.vertices);
    let far = g.cuffs()[0].iter().map(|&v| dist[v]).min().unwrap_or(0);
    let mut r = 2 * b2.len();
    while r < far {
        let layer: Vec<Vertex> = (0..n).filter(|&v| dist[v] == r).collect();
        if let Ok(c) = layer_cycle(g, &layer) {
            let (pieces, _) = cut_along(g, &c.edge_set())?;
            let b2_set: BTreeSet<Vertex> = b2.vertices.iter().copied().collect();
            let band = pieces.iter().find(|p| {
                p.graph.signature().is_cylinder() && p.vertex_map.iter().any(|v| b2_set.contains(v))
            });
            if let Some(band) = band {
                let ring: BTreeSet<Vertex> = c.vertices.iter().copied().collect();
                for colors in &targets {
                    let mut pre = Coloring::new(band.graph.vertex_count());
                    for (i, &v) in band.vertex_map.iter().enumerate() {
                        if let Some(j) = b2.vertices.iter().position(|&w| w == v) {
                            pre.set(i, colors[j]);
                        } else if let Some(col) = phi.get(v).filter(|_| ring.contains(&v)) {
                            pre.set(i, col);
                        }
                    }
                    if !winding_report(&band.graph, &pre).map(|w| w.satisfied()).unwrap_or(false) {
                        continue;
                    }
                    if let SolveResult::Yes(sol) = solve_cylinder(&band.graph, &pre)? {
                        let mut out = phi.clone();
                        for (i, col) in sol.assigned() {
                            out.set(band.vertex_map[i], col);
                        }
                        if verify_coloring(g, &out, &phi.restrict(g.cuffs()[0].iter().copied())) {
                            return Ok(Some(out));
                        }
                    }
                }
            }
        }
        r *= 2;
    }
    Ok(None)
}

/// Tries every tame coloring of `B2` whose winding is compatible, deciding
/// each with the exact cylinder solver on the whole cylinder.
fn tame_by_search(g: &EmbeddedGraph, psi: &Coloring, b2: &ClosedWalk, d: usize, k: usize) -> Result<Option<Coloring>> {
    let base = psi.restrict(g.cuffs()[0].iter().copied());
    for colors in tame_targets(b2, g.vertex_count(), d, k) {
        let mut full = base.clone();
        for (&v, &c) in b2.vertices.iter().zip(&colors) {
            full.set(v, c);
        }
        if !winding_report(g, &full).map(|r| r.satisfied()).unwrap_or(false) {
            continue;
        }
        if let SolveResult::Yes(c) = solve_cylinder(g, &full)? {
            return Ok(Some(c));
        }
    }
    Ok(None)
}

/// Signed crossing of every edge by `k` edge-disjoint dual paths from the
/// `B1` face to the `B2` face entering it through `t_edges`: `+1` when a
/// path leaves the face traversing the edge from its first endpoint.
fn fence_crossings(cyl: &Cylinder, b2: &ClosedWalk, t_edges: &BTreeSet<EdgeId>, k: usize) -> Option<Vec<i64>> {
    let g = &cyl.g;
    let t = g.faces();
    let sink = t.orbit_count();
    let dead = sink + 1;
    let b2_edges = b2.edge_set();
    let side = |d: Dart| t.pair_of(t.state_orbit(State::new(d, false)));
    let edges: Vec<(usize, usize)> = (0..g.edge_count())
        .map(|e| {
            let (a, b) = (side(Dart::first(e)), side(Dart::second(e)));
            if !b2_edges.contains(&e) {
                (a, b)
            } else if t_edges.contains(&e) {
                (
                    if a == cyl.b2 { sink } else { a },
                    if b == cyl.b2 { sink } else { b },
                )
            } else {
                (dead, dead)
            }
        })
        .collect();
    let f = max_flow(dead + 1, &edges, cyl.b1, sink, Some(k));
    (f.value == k).then(|| f.flow.iter().map(|&x| i64::from(x)).collect())
}

fn color_from_crossings(
    g: &EmbeddedGraph,
    b1: &ClosedWalk,
    psi: &Coloring,
    cross: &[i64],
    k: usize,
) -> Result<Coloring> {
    let n = g.vertex_count();
    let kk = k as i64;
    let adj = g.adjacency();
    let step = |u: Vertex, e: EdgeId| if g.edge(e).u == u { cross[e] } else { -cross[e] };
    let mut pot: Vec<Option<i64>> = vec![None; n];
    let root = b1.vertices[0];
    pot[root] = Some(0);
    let mut queue = VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        let pu = pot[u].unwrap_or(0);
        for &(w, e) in &adj[u] {
            let pw = (pu + step(u, e)).rem_euclid(kk);
            match pot[w] {
                None => {
                    pot[w] = Some(pw);
                    queue.push_back(w);
                }
                Some(x) if x != pw => return Err(Error::Internal("fence potential is inconsistent".into())),
                _ => {}
            }
        }
    }
    let pot: Vec<i64> = pot.into_iter().map(|p| p.unwrap_or(0)).collect();
    let sign = if pot[b1.vertices[1]] == 1 % kk { 1 } else { -1 };
    let label: Vec<usize> = pot.iter().map(|&p| (sign * p).rem_euclid(kk) as usize + 1).collect();
    let mut order = vec![0; k + 1];
    for &v in &b1.vertices {
        order[label[v]] = v;
    }
    if (1..=k).any(|i| b1.vertices.iter().filter(|&&v| label[v] == i).count() != 1) {
        return Err(Error::Internal("B1 is not labelled 1..k".into()));
    }
    let wrap = |u: Vertex, v: Vertex, e: EdgeId| {
        k % 2 == 1 && cross[e] != 0 && label[u].min(label[v]) == 1 && label[u].max(label[v]) == k
    };
    let mut iota: Vec<Option<u8>> = vec![None; n];
    iota[order[1]] = Some(1);
    let mut queue = VecDeque::from([order[1]]);
    while let Some(u) = queue.pop_front() {
        let iu = iota[u].unwrap_or(1);
        for &(w, e) in &adj[u] {
            let iw = if wrap(u, w, e) { iu } else { 3 - iu };
            match iota[w] {
                None => {
                    iota[w] = Some(iw);
                    queue.push_back(w);
                }
                Some(x) if x != iw => return Err(Error::Internal("auxiliary graph is not bipartite".into())),
                _ => {}
            }
        }
    }
    let col = |v: Vertex| psi.get(v).unwrap_or(1);
    let f = |i: usize, c: u8| -> Color {
        if i % 2 == usize::from(c) % 2 {
            col(order[i])
        } else {
            col(order[if i == 1 { k } else { i - 1 }])
        }
    };
    let colors: Vec<Color> = (0..n).map(|v| f(label[v], iota[v].unwrap_or(1))).collect();
    Ok(Coloring::from_total(&colors))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map::{classify_cycle, CycleClass};
    use crate::testkit::{generate, precolor, GeneratorSpec};

    #[test]
    fn layer_of_a_ring() {
        let g = generate(&GeneratorSpec::GridCylinder(4, 5)).unwrap();
        let c = layer_cycle(&g, &[8, 9, 10, 11]).unwrap();
        let vs: BTreeSet<_> = c.vertices.iter().copied().collect();
        assert_eq!(vs, BTreeSet::from([8, 9, 10, 11]));
    }

    #[test]
    fn layer_through_a_detour() {
        // ring 2 with vertex 8 replaced by its neighbours 4 and 12 on the adjacent rings
        let g = generate(&GeneratorSpec::GridCylinder(4, 5)).unwrap();
        let x = [9, 10, 11, 4, 12];
        let c = layer_cycle(&g, &x).unwrap();
        assert!(c.is_cycle());
        assert!(c.len() <= 2 * x.len());
        assert_ne!(classify_cycle(&g, &c).unwrap(), CycleClass::Contractible);
        let n = c.len();
        for i in 0..n {
            let (a, b) = (c.vertices[i], c.vertices[(i + 1) % n]);
            assert!(x.contains(&a) || x.contains(&b));
        }
    }

    #[test]
    fn whole_vertex_set_gives_a_shortest_cycle() {
        let g = generate(&GeneratorSpec::GridCylinder(5, 3)).unwrap();
        let all: Vec<_> = (0..15).collect();
        assert_eq!(layer_cycle(&g, &all).unwrap().len(), 5);
        assert!(matches!(layer_cycle(&g, &[5, 6]), Err(Error::NotSeparating)));
    }

    #[test]
    fn tame_on_tall_grid() {
        let g = generate(&GeneratorSpec::GridCylinder(4, 20)).unwrap();
        for cols in [[1, 2, 1, 2], [1, 2, 3, 2], [3, 1, 2, 1]] {
            let psi = precolor(80, &g.cuffs()[0], &cols);
            let phi = tame_extend(&g, &psi, 1).unwrap();
            assert!(verify_coloring(&g, &phi, &psi));
            assert!(is_tame(&phi, &g.cuffs()[1], 1, 4).unwrap());
        }
    }

    #[test]
    fn odd_boundary() {
        let g = generate(&GeneratorSpec::GridCylinder(5, 24)).unwrap();
        let psi = precolor(120, &g.cuffs()[0], &[1, 2, 1, 2, 3]);
        let phi = tame_extend(&g, &psi, 1).unwrap();
        assert!(verify_coloring(&g, &phi, &psi));
    }

    #[test]
    fn short_cylinder_is_rejected() {
        let g = generate(&GeneratorSpec::GridCylinder(4, 2)).unwrap();
        let psi = precolor(8, &g.cuffs()[0], &[1, 2, 1, 2]);
        assert!(matches!(tame_extend(&g, &psi, 1), Err(Error::PreconditionViolated(_))));
    }

    #[test]
    fn band_is_recolored_for_long_paths() {
        let g = generate(&GeneratorSpec::GridCylinder(4, 40)).unwrap();
        let b1 = g.cuffs()[0].clone();
        let psi = precolor(g.vertex_count(), &b1, &[1, 2, 1, 3]);
        let out = tame_extend(&g, &psi, 2).unwrap();
        assert!(verify_coloring(&g, &out, &psi));
        assert!(is_tame(&out, &g.cuffs()[1], 2, 4).unwrap());
    }

    #[test]
    fn winding_two_has_no_tame_extension() {
        let g = generate(&GeneratorSpec::GridCylinder(6, 30)).unwrap();
        let psi = precolor(g.vertex_count(), &g.cuffs()[0], &[1, 2, 3, 1, 2, 3]);
        assert!(matches!(tame_extend(&g, &psi, 1), Err(Error::PreconditionViolated(_))));
    }
}
