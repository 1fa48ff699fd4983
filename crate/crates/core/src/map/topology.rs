use std::collections::{BTreeSet, VecDeque};

use super::cut::{cut_along, CuffOrigin, CutPiece};
use super::{ClosedWalk, EdgeId, EmbeddedGraph, Subgraph, Vertex};
use crate::error::{Error, Result};

pub const UNREACHABLE: usize = usize::MAX;

/// Breadth-first distances from a set of sources.
pub fn bfs_layers(g: &EmbeddedGraph, sources: &[Vertex]) -> Vec<usize> {
    let adj = g.adjacency();
    let mut dist = vec![UNREACHABLE; g.vertex_count()];
    let mut queue = VecDeque::new();
    for &s in sources {
        if dist[s] != 0 {
            dist[s] = 0;
            queue.push_back(s);
        }
    }
    while let Some(v) = queue.pop_front() {
        for &(w, _) in &adj[v] {
            if dist[w] == UNREACHABLE {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
        }
    }
    dist
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CycleClass {
    Contractible,
    /// Bounds a cylinder together with the given cuff.
    SurroundsCuff(usize),
    Essential,
}

/// Decides how a cycle sits in the surface by cutting along it.
pub fn classify_cycle(g: &EmbeddedGraph, c: &ClosedWalk) -> Result<CycleClass> {
    if !c.is_cycle() {
        return Err(Error::NotACycle(format!("{:?}", c.vertices)));
    }
    let (pieces, _) = cut_along(g, &c.edge_set())?;
    let hole_len = |p: &CutPiece, i: usize| p.graph.cuffs()[i].len();
    for p in &pieces {
        let s = p.graph.signature();
        if s.euler_genus == 0
            && p.cuff_origin == [CuffOrigin::New]
            && hole_len(p, 0) == c.len()
        {
            return Ok(CycleClass::Contractible);
        }
    }
    for p in &pieces {
        let s = p.graph.signature();
        if s.euler_genus != 0 || p.cuff_origin.len() != 2 {
            continue;
        }
        let holes = p.new_holes();
        let orig = p.original_cuffs();
        if holes.len() == 1 && orig.len() == 1 && hole_len(p, holes[0]) == c.len() {
            return Ok(CycleClass::SurroundsCuff(orig[0]));
        }
    }
    Ok(CycleClass::Essential)
}

fn subgraph_vertices(g: &EmbeddedGraph, h: &Subgraph) -> BTreeSet<Vertex> {
    h.iter().flat_map(|&e| [g.edge(e).u, g.edge(e).v]).collect()
}

/// True unless `h` lies in a disk or in a collar of a single cuff.
pub fn is_essential(g: &EmbeddedGraph, h: &Subgraph) -> Result<bool> {
    if h.is_empty() {
        return Ok(false);
    }
    if let Some(&e) = h.iter().find(|&&e| e >= g.edge_count()) {
        return Err(Error::NotSubgraph(e));
    }
    let verts = subgraph_vertices(g, h);
    let touched: Vec<usize> = (0..g.cuffs().len())
        .filter(|&i| g.cuffs()[i].iter().any(|v| verts.contains(v)))
        .collect();
    if touched.len() >= 2 {
        return Ok(true);
    }
    let mut cut = h.clone();
    for &i in &touched {
        cut.extend(g.cuff_walk(i).edge_set());
    }
    let (pieces, _) = cut_along(g, &cut)?;
    let chi = g.signature().euler_char;
    let c = g.cuffs().len();
    for p in &pieces {
        if p.new_holes().len() != 1 {
            continue;
        }
        let outside = c - p.original_cuffs().len();
        if outside > 1 {
            continue;
        }
        let chi_k = chi - p.euler_char();
        let b_k = 1 + outside as i64;
        if 2 - b_k - chi_k == 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

fn bfs_tree(adj: &[Vec<(Vertex, EdgeId)>], root: Vertex, max_depth: usize, blocked: &[bool])
    -> (Vec<usize>, Vec<Option<(Vertex, EdgeId)>>)
{
    let mut dist = vec![UNREACHABLE; adj.len()];
    let mut parent = vec![None; adj.len()];
    dist[root] = 0;
    let mut queue = VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        if dist[v] >= max_depth || (v != root && blocked[v]) {
            continue;
        }
        for &(w, e) in &adj[v] {
            if dist[w] == UNREACHABLE {
                dist[w] = dist[v] + 1;
                parent[w] = Some((v, e));
                queue.push_back(w);
            }
        }
    }
    (dist, parent)
}

fn tree_path(parent: &[Option<(Vertex, EdgeId)>], mut v: Vertex) -> Vec<EdgeId> {
    let mut out = Vec::new();
    while let Some((p, e)) = parent[v] {
        out.push(e);
        v = p;
    }
    out
}

fn candidate_key(h: &Subgraph) -> (usize, Vec<EdgeId>) {
    (h.len(), h.iter().copied().collect())
}

/// Smallest essential subgraph with at most `budget` edges.
///
/// Candidates are shortest paths between cuffs, fundamental cycles of
/// breadth-first trees, and paths leaving a cuff and returning to it.
/// Ties are broken by the sorted list of edge ids.
pub fn find_essential(g: &EmbeddedGraph, budget: usize) -> Result<Option<Subgraph>> {
    let adj = g.adjacency();
    let cuff_of = g.cuff_of_vertex();
    let on_cuff: Vec<bool> = cuff_of.iter().map(Option::is_some).collect();
    let none = vec![false; g.vertex_count()];
    let mut cands: BTreeSet<(usize, Vec<EdgeId>)> = BTreeSet::new();
    let mut push = |h: Subgraph| {
        if !h.is_empty() && h.len() <= budget {
            cands.insert(candidate_key(&h));
        }
    };
    // fundamental cycles
    for root in 0..g.vertex_count() {
        let (dist, parent) = bfs_tree(&adj, root, budget.div_ceil(2), &none);
        for (e, ed) in g.edges().iter().enumerate() {
            if dist[ed.u] == UNREACHABLE || dist[ed.v] == UNREACHABLE {
                continue;
            }
            if parent[ed.u].map(|p| p.1) == Some(e) || parent[ed.v].map(|p| p.1) == Some(e) {
                continue;
            }
            let a: Subgraph = tree_path(&parent, ed.u).into_iter().collect();
            let b: Subgraph = tree_path(&parent, ed.v).into_iter().collect();
            let mut h: Subgraph = a.symmetric_difference(&b).copied().collect();
            h.insert(e);
            push(h);
        }
    }
    // paths between cuffs and spokes back to the same cuff
    for (i, cuff) in g.cuffs().iter().enumerate() {
        for &s in cuff {
            let (dist, parent) = bfs_tree(&adj, s, budget, &on_cuff);
            for t in 0..g.vertex_count() {
                if t == s || dist[t] == UNREACHABLE || cuff_of[t].is_none() {
                    continue;
                }
                let path: Subgraph = tree_path(&parent, t).into_iter().collect();
                if cuff_of[t] != Some(i) || dist[t] >= 2 {
                    push(path);
                }
            }
        }
    }
    for (_, edges) in cands {
        let h: Subgraph = edges.into_iter().collect();
        if is_essential(g, &h)? {
            return Ok(Some(h));
        }
    }
    Ok(None)
}

/// A cut system reducing the surface to a single disk.
#[derive(Clone, Debug)]
pub struct NormalRepresentation {
    /// Edges cut along.
    pub h: Subgraph,
    /// The resulting disk.
    pub piece: CutPiece,
    /// Boundary walk of the disk.
    pub gamma: ClosedWalk,
}

impl NormalRepresentation {
    /// Vertex of the original graph behind each disk vertex.
    pub fn theta(&self) -> &[Vertex] {
        &self.piece.vertex_map
    }
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        let p = self.0[x];
        if p == x {
            return x;
        }
        let r = self.find(p);
        self.0[x] = r;
        r
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.0[ra] = rb;
        true
    }
}

/// Cuts the surface along a tree-cotree system plus every cuff.
pub fn normal_representation(g: &EmbeddedGraph) -> Result<NormalRepresentation> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let n = g.vertex_count();
    let adj = g.adjacency();
    let mut dsu = Dsu::new(n);
    let mut in_tree = vec![false; g.edge_count()];
    let mut cuff_edge = vec![false; g.edge_count()];
    for i in 0..g.cuffs().len() {
        let w = g.cuff_walk(i);
        for d in &w.darts {
            cuff_edge[d.edge] = true;
        }
        for d in &w.darts[..w.len() - 1] {
            let e = g.edge(d.edge);
            if dsu.union(e.u, e.v) {
                in_tree[d.edge] = true;
            }
        }
    }
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut queue = VecDeque::from([0]);
    while let Some(v) = queue.pop_front() {
        for &(w, e) in &adj[v] {
            if dsu.union(v, w) {
                in_tree[e] = true;
            }
            if !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    // depths in the tree
    let mut depth = vec![UNREACHABLE; n];
    let mut parent = vec![usize::MAX; n];
    depth[0] = 0;
    let mut queue = VecDeque::from([0]);
    while let Some(v) = queue.pop_front() {
        for &(w, e) in &adj[v] {
            if in_tree[e] && depth[w] == UNREACHABLE {
                depth[w] = depth[v] + 1;
                parent[w] = v;
                queue.push_back(w);
            }
        }
    }
    let loop_len = |mut a: Vertex, mut b: Vertex| {
        let mut len = 1;
        while a != b {
            if depth[a] >= depth[b] {
                a = parent[a];
            } else {
                b = parent[b];
            }
            len += 1;
        }
        len
    };
    let faces = g.faces();
    let mut face_index = vec![usize::MAX; faces.orbit_count()];
    for (i, &f) in faces.faces().iter().enumerate() {
        face_index[f] = i;
    }
    let mut dual: Vec<(usize, EdgeId)> = (0..g.edge_count())
        .filter(|&e| !in_tree[e] && !cuff_edge[e])
        .map(|e| (loop_len(g.edge(e).u, g.edge(e).v), e))
        .collect();
    dual.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    let mut fdsu = Dsu::new(faces.face_count());
    let mut cotree = vec![false; g.edge_count()];
    for (_, e) in dual {
        let [a, b] = faces.edge_sides(e);
        let (fa, fb) = (face_index[a], face_index[b]);
        if fa != usize::MAX && fb != usize::MAX && fdsu.union(fa, fb) {
            cotree[e] = true;
        }
    }
    let mut h: Subgraph = (0..g.edge_count()).filter(|&e| !cotree[e]).collect();
    let on_cuff: Vec<bool> = g.cuff_of_vertex().iter().map(Option::is_some).collect();
    loop {
        let mut deg = vec![0usize; n];
        for &e in &h {
            deg[g.edge(e).u] += 1;
            deg[g.edge(e).v] += 1;
        }
        let leaves: Vec<EdgeId> = h
            .iter()
            .copied()
            .filter(|&e| {
                let ed = g.edge(e);
                (deg[ed.u] == 1 && !on_cuff[ed.u]) || (deg[ed.v] == 1 && !on_cuff[ed.v])
            })
            .collect();
        if leaves.is_empty() {
            break;
        }
        for e in leaves {
            h.remove(&e);
        }
    }
    let (mut pieces, _) = cut_along(g, &h)?;
    if pieces.len() != 1 {
        return Err(Error::Internal(format!(
            "normal cut produced {} pieces",
            pieces.len()
        )));
    }
    let piece = pieces.remove(0);
    let s = piece.graph.signature();
    if !s.is_disk() || piece.cuff_origin != [CuffOrigin::New] {
        return Err(Error::Internal("normal cut is not a disk".into()));
    }
    let gamma = piece.graph.cuff_walk(0);
    Ok(NormalRepresentation { h, piece, gamma })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testkit::{generate, GeneratorSpec};

    #[test]
    fn classify_on_torus() {
        let g = generate(&GeneratorSpec::GridTorus(4, 4)).unwrap();
        let face = g.walk_from_vertices(&[0, 1, 5, 4]).unwrap();
        assert_eq!(classify_cycle(&g, &face).unwrap(), CycleClass::Contractible);
        let ring = g.walk_from_vertices(&[0, 1, 2, 3]).unwrap();
        assert_eq!(classify_cycle(&g, &ring).unwrap(), CycleClass::Essential);
    }

    #[test]
    fn classify_on_cylinder() {
        let g = generate(&GeneratorSpec::GridCylinder(4, 4)).unwrap();
        let ring = g.walk_from_vertices(&[4, 5, 6, 7]).unwrap();
        assert!(matches!(
            classify_cycle(&g, &ring).unwrap(),
            CycleClass::SurroundsCuff(_)
        ));
        let big = g.walk_from_vertices(&[4, 5, 9, 8]).unwrap();
        assert_eq!(classify_cycle(&g, &big).unwrap(), CycleClass::Contractible);
    }

    #[test]
    fn klein_seam_ring_is_essential() {
        let g = generate(&GeneratorSpec::GridKlein(4, 4)).unwrap();
        let ring = g.walk_from_vertices(&[0, 1, 2, 3]).unwrap();
        assert_eq!(classify_cycle(&g, &ring).unwrap(), CycleClass::Essential);
    }

    #[test]
    fn essential_subgraphs() {
        let g = generate(&GeneratorSpec::GridDisk(4, 4)).unwrap();
        assert_eq!(find_essential(&g, 12).unwrap(), None);
        let g = generate(&GeneratorSpec::GridTorus(4, 4)).unwrap();
        let h = find_essential(&g, 12).unwrap().unwrap();
        assert_eq!(h.len(), 4);
        let g = generate(&GeneratorSpec::GridCylinder(4, 3)).unwrap();
        let ring = g.walk_from_vertices(&[4, 5, 6, 7]).unwrap().edge_set();
        assert!(!is_essential(&g, &ring).unwrap());
        let rung = |a: Vertex, b: Vertex| {
            g.edges().iter().position(|e| (e.u, e.v) == (a, b) || (e.v, e.u) == (a, b)).unwrap()
        };
        let path: Subgraph = [rung(0, 4), rung(4, 8)].into_iter().collect();
        assert!(is_essential(&g, &path).unwrap());
        let half: Subgraph = [rung(0, 4)].into_iter().collect();
        assert!(!is_essential(&g, &half).unwrap());
        let g = generate(&GeneratorSpec::GridCylinder(4, 5)).unwrap();
        let h = find_essential(&g, 10).unwrap().unwrap();
        assert_eq!(h.len(), 4);
    }

    #[test]
    fn normal_representation_shapes() {
        let g = generate(&GeneratorSpec::GridDisk(3, 4)).unwrap();
        let nr = normal_representation(&g).unwrap();
        assert_eq!(nr.h, g.cuff_walk(0).edge_set());
        assert_eq!(nr.theta(), (0..12).collect::<Vec<_>>().as_slice());

        let g = generate(&GeneratorSpec::GridTorus(4, 4)).unwrap();
        let nr = normal_representation(&g).unwrap();
        assert_eq!(nr.gamma.len(), 16);

        let g = generate(&GeneratorSpec::GridCylinder(4, 3)).unwrap();
        let nr = normal_representation(&g).unwrap();
        let b1 = g.cuff_walk(0).edge_set();
        let b2 = g.cuff_walk(1).edge_set();
        assert!(nr.h.is_superset(&b1) && nr.h.is_superset(&b2));
        assert_eq!(nr.h.len(), 8 + 2);
    }

    #[test]
    fn bfs_layers_on_grid() {
        let g = generate(&GeneratorSpec::GridCylinder(4, 5)).unwrap();
        let d = bfs_layers(&g, &g.cuffs()[0]);
        assert_eq!(d[19], 4);
    }
}
