//! Signed rotation systems for graphs embedded in surfaces with boundary.
//!
//! An [`EmbeddedGraph`] stores, for every vertex, the cyclic order of the
//! darts around it, plus a sign per edge. Face tracing follows the usual
//! rule for generalized rotation systems: every negative edge flips the
//! local orientation. Cuffs (boundary circles) are modelled as marked face
//! orbits, so the rotation system always describes the closed surface
//! obtained by patching each cuff with a disk.

mod cut;
mod faces;
mod topology;

pub use cut::{cut_along, CuffOrigin, CutPiece, GluingLedger};
pub use faces::{trace_faces, FaceTable, Orbit, State, SurfaceSignature};
pub use topology::{
    bfs_layers, classify_cycle, find_essential, is_essential, normal_representation,
    CycleClass, NormalRepresentation, UNREACHABLE,
};

use std::collections::BTreeSet;

use crate::error::{Error, Result};

pub type Vertex = usize;
pub type EdgeId = usize;

/// Which endpoint of its edge a dart sits at.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum End {
    First,
    Second,
}

/// Half of an edge, anchored at one endpoint.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Dart {
    pub edge: EdgeId,
    pub end: End,
}

impl Dart {
    pub fn new(edge: EdgeId, end: End) -> Self {
        Dart { edge, end }
    }

    pub fn first(edge: EdgeId) -> Self {
        Dart::new(edge, End::First)
    }

    pub fn second(edge: EdgeId) -> Self {
        Dart::new(edge, End::Second)
    }

    pub fn index(self) -> usize {
        2 * self.edge + usize::from(self.end == End::Second)
    }

    pub fn from_index(i: usize) -> Self {
        Dart::new(i / 2, if i % 2 == 0 { End::First } else { End::Second })
    }

    /// The dart at the other end of the same edge.
    pub fn twin(self) -> Self {
        match self.end {
            End::First => Dart::second(self.edge),
            End::Second => Dart::first(self.edge),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Pos,
    Neg,
}

impl Sign {
    pub fn flip(self) -> Self {
        match self {
            Sign::Pos => Sign::Neg,
            Sign::Neg => Sign::Pos,
        }
    }

    pub fn is_neg(self) -> bool {
        self == Sign::Neg
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub u: Vertex,
    pub v: Vertex,
    pub sign: Sign,
}

/// A closed walk given at dart level; `darts[i]` leaves `vertices[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedWalk {
    pub vertices: Vec<Vertex>,
    pub darts: Vec<Dart>,
}

impl ClosedWalk {
    pub fn len(&self) -> usize {
        self.darts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.darts.is_empty()
    }

    pub fn edge_set(&self) -> BTreeSet<EdgeId> {
        self.darts.iter().map(|d| d.edge).collect()
    }

    /// True when no vertex repeats (and the walk is nonempty).
    pub fn is_cycle(&self) -> bool {
        let set: BTreeSet<_> = self.vertices.iter().collect();
        !self.vertices.is_empty()
            && set.len() == self.vertices.len()
            && self.edge_set().len() == self.darts.len()
    }

    pub fn reversed(&self, g: &EmbeddedGraph) -> ClosedWalk {
        let n = self.len();
        let mut vertices = Vec::with_capacity(n);
        let mut darts = Vec::with_capacity(n);
        for i in (0..n).rev() {
            let d = self.darts[i].twin();
            darts.push(d);
            vertices.push(g.tail(d));
        }
        ClosedWalk { vertices, darts }
    }
}

/// A set of edges, identified by id so parallel edges stay distinct.
pub type Subgraph = BTreeSet<EdgeId>;

/// Graph with a signed rotation system and marked cuff orbits.
#[derive(Clone, Debug)]
pub struct EmbeddedGraph {
    vertex_count: usize,
    edges: Vec<Edge>,
    rotations: Vec<Vec<Dart>>,
    cuffs: Vec<Vec<Vertex>>,
    // dart index -> position inside the rotation of its vertex
    position: Vec<usize>,
    faces: FaceTable,
}

impl PartialEq for EmbeddedGraph {
    fn eq(&self, other: &Self) -> bool {
        self.vertex_count == other.vertex_count
            && self.edges == other.edges
            && self.rotations == other.rotations
            && self.cuffs == other.cuffs
    }
}

impl EmbeddedGraph {
    /// Validates the rotation system and the declared cuff walks.
    pub fn new(
        vertex_count: usize,
        edges: Vec<Edge>,
        rotations: Vec<Vec<Dart>>,
        cuffs: Vec<Vec<Vertex>>,
    ) -> Result<Self> {
        if rotations.len() != vertex_count {
            return Err(Error::MalformedRotation(format!(
                "{} rotations for {} vertices",
                rotations.len(),
                vertex_count
            )));
        }
        for (i, e) in edges.iter().enumerate() {
            if e.u >= vertex_count || e.v >= vertex_count {
                return Err(Error::MalformedRotation(format!(
                    "edge {i} has an endpoint out of range"
                )));
            }
            if e.u == e.v {
                return Err(Error::LoopEdge(i));
            }
        }
        let mut position = vec![usize::MAX; 2 * edges.len()];
        for (v, rot) in rotations.iter().enumerate() {
            for (pos, d) in rot.iter().enumerate() {
                if d.edge >= edges.len() {
                    return Err(Error::MalformedRotation(format!(
                        "dart {d:?} at vertex {v} names a missing edge"
                    )));
                }
                let e = edges[d.edge];
                let at = match d.end {
                    End::First => e.u,
                    End::Second => e.v,
                };
                if at != v {
                    return Err(Error::MalformedRotation(format!(
                        "dart {d:?} listed at vertex {v} but belongs to {at}"
                    )));
                }
                if position[d.index()] != usize::MAX {
                    return Err(Error::MalformedRotation(format!("dart {d:?} listed twice")));
                }
                position[d.index()] = pos;
            }
        }
        if let Some(i) = position.iter().position(|&p| p == usize::MAX) {
            return Err(Error::MalformedRotation(format!(
                "dart {:?} missing from rotations",
                Dart::from_index(i)
            )));
        }
        let mut g = EmbeddedGraph {
            vertex_count,
            edges,
            rotations,
            cuffs,
            position,
            faces: FaceTable::default(),
        };
        g.faces = FaceTable::trace(&g, None)?;
        Ok(g)
    }

    /// Builds an embedding whose cuffs are the orbits through the given states.
    pub(crate) fn from_cuff_states(
        vertex_count: usize,
        edges: Vec<Edge>,
        rotations: Vec<Vec<Dart>>,
        cuff_states: &[State],
    ) -> Result<Self> {
        let mut g = EmbeddedGraph::new(vertex_count, edges, rotations, Vec::new())?;
        let cuffs = cuff_states
            .iter()
            .map(|&s| g.faces.orbit_vertices(&g, g.faces.state_orbit(s)))
            .collect();
        g.cuffs = cuffs;
        g.faces = FaceTable::trace(&g, Some(cuff_states))?;
        Ok(g)
    }

    /// Same rotation system with a different set of cuff walks.
    pub fn with_cuffs(&self, cuffs: Vec<Vec<Vertex>>) -> Result<Self> {
        EmbeddedGraph::new(
            self.vertex_count,
            self.edges.clone(),
            self.rotations.clone(),
            cuffs,
        )
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> Edge {
        self.edges[e]
    }

    pub fn rotation(&self, v: Vertex) -> &[Dart] {
        &self.rotations[v]
    }

    pub fn rotations(&self) -> &[Vec<Dart>] {
        &self.rotations
    }

    pub fn cuffs(&self) -> &[Vec<Vertex>] {
        &self.cuffs
    }

    pub fn faces(&self) -> &FaceTable {
        &self.faces
    }

    pub fn tail(&self, d: Dart) -> Vertex {
        let e = self.edges[d.edge];
        match d.end {
            End::First => e.u,
            End::Second => e.v,
        }
    }

    pub fn head(&self, d: Dart) -> Vertex {
        self.tail(d.twin())
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.rotations[v].len()
    }

    pub(crate) fn position(&self, d: Dart) -> usize {
        self.position[d.index()]
    }

    pub fn succ(&self, d: Dart) -> Dart {
        let rot = &self.rotations[self.tail(d)];
        rot[(self.position(d) + 1) % rot.len()]
    }

    pub fn pred(&self, d: Dart) -> Dart {
        let rot = &self.rotations[self.tail(d)];
        rot[(self.position(d) + rot.len() - 1) % rot.len()]
    }

    /// Neighbours of `v` in rotation order (with repetition for parallel edges).
    pub fn neighbors(&self, v: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        self.rotations[v].iter().map(move |&d| self.head(d))
    }

    pub fn other_end(&self, e: EdgeId, v: Vertex) -> Vertex {
        let ed = self.edges[e];
        if ed.u == v {
            ed.v
        } else {
            ed.u
        }
    }

    /// Vertices of all cuff walks.
    pub fn boundary_vertices(&self) -> BTreeSet<Vertex> {
        self.cuffs.iter().flatten().copied().collect()
    }

    /// Cuff index of every boundary vertex.
    pub fn cuff_of_vertex(&self) -> Vec<Option<usize>> {
        let mut out = vec![None; self.vertex_count];
        for (i, c) in self.cuffs.iter().enumerate() {
            for &v in c {
                out[v] = Some(i);
            }
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        if self.vertex_count == 0 {
            return true;
        }
        let mut seen = vec![false; self.vertex_count];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for w in self.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Plain adjacency lists: `(neighbour, edge id)` per vertex.
    pub fn adjacency(&self) -> Vec<Vec<(Vertex, EdgeId)>> {
        let mut adj = vec![Vec::new(); self.vertex_count];
        for (i, e) in self.edges.iter().enumerate() {
            adj[e.u].push((e.v, i));
            adj[e.v].push((e.u, i));
        }
        adj
    }

    /// Builds the closed walk of a cuff in its stored direction.
    pub fn cuff_walk(&self, cuff: usize) -> ClosedWalk {
        self.faces.orbit_walk(self, self.faces.cuff_orbit(cuff))
    }

    /// Builds a dart-level closed walk following the given vertex cycle.
    /// Parallel edges are resolved by the smallest edge id.
    pub fn walk_from_vertices(&self, vertices: &[Vertex]) -> Result<ClosedWalk> {
        let n = vertices.len();
        let mut darts = Vec::with_capacity(n);
        for i in 0..n {
            let (a, b) = (vertices[i], vertices[(i + 1) % n]);
            let d = self.rotations[a]
                .iter()
                .filter(|&&d| self.head(d) == b)
                .min()
                .copied()
                .ok_or_else(|| Error::NotACycle(format!("no edge {a}-{b}")))?;
            darts.push(d);
        }
        Ok(ClosedWalk {
            vertices: vertices.to_vec(),
            darts,
        })
    }

    /// Same embedding with every vertex relabelled by `perm` (old -> new).
    pub fn relabel(&self, perm: &[Vertex]) -> Result<Self> {
        let mut rotations = vec![Vec::new(); self.vertex_count];
        for (v, rot) in self.rotations.iter().enumerate() {
            rotations[perm[v]] = rot.clone();
        }
        let edges = self
            .edges
            .iter()
            .map(|e| Edge {
                u: perm[e.u],
                v: perm[e.v],
                sign: e.sign,
            })
            .collect();
        let cuffs = self
            .cuffs
            .iter()
            .map(|c| c.iter().map(|&v| perm[v]).collect())
            .collect();
        EmbeddedGraph::new(self.vertex_count, edges, rotations, cuffs)
    }

    /// Builds an embedding from a list of polygons glued edge to edge.
    /// The cuff walks count as polygons.
    ///
    /// Every unordered vertex pair may carry at most one edge here; each
    /// edge must lie on exactly two polygon sides, and the polygon corners
    /// around every vertex must close up into a single cycle. The result is
    /// re-traced and checked against the input polygons.
    pub fn from_faces(
        vertex_count: usize,
        faces: &[Vec<Vertex>],
        cuffs: Vec<Vec<Vertex>>,
    ) -> Result<Self> {
        use std::collections::BTreeMap;
        let polygons: Vec<Vec<Vertex>> = faces.iter().chain(cuffs.iter()).cloned().collect();
        let faces = &polygons[..];
        let mut edge_ids: BTreeMap<(Vertex, Vertex), EdgeId> = BTreeMap::new();
        let mut edges = Vec::new();
        let mut uses: Vec<usize> = Vec::new();
        let key = |a: Vertex, b: Vertex| (a.min(b), a.max(b));
        for f in faces {
            for i in 0..f.len() {
                let k = key(f[i], f[(i + 1) % f.len()]);
                let id = *edge_ids.entry(k).or_insert_with(|| {
                    edges.push(Edge {
                        u: k.0,
                        v: k.1,
                        sign: Sign::Pos,
                    });
                    uses.push(0);
                    edges.len() - 1
                });
                uses[id] += 1;
            }
        }
        if let Some(e) = uses.iter().position(|&u| u != 2) {
            return Err(Error::MalformedRotation(format!(
                "edge {e} lies on {} polygon sides",
                uses[e]
            )));
        }
        let dart_at = |e: EdgeId, v: Vertex, edges: &[Edge]| {
            if edges[e].u == v {
                Dart::first(e)
            } else {
                Dart::second(e)
            }
        };
        // corner links: at vertex v, the two darts meeting in a polygon corner
        let mut links: Vec<Vec<[Dart; 2]>> = vec![Vec::new(); vertex_count];
        // (face, corner) -> (incoming dart at v, outgoing dart at v)
        let mut corners = Vec::new();
        for (fi, f) in faces.iter().enumerate() {
            let n = f.len();
            for i in 0..n {
                let v = f[i];
                let prev = f[(i + n - 1) % n];
                let next = f[(i + 1) % n];
                let din = dart_at(edge_ids[&key(prev, v)], v, &edges);
                let dout = dart_at(edge_ids[&key(v, next)], v, &edges);
                links[v].push([din, dout]);
                corners.push((fi, i, din, dout));
            }
        }
        let mut rotations = Vec::with_capacity(vertex_count);
        for (v, ls) in links.iter().enumerate() {
            if ls.is_empty() {
                rotations.push(Vec::new());
                continue;
            }
            let mut rot = vec![ls[0][0]];
            let mut used = vec![false; ls.len()];
            used[0] = true;
            let mut cur = ls[0][1];
            while cur != rot[0] {
                rot.push(cur);
                let next = ls.iter().enumerate().find(|(j, l)| {
                    !used[*j] && (l[0] == cur || l[1] == cur)
                });
                let Some((j, l)) = next else {
                    return Err(Error::MalformedRotation(format!(
                        "corners at vertex {v} do not close up"
                    )));
                };
                used[j] = true;
                cur = if l[0] == cur { l[1] } else { l[0] };
            }
            if used.iter().any(|u| !u) {
                return Err(Error::MalformedRotation(format!(
                    "vertex {v} has a pinched neighbourhood"
                )));
            }
            rotations.push(rot);
        }
        // local orientation of each polygon at each corner: +1 when the
        // outgoing dart follows the incoming one in the rotation
        let provisional = EmbeddedGraph {
            vertex_count,
            edges: edges.clone(),
            rotations: rotations.clone(),
            cuffs: Vec::new(),
            position: {
                let mut p = vec![0; 2 * edges.len()];
                for rot in &rotations {
                    for (i, d) in rot.iter().enumerate() {
                        p[d.index()] = i;
                    }
                }
                p
            },
            faces: FaceTable::default(),
        };
        let mut state_at: BTreeMap<(usize, usize), bool> = BTreeMap::new();
        for &(fi, i, din, dout) in &corners {
            state_at.insert((fi, i), provisional.succ(din) == dout);
        }
        for (fi, f) in faces.iter().enumerate() {
            let n = f.len();
            for i in 0..n {
                let e = edge_ids[&key(f[i], f[(i + 1) % n])];
                let a = state_at[&(fi, i)];
                let b = state_at[&(fi, (i + 1) % n)];
                edges[e].sign = if a == b { Sign::Pos } else { Sign::Neg };
            }
        }
        let g = EmbeddedGraph::new(vertex_count, edges, rotations, cuffs)?;
        // every polygon must come back as a traced orbit
        let traced: BTreeSet<Vec<Vertex>> = g
            .faces
            .all_pairs()
            .map(|o| canonical_cycle(&g.faces.orbit_walk(&g, o).vertices))
            .collect();
        for f in faces {
            if !traced.contains(&canonical_cycle(f)) {
                return Err(Error::MalformedRotation(format!(
                    "polygon {f:?} is not traced back"
                )));
            }
        }
        Ok(g)
    }
}

/// Rotation/reflection-invariant form of a cyclic vertex sequence.
pub fn canonical_cycle(c: &[Vertex]) -> Vec<Vertex> {
    let n = c.len();
    let mut best: Option<Vec<Vertex>> = None;
    for start in 0..n {
        for dir in [false, true] {
            let cand: Vec<_> = (0..n)
                .map(|i| {
                    if dir {
                        c[(start + n - i) % n]
                    } else {
                        c[(start + i) % n]
                    }
                })
                .collect();
            if best.as_ref().is_none_or(|b| cand < *b) {
                best = Some(cand);
            }
        }
    }
    best.unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testkit::{generate, GeneratorSpec};

    #[test]
    fn dart_index_roundtrip() {
        for i in 0..20 {
            assert_eq!(Dart::from_index(i).index(), i);
            assert_eq!(Dart::from_index(i).twin().twin(), Dart::from_index(i));
        }
    }

    #[test]
    fn rejects_loops_and_missing_darts() {
        let e = vec![Edge {
            u: 0,
            v: 0,
            sign: Sign::Pos,
        }];
        let r = EmbeddedGraph::new(1, e, vec![vec![Dart::first(0), Dart::second(0)]], vec![]);
        assert!(matches!(r, Err(Error::LoopEdge(0))));

        let e = vec![Edge {
            u: 0,
            v: 1,
            sign: Sign::Pos,
        }];
        let r = EmbeddedGraph::new(2, e, vec![vec![Dart::first(0)], vec![]], vec![]);
        assert!(matches!(r, Err(Error::MalformedRotation(_))));
    }

    #[test]
    fn rejects_duplicated_dart() {
        let e = vec![Edge {
            u: 0,
            v: 1,
            sign: Sign::Pos,
        }];
        let r = EmbeddedGraph::new(
            2,
            e,
            vec![vec![Dart::first(0), Dart::first(0)], vec![Dart::second(0)]],
            vec![],
        );
        assert!(matches!(r, Err(Error::MalformedRotation(_))));
    }

    #[test]
    fn relabel_preserves_faces() {
        let g = generate(&GeneratorSpec::GridDisk(3, 3)).unwrap();
        let perm: Vec<_> = (0..9).rev().collect();
        let h = g.relabel(&perm).unwrap();
        assert_eq!(h.faces().face_count(), 4);
        assert_eq!(h.cuffs()[0].len(), 8);
    }

    #[test]
    fn canonical_cycle_ignores_rotation_and_direction() {
        assert_eq!(canonical_cycle(&[3, 1, 2]), canonical_cycle(&[2, 1, 3]));
        assert_eq!(canonical_cycle(&[3, 1, 2]), vec![1, 2, 3]);
    }
}
