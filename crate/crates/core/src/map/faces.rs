use std::collections::BTreeSet;

use super::{ClosedWalk, Dart, EdgeId, EmbeddedGraph, Sign, Vertex};
use crate::error::{Error, Result};

/// A dart together with the local orientation it is traversed in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct State {
    pub dart: Dart,
    pub flipped: bool,
}

impl State {
    pub fn new(dart: Dart, flipped: bool) -> Self {
        State { dart, flipped }
    }

    pub fn index(self) -> usize {
        2 * self.dart.index() + usize::from(self.flipped)
    }

    pub fn from_index(i: usize) -> Self {
        State::new(Dart::from_index(i / 2), i % 2 == 1)
    }
}

/// One traced orbit of the face permutation.
#[derive(Clone, Debug, Default)]
pub struct Orbit {
    pub states: Vec<State>,
    pub reverse: usize,
    pub canonical: bool,
    pub cuff: Option<usize>,
}

impl Orbit {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }
}

/// All face orbits of an embedding, with cuff orbits identified.
#[derive(Clone, Debug, Default)]
pub struct FaceTable {
    orbits: Vec<Orbit>,
    state_orbit: Vec<usize>,
    cuff_orbits: Vec<usize>,
    faces: Vec<usize>,
}

/// Euler data of the surface.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SurfaceSignature {
    pub orientable: bool,
    /// Euler genus of the closed surface (cuffs patched with disks).
    pub euler_genus: usize,
    pub cuffs: usize,
    /// `V - E + F` counting only genuine faces.
    pub euler_char: i64,
}

impl SurfaceSignature {
    /// Handles for orientable surfaces, crosscaps otherwise.
    pub fn genus(&self) -> usize {
        if self.orientable {
            self.euler_genus / 2
        } else {
            self.euler_genus
        }
    }

    pub fn is_disk(&self) -> bool {
        self.euler_genus == 0 && self.cuffs == 1
    }

    pub fn is_cylinder(&self) -> bool {
        self.euler_genus == 0 && self.cuffs == 2
    }
}

pub(crate) fn step(g: &EmbeddedGraph, s: State) -> State {
    let d = s.dart.twin();
    let flipped = s.flipped ^ g.edge(d.edge).sign.is_neg();
    let next = if flipped { g.pred(d) } else { g.succ(d) };
    State::new(next, flipped)
}

/// The state traversing the same edge in the opposite direction.
pub(crate) fn reverse_state(g: &EmbeddedGraph, s: State) -> State {
    let neg = g.edge(s.dart.edge).sign.is_neg();
    State::new(s.dart.twin(), !(s.flipped ^ neg))
}

fn rotates_to(a: &[Vertex], b: &[Vertex]) -> bool {
    a.len() == b.len() && (0..a.len()).any(|k| (0..a.len()).all(|i| a[(i + k) % a.len()] == b[i]))
}

impl FaceTable {
    /// Traces every orbit. Cuffs are matched by vertex sequence unless
    /// `hints` names a state on each cuff orbit.
    pub(crate) fn trace(g: &EmbeddedGraph, hints: Option<&[State]>) -> Result<Self> {
        let n = 4 * g.edge_count();
        let mut state_orbit = vec![usize::MAX; n];
        let mut orbits: Vec<Orbit> = Vec::new();
        for start in 0..n {
            if state_orbit[start] != usize::MAX {
                continue;
            }
            let id = orbits.len();
            let mut states = Vec::new();
            let mut s = State::from_index(start);
            loop {
                state_orbit[s.index()] = id;
                states.push(s);
                s = step(g, s);
                if s.index() == start {
                    break;
                }
                if state_orbit[s.index()] != usize::MAX {
                    return Err(Error::Internal("face permutation is not a bijection".into()));
                }
            }
            orbits.push(Orbit {
                states,
                ..Orbit::default()
            });
        }
        for id in 0..orbits.len() {
            let r = state_orbit[reverse_state(g, orbits[id].states[0]).index()];
            orbits[id].reverse = r;
            // orbits are discovered in increasing order of their minimum state
            orbits[id].canonical = id <= r;
        }
        let mut table = FaceTable {
            orbits,
            state_orbit,
            cuff_orbits: Vec::new(),
            faces: Vec::new(),
        };
        for (ci, cuff) in g.cuffs().iter().enumerate() {
            let found = match hints {
                Some(h) => h.get(ci).map(|&s| table.state_orbit(s)).filter(|&o| {
                    table.orbits[o].cuff.is_none() && table.orbits[table.orbits[o].reverse].cuff.is_none()
                }),
                None => (0..table.orbits.len()).find(|&o| {
                    table.orbits[o].cuff.is_none()
                        && table.orbits[table.orbits[o].reverse].cuff.is_none()
                        && rotates_to(&table.orbit_vertices(g, o), cuff)
                }),
            };
            let Some(o) = found else {
                return Err(Error::CuffMismatch { index: ci });
            };
            table.orbits[o].cuff = Some(ci);
            let r = table.orbits[o].reverse;
            table.orbits[r].cuff = Some(ci);
            table.cuff_orbits.push(o);
        }
        table.faces = (0..table.orbits.len())
            .filter(|&o| table.orbits[o].canonical && table.orbits[o].cuff.is_none())
            .collect();
        Ok(table)
    }

    pub fn orbit(&self, o: usize) -> &Orbit {
        &self.orbits[o]
    }

    pub fn orbit_count(&self) -> usize {
        self.orbits.len()
    }

    pub fn state_orbit(&self, s: State) -> usize {
        self.state_orbit[s.index()]
    }

    /// Canonical member of the orbit pair containing `o`.
    pub fn pair_of(&self, o: usize) -> usize {
        o.min(self.orbits[o].reverse)
    }

    /// Canonical orbit of every face and cuff.
    pub fn all_pairs(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.orbits.len()).filter(|&o| self.orbits[o].canonical)
    }

    /// Canonical orbits of the genuine (non-cuff) faces.
    pub fn faces(&self) -> &[usize] {
        &self.faces
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    /// Orbit tracing cuff `i` in its stored direction.
    pub fn cuff_orbit(&self, i: usize) -> usize {
        self.cuff_orbits[i]
    }

    pub fn cuff_orbits(&self) -> &[usize] {
        &self.cuff_orbits
    }

    pub fn is_cuff(&self, o: usize) -> bool {
        self.orbits[o].cuff.is_some()
    }

    pub fn orbit_vertices(&self, g: &EmbeddedGraph, o: usize) -> Vec<Vertex> {
        self.orbits[o].states.iter().map(|s| g.tail(s.dart)).collect()
    }

    pub fn orbit_walk(&self, g: &EmbeddedGraph, o: usize) -> ClosedWalk {
        let darts: Vec<Dart> = self.orbits[o].states.iter().map(|s| s.dart).collect();
        ClosedWalk {
            vertices: darts.iter().map(|&d| g.tail(d)).collect(),
            darts,
        }
    }

    pub fn orbit_edges(&self, o: usize) -> BTreeSet<EdgeId> {
        self.orbits[o].states.iter().map(|s| s.dart.edge).collect()
    }

    /// The two orbit pairs on either side of an edge (equal when the edge
    /// is traversed twice by the same face).
    pub fn edge_sides(&self, e: EdgeId) -> [usize; 2] {
        let a = self.state_orbit(State::new(Dart::first(e), false));
        let b = self.state_orbit(State::new(Dart::first(e), true));
        [self.pair_of(a), self.pair_of(b)]
    }

    /// Genuine faces of length other than four, if any.
    pub fn non_quad_face(&self) -> Option<usize> {
        self.faces.iter().copied().find(|&f| self.orbits[f].len() != 4)
    }
}

/// Face walks (one per genuine face) and the surface signature.
pub fn trace_faces(g: &EmbeddedGraph) -> (Vec<ClosedWalk>, SurfaceSignature) {
    let t = g.faces();
    let walks = t.faces().iter().map(|&f| t.orbit_walk(g, f)).collect();
    (walks, g.signature())
}

impl EmbeddedGraph {
    /// Vertex flips making every edge positive, if they exist.
    pub fn orientation_flips(&self) -> Option<Vec<bool>> {
        let adj = self.adjacency();
        let mut flip: Vec<Option<bool>> = vec![None; self.vertex_count()];
        for root in 0..self.vertex_count() {
            if flip[root].is_some() {
                continue;
            }
            flip[root] = Some(false);
            let mut queue = std::collections::VecDeque::from([root]);
            while let Some(v) = queue.pop_front() {
                let fv = flip[v].unwrap_or(false);
                for &(w, e) in &adj[v] {
                    let want = fv ^ self.edge(e).sign.is_neg();
                    match flip[w] {
                        None => {
                            flip[w] = Some(want);
                            queue.push_back(w);
                        }
                        Some(fw) if fw != want => return None,
                        _ => {}
                    }
                }
            }
        }
        Some(flip.into_iter().map(|f| f.unwrap_or(false)).collect())
    }

    pub fn is_orientable(&self) -> bool {
        self.orientation_flips().is_some()
    }

    pub fn signature(&self) -> SurfaceSignature {
        let v = self.vertex_count() as i64;
        let e = self.edge_count() as i64;
        let all = self.faces().all_pairs().count() as i64;
        SurfaceSignature {
            orientable: self.is_orientable(),
            euler_genus: (2 - (v - e + all)).max(0) as usize,
            cuffs: self.cuffs().len(),
            euler_char: v - e + self.faces().face_count() as i64,
        }
    }

    /// Equivalent embedding with all signs positive.
    pub fn orientation_normalize(&self) -> Result<Self> {
        let flips = self.orientation_flips().ok_or(Error::NotOrientable)?;
        let mut rotations = self.rotations().to_vec();
        for (v, rot) in rotations.iter_mut().enumerate() {
            if flips[v] {
                rot.reverse();
            }
        }
        let edges = self
            .edges()
            .iter()
            .map(|e| super::Edge {
                sign: Sign::Pos,
                ..*e
            })
            .collect();
        EmbeddedGraph::new(self.vertex_count(), edges, rotations, self.cuffs().to_vec())
    }

    /// Checks that every genuine face has length four.
    pub fn check_quadrangulation(&self) -> Result<()> {
        if let Some(f) = self.faces().non_quad_face() {
            return Err(Error::NotQuadrangulation(format!(
                "face {:?} has length {}",
                self.faces().orbit_vertices(self, f),
                self.faces().orbit(f).len()
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testkit::{generate, GeneratorSpec};

    fn sig(spec: GeneratorSpec) -> SurfaceSignature {
        generate(&spec).unwrap().signature()
    }

    #[test]
    fn signatures_of_generators() {
        let s = sig(GeneratorSpec::GridDisk(4, 4));
        assert!(s.orientable && s.is_disk());
        let s = sig(GeneratorSpec::GridCylinder(4, 5));
        assert!(s.orientable && s.is_cylinder());
        let s = sig(GeneratorSpec::GridTorus(4, 4));
        assert_eq!((s.orientable, s.euler_genus, s.cuffs), (true, 2, 0));
        let s = sig(GeneratorSpec::GridKlein(4, 4));
        assert_eq!((s.orientable, s.euler_genus), (false, 2));
        let s = sig(GeneratorSpec::K4Projective);
        assert_eq!((s.orientable, s.euler_genus), (false, 1));
        let s = sig(GeneratorSpec::K5Torus);
        assert_eq!((s.orientable, s.euler_genus), (true, 2));
    }

    #[test]
    fn orbits_pair_up() {
        let g = generate(&GeneratorSpec::GridKlein(4, 3)).unwrap();
        let t = g.faces();
        for o in 0..t.orbit_count() {
            let r = t.orbit(o).reverse;
            assert_ne!(o, r);
            assert_eq!(t.orbit(r).reverse, o);
            assert_eq!(t.orbit(o).len(), t.orbit(r).len());
        }
        assert_eq!(t.orbit_count(), 2 * t.face_count());
    }

    #[test]
    fn normalize_keeps_faces() {
        let g = generate(&GeneratorSpec::GridCylinder(4, 3)).unwrap();
        let mut edges = g.edges().to_vec();
        let mut rots = g.rotations().to_vec();
        // flip vertex 5 by hand
        rots[5].reverse();
        for e in edges.iter_mut() {
            if e.u == 5 || e.v == 5 {
                e.sign = e.sign.flip();
            }
        }
        let h = EmbeddedGraph::new(12, edges, rots, g.cuffs().to_vec()).unwrap();
        assert!(h.edges().iter().any(|e| e.sign == Sign::Neg));
        let n = h.orientation_normalize().unwrap();
        assert!(n.edges().iter().all(|e| e.sign == Sign::Pos));
        assert_eq!(n.signature(), g.signature());
    }

    #[test]
    fn cuff_mismatch_detected() {
        let g = generate(&GeneratorSpec::GridDisk(3, 3)).unwrap();
        assert!(matches!(
            g.with_cuffs(vec![vec![0, 1, 2]]),
            Err(Error::CuffMismatch { index: 0 })
        ));
    }

    #[test]
    fn nonorientable_normalize_fails() {
        let g = generate(&GeneratorSpec::K4Projective).unwrap();
        assert_eq!(g.orientation_normalize(), Err(Error::NotOrientable));
    }
}
