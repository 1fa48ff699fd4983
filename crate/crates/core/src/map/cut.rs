use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::faces::State;
use super::{Dart, Edge, EdgeId, EmbeddedGraph, End, Sign, Subgraph, Vertex};
use crate::error::{Error, Result};

/// Where a cuff of a cut piece comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CuffOrigin {
    /// A cuff of the parent surface, by index.
    Original(usize),
    /// A hole opened by the cut.
    New,
}

/// One component of a surface cut open along a subgraph.
#[derive(Clone, Debug)]
pub struct CutPiece {
    pub graph: EmbeddedGraph,
    pub vertex_map: Vec<Vertex>,
    pub edge_map: Vec<EdgeId>,
    pub cuff_origin: Vec<CuffOrigin>,
    /// Canonical orbits of the parent faces inside this piece.
    pub faces: Vec<usize>,
}

impl CutPiece {
    pub fn new_holes(&self) -> Vec<usize> {
        (0..self.cuff_origin.len())
            .filter(|&i| self.cuff_origin[i] == CuffOrigin::New)
            .collect()
    }

    pub fn original_cuffs(&self) -> Vec<usize> {
        self.cuff_origin
            .iter()
            .filter_map(|c| match c {
                CuffOrigin::Original(i) => Some(*i),
                CuffOrigin::New => None,
            })
            .collect()
    }

    pub fn euler_char(&self) -> i64 {
        self.graph.signature().euler_char
    }
}

/// Vertex and edge multiplicities of a cut, enough to re-derive the
/// parent Euler characteristic from its pieces.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GluingLedger {
    pub parent_vertices: usize,
    pub parent_edges: usize,
    pub total_vertices: usize,
    pub total_edges: usize,
    /// `V - E` summed over the components that hold no parent face.
    pub dropped_euler: i64,
}

impl GluingLedger {
    pub fn parent_euler_char(&self, pieces: &[CutPiece]) -> i64 {
        let sum: i64 = pieces.iter().map(CutPiece::euler_char).sum();
        sum + self.dropped_euler - (self.total_vertices - self.parent_vertices) as i64
            + (self.total_edges - self.parent_edges) as i64
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Key {
    Plain(Dart),
    Plus(Dart),
    Minus(Dart),
}

impl Key {
    fn dart(self) -> Dart {
        match self {
            Key::Plain(d) | Key::Plus(d) | Key::Minus(d) => d,
        }
    }
}

/// Cuts `g` open along the edges of `h`.
///
/// Every vertex on `h` is split into one copy per wedge between
/// consecutive `h`-darts and every `h`-edge is doubled. Components that
/// contain at least one face of `g` are returned, in order of their
/// smallest vertex.
pub fn cut_along(g: &EmbeddedGraph, h: &Subgraph) -> Result<(Vec<CutPiece>, GluingLedger)> {
    if let Some(&e) = h.iter().find(|&&e| e >= g.edge_count()) {
        return Err(Error::NotSubgraph(e));
    }
    // cuff corners: (vertex, position p) for the corner between rot[p] and rot[p + 1]
    let parent_faces = g.faces();
    let mut cuff_corners: Vec<Vec<usize>> = vec![Vec::new(); g.vertex_count()];
    for &o in parent_faces.cuff_orbits() {
        let states = &parent_faces.orbit(o).states;
        for i in 0..states.len() {
            let t = states[(i + 1) % states.len()];
            let d = states[i].dart.twin();
            let deg = g.degree(g.tail(d));
            let p = if t.flipped {
                (g.position(d) + deg - 1) % deg
            } else {
                g.position(d)
            };
            let v = g.tail(d);
            let rot = g.rotation(v);
            if !h.contains(&rot[p].edge) && !h.contains(&rot[(p + 1) % deg].edge) {
                cuff_corners[v].push(p);
            }
        }
    }
    // vertex copies, each a rotation of keys; a vertex on h is split at its
    // h-darts and at the cuff corners it lies on
    let mut copies: Vec<Vec<Key>> = Vec::new();
    let mut copy_origin: Vec<Vertex> = Vec::new();
    let mut wedge: Vec<bool> = Vec::new();
    for v in 0..g.vertex_count() {
        let rot = g.rotation(v);
        let deg = rot.len();
        let mut breaks: Vec<usize> = (0..deg).filter(|&p| h.contains(&rot[p].edge)).map(|p| 2 * p).collect();
        if breaks.is_empty() {
            copies.push(rot.iter().map(|&d| Key::Plain(d)).collect());
            copy_origin.push(v);
            wedge.push(false);
            continue;
        }
        breaks.extend(cuff_corners[v].iter().map(|&p| 2 * p + 1));
        breaks.sort_unstable();
        breaks.dedup();
        let m = breaks.len();
        for j in 0..m {
            let (start, end) = (breaks[j], breaks[(j + 1) % m]);
            let mut keys = Vec::new();
            if start % 2 == 0 {
                keys.push(Key::Plus(rot[start / 2]));
            }
            let stop = if end % 2 == 0 { end / 2 } else { (end / 2 + 1) % deg };
            let mut p = (start / 2 + 1) % deg;
            while p != stop {
                keys.push(Key::Plain(rot[p]));
                p = (p + 1) % deg;
            }
            if end % 2 == 0 {
                keys.push(Key::Minus(rot[end / 2]));
            }
            copies.push(keys);
            copy_origin.push(v);
            wedge.push(true);
        }
    }
    let mut copy_of: HashMap<Key, Vertex> = HashMap::new();
    for (c, keys) in copies.iter().enumerate() {
        for &k in keys {
            copy_of.insert(k, c);
        }
    }
    let mut edges = Vec::new();
    let mut edge_map = Vec::new();
    let mut dart_of: HashMap<Key, Dart> = HashMap::new();
    for (e, ed) in g.edges().iter().enumerate() {
        let (du, dv) = (Dart::first(e), Dart::second(e));
        let pairs = if !h.contains(&e) {
            vec![(Key::Plain(du), Key::Plain(dv))]
        } else if ed.sign == Sign::Pos {
            vec![(Key::Plus(du), Key::Minus(dv)), (Key::Minus(du), Key::Plus(dv))]
        } else {
            vec![(Key::Plus(du), Key::Plus(dv)), (Key::Minus(du), Key::Minus(dv))]
        };
        for (a, b) in pairs {
            let id = edges.len();
            edges.push(Edge {
                u: copy_of[&a],
                v: copy_of[&b],
                sign: ed.sign,
            });
            edge_map.push(e);
            dart_of.insert(a, Dart::first(id));
            dart_of.insert(b, Dart::second(id));
        }
    }
    let rotations: Vec<Vec<Dart>> = copies
        .iter()
        .map(|keys| keys.iter().map(|k| dart_of[k]).collect())
        .collect();
    let mut key_of = vec![Key::Plain(Dart::first(0)); 2 * edges.len()];
    for (k, d) in &dart_of {
        key_of[d.index()] = *k;
    }
    let big = EmbeddedGraph::new(copies.len(), edges, rotations, Vec::new())?;
    let table = big.faces();

    // wrap corners join the last and first dart of a wedge copy
    let is_wrap = |x: Dart, y: Dart, flipped: bool| -> bool {
        let c = big.tail(x);
        if !wedge[c] {
            return false;
        }
        let last = big.degree(c) - 1;
        let (px, py) = (big.position(x), big.position(y));
        if flipped {
            px == 0 && py == last
        } else {
            px == last && py == 0
        }
    };
    let mut orbit_wrap = vec![false; table.orbit_count()];
    for (o, flag) in orbit_wrap.iter_mut().enumerate() {
        let states = &table.orbit(o).states;
        *flag = (0..states.len()).any(|i| {
            let t = states[(i + 1) % states.len()];
            is_wrap(states[i].dart.twin(), t.dart, t.flipped)
        });
    }
    let parent = g.faces();
    let lift = |s: State| -> usize {
        let d = s.dart;
        let key = key_of[d.index()];
        parent.state_orbit(State::new(key.dart(), s.flipped))
    };

    // components
    let mut comp = vec![usize::MAX; big.vertex_count()];
    let mut comp_count = 0;
    for root in 0..big.vertex_count() {
        if comp[root] != usize::MAX {
            continue;
        }
        comp[root] = comp_count;
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            for w in big.neighbors(v).collect::<Vec<_>>() {
                if comp[w] == usize::MAX {
                    comp[w] = comp_count;
                    stack.push(w);
                }
            }
        }
        comp_count += 1;
    }
    let mut comp_faces: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); comp_count];
    let mut comp_cuffs: Vec<BTreeMap<usize, State>> = vec![BTreeMap::new(); comp_count];
    let mut comp_holes: Vec<BTreeMap<usize, State>> = vec![BTreeMap::new(); comp_count];
    for o in 0..table.orbit_count() {
        let first = table.orbit(o).states[0];
        let c = comp[big.tail(first.dart)];
        if orbit_wrap[o] {
            if table.orbit(o).canonical {
                comp_holes[c].insert(o, first);
            }
            continue;
        }
        let po = lift(first);
        if parent.orbit(po).len() != table.orbit(o).len() {
            return Err(Error::Internal("cut lifted a face with a different length".into()));
        }
        match parent.orbit(po).cuff {
            Some(i) if parent.cuff_orbit(i) == po => {
                comp_cuffs[c].insert(i, first);
            }
            Some(_) => {}
            None => {
                comp_faces[c].insert(parent.pair_of(po));
            }
        }
    }

    let mut ledger = GluingLedger {
        parent_vertices: g.vertex_count(),
        parent_edges: g.edge_count(),
        total_vertices: big.vertex_count(),
        total_edges: big.edge_count(),
        dropped_euler: 0,
    };
    let mut pieces = Vec::new();
    for c in 0..comp_count {
        let verts: Vec<Vertex> = (0..big.vertex_count()).filter(|&v| comp[v] == c).collect();
        let eids: Vec<EdgeId> = (0..big.edge_count())
            .filter(|&e| comp[big.edge(e).u] == c)
            .collect();
        if comp_faces[c].is_empty() {
            ledger.dropped_euler += verts.len() as i64 - eids.len() as i64;
            continue;
        }
        let mut vnew = vec![usize::MAX; big.vertex_count()];
        for (i, &v) in verts.iter().enumerate() {
            vnew[v] = i;
        }
        let mut enew = vec![usize::MAX; big.edge_count()];
        for (i, &e) in eids.iter().enumerate() {
            enew[e] = i;
        }
        let map_dart = |d: Dart| Dart::new(enew[d.edge], d.end);
        let pedges = eids
            .iter()
            .map(|&e| {
                let ed = big.edge(e);
                Edge {
                    u: vnew[ed.u],
                    v: vnew[ed.v],
                    sign: ed.sign,
                }
            })
            .collect();
        let prots = verts
            .iter()
            .map(|&v| big.rotation(v).iter().map(|&d| map_dart(d)).collect())
            .collect();
        let mut origin = Vec::new();
        let mut states = Vec::new();
        for (&i, &s) in &comp_cuffs[c] {
            origin.push(CuffOrigin::Original(i));
            states.push(State::new(map_dart(s.dart), s.flipped));
        }
        for &s in comp_holes[c].values() {
            origin.push(CuffOrigin::New);
            states.push(State::new(map_dart(s.dart), s.flipped));
        }
        let graph = EmbeddedGraph::from_cuff_states(verts.len(), pedges, prots, &states)?;
        pieces.push(CutPiece {
            graph,
            vertex_map: verts.iter().map(|&v| copy_origin[v]).collect(),
            edge_map: eids.iter().map(|&e| edge_map[e]).collect(),
            cuff_origin: origin,
            faces: comp_faces[c].iter().copied().collect(),
        });
    }
    Ok((pieces, ledger))
}

impl End {
    pub fn other(self) -> End {
        match self {
            End::First => End::Second,
            End::Second => End::First,
        }
    }
}
