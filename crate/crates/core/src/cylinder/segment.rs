use std::collections::{BTreeSet, HashMap, VecDeque};

use super::{dart_from, forward_side, proper_assignments, short_cycles, walk_support, Cylinder};
use crate::coloring::{delta_edge, Color, Coloring};
use crate::disk::solve_disk;
use crate::error::{Error, Result};
use crate::map::{bfs_layers, cut_along, ClosedWalk, CutPiece, EdgeId, EmbeddedGraph, Subgraph, Vertex};
use crate::result::SolveResult;
use crate::testkit::{backtrack, OracleOutcome};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SegmentMode {
    /// Disk solving on the segment cut open along a connecting path.
    Exact,
    /// Winding criterion for far-apart, boundary-linked segments.
    Fast,
}

#[derive(Clone, Debug)]
pub struct PairEntry {
    pub a: Vec<Color>,
    pub b: Vec<Color>,
    /// `None` when the certificate is deferred (fast mode).
    pub certificate: Option<Coloring>,
}

/// Colorings of `Ca ∪ Cb` that extend across the segment between them.
#[derive(Clone, Debug)]
pub struct PairColoringSet {
    pub a_vertices: Vec<Vertex>,
    pub b_vertices: Vec<Vertex>,
    pub pairs: Vec<PairEntry>,
}

impl PairColoringSet {
    pub fn contains(&self, a: &[Color], b: &[Color]) -> bool {
        self.pairs.iter().any(|p| p.a == a && p.b == b)
    }
}

struct GapPiece {
    piece: CutPiece,
    boundary: Vec<usize>,
    disk: bool,
    memo: HashMap<Vec<Color>, Option<Vec<(Vertex, Color)>>>,
}

impl GapPiece {
    fn solve(&mut self, colors: &Coloring) -> Result<Option<Vec<(Vertex, Color)>>> {
        let mut key = Vec::with_capacity(self.boundary.len());
        for &i in &self.boundary {
            match colors.get(self.piece.vertex_map[i]) {
                Some(c) => key.push(c),
                None => return Err(Error::Internal("uncolored segment boundary".into())),
            }
        }
        if let Some(r) = self.memo.get(&key) {
            return Ok(r.clone());
        }
        let pg = &self.piece.graph;
        let pre = Coloring::from_pairs(pg.vertex_count(), self.boundary.iter().copied().zip(key.iter().copied()));
        let found = if self.disk {
            match solve_disk(pg, &pre) {
                Ok(SolveResult::Yes(c)) => Some(c),
                Ok(_) | Err(Error::ImproperBoundary(_)) => None,
                Err(e) => return Err(e),
            }
        } else {
            let edges: Vec<_> = pg.edges().iter().map(|e| (e.u, e.v)).collect();
            match backtrack(pg.vertex_count(), &edges, &pre, None) {
                OracleOutcome::Colored(c) => Some(Coloring::from_total(&c)),
                _ => None,
            }
        };
        let r = found.map(|c| {
            (0..pg.vertex_count())
                .filter_map(|i| c.get(i).map(|col| (self.piece.vertex_map[i], col)))
                .collect::<Vec<_>>()
        });
        self.memo.insert(key, r.clone());
        Ok(r)
    }
}

/// The part of a cylinder between two nested non-contractible cycles.
pub(crate) struct Segment {
    pub a_vertices: Vec<Vertex>,
    pub b_vertices: Vec<Vertex>,
    pub cycle_edges: Vec<(Vertex, Vertex)>,
    gap: BTreeSet<usize>,
    ra: BTreeSet<usize>,
    rb: BTreeSet<usize>,
    gap_edges: Vec<EdgeId>,
    boundary_edges: Vec<EdgeId>,
    /// Connecting path, endpoints included; empty when the cycles meet.
    path: Vec<Vertex>,
    pieces: Vec<GapPiece>,
    pub distance: usize,
}

impl Segment {
    pub fn new(
        cyl: &Cylinder,
        ca: &ClosedWalk,
        ra: &BTreeSet<usize>,
        cb: &ClosedWalk,
        rb: &BTreeSet<usize>,
    ) -> Result<Segment> {
        let g = &cyl.g;
        if !ra.is_subset(rb) || ra == rb {
            return Err(Error::PreconditionViolated("cycles are not nested".into()));
        }
        let gap: BTreeSet<usize> = rb.difference(ra).copied().collect();
        let gap_edges: Vec<EdgeId> = (0..g.edge_count())
            .filter(|&e| cyl.sides[e].iter().any(|s| gap.contains(s)))
            .collect();
        let (a_vertices, ea) = walk_support(g, ca);
        let (b_vertices, eb) = walk_support(g, cb);
        let mut cycle_edges = ea;
        cycle_edges.extend(eb);
        let mut h: Subgraph = ca.edge_set();
        h.extend(cb.edge_set());
        let boundary_edges: Vec<EdgeId> = h.iter().copied().collect();
        let dist = bfs_layers(g, &a_vertices);
        let distance = b_vertices.iter().map(|&v| dist[v]).min().unwrap_or(0);
        let path = if a_vertices.iter().any(|v| b_vertices.contains(v)) {
            Vec::new()
        } else {
            connecting_path(g, &gap_edges, &a_vertices, &b_vertices)?
        };
        for w in path.windows(2) {
            let e = gap_edges
                .iter()
                .copied()
                .find(|&e| {
                    let ed = g.edge(e);
                    (ed.u, ed.v) == (w[0], w[1]) || (ed.v, ed.u) == (w[0], w[1])
                })
                .ok_or_else(|| Error::Internal("connecting path leaves the segment".into()))?;
            h.insert(e);
        }
        let (cut, _) = cut_along(g, &h)?;
        let pieces = cut
            .into_iter()
            .filter(|p| !p.faces.is_empty() && p.faces.iter().all(|f| gap.contains(f)))
            .map(|piece| {
                let s = piece.graph.signature();
                let disk = s.is_disk() && piece.graph.check_quadrangulation().is_ok();
                let boundary: BTreeSet<usize> = piece.graph.cuffs().iter().flatten().copied().collect();
                GapPiece {
                    boundary: boundary.into_iter().collect(),
                    disk,
                    piece,
                    memo: HashMap::new(),
                }
            })
            .collect();
        Ok(Segment {
            a_vertices,
            b_vertices,
            cycle_edges,
            gap,
            ra: ra.clone(),
            rb: rb.clone(),
            gap_edges,
            boundary_edges,
            path,
            pieces,
            distance,
        })
    }

    /// Extends a coloring of both cycles across the segment, if possible.
    pub fn extend(&mut self, colors: &Coloring) -> Result<Option<Vec<(Vertex, Color)>>> {
        let inner: Vec<Vertex> = if self.path.len() > 2 {
            self.path[1..self.path.len() - 1].to_vec()
        } else {
            Vec::new()
        };
        let path_edges: Vec<(Vertex, Vertex)> = self.path.windows(2).map(|w| (w[0], w[1])).collect();
        let mut fixed = Coloring::new(colors.len());
        for &v in &self.path {
            if let Some(c) = colors.get(v) {
                if !inner.contains(&v) {
                    fixed.set(v, c);
                }
            }
        }
        let mut order = self.path.clone();
        order.sort_unstable();
        order.dedup();
        'outer: for assign in proper_assignments(&order, &path_edges, &fixed) {
            let mut full = colors.clone();
            for (&v, &c) in order.iter().zip(&assign) {
                full.set(v, c);
            }
            let mut out: Vec<(Vertex, Color)> = order.iter().copied().zip(assign).collect();
            for p in &mut self.pieces {
                match p.solve(&full)? {
                    Some(part) => out.extend(part),
                    None => continue 'outer,
                }
            }
            return Ok(Some(out));
        }
        Ok(None)
    }

    /// Winding number of the colored segment boundary, each edge traversed
    /// in the direction of the segment face beside it.
    pub fn boundary_winding(&self, g: &EmbeddedGraph, colors: &Coloring) -> Result<i64> {
        let mut total = 0;
        for &e in &self.boundary_edges {
            let ed = g.edge(e);
            let fwd = self.gap.contains(&forward_side(g, e));
            let (u, v) = if fwd { (ed.u, ed.v) } else { (ed.v, ed.u) };
            total += delta_edge(colors, u, v)?;
        }
        Ok(total)
    }

    /// Any coloring of the segment extending fixed cycle colors, by search.
    pub fn search_certificate(&self, g: &EmbeddedGraph, colors: &Coloring) -> Option<Vec<(Vertex, Color)>> {
        let edges: Vec<(Vertex, Vertex)> = self
            .gap_edges
            .iter()
            .map(|&e| (g.edge(e).u, g.edge(e).v))
            .collect();
        let vs: BTreeSet<Vertex> = edges.iter().flat_map(|&(u, v)| [u, v]).collect();
        let pre = colors.restrict(self.a_vertices.iter().chain(&self.b_vertices).copied());
        match backtrack(g.vertex_count(), &edges, &pre, None) {
            OracleOutcome::Colored(c) => Some(vs.into_iter().map(|v| (v, c[v])).collect()),
            _ => None,
        }
    }

    /// Distance and linkedness conditions under which the winding
    /// criterion decides the segment.
    pub fn fast_precondition(&self, cyl: &Cylinder, len_a: usize, len_b: usize) -> Result<()> {
        if self.distance < len_a + len_b {
            return Err(Error::PreconditionViolated(format!(
                "distance {} between the cycles is below {}",
                self.distance,
                len_a + len_b
            )));
        }
        let bound = len_a.max(len_b);
        let ends: BTreeSet<Vertex> = self.a_vertices.iter().chain(&self.b_vertices).copied().collect();
        for c in short_cycles(&cyl.g, bound.saturating_sub(1)) {
            if c.vertices.iter().any(|v| ends.contains(v)) {
                continue;
            }
            if let Some(r) = cyl.region(&c.edge_set()) {
                if self.ra.is_subset(&r) && r.is_subset(&self.rb) {
                    return Err(Error::PreconditionViolated(format!(
                        "non-contractible cycle of length {} inside the segment",
                        c.len()
                    )));
                }
            }
        }
        Ok(())
    }
}

fn connecting_path(
    g: &EmbeddedGraph,
    gap_edges: &[EdgeId],
    from: &[Vertex],
    to: &[Vertex],
) -> Result<Vec<Vertex>> {
    let n = g.vertex_count();
    let mut adj = vec![Vec::new(); n];
    for &e in gap_edges {
        let ed = g.edge(e);
        adj[ed.u].push(ed.v);
        adj[ed.v].push(ed.u);
    }
    let mut prev = vec![usize::MAX; n];
    let mut queue: VecDeque<Vertex> = VecDeque::new();
    for &v in from {
        prev[v] = v;
        queue.push_back(v);
    }
    while let Some(v) = queue.pop_front() {
        if to.contains(&v) {
            let mut path = vec![v];
            let mut x = v;
            while prev[x] != x {
                x = prev[x];
                path.push(x);
            }
            path.reverse();
            return Ok(path);
        }
        if prev[v] != v && from.contains(&v) {
            continue;
        }
        for &w in &adj[v] {
            if prev[w] == usize::MAX && (!from.contains(&w)) {
                prev[w] = v;
                queue.push_back(w);
            }
        }
    }
    Err(Error::Internal("cycles are not connected inside the segment".into()))
}

/// All colorings of `Ca ∪ Cb` that extend across the segment between two
/// nested non-contractible cycles of a cylinder.
pub fn pair_extension_set(
    g: &EmbeddedGraph,
    ca: &ClosedWalk,
    cb: &ClosedWalk,
    mode: SegmentMode,
) -> Result<PairColoringSet> {
    let cyl = Cylinder::new(g)?;
    let ca = rebase(&cyl.g, ca);
    let cb = rebase(&cyl.g, cb);
    let not_sep = || Error::PreconditionViolated("cycle is contractible".into());
    let ra = cyl.region(&ca.edge_set()).ok_or_else(not_sep)?;
    let rb = cyl.region(&cb.edge_set()).ok_or_else(not_sep)?;
    let mut seg = Segment::new(&cyl, &ca, &ra, &cb, &rb)?;
    if mode == SegmentMode::Fast {
        seg.fast_precondition(&cyl, ca.len(), cb.len())?;
    }
    let mut vs: Vec<Vertex> = seg.a_vertices.iter().chain(&seg.b_vertices).copied().collect();
    vs.sort_unstable();
    vs.dedup();
    let mut pairs = Vec::new();
    for assign in proper_assignments(&vs, &seg.cycle_edges, &Coloring::new(g.vertex_count())) {
        let colors = Coloring::from_pairs(g.vertex_count(), vs.iter().copied().zip(assign.iter().copied()));
        let a: Vec<Color> = seg.a_vertices.iter().map(|&v| colors.get(v).unwrap_or(0)).collect();
        let b: Vec<Color> = seg.b_vertices.iter().map(|&v| colors.get(v).unwrap_or(0)).collect();
        let certificate = match mode {
            SegmentMode::Exact => match seg.extend(&colors)? {
                Some(ext) => {
                    let mut c = colors.clone();
                    for (v, col) in ext {
                        c.set(v, col);
                    }
                    Some(Some(c))
                }
                None => None,
            },
            SegmentMode::Fast => (seg.boundary_winding(&cyl.g, &colors)? == 0).then_some(None),
        };
        if let Some(certificate) = certificate {
            pairs.push(PairEntry { a, b, certificate });
        }
    }
    Ok(PairColoringSet {
        a_vertices: seg.a_vertices,
        b_vertices: seg.b_vertices,
        pairs,
    })
}

/// Re-derives the darts of a walk given by vertices and edges.
fn rebase(g: &EmbeddedGraph, w: &ClosedWalk) -> ClosedWalk {
    ClosedWalk {
        vertices: w.vertices.clone(),
        darts: w.vertices.iter().zip(&w.darts).map(|(&v, d)| dart_from(g, d.edge, v)).collect(),
    }
}
