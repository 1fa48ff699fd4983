//! Colorings with colors `{1, 2, 3}`, edge increments, winding numbers and
//! the parity invariant.

use std::fmt;

use crate::error::{Error, Result};
use crate::map::{ClosedWalk, EmbeddedGraph, End, Vertex};

pub type Color = u8;

/// The color following `c` in the cyclic order 1 -> 2 -> 3 -> 1.
pub fn next_color(c: Color) -> Color {
    c % 3 + 1
}

pub fn prev_color(c: Color) -> Color {
    (c + 1) % 3 + 1
}

/// A partial or total assignment of colors to vertices.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Coloring {
    colors: Vec<Option<Color>>,
}

pub type Precoloring = Coloring;

impl Coloring {
    pub fn new(vertex_count: usize) -> Self {
        Coloring {
            colors: vec![None; vertex_count],
        }
    }

    pub fn from_total(colors: &[Color]) -> Self {
        Coloring {
            colors: colors.iter().map(|&c| Some(c)).collect(),
        }
    }

    pub fn from_pairs(vertex_count: usize, pairs: impl IntoIterator<Item = (Vertex, Color)>) -> Self {
        let mut c = Coloring::new(vertex_count);
        for (v, col) in pairs {
            c.set(v, col);
        }
        c
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn get(&self, v: Vertex) -> Option<Color> {
        self.colors.get(v).copied().flatten()
    }

    pub fn set(&mut self, v: Vertex, c: Color) {
        if v >= self.colors.len() {
            self.colors.resize(v + 1, None);
        }
        self.colors[v] = Some(c);
    }

    pub fn unset(&mut self, v: Vertex) {
        if v < self.colors.len() {
            self.colors[v] = None;
        }
    }

    pub fn is_total(&self) -> bool {
        self.colors.iter().all(Option::is_some)
    }

    /// Assigned `(vertex, color)` pairs in vertex order.
    pub fn assigned(&self) -> impl Iterator<Item = (Vertex, Color)> + '_ {
        self.colors
            .iter()
            .enumerate()
            .filter_map(|(v, c)| c.map(|c| (v, c)))
    }

    pub fn as_slice(&self) -> &[Option<Color>] {
        &self.colors
    }

    /// Keeps only the listed vertices.
    pub fn restrict(&self, vertices: impl IntoIterator<Item = Vertex>) -> Coloring {
        let mut out = Coloring::new(self.colors.len());
        for v in vertices {
            if let Some(c) = self.get(v) {
                out.set(v, c);
            }
        }
        out
    }

    /// Total coloring as a plain vector, if total.
    pub fn to_total(&self) -> Option<Vec<Color>> {
        self.colors.iter().copied().collect()
    }

    fn color(&self, v: Vertex) -> Result<Color> {
        self.get(v).ok_or(Error::Uncolored(v))
    }
}

/// Edge increment: `+1` iff the color advances cyclically from `u` to `v`.
pub fn delta_edge(psi: &Coloring, u: Vertex, v: Vertex) -> Result<i64> {
    let (a, b) = (psi.color(u)?, psi.color(v)?);
    if a == b {
        return Err(Error::ImproperEdge { u, v });
    }
    Ok(if next_color(a) == b { 1 } else { -1 })
}

/// Sum of increments along a closed vertex sequence.
pub fn delta_walk(psi: &Coloring, vertices: &[Vertex]) -> Result<i64> {
    let n = vertices.len();
    let mut s = 0;
    for i in 0..n {
        s += delta_edge(psi, vertices[i], vertices[(i + 1) % n])?;
    }
    Ok(s)
}

/// Sum of increments along an open path.
pub fn delta_path(psi: &Coloring, vertices: &[Vertex]) -> Result<i64> {
    let mut s = 0;
    for w in vertices.windows(2) {
        s += delta_edge(psi, w[0], w[1])?;
    }
    Ok(s)
}

/// Winding number of a closed walk.
pub fn winding(psi: &Coloring, q: &ClosedWalk) -> Result<i64> {
    let d = delta_walk(psi, &q.vertices)?;
    if d % 3 != 0 {
        return Err(Error::Internal(format!("increment sum {d} not divisible by 3")));
    }
    Ok(d / 3)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Satisfied,
    Violated,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Satisfied => "Satisfied",
            Verdict::Violated => "Violated",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WindingReport {
    pub per_boundary: Vec<i64>,
    pub total: i64,
    pub parity_p: Option<i64>,
    pub verdict: Verdict,
}

impl WindingReport {
    pub fn satisfied(&self) -> bool {
        self.verdict == Verdict::Satisfied
    }
}

/// Direction in which an orbit traverses each of its edges.
fn traversals(g: &EmbeddedGraph, orbit: usize, out: &mut [Vec<End>]) {
    for s in &g.faces().orbit(orbit).states {
        out[s.dart.edge].push(s.dart.end);
    }
}

/// Default facial orientation: the orbit of the pair holding the smallest dart.
fn default_face_orbit(g: &EmbeddedGraph, pair: usize) -> usize {
    let t = g.faces();
    let r = t.orbit(pair).reverse;
    let min = |o: usize| t.orbit(o).states.iter().map(|s| s.dart).min();
    if min(pair) <= min(r) {
        pair
    } else {
        r
    }
}

/// `2|D| mod 4`, where `D` holds the edges traversed in the same direction
/// by both incident orbits. Cuffs use their stored direction; face `i`
/// (in the order of `FaceTable::faces`) is reversed from its default when
/// `flips[i]` is set.
pub fn parity_invariant(g: &EmbeddedGraph, flips: Option<&[bool]>) -> Result<i64> {
    g.check_quadrangulation()?;
    let t = g.faces();
    let mut dirs = vec![Vec::new(); g.edge_count()];
    for (i, &f) in t.faces().iter().enumerate() {
        let mut o = default_face_orbit(g, f);
        if flips.and_then(|fl| fl.get(i)).copied().unwrap_or(false) {
            o = t.orbit(o).reverse;
        }
        traversals(g, o, &mut dirs);
    }
    for &o in t.cuff_orbits() {
        traversals(g, o, &mut dirs);
    }
    let d = dirs.iter().filter(|v| v.len() == 2 && v[0] == v[1]).count() as i64;
    Ok((2 * d) % 4)
}

/// Orbit of the pair containing `o` whose states are all unflipped; only
/// meaningful on an all-positive embedding.
pub fn clockwise_orbit(g: &EmbeddedGraph, o: usize) -> usize {
    let t = g.faces();
    if t.orbit(o).states[0].flipped {
        t.orbit(o).reverse
    } else {
        o
    }
}

/// Winding numbers of all cuffs and the constraint verdict.
pub fn winding_report(g: &EmbeddedGraph, psi: &Coloring) -> Result<WindingReport> {
    g.check_quadrangulation()?;
    let (per_boundary, parity_p) = if g.is_orientable() {
        let n = g.orientation_normalize()?;
        let per = (0..n.cuffs().len())
            .map(|i| {
                let o = clockwise_orbit(&n, n.faces().cuff_orbit(i));
                winding(psi, &n.faces().orbit_walk(&n, o))
            })
            .collect::<Result<Vec<_>>>()?;
        (per, None)
    } else {
        let per = (0..g.cuffs().len())
            .map(|i| winding(psi, &g.cuff_walk(i)))
            .collect::<Result<Vec<_>>>()?;
        (per, Some(parity_invariant(g, None)?))
    };
    let total: i64 = per_boundary.iter().sum();
    let ok = match parity_p {
        None => total == 0,
        Some(p) => (total - p).rem_euclid(4) == 0,
    };
    Ok(WindingReport {
        per_boundary,
        total,
        parity_p,
        verdict: if ok { Verdict::Satisfied } else { Verdict::Violated },
    })
}

/// Colors a path `r0 .. rn` with `r0 = c0`, `rn = cn` and increment sum `w`.
pub fn color_path(n: usize, w: i64, c0: Color, cn: Color) -> Result<Vec<Color>> {
    let bad = |m: &str| Err(Error::InfeasibleParameters(m.to_string()));
    if !(1..=3).contains(&c0) || !(1..=3).contains(&cn) {
        return bad("colors must be 1, 2 or 3");
    }
    if n % 2 != 0 || w % 2 != 0 {
        return bad("n and w must be even");
    }
    if w.unsigned_abs() as usize > n {
        return bad("|w| exceeds n");
    }
    if (i64::from(c0) + w - i64::from(cn)).rem_euclid(3) != 0 {
        return bad("cn is not c0 + w modulo 3");
    }
    let mut out = vec![c0];
    let mut rest = n;
    while rest > w.unsigned_abs() as usize {
        out.push(next_color(c0));
        out.push(c0);
        rest -= 2;
    }
    let mut c = c0;
    for _ in 0..rest {
        c = if w > 0 { next_color(c) } else { prev_color(c) };
        out.push(c);
    }
    Ok(out)
}

/// Whether the coloring of the cycle `c` is `(d, k)`-tame: no color repeats
/// at distance exactly three, and the vertices split into at most `k`
/// two-colored paths of length at least `d`.
pub fn is_tame(psi: &Coloring, c: &[Vertex], d: usize, k: usize) -> Result<bool> {
    delta_walk(psi, c)?;
    let n = c.len();
    let col: Vec<Color> = c.iter().map(|&v| psi.color(v)).collect::<Result<_>>()?;
    if n >= 6 && (0..n).any(|i| col[i] == col[(i + 3) % n]) {
        return Ok(false);
    }
    let two_colored = |s: usize, len: usize| {
        let mut seen = [false; 4];
        for j in 0..len {
            seen[col[(s + j) % n] as usize] = true;
        }
        seen.iter().filter(|&&x| x).count() <= 2
    };
    // minimum number of valid arcs covering positions s .. s+n, cut at s
    for s in 0..n {
        let mut best = vec![usize::MAX; n + 1];
        best[0] = 0;
        for end in 1..=n {
            for start in 0..end {
                let len = end - start;
                if best[start] == usize::MAX || len < d + 1 || !two_colored(s + start, len) {
                    continue;
                }
                best[end] = best[end].min(best[start] + 1);
            }
        }
        if best[n] <= k {
            return Ok(true);
        }
    }
    Ok(false)
}

/// True iff `psi` is total, proper and agrees with `pre`.
pub fn verify_coloring(g: &EmbeddedGraph, psi: &Coloring, pre: &Coloring) -> bool {
    if psi.len() < g.vertex_count() || (0..g.vertex_count()).any(|v| psi.get(v).is_none()) {
        return false;
    }
    if (0..g.vertex_count()).any(|v| !matches!(psi.get(v), Some(1..=3))) {
        return false;
    }
    if g.edges().iter().any(|e| psi.get(e.u) == psi.get(e.v)) {
        return false;
    }
    pre.assigned().all(|(v, c)| psi.get(v) == Some(c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testkit::{generate, GeneratorSpec};

    fn cyc(colors: &[Color]) -> (Coloring, Vec<Vertex>) {
        (Coloring::from_total(colors), (0..colors.len()).collect())
    }

    #[test]
    fn delta_examples() {
        let c = Coloring::from_total(&[1, 2, 3, 2]);
        assert_eq!(delta_edge(&c, 0, 1).unwrap(), 1);
        assert_eq!(delta_edge(&c, 2, 0).unwrap(), 1);
        assert_eq!(delta_edge(&c, 1, 0).unwrap(), -1);
        assert_eq!(delta_edge(&c, 1, 3), Err(Error::ImproperEdge { u: 1, v: 3 }));
        let p = Coloring::new(2);
        assert_eq!(delta_edge(&p, 0, 1), Err(Error::Uncolored(0)));
    }

    #[test]
    fn winding_examples() {
        let (c, vs) = cyc(&[1, 2, 3, 1, 2, 3]);
        assert_eq!(delta_walk(&c, &vs).unwrap() / 3, 2);
        let (c, vs) = cyc(&[1, 2, 1, 2, 1, 2]);
        assert_eq!(delta_walk(&c, &vs).unwrap(), 0);
    }

    #[test]
    fn octagon_boundary_violates() {
        let g = generate(&GeneratorSpec::GridDisk(3, 3)).unwrap();
        let mut psi = Coloring::new(9);
        for (v, c) in g.cuffs()[0].iter().zip([1, 2, 3, 1, 2, 3, 1, 2]) {
            psi.set(*v, c);
        }
        let r = winding_report(&g, &psi).unwrap();
        assert_eq!(r.total.abs(), 2);
        assert_eq!(r.verdict, Verdict::Violated);
    }

    #[test]
    fn cylinder_fours_are_satisfied() {
        let g = generate(&GeneratorSpec::GridCylinder(4, 5)).unwrap();
        let psi = Coloring::from_pairs(20, (0..4).map(|i| (i, [1, 2, 1, 3][i])).chain((16..20).map(|v| (v, [2, 3, 2, 3][v - 16]))));
        let r = winding_report(&g, &psi).unwrap();
        assert_eq!(r.per_boundary, vec![0, 0]);
        assert!(r.satisfied());
    }

    #[test]
    fn k4_parity_is_two() {
        let g = generate(&GeneratorSpec::K4Projective).unwrap();
        assert_eq!(parity_invariant(&g, None).unwrap(), 2);
        let r = winding_report(&g, &Coloring::new(4)).unwrap();
        assert_eq!(r.verdict, Verdict::Violated);
    }

    #[test]
    fn color_path_examples() {
        assert_eq!(color_path(4, 4, 1, 2).unwrap(), vec![1, 2, 3, 1, 2]);
        let p = color_path(2, 0, 1, 1).unwrap();
        assert_eq!((p[0], p[2]), (1, 1));
        let p = color_path(6, -2, 2, 3).unwrap();
        let c = Coloring::from_total(&p);
        let vs: Vec<_> = (0..7).collect();
        assert_eq!(delta_path(&c, &vs).unwrap(), -2);
        assert_eq!((p[0], p[6]), (2, 3));
        assert!(color_path(3, 1, 1, 2).is_err());
        assert!(color_path(2, 4, 1, 2).is_err());
        assert!(color_path(2, 2, 1, 1).is_err());
    }

    #[test]
    fn tame_examples() {
        let (c, vs) = cyc(&[1, 2, 1, 2, 1, 2, 1, 2]);
        assert!(is_tame(&c, &vs, 7, 1).unwrap());
        let (c, vs) = cyc(&[1, 2, 3, 1, 2, 3]);
        assert!(!is_tame(&c, &vs, 1, 6).unwrap());
        // the closing edge r11 r0 is monochromatic
        let (c, vs) = cyc(&[1, 2, 1, 2, 1, 2, 3, 1, 3, 1, 3, 1]);
        assert_eq!(is_tame(&c, &vs, 4, 2), Err(Error::ImproperEdge { u: 11, v: 0 }));
        let (c, vs) = cyc(&[1, 2, 1, 2, 3, 2, 3, 2]);
        assert!(is_tame(&c, &vs, 3, 2).unwrap());
        assert!(!is_tame(&c, &vs, 3, 1).unwrap());
        assert!(!is_tame(&c, &vs, 4, 2).unwrap());
    }

    #[test]
    fn verify_examples() {
        let g = generate(&GeneratorSpec::GridDisk(2, 2)).unwrap();
        let ok = Coloring::from_total(&[1, 2, 2, 1]);
        assert!(verify_coloring(&g, &ok, &Coloring::new(4)));
        let bad = Coloring::from_total(&[1, 1, 2, 1]);
        assert!(!verify_coloring(&g, &bad, &Coloring::new(4)));
        let pre = Coloring::from_pairs(4, [(0, 3)]);
        assert!(!verify_coloring(&g, &ok, &pre));
    }

    #[test]
    fn color_permutation_properties() {
        let g = generate(&GeneratorSpec::GridDisk(3, 3)).unwrap();
        let b = g.cuffs()[0].clone();
        let base = [1, 2, 1, 3, 2, 3, 1, 2];
        let psi = Coloring::from_pairs(9, b.iter().copied().zip(base));
        let rot = Coloring::from_pairs(9, b.iter().copied().zip(base.map(next_color)));
        let a = winding_report(&g, &psi).unwrap();
        assert_eq!(a, winding_report(&g, &rot).unwrap());
    }
}
