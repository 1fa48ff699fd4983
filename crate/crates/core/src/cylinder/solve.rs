use std::collections::BTreeMap;

use super::segment::{Segment, SegmentMode};
use super::sequence::split_in;
use super::{proper_assignments, walk_support, Cylinder};
use crate::coloring::{Color, Coloring};
use crate::error::{Error, Result};
use crate::map::EmbeddedGraph;
use crate::result::{SolveResult, Witness};

fn check_cuffs(g: &EmbeddedGraph, psi: &Coloring) -> Result<()> {
    for c in g.cuffs() {
        for i in 0..c.len() {
            let (u, v) = (c[i], c[(i + 1) % c.len()]);
            match (psi.get(u), psi.get(v)) {
                (Some(a), Some(b)) if a != b => {}
                (None, _) => return Err(Error::ImproperBoundary(format!("vertex {u} uncolored"))),
                _ => return Err(Error::ImproperBoundary(format!("edge {u}-{v}"))),
            }
        }
    }
    Ok(())
}

/// Decides whether a coloring of both boundary cycles extends, composing
/// exact pair sets along the short cycle sequence.
pub fn solve_cylinder(g: &EmbeddedGraph, psi: &Coloring) -> Result<SolveResult> {
    solve_cylinder_with(g, psi, SegmentMode::Exact).map(|(r, _)| r)
}

/// As [`solve_cylinder`]; in fast mode, segments meeting the distance and
/// linkedness conditions are decided by the winding criterion and their
/// colorings are found by search afterwards. Returns notes on such segments.
pub fn solve_cylinder_with(
    g: &EmbeddedGraph,
    psi: &Coloring,
    mode: SegmentMode,
) -> Result<(SolveResult, Vec<String>)> {
    let cyl = Cylinder::new(g)?;
    cyl.g
        .check_quadrangulation()
        .map_err(|e| Error::NotCylinder(e.to_string()))?;
    check_cuffs(g, psi)?;
    let n = g.vertex_count();
    let d = cyl.cuff(0).len().max(cyl.cuff(1).len());
    let seq = split_in(&cyl, d)?;
    let mut fixed = Coloring::new(n);
    for c in cyl.g.cuffs() {
        for &v in c {
            if let Some(col) = psi.get(v) {
                fixed.set(v, col);
            }
        }
    }
    let (v0, _) = walk_support(&cyl.g, &seq.cycles[0]);
    let start: Vec<Color> = v0.iter().map(|&v| fixed.get(v).unwrap_or(0)).collect();
    let mut cert0 = vec![None; n];
    for (&v, &c) in v0.iter().zip(&start) {
        cert0[v] = Some(c);
    }
    let mut states: BTreeMap<Vec<Color>, Vec<Option<Color>>> = BTreeMap::from([(start, cert0)]);
    let mut table = vec![format!("C0: {} vertices, 1 coloring", v0.len())];
    let mut deferred: Vec<(usize, Segment)> = Vec::new();
    let mut notes = Vec::new();
    for i in 1..seq.len() {
        let mut seg = Segment::new(&cyl, &seq.cycles[i - 1], &seq.regions[i - 1], &seq.cycles[i], &seq.regions[i])?;
        let fast = mode == SegmentMode::Fast
            && seg
                .fast_precondition(&cyl, seq.cycles[i - 1].len(), seq.cycles[i].len())
                .is_ok();
        let (vb, eb) = walk_support(&cyl.g, &seq.cycles[i]);
        let mut next: BTreeMap<Vec<Color>, Vec<Option<Color>>> = BTreeMap::new();
        for (alpha, cert) in &states {
            let mut base = fixed.clone();
            for (&v, &c) in seg.a_vertices.iter().zip(alpha) {
                base.set(v, c);
            }
            for beta in proper_assignments(&vb, &eb, &base) {
                if next.contains_key(&beta) {
                    continue;
                }
                let mut colors = base.restrict(seg.a_vertices.iter().copied());
                for (&v, &c) in vb.iter().zip(&beta) {
                    colors.set(v, c);
                }
                let ext = if fast {
                    (seg.boundary_winding(&cyl.g, &colors)? == 0).then(Vec::new)
                } else {
                    seg.extend(&colors)?
                };
                if let Some(ext) = ext {
                    let mut c = cert.clone();
                    for (v, col) in colors.assigned().chain(ext) {
                        c[v] = Some(col);
                    }
                    next.insert(beta, c);
                }
            }
        }
        table.push(format!("C{i}: {} vertices, {} colorings", vb.len(), next.len()));
        if fast {
            notes.push(format!("segment C{}-C{i}: certificate by search", i - 1));
            deferred.push((i, seg));
        }
        states = next;
        if states.is_empty() {
            return Ok((SolveResult::No(Witness::Exhausted(table)), notes));
        }
    }
    let Some(cert) = states.into_values().next() else {
        return Ok((SolveResult::No(Witness::Exhausted(table)), notes));
    };
    let mut out = Coloring::new(n);
    for (v, c) in cert.iter().enumerate() {
        if let Some(c) = c {
            out.set(v, *c);
        }
    }
    for (i, seg) in &deferred {
        let part = seg
            .search_certificate(&cyl.g, &out)
            .ok_or_else(|| Error::Internal(format!("winding-admissible segment C{i} has no extension")))?;
        for (v, c) in part {
            out.set(v, c);
        }
    }
    fill_isolated(&cyl.g, &mut out);
    Ok((SolveResult::Yes(out), notes))
}

/// Colors vertices outside every face (only possible for degenerate input).
fn fill_isolated(g: &EmbeddedGraph, c: &mut Coloring) {
    let adj = g.adjacency();
    for v in 0..g.vertex_count() {
        if c.get(v).is_none() {
            let used: Vec<Color> = adj[v].iter().filter_map(|&(w, _)| c.get(w)).collect();
            let col: Color = (1..=3).find(|x| !used.contains(x)).unwrap_or(1);
            c.set(v, col);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::verify_coloring;
    use crate::testkit::{generate, oracle_solve, precolor, proper_cycle_colorings, GeneratorSpec};

    fn pre(g: &EmbeddedGraph, a: &[Color], b: &[Color]) -> Coloring {
        let mut p = precolor(g.vertex_count(), &g.cuffs()[0], a);
        for (&v, &c) in g.cuffs()[1].iter().zip(b) {
            p.set(v, c);
        }
        p
    }

    #[test]
    fn cube_examples() {
        let g = generate(&GeneratorSpec::GridCylinder(4, 2)).unwrap();
        let p = pre(&g, &[1, 2, 1, 2], &[2, 1, 2, 1]);
        let r = solve_cylinder(&g, &p).unwrap();
        assert!(verify_coloring(&g, r.coloring().unwrap(), &p));
        let p = pre(&g, &[1, 2, 1, 2], &[1, 2, 1, 2]);
        assert!(solve_cylinder(&g, &p).unwrap().is_no());
    }

    #[test]
    fn c4_by_p5_matches_oracle() {
        let g = generate(&GeneratorSpec::GridCylinder(4, 5)).unwrap();
        let cols = proper_cycle_colorings(4);
        for a in cols.iter().take(3) {
            for b in &cols {
                let p = pre(&g, a, b);
                let r = solve_cylinder(&g, &p).unwrap();
                assert_eq!(r.is_yes(), oracle_solve(&g, &p).is_yes(), "{a:?} {b:?}");
                if let Some(c) = r.coloring() {
                    assert!(verify_coloring(&g, c, &p));
                }
            }
        }
    }

    #[test]
    fn c6_by_p3_samples() {
        let g = generate(&GeneratorSpec::GridCylinder(6, 3)).unwrap();
        let cols = proper_cycle_colorings(6);
        for (i, a) in cols.iter().enumerate().step_by(11) {
            for b in cols.iter().skip(i % 7).step_by(9) {
                let p = pre(&g, a, b);
                let r = solve_cylinder(&g, &p).unwrap();
                assert_eq!(r.is_yes(), oracle_solve(&g, &p).is_yes(), "{a:?} {b:?}");
            }
        }
    }

    #[test]
    fn fast_mode_agrees() {
        let g = generate(&GeneratorSpec::GridCylinder(4, 5)).unwrap();
        let p = pre(&g, &[1, 2, 3, 2], &[3, 1, 3, 2]);
        let (r, _) = solve_cylinder_with(&g, &p, SegmentMode::Fast).unwrap();
        assert_eq!(r.is_yes(), solve_cylinder(&g, &p).unwrap().is_yes());
    }
}
