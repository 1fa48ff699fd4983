use std::collections::BTreeSet;

use super::{short_cycles, Cylinder};
use crate::error::{Error, Result};
use crate::map::{ClosedWalk, EmbeddedGraph};

/// Non-contractible cycles `C0 = B1, ..., Cm = B2`, each weakly between
/// its predecessor and `B2`.
#[derive(Clone, Debug)]
pub struct CycleSequence {
    pub cycles: Vec<ClosedWalk>,
    pub d: usize,
    /// Faces on the `B1` side of each cycle.
    pub regions: Vec<BTreeSet<usize>>,
}

impl CycleSequence {
    pub fn len(&self) -> usize {
        self.cycles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }
}

/// Walks from `B1` to `B2`, each time taking the non-contractible cycle of
/// length at most `d` whose `B1` side is the smallest strict extension of
/// the current one. Cycles are found by exhaustive enumeration.
pub fn split_cylinder(g: &EmbeddedGraph, d: usize) -> Result<CycleSequence> {
    let cyl = Cylinder::new(g)?;
    split_in(&cyl, d)
}

pub(crate) fn split_in(cyl: &Cylinder, d: usize) -> Result<CycleSequence> {
    let (b1, b2) = (cyl.cuff(0), cyl.cuff(1));
    if b1.len() > d || b2.len() > d {
        return Err(Error::PreconditionViolated(format!(
            "boundary lengths {} and {} exceed bound {d}",
            b1.len(),
            b2.len()
        )));
    }
    let mut candidates: Vec<(BTreeSet<usize>, ClosedWalk)> = short_cycles(&cyl.g, d)
        .into_iter()
        .filter_map(|c| cyl.region(&c.edge_set()).map(|r| (r, c)))
        .collect();
    candidates.sort_by(|a, b| {
        (a.0.len(), a.1.len(), a.1.edge_set()).cmp(&(b.0.len(), b.1.len(), b.1.edge_set()))
    });
    let all = cyl.face_count();
    let r1 = cyl.region(&b1.edge_set()).ok_or_else(|| Error::Internal("B1 does not separate".into()))?;
    let mut cycles = vec![b1];
    let mut regions = vec![r1];
    loop {
        let cur = &regions[regions.len() - 1];
        if cur.len() == all {
            break;
        }
        let next = candidates
            .iter()
            .find(|(r, _)| r.len() > cur.len() && cur.is_subset(r))
            .cloned();
        match next {
            Some((r, c)) if r.len() < all => {
                cycles.push(c);
                regions.push(r);
            }
            _ => {
                let r2 = cyl.region(&b2.edge_set()).unwrap_or_default();
                cycles.push(b2.clone());
                regions.push(r2);
                break;
            }
        }
    }
    Ok(CycleSequence { cycles, d, regions })
}

/// Checks every invariant of a sequence by enumerating all
/// non-contractible cycles of length at most `d`.
pub fn verify_sequence(g: &EmbeddedGraph, seq: &CycleSequence) -> Result<()> {
    let cyl = Cylinder::new(g)?;
    let fail = |m: String| Err(Error::Internal(m));
    let m = seq.cycles.len();
    if m < 2 {
        return fail("sequence shorter than two cycles".into());
    }
    if seq.cycles[0].edge_set() != cyl.cuff(0).edge_set() || seq.cycles[m - 1].edge_set() != cyl.cuff(1).edge_set() {
        return fail("sequence does not run from B1 to B2".into());
    }
    let mut regions = Vec::new();
    for (i, c) in seq.cycles.iter().enumerate() {
        if c.len() > seq.d {
            return fail(format!("C{i} has length {} > {}", c.len(), seq.d));
        }
        match cyl.region(&c.edge_set()) {
            Some(r) => regions.push(r),
            None => return fail(format!("C{i} is contractible")),
        }
    }
    let short: Vec<(BTreeSet<usize>, ClosedWalk)> = short_cycles(&cyl.g, seq.d)
        .into_iter()
        .filter_map(|c| cyl.region(&c.edge_set()).map(|r| (r, c)))
        .collect();
    for i in 0..m - 1 {
        let (ra, rb) = (&regions[i], &regions[i + 1]);
        if !ra.is_subset(rb) || ra == rb {
            return fail(format!("C{} is not strictly between C{i} and B2", i + 1));
        }
        let va: BTreeSet<_> = seq.cycles[i].vertices.iter().collect();
        let vb: BTreeSet<_> = seq.cycles[i + 1].vertices.iter().collect();
        if !va.is_disjoint(&vb) {
            continue;
        }
        for (r, c) in &short {
            let inside = ra.is_subset(r) && r.is_subset(rb) && r != ra && r != rb;
            let open = c.vertices.iter().all(|v| !va.contains(v) && !vb.contains(v));
            if inside && open {
                return fail(format!("gap {i} contains a short cycle {:?}", c.vertices));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testkit::{generate, GeneratorSpec};

    #[test]
    fn cube_is_its_two_boundaries() {
        let g = generate(&GeneratorSpec::GridCylinder(4, 2)).unwrap();
        let s = split_cylinder(&g, 4).unwrap();
        assert_eq!(s.len(), 2);
        verify_sequence(&g, &s).unwrap();
    }

    #[test]
    fn tall_grid_uses_every_ring() {
        let g = generate(&GeneratorSpec::GridCylinder(4, 6)).unwrap();
        let s = split_cylinder(&g, 4).unwrap();
        assert_eq!(s.len(), 6);
        verify_sequence(&g, &s).unwrap();
        for (j, c) in s.cycles.iter().enumerate() {
            let vs: BTreeSet<_> = c.vertices.iter().copied().collect();
            assert_eq!(vs, (4 * j..4 * j + 4).collect());
        }
    }

    #[test]
    fn bound_is_respected() {
        let g = generate(&GeneratorSpec::GridCylinder(6, 3)).unwrap();
        let s = split_cylinder(&g, 6).unwrap();
        assert!(s.cycles.iter().all(|c| c.len() <= 6));
        verify_sequence(&g, &s).unwrap();
        assert!(matches!(split_cylinder(&g, 5), Err(Error::PreconditionViolated(_))));
    }

    #[test]
    fn rejects_non_cylinders() {
        let g = generate(&GeneratorSpec::GridDisk(3, 3)).unwrap();
        assert!(matches!(split_cylinder(&g, 8), Err(Error::NotCylinder(_))));
    }
}
