//! Top-level solver: winding checks, base cases, and recursion over cuts
//! along short essential subgraphs.

use std::collections::{BTreeSet, VecDeque};

use rayon::prelude::*;

use crate::coloring::{winding_report, Color, Coloring, WindingReport};
use crate::cylinder::{short_cycles, solve_cylinder};
use crate::disk::solve_disk;
use crate::error::{Error, Result};
use crate::map::{
    classify_cycle, cut_along, find_essential, CutPiece, CycleClass, Edge, EmbeddedGraph, Subgraph,
    SurfaceSignature, Vertex,
};
pub use crate::result::{SolveResult, SpokeWitness, Witness};
use crate::testkit::{backtrack, oracle_outcome, OracleOutcome};

#[derive(Clone, Debug)]
pub struct SolveConfig {
    /// Largest essential subgraph (in edges) searched for before giving up.
    pub essential_budget: usize,
    /// Enables heuristic verdicts when no essential subgraph of at most
    /// `essential_budget >= nu` edges exists.
    pub heuristic_nu: Option<usize>,
    /// Worker threads for the enumeration of cut colorings.
    pub threads: usize,
    /// Node limit for the certificate search in heuristic mode.
    pub search_limit: u64,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            essential_budget: 12,
            heuristic_nu: None,
            threads: 1,
            search_limit: 1_000_000,
        }
    }
}

impl SolveConfig {
    /// Reads `QUADCOLOR_THREADS` (default 1).
    pub fn from_env() -> Self {
        let threads = std::env::var("QUADCOLOR_THREADS")
            .ok()
            .and_then(|s| s.trim().parse().ok())
            .filter(|&t: &usize| t >= 1)
            .unwrap_or(1);
        SolveConfig {
            threads,
            ..Default::default()
        }
    }
}

/// One level of the decomposition: the surface, the subgraph cut along,
/// and the pieces.
#[derive(Clone, Debug)]
pub struct DecompositionNode {
    pub signature: SurfaceSignature,
    pub cut_subgraph: Subgraph,
    pub pieces: Vec<CutPiece>,
    /// Colorings of the cut subgraph tried so far.
    pub enumerated: usize,
}

fn order_key(s: &SurfaceSignature) -> (usize, usize) {
    (s.euler_genus, s.cuffs)
}

impl DecompositionNode {
    /// Every piece has smaller (Euler genus, cuffs) than the parent.
    pub fn simplifies(&self) -> bool {
        let parent = order_key(&self.signature);
        self.pieces
            .iter()
            .all(|p| order_key(&p.graph.signature()) < parent)
    }
}

/// Cuts along the first essential subgraph within the budget.
pub fn decompose(g: &EmbeddedGraph, budget: usize) -> Result<Option<DecompositionNode>> {
    let Some(h) = find_essential(g, budget)? else {
        return Ok(None);
    };
    let (pieces, _) = cut_along(g, &h)?;
    Ok(Some(DecompositionNode {
        signature: g.signature(),
        cut_subgraph: h,
        pieces,
        enumerated: 0,
    }))
}

/// The winding report; a violated verdict proves that no extension exists.
pub fn necessary_check(g: &EmbeddedGraph, psi: &Coloring) -> Result<WindingReport> {
    winding_report(g, psi)
}

fn check_precoloring(g: &EmbeddedGraph, psi: &Coloring) -> Result<()> {
    let on_cuff = g.cuff_of_vertex();
    for (v, _) in psi.assigned() {
        if v >= g.vertex_count() || on_cuff[v].is_none() {
            return Err(Error::BadParameters(format!("precolored vertex {v} is not on a cuff")));
        }
    }
    for c in g.cuffs() {
        for i in 0..c.len() {
            let (u, v) = (c[i], c[(i + 1) % c.len()]);
            match (psi.get(u), psi.get(v)) {
                (Some(a), Some(b)) if a != b => {}
                (None, _) => return Err(Error::ImproperBoundary(format!("cuff vertex {u} uncolored"))),
                _ => return Err(Error::ImproperBoundary(format!("edge {u}-{v}"))),
            }
        }
    }
    Ok(())
}

/// Decides whether the precoloring of the cuffs extends to a 3-coloring.
pub fn solve(g: &EmbeddedGraph, psi: &Coloring, config: &SolveConfig) -> Result<SolveResult> {
    g.check_quadrangulation()?;
    for (i, w) in (0..g.cuffs().len()).map(|i| (i, g.cuff_walk(i))) {
        if !w.is_cycle() {
            return Err(Error::NotACycle(format!("cuff {i} is not a cycle")));
        }
    }
    check_precoloring(g, psi)?;
    let (cleaned, removed) = clean_with_map(g);
    let result = if removed.iter().any(|&r| r) {
        let keep: Vec<Vertex> = (0..g.vertex_count()).filter(|&v| !removed[v]).collect();
        let sub_psi = Coloring::from_pairs(
            cleaned.vertex_count(),
            keep.iter().enumerate().filter_map(|(i, &v)| psi.get(v).map(|c| (i, c))),
        );
        let r = solve_rec(&cleaned, &sub_psi, config, 0)?;
        lift_cleaned(g, &keep, r)?
    } else {
        solve_rec(g, psi, config, 0)?
    };
    Ok(result)
}

fn run_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    if threads <= 1 {
        return f();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

fn solve_rec(g: &EmbeddedGraph, psi: &Coloring, config: &SolveConfig, depth: usize) -> Result<SolveResult> {
    let report = necessary_check(g, psi)?;
    if !report.satisfied() {
        return Ok(SolveResult::No(Witness::WindingViolation(report)));
    }
    let sig = g.signature();
    if sig.euler_genus == 0 && sig.cuffs == 0 {
        return two_coloring(g).map(SolveResult::Yes);
    }
    if sig.is_disk() {
        return solve_disk(g, psi);
    }
    if sig.is_cylinder() {
        return solve_cylinder(g, psi);
    }
    let Some(mut node) = decompose(g, config.essential_budget)? else {
        return no_essential(g, psi, config, &report);
    };
    if !node.simplifies() {
        return Err(Error::Internal(format!(
            "cut along {} edges does not simplify the surface",
            node.cut_subgraph.len()
        )));
    }
    let h_vertices: Vec<Vertex> = node
        .cut_subgraph
        .iter()
        .flat_map(|&e| [g.edge(e).u, g.edge(e).v])
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let h_edges: Vec<(Vertex, Vertex)> = node
        .cut_subgraph
        .iter()
        .map(|&e| (g.edge(e).u, g.edge(e).v))
        .collect();
    let colorings = crate::cylinder::proper_assignments(&h_vertices, &h_edges, psi);
    node.enumerated = colorings.len();
    let attempt = |assign: &Vec<Color>| -> Option<Result<SolveResult>> {
        let mut full = psi.clone();
        for (&v, &c) in h_vertices.iter().zip(assign) {
            full.set(v, c);
        }
        match solve_pieces(g, &node.pieces, &full, config, depth) {
            Ok(Some(r)) => Some(Ok(r)),
            Ok(None) => None,
            Err(e) => Some(Err(e)),
        }
    };
    let found = run_pool(config.threads, || {
        if config.threads > 1 {
            colorings.par_iter().find_map_first(attempt)
        } else {
            colorings.iter().find_map(attempt)
        }
    });
    match found {
        Some(r) => r,
        None => Ok(SolveResult::No(Witness::Exhausted(vec![format!(
            "depth {depth}: Euler genus {} with {} cuffs, cut along {} edges, {} colorings of {} vertices exhausted",
            node.signature.euler_genus,
            node.signature.cuffs,
            node.cut_subgraph.len(),
            node.enumerated,
            h_vertices.len()
        )]))),
    }
}

/// Solves every piece under the coloring induced from `full`; `None` when
/// some piece has no extension.
fn solve_pieces(
    g: &EmbeddedGraph,
    pieces: &[CutPiece],
    full: &Coloring,
    config: &SolveConfig,
    depth: usize,
) -> Result<Option<SolveResult>> {
    let mut out = full.clone();
    let mut heuristic: Option<String> = None;
    for p in pieces {
        let pg = &p.graph;
        let on_cuff = pg.cuff_of_vertex();
        let pre = Coloring::from_pairs(
            pg.vertex_count(),
            (0..pg.vertex_count())
                .filter(|&i| on_cuff[i].is_some())
                .filter_map(|i| full.get(p.vertex_map[i]).map(|c| (i, c))),
        );
        let r = solve_rec(pg, &pre, config, depth + 1)?;
        let c = match r {
            SolveResult::Yes(c) => c,
            SolveResult::HeuristicYes(Some(c), note) => {
                heuristic = Some(note);
                c
            }
            SolveResult::HeuristicYes(None, note) => {
                return Ok(Some(SolveResult::HeuristicYes(None, note)));
            }
            SolveResult::No(_) | SolveResult::HeuristicNo(_) => return Ok(None),
        };
        for (i, col) in c.assigned() {
            let v = p.vertex_map[i];
            match out.get(v) {
                Some(x) if x != col => {
                    return Err(Error::Internal(format!("copies of vertex {v} disagree")));
                }
                _ => out.set(v, col),
            }
        }
    }
    fill_uncolored(g, &mut out)?;
    Ok(Some(match heuristic {
        Some(note) => SolveResult::HeuristicYes(Some(out), note),
        None => SolveResult::Yes(out),
    }))
}

fn fill_uncolored(g: &EmbeddedGraph, c: &mut Coloring) -> Result<()> {
    if c.is_total() {
        return Ok(());
    }
    let edges: Vec<(Vertex, Vertex)> = g.edges().iter().map(|e| (e.u, e.v)).collect();
    match backtrack(g.vertex_count(), &edges, c, None) {
        OracleOutcome::Colored(all) => {
            *c = Coloring::from_total(&all);
            Ok(())
        }
        _ => Err(Error::Internal("assembled coloring does not extend".into())),
    }
}

fn no_essential(
    g: &EmbeddedGraph,
    psi: &Coloring,
    config: &SolveConfig,
    report: &WindingReport,
) -> Result<SolveResult> {
    let budget = config.essential_budget;
    if let Some(nu) = config.heuristic_nu.filter(|&nu| budget >= nu) {
        let note = format!(
            "no connected essential subgraph with at most {budget} edges (nu = {nu}); winding constraint {}",
            report.verdict
        );
        if !report.satisfied() {
            return Ok(SolveResult::HeuristicNo(note));
        }
        return Ok(match oracle_outcome(g, psi, Some(config.search_limit)) {
            OracleOutcome::Colored(c) => SolveResult::HeuristicYes(Some(Coloring::from_total(&c)), note),
            OracleOutcome::Aborted => SolveResult::HeuristicYes(None, note),
            OracleOutcome::Uncolorable => SolveResult::No(Witness::Exhausted(vec![
                "certificate search exhausted every coloring".into(),
            ])),
        });
    }
    Ok(match oracle_outcome(g, psi, None) {
        OracleOutcome::Colored(c) => SolveResult::Yes(Coloring::from_total(&c)),
        _ => SolveResult::No(Witness::Exhausted(vec![format!(
            "no essential subgraph within {budget} edges; exhaustive search found no coloring"
        )])),
    })
}

/// Proper 2-coloring with colors 1 and 2.
fn two_coloring(g: &EmbeddedGraph) -> Result<Coloring> {
    let adj = g.adjacency();
    let mut col: Vec<Option<Color>> = vec![None; g.vertex_count()];
    for r in 0..g.vertex_count() {
        if col[r].is_some() {
            continue;
        }
        col[r] = Some(1);
        let mut queue = VecDeque::from([r]);
        while let Some(v) = queue.pop_front() {
            let c = col[v].unwrap_or(1);
            for &(w, _) in &adj[v] {
                match col[w] {
                    None => {
                        col[w] = Some(3 - c);
                        queue.push_back(w);
                    }
                    Some(x) if x == c => return Err(Error::Internal("sphere quadrangulation is not bipartite".into())),
                    _ => {}
                }
            }
        }
    }
    Ok(Coloring::from_total(&col.into_iter().map(|c| c.unwrap_or(1)).collect::<Vec<_>>()))
}

fn lift_cleaned(g: &EmbeddedGraph, keep: &[Vertex], r: SolveResult) -> Result<SolveResult> {
    let lift = |c: &Coloring| -> Result<Coloring> {
        let mut out = Coloring::new(g.vertex_count());
        for (i, col) in c.assigned() {
            out.set(keep[i], col);
        }
        fill_uncolored(g, &mut out)?;
        Ok(out)
    };
    Ok(match r {
        SolveResult::Yes(c) => SolveResult::Yes(lift(&c)?),
        SolveResult::HeuristicYes(Some(c), n) => SolveResult::HeuristicYes(Some(lift(&c)?), n),
        SolveResult::No(Witness::SpokeViolation(w)) => SolveResult::No(Witness::SpokeViolation(SpokeWitness {
            spoke: w.spoke.iter().map(|&v| keep[v]).collect(),
            base: w.base.iter().map(|&v| keep[v]).collect(),
            delta_base: w.delta_base,
        })),
        other => other,
    })
}

/// Removes the interiors of contractible non-facial 4-cycles until none
/// is left.
pub fn clean_contractible_quads(g: &EmbeddedGraph) -> EmbeddedGraph {
    clean_with_map(g).0
}

/// The cleaned graph and, for every original vertex, whether it was removed.
/// Surviving vertices keep their relative order.
fn clean_with_map(g: &EmbeddedGraph) -> (EmbeddedGraph, Vec<bool>) {
    let mut cur = g.clone();
    let mut alive: Vec<Vertex> = (0..g.vertex_count()).collect();
    while let Some(inner) = find_bubble(&cur) {
        let Ok((next, kept)) = delete_vertices(&cur, &inner) else { break };
        alive = kept.iter().map(|&i| alive[i]).collect();
        cur = next;
    }
    let mut removed = vec![true; g.vertex_count()];
    for &v in &alive {
        removed[v] = false;
    }
    (cur, removed)
}

/// Interior vertices of a disk bounded by a contractible non-facial 4-cycle.
fn find_bubble(g: &EmbeddedGraph) -> Option<BTreeSet<Vertex>> {
    let t = g.faces();
    let facial: BTreeSet<Vec<usize>> = t
        .faces()
        .iter()
        .map(|&f| t.orbit_edges(f).into_iter().collect())
        .collect();
    for c in short_cycles(g, 4) {
        if c.len() != 4 {
            continue;
        }
        let key: Vec<usize> = c.edge_set().into_iter().collect();
        if facial.contains(&key) {
            continue;
        }
        if classify_cycle(g, &c).ok() != Some(CycleClass::Contractible) {
            continue;
        }
        let Ok((pieces, _)) = cut_along(g, &c.edge_set()) else { continue };
        let on_c: BTreeSet<Vertex> = c.vertices.iter().copied().collect();
        let best = pieces
            .iter()
            .filter(|p| p.graph.signature().euler_genus == 0 && p.cuff_origin.len() == 1 && p.new_holes().len() == 1)
            .map(|p| {
                p.vertex_map
                    .iter()
                    .copied()
                    .filter(|v| !on_c.contains(v))
                    .collect::<BTreeSet<Vertex>>()
            })
            .filter(|s| !s.is_empty())
            .min_by_key(|s| s.len());
        if best.is_some() {
            return best;
        }
    }
    None
}

/// Deletes vertices with their incident edges; returns the new graph and
/// the old index of every surviving vertex.
fn delete_vertices(g: &EmbeddedGraph, gone: &BTreeSet<Vertex>) -> Result<(EmbeddedGraph, Vec<Vertex>)> {
    let kept: Vec<Vertex> = (0..g.vertex_count()).filter(|v| !gone.contains(v)).collect();
    let mut new_index = vec![usize::MAX; g.vertex_count()];
    for (i, &v) in kept.iter().enumerate() {
        new_index[v] = i;
    }
    let mut edge_index = vec![usize::MAX; g.edge_count()];
    let mut edges = Vec::new();
    for (e, ed) in g.edges().iter().enumerate() {
        if new_index[ed.u] != usize::MAX && new_index[ed.v] != usize::MAX {
            edge_index[e] = edges.len();
            edges.push(Edge {
                u: new_index[ed.u],
                v: new_index[ed.v],
                sign: ed.sign,
            });
        }
    }
    let rotations = kept
        .iter()
        .map(|&v| {
            g.rotation(v)
                .iter()
                .filter(|d| edge_index[d.edge] != usize::MAX)
                .map(|d| crate::map::Dart::new(edge_index[d.edge], d.end))
                .collect()
        })
        .collect();
    let cuffs: Vec<Vec<Vertex>> = g
        .cuffs()
        .iter()
        .map(|c| c.iter().map(|&v| new_index[v]).collect())
        .collect();
    let h = EmbeddedGraph::new(kept.len(), edges, rotations, cuffs)?;
    Ok((h, kept))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::verify_coloring;
    use crate::testkit::{generate, oracle_solve, GeneratorSpec};

    #[test]
    fn cube_is_bipartite() {
        let g = crate::map::EmbeddedGraph::from_faces(
            8,
            &[
                vec![0, 1, 2, 3],
                vec![4, 7, 6, 5],
                vec![0, 4, 5, 1],
                vec![1, 5, 6, 2],
                vec![2, 6, 7, 3],
                vec![3, 7, 4, 0],
            ],
            vec![],
        )
        .unwrap();
        assert_eq!(g.signature().euler_genus, 0);
        let r = solve(&g, &Coloring::new(8), &SolveConfig::default()).unwrap();
        assert!(verify_coloring(&g, r.coloring().unwrap(), &Coloring::new(8)));
    }

    #[test]
    fn closed_examples() {
        let cfg = SolveConfig::default();
        let g = generate(&GeneratorSpec::GridTorus(4, 4)).unwrap();
        let r = solve(&g, &Coloring::new(16), &cfg).unwrap();
        assert!(verify_coloring(&g, r.coloring().unwrap(), &Coloring::new(16)));
        let g = generate(&GeneratorSpec::K5Torus).unwrap();
        let r = solve(&g, &Coloring::new(5), &cfg).unwrap();
        assert!(matches!(r, SolveResult::No(Witness::Exhausted(_))));
        let g = generate(&GeneratorSpec::K4Projective).unwrap();
        let r = solve(&g, &Coloring::new(4), &cfg).unwrap();
        assert!(matches!(r, SolveResult::No(Witness::WindingViolation(_))));
    }

    #[test]
    fn small_closed_surfaces_match_oracle() {
        let cfg = SolveConfig::default();
        for spec in [
            GeneratorSpec::GridTorus(3, 3),
            GeneratorSpec::GridTorus(3, 4),
            GeneratorSpec::GridTorus(5, 3),
            GeneratorSpec::GridKlein(3, 3),
            GeneratorSpec::GridKlein(4, 3),
            GeneratorSpec::GridKlein(4, 4),
        ] {
            let g = generate(&spec).unwrap();
            let pre = Coloring::new(g.vertex_count());
            let r = solve(&g, &pre, &cfg).unwrap();
            assert_eq!(r.is_yes(), oracle_solve(&g, &pre).is_yes(), "{spec}");
            if let Some(c) = r.coloring() {
                assert!(verify_coloring(&g, c, &pre), "{spec}");
            }
        }
    }

    #[test]
    fn threads_agree() {
        let g = generate(&GeneratorSpec::GridTorus(4, 4)).unwrap();
        let cfg = SolveConfig {
            threads: 3,
            ..Default::default()
        };
        let a = solve(&g, &Coloring::new(16), &cfg).unwrap();
        let b = solve(&g, &Coloring::new(16), &SolveConfig::default()).unwrap();
        assert_eq!(a.coloring(), b.coloring());
    }

    #[test]
    fn heuristic_only_when_enabled() {
        let g = generate(&GeneratorSpec::GridTorus(4, 4)).unwrap();
        let cfg = SolveConfig {
            essential_budget: 3,
            heuristic_nu: Some(3),
            ..Default::default()
        };
        let r = solve(&g, &Coloring::new(16), &cfg).unwrap();
        assert!(r.is_heuristic());
        let cfg = SolveConfig {
            essential_budget: 3,
            ..Default::default()
        };
        assert!(solve(&g, &Coloring::new(16), &cfg).unwrap().is_yes());
    }

    #[test]
    fn torus_cut_simplifies() {
        let g = generate(&GeneratorSpec::GridTorus(4, 4)).unwrap();
        let node = decompose(&g, 12).unwrap().unwrap();
        assert_eq!(node.cut_subgraph.len(), 4);
        assert!(node.simplifies());
    }

    #[test]
    fn generator_instances_are_clean() {
        for spec in [GeneratorSpec::GridTorus(4, 4), GeneratorSpec::GridDisk(3, 3)] {
            let g = generate(&spec).unwrap();
            let h = clean_contractible_quads(&g);
            assert_eq!((h.vertex_count(), h.edge_count()), (g.vertex_count(), g.edge_count()));
        }
    }

    #[test]
    fn bubble_is_removed() {
        // a 4x4 disk grid whose middle face carries a quadrangulated bubble:
        // the 3x3 outer cycle 5,6,10,9 encloses vertex 16 joined to 5 and 10
        let mut faces: Vec<Vec<usize>> = Vec::new();
        for r in 0..3 {
            for c in 0..3 {
                let v = r * 4 + c;
                if v != 5 {
                    faces.push(vec![v, v + 1, v + 5, v + 4]);
                }
            }
        }
        faces.push(vec![5, 6, 10, 16]);
        faces.push(vec![5, 16, 10, 9]);
        let cuff = vec![0, 1, 2, 3, 7, 11, 15, 14, 13, 12, 8, 4];
        let g = EmbeddedGraph::from_faces(17, &faces, vec![cuff.clone()]).unwrap();
        let h = clean_contractible_quads(&g);
        assert_eq!(h.vertex_count(), 16);
        assert_eq!(h.faces().face_count(), 9);
        let pre = crate::testkit::precolor(17, &cuff, &[1, 2, 1, 2, 1, 2, 1, 2, 1, 2, 1, 2]);
        let r = solve(&g, &pre, &SolveConfig::default()).unwrap();
        assert!(verify_coloring(&g, r.coloring().unwrap(), &pre));
    }
}
