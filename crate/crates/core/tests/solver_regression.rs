use quadcolor::coloring::verify_coloring;
use quadcolor::solver::{solve, SolveConfig};
use quadcolor::testkit::{generate, oracle_solve, proper_cycle_colorings, GeneratorSpec};
use quadcolor::{Coloring, SolveResult};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn instances() -> Vec<GeneratorSpec> {
    use GeneratorSpec::*;
    vec![
        GridDisk(3, 3),
        GridDisk(4, 3),
        GridDisk(4, 4),
        GridDisk(5, 4),
        GridCylinder(4, 2),
        GridCylinder(4, 4),
        GridCylinder(5, 3),
        GridCylinder(6, 3),
        GridTorus(3, 3),
        GridTorus(4, 3),
        GridTorus(5, 4),
        GridKlein(3, 3),
        GridKlein(4, 4),
        GridKlein(5, 4),
        K4Projective,
        K5Torus,
    ]
}

#[test]
fn exact_verdicts_match_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let cfg = SolveConfig::default();
    for spec in instances() {
        let g = generate(&spec).unwrap();
        assert!(g.vertex_count() <= 20, "{spec}");
        let samples = if g.cuffs().is_empty() { 1 } else { 30 };
        for _ in 0..samples {
            let mut pre = Coloring::new(g.vertex_count());
            for cuff in g.cuffs() {
                let cols = proper_cycle_colorings(cuff.len());
                for (&v, &c) in cuff.iter().zip(&cols[rng.gen_range(0..cols.len())]) {
                    pre.set(v, c);
                }
            }
            let r = solve(&g, &pre, &cfg).unwrap();
            assert!(!r.is_heuristic(), "{spec}");
            assert_eq!(r.is_yes(), oracle_solve(&g, &pre).is_yes(), "{spec} {pre:?}");
            match &r {
                SolveResult::Yes(c) => assert!(verify_coloring(&g, c, &pre), "{spec}"),
                SolveResult::No(quadcolor::Witness::SpokeViolation(w)) => assert!(w.verify(&g, &pre)),
                _ => {}
            }
        }
    }
}

#[test]
fn thread_count_does_not_change_verdicts() {
    let g = generate(&GeneratorSpec::GridKlein(4, 4)).unwrap();
    let pre = Coloring::new(g.vertex_count());
    let one = solve(&g, &pre, &SolveConfig::default()).unwrap();
    let four = solve(&g, &pre, &SolveConfig { threads: 4, ..Default::default() }).unwrap();
    assert_eq!(one, four);
}
