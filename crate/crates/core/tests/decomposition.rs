use quadcolor::solver::{decompose, solve, SolveConfig};
use quadcolor::testkit::{oracle_solve, proper_cycle_colorings};
use quadcolor::{Coloring, EmbeddedGraph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn torus_faces(k: usize) -> Vec<Vec<usize>> {
    let mut faces = Vec::new();
    for r in 0..k {
        for c in 0..k {
            let v = |r: usize, c: usize| (r % k) * k + c % k;
            faces.push(vec![v(r, c), v(r, c + 1), v(r + 1, c + 1), v(r + 1, c)]);
        }
    }
    faces
}

/// The 4x4 torus with faces `a` and `b` turned into cuffs.
fn two_cuff_torus(a: usize, b: usize) -> EmbeddedGraph {
    let faces = torus_faces(4);
    let kept: Vec<Vec<usize>> = (0..faces.len())
        .filter(|&i| i != a && i != b)
        .map(|i| faces[i].clone())
        .collect();
    EmbeddedGraph::from_faces(16, &kept, vec![faces[a].clone(), faces[b].clone()]).unwrap()
}

#[test]
fn two_cuff_variants_match_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let cols = proper_cycle_colorings(4);
    // faces 0 and 10 share no vertex
    let g = two_cuff_torus(0, 10);
    let sig = g.signature();
    assert_eq!((sig.euler_genus, sig.cuffs), (2, 2));
    let node = decompose(&g, 12).unwrap().unwrap();
    assert!(node.simplifies());
    for _ in 0..50 {
        let mut pre = Coloring::new(16);
        for cuff in g.cuffs() {
            let c = &cols[rng.gen_range(0..cols.len())];
            for (&v, &x) in cuff.iter().zip(c) {
                pre.set(v, x);
            }
        }
        let r = solve(&g, &pre, &SolveConfig::default()).unwrap();
        assert_eq!(r.is_yes(), oracle_solve(&g, &pre).is_yes());
    }
}
