use std::fmt;

use crate::error::{Error, Result};
use crate::map::{EmbeddedGraph, Vertex};

/// Instance families with deterministic vertex numbering.
///
/// * `GridDisk(m, n)`: `m` rows of `n` vertices, `v = row * n + col`,
///   outer cycle as the single cuff.
/// * `GridCylinder(k, l)`: `C_k x P_l`, `v = j * k + i` for ring `j`;
///   rings `0` and `l - 1` are the cuffs.
/// * `GridTorus(k, l)`: `C_k x C_l` with the same numbering.
/// * `GridKlein(k, l)`: as the torus, but ring `l - 1` is glued to ring `0`
///   with a reflection, `(i, l-1) ~ (-i mod k, 0)`.
/// * `K4Projective`: three quadrilaterals on the projective plane.
/// * `K5Torus`: five quadrilaterals on the torus.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GeneratorSpec {
    GridDisk(usize, usize),
    GridCylinder(usize, usize),
    GridTorus(usize, usize),
    GridKlein(usize, usize),
    K4Projective,
    K5Torus,
}

impl GeneratorSpec {
    pub fn family(&self) -> &'static str {
        match self {
            GeneratorSpec::GridDisk(..) => "grid_disk",
            GeneratorSpec::GridCylinder(..) => "grid_cylinder",
            GeneratorSpec::GridTorus(..) => "grid_torus",
            GeneratorSpec::GridKlein(..) => "grid_klein",
            GeneratorSpec::K4Projective => "k4_projective",
            GeneratorSpec::K5Torus => "k5_torus",
        }
    }

    /// Parses a family name plus numeric arguments.
    pub fn parse(family: &str, args: &[usize]) -> Result<Self> {
        let two = |f: fn(usize, usize) -> GeneratorSpec| match args {
            [a, b] => Ok(f(*a, *b)),
            _ => Err(Error::BadParameters(format!("{family} takes two integers"))),
        };
        let none = |s: GeneratorSpec| {
            if args.is_empty() {
                Ok(s)
            } else {
                Err(Error::BadParameters(format!("{family} takes no arguments")))
            }
        };
        match family {
            "grid_disk" => two(GeneratorSpec::GridDisk),
            "grid_cylinder" => two(GeneratorSpec::GridCylinder),
            "grid_torus" => two(GeneratorSpec::GridTorus),
            "grid_klein" => two(GeneratorSpec::GridKlein),
            "k4_projective" => none(GeneratorSpec::K4Projective),
            "k5_torus" => none(GeneratorSpec::K5Torus),
            _ => Err(Error::BadParameters(format!("unknown family {family}"))),
        }
    }
}

impl fmt::Display for GeneratorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeneratorSpec::GridDisk(a, b)
            | GeneratorSpec::GridCylinder(a, b)
            | GeneratorSpec::GridTorus(a, b)
            | GeneratorSpec::GridKlein(a, b) => write!(f, "{} {a} {b}", self.family()),
            _ => write!(f, "{}", self.family()),
        }
    }
}

fn need(ok: bool, msg: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::BadParameters(msg.to_string()))
    }
}

fn grid_disk(m: usize, n: usize) -> Result<EmbeddedGraph> {
    need(m >= 2 && n >= 2, "grid_disk needs m, n >= 2")?;
    let at = |r: usize, c: usize| r * n + c;
    let mut faces = Vec::new();
    for r in 0..m - 1 {
        for c in 0..n - 1 {
            faces.push(vec![at(r, c), at(r, c + 1), at(r + 1, c + 1), at(r + 1, c)]);
        }
    }
    let mut outer: Vec<Vertex> = (0..n).map(|c| at(0, c)).collect();
    outer.extend((1..m).map(|r| at(r, n - 1)));
    outer.extend((0..n - 1).rev().map(|c| at(m - 1, c)));
    outer.extend((1..m - 1).rev().map(|r| at(r, 0)));
    EmbeddedGraph::from_faces(m * n, &faces, vec![outer])
}

/// Faces of the `C_k x P_l` grid between consecutive rings.
fn ring_faces(k: usize, l: usize) -> Vec<Vec<Vertex>> {
    let at = |i: usize, j: usize| j * k + i % k;
    let mut faces = Vec::new();
    for j in 0..l - 1 {
        for i in 0..k {
            faces.push(vec![at(i, j), at(i + 1, j), at(i + 1, j + 1), at(i, j + 1)]);
        }
    }
    faces
}

fn grid_cylinder(k: usize, l: usize) -> Result<EmbeddedGraph> {
    need(k >= 3 && l >= 2, "grid_cylinder needs k >= 3, l >= 2")?;
    let faces = ring_faces(k, l);
    let b1: Vec<Vertex> = (0..k).collect();
    let b2: Vec<Vertex> = (0..k).map(|i| (l - 1) * k + i).collect();
    EmbeddedGraph::from_faces(k * l, &faces, vec![b1, b2])
}

fn grid_torus(k: usize, l: usize, twisted: bool) -> Result<EmbeddedGraph> {
    need(k >= 3 && l >= 3, "closed grids need k, l >= 3")?;
    let mut faces = ring_faces(k, l);
    let top = |i: usize| (l - 1) * k + i % k;
    let bottom = |i: usize| {
        if twisted {
            (k - i % k) % k
        } else {
            i % k
        }
    };
    for i in 0..k {
        faces.push(vec![top(i), top(i + 1), bottom(i + 1), bottom(i)]);
    }
    EmbeddedGraph::from_faces(k * l, &faces, Vec::new())
}

fn k4_projective() -> Result<EmbeddedGraph> {
    let faces = [vec![0, 1, 2, 3], vec![0, 1, 3, 2], vec![0, 2, 1, 3]];
    EmbeddedGraph::from_faces(4, &faces, Vec::new())
}

fn k5_torus() -> Result<EmbeddedGraph> {
    let faces = [
        vec![0, 1, 2, 3],
        vec![0, 1, 3, 4],
        vec![0, 2, 1, 4],
        vec![0, 2, 4, 3],
        vec![1, 3, 2, 4],
    ];
    EmbeddedGraph::from_faces(5, &faces, Vec::new())
}

/// Builds the instance and checks its signature against the family.
pub fn generate(spec: &GeneratorSpec) -> Result<EmbeddedGraph> {
    let (g, want) = match *spec {
        GeneratorSpec::GridDisk(m, n) => (grid_disk(m, n)?, (true, 0, 1)),
        GeneratorSpec::GridCylinder(k, l) => (grid_cylinder(k, l)?, (true, 0, 2)),
        GeneratorSpec::GridTorus(k, l) => (grid_torus(k, l, false)?, (true, 2, 0)),
        GeneratorSpec::GridKlein(k, l) => (grid_torus(k, l, true)?, (false, 2, 0)),
        GeneratorSpec::K4Projective => (k4_projective()?, (false, 1, 0)),
        GeneratorSpec::K5Torus => (k5_torus()?, (true, 2, 0)),
    };
    let s = g.signature();
    if (s.orientable, s.euler_genus, s.cuffs) != want {
        return Err(Error::Internal(format!("{spec} traced to signature {s:?}")));
    }
    g.check_quadrangulation()?;
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        let g = generate(&GeneratorSpec::GridDisk(3, 3)).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count(), g.faces().face_count()), (9, 12, 4));
        assert_eq!(g.cuffs()[0].len(), 8);
        let g = generate(&GeneratorSpec::GridTorus(4, 4)).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count(), g.faces().face_count()), (16, 32, 16));
        let g = generate(&GeneratorSpec::K4Projective).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count(), g.faces().face_count()), (4, 6, 3));
        let g = generate(&GeneratorSpec::K5Torus).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count(), g.faces().face_count()), (5, 10, 5));
    }

    #[test]
    fn bad_parameters() {
        assert!(matches!(
            generate(&GeneratorSpec::GridTorus(2, 4)),
            Err(Error::BadParameters(_))
        ));
        assert!(GeneratorSpec::parse("grid_disk", &[3]).is_err());
        assert!(GeneratorSpec::parse("nope", &[]).is_err());
        assert_eq!(
            GeneratorSpec::parse("grid_klein", &[3, 4]).unwrap(),
            GeneratorSpec::GridKlein(3, 4)
        );
    }

    #[test]
    fn all_families_are_deterministic() {
        for spec in [
            GeneratorSpec::GridDisk(3, 5),
            GeneratorSpec::GridCylinder(5, 3),
            GeneratorSpec::GridTorus(3, 5),
            GeneratorSpec::GridKlein(5, 3),
            GeneratorSpec::K4Projective,
            GeneratorSpec::K5Torus,
        ] {
            assert_eq!(generate(&spec).unwrap(), generate(&spec).unwrap());
        }
    }
}
