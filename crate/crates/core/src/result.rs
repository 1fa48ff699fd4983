use std::fmt;

use crate::coloring::{delta_path, Coloring, WindingReport};
use crate::map::{EmbeddedGraph, Vertex};

/// A spoke `P` whose base `Q` on the boundary has `|delta(Q)| > |P|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpokeWitness {
    /// Vertices of the spoke, endpoints on the boundary.
    pub spoke: Vec<Vertex>,
    /// Boundary subpath between the spoke endpoints, same start and end.
    pub base: Vec<Vertex>,
    pub delta_base: i64,
}

impl SpokeWitness {
    pub fn spoke_len(&self) -> usize {
        self.spoke.len().saturating_sub(1)
    }

    /// Re-checks the witness against the graph and boundary coloring.
    pub fn verify(&self, g: &EmbeddedGraph, psi: &Coloring) -> bool {
        let adjacent = |a: Vertex, b: Vertex| g.neighbors(a).any(|w| w == b);
        let boundary = g.boundary_vertices();
        let path_ok = |p: &[Vertex]| p.len() >= 2 && p.windows(2).all(|w| adjacent(w[0], w[1]));
        if !path_ok(&self.spoke) || !path_ok(&self.base) {
            return false;
        }
        let (s, t) = (self.spoke[0], self.spoke[self.spoke.len() - 1]);
        if self.base[0] != s || self.base[self.base.len() - 1] != t {
            return false;
        }
        let inner = &self.spoke[1..self.spoke.len() - 1];
        if inner.iter().any(|v| boundary.contains(v)) || !boundary.contains(&s) || !boundary.contains(&t) {
            return false;
        }
        if self.base.iter().any(|v| !boundary.contains(v)) {
            return false;
        }
        match delta_path(psi, &self.base) {
            Ok(d) => d == self.delta_base && (self.spoke_len() as i64) < d.abs(),
            Err(_) => false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    WindingViolation(WindingReport),
    SpokeViolation(SpokeWitness),
    /// Trace of an exhausted search.
    Exhausted(Vec<String>),
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::WindingViolation(r) => {
                let per: Vec<String> = r.per_boundary.iter().map(i64::to_string).collect();
                write!(f, "winding violation: omega = [{}], total {}", per.join(", "), r.total)?;
                if let Some(p) = r.parity_p {
                    write!(f, ", p = {p}")?;
                }
                Ok(())
            }
            Witness::SpokeViolation(s) => {
                let join = |v: &[Vertex]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
                writeln!(f, "spoke violation")?;
                writeln!(f, "spoke: {}", join(&s.spoke))?;
                writeln!(f, "base: {}", join(&s.base))?;
                write!(f, "delta: {}", s.delta_base)
            }
            Witness::Exhausted(lines) => {
                write!(f, "exhausted")?;
                for l in lines {
                    write!(f, "\n  {l}")?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveResult {
    Yes(Coloring),
    No(Witness),
    /// Heuristic verdict; the coloring is present when a search found one.
    HeuristicYes(Option<Coloring>, String),
    HeuristicNo(String),
}

impl SolveResult {
    pub fn is_yes(&self) -> bool {
        matches!(self, SolveResult::Yes(_))
    }

    pub fn is_no(&self) -> bool {
        matches!(self, SolveResult::No(_))
    }

    pub fn is_heuristic(&self) -> bool {
        matches!(self, SolveResult::HeuristicYes(..) | SolveResult::HeuristicNo(_))
    }

    pub fn coloring(&self) -> Option<&Coloring> {
        match self {
            SolveResult::Yes(c) | SolveResult::HeuristicYes(Some(c), _) => Some(c),
            _ => None,
        }
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            SolveResult::No(w) => Some(w),
            _ => None,
        }
    }
}
