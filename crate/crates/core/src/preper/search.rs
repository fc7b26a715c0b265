//! Bounded search for rational preperiodic points.

use rayon::prelude::*;

use super::graph::FunctionalGraph;
use crate::arith::{enumerate_rationals, ExtRational, Point};
use crate::error::{Error, Result};
use crate::projmap::QuadMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PreperParams {
    /// Starting points: every rational of height at most this, plus infinity.
    pub height_bound: u64,
    /// Steps allowed before a start point counts as unresolved.
    pub steps: usize,
    /// Orbits passing this height are declared wandering.
    pub height_cutoff: u64,
}

impl Default for PreperParams {
    fn default() -> Self {
        PreperParams { height_bound: 16, steps: 32, height_cutoff: 10_000 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PreperResult {
    pub graph: FunctionalGraph<ExtRational>,
    /// Start points neither closed nor cut off within the step budget.
    pub unresolved: Vec<ExtRational>,
    pub candidates: usize,
}

enum Outcome {
    Preperiodic(Vec<(ExtRational, ExtRational)>),
    Wandering,
    Unresolved,
}

fn to_ext(p: Point) -> ExtRational {
    p.to_ext_rational().expect("a rational map keeps rational points rational")
}

fn follow(map: &QuadMap, start: &ExtRational, params: &PreperParams) -> Result<Outcome> {
    let mut orbit: Vec<ExtRational> = vec![start.clone()];
    let mut seen = std::collections::HashSet::new();
    seen.insert(start.clone());
    for _ in 0..params.steps {
        let z = orbit.last().expect("nonempty");
        let next = to_ext(map.apply(&Point::from(z.clone()))?);
        if seen.contains(&next) {
            let mut edges: Vec<(ExtRational, ExtRational)> = orbit.windows(2).map(|w| (w[0].clone(), w[1].clone())).collect();
            edges.push((z.clone(), next));
            return Ok(Outcome::Preperiodic(edges));
        }
        if crate::arith::height(&next).exceeds(params.height_cutoff) {
            return Ok(Outcome::Wandering);
        }
        seen.insert(next.clone());
        orbit.push(next);
    }
    Ok(Outcome::Unresolved)
}

/// Rational preperiodic points found from starts of bounded height,
/// closed under the map.
pub fn rational_preperiodic_graph(map: &QuadMap, params: PreperParams) -> Result<PreperResult> {
    if num_traits::Zero::is_zero(&map.resultant()) {
        return Err(Error::Degenerate(format!("{map} has zero resultant")));
    }
    if params.height_bound == 0 || params.steps == 0 {
        return Err(Error::InvalidParameter("height bound and step budget must be positive".into()));
    }
    let starts: Vec<ExtRational> = std::iter::once(ExtRational::Infinity)
        .chain(enumerate_rationals(params.height_bound).map(ExtRational::Finite))
        .collect();
    let outcomes: Vec<Outcome> = starts.par_iter().map(|s| follow(map, s, &params)).collect::<Result<_>>()?;
    let mut edges = Vec::new();
    let mut unresolved = Vec::new();
    for (s, o) in starts.iter().zip(outcomes) {
        match o {
            Outcome::Preperiodic(e) => edges.extend(e),
            Outcome::Wandering => {}
            Outcome::Unresolved => unresolved.push(s.clone()),
        }
    }
    Ok(PreperResult {
        graph: FunctionalGraph::from_edges(edges)?,
        unresolved,
        candidates: starts.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph_of(s: &str) -> PreperResult {
        rational_preperiodic_graph(&s.parse().unwrap(), PreperParams::default()).unwrap()
    }

    #[test]
    fn z2_minus_2() {
        let r = graph_of("[1,0,-2]/[0,0,1]");
        assert!(r.unresolved.is_empty());
        assert_eq!(
            r.graph.edge_lines(),
            ["-2 -> 2", "-1 -> -1", "0 -> -2", "1 -> -1", "2 -> 2", "inf -> inf"]
        );
    }

    #[test]
    fn row9_form() {
        let r = graph_of("[0,-2,0]/[2,-4,1]");
        assert_eq!(r.graph.edge_lines(), ["0 -> 0", "inf -> 0"]);
    }

    #[test]
    fn row10_form() {
        let r = graph_of("[3,-4,1]/[0,-4,1]");
        assert_eq!(
            r.graph.edge_lines(),
            ["0 -> 1", "1/4 -> inf", "1/3 -> 0", "1/2 -> 1/4", "1 -> 0", "inf -> inf"]
        );
    }

    #[test]
    fn candidate_count() {
        let r = graph_of("[1,0,0]/[0,0,1]");
        assert_eq!(r.candidates as u64, 1 + crate::arith::count_rationals(16));
        assert_eq!(r.graph.edge_lines(), ["-1 -> 1", "0 -> 0", "1 -> 1", "inf -> inf"]);
    }
}
