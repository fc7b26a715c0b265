//! Reference preperiodic structures: the ten maps with trivial stabilizer,
//! the four twist classes of z², and the seven structures for maps
//! conjugate to 1/z².

use super::graph::FunctionalGraph;
use crate::arith::ExtRational;
use crate::error::{Error, Result};
use crate::projmap::QuadMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    /// Maps with trivial stabilizer, listed by σ-pair.
    Trivial,
    /// Twists of z².
    Psi1,
    /// Maps conjugate to 1/z².
    Psi2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StructureClass {
    pub id: &'static str,
    pub family: Family,
    pub description: &'static str,
    /// Representative map in `[f2,f1,f0]/[g2,g1,g0]` form.
    pub map: &'static str,
    /// σ-pair of the normal form, for the trivial-stabilizer rows.
    pub sigmas: Option<(&'static str, &'static str)>,
    pub edges: &'static [(&'static str, &'static str)],
}

impl StructureClass {
    pub fn representative(&self) -> QuadMap {
        self.map.parse().expect("catalog maps parse")
    }

    pub fn reference_graph(&self) -> FunctionalGraph<ExtRational> {
        FunctionalGraph::from_edges(
            self.edges
                .iter()
                .map(|(a, b)| (a.parse().expect("catalog point"), b.parse().expect("catalog point"))),
        )
        .expect("catalog graphs are closed")
    }
}

macro_rules! class {
    ($id:expr, $fam:ident, $desc:expr, $map:expr, $sig:expr, [$(($a:expr, $b:expr)),* $(,)?]) => {
        StructureClass { id: $id, family: Family::$fam, description: $desc, map: $map, sigmas: $sig, edges: &[$(($a, $b)),*] }
    };
}

pub static CATALOG: &[StructureClass] = &[
    class!("T2.1", Trivial, "z^2 - 2", "[1,0,-2]/[0,0,1]", Some(("2", "-8")),
        [("inf", "inf"), ("1", "-1"), ("-1", "-1"), ("0", "-2"), ("-2", "2"), ("2", "2")]),
    class!("T2.2", Trivial, "z^2 - 1", "[1,0,-1]/[0,0,1]", Some(("2", "-4")),
        [("inf", "inf"), ("1", "0"), ("0", "-1"), ("-1", "0")]),
    class!("T2.3", Trivial, "1/(2(z-1)^2)", "[0,0,1]/[2,-4,2]", Some(("-6", "4")),
        [("1", "inf"), ("inf", "0"), ("0", "1/2"), ("1/2", "2"), ("2", "1/2"), ("3/2", "2")]),
    class!("T2.4", Trivial, "1/(z-1)^2", "[0,0,1]/[1,-2,1]", Some(("-6", "8")),
        [("inf", "0"), ("0", "1"), ("1", "inf"), ("2", "1")]),
    class!("T2.5", Trivial, "-1/(4z^2-4z)", "[0,0,-1]/[4,-4,0]", Some(("-2", "4")),
        [("1/2", "1"), ("1", "inf"), ("inf", "0"), ("0", "inf")]),
    class!("T2.6", Trivial, "-4/(9z^2-12z)", "[0,0,-4]/[9,-12,0]", Some(("-2/3", "4/3")),
        [("2/3", "1"), ("1", "4/3"), ("1/3", "4/3"), ("4/3", "inf"), ("inf", "0"), ("0", "inf")]),
    class!("T2.7", Trivial, "2/(z-1)^2", "[0,0,2]/[1,-2,1]", Some(("-6", "10")),
        [("1", "inf"), ("inf", "0"), ("0", "2"), ("2", "2")]),
    class!("T2.8", Trivial, "(2z+1)/(4z-2z^2)", "[0,2,1]/[-2,4,0]", Some(("-2", "0")),
        [("-1/2", "0"), ("0", "inf"), ("inf", "0"), ("2", "inf")]),
    class!("T2.9", Trivial, "-2z/(2z^2-4z+1)", "[0,-2,0]/[2,-4,1]", Some(("-2", "2")),
        [("inf", "0"), ("0", "0")]),
    class!("T2.10", Trivial, "(3z^2-4z+1)/(1-4z)", "[3,-4,1]/[0,-4,1]", Some(("-10/3", "20/3")),
        [("1/2", "1/4"), ("1/4", "inf"), ("inf", "inf"), ("1/3", "0"), ("0", "1"), ("1", "0")]),
    class!("T3.generic", Psi1, "generic twist, b = 1", "[1,0,2]/[0,2,0]", None,
        [("inf", "inf"), ("0", "inf")]),
    class!("T3.fixed", Psi1, "fixed-point class, b = 1/2", "[1,0,1]/[0,2,0]", None,
        [("inf", "inf"), ("0", "inf"), ("1", "1"), ("-1", "-1")]),
    class!("T3.2-cycle", Psi1, "2-cycle class, b = -3/2", "[1,0,-3]/[0,2,0]", None,
        [("1", "-1"), ("-1", "1"), ("3", "1"), ("-3", "-1"), ("0", "inf"), ("inf", "inf")]),
    class!("T3.type-1_2", Psi1, "type-1_2 class, b = -1/2", "[1,0,-1]/[0,2,0]", None,
        [("1", "0"), ("-1", "0"), ("0", "inf"), ("inf", "inf")]),
    class!("T4.2-cycle-fixed", Psi2, "2-cycle and a fixed point, 1/z^2", "[0,0,1]/[1,0,0]", None,
        [("1", "1"), ("-1", "1"), ("0", "inf"), ("inf", "0")]),
    class!("T4.2-cycle", Psi2, "2-cycle only, 2/z^2", "[0,0,2]/[1,0,0]", None,
        [("0", "inf"), ("inf", "0")]),
    class!("T4.empty", Psi2, "no rational preperiodic points", "[1,-4,2]/[1,-2,2]", None, []),
    class!("T4.fixed", Psi2, "one fixed point with one preimage", "[0,-4,0]/[1,0,2]", None,
        [("0", "0"), ("inf", "0")]),
    class!("T4.fixed-tree", Psi2, "one fixed point with a depth-2 tree", "[-1,2,1]/[1,2,-1]", None,
        [("1", "1"), ("-1", "1"), ("0", "-1"), ("inf", "-1")]),
    class!("T4.three-fixed", Psi2, "three fixed points, each with one preimage", "[-1,2,0]/[0,2,-1]", None,
        [("0", "0"), ("2", "0"), ("1", "1"), ("-1", "1"), ("inf", "inf"), ("1/2", "inf")]),
    class!("T4.3-cycle", Psi2, "3-cycle with three tails", "[0,2,-1]/[1,0,-1]", None,
        [("0", "1"), ("1", "inf"), ("inf", "0"), ("1/2", "0"), ("2", "1"), ("-1", "inf")]),
];

pub fn catalog() -> &'static [StructureClass] {
    CATALOG
}

pub fn family(f: Family) -> impl Iterator<Item = &'static StructureClass> {
    CATALOG.iter().filter(move |c| c.family == f)
}

pub fn by_id(id: &str) -> Result<&'static StructureClass> {
    CATALOG
        .iter()
        .find(|c| c.id == id)
        .ok_or_else(|| Error::InvalidParameter(format!("unknown class {id:?}")))
}

/// The unique class of `f` whose reference graph is isomorphic to `g`.
pub fn match_structure(f: Family, g: &FunctionalGraph<ExtRational>) -> Result<&'static StructureClass> {
    let form = g.canonical_form();
    let hits: Vec<_> = family(f).filter(|c| c.reference_graph().canonical_form() == form).collect();
    match hits[..] {
        [c] => Ok(c),
        [] => Err(Error::NoCatalogMatch(g.edge_lines().join(", "))),
        _ => Err(Error::Inconsistent(format!("{} classes share one shape", hits.len()))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        assert_eq!(family(Family::Trivial).count(), 10);
        assert_eq!(family(Family::Psi1).count(), 4);
        assert_eq!(family(Family::Psi2).count(), 7);
        let counts: Vec<usize> = family(Family::Trivial).map(|c| c.reference_graph().len()).collect();
        assert_eq!(counts, [6, 4, 6, 4, 4, 6, 4, 4, 2, 6]);
    }

    #[test]
    fn shapes_are_distinct_within_each_table() {
        for f in [Family::Psi1, Family::Psi2] {
            for c in family(f) {
                assert_eq!(match_structure(f, &c.reference_graph()).unwrap().id, c.id);
            }
        }
    }

    #[test]
    fn reference_edges_follow_the_maps() {
        use crate::arith::Point;
        for c in catalog() {
            let m = c.representative();
            for (a, b) in c.reference_graph().edges() {
                let img = m.apply(&Point::from(a.clone())).unwrap();
                assert_eq!(img, Point::from(b.clone()), "{} at {a}", c.id);
            }
        }
    }

    #[test]
    fn trivial_rows_match_their_sigmas() {
        use crate::arith::parse_rational;
        for c in family(Family::Trivial) {
            let (s1, s2) = c.sigmas.unwrap();
            let got = c.representative().sigma_invariants().unwrap();
            assert_eq!(got, (parse_rational(s1).unwrap(), parse_rational(s2).unwrap()), "{}", c.id);
        }
    }
}
