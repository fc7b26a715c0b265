//! Certifies a map as post-critically finite by iterating both critical
//! orbits exactly until each revisits a point.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::{self, Write};

use num_rational::BigRational;

use crate::arith::{quad_roots_allow_complex, Height, Point};
use crate::error::{Error, Result};
use crate::projmap::QuadMap;

pub const DEFAULT_BUDGET: usize = 64;
pub const DEFAULT_HEIGHT_CUTOFF: u64 = 1_000_000;

/// Directed graph of the critical orbits; each edge carries the local
/// degree at its source.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Portrait {
    edges: BTreeMap<Point, (Point, u8)>,
    critical: [Point; 2],
}

impl Portrait {
    pub fn critical_points(&self) -> &[Point; 2] {
        &self.critical
    }

    pub fn vertices(&self) -> impl Iterator<Item = &Point> {
        self.edges.keys()
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// `(source, target, ramification)` in vertex order.
    pub fn edges(&self) -> impl Iterator<Item = (&Point, &Point, u8)> {
        self.edges.iter().map(|(a, (b, r))| (a, b, *r))
    }

    pub fn successor(&self, p: &Point) -> Option<&Point> {
        self.edges.get(p).map(|(q, _)| q)
    }

    /// Union of the strict forward orbits of the critical points.
    pub fn postcritical_set(&self) -> BTreeSet<Point> {
        let mut out = BTreeSet::new();
        for c in &self.critical {
            let mut z = self.successor(c).expect("critical points are vertices");
            while out.insert(z.clone()) {
                z = self.successor(z).expect("portrait is closed");
            }
        }
        out
    }

    /// Lines `P -> Q [r]` sorted by source.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (a, b, r) in self.edges() {
            let _ = writeln!(s, "{a} -> {b} [{r}]");
        }
        s
    }

    pub fn to_dot(&self, name: &str) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "digraph \"{}\" {{", dot_escape(name));
        for v in self.vertices() {
            let shape = if self.critical.contains(v) { "doublecircle" } else { "circle" };
            let _ = writeln!(s, "  \"{}\" [shape={shape}];", dot_escape(&v.to_string()));
        }
        for (a, b, r) in self.edges() {
            let _ = writeln!(
                s,
                "  \"{}\" -> \"{}\" [label=\"{r}\"];",
                dot_escape(&a.to_string()),
                dot_escape(&b.to_string())
            );
        }
        s.push_str("}\n");
        s
    }
}

impl fmt::Display for Portrait {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

pub(crate) fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Why an orbit could not be closed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Undetermined {
    /// Critical point whose orbit did not close.
    pub critical: Point,
    pub iterations: usize,
    pub max_height: Height,
    pub hit_height_cutoff: bool,
}

impl fmt::Display for Undetermined {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "orbit of {} not closed after {} iterations (max height {}{})",
            self.critical,
            self.iterations,
            self.max_height,
            if self.hit_height_cutoff { ", height cutoff" } else { "" }
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PcfStatus {
    VerifiedPcf(Portrait),
    Undetermined(Undetermined),
}

impl PcfStatus {
    pub fn is_verified(&self) -> bool {
        matches!(self, PcfStatus::VerifiedPcf(_))
    }

    pub fn portrait(&self) -> Option<&Portrait> {
        match self {
            PcfStatus::VerifiedPcf(p) => Some(p),
            PcfStatus::Undetermined(_) => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerifyLimits {
    pub budget: usize,
    pub height_cutoff: u64,
}

impl Default for VerifyLimits {
    fn default() -> Self {
        VerifyLimits { budget: DEFAULT_BUDGET, height_cutoff: DEFAULT_HEIGHT_CUTOFF }
    }
}

/// Critical points, allowing an imaginary quadratic field when the
/// Wronskian has no real roots.
fn critical_points_any(map: &QuadMap) -> Result<[Point; 2]> {
    let w = map.half_wronskian();
    let r = |i: usize| BigRational::from_integer(w[i].clone());
    if w.iter().all(|c| num_traits::Zero::is_zero(c)) {
        return Err(Error::ZeroWronskian);
    }
    quad_roots_allow_complex(&r(0), &r(1), &r(2))
}

/// Iterates both critical orbits with exact arithmetic.
pub fn critical_orbit_portrait(map: &QuadMap, limits: VerifyLimits) -> Result<PcfStatus> {
    if limits.budget == 0 {
        return Err(Error::InvalidParameter("budget must be at least 1".into()));
    }
    if num_traits::Zero::is_zero(&map.resultant()) {
        return Err(Error::Degenerate(format!("{map} has zero resultant")));
    }
    let critical = critical_points_any(map)?;
    let mut edges: BTreeMap<Point, (Point, u8)> = BTreeMap::new();
    for c in &critical {
        let mut seen: HashMap<Point, usize> = HashMap::new();
        let mut z = c.clone();
        let mut max_h = z.height();
        let mut steps = 0;
        loop {
            if seen.contains_key(&z) || edges.contains_key(&z) {
                break;
            }
            if steps >= limits.budget || z.height().exceeds(limits.height_cutoff) {
                return Ok(PcfStatus::Undetermined(Undetermined {
                    critical: c.clone(),
                    iterations: steps,
                    hit_height_cutoff: z.height().exceeds(limits.height_cutoff),
                    max_height: max_h,
                }));
            }
            seen.insert(z.clone(), steps);
            let next = map.apply(&z)?;
            let ram = if critical.contains(&z) { 2 } else { 1 };
            edges.insert(z.clone(), (next.clone(), ram));
            max_h = max_h.max(next.height());
            z = next;
            steps += 1;
        }
    }
    Ok(PcfStatus::VerifiedPcf(Portrait { edges, critical }))
}

pub fn is_pcf(map: &QuadMap, limits: VerifyLimits) -> Result<(bool, PcfStatus)> {
    let st = critical_orbit_portrait(map, limits)?;
    Ok((st.is_verified(), st))
}

pub fn postcritical_set(status: &PcfStatus) -> Result<BTreeSet<Point>> {
    match status {
        PcfStatus::VerifiedPcf(p) => Ok(p.postcritical_set()),
        PcfStatus::Undetermined(u) => Err(Error::InvalidParameter(format!("status is undetermined: {u}"))),
    }
}

/// Exact eventual cycle length of a rational critical orbit in a portrait.
pub fn cycle_length_from(portrait: &Portrait, start: &Point) -> Option<usize> {
    let mut order: HashMap<&Point, usize> = HashMap::new();
    let mut z = start;
    let mut i = 0;
    loop {
        if let Some(&j) = order.get(z) {
            return Some(i - j);
        }
        order.insert(z, i);
        z = portrait.successor(z)?;
        i += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, parse_rational};
    use crate::projmap::Mobius;

    fn sig(a: &str, b: &str) -> QuadMap {
        QuadMap::from_sigmas(&parse_rational(a).unwrap(), &parse_rational(b).unwrap())
    }

    fn portrait(m: &QuadMap) -> Portrait {
        critical_orbit_portrait(m, VerifyLimits::default()).unwrap().portrait().unwrap().clone()
    }

    #[test]
    fn row1_portrait() {
        let p = portrait(&sig("2", "-8"));
        assert_eq!(p.to_text(), "-4 -> -4/3 [2]\n-4/3 -> 4 [1]\n0 -> 0 [2]\n4 -> 4 [1]\n");
        let post: Vec<String> = p.postcritical_set().iter().map(|x| x.to_string()).collect();
        assert_eq!(post, ["-4/3", "0", "4"]);
    }

    #[test]
    fn row4_three_cycle() {
        let p = portrait(&sig("-6", "8"));
        assert_eq!(p.to_text(), "-2 -> 0 [2]\n0 -> inf [1]\ninf -> -2 [2]\n");
        assert_eq!(p.postcritical_set().len(), 3);
    }

    #[test]
    fn row9_in_sqrt2() {
        let p = portrait(&sig("-2", "2"));
        let text = p.to_text();
        for line in [
            "-2-1*sqrt(2) -> -1*sqrt(2) [2]",
            "-2+1*sqrt(2) -> 1*sqrt(2) [2]",
            "-1*sqrt(2) -> inf [1]",
            "1*sqrt(2) -> inf [1]",
            "inf -> -2 [1]",
            "-2 -> -2 [1]",
        ] {
            assert!(text.contains(line), "missing {line} in\n{text}");
        }
        assert_eq!(p.len(), 6);
    }

    #[test]
    fn squaring_map() {
        let m: QuadMap = "[1,0,0]/[0,0,1]".parse().unwrap();
        let p = portrait(&m);
        assert_eq!(p.to_text(), "0 -> 0 [2]\ninf -> inf [2]\n");
        let post: Vec<String> = p.postcritical_set().iter().map(|x| x.to_string()).collect();
        assert_eq!(post, ["0", "inf"]);
    }

    #[test]
    fn undetermined_at_default_budget() {
        let st = critical_orbit_portrait(&sig("2", "-12"), VerifyLimits::default()).unwrap();
        assert!(!st.is_verified());
        assert!(postcritical_set(&st).is_err());
    }

    #[test]
    fn dot_output() {
        let dot = portrait(&sig("2", "-8")).to_dot("row1");
        assert!(dot.starts_with("digraph \"row1\" {"));
        assert!(dot.contains("\"-4\" -> \"-4/3\" [label=\"2\"];"));
    }

    #[test]
    fn conjugation_equivariance() {
        let m = sig("2", "-8");
        let f = Mobius::from_i64(1, 2, 0, 1).unwrap();
        let c = m.conjugate(&f);
        let p = portrait(&m);
        let pc = portrait(&c);
        let moved: BTreeSet<String> = p
            .edges()
            .map(|(a, b, r)| format!("{} {} {r}", f.apply(a).unwrap(), f.apply(b).unwrap()))
            .collect();
        let direct: BTreeSet<String> = pc.edges().map(|(a, b, r)| format!("{a} {b} {r}")).collect();
        assert_eq!(moved, direct);
        assert_eq!(cycle_length_from(&p, &Point::rational(int(-4))), Some(1));
    }
}
