//! Preperiodic points of z² and 1/z² of bounded degree, modelled by the
//! exponent dynamics on roots of unity.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;

use super::graph::FunctionalGraph;
use crate::arith::euler_phi;
use crate::error::{Error, Result};

/// 0, ∞, or ζ_N^j with gcd(j, N) = 1 (so N is the exact order).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RootOfUnityPoint {
    Zero,
    Infinity,
    Root { order: u64, exp: u64 },
}

impl RootOfUnityPoint {
    /// ζ_n^j reduced to its exact order.
    pub fn new(n: u64, j: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("root of unity of order 0".into()));
        }
        let j = j % n;
        let g = j.gcd(&n);
        Ok(RootOfUnityPoint::Root { order: n / g, exp: j / g })
    }

    /// Algebraic degree over the rationals.
    pub fn degree(&self) -> u64 {
        match self {
            RootOfUnityPoint::Root { order, .. } => euler_phi(*order),
            _ => 1,
        }
    }

    /// −x, i.e. the exponent shifted by one half.
    pub fn negate(&self) -> Self {
        match *self {
            RootOfUnityPoint::Root { order, exp } => {
                Self::new(2 * order, 2 * exp + order).expect("nonzero order")
            }
            p => p,
        }
    }

    /// Exponent as a fraction j/N in [0, 1).
    pub fn exponent_fraction(&self) -> Option<(u64, u64)> {
        match *self {
            RootOfUnityPoint::Root { order, exp } => Some((exp, order)),
            _ => None,
        }
    }
}

impl fmt::Display for RootOfUnityPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RootOfUnityPoint::Zero => f.write_str("0"),
            RootOfUnityPoint::Infinity => f.write_str("inf"),
            RootOfUnityPoint::Root { order: 1, .. } => f.write_str("1"),
            RootOfUnityPoint::Root { order: 2, .. } => f.write_str("-1"),
            RootOfUnityPoint::Root { order, exp } => write!(f, "zeta{order}^{exp}"),
        }
    }
}

/// Accepts `0`, `inf`, `1`, `-1`, `i`, `-i` and `[-]zetaN[^j]`.
impl FromStr for RootOfUnityPoint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse { what: "root of unity", input: s.to_string() };
        let t = s.trim();
        match t {
            "0" => return Ok(RootOfUnityPoint::Zero),
            "inf" => return Ok(RootOfUnityPoint::Infinity),
            "1" => return Self::new(1, 0),
            "-1" => return Self::new(2, 1),
            "i" => return Self::new(4, 1),
            "-i" => return Self::new(4, 3),
            _ => {}
        }
        let (neg, rest) = match t.strip_prefix('-') {
            Some(r) => (true, r),
            None => (false, t),
        };
        let rest = rest.strip_prefix("zeta").ok_or_else(bad)?;
        let (n, j) = match rest.split_once('^') {
            Some((n, j)) => (n.parse().map_err(|_| bad())?, j.parse().map_err(|_| bad())?),
            None => (rest.parse().map_err(|_| bad())?, 1),
        };
        let p = Self::new(n, j)?;
        Ok(if neg { p.negate() } else { p })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PowerVariant {
    /// z ↦ z², exponent j ↦ 2j.
    Square,
    /// z ↦ 1/z², exponent j ↦ −2j, swapping 0 and ∞.
    InverseSquare,
}

impl PowerVariant {
    pub fn apply(self, p: RootOfUnityPoint) -> RootOfUnityPoint {
        use RootOfUnityPoint::*;
        match (self, p) {
            (PowerVariant::Square, Zero | Infinity) => p,
            (PowerVariant::InverseSquare, Zero) => Infinity,
            (PowerVariant::InverseSquare, Infinity) => Zero,
            (v, Root { order, exp }) => {
                let twice = 2 * exp % order;
                let e = match v {
                    PowerVariant::Square => twice,
                    PowerVariant::InverseSquare => (order - twice) % order,
                };
                RootOfUnityPoint::new(order, e).expect("nonzero order")
            }
        }
    }
}

/// Every order N with φ(N) ≤ `max_degree`, ascending.
pub fn orders_up_to_degree(max_degree: u64) -> Vec<u64> {
    // φ(N) ≥ sqrt(N/2), so N ≤ 2·max_degree²
    (1..=2 * max_degree * max_degree + 2).filter(|&n| euler_phi(n) <= max_degree).collect()
}

/// Graph on 0, ∞ and all roots of unity of degree at most `max_degree`.
pub fn power_map_graph(variant: PowerVariant, max_degree: u64) -> Result<FunctionalGraph<RootOfUnityPoint>> {
    if max_degree == 0 {
        return Err(Error::InvalidParameter("max degree must be positive".into()));
    }
    let mut pts = vec![RootOfUnityPoint::Zero, RootOfUnityPoint::Infinity];
    for n in orders_up_to_degree(max_degree) {
        pts.extend((0..n).filter(|j| j.gcd(&n) == 1).map(|j| RootOfUnityPoint::Root { order: n, exp: j }));
    }
    FunctionalGraph::from_edges(pts.into_iter().map(|p| (p, variant.apply(p))))
}

/// Connected components of [`power_map_graph`].
pub fn power_map_low_degree_preperiodic(
    variant: PowerVariant,
    max_degree: u64,
) -> Result<Vec<FunctionalGraph<RootOfUnityPoint>>> {
    Ok(power_map_graph(variant, max_degree)?.components())
}

/// Reference diagram for z² over points of degree at most 2.
pub const SQUARE_FIGURE: &[(&str, &str)] = &[
    ("0", "0"),
    ("inf", "inf"),
    ("1", "1"),
    ("-1", "1"),
    ("i", "-1"),
    ("-i", "-1"),
    ("zeta3", "zeta3^2"),
    ("zeta3^2", "zeta3"),
    ("zeta6", "zeta3"),
    ("zeta6^5", "zeta3^2"),
];

/// Reference diagrams for 1/z² over points of degree at most 6, one slice
/// per connected component.
pub const INVERSE_SQUARE_FIGURES: &[&[(&str, &str)]] = &[
    &[("0", "inf"), ("inf", "0")],
    &[
        ("1", "1"),
        ("-1", "1"),
        ("i", "-1"),
        ("-i", "-1"),
        ("zeta8", "-i"),
        ("-zeta8", "-i"),
        ("zeta8^7", "i"),
        ("-zeta8^7", "i"),
    ],
    &[("zeta3", "zeta3"), ("zeta6^5", "zeta3"), ("zeta12", "zeta6^5"), ("-zeta12", "zeta6^5")],
    &[("zeta3^2", "zeta3^2"), ("zeta6", "zeta3^2"), ("zeta12^11", "zeta6"), ("-zeta12^11", "zeta6")],
    &[
        ("zeta9", "zeta9^7"),
        ("zeta9^7", "zeta9^4"),
        ("zeta9^4", "zeta9"),
        ("-zeta9^4", "zeta9"),
        ("-zeta9", "zeta9^7"),
        ("-zeta9^7", "zeta9^4"),
    ],
    &[
        ("zeta9^2", "zeta9^5"),
        ("zeta9^5", "zeta9^8"),
        ("zeta9^8", "zeta9^2"),
        ("-zeta9^8", "zeta9^2"),
        ("-zeta9^2", "zeta9^5"),
        ("-zeta9^5", "zeta9^8"),
    ],
    &[
        ("zeta5", "zeta5^3"),
        ("zeta5^3", "zeta5^4"),
        ("zeta5^4", "zeta5^2"),
        ("zeta5^2", "zeta5"),
        ("-zeta5^2", "zeta5"),
        ("-zeta5^4", "zeta5^2"),
        ("-zeta5", "zeta5^3"),
        ("-zeta5^3", "zeta5^4"),
    ],
    &[
        ("zeta7", "zeta7^5"),
        ("zeta7^5", "zeta7^4"),
        ("zeta7^4", "zeta7^6"),
        ("zeta7^6", "zeta7^2"),
        ("zeta7^2", "zeta7^3"),
        ("zeta7^3", "zeta7"),
        ("-zeta7^3", "zeta7"),
        ("-zeta7", "zeta7^5"),
        ("-zeta7^2", "zeta7^3"),
        ("-zeta7^5", "zeta7^4"),
        ("-zeta7^6", "zeta7^2"),
        ("-zeta7^4", "zeta7^6"),
    ],
];

pub fn figure_graph(edges: &[(&str, &str)]) -> Result<FunctionalGraph<RootOfUnityPoint>> {
    let parsed = edges
        .iter()
        .map(|(a, b)| Ok((a.parse()?, b.parse()?)))
        .collect::<Result<Vec<_>>>()?;
    FunctionalGraph::from_edges(parsed)
}
