//! Classifiers for the symmetry locus: twists of z² written as
//! φ_b(z) = z/2 + b/z, and maps conjugate to 1/z².

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::catalog::{by_id, match_structure, Family, StructureClass};
use super::graph::FunctionalGraph;
use super::search::{rational_preperiodic_graph, PreperParams, PreperResult};
use crate::arith::{format_rational, int, is_rational_square, ExtRational};
use crate::error::{Error, Result};
use crate::projmap::QuadMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Psi1Class {
    Generic,
    Fixed,
    TwoCycle,
    Type12,
}

impl Psi1Class {
    pub fn id(self) -> &'static str {
        match self {
            Psi1Class::Generic => "T3.generic",
            Psi1Class::Fixed => "T3.fixed",
            Psi1Class::TwoCycle => "T3.2-cycle",
            Psi1Class::Type12 => "T3.type-1_2",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Psi1Class::Generic => "generic class",
            Psi1Class::Fixed => "fixed-point class",
            Psi1Class::TwoCycle => "2-cycle class",
            Psi1Class::Type12 => "type-1_2 class",
        }
    }

    pub fn structure(self) -> &'static StructureClass {
        by_id(self.id()).expect("every class is in the catalog")
    }
}

impl fmt::Display for Psi1Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Square-class test on b. The three conditions are mutually exclusive
/// since 2b·(−6b), 2b·(−2b) and (−6b)(−2b) are −12b², −4b², 12b².
pub fn psi1_square_class(b: &BigRational) -> Result<Psi1Class> {
    if b.is_zero() {
        return Err(Error::InvalidParameter("b must be nonzero".into()));
    }
    let fixed = is_rational_square(&(int(2) * b));
    let two = is_rational_square(&(int(-6) * b));
    let t12 = is_rational_square(&(int(-2) * b));
    assert!(
        [fixed, two, t12].iter().filter(|x| **x).count() <= 1,
        "square classes overlap at b = {}",
        format_rational(b)
    );
    Ok(if fixed {
        Psi1Class::Fixed
    } else if two {
        Psi1Class::TwoCycle
    } else if t12 {
        Psi1Class::Type12
    } else {
        Psi1Class::Generic
    })
}

/// φ_b(z) = (z² + 2b) / (2z).
pub fn psi1_map(b: &BigRational) -> Result<QuadMap> {
    if b.is_zero() {
        return Err(Error::InvalidParameter("b must be nonzero".into()));
    }
    QuadMap::from_rationals(
        [BigRational::one(), BigRational::zero(), int(2) * b],
        [BigRational::zero(), int(2), BigRational::zero()],
    )
}

#[derive(Clone, Debug)]
pub struct Classification {
    pub class: &'static StructureClass,
    pub map: QuadMap,
    pub search: PreperResult,
}

impl Classification {
    pub fn graph(&self) -> &FunctionalGraph<ExtRational> {
        &self.search.graph
    }
}

#[derive(Clone, Debug)]
pub struct Psi1Classification {
    pub class: Psi1Class,
    pub b: BigRational,
    pub result: Classification,
}

/// Square-class prediction for φ_b, confirmed against the computed graph.
pub fn classify_psi1_twist(b: &BigRational, params: PreperParams) -> Result<Psi1Classification> {
    let class = psi1_square_class(b)?;
    let map = psi1_map(b)?;
    let search = rational_preperiodic_graph(&map, params)?;
    let found = match_structure(Family::Psi1, &search.graph)?;
    if found.id != class.id() {
        return Err(Error::Inconsistent(format!(
            "b = {}: square test gives {} but the graph matches {}",
            format_rational(b),
            class.id(),
            found.id
        )));
    }
    Ok(Psi1Classification { class, b: b.clone(), result: Classification { class: found, map, search } })
}

/// A map conjugate to 1/z² over the algebraic closure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Psi2Spec {
    /// θ_{d,k}(z) = (kz² − 2dz + dk) / (z² − 2kz + d).
    Theta { d: BigRational, k: BigRational },
    /// t / z².
    Power { t: BigRational },
    /// An explicit map, checked to have the multiplier invariants of 1/z².
    Map(QuadMap),
}

impl Psi2Spec {
    pub fn to_map(&self) -> Result<QuadMap> {
        match self {
            Psi2Spec::Theta { d, k } => {
                if d.is_zero() || &(k * k) == d {
                    return Err(Error::InvalidParameter(format!(
                        "theta needs d != 0 and k^2 != d (d = {}, k = {})",
                        format_rational(d),
                        format_rational(k)
                    )));
                }
                QuadMap::from_rationals(
                    [k.clone(), int(-2) * d, d * k],
                    [BigRational::one(), int(-2) * k, d.clone()],
                )
            }
            Psi2Spec::Power { t } => {
                if t.is_zero() {
                    return Err(Error::InvalidParameter("t must be nonzero".into()));
                }
                QuadMap::from_rationals(
                    [BigRational::zero(), BigRational::zero(), t.clone()],
                    [BigRational::one(), BigRational::zero(), BigRational::zero()],
                )
            }
            Psi2Spec::Map(m) => {
                let s = m.sigma_invariants()?;
                if s != (int(-6), int(12)) {
                    return Err(Error::InvalidParameter(format!("{m} is not conjugate to 1/z^2")));
                }
                Ok(m.clone())
            }
        }
    }
}

/// Graph of the map matched against the seven reference structures.
pub fn classify_psi2_map(spec: &Psi2Spec, params: PreperParams) -> Result<Classification> {
    let map = spec.to_map()?;
    let search = rational_preperiodic_graph(&map, params)?;
    let class = match_structure(Family::Psi2, &search.graph)?;
    Ok(Classification { class, map, search })
}

/// Whether t is a rational cube, used to cross-check the t/z² fixed point.
pub fn is_rational_cube(t: &BigRational) -> bool {
    fn icbrt(n: &BigInt) -> Option<BigInt> {
        let r = num_integer::Roots::cbrt(n);
        (&r * &r * &r == *n).then_some(r)
    }
    icbrt(t.numer()).is_some() && icbrt(t.denom()).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{parse_rational, rat};
    use proptest::prelude::*;

    fn q(s: &str) -> BigRational {
        parse_rational(s).unwrap()
    }

    #[test]
    fn psi1_representatives() {
        for (b, id, n) in [("1", "T3.generic", 2), ("1/2", "T3.fixed", 4), ("-3/2", "T3.2-cycle", 6), ("-1/2", "T3.type-1_2", 4)] {
            let c = classify_psi1_twist(&q(b), PreperParams::default()).unwrap();
            assert_eq!(c.class.id(), id);
            assert_eq!(c.result.graph().len(), n);
            assert!(c.result.search.unresolved.is_empty());
        }
    }

    #[test]
    fn psi1_square_classes() {
        assert_eq!(psi1_square_class(&q("-6")).unwrap(), Psi1Class::TwoCycle);
        assert_eq!(psi1_square_class(&q("-8")).unwrap(), Psi1Class::Type12);
        assert_eq!(psi1_square_class(&q("8")).unwrap(), Psi1Class::Fixed);
        assert_eq!(psi1_square_class(&q("3")).unwrap(), Psi1Class::Generic);
        assert!(psi1_square_class(&q("0")).is_err());
    }

    #[test]
    fn psi1_types() {
        let g = classify_psi1_twist(&q("-1/2"), PreperParams::default()).unwrap();
        let gr = g.result.graph();
        assert_eq!(gr.type_of(&"0".parse().unwrap()).unwrap().to_string(), "1_1");
        assert_eq!(gr.type_of(&"1".parse().unwrap()).unwrap().to_string(), "1_2");
    }

    #[test]
    fn psi2_representatives() {
        let specs = [
            (Psi2Spec::Power { t: int(1) }, "T4.2-cycle-fixed"),
            (Psi2Spec::Power { t: int(2) }, "T4.2-cycle"),
            (Psi2Spec::Theta { d: int(2), k: int(1) }, "T4.empty"),
            (Psi2Spec::Theta { d: int(2), k: int(0) }, "T4.fixed"),
            (Psi2Spec::Map("[-1,2,1]/[1,2,-1]".parse().unwrap()), "T4.fixed-tree"),
            (Psi2Spec::Map("[-1,2,0]/[0,2,-1]".parse().unwrap()), "T4.three-fixed"),
            (Psi2Spec::Map("[0,2,-1]/[1,0,-1]".parse().unwrap()), "T4.3-cycle"),
        ];
        for (s, id) in specs {
            assert_eq!(classify_psi2_map(&s, PreperParams::default()).unwrap().class.id, id);
        }
    }

    #[test]
    fn psi2_rejects_bad_parameters() {
        assert!(Psi2Spec::Theta { d: int(4), k: int(2) }.to_map().is_err());
        assert!(Psi2Spec::Theta { d: int(0), k: int(2) }.to_map().is_err());
        assert!(Psi2Spec::Power { t: int(0) }.to_map().is_err());
        assert!(Psi2Spec::Map("[1,0,-1]/[0,0,1]".parse().unwrap()).to_map().is_err());
    }

    #[test]
    fn cubes() {
        assert!(is_rational_cube(&rat(-8, 27)));
        assert!(!is_rational_cube(&int(2)));
    }

    fn small_rat() -> impl Strategy<Value = BigRational> {
        (-12i64..=12, 1i64..=6).prop_filter_map("nonzero", |(n, d)| (n != 0).then(|| rat(n, d)))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn psi1_no_period_above_two(b in small_rat()) {
            let c = classify_psi1_twist(&b, PreperParams::default()).unwrap();
            prop_assert!(c.result.graph().cycle_lengths().iter().all(|&m| m <= 2));
        }

        #[test]
        fn psi2_structure_rules(d in small_rat(), k in -6i64..=6) {
            let k = int(k);
            prop_assume!(&k * &k != d);
            let c = classify_psi2_map(&Psi2Spec::Theta { d, k }, PreperParams::default()).unwrap();
            let g = c.graph();
            let mut fixed = 0;
            for v in g.vertices() {
                let t = g.type_of(v).unwrap();
                prop_assert!(!(t.m == 2 && t.n >= 1));
                if t.m == 1 && t.n == 0 {
                    fixed += 1;
                }
            }
            prop_assert!(fixed != 2);
            prop_assert!(g.len() <= 6);
        }

        #[test]
        fn power_fixed_point_iff_cube(t in small_rat()) {
            let c = classify_psi2_map(&Psi2Spec::Power { t: t.clone() }, PreperParams::default()).unwrap();
            let has_fixed = c.graph().cycle_lengths().contains(&1);
            prop_assert_eq!(has_fixed, is_rational_cube(&t));
        }
    }
}
