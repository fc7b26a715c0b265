//! Quadratic rational maps of P^1 over Q.
//!
//! A map is a pair of integer binary quadratic forms
//! `F = f2 x² + f1 xy + f0 y²`, `G = g2 x² + g1 xy + g0 y²`, acting as
//! `z ↦ F(z, 1) / G(z, 1)` on the affine chart.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{deflate, format_rational, quad_roots, rational_roots, Point, QuadElem};
use crate::error::{Error, Result};
use crate::ffdyn::FpMap;

#[derive(Clone, Debug)]
pub struct QuadMap {
    f: [BigInt; 3],
    g: [BigInt; 3],
    sigmas: Option<(BigRational, BigRational)>,
}

/// Maps compare by coefficients only; provenance is ignored.
impl PartialEq for QuadMap {
    fn eq(&self, other: &Self) -> bool {
        self.f == other.f && self.g == other.g
    }
}

impl Eq for QuadMap {}

impl std::hash::Hash for QuadMap {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.f.hash(state);
        self.g.hash(state);
    }
}

/// `z ↦ (az + b)/(cz + d)` with integer entries and nonzero determinant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mobius {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
}

/// The three fixed-point multipliers, with multiplicity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiplierTriple(pub [QuadElem; 3]);

impl MultiplierTriple {
    pub fn sigma1(&self) -> QuadElem {
        let [a, b, c] = &self.0;
        &(a + b) + c
    }

    pub fn sigma2(&self) -> QuadElem {
        let [a, b, c] = &self.0;
        &(&(a * b) + &(a * c)) + &(b * c)
    }
}

impl fmt::Display for MultiplierTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = &self.0;
        write!(f, "{{{a}, {b}, {c}}}")
    }
}

fn big(v: i64) -> BigInt {
    BigInt::from(v)
}

fn ratio(n: &BigInt) -> BigRational {
    BigRational::from_integer(n.clone())
}

impl QuadMap {
    /// Builds and content-normalizes a map from integer coefficients.
    pub fn new(f: [BigInt; 3], g: [BigInt; 3]) -> Result<Self> {
        let mut m = QuadMap {
            f,
            g,
            sigmas: None,
        };
        if m.coeffs().all(|c| c.is_zero()) {
            return Err(Error::InvalidParameter("all coefficients are zero".into()));
        }
        m.normalize();
        Ok(m)
    }

    pub fn from_i64(f: [i64; 3], g: [i64; 3]) -> Result<Self> {
        QuadMap::new(f.map(big), g.map(big))
    }

    /// Builds a map from rational coefficients by clearing denominators.
    pub fn from_rationals(f: [BigRational; 3], g: [BigRational; 3]) -> Result<Self> {
        let lcm = f
            .iter()
            .chain(g.iter())
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let scale = |c: &BigRational| (c * ratio(&lcm)).to_integer();
        QuadMap::new(
            [scale(&f[0]), scale(&f[1]), scale(&f[2])],
            [scale(&g[0]), scale(&g[1]), scale(&g[2])],
        )
    }

    /// The normal form with fixed-point invariants `(σ₁, σ₂)`:
    /// `(2z² + (2−σ₁)z + (2−σ₁)) / (−z² + (2+σ₁)z + 2−σ₁−σ₂)`.
    pub fn from_sigmas(s1: &BigRational, s2: &BigRational) -> Self {
        let two = BigRational::from_integer(big(2));
        let f = [two.clone(), &two - s1, &two - s1];
        let g = [-BigRational::one(), &two + s1, &two - s1 - s2];
        let mut m = QuadMap::from_rationals(f, g).expect("leading coefficient is nonzero");
        m.sigmas = Some((s1.clone(), s2.clone()));
        m
    }

    fn coeffs(&self) -> impl Iterator<Item = &BigInt> {
        self.f.iter().chain(self.g.iter())
    }

    fn normalize(&mut self) {
        let g = self.coeffs().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        let negate = self
            .coeffs()
            .find(|c| !c.is_zero())
            .is_some_and(|c| c.is_negative());
        for c in self.f.iter_mut().chain(self.g.iter_mut()) {
            *c = &*c / &g;
            if negate {
                *c = -&*c;
            }
        }
    }

    pub fn f(&self) -> &[BigInt; 3] {
        &self.f
    }

    pub fn g(&self) -> &[BigInt; 3] {
        &self.g
    }

    /// Invariants recorded when the map was built with [`QuadMap::from_sigmas`].
    pub fn provenance(&self) -> Option<&(BigRational, BigRational)> {
        self.sigmas.as_ref()
    }

    /// Resultant of `F` and `G` as binary quadratic forms.
    pub fn resultant(&self) -> BigInt {
        let [f2, f1, f0] = &self.f;
        let [g2, g1, g0] = &self.g;
        let a = f2 * g0 - f0 * g2;
        let b = f2 * g1 - f1 * g2;
        let c = f1 * g0 - f0 * g1;
        &a * &a - b * c
    }

    /// `w = (F_x G_y − F_y G_x) / 2`, coefficients of x², xy, y².
    pub fn half_wronskian(&self) -> [BigInt; 3] {
        let [f2, f1, f0] = &self.f;
        let [g2, g1, g0] = &self.g;
        [
            f2 * g1 - f1 * g2,
            big(2) * (f2 * g0 - f0 * g2),
            f1 * g0 - f0 * g1,
        ]
    }

    /// `F_x G_y − F_y G_x`.
    pub fn wronskian(&self) -> [BigInt; 3] {
        self.half_wronskian().map(|c| c * 2)
    }

    /// The two critical points (roots of the Wronskian in P^1).
    pub fn critical_points(&self) -> Result<[Point; 2]> {
        let w = self.half_wronskian();
        if w.iter().all(|c| c.is_zero()) {
            return Err(Error::ZeroWronskian);
        }
        quad_roots(&ratio(&w[0]), &ratio(&w[1]), &ratio(&w[2]))
    }

    fn eval_form(form: &[BigInt; 3], z: &QuadElem) -> QuadElem {
        let c = |i: usize| QuadElem::rational(ratio(&form[i]));
        &(&(&c(0) * z) + &c(1)) * z + &c(2)
    }

    /// Evaluates the map homogeneously at a point of P^1.
    pub fn apply(&self, p: &Point) -> Result<Point> {
        let (num, den) = match p {
            Point::Infinity => (
                QuadElem::rational(ratio(&self.f[0])),
                QuadElem::rational(ratio(&self.g[0])),
            ),
            Point::Finite(z) => (Self::eval_form(&self.f, z), Self::eval_form(&self.g, z)),
        };
        match (num.is_zero(), den.is_zero()) {
            (true, true) => Err(Error::Degenerate(p.to_string())),
            (_, true) => Ok(Point::Infinity),
            _ => Ok(Point::Finite(num.checked_div(&den)?)),
        }
    }

    /// Derivative of the map at a fixed point, read in a chart containing it.
    pub fn fixed_point_multiplier(&self, p: &Point) -> Result<QuadElem> {
        let w = self.half_wronskian();
        match p {
            // conjugate by 1/z: the multiplier is w(1,0)/F(1,0)²
            Point::Infinity => {
                let f2 = ratio(&self.f[0]);
                if f2.is_zero() {
                    return Err(Error::Degenerate("inf".into()));
                }
                Ok(QuadElem::rational(ratio(&w[0]) / (&f2 * &f2)))
            }
            Point::Finite(z) => {
                let g = Self::eval_form(&self.g, z);
                Self::eval_form(&w, z).checked_div(&(&g * &g))
            }
        }
    }

    /// Fixed points with multiplicity, when they lie in Q or one real
    /// quadratic field.
    pub fn fixed_points(&self) -> Result<Vec<Point>> {
        // F(z,1) − z G(z,1), low to high; ∞ is fixed when g2 = 0
        let p = self.fixed_point_poly();
        let mut out = Vec::new();
        let mut poly = p;
        while poly.last().is_some_and(|c| c.is_zero()) {
            poly.pop();
        }
        for _ in poly.len()..4 {
            out.push(Point::Infinity);
        }
        let roots = rational_roots(&poly);
        let mut rest = poly.clone();
        for r in &roots {
            out.push(Point::rational(r.clone()));
            rest = deflate(&rest, r);
        }
        match rest.len() {
            1 => {}
            3 => {
                let [a, b] = quad_roots(&rest[2], &rest[1], &rest[0])?;
                out.push(a);
                out.push(b);
            }
            _ => {
                return Err(Error::NotQuadratic(format!(
                    "fixed-point cubic of {self} is irreducible"
                )))
            }
        }
        Ok(out)
    }

    fn fixed_point_poly(&self) -> Vec<BigRational> {
        let [f2, f1, f0] = &self.f;
        let [g2, g1, g0] = &self.g;
        vec![
            ratio(f0),
            ratio(&(f1 - g0)),
            ratio(&(f2 - g1)),
            ratio(&-g2.clone()),
        ]
    }

    /// `(σ₁, σ₂)` from the characteristic polynomial of the multiplier
    /// acting on `Q[z]/(fixed-point cubic)`; no roots are extracted.
    pub fn sigma_invariants(&self) -> Result<(BigRational, BigRational)> {
        let (s1, s2, _) = self.multiplier_charpoly()?;
        Ok((s1, s2))
    }

    /// Returns `(σ₁, σ₂, σ₃)`.
    pub fn multiplier_charpoly(&self) -> Result<(BigRational, BigRational, BigRational)> {
        if self.resultant().is_zero() {
            return Err(Error::Degenerate(format!("{self} has zero resultant")));
        }
        if self.g[0].is_zero() {
            // move ∞ off the fixed locus: conjugate by 1/(z − t) with φ(t) ≠ t
            for t in 0..4i64 {
                let pt = Point::int(t);
                if self.apply(&pt)? != pt {
                    let f = Mobius::new(big(0), big(1), big(1), big(-t))?;
                    return self.conjugate(&f).multiplier_charpoly();
                }
            }
            unreachable!("a degree-2 map has at most three fixed points");
        }
        let p = self.fixed_point_poly();
        let w = self.half_wronskian();
        let wpoly = [ratio(&w[2]), ratio(&w[1]), ratio(&w[0])];
        let gpoly = [ratio(&self.g[2]), ratio(&self.g[1]), ratio(&self.g[0])];
        let g2 = poly_mul(&gpoly, &gpoly);
        let mw = mult_matrix(&wpoly, &p);
        let mg = mult_matrix(&g2, &p);
        let m = mat_mul(&mw, &mat_inv(&mg)?);
        let tr = &m[0][0] + &m[1][1] + &m[2][2];
        let minors = (&m[0][0] * &m[1][1] - &m[0][1] * &m[1][0])
            + (&m[0][0] * &m[2][2] - &m[0][2] * &m[2][0])
            + (&m[1][1] * &m[2][2] - &m[1][2] * &m[2][1]);
        Ok((tr, minors, mat_det(&m)))
    }

    pub fn fixed_point_multipliers(&self) -> Result<MultiplierTriple> {
        let (s1, s2, s3) = self.multiplier_charpoly()?;
        // T³ − σ₁T² + σ₂T − σ₃, low to high
        let poly = vec![-s3, s2, -s1, BigRational::one()];
        let roots = rational_roots(&poly);
        if roots.is_empty() {
            return Err(Error::NotQuadratic(format!(
                "multiplier polynomial of {self} is irreducible"
            )));
        }
        let mut rest = poly;
        let mut out: Vec<QuadElem> = Vec::new();
        for r in &roots {
            out.push(QuadElem::rational(r.clone()));
            rest = deflate(&rest, r);
        }
        if rest.len() == 3 {
            for p in quad_roots(&rest[2], &rest[1], &rest[0])? {
                match p {
                    Point::Finite(x) => out.push(x),
                    Point::Infinity => unreachable!("monic quadratic"),
                }
            }
        }
        let [a, b, c]: [QuadElem; 3] = out.try_into().expect("three multipliers");
        Ok(MultiplierTriple([a, b, c]))
    }

    /// `f ∘ φ ∘ f⁻¹`, content-normalized.
    pub fn conjugate(&self, f: &Mobius) -> QuadMap {
        // f⁻¹(x, y) = (d x − b y, −c x + a y)
        let l1 = [f.d.clone(), -f.b.clone()];
        let l2 = [-f.c.clone(), f.a.clone()];
        let fs = subst(&self.f, &l1, &l2);
        let gs = subst(&self.g, &l1, &l2);
        let comb = |s: &BigInt, t: &BigInt| -> [BigInt; 3] {
            [0, 1, 2].map(|i| s * &fs[i] + t * &gs[i])
        };
        QuadMap::new(comb(&f.a, &f.b), comb(&f.c, &f.d)).expect("conjugation preserves nondegeneracy")
    }

    /// Reduction modulo an odd prime; `None` on bad reduction.
    pub fn reduce_mod_p(&self, p: u32) -> Result<Option<FpMap>> {
        if p == 2 || !crate::primes::is_prime(p as u64) {
            return Err(Error::NotOddPrime(p as u64));
        }
        if (self.resultant() % BigInt::from(p)).is_zero() {
            return Ok(None);
        }
        let red = |c: &BigInt| c.mod_floor(&BigInt::from(p)).to_u32().expect("residue fits");
        Ok(Some(FpMap::new(p, self.f.each_ref().map(red), self.g.each_ref().map(red))?))
    }
}

impl fmt::Display for QuadMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [f2, f1, f0] = &self.f;
        let [g2, g1, g0] = &self.g;
        write!(f, "[{f2},{f1},{f0}]/[{g2},{g1},{g0}]")
    }
}

impl FromStr for QuadMap {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse {
            what: "map",
            input: s.to_string(),
        };
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let (l, r) = s.split_once("]/[").ok_or_else(bad)?;
        let l = l.strip_prefix('[').ok_or_else(bad)?;
        let r = r.strip_suffix(']').ok_or_else(bad)?;
        let parse3 = |part: &str| -> Result<[BigInt; 3]> {
            let v: Vec<BigInt> = part
                .split(',')
                .map(|x| x.parse::<BigInt>().map_err(|_| bad()))
                .collect::<Result<_>>()?;
            v.try_into().map_err(|_| bad())
        };
        QuadMap::new(parse3(l)?, parse3(r)?)
    }
}

impl Mobius {
    pub fn new(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Result<Self> {
        if (&a * &d - &b * &c).is_zero() {
            return Err(Error::InvalidParameter("Mobius determinant is zero".into()));
        }
        Ok(Mobius { a, b, c, d })
    }

    pub fn from_i64(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        Mobius::new(big(a), big(b), big(c), big(d))
    }

    pub fn identity() -> Self {
        Mobius::from_i64(1, 0, 0, 1).expect("identity")
    }

    pub fn inverse(&self) -> Self {
        Mobius {
            a: self.d.clone(),
            b: -self.b.clone(),
            c: -self.c.clone(),
            d: self.a.clone(),
        }
    }

    pub fn apply(&self, p: &Point) -> Result<Point> {
        let (num, den) = match p {
            Point::Infinity => (
                QuadElem::rational(ratio(&self.a)),
                QuadElem::rational(ratio(&self.c)),
            ),
            Point::Finite(z) => {
                let k = |v: &BigInt| QuadElem::rational(ratio(v));
                (&(&k(&self.a) * z) + &k(&self.b), &(&k(&self.c) * z) + &k(&self.d))
            }
        };
        if den.is_zero() {
            Ok(Point::Infinity)
        } else {
            Ok(Point::Finite(num.checked_div(&den)?))
        }
    }
}

/// `Q(l1, l2)` for a binary quadratic `Q` and linear forms `l = [coef_x, coef_y]`.
fn subst(q: &[BigInt; 3], l1: &[BigInt; 2], l2: &[BigInt; 2]) -> [BigInt; 3] {
    let sq = |l: &[BigInt; 2]| [&l[0] * &l[0], big(2) * &l[0] * &l[1], &l[1] * &l[1]];
    let a = sq(l1);
    let c = sq(l2);
    let b = [
        &l1[0] * &l2[0],
        &l1[0] * &l2[1] + &l1[1] * &l2[0],
        &l1[1] * &l2[1],
    ];
    [0, 1, 2].map(|i| &q[0] * &a[i] + &q[1] * &b[i] + &q[2] * &c[i])
}

type Mat3 = [[BigRational; 3]; 3];

/// Polynomial product, coefficients low to high.
fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Remainder modulo a cubic `p` (low to high, `p[3] != 0`).
fn poly_rem(a: &[BigRational], p: &[BigRational]) -> [BigRational; 3] {
    let mut r = a.to_vec();
    for k in (3..r.len()).rev() {
        let q = &r[k] / &p[3];
        for i in 0..4 {
            let t = &q * &p[i];
            r[k - 3 + i] -= t;
        }
    }
    r.resize(3, BigRational::zero());
    [r[0].clone(), r[1].clone(), r[2].clone()]
}

/// Matrix of multiplication by `h` on `Q[z]/(p)` in the basis 1, z, z².
fn mult_matrix(h: &[BigRational], p: &[BigRational]) -> Mat3 {
    let mut m: Mat3 = Default::default();
    let mut basis = vec![BigRational::one()];
    for j in 0..3 {
        let col = poly_rem(&poly_mul(h, &basis), p);
        for i in 0..3 {
            m[i][j] = col[i].clone();
        }
        basis.insert(0, BigRational::zero());
    }
    m
}

fn mat_mul(a: &Mat3, b: &Mat3) -> Mat3 {
    let mut m: Mat3 = Default::default();
    for i in 0..3 {
        for j in 0..3 {
            m[i][j] = (0..3).map(|k| &a[i][k] * &b[k][j]).sum();
        }
    }
    m
}

fn mat_det(m: &Mat3) -> BigRational {
    &m[0][0] * (&m[1][1] * &m[2][2] - &m[1][2] * &m[2][1])
        - &m[0][1] * (&m[1][0] * &m[2][2] - &m[1][2] * &m[2][0])
        + &m[0][2] * (&m[1][0] * &m[2][1] - &m[1][1] * &m[2][0])
}

fn mat_inv(m: &Mat3) -> Result<Mat3> {
    let det = mat_det(m);
    if det.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let mut inv: Mat3 = Default::default();
    for i in 0..3 {
        for j in 0..3 {
            let (r0, r1) = ((j + 1) % 3, (j + 2) % 3);
            let (c0, c1) = ((i + 1) % 3, (i + 2) % 3);
            let cof = &m[r0][c0] * &m[r1][c1] - &m[r0][c1] * &m[r1][c0];
            inv[i][j] = cof / &det;
        }
    }
    Ok(inv)
}

/// Text form of a σ-pair, e.g. `(-2/3, 4/3)`.
pub fn format_sigma_pair(s1: &BigRational, s2: &BigRational) -> String {
    format!("({}, {})", format_rational(s1), format_rational(s2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, parse_rational, rat};
    use proptest::prelude::*;

    fn sig(a: &str, b: &str) -> QuadMap {
        QuadMap::from_sigmas(&parse_rational(a).unwrap(), &parse_rational(b).unwrap())
    }

    fn map(s: &str) -> QuadMap {
        s.parse().unwrap()
    }

    /// 4×4 Sylvester determinant, an independent check on the closed form.
    fn sylvester(m: &QuadMap) -> BigInt {
        let [f2, f1, f0] = m.f().clone();
        let [g2, g1, g0] = m.g().clone();
        let z = BigInt::zero;
        let rows: [[BigInt; 4]; 4] = [
            [f2.clone(), f1.clone(), f0.clone(), z()],
            [z(), f2, f1, f0],
            [g2.clone(), g1.clone(), g0.clone(), z()],
            [z(), g2, g1, g0],
        ];
        det4(&rows)
    }

    fn det4(m: &[[BigInt; 4]; 4]) -> BigInt {
        let mut total = BigInt::zero();
        for perm in permutations(4) {
            let mut term = BigInt::one();
            for (i, &j) in perm.iter().enumerate() {
                term *= &m[i][j];
            }
            let inversions = (0..4)
                .flat_map(|i| (i + 1..4).map(move |j| (i, j)))
                .filter(|&(i, j)| perm[i] > perm[j])
                .count();
            if inversions % 2 == 0 {
                total += term;
            } else {
                total -= term;
            }
        }
        total
    }

    fn permutations(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in permutations(n - 1) {
            for i in 0..n {
                let mut q = p.clone();
                q.insert(i, n - 1);
                out.push(q);
            }
        }
        out
    }

    #[test]
    fn normal_form_examples() {
        assert_eq!(sig("2", "-8").to_string(), "[2,0,0]/[-1,4,8]");
        assert_eq!(sig("-2/3", "4/3").to_string(), "[6,8,8]/[-3,4,4]");
        assert_eq!(sig("-6", "4").to_string(), "[2,8,8]/[-1,-4,4]");
    }

    #[test]
    fn resultant_examples() {
        assert_eq!(sig("2", "-8").resultant(), big(256));
        assert_eq!(sig("2", "0").resultant(), big(0));
        assert_eq!(sig("-6", "12").resultant(), big(0));
    }

    #[test]
    fn critical_point_examples() {
        let [a, b] = sig("2", "-8").critical_points().unwrap();
        assert_eq!((a, b), (Point::int(0), Point::int(-4)));
        let [a, b] = map("[1,0,0]/[0,0,1]").critical_points().unwrap();
        assert_eq!((a, b), (Point::int(0), Point::Infinity));
        let [a, b] = sig("-2", "0").critical_points().unwrap();
        assert_eq!(a.to_string(), "-3+1*sqrt(5)");
        assert_eq!(b.to_string(), "-3-1*sqrt(5)");
    }

    #[test]
    fn apply_examples() {
        let m = sig("2", "-8");
        assert_eq!(m.apply(&Point::int(-4)).unwrap(), Point::rational(rat(-4, 3)));
        assert_eq!(m.apply(&Point::int(4)).unwrap(), Point::int(4));
        let r8 = sig("-2", "0");
        let c: Point = "-3-1*sqrt(5)".parse().unwrap();
        assert_eq!(r8.apply(&c).unwrap().to_string(), "-1/2-1/2*sqrt(5)");
    }

    #[test]
    fn multiplier_examples() {
        let cases = [
            ("[1,0,-2]/[0,0,1]", ["-2", "0", "4"]),
            ("[1,0,0]/[0,0,1]", ["0", "0", "2"]),
            ("[0,0,1]/[1,0,0]", ["-2", "-2", "-2"]),
        ];
        for (s, want) in cases {
            let t = map(s).fixed_point_multipliers().unwrap();
            let mut got: Vec<String> = t.0.iter().map(|x| x.to_string()).collect();
            got.sort();
            assert_eq!(got, want, "{s}");
        }
    }

    #[test]
    fn sigma_examples() {
        let cases = [
            ("[1,0,-2]/[0,0,1]", (int(2), int(-8))),
            ("[1,0,-1]/[0,0,1]", (int(2), int(-4))),
            ("[0,0,1]/[1,0,0]", (int(-6), int(12))),
        ];
        for (s, want) in cases {
            assert_eq!(map(s).sigma_invariants().unwrap(), want, "{s}");
        }
        // z² − 1 has multipliers 1 ± √5 and 0
        let t = map("[1,0,-1]/[0,0,1]").fixed_point_multipliers().unwrap();
        assert!(t.0.iter().any(|x| x.to_string() == "1+1*sqrt(5)"));
    }

    #[test]
    fn multipliers_match_fixed_points() {
        let m = map("[1,0,-1]/[0,0,1]");
        let fps = m.fixed_points().unwrap();
        let mut direct: Vec<QuadElem> = fps
            .iter()
            .map(|p| m.fixed_point_multiplier(p).unwrap())
            .collect();
        let mut via = m.fixed_point_multipliers().unwrap().0.to_vec();
        direct.sort();
        via.sort();
        assert_eq!(direct, via);
    }

    #[test]
    fn conjugate_examples() {
        let sq = map("[1,0,0]/[0,0,1]");
        assert_eq!(sq.conjugate(&Mobius::identity()), sq);
        // g(z) = z/2 takes 8/z² to 1/z²
        let t8 = map("[0,0,8]/[1,0,0]");
        let g = Mobius::from_i64(1, 0, 0, 2).unwrap();
        assert_eq!(t8.conjugate(&g), map("[0,0,1]/[1,0,0]"));
    }

    #[test]
    fn reduction_examples() {
        let m = sig("2", "-8").reduce_mod_p(7).unwrap().unwrap();
        assert_eq!((m.f(), m.g()), ([2, 0, 0], [6, 4, 1]));
        assert!(matches!(sig("2", "-8").reduce_mod_p(2), Err(Error::NotOddPrime(2))));
        assert!(sig("-2/3", "4/3").reduce_mod_p(3).unwrap().is_none());
    }

    #[test]
    fn parse_round_trip() {
        let m = map("[ -2, 4, 0 ] / [ 2,-4, 2]");
        assert_eq!(m.to_string(), "[1,-2,0]/[-1,2,-1]");
        assert!("[1,2]/[3,4,5]".parse::<QuadMap>().is_err());
    }

    fn small_rat() -> impl Strategy<Value = BigRational> {
        (-12i64..=12, 1i64..=6).prop_map(|(n, d)| rat(n, d))
    }

    fn small_mobius() -> impl Strategy<Value = Mobius> {
        (-3i64..=3, -3i64..=3, -3i64..=3, -3i64..=3)
            .prop_filter("invertible", |(a, b, c, d)| a * d - b * c != 0)
            .prop_map(|(a, b, c, d)| Mobius::from_i64(a, b, c, d).unwrap())
    }

    proptest! {
        #[test]
        fn resultant_matches_sylvester(f in prop::array::uniform3(-20i64..20), g in prop::array::uniform3(-20i64..20)) {
            prop_assume!(f.iter().chain(g.iter()).any(|&c| c != 0));
            let m = QuadMap::from_i64(f, g).unwrap();
            prop_assert_eq!(m.resultant(), sylvester(&m));
        }

        #[test]
        fn sigma_round_trip(s1 in small_rat(), s2 in small_rat()) {
            let m = QuadMap::from_sigmas(&s1, &s2);
            prop_assume!(!m.resultant().is_zero());
            prop_assert_eq!(m.sigma_invariants().unwrap(), (s1, s2));
        }

        #[test]
        fn conjugation_preserves_sigmas(s1 in small_rat(), s2 in small_rat(), f in small_mobius()) {
            let m = QuadMap::from_sigmas(&s1, &s2);
            prop_assume!(!m.resultant().is_zero());
            let c = m.conjugate(&f);
            prop_assert_eq!(c.sigma_invariants().unwrap(), (s1, s2));
        }

        #[test]
        fn conjugation_moves_points(s1 in small_rat(), s2 in small_rat(), f in small_mobius(), x in small_rat()) {
            let m = QuadMap::from_sigmas(&s1, &s2);
            prop_assume!(!m.resultant().is_zero());
            let c = m.conjugate(&f);
            let p = Point::rational(x);
            let lhs = c.apply(&f.apply(&p).unwrap()).unwrap();
            let rhs = f.apply(&m.apply(&p).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn bad_reduction_iff_divides_resultant(s1 in small_rat(), s2 in small_rat(), pi in 0usize..24) {
            let m = QuadMap::from_sigmas(&s1, &s2);
            prop_assume!(!m.resultant().is_zero());
            let p = crate::primes::odd_primes(24)[pi];
            let bad = (m.resultant() % BigInt::from(p)).is_zero();
            let red = m.reduce_mod_p(p).unwrap();
            prop_assert_eq!(red.is_none(), bad);
            if let Some(r) = red {
                prop_assert!(r.resultant() != 0);
            }
        }

        #[test]
        fn denominators_divide_resultant(s1 in small_rat(), s2 in small_rat()) {
            let m = QuadMap::from_sigmas(&s1, &s2);
            let res = m.resultant();
            for d in [s1.denom(), s2.denom()] {
                for p in crate::primes::odd_primes(10) {
                    if (d % BigInt::from(p)).is_zero() {
                        prop_assert!((&res % BigInt::from(p)).is_zero());
                    }
                }
            }
        }

        #[test]
        fn wronskian_discriminant_is_four_resultants(f in prop::array::uniform3(-20i64..20), g in prop::array::uniform3(-20i64..20)) {
            prop_assume!(f.iter().chain(g.iter()).any(|&c| c != 0));
            let m = QuadMap::from_i64(f, g).unwrap();
            let [a, b, c] = m.half_wronskian();
            prop_assert_eq!(&b * &b - big(4) * a * c, big(4) * m.resultant());
        }
    }
}
