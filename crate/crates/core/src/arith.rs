//! Exact scalars: extended rationals, elements of real quadratic fields,
//! points of the projective line over either, and the multiplicative height.
//!
//! Text encoding used throughout the crate: rationals as `p/q` (`q` omitted
//! when 1), quadratic-field elements as `a+b*sqrt(D)`, and `inf` for the
//! point at infinity.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Shorthand for building a rational from machine integers.
pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// A rational number or the point at infinity, i.e. a point of P^1(Q).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ExtRational {
    Finite(BigRational),
    Infinity,
}

impl ExtRational {
    pub fn finite(&self) -> Option<&BigRational> {
        match self {
            ExtRational::Finite(q) => Some(q),
            ExtRational::Infinity => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtRational::Infinity)
    }
}

impl From<BigRational> for ExtRational {
    fn from(q: BigRational) -> Self {
        ExtRational::Finite(q)
    }
}

/// Finite values by size, infinity last.
impl Ord for ExtRational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtRational::Finite(a), ExtRational::Finite(b)) => a.cmp(b),
            (ExtRational::Finite(_), ExtRational::Infinity) => Ordering::Less,
            (ExtRational::Infinity, ExtRational::Finite(_)) => Ordering::Greater,
            (ExtRational::Infinity, ExtRational::Infinity) => Ordering::Equal,
        }
    }
}

impl PartialOrd for ExtRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ExtRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtRational::Finite(q) => write_rational(f, q),
            ExtRational::Infinity => f.write_str("inf"),
        }
    }
}

impl FromStr for ExtRational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "inf" {
            return Ok(ExtRational::Infinity);
        }
        parse_rational(s).map(ExtRational::Finite)
    }
}

fn write_rational(f: &mut fmt::Formatter<'_>, q: &BigRational) -> fmt::Result {
    if q.denom().is_one() {
        write!(f, "{}", q.numer())
    } else {
        write!(f, "{}/{}", q.numer(), q.denom())
    }
}

pub fn format_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse {
        what: "rational",
        input: s.to_string(),
    };
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

/// Multiplicative height of a point of P^1(Q): `max(|p|, q)` in lowest terms.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Height(pub BigUint);

impl Height {
    pub fn exceeds(&self, bound: u64) -> bool {
        self.0 > BigUint::from(bound)
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.0.to_u64()
    }
}

impl From<u64> for Height {
    fn from(v: u64) -> Self {
        Height(BigUint::from(v))
    }
}

impl fmt::Display for Height {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

pub fn rational_height(q: &BigRational) -> Height {
    let n = q.numer().magnitude();
    let d = q.denom().magnitude();
    Height(if n > d { n.clone() } else { d.clone() })
}

pub fn height(x: &ExtRational) -> Height {
    match x {
        ExtRational::Finite(q) => rational_height(q),
        ExtRational::Infinity => Height::from(1),
    }
}

/// Iterator over every rational of height at most `h_max`, ordered by
/// height, then denominator, then numerator.
#[derive(Clone, Debug)]
pub struct RationalsUpTo {
    h_max: u64,
    h: u64,
    q: u64,
    // numerators still to be yielded for the current (h, q), ascending
    pending: Vec<i64>,
    next: usize,
}

pub fn enumerate_rationals(h_max: u64) -> RationalsUpTo {
    let mut it = RationalsUpTo {
        h_max,
        h: 1,
        q: 0,
        pending: Vec::new(),
        next: 0,
    };
    it.advance_block();
    it
}

/// Number of rationals of height at most `h_max` without enumerating them.
pub fn count_rationals(h_max: u64) -> u64 {
    if h_max == 0 {
        return 0;
    }
    // height 1 contributes -1, 0, 1; height h > 1 contributes 4 * phi(h)
    3 + (2..=h_max).map(|h| 4 * euler_phi(h)).sum::<u64>()
}

pub fn euler_phi(n: u64) -> u64 {
    let mut n = n;
    let mut out = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            out -= out / p;
        }
        p += 1;
    }
    if n > 1 {
        out -= out / n;
    }
    out
}

impl RationalsUpTo {
    fn advance_block(&mut self) {
        loop {
            if self.h > self.h_max {
                self.pending.clear();
                self.next = 0;
                return;
            }
            self.q += 1;
            if self.q > self.h {
                self.h += 1;
                self.q = 0;
                continue;
            }
            let (h, q) = (self.h as i64, self.q as i64);
            self.pending.clear();
            self.next = 0;
            if q < h {
                if h.gcd(&q) == 1 {
                    self.pending.extend([-h, h]);
                }
            } else {
                self.pending
                    .extend((-h + 1..h).filter(|p| p.gcd(&q) == 1));
                if h == 1 {
                    // 1/1 and -1/1 have height 1 with q == h
                    self.pending = vec![-1, 0, 1];
                }
            }
            if !self.pending.is_empty() {
                return;
            }
        }
    }
}

impl Iterator for RationalsUpTo {
    type Item = BigRational;

    fn next(&mut self) -> Option<BigRational> {
        if self.next >= self.pending.len() {
            return None;
        }
        let n = self.pending[self.next];
        let q = self.q as i64;
        self.next += 1;
        if self.next >= self.pending.len() {
            self.advance_block();
        }
        Some(BigRational::new_raw(BigInt::from(n), BigInt::from(q)))
    }
}

/// Writes `n = k^2 * s` with `s` squarefree; returns `(k, s)`.
///
/// Trial division runs only up to the cube root of the unfactored part; what
/// remains then has at most two prime factors and is a square or squarefree.
pub fn squarefree_decompose(n: &BigUint) -> (BigUint, BigUint) {
    if n.is_zero() {
        return (BigUint::zero(), BigUint::zero());
    }
    let mut m = n.clone();
    let mut k = BigUint::one();
    let mut s = BigUint::one();
    let mut p = BigUint::from(2u32);
    while &p * &p * &p <= m {
        if (&m % &p).is_zero() {
            let mut e = 0u32;
            while (&m % &p).is_zero() {
                m /= &p;
                e += 1;
            }
            k *= p.pow(e / 2);
            if e % 2 == 1 {
                s *= &p;
            }
        }
        p += if p == BigUint::from(2u32) { 1u32 } else { 2u32 };
    }
    let r = m.sqrt();
    if &r * &r == m {
        k *= r;
    } else {
        s *= m;
    }
    (k, s)
}

/// Exact square root of a rational, if it has one.
pub fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().magnitude();
    let d = q.denom().magnitude();
    let (rn, rd) = (n.sqrt(), d.sqrt());
    if &rn * &rn == *n && &rd * &rd == *d {
        Some(BigRational::new(
            BigInt::from_biguint(Sign::Plus, rn),
            BigInt::from_biguint(Sign::Plus, rd),
        ))
    } else {
        None
    }
}

pub fn is_rational_square(q: &BigRational) -> bool {
    !q.is_zero() && rational_sqrt(q).is_some()
}

/// `a + b*sqrt(d)` in a quadratic field.
///
/// Canonical form: `d` squarefree and not 0 or 1 when `b != 0`; rational
/// elements carry `b = 0, d = 1`, so derived equality and hashing are exact.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadElem {
    a: BigRational,
    b: BigRational,
    d: BigInt,
}

impl QuadElem {
    /// Builds `a + b*sqrt(d)` for any positive `d`, extracting square factors.
    ///
    /// A negative `d` gives an imaginary quadratic field; only the verifier
    /// uses those, for maps whose critical points are complex.
    pub fn new(a: BigRational, b: BigRational, d: &BigInt) -> Result<Self> {
        if d.is_zero() || b.is_zero() {
            return Ok(QuadElem::rational(a));
        }
        let (k, s) = squarefree_decompose(d.magnitude());
        let k = BigRational::from_integer(BigInt::from(k));
        if s.is_one() && d.is_positive() {
            return Ok(QuadElem::rational(a + b * k));
        }
        let s = BigInt::from(s);
        Ok(QuadElem {
            a,
            b: b * k,
            d: if d.is_negative() { -s } else { s },
        })
    }

    pub fn rational(a: BigRational) -> Self {
        QuadElem {
            a,
            b: BigRational::zero(),
            d: BigInt::one(),
        }
    }

    fn canon(a: BigRational, b: BigRational, d: BigInt) -> Self {
        if b.is_zero() {
            QuadElem::rational(a)
        } else {
            QuadElem { a, b, d }
        }
    }

    pub fn a(&self) -> &BigRational {
        &self.a
    }

    pub fn b(&self) -> &BigRational {
        &self.b
    }

    /// Radicand; 1 for rational elements.
    pub fn radicand(&self) -> &BigInt {
        &self.d
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        self.is_rational().then_some(&self.a)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn conj(&self) -> Self {
        QuadElem::canon(self.a.clone(), -self.b.clone(), self.d.clone())
    }

    /// `(a + b√d)(a - b√d) = a² - d b²`.
    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - BigRational::from_integer(self.d.clone()) * &self.b * &self.b
    }

    pub fn trace(&self) -> BigRational {
        &self.a + &self.a
    }

    pub fn inv(&self) -> Result<Self> {
        let n = self.norm();
        if n.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(QuadElem::canon(
            &self.a / &n,
            -(&self.b / &n),
            self.d.clone(),
        ))
    }

    pub fn checked_div(&self, rhs: &QuadElem) -> Result<Self> {
        Ok(self * &rhs.inv()?)
    }

    /// Height of the coordinates: `max(H(a), H(b))`.
    pub fn naive_height(&self) -> Height {
        rational_height(&self.a).max(rational_height(&self.b))
    }

    fn common_field(&self, rhs: &QuadElem) -> BigInt {
        match (self.is_rational(), rhs.is_rational()) {
            (true, _) => rhs.d.clone(),
            (_, true) => self.d.clone(),
            _ => {
                assert_eq!(
                    self.d, rhs.d,
                    "arithmetic across different quadratic fields"
                );
                self.d.clone()
            }
        }
    }
}

impl From<BigRational> for QuadElem {
    fn from(q: BigRational) -> Self {
        QuadElem::rational(q)
    }
}

impl<'a> Add<&'a QuadElem> for &'a QuadElem {
    type Output = QuadElem;
    fn add(self, rhs: &QuadElem) -> QuadElem {
        let d = self.common_field(rhs);
        QuadElem::canon(&self.a + &rhs.a, &self.b + &rhs.b, d)
    }
}

impl<'a> Sub<&'a QuadElem> for &'a QuadElem {
    type Output = QuadElem;
    fn sub(self, rhs: &QuadElem) -> QuadElem {
        let d = self.common_field(rhs);
        QuadElem::canon(&self.a - &rhs.a, &self.b - &rhs.b, d)
    }
}

impl<'a> Mul<&'a QuadElem> for &'a QuadElem {
    type Output = QuadElem;
    fn mul(self, rhs: &QuadElem) -> QuadElem {
        let d = self.common_field(rhs);
        let dr = BigRational::from_integer(d.clone());
        let a = &self.a * &rhs.a + dr * &self.b * &rhs.b;
        let b = &self.a * &rhs.b + &self.b * &rhs.a;
        QuadElem::canon(a, b, d)
    }
}

impl<'a> Div<&'a QuadElem> for &'a QuadElem {
    type Output = QuadElem;
    /// Panics on division by zero; see [`QuadElem::checked_div`].
    fn div(self, rhs: &QuadElem) -> QuadElem {
        self.checked_div(rhs).expect("division by zero in quadratic field")
    }
}

impl Neg for &QuadElem {
    type Output = QuadElem;
    fn neg(self) -> QuadElem {
        QuadElem::canon(-self.a.clone(), -self.b.clone(), self.d.clone())
    }
}

macro_rules! forward_owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<QuadElem> for QuadElem {
            type Output = QuadElem;
            fn $m(self, rhs: QuadElem) -> QuadElem {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a QuadElem> for QuadElem {
            type Output = QuadElem;
            fn $m(self, rhs: &QuadElem) -> QuadElem {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<QuadElem> for &'a QuadElem {
            type Output = QuadElem;
            fn $m(self, rhs: QuadElem) -> QuadElem {
                self.$m(&rhs)
            }
        }
    )*};
}

forward_owned_ops!(Add add, Sub sub, Mul mul, Div div);

impl Neg for QuadElem {
    type Output = QuadElem;
    fn neg(self) -> QuadElem {
        -&self
    }
}

impl fmt::Display for QuadElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            return write_rational(f, &self.a);
        }
        if !self.a.is_zero() {
            write_rational(f, &self.a)?;
            if !self.b.is_negative() {
                f.write_str("+")?;
            }
        }
        write_rational(f, &self.b)?;
        write!(f, "*sqrt({})", self.d)
    }
}

impl FromStr for QuadElem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::Parse {
            what: "quadratic field element",
            input: s.clone(),
        };
        let Some(star) = s.find("*sqrt(") else {
            return parse_rational(&s).map(QuadElem::rational);
        };
        let radicand = s[star + 6..].strip_suffix(')').ok_or_else(bad)?;
        let d: BigInt = radicand.parse().map_err(|_| bad())?;
        let head = &s[..star];
        // the coefficient of the root starts at the last sign past position 0
        let split = head
            .char_indices()
            .filter(|&(i, c)| i > 0 && (c == '+' || c == '-'))
            .map(|(i, _)| i)
            .next_back();
        let (a, b) = match split {
            Some(i) => {
                let b = head[i..].trim_start_matches('+');
                (parse_rational(&head[..i])?, parse_rational(b)?)
            }
            None => (BigRational::zero(), parse_rational(head.trim_start_matches('+'))?),
        };
        QuadElem::new(a, b, &d)
    }
}

/// A point of P^1 over Q or a real quadratic field.
///
/// Ordering is only a deterministic total order for output, with rationals
/// ordered by value and infinity last.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Point {
    Finite(QuadElem),
    Infinity,
}

impl Point {
    pub fn rational(q: BigRational) -> Self {
        Point::Finite(QuadElem::rational(q))
    }

    pub fn int(n: i64) -> Self {
        Point::rational(int(n))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Point::Infinity)
    }

    pub fn is_rational(&self) -> bool {
        match self {
            Point::Finite(x) => x.is_rational(),
            Point::Infinity => true,
        }
    }

    pub fn to_ext_rational(&self) -> Option<ExtRational> {
        match self {
            Point::Finite(x) => x.as_rational().cloned().map(ExtRational::Finite),
            Point::Infinity => Some(ExtRational::Infinity),
        }
    }

    pub fn conj(&self) -> Self {
        match self {
            Point::Finite(x) => Point::Finite(x.conj()),
            Point::Infinity => Point::Infinity,
        }
    }

    pub fn height(&self) -> Height {
        match self {
            Point::Finite(x) => x.naive_height(),
            Point::Infinity => Height::from(1),
        }
    }
}

impl From<ExtRational> for Point {
    fn from(x: ExtRational) -> Self {
        match x {
            ExtRational::Finite(q) => Point::rational(q),
            ExtRational::Infinity => Point::Infinity,
        }
    }
}

impl From<BigRational> for Point {
    fn from(q: BigRational) -> Self {
        Point::rational(q)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Finite(x) => x.fmt(f),
            Point::Infinity => f.write_str("inf"),
        }
    }
}

impl FromStr for Point {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.trim() == "inf" {
            Ok(Point::Infinity)
        } else {
            s.parse().map(Point::Finite)
        }
    }
}

/// Roots in P^1 of `a z² + b z + c`, counted with multiplicity.
///
/// When `a = 0` infinity is a root. Irrational roots come back as the
/// conjugate pair `r ± s√D`, the `+` root first.
pub fn quad_roots(a: &BigRational, b: &BigRational, c: &BigRational) -> Result<[Point; 2]> {
    roots_in_p1(a, b, c, false)
}

/// As [`quad_roots`], but returns complex roots in an imaginary quadratic
/// field instead of failing.
pub fn quad_roots_allow_complex(a: &BigRational, b: &BigRational, c: &BigRational) -> Result<[Point; 2]> {
    roots_in_p1(a, b, c, true)
}

fn roots_in_p1(a: &BigRational, b: &BigRational, c: &BigRational, complex: bool) -> Result<[Point; 2]> {
    if a.is_zero() {
        if b.is_zero() {
            if c.is_zero() {
                return Err(Error::InvalidParameter(
                    "all coefficients of the quadratic are zero".into(),
                ));
            }
            return Ok([Point::Infinity, Point::Infinity]);
        }
        return Ok([Point::rational(-c / b), Point::Infinity]);
    }
    let disc = b * b - BigRational::from_integer(BigInt::from(4)) * a * c;
    if disc.is_negative() && !complex {
        return Err(Error::ComplexRoots(format_rational(&disc)));
    }
    let two_a = a + a;
    let center = -b / &two_a;
    if let Some(r) = rational_sqrt(&disc) {
        let off = r / &two_a;
        return Ok([
            Point::rational(&center + &off),
            Point::rational(&center - &off),
        ]);
    }
    // sqrt(n/d) = sqrt(n*d)/d
    let radicand = disc.numer() * disc.denom();
    let coeff = BigRational::new(BigInt::one(), disc.denom().clone()) / &two_a;
    let plus = QuadElem::new(center.clone(), coeff.clone(), &radicand)?;
    let minus = QuadElem::new(center, -coeff, &radicand)?;
    Ok([Point::Finite(plus), Point::Finite(minus)])
}

/// Integer roots of an integer polynomial (coefficients low to high).
///
/// Exact: splits the line into monotone stretches using the derivative's
/// real roots (bracketed to unit intervals), then bisects each stretch.
pub fn integer_roots(poly: &[BigInt]) -> Vec<BigInt> {
    let poly = trim(poly);
    if poly.len() <= 1 {
        return Vec::new();
    }
    let mut out: Vec<BigInt> = Vec::new();
    for k in root_brackets(&poly) {
        for cand in [k.clone(), k + 1] {
            if eval_int(&poly, &cand).is_zero() && !out.contains(&cand) {
                out.push(cand);
            }
        }
    }
    out.sort();
    out
}

fn trim(poly: &[BigInt]) -> Vec<BigInt> {
    let mut p = poly.to_vec();
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn eval_int(poly: &[BigInt], x: &BigInt) -> BigInt {
    poly.iter()
        .rev()
        .fold(BigInt::zero(), |acc, c| acc * x + c)
}

/// Integers `k` such that every real root lies in some `[k, k+1]`.
fn root_brackets(poly: &[BigInt]) -> Vec<BigInt> {
    let deg = poly.len() - 1;
    if deg == 0 {
        return Vec::new();
    }
    if deg == 1 {
        let r = BigRational::new(-poly[0].clone(), poly[1].clone());
        return vec![r.floor().to_integer()];
    }
    // Cauchy bound
    let lead = poly[deg].magnitude();
    let max = poly[..deg].iter().map(|c| c.magnitude()).max().cloned().unwrap_or_default();
    let bound = BigInt::from(max / lead + 2u32);
    let deriv: Vec<BigInt> = poly
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigInt::from(i))
        .collect();
    let crit = root_brackets(&trim(&deriv));
    let mut cuts: Vec<BigInt> = vec![-bound.clone(), bound];
    for k in &crit {
        cuts.push(k.clone());
        cuts.push(k + 1);
    }
    cuts.sort();
    cuts.dedup();
    let mut out = crit;
    for w in cuts.windows(2) {
        let (lo, hi) = (&w[0], &w[1]);
        let (flo, fhi) = (eval_int(poly, lo), eval_int(poly, hi));
        if flo.is_zero() {
            out.push(lo.clone());
        }
        if flo.sign() == fhi.sign() || flo.is_zero() || fhi.is_zero() {
            continue;
        }
        // monotone with a sign change: bisect to a unit interval
        let (mut lo, mut hi) = (lo.clone(), hi.clone());
        let neg_lo = flo.is_negative();
        while &hi - &lo > BigInt::one() {
            let mid: BigInt = (&lo + &hi) >> 1;
            let fm = eval_int(poly, &mid);
            if fm.is_zero() {
                lo = mid;
                break;
            }
            if fm.is_negative() == neg_lo {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        out.push(lo);
    }
    if let Some(last) = cuts.last() {
        if eval_int(poly, last).is_zero() {
            out.push(last.clone());
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Rational roots (with multiplicity) of a rational polynomial, low to high.
pub fn rational_roots(poly: &[BigRational]) -> Vec<BigRational> {
    let mut p: Vec<BigRational> = poly.to_vec();
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    let mut out = Vec::new();
    loop {
        if p.len() <= 1 {
            return out;
        }
        // primitive integer polynomial, then u = lead * x makes it monic
        let lcm = p.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = p.iter().map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer()).collect();
        let deg = ints.len() - 1;
        let lead = ints[deg].clone();
        let monic: Vec<BigInt> = ints
            .iter()
            .enumerate()
            .map(|(i, c)| {
                if i == deg {
                    BigInt::one()
                } else {
                    c * lead.pow((deg - 1 - i) as u32)
                }
            })
            .collect();
        let roots = integer_roots(&monic);
        let Some(u) = roots.first() else {
            return out;
        };
        let r = BigRational::new(u.clone(), lead.clone());
        out.push(r.clone());
        p = deflate(&p, &r);
    }
}

/// Synthetic division by `(x - r)`; assumes `r` is a root.
pub fn deflate(p: &[BigRational], r: &BigRational) -> Vec<BigRational> {
    let n = p.len() - 1;
    let mut q = vec![BigRational::zero(); n];
    let mut carry = BigRational::zero();
    for i in (0..n).rev() {
        carry = &p[i + 1] + carry * r;
        q[i] = carry.clone();
    }
    q
}

/// Converts a (possibly huge) height to a float for diagnostics only.
pub fn height_log10(h: &Height) -> f64 {
    let bits = h.0.bits() as f64;
    bits * std::f64::consts::LOG10_2
}
