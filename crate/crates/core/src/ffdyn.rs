//! Dynamics of quadratic maps over a prime field F_p (p odd).
//!
//! Points of P^1(F_p) are coded internally as `0..p` for finite values and
//! `p` for infinity.

use std::fmt;

use crate::error::{Error, Result};
use crate::primes::{is_prime, prime_factors};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FpPoint {
    Finite(u32),
    Infinity,
}

impl FpPoint {
    pub fn code(self, p: u32) -> u32 {
        match self {
            FpPoint::Finite(x) => x,
            FpPoint::Infinity => p,
        }
    }

    pub fn from_code(code: u32, p: u32) -> Self {
        if code == p {
            FpPoint::Infinity
        } else {
            FpPoint::Finite(code)
        }
    }
}

impl fmt::Display for FpPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FpPoint::Finite(x) => write!(f, "{x}"),
            FpPoint::Infinity => f.write_str("inf"),
        }
    }
}

/// Per-prime lookup tables shared by every map over the same field.
#[derive(Clone, Debug)]
pub struct PrimeField {
    p: u32,
    inv: Vec<u32>,
    // square root of each residue, or u32::MAX for non-residues
    sqrt: Vec<u32>,
    order_factors: Vec<u64>,
}

impl PrimeField {
    pub fn new(p: u32) -> Result<Self> {
        if p == 2 || !is_prime(p as u64) {
            return Err(Error::NotOddPrime(p as u64));
        }
        let p64 = p as u64;
        let mut inv = vec![0u32; p as usize];
        let mut sqrt = vec![u32::MAX; p as usize];
        for x in 1..p64 {
            inv[x as usize] = pow_mod(x, p64 - 2, p64) as u32;
        }
        for x in 0..p64 {
            let s = (x * x % p64) as usize;
            if sqrt[s] == u32::MAX {
                sqrt[s] = x as u32;
            }
        }
        Ok(PrimeField {
            p,
            inv,
            sqrt,
            order_factors: prime_factors(p64 - 1),
        })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn inv(&self, x: u32) -> u32 {
        debug_assert!(x != 0);
        self.inv[x as usize]
    }

    #[inline]
    pub fn sqrt(&self, x: u32) -> Option<u32> {
        let s = self.sqrt[x as usize];
        (s != u32::MAX).then_some(s)
    }

    /// Least `r >= 1` with `λ^r = 1`.
    pub fn mult_order(&self, lambda: u32) -> u32 {
        assert!(lambda != 0, "zero has no multiplicative order");
        let p = self.p as u64;
        let mut r = p - 1;
        for &q in &self.order_factors {
            while r % q == 0 && pow_mod(lambda as u64, r / q, p) == 1 {
                r /= q;
            }
        }
        r as u32
    }
}

pub fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

/// Multiplicative order of a nonzero residue.
pub fn mult_order(lambda: u32, p: u32) -> Result<u32> {
    let field = PrimeField::new(p)?;
    if lambda % p == 0 {
        return Err(Error::InvalidParameter("zero has no multiplicative order".into()));
    }
    Ok(field.mult_order(lambda % p))
}

/// A degree-2 map over F_p given by two binary quadratic forms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FpMap {
    p: u32,
    f: [u32; 3],
    g: [u32; 3],
}

impl FpMap {
    pub fn new(p: u32, f: [u32; 3], g: [u32; 3]) -> Result<Self> {
        if p == 2 || !is_prime(p as u64) {
            return Err(Error::NotOddPrime(p as u64));
        }
        let m = FpMap {
            p,
            f: f.map(|c| c % p),
            g: g.map(|c| c % p),
        };
        if m.resultant() == 0 {
            return Err(Error::Degenerate(format!("{m} has degree below 2")));
        }
        Ok(m)
    }

    /// The database family `[2x² + bxy + by², −x² + (4−b)xy + cy²]`,
    /// or `None` when it drops degree.
    pub fn normal_form(p: u32, b: u32, c: u32) -> Option<Self> {
        let m = FpMap {
            p,
            f: [2 % p, b % p, b % p],
            g: [p - 1, (4 + p - b % p) % p, c % p],
        };
        (m.resultant() != 0).then_some(m)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn f(&self) -> [u32; 3] {
        self.f
    }

    pub fn g(&self) -> [u32; 3] {
        self.g
    }

    fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    fn sub(&self, a: u32, b: u32) -> u32 {
        (a + self.p - b) % self.p
    }

    pub fn resultant(&self) -> u32 {
        let [f2, f1, f0] = self.f;
        let [g2, g1, g0] = self.g;
        let a = self.sub(self.mul(f2, g0), self.mul(f0, g2));
        let b = self.sub(self.mul(f2, g1), self.mul(f1, g2));
        let c = self.sub(self.mul(f1, g0), self.mul(f0, g1));
        self.sub(self.mul(a, a), self.mul(b, c))
    }

    /// Half-Wronskian coefficients (x², xy, y²) mod p.
    pub fn half_wronskian(&self) -> [u32; 3] {
        let [f2, f1, f0] = self.f;
        let [g2, g1, g0] = self.g;
        [
            self.sub(self.mul(f2, g1), self.mul(f1, g2)),
            self.mul(2, self.sub(self.mul(f2, g0), self.mul(f0, g2))),
            self.sub(self.mul(f1, g0), self.mul(f0, g1)),
        ]
    }

    /// Critical points when both are F_p-rational. The Wronskian's
    /// discriminant is 4·Res ≠ 0, so the two points are always distinct.
    pub fn critical_points(&self, field: &PrimeField) -> Option<[FpPoint; 2]> {
        let p = self.p;
        let [a, b, c] = self.half_wronskian();
        if a == 0 {
            // b ≠ 0 because the discriminant b² is nonzero
            let root = self.mul(self.sub(0, c), field.inv(b));
            return Some([FpPoint::Finite(root), FpPoint::Infinity]);
        }
        let disc = self.sub(self.mul(b, b), self.mul(4, self.mul(a, c)));
        let s = field.sqrt(disc)?;
        let inv2a = field.inv(self.mul(2, a));
        let nb = self.sub(0, b);
        let r1 = self.mul((nb + s) % p, inv2a);
        let r2 = self.mul(self.sub(nb, s), inv2a);
        Some([FpPoint::Finite(r1), FpPoint::Finite(r2)])
    }

    #[inline]
    fn eval(form: &[u32; 3], z: u64, p: u64) -> u64 {
        ((form[0] as u64 * z + form[1] as u64) % p * z + form[2] as u64) % p
    }

    /// One step on point codes.
    #[inline]
    pub fn step_code(&self, field: &PrimeField, z: u32) -> u32 {
        let p = self.p as u64;
        let (num, den) = if z == self.p {
            (self.f[0] as u64, self.g[0] as u64)
        } else {
            (Self::eval(&self.f, z as u64, p), Self::eval(&self.g, z as u64, p))
        };
        if den == 0 {
            self.p
        } else {
            (num * field.inv(den as u32) as u64 % p) as u32
        }
    }

    pub fn apply(&self, field: &PrimeField, z: FpPoint) -> FpPoint {
        FpPoint::from_code(self.step_code(field, z.code(self.p)), self.p)
    }

    /// Local derivative from `z` to `y = φ(z)` as (numerator, denominator),
    /// switching to the chart at infinity at either end.
    fn local_derivative(&self, z: u32, y: u32) -> (u32, u32) {
        let p = self.p;
        let w = self.half_wronskian();
        match (z == p, y == p) {
            (false, false) => {
                let wz = Self::eval(&w, z as u64, p as u64) as u32;
                let gz = Self::eval(&self.g, z as u64, p as u64) as u32;
                (wz, self.mul(gz, gz))
            }
            (false, true) => {
                let wz = Self::eval(&w, z as u64, p as u64) as u32;
                let fz = Self::eval(&self.f, z as u64, p as u64) as u32;
                (self.sub(0, wz), self.mul(fz, fz))
            }
            (true, false) => (self.sub(0, w[0]), self.mul(self.g[0], self.g[0])),
            (true, true) => (w[0], self.mul(self.f[0], self.f[0])),
        }
    }

    /// Multiplier of the cycle through `start` of length `m`.
    pub fn cycle_multiplier(&self, field: &PrimeField, start: u32, m: u32) -> u32 {
        let (mut num, mut den) = (1u32, 1u32);
        let mut z = start;
        for _ in 0..m {
            let y = self.step_code(field, z);
            let (a, b) = self.local_derivative(z, y);
            num = self.mul(num, a);
            den = self.mul(den, b);
            z = y;
        }
        self.mul(num, field.inv(den))
    }

    /// Conjugate `h ∘ φ ∘ h⁻¹` by an invertible Möbius `h = [[a, b], [c, d]]`.
    pub fn conjugate(&self, h: [u32; 4]) -> Result<FpMap> {
        let p = self.p;
        let [a, b, c, d] = h.map(|x| x % p);
        if self.sub(self.mul(a, d), self.mul(b, c)) == 0 {
            return Err(Error::InvalidParameter("singular Mobius".into()));
        }
        // h⁻¹(x, y) = (d x − b y, −c x + a y)
        let l1 = [d, self.sub(0, b)];
        let l2 = [self.sub(0, c), a];
        let subst = |q: &[u32; 3]| -> [u32; 3] {
            let sq = |l: &[u32; 2]| [self.mul(l[0], l[0]), self.mul(2, self.mul(l[0], l[1])), self.mul(l[1], l[1])];
            let (x, z) = (sq(&l1), sq(&l2));
            let y = [
                self.mul(l1[0], l2[0]),
                (self.mul(l1[0], l2[1]) + self.mul(l1[1], l2[0])) % p,
                self.mul(l1[1], l2[1]),
            ];
            [0, 1, 2].map(|i| (self.mul(q[0], x[i]) + self.mul(q[1], y[i]) + self.mul(q[2], z[i])) % p)
        };
        let (fs, gs) = (subst(&self.f), subst(&self.g));
        let comb = |s: u32, t: u32| [0, 1, 2].map(|i| (self.mul(s, fs[i]) + self.mul(t, gs[i])) % p);
        FpMap::new(p, comb(a, b), comb(c, d))
    }
}

impl fmt::Display for FpMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [f2, f1, f0] = self.f;
        let [g2, g1, g0] = self.g;
        write!(f, "[{f2},{f1},{f0}]/[{g2},{g1},{g0}] mod {}", self.p)
    }
}

/// Tail/cycle decomposition of one orbit over F_p.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OrbitData {
    pub p: u32,
    pub tail: u32,
    pub m: u32,
    pub lambda: u32,
    /// Multiplicative order of `lambda`; `None` when superattracting.
    pub r: Option<u32>,
}

impl OrbitData {
    pub fn is_superattracting(&self) -> bool {
        self.r.is_none()
    }
}

/// Reusable visited table for orbit walks; one per worker.
#[derive(Clone, Debug)]
pub struct OrbitScratch {
    stamp: Vec<u32>,
    index: Vec<u32>,
    generation: u32,
}

impl OrbitScratch {
    pub fn new(p: u32) -> Self {
        OrbitScratch {
            stamp: vec![0; p as usize + 1],
            index: vec![0; p as usize + 1],
            generation: 0,
        }
    }

    fn reset(&mut self, p: u32) {
        if self.stamp.len() != p as usize + 1 {
            *self = OrbitScratch::new(p);
        }
        self.generation = self.generation.wrapping_add(1);
        if self.generation == 0 {
            self.stamp.fill(0);
            self.generation = 1;
        }
    }

    /// Walks the orbit of `start` until a repeat; returns (tail, m, cycle entry).
    pub fn walk(&mut self, map: &FpMap, field: &PrimeField, start: u32) -> (u32, u32, u32) {
        self.reset(map.p);
        let gen = self.generation;
        let mut z = start;
        let mut i = 0u32;
        loop {
            let slot = z as usize;
            if self.stamp[slot] == gen {
                let first = self.index[slot];
                return (first, i - first, z);
            }
            self.stamp[slot] = gen;
            self.index[slot] = i;
            z = map.step_code(field, z);
            i += 1;
        }
    }
}

pub fn orbit_data_with(map: &FpMap, field: &PrimeField, scratch: &mut OrbitScratch, start: FpPoint) -> OrbitData {
    let (tail, m, entry) = scratch.walk(map, field, start.code(map.p));
    let lambda = map.cycle_multiplier(field, entry, m);
    OrbitData {
        p: map.p,
        tail,
        m,
        lambda,
        r: (lambda != 0).then(|| field.mult_order(lambda)),
    }
}

pub fn orbit_data(map: &FpMap, start: FpPoint) -> OrbitData {
    let field = PrimeField::new(map.p).expect("FpMap holds an odd prime");
    let mut scratch = OrbitScratch::new(map.p);
    orbit_data_with(map, &field, &mut scratch, start)
}

/// The admissible global periods `{m}` or `{m, m·r}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PeriodSet {
    vals: [u64; 2],
    len: u8,
}

impl PeriodSet {
    pub fn single(m: u64) -> Self {
        PeriodSet { vals: [m, m], len: 1 }
    }

    /// `{a, b}` sorted; collapses when equal.
    pub fn pair(a: u64, b: u64) -> Self {
        match a.cmp(&b) {
            std::cmp::Ordering::Equal => PeriodSet::single(a),
            std::cmp::Ordering::Less => PeriodSet { vals: [a, b], len: 2 },
            std::cmp::Ordering::Greater => PeriodSet { vals: [b, a], len: 2 },
        }
    }

    pub fn from_slice(v: &[u64]) -> Option<Self> {
        match v {
            [a] => Some(PeriodSet::single(*a)),
            [a, b] => Some(PeriodSet::pair(*a, *b)),
            _ => None,
        }
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.vals[..self.len as usize]
    }

    pub fn contains(&self, n: u64) -> bool {
        self.as_slice().contains(&n)
    }

    pub fn intersect(&self, other: &PeriodSet) -> Option<PeriodSet> {
        let kept: Vec<u64> = self
            .as_slice()
            .iter()
            .copied()
            .filter(|&x| other.contains(x))
            .collect();
        PeriodSet::from_slice(&kept)
    }
}

impl fmt::Display for PeriodSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.as_slice().iter().map(|x| x.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

pub fn possible_periods(o: &OrbitData) -> PeriodSet {
    match o.r {
        None => PeriodSet::single(o.m as u64),
        Some(r) => PeriodSet::pair(o.m as u64, o.m as u64 * r as u64),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn row1_mod7() -> FpMap {
        FpMap::new(7, [2, 0, 0], [6, 4, 1]).unwrap()
    }

    #[test]
    fn orbit_examples() {
        let m = row1_mod7();
        let o = orbit_data(&m, FpPoint::Finite(3));
        assert_eq!((o.tail, o.m, o.lambda, o.r), (2, 1, 4, Some(3)));
        assert_eq!(possible_periods(&o).as_slice(), [1, 3]);
        let o = orbit_data(&m, FpPoint::Finite(0));
        assert_eq!((o.tail, o.m, o.lambda, o.r), (0, 1, 0, None));
        assert_eq!(possible_periods(&o).as_slice(), [1]);
    }

    #[test]
    fn order_examples() {
        assert_eq!(mult_order(1, 13).unwrap(), 1);
        assert_eq!(mult_order(4, 7).unwrap(), 3);
        for p in [3u32, 5, 7, 11, 739] {
            assert_eq!(mult_order(p - 1, p).unwrap(), 2);
        }
        // brute force over a few fields
        for p in [3u32, 5, 7, 11, 13, 31] {
            let f = PrimeField::new(p).unwrap();
            for x in 1..p {
                let mut r = 1;
                let mut y = x as u64;
                while y != 1 {
                    y = y * x as u64 % p as u64;
                    r += 1;
                }
                assert_eq!(f.mult_order(x), r);
            }
        }
    }

    #[test]
    fn period_set_collapse() {
        let o = OrbitData { p: 5, tail: 0, m: 2, lambda: 1, r: Some(1) };
        assert_eq!(possible_periods(&o).as_slice(), [2]);
        let a = PeriodSet::pair(1, 3);
        assert_eq!(a.intersect(&PeriodSet::single(3)), Some(PeriodSet::single(3)));
        assert_eq!(a.intersect(&PeriodSet::pair(2, 4)), None);
        assert_eq!(a.to_string(), "{1,3}");
    }

    #[test]
    fn critical_points_mod7() {
        let m = row1_mod7();
        let f = PrimeField::new(7).unwrap();
        let mut c = m.critical_points(&f).unwrap();
        c.sort();
        assert_eq!(c, [FpPoint::Finite(0), FpPoint::Finite(3)]);
    }

    #[test]
    fn rejects_degenerate_and_even() {
        assert!(FpMap::new(7, [1, 0, 0], [1, 0, 0]).is_err());
        assert!(matches!(FpMap::new(4, [1, 0, 0], [0, 0, 1]), Err(Error::NotOddPrime(4))));
    }

    fn arb_map() -> impl Strategy<Value = FpMap> {
        (prop::sample::select(vec![3u32, 5, 7, 11, 13, 17, 19, 23, 29, 31]), prop::array::uniform6(0u32..1000))
            .prop_filter_map("degree 2", |(p, c)| {
                FpMap::new(p, [c[0], c[1], c[2]], [c[3], c[4], c[5]]).ok()
            })
    }

    proptest! {
        #[test]
        fn orbit_is_genuinely_periodic(m in arb_map(), s in 0u32..1000) {
            let p = m.p();
            let field = PrimeField::new(p).unwrap();
            let start = s % (p + 1);
            let mut scratch = OrbitScratch::new(p);
            let (tail, len, entry) = scratch.walk(&m, &field, start);
            prop_assert!(tail + len <= p + 2);
            let mut z = entry;
            for _ in 0..len {
                z = m.step_code(&field, z);
            }
            prop_assert_eq!(z, entry);
            let mut z = start;
            for _ in 0..tail {
                z = m.step_code(&field, z);
            }
            prop_assert_eq!(z, entry);
        }

        #[test]
        fn cycle_multiplier_is_conjugation_invariant(m in arb_map(), s in 0u32..1000, h in prop::array::uniform4(0u32..1000)) {
            let p = m.p();
            let h4 = h.map(|x| x % p);
            let Ok(c) = m.conjugate(h4) else { return Ok(()); };
            let field = PrimeField::new(p).unwrap();
            let start = FpPoint::from_code(s % (p + 1), p);
            let o = orbit_data(&m, start);
            // image of the start point under h
            let [a, b, cc, d] = h4;
            let z = start.code(p) as u64;
            let (num, den) = if z == p as u64 {
                (a as u64, cc as u64)
            } else {
                ((a as u64 * z + b as u64) % p as u64, (cc as u64 * z + d as u64) % p as u64)
            };
            let hz = if den == 0 { p } else { (num * field.inv(den as u32) as u64 % p as u64) as u32 };
            let oc = orbit_data(&c, FpPoint::from_code(hz, p));
            prop_assert_eq!((o.tail, o.m, o.lambda), (oc.tail, oc.m, oc.lambda));
        }

        #[test]
        fn wronskian_splits_iff_resultant_is_square(m in arb_map()) {
            let field = PrimeField::new(m.p()).unwrap();
            let [a, _, _] = m.half_wronskian();
            let split = m.critical_points(&field).is_some();
            let res_square = field.sqrt(m.resultant()).is_some();
            prop_assert_eq!(split, a == 0 || res_square);
        }
    }
}
