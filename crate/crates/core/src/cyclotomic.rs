//! Exact arithmetic in cyclotomic fields `Q(ζ_N)` with the Galois action.
//!
//! A [`CyclotomicNumber`] is stored in canonical form: its order is the
//! conductor of the value (the least `N` with the value in `Q(ζ_N)`, never
//! `≡ 2 mod 4`), and its coefficients are the coordinates in the power basis
//! `1, ζ_N, …, ζ_N^{φ(N)-1}`. Two values are equal iff their canonical forms
//! are identical, so `Eq`, `Ord` and `Hash` are derived.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer, MapAccess, Visitor};
use serde::ser::{SerializeMap, Serializer};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{divisors, factorize, gcd, inv_mod, lcm, reduce, totient, units};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CyclotomicError {
    #[error("root-of-unity order must be positive")]
    ZeroOrder,
    #[error("Galois exponent {k} is not coprime to the order {order}")]
    NotCoprime { k: i64, order: u64 },
    #[error("field_class needs at least one value")]
    EmptySet,
    #[error("malformed rational {0:?}")]
    BadRational(String),
}

/// The field generated by a finite set of cyclotomic values, up to the
/// distinctions the central-unit rank cares about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FieldClass {
    Rational,
    ImaginaryQuadratic,
    RealNonRational,
    OtherComplex,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CyclotomicNumber {
    order: u64,
    coeffs: Vec<BigRational>,
}

/// Coefficients of the `n`-th cyclotomic polynomial, constant term first.
pub fn cyclotomic_polynomial(n: u64) -> Vec<i64> {
    // Φ_n = Π_{d | n} (x^d - 1)^{μ(n/d)}; multiply in the positive factors
    // first so every division below is exact.
    let mut numer = Vec::new();
    let mut denom = Vec::new();
    for d in divisors(n) {
        match mobius(n / d) {
            1 => numer.push(d as usize),
            -1 => denom.push(d as usize),
            _ => {}
        }
    }
    let mut poly = vec![0i64; numer.iter().sum::<usize>() + 1];
    poly[0] = 1;
    let mut deg = 0usize;
    for d in numer {
        // poly *= (x^d - 1)
        for i in (0..=deg + d).rev() {
            let shifted = if i >= d { poly[i - d] } else { 0 };
            poly[i] = shifted - poly[i];
        }
        deg += d;
    }
    for d in denom {
        // poly /= (x^d - 1): q_i = q_{i-d} - p_i
        let mut quot = vec![0i64; deg - d + 1];
        for i in 0..=deg - d {
            let prev = if i >= d { quot[i - d] } else { 0 };
            quot[i] = prev - poly[i];
        }
        poly[..=deg - d].copy_from_slice(&quot);
        for c in poly.iter_mut().skip(deg - d + 1) {
            *c = 0;
        }
        deg -= d;
    }
    poly.truncate(deg + 1);
    poly
}

fn mobius(n: u64) -> i32 {
    let mut sign = 1;
    for (_, e) in crate::arith::factorize(n) {
        if e > 1 {
            return 0;
        }
        sign = -sign;
    }
    sign
}

/// Reduce a dense exponent vector (length `n`, exponents mod `n`) modulo
/// `Φ_n`, returning power-basis coordinates of length `φ(n)`.
fn reduce_mod_cyclotomic(n: u64, mut dense: Vec<BigRational>) -> Vec<BigRational> {
    let phi = totient(n) as usize;
    let cyc = cyclotomic_polynomial(n);
    for e in (phi..dense.len()).rev() {
        if dense[e].is_zero() {
            continue;
        }
        let c = std::mem::replace(&mut dense[e], BigRational::zero());
        let base = e - phi;
        for (i, &a) in cyc.iter().take(phi).enumerate() {
            if a != 0 {
                dense[base + i] -= &c * BigRational::from_integer(BigInt::from(a));
            }
        }
    }
    dense.truncate(phi);
    dense
}

/// Rewrites a dense vector over `ζ_{2m}` (`m` odd) as one over `ζ_m`,
/// using `ζ_{2m} = -ζ_m^{(m+1)/2}`.
fn halve_dense(m: u64, dense: Vec<BigRational>) -> Vec<BigRational> {
    let half = m.div_ceil(2);
    let mut out = vec![BigRational::zero(); m as usize];
    for (j, c) in dense.into_iter().enumerate().filter(|(_, c)| !c.is_zero()) {
        let slot = &mut out[((j as u64 * half) % m) as usize];
        if j % 2 == 0 {
            *slot += c;
        } else {
            *slot -= c;
        }
    }
    out
}

/// Power-basis coordinates of the element of `Q(ζ_d)` given by `coords`,
/// re-expressed in `Q(ζ_n)` for a multiple `n` of `d`.
fn lift_coords(d: u64, coords: &[BigRational], n: u64) -> Vec<BigRational> {
    let step = n / d;
    let mut dense = vec![BigRational::zero(); n as usize];
    for (k, c) in coords.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
        dense[(k as u64 * step % n) as usize] += c;
    }
    reduce_mod_cyclotomic(n, dense)
}

/// If the value with coordinates `coords` in `Q(ζ_n)` lies in `Q(ζ_{n/p})`,
/// returns its canonical order and coordinates there. The candidate is the
/// relative trace divided by the degree, then checked by lifting back.
fn descend(n: u64, coords: &[BigRational], p: u64) -> Option<(u64, Vec<BigRational>)> {
    let m = n / p;
    let mut dense = vec![BigRational::zero(); m as usize];
    if m.is_multiple_of(p) {
        // Tr(ζ_n^j) is p·ζ_n^j when p | j and 0 otherwise.
        for (j, c) in coords.iter().enumerate().step_by(p as usize) {
            dense[j / p as usize] += c;
        }
    } else {
        // ζ_n = ζ_m^u ζ_p^w with u = p⁻¹ mod m; the trace kills the ζ_p part
        // to -1 unless p | j.
        let u = inv_mod(p, m).expect("p is prime to m");
        let scale = BigRational::from_integer(BigInt::from(p - 1));
        for (j, c) in coords.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            let slot = &mut dense[((j as u64 * u) % m) as usize];
            if (j as u64).is_multiple_of(p) {
                *slot += c;
            } else {
                *slot -= c / &scale;
            }
        }
    }
    let (d, dense) = if m % 4 == 2 { (m / 2, halve_dense(m / 2, dense)) } else { (m, dense) };
    let sub = reduce_mod_cyclotomic(d, dense);
    (lift_coords(d, &sub, n) == coords).then_some((d, sub))
}

impl CyclotomicNumber {
    pub fn zero() -> Self {
        Self::rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Self::rational(BigRational::one())
    }

    pub fn rational(r: BigRational) -> Self {
        CyclotomicNumber { order: 1, coeffs: vec![r] }
    }

    pub fn integer(i: i64) -> Self {
        Self::rational(BigRational::from_integer(BigInt::from(i)))
    }

    /// The primitive root of unity `ζ_n = exp(2πi/n)`.
    pub fn zeta(n: u64) -> Result<Self, CyclotomicError> {
        Self::make(n, [(1, BigRational::one())])
    }

    /// `Σ c_k ζ_n^k` with exponents taken mod `n`, canonicalized.
    pub fn make<I>(n: u64, terms: I) -> Result<Self, CyclotomicError>
    where
        I: IntoIterator<Item = (i64, BigRational)>,
    {
        if n == 0 {
            return Err(CyclotomicError::ZeroOrder);
        }
        let mut dense = vec![BigRational::zero(); n as usize];
        for (k, c) in terms {
            dense[reduce(k, n) as usize] += c;
        }
        let (n, dense) = if n % 4 == 2 { (n / 2, halve_dense(n / 2, dense)) } else { (n, dense) };
        Ok(Self::canonicalize(n, reduce_mod_cyclotomic(n, dense)))
    }

    /// Convenience constructor with integer coefficients.
    pub fn from_int_terms(n: u64, terms: &[(i64, i64)]) -> Result<Self, CyclotomicError> {
        Self::make(
            n,
            terms
                .iter()
                .map(|&(k, c)| (k, BigRational::from_integer(BigInt::from(c)))),
        )
    }

    /// Takes power-basis coordinates in `Q(ζ_n)` (`n ≢ 2 mod 4`) and
    /// reduces to the conductor one prime at a time.
    fn canonicalize(mut n: u64, mut coords: Vec<BigRational>) -> Self {
        'outer: loop {
            if coords.iter().skip(1).all(Zero::is_zero) {
                let r = coords.into_iter().next().unwrap_or_else(BigRational::zero);
                return Self::rational(r);
            }
            for (p, _) in factorize(n) {
                if let Some((d, sub)) = descend(n, &coords, p) {
                    n = d;
                    coords = sub;
                    continue 'outer;
                }
            }
            return CyclotomicNumber { order: n, coeffs: coords };
        }
    }

    /// Power-basis coordinates of `self` inside `Q(ζ_l)`; requires `order | l`.
    fn lift(&self, l: u64) -> Vec<BigRational> {
        debug_assert_eq!(l % self.order, 0);
        lift_coords(self.order, &self.coeffs, l)
    }

    /// Conductor of the value; 1 for rationals.
    pub fn order(&self) -> u64 {
        self.order
    }

    /// Nonzero power-basis terms `(k, c_k)` with `0 <= k < φ(order)`.
    pub fn terms(&self) -> impl Iterator<Item = (u64, &BigRational)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (k as u64, c))
    }

    pub fn is_zero(&self) -> bool {
        self.order == 1 && self.coeffs[0].is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.order == 1
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        (self.order == 1).then(|| &self.coeffs[0])
    }

    /// Apply `σ_k : ζ ↦ ζ^k`. `k` may be negative.
    pub fn galois_apply(&self, k: i64) -> Result<Self, CyclotomicError> {
        let n = self.order;
        let kr = reduce(k, n);
        if n > 1 && gcd(kr, n) != 1 {
            return Err(CyclotomicError::NotCoprime { k, order: n });
        }
        if n == 1 || kr == 1 {
            return Ok(self.clone());
        }
        let mut dense = vec![BigRational::zero(); n as usize];
        for (j, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                dense[(j as u64 * kr % n) as usize] += c;
            }
        }
        // Galois conjugates share the conductor.
        Ok(CyclotomicNumber { order: n, coeffs: reduce_mod_cyclotomic(n, dense) })
    }

    /// `σ_k` for a `k` coprime to some multiple `modulus` of the conductor.
    pub(crate) fn galois_unchecked(&self, k: u64) -> Self {
        self.galois_apply((k % self.order.max(1)) as i64)
            .expect("exponent coprime to a multiple of the conductor")
    }

    /// Complex conjugation, `σ_{-1}`.
    pub fn conjugate(&self) -> Self {
        self.galois_apply(-1).expect("-1 is always a unit")
    }

    pub fn is_real(&self) -> bool {
        self.conjugate() == *self
    }

    /// Floating-point image under `ζ_N ↦ exp(2πi/N)`; for display only.
    pub fn to_complex(&self) -> (f64, f64) {
        let n = self.order as f64;
        self.terms().fold((0.0, 0.0), |(re, im), (k, c)| {
            let c = c.to_f64().unwrap_or(f64::NAN);
            let t = std::f64::consts::TAU * k as f64 / n;
            (re + c * t.cos(), im + c * t.sin())
        })
    }

    fn binary(&self, rhs: &Self, f: impl Fn(Vec<BigRational>, Vec<BigRational>, u64) -> Vec<BigRational>) -> Self {
        let l = lcm(self.order, rhs.order);
        let a = self.lift(l);
        let b = rhs.lift(l);
        let out = f(a, b, l);
        Self::canonicalize(l, out)
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }
}

/// Classify the field generated by `values` over Q.
pub fn field_class(values: &[CyclotomicNumber]) -> Result<FieldClass, CyclotomicError> {
    if values.is_empty() {
        return Err(CyclotomicError::EmptySet);
    }
    let n = values.iter().fold(1, |acc, v| lcm(acc, v.order()));
    let group = units(n);
    let stabilizer = group
        .iter()
        .filter(|&&k| values.iter().all(|v| v.galois_unchecked(k) == *v))
        .count();
    let degree = group.len() / stabilizer;
    let real = values.iter().all(CyclotomicNumber::is_real);
    Ok(match (degree, real) {
        (1, _) => FieldClass::Rational,
        (2, false) => FieldClass::ImaginaryQuadratic,
        (_, true) => FieldClass::RealNonRational,
        _ => FieldClass::OtherComplex,
    })
}

impl<'a> Add<&'a CyclotomicNumber> for &'a CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn add(self, rhs: &CyclotomicNumber) -> CyclotomicNumber {
        self.binary(rhs, |mut a, b, _| {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
            a
        })
    }
}

impl<'a> Sub<&'a CyclotomicNumber> for &'a CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn sub(self, rhs: &CyclotomicNumber) -> CyclotomicNumber {
        self.binary(rhs, |mut a, b, _| {
            for (x, y) in a.iter_mut().zip(b) {
                *x -= y;
            }
            a
        })
    }
}

impl<'a> Mul<&'a CyclotomicNumber> for &'a CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn mul(self, rhs: &CyclotomicNumber) -> CyclotomicNumber {
        if self.is_rational() && rhs.is_rational() {
            return CyclotomicNumber::rational(&self.coeffs[0] * &rhs.coeffs[0]);
        }
        self.binary(rhs, |a, b, l| {
            let mut dense = vec![BigRational::zero(); l as usize];
            for (i, x) in a.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
                for (j, y) in b.iter().enumerate().filter(|(_, y)| !y.is_zero()) {
                    dense[(i + j) % l as usize] += x * y;
                }
            }
            reduce_mod_cyclotomic(l, dense)
        })
    }
}

impl Neg for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn neg(self) -> CyclotomicNumber {
        CyclotomicNumber {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl fmt::Display for CyclotomicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.as_rational() {
            return write!(f, "{r}");
        }
        let mut first = true;
        for (k, c) in self.terms() {
            let sign = if c.is_negative() { "-" } else { "+" };
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}*")?;
                    }
                    if k == 1 {
                        write!(f, "z{}", self.order)?;
                    } else {
                        write!(f, "z{}^{k}", self.order)?;
                    }
                }
            }
        }
        Ok(())
    }
}

pub(crate) fn parse_rational(s: &str) -> Result<BigRational, CyclotomicError> {
    let bad = || CyclotomicError::BadRational(s.to_string());
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(num, den))
}

/// Rationals are written as JSON integers when they fit in `i64`, otherwise as
/// `"a/b"` strings.
pub(crate) struct RationalText<'a>(pub &'a BigRational);

impl Serialize for RationalText<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0.is_integer() {
            if let Some(i) = self.0.numer().to_i64() {
                return s.serialize_i64(i);
            }
        }
        s.serialize_str(&self.0.to_string())
    }
}

struct RationalValue(BigRational);

impl<'de> Deserialize<'de> for RationalValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = RationalValue;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an integer or a rational string \"a/b\"")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Self::Value, E> {
                Ok(RationalValue(BigRational::from_integer(v.into())))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Self::Value, E> {
                Ok(RationalValue(BigRational::from_integer(v.into())))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<Self::Value, E> {
                parse_rational(v).map(RationalValue).map_err(E::custom)
            }
        }
        d.deserialize_any(V)
    }
}

impl Serialize for CyclotomicNumber {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if let Some(r) = self.as_rational() {
            return RationalText(r).serialize(s);
        }
        struct Coeffs<'a>(&'a CyclotomicNumber);
        impl Serialize for Coeffs<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                let terms: Vec<_> = self.0.terms().collect();
                let mut map = s.serialize_map(Some(terms.len()))?;
                for (k, c) in terms {
                    map.serialize_entry(&k.to_string(), &RationalText(c))?;
                }
                map.end()
            }
        }
        let mut map = s.serialize_map(Some(2))?;
        map.serialize_entry("n", &self.order)?;
        map.serialize_entry("coeffs", &Coeffs(self))?;
        map.end()
    }
}

impl<'de> Deserialize<'de> for CyclotomicNumber {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = CyclotomicNumber;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a rational or {\"n\": N, \"coeffs\": {\"k\": \"a/b\"}}")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Self::Value, E> {
                Ok(CyclotomicNumber::integer(v))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Self::Value, E> {
                Ok(CyclotomicNumber::rational(BigRational::from_integer(v.into())))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<Self::Value, E> {
                parse_rational(v).map(CyclotomicNumber::rational).map_err(E::custom)
            }
            fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> Result<Self::Value, A::Error> {
                let mut n: Option<u64> = None;
                let mut coeffs: Option<BTreeMap<String, RationalValue>> = None;
                while let Some(key) = map.next_key::<String>()? {
                    match key.as_str() {
                        "n" => n = Some(map.next_value()?),
                        "coeffs" => coeffs = Some(map.next_value()?),
                        other => return Err(de::Error::unknown_field(other, &["n", "coeffs"])),
                    }
                }
                let n = n.ok_or_else(|| de::Error::missing_field("n"))?;
                let coeffs = coeffs.ok_or_else(|| de::Error::missing_field("coeffs"))?;
                let mut terms = Vec::with_capacity(coeffs.len());
                for (k, c) in coeffs {
                    let k: i64 = k
                        .trim()
                        .parse()
                        .map_err(|_| de::Error::custom(format!("bad exponent {k:?}")))?;
                    terms.push((k, c.0));
                }
                CyclotomicNumber::make(n, terms).map_err(de::Error::custom)
            }
        }
        d.deserialize_any(V)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    fn z(n: u64, terms: &[(i64, i64)]) -> CyclotomicNumber {
        CyclotomicNumber::from_int_terms(n, terms).unwrap()
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
        // Φ_105 is the first with a coefficient of magnitude 2.
        assert!(cyclotomic_polynomial(105).contains(&-2));
        assert_eq!(cyclotomic_polynomial(105).len(), 49);
    }

    #[test]
    fn sum_of_cube_roots_is_zero() {
        assert!(z(3, &[(0, 1), (1, 1), (2, 1)]).is_zero());
    }

    #[test]
    fn zeta4_squared() {
        let i = CyclotomicNumber::zeta(4).unwrap();
        assert_eq!(&i * &i, CyclotomicNumber::integer(-1));
    }

    #[test]
    fn golden_ratio_minimal_polynomial() {
        let g = z(5, &[(1, 1), (4, 1)]);
        assert_eq!(g.order(), 5);
        let lhs = &(&(&g * &g) + &g) - &CyclotomicNumber::one();
        assert!(lhs.is_zero());
        assert_eq!(field_class(&[g]).unwrap(), FieldClass::RealNonRational);
    }

    #[test]
    fn zero_order_rejected() {
        assert_eq!(CyclotomicNumber::make(0, []), Err(CyclotomicError::ZeroOrder));
    }

    #[test]
    fn galois_on_zeta3() {
        let w = CyclotomicNumber::zeta(3).unwrap();
        assert_eq!(w.galois_apply(2).unwrap(), z(3, &[(0, -1), (1, -1)]));
        assert!(w.galois_apply(3).is_err());
        let r = CyclotomicNumber::rational(q(7, 3));
        assert_eq!(r.galois_apply(5).unwrap(), r);
    }

    #[test]
    fn conductor_reduction() {
        // -ζ_3 = ζ_6^5, and ζ_6 has conductor 3.
        let v = CyclotomicNumber::zeta(6).unwrap();
        assert_eq!(v.order(), 3);
        // ζ_8 + ζ_8^7 = √2 lives in Q(ζ_8); ζ_12 + ζ_12^11 = √3 in Q(ζ_12).
        assert_eq!(z(8, &[(1, 1), (7, 1)]).order(), 8);
        assert_eq!(z(12, &[(1, 1), (11, 1)]).order(), 12);
        // ζ_15^3 = ζ_5.
        assert_eq!(z(15, &[(3, 1)]), CyclotomicNumber::zeta(5).unwrap());
        // i·i·(-1) = 1 collapses to Q.
        assert_eq!(z(20, &[(5, 1)]), CyclotomicNumber::zeta(4).unwrap());
    }

    #[test]
    fn conjugation() {
        let g = z(5, &[(1, 1), (4, 1)]);
        assert_eq!(g.conjugate(), g);
        let i = CyclotomicNumber::zeta(4).unwrap();
        assert_eq!(i.conjugate(), -&i);
    }

    #[test]
    fn field_classes() {
        let rats = [CyclotomicNumber::integer(1), CyclotomicNumber::integer(-2), CyclotomicNumber::rational(q(3, 2))];
        assert_eq!(field_class(&rats).unwrap(), FieldClass::Rational);
        assert_eq!(field_class(&[CyclotomicNumber::zeta(3).unwrap()]).unwrap(), FieldClass::ImaginaryQuadratic);
        assert_eq!(field_class(&[CyclotomicNumber::zeta(5).unwrap()]).unwrap(), FieldClass::OtherComplex);
        assert_eq!(field_class(&[]), Err(CyclotomicError::EmptySet));
    }

    #[test]
    fn json_encoding() {
        let v: CyclotomicNumber = serde_json::from_str(r#"{"n": 5, "coeffs": {"1": 1, "4": "1"}}"#).unwrap();
        assert_eq!(v, z(5, &[(1, 1), (4, 1)]));
        // canonical form in the power basis: ζ^4 = -1 - ζ - ζ^2 - ζ^3
        assert_eq!(serde_json::to_string(&v).unwrap(), r#"{"n":5,"coeffs":{"0":-1,"2":-1,"3":-1}}"#);
        let r: CyclotomicNumber = serde_json::from_str(r#""-3/6""#).unwrap();
        assert_eq!(serde_json::to_string(&r).unwrap(), r#""-1/2""#);
        assert!(serde_json::from_str::<CyclotomicNumber>(r#""1/0""#).is_err());
        assert!(serde_json::from_str::<CyclotomicNumber>(r#"{"n": 0, "coeffs": {}}"#).is_err());
    }

    #[test]
    fn display() {
        assert_eq!(z(3, &[(1, 1)]).to_string(), "z3");
        assert_eq!(z(4, &[(0, 1), (1, -2)]).to_string(), "1 - 2*z4");
    }

    #[test]
    fn complex_embedding() {
        let (re, im) = z(5, &[(1, 1), (4, 1)]).to_complex();
        assert!((re - (5f64.sqrt() - 1.0) / 2.0).abs() < 1e-12);
        assert!(im.abs() < 1e-12);
    }
}
