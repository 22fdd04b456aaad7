//! Matrices over finite fields: characteristic polynomials, element orders,
//! Singer cycles, the coprime-power counting technique and the action of
//! `PSL(2, q)` on the projective line.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{factorize, gcd, is_prime, lcm_u128, prime_power};
use crate::permgroup::{GroupSpec, PermError, Permutation};

pub const MAX_FIELD_SIZE: u64 = 1 << 16;
pub const DEFAULT_ORDER_BOUND: u64 = 10_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatError {
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("field size {0} exceeds {MAX_FIELD_SIZE}")]
    FieldTooLarge(u64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("defining polynomial {0:?} is not monic of the stated degree")]
    NotMonic(Vec<u64>),
    #[error("defining polynomial {0:?} is not primitive")]
    NotPrimitive(Vec<u64>),
    #[error("q^n = {q}^{n} is too large for the Singer search")]
    SingerTooLarge { n: u32, q: u64 },
    #[error("matrix is singular")]
    Singular,
    #[error("element order exceeds the bound {0}")]
    OrderBound(u64),
    #[error("generators disagree in dimension or field")]
    Shape,
    #[error("no generators")]
    NoGenerators,
    #[error("entry {0} out of range for the field")]
    Entry(String),
    #[error("matrix file: {0}")]
    File(String),
    #[error(transparent)]
    Perm(#[from] PermError),
}

/// `GF(p^k)`. Elements are integer codes `Σ aᵢ pⁱ` of their coefficient
/// vectors in the power basis of a root of the defining polynomial.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteField {
    p: u64,
    k: u32,
    q: u64,
    poly: Vec<u64>,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        write!(f, "GF({}^{}; {:?})", self.p, self.k, self.poly)
    }
}

fn digits(mut code: u64, p: u64, k: u32) -> Vec<u64> {
    (0..k)
        .map(|_| {
            let d = code % p;
            code /= p;
            d
        })
        .collect()
}

fn undigits(ds: &[u64], p: u64) -> u64 {
    ds.iter().rev().fold(0, |acc, &d| acc * p + d)
}

impl FiniteField {
    /// The field of size `q`, defined by the primitive polynomial with the
    /// smallest code `Σ cᵢ pⁱ` over its non-leading coefficients.
    pub fn new(q: u64) -> Result<Self, MatError> {
        let (p, k) = prime_power(q).ok_or(MatError::NotPrimePower(q))?;
        if q > MAX_FIELD_SIZE {
            return Err(MatError::FieldTooLarge(q));
        }
        for code in 1..q {
            let mut poly = digits(code, p, k);
            poly.push(1);
            if let Ok(f) = Self::with_poly(p, &poly) {
                return Ok(f);
            }
        }
        unreachable!("every finite field has a primitive polynomial")
    }

    /// The field defined by `poly` (lowest coefficient first, monic).
    pub fn with_poly(p: u64, poly: &[u64]) -> Result<Self, MatError> {
        if !is_prime(p) {
            return Err(MatError::NotPrime(p));
        }
        if poly.len() < 2 || *poly.last().unwrap() != 1 || poly.iter().any(|&c| c >= p) {
            return Err(MatError::NotMonic(poly.to_vec()));
        }
        let k = (poly.len() - 1) as u32;
        let q = p.checked_pow(k).filter(|&q| q <= MAX_FIELD_SIZE).ok_or(MatError::FieldTooLarge(u64::MAX))?;
        // Multiply by the root repeatedly; primitive iff the first return
        // to 1 happens after exactly q - 1 steps.
        let mut exp = Vec::with_capacity(q as usize - 1);
        let mut log = vec![u32::MAX; q as usize];
        let mut cur = vec![0u64; k as usize];
        cur[0] = 1;
        for i in 0..q - 1 {
            let code = undigits(&cur, p);
            if log[code as usize] != u32::MAX || (i > 0 && code == 1) {
                return Err(MatError::NotPrimitive(poly.to_vec()));
            }
            log[code as usize] = i as u32;
            exp.push(code as u32);
            let top = cur[k as usize - 1];
            for j in (1..k as usize).rev() {
                cur[j] = (cur[j - 1] + (p - top) * poly[j]) % p;
            }
            cur[0] = ((p - top) * poly[0]) % p;
        }
        if undigits(&cur, p) != 1 {
            return Err(MatError::NotPrimitive(poly.to_vec()));
        }
        Ok(FiniteField { p, k, q, poly: poly.to_vec(), exp, log })
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn k(&self) -> u32 {
        self.k
    }
    pub fn q(&self) -> u64 {
        self.q
    }
    pub fn defining_poly(&self) -> &[u64] {
        &self.poly
    }

    /// The root of the defining polynomial, a generator of `GF(q)^*`.
    pub fn primitive(&self) -> u32 {
        self.exp[1 % self.exp.len()]
    }

    pub fn from_int(&self, a: i64) -> u32 {
        a.rem_euclid(self.p as i64) as u32
    }

    pub fn from_coeffs(&self, cs: &[i64]) -> Result<u32, MatError> {
        if cs.len() > self.k as usize {
            return Err(MatError::Entry(format!("{cs:?}")));
        }
        let ds: Vec<u64> = cs.iter().map(|&c| c.rem_euclid(self.p as i64) as u64).collect();
        Ok(undigits(&ds, self.p) as u32)
    }

    pub fn coeffs(&self, a: u32) -> Vec<u64> {
        digits(a as u64, self.p, self.k)
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.p == 2 {
            return a ^ b;
        }
        if self.k == 1 {
            return ((a as u64 + b as u64) % self.p) as u32;
        }
        let (mut a, mut b) = (a as u64, b as u64);
        let (mut out, mut place) = (0u64, 1u64);
        while a > 0 || b > 0 {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out as u32
    }

    pub fn neg(&self, a: u32) -> u32 {
        if self.p == 2 {
            return a;
        }
        let ds: Vec<u64> = self.coeffs(a).into_iter().map(|d| (self.p - d) % self.p).collect();
        undigits(&ds, self.p) as u32
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let n = self.q as usize - 1;
        let s = (self.log[a as usize] as usize + self.log[b as usize] as usize) % n;
        self.exp[s]
    }

    pub fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let n = self.q as usize - 1;
        Some(self.exp[(n - self.log[a as usize] as usize) % n])
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let n = self.q - 1;
        self.exp[((self.log[a as usize] as u64 * (e % n)) % n) as usize]
    }
}

// Polynomials over GF(q), lowest coefficient first, no trailing zeros.
mod poly {
    use super::FiniteField;

    pub type Poly = Vec<u32>;

    pub fn trim(mut a: Poly) -> Poly {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub fn deg(a: &Poly) -> Option<usize> {
        a.len().checked_sub(1)
    }

    pub fn sub(f: &FiniteField, a: &Poly, b: &Poly) -> Poly {
        let n = a.len().max(b.len());
        trim((0..n).map(|i| f.sub(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0))).collect())
    }

    pub fn mul(f: &FiniteField, a: &Poly, b: &Poly) -> Poly {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u32; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(x, y));
            }
        }
        trim(out)
    }

    pub fn divrem(f: &FiniteField, a: &Poly, b: &Poly) -> (Poly, Poly) {
        let db = deg(b).expect("division by zero polynomial");
        let lead_inv = f.inv(b[db]).unwrap();
        let mut rem = a.clone();
        let mut quo = vec![0u32; a.len().saturating_sub(db).max(1)];
        while let Some(dr) = deg(&rem) {
            if dr < db {
                break;
            }
            let c = f.mul(rem[dr], lead_inv);
            quo[dr - db] = c;
            for (i, &bi) in b.iter().enumerate() {
                rem[dr - db + i] = f.sub(rem[dr - db + i], f.mul(c, bi));
            }
            rem = trim(rem);
        }
        (trim(quo), rem)
    }

    pub fn monic(f: &FiniteField, a: &Poly) -> Poly {
        match a.last() {
            None => Vec::new(),
            Some(&l) => {
                let li = f.inv(l).unwrap();
                a.iter().map(|&c| f.mul(c, li)).collect()
            }
        }
    }

    pub fn gcd(f: &FiniteField, a: &Poly, b: &Poly) -> Poly {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_empty() {
            let r = divrem(f, &a, &b).1;
            a = b;
            b = r;
        }
        monic(f, &a)
    }

    pub fn powmod(f: &FiniteField, base: &Poly, mut e: u128, m: &Poly) -> Poly {
        let mut acc: Poly = divrem(f, &vec![1], m).1;
        let mut b = divrem(f, base, m).1;
        while e > 0 {
            if e & 1 == 1 {
                acc = divrem(f, &mul(f, &acc, &b), m).1;
            }
            b = divrem(f, &mul(f, &b, &b), m).1;
            e >>= 1;
        }
        acc
    }

    /// Degrees of the distinct irreducible factors of `a`.
    pub fn factor_degrees(f: &FiniteField, a: &Poly) -> Vec<usize> {
        let x: Poly = vec![0, 1];
        let mut rest = monic(f, a);
        let mut h = x.clone();
        let mut out = Vec::new();
        let mut i = 1;
        while deg(&rest).unwrap_or(0) >= 2 * i {
            h = powmod(f, &h, f.q() as u128, &rest);
            let g = gcd(f, &sub(f, &h, &x), &rest);
            if deg(&g).unwrap_or(0) > 0 {
                out.push(i);
                loop {
                    let c = gcd(f, &rest, &g);
                    if deg(&c).unwrap_or(0) == 0 {
                        break;
                    }
                    rest = divrem(f, &rest, &c).0;
                }
                h = divrem(f, &h, &rest).1;
            }
            i += 1;
        }
        if let Some(d) = deg(&rest).filter(|&d| d > 0) {
            out.push(d);
        }
        out.sort_unstable();
        out.dedup();
        out
    }
}

/// Square matrix over a finite field, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct MatrixOverFq {
    field: Arc<FiniteField>,
    dim: usize,
    entries: Vec<u32>,
}

impl fmt::Debug for MatrixOverFq {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        write!(f, "{:?} over {:?}", self.rows(), self.field)
    }
}

impl MatrixOverFq {
    pub fn new(field: Arc<FiniteField>, dim: usize, entries: Vec<u32>) -> Result<Self, MatError> {
        if entries.len() != dim * dim {
            return Err(MatError::Shape);
        }
        if let Some(e) = entries.iter().find(|&&e| e as u64 >= field.q()) {
            return Err(MatError::Entry(e.to_string()));
        }
        Ok(MatrixOverFq { field, dim, entries })
    }

    pub fn identity(field: Arc<FiniteField>, dim: usize) -> Self {
        let mut entries = vec![0; dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = 1;
        }
        MatrixOverFq { field, dim, entries }
    }

    /// Companion matrix of a monic polynomial (lowest coefficient first).
    pub fn companion(field: Arc<FiniteField>, poly: &[u32]) -> Self {
        let d = poly.len() - 1;
        let mut entries = vec![0; d * d];
        for i in 1..d {
            entries[i * d + i - 1] = 1;
        }
        for i in 0..d {
            entries[i * d + d - 1] = field.neg(poly[i]);
        }
        MatrixOverFq { field, dim: d, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn field(&self) -> &Arc<FiniteField> {
        &self.field
    }
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.entries[i * self.dim + j]
    }
    pub fn rows(&self) -> Vec<Vec<u32>> {
        self.entries.chunks(self.dim.max(1)).map(<[u32]>::to_vec).collect()
    }

    pub fn is_identity(&self) -> bool {
        (0..self.dim).all(|i| (0..self.dim).all(|j| self.get(i, j) == u32::from(i == j)))
    }

    pub fn same_shape(&self, other: &MatrixOverFq) -> bool {
        self.dim == other.dim && self.field == other.field
    }

    pub fn mul(&self, other: &MatrixOverFq) -> MatrixOverFq {
        let (n, f) = (self.dim, &*self.field);
        let mut entries = vec![0u32; n * n];
        for i in 0..n {
            for l in 0..n {
                let a = self.get(i, l);
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    let e = &mut entries[i * n + j];
                    *e = f.add(*e, f.mul(a, other.get(l, j)));
                }
            }
        }
        MatrixOverFq { field: self.field.clone(), dim: n, entries }
    }

    pub fn pow(&self, mut e: u128) -> MatrixOverFq {
        let mut acc = MatrixOverFq::identity(self.field.clone(), self.dim);
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b);
            }
            b = b.mul(&b);
            e >>= 1;
        }
        acc
    }

    pub fn inverse(&self) -> Option<MatrixOverFq> {
        let (n, f) = (self.dim, &*self.field);
        let mut a = self.rows();
        let mut inv = MatrixOverFq::identity(self.field.clone(), n).rows();
        for col in 0..n {
            let piv = (col..n).find(|&r| a[r][col] != 0)?;
            a.swap(col, piv);
            inv.swap(col, piv);
            let s = f.inv(a[col][col]).unwrap();
            for j in 0..n {
                a[col][j] = f.mul(a[col][j], s);
                inv[col][j] = f.mul(inv[col][j], s);
            }
            for r in 0..n {
                if r != col && a[r][col] != 0 {
                    let c = a[r][col];
                    for j in 0..n {
                        a[r][j] = f.sub(a[r][j], f.mul(c, a[col][j]));
                        inv[r][j] = f.sub(inv[r][j], f.mul(c, inv[col][j]));
                    }
                }
            }
        }
        Some(MatrixOverFq { field: self.field.clone(), dim: n, entries: inv.concat() })
    }
}

/// Characteristic polynomial `det(xI - M)`, lowest coefficient first.
/// Reduces to upper Hessenberg form by similarity, then expands.
pub fn char_poly(m: &MatrixOverFq) -> Vec<u32> {
    let (n, f) = (m.dim, &*m.field);
    let mut h = m.rows();
    for j in 0..n.saturating_sub(2) {
        let Some(piv) = (j + 1..n).find(|&i| h[i][j] != 0) else { continue };
        if piv != j + 1 {
            h.swap(piv, j + 1);
            for row in h.iter_mut() {
                row.swap(piv, j + 1);
            }
        }
        let inv = f.inv(h[j + 1][j]).unwrap();
        for i in j + 2..n {
            if h[i][j] == 0 {
                continue;
            }
            let u = f.mul(h[i][j], inv);
            let pivot = h[j + 1].clone();
            for (x, &y) in h[i].iter_mut().zip(&pivot) {
                *x = f.sub(*x, f.mul(u, y));
            }
            for row in h.iter_mut() {
                row[j + 1] = f.add(row[j + 1], f.mul(u, row[i]));
            }
        }
    }
    // p[k] = char poly of the leading k×k block.
    let mut p: Vec<Vec<u32>> = vec![vec![1]];
    for k in 1..=n {
        let mut next = poly::mul(f, &vec![f.neg(h[k - 1][k - 1]), 1], &p[k - 1]);
        let mut prod = 1u32;
        for i in 1..k {
            prod = f.mul(prod, h[k - i][k - i - 1]);
            let c = f.mul(prod, h[k - i - 1][k - 1]);
            if c != 0 {
                let term: Vec<u32> = p[k - i - 1].iter().map(|&x| f.mul(x, c)).collect();
                next = poly::sub(f, &next, &term);
            }
        }
        // keep the leading 1 even if everything else vanished
        next.resize(k + 1, 0);
        p.push(next);
    }
    p.pop().unwrap()
}

/// Multiplicative order of an invertible matrix, or an error past `bound`.
pub fn element_order(m: &MatrixOverFq, bound: u64) -> Result<u64, MatError> {
    let f = &*m.field;
    let cp = char_poly(m);
    if cp[0] == 0 {
        return Err(MatError::Singular);
    }
    let mut n: u128 = 1;
    let mut primes: BTreeSet<u64> = BTreeSet::new();
    for d in poly::factor_degrees(f, &cp) {
        let qd = f.q().checked_pow(d as u32).ok_or(MatError::OrderBound(bound))?;
        n = lcm_u128(n, (qd - 1) as u128).ok_or(MatError::OrderBound(bound))?;
        primes.extend(factorize(qd - 1).into_iter().map(|(r, _)| r));
    }
    let mut pt: u128 = 1;
    while pt < m.dim as u128 {
        pt *= f.p() as u128;
    }
    if pt > 1 {
        primes.insert(f.p());
    }
    let mut order = n.checked_mul(pt).ok_or(MatError::OrderBound(bound))?;
    for r in primes {
        let r = r as u128;
        while order % r == 0 && m.pow(order / r).is_identity() {
            order /= r;
        }
    }
    if order > bound as u128 {
        return Err(MatError::OrderBound(bound));
    }
    Ok(order as u64)
}

/// Lexicographically least monic primitive polynomial of degree `n` over
/// `GF(q)`, coefficients as field codes, lowest first.
pub fn primitive_poly(field: &FiniteField, n: u32) -> Result<Vec<u32>, MatError> {
    let q = field.q();
    let total = q.checked_pow(n).filter(|&t| t <= 1 << 32).ok_or(MatError::SingerTooLarge { n, q })?;
    let order = (total - 1) as u128;
    let cofactors: Vec<u128> = factorize(total - 1).into_iter().map(|(r, _)| order / r as u128).collect();
    let x: Vec<u32> = vec![0, 1];
    for code in 0..total {
        let mut cand: Vec<u32> = digits(code, q, n).into_iter().map(|c| c as u32).collect();
        if cand[0] == 0 {
            continue;
        }
        cand.push(1);
        let one = poly::powmod(field, &x, order, &cand);
        if one != vec![1] {
            continue;
        }
        if cofactors.iter().all(|&c| poly::powmod(field, &x, c, &cand) != vec![1]) {
            return Ok(cand);
        }
    }
    unreachable!("primitive polynomials exist in every degree")
}

/// Companion matrix of a primitive polynomial: an element of order `q^n - 1`
/// in `GL(n, q)`.
pub fn singer_element(n: u32, q: u64) -> Result<MatrixOverFq, MatError> {
    let field = Arc::new(FiniteField::new(q)?);
    let poly = primitive_poly(&field, n)?;
    Ok(MatrixOverFq::companion(field, &poly))
}

/// Number of distinct characteristic polynomials among `g^i` with `i`
/// coprime to the order of `g`.
pub fn coprime_power_charpoly_count(g: &MatrixOverFq, bound: u64) -> Result<usize, MatError> {
    let m = element_order(g, bound)?;
    let mut seen: BTreeSet<Vec<u32>> = BTreeSet::new();
    let mut power = MatrixOverFq::identity(g.field.clone(), g.dim);
    for i in 1..=m.max(1) {
        power = power.mul(g);
        if gcd(i % m.max(1), m) == 1 || m == 1 {
            seen.insert(char_poly(&power));
        }
    }
    Ok(seen.len())
}

/// Orbits of `i ↦ q·i` on the units modulo `m`.
pub fn unit_orbit_count(m: u64, q: u64) -> usize {
    if m <= 1 {
        return 1;
    }
    assert_eq!(gcd(m, q), 1, "q must be a unit mod m");
    let mut seen = vec![false; m as usize];
    let mut count = 0;
    for i in 1..m {
        if seen[i as usize] || gcd(i, m) != 1 {
            continue;
        }
        count += 1;
        let mut j = i;
        while !seen[j as usize] {
            seen[j as usize] = true;
            j = (j * (q % m)) % m;
        }
    }
    count
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassBound {
    pub count: u64,
    pub center_order: u64,
    pub bound: u64,
    pub f_gt_4: bool,
}

/// `⌊count / |Z|⌋` classes survive in the central quotient.
pub fn class_lower_bound(count: u64, center_order: u64) -> ClassBound {
    assert!(count >= 1 && center_order >= 1, "count and center order must be positive");
    let bound = count / center_order;
    ClassBound { count, center_order, bound, f_gt_4: bound >= 5 }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome {
    pub found: Option<MatrixOverFq>,
    pub attempts: usize,
    /// Orders of the sampled elements, 0 where the order exceeded the bound.
    pub transcript: Vec<u64>,
}

const PR_SLOTS: usize = 10;
const PR_WARMUP: usize = 50;

/// Product-replacement search for an element of exactly `target` order.
pub fn random_element_search(
    generators: &[MatrixOverFq],
    target: u64,
    attempts: usize,
    seed: u64,
    bound: u64,
) -> Result<SearchOutcome, MatError> {
    let first = generators.first().ok_or(MatError::NoGenerators)?;
    if generators.iter().any(|g| !g.same_shape(first)) {
        return Err(MatError::Shape);
    }
    if generators.iter().any(|g| char_poly(g)[0] == 0) {
        return Err(MatError::Singular);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut slots: Vec<MatrixOverFq> = generators.iter().cycle().take(PR_SLOTS.max(generators.len())).cloned().collect();
    let mut acc = MatrixOverFq::identity(first.field.clone(), first.dim);
    let step = |slots: &mut Vec<MatrixOverFq>, acc: &mut MatrixOverFq, rng: &mut ChaCha8Rng| {
        let i = rng.random_range(0..slots.len());
        let mut j = rng.random_range(0..slots.len() - 1);
        if j >= i {
            j += 1;
        }
        slots[i] = if rng.random_bool(0.5) { slots[i].mul(&slots[j]) } else { slots[j].mul(&slots[i]) };
        *acc = acc.mul(&slots[i]);
    };
    for _ in 0..PR_WARMUP {
        step(&mut slots, &mut acc, &mut rng);
    }
    let mut transcript = Vec::with_capacity(attempts);
    for a in 0..attempts {
        step(&mut slots, &mut acc, &mut rng);
        let o = element_order(&acc, bound).unwrap_or(0);
        transcript.push(o);
        if o == target {
            return Ok(SearchOutcome { found: Some(acc), attempts: a + 1, transcript });
        }
    }
    Ok(SearchOutcome { found: None, attempts, transcript })
}

/// Permutation generators of `PSL(2, q)` on the `q + 1` points of the
/// projective line; field elements are points `0..q`, infinity is `q`.
pub fn projective_line_action(q: u64) -> Result<GroupSpec, MatError> {
    let f = FiniteField::new(q)?;
    let inf = q as usize;
    let lambda2 = f.mul(f.primitive(), f.primitive());
    let map = |g: &dyn Fn(u32) -> Option<u32>| -> Vec<usize> {
        let mut img: Vec<usize> = (0..q as u32).map(|x| g(x).map_or(inf, |y| y as usize)).collect();
        img.push(inf);
        img
    };
    let translate = map(&|x| Some(f.add(x, 1)));
    let scale = map(&|x| Some(f.mul(lambda2, x)));
    let mut invert = map(&|x| f.inv(x).map(|y| f.neg(y)));
    invert[inf] = 0;
    let gens: Vec<Permutation> = [translate, scale, invert]
        .into_iter()
        .map(Permutation::from_images)
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .filter(|g| !g.is_identity())
        .collect();
    Ok(GroupSpec::new(inf + 1, gens)?)
}

/// Matrix entries in a generator file: a bare integer in the prime field or
/// a coefficient vector over it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EntryText {
    Int(i64),
    Coeffs(Vec<i64>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub p: u64,
    pub k: u32,
    pub defining_poly: Vec<u64>,
    pub dim: usize,
    pub generators: Vec<Vec<Vec<EntryText>>>,
}

impl MatrixFile {
    pub fn parse(text: &str) -> Result<Self, MatError> {
        serde_json::from_str(text).map_err(|e| MatError::File(e.to_string()))
    }

    pub fn load(&self) -> Result<Vec<MatrixOverFq>, MatError> {
        if self.defining_poly.len() != self.k as usize + 1 {
            return Err(MatError::NotMonic(self.defining_poly.clone()));
        }
        let field = Arc::new(FiniteField::with_poly(self.p, &self.defining_poly)?);
        if self.generators.is_empty() {
            return Err(MatError::NoGenerators);
        }
        self.generators
            .iter()
            .map(|rows| {
                if rows.len() != self.dim || rows.iter().any(|r| r.len() != self.dim) {
                    return Err(MatError::Shape);
                }
                let entries = rows
                    .iter()
                    .flatten()
                    .map(|e| match e {
                        EntryText::Int(a) => Ok(field.from_int(*a)),
                        EntryText::Coeffs(cs) => field.from_coeffs(cs),
                    })
                    .collect::<Result<Vec<u32>, MatError>>()?;
                MatrixOverFq::new(field.clone(), self.dim, entries)
            })
            .collect()
    }

    pub fn from_matrices(gens: &[MatrixOverFq]) -> Result<Self, MatError> {
        let first = gens.first().ok_or(MatError::NoGenerators)?;
        let f = &first.field;
        let generators = gens
            .iter()
            .map(|g| {
                g.rows()
                    .into_iter()
                    .map(|r| r.into_iter().map(|e| EntryText::Coeffs(f.coeffs(e).into_iter().map(|c| c as i64).collect())).collect())
                    .collect()
            })
            .collect();
        Ok(MatrixFile { p: f.p(), k: f.k(), defining_poly: f.defining_poly().to_vec(), dim: first.dim, generators })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classtheory::analyze;
    use crate::permgroup::{conjugacy_classes, group_order, ClassLimits};

    fn field(q: u64) -> Arc<FiniteField> {
        Arc::new(FiniteField::new(q).unwrap())
    }

    #[test]
    fn field_axioms_small() {
        for q in [2, 3, 4, 5, 8, 9, 25, 27] {
            let f = FiniteField::new(q).unwrap();
            for a in 0..q as u32 {
                assert_eq!(f.add(a, f.neg(a)), 0);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
                }
                for b in 0..q as u32 {
                    for c in [0, 1, f.primitive()] {
                        let lhs = f.mul(a, f.add(b, c));
                        assert_eq!(lhs, f.add(f.mul(a, b), f.mul(a, c)), "q={q}");
                    }
                }
            }
        }
    }

    #[test]
    fn least_primitive_polys() {
        assert_eq!(FiniteField::new(4).unwrap().defining_poly(), &[1, 1, 1]);
        assert_eq!(FiniteField::new(8).unwrap().defining_poly(), &[1, 1, 0, 1]);
        assert_eq!(FiniteField::new(9).unwrap().defining_poly(), &[2, 1, 1]);
        assert_eq!(FiniteField::new(7).unwrap().defining_poly(), &[2, 1]);
        assert!(FiniteField::with_poly(2, &[1, 0, 1]).is_err());
        assert!(FiniteField::new(12).is_err());
    }

    #[test]
    fn identity_char_poly() {
        let f = field(2);
        let cp = char_poly(&MatrixOverFq::identity(f, 3));
        assert_eq!(cp, vec![1, 1, 1, 1]);
    }

    #[test]
    fn companion_char_poly() {
        let f = field(5);
        let p = vec![3, 0, 4, 1, 1];
        assert_eq!(char_poly(&MatrixOverFq::companion(f, &p)), p);
    }

    #[test]
    fn singer_orders() {
        assert_eq!(element_order(&singer_element(2, 3).unwrap(), DEFAULT_ORDER_BOUND).unwrap(), 8);
        assert_eq!(element_order(&singer_element(4, 2).unwrap(), DEFAULT_ORDER_BOUND).unwrap(), 15);
        assert_eq!(element_order(&singer_element(3, 2).unwrap(), DEFAULT_ORDER_BOUND).unwrap(), 7);
        assert_eq!(element_order(&singer_element(3, 4).unwrap(), DEFAULT_ORDER_BOUND).unwrap(), 63);
        let f = field(3);
        assert_eq!(element_order(&MatrixOverFq::identity(f, 4), 10).unwrap(), 1);
    }

    #[test]
    fn order_bound_and_singular() {
        let s = singer_element(4, 3).unwrap();
        assert_eq!(element_order(&s, 79), Err(MatError::OrderBound(79)));
        let z = MatrixOverFq::new(field(3), 2, vec![1, 1, 1, 1]).unwrap();
        assert_eq!(element_order(&z, 100), Err(MatError::Singular));
    }

    #[test]
    fn unipotent_order() {
        // Jordan block of size 3 over GF(2) has order 4
        let j = MatrixOverFq::new(field(2), 3, vec![1, 1, 0, 0, 1, 1, 0, 0, 1]).unwrap();
        assert_eq!(element_order(&j, 100).unwrap(), 4);
    }

    #[test]
    fn singer_counts() {
        for (n, q, want) in [(2, 3, 2), (4, 2, 2), (3, 2, 2)] {
            let g = singer_element(n, q).unwrap();
            assert_eq!(coprime_power_charpoly_count(&g, DEFAULT_ORDER_BOUND).unwrap(), want, "({n},{q})");
        }
        let id = MatrixOverFq::identity(field(3), 2);
        assert_eq!(coprime_power_charpoly_count(&id, 10).unwrap(), 1);
        assert_eq!(unit_orbit_count(15, 2), 2);
        assert_eq!(unit_orbit_count(8, 3), 2);
    }

    #[test]
    fn class_bounds() {
        assert_eq!(class_lower_bound(16, 3).bound, 5);
        assert!(class_lower_bound(16, 3).f_gt_4);
        assert_eq!(class_lower_bound(6, 1).bound, 6);
        assert!(!class_lower_bound(4, 1).f_gt_4);
    }

    #[test]
    fn inverse_round_trip() {
        let s = singer_element(3, 5).unwrap();
        assert!(s.mul(&s.inverse().unwrap()).is_identity());
    }

    #[test]
    fn projective_orders() {
        for q in [4u64, 5, 7, 8, 9, 11, 13] {
            let spec = projective_line_action(q).unwrap();
            let want = q * (q * q - 1) / gcd(2, q - 1);
            assert_eq!(group_order(&spec), want as u128, "q={q}");
        }
        assert!(projective_line_action(6).is_err());
    }

    #[test]
    fn psl_2_5_like_a5() {
        let cs = conjugacy_classes(&projective_line_action(5).unwrap(), &ClassLimits::default()).unwrap();
        let mut orders: Vec<u64> = cs.classes.iter().map(|c| c.order).collect();
        orders.sort_unstable();
        assert_eq!(orders, vec![1, 2, 3, 5, 5]);
        let r = analyze(&cs).unwrap();
        assert_eq!((r.rank, r.f), (1, 2));
    }

    #[test]
    fn matrix_file_round_trip() {
        let g = singer_element(2, 9).unwrap();
        let file = MatrixFile::from_matrices(std::slice::from_ref(&g)).unwrap();
        let text = serde_json::to_string(&file).unwrap();
        let back = MatrixFile::parse(&text).unwrap().load().unwrap();
        assert_eq!(back, vec![g]);
    }
}
