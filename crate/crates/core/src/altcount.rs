//! Rank of central units of `A_n` by counting partitions, plus the
//! constructive lower bound obtained from an explicit injection.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{factorize, is_prime};

/// Largest `n` accepted by the partition enumerators.
pub const MAX_PARTITION_N: u64 = 400;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AltCountError {
    #[error("n = {n} exceeds the partition guard {MAX_PARTITION_N}")]
    Guard { n: u64 },
    #[error("n must be at least {min}, got {n}")]
    TooSmall { n: u64, min: u64 },
    #[error("p = {0} is not prime")]
    NotPrime(u64),
    #[error("2m + k^2 - 1 = {lhs} but n - p = {rhs}")]
    SizeMismatch { lhs: i64, rhs: i64 },
    #[error("k = {k} is not congruent to n = {n} mod 4")]
    Congruence { k: u64, n: u64 },
    #[error("p = {p} is not larger than n/2 = {n}/2")]
    PrimeTooSmall { p: u64, n: u64 },
    #[error("input has {got} parts, expected k - 1 = {expected}")]
    PartCount { got: usize, expected: usize },
    #[error("input parts sum to {got}, expected m = {expected}")]
    PartSum { got: u64, expected: u64 },
    #[error("input parts must be positive")]
    ZeroPart,
    #[error("k must be positive")]
    ZeroK,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionFlags {
    pub all_odd: bool,
    pub distinct: bool,
    pub k_congruent: bool,
    pub product_not_square: bool,
}

impl PartitionFlags {
    pub fn all(&self) -> bool {
        self.all_odd && self.distinct && self.k_congruent && self.product_not_square
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionRecord {
    pub parts: Vec<u64>,
    pub n: u64,
    pub k: usize,
    pub flags: PartitionFlags,
}

impl PartitionRecord {
    /// Builds a record from parts in any order; the parts are sorted
    /// decreasingly and the flags recomputed.
    pub fn from_parts(mut parts: Vec<u64>) -> Self {
        parts.sort_unstable_by(|a, b| b.cmp(a));
        let n: u64 = parts.iter().sum();
        let k = parts.len();
        let flags = PartitionFlags {
            all_odd: parts.iter().all(|p| p % 2 == 1),
            distinct: parts.windows(2).all(|w| w[0] > w[1]),
            k_congruent: (k as u64) % 4 == n % 4,
            product_not_square: !product_is_square(&parts),
        };
        PartitionRecord { parts, n, k, flags }
    }
}

/// Squareness of `∏ parts` from the parity of the summed prime exponents.
pub fn product_is_square(parts: &[u64]) -> bool {
    let mut odd: Vec<u64> = Vec::new();
    for &x in parts {
        for (p, e) in factorize(x) {
            if e % 2 == 1 {
                match odd.iter().position(|&q| q == p) {
                    Some(i) => {
                        odd.swap_remove(i);
                    }
                    None => odd.push(p),
                }
            }
        }
    }
    odd.is_empty()
}

/// Partitions of `n` into distinct odd parts, in decreasing lexicographic
/// order.
pub struct DistinctOddPartitions {
    n: u64,
    stack: Vec<u64>,
    started: bool,
    done: bool,
}

impl DistinctOddPartitions {
    // Greedily extends `stack` with parts below `below` summing to `rest`.
    // Returns false if no such completion exists.
    fn fill(&mut self, mut rest: u64, mut below: u64) -> bool {
        let base = self.stack.len();
        while rest > 0 {
            let mut part = (below.saturating_sub(1)).min(rest);
            if part.is_multiple_of(2) {
                part = part.saturating_sub(1);
            }
            loop {
                if part == 0 {
                    self.stack.truncate(base);
                    return false;
                }
                let after = rest - part;
                if completable(after, part) {
                    break;
                }
                part -= 2.min(part);
            }
            self.stack.push(part);
            rest -= part;
            below = part;
        }
        true
    }

    fn advance(&mut self) -> bool {
        while let Some(last) = self.stack.pop() {
            let rest: u64 = self.n - self.stack.iter().sum::<u64>();
            if self.fill(rest, last) {
                return true;
            }
        }
        false
    }
}

// Whether `rest` is a sum of distinct odd parts all below `below`.
fn completable(rest: u64, below: u64) -> bool {
    if rest == 0 {
        return true;
    }
    let top = if below.is_multiple_of(2) { below.saturating_sub(1) } else { below.saturating_sub(2) };
    if top == 0 {
        return false;
    }
    let count = top.div_ceil(2);
    // j distinct odd parts up to `top` reach every sum of parity j between
    // j^2 and j(top - j + 1).
    (1..=count).any(|j| rest % 2 == j % 2 && j * j <= rest && rest <= j * (top - j + 1))
}

impl Iterator for DistinctOddPartitions {
    type Item = PartitionRecord;

    fn next(&mut self) -> Option<PartitionRecord> {
        if self.done {
            return None;
        }
        let ok = if self.started {
            self.advance()
        } else {
            self.started = true;
            self.n == 0 || self.fill(self.n, self.n + 1)
        };
        if !ok {
            self.done = true;
            return None;
        }
        Some(PartitionRecord::from_parts(self.stack.clone()))
    }
}

pub fn enumerate_distinct_odd_partitions(n: u64) -> Result<DistinctOddPartitions, AltCountError> {
    if n > MAX_PARTITION_N {
        return Err(AltCountError::Guard { n });
    }
    Ok(DistinctOddPartitions { n, stack: Vec::new(), started: false, done: false })
}

/// `r_Z(A_n)`: partitions of `n` into distinct odd parts whose part count is
/// `≡ n mod 4` and whose part product is not a square.
pub fn frobenius_rank(n: u64) -> Result<u64, AltCountError> {
    if n == 0 {
        return Err(AltCountError::TooSmall { n, min: 1 });
    }
    Ok(enumerate_distinct_odd_partitions(n)?.filter(|r| r.flags.all()).count() as u64)
}

/// The injection from partitions of `m` into `k - 1` parts to the counted
/// partitions of `n = p + 2m + k^2 - 1`.
pub fn prop8_construct(n: u64, m: u64, k: u64, p: u64, pi: &[u64]) -> Result<PartitionRecord, AltCountError> {
    if k == 0 {
        return Err(AltCountError::ZeroK);
    }
    if !is_prime(p) {
        return Err(AltCountError::NotPrime(p));
    }
    let lhs = 2 * m as i64 + (k * k) as i64 - 1;
    let rhs = n as i64 - p as i64;
    if lhs != rhs {
        return Err(AltCountError::SizeMismatch { lhs, rhs });
    }
    if k % 4 != n % 4 {
        return Err(AltCountError::Congruence { k, n });
    }
    if 2 * p <= n {
        return Err(AltCountError::PrimeTooSmall { p, n });
    }
    if pi.len() as u64 != k - 1 {
        return Err(AltCountError::PartCount { got: pi.len(), expected: (k - 1) as usize });
    }
    if pi.contains(&0) {
        return Err(AltCountError::ZeroPart);
    }
    let sum: u64 = pi.iter().sum();
    if sum != m {
        return Err(AltCountError::PartSum { got: sum, expected: m });
    }
    let mut parts = pi.to_vec();
    parts.sort_unstable();
    let mut out: Vec<u64> = parts.iter().enumerate().map(|(i, x)| 2 * (x + i as u64 + 1) + 1).collect();
    out.push(p);
    let rec = PartitionRecord::from_parts(out);
    assert_eq!(rec.n, n);
    assert!(rec.flags.all(), "construction produced {:?}", rec.parts);
    Ok(rec)
}

/// Partitions of `m` into exactly `j` parts.
pub fn partitions_exact(m: u64, j: u64) -> u128 {
    let (m, j) = (m as usize, j as usize);
    if j > m {
        return u128::from(m == 0 && j == 0);
    }
    // table[a][b] = P(a, b) for a <= m, b <= j
    let mut table = vec![vec![0u128; j + 1]; m + 1];
    table[0][0] = 1;
    for a in 1..=m {
        for b in 1..=j.min(a) {
            table[a][b] = table[a - 1][b - 1] + table[a - b][b];
        }
    }
    table[m][j]
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prop8Bound {
    pub n: u64,
    pub p: u64,
    pub k: u64,
    pub m: i64,
    pub bound: u128,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagnostic: Option<String>,
}

/// Parameters `(p, k, m)` for `n`: `p` the least prime above `n/2`, `k ≡ n mod 4`
/// nearest to `√p/10` (ties go down), `m = (n - p - k^2 + 1)/2`.
pub fn prop8_parameters(n: u64) -> (u64, u64, i64) {
    let mut p = n / 2 + 1;
    while !is_prime(p) {
        p += 1;
    }
    let target = (p as f64).sqrt() / 10.0;
    let first = if n.is_multiple_of(4) { 4 } else { n % 4 };
    let mut k = first;
    while ((k + 4) as f64 - target).abs() < (k as f64 - target).abs() {
        k += 4;
    }
    let m = (n as i64 - p as i64 - (k * k) as i64 + 1) / 2;
    (p, k, m)
}

pub fn prop8_lower_bound(n: u64) -> Result<Prop8Bound, AltCountError> {
    if n < 26 {
        return Err(AltCountError::TooSmall { n, min: 26 });
    }
    let (p, k, m) = prop8_parameters(n);
    if m < k as i64 - 1 {
        return Ok(Prop8Bound {
            n,
            p,
            k,
            m,
            bound: 0,
            diagnostic: Some(format!("infeasible: m = {m} < k - 1 = {}", k - 1)),
        });
    }
    Ok(Prop8Bound { n, p, k, m, bound: partitions_exact(m as u64, k - 1), diagnostic: None })
}

/// Every partition of `m` into exactly `j` parts, parts decreasing.
pub fn partitions_into(m: u64, j: u64) -> Vec<Vec<u64>> {
    fn go(rest: u64, slots: u64, cap: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if slots == 0 {
            if rest == 0 {
                out.push(cur.clone());
            }
            return;
        }
        if rest < slots {
            return;
        }
        let hi = cap.min(rest - (slots - 1));
        for x in (1..=hi).rev() {
            if x * slots < rest {
                break;
            }
            cur.push(x);
            go(rest - x, slots - 1, x, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(m, j, m, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parts_of(n: u64) -> Vec<Vec<u64>> {
        enumerate_distinct_odd_partitions(n).unwrap().map(|r| r.parts).collect()
    }

    #[test]
    fn small_enumerations() {
        assert_eq!(parts_of(8), vec![vec![7, 1], vec![5, 3]]);
        assert_eq!(parts_of(1), vec![vec![1]]);
        assert!(parts_of(2).is_empty());
        assert_eq!(parts_of(9), vec![vec![9], vec![5, 3, 1]]);
    }

    #[test]
    fn known_ranks() {
        assert_eq!(frobenius_rank(5).unwrap(), 1);
        assert_eq!(frobenius_rank(7).unwrap(), 0);
        assert_eq!(frobenius_rank(10).unwrap(), 1);
        let r: Vec<u64> = (5..=13).map(|n| frobenius_rank(n).unwrap()).collect();
        assert_eq!(r, vec![1, 1, 0, 0, 0, 1, 1, 0, 1]);
    }

    #[test]
    fn guard() {
        assert!(matches!(enumerate_distinct_odd_partitions(401), Err(AltCountError::Guard { .. })));
        assert!(frobenius_rank(0).is_err());
    }

    #[test]
    fn square_test() {
        assert!(product_is_square(&[9, 1]));
        assert!(!product_is_square(&[7, 3]));
        assert!(product_is_square(&[15, 5, 3]));
        assert!(product_is_square(&[]));
    }

    #[test]
    fn construct_checks_preconditions() {
        // n = 26: p = 17, k = 2, m = 3, pi = (3)
        let r = prop8_construct(26, 3, 2, 17, &[3]).unwrap();
        assert_eq!(r.parts, vec![17, 9]);
        assert!(matches!(prop8_construct(26, 3, 2, 15, &[3]), Err(AltCountError::NotPrime(15))));
        assert!(matches!(prop8_construct(26, 3, 2, 17, &[2, 1]), Err(AltCountError::PartCount { .. })));
        assert!(matches!(prop8_construct(26, 3, 2, 17, &[2]), Err(AltCountError::PartSum { .. })));
        assert!(matches!(prop8_construct(27, 3, 2, 17, &[3]), Err(AltCountError::SizeMismatch { .. })));
        assert!(matches!(prop8_construct(30, 3, 6, 11, &[1]), Err(AltCountError::SizeMismatch { .. })));
        assert!(matches!(prop8_construct(26, 5, 0, 17, &[]), Err(AltCountError::ZeroK)));
    }

    #[test]
    fn bound_at_26() {
        let b = prop8_lower_bound(26).unwrap();
        assert_eq!((b.p, b.k, b.m, b.bound), (17, 2, 3, 1));
        assert!(prop8_lower_bound(25).is_err());
    }

    #[test]
    fn exact_part_counts() {
        assert_eq!(partitions_exact(0, 0), 1);
        assert_eq!(partitions_exact(5, 0), 0);
        assert_eq!(partitions_exact(7, 3), 4);
        for m in 0..30 {
            for j in 0..=m {
                assert_eq!(partitions_exact(m, j), partitions_into(m, j).len() as u128, "m={m} j={j}");
            }
        }
    }
}
