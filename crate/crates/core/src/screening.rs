//! Totient screening of the classical families: cyclic subgroup orders,
//! the totient lower bounds, exception sets with a closure certificate, and
//! a record-driven screen for cyclic tori.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::arith::{gcd, prime_power};
use crate::cyclotomic::RationalText;

pub use crate::arith::totient;

/// How far past the box the column tail may be scanned before giving up.
pub const COLUMN_TAIL_LIMIT: u64 = 200;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScreenError {
    #[error("unknown family {0:?}")]
    UnknownFamily(String),
    #[error("{family}: ({n}, {q}) outside domain: {reason}")]
    Domain { family: Family, n: u64, q: u64, reason: String },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Family {
    #[serde(rename = "PSL")]
    Psl,
    #[serde(rename = "PSp")]
    Psp,
    #[serde(rename = "PSU_odd")]
    PsuOdd,
    #[serde(rename = "PSU_div4")]
    PsuDiv4,
    #[serde(rename = "POmega_odd")]
    POmegaOdd,
    #[serde(rename = "POmegaMinus")]
    POmegaMinus,
    #[serde(rename = "POmegaPlus")]
    POmegaPlus,
}

impl Family {
    pub const ALL: [Family; 7] = [
        Family::Psl,
        Family::Psp,
        Family::PsuOdd,
        Family::POmegaMinus,
        Family::PsuDiv4,
        Family::POmegaOdd,
        Family::POmegaPlus,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Family::Psl => "PSL",
            Family::Psp => "PSp",
            Family::PsuOdd => "PSU_odd",
            Family::PsuDiv4 => "PSU_div4",
            Family::POmegaOdd => "POmega_odd",
            Family::POmegaMinus => "POmegaMinus",
            Family::POmegaPlus => "POmegaPlus",
        }
    }

    /// Upper bound on `|φ(order)|` that still allows `f ≤ 4`.
    pub fn threshold(self, n: u64) -> u64 {
        match self {
            Family::PsuOdd => 2 * n,
            Family::POmegaOdd => 8 * n,
            Family::POmegaPlus => 8 * (n - 2),
            _ => 4 * n,
        }
    }

    fn min_q(self) -> u64 {
        match self {
            Family::POmegaOdd => 3,
            _ => 2,
        }
    }

    fn min_n(self) -> u64 {
        match self {
            Family::Psl => 2,
            Family::Psp => 4,
            Family::PsuOdd => 6,
            Family::POmegaOdd => 7,
            _ => 8,
        }
    }

    // Distance between consecutive dimensions in the domain.
    fn step(self) -> u64 {
        match self {
            Family::Psl => 1,
            Family::PsuOdd | Family::PsuDiv4 => 4,
            _ => 2,
        }
    }

    pub fn check_n(self, n: u64) -> Result<(), String> {
        let min = self.min_n();
        if n < min {
            return Err(format!("n must be at least {min}"));
        }
        let ok = match self {
            Family::Psl => true,
            Family::Psp | Family::POmegaMinus | Family::POmegaPlus => n.is_multiple_of(2),
            Family::PsuOdd => n % 4 == 2,
            Family::PsuDiv4 => n.is_multiple_of(4),
            Family::POmegaOdd => n % 2 == 1,
        };
        if ok {
            Ok(())
        } else {
            Err(match self {
                Family::PsuOdd => "n/2 must be odd".into(),
                Family::PsuDiv4 => "n must be divisible by 4".into(),
                Family::POmegaOdd => "n must be odd".into(),
                _ => "n must be even".into(),
            })
        }
    }

    pub fn check(self, n: u64, q: u64) -> Result<(), ScreenError> {
        let fail = |reason: String| ScreenError::Domain { family: self, n, q, reason };
        self.check_n(n).map_err(fail)?;
        if prime_power(q).is_none() {
            return Err(fail("q must be a prime power".into()));
        }
        if self == Family::POmegaOdd && q.is_multiple_of(2) {
            return Err(fail("q must be odd".into()));
        }
        Ok(())
    }

    /// Small parameters excluded from the family, with the reason.
    pub fn filter(self, n: u64, q: u64) -> Option<&'static str> {
        match (self, n, q) {
            (Family::Psl, 2, 2) | (Family::Psl, 2, 3) => Some("not simple"),
            (Family::Psl, 2, 4) | (Family::Psl, 2, 5) => Some("isomorphic to A5"),
            (Family::Psl, 2, 9) => Some("isomorphic to A6"),
            (Family::Psl, 4, 2) => Some("isomorphic to A8"),
            (Family::Psp, 4, 2) => Some("not simple"),
            (Family::PsuOdd, 6, 2) => Some("not simple"),
            _ => None,
        }
    }

    // Exponent e and divisor bound c with `order >= q^e / c` on the domain.
    fn lower_bound_shape(self, n: u64) -> (u32, u64) {
        match self {
            Family::Psl => ((n - 1) as u32, n),
            Family::Psp | Family::POmegaMinus => ((n / 2) as u32, 2),
            Family::PsuOdd => ((n / 2 - 2) as u32, n / 2),
            Family::PsuDiv4 => ((n / 2 - 1) as u32, n / 2),
            Family::POmegaOdd => (((n - 1) / 2) as u32, 2),
            Family::POmegaPlus => (((n - 2) / 2) as u32, 2),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Family {
    type Err = ScreenError;
    fn from_str(s: &str) -> Result<Self, ScreenError> {
        let key: String = s.chars().filter(|c| c.is_ascii_alphanumeric()).collect::<String>().to_ascii_lowercase();
        Ok(match key.as_str() {
            "psl" => Family::Psl,
            "psp" => Family::Psp,
            "psuodd" => Family::PsuOdd,
            "psudiv4" => Family::PsuDiv4,
            "pomegaodd" => Family::POmegaOdd,
            "pomegaminus" => Family::POmegaMinus,
            "pomegaplus" => Family::POmegaPlus,
            _ => return Err(ScreenError::UnknownFamily(s.to_string())),
        })
    }
}

/// Order of the cyclic subgroup used for the family, and the divisor `d`.
pub fn singer_order(family: Family, n: u64, q: u64) -> Result<(BigUint, u64), ScreenError> {
    family.check(n, q)?;
    let qb = BigUint::from(q);
    let one = BigUint::one();
    let (num, d) = match family {
        Family::Psl => {
            let d = gcd(n, q - 1);
            ((qb.pow(n as u32) - &one) / BigUint::from(q - 1), d)
        }
        Family::Psp => (qb.pow((n / 2) as u32) + &one, gcd(2, q - 1)),
        Family::PsuOdd => {
            let d = gcd(n / 2, q + 1);
            ((qb.pow((n / 2) as u32) + &one) / BigUint::from(q + 1), d)
        }
        Family::POmegaMinus => (qb.pow((n / 2) as u32) + &one, gcd(2, q + 1)),
        Family::PsuDiv4 => (qb.pow((n / 2 - 1) as u32) + &one, gcd(n / 2, q + 1)),
        Family::POmegaOdd => (qb.pow(((n - 1) / 2) as u32) + &one, 2),
        Family::POmegaPlus => (qb.pow(((n - 2) / 2) as u32) + &one, gcd(2, q + 1)),
    };
    debug_assert!((&num % BigUint::from(d)) == BigUint::from(0u8));
    Ok((num / BigUint::from(d), d))
}

fn rational_text<S: Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    RationalText(r).serialize(s)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LemmaBounds {
    pub phi: u64,
    pub f_lb: u64,
    #[serde(serialize_with = "rational_text")]
    pub r_lb: BigRational,
    pub f_gt_4: bool,
}

/// Bounds on `f` and the rank from a cyclic subgroup of order `m` whose
/// normalizer index is at most `nbound`.
pub fn lemma_bounds(m: u64, nbound: u64) -> LemmaBounds {
    assert!(m >= 1 && nbound >= 1, "lemma_bounds needs m, nbound >= 1");
    let phi = totient(m);
    let r_lb = BigRational::new(phi.into(), (2 * nbound).into()) - BigRational::one();
    LemmaBounds { phi, f_lb: phi.div_ceil(nbound), r_lb, f_gt_4: phi > 4 * nbound }
}

/// `φ(m) > t`, factoring `m` only when `m ≤ 4t²` (otherwise `φ(m) ≥ √m/2 > t`).
/// Returns the totient when it was computed.
fn exceeds(m: &BigUint, t: u64) -> (bool, Option<u64>) {
    let cutoff = BigUint::from(4u64) * BigUint::from(t) * BigUint::from(t);
    if *m > cutoff {
        return (true, None);
    }
    let phi = totient(m.to_u64().expect("order below 4t^2 fits u64"));
    (phi > t, Some(phi))
}

// `q^e > 4 t^2 c` certifies every order in the row at or beyond `q`.
fn clears(q: u64, e: u32, t: u64, c: u64) -> bool {
    BigUint::from(q).pow(e) > BigUint::from(4 * t * t) * BigUint::from(c)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScreenRow {
    pub n: u64,
    pub q: u64,
    #[serde(with = "crate::bigserde")]
    pub order: BigUint,
    pub d: u64,
    /// `None` when the order alone certifies `φ > threshold`.
    pub phi: Option<u64>,
    pub threshold: u64,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Excluded,
    Exception,
    Filtered(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RowTail {
    pub n: u64,
    /// Prime powers `q` past the box were checked up to (not including) this one.
    pub q_cut: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub certified: bool,
    pub row_tails: Vec<RowTail>,
    /// Every `n` at or beyond this value is certified for all `q`.
    pub column_from: Option<u64>,
    /// Exceptions found outside the box; any entry voids certification.
    pub outside_box: Vec<(u64, u64)>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExceptionReport {
    pub family: Family,
    pub n_max: u64,
    pub q_max: u64,
    pub exceptions: Vec<(u64, u64)>,
    pub filtered: Vec<(u64, u64, String)>,
    pub rows: Vec<ScreenRow>,
    pub certificate: Certificate,
}

fn q_values(family: Family, lo: u64, hi: u64) -> impl Iterator<Item = u64> {
    (lo.max(family.min_q())..=hi).filter(move |&q| prime_power(q).is_some() && (family != Family::POmegaOdd || q % 2 == 1))
}

fn screen_cell(family: Family, n: u64, q: u64) -> ScreenRow {
    let (order, d) = singer_order(family, n, q).expect("cell inside domain");
    let threshold = family.threshold(n);
    let (ok, phi) = exceeds(&order, threshold);
    let verdict = match (family.filter(n, q), ok) {
        (Some(reason), _) => Verdict::Filtered(reason.into()),
        (None, true) => Verdict::Excluded,
        (None, false) => Verdict::Exception,
    };
    ScreenRow { n, q, order, d, phi, threshold, verdict }
}

// Scans prime powers from `q_lo` until the row is cleared; returns the cut
// and the exceptions met on the way.
fn scan_row(family: Family, n: u64, q_lo: u64) -> (u64, Vec<(u64, u64)>) {
    let (e, c) = family.lower_bound_shape(n);
    let t = family.threshold(n);
    let mut found = Vec::new();
    let mut q = q_lo.max(family.min_q());
    loop {
        if clears(q, e, t, c) {
            return (q, found);
        }
        if family.check(n, q).is_ok() {
            let row = screen_cell(family, n, q);
            if row.verdict == Verdict::Exception {
                found.push((n, q));
            }
        }
        q += 1;
    }
}

// At `n`, the base inequality holds at the smallest q and the next domain
// dimension keeps it. Since t(n) and c(n) are linear in n with nonnegative
// value on the domain, the ratio t(n+s)^2 c(n+s) / (t(n)^2 c(n)) only
// decreases with n, so the step condition propagates to all larger n.
fn column_certified(family: Family, n: u64) -> bool {
    let qmin = family.min_q();
    let s = family.step();
    let (e0, c0) = family.lower_bound_shape(n);
    let (e1, c1) = family.lower_bound_shape(n + s);
    let (t0, t1) = (family.threshold(n), family.threshold(n + s));
    if !clears(qmin, e0, t0, c0) {
        return false;
    }
    let lhs = BigUint::from(qmin).pow(e1 - e0) * BigUint::from(t0 * t0) * BigUint::from(c0);
    lhs >= BigUint::from(t1 * t1) * BigUint::from(c1)
}

/// Exceptions to `φ(order) > threshold` for the family inside the box
/// `n ≤ n_max`, `q ≤ q_max`, together with the closure certificate.
pub fn exception_set(family: Family, n_max: u64, q_max: u64) -> ExceptionReport {
    let mut rows = Vec::new();
    for n in (family.min_n()..=n_max).filter(|&n| family.check_n(n).is_ok()) {
        for q in q_values(family, 2, q_max) {
            rows.push(screen_cell(family, n, q));
        }
    }
    let exceptions: Vec<(u64, u64)> =
        rows.iter().filter(|r| r.verdict == Verdict::Exception).map(|r| (r.n, r.q)).collect();
    let filtered: Vec<(u64, u64, String)> = rows
        .iter()
        .filter_map(|r| match &r.verdict {
            Verdict::Filtered(why) if r.phi.is_some_and(|p| p <= r.threshold) => Some((r.n, r.q, why.clone())),
            _ => None,
        })
        .collect();

    let mut row_tails = Vec::new();
    let mut outside = Vec::new();
    for n in (family.min_n()..=n_max).filter(|&n| family.check_n(n).is_ok()) {
        let (q_cut, found) = scan_row(family, n, q_max + 1);
        row_tails.push(RowTail { n, q_cut });
        outside.extend(found);
    }
    let mut column_from = None;
    let mut n = n_max + 1;
    while n <= n_max + COLUMN_TAIL_LIMIT {
        if family.check_n(n).is_ok() {
            if column_certified(family, n) {
                column_from = Some(n);
                break;
            }
            let (q_cut, found) = scan_row(family, n, 2);
            row_tails.push(RowTail { n, q_cut });
            outside.extend(found);
        }
        n += 1;
    }
    outside.retain(|&(n, q)| family.filter(n, q).is_none());
    let mut notes = Vec::new();
    if family == Family::POmegaPlus {
        notes.push("threshold taken as 8(n-2)".to_string());
    }
    if column_from.is_none() {
        notes.push(format!("column tail not reached by n = {}", n_max + COLUMN_TAIL_LIMIT));
    }
    let certified = column_from.is_some() && outside.is_empty();
    ExceptionReport {
        family,
        n_max,
        q_max,
        exceptions,
        filtered,
        rows,
        certificate: Certificate { certified, row_tails, column_from, outside_box: outside, notes },
    }
}

/// Torus order either as a number or as integer polynomial coefficients in
/// `q`, lowest degree first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TorusOrder {
    Value(u64),
    Poly(Vec<i64>),
}

impl TorusOrder {
    pub fn eval(&self, q: u64) -> Option<BigUint> {
        match self {
            TorusOrder::Value(v) => Some((*v).into()),
            TorusOrder::Poly(coeffs) => {
                let mut acc = num_bigint::BigInt::from(0);
                for &c in coeffs.iter().rev() {
                    acc = acc * q + c;
                }
                acc.to_biguint()
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorusRecord {
    pub group: String,
    pub torus_order: TorusOrder,
    pub index_bound: u64,
}

pub const MAX_INDEX_BOUND: u64 = 30;

/// Parses JSON lines; blank lines are skipped.
pub fn parse_torus_records(text: &str) -> Result<Vec<TorusRecord>, ScreenError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let rec: TorusRecord =
            serde_json::from_str(line).map_err(|e| ScreenError::Parse { line: i + 1, msg: e.to_string() })?;
        if rec.index_bound == 0 || rec.index_bound > MAX_INDEX_BOUND {
            return Err(ScreenError::Parse {
                line: i + 1,
                msg: format!("index_bound {} outside 1..={MAX_INDEX_BOUND}", rec.index_bound),
            });
        }
        out.push(rec);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TorusFlag {
    pub group: String,
    pub excluded: bool,
    /// Index of the first record certifying `f > 4`.
    pub witness: Option<usize>,
}

/// Flags each group for which some record has `φ(|T|) > 4·index`.
pub fn exceptional_screen(records: &[TorusRecord], q: u64) -> Vec<TorusFlag> {
    let mut by_group: BTreeMap<&str, Option<usize>> = BTreeMap::new();
    for (i, rec) in records.iter().enumerate() {
        let entry = by_group.entry(rec.group.as_str()).or_insert(None);
        if entry.is_some() {
            continue;
        }
        let hit = match rec.torus_order.eval(q) {
            Some(m) if m > BigUint::from(0u8) => exceeds(&m, 4 * rec.index_bound).0,
            _ => false,
        };
        if hit {
            *entry = Some(i);
        }
    }
    by_group
        .into_iter()
        .map(|(g, w)| TorusFlag { group: g.to_string(), excluded: w.is_some(), witness: w })
        .collect()
}
