//! Character tables: ingestion and exact validation, the rank of central
//! units from real and Galois-conjugate rows, Galois families of columns,
//! and cross-checks against class data via Brauer's permutation lemma.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{lcm, units};
use crate::classtheory::{q_classes, rank_central_units};
use crate::cyclotomic::{field_class, CyclotomicNumber, FieldClass};
use crate::permgroup::ClassStructure;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TableError {
    #[error("line {line}, column {column}: {msg}")]
    Syntax { line: usize, column: usize, msg: String },
    #[error("table is not square: {rows} rows, {cols} columns")]
    NotSquare { rows: usize, cols: usize },
    #[error("{what} has {got} entries, expected {expected}")]
    Length { what: &'static str, got: usize, expected: usize },
    #[error("empty table")]
    Empty,
    #[error("row {row}: degree {value} is not a positive integer")]
    Degree { row: usize, value: String },
    #[error("first column must be the identity class (size 1, order 1)")]
    IdentityColumn,
    #[error("class {class} has order 0")]
    ZeroOrder { class: usize },
    #[error("sum of squared degrees {got} differs from the group order {order}")]
    DegreeSum { got: String, order: u64 },
    #[error("class sizes sum to {got}, not the group order {order}")]
    ClassSum { got: u64, order: u64 },
    #[error("row {row}, class {class}: value {value} does not lie in the field of exponent {exponent}")]
    Conductor { row: usize, class: usize, value: String, exponent: u64 },
    #[error("rows {a} and {b} fail orthogonality: inner product {got}, expected {expected}")]
    Orthogonality { a: usize, b: usize, got: String, expected: u64 },
    #[error("degenerate table: columns {a} and {b} are identical")]
    Degenerate { a: usize, b: usize },
    #[error("applying σ_{k} to column {column} gives no column of the table")]
    MissingImage { k: u64, column: usize },
    #[error("identity violated: {0}")]
    Identity(String),
}

/// An ordinary character table with exact cyclotomic entries. Rows are
/// irreducible characters, columns are classes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterTable {
    pub name: String,
    pub order: u64,
    pub class_sizes: Vec<u64>,
    pub class_orders: Vec<u64>,
    pub irr: Vec<Vec<CyclotomicNumber>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharReport {
    pub name: String,
    #[serde(rename = "h_R")]
    pub h_r: usize,
    #[serde(rename = "n_G")]
    pub n_g: usize,
    pub rank_eq1: usize,
    pub f_table: usize,
    pub column_families: Vec<Vec<usize>>,
    pub b1: usize,
    pub b2: usize,
    pub cut_by_fields: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BSet {
    pub rows: Vec<usize>,
    pub b1: usize,
    pub b2: usize,
}

/// Parses and validates a table file.
pub fn parse_table(text: &str) -> Result<CharacterTable, TableError> {
    let table: CharacterTable = serde_json::from_str(text)
        .map_err(|e| TableError::Syntax { line: e.line(), column: e.column(), msg: e.to_string() })?;
    table.validate()?;
    Ok(table)
}

/// Pretty JSON with one row per line; canonical values make it round-trip.
pub fn serialize_table(table: &CharacterTable) -> String {
    let value = |v: &CyclotomicNumber| serde_json::to_string(v).expect("values serialize");
    let rows: Vec<String> = table
        .irr
        .iter()
        .map(|r| format!("    [{}]", r.iter().map(value).collect::<Vec<_>>().join(", ")))
        .collect();
    let list = |xs: &[u64]| xs.iter().map(u64::to_string).collect::<Vec<_>>().join(", ");
    format!(
        "{{\n  \"name\": {},\n  \"order\": {},\n  \"class_sizes\": [{}],\n  \"class_orders\": [{}],\n  \"irr\": [\n{}\n  ]\n}}\n",
        serde_json::to_string(&table.name).unwrap(),
        table.order,
        list(&table.class_sizes),
        list(&table.class_orders),
        rows.join(",\n")
    )
}

impl CharacterTable {
    pub fn num_classes(&self) -> usize {
        self.class_sizes.len()
    }

    /// `lcm` of the class orders: every value lies in `Q(ζ_e)`.
    pub fn exponent(&self) -> u64 {
        self.class_orders.iter().fold(1, |a, &b| lcm(a, b))
    }

    pub fn validate(&self) -> Result<(), TableError> {
        let rows = self.irr.len();
        if rows == 0 {
            return Err(TableError::Empty);
        }
        let cols = self.class_sizes.len();
        if self.class_orders.len() != cols {
            return Err(TableError::Length { what: "class_orders", got: self.class_orders.len(), expected: cols });
        }
        if let Some(bad) = self.irr.iter().find(|r| r.len() != cols) {
            return Err(TableError::Length { what: "irr row", got: bad.len(), expected: cols });
        }
        if rows != cols {
            return Err(TableError::NotSquare { rows, cols });
        }
        if self.class_sizes[0] != 1 || self.class_orders[0] != 1 {
            return Err(TableError::IdentityColumn);
        }
        if let Some(c) = self.class_orders.iter().position(|&o| o == 0) {
            return Err(TableError::ZeroOrder { class: c });
        }
        let mut deg_sq = BigInt::zero();
        for (i, row) in self.irr.iter().enumerate() {
            let d = row[0].as_rational().filter(|r| r.is_integer() && r.is_positive());
            let d = d.ok_or_else(|| TableError::Degree { row: i, value: row[0].to_string() })?;
            deg_sq += d.numer() * d.numer();
        }
        if deg_sq != BigInt::from(self.order) {
            return Err(TableError::DegreeSum { got: deg_sq.to_string(), order: self.order });
        }
        let size_sum: u64 = self.class_sizes.iter().sum();
        if size_sum != self.order {
            return Err(TableError::ClassSum { got: size_sum, order: self.order });
        }
        let e = self.exponent();
        // Q(ζ_e) = Q(ζ_2e) for odd e
        let field = if e % 2 == 1 { 2 * e } else { e };
        for (i, row) in self.irr.iter().enumerate() {
            for (c, v) in row.iter().enumerate() {
                if field % v.order() != 0 {
                    return Err(TableError::Conductor { row: i, class: c, value: v.to_string(), exponent: e });
                }
            }
        }
        let conj: Vec<Vec<CyclotomicNumber>> =
            self.irr.iter().map(|r| r.iter().map(CyclotomicNumber::conjugate).collect()).collect();
        let sizes: Vec<CyclotomicNumber> = self.class_sizes.iter().map(|&s| CyclotomicNumber::integer(s as i64)).collect();
        for a in 0..rows {
            let weighted: Vec<CyclotomicNumber> = self.irr[a].iter().zip(&sizes).map(|(x, s)| x * s).collect();
            for (b, cb) in conj.iter().enumerate().skip(a) {
                let mut acc = CyclotomicNumber::zero();
                for (w, y) in weighted.iter().zip(cb) {
                    acc = &acc + &(w * y);
                }
                let expected = if a == b { self.order } else { 0 };
                if acc != CyclotomicNumber::integer(expected as i64) {
                    return Err(TableError::Orthogonality { a, b, got: acc.to_string(), expected });
                }
            }
        }
        self.column_index().map(|_| ())
    }

    fn column(&self, c: usize) -> Vec<CyclotomicNumber> {
        self.irr.iter().map(|r| r[c].clone()).collect()
    }

    fn column_index(&self) -> Result<HashMap<Vec<CyclotomicNumber>, usize>, TableError> {
        let mut index = HashMap::new();
        for c in 0..self.num_classes() {
            if let Some(a) = index.insert(self.column(c), c) {
                return Err(TableError::Degenerate { a, b: c });
            }
        }
        Ok(index)
    }

    fn galois_row(&self, row: usize, k: u64) -> Vec<CyclotomicNumber> {
        self.irr[row].iter().map(|v| v.galois_unchecked(k)).collect()
    }

    /// Image of each column under `σ_k`; `k` must be a unit mod the exponent.
    pub fn column_permutation(&self, k: u64) -> Result<Vec<usize>, TableError> {
        let index = self.column_index()?;
        (0..self.num_classes())
            .map(|c| {
                let img: Vec<CyclotomicNumber> = self.column(c).iter().map(|v| v.galois_unchecked(k)).collect();
                index.get(&img).copied().ok_or(TableError::MissingImage { k, column: c })
            })
            .collect()
    }

    /// Rows fixed by complex conjugation.
    pub fn real_rows(&self) -> Vec<usize> {
        (0..self.irr.len())
            .filter(|&r| self.irr[r].iter().all(CyclotomicNumber::is_real))
            .collect()
    }

    /// Galois orbits of rows via the lexicographically least image.
    pub fn row_orbits(&self) -> Vec<Vec<usize>> {
        let ks = units(self.exponent());
        let mut by_rep: HashMap<Vec<CyclotomicNumber>, Vec<usize>> = HashMap::new();
        for r in 0..self.irr.len() {
            let rep = ks.iter().map(|&k| self.galois_row(r, k)).min().unwrap();
            by_rep.entry(rep).or_default().push(r);
        }
        let mut orbits: Vec<Vec<usize>> = by_rep.into_values().collect();
        orbits.sort();
        orbits
    }

    /// Column families: columns joined when some `σ_k` maps one to the other.
    pub fn column_families(&self) -> Result<Vec<Vec<usize>>, TableError> {
        let n = self.num_classes();
        let mut family = vec![usize::MAX; n];
        let perms: Vec<Vec<usize>> =
            units(self.exponent()).into_iter().map(|k| self.column_permutation(k)).collect::<Result<_, _>>()?;
        let mut out = Vec::new();
        for c in 0..n {
            if family[c] != usize::MAX {
                continue;
            }
            let members: BTreeSet<usize> = perms.iter().map(|p| p[c]).collect();
            for &m in &members {
                family[m] = out.len();
            }
            out.push(members.into_iter().collect::<Vec<_>>());
        }
        Ok(out)
    }

    fn fields(&self) -> Vec<FieldClass> {
        self.irr.iter().map(|r| field_class(r).expect("rows are nonempty")).collect()
    }
}

/// `h_R + (|Irr| - h_R)/2 - n_G`.
pub fn rank_of_central_units(table: &CharacterTable) -> usize {
    let h_r = table.real_rows().len();
    let rows = table.irr.len();
    h_r + (rows - h_r) / 2 - table.row_orbits().len()
}

/// `f` from the table: the largest Galois family of columns.
pub fn max_galois_orbit_length(table: &CharacterTable) -> Result<usize, TableError> {
    Ok(table.column_families()?.iter().map(Vec::len).max().unwrap_or(1))
}

/// Rows whose character field is neither `Q` nor imaginary quadratic, with
/// their conjugation orbits `b1` and Galois orbits `b2`.
pub fn b_set_quantities(table: &CharacterTable) -> Result<BSet, TableError> {
    let fields = table.fields();
    let in_b = |r: usize| !matches!(fields[r], FieldClass::Rational | FieldClass::ImaginaryQuadratic);
    let rows: Vec<usize> = (0..table.irr.len()).filter(|&r| in_b(r)).collect();
    let real = table.real_rows();
    let real_in_b = rows.iter().filter(|r| real.contains(r)).count();
    let b1 = real_in_b + (rows.len() - real_in_b) / 2;
    let b2 = table.row_orbits().iter().filter(|o| in_b(o[0])).count();
    let rank = rank_of_central_units(table);
    if b1 < b2 || rank != b1 - b2 {
        return Err(TableError::Identity(format!("rank {rank} != b1 {b1} - b2 {b2}")));
    }
    if 2 * b2 > b1 {
        return Err(TableError::Identity(format!("2·b2 = {} > b1 = {b1}", 2 * b2)));
    }
    Ok(BSet { rows, b1, b2 })
}

/// Every character field is `Q` or imaginary quadratic.
pub fn cut_by_character_fields(table: &CharacterTable) -> Result<bool, TableError> {
    let cut = table.fields().iter().all(|f| matches!(f, FieldClass::Rational | FieldClass::ImaginaryQuadratic));
    let rank = rank_of_central_units(table);
    if cut != (rank == 0) {
        return Err(TableError::Identity(format!("field criterion says cut = {cut} but rank = {rank}")));
    }
    Ok(cut)
}

pub fn analyze_table(table: &CharacterTable) -> Result<CharReport, TableError> {
    let families = table.column_families()?;
    let b = b_set_quantities(table)?;
    Ok(CharReport {
        name: table.name.clone(),
        h_r: table.real_rows().len(),
        n_g: table.row_orbits().len(),
        rank_eq1: rank_of_central_units(table),
        f_table: families.iter().map(Vec::len).max().unwrap_or(1),
        column_families: families,
        b1: b.b1,
        b2: b.b2,
        cut_by_fields: cut_by_character_fields(table)?,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixedCounts {
    pub k: u64,
    pub fixed_rows: usize,
    pub fixed_columns: usize,
    pub fixed_classes: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Crosscheck {
    pub passed: bool,
    pub per_k: Vec<FixedCounts>,
    pub row_orbits: usize,
    pub column_families: usize,
    pub q_classes: usize,
    pub table_rank: usize,
    pub class_rank: usize,
    pub discrepancies: Vec<String>,
}

/// Compares the table with class data, column `c` taken as class `c`.
pub fn brauer_crosscheck(table: &CharacterTable, cs: &ClassStructure) -> Result<Crosscheck, TableError> {
    let mut bad = Vec::new();
    if table.num_classes() != cs.num_classes() {
        bad.push(format!("table has {} columns, group has {} classes", table.num_classes(), cs.num_classes()));
        return Ok(Crosscheck {
            passed: false,
            per_k: Vec::new(),
            row_orbits: table.row_orbits().len(),
            column_families: table.column_families()?.len(),
            q_classes: q_classes(cs).len(),
            table_rank: rank_of_central_units(table),
            class_rank: rank_central_units(cs),
            discrepancies: bad,
        });
    }
    for (c, class) in cs.classes.iter().enumerate() {
        let size = class.size.to_u64();
        if size != Some(table.class_sizes[c]) || class.order != table.class_orders[c] {
            bad.push(format!(
                "column {c}: table size/order {}/{} vs class {} size/order {}/{}",
                table.class_sizes[c], table.class_orders[c], class.label, class.size, class.order
            ));
        }
    }
    let e = lcm(table.exponent(), cs.exponent);
    let mut per_k = Vec::new();
    for k in units(e) {
        let perm = table.column_permutation(k)?;
        let fixed_rows = (0..table.irr.len()).filter(|&r| table.galois_row(r, k) == table.irr[r]).count();
        let fixed_columns = perm.iter().enumerate().filter(|(c, &p)| *c == p).count();
        let powers: Vec<Option<usize>> = (0..cs.num_classes()).map(|c| cs.power_class(c, k as i64)).collect();
        let fixed_classes = powers.iter().enumerate().filter(|(c, p)| **p == Some(*c)).count();
        if fixed_rows != fixed_columns || fixed_rows != fixed_classes {
            bad.push(format!("k = {k}: fixed rows {fixed_rows}, fixed columns {fixed_columns}, fixed classes {fixed_classes}"));
        }
        let diffs: Vec<usize> = (0..perm.len()).filter(|&c| powers[c] != Some(perm[c])).collect();
        if !diffs.is_empty() {
            bad.push(format!("k = {k}: σ_k on columns disagrees with the power map at classes {diffs:?}"));
        }
        per_k.push(FixedCounts { k, fixed_rows, fixed_columns, fixed_classes });
    }
    let row_orbits = table.row_orbits().len();
    let mut fams = table.column_families()?;
    let mut qc = q_classes(cs);
    fams.sort();
    qc.sort();
    if row_orbits != fams.len() || fams.len() != qc.len() {
        bad.push(format!("orbit counts: rows {row_orbits}, column families {}, Q-classes {}", fams.len(), qc.len()));
    }
    if fams != qc {
        bad.push(format!("column families {fams:?} differ from Q-classes {qc:?}"));
    }
    let table_rank = rank_of_central_units(table);
    let class_rank = rank_central_units(cs);
    if table_rank != class_rank {
        bad.push(format!("rank from table {table_rank} vs rank from classes {class_rank}"));
    }
    let real_classes = (0..cs.num_classes()).filter(|&c| cs.inverse_map[c] == c).count();
    if table.real_rows().len() != real_classes {
        bad.push(format!("real rows {} vs real classes {real_classes}", table.real_rows().len()));
    }
    Ok(Crosscheck {
        passed: bad.is_empty(),
        per_k,
        row_orbits,
        column_families: fams.len(),
        q_classes: qc.len(),
        table_rank,
        class_rank,
        discrepancies: bad,
    })
}

/// Reorders columns (and their sizes and orders) so that new column `i` is
/// old column `perm[i]`.
pub fn permute_columns(table: &CharacterTable, perm: &[usize]) -> CharacterTable {
    CharacterTable {
        name: table.name.clone(),
        order: table.order,
        class_sizes: perm.iter().map(|&c| table.class_sizes[c]).collect(),
        class_orders: perm.iter().map(|&c| table.class_orders[c]).collect(),
        irr: table.irr.iter().map(|r| perm.iter().map(|&c| r[c].clone()).collect()).collect(),
    }
}
