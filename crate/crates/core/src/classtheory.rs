//! Class-side Galois analysis: Q-classes, R-classes, `f(G)`, the rank of
//! central units and the A-set counts, computed from power maps alone.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::permgroup::ClassStructure;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassTheoryError {
    #[error("identity violated: {0}")]
    Identity(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GaloisReport {
    #[serde(rename = "n_Q")]
    pub n_q: usize,
    #[serde(rename = "n_R")]
    pub n_r: usize,
    pub rank: usize,
    pub f: usize,
    pub families: Vec<Vec<usize>>,
    pub family_contributions: Vec<usize>,
    pub a1: usize,
    pub a2: usize,
    pub is_cut: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ASet {
    pub classes: Vec<usize>,
    pub a1: usize,
    pub a2: usize,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
    fn blocks(mut self) -> Vec<Vec<usize>> {
        let n = self.0.len();
        let mut by_root: Vec<Vec<usize>> = vec![Vec::new(); n];
        for x in 0..n {
            let r = self.find(x);
            by_root[r].push(x);
        }
        by_root.into_iter().filter(|b| !b.is_empty()).collect()
    }
}

fn sort_families(cs: &ClassStructure, mut fams: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    for f in &mut fams {
        f.sort_unstable();
    }
    fams.sort_by(|a, b| {
        let ka = (cs.classes[a[0]].order, &cs.classes[a[0]].size, a[0]);
        let kb = (cs.classes[b[0]].order, &cs.classes[b[0]].size, b[0]);
        ka.cmp(&kb)
    });
    fams
}

/// Rational classes: classes joined by the power maps `x ↦ x^k`.
pub fn q_classes(cs: &ClassStructure) -> Vec<Vec<usize>> {
    let mut uf = UnionFind::new(cs.num_classes());
    for (c, moved) in cs.fusion.iter().enumerate() {
        for &t in moved.values() {
            uf.union(c, t);
        }
    }
    sort_families(cs, uf.blocks())
}

/// Real classes: each class joined with the class of inverses.
pub fn r_classes(cs: &ClassStructure) -> Vec<Vec<usize>> {
    let mut uf = UnionFind::new(cs.num_classes());
    for (c, &inv) in cs.inverse_map.iter().enumerate() {
        uf.union(c, inv);
    }
    sort_families(cs, uf.blocks())
}

/// `r_Z(G) = n_R − n_Q`.
pub fn rank_central_units(cs: &ClassStructure) -> usize {
    r_classes(cs).len() - q_classes(cs).len()
}

/// `f(G)`: the largest Q-class, counted in conjugacy classes.
pub fn max_orbit_length(cs: &ClassStructure) -> usize {
    q_classes(cs).iter().map(Vec::len).max().unwrap_or(1)
}

fn r_count_within(cs: &ClassStructure, family: &[usize]) -> usize {
    family.iter().filter(|&&c| cs.inverse_map[c] >= c).count()
}

/// Classes with a generator of `⟨g⟩` conjugate neither to `g` nor `g⁻¹`,
/// with `a1` R-classes and `a2` Q-classes among them.
pub fn a_set_quantities(cs: &ClassStructure) -> Result<ASet, ClassTheoryError> {
    let mut classes = Vec::new();
    let mut a1 = 0;
    let mut a2 = 0;
    for fam in q_classes(cs) {
        let reals = r_count_within(cs, &fam);
        // The Q-class strictly contains each of its R-classes.
        if reals > 1 {
            classes.extend(fam.iter().copied());
            a1 += reals;
            a2 += 1;
        }
    }
    classes.sort_unstable();
    let rank = rank_central_units(cs);
    if rank + a2 != a1 {
        return Err(ClassTheoryError::Identity(format!("rank {rank} != a1 {a1} - a2 {a2}")));
    }
    if 2 * a2 > a1 {
        return Err(ClassTheoryError::Identity(format!("2·a2 = {} > a1 = {a1}", 2 * a2)));
    }
    Ok(ASet { classes, a1, a2 })
}

/// True iff every generator of every cyclic subgroup `⟨g⟩` is conjugate to
/// `g` or `g⁻¹`.
pub fn is_cut(cs: &ClassStructure) -> bool {
    q_classes(cs).iter().all(|fam| r_count_within(cs, fam) == 1)
}

/// Full report with every identity between the quantities checked.
pub fn analyze(cs: &ClassStructure) -> Result<GaloisReport, ClassTheoryError> {
    let families = q_classes(cs);
    let n_q = families.len();
    let n_r = r_classes(cs).len();
    let family_contributions: Vec<usize> = families.iter().map(|f| r_count_within(cs, f) - 1).collect();
    let rank = n_r - n_q;
    let f = families.iter().map(Vec::len).max().unwrap_or(1);
    let aset = a_set_quantities(cs)?;
    let cut = is_cut(cs);
    let contrib: usize = family_contributions.iter().sum();
    if contrib != rank {
        return Err(ClassTheoryError::Identity(format!("Σ family contributions {contrib} != rank {rank}")));
    }
    if 2 * rank + 2 < f {
        return Err(ClassTheoryError::Identity(format!("rank {rank} < f/2 - 1 with f = {f}")));
    }
    if cut != (rank == 0) || cut != aset.classes.is_empty() {
        return Err(ClassTheoryError::Identity(format!("is_cut = {cut} but rank = {rank}")));
    }
    Ok(GaloisReport {
        n_q,
        n_r,
        rank,
        f,
        families,
        family_contributions,
        a1: aset.a1,
        a2: aset.a2,
        is_cut: cut,
    })
}
