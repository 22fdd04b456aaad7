//! Permutation groups and the class-side data every analysis consumes.
//!
//! [`conjugacy_classes`] builds a [`ClassStructure`] for a group given by
//! generators: a stabilizer chain gives the order, classes are closed under
//! conjugation by the generators, and power maps are read off by powering
//! class representatives. [`alternating_class_structure`] and
//! [`cyclic_class_structure`] produce the same data combinatorially.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{gcd, lcm, reduce, units};

pub const MAX_DEGREE: usize = 256;
pub const DEFAULT_MAX_ORDER: u128 = 200_000_000;
pub const DEFAULT_ENUMERATE_BELOW: u128 = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PermError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("not a permutation: {0}")]
    NotBijection(String),
    #[error("generator of degree {found} in a group of degree {expected}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("degree {0} exceeds the supported maximum of {MAX_DEGREE}")]
    DegreeTooLarge(usize),
    #[error("a group needs at least one generator")]
    NoGenerators,
    #[error("group order {order} exceeds the resource guard {bound}")]
    Guard { order: u128, bound: u128 },
    #[error("class search gave up after {attempts} samples: {covered} of {order} elements classified")]
    Incomplete { attempts: u64, covered: u128, order: u128 },
    #[error("alternating degree {0} outside 5..=40")]
    AltRange(usize),
    #[error("cyclic order must be positive")]
    CyclicZero,
}

/// A bijection of `{0, …, d-1}`; products apply the left factor first.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u8>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation { images: (0..degree).map(|i| i as u8).collect() }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self, PermError> {
        let d = images.len();
        if d > MAX_DEGREE {
            return Err(PermError::DegreeTooLarge(d));
        }
        let mut seen = vec![false; d];
        for &x in &images {
            if x >= d || seen[x] {
                return Err(PermError::NotBijection(format!("{images:?}")));
            }
            seen[x] = true;
        }
        Ok(Permutation { images: images.into_iter().map(|x| x as u8).collect() })
    }

    /// Build from disjoint cycles of 0-based points.
    pub fn from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Result<Self, PermError> {
        let mut images: Vec<usize> = (0..degree).collect();
        let mut touched = vec![false; degree];
        for cycle in cycles {
            for (i, &a) in cycle.iter().enumerate() {
                if a >= degree || touched[a] {
                    return Err(PermError::NotBijection(format!("{cycles:?}")));
                }
                touched[a] = true;
                images[a] = cycle[(i + 1) % cycle.len()];
            }
        }
        Self::from_images(images)
    }

    /// Parse 1-based disjoint-cycle notation such as `(1,2,3)(4,5)` or `()`.
    pub fn parse_cycles(text: &str, degree: usize) -> Result<Self, String> {
        let mut cycles = Vec::new();
        let mut rest = text.trim();
        while !rest.is_empty() {
            let body = rest
                .strip_prefix('(')
                .ok_or_else(|| format!("expected '(' in {text:?}"))?;
            let close = body.find(')').ok_or_else(|| format!("unclosed cycle in {text:?}"))?;
            let inner = body[..close].trim();
            if !inner.is_empty() {
                let mut cycle = Vec::new();
                for tok in inner.split(',') {
                    let p: usize = tok
                        .trim()
                        .parse()
                        .map_err(|_| format!("bad point {:?}", tok.trim()))?;
                    if p == 0 || p > degree {
                        return Err(format!("point {p} outside 1..={degree}"));
                    }
                    cycle.push(p - 1);
                }
                cycles.push(cycle);
            }
            rest = body[close + 1..].trim_start();
        }
        Self::from_cycles(degree, &cycles).map_err(|e| e.to_string())
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, point: usize) -> usize {
        self.images[point] as usize
    }

    pub fn images(&self) -> impl Iterator<Item = usize> + '_ {
        self.images.iter().map(|&x| x as usize)
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x as usize)
    }

    /// `self` then `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        Permutation { images: self.images.iter().map(|&x| other.images[x as usize]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u8; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u8;
        }
        Permutation { images: inv }
    }

    /// `h^{-1} · self · h`.
    pub fn conjugate_by(&self, h: &Permutation) -> Permutation {
        let mut out = vec![0u8; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            out[h.images[i] as usize] = h.images[x as usize];
        }
        Permutation { images: out }
    }

    /// Disjoint cycles of length at least 2, each starting at its least point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.apply(start);
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.apply(x);
            }
            if cycle.len() > 1 {
                out.push(cycle);
            }
        }
        out
    }

    /// Cycle lengths including fixed points, in decreasing order.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut lens: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        let moved: usize = lens.iter().sum();
        lens.extend(std::iter::repeat_n(1, self.degree() - moved));
        lens.sort_unstable_by(|a, b| b.cmp(a));
        lens
    }

    pub fn order(&self) -> u64 {
        self.cycles().iter().fold(1, |acc, c| lcm(acc, c.len() as u64))
    }

    pub fn is_even(&self) -> bool {
        self.cycles().iter().map(|c| c.len() - 1).sum::<usize>() % 2 == 0
    }

    pub fn pow(&self, k: i64) -> Permutation {
        let mut images = self.images.clone();
        for cycle in self.cycles() {
            let l = cycle.len() as u64;
            let shift = reduce(k, l) as usize;
            for (i, &a) in cycle.iter().enumerate() {
                images[a] = cycle[(i + shift) % cycle.len()] as u8;
            }
        }
        Permutation { images }
    }
}

impl fmt::Display for Permutation {
    /// 1-based cycle notation; the identity prints as `()`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            let pts: Vec<String> = c.iter().map(|p| (p + 1).to_string()).collect();
            write!(f, "({})", pts.join(","))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation{self}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupSpec {
    pub degree: usize,
    pub generators: Vec<Permutation>,
}

impl GroupSpec {
    pub fn new(degree: usize, generators: Vec<Permutation>) -> Result<Self, PermError> {
        if degree > MAX_DEGREE {
            return Err(PermError::DegreeTooLarge(degree));
        }
        if generators.is_empty() {
            return Err(PermError::NoGenerators);
        }
        for g in &generators {
            if g.degree() != degree {
                return Err(PermError::DegreeMismatch { expected: degree, found: g.degree() });
            }
        }
        Ok(GroupSpec { degree, generators })
    }

    /// Parse a generator file: `degree d`, then one permutation per line.
    /// Blank lines and lines starting with `#` are ignored.
    pub fn parse(text: &str) -> Result<Self, PermError> {
        let mut degree = None;
        let mut gens = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            match degree {
                None => {
                    let d = line
                        .strip_prefix("degree")
                        .map(str::trim)
                        .and_then(|s| s.parse::<usize>().ok())
                        .ok_or_else(|| PermError::Parse {
                            line: line_no,
                            msg: format!("expected \"degree d\", found {line:?}"),
                        })?;
                    if d == 0 || d > MAX_DEGREE {
                        return Err(PermError::Parse {
                            line: line_no,
                            msg: format!("degree must be in 1..={MAX_DEGREE}"),
                        });
                    }
                    degree = Some(d);
                }
                Some(d) => {
                    let g = Permutation::parse_cycles(line, d)
                        .map_err(|msg| PermError::Parse { line: line_no, msg })?;
                    gens.push(g);
                }
            }
        }
        let degree = degree.ok_or(PermError::Parse { line: 0, msg: "missing \"degree\" line".into() })?;
        Self::new(degree, gens)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("degree {}\n", self.degree);
        for g in &self.generators {
            out.push_str(&g.to_string());
            out.push('\n');
        }
        out
    }

    /// Standard generators of `A_n`: `(1,2,3)` with an `n`- or `(n-1)`-cycle.
    pub fn alternating(n: usize) -> Result<Self, PermError> {
        if n < 3 {
            return Self::new(n.max(1), vec![Permutation::identity(n.max(1))]);
        }
        let three = Permutation::from_cycles(n, &[vec![0, 1, 2]])?;
        let long = if n % 2 == 1 {
            Permutation::from_cycles(n, &[(0..n).collect()])?
        } else {
            Permutation::from_cycles(n, &[(1..n).collect()])?
        };
        Self::new(n, vec![three, long])
    }

    /// Cyclic group generated by an `m`-cycle.
    pub fn cyclic(m: usize) -> Result<Self, PermError> {
        if m == 0 {
            return Err(PermError::CyclicZero);
        }
        Self::new(m, vec![Permutation::from_cycles(m, &[(0..m).collect()])?])
    }

    pub fn symmetric(n: usize) -> Result<Self, PermError> {
        if n < 2 {
            return Self::new(n.max(1), vec![Permutation::identity(n.max(1))]);
        }
        Self::new(
            n,
            vec![
                Permutation::from_cycles(n, &[vec![0, 1]])?,
                Permutation::from_cycles(n, &[(0..n).collect()])?,
            ],
        )
    }
}

/// A base and strong generating set built by deterministic Schreier-Sims.
#[derive(Debug, Clone)]
pub struct StabChain {
    degree: usize,
    levels: Vec<Level>,
}

#[derive(Debug, Clone)]
struct Level {
    base: usize,
    gens: Vec<Permutation>,
    /// `transversal[b]` maps the base point to `b`.
    transversal: Vec<Option<Permutation>>,
    orbit: Vec<usize>,
    checked: HashSet<(usize, usize)>,
}

impl Level {
    fn new(degree: usize, base: usize) -> Self {
        let mut transversal = vec![None; degree];
        transversal[base] = Some(Permutation::identity(degree));
        Level { base, gens: Vec::new(), transversal, orbit: vec![base], checked: HashSet::new() }
    }

    fn add_gen(&mut self, g: Permutation) {
        self.gens.push(g);
        let new_idx = self.gens.len() - 1;
        let mut queue = Vec::new();
        for i in 0..self.orbit.len() {
            let b = self.orbit[i];
            self.extend_orbit(b, new_idx, &mut queue);
        }
        while let Some(b) = queue.pop() {
            for s in 0..self.gens.len() {
                self.extend_orbit(b, s, &mut queue);
            }
        }
    }

    fn extend_orbit(&mut self, b: usize, s: usize, queue: &mut Vec<usize>) {
        let c = self.gens[s].apply(b);
        if self.transversal[c].is_none() {
            let t = self.transversal[b].as_ref().unwrap().then(&self.gens[s]);
            self.transversal[c] = Some(t);
            self.orbit.push(c);
            queue.push(c);
        }
    }
}

impl StabChain {
    pub fn new(spec: &GroupSpec) -> Self {
        let mut chain = StabChain { degree: spec.degree, levels: Vec::new() };
        for g in &spec.generators {
            if g.is_identity() {
                continue;
            }
            let (h, j) = chain.sift(g.clone(), 0);
            if !h.is_identity() {
                chain.insert(j, h.clone());
                for l in 0..j {
                    chain.levels[l].add_gen(h.clone());
                }
                chain.complete(j);
            }
        }
        chain
    }

    /// Strip `g` through levels `from..`; returns the residue and the level at
    /// which stripping stopped.
    fn sift(&self, mut g: Permutation, from: usize) -> (Permutation, usize) {
        for (i, level) in self.levels.iter().enumerate().skip(from) {
            let b = g.apply(level.base);
            match &level.transversal[b] {
                Some(t) => g = g.then(&t.inverse()),
                None => return (g, i),
            }
        }
        let n = self.levels.len();
        (g, n)
    }

    /// Add `h` (which fixes the base points of levels `< j`) as a strong
    /// generator at level `j`, opening a new level if needed.
    fn insert(&mut self, j: usize, h: Permutation) {
        if j == self.levels.len() {
            let moved = (0..self.degree).find(|&x| h.apply(x) != x).expect("non-identity");
            self.levels.push(Level::new(self.degree, moved));
        }
        self.levels[j].add_gen(h);
    }

    /// Run Schreier-Sims from level `start` back up to level 0.
    fn complete(&mut self, start: usize) {
        let mut i = start as isize;
        'outer: while i >= 0 {
            let lvl = i as usize;
            loop {
                let mut pending = None;
                {
                    let level = &self.levels[lvl];
                    'search: for &b in &level.orbit {
                        for s in 0..level.gens.len() {
                            if level.checked.contains(&(b, s)) {
                                continue;
                            }
                            pending = Some((b, s));
                            break 'search;
                        }
                    }
                }
                let Some((b, s)) = pending else { break };
                self.levels[lvl].checked.insert((b, s));
                let level = &self.levels[lvl];
                let c = level.gens[s].apply(b);
                let schreier = level.transversal[b]
                    .as_ref()
                    .unwrap()
                    .then(&level.gens[s])
                    .then(&level.transversal[c].as_ref().unwrap().inverse());
                if schreier.is_identity() {
                    continue;
                }
                let (h, j) = self.sift(schreier, lvl + 1);
                if !h.is_identity() {
                    // h fixes the base points of levels <= j - 1, so it lies in
                    // every stabilizer from lvl + 1 to j.
                    let top = j;
                    if top == self.levels.len() {
                        self.insert(top, h.clone());
                    } else {
                        self.levels[top].add_gen(h.clone());
                    }
                    for l in lvl + 1..top {
                        self.levels[l].add_gen(h.clone());
                    }
                    i = top as isize;
                    continue 'outer;
                }
            }
            i -= 1;
        }
    }

    pub fn order(&self) -> u128 {
        self.levels.iter().map(|l| l.orbit.len() as u128).product()
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.base).collect()
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        g.degree() == self.degree && self.sift(g.clone(), 0).0.is_identity()
    }

    /// Uniformly random element.
    pub fn random_element<R: Rng>(&self, rng: &mut R) -> Permutation {
        let mut g = Permutation::identity(self.degree);
        for level in self.levels.iter().rev() {
            let b = level.orbit[rng.random_range(0..level.orbit.len())];
            g = g.then(level.transversal[b].as_ref().unwrap());
        }
        g
    }

    /// Visit every group element exactly once.
    pub fn for_each_element(&self, mut f: impl FnMut(&Permutation)) {
        fn rec(levels: &[Level], acc: &Permutation, f: &mut dyn FnMut(&Permutation)) {
            match levels.split_last() {
                None => f(acc),
                Some((last, rest)) => {
                    for &b in &last.orbit {
                        let next = acc.then(last.transversal[b].as_ref().unwrap());
                        rec(rest, &next, f);
                    }
                }
            }
        }
        rec(&self.levels, &Permutation::identity(self.degree), &mut f);
    }
}

pub fn group_order(spec: &GroupSpec) -> u128 {
    StabChain::new(spec).order()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassInfo {
    /// Representative (cycle notation) or cycle-type label.
    pub label: String,
    #[serde(with = "crate::bigserde")]
    pub size: BigUint,
    pub order: u64,
}

/// Conjugacy classes with sizes, element orders, inverse map and power maps.
///
/// `fusion[c]` lists only the residues `k` (coprime to the element order)
/// whose power class differs from `c`; every other unit residue maps `c`
/// to itself.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassStructure {
    #[serde(with = "crate::bigserde")]
    pub group_order: BigUint,
    pub exponent: u64,
    pub classes: Vec<ClassInfo>,
    pub inverse_map: Vec<usize>,
    pub fusion: Vec<BTreeMap<u64, usize>>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("invalid class structure: {0}")]
pub struct ClassStructureError(pub String);

impl ClassStructure {
    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    /// Class containing `rep^k`, or `None` when `k` is not a unit mod the
    /// element order.
    pub fn power_class(&self, c: usize, k: i64) -> Option<usize> {
        let m = self.classes[c].order;
        let kr = reduce(k, m);
        if m > 1 && gcd(kr, m) != 1 {
            return None;
        }
        Some(self.fusion[c].get(&kr).copied().unwrap_or(c))
    }

    /// Check every structural invariant exhaustively.
    pub fn validate(&self) -> Result<(), ClassStructureError> {
        let err = |m: String| Err(ClassStructureError(m));
        let n = self.classes.len();
        if self.inverse_map.len() != n || self.fusion.len() != n {
            return err("inverse map or fusion table has the wrong length".into());
        }
        let total: BigUint = self.classes.iter().map(|c| &c.size).sum();
        if total != self.group_order {
            return err(format!("class sizes sum to {total}, group order is {}", self.group_order));
        }
        let exp = self.classes.iter().fold(1, |a, c| lcm(a, c.order));
        if exp != self.exponent {
            return err(format!("exponent {} but lcm of orders is {exp}", self.exponent));
        }
        for c in 0..n {
            let m = self.classes[c].order;
            for (&k, &t) in &self.fusion[c] {
                if k >= m.max(1) || (m > 1 && gcd(k, m) != 1) {
                    return err(format!("class {c}: residue {k} not a unit mod {m}"));
                }
                if t >= n || self.classes[t].order != m || self.classes[t].size != self.classes[c].size {
                    return err(format!("class {c}: power {k} lands in incompatible class {t}"));
                }
            }
            if self.power_class(c, 1) != Some(c) {
                return err(format!("class {c}: fusion(c,1) != c"));
            }
            if self.power_class(c, -1) != Some(self.inverse_map[c]) {
                return err(format!("class {c}: inverse map disagrees with fusion(c,-1)"));
            }
            let us = units(m);
            for &a in &us {
                let ca = self.power_class(c, a as i64).unwrap();
                for &b in &us {
                    let lhs = self.power_class(ca, b as i64);
                    let rhs = self.power_class(c, ((a * b) % m.max(1)) as i64);
                    if lhs != rhs {
                        return err(format!("class {c}: power maps {a} and {b} do not compose"));
                    }
                }
            }
        }
        Ok(())
    }

    /// Unit residues mod the order of class `c`.
    pub fn fusion_domain(&self, c: usize) -> Vec<u64> {
        units(self.classes[c].order)
    }
}

/// Resource limits for class computations.
#[derive(Debug, Clone, Copy)]
pub struct ClassLimits {
    pub max_order: u128,
    pub enumerate_below: u128,
    pub max_samples: u64,
    pub seed: u64,
}

impl Default for ClassLimits {
    fn default() -> Self {
        ClassLimits {
            max_order: DEFAULT_MAX_ORDER,
            enumerate_below: DEFAULT_ENUMERATE_BELOW,
            max_samples: 1_000_000,
            seed: 0,
        }
    }
}

struct ClassBuilder<'a> {
    gens: &'a [Permutation],
    lookup: HashMap<Permutation, usize>,
    reps: Vec<Permutation>,
    sizes: Vec<u128>,
    covered: u128,
}

impl ClassBuilder<'_> {
    fn absorb(&mut self, x: &Permutation) {
        if self.lookup.contains_key(x) {
            return;
        }
        let id = self.reps.len();
        let mut queue = vec![x.clone()];
        self.lookup.insert(x.clone(), id);
        let mut least = x.clone();
        let mut count = 0u128;
        while let Some(y) = queue.pop() {
            count += 1;
            if y < least {
                least = y.clone();
            }
            for s in self.gens {
                let z = y.conjugate_by(s);
                if !self.lookup.contains_key(&z) {
                    self.lookup.insert(z.clone(), id);
                    queue.push(z);
                }
            }
        }
        self.reps.push(least);
        self.sizes.push(count);
        self.covered += count;
    }
}

/// Conjugacy classes of the group generated by `spec`.
pub fn conjugacy_classes(spec: &GroupSpec, limits: &ClassLimits) -> Result<ClassStructure, PermError> {
    let chain = StabChain::new(spec);
    let order = chain.order();
    if order > limits.max_order {
        return Err(PermError::Guard { order, bound: limits.max_order });
    }
    let gens: Vec<Permutation> = spec.generators.iter().filter(|g| !g.is_identity()).cloned().collect();
    let mut builder = ClassBuilder {
        gens: &gens,
        lookup: HashMap::new(),
        reps: Vec::new(),
        sizes: Vec::new(),
        covered: 0,
    };
    builder.absorb(&Permutation::identity(spec.degree));
    if order <= limits.enumerate_below {
        chain.for_each_element(|g| {
            if builder.covered < order {
                builder.absorb(g);
            }
        });
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(limits.seed);
        let mut attempts = 0u64;
        while builder.covered < order {
            if attempts >= limits.max_samples {
                return Err(PermError::Incomplete { attempts, covered: builder.covered, order });
            }
            attempts += 1;
            let g = chain.random_element(&mut rng);
            // Powers reach small classes that uniform sampling rarely hits.
            let m = g.order();
            for d in crate::arith::divisors(m) {
                builder.absorb(&g.pow(d as i64));
            }
        }
    }
    debug_assert_eq!(builder.covered, order);

    let mut idx: Vec<usize> = (0..builder.reps.len()).collect();
    let orders: Vec<u64> = builder.reps.iter().map(Permutation::order).collect();
    idx.sort_by(|&a, &b| {
        (orders[a], builder.sizes[a], &builder.reps[a]).cmp(&(orders[b], builder.sizes[b], &builder.reps[b]))
    });
    let mut renumber = vec![0usize; idx.len()];
    for (new, &old) in idx.iter().enumerate() {
        renumber[old] = new;
    }
    let classes: Vec<ClassInfo> = idx
        .iter()
        .map(|&old| ClassInfo {
            label: builder.reps[old].to_string(),
            size: BigUint::from(builder.sizes[old]),
            order: orders[old],
        })
        .collect();
    let mut fusion = Vec::with_capacity(idx.len());
    let mut inverse_map = Vec::with_capacity(idx.len());
    for (new, &old) in idx.iter().enumerate() {
        let rep = &builder.reps[old];
        let m = orders[old];
        let mut moved = BTreeMap::new();
        for k in units(m) {
            let target = renumber[builder.lookup[&rep.pow(k as i64)]];
            if target != new {
                moved.insert(k, target);
            }
        }
        inverse_map.push(moved.get(&(m.max(1) - 1)).copied().unwrap_or(new));
        fusion.push(moved);
    }
    let exponent = classes.iter().fold(1, |a, c| lcm(a, c.order));
    Ok(ClassStructure { group_order: BigUint::from(order), exponent, classes, inverse_map, fusion })
}

/// Class data of the cyclic group of order `m`, classes labelled `g^j`.
pub fn cyclic_class_structure(m: u64) -> Result<ClassStructure, PermError> {
    if m == 0 {
        return Err(PermError::CyclicZero);
    }
    let mut js: Vec<u64> = (0..m).collect();
    js.sort_by_key(|&j| (m / gcd(j, m), j));
    let mut position = vec![0usize; m as usize];
    for (i, &j) in js.iter().enumerate() {
        position[j as usize] = i;
    }
    let classes = js
        .iter()
        .map(|&j| ClassInfo {
            label: if j == 0 { "1".into() } else { format!("g^{j}") },
            size: BigUint::one(),
            order: m / gcd(j, m),
        })
        .collect::<Vec<_>>();
    let mut fusion = Vec::new();
    let mut inverse_map = Vec::new();
    for (i, &j) in js.iter().enumerate() {
        let ord = m / gcd(j, m);
        let mut moved = BTreeMap::new();
        for k in units(ord) {
            let t = position[((j * k) % m) as usize];
            if t != i {
                moved.insert(k, t);
            }
        }
        inverse_map.push(position[((m - j) % m) as usize]);
        fusion.push(moved);
    }
    Ok(ClassStructure { group_order: BigUint::from(m), exponent: m, classes, inverse_map, fusion })
}

fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * BigUint::from(i))
}

/// All partitions of `n`, parts in decreasing order.
pub(crate) fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn rec(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for p in (1..=rest.min(max)).rev() {
            cur.push(p);
            rec(rest - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// Canonical element of cycle type `parts`: cycles on consecutive points.
fn canonical_element(n: usize, parts: &[usize]) -> Permutation {
    let mut cycles = Vec::new();
    let mut start = 0;
    for &l in parts {
        cycles.push((start..start + l).collect::<Vec<_>>());
        start += l;
    }
    Permutation::from_cycles(n, &cycles).expect("disjoint cycles")
}

/// A permutation `π` with `π⁻¹ · x · π = y` for `x`, `y` of the same cycle
/// type with pairwise distinct cycle lengths.
fn conjugator_distinct_lengths(x: &Permutation, y: &Permutation) -> Permutation {
    let n = x.degree();
    let mut images = vec![usize::MAX; n];
    let xc = x.cycles();
    let yc = y.cycles();
    for cx in &xc {
        let cy = yc.iter().find(|c| c.len() == cx.len()).expect("matching cycle length");
        for (a, b) in cx.iter().zip(cy) {
            images[*a] = *b;
        }
    }
    let fixed_x: Vec<usize> = (0..n).filter(|&p| x.apply(p) == p).collect();
    let fixed_y: Vec<usize> = (0..n).filter(|&p| y.apply(p) == p).collect();
    for (a, b) in fixed_x.into_iter().zip(fixed_y) {
        images[a] = b;
    }
    Permutation::from_images(images).expect("bijection")
}

/// Class data of `A_n` from cycle types, `5 <= n <= 40`.
///
/// A cycle type with all parts odd and distinct splits into two classes
/// (labels with suffixes `a` and `b`); the power maps on a split pair are
/// decided by the parity of an explicit conjugator from `g^k` back to `g`.
pub fn alternating_class_structure(n: usize) -> Result<ClassStructure, PermError> {
    if !(5..=40).contains(&n) {
        return Err(PermError::AltRange(n));
    }
    let n_fact = factorial(n);
    struct Raw {
        label: String,
        size: BigUint,
        order: u64,
        parts: Vec<usize>,
        split: Option<bool>,
    }
    let mut raw = Vec::new();
    for parts in partitions(n) {
        if !(n - parts.len()).is_multiple_of(2) {
            continue;
        }
        let mut z = BigUint::one();
        let mut mult: BTreeMap<usize, usize> = BTreeMap::new();
        for &p in &parts {
            *mult.entry(p).or_default() += 1;
        }
        for (&p, &m) in &mult {
            z *= BigUint::from(p).pow(m as u32) * factorial(m);
        }
        let order = parts.iter().fold(1u64, |a, &p| lcm(a, p as u64));
        let label_base = parts.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(".");
        let splits = parts.iter().all(|p| p % 2 == 1) && mult.values().all(|&m| m == 1);
        if splits {
            let size = &n_fact / (&z * 2u32);
            for half in [true, false] {
                raw.push(Raw {
                    label: format!("{label_base}{}", if half { "a" } else { "b" }),
                    size: size.clone(),
                    order,
                    parts: parts.clone(),
                    split: Some(half),
                });
            }
        } else {
            raw.push(Raw { label: label_base, size: &n_fact / &z, order, parts, split: None });
        }
    }
    raw.sort_by(|a, b| (a.order, &a.size, &a.label).cmp(&(b.order, &b.size, &b.label)));
    let index: HashMap<String, usize> = raw.iter().enumerate().map(|(i, r)| (r.label.clone(), i)).collect();

    let mut fusion = Vec::with_capacity(raw.len());
    let mut inverse_map = Vec::with_capacity(raw.len());
    for (i, r) in raw.iter().enumerate() {
        let mut moved = BTreeMap::new();
        if let Some(half) = r.split {
            let partner = index[&format!("{}{}", &r.label[..r.label.len() - 1], if half { "b" } else { "a" })];
            let g = canonical_element(n, &r.parts);
            for k in units(r.order) {
                let gk = g.pow(k as i64);
                let pi = conjugator_distinct_lengths(&gk, &g);
                debug_assert_eq!(gk.conjugate_by(&pi), g);
                if !pi.is_even() {
                    moved.insert(k, partner);
                }
            }
        }
        inverse_map.push(moved.get(&(r.order.max(1) - 1)).copied().unwrap_or(i));
        fusion.push(moved);
    }
    let exponent = raw.iter().fold(1, |a, r| lcm(a, r.order));
    let classes = raw
        .into_iter()
        .map(|r| ClassInfo { label: r.label, size: r.size, order: r.order })
        .collect();
    Ok(ClassStructure { group_order: n_fact / 2u32, exponent, classes, inverse_map, fusion })
}

/// Order of the group as a `u128`, when it fits.
pub fn order_u128(cs: &ClassStructure) -> Option<u128> {
    cs.group_order.to_u128()
}
