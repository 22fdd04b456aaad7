use std::collections::{BTreeSet, HashMap, HashSet};

use galorb::arith::gcd;
use galorb::chartab::{analyze_table, brauer_crosscheck, parse_table, permute_columns, serialize_table, CharacterTable};
use galorb::classtheory::analyze;
use galorb::fixtures;
use galorb::permgroup::{conjugacy_classes, ClassLimits, GroupSpec, Permutation};
use num_bigint::BigUint;
use proptest::prelude::*;

fn elements(spec: &GroupSpec) -> Vec<Permutation> {
    let id = Permutation::identity(spec.degree);
    let mut seen = HashSet::from([id.clone()]);
    let mut stack = vec![id];
    while let Some(x) = stack.pop() {
        for g in &spec.generators {
            let y = x.then(g);
            if seen.insert(y.clone()) {
                stack.push(y);
            }
        }
    }
    seen.into_iter().collect()
}

struct Oracle {
    sizes: Vec<(u64, u64)>,
    n_r: usize,
    n_q: usize,
    f: usize,
}

// Everything computed straight from the element list.
fn oracle(spec: &GroupSpec) -> Oracle {
    let group = elements(spec);
    let mut class_of: HashMap<Permutation, usize> = HashMap::new();
    let mut reps = Vec::new();
    let mut sizes = Vec::new();
    for g in &group {
        if class_of.contains_key(g) {
            continue;
        }
        let id = reps.len();
        let mut size = 0;
        for h in &group {
            let c = g.conjugate_by(h);
            if class_of.insert(c, id).is_none() {
                size += 1;
            }
        }
        reps.push(g.clone());
        sizes.push((size, g.order()));
    }
    let mut real_pairs = BTreeSet::new();
    let mut rational = BTreeSet::new();
    let mut f = 1;
    for g in &reps {
        let c = class_of[g];
        let ci = class_of[&g.inverse()];
        real_pairs.insert((c.min(ci), c.max(ci)));
        let o = g.order() as i64;
        let orbit: BTreeSet<usize> = (1..=o).filter(|&k| gcd(k as u64, o as u64) == 1).map(|k| class_of[&g.pow(k)]).collect();
        f = f.max(orbit.len());
        rational.insert(orbit);
    }
    Oracle { sizes, n_r: real_pairs.len(), n_q: rational.len(), f }
}

fn perm_strategy(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}

fn group_strategy() -> impl Strategy<Value = GroupSpec> {
    (2usize..=6).prop_flat_map(|n| {
        prop::collection::vec(perm_strategy(n), 1..=3).prop_map(move |gens| {
            let gens = gens.into_iter().map(|p| Permutation::from_images(p).unwrap()).collect();
            GroupSpec::new(n, gens).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn classes_match_brute_force(spec in group_strategy()) {
        let cs = conjugacy_classes(&spec, &ClassLimits::default()).unwrap();
        cs.validate().unwrap();
        let want = oracle(&spec);
        let mut got: Vec<(u64, u64)> = cs.classes.iter().map(|c| (u64::try_from(&c.size).unwrap(), c.order)).collect();
        let mut expect = want.sizes.clone();
        got.sort();
        expect.sort();
        prop_assert_eq!(got, expect);
        let total: BigUint = cs.classes.iter().map(|c| c.size.clone()).sum();
        prop_assert_eq!(total, cs.group_order.clone());

        let report = analyze(&cs).unwrap();
        prop_assert_eq!(report.n_r, want.n_r);
        prop_assert_eq!(report.n_q, want.n_q);
        prop_assert_eq!(report.f, want.f);
        prop_assert_eq!(report.rank, want.n_r - want.n_q);
        prop_assert_eq!(report.a1 - report.a2, report.rank);
        prop_assert!(2 * report.a2 <= report.a1);
        prop_assert_eq!(report.is_cut, report.rank == 0);
        prop_assert!(2 * report.rank + 2 >= report.f);
    }

    #[test]
    fn classes_survive_relabelling(spec in group_strategy(), seed in any::<u64>()) {
        let n = spec.degree;
        let mut images: Vec<usize> = (0..n).collect();
        let mut s = seed;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            images.swap(i, (s >> 33) as usize % (i + 1));
        }
        let h = Permutation::from_images(images).unwrap();
        let moved = GroupSpec::new(n, spec.generators.iter().map(|g| g.conjugate_by(&h)).collect()).unwrap();
        let a = analyze(&conjugacy_classes(&spec, &ClassLimits::default()).unwrap()).unwrap();
        let b = analyze(&conjugacy_classes(&moved, &ClassLimits::default()).unwrap()).unwrap();
        prop_assert_eq!((a.n_q, a.n_r, a.f, a.a1, a.a2), (b.n_q, b.n_r, b.f, b.a1, b.a2));
    }
}

fn shuffled(n: usize, keep_first: bool, seed: u64) -> Vec<usize> {
    let mut v: Vec<usize> = (0..n).collect();
    let start = usize::from(keep_first);
    let mut s = seed | 1;
    for i in (start + 1..n).rev() {
        s ^= s << 13;
        s ^= s >> 7;
        s ^= s << 17;
        let j = start + (s as usize) % (i + 1 - start);
        v.swap(i, j);
    }
    v
}

fn sorted_families(families: &[Vec<usize>], back: &[usize]) -> BTreeSet<BTreeSet<usize>> {
    families.iter().map(|f| f.iter().map(|&c| back[c]).collect()).collect()
}

fn table_names() -> Vec<&'static str> {
    fixtures::TABLES.iter().map(|(n, _)| *n).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn table_quantities_ignore_ordering(idx in 0usize..9, seed in any::<u64>()) {
        let names = table_names();
        let table = fixtures::table(names[idx % names.len()]);
        let k = table.num_classes();
        let cols = shuffled(k, true, seed);
        let rows = shuffled(k, true, seed.rotate_left(17));
        let mut moved = permute_columns(&table, &cols);
        moved.irr = rows.iter().map(|&r| moved.irr[r].clone()).collect();
        moved.validate().unwrap();

        let a = analyze_table(&table).unwrap();
        let b = analyze_table(&moved).unwrap();
        prop_assert_eq!((a.h_r, a.n_g, a.rank_eq1, a.f_table, a.b1, a.b2, a.cut_by_fields),
                        (b.h_r, b.n_g, b.rank_eq1, b.f_table, b.b1, b.b2, b.cut_by_fields));
        let identity: Vec<usize> = (0..k).collect();
        prop_assert_eq!(sorted_families(&b.column_families, &cols), sorted_families(&a.column_families, &identity));
        prop_assert_eq!(sorted_families(&moved.row_orbits(), &rows), sorted_families(&table.row_orbits(), &identity));
    }
}

#[test]
fn tables_round_trip_through_text() {
    for name in table_names() {
        let table = fixtures::table(name);
        let back: CharacterTable = parse_table(&serialize_table(&table)).unwrap();
        assert_eq!(back, table, "{name}");
    }
}

#[test]
fn fixture_tables_agree_with_class_side() {
    for name in table_names() {
        let table = fixtures::table(name);
        let cs = conjugacy_classes(&fixtures::group(name), &ClassLimits::default()).unwrap();
        let check = brauer_crosscheck(&table, &cs).unwrap();
        assert!(check.passed, "{name}: {:?}", check.discrepancies);
        let report = analyze(&cs).unwrap();
        let tab = analyze_table(&table).unwrap();
        assert_eq!(tab.rank_eq1, report.rank, "{name}");
        assert_eq!(tab.f_table, report.f, "{name}");
        assert_eq!(tab.b1 - tab.b2, report.rank, "{name}");
    }
}
