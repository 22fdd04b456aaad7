use std::collections::BTreeSet;

use galorb::altcount::*;
use galorb::classtheory::rank_central_units;
use galorb::permgroup::alternating_class_structure;
use proptest::prelude::*;

// Every partition of n, parts non-increasing.
fn all_partitions(n: u64) -> Vec<Vec<u64>> {
    fn go(rest: u64, cap: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for x in (1..=cap.min(rest)).rev() {
            cur.push(x);
            go(rest - x, x, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

fn isqrt(x: u128) -> u128 {
    let mut r = (x as f64).sqrt() as u128;
    while r * r > x {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= x {
        r += 1;
    }
    r
}

fn brute_rank(n: u64) -> u64 {
    all_partitions(n)
        .into_iter()
        .filter(|p| p.iter().all(|x| x % 2 == 1) && p.windows(2).all(|w| w[0] > w[1]))
        .filter(|p| p.len() as u64 % 4 == n % 4)
        .filter(|p| {
            let prod: u128 = p.iter().map(|&x| x as u128).product();
            isqrt(prod).pow(2) != prod
        })
        .count() as u64
}

#[test]
fn enumeration_matches_generic_generator() {
    for n in 0..=30 {
        let want: Vec<Vec<u64>> = all_partitions(n)
            .into_iter()
            .filter(|p| p.iter().all(|x| x % 2 == 1) && p.windows(2).all(|w| w[0] > w[1]))
            .collect();
        let got: Vec<Vec<u64>> = enumerate_distinct_odd_partitions(n).unwrap().map(|r| r.parts).collect();
        assert_eq!(got, want, "n={n}");
    }
    assert_eq!(enumerate_distinct_odd_partitions(16).unwrap().count(), 5);
}

#[test]
fn rank_matches_brute_force() {
    for n in 1..=40 {
        assert_eq!(frobenius_rank(n).unwrap(), brute_rank(n), "n={n}");
    }
}

#[test]
fn rank_one_set_up_to_40() {
    let ones: Vec<u64> = (1..=40).filter(|&n| frobenius_rank(n).unwrap() == 1).collect();
    assert_eq!(ones, vec![5, 6, 10, 11, 13, 16, 17, 21, 25]);
    for n in [7, 8, 9, 12] {
        assert_eq!(frobenius_rank(n).unwrap(), 0);
    }
}

#[test]
fn criterion_matches_class_side_rank() {
    for n in 5..=13 {
        let cs = alternating_class_structure(n).unwrap();
        assert_eq!(frobenius_rank(n as u64).unwrap(), rank_central_units(&cs) as u64, "n={n}");
    }
}

#[test]
fn rank_exceeds_one_from_26_to_60() {
    for n in 26..=60 {
        assert!(frobenius_rank(n).unwrap() > 1, "n={n}");
    }
}

#[test]
fn injection_suite_26_to_120() {
    for n in 26..=120u64 {
        let b = prop8_lower_bound(n).unwrap();
        let rank = frobenius_rank(n).unwrap();
        assert!(b.bound <= rank as u128, "n={n}: bound {} > rank {rank}", b.bound);
        if b.m < b.k as i64 - 1 {
            assert_eq!(b.bound, 0);
            assert!(b.diagnostic.is_some());
            continue;
        }
        let inputs = partitions_into(b.m as u64, b.k - 1);
        assert_eq!(inputs.len() as u128, b.bound, "n={n}");
        let mut outputs = BTreeSet::new();
        for pi in &inputs {
            let rec = prop8_construct(n, b.m as u64, b.k, b.p, pi).unwrap();
            assert_eq!(rec.n, n);
            assert_eq!(rec.k as u64, b.k);
            assert!(rec.flags.all(), "n={n} {pi:?} -> {:?}", rec.parts);
            assert!(rec.parts.iter().product::<u64>() % b.p == 0);
            assert!(outputs.insert(rec.parts), "n={n}: collision");
        }
    }
}

#[test]
fn injection_is_injective_up_to_60_for_all_parameters() {
    // every admissible (k, p) for each n, not just the chosen one
    for n in 1..=60u64 {
        for p in (n / 2 + 1..=n).filter(|&p| galorb::arith::is_prime(p)) {
            for k in (1..=n).filter(|k| k % 4 == n % 4) {
                let twice = n as i64 - p as i64 - (k * k) as i64 + 1;
                if twice < 0 || twice % 2 == 1 {
                    continue;
                }
                let m = twice as u64 / 2;
                let mut seen = BTreeSet::new();
                for pi in partitions_into(m, k - 1) {
                    let rec = prop8_construct(n, m, k, p, &pi).unwrap();
                    assert!(rec.flags.all());
                    assert!(seen.insert(rec.parts));
                }
            }
        }
    }
}

proptest! {
    #[test]
    fn flags_recompute_from_parts(parts in prop::collection::vec(1u64..60, 0..8)) {
        let rec = PartitionRecord::from_parts(parts.clone());
        prop_assert_eq!(rec.n, parts.iter().sum::<u64>());
        prop_assert!(rec.parts.windows(2).all(|w| w[0] >= w[1]));
        let prod: u128 = parts.iter().map(|&x| x as u128).product();
        prop_assert_eq!(rec.flags.product_not_square, isqrt(prod).pow(2) != prod);
        prop_assert_eq!(PartitionRecord::from_parts(rec.parts.clone()), rec);
    }

    #[test]
    fn exact_part_counts_follow_recurrence(m in 1u64..80, j in 1u64..20) {
        prop_assume!(j <= m);
        prop_assert_eq!(partitions_exact(m, j), partitions_exact(m - 1, j - 1) + partitions_exact(m - j, j));
    }
}
