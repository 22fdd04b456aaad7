use galorb::CyclotomicNumber as Cyc;
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 { a } else { gcd(b, a % b) }
}

// Möbius function by trial division.
fn mobius(mut n: u64) -> i64 {
    let mut sign = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 { -sign } else { sign }
}

fn close(a: (f64, f64), b: (f64, f64)) -> bool {
    (a.0 - b.0).abs() < 1e-6 && (a.1 - b.1).abs() < 1e-6
}

// Direct numeric evaluation of Σ c ζ_n^k, independent of any reduction.
fn numeric(n: u64, terms: &[(i64, i64, i64)]) -> (f64, f64) {
    terms.iter().fold((0.0, 0.0), |(re, im), &(k, a, b)| {
        let t = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
        let c = a as f64 / b as f64;
        (re + c * t.cos(), im + c * t.sin())
    })
}

fn build(n: u64, terms: &[(i64, i64, i64)]) -> Cyc {
    Cyc::make(n, terms.iter().map(|&(k, a, b)| (k, BigRational::new(BigInt::from(a), BigInt::from(b))))).unwrap()
}

fn element() -> impl Strategy<Value = (u64, Vec<(i64, i64, i64)>)> {
    (1u64..=24).prop_flat_map(|n| (Just(n), prop::collection::vec((0..n as i64, -5i64..=5, 1i64..=3), 0..5)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn evaluation_matches_numeric((n, t) in element()) {
        prop_assert!(close(build(n, &t).to_complex(), numeric(n, &t)));
    }

    #[test]
    fn ring_operations_match_numeric((n, s) in element(), (m, t) in element()) {
        let (a, b) = (build(n, &s), build(m, &t));
        let (x, y) = (numeric(n, &s), numeric(m, &t));
        prop_assert!(close((&a + &b).to_complex(), (x.0 + y.0, x.1 + y.1)));
        prop_assert!(close((&a * &b).to_complex(), (x.0 * y.0 - x.1 * y.1, x.0 * y.1 + x.1 * y.0)));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &Cyc::one(), a.clone());
    }

    #[test]
    fn galois_is_a_homomorphism((n, s) in element(), (m, t) in element(), j in 1i64..200, k in 1i64..200) {
        let (a, b) = (build(n, &s), build(m, &t));
        let big = n * m * 4;
        prop_assume!(gcd(j as u64, big) == 1 && gcd(k as u64, big) == 1);
        let g = |x: &Cyc, e: i64| x.galois_apply(e).unwrap();
        prop_assert_eq!(g(&(&a + &b), k), &g(&a, k) + &g(&b, k));
        prop_assert_eq!(g(&(&a * &b), k), &g(&a, k) * &g(&b, k));
        prop_assert_eq!(g(&g(&a, k), j), g(&a, j * k));
        prop_assert_eq!(g(&a, -1), a.conjugate());
    }

    #[test]
    fn conjugation_matches_numeric((n, s) in element()) {
        let (re, im) = numeric(n, &s);
        prop_assert!(close(build(n, &s).conjugate().to_complex(), (re, -im)));
        let a = build(n, &s);
        prop_assert_eq!(a.is_real(), im.abs() < 1e-9);
    }

    #[test]
    fn canonical_form_is_field_independent((n, s) in element(), m in 1u64..5) {
        // ζ_n = ζ_{nm}^m, so the same element written in a larger field
        let lifted: Vec<(i64, i64, i64)> = s.iter().map(|&(k, a, b)| (k * m as i64, a, b)).collect();
        prop_assert_eq!(build(n, &s), build(n * m, &lifted));
    }

    #[test]
    fn serde_round_trip((n, s) in element()) {
        let a = build(n, &s);
        let text = serde_json::to_string(&a).unwrap();
        let back: Cyc = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(&back, &a);
        prop_assert_eq!(serde_json::to_string(&back).unwrap(), text);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn distributive((n, s) in element(), (m, t) in element(), (l, u) in element()) {
        let (a, b, c) = (build(n, &s), build(m, &t), build(l, &u));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
    }
}

#[test]
fn roots_of_unity_up_to_60() {
    for n in 1..=60u64 {
        let mut ramanujan = Cyc::zero();
        for k in 0..n {
            let z = Cyc::from_int_terms(n, &[(k as i64, 1)]).unwrap();
            let d = n / gcd(n, k);
            assert_eq!(z.is_rational(), d <= 2, "ζ_{n}^{k}");
            let conductor = if d % 4 == 2 { d / 2 } else { d };
            assert_eq!(z.order(), conductor, "ζ_{n}^{k}");
            if gcd(n, k) == 1 {
                ramanujan = &ramanujan + &z;
            }
        }
        assert_eq!(ramanujan, Cyc::integer(mobius(n)), "n={n}");
    }
}

#[test]
fn golden_ratio_and_heptagon_period() {
    let phi = Cyc::from_int_terms(5, &[(2, -1), (3, -1)]).unwrap();
    assert_eq!(&(&phi * &phi) - &phi, Cyc::one());
    assert!(phi.is_real());
    let a = Cyc::from_int_terms(7, &[(1, 1), (2, 1), (4, 1)]).unwrap();
    // α² + α + 2 = 0
    assert!((&(&(&a * &a) + &a) + &Cyc::integer(2)).is_zero());
    assert!(!a.is_real());
}
