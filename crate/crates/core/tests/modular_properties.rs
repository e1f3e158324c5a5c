use std::collections::BTreeMap;

use parity_core::arith::{divisors, gcd, kronecker, Rational};
use parity_core::etaquot::cusp_set;
use parity_core::{Cusp, EtaQuotient};
use proptest::prelude::*;

const LEVELS: [u64; 8] = [4, 6, 12, 20, 28, 44, 60, 108];

fn quotient_pair() -> impl Strategy<Value = (u64, Vec<i64>, Vec<i64>)> {
    prop::sample::select(LEVELS.to_vec()).prop_flat_map(|level| {
        let k = divisors(level).len();
        (
            Just(level),
            prop::collection::vec(-30i64..=30, k),
            prop::collection::vec(-30i64..=30, k),
        )
    })
}

fn build(level: u64, exps: &[i64]) -> Option<EtaQuotient> {
    EtaQuotient::new(level, divisors(level).into_iter().zip(exps.iter().copied())).ok()
}

/// Order at `c/d` straight from the cusp-width formula, summed termwise.
fn ligozat_oracle(level: u64, exps: &BTreeMap<u64, i64>, d: u64) -> Rational {
    let width = level / gcd(d * d, level);
    exps.iter()
        .map(|(&delta, &r)| {
            let g = gcd(d, delta) as i64;
            Rational::new(width as i64 * g * g * r, 24 * delta as i64)
        })
        .sum()
}

/// Legendre symbol by Euler's criterion.
fn euler_criterion(a: i64, p: i64) -> i32 {
    let a = a.rem_euclid(p);
    if a == 0 {
        return 0;
    }
    let (mut base, mut e, mut acc) = (a as i128, (p - 1) / 2, 1i128);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as i128;
        }
        base = base * base % p as i128;
        e >>= 1;
    }
    if acc == 1 {
        1
    } else {
        -1
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn ligozat_order_is_linear((level, x, y) in quotient_pair()) {
        let sum: Vec<i64> = x.iter().zip(&y).map(|(a, b)| a + b).collect();
        for cusp in cusp_set(level) {
            let ord = |v: &[i64]| build(level, v).map_or(Rational::from_integer(0), |e| e.ligozat_order(&cusp));
            prop_assert_eq!(ord(&sum), ord(&x) + ord(&y));
        }
    }

    #[test]
    fn ligozat_order_matches_width_formula((level, x, _y) in quotient_pair()) {
        if let Some(e) = build(level, &x) {
            for d in divisors(level) {
                prop_assert_eq!(e.ligozat_order(&Cusp { c: 1, d }), ligozat_oracle(level, e.exps(), d));
            }
        }
    }

    #[test]
    fn kronecker_multiplicative(a in -500i64..500, b in -500i64..500, m in -300i64..300, n in -300i64..300) {
        prop_assert_eq!(kronecker(a * b, n), kronecker(a, n) * kronecker(b, n));
        prop_assert_eq!(kronecker(a, m * n), kronecker(a, m) * kronecker(a, n));
    }

    #[test]
    fn kronecker_is_legendre_at_odd_primes(a in -10_000i64..10_000, i in 0usize..25) {
        let primes = [3i64, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97, 101];
        let p = primes[i];
        prop_assert_eq!(kronecker(a, p), euler_criterion(a, p));
    }
}
