use parity_core::arith::Rational;
use parity_core::density::{
    conjecture_table, landau_check, landau_series, odd_density, regular_relation_check,
};
use parity_core::TableKind;

fn p(t: u64) -> TableKind {
    TableKind::Multipartition { t }
}

#[test]
fn first_ten_partitions() {
    let d = odd_density(p(1), 10);
    assert_eq!(d.odd_count, 7);
    assert!(d.odd_count <= d.x);
}

#[test]
fn two_colors_halve_the_one_color_ratio() {
    for x in [1000u64, 5000, 20_000] {
        let one = odd_density(p(1), x / 2);
        let two = odd_density(p(2), x);
        assert_eq!(two.ratio, one.ratio / 2);
        assert!(two.ratio <= Rational::new(1, 2));
    }
}

#[test]
fn power_of_two_colors_reduce_to_odd_part() {
    // counting n < x, so the odd part is counted below ceil(x / 2^k)
    for (t, t0, k) in [(4u64, 1u64, 2u32), (6, 3, 1), (12, 3, 2), (8, 1, 3)] {
        for x in [999u64, 1000, 4096] {
            let big = odd_density(p(t), x).odd_count;
            let small = odd_density(p(t0), x.div_ceil(1 << k)).odd_count;
            assert_eq!(big, small, "t = {t}, x = {x}");
        }
    }
}

#[test]
fn conjecture_rows() {
    let rows = conjecture_table(&[1, 2, 4, 3], 20_000);
    assert_eq!(rows[0].predicted, Rational::new(1, 2));
    assert_eq!(rows[2].predicted, Rational::new(1, 8));
    assert_eq!(rows[3].predicted, Rational::new(1, 2));
    assert_eq!(rows[1].estimate.ratio, odd_density(p(1), 10_000).ratio / 2);
    for r in &rows {
        assert_eq!(r.deviation, r.estimate.ratio - r.predicted);
    }
}

#[test]
fn euler_fourth_power_is_sparse() {
    let x = 100_000u64;
    let fourth = parity_core::F2Series::euler(x as usize)
        .pow(4)
        .unwrap()
        .truncated(x as usize);
    let mut want: Vec<usize> = Vec::new();
    for n in -200i64..=200 {
        let e = 2 * n * (3 * n - 1);
        if e >= 0 && (e as u64) < x {
            want.push(e as usize);
        }
    }
    want.sort_unstable();
    assert_eq!(fourth.support().collect::<Vec<_>>(), want);
    assert!((fourth.count_ones() as f64) < 2.0 * (x as f64).sqrt());
}

#[test]
fn landau_series_small_cases() {
    assert_eq!(landau_check(1).odd_count, 1);
    let s = landau_series(10);
    // (q)^4 = 1 + q^4 + q^8 + ..., q (q)^8 (q^5)^4 = q + q^9 + ...
    assert_eq!(s.support().collect::<Vec<_>>(), vec![0, 1, 4, 8, 9]);
    let d = landau_check(100_000);
    assert!(d.strictly_decreasing());
    assert_eq!(d.checkpoints.len(), 4);
}

#[test]
fn regular_identities_hold_exactly() {
    let r = regular_relation_check(20_000);
    assert!(r.b5_identity.passed);
    assert!(r.b7_identity.passed);
    assert_eq!(r.residual_5_20, r.b5.ratio - r.b20.ratio / 4);
    assert!(r.b5.ratio_f64() <= 0.25 + 0.01 + 0.05);
}

#[test]
fn counts_are_reproducible() {
    let a = odd_density(TableKind::Regular { m: 5 }, 50_000);
    let b = odd_density(TableKind::Regular { m: 5 }, 50_000);
    assert_eq!(a, b);
}
