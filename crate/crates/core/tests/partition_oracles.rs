use parity_core::partitions::{multipartition_parity, partition_parity, regular_parity};
use parity_core::{parity_table, F2Series, TableKind};

/// Counts t-colored partitions of 0..=n exactly: one geometric factor
/// `1/(1 - q^k)` per part size and color.
fn colored_partition_counts(t: u64, n: usize) -> Vec<u128> {
    let mut c = vec![0u128; n + 1];
    c[0] = 1;
    for k in 1..=n {
        for _ in 0..t {
            for i in k..=n {
                c[i] += c[i - k];
            }
        }
    }
    c
}

/// Partitions of 0..=n with no part divisible by m.
fn regular_counts(m: usize, n: usize) -> Vec<u128> {
    let mut c = vec![0u128; n + 1];
    c[0] = 1;
    for k in (1..=n).filter(|k| k % m != 0) {
        for i in k..=n {
            c[i] += c[i - k];
        }
    }
    c
}

/// Partitions of `n` into parts of size at most `max`, by explicit recursion.
fn enumerate(n: usize, max: usize) -> u128 {
    if n == 0 {
        return 1;
    }
    (1..=max.min(n)).map(|k| enumerate(n - k, k)).sum()
}

#[test]
fn multipartitions_match_exact_counts() {
    for t in 1..=5u64 {
        let want = colored_partition_counts(t, 60);
        let table = multipartition_parity(t, 61);
        for (n, w) in want.iter().enumerate() {
            assert_eq!(table.is_odd(n), w % 2 == 1, "p_{t}({n}) = {w}");
        }
    }
}

#[test]
fn partition_counts_by_enumeration() {
    let dp = colored_partition_counts(1, 40);
    for (n, &count) in dp.iter().enumerate() {
        assert_eq!(enumerate(n, n), count);
    }
    assert_eq!(dp[40], 37338);
    let table = partition_parity(41);
    for (n, c) in dp.iter().enumerate() {
        assert_eq!(table.is_odd(n), c % 2 == 1);
    }
}

#[test]
fn regular_partitions_match_exact_counts() {
    for m in [2usize, 3, 5, 7, 13, 20, 28] {
        let want = regular_counts(m, 200);
        let table = regular_parity(m as u64, 201);
        for (n, w) in want.iter().enumerate() {
            assert_eq!(table.is_odd(n), w % 2 == 1, "b_{m}({n})");
        }
    }
}

#[test]
fn pentagonal_recurrence_equals_inversion() {
    let x = 100_000;
    let recurrence = partition_parity(x);
    let inverted = F2Series::euler(x).inv().unwrap();
    assert_eq!(recurrence.series().trunc(), x);
    assert_eq!(recurrence.series().words(), inverted.words());
    assert_eq!(
        parity_table(TableKind::Multipartition { t: 1 }, x)
            .series()
            .words(),
        inverted.words()
    );
}

#[test]
fn doubled_colors_are_frobenius_images() {
    let x = 4000;
    let p1 = multipartition_parity(1, x / 2);
    let p2 = multipartition_parity(2, x);
    let p3 = multipartition_parity(3, x / 4);
    let p12 = multipartition_parity(12, x);
    for n in 0..x {
        assert_eq!(p2.is_odd(n), n % 2 == 0 && p1.is_odd(n / 2));
        assert_eq!(p12.is_odd(n), n % 4 == 0 && p3.is_odd(n / 4));
    }
}

#[test]
fn run_length_text_reads_back() {
    let table = partition_parity(500);
    let text = table.rle_text();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# p_1 x=500"));
    let runs: Vec<usize> = lines
        .next()
        .unwrap()
        .split_whitespace()
        .map(|r| r.parse().unwrap())
        .collect();
    let mut bits = Vec::new();
    let mut odd = true;
    for r in runs {
        bits.extend(std::iter::repeat_n(odd, r));
        odd = !odd;
    }
    assert_eq!(bits, (0..500).map(|n| table.is_odd(n)).collect::<Vec<_>>());
    let raw = table.raw_bytes();
    assert_eq!(raw.len(), 500usize.div_ceil(64) * 8);
    assert_eq!(raw[0] & 1, 1);
}
