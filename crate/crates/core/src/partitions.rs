//! Parity tables for `p(n)`, `p_t(n)` and the `m`-regular counts `b_m(n)`.

use std::fmt;

use serde::Serialize;

use crate::f2series::{generalized_pentagonals, F2Series};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TableKind {
    /// `t`-colored partitions, `sum p_t(n) q^n = 1/(q;q)^t`.
    Multipartition { t: u64 },
    /// Partitions with no part divisible by `m`, `(q^m;q^m)/(q;q)`.
    Regular { m: u64 },
}

impl fmt::Display for TableKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TableKind::Multipartition { t } => write!(f, "p_{t}"),
            TableKind::Regular { m } => write!(f, "b_{m}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParityTable {
    kind: TableKind,
    bits: F2Series,
}

impl ParityTable {
    pub fn kind(&self) -> TableKind {
        self.kind
    }

    pub fn x(&self) -> usize {
        self.bits.trunc()
    }

    /// Whether the count at `n` is odd. Panics if `n >= x`.
    pub fn is_odd(&self, n: usize) -> bool {
        assert!(n < self.x(), "index {n} beyond table horizon {}", self.x());
        self.bits.bit(n)
    }

    pub fn series(&self) -> &F2Series {
        &self.bits
    }

    pub fn into_series(self) -> F2Series {
        self.bits
    }

    /// Number of `n < limit` with an odd count.
    pub fn odd_count_below(&self, limit: usize) -> u64 {
        self.bits.count_ones_below(limit)
    }

    /// Packed little-endian 64-bit words, bit `n` of the table at bit
    /// `n mod 64` of word `n / 64`.
    pub fn raw_bytes(&self) -> Vec<u8> {
        self.bits.packed_bytes(self.x())
    }

    /// Run-length text: a header line, then alternating run lengths starting
    /// with a run of odd values (`p(0) = 1` for every kind).
    pub fn rle_text(&self) -> String {
        let mut runs = Vec::new();
        let mut current = true;
        let mut len = 0usize;
        for n in 0..self.x() {
            if self.bits.bit(n) == current {
                len += 1;
            } else {
                runs.push(len);
                current = !current;
                len = 1;
            }
        }
        runs.push(len);
        let body: Vec<String> = runs.iter().map(|r| r.to_string()).collect();
        format!(
            "# {} x={} runs from odd\n{}\n",
            self.kind,
            self.x(),
            body.join(" ")
        )
    }
}

fn check_x(x: usize) {
    assert!(x >= 1, "parity table horizon must be at least 1");
}

/// Parity of `p(n)` for `n < x` by the pentagonal recurrence
/// `p(n) = sum_k p(n - g_k)` over generalized pentagonal `g_k` (signs vanish
/// mod 2). Independent of the series inversion code path.
pub fn partition_parity(x: usize) -> ParityTable {
    check_x(x);
    let pent: Vec<usize> = generalized_pentagonals(x).into_iter().skip(1).collect();
    let mut p = vec![0u8; x];
    p[0] = 1;
    for n in 1..x {
        let mut acc = 0u8;
        for &g in &pent {
            if g > n {
                break;
            }
            acc ^= p[n - g];
        }
        p[n] = acc;
    }
    let ones = p
        .iter()
        .enumerate()
        .filter(|(_, &v)| v == 1)
        .map(|(n, _)| n);
    ParityTable {
        kind: TableKind::Multipartition { t: 1 },
        bits: F2Series::from_exponents(ones, x, 0),
    }
}

/// Parity of `p_t(n)` for `n < x`, as `(q;q)^{-t}` mod 2.
pub fn multipartition_parity(t: u64, x: usize) -> ParityTable {
    check_x(x);
    assert!(t >= 1, "multipartition count needs t >= 1");
    let bits = F2Series::euler(x)
        .pow(-(t as i64))
        .expect("euler product has constant term 1");
    ParityTable {
        kind: TableKind::Multipartition { t },
        bits,
    }
}

/// Parity of `b_m(n)` for `n < x`, as `(q^m;q^m)/(q;q)` mod 2.
pub fn regular_parity(m: u64, x: usize) -> ParityTable {
    check_x(x);
    assert!(m >= 2, "regular partitions need m >= 2");
    let inv = F2Series::euler(x)
        .inv()
        .expect("euler product has constant term 1");
    let num = F2Series::euler(x.div_ceil(m as usize)).inflate(m);
    ParityTable {
        kind: TableKind::Regular { m },
        bits: inv.mul(&num).truncated(x),
    }
}

/// Builds the table for any [`TableKind`].
pub fn parity_table(kind: TableKind, x: usize) -> ParityTable {
    match kind {
        TableKind::Multipartition { t: 1 } => partition_parity(x),
        TableKind::Multipartition { t } => multipartition_parity(t, x),
        TableKind::Regular { m } => regular_parity(m, x),
    }
}
