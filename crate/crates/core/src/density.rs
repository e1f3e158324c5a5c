//! Exact odd-coefficient counts for parity tables, with trend checkpoints.
//!
//! Every count is over `0 <= n < x`, so a horizon of `x` covers exactly `x`
//! coefficients and the ratio is `odd_count / x`.

use serde::{Serialize, Serializer};

use crate::arith::{fmt_rational, Rational};
use crate::certifier::{find_claim, numeric_verify, NumericOutcome};
use crate::f2series::F2Series;
use crate::partitions::{parity_table, TableKind};

fn ser_rational<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_rational(r))
}

fn ratio(count: u64, x: u64) -> Rational {
    Rational::new(count as i64, x as i64)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Checkpoint {
    pub x: u64,
    pub odd_count: u64,
    #[serde(serialize_with = "ser_rational")]
    pub ratio: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DensityEstimate {
    pub series: String,
    pub x: u64,
    pub odd_count: u64,
    #[serde(serialize_with = "ser_rational")]
    pub ratio: Rational,
    /// Counts at `x/10`, `x/4`, `x/2` and `x`, in that order.
    pub checkpoints: Vec<Checkpoint>,
}

impl DensityEstimate {
    fn from_series(series: String, s: &F2Series, x: u64) -> Self {
        let checkpoints: Vec<Checkpoint> = checkpoint_horizons(x)
            .into_iter()
            .map(|h| {
                let odd_count = s.count_ones_below(h as usize);
                Checkpoint {
                    x: h,
                    odd_count,
                    ratio: ratio(odd_count, h),
                }
            })
            .collect();
        let last = checkpoints.last().expect("x is a checkpoint");
        DensityEstimate {
            series,
            x,
            odd_count: last.odd_count,
            ratio: last.ratio,
            checkpoints,
        }
    }

    pub fn ratio_f64(&self) -> f64 {
        *self.ratio.numer() as f64 / *self.ratio.denom() as f64
    }

    /// True if the checkpoint ratios strictly decrease with the horizon.
    pub fn strictly_decreasing(&self) -> bool {
        self.checkpoints.windows(2).all(|w| w[1].ratio < w[0].ratio)
    }
}

fn checkpoint_horizons(x: u64) -> Vec<u64> {
    let mut hs: Vec<u64> = [x / 10, x / 4, x / 2, x]
        .into_iter()
        .filter(|h| *h > 0)
        .collect();
    hs.dedup();
    hs
}

/// Odd-coefficient count of `p_t` or `b_m` below `x`.
pub fn odd_density(kind: TableKind, x: u64) -> DensityEstimate {
    assert!(x >= 1, "horizon must be positive");
    let table = parity_table(kind, x as usize);
    DensityEstimate::from_series(kind.to_string(), table.series(), x)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConjectureRow {
    pub t: u64,
    /// `t = 2^k t0` with `t0` odd.
    pub k: u32,
    pub t0: u64,
    #[serde(serialize_with = "ser_rational")]
    pub predicted: Rational,
    pub estimate: DensityEstimate,
    #[serde(serialize_with = "ser_rational")]
    pub deviation: Rational,
}

/// Estimated `delta_t` next to the conjectured `2^{-k-1}` for each `t`.
pub fn conjecture_table(ts: &[u64], x: u64) -> Vec<ConjectureRow> {
    ts.iter()
        .map(|&t| {
            assert!(t >= 1, "t must be positive");
            let k = t.trailing_zeros();
            let predicted = Rational::new(1, 1i64 << (k + 1));
            let estimate = odd_density(TableKind::Multipartition { t }, x);
            let deviation = estimate.ratio - predicted;
            ConjectureRow {
                t,
                k,
                t0: t >> k,
                predicted,
                estimate,
                deviation,
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RegularRelationReport {
    pub x: u64,
    pub b5: DensityEstimate,
    pub b20: DensityEstimate,
    pub b7: DensityEstimate,
    pub b28: DensityEstimate,
    /// `delta[5] - delta[20] / 4`.
    #[serde(serialize_with = "ser_rational")]
    pub residual_5_20: Rational,
    /// `delta[7] - delta[28] / 2`.
    #[serde(serialize_with = "ser_rational")]
    pub residual_7_28: Rational,
    /// `b_5` against `(q)^4 + q (q)^8 (q^5)^4 + sum b_20(n) q^{4n+3}`.
    pub b5_identity: NumericOutcome,
    /// `b_7` against `(q)^6 + q (q)^2 (q^7)^4 + sum b_28(n) q^{2n+2}`.
    pub b7_identity: NumericOutcome,
}

pub fn regular_relation_check(x: u64) -> RegularRelationReport {
    let est = |m| odd_density(TableKind::Regular { m }, x);
    let (b5, b20, b7, b28) = (est(5), est(20), est(7), est(28));
    let residual_5_20 = b5.ratio - b20.ratio / 4;
    let residual_7_28 = b7.ratio - b28.ratio / 2;
    let identity =
        |id: &str| numeric_verify(&find_claim(id).expect("catalog identity"), x as usize);
    RegularRelationReport {
        x,
        residual_5_20,
        residual_7_28,
        b5_identity: identity("b5-b20"),
        b7_identity: identity("b7-b28"),
        b5,
        b20,
        b7,
        b28,
    }
}

/// `(q)^4 + q (q)^8 (q^5)^4` mod 2: both parts are supported on values of
/// binary quadratic forms, so the odd coefficients have density zero.
pub fn landau_series(x: u64) -> F2Series {
    let n = x as usize;
    let e = F2Series::euler(n);
    let fourth = e.pow(4).expect("unit constant term");
    let eighth = fourth.square().truncated(n);
    let fifth = e
        .inflate(5)
        .truncated(n)
        .pow(4)
        .expect("unit constant term");
    let second = eighth.mul(&fifth).shift(1).truncated(n);
    fourth.add(&second).expect("integral offsets").truncated(n)
}

pub fn landau_check(x: u64) -> DensityEstimate {
    assert!(x >= 1, "horizon must be positive");
    DensityEstimate::from_series("(q)^4 + q(q)^8(q^5)^4".into(), &landau_series(x), x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_partition_count() {
        let d = odd_density(TableKind::Multipartition { t: 1 }, 10);
        assert_eq!(d.odd_count, 7);
        assert_eq!(d.ratio, Rational::new(7, 10));
        assert_eq!(
            d.checkpoints.iter().map(|c| c.x).collect::<Vec<_>>(),
            vec![1, 2, 5, 10]
        );
    }

    #[test]
    fn landau_constant_term() {
        assert_eq!(landau_check(1).odd_count, 1);
    }

    #[test]
    fn predictions() {
        let rows = conjecture_table(&[1, 4, 6], 100);
        let preds: Vec<Rational> = rows.iter().map(|r| r.predicted).collect();
        assert_eq!(
            preds,
            vec![
                Rational::new(1, 2),
                Rational::new(1, 8),
                Rational::new(1, 4)
            ]
        );
        assert_eq!((rows[2].k, rows[2].t0), (1, 3));
    }
}
