//! Rewrites an eta quotient mod 2 into a weight-zero modular function.
//!
//! `U_delta = eta(delta z)^2 / eta(2 delta z)` is `1` mod 2, has weight 1/2,
//! leaves `sum delta r_delta` unchanged and shifts `sum (N/delta) r_delta`.
//! Multiplying by `prod U_delta^{k_delta}` with `sum k_delta` equal to the
//! weight deficit gives weight zero; the search picks, among all such `k`
//! satisfying both GHN congruences, one with trivial character if possible,
//! then the smallest pole-clearing requirement, then the lexicographically
//! first `k` (ascending `delta`).

use std::collections::BTreeMap;

use thiserror::Error;

use crate::arith::{self, divisors, gcd};
use crate::etaquot::{EtaQuotient, ModularityReport};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NormalizeError {
    #[error("level {0} must be even and a multiple of the quotient's level")]
    BadLevel(u64),
    #[error("weight 2k = {0} is positive; only nonpositive weights can be raised to zero")]
    PositiveWeight(i64),
    #[error("sum delta r_delta = {0} is not divisible by 24")]
    OrderAtInfinity(i64),
    #[error("{0} candidate multipliers exceed the search cap {1}")]
    SearchTooLarge(u128, u128),
    #[error("no multiplier satisfies the modularity congruences at level {0}")]
    NoCandidate(u64),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Normalized {
    pub quotient: EtaQuotient,
    /// Exponent `k_delta` of each unit `U_delta` used (nonzero entries only).
    pub units: BTreeMap<u64, i64>,
    pub report: ModularityReport,
    /// Least `j` for which `eta(4z)^{24 j}` clears this term's poles alone.
    pub clearing_requirement: u64,
}

/// Default bound on the number of multiplier vectors examined.
pub const DEFAULT_SEARCH_CAP: u128 = 50_000_000;

fn binomial(n: u128, k: u128) -> u128 {
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
}

struct Search {
    level: u64,
    /// `sum (L/delta) r_delta`.
    zero_sum: i64,
    /// Per prime of `L`, the exponent of `p` in `prod delta^{r_delta}`.
    prime_exps: Vec<i64>,
    /// Per divisor `d`, `24 gcd(d, L/d) d` times the Ligozat order.
    orders: Vec<i64>,
    clear_orders: Vec<i64>,
    step_zero: Vec<i64>,
    step_primes: Vec<Vec<i64>>,
    step_orders: Vec<Vec<i64>>,
    k: Vec<i64>,
    best: Option<((bool, u64), Vec<i64>)>,
}

impl Search {
    fn evaluate(&mut self) {
        if self.zero_sum.rem_euclid(24) != 0 {
            return;
        }
        let nontrivial = self.prime_exps.iter().any(|e| e.rem_euclid(2) == 1);
        let need = requirement(&self.orders, &self.clear_orders);
        let key = (nontrivial, need);
        if self.best.as_ref().is_none_or(|(b, _)| key < *b) {
            self.best = Some((key, self.k.clone()));
        }
    }

    fn apply(&mut self, i: usize, times: i64) {
        self.zero_sum += times * self.step_zero[i];
        for (e, s) in self.prime_exps.iter_mut().zip(&self.step_primes[i]) {
            *e += times * s;
        }
        for (o, s) in self.orders.iter_mut().zip(&self.step_orders[i]) {
            *o += times * s;
        }
        self.k[i] += times;
    }

    fn run(&mut self, i: usize, remaining: i64) {
        let last = self.k.len() - 1;
        if i == last {
            self.apply(i, remaining);
            self.evaluate();
            self.apply(i, -remaining);
            return;
        }
        for used in 0..=remaining {
            self.run(i + 1, remaining - used);
            if used < remaining {
                self.apply(i, 1);
            }
        }
        self.apply(i, -remaining);
    }
}

fn requirement(orders: &[i64], clear: &[i64]) -> u64 {
    orders
        .iter()
        .zip(clear)
        .filter(|(o, _)| **o < 0)
        .map(|(o, c)| ((-o + c - 1) / c) as u64)
        .max()
        .unwrap_or(0)
}

/// Scaled Ligozat numerators `sum_delta gcd(d, delta)^2 (L/delta) r_delta`
/// for each `d | L`; the order is this over `24 gcd(d, L/d) d`.
fn order_numerators(level: u64, exps: &BTreeMap<u64, i64>, cusps: &[u64]) -> Vec<i64> {
    cusps
        .iter()
        .map(|&d| {
            exps.iter()
                .map(|(&delta, &r)| {
                    let g = gcd(d, delta) as i64;
                    g * g * (level / delta) as i64 * r
                })
                .sum()
        })
        .collect()
}

pub fn normalize(e: &EtaQuotient, level: u64) -> Result<Normalized, NormalizeError> {
    normalize_with_cap(e, level, DEFAULT_SEARCH_CAP)
}

pub fn normalize_with_cap(
    e: &EtaQuotient,
    level: u64,
    cap: u128,
) -> Result<Normalized, NormalizeError> {
    if !level.is_multiple_of(2) || !level.is_multiple_of(e.level()) {
        return Err(NormalizeError::BadLevel(level));
    }
    let e = e
        .with_level(level)
        .map_err(|_| NormalizeError::BadLevel(level))?;
    let deficit = -e.weight2();
    if deficit < 0 {
        return Err(NormalizeError::PositiveWeight(e.weight2()));
    }
    if e.sigma_inf() % 24 != 0 {
        return Err(NormalizeError::OrderAtInfinity(e.sigma_inf()));
    }
    let vars = divisors(level / 2);
    let count = binomial(
        deficit as u128 + vars.len() as u128 - 1,
        vars.len() as u128 - 1,
    );
    if count > cap {
        return Err(NormalizeError::SearchTooLarge(count, cap));
    }
    let cusps = divisors(level);
    let primes = arith::prime_divisors(level);
    let vp = |p: u64, mut d: u64| {
        let mut v = 0i64;
        while d.is_multiple_of(p) {
            d /= p;
            v += 1;
        }
        v
    };
    let clear = {
        let delta4: BTreeMap<u64, i64> = [(4, 24)].into_iter().collect();
        order_numerators(level, &delta4, &cusps)
    };
    let mut search = Search {
        level,
        zero_sum: e.exps().iter().map(|(d, r)| (level / d) as i64 * r).sum(),
        prime_exps: primes
            .iter()
            .map(|&p| e.exps().iter().map(|(d, r)| vp(p, *d) * r).sum())
            .collect(),
        orders: order_numerators(level, e.exps(), &cusps),
        clear_orders: clear,
        step_zero: vars
            .iter()
            .map(|&v| 2 * (level / v) as i64 - (level / (2 * v)) as i64)
            .collect(),
        step_primes: vars
            .iter()
            .map(|&v| {
                primes
                    .iter()
                    .map(|&p| 2 * vp(p, v) - vp(p, 2 * v))
                    .collect()
            })
            .collect(),
        step_orders: vars
            .iter()
            .map(|&v| {
                let unit: BTreeMap<u64, i64> = [(v, 2), (2 * v, -1)].into_iter().collect();
                order_numerators(level, &unit, &cusps)
            })
            .collect(),
        k: vec![0; vars.len()],
        best: None,
    };
    search.run(0, deficit);
    let Some(((_, need), k)) = search.best.take() else {
        return Err(NormalizeError::NoCandidate(search.level));
    };
    let mut quotient = e.clone();
    let mut units = BTreeMap::new();
    for (&v, &kv) in vars.iter().zip(&k) {
        if kv != 0 {
            quotient = quotient
                .times_unit(v, kv)
                .and_then(|q| q.with_level(level))
                .map_err(|_| NormalizeError::BadLevel(level))?;
            units.insert(v, kv);
        }
    }
    let report = quotient.ghn_check();
    debug_assert!(report.is_form && report.weight2 == 0);
    Ok(Normalized {
        quotient,
        units,
        report,
        clearing_requirement: need,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn already_normal_is_kept() {
        let e = EtaQuotient::new(22, [(1, 10), (2, 2), (11, 10), (22, -22)]).unwrap();
        let n = normalize(&e, 44).unwrap();
        assert!(n.units.is_empty());
        assert_eq!(n.quotient.exps(), e.exps());
        assert!(n.report.is_form);
    }

    #[test]
    fn raises_weight_to_zero() {
        // s * eta(z)^-5 for s = (4, 2, 5, -10) at level 20
        let e = EtaQuotient::new(10, [(1, -1), (2, 2), (5, 5), (10, -10)]).unwrap();
        let n = normalize(&e, 20).unwrap();
        assert_eq!(n.report.weight2, 0);
        assert!(n.report.is_form);
        assert!(n.report.trivial_character());
        assert!(n.quotient.mod2_equivalent(&e));
        assert_eq!(n.units.values().sum::<i64>(), 4);
    }

    #[test]
    fn rejects_bad_inputs() {
        let e = EtaQuotient::new(1, [(1, 1)]).unwrap();
        assert_eq!(normalize(&e, 4), Err(NormalizeError::PositiveWeight(1)));
        let f = EtaQuotient::new(1, [(1, -1)]).unwrap();
        assert_eq!(normalize(&f, 4), Err(NormalizeError::OrderAtInfinity(-1)));
        assert_eq!(normalize(&f, 3), Err(NormalizeError::BadLevel(3)));
        let g = EtaQuotient::new(2, [(1, -48)]).unwrap();
        assert!(matches!(
            normalize_with_cap(&g, 4, 10),
            Err(NormalizeError::SearchTooLarge(..))
        ));
    }
}
