//! Eta quotients `prod_{delta | N} eta(delta z)^{r_delta}`: modularity via the
//! Gordon–Hughes–Newman criterion, characters, cusps of `Gamma_0(N)`, Ligozat
//! cusp orders, and q-expansion mod 2.
//!
//! Text syntax (used by the CLI): factors `eta(d)^e` joined by `*`, with an
//! optional level suffix, e.g.
//! `eta(1)^10 * eta(2)^2 * eta(11)^11 * eta(22)^-22 @ N=44`.
//! A bare `eta(d)` means exponent 1; without `@ N=` the level is the lcm of
//! the arguments.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::arith::{self, divisors, gcd, lcm, Rational};
use crate::f2series::F2Series;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EtaError {
    #[error("eta({delta}) does not divide the level {level}")]
    NotADivisor { delta: u64, level: u64 },
    #[error("eta quotient has no nonzero exponent")]
    Trivial,
    #[error("level must be positive")]
    ZeroLevel,
    #[error("cannot parse eta quotient: {0}")]
    Parse(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EtaQuotient {
    level: u64,
    exps: BTreeMap<u64, i64>,
}

/// A cusp `c/d` of `Gamma_0(N)` with `d | N` and `gcd(c, d) = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Cusp {
    pub c: u64,
    pub d: u64,
}

impl fmt::Display for Cusp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.c, self.d)
    }
}

impl Cusp {
    /// Width of the cusp in `Gamma_0(level)`.
    pub fn width(&self, level: u64) -> u64 {
        level / gcd(self.d * self.d, level)
    }
}

/// Outcome of the Gordon–Hughes–Newman test.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModularityReport {
    pub is_form: bool,
    /// Twice the weight, `sum r_delta`.
    pub weight2: i64,
    /// Parity of the weight `k`; `None` for half-integral weight.
    pub char_k_odd: Option<bool>,
    /// Signed squarefree kernel of `(-1)^k s` with `s = prod delta^{r_delta}`.
    pub char_s_kernel: i64,
    /// `sum delta r_delta mod 24`.
    pub cond_a: i64,
    /// `sum (N/delta) r_delta mod 24`.
    pub cond_b: i64,
}

impl ModularityReport {
    pub fn trivial_character(&self) -> bool {
        self.weight2 % 2 == 0 && self.char_s_kernel == 1
    }

    /// Characters `(( (-1)^k s ) / d)` agree iff `k mod 2` and the kernel agree.
    pub fn same_character(&self, other: &ModularityReport) -> bool {
        self.char_k_odd == other.char_k_odd && self.char_s_kernel == other.char_s_kernel
    }
}

/// Enumerates one representative per cusp class of `Gamma_0(N)`: for each
/// `d | N`, residues `c` prime to `gcd(d, N/d)`, lifted to the smallest
/// nonnegative value coprime to `d`.
pub fn cusp_set(n: u64) -> Vec<Cusp> {
    assert!(n > 0, "cusp_set: level must be positive");
    let mut out = Vec::new();
    for d in divisors(n) {
        let g = gcd(d, n / d);
        for c0 in 0..g {
            if gcd(c0, g) != 1 {
                continue;
            }
            let mut c = c0;
            while gcd(c, d) != 1 {
                c += g;
            }
            out.push(Cusp { c, d });
        }
    }
    out
}

/// Number of cusps of `Gamma_0(N)`: `sum_{d | N} phi(gcd(d, N/d))`.
pub fn cusp_count(n: u64) -> u64 {
    divisors(n)
        .into_iter()
        .map(|d| arith::euler_phi(gcd(d, n / d)))
        .sum()
}

/// Index of `Gamma_0(N)` in `SL_2(Z)`.
pub fn gamma0_index(n: u64) -> u64 {
    arith::prime_divisors(n)
        .into_iter()
        .fold(n, |acc, p| acc / p * (p + 1))
}

impl EtaQuotient {
    pub fn new<I>(level: u64, exps: I) -> Result<Self, EtaError>
    where
        I: IntoIterator<Item = (u64, i64)>,
    {
        if level == 0 {
            return Err(EtaError::ZeroLevel);
        }
        let mut map = BTreeMap::new();
        for (delta, r) in exps {
            if delta == 0 || !level.is_multiple_of(delta) {
                return Err(EtaError::NotADivisor { delta, level });
            }
            *map.entry(delta).or_insert(0) += r;
        }
        map.retain(|_, r| *r != 0);
        if map.is_empty() {
            return Err(EtaError::Trivial);
        }
        Ok(EtaQuotient { level, exps: map })
    }

    /// Like [`EtaQuotient::new`] with the level set to the lcm of the arguments.
    pub fn from_exps<I>(exps: I) -> Result<Self, EtaError>
    where
        I: IntoIterator<Item = (u64, i64)>,
    {
        let exps: Vec<(u64, i64)> = exps.into_iter().collect();
        let level = exps
            .iter()
            .filter(|(_, r)| *r != 0)
            .fold(1, |acc, (d, _)| lcm(acc, (*d).max(1)));
        Self::new(level, exps)
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn exps(&self) -> &BTreeMap<u64, i64> {
        &self.exps
    }

    pub fn exponent(&self, delta: u64) -> i64 {
        self.exps.get(&delta).copied().unwrap_or(0)
    }

    pub fn with_level(&self, level: u64) -> Result<Self, EtaError> {
        Self::new(level, self.exps.iter().map(|(d, r)| (*d, *r)))
    }

    /// Product of two quotients, at the lcm of their levels.
    pub fn mul(&self, other: &EtaQuotient) -> Result<Self, EtaError> {
        let level = lcm(self.level, other.level);
        Self::new(
            level,
            self.exps
                .iter()
                .chain(other.exps.iter())
                .map(|(d, r)| (*d, *r)),
        )
    }

    /// `sum r_delta`, twice the weight.
    pub fn weight2(&self) -> i64 {
        self.exps.values().sum()
    }

    /// `sum delta r_delta`; the order at infinity is this over 24.
    pub fn sigma_inf(&self) -> i64 {
        self.exps.iter().map(|(d, r)| *d as i64 * r).sum()
    }

    fn sigma_zero_at(&self, level: u64) -> i64 {
        self.exps.iter().map(|(d, r)| (level / d) as i64 * r).sum()
    }

    pub fn ghn_check(&self) -> ModularityReport {
        let weight2 = self.weight2();
        let cond_a = self.sigma_inf().rem_euclid(24);
        let cond_b = self.sigma_zero_at(self.level).rem_euclid(24);
        let char_k_odd = (weight2 % 2 == 0).then(|| (weight2 / 2).rem_euclid(2) == 1);
        let sign = if char_k_odd == Some(true) { -1 } else { 1 };
        let kernel: i64 = arith::odd_prime_support(self.exps.iter().map(|(d, r)| (*d, *r)))
            .into_iter()
            .map(|p| p as i64)
            .product();
        ModularityReport {
            is_form: cond_a == 0 && cond_b == 0,
            weight2,
            char_k_odd,
            char_s_kernel: sign * kernel,
            cond_a,
            cond_b,
        }
    }

    /// Smallest multiple of the current level at which both GHN congruences
    /// hold, if any exists (it can only exist when `sum delta r_delta` is
    /// divisible by 24).
    pub fn min_level(&self) -> Option<u64> {
        let base = self.exps.keys().fold(1, |acc, d| lcm(acc, *d));
        let base = lcm(base, 1);
        (1..=24).map(|k| base * k).find(|&n| {
            self.sigma_inf().rem_euclid(24) == 0 && self.sigma_zero_at(n).rem_euclid(24) == 0
        })
    }

    /// Ligozat's order of vanishing at the cusp `c/d` of `Gamma_0(N)`:
    /// `(N/24) sum gcd(d, delta)^2 r_delta / (gcd(d, N/d) d delta)`.
    /// Meaningful when the GHN conditions hold at this level.
    pub fn ligozat_order(&self, cusp: &Cusp) -> Rational {
        let n = self.level;
        let d = cusp.d;
        assert!(
            n.is_multiple_of(d),
            "cusp denominator {d} does not divide level {n}"
        );
        let g = gcd(d, n / d) as i64;
        let mut acc = Rational::from_integer(0);
        for (&delta, &r) in &self.exps {
            let gd = gcd(d, delta) as i64;
            acc += Rational::new(gd * gd * r, g * d as i64 * delta as i64);
        }
        acc * Rational::new(n as i64, 24)
    }

    /// Groups factors by odd part: mod 2, `prod_i eta(2^i o z)^{r_i}` has the
    /// same q-series as `(q^o; q^o)^{sum_i 2^i r_i}` times the prefactor.
    pub fn two_adic_collapse(&self) -> BTreeMap<u64, i64> {
        let mut out = BTreeMap::new();
        for (&delta, &r) in &self.exps {
            let v = delta.trailing_zeros();
            *out.entry(delta >> v).or_insert(0) += r << v;
        }
        out.retain(|_, r| *r != 0);
        out
    }

    /// Whether two quotients have identical q-expansions mod 2.
    pub fn mod2_equivalent(&self, other: &EtaQuotient) -> bool {
        self.two_adic_collapse() == other.two_adic_collapse()
    }

    /// Multiplies by `(eta(delta z)^2 / eta(2 delta z))^k`, which is `1` mod 2.
    pub fn times_unit(&self, delta: u64, k: i64) -> Result<Self, EtaError> {
        let level = lcm(self.level, 2 * delta);
        Self::new(
            level,
            self.exps
                .iter()
                .map(|(d, r)| (*d, *r))
                .chain([(delta, 2 * k), (2 * delta, -k)]),
        )
    }

    /// q-expansion mod 2 with `offset24 = sum delta r_delta`, known for
    /// relative exponents `< trunc`.
    pub fn expand(&self, trunc: usize) -> F2Series {
        let trunc = trunc.max(1);
        let mut factors: Vec<F2Series> = self
            .two_adic_collapse()
            .into_iter()
            .map(|(o, n)| F2Series::eta_power(o, n, trunc))
            .collect();
        // every factor has constant term 1, so order does not affect horizons
        factors.sort_by_key(|f| f.count_ones());
        let mut acc = F2Series::one(trunc);
        for f in &factors {
            acc = acc.mul(f);
        }
        let collapsed_offset: i64 = factors.iter().map(|f| f.offset24()).sum();
        debug_assert_eq!(collapsed_offset, self.sigma_inf());
        F2Series::from_words(acc.words().to_vec(), acc.trunc(), self.sigma_inf())
    }
}

impl fmt::Display for EtaQuotient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .exps
            .iter()
            .map(|(d, r)| {
                if *r == 1 {
                    format!("eta({d})")
                } else {
                    format!("eta({d})^{r}")
                }
            })
            .collect();
        write!(f, "{} @ N={}", parts.join(" * "), self.level)
    }
}

impl FromStr for EtaQuotient {
    type Err = EtaError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let (body, level) = match compact.split_once('@') {
            Some((body, lvl)) => {
                let lvl = lvl
                    .strip_prefix("N=")
                    .ok_or_else(|| EtaError::Parse(format!("expected `N=` after `@` in {s:?}")))?;
                let lvl: u64 = lvl
                    .parse()
                    .map_err(|_| EtaError::Parse(format!("bad level {lvl:?}")))?;
                (body, Some(lvl))
            }
            None => (compact.as_str(), None),
        };
        let mut exps = Vec::new();
        for factor in body.split('*') {
            let rest = factor
                .strip_prefix("eta(")
                .ok_or_else(|| EtaError::Parse(format!("expected `eta(` in {factor:?}")))?;
            let (arg, tail) = rest
                .split_once(')')
                .ok_or_else(|| EtaError::Parse(format!("unclosed `eta(` in {factor:?}")))?;
            let delta: u64 = arg
                .parse()
                .map_err(|_| EtaError::Parse(format!("bad argument {arg:?}")))?;
            let r: i64 = if tail.is_empty() {
                1
            } else {
                let e = tail
                    .strip_prefix('^')
                    .ok_or_else(|| EtaError::Parse(format!("unexpected {tail:?}")))?;
                let e = e.trim_start_matches('(').trim_end_matches(')');
                e.parse()
                    .map_err(|_| EtaError::Parse(format!("bad exponent {e:?}")))?
            };
            exps.push((delta, r));
        }
        match level {
            Some(n) => EtaQuotient::new(n, exps),
            None => EtaQuotient::from_exps(exps),
        }
    }
}
