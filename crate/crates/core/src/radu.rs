//! Radu's construction of weight-zero modular functions from arithmetic
//! progressions of eta-quotient coefficients: the admissible set `Delta*`,
//! the residue orbit `P_{m,r}(t)`, the root of unity `chi = exp(nu/24)`,
//! the four modularity conditions on the multiplier `s`, and the lower bound
//! on cusp orders.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::arith::{self, divisors, gcd, Rational};
use crate::etaquot::EtaQuotient;
use crate::f2series::F2Series;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RaduError {
    #[error("invalid tuple: {0}")]
    InvalidTuple(String),
    #[error("nu is not an integer: {0}")]
    NonIntegralNu(String),
    #[error("tuple is not in Delta*: {0}")]
    NotAdmissible(String),
}

/// `(m, M, N, t, r)` with `r` indexed by the divisors of `M`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RaduTuple {
    pub m: u64,
    #[serde(rename = "M")]
    pub big_m: u64,
    #[serde(rename = "N")]
    pub n: u64,
    pub t: u64,
    pub r: BTreeMap<u64, i64>,
}

/// Multiplier exponents `s_delta` indexed by the divisors of `N`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct SVector {
    #[serde(rename = "N")]
    pub n: u64,
    pub s: BTreeMap<u64, i64>,
}

impl fmt::Display for SVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<String> = self.s.values().map(|x| x.to_string()).collect();
        write!(f, "({})", v.join(","))
    }
}

impl SVector {
    /// Builds `s` from values listed in ascending divisor order.
    pub fn from_values(n: u64, values: &[i64]) -> Result<Self, RaduError> {
        let divs = divisors(n);
        if divs.len() != values.len() {
            return Err(RaduError::InvalidTuple(format!(
                "{} has {} divisors but {} values were given",
                n,
                divs.len(),
                values.len()
            )));
        }
        Ok(SVector {
            n,
            s: divs.into_iter().zip(values.iter().copied()).collect(),
        })
    }

    pub fn zero(n: u64) -> Self {
        SVector {
            n,
            s: divisors(n).into_iter().map(|d| (d, 0)).collect(),
        }
    }

    pub fn values(&self) -> Vec<i64> {
        self.s.values().copied().collect()
    }

    pub fn weight2(&self) -> i64 {
        self.s.values().sum()
    }

    pub fn sigma_inf(&self) -> i64 {
        self.s.iter().map(|(d, x)| *d as i64 * x).sum()
    }

    pub fn sigma_zero(&self) -> i64 {
        self.s.iter().map(|(d, x)| (self.n / d) as i64 * x).sum()
    }

    /// The same multiplier viewed at a multiple `level` of `N` (new entries 0).
    pub fn lifted(&self, level: u64) -> Result<Self, RaduError> {
        if !level.is_multiple_of(self.n) {
            return Err(RaduError::InvalidTuple(format!(
                "level {level} is not a multiple of {}",
                self.n
            )));
        }
        let mut s = SVector::zero(level);
        for (d, x) in &self.s {
            s.s.insert(*d, *x);
        }
        Ok(s)
    }

    pub fn as_eta_quotient(&self) -> Option<EtaQuotient> {
        EtaQuotient::new(self.n, self.s.iter().map(|(d, x)| (*d, *x))).ok()
    }
}

/// Clause-by-clause membership test for `Delta*`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeltaStarReport {
    pub kappa: u64,
    pub prime_support: bool,
    pub r_support: bool,
    pub sigma0_clause: bool,
    pub weight_clause: bool,
    pub t_clause: bool,
    /// Only evaluated for even `m`.
    pub even_m_clause: Option<bool>,
}

impl DeltaStarReport {
    pub fn passes(&self) -> bool {
        self.prime_support
            && self.r_support
            && self.sigma0_clause
            && self.weight_clause
            && self.t_clause
            && self.even_m_clause.unwrap_or(true)
    }

    fn failures(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        for (ok, name) in [
            (self.prime_support, "prime_support"),
            (self.r_support, "r_support"),
            (self.sigma0_clause, "sigma0_clause"),
            (self.weight_clause, "weight_clause"),
            (self.t_clause, "t_clause"),
            (self.even_m_clause.unwrap_or(true), "even_m_clause"),
        ] {
            if !ok {
                out.push(name);
            }
        }
        out
    }
}

/// The four conditions for `prod eta(delta z)^{s_delta} * prod g_{m,u}` to be
/// a weight-zero modular function with trivial character on `Gamma_0(N)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModularityConditions {
    pub weight: bool,
    pub order_at_infinity: bool,
    pub order_at_zero: bool,
    pub square: bool,
}

impl ModularityConditions {
    pub fn passes(&self) -> bool {
        self.weight && self.order_at_infinity && self.order_at_zero && self.square
    }
}

impl RaduTuple {
    pub fn new(m: u64, big_m: u64, n: u64, t: u64, r: &[(u64, i64)]) -> Result<Self, RaduError> {
        if m == 0 || big_m == 0 || n == 0 {
            return Err(RaduError::InvalidTuple("m, M, N must be positive".into()));
        }
        if t >= m {
            return Err(RaduError::InvalidTuple(format!("t = {t} not in [0, {m})")));
        }
        let mut map: BTreeMap<u64, i64> = divisors(big_m).into_iter().map(|d| (d, 0)).collect();
        for &(d, x) in r {
            match map.get_mut(&d) {
                Some(v) => *v += x,
                None => {
                    return Err(RaduError::InvalidTuple(format!(
                        "{d} does not divide M = {big_m}"
                    )))
                }
            }
        }
        Ok(RaduTuple {
            m,
            big_m,
            n,
            t,
            r: map,
        })
    }

    /// The same tuple with `N` replaced by a multiple.
    pub fn lifted(&self, level: u64) -> Result<Self, RaduError> {
        if !level.is_multiple_of(self.n) {
            return Err(RaduError::InvalidTuple(format!(
                "level {level} is not a multiple of N = {}",
                self.n
            )));
        }
        Ok(RaduTuple {
            n: level,
            ..self.clone()
        })
    }

    pub fn weight2(&self) -> i64 {
        self.r.values().sum()
    }

    pub fn sigma_inf(&self) -> i64 {
        self.r.iter().map(|(d, x)| *d as i64 * x).sum()
    }

    pub fn sigma_zero(&self) -> i64 {
        self.r
            .iter()
            .map(|(d, x)| (self.big_m / d) as i64 * x)
            .sum()
    }

    pub fn kappa(&self) -> u64 {
        let m = self.m as i64;
        gcd((1 - m * m).unsigned_abs(), 24)
    }

    pub fn delta_star_check(&self) -> DeltaStarReport {
        let (m, big_m, n) = (self.m as i64, self.big_m as i64, self.n as i64);
        let kappa = self.kappa();
        let k = kappa as i64;
        let prime_support = arith::prime_divisors(self.m)
            .into_iter()
            .all(|p| self.n.is_multiple_of(p));
        let r_support = self
            .r
            .iter()
            .all(|(d, x)| *x == 0 || (self.m * self.n).is_multiple_of(*d));
        let sigma0_clause = (k * m * n * n * self.sigma_zero()) % (24 * big_m) == 0;
        let weight_clause = (k * n * self.weight2()) % 8 == 0;
        let g = gcd(
            (k * (-24 * self.t as i64 - self.sigma_inf())).unsigned_abs(),
            24 * self.m,
        );
        let t_clause = self.n.is_multiple_of(24 * self.m / g);
        let even_m_clause = self.m.is_multiple_of(2).then(|| {
            // prod_{delta | M} delta^{|r_delta|} = 2^e j with j odd
            let mut e2: i64 = 0;
            let mut j_mod8: i64 = 1;
            for (d, x) in &self.r {
                let v = d.trailing_zeros() as i64;
                let odd = (d >> v) as i64;
                e2 += v * x.abs();
                for _ in 0..x.abs() {
                    j_mod8 = (j_mod8 * odd) % 8;
                }
            }
            ((k * n) % 4 == 0 && (n * e2) % 8 == 0)
                || (e2 % 2 == 0 && (n * (1 - j_mod8)).rem_euclid(8) == 0)
        });
        DeltaStarReport {
            kappa,
            prime_support,
            r_support,
            sigma0_clause,
            weight_clause,
            t_clause,
            even_m_clause,
        }
    }

    /// `P_{m,r}(t)`: the residues `[t a^2 + (a^2 - 1) sigma_inf(r) / 24]_m`
    /// over `1 <= a <= 24m` with `gcd(a, 6) = gcd(a, M) = 1`.
    pub fn p_set(&self) -> Vec<u64> {
        let m = self.m as i128;
        let sinf = self.sigma_inf() as i128;
        let mut out: Vec<u64> = (1..=24 * self.m)
            .filter(|a| gcd(*a, 6) == 1 && gcd(*a, self.big_m) == 1)
            .map(|a| {
                let a2 = (a as i128) * (a as i128);
                ((self.t as i128 * a2 + (a2 - 1) / 24 * sinf).rem_euclid(m)) as u64
            })
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// `nu mod 24` with `chi_{m,r}(t) = exp(2 pi i nu / 24)`, canonical in `[0, 24)`.
    pub fn nu(&self) -> Result<i64, RaduError> {
        let m = self.m as i64;
        let mut total = Rational::from_integer(0);
        for u in self.p_set() {
            total += Rational::new((1 - m * m) * (24 * u as i64 + self.sigma_inf()), m);
        }
        if !total.is_integer() {
            return Err(RaduError::NonIntegralNu(arith::fmt_rational(&total)));
        }
        Ok(total.to_integer().rem_euclid(24))
    }

    fn require_admissible(&self) -> Result<(), RaduError> {
        let rep = self.delta_star_check();
        if rep.passes() {
            Ok(())
        } else {
            Err(RaduError::NotAdmissible(rep.failures().join(", ")))
        }
    }

    fn check_s_level(&self, s: &SVector) -> Result<(), RaduError> {
        if s.n != self.n {
            return Err(RaduError::InvalidTuple(format!(
                "s is indexed by divisors of {} but N = {}",
                s.n, self.n
            )));
        }
        Ok(())
    }

    pub fn theorem45_check(&self, s: &SVector) -> Result<ModularityConditions, RaduError> {
        self.require_admissible()?;
        self.check_s_level(s)?;
        let nu = self.nu()?;
        Ok(self.conditions_with(nu, self.p_set().len() as i64, s))
    }

    fn conditions_with(&self, nu: i64, p: i64, s: &SVector) -> ModularityConditions {
        let (m, n, big_m) = (self.m as i64, self.n as i64, self.big_m as i64);
        let weight = p * self.weight2() + s.weight2() == 0;
        let order_at_infinity = (nu + p * m * self.sigma_inf() + s.sigma_inf()).rem_euclid(24) == 0;
        let zero_r = p * m * n * self.sigma_zero();
        let order_at_zero =
            zero_r % big_m == 0 && (zero_r / big_m + s.sigma_zero()).rem_euclid(24) == 0;
        let factors = self
            .r
            .iter()
            .map(|(d, x)| (self.m * d, x.abs() * p))
            .chain(s.s.iter().map(|(d, x)| (*d, *x)));
        let square = arith::odd_prime_support(factors).is_empty();
        ModularityConditions {
            weight,
            order_at_infinity,
            order_at_zero,
            square,
        }
    }

    /// First `s` with every entry in `[-bound, bound]`, in lexicographic order
    /// over ascending divisors of `N`, that satisfies all four conditions.
    pub fn search_s_vector(&self, bound: i64) -> Result<Option<SVector>, RaduError> {
        self.require_admissible()?;
        let nu = self.nu()?;
        let p = self.p_set().len() as i64;
        let divs = divisors(self.n);
        let k = divs.len();
        // the weight condition fixes the last coordinate
        let target = -p * self.weight2();
        let mut vals = vec![-bound; k - 1];
        loop {
            let last = target - vals.iter().sum::<i64>();
            if last.abs() <= bound {
                let mut all = vals.clone();
                all.push(last);
                let s = SVector::from_values(self.n, &all)?;
                if self.conditions_with(nu, p, &s).passes() {
                    return Ok(Some(s));
                }
            }
            // odometer increment, last position fastest
            let mut i = k - 1;
            loop {
                if i == 0 {
                    return Ok(None);
                }
                i -= 1;
                if vals[i] < bound {
                    vals[i] += 1;
                    for v in vals.iter_mut().skip(i + 1) {
                        *v = -bound;
                    }
                    break;
                }
            }
        }
    }

    /// The bracketed quantity of Radu's lower bound, for each `c | N`:
    /// `N/gcd(c^2, N) * (|P| min_{d | m, gcd(d,c)=1} (1/24) sum_{delta | M}
    /// r_delta gcd(delta d, m c)^2 / (delta m) + (1/24) sum_{delta | N}
    /// s_delta gcd(delta, c)^2 / delta)`.
    pub fn radu47_by_divisor(&self, s: &SVector) -> Result<BTreeMap<u64, Rational>, RaduError> {
        self.check_s_level(s)?;
        let p = self.p_set().len() as i64;
        let mut out = BTreeMap::new();
        for c in divisors(self.n) {
            let inner = divisors(self.m)
                .into_iter()
                .filter(|d| gcd(*d, c) == 1)
                .map(|d| {
                    self.r
                        .iter()
                        .map(|(delta, x)| {
                            let g = gcd(delta * d, self.m * c) as i64;
                            Rational::new(x * g * g, (delta * self.m) as i64)
                        })
                        .sum::<Rational>()
                        / 24
                })
                .min()
                .expect("d = 1 is always admissible");
            let s_part =
                s.s.iter()
                    .map(|(delta, x)| {
                        let g = gcd(*delta, c) as i64;
                        Rational::new(x * g * g, *delta as i64)
                    })
                    .sum::<Rational>()
                    / 24;
            let scale = Rational::from_integer((self.n / gcd(c * c, self.n)) as i64);
            out.insert(c, scale * (inner * p + s_part));
        }
        Ok(out)
    }

    pub fn radu47_lower_bound(&self, s: &SVector) -> Result<Rational, RaduError> {
        Ok(self
            .radu47_by_divisor(s)?
            .into_values()
            .min()
            .expect("N has at least one divisor"))
    }

    /// `g_{m,u} = q^{(24u + sigma_inf(r)) / (24 m)} sum_n a_r(m n + u) q^n`
    /// mod 2, with `trunc` known coefficients.
    pub fn dissection_series(&self, u: u64, trunc: usize) -> Result<F2Series, RaduError> {
        let num = 24 * u as i64 + self.sigma_inf();
        if num % self.m as i64 != 0 {
            return Err(RaduError::InvalidTuple(format!(
                "offset ({num})/(24*{}) is not in (1/24)Z",
                self.m
            )));
        }
        let need = self.m as usize * trunc + u as usize + 1;
        let base = match EtaQuotient::new(self.big_m, self.r.iter().map(|(d, x)| (*d, *x))) {
            Ok(e) => {
                let ex = e.expand(need);
                F2Series::from_words(ex.words().to_vec(), ex.trunc(), 0)
            }
            Err(_) => F2Series::one(need),
        };
        let g = base
            .dissect(self.m, u)
            .map_err(|e| RaduError::InvalidTuple(e.to_string()))?
            .truncated(trunc);
        Ok(F2Series::from_words(
            g.words().to_vec(),
            g.trunc(),
            num / self.m as i64,
        ))
    }
}
