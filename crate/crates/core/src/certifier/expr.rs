//! A small language for the two sides of a congruence: XOR sums of terms,
//! each a power of `q` times a product of infinite products, theta-type sums
//! and dissected partition series.

use std::fmt;

use serde::Serialize;

use crate::f2series::F2Series;
use crate::partitions::{parity_table, TableKind};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "factor", rename_all = "snake_case")]
pub enum Factor {
    /// `(q^step; q^step)_inf^exp`.
    Euler { step: u64, exp: i64 },
    /// `(q^start; q^step)_inf^exp = prod_{n >= 0} (1 - q^{start + n step})^exp`.
    Pochhammer { start: u64, step: u64, exp: i64 },
    /// `sum_n c(a n + b) q^{inflate n}` for the counting function of `source`.
    Progression {
        source: TableKind,
        a: u64,
        b: u64,
        inflate: u64,
    },
    /// `sum q^{(c2 n^2 + c1 n + c0) / den}` over `n >= from`, or over all
    /// integers when `from` is `None`. Exponents must be nonnegative
    /// integers on the range.
    Quadratic {
        c2: i64,
        c1: i64,
        c0: i64,
        den: i64,
        from: Option<i64>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Term {
    pub shift: u64,
    pub factors: Vec<Factor>,
}

impl Factor {
    pub fn euler(step: u64, exp: i64) -> Self {
        Factor::Euler { step, exp }
    }

    /// Coefficients `< trunc` of the factor (every factor has integral,
    /// nonnegative exponents).
    pub fn expand(&self, trunc: usize) -> F2Series {
        match *self {
            Factor::Euler { step, exp } => {
                let inner = trunc.div_ceil(step as usize).max(1);
                F2Series::euler(inner)
                    .pow(exp)
                    .expect("euler product has constant term 1")
                    .inflate(step)
                    .truncated(trunc)
            }
            Factor::Pochhammer { start, step, exp } => {
                let mut base = F2Series::one(trunc);
                let mut e = start as usize;
                while e < trunc {
                    let lin = F2Series::from_exponents([0, e], trunc, 0);
                    base = base.mul(&lin);
                    e += step as usize;
                }
                base.pow(exp).expect("product has constant term 1")
            }
            Factor::Progression {
                source,
                a,
                b,
                inflate,
            } => {
                let n_terms = trunc.div_ceil(inflate as usize).max(1);
                let table = parity_table(source, a as usize * n_terms + b as usize);
                table
                    .into_series()
                    .dissect(a, b)
                    .expect("residue checked by catalog construction")
                    .truncated(n_terms)
                    .inflate(inflate)
                    .truncated(trunc)
            }
            Factor::Quadratic {
                c2,
                c1,
                c0,
                den,
                from,
            } => {
                assert!(c2 > 0 && den > 0, "quadratic exponent must open upward");
                let value = |n: i64| {
                    let v = c2 * n * n + c1 * n + c0;
                    assert!(
                        v % den == 0,
                        "quadratic exponent is not integral at n = {n}"
                    );
                    v / den
                };
                let mut exps = Vec::new();
                let limit = trunc as i64;
                // scan outward from the vertex until both branches leave range
                let lo = from.unwrap_or(i64::MIN);
                let vertex = (-c1).div_euclid(2 * c2).max(lo);
                let mut n = vertex;
                while n <= vertex + 1 || value(n) < limit {
                    if value(n) < limit {
                        exps.push(value(n));
                    }
                    n += 1;
                }
                let mut n = vertex - 1;
                while n >= lo && (n >= vertex - 1 || value(n) < limit) {
                    if value(n) < limit {
                        exps.push(value(n));
                    }
                    n -= 1;
                }
                assert!(
                    exps.iter().all(|e| *e >= 0),
                    "quadratic sum has a negative exponent"
                );
                F2Series::from_exponents(exps.into_iter().map(|e| e as usize), trunc, 0)
            }
        }
    }
}

impl Term {
    pub fn new(shift: u64, factors: Vec<Factor>) -> Self {
        Term { shift, factors }
    }

    /// Coefficients of `q^0 .. q^{trunc-1}`.
    pub fn expand(&self, trunc: usize) -> F2Series {
        let shift = self.shift as usize;
        if shift >= trunc {
            return F2Series::zero(trunc, 0);
        }
        let inner = trunc - shift;
        let mut parts: Vec<F2Series> = self.factors.iter().map(|f| f.expand(inner)).collect();
        parts.sort_by_key(|p| p.count_ones());
        let mut acc = F2Series::one(inner);
        for p in &parts {
            acc = acc.mul(p).truncated(inner);
        }
        acc.shift(shift as i64)
            .realigned(0)
            .expect("shift is integral")
    }

    /// The eta-quotient reading of the term: returns `(exps, residual24)`
    /// with `q^shift prod (q^d;q^d)^e = q^{residual24/24} prod eta(d z)^e`,
    /// or `None` if the term has non-Euler factors.
    pub fn as_eta_product(&self) -> Option<(Vec<(u64, i64)>, i64)> {
        let mut exps = Vec::new();
        let mut residual = 24 * self.shift as i64;
        for f in &self.factors {
            match *f {
                Factor::Euler { step, exp } => {
                    exps.push((step, exp));
                    residual -= step as i64 * exp;
                }
                _ => return None,
            }
        }
        Some((exps, residual))
    }
}

/// XOR sum of terms, known on `q^0 .. q^{trunc-1}`.
pub fn expand_side(terms: &[Term], trunc: usize) -> F2Series {
    let mut acc = F2Series::zero(trunc, 0);
    for t in terms {
        acc = acc.add(&t.expand(trunc)).expect("integral offsets");
    }
    acc.truncated(trunc)
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let q = |d: u64| {
            if d == 1 {
                "q".to_string()
            } else {
                format!("q^{d}")
            }
        };
        match *self {
            Factor::Euler { step, exp } => write!(f, "({})^{}", q(step), exp),
            Factor::Pochhammer { start, step, exp } => {
                write!(f, "({};{})^{}", q(start), q(step), exp)
            }
            Factor::Progression {
                source,
                a,
                b,
                inflate,
            } => write!(f, "sum {source}({a}n+{b}) {}^n", q(inflate)),
            Factor::Quadratic {
                c2,
                c1,
                c0,
                den,
                from,
            } => {
                let range = match from {
                    Some(lo) => format!("n>={lo}"),
                    None => "n in Z".to_string(),
                };
                if den == 1 {
                    write!(f, "sum_{{{range}}} q^({c2}n^2+{c1}n+{c0})")
                } else {
                    write!(f, "sum_{{{range}}} q^(({c2}n^2+{c1}n+{c0})/{den})")
                }
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.shift > 0 || self.factors.is_empty() {
            parts.push(format!("q^{}", self.shift));
        }
        parts.extend(self.factors.iter().map(|x| x.to_string()));
        write!(f, "{}", parts.join(" "))
    }
}

/// Renders a side as `term + term + ...`.
pub fn side_to_string(terms: &[Term]) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    terms
        .iter()
        .map(|t| t.to_string())
        .collect::<Vec<_>>()
        .join(" + ")
}
