//! The claims: twelve two-term and two three-term progression congruences for
//! multipartition counts, plus the classical identities used in their
//! algebraic derivations (checked numerically only).

use std::fmt;

use serde::Serialize;

use super::expr::{Factor, Term};
use crate::partitions::TableKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Shape {
    /// `q sum p_t(a n + b) q^n = 1/(q)^{a t} + 1/(q^a)^t`.
    TwoTerm,
    /// `q^2 sum p_t(a^2 n + b) q^n = 1/(q)^{a^2 t} + 1/(q^a)^{a t} + q/(q)^t`.
    ThreeTerm,
    /// A supporting identity, verified numerically only.
    Auxiliary,
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Shape::TwoTerm => "two-term",
            Shape::ThreeTerm => "three-term",
            Shape::Auxiliary => "auxiliary",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CongruenceClaim {
    pub id: String,
    pub shape: Shape,
    pub triple: Option<(u64, u64, u64)>,
    pub description: String,
    pub lhs: Vec<Term>,
    pub rhs: Vec<Term>,
}

/// A mod-2 rewrite of one right-hand term, as printed with a proof.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PublishedRewrite {
    pub term: usize,
    pub level: u64,
    pub exps: Vec<(u64, i64)>,
}

/// Published proof data for a catalog case.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProofPlan {
    pub triple: (u64, u64, u64),
    pub shape: Shape,
    /// Multiplier exponents in ascending divisor order of the Radu level.
    pub s_values: Vec<i64>,
    /// Power `j` of `eta(4z)^24` published as sufficient to clear poles.
    pub published_j: Option<u64>,
    pub rewrites: Vec<PublishedRewrite>,
    /// Whether the published argument states every form has trivial character.
    pub trivial_character_asserted: bool,
}

fn p_t(t: u64) -> TableKind {
    TableKind::Multipartition { t }
}

fn progression(source: TableKind, a: u64, b: u64) -> Factor {
    Factor::Progression {
        source,
        a,
        b,
        inflate: 1,
    }
}

fn e(step: u64, exp: i64) -> Factor {
    Factor::euler(step, exp)
}

fn term(shift: u64, factors: Vec<Factor>) -> Term {
    Term::new(shift, factors)
}

fn quad(c2: i64, c1: i64, c0: i64, from: Option<i64>) -> Factor {
    Factor::Quadratic {
        c2,
        c1,
        c0,
        den: 1,
        from,
    }
}

pub fn triple_id(a: u64, b: u64, t: u64) -> String {
    format!("{a},{b},{t}")
}

impl CongruenceClaim {
    /// `q sum p_t(a n + b) q^n = 1/(q)^{a t} + 1/(q^a)^t` for any triple
    /// (catalog membership is not required, so false claims can be built).
    pub fn two_term(a: u64, b: u64, t: u64) -> Self {
        assert!(b < a, "residue must lie in [0, a)");
        let at = (a * t) as i64;
        CongruenceClaim {
            id: triple_id(a, b, t),
            shape: Shape::TwoTerm,
            triple: Some((a, b, t)),
            description: format!("q sum p_{t}({a}n+{b}) q^n = 1/(q)^{at} + 1/(q^{a})^{t}"),
            lhs: vec![term(1, vec![progression(p_t(t), a, b)])],
            rhs: vec![term(0, vec![e(1, -at)]), term(0, vec![e(a, -(t as i64))])],
        }
    }

    /// `q^2 sum p_t(a^2 n + b) q^n = 1/(q)^{a^2 t} + 1/(q^a)^{a t} + q/(q)^t`.
    pub fn three_term(a: u64, b: u64, t: u64) -> Self {
        let m = a * a;
        assert!(b < m, "residue must lie in [0, a^2)");
        let (a2t, at) = ((m * t) as i64, (a * t) as i64);
        CongruenceClaim {
            id: triple_id(a, b, t),
            shape: Shape::ThreeTerm,
            triple: Some((a, b, t)),
            description: format!(
                "q^2 sum p_{t}({m}n+{b}) q^n = 1/(q)^{a2t} + 1/(q^{a})^{at} + q/(q)^{t}"
            ),
            lhs: vec![term(2, vec![progression(p_t(t), m, b)])],
            rhs: vec![
                term(0, vec![e(1, -a2t)]),
                term(0, vec![e(a, -at)]),
                term(1, vec![e(1, -(t as i64))]),
            ],
        }
    }

    fn aux(id: &str, description: &str, lhs: Vec<Term>, rhs: Vec<Term>) -> Self {
        CongruenceClaim {
            id: id.to_string(),
            shape: Shape::Auxiliary,
            triple: None,
            description: description.to_string(),
            lhs,
            rhs,
        }
    }

    pub fn numeric_only(&self) -> bool {
        self.shape == Shape::Auxiliary
    }
}

const TWO_TERM: [(u64, u64, u64); 12] = [
    (5, 4, 1),
    (7, 5, 1),
    (11, 6, 1),
    (13, 6, 1),
    (17, 5, 1),
    (19, 4, 1),
    (23, 1, 1),
    (3, 2, 3),
    (5, 2, 3),
    (7, 1, 3),
    (5, 0, 5),
    (3, 0, 9),
];

const THREE_TERM: [(u64, u64, u64); 2] = [(3, 8, 3), (5, 24, 1)];

/// The fourteen progression congruences, two-term cases first.
pub fn main_claims() -> Vec<CongruenceClaim> {
    TWO_TERM
        .iter()
        .map(|&(a, b, t)| CongruenceClaim::two_term(a, b, t))
        .chain(
            THREE_TERM
                .iter()
                .map(|&(a, b, t)| CongruenceClaim::three_term(a, b, t)),
        )
        .collect()
}

/// Classical identities behind the algebraic derivations, reduced mod 2.
pub fn auxiliary_claims() -> Vec<CongruenceClaim> {
    let b = |m| TableKind::Regular { m };
    vec![
        CongruenceClaim::aux(
            "ramanujan-5n+4",
            "sum p(5n+4) q^n = (q^5)^5/(q)^6",
            vec![term(0, vec![progression(p_t(1), 5, 4)])],
            vec![term(0, vec![e(5, 5), e(1, -6)])],
        ),
        CongruenceClaim::aux(
            "bbg-theta",
            "(q)/(q^5;q^10) = sum_{n>=1} q^(n^2-n) + sum_{n>=1} q^(5n^2-5n+1)",
            vec![term(
                0,
                vec![
                    e(1, 1),
                    Factor::Pochhammer {
                        start: 5,
                        step: 10,
                        exp: -1,
                    },
                ],
            )],
            vec![
                term(0, vec![quad(1, -1, 0, Some(1))]),
                term(0, vec![quad(5, -5, 1, Some(1))]),
            ],
        ),
        CongruenceClaim::aux(
            "bbg-product",
            "(q)(q^5) = sum_{n>=1} q^(n^2-n) + sum_{n>=1} q^(5n^2-5n+1)",
            vec![term(0, vec![e(1, 1), e(5, 1)])],
            vec![
                term(0, vec![quad(1, -1, 0, Some(1))]),
                term(0, vec![quad(5, -5, 1, Some(1))]),
            ],
        ),
        CongruenceClaim::aux(
            "euler-cube",
            "(q)^3 = sum_{n>=0} q^(n(n+1)/2)",
            vec![term(0, vec![e(1, 3)])],
            vec![term(
                0,
                vec![Factor::Quadratic {
                    c2: 1,
                    c1: 1,
                    c0: 0,
                    den: 2,
                    from: Some(0),
                }],
            )],
        ),
        CongruenceClaim::aux(
            "quintic-split",
            "(q)(q^5) = (q)^6 + q (q^5)^6",
            vec![term(0, vec![e(1, 1), e(5, 1)])],
            vec![term(0, vec![e(1, 6)]), term(1, vec![e(5, 6)])],
        ),
        CongruenceClaim::aux(
            "quintic-quotient",
            "q (q^5)^5/(q)^6 = 1/(q)^5 + 1/(q^5)",
            vec![term(1, vec![e(5, 5), e(1, -6)])],
            vec![term(0, vec![e(1, -5)]), term(0, vec![e(5, -1)])],
        ),
        CongruenceClaim::aux(
            "b5-split",
            "sum b_5(n) q^n = (q)^4 + q (q^5)^6/(q)^2",
            vec![term(0, vec![progression(b(5), 1, 0)])],
            vec![term(0, vec![e(1, 4)]), term(1, vec![e(5, 6), e(1, -2)])],
        ),
        CongruenceClaim::aux(
            "b5-cube-quotient",
            "(q^5)^3/(q) = (q)^4 (q^5)^2 + q (q^5)^8/(q)^2",
            vec![term(0, vec![e(5, 3), e(1, -1)])],
            vec![
                term(0, vec![e(1, 4), e(5, 2)]),
                term(1, vec![e(5, 8), e(1, -2)]),
            ],
        ),
        CongruenceClaim::aux(
            "b5-products",
            "sum b_5(n) q^n = (q)^4 + q (q)^8 (q^5)^4 + q^3 (q^5)^16/(q)^4",
            vec![term(0, vec![progression(b(5), 1, 0)])],
            vec![
                term(0, vec![e(1, 4)]),
                term(1, vec![e(1, 8), e(5, 4)]),
                term(3, vec![e(5, 16), e(1, -4)]),
            ],
        ),
        CongruenceClaim::aux(
            "b5-b20",
            "sum b_5(n) q^n = (q)^4 + q (q)^8 (q^5)^4 + sum b_20(n) q^(4n+3)",
            vec![term(0, vec![progression(b(5), 1, 0)])],
            vec![
                term(0, vec![e(1, 4)]),
                term(1, vec![e(1, 8), e(5, 4)]),
                term(
                    3,
                    vec![Factor::Progression {
                        source: b(20),
                        a: 1,
                        b: 0,
                        inflate: 4,
                    }],
                ),
            ],
        ),
        CongruenceClaim::aux(
            "euler-fourth-power",
            "(q)^4 = sum_{n in Z} q^(2n(3n-1))",
            vec![term(0, vec![e(1, 4)])],
            vec![term(0, vec![quad(6, -2, 0, None)])],
        ),
        CongruenceClaim::aux(
            "binary-form-product",
            "q (q)^8 (q^5)^4 = q sum_m q^(4m(3m-1)) sum_n q^(10n(3n-1))",
            vec![term(1, vec![e(1, 8), e(5, 4)])],
            vec![term(1, vec![quad(12, -4, 0, None), quad(30, -10, 0, None)])],
        ),
        CongruenceClaim::aux(
            "zuckerman-13n+6",
            "sum p(13n+6) q^n = (q^13)/(q)^2 + q^5 (q^13)^11/(q)^12 + q^6 (q^13)^13/(q)^14",
            vec![term(0, vec![progression(p_t(1), 13, 6)])],
            vec![
                term(0, vec![e(13, 1), e(1, -2)]),
                term(5, vec![e(13, 11), e(1, -12)]),
                term(6, vec![e(13, 13), e(1, -14)]),
            ],
        ),
        CongruenceClaim::aux(
            "calkin-13",
            "(q^13)/(q) + (q)^12 = q (q)^10 (q^13)^2 + q^6 (q^13)^12 + q^7 (q^13)^14/(q)^2",
            vec![term(0, vec![e(13, 1), e(1, -1)]), term(0, vec![e(1, 12)])],
            vec![
                term(1, vec![e(1, 10), e(13, 2)]),
                term(6, vec![e(13, 12)]),
                term(7, vec![e(13, 14), e(1, -2)]),
            ],
        ),
        CongruenceClaim::aux(
            "ramanujan-7n+5",
            "sum p(7n+5) q^n = (q^7)^3/(q)^4 + q (q^7)^7/(q)^8",
            vec![term(0, vec![progression(p_t(1), 7, 5)])],
            vec![
                term(0, vec![e(7, 3), e(1, -4)]),
                term(1, vec![e(7, 7), e(1, -8)]),
            ],
        ),
        CongruenceClaim::aux(
            "lin-7",
            "(q)(q^7) = (q)^8 + q (q)^4 (q^7)^4 + q^2 (q^7)^8",
            vec![term(0, vec![e(1, 1), e(7, 1)])],
            vec![
                term(0, vec![e(1, 8)]),
                term(1, vec![e(1, 4), e(7, 4)]),
                term(2, vec![e(7, 8)]),
            ],
        ),
        CongruenceClaim::aux(
            "chan-3n+2",
            "sum p_3(3n+2) q^n = (q^3)^9/(q)^12",
            vec![term(0, vec![progression(p_t(3), 3, 2)])],
            vec![term(0, vec![e(3, 9), e(1, -12)])],
        ),
        CongruenceClaim::aux(
            "hirschhorn-sellers",
            "1/((q)^9 (q^3)^9) = q/(q)^12 + 1/(q^3)^12",
            vec![term(0, vec![e(1, -9), e(3, -9)])],
            vec![term(1, vec![e(1, -12)]), term(0, vec![e(3, -12)])],
        ),
        CongruenceClaim::aux(
            "chan-lewis-5n+2",
            "q sum p_3(5n+2) q^n = q (q^5)^3/(q)^6 + q^2 (q^5)^9/(q)^12 + q^3 (q^5)^15/(q)^18",
            vec![term(1, vec![progression(p_t(3), 5, 2)])],
            vec![
                term(1, vec![e(5, 3), e(1, -6)]),
                term(2, vec![e(5, 9), e(1, -12)]),
                term(3, vec![e(5, 15), e(1, -18)]),
            ],
        ),
        CongruenceClaim::aux(
            "zuckerman-25n+24",
            "sum p(25n+24) q^n = (q^5)^6/(q)^7 + q^2 (q^5)^18/(q)^19 + q^4 (q^5)^30/(q)^31",
            vec![term(0, vec![progression(p_t(1), 25, 24)])],
            vec![
                term(0, vec![e(5, 6), e(1, -7)]),
                term(2, vec![e(5, 18), e(1, -19)]),
                term(4, vec![e(5, 30), e(1, -31)]),
            ],
        ),
        CongruenceClaim::aux(
            "25n+24-partial",
            "q^2 sum p(25n+24) q^n = q/(q) + 1/(q)^25 + q (q^5)/(q)^6 + 1/((q)^5 (q^5)^4)",
            vec![term(2, vec![progression(p_t(1), 25, 24)])],
            vec![
                term(1, vec![e(1, -1)]),
                term(0, vec![e(1, -25)]),
                term(1, vec![e(5, 1), e(1, -6)]),
                term(0, vec![e(1, -5), e(5, -4)]),
            ],
        ),
        CongruenceClaim::aux(
            "p5-5n",
            "sum p_5(5n) q^n = q sum p(25n+24) q^n + 1/(q)",
            vec![term(0, vec![progression(p_t(5), 5, 0)])],
            vec![
                term(1, vec![progression(p_t(1), 25, 24)]),
                term(0, vec![e(1, -1)]),
            ],
        ),
        CongruenceClaim::aux(
            "5n-extraction",
            "q sum p(25n+24) q^(5n+4) = sum p(n) q^(5n) + sum p_5(5n) q^(5n)",
            vec![term(
                5,
                vec![Factor::Progression {
                    source: p_t(1),
                    a: 25,
                    b: 24,
                    inflate: 5,
                }],
            )],
            vec![
                term(
                    0,
                    vec![Factor::Progression {
                        source: p_t(1),
                        a: 1,
                        b: 0,
                        inflate: 5,
                    }],
                ),
                term(
                    0,
                    vec![Factor::Progression {
                        source: p_t(5),
                        a: 5,
                        b: 0,
                        inflate: 5,
                    }],
                ),
            ],
        ),
        CongruenceClaim::aux(
            "p3-9n+8",
            "sum p_3(9n+8) q^n = q^2 (q^3)^36/(q)^39",
            vec![term(0, vec![progression(p_t(3), 9, 8)])],
            vec![term(2, vec![e(3, 36), e(1, -39)])],
        ),
        CongruenceClaim::aux(
            "hirschhorn-sellers-q4",
            "q^4/(q^4)^12 = 1/(q^12)^12 + 1/((q^4)^9 (q^12)^9)",
            vec![term(4, vec![e(4, -12)])],
            vec![
                term(0, vec![e(12, -12)]),
                term(0, vec![e(4, -9), e(12, -9)]),
            ],
        ),
        CongruenceClaim::aux(
            "hirschhorn-sellers-cubic",
            "(q)^9/(q^3)^12 = 1/(q^3)^9 + q/(q)^3",
            vec![term(0, vec![e(1, 9), e(3, -12)])],
            vec![term(0, vec![e(3, -9)]), term(1, vec![e(1, -3)])],
        ),
        CongruenceClaim::aux(
            "b7-b28",
            "sum b_7(n) q^n = (q)^6 + q (q)^2 (q^7)^4 + sum b_28(n) q^(2n+2)",
            vec![term(0, vec![progression(b(7), 1, 0)])],
            vec![
                term(0, vec![e(1, 6)]),
                term(1, vec![e(1, 2), e(7, 4)]),
                term(
                    2,
                    vec![Factor::Progression {
                        source: b(28),
                        a: 1,
                        b: 0,
                        inflate: 2,
                    }],
                ),
            ],
        ),
    ]
}

/// Every claim: the fourteen progression congruences, then the auxiliary
/// identities.
pub fn catalog() -> Vec<CongruenceClaim> {
    let mut all = main_claims();
    all.extend(auxiliary_claims());
    all
}

/// Looks up a claim by id (`"a,b,t"` for progression congruences).
pub fn find_claim(id: &str) -> Option<CongruenceClaim> {
    let id = normalize_id(id);
    catalog().into_iter().find(|c| c.id == id)
}

fn normalize_id(id: &str) -> String {
    let parts: Vec<&str> = id.split(',').map(str::trim).collect();
    if parts.len() == 3 && parts.iter().all(|p| p.parse::<u64>().is_ok()) {
        parts.join(",")
    } else {
        id.trim().to_string()
    }
}

fn plan(
    triple: (u64, u64, u64),
    shape: Shape,
    s_values: &[i64],
    j: u64,
    rewrites: Vec<PublishedRewrite>,
) -> ProofPlan {
    ProofPlan {
        triple,
        shape,
        s_values: s_values.to_vec(),
        published_j: Some(j),
        rewrites,
        trivial_character_asserted: true,
    }
}

/// Published multipliers, clearing powers and term rewrites for the
/// fourteen progression congruences, in catalog order.
pub fn proof_plans() -> Vec<ProofPlan> {
    let generic = |m: u64, b: u64| {
        let mi = m as i64;
        plan(
            (m, b, 1),
            Shape::TwoTerm,
            &[mi - 1, 2, mi, -2 * mi],
            (m * m - 1) / 8,
            vec![],
        )
    };
    vec![
        generic(5, 4),
        generic(7, 5),
        ProofPlan {
            rewrites: vec![PublishedRewrite {
                term: 0,
                level: 44,
                exps: vec![(1, -1), (4, 1), (11, 11), (44, -11)],
            }],
            ..generic(11, 6)
        },
        generic(13, 6),
        generic(17, 5),
        generic(19, 4),
        generic(23, 1),
        plan((3, 2, 3), Shape::TwoTerm, &[6, 6, 9, -18], 3, vec![]),
        plan((5, 2, 3), Shape::TwoTerm, &[10, 8, 1, -16], 6, vec![]),
        ProofPlan {
            trivial_character_asserted: false,
            ..plan(
                (7, 1, 3),
                Shape::TwoTerm,
                &[10, 10, 5, -22],
                11,
                vec![PublishedRewrite {
                    term: 0,
                    level: 28,
                    exps: vec![(1, 1), (4, 2), (7, -3), (14, 18), (28, -18)],
                }],
            )
        },
        plan((5, 0, 5), Shape::TwoTerm, &[5, 1, 4, -5], 4, vec![]),
        plan((3, 0, 9), Shape::TwoTerm, &[9, 3, 6, -9], 3, vec![]),
        plan((3, 8, 3), Shape::ThreeTerm, &[3, 1, 8, -9], 28, vec![]),
        plan((5, 24, 1), Shape::ThreeTerm, &[5, 4, 2, -10], 200, vec![]),
    ]
}

pub fn find_plan(id: &str) -> Option<ProofPlan> {
    let id = normalize_id(id);
    proof_plans().into_iter().find(|p| {
        let (a, b, t) = p.triple;
        triple_id(a, b, t) == id
    })
}

impl ProofPlan {
    pub fn id(&self) -> String {
        let (a, b, t) = self.triple;
        triple_id(a, b, t)
    }

    pub fn claim(&self) -> CongruenceClaim {
        let (a, b, t) = self.triple;
        match self.shape {
            Shape::ThreeTerm => CongruenceClaim::three_term(a, b, t),
            _ => CongruenceClaim::two_term(a, b, t),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        let main = main_claims();
        assert_eq!(
            main.iter().filter(|c| c.shape == Shape::TwoTerm).count(),
            12
        );
        assert_eq!(
            main.iter().filter(|c| c.shape == Shape::ThreeTerm).count(),
            2
        );
        assert!(auxiliary_claims().iter().all(|c| c.numeric_only()));
        assert_eq!(proof_plans().len(), 14);
        let ids: Vec<String> = catalog().iter().map(|c| c.id.clone()).collect();
        let mut dedup = ids.clone();
        dedup.sort();
        dedup.dedup();
        assert_eq!(ids.len(), dedup.len());
    }

    #[test]
    fn five_four_one_rhs() {
        let c = find_claim("5, 4, 1").unwrap();
        assert_eq!(
            c.rhs,
            vec![term(0, vec![e(1, -5)]), term(0, vec![e(5, -1)])]
        );
        assert!(find_claim("6,0,1").is_none());
    }

    #[test]
    fn plans_match_claims() {
        for p in proof_plans() {
            let c = find_claim(&p.id()).unwrap();
            assert_eq!(c.shape, p.shape);
            assert_eq!(p.s_values.len(), 4);
        }
    }
}
