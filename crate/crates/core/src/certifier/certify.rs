//! End-to-end certification of a progression congruence: Radu's modular
//! function on the left, GHN-normalized eta quotients on the right, pole
//! clearing by `eta(4z)^{24j}`, and a coefficient check up to the Sturm bound.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use sha2::{Digest, Sha256};

use super::catalog::{ProofPlan, Shape};
use super::normalize::normalize;
use super::sturm::{clearing_form, clearing_form_order, sturm_bound};
use crate::arith::{divisors, fmt_rational, lcm, Rational};
use crate::etaquot::{cusp_set, Cusp, EtaQuotient};
use crate::f2series::F2Series;
use crate::radu::{DeltaStarReport, ModularityConditions, RaduTuple, SVector};

pub const CERT_FORMAT: &str = "cert-v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    ClaimShape,
    DeltaStar,
    Nu,
    SVector,
    Conditions,
    Rewrite,
    Normalize,
    PoleClearing,
    Offsets,
    Comparison,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).expect("unit variant");
        f.write_str(s.as_str().unwrap_or("unknown"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertifyError {
    pub stage: Stage,
    pub message: String,
}

impl fmt::Display for CertifyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.stage, self.message)
    }
}

impl std::error::Error for CertifyError {}

fn fail<T>(stage: Stage, message: impl Into<String>) -> Result<T, CertifyError> {
    Err(CertifyError {
        stage,
        message: message.into(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Proven,
    Failed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TermRecord {
    pub index: usize,
    /// `s` times the claim's term, before any mod-2 rewriting.
    pub constructed: String,
    pub form: String,
    /// `as-constructed`, `normalized` or `published`.
    pub source: String,
    pub units: BTreeMap<u64, i64>,
    pub weight2: i64,
    pub trivial_character: bool,
    pub character_kernel: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CuspRow {
    pub d: u64,
    pub cusps: Vec<String>,
    pub lhs_bound: String,
    pub rhs_orders: Vec<String>,
    pub min_order: String,
    pub clearing_form_order: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProofCertificate {
    pub format: &'static str,
    pub case: String,
    pub shape: Shape,
    pub claim: String,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failed_stage: Option<Stage>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
    pub radu_tuple: Option<RaduTuple>,
    pub delta_star: Option<DeltaStarReport>,
    pub p_set: Option<Vec<u64>>,
    /// Canonical representative in `[0, 24)`.
    pub nu: Option<i64>,
    pub s_vector: Option<Vec<i64>>,
    pub conditions: Option<ModularityConditions>,
    pub level: Option<u64>,
    pub rhs_terms: Vec<TermRecord>,
    pub cusp_orders: Vec<CuspRow>,
    pub global_min_order: Option<String>,
    pub minimal_clearing_power: Option<u64>,
    pub clearing_power: Option<u64>,
    pub clearing_form: Option<String>,
    pub weight2: Option<u64>,
    pub same_character: Option<bool>,
    /// Set when a right-hand form has nontrivial character although the
    /// published argument asserts all characters are trivial.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub character_flag: Option<String>,
    pub sturm_bound: Option<u64>,
    pub verified_range: Option<[u64; 2]>,
    pub lhs_hash: Option<String>,
    pub rhs_hash: Option<String>,
}

impl ProofCertificate {
    fn new(plan: &ProofPlan) -> Self {
        ProofCertificate {
            format: CERT_FORMAT,
            case: plan.id(),
            shape: plan.shape,
            claim: plan.claim().description,
            verdict: Verdict::Failed,
            failed_stage: None,
            failure: None,
            radu_tuple: None,
            delta_star: None,
            p_set: None,
            nu: None,
            s_vector: None,
            conditions: None,
            level: None,
            rhs_terms: Vec::new(),
            cusp_orders: Vec::new(),
            global_min_order: None,
            minimal_clearing_power: None,
            clearing_power: None,
            clearing_form: None,
            weight2: None,
            same_character: None,
            character_flag: None,
            sturm_bound: None,
            verified_range: None,
            lhs_hash: None,
            rhs_hash: None,
        }
    }

    pub fn proven(&self) -> bool {
        self.verdict == Verdict::Proven
    }

    /// Pretty JSON with stable field order.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }
}

/// Options for [`certify_with`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CertifyOptions {
    /// Use this clearing power instead of the published (or minimal) one.
    pub clearing_power: Option<u64>,
    /// Use this multiplier instead of the published one.
    pub s_vector: Option<SVector>,
}

/// Radu tuple of a catalog case at its natural level (`2a` or `a^3`).
pub fn radu_tuple(plan: &ProofPlan) -> Result<RaduTuple, CertifyError> {
    let (a, b, t) = plan.triple;
    let (m, n) = match plan.shape {
        Shape::TwoTerm => (a, 2 * a),
        Shape::ThreeTerm => (a * a, a * a * a),
        Shape::Auxiliary => return fail(Stage::ClaimShape, "auxiliary claims are numeric only"),
    };
    RaduTuple::new(m, 1, n, b, &[(1, -(t as i64))])
        .or_else(|e| fail(Stage::ClaimShape, e.to_string()))
}

/// A catalog case reduced to modular data: the tuple and multiplier lifted
/// to a common level and the right-hand forms at that level.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub tuple: RaduTuple,
    pub s: SVector,
    pub level: u64,
    pub p_set: Vec<u64>,
    pub forms: Vec<EtaQuotient>,
    pub records: Vec<TermRecord>,
}

impl Prepared {
    pub fn tuple_at_level(&self) -> RaduTuple {
        self.tuple
            .lifted(self.level)
            .expect("level is a multiple of N")
    }

    pub fn s_at_level(&self) -> SVector {
        self.s.lifted(self.level).expect("level is a multiple of N")
    }
}

/// Builds the right-hand eta quotients `s * term_i` and rewrites each into
/// a weight-zero form mod 2 (published rewrite if any, else the normalizer).
pub fn prepare(plan: &ProofPlan, s: &SVector) -> Result<Prepared, CertifyError> {
    let tuple = radu_tuple(plan)?;
    if s.n != tuple.n {
        return fail(
            Stage::SVector,
            format!("s indexed by divisors of {} but N = {}", s.n, tuple.n),
        );
    }
    let p_set = tuple.p_set();
    let claim = plan.claim();
    let (lhs_shift, m, u_claim) = {
        let t = &claim.lhs[0];
        (t.shift as i64, tuple.m as i64, tuple.t as i64)
    };
    let g24_num = 24 * u_claim + tuple.sigma_inf();
    if g24_num % m != 0 {
        return fail(Stage::ClaimShape, "dissection offset is not in (1/24)Z");
    }
    let g24 = g24_num / m;
    let level = plan
        .rewrites
        .iter()
        .fold(lcm(4, tuple.n), |acc, r| lcm(acc, r.level));

    let s_eta: Vec<(u64, i64)> = s.s.iter().map(|(d, x)| (*d, *x)).collect();
    let mut forms = Vec::new();
    let mut records = Vec::new();
    for (i, term) in claim.rhs.iter().enumerate() {
        let Some((exps, residual)) = term.as_eta_product() else {
            return fail(Stage::ClaimShape, format!("term {i} is not an eta product"));
        };
        // g = q^{(g24 - 24 shift)/24} * lhs, and term_i = q^{residual/24} eta_i
        if g24 - 24 * lhs_shift + residual != 0 {
            return fail(
                Stage::ClaimShape,
                format!(
                    "term {i} leaves a q-power of {}/24",
                    g24 - 24 * lhs_shift + residual
                ),
            );
        }
        let constructed = EtaQuotient::new(level, s_eta.iter().copied().chain(exps))
            .or_else(|e| fail(Stage::ClaimShape, e.to_string()))?;
        let published = plan.rewrites.iter().find(|r| r.term == i);
        let (form, source, units) = match published {
            Some(rw) => {
                let q = EtaQuotient::new(level, rw.exps.iter().copied())
                    .or_else(|e| fail(Stage::Rewrite, e.to_string()))?;
                if !q.mod2_equivalent(&constructed) {
                    return fail(
                        Stage::Rewrite,
                        format!("published rewrite of term {i} is not congruent mod 2"),
                    );
                }
                (q, "published", BTreeMap::new())
            }
            None => {
                let n = normalize(&constructed, level)
                    .or_else(|e| fail(Stage::Normalize, format!("term {i}: {e}")))?;
                let source = if n.units.is_empty() {
                    "as-constructed"
                } else {
                    "normalized"
                };
                (n.quotient, source, n.units)
            }
        };
        let report = form.ghn_check();
        if !report.is_form || report.weight2 != 0 {
            return fail(
                Stage::Rewrite,
                format!("term {i} form {form} is not a weight-zero modular function"),
            );
        }
        records.push(TermRecord {
            index: i,
            constructed: constructed.to_string(),
            form: form.to_string(),
            source: source.to_string(),
            units,
            weight2: report.weight2,
            trivial_character: report.trivial_character(),
            character_kernel: report.char_s_kernel,
        });
        forms.push(form);
    }
    Ok(Prepared {
        tuple,
        s: s.clone(),
        level,
        p_set,
        forms,
        records,
    })
}

/// Lower bounds on the cusp orders of both sides, per cusp denominator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderTable {
    pub level: u64,
    pub lhs: BTreeMap<u64, Rational>,
    pub rhs: BTreeMap<u64, Vec<Rational>>,
    pub clearing: BTreeMap<u64, Rational>,
}

impl OrderTable {
    pub fn build(prep: &Prepared) -> Result<Self, CertifyError> {
        let level = prep.level;
        let lhs = prep
            .tuple_at_level()
            .radu47_by_divisor(&prep.s_at_level())
            .or_else(|e| fail(Stage::PoleClearing, e.to_string()))?;
        let mut rhs = BTreeMap::new();
        let mut clearing = BTreeMap::new();
        for d in divisors(level) {
            let cusp = Cusp { c: 1, d };
            rhs.insert(
                d,
                prep.forms.iter().map(|f| f.ligozat_order(&cusp)).collect(),
            );
            clearing.insert(d, clearing_form_order(level, d));
        }
        Ok(OrderTable {
            level,
            lhs,
            rhs,
            clearing,
        })
    }

    pub fn min_at(&self, d: u64) -> Rational {
        self.rhs[&d]
            .iter()
            .copied()
            .chain([self.lhs[&d]])
            .min()
            .expect("left side always present")
    }

    pub fn global_min(&self) -> Rational {
        self.lhs
            .keys()
            .map(|&d| self.min_at(d))
            .min()
            .expect("nonempty")
    }

    /// Least `j` with `min_at(d) + j * ord_d(eta(4z)^24) >= 0` for every `d`.
    pub fn minimal_clearing_power(&self) -> Result<u64, CertifyError> {
        let mut j = 0u64;
        for &d in self.lhs.keys() {
            let o = self.min_at(d);
            if o >= Rational::from_integer(0) {
                continue;
            }
            let c = self.clearing[&d];
            if c <= Rational::from_integer(0) {
                return fail(
                    Stage::PoleClearing,
                    format!("eta(4z)^24 does not vanish at cusps over {d} where a pole sits"),
                );
            }
            j = j.max((-o / c).ceil().to_integer() as u64);
        }
        Ok(j)
    }

    pub fn rows(&self) -> Vec<CuspRow> {
        let cusps = cusp_set(self.level);
        self.lhs
            .keys()
            .map(|&d| CuspRow {
                d,
                cusps: cusps
                    .iter()
                    .filter(|c| c.d == d)
                    .map(|c| c.to_string())
                    .collect(),
                lhs_bound: fmt_rational(&self.lhs[&d]),
                rhs_orders: self.rhs[&d].iter().map(fmt_rational).collect(),
                min_order: fmt_rational(&self.min_at(d)),
                clearing_form_order: fmt_rational(&self.clearing[&d]),
            })
            .collect()
    }
}

/// Smallest `j` such that `eta(4z)^{24 j}` clears every pole of both sides.
pub fn pole_clearing_power(plan: &ProofPlan, s: &SVector) -> Result<u64, CertifyError> {
    let prep = prepare(plan, s)?;
    OrderTable::build(&prep)?.minimal_clearing_power()
}

pub fn published_s_vector(plan: &ProofPlan) -> Result<SVector, CertifyError> {
    let tuple = radu_tuple(plan)?;
    SVector::from_values(tuple.n, &plan.s_values).or_else(|e| fail(Stage::SVector, e.to_string()))
}

fn hash_bits(s: &F2Series, n: usize) -> String {
    hex::encode(Sha256::digest(s.packed_bytes(n)))
}

/// Aligns a series with nonnegative integral offset to offset zero.
fn at_origin(s: &F2Series, what: &str) -> Result<F2Series, CertifyError> {
    if s.offset24() < 0 || s.offset24() % 24 != 0 {
        return fail(
            Stage::Offsets,
            format!("{what} starts at q^({}/24)", s.offset24()),
        );
    }
    s.realigned(0)
        .or_else(|e| fail(Stage::Offsets, e.to_string()))
}

pub fn certify(plan: &ProofPlan) -> ProofCertificate {
    certify_with(plan, &CertifyOptions::default())
}

pub fn certify_with(plan: &ProofPlan, options: &CertifyOptions) -> ProofCertificate {
    let mut cert = ProofCertificate::new(plan);
    if let Err(e) = run(plan, options, &mut cert) {
        cert.verdict = Verdict::Failed;
        cert.failed_stage = Some(e.stage);
        cert.failure = Some(e.message);
    }
    cert
}

fn run(
    plan: &ProofPlan,
    options: &CertifyOptions,
    cert: &mut ProofCertificate,
) -> Result<(), CertifyError> {
    let tuple = radu_tuple(plan)?;
    cert.radu_tuple = Some(tuple.clone());
    let ds = tuple.delta_star_check();
    cert.delta_star = Some(ds.clone());
    if !ds.passes() {
        return fail(Stage::DeltaStar, "tuple is not admissible");
    }
    cert.p_set = Some(tuple.p_set());
    let nu = tuple.nu().or_else(|e| fail(Stage::Nu, e.to_string()))?;
    cert.nu = Some(nu);

    let s = match &options.s_vector {
        Some(s) => s.clone(),
        None => published_s_vector(plan)?,
    };
    cert.s_vector = Some(s.values());
    let conditions = tuple
        .theorem45_check(&s)
        .or_else(|e| fail(Stage::Conditions, e.to_string()))?;
    cert.conditions = Some(conditions.clone());
    if !conditions.passes() {
        return fail(Stage::Conditions, "multiplier fails a modularity condition");
    }

    let prep = prepare(plan, &s)?;
    cert.level = Some(prep.level);
    cert.rhs_terms = prep.records.clone();
    let table = OrderTable::build(&prep)?;
    cert.cusp_orders = table.rows();
    cert.global_min_order = Some(fmt_rational(&table.global_min()));
    let minimal = table.minimal_clearing_power()?;
    cert.minimal_clearing_power = Some(minimal);
    let j = options
        .clearing_power
        .or(plan.published_j)
        .unwrap_or(minimal);
    if j < minimal {
        return fail(
            Stage::PoleClearing,
            format!("clearing power {j} is below the required {minimal}"),
        );
    }
    cert.clearing_power = Some(j);
    let clear_j = (j > 0).then(|| {
        EtaQuotient::new(4, [(4, clearing_form().exponent(4) * j as i64)]).expect("valid quotient")
    });
    cert.clearing_form = Some(match &clear_j {
        Some(c) => c.to_string(),
        None => "1".to_string(),
    });
    let weight2 = 24 * j;
    cert.weight2 = Some(weight2);
    let same = prep.records.iter().all(|r| r.trivial_character);
    cert.same_character = Some(same);
    if plan.trivial_character_asserted && !same {
        let odd: Vec<String> = prep
            .records
            .iter()
            .filter(|r| !r.trivial_character)
            .map(|r| r.index.to_string())
            .collect();
        cert.character_flag = Some(format!(
            "terms {} have nontrivial character; using the different-character bound",
            odd.join(", ")
        ));
    }
    let bound = sturm_bound(weight2, prep.level, same);
    cert.sturm_bound = Some(bound);

    let n = bound as usize + 1;
    let times_clear = |e: &EtaQuotient| match &clear_j {
        Some(c) => e.mul(c).expect("levels compatible"),
        None => e.clone(),
    };
    let lifted = prep.tuple_at_level();
    let mut lhs = match prep.s_at_level().as_eta_quotient() {
        Some(sq) => times_clear(&sq).expand(n),
        None => match &clear_j {
            Some(c) => c.expand(n),
            None => F2Series::one(n),
        },
    };
    for &u in &prep.p_set {
        let g = lifted
            .dissection_series(u, n)
            .or_else(|e| fail(Stage::Offsets, e.to_string()))?;
        lhs = lhs.mul(&g);
    }
    let mut rhs: Option<F2Series> = None;
    for f in &prep.forms {
        let part = times_clear(f).expand(n);
        rhs = Some(match rhs {
            None => part,
            Some(acc) => acc
                .add(&part)
                .or_else(|e| fail(Stage::Offsets, e.to_string()))?,
        });
    }
    let rhs = rhs.expect("claims have right-hand terms");
    let lhs = at_origin(&lhs, "left side")?;
    let rhs = at_origin(&rhs, "right side")?;
    if lhs.trunc() < n || rhs.trunc() < n {
        return fail(
            Stage::Comparison,
            format!(
                "expansions reach {} and {} coefficients, need {n}",
                lhs.trunc(),
                rhs.trunc()
            ),
        );
    }
    let (lhs, rhs) = (lhs.truncated(n), rhs.truncated(n));
    cert.lhs_hash = Some(hash_bits(&lhs, n));
    cert.rhs_hash = Some(hash_bits(&rhs, n));
    if let Some(e) = lhs
        .first_mismatch(&rhs)
        .or_else(|e| fail(Stage::Comparison, e.to_string()))?
    {
        return fail(
            Stage::Comparison,
            format!("coefficients differ at q^{}", e / 24),
        );
    }
    cert.verified_range = Some([0, bound]);
    cert.verdict = Verdict::Proven;
    Ok(())
}
