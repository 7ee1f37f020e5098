//! Sufficient-condition checkers for the mixture ordering theorems and
//! corollaries, and the loop from hypotheses to a numeric verdict.
//!
//! Each [`TheoremCase`] carries the inputs of one statement. [`TheoremCase::check`]
//! reports which hypotheses hold; [`TheoremCase::mixtures`] builds the two
//! mixtures in the orientation of the conclusion (`m1 <= m2` in the
//! predicted order), so the conclusion can be tested with
//! [`verify_prediction`] whether or not the hypotheses hold.
//!
//! A failed hypothesis never implies that the order fails: the conditions
//! are sufficient only.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::majorization::{
    self, chain_products, script_l_violations, ParamMatrix2xN, RealVector, TTransform,
};
use crate::mixture::{mixture_from_matrix, FiniteMixture, MatrixLayout};
use crate::ordercheck::{check_order, Grid, OrderKind, OrderVerdict, Status};

/// Slack on max/min comparisons between parameter sets.
pub const HYPOTHESIS_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TheoremId {
    #[serde(rename = "T3.1")]
    T3_1,
    #[serde(rename = "T3.2")]
    T3_2,
    #[serde(rename = "T3.3")]
    T3_3,
    #[serde(rename = "T3.4")]
    T3_4,
    #[serde(rename = "T3.5")]
    T3_5,
    #[serde(rename = "T3.6")]
    T3_6,
    #[serde(rename = "T3.7")]
    T3_7,
    #[serde(rename = "T3.8")]
    T3_8,
    #[serde(rename = "T3.9")]
    T3_9,
    #[serde(rename = "T3.10")]
    T3_10,
    #[serde(rename = "T3.11")]
    T3_11,
    #[serde(rename = "T3.12")]
    T3_12,
    #[serde(rename = "C3.1")]
    C3_1,
    #[serde(rename = "C3.2")]
    C3_2,
    #[serde(rename = "C3.3")]
    C3_3,
}

impl TheoremId {
    pub const ALL: [TheoremId; 15] = [
        TheoremId::T3_1,
        TheoremId::T3_2,
        TheoremId::T3_3,
        TheoremId::T3_4,
        TheoremId::T3_5,
        TheoremId::T3_6,
        TheoremId::T3_7,
        TheoremId::T3_8,
        TheoremId::T3_9,
        TheoremId::T3_10,
        TheoremId::T3_11,
        TheoremId::T3_12,
        TheoremId::C3_1,
        TheoremId::C3_2,
        TheoremId::C3_3,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TheoremId::T3_1 => "T3.1",
            TheoremId::T3_2 => "T3.2",
            TheoremId::T3_3 => "T3.3",
            TheoremId::T3_4 => "T3.4",
            TheoremId::T3_5 => "T3.5",
            TheoremId::T3_6 => "T3.6",
            TheoremId::T3_7 => "T3.7",
            TheoremId::T3_8 => "T3.8",
            TheoremId::T3_9 => "T3.9",
            TheoremId::T3_10 => "T3.10",
            TheoremId::T3_11 => "T3.11",
            TheoremId::T3_12 => "T3.12",
            TheoremId::C3_1 => "C3.1",
            TheoremId::C3_2 => "C3.2",
            TheoremId::C3_3 => "C3.3",
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Accepts `T3.4`, `3.4` and `C3.2`, case-insensitively.
impl FromStr for TheoremId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let up = s.trim().to_ascii_uppercase();
        let key = if up.starts_with('T') || up.starts_with('C') { up } else { format!("T{up}") };
        TheoremId::ALL
            .into_iter()
            .find(|t| t.as_str() == key)
            .ok_or_else(|| Error::invalid(format!("unknown theorem id `{s}`")))
    }
}

/// The two sides of a `max{..} <= min{..}` style comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Chain {
    pub lhs_op: String,
    pub lhs: Vec<f64>,
    pub rhs_op: String,
    pub rhs: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hypothesis {
    /// Stable identifier, e.g. `alpha_p_in_L`.
    pub key: String,
    pub name: String,
    pub held: bool,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub chain: Option<Chain>,
}

/// `m1 <=_kind m2`, with human-readable labels for each side.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictedOrder {
    pub kind: OrderKind,
    pub m1: String,
    pub m2: String,
}

impl fmt::Display for PredictedOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} <=_{} {}", self.m1, self.kind, self.m2)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub theorem: TheoremId,
    pub hypotheses: Vec<Hypothesis>,
    pub all_held: bool,
    pub predicted_order: Option<PredictedOrder>,
}

impl ConditionReport {
    fn new(theorem: TheoremId, hypotheses: Vec<Hypothesis>, conclusion: PredictedOrder) -> Self {
        let all_held = hypotheses.iter().all(|h| h.held);
        ConditionReport { theorem, hypotheses, all_held, predicted_order: all_held.then_some(conclusion) }
    }

    pub fn hypothesis(&self, key: &str) -> Option<&Hypothesis> {
        self.hypotheses.iter().find(|h| h.key == key)
    }
}

fn hyp(key: &str, name: &str, held: bool, detail: impl Into<String>) -> Hypothesis {
    Hypothesis { key: key.into(), name: name.into(), held, detail: detail.into(), chain: None }
}

fn fmt_vec(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x}")).collect();
    format!("({})", parts.join(", "))
}

fn rv(v: &[f64]) -> Result<RealVector> {
    RealVector::new(v.to_vec())
}

fn matrix(row1: &[f64], row2: &[f64]) -> Result<ParamMatrix2xN> {
    ParamMatrix2xN::from_rows(row1, row2)
}

fn script_l_hyp(key: &str, name: &str, pm: &ParamMatrix2xN) -> Hypothesis {
    let bad = script_l_violations(pm);
    let detail = if bad.is_empty() {
        "rows oppositely ordered for every pair".to_string()
    } else {
        let pairs: Vec<String> = bad.iter().map(|(i, j)| format!("({}, {})", i + 1, j + 1)).collect();
        format!("similarly ordered pairs {}", pairs.join(", "))
    };
    hyp(key, name, bad.is_empty(), detail)
}

fn beta_unit_hyp(beta: f64) -> Hypothesis {
    hyp("beta_in_unit", "beta in (0, 1)", beta > 0.0 && beta < 1.0, format!("beta = {beta}"))
}

fn max(v: &[f64]) -> f64 {
    v.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

fn min(v: &[f64]) -> f64 {
    v.iter().copied().fold(f64::INFINITY, f64::min)
}

fn max_le_min(key: &str, name: &str, lhs: Vec<f64>, rhs: Vec<f64>) -> Hypothesis {
    let (a, b) = (max(&lhs), min(&rhs));
    let held = a <= b + HYPOTHESIS_TOL;
    let rel = if held { "<=" } else { "is not <=" };
    Hypothesis {
        detail: format!("max{} = {a} {rel} min{} = {b}", fmt_vec(&lhs), fmt_vec(&rhs)),
        chain: Some(Chain { lhs_op: "max".into(), lhs, rhs_op: "min".into(), rhs }),
        ..hyp(key, name, held, "")
    }
}

fn products(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x * y).collect()
}

/// Largest and smallest `|v_i - v_j|` over `i != j`; `(0, inf)` for `n = 1`.
fn gap_range(v: &[f64]) -> (f64, f64) {
    let mut hi: f64 = 0.0;
    let mut lo = f64::INFINITY;
    for i in 0..v.len() {
        for j in (i + 1)..v.len() {
            let d = (v[i] - v[j]).abs();
            hi = hi.max(d);
            lo = lo.min(d);
        }
    }
    (hi, lo)
}

/// Weights `p` and `p*` over one shared `alpha` vector, common `beta`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProportionsAlpha {
    pub alpha: Vec<f64>,
    pub beta: f64,
    pub p: Vec<f64>,
    pub p_star: Vec<f64>,
}

/// Weights `p` and `p*` over one shared `beta` vector, common `alpha`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProportionsBeta {
    pub beta: Vec<f64>,
    pub alpha: f64,
    pub p: Vec<f64>,
    pub p_star: Vec<f64>,
}

/// Two `alpha` vectors under one weight vector, common `beta`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlphaVectors {
    pub alpha: Vec<f64>,
    pub alpha_star: Vec<f64>,
    pub beta: f64,
    pub p: Vec<f64>,
}

/// `P = (p; tau)` and `Q = P T1 ... Tk`; `tau` is alpha or beta depending on
/// the theorem. Without `q_mat`, `Q` is the chain product.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixChain {
    pub p_mat: ParamMatrix2xN,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q_mat: Option<ParamMatrix2xN>,
    #[serde(default)]
    pub chain: Vec<TTransform>,
    /// Shared shape parameter: `beta` for alpha-row theorems, `alpha` for
    /// beta-row theorems.
    #[serde(alias = "beta", alias = "alpha")]
    pub fixed: f64,
}

/// Two `beta` vectors with their weights, common `alpha`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BetaGaps {
    pub beta: Vec<f64>,
    pub beta_star: Vec<f64>,
    pub alpha: f64,
    pub p: Vec<f64>,
    pub p_star: Vec<f64>,
}

/// Two fully heterogeneous mixtures.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwoMixtures {
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    pub alpha_star: Vec<f64>,
    pub beta_star: Vec<f64>,
    pub p: Vec<f64>,
    pub p_star: Vec<f64>,
}

/// Inputs of one theorem or corollary, tagged by its id in JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "theorem")]
pub enum TheoremCase {
    #[serde(rename = "T3.1")]
    T3_1(ProportionsAlpha),
    #[serde(rename = "C3.1")]
    C3_1(ProportionsAlpha),
    #[serde(rename = "T3.2")]
    T3_2(ProportionsBeta),
    #[serde(rename = "T3.3")]
    T3_3(AlphaVectors),
    #[serde(rename = "T3.4")]
    T3_4(MatrixChain),
    #[serde(rename = "T3.5")]
    T3_5(MatrixChain),
    #[serde(rename = "T3.6")]
    T3_6(MatrixChain),
    #[serde(rename = "C3.2")]
    C3_2(MatrixChain),
    #[serde(rename = "T3.7")]
    T3_7(MatrixChain),
    #[serde(rename = "T3.8")]
    T3_8(MatrixChain),
    #[serde(rename = "T3.9")]
    T3_9(MatrixChain),
    #[serde(rename = "C3.3")]
    C3_3(MatrixChain),
    #[serde(rename = "T3.10")]
    T3_10(BetaGaps),
    #[serde(rename = "T3.11")]
    T3_11(TwoMixtures),
    #[serde(rename = "T3.12")]
    T3_12(TwoMixtures),
}

pub fn check_theorem_3_1(alpha: &[f64], beta: f64, p: &[f64], p_star: &[f64]) -> Result<ConditionReport> {
    let l = matrix(p, alpha)?;
    let l_star = matrix(p_star, alpha)?;
    let wsub = majorization::weak_submajorizes(&rv(p)?, &rv(p_star)?)?;
    let hyps = vec![
        hyp("common_beta", "common beta across components", beta > 0.0, format!("beta = {beta}")),
        script_l_hyp("alpha_p_in_L", "(alpha, p) in L_n", &l),
        script_l_hyp("alpha_p_star_in_L", "(alpha, p*) in L_n", &l_star),
        hyp(
            "p_weakly_submajorizes_p_star",
            "p* weakly submajorized by p",
            wsub,
            format!("p = {}, p* = {}", fmt_vec(p), fmt_vec(p_star)),
        ),
    ];
    Ok(ConditionReport::new(TheoremId::T3_1, hyps, label(OrderKind::St, "R(alpha, beta; p*)", "R(alpha, beta; p)")))
}

pub fn check_corollary_3_1(alpha: &[f64], beta: f64, p: &[f64], p_star: &[f64]) -> Result<ConditionReport> {
    let l = matrix(p, alpha)?;
    let l_star = matrix(p_star, alpha)?;
    let maj = majorization::majorizes(&rv(p)?, &rv(p_star)?)?;
    let hyps = vec![
        hyp("common_beta", "common beta across components", beta > 0.0, format!("beta = {beta}")),
        script_l_hyp("alpha_p_in_L", "(alpha, p) in L_n", &l),
        script_l_hyp("alpha_p_star_in_L", "(alpha, p*) in L_n", &l_star),
        hyp(
            "p_majorizes_p_star",
            "p* majorized by p",
            maj,
            format!("p = {}, p* = {}", fmt_vec(p), fmt_vec(p_star)),
        ),
    ];
    Ok(ConditionReport::new(TheoremId::C3_1, hyps, label(OrderKind::St, "R(alpha, beta; p*)", "R(alpha, beta; p)")))
}

pub fn check_theorem_3_2(beta: &[f64], alpha: f64, p: &[f64], p_star: &[f64]) -> Result<ConditionReport> {
    let l = matrix(p, beta)?;
    let l_star = matrix(p_star, beta)?;
    let wsup = majorization::weak_supermajorizes(&rv(p)?, &rv(p_star)?)?;
    let hyps = vec![
        hyp("common_alpha", "common alpha across components", alpha > 0.0, format!("alpha = {alpha}")),
        script_l_hyp("beta_p_in_L", "(beta, p) in L_n", &l),
        script_l_hyp("beta_p_star_in_L", "(beta, p*) in L_n", &l_star),
        hyp(
            "p_weakly_supermajorizes_p_star",
            "p* weakly supermajorized by p",
            wsup,
            format!("p = {}, p* = {}", fmt_vec(p), fmt_vec(p_star)),
        ),
    ];
    Ok(ConditionReport::new(TheoremId::T3_2, hyps, label(OrderKind::St, "R(alpha, beta; p)", "R(alpha, beta; p*)")))
}

pub fn check_theorem_3_3(alpha: &[f64], alpha_star: &[f64], beta: f64, p: &[f64]) -> Result<ConditionReport> {
    let l = matrix(p, alpha)?;
    let l_star = matrix(p, alpha_star)?;
    let wsup = majorization::weak_supermajorizes(&rv(alpha)?, &rv(alpha_star)?)?;
    let hyps = vec![
        beta_unit_hyp(beta),
        script_l_hyp("alpha_p_in_L", "(alpha, p) in L_n", &l),
        script_l_hyp("alpha_star_p_in_L", "(alpha*, p) in L_n", &l_star),
        hyp(
            "alpha_weakly_supermajorizes_alpha_star",
            "alpha* weakly supermajorized by alpha",
            wsup,
            format!("alpha = {}, alpha* = {}", fmt_vec(alpha), fmt_vec(alpha_star)),
        ),
    ];
    Ok(ConditionReport::new(TheoremId::T3_3, hyps, label(OrderKind::St, "R(alpha*, beta; p)", "R(alpha, beta; p)")))
}

fn label(kind: OrderKind, m1: &str, m2: &str) -> PredictedOrder {
    PredictedOrder { kind, m1: m1.into(), m2: m2.into() }
}

/// Variants of the chain-majorization statements.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ChainVariant {
    /// A single pair of columns (`n = 2`).
    TwoColumns,
    /// General `n`, chain supplied.
    General,
    /// Transforms on different pairs; intermediate products must stay in `L_n`.
    Intermediates,
    /// Every transform acts on the same pair of columns.
    CommonStructure,
}

fn resolve_q(mc: &MatrixChain) -> Result<ParamMatrix2xN> {
    match &mc.q_mat {
        Some(q) => Ok(q.clone()),
        None => Ok(chain_products(&mc.p_mat, &mc.chain)?.pop().unwrap_or_else(|| mc.p_mat.clone())),
    }
}

fn chain_hypotheses(mc: &MatrixChain, variant: ChainVariant, row: &str) -> Result<Vec<Hypothesis>> {
    let n = mc.p_mat.n();
    let q = resolve_q(mc)?;
    let mut hyps = Vec::new();
    if variant == ChainVariant::TwoColumns {
        hyps.push(hyp("two_columns", "n = 2", n == 2, format!("n = {n}")));
    }
    hyps.push(script_l_hyp(&format!("p_{row}_in_L"), &format!("(p, {row}) in L_n"), &mc.p_mat));
    if variant == ChainVariant::CommonStructure {
        let first = mc.chain.first().map(TTransform::pair);
        let same = mc.chain.iter().all(|t| Some(t.pair()) == first);
        let detail = match (same, first) {
            (true, Some((i, j))) => format!("all {} transforms act on columns ({}, {})", mc.chain.len(), i + 1, j + 1),
            (true, None) => "empty chain".into(),
            (false, _) => "transforms act on different column pairs".into(),
        };
        hyps.push(hyp("common_structure", "T-transforms share one column pair", same, detail));
    }
    let verified = majorization::chain_majorization_verify(&mc.p_mat, &q, &mc.chain)?;
    let detail = match mc.chain.len() {
        0 => "empty chain".to_string(),
        k => format!("{k} T-transform(s), product matches Q within 1e-10: {verified}"),
    };
    hyps.push(hyp("chain_majorized", "P chain-majorizes Q via the given transforms", verified, detail));
    if variant == ChainVariant::Intermediates {
        let products = chain_products(&mc.p_mat, &mc.chain)?;
        let k = mc.chain.len();
        for (i, stage) in products.iter().enumerate().take(k.saturating_sub(1)) {
            hyps.push(script_l_hyp(
                &format!("stage_{}_in_L", i + 1),
                &format!("P T1..T{} in L_n", i + 1),
                stage,
            ));
        }
    }
    Ok(hyps)
}

/// Theorems for `(p; alpha)` matrices with a common `beta`:
/// `P >> Q` implies `R(Q) <=_st R(P)`.
pub fn check_alpha_chain(id: TheoremId, mc: &MatrixChain) -> Result<ConditionReport> {
    let variant = match id {
        TheoremId::T3_4 => ChainVariant::TwoColumns,
        TheoremId::T3_5 => ChainVariant::General,
        TheoremId::T3_6 => ChainVariant::Intermediates,
        TheoremId::C3_2 => ChainVariant::CommonStructure,
        other => return Err(Error::invalid(format!("{other} is not an alpha-row chain theorem"))),
    };
    let mut hyps = vec![beta_unit_hyp(mc.fixed)];
    hyps.extend(chain_hypotheses(mc, variant, "alpha")?);
    Ok(ConditionReport::new(id, hyps, label(OrderKind::St, "R(Q)", "R(P)")))
}

/// Theorems for `(p; beta)` matrices with a common `alpha`:
/// `P >> Q` implies `R(P) <=_st R(Q)`.
pub fn check_beta_chain(id: TheoremId, mc: &MatrixChain) -> Result<ConditionReport> {
    let variant = match id {
        TheoremId::T3_7 => ChainVariant::TwoColumns,
        TheoremId::T3_8 => ChainVariant::General,
        TheoremId::T3_9 => ChainVariant::Intermediates,
        TheoremId::C3_3 => ChainVariant::CommonStructure,
        other => return Err(Error::invalid(format!("{other} is not a beta-row chain theorem"))),
    };
    let mut hyps = vec![hyp(
        "common_alpha",
        "common alpha across components",
        mc.fixed > 0.0,
        format!("alpha = {}", mc.fixed),
    )];
    hyps.extend(chain_hypotheses(mc, variant, "beta")?);
    Ok(ConditionReport::new(id, hyps, label(OrderKind::St, "R(P)", "R(Q)")))
}

pub fn check_theorem_3_4_or_3_5(mc: &MatrixChain) -> Result<ConditionReport> {
    let id = if mc.p_mat.n() == 2 { TheoremId::T3_4 } else { TheoremId::T3_5 };
    check_alpha_chain(id, mc)
}

pub fn check_theorem_3_6(mc: &MatrixChain) -> Result<ConditionReport> {
    check_alpha_chain(TheoremId::T3_6, mc)
}

/// `intermediates` selects the different-structure statement.
pub fn check_theorem_3_7_to_3_9(mc: &MatrixChain, intermediates: bool) -> Result<ConditionReport> {
    let id = match (intermediates, mc.p_mat.n()) {
        (true, _) => TheoremId::T3_9,
        (false, 2) => TheoremId::T3_7,
        (false, _) => TheoremId::T3_8,
    };
    check_beta_chain(id, mc)
}

pub fn check_theorem_3_10(beta: &[f64], beta_star: &[f64], alpha: f64, p: &[f64], p_star: &[f64]) -> Result<ConditionReport> {
    for v in [beta_star, p, p_star] {
        if v.len() != beta.len() {
            return Err(Error::LengthMismatch { expected: beta.len(), found: v.len() });
        }
    }
    let (max_gap, _) = gap_range(beta);
    let (_, min_gap) = gap_range(beta_star);
    let held = max_gap <= min_gap + HYPOTHESIS_TOL;
    let rel = if held { "<=" } else { "is not <=" };
    let hyps = vec![
        hyp("common_alpha", "common alpha across components", alpha > 0.0, format!("alpha = {alpha}")),
        Hypothesis {
            detail: format!(
                "max |beta_i - beta_j| = {max_gap} {rel} min |beta*_i - beta*_j| = {min_gap}"
            ),
            chain: Some(Chain {
                lhs_op: "max_gap".into(),
                lhs: beta.to_vec(),
                rhs_op: "min_gap".into(),
                rhs: beta_star.to_vec(),
            }),
            ..hyp("beta_gaps", "largest beta gap at most smallest beta* gap", held, "")
        },
    ];
    Ok(ConditionReport::new(TheoremId::T3_10, hyps, label(OrderKind::RRh, "R(alpha, beta; p)", "R(alpha, beta*; p*)")))
}

fn check_two_lengths(t: &TwoMixtures) -> Result<()> {
    let n = t.alpha.len();
    for v in [&t.beta, &t.alpha_star, &t.beta_star, &t.p, &t.p_star] {
        if v.len() != n {
            return Err(Error::LengthMismatch { expected: n, found: v.len() });
        }
    }
    Ok(())
}

pub fn check_theorem_3_11(t: &TwoMixtures) -> Result<ConditionReport> {
    check_two_lengths(t)?;
    let hyps = vec![
        max_le_min("alpha_star_below_alpha", "max alpha* <= min alpha", t.alpha_star.clone(), t.alpha.clone()),
        max_le_min(
            "alpha_beta_below_star",
            "max alpha_i beta_i <= min alpha*_i beta*_i",
            products(&t.alpha, &t.beta),
            products(&t.alpha_star, &t.beta_star),
        ),
    ];
    Ok(ConditionReport::new(TheoremId::T3_11, hyps, label(OrderKind::Rh, "R(alpha, beta; p)", "R(alpha*, beta*; p*)")))
}

pub fn check_theorem_3_12(t: &TwoMixtures) -> Result<ConditionReport> {
    check_two_lengths(t)?;
    let hyps = vec![
        max_le_min("alpha_below_alpha_star", "max alpha <= min alpha*", t.alpha.clone(), t.alpha_star.clone()),
        max_le_min(
            "star_products_below",
            "max alpha*_i beta*_i <= min alpha_i beta_i",
            products(&t.alpha_star, &t.beta_star),
            products(&t.alpha, &t.beta),
        ),
    ];
    Ok(ConditionReport::new(TheoremId::T3_12, hyps, label(OrderKind::Lr, "R(alpha*, beta*; p*)", "R(alpha, beta; p)")))
}

fn scalar_mix(p: &[f64], alpha: &[f64], beta: f64) -> Result<FiniteMixture> {
    FiniteMixture::from_vectors(p, alpha, &vec![beta; p.len()])
}

fn scalar_alpha_mix(p: &[f64], alpha: f64, beta: &[f64]) -> Result<FiniteMixture> {
    FiniteMixture::from_vectors(p, &vec![alpha; p.len()], beta)
}

impl TheoremCase {
    pub fn id(&self) -> TheoremId {
        match self {
            TheoremCase::T3_1(_) => TheoremId::T3_1,
            TheoremCase::C3_1(_) => TheoremId::C3_1,
            TheoremCase::T3_2(_) => TheoremId::T3_2,
            TheoremCase::T3_3(_) => TheoremId::T3_3,
            TheoremCase::T3_4(_) => TheoremId::T3_4,
            TheoremCase::T3_5(_) => TheoremId::T3_5,
            TheoremCase::T3_6(_) => TheoremId::T3_6,
            TheoremCase::C3_2(_) => TheoremId::C3_2,
            TheoremCase::T3_7(_) => TheoremId::T3_7,
            TheoremCase::T3_8(_) => TheoremId::T3_8,
            TheoremCase::T3_9(_) => TheoremId::T3_9,
            TheoremCase::C3_3(_) => TheoremId::C3_3,
            TheoremCase::T3_10(_) => TheoremId::T3_10,
            TheoremCase::T3_11(_) => TheoremId::T3_11,
            TheoremCase::T3_12(_) => TheoremId::T3_12,
        }
    }

    pub fn check(&self) -> Result<ConditionReport> {
        match self {
            TheoremCase::T3_1(c) => check_theorem_3_1(&c.alpha, c.beta, &c.p, &c.p_star),
            TheoremCase::C3_1(c) => check_corollary_3_1(&c.alpha, c.beta, &c.p, &c.p_star),
            TheoremCase::T3_2(c) => check_theorem_3_2(&c.beta, c.alpha, &c.p, &c.p_star),
            TheoremCase::T3_3(c) => check_theorem_3_3(&c.alpha, &c.alpha_star, c.beta, &c.p),
            TheoremCase::T3_4(m) | TheoremCase::T3_5(m) | TheoremCase::T3_6(m) | TheoremCase::C3_2(m) => {
                check_alpha_chain(self.id(), m)
            }
            TheoremCase::T3_7(m) | TheoremCase::T3_8(m) | TheoremCase::T3_9(m) | TheoremCase::C3_3(m) => {
                check_beta_chain(self.id(), m)
            }
            TheoremCase::T3_10(c) => check_theorem_3_10(&c.beta, &c.beta_star, c.alpha, &c.p, &c.p_star),
            TheoremCase::T3_11(t) => check_theorem_3_11(t),
            TheoremCase::T3_12(t) => check_theorem_3_12(t),
        }
    }

    /// The order named by the conclusion, as `m1 <=_kind m2`.
    pub fn conclusion_kind(&self) -> OrderKind {
        match self {
            TheoremCase::T3_10(_) => OrderKind::RRh,
            TheoremCase::T3_11(_) => OrderKind::Rh,
            TheoremCase::T3_12(_) => OrderKind::Lr,
            _ => OrderKind::St,
        }
    }

    /// `(m1, m2)` oriented so the conclusion reads `m1 <=_kind m2`.
    pub fn mixtures(&self) -> Result<(FiniteMixture, FiniteMixture)> {
        match self {
            TheoremCase::T3_1(c) | TheoremCase::C3_1(c) => {
                Ok((scalar_mix(&c.p_star, &c.alpha, c.beta)?, scalar_mix(&c.p, &c.alpha, c.beta)?))
            }
            TheoremCase::T3_2(c) => {
                Ok((scalar_alpha_mix(&c.p, c.alpha, &c.beta)?, scalar_alpha_mix(&c.p_star, c.alpha, &c.beta)?))
            }
            TheoremCase::T3_3(c) => Ok((scalar_mix(&c.p, &c.alpha_star, c.beta)?, scalar_mix(&c.p, &c.alpha, c.beta)?)),
            TheoremCase::T3_4(m) | TheoremCase::T3_5(m) | TheoremCase::T3_6(m) | TheoremCase::C3_2(m) => {
                let layout = MatrixLayout::AlphaRow { beta: m.fixed };
                Ok((mixture_from_matrix(&resolve_q(m)?, layout)?, mixture_from_matrix(&m.p_mat, layout)?))
            }
            TheoremCase::T3_7(m) | TheoremCase::T3_8(m) | TheoremCase::T3_9(m) | TheoremCase::C3_3(m) => {
                let layout = MatrixLayout::BetaRow { alpha: m.fixed };
                Ok((mixture_from_matrix(&m.p_mat, layout)?, mixture_from_matrix(&resolve_q(m)?, layout)?))
            }
            TheoremCase::T3_10(c) => Ok((
                scalar_alpha_mix(&c.p, c.alpha, &c.beta)?,
                scalar_alpha_mix(&c.p_star, c.alpha, &c.beta_star)?,
            )),
            TheoremCase::T3_11(t) => Ok((
                FiniteMixture::from_vectors(&t.p, &t.alpha, &t.beta)?,
                FiniteMixture::from_vectors(&t.p_star, &t.alpha_star, &t.beta_star)?,
            )),
            TheoremCase::T3_12(t) => Ok((
                FiniteMixture::from_vectors(&t.p_star, &t.alpha_star, &t.beta_star)?,
                FiniteMixture::from_vectors(&t.p, &t.alpha, &t.beta)?,
            )),
        }
    }

    /// Hypotheses, then the conclusion's order on `grid` when they all hold.
    pub fn verify(&self, grid: &Grid) -> Result<(ConditionReport, Prediction)> {
        let report = self.check()?;
        let prediction = verify_prediction(&report, &self.mixtures()?, grid);
        Ok((report, prediction))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    /// Some hypothesis failed; nothing is predicted.
    NotApplicable,
    /// The predicted order holds on the grid.
    Consistent,
    /// Hypotheses hold but the grid check finds a violation.
    Contradiction,
    /// The grid check could not decide.
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub outcome: Outcome,
    pub verdict: Option<OrderVerdict>,
}

/// Runs the predicted order check on `mixtures = (m1, m2)` when every
/// hypothesis holds.
pub fn verify_prediction(report: &ConditionReport, mixtures: &(FiniteMixture, FiniteMixture), grid: &Grid) -> Prediction {
    let Some(order) = &report.predicted_order else {
        return Prediction { outcome: Outcome::NotApplicable, verdict: None };
    };
    let verdict = check_order(order.kind, &mixtures.0, &mixtures.1, grid);
    let outcome = match verdict.status {
        Status::HoldsOnGrid => Outcome::Consistent,
        Status::Violated => Outcome::Contradiction,
        Status::Inconclusive => Outcome::Inconclusive,
    };
    Prediction { outcome, verdict: Some(verdict) }
}
