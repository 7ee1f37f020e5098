//! Worked examples and counterexamples as data, and the end-to-end runner
//! that checks hypotheses, verdicts and printed numbers for each.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::majorization::{chain_products, infer_t_transform_2x2, ParamMatrix2xN};
use crate::oracles::k1;
use crate::ordercheck::{check_order, Grid, OrderVerdict, Status};
use crate::theorems::{ConditionReport, TheoremCase};

/// Entrywise tolerance for matrix products and inferred `omega`.
pub const PRODUCT_TOL: f64 = 1e-12;

const BUILTIN: [(&str, &str); 15] = [
    ("ex3.1", include_str!("../fixtures/ex3.1.json")),
    ("ex3.2", include_str!("../fixtures/ex3.2.json")),
    ("ex3.3", include_str!("../fixtures/ex3.3.json")),
    ("ex3.4", include_str!("../fixtures/ex3.4.json")),
    ("ex3.5", include_str!("../fixtures/ex3.5.json")),
    ("ex3.6", include_str!("../fixtures/ex3.6.json")),
    ("ex3.7", include_str!("../fixtures/ex3.7.json")),
    ("ex3.8", include_str!("../fixtures/ex3.8.json")),
    ("ce3.1", include_str!("../fixtures/ce3.1.json")),
    ("ce3.2", include_str!("../fixtures/ce3.2.json")),
    ("ce3.3", include_str!("../fixtures/ce3.3.json")),
    ("ce3.4", include_str!("../fixtures/ce3.4.json")),
    ("ce3.5", include_str!("../fixtures/ce3.5.json")),
    ("ce3.6", include_str!("../fixtures/ce3.6.json")),
    ("ce3.7", include_str!("../fixtures/ce3.7.json")),
];

/// Every catalog id, in display order.
pub fn fixture_ids() -> impl Iterator<Item = &'static str> {
    BUILTIN.iter().map(|(id, _)| *id)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FixtureKind {
    Example,
    Counterexample,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    /// `sf(p*) - sf(p)` for the fixed pair behind [`k1`].
    K1,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpectedValue {
    pub quantity: Quantity,
    pub x: f64,
    pub value: f64,
    pub tol: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpectedChain {
    pub key: String,
    pub lhs: Vec<f64>,
    pub rhs: Vec<f64>,
    pub held: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Expectation {
    pub verdict: Status,
    #[serde(default)]
    pub hypotheses: BTreeMap<String, bool>,
    #[serde(default)]
    pub chains: Vec<ExpectedChain>,
    #[serde(default)]
    pub product: Option<ParamMatrix2xN>,
    #[serde(default)]
    pub omega: Option<f64>,
    #[serde(default)]
    pub values: Vec<ExpectedValue>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Fixture {
    pub id: String,
    pub kind: FixtureKind,
    pub summary: String,
    pub case: TheoremCase,
    pub expect: Expectation,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct Manifest {
    fixtures: Vec<ManifestEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct ManifestEntry {
    id: String,
    file: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FixtureCatalog {
    entries: Vec<Fixture>,
}

fn parse_fixture(id: &str, text: &str) -> Result<Fixture> {
    let f: Fixture = serde_json::from_str(text)?;
    if f.id != id {
        return Err(Error::invalid(format!("fixture file for `{id}` declares id `{}`", f.id)));
    }
    Ok(f)
}

impl FixtureCatalog {
    /// The catalog compiled into the library.
    pub fn builtin() -> Self {
        let entries = BUILTIN
            .iter()
            .map(|(id, text)| parse_fixture(id, text).expect("embedded fixtures parse"))
            .collect();
        FixtureCatalog { entries }
    }

    /// Reads `manifest.json` and the files it lists from `dir`.
    pub fn from_dir(dir: impl AsRef<Path>) -> Result<Self> {
        let dir = dir.as_ref();
        let manifest: Manifest = serde_json::from_str(&fs::read_to_string(dir.join("manifest.json"))?)?;
        let mut entries = Vec::with_capacity(manifest.fixtures.len());
        for e in &manifest.fixtures {
            entries.push(parse_fixture(&e.id, &fs::read_to_string(dir.join(&e.file))?)?);
        }
        for id in fixture_ids() {
            if !entries.iter().any(|f| f.id == id) {
                return Err(Error::invalid(format!("manifest in {} lacks `{id}`", dir.display())));
            }
        }
        Ok(FixtureCatalog { entries })
    }

    pub fn get(&self, id: &str) -> Result<&Fixture> {
        self.entries.iter().find(|f| f.id == id).ok_or_else(|| Error::UnknownFixture(id.to_string()))
    }

    pub fn iter(&self) -> impl Iterator<Item = &Fixture> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixtureOutcome {
    pub id: String,
    pub passed: bool,
    pub checks: Vec<Check>,
    pub report: ConditionReport,
    pub verdict: OrderVerdict,
}

impl FixtureOutcome {
    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

impl fmt::Display for FixtureOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{tag}  {:<6} {:<6} {}", self.id, self.report.theorem, status_name(self.verdict.status))?;
        for c in self.failures() {
            write!(f, "\n      - {}: {}", c.name, c.detail)?;
        }
        Ok(())
    }
}

fn status_name(s: Status) -> &'static str {
    match s {
        Status::HoldsOnGrid => "holds_on_grid",
        Status::Violated => "violated",
        Status::Inconclusive => "inconclusive",
    }
}

fn check(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Check {
    Check { name: name.into(), passed, detail: detail.into() }
}

fn max_entry_diff(a: &ParamMatrix2xN, b: &ParamMatrix2xN) -> f64 {
    a.max_abs_diff(b).unwrap_or(f64::INFINITY)
}

fn matrix_checks(f: &Fixture, checks: &mut Vec<Check>) -> Result<()> {
    let mc = match &f.case {
        TheoremCase::T3_4(m)
        | TheoremCase::T3_5(m)
        | TheoremCase::T3_6(m)
        | TheoremCase::C3_2(m)
        | TheoremCase::T3_7(m)
        | TheoremCase::T3_8(m)
        | TheoremCase::T3_9(m)
        | TheoremCase::C3_3(m) => m,
        _ => return Ok(()),
    };
    let product = chain_products(&mc.p_mat, &mc.chain)?.pop().unwrap_or_else(|| mc.p_mat.clone());
    if let Some(expected) = &f.expect.product {
        let d = max_entry_diff(&product, expected);
        checks.push(check("product", d <= PRODUCT_TOL, format!("max entry difference {d:e}")));
    }
    if let Some(omega) = f.expect.omega {
        let q = mc.q_mat.clone().unwrap_or(product);
        let detail;
        let passed = match infer_t_transform_2x2(&mc.p_mat, &q)? {
            Some(t) => {
                detail = format!("inferred omega {} against {omega}", t.omega());
                (t.omega() - omega).abs() <= PRODUCT_TOL
            }
            None => {
                detail = "no T-transform maps P to Q".to_string();
                false
            }
        };
        checks.push(check("omega", passed, detail));
    }
    Ok(())
}

/// Runs one fixture end to end on `grid`.
pub fn run_fixture(f: &Fixture, grid: &Grid) -> Result<FixtureOutcome> {
    let report = f.case.check()?;
    let mut checks = Vec::new();

    for (key, &want) in &f.expect.hypotheses {
        let c = match report.hypothesis(key) {
            Some(h) => check(format!("hypothesis {key}"), h.held == want, format!("held {} expected {want}", h.held)),
            None => check(format!("hypothesis {key}"), false, "not reported"),
        };
        checks.push(c);
    }
    for want in &f.expect.chains {
        let c = match report.hypothesis(&want.key) {
            Some(h) => {
                let terms = h.chain.as_ref().is_some_and(|c| c.lhs == want.lhs && c.rhs == want.rhs);
                check(
                    format!("chain {}", want.key),
                    terms && h.held == want.held,
                    format!("{} (terms match: {terms})", h.detail),
                )
            }
            None => check(format!("chain {}", want.key), false, "not reported"),
        };
        checks.push(c);
    }
    matrix_checks(f, &mut checks)?;
    for v in &f.expect.values {
        let got = match v.quantity {
            Quantity::K1 => k1(v.x)?,
        };
        checks.push(check(
            format!("k1({})", v.x),
            (got - v.value).abs() <= v.tol,
            format!("computed {got:.8e}, printed {:.8e}, tolerance {:e}", v.value, v.tol),
        ));
    }

    let (m1, m2) = f.case.mixtures()?;
    let verdict = check_order(f.case.conclusion_kind(), &m1, &m2, grid);
    let want = f.expect.verdict;
    let mut detail = format!("{} expected {}", status_name(verdict.status), status_name(want));
    if let Some(w) = &verdict.witness {
        detail.push_str(&format!(", witness at x = {:e}", w.x));
    }
    let mut ok = verdict.status == want;
    if want == Status::Violated {
        ok &= verdict.witness.is_some();
    }
    checks.push(check(format!("{} verdict", f.case.conclusion_kind()), ok, detail));

    let passed = checks.iter().all(|c| c.passed);
    Ok(FixtureOutcome { id: f.id.clone(), passed, checks, report, verdict })
}

/// Runs every fixture in catalog order.
pub fn reproduce_all(catalog: &FixtureCatalog, grid: &Grid) -> Result<Vec<FixtureOutcome>> {
    catalog.iter().map(|f| run_fixture(f, grid)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_catalog_is_complete() {
        let c = FixtureCatalog::builtin();
        assert_eq!(c.len(), 15);
        for id in fixture_ids() {
            assert_eq!(c.get(id).unwrap().id, id);
        }
        assert!(matches!(c.get("ex9.9"), Err(Error::UnknownFixture(_))));
    }

    #[test]
    fn directory_catalog_matches_builtin() {
        let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures");
        assert_eq!(FixtureCatalog::from_dir(dir).unwrap(), FixtureCatalog::builtin());
    }

    #[test]
    fn directory_catalog_requires_every_id() {
        let tmp = tempfile::tempdir().unwrap();
        std::fs::write(tmp.path().join("manifest.json"), r#"{"fixtures":[]}"#).unwrap();
        assert!(FixtureCatalog::from_dir(tmp.path()).is_err());
    }

    #[test]
    fn matrix_fixtures_pass_structural_checks() {
        let c = FixtureCatalog::builtin();
        for id in ["ex3.4", "ex3.5", "ce3.4", "ce3.5"] {
            let mut checks = Vec::new();
            matrix_checks(c.get(id).unwrap(), &mut checks).unwrap();
            assert_eq!(checks.len(), 2);
            assert!(checks.iter().all(|c| c.passed), "{id}: {checks:?}");
        }
    }

    #[test]
    fn example_3_4_reproduces() {
        let c = FixtureCatalog::builtin();
        let out = run_fixture(c.get("ex3.4").unwrap(), &Grid::default()).unwrap();
        assert!(out.passed, "{out}");
        assert!(out.to_string().starts_with("PASS  ex3.4"));
    }

    #[test]
    fn counterexample_3_7_has_witness() {
        let c = FixtureCatalog::builtin();
        let out = run_fixture(c.get("ce3.7").unwrap(), &Grid::default()).unwrap();
        assert!(out.passed, "{out}");
        assert!(out.verdict.witness.is_some());
    }

    #[test]
    fn printed_k1_values_are_compared() {
        let c = FixtureCatalog::builtin();
        let out = run_fixture(c.get("ce3.2").unwrap(), &Grid::default()).unwrap();
        let k: Vec<_> = out.checks.iter().filter(|c| c.name.starts_with("k1(")).collect();
        assert_eq!(k.len(), 2);
        assert!(k[0].detail.contains("printed 2.62105000e-3"), "{}", k[0].detail);
    }
}
