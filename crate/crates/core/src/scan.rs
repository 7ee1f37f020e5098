//! Seeded parameter scans: sample a box of parameters, check a theorem's
//! hypotheses and its conclusion on a grid, and sort the outcomes.
//!
//! Sample `i` draws from ChaCha8 seeded with `seed` on stream `i`, so every
//! sample is reproducible on its own and the run is independent of thread
//! count.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use rand::{Rng, RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::ordercheck::{check_order, Grid, OrderVerdict, Status};
use crate::theorems::{ConditionReport, TheoremCase, TheoremId};

/// Range keys whose sampled vectors are normalized to sum to one.
const WEIGHT_KEYS: [&str; 3] = ["p", "p_star", "p_mat.row1"];

/// `[lo, hi]` for a scalar, or one interval per coordinate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Range {
    Scalar([f64; 2]),
    Vector(Vec<[f64; 2]>),
}

impl Range {
    fn intervals(&self) -> &[[f64; 2]] {
        match self {
            Range::Scalar(iv) => std::slice::from_ref(iv),
            Range::Vector(v) => v,
        }
    }

    fn is_point(&self) -> bool {
        self.intervals().iter().all(|[lo, hi]| lo == hi)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanConfig {
    pub theorem: TheoremId,
    /// Keys are case fields (`alpha`, `p_star`, ...); `p_mat.row1` style keys
    /// fill matrix rows and `omega` fills the transforms on `pairs`.
    pub ranges: BTreeMap<String, Range>,
    pub samples: usize,
    pub seed: u64,
    /// 1-based column pairs for matrix theorems, one per `omega` interval.
    #[serde(default)]
    pub pairs: Vec<[usize; 2]>,
    #[serde(default)]
    pub grid: Option<Grid>,
}

impl ScanConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let c: ScanConfig = serde_json::from_str(text)?;
        c.validate()?;
        Ok(c)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(Error::invalid("samples must be at least 1"));
        }
        for (key, r) in &self.ranges {
            if r.intervals().is_empty() {
                return Err(Error::invalid(format!("range `{key}` is empty")));
            }
            for &[lo, hi] in r.intervals() {
                let ok = if key == "omega" {
                    (0.0..=1.0).contains(&lo) && (0.0..=1.0).contains(&hi)
                } else {
                    lo.is_finite() && hi.is_finite() && lo > 0.0
                };
                if !ok || lo > hi {
                    return Err(Error::invalid(format!("range `{key}` has invalid interval [{lo}, {hi}]")));
                }
            }
        }
        if let Some(omega) = self.ranges.get("omega") {
            if omega.intervals().len() != self.pairs.len() {
                return Err(Error::LengthMismatch { expected: self.pairs.len(), found: omega.intervals().len() });
            }
        }
        Ok(())
    }

    /// Effective number of samples: one when every range is a point.
    pub fn effective_samples(&self) -> usize {
        if self.ranges.values().all(Range::is_point) {
            1
        } else {
            self.samples
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Category {
    /// Hypotheses hold and the order is violated on the grid.
    SoundnessAlarm,
    /// Hypotheses hold and the order holds.
    Consistent,
    /// Hypotheses fail but the order holds anyway.
    HoldsWithoutHypotheses,
    /// Hypotheses fail and the order is violated.
    ViolatedWithoutHypotheses,
    /// The grid check could not decide.
    Inconclusive,
    /// The sampled parameters were rejected by the model.
    Invalid,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Finding {
    pub index: usize,
    pub category: Category,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub case: Option<TheoremCase>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<ConditionReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<OrderVerdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanReport {
    pub theorem: TheoremId,
    pub seed: u64,
    pub samples: usize,
    pub grid: Grid,
    pub counts: BTreeMap<Category, usize>,
    /// Every sample outside `consistent`, in sample order.
    pub findings: Vec<Finding>,
}

impl ScanReport {
    pub fn count(&self, c: Category) -> usize {
        self.counts.get(&c).copied().unwrap_or(0)
    }

    pub fn alarms(&self) -> usize {
        self.count(Category::SoundnessAlarm)
    }
}

fn draw<R: Rng + ?Sized>(rng: &mut R, [lo, hi]: [f64; 2]) -> f64 {
    if lo == hi {
        lo
    } else {
        rng.random_range(lo..hi)
    }
}

fn insert_path(obj: &mut Map<String, Value>, key: &str, value: Value) {
    match key.split_once('.') {
        Some((head, rest)) => {
            let child = obj.entry(head).or_insert_with(|| Value::Object(Map::new()));
            if let Value::Object(m) = child {
                insert_path(m, rest, value);
            }
        }
        None => {
            obj.insert(key.to_string(), value);
        }
    }
}

/// Draws sample `index` as a case for `config.theorem`.
pub fn sample_case(config: &ScanConfig, index: usize) -> Result<TheoremCase> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(index as u64);
    let mut obj = Map::new();
    obj.insert("theorem".into(), Value::String(config.theorem.as_str().into()));
    for (key, range) in &config.ranges {
        let mut v: Vec<f64> = range.intervals().iter().map(|&iv| draw(&mut rng, iv)).collect();
        if WEIGHT_KEYS.contains(&key.as_str()) {
            let s: f64 = v.iter().sum();
            v.iter_mut().for_each(|x| *x /= s);
        }
        if key == "omega" {
            let chain: Vec<Value> = v
                .iter()
                .zip(&config.pairs)
                .map(|(w, pr)| serde_json::json!({ "omega": w, "pair": pr }))
                .collect();
            obj.insert("chain".into(), Value::Array(chain));
            continue;
        }
        let value = match range {
            Range::Scalar(_) => Value::from(v[0]),
            Range::Vector(_) => Value::from(v),
        };
        insert_path(&mut obj, key, value);
    }
    Ok(serde_json::from_value(Value::Object(obj))?)
}

fn classify(report: &ConditionReport, verdict: &OrderVerdict) -> Category {
    match (report.all_held, verdict.status) {
        (_, Status::Inconclusive) => Category::Inconclusive,
        (true, Status::Violated) => Category::SoundnessAlarm,
        (true, Status::HoldsOnGrid) => Category::Consistent,
        (false, Status::HoldsOnGrid) => Category::HoldsWithoutHypotheses,
        (false, Status::Violated) => Category::ViolatedWithoutHypotheses,
    }
}

fn run_sample(config: &ScanConfig, grid: &Grid, index: usize) -> Finding {
    let invalid = |e: Error| Finding {
        index,
        category: Category::Invalid,
        case: None,
        report: None,
        verdict: None,
        error: Some(e.to_string()),
    };
    let case = match sample_case(config, index) {
        Ok(c) => c,
        Err(e) => return invalid(e),
    };
    let (report, (m1, m2)) = match case.check().and_then(|r| Ok((r, case.mixtures()?))) {
        Ok(v) => v,
        Err(e) => return invalid(e),
    };
    let verdict = check_order(case.conclusion_kind(), &m1, &m2, grid);
    Finding {
        index,
        category: classify(&report, &verdict),
        case: Some(case),
        report: Some(report),
        verdict: Some(verdict),
        error: None,
    }
}

/// Runs the scan; `grid` overrides the config's grid.
pub fn run_scan(config: &ScanConfig, grid: Option<&Grid>) -> Result<ScanReport> {
    config.validate()?;
    let grid = grid.cloned().or(config.grid).unwrap_or_default();
    let n = config.effective_samples();
    let results: Vec<Finding> = (0..n).into_par_iter().map(|i| run_sample(config, &grid, i)).collect();
    let mut counts = BTreeMap::new();
    for f in &results {
        *counts.entry(f.category).or_insert(0) += 1;
    }
    let findings = results.into_iter().filter(|f| f.category != Category::Consistent).collect();
    Ok(ScanReport { theorem: config.theorem, seed: config.seed, samples: n, grid, counts, findings })
}
