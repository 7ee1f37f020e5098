//! Grid checks of the usual stochastic, reversed hazard rate, likelihood
//! ratio and ageing-faster-in-reversed-hazard orders between two mixtures.
//!
//! Every check reads `m1 <= m2` in the named order. A `holds_on_grid`
//! verdict is evidence on the evaluated points, not a proof.
//!
//! Ratios are compared in log space; the tolerance band on a compared value
//! `v` is `1e-12 * (1 + |v|)`.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mixture::{FiniteMixture, PointEval};

pub const DEFAULT_X_MIN: f64 = 1e-4;
pub const DEFAULT_X_MAX: f64 = 1e4;
pub const DEFAULT_POINTS: usize = 2000;
/// Relative part of the tolerance band `TOL * (1 + |v|)`.
pub const TOL: f64 = 1e-12;
/// Both compared quantities below this value: the point is skipped.
pub const UNDERFLOW: f64 = 1e-300;
/// Skipped fraction above which a verdict without violations is inconclusive.
pub const MAX_SKIPPED_FRACTION: f64 = 0.1;
/// Relative bracket width at which crossing bisection stops.
pub const CROSSING_REL_WIDTH: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    #[serde(alias = "logarithmic")]
    Log,
    #[serde(alias = "lin")]
    Linear,
}

/// Evaluation points `x_min = x_0 < ... < x_{n-1} = x_max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawGrid")]
pub struct Grid {
    x_min: f64,
    x_max: f64,
    points: usize,
    spacing: Spacing,
}

#[derive(Deserialize)]
struct RawGrid {
    x_min: f64,
    x_max: f64,
    points: usize,
    #[serde(default = "default_spacing")]
    spacing: Spacing,
}

fn default_spacing() -> Spacing {
    Spacing::Log
}

impl TryFrom<RawGrid> for Grid {
    type Error = Error;

    fn try_from(r: RawGrid) -> Result<Self> {
        Grid::new(r.x_min, r.x_max, r.points, r.spacing)
    }
}

impl Default for Grid {
    fn default() -> Self {
        Grid { x_min: DEFAULT_X_MIN, x_max: DEFAULT_X_MAX, points: DEFAULT_POINTS, spacing: Spacing::Log }
    }
}

impl Grid {
    pub fn new(x_min: f64, x_max: f64, points: usize, spacing: Spacing) -> Result<Self> {
        if !(x_min.is_finite() && x_max.is_finite() && x_min > 0.0 && x_min < x_max) {
            return Err(Error::invalid(format!("grid needs 0 < x_min < x_max, got [{x_min}, {x_max}]")));
        }
        if points < 2 {
            return Err(Error::invalid(format!("grid needs at least 2 points, got {points}")));
        }
        Ok(Grid { x_min, x_max, points, spacing })
    }

    pub fn log(x_min: f64, x_max: f64, points: usize) -> Result<Self> {
        Self::new(x_min, x_max, points, Spacing::Log)
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn len(&self) -> usize {
        self.points
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> Spacing {
        self.spacing
    }

    /// Point `i`; the same fraction `i / (n-1)` always yields the same `x`,
    /// so [`Grid::refined`] reproduces every original point bit for bit.
    pub fn point(&self, i: usize) -> f64 {
        let last = self.points - 1;
        if i == 0 {
            return self.x_min;
        }
        if i == last {
            return self.x_max;
        }
        let t = i as f64 / last as f64;
        match self.spacing {
            Spacing::Log => {
                let (a, b) = (self.x_min.ln(), self.x_max.ln());
                (a + t * (b - a)).exp()
            }
            Spacing::Linear => self.x_min + t * (self.x_max - self.x_min),
        }
    }

    pub fn xs(&self) -> Vec<f64> {
        (0..self.points).map(|i| self.point(i)).collect()
    }

    /// Grid with `factor` times as many intervals that contains every point
    /// of `self`.
    pub fn refined(&self, factor: usize) -> Grid {
        let factor = factor.max(1);
        Grid { points: (self.points - 1) * factor + 1, ..*self }
    }
}

/// `MIN:MAX:N[:log|lin]`, e.g. `1e-4:1e4:2000:log`.
impl FromStr for Grid {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || Error::invalid(format!("grid `{s}` is not MIN:MAX:N[:log|lin]"));
        if !(3..=4).contains(&parts.len()) {
            return Err(bad());
        }
        let x_min: f64 = parts[0].trim().parse().map_err(|_| bad())?;
        let x_max: f64 = parts[1].trim().parse().map_err(|_| bad())?;
        let points: usize = parts[2].trim().parse().map_err(|_| bad())?;
        let spacing = match parts.get(3).map(|p| p.trim()) {
            None | Some("log") => Spacing::Log,
            Some("lin") | Some("linear") => Spacing::Linear,
            Some(_) => return Err(bad()),
        };
        Grid::new(x_min, x_max, points, spacing)
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sp = match self.spacing {
            Spacing::Log => "log",
            Spacing::Linear => "lin",
        };
        write!(f, "{:e}:{:e}:{}:{}", self.x_min, self.x_max, self.points, sp)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OrderKind {
    #[serde(rename = "st")]
    St,
    #[serde(rename = "rh")]
    Rh,
    #[serde(rename = "lr")]
    Lr,
    #[serde(rename = "r-rh", alias = "r_rh")]
    RRh,
}

impl OrderKind {
    pub const ALL: [OrderKind; 4] = [OrderKind::St, OrderKind::Rh, OrderKind::Lr, OrderKind::RRh];

    pub fn as_str(self) -> &'static str {
        match self {
            OrderKind::St => "st",
            OrderKind::Rh => "rh",
            OrderKind::Lr => "lr",
            OrderKind::RRh => "r-rh",
        }
    }
}

impl fmt::Display for OrderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for OrderKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "st" => Ok(OrderKind::St),
            "rh" => Ok(OrderKind::Rh),
            "lr" => Ok(OrderKind::Lr),
            "r-rh" | "r_rh" => Ok(OrderKind::RRh),
            _ => Err(Error::invalid(format!("unknown order kind `{s}` (st, rh, lr, r-rh)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    HoldsOnGrid,
    Violated,
    Inconclusive,
}

/// A grid point where `lhs <= rhs` fails beyond tolerance.
///
/// st: `(sf1, sf2)`. rh: `(r1, r2)`. lr: consecutive density ratios
/// `(f2/f1 at the previous point, f2/f1 here)`. r-rh: `(r1/r2 here,
/// r1/r2 at the previous point)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub x: f64,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderVerdict {
    pub kind: OrderKind,
    pub status: Status,
    pub witness: Option<Witness>,
    /// Sign change of the pointwise deciding function, bracketed by the two
    /// grid points around its first violation.
    pub refined_crossing: Option<f64>,
    pub reason: Option<String>,
    pub points: usize,
    pub skipped: usize,
}

impl OrderVerdict {
    pub fn holds(&self) -> bool {
        self.status == Status::HoldsOnGrid
    }

    pub fn violated(&self) -> bool {
        self.status == Status::Violated
    }
}

fn band(v: f64) -> f64 {
    TOL * (1.0 + v.abs())
}

/// `lhs <= rhs` within the band around `rhs`.
fn within(lhs: f64, rhs: f64) -> bool {
    lhs <= rhs + band(rhs)
}

/// A ratio, given as its log, fell from `prev` to `next` beyond the band.
fn log_drops(prev: f64, next: f64) -> bool {
    let c = TOL * (1.0 + (-prev).exp());
    c < 1.0 && next < prev + (-c).ln_1p()
}

/// A ratio, given as its log, rose from `prev` to `next` beyond the band.
fn log_rises(prev: f64, next: f64) -> bool {
    let c = TOL * (1.0 + (-prev).exp());
    next > prev + c.ln_1p()
}

pub(crate) fn evaluate(m: &FiniteMixture, xs: &[f64]) -> Vec<PointEval> {
    xs.par_iter().map(|&x| m.eval(x)).collect()
}

/// The pointwise quantities `(a, b)` whose order `a <= b` decides each kind
/// locally. For lr and r-rh these are log-derivatives of the ratio.
fn decider(kind: OrderKind, e1: &PointEval, e2: &PointEval) -> (f64, f64) {
    match kind {
        OrderKind::St => (e1.sf, e2.sf),
        OrderKind::Rh => (e1.rh, e2.rh),
        OrderKind::Lr => (e1.slope, e2.slope),
        OrderKind::RRh => (e1.slope - e1.rh, e2.slope - e2.rh),
    }
}

/// Whether the compared quantities at a point are both lost to underflow.
fn underflowed(kind: OrderKind, e1: &PointEval, e2: &PointEval) -> bool {
    let ln_floor = UNDERFLOW.ln();
    match kind {
        OrderKind::St => e1.sf < UNDERFLOW && e2.sf < UNDERFLOW,
        OrderKind::Rh => e1.ln_cdf < ln_floor && e2.ln_cdf < ln_floor,
        OrderKind::Lr => e1.ln_pdf < ln_floor && e2.ln_pdf < ln_floor,
        OrderKind::RRh => e1.rh < UNDERFLOW && e2.rh < UNDERFLOW,
    }
}

/// Bisects the pointwise decider between `lo` (holding) and `hi` (violating).
fn bisect_crossing(kind: OrderKind, m1: &FiniteMixture, m2: &FiniteMixture, mut lo: f64, mut hi: f64) -> f64 {
    while hi - lo > CROSSING_REL_WIDTH * hi {
        let mid = 0.5 * (lo + hi);
        let (a, b) = decider(kind, &m1.eval(mid), &m2.eval(mid));
        if within(a, b) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn first_pointwise_violation(kind: OrderKind, e1: &[PointEval], e2: &[PointEval], skip: &[bool]) -> Option<usize> {
    (0..e1.len()).find(|&k| {
        let (a, b) = decider(kind, &e1[k], &e2[k]);
        !skip[k] && !within(a, b)
    })
}

fn crossing(
    kind: OrderKind,
    m1: &FiniteMixture,
    m2: &FiniteMixture,
    xs: &[f64],
    e1: &[PointEval],
    e2: &[PointEval],
    skip: &[bool],
) -> Option<f64> {
    let j = first_pointwise_violation(kind, e1, e2, skip)?;
    if j == 0 || skip[j - 1] {
        return None;
    }
    Some(bisect_crossing(kind, m1, m2, xs[j - 1], xs[j]))
}

/// Index of the first consecutive pair of unskipped points where the
/// log-ratio moves the wrong way, together with the two log values.
fn first_monotone_violation(ln_ratio: &[f64], skip: &[bool], increasing: bool) -> Option<(usize, f64, f64)> {
    let mut prev: Option<f64> = None;
    for (k, (&v, &s)) in ln_ratio.iter().zip(skip).enumerate() {
        if s || v.is_nan() {
            continue;
        }
        if let Some(p) = prev {
            let bad = if increasing { log_drops(p, v) } else { log_rises(p, v) };
            if bad {
                return Some((k, p, v));
            }
        }
        prev = Some(v);
    }
    None
}

struct Evaluated {
    xs: Vec<f64>,
    e1: Vec<PointEval>,
    e2: Vec<PointEval>,
    skip: Vec<bool>,
    skipped: usize,
}

fn evaluate_pair(kind: OrderKind, m1: &FiniteMixture, m2: &FiniteMixture, g: &Grid) -> Evaluated {
    let xs = g.xs();
    let e1 = evaluate(m1, &xs);
    let e2 = evaluate(m2, &xs);
    let skip: Vec<bool> = e1.iter().zip(&e2).map(|(a, b)| underflowed(kind, a, b)).collect();
    let skipped = skip.iter().filter(|s| **s).count();
    Evaluated { xs, e1, e2, skip, skipped }
}

fn too_many_skipped(skipped: usize, points: usize) -> bool {
    skipped as f64 > MAX_SKIPPED_FRACTION * points as f64
}

fn verdict(kind: OrderKind, g: &Grid, ev: &Evaluated) -> OrderVerdict {
    OrderVerdict {
        kind,
        status: Status::HoldsOnGrid,
        witness: None,
        refined_crossing: None,
        reason: None,
        points: g.len(),
        skipped: ev.skipped,
    }
}

/// Finishes a verdict given an optional violation; a genuine violation
/// outranks the skipped-points rule.
fn conclude(mut v: OrderVerdict, violation: Option<(Witness, Option<f64>)>) -> OrderVerdict {
    if let Some((w, c)) = violation {
        v.status = Status::Violated;
        v.witness = Some(w);
        v.refined_crossing = c;
    } else if too_many_skipped(v.skipped, v.points) {
        v.status = Status::Inconclusive;
        v.reason = Some(format!("{} of {} grid points underflowed", v.skipped, v.points));
    }
    v
}

/// `m1 <=_st m2`: `sf1(x) <= sf2(x)` at every grid point.
pub fn check_st(m1: &FiniteMixture, m2: &FiniteMixture, g: &Grid) -> OrderVerdict {
    let kind = OrderKind::St;
    let ev = evaluate_pair(kind, m1, m2, g);
    let violation = first_pointwise_violation(kind, &ev.e1, &ev.e2, &ev.skip).map(|k| {
        let w = Witness { x: ev.xs[k], lhs: ev.e1[k].sf, rhs: ev.e2[k].sf };
        (w, crossing(kind, m1, m2, &ev.xs, &ev.e1, &ev.e2, &ev.skip))
    });
    conclude(verdict(kind, g, &ev), violation)
}

/// `m1 <=_rh m2`: `F2/F1` nondecreasing and `r1 <= r2` pointwise. The two
/// criteria are equivalent; disagreement makes the verdict inconclusive.
pub fn check_rh(m1: &FiniteMixture, m2: &FiniteMixture, g: &Grid) -> OrderVerdict {
    let kind = OrderKind::Rh;
    let ev = evaluate_pair(kind, m1, m2, g);
    let ln_ratio: Vec<f64> = ev.e1.iter().zip(&ev.e2).map(|(a, b)| b.ln_cdf - a.ln_cdf).collect();
    let by_ratio = first_monotone_violation(&ln_ratio, &ev.skip, true);
    let by_rate = first_pointwise_violation(kind, &ev.e1, &ev.e2, &ev.skip);
    let v = verdict(kind, g, &ev);
    match (by_ratio, by_rate) {
        (None, None) => conclude(v, None),
        (Some(_), Some(k)) => {
            let w = Witness { x: ev.xs[k], lhs: ev.e1[k].rh, rhs: ev.e2[k].rh };
            conclude(v, Some((w, crossing(kind, m1, m2, &ev.xs, &ev.e1, &ev.e2, &ev.skip))))
        }
        (ratio, rate) => {
            let (which, other) = if ratio.is_some() {
                ("cdf ratio decreases", "reversed hazard rates are ordered")
            } else {
                ("reversed hazard rates cross", "cdf ratio is nondecreasing")
            };
            let at = ratio.map(|(k, _, _)| ev.xs[k]).or(rate.map(|k| ev.xs[k])).unwrap_or(f64::NAN);
            OrderVerdict {
                status: Status::Inconclusive,
                reason: Some(format!("criteria disagree: {which} at x = {at:e} but the {other} on the grid")),
                ..v
            }
        }
    }
}

/// `m1 <=_lr m2`: `f2/f1` nondecreasing along the grid.
pub fn check_lr(m1: &FiniteMixture, m2: &FiniteMixture, g: &Grid) -> OrderVerdict {
    let kind = OrderKind::Lr;
    let ev = evaluate_pair(kind, m1, m2, g);
    let ln_ratio: Vec<f64> = ev.e1.iter().zip(&ev.e2).map(|(a, b)| b.ln_pdf - a.ln_pdf).collect();
    let violation = first_monotone_violation(&ln_ratio, &ev.skip, true).map(|(k, prev, next)| {
        let w = Witness { x: ev.xs[k], lhs: prev.exp(), rhs: next.exp() };
        (w, crossing(kind, m1, m2, &ev.xs, &ev.e1, &ev.e2, &ev.skip))
    });
    conclude(verdict(kind, g, &ev), violation)
}

/// `m1 <=_{R-rh} m2`: `r1/r2` nonincreasing along the grid.
pub fn check_r_rh(m1: &FiniteMixture, m2: &FiniteMixture, g: &Grid) -> OrderVerdict {
    let kind = OrderKind::RRh;
    let ev = evaluate_pair(kind, m1, m2, g);
    let ln_ratio: Vec<f64> = ev.e1.iter().zip(&ev.e2).map(|(a, b)| a.rh.ln() - b.rh.ln()).collect();
    let violation = first_monotone_violation(&ln_ratio, &ev.skip, false).map(|(k, prev, next)| {
        let w = Witness { x: ev.xs[k], lhs: next.exp(), rhs: prev.exp() };
        (w, crossing(kind, m1, m2, &ev.xs, &ev.e1, &ev.e2, &ev.skip))
    });
    conclude(verdict(kind, g, &ev), violation)
}

pub fn check_order(kind: OrderKind, m1: &FiniteMixture, m2: &FiniteMixture, g: &Grid) -> OrderVerdict {
    match kind {
        OrderKind::St => check_st(m1, m2, g),
        OrderKind::Rh => check_rh(m1, m2, g),
        OrderKind::Lr => check_lr(m1, m2, g),
        OrderKind::RRh => check_r_rh(m1, m2, g),
    }
}

/// Function tabulated by [`difference_curve`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CurveKind {
    /// `sf1(x)`; the second mixture is ignored.
    Sf,
    /// `sf1(x) - sf2(x)`.
    SfDiff,
    /// `F1(x) / F2(x)`.
    CdfRatio,
    /// `f1(x) / f2(x)`.
    PdfRatio,
    /// `r1(x) / r2(x)`.
    RhRatio,
}

impl FromStr for CurveKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sf" => Ok(CurveKind::Sf),
            "sfdiff" => Ok(CurveKind::SfDiff),
            "cdfratio" => Ok(CurveKind::CdfRatio),
            "pdfratio" => Ok(CurveKind::PdfRatio),
            "rhratio" => Ok(CurveKind::RhRatio),
            _ => Err(Error::invalid(format!("unknown curve `{s}` (sf, sfdiff, cdfratio, pdfratio, rhratio)"))),
        }
    }
}

/// One curve row; `value` is `None` where a ratio is `0/0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurveRow {
    pub x: f64,
    pub value: Option<f64>,
}

/// Ratio from logs; `None` when both quantities underflow, as in the checks.
fn log_ratio(a: f64, b: f64) -> Option<f64> {
    let floor = UNDERFLOW.ln();
    let r = (a - b).exp();
    (!(a < floor && b < floor) && !r.is_nan()).then_some(r)
}

pub fn difference_curve(m1: &FiniteMixture, m2: &FiniteMixture, g: &Grid, which: CurveKind) -> Vec<CurveRow> {
    let xs = g.xs();
    let e1 = evaluate(m1, &xs);
    let e2 = match which {
        CurveKind::Sf => Vec::new(),
        _ => evaluate(m2, &xs),
    };
    xs.iter()
        .enumerate()
        .map(|(k, &x)| {
            let value = match which {
                CurveKind::Sf => Some(e1[k].sf),
                CurveKind::SfDiff => Some(e1[k].sf - e2[k].sf),
                CurveKind::CdfRatio => log_ratio(e1[k].ln_cdf, e2[k].ln_cdf),
                CurveKind::PdfRatio => log_ratio(e1[k].ln_pdf, e2[k].ln_pdf),
                CurveKind::RhRatio => log_ratio(e1[k].rh.ln(), e2[k].rh.ln()),
            };
            CurveRow { x, value }
        })
        .collect()
}

/// Writes `x,value,defined` rows with 17 significant digits.
pub fn write_curve_csv<W: Write>(mut out: W, rows: &[CurveRow]) -> Result<()> {
    writeln!(out, "x,value,defined")?;
    for r in rows {
        match r.value {
            Some(v) => writeln!(out, "{:.16e},{:.16e},true", r.x, v)?,
            None => writeln!(out, "{:.16e},NaN,false", r.x)?,
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mix(w: &[f64], a: &[f64], b: &[f64]) -> FiniteMixture {
        FiniteMixture::from_vectors(w, a, b).unwrap()
    }

    fn g() -> Grid {
        Grid::default()
    }

    #[test]
    fn grid_endpoints_and_parsing() {
        let grid = g();
        let xs = grid.xs();
        assert_eq!(xs.len(), 2000);
        assert_eq!(xs[0], 1e-4);
        assert_eq!(xs[1999], 1e4);
        assert!(xs.windows(2).all(|w| w[0] < w[1]));
        let parsed: Grid = "1e-4:1e4:2000:log".parse().unwrap();
        assert_eq!(parsed, grid);
        assert_eq!(grid.to_string().parse::<Grid>().unwrap(), grid);
        let lin: Grid = "1:2:3:lin".parse().unwrap();
        assert_eq!(lin.xs(), vec![1.0, 1.5, 2.0]);
        for bad in ["0:1:10", "2:1:10", "1:2:1", "1:2", "1:2:3:cubic"] {
            assert!(bad.parse::<Grid>().is_err(), "{bad}");
        }
    }

    #[test]
    fn refined_grid_contains_original_points() {
        let grid = Grid::log(1e-3, 1e3, 101).unwrap();
        let fine = grid.refined(4);
        let fx = fine.xs();
        for (i, x) in grid.xs().iter().enumerate() {
            assert_eq!(fx[4 * i], *x);
        }
    }

    #[test]
    fn order_kind_names() {
        for k in OrderKind::ALL {
            assert_eq!(k.as_str().parse::<OrderKind>().unwrap(), k);
            assert_eq!(serde_json::to_string(&k).unwrap(), format!("\"{}\"", k.as_str()));
        }
        assert!("hr".parse::<OrderKind>().is_err());
    }

    #[test]
    fn equal_mixtures_hold_every_order() {
        let m = mix(&[0.2, 0.5, 0.3], &[1.0, 2.0, 3.0], &[0.5, 4.0, 9.0]);
        for k in OrderKind::ALL {
            let v = check_order(k, &m, &m, &g());
            assert!(v.holds(), "{k}: {v:?}");
            assert!(v.witness.is_none());
        }
    }

    #[test]
    fn st_example_holds_and_counterexample_fails() {
        let a = [0.5, 0.4, 0.3];
        let m_star = mix(&[0.3, 0.3, 0.4], &a, &[1.0; 3]);
        let m = mix(&[0.2, 0.2, 0.6], &a, &[1.0; 3]);
        assert!(check_st(&m_star, &m, &g()).holds());

        let b = [5.2, 15.8, 5.6];
        let p = mix(&[0.2, 0.6, 0.2], &[1.0; 3], &b);
        let p_star = mix(&[0.2, 0.5, 0.3], &[1.0; 3], &b);
        let v = check_st(&p, &p_star, &g());
        assert!(v.violated());
        let w = v.witness.unwrap();
        assert!(w.lhs > w.rhs);

        // survival curves that cross: the refined crossing is a sign change
        let a = [3.5, 4.8, 5.6];
        let p = mix(&[0.1, 0.7, 0.2], &a, &[20.0; 3]);
        let p_star = mix(&[0.2, 0.5, 0.3], &a, &[20.0; 3]);
        let v = check_st(&p_star, &p, &g());
        assert!(v.violated());
        let c = v.refined_crossing.unwrap();
        let xs = g().xs();
        let j = xs.iter().position(|x| *x >= v.witness.unwrap().x).unwrap();
        assert!(xs[j - 1] <= c && c <= xs[j]);
        let below = c * (1.0 - 1e-6);
        let above = c * (1.0 + 1e-6);
        assert!(p_star.sf(below).unwrap() <= p.sf(below).unwrap());
        assert!(p_star.sf(above).unwrap() > p.sf(above).unwrap());
    }

    #[test]
    fn rh_example_and_counterexample() {
        let m = mix(&[0.1, 0.7, 0.2], &[5.0, 8.0, 6.0], &[2.0, 1.0, 1.0]);
        let m_star = mix(&[0.2, 0.5, 0.3], &[3.0, 4.0, 2.0], &[5.0, 3.0, 6.0]);
        assert!(check_rh(&m, &m_star, &g()).holds());

        let m = mix(&[0.6, 0.25, 0.15], &[1.0, 3.0, 5.0], &[3.0, 6.0, 9.0]);
        let m_star = mix(&[0.45, 0.3, 0.25], &[2.0, 4.0, 6.0], &[25.0, 30.0, 35.0]);
        let v = check_rh(&m, &m_star, &g());
        assert!(v.violated(), "{v:?}");
    }

    #[test]
    fn lr_example_and_counterexample() {
        let m = mix(&[0.2, 0.4, 0.4], &[2.0, 4.0, 6.0], &[25.0, 13.0, 9.0]);
        let m_star = mix(&[0.3, 0.5, 0.2], &[8.0, 10.0, 12.0], &[3.0, 4.0, 1.0]);
        assert!(check_lr(&m_star, &m, &g()).holds());

        let m = mix(&[0.1, 0.2, 0.7], &[3.0, 6.0, 9.0], &[14.0, 15.0, 11.0]);
        let m_star = mix(&[0.6, 0.3, 0.1], &[5.0, 8.0, 12.0], &[4.0, 2.0, 3.0]);
        let v = check_lr(&m_star, &m, &g());
        assert!(v.violated(), "{v:?}");
        let w = v.witness.unwrap();
        assert!(w.lhs > w.rhs);
    }

    #[test]
    fn r_rh_swapped_orientation_fails() {
        let m = mix(&[0.1, 0.3, 0.6], &[2.0; 3], &[0.1, 0.2, 0.3]);
        let m_star = mix(&[0.2, 0.3, 0.5], &[2.0; 3], &[0.5, 1.0, 2.0]);
        // the ratio falls over most of the range, so the reverse order fails
        let v = check_r_rh(&m_star, &m, &g());
        assert!(v.violated());
        // away from the origin the forward order holds
        let away = Grid::log(1e-2, 1e4, 2000).unwrap();
        assert!(check_r_rh(&m, &m_star, &away).holds());
    }

    #[test]
    fn verdicts_are_deterministic() {
        let b = [5.2, 15.8, 5.6];
        let p = mix(&[0.2, 0.6, 0.2], &[1.0; 3], &b);
        let p_star = mix(&[0.2, 0.5, 0.3], &[1.0; 3], &b);
        for k in OrderKind::ALL {
            let a = check_order(k, &p, &p_star, &g());
            let b = check_order(k, &p, &p_star, &g());
            assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        }
    }

    #[test]
    fn underflow_makes_verdict_inconclusive() {
        // cdfs vanish below 1e-300 on a large share of a grid near the origin
        let m1 = mix(&[1.0], &[1.0], &[400.0]);
        let m2 = mix(&[1.0], &[1.0], &[400.0]);
        let grid = Grid::log(1e-6, 1.0, 100).unwrap();
        let v = check_rh(&m1, &m2, &grid);
        assert_eq!(v.status, Status::Inconclusive, "{v:?}");
        assert!(v.skipped > 10);
        assert!(v.reason.unwrap().contains("underflowed"));
    }

    #[test]
    fn curve_values_and_csv() {
        let m = mix(&[0.4, 0.6], &[1.0, 2.0], &[3.0, 0.5]);
        let grid = Grid::log(0.1, 10.0, 5).unwrap();
        let rows = difference_curve(&m, &m, &grid, CurveKind::RhRatio);
        assert!(rows.iter().all(|r| r.value == Some(1.0)));
        let rows = difference_curve(&m, &m, &grid, CurveKind::SfDiff);
        assert!(rows.iter().all(|r| r.value == Some(0.0)));
        let mut buf = Vec::new();
        write_curve_csv(&mut buf, &rows).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("x,value,defined"));
        assert_eq!(lines.next(), Some("1.0000000000000001e-1,0.0000000000000000e0,true"));
        let undefined = [CurveRow { x: 1.0, value: None }];
        let mut buf = Vec::new();
        write_curve_csv(&mut buf, &undefined).unwrap();
        assert!(String::from_utf8(buf).unwrap().ends_with("NaN,false\n"));
    }

    #[test]
    fn cdf_ratio_zero_over_zero_is_undefined() {
        let m = mix(&[1.0], &[1.0], &[1e5]);
        let grid = Grid::log(1e-4, 1e-3, 3).unwrap();
        let rows = difference_curve(&m, &m, &grid, CurveKind::CdfRatio);
        assert!(rows.iter().all(|r| r.value.is_none()), "{rows:?}");
    }

    fn arb_mixture() -> impl Strategy<Value = FiniteMixture> {
        (1usize..=3)
            .prop_flat_map(|n| {
                (
                    prop::collection::vec(0.05f64..1.0, n),
                    prop::collection::vec(0.2f64..6.0, n),
                    prop::collection::vec(0.2f64..12.0, n),
                )
            })
            .prop_map(|(w, a, b)| {
                let s: f64 = w.iter().sum();
                let w: Vec<f64> = w.iter().map(|v| v / s).collect();
                FiniteMixture::from_vectors(&w, &a, &b).unwrap()
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn violation_survives_refinement(m1 in arb_mixture(), m2 in arb_mixture()) {
            let coarse = Grid::log(1e-3, 1e3, 200).unwrap();
            let fine = coarse.refined(3);
            for k in OrderKind::ALL {
                let a = check_order(k, &m1, &m2, &coarse);
                if a.violated() {
                    let b = check_order(k, &m1, &m2, &fine);
                    prop_assert!(b.violated(), "{k}: coarse {a:?} fine {b:?}");
                }
            }
        }
    }
}
