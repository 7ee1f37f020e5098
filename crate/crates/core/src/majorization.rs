//! Majorization orders on real vectors, the oppositely-ordered class of
//! 2 x n parameter matrices, and T-transform algebra for chain majorization.
//!
//! Orientation follows the usual convention with ascending order statistics
//! `a(1) <= ... <= a(n)`: `a` majorizes `b` when every ascending prefix sum of
//! `a` is at most the matching prefix sum of `b` and the totals agree.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute slack on prefix and total sums.
pub const MAJORIZATION_TOL: f64 = 1e-12;
/// Slack on the pairwise products `(r_i - r_j)(t_i - t_j) <= 0`.
pub const SCRIPT_L_TOL: f64 = 1e-12;
/// Entrywise tolerance for matching a chain product against its target.
pub const CHAIN_TOL: f64 = 1e-10;
/// Row agreement tolerance when inferring a single T-transform.
pub const INFER_TOL: f64 = 1e-9;

/// Non-empty vector of finite reals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct RealVector(Vec<f64>);

impl RealVector {
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::invalid("vector must have at least one entry"));
        }
        if let Some(v) = entries.iter().find(|v| !v.is_finite()) {
            return Err(Error::invalid(format!("vector entries must be finite, got {v}")));
        }
        Ok(RealVector(entries))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sum(&self) -> f64 {
        crate::sum::compensated(self.0.iter().copied())
    }

    pub fn max(&self) -> f64 {
        self.0.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.0.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Ascending order statistics (stable sort).
    pub fn sorted_ascending(&self) -> Vec<f64> {
        let mut v = self.0.clone();
        v.sort_by(f64::total_cmp);
        v
    }
}

impl TryFrom<Vec<f64>> for RealVector {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        RealVector::new(v)
    }
}

impl From<RealVector> for Vec<f64> {
    fn from(v: RealVector) -> Self {
        v.0
    }
}

impl std::ops::Index<usize> for RealVector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

fn same_len(a: &RealVector, b: &RealVector) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch { expected: a.len(), found: b.len() });
    }
    Ok(())
}

fn prefix_sums(v: &[f64]) -> Vec<f64> {
    let mut acc = crate::sum::CompensatedSum::default();
    v.iter()
        .map(|&x| {
            acc.add(x);
            acc.value()
        })
        .collect()
}

/// `a` majorizes `b`: ascending prefix sums of `a` never exceed those of `b`
/// for `i < n`, and the totals are equal.
pub fn majorizes(a: &RealVector, b: &RealVector) -> Result<bool> {
    same_len(a, b)?;
    let pa = prefix_sums(&a.sorted_ascending());
    let pb = prefix_sums(&b.sorted_ascending());
    let n = pa.len();
    let prefixes = pa[..n - 1]
        .iter()
        .zip(&pb[..n - 1])
        .all(|(x, y)| *x <= *y + MAJORIZATION_TOL);
    Ok(prefixes && (pa[n - 1] - pb[n - 1]).abs() <= MAJORIZATION_TOL)
}

/// `a` weakly supermajorizes `b`: every ascending prefix sum of `a`
/// (including the total) is at most that of `b`.
pub fn weak_supermajorizes(a: &RealVector, b: &RealVector) -> Result<bool> {
    same_len(a, b)?;
    let pa = prefix_sums(&a.sorted_ascending());
    let pb = prefix_sums(&b.sorted_ascending());
    Ok(pa.iter().zip(&pb).all(|(x, y)| *x <= *y + MAJORIZATION_TOL))
}

/// `a` weakly submajorizes `b`: every sum of the `k` largest entries of `a`
/// is at least that of `b`.
pub fn weak_submajorizes(a: &RealVector, b: &RealVector) -> Result<bool> {
    same_len(a, b)?;
    let mut sa = a.sorted_ascending();
    let mut sb = b.sorted_ascending();
    sa.reverse();
    sb.reverse();
    let pa = prefix_sums(&sa);
    let pb = prefix_sums(&sb);
    Ok(pa.iter().zip(&pb).all(|(x, y)| *x + MAJORIZATION_TOL >= *y))
}

/// Evaluates `f` on a majorizing pair and reports whether `f(a) >= f(b)`.
/// Evidence of Schur-convexity on one pair, not a proof.
pub fn schur_probe<F>(f: F, a: &RealVector, b: &RealVector) -> Result<bool>
where
    F: Fn(&RealVector) -> f64,
{
    if !majorizes(a, b)? {
        return Err(Error::invalid("schur_probe requires the first vector to majorize the second"));
    }
    Ok(f(a) >= f(b))
}

/// A 2 x n matrix with strictly positive entries: a proportion row on top
/// and one shape-parameter row below.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMatrix")]
pub struct ParamMatrix2xN {
    row1: RealVector,
    row2: RealVector,
}

#[derive(Deserialize)]
struct RawMatrix {
    row1: RealVector,
    row2: RealVector,
}

impl TryFrom<RawMatrix> for ParamMatrix2xN {
    type Error = Error;

    fn try_from(raw: RawMatrix) -> Result<Self> {
        ParamMatrix2xN::new(raw.row1, raw.row2)
    }
}

impl ParamMatrix2xN {
    pub fn new(row1: RealVector, row2: RealVector) -> Result<Self> {
        same_len(&row1, &row2)?;
        if let Some(v) = row1.as_slice().iter().chain(row2.as_slice()).find(|v| **v <= 0.0) {
            return Err(Error::invalid(format!("matrix entries must be > 0, got {v}")));
        }
        Ok(ParamMatrix2xN { row1, row2 })
    }

    pub fn from_rows(row1: &[f64], row2: &[f64]) -> Result<Self> {
        Self::new(RealVector::new(row1.to_vec())?, RealVector::new(row2.to_vec())?)
    }

    pub fn row1(&self) -> &RealVector {
        &self.row1
    }

    pub fn row2(&self) -> &RealVector {
        &self.row2
    }

    pub fn n(&self) -> usize {
        self.row1.len()
    }

    fn column(&self, i: usize) -> (f64, f64) {
        (self.row1[i], self.row2[i])
    }

    /// Largest entrywise absolute difference to `other`.
    pub fn max_abs_diff(&self, other: &ParamMatrix2xN) -> Result<f64> {
        same_len(&self.row1, &other.row1)?;
        let d = |a: &RealVector, b: &RealVector| {
            a.as_slice()
                .iter()
                .zip(b.as_slice())
                .map(|(x, y)| (x - y).abs())
                .fold(0.0, f64::max)
        };
        Ok(d(&self.row1, &other.row1).max(d(&self.row2, &other.row2)))
    }
}

/// Column pairs `(i, j)`, `i < j`, 0-based, whose rows are similarly ordered.
pub fn script_l_violations(pm: &ParamMatrix2xN) -> Vec<(usize, usize)> {
    let n = pm.n();
    let mut out = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let (ri, ti) = pm.column(i);
            let (rj, tj) = pm.column(j);
            if (ri - rj) * (ti - tj) > SCRIPT_L_TOL {
                out.push((i, j));
            }
        }
    }
    out
}

/// Membership in the class of oppositely ordered matrices:
/// `(r_i - r_j)(t_i - t_j) <= 0` for every pair.
pub fn in_script_l(pm: &ParamMatrix2xN) -> bool {
    script_l_violations(pm).is_empty()
}

/// `T = omega I + (1 - omega) Pi`, with `Pi` swapping coordinates `i` and `j`.
///
/// Indices are 0-based in memory and 1-based in JSON (`"pair": [1, 2]`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawTTransform", into = "RawTTransform")]
pub struct TTransform {
    omega: f64,
    pair: (usize, usize),
}

#[derive(Serialize, Deserialize)]
struct RawTTransform {
    omega: f64,
    pair: [usize; 2],
}

impl TryFrom<RawTTransform> for TTransform {
    type Error = Error;

    fn try_from(raw: RawTTransform) -> Result<Self> {
        let [i, j] = raw.pair;
        if i == 0 || j == 0 {
            return Err(Error::invalid("T-transform pair indices are 1-based"));
        }
        TTransform::new(raw.omega, i - 1, j - 1)
    }
}

impl From<TTransform> for RawTTransform {
    fn from(t: TTransform) -> Self {
        RawTTransform { omega: t.omega, pair: [t.pair.0 + 1, t.pair.1 + 1] }
    }
}

impl TTransform {
    /// `i` and `j` are 0-based and must differ.
    pub fn new(omega: f64, i: usize, j: usize) -> Result<Self> {
        if !(0.0..=1.0).contains(&omega) {
            return Err(Error::invalid(format!("omega must lie in [0, 1], got {omega}")));
        }
        if i == j {
            return Err(Error::invalid("T-transform needs two distinct coordinates"));
        }
        Ok(TTransform { omega, pair: (i.min(j), i.max(j)) })
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// 0-based coordinate pair, smaller index first.
    pub fn pair(&self) -> (usize, usize) {
        self.pair
    }

    /// Product `self * other` of two transforms on the same pair, which is
    /// again a T-transform with `omega = a b + (1-a)(1-b)`.
    pub fn compose_same_pair(&self, other: &TTransform) -> Option<TTransform> {
        if self.pair != other.pair {
            return None;
        }
        let (a, b) = (self.omega, other.omega);
        let omega = (a * b + (1.0 - a) * (1.0 - b)).clamp(0.0, 1.0);
        Some(TTransform { omega, pair: self.pair })
    }
}

/// Right-multiplies `pm` by `t`: only columns `i` and `j` change.
pub fn apply_t_transform(pm: &ParamMatrix2xN, t: &TTransform) -> Result<ParamMatrix2xN> {
    let n = pm.n();
    let (i, j) = t.pair;
    if j >= n {
        return Err(Error::IndexOutOfRange { index: j, len: n });
    }
    let w = t.omega;
    let mix = |row: &RealVector| {
        let mut v = row.as_slice().to_vec();
        let (a, b) = (v[i], v[j]);
        v[i] = w * a + (1.0 - w) * b;
        v[j] = (1.0 - w) * a + w * b;
        v
    };
    ParamMatrix2xN::from_rows(&mix(&pm.row1), &mix(&pm.row2))
}

/// Applies the chain in order and returns every partial product
/// `P T1`, `P T1 T2`, ..., ending with the full product.
pub fn chain_products(p: &ParamMatrix2xN, ts: &[TTransform]) -> Result<Vec<ParamMatrix2xN>> {
    let mut out = Vec::with_capacity(ts.len());
    let mut cur = p.clone();
    for t in ts {
        cur = apply_t_transform(&cur, t)?;
        out.push(cur.clone());
    }
    Ok(out)
}

/// True when `p T1 ... Tk` reproduces `q` entrywise within [`CHAIN_TOL`].
pub fn chain_majorization_verify(p: &ParamMatrix2xN, q: &ParamMatrix2xN, ts: &[TTransform]) -> Result<bool> {
    if p.n() != q.n() {
        return Err(Error::LengthMismatch { expected: p.n(), found: q.n() });
    }
    let end = chain_products(p, ts)?.pop().unwrap_or_else(|| p.clone());
    Ok(end.max_abs_diff(q)? <= CHAIN_TOL)
}

/// Solves `q = p T_omega` for a single transform on two columns.
///
/// Each row with distinct entries determines `omega`; the best conditioned
/// row is used and all rows must agree within [`INFER_TOL`]. Returns `None`
/// when no `omega` in `[0, 1]` fits.
pub fn infer_t_transform_2x2(p: &ParamMatrix2xN, q: &ParamMatrix2xN) -> Result<Option<TTransform>> {
    if p.n() != 2 {
        return Err(Error::invalid(format!("single T-transform inference needs n = 2, got {}", p.n())));
    }
    if q.n() != 2 {
        return Err(Error::LengthMismatch { expected: 2, found: q.n() });
    }
    let rows = [(&p.row1, &q.row1), (&p.row2, &q.row2)];
    let best = rows
        .iter()
        .max_by(|a, b| (a.0[0] - a.0[1]).abs().total_cmp(&(b.0[0] - b.0[1]).abs()))
        .expect("two rows");
    let spread = best.0[0] - best.0[1];
    let mut omega = if spread == 0.0 { 1.0 } else { (best.1[0] - best.0[1]) / spread };
    if !(-INFER_TOL..=1.0 + INFER_TOL).contains(&omega) {
        return Ok(None);
    }
    omega = omega.clamp(0.0, 1.0);
    for (pr, qr) in rows {
        let c1 = omega * pr[0] + (1.0 - omega) * pr[1];
        let c2 = (1.0 - omega) * pr[0] + omega * pr[1];
        if (c1 - qr[0]).abs() > INFER_TOL || (c2 - qr[1]).abs() > INFER_TOL {
            return Ok(None);
        }
    }
    Ok(Some(TTransform { omega, pair: (0, 1) }))
}
