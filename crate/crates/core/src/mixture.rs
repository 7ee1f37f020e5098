//! Finite mixtures of inverted-Kumaraswamy components.
//!
//! Linear quantities (sf, cdf, pdf) are compensated sums in index order.
//! Ratio-type quantities (reversed hazard, log-density slope, log cdf) are
//! formed in log space so that underflowed components still contribute.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ikdist::{self, Density, IkParams, Kernel};
use crate::majorization::ParamMatrix2xN;
use crate::sum::{compensated, CompensatedSum};

/// Largest accepted deviation of the raw weight sum from 1.
pub const WEIGHT_SUM_TOL: f64 = 1e-6;

/// `sum p_i IK(alpha_i, beta_i)`, normalized and immutable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MixtureSpec", into = "MixtureSpec")]
pub struct FiniteMixture {
    weights: Vec<f64>,
    components: Vec<IkParams>,
}

/// Either one value shared by every component or one value per component.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Broadcast {
    Scalar(f64),
    Vector(Vec<f64>),
}

impl Broadcast {
    fn expand(&self, n: usize, name: &str) -> Result<Vec<f64>> {
        match self {
            Broadcast::Scalar(v) => Ok(vec![*v; n]),
            Broadcast::Vector(v) if v.len() == n => Ok(v.clone()),
            Broadcast::Vector(v) if v.len() == 1 => Ok(vec![v[0]; n]),
            Broadcast::Vector(v) => Err(Error::invalid(format!(
                "`{name}` has {} entries but there are {n} weights",
                v.len()
            ))),
        }
    }
}

/// JSON form: `{"weights": [..], "alpha": a | [..], "beta": b | [..]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixtureSpec {
    pub weights: Vec<f64>,
    pub alpha: Broadcast,
    pub beta: Broadcast,
}

impl TryFrom<MixtureSpec> for FiniteMixture {
    type Error = Error;

    fn try_from(spec: MixtureSpec) -> Result<Self> {
        let n = spec.weights.len();
        let alpha = spec.alpha.expand(n, "alpha")?;
        let beta = spec.beta.expand(n, "beta")?;
        FiniteMixture::from_vectors(&spec.weights, &alpha, &beta)
    }
}

impl From<FiniteMixture> for MixtureSpec {
    fn from(m: FiniteMixture) -> Self {
        MixtureSpec {
            alpha: Broadcast::Vector(m.components.iter().map(IkParams::alpha).collect()),
            beta: Broadcast::Vector(m.components.iter().map(IkParams::beta).collect()),
            weights: m.weights,
        }
    }
}

/// Which shape parameter the second row of a [`ParamMatrix2xN`] carries.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatrixLayout {
    /// Row 2 holds `alpha`; every component shares this `beta`.
    AlphaRow { beta: f64 },
    /// Row 2 holds `beta`; every component shares this `alpha`.
    BetaRow { alpha: f64 },
}

/// Mixture quantities at one `x > 0`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct PointEval {
    pub(crate) sf: f64,
    pub(crate) cdf: f64,
    pub(crate) pdf: f64,
    pub(crate) ln_cdf: f64,
    pub(crate) ln_pdf: f64,
    /// Reversed hazard `f / F`.
    pub(crate) rh: f64,
    /// `f' / f`.
    pub(crate) slope: f64,
}

fn log_sum_exp(v: &[f64]) -> f64 {
    let m = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + compensated(v.iter().map(|t| (t - m).exp())).ln()
}

/// `sum_i softmax(logw)_i * vals_i`.
fn log_weighted_mean(logw: &[f64], vals: &[f64], total: f64) -> f64 {
    compensated(logw.iter().zip(vals).map(|(w, v)| (w - total).exp() * v))
}

impl FiniteMixture {
    /// Builds a mixture, rescaling the weights to sum to one exactly.
    pub fn new(weights: Vec<f64>, components: Vec<IkParams>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::invalid("a mixture needs at least one component"));
        }
        if weights.len() != components.len() {
            return Err(Error::LengthMismatch { expected: weights.len(), found: components.len() });
        }
        if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
            return Err(Error::invalid(format!("weights must be finite and > 0, got {w}")));
        }
        let total = compensated(weights.iter().copied());
        if (total - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::invalid(format!("weights sum to {total}, not 1")));
        }
        let weights = weights.iter().map(|w| w / total).collect();
        Ok(FiniteMixture { weights, components })
    }

    pub fn from_vectors(weights: &[f64], alpha: &[f64], beta: &[f64]) -> Result<Self> {
        let n = weights.len();
        for v in [alpha, beta] {
            if v.len() != n {
                return Err(Error::LengthMismatch { expected: n, found: v.len() });
            }
        }
        let components = alpha
            .iter()
            .zip(beta)
            .map(|(&a, &b)| IkParams::new(a, b))
            .collect::<Result<Vec<_>>>()?;
        Self::new(weights.to_vec(), components)
    }

    pub fn single(params: IkParams) -> Self {
        FiniteMixture { weights: vec![1.0], components: vec![params] }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("mixture serializes")
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn components(&self) -> &[IkParams] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn alphas(&self) -> Vec<f64> {
        self.components.iter().map(IkParams::alpha).collect()
    }

    pub fn betas(&self) -> Vec<f64> {
        self.components.iter().map(IkParams::beta).collect()
    }

    pub fn sf(&self, x: f64) -> Result<f64> {
        mixture_sf(x, self)
    }

    pub fn cdf(&self, x: f64) -> Result<f64> {
        mixture_cdf(x, self)
    }

    pub fn pdf(&self, x: f64) -> Result<Density> {
        mixture_pdf(x, self)
    }

    pub fn reversed_hazard(&self, x: f64) -> Result<f64> {
        mixture_reversed_hazard(x, self)
    }

    /// Every quantity the order checks need, in one pass. `x` must be > 0.
    pub(crate) fn eval(&self, x: f64) -> PointEval {
        let n = self.len();
        let mut sf = CompensatedSum::default();
        let mut cdf = CompensatedSum::default();
        let mut pdf = CompensatedSum::default();
        let mut log_wf = Vec::with_capacity(n);
        let mut log_wd = Vec::with_capacity(n);
        let mut rates = Vec::with_capacity(n);
        let mut slopes = Vec::with_capacity(n);
        for (&p, &c) in self.weights.iter().zip(&self.components) {
            let k = Kernel::new(x, c.alpha());
            sf.add(p * ikdist::sf_at(&k, c));
            cdf.add(p * ikdist::cdf_at(&k, c));
            pdf.add(p * ikdist::pdf_at(&k, c));
            let lp = p.ln();
            log_wf.push(lp + c.beta() * k.ln_u);
            log_wd.push(
                lp + (c.alpha() * c.beta()).ln() - (c.alpha() + 1.0) * k.log1p_x + (c.beta() - 1.0) * k.ln_u,
            );
            rates.push(ikdist::reversed_hazard_at(&k, c));
            slopes.push(ikdist::log_pdf_slope_at(&k, c));
        }
        let ln_cdf = log_sum_exp(&log_wf);
        let ln_pdf = log_sum_exp(&log_wd);
        PointEval {
            sf: sf.value(),
            cdf: cdf.value(),
            pdf: pdf.value(),
            ln_cdf,
            ln_pdf,
            rh: log_weighted_mean(&log_wf, &rates, ln_cdf),
            slope: log_weighted_mean(&log_wd, &slopes, ln_pdf),
        }
    }
}

fn check_support(x: f64) -> Result<()> {
    if !x.is_finite() || x < 0.0 {
        return Err(Error::domain(format!("x must be finite and >= 0, got {x}")));
    }
    Ok(())
}

pub fn mixture_sf(x: f64, m: &FiniteMixture) -> Result<f64> {
    check_support(x)?;
    if x == 0.0 {
        return Ok(1.0);
    }
    Ok(m.eval(x).sf)
}

pub fn mixture_cdf(x: f64, m: &FiniteMixture) -> Result<f64> {
    check_support(x)?;
    if x == 0.0 {
        return Ok(0.0);
    }
    Ok(m.eval(x).cdf)
}

/// Weighted sum of component densities; at `x = 0` any `beta_i < 1` makes
/// the value [`Density::BoundaryInfinity`].
pub fn mixture_pdf(x: f64, m: &FiniteMixture) -> Result<Density> {
    check_support(x)?;
    if x == 0.0 {
        let mut acc = CompensatedSum::default();
        for (&p, &c) in m.weights.iter().zip(&m.components) {
            match ikdist::ik_pdf(0.0, c)? {
                Density::BoundaryInfinity => return Ok(Density::BoundaryInfinity),
                Density::Value(v) => acc.add(p * v),
            }
        }
        return Ok(Density::Value(acc.value()));
    }
    Ok(Density::Value(m.eval(x).pdf))
}

/// `pdf / cdf` of the mixture, for `x > 0`.
pub fn mixture_reversed_hazard(x: f64, m: &FiniteMixture) -> Result<f64> {
    check_support(x)?;
    if x == 0.0 {
        return Err(Error::domain("reversed hazard is undefined at x = 0 (cdf is 0)"));
    }
    Ok(m.eval(x).rh)
}

/// Mixture whose weights are row 1 of `pm` and whose varying shape
/// parameter is row 2, as selected by `layout`.
pub fn mixture_from_matrix(pm: &ParamMatrix2xN, layout: MatrixLayout) -> Result<FiniteMixture> {
    let w = pm.row1().as_slice();
    let row = pm.row2().as_slice();
    let n = pm.n();
    match layout {
        MatrixLayout::AlphaRow { beta } => FiniteMixture::from_vectors(w, row, &vec![beta; n]),
        MatrixLayout::BetaRow { alpha } => FiniteMixture::from_vectors(w, &vec![alpha; n], row),
    }
}
