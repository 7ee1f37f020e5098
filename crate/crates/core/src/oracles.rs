//! Closed-form sign expressions behind the ordering proofs, with
//! finite-difference counterparts.
//!
//! `delta1` and `delta2` are the Schur-type differences for two-component
//! mixtures. The `xi_*` functions are sign-equivalent forms of the
//! derivatives of the reversed-hazard, cdf and pdf ratios. Each sweep pairs
//! the analytic value with a central difference computed through the
//! mixture evaluators, which share no code with the expressions here.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ikdist::Kernel;
use crate::mixture::FiniteMixture;
use crate::theorems::{BetaGaps, TwoMixtures};

/// Magnitude below which a sign is treated as indeterminate.
pub const SIGN_FLOOR: f64 = 1e-8;
/// Slack for `sign_constant` and for claimed signs.
pub const SIGN_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleFn {
    Delta1,
    Delta2,
    #[serde(rename = "xi_310")]
    Xi310,
    #[serde(rename = "xi_311")]
    Xi311,
    #[serde(rename = "xi_312_prime")]
    Xi312Prime,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignReport {
    pub function_id: OracleFn,
    pub points: Vec<f64>,
    pub values: Vec<f64>,
    /// Finite-difference counterpart at each point, on the same scale.
    pub fd_values: Vec<f64>,
    pub min: f64,
    pub max: f64,
    pub sign_constant: bool,
    /// Largest `|a - fd| / max(|a|, |fd|)` where both exceed [`SIGN_FLOOR`].
    pub fd_agreement: Option<f64>,
    /// Points where both exceed [`SIGN_FLOOR`] and the signs differ.
    pub sign_mismatches: usize,
}

impl SignReport {
    fn new(function_id: OracleFn, points: Vec<f64>, values: Vec<f64>, fd_values: Vec<f64>) -> Self {
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let sign_constant = min >= -SIGN_TOL || max <= SIGN_TOL;
        let mut worst: Option<f64> = None;
        let mut sign_mismatches = 0;
        for (&a, &d) in values.iter().zip(&fd_values) {
            if a.abs() > SIGN_FLOOR && d.abs() > SIGN_FLOOR {
                if a.signum() != d.signum() {
                    sign_mismatches += 1;
                }
                let rel = (a - d).abs() / a.abs().max(d.abs());
                worst = Some(worst.map_or(rel, |w| w.max(rel)));
            }
        }
        SignReport {
            function_id,
            points,
            values,
            fd_values,
            min,
            max,
            sign_constant,
            fd_agreement: worst,
            sign_mismatches,
        }
    }

    /// CSV with columns `x,value,fd`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "x,value,fd")?;
        for ((x, v), d) in self.points.iter().zip(&self.values).zip(&self.fd_values) {
            writeln!(out, "{x:.16e},{v:.16e},{d:.16e}")?;
        }
        Ok(())
    }
}

/// Central-difference step for `d/dx` at `x`.
pub fn fd_step(x: f64) -> f64 {
    x.abs().max(f64::MIN_POSITIVE) * f64::EPSILON.cbrt()
}

/// Central difference of `f` at `x` with step [`fd_step`].
pub fn central_difference(f: impl Fn(f64) -> f64, x: f64) -> f64 {
    let h = fd_step(x);
    let (up, dn) = (x + h, x - h);
    (f(up) - f(dn)) / (up - dn)
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} must be finite and > 0, got {v}")))
    }
}

fn weights(name: &str, p: &[f64]) -> Result<()> {
    for &v in p {
        if !(v.is_finite() && v >= 0.0) {
            return Err(Error::domain(format!("{name} entries must be finite and >= 0, got {v}")));
        }
    }
    Ok(())
}

fn same_len(expected: usize, vs: &[&[f64]]) -> Result<()> {
    for v in vs {
        if v.len() != expected {
            return Err(Error::LengthMismatch { expected, found: v.len() });
        }
    }
    Ok(())
}

/// Per-component pieces at one `x`.
#[derive(Debug, Clone, Copy)]
struct Piece {
    alpha: f64,
    beta: f64,
    l: f64,
    ln_u: f64,
}

impl Piece {
    fn new(x: f64, alpha: f64, beta: f64) -> Self {
        let k = Kernel::new(x, alpha);
        Piece { alpha, beta, l: k.log1p_x, ln_u: k.ln_u }
    }

    /// `(1+x)^(-a) (1-(1+x)^(-alpha))^b`.
    fn pow(&self, a: f64, b: f64) -> f64 {
        (-a * self.l + b * self.ln_u).exp()
    }

    fn cdf(&self) -> f64 {
        self.pow(0.0, self.beta)
    }

    fn sf(&self) -> f64 {
        -(self.beta * self.ln_u).exp_m1()
    }

    /// `(1+x)^-(alpha+1) u^(beta-1)`; the pdf is `alpha beta` times this.
    fn g(&self) -> f64 {
        self.pow(self.alpha + 1.0, self.beta - 1.0)
    }

    /// Bracket of the pdf derivative; `f' = alpha beta h`.
    fn h(&self) -> f64 {
        let (a, b) = (self.alpha, self.beta);
        a * (b - 1.0) * self.pow(2.0 * (a + 1.0), b - 2.0) - (a + 1.0) * self.pow(a + 2.0, b - 1.0)
    }
}

fn check_x(x: f64) -> Result<()> {
    positive("x", x)
}

/// Schur-type difference for `(p; alpha)` with a common `beta`; nonnegative
/// on `L_2` when `beta` is in `(0, 1)`.
pub fn delta1(p: [f64; 2], alpha: [f64; 2], beta: f64, x: f64) -> Result<f64> {
    weights("p", &p)?;
    for a in alpha {
        positive("alpha", a)?;
    }
    positive("beta", beta)?;
    check_x(x)?;
    let c1 = Piece::new(x, alpha[0], beta);
    let c2 = Piece::new(x, alpha[1], beta);
    let zeta = |c: &Piece, pi: f64| pi * c.pow(c.alpha, beta - 1.0);
    Ok((p[0] - p[1]) * (c1.sf() - c2.sf())
        + beta * c1.l * (alpha[0] - alpha[1]) * (zeta(&c2, p[1]) - zeta(&c1, p[0])))
}

/// Schur-type difference for `(p; beta)` with a common `alpha`; nonpositive
/// on `L_2`.
pub fn delta2(p: [f64; 2], beta: [f64; 2], alpha: f64, x: f64) -> Result<f64> {
    weights("p", &p)?;
    for b in beta {
        positive("beta", b)?;
    }
    positive("alpha", alpha)?;
    check_x(x)?;
    let c1 = Piece::new(x, alpha, beta[0]);
    let c2 = Piece::new(x, alpha, beta[1]);
    Ok((p[0] - p[1]) * (c1.sf() - c2.sf())
        + (beta[0] - beta[1]) * c1.ln_u * (p[1] * c2.cdf() - p[0] * c1.cdf()))
}

/// `sum p_i sf_i` with unnormalized weights.
fn linear_sf(p: &[f64], alpha: &[f64], beta: &[f64], x: f64) -> f64 {
    p.iter()
        .zip(alpha.iter().zip(beta))
        .map(|(&pi, (&a, &b))| pi * FiniteMixture::single(crate::ikdist::IkParams::new(a, b).unwrap()).sf(x).unwrap())
        .sum()
}

/// `delta1` rebuilt from central differences of the mixture survival
/// function in `p_i` and `alpha_i`.
pub fn delta1_fd(p: [f64; 2], alpha: [f64; 2], beta: f64, x: f64) -> Result<f64> {
    delta1(p, alpha, beta, x)?;
    let b = [beta, beta];
    let dp = |i: usize| {
        central_difference(
            |v| {
                let mut q = p;
                q[i] = v;
                linear_sf(&q, &alpha, &b, x)
            },
            p[i],
        )
    };
    let da = |i: usize| {
        central_difference(
            |v| {
                let mut a = alpha;
                a[i] = v;
                linear_sf(&p, &a, &b, x)
            },
            alpha[i],
        )
    };
    Ok((p[0] - p[1]) * (dp(0) - dp(1)) + (alpha[0] - alpha[1]) * (da(0) - da(1)))
}

/// `delta2` rebuilt from central differences in `p_i` and `beta_i`.
pub fn delta2_fd(p: [f64; 2], beta: [f64; 2], alpha: f64, x: f64) -> Result<f64> {
    delta2(p, beta, alpha, x)?;
    let a = [alpha, alpha];
    let dp = |i: usize| {
        central_difference(
            |v| {
                let mut q = p;
                q[i] = v;
                linear_sf(&q, &a, &beta, x)
            },
            p[i],
        )
    };
    let db = |i: usize| {
        central_difference(
            |v| {
                let mut b = beta;
                b[i] = v;
                linear_sf(&p, &a, &b, x)
            },
            beta[i],
        )
    };
    Ok((p[0] - p[1]) * (dp(0) - dp(1)) + (beta[0] - beta[1]) * (db(0) - db(1)))
}

fn validate_gaps(c: &BetaGaps, x: f64) -> Result<()> {
    let n = c.beta.len();
    same_len(n, &[&c.beta_star, &c.p, &c.p_star])?;
    weights("p", &c.p)?;
    weights("p*", &c.p_star)?;
    positive("alpha", c.alpha)?;
    for &b in c.beta.iter().chain(&c.beta_star) {
        positive("beta", b)?;
    }
    check_x(x)
}

/// Sign form of the derivative of the reversed-hazard ratio
/// `r(beta; p) / r(beta*; p*)` under a common `alpha`, as a quadruple sum.
pub fn xi_310(c: &BetaGaps, x: f64) -> Result<f64> {
    validate_gaps(c, x)?;
    let a = c.alpha;
    let k = Kernel::new(x, a);
    let (l, ln_u) = (k.log1p_x, k.ln_u);
    // (1+x)^-alpha / (1 - (1+x)^-alpha)
    let w = k.inv_expm1;
    let n = c.beta.len();
    let mut total = crate::sum::CompensatedSum::default();
    for i in 0..n {
        for j in 0..n {
            for kk in 0..n {
                for m in 0..n {
                    let (bi, bj, bk, bl) = (c.beta[i], c.beta[j], c.beta_star[kk], c.beta_star[m]);
                    // the two -(alpha + 1) terms of the kernel cancel
                    let delta = a * w * ((bi - bk) + (bl - bj));
                    let weight = (c.p[i] * c.p_star[kk]) * (c.p[j] * c.p_star[m]) * (a * a) * (bi * bk);
                    let scale = (-(2.0 * a + 3.0) * l + ((bi + bk) + (bj + bl) - 2.0) * ln_u).exp();
                    total.add(weight * scale * delta);
                }
            }
        }
    }
    Ok(total.value())
}

fn validate_two(t: &TwoMixtures, x: f64) -> Result<()> {
    let n = t.alpha.len();
    same_len(n, &[&t.beta, &t.alpha_star, &t.beta_star, &t.p, &t.p_star])?;
    weights("p", &t.p)?;
    weights("p*", &t.p_star)?;
    for &v in t.alpha.iter().chain(&t.beta).chain(&t.alpha_star).chain(&t.beta_star) {
        positive("shape parameter", v)?;
    }
    check_x(x)
}

fn pieces(x: f64, alpha: &[f64], beta: &[f64]) -> Vec<Piece> {
    alpha.iter().zip(beta).map(|(&a, &b)| Piece::new(x, a, b)).collect()
}

/// Sign form of the derivative of the cdf ratio
/// `F(alpha, beta; p) / F(alpha*, beta*; p*)`, as a double sum.
pub fn xi_311(t: &TwoMixtures, x: f64) -> Result<f64> {
    validate_two(t, x)?;
    let c = pieces(x, &t.alpha, &t.beta);
    let s = pieces(x, &t.alpha_star, &t.beta_star);
    let mut total = crate::sum::CompensatedSum::default();
    for (i, ci) in c.iter().enumerate() {
        for (j, sj) in s.iter().enumerate() {
            let ui = ci.ln_u.exp();
            let uj = sj.ln_u.exp();
            let lead = t.p[i] * t.p_star[j] * ci.pow(0.0, ci.beta - 1.0) * sj.pow(0.0, sj.beta - 1.0);
            let inner = ci.alpha * ci.beta * ci.pow(ci.alpha + 1.0, 0.0) * uj
                - sj.alpha * sj.beta * sj.pow(sj.alpha + 1.0, 0.0) * ui;
            total.add(lead * inner);
        }
    }
    Ok(total.value())
}

/// Sign form of the derivative of the pdf ratio
/// `f(alpha, beta; p) / f(alpha*, beta*; p*)`, as a double sum.
pub fn xi_312_prime(t: &TwoMixtures, x: f64) -> Result<f64> {
    validate_two(t, x)?;
    let c = pieces(x, &t.alpha, &t.beta);
    let s = pieces(x, &t.alpha_star, &t.beta_star);
    let mut total = crate::sum::CompensatedSum::default();
    for (i, ci) in c.iter().enumerate() {
        for (j, sj) in s.iter().enumerate() {
            let w = t.p[i] * t.p_star[j] * ci.alpha * ci.beta * sj.alpha * sj.beta;
            total.add(w * (sj.g() * ci.h() - ci.g() * sj.h()));
        }
    }
    Ok(total.value())
}

/// Survival difference `sf(m*) - sf(m)` for the fixed three-component pair
/// `p = (0.2, 0.6, 0.2)`, `p* = (0.2, 0.5, 0.3)`, `beta = (5.2, 15.8, 5.6)`,
/// `alpha = 1`.
pub fn k1(x: f64) -> Result<f64> {
    let (m, m_star) = k1_mixtures();
    Ok(m_star.sf(x)? - m.sf(x)?)
}

/// The `(m, m*)` pair behind [`k1`].
pub fn k1_mixtures() -> (FiniteMixture, FiniteMixture) {
    let alpha = [1.0; 3];
    let beta = [5.2, 15.8, 5.6];
    let m = FiniteMixture::from_vectors(&[0.2, 0.6, 0.2], &alpha, &beta).expect("valid fixed mixture");
    let s = FiniteMixture::from_vectors(&[0.2, 0.5, 0.3], &alpha, &beta).expect("valid fixed mixture");
    (m, s)
}

fn mixtures_of_gaps(c: &BetaGaps) -> Result<(FiniteMixture, FiniteMixture)> {
    let a = vec![c.alpha; c.beta.len()];
    Ok((FiniteMixture::from_vectors(&c.p, &a, &c.beta)?, FiniteMixture::from_vectors(&c.p_star, &a, &c.beta_star)?))
}

fn mixtures_of_two(t: &TwoMixtures) -> Result<(FiniteMixture, FiniteMixture)> {
    Ok((
        FiniteMixture::from_vectors(&t.p, &t.alpha, &t.beta)?,
        FiniteMixture::from_vectors(&t.p_star, &t.alpha_star, &t.beta_star)?,
    ))
}

fn pdf(m: &FiniteMixture, x: f64) -> f64 {
    m.pdf(x).map(|d| d.value()).unwrap_or(f64::NAN)
}

fn cdf(m: &FiniteMixture, x: f64) -> f64 {
    m.cdf(x).unwrap_or(f64::NAN)
}

/// Scales the sign form to the ratio's derivative: the sign forms are
/// `num' den - num den'` for `ratio = num / den` with unit weights, so
/// dividing by `den^2` (after weight normalization) gives `d ratio / dx`.
fn sweep<F, G, D>(id: OracleFn, xs: &[f64], sign_form: F, ratio: G, den: D) -> Result<SignReport>
where
    F: Fn(f64) -> Result<f64>,
    G: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let mut values = Vec::with_capacity(xs.len());
    let mut fd = Vec::with_capacity(xs.len());
    for &x in xs {
        let d = den(x);
        values.push(sign_form(x)? / (d * d));
        fd.push(central_difference(&ratio, x));
    }
    Ok(SignReport::new(id, xs.to_vec(), values, fd))
}

fn total(p: &[f64]) -> f64 {
    p.iter().sum()
}

/// `xi_310` scaled to `d/dx [r1 / r2]`, with its central difference.
pub fn sweep_xi_310(c: &BetaGaps, xs: &[f64]) -> Result<SignReport> {
    let (m1, m2) = mixtures_of_gaps(c)?;
    // mixtures normalize their weights; the sign form uses them raw
    let norm = total(&c.p) * total(&c.p_star);
    sweep(
        OracleFn::Xi310,
        xs,
        |x| Ok(xi_310(c, x)? / (norm * norm)),
        |x| m1.reversed_hazard(x).unwrap_or(f64::NAN) / m2.reversed_hazard(x).unwrap_or(f64::NAN),
        |x| pdf(&m2, x) * cdf(&m1, x),
    )
}

/// `xi_311` scaled to `d/dx [F1 / F2]`, with its central difference.
pub fn sweep_xi_311(t: &TwoMixtures, xs: &[f64]) -> Result<SignReport> {
    let (m1, m2) = mixtures_of_two(t)?;
    let norm = total(&t.p) * total(&t.p_star);
    sweep(
        OracleFn::Xi311,
        xs,
        |x| Ok(xi_311(t, x)? / norm),
        |x| cdf(&m1, x) / cdf(&m2, x),
        |x| cdf(&m2, x),
    )
}

/// `xi_312_prime` scaled to `d/dx [f1 / f2]`, with its central difference.
pub fn sweep_xi_312_prime(t: &TwoMixtures, xs: &[f64]) -> Result<SignReport> {
    let (m1, m2) = mixtures_of_two(t)?;
    let norm = total(&t.p) * total(&t.p_star);
    sweep(
        OracleFn::Xi312Prime,
        xs,
        |x| Ok(xi_312_prime(t, x)? / norm),
        |x| pdf(&m1, x) / pdf(&m2, x),
        |x| pdf(&m2, x),
    )
}

pub fn sweep_delta1(p: [f64; 2], alpha: [f64; 2], beta: f64, xs: &[f64]) -> Result<SignReport> {
    let values = xs.iter().map(|&x| delta1(p, alpha, beta, x)).collect::<Result<Vec<_>>>()?;
    let fd = xs.iter().map(|&x| delta1_fd(p, alpha, beta, x)).collect::<Result<Vec<_>>>()?;
    Ok(SignReport::new(OracleFn::Delta1, xs.to_vec(), values, fd))
}

pub fn sweep_delta2(p: [f64; 2], beta: [f64; 2], alpha: f64, xs: &[f64]) -> Result<SignReport> {
    let values = xs.iter().map(|&x| delta2(p, beta, alpha, x)).collect::<Result<Vec<_>>>()?;
    let fd = xs.iter().map(|&x| delta2_fd(p, beta, alpha, x)).collect::<Result<Vec<_>>>()?;
    Ok(SignReport::new(OracleFn::Delta2, xs.to_vec(), values, fd))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ordercheck::Grid;
    use proptest::prelude::*;

    fn ex36() -> BetaGaps {
        BetaGaps {
            beta: vec![0.1, 0.2, 0.3],
            beta_star: vec![0.5, 1.0, 2.0],
            alpha: 2.0,
            p: vec![0.1, 0.3, 0.6],
            p_star: vec![0.2, 0.3, 0.5],
        }
    }

    fn two(p: [f64; 3], alpha: [f64; 3], beta: [f64; 3], p_star: [f64; 3], alpha_star: [f64; 3], beta_star: [f64; 3]) -> TwoMixtures {
        TwoMixtures {
            alpha: alpha.to_vec(),
            beta: beta.to_vec(),
            alpha_star: alpha_star.to_vec(),
            beta_star: beta_star.to_vec(),
            p: p.to_vec(),
            p_star: p_star.to_vec(),
        }
    }

    fn ex37() -> TwoMixtures {
        two([0.1, 0.7, 0.2], [5.0, 8.0, 6.0], [2.0, 1.0, 1.0], [0.2, 0.5, 0.3], [3.0, 4.0, 2.0], [5.0, 3.0, 6.0])
    }

    fn ce36() -> TwoMixtures {
        two([0.60, 0.25, 0.15], [1.0, 3.0, 5.0], [3.0, 6.0, 9.0], [0.45, 0.30, 0.25], [2.0, 4.0, 6.0], [25.0, 30.0, 35.0])
    }

    /// Oriented as the pdf ratio numerator over denominator.
    fn ex38() -> TwoMixtures {
        two([0.2, 0.4, 0.4], [2.0, 4.0, 6.0], [25.0, 13.0, 9.0], [0.3, 0.5, 0.2], [8.0, 10.0, 12.0], [3.0, 4.0, 1.0])
    }

    fn grid50(lo: f64, hi: f64) -> Vec<f64> {
        Grid::log(lo, hi, 50).unwrap().xs()
    }

    #[test]
    fn deltas_vanish_on_ties() {
        for x in [0.1, 1.0, 10.0] {
            assert_eq!(delta1([0.5, 0.5], [2.0, 2.0], 0.4, x).unwrap(), 0.0);
            assert_eq!(delta2([0.5, 0.5], [3.0, 3.0], 0.4, x).unwrap(), 0.0);
        }
    }

    #[test]
    fn deltas_match_extended_precision() {
        // tests/oracle/extended_precision.py
        let d1 = delta1([0.6, 0.4], [1.0, 9.0], 0.5, 1.0).unwrap();
        assert!((d1 - 1.232524804604035).abs() < 1e-13, "{d1}");
        let d2 = delta2([0.2, 0.8], [6.0, 2.0], 0.6, 1.0).unwrap();
        assert!((d2 - -0.4665744456687853).abs() < 1e-13, "{d2}");
    }

    #[test]
    fn deltas_match_finite_differences() {
        let xs = grid50(1e-2, 1e2);
        let r = sweep_delta1([0.6, 0.4], [1.0, 9.0], 0.5, &xs).unwrap();
        assert!(r.sign_constant && r.min >= -SIGN_TOL);
        assert!(r.fd_agreement.unwrap() < 1e-6, "{:?}", r.fd_agreement);
        let r = sweep_delta2([0.2, 0.8], [6.0, 2.0], 0.6, &xs).unwrap();
        assert!(r.sign_constant && r.max <= SIGN_TOL);
        assert!(r.fd_agreement.unwrap() < 1e-6, "{:?}", r.fd_agreement);
    }

    #[test]
    fn delta_domain_errors() {
        assert!(delta1([0.5, 0.5], [0.0, 1.0], 0.5, 1.0).is_err());
        assert!(delta1([0.5, 0.5], [1.0, 1.0], 0.5, 0.0).is_err());
        assert!(delta2([-0.1, 1.1], [1.0, 2.0], 0.5, 1.0).is_err());
        assert!(delta2([0.5, 0.5], [1.0, 2.0], f64::NAN, 1.0).is_err());
    }

    #[test]
    fn xi_310_symmetric_cancellation() {
        let mut c = ex36();
        c.beta_star = c.beta.clone();
        c.p_star = c.p.clone();
        for x in grid50(1e-3, 1e3) {
            assert!(xi_310(&c, x).unwrap().abs() < 1e-12);
        }
    }

    #[test]
    fn xi_310_matches_product_form() {
        let c = ex36();
        let (m1, m2) = mixtures_of_gaps(&c).unwrap();
        for x in [0.01, 0.3, 1.0, 7.0] {
            // phi1' phi2 - phi1 phi2' with phi1 = f1 F2, phi2 = f2 F1
            let a = c.alpha;
            let fp = |p: &[f64], b: &[f64]| -> f64 {
                p.iter().zip(b).map(|(&pi, &bi)| pi * a * bi * Piece::new(x, a, bi).h()).sum()
            };
            let (f1, f2) = (pdf(&m1, x), pdf(&m2, x));
            let (cf1, cf2) = (cdf(&m1, x), cdf(&m2, x));
            let (d1, d2) = (fp(&c.p, &c.beta), fp(&c.p_star, &c.beta_star));
            let direct = d1 * cf1 * f2 * cf2 + f1 * f2 * f2 * cf1 - f1 * f1 * f2 * cf2 - f1 * cf1 * d2 * cf2;
            let quad = xi_310(&c, x).unwrap();
            assert!((quad - direct).abs() <= 1e-10 * direct.abs().max(1e-300), "x={x}: {quad} vs {direct}");
        }
    }

    #[test]
    fn xi_310_example_sign_away_from_origin() {
        let r = sweep_xi_310(&ex36(), &grid50(1e-2, 1e2)).unwrap();
        assert!(r.max <= SIGN_TOL, "max {}", r.max);
        assert_eq!(r.sign_mismatches, 0);
    }

    #[test]
    fn xi_310_example_turns_positive_near_origin() {
        // the ratio rises on (0, ~1e-3) for these parameters
        let r = sweep_xi_310(&ex36(), &grid50(1e-5, 1e-3)).unwrap();
        assert!(r.max > 0.0);
        assert_eq!(r.sign_mismatches, 0);
    }

    #[test]
    fn xi_311_signs() {
        let same = {
            let mut t = ex37();
            t.alpha_star = t.alpha.clone();
            t.beta_star = t.beta.clone();
            t.p_star = t.p.clone();
            t
        };
        for x in grid50(1e-2, 1e2) {
            assert!(xi_311(&same, x).unwrap().abs() < 1e-12);
        }
        let r = sweep_xi_311(&ex37(), &grid50(1e-1, 1e2)).unwrap();
        assert!(r.max <= SIGN_TOL, "{}", r.max);
        assert_eq!(r.sign_mismatches, 0);
        let r = sweep_xi_311(&ce36(), &grid50(1e-2, 1e2)).unwrap();
        assert!(!r.sign_constant, "min {} max {}", r.min, r.max);
        assert_eq!(r.sign_mismatches, 0);
    }

    #[test]
    fn xi_312_prime_signs() {
        let same = {
            let mut t = ex38();
            t.alpha_star = t.alpha.clone();
            t.beta_star = t.beta.clone();
            t.p_star = t.p.clone();
            t
        };
        for x in grid50(1e-2, 1e2) {
            assert!(xi_312_prime(&same, x).unwrap().abs() < 1e-12);
        }
        let r = sweep_xi_312_prime(&ex38(), &grid50(1e-1, 1e1)).unwrap();
        assert!(r.min >= -SIGN_TOL, "{}", r.min);
        assert_eq!(r.sign_mismatches, 0);
    }

    #[test]
    fn k1_matches_mixture_difference() {
        let (m, s) = k1_mixtures();
        for x in [0.5, 10.0, 100.0] {
            assert!((k1(x).unwrap() - (s.sf(x).unwrap() - m.sf(x).unwrap())).abs() <= 1e-15);
        }
        assert!(k1(1e-8).unwrap().abs() < 1e-15);
        // tests/oracle/extended_precision.py
        assert!((k1(10.0).unwrap() - -0.03645920720976425).abs() < 1e-14);
        assert!((k1(100.0).unwrap() - -0.009128204874254096).abs() < 1e-14);
    }

    #[test]
    fn csv_dump() {
        let r = sweep_delta2([0.2, 0.8], [6.0, 2.0], 0.6, &[1.0, 2.0]).unwrap();
        let mut buf = Vec::new();
        r.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 3);
        assert!(text.starts_with("x,value,fd\n1.0000000000000000e0,"));
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.contains("\"function_id\":\"delta2\""));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn delta1_nonnegative_on_l2(p1 in 0.5f64..0.95, a1 in 0.1f64..5.0, da in 0.0f64..5.0, beta in 0.02f64..0.98) {
            let (p, alpha) = ([p1, 1.0 - p1], [a1, a1 + da]);
            for x in grid50(1e-3, 1e3) {
                prop_assert!(delta1(p, alpha, beta, x).unwrap() >= -SIGN_TOL);
            }
        }

        #[test]
        fn delta2_nonpositive_on_l2(p1 in 0.5f64..0.95, b1 in 0.1f64..10.0, db in 0.0f64..10.0, alpha in 0.1f64..5.0) {
            let (p, beta) = ([p1, 1.0 - p1], [b1, b1 + db]);
            for x in grid50(1e-3, 1e3) {
                prop_assert!(delta2(p, beta, alpha, x).unwrap() <= SIGN_TOL);
            }
        }
    }
}
