//! The inverted-Kumaraswamy distribution `IK(alpha, beta)` on `[0, inf)`.
//!
//! ```text
//! F(x) = (1 - (1+x)^-alpha)^beta
//! f(x) = alpha beta (1+x)^(-alpha-1) (1 - (1+x)^-alpha)^(beta-1)
//! ```
//!
//! All evaluations go through `ln(1+x)` and `expm1`, so neither the small-x
//! head nor the cdf-close-to-one tail loses digits to cancellation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Shape pair of one inverted-Kumaraswamy component.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams")]
pub struct IkParams {
    alpha: f64,
    beta: f64,
}

#[derive(Deserialize)]
struct RawParams {
    alpha: f64,
    beta: f64,
}

impl TryFrom<RawParams> for IkParams {
    type Error = Error;

    fn try_from(raw: RawParams) -> Result<Self> {
        IkParams::new(raw.alpha, raw.beta)
    }
}

impl IkParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(Error::invalid(format!("alpha must be finite and > 0, got {alpha}")));
        }
        if !(beta.is_finite() && beta > 0.0) {
            return Err(Error::invalid(format!("beta must be finite and > 0, got {beta}")));
        }
        Ok(IkParams { alpha, beta })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn cdf(&self, x: f64) -> Result<f64> {
        ik_cdf(x, *self)
    }

    pub fn pdf(&self, x: f64) -> Result<Density> {
        ik_pdf(x, *self)
    }

    pub fn sf(&self, x: f64) -> Result<f64> {
        ik_sf(x, *self)
    }

    pub fn reversed_hazard(&self, x: f64) -> Result<f64> {
        ik_reversed_hazard(x, *self)
    }

    pub fn quantile(&self, u: f64) -> Result<f64> {
        ik_quantile(u, *self)
    }
}

/// Value of a density, distinguishing the integrable singularity at the
/// origin (`beta < 1`) from ordinary finite values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Density {
    Value(f64),
    BoundaryInfinity,
}

impl Density {
    /// Finite value, or `+inf` for the boundary singularity.
    pub fn value(self) -> f64 {
        match self {
            Density::Value(v) => v,
            Density::BoundaryInfinity => f64::INFINITY,
        }
    }

    pub fn is_boundary_infinity(self) -> bool {
        matches!(self, Density::BoundaryInfinity)
    }
}

fn check_support(x: f64) -> Result<()> {
    if x.is_nan() || x.is_infinite() || x < 0.0 {
        return Err(Error::domain(format!("x must be finite and >= 0, got {x}")));
    }
    Ok(())
}

/// `ln(1 - e^v)` for `v < 0`: log of `-expm1` near zero, `log1p` further out.
fn ln_one_minus_exp(v: f64) -> f64 {
    if v < -std::f64::consts::LN_2 {
        (-v.exp()).ln_1p()
    } else {
        (-v.exp_m1()).ln()
    }
}

/// Everything needed to evaluate one component at one `x > 0`.
///
/// `ln_u` is `ln(1 - (1+x)^-alpha)`; `inv_expm1` is `1 / ((1+x)^alpha - 1)`,
/// which equals `(1+x)^-alpha / (1 - (1+x)^-alpha)`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Kernel {
    pub(crate) log1p_x: f64,
    pub(crate) ln_u: f64,
    pub(crate) inv_expm1: f64,
}

impl Kernel {
    pub(crate) fn new(x: f64, alpha: f64) -> Self {
        let log1p_x = x.ln_1p();
        let t = alpha * log1p_x;
        Kernel {
            log1p_x,
            ln_u: ln_one_minus_exp(-t),
            inv_expm1: 1.0 / t.exp_m1(),
        }
    }
}

/// Component functions at `x > 0`; callers guarantee the domain.
pub(crate) fn cdf_at(k: &Kernel, p: IkParams) -> f64 {
    (p.beta * k.ln_u).exp()
}

pub(crate) fn sf_at(k: &Kernel, p: IkParams) -> f64 {
    -(p.beta * k.ln_u).exp_m1()
}

pub(crate) fn pdf_at(k: &Kernel, p: IkParams) -> f64 {
    p.alpha * p.beta * (-(p.alpha + 1.0) * k.log1p_x + (p.beta - 1.0) * k.ln_u).exp()
}

/// `d/dx ln f(x)`.
pub(crate) fn log_pdf_slope_at(k: &Kernel, p: IkParams) -> f64 {
    let inv_y = (-k.log1p_x).exp();
    inv_y * (-(p.alpha + 1.0) + (p.beta - 1.0) * p.alpha * k.inv_expm1)
}

pub(crate) fn reversed_hazard_at(k: &Kernel, p: IkParams) -> f64 {
    p.alpha * p.beta * (-k.log1p_x).exp() * k.inv_expm1
}

pub fn ik_cdf(x: f64, params: IkParams) -> Result<f64> {
    check_support(x)?;
    if x == 0.0 {
        return Ok(0.0);
    }
    Ok(cdf_at(&Kernel::new(x, params.alpha), params))
}

pub fn ik_sf(x: f64, params: IkParams) -> Result<f64> {
    check_support(x)?;
    if x == 0.0 {
        return Ok(1.0);
    }
    Ok(sf_at(&Kernel::new(x, params.alpha), params))
}

/// Density. At `x = 0` it is `alpha` for `beta = 1`, `0` for `beta > 1`,
/// and [`Density::BoundaryInfinity`] for `beta < 1`.
pub fn ik_pdf(x: f64, params: IkParams) -> Result<Density> {
    check_support(x)?;
    if x == 0.0 {
        return Ok(if params.beta < 1.0 {
            Density::BoundaryInfinity
        } else if params.beta == 1.0 {
            Density::Value(params.alpha)
        } else {
            Density::Value(0.0)
        });
    }
    Ok(Density::Value(pdf_at(&Kernel::new(x, params.alpha), params)))
}

/// `f(x) / F(x)`, simplified to `alpha beta / ((1+x) ((1+x)^alpha - 1))`.
pub fn ik_reversed_hazard(x: f64, params: IkParams) -> Result<f64> {
    check_support(x)?;
    if x == 0.0 {
        return Err(Error::domain("reversed hazard is undefined at x = 0 (cdf is 0)"));
    }
    Ok(reversed_hazard_at(&Kernel::new(x, params.alpha), params))
}

/// Closed-form inverse `(1 - u^(1/beta))^(-1/alpha) - 1`.
pub fn ik_quantile(u: f64, params: IkParams) -> Result<f64> {
    if !(u > 0.0 && u < 1.0) {
        return Err(Error::domain(format!("quantile level must lie in (0, 1), got {u}")));
    }
    let ln_one_minus = ln_one_minus_exp(u.ln() / params.beta);
    Ok((-ln_one_minus / params.alpha).exp_m1())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ik(a: f64, b: f64) -> IkParams {
        IkParams::new(a, b).unwrap()
    }

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * b.abs().max(f64::MIN_POSITIVE)
    }

    #[test]
    fn rejects_bad_params() {
        assert!(IkParams::new(0.0, 1.0).is_err());
        assert!(IkParams::new(1.0, -2.0).is_err());
        assert!(IkParams::new(f64::NAN, 1.0).is_err());
        assert!(IkParams::new(1.0, f64::INFINITY).is_err());
    }

    #[test]
    fn cdf_examples() {
        assert_eq!(ik_cdf(0.0, ik(3.0, 0.2)).unwrap(), 0.0);
        assert!(close(ik_cdf(1.0, ik(1.0, 1.0)).unwrap(), 0.5, 1e-15));
        // 1 - 3^{-1/2}
        assert!(close(ik_cdf(2.0, ik(0.5, 1.0)).unwrap(), 0.4226497308103742, 1e-15));
    }

    #[test]
    fn cdf_domain_errors() {
        assert!(matches!(ik_cdf(-1e-9, ik(1.0, 1.0)), Err(Error::Domain(_))));
        assert!(ik_cdf(f64::NAN, ik(1.0, 1.0)).is_err());
        assert!(ik_cdf(f64::INFINITY, ik(1.0, 1.0)).is_err());
    }

    #[test]
    fn pdf_examples() {
        assert!(close(ik_pdf(1.0, ik(1.0, 1.0)).unwrap().value(), 0.25, 1e-15));
        assert_eq!(ik_pdf(0.0, ik(2.0, 1.0)).unwrap(), Density::Value(2.0));
        assert_eq!(ik_pdf(0.0, ik(2.0, 3.0)).unwrap(), Density::Value(0.0));
        // extended_precision.py: 0.421875
        assert!(close(ik_pdf(1.0, ik(2.0, 3.0)).unwrap().value(), 0.421875, 1e-15));
    }

    #[test]
    fn pdf_flags_boundary_singularity() {
        let d = ik_pdf(0.0, ik(1.5, 0.5)).unwrap();
        assert!(d.is_boundary_infinity());
        assert_eq!(d.value(), f64::INFINITY);
        // just inside the support it is large but finite
        let v = ik_pdf(1e-12, ik(1.5, 0.5)).unwrap().value();
        assert!(v.is_finite() && v > 1e5);
    }

    #[test]
    fn sf_examples() {
        assert_eq!(ik_sf(0.0, ik(1.0, 1.0)).unwrap(), 1.0);
        assert!(close(ik_sf(1.0, ik(1.0, 1.0)).unwrap(), 0.5, 1e-15));
        assert!(close(ik_sf(10.0, ik(0.5, 1.0)).unwrap(), 11f64.powf(-0.5), 1e-15));
    }

    #[test]
    fn sf_keeps_tail_digits() {
        // 1 - F would be 0 in double precision here
        let p = ik(3.0, 2.0);
        let x = 1e7;
        let s = ik_sf(x, p).unwrap();
        let y: f64 = 1.0 + x;
        // 2 y^-3 - y^-6
        let approx = 2.0 * y.powf(-3.0);
        assert!(close(s, approx, 1e-9), "{s} vs {approx}");
    }

    #[test]
    fn reversed_hazard_examples() {
        assert!(close(ik_reversed_hazard(1.0, ik(1.0, 1.0)).unwrap(), 0.5, 1e-15));
        assert!(close(ik_reversed_hazard(3.0, ik(1.0, 1.0)).unwrap(), 1.0 / 12.0, 1e-15));
        // extended_precision.py: pdf/cdf = 0.41666...
        assert!(close(ik_reversed_hazard(2.0, ik(2.0, 5.0)).unwrap(), 5.0 / 12.0, 1e-15));
        assert!(matches!(ik_reversed_hazard(0.0, ik(1.0, 1.0)), Err(Error::Domain(_))));
    }

    #[test]
    fn reversed_hazard_matches_quotient() {
        let p = ik(2.0, 5.0);
        let q = ik_pdf(2.0, p).unwrap().value() / ik_cdf(2.0, p).unwrap();
        assert!(close(ik_reversed_hazard(2.0, p).unwrap(), q, 1e-14));
    }

    #[test]
    fn quantile_examples() {
        assert!(close(ik_quantile(0.5, ik(1.0, 1.0)).unwrap(), 1.0, 1e-15));
        assert!(close(ik_quantile(0.75, ik(1.0, 1.0)).unwrap(), 3.0, 1e-15));
        for u in [0.0, 1.0, -0.1, 1.5, f64::NAN] {
            assert!(matches!(ik_quantile(u, ik(1.0, 1.0)), Err(Error::Domain(_))));
        }
    }

    #[test]
    fn quantile_matches_bisection() {
        let p = ik(3.0, 0.5);
        // bisection on the cdf over (0, 1e12)
        let (mut lo, mut hi) = (0.0f64, 1e12f64);
        for _ in 0..400 {
            let mid = 0.5 * (lo + hi);
            if ik_cdf(mid, p).unwrap() < 0.9 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let q = ik_quantile(0.9, p).unwrap();
        assert!(close(q, 0.5 * (lo + hi), 1e-12));
        // extended_precision.py: 0.7394640854894951421
        assert!(close(q, 0.739_464_085_489_495, 1e-14));
        assert!((ik_cdf(q, p).unwrap() - 0.9).abs() <= 1e-10);
    }

    #[test]
    fn cdf_limits() {
        let p = ik(0.7, 4.0);
        assert!(ik_cdf(1e300, p).unwrap() > 1.0 - 1e-12);
        assert!(ik_cdf(1e-300, p).unwrap() >= 0.0);
    }

    /// 1 - F(x), as a function of alpha for the convexity probe.
    fn eta(x: f64, a: f64, b: f64) -> f64 {
        ik_sf(x, ik(a, b)).unwrap()
    }

    /// Midpoint rule for the integral of f(Q(u)) Q'(u) over (0, 1), with Q'
    /// from a central difference of the quantile.
    fn normalization(p: IkParams, n: usize) -> f64 {
        let mut acc = crate::sum::CompensatedSum::default();
        for k in 0..n {
            let u = (k as f64 + 0.5) / n as f64;
            let h = 1e-6 * u.min(1.0 - u);
            let (up, dn) = (u + h, u - h);
            let dq = (ik_quantile(up, p).unwrap() - ik_quantile(dn, p).unwrap()) / (up - dn);
            let f = ik_pdf(ik_quantile(u, p).unwrap(), p).unwrap().value();
            acc.add(f * dq / n as f64);
        }
        acc.value()
    }

    #[test]
    fn pdf_integrates_to_one() {
        for (a, b) in [(1.0, 1.0), (0.5, 3.0), (4.0, 0.3), (2.0, 25.0)] {
            let total = normalization(ik(a, b), 10_000);
            assert!((total - 1.0).abs() <= 1e-8, "alpha={a} beta={b} total={total}");
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn cdf_is_monotone(a in 0.05f64..10.0, b in 0.05f64..30.0, x1 in 0.0f64..50.0, dx in 0.0f64..50.0) {
            let p = ik(a, b);
            prop_assert!(ik_cdf(x1, p).unwrap() <= ik_cdf(x1 + dx, p).unwrap());
        }

        #[test]
        fn quantile_round_trip(a in 0.05f64..10.0, b in 0.05f64..30.0) {
            let p = ik(a, b);
            for k in 1..=999 {
                let u = k as f64 / 1000.0;
                let q = ik_quantile(u, p).unwrap();
                prop_assert!((ik_cdf(q, p).unwrap() - u).abs() <= 1e-10, "u={u}");
            }
        }

        #[test]
        fn cdf_difference_matches_pdf(a in 0.1f64..8.0, b in 0.1f64..20.0, u in 0.02f64..0.98) {
            let p = ik(a, b);
            let x = ik_quantile(u, p).unwrap();
            let h = x * f64::EPSILON.cbrt();
            let fd = (ik_cdf(x + h, p).unwrap() - ik_cdf(x - h, p).unwrap()) / (2.0 * h);
            let f = ik_pdf(x, p).unwrap().value();
            prop_assert!((fd - f).abs() <= 1e-6 * f, "fd={fd} f={f}");
        }

        #[test]
        fn eta_decreasing_in_alpha(lx in -3.0f64..3.0, b in 0.05f64..20.0) {
            let x = 10f64.powf(lx);
            let mut prev = f64::INFINITY;
            for k in 0..200 {
                let a = 0.05 + 10.0 * k as f64 / 199.0;
                let v = eta(x, a, b);
                prop_assert!(v <= prev + 1e-15);
                prev = v;
            }
        }

        #[test]
        fn eta_convex_in_alpha_for_beta_at_most_one(lx in -3.0f64..3.0, b in 0.05f64..=1.0) {
            let x = 10f64.powf(lx);
            let h = 0.05;
            for k in 1..199 {
                let a = 0.05 + h * k as f64;
                let d2 = eta(x, a - h, b) - 2.0 * eta(x, a, b) + eta(x, a + h, b);
                prop_assert!(d2 >= -1e-12, "alpha={a} d2={d2}");
            }
        }

        #[test]
        fn eta_increasing_in_beta(lx in -3.0f64..3.0, a in 0.05f64..10.0) {
            let x = 10f64.powf(lx);
            let mut prev = -f64::INFINITY;
            for k in 0..200 {
                let b = 0.05 + 30.0 * k as f64 / 199.0;
                let v = eta(x, a, b);
                prop_assert!(v >= prev - 1e-15);
                prev = v;
            }
        }
    }

    #[test]
    fn eta_convexity_fails_for_large_beta() {
        // (1 - e^{-a L})^b is convex near small a once b > 1, so 1 - F is not
        let (x, b, h) = (1.0, 5.0, 0.05);
        let a = 0.3;
        let d2 = eta(x, a - h, b) - 2.0 * eta(x, a, b) + eta(x, a + h, b);
        assert!(d2 < -1e-6, "{d2}");
    }
}
