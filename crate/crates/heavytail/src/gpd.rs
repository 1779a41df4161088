//! Parameter bridge between the Pareto `(alpha, xmin)` and generalized
//! Pareto `(xi, sigma, mu)` parameterizations.
//!
//! Only the heavy-tailed regime `xi > 0` with `mu = sigma / xi` is
//! supported; there the GPD density coincides pointwise with the Pareto
//! density `alpha * xmin^alpha / x^(1 + alpha)`.

use num_traits::Float;

use crate::error::{Error, Result};

/// Pareto shape/scale parameters, `alpha > 0`, `xmin > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParetoParams<T> {
    pub alpha: T,
    pub xmin: T,
}

impl<T: Float> ParetoParams<T> {
    pub fn new(alpha: T, xmin: T) -> Result<Self> {
        if !alpha.is_finite() || alpha <= T::zero() {
            return Err(Error::InvalidInput(
                "pareto shape alpha must be finite and > 0".into(),
            ));
        }
        if !xmin.is_finite() || xmin <= T::zero() {
            return Err(Error::InvalidInput(
                "pareto scale xmin must be finite and > 0".into(),
            ));
        }
        Ok(Self { alpha, xmin })
    }
}

/// Generalized Pareto parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GpdParams<T> {
    pub xi: T,
    pub sigma: T,
    pub mu: T,
}

impl<T: Float> GpdParams<T> {
    pub fn new(xi: T, sigma: T, mu: T) -> Result<Self> {
        if !xi.is_finite() || !sigma.is_finite() || !mu.is_finite() {
            return Err(Error::InvalidInput("gpd parameters must be finite".into()));
        }
        if sigma <= T::zero() {
            return Err(Error::InvalidInput("gpd scale sigma must be > 0".into()));
        }
        Ok(Self { xi, sigma, mu })
    }
}

/// Maps `(alpha, xmin)` to the equivalent GPD triple
/// `xi = 1/alpha`, `mu = xmin`, `sigma = xmin * xi`.
pub fn pareto_to_gpd<T: Float>(params: &ParetoParams<T>) -> Result<GpdParams<T>> {
    let p = ParetoParams::new(params.alpha, params.xmin)?;
    let xi = T::one() / p.alpha;
    GpdParams::new(xi, p.xmin * xi, p.xmin)
}

/// Inverse of [`pareto_to_gpd`]: `alpha = 1/xi`, `xmin = mu`.
///
/// Requires `xi > 0` and `mu = sigma / xi` (within 1e-9 relative); other
/// GPD regimes have no Pareto equivalent.
pub fn gpd_to_pareto<T: Float>(gpd: &GpdParams<T>) -> Result<ParetoParams<T>> {
    check_pareto_regime(gpd)?;
    ParetoParams::new(T::one() / gpd.xi, gpd.mu)
}

fn check_pareto_regime<T: Float>(gpd: &GpdParams<T>) -> Result<()> {
    if gpd.xi <= T::zero() {
        return Err(Error::Unsupported(
            "only the Pareto-equivalent regime xi > 0 is supported".into(),
        ));
    }
    let implied_mu = gpd.sigma / gpd.xi;
    let tol = T::from(1e-9).unwrap();
    if (gpd.mu - implied_mu).abs() > tol * implied_mu.abs() {
        return Err(Error::InvalidInput(
            "gpd location mu must equal sigma / xi in the Pareto regime".into(),
        ));
    }
    Ok(())
}

/// GPD density `g(x) = (1/sigma) * [1 + xi (x - mu) / sigma]^(-(1 + 1/xi))`
/// for `x >= mu` in the `xi > 0` regime.
pub fn gpd_pdf<T: Float>(x: T, gpd: &GpdParams<T>) -> Result<T> {
    if gpd.xi <= T::zero() {
        return Err(Error::Unsupported(
            "gpd_pdf supports only the xi > 0 regime".into(),
        ));
    }
    if gpd.sigma <= T::zero() {
        return Err(Error::InvalidInput("gpd scale sigma must be > 0".into()));
    }
    if x < gpd.mu {
        return Err(Error::InvalidInput(
            "gpd_pdf is defined for x >= mu when xi > 0".into(),
        ));
    }
    let bracket = T::one() + gpd.xi * (x - gpd.mu) / gpd.sigma;
    let exponent = -(T::one() + T::one() / gpd.xi);
    Ok(bracket.powf(exponent) / gpd.sigma)
}
