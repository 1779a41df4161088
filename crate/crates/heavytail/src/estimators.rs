//! The eight tail-index estimators: MLE (biased/unbiased, optional CI),
//! least squares and weighted least squares on the log rank plot, three
//! percentile methods, method of moments, and the Hill estimator with
//! rank or threshold tuning.
//!
//! Every estimator is a pure function over an immutable [`Sample`];
//! sorting, where needed, happens on a private copy. The returned
//! `scale` is always the sample minimum except for Hill, which reports
//! its tail reference point.

use num_traits::Float;
use serde::Serialize;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};
use crate::sample::{quantile, ConfidenceInterval, EstimateResult, Sample};

/// Tuning parameter for the Hill estimator: either the number of upper
/// order statistics to use, or a threshold value above which the tail
/// starts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HillSpec<T> {
    /// Use the `k` largest observations; requires `1 <= k <= N`.
    ByRank(usize),
    /// Use the observations strictly above this value; the smallest such
    /// observation becomes the tail reference point.
    ByValue(T),
}

/// Options for [`alpha_mle`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MleOptions {
    /// Return the plain (biased) MLE when true, the `(n-2)/n` corrected
    /// version otherwise.
    pub biased: bool,
    /// Two-sided significance level in (0, 1) for a confidence interval
    /// around the biased estimate. Only valid with `biased = true`.
    pub significance: Option<f64>,
}

impl Default for MleOptions {
    fn default() -> Self {
        Self {
            biased: true,
            significance: None,
        }
    }
}

/// MLE output: the estimate plus the optional confidence interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MleEstimate<T> {
    pub estimate: EstimateResult<T>,
    pub ci: Option<ConfidenceInterval<T>>,
}

/// Hill output; `mle_equivalent` is set when `k = N`, where the Hill
/// estimate coincides exactly with the biased MLE.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HillEstimate<T> {
    pub estimate: EstimateResult<T>,
    pub mle_equivalent: bool,
}

/// Moment-method output; `near_unity` warns that the estimate sits in
/// the `alpha <= 1` nonconvergence regime (estimates pile up at 1 there,
/// so the method should be cross-checked against another).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentEstimate<T> {
    pub estimate: EstimateResult<T>,
    pub near_unity: bool,
}

/// Warning text attached when Hill is called with `k = N`.
pub const HILL_MLE_WARNING: &str =
    "Setting k as the number of observations makes it equivalent to the MLE (alpha_mle).";

fn sum_log_ratios<T: Float>(values: &[T], reference: T) -> T {
    values
        .iter()
        .fold(T::zero(), |acc, &x| acc + (x / reference).ln())
}

/// Maximum likelihood estimate `alpha = N / sum ln(x_i / min)`, with the
/// unbiased correction `alpha* = (n-2)/n * alpha` and normal confidence
/// interval `alpha +/- z_(1-s/2) * sqrt(n+1)/n * alpha` on request.
pub fn alpha_mle<T: Float>(sample: &Sample<T>, opts: &MleOptions) -> Result<MleEstimate<T>> {
    let n = sample.len();
    let min_n = if opts.biased { 2 } else { 3 };
    if n < min_n {
        return Err(Error::InvalidInput(format!(
            "mle requires at least {min_n} observations"
        )));
    }
    if opts.significance.is_some() && !opts.biased {
        return Err(Error::InvalidInput(
            "confidence intervals are defined for the biased estimate only".into(),
        ));
    }
    // Summing in sorted order keeps the result bit-identical under input
    // permutation.
    let ranked = sample.rank();
    let min = ranked.min();
    let sum_log = sum_log_ratios(ranked.sorted(), min);
    if sum_log <= T::zero() {
        return Err(Error::DegenerateSample(
            "all observations equal; log-ratio sum is zero".into(),
        ));
    }
    let n_t = T::from(n).unwrap();
    let alpha_biased = n_t / sum_log;

    if opts.biased {
        let ci = match opts.significance {
            None => None,
            Some(s) => {
                if !(0.0 < s && s < 1.0) {
                    return Err(Error::InvalidInput(
                        "significance must lie in (0, 1)".into(),
                    ));
                }
                let std_err = (n_t + T::one()).sqrt() / n_t * alpha_biased;
                let z = Normal::standard().inverse_cdf(1.0 - s / 2.0);
                let half = T::from(z).unwrap() * std_err;
                Some(ConfidenceInterval {
                    lower: alpha_biased - half,
                    upper: alpha_biased + half,
                    significance: s,
                    std_err,
                })
            }
        };
        Ok(MleEstimate {
            estimate: EstimateResult {
                shape: alpha_biased,
                scale: min,
            },
            ci,
        })
    } else {
        let shape = (n_t - T::from(2).unwrap()) / n_t * alpha_biased;
        let scale = min * (T::one() - T::one() / ((n_t - T::one()) * alpha_biased));
        Ok(MleEstimate {
            estimate: EstimateResult { shape, scale },
            ci: None,
        })
    }
}

/// Least-squares estimate: the negated slope of the regression of
/// `ln S_i = ln((N+1-i)/N)` on `ln x_i` over the ascending sort.
pub fn alpha_ls<T: Float>(sample: &Sample<T>) -> Result<EstimateResult<T>> {
    let n = sample.len();
    if n < 2 {
        return Err(Error::InvalidInput(
            "least squares requires at least 2 observations".into(),
        ));
    }
    let ranked = sample.rank();
    let log_x: Vec<T> = ranked.sorted().iter().map(|x| x.ln()).collect();
    let log_s: Vec<T> = ranked.survival().iter().map(|s| s.ln()).collect();
    let n_t = T::from(n).unwrap();
    let mean_x = log_x.iter().fold(T::zero(), |a, &b| a + b) / n_t;
    let mean_y = log_s.iter().fold(T::zero(), |a, &b| a + b) / n_t;
    let mut cov = T::zero();
    let mut var = T::zero();
    for i in 0..n {
        let dx = log_x[i] - mean_x;
        cov = cov + dx * (log_s[i] - mean_y);
        var = var + dx * dx;
    }
    if var <= T::zero() {
        return Err(Error::DegenerateSample(
            "all observations equal; log variance is zero".into(),
        ));
    }
    Ok(EstimateResult {
        shape: -(cov / var),
        scale: ranked.min(),
    })
}

/// Weighted least squares in closed form:
/// `alpha = -sum ln((N+1-i)/N) / sum ln(x_i / min)`.
///
/// The singular weights of the raw formulation are absorbed
/// analytically: the `i = 1` numerator term and any `x_i = min`
/// denominator terms are exactly zero.
pub fn alpha_wls<T: Float>(sample: &Sample<T>) -> Result<EstimateResult<T>> {
    let n = sample.len();
    if n < 2 {
        return Err(Error::InvalidInput(
            "weighted least squares requires at least 2 observations".into(),
        ));
    }
    let ranked = sample.rank();
    let min = ranked.min();
    let denom = sum_log_ratios(ranked.sorted(), min);
    if denom <= T::zero() {
        return Err(Error::DegenerateSample(
            "all observations equal; log-ratio sum is zero".into(),
        ));
    }
    // -sum_{i=1..N} ln((N+1-i)/N) = -sum_{j=1..N} ln(j/N)
    let n_t = T::from(n).unwrap();
    let mut numer = T::zero();
    for j in 1..=n {
        numer = numer - (T::from(j).unwrap() / n_t).ln();
    }
    Ok(EstimateResult {
        shape: numer / denom,
        scale: min,
    })
}

/// Percentile method: `ln 3 / (ln P75 - ln P25)`.
pub fn alpha_percentile<T: Float>(sample: &Sample<T>) -> Result<EstimateResult<T>> {
    percentile_common(sample, |ranked| {
        let p75 = quantile(ranked, T::from(0.75).unwrap())?;
        let p25 = quantile(ranked, T::from(0.25).unwrap())?;
        let denom = p75.ln() - p25.ln();
        if denom == T::zero() {
            return Err(Error::DegenerateSample(
                "75th and 25th percentiles coincide".into(),
            ));
        }
        Ok(T::from(3.0).unwrap().ln() / denom)
    })
}

/// Modified percentile method: `ln 2 / (ln P75 - ln P50)`.
pub fn alpha_modified_percentile<T: Float>(sample: &Sample<T>) -> Result<EstimateResult<T>> {
    percentile_common(sample, |ranked| {
        let p75 = quantile(ranked, T::from(0.75).unwrap())?;
        let p50 = quantile(ranked, T::from(0.5).unwrap())?;
        let denom = p75.ln() - p50.ln();
        if denom == T::zero() {
            return Err(Error::DegenerateSample(
                "75th percentile and median coincide".into(),
            ));
        }
        Ok(T::from(2.0).unwrap().ln() / denom)
    })
}

/// Geometric-mean percentile method:
/// `(1 - ln 4) / (mean(ln x) - ln P75)`.
pub fn alpha_geometric_percentile<T: Float>(sample: &Sample<T>) -> Result<EstimateResult<T>> {
    percentile_common(sample, |ranked| {
        let p75 = quantile(ranked, T::from(0.75).unwrap())?;
        let n_t = T::from(ranked.len()).unwrap();
        let mean_log = ranked
            .sorted()
            .iter()
            .fold(T::zero(), |a, &x| a + x.ln())
            / n_t;
        let denom = mean_log - p75.ln();
        if denom == T::zero() {
            return Err(Error::DegenerateSample(
                "log geometric mean equals the 75th log percentile".into(),
            ));
        }
        Ok((T::one() - T::from(4.0).unwrap().ln()) / denom)
    })
}

fn percentile_common<T: Float>(
    sample: &Sample<T>,
    shape_of: impl FnOnce(&crate::sample::RankedSample<T>) -> Result<T>,
) -> Result<EstimateResult<T>> {
    if sample.len() < 2 {
        return Err(Error::InvalidInput(
            "percentile methods require at least 2 observations".into(),
        ));
    }
    let ranked = sample.rank();
    let shape = shape_of(&ranked)?;
    Ok(EstimateResult {
        shape,
        scale: ranked.min(),
    })
}

/// Method of moments: `alpha = sum x / (sum x - N * min)`, from equating
/// the sample mean to the Pareto mean. Does not converge to the true
/// value when `alpha <= 1` (infinite mean); estimates then pile up at 1
/// and `near_unity` is flagged when the estimate is at most 1.05.
pub fn alpha_moment<T: Float>(sample: &Sample<T>) -> Result<MomentEstimate<T>> {
    let ranked = sample.rank();
    let min = ranked.min();
    let total = ranked.sorted().iter().fold(T::zero(), |a, &b| a + b);
    let denom = total - T::from(sample.len()).unwrap() * min;
    if denom <= T::zero() {
        return Err(Error::DegenerateSample(
            "all observations equal; moment denominator is zero".into(),
        ));
    }
    let shape = total / denom;
    Ok(MomentEstimate {
        estimate: EstimateResult { shape, scale: min },
        near_unity: shape <= T::from(1.05).unwrap(),
    })
}

/// Hill estimator over the `k` largest observations:
/// `alpha(k) = k / sum_{j=1..k} ln(x_(N-j+1) / x_(N-k))`, with the
/// `(k+1)`-th largest observation as the tail reference point (`scale`).
///
/// `k = N` uses the sample minimum as reference and equals the biased
/// MLE exactly; `mle_equivalent` is set on the result. With a
/// [`HillSpec::ByValue`] threshold, the tail is every observation
/// strictly above the threshold and the smallest of those becomes the
/// reference point.
pub fn alpha_hills<T: Float>(sample: &Sample<T>, spec: &HillSpec<T>) -> Result<HillEstimate<T>> {
    let ranked = sample.rank();
    let sorted = ranked.sorted();
    let n = sorted.len();
    let (ref_idx, k, mle_equivalent) = match *spec {
        HillSpec::ByRank(k) => {
            if k == 0 || k > n {
                return Err(Error::InvalidInput(format!(
                    "hill rank k must satisfy 1 <= k <= {n}"
                )));
            }
            if k == n {
                // reference is the sample minimum itself
                (0usize, n, true)
            } else {
                (n - 1 - k, k, false)
            }
        }
        HillSpec::ByValue(threshold) => {
            // NaN thresholds fall through to the error arm too.
            if threshold.partial_cmp(&ranked.max()) != Some(std::cmp::Ordering::Less) {
                return Err(Error::InvalidInput(
                    "no observation lies strictly above the threshold".into(),
                ));
            }
            let r = sorted.partition_point(|&x| x <= threshold);
            let k = n - 1 - r;
            if k == 0 {
                return Err(Error::InvalidInput(
                    "tail above the threshold is empty".into(),
                ));
            }
            (r, k, false)
        }
    };
    let reference = sorted[ref_idx];
    let start = if mle_equivalent { 0 } else { ref_idx + 1 };
    let sum = sum_log_ratios(&sorted[start..], reference);
    if sum <= T::zero() {
        return Err(Error::DegenerateSample(
            "selected tail has all-equal values".into(),
        ));
    }
    Ok(HillEstimate {
        estimate: EstimateResult {
            shape: T::from(k).unwrap() / sum,
            scale: reference,
        },
        mle_equivalent,
    })
}

/// The non-Hill estimation methods, in batch-report order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Mle,
    Ls,
    Mom,
    Pm,
    Mpm,
    Gmpm,
    Wls,
}

impl Method {
    /// All methods in the batch-report row order.
    pub const ALL: [Method; 7] = [
        Method::Mle,
        Method::Ls,
        Method::Mom,
        Method::Pm,
        Method::Mpm,
        Method::Gmpm,
        Method::Wls,
    ];

    /// Long display name used in batch tables.
    pub fn display_name(&self) -> &'static str {
        match self {
            Method::Mle => "Maximum Likelihood Estimate",
            Method::Ls => "Least Squares",
            Method::Mom => "Method of Moments",
            Method::Pm => "Percentiles Method",
            Method::Mpm => "Modified Percentiles Method",
            Method::Gmpm => "Geometric Percentiles Method",
            Method::Wls => "Weighted Least Squares",
        }
    }

    /// Short machine-friendly code.
    pub fn code(&self) -> &'static str {
        match self {
            Method::Mle => "mle",
            Method::Ls => "ls",
            Method::Mom => "mom",
            Method::Pm => "pm",
            Method::Mpm => "mpm",
            Method::Gmpm => "gmpm",
            Method::Wls => "wls",
        }
    }

    /// Runs this method on a sample (MLE in its biased form).
    pub fn estimate<T: Float>(&self, sample: &Sample<T>) -> Result<EstimateResult<T>> {
        match self {
            Method::Mle => alpha_mle(sample, &MleOptions::default()).map(|m| m.estimate),
            Method::Ls => alpha_ls(sample),
            Method::Mom => alpha_moment(sample).map(|m| m.estimate),
            Method::Pm => alpha_percentile(sample),
            Method::Mpm => alpha_modified_percentile(sample),
            Method::Gmpm => alpha_geometric_percentile(sample),
            Method::Wls => alpha_wls(sample),
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.code())
    }
}

impl std::str::FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "mle" => Ok(Method::Mle),
            "ls" => Ok(Method::Ls),
            "mom" => Ok(Method::Mom),
            "pm" => Ok(Method::Pm),
            "mpm" => Ok(Method::Mpm),
            "gmpm" => Ok(Method::Gmpm),
            "wls" => Ok(Method::Wls),
            other => Err(Error::InvalidInput(format!("unknown method `{other}`"))),
        }
    }
}

/// One row of [`generate_all_estimates`].
#[derive(Debug)]
pub struct MethodEstimate<T> {
    pub method: Method,
    pub result: Result<EstimateResult<T>>,
}

/// Runs the seven non-Hill estimators and reports one row per method in
/// the order MLE, LS, MoM, PM, MPM, GMPM, WLS. Per-method failures are
/// carried in the row instead of aborting the batch.
pub fn generate_all_estimates<T: Float>(sample: &Sample<T>) -> Vec<MethodEstimate<T>> {
    Method::ALL
        .iter()
        .map(|&method| MethodEstimate {
            method,
            result: method.estimate(sample),
        })
        .collect()
}
