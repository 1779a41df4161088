//! Core domain types: validated samples, rank/survival structure and the
//! linear-interpolation quantile shared by all percentile estimators.

use num_traits::Float;

use crate::error::{Error, Result};

/// An immutable dataset of finite, strictly positive observations.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample<T> {
    values: Vec<T>,
}

impl<T: Float> Sample<T> {
    /// Validates and wraps raw observations. Every value must be finite
    /// and strictly positive (Pareto support requires `x >= xmin > 0`).
    pub fn new(values: Vec<T>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidInput("sample must be nonempty".into()));
        }
        for (i, v) in values.iter().enumerate() {
            if !v.is_finite() || *v <= T::zero() {
                return Err(Error::InvalidInput(format!(
                    "value at index {i} is not a finite positive number"
                )));
            }
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false // n >= 1 is enforced at construction
    }

    /// Smallest observation.
    pub fn min(&self) -> T {
        self.values
            .iter()
            .copied()
            .fold(T::infinity(), |a, b| if b < a { b } else { a })
    }

    /// Sorts ascending and attaches the survival fractions
    /// `S_i = (N + 1 - i) / N` for ascending rank `i` (1-based).
    pub fn rank(&self) -> RankedSample<T> {
        let mut sorted = self.values.clone();
        sorted.sort_by(|a, b| a.partial_cmp(b).expect("values are finite"));
        let n = T::from(sorted.len()).unwrap();
        let survival = (0..sorted.len())
            .map(|i| (n - T::from(i).unwrap()) / n)
            .collect();
        RankedSample { sorted, survival }
    }
}

/// A sample sorted ascending together with its survival fractions.
#[derive(Debug, Clone, PartialEq)]
pub struct RankedSample<T> {
    sorted: Vec<T>,
    survival: Vec<T>,
}

impl<T: Float> RankedSample<T> {
    pub fn sorted(&self) -> &[T] {
        &self.sorted
    }

    /// `S_i = (N + 1 - i) / N`; `S_1 = 1`, `S_N = 1/N`, strictly
    /// decreasing in rank even when values are tied.
    pub fn survival(&self) -> &[T] {
        &self.survival
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    pub fn min(&self) -> T {
        self.sorted[0]
    }

    pub fn max(&self) -> T {
        self.sorted[self.sorted.len() - 1]
    }
}

/// The `q`-th order statistic by linear interpolation: `h = (N-1)p + 1`
/// (1-based), interpolating between `sorted[floor(h)]` and
/// `sorted[ceil(h)]`.
pub fn quantile<T: Float>(ranked: &RankedSample<T>, p: T) -> Result<T> {
    if ranked.is_empty() {
        return Err(Error::InvalidInput("quantile of empty sample".into()));
    }
    if !(p >= T::zero() && p <= T::one()) {
        return Err(Error::InvalidInput(
            "quantile fraction must lie in [0, 1]".into(),
        ));
    }
    let sorted = ranked.sorted();
    let n = sorted.len();
    // 0-based position of h = (N-1)p + 1.
    let h = T::from(n - 1).unwrap() * p;
    let lo = h.floor();
    let frac = h - lo;
    let lo_idx = lo.to_usize().unwrap().min(n - 1);
    let hi_idx = (lo_idx + 1).min(n - 1);
    Ok(sorted[lo_idx] + frac * (sorted[hi_idx] - sorted[lo_idx]))
}

/// Shape/scale pair returned by every tail-index estimator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimateResult<T> {
    /// Estimated tail index `alpha`.
    pub shape: T,
    /// The estimator's reference minimum: the sample minimum for all
    /// methods except Hill, which returns its tail reference point.
    pub scale: T,
}

/// Two-sided normal confidence interval for an estimated shape.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConfidenceInterval<T> {
    pub lower: T,
    pub upper: T,
    /// Significance level `s` in (0, 1); the interval covers `1 - s`.
    pub significance: f64,
    pub std_err: T,
}
