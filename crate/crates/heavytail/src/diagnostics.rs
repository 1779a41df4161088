//! Pareto-ness diagnostics: QQ-against-exponential plot data and a
//! goodness-of-fit p-value test.
//!
//! The GOF test exploits that for Pareto data the log ratios to the
//! sample minimum are exponential: conditional on the minimum, the
//! values `y_i = ln(x_i / min)` of the remaining observations are i.i.d.
//! exponential. The normalized spacings of their order statistics are
//! again i.i.d. exponential, so the partial-sum ratios are distributed
//! as ordered uniforms regardless of the unknown rate. An
//! Anderson-Darling statistic on those uniforms therefore has the
//! classical parameter-free null distribution, evaluated here with the
//! Marsaglia-Marsaglia approximation.

use std::io::Write;

use num_traits::Float;

use crate::error::{Error, Result};
use crate::sample::Sample;

/// Plot data for the QQ test: standard-exponential quantiles against
/// sorted log values.
#[derive(Debug, Clone, PartialEq)]
pub struct QqData<T> {
    /// `-ln(1 - p_i)` with plotting position `p_i = (i - 0.5)/N`.
    pub theoretical: Vec<T>,
    /// Sorted `ln x_i`.
    pub empirical: Vec<T>,
    /// Least-squares slope of empirical on theoretical; near `1/alpha`
    /// for Pareto inputs.
    pub fitted_slope: T,
}

impl<T: Float + std::fmt::Display> QqData<T> {
    /// Two-column CSV with headers `theoretical,empirical`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "theoretical,empirical")?;
        for (t, e) in self.theoretical.iter().zip(&self.empirical) {
            writeln!(w, "{t},{e}")?;
        }
        Ok(())
    }
}

/// Builds QQ plot data: exponential quantiles on the x-axis, log data on
/// the y-axis. Pareto data lines up with slope `1/alpha`.
pub fn pareto_qq_data<T: Float>(sample: &Sample<T>) -> Result<QqData<T>> {
    let n = sample.len();
    if n < 3 {
        return Err(Error::InvalidInput(
            "qq data requires at least 3 observations".into(),
        ));
    }
    let ranked = sample.rank();
    let empirical: Vec<T> = ranked.sorted().iter().map(|x| x.ln()).collect();
    let n_t = T::from(n).unwrap();
    let half = T::from(0.5).unwrap();
    let theoretical: Vec<T> = (0..n)
        .map(|i| {
            let p = (T::from(i).unwrap() + half) / n_t;
            -(T::one() - p).ln()
        })
        .collect();

    let mean_t = theoretical.iter().fold(T::zero(), |a, &b| a + b) / n_t;
    let mean_e = empirical.iter().fold(T::zero(), |a, &b| a + b) / n_t;
    let mut cov = T::zero();
    let mut var = T::zero();
    for i in 0..n {
        let dt = theoretical[i] - mean_t;
        cov = cov + dt * (empirical[i] - mean_e);
        var = var + dt * dt;
    }
    let fitted_slope = cov / var;
    Ok(QqData {
        theoretical,
        empirical,
        fitted_slope,
    })
}

/// Goodness-of-fit outcome.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct GofResult {
    pub p_value: f64,
    pub statistic: f64,
    pub method_name: String,
}

/// Tests whether the data is Pareto. Returns a p-value that is large for
/// Pareto data and vanishes for exponential, binomial or half-normal
/// data. Requires at least 10 observations strictly above the minimum.
pub fn pareto_gof_test<T: Float>(sample: &Sample<T>) -> Result<GofResult> {
    if sample.len() < 10 {
        return Err(Error::InvalidInput(
            "gof test requires at least 10 observations".into(),
        ));
    }
    let min = sample.min();
    let mut y: Vec<f64> = sample
        .values()
        .iter()
        .filter(|&&x| x > min)
        .map(|&x| (x / min).ln().to_f64().unwrap())
        .collect();
    if y.len() < 10 {
        return Err(Error::InvalidInput(
            "fewer than 10 usable transformed points".into(),
        ));
    }
    y.sort_by(|a, b| a.partial_cmp(b).unwrap());

    // Normalized spacings of exponential order statistics are i.i.d.
    // exponential; their partial-sum ratios are ordered uniforms.
    let m = y.len();
    let mut spacings = Vec::with_capacity(m);
    let mut prev = 0.0;
    for (i, &yi) in y.iter().enumerate() {
        spacings.push((m - i) as f64 * (yi - prev));
        prev = yi;
    }
    let total: f64 = spacings.iter().sum();
    let mut uniforms = Vec::with_capacity(m - 1);
    let mut cum = 0.0;
    for d in &spacings[..m - 1] {
        cum += d;
        uniforms.push(cum / total);
    }

    let statistic = anderson_darling_uniform(&uniforms);
    let p_value = anderson_darling_pvalue(uniforms.len(), statistic);
    Ok(GofResult {
        p_value,
        statistic,
        method_name: "anderson-darling exponentiality (normalized spacings)".into(),
    })
}

/// Anderson-Darling statistic for sorted values against Uniform(0,1).
fn anderson_darling_uniform(sorted_u: &[f64]) -> f64 {
    let n = sorted_u.len();
    let n_f = n as f64;
    let mut acc = 0.0;
    for i in 0..n {
        let u = sorted_u[i].clamp(1e-300, 1.0 - 1e-16);
        let v = (1.0 - sorted_u[n - 1 - i]).clamp(1e-300, 1.0);
        acc += (2.0 * (i as f64) + 1.0) * (u.ln() + v.ln());
    }
    -n_f - acc / n_f
}

/// Upper-tail p-value for the fully specified Anderson-Darling test,
/// after Marsaglia & Marsaglia (2004): asymptotic CDF plus a
/// finite-sample correction.
fn anderson_darling_pvalue(n: usize, a2: f64) -> f64 {
    if !a2.is_finite() {
        return 0.0;
    }
    if a2 <= 0.0 {
        return 1.0;
    }
    if a2 >= 2.0 {
        // In this branch cdf = exp(-exp(g)); 1 - cdf via expm1 keeps
        // precision deep in the tail.
        let g = 1.0776
            - (2.30695 - (0.43424 - (0.082433 - (0.008056 - 0.0003146 * a2) * a2) * a2) * a2) * a2;
        return (-(-g.exp()).exp_m1()).clamp(0.0, 1.0);
    }
    let cdf = adinf(a2);
    let corrected = cdf + errfix(n as f64, cdf);
    (1.0 - corrected).clamp(0.0, 1.0)
}

fn adinf(z: f64) -> f64 {
    if z < 2.0 {
        z.powf(-0.5)
            * (-1.2337141 / z).exp()
            * (2.00012
                + (0.247105 - (0.0649821 - (0.0347962 - (0.011672 - 0.00168691 * z) * z) * z) * z)
                    * z)
    } else {
        (-(1.0776
            - (2.30695 - (0.43424 - (0.082433 - (0.008056 - 0.0003146 * z) * z) * z) * z) * z)
            .exp())
        .exp()
    }
}

fn errfix(n: f64, x: f64) -> f64 {
    if x > 0.8 {
        return (-130.2137 + (745.2337 - (1705.091 - (1950.646 - (1116.360 - 255.7844 * x) * x) * x) * x) * x)
            / n;
    }
    let c = 0.01265 + 0.1757 / n;
    if x < c {
        let t = x / c;
        let t = t.sqrt() * (1.0 - t) * (49.0 * t - 102.0);
        return t * (0.0037 / (n * n) + 0.00078 / n + 0.00006) / n;
    }
    let t = (x - c) / (0.8 - c);
    let t = -0.00022633 + (6.54034 - (14.6538 - (14.458 - (8.259 - 1.91864 * t) * t) * t) * t) * t;
    t * (0.04213 + 0.01365 / n) / n
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gpd::ParetoParams;
    use crate::sampling::{
        generate_exponential, generate_pareto, pareto_quantile_grid, RngState,
    };

    #[test]
    fn qq_slope_on_pareto_grid() {
        let grid = pareto_quantile_grid(10_000, &ParetoParams::new(2.0, 1.0).unwrap()).unwrap();
        let qq = pareto_qq_data(&grid).unwrap();
        assert!((qq.fitted_slope - 0.5).abs() < 1e-3, "slope = {}", qq.fitted_slope);
        assert!(qq.theoretical.windows(2).all(|w| w[0] <= w[1]));
        assert!(qq.empirical.windows(2).all(|w| w[0] <= w[1]));
        assert_eq!(qq.theoretical.len(), qq.empirical.len());
    }

    #[test]
    fn qq_geometric_sequence_is_linear() {
        use std::f64::consts::E;
        let s = Sample::new(vec![1.0, E, E * E]).unwrap();
        let qq = pareto_qq_data(&s).unwrap();
        assert_eq!(qq.empirical, vec![0.0, 1.0, 2.0]);
    }

    #[test]
    fn qq_residuals_separate_exponential_from_pareto() {
        let n = 100_000;
        let pareto =
            generate_pareto(n, &ParetoParams::new(1.2, 3.0).unwrap(), &mut RngState::from_seed(8))
                .unwrap();
        let exp_data = Sample::new(
            generate_exponential(n, 5.0, &mut RngState::from_seed(8)).unwrap(),
        )
        .unwrap();

        let max_resid = |s: &Sample<f64>| {
            let qq = pareto_qq_data(s).unwrap();
            let n_f = qq.theoretical.len() as f64;
            let mean_t = qq.theoretical.iter().sum::<f64>() / n_f;
            let mean_e = qq.empirical.iter().sum::<f64>() / n_f;
            let intercept = mean_e - qq.fitted_slope * mean_t;
            qq.theoretical
                .iter()
                .zip(&qq.empirical)
                .map(|(&t, &e)| (e - (intercept + qq.fitted_slope * t)).abs())
                .fold(0.0f64, f64::max)
        };
        let r_pareto = max_resid(&pareto);
        let r_exp = max_resid(&exp_data);
        assert!(
            r_exp > 10.0 * r_pareto,
            "exp residual {r_exp} vs pareto residual {r_pareto}"
        );
    }

    #[test]
    fn qq_requires_three_points() {
        let s = Sample::new(vec![1.0, 2.0]).unwrap();
        assert!(pareto_qq_data(&s).is_err());
    }

    #[test]
    fn ad_pvalue_matches_known_critical_values() {
        // Asymptotic critical values of the fully specified AD test.
        for &(crit, p) in &[(1.933f64, 0.10), (2.492, 0.05), (3.070, 0.025), (3.857, 0.01)] {
            let got = anderson_darling_pvalue(100_000, crit);
            assert!(
                (got - p).abs() < 0.002,
                "p({crit}) = {got}, expected ~{p}"
            );
        }
        // deep tail decreases monotonically and goes below 1e-6
        let p10 = anderson_darling_pvalue(1000, 10.0);
        let p20 = anderson_darling_pvalue(1000, 20.0);
        assert!(p10 < 1e-4 && p20 < p10 && anderson_darling_pvalue(1000, 50.0) < 1e-12);
    }

    #[test]
    fn ad_size_is_calibrated_on_uniform_null() {
        // Empirical rejection rate at the 5% level over simulated
        // uniform samples should be close to 5%.
        let mut rng = RngState::from_seed(123);
        let sims = 4000;
        let n = 200;
        let mut rejections = 0;
        for _ in 0..sims {
            let mut u = generate_exponential(n, 1.0, &mut rng)
                .unwrap()
                .iter()
                .map(|y| 1.0 - (-y).exp())
                .collect::<Vec<_>>();
            u.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let a2 = anderson_darling_uniform(&u);
            if anderson_darling_pvalue(n, a2) < 0.05 {
                rejections += 1;
            }
        }
        let rate = rejections as f64 / sims as f64;
        assert!((0.035..=0.065).contains(&rate), "rejection rate = {rate}");
    }

    #[test]
    fn gof_accepts_pareto_rejects_others() {
        let n = 100_000;
        let pareto =
            generate_pareto(n, &ParetoParams::new(1.2, 3.0).unwrap(), &mut RngState::from_seed(30))
                .unwrap();
        let gof = pareto_gof_test(&pareto).unwrap();
        assert!(gof.p_value > 0.05, "pareto p = {}", gof.p_value);

        let exp_data = Sample::new(
            generate_exponential(n, 5.0, &mut RngState::from_seed(31)).unwrap(),
        )
        .unwrap();
        let gof = pareto_gof_test(&exp_data).unwrap();
        assert!(gof.p_value < 1e-6, "exponential p = {}", gof.p_value);
    }

    #[test]
    fn gof_preconditions() {
        let s = Sample::new(vec![1.0, 2.0, 3.0]).unwrap();
        assert!(pareto_gof_test(&s).is_err());
        // 12 points but only 2 distinct above the minimum
        let mut vals = vec![1.0; 10];
        vals.push(2.0);
        vals.push(3.0);
        let s = Sample::new(vals).unwrap();
        assert!(matches!(
            pareto_gof_test(&s),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn gof_scale_invariance() {
        let pareto = generate_pareto(
            5_000,
            &ParetoParams::new(1.5, 2.0).unwrap(),
            &mut RngState::from_seed(77),
        )
        .unwrap();
        let scaled =
            Sample::new(pareto.values().iter().map(|x| x * 1234.5).collect()).unwrap();
        let a = pareto_gof_test(&pareto).unwrap();
        let b = pareto_gof_test(&scaled).unwrap();
        assert!((a.p_value - b.p_value).abs() < 1e-9);
    }
}
