//! Diagnostics for the Lobatto rule: weight-to-spacing ratios, convergence
//! studies with fitted decay exponents, and the uniform-norm error bound.

use serde::Serialize;

use crate::integrand::{IntegrandSpec, ORACLE_LEVELS};
use crate::jacobi::JacobiExponents;
use crate::lobatto::lobatto_rule;
use crate::oracle::{reference_integral, ReferenceValue};
use crate::{Error, Result};

/// Points whose error is below this multiple of the reference accuracy are
/// excluded from fitting.
pub const NOISE_FACTOR: f64 = 100.0;

/// Upper bound on `max / min` of the interior weight-to-spacing ratios
/// over `n` in `{8, ..., 512}`.
pub const INTERIOR_SPREAD_BOUND: f64 = 3.0;

/// Upper bound on the endpoint weight-to-spacing ratios over the same sweep.
pub const ENDPOINT_RATIO_BOUND: f64 = 10.0;

/// Weight-to-spacing ratios of one Lobatto rule.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioReport {
    pub exponents: JacobiExponents,
    pub n: usize,
    /// `w_k / (dt_k w(t_k))` for `k = 1..n-1`, then `w_n / (dt_{n-1} w(t_n))`.
    pub interior_ratios: Vec<f64>,
    /// `w_0 / (dt_0 w(t_1))`.
    pub left_end_ratio: f64,
    /// `w_{n+1} / (dt_n w(t_n))`.
    pub right_end_ratio: f64,
}

impl RatioReport {
    pub fn interior_min(&self) -> f64 {
        self.interior_ratios
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    pub fn interior_max(&self) -> f64 {
        self.interior_ratios.iter().copied().fold(0.0, f64::max)
    }
}

pub fn spacing_ratio_report(e: JacobiExponents, n: usize) -> Result<RatioReport> {
    if n < 3 {
        return Err(Error::InvalidArgument("ratio report needs n >= 3".into()));
    }
    let rule = lobatto_rule(e, n)?;
    let t = rule.nodes();
    let w = rule.weights();
    let dt: Vec<f64> = t.windows(2).map(|p| p[1] - p[0]).collect();
    let weight_at = |k: usize| e.weight_from_gaps(1.0 - t[k], 1.0 + t[k]);

    let mut interior_ratios: Vec<f64> = (1..n).map(|k| w[k] / (dt[k] * weight_at(k))).collect();
    interior_ratios.push(w[n] / (dt[n - 1] * weight_at(n)));

    Ok(RatioReport {
        exponents: e,
        n,
        interior_ratios,
        left_end_ratio: w[0] / (dt[0] * weight_at(1)),
        right_end_ratio: w[n + 1] / (dt[n] * weight_at(n)),
    })
}

/// Extremes of [`RatioReport`] over a sweep of `n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioSweep {
    pub exponents: JacobiExponents,
    pub n_values: Vec<usize>,
    pub interior_min: f64,
    pub interior_max: f64,
    pub left_end_max: f64,
    pub right_end_max: f64,
    pub left_end_ratios: Vec<f64>,
    pub right_end_ratios: Vec<f64>,
}

impl RatioSweep {
    /// `max / min` of all interior ratios over the sweep.
    pub fn interior_spread(&self) -> f64 {
        self.interior_max / self.interior_min
    }
}

pub fn spacing_ratio_sweep(e: JacobiExponents, n_values: &[usize]) -> Result<RatioSweep> {
    let reports = n_values
        .iter()
        .map(|&n| spacing_ratio_report(e, n))
        .collect::<Result<Vec<_>>>()?;
    Ok(RatioSweep {
        exponents: e,
        n_values: n_values.to_vec(),
        interior_min: reports
            .iter()
            .map(RatioReport::interior_min)
            .fold(f64::INFINITY, f64::min),
        interior_max: reports
            .iter()
            .map(RatioReport::interior_max)
            .fold(0.0, f64::max),
        left_end_max: reports.iter().map(|r| r.left_end_ratio).fold(0.0, f64::max),
        right_end_max: reports
            .iter()
            .map(|r| r.right_end_ratio)
            .fold(0.0, f64::max),
        left_end_ratios: reports.iter().map(|r| r.left_end_ratio).collect(),
        right_end_ratios: reports.iter().map(|r| r.right_end_ratio).collect(),
    })
}

/// Negated least-squares slope of `ln err` against `ln n` over the last
/// half of the points, so `err ~ n^-q` gives `q`.
pub fn fit_exponent(n_values: &[usize], abs_errors: &[f64]) -> Result<f64> {
    if n_values.len() != abs_errors.len() {
        return Err(Error::InvalidArgument(
            "n_values and abs_errors differ in length".into(),
        ));
    }
    let usable = abs_errors
        .iter()
        .filter(|e| **e > 0.0 && e.is_finite())
        .count();
    if n_values.len() < 4 || usable < n_values.len() {
        return Err(Error::InsufficientPoints {
            needed: 4.max(n_values.len()),
            have: usable,
        });
    }
    let start = n_values.len() / 2;
    let xs: Vec<f64> = n_values[start..].iter().map(|&n| (n as f64).ln()).collect();
    let ys: Vec<f64> = abs_errors[start..].iter().map(|e| e.ln()).collect();
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidArgument(
            "n_values must not all be equal".into(),
        ));
    }
    Ok(-sxy / sxx)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConvergenceStatus {
    /// Every error is below the reference noise floor.
    Exact,
    Fitted,
    /// Too few usable points to fit an exponent.
    Unfitted,
}

/// Errors of the Lobatto rule along a sweep of `n` for one integrand.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub exponents: JacobiExponents,
    pub integrand_id: String,
    /// Sobolev order `r` the predicted exponent was derived for.
    pub smoothness_r: u32,
    pub predicted_exponent: f64,
    pub n_values: Vec<usize>,
    pub abs_errors: Vec<f64>,
    /// `abs_errors[i] * n_i^predicted_exponent`.
    pub scaled_errors: Vec<f64>,
    /// Points excluded from fitting because they are within noise of the reference.
    pub below_noise: Vec<bool>,
    pub fitted_exponent: Option<f64>,
    pub bound_constant: f64,
    pub status: ConvergenceStatus,
    /// Largest reference accuracy over the sweep.
    pub reference_accuracy: f64,
}

impl ConvergenceReport {
    /// The scaled error does not inflate: max over the second half of the
    /// sweep is at most twice the max over the first half.
    pub fn bound_non_inflating(&self) -> bool {
        let (first, second) = split_halves(&self.scaled_errors);
        max_of(second) <= 2.0 * max_of(first)
    }
}

fn split_halves(v: &[f64]) -> (&[f64], &[f64]) {
    v.split_at(v.len() / 2)
}

fn max_of(v: &[f64]) -> f64 {
    v.iter().copied().fold(0.0, f64::max)
}

/// Configuration of a convergence sweep: the weight, the integrand (a
/// member of some `W_r^1(w)`), and the decay exponent predicted for it.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceStudy {
    pub exponents: JacobiExponents,
    pub integrand: IntegrandSpec,
    pub n_values: Vec<usize>,
    pub smoothness_r: u32,
    pub predicted_exponent: f64,
}

impl ConvergenceStudy {
    pub fn run(&self) -> Result<ConvergenceReport> {
        let e = self.exponents;
        convergence_study_with(
            e,
            &self.integrand.id(),
            &self.n_values,
            self.smoothness_r,
            self.predicted_exponent,
            |n| {
                let rule = lobatto_rule(e, n)?;
                let f = self.integrand.instantiate(e, n)?;
                let q = rule.integrate(|t| f.eval_t(t))?;
                Ok((q, f.reference(e)?))
            },
        )
    }
}

pub fn convergence_study(
    e: JacobiExponents,
    integrand: &IntegrandSpec,
    n_values: &[usize],
    r: u32,
    q_pred: f64,
) -> Result<ConvergenceReport> {
    ConvergenceStudy {
        exponents: e,
        integrand: integrand.clone(),
        n_values: n_values.to_vec(),
        smoothness_r: r,
        predicted_exponent: q_pred,
    }
    .run()
}

/// Core of [`convergence_study`]; `point(n)` returns the quadrature value
/// and the reference for that `n`.
pub fn convergence_study_with<P>(
    e: JacobiExponents,
    integrand_id: &str,
    n_values: &[usize],
    r: u32,
    q_pred: f64,
    mut point: P,
) -> Result<ConvergenceReport>
where
    P: FnMut(usize) -> Result<(f64, ReferenceValue)>,
{
    if n_values.len() < 4 {
        return Err(Error::InvalidArgument(
            "a convergence study needs at least 4 values of n".into(),
        ));
    }
    if n_values.windows(2).any(|w| w[0] >= w[1]) || n_values[0] == 0 {
        return Err(Error::InvalidArgument(
            "n values must be positive and strictly increasing".into(),
        ));
    }
    let mut abs_errors = Vec::with_capacity(n_values.len());
    let mut below_noise = Vec::with_capacity(n_values.len());
    let mut reference_accuracy: f64 = 0.0;
    for &n in n_values {
        let (q, reference) = point(n)?;
        let err = (q - reference.value).abs();
        if !reference.converged && err <= NOISE_FACTOR * reference.estimated_accuracy {
            return Err(Error::ReferenceTooCoarse {
                accuracy: reference.estimated_accuracy,
                largest_error: err,
            });
        }
        reference_accuracy = reference_accuracy.max(reference.estimated_accuracy);
        below_noise.push(err <= NOISE_FACTOR * reference.estimated_accuracy);
        abs_errors.push(err);
    }
    let scaled_errors: Vec<f64> = n_values
        .iter()
        .zip(&abs_errors)
        .map(|(&n, &err)| err * (n as f64).powf(q_pred))
        .collect();
    let bound_constant = max_of(&scaled_errors);

    let usable_n: Vec<usize> = n_values
        .iter()
        .zip(&below_noise)
        .filter(|(_, b)| !**b)
        .map(|(n, _)| *n)
        .collect();
    let usable_err: Vec<f64> = abs_errors
        .iter()
        .zip(&below_noise)
        .filter(|(_, b)| !**b)
        .map(|(e, _)| *e)
        .collect();
    let (status, fitted_exponent) = if usable_n.is_empty() {
        (ConvergenceStatus::Exact, None)
    } else if usable_n.len() < 4 {
        (ConvergenceStatus::Unfitted, None)
    } else {
        (
            ConvergenceStatus::Fitted,
            Some(fit_exponent(&usable_n, &usable_err)?),
        )
    };

    Ok(ConvergenceReport {
        exponents: e,
        integrand_id: integrand_id.to_string(),
        smoothness_r: r,
        predicted_exponent: q_pred,
        n_values: n_values.to_vec(),
        abs_errors,
        scaled_errors,
        below_noise,
        fitted_exponent,
        bound_constant,
        status,
        reference_accuracy,
    })
}

/// Both sides of `|e_n(f)| <= 2 mu_0 E_{2n+1}(f)_inf`, with the best
/// approximation replaced by the uniform error of the degree-`2n+1`
/// interpolant at Chebyshev points of the second kind. The interpolant is
/// never better than the best approximation, so the surrogate can only
/// loosen the inequality.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UniformBoundCheck {
    pub n: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub surrogate_best_error: f64,
    /// Rounding allowance of the computed `lhs`.
    pub noise_floor: f64,
    pub holds: bool,
}

pub fn uniform_bound_check<F>(e: JacobiExponents, f: F, n: usize) -> Result<UniformBoundCheck>
where
    F: Fn(f64) -> f64,
{
    let rule = lobatto_rule(e, n)?;
    let q = rule.integrate(&f)?;
    let reference = reference_integral(e, |x| f(x.t), ORACLE_LEVELS)?;
    let lhs = (q - reference.value).abs();
    let surrogate = chebyshev_interpolation_error(&f, 2 * n + 1);
    let rhs = 2.0 * e.zeroth_moment() * surrogate;
    let noise_floor = 4.0 * f64::EPSILON * (rule.integrate_abs(&f)? + reference.value.abs())
        + reference.estimated_accuracy;
    Ok(UniformBoundCheck {
        n,
        lhs,
        rhs,
        surrogate_best_error: surrogate,
        noise_floor,
        holds: lhs <= rhs + noise_floor,
    })
}

/// Max of `|f - p|` on `10 d + 1` equispaced points, `p` the degree-`d`
/// interpolant at `cos(j pi / d)`, evaluated barycentrically.
pub fn chebyshev_interpolation_error<F: Fn(f64) -> f64>(f: &F, degree: usize) -> f64 {
    let d = degree.max(1);
    let nodes: Vec<f64> = (0..=d)
        .map(|j| (j as f64 * std::f64::consts::PI / d as f64).cos())
        .collect();
    let values: Vec<f64> = nodes.iter().map(|&x| f(x)).collect();
    let bary: Vec<f64> = (0..=d)
        .map(|j| {
            let s = if j % 2 == 0 { 1.0 } else { -1.0 };
            if j == 0 || j == d {
                0.5 * s
            } else {
                s
            }
        })
        .collect();
    let samples = 10 * d + 1;
    let mut worst: f64 = 0.0;
    for i in 0..samples {
        let x = -1.0 + 2.0 * i as f64 / (samples - 1) as f64;
        let p = match nodes.iter().position(|&xj| xj == x) {
            Some(j) => values[j],
            None => {
                let (mut num, mut den) = (0.0, 0.0);
                for j in 0..=d {
                    let c = bary[j] / (x - nodes[j]);
                    num += c * values[j];
                    den += c;
                }
                num / den
            }
        };
        worst = worst.max((f(x) - p).abs());
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fit_exact_power_law() {
        let n: Vec<usize> = (3..11).map(|k| 1usize << k).collect();
        let err: Vec<f64> = n.iter().map(|&n| 3.0 * (n as f64).powi(-2)).collect();
        assert!((fit_exponent(&n, &err).unwrap() - 2.0).abs() < 1e-10);
    }

    #[test]
    fn fit_with_bounded_oscillation() {
        let n: Vec<usize> = (3..11).map(|k| 1usize << k).collect();
        let err: Vec<f64> = n
            .iter()
            .enumerate()
            .map(|(i, &n)| {
                let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
                3.0 * (n as f64).powi(-2) * (1.0 + 0.1 * sign)
            })
            .collect();
        assert!((fit_exponent(&n, &err).unwrap() - 2.0).abs() <= 0.1);
    }

    #[test]
    fn fit_constant_is_zero() {
        let n = [8, 16, 32, 64, 128];
        let err = [0.25; 5];
        assert!(fit_exponent(&n, &err).unwrap().abs() < 1e-12);
    }

    #[test]
    fn fit_needs_four_positive_points() {
        assert!(matches!(
            fit_exponent(&[1, 2, 3], &[1.0, 0.5, 0.3]),
            Err(Error::InsufficientPoints { .. })
        ));
        assert!(fit_exponent(&[1, 2, 3, 4], &[1.0, 0.0, 0.3, 0.1]).is_err());
    }

    #[test]
    fn ratio_report_legendre() {
        let r = spacing_ratio_report(JacobiExponents::LEGENDRE, 16).unwrap();
        assert_eq!(r.interior_ratios.len(), 16);
        assert!(r.interior_ratios.iter().all(|&x| (0.5..=2.0).contains(&x)));
        assert!(spacing_ratio_report(JacobiExponents::LEGENDRE, 2).is_err());
    }

    #[test]
    fn chebyshev_interpolant_reproduces_polynomials() {
        let err = chebyshev_interpolation_error(&|t: f64| 1.0 - 3.0 * t + t.powi(5), 5);
        assert!(err < 1e-14);
    }

    #[test]
    fn study_rejects_short_or_unsorted_sweeps() {
        let e = JacobiExponents::LEGENDRE;
        let spec = IntegrandSpec::ExpT;
        assert!(convergence_study(e, &spec, &[1, 2, 3], 1, 1.0).is_err());
        assert!(convergence_study(e, &spec, &[1, 3, 2, 4], 1, 1.0).is_err());
    }
}
