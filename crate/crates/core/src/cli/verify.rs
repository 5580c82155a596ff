//! The invariant suite behind `jlq verify`.

use crate::analysis::{spacing_ratio_sweep, ENDPOINT_RATIO_BOUND, INTERIOR_SPREAD_BOUND};
use crate::gauss::{gauss_rule, nevai_identity_residual, QuadratureRule};
use crate::integrand::{horner, random_coefficients, ORACLE_LEVELS};
use crate::jacobi::JacobiExponents;
use crate::lobatto::{
    endpoint_weights_by_representation, lagrange_weight_crosscheck, lobatto_rule,
    SharpnessIntegrand, LAGRANGE_MAX_N,
};
use crate::oracle::reference_integral;
use crate::Result;

use super::output::fmt_f64;

pub const WEIGHT_SUM_TOL: f64 = 1e-12;
pub const EXACTNESS_TOL: f64 = 1e-10;
pub const SHARPNESS_TOL: f64 = 1e-8;
pub const NEVAI_TOL: f64 = 1e-9;
pub const REPRESENTATION_TOL: f64 = 1e-9;
pub const LAGRANGE_TOL: f64 = 1e-9;
pub const ORACLE_TOL: f64 = 1e-12;
pub const RANDOM_POLYS: usize = 20;
/// Largest `n` used by the exactness and representation checks.
pub const EXACTNESS_MAX_N: usize = 64;
pub const NEVAI_MAX_M: usize = 256;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CheckOutcome {
    fn new(name: &'static str, passed: bool, detail: String) -> Self {
        Self {
            name,
            passed,
            detail,
        }
    }

    pub fn line(&self) -> String {
        format!(
            "{} {}: {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.detail
        )
    }
}

/// `1, 2, 4, ...` up to and including `max` (and `max` itself if not a power of two).
pub fn doubling(start: usize, max: usize) -> Vec<usize> {
    let mut v = Vec::new();
    let mut n = start.max(1);
    while n <= max {
        v.push(n);
        n *= 2;
    }
    if v.last().is_some_and(|&l| l != max) && max >= start {
        v.push(max);
    }
    v
}

/// Max over `count` seeded random polynomials of degree `rule.exactness_degree()`
/// of `|Q(p) - I(p)| / (sum |c_k| mu_0)`.
pub fn random_exactness_error(rule: &QuadratureRule, count: usize, seed: u64) -> Result<f64> {
    let e = rule.exponents();
    let d = rule.exactness_degree();
    let moments = e.monomial_moments(d);
    let mu0 = moments[0];
    let mut worst: f64 = 0.0;
    for i in 0..count {
        let c = random_coefficients(
            d,
            seed.wrapping_mul(1_000_003)
                .wrapping_add((d * 1000 + i) as u64),
        );
        let exact = crate::ddouble::dot(&c, &moments);
        let q = rule.integrate(|t| horner(&c, t))?;
        let scale: f64 = c.iter().map(|x| x.abs()).sum::<f64>() * mu0;
        worst = worst.max((q - exact).abs() / scale);
    }
    Ok(worst)
}

/// `|e_n(f) - 1|` for the sharpness integrand, its true integral taken from an
/// `(n+2)`-point Gauss rule (exact to degree `2n+3`).
pub fn sharpness_deviation(e: JacobiExponents, n: usize) -> Result<f64> {
    let rule = lobatto_rule(e, n)?;
    let f = SharpnessIntegrand::new(e, n)?;
    let q = rule.integrate(|t| f.eval(t))?;
    let exact = gauss_rule(e, n + 2)?.integrate(|t| f.eval(t))?;
    Ok(((exact - q) - 1.0).abs())
}

pub fn run_checks(e: JacobiExponents, n_max: usize, seed: u64) -> Result<Vec<CheckOutcome>> {
    let n_max = n_max.max(1);
    let mu0 = e.zeroth_moment();
    let sweep = doubling(1, n_max);
    let mut out = Vec::new();

    // rules: ordering and positivity
    let mut worst_sum: f64 = 0.0;
    let mut ordered = true;
    for &n in &sweep {
        let lob = lobatto_rule(e, n)?;
        let gau = gauss_rule(e, n)?;
        for r in [lob.rule(), &gau] {
            let s = crate::ddouble::sum(r.weights().iter().copied());
            worst_sum = worst_sum.max(((s - mu0) / mu0).abs());
            ordered &= r.weights().iter().all(|&w| w > 0.0 && w.is_finite());
            ordered &= r.nodes().windows(2).all(|p| p[0] < p[1]);
        }
        ordered &= lob.nodes()[0] == -1.0 && lob.nodes()[n + 1] == 1.0;
        ordered &= gau.nodes()[0] > -1.0 && gau.nodes()[n - 1] < 1.0;
    }
    out.push(CheckOutcome::new(
        "weight_sum",
        worst_sum <= WEIGHT_SUM_TOL,
        format!(
            "max_rel={} tol={}",
            fmt_f64(worst_sum),
            fmt_f64(WEIGHT_SUM_TOL)
        ),
    ));
    out.push(CheckOutcome::new(
        "nodes_ordered_weights_positive",
        ordered,
        format!("n_values={}", sweep.len()),
    ));

    let exact_sweep: Vec<usize> = sweep
        .iter()
        .copied()
        .filter(|&n| n <= EXACTNESS_MAX_N)
        .collect();
    let mut worst_lob: f64 = 0.0;
    let mut worst_gauss: f64 = 0.0;
    for &n in &exact_sweep {
        worst_lob = worst_lob.max(random_exactness_error(
            lobatto_rule(e, n)?.rule(),
            RANDOM_POLYS,
            seed,
        )?);
        worst_gauss = worst_gauss.max(random_exactness_error(
            &gauss_rule(e, n)?,
            RANDOM_POLYS,
            seed,
        )?);
    }
    out.push(CheckOutcome::new(
        "exactness_lobatto",
        worst_lob <= EXACTNESS_TOL,
        format!(
            "max_rel={} tol={}",
            fmt_f64(worst_lob),
            fmt_f64(EXACTNESS_TOL)
        ),
    ));
    out.push(CheckOutcome::new(
        "exactness_gauss",
        worst_gauss <= EXACTNESS_TOL,
        format!(
            "max_rel={} tol={}",
            fmt_f64(worst_gauss),
            fmt_f64(EXACTNESS_TOL)
        ),
    ));

    let mut worst_sharp: f64 = 0.0;
    for &n in &exact_sweep {
        worst_sharp = worst_sharp.max(sharpness_deviation(e, n)?);
    }
    out.push(CheckOutcome::new(
        "sharpness_identity",
        worst_sharp <= SHARPNESS_TOL,
        format!(
            "max_abs_dev={} tol={}",
            fmt_f64(worst_sharp),
            fmt_f64(SHARPNESS_TOL)
        ),
    ));

    let mut worst_nevai: f64 = 0.0;
    for m in doubling(2, n_max.clamp(2, NEVAI_MAX_M)) {
        worst_nevai = worst_nevai.max(nevai_identity_residual(e, m)?);
    }
    out.push(CheckOutcome::new(
        "nevai_identity",
        worst_nevai <= NEVAI_TOL,
        format!(
            "max_rel={} tol={}",
            fmt_f64(worst_nevai),
            fmt_f64(NEVAI_TOL)
        ),
    ));

    let mut interlaced = true;
    for &m in &sweep {
        let a = gauss_rule(e, m)?;
        let b = gauss_rule(e, m + 1)?;
        interlaced &=
            (0..m).all(|k| b.nodes()[k] < a.nodes()[k] && a.nodes()[k] < b.nodes()[k + 1]);
    }
    out.push(CheckOutcome::new(
        "gauss_interlacing",
        interlaced,
        format!("m_values={}", sweep.len()),
    ));

    let mut worst_rep: f64 = 0.0;
    for &n in &exact_sweep {
        let rule = lobatto_rule(e, n)?;
        let (l, r) = endpoint_weights_by_representation(e, n)?;
        worst_rep = worst_rep
            .max((l / rule.weights()[0] - 1.0).abs())
            .max((r / rule.weights()[n + 1] - 1.0).abs());
    }
    out.push(CheckOutcome::new(
        "endpoint_representation",
        worst_rep <= REPRESENTATION_TOL,
        format!(
            "max_rel={} tol={}",
            fmt_f64(worst_rep),
            fmt_f64(REPRESENTATION_TOL)
        ),
    ));

    let mut worst_lag: f64 = 0.0;
    for &n in sweep.iter().filter(|&&n| n <= LAGRANGE_MAX_N) {
        for k in 0..n + 2 {
            worst_lag = worst_lag.max(lagrange_weight_crosscheck(e, n, k)?);
        }
    }
    out.push(CheckOutcome::new(
        "lagrange_weights",
        worst_lag <= LAGRANGE_TOL,
        format!(
            "max_rel={} tol={}",
            fmt_f64(worst_lag),
            fmt_f64(LAGRANGE_TOL)
        ),
    ));

    let ratio_ns = doubling(8, n_max);
    if ratio_ns.is_empty() {
        out.push(CheckOutcome::new(
            "weight_spacing_ratios",
            true,
            "skipped: n_max < 8".into(),
        ));
    } else {
        let s = spacing_ratio_sweep(e, &ratio_ns)?;
        let spread = s.interior_spread();
        let ok = spread <= INTERIOR_SPREAD_BOUND
            && s.left_end_max <= ENDPOINT_RATIO_BOUND
            && s.right_end_max <= ENDPOINT_RATIO_BOUND;
        out.push(CheckOutcome::new(
            "weight_spacing_ratios",
            ok,
            format!(
                "interior_spread={} left_max={} right_max={} bounds={},{}",
                fmt_f64(spread),
                fmt_f64(s.left_end_max),
                fmt_f64(s.right_end_max),
                fmt_f64(INTERIOR_SPREAD_BOUND),
                fmt_f64(ENDPOINT_RATIO_BOUND)
            ),
        ));
    }

    let oracle = reference_integral(e, |_| 1.0, ORACLE_LEVELS)?;
    let dev = (oracle.value - mu0).abs();
    out.push(CheckOutcome::new(
        "oracle_zeroth_moment",
        dev <= ORACLE_TOL * mu0.max(1.0),
        format!(
            "abs_dev={} tol={}",
            fmt_f64(dev),
            fmt_f64(ORACLE_TOL * mu0.max(1.0))
        ),
    ));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn doubling_sequences() {
        assert_eq!(doubling(1, 8), vec![1, 2, 4, 8]);
        assert_eq!(doubling(1, 10), vec![1, 2, 4, 8, 10]);
        assert_eq!(doubling(8, 4), Vec::<usize>::new());
        assert_eq!(doubling(2, 2), vec![2]);
    }
}
