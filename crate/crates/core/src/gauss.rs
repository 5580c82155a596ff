//! Gauss-Jacobi rules from the symmetric Jacobi matrix.

use serde::Serialize;

use crate::ddouble::DoubleDouble;
use crate::jacobi::{recurrence, JacobiExponents, RecurrenceData};
use crate::tridiag::symmetric_tridiagonal_eigen;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RuleKind {
    Gauss,
    Lobatto,
}

impl RuleKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            RuleKind::Gauss => "gauss",
            RuleKind::Lobatto => "lobatto",
        }
    }
}

/// Node/weight table for `int f(t) w(t) dt`. Nodes ascend.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuadratureRule {
    exponents: JacobiExponents,
    kind: RuleKind,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    exactness_degree: usize,
}

impl QuadratureRule {
    pub(crate) fn from_parts(
        exponents: JacobiExponents,
        kind: RuleKind,
        nodes: Vec<f64>,
        weights: Vec<f64>,
        exactness_degree: usize,
    ) -> Self {
        debug_assert_eq!(nodes.len(), weights.len());
        Self {
            exponents,
            kind,
            nodes,
            weights,
            exactness_degree,
        }
    }

    pub fn exponents(&self) -> JacobiExponents {
        self.exponents
    }

    pub fn kind(&self) -> RuleKind {
        self.kind
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Highest polynomial degree integrated exactly.
    pub fn exactness_degree(&self) -> usize {
        self.exactness_degree
    }

    /// `sum_k w_k f(t_k)`, accumulated in double-double.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> Result<f64> {
        let mut acc = DoubleDouble::ZERO;
        for (index, (&node, &w)) in self.nodes.iter().zip(&self.weights).enumerate() {
            let value = f(node);
            if !value.is_finite() {
                return Err(Error::NonFiniteIntegrand { index, node, value });
            }
            acc = acc.add_product(w, value);
        }
        Ok(acc.value())
    }

    /// `sum_k w_k |f(t_k)|`; used as a rounding-error scale.
    pub fn integrate_abs<F: Fn(f64) -> f64>(&self, f: F) -> Result<f64> {
        self.integrate(|t| f(t).abs())
    }
}

/// `m`-point Gauss-Jacobi rule, exact to degree `2m - 1`.
///
/// Nodes are eigenvalues of the Jacobi matrix, each refined by Newton steps
/// on `p_m` that must stay between the neighbouring eigenvalue midpoints.
/// The weight at node `x` is `mu_0 v_0^2` for the unit eigenvector
/// `v ~ (p_0(x), ..., p_{m-1}(x))`, i.e. `1 / sum_j p_j(x)^2`, which keeps
/// tiny weights accurate to full relative precision.
pub fn gauss_rule(e: JacobiExponents, m: usize) -> Result<QuadratureRule> {
    let (nodes, weights) = gauss_nodes_dd(e, m)?;
    let nodes = nodes.iter().map(|x| x.value()).collect();
    Ok(QuadratureRule::from_parts(
        e,
        RuleKind::Gauss,
        nodes,
        weights,
        2 * m - 1,
    ))
}

/// Gauss nodes carried to double-double precision, with weights evaluated
/// there. Near `t = +-1` the rounding of a node to `f64` alone would cost
/// several digits in `1 / sum p_j^2` and in the gaps `1 -+ t`.
pub(crate) fn gauss_nodes_dd(
    e: JacobiExponents,
    m: usize,
) -> Result<(Vec<DoubleDouble>, Vec<f64>)> {
    if m == 0 {
        return Err(Error::InvalidArgument(
            "a Gauss rule needs at least one node".into(),
        ));
    }
    let rec = recurrence(e, m)?;
    let nodes = polished_nodes(&rec, m)?;
    let weights = nodes
        .iter()
        .map(|&x| (DoubleDouble::from_f64(1.0) / rec.christoffel_sum_dd(m, x)).value())
        .collect();
    Ok((nodes, weights))
}

/// Plain Golub-Welsch weights `mu_0 z_k^2` from the accumulated first
/// eigenvector components, without node refinement.
pub fn golub_welsch_weights(e: JacobiExponents, m: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if m == 0 {
        return Err(Error::InvalidArgument(
            "a Gauss rule needs at least one node".into(),
        ));
    }
    let rec = recurrence(e, m)?;
    let eig = symmetric_tridiagonal_eigen(&rec.diag()[..m], &rec.offdiag()[1..m])?;
    let mu0 = rec.offdiag_sq()[0];
    let w = eig.first_components.iter().map(|z| mu0 * z * z).collect();
    Ok((eig.values, w))
}

fn polished_nodes(rec: &RecurrenceData, m: usize) -> Result<Vec<DoubleDouble>> {
    let eig = symmetric_tridiagonal_eigen(&rec.diag()[..m], &rec.offdiag()[1..m])?;
    let raw = eig.values;
    let mut nodes = Vec::with_capacity(m);
    for k in 0..m {
        let lo = if k == 0 {
            -1.0
        } else {
            0.5 * (raw[k - 1] + raw[k])
        };
        let hi = if k + 1 == m {
            1.0
        } else {
            0.5 * (raw[k] + raw[k + 1])
        };
        let mut x = raw[k].clamp(lo, hi);
        for _ in 0..2 {
            let (p, dp) = rec.eval_orthonormal(m, x)?;
            if dp == 0.0 {
                break;
            }
            let candidate = x - p / dp;
            if !candidate.is_finite() || candidate <= lo || candidate >= hi {
                break;
            }
            x = candidate;
        }
        let mut xd = DoubleDouble::from_f64(x);
        for _ in 0..2 {
            let (p, dp, _) = rec.eval_pair_dd(m, xd);
            if dp.hi == 0.0 {
                break;
            }
            let candidate = xd - p / dp;
            if !candidate.hi.is_finite() || candidate.hi <= lo || candidate.hi >= hi {
                break;
            }
            xd = candidate;
        }
        nodes.push(xd);
    }
    Ok(nodes)
}

/// Scaled Christoffel numbers and node gaps of an `m`-point Gauss rule.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChristoffelSpacingReport {
    pub exponents: JacobiExponents,
    pub m: usize,
    /// `lambda_k m / (sqrt(1 - x_k^2) w(x_k))`, `k = 1..m`.
    pub christoffel_ratios: Vec<f64>,
    /// `(x_{k+1} - x_k) m / sqrt(1 - xbar_k^2)` with `xbar_k` the gap midpoint.
    pub spacing_ratios: Vec<f64>,
}

pub fn christoffel_spacing_report(
    e: JacobiExponents,
    m: usize,
) -> Result<ChristoffelSpacingReport> {
    if m < 3 {
        return Err(Error::InvalidArgument(
            "christoffel/spacing report needs m >= 3".into(),
        ));
    }
    let rule = gauss_rule(e, m)?;
    let mf = m as f64;
    let christoffel_ratios = rule
        .nodes()
        .iter()
        .zip(rule.weights())
        .map(|(&x, &lambda)| {
            let (om, op) = (1.0 - x, 1.0 + x);
            lambda * mf / ((om * op).sqrt() * e.weight_from_gaps(om, op))
        })
        .collect();
    let spacing_ratios = rule
        .nodes()
        .windows(2)
        .map(|w| {
            let mid = 0.5 * (w[0] + w[1]);
            (w[1] - w[0]) * mf / ((1.0 - mid) * (1.0 + mid)).sqrt()
        })
        .collect();
    Ok(ChristoffelSpacingReport {
        exponents: e,
        m,
        christoffel_ratios,
        spacing_ratios,
    })
}

/// Largest relative residual over the nodes of
/// `1 / p_{m-1}(x_k) = (gamma_{m-1} / gamma_m) lambda_k p_m'(x_k)`.
pub fn nevai_identity_residual(e: JacobiExponents, m: usize) -> Result<f64> {
    if m < 2 {
        return Err(Error::InvalidArgument("Nevai identity needs m >= 2".into()));
    }
    let (nodes, weights) = gauss_nodes_dd(e, m)?;
    let rec = recurrence(e, m)?;
    let ratio = rec.leading_ratio(m);
    let mut worst: f64 = 0.0;
    for (&x, &lambda) in nodes.iter().zip(&weights) {
        let (_, dp, p_prev) = rec.eval_pair_dd(m, x);
        let lhs = 1.0 / p_prev.value();
        let rhs = lambda * dp.value() / ratio;
        worst = worst.max(((lhs - rhs) / lhs).abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn ex(a: f64, b: f64) -> JacobiExponents {
        JacobiExponents::new(a, b).unwrap()
    }

    #[test]
    fn one_point_rules() {
        let r = gauss_rule(ex(0.0, 0.0), 1).unwrap();
        assert_eq!(r.nodes(), &[0.0]);
        assert!((r.weights()[0] - 2.0).abs() < 1e-15);
        assert_eq!(r.exactness_degree(), 1);
        for &(a, b) in &[(0.5, -0.5), (2.5, -0.9), (-0.9, 0.0)] {
            let r = gauss_rule(ex(a, b), 1).unwrap();
            assert!((r.nodes()[0] - (b - a) / (a + b + 2.0)).abs() < 1e-15);
        }
    }

    #[test]
    fn chebyshev_three_points() {
        let r = gauss_rule(JacobiExponents::CHEBYSHEV, 3).unwrap();
        let expect = [(5.0 * PI / 6.0).cos(), 0.0, (PI / 6.0).cos()];
        for (x, y) in r.nodes().iter().zip(expect) {
            assert!((x - y).abs() < 1e-15);
        }
        for w in r.weights() {
            assert!((w - PI / 3.0).abs() < 1e-14);
        }
    }

    #[test]
    fn zero_points_rejected() {
        assert!(gauss_rule(ex(0.0, 0.0), 0).is_err());
    }

    #[test]
    fn golub_welsch_weights_agree_for_moderate_m() {
        let e = ex(0.5, 1.5);
        let (x, w) = golub_welsch_weights(e, 12).unwrap();
        let r = gauss_rule(e, 12).unwrap();
        for k in 0..12 {
            assert!((x[k] - r.nodes()[k]).abs() < 1e-14);
            assert!((w[k] - r.weights()[k]).abs() < 1e-14 * e.zeroth_moment());
        }
    }

    #[test]
    fn chebyshev_christoffel_ratio_is_pi() {
        let rep = christoffel_spacing_report(JacobiExponents::CHEBYSHEV, 37).unwrap();
        for r in &rep.christoffel_ratios {
            assert!((r - PI).abs() < 1e-12, "{r}");
        }
    }

    #[test]
    fn nevai_small_cases() {
        assert!(nevai_identity_residual(ex(0.0, 0.0), 8).unwrap() <= 1e-12);
        assert!(nevai_identity_residual(ex(2.0, -0.5), 64).unwrap() <= 1e-10);
        for &(a, b) in &[(0.0, 0.0), (-0.9, 2.5), (0.3, 0.7)] {
            assert!(nevai_identity_residual(ex(a, b), 2).unwrap() <= 1e-13);
        }
        assert!(nevai_identity_residual(ex(0.0, 0.0), 1).is_err());
    }

    #[test]
    fn non_finite_integrand_names_the_node() {
        let r = gauss_rule(ex(0.0, 0.0), 3).unwrap();
        let err = r
            .integrate(|t| if t > 0.5 { f64::NAN } else { 1.0 })
            .unwrap_err();
        match err {
            Error::NonFiniteIntegrand { index, node, .. } => {
                assert_eq!(index, 2);
                assert_eq!(node, r.nodes()[2]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
