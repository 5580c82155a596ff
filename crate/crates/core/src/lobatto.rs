//! The `(n+2)`-point Gauss-Jacobi-Lobatto rule with nodes `-1 = t_0 < t_1 <
//! ... < t_n < t_{n+1} = 1`, exact for polynomials of degree `2n + 1`.
//!
//! Interior nodes are the zeros of the orthonormal `p_n` for the shifted
//! weight `w^{alpha+1, beta+1}`, and each interior weight is the shifted
//! Christoffel number divided by `1 - t_k^2`. The endpoint weights come from
//! their Gamma-ratio closed form, evaluated as a product over `n`.

use std::ops::Deref;

use serde::Serialize;

use crate::ddouble::DoubleDouble;
use crate::gauss::{gauss_nodes_dd, gauss_rule, QuadratureRule, RuleKind};
use crate::jacobi::{recurrence, JacobiExponents};
use crate::special::scaled_beta;
use crate::{Error, Result};

/// Largest interior count accepted by [`lagrange_weight_crosscheck`].
pub const LAGRANGE_MAX_N: usize = 32;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LobattoRule {
    #[serde(flatten)]
    rule: QuadratureRule,
    interior_count: usize,
}

impl LobattoRule {
    /// Number of interior nodes `n`.
    pub fn interior_count(&self) -> usize {
        self.interior_count
    }

    pub fn rule(&self) -> &QuadratureRule {
        &self.rule
    }

    pub fn into_rule(self) -> QuadratureRule {
        self.rule
    }
}

impl Deref for LobattoRule {
    type Target = QuadratureRule;

    fn deref(&self) -> &QuadratureRule {
        &self.rule
    }
}

pub fn lobatto_rule(e: JacobiExponents, n: usize) -> Result<LobattoRule> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "a Lobatto rule needs n >= 1 interior nodes".into(),
        ));
    }
    let (inner_nodes, inner_weights) = gauss_nodes_dd(e.shifted(1.0, 1.0)?, n)?;
    let (w_left, w_right) = endpoint_weights(e, n);

    let mut nodes = Vec::with_capacity(n + 2);
    let mut weights = Vec::with_capacity(n + 2);
    nodes.push(-1.0);
    weights.push(w_left);
    let one = DoubleDouble::from_f64(1.0);
    for (&t, &lambda) in inner_nodes.iter().zip(&inner_weights) {
        nodes.push(t.value());
        weights.push(lambda / ((one - t) * (one + t)).value());
    }
    nodes.push(1.0);
    weights.push(w_right);

    let rule = QuadratureRule::from_parts(e, RuleKind::Lobatto, nodes, weights, 2 * n + 1);
    Ok(LobattoRule {
        rule,
        interior_count: n,
    })
}

/// `(w_0, w_{n+1})` from
/// `w_0 = 2^(a+b+1) G(b+1) G(b+2) G(n+a+2) G(n+1) / (G(n+a+b+3) G(n+b+2))`
/// and its mirror image, accumulated as a ratio product starting at `n = 0`.
pub fn endpoint_weights(e: JacobiExponents, n: usize) -> (f64, f64) {
    (
        left_endpoint_weight(e, n),
        left_endpoint_weight(e.reflected(), n),
    )
}

fn left_endpoint_weight(e: JacobiExponents, n: usize) -> f64 {
    let (a, b) = (e.alpha(), e.beta());
    let mut w = scaled_beta(a + b + 1.0, a + 2.0, b + 1.0);
    for j in 1..=n {
        let j = j as f64;
        w *= (j + a + 1.0) * j / ((j + a + b + 2.0) * (j + b + 1.0));
    }
    w
}

/// Endpoint weights by enforcing exactness on `1` and `t` given the interior
/// nodes and weights. Loses relative accuracy once the endpoint weights fall
/// far below `mu_0`.
pub fn endpoint_weights_by_moment_matching(rule: &LobattoRule) -> Result<(f64, f64)> {
    let e = rule.exponents();
    let m = e.monomial_moments(1);
    let n = rule.interior_count();
    let inner_nodes = &rule.nodes()[1..=n];
    let inner_weights = &rule.weights()[1..=n];
    let mut r0 = DoubleDouble::from_f64(m[0]);
    let mut r1 = DoubleDouble::from_f64(m[1]);
    for (&t, &w) in inner_nodes.iter().zip(inner_weights) {
        r0 = r0.add_product(-w, 1.0);
        r1 = r1.add_product(-w, t);
    }
    // [[1, 1], [t_0, t_{n+1}]] (w_0, w_{n+1})^T = (r0, r1)^T
    let (t0, t1) = (rule.nodes()[0], rule.nodes()[n + 1]);
    let det = t1 - t0;
    if det == 0.0 {
        return Err(Error::SingularSystem);
    }
    let (r0, r1) = (r0.value(), r1.value());
    Ok(((t1 * r0 - r1) / det, (r1 - t0 * r0) / det))
}

/// Endpoint weights from the integral representations
/// `w_0 = 1/2 int q(t)/q(-1) w^{a+1,b}(t) dt` and
/// `w_{n+1} = 1/2 int q(t)/q(1) w^{a,b+1}(t) dt`, `q = p_n^{a+1,b+1}`,
/// each integrated by an `(n+1)`-point Gauss rule.
pub fn endpoint_weights_by_representation(e: JacobiExponents, n: usize) -> Result<(f64, f64)> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be >= 1".into()));
    }
    let rec = recurrence(e.shifted(1.0, 1.0)?, n)?;
    let q = |t: f64| rec.eval_pair(n, t).0;
    let (q_left, q_right) = (q(-1.0), q(1.0));
    let left = gauss_rule(e.shifted(1.0, 0.0)?, n + 1)?.integrate(|t| q(t) / q_left)?;
    let right = gauss_rule(e.shifted(0.0, 1.0)?, n + 1)?.integrate(|t| q(t) / q_right)?;
    Ok((0.5 * left, 0.5 * right))
}

/// Relative deviation between `w_k` of the Lobatto rule and
/// `int l_k(t) w(t) dt`, where `l_k` is the Lagrange fundamental polynomial
/// on the Lobatto nodes, integrated by an `(n+2)`-point Gauss rule.
pub fn lagrange_weight_crosscheck(e: JacobiExponents, n: usize, k: usize) -> Result<f64> {
    if n == 0 || n > LAGRANGE_MAX_N {
        return Err(Error::Precondition(format!(
            "Lagrange cross-check needs 1 <= n <= {LAGRANGE_MAX_N}, got {n}"
        )));
    }
    if k > n + 1 {
        return Err(Error::Precondition(format!(
            "node index {k} exceeds n+1 = {}",
            n + 1
        )));
    }
    let rule = lobatto_rule(e, n)?;
    let w_lagrange = lagrange_weight(rule.nodes(), k, &gauss_rule(e, n + 2)?)?;
    let w = rule.weights()[k];
    Ok(((w_lagrange - w) / w).abs())
}

fn lagrange_weight(nodes: &[f64], k: usize, gauss: &QuadratureRule) -> Result<f64> {
    let tk = nodes[k];
    gauss.integrate(|t| {
        nodes
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != k)
            .map(|(_, &tj)| (t - tj) / (tk - tj))
            .product()
    })
}

/// `(1 - t^2) p_n^{a+1,b+1}(t)^2`: degree `2n + 2`, zero at every Lobatto
/// node, with weighted integral exactly 1.
#[derive(Debug, Clone)]
pub struct SharpnessIntegrand {
    rec: crate::jacobi::RecurrenceData,
    n: usize,
}

impl SharpnessIntegrand {
    pub fn new(e: JacobiExponents, n: usize) -> Result<Self> {
        Ok(Self {
            rec: recurrence(e.shifted(1.0, 1.0)?, n.max(1))?,
            n,
        })
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.eval_gaps(t, 1.0 - t, 1.0 + t)
    }

    pub fn eval_gaps(&self, t: f64, one_minus: f64, one_plus: f64) -> f64 {
        let q = self.rec.eval_pair(self.n, t).0;
        one_minus * one_plus * q * q
    }
}
