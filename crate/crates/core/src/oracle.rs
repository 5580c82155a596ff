//! Reference integrals that share no code with the Gauss/Lobatto rules.
//!
//! [`reference_integral`] is a tanh-sinh (double exponential) trapezoid rule
//! with the Jacobi weight folded into the transformed integrand in log
//! space. [`closed_form_reference`] covers the Beta-function cases.

use std::f64::consts::{FRAC_PI_2, LN_2};

use serde::Serialize;

use crate::ddouble::DoubleDouble;
use crate::jacobi::JacobiExponents;
use crate::special::{beta, scaled_beta};
use crate::{Error, Result};

pub const MIN_LEVELS: usize = 4;
pub const MAX_LEVELS: usize = 12;

/// Terms smaller than this fraction of the largest term end the u-range.
const TRUNCATION: f64 = 1e-40;
/// Hard cap on |u|; `(pi/2) sinh(8)` is about 2300.
const U_CAP: f64 = 8.0;

/// A point of `[-1, 1]` together with its distances to both endpoints,
/// each computed without cancellation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Abscissa {
    pub t: f64,
    pub one_minus: f64,
    pub one_plus: f64,
}

impl Abscissa {
    pub fn new(t: f64) -> Self {
        Self {
            t,
            one_minus: 1.0 - t,
            one_plus: 1.0 + t,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ReferenceMethod {
    ClosedForm,
    TanhSinh,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReferenceValue {
    pub value: f64,
    pub method: ReferenceMethod,
    /// Absolute error bound.
    pub estimated_accuracy: f64,
    /// False when tanh-sinh ran out of levels before successive levels agreed.
    pub converged: bool,
    /// `|I_L - I_{L-1}|` for each refinement level (tanh-sinh only).
    pub level_differences: Vec<f64>,
}

impl ReferenceValue {
    pub fn exact(value: f64, estimated_accuracy: f64) -> Self {
        Self {
            value,
            method: ReferenceMethod::ClosedForm,
            estimated_accuracy,
            converged: true,
            level_differences: Vec::new(),
        }
    }
}

/// `int_{-1}^{1} f(t) w(t) dt` by tanh-sinh, refining up to `levels` times.
pub fn reference_integral<F>(e: JacobiExponents, f: F, levels: usize) -> Result<ReferenceValue>
where
    F: Fn(Abscissa) -> f64,
{
    reference_integral_split(e, f, levels, &[])
}

/// As [`reference_integral`], with the interval split at `breakpoints`
/// (interior points where `f` is not smooth).
pub fn reference_integral_split<F>(
    e: JacobiExponents,
    f: F,
    levels: usize,
    breakpoints: &[f64],
) -> Result<ReferenceValue>
where
    F: Fn(Abscissa) -> f64,
{
    if !(MIN_LEVELS..=MAX_LEVELS).contains(&levels) {
        return Err(Error::InvalidArgument(format!(
            "tanh-sinh levels must be in [{MIN_LEVELS}, {MAX_LEVELS}], got {levels}"
        )));
    }
    let mut edges = vec![-1.0];
    let mut bps: Vec<f64> = breakpoints.to_vec();
    bps.sort_by(f64::total_cmp);
    bps.dedup();
    for b in bps {
        if !(b > -1.0 && b < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "breakpoint {b} outside (-1, 1)"
            )));
        }
        edges.push(b);
    }
    edges.push(1.0);

    let mut panels: Vec<Panel> = edges
        .windows(2)
        .map(|w| Panel::new(e, w[0], w[1]))
        .collect();
    for p in &mut panels {
        p.choose_range(&f)?;
    }

    let mut prev: Option<f64> = None;
    let mut diffs = Vec::new();
    let mut value = 0.0;
    let mut roundoff = 0.0;
    let mut converged = false;
    for level in 0..=levels {
        value = 0.0;
        roundoff = 0.0;
        for p in &mut panels {
            p.refine(level, &f)?;
            let (v, r) = p.estimate(level);
            value += v;
            roundoff += r;
        }
        if let Some(pv) = prev {
            let d = (value - pv).abs();
            diffs.push(d);
            if level >= 3 && d <= 4.0 * roundoff {
                converged = true;
                break;
            }
        }
        prev = Some(value);
    }
    let last = diffs.last().copied().unwrap_or(f64::INFINITY);
    let tail: f64 = panels.iter().map(|p| p.tail_bound).sum();
    Ok(ReferenceValue {
        value,
        method: ReferenceMethod::TanhSinh,
        estimated_accuracy: last.max(roundoff) + tail,
        converged,
        level_differences: diffs,
    })
}

/// One sub-interval `[a, b]` mapped onto `u` in `(-inf, inf)`.
struct Panel {
    e: JacobiExponents,
    a: f64,
    b: f64,
    half: f64,
    ln_half: f64,
    /// `1 + a` and `1 - b`, both >= 0.
    gap_left: f64,
    gap_right: f64,
    u_min: f64,
    u_max: f64,
    sum: DoubleDouble,
    abs_sum: f64,
    tail_bound: f64,
}

/// `ln(1 + e^x)` without overflow.
fn softplus(x: f64) -> f64 {
    x.max(0.0) + (-x.abs()).exp().ln_1p()
}

fn ln_cosh(u: f64) -> f64 {
    u.abs() + (-2.0 * u.abs()).exp().ln_1p() - LN_2
}

impl Panel {
    fn new(e: JacobiExponents, a: f64, b: f64) -> Self {
        let half = 0.5 * (b - a);
        Self {
            e,
            a,
            b,
            half,
            ln_half: half.ln(),
            gap_left: 1.0 + a,
            gap_right: 1.0 - b,
            u_min: -U_CAP,
            u_max: U_CAP,
            sum: DoubleDouble::ZERO,
            abs_sum: 0.0,
            tail_bound: 0.0,
        }
    }

    /// Term `h * f(t(u)) * w(t(u)) * dt/du` without the step `h`.
    fn term<F: Fn(Abscissa) -> f64>(&self, u: f64, f: &F) -> Result<f64> {
        let s = FRAC_PI_2 * u.sinh();
        // ln(1 - tau), ln(1 + tau) for tau = tanh(s)
        let ln_om_tau = LN_2 - softplus(2.0 * s);
        let ln_op_tau = LN_2 - softplus(-2.0 * s);
        let ln_jac = FRAC_PI_2.ln() + ln_cosh(u) + ln_om_tau + ln_op_tau + self.ln_half;

        let ln_one_plus = if self.gap_left == 0.0 {
            self.ln_half + ln_op_tau
        } else {
            (self.gap_left + self.half * ln_op_tau.exp()).ln()
        };
        let ln_one_minus = if self.gap_right == 0.0 {
            self.ln_half + ln_om_tau
        } else {
            (self.gap_right + self.half * ln_om_tau.exp()).ln()
        };
        let mut ln_w = 0.0;
        if self.e.alpha() != 0.0 {
            ln_w += self.e.alpha() * ln_one_minus;
        }
        if self.e.beta() != 0.0 {
            ln_w += self.e.beta() * ln_one_plus;
        }
        let scale = (ln_jac + ln_w).exp();
        if scale == 0.0 {
            return Ok(0.0);
        }
        let t = if s >= 0.0 {
            self.b - self.half * ln_om_tau.exp()
        } else {
            self.a + self.half * ln_op_tau.exp()
        };
        let x = Abscissa {
            t,
            one_minus: ln_one_minus.exp(),
            one_plus: ln_one_plus.exp(),
        };
        let v = f(x) * scale;
        if !v.is_finite() {
            return Err(Error::NonFiniteIntegrand {
                index: 0,
                node: t,
                value: v,
            });
        }
        Ok(v)
    }

    /// Walks outwards from `u = 0` in steps of 1/8 until terms stay below
    /// [`TRUNCATION`] of the running maximum.
    fn choose_range<F: Fn(Abscissa) -> f64>(&mut self, f: &F) -> Result<()> {
        let step = 0.125;
        let mut peak = self.term(0.0, f)?.abs();
        let mut ends = [U_CAP, U_CAP];
        let mut tails = [0.0, 0.0];
        for (side, sign) in [(0usize, -1.0), (1usize, 1.0)] {
            let mut quiet = 0;
            let mut j = 1;
            loop {
                let u = sign * step * j as f64;
                if u.abs() > U_CAP {
                    tails[side] = self.term(sign * U_CAP, f)?.abs();
                    break;
                }
                let v = self.term(u, f)?.abs();
                peak = peak.max(v);
                if v <= TRUNCATION * peak {
                    quiet += 1;
                    if quiet >= 4 {
                        ends[side] = u.abs();
                        break;
                    }
                } else {
                    quiet = 0;
                }
                j += 1;
            }
        }
        self.u_min = -ends[0];
        self.u_max = ends[1];
        self.tail_bound = tails[0] + tails[1];
        Ok(())
    }

    /// Adds the nodes new at `level` (step `2^-level`).
    fn refine<F: Fn(Abscissa) -> f64>(&mut self, level: usize, f: &F) -> Result<()> {
        let h = 0.5f64.powi(level as i32);
        let (jmin, jmax) = (
            (self.u_min / h).ceil() as i64,
            (self.u_max / h).floor() as i64,
        );
        for j in jmin..=jmax {
            if level > 0 && j % 2 == 0 {
                continue;
            }
            let v = self.term(j as f64 * h, f)?;
            self.sum = self.sum.add_f64(v);
            self.abs_sum += v.abs();
        }
        Ok(())
    }

    fn estimate(&self, level: usize) -> (f64, f64) {
        let h = 0.5f64.powi(level as i32);
        let value = self.sum.scale(h).value();
        (value, 16.0 * f64::EPSILON * self.abs_sum * h)
    }
}

/// Closed-form reference families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ClosedForm {
    /// `int |t|^s (1 - t^2)^alpha dt = B((s + 1)/2, alpha + 1)`; needs `alpha == beta`.
    AbsPowSymmetric { s: f64, exponents: JacobiExponents },
    /// `int (1 + t)^sigma w(t) dt = 2^(sigma+alpha+beta+1) B(alpha + 1, sigma + beta + 1)`.
    EndpointPow {
        sigma: f64,
        exponents: JacobiExponents,
    },
    /// `int t^k w(t) dt`.
    Monomial {
        k: usize,
        exponents: JacobiExponents,
    },
}

pub fn closed_form_reference(form: ClosedForm) -> Result<ReferenceValue> {
    let eps = f64::EPSILON;
    match form {
        ClosedForm::AbsPowSymmetric { s, exponents } => {
            if exponents.alpha() != exponents.beta() {
                return Err(Error::Precondition(format!(
                    "abs_pow_symmetric needs alpha == beta, got ({}, {})",
                    exponents.alpha(),
                    exponents.beta()
                )));
            }
            if !(s > -1.0) {
                return Err(Error::Precondition(format!(
                    "abs_pow needs s > -1, got {s}"
                )));
            }
            let v = beta(0.5 * (s + 1.0), exponents.alpha() + 1.0);
            Ok(ReferenceValue::exact(v, 8.0 * eps * v.abs()))
        }
        ClosedForm::EndpointPow { sigma, exponents } => {
            let (a, b) = (exponents.alpha(), exponents.beta());
            if !(sigma + b > -1.0) {
                return Err(Error::Precondition(format!(
                    "endpoint_pow needs sigma + beta > -1, got sigma={sigma} beta={b}"
                )));
            }
            let v = scaled_beta(sigma + a + b + 1.0, a + 1.0, sigma + b + 1.0);
            Ok(ReferenceValue::exact(v, 8.0 * eps * v.abs()))
        }
        ClosedForm::Monomial { k, exponents } => {
            let v = exponents.monomial_moment(k);
            let acc = 4.0 * (k as f64 + 2.0) * eps * exponents.zeroth_moment();
            Ok(ReferenceValue::exact(v, acc))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ex(a: f64, b: f64) -> JacobiExponents {
        JacobiExponents::new(a, b).unwrap()
    }

    #[test]
    fn constant_on_legendre() {
        let r = reference_integral(ex(0.0, 0.0), |_| 1.0, 10).unwrap();
        assert!((r.value - 2.0).abs() < 1e-14, "{}", r.value);
        assert!(r.converged);
        assert!(r.estimated_accuracy <= 1e-13);
    }

    #[test]
    fn constant_matches_zeroth_moment() {
        for &(a, b) in &[(-0.9, -0.9), (-0.5, 2.5), (2.5, 0.5), (0.0, -0.9)] {
            let e = ex(a, b);
            let r = reference_integral(e, |_| 1.0, 10).unwrap();
            let mu0 = e.zeroth_moment();
            assert!((r.value - mu0).abs() < 1e-13 * mu0.max(1.0), "a={a} b={b}");
        }
    }

    #[test]
    fn sqrt_abs_with_breakpoint() {
        let r = reference_integral_split(ex(0.0, 0.0), |x| x.t.abs().sqrt(), 10, &[0.0]).unwrap();
        assert!((r.value - 4.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn endpoint_power_uses_accurate_gap() {
        let e = ex(0.0, 0.0);
        let r = reference_integral(e, |x| x.one_plus.powf(0.5), 10).unwrap();
        let c = closed_form_reference(ClosedForm::EndpointPow {
            sigma: 0.5,
            exponents: e,
        })
        .unwrap();
        assert!((r.value - c.value).abs() < 1e-12);
    }

    #[test]
    fn level_bounds_enforced() {
        assert!(reference_integral(ex(0.0, 0.0), |_| 1.0, 3).is_err());
        assert!(reference_integral(ex(0.0, 0.0), |_| 1.0, 13).is_err());
        assert!(reference_integral_split(ex(0.0, 0.0), |_| 1.0, 6, &[1.0]).is_err());
    }

    #[test]
    fn closed_form_examples() {
        let e = ex(0.0, 0.0);
        let v = closed_form_reference(ClosedForm::AbsPowSymmetric {
            s: 0.5,
            exponents: e,
        })
        .unwrap();
        assert!((v.value - 4.0 / 3.0).abs() < 1e-15);
        for &(a, b) in &[(0.0, 0.0), (-0.9, 2.5), (0.5, -0.5)] {
            let e = ex(a, b);
            let v = closed_form_reference(ClosedForm::EndpointPow {
                sigma: 0.0,
                exponents: e,
            })
            .unwrap();
            assert!((v.value - e.zeroth_moment()).abs() < 1e-14 * v.value);
        }
        let bad = closed_form_reference(ClosedForm::AbsPowSymmetric {
            s: 0.5,
            exponents: ex(0.0, 1.0),
        });
        assert!(matches!(bad, Err(Error::Precondition(_))));
    }

    #[test]
    fn non_convergence_is_flagged_not_hidden() {
        // A jump inside a panel defeats the double exponential decay of the error.
        let r = reference_integral(ex(0.0, 0.0), |x| if x.t > 0.3 { 1.0 } else { 0.0 }, 4).unwrap();
        assert!(!r.converged);
        assert!(r.estimated_accuracy > 1e-6);
    }
}
