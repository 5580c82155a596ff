//! Jacobi weights, recurrence coefficients and orthonormal polynomials.

use serde::Serialize;

use crate::ddouble::DoubleDouble;
use crate::special::scaled_beta;
use crate::{Error, Result};

/// The exponent pair `(alpha, beta)` of `w(t) = (1 - t)^alpha (1 + t)^beta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JacobiExponents {
    alpha: f64,
    beta: f64,
}

impl JacobiExponents {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if alpha.is_finite() && beta.is_finite() && alpha > -1.0 && beta > -1.0 {
            Ok(Self { alpha, beta })
        } else {
            Err(Error::InvalidExponents { alpha, beta })
        }
    }

    pub const LEGENDRE: Self = Self {
        alpha: 0.0,
        beta: 0.0,
    };
    pub const CHEBYSHEV: Self = Self {
        alpha: -0.5,
        beta: -0.5,
    };

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Exponents `(alpha + da, beta + db)`.
    pub fn shifted(&self, da: f64, db: f64) -> Result<Self> {
        Self::new(self.alpha + da, self.beta + db)
    }

    /// Swaps the roles of the two endpoints (`t -> -t`).
    pub fn reflected(&self) -> Self {
        Self {
            alpha: self.beta,
            beta: self.alpha,
        }
    }

    /// `w(t)` for `t` in the open interval.
    ///
    /// Strongly negative exponents very close to an endpoint may overflow to
    /// `+inf`; that is reported as a value, not an error.
    pub fn weight(&self, t: f64) -> Result<f64> {
        if !(t > -1.0 && t < 1.0) {
            return Err(Error::OutsideDomain(t));
        }
        Ok(self.weight_from_gaps(1.0 - t, 1.0 + t))
    }

    /// `w` evaluated from precomputed `1 - t` and `1 + t`.
    pub fn weight_from_gaps(&self, one_minus: f64, one_plus: f64) -> f64 {
        pow_or_one(one_minus, self.alpha) * pow_or_one(one_plus, self.beta)
    }

    /// `mu_0 = 2^(alpha+beta+1) B(alpha+1, beta+1)`.
    pub fn zeroth_moment(&self) -> f64 {
        scaled_beta(
            self.alpha + self.beta + 1.0,
            self.alpha + 1.0,
            self.beta + 1.0,
        )
    }

    /// `int t^k w(t) dt`.
    pub fn monomial_moment(&self, k: usize) -> f64 {
        self.monomial_moments(k)[k]
    }

    /// Moments `m_0..=m_kmax`.
    ///
    /// Integration by parts of `d/dt [t^k (1 - t^2) w(t)]` gives
    /// `(k + alpha + beta + 2) m_{k+1} = k m_{k-1} + (beta - alpha) m_k`,
    /// whose two homogeneous solutions have comparable size, so forward
    /// evaluation is stable.
    pub fn monomial_moments(&self, kmax: usize) -> Vec<f64> {
        let (a, b) = (self.alpha, self.beta);
        let mut m = Vec::with_capacity(kmax + 1);
        m.push(self.zeroth_moment());
        for k in 0..kmax {
            let prev = if k == 0 { 0.0 } else { m[k - 1] };
            let next = (k as f64 * prev + (b - a) * m[k]) / (k as f64 + a + b + 2.0);
            m.push(next);
        }
        m
    }
}

fn pow_or_one(x: f64, p: f64) -> f64 {
    if p == 0.0 {
        1.0
    } else {
        x.powf(p)
    }
}

/// Monic three-term recurrence `pi_{k+1} = (t - a_k) pi_k - b_k pi_{k-1}` for
/// a Jacobi family, with `b_0 = mu_0`.
///
/// Coefficients are stored for `k = 0..=degree_cap`, so orthonormal
/// polynomials up to degree `degree_cap` can be evaluated and Gauss rules of
/// up to `degree_cap` points built.
#[derive(Debug, Clone, PartialEq)]
pub struct RecurrenceData {
    exponents: JacobiExponents,
    degree_cap: usize,
    diag: Vec<f64>,
    offdiag_sq: Vec<f64>,
    offdiag: Vec<f64>,
}

/// Closed-form Jacobi recurrence coefficients up to `degree_cap`.
pub fn recurrence(e: JacobiExponents, degree_cap: usize) -> Result<RecurrenceData> {
    if degree_cap == 0 {
        return Err(Error::InvalidArgument(
            "degree cap must be at least 1".into(),
        ));
    }
    let (a, b) = (e.alpha, e.beta);
    let s = a + b;
    let mut diag = Vec::with_capacity(degree_cap + 1);
    let mut offdiag_sq = Vec::with_capacity(degree_cap + 1);
    for k in 0..=degree_cap {
        let kf = k as f64;
        let ak = if k == 0 {
            (b - a) / (s + 2.0)
        } else {
            (b - a) * (b + a) / ((2.0 * kf + s) * (2.0 * kf + s + 2.0))
        };
        let bk = match k {
            0 => e.zeroth_moment(),
            1 => 4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + s) * (2.0 + s) * (3.0 + s)),
            _ => {
                let d = 2.0 * kf + s;
                4.0 * kf * (kf + a) * (kf + b) * (kf + s) / (d * d * (d + 1.0) * (d - 1.0))
            }
        };
        diag.push(ak);
        offdiag_sq.push(bk);
    }
    let offdiag = offdiag_sq.iter().map(|v| v.sqrt()).collect();
    Ok(RecurrenceData {
        exponents: e,
        degree_cap,
        diag,
        offdiag_sq,
        offdiag,
    })
}

impl RecurrenceData {
    pub fn exponents(&self) -> JacobiExponents {
        self.exponents
    }

    pub fn degree_cap(&self) -> usize {
        self.degree_cap
    }

    /// `a_0..=a_cap`.
    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    /// `b_0..=b_cap`, with `b_0 = mu_0`.
    pub fn offdiag_sq(&self) -> &[f64] {
        &self.offdiag_sq
    }

    /// Square roots of [`Self::offdiag_sq`].
    pub fn offdiag(&self) -> &[f64] {
        &self.offdiag
    }

    /// `gamma_n / gamma_{n-1}` for the orthonormal family, `n >= 1`.
    pub fn leading_ratio(&self, n: usize) -> f64 {
        1.0 / self.offdiag[n]
    }

    /// Leading-coefficient ratios for `n = 1..=cap`; element `i` is `n = i + 1`.
    pub fn leading_ratios(&self) -> Vec<f64> {
        (1..=self.degree_cap)
            .map(|n| self.leading_ratio(n))
            .collect()
    }

    /// Leading coefficient `gamma_n` of `p_n`.
    pub fn leading_coefficient(&self, n: usize) -> f64 {
        self.offdiag[..=n].iter().map(|s| 1.0 / s).product()
    }

    fn check_degree(&self, n: usize) -> Result<()> {
        if n > self.degree_cap {
            Err(Error::DegreeExceedsCap {
                degree: n,
                cap: self.degree_cap,
            })
        } else {
            Ok(())
        }
    }

    /// Orthonormal `p_n(t)` and `p_n'(t)` by forward recurrence.
    pub fn eval_orthonormal(&self, n: usize, t: f64) -> Result<(f64, f64)> {
        self.check_degree(n)?;
        let (p, dp, _, _) = self.eval_pair(n, t);
        Ok((p, dp))
    }

    /// `(p_n, p_n', p_{n-1}, p_{n-1}')`; the lower pair is zero for `n = 0`.
    pub(crate) fn eval_pair(&self, n: usize, t: f64) -> (f64, f64, f64, f64) {
        let mut p_prev = 0.0;
        let mut dp_prev = 0.0;
        let mut p = 1.0 / self.offdiag[0];
        let mut dp = 0.0;
        for k in 0..n {
            let p_next = ((t - self.diag[k]) * p - self.offdiag[k] * p_prev) / self.offdiag[k + 1];
            let dp_next =
                (p + (t - self.diag[k]) * dp - self.offdiag[k] * dp_prev) / self.offdiag[k + 1];
            p_prev = p;
            dp_prev = dp;
            p = p_next;
            dp = dp_next;
        }
        let (lo, dlo) = if n == 0 {
            (0.0, 0.0)
        } else {
            (p_prev, dp_prev)
        };
        (p, dp, lo, dlo)
    }

    /// [`Self::eval_pair`] at a double-double abscissa, coefficients taken as exact.
    pub(crate) fn eval_pair_dd(
        &self,
        n: usize,
        t: DoubleDouble,
    ) -> (DoubleDouble, DoubleDouble, DoubleDouble) {
        let dd = DoubleDouble::from_f64;
        let mut p_prev = DoubleDouble::ZERO;
        let mut dp_prev = DoubleDouble::ZERO;
        let mut p = dd(1.0) / dd(self.offdiag[0]);
        let mut dp = DoubleDouble::ZERO;
        for k in 0..n {
            let shift = t.add_f64(-self.diag[k]);
            let inv = dd(self.offdiag[k + 1]);
            let p_next = (shift * p - p_prev.scale(self.offdiag[k])) / inv;
            let dp_next = (p + shift * dp - dp_prev.scale(self.offdiag[k])) / inv;
            p_prev = p;
            dp_prev = dp;
            p = p_next;
            dp = dp_next;
        }
        (p, dp, if n == 0 { DoubleDouble::ZERO } else { p_prev })
    }

    /// [`Self::christoffel_sum`] at a double-double abscissa.
    pub(crate) fn christoffel_sum_dd(&self, m: usize, t: DoubleDouble) -> DoubleDouble {
        let dd = DoubleDouble::from_f64;
        let mut p_prev = DoubleDouble::ZERO;
        let mut p = dd(1.0) / dd(self.offdiag[0]);
        let mut sum = p * p;
        for k in 0..m.saturating_sub(1) {
            let p_next = (t.add_f64(-self.diag[k]) * p - p_prev.scale(self.offdiag[k]))
                / dd(self.offdiag[k + 1]);
            p_prev = p;
            p = p_next;
            sum += p * p;
        }
        sum
    }

    /// `sum_{j<m} p_j(t)^2`, the reciprocal of the Christoffel function.
    pub fn christoffel_sum(&self, m: usize, t: f64) -> Result<f64> {
        if m == 0 {
            return Err(Error::InvalidArgument(
                "christoffel sum needs m >= 1".into(),
            ));
        }
        self.check_degree(m - 1)?;
        let mut p_prev = 0.0;
        let mut p = 1.0 / self.offdiag[0];
        let mut sum = p * p;
        for k in 0..m - 1 {
            let p_next = ((t - self.diag[k]) * p - self.offdiag[k] * p_prev) / self.offdiag[k + 1];
            p_prev = p;
            p = p_next;
            sum += p * p;
        }
        Ok(sum)
    }
}

/// `(p_n(1) / n^(alpha+1/2), |p_n(-1)| / n^(beta+1/2))` for each `n`.
///
/// Both sequences stay inside a fixed positive bracket as `n` grows.
pub fn endpoint_growth(e: JacobiExponents, n_values: &[usize]) -> Result<Vec<(usize, f64, f64)>> {
    let cap = n_values.iter().copied().max().unwrap_or(1).max(1);
    let rec = recurrence(e, cap)?;
    n_values
        .iter()
        .map(|&n| {
            if n == 0 {
                return Err(Error::InvalidArgument(
                    "endpoint growth needs n >= 1".into(),
                ));
            }
            let nf = n as f64;
            let (right, _) = rec.eval_orthonormal(n, 1.0)?;
            let (left, _) = rec.eval_orthonormal(n, -1.0)?;
            Ok((
                n,
                right / nf.powf(e.alpha + 0.5),
                left.abs() / nf.powf(e.beta + 0.5),
            ))
        })
        .collect()
}
