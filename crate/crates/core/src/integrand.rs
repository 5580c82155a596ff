//! Closed registry of test integrands, each paired with a trustworthy
//! reference value.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::jacobi::JacobiExponents;
use crate::lobatto::SharpnessIntegrand;
use crate::oracle::{
    closed_form_reference, reference_integral, reference_integral_split, Abscissa, ClosedForm,
    ReferenceValue,
};
use crate::{Error, Result};

/// Refinement levels used for tanh-sinh references.
pub const ORACLE_LEVELS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolyDegree {
    Fixed(usize),
    /// `2n + 1` for the rule with `n` interior nodes.
    TopExact,
}

#[derive(Debug, Clone, PartialEq)]
pub enum IntegrandSpec {
    /// Explicit monomial coefficients `c_0, c_1, ...`.
    Poly {
        coeffs: Vec<f64>,
    },
    /// Seeded random coefficients in `[-1, 1]`.
    RandomPoly {
        degree: PolyDegree,
        seed: u64,
    },
    /// `|t|^s`, `s > 0`.
    AbsPow {
        s: f64,
    },
    /// `(1 + t)^sigma`, `sigma > 0`.
    EndpointPow {
        sigma: f64,
    },
    /// `1 / (1 + c t^2)`.
    Runge {
        c: f64,
    },
    ExpT,
    /// `(1 - t^2) p_n^{alpha+1,beta+1}(t)^2`.
    Sharpness,
}

pub const NAMES: &[&str] = &[
    "poly",
    "abs_pow",
    "endpoint_pow",
    "runge",
    "exp_t",
    "sharpness",
];

fn param<'a>(params: &'a [(String, String)], key: &str) -> Option<&'a str> {
    params
        .iter()
        .rev()
        .find(|(k, _)| k == key)
        .map(|(_, v)| v.as_str())
}

fn parse_f64(key: &str, v: &str) -> Result<f64> {
    v.trim()
        .parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| {
            Error::InvalidArgument(format!("parameter {key}={v} is not a finite number"))
        })
}

impl IntegrandSpec {
    /// Builds a spec from a registry name and `key=value` parameters.
    ///
    /// `poly` takes either `coeffs=c0;c1;...` or `degree=<d|2n+1>`
    /// (random coefficients drawn from `seed`).
    pub fn parse(name: &str, params: &[(String, String)], seed: u64) -> Result<Self> {
        let allowed: &[&str] = match name {
            "poly" => &["coeffs", "degree"],
            "abs_pow" => &["s"],
            "endpoint_pow" => &["sigma"],
            "runge" => &["c"],
            "exp_t" | "sharpness" => &[],
            other => {
                return Err(Error::InvalidArgument(format!(
                    "unknown integrand '{other}' (expected one of {})",
                    NAMES.join(", ")
                )))
            }
        };
        if let Some((k, _)) = params.iter().find(|(k, _)| !allowed.contains(&k.as_str())) {
            return Err(Error::InvalidArgument(format!(
                "integrand {name} has no parameter '{k}'"
            )));
        }
        let spec = match name {
            "poly" => match (param(params, "coeffs"), param(params, "degree")) {
                (Some(c), None) => {
                    let coeffs = c
                        .split([';', ':'])
                        .map(|v| parse_f64("coeffs", v))
                        .collect::<Result<Vec<_>>>()?;
                    IntegrandSpec::Poly { coeffs }
                }
                (None, Some(d)) => {
                    let degree = if d.trim() == "2n+1" {
                        PolyDegree::TopExact
                    } else {
                        PolyDegree::Fixed(d.trim().parse().map_err(|_| {
                            Error::InvalidArgument(format!(
                                "parameter degree={d} is not an integer or 2n+1"
                            ))
                        })?)
                    };
                    IntegrandSpec::RandomPoly { degree, seed }
                }
                (None, None) => IntegrandSpec::RandomPoly {
                    degree: PolyDegree::TopExact,
                    seed,
                },
                (Some(_), Some(_)) => {
                    return Err(Error::InvalidArgument(
                        "poly takes coeffs or degree, not both".into(),
                    ))
                }
            },
            "abs_pow" => {
                let s = param(params, "s")
                    .map(|v| parse_f64("s", v))
                    .transpose()?
                    .unwrap_or(0.5);
                if !(s > 0.0) {
                    return Err(Error::InvalidArgument(format!(
                        "abs_pow needs s > 0, got {s}"
                    )));
                }
                IntegrandSpec::AbsPow { s }
            }
            "endpoint_pow" => {
                let sigma = param(params, "sigma")
                    .map(|v| parse_f64("sigma", v))
                    .transpose()?
                    .unwrap_or(0.6);
                if !(sigma > 0.0) {
                    return Err(Error::InvalidArgument(format!(
                        "endpoint_pow needs sigma > 0, got {sigma}"
                    )));
                }
                IntegrandSpec::EndpointPow { sigma }
            }
            "runge" => {
                let c = param(params, "c")
                    .map(|v| parse_f64("c", v))
                    .transpose()?
                    .unwrap_or(25.0);
                if !(c >= 0.0) {
                    return Err(Error::InvalidArgument(format!(
                        "runge needs c >= 0, got {c}"
                    )));
                }
                IntegrandSpec::Runge { c }
            }
            "exp_t" => IntegrandSpec::ExpT,
            _ => IntegrandSpec::Sharpness,
        };
        Ok(spec)
    }

    /// Stable identifier with parameters, e.g. `abs_pow(s=0.5)`.
    pub fn id(&self) -> String {
        match self {
            IntegrandSpec::Poly { coeffs } => {
                format!("poly(degree={})", coeffs.len().saturating_sub(1))
            }
            IntegrandSpec::RandomPoly {
                degree: PolyDegree::Fixed(d),
                seed,
            } => {
                format!("poly(degree={d},seed={seed})")
            }
            IntegrandSpec::RandomPoly {
                degree: PolyDegree::TopExact,
                seed,
            } => {
                format!("poly(degree=2n+1,seed={seed})")
            }
            IntegrandSpec::AbsPow { s } => format!("abs_pow(s={s})"),
            IntegrandSpec::EndpointPow { sigma } => format!("endpoint_pow(sigma={sigma})"),
            IntegrandSpec::Runge { c } => format!("runge(c={c})"),
            IntegrandSpec::ExpT => "exp_t".into(),
            IntegrandSpec::Sharpness => "sharpness".into(),
        }
    }

    pub fn is_polynomial(&self) -> bool {
        matches!(
            self,
            IntegrandSpec::Poly { .. } | IntegrandSpec::RandomPoly { .. }
        )
    }

    /// The concrete function for exponents `e` and interior count `n`.
    pub fn instantiate(&self, e: JacobiExponents, n: usize) -> Result<Integrand> {
        Ok(match self {
            IntegrandSpec::Poly { coeffs } => Integrand::Poly(coeffs.clone()),
            IntegrandSpec::RandomPoly { degree, seed } => {
                let d = match degree {
                    PolyDegree::Fixed(d) => *d,
                    PolyDegree::TopExact => 2 * n + 1,
                };
                Integrand::Poly(random_coefficients(d, seed.wrapping_add(n as u64)))
            }
            IntegrandSpec::AbsPow { s } => Integrand::AbsPow(*s),
            IntegrandSpec::EndpointPow { sigma } => Integrand::EndpointPow(*sigma),
            IntegrandSpec::Runge { c } => Integrand::Runge(*c),
            IntegrandSpec::ExpT => Integrand::ExpT,
            IntegrandSpec::Sharpness => {
                Integrand::Sharpness(Box::new(SharpnessIntegrand::new(e, n)?))
            }
        })
    }
}

/// `degree + 1` coefficients uniform in `[-1, 1]` from a ChaCha8 stream.
pub fn random_coefficients(degree: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..=degree).map(|_| rng.random_range(-1.0..=1.0)).collect()
}

/// Horner evaluation of `sum c_k t^k`.
pub fn horner(coeffs: &[f64], t: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * t + c)
}

#[derive(Debug, Clone)]
pub enum Integrand {
    Poly(Vec<f64>),
    AbsPow(f64),
    EndpointPow(f64),
    Runge(f64),
    ExpT,
    Sharpness(Box<SharpnessIntegrand>),
}

impl Integrand {
    pub fn eval(&self, x: Abscissa) -> f64 {
        match self {
            Integrand::Poly(c) => horner(c, x.t),
            Integrand::AbsPow(s) => x.t.abs().powf(*s),
            Integrand::EndpointPow(sigma) => x.one_plus.powf(*sigma),
            Integrand::Runge(c) => 1.0 / (1.0 + c * x.t * x.t),
            Integrand::ExpT => x.t.exp(),
            Integrand::Sharpness(s) => s.eval_gaps(x.t, x.one_minus, x.one_plus),
        }
    }

    pub fn eval_t(&self, t: f64) -> f64 {
        self.eval(Abscissa::new(t))
    }

    /// Exact or oracle value of `int f w`.
    pub fn reference(&self, e: JacobiExponents) -> Result<ReferenceValue> {
        match self {
            Integrand::Poly(c) => {
                let m = e.monomial_moments(c.len().saturating_sub(1));
                let v = crate::ddouble::dot(c, &m);
                let scale: f64 = c.iter().zip(&m).map(|(a, b)| (a * b).abs()).sum();
                let acc = 4.0 * (c.len() as f64 + 2.0) * f64::EPSILON * scale;
                Ok(ReferenceValue::exact(v, acc))
            }
            Integrand::AbsPow(s) if e.alpha() == e.beta() => {
                closed_form_reference(ClosedForm::AbsPowSymmetric {
                    s: *s,
                    exponents: e,
                })
            }
            Integrand::AbsPow(_) => {
                reference_integral_split(e, |x| self.eval(x), ORACLE_LEVELS, &[0.0])
            }
            Integrand::EndpointPow(sigma) => closed_form_reference(ClosedForm::EndpointPow {
                sigma: *sigma,
                exponents: e,
            }),
            Integrand::Sharpness(_) => Ok(ReferenceValue::exact(1.0, 0.0)),
            Integrand::Runge(_) | Integrand::ExpT => {
                reference_integral(e, |x| self.eval(x), ORACLE_LEVELS)
            }
        }
    }
}
