//! Acceptance suite. Prints one `PASS`/`FAIL` line per criterion and exits
//! non-zero if any criterion fails.

use std::f64::consts::PI;
use std::process::Command;

use jacobi_lobatto::analysis::{
    convergence_study, fit_exponent, spacing_ratio_sweep, uniform_bound_check, ConvergenceStatus,
    ENDPOINT_RATIO_BOUND, INTERIOR_SPREAD_BOUND,
};
use jacobi_lobatto::cli::verify::{random_exactness_error, sharpness_deviation};
use jacobi_lobatto::gauss::nevai_identity_residual;
use jacobi_lobatto::integrand::{IntegrandSpec, ORACLE_LEVELS};
use jacobi_lobatto::oracle::{
    closed_form_reference, reference_integral, reference_integral_split, ClosedForm,
};
use jacobi_lobatto::{lobatto_rule, JacobiExponents};

const GRID_VALUES: [f64; 5] = [-0.9, -0.5, 0.0, 0.5, 2.5];
const N_SWEEP: [usize; 7] = [1, 2, 4, 8, 16, 32, 64];
const SEED: u64 = 0;

fn grid() -> impl Iterator<Item = JacobiExponents> {
    GRID_VALUES.into_iter().flat_map(|a| {
        GRID_VALUES
            .into_iter()
            .map(move |b| JacobiExponents::new(a, b).unwrap())
    })
}

fn doubling(lo: usize, hi: usize) -> Vec<usize> {
    std::iter::successors(Some(lo), |n| Some(n * 2))
        .take_while(|&n| n <= hi)
        .collect()
}

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn exactness() -> Outcome {
    let mut worst: f64 = 0.0;
    for e in grid() {
        for n in N_SWEEP {
            let rule = lobatto_rule(e, n).unwrap();
            worst = worst.max(random_exactness_error(rule.rule(), 20, SEED).unwrap());
        }
    }
    outcome(
        worst <= 1e-10,
        format!("max relative error {worst:.3e} (tol 1e-10)"),
    )
}

fn sharpness() -> Outcome {
    let mut worst: f64 = 0.0;
    for e in grid() {
        for n in N_SWEEP {
            worst = worst.max(sharpness_deviation(e, n).unwrap());
        }
    }
    outcome(
        worst <= 1e-8,
        format!("max |e_n - 1| {worst:.3e} (tol 1e-8)"),
    )
}

fn weight_sum() -> Outcome {
    let mut worst: f64 = 0.0;
    for e in grid() {
        let mu0 = e.zeroth_moment();
        for n in N_SWEEP {
            let s: f64 = lobatto_rule(e, n).unwrap().weights().iter().sum();
            worst = worst.max(((s - mu0) / mu0).abs());
        }
    }
    outcome(
        worst <= 1e-12,
        format!("max relative deviation {worst:.3e} (tol 1e-12)"),
    )
}

fn closed_form_rules() -> Outcome {
    let leg = lobatto_rule(JacobiExponents::LEGENDRE, 1).unwrap();
    let mut leg_err: f64 = 0.0;
    for (w, x) in leg.weights().iter().zip([1.0 / 3.0, 4.0 / 3.0, 1.0 / 3.0]) {
        leg_err = leg_err.max((w - x).abs());
    }
    for (t, x) in leg.nodes().iter().zip([-1.0, 0.0, 1.0]) {
        leg_err = leg_err.max((t - x).abs());
    }
    let mut cheb_err: f64 = 0.0;
    for n in [4, 16, 64] {
        let r = lobatto_rule(JacobiExponents::CHEBYSHEV, n).unwrap();
        let h = PI / (n + 1) as f64;
        for k in 0..n + 2 {
            // ascending order: t_k = -cos(k h)
            let node = -(k as f64 * h).cos();
            let weight = if k == 0 || k == n + 1 { h / 2.0 } else { h };
            cheb_err = cheb_err
                .max((r.nodes()[k] - node).abs())
                .max((r.weights()[k] - weight).abs());
        }
    }
    outcome(
        leg_err <= 1e-14 && cheb_err <= 1e-12,
        format!("legendre n=1 {leg_err:.3e} (tol 1e-14), chebyshev {cheb_err:.3e} (tol 1e-12)"),
    )
}

fn nevai() -> Outcome {
    let mut worst: f64 = 0.0;
    for e in grid() {
        for m in doubling(2, 256) {
            worst = worst.max(nevai_identity_residual(e, m).unwrap());
        }
    }
    outcome(
        worst <= 1e-9,
        format!("max relative residual {worst:.3e} (tol 1e-9)"),
    )
}

fn ratios() -> Outcome {
    let ns = doubling(8, 512);
    let mut spread: f64 = 0.0;
    let mut endpoint: f64 = 0.0;
    for e in grid() {
        let s = spacing_ratio_sweep(e, &ns).unwrap();
        spread = spread.max(s.interior_spread());
        endpoint = endpoint.max(s.left_end_max).max(s.right_end_max);
    }
    outcome(
        spread <= INTERIOR_SPREAD_BOUND && endpoint <= ENDPOINT_RATIO_BOUND,
        format!(
            "interior max/min {spread:.4} (bound {INTERIOR_SPREAD_BOUND}), endpoint max {endpoint:.4} (bound {ENDPOINT_RATIO_BOUND})"
        ),
    )
}

fn decay_rates() -> Outcome {
    let e = JacobiExponents::LEGENDRE;
    let ns = doubling(8, 512);
    let cases = [
        (IntegrandSpec::AbsPow { s: 0.5 }, 1, 1.5, 1.35),
        (IntegrandSpec::EndpointPow { sigma: 0.6 }, 3, 3.2, 3.05),
    ];
    let mut passed = true;
    let mut parts = Vec::new();
    for (spec, r, q, floor) in cases {
        let rep = convergence_study(e, &spec, &ns, r, q).unwrap();
        let fitted = rep.fitted_exponent.unwrap_or(f64::NAN);
        let ok =
            rep.status == ConvergenceStatus::Fitted && rep.bound_non_inflating() && fitted >= floor;
        passed &= ok;
        parts.push(format!(
            "{} fitted {fitted:.4} (floor {floor}) non-inflating {}",
            rep.integrand_id,
            rep.bound_non_inflating()
        ));
    }
    outcome(passed, parts.join("; "))
}

fn uniform_bound() -> Outcome {
    let e = JacobiExponents::LEGENDRE;
    let mut passed = true;
    let mut worst_margin = f64::INFINITY;
    let fs: [fn(f64) -> f64; 2] = [f64::exp, |t| 1.0 / (1.0 + 25.0 * t * t)];
    for f in fs {
        for n in [4, 8, 16, 32] {
            let c = uniform_bound_check(e, f, n).unwrap();
            passed &= c.holds;
            worst_margin = worst_margin.min(c.rhs + c.noise_floor - c.lhs);
        }
    }
    outcome(
        passed,
        format!("smallest rhs + noise - lhs {worst_margin:.3e}"),
    )
}

fn oracle_integrity() -> Outcome {
    let mut worst: f64 = 0.0;
    for e in grid() {
        for sigma in [0.5, 0.6, 1.5] {
            let exact = closed_form_reference(ClosedForm::EndpointPow {
                sigma,
                exponents: e,
            })
            .unwrap();
            let tanh = reference_integral(e, |x| x.one_plus.powf(sigma), ORACLE_LEVELS).unwrap();
            worst = worst.max((exact.value - tanh.value).abs() / exact.value.abs().max(1.0));
        }
        for k in 0..4 {
            let exact = closed_form_reference(ClosedForm::Monomial { k, exponents: e }).unwrap();
            let tanh = reference_integral(e, |x| x.t.powi(k as i32), ORACLE_LEVELS).unwrap();
            worst = worst.max((exact.value - tanh.value).abs() / exact.value.abs().max(1.0));
        }
        if e.alpha() == e.beta() {
            for s in [0.5, 1.5] {
                let exact =
                    closed_form_reference(ClosedForm::AbsPowSymmetric { s, exponents: e }).unwrap();
                let tanh =
                    reference_integral_split(e, |x| x.t.abs().powf(s), ORACLE_LEVELS, &[0.0])
                        .unwrap();
                worst = worst.max((exact.value - tanh.value).abs() / exact.value.abs().max(1.0));
            }
        }
    }
    let ns = [8usize, 16, 32, 64, 128, 256];
    let pure: Vec<f64> = ns.iter().map(|&n| 3.0 * (n as f64).powi(-2)).collect();
    let wiggle: Vec<f64> = ns
        .iter()
        .enumerate()
        .map(|(i, &n)| {
            3.0 * (n as f64).powi(-2) * (1.0 + 0.1 * if i % 2 == 0 { 1.0 } else { -1.0 })
        })
        .collect();
    let flat = vec![1e-3; ns.len()];
    let q_pure = fit_exponent(&ns, &pure).unwrap();
    let q_wiggle = fit_exponent(&ns, &wiggle).unwrap();
    let q_flat = fit_exponent(&ns, &flat).unwrap();
    let fit_ok =
        (q_pure - 2.0).abs() <= 1e-10 && (q_wiggle - 2.0).abs() <= 0.1 && q_flat.abs() <= 1e-12;
    outcome(
        worst <= 1e-12 && fit_ok,
        format!("tanh-sinh vs closed form {worst:.3e} (tol 1e-12); fits {q_pure:.12} {q_wiggle:.4} {:.1e}", q_flat.abs()),
    )
}

fn run_cli(args: &[&str]) -> (Option<i32>, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_jlq"))
        .args(args)
        .output()
        .expect("run jlq");
    (out.status.code(), out.stdout)
}

fn determinism() -> Outcome {
    let invocations: [&[&str]; 3] = [
        &[
            "verify", "--alpha", "2.5", "--beta", "-0.9", "--n-max", "64", "--seed", "7",
        ],
        &[
            "converge",
            "--alpha",
            "0",
            "--beta",
            "0",
            "--integrand",
            "poly",
            "--param",
            "degree=2n+1",
            "--r",
            "1",
            "--q-pred",
            "1",
            "--seed",
            "7",
        ],
        &[
            "converge",
            "--alpha",
            "0",
            "--beta",
            "0",
            "--integrand",
            "abs_pow",
            "--param",
            "s=0.5",
            "--r",
            "1",
            "--q-pred",
            "1.5",
            "--format",
            "json",
        ],
    ];
    let mut passed = true;
    for args in invocations {
        let a = run_cli(args);
        let b = run_cli(args);
        passed &= a == b && a.0 == Some(0) && !a.1.is_empty();
    }
    outcome(
        passed,
        format!(
            "{} invocations run twice, byte-identical and exit 0",
            invocations.len()
        ),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 10] = [
        ("1 exactness degree 2n+1", exactness),
        ("2 sharpness identity", sharpness),
        ("3 weight sum", weight_sum),
        ("4 closed-form rules", closed_form_rules),
        ("5 nevai identity", nevai),
        ("6 weight/spacing ratios", ratios),
        ("7 error decay upper bound", decay_rates),
        ("8 uniform-norm estimate", uniform_bound),
        ("9 oracle integrity", oracle_integrity),
        ("10 determinism", determinism),
    ];
    let results: Vec<(&str, Outcome)> = std::thread::scope(|s| {
        let handles: Vec<_> = criteria
            .iter()
            .map(|&(name, f)| (name, s.spawn(f)))
            .collect();
        handles
            .into_iter()
            .map(|(name, h)| {
                let o = h
                    .join()
                    .unwrap_or_else(|_| outcome(false, "panicked".into()));
                (name, o)
            })
            .collect()
    });
    let mut failed = 0;
    for (name, o) in &results {
        println!(
            "{} criterion {name}: {}",
            if o.passed { "PASS" } else { "FAIL" },
            o.detail
        );
        failed += usize::from(!o.passed);
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        results.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
