use approx::assert_relative_eq;
use jacobi_lobatto::jacobi::recurrence;
use jacobi_lobatto::{gauss_rule, lobatto_rule, JacobiExponents};
use proptest::prelude::*;

fn exponents() -> impl Strategy<Value = JacobiExponents> {
    (-0.95f64..4.0, -0.95f64..4.0).prop_map(|(a, b)| JacobiExponents::new(a, b).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lobatto_weights_positive_and_sum_to_mass(e in exponents(), n in 1usize..80) {
        let r = lobatto_rule(e, n).unwrap();
        prop_assert_eq!(r.len(), n + 2);
        prop_assert!(r.weights().iter().all(|&w| w > 0.0));
        prop_assert!(r.nodes().windows(2).all(|p| p[0] < p[1]));
        let s: f64 = r.weights().iter().sum();
        assert_relative_eq!(s, e.zeroth_moment(), max_relative = 1e-12);
    }

    #[test]
    fn gauss_nodes_interlace(e in exponents(), m in 1usize..60) {
        let a = gauss_rule(e, m).unwrap();
        let b = gauss_rule(e, m + 1).unwrap();
        for k in 0..m {
            prop_assert!(b.nodes()[k] < a.nodes()[k] && a.nodes()[k] < b.nodes()[k + 1]);
        }
    }

    #[test]
    fn lobatto_interior_interlaces_gauss(e in exponents(), n in 2usize..40) {
        // interior nodes are zeros of the (alpha+1, beta+1) family; Gauss nodes of (alpha, beta)
        // with n+1 points separate them
        let lob = lobatto_rule(e, n).unwrap();
        let g = gauss_rule(e, n + 1).unwrap();
        for k in 0..n {
            prop_assert!(g.nodes()[k] < lob.nodes()[k + 1] && lob.nodes()[k + 1] < g.nodes()[k + 1]);
        }
    }

    #[test]
    fn monomials_up_to_exactness_degree(e in exponents(), n in 1usize..12) {
        let r = lobatto_rule(e, n).unwrap();
        let d = r.exactness_degree();
        prop_assert_eq!(d, 2 * n + 1);
        let moments = e.monomial_moments(d);
        for (k, m) in moments.iter().enumerate() {
            let q = r.integrate(|t| t.powi(k as i32)).unwrap();
            prop_assert!((q - m).abs() <= 1e-12 * e.zeroth_moment());
        }
    }

    #[test]
    fn orthonormality_under_gauss(e in exponents(), i in 0usize..10, j in 0usize..10) {
        let rec = recurrence(e, 10).unwrap();
        let g = gauss_rule(e, 11).unwrap();
        let v = g
            .integrate(|t| rec.eval_orthonormal(i, t).unwrap().0 * rec.eval_orthonormal(j, t).unwrap().0)
            .unwrap();
        let expect = if i == j { 1.0 } else { 0.0 };
        prop_assert!((v - expect).abs() < 1e-11, "{} vs {}", v, expect);
    }

    #[test]
    fn derivative_matches_difference(e in exponents(), n in 1usize..20, t in -0.9f64..0.9) {
        let rec = recurrence(e, n).unwrap();
        let h = 1e-6;
        let (_, dp) = rec.eval_orthonormal(n, t).unwrap();
        let fd = (rec.eval_orthonormal(n, t + h).unwrap().0 - rec.eval_orthonormal(n, t - h).unwrap().0) / (2.0 * h);
        prop_assert!((dp - fd).abs() <= 1e-5 * (1.0 + dp.abs()));
    }

    #[test]
    fn reflection_mirrors_rule(e in exponents(), n in 1usize..30) {
        let r = lobatto_rule(e, n).unwrap();
        let m = lobatto_rule(e.reflected(), n).unwrap();
        let len = r.len();
        for k in 0..len {
            prop_assert!((r.nodes()[k] + m.nodes()[len - 1 - k]).abs() < 1e-13);
            assert_relative_eq!(r.weights()[k], m.weights()[len - 1 - k], max_relative = 1e-12);
        }
    }
}
