use probit_core::{
    corollary_identity_check, generating_function_check, moment,
    negative_derivative_relation_check, p_negative_eval, s_antiderivative, Error,
};

#[test]
fn moments_through_twelve() {
    let mut double_factorial = 1.0;
    for n in 0..=12 {
        let m = moment(n).unwrap();
        assert_eq!(m.n, n);
        if n % 2 == 1 {
            assert_eq!(m.closed_form, 0.0);
            assert_eq!(m.paper_formula, 0.0);
            assert!(m.quadrature.abs() <= 1e-12, "n = {n}");
        } else {
            if n >= 2 {
                double_factorial *= (n - 1) as f64;
            }
            assert_eq!(m.closed_form, double_factorial);
            assert!(
                (m.quadrature - m.closed_form).abs() <= 1e-9 * m.closed_form,
                "n = {n}"
            );
            if n >= 2 {
                assert_eq!(m.paper_formula, double_factorial * (n + 1) as f64);
            }
        }
    }
    assert!(moment(21).is_err());
}

#[test]
fn generating_function_converges_monotonically() {
    for x in [-1.0, 0.0, 1.0] {
        for t in [-0.2, -0.1, 0.1, 0.2] {
            let mut prev = f64::INFINITY;
            for k in [5, 10, 15, 20] {
                let (partial, reference) = generating_function_check(x, t, k).unwrap();
                let err = (partial - reference).abs();
                assert!(err <= prev, "x = {x}, t = {t}, k = {k}");
                prev = err;
            }
            assert!(prev <= 1e-10);
        }
    }
    assert!(generating_function_check(0.0, 0.9, 5).is_err());
}

#[test]
fn antiderivatives_and_identities() {
    assert_eq!(
        s_antiderivative(1, 0.5).unwrap(),
        -probit_core::FRAC_1_SQRT_2PI
    );
    assert!((s_antiderivative(2, 0.5).unwrap() + 0.25 / probit_core::SQRT_PI).abs() < 1e-16);
    assert!(matches!(
        s_antiderivative(3, 0.5),
        Err(Error::Domain { .. })
    ));
    assert_eq!(p_negative_eval(-1, 2.5).unwrap(), 2.5);
    assert_eq!(p_negative_eval(-2, 2.5).unwrap(), -1.0);
    assert!(p_negative_eval(-3, 30.0).is_err());
    for i in 1..=17 {
        let x = i as f64 / 18.0;
        assert!(corollary_identity_check(x).unwrap() <= 1e-9);
        for n in [0, -1, -2] {
            assert!(negative_derivative_relation_check(n, x).unwrap() <= 1e-12);
        }
    }
}
