use approx::assert_relative_eq;
use nevbound::regvar::{
    generalized_inverse, geometric_samples, head_integral, index_estimate, nonincreasing_smoothening, tail_integral,
};
use nevbound::{ComparisonFunction, Monotonicity, PowerLog};

#[test]
fn powerlog_values_and_algebra() {
    assert_relative_eq!(PowerLog::new(1.0, 2.0, 0.0).unwrap().eval(3.0), 9.0, max_relative = 1e-15);
    assert_relative_eq!(PowerLog::new(1.0, 0.0, 1.0).unwrap().eval(std::f64::consts::E), 1.0, max_relative = 1e-15);
    let e2 = std::f64::consts::E.powi(2);
    assert_relative_eq!(PowerLog::new(2.0, -3.0, 1.0).unwrap().eval(e2), 4.0 * (-6f64).exp(), max_relative = 1e-13);
    let a = PowerLog::power(-2.0).mul(&PowerLog::power(-1.0));
    assert_eq!(a.index(), -3.0);
    let sq = PowerLog::power(2.0).powf(0.5);
    assert_relative_eq!(sq.eval(7.0), 7.0, max_relative = 1e-14);
    // d_φ/d_l with d_l = t^-2 (log t)^-1, d_φ = t^-1 (log t)^-3
    let r = PowerLog::new(1.0, -1.0, -3.0).unwrap().div(&PowerLog::new(1.0, -2.0, -1.0).unwrap());
    let t = 1e5f64;
    assert_relative_eq!(r.eval(t), t * t.ln().powi(-2), max_relative = 1e-12);
}

#[test]
fn asymptotic_inverses() {
    let sq = PowerLog::power(2.0).asymptotic_inverse().unwrap();
    assert_relative_eq!(sq.eval(1e8), 1e4, max_relative = 1e-12);
    let f = PowerLog::new(1.0, 2.0, 1.0).unwrap();
    let g = f.asymptotic_inverse().unwrap().leading_form();
    let x = 1e10f64;
    assert_relative_eq!(g.eval(x), (2.0 * x / x.ln()).sqrt(), max_relative = 1e-12);
    let cube = PowerLog::power(3.0);
    assert_relative_eq!(cube.eval(cube.asymptotic_inverse().unwrap().eval(1e6)), 1e6, max_relative = 1e-12);
}

#[test]
fn karamata_examples() {
    let sq = ComparisonFunction::power(2.0);
    let x = 1e3;
    let exact = (x * x * x - 1.0) / 3.0;
    assert_relative_eq!(head_integral(&sq, x), exact, max_relative = 1e-9);
    assert!((x * sq.eval(x) / head_integral(&sq, x) / 3.0 - 1.0).abs() < 0.01);
    let f = ComparisonFunction::power(-1.5);
    for t in [10.0, 1e4, 1e7] {
        assert_relative_eq!(tail_integral(&f, t).unwrap(), 2.0 / t.sqrt(), max_relative = 1e-8);
    }
    // t^-1 (log t)^-2: tail is (log t)^-1
    let g = ComparisonFunction::powerlog(PowerLog::new(1.0, -1.0, -2.0).unwrap());
    for t in [1e2, 1e6] {
        assert_relative_eq!(tail_integral(&g, t).unwrap(), 1.0 / t.ln(), max_relative = 1e-6);
    }
}

#[test]
fn generalized_inverse_conventions() {
    let cube = ComparisonFunction::power(3.0);
    assert_relative_eq!(generalized_inverse(&cube, 2000.0 / 2.0), 10.0, max_relative = 1e-12);
    assert!(generalized_inverse(&ComparisonFunction::constant(1.0), 5.0).is_infinite());
    assert_eq!(generalized_inverse(&ComparisonFunction::constant(10.0), 5.0), 1.0);
}

#[test]
fn smoothening_envelope() {
    let wobbly = ComparisonFunction::from_fn(
        |t| (1.0 + 0.1 * (3.0 * t.ln()).sin()) / t,
        "t^-1 (1 + 0.1 sin)",
        Some(-1.0),
        Monotonicity::None,
    );
    let s = nonincreasing_smoothening(&wobbly).unwrap();
    let mut prev = f64::INFINITY;
    for (t, v) in geometric_samples(&s, 1.0, 1e8, 20) {
        assert!(v <= prev * (1.0 + 1e-12));
        let ratio = v / wobbly.eval(t);
        assert!((0.9 / 1.1..=1.1 / 0.9).contains(&ratio), "t = {t}: {ratio}");
        prev = v;
    }
}

#[test]
fn index_estimates() {
    let s = geometric_samples(&ComparisonFunction::power(-3.0), 1e2, 1e8, 8);
    assert!((index_estimate(&s).unwrap() + 3.0).abs() < 1e-9);
    let s = geometric_samples(&ComparisonFunction::powerlog(PowerLog::new(1.0, 2.0, 1.0).unwrap()), 1e3, 1e9, 8);
    assert!((2.0..=2.12).contains(&index_estimate(&s).unwrap()));
    let s = geometric_samples(&ComparisonFunction::constant(4.0), 1e2, 1e8, 8);
    assert!(index_estimate(&s).unwrap().abs() < 1e-12);
}
