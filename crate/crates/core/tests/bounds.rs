use approx::assert_relative_eq;
use nevbound::bounds::{
    auto_psi, check_majorization, g_integral, h_of_r, k_of_r, lower_bound, solve_t, upper_bound_b,
    verify_bound_sandwich, write_reports_csv, write_reports_json, BoundMode, ComparisonData,
};
use nevbound::hamiltonian::family_example_b6;
use nevbound::monodromy::geometric_grid;
use nevbound::{ComparisonFunction, Error, HamburgerHamiltonian};

#[test]
fn inverse_thresholds() {
    // d_l d_φ = t^-3: 2/(R t^-3) ≤ 1 up to t = (R/2)^{1/3}
    let data = ComparisonData::power_law(1.0, 2.0, 1.0, 1.0, 1.0).unwrap();
    assert_relative_eq!(k_of_r(&data, 2000.0).unwrap(), 10.0, max_relative = 1e-9);
    // d_φ = 1, d_l = 1/t
    let flat = ComparisonData::power_law(1.0, 0.0, 1.0, 1.0, 1.0).unwrap();
    for r in [10.0, 1e3, 1e6] {
        assert_relative_eq!(h_of_r(&flat, r).unwrap(), r, max_relative = 1e-9);
    }
    assert!(h_of_r(&flat, 0.5).is_err());
    let sq = ComparisonFunction::power(-2.0);
    assert_relative_eq!(lower_bound(&sq, &sq, 1e4).unwrap(), 10.0, max_relative = 1e-9);
}

#[test]
fn crossing_balances_the_two_terms() {
    let data = ComparisonData::example_b6(3.0, 1.0).unwrap();
    for r in [1e3, 1e6] {
        let t = solve_t(&data, r, 1e-12).unwrap();
        let g = g_integral(&data, t, r).unwrap();
        let rc = r * (data.c_l.eval(t) * data.c_phi.eval(t)).sqrt();
        assert_relative_eq!(g, rc, max_relative = 1e-6);
        assert!(g_integral(&data, t / 2.0, r).unwrap() < g);
    }
}

#[test]
fn infimum_never_exceeds_crossing() {
    for data in [
        ComparisonData::example_b6(3.0, 1.0).unwrap(),
        ComparisonData::example_b6(2.0, 0.0).unwrap(),
        ComparisonData::power_law(1.5, 1.0, 0.5, 1.0, 1.0).unwrap(),
    ] {
        for r in geometric_grid(1e2, 1e8, 1) {
            let a = upper_bound_b(&data, r, BoundMode::AtT).unwrap();
            let g = upper_bound_b(&data, r, BoundMode::GridInfimum).unwrap();
            assert!(g.b_upper <= a.b_upper * (1.0 + 1e-12), "R = {r}");
            assert_relative_eq!(g.b_upper, 9.0 * g.b_def, max_relative = 1e-14);
        }
    }
}

#[test]
fn example_bound_has_quarter_order() {
    let data = ComparisonData::example_b6(3.0, 1.0).unwrap();
    let ratios: Vec<f64> = geometric_grid(1e4, 1e10, 1)
        .into_iter()
        .map(|r| upper_bound_b(&data, r, BoundMode::GridInfimum).unwrap().b_upper / r.powf(0.25))
        .collect();
    let (lo, hi) = ratios.iter().fold((f64::INFINITY, 0.0f64), |(a, b), x| (a.min(*x), b.max(*x)));
    assert!(hi / lo < 3.0, "{ratios:?}");
}

#[test]
fn example_family_is_majorized() {
    let h = family_example_b6(3.0, 1.0).unwrap().hamiltonian;
    let data = ComparisonData::example_b6(3.0, 1.0).unwrap();
    let k = check_majorization(&h, &data, 2000).unwrap();
    assert!(k.strict(), "{k:?}");
    let psi = auto_psi(&h, 1, 200).unwrap();
    assert!(psi.is_finite());
    let s = verify_bound_sandwich(&h, &data, &geometric_grid(1e2, 1e4, 2), 1e-3, 64, 2000).unwrap();
    assert!(s.failures.is_empty());
    for row in &s.rows {
        assert!(row.report.margin_upper.unwrap() >= 0.0);
        assert!(row.lower_ratio > 0.0);
    }
}

#[test]
fn understated_majorants_are_flagged() {
    let h = family_example_b6(3.0, 1.0).unwrap().hamiltonian;
    // half of l_j = j^-3, and a quarter of the angle steps 2/j
    let data = ComparisonData::power_law(3.0, 1.0, 2.0, 2.0, 0.5).unwrap();
    let k = check_majorization(&h, &data, 1000).unwrap();
    assert!(!k.strict());
    assert_relative_eq!(k.d_l.constant, 2.0, max_relative = 1e-12);
    assert!((3.9..=4.0).contains(&k.d_phi.constant), "{}", k.d_phi.constant);
    let bigger = data.rescaled(&k).unwrap();
    assert!(check_majorization(&h, &bigger, 1000).unwrap().strict());

    // a ratio that keeps doubling is reported as a broken hypothesis
    let flat = HamburgerHamiltonian::new_validated(vec![1.0; 64], (0..64).map(|j| j as f64).collect()).unwrap();
    let steep = ComparisonData::power_law(3.0, 0.0, 2.0, 2.0, 1.0).unwrap();
    assert!(matches!(check_majorization(&flat, &steep, 40), Err(Error::Hypothesis { .. })));
}

#[test]
fn report_serialization() {
    let data = ComparisonData::example_b6(3.0, 1.0).unwrap();
    let mut rows = vec![upper_bound_b(&data, 1e3, BoundMode::GridInfimum).unwrap()];
    rows[0].attach_measurement(1.0);
    let mut csv = Vec::new();
    write_reports_csv(&rows, &mut csv).unwrap();
    let csv = String::from_utf8(csv).unwrap();
    assert!(csv.starts_with("R,kR,hR,TR,gT,RCinvT,LT,B_upper,lower_Dinv,logM,margin_upper\n"));
    assert_eq!(csv.lines().count(), 2);
    let mut js = Vec::new();
    write_reports_json(&rows, &mut js).unwrap();
    let v: serde_json::Value = serde_json::from_slice(&js).unwrap();
    assert_relative_eq!(v[0]["R"].as_f64().unwrap(), 1e3);
}

#[test]
fn data_grammar() {
    let a = ComparisonData::parse("example_b6(3, 1)", None).unwrap();
    let b = ComparisonData::example_b6(3.0, 1.0).unwrap();
    for t in [1.0, 7.0, 1e5] {
        assert_eq!(a.c_phi.eval(t), b.c_phi.eval(t));
    }
    let p = ComparisonData::parse("power_law(2, 1, 1, 1, 3)", None).unwrap();
    assert_relative_eq!(p.d_l.eval(10.0), 0.03, max_relative = 1e-14);
    assert_eq!(p.d_phi.eval(1.0), 1.0);
    let m = ComparisonData::parse("majorants(power(-3), const(1), powerlog(0.5, -2, 0), powerlog(0.5, -2, 0))", None)
        .unwrap();
    assert_relative_eq!(m.c_l.eval(10.0), 0.005, max_relative = 1e-14);
    assert!(matches!(ComparisonData::parse("majorants(power(-3))", None), Err(Error::Parse(_))));
    assert!(matches!(ComparisonData::parse("wobbly(1)", None), Err(Error::Parse(_))));
}
