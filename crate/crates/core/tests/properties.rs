use std::f64::consts::PI;

use nevbound::acceptance::case_formula;
use nevbound::bounds::{upper_bound_b, BoundMode, ComparisonData};
use nevbound::casebook::{
    band_width, corollary_b66_row, q, theorem_b38_check, theorem_b9_dispatch, CaseLabel, DispatchInput, ExponentData,
    Sides, Q,
};
use nevbound::hamiltonian::{family_example_b6, hamiltonian_from_jacobi_gauged, jacobi_from_hamiltonian};
use nevbound::monodromy::{geometric_grid, growth_profile, monodromy_prefix, omega_matrix, rank_one, C64};
use nevbound::HamburgerHamiltonian;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};

fn config(cases: u32) -> Config {
    Config { cases, rng_seed: RngSeed::Fixed(0), failure_persistence: None, ..Config::default() }
}

fn quarters(max: i64) -> impl Strategy<Value = Q> {
    (0..=max).prop_map(|k| q(k, 4))
}

// Pure power laws satisfying the standing hypotheses: δ > 0, γ > 0, γ_l ≤ γ_φ.
fn power_exponents() -> impl Strategy<Value = ExponentData> {
    (quarters(12), quarters(12), quarters(8), quarters(8))
        .prop_filter("standing hypotheses", |(dl, dp, g1, g2)| {
            *dl + *dp > q(0, 1) && *g1 + *g2 > q(0, 1)
        })
        .prop_map(|(dl, dp, g1, g2)| ExponentData::power_law(dl, dp, g1.min(g2), g1.max(g2)))
}

// Case read off the exponents directly.
fn expected_case(e: &ExponentData) -> Option<CaseLabel> {
    let (one, two) = (q(1, 1), q(2, 1));
    let (d, g) = (e.delta(), e.gamma());
    if d <= one + g {
        Some(CaseLabel::A)
    } else if d > two {
        Some(CaseLabel::B)
    } else if e.delta_l <= one + g {
        (d != two || g != q(0, 1)).then_some(CaseLabel::C)
    } else if e.delta_l > one {
        Some(CaseLabel::D)
    } else {
        None
    }
}

proptest! {
    #![proptest_config(config(256))]

    #[test]
    fn dispatched_index_matches_case_formula(e in power_exponents()) {
        let got = theorem_b9_dispatch(&DispatchInput::Exponents(e));
        match expected_case(&e) {
            Some(label) => {
                let d = got.unwrap();
                prop_assert_eq!(d.label, label);
                prop_assert_eq!(d.index, case_formula(label, &e));
            }
            None => prop_assert!(got.map(|d| d.is_exceptional()).unwrap_or(true)),
        }
    }

    #[test]
    fn table_rows_agree_with_dispatch(e in power_exponents()) {
        let row = corollary_b66_row(e.delta_l, e.delta_phi, e.gamma_l, e.gamma_phi).unwrap();
        if let (Ok(d), Some(_)) = (theorem_b9_dispatch(&DispatchInput::Exponents(e)), expected_case(&e)) {
            if !row.is_exceptional() && !d.is_exceptional() {
                prop_assert_eq!(row.index, d.index);
            }
        }
    }
}

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn case_a_inverse_is_consistent(e in power_exponents(), k in 0usize..=6) {
        prop_assume!(expected_case(&e) == Some(CaseLabel::A));
        let d = theorem_b9_dispatch(&DispatchInput::Exponents(e)).unwrap();
        let alpha = d.alpha.unwrap();
        let s = Sides::new(e.comparison_data().unwrap());
        let u = (1e3f64 * 10f64.powf(k as f64 / 2.0)).ln();
        let back = s.case_a_inverse_ln(s.ln_case_a_f(u, alpha), alpha);
        prop_assert!((back - u).abs() <= 1.1f64.ln(), "t = {}, back = {}", u.exp(), back.exp());
    }

    #[test]
    fn case_b_sides_stay_comparable(e in power_exponents()) {
        prop_assume!(expected_case(&e) == Some(CaseLabel::B));
        let d = theorem_b9_dispatch(&DispatchInput::Exponents(e)).unwrap();
        prop_assert!(d.two_sided);
        let gaps: Vec<f64> = geometric_grid(1e4, 1e10, 1)
            .into_iter()
            .map(|r| (d.upper_ln(r).unwrap() - d.lower_ln(r).unwrap()).exp())
            .collect();
        prop_assert!(band_width(gaps.iter().cloned()) <= 10.0, "{:?}", gaps);
    }

    #[test]
    fn table_bound_tracks_grid_infimum(e in power_exponents()) {
        let row = corollary_b66_row(e.delta_l, e.delta_phi, e.gamma_l, e.gamma_phi).unwrap();
        prop_assume!(!row.is_exceptional());
        let f = |x: Q| *x.numer() as f64 / *x.denom() as f64;
        let data = ComparisonData::power_law(f(e.delta_l), f(e.delta_phi), f(e.gamma_l), f(e.gamma_phi), 1.0).unwrap();
        let form = row.upper.unwrap();
        let ratios: Vec<f64> = geometric_grid(1e7, 1e9, 2)
            .into_iter()
            .map(|r| (upper_bound_b(&data, r, BoundMode::GridInfimum).unwrap().b_upper.ln() - form.ln_eval(r)).exp())
            .collect();
        prop_assert!(band_width(ratios.iter().cloned()) <= 4.0, "row {}: {:?}", row.label, ratios);
    }
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn determinant_stays_one(
        ls in prop::collection::vec(1e-3f64..10.0, 1..200),
        seed in 0.0f64..PI,
        r in 1e-2f64..1e4,
        th in 0.0f64..(2.0 * PI),
    ) {
        let n = ls.len();
        let angles = (0..n).map(|j| (seed * (j as f64 + 1.0) * 1.7).rem_euclid(PI)).collect();
        let h = HamburgerHamiltonian::new_validated(ls, angles).unwrap();
        let w = monodromy_prefix(&h, n, C64::from_polar(r, th)).unwrap();
        prop_assert!(w.det_defect() <= 1e-9);
    }

    #[test]
    fn conjugated_rank_one_norm(a in 0.1f64..10.0, phi in -PI..PI, psi in -PI..PI) {
        let om = omega_matrix(a, psi);
        let inv = [[om[1][1], -om[0][1]], [-om[1][0], om[0][0]]];
        let mul = |x: [[f64; 2]; 2], y: [[f64; 2]; 2]| {
            [[x[0][0] * y[0][0] + x[0][1] * y[1][0], x[0][0] * y[0][1] + x[0][1] * y[1][1]],
             [x[1][0] * y[0][0] + x[1][1] * y[1][0], x[1][0] * y[0][1] + x[1][1] * y[1][1]]]
        };
        let m = mul(mul(om, rank_one(phi)), inv);
        // rank one, so the spectral norm equals the Frobenius norm
        let fro = m.iter().flatten().map(|v| v * v).sum::<f64>().sqrt();
        let (s, c) = (phi - psi).sin_cos();
        let want = a * a * c * c + s * s / (a * a);
        prop_assert!((fro - want).abs() <= 1e-12 * a.max(1.0 / a).powi(2));
    }

    #[test]
    fn jacobi_bridge_round_trip(
        ls in prop::collection::vec(1e-2f64..10.0, 3..60),
        incs in prop::collection::vec(0.2f64..(PI - 0.2), 60),
        phi0 in 0.0f64..PI,
    ) {
        let n = ls.len() - 1;
        let mut phi = phi0;
        let angles: Vec<f64> = (0..=n).map(|j| { if j > 0 { phi += incs[j]; } phi }).collect();
        let h = HamburgerHamiltonian::new_validated(ls.clone(), angles.clone()).unwrap();
        let j = jacobi_from_hamiltonian(&h, n).unwrap();
        let back = hamiltonian_from_jacobi_gauged(&j, n, ls[0], angles[0]).unwrap();
        let (l2, p2) = back.params(n + 1).unwrap();
        for i in 0..=n {
            prop_assert!((l2[i] / ls[i] - 1.0).abs() < 1e-9);
            let d = (p2[i] - angles[i]) / PI;
            prop_assert!((d - d.round()).abs() * PI < 1e-9);
        }
    }
}

#[test]
fn band_is_invariant_under_pi_shifts_and_equivalent_majorants() {
    let h = family_example_b6(3.0, 1.0).unwrap().hamiltonian;
    let data = ComparisonData::example_b6(3.0, 1.0).unwrap();
    let radii = geometric_grid(1e2, 1e5, 4);
    let base = theorem_b38_check(&h, &data.d_l, &data.d_phi, &radii, 1e-3, 64).unwrap();

    let shifted = h.map_angles(|a| a + 3.0 * PI);
    let s = theorem_b38_check(&shifted, &data.d_l, &data.d_phi, &radii, 1e-3, 64).unwrap();
    for (a, b) in base.ratios.iter().zip(&s.ratios) {
        assert!((a / b - 1.0).abs() < 1e-9, "{a} vs {b}");
    }

    // d_l doubled: the lower comparison function moves by 2^{1/4} at most
    let doubled = data.d_l.scaled(2.0);
    let e = theorem_b38_check(&h, &doubled, &data.d_phi, &radii, 1e-3, 64).unwrap();
    for (a, b) in base.ratios.iter().zip(&e.ratios) {
        let f = a / b;
        assert!((1.0..=2f64.powf(0.25) * (1.0 + 1e-9)).contains(&f), "{f}");
    }
}

#[test]
fn scaling_lengths_keeps_the_order() {
    let h = family_example_b6(3.0, 1.0).unwrap().hamiltonian;
    let radii = geometric_grid(1e2, 1e6, 4);
    let a = growth_profile(&h, &radii, 1e-3, 64).unwrap();
    let b = growth_profile(&h.scale_lengths(2.0), &radii, 1e-3, 64).unwrap();
    assert!((a.order - b.order).abs() < 0.02, "{} vs {}", a.order, b.order);
    let shift = band_width(a.log_m.iter().zip(&b.log_m).map(|(x, y)| y / x));
    assert!(shift < 1.5, "{shift}");
}
