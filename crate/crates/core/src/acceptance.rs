//! The fourteen numbered acceptance checks. The integration test target and
//! the `selftest` subcommand both run them from here, so the two can never
//! disagree. Each check compares library output against an oracle computed
//! independently: closed forms, direct sums, or regression values frozen
//! from earlier runs.

use std::f64::consts::PI;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bounds::{lower_bound, solve_t, upper_bound_b, verify_bound_sandwich, BoundMode, ComparisonData};
use crate::casebook::{
    band_width, corollary_b66_row, jacobi_presets, powerlog_fixtures, q, qi, theorem_b38_check, theorem_b9_dispatch,
    CaseLabel, DispatchInput, ExponentData, JacobiPreset, PowerLogExample, Q,
};
use crate::error::Result;
use crate::hamiltonian::{
    family_example_b6, hamiltonian_from_jacobi, hamiltonian_from_jacobi_gauged, jacobi_from_hamiltonian, B83Variant,
    HamburgerHamiltonian, JacobiParameters,
};
use crate::monodromy::{
    dilated_product_log_bound, geometric_grid, growth_profile, monodromy_prefix, monodromy_range, omega_matrix,
    rank_one, tail_bound_values, C64,
};
use crate::regvar::{generalized_inverse_ln, head_integral, tail_integral, ComparisonFunction, Monotonicity, PowerLog};

/// Result of one criterion.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub id: u8,
    pub title: &'static str,
    pub pass: bool,
    pub detail: String,
    pub seconds: f64,
    pub budget: Option<f64>,
}

impl Outcome {
    pub fn line(&self) -> String {
        let verdict = if self.pass { "PASS" } else { "FAIL" };
        let budget = self.budget.map(|b| format!(" of {b:.0} s")).unwrap_or_default();
        format!(
            "{verdict} criterion {:>2} {}: {} [{:.2} s{budget}]",
            self.id, self.title, self.detail, self.seconds
        )
    }
}

type Check = fn(u64) -> Result<(bool, String)>;

pub struct Criterion {
    pub id: u8,
    pub title: &'static str,
    /// Wall-clock limit in seconds, when one applies.
    pub budget: Option<f64>,
    check: Check,
}

pub const CRITERIA: &[Criterion] = &[
    Criterion { id: 1, title: "determinant identity", budget: Some(10.0), check: det_identity },
    Criterion { id: 2, title: "dilation matrix identities", budget: Some(1.0), check: omega_identities },
    Criterion { id: 3, title: "dilated product bound", budget: Some(5.0), check: dilated_product },
    Criterion { id: 4, title: "tail product bound", budget: Some(10.0), check: tail_product },
    Criterion { id: 5, title: "upper bound end to end", budget: Some(60.0), check: upper_end_to_end },
    Criterion { id: 6, title: "order reproduction", budget: Some(120.0), check: order_reproduction },
    Criterion { id: 7, title: "two-sided band", budget: None, check: two_sided_band },
    Criterion { id: 8, title: "lower bound floor", budget: None, check: lower_floor },
    Criterion { id: 9, title: "power-law table", budget: Some(30.0), check: power_table },
    Criterion { id: 10, title: "case dispatch indices", budget: None, check: dispatch_matrix },
    Criterion { id: 11, title: "regular variation toolkit", budget: None, check: regvar_toolkit },
    Criterion { id: 12, title: "Jacobi round trip", budget: None, check: jacobi_round_trip },
    Criterion { id: 13, title: "Jacobi presets", budget: Some(120.0), check: jacobi_growth },
    Criterion { id: 14, title: "power-log fixtures", budget: None, check: powerlog_bands },
];

pub fn run_criterion(c: &Criterion, seed: u64) -> Outcome {
    let start = Instant::now();
    let (ok, detail) = match (c.check)(seed) {
        Ok(r) => r,
        Err(e) => (false, format!("error: {e}")),
    };
    let seconds = start.elapsed().as_secs_f64();
    let in_time = c.budget.map_or(true, |b| seconds <= b);
    let detail = if ok && !in_time { format!("{detail}; over the time budget") } else { detail };
    Outcome { id: c.id, title: c.title, pass: ok && in_time, detail, seconds, budget: c.budget }
}

pub fn run_all(seed: u64) -> Vec<Outcome> {
    CRITERIA.iter().map(|c| run_criterion(c, seed)).collect()
}

fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

fn log_uniform(r: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    10f64.powf(r.gen_range(lo..hi))
}

fn random_hamiltonian(r: &mut ChaCha8Rng, n: usize) -> Result<HamburgerHamiltonian> {
    let l = (0..n).map(|_| log_uniform(r, -3.0, 1.0)).collect();
    let p = (0..n).map(|_| r.gen_range(0.0..PI)).collect();
    HamburgerHamiltonian::new_validated(l, p)
}

type M2 = [[f64; 2]; 2];

fn mul2(a: M2, b: M2) -> M2 {
    let mut m = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            m[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    m
}

fn inv2(a: M2) -> M2 {
    let d = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    [[a[1][1] / d, -a[0][1] / d], [-a[1][0] / d, a[0][0] / d]]
}

// Largest singular value of a real 2x2 matrix without cancellation.
fn sigma_max(m: M2) -> f64 {
    let [[p, q], [r, s]] = m;
    0.5 * ((p + s).hypot(q - r) + (p - s).hypot(q + r))
}

fn det_identity(seed: u64) -> Result<(bool, String)> {
    let mut r = rng(seed, 1);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let n = r.gen_range(1..=500);
        let h = random_hamiltonian(&mut r, n)?;
        let z = C64::from_polar(log_uniform(&mut r, -2.0, 4.0), r.gen_range(0.0..2.0 * PI));
        worst = worst.max(monodromy_prefix(&h, n, z)?.det_defect());
    }
    Ok((worst <= 1e-9, format!("max scaled |det - 1| = {worst:.2e} over 1000 products")))
}

fn omega_identities(seed: u64) -> Result<(bool, String)> {
    let mut r = rng(seed, 2);
    let (mut e1, mut e2, mut e3) = (0.0f64, 0.0f64, f64::INFINITY);
    for _ in 0..1000 {
        let a = log_uniform(&mut r, -1.0, 1.0);
        let b = log_uniform(&mut r, -1.0, 1.0);
        let phi = r.gen_range(-PI..PI);
        let psi = r.gen_range(-PI..PI);
        let om = omega_matrix(a, psi);
        let big = a.max(1.0 / a);
        e1 = e1.max((sigma_max(om) - big).abs() / big).max((sigma_max(inv2(om)) - big).abs() / big);
        let conj = mul2(mul2(om, rank_one(phi)), inv2(om));
        let (s, c) = (phi - psi).sin_cos();
        let want = a * a * c * c + s * s / (a * a);
        e2 = e2.max((sigma_max(conj) - want).abs() / (big * big));
        let lhs = sigma_max(mul2(om, inv2(omega_matrix(b, phi))));
        let rhs = (a / b).max(b / a) * c.abs() + (a * b).max(1.0 / (a * b)) * s.abs();
        e3 = e3.min((rhs - lhs) / rhs);
    }
    let ok = e1 <= 1e-12 && e2 <= 1e-12 && e3 >= -1e-12;
    Ok((ok, format!("(i) {e1:.1e}, (ii) {e2:.1e}, (iii) min relative slack {e3:.1e}")))
}

fn dilated_product(seed: u64) -> Result<(bool, String)> {
    let mut r = rng(seed, 3);
    let mut worst = f64::INFINITY;
    for _ in 0..1000 {
        let n = r.gen_range(1..=50);
        let h = random_hamiltonian(&mut r, n)?;
        let a: Vec<f64> = (0..n).map(|_| 1.0 - r.gen::<f64>()).collect();
        let rad = log_uniform(&mut r, -2.0, 4.0);
        let z = C64::from_polar(rad, r.gen_range(0.0..2.0 * PI));
        let (l, p) = h.params(n)?;
        let lhs = monodromy_prefix(&h, n, z)?.log_norm();
        worst = worst.min(dilated_product_log_bound(&l, &p, &a, rad) - lhs);
    }
    Ok((worst >= -1e-9, format!("min log margin {worst:.3e}")))
}

fn tail_product(_seed: u64) -> Result<(bool, String)> {
    let h = family_example_b6(3.0, 1.0)?.hamiltonian;
    let mut worst = f64::INFINITY;
    for n in [10usize, 100, 1000] {
        let m = 10 * n;
        let (l, p) = h.params(m)?;
        // exact tail sums over the block (N, M]
        let c_l: f64 = l[n..m].iter().sum();
        let c_phi: f64 = l[n..m].iter().zip(&p[n..m]).map(|(l, p)| l * p.sin().powi(2)).sum();
        for rad in [1.0, 10.0, 100.0, 1000.0] {
            let bound = tail_bound_values(c_l, c_phi, rad)?;
            for k in 0..32 {
                let z = C64::from_polar(rad, 2.0 * PI * k as f64 / 32.0);
                worst = worst.min(bound - monodromy_range(&h, n, m, z)?.log_norm());
            }
        }
    }
    Ok((worst >= -1e-9, format!("min log margin {worst:.3e}")))
}

fn upper_end_to_end(_seed: u64) -> Result<(bool, String)> {
    let h = family_example_b6(3.0, 1.0)?.hamiltonian;
    let data = ComparisonData::example_b6(3.0, 1.0)?;
    let radii = geometric_grid(1e2, 1e7, 4);
    let rep = verify_bound_sandwich(&h, &data, &radii, 1e-3, 64, 1000)?;
    let worst = rep.rows.iter().map(|r| r.report.margin_upper.unwrap_or(f64::NAN)).fold(f64::INFINITY, f64::min);
    let ok = rep.constants.strict() && worst >= 0.0;
    Ok((ok, format!("{} radii, min margin_upper {worst:.3}, strict majorants {}", radii.len(), rep.constants.strict())))
}

fn order_reproduction(_seed: u64) -> Result<(bool, String)> {
    let radii = geometric_grid(1e2, 1e8, 4);
    let mut ok = true;
    let mut parts = Vec::new();
    for (alpha, beta, lo, hi) in [(3.0, 1.0, 0.20, 0.30), (3.0, 0.0, 0.28, 0.38)] {
        let h = family_example_b6(alpha, beta)?.hamiltonian;
        let rho = growth_profile(&h, &radii, 1e-3, 64)?.order;
        ok &= (lo..=hi).contains(&rho);
        parts.push(format!("({alpha},{beta}) rho = {rho:.4} in [{lo}, {hi}]"));
    }
    Ok((ok, parts.join("; ")))
}

fn two_sided_band(_seed: u64) -> Result<(bool, String)> {
    let h = family_example_b6(3.0, 1.0)?.hamiltonian;
    let data = ComparisonData::example_b6(3.0, 1.0)?;
    let radii = geometric_grid(1e3, 1e8, 4);
    let band = theorem_b38_check(&h, &data.d_l, &data.d_phi, &radii, 1e-3, 64)?;
    let quarter = band_width(radii.iter().zip(&band.log_m).map(|(r, m)| m / r.powf(0.25)));
    let ok = quarter <= 10.0 && band.width() <= 10.0;
    Ok((ok, format!("logM/R^(1/4) band width {quarter:.3}, top-two-decade band width {:.3}", band.width())))
}

/// Floors for `logM(R)/[1/(d_l d_φ)]^-(R)` over the top two decades,
/// frozen at about 90% of the observed minima.
pub const LOWER_FLOORS: [(f64, f64, f64); 3] = [(3.0, 1.0, 3.2), (3.0, 0.0, 2.65), (2.0, 0.0, 2.05)];

fn lower_floor(_seed: u64) -> Result<(bool, String)> {
    let mut ok = true;
    let mut parts = Vec::new();
    for (alpha, beta, floor) in LOWER_FLOORS {
        // δ = 2 needs much longer truncations, so its grid stops earlier
        let (r_max, eps) = if alpha > 2.0 { (1e7, 1e-2) } else { (1e5, 0.5) };
        let h = family_example_b6(alpha, beta)?.hamiltonian;
        let data = ComparisonData::example_b6(alpha, beta)?;
        let radii = geometric_grid(1e2, r_max, 4);
        let prof = growth_profile(&h, &radii, eps, 64)?;
        let mut min = f64::INFINITY;
        for (r, m) in radii.iter().zip(&prof.log_m) {
            if *r >= r_max / 100.0 * (1.0 - 1e-12) {
                min = min.min(m / lower_bound(&data.d_l, &data.d_phi, *r)?);
            }
        }
        ok &= min >= floor;
        parts.push(format!("({alpha},{beta}) min {min:.3} >= {floor}"));
    }
    Ok((ok, parts.join("; ")))
}

/// One power-law parameter set `(δ_l, δ_φ, γ_l, γ_φ)` per table row.
pub fn power_table_rows() -> [(u8, [Q; 4]); 6] {
    let h = q(1, 2);
    [
        (1, [qi(1), h, qi(1), qi(1)]),
        (2, [qi(2), qi(1), qi(2), qi(2)]),
        (3, [qi(2), qi(1), h, h]),
        (4, [q(3, 2), h, h, h]),
        (5, [qi(1), h, q(1, 4), q(1, 4)]),
        (6, [q(9, 5), q(1, 10), h, h]),
    ]
}

fn power_table(_seed: u64) -> Result<(bool, String)> {
    let radii = geometric_grid(1e5, 1e9, 4);
    let f = |x: Q| *x.numer() as f64 / *x.denom() as f64;
    let mut ok = true;
    let mut parts = Vec::new();
    for (row, [dl, dp, gl, gp]) in power_table_rows() {
        let diag = corollary_b66_row(dl, dp, gl, gp)?;
        let (t_form, b_form) = match (diag.label, diag.crossing, diag.upper) {
            (CaseLabel::Row(k), Some(t), Some(b)) if k == row => (t, b),
            _ => {
                ok = false;
                parts.push(format!("row {row}: dispatched to {}", diag.label));
                continue;
            }
        };
        let data = ComparisonData::power_law(f(dl), f(dp), f(gl), f(gp), 1.0)?;
        let mut t_ratio = Vec::new();
        let mut b_ratio = Vec::new();
        for &r in &radii {
            t_ratio.push((solve_t(&data, r, 1e-10)?.ln() - t_form.ln_eval(r)).exp());
            b_ratio.push((upper_bound_b(&data, r, BoundMode::GridInfimum)?.b_upper.ln() - b_form.ln_eval(r)).exp());
        }
        let (tw, bw) = (band_width(t_ratio), band_width(b_ratio));
        ok &= tw < 2.0 && bw <= 4.0;
        parts.push(format!("row {row}: T drift {tw:.2}, B band {bw:.2}"));
    }
    Ok((ok, parts.join("; ")))
}

#[allow(clippy::too_many_arguments)]
fn ex(dl: Q, al: Q, dp: Q, ap: Q, gl: Q, bl: Q, gp: Q, bp: Q) -> ExponentData {
    ExponentData { delta_l: dl, alpha_l: al, delta_phi: dp, alpha_phi: ap, gamma_l: gl, beta_l: bl, gamma_phi: gp, beta_phi: bp }
}

/// Twelve exponent sets covering every case and equality sub-case, with
/// the expected label and whether `≍` holds.
pub fn dispatch_fixtures() -> Vec<(ExponentData, CaseLabel, bool)> {
    let (z, one, two, h) = (qi(0), qi(1), qi(2), q(1, 2));
    let pl = ExponentData::power_law;
    vec![
        (pl(one, h, one, one), CaseLabel::A, true),
        (pl(qi(3), one, two, qi(4)), CaseLabel::A, true),
        (ex(one, z, h, z, h, h, h, h), CaseLabel::A, true),
        (pl(two, one, h, h), CaseLabel::B, true),
        (ex(one, q(3, 2), one, one, h, z, h, z), CaseLabel::B, false),
        (ex(two, z, one, z, z, one, z, one), CaseLabel::B, true),
        (pl(one, h, q(1, 4), q(1, 4)), CaseLabel::C, true),
        (pl(one, one, h, h), CaseLabel::C, false),
        (ex(one, h, h, h, h, z, h, z), CaseLabel::C, true),
        (pl(q(3, 2), q(3, 10), q(1, 5), q(1, 5)), CaseLabel::D, true),
        (pl(q(3, 2), h, q(1, 4), q(1, 4)), CaseLabel::D, false),
        (ex(one, two, h, z, z, h, z, h), CaseLabel::D, false),
    ]
}

/// The index each case formula predicts.
pub fn case_formula(label: CaseLabel, e: &ExponentData) -> Option<Q> {
    let (one, two) = (qi(1), qi(2));
    let (d, g) = (e.delta(), e.gamma());
    match label {
        CaseLabel::A => Some(one / (one + g)),
        CaseLabel::B => Some(one / d),
        CaseLabel::C => Some((two - d + g) / (two - d + two * g)),
        CaseLabel::D => Some((one - e.delta_phi) / (e.delta_l - e.delta_phi)),
        _ => None,
    }
}

fn dispatch_matrix(_seed: u64) -> Result<(bool, String)> {
    let mut bad = Vec::new();
    let fx = dispatch_fixtures();
    for (i, (e, label, two_sided)) in fx.iter().enumerate() {
        let d = theorem_b9_dispatch(&DispatchInput::Exponents(*e))?;
        if d.label != *label || d.index != case_formula(*label, e) || d.two_sided != *two_sided {
            bad.push(format!("#{i}: got {} index {:?} two-sided {}", d.label, d.index, d.two_sided));
        }
    }
    // the excluded boundary (δ, γ) = (2, 0) of case C
    let z = qi(0);
    let edge = ex(qi(1), z, qi(1), z, z, q(1, 2), z, q(1, 2));
    if !theorem_b9_dispatch(&DispatchInput::Exponents(edge))?.is_exceptional() {
        bad.push("(δ, γ) = (2, 0) not flagged".into());
    }
    let detail = if bad.is_empty() { format!("{} fixtures exact, boundary flagged", fx.len()) } else { bad.join("; ") };
    Ok((bad.is_empty(), detail))
}

fn regvar_toolkit(_seed: u64) -> Result<(bool, String)> {
    let x = 1e6;
    // x f(x) / ∫ → |α + 1|
    let mut kar = 0.0f64;
    for a in [-3.0, -2.0, -1.5] {
        let f = ComparisonFunction::power(a);
        kar = kar.max((x * f.eval(x) / tail_integral(&f, x)? / (a + 1.0).abs() - 1.0).abs());
    }
    for a in [-0.5, 0.0, 1.0, 2.0] {
        let f = ComparisonFunction::power(a);
        kar = kar.max((x * f.eval(x) / head_integral(&f, x) / (a + 1.0).abs() - 1.0).abs());
    }
    let mut inv = 0.0f64;
    for (p, b) in [(2.0, 1.0), (0.5, -1.0), (3.0, 2.0), (1.0, -0.5)] {
        let f = PowerLog::new(1.0, p, b)?;
        let g = f.asymptotic_inverse()?;
        for k in 0..=12 {
            let y = 1e6 * 10f64.powf(k as f64 / 2.0);
            inv = inv.max((f.eval(g.eval(y)) / y - 1.0).abs());
        }
    }
    // slowly varying inputs with the radius beyond which R^4 is beaten
    let slow = [
        (ComparisonFunction::from_ln_fn(|u| u.ln_1p(), "1 + log t", Some(0.0), Monotonicity::Nondecreasing), 1e2),
        (ComparisonFunction::from_ln_fn(|u| 3.0 * u.ln_1p(), "(1 + log t)^3", Some(0.0), Monotonicity::Nondecreasing), 1e6),
        (ComparisonFunction::from_ln_fn(|u| u.sqrt(), "exp(sqrt(log t))", Some(0.0), Monotonicity::Nondecreasing), 1e2),
    ];
    let mut fast = true;
    for (f, from) in &slow {
        for rho in [1.0, 2.0, 4.0] {
            for k in 0..=8 {
                let r = from * 10f64.powf(k as f64 / 4.0);
                fast &= generalized_inverse_ln(f, r) >= rho * r.ln();
            }
        }
    }
    let ok = kar <= 0.02 && inv <= 0.01 && fast;
    Ok((ok, format!("Karamata dev {kar:.2e}, inverse dev {inv:.2e}, super-polynomial {fast}")))
}

fn angle_gap(a: f64, b: f64) -> f64 {
    let d = (a - b) / PI;
    (d - d.round()).abs() * PI
}

fn jacobi_round_trip(seed: u64) -> Result<(bool, String)> {
    let mut r = rng(seed, 12);
    let mut worst = 0.0f64;
    for k in 0..100 {
        let n = r.gen_range(2..=100);
        if k % 2 == 0 {
            // increments kept inside (0, π) so that the Jacobi side exists
            let l = (0..=n).map(|_| log_uniform(&mut r, -3.0, 1.0)).collect();
            let mut phi = r.gen_range(0.0..PI);
            let p = (0..=n)
                .map(|_| {
                    phi += r.gen_range(0.1..PI - 0.1);
                    phi
                })
                .collect();
            let h = HamburgerHamiltonian::new_validated(l, p)?;
            let (l, p) = h.params(n + 1)?;
            let back = hamiltonian_from_jacobi_gauged(&jacobi_from_hamiltonian(&h, n)?, n, l[0], p[0])?;
            let (l2, p2) = back.params(n + 1)?;
            for i in 0..=n {
                worst = worst.max((l2[i] / l[i] - 1.0).abs()).max(angle_gap(p2[i], p[i]));
            }
        } else {
            // perturbations of the free matrix; wilder entries make the
            // polynomials at 0 grow exponentially and the angles collapse
            let a: Vec<f64> = (0..n).map(|_| r.gen_range(-0.3..0.3)).collect();
            let b: Vec<f64> = (0..n).map(|_| r.gen_range(0.7..1.4)).collect();
            let j = JacobiParameters::new(a.clone(), b.clone())?;
            let back = jacobi_from_hamiltonian(&hamiltonian_from_jacobi(&j, n)?, n)?;
            for i in 0..n {
                worst = worst.max((back.b[i] / b[i] - 1.0).abs()).max((back.a[i] - a[i]).abs() / b[i]);
            }
        }
    }
    let n = 50;
    let free = hamiltonian_from_jacobi(&JacobiParameters::new(vec![0.0; n], vec![1.0; n])?, n)?;
    let (l, p) = free.params(n + 1)?;
    let mut free_dev = 0.0f64;
    for i in 0..=n {
        free_dev = free_dev.max((l[i] - 1.0).abs());
    }
    for i in 0..n {
        free_dev = free_dev.max((angle_gap(p[i + 1], p[i]) - PI / 2.0).abs());
    }
    let forward = jacobi_from_hamiltonian(&free, n)?;
    for i in 0..n {
        free_dev = free_dev.max((forward.b[i] - 1.0).abs()).max(forward.a[i].abs());
    }
    let ok = worst <= 1e-9 && free_dev <= 1e-9;
    Ok((ok, format!("max relative error {worst:.2e}, free matrix {free_dev:.2e}")))
}

fn jacobi_growth(_seed: u64) -> Result<(bool, String)> {
    let third = 1.0 / 3.0;
    let radii = geometric_grid(1e2, 1e6, 4);
    let b79 = JacobiPreset::B79 { sigma: 3.0, y0: 2.0, x1: 0.0, x2: 0.0, y1: -3.0, y2: 0.0, count: 200_000 };
    let rho = growth_profile(&jacobi_presets(&b79)?.hamiltonian, &radii, 1e-2, 64)?.order;
    let b83 = JacobiPreset::B83 { g: ComparisonFunction::power(third), variant: B83Variant::Omega(0.0), rows: 10_001 };
    let bundle = jacobi_presets(&b83)?;
    let n = 10_000;
    let target = bundle.target_b.as_ref().map(|g| g.eval(n as f64)).unwrap_or(f64::NAN);
    let b_ratio = bundle.jacobi.b[n - 1] / target;
    let prof = growth_profile(&bundle.hamiltonian, &radii, 1e-2, 64)?;
    let width = band_width(
        radii.iter().zip(&prof.log_m).filter(|(r, _)| **r >= 1e4 * (1.0 - 1e-12)).map(|(r, m)| m / r.powf(third)),
    );
    let ok = (rho - third).abs() <= 0.06 && (b_ratio - 1.0).abs() <= 0.01 && width <= 10.0;
    Ok((ok, format!("diagonal-ratio-2 preset rho = {rho:.4}; b_n/g^-(n) = {b_ratio:.5}, band width {width:.3}")))
}

fn powerlog_bands(_seed: u64) -> Result<(bool, String)> {
    let radii = geometric_grid(1e4, 1e8, 2);
    let mut ok = true;
    let mut parts = Vec::new();
    for example in [PowerLogExample::B24, PowerLogExample::B36, PowerLogExample::B11] {
        let (mut big, mut frak) = (1.0f64, 1.0f64);
        for fx in powerlog_fixtures(example) {
            let rows = fx.evaluate(&radii)?;
            if fx.big_b.is_some() {
                big = big.max(band_width(rows.iter().map(|r| r.big_ratio)));
            }
            frak = frak.max(band_width(rows.iter().map(|r| r.frak_ratio)));
        }
        ok &= big <= 4.0 && frak <= 4.0;
        parts.push(format!("{example}: B band {big:.2}, frak band {frak:.2}"));
    }
    Ok((ok, parts.join("; ")))
}
