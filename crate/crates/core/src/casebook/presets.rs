use crate::bounds::lower_bound_ln;
use crate::error::{Error, Result};
use crate::hamiltonian::{
    family_corollary_b83, hamiltonian_from_jacobi, jacobi_from_hamiltonian, B83Variant, HamburgerHamiltonian,
    JacobiParameters,
};
use crate::monodromy::growth_profile;
use crate::regvar::{generalized_inverse_ln, ComparisonFunction, Monotonicity};

/// Preset names with their parameter signatures, sorted by name.
pub const PRESETS: &[(&str, &str)] = &[
    ("b38", "b38(alpha, beta) two-sided band of logM(R)/[1/(d_l d_phi)]^-(R) for l_j = j^-alpha, phi_j = ±j^-beta"),
    ("b66", "b66(delta_l, delta_phi, gamma_l, gamma_phi) power-law table row"),
    ("b7", "b7(delta_l, alpha_l, delta_phi, alpha_phi, gamma_l, beta_l, gamma_phi, beta_phi) monodromy bound dispatch"),
    ("b79", "b79(sigma, y0, x1, x2, y1, y2, count) Jacobi parameters with critical diagonal ratio 2"),
    ("b83", "b83(omega, g_power, rows) Jacobi parameters with b_n ~ g^-(n), g(R) = R^g_power"),
    ("b9", "b9(delta_l, alpha_l, delta_phi, alpha_phi, gamma_l, beta_l, gamma_phi, beta_phi) case A-D sandwich"),
    ("b96", "b96(delta_l, alpha_l, delta_phi, alpha_phi, psi_condition) bound without tail majorants"),
    ("ex-b11", "ex-b11 fixtures at the boundary (delta, gamma) = (2, 0)"),
    ("ex-b24", "ex-b24 fixtures with gamma = 0 where L(t,R) may dominate"),
    ("ex-b36", "ex-b36 fixtures for case C with delta = 2"),
];

pub fn list_presets() -> String {
    let mut rows: Vec<_> = PRESETS.to_vec();
    rows.sort_by_key(|r| r.0);
    rows.iter().map(|(n, s)| format!("{n:<8} {s}\n")).collect()
}

/// `logM(R)/[1/(d_l d_φ)]^-(R)` over a grid.
#[derive(Debug, Clone)]
pub struct RatioBand {
    pub radii: Vec<f64>,
    pub log_m: Vec<f64>,
    pub ratios: Vec<f64>,
    /// Extremes over the top two decades of the grid.
    pub min: f64,
    pub max: f64,
    pub order: f64,
}

impl RatioBand {
    pub fn width(&self) -> f64 {
        self.max / self.min
    }
}

/// Measures `logM(R)` and compares it with the lower bound
/// `[1/(d_l d_φ)]^-(R)`; the band is two-sided when `δ > 2`.
pub fn theorem_b38_check(
    h: &HamburgerHamiltonian,
    d_l: &ComparisonFunction,
    d_phi: &ComparisonFunction,
    radii: &[f64],
    eps: f64,
    angles: usize,
) -> Result<RatioBand> {
    if radii.len() < 2 {
        return Err(Error::InsufficientData("need at least two radii".into()));
    }
    match (d_l.index(), d_phi.index()) {
        (Some(a), Some(b)) if -(a + b) > 2.0 => {}
        (Some(a), Some(b)) => {
            return Err(Error::Validation(format!("δ = {} must exceed 2", -(a + b))));
        }
        _ => return Err(Error::Validation("d_l and d_phi need known indices".into())),
    }
    let prof = growth_profile(h, radii, eps, angles)?;
    let mut ratios = Vec::with_capacity(radii.len());
    for (r, m) in radii.iter().zip(&prof.log_m) {
        ratios.push((m.ln() - lower_bound_ln(d_l, d_phi, *r)?).exp());
    }
    let top = radii.iter().cloned().fold(0.0, f64::max) / 100.0 * (1.0 - 1e-12);
    let sel: Vec<f64> = radii.iter().zip(&ratios).filter(|(r, _)| **r >= top).map(|x| *x.1).collect();
    Ok(RatioBand {
        radii: radii.to_vec(),
        log_m: prof.log_m.clone(),
        min: sel.iter().cloned().fold(f64::INFINITY, f64::min),
        max: sel.iter().cloned().fold(0.0, f64::max),
        ratios,
        order: prof.order,
    })
}

/// Jacobi-side experiments with known growth.
#[derive(Debug, Clone)]
pub enum JacobiPreset {
    /// `b_n = n^σ(|y₀|/2 + x₁/n + x₂/n²)`, `a_n = n^σ(y₀ + y₁/n + y₂/n²)`
    /// for `n = 1..=count`.
    B79 { sigma: f64, y0: f64, x1: f64, x2: f64, y1: f64, y2: f64, count: usize },
    /// Prescribed off-diagonal `b_n ∼ g^-(n)`; `rows` Jacobi rows are
    /// materialized for inspection.
    B83 { g: ComparisonFunction, variant: B83Variant, rows: usize },
}

/// A Hamiltonian with the expected growth `logM(R) ≍ expected(R)`.
#[derive(Debug, Clone)]
pub struct ExperimentBundle {
    pub hamiltonian: HamburgerHamiltonian,
    pub jacobi: JacobiParameters,
    pub expected: ComparisonFunction,
    pub expected_index: f64,
    /// The off-diagonal target `g^-`, when prescribed.
    pub target_b: Option<ComparisonFunction>,
    pub notes: Vec<String>,
}

// Slope of ln l_n against ln n over [count/100, count].
fn length_index(h: &HamburgerHamiltonian, count: usize) -> Result<f64> {
    let (l, _) = h.params(count)?;
    let lo = (count / 100).max(1);
    let pts: Vec<(f64, f64)> = (0..=40)
        .map(|i| {
            let n = (lo as f64 * (count as f64 / lo as f64).powf(i as f64 / 40.0)).round() as usize;
            let n = n.clamp(1, count);
            ((n as f64).ln(), l[n - 1].ln())
        })
        .collect();
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Ok(sxy / sxx)
}

pub fn jacobi_presets(preset: &JacobiPreset) -> Result<ExperimentBundle> {
    match preset {
        JacobiPreset::B79 { sigma, y0, x1, x2, y1, y2, count } => {
            let (s, count) = (*sigma, *count);
            if !(s > 2.0) {
                return Err(Error::Validation(format!("σ = {s} must exceed 2")));
            }
            if !(*y0 != 0.0 && y0.is_finite()) {
                return Err(Error::Validation("y0 must be nonzero".into()));
            }
            if count < 1000 {
                return Err(Error::Validation(format!("count = {count} is too short to judge indeterminacy")));
            }
            let (mut a, mut b) = (Vec::with_capacity(count), Vec::with_capacity(count));
            for i in 0..count {
                let n = (i + 1) as f64;
                let p = n.powf(s);
                b.push(p * (y0.abs() / 2.0 + x1 / n + x2 / (n * n)));
                a.push(p * (y0 + y1 / n + y2 / (n * n)));
            }
            let j = JacobiParameters::new(a, b)?;
            // exponential growth of the polynomials at zero means limit point
            let h = hamiltonian_from_jacobi(&j, count).map_err(|e| match e {
                Error::Range(m) => Error::Validation(format!("parameters look determinate (limit point): {m}")),
                other => other,
            })?;
            let idx = length_index(&h, count)?;
            if !(idx < -1.05) {
                return Err(Error::Validation(format!(
                    "lengths decay like n^{idx:.3}; the parameters look determinate (limit point)"
                )));
            }
            Ok(ExperimentBundle {
                hamiltonian: h.with_label(&format!("b79(sigma={s}, y0={y0}, x1={x1}, x2={x2}, y1={y1}, y2={y2})")),
                jacobi: j,
                expected: ComparisonFunction::power(1.0 / s),
                expected_index: 1.0 / s,
                target_b: None,
                notes: vec![format!("fitted length index {idx:.4}")],
            })
        }
        JacobiPreset::B83 { g, variant, rows } => {
            let gi = match g.index() {
                Some(i) if i > 0.0 && i < 0.5 => i,
                other => return Err(Error::Validation(format!("Ind g = {other:?} must lie in (0, 1/2)"))),
            };
            let g_inv = match g.as_powerlog() {
                Some(p) => ComparisonFunction::powerlog(p.asymptotic_inverse()?.leading_form()),
                None => {
                    let g2 = g.clone();
                    ComparisonFunction::from_ln_fn(
                        move |u| generalized_inverse_ln(&g2, u.exp()),
                        "g^-",
                        Some(1.0 / gi),
                        Monotonicity::Nondecreasing,
                    )
                }
            };
            let h = family_corollary_b83(&g_inv, variant.clone())?;
            let j = jacobi_from_hamiltonian(&h, *rows)?;
            Ok(ExperimentBundle {
                hamiltonian: h,
                jacobi: j,
                expected: g.clone(),
                expected_index: gi,
                target_b: Some(g_inv),
                notes: vec![format!("variant {variant:?}")],
            })
        }
    }
}
