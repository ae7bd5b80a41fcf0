use std::f64::consts::PI;
use std::sync::Arc;

use super::HamburgerHamiltonian;
use crate::error::{Error, Result};
use crate::regvar::{ComparisonFunction, PowerLog};

/// Exponents `(δ_l, δ_φ, γ_l, γ_φ)` of a power-law comparison preset.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PresetExponents {
    pub delta_l: f64,
    pub delta_phi: f64,
    pub gamma_l: f64,
    pub gamma_phi: f64,
}

/// `l_j = j^{-α}`, `φ_j = (-1)^j j^{-β}` together with its exponent preset.
#[derive(Debug, Clone)]
pub struct ExampleFamily {
    pub hamiltonian: HamburgerHamiltonian,
    pub alpha: f64,
    pub beta: f64,
    pub exponents: PresetExponents,
}

pub fn family_example_b6(alpha: f64, beta: f64) -> Result<ExampleFamily> {
    if !(alpha > 1.0) {
        return Err(Error::Validation(format!("alpha = {alpha} must exceed 1 for summable lengths")));
    }
    if !(beta >= 0.0) {
        return Err(Error::Validation(format!("beta = {beta} must be nonnegative")));
    }
    // Σ_{j>N} j^{-α} ≤ ∫_N^∞ t^{-α} dt
    let tail = ComparisonFunction::powerlog(PowerLog::new(1.0 / (alpha - 1.0), 1.0 - alpha, 0.0)?);
    let h = HamburgerHamiltonian::from_rule(
        move |j| {
            let t = j as f64;
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            (t.powf(-alpha), sign * t.powf(-beta))
        },
        tail,
        &format!("example_b6({alpha}, {beta})"),
    )?;
    Ok(ExampleFamily {
        hamiltonian: h,
        alpha,
        beta,
        exponents: PresetExponents {
            delta_l: alpha,
            delta_phi: beta,
            gamma_l: alpha - 1.0,
            gamma_phi: alpha + 2.0 * beta - 1.0,
        },
    })
}

type OmegaSeq = dyn Fn(usize) -> f64 + Send + Sync;

/// The four constructions with prescribed off-diagonal growth.
#[derive(Clone)]
pub enum B83Variant {
    /// `ω ∈ [-2, 2]`; the endpoints select the dedicated constructions.
    Omega(f64),
    /// `a_n/b_n ∼ ω_n → 0` with `γ = lim ω_{n-1}/ω_n ∈ (-1, ∞)`; the
    /// cumulative angle sum is materialized for `count` intervals.
    Sequence { omega: Arc<OmegaSeq>, gamma: f64, count: usize },
}

impl std::fmt::Debug for B83Variant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            B83Variant::Omega(w) => write!(f, "Omega({w})"),
            B83Variant::Sequence { gamma, count, .. } => write!(f, "Sequence(gamma={gamma}, count={count})"),
        }
    }
}

/// Harmonic number `H_n`.
pub(crate) fn harmonic(n: usize) -> f64 {
    if n < 32 {
        return (1..=n).map(|k| 1.0 / k as f64).sum();
    }
    let x = n as f64;
    let x2 = x * x;
    0.577_215_664_901_532_9 + x.ln() + 0.5 / x - 1.0 / (12.0 * x2) + 1.0 / (120.0 * x2 * x2)
        - 1.0 / (252.0 * x2 * x2 * x2)
}

/// Hamiltonian whose Jacobi off-diagonal behaves like `g_inverse(n)`.
/// `g_inverse` must be regularly varying with index above 2.
pub fn family_corollary_b83(g_inverse: &ComparisonFunction, variant: B83Variant) -> Result<HamburgerHamiltonian> {
    match g_inverse.index() {
        Some(i) if i > 2.0 => {}
        other => {
            return Err(Error::Validation(format!("g_inverse must have index > 2, got {other:?}")));
        }
    }
    let g = g_inverse.clone();
    match variant {
        B83Variant::Omega(w) if w.abs() > 2.0 || !w.is_finite() => Err(Error::Validation(format!(
            "|ω| = {} > 2 cannot be in the limit circle case",
            w.abs()
        ))),
        B83Variant::Omega(w) if w == -2.0 || w == 2.0 => {
            let plus = w == 2.0;
            let ell = ComparisonFunction::power(1.0).div(&g);
            HamburgerHamiltonian::from_rule_with_length_majorant(
                move |n| {
                    let t = n as f64;
                    let l = t / g.eval(t);
                    let hn = harmonic(n - 1);
                    let phi = if plus { (n - 1) as f64 * PI - hn } else { hn };
                    (l, phi)
                },
                ell,
                &format!("b83(omega={w})"),
            )
        }
        B83Variant::Omega(w) => {
            let psi = (-w / 2.0).acos();
            let s = psi.sin();
            let ell = g.powf(-1.0).scaled(1.0 / s);
            HamburgerHamiltonian::from_rule_with_length_majorant(
                move |n| (1.0 / (s * g.eval(n as f64)), (n - 1) as f64 * psi),
                ell,
                &format!("b83(omega={w})"),
            )
        }
        B83Variant::Sequence { omega, gamma, count } => {
            if !(gamma > -1.0) {
                return Err(Error::Validation(format!("γ = {gamma} must lie in (-1, ∞)")));
            }
            if count < 2 {
                return Err(Error::Validation("sequence variant needs at least two intervals".into()));
            }
            let mut l = Vec::with_capacity(count);
            let mut phi = Vec::with_capacity(count);
            let mut acc = 0.0;
            for n in 1..=count {
                l.push(1.0 / g.eval(n as f64));
                // φ_n = (n-1)π/2 + Σ_{k<n, |ω_k|<π} ω_k / (2(1+γ))
                phi.push((n - 1) as f64 * PI / 2.0 + acc / (2.0 * (1.0 + gamma)));
                let wn = omega(n);
                if wn.abs() < PI {
                    acc += wn;
                }
            }
            let ell = g.powf(-1.0);
            let tail = crate::regvar::tail_integral(&ell, count as f64)
                .map_err(|e| Error::Validation(format!("lengths not summable: {e}")))?;
            let g2 = g.clone();
            let tail_fn = ComparisonFunction::from_ln_fn(
                move |u| {
                    crate::regvar::tail_integral(&g2.powf(-1.0), u.exp()).map(|v| v.ln()).unwrap_or(f64::INFINITY)
                },
                "∫_N^∞ 1/g⁻",
                g.index().map(|i| 1.0 - i),
                crate::regvar::Monotonicity::Nonincreasing,
            );
            debug_assert!(tail.is_finite());
            HamburgerHamiltonian::new_validated(l, phi)?
                .with_tail(tail_fn)
                .map(|h| h.with_label("b83(sequence)"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn example_b6_values() {
        let f = family_example_b6(3.0, 1.0).unwrap();
        let (l2, p2) = f.hamiltonian.interval(2).unwrap();
        assert_relative_eq!(l2, 0.125);
        assert_relative_eq!(p2, 0.5);
        let e = f.exponents;
        assert_eq!((e.delta_l, e.delta_phi, e.gamma_l, e.gamma_phi), (3.0, 1.0, 2.0, 4.0));
        let g = family_example_b6(2.0, 0.0).unwrap();
        assert_eq!(g.hamiltonian.interval(1).unwrap().1, -1.0);
        assert_eq!(g.hamiltonian.interval(2).unwrap().1, 1.0);
        assert!(family_example_b6(1.0, 0.0).is_err());
    }

    #[test]
    fn tail_majorant_dominates_true_tail() {
        let f = family_example_b6(3.0, 1.0).unwrap();
        for n in [1usize, 10, 100] {
            let exact: f64 = (n + 1..200_000).map(|j| (j as f64).powi(-3)).sum();
            assert!(f.hamiltonian.tail_majorant(n) >= exact);
        }
        let zeta3 = 1.202_056_903_159_594_3;
        assert!(f.hamiltonian.tail_majorant(0) >= zeta3);
    }

    #[test]
    fn harmonic_asymptotic_matches_sum() {
        let exact: f64 = (1..=1000).map(|k| 1.0 / k as f64).sum();
        assert_relative_eq!(harmonic(1000), exact, max_relative = 1e-14);
        let exact: f64 = (1..=32).map(|k| 1.0 / k as f64).sum();
        assert_relative_eq!(harmonic(32), exact, max_relative = 1e-14);
    }

    #[test]
    fn b83_angle_increments() {
        let g = ComparisonFunction::power(3.0);
        let h = family_corollary_b83(&g, B83Variant::Omega(0.0)).unwrap();
        let d = h.interval(5).unwrap().1 - h.interval(4).unwrap().1;
        assert_relative_eq!(d, PI / 2.0, max_relative = 1e-14);
        let h = family_corollary_b83(&g, B83Variant::Omega(-2.0)).unwrap();
        for n in [3usize, 40, 1000] {
            let d = h.interval(n + 1).unwrap().1 - h.interval(n).unwrap().1;
            assert_relative_eq!(d, 1.0 / n as f64, max_relative = 1e-9);
        }
        let h = family_corollary_b83(&g, B83Variant::Omega(2.0)).unwrap();
        for n in [3usize, 40, 1000] {
            let d = h.interval(n + 1).unwrap().1 - h.interval(n).unwrap().1;
            assert_relative_eq!(d, PI - 1.0 / n as f64, max_relative = 1e-9);
        }
        assert!(family_corollary_b83(&g, B83Variant::Omega(2.5)).is_err());
        assert!(family_corollary_b83(&ComparisonFunction::power(1.5), B83Variant::Omega(0.0)).is_err());
    }

    #[test]
    fn b83_sequence_variant() {
        let g = ComparisonFunction::power(3.0);
        let omega: Arc<OmegaSeq> = Arc::new(|n| 1.0 / n as f64);
        let h = family_corollary_b83(&g, B83Variant::Sequence { omega, gamma: 1.0, count: 50 }).unwrap();
        let d = h.interval(11).unwrap().1 - h.interval(10).unwrap().1;
        assert_relative_eq!(d, PI / 2.0 + 0.1 / 4.0, max_relative = 1e-12);
    }
}
