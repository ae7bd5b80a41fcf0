//! The explicit upper bound for `log max_{|z|=R} ‖W_H(z)‖` in terms of four
//! majorants, its ingredients `k`, `h`, `𝗀`, `L`, `T`, and the matching
//! lower bound `[1/(d_l d_φ)]^-(R)`.

mod report;
mod theorem;

use std::sync::{Arc, Mutex};

use rayon::prelude::*;
use serde::Serialize;

pub use report::{write_reports_csv, write_reports_json, BoundReport};
pub use theorem::{
    g_integral, h_of_r, k_of_r, l_term, solve_t, upper_bound_b, BoundMode, RadiusContext, GRID_PER_DECADE,
};

use crate::error::{Error, Result};
use crate::hamiltonian::HamburgerHamiltonian;
use crate::monodromy::log_max_on_circle;
use crate::hamiltonian::split_call;
use crate::regvar::{nonincreasing_smoothening, parse_num, running_sup_threshold_ln, ComparisonFunction, Monotonicity, PowerLog};

/// Indices below this use the exact prefix table for the telescope sum.
pub const TELESCOPE_DIRECT: usize = 1 << 20;

/// The majorants `d_l, d_φ, c_l, c_φ` and the reference angle `ψ`.
#[derive(Clone)]
pub struct ComparisonData {
    pub d_l: ComparisonFunction,
    pub d_phi: ComparisonFunction,
    pub c_l: ComparisonFunction,
    pub c_phi: ComparisonFunction,
    pub psi: f64,
    telescope: Arc<Mutex<Vec<f64>>>,
}

impl std::fmt::Debug for ComparisonData {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ComparisonData")
            .field("d_l", &self.d_l)
            .field("d_phi", &self.d_phi)
            .field("c_l", &self.c_l)
            .field("c_phi", &self.c_phi)
            .field("psi", &self.psi)
            .finish()
    }
}

// Sample points in u = ln t used for the structural checks.
fn probe_grid() -> impl Iterator<Item = f64> {
    (0..=400).map(|i| {
        let x = i as f64 / 400.0;
        // dense near u = 0, reaching u = 700
        700.0 * x * x
    })
}

impl ComparisonData {
    /// Validates monotonicity, `d_φ ≤ 1` and `c_φ ≤ c_l` on a probe grid.
    pub fn new(
        d_l: ComparisonFunction,
        d_phi: ComparisonFunction,
        c_l: ComparisonFunction,
        c_phi: ComparisonFunction,
        psi: f64,
    ) -> Result<Self> {
        for (name, f) in [("d_l", &d_l), ("d_phi", &d_phi), ("c_l", &c_l), ("c_phi", &c_phi)] {
            let mut prev = f64::INFINITY;
            for u in probe_grid() {
                let v = f.ln_at_ln(u);
                if v.is_nan() {
                    return Err(Error::Validation(format!("{name} is not defined at t = e^{u}")));
                }
                if v > prev + 1e-12 * prev.abs().max(1.0) {
                    return Err(Error::Validation(format!("{name} = {f} increases near t = e^{u:.3}")));
                }
                prev = v;
            }
        }
        for u in probe_grid() {
            if d_phi.ln_at_ln(u) > 1e-12 {
                return Err(Error::Validation(format!("d_phi exceeds 1 near t = e^{u:.3}")));
            }
            if c_phi.ln_at_ln(u) > c_l.ln_at_ln(u) + 1e-12 {
                return Err(Error::Validation(format!("c_phi exceeds c_l near t = e^{u:.3}")));
            }
        }
        let mark = |f: ComparisonFunction| f.with_monotonicity(Monotonicity::Nonincreasing);
        Ok(ComparisonData {
            d_l: mark(d_l),
            d_phi: mark(d_phi),
            c_l: mark(c_l),
            c_phi: mark(c_phi),
            psi,
            telescope: Arc::new(Mutex::new(vec![0.0, 0.0])),
        })
    }

    /// Majorants that hold with constant one for `l_j = j^{-α}`,
    /// `φ_j = (-1)^j j^{-β}`.
    pub fn example_b6(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha > 1.0) || !(beta >= 0.0) {
            return Err(Error::Validation(format!("need alpha > 1 and beta >= 0, got ({alpha}, {beta})")));
        }
        let d_l = ComparisonFunction::power(-alpha);
        // |φ_{j+1} − φ_j| ≤ j^{-β} + (j+1)^{-β} ≤ 2 j^{-β}
        let d_phi = ComparisonFunction::powerlog(PowerLog::new(2.0, -beta, 0.0)?).capped(1.0);
        let c_l = ComparisonFunction::powerlog(PowerLog::new(1.0 / (alpha - 1.0), 1.0 - alpha, 0.0)?);
        let c_phi = if beta > 0.0 {
            let e = alpha + 2.0 * beta - 1.0;
            ComparisonFunction::powerlog(PowerLog::new(1.0 / e, -e, 0.0)?).min_with(&c_l)
        } else {
            c_l.scaled(1f64.sin().powi(2))
        };
        Self::new(d_l, d_phi, c_l, c_phi, 0.0)
    }

    /// `d_l = c t^{-δ_l}`, `d_φ = min{c t^{-δ_φ}, 1}`, `c_l = c t^{-γ_l}`,
    /// `c_φ = min{c t^{-γ_φ}, c_l}`.
    pub fn power_law(delta_l: f64, delta_phi: f64, gamma_l: f64, gamma_phi: f64, c: f64) -> Result<Self> {
        if [delta_l, delta_phi, gamma_l, gamma_phi].iter().any(|e| !(*e >= 0.0)) || !(c > 0.0) {
            return Err(Error::Validation("power-law exponents must be nonnegative and c positive".into()));
        }
        let p = |a: f64| PowerLog::new(c, -a, 0.0).map(ComparisonFunction::powerlog);
        let c_l = p(gamma_l)?;
        Self::new(p(delta_l)?, p(delta_phi)?.capped(1.0), c_l.clone(), p(gamma_phi)?.min_with(&c_l), 0.0)
    }

    /// Builds data from arbitrary regularly varying majorants, replacing
    /// each one that is not already nonincreasing by its monotone
    /// smoothening, capping `d_φ` at one and `c_φ` at `c_l`.
    pub fn from_majorants(
        d_l: ComparisonFunction,
        d_phi: ComparisonFunction,
        c_l: ComparisonFunction,
        c_phi: ComparisonFunction,
        psi: f64,
    ) -> Result<Self> {
        let fix = |f: ComparisonFunction| -> Result<ComparisonFunction> {
            if f.monotonicity() == Monotonicity::Nonincreasing || f.check_monotone_on_probe() {
                Ok(f)
            } else {
                nonincreasing_smoothening(&f)
            }
        };
        let c_l = fix(c_l)?;
        let c_phi = fix(c_phi)?.min_with(&c_l);
        Self::new(fix(d_l)?, fix(d_phi)?.capped(1.0), c_l, c_phi, psi)
    }

    /// Parses `example_b6(alpha, beta)`, `power_law(dl, dphi, gl, gphi[, c])`
    /// or `majorants(d_l, d_phi, c_l, c_phi)` with function expressions as
    /// arguments; relative table paths resolve against `base`.
    pub fn parse(src: &str, base: Option<&std::path::Path>) -> Result<Self> {
        let (name, args) = split_call(src)?;
        let nums = |n: &[usize]| -> Result<Vec<f64>> {
            if !n.contains(&args.len()) {
                return Err(Error::Parse(format!("{name} expects {n:?} arguments, got {}", args.len())));
            }
            args.iter().map(|a| parse_num(a)).collect()
        };
        match name.as_str() {
            "example_b6" => {
                let v = nums(&[2])?;
                Self::example_b6(v[0], v[1])
            }
            "power_law" => {
                let v = nums(&[4, 5])?;
                Self::power_law(v[0], v[1], v[2], v[3], v.get(4).copied().unwrap_or(1.0))
            }
            "majorants" => {
                if args.len() != 4 {
                    return Err(Error::Parse(format!("majorants expects 4 functions, got {}", args.len())));
                }
                let f: Vec<ComparisonFunction> =
                    args.iter().map(|a| ComparisonFunction::parse(a, base)).collect::<Result<_>>()?;
                Self::from_majorants(f[0].clone(), f[1].clone(), f[2].clone(), f[3].clone(), 0.0)
            }
            other => Err(Error::Parse(format!("unknown comparison data '{other}'"))),
        }
    }

    pub fn with_psi(mut self, psi: f64) -> Self {
        self.psi = psi;
        self
    }

    /// Multiplies each majorant by its constant when that constant exceeds
    /// one; smaller constants are left alone.
    pub fn rescaled(&self, k: &MajorizationReport) -> Result<Self> {
        let up = |f: &ComparisonFunction, c: f64| if c > 1.0 { f.scaled(c) } else { f.clone() };
        let c_l = up(&self.c_l, k.c_l.constant);
        Self::new(
            up(&self.d_l, k.d_l.constant),
            up(&self.d_phi, k.d_phi.constant).capped(1.0),
            c_l.clone(),
            up(&self.c_phi, k.c_phi.constant).min_with(&c_l),
            self.psi,
        )
    }

    /// `ln (d_φ/d_l)(t)` at `t = e^u`.
    pub(crate) fn ln_q(&self, u: f64) -> f64 {
        self.d_phi.ln_at_ln(u) - self.d_l.ln_at_ln(u)
    }

    /// `Σ_{j=1}^{m−1} |ln q(j) − ln q(j+1)|` for `q = d_φ/d_l`, `m = e^{ln_m}`.
    pub(crate) fn telescope(&self, ln_m: f64) -> f64 {
        let direct_ln = (TELESCOPE_DIRECT as f64).ln();
        if ln_m <= direct_ln + 1e-12 {
            let m = ln_m.exp().round().max(1.0) as usize;
            return self.telescope_prefix(m.min(TELESCOPE_DIRECT));
        }
        let head = self.telescope_prefix(TELESCOPE_DIRECT);
        // variation of the continuous ln q on a fine grid beyond the table
        let (a, b) = (direct_ln, ln_m);
        let decades = (b / a).log10();
        let n = (((b - a) / 0.05).ceil() as usize).clamp(64, 4096).max((64.0 * decades).ceil() as usize);
        let mut prev = self.ln_q(a);
        let mut var = 0.0;
        for i in 1..=n {
            let u = a * (b / a).powf(i as f64 / n as f64);
            let v = self.ln_q(u);
            var += (v - prev).abs();
            prev = v;
        }
        head + var
    }

    fn telescope_prefix(&self, m: usize) -> f64 {
        let mut table = self.telescope.lock().expect("telescope cache poisoned");
        if table.len() <= m {
            let target = m.max(2 * table.len()).min(TELESCOPE_DIRECT) + 1;
            let mut j = table.len() - 1;
            let mut acc = table[j];
            let mut prev = self.ln_q((j as f64).ln());
            while table.len() < target {
                let next = self.ln_q(((j + 1) as f64).ln());
                acc += (prev - next).abs();
                prev = next;
                j += 1;
                table.push(acc);
            }
        }
        table[m]
    }
}

trait ProbeMonotone {
    fn check_monotone_on_probe(&self) -> bool;
}

impl ProbeMonotone for ComparisonFunction {
    fn check_monotone_on_probe(&self) -> bool {
        let mut prev = f64::INFINITY;
        for u in probe_grid() {
            let v = self.ln_at_ln(u);
            if v > prev + 1e-12 * prev.abs().max(1.0) {
                return false;
            }
            prev = v;
        }
        true
    }
}

/// Smallest constant `C` with `lhs ≤ C·rhs` on the checked range, and where
/// it is attained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConstantCheck {
    pub constant: f64,
    pub witness: usize,
}

/// Constants for the four majorization hypotheses on `1 ≤ j, N ≤ n_check`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MajorizationReport {
    pub n_check: usize,
    pub d_l: ConstantCheck,
    pub d_phi: ConstantCheck,
    pub c_l: ConstantCheck,
    pub c_phi: ConstantCheck,
}

impl MajorizationReport {
    /// True when the strict form (all constants at most one) holds.
    pub fn strict(&self) -> bool {
        [self.d_l, self.d_phi, self.c_l, self.c_phi].iter().all(|c| c.constant <= 1.0 + 1e-9)
    }
}

fn sup_ratio(name: &str, ratios: &[f64]) -> Result<ConstantCheck> {
    let mut best = ConstantCheck { constant: 0.0, witness: 1 };
    for (i, r) in ratios.iter().enumerate() {
        if r.is_nan() {
            return Err(Error::Hypothesis { which: name.into(), witness: i + 1, ratio: f64::NAN });
        }
        if *r > best.constant {
            best = ConstantCheck { constant: *r, witness: i + 1 };
        }
    }
    // maxima over dyadic blocks; steady doubling signals an unbounded ratio
    // octaves (N/2, N], (N/4, N/2], ... counted down from the top
    let mut blocks = Vec::new();
    let mut hi = ratios.len();
    while hi >= 2 {
        let lo = hi / 2;
        blocks.push(ratios[lo..hi].iter().cloned().fold(0.0, f64::max));
        hi = lo;
    }
    if blocks.len() >= 4 && blocks[0] > 2.0 * blocks[1] && blocks[1] > 2.0 * blocks[2] {
        return Err(Error::Hypothesis { which: name.into(), witness: best.witness, ratio: best.constant });
    }
    Ok(best)
}

/// Smallest constants making `l_j ≤ C d_l(j)`, `|sin(φ_{j+1}−φ_j)| ≤ C d_φ(j)`,
/// `Σ_{j>N} l_j ≤ C c_l(N)` and `Σ_{j>N} l_j sin²(φ_j−ψ) ≤ C c_φ(N)` hold
/// for `j, N ≤ n_check`. Tail sums are exact up to `64·n_check`; beyond,
/// the Hamiltonian's own tail majorant is used, weighted for the `c_φ` sum
/// by the mean `sin²` over the last stored block.
pub fn check_majorization(h: &HamburgerHamiltonian, data: &ComparisonData, n_check: usize) -> Result<MajorizationReport> {
    if n_check == 0 {
        return Err(Error::Validation("n_check must be positive".into()));
    }
    let mut m = 64 * n_check;
    if let Some(a) = h.available() {
        if a < n_check + 1 {
            return Err(Error::Range(format!("need {} intervals, {a} available", n_check + 1)));
        }
        m = m.min(a);
    }
    let (l, p) = h.params(m)?;
    let ld: Vec<f64> = (1..=n_check).map(|j| l[j - 1] / data.d_l.eval(j as f64)).collect();
    let pd: Vec<f64> =
        (1..=n_check).map(|j| (p[j] - p[j - 1]).sin().abs() / data.d_phi.eval(j as f64)).collect();
    let s2: Vec<f64> = p.iter().map(|x| (x - data.psi).sin().powi(2)).collect();
    let rest = h.tail_majorant(m);
    let block = (m / 2).max(1);
    let (wl, ws): (f64, f64) =
        (m - block..m).fold((0.0, 0.0), |acc, i| (acc.0 + l[i], acc.1 + l[i] * s2[i]));
    let mean_s2 = if wl > 0.0 { ws / wl } else { 1.0 };
    let mut tail_l = vec![0.0; m + 1];
    let mut tail_s = vec![0.0; m + 1];
    tail_l[m] = rest;
    tail_s[m] = rest * mean_s2;
    for n in (0..m).rev() {
        tail_l[n] = tail_l[n + 1] + l[n];
        tail_s[n] = tail_s[n + 1] + l[n] * s2[n];
    }
    let cl: Vec<f64> = (1..=n_check).map(|n| tail_l[n] / data.c_l.eval(n as f64)).collect();
    let cp: Vec<f64> = (1..=n_check).map(|n| tail_s[n] / data.c_phi.eval(n as f64)).collect();
    Ok(MajorizationReport {
        n_check,
        d_l: sup_ratio("l_j <= d_l(j)", &ld)?,
        d_phi: sup_ratio("|sin(phi_{j+1} - phi_j)| <= d_phi(j)", &pd)?,
        c_l: sup_ratio("sum_{j>N} l_j <= c_l(N)", &cl)?,
        c_phi: sup_ratio("sum_{j>N} l_j sin^2(phi_j - psi) <= c_phi(N)", &cp)?,
    })
}

/// Reference angle on a 64-point grid in `[0, π)` minimizing the empirical
/// tail sum `Σ_{n0<j≤n} l_j sin²(φ_j − ψ)`.
pub fn auto_psi(h: &HamburgerHamiltonian, n0: usize, n: usize) -> Result<f64> {
    let (l, p) = h.params(n)?;
    let cost = |psi: f64| -> f64 { (n0..n).map(|i| l[i] * (p[i] - psi).sin().powi(2)).sum() };
    let mut best = (0.0, f64::INFINITY);
    for k in 0..64 {
        let psi = std::f64::consts::PI * k as f64 / 64.0;
        let c = cost(psi);
        if c < best.1 {
            best = (psi, c);
        }
    }
    Ok(best.0)
}

/// `ln [1/(d_l d_φ)]^-(R)`, the generalized inverse with the running sup.
pub fn lower_bound_ln(d_l: &ComparisonFunction, d_phi: &ComparisonFunction, r: f64) -> Result<f64> {
    let ln_r = r.ln();
    let big = 700.0;
    if -(d_l.ln_at_ln(big) + d_phi.ln_at_ln(big)) <= -(d_l.ln_at_ln(0.0) + d_phi.ln_at_ln(0.0)) {
        return Err(Error::Domain("1/(d_l d_phi) is not eventually increasing".into()));
    }
    let u = running_sup_threshold_ln(|u| -(d_l.ln_at_ln(u) + d_phi.ln_at_ln(u)) - ln_r);
    if u.is_infinite() {
        return Err(Error::Domain("1/(d_l d_phi) stays below R on the searched range".into()));
    }
    Ok(u)
}

/// `[1/(d_l d_φ)]^-(R)`.
pub fn lower_bound(d_l: &ComparisonFunction, d_phi: &ComparisonFunction, r: f64) -> Result<f64> {
    lower_bound_ln(d_l, d_phi, r).map(f64::exp)
}

/// One radius of the sandwich check.
#[derive(Debug, Clone, Serialize)]
pub struct SandwichRow {
    pub report: BoundReport,
    /// `ln M(R) / [1/(d_l d_φ)]^-(R)`.
    pub lower_ratio: f64,
    pub ok: bool,
}

/// Per-radius margins between the measured growth and both bounds.
#[derive(Debug, Clone, Serialize)]
pub struct SandwichReport {
    pub constants: MajorizationReport,
    pub rows: Vec<SandwichRow>,
    /// Radii where `B_upper − ln M < −ε`.
    pub failures: Vec<f64>,
}

/// Checks the hypotheses, rescales the data if needed, then compares the
/// grid-infimum upper bound and the lower comparison function against the
/// measured `ln M(R)`.
pub fn verify_bound_sandwich(
    h: &HamburgerHamiltonian,
    data: &ComparisonData,
    radii: &[f64],
    eps: f64,
    angles: usize,
    n_check: usize,
) -> Result<SandwichReport> {
    let constants = check_majorization(h, data, n_check)?;
    let used = if constants.strict() { data.clone() } else { data.rescaled(&constants)? };
    let rows: Vec<SandwichRow> = radii
        .par_iter()
        .map(|&r| -> Result<SandwichRow> {
            let mut rep = upper_bound_b(&used, r, BoundMode::GridInfimum)?;
            let m = log_max_on_circle(h, r, angles, eps)?;
            rep.attach_measurement(m.log_max);
            let margin = rep.margin_upper.unwrap_or(f64::NAN);
            Ok(SandwichRow { lower_ratio: m.log_max / rep.lower_dinv, ok: margin >= -eps, report: rep })
        })
        .collect::<Result<_>>()?;
    let failures = rows.iter().filter(|r| !r.ok).map(|r| r.report.r).collect();
    Ok(SandwichReport { constants, rows, failures })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::family_example_b6;
    use approx::assert_relative_eq;

    #[test]
    fn preset_is_strict_for_example_family() {
        for (a, b) in [(3.0, 1.0), (3.0, 0.0), (2.0, 0.0), (2.5, 0.5)] {
            let h = family_example_b6(a, b).unwrap().hamiltonian;
            let data = ComparisonData::example_b6(a, b).unwrap();
            let rep = check_majorization(&h, &data, 500).unwrap();
            assert!(rep.strict(), "({a},{b}): {rep:?}");
            assert!(rep.d_l.constant <= 1.0 + 1e-12 && rep.d_l.constant > 0.99);
        }
    }

    #[test]
    fn wrong_reference_angle_is_reported() {
        let h = family_example_b6(3.0, 1.0).unwrap().hamiltonian;
        let data = ComparisonData::example_b6(3.0, 1.0).unwrap().with_psi(std::f64::consts::FRAC_PI_2);
        match check_majorization(&h, &data, 256) {
            Err(Error::Hypothesis { which, .. }) => assert!(which.contains("c_phi")),
            other => panic!("expected a hypothesis violation, got {other:?}"),
        }
    }

    #[test]
    fn unit_angle_majorant_accepts_anything() {
        let h = HamburgerHamiltonian::new_validated(
            (1..=300).map(|j| (j as f64).powi(-2)).collect(),
            (1..=300).map(|j| (j as f64 * 1.7).sin() * 9.0).collect(),
        )
        .unwrap();
        let one = ComparisonFunction::constant(1.0);
        let data =
            ComparisonData::new(ComparisonFunction::power(-2.0), one.clone(), one.clone(), one.clone(), 0.0).unwrap();
        let rep = check_majorization(&h, &data, 200).unwrap();
        assert!(rep.d_phi.constant <= 1.0);
    }

    #[test]
    fn invalid_data_rejected() {
        let p = ComparisonFunction::power;
        assert!(ComparisonData::new(p(1.0), p(-1.0), p(-1.0), p(-1.0), 0.0).is_err());
        assert!(ComparisonData::new(p(-1.0), ComparisonFunction::constant(2.0), p(-1.0), p(-1.0), 0.0).is_err());
        assert!(ComparisonData::new(p(-1.0), p(-1.0), p(-2.0), p(-1.0), 0.0).is_err());
    }

    #[test]
    fn lower_bound_examples() {
        let p = ComparisonFunction::power;
        assert_relative_eq!(lower_bound(&p(-3.0), &p(-1.0), 1e4).unwrap(), 10.0, max_relative = 1e-9);
        assert_relative_eq!(lower_bound(&p(-1.0), &p(-1.0), 1e6).unwrap(), 1e3, max_relative = 1e-9);
        let f = p(-3.0).mul(&p(-1.0)).powf(-1.0);
        let t = 1e4;
        let back = lower_bound(&p(-3.0), &p(-1.0), f.eval(t)).unwrap();
        assert!((back / t - 1.0).abs() < 0.01);
        let one = ComparisonFunction::constant(1.0);
        assert!(lower_bound(&one, &one, 10.0).is_err());
    }

    #[test]
    fn telescope_of_monotone_quotient() {
        let data = ComparisonData::power_law(2.0, 0.5, 1.0, 1.0, 1.0).unwrap();
        // q = t^{1.5}: telescope equals |ln q(1) − ln q(m)|
        for m in [1usize, 2, 10, 1000, 1 << 20] {
            assert_relative_eq!(data.telescope((m as f64).ln()), 1.5 * (m as f64).ln(), max_relative = 1e-9, epsilon = 1e-12);
        }
        assert_relative_eq!(data.telescope(40.0), 1.5 * 40.0, max_relative = 1e-9);
    }

    #[test]
    fn auto_psi_finds_limit_angle() {
        let h = family_example_b6(3.0, 1.0).unwrap().hamiltonian;
        let shifted = h.map_angles(|a| a + 0.7);
        let psi = auto_psi(&shifted, 16, 2000).unwrap();
        assert!((psi - 0.7).abs() < std::f64::consts::PI / 64.0);
    }
}
