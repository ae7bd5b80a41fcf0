use std::cell::RefCell;
use std::f64::consts::LN_2;

use serde::Serialize;

use super::report::BoundReport;
use super::{lower_bound_ln, ComparisonData};
use crate::error::{Error, Result};
use crate::regvar::{integrate_exp_ln, running_sup_threshold_ln, U_MAX};

/// Points per decade of the infimum grid.
pub const GRID_PER_DECADE: usize = 64;
// Below this u the grid is geometric in t, above it geometric in u.
const U_SWITCH: f64 = 13.815510557964274; // ln 10^6
// Below this u, ⌈e^u⌉ and ⌊e^u⌋ are computed exactly.
const U_EXACT_INT: f64 = 36.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BoundMode {
    /// Evaluate at the crossing `t = T(R)`.
    AtT,
    /// Minimize over a geometric grid with golden-section refinement.
    GridInfimum,
}

/// Everything that depends on a fixed `R`, with `𝗀` evaluated incrementally
/// from cached checkpoints.
pub struct RadiusContext<'a> {
    pub data: &'a ComparisonData,
    pub r: f64,
    pub ln_r: f64,
    /// `ln k(R)` (may be `+∞`).
    pub ln_k: f64,
    /// `ln h(R)` (may be `+∞`).
    pub ln_h: f64,
    checkpoints: RefCell<Vec<(f64, f64)>>,
}

// Values within 1e-9 relative of an integer are taken as that integer, so
// that `t` and `h(R)` survive the round trip through `ln`.
fn snap(x: f64) -> f64 {
    let r = x.round();
    if (x - r).abs() <= 1e-9 * x.max(1.0) {
        r
    } else {
        x
    }
}

fn next_break(a: f64) -> f64 {
    if a < 32.0 {
        a.floor() + 1.0
    } else {
        a * 1.25
    }
}

impl<'a> RadiusContext<'a> {
    /// Requires `R ≥ 2/(d_l d_φ)(1)`.
    pub fn new(data: &'a ComparisonData, r: f64) -> Result<Self> {
        if !(r > 0.0) || !r.is_finite() {
            return Err(Error::Domain(format!("radius {r} must be positive and finite")));
        }
        let ln_r = r.ln();
        let ln_dd0 = data.d_l.ln_at_ln(0.0) + data.d_phi.ln_at_ln(0.0);
        if LN_2 - ln_r - ln_dd0 > 1e-12 {
            return Err(Error::Domain(format!(
                "R = {r} is below the threshold 2/(d_l d_phi)(1) = {}",
                (LN_2 - ln_dd0).exp()
            )));
        }
        let ln_k = running_sup_threshold_ln(|u| LN_2 - ln_r - data.d_l.ln_at_ln(u) - data.d_phi.ln_at_ln(u));
        let ln_h = running_sup_threshold_ln(|u| data.d_phi.ln_at_ln(u) - ln_r - data.d_l.ln_at_ln(u));
        debug_assert!(ln_k <= ln_h + 1e-9);
        Ok(RadiusContext { data, r, ln_r, ln_k, ln_h, checkpoints: RefCell::new(vec![(0.0, 0.0)]) })
    }

    fn ln_dd(&self, u: f64) -> f64 {
        self.data.d_l.ln_at_ln(u) + self.data.d_phi.ln_at_ln(u)
    }

    /// `ln(g(e^u)·e^u)` on the branch selected by `branch`.
    fn ln_density(&self, u: f64, branch: u8) -> f64 {
        match branch {
            0 => (self.ln_r + self.ln_dd(u)).max(1e-300).ln() + u,
            1 => 0.5 * (self.ln_r + self.ln_dd(u)) + u,
            _ => self.ln_r + self.data.d_l.ln_at_ln(u) + u,
        }
    }

    /// `∫_{e^a}^{e^b} g(s, R) ds`, split at `k(R)` and `h(R)`.
    fn piece(&self, a: f64, b: f64) -> f64 {
        if !(b > a) {
            return 0.0;
        }
        let cuts = [a, self.ln_k.clamp(a, b), self.ln_h.clamp(a, b), b];
        let mut total = 0.0;
        for (i, w) in cuts.windows(2).enumerate() {
            if w[1] > w[0] {
                total += integrate_exp_ln(|u| self.ln_density(u, i as u8), w[0], w[1]);
            }
        }
        total
    }

    /// `𝗀(e^u, R)`.
    pub fn g_ln(&self, u: f64) -> f64 {
        if !(u > 0.0) {
            return 0.0;
        }
        let mut cps = self.checkpoints.borrow_mut();
        loop {
            let (cu, _) = *cps.last().expect("nonempty");
            let nb = next_break(cu);
            if nb > u {
                break;
            }
            let v = cps.last().unwrap().1 + self.piece(cu, nb);
            cps.push((nb, v));
        }
        let i = cps.partition_point(|c| c.0 <= u) - 1;
        let (cu, cv) = cps[i];
        cv + self.piece(cu, u)
    }

    /// `ln(R √(c_l c_φ)(e^u))`.
    pub fn ln_rc(&self, u: f64) -> f64 {
        self.ln_r + 0.5 * (self.data.c_l.ln_at_ln(u) + self.data.c_phi.ln_at_ln(u))
    }

    /// `ln⌈t⌉` for `t = e^u`; the integer is exact below `e^36`.
    fn ln_ceil(u: f64) -> f64 {
        if u < U_EXACT_INT {
            snap(u.exp()).ceil().ln()
        } else {
            u
        }
    }

    fn ln_floor(u: f64) -> f64 {
        if u < U_EXACT_INT {
            snap(u.exp()).floor().ln()
        } else {
            u
        }
    }

    /// The remainder term `L(e^u, R)`.
    pub fn l_ln(&self, u: f64) -> f64 {
        let d = self.data;
        let lc = Self::ln_ceil(u.max(0.0));
        let ln_m = if self.ln_h.is_infinite() {
            lc
        } else {
            let lf = Self::ln_floor(self.ln_h);
            assert!(lf >= 0.0, "floor(h(R)) < 1 cannot occur when k(R) >= 1");
            lc.min(lf)
        };
        let pos = |x: f64| x.max(0.0);
        1.0 + pos(self.ln_r)
            + pos(d.c_l.ln_at_ln(lc) - d.c_phi.ln_at_ln(lc))
            + pos(d.d_l.ln_at_ln(0.0) - d.d_phi.ln_at_ln(0.0))
            + pos(d.d_l.ln_at_ln(ln_m) - d.d_phi.ln_at_ln(ln_m))
            + d.telescope(ln_m)
    }

    /// `max{𝗀, R√(c_l c_φ)} + L` at `t = e^u`.
    pub fn objective(&self, u: f64) -> f64 {
        self.g_ln(u).max(self.ln_rc(u).exp()) + self.l_ln(u)
    }

    fn decays(&self) -> bool {
        let d = self.data;
        let at = |u: f64| d.c_l.ln_at_ln(u) + d.c_phi.ln_at_ln(u);
        at(700.0) < at(0.0) - 1.0
    }

    /// `ln T(R)`: the crossing of `𝗀(·,R)` and `R√(c_l c_φ)(·)`, with
    /// residual at most `tol` relative.
    pub fn solve_t_ln(&self, tol: f64) -> Result<f64> {
        if !self.decays() {
            return Err(Error::Cap("c_l*c_phi does not decay: bound trivial ≳ R".into()));
        }
        let f = |u: f64| self.g_ln(u) - self.ln_rc(u).exp();
        let mut lo = 0.0;
        let mut hi = 1.0;
        while f(hi) < 0.0 {
            lo = hi;
            hi *= 2.0;
            if hi > U_MAX {
                return Err(Error::Cap(format!(
                    "no crossing below ln t = {U_MAX:e}: bound trivial ≳ R (R = {})",
                    self.r
                )));
            }
        }
        for _ in 0..400 {
            let mid = 0.5 * (lo + hi);
            let v = f(mid);
            let scale = self.ln_rc(mid).exp();
            if v.abs() <= tol * scale || hi - lo <= 2.0 * f64::EPSILON * hi.max(1.0) {
                return Ok(mid);
            }
            if v < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// Infimum of the objective on the grid and golden-section refinement.
    /// Returns `(u*, value)`.
    pub fn grid_infimum(&self, ln_t: f64, per_decade: usize, refine: bool) -> (f64, f64) {
        let step_t = std::f64::consts::LN_10 / per_decade as f64;
        let ratio_u = 10f64.powf(1.0 / per_decade as f64);
        let mut u_end = (ln_t + 4f64.ln()).max(if self.ln_h.is_finite() { self.ln_h } else { 0.0 }).min(U_MAX);
        let mut pts: Vec<(f64, f64)> = Vec::new();
        let mut u = 0.0;
        let mut i = 0usize;
        loop {
            while u <= u_end {
                pts.push((u, self.objective(u)));
                i += 1;
                u = if (i as f64) * step_t <= U_SWITCH { i as f64 * step_t } else { u * ratio_u };
            }
            let arg = pts
                .iter()
                .enumerate()
                .min_by(|a, b| a.1 .1.partial_cmp(&b.1 .1).unwrap_or(std::cmp::Ordering::Equal))
                .map(|x| x.0)
                .unwrap_or(0);
            if arg + 1 < pts.len() || u_end >= U_MAX {
                break;
            }
            u_end = (2.0 * u_end).max(u_end + 4f64.ln()).min(U_MAX);
        }
        let (ai, best) = pts
            .iter()
            .enumerate()
            .min_by(|a, b| a.1 .1.partial_cmp(&b.1 .1).unwrap_or(std::cmp::Ordering::Equal))
            .map(|(i, p)| (i, *p))
            .unwrap();
        if !refine {
            return best;
        }
        let a = pts[ai.saturating_sub(1)].0;
        let b = pts[(ai + 1).min(pts.len() - 1)].0;
        let mut out = best;
        let g = 0.5 * (5f64.sqrt() - 1.0);
        let (mut lo, mut hi) = (a, b);
        let mut x1 = hi - g * (hi - lo);
        let mut x2 = lo + g * (hi - lo);
        let mut f1 = self.objective(x1);
        let mut f2 = self.objective(x2);
        for _ in 0..60 {
            if f1 < out.1 {
                out = (x1, f1);
            }
            if f2 < out.1 {
                out = (x2, f2);
            }
            if f1 <= f2 {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - g * (hi - lo);
                f1 = self.objective(x1);
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + g * (hi - lo);
                f2 = self.objective(x2);
            }
            if hi - lo < 1e-12 * hi.max(1.0) {
                break;
            }
        }
        out
    }
}

fn finite_or_inf(ln: f64) -> f64 {
    if ln.is_infinite() {
        f64::INFINITY
    } else {
        ln.exp()
    }
}

/// `k(R) = sup{t : sup_{s≤t} 2/(R d_l d_φ(s)) ≤ 1} ∪ {1}`.
pub fn k_of_r(data: &ComparisonData, r: f64) -> Result<f64> {
    RadiusContext::new(data, r).map(|c| finite_or_inf(c.ln_k))
}

/// `h(R) = sup{t : sup_{s≤t} d_φ(s)/(R d_l(s)) ≤ 1} ∪ {1}`; requires
/// `R ≥ d_φ(1)/d_l(1)`.
pub fn h_of_r(data: &ComparisonData, r: f64) -> Result<f64> {
    let ln_r = r.ln();
    if data.d_phi.ln_at_ln(0.0) - ln_r - data.d_l.ln_at_ln(0.0) > 1e-12 {
        return Err(Error::Domain(format!("R = {r} is below d_phi(1)/d_l(1)")));
    }
    let u = running_sup_threshold_ln(|u| data.d_phi.ln_at_ln(u) - ln_r - data.d_l.ln_at_ln(u));
    Ok(finite_or_inf(u))
}

/// `𝗀(t, R) = ∫_1^t g(s, R) ds`.
pub fn g_integral(data: &ComparisonData, t: f64, r: f64) -> Result<f64> {
    if !(t >= 1.0) {
        return Err(Error::Domain(format!("t = {t} must be at least 1")));
    }
    Ok(RadiusContext::new(data, r)?.g_ln(t.ln()))
}

/// `L(t, R)`.
pub fn l_term(data: &ComparisonData, t: f64, r: f64) -> Result<f64> {
    if !(t >= 1.0) {
        return Err(Error::Domain(format!("t = {t} must be at least 1")));
    }
    Ok(RadiusContext::new(data, r)?.l_ln(t.ln()))
}

/// `T(R)`, the unique solution of `𝗀(t,R) = R√(c_l c_φ)(t)`.
pub fn solve_t(data: &ComparisonData, r: f64, tol: f64) -> Result<f64> {
    RadiusContext::new(data, r)?.solve_t_ln(tol).map(f64::exp)
}

/// The bound `9·(max{𝗀, R√(c_l c_φ)} + L)` at `T(R)` or minimized over `t`.
pub fn upper_bound_b(data: &ComparisonData, r: f64, mode: BoundMode) -> Result<BoundReport> {
    upper_bound_b_with(data, r, mode, GRID_PER_DECADE, true)
}

pub(crate) fn upper_bound_b_with(
    data: &ComparisonData,
    r: f64,
    mode: BoundMode,
    per_decade: usize,
    refine: bool,
) -> Result<BoundReport> {
    let ctx = RadiusContext::new(data, r)?;
    let ln_t = ctx.solve_t_ln(1e-10)?;
    let g_t = ctx.g_ln(ln_t);
    let rc_t = ctx.ln_rc(ln_t).exp();
    let l_t = ctx.l_ln(ln_t);
    let at_t = g_t.max(rc_t) + l_t;
    let (u_star, b_def) = match mode {
        BoundMode::AtT => (ln_t, at_t),
        BoundMode::GridInfimum => {
            let (u, v) = ctx.grid_infimum(ln_t, per_decade, refine);
            if v <= at_t {
                (u, v)
            } else {
                (ln_t, at_t)
            }
        }
    };
    let lower_ln = lower_bound_ln(&data.d_l, &data.d_phi, r).unwrap_or(f64::NAN);
    Ok(BoundReport {
        r,
        k_r: finite_or_inf(ctx.ln_k),
        h_r: finite_or_inf(ctx.ln_h),
        t_r: ln_t.exp(),
        g_t,
        rc_t,
        l_t,
        b_upper: 9.0 * b_def,
        lower_dinv: lower_ln.exp(),
        log_m: None,
        margin_upper: None,
        mode,
        b_def,
        t_star: u_star.exp(),
        ln_k: ctx.ln_k,
        ln_h: ctx.ln_h,
        ln_t,
        small_r: ctx.ln_k < LN_2 || ln_t < LN_2,
    })
}
