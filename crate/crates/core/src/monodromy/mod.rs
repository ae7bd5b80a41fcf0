//! Overflow-safe transfer-matrix products, maxima over circles `|z| = R`,
//! truncation control for infinite Hamiltonians and growth profiles.

mod matrix;

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

pub use matrix::{det, from_real, identity, mat_mul, spectral_norm, CMat2, ScaledMat2, C64};

use crate::error::{Error, Result};
use crate::hamiltonian::HamburgerHamiltonian;
use crate::regvar::ComparisonFunction;

/// Hard cap on the truncation index.
pub const TRUNCATION_CAP: usize = 10_000_000;
/// Default number of circle angles before adaptive doubling.
pub const DEFAULT_ANGLES: usize = 64;
/// Largest number of angles the doubling may reach.
pub const MAX_ANGLES: usize = 4096;

/// `ξ_φ ξ_φᵀ J` with `J = [[0, −1], [1, 0]]`.
pub fn rank_one(phi: f64) -> [[f64; 2]; 2] {
    let (s, c) = phi.sin_cos();
    [[c * s, -c * c], [s * s, -c * s]]
}

/// `W(z) = I + z·l·ξ_φ ξ_φᵀ J`.
pub fn transfer_matrix(l: f64, phi: f64, z: C64) -> CMat2 {
    let p = rank_one(phi);
    let mut w = identity();
    for (r, row) in p.iter().enumerate() {
        for (c, v) in row.iter().enumerate() {
            w[r][c] += z * (l * v);
        }
    }
    w
}

/// `Ω(a, ψ) = diag(a, 1/a)·exp(−ψJ)`.
pub fn omega_matrix(a: f64, psi: f64) -> [[f64; 2]; 2] {
    let (s, c) = psi.sin_cos();
    [[a * c, a * s], [-s / a, c / a]]
}

/// Precomputed `l_j ξ_{φ_j} ξ_{φ_j}ᵀ J` for a run of intervals.
#[derive(Debug, Clone)]
pub struct Factors {
    p: Vec<[f64; 4]>,
}

// Rescale only once entries leave this window; `normalize` finishes the job.
const LAZY_HI: f64 = 4294967296.0;

impl Factors {
    pub fn new(lengths: &[f64], angles: &[f64]) -> Self {
        let p = lengths
            .iter()
            .zip(angles)
            .map(|(l, phi)| {
                let m = rank_one(*phi);
                [l * m[0][0], l * m[0][1], l * m[1][0], l * m[1][1]]
            })
            .collect();
        Factors { p }
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    /// Product of factors `from+1 ..= to` (1-based intervals).
    pub fn product_range(&self, from: usize, to: usize, z: C64) -> ScaledMat2 {
        let mut m = identity();
        let mut e2: i64 = 0;
        for q in &self.p[from..to] {
            for row in m.iter_mut() {
                let (a, b) = (row[0], row[1]);
                row[0] = a + z * (a * q[0] + b * q[2]);
                row[1] = b + z * (a * q[1] + b * q[3]);
            }
            let big = m.iter().flatten().map(|c| c.re.abs().max(c.im.abs())).fold(0.0, f64::max);
            if big > LAZY_HI {
                let k = big.log2().ceil() as i32;
                let f = 2f64.powi(-k);
                for c in m.iter_mut().flatten() {
                    *c *= f;
                }
                e2 += k as i64;
            }
        }
        let mut out = ScaledMat2 { entries: m, logscale: e2 as f64 * std::f64::consts::LN_2 };
        out.normalize();
        out
    }

    pub fn product(&self, z: C64) -> ScaledMat2 {
        self.product_range(0, self.p.len(), z)
    }
}

/// `W(0, x_N; z) = W_1(z)⋯W_N(z)`.
pub fn monodromy_prefix(h: &HamburgerHamiltonian, n: usize, z: C64) -> Result<ScaledMat2> {
    let (l, p) = h.params(n)?;
    Ok(Factors::new(&l, &p).product(z))
}

/// `W(x_n, x_m; z) = W_{n+1}(z)⋯W_m(z)` for `n ≤ m`.
pub fn monodromy_range(h: &HamburgerHamiltonian, n: usize, m: usize, z: C64) -> Result<ScaledMat2> {
    if n > m {
        return Err(Error::Domain(format!("empty range {n} > {m}")));
    }
    let (l, p) = h.params(m)?;
    Ok(Factors::new(&l[n..], &p[n..]).product(z))
}

/// `½·ln(c_l/c_φ) + 2R·√(c_l c_φ)` from the values at `N`.
pub fn tail_bound_values(c_l: f64, c_phi: f64, r: f64) -> Result<f64> {
    if c_phi > c_l * (1.0 + 1e-12) {
        return Err(Error::Contract(format!("c_phi = {c_phi} exceeds c_l = {c_l}")));
    }
    Ok(0.5 * (c_l / c_phi).ln() + 2.0 * r * (c_l * c_phi).sqrt())
}

/// Log of the bound on `‖W(x_N, L; z)‖` for `|z| = R`.
pub fn tail_bound(c_l: &ComparisonFunction, c_phi: &ComparisonFunction, n: usize, r: f64) -> Result<f64> {
    let t = n.max(1) as f64;
    tail_bound_values(c_l.eval(t), c_phi.eval(t), r)
}

/// Smallest `N ≤ cap` with `bound(N) ≤ ε`, assuming `bound` nonincreasing.
fn smallest_admissible<B: Fn(usize) -> Result<f64>>(bound: B, eps: f64, cap: usize) -> Result<usize> {
    if bound(1)? <= eps {
        return Ok(1);
    }
    let mut hi = 2usize;
    loop {
        if bound(hi)? <= eps {
            break;
        }
        if hi >= cap {
            let b = bound(cap)?;
            return Err(Error::Cap(format!(
                "no truncation below {cap} reaches eps = {eps:e} (bound at cap {b:.4e}); the bound is trivial, ≳ R"
            )));
        }
        hi = (hi * 2).min(cap);
    }
    let mut lo = hi / 2;
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if bound(mid)? <= eps {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Smallest `N` whose tail bound at radius `R` is at most `ε`.
pub fn choose_truncation(c_l: &ComparisonFunction, c_phi: &ComparisonFunction, r: f64, eps: f64) -> Result<usize> {
    smallest_admissible(|n| tail_bound(c_l, c_phi, n, r), eps, TRUNCATION_CAP)
}

/// Truncation of `h` at radius `R` driven by its own tail majorant
/// (`c_l = c_φ`), together with the resulting additive error bound.
pub fn truncation_for(h: &HamburgerHamiltonian, r: f64, eps: f64) -> Result<(usize, f64)> {
    if let Some(n) = h.finite_len() {
        return Ok((n, 0.0));
    }
    let bound = |n: usize| Ok(2.0 * r * h.tail_majorant(n));
    let cap = h.available().unwrap_or(TRUNCATION_CAP).min(TRUNCATION_CAP);
    match smallest_admissible(bound, eps, cap) {
        Ok(n) => Ok((n, bound(n)?)),
        Err(Error::Cap(_)) if h.available().is_some() => Ok((cap, bound(cap)?)),
        Err(e) => Err(e),
    }
}

/// Result of maximizing `ln ‖W(0, x_N; R e^{iθ})‖` over `θ ∈ [0, π]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CircleMax {
    pub r: f64,
    pub log_max: f64,
    pub theta: f64,
    pub n_trunc: usize,
    pub trunc_eps: f64,
    pub k_angles: usize,
    pub converged: bool,
}

/// Maximum over `θ_k = kπ/K`, doubling `K` from `k` until successive maxima
/// differ by less than `ε/4`.
pub fn log_max_on_circle(h: &HamburgerHamiltonian, r: f64, k: usize, eps: f64) -> Result<CircleMax> {
    if k < 8 {
        return Err(Error::Validation(format!("need at least 8 angles, got {k}")));
    }
    if !(r >= 0.0) || !(eps > 0.0) {
        return Err(Error::Validation(format!("invalid radius {r} or eps {eps}")));
    }
    let (n, trunc_eps) = truncation_for(h, r, eps)?;
    let (l, p) = h.params(n)?;
    let f = Factors::new(&l, &p);
    Ok(circle_max_factors(&f, r, k, eps, n, trunc_eps))
}

fn circle_max_factors(f: &Factors, r: f64, k: usize, eps: f64, n: usize, trunc_eps: f64) -> CircleMax {
    let eval = |theta: f64| f.product(C64::from_polar(r, theta)).log_norm();
    let pick = |a: (f64, f64), b: (f64, f64)| if b.1 > a.1 { b } else { a };
    let mut kk = k;
    let mut best = (0..=kk)
        .into_par_iter()
        .map(|i| {
            let th = std::f64::consts::PI * i as f64 / kk as f64;
            (th, eval(th))
        })
        .reduce(|| (0.0, f64::NEG_INFINITY), pick);
    let mut converged = false;
    while kk < MAX_ANGLES.max(k) {
        let k2 = 2 * kk;
        let fresh = (0..kk)
            .into_par_iter()
            .map(|i| {
                let th = std::f64::consts::PI * (2 * i + 1) as f64 / k2 as f64;
                (th, eval(th))
            })
            .reduce(|| (0.0, f64::NEG_INFINITY), pick);
        let prev = best.1;
        best = pick(best, fresh);
        kk = k2;
        if best.1 - prev < eps / 4.0 {
            converged = true;
            break;
        }
    }
    CircleMax { r, log_max: best.1, theta: best.0, n_trunc: n, trunc_eps, k_angles: kk, converged }
}

/// Measured growth over a grid of radii.
#[derive(Debug, Clone, Serialize)]
pub struct GrowthProfile {
    pub radii: Vec<f64>,
    pub log_m: Vec<f64>,
    pub n_trunc: Vec<usize>,
    pub trunc_eps: Vec<f64>,
    pub k_angles: Vec<usize>,
    /// Slope of `ln ln M` against `ln R` over the upper half of the grid.
    pub order: f64,
    /// Median of `ln M(R)/R^ρ` over the top decade; heuristic only.
    pub log_type: f64,
}

impl GrowthProfile {
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["R", "logM", "N_trunc", "trunc_eps", "K_angles"])?;
        for i in 0..self.radii.len() {
            out.write_record(&[
                format!("{}", self.radii[i]),
                format!("{}", self.log_m[i]),
                self.n_trunc[i].to_string(),
                format!("{}", self.trunc_eps[i]),
                self.k_angles[i].to_string(),
            ])?;
        }
        out.flush()?;
        Ok(())
    }
}

/// `R_min·10^{i/ppd}` up to `R_max` inclusive.
pub fn geometric_grid(r_min: f64, r_max: f64, per_decade: usize) -> Vec<f64> {
    let decades = (r_max / r_min).log10();
    let n = (decades * per_decade as f64).round().max(1.0) as usize;
    (0..=n).map(|i| r_min * 10f64.powf(decades * i as f64 / n as f64)).collect()
}

/// Order from `(R, ln M)` pairs: slope of `ln ln M` vs `ln R` on the upper half.
pub fn order_estimate(radii: &[f64], log_m: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> = radii
        .iter()
        .zip(log_m)
        .filter(|(_, m)| **m > 0.0)
        .map(|(r, m)| (r.ln(), m.ln()))
        .collect();
    let top = &pts[pts.len() / 2..];
    if top.len() < 2 {
        return f64::NAN;
    }
    let n = top.len() as f64;
    let mx = top.iter().map(|p| p.0).sum::<f64>() / n;
    let my = top.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = top.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = top.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

/// Measures `ln M(R)` on `radii` and summarizes the growth.
pub fn growth_profile(h: &HamburgerHamiltonian, radii: &[f64], eps: f64, k: usize) -> Result<GrowthProfile> {
    if radii.len() < 2 || radii.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Validation("radii must be increasing with at least two points".into()));
    }
    if radii[radii.len() - 1] / radii[0] < 1e3 * (1.0 - 1e-9) {
        return Err(Error::Validation("the radius grid must span at least three decades".into()));
    }
    let rows: Vec<CircleMax> = radii.par_iter().map(|r| log_max_on_circle(h, *r, k, eps)).collect::<Result<_>>()?;
    let log_m: Vec<f64> = rows.iter().map(|c| c.log_max).collect();
    let order = order_estimate(radii, &log_m);
    let r_top = radii[radii.len() - 1] / 10.0;
    let mut ty: Vec<f64> = radii
        .iter()
        .zip(&log_m)
        .filter(|(r, _)| **r >= r_top * (1.0 - 1e-12))
        .map(|(r, m)| m / r.powf(order))
        .collect();
    ty.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    let log_type = if ty.is_empty() { f64::NAN } else { ty[ty.len() / 2] };
    Ok(GrowthProfile {
        radii: radii.to_vec(),
        log_m,
        n_trunc: rows.iter().map(|c| c.n_trunc).collect(),
        trunc_eps: rows.iter().map(|c| c.trunc_eps).collect(),
        k_angles: rows.iter().map(|c| c.k_angles).collect(),
        order,
        log_type,
    })
}

/// Log of the right side of the dilated product estimate: with
/// `a_j ∈ (0, 1]`,
/// `‖W(0,x_N;z)‖ ≤ (a_1 a_N)^{-1} ∏(1+|z| l_j a_j²) ∏(max{a_j/a_{j+1}, a_{j+1}/a_j}|cos Δ| + |sin Δ|/(a_j a_{j+1}))`.
pub fn dilated_product_log_bound(lengths: &[f64], angles: &[f64], a: &[f64], r: f64) -> f64 {
    let n = lengths.len();
    assert!(n > 0 && angles.len() == n && a.len() == n);
    let mut s = -(a[0].ln() + a[n - 1].ln());
    for j in 0..n {
        s += (r * lengths[j] * a[j] * a[j]).ln_1p();
    }
    for j in 0..n - 1 {
        let d = angles[j] - angles[j + 1];
        let q = (a[j] / a[j + 1]).max(a[j + 1] / a[j]);
        s += (q * d.cos().abs() + d.sin().abs() / (a[j] * a[j + 1])).ln();
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    fn close(a: &CMat2, b: [[f64; 2]; 2]) {
        for r in 0..2 {
            for c in 0..2 {
                assert!((a[r][c] - C64::new(b[r][c], 0.0)).norm() < 1e-14, "{a:?} vs {b:?}");
            }
        }
    }

    #[test]
    fn transfer_examples() {
        close(&transfer_matrix(1.0, 0.0, C64::new(2.0, 0.0)), [[1.0, -2.0], [0.0, 1.0]]);
        close(&transfer_matrix(0.5, FRAC_PI_2, C64::new(4.0, 0.0)), [[1.0, 0.0], [2.0, 1.0]]);
        close(&transfer_matrix(1.0, FRAC_PI_4, C64::new(1.0, 0.0)), [[1.5, -0.5], [0.5, 0.5]]);
        let w = transfer_matrix(0.3, 1.1, C64::new(-2.0, 5.0));
        assert!((det(&w) - C64::new(1.0, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn two_interval_product() {
        let h = HamburgerHamiltonian::new_validated(vec![1.0, 1.0], vec![0.0, FRAC_PI_2]).unwrap();
        let w = monodromy_prefix(&h, 2, C64::new(1.0, 0.0)).unwrap().to_mat().unwrap();
        close(&w, [[0.0, -1.0], [1.0, 1.0]]);
        let id = monodromy_prefix(&h, 0, C64::new(3.0, 0.0)).unwrap();
        assert_eq!(id, ScaledMat2::identity());
    }

    #[test]
    fn tail_bound_examples() {
        let c = ComparisonFunction::power(-1.0);
        assert_relative_eq!(tail_bound(&c, &c, 100, 10.0).unwrap(), 0.2, max_relative = 1e-14);
        assert_eq!(tail_bound(&c, &c, 100, 0.0).unwrap(), 0.0);
        let half = c.scaled(0.5);
        assert_relative_eq!(tail_bound(&c, &half, 7, 0.0).unwrap(), 0.5 * 2f64.ln(), max_relative = 1e-14);
        assert!(matches!(tail_bound(&half, &c, 7, 1.0), Err(Error::Contract(_))));
    }

    #[test]
    fn truncation_choice() {
        let c = ComparisonFunction::power(-1.0);
        let n = choose_truncation(&c, &c, 10.0, 0.21).unwrap();
        assert!(n <= 100 && tail_bound(&c, &c, n, 10.0).unwrap() <= 0.21);
        assert!(tail_bound(&c, &c, n - 1, 10.0).unwrap() > 0.21);
        assert_eq!(choose_truncation(&c, &c, 10.0, 1e3).unwrap(), 1);
        let flat = ComparisonFunction::constant(1.0);
        assert!(choose_truncation(&flat, &flat, 10.0, 1e-3).unwrap_err().is_cap());
    }

    #[test]
    fn single_interval_circle() {
        let h = HamburgerHamiltonian::new_validated(vec![1.0], vec![0.0]).unwrap();
        let m = log_max_on_circle(&h, 2.0, 16, 1e-6).unwrap();
        assert_relative_eq!(m.log_max, (1.0 + 2f64.sqrt()).ln(), max_relative = 1e-13);
        assert_eq!(log_max_on_circle(&h, 0.0, 16, 1e-6).unwrap().log_max, 0.0);
    }

    #[test]
    fn omega_examples() {
        assert_eq!(omega_matrix(1.0, 0.0), [[1.0, 0.0], [0.0, 1.0]]);
        for psi in [0.0, 0.4, 2.0, -1.3] {
            let n = spectral_norm(&from_real(omega_matrix(2.0, psi)));
            assert_relative_eq!(n, 2.0, max_relative = 1e-14);
        }
    }

    #[test]
    fn grid_shape() {
        let g = geometric_grid(1e2, 1e5, 4);
        assert_eq!(g.len(), 13);
        assert_relative_eq!(g[12], 1e5, max_relative = 1e-12);
    }
}
