use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::HamburgerHamiltonian;
use crate::error::{Error, Result};

/// Off-diagonal `b_n > 0` and diagonal `a_n`, indexed from `n = 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JacobiParameters {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

impl JacobiParameters {
    pub fn new(a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::Validation(format!("{} diagonal vs {} off-diagonal entries", a.len(), b.len())));
        }
        if let Some(n) = b.iter().position(|v| !(*v > 0.0) || !v.is_finite()) {
            return Err(Error::Validation(format!("b_{n} = {} must be positive", b[n])));
        }
        if let Some(n) = a.iter().position(|v| !v.is_finite()) {
            return Err(Error::Validation(format!("a_{n} is not finite")));
        }
        Ok(JacobiParameters { a, b })
    }

    pub fn len(&self) -> usize {
        self.b.len()
    }

    pub fn is_empty(&self) -> bool {
        self.b.is_empty()
    }

    /// Reads columns `n, a_n, b_n`.
    pub fn from_csv(path: &std::path::Path) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_path(path)?;
        let (mut a, mut b) = (Vec::new(), Vec::new());
        for rec in rdr.records() {
            let rec = rec?;
            if rec.len() < 3 {
                return Err(Error::Parse(format!("{}: expected columns n, a_n, b_n", path.display())));
            }
            a.push(crate::regvar::parse_num(&rec[1])?);
            b.push(crate::regvar::parse_num(&rec[2])?);
        }
        JacobiParameters::new(a, b)
    }
}

/// Angle increment taken mod π into `[0, π)`.
fn normalized_increment(d: f64) -> f64 {
    let r = d.rem_euclid(PI);
    if r >= PI {
        0.0
    } else {
        r
    }
}

/// Jacobi parameters of the first `count` recurrence rows.
///
/// Row `n` (0-based) uses intervals `n + 1` and `n + 2`, so `count + 1`
/// intervals are read. Row 0 has no predecessor interval and keeps only the
/// first cotangent.
pub fn jacobi_from_hamiltonian(h: &HamburgerHamiltonian, count: usize) -> Result<JacobiParameters> {
    let (l, phi) = h.params(count + 1)?;
    let mut a = Vec::with_capacity(count);
    let mut b = Vec::with_capacity(count);
    let mut prev_cot = 0.0;
    for n in 0..count {
        let d = normalized_increment(phi[n + 1] - phi[n]);
        let s = d.sin();
        if d == 0.0 || s <= 0.0 {
            return Err(Error::DegenerateAngle { n });
        }
        let cot = d.cos() / s;
        b.push(1.0 / (s * (l[n + 1] * l[n]).sqrt()));
        a.push(-(cot + prev_cot) / l[n]);
        prev_cot = cot;
    }
    JacobiParameters::new(a, b)
}

/// Hamiltonian with `count + 1` intervals whose Jacobi parameters are the
/// first `count` rows of `j`, normalized so that `l_1 = 1` and `φ_1 = 0`.
pub fn hamiltonian_from_jacobi(j: &JacobiParameters, count: usize) -> Result<HamburgerHamiltonian> {
    hamiltonian_from_jacobi_gauged(j, count, 1.0, 0.0)
}

/// As [`hamiltonian_from_jacobi`] with a prescribed first interval
/// `(l_1, φ_1)`; the remaining intervals are then uniquely determined.
pub fn hamiltonian_from_jacobi_gauged(
    j: &JacobiParameters,
    count: usize,
    l1: f64,
    phi1: f64,
) -> Result<HamburgerHamiltonian> {
    if count > j.len() {
        return Err(Error::Range(format!("{count} rows requested, {} given", j.len())));
    }
    if !(l1 > 0.0) {
        return Err(Error::Validation("gauge length must be positive".into()));
    }
    // (p_n, q_n) at z = 0, p_{-1} = 0, p_0 = 1, q_0 = 0, q_1 = 1/b_0; both
    // share a running scale e^{scale} to avoid overflow.
    let mut lengths = Vec::with_capacity(count + 1);
    let mut angles = Vec::with_capacity(count + 1);
    let (sl, cphi, sphi) = (l1.sqrt(), phi1.cos(), phi1.sin());
    let mut push = |p: f64, q: f64, scale: f64| -> Result<()> {
        // gauge map R(φ_1)·diag(√l_1, 1/√l_1)
        let (x, y) = (sl * p, q / sl);
        let (vx, vy) = (cphi * x - sphi * y, sphi * x + cphi * y);
        let l = (vx * vx + vy * vy) * (2.0 * scale).exp();
        if !(l.is_finite() && l > 0.0) {
            return Err(Error::Range(format!("recurrence left the floating-point range at row {}", lengths.len())));
        }
        lengths.push(l);
        angles.push(vy.atan2(vx).rem_euclid(PI));
        Ok(())
    };
    let (mut p_prev, mut p) = (0.0, 1.0);
    let (mut q_prev, mut q) = (0.0, 0.0);
    let mut scale = 0.0f64;
    push(p, q, scale)?;
    for n in 0..count {
        let bn = j.b[n];
        let an = j.a[n];
        let bm = if n == 0 { 0.0 } else { j.b[n - 1] };
        let p_next = -(an * p + bm * p_prev) / bn;
        let q_next = if n == 0 { (-(an * q) + (-scale).exp()) / bn } else { -(an * q + bm * q_prev) / bn };
        p_prev = p;
        p = p_next;
        q_prev = q;
        q = q_next;
        let m = p.abs().max(q.abs());
        if m > 1e100 || (m < 1e-100 && m > 0.0) {
            let k = m.ln().round();
            let f = (-k).exp();
            p *= f;
            q *= f;
            p_prev *= f;
            q_prev *= f;
            scale += k;
        }
        push(p, q, scale)?;
    }
    Ok(HamburgerHamiltonian::new_validated(lengths, angles)?.with_label("from_jacobi"))
}
