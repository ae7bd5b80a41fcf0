//! Numeric evaluation of the case sandwiches for arbitrary majorants. Every
//! function returns the natural log of the quantity at radius `R`.

use std::sync::{Arc, Mutex};

use crate::bounds::{ComparisonData, RadiusContext};
use crate::error::{Error, Result};
use crate::regvar::{integrate_exp_ln, running_sup_threshold_ln, tail_integral_ln, ComparisonFunction};

/// `R ↦ ln(bound at R)`.
pub type LnBound = Arc<dyn Fn(f64) -> Result<f64> + Send + Sync>;

/// Shared state for the side evaluators of one data set.
pub struct Sides {
    pub data: ComparisonData,
    sqrt_dd: ComparisonFunction,
    // (u, ∫_1^{e^u} 𝖣^{-1/2}) at unit steps, then 25% growth
    head: Mutex<Vec<(f64, f64)>>,
}

fn next_node(u: f64) -> f64 {
    if u < 32.0 {
        u.floor() + 1.0
    } else {
        u * 1.25
    }
}

impl Sides {
    pub fn new(data: ComparisonData) -> Arc<Self> {
        let sqrt_dd = data.d_l.mul(&data.d_phi).powf(0.5);
        Arc::new(Sides { data, sqrt_dd, head: Mutex::new(vec![(0.0, 0.0)]) })
    }

    /// `ln 𝖢(e^u)`.
    pub fn ln_c(&self, u: f64) -> f64 {
        -0.5 * (self.data.c_l.ln_at_ln(u) + self.data.c_phi.ln_at_ln(u))
    }

    /// `ln 𝖣(e^u)`.
    pub fn ln_d(&self, u: f64) -> f64 {
        -(self.data.d_l.ln_at_ln(u) + self.data.d_phi.ln_at_ln(u))
    }

    /// `∫_1^{e^u} 𝖣^{-1/2}`.
    pub fn head(&self, u: f64) -> f64 {
        if !(u > 0.0) {
            return 0.0;
        }
        let dens = |v: f64| self.sqrt_dd.ln_at_ln(v) + v;
        let mut nodes = self.head.lock().expect("poisoned");
        loop {
            let (cu, cv) = *nodes.last().unwrap();
            let nu = next_node(cu);
            if nu > u {
                break;
            }
            nodes.push((nu, cv + integrate_exp_ln(dens, cu, nu)));
        }
        let i = nodes.partition_point(|n| n.0 <= u) - 1;
        let (cu, cv) = nodes[i];
        cv + integrate_exp_ln(dens, cu, u)
    }

    /// `∫_{e^u}^∞ 𝖣^{-1/2}`.
    pub fn tail(&self, u: f64) -> Result<f64> {
        tail_integral_ln(&self.sqrt_dd, u)
    }

    fn ctx(&self, r: f64) -> Result<RadiusContext<'_>> {
        RadiusContext::new(&self.data, r)
    }

    pub fn ln_k(&self, r: f64) -> Result<f64> {
        Ok(self.ctx(r)?.ln_k)
    }

    pub fn ln_h(&self, r: f64) -> Result<f64> {
        Ok(self.ctx(r)?.ln_h)
    }

    /// `ln 𝖡(R)`: the value `𝗀(T(R), R)` at the crossing, which is the
    /// minimum over `t` of `max{𝗀(t,R), R/𝖢(t)}`.
    pub fn ln_frak_b(&self, r: f64) -> Result<f64> {
        let c = self.ctx(r)?;
        let u = c.solve_t_ln(1e-10)?;
        Ok(c.g_ln(u).max(c.ln_rc(u).exp()).ln())
    }

    /// `ln 𝖿(e^u)` for the case-A function `𝖿(t) = t𝖢(t) log[α t𝖢(t)/𝖣(t)]`.
    pub fn ln_case_a_f(&self, u: f64, alpha: f64) -> f64 {
        let lc = self.ln_c(u);
        u + lc + (alpha.ln() + u + lc - self.ln_d(u)).max(1e-300).ln()
    }

    /// `ln 𝖿^-(y)` from `ln y`, as the running-sup threshold.
    pub fn case_a_inverse_ln(&self, ln_y: f64, alpha: f64) -> f64 {
        running_sup_threshold_ln(|u| self.ln_case_a_f(u, alpha) - ln_y)
    }

    /// `ln(R/𝖢(f^-(R)))` for an increasing `ln f(e^u)`.
    pub fn ln_r_over_c_at_inverse<F: Fn(f64) -> f64>(&self, r: f64, ln_f: F) -> Result<f64> {
        let lr = r.ln();
        let u = running_sup_threshold_ln(|u| ln_f(u) - lr);
        if !u.is_finite() {
            return Err(Error::Cap(format!("inverse exceeds the search range at R = {r}")));
        }
        Ok(lr - self.ln_c(u))
    }

    /// `ln(R^{1/2} ∫_{k(R)}^∞ 𝖣^{-1/2})`.
    pub fn ln_sqrt_tail_at_k(&self, r: f64) -> Result<f64> {
        let k = self.ln_k(r)?;
        Ok(0.5 * r.ln() + self.tail(k)?.ln())
    }

    /// `ln(R h d_l(h))`; `−∞` when `h(R) = ∞`, where it is not defined.
    pub fn ln_r_h_dl(&self, r: f64) -> Result<f64> {
        let h = self.ln_h(r)?;
        if !h.is_finite() {
            return Ok(f64::NEG_INFINITY);
        }
        Ok(r.ln() + h + self.data.d_l.ln_at_ln(h))
    }

    /// `ln(R^{1/2} ∫_1^h 𝖣^{-1/2} + R ∫_h^∞ d_l)`.
    pub fn ln_d_upper(&self, r: f64) -> Result<f64> {
        let h = self.ln_h(r)?;
        if !h.is_finite() {
            return Err(Error::Divergence(format!("h(R) = ∞ at R = {r}")));
        }
        let a = r.sqrt() * self.head(h);
        let b = r * tail_integral_ln(&self.data.d_l, h)?;
        Ok((a + b).ln())
    }

    /// `ln(R ∫_{h(R)}^∞ d_l)`.
    pub fn ln_r_tail_dl(&self, r: f64) -> Result<f64> {
        let h = self.ln_h(r)?;
        if !h.is_finite() {
            return Err(Error::Divergence(format!("h(R) = ∞ at R = {r}")));
        }
        Ok(r.ln() + tail_integral_ln(&self.data.d_l, h)?.ln())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn head_matches_closed_form() {
        // 𝖣 = t^{3/2}: ∫_1^t s^{-3/4} ds = 4(t^{1/4} − 1)
        let d = ComparisonData::power_law(1.0, 0.5, 1.0, 1.0, 1.0).unwrap();
        let s = Sides::new(d);
        for t in [3.5f64, 40.0, 1e5, 1e12] {
            assert_relative_eq!(s.head(t.ln()), 4.0 * (t.powf(0.25) - 1.0), max_relative = 1e-9);
        }
        assert_relative_eq!(s.head(2f64.ln()), 4.0 * (2f64.powf(0.25) - 1.0), max_relative = 1e-9);
    }

    #[test]
    fn k_side_is_inverse_of_d() {
        let d = ComparisonData::power_law(2.0, 1.0, 2.0, 2.0, 1.0).unwrap();
        let s = Sides::new(d);
        // k(R) = (R/2)^{1/3}; ∫_k^∞ s^{-3/2} = 2 k^{-1/2}
        let r = 2e6;
        let k: f64 = 100.0;
        assert_relative_eq!(s.ln_k(r).unwrap(), k.ln(), max_relative = 1e-9);
        assert_relative_eq!(s.ln_sqrt_tail_at_k(r).unwrap(), (r.sqrt() * 2.0 / k.sqrt()).ln(), max_relative = 1e-9);
    }
}
