use super::function::ComparisonFunction;
use super::index_estimate;
use crate::error::{Error, Result};
use crate::quad::integrate;

const REL_TOL: f64 = 1e-11;
const CUTOFF: f64 = 1e6;

/// `∫_{u0}^{u1} exp(h(u)) du`, with the range chunked so that each adaptive
/// piece spans at most one unit of `u` (below 32) or 25% growth beyond.
pub fn integrate_exp_ln<H: Fn(f64) -> f64>(h: H, u0: f64, u1: f64) -> f64 {
    if !(u1 > u0) {
        return 0.0;
    }
    let mut total = 0.0;
    let mut a = u0;
    while a < u1 {
        let b = if a < 32.0 { (a.floor() + 1.0).min(u1) } else { (a * 1.25).min(u1) };
        total += integrate(|u| h(u).exp(), a, b, REL_TOL);
        a = b;
    }
    total
}

/// `∫_1^x f`.
pub fn head_integral(f: &ComparisonFunction, x: f64) -> f64 {
    if !(x > 1.0) {
        return 0.0;
    }
    integrate_exp_ln(|u| f.ln_at_ln(u) + u, 0.0, x.ln())
}

/// `∫_t^∞ f`, by quadrature up to `max(t, 10⁶)` plus the Karamata remainder
/// `C·f(C)/(−(α+1))`. Index `−1` is handled by substituting `u = log s` and
/// repeating the construction on `u ↦ f(e^u)e^u`.
pub fn tail_integral(f: &ComparisonFunction, t: f64) -> Result<f64> {
    tail_integral_ln(f, t.max(1.0).ln())
}

/// `∫_{e^{u0}}^∞ f`.
pub fn tail_integral_ln(f: &ComparisonFunction, u0: f64) -> Result<f64> {
    let alpha = match f.index() {
        Some(a) => a,
        None => estimate_index_ln(|u| f.ln_at_ln(u), u0)?,
    };
    tail_generic(&|u| f.ln_at_ln(u), alpha, u0, true)
}

fn estimate_index_ln<H: Fn(f64) -> f64>(h: H, u0: f64) -> Result<f64> {
    let lo = u0.max(1e2f64.ln());
    let samples: Vec<(f64, f64)> = (0..=32)
        .map(|i| {
            let u = lo + (6.0 * std::f64::consts::LN_10) * i as f64 / 32.0;
            (u.exp(), h(u).exp())
        })
        .collect();
    index_estimate(&samples)
}

// `lnf` is ln f(e^u); integral of f over s ∈ [e^{u0}, ∞).
fn tail_generic(lnf: &dyn Fn(f64) -> f64, alpha: f64, u0: f64, allow_log_recursion: bool) -> Result<f64> {
    let tol = 1e-9;
    if alpha > -1.0 + tol {
        return Err(Error::Divergence(format!("tail integral of index {alpha} > -1")));
    }
    if alpha < -1.0 - tol {
        let uc = u0.max(CUTOFF.ln());
        let body = integrate_exp_ln(|u| lnf(u) + u, u0, uc);
        let rem = (uc + lnf(uc)).exp() / (-(alpha + 1.0));
        return Ok(body + rem);
    }
    if !allow_log_recursion {
        return Err(Error::Divergence("tail integral with iterated index -1".into()));
    }
    // s = e^u: ∫_{u0}^∞ f(e^u) e^u du, a tail integral in the variable u
    let v0 = u0.max(1.0).ln();
    let hv = |v: f64| {
        let u = v.exp();
        lnf(u) + u
    };
    let beta = estimate_index_ln(|v: f64| hv(v), v0)?;
    if beta > -1.0 + 1e-3 {
        return Err(Error::Divergence(format!(
            "index -1 tail with log-variable index {beta:.4} is not integrable"
        )));
    }
    let head = if u0 < 1.0 { integrate_exp_ln(|u| lnf(u) + u, u0, 1.0) } else { 0.0 };
    // integrate in u from max(u0,1) onward: ∫ exp(hv(ln u)) du
    Ok(head + tail_generic(&hv, beta, v0, false)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regvar::PowerLog;
    use approx::assert_relative_eq;

    #[test]
    fn head_of_square() {
        let f = ComparisonFunction::power(2.0);
        let x = 1e3;
        let v = head_integral(&f, x);
        assert_relative_eq!(v, (x * x * x - 1.0) / 3.0, max_relative = 1e-9);
        assert!((x * f.eval(x) / v - 3.0).abs() < 0.03);
    }

    #[test]
    fn tail_of_three_halves() {
        let f = ComparisonFunction::power(-1.5);
        for t in [1.0, 10.0, 1e5, 1e7, 1e20] {
            let v = tail_integral(&f, t).unwrap();
            assert_relative_eq!(v, 2.0 / t.sqrt(), max_relative = 1e-8);
            assert_relative_eq!(t * f.eval(t) / v, 0.5, max_relative = 1e-8);
        }
    }

    #[test]
    fn tail_index_minus_one_log_decay() {
        for alpha in [3.0, 5.0, 8.0] {
            let f = ComparisonFunction::powerlog(PowerLog::new(1.0, -1.0, -alpha / 2.0).unwrap());
            for t in [1e3, 1e8, 1e40] {
                let v = tail_integral(&f, t).unwrap();
                let exact = (t.ln()).powf(1.0 - alpha / 2.0) / (alpha / 2.0 - 1.0);
                assert_relative_eq!(v, exact, max_relative = 1e-6);
            }
        }
    }

    #[test]
    fn divergent_tails_are_errors() {
        assert!(tail_integral(&ComparisonFunction::power(-0.5), 10.0).is_err());
        assert!(tail_integral(&ComparisonFunction::power(-1.0), 10.0).is_err());
        let f = ComparisonFunction::powerlog(PowerLog::new(1.0, -1.0, -1.0).unwrap());
        assert!(tail_integral(&f, 10.0).is_err());
    }
}
