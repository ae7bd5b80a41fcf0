//! Power-log functions and regularly varying utilities: Karamata integrals,
//! generalized and asymptotic inverses, monotone smoothenings and index
//! estimation.

mod function;
mod inverse;
mod karamata;
mod powerlog;
mod smooth;

pub use function::{ComparisonFunction, Monotonicity, Table};
pub(crate) use function::parse_num;
pub use inverse::{generalized_inverse, generalized_inverse_ln, running_sup_threshold_ln, U_MAX};
pub use karamata::{head_integral, integrate_exp_ln, tail_integral, tail_integral_ln};
pub use powerlog::{AsymptoticInverse, PowerLog};
pub use smooth::{nonincreasing_smoothening, nonincreasing_smoothening_with};

use crate::error::{Error, Result};

/// Least-squares slope of `log f` against `log t` over the upper half of the
/// samples (sorted by `t`).
pub fn index_estimate(samples: &[(f64, f64)]) -> Result<f64> {
    if samples.len() < 8 {
        return Err(Error::InsufficientData(format!("{} samples, need at least 8", samples.len())));
    }
    let mut s: Vec<(f64, f64)> = samples.to_vec();
    s.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    if !(s[0].0 > 0.0) || s.last().unwrap().0 / s[0].0 < 1e3 * (1.0 - 1e-12) {
        return Err(Error::InsufficientData("samples must span at least three decades".into()));
    }
    let top = &s[s.len() / 2..];
    let n = top.len() as f64;
    let xs: Vec<f64> = top.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = top.iter().map(|p| p.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    Ok(sxy / sxx)
}

/// Samples `f` on a geometric grid from `t0` to `t1` with `per_decade` points.
pub fn geometric_samples(f: &ComparisonFunction, t0: f64, t1: f64, per_decade: usize) -> Vec<(f64, f64)> {
    let decades = (t1 / t0).log10();
    let n = ((decades * per_decade as f64).round() as usize).max(1);
    (0..=n)
        .map(|i| {
            let t = t0 * 10f64.powf(decades * i as f64 / n as f64);
            (t, f.eval(t))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_of_pure_power_and_constant() {
        let s = geometric_samples(&ComparisonFunction::power(-3.0), 1e2, 1e8, 8);
        assert!((index_estimate(&s).unwrap() + 3.0).abs() < 1e-9);
        let c = geometric_samples(&ComparisonFunction::constant(5.0), 1e2, 1e8, 8);
        assert!(index_estimate(&c).unwrap().abs() < 1e-12);
    }

    #[test]
    fn index_with_log_factor() {
        let f = ComparisonFunction::powerlog(PowerLog::new(1.0, 2.0, 1.0).unwrap());
        let e = index_estimate(&geometric_samples(&f, 1e3, 1e9, 8)).unwrap();
        assert!((2.0..=2.12).contains(&e), "{e}");
    }

    #[test]
    fn index_needs_data() {
        let s = geometric_samples(&ComparisonFunction::power(1.0), 1.0, 1e6, 1);
        assert!(index_estimate(&s).is_err());
        let s = geometric_samples(&ComparisonFunction::power(1.0), 1.0, 10.0, 20);
        assert!(index_estimate(&s).is_err());
    }
}
