use super::function::ComparisonFunction;
use crate::error::{Error, Result};

/// Running infimum of `f` on a geometric grid, interpolated linearly in `t`.
/// Beyond the grid the value is `min(f, last)`, which stays nonincreasing
/// for eventually nonincreasing `f`.
#[derive(Clone)]
pub(crate) struct Smoothed {
    t: Vec<f64>,
    s: Vec<f64>,
    base: ComparisonFunction,
}

impl Smoothed {
    pub(crate) fn ln_at_ln(&self, u: f64) -> f64 {
        let n = self.t.len();
        let t = u.exp();
        if t <= self.t[0] {
            return self.s[0].ln();
        }
        if t >= self.t[n - 1] {
            return self.base.ln_at_ln(u).min(self.s[n - 1].ln());
        }
        let i = self.t.partition_point(|x| *x <= t);
        let (t0, t1, s0, s1) = (self.t[i - 1], self.t[i], self.s[i - 1], self.s[i]);
        (s0 + (s1 - s0) * (t - t0) / (t1 - t0)).ln()
    }
}

/// Nonincreasing continuous smoothening on `[1, 10^15]` with 40 points per
/// decade.
pub fn nonincreasing_smoothening(f: &ComparisonFunction) -> Result<ComparisonFunction> {
    nonincreasing_smoothening_with(f, 1e15, 40)
}

pub fn nonincreasing_smoothening_with(
    f: &ComparisonFunction,
    t_max: f64,
    per_decade: usize,
) -> Result<ComparisonFunction> {
    match f.index() {
        Some(a) if a > 1e-12 => {
            return Err(Error::Contract(format!("smoothening needs index ≤ 0, got {a}")));
        }
        None => return Err(Error::Contract("smoothening needs a declared index".into())),
        _ => {}
    }
    let n = ((t_max.log10() * per_decade as f64).ceil() as usize).max(2);
    let t: Vec<f64> = (0..=n).map(|i| 10f64.powf(t_max.log10() * i as f64 / n as f64)).collect();
    let mut s = Vec::with_capacity(t.len());
    let mut run = f64::INFINITY;
    for &ti in &t {
        run = run.min(f.eval(ti));
        s.push(run);
    }
    Ok(ComparisonFunction::smoothed(Smoothed { t, s, base: f.clone() }, f.index()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regvar::Monotonicity;
    use approx::assert_relative_eq;

    #[test]
    fn identity_on_monotone_input() {
        let f = ComparisonFunction::power(-1.0);
        let s = nonincreasing_smoothening(&f).unwrap();
        for t in [1.0, 3.0, 1e5, 1e14, 1e20] {
            assert_relative_eq!(s.eval(t), f.eval(t), max_relative = 0.03);
        }
        assert!(s.check_monotonicity(1e20, 2000));
    }

    #[test]
    fn envelope_of_perturbed_reciprocal() {
        let f = ComparisonFunction::from_fn(
            |t: f64| (1.0 + 0.1 * t.sin()) / t,
            "wiggle",
            Some(-1.0),
            Monotonicity::None,
        );
        let s = nonincreasing_smoothening_with(&f, 1e9, 40).unwrap();
        let n = 360;
        let mut prev = f64::INFINITY;
        for i in 0..=n {
            let t = 10f64.powf(9.0 * i as f64 / n as f64);
            let v = s.eval(t);
            assert!(v <= prev * (1.0 + 1e-12));
            prev = v;
            let r = v / f.eval(t);
            assert!(r >= 0.9 / 1.1 - 1e-12 && r <= 1.0 + 1e-12, "t={t} r={r}");
        }
        // the scaled smoothening is again nonincreasing
        assert!(s.scaled(2.0).check_monotonicity(1e9, 500));
    }

    #[test]
    fn rejects_positive_index() {
        assert!(nonincreasing_smoothening(&ComparisonFunction::power(1.0)).is_err());
    }
}
