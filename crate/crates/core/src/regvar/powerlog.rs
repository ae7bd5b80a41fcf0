use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const E: f64 = std::f64::consts::E;

/// `c · t^a · (log t)^b · (log log t)^e`.
///
/// The double-log slot `e` is zero for the plain power-log scale. The domain
/// start is where every present log factor is at least one: `1` for pure
/// powers, `e` once `b ≠ 0`, and `e^e` once `e ≠ 0`. Evaluation below the
/// domain start clamps to the value there.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLog {
    pub coef: f64,
    pub power: f64,
    pub logpower: f64,
    #[serde(default)]
    pub loglog: f64,
}

impl PowerLog {
    pub fn new(coef: f64, power: f64, logpower: f64) -> Result<Self> {
        Self::with_loglog(coef, power, logpower, 0.0)
    }

    pub fn with_loglog(coef: f64, power: f64, logpower: f64, loglog: f64) -> Result<Self> {
        if !(coef > 0.0) || !coef.is_finite() {
            return Err(Error::Validation(format!("power-log coefficient must be positive, got {coef}")));
        }
        if !(power.is_finite() && logpower.is_finite() && loglog.is_finite()) {
            return Err(Error::Validation("power-log exponents must be finite".into()));
        }
        Ok(PowerLog { coef, power, logpower, loglog })
    }

    /// Pure power `t^a`.
    pub fn power(a: f64) -> Self {
        PowerLog { coef: 1.0, power: a, logpower: 0.0, loglog: 0.0 }
    }

    pub fn domain_start(&self) -> f64 {
        if self.loglog != 0.0 {
            E.powf(E)
        } else if self.logpower != 0.0 {
            E
        } else {
            1.0
        }
    }

    /// Evaluation that rejects arguments below the domain start.
    pub fn try_eval(&self, t: f64) -> Result<f64> {
        if !(t >= self.domain_start()) {
            return Err(Error::Domain(format!(
                "t = {t} below power-log domain start {}",
                self.domain_start()
            )));
        }
        Ok(self.eval(t))
    }

    /// Clamped evaluation.
    pub fn eval(&self, t: f64) -> f64 {
        self.ln_at_ln(t.ln()).exp()
    }

    pub fn ln_eval(&self, t: f64) -> f64 {
        self.ln_at_ln(t.ln())
    }

    /// `ln f(e^u)`, valid for astronomically large `t = e^u`.
    pub fn ln_at_ln(&self, u: f64) -> f64 {
        let u = u.max(self.domain_start().ln());
        let mut v = self.coef.ln() + self.power * u;
        if self.logpower != 0.0 {
            v += self.logpower * u.ln();
        }
        if self.loglog != 0.0 {
            v += self.loglog * u.ln().ln();
        }
        v
    }

    pub fn index(&self) -> f64 {
        self.power
    }

    pub fn mul(&self, g: &PowerLog) -> PowerLog {
        PowerLog {
            coef: self.coef * g.coef,
            power: self.power + g.power,
            logpower: self.logpower + g.logpower,
            loglog: self.loglog + g.loglog,
        }
    }

    pub fn div(&self, g: &PowerLog) -> PowerLog {
        PowerLog {
            coef: self.coef / g.coef,
            power: self.power - g.power,
            logpower: self.logpower - g.logpower,
            loglog: self.loglog - g.loglog,
        }
    }

    pub fn powf(&self, r: f64) -> PowerLog {
        PowerLog {
            coef: self.coef.powf(r),
            power: self.power * r,
            logpower: self.logpower * r,
            loglog: self.loglog * r,
        }
    }

    pub fn scale(&self, k: f64) -> PowerLog {
        PowerLog { coef: self.coef * k, ..*self }
    }

    pub fn recip(&self) -> PowerLog {
        self.powf(-1.0)
    }

    /// Asymptotic inverse for positive power.
    pub fn asymptotic_inverse(&self) -> Result<AsymptoticInverse> {
        if !(self.power > 0.0) {
            return Err(Error::NotInvertible(format!(
                "power-log with power {} has no asymptotic inverse",
                self.power
            )));
        }
        let rho = self.power;
        // rho^{b/rho} (t / (c (log t)^b (loglog t)^e))^{1/rho}
        let leading = PowerLog {
            coef: rho.powf(self.logpower / rho) * self.coef.powf(-1.0 / rho),
            power: 1.0 / rho,
            logpower: -self.logpower / rho,
            loglog: -self.loglog / rho,
        };
        Ok(AsymptoticInverse { target: *self, leading })
    }
}

impl std::fmt::Display for PowerLog {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}·t^{}", self.coef, self.power)?;
        if self.logpower != 0.0 {
            write!(f, "·(log t)^{}", self.logpower)?;
        }
        if self.loglog != 0.0 {
            write!(f, "·(log log t)^{}", self.loglog)?;
        }
        Ok(())
    }
}

/// Asymptotic inverse of a power-log with positive power.
///
/// `leading` is the closed form of the leading-order inverse. Evaluation
/// polishes that seed to the exact inverse of the target on its monotone
/// range, which is in particular an asymptotic inverse.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticInverse {
    pub target: PowerLog,
    pub leading: PowerLog,
}

impl AsymptoticInverse {
    pub fn leading_form(&self) -> PowerLog {
        self.leading
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.ln_at_ln(x.ln()).exp()
    }

    /// `ln a^-(e^w)`.
    pub fn ln_at_ln(&self, w: f64) -> f64 {
        let a = &self.target;
        let u0 = a.domain_start().ln();
        // the target is increasing where rho + b/u + e/(u ln u) > 0
        let mut lo = u0;
        let deriv = |u: f64| {
            let mut d = a.power;
            if a.logpower != 0.0 {
                d += a.logpower / u;
            }
            if a.loglog != 0.0 {
                d += a.loglog / (u * u.ln());
            }
            d
        };
        while deriv(lo.max(1e-300)) <= 0.0 && lo < 1e6 {
            lo = lo.max(1.0) * 1.5;
        }
        let f = |u: f64| a.ln_at_ln(u) - w;
        if f(lo) >= 0.0 {
            return lo;
        }
        let seed = self.leading.ln_at_ln(w).max(lo);
        let mut hi = seed.max(lo + 1.0);
        while f(hi) < 0.0 {
            hi = lo + 2.0 * (hi - lo);
            if !hi.is_finite() {
                return f64::INFINITY;
            }
        }
        // Newton from the seed, safeguarded by the bracket
        let mut u = seed.clamp(lo, hi);
        for _ in 0..200 {
            let fu = f(u);
            if fu.abs() <= 1e-15 * (1.0 + w.abs()) {
                return u;
            }
            if fu < 0.0 {
                lo = u;
            } else {
                hi = u;
            }
            let d = deriv(u);
            let mut next = u - fu / d;
            if !(next > lo && next < hi) || !next.is_finite() {
                next = 0.5 * (lo + hi);
            }
            if (hi - lo) <= 1e-15 * hi.abs().max(1.0) {
                return next;
            }
            u = next;
        }
        u
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn eval_examples() {
        assert_relative_eq!(PowerLog::power(2.0).eval(3.0), 9.0, max_relative = 1e-14);
        let l = PowerLog::new(1.0, 0.0, 1.0).unwrap();
        assert_relative_eq!(l.eval(E), 1.0, max_relative = 1e-14);
        let f = PowerLog::new(2.0, -3.0, 1.0).unwrap();
        assert_relative_eq!(f.try_eval(E * E).unwrap(), 4.0 * (-6f64).exp(), max_relative = 1e-13);
    }

    #[test]
    fn below_domain_is_rejected_or_clamped() {
        let f = PowerLog::new(1.0, 1.0, 1.0).unwrap();
        assert!(f.try_eval(2.0).is_err());
        assert_relative_eq!(f.eval(2.0), f.eval(E), max_relative = 1e-15);
        assert!(PowerLog::power(-1.0).try_eval(1.0).is_ok());
    }

    #[test]
    fn algebra() {
        let p = PowerLog::power(-2.0).mul(&PowerLog::power(-1.0));
        assert_eq!(p.power, -3.0);
        let dl = PowerLog::new(1.0, -2.0, -0.5).unwrap();
        let dp = PowerLog::new(1.0, -1.0, 1.5).unwrap();
        let q = dl.div(&dp);
        assert_eq!((q.power, q.logpower), (-1.0, -2.0));
        let r = dp.div(&dl);
        assert_eq!((r.power, r.logpower), (1.0, 2.0));
        let h = PowerLog::power(2.0).powf(0.5);
        assert_eq!(h.power, 1.0);
    }

    #[test]
    fn inverse_leading_forms() {
        let inv = PowerLog::power(2.0).asymptotic_inverse().unwrap();
        assert_eq!(inv.leading.power, 0.5);
        assert_relative_eq!(inv.eval(49.0), 7.0, max_relative = 1e-12);
        let a = PowerLog::new(1.0, 2.0, 1.0).unwrap();
        let inv = a.asymptotic_inverse().unwrap();
        assert_relative_eq!(inv.leading.coef, 2f64.sqrt(), max_relative = 1e-14);
        assert_eq!((inv.leading.power, inv.leading.logpower), (0.5, -0.5));
        let a3 = PowerLog::power(3.0).asymptotic_inverse().unwrap();
        assert_relative_eq!(PowerLog::power(3.0).eval(a3.eval(1e6)) / 1e6, 1.0, max_relative = 1e-12);
        assert!(PowerLog::power(-1.0).asymptotic_inverse().is_err());
    }
}
