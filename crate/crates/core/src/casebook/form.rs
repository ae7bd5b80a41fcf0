use std::cmp::Ordering;
use std::fmt;

use num_rational::Rational64;

use crate::error::{Error, Result};
use crate::regvar::PowerLog;

pub type Q = Rational64;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(n, d)
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(n)
}

pub fn to_f64(x: Q) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}

/// Best rational approximation with denominator at most `max_den`, by
/// continued fractions.
pub fn rationalize(x: f64, max_den: i64) -> Q {
    if !x.is_finite() {
        return qi(0);
    }
    let (mut h0, mut h1) = (0i64, 1i64);
    let (mut k0, mut k1) = (1i64, 0i64);
    let mut r = x;
    for _ in 0..40 {
        let a = r.floor();
        let ai = a as i64;
        let h2 = ai.saturating_mul(h1).saturating_add(h0);
        let k2 = ai.saturating_mul(k1).saturating_add(k0);
        if k2 > max_den || k2 <= 0 {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = r - a;
        if frac.abs() < 1e-12 {
            break;
        }
        r = 1.0 / frac;
    }
    if k1 == 0 {
        return qi(x.round() as i64);
    }
    Q::new(h1, k1)
}

/// `R^p (log R)^q (log log R)^r` up to a constant factor, with rational
/// exponents. Comparison is lexicographic, which is the `≪` order of such
/// functions as `R → ∞`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AsymptoticForm {
    pub power: Q,
    pub log: Q,
    pub loglog: Q,
}

impl AsymptoticForm {
    pub fn new(power: Q, log: Q, loglog: Q) -> Self {
        AsymptoticForm { power, log, loglog }
    }

    pub fn power(p: Q) -> Self {
        Self::new(p, qi(0), qi(0))
    }

    pub fn one() -> Self {
        Self::power(qi(0))
    }

    pub fn index(&self) -> Q {
        self.power
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::new(self.power + o.power, self.log + o.log, self.loglog + o.loglog)
    }

    pub fn div(&self, o: &Self) -> Self {
        Self::new(self.power - o.power, self.log - o.log, self.loglog - o.loglog)
    }

    pub fn pow(&self, r: Q) -> Self {
        Self::new(self.power * r, self.log * r, self.loglog * r)
    }

    pub fn recip(&self) -> Self {
        self.pow(qi(-1))
    }

    pub fn growth_cmp(&self, o: &Self) -> Ordering {
        (self.power, self.log, self.loglog).cmp(&(o.power, o.log, o.loglog))
    }

    pub fn max(self, o: Self) -> Self {
        if self.growth_cmp(&o) == Ordering::Less {
            o
        } else {
            self
        }
    }

    /// Leading-order asymptotic inverse; needs a positive power.
    pub fn inverse(&self) -> Result<Self> {
        if self.power <= qi(0) {
            return Err(Error::NotInvertible(format!("{self} has no power-law inverse")));
        }
        let a = self.power;
        Ok(Self::new(a.recip(), -self.log / a, -self.loglog / a))
    }

    /// `self ∘ inner` for `inner` with positive power, using
    /// `log inner ≍ log R` and `log log inner ∼ log log R`.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if inner.power <= qi(0) {
            return Err(Error::NotInvertible(format!("cannot substitute {inner}: power must be positive")));
        }
        Ok(Self::new(
            self.power * inner.power,
            self.power * inner.log + self.log,
            self.power * inner.loglog + self.loglog,
        ))
    }

    pub fn to_powerlog(&self) -> PowerLog {
        PowerLog { coef: 1.0, power: to_f64(self.power), logpower: to_f64(self.log), loglog: to_f64(self.loglog) }
    }

    /// `ln` of the form at `R`, with the log factors frozen below their
    /// domain start.
    pub fn ln_eval(&self, r: f64) -> f64 {
        self.to_powerlog().ln_at_ln(r.ln())
    }
}

fn fmt_exp(x: Q) -> String {
    if x.is_integer() {
        format!("{}", x.numer())
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

impl fmt::Display for AsymptoticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let zero = qi(0);
        let one = qi(1);
        let mut parts = Vec::new();
        if self.power != zero {
            parts.push(if self.power == one { "R".to_string() } else { format!("R^({})", fmt_exp(self.power)) });
        }
        if self.log != zero {
            parts.push(if self.log == one { "log R".into() } else { format!("(log R)^({})", fmt_exp(self.log)) });
        }
        if self.loglog != zero {
            parts.push(if self.loglog == one {
                "log log R".into()
            } else {
                format!("(log log R)^({})", fmt_exp(self.loglog))
            });
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("·"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn continued_fractions() {
        assert_eq!(rationalize(0.25, 100), q(1, 4));
        assert_eq!(rationalize(2.0 / 3.0, 100), q(2, 3));
        assert_eq!(rationalize(0.3333334, 12), q(1, 3));
        assert_eq!(rationalize(-1.5, 10), q(-3, 2));
        assert_eq!(rationalize(3.0, 10), qi(3));
    }

    #[test]
    fn inverse_then_compose_is_identity() {
        let f = AsymptoticForm::new(q(3, 2), q(-1, 2), qi(1));
        let g = f.inverse().unwrap();
        let id = f.compose(&g).unwrap();
        assert_eq!(id, AsymptoticForm::power(qi(1)));
        assert!(AsymptoticForm::new(qi(0), qi(1), qi(0)).inverse().is_err());
    }

    #[test]
    fn ordering_and_display() {
        let a = AsymptoticForm::new(q(1, 2), qi(1), qi(0));
        let b = AsymptoticForm::new(q(1, 2), qi(0), qi(3));
        assert_eq!(a.growth_cmp(&b), Ordering::Greater);
        assert_eq!(a.max(b), a);
        assert_eq!(a.to_string(), "R^(1/2)·log R");
        assert_eq!(AsymptoticForm::one().to_string(), "1");
    }
}
