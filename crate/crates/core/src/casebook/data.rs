use std::cmp::Ordering;

use super::form::{qi, rationalize, to_f64, AsymptoticForm, Q};
use crate::bounds::ComparisonData;
use crate::error::{Error, Result};
use crate::regvar::{ComparisonFunction, PowerLog};

/// Exponents of power-log majorants
/// `d_l = t^{-δ_l}(log t)^{-α_l}`, `d_φ = t^{-δ_φ}(log t)^{-α_φ}`,
/// `c_l = t^{-γ_l}(log t)^{-β_l}`, `c_φ = t^{-γ_φ}(log t)^{-β_φ}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExponentData {
    pub delta_l: Q,
    pub alpha_l: Q,
    pub delta_phi: Q,
    pub alpha_phi: Q,
    pub gamma_l: Q,
    pub beta_l: Q,
    pub gamma_phi: Q,
    pub beta_phi: Q,
}

/// `(a, b) ⪯ (a', b')` in the lexicographic order.
pub fn lex_le(a: (Q, Q), b: (Q, Q)) -> bool {
    a.cmp(&b) != Ordering::Greater
}

pub fn lex_lt(a: (Q, Q), b: (Q, Q)) -> bool {
    a.cmp(&b) == Ordering::Less
}

impl ExponentData {
    pub fn power_law(delta_l: Q, delta_phi: Q, gamma_l: Q, gamma_phi: Q) -> Self {
        let z = qi(0);
        ExponentData {
            delta_l,
            alpha_l: z,
            delta_phi,
            alpha_phi: z,
            gamma_l,
            beta_l: z,
            gamma_phi,
            beta_phi: z,
        }
    }

    pub fn delta(&self) -> Q {
        self.delta_l + self.delta_phi
    }

    pub fn alpha(&self) -> Q {
        self.alpha_l + self.alpha_phi
    }

    pub fn gamma(&self) -> Q {
        (self.gamma_l + self.gamma_phi) / qi(2)
    }

    pub fn beta(&self) -> Q {
        (self.beta_l + self.beta_phi) / qi(2)
    }

    /// `𝖣 = 1/(d_l d_φ)` as `t^δ (log t)^α`.
    pub fn d_form(&self) -> AsymptoticForm {
        AsymptoticForm::new(self.delta(), self.alpha(), qi(0))
    }

    /// `𝖢 = (c_l c_φ)^{-1/2}`.
    pub fn c_form(&self) -> AsymptoticForm {
        AsymptoticForm::new(self.gamma(), self.beta(), qi(0))
    }

    /// `1/d_l`.
    pub fn inv_dl_form(&self) -> AsymptoticForm {
        AsymptoticForm::new(self.delta_l, self.alpha_l, qi(0))
    }

    /// `d_φ/d_l`.
    pub fn ratio_form(&self) -> AsymptoticForm {
        AsymptoticForm::new(self.delta_l - self.delta_phi, self.alpha_l - self.alpha_phi, qi(0))
    }

    /// Nonincreasing majorants with these asymptotics and unit constants,
    /// `d_φ` capped at one and `c_φ` at `c_l`.
    pub fn comparison_data(&self) -> Result<ComparisonData> {
        let f = |d: Q, a: Q| -> Result<ComparisonFunction> {
            Ok(ComparisonFunction::powerlog(PowerLog::new(1.0, -to_f64(d), -to_f64(a))?))
        };
        ComparisonData::from_majorants(
            f(self.delta_l, self.alpha_l)?,
            f(self.delta_phi, self.alpha_phi)?,
            f(self.gamma_l, self.beta_l)?,
            f(self.gamma_phi, self.beta_phi)?,
            0.0,
        )
    }

    /// Reads exponents off numeric majorants by a least-squares fit of
    /// `ln f(e^u) = c − a u − b ln u` for `t ∈ [10², e^{200}]`, snapping `a`
    /// to denominators up to 24 and `b` to quarters.
    pub fn fit(data: &ComparisonData) -> Result<Self> {
        let one = |f: &ComparisonFunction| -> Result<(Q, Q)> {
            let (a, b) = fit_powerlog(f)?;
            Ok((rationalize(a, 24), rationalize((4.0 * b).round() / 4.0, 4)))
        };
        let (delta_l, alpha_l) = one(&data.d_l)?;
        let (delta_phi, alpha_phi) = one(&data.d_phi)?;
        let (gamma_l, beta_l) = one(&data.c_l)?;
        let (gamma_phi, beta_phi) = one(&data.c_phi)?;
        Ok(ExponentData { delta_l, alpha_l, delta_phi, alpha_phi, gamma_l, beta_l, gamma_phi, beta_phi })
    }
}

// Returns (a, b) with f ≈ C t^{-a} (log t)^{-b}.
fn fit_powerlog(f: &ComparisonFunction) -> Result<(f64, f64)> {
    let n = 64;
    let (u0, u1) = (100f64.ln(), 200.0);
    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        let u = u0 + (u1 - u0) * i as f64 / (n - 1) as f64;
        let y = f.ln_at_ln(u);
        if !y.is_finite() {
            return Err(Error::InsufficientData(format!("{f} is not finite at t = e^{u}")));
        }
        rows.push([1.0, -u, -u.ln(), y]);
    }
    // normal equations for three unknowns
    let mut m = [[0.0f64; 4]; 3];
    for r in &rows {
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] += r[i] * r[j];
            }
            m[i][3] += r[i] * r[3];
        }
    }
    for c in 0..3 {
        let p = (c..3).max_by(|&a, &b| m[a][c].abs().partial_cmp(&m[b][c].abs()).unwrap()).unwrap();
        m.swap(c, p);
        let piv = m[c][c];
        if piv.abs() < 1e-300 {
            return Err(Error::InsufficientData("singular exponent fit".into()));
        }
        for r in 0..3 {
            if r != c {
                let k = m[r][c] / piv;
                for j in c..4 {
                    m[r][j] -= k * m[c][j];
                }
            }
        }
    }
    Ok((m[1][3] / m[1][1], m[2][3] / m[2][2]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::casebook::form::q;

    #[test]
    fn derived_exponents() {
        let e = ExponentData::power_law(qi(3), qi(1), qi(2), qi(4));
        assert_eq!(e.delta(), qi(4));
        assert_eq!(e.gamma(), qi(3));
        assert_eq!(e.d_form(), AsymptoticForm::power(qi(4)));
        assert!(lex_lt((qi(1), qi(5)), (qi(2), qi(0))));
        assert!(lex_le((qi(2), qi(0)), (qi(2), qi(0))));
    }

    #[test]
    fn fit_recovers_powerlog_exponents() {
        let e = ExponentData {
            delta_l: q(3, 2),
            alpha_l: q(1, 2),
            delta_phi: q(1, 3),
            alpha_phi: qi(-1),
            gamma_l: q(1, 2),
            beta_l: qi(0),
            gamma_phi: qi(1),
            beta_phi: q(3, 4),
        };
        let d = e.comparison_data().unwrap();
        assert_eq!(ExponentData::fit(&d).unwrap(), e);
    }
}
