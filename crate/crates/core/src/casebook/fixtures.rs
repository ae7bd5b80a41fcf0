use std::fmt;

use rayon::prelude::*;

use super::data::{lex_le, lex_lt, ExponentData};
use super::form::{q, qi, AsymptoticForm, Q};
use super::sides::Sides;
use crate::bounds::{upper_bound_b, BoundMode};
use crate::error::{Error, Result};

/// The three power-log examples probing the boundary cases.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PowerLogExample {
    /// `γ = 0` with `L(t,R)` possibly dominating.
    B24,
    /// Case C with `δ = 2`, where the sandwich need not close.
    B36,
    /// The excluded boundary `(δ, γ) = (2, 0)`.
    B11,
}

impl PowerLogExample {
    pub fn name(&self) -> &'static str {
        match self {
            PowerLogExample::B24 => "ex-b24",
            PowerLogExample::B36 => "ex-b36",
            PowerLogExample::B11 => "ex-b11",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "ex-b24" | "b24" => Ok(PowerLogExample::B24),
            "ex-b36" | "b36" => Ok(PowerLogExample::B36),
            "ex-b11" | "b11" => Ok(PowerLogExample::B11),
            other => Err(Error::Parse(format!("unknown power-log example '{other}'"))),
        }
    }
}

impl fmt::Display for PowerLogExample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Parameters with the expected asymptotics of `B(R)` (the full bound,
/// including `L`) and of `𝖡(R)`.
#[derive(Debug, Clone)]
pub struct PowerLogFixture {
    pub example: PowerLogExample,
    pub branch: String,
    pub params: ExponentData,
    /// `None` where only `𝖡` is known.
    pub big_b: Option<AsymptoticForm>,
    pub frak_b: AsymptoticForm,
}

fn setting_ok(e: &ExponentData) -> Result<()> {
    let z = (qi(0), qi(0));
    let pairs = [
        ("d_l", (e.delta_l, e.alpha_l)),
        ("d_phi", (e.delta_phi, e.alpha_phi)),
        ("c_l", (e.gamma_l, e.beta_l)),
        ("c_phi", (e.gamma_phi, e.beta_phi)),
    ];
    for (name, p) in pairs {
        if !lex_le(z, p) {
            return Err(Error::Validation(format!("{name} exponents {p:?} must be ⪰ (0, 0)")));
        }
    }
    if e.delta() <= qi(0) || !lex_lt(z, (e.gamma(), e.beta())) {
        return Err(Error::Validation("need δ > 0 and (γ, β) ≻ (0, 0)".into()));
    }
    if !lex_le((e.gamma_l, e.beta_l), (e.gamma_phi, e.beta_phi)) {
        return Err(Error::Validation("need (γ_l, β_l) ⪯ (γ_φ, β_φ)".into()));
    }
    Ok(())
}

fn reject(example: PowerLogExample, why: &str) -> Error {
    Error::Validation(format!("{example}: parameters violate the constraint {why}"))
}

/// Expected asymptotics for `params`, rejecting parameters outside the
/// example's constraint set.
pub fn powerlog_fixture(example: PowerLogExample, params: ExponentData) -> Result<PowerLogFixture> {
    setting_ok(&params)?;
    let e = params;
    let (delta, alpha, gamma, beta) = (e.delta(), e.alpha(), e.gamma(), e.beta());
    let (z, one, two) = (qi(0), qi(1), qi(2));
    let half = q(1, 2);
    let (branch, big_b, frak_b) = match example {
        PowerLogExample::B24 => {
            let ok = lex_lt((e.delta_l, e.alpha_l), (e.delta_phi, e.alpha_phi))
                && gamma == z
                && lex_lt((two, two), (delta, alpha));
            if !ok {
                return Err(reject(example, "(δ_l,α_l) ≺ (δ_φ,α_φ), γ = 0, (δ,α) ≻ (2,2)"));
            }
            let frak = if delta == two {
                AsymptoticForm::new(half, one - alpha / two, z)
            } else {
                AsymptoticForm::new(delta.recip(), -alpha / delta, z)
            };
            let equal = e.delta_l == e.delta_phi || beta > one || (beta == delta - one && beta > one && alpha < z);
            let d_tag = if delta == two { "δ=2" } else { "δ>2" };
            if equal {
                (format!("{d_tag}, B ≍ 𝖡"), Some(frak), frak)
            } else {
                (format!("{d_tag}, B ≍ R^(1/(1+β)) ≫ 𝖡"), Some(AsymptoticForm::power((one + beta).recip())), frak)
            }
        }
        PowerLogExample::B36 => {
            let tc = (one + gamma, beta);
            let ok = lex_le((e.delta_l, e.alpha_l), tc)
                && lex_le(tc, (delta, alpha))
                && delta == two
                && alpha <= two
                && gamma > z;
            if !ok {
                return Err(reject(example, "(δ_l,α_l) ⪯ (1+γ,β) ⪯ (δ,α), δ = 2, α ≤ 2, γ > 0"));
            }
            if gamma < one {
                ("γ<1".to_string(), None, AsymptoticForm::new(half, one - alpha / two, z))
            } else if alpha > beta {
                ("γ=1, α>β".to_string(), None, AsymptoticForm::new(half, -alpha / two, one))
            } else {
                ("γ=1, α=β".to_string(), None, AsymptoticForm::new(half, -alpha / two, z))
            }
        }
        PowerLogExample::B11 => {
            let ok = lex_le((e.delta_l, e.alpha_l), (one, one + beta)) && delta == two && gamma == z && alpha <= two;
            if !ok {
                return Err(reject(example, "(δ_l,α_l) ⪯ (1,1+β), (δ,γ) = (2,0), α ≤ 2"));
            }
            let frak = if alpha < two {
                AsymptoticForm::power((two - alpha + beta) / (two - alpha + two * beta))
            } else {
                AsymptoticForm::new(half, one, z)
            };
            let a_tag = if alpha < two { "α<2" } else { "α=2" };
            if e.delta_l == e.delta_phi || alpha <= one + beta {
                (format!("{a_tag}, B ≍ 𝖡"), Some(frak), frak)
            } else {
                (format!("{a_tag}, B ≍ R^(1/(1+β)) ≫ 𝖡"), Some(AsymptoticForm::power((one + beta).recip())), frak)
            }
        }
    };
    Ok(PowerLogFixture { example, branch, params, big_b, frak_b })
}

#[allow(clippy::too_many_arguments)]
fn ex(dl: Q, al: Q, dp: Q, ap: Q, gl: Q, bl: Q, gp: Q, bp: Q) -> ExponentData {
    ExponentData {
        delta_l: dl,
        alpha_l: al,
        delta_phi: dp,
        alpha_phi: ap,
        gamma_l: gl,
        beta_l: bl,
        gamma_phi: gp,
        beta_phi: bp,
    }
}

/// One parameter set per listed branch of the example.
pub fn powerlog_fixtures(example: PowerLogExample) -> Vec<PowerLogFixture> {
    let (z, one, two) = (qi(0), qi(1), qi(2));
    let h = q(1, 2);
    let sets: Vec<ExponentData> = match example {
        PowerLogExample::B24 => vec![
            // δ>2, δ_l<δ_φ, β<1: L dominates
            ex(one, z, two, z, z, h, z, h),
            // δ>2, δ_l=δ_φ (α_l<α_φ)
            ex(q(3, 2), z, q(3, 2), one, z, h, z, h),
            // δ>2, β>1
            ex(one, z, two, z, z, q(3, 2), z, q(3, 2)),
            // δ=2, α>2, δ_l=δ_φ
            ex(one, one, one, two, z, h, z, h),
        ],
        PowerLogExample::B36 => vec![
            ex(one, z, one, z, h, z, h, z),
            ex(one, h, one, h, one, z, one, z),
            ex(one, h, one, h, one, one, one, one),
        ],
        PowerLogExample::B11 => vec![
            ex(one, h, one, h, z, one, z, one),
            ex(h, h, q(3, 2), h, z, one, z, one),
            ex(h, one, q(3, 2), one, z, h, z, h),
        ],
    };
    sets.into_iter().map(|p| powerlog_fixture(example, p).expect("built-in fixture satisfies its constraints")).collect()
}

/// Numeric `B(R)` (grid infimum, including `L`) and `𝖡(R)` against the
/// closed forms.
#[derive(Debug, Clone, Copy)]
pub struct FixtureRow {
    pub r: f64,
    pub ln_big_b: f64,
    pub ln_frak_b: f64,
    /// `B(R)` over its closed form (`NaN` when no form is known).
    pub big_ratio: f64,
    pub frak_ratio: f64,
}

impl PowerLogFixture {
    pub fn evaluate(&self, radii: &[f64]) -> Result<Vec<FixtureRow>> {
        let data = self.params.comparison_data()?;
        radii
            .par_iter()
            .map(|&r| {
                let sides = Sides::new(data.clone());
                let b = upper_bound_b(&data, r, BoundMode::GridInfimum)?.b_def.ln();
                let f = sides.ln_frak_b(r)?;
                let big_ratio = self.big_b.map(|g| (b - g.ln_eval(r)).exp()).unwrap_or(f64::NAN);
                Ok(FixtureRow { r, ln_big_b: b, ln_frak_b: f, big_ratio, frak_ratio: (f - self.frak_b.ln_eval(r)).exp() })
            })
            .collect()
    }
}

/// `max/min` of the finite positive ratios; `NaN` when there are none.
pub fn band_width(ratios: impl IntoIterator<Item = f64>) -> f64 {
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for x in ratios.into_iter().filter(|x| x.is_finite() && *x > 0.0) {
        lo = lo.min(x);
        hi = hi.max(x);
    }
    if hi > 0.0 {
        hi / lo
    } else {
        f64::NAN
    }
}
