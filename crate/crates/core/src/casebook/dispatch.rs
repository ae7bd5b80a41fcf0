use std::fmt;
use std::sync::Arc;

use serde_json::json;

use super::data::{lex_le, lex_lt, ExponentData};
use super::form::{q, qi, AsymptoticForm, Q};
use super::sides::{LnBound, Sides};
use crate::bounds::ComparisonData;
use crate::error::{Error, Result};

/// Which estimate applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseLabel {
    A,
    B,
    C,
    D,
    /// Row `1..=6` of the pure power-law table.
    Row(u8),
    /// Bullet `1..=4` of the integrable-lengths table.
    Bullet(u8),
    Exceptional,
}

impl fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CaseLabel::A => write!(f, "A"),
            CaseLabel::B => write!(f, "B"),
            CaseLabel::C => write!(f, "C"),
            CaseLabel::D => write!(f, "D"),
            CaseLabel::Row(k) => write!(f, "row-{k}"),
            CaseLabel::Bullet(k) => write!(f, "bullet-{k}"),
            CaseLabel::Exceptional => write!(f, "exceptional"),
        }
    }
}

/// Outcome of a case dispatch: closed forms in `R` (up to constants),
/// their index, the order bound, and numeric evaluators of both sides.
#[derive(Clone)]
pub struct CaseDiagnosis {
    pub label: CaseLabel,
    /// Regular-variation index of the reported bound.
    pub index: Option<Q>,
    /// Upper bound for the order of the monodromy matrix.
    pub order_bound: Option<Q>,
    pub upper: Option<AsymptoticForm>,
    pub lower: Option<AsymptoticForm>,
    /// Asymptotics of the crossing `T(R)` (power-law table only).
    pub crossing: Option<AsymptoticForm>,
    /// `≍` holds between the two sides.
    pub two_sided: bool,
    pub independent_of_d: bool,
    pub independent_of_c: bool,
    /// The constant `α` of case A.
    pub alpha: Option<f64>,
    pub notes: Vec<String>,
    pub upper_eval: Option<LnBound>,
    pub lower_eval: Option<LnBound>,
}

impl fmt::Debug for CaseDiagnosis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CaseDiagnosis")
            .field("label", &self.label)
            .field("index", &self.index)
            .field("order_bound", &self.order_bound)
            .field("upper", &self.upper.map(|x| x.to_string()))
            .field("lower", &self.lower.map(|x| x.to_string()))
            .field("two_sided", &self.two_sided)
            .field("notes", &self.notes)
            .finish()
    }
}

fn qs(x: Option<Q>) -> serde_json::Value {
    match x {
        Some(v) if v.is_integer() => json!(v.numer().to_string()),
        Some(v) => json!(format!("{}/{}", v.numer(), v.denom())),
        None => serde_json::Value::Null,
    }
}

impl CaseDiagnosis {
    fn empty(label: CaseLabel) -> Self {
        CaseDiagnosis {
            label,
            index: None,
            order_bound: None,
            upper: None,
            lower: None,
            crossing: None,
            two_sided: false,
            independent_of_d: false,
            independent_of_c: false,
            alpha: None,
            notes: Vec::new(),
            upper_eval: None,
            lower_eval: None,
        }
    }

    fn exceptional(note: String) -> Self {
        let mut d = Self::empty(CaseLabel::Exceptional);
        d.notes.push(note);
        d
    }

    pub fn is_exceptional(&self) -> bool {
        self.label == CaseLabel::Exceptional
    }

    /// `ln` of the upper side at `R`, from the numeric evaluator when there
    /// is one and from the closed form otherwise.
    pub fn upper_ln(&self, r: f64) -> Result<f64> {
        match (&self.upper_eval, &self.upper) {
            (Some(f), _) => f(r),
            (None, Some(form)) => Ok(form.ln_eval(r)),
            _ => Err(Error::Domain(format!("no upper bound for label {}", self.label))),
        }
    }

    pub fn lower_ln(&self, r: f64) -> Result<f64> {
        match (&self.lower_eval, &self.lower) {
            (Some(f), _) => f(r),
            (None, Some(form)) => Ok(form.ln_eval(r)),
            _ => Err(Error::Domain(format!("no lower bound for label {}", self.label))),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "label": self.label.to_string(),
            "index": qs(self.index),
            "order_bound": qs(self.order_bound),
            "upper": self.upper.map(|f| f.to_string()),
            "lower": self.lower.map(|f| f.to_string()),
            "crossing": self.crossing.map(|f| f.to_string()),
            "two_sided": self.two_sided,
            "independent_of_d": self.independent_of_d,
            "independent_of_c": self.independent_of_c,
            "alpha": self.alpha,
            "notes": self.notes,
        })
    }
}

/// Majorants given either by exact exponents or as numeric functions.
#[derive(Debug, Clone)]
pub enum DispatchInput {
    Exponents(ExponentData),
    Data(ComparisonData),
}

impl DispatchInput {
    fn resolve(&self) -> Result<(ExponentData, ComparisonData, Option<String>)> {
        match self {
            DispatchInput::Exponents(e) => Ok((*e, e.comparison_data()?, None)),
            DispatchInput::Data(d) => {
                let e = ExponentData::fit(d)?;
                let note = format!(
                    "exponents read off numerically: d_l ~ ({}, {}), d_phi ~ ({}, {}), c_l ~ ({}, {}), c_phi ~ ({}, {})",
                    e.delta_l, e.alpha_l, e.delta_phi, e.alpha_phi, e.gamma_l, e.beta_l, e.gamma_phi, e.beta_phi
                );
                Ok((e, d.clone(), Some(note)))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Flavor {
    /// `𝖡(R)` sandwich with both sides.
    Sandwich,
    /// Bound for `log max ‖W_H‖` and the order.
    Monodromy,
}

fn pair(f: AsymptoticForm) -> (Q, Q) {
    (f.power, f.log)
}

/// `∫_1^t 𝖣^{-1/2}` when divergent.
fn head_form(e: &ExponentData) -> AsymptoticForm {
    let (d, a) = (e.delta(), e.alpha());
    if d < qi(2) {
        AsymptoticForm::new(qi(1) - d / qi(2), -a / qi(2), qi(0))
    } else if a < qi(2) {
        AsymptoticForm::new(qi(0), qi(1) - a / qi(2), qi(0))
    } else {
        AsymptoticForm::new(qi(0), qi(0), qi(1))
    }
}

/// `∫_t^∞ 𝖣^{-1/2}` when convergent.
fn tail_form(e: &ExponentData) -> AsymptoticForm {
    let (d, a) = (e.delta(), e.alpha());
    if d > qi(2) {
        AsymptoticForm::new(qi(1) - d / qi(2), -a / qi(2), qi(0))
    } else {
        AsymptoticForm::new(qi(0), qi(1) - a / qi(2), qi(0))
    }
}

/// `∫_t^∞ d_l` when convergent.
fn dl_tail_form(e: &ExponentData) -> AsymptoticForm {
    if e.delta_l > qi(1) {
        AsymptoticForm::new(qi(1) - e.delta_l, -e.alpha_l, qi(0))
    } else {
        AsymptoticForm::new(qi(0), qi(1) - e.alpha_l, qi(0))
    }
}

fn r_form() -> AsymptoticForm {
    AsymptoticForm::power(qi(1))
}

// R / C(f^-(R))
fn r_over_c_at_inverse(c: AsymptoticForm, f: AsymptoticForm) -> Result<AsymptoticForm> {
    Ok(r_form().div(&c.compose(&f.inverse()?)?))
}

fn case_a_constant(s: &Sides) -> f64 {
    let umax = 1e6f64.ln();
    let sup = (0..=240)
        .map(|i| {
            let u = umax * i as f64 / 240.0;
            s.ln_d(u) - u - s.ln_c(u)
        })
        .fold(f64::NEG_INFINITY, f64::max);
    1.5 * 4.0 * sup.exp()
}

fn check_standing(e: &ExponentData) -> Result<()> {
    let z = qi(0);
    if e.delta() <= z {
        return Err(Error::Validation(format!("δ = {} must be positive", e.delta())));
    }
    if !lex_lt((z, z), (e.gamma(), e.beta())) {
        return Err(Error::Validation("(γ, β) must exceed (0, 0) so that 𝖢 → ∞".into()));
    }
    if !lex_le((e.gamma_l, e.beta_l), (e.gamma_phi, e.beta_phi)) {
        return Err(Error::Validation("c_phi must be ≲ c_l".into()));
    }
    if !lex_le((z, z), (e.delta_phi, e.alpha_phi)) || !lex_le((z, z), (e.gamma_l, e.beta_l)) {
        return Err(Error::Validation("d_phi and c_l must be asymptotically nonincreasing".into()));
    }
    Ok(())
}

fn dispatch(input: &DispatchInput, flavor: Flavor) -> Result<CaseDiagnosis> {
    let (e, data, fit_note) = input.resolve()?;
    check_standing(&e)?;
    let sides = Sides::new(data);
    let (delta, gamma) = (e.delta(), e.gamma());
    let d = e.d_form();
    let c = e.c_form();
    let tc = AsymptoticForm::power(qi(1)).mul(&c);
    let inv_dl = e.inv_dl_form();
    let two_two = (qi(2), qi(2));
    let sqrt_integrable = lex_lt(two_two, pair(d));
    let dl_integrable = lex_lt((qi(1), qi(1)), (e.delta_l, e.alpha_l));
    let mut out;
    let mut notes = Vec::new();
    notes.extend(fit_note);
    notes.push(format!("𝖣 ≍ {}, t𝖢 ≍ {}, 1/d_l ≍ {}", show_t(d), show_t(tc), show_t(inv_dl)));

    if lex_le(pair(d), pair(tc)) {
        out = CaseDiagnosis::empty(CaseLabel::A);
        notes.push("𝖣 ≲ t𝖢 by exponent comparison".into());
        let alpha = case_a_constant(&sides);
        // log[α t𝖢/𝖣] ≍ log t, log log t or 1
        let f = if tc.power > d.power {
            tc.mul(&AsymptoticForm::new(qi(0), qi(1), qi(0)))
        } else if tc.log > d.log {
            tc.mul(&AsymptoticForm::new(qi(0), qi(0), qi(1)))
        } else {
            tc
        };
        let bound = r_over_c_at_inverse(c, f)?;
        out.alpha = Some(alpha);
        out.index = Some((qi(1) + gamma).recip());
        out.upper = Some(bound);
        out.two_sided = true;
        out.independent_of_d = delta < qi(1) + gamma;
        let s = sides.clone();
        let eval: LnBound = Arc::new(move |r| s.ln_r_over_c_at_inverse(r, |u| s.ln_case_a_f(u, alpha)));
        out.upper_eval = Some(eval.clone());
        if flavor == Flavor::Sandwich {
            out.lower = Some(bound);
            out.lower_eval = Some(eval);
        }
    } else if sqrt_integrable {
        notes.push("t𝖢 ≪ 𝖣 and ∫𝖣^{-1/2} < ∞".into());
        match flavor {
            Flavor::Sandwich => {
                if e.delta_l == qi(1) && e.delta_phi == qi(1) && gamma == qi(0) {
                    notes.push("d_phi/d_l is a power of log t, hence ≍ monotone".into());
                }
            }
            Flavor::Monodromy => {
                let nondecr = lex_le((qi(0), qi(0)), pair(e.ratio_form()));
                if !(gamma > qi(0) || nondecr) {
                    return Ok(CaseDiagnosis::exceptional(
                        "t𝖢 ≲ 𝖣 with γ = 0 and d_phi/d_l not ≍ nondecreasing: no row applies".into(),
                    ));
                }
                notes.push(if gamma > qi(0) { "γ > 0".into() } else { "d_phi/d_l ≍ nondecreasing".into() });
            }
        }
        out = CaseDiagnosis::empty(CaseLabel::B);
        let k = d.inverse()?;
        let up = AsymptoticForm::power(q(1, 2)).mul(&tail_form(&e).compose(&k)?);
        out.index = Some(delta.recip());
        out.upper = Some(up);
        out.two_sided = delta > qi(2);
        out.independent_of_c = delta > qi(2);
        let s = sides.clone();
        out.upper_eval = Some(Arc::new(move |r| s.ln_sqrt_tail_at_k(r)));
        if flavor == Flavor::Sandwich {
            out.lower = Some(k);
            let s = sides.clone();
            out.lower_eval = Some(Arc::new(move |r| s.ln_k(r)));
        }
    } else if lex_le(pair(inv_dl), pair(tc)) {
        notes.push("1/d_l ≲ t𝖢 ≪ 𝖣 and ∫𝖣^{-1/2} = ∞".into());
        if delta == qi(2) && gamma == qi(0) {
            let mut x = CaseDiagnosis::exceptional(
                "(δ, γ) = (2, 0) is excluded; see the ex-b11 fixtures for this boundary".into(),
            );
            x.notes.splice(0..0, notes);
            let s = sides.clone();
            x.upper_eval = Some(Arc::new(move |r| s.ln_r_over_c_at_inverse(r, |u| 2.0 * (s.ln_c(u) + s.head(u).ln()))));
            return Ok(x);
        }
        out = CaseDiagnosis::empty(CaseLabel::C);
        let f0 = tc.pow(qi(2)).div(&d);
        let f1 = c.mul(&head_form(&e)).pow(qi(2));
        out.index = Some((qi(2) - delta + gamma) / (qi(2) - delta + qi(2) * gamma));
        out.upper = Some(r_over_c_at_inverse(c, f1)?);
        out.two_sided = delta < qi(2);
        let s = sides.clone();
        out.upper_eval = Some(Arc::new(move |r| s.ln_r_over_c_at_inverse(r, |u| 2.0 * (s.ln_c(u) + s.head(u).ln()))));
        if flavor == Flavor::Sandwich {
            out.lower = Some(r_over_c_at_inverse(c, f0)?);
            let s = sides.clone();
            out.lower_eval =
                Some(Arc::new(move |r| s.ln_r_over_c_at_inverse(r, |u| 2.0 * (u + s.ln_c(u)) - s.ln_d(u))));
        }
    } else {
        notes.push("t𝖢 ≪ 1/d_l and ∫𝖣^{-1/2} = ∞".into());
        if !dl_integrable {
            let mut x = CaseDiagnosis::exceptional("t𝖢 ≪ 1/d_l but d_l is not integrable: no case applies".into());
            x.notes.splice(0..0, notes);
            return Ok(x);
        }
        let strict = e.delta_l > e.delta_phi;
        if flavor == Flavor::Monodromy && !strict {
            let mut x = CaseDiagnosis::exceptional("the monodromy table needs δ_l > δ_φ in this case".into());
            x.notes.splice(0..0, notes);
            return Ok(x);
        }
        out = CaseDiagnosis::empty(CaseLabel::D);
        if strict {
            let h = e.ratio_form().inverse()?;
            let lower = r_form().mul(&AsymptoticForm::new(qi(1) - e.delta_l, -e.alpha_l, qi(0)).compose(&h)?);
            let a = AsymptoticForm::power(q(1, 2)).mul(&head_form(&e).compose(&h)?);
            let b = r_form().mul(&dl_tail_form(&e).compose(&h)?);
            out.index = Some((qi(1) - e.delta_phi) / (e.delta_l - e.delta_phi));
            out.upper = Some(a.max(b));
            if flavor == Flavor::Sandwich {
                out.lower = Some(lower);
            }
        } else {
            notes.push("δ_l = δ_φ: h(R) grows like exp(R^{1/(α_l − α_φ)}), no power-log closed form".into());
        }
        out.two_sided = delta < qi(2) && e.delta_l > qi(1);
        let s = sides.clone();
        out.upper_eval = Some(Arc::new(move |r| s.ln_d_upper(r)));
        if flavor == Flavor::Sandwich {
            let s = sides.clone();
            out.lower_eval = Some(Arc::new(move |r| s.ln_r_h_dl(r)));
        }
    }
    if let (Some(i), Some(u)) = (out.index, out.upper) {
        if u.index() != i {
            notes.push(format!("closed form index {} differs from the case index {}", u.index(), i));
        }
    }
    out.order_bound = out.index;
    out.notes = notes;
    Ok(out)
}

fn show_t(f: AsymptoticForm) -> String {
    f.to_string().replace('R', "t")
}

/// Case dispatch for the estimate of `𝖡(R) = min_t max{𝗀(t,R), R/𝖢(t)}`.
pub fn theorem_b9_dispatch(input: &DispatchInput) -> Result<CaseDiagnosis> {
    dispatch(input, Flavor::Sandwich)
}

/// Bound for `log max_{|z|=R} ‖W_H(z)‖` and for the order.
pub fn theorem_b7_bound(input: &DispatchInput) -> Result<CaseDiagnosis> {
    dispatch(input, Flavor::Monodromy)
}

/// Bound from length and angle majorants alone, for integrable `d_l`.
/// `psi_condition` asserts `|sin(φ_j − ψ)| ≲ |sin(φ_{j+1} − φ_j)|` for
/// some `ψ`.
pub fn corollary_b96_bound(
    delta_l: Q,
    alpha_l: Q,
    delta_phi: Q,
    alpha_phi: Q,
    psi_condition: bool,
) -> Result<CaseDiagnosis> {
    let z = qi(0);
    if !lex_lt((qi(1), qi(1)), (delta_l, alpha_l)) {
        return Err(Error::Validation("d_l must be integrable: (δ_l, α_l) ≻ (1, 1)".into()));
    }
    if !lex_le((z, z), (delta_phi, alpha_phi)) {
        return Err(Error::Validation("d_phi must be ≍ nonincreasing".into()));
    }
    let delta = delta_l + delta_phi;
    let mut e = ExponentData {
        delta_l,
        alpha_l,
        delta_phi,
        alpha_phi,
        gamma_l: z,
        beta_l: z,
        gamma_phi: z,
        beta_phi: z,
    };
    // c_l = c_φ = ∫_t^∞ d_l by default
    let cl = dl_tail_form(&e);
    let (gl, bl) = (-cl.power, -cl.log);
    e.gamma_l = gl;
    e.beta_l = bl;
    let bullet;
    let mut notes = Vec::new();
    if delta > qi(2) {
        bullet = 1;
        if delta_l > qi(1) {
            e.gamma_phi = gl;
            e.beta_phi = bl;
            notes.push("c_l = c_φ = ∫_t^∞ d_l".into());
        } else {
            // ψ = lim φ_j: c_φ = c_l (∫_t^∞ d_φ)²
            e.gamma_phi = gl + qi(2) * (delta_phi - qi(1));
            e.beta_phi = bl + qi(2) * alpha_phi;
            notes.push("c_l = ∫_t^∞ d_l, c_φ = c_l (∫_t^∞ d_φ)², ψ = lim φ_j".into());
        }
    } else if psi_condition && delta_l > qi(1) {
        bullet = 3;
        e.gamma_phi = gl + qi(2) * delta_phi;
        e.beta_phi = bl + qi(2) * alpha_phi;
        notes.push("c_l = ∫_t^∞ d_l, c_φ = ∫_t^∞ d_l d_φ²".into());
    } else if delta < qi(2) && delta > z {
        bullet = 2;
        e.gamma_phi = gl;
        e.beta_phi = bl;
        notes.push("c_l = c_φ = ∫_t^∞ d_l".into());
    } else if delta == qi(2) && (delta_l, delta_phi) != (qi(1), qi(1)) {
        bullet = 4;
        e.gamma_phi = gl;
        e.beta_phi = bl;
        notes.push("c_l = c_φ = ∫_t^∞ d_l".into());
    } else {
        return Ok(CaseDiagnosis::exceptional(format!(
            "δ = {delta} with (δ_l, δ_φ) = ({delta_l}, {delta_phi}): no bullet applies"
        )));
    }
    let inner = theorem_b7_bound(&DispatchInput::Exponents(e))?;
    let sides = Sides::new(e.comparison_data()?);
    let mut out = CaseDiagnosis::empty(CaseLabel::Bullet(bullet));
    match bullet {
        1 | 3 => {
            let k = e.d_form().inverse()?;
            out.upper = Some(k);
            out.index = Some(delta.recip());
            out.order_bound = Some(delta.recip());
            let s = sides.clone();
            out.upper_eval = Some(Arc::new(move |r| s.ln_k(r)));
        }
        2 => {
            let h = e.ratio_form().inverse()?;
            out.upper = Some(r_form().mul(&dl_tail_form(&e).compose(&h)?));
            let i = (qi(1) - delta_phi) / (delta_l - delta_phi);
            out.index = Some(i);
            out.order_bound = Some(i);
            let s = sides.clone();
            out.upper_eval = Some(Arc::new(move |r| s.ln_r_tail_dl(r)));
        }
        _ => {
            out.upper = inner.upper;
            out.index = inner.index;
            out.order_bound = Some(q(1, 2));
            out.upper_eval = inner.upper_eval.clone();
        }
    }
    notes.push(format!("underlying monodromy case {}", inner.label));
    out.notes = notes;
    Ok(out)
}

/// Row selection and closed forms for power-law majorants
/// `d_l = t^{-δ_l}, d_φ = t^{-δ_φ}, c_l = t^{-γ_l}, c_φ = t^{-γ_φ}`.
pub fn corollary_b66_row(delta_l: Q, delta_phi: Q, gamma_l: Q, gamma_phi: Q) -> Result<CaseDiagnosis> {
    let z = qi(0);
    if [delta_l, delta_phi, gamma_l, gamma_phi].iter().any(|x| *x < z) {
        return Err(Error::Validation("power-law exponents must be nonnegative".into()));
    }
    let delta = delta_l + delta_phi;
    let gamma = (gamma_l + gamma_phi) / qi(2);
    if delta == z || gamma == z {
        return Ok(CaseDiagnosis::exceptional(format!(
            "δ = {delta}, γ = {gamma}: the table needs both positive"
        )));
    }
    let one = qi(1);
    let two = qi(2);
    let p = AsymptoticForm::power;
    let (row, t, b, rho) = if delta < one + gamma {
        let e = (one + gamma).recip();
        (1, AsymptoticForm::new(e, -e, z), AsymptoticForm::new(e, gamma * e, z), e)
    } else if delta == one + gamma {
        (2, p(delta.recip()), p(delta.recip()), delta.recip())
    } else if delta > two {
        (3, p((delta - one) / (gamma * delta)), p(delta.recip()), delta.recip())
    } else if delta == two {
        let g = gamma.recip();
        (4, AsymptoticForm::new(g / two, -g, z), AsymptoticForm::new(q(1, 2), one, z), q(1, 2))
    } else if delta_l <= one + gamma {
        let den = two - delta + two * gamma;
        let i = (two - delta + gamma) / den;
        (5, p(den.recip()), p(i), i)
    } else {
        let i = (one - delta_phi) / (delta_l - delta_phi);
        (6, p((delta_l - one) / (gamma * (delta_l - delta_phi))), p(i), i)
    };
    let mut out = CaseDiagnosis::empty(CaseLabel::Row(row));
    out.crossing = Some(t);
    out.upper = Some(b);
    out.index = Some(b.index());
    out.order_bound = Some(rho);
    out.notes.push(format!("δ = {delta}, γ = {gamma}, 1 + γ = {}", one + gamma));
    Ok(out)
}
