//! Hamburger Hamiltonians: data model, example families and the bridge to
//! Jacobi parameters.

mod families;
mod jacobi;
mod spec;

use std::borrow::Cow;
use std::fmt;
use std::sync::Arc;

pub use families::{family_corollary_b83, family_example_b6, B83Variant, ExampleFamily, PresetExponents};
pub use jacobi::{hamiltonian_from_jacobi, hamiltonian_from_jacobi_gauged, jacobi_from_hamiltonian, JacobiParameters};
pub use spec::parse_family;
pub(crate) use spec::split_call;

use crate::error::{Error, Result};
use crate::regvar::{tail_integral, ComparisonFunction};

type Rule = dyn Fn(usize) -> (f64, f64) + Send + Sync;

/// Lengths `l_j > 0` and angles `φ_j` (1-based), either materialized or
/// produced by a rule. `tail` bounds `Σ_{j>N} l_j` beyond what is stored.
#[derive(Clone)]
pub struct HamburgerHamiltonian {
    lengths: Vec<f64>,
    angles: Vec<f64>,
    partial: Vec<f64>,
    rule: Option<Arc<Rule>>,
    tail: Option<ComparisonFunction>,
    label: String,
}

/// Bracket for the total length `L`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LengthSummary {
    pub partial: f64,
    pub upper: f64,
}

impl HamburgerHamiltonian {
    /// Finite Hamiltonian with the given intervals.
    pub fn new_validated(lengths: Vec<f64>, angles: Vec<f64>) -> Result<Self> {
        if lengths.len() != angles.len() {
            return Err(Error::Validation(format!(
                "{} lengths but {} angles",
                lengths.len(),
                angles.len()
            )));
        }
        if lengths.is_empty() {
            return Err(Error::Validation("a Hamiltonian needs at least one interval".into()));
        }
        check_lengths(&lengths, 1)?;
        if let Some(i) = angles.iter().position(|a| !a.is_finite()) {
            return Err(Error::Validation(format!("angle φ_{} is not finite", i + 1)));
        }
        let partial = prefix_sums(&lengths);
        Ok(HamburgerHamiltonian { lengths, angles, partial, rule: None, tail: None, label: "explicit".into() })
    }

    /// Materialized prefix of an infinite Hamiltonian with a declared tail
    /// majorant `c(N) ≥ Σ_{j>N} l_j` for `N ≥ len`.
    pub fn with_tail(mut self, tail: ComparisonFunction) -> Result<Self> {
        check_tail_decays(&tail)?;
        self.tail = Some(tail);
        Ok(self)
    }

    /// Infinite Hamiltonian from a pure rule `j ↦ (l_j, φ_j)`, `j ≥ 1`.
    pub fn from_rule<F>(rule: F, tail: ComparisonFunction, label: &str) -> Result<Self>
    where
        F: Fn(usize) -> (f64, f64) + Send + Sync + 'static,
    {
        check_tail_decays(&tail)?;
        let (l1, _) = rule(1);
        check_lengths(&[l1], 1)?;
        Ok(HamburgerHamiltonian {
            lengths: Vec::new(),
            angles: Vec::new(),
            partial: Vec::new(),
            rule: Some(Arc::new(rule)),
            tail: Some(tail),
            label: label.to_string(),
        })
    }

    /// Infinite rule-based Hamiltonian whose lengths are dominated by a
    /// nonincreasing `ℓ`; the tail majorant is `N ↦ ∫_N^∞ ℓ`. A divergent
    /// integral is a validation error.
    pub fn from_rule_with_length_majorant<F>(rule: F, ell: ComparisonFunction, label: &str) -> Result<Self>
    where
        F: Fn(usize) -> (f64, f64) + Send + Sync + 'static,
    {
        tail_integral(&ell, 1.0).map_err(|e| Error::Validation(format!("declared summable but {e}")))?;
        let ell2 = ell.clone();
        let tail = ComparisonFunction::from_ln_fn(
            move |u| tail_integral(&ell2, u.exp()).map(|v| v.ln()).unwrap_or(f64::INFINITY),
            "∫_N^∞ ℓ",
            ell.index().map(|a| a + 1.0),
            crate::regvar::Monotonicity::Nonincreasing,
        );
        Self::from_rule(rule, tail, label)
    }

    pub fn with_label(mut self, label: &str) -> Self {
        self.label = label.to_string();
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Number of intervals if the Hamiltonian is finite.
    pub fn finite_len(&self) -> Option<usize> {
        if self.rule.is_none() && self.tail.is_none() {
            Some(self.lengths.len())
        } else {
            None
        }
    }

    /// How many intervals can be materialized (`None` means unbounded).
    pub fn available(&self) -> Option<usize> {
        if self.rule.is_some() {
            None
        } else {
            Some(self.lengths.len())
        }
    }

    pub fn tail_majorant_fn(&self) -> Option<&ComparisonFunction> {
        self.tail.as_ref()
    }

    /// `(l_j, φ_j)` for `1 ≤ j`.
    pub fn interval(&self, j: usize) -> Result<(f64, f64)> {
        if j == 0 {
            return Err(Error::Domain("intervals are indexed from 1".into()));
        }
        if let Some(rule) = &self.rule {
            let (l, p) = rule(j);
            check_lengths(&[l], j)?;
            return Ok((l, p));
        }
        if j <= self.lengths.len() {
            Ok((self.lengths[j - 1], self.angles[j - 1]))
        } else {
            Err(Error::Range(format!("interval {j} beyond the {} stored", self.lengths.len())))
        }
    }

    /// The first `n` lengths and angles.
    pub fn params(&self, n: usize) -> Result<(Cow<'_, [f64]>, Cow<'_, [f64]>)> {
        if let Some(rule) = &self.rule {
            let mut l = Vec::with_capacity(n);
            let mut p = Vec::with_capacity(n);
            for j in 1..=n {
                let (lj, pj) = rule(j);
                l.push(lj);
                p.push(pj);
            }
            check_lengths(&l, 1)?;
            return Ok((Cow::Owned(l), Cow::Owned(p)));
        }
        if n > self.lengths.len() {
            return Err(Error::Range(format!("requested {n} intervals, {} stored", self.lengths.len())));
        }
        Ok((Cow::Borrowed(&self.lengths[..n]), Cow::Borrowed(&self.angles[..n])))
    }

    /// Partial sum `x_n`.
    pub fn x(&self, n: usize) -> Result<f64> {
        if n == 0 {
            return Ok(0.0);
        }
        if self.rule.is_none() {
            return self.partial.get(n - 1).copied().ok_or_else(|| Error::Range(format!("x_{n} not stored")));
        }
        let (l, _) = self.params(n)?;
        Ok(l.iter().sum())
    }

    /// Upper bound for `Σ_{j>n} l_j`.
    pub fn tail_majorant(&self, n: usize) -> f64 {
        let stored = self.lengths.len();
        if self.rule.is_some() {
            let tail = self.tail.as_ref().expect("rule-based Hamiltonians carry a tail");
            if n == 0 {
                return self.interval(1).map(|x| x.0).unwrap_or(f64::INFINITY) + tail.eval(1.0);
            }
            return tail.eval(n as f64);
        }
        let rest = if n < stored { self.partial[stored - 1] - if n == 0 { 0.0 } else { self.partial[n - 1] } } else { 0.0 };
        match &self.tail {
            None => rest.max(0.0),
            Some(t) => rest.max(0.0) + t.eval(n.max(stored) as f64),
        }
    }

    /// `L` bracketed by the partial sum over `n` intervals and the tail majorant.
    pub fn total_length(&self, n: usize) -> Result<LengthSummary> {
        let n = match self.finite_len() {
            Some(len) => n.min(len),
            None => n,
        };
        let partial = self.x(n)?;
        Ok(LengthSummary { partial, upper: partial + self.tail_majorant(n) })
    }

    /// Same lengths, angles transformed by `f`.
    pub fn map_angles<F>(&self, f: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + Clone + 'static,
    {
        let mut out = self.clone();
        out.angles = self.angles.iter().map(|a| f(*a)).collect();
        if let Some(rule) = &self.rule {
            let rule = rule.clone();
            out.rule = Some(Arc::new(move |j| {
                let (l, p) = rule(j);
                (l, f(p))
            }));
        }
        out
    }

    /// All lengths multiplied by `k > 0`.
    pub fn scale_lengths(&self, k: f64) -> Self {
        assert!(k > 0.0, "length scale must be positive");
        let mut out = self.clone();
        out.lengths = self.lengths.iter().map(|l| l * k).collect();
        out.partial = prefix_sums(&out.lengths);
        out.tail = self.tail.as_ref().map(|t| t.scaled(k));
        if let Some(rule) = &self.rule {
            let rule = rule.clone();
            out.rule = Some(Arc::new(move |j| {
                let (l, p) = rule(j);
                (l * k, p)
            }));
        }
        out
    }
}

impl fmt::Debug for HamburgerHamiltonian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HamburgerHamiltonian")
            .field("label", &self.label)
            .field("stored", &self.lengths.len())
            .field("rule", &self.rule.is_some())
            .field("tail", &self.tail)
            .finish()
    }
}

fn prefix_sums(l: &[f64]) -> Vec<f64> {
    let mut acc = 0.0;
    l.iter()
        .map(|v| {
            acc += v;
            acc
        })
        .collect()
}

fn check_lengths(l: &[f64], first_index: usize) -> Result<()> {
    match l.iter().position(|v| !(*v > 0.0) || !v.is_finite()) {
        Some(i) => Err(Error::Validation(format!(
            "length l_{} = {} must be positive and finite",
            i + first_index,
            l[i]
        ))),
        None => Ok(()),
    }
}

fn check_tail_decays(tail: &ComparisonFunction) -> Result<()> {
    let declining = match tail.index() {
        Some(a) if a < 0.0 => true,
        _ => tail.ln_eval(1e300) < tail.ln_eval(1.0) - 3.0 * std::f64::consts::LN_10,
    };
    if declining {
        Ok(())
    } else {
        Err(Error::Validation(format!("declared tail majorant {tail} does not decay to zero")))
    }
}
