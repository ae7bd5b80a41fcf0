use std::collections::BTreeMap;
use std::fs::File;
use std::io::BufWriter;
use std::path::Path;

use nevbound::bounds::{
    auto_psi, check_majorization, lower_bound, upper_bound_b, verify_bound_sandwich, write_reports_csv,
    MajorizationReport,
};
use nevbound::casebook::{band_width, theorem_b38_check, theorem_b9_dispatch, DispatchInput};
use nevbound::hamiltonian::parse_family;
use nevbound::monodromy::{geometric_grid, growth_profile};
use nevbound::{BoundMode, BoundReport, ComparisonData, ComparisonFunction, Error, GrowthProfile, HamburgerHamiltonian, Result};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{Check, DataSection, Loaded, Psi};

#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    pub pass: bool,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub band: Option<f64>,
}

pub struct RunOutcome {
    pub verdicts: BTreeMap<&'static str, Verdict>,
    pub csv_path: std::path::PathBuf,
    pub json_path: std::path::PathBuf,
}

impl RunOutcome {
    pub fn pass(&self) -> bool {
        self.verdicts.values().all(|v| v.pass)
    }
}

pub fn build_data(d: &DataSection, h: &HamburgerHamiltonian, n_check: usize, base: &Path) -> Result<ComparisonData> {
    let data = match &d.spec {
        Some(s) => ComparisonData::parse(s, Some(base))?,
        None => {
            let f = |s: &Option<String>| ComparisonFunction::parse(s.as_deref().unwrap_or_default(), Some(base));
            ComparisonData::from_majorants(f(&d.d_l)?, f(&d.d_phi)?, f(&d.c_l)?, f(&d.c_phi)?, 0.0)?
        }
    };
    Ok(match &d.psi {
        None => data,
        Some(Psi::Value(p)) => data.with_psi(*p),
        Some(Psi::Word(_)) => {
            let n = h.finite_len().map_or(n_check, |m| m.min(n_check));
            data.with_psi(auto_psi(h, 0, n)?)
        }
    })
}

// Entries at radii within two decades of the largest one.
fn top_two_decades(radii: &[f64], values: &[f64]) -> Vec<f64> {
    let top = radii.iter().cloned().fold(0.0, f64::max) / 100.0 * (1.0 - 1e-12);
    radii.iter().zip(values).filter(|(r, _)| **r >= top).map(|(_, v)| *v).collect()
}

fn order_of(p: &GrowthProfile) -> Verdict {
    let ok = p.order.is_finite() && p.log_m.iter().all(|m| m.is_finite());
    Verdict { pass: ok, detail: format!("order estimate {:.4}", p.order), band: None }
}

pub fn run(loaded: &Loaded) -> Result<RunOutcome> {
    let cfg = &loaded.config;
    let base = loaded.dir.as_path();
    let h = parse_family(&cfg.family, Some(base))?;
    let data = match &cfg.data {
        Some(d) => Some(build_data(d, &h, cfg.n_check, base)?),
        None => None,
    };
    let radii = geometric_grid(cfg.grid.r_min, cfg.grid.r_max, cfg.grid.per_decade);
    let want = |c: Check| cfg.checks.contains(&c);

    let profile = if want(Check::Measure) || want(Check::Lower) || want(Check::Upper) || want(Check::Case) {
        Some(growth_profile(&h, &radii, cfg.eps, cfg.angles)?)
    } else {
        None
    };

    let mut verdicts = BTreeMap::new();
    let mut rows: Vec<BoundReport> = Vec::new();
    let mut constants: Option<MajorizationReport> = None;
    let mut case_json = Value::Null;

    if let Some(p) = profile.as_ref().filter(|_| want(Check::Measure)) {
        verdicts.insert(Check::Measure.name(), order_of(p));
    }

    if let Some(data) = &data {
        if want(Check::Sandwich) {
            let s = verify_bound_sandwich(&h, data, &radii, cfg.eps, cfg.angles, cfg.n_check)?;
            let detail = if s.failures.is_empty() {
                format!("B_upper >= logM - eps at all {} radii", s.rows.len())
            } else {
                format!("upper bound violated at R = {:?}", s.failures)
            };
            verdicts.insert(Check::Sandwich.name(), Verdict { pass: s.failures.is_empty(), detail, band: None });
            constants = Some(s.constants);
            rows = s.rows.into_iter().map(|r| r.report).collect();
        }
        if want(Check::Upper) {
            let mut up: Vec<BoundReport> =
                radii.par_iter().map(|&r| upper_bound_b(data, r, BoundMode::GridInfimum)).collect::<Result<_>>()?;
            if let Some(p) = &profile {
                for (rep, m) in up.iter_mut().zip(&p.log_m) {
                    rep.attach_measurement(*m);
                }
            }
            let worst = up.iter().filter_map(|r| r.margin_upper).fold(f64::INFINITY, f64::min);
            let finite = up.iter().all(|r| r.b_upper.is_finite());
            let pass = finite && worst >= -cfg.eps;
            let detail = if worst.is_finite() {
                format!("min margin B_upper - logM = {worst:.4e}")
            } else {
                "bound evaluated without measurement".to_string()
            };
            verdicts.insert(Check::Upper.name(), Verdict { pass, detail, band: None });
            if constants.is_none() {
                constants = Some(check_majorization(&h, data, cfg.n_check)?);
            }
            if rows.is_empty() {
                rows = up;
            }
        }
        if want(Check::Lower) {
            let p = profile.as_ref().expect("profile is measured for the lower check");
            let ratios: Vec<f64> = radii
                .iter()
                .zip(&p.log_m)
                .map(|(&r, m)| lower_bound(&data.d_l, &data.d_phi, r).map(|l| m / l))
                .collect::<Result<_>>()?;
            let sel = top_two_decades(&radii, &ratios);
            let min = sel.iter().cloned().fold(f64::INFINITY, f64::min);
            let pass = min.is_finite() && min > cfg.lower_floor;
            verdicts.insert(
                Check::Lower.name(),
                Verdict {
                    pass,
                    detail: format!("min logM/lower over the top two decades {min:.4} (floor {})", cfg.lower_floor),
                    band: Some(band_width(sel)),
                },
            );
        }
        if want(Check::Case) {
            let d = theorem_b9_dispatch(&DispatchInput::Data(data.clone()))?;
            case_json = d.to_json();
            let v = if d.is_exceptional() {
                Verdict { pass: false, detail: format!("no case applies: {}", d.notes.join("; ")), band: None }
            } else {
                let p = profile.as_ref().expect("profile is measured for the case check");
                let ratios: Vec<f64> = radii
                    .iter()
                    .zip(&p.log_m)
                    .map(|(&r, m)| d.upper_ln(r).map(|u| (m.ln() - u).exp()))
                    .collect::<Result<_>>()?;
                let band = band_width(top_two_decades(&radii, &ratios));
                Verdict {
                    pass: band <= cfg.band_max,
                    detail: format!("label {}, logM over the case upper side varies by {band:.3}", d.label),
                    band: Some(band),
                }
            };
            verdicts.insert(Check::Case.name(), v);
        }
        if want(Check::B38) {
            let b = theorem_b38_check(&h, &data.d_l, &data.d_phi, &radii, cfg.eps, cfg.angles)?;
            let w = b.width();
            verdicts.insert(
                Check::B38.name(),
                Verdict {
                    pass: w <= cfg.band_max,
                    detail: format!("logM/lower in [{:.4}, {:.4}], order {:.4}", b.min, b.max, b.order),
                    band: Some(w),
                },
            );
        }
    }

    let csv_path = loaded.csv_path();
    let file = BufWriter::new(File::create(&csv_path).map_err(|e| Error::Io(format!("{}: {e}", csv_path.display())))?);
    if rows.is_empty() {
        profile.as_ref().expect("measure-only runs have a profile").write_csv(file)?;
    } else {
        write_reports_csv(&rows, file)?;
    }

    let all = verdicts.values().all(|v| v.pass);
    let summary = json!({
        "family": cfg.family,
        "seed": cfg.seed,
        "psi": data.as_ref().map(|d| d.psi),
        "pass": all,
        "checks": verdicts,
        "constants": constants,
        "order": profile.as_ref().map(|p| p.order),
        "case": case_json,
        "csv": csv_path.file_name().map(|f| f.to_string_lossy().into_owned()),
    });
    let json_path = loaded.json_path();
    let text = serde_json::to_string_pretty(&summary).map_err(|e| Error::Io(e.to_string()))?;
    std::fs::write(&json_path, text + "\n").map_err(|e| Error::Io(format!("{}: {e}", json_path.display())))?;
    Ok(RunOutcome { verdicts, csv_path, json_path })
}
