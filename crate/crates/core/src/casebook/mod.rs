//! Closed-form case analysis on the power-log scale.
//!
//! Exponents are exact rationals, so the index of every reported bound can
//! be compared with the case formula without rounding. Each diagnosis also
//! carries numeric evaluators of its sides built from the majorants
//! themselves, which is what the band checks use.

mod data;
mod dispatch;
mod fixtures;
mod form;
mod presets;
mod sides;

pub use data::{lex_le, lex_lt, ExponentData};
pub use dispatch::{
    corollary_b66_row, corollary_b96_bound, theorem_b7_bound, theorem_b9_dispatch, CaseDiagnosis, CaseLabel,
    DispatchInput,
};
pub use fixtures::{band_width, powerlog_fixture, powerlog_fixtures, FixtureRow, PowerLogExample, PowerLogFixture};
pub use form::{q, qi, rationalize, to_f64, AsymptoticForm, Q};
pub use presets::{
    jacobi_presets, list_presets, theorem_b38_check, ExperimentBundle, JacobiPreset, RatioBand, PRESETS,
};
pub use sides::{LnBound, Sides};
