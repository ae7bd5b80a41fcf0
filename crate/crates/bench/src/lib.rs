//! Shared fixtures for the criterion benches.

use nevbound::hamiltonian::family_example_b6;
use nevbound::{ComparisonData, HamburgerHamiltonian};

/// The `(3, 1)` example family and its exact majorants.
pub fn example() -> (HamburgerHamiltonian, ComparisonData) {
    let h = family_example_b6(3.0, 1.0).expect("valid parameters").hamiltonian;
    let d = ComparisonData::example_b6(3.0, 1.0).expect("valid parameters");
    (h, d)
}

/// A finite Hamiltonian with `n` intervals and angles stepping by one radian.
pub fn chain(n: usize) -> HamburgerHamiltonian {
    let l = (1..=n).map(|j| 1.0 / j as f64).collect();
    let p = (0..n).map(|j| j as f64).collect();
    HamburgerHamiltonian::new_validated(l, p).expect("valid chain")
}
