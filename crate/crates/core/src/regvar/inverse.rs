use super::function::ComparisonFunction;

/// Largest `u` the threshold search explores; beyond it the sup is reported
/// as `+∞`.
pub const U_MAX: f64 = 1e12;

/// Threshold search in log coordinates.
///
/// `g(u) ≤ 0` is the predicate at `t = e^u`. Returns the `u` of
/// `sup{t ≥ 1 : g ≤ 0 on [1, t]} ∪ {1}`, or `+∞` when the predicate holds up
/// to `U_MAX`. The running sup is sampled on a grid of eight points per
/// doubling of `t` (below `u = 64`) and per `2^{1/8}` growth of `u` beyond,
/// then the first failing cell is bisected.
pub fn running_sup_threshold_ln<G: Fn(f64) -> f64>(g: G) -> f64 {
    let ok = |u: f64| g(u) <= 0.0;
    if !ok(0.0) {
        return 0.0;
    }
    let fine = std::f64::consts::LN_2 / 8.0;
    let coarse = 2f64.powf(0.125) - 1.0;
    let mut u = 0.0;
    loop {
        let step = if u < 64.0 { fine } else { u * coarse };
        let next = u + step;
        if next > U_MAX {
            return f64::INFINITY;
        }
        if !ok(next) {
            let (mut lo, mut hi) = (u, next);
            for _ in 0..200 {
                if hi - lo <= 4.0 * f64::EPSILON * hi.max(1.0) {
                    break;
                }
                let mid = 0.5 * (lo + hi);
                if ok(mid) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            return lo;
        }
        u = next;
    }
}

/// `ln sup{t ≥ 1 : sup_{1≤s≤t} f(s) ≤ y} ∪ {1}`.
pub fn generalized_inverse_ln(f: &ComparisonFunction, y: f64) -> f64 {
    if !(y > 0.0) {
        return 0.0;
    }
    let ly = y.ln();
    running_sup_threshold_ln(|u| f.ln_at_ln(u) - ly)
}

/// `sup{t ≥ 1 : sup_{1≤s≤t} f(s) ≤ y} ∪ {1}`; `+∞` when the predicate
/// always holds.
pub fn generalized_inverse(f: &ComparisonFunction, y: f64) -> f64 {
    generalized_inverse_ln(f, y).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn cube_at_thousand_is_ten() {
        let d = ComparisonFunction::power(3.0);
        assert_relative_eq!(generalized_inverse(&d, 1000.0), 10.0, max_relative = 1e-12);
    }

    #[test]
    fn conventions() {
        let c = ComparisonFunction::constant(2.0);
        assert_eq!(generalized_inverse(&c, 3.0), f64::INFINITY);
        assert_eq!(generalized_inverse(&c, 1.0), 1.0);
    }

    #[test]
    fn running_sup_respects_bumps() {
        // f rises above y at t ~ 5 and falls back; the sup stops at the bump
        let f = ComparisonFunction::from_fn(
            |t: f64| if (4.0..6.0).contains(&t) { 10.0 } else { 1.0 },
            "bump",
            None,
            super::super::Monotonicity::None,
        );
        let r = generalized_inverse(&f, 2.0);
        assert!((r - 4.0).abs() < 1e-9, "{r}");
    }
}
