use num_complex::Complex64;
use std::f64::consts::LN_2;

pub type C64 = Complex64;
/// Row-major 2×2 complex matrix.
pub type CMat2 = [[C64; 2]; 2];

pub fn identity() -> CMat2 {
    let (o, z) = (C64::new(1.0, 0.0), C64::new(0.0, 0.0));
    [[o, z], [z, o]]
}

pub fn mat_mul(a: &CMat2, b: &CMat2) -> CMat2 {
    [
        [a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]],
        [a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]],
    ]
}

pub fn det(a: &CMat2) -> C64 {
    a[0][0] * a[1][1] - a[0][1] * a[1][0]
}

pub fn from_real(m: [[f64; 2]; 2]) -> CMat2 {
    [[C64::new(m[0][0], 0.0), C64::new(m[0][1], 0.0)], [C64::new(m[1][0], 0.0), C64::new(m[1][1], 0.0)]]
}

fn max_abs(a: &CMat2) -> f64 {
    a.iter().flatten().map(|c| c.norm()).fold(0.0, f64::max)
}

/// Largest singular value, from `σ² = (s + √((s−2d)(s+2d)))/2` with
/// `s = ‖A‖_F²` and `d = |det A|`.
pub fn spectral_norm(a: &CMat2) -> f64 {
    let s: f64 = a.iter().flatten().map(|c| c.norm_sqr()).sum();
    let d = det(a).norm();
    let disc = ((s - 2.0 * d) * (s + 2.0 * d)).max(0.0);
    ((s + disc.sqrt()) / 2.0).sqrt()
}

/// `entries · e^{logscale}` with `max |entry| ∈ [1/2, 2]` after
/// normalization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledMat2 {
    pub entries: CMat2,
    pub logscale: f64,
}

impl ScaledMat2 {
    pub fn identity() -> Self {
        ScaledMat2 { entries: identity(), logscale: 0.0 }
    }

    pub fn from_mat(m: CMat2) -> Self {
        let mut s = ScaledMat2 { entries: m, logscale: 0.0 };
        s.normalize();
        s
    }

    /// Rescales by an exact power of two so the largest entry lies in
    /// `[2^{-1/2}, 2^{1/2}]`.
    pub fn normalize(&mut self) {
        let m = max_abs(&self.entries);
        if m == 0.0 || !m.is_finite() {
            return;
        }
        let k = m.log2().round() as i32;
        if k != 0 {
            let f = 2f64.powi(-k);
            for c in self.entries.iter_mut().flatten() {
                *c *= f;
            }
            self.logscale += k as f64 * LN_2;
        }
    }

    pub fn mul(&self, other: &ScaledMat2) -> ScaledMat2 {
        let mut out = ScaledMat2 {
            entries: mat_mul(&self.entries, &other.entries),
            logscale: self.logscale + other.logscale,
        };
        out.normalize();
        out
    }

    /// `ln ‖·‖` in the spectral norm.
    pub fn log_norm(&self) -> f64 {
        self.logscale + spectral_norm(&self.entries).ln()
    }

    /// Determinant of the unit-scaled entries; the represented determinant
    /// is this times `e^{2·logscale}`.
    pub fn scaled_det(&self) -> C64 {
        det(&self.entries)
    }

    /// `|det(entries) − e^{-2·logscale}|`: the deviation from determinant one
    /// measured in the scaled representation.
    pub fn det_defect(&self) -> f64 {
        (self.scaled_det() - C64::new((-2.0 * self.logscale).exp(), 0.0)).norm()
    }

    /// The represented matrix, if it fits in `f64`.
    pub fn to_mat(&self) -> Option<CMat2> {
        let f = self.logscale.exp();
        if !f.is_finite() {
            return None;
        }
        let mut m = self.entries;
        for c in m.iter_mut().flatten() {
            *c *= f;
        }
        Some(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn norm_of_diagonal_and_shear() {
        let d = from_real([[3.0, 0.0], [0.0, -0.5]]);
        assert!((spectral_norm(&d) - 3.0).abs() < 1e-14);
        let r: f64 = 2.0;
        let shear = from_real([[1.0, -r], [0.0, 1.0]]);
        assert!((spectral_norm(&shear) - (r + (r * r + 4.0).sqrt()) / 2.0).abs() < 1e-14);
    }

    #[test]
    fn normalization_is_exact() {
        let m = from_real([[1e200, 3.0], [-7.0, 1e-50]]);
        let s = ScaledMat2::from_mat(m);
        let big = s.entries.iter().flatten().map(|c| c.norm()).fold(0.0, f64::max);
        assert!((0.5..=2.0).contains(&big));
        assert!((s.logscale - 1e200f64.ln()).abs() < 1.0);
        let back = s.to_mat().unwrap();
        assert!((back[1][0].re + 7.0).abs() < 1e-12);
        let huge = ScaledMat2 { entries: identity(), logscale: 1e4 };
        assert_eq!(huge.to_mat(), None);
    }
}
