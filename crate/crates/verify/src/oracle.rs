//! Brute-force 2-D lattice oracle for Mahler measures, used only as a
//! low-precision sanity cross-check of the main quadrature pipeline.

use anyhow::{bail, Result};

/// Midpoint Riemann sum of `log |P(e^{2 pi i t1}, e^{2 pi i t2})|` over a
/// `grid x grid` lattice for `P = a(x + 1/x) + b(y + 1/y) + c`.
///
/// On the torus the polynomial is real: `2a cos(2 pi t1) + 2b cos(2 pi t2) + c`.
/// Accuracy is only a few digits; errors out if a lattice node lands on a
/// zero of `P` (perturb the grid size in that case).
pub fn brute_force_mahler_oracle(a: f64, b: f64, c: f64, grid: usize) -> Result<f64> {
    if grid < 64 {
        bail!("grid must be at least 64");
    }
    let mut sum = 0f64;
    for i in 0..grid {
        let t1 = (i as f64 + 0.5) / grid as f64;
        let u = 2.0 * a * (2.0 * std::f64::consts::PI * t1).cos();
        for j in 0..grid {
            let t2 = (j as f64 + 0.5) / grid as f64;
            let v = u + 2.0 * b * (2.0 * std::f64::consts::PI * t2).cos() + c;
            if v.abs() < 1e-12 {
                bail!("lattice node ({}, {}) hits a zero of P", i, j);
            }
            sum += v.abs().ln();
        }
    }
    Ok(sum / (grid * grid) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_cases() {
        // (2,1,0): trivial region, m = log 2
        let m = brute_force_mahler_oracle(2.0, 1.0, 0.0, 512).unwrap();
        assert!((m - 2f64.ln()).abs() < 1e-3, "m = {}", m);
        // (sqrt7,1,3): trivial region, m = log sqrt7
        let m = brute_force_mahler_oracle(7f64.sqrt(), 1.0, 3.0, 512).unwrap();
        assert!((m - 7f64.ln() / 2.0).abs() < 1e-3, "m = {}", m);
    }

    #[test]
    fn rejects_small_grid() {
        assert!(brute_force_mahler_oracle(1.0, 1.0, 3.0, 32).is_err());
    }
}
