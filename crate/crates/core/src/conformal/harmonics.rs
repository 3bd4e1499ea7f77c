//! Real orthonormal spherical harmonics.

use crate::Vec3;

/// Associated Legendre function `P_l^m(x)` without the Condon–Shortley
/// phase, `0 ≤ m ≤ l`.
pub fn assoc_legendre(l: usize, m: usize, x: f64) -> f64 {
    let s = (1.0 - x * x).max(0.0).sqrt();
    let mut pmm = 1.0;
    for k in 0..m {
        pmm *= (2 * k + 1) as f64 * s;
    }
    if l == m {
        return pmm;
    }
    let mut pm1 = x * (2 * m + 1) as f64 * pmm;
    if l == m + 1 {
        return pm1;
    }
    let mut pm0 = pmm;
    for k in m + 2..=l {
        let next = ((2 * k - 1) as f64 * x * pm1 - (k + m - 1) as f64 * pm0) / (k - m) as f64;
        pm0 = pm1;
        pm1 = next;
    }
    pm1
}

/// `Y_lm` at a unit vector; `m < 0` are the sine harmonics. Orthonormal on
/// the unit sphere.
pub fn real_harmonic(l: usize, m: i64, x: &Vec3) -> f64 {
    let am = m.unsigned_abs() as usize;
    assert!(am <= l, "|m| must not exceed l");
    let mut ratio = 1.0;
    for k in (l - am + 1)..=(l + am) {
        ratio /= k as f64;
    }
    let norm = ((2 * l + 1) as f64 / (4.0 * std::f64::consts::PI) * ratio).sqrt();
    let p = assoc_legendre(l, am, x.z.clamp(-1.0, 1.0));
    if m == 0 {
        return norm * p;
    }
    let phi = x.y.atan2(x.x);
    let trig = if m > 0 { (am as f64 * phi).cos() } else { (am as f64 * phi).sin() };
    std::f64::consts::SQRT_2 * norm * p * trig
}

/// `Y₂₀ = √(5/16π)·(3z² − 1)`.
pub fn y20(x: &Vec3) -> f64 {
    (5.0 / (16.0 * std::f64::consts::PI)).sqrt() * (3.0 * x.z * x.z - 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conformal::grid::SphericalGrid;

    #[test]
    fn orthonormal_on_the_grid() {
        let g = SphericalGrid::new(24).unwrap();
        let mut basis = Vec::new();
        for l in 0..=6usize {
            for m in -(l as i64)..=(l as i64) {
                basis.push((l, m));
            }
        }
        for &(l1, m1) in &basis {
            for &(l2, m2) in &basis {
                let ip = g.integrate(|x| real_harmonic(l1, m1, x) * real_harmonic(l2, m2, x));
                let want = if (l1, m1) == (l2, m2) { 1.0 } else { 0.0 };
                assert!((ip - want).abs() < 1e-12, "({l1},{m1})·({l2},{m2}) = {ip}");
            }
        }
    }

    #[test]
    fn y20_closed_form() {
        let x = Vec3::new(0.3, -0.4, 0.5).normalize();
        assert!((real_harmonic(2, 0, &x) - y20(&x)).abs() < 1e-15);
    }

    #[test]
    fn parity() {
        let x = Vec3::new(0.2, 0.7, -0.1).normalize();
        for l in 0..5usize {
            for m in -(l as i64)..=(l as i64) {
                let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
                assert!((real_harmonic(l, m, &-x) - sign * real_harmonic(l, m, &x)).abs() < 1e-12);
            }
        }
    }
}
