//! Product quadrature on the unit sphere: Gauss–Legendre in `z` times the
//! uniform rule in longitude.
//!
//! With `n` polar nodes and `2n` longitudes the rule integrates every
//! spherical harmonic of degree below `2n` exactly, so the identities checked
//! on it hold to rounding. The southern nodes are exact negations of the
//! northern ones.

use crate::{Error, Result, Vec3};

#[derive(Clone, Debug)]
pub struct SphericalGrid {
    nodes: Vec<Vec3>,
    weights: Vec<f64>,
    antipode: Vec<u32>,
    polar: usize,
}

/// Gauss–Legendre nodes and weights on `[−1, 1]`, nodes descending, with
/// `x[n−1−i] = −x[i]` exactly.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 0 {
                1.0
            } else if n == 1 {
                z
            } else {
                p1
            };
            let pn1 = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (z * pn - pn1) / (z * z - 1.0);
            let dz = pn / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let weight = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = z;
        x[n - 1 - i] = -z;
        w[i] = weight;
        w[n - 1 - i] = weight;
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    (x, w)
}

impl SphericalGrid {
    /// `polar` Gauss–Legendre rows (even) of `2·polar` longitudes each.
    pub fn new(polar: usize) -> Result<Self> {
        if polar < 2 || polar % 2 == 1 {
            return Err(Error::InvalidArgument(format!("polar node count {polar} must be even and ≥ 2")));
        }
        let az = 2 * polar;
        let (z, wz) = gauss_legendre(polar);
        let half = polar / 2 * az;
        let mut nodes = Vec::with_capacity(2 * half);
        let mut weights = Vec::with_capacity(2 * half);
        for i in 0..polar / 2 {
            let rho = (1.0 - z[i] * z[i]).sqrt();
            for j in 0..az {
                let phi = std::f64::consts::TAU * j as f64 / az as f64;
                nodes.push(Vec3::new(rho * phi.cos(), rho * phi.sin(), z[i]));
                weights.push(wz[i] * std::f64::consts::TAU / az as f64);
            }
        }
        for k in 0..half {
            nodes.push(-nodes[k]);
            weights.push(weights[k]);
        }
        let antipode = (0..2 * half).map(|k| ((k + half) % (2 * half)) as u32).collect();
        Ok(SphericalGrid { nodes, weights, antipode, polar })
    }

    pub fn nodes(&self) -> &[Vec3] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn antipode(&self, k: usize) -> usize {
        self.antipode[k] as usize
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Highest spherical-harmonic degree integrated exactly.
    pub fn exact_degree(&self) -> usize {
        2 * self.polar - 1
    }

    /// `Σ wᵢ F(xᵢ)`.
    pub fn integrate(&self, f: impl Fn(&Vec3) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(x, w)| w * f(x)).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn legendre_rule_integrates_polynomials() {
        let (x, w) = gauss_legendre(10);
        for k in 0..20 {
            let q: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(k)).sum();
            let exact = if k % 2 == 1 { 0.0 } else { 2.0 / (k as f64 + 1.0) };
            assert!((q - exact).abs() < 1e-14, "x^{k}: {q}");
        }
    }

    #[test]
    fn weights_sum_to_sphere_area() {
        let g = SphericalGrid::new(48).unwrap();
        assert!((g.weights().iter().sum::<f64>() - 4.0 * PI).abs() < 1e-10);
    }

    #[test]
    fn nodes_are_unit_and_antipodal() {
        let g = SphericalGrid::new(8).unwrap();
        for k in 0..g.len() {
            assert!((g.nodes()[k].norm() - 1.0).abs() < 1e-15);
            assert_eq!(g.nodes()[g.antipode(k)], -g.nodes()[k]);
            assert_eq!(g.weights()[g.antipode(k)], g.weights()[k]);
        }
    }

    #[test]
    fn monomial_moments() {
        let g = SphericalGrid::new(48).unwrap();
        // ∫ x²y² = 4π/15, ∫ z⁴ = 4π/5.
        assert!((g.integrate(|p| p.x * p.x * p.y * p.y) - 4.0 * PI / 15.0).abs() < 1e-12);
        let z4 = g.integrate(|p| p.z.powi(4));
        assert!((z4 - 4.0 * PI / 5.0).abs() < 1e-12, "{z4}");
    }
}
