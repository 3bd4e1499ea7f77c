//! Great-circle averaging on the round sphere and the Hölder chain proof of
//! Pu's inequality.
//!
//! Circles are indexed by their poles, which run over the grid nodes with
//! the grid weights, so `ν(Γ) = Σ w = 4π`. Along a circle the trapezoid rule
//! with `n_t` points is exact for trigonometric polynomials of degree below
//! `n_t`.

use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

use super::grid::SphericalGrid;
use super::metric::ConformalMetric;
use crate::{par, Result, Vec3};

#[derive(Clone, Debug)]
pub struct GreatCircleSpace {
    grid: SphericalGrid,
    n_t: usize,
}

/// Orthonormal `(e₁, e₂)` spanning the plane orthogonal to `p`.
pub fn circle_frame(p: &Vec3) -> (Vec3, Vec3) {
    let a = if p.x.abs() <= p.y.abs() && p.x.abs() <= p.z.abs() {
        Vec3::x()
    } else if p.y.abs() <= p.z.abs() {
        Vec3::y()
    } else {
        Vec3::z()
    };
    let e1 = p.cross(&a).normalize();
    (e1, p.cross(&e1).normalize())
}

impl GreatCircleSpace {
    pub fn new(grid: SphericalGrid, n_t: usize) -> Self {
        GreatCircleSpace { grid, n_t: n_t.max(3) }
    }

    /// Default grid and arc resolution.
    pub fn standard() -> Result<Self> {
        Ok(Self::new(SphericalGrid::new(crate::tolerances::GRID_POLAR)?, crate::tolerances::CIRCLE_POINTS))
    }

    pub fn grid(&self) -> &SphericalGrid {
        &self.grid
    }

    pub fn arc_points(&self) -> usize {
        self.n_t
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    /// `ν(Γ)`.
    pub fn total_measure(&self) -> f64 {
        self.grid.weights().iter().sum()
    }

    /// Points `γ(t_j)` of circle `k`.
    pub fn circle_points(&self, k: usize) -> impl Iterator<Item = Vec3> + '_ {
        let (e1, e2) = circle_frame(&self.grid.nodes()[k]);
        (0..self.n_t).map(move |j| {
            let t = TAU * j as f64 / self.n_t as f64;
            e1 * t.cos() + e2 * t.sin()
        })
    }

    /// `∫ F(γ(t)) dt` over circle `k`.
    pub fn circle_integral(&self, k: usize, f: impl Fn(&Vec3) -> f64) -> f64 {
        TAU / self.n_t as f64 * self.circle_points(k).map(|x| f(&x)).sum::<f64>()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SantaloSides {
    pub lhs: f64,
    pub rhs: f64,
}

impl SantaloSides {
    pub fn relative_error(&self) -> f64 {
        (self.lhs - self.rhs).abs() / self.lhs.abs().max(f64::MIN_POSITIVE)
    }
}

/// `∫_{S²} F` against `(1/2π) ∫_Γ ∫_γ F dt dν`.
pub fn santalo_sides(f: impl Fn(&Vec3) -> f64 + Sync, gs: &GreatCircleSpace) -> SantaloSides {
    let lhs = gs.grid.integrate(&f);
    let ks: Vec<usize> = (0..gs.len()).collect();
    let per = par::map(&ks, |&k| gs.grid.weights()[k] * gs.circle_integral(k, &f));
    SantaloSides { lhs, rhs: per.iter().sum::<f64>() / TAU }
}

/// One great circle in the Hölder chain.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CircleRecord {
    pub pole: [f64; 3],
    /// `∫ f² dt`.
    pub energy: f64,
    /// `length_g(γ) = ∫ f dt`.
    pub length: f64,
    /// `√(2π ∫ f² dt)`, which dominates the length.
    pub holder: f64,
    /// Standard deviation of `f` along the circle.
    pub stddev: f64,
}

impl CircleRecord {
    pub fn holder_gap(&self) -> f64 {
        self.holder - self.length
    }
}

/// The chain
///
/// ```text
/// area(S², g) = (1/2π) ∫_Γ ∫ f² dt dν ≥ (1/4π²) ∫_Γ length² dν ≥ (4/π) sys²
/// ```
///
/// evaluated circle by circle; halving gives Pu's inequality on RP².
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HolderChain {
    /// `∫_{S²} f²`.
    pub area: f64,
    /// `(1/2π) Σ w ∫ f² dt`.
    pub santalo: f64,
    /// `(1/4π²) Σ w length²`.
    pub holder: f64,
    /// `ν(Γ)·min length² / 4π²`.
    pub min_length_bound: f64,
    /// `(4/π) sys²`.
    pub pu_bound: f64,
    pub sys: f64,
    pub tolerance: f64,
    pub min_length: f64,
    pub max_holder_gap: f64,
    /// Circles with `holder < length − tol` or `length < 2·sys − tol`.
    pub violations: Vec<usize>,
    pub circles: Vec<CircleRecord>,
}

impl HolderChain {
    /// Every link of the chain holds within the tolerance.
    pub fn holds(&self) -> bool {
        let t = self.tolerance;
        self.violations.is_empty()
            && self.santalo >= self.holder - t
            && self.holder >= self.min_length_bound - t
            && self.area >= 4.0 / PI * (self.sys - 0.5 * t).max(0.0).powi(2) - 1e-9 * self.area
    }

    /// `area(RP²) − (2/π) sys²` from the aggregated chain.
    pub fn quotient_deficit(&self) -> f64 {
        0.5 * (self.area - self.pu_bound)
    }
}

/// Evaluates the chain for `f` with systole estimate `sys` (quotient) and
/// length tolerance `tol`: circles must satisfy `length ≥ 2·sys − tol`.
pub fn holder_chain(c: &ConformalMetric, gs: &GreatCircleSpace, sys: f64, tol: f64) -> HolderChain {
    let ks: Vec<usize> = (0..gs.len()).collect();
    let circles: Vec<CircleRecord> = par::map(&ks, |&k| {
        let vals: Vec<f64> = gs.circle_points(k).map(|x| c.even_factor(&x)).collect();
        let n = vals.len() as f64;
        let mean = vals.iter().sum::<f64>() / n;
        let sq = vals.iter().map(|v| v * v).sum::<f64>() / n;
        let energy = TAU * sq;
        let p = gs.grid.nodes()[k];
        CircleRecord {
            pole: [p.x, p.y, p.z],
            energy,
            length: TAU * mean,
            holder: (TAU * energy).sqrt(),
            stddev: vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>().sqrt() / n.sqrt(),
        }
    });
    let w = gs.grid.weights();
    let area = gs.grid.integrate(|x| c.even_factor(x).powi(2));
    let santalo = circles.iter().zip(w).map(|(r, w)| w * r.energy).sum::<f64>() / TAU;
    let holder = circles.iter().zip(w).map(|(r, w)| w * r.length * r.length).sum::<f64>() / (TAU * TAU);
    let min_length = circles.iter().map(|r| r.length).fold(f64::INFINITY, f64::min);
    let violations = circles
        .iter()
        .enumerate()
        .filter(|(_, r)| r.holder < r.length - tol || r.length < 2.0 * sys - tol)
        .map(|(k, _)| k)
        .collect();
    HolderChain {
        area,
        santalo,
        holder,
        min_length_bound: gs.total_measure() * min_length * min_length / (TAU * TAU),
        pu_bound: 4.0 / PI * sys * sys,
        sys,
        tolerance: tol,
        min_length,
        max_holder_gap: circles.iter().map(|r| r.holder_gap()).fold(0.0, f64::max),
        violations,
        circles,
    }
}
