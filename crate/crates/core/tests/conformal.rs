use std::f64::consts::{PI, TAU};

use systole_lab::conformal::harmonics::y20;
use systole_lab::conformal::*;
use systole_lab::geom::bodies::icosphere;
use systole_lab::Vec3;

/// Adaptive Simpson on `[a, b]`.
fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn rec(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
            return left + right + (left + right - whole) / 15.0;
        }
        rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) + rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
    let (fa, fm, fb) = (f(a), f(0.5 * (a + b)), f(b));
    rec(f, a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), tol, 40)
}

#[test]
fn area_of_axisymmetric_factor_matches_adaptive_quadrature() {
    let grid = SphericalGrid::new(48).unwrap();
    for eps in [0.1, 0.3, 1.0] {
        let c = ConformalMetric::exp_y20(eps);
        let oracle = TAU * simpson(&|z| (2.0 * eps * y20(&Vec3::new(0.0, 0.0, z))).exp(), -1.0, 1.0, 1e-14);
        let area = conformal_area(&c, &grid);
        assert!((area - oracle).abs() < 1e-8, "ε = {eps}: {area} vs {oracle}");
    }
}

#[test]
fn constant_factor_areas() {
    let grid = SphericalGrid::new(48).unwrap();
    assert!((conformal_area(&ConformalMetric::constant(1.0).unwrap(), &grid) - 4.0 * PI).abs() < 1e-10);
    assert!((conformal_area(&ConformalMetric::constant(2.0).unwrap(), &grid) - 16.0 * PI).abs() < 1e-10);
}

/// Cotangent Laplacian `(Lu)ᵢ = ½ Σⱼ (cot α + cot β)(uⱼ − uᵢ)` on a mesh;
/// it approximates `∫_{cell i} Δu`.
fn cotan_laplacian(vertices: &[Vec3], triangles: &[[u32; 3]], u: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; vertices.len()];
    for t in triangles {
        for k in 0..3 {
            let (i, j, o) = (t[k] as usize, t[(k + 1) % 3] as usize, t[(k + 2) % 3] as usize);
            let (a, b) = (vertices[i] - vertices[o], vertices[j] - vertices[o]);
            let cot = a.dot(&b) / a.cross(&b).norm();
            out[i] += 0.5 * cot * (u[j] - u[i]);
            out[j] += 0.5 * cot * (u[i] - u[j]);
        }
    }
    out
}

#[test]
fn green_potential_has_point_sources() {
    let a = 0.5;
    let y = Vec3::new(0.11, 0.23, 1.0).normalize();
    let mu = RadonMassSpec::new(vec![(y, a), (-y, -a)]).unwrap();
    let mesh = icosphere(5);
    let v = mesh.vertices();
    let u = green_potential(&mu, v);
    let lap = cotan_laplacian(v, mesh.triangles(), &u);
    let flux = |c: Vec3| -> f64 { v.iter().zip(&lap).filter(|(p, _)| (*p - c).norm() < 0.4).map(|(_, l)| l).sum() };
    // Δu = −μ: the flux into a disk around each atom is minus its mass.
    assert!((flux(y) + a).abs() < 0.02 * a, "north flux {}", flux(y));
    assert!((flux(-y) - a).abs() < 0.02 * a, "south flux {}", flux(-y));
    // Away from the atoms u is harmonic.
    let band: f64 =
        v.iter().zip(&lap).filter(|(p, _)| (*p - y).norm() > 0.4 && (*p + y).norm() > 0.4).map(|(_, l)| l.abs()).sum();
    assert!(band < 0.02 * a, "harmonic residual {band}");
}

#[test]
fn green_potential_is_linear() {
    let m1 = RadonMassSpec::quadrupole(0.4, Vec3::z(), Vec3::x()).unwrap();
    let m2 = RadonMassSpec::quadrupole(0.7, Vec3::y(), Vec3::new(1.0, 1.0, 0.0)).unwrap();
    let both = RadonMassSpec::new(m1.atoms().iter().chain(m2.atoms()).copied().collect()).unwrap();
    let grid = SphericalGrid::new(8).unwrap();
    let (u1, u2, u) =
        (green_potential(&m1, grid.nodes()), green_potential(&m2, grid.nodes()), green_potential(&both, grid.nodes()));
    for k in 0..grid.len() {
        assert!((u[k] - u1[k] - u2[k]).abs() <= 1e-15 * (1.0 + u[k].abs()));
    }
}

#[test]
fn y20_metric_systole_is_the_equator() {
    // For t > 0 the factor is smallest on the equator, which is the
    // shortest projective line: sys = π·e^{t·Y₂₀(equator)}.
    let sg = SphereGraph::new(3, 3).unwrap();
    for t in [0.3, 0.8] {
        let oracle = PI * (t * y20(&Vec3::x())).exp();
        let s = conformal_systole(&ConformalMetric::exp_y20(t), &sg).unwrap();
        assert!(s.sys >= oracle * (1.0 - 1e-9) && s.sys <= oracle * 1.01, "t = {t}: {} vs {oracle}", s.sys);
    }
}

#[test]
fn cone_metric_systole_is_finite_and_even() {
    let sg = SphereGraph::new(3, 2).unwrap();
    let y = Vec3::new(0.2, 0.1, 1.0).normalize();
    let mu = RadonMassSpec::quadrupole(1.0, y, Vec3::new(1.0, -0.3, 0.05).normalize()).unwrap();
    let c = ConformalMetric::cone(mu);
    let s = conformal_systole(&c, &sg).unwrap();
    assert!(s.sys.is_finite() && s.sys > 0.0);
    let grid = SphericalGrid::new(48).unwrap();
    // The chain still bounds the area from below, up to singular quadrature.
    let gs = GreatCircleSpace::new(grid, 256);
    let ch = holder_chain(&c, &gs, s.sys, s.length_tolerance());
    assert!(ch.santalo >= ch.holder);
}

#[test]
fn odd_dipole_cone_metric_has_no_systole() {
    let sg = SphereGraph::new(1, 1).unwrap();
    let mu = RadonMassSpec::new(vec![(Vec3::z(), 0.5), (-Vec3::z(), -0.5)]).unwrap();
    assert!(matches!(conformal_systole(&ConformalMetric::cone(mu), &sg), Err(systole_lab::Error::OddMetric(_))));
}

#[test]
fn santalo_on_default_grid() {
    let gs = GreatCircleSpace::standard().unwrap();
    assert!((gs.total_measure() - 4.0 * PI).abs() < 1e-10);
    let one = santalo_sides(|_| 1.0, &gs);
    assert!((one.lhs - 4.0 * PI).abs() < 1e-10 && (one.rhs - 4.0 * PI).abs() < 1e-10);
    let z2 = santalo_sides(|x| x.z * x.z, &gs);
    assert!((z2.lhs - 4.0 * PI / 3.0).abs() < 1e-6 && (z2.rhs - 4.0 * PI / 3.0).abs() < 1e-6);
    let odd = santalo_sides(|x| harmonics::real_harmonic(1, 0, x), &gs);
    assert!(odd.lhs.abs() < 1e-12 && odd.rhs.abs() < 1e-12);
}

#[test]
fn holder_chain_on_smooth_even_metric() {
    let sg = SphereGraph::new(3, 3).unwrap();
    let gs = GreatCircleSpace::standard().unwrap();
    let c = ConformalMetric::exp_y20(0.3);
    let s = conformal_systole(&c, &sg).unwrap();
    let ch = holder_chain(&c, &gs, s.sys, s.length_tolerance());
    assert!(ch.holds(), "violations {:?}", &ch.violations[..ch.violations.len().min(5)]);
    assert!(ch.quotient_deficit() > 0.0);
    assert!((ch.area - ch.santalo).abs() < 1e-9 * ch.area);
    // Hölder is tight exactly on circles where f is constant.
    for r in &ch.circles {
        if r.holder_gap() < 1e-12 {
            assert!(r.stddev < 1e-5);
        }
    }
}

#[test]
fn variance_remainder_rigidity() {
    // Small deficit forces small variance along e^{tY₂₀}.
    let sg = SphereGraph::new(3, 3).unwrap();
    let grid = SphericalGrid::new(48).unwrap();
    let mut prev = None;
    for t in [0.0, 0.05, 0.2, 0.5, 1.0] {
        let r = variance_remainder(&ConformalMetric::exp_y20(t), &grid, &sg).unwrap();
        assert!(r.holds, "t = {t}: {r:?}");
        if let Some((d, v)) = prev {
            assert!(r.deficit > d && r.variance > v);
        }
        prev = Some((r.deficit, r.variance));
    }
}
