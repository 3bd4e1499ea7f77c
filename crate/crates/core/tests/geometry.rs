use std::f64::consts::PI;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use systole_lab::geom::bodies::{ellipsoid_icosphere, icosphere, random_polytope, smooth_body, Support};
use systole_lab::geom::{build_symmetric_hull, project_shadow, PlanarConvexBody};
use systole_lab::radii::{circumradius, inradius, john_ellipsoid, min_enclosing_ball, RadiiReport};
use systole_lab::Vec3;

fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let inner: f64 = (1..n).map(|i| f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 }).sum();
    h / 3.0 * (f(a) + f(b) + inner)
}

#[test]
fn hull_of_ball_cloud_contains_every_input_point() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let pts: Vec<Vec3> = (0..500)
        .map(|_| loop {
            let p = Vec3::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            if p.norm() <= 2.0 {
                break p;
            }
        })
        .collect();
    let m = build_symmetric_hull(&pts).unwrap();
    assert!(m.vertices().len() < 1000);
    let tol = 1e-9 * m.diagonal();
    let planes = m.face_planes();
    for p in pts.iter().flat_map(|p| [*p, -p]) {
        assert!(planes.iter().all(|(n, d)| n.dot(&p) <= d + tol));
    }
    // Every retained vertex is an input point and extreme: some face passes through it.
    for v in m.vertices() {
        assert!(pts.iter().any(|p| p == v || -p == *v));
        assert!(planes.iter().any(|(n, d)| (n.dot(v) - d).abs() <= tol));
    }
}

#[test]
fn hull_is_idempotent() {
    for m in [random_polytope(30, 3).unwrap(), icosphere(2), ellipsoid_icosphere([1.0, 2.0, 3.0], 2)] {
        let again = build_symmetric_hull(m.vertices()).unwrap();
        // `+ 0.0` folds −0.0 into +0.0.
        let key = |v: &Vec3| [(v.x + 0.0).to_bits(), (v.y + 0.0).to_bits(), (v.z + 0.0).to_bits()];
        let mut a: Vec<_> = m.vertices().iter().map(key).collect();
        let mut b: Vec<_> = again.vertices().iter().map(key).collect();
        a.sort();
        b.sort();
        assert_eq!(a, b);
    }
}

#[test]
fn prolate_ellipsoid_area_matches_quadrature() {
    // area = 2π ∫₀^π sin θ √(cos²θ + 4 sin²θ) dθ for semi-axes (1, 1, 2).
    let oracle = 2.0 * PI * simpson(|t| t.sin() * (t.cos().powi(2) + 4.0 * t.sin().powi(2)).sqrt(), 0.0, PI, 4000);
    let m = ellipsoid_icosphere([1.0, 1.0, 2.0], 6);
    assert!((m.area() - oracle).abs() < 5e-3 * oracle, "{} vs {oracle}", m.area());
    assert!(m.area() <= oracle);
}

#[test]
fn inscribed_areas_increase_under_refinement() {
    let areas: Vec<f64> = (0..5).map(|k| icosphere(k).area()).collect();
    assert!(areas.windows(2).all(|w| w[0] < w[1]));
    assert!(*areas.last().unwrap() < 4.0 * PI);
}

#[test]
fn shadow_of_ellipsoid_is_an_ellipse() {
    let m = smooth_body(&Support::Ellipsoid { semi_axes: [1.0, 2.0, 3.0] }, 0.05).unwrap();
    let s = project_shadow(&m, &Vec3::x()).unwrap();
    let r = s.metrics();
    assert!((r.width - 4.0).abs() < 0.01, "{}", r.width);
    assert!((r.area - 6.0 * PI).abs() < 0.01 * 6.0 * PI, "{}", r.area);
    let far = s.boundary().iter().map(|p| p[0].hypot(p[1])).fold(0.0, f64::max);
    assert!((far - 3.0).abs() < 1e-9);
}

#[test]
fn random_twenty_gon_bonnesen() {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    for _ in 0..20 {
        let half: Vec<[f64; 2]> = (0..10)
            .map(|k| {
                let phi = PI * (k as f64 + rng.gen_range(0.0..0.9)) / 10.0;
                let rad = rng.gen_range(0.8..1.2);
                [rad * phi.cos(), rad * phi.sin()]
            })
            .collect();
        let pts: Vec<[f64; 2]> =
            half.iter().chain(half.iter().map(|p| [-p[0], -p[1]]).collect::<Vec<_>>().iter()).copied().collect();
        let body = PlanarConvexBody::from_points(&pts).unwrap();
        assert!(body.is_centrally_symmetric(1e-12));
        let b = body.bonnesen().unwrap();
        assert!(b.holds && b.radii_gap <= b.deficit && b.area_weighted <= b.deficit && b.length_weighted <= b.deficit);
        assert!(body.metrics().width_area_slack() >= -1e-12);
    }
}

#[test]
fn asymmetric_cloud_enclosing_ball() {
    let pts =
        [Vec3::new(2.0, 0.0, 0.0), Vec3::new(-1.0, 0.0, 0.0), Vec3::new(0.0, 1.0, 0.0), Vec3::new(0.0, -1.0, 0.0)];
    let (c, r) = min_enclosing_ball(&pts).unwrap();
    assert!((c - Vec3::new(0.5, 0.0, 0.0)).norm() < 1e-12 && (r - 1.5).abs() < 1e-12);
}

#[test]
fn radii_orderings_on_polytopes() {
    for seed in 0..8 {
        let m = random_polytope(16, seed).unwrap();
        let rep = RadiiReport::compute(&m).unwrap();
        assert!(rep.inradius <= rep.circumradius);
        assert!(rep.relation_violations(1e-9).is_empty(), "{:?}", rep.relation_violations(1e-9));
        let e = &rep.john;
        assert!(rep.inradius <= 3f64.sqrt() * e.a() * (1.0 + e.eps) + 1e-12);
        assert!(e.c() <= rep.circumradius * (1.0 + e.eps) + 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn antipode_is_exact(seed in 0u64..1000, n in 6usize..40) {
        let m = random_polytope(n, seed).unwrap();
        for v in 0..m.vertices().len() {
            prop_assert_eq!(m.antipode(m.antipode(v)), v);
            prop_assert_eq!(m.vertex(m.antipode(v)), -m.vertex(v));
        }
    }

    #[test]
    fn radii_scale_exactly(seed in 0u64..1000, k in -3i32..4) {
        let s = 2f64.powi(k);
        let m = random_polytope(12, seed).unwrap();
        let ms = m.scaled(s);
        prop_assert_eq!(circumradius(&ms), s * circumradius(&m));
        prop_assert!((inradius(&ms) - s * inradius(&m)).abs() <= 1e-12 * s);
        let (e, es) = (john_ellipsoid(&m, 1e-6).unwrap(), john_ellipsoid(&ms, 1e-6).unwrap());
        for i in 0..3 {
            prop_assert!((es.semi_axes[i] - s * e.semi_axes[i]).abs() <= 1e-9 * s * e.semi_axes[i]);
        }
    }

    #[test]
    fn radii_rotation_invariant(seed in 0u64..1000, ax in -1.0f64..1.0, ay in -1.0f64..1.0, angle in 0.0f64..6.0) {
        let m = random_polytope(12, seed).unwrap();
        let axis = nalgebra::Unit::new_normalize(Vec3::new(ax, ay, 0.7));
        let rot = nalgebra::Rotation3::from_axis_angle(&axis, angle).into_inner();
        let mr = m.rotated(&rot).unwrap();
        let (a, b) = (RadiiReport::compute(&m).unwrap(), RadiiReport::compute(&mr).unwrap());
        prop_assert!((a.circumradius - b.circumradius).abs() <= 1e-9 * a.circumradius);
        prop_assert!((a.inradius - b.inradius).abs() <= 1e-9 * a.inradius);
        for i in 0..3 {
            prop_assert!((a.john.semi_axes[i] - b.john.semi_axes[i]).abs() <= 1e-5 * a.john.semi_axes[i]);
        }
    }

    #[test]
    fn symmetric_polygon_width_area(n in 3usize..40, stretch in 0.2f64..5.0) {
        let body = PlanarConvexBody::ellipse(1.0, stretch, 2 * n).unwrap();
        let r = body.metrics();
        prop_assert!(r.width * r.width <= 4.0 / PI * r.area + 1e-12);
    }
}
