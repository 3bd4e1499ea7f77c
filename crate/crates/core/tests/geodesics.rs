use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use systole_lab::geodesic::systole::diameter;
use systole_lab::geodesic::*;
use systole_lab::geom::bodies::{icosphere, random_polytope, smooth_body, Support};

/// Quarter meridian of the spheroid (1, 1, c): ∫₀^{π/2} √(cos²φ + c² sin²φ) dφ.
fn quarter_meridian(c: f64) -> f64 {
    let n = 2000;
    let h = PI / 2.0 / n as f64;
    let f = |p: f64| (p.cos().powi(2) + c * c * p.sin().powi(2)).sqrt();
    h / 3.0 * (f(0.0) + f(PI / 2.0) + (1..n).map(|i| f(i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 }).sum::<f64>())
}

#[test]
fn spheroid_waist_loop_and_meridian_distances() {
    let m = smooth_body(&Support::Ellipsoid { semi_axes: [1.0, 1.0, 3.0] }, 0.08).unwrap();
    let g = GeodesicGraph::build(&m, 3).unwrap();
    let s = systole(&g).unwrap();
    assert!((s.sys - PI).abs() < 0.01 * PI, "sys {}", s.sys);
    let lp = systolic_loop(&g, &s);
    let waist = lp.iter().map(|&v| g.position(v as usize).z.abs()).fold(0.0, f64::max);
    assert!(waist < 0.2, "loop strays {waist} from the waist");
    assert!((g.path_length(&lp).unwrap() - 2.0 * s.sys).abs() < 1e-12);
    let q = quarter_meridian(3.0);
    let (d, _) = max_distance_to_loop(&g, &lp).unwrap();
    assert!((d - q).abs() < 0.02 * q, "D {d} vs {q}");
    let diam = diameter(&g).unwrap();
    assert!((diam - 2.0 * q).abs() < 0.02 * 2.0 * q, "diam {diam} vs {}", 2.0 * q);
    assert!(diam <= 2.0 * d + s.sys + 3.0 * g.max_arc_length());
}

#[test]
fn spheroid_report_has_positive_deficit() {
    let m = smooth_body(&Support::Ellipsoid { semi_axes: [1.0, 1.0, 3.0] }, 0.15).unwrap();
    let r = pu_report(&m, 3).unwrap();
    assert!(r.deficit > 0.0 && r.t > 0.0);
    assert!(r.checks_hold(), "{:?}", r.checks.failures());
}

#[test]
fn graph_metric_is_antipodally_equivariant_and_a_metric() {
    let m = random_polytope(14, 5).unwrap();
    let g = GeodesicGraph::build(&m, 2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let n = g.node_count();
    for _ in 0..10 {
        let (x, y, z) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
        let fx = g.distance_field(&[x]).unwrap();
        let fa = g.distance_field(&[g.antipode(x)]).unwrap();
        assert_eq!(fx.dist[y], fa.dist[g.antipode(y)]);
        let fy = g.distance_field(&[y]).unwrap();
        assert!(fx.dist[z] <= fx.dist[y] + fy.dist[z] + 1e-12);
    }
}

#[test]
fn more_steiner_points_never_lengthen_the_systole() {
    let m = icosphere(2);
    let coarse = systole(&GeodesicGraph::build(&m, 1).unwrap()).unwrap().sys;
    let fine = systole(&GeodesicGraph::build(&m, 3).unwrap()).unwrap().sys;
    assert!(fine <= coarse + 1e-12, "{fine} > {coarse}");
}

#[test]
fn vertex_field_matches_great_circle_distance() {
    let m = icosphere(4);
    let g = GeodesicGraph::build(&m, 3).unwrap();
    let north = (0..g.mesh_vertex_count()).max_by(|&a, &b| g.position(a).z.total_cmp(&g.position(b).z)).unwrap();
    let f = g.distance_field(&[north]).unwrap();
    let p = g.position(north).normalize();
    let far: Vec<usize> = (0..g.node_count()).filter(|&v| p.dot(&g.position(v).normalize()).abs() < 0.02).collect();
    assert!(far.len() > 20);
    for v in far {
        let oracle = p.dot(&g.position(v).normalize()).acos();
        assert!((f.dist[v] - oracle).abs() < 0.02 * oracle, "{} vs {oracle}", f.dist[v]);
    }
}
