//! `defaults.toml` documents the numeric defaults; keep it in sync.

use systole_lab::tolerances as t;

#[test]
fn defaults_file_matches_library() {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/defaults.toml")).unwrap();
    let d: toml::Table = text.parse().unwrap();
    let f = |s: &str, k: &str| d[s][k].as_float().unwrap_or_else(|| panic!("{s}.{k}"));
    let i = |s: &str, k: &str| d[s][k].as_integer().unwrap_or_else(|| panic!("{s}.{k}")) as usize;

    assert_eq!(f("hull", "rel_tol"), t::HULL_REL_TOL);
    assert_eq!(f("john", "eps"), t::JOHN_EPS);
    assert_eq!(i("john", "max_iter"), t::JOHN_MAX_ITER);
    assert_eq!(i("john", "sandwich_samples"), t::SANDWICH_SAMPLES);
    assert_eq!(i("geodesic", "steiner"), t::STEINER);
    assert_eq!(f("geodesic", "edge_factor"), t::EDGE_FACTOR);
    assert_eq!(f("geodesic", "geo_edge_mult"), t::GEO_EDGE_MULT);
    assert_eq!(i("geodesic", "systole_seeds"), t::SYSTOLE_SEEDS);
    assert_eq!(i("geodesic", "exhaustive_nodes"), t::EXHAUSTIVE_NODES);
    assert_eq!(i("geodesic", "diameter_samples"), t::DIAMETER_SAMPLES);
    assert_eq!(f("planar", "lp_gap"), t::PLANAR_LP_GAP);
    assert_eq!(i("sphere", "grid_polar"), t::GRID_POLAR);
    assert_eq!(i("sphere", "circle_points"), t::CIRCLE_POINTS);
    assert_eq!(i("sphere", "conformal_graph_level"), t::CONFORMAL_GRAPH_LEVEL as usize);
    assert_eq!(i("envelope", "bins"), t::ENVELOPE_BINS);
    let thick: Vec<f64> =
        d["collapse"]["thickness"].as_array().unwrap().iter().map(|v| v.as_float().unwrap()).collect();
    assert_eq!(thick, t::COLLAPSE_THICKNESS);
}

#[test]
fn help_mentions_defaults() {
    let o = std::process::Command::new(env!("CARGO_BIN_EXE_systole-lab")).args(["analyze", "--help"]).output().unwrap();
    let help = String::from_utf8(o.stdout).unwrap();
    assert!(help.contains(&format!("[default: {}]", t::STEINER)));
    assert!(help.contains(&format!("[default: {}]", t::JOHN_EPS)));
}
