//! Parametric families of centrally symmetric convex bodies.

use serde::{Deserialize, Serialize};

use crate::geodesic::{systole, GeodesicGraph};
use crate::geom::bodies::{random_polytope, smooth_body, Support};
use crate::geom::refine::refine_to_max_edge;
use crate::geom::SymmetricConvexMesh;
use crate::tolerances::{EDGE_FACTOR, STEINER};
use crate::{Error, Result};

/// Which bodies a family contains.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FamilyKind {
    /// Ellipsoids with the given semi-axes along x, y, z.
    Ellipsoid { axes: Vec<[f64; 3]> },
    /// `count` hulls of `points` random directions (radii in `[0.5, 1.5]`),
    /// body `i` using seed `seed + i`.
    RandomSymmetricPolytope {
        count: usize,
        seed: u64,
        #[serde(default = "default_points")]
        points: usize,
    },
    /// Unit-radius capsules of total length `2·aspect`.
    CappedCylinder { aspects: Vec<f64> },
}

fn default_points() -> usize {
    12
}

fn default_steiner() -> usize {
    STEINER
}

fn default_edge_factor() -> f64 {
    EDGE_FACTOR
}

/// A family plus its discretization.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub name: String,
    #[serde(flatten)]
    pub kind: FamilyKind,
    #[serde(default = "default_steiner")]
    pub steiner: usize,
    /// Fixed mesh resolution; when absent the mesh is refined until its
    /// longest edge is below `sys / edge_factor`.
    #[serde(default)]
    pub max_edge: Option<f64>,
    #[serde(default = "default_edge_factor")]
    pub edge_factor: f64,
}

/// One member of a family, before meshing.
#[derive(Clone, Debug, PartialEq)]
pub enum BodySpec {
    Smooth(Support),
    Polytope { points: usize, seed: u64 },
}

impl FamilySpec {
    pub fn new(name: &str, kind: FamilyKind) -> Self {
        FamilySpec { name: name.into(), kind, steiner: STEINER, max_edge: None, edge_factor: EDGE_FACTOR }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let spec: FamilySpec = serde_json::from_str(s)?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidArgument(m));
        match &self.kind {
            FamilyKind::Ellipsoid { axes } => {
                if axes.is_empty() {
                    return bad("ellipsoid grid is empty".into());
                }
                if let Some(a) = axes.iter().find(|a| a.iter().any(|&x| !(x > 0.0 && x.is_finite()))) {
                    return bad(format!("semi-axes {a:?} must be positive"));
                }
            }
            FamilyKind::RandomSymmetricPolytope { count, points, .. } => {
                if *count == 0 || *points < 3 {
                    return bad("polytope family needs count ≥ 1 and points ≥ 3".into());
                }
            }
            FamilyKind::CappedCylinder { aspects } => {
                if aspects.is_empty() {
                    return bad("aspect grid is empty".into());
                }
                if let Some(a) = aspects.iter().find(|&&a| !(a >= 1.0 && a.is_finite())) {
                    return bad(format!("aspect {a} must be at least 1"));
                }
            }
        }
        if self.steiner > 16 {
            return bad(format!("steiner count {} exceeds 16", self.steiner));
        }
        if !(self.edge_factor >= 1.0) {
            return bad(format!("edge factor {} must be ≥ 1", self.edge_factor));
        }
        if let Some(e) = self.max_edge {
            if !(e > 0.0) {
                return bad(format!("max edge {e} must be positive"));
            }
        }
        Ok(())
    }

    /// Members in parameter order, with a CSV-safe parameter label.
    pub fn members(&self) -> Vec<(String, BodySpec)> {
        match &self.kind {
            FamilyKind::Ellipsoid { axes } => axes
                .iter()
                .map(|&[a, b, c]| {
                    (format!("{a}:{b}:{c}"), BodySpec::Smooth(Support::Ellipsoid { semi_axes: [a, b, c] }))
                })
                .collect(),
            FamilyKind::RandomSymmetricPolytope { count, seed, points } => (0..*count as u64)
                .map(|i| (format!("seed{}", seed + i), BodySpec::Polytope { points: *points, seed: seed + i }))
                .collect(),
            FamilyKind::CappedCylinder { aspects } => aspects
                .iter()
                .map(|&s| (format!("{s}"), BodySpec::Smooth(Support::Capsule { radius: 1.0, half_length: s - 1.0 })))
                .collect(),
        }
    }
}

impl BodySpec {
    /// Mesh with longest edge at most `max_edge`.
    pub fn mesh(&self, max_edge: f64) -> Result<SymmetricConvexMesh> {
        match self {
            BodySpec::Smooth(s) => smooth_body(s, max_edge),
            BodySpec::Polytope { points, seed } => refine_to_max_edge(&random_polytope(*points, *seed)?, max_edge),
        }
    }

    /// Rough systole from a coarse mesh, used to pick the resolution.
    pub fn systole_estimate(&self) -> Result<f64> {
        let coarse = match self {
            BodySpec::Smooth(s) => {
                let m = smooth_body(s, 1.0)?;
                let h = m.diagonal() / 12.0;
                smooth_body(s, h)?
            }
            BodySpec::Polytope { points, seed } => {
                let m = random_polytope(*points, *seed)?;
                let h = m.diagonal() / 12.0;
                refine_to_max_edge(&m, h)?
            }
        };
        Ok(systole(&GeodesicGraph::build(&coarse, 1)?)?.sys)
    }

    /// Mesh at the family's resolution: fixed, or `sys/edge_factor`.
    pub fn mesh_for(&self, spec: &FamilySpec) -> Result<SymmetricConvexMesh> {
        match spec.max_edge {
            Some(e) => self.mesh(e),
            None => self.mesh(self.systole_estimate()? / spec.edge_factor),
        }
    }
}

/// The families used for the inequality suite and the λ envelope.
pub fn shipped_families() -> Vec<FamilySpec> {
    let mut axes: Vec<[f64; 3]> =
        [1.0, 1.25, 1.5, 2.0, 3.0, 4.0, 6.0, 8.0, 12.0, 16.0].iter().map(|&c| [1.0, 1.0, c]).collect();
    axes.extend([[1.0, 1.5, 2.0], [1.0, 2.0, 3.0], [1.0, 2.0, 4.0], [1.0, 3.0, 6.0], [1.0, 1.2, 5.0]]);
    axes.extend([[1.0, 1.0, 0.8], [1.0, 1.0, 0.6], [1.0, 1.0, 0.4]]);
    vec![
        FamilySpec::new("ellipsoid", FamilyKind::Ellipsoid { axes }),
        FamilySpec::new("polytope", FamilyKind::RandomSymmetricPolytope { count: 20, seed: 42, points: 12 }),
        FamilySpec::new("capsule", FamilyKind::CappedCylinder { aspects: vec![1.5, 2.0, 3.0, 5.0, 8.0, 12.0, 16.0] }),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let s = r#"{"name":"e","kind":"ellipsoid","axes":[[1,1,1],[1,1,2]]}"#;
        let f = FamilySpec::from_json(s).unwrap();
        assert_eq!(f.members().len(), 2);
        assert_eq!(f.steiner, STEINER);
        let back = FamilySpec::from_json(&serde_json::to_string(&f).unwrap()).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn invalid_specs() {
        assert!(FamilySpec::from_json(r#"{"name":"e","kind":"ellipsoid","axes":[]}"#).is_err());
        assert!(FamilySpec::from_json(r#"{"name":"c","kind":"capped_cylinder","aspects":[0.5]}"#).is_err());
        assert!(FamilySpec::from_json(r#"{"name":"p","kind":"random_symmetric_polytope","count":0,"seed":1}"#).is_err());
    }

    #[test]
    fn shipped_set_has_enough_bodies() {
        let n: usize = shipped_families().iter().map(|f| f.members().len()).sum();
        assert!(n >= 40, "{n}");
    }
}
