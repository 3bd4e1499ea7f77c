//! Conformal factors `f = s·e^u` on the round sphere, with `u` a finite
//! harmonic expansion plus the Green potential of an atomic measure.

use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

use super::harmonics::real_harmonic;
use crate::{Error, Result, Vec3};

/// Tolerance on the total mass and on antipodal matching of atoms.
const MASS_TOL: f64 = 1e-12;

/// Sphere Green kernel `−(1/2π)·log(|x − y|/2) = −(1/2π)·log sin(d/2)`.
///
/// `Δₓ G(·, y) = −δ_y + 1/4π`, so for a zero-mass measure the potential
/// satisfies `Δu = −μ` and `e^{2u} g₀` has cone angle `2π − a` at an atom of
/// mass `a`.
pub fn green_kernel(x: &Vec3, y: &Vec3) -> f64 {
    -((x - y).norm() / 2.0).ln() / TAU
}

/// Zero-mass atomic measure with every atom below `2π`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<[f64; 4]>", into = "Vec<[f64; 4]>")]
pub struct RadonMassSpec {
    atoms: Vec<(Vec3, f64)>,
}

impl RadonMassSpec {
    pub fn new(atoms: Vec<(Vec3, f64)>) -> Result<Self> {
        let mut out = Vec::with_capacity(atoms.len());
        let mut total = 0.0;
        let mut scale: f64 = 1.0;
        for (p, a) in atoms {
            let n = p.norm();
            if !(n > 0.0 && n.is_finite() && a.is_finite()) {
                return Err(Error::InvalidArgument(format!("bad atom at {p:?} with mass {a}")));
            }
            if a >= TAU {
                return Err(Error::DegenerateMeasure(format!("atom mass {a} ≥ 2π")));
            }
            total += a;
            scale = scale.max(a.abs());
            out.push((p / n, a));
        }
        if total.abs() > MASS_TOL * scale {
            return Err(Error::DegenerateMeasure(format!("total mass {total} is not zero")));
        }
        Ok(RadonMassSpec { atoms: out })
    }

    /// `a(δ_y − δ_{−y})`-style dipole pairs are odd; this builds the even
    /// quadrupole `a(δ_y + δ_{−y} − δ_z − δ_{−z})`.
    pub fn quadrupole(a: f64, y: Vec3, z: Vec3) -> Result<Self> {
        Self::new(vec![(y, a), (-y, a), (z, -a), (-z, -a)])
    }

    pub fn atoms(&self) -> &[(Vec3, f64)] {
        &self.atoms
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// The measure with every mass negated.
    pub fn negated(&self) -> Self {
        RadonMassSpec { atoms: self.atoms.iter().map(|&(p, a)| (p, -a)).collect() }
    }

    /// Invariance under `x ↦ −x`.
    pub fn is_even(&self) -> bool {
        self.atoms.iter().all(|(p, a)| {
            self.atoms.iter().any(|(q, b)| (p + q).norm() <= MASS_TOL && (a - b).abs() <= MASS_TOL * (1.0 + a.abs()))
        })
    }

    /// `u(x) = Σ aᵢ G(x, yᵢ)`; infinite at an atom.
    pub fn potential(&self, x: &Vec3) -> f64 {
        self.atoms.iter().map(|(y, a)| a * green_kernel(x, y)).sum()
    }

    /// Smallest distance from `x` to an atom.
    pub fn distance_to_atoms(&self, x: &Vec3) -> f64 {
        self.atoms.iter().map(|(y, _)| (x - y).norm()).fold(f64::INFINITY, f64::min)
    }
}

impl TryFrom<Vec<[f64; 4]>> for RadonMassSpec {
    type Error = Error;

    fn try_from(v: Vec<[f64; 4]>) -> Result<Self> {
        Self::new(v.into_iter().map(|[x, y, z, a]| (Vec3::new(x, y, z), a)).collect())
    }
}

impl From<RadonMassSpec> for Vec<[f64; 4]> {
    fn from(m: RadonMassSpec) -> Self {
        m.atoms.iter().map(|(p, a)| [p.x, p.y, p.z, *a]).collect()
    }
}

/// `u = Σ c·Y_lm` term.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Harmonic {
    pub l: usize,
    pub m: i64,
    pub coeff: f64,
}

/// Conformal factor `f = scale·exp(Σ c Y_lm + Σ a G(·, y))` on the unit sphere;
/// the metric is `f² g₀`.
///
/// JSON: `{"harmonics": [[l, m, c], ...]}`, `{"atoms": [[x, y, z, a], ...]}`,
/// optional `"scale"`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MetricJson", into = "MetricJson")]
pub struct ConformalMetric {
    harmonics: Vec<Harmonic>,
    measure: RadonMassSpec,
    scale: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MetricJson {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    harmonics: Vec<(usize, i64, f64)>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    atoms: Vec<[f64; 4]>,
    #[serde(default = "one")]
    scale: f64,
}

fn one() -> f64 {
    1.0
}

impl TryFrom<MetricJson> for ConformalMetric {
    type Error = Error;

    fn try_from(j: MetricJson) -> Result<Self> {
        let harmonics = j.harmonics.into_iter().map(|(l, m, coeff)| Harmonic { l, m, coeff }).collect();
        Self::new(harmonics, RadonMassSpec::try_from(j.atoms)?, j.scale)
    }
}

impl From<ConformalMetric> for MetricJson {
    fn from(c: ConformalMetric) -> Self {
        MetricJson {
            harmonics: c.harmonics.iter().map(|h| (h.l, h.m, h.coeff)).collect(),
            atoms: c.measure.into(),
            scale: c.scale,
        }
    }
}

impl ConformalMetric {
    pub fn new(harmonics: Vec<Harmonic>, measure: RadonMassSpec, scale: f64) -> Result<Self> {
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::InvalidArgument(format!("scale {scale} must be positive")));
        }
        for h in &harmonics {
            if h.m.unsigned_abs() as usize > h.l || !h.coeff.is_finite() {
                return Err(Error::InvalidArgument(format!("bad harmonic ({}, {}, {})", h.l, h.m, h.coeff)));
            }
        }
        Ok(ConformalMetric { harmonics, measure, scale })
    }

    /// The round metric scaled by `s`.
    pub fn constant(s: f64) -> Result<Self> {
        Self::new(Vec::new(), RadonMassSpec::default(), s)
    }

    /// `f = e^{t·Y₂₀}`.
    pub fn exp_y20(t: f64) -> Self {
        Self::new(vec![Harmonic { l: 2, m: 0, coeff: t }], RadonMassSpec::default(), 1.0).expect("valid harmonic")
    }

    /// Cone metric `e^{u}` with `u` the Green potential of `μ`.
    pub fn cone(measure: RadonMassSpec) -> Self {
        ConformalMetric { harmonics: Vec::new(), measure, scale: 1.0 }
    }

    /// Parses first and validates second, so a bad measure surfaces as
    /// [`Error::DegenerateMeasure`] rather than a JSON error.
    pub fn from_json(s: &str) -> Result<Self> {
        let j: MetricJson = serde_json::from_str(s)?;
        Self::try_from(j)
    }

    pub fn harmonics(&self) -> &[Harmonic] {
        &self.harmonics
    }

    pub fn measure(&self) -> &RadonMassSpec {
        &self.measure
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn is_singular(&self) -> bool {
        !self.measure.is_empty()
    }

    pub fn is_even(&self) -> bool {
        self.harmonics.iter().all(|h| h.l % 2 == 0 || h.coeff == 0.0) && self.measure.is_even()
    }

    pub fn require_even(&self) -> Result<()> {
        if let Some(h) = self.harmonics.iter().find(|h| h.l % 2 == 1 && h.coeff != 0.0) {
            return Err(Error::OddMetric(format!("odd harmonic Y_{},{} with coefficient {}", h.l, h.m, h.coeff)));
        }
        if !self.measure.is_even() {
            return Err(Error::OddMetric("atomic measure is not antipodally symmetric".into()));
        }
        Ok(())
    }

    /// The potential `u`.
    pub fn potential(&self, x: &Vec3) -> f64 {
        let smooth: f64 = self.harmonics.iter().map(|h| h.coeff * real_harmonic(h.l, h.m, x)).sum();
        smooth + self.measure.potential(x)
    }

    /// The conformal factor `f`.
    pub fn factor(&self, x: &Vec3) -> f64 {
        self.scale * self.potential(x).exp()
    }

    /// `(f(x) + f(−x))/2`: equal to `f` for an even metric, and bitwise
    /// invariant under the antipodal map.
    pub fn even_factor(&self, x: &Vec3) -> f64 {
        0.5 * (self.factor(x) + self.factor(&-x))
    }
}

/// `u` at every node of a point set (e.g. grid nodes).
pub fn green_potential(mu: &RadonMassSpec, nodes: &[Vec3]) -> Vec<f64> {
    nodes.iter().map(|x| mu.potential(x)).collect()
}

/// Cone angle `2π − a` at an atom of mass `a`.
pub fn cone_angle(mass: f64) -> f64 {
    TAU - mass
}

/// Total area `4π s²` of the constant metric `f ≡ s`.
pub fn round_area(s: f64) -> f64 {
    4.0 * PI * s * s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mass_checks() {
        let n = Vec3::z();
        assert!(matches!(RadonMassSpec::new(vec![(n, 0.5)]), Err(Error::DegenerateMeasure(_))));
        assert!(matches!(RadonMassSpec::new(vec![(n, TAU), (-n, -TAU)]), Err(Error::DegenerateMeasure(_))));
        assert!(RadonMassSpec::new(vec![(n, 0.5), (-n, -0.5)]).is_ok());
    }

    #[test]
    fn dipole_is_odd_quadrupole_is_even() {
        let dip = RadonMassSpec::new(vec![(Vec3::z(), 0.5), (-Vec3::z(), -0.5)]).unwrap();
        assert!(!dip.is_even());
        let quad = RadonMassSpec::quadrupole(0.5, Vec3::z(), Vec3::x()).unwrap();
        assert!(quad.is_even());
        assert!(matches!(ConformalMetric::cone(dip).require_even(), Err(Error::OddMetric(_))));
    }

    #[test]
    fn json_forms() {
        let c = ConformalMetric::from_json(r#"{"harmonics": [[2, 0, 0.3]]}"#).unwrap();
        assert_eq!(c, ConformalMetric::exp_y20(0.3));
        let c =
            ConformalMetric::from_json(r#"{"atoms": [[0,0,2,0.5],[0,0,-1,0.5],[1,0,0,-0.5],[-1,0,0,-0.5]]}"#).unwrap();
        assert!(c.is_even() && c.is_singular());
        let back: ConformalMetric = serde_json::from_str(&serde_json::to_string(&c).unwrap()).unwrap();
        assert_eq!(back, c);
        assert!(ConformalMetric::from_json(r#"{"atoms": [[0,0,1,7.0],[0,0,-1,-7.0]]}"#).is_err());
        assert!(ConformalMetric::from_json(r#"{"harmonics": [[1, 2, 0.3]]}"#).is_err());
        assert!(ConformalMetric::from_json(r#"{"harmonic": []}"#).is_err());
    }

    #[test]
    fn odd_harmonic_rejected() {
        let c = ConformalMetric::new(vec![Harmonic { l: 1, m: 0, coeff: 0.1 }], RadonMassSpec::default(), 1.0).unwrap();
        assert!(matches!(c.require_even(), Err(Error::OddMetric(_))));
    }

    #[test]
    fn potential_linear_and_odd_in_mass() {
        let a = RadonMassSpec::quadrupole(0.5, Vec3::z(), Vec3::x()).unwrap();
        let x = Vec3::new(0.3, 0.2, 0.9).normalize();
        assert_eq!(a.negated().potential(&x), -a.potential(&x));
        assert_eq!(RadonMassSpec::default().potential(&x), 0.0);
    }
}
