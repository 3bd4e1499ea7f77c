//! Circumradius, inradius and the John ellipsoid of a symmetric convex mesh.
//!
//! For a centrally symmetric body both the smallest enclosing ball and the
//! largest inscribed ball are centred at the origin (average a ball with its
//! reflection), so `R` is the largest vertex norm and `r` the smallest face
//! plane distance. The general Welzl routine is kept for validation.

use nalgebra::{Matrix3, SymmetricEigen};
use rand::seq::SliceRandom;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::geom::SymmetricConvexMesh;
use crate::tolerances::{JOHN_EPS, JOHN_MAX_ITER, SANDWICH_SAMPLES};
use crate::{par, Error, Result, Vec3};

/// Centred ellipsoid `{x : |Fᵀx / axes| ≤ 1}` with `a ≤ b ≤ c`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ellipsoid {
    pub semi_axes: [f64; 3],
    /// Columns are the unit axis directions, matching `semi_axes`.
    pub frame: [[f64; 3]; 3],
    /// Relative accuracy reached by the iteration.
    pub eps: f64,
    pub iterations: usize,
}

impl Ellipsoid {
    pub fn a(&self) -> f64 {
        self.semi_axes[0]
    }
    pub fn b(&self) -> f64 {
        self.semi_axes[1]
    }
    pub fn c(&self) -> f64 {
        self.semi_axes[2]
    }

    /// Semi-axes of the enclosing ellipsoid `√3·E`.
    pub fn outer_semi_axes(&self) -> [f64; 3] {
        self.semi_axes.map(|a| a * 3f64.sqrt())
    }

    fn frame_matrix(&self) -> Matrix3<f64> {
        Matrix3::from_fn(|i, j| self.frame[j][i])
    }

    /// `|x|_E`, equal to 1 on the boundary.
    pub fn norm(&self, x: &Vec3) -> f64 {
        let local = self.frame_matrix().transpose() * x;
        (0..3).map(|i| (local[i] / self.semi_axes[i]).powi(2)).sum::<f64>().sqrt()
    }

    /// Boundary point in the direction of the unit vector `u` of the
    /// reference sphere.
    pub fn boundary_point(&self, u: &Vec3) -> Vec3 {
        self.frame_matrix() * Vec3::new(u.x * self.semi_axes[0], u.y * self.semi_axes[1], u.z * self.semi_axes[2])
    }

    /// Axis-aligned ellipsoid, used for closed-form checks.
    pub fn axis_aligned(semi_axes: [f64; 3]) -> Self {
        Ellipsoid { semi_axes, frame: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]], eps: 0.0, iterations: 0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadiiReport {
    #[serde(rename = "R")]
    pub circumradius: f64,
    #[serde(rename = "r")]
    pub inradius: f64,
    /// `R − r`.
    pub gap: f64,
    pub john: Ellipsoid,
}

impl RadiiReport {
    pub fn compute(m: &SymmetricConvexMesh) -> Result<Self> {
        let circumradius = circumradius(m);
        let inradius = inradius(m);
        let john = john_ellipsoid(m, JOHN_EPS)?;
        Ok(RadiiReport { circumradius, inradius, gap: circumradius - inradius, john })
    }

    /// Violations of `a ≤ r(1+ε)`, `r ≤ √3·a(1+ε)`, `c ≤ R(1+ε)`,
    /// `R ≤ √3·c(1+ε)`, where `ε` is the ellipsoid accuracy plus `slack`.
    pub fn relation_violations(&self, slack: f64) -> Vec<String> {
        let e = 1.0 + self.john.eps + slack;
        let s3 = 3f64.sqrt();
        let (a, c) = (self.john.a(), self.john.c());
        let (r, big) = (self.inradius, self.circumradius);
        let mut out = Vec::new();
        let mut check = |ok: bool, what: &str| {
            if !ok {
                out.push(what.to_string());
            }
        };
        check(a <= r * e, "a ≤ r(1+ε)");
        check(r <= s3 * a * e, "r ≤ √3·a(1+ε)");
        check(c <= big * e, "c ≤ R(1+ε)");
        check(big <= s3 * c * e, "R ≤ √3·c(1+ε)");
        out
    }
}

/// Largest vertex norm.
pub fn circumradius(m: &SymmetricConvexMesh) -> f64 {
    m.vertices().iter().map(|v| v.norm()).fold(0.0, f64::max)
}

/// Smallest distance from the origin to a face plane.
pub fn inradius(m: &SymmetricConvexMesh) -> f64 {
    m.face_planes().iter().map(|&(_, d)| d).fold(f64::INFINITY, f64::min)
}

/// Smallest enclosing ball `(centre, radius)` of an arbitrary point set
/// (Welzl's algorithm on a seeded shuffle).
pub fn min_enclosing_ball(points: &[Vec3]) -> Result<(Vec3, f64)> {
    if points.is_empty() {
        return Err(Error::Empty("no points".into()));
    }
    let mut pts = points.to_vec();
    pts.shuffle(&mut ChaCha8Rng::seed_from_u64(0x5eed));
    let mut boundary = Vec::with_capacity(4);
    Ok(welzl(&pts, pts.len(), &mut boundary))
}

fn welzl(pts: &[Vec3], n: usize, boundary: &mut Vec<Vec3>) -> (Vec3, f64) {
    let mut ball = ball_through(boundary);
    if boundary.len() == 4 {
        return ball;
    }
    for i in 0..n {
        if (pts[i] - ball.0).norm() > ball.1 * (1.0 + 1e-12) + 1e-300 || ball.1 < 0.0 {
            boundary.push(pts[i]);
            ball = welzl(pts, i, boundary);
            boundary.pop();
        }
    }
    ball
}

/// Smallest sphere through the given (at most four) points, within their
/// affine hull. Returns radius `−1` for the empty set.
fn ball_through(b: &[Vec3]) -> (Vec3, f64) {
    match b.len() {
        0 => (Vec3::zeros(), -1.0),
        1 => (b[0], 0.0),
        2 => ((b[0] + b[1]) / 2.0, (b[0] - b[1]).norm() / 2.0),
        3 => {
            let (u, v) = (b[1] - b[0], b[2] - b[0]);
            let w = u.cross(&v);
            let den = 2.0 * w.norm_squared();
            if den < 1e-300 {
                return ball_through(&farthest_pair(b));
            }
            let off = (w.cross(&u) * v.norm_squared() + v.cross(&w) * u.norm_squared()) / den;
            (b[0] + off, off.norm())
        }
        _ => {
            let m =
                Matrix3::from_rows(&[(b[1] - b[0]).transpose(), (b[2] - b[0]).transpose(), (b[3] - b[0]).transpose()]);
            let rhs = Vec3::new(
                (b[1] - b[0]).norm_squared() / 2.0,
                (b[2] - b[0]).norm_squared() / 2.0,
                (b[3] - b[0]).norm_squared() / 2.0,
            );
            match m.lu().solve(&rhs) {
                Some(off) if off.iter().all(|c| c.is_finite()) => (b[0] + off, off.norm()),
                _ => ball_through(&b[..3]),
            }
        }
    }
}

fn farthest_pair(b: &[Vec3]) -> Vec<Vec3> {
    let mut best = (0, 1, -1.0);
    for i in 0..b.len() {
        for j in i + 1..b.len() {
            let d = (b[i] - b[j]).norm();
            if d > best.2 {
                best = (i, j, d);
            }
        }
    }
    vec![b[best.0], b[best.1]]
}

/// John ellipsoid of the mesh, scaled from the minimum-volume enclosing
/// ellipsoid.
///
/// Runs the Wolfe–Atwood iteration (Khachiyan with away steps) on the
/// centred design problem `max log det Σ uᵢ xᵢxᵢᵀ`. For any weights `u` the
/// ellipsoid `{xᵀX⁻¹x ≤ 1}` lies inside the body, because its support
/// function `√(Σ uᵢ (w·xᵢ)²)` never exceeds `maxᵢ |w·xᵢ|`. Every vertex
/// satisfies `xᵀX⁻¹x ≤ M`, and the iteration stops once `M ≤ 3(1 + eps)`.
/// The returned ellipsoid is `{xᵀX⁻¹x ≤ M/3}`, so the body lies in `√3·E`
/// and `E/(1 + eps)` lies in the body.
pub fn john_ellipsoid(m: &SymmetricConvexMesh, eps: f64) -> Result<Ellipsoid> {
    if !(eps > 0.0) {
        return Err(Error::InvalidArgument(format!("eps {eps} must be positive")));
    }
    // One representative per antipodal pair.
    let pts: Vec<Vec3> = (0..m.vertices().len()).filter(|&v| v < m.antipode(v)).map(|v| m.vertex(v)).collect();
    let n = pts.len();
    let d = 3.0;
    let mut u = vec![1.0 / n as f64; n];
    let mut x: Matrix3<f64> = pts.iter().map(|p| p * p.transpose()).sum::<Matrix3<f64>>() / n as f64;

    let mut iterations = 0;
    loop {
        let inv = x.try_inverse().ok_or_else(|| Error::FlatBody("vertex second moment matrix is singular".into()))?;
        let quad: Vec<f64> = pts.iter().map(|p| (p.transpose() * inv * p)[0]).collect();
        let (j, &mj) = quad.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1).then(b.0.cmp(&a.0))).unwrap();
        let (k, &mk) = quad
            .iter()
            .enumerate()
            .filter(|(i, _)| u[*i] > 0.0)
            .min_by(|a, b| a.1.total_cmp(b.1).then(a.0.cmp(&b.0)))
            .unwrap();
        if mj <= d * (1.0 + eps) {
            let frame_eig = SymmetricEigen::new(x);
            let mut order = [0usize, 1, 2];
            order.sort_by(|&p, &q| frame_eig.eigenvalues[p].total_cmp(&frame_eig.eigenvalues[q]));
            let semi_axes = order.map(|i| (mj / d * frame_eig.eigenvalues[i]).sqrt());
            let frame = order.map(|i| {
                let col = frame_eig.eigenvectors.column(i);
                [col[0], col[1], col[2]]
            });
            return Ok(Ellipsoid { semi_axes, frame, eps: mj / d - 1.0, iterations });
        }
        if iterations >= JOHN_MAX_ITER {
            return Err(Error::Convergence(format!("John ellipsoid stalled at M/d − 1 = {:e}", mj / d - 1.0)));
        }
        iterations += 1;
        if mj - d >= d - mk {
            let alpha = (mj / d - 1.0) / (mj - 1.0);
            u.iter_mut().for_each(|w| *w *= 1.0 - alpha);
            u[j] += alpha;
            x = x * (1.0 - alpha) + pts[j] * pts[j].transpose() * alpha;
        } else {
            let mut alpha = (1.0 - mk / d) / (mk - 1.0);
            let drop = u[k] / (1.0 - u[k]);
            let dropped = alpha >= drop;
            if dropped {
                alpha = drop;
            }
            u.iter_mut().for_each(|w| *w *= 1.0 + alpha);
            u[k] -= alpha;
            if dropped {
                u[k] = 0.0;
            }
            x = x * (1.0 + alpha) - pts[k] * pts[k].transpose() * alpha;
        }
    }
}

/// Outcome of the sandwich `E/(1+ε) ⊆ K ⊆ √3(1+ε)·E`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SandwichCheck {
    /// Largest `|v|_E / √3` over vertices; at most `1 + ε` when the outer
    /// inclusion holds.
    pub outer_ratio: f64,
    /// Largest signed face-plane excess of sampled points of `E/(1+ε)`.
    pub inner_excess: f64,
    pub samples: usize,
    pub holds: bool,
}

/// Checks both inclusions: every vertex against `√3(1+ε)E`, and
/// `SANDWICH_SAMPLES` Fibonacci points on `∂E/(1+ε)` against every face.
pub fn sandwich_check(m: &SymmetricConvexMesh, e: &Ellipsoid, eps: f64) -> SandwichCheck {
    sandwich_check_with(m, e, eps, SANDWICH_SAMPLES)
}

pub fn sandwich_check_with(m: &SymmetricConvexMesh, e: &Ellipsoid, eps: f64, samples: usize) -> SandwichCheck {
    let tol = m.tau_hull();
    let outer_ratio = m.vertices().iter().map(|v| e.norm(v) / 3f64.sqrt()).fold(0.0, f64::max);
    let planes = m.face_planes();
    let dirs = fibonacci_sphere(samples);
    let excess = par::map(&dirs, |u| {
        let p = e.boundary_point(u) / (1.0 + eps);
        planes.iter().map(|(n, d)| n.dot(&p) - d).fold(f64::NEG_INFINITY, f64::max)
    });
    let inner_excess = excess.into_iter().fold(f64::NEG_INFINITY, f64::max);
    let holds = outer_ratio <= 1.0 + eps + 1e-12 && inner_excess <= tol;
    SandwichCheck { outer_ratio, inner_excess, samples, holds }
}

/// `n` nearly uniform unit vectors on a Fibonacci spiral.
pub fn fibonacci_sphere(n: usize) -> Vec<Vec3> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|i| {
            let z = 1.0 - (2.0 * i as f64 + 1.0) / n as f64;
            let rho = (1.0 - z * z).max(0.0).sqrt();
            let phi = golden * i as f64;
            Vec3::new(rho * phi.cos(), rho * phi.sin(), z)
        })
        .collect()
}
