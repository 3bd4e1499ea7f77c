//! Analytic convex bodies and mesh generators.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::mesh::{build_symmetric_hull, SymmetricConvexMesh};
use super::refine::refine;
use crate::{Error, Result, Vec3};

/// Centrally symmetric smooth convex body, described by its gauge function.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Support {
    Sphere {
        radius: f64,
    },
    /// Axis-aligned ellipsoid with semi-axes along x, y, z.
    Ellipsoid {
        semi_axes: [f64; 3],
    },
    /// Cylinder of the given radius around the z axis, spanning
    /// `|z| ≤ half_length`, closed by hemispherical caps.
    Capsule {
        radius: f64,
        half_length: f64,
    },
}

impl Support {
    /// Minkowski gauge: `x` lies on the surface iff `gauge(x) == 1`.
    /// Even in `x` bit for bit.
    pub fn gauge(&self, x: &Vec3) -> f64 {
        match *self {
            Support::Sphere { radius } => x.norm() / radius,
            Support::Ellipsoid { semi_axes: [a, b, c] } => {
                let (u, v, w) = (x.x / a, x.y / b, x.z / c);
                (u * u + v * v + w * w).sqrt()
            }
            Support::Capsule { radius, half_length } => {
                let rxy = (x.x * x.x + x.y * x.y).sqrt();
                let az = x.z.abs();
                if rxy > 0.0 {
                    let t = radius / rxy;
                    if t * az <= half_length {
                        return 1.0 / t;
                    }
                }
                let n2 = x.norm_squared();
                let h = half_length;
                let disc = h * h * az * az - n2 * (h * h - radius * radius);
                let t = (h * az + disc.max(0.0).sqrt()) / n2;
                1.0 / t
            }
        }
    }

    /// Radial projection onto the surface.
    pub fn project(&self, x: &Vec3) -> Vec3 {
        x / self.gauge(x)
    }

    pub fn scaled(&self, s: f64) -> Support {
        match *self {
            Support::Sphere { radius } => Support::Sphere { radius: radius * s },
            Support::Ellipsoid { semi_axes } => Support::Ellipsoid { semi_axes: semi_axes.map(|a| a * s) },
            Support::Capsule { radius, half_length } => {
                Support::Capsule { radius: radius * s, half_length: half_length * s }
            }
        }
    }
}

/// Regular octahedron with vertices `±eᵢ`.
pub fn octahedron() -> SymmetricConvexMesh {
    build_symmetric_hull(&[Vec3::x(), Vec3::y(), Vec3::z()]).expect("octahedron")
}

/// Cube `[-h, h]³`.
pub fn cube(h: f64) -> SymmetricConvexMesh {
    let pts: Vec<Vec3> = [(1., 1., 1.), (1., 1., -1.), (1., -1., 1.), (1., -1., -1.)]
        .iter()
        .map(|&(x, y, z)| Vec3::new(x, y, z) * h)
        .collect();
    build_symmetric_hull(&pts).expect("cube")
}

/// Regular icosahedron inscribed in the unit sphere.
pub fn icosahedron() -> SymmetricConvexMesh {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let s = 1.0 / (1.0 + phi * phi).sqrt();
    let pts = [
        Vec3::new(0.0, 1.0, phi),
        Vec3::new(0.0, 1.0, -phi),
        Vec3::new(1.0, phi, 0.0),
        Vec3::new(1.0, -phi, 0.0),
        Vec3::new(phi, 0.0, 1.0),
        Vec3::new(-phi, 0.0, 1.0),
    ]
    .map(|p| p * s);
    build_symmetric_hull(&pts).expect("icosahedron").with_support(Some(Support::Sphere { radius: 1.0 }))
}

/// Unit icosphere: the icosahedron refined `level` times with vertices
/// pushed back to the sphere. Has `10·4^level + 2` vertices.
pub fn icosphere(level: u32) -> SymmetricConvexMesh {
    refine(&icosahedron(), level)
}

/// Linear image of the unit icosphere under `diag(semi_axes)`.
///
/// Linear maps preserve convex hulls, so the triangulation stays convex.
pub fn ellipsoid_icosphere(semi_axes: [f64; 3], level: u32) -> SymmetricConvexMesh {
    let sphere = icosphere(level);
    let scale = Vec3::from(semi_axes);
    let vertices = sphere.vertices().iter().map(|v| v.component_mul(&scale)).collect();
    SymmetricConvexMesh::from_parts(vertices, sphere.triangles().to_vec(), Some(Support::Ellipsoid { semi_axes }))
        .expect("linear image of a convex mesh")
}

/// Mesh of a smooth body with every edge at most `max_edge` long.
///
/// The surface is sampled on latitude rings spaced by meridian arc length,
/// all with the same (even) number of aligned longitudes. Such a stack of
/// frusta is exactly convex even along the flat parts of a capsule, where a
/// hull of scattered points would produce long slivers. The southern half is
/// the exact negation of the northern one.
pub fn smooth_body(support: &Support, max_edge: f64) -> Result<SymmetricConvexMesh> {
    if !(max_edge > 0.0) {
        return Err(Error::InvalidArgument(format!("max edge {max_edge} must be positive")));
    }
    let mut step = 0.7 * max_edge;
    for _ in 0..30 {
        let mesh = ring_mesh(support, step)?;
        if mesh.max_edge_length() <= max_edge {
            return Ok(mesh);
        }
        step *= 0.85;
    }
    Err(Error::Convergence("ring mesh did not meet the edge bound".into()))
}

impl Support {
    /// Horizontal scales `(A, B)`: surface points are
    /// `(A ρ(t) cos φ, B ρ(t) sin φ, z(t))` for `t ∈ [0, 1]` from north to south.
    fn ring_scales(&self) -> (f64, f64) {
        match *self {
            Support::Sphere { radius } => (radius, radius),
            Support::Ellipsoid { semi_axes: [a, b, _] } => (a, b),
            Support::Capsule { .. } => (1.0, 1.0),
        }
    }

    /// Meridian profile `(ρ, z)`.
    fn profile(&self, t: f64) -> (f64, f64) {
        use std::f64::consts::PI;
        match *self {
            Support::Sphere { radius } => ((PI * t).sin(), radius * (PI * t).cos()),
            Support::Ellipsoid { semi_axes: [_, _, c] } => ((PI * t).sin(), c * (PI * t).cos()),
            Support::Capsule { radius: r, half_length: h } => {
                let quarter = PI * r / 2.0;
                let s = t * (PI * r + 2.0 * h);
                if s <= quarter {
                    let a = s / r;
                    (r * a.sin(), h + r * a.cos())
                } else if s <= quarter + 2.0 * h {
                    (r, h - (s - quarter))
                } else {
                    let a = (s - quarter - 2.0 * h) / r + PI / 2.0;
                    (r * a.sin(), -h + r * a.cos())
                }
            }
        }
    }
}

fn ring_mesh(support: &Support, step: f64) -> Result<SymmetricConvexMesh> {
    let (sa, sb) = support.ring_scales();
    let wide = sa.max(sb);
    // Arc length of the northern half meridian, measured with the wider scale.
    const SAMPLES: usize = 20_000;
    let mut table = Vec::with_capacity(SAMPLES + 1);
    let mut len = 0.0;
    let mut prev = support.profile(0.0);
    table.push((0.0, 0.0));
    for i in 1..=SAMPLES {
        let t = 0.5 * i as f64 / SAMPLES as f64;
        let cur = support.profile(t);
        len += (wide * (cur.0 - prev.0)).hypot(cur.1 - prev.1);
        table.push((t, len));
        prev = cur;
    }
    let half_rings = (len / step).ceil().max(2.0) as usize;
    let ring_t = |k: usize| -> f64 {
        if k == half_rings {
            return 0.5;
        }
        let target = len * k as f64 / half_rings as f64;
        let i = table.partition_point(|&(_, l)| l < target).clamp(1, SAMPLES);
        let ((t0, l0), (t1, l1)) = (table[i - 1], table[i]);
        t0 + (t1 - t0) * (target - l0) / (l1 - l0).max(f64::MIN_POSITIVE)
    };
    let rho_max = (0..=SAMPLES).map(|i| support.profile(0.5 * i as f64 / SAMPLES as f64).0).fold(0.0, f64::max);
    let mut n = ((std::f64::consts::TAU * wide * rho_max / step).ceil() as usize).max(4);
    n += n % 2;

    let mut vertices: Vec<Vec3> = Vec::new();
    let mut rings: Vec<Vec<u32>> = Vec::new();
    let (_, z0) = support.profile(0.0);
    vertices.push(Vec3::new(0.0, 0.0, z0));
    rings.push(vec![0; n]);
    for k in 1..=half_rings {
        let (rho, z) = support.profile(ring_t(k));
        let z = if k == half_rings { 0.0 } else { z };
        let count = if k == half_rings { n / 2 } else { n };
        let mut ring = Vec::with_capacity(n);
        for j in 0..count {
            let phi = std::f64::consts::TAU * j as f64 / n as f64;
            ring.push(vertices.len() as u32);
            vertices.push(Vec3::new(sa * rho * phi.cos(), sb * rho * phi.sin(), z));
        }
        if k == half_rings {
            for j in 0..n / 2 {
                ring.push(vertices.len() as u32);
                vertices.push(-vertices[ring[j] as usize]);
            }
        }
        rings.push(ring);
    }
    // Southern half by negation; ring K − k mirrors ring k shifted by n/2.
    let north = vertices.len();
    let mut anti = vec![u32::MAX; north];
    for k in 0..half_rings {
        for j in 0..if k == 0 { 1 } else { n } {
            let v = rings[k][j];
            anti[v as usize] = vertices.len() as u32;
            vertices.push(-vertices[v as usize]);
        }
    }
    let eq = &rings[half_rings];
    for j in 0..n {
        anti[eq[j] as usize] = eq[(j + n / 2) % n];
    }

    let mut triangles = Vec::new();
    for k in 0..half_rings {
        for j in 0..n {
            let j1 = (j + 1) % n;
            let (b0, b1) = (rings[k + 1][j], rings[k + 1][j1]);
            if k == 0 {
                triangles.push([rings[0][0], b0, b1]);
            } else {
                let (a0, a1) = (rings[k][j], rings[k][j1]);
                triangles.push([a0, b0, b1]);
                triangles.push([a0, b1, a1]);
            }
        }
    }
    let mirrored: Vec<[u32; 3]> =
        triangles.iter().map(|t| [anti[t[0] as usize], anti[t[2] as usize], anti[t[1] as usize]]).collect();
    triangles.extend(mirrored);
    SymmetricConvexMesh::from_parts(vertices, triangles, Some(support.clone()))
}

/// Hull of `n` random directions with radii in `[0.5, 1.5]`, symmetrized.
pub fn random_polytope(n: usize, seed: u64) -> Result<SymmetricConvexMesh> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts: Vec<Vec3> = (0..n)
        .map(|_| {
            let z: f64 = rng.gen_range(-1.0..=1.0);
            let phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            let rho = (1.0 - z * z).max(0.0).sqrt();
            let radius: f64 = rng.gen_range(0.5..=1.5);
            Vec3::new(rho * phi.cos(), rho * phi.sin(), z) * radius
        })
        .collect();
    build_symmetric_hull(&pts)
}
