//! Reading and writing OFF meshes.

use std::fmt::Write as _;

use super::mesh::SymmetricConvexMesh;
use crate::{Error, Result, Vec3};

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

/// Parses an OFF file into vertices and triangles. Polygonal faces are fan
/// triangulated. `#` starts a comment.
pub fn parse_off(text: &str) -> Result<(Vec<Vec3>, Vec<[u32; 3]>)> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (first_no, first) = lines.next().ok_or_else(|| parse_err(1, "empty file"))?;
    let mut header_rest = match first.strip_prefix("OFF") {
        Some(rest) => rest.trim().to_string(),
        None => return Err(parse_err(first_no, "missing OFF header")),
    };
    let mut counts_line = first_no;
    if header_rest.is_empty() {
        let (no, l) = lines.next().ok_or_else(|| parse_err(first_no, "missing element counts"))?;
        header_rest = l.to_string();
        counts_line = no;
    }
    let counts: Vec<usize> = header_rest
        .split_whitespace()
        .map(|t| t.parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| parse_err(counts_line, format!("bad element count: {e}")))?;
    if counts.len() < 2 {
        return Err(parse_err(counts_line, "expected vertex and face counts"));
    }
    let (nv, nf) = (counts[0], counts[1]);

    let mut vertices = Vec::with_capacity(nv);
    for k in 0..nv {
        let (no, l) = lines.next().ok_or_else(|| parse_err(0, format!("file ends before vertex {k}")))?;
        let c: Vec<f64> = l
            .split_whitespace()
            .take(3)
            .map(|t| t.parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| parse_err(no, format!("bad coordinate: {e}")))?;
        if c.len() != 3 || c.iter().any(|x| !x.is_finite()) {
            return Err(parse_err(no, "vertex needs three finite coordinates"));
        }
        vertices.push(Vec3::new(c[0], c[1], c[2]));
    }

    let mut triangles = Vec::with_capacity(2 * nf);
    for k in 0..nf {
        let (no, l) = lines.next().ok_or_else(|| parse_err(0, format!("file ends before face {k}")))?;
        let idx: Vec<usize> = l
            .split_whitespace()
            .map(|t| t.parse::<usize>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| parse_err(no, format!("bad face index: {e}")))?;
        let Some((&deg, rest)) = idx.split_first() else {
            return Err(parse_err(no, "empty face"));
        };
        if deg < 3 || rest.len() < deg {
            return Err(parse_err(no, format!("face declares {deg} vertices but lists {}", rest.len())));
        }
        let face = &rest[..deg];
        if let Some(&bad) = face.iter().find(|&&v| v >= nv) {
            return Err(parse_err(no, format!("vertex index {bad} out of range")));
        }
        for i in 1..deg - 1 {
            triangles.push([face[0] as u32, face[i] as u32, face[i + 1] as u32]);
        }
    }
    Ok((vertices, triangles))
}

/// Reads and validates a symmetric convex mesh.
pub fn read_off(text: &str) -> Result<SymmetricConvexMesh> {
    let (v, t) = parse_off(text)?;
    SymmetricConvexMesh::from_parts(v, t, None)
}

/// Writes the mesh with full round-trip precision.
pub fn write_off(m: &SymmetricConvexMesh) -> String {
    let mut s = String::new();
    writeln!(s, "OFF\n{} {} 0", m.vertices().len(), m.triangles().len()).unwrap();
    for v in m.vertices() {
        writeln!(s, "{:.16e} {:.16e} {:.16e}", v.x, v.y, v.z).unwrap();
    }
    for t in m.triangles() {
        writeln!(s, "3 {} {} {}", t[0], t[1], t[2]).unwrap();
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::bodies;

    #[test]
    fn round_trip_is_exact() {
        let m = bodies::icosphere(2);
        let back = read_off(&write_off(&m)).unwrap();
        assert_eq!(back.vertices(), m.vertices());
        assert_eq!(back.triangles(), m.triangles());
    }

    #[test]
    fn quads_are_fanned() {
        let text = "OFF\n8 6 0\n\
            -1 -1 -1\n1 -1 -1\n1 1 -1\n-1 1 -1\n-1 -1 1\n1 -1 1\n1 1 1\n-1 1 1\n\
            4 0 3 2 1\n4 4 5 6 7\n4 0 1 5 4\n4 2 3 7 6\n4 1 2 6 5\n4 0 4 7 3\n";
        let m = read_off(text).unwrap();
        assert_eq!(m.triangles().len(), 12);
        assert!((m.area() - 24.0).abs() < 1e-12);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let text = "OFF\n3 1 0\n0 0 0\n1 x 0\n0 1 0\n3 0 1 2\n";
        match parse_off(text) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 4),
            other => panic!("unexpected {other:?}"),
        }
        match parse_off("OFF\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n3 0 1 7\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 6),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_off("PLY\n"), Err(Error::Parse { line: 1, .. })));
    }
}
