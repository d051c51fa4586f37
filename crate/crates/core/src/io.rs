//! JSON surface files.
//!
//! ```json
//! {"version": 1, "genus": 1, "n": 1, "curvature": "decorated",
//!  "faces": [[0, 1, 2], [3, 4, 5]],
//!  "gluing": [[0, 0, 1, 1], [0, 1, 1, 2], [0, 2, 1, 0]],
//!  "vertex_of_corner": [1, 1, 1, 1, 1, 1],
//!  "values": {"0": 1.0, "1": 1.0, "2": 1.0}}
//! ```
//!
//! Corners are numbered `3f + i`, faces and sides from 0, vertex labels from
//! 1. Edge ids number the edges by their sorted pair of half-edges.
//! `curvature` is `"decorated"` for lambda lengths or -1, 0, 1 for the edge
//! lengths of a cone metric.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::minkowski::Curvature;
use crate::surface::{ConeMetric, DecoratedMetric, Triangulation};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub enum Surface {
    Decorated(DecoratedMetric),
    Cone(ConeMetric),
}

impl Surface {
    pub fn tri(&self) -> &Triangulation {
        match self {
            Surface::Decorated(d) => &d.tri,
            Surface::Cone(m) => &m.tri,
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SurfaceFile {
    version: u32,
    genus: usize,
    n: usize,
    curvature: Value,
    faces: Vec<[usize; 3]>,
    gluing: Vec<[usize; 4]>,
    vertex_of_corner: Vec<usize>,
    values: BTreeMap<String, f64>,
}

fn malformed(m: impl Into<String>) -> Error {
    Error::Malformed(m.into())
}

/// Parses a surface file.
pub fn read_surface(text: &str) -> Result<Surface> {
    let f: SurfaceFile = serde_json::from_str(text).map_err(|e| malformed(e.to_string()))?;
    if f.version != FORMAT_VERSION {
        return Err(malformed(format!("unsupported version {}", f.version)));
    }
    for (i, c) in f.faces.iter().enumerate() {
        if *c != [3 * i, 3 * i + 1, 3 * i + 2] {
            return Err(malformed(format!(
                "face {i} must list corners {}..{}",
                3 * i,
                3 * i + 2
            )));
        }
    }
    if f.vertex_of_corner.len() != 3 * f.faces.len() {
        return Err(malformed("vertex_of_corner must have one entry per corner"));
    }
    if f.vertex_of_corner.iter().any(|&v| v == 0 || v > f.n) {
        return Err(malformed(format!("vertex labels must lie in 1..={}", f.n)));
    }
    let faces: Vec<[usize; 3]> = f
        .vertex_of_corner
        .chunks(3)
        .map(|c| [c[0] - 1, c[1] - 1, c[2] - 1])
        .collect();
    let gluing: Vec<_> = f.gluing.iter().map(|g| (g[0], g[1], g[2], g[3])).collect();
    let mut tri = Triangulation::new(f.n, &faces, &gluing)?;
    tri.canonicalize();
    if tri.genus() != f.genus {
        return Err(malformed(format!(
            "genus field {} but the gluing has genus {}",
            f.genus,
            tri.genus()
        )));
    }
    let ne = tri.num_edges();
    if f.values.len() != ne {
        return Err(malformed(format!("expected {ne} edge values, got {}", f.values.len())));
    }
    let mut values = vec![f64::NAN; ne];
    for (k, v) in &f.values {
        let e: usize = k.parse().map_err(|_| malformed(format!("bad edge id {k:?}")))?;
        if e >= ne {
            return Err(malformed(format!("edge id {e} out of range")));
        }
        values[e] = *v;
    }
    if values.iter().any(|v| v.is_nan()) {
        return Err(malformed("duplicate edge ids"));
    }
    match &f.curvature {
        Value::String(s) if s == "decorated" => Ok(Surface::Decorated(DecoratedMetric::new(tri, values)?)),
        Value::Number(x) => {
            let k = x
                .as_i64()
                .ok_or_else(|| malformed(format!("curvature {x} is not an integer")))?;
            let k = Curvature::from_sign(k).map_err(|_| malformed(format!("curvature must be -1, 0 or 1, got {k}")))?;
            Ok(Surface::Cone(ConeMetric::new(tri, k, values)?))
        }
        other => Err(malformed(format!("bad curvature field {other}"))),
    }
}

/// Serializes a surface with canonical edge ids.
pub fn write_surface(s: &Surface) -> String {
    let (tri, values, curvature) = match s {
        Surface::Decorated(d) => (&d.tri, &d.lambda, Value::from("decorated")),
        Surface::Cone(m) => (&m.tri, &m.lengths, Value::from(m.k.sign() as i64)),
    };
    let mut tri = tri.clone();
    let perm = tri.canonicalize();
    let mut vals = vec![0.0; values.len()];
    for (old, &new) in perm.iter().enumerate() {
        vals[new] = values[old];
    }
    let nf = tri.num_faces();
    let file = SurfaceFile {
        version: FORMAT_VERSION,
        genus: tri.genus(),
        n: tri.num_vertices(),
        curvature,
        faces: (0..nf).map(|f| [3 * f, 3 * f + 1, 3 * f + 2]).collect(),
        gluing: tri.gluing().into_iter().map(|(a, b, c, d)| [a, b, c, d]).collect(),
        vertex_of_corner: (0..3 * nf).map(|c| tri.vertex(c) + 1).collect(),
        values: vals.iter().enumerate().map(|(e, v)| (e.to_string(), *v)).collect(),
    };
    serde_json::to_string_pretty(&file).expect("surface serializes") + "\n"
}

pub fn read_surface_file(path: &Path) -> Result<Surface> {
    let text = std::fs::read_to_string(path).map_err(|e| malformed(format!("{}: {e}", path.display())))?;
    read_surface(&text)
}

pub fn write_surface_file(path: &Path, s: &Surface) -> Result<()> {
    std::fs::write(path, write_surface(s)).map_err(|e| Error::Domain(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::builders::{octagon_genus2, one_vertex_torus};
    use crate::surface::SurfaceMetric;

    #[test]
    fn documented_example_parses() {
        let text = r#"{"version": 1, "genus": 1, "n": 1, "curvature": "decorated",
            "faces": [[0, 1, 2], [3, 4, 5]],
            "gluing": [[0, 0, 1, 1], [0, 1, 1, 2], [0, 2, 1, 0]],
            "vertex_of_corner": [1, 1, 1, 1, 1, 1],
            "values": {"0": 1.0, "1": 1.0, "2": 1.0}}"#;
        let s = read_surface(text).unwrap();
        assert_eq!(
            s,
            Surface::Decorated(DecoratedMetric::new(one_vertex_torus(), vec![1.0; 3]).unwrap())
        );
    }

    #[test]
    fn round_trip_after_flips() {
        let mut d = DecoratedMetric::new(octagon_genus2(), (0..9).map(|i| 1.0 + 0.1 * i as f64).collect()).unwrap();
        d.flip(4).unwrap();
        d.flip(7).unwrap();
        let text = write_surface(&Surface::Decorated(d.clone()));
        let Surface::Decorated(back) = read_surface(&text).unwrap() else {
            panic!()
        };
        // Same metric up to edge renumbering.
        let mut tri = d.tri.clone();
        let perm = tri.canonicalize();
        assert_eq!(back.tri, tri);
        for (old, &new) in perm.iter().enumerate() {
            assert_eq!(back.lambda[new], d.lambda[old]);
        }
        assert_eq!(write_surface(&Surface::Decorated(back)), text);
    }

    #[test]
    fn cone_round_trip() {
        let m = ConeMetric::new(one_vertex_torus(), Curvature::Hyperbolic, vec![1.1, 1.2, 1.3]).unwrap();
        let s = Surface::Cone(m);
        assert_eq!(read_surface(&write_surface(&s)).unwrap(), s);
    }

    #[test]
    fn malformed_inputs() {
        let good = write_surface(&Surface::Decorated(
            DecoratedMetric::new(one_vertex_torus(), vec![1.0; 3]).unwrap(),
        ));
        for (from, to) in [
            ("\"version\": 1", "\"version\": 2"),
            ("\"genus\": 1", "\"genus\": 0"),
            ("\"decorated\"", "\"spherical\""),
            ("\"0\": 1.0", "\"7\": 1.0"),
        ] {
            let bad = good.replacen(from, to, 1);
            assert_ne!(bad, good);
            assert!(matches!(read_surface(&bad), Err(Error::Malformed(_))), "{to}");
        }
        assert!(matches!(read_surface("{"), Err(Error::Malformed(_))));
        let neg = good.replacen("\"0\": 1.0", "\"0\": -1.0", 1);
        assert!(matches!(read_surface(&neg), Err(Error::Domain(_))));
    }
}
