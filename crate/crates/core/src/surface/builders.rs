//! Standard triangulations used throughout the tests and examples.

use crate::error::{Error, Result};
use crate::surface::Triangulation;

/// Square torus with one vertex, cut along one diagonal.
///
/// Edge 0 is the bottom/top side, edge 1 the right/left side and edge 2 the
/// diagonal; both faces are `(0, 0, 0)`.
pub fn one_vertex_torus() -> Triangulation {
    Triangulation::new(1, &[[0, 0, 0], [0, 0, 0]], &[(0, 0, 1, 1), (0, 1, 1, 2), (0, 2, 1, 0)])
        .expect("one-vertex torus")
}

/// Torus from an `nx` by `ny` grid of squares, each cut along the diagonal
/// from its lower-left to its upper-right corner. Vertex `(i, j)` has label
/// `i + nx * j`.
pub fn grid_torus(nx: usize, ny: usize) -> Result<Triangulation> {
    if nx == 0 || ny == 0 {
        return Err(Error::InvalidTriangulation("grid torus needs nx, ny >= 1".into()));
    }
    let vid = |i: usize, j: usize| (i % nx) + nx * (j % ny);
    let sq = |i: usize, j: usize| (i % nx) + nx * (j % ny);
    let mut faces = Vec::new();
    let mut gluing = Vec::new();
    for j in 0..ny {
        for i in 0..nx {
            let (p00, p10, p11, p01) = (vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1));
            faces.push([p00, p10, p11]);
            faces.push([p00, p11, p01]);
            let s = sq(i, j);
            let (lo, up) = (2 * s, 2 * s + 1);
            gluing.push((lo, 2, up, 0));
            // Bottom side meets the top side of the square below.
            gluing.push((lo, 0, 2 * sq(i, j + ny - 1) + 1, 1));
            // Right side meets the left side of the square to the right.
            gluing.push((lo, 1, 2 * sq(i + 1, j) + 1, 2));
        }
    }
    Triangulation::new(nx * ny, &faces, &gluing)
}

/// Boundary of a tetrahedron: genus 0 with four vertices.
pub fn tetrahedron() -> Triangulation {
    Triangulation::from_oriented_faces(4, &[[0, 2, 1], [0, 1, 3], [0, 3, 2], [1, 2, 3]]).expect("tetrahedron")
}

/// Genus-2 surface with one vertex from the octagon `a b a' b' c d c' d'`
/// (primes are inverses), fan-triangulated from its first corner.
pub fn octagon_genus2() -> Triangulation {
    // Octagon side k lies on triangle (k - 1) for k = 1..6, side 0 on
    // triangle 0 and side 7 on triangle 5.
    let side = |k: usize| match k {
        0 => (0, 0),
        7 => (5, 2),
        _ => (k - 1, 1),
    };
    let mut gluing = Vec::new();
    for (p, q) in [(0, 2), (1, 3), (4, 6), (5, 7)] {
        let (fa, sa) = side(p);
        let (fb, sb) = side(q);
        gluing.push((fa, sa, fb, sb));
    }
    for k in 0..5 {
        gluing.push((k, 2, k + 1, 0));
    }
    Triangulation::from_gluing(6, &gluing).expect("genus-2 octagon")
}

/// Double of an `n`-gon fan-triangulated from vertex 0: faces `0..n-2` are
/// `(0, i, i+1)` on the front copy, faces `n-2..2n-4` are `(0, i+1, i)` on
/// the back copy.
pub fn doubled_polygon_triangulation(n: usize) -> Result<Triangulation> {
    if n < 3 {
        return Err(Error::InvalidPolygon(format!("need at least 3 sides, got {n}")));
    }
    // Front face i-1 is (0, i, i+1); back face n-3+i is (0, i+1, i).
    let front = |i: usize| i - 1;
    let back = |i: usize| n - 3 + i;
    let mut faces: Vec<[usize; 3]> = (1..n - 1).map(|i| [0, i, i + 1]).collect();
    faces.extend((1..n - 1).map(|i| [0, i + 1, i]));
    let mut gluing = vec![(front(1), 0, back(1), 2), (front(n - 2), 2, back(n - 2), 0)];
    for i in 1..n - 1 {
        gluing.push((front(i), 1, back(i), 1));
    }
    for i in 1..n - 2 {
        gluing.push((front(i), 2, front(i + 1), 0));
        gluing.push((back(i), 0, back(i + 1), 2));
    }
    Triangulation::new(n, &faces, &gluing)
}
