//! Triangles of constant curvature -1, 0 or +1 given by their side lengths.

use std::f64::consts::PI;

use nalgebra::{Matrix3, Vector3};

use crate::error::{Error, Result};
use crate::minkowski::{length_to_lambda, lift_triangle, plane_center_vecs, Curvature};

/// Side lengths of a triangle in the model geometry of curvature `k`.
/// Angle `i` in the results is always the angle opposite side `i`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriangleLengths {
    pub k: Curvature,
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

/// Outcome of [`validate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diagnostics {
    pub positive: bool,
    pub triangle_inequality: bool,
    /// Sides below pi and perimeter below 2 pi; always true off the sphere.
    pub spherical_bounds: bool,
    /// The three vertices embed in the unit sphere with the circumcenter on
    /// the side of the triangle; always true off the sphere.
    pub spherical_convex: bool,
}

impl Diagnostics {
    pub fn is_valid(&self) -> bool {
        self.positive && self.triangle_inequality && self.spherical_bounds && self.spherical_convex
    }
}

impl TriangleLengths {
    pub fn new(k: Curvature, a: f64, b: f64, c: f64) -> Self {
        TriangleLengths { k, a, b, c }
    }

    pub fn sides(&self) -> [f64; 3] {
        [self.a, self.b, self.c]
    }

    fn check(&self) -> Result<()> {
        let d = validate(self);
        if !d.positive || !d.triangle_inequality {
            return Err(Error::InvalidTriangle(format!(
                "sides ({}, {}, {}) violate the triangle inequality",
                self.a, self.b, self.c
            )));
        }
        if !d.spherical_bounds || !d.spherical_convex {
            return Err(Error::NotConvexSpherical);
        }
        Ok(())
    }
}

/// Gram matrix of three unit vectors at pairwise angles `a, b, c`.
fn spherical_gram(t: &TriangleLengths) -> Matrix3<f64> {
    let (ca, cb, cc) = (t.a.cos(), t.b.cos(), t.c.cos());
    Matrix3::new(1.0, cc, cb, cc, 1.0, ca, cb, ca, 1.0)
}

/// Angular circumradius of the spherical triangle from its unit-vector
/// embedding, `None` if the three vectors do not embed.
pub fn spherical_embedding_circumradius(t: &TriangleLengths) -> Option<f64> {
    let g = spherical_gram(t);
    let chol = g.cholesky()?;
    let s = chol.solve(&Vector3::repeat(1.0)).sum();
    if !(s > 0.0) {
        return None;
    }
    // The circumcenter direction is V G^{-1} 1; its product with every
    // vertex is 1/sqrt(1^T G^{-1} 1) > 0, so it lies on the triangle's side.
    Some((1.0 / s.sqrt()).acos())
}

pub fn validate(t: &TriangleLengths) -> Diagnostics {
    let [a, b, c] = t.sides();
    let positive = [a, b, c].iter().all(|x| x.is_finite() && *x > 0.0);
    let triangle_inequality = a < b + c && b < a + c && c < a + b;
    let (spherical_bounds, spherical_convex) = if t.k == Curvature::Spherical {
        let bounds = a < PI && b < PI && c < PI && a + b + c < 2.0 * PI;
        let convex = positive && spherical_embedding_circumradius(t).is_some_and(|r| r < PI / 2.0);
        (bounds, convex)
    } else {
        (true, true)
    };
    Diagnostics {
        positive,
        triangle_inequality,
        spherical_bounds,
        spherical_convex,
    }
}

fn sk(k: Curvature, x: f64) -> f64 {
    match k {
        Curvature::Hyperbolic => x.sinh(),
        Curvature::Euclidean => x,
        Curvature::Spherical => x.sin(),
    }
}

/// Interior angles opposite `a`, `b`, `c`, by the half-angle formulas.
pub fn triangle_angles(t: &TriangleLengths) -> Result<[f64; 3]> {
    t.check()?;
    let [a, b, c] = t.sides();
    let s = 0.5 * (a + b + c);
    let f = |x: f64| sk(t.k, x);
    let (fs, fa, fb, fc) = (f(s), f(s - a), f(s - b), f(s - c));
    let half = |p: f64, q: f64, r: f64| 2.0 * (p * q).sqrt().atan2((fs * r).sqrt());
    Ok([half(fb, fc, fa), half(fa, fc, fb), half(fa, fb, fc)])
}

pub fn triangle_area(t: &TriangleLengths) -> Result<f64> {
    match t.k {
        Curvature::Euclidean => {
            t.check()?;
            let mut s = t.sides();
            s.sort_by(|x, y| y.total_cmp(x));
            let [a, b, c] = s;
            Ok(0.25 * ((a + (b + c)) * (c - (a - b)) * (c + (a - b)) * (a + (b - c))).sqrt())
        }
        Curvature::Hyperbolic => Ok(PI - triangle_angles(t)?.iter().sum::<f64>()),
        Curvature::Spherical => Ok(triangle_angles(t)?.iter().sum::<f64>() - PI),
    }
}

/// Circumradius computed through the light-cone lift of the triangle.
pub fn circumradius(t: &TriangleLengths) -> Result<f64> {
    t.check()?;
    let [la, lb, lc] = t.sides().map(|l| length_to_lambda(l, t.k));
    // Vertices 1, 2, 3 opposite a, b, c: l12 = c, l13 = b, l23 = a.
    let [x, y, z] = lift_triangle(lc, lb, la);
    let plane = plane_center_vecs(&x, &y, &z).map_err(|e| match t.k {
        Curvature::Hyperbolic => Error::NonCyclic,
        Curvature::Spherical => Error::NotConvexSpherical,
        Curvature::Euclidean => e,
    })?;
    plane.circumradius(t.k)
}

/// Side opposite the angle `gamma` enclosed by sides `b` and `c`.
pub fn third_side(k: Curvature, b: f64, c: f64, gamma: f64) -> f64 {
    match k {
        Curvature::Euclidean => (b * b + c * c - 2.0 * b * c * gamma.cos()).max(0.0).sqrt(),
        Curvature::Hyperbolic => {
            let ch = b.cosh() * c.cosh() - b.sinh() * c.sinh() * gamma.cos();
            ch.max(1.0).acosh()
        }
        Curvature::Spherical => {
            let co = b.cos() * c.cos() + b.sin() * c.sin() * gamma.cos();
            co.clamp(-1.0, 1.0).acos()
        }
    }
}
