//! Marked triangulated surfaces carrying either a decorated hyperbolic metric
//! (lambda lengths) or a cone metric (edge lengths), with flips and the
//! flip-to-Delaunay algorithm.

pub mod builders;
mod triangulation;

use std::f64::consts::PI;

pub use crate::minkowski::EdgeStatus;
pub(crate) use triangulation::UnionFind;
pub use triangulation::{face, next, prev, FlipRecord, Triangulation};

use crate::error::{Error, Result};
use crate::geometry::{third_side, triangle_angles, triangle_area, validate, TriangleLengths};
use crate::minkowski::{
    classify_lift_value, fourth_point, lambda_of_vecs, length_to_lambda, lift_test_value, lift_triangle,
    plane_center_vecs, Curvature, EllipticPlane, MinkVec,
};

/// Decorated hyperbolic metric in Penner coordinates: one lambda length per
/// edge.
#[derive(Debug, Clone, PartialEq)]
pub struct DecoratedMetric {
    pub tri: Triangulation,
    pub lambda: Vec<f64>,
}

/// Cone metric of constant curvature `k` given by edge lengths.
#[derive(Debug, Clone, PartialEq)]
pub struct ConeMetric {
    pub tri: Triangulation,
    pub k: Curvature,
    pub lengths: Vec<f64>,
}

/// Edge ids around the quadrilateral of an edge `e = ab` with faces
/// `(a, b, c)` and `(b, a, d)`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Quad {
    pub ab: usize,
    pub bc: usize,
    pub ca: usize,
    pub ad: usize,
    pub db: usize,
}

pub(crate) fn quad(tri: &Triangulation, e: usize) -> Quad {
    let [h, t] = tri.halves(e);
    Quad {
        ab: e,
        bc: tri.edge_of(next(h)),
        ca: tri.edge_of(prev(h)),
        ad: tri.edge_of(next(t)),
        db: tri.edge_of(prev(t)),
    }
}

/// Light-cone lift `(a, b, c, d)` of the quadrilateral of an edge from
/// per-edge lambda lengths.
pub(crate) fn lift_quad(q: &Quad, lam: impl Fn(usize) -> f64) -> Result<[MinkVec; 4]> {
    let [x, y, z] = lift_triangle(lam(q.ab), lam(q.ca), lam(q.bc));
    let w = fourth_point(&x, &y, &z, lam(q.ad), lam(q.db))?;
    Ok([x, y, z, w])
}

fn check_values(tri: &Triangulation, vals: &[f64], what: &str) -> Result<()> {
    if vals.len() != tri.num_edges() {
        return Err(Error::Malformed(format!(
            "expected {} {what} values, got {}",
            tri.num_edges(),
            vals.len()
        )));
    }
    if let Some(x) = vals.iter().find(|x| !(x.is_finite() && **x > 0.0)) {
        return Err(Error::Domain(format!("{what} values must be positive, got {x}")));
    }
    Ok(())
}

/// Operations shared by decorated and cone metrics.
pub trait SurfaceMetric: Clone {
    fn tri(&self) -> &Triangulation;

    /// Lambda length used by the lift test on edge `e`.
    fn test_lambda(&self, e: usize) -> f64;

    /// Replaces edge `e` by the other diagonal of its quadrilateral.
    fn flip(&mut self, e: usize) -> Result<FlipRecord>;

    /// Value `d.v` of the lift test of edge `e`, with `v` the plane through
    /// the lift of the first face. `None` for edges whose sides lie on one
    /// face, which are never flipped.
    fn lift_value(&self, e: usize) -> Result<Option<f64>> {
        if self.tri().is_self_adjacent(e) {
            return Ok(None);
        }
        let q = quad(self.tri(), e);
        let [x, y, z, w] = lift_quad(&q, |i| self.test_lambda(i))?;
        Ok(Some(lift_test_value(&x, &y, &z, &w)?))
    }

    /// Delaunay status of `e`; requires the first face's lift to be an
    /// ellipse section.
    fn edge_status(&self, e: usize) -> Result<EdgeStatus> {
        if self.tri().is_self_adjacent(e) {
            return Ok(EdgeStatus::Strict);
        }
        let q = quad(self.tri(), e);
        let [x, y, z, w] = lift_quad(&q, |i| self.test_lambda(i))?;
        let plane = plane_center_vecs(&x, &y, &z)?;
        Ok(classify_lift_value(crate::minkowski::mdot(&w, &plane.v)))
    }

    /// Status from the lift test without the ellipticity requirement.
    fn edge_status_loose(&self, e: usize) -> Result<EdgeStatus> {
        Ok(self.lift_value(e)?.map_or(EdgeStatus::Strict, classify_lift_value))
    }

    fn is_delaunay(&self) -> Result<bool> {
        for e in 0..self.tri().num_edges() {
            if self.edge_status_loose(e)? == EdgeStatus::Violated {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Elliptic plane through the lift of face `f`.
    fn face_plane(&self, f: usize) -> Result<EllipticPlane> {
        let [e0, e1, e2] = self.tri().face_edges(f);
        let [x, y, z] = lift_triangle(self.test_lambda(e0), self.test_lambda(e2), self.test_lambda(e1));
        plane_center_vecs(&x, &y, &z)
    }
}

impl DecoratedMetric {
    pub fn new(tri: Triangulation, lambda: Vec<f64>) -> Result<Self> {
        check_values(&tri, &lambda, "lambda")?;
        Ok(DecoratedMetric { tri, lambda })
    }

    /// Lambda length of the other diagonal by Ptolemy's relation.
    pub fn ptolemy(&self, e: usize) -> f64 {
        let q = quad(&self.tri, e);
        let l = &self.lambda;
        (l[q.ca] * l[q.db] + l[q.bc] * l[q.ad]) / l[q.ab]
    }

    /// Total horocycle length at each vertex: the sum over corners of
    /// `lambda_opposite / (lambda_adjacent_1 * lambda_adjacent_2)`. Vertex
    /// scaling by `u` multiplies the entry of vertex `i` by `exp(-u_i)`.
    pub fn horocycle_lengths(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.tri.num_vertices()];
        for f in 0..self.tri.num_faces() {
            let s = self.tri.face_edges(f).map(|e| self.lambda[e]);
            for i in 0..3 {
                // Corner i sits between sides i and i+2; side i+1 is opposite.
                out[self.tri.vertex(3 * f + i)] += s[(i + 1) % 3] / (s[i] * s[(i + 2) % 3]);
            }
        }
        out
    }
}

impl SurfaceMetric for DecoratedMetric {
    fn tri(&self) -> &Triangulation {
        &self.tri
    }

    fn test_lambda(&self, e: usize) -> f64 {
        self.lambda[e]
    }

    fn flip(&mut self, e: usize) -> Result<FlipRecord> {
        if self.tri.is_self_adjacent(e) {
            return Err(Error::FlipNotEmbeddable(e));
        }
        let q = quad(&self.tri, e);
        let [_, _, z, w] = lift_quad(&q, |i| self.lambda[i])?;
        let new = lambda_of_vecs(&z, &w)?;
        debug_assert!((new - self.ptolemy(e)).abs() <= 1e-9 * new);
        let rec = self.tri.flip(e)?;
        self.lambda[e] = new;
        Ok(rec)
    }
}

impl ConeMetric {
    pub fn new(tri: Triangulation, k: Curvature, lengths: Vec<f64>) -> Result<Self> {
        check_values(&tri, &lengths, "length")?;
        let m = ConeMetric { tri, k, lengths };
        for f in 0..m.tri.num_faces() {
            let t = m.face_triangle(f);
            let d = validate(&t);
            if !d.positive || !d.triangle_inequality {
                return Err(Error::InvalidTriangle(format!(
                    "face {} with sides ({}, {}, {})",
                    f + 1,
                    t.a,
                    t.b,
                    t.c
                )));
            }
            if !d.is_valid() {
                return Err(Error::NotConvexSpherical);
            }
        }
        Ok(m)
    }

    /// Face `f` as a triangle whose angle `i` sits at corner `i`.
    pub fn face_triangle(&self, f: usize) -> TriangleLengths {
        let [s0, s1, s2] = self.tri.face_edges(f).map(|e| self.lengths[e]);
        TriangleLengths::new(self.k, s1, s2, s0)
    }

    /// Angles at the three corners of every face.
    pub fn corner_angles(&self) -> Result<Vec<[f64; 3]>> {
        (0..self.tri.num_faces())
            .map(|f| triangle_angles(&self.face_triangle(f)))
            .collect()
    }

    pub fn cone_angles(&self) -> Result<Vec<f64>> {
        let mut theta = vec![0.0; self.tri.num_vertices()];
        for (f, ang) in self.corner_angles()?.iter().enumerate() {
            for i in 0..3 {
                theta[self.tri.vertex(3 * f + i)] += ang[i];
            }
        }
        Ok(theta)
    }

    /// `2 pi - theta_i` at every vertex.
    pub fn singular_curvature(&self) -> Result<Vec<f64>> {
        Ok(self.cone_angles()?.into_iter().map(|t| 2.0 * PI - t).collect())
    }

    pub fn area(&self) -> Result<f64> {
        (0..self.tri.num_faces())
            .map(|f| triangle_area(&self.face_triangle(f)))
            .sum()
    }

    /// `sum kappa + K * area - 2 pi * chi`.
    pub fn gauss_bonnet_residual(&self) -> Result<f64> {
        let kappa: f64 = self.singular_curvature()?.iter().sum();
        let chi = self.tri.euler_characteristic() as f64;
        Ok(kappa + self.k.sign() as f64 * self.area()? - 2.0 * PI * chi)
    }

    /// Uniform dilation of all edge lengths (meaningful for `K = 0`).
    pub fn scaled(&self, s: f64) -> ConeMetric {
        ConeMetric {
            tri: self.tri.clone(),
            k: self.k,
            lengths: self.lengths.iter().map(|l| l * s).collect(),
        }
    }
}

impl SurfaceMetric for ConeMetric {
    fn tri(&self) -> &Triangulation {
        &self.tri
    }

    fn test_lambda(&self, e: usize) -> f64 {
        length_to_lambda(self.lengths[e], self.k)
    }

    fn flip(&mut self, e: usize) -> Result<FlipRecord> {
        if self.tri.is_self_adjacent(e) {
            return Err(Error::FlipNotEmbeddable(e));
        }
        let q = quad(&self.tri, e);
        let l = &self.lengths;
        let k = self.k;
        // Angles at a and b in (a, b, c) and in (b, a, d).
        let f_ang = triangle_angles(&TriangleLengths::new(k, l[q.bc], l[q.ca], l[q.ab]))?;
        let g_ang = triangle_angles(&TriangleLengths::new(k, l[q.db], l[q.ad], l[q.ab]))?;
        let at_a = f_ang[0] + g_ang[0];
        let at_b = f_ang[1] + g_ang[1];
        if at_a >= PI || at_b >= PI {
            return Err(Error::FlipNotEmbeddable(e));
        }
        let new = third_side(k, l[q.ca], l[q.ad], at_a);
        for t in [
            TriangleLengths::new(k, l[q.ca], l[q.ad], new),
            TriangleLengths::new(k, l[q.bc], l[q.db], new),
        ] {
            if !validate(&t).is_valid() {
                return Err(Error::FlipNotEmbeddable(e));
            }
        }
        let rec = self.tri.flip(e)?;
        self.lengths[e] = new;
        Ok(rec)
    }
}

/// Flips Violated edges, lowest index first, until every edge is Strict or
/// Flat. Returns the Delaunay metric and the flipped edge ids in order.
pub fn make_delaunay<M: SurfaceMetric>(m: &M) -> Result<(M, Vec<usize>)> {
    let (out, recs) = make_delaunay_records(m)?;
    Ok((out, recs.iter().map(|r| r.edge).collect()))
}

/// As [`make_delaunay`] but keeps the full flip records.
pub fn make_delaunay_records<M: SurfaceMetric>(m: &M) -> Result<(M, Vec<FlipRecord>)> {
    let mut cur = m.clone();
    let ne = cur.tri().num_edges();
    let cap = 50 * ne;
    let mut log = Vec::new();
    loop {
        let mut first_err = None;
        let mut flipped = false;
        for e in 0..ne {
            if cur.edge_status_loose(e)? != EdgeStatus::Violated {
                continue;
            }
            let mut trial = cur.clone();
            match trial.flip(e) {
                Ok(rec) => {
                    cur = trial;
                    log.push(rec);
                    flipped = true;
                    break;
                }
                Err(err) => {
                    first_err.get_or_insert(err);
                }
            }
        }
        if !flipped {
            return match first_err {
                None => Ok((cur, log)),
                Some(err) => Err(err),
            };
        }
        if log.len() > cap {
            return Err(Error::IterationCapExceeded { cap, flips: log.len() });
        }
    }
}

/// A face of the Delaunay decomposition: triangles joined across Flat edges.
#[derive(Debug, Clone, PartialEq)]
pub struct DecompositionFace {
    pub triangles: Vec<usize>,
    /// Boundary half-edges in cyclic order (one cycle per face).
    pub boundary: Vec<usize>,
}

impl DecompositionFace {
    /// Vertex labels around the boundary, 0-based.
    pub fn vertices(&self, tri: &Triangulation) -> Vec<usize> {
        self.boundary.iter().map(|&h| tri.vertex(h)).collect()
    }

    pub fn edges(&self, tri: &Triangulation) -> Vec<usize> {
        self.boundary.iter().map(|&h| tri.edge_of(h)).collect()
    }
}

/// Groups the triangles of a Delaunay metric across its Flat edges.
pub fn delaunay_decomposition<M: SurfaceMetric>(m: &M) -> Result<Vec<DecompositionFace>> {
    let tri = m.tri();
    let status: Vec<EdgeStatus> = (0..tri.num_edges())
        .map(|e| m.edge_status_loose(e))
        .collect::<Result<_>>()?;
    if status.contains(&EdgeStatus::Violated) {
        return Err(Error::Domain("metric is not Delaunay".into()));
    }
    let nf = tri.num_faces();
    let mut uf = UnionFind::new(nf);
    for (e, s) in status.iter().enumerate() {
        if *s == EdgeStatus::Flat {
            let [a, b] = tri.halves(e);
            uf.union(face(a), face(b));
        }
    }
    let internal = |h: usize| status[tri.edge_of(h)] == EdgeStatus::Flat;
    let mut used = vec![false; tri.num_half_edges()];
    let mut groups: Vec<DecompositionFace> = Vec::new();
    let mut root_to_group = std::collections::HashMap::new();
    for f in 0..nf {
        let r = uf.find(f);
        let gi = *root_to_group.entry(r).or_insert_with(|| {
            groups.push(DecompositionFace {
                triangles: Vec::new(),
                boundary: Vec::new(),
            });
            groups.len() - 1
        });
        groups[gi].triangles.push(f);
    }
    for g in groups.iter_mut() {
        for &f in &g.triangles {
            for start in 3 * f..3 * f + 3 {
                if internal(start) || used[start] {
                    continue;
                }
                let mut h = start;
                loop {
                    used[h] = true;
                    g.boundary.push(h);
                    let mut nx = next(h);
                    while internal(nx) {
                        nx = next(tri.twin(nx));
                    }
                    h = nx;
                    if h == start {
                        break;
                    }
                }
            }
        }
    }
    Ok(groups)
}
