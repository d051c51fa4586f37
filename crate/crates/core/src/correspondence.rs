//! The lambda-length dictionary between decorated hyperbolic metrics and cone
//! metrics, vertex scaling, and tests for discrete conformality.

use std::collections::{HashSet, VecDeque};
use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::minkowski::{lambda_to_length, length_to_lambda, Curvature};
use crate::surface::builders::doubled_polygon_triangulation;
use crate::surface::{make_delaunay, ConeMetric, DecoratedMetric, EdgeStatus, SurfaceMetric};

/// Margin below 1 required of every Delaunay face circumparameter for a
/// decorated metric to have a spherical counterpart.
pub const EPS_TSTAR: f64 = 1e-9;
/// Largest edge residual accepted by [`same_fiber_test`].
pub const FIBER_TOL: f64 = 1e-8;

/// Cone metric of curvature `k` induced by a decorated metric.
///
/// The decorated metric is first made Delaunay; its lambda lengths then map
/// to edge lengths `2 asinh(l)`, `2 l` or `2 asin(l)`.
pub fn decorated_to_cone(d: &DecoratedMetric, k: Curvature) -> Result<ConeMetric> {
    let (dd, _) = make_delaunay(d)?;
    delaunay_decorated_to_cone(&dd, k)
}

/// As [`decorated_to_cone`] for a metric already known to be Delaunay.
pub fn delaunay_decorated_to_cone(dd: &DecoratedMetric, k: Curvature) -> Result<ConeMetric> {
    if k == Curvature::Spherical {
        let report = face_report(dd);
        if !report.member {
            return Err(Error::NotInTStar {
                max_rho_hat: report.max_rho_hat,
            });
        }
    }
    let lengths = dd
        .lambda
        .iter()
        .map(|&l| lambda_to_length(l, k))
        .collect::<Result<Vec<_>>>()?;
    ConeMetric::new(dd.tri.clone(), k, lengths)
}

/// Decorated metric whose induced cone metric is `m`.
///
/// With `bps_convention` the Euclidean dictionary is `l = length` instead of
/// `l = length / 2`, i.e. the result for `m` equals the default result for
/// `m` dilated by 2.
pub fn cone_to_decorated(m: &ConeMetric, bps_convention: bool) -> Result<DecoratedMetric> {
    let (md, _) = make_delaunay(m)?;
    let lambda = md
        .lengths
        .iter()
        .map(|&l| {
            if bps_convention && m.k == Curvature::Euclidean {
                l
            } else {
                length_to_lambda(l, m.k)
            }
        })
        .collect();
    DecoratedMetric::new(md.tri, lambda)
}

/// Circumparameters of the Delaunay faces of a decorated metric.
#[derive(Debug, Clone, PartialEq)]
pub struct TStarReport {
    pub member: bool,
    /// One entry per triangle of the Delaunay triangulation; infinite for a
    /// face whose lift is not an ellipse section.
    pub rho_hat: Vec<f64>,
    pub max_rho_hat: f64,
}

fn face_report(dd: &DecoratedMetric) -> TStarReport {
    let rho_hat: Vec<f64> = (0..dd.tri.num_faces())
        .map(|f| dd.face_plane(f).map_or(f64::INFINITY, |p| p.rho_hat))
        .collect();
    let max_rho_hat = rho_hat.iter().copied().fold(0.0, f64::max);
    TStarReport {
        member: max_rho_hat < 1.0 - EPS_TSTAR,
        rho_hat,
        max_rho_hat,
    }
}

/// Whether the convex hull of the decoration contains the unit hyperboloid:
/// true iff every Delaunay face has circumparameter below `1 - EPS_TSTAR`.
pub fn tstar_membership(d: &DecoratedMetric) -> Result<TStarReport> {
    let (dd, _) = make_delaunay(d)?;
    Ok(face_report(&dd))
}

fn check_u(n: usize, u: &[f64]) -> Result<()> {
    if u.len() != n {
        return Err(Error::Domain(format!("expected {n} scale factors, got {}", u.len())));
    }
    if u.iter().any(|x| !x.is_finite()) {
        return Err(Error::Domain("scale factors must be finite".into()));
    }
    Ok(())
}

/// Multiplies the lambda length of every edge `ij` by `exp((u_i + u_j) / 2)`.
pub fn vertex_scale_decorated(d: &DecoratedMetric, u: &[f64]) -> Result<DecoratedMetric> {
    check_u(d.tri.num_vertices(), u)?;
    let lambda = (0..d.tri.num_edges())
        .map(|e| {
            let [i, j] = d.tri.edge_vertices(e);
            d.lambda[e] * (0.5 * (u[i] + u[j])).exp()
        })
        .collect();
    DecoratedMetric::new(d.tri.clone(), lambda)
}

/// Discrete conformal change of a cone metric by vertex scaling, with the
/// Delaunay triangulation maintained along the way.
pub fn vertex_scale_cone(m: &ConeMetric, u: &[f64]) -> Result<ConeMetric> {
    check_u(m.tri.num_vertices(), u)?;
    let d = cone_to_decorated(m, false)?;
    decorated_to_cone(&vertex_scale_decorated(&d, u)?, m.k)
}

/// Least-squares solution of `2 ln(l2_e / l1_e) = u_i + u_j` over all edges
/// and its largest edge residual.
pub fn fiber_solve(d1: &DecoratedMetric, d2: &DecoratedMetric) -> Result<(Vec<f64>, f64)> {
    if d1.tri != d2.tri {
        return Err(Error::CombinatoricsMismatch(
            "metrics live on different triangulations".into(),
        ));
    }
    let (ne, n) = (d1.tri.num_edges(), d1.tri.num_vertices());
    let mut a = DMatrix::zeros(ne, n);
    let mut b = DVector::zeros(ne);
    for e in 0..ne {
        let [i, j] = d1.tri.edge_vertices(e);
        a[(e, i)] += 1.0;
        a[(e, j)] += 1.0;
        b[e] = 2.0 * (d2.lambda[e] / d1.lambda[e]).ln();
    }
    let svd = a.clone().svd(true, true);
    let u = svd
        .solve(&b, 1e-12)
        .map_err(|m| Error::Domain(format!("least squares failed: {m}")))?;
    let residual = (a * &u - b).amax();
    Ok((u.iter().copied().collect(), residual))
}

/// Vertex scaling `u` relating `d1` to `d2` on the same triangulation, if
/// one exists. Minimum-norm when the incidence map has a kernel.
pub fn same_fiber_test(d1: &DecoratedMetric, d2: &DecoratedMetric) -> Result<Option<Vec<f64>>> {
    let (u, res) = fiber_solve(d1, d2)?;
    Ok((res < FIBER_TOL).then_some(u))
}

/// Lambda lengths of `d2` transported to the triangulation of `d1` by a
/// half-edge isomorphism `map`.
fn pull_back(d1: &DecoratedMetric, d2: &DecoratedMetric, map: &[usize]) -> DecoratedMetric {
    let lambda = (0..d1.tri.num_edges())
        .map(|e| d2.lambda[d2.tri.edge_of(map[d1.tri.halves(e)[0]])])
        .collect();
    DecoratedMetric {
        tri: d1.tri.clone(),
        lambda,
    }
}

/// Smallest fiber residual between `d1` and any relabelling of `d2`,
/// searching over retriangulations of the Flat faces of `d1`.
fn best_alignment(d1: &DecoratedMetric, d2: &DecoratedMetric) -> Result<Option<f64>> {
    const MAX_STATES: usize = 256;
    let mut best: Option<f64> = None;
    let mut seen = HashSet::new();
    let mut queue = VecDeque::from([d1.clone()]);
    let mut visited = 0;
    while let Some(cur) = queue.pop_front() {
        let key: Vec<u64> = cur.lambda.iter().map(|l| l.to_bits()).collect();
        if !seen.insert((format!("{:?}", cur.tri), key)) {
            continue;
        }
        visited += 1;
        for map in cur.tri.isomorphisms(&d2.tri) {
            let pulled = pull_back(&cur, d2, &map);
            let (_, res) = fiber_solve(&cur, &pulled)?;
            best = Some(best.map_or(res, |b: f64| b.min(res)));
        }
        if best.is_some_and(|b| b < FIBER_TOL) || visited >= MAX_STATES {
            break;
        }
        for e in 0..cur.tri.num_edges() {
            if cur.edge_status_loose(e)? == EdgeStatus::Flat {
                let mut nx = cur.clone();
                if nx.flip(e).is_ok() {
                    queue.push_back(nx);
                }
            }
        }
    }
    Ok(best)
}

/// Whether two cone metrics of the same curvature are discretely conformal.
///
/// Both are mapped to decorated metrics; the first is rescaled so that its
/// horocycle lengths match the second, both are made Delaunay and their
/// triangulations matched label-preservingly (retriangulating Flat faces as
/// needed). `CombinatoricsMismatch` means no match was found, which is
/// inconclusive rather than a negative answer.
pub fn discretely_conformal_test(m1: &ConeMetric, m2: &ConeMetric) -> Result<bool> {
    if m1.k != m2.k {
        return Err(Error::Domain("metrics have different curvature".into()));
    }
    let (t1, t2) = (&m1.tri, &m2.tri);
    if t1.num_vertices() != t2.num_vertices() || t1.genus() != t2.genus() {
        return Err(Error::CombinatoricsMismatch("different surfaces".into()));
    }
    let normalize = |m: &ConeMetric| -> Result<ConeMetric> {
        if m.k == Curvature::Euclidean {
            Ok(m.scaled(1.0 / m.area()?.sqrt()))
        } else {
            Ok(m.clone())
        }
    };
    let d1 = cone_to_decorated(&normalize(m1)?, false)?;
    let d2 = cone_to_decorated(&normalize(m2)?, false)?;
    let (h1, h2) = (d1.horocycle_lengths(), d2.horocycle_lengths());
    let u: Vec<f64> = h1.iter().zip(&h2).map(|(a, b)| (a / b).ln()).collect();
    let (a, _) = make_delaunay(&vertex_scale_decorated(&d1, &u)?)?;
    let (b, _) = make_delaunay(&d2)?;
    match best_alignment(&a, &b)? {
        Some(res) => Ok(res < FIBER_TOL),
        None => Err(Error::CombinatoricsMismatch(
            "Delaunay triangulations could not be matched by a label-preserving map".into(),
        )),
    }
}

/// Double of a polygon with the given side lengths along its boundary.
///
/// Side `i` joins vertices `i` and `i+1 (mod n)`. Triangles are doubled as
/// given; larger polygons are taken to be the cyclic polygon with these
/// sides and fan-triangulated from vertex 0.
pub fn doubled_polygon(k: Curvature, sides: &[f64]) -> Result<ConeMetric> {
    let n = sides.len();
    if n < 3 {
        return Err(Error::InvalidPolygon(format!("need at least 3 sides, got {n}")));
    }
    if sides.iter().any(|s| !(s.is_finite() && *s > 0.0)) {
        return Err(Error::InvalidPolygon("side lengths must be positive".into()));
    }
    let diag = if n == 3 {
        vec![0.0; 3]
    } else {
        cyclic_fan_diagonals(k, sides)?
    };
    let tri = doubled_polygon_triangulation(n)?;
    let lengths = (0..tri.num_edges())
        .map(|e| {
            let [a, b] = tri.edge_vertices(e);
            let (a, b) = (a.min(b), a.max(b));
            if b == a + 1 {
                sides[a]
            } else if (a, b) == (0, n - 1) {
                sides[n - 1]
            } else {
                diag[b]
            }
        })
        .collect();
    ConeMetric::new(tri, k, lengths).map_err(|e| match e {
        Error::InvalidTriangle(m) => Error::InvalidPolygon(m),
        Error::NotConvexSpherical => Error::InvalidPolygon("not a convex spherical polygon".into()),
        other => other,
    })
}

/// Lengths of the diagonals from vertex 0 of the cyclic polygon with the
/// given sides, indexed by the far vertex.
fn cyclic_fan_diagonals(k: Curvature, sides: &[f64]) -> Result<Vec<f64>> {
    let f = |x: f64| match k {
        Curvature::Hyperbolic => x.sinh(),
        Curvature::Euclidean => x,
        Curvature::Spherical => x.sin(),
    };
    let finv = |y: f64| match k {
        Curvature::Hyperbolic => y.asinh(),
        Curvature::Euclidean => y,
        Curvature::Spherical => y.min(1.0).asin(),
    };
    let n = sides.len();
    let (m, smax) = sides
        .iter()
        .copied()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap();
    if k == Curvature::Spherical && smax >= PI {
        return Err(Error::InvalidPolygon("spherical side of length >= pi".into()));
    }
    // x = f(circumradius); central angle of side s is 2 asin(f(s/2) / x).
    let phi = |s: f64, x: f64| 2.0 * (f(s / 2.0) / x).min(1.0).asin();
    let x0 = f(smax / 2.0);
    let total = |x: f64| sides.iter().map(|&s| phi(s, x)).sum::<f64>();
    let others = |x: f64| -> f64 {
        sides
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != m)
            .map(|(_, &s)| phi(s, x))
            .sum::<f64>()
            - phi(smax, x)
    };
    let center_inside = total(x0) >= 2.0 * PI;
    let g = |x: f64| if center_inside { total(x) - 2.0 * PI } else { others(x) };
    // g is decreasing (inside) or eventually positive (outside) in x.
    let upper_limit = if k == Curvature::Spherical { 1.0 } else { f64::INFINITY };
    let mut hi = (2.0 * x0).min(upper_limit);
    let sign_ok = |x: f64| if center_inside { g(x) < 0.0 } else { g(x) > 0.0 };
    let mut tries = 0;
    while !sign_ok(hi) {
        if hi >= upper_limit || tries > 200 {
            return Err(Error::InvalidPolygon("no cyclic polygon with these sides".into()));
        }
        hi = (hi * 2.0).min(upper_limit);
        tries += 1;
    }
    let mut lo = x0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if sign_ok(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let x = 0.5 * (lo + hi);
    if k == Curvature::Spherical && x >= 1.0 {
        return Err(Error::InvalidPolygon(
            "spherical polygon not in an open hemisphere".into(),
        ));
    }
    let mut theta = vec![0.0; n];
    for i in 0..n - 1 {
        let sign = if !center_inside && i == m { -1.0 } else { 1.0 };
        theta[i + 1] = theta[i] + sign * phi(sides[i], x);
    }
    Ok((0..n)
        .map(|j| {
            let alpha = (theta[j] - theta[0]).abs();
            2.0 * finv(x * (alpha / 2.0).sin())
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::builders::one_vertex_torus;

    fn torus(l: f64) -> DecoratedMetric {
        DecoratedMetric::new(one_vertex_torus(), vec![l; 3]).unwrap()
    }

    #[test]
    fn uniform_torus_images() {
        let c = decorated_to_cone(&torus(1.0), Curvature::Euclidean).unwrap();
        assert_eq!(c.lengths, vec![2.0; 3]);
        assert!(c.singular_curvature().unwrap()[0].abs() < 1e-12);
        let c = decorated_to_cone(&torus(1.0), Curvature::Hyperbolic).unwrap();
        assert!((c.lengths[0] - 1.762747).abs() < 1e-6);
        assert!((c.singular_curvature().unwrap()[0] - 1.946780).abs() < 1e-6);
        match decorated_to_cone(&torus(1.0), Curvature::Spherical) {
            Err(Error::NotInTStar { max_rho_hat }) => assert!((max_rho_hat - 2.0 / 3f64.sqrt()).abs() < 1e-12),
            other => panic!("{other:?}"),
        }
        let c = decorated_to_cone(&torus(0.5), Curvature::Spherical).unwrap();
        assert!((c.lengths[0] - PI / 3.0).abs() < 1e-14);
        assert!((c.singular_curvature().unwrap()[0] + 1.102571).abs() < 1e-6);
    }

    #[test]
    fn inverse_map() {
        let m = ConeMetric::new(one_vertex_torus(), Curvature::Euclidean, vec![2.0; 3]).unwrap();
        assert_eq!(cone_to_decorated(&m, false).unwrap().lambda, vec![1.0; 3]);
        let d = doubled_polygon(Curvature::Euclidean, &[3.0, 4.0, 5.0]).unwrap();
        let mut l = cone_to_decorated(&d, false).unwrap().lambda;
        l.sort_by(f64::total_cmp);
        assert_eq!(l, vec![1.5, 2.0, 2.5]);
        let mut l = cone_to_decorated(&d, true).unwrap().lambda;
        l.sort_by(f64::total_cmp);
        assert_eq!(l, vec![3.0, 4.0, 5.0]);
    }

    #[test]
    fn tstar() {
        let r = tstar_membership(&torus(0.5)).unwrap();
        assert!(r.member);
        assert!((r.max_rho_hat - 1.0 / 3f64.sqrt()).abs() < 1e-12);
        assert!(!tstar_membership(&torus(1.0)).unwrap().member);
        let b = tstar_membership(&torus(3f64.sqrt() / 2.0)).unwrap();
        assert!(!b.member && (b.max_rho_hat - 1.0).abs() < 1e-12);
    }

    #[test]
    fn scaling() {
        let d = torus(0.7);
        assert_eq!(vertex_scale_decorated(&d, &[0.0]).unwrap(), d);
        let s = vertex_scale_decorated(&d, &[0.4]).unwrap();
        for l in &s.lambda {
            assert!((l - 0.7 * 0.4f64.exp()).abs() < 1e-15);
        }
        let m = doubled_polygon(Curvature::Euclidean, &[1.0, 1.0, 1.0]).unwrap();
        let s = vertex_scale_cone(&m, &[2.0 * 2f64.ln(), 0.0, 0.0]).unwrap();
        for e in 0..s.tri.num_edges() {
            let want = if s.tri.edge_vertices(e).contains(&0) { 2.0 } else { 1.0 };
            assert!((s.lengths[e] - want).abs() < 1e-12);
        }
    }

    #[test]
    fn fiber() {
        let d = DecoratedMetric::new(one_vertex_torus(), vec![0.8, 1.1, 1.4]).unwrap();
        let s = vertex_scale_decorated(&d, &[0.3]).unwrap();
        let u = same_fiber_test(&d, &s).unwrap().unwrap();
        assert!((u[0] - 0.3).abs() < 1e-12);
        let mut p = s.clone();
        p.lambda[1] *= 1.01;
        assert_eq!(same_fiber_test(&d, &p).unwrap(), None);
    }

    #[test]
    fn conformality() {
        let sq = ConeMetric::new(one_vertex_torus(), Curvature::Euclidean, vec![1.0, 1.0, 2f64.sqrt()]).unwrap();
        let rect = ConeMetric::new(one_vertex_torus(), Curvature::Euclidean, vec![2.0, 1.0, 5f64.sqrt()]).unwrap();
        assert!(discretely_conformal_test(&sq, &sq.scaled(3.0)).unwrap());
        assert!(!discretely_conformal_test(&sq, &rect).unwrap());
    }

    #[test]
    fn doubled_examples() {
        let m = doubled_polygon(Curvature::Euclidean, &[1.0; 3]).unwrap();
        for k in m.singular_curvature().unwrap() {
            assert!((k - 4.0 * PI / 3.0).abs() < 1e-12);
        }
        let a = 1.528570919480998;
        let m = doubled_polygon(Curvature::Hyperbolic, &[a; 3]).unwrap();
        for k in m.singular_curvature().unwrap() {
            assert!((k - 1.5 * PI).abs() < 1e-10);
        }
        let h = PI / 2.0;
        let m = doubled_polygon(Curvature::Spherical, &[h; 3]).unwrap();
        for k in m.singular_curvature().unwrap() {
            assert!((k - PI).abs() < 1e-10);
        }
        assert!(m.gauss_bonnet_residual().unwrap().abs() < 1e-9);
        assert!(matches!(
            doubled_polygon(Curvature::Euclidean, &[1.0, 1.0, 3.0]),
            Err(Error::InvalidPolygon(_))
        ));
    }

    #[test]
    fn cyclic_polygons() {
        // Unit square: diagonal sqrt 2, all cone angles pi.
        let m = doubled_polygon(Curvature::Euclidean, &[1.0; 4]).unwrap();
        for k in m.singular_curvature().unwrap() {
            assert!((k - PI).abs() < 1e-10);
        }
        // Center outside the polygon.
        let m = doubled_polygon(Curvature::Euclidean, &[1.0, 1.0, 1.0, 2.5]).unwrap();
        assert!(m.gauss_bonnet_residual().unwrap().abs() < 1e-9);
        let m = doubled_polygon(Curvature::Hyperbolic, &[1.0, 1.2, 0.9, 1.1, 1.3]).unwrap();
        assert!(m.gauss_bonnet_residual().unwrap().abs() < 1e-9);
        let m = doubled_polygon(Curvature::Spherical, &[0.5, 0.6, 0.7, 0.4]).unwrap();
        assert!(m.gauss_bonnet_residual().unwrap().abs() < 1e-9);
    }
}
