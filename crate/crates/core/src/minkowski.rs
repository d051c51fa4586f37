//! Minkowski space R^{2,1} with product `x1*y1 + x2*y2 - x3*y3`.
//!
//! Light points (nonzero vectors on the future light cone) are the lifts of
//! decorated ideal vertices. Everything here is a closed-form primitive: lambda
//! lengths, the three segment lengths, lifts of triangles, elliptic plane
//! sections and the convexity test used for Delaunay edges.

use nalgebra::{Matrix3, Vector3};

use crate::error::{Error, Result};

pub type MinkVec = Vector3<f64>;

/// Relative tolerance for light-cone membership.
pub const EPS_CONE: f64 = 1e-9;
/// Half-width of the Flat band in the Delaunay lift test.
pub const EPS_DEL: f64 = 1e-9;

/// Sign of the curvature of a constant-curvature geometry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Curvature {
    Hyperbolic,
    Euclidean,
    Spherical,
}

impl Curvature {
    pub fn sign(self) -> i8 {
        match self {
            Curvature::Hyperbolic => -1,
            Curvature::Euclidean => 0,
            Curvature::Spherical => 1,
        }
    }

    pub fn from_sign(k: i64) -> Result<Self> {
        match k {
            -1 => Ok(Curvature::Hyperbolic),
            0 => Ok(Curvature::Euclidean),
            1 => Ok(Curvature::Spherical),
            _ => Err(Error::Domain(format!("curvature sign must be -1, 0 or 1, got {k}"))),
        }
    }

    pub fn all() -> [Curvature; 3] {
        [Curvature::Hyperbolic, Curvature::Euclidean, Curvature::Spherical]
    }
}

/// Diagonal Minkowski Gram matrix diag(1, 1, -1).
pub fn eta() -> Matrix3<f64> {
    Matrix3::from_diagonal(&Vector3::new(1.0, 1.0, -1.0))
}

pub fn mdot(x: &MinkVec, y: &MinkVec) -> f64 {
    x[0] * y[0] + x[1] * y[1] - x[2] * y[2]
}

/// A nonzero point of the future light cone.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LightPoint(MinkVec);

impl LightPoint {
    pub fn new(v: MinkVec) -> Result<Self> {
        if !(v[2] > 0.0) || !v.iter().all(|c| c.is_finite()) {
            return Err(Error::Domain(format!("not a future light point: {v:?}")));
        }
        if mdot(&v, &v).abs() > EPS_CONE * v[2] * v[2] {
            return Err(Error::Domain(format!("point {v:?} is off the light cone")));
        }
        Ok(LightPoint(v))
    }

    /// Wraps `v` without checking; callers guarantee it lies on the cone.
    pub fn new_unchecked(v: MinkVec) -> Self {
        LightPoint(v)
    }

    pub fn from_coords(x1: f64, x2: f64, x3: f64) -> Result<Self> {
        Self::new(MinkVec::new(x1, x2, x3))
    }

    pub fn v(&self) -> &MinkVec {
        &self.0
    }

    pub fn transform(&self, a: &Matrix3<f64>) -> LightPoint {
        LightPoint(a * self.0)
    }
}

/// `sqrt(-x.y/2)` for two light points, the lambda length of the segment.
pub fn lambda_of(x: &LightPoint, y: &LightPoint) -> Result<f64> {
    lambda_of_vecs(x.v(), y.v())
}

pub(crate) fn lambda_of_vecs(x: &MinkVec, y: &MinkVec) -> Result<f64> {
    let t = -mdot(x, y);
    if !(t > 1e-13 * x[2].abs() * y[2].abs()) {
        return Err(Error::DegeneratePair);
    }
    Ok((t / 2.0).sqrt())
}

/// Lengths of a light-cone segment under the three ambient metrics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SegmentLengths {
    pub hyperbolic: f64,
    pub euclidean: f64,
    /// Present only when lambda < 1.
    pub spherical: Option<f64>,
}

pub fn segment_lengths(x: &LightPoint, y: &LightPoint) -> Result<SegmentLengths> {
    let lam = lambda_of(x, y)?;
    Ok(SegmentLengths {
        hyperbolic: 2.0 * lam.asinh(),
        euclidean: 2.0 * lam,
        spherical: if lam < 1.0 { Some(2.0 * lam.asin()) } else { None },
    })
}

/// Length of a segment with lambda length `lam` in curvature `k`.
pub fn lambda_to_length(lam: f64, k: Curvature) -> Result<f64> {
    match k {
        Curvature::Hyperbolic => Ok(2.0 * lam.asinh()),
        Curvature::Euclidean => Ok(2.0 * lam),
        Curvature::Spherical => {
            if lam < 1.0 {
                Ok(2.0 * lam.asin())
            } else {
                Err(Error::SphericalUndefined(lam))
            }
        }
    }
}

/// Inverse of [`lambda_to_length`].
pub fn length_to_lambda(len: f64, k: Curvature) -> f64 {
    match k {
        Curvature::Hyperbolic => (len / 2.0).sinh(),
        Curvature::Euclidean => len / 2.0,
        Curvature::Spherical => (len / 2.0).sin(),
    }
}

/// The pair `((h,0,h), (-h,0,h))` with `h = sqrt(t/2)`, whose product is `-t`.
pub fn standard_pair(t: f64) -> Result<(LightPoint, LightPoint)> {
    if !(t > 0.0) {
        return Err(Error::Domain(format!("standard pair needs t > 0, got {t}")));
    }
    let h = (t / 2.0).sqrt();
    Ok((
        LightPoint(MinkVec::new(h, 0.0, h)),
        LightPoint(MinkVec::new(-h, 0.0, h)),
    ))
}

/// Inverse of a matrix preserving the Minkowski product: `eta * A^T * eta`.
pub fn lorentz_inverse(a: &Matrix3<f64>) -> Matrix3<f64> {
    let e = eta();
    e * a.transpose() * e
}

/// Largest entry of `A^T eta A - eta`, zero for Lorentz matrices.
pub fn lorentz_defect(a: &Matrix3<f64>) -> f64 {
    let e = eta();
    (a.transpose() * e * a - e).abs().max()
}

/// The unique orientation- and time-preserving Lorentz matrix taking `(x, y)`
/// to the standard pair with the same product.
pub fn normalize_pair(x: &LightPoint, y: &LightPoint) -> Result<Matrix3<f64>> {
    normalize_pair_vecs(x.v(), y.v())
}

pub(crate) fn normalize_pair_vecs(x: &MinkVec, y: &MinkVec) -> Result<Matrix3<f64>> {
    let t = -mdot(x, y);
    if !(t > 1e-13 * x[2].abs() * y[2].abs()) {
        return Err(Error::DegeneratePair);
    }
    let s = (2.0 * t).sqrt();
    let u3 = (x + y) / s;
    let u1 = (x - y) / s;
    // eta * (u1 x u3) is Minkowski-orthogonal to both.
    let c = u1.cross(&u3);
    let mut u2 = MinkVec::new(c[0], c[1], -c[2]);
    let n2 = mdot(&u2, &u2);
    if !(n2 > 0.0) {
        return Err(Error::DegeneratePair);
    }
    u2 /= n2.sqrt();
    let mut m = Matrix3::from_columns(&[u1, u2, u3]);
    if m.determinant() < 0.0 {
        m.set_column(1, &(-u2));
    }
    Ok(lorentz_inverse(&m))
}

/// Lift of a triangle with lambda lengths `l12, l13, l23` to the light cone.
///
/// The first two points are the standard pair for `l12`, the third has
/// positive second coordinate.
pub fn lift_triangle(l12: f64, l13: f64, l23: f64) -> [MinkVec; 3] {
    let h = l12;
    let (a2, b2) = (l13 * l13, l23 * l23);
    [
        MinkVec::new(h, 0.0, h),
        MinkVec::new(-h, 0.0, h),
        MinkVec::new((b2 - a2) / h, 2.0 * l13 * l23 / h, (a2 + b2) / h),
    ]
}

/// Light point `w` with lambda lengths `l_xw` to `x` and `l_yw` to `y`, on
/// the side of the plane through the origin, `x` and `y` opposite to `z`.
pub fn fourth_point(x: &MinkVec, y: &MinkVec, z: &MinkVec, l_xw: f64, l_yw: f64) -> Result<MinkVec> {
    let a = normalize_pair_vecs(x, y)?;
    let h = (a * x)[0];
    let zs = a * z;
    let (p2, q2) = (l_xw * l_xw, l_yw * l_yw);
    let mut q = 2.0 * l_xw * l_yw / h;
    if zs[1] > 0.0 {
        q = -q;
    }
    let w = MinkVec::new((q2 - p2) / h, q, (p2 + q2) / h);
    Ok(lorentz_inverse(&a) * w)
}

/// Solution `v` of `x.v = y.v = z.v = -1`.
pub fn plane_normal(x: &MinkVec, y: &MinkVec, z: &MinkVec) -> Result<MinkVec> {
    let m = Matrix3::new(
        x[0], x[1], -x[2], //
        y[0], y[1], -y[2], //
        z[0], z[1], -z[2],
    );
    let rhs = MinkVec::new(-1.0, -1.0, -1.0);
    let v = m.lu().solve(&rhs).ok_or(Error::NotElliptic)?;
    if !v.iter().all(|c| c.is_finite()) {
        return Err(Error::NotElliptic);
    }
    Ok(v)
}

/// Affine plane meeting the light cone in an ellipse.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticPlane {
    /// Normal solving `p.v = -1` for points `p` of the plane.
    pub v: MinkVec,
    /// On-plane center, future timelike.
    pub w: MinkVec,
    /// `sqrt(-w.w)`.
    pub rho_hat: f64,
}

impl EllipticPlane {
    pub fn circumradius(&self, k: Curvature) -> Result<f64> {
        match k {
            Curvature::Euclidean => Ok(self.rho_hat),
            Curvature::Hyperbolic => Ok(self.rho_hat.asinh()),
            Curvature::Spherical => {
                if self.rho_hat < 1.0 {
                    Ok(self.rho_hat.asin())
                } else {
                    Err(Error::NotConvexSpherical)
                }
            }
        }
    }
}

pub fn plane_center(x: &LightPoint, y: &LightPoint, z: &LightPoint) -> Result<EllipticPlane> {
    plane_center_vecs(x.v(), y.v(), z.v())
}

pub(crate) fn plane_center_vecs(x: &MinkVec, y: &MinkVec, z: &MinkVec) -> Result<EllipticPlane> {
    let v = plane_normal(x, y, z)?;
    let vv = mdot(&v, &v);
    if !(vv < -1e-12 * v[2] * v[2]) || !(v[2] > 0.0) {
        return Err(Error::NotElliptic);
    }
    Ok(EllipticPlane {
        v,
        w: -v / vv,
        rho_hat: 1.0 / (-vv).sqrt(),
    })
}

/// Classification of an interior edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EdgeStatus {
    Strict,
    Flat,
    Violated,
}

pub fn classify_lift_value(wv: f64) -> EdgeStatus {
    if wv < -1.0 - EPS_DEL {
        EdgeStatus::Strict
    } else if wv <= -1.0 + EPS_DEL {
        EdgeStatus::Flat
    } else {
        EdgeStatus::Violated
    }
}

/// `w.v` for the plane `v` through `x, y, z`; no ellipticity requirement.
///
/// The origin always lies on the side `p.v > -1`, so `w.v < -1` means the
/// lifted quad is convex as seen from the origin whatever the plane type.
pub fn lift_test_value(x: &MinkVec, y: &MinkVec, z: &MinkVec, w: &MinkVec) -> Result<f64> {
    let v = plane_normal(x, y, z)?;
    Ok(mdot(w, &v))
}

/// Delaunay test for triangles `(x, y, z)` and `(x, z, w)` sharing `xz`.
pub fn delaunay_lift_test(x: &LightPoint, y: &LightPoint, z: &LightPoint, w: &LightPoint) -> Result<EdgeStatus> {
    let plane = plane_center(x, y, z)?;
    Ok(classify_lift_value(mdot(w.v(), &plane.v)))
}

/// Ambient metric `g_K` at `x` in the coordinates of R^{2,1}.
pub fn ambient_metric(x: &MinkVec, k: Curvature) -> Result<Matrix3<f64>> {
    let ks = k.sign() as f64;
    let q = mdot(x, x);
    let denom = 1.0 + ks * q;
    if !(denom > 0.0) {
        return Err(Error::OutsideChart(k.sign()));
    }
    let e = eta();
    let ex = e * x;
    Ok((e * denom - ex * ex.transpose() * ks) / (denom * denom))
}

/// Composite-midpoint length of the affine segment `[x, y]` under `g_K`.
pub fn numeric_segment_length(x: &LightPoint, y: &LightPoint, k: Curvature, steps: usize) -> Result<f64> {
    if steps == 0 {
        return Err(Error::Domain("steps must be positive".into()));
    }
    if k == Curvature::Spherical && lambda_of(x, y)? >= 1.0 {
        return Err(Error::OutsideChart(1));
    }
    let d = y.v() - x.v();
    let dt = 1.0 / steps as f64;
    let mut sum = 0.0;
    for i in 0..steps {
        let p = x.v() + d * ((i as f64 + 0.5) * dt);
        let g = ambient_metric(&p, k)?;
        sum += (d.dot(&(g * d))).max(0.0).sqrt();
    }
    Ok(sum * dt)
}

/// Length of the arc `R_k` in the plane section through the standard pair at
/// scale `h`: `2h arccos(-k) / sqrt(1 - k^2)`.
pub fn arc_length_rk(h: f64, k: f64) -> Result<f64> {
    if !(k.abs() < 1.0) || !(h > 0.0) {
        return Err(Error::Domain(format!("arc length needs h > 0, |k| < 1 (h={h}, k={k})")));
    }
    Ok(2.0 * h * (-k).acos() / (1.0 - k * k).sqrt())
}

/// `(x1/x3, x2/x3, 1/x3)`, exchanging the light-cone and cylinder charts.
pub fn chart_involution(x: &MinkVec) -> Result<MinkVec> {
    if x[2] == 0.0 {
        return Err(Error::Domain("chart involution undefined at x3 = 0".into()));
    }
    Ok(MinkVec::new(x[0] / x[2], x[1] / x[2], 1.0 / x[2]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn lp(a: f64, b: f64, c: f64) -> LightPoint {
        LightPoint::from_coords(a, b, c).unwrap()
    }

    #[test]
    fn products() {
        let x = MinkVec::new(1.0, 0.0, 1.0);
        let y = MinkVec::new(-1.0, 0.0, 1.0);
        assert_eq!(mdot(&x, &x), 0.0);
        assert_eq!(mdot(&x, &y), -2.0);
        assert_eq!(mdot(&MinkVec::z(), &MinkVec::z()), -1.0);
    }

    #[test]
    fn lambda_examples() {
        assert_eq!(lambda_of(&lp(1.0, 0.0, 1.0), &lp(-1.0, 0.0, 1.0)).unwrap(), 1.0);
        assert!((lambda_of(&lp(0.5, 0.0, 0.5), &lp(-0.5, 0.0, 0.5)).unwrap() - 0.5).abs() < 1e-15);
        let x = lp(0.6, 0.8, 1.0);
        assert_eq!(lambda_of(&x, &x), Err(Error::DegeneratePair));
        let far = lp(6.0, 8.0, 10.0);
        assert_eq!(lambda_of(&x, &far), Err(Error::DegeneratePair));
    }

    #[test]
    fn rejects_off_cone() {
        assert!(LightPoint::from_coords(1.0, 0.0, 2.0).is_err());
        assert!(LightPoint::from_coords(1.0, 0.0, -1.0).is_err());
    }

    #[test]
    fn lengths_table() {
        let s = segment_lengths(&lp(0.5, 0.0, 0.5), &lp(-0.5, 0.0, 0.5)).unwrap();
        assert!((s.hyperbolic - 0.962424).abs() < 1e-6);
        assert!((s.euclidean - 1.0).abs() < 1e-15);
        assert!((s.spherical.unwrap() - PI / 3.0).abs() < 1e-14);
        let s = segment_lengths(&lp(1.0, 0.0, 1.0), &lp(-1.0, 0.0, 1.0)).unwrap();
        assert!((s.hyperbolic - 1.762747).abs() < 1e-6);
        assert_eq!(s.euclidean, 2.0);
        assert_eq!(s.spherical, None);
        assert_eq!(
            lambda_to_length(1.0, Curvature::Spherical),
            Err(Error::SphericalUndefined(1.0))
        );
        let t = 1e-6;
        let s = segment_lengths(&lp(t, 0.0, t), &lp(-t, 0.0, t)).unwrap();
        assert!((s.hyperbolic / s.euclidean - 1.0).abs() < 1e-10);
        assert!((s.spherical.unwrap() / s.euclidean - 1.0).abs() < 1e-10);
    }

    #[test]
    fn dictionary_inverts() {
        for k in Curvature::all() {
            for lam in [0.1, 0.5, 0.9] {
                let l = lambda_to_length(lam, k).unwrap();
                assert!((length_to_lambda(l, k) - lam).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn standard_pair_and_normalization() {
        let (x, y) = standard_pair(2.0).unwrap();
        assert_eq!(*x.v(), MinkVec::new(1.0, 0.0, 1.0));
        assert_eq!(*y.v(), MinkVec::new(-1.0, 0.0, 1.0));
        let a = normalize_pair(&x, &y).unwrap();
        assert!((a - Matrix3::identity()).abs().max() < 1e-15);

        let x = lp(3.0, 4.0, 5.0);
        let y = lp(-0.28, 0.96, 1.0);
        let t = -mdot(x.v(), y.v());
        let a = normalize_pair(&x, &y).unwrap();
        let (sx, sy) = standard_pair(t).unwrap();
        assert!((a * x.v() - sx.v()).norm() < 1e-12);
        assert!((a * y.v() - sy.v()).norm() < 1e-12);
        assert!(lorentz_defect(&a) < 1e-12);
        assert!((a.determinant() - 1.0).abs() < 1e-12);
        assert!(a[(2, 2)] > 0.0);
    }

    #[test]
    fn lifts() {
        let [x, y, z] = lift_triangle(1.0, 1.0, 1.0);
        assert_eq!(x, MinkVec::new(1.0, 0.0, 1.0));
        assert_eq!(y, MinkVec::new(-1.0, 0.0, 1.0));
        assert_eq!(z, MinkVec::new(0.0, 2.0, 2.0));
        let r = 0.5f64.sqrt();
        let [_, _, z] = lift_triangle(r, r, r);
        assert!((z - MinkVec::new(0.0, 2f64.sqrt(), 2f64.sqrt())).norm() < 1e-15);
        let [x, y, z] = lift_triangle(0.7, 1.9, 0.4);
        assert!((lambda_of_vecs(&x, &y).unwrap() - 0.7).abs() < 1e-12);
        assert!((lambda_of_vecs(&x, &z).unwrap() - 1.9).abs() < 1e-12);
        assert!((lambda_of_vecs(&y, &z).unwrap() - 0.4).abs() < 1e-12);
    }

    #[test]
    fn fourth_point_is_mirror_for_symmetric_data() {
        let [x, y, z] = lift_triangle(1.0, 1.0, 1.0);
        let w = fourth_point(&x, &y, &z, 1.0, 1.0).unwrap();
        assert!((w - MinkVec::new(0.0, -2.0, 2.0)).norm() < 1e-12);
    }

    #[test]
    fn plane_centers() {
        let p = plane_center(&lp(1.0, 0.0, 1.0), &lp(0.0, 1.0, 1.0), &lp(-1.0, 0.0, 1.0)).unwrap();
        assert!((p.w - MinkVec::new(0.0, 0.0, 1.0)).norm() < 1e-14);
        assert!((p.rho_hat - 1.0).abs() < 1e-14);

        let [x, y, z] = lift_triangle(1.0, 1.0, 1.0);
        let p = plane_center_vecs(&x, &y, &z).unwrap();
        assert!((p.v - MinkVec::new(0.0, 0.5, 1.0)).norm() < 1e-14);
        assert!((p.w - MinkVec::new(0.0, 2.0 / 3.0, 4.0 / 3.0)).norm() < 1e-14);
        assert!((p.rho_hat - 2.0 / 3f64.sqrt()).abs() < 1e-14);

        // Three rays in the plane x2 = 0 through the origin.
        let r = plane_center(&lp(1.0, 0.0, 1.0), &lp(2.0, 0.0, 2.0), &lp(-1.0, 0.0, 1.0));
        assert_eq!(r, Err(Error::NotElliptic));
    }

    #[test]
    fn lift_test_square() {
        let (a, b, c) = (lp(1.0, 0.0, 1.0), lp(0.0, 1.0, 1.0), lp(-1.0, 0.0, 1.0));
        let t = |w: LightPoint| delaunay_lift_test(&a, &b, &c, &w).unwrap();
        assert_eq!(t(lp(0.0, -1.0, 1.0)), EdgeStatus::Flat);
        assert_eq!(t(lp(0.0, -2.0, 2.0)), EdgeStatus::Strict);
        assert_eq!(t(lp(0.0, -0.5, 0.5)), EdgeStatus::Violated);
    }

    #[test]
    fn metrics() {
        for k in Curvature::all() {
            assert_eq!(ambient_metric(&MinkVec::zeros(), k).unwrap(), eta());
        }
        let x = MinkVec::new(0.3, -0.2, 0.5);
        let (x1, x2, x3) = (x[0], x[1], x[2]);
        let q = mdot(&x, &x);
        let g1 = ambient_metric(&x, Curvature::Spherical).unwrap();
        let want1 = Matrix3::new(
            1.0 + x2 * x2 - x3 * x3,
            -x1 * x2,
            x1 * x3,
            -x1 * x2,
            1.0 + x1 * x1 - x3 * x3,
            x2 * x3,
            x1 * x3,
            x2 * x3,
            -1.0 - x1 * x1 - x2 * x2,
        ) / ((1.0 + q) * (1.0 + q));
        assert!((g1 - want1).abs().max() < 1e-15);
        let gm = ambient_metric(&x, Curvature::Hyperbolic).unwrap();
        let wantm = Matrix3::new(
            1.0 - x2 * x2 + x3 * x3,
            x1 * x2,
            -x1 * x3,
            x1 * x2,
            1.0 - x1 * x1 + x3 * x3,
            -x2 * x3,
            -x1 * x3,
            -x2 * x3,
            -1.0 + x1 * x1 + x2 * x2,
        ) / ((1.0 - q) * (1.0 - q));
        assert!((gm - wantm).abs().max() < 1e-15);
        assert!((gm - gm.transpose()).abs().max() == 0.0);
        assert_eq!(
            ambient_metric(&MinkVec::new(0.0, 0.0, 1.5), Curvature::Spherical),
            Err(Error::OutsideChart(1))
        );
        // Prefactor blow-up near the spherical chart boundary.
        let near = ambient_metric(&MinkVec::new(0.0, 0.0, 1.0 - 1e-4), Curvature::Spherical).unwrap();
        assert!(near[(2, 2)] < -1e7);
    }

    #[test]
    fn quadrature() {
        let (x, y) = (lp(0.5, 0.0, 0.5), lp(-0.5, 0.0, 0.5));
        assert_eq!(numeric_segment_length(&x, &y, Curvature::Euclidean, 1).unwrap(), 1.0);
        let s = numeric_segment_length(&x, &y, Curvature::Spherical, 10_000).unwrap();
        assert!((s - PI / 3.0).abs() < 1e-6);
        let h = numeric_segment_length(&x, &y, Curvature::Hyperbolic, 10_000).unwrap();
        assert!((h - 0.962424).abs() < 1e-6);
        let (x, y) = (lp(1.0, 0.0, 1.0), lp(-1.0, 0.0, 1.0));
        assert_eq!(
            numeric_segment_length(&x, &y, Curvature::Spherical, 10),
            Err(Error::OutsideChart(1))
        );
    }

    #[test]
    fn arcs() {
        assert!((arc_length_rk(1.0, 0.0).unwrap() - PI).abs() < 1e-15);
        let want = 2.0 * (-0.5f64).acos() / 0.75f64.sqrt();
        assert!((arc_length_rk(1.0, 0.5).unwrap() - want).abs() < 1e-14);
        assert!((want - 4.836798).abs() < 1e-6);
        assert!(arc_length_rk(1.0, 0.1).unwrap() < arc_length_rk(1.0, 0.2).unwrap());
        assert!(arc_length_rk(1.0, 1.0).is_err());
    }

    #[test]
    fn involution() {
        assert_eq!(chart_involution(&MinkVec::z()).unwrap(), MinkVec::z());
        assert_eq!(
            chart_involution(&MinkVec::new(1.0, 0.0, 2.0)).unwrap(),
            MinkVec::new(0.5, 0.0, 0.5)
        );
        assert!(chart_involution(&MinkVec::new(1.0, 0.0, 0.0)).is_err());
    }
}
