//! Convex hulls of finite orbits, the boundary faces facing the origin and
//! their quotient by the holonomy group, and OBJ export.

use std::collections::HashMap;
use std::fmt::Write as _;

use nalgebra::Vector3;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::holonomy::{develop, orbit, puncture_loop, Orbit};
use crate::minkowski::{
    chart_involution, classify_lift_value, lambda_of_vecs, lorentz_inverse, mdot, plane_center_vecs, plane_normal,
    EdgeStatus, MinkVec,
};
use crate::surface::{delaunay_decomposition, make_delaunay, DecoratedMetric, UnionFind};

/// A convex polygon on the hull, vertices counter-clockwise seen from
/// outside.
#[derive(Debug, Clone, PartialEq)]
pub struct HullFace {
    pub vertices: Vec<usize>,
    /// Outward unit normal.
    pub normal: Vector3<f64>,
    pub offset: f64,
}

/// Tolerance for merging coplanar hull triangles, relative to the point
/// cloud's extent.
pub const MERGE_TOL: f64 = 1e-9;

#[derive(Debug, Clone)]
struct Tri {
    v: [usize; 3],
    n: Vector3<f64>,
    d: f64,
    outside: Vec<usize>,
    alive: bool,
}

impl Tri {
    fn new(pts: &[Vector3<f64>], v: [usize; 3]) -> Tri {
        let n = (pts[v[1]] - pts[v[0]]).cross(&(pts[v[2]] - pts[v[0]]));
        let n = n / n.norm().max(f64::MIN_POSITIVE);
        Tri {
            v,
            n,
            d: n.dot(&pts[v[0]]),
            outside: Vec::new(),
            alive: true,
        }
    }

    fn dist(&self, p: &Vector3<f64>) -> f64 {
        self.n.dot(p) - self.d
    }
}

/// Triangulated hull: triangles with outward orientation.
pub(crate) struct TriHull {
    pub tris: Vec<[usize; 3]>,
    pub normals: Vec<Vector3<f64>>,
    pub offsets: Vec<f64>,
    pub scale: f64,
}

fn extent(pts: &[Vector3<f64>]) -> f64 {
    pts.iter().map(|p| p.amax()).fold(0.0, f64::max).max(f64::MIN_POSITIVE)
}

/// Quickhull. Points within `1e-12` of the extent of a face plane are not
/// considered outside it.
pub(crate) fn quickhull(pts: &[Vector3<f64>]) -> Result<TriHull> {
    if pts.len() < 4 {
        return Err(Error::DegenerateInput(format!("{} points", pts.len())));
    }
    let scale = extent(pts);
    let eps = 1e-12 * scale;
    let degenerate = || Error::DegenerateInput("points are not affinely independent".into());
    let inconsistent = || Error::DegenerateInput("hull lost consistency on nearly coplanar points".into());

    // Initial simplex.
    let i0 = (0..pts.len()).min_by(|&a, &b| pts[a][0].total_cmp(&pts[b][0])).unwrap();
    let i1 = (0..pts.len())
        .max_by(|&a, &b| (pts[a] - pts[i0]).norm().total_cmp(&(pts[b] - pts[i0]).norm()))
        .unwrap();
    let dir = pts[i1] - pts[i0];
    if dir.norm() <= eps {
        return Err(degenerate());
    }
    let line_dist = |p: &Vector3<f64>| (p - pts[i0]).cross(&dir).norm() / dir.norm();
    let i2 = (0..pts.len())
        .max_by(|&a, &b| line_dist(&pts[a]).total_cmp(&line_dist(&pts[b])))
        .unwrap();
    if line_dist(&pts[i2]) <= eps {
        return Err(degenerate());
    }
    let base = Tri::new(pts, [i0, i1, i2]);
    let i3 = (0..pts.len())
        .max_by(|&a, &b| base.dist(&pts[a]).abs().total_cmp(&base.dist(&pts[b]).abs()))
        .unwrap();
    if base.dist(&pts[i3]).abs() <= eps * 10.0 {
        return Err(degenerate());
    }
    let (i1, i2) = if base.dist(&pts[i3]) > 0.0 { (i2, i1) } else { (i1, i2) };

    let mut faces: Vec<Tri> = vec![
        Tri::new(pts, [i0, i1, i2]),
        Tri::new(pts, [i0, i3, i1]),
        Tri::new(pts, [i1, i3, i2]),
        Tri::new(pts, [i2, i3, i0]),
    ];
    let mut edges: HashMap<(usize, usize), usize> = HashMap::new();
    for (fi, f) in faces.iter().enumerate() {
        for k in 0..3 {
            edges.insert((f.v[k], f.v[(k + 1) % 3]), fi);
        }
    }
    let assign = |faces: &mut Vec<Tri>, cand: &[usize], p: usize| {
        let mut best = None;
        let mut best_d = eps;
        for &fi in cand {
            let d = faces[fi].dist(&pts[p]);
            if d > best_d {
                best_d = d;
                best = Some(fi);
            }
        }
        if let Some(fi) = best {
            faces[fi].outside.push(p);
        }
    };
    for p in 0..pts.len() {
        if [i0, i1, i2, i3].contains(&p) {
            continue;
        }
        assign(&mut faces, &[0, 1, 2, 3], p);
    }

    let mut stack: Vec<usize> = (0..4).collect();
    while let Some(fi) = stack.pop() {
        if !faces[fi].alive || faces[fi].outside.is_empty() {
            continue;
        }
        let f = &faces[fi];
        let apex = *f
            .outside
            .iter()
            .max_by(|&&a, &&b| f.dist(&pts[a]).total_cmp(&f.dist(&pts[b])))
            .unwrap();
        let ap = pts[apex];

        let mut visible = vec![fi];
        let mut seen = HashMap::from([(fi, true)]);
        let mut k = 0;
        while k < visible.len() {
            let g = visible[k];
            k += 1;
            for j in 0..3 {
                let (a, b) = (faces[g].v[j], faces[g].v[(j + 1) % 3]);
                let nb = *edges.get(&(b, a)).ok_or_else(inconsistent)?;
                if seen.contains_key(&nb) {
                    continue;
                }
                let vis = faces[nb].dist(&ap) > eps;
                seen.insert(nb, vis);
                if vis {
                    visible.push(nb);
                }
            }
        }
        let mut horizon = Vec::new();
        for &g in &visible {
            for j in 0..3 {
                let (a, b) = (faces[g].v[j], faces[g].v[(j + 1) % 3]);
                let nb = *edges.get(&(b, a)).ok_or_else(inconsistent)?;
                if !seen[&nb] {
                    horizon.push((a, b));
                }
            }
        }
        let mut orphans = Vec::new();
        for &g in &visible {
            faces[g].alive = false;
            orphans.append(&mut faces[g].outside);
            for j in 0..3 {
                edges.remove(&(faces[g].v[j], faces[g].v[(j + 1) % 3]));
            }
        }
        let mut fresh = Vec::with_capacity(horizon.len());
        for (a, b) in horizon {
            let t = Tri::new(pts, [a, b, apex]);
            let id = faces.len();
            for j in 0..3 {
                edges.insert((t.v[j], t.v[(j + 1) % 3]), id);
            }
            faces.push(t);
            fresh.push(id);
        }
        for p in orphans {
            if p != apex {
                assign(&mut faces, &fresh, p);
            }
        }
        stack.extend(fresh);
    }
    let live: Vec<&Tri> = faces.iter().filter(|f| f.alive).collect();
    for f in &live {
        for j in 0..3 {
            let twin = edges.get(&(f.v[(j + 1) % 3], f.v[j]));
            if !twin.is_some_and(|&g| faces[g].alive) {
                return Err(inconsistent());
            }
        }
    }
    Ok(TriHull {
        tris: live.iter().map(|f| f.v).collect(),
        normals: live.iter().map(|f| f.n).collect(),
        offsets: live.iter().map(|f| f.d).collect(),
        scale,
    })
}

impl TriHull {
    /// Neighbouring triangle across each side `(v[j], v[j+1])`.
    pub fn neighbors(&self) -> Vec<[usize; 3]> {
        let mut m = HashMap::new();
        for (i, t) in self.tris.iter().enumerate() {
            for j in 0..3 {
                m.insert((t[j], t[(j + 1) % 3]), i);
            }
        }
        self.tris
            .iter()
            .map(|t| std::array::from_fn(|j| m[&(t[(j + 1) % 3], t[j])]))
            .collect()
    }

    /// Joins the triangles in `keep` across sides accepted by `merge`, and
    /// returns each group's boundary as a vertex cycle.
    pub fn merge_groups(
        &self,
        keep: &[bool],
        mut merge: impl FnMut(usize, usize, usize) -> bool,
    ) -> Vec<(Vec<usize>, Vec<usize>)> {
        let nb = self.neighbors();
        let nt = self.tris.len();
        let mut uf = UnionFind::new(nt);
        for i in 0..nt {
            for j in 0..3 {
                let o = nb[i][j];
                if i < o && keep[i] && keep[o] && merge(i, o, j) {
                    uf.union(i, o);
                }
            }
        }
        let mut groups: HashMap<usize, Vec<usize>> = HashMap::new();
        for i in (0..nt).filter(|&i| keep[i]) {
            groups.entry(uf.find(i)).or_default().push(i);
        }
        let mut out: Vec<(Vec<usize>, Vec<usize>)> = groups
            .into_values()
            .map(|mut members| {
                members.sort_unstable();
                let root = uf.find(members[0]);
                let mut succ = HashMap::new();
                for &i in &members {
                    for j in 0..3 {
                        if uf.find(nb[i][j]) != root || !keep[nb[i][j]] {
                            succ.insert(self.tris[i][j], self.tris[i][(j + 1) % 3]);
                        }
                    }
                }
                let start = *succ.keys().min().unwrap();
                let mut cycle = vec![start];
                let mut v = succ[&start];
                while v != start && cycle.len() <= succ.len() {
                    cycle.push(v);
                    v = succ[&v];
                }
                (members, cycle)
            })
            .collect();
        out.sort_by_key(|g| g.0[0]);
        out
    }
}

/// Convex hull of `points` with coplanar neighbouring triangles merged at
/// tolerance [`MERGE_TOL`] relative to the extent of the cloud.
pub fn convex_hull_3d(points: &[Vector3<f64>]) -> Result<Vec<HullFace>> {
    let h = quickhull(points)?;
    let tol = MERGE_TOL * h.scale;
    let keep = vec![true; h.tris.len()];
    let groups = h.merge_groups(&keep, |i, o, j| {
        let t = h.tris[o];
        let shared = [h.tris[i][j], h.tris[i][(j + 1) % 3]];
        let apex = t.iter().find(|v| !shared.contains(v)).unwrap();
        (h.normals[i].dot(&points[*apex]) - h.offsets[i]).abs() <= tol
    });
    Ok(groups
        .into_iter()
        .map(|(members, vertices)| {
            let n = members
                .iter()
                .fold(Vector3::zeros(), |acc, &i| acc + h.normals[i])
                .normalize();
            HullFace {
                offset: n.dot(&points[vertices[0]]),
                normal: n,
                vertices,
            }
        })
        .collect())
}

/// A face of the boundary facing the origin, lifted to the light cone.
#[derive(Debug, Clone)]
pub struct LiftedFace {
    /// Orbit indices of the vertices in cyclic order.
    pub orbit_index: Vec<usize>,
    pub vertices: Vec<MinkVec>,
    /// Vertex label of each vertex.
    pub labels: Vec<usize>,
    /// Plane `x.v = -1` through the face.
    pub v: MinkVec,
    pub rho_hat: f64,
}

/// A face of the quotient decomposition: vertex labels in cyclic order and
/// the lambda-length of the side leaving each vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct QuotientFace {
    pub labels: Vec<usize>,
    pub lambdas: Vec<f64>,
    /// Index into [`HullResult::faces`] of a representative.
    pub representative: usize,
}

#[derive(Debug, Clone)]
pub struct HullResult {
    /// Validated faces incident to a seed point.
    pub faces: Vec<LiftedFace>,
    pub quotient: Vec<QuotientFace>,
    /// Seed-incident elliptic faces that failed validation.
    pub unvalidated: Vec<LiftedFace>,
    pub orbit_size: usize,
}

/// Relative slack of the support check against the deeper orbit.
pub const SUPPORT_TOL: f64 = 1e-9;

/// Link coordinate at a cusp: `t(q) = (q.n)/(q.s)` with `n` a unit
/// spacelike vector orthogonal to `s`. A parabolic fixing `s` shifts it by a
/// constant.
struct Link {
    s: MinkVec,
    n: MinkVec,
    period: f64,
}

impl Link {
    fn new(s: MinkVec, parabolic: &nalgebra::Matrix3<f64>) -> Link {
        let n = MinkVec::new(-s[1], s[0], 0.0) / s[2];
        let mut l = Link { s, n, period: 0.0 };
        let q = MinkVec::new(0.0, 0.0, 1.0);
        l.period = (l.t(&q) - l.t(&(parabolic * q))).abs();
        l
    }

    fn t(&self, q: &MinkVec) -> f64 {
        mdot(q, &self.n) / mdot(q, &self.s)
    }
}

/// Faces of the boundary of the orbit hull facing the origin, computed from
/// the orbit of words of length `depth`, validated against words of length
/// `depth + 2`, and identified modulo the holonomy group.
pub fn epstein_penner_faces(d: &DecoratedMetric, depth: usize) -> Result<HullResult> {
    if depth < 3 {
        return Err(Error::Domain(format!("hull depth must be at least 3, got {depth}")));
    }
    let dev = develop(d)?;
    let gens = dev.generators();
    let seed_corners = dev.seeds();
    let seeds: Vec<MinkVec> = seed_corners.iter().map(|s| s.1).collect();
    let orb = orbit(&seeds, &gens, depth + 2);
    let inner: Vec<usize> = (0..orb.points.len()).filter(|&i| orb.depth[i] <= depth).collect();
    let chart: Vec<Vector3<f64>> = inner
        .iter()
        .map(|&i| chart_involution(&orb.points[i]))
        .collect::<Result<_>>()?;
    let h = quickhull(&chart)?;
    let mink = |local: usize| orb.points[inner[local]];

    // Upper triangles carry the faces facing the origin.
    let planes: Vec<Option<MinkVec>> = h
        .tris
        .iter()
        .zip(&h.normals)
        .map(|(t, n)| {
            if n[2] <= 0.0 {
                return None;
            }
            plane_normal(&mink(t[0]), &mink(t[1]), &mink(t[2])).ok()
        })
        .collect();
    let keep: Vec<bool> = planes.iter().map(Option::is_some).collect();
    let groups = h.merge_groups(&keep, |i, o, j| {
        let shared = [h.tris[i][j], h.tris[i][(j + 1) % 3]];
        let apex = *h.tris[o].iter().find(|v| !shared.contains(v)).unwrap();
        classify_lift_value(mdot(&mink(apex), &planes[i].unwrap())) == EdgeStatus::Flat
    });

    let label_of = |oi: usize| d.tri.vertex(seed_corners[orb.seed[oi]].0);
    let mut candidates = Vec::new();
    for (_, cycle) in groups {
        let oidx: Vec<usize> = cycle.iter().map(|&l| inner[l]).collect();
        if !oidx.iter().any(|&o| orb.depth[o] == 0) {
            continue;
        }
        let verts: Vec<MinkVec> = oidx.iter().map(|&o| orb.points[o]).collect();
        let Ok(plane) = plane_center_vecs(&verts[0], &verts[1], &verts[2]) else {
            continue;
        };
        candidates.push(LiftedFace {
            labels: oidx.iter().map(|&o| label_of(o)).collect(),
            orbit_index: oidx,
            vertices: verts,
            v: plane.v,
            rho_hat: plane.rho_hat,
        });
    }
    let valid: Vec<bool> = candidates.par_iter().map(|f| supports(f, &orb)).collect();
    let (mut faces, mut unvalidated) = (Vec::new(), Vec::new());
    for (f, ok) in candidates.into_iter().zip(valid) {
        if ok {
            faces.push(f);
        } else {
            unvalidated.push(f);
        }
    }
    if faces.is_empty() {
        return Err(Error::InsufficientDepth);
    }

    let links: Vec<Link> = seed_corners
        .iter()
        .map(|&(c, s)| {
            let p = dev.loop_holonomy(&puncture_loop(&d.tri, c))?;
            Ok(Link::new(s, &p))
        })
        .collect::<Result<_>>()?;
    let quotient = quotient_faces(&faces, &orb, &links);
    Ok(HullResult {
        faces,
        quotient,
        unvalidated,
        orbit_size: orb.points.len(),
    })
}

fn supports(f: &LiftedFace, orb: &Orbit) -> bool {
    let on_plane = f
        .vertices
        .iter()
        .all(|p| (mdot(p, &f.v) + 1.0).abs() <= 1e-9 * mdot(p, &f.v).abs().max(1.0));
    on_plane
        && orb.points.iter().all(|p| {
            let pv = mdot(p, &f.v);
            pv + 1.0 <= SUPPORT_TOL * pv.abs().max(1.0)
        })
}

fn quotient_faces(faces: &[LiftedFace], orb: &Orbit, links: &[Link]) -> Vec<QuotientFace> {
    // One key per (face, corner): the corner's seed and the link coordinate
    // of the next vertex after moving the corner onto its seed.
    let mut keys: Vec<Vec<(f64, usize)>> = vec![Vec::new(); links.len()];
    for (fi, f) in faces.iter().enumerate() {
        let m = f.vertices.len();
        for k in 0..m {
            let o = f.orbit_index[k];
            let seed = orb.seed[o];
            let back = lorentz_inverse(&orb.matrices[o]);
            let link = &links[seed];
            let t = link.t(&(back * f.vertices[(k + 1) % m])).rem_euclid(link.period);
            keys[seed].push((t, fi));
        }
    }
    let mut uf = UnionFind::new(faces.len());
    for (seed, ks) in keys.iter_mut().enumerate() {
        ks.sort_by(|a, b| a.0.total_cmp(&b.0));
        let period = links[seed].period;
        let tol = 1e-7 * period.max(1.0);
        for w in ks.windows(2) {
            if w[1].0 - w[0].0 <= tol {
                uf.union(w[0].1, w[1].1);
            }
        }
        if ks.len() >= 2 && ks[0].0 + period - ks[ks.len() - 1].0 <= tol {
            uf.union(ks[0].1, ks[ks.len() - 1].1);
        }
    }
    let mut out = Vec::new();
    let mut seen = HashMap::new();
    for (fi, f) in faces.iter().enumerate() {
        let r = uf.find(fi);
        if seen.insert(r, fi).is_some() {
            continue;
        }
        let m = f.vertices.len();
        out.push(QuotientFace {
            labels: f.labels.clone(),
            lambdas: (0..m)
                .map(|k| lambda_of_vecs(&f.vertices[k], &f.vertices[(k + 1) % m]).unwrap_or(f64::NAN))
                .collect(),
            representative: fi,
        });
    }
    out
}

/// Cyclic `(label, lambda)` sequences equal up to rotation and reversal, with
/// relative tolerance `tol` on lambdas.
fn cyclic_match(a: &[(usize, f64)], b: &[(usize, f64)], tol: f64) -> bool {
    let m = a.len();
    if m != b.len() {
        return false;
    }
    let close = |x: f64, y: f64| (x - y).abs() <= tol * x.abs().max(y.abs());
    // Reversed traversal: vertex order reverses and each side moves to the
    // vertex that now precedes it.
    let rev: Vec<(usize, f64)> = (0..m).map(|k| (b[(m - k) % m].0, b[(2 * m - k - 1) % m].1)).collect();
    [b.to_vec(), rev]
        .iter()
        .any(|bb| (0..m).any(|r| (0..m).all(|k| a[k].0 == bb[(k + r) % m].0 && close(a[k].1, bb[(k + r) % m].1))))
}

/// Whether the quotient faces match the flip-based Delaunay decomposition of
/// `d` as cyclic sequences of vertex labels and lambda-lengths.
pub fn matches_decomposition(quotient: &[QuotientFace], d: &DecoratedMetric) -> Result<bool> {
    let (dd, _) = make_delaunay(d)?;
    let dec = delaunay_decomposition(&dd)?;
    if dec.len() != quotient.len() {
        return Ok(false);
    }
    let seqs: Vec<Vec<(usize, f64)>> = dec
        .iter()
        .map(|f| {
            f.boundary
                .iter()
                .map(|&h| (dd.tri.vertex(h), dd.lambda[dd.tri.edge_of(h)]))
                .collect()
        })
        .collect();
    let mut used = vec![false; seqs.len()];
    for q in quotient {
        let qs: Vec<(usize, f64)> = q.labels.iter().cloned().zip(q.lambdas.iter().cloned()).collect();
        match (0..seqs.len()).find(|&i| !used[i] && cyclic_match(&qs, &seqs[i], 1e-7)) {
            Some(i) => used[i] = true,
            None => return Ok(false),
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Chart {
    Minkowski,
    Cylinder,
}

/// OBJ text for `faces` (each a cycle of light-cone points), plus the
/// lightlike ray from each vertex outwards up to height `ray_cap` as `l`
/// segments. The cylinder chart maps every point through the chart
/// involution.
pub fn export_mesh(faces: &[Vec<MinkVec>], chart: Chart, ray_cap: f64) -> String {
    fn vid(verts: &mut Vec<MinkVec>, p: &MinkVec) -> usize {
        match verts.iter().position(|q| (q - p).norm() <= 1e-12 * p.norm()) {
            Some(i) => i + 1,
            None => {
                verts.push(*p);
                verts.len()
            }
        }
    }
    let mut verts: Vec<MinkVec> = Vec::new();
    let polys: Vec<Vec<usize>> = faces
        .iter()
        .map(|f| f.iter().map(|p| vid(&mut verts, p)).collect())
        .collect();
    let mut rays = Vec::new();
    for i in 0..verts.len() {
        let p = verts[i];
        if p[2] < ray_cap {
            let tip = p * (ray_cap / p[2]);
            rays.push((i + 1, vid(&mut verts, &tip)));
        }
    }
    let mut out = String::new();
    for p in &verts {
        let q = match chart {
            Chart::Minkowski => *p,
            Chart::Cylinder => chart_involution(p).unwrap_or(*p),
        };
        writeln!(out, "v {} {} {}", q[0], q[1], q[2]).unwrap();
    }
    for ids in polys {
        let s: Vec<String> = ids.iter().map(|i| i.to_string()).collect();
        writeln!(out, "f {}", s.join(" ")).unwrap();
    }
    for (a, b) in rays {
        writeln!(out, "l {a} {b}").unwrap();
    }
    out
}

/// Vertex coordinates of OBJ text.
pub fn parse_obj_vertices(text: &str) -> Result<Vec<[f64; 3]>> {
    text.lines()
        .filter(|l| l.starts_with("v "))
        .map(|l| {
            let c: Vec<f64> = l[2..]
                .split_whitespace()
                .map(str::parse)
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::Malformed(format!("bad vertex line {l:?}: {e}")))?;
            <[f64; 3]>::try_from(c).map_err(|_| Error::Malformed(format!("bad vertex line {l:?}")))
        })
        .collect()
}

/// Light-cone polygons of a hull result, for export.
pub fn lifted_polygons(r: &HullResult) -> Vec<Vec<MinkVec>> {
    r.faces.iter().map(|f| f.vertices.clone()).collect()
}
