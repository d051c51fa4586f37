use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};

/// Combinatorial triangulation of a closed oriented surface with labelled
/// vertices.
///
/// Half-edge `3f + i` runs from corner `i` to corner `i + 1 (mod 3)` of face
/// `f`. Glued half-edges run in opposite directions. Vertices are numbered
/// from 0 internally; the file format shifts them to start at 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Triangulation {
    n: usize,
    vert: Vec<usize>,
    twin: Vec<usize>,
    edge_of: Vec<usize>,
    halves: Vec<[usize; 2]>,
}

pub fn next(h: usize) -> usize {
    3 * (h / 3) + (h % 3 + 1) % 3
}

pub fn prev(h: usize) -> usize {
    3 * (h / 3) + (h % 3 + 2) % 3
}

pub fn face(h: usize) -> usize {
    h / 3
}

pub(crate) struct UnionFind(Vec<usize>);

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }
    pub(crate) fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let nx = self.0[y];
            self.0[y] = r;
            y = nx;
        }
        r
    }
    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

impl Triangulation {
    /// Builds a triangulation from per-corner vertex labels (`faces[f][i]`,
    /// 0-based) and a list of glued sides `(face_a, side_a, face_b, side_b)`.
    pub fn new(n: usize, faces: &[[usize; 3]], gluing: &[(usize, usize, usize, usize)]) -> Result<Self> {
        let bad = |m: String| Error::InvalidTriangulation(m);
        let nf = faces.len();
        if nf == 0 {
            return Err(bad("no faces".into()));
        }
        let nh = 3 * nf;
        let vert: Vec<usize> = faces.iter().flatten().copied().collect();
        if let Some(v) = vert.iter().find(|&&v| v >= n) {
            return Err(bad(format!("vertex {} out of range 1..={n}", v + 1)));
        }
        let mut twin = vec![usize::MAX; nh];
        for &(fa, sa, fb, sb) in gluing {
            if fa >= nf || fb >= nf || sa > 2 || sb > 2 {
                return Err(bad(format!("gluing ({fa},{sa},{fb},{sb}) out of range")));
            }
            let (ha, hb) = (3 * fa + sa, 3 * fb + sb);
            if ha == hb || twin[ha] != usize::MAX || twin[hb] != usize::MAX {
                return Err(bad(format!("side ({fa},{sa}) or ({fb},{sb}) glued more than once")));
            }
            twin[ha] = hb;
            twin[hb] = ha;
        }
        if twin.iter().any(|&t| t == usize::MAX) {
            return Err(bad("some edge side is not glued".into()));
        }
        for h in 0..nh {
            let t = twin[h];
            if vert[h] != vert[next(t)] || vert[next(h)] != vert[t] {
                return Err(bad(format!(
                    "gluing of face {} side {} does not match vertex labels",
                    face(h),
                    h % 3
                )));
            }
        }
        // Each label must be exactly one orbit of corners.
        let mut seen = vec![false; nh];
        let mut label_orbits = vec![0usize; n];
        for c in 0..nh {
            if seen[c] {
                continue;
            }
            label_orbits[vert[c]] += 1;
            let mut x = c;
            loop {
                seen[x] = true;
                let t = twin[prev(x)];
                x = t;
                if x == c {
                    break;
                }
            }
        }
        if let Some(v) = label_orbits.iter().position(|&k| k != 1) {
            return Err(bad(format!(
                "vertex {} has {} corner cycles (expected exactly one)",
                v + 1,
                label_orbits[v]
            )));
        }
        let mut pairs: Vec<[usize; 2]> = (0..nh).filter(|&h| h < twin[h]).map(|h| [h, twin[h]]).collect();
        pairs.sort();
        let mut edge_of = vec![0; nh];
        for (e, p) in pairs.iter().enumerate() {
            edge_of[p[0]] = e;
            edge_of[p[1]] = e;
        }
        let tri = Triangulation {
            n,
            vert,
            twin,
            edge_of,
            halves: pairs,
        };
        let mut comp = UnionFind::new(nf);
        for h in 0..nh {
            comp.union(face(h), face(tri.twin[h]));
        }
        if (0..nf).any(|f| comp.find(f) != 0) {
            return Err(bad("surface is not connected".into()));
        }
        let chi = tri.euler_characteristic();
        if chi > 2 || chi % 2 != 0 {
            return Err(bad(format!("impossible Euler characteristic {chi}")));
        }
        if chi - n as i64 >= 0 {
            return Err(bad(format!(
                "punctured surface with genus {} and {} punctures is not hyperbolic",
                (2 - chi) / 2,
                n
            )));
        }
        Ok(tri)
    }

    /// Builds a triangulation from gluings alone, numbering vertices by the
    /// first corner at which they appear.
    pub fn from_gluing(num_faces: usize, gluing: &[(usize, usize, usize, usize)]) -> Result<Self> {
        let nh = 3 * num_faces;
        let mut uf = UnionFind::new(nh);
        for &(fa, sa, fb, sb) in gluing {
            if fa >= num_faces || fb >= num_faces || sa > 2 || sb > 2 {
                return Err(Error::InvalidTriangulation("gluing out of range".into()));
            }
            let (ha, hb) = (3 * fa + sa, 3 * fb + sb);
            uf.union(ha, next(hb));
            uf.union(next(ha), hb);
        }
        let mut label = HashMap::new();
        let mut faces = vec![[0; 3]; num_faces];
        for c in 0..nh {
            let r = uf.find(c);
            let k = label.len();
            faces[c / 3][c % 3] = *label.entry(r).or_insert(k);
        }
        Triangulation::new(label.len(), &faces, gluing)
    }

    /// Glues consistently oriented faces along matching vertex pairs. Every
    /// directed pair `(a, b)` must occur at most once.
    pub fn from_oriented_faces(n: usize, faces: &[[usize; 3]]) -> Result<Self> {
        let mut side = HashMap::new();
        for (f, fc) in faces.iter().enumerate() {
            for i in 0..3 {
                if side.insert((fc[i], fc[(i + 1) % 3]), (f, i)).is_some() {
                    return Err(Error::InvalidTriangulation(format!(
                        "directed edge ({}, {}) appears twice",
                        fc[i] + 1,
                        fc[(i + 1) % 3] + 1
                    )));
                }
            }
        }
        let mut gluing = Vec::new();
        for (&(a, b), &(f, i)) in &side {
            let &(g, j) = side
                .get(&(b, a))
                .ok_or_else(|| Error::InvalidTriangulation(format!("edge ({}, {}) has no partner", a + 1, b + 1)))?;
            if (f, i) < (g, j) {
                gluing.push((f, i, g, j));
            }
        }
        gluing.sort();
        Triangulation::new(n, faces, &gluing)
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    pub fn num_faces(&self) -> usize {
        self.vert.len() / 3
    }

    pub fn num_edges(&self) -> usize {
        self.halves.len()
    }

    pub fn num_half_edges(&self) -> usize {
        self.vert.len()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.n as i64 - self.num_edges() as i64 + self.num_faces() as i64
    }

    pub fn genus(&self) -> usize {
        ((2 - self.euler_characteristic()) / 2) as usize
    }

    /// Vertex at the tail of half-edge `h` (equivalently at corner `h`).
    pub fn vertex(&self, h: usize) -> usize {
        self.vert[h]
    }

    pub fn face_vertices(&self, f: usize) -> [usize; 3] {
        [self.vert[3 * f], self.vert[3 * f + 1], self.vert[3 * f + 2]]
    }

    pub fn twin(&self, h: usize) -> usize {
        self.twin[h]
    }

    pub fn edge_of(&self, h: usize) -> usize {
        self.edge_of[h]
    }

    pub fn halves(&self, e: usize) -> [usize; 2] {
        self.halves[e]
    }

    pub fn edge_vertices(&self, e: usize) -> [usize; 2] {
        let h = self.halves[e][0];
        [self.vert[h], self.vert[next(h)]]
    }

    /// Edge ids of the three sides of face `f`.
    pub fn face_edges(&self, f: usize) -> [usize; 3] {
        [self.edge_of[3 * f], self.edge_of[3 * f + 1], self.edge_of[3 * f + 2]]
    }

    /// True when both sides of `e` lie on the same face.
    pub fn is_self_adjacent(&self, e: usize) -> bool {
        let [a, b] = self.halves[e];
        face(a) == face(b)
    }

    /// Gluing list `(face_a, side_a, face_b, side_b)` in edge-id order.
    pub fn gluing(&self) -> Vec<(usize, usize, usize, usize)> {
        self.halves
            .iter()
            .map(|&[a, b]| (face(a), a % 3, face(b), b % 3))
            .collect()
    }

    /// Corners around vertex `v`, in rotation order.
    pub fn corners_of(&self, v: usize) -> Vec<usize> {
        let Some(start) = self.vert.iter().position(|&x| x == v) else {
            return Vec::new();
        };
        let mut out = vec![start];
        let mut x = self.twin[prev(start)];
        while x != start {
            out.push(x);
            x = self.twin[prev(x)];
        }
        out
    }

    /// Renumbers edges so that ids follow the sorted half-edge pairs.
    /// Returns `perm` with `perm[old] = new`.
    pub fn canonicalize(&mut self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.num_edges()).collect();
        order.sort_by_key(|&e| self.halves[e]);
        let mut perm = vec![0; order.len()];
        for (new, &old) in order.iter().enumerate() {
            perm[old] = new;
        }
        self.halves = order.iter().map(|&e| self.halves[e]).collect();
        for e in self.edge_of.iter_mut() {
            *e = perm[*e];
        }
        perm
    }

    /// Replaces edge `e` by the other diagonal of its quadrilateral.
    ///
    /// With `e` running `a -> b` in face `f = (a, b, c)` and `b -> a` in
    /// face `g = (b, a, d)`, afterwards `f = (c, a, d)` and `g = (d, b, c)`
    /// and the new diagonal keeps id `e` as sides `3f+2`, `3g+2`.
    pub fn flip(&mut self, e: usize) -> Result<FlipRecord> {
        if self.is_self_adjacent(e) {
            return Err(Error::FlipNotEmbeddable(e));
        }
        let [h, t] = self.halves[e];
        let (f, g) = (face(h), face(t));
        let (a, b, c, d) = (self.vert[h], self.vert[t], self.vert[prev(h)], self.vert[prev(t)]);
        let old = [prev(h), next(t), prev(t), next(h)];
        let new = [3 * f, 3 * f + 1, 3 * g, 3 * g + 1];
        let map = |x: usize| old.iter().position(|&o| o == x).map_or(x, |k| new[k]);
        let old_twins = old.map(|o| self.twin[o]);
        let old_edges = old.map(|o| self.edge_of[o]);
        let (ha, ga) = (h, t);
        for k in 0..4 {
            let tw = map(old_twins[k]);
            self.twin[new[k]] = tw;
            self.twin[tw] = new[k];
            self.edge_of[new[k]] = old_edges[k];
        }
        self.vert[3 * f] = c;
        self.vert[3 * f + 1] = a;
        self.vert[3 * f + 2] = d;
        self.vert[3 * g] = d;
        self.vert[3 * g + 1] = b;
        self.vert[3 * g + 2] = c;
        self.twin[3 * f + 2] = 3 * g + 2;
        self.twin[3 * g + 2] = 3 * f + 2;
        self.edge_of[3 * f + 2] = e;
        self.edge_of[3 * g + 2] = e;
        for x in (3 * f..3 * f + 3).chain(3 * g..3 * g + 3) {
            let y = self.twin[x];
            self.halves[self.edge_of[x]] = [x.min(y), x.max(y)];
        }
        Ok(FlipRecord {
            edge: e,
            faces: [f, g],
            old_halves: [ha, ga],
            old_outer: old,
            new_outer: new,
        })
    }

    /// All label-preserving combinatorial isomorphisms onto `other`, given as
    /// half-edge maps.
    pub fn isomorphisms(&self, other: &Triangulation) -> Vec<Vec<usize>> {
        if self.n != other.n || self.num_faces() != other.num_faces() || self.num_edges() != other.num_edges() {
            return Vec::new();
        }
        let nh = self.num_half_edges();
        let mut out = Vec::new();
        for start in 0..nh {
            if other.vert[start] != self.vert[0] || other.vert[next(start)] != self.vert[1] {
                continue;
            }
            let mut map = vec![usize::MAX; nh];
            let mut used = vec![false; nh];
            let mut queue = VecDeque::new();
            let mut ok = true;
            map[0] = start;
            used[start] = true;
            queue.push_back(0);
            'bfs: while let Some(x) = queue.pop_front() {
                let y = map[x];
                for (xs, ys) in [(next(x), next(y)), (self.twin[x], other.twin[y])] {
                    if map[xs] == usize::MAX {
                        if used[ys] || self.vert[xs] != other.vert[ys] {
                            ok = false;
                            break 'bfs;
                        }
                        map[xs] = ys;
                        used[ys] = true;
                        queue.push_back(xs);
                    } else if map[xs] != ys {
                        ok = false;
                        break 'bfs;
                    }
                }
            }
            if ok && map.iter().all(|&m| m != usize::MAX) {
                out.push(map);
            }
        }
        out
    }
}

/// Half-edge bookkeeping of one flip, used to transport dual loops.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FlipRecord {
    pub edge: usize,
    pub faces: [usize; 2],
    /// The two half-edges of the flipped edge before the flip.
    pub old_halves: [usize; 2],
    /// Outer half-edges before the flip and the ids they carry afterwards.
    pub old_outer: [usize; 4],
    pub new_outer: [usize; 4],
}

impl FlipRecord {
    pub fn map_half_edge(&self, x: usize) -> usize {
        self.old_outer
            .iter()
            .position(|&o| o == x)
            .map_or(x, |k| self.new_outer[k])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::builders;

    #[test]
    fn torus_counts() {
        let t = builders::one_vertex_torus();
        assert_eq!((t.num_vertices(), t.num_edges(), t.num_faces()), (1, 3, 2));
        assert_eq!(t.genus(), 1);
        assert_eq!(t.corners_of(0).len(), 6);
    }

    #[test]
    fn flip_twice_restores_edge_incidence() {
        let mut t = builders::octagon_genus2();
        let before: Vec<_> = (0..t.num_edges()).map(|e| t.edge_vertices(e)).collect();
        for e in 0..t.num_edges() {
            if t.is_self_adjacent(e) {
                continue;
            }
            t.flip(e).unwrap();
            t.flip(e).unwrap();
        }
        let after: Vec<_> = (0..t.num_edges()).map(|e| t.edge_vertices(e)).collect();
        for (x, y) in before.iter().zip(&after) {
            let (mut x, mut y) = (*x, *y);
            x.sort();
            y.sort();
            assert_eq!(x, y);
        }
        assert_eq!(t.euler_characteristic(), -2);
    }

    #[test]
    fn flips_keep_structure_valid() {
        let mut t = builders::tetrahedron();
        for e in [0, 3, 5, 1, 0, 2] {
            if t.flip(e).is_ok() {
                let faces: Vec<_> = (0..t.num_faces()).map(|f| t.face_vertices(f)).collect();
                let again = Triangulation::new(t.num_vertices(), &faces, &t.gluing()).unwrap();
                assert_eq!(again.euler_characteristic(), 2);
            }
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(Triangulation::new(1, &[[0, 0, 0]], &[(0, 0, 0, 1)]).is_err());
        // Sphere with three vertices from two faces, labels swapped on one gluing.
        let faces = [[0, 1, 2], [0, 2, 1]];
        assert!(Triangulation::new(3, &faces, &[(0, 0, 1, 0), (0, 1, 1, 1), (0, 2, 1, 2)]).is_err());
        assert!(Triangulation::from_oriented_faces(3, &faces).is_ok());
    }

    #[test]
    fn isomorphisms_of_torus() {
        let t = builders::one_vertex_torus();
        // Six orientation-preserving symmetries of the theta graph.
        assert_eq!(t.isomorphisms(&t).len(), 6);
        let d = builders::doubled_polygon_triangulation(3).unwrap();
        assert_eq!(d.isomorphisms(&d).len(), 1);
    }
}
