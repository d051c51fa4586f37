//! Developing map of a decorated surface into the light cone, holonomy in
//! the identity component of SO(2,1), loop traces and orbit enumeration.

use std::collections::{HashMap, VecDeque};

use nalgebra::Matrix3;

use crate::error::{Error, Result};
use crate::minkowski::{fourth_point, lift_triangle, lorentz_inverse, MinkVec};
use crate::surface::{face, prev, DecoratedMetric, FlipRecord, Triangulation};

/// Lifted faces over a spanning tree of the dual graph, plus one transition
/// matrix per half-edge.
#[derive(Debug, Clone)]
pub struct Development {
    pub root: usize,
    /// Light-cone lift of each face, indexed by corner.
    pub lifts: Vec<[MinkVec; 3]>,
    /// Half-edge of the parent face through which each face was reached.
    pub parent: Vec<Option<usize>>,
    /// `transition[h] * lifts[g] ` is the copy of face `g = face(twin h)`
    /// developed across `h` from `lifts[face h]`. Identity on tree edges.
    pub transition: Vec<Matrix3<f64>>,
    tri: Triangulation,
}

/// Labelled holonomy matrices.
#[derive(Debug, Clone)]
pub struct Representation {
    pub labels: Vec<String>,
    pub matrices: Vec<Matrix3<f64>>,
}

/// Lift of face `g = face(twin h)` adjacent to the lifted face `pf` across
/// half-edge `h`.
fn develop_across(tri: &Triangulation, lambda: &[f64], pf: &[MinkVec; 3], h: usize) -> Result<[MinkVec; 3]> {
    let i = h % 3;
    let t = tri.twin(h);
    let (g, j) = (face(t), t % 3);
    let (x, y, z) = (pf[i], pf[(i + 1) % 3], pf[(i + 2) % 3]);
    let l_xw = lambda[tri.edge_of(3 * g + (j + 1) % 3)];
    let l_yw = lambda[tri.edge_of(3 * g + (j + 2) % 3)];
    let w = fourth_point(&x, &y, &z, l_xw, l_yw)?;
    let mut out = [MinkVec::zeros(); 3];
    out[(j + 1) % 3] = x;
    out[j] = y;
    out[(j + 2) % 3] = w;
    Ok(out)
}

fn columns(p: &[MinkVec; 3]) -> Matrix3<f64> {
    Matrix3::from_columns(p)
}

/// Develops `d` starting from face 0.
pub fn develop(d: &DecoratedMetric) -> Result<Development> {
    develop_from(d, 0)
}

/// Develops `d` with face `root` placed by [`lift_triangle`] (corner 0 and 1
/// at the standard pair, corner 2 with positive second coordinate).
pub fn develop_from(d: &DecoratedMetric, root: usize) -> Result<Development> {
    let tri = &d.tri;
    let nf = tri.num_faces();
    if root >= nf {
        return Err(Error::Domain(format!("root face {root} out of range")));
    }
    let lam = &d.lambda;
    let [e0, e1, e2] = tri.face_edges(root);
    let mut lifts = vec![[MinkVec::zeros(); 3]; nf];
    let mut parent = vec![None; nf];
    let mut done = vec![false; nf];
    lifts[root] = lift_triangle(lam[e0], lam[e2], lam[e1]);
    done[root] = true;
    let mut queue = VecDeque::from([root]);
    while let Some(f) = queue.pop_front() {
        for h in 3 * f..3 * f + 3 {
            let g = face(tri.twin(h));
            if done[g] {
                continue;
            }
            lifts[g] = develop_across(tri, lam, &lifts[f], h)?;
            parent[g] = Some(h);
            done[g] = true;
            queue.push_back(g);
        }
    }
    let mut transition = vec![Matrix3::identity(); tri.num_half_edges()];
    for (h, tr) in transition.iter_mut().enumerate() {
        let g = face(tri.twin(h));
        if parent[g] == Some(h) {
            continue;
        }
        let q = develop_across(tri, lam, &lifts[face(h)], h)?;
        let p_inv = columns(&lifts[g])
            .try_inverse()
            .ok_or_else(|| Error::Domain("degenerate lifted face".into()))?;
        *tr = columns(&q) * p_inv;
    }
    Ok(Development {
        root,
        lifts,
        parent,
        transition,
        tri: tri.clone(),
    })
}

impl Development {
    pub fn triangulation(&self) -> &Triangulation {
        &self.tri
    }

    /// Product of transitions along a closed dual-edge word. Each entry is a
    /// half-edge crossed from its own face into the face of its twin.
    pub fn loop_holonomy(&self, word: &[usize]) -> Result<Matrix3<f64>> {
        check_closed(&self.tri, word)?;
        Ok(word.iter().fold(Matrix3::identity(), |m, &h| m * self.transition[h]))
    }

    /// Holonomy generators: transitions across the dual edges not in the
    /// spanning tree, one per edge.
    pub fn generators(&self) -> Vec<Matrix3<f64>> {
        (0..self.tri.num_edges())
            .filter_map(|e| {
                let [a, b] = self.tri.halves(e);
                let tree = self.parent[face(b)] == Some(a) || self.parent[face(a)] == Some(b);
                (!tree).then(|| self.transition[a])
            })
            .collect()
    }

    /// One lifted decoration point per vertex, taken at the vertex's
    /// lowest-numbered corner; also returns that corner.
    pub fn seeds(&self) -> Vec<(usize, MinkVec)> {
        (0..self.tri.num_vertices())
            .map(|v| {
                let c = (0..self.tri.num_half_edges())
                    .find(|&c| self.tri.vertex(c) == v)
                    .expect("every vertex has a corner");
                (c, self.lifts[face(c)][c % 3])
            })
            .collect()
    }
}

fn check_closed(tri: &Triangulation, word: &[usize]) -> Result<()> {
    if word.iter().any(|&h| h >= tri.num_half_edges()) {
        return Err(Error::OpenLoop);
    }
    for k in 0..word.len() {
        let arrive = face(tri.twin(word[k]));
        let depart = face(word[(k + 1) % word.len()]);
        if arrive != depart {
            return Err(Error::OpenLoop);
        }
    }
    Ok(())
}

/// Holonomy of each loop, labelled `loop0`, `loop1`, ...
pub fn holonomy(dev: &Development, loops: &[Vec<usize>]) -> Result<Representation> {
    let matrices = loops.iter().map(|w| dev.loop_holonomy(w)).collect::<Result<Vec<_>>>()?;
    Ok(Representation {
        labels: (0..loops.len()).map(|i| format!("loop{i}")).collect(),
        matrices,
    })
}

/// Dual loop circling the vertex at corner `c` once.
pub fn puncture_loop(tri: &Triangulation, c: usize) -> Vec<usize> {
    let start = prev(c);
    let mut out = vec![start];
    let mut h = prev(tri.twin(start));
    while h != start {
        out.push(h);
        h = prev(tri.twin(h));
    }
    out
}

/// The loops `a`, `b` and `ab` of a two-face torus: leave face 0 through one
/// edge and return through another.
pub fn torus_loops(tri: &Triangulation) -> Result<Vec<Vec<usize>>> {
    if tri.num_faces() != 2 || tri.genus() != 1 {
        return Err(Error::Domain("torus loops need a two-face torus".into()));
    }
    let side_in = |e: usize, f: usize| -> Result<usize> {
        tri.halves(e)
            .into_iter()
            .find(|&h| face(h) == f)
            .ok_or_else(|| Error::Domain("edge does not separate the two faces".into()))
    };
    let mut out = Vec::new();
    for (p, q) in [(0, 1), (1, 2), (0, 2)] {
        out.push(vec![side_in(p, 0)?, side_in(q, 1)?]);
    }
    Ok(out)
}

/// Rewrites a dual loop of the triangulation before a flip as a loop of the
/// triangulation `after` the flip, in the same free homotopy class of the
/// punctured surface.
pub fn transport_loop(word: &[usize], rec: &FlipRecord, after: &Triangulation) -> Vec<usize> {
    let [f, g] = rec.faces;
    let kept: Vec<usize> = word
        .iter()
        .filter(|h| !rec.old_halves.contains(h))
        .map(|&h| rec.map_half_edge(h))
        .collect();
    let mut out = Vec::with_capacity(kept.len() + 2);
    for k in 0..kept.len() {
        out.push(kept[k]);
        let arrive = face(after.twin(kept[k]));
        let depart = face(kept[(k + 1) % kept.len()]);
        if arrive != depart {
            debug_assert!([f, g].contains(&arrive) && [f, g].contains(&depart));
            out.push(3 * arrive + 2);
        }
    }
    reduce_cyclic(out, after)
}

/// Cancels crossings immediately followed by their reverse, cyclically.
fn reduce_cyclic(word: Vec<usize>, tri: &Triangulation) -> Vec<usize> {
    let mut st: Vec<usize> = Vec::with_capacity(word.len());
    for h in word {
        if st.last() == Some(&tri.twin(h)) {
            st.pop();
        } else {
            st.push(h);
        }
    }
    while st.len() >= 2 && tri.twin(st[0]) == *st.last().unwrap() {
        st.pop();
        st.remove(0);
    }
    st
}

/// Transports a set of loops through a sequence of flips applied to `tri`.
pub fn transport_loops(loops: &[Vec<usize>], tri: &Triangulation, log: &[FlipRecord]) -> Result<Vec<Vec<usize>>> {
    let mut cur = tri.clone();
    let mut out = loops.to_vec();
    for rec in log {
        cur.flip(rec.edge)?;
        out = out.iter().map(|w| transport_loop(w, rec, &cur)).collect();
    }
    Ok(out)
}

/// Sorted traces of the holonomy of `loops`.
pub fn trace_invariants(d: &DecoratedMetric, loops: &[Vec<usize>]) -> Result<Vec<f64>> {
    let dev = develop(d)?;
    let mut tr = loops
        .iter()
        .map(|w| dev.loop_holonomy(w).map(|m| m.trace()))
        .collect::<Result<Vec<_>>>()?;
    tr.sort_by(f64::total_cmp);
    Ok(tr)
}

/// Orbit points with the group element and seed producing each.
#[derive(Debug, Clone, Default)]
pub struct Orbit {
    pub points: Vec<MinkVec>,
    pub matrices: Vec<Matrix3<f64>>,
    pub seed: Vec<usize>,
    /// Word length of the element producing each point.
    pub depth: Vec<usize>,
}

/// Relative tolerance used to identify orbit points.
pub const ORBIT_TOL: f64 = 1e-8;

struct PointIndex {
    cells: HashMap<(i64, i64, i64), Vec<usize>>,
}

impl PointIndex {
    fn key(p: &MinkVec) -> (f64, f64, f64) {
        (p[0] / p[2] / ORBIT_TOL, p[1] / p[2] / ORBIT_TOL, p[2].ln() / ORBIT_TOL)
    }

    fn find(&self, p: &MinkVec, pts: &[MinkVec]) -> Option<usize> {
        let (a, b, c) = Self::key(p);
        let (a, b, c) = (a.floor() as i64, b.floor() as i64, c.floor() as i64);
        for da in -1..=1 {
            for db in -1..=1 {
                for dc in -1..=1 {
                    if let Some(v) = self.cells.get(&(a + da, b + db, c + dc)) {
                        for &i in v {
                            if (pts[i] - p).norm() <= ORBIT_TOL * p.norm().max(pts[i].norm()) {
                                return Some(i);
                            }
                        }
                    }
                }
            }
        }
        None
    }

    fn insert(&mut self, p: &MinkVec, i: usize) {
        let (a, b, c) = Self::key(p);
        self.cells
            .entry((a.floor() as i64, b.floor() as i64, c.floor() as i64))
            .or_default()
            .push(i);
    }
}

/// Images of `seeds` under all reduced words of length at most `depth` in
/// `gens` and their inverses, deduplicated at relative tolerance
/// [`ORBIT_TOL`]. Points keep the shortest word that produced them.
pub fn orbit(seeds: &[MinkVec], gens: &[Matrix3<f64>], depth: usize) -> Orbit {
    let mut letters: Vec<Matrix3<f64>> = gens.to_vec();
    letters.extend(gens.iter().map(lorentz_inverse));
    let ng = gens.len();
    let inverse_letter = |l: usize| if l < ng { l + ng } else { l - ng };
    let mut out = Orbit::default();
    let mut index = PointIndex { cells: HashMap::new() };
    let mut level: Vec<(Matrix3<f64>, Option<usize>)> = vec![(Matrix3::identity(), None)];
    for k in 0..=depth {
        for (m, _) in &level {
            for (s, p) in seeds.iter().enumerate() {
                let q = m * p;
                if index.find(&q, &out.points).is_none() {
                    index.insert(&q, out.points.len());
                    out.points.push(q);
                    out.matrices.push(*m);
                    out.seed.push(s);
                    out.depth.push(k);
                }
            }
        }
        if k == depth {
            break;
        }
        let mut next_level = Vec::with_capacity(level.len() * letters.len());
        for (m, last) in &level {
            for (l, a) in letters.iter().enumerate() {
                if Some(inverse_letter(l)) == *last {
                    continue;
                }
                next_level.push((m * a, Some(l)));
            }
        }
        level = next_level;
    }
    out
}
