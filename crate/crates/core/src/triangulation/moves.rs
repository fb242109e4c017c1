//! Local retriangulation moves with peripheral curve tracking.
//!
//! A move replaces a ball made of a few tetrahedra by another triangulation
//! of the same ball. Vertices of the ball carry labels `0..5`; each
//! configuration is given as label tuples and a coordinate model that fixes
//! orientations. Peripheral curves crossing the ball are rerouted inside
//! the cusp cross-section disk of each label.

use std::collections::{BTreeMap, VecDeque};

use super::{Curve, Passage, Perm, Tet, Triangulation, TriangulationError};

pub type Labels = [u8; 4];

const PRISM: [[f64; 3]; 5] = [
    [1.0, 0.0, 0.0],
    [-0.5, 0.866, 0.0],
    [-0.5, -0.866, 0.0],
    [0.0, 0.0, 1.0],
    [0.0, 0.0, -1.0],
];

const STAR: [[f64; 3]; 5] = [
    [1.0, 1.0, 1.0],
    [1.0, -1.0, -1.0],
    [-1.0, 1.0, -1.0],
    [-1.0, -1.0, 1.0],
    [0.0, 0.0, 0.0],
];

fn orientation(coords: &[[f64; 3]; 5], l: &Labels) -> f64 {
    let p = |i: usize| coords[l[i] as usize];
    let o = p(0);
    let d = |i: usize| [p(i)[0] - o[0], p(i)[1] - o[1], p(i)[2] - o[2]];
    let (a, b, c) = (d(1), d(2), d(3));
    let det = a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) + a[2] * (b[0] * c[1] - b[1] * c[0]);
    det.signum()
}

fn face_key(l: &Labels, f: usize) -> [u8; 3] {
    let mut k = [0u8; 3];
    let mut i = 0;
    for v in 0..4 {
        if v != f {
            k[i] = l[v];
            i += 1;
        }
    }
    k.sort_unstable();
    k
}

fn pos(l: &Labels, label: u8) -> usize {
    l.iter().position(|&x| x == label).expect("label present")
}

fn bad(msg: &str) -> TriangulationError {
    TriangulationError::BadMove(msg.to_string())
}

impl Triangulation {
    /// Labels a region by spreading from `t0` across faces accepted by
    /// `interior`; each newly reached tet gets the one label of `0..5` not on
    /// the entry face and not the apex it was entered from.
    fn label_region(&self, t0: usize, l0: Labels, interior: impl Fn(&[u8; 3]) -> bool) -> Result<Vec<(usize, Labels)>, TriangulationError> {
        let mut out: Vec<(usize, Labels)> = vec![(t0, l0)];
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            let (t, l) = out[i];
            for f in 0..4 {
                if !interior(&face_key(&l, f)) {
                    continue;
                }
                let u = self.tets[t].neighbor[f];
                let g = self.tets[t].gluing[f];
                let mut lu = [u8::MAX; 4];
                for v in (0..4).filter(|&v| v != f) {
                    lu[g.apply(v)] = l[v];
                }
                let missing = (0..5u8).find(|x| !lu.contains(x) && *x != l[f]).ok_or_else(|| bad("labelling"))?;
                lu[g.apply(f)] = missing;
                if let Some(&(_, seen)) = out.iter().find(|(s, _)| *s == u) {
                    if seen != lu {
                        return Err(bad("region folds onto itself"));
                    }
                    continue;
                }
                out.push((u, lu));
                queue.push_back(out.len() - 1);
            }
        }
        Ok(out)
    }

    /// 2-3 move across face `f` of tet `t`.
    /// Returns the new tets with their labels: the old face has labels 0, 1, 2
    /// (vertices other than `f` in order), `f` has label 3 and the far apex 4.
    pub fn move_2_3(&mut self, t: usize, f: usize) -> Result<Vec<(usize, Labels)>, TriangulationError> {
        let mut l0 = [0u8; 4];
        let mut k = 0;
        for v in 0..4 {
            if v == f {
                l0[v] = 3;
            } else {
                l0[v] = k;
                k += 1;
            }
        }
        let region = self.label_region(t, l0, |key| key == &[0, 1, 2])?;
        if region.len() != 2 {
            return Err(bad("2-3 needs two distinct tetrahedra"));
        }
        let new = [[3, 4, 0, 1], [3, 4, 1, 2], [3, 4, 2, 0]];
        self.replace_region(&region, &new, &PRISM)
    }

    /// 3-2 move on the edge `(a, b)` of tet `t`, which must have degree 3.
    pub fn move_3_2(&mut self, t: usize, a: usize, b: usize) -> Result<(), TriangulationError> {
        let mut l0 = [0u8; 4];
        l0[a] = 3;
        l0[b] = 4;
        let mut k = 0;
        for v in (0..4).filter(|&v| v != a && v != b) {
            l0[v] = k;
            k += 1;
        }
        let region = self.label_region(t, l0, |key| key.contains(&3) && key.contains(&4))?;
        if region.len() != 3 {
            return Err(bad("3-2 needs an edge in three distinct tetrahedra"));
        }
        let new = [[0, 1, 2, 3], [0, 1, 2, 4]];
        self.replace_region(&region, &new, &PRISM).map(|_| ())
    }

    /// 4-1 move removing vertex `v` of tet `t`, which must lie in exactly
    /// four distinct tetrahedra forming a subdivided tetrahedron.
    pub fn move_4_1(&mut self, t: usize, v: usize) -> Result<(), TriangulationError> {
        let mut l0 = [0u8; 4];
        l0[v] = 4;
        let mut k = 0;
        for w in (0..4).filter(|&w| w != v) {
            l0[w] = k;
            k += 1;
        }
        let region = self.label_region(t, l0, |key| key.contains(&4))?;
        if region.len() != 4 {
            return Err(bad("4-1 needs a vertex in four distinct tetrahedra"));
        }
        self.replace_region(&region, &[[0, 1, 2, 3]], &STAR).map(|_| ())
    }

    /// Applies the replacement on a copy and commits only on success.
    fn replace_region(&mut self, old: &[(usize, Labels)], new: &[Labels], coords: &[[f64; 3]; 5]) -> Result<Vec<(usize, Labels)>, TriangulationError> {
        let mut work = self.clone();
        let out = work.replace_region_in_place(old, new, coords)?;
        *self = work;
        Ok(out)
    }

    fn replace_region_in_place(&mut self, old: &[(usize, Labels)], new: &[Labels], coords: &[[f64; 3]; 5]) -> Result<Vec<(usize, Labels)>, TriangulationError> {
        let in_old: BTreeMap<usize, usize> = old.iter().enumerate().map(|(i, (t, _))| (*t, i)).collect();
        if in_old.len() != old.len() {
            return Err(bad("repeated tetrahedron"));
        }
        let s = orientation(coords, &old[0].1);
        if old.iter().any(|(_, l)| orientation(coords, l) != s) {
            return Err(bad("region is not consistently oriented"));
        }

        // Faces of the old configuration keyed by label triple.
        let mut old_faces: BTreeMap<[u8; 3], Vec<(usize, usize)>> = BTreeMap::new();
        for (i, (_, l)) in old.iter().enumerate() {
            for f in 0..4 {
                old_faces.entry(face_key(l, f)).or_default().push((i, f));
            }
        }
        for (key, occ) in &old_faces {
            if occ.len() > 2 {
                return Err(bad("face appears three times"));
            }
            if occ.len() == 2 {
                let ((i, f), (j, g)) = (occ[0], occ[1]);
                let (ti, li) = old[i];
                let (tj, lj) = old[j];
                let p = self.tets[ti].gluing[f];
                if self.tets[ti].neighbor[f] != tj || p.apply(f) != g || (0..4).any(|v| v != f && li[v] != lj[p.apply(v)]) {
                    return Err(bad(&format!("interior face {key:?} is not glued as expected")));
                }
            }
        }

        let new: Vec<Labels> = new
            .iter()
            .map(|l| if orientation(coords, l) == s { *l } else { [l[0], l[1], l[3], l[2]] })
            .collect();
        let mut new_faces: BTreeMap<[u8; 3], Vec<(usize, usize)>> = BTreeMap::new();
        for (i, l) in new.iter().enumerate() {
            for f in 0..4 {
                new_faces.entry(face_key(l, f)).or_default().push((i, f));
            }
        }
        // The boundary of the ball must agree.
        let boundary = |m: &BTreeMap<[u8; 3], Vec<(usize, usize)>>| -> Vec<[u8; 3]> {
            m.iter().filter(|(_, v)| v.len() == 1).map(|(k, _)| *k).collect()
        };
        if boundary(&old_faces) != boundary(&new_faces) {
            return Err(bad("boundaries differ"));
        }

        // Indices for new tets: reuse old slots, then append.
        let mut slots: Vec<usize> = old.iter().map(|(t, _)| *t).collect();
        slots.sort_unstable();
        let mut idx = Vec::with_capacity(new.len());
        for i in 0..new.len() {
            if i < slots.len() {
                idx.push(slots[i]);
            } else {
                idx.push(self.tets.len());
                self.tets.push(Tet { neighbor: [0; 4], gluing: [Perm::IDENTITY; 4] });
            }
        }
        let dead: Vec<usize> = slots[new.len().min(slots.len())..].to_vec();

        // Snapshot external gluings before overwriting.
        let ext: BTreeMap<[u8; 3], (usize, Perm)> = old_faces
            .iter()
            .filter(|(_, v)| v.len() == 1)
            .map(|(k, v)| {
                let (i, f) = v[0];
                let t = &self.tets[old[i].0];
                (*k, (t.neighbor[f], t.gluing[f]))
            })
            .collect();

        for (a, la) in new.iter().enumerate() {
            for f in 0..4 {
                let key = face_key(la, f);
                let occ = &new_faces[&key];
                let (nbr, perm) = if occ.len() == 2 {
                    let (b, g) = if occ[0] == (a, f) { occ[1] } else { occ[0] };
                    let lb = &new[b];
                    let mut p = [0u8; 4];
                    for v in 0..4 {
                        p[v] = if v == f { g as u8 } else { pos(lb, la[v]) as u8 };
                    }
                    (idx[b], Perm(p))
                } else {
                    let (i, fo) = old_faces[&key][0];
                    let lo = &old[i].1;
                    let (te, pe) = ext[&key];
                    // new vertex -> old vertex -> external vertex
                    let mut p = [0u8; 4];
                    for v in 0..4 {
                        let u = if v == f { fo } else { pos(lo, la[v]) };
                        p[v] = pe.apply(u) as u8;
                    }
                    let p = Perm(p);
                    match in_old.get(&te) {
                        None => {
                            self.tets[te].neighbor[p.apply(f)] = idx[a];
                            self.tets[te].gluing[p.apply(f)] = p.inverse();
                            (te, p)
                        }
                        Some(&k) => {
                            // Glued to another face of the ball: go through labels.
                            let lk = &old[k].1;
                            let g = p.apply(f);
                            let key2 = face_key(lk, g);
                            let (b, gb) = new_faces[&key2][0];
                            let lb = &new[b];
                            let mut q = [0u8; 4];
                            for v in 0..4 {
                                q[v] = if v == f { gb as u8 } else { pos(lb, lk[p.apply(v)]) as u8 };
                            }
                            (idx[b], Perm(q))
                        }
                    }
                };
                debug_assert!(perm.is_valid());
                self.tets[idx[a]].neighbor[f] = nbr;
                self.tets[idx[a]].gluing[f] = perm;
            }
        }

        // Reroute peripheral curves.
        let mut curves: Vec<&mut Curve> = Vec::new();
        for p in self.peripheral.iter_mut() {
            curves.push(&mut p.meridian);
            curves.push(&mut p.blackboard);
        }
        let mut rerouted = Vec::new();
        for c in curves.iter() {
            rerouted.push(reroute(&**c, old, &in_old, &new, &new_faces, &idx)?);
        }
        for (c, r) in curves.into_iter().zip(rerouted) {
            *c = r;
        }

        self.remove_tets(&dead);
        Ok(if dead.is_empty() { idx.into_iter().zip(new).collect() } else { Vec::new() })
    }

    /// Deletes unreferenced tets by moving the last tets into their slots.
    fn remove_tets(&mut self, dead: &[usize]) {
        let mut dead = dead.to_vec();
        dead.sort_unstable_by(|a, b| b.cmp(a));
        for d in dead {
            let last = self.tets.len() - 1;
            if d != last {
                self.tets.swap(d, last);
                for t in 0..last {
                    for f in 0..4 {
                        if self.tets[t].neighbor[f] == last {
                            self.tets[t].neighbor[f] = d;
                        }
                    }
                }
                for p in self.peripheral.iter_mut() {
                    for c in [&mut p.meridian, &mut p.blackboard] {
                        for q in c.0.iter_mut() {
                            if q.tet == last {
                                q.tet = d;
                            }
                        }
                    }
                }
            }
            self.tets.pop();
        }
    }
}

fn reroute(
    c: &Curve,
    old: &[(usize, Labels)],
    in_old: &BTreeMap<usize, usize>,
    new: &[Labels],
    new_faces: &BTreeMap<[u8; 3], Vec<(usize, usize)>>,
    idx: &[usize],
) -> Result<Curve, TriangulationError> {
    let n = c.0.len();
    let is_interior = |key: &[u8; 3]| old.iter().filter(|(_, lo)| (0..4).any(|f| face_key(lo, f) == *key)).count() == 2;
    // Start where the curve is outside the ball or has just entered it.
    let start = c.0.iter().position(|p| match in_old.get(&p.tet) {
        None => true,
        Some(&i) => !is_interior(&face_key(&old[i].1, p.in_face as usize)),
    });
    let Some(start) = start else {
        return Err(TriangulationError::BrokenCurve("curve lies inside a move region".into()));
    };
    let ps: Vec<Passage> = (0..n).map(|k| c.0[(start + k) % n]).collect();
    let mut out = Vec::with_capacity(n);
    let mut k = 0;
    while k < n {
        let p = ps[k];
        let Some(&i) = in_old.get(&p.tet) else {
            out.push(p);
            k += 1;
            continue;
        };
        let l = old[i].1;
        let label = l[p.vertex as usize];
        let key_in = face_key(&l, p.in_face as usize);
        // Extend the run while the curve crosses interior faces of the ball.
        let mut last = p;
        let mut li = l;
        loop {
            let key = face_key(&li, last.out_face as usize);
            if !is_interior(&key) {
                break;
            }
            k += 1;
            last = ps[k];
            li = old[in_old[&last.tet]].1;
        }
        k += 1;
        let key_out = face_key(&li, last.out_face as usize);
        out.extend(route(label, key_in, key_out, new, new_faces, idx)?);
    }
    normalize(&mut out)?;
    Ok(Curve(out))
}

/// Shortest path of passages through the cusp triangles at `label` from the
/// boundary face `from` to the boundary face `to`.
fn route(
    label: u8,
    from: [u8; 3],
    to: [u8; 3],
    new: &[Labels],
    new_faces: &BTreeMap<[u8; 3], Vec<(usize, usize)>>,
    idx: &[usize],
) -> Result<Vec<Passage>, TriangulationError> {
    let (Some(a), Some(b)) = (new_faces.get(&from), new_faces.get(&to)) else {
        return Err(TriangulationError::BrokenCurve(format!("run enters at {from:?} / leaves at {to:?} off the boundary")));
    };
    let ((a0, f0), (a1, f1)) = (a[0], b[0]);
    // BFS over (tet, entry face).
    let mut prev: BTreeMap<usize, (usize, usize, usize)> = BTreeMap::new();
    let mut entry: BTreeMap<usize, usize> = BTreeMap::from([(a0, f0)]);
    let mut queue = VecDeque::from([a0]);
    while let Some(a) = queue.pop_front() {
        if a == a1 {
            break;
        }
        let v = pos(&new[a], label);
        for f in (0..4).filter(|&f| f != v) {
            let occ = &new_faces[&face_key(&new[a], f)];
            if occ.len() != 2 {
                continue;
            }
            let (b, g) = if occ[0] == (a, f) { occ[1] } else { occ[0] };
            if entry.contains_key(&b) {
                continue;
            }
            entry.insert(b, g);
            prev.insert(b, (a, f, g));
            queue.push_back(b);
        }
    }
    if !entry.contains_key(&a1) {
        return Err(TriangulationError::BrokenCurve("cusp disk is disconnected".into()));
    }
    let mut chain = vec![a1];
    while let Some(&(a, _, _)) = prev.get(chain.last().unwrap()) {
        chain.push(a);
    }
    chain.reverse();
    let mut out = Vec::with_capacity(chain.len());
    for (k, &a) in chain.iter().enumerate() {
        let in_face = if k == 0 { f0 } else { prev[&a].2 };
        let out_face = if k + 1 == chain.len() { f1 } else { prev[&chain[k + 1]].1 };
        out.push(Passage { tet: idx[a], vertex: pos(&new[a], label) as u8, in_face: in_face as u8, out_face: out_face as u8 });
    }
    Ok(out)
}

/// Removes back-tracking: a passage leaving through the side it entered.
pub(crate) fn normalize(ps: &mut Vec<Passage>) -> Result<(), TriangulationError> {
    loop {
        let n = ps.len();
        let Some(k) = ps.iter().position(|p| p.in_face == p.out_face) else {
            return Ok(());
        };
        if n < 3 {
            return Err(TriangulationError::BrokenCurve("curve collapsed".into()));
        }
        let prev = (k + n - 1) % n;
        let next = (k + 1) % n;
        ps[prev].out_face = ps[next].out_face;
        let (a, b) = if k < next { (next, k) } else { (k, next) };
        ps.remove(a);
        ps.remove(b);
    }
}
