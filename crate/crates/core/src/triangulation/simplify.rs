use rand::seq::SliceRandom;
use rand::Rng;

use super::{Triangulation, TriangulationError, EDGES};


impl Triangulation {
    /// Tries a 3-2 move on every degree-3 edge class touching vertex class
    /// `vclass` (any class when `None`). Returns whether a move was made.
    fn try_3_2(&mut self, vclass: Option<usize>) -> bool {
        self.try_3_2_where(vclass, |_| true)
    }

    /// Like `try_3_2`, keeping the first move whose result satisfies `accept`.
    fn try_3_2_where(&mut self, vclass: Option<usize>, accept: impl Fn(&Triangulation) -> bool) -> bool {
        let ec = self.edge_classes();
        let vc = self.vertex_classes();
        for members in ec.members.iter().filter(|m| m.len() == 3) {
            let (t, e) = members[0];
            let (a, b) = EDGES[e];
            if let Some(v) = vclass {
                if vc.of[t][a] != v && vc.of[t][b] != v {
                    continue;
                }
            }
            let mut trial = self.clone();
            if trial.move_3_2(t, a, b).is_ok() && accept(&trial) {
                *self = trial;
                return true;
            }
        }
        false
    }

    /// Removes one degree-2 edge with a 2-3 move beside it followed by a 3-2
    /// move on it.
    fn try_remove_degree_two(&mut self, vclass: Option<usize>) -> bool {
        self.try_remove_degree_two_where(vclass, |_| true)
    }

    /// Like `try_remove_degree_two`, keeping the first result for which
    /// `accept` succeeds; `accept` may modify the triangulation further.
    fn try_remove_degree_two_where(&mut self, vclass: Option<usize>, accept: impl Fn(&mut Triangulation) -> bool) -> bool {
        let ec = self.edge_classes();
        let vc = self.vertex_classes();
        for members in ec.members.iter().filter(|m| m.len() == 2) {
            let (t, e) = members[0];
            let (a, b) = EDGES[e];
            if let Some(v) = vclass {
                if vc.of[t][a] != v && vc.of[t][b] != v {
                    continue;
                }
            }
            // Faces of t not containing the edge are those opposite a or b.
            // At a finite vertex, flip on the face that contains it so the
            // pair shrinks its link instead of subdividing it.
            let order = match vclass {
                Some(v) if vc.of[t][a] == v && vc.of[t][b] != v => vec![(b, a)],
                Some(v) if vc.of[t][b] == v && vc.of[t][a] != v => vec![(a, b)],
                _ => vec![(a, b), (b, a)],
            };
            for (f, w) in order {
                let mut trial = self.clone();
                let Ok(created) = trial.move_2_3(t, f) else { continue };
                // Label of w: the vertices other than f are labelled 0, 1, 2 in order.
                let lw = (0..4).filter(|&v| v != f).position(|v| v == w).unwrap() as u8;
                let hit = created.iter().find(|(_, l)| l.contains(&3) && l.contains(&lw));
                if let Some(&(u, l)) = hit {
                    let pa = l.iter().position(|&x| x == 3).unwrap();
                    let pb = l.iter().position(|&x| x == lw).unwrap();
                    if trial.move_3_2(u, pa, pb).is_ok() && accept(&mut trial) {
                        *self = trial;
                        return true;
                    }
                }
            }
        }
        false
    }

    /// 4-4 moves on degree-4 edges, keeping the first one after which greedy
    /// simplification removes tetrahedra.
    fn try_4_4_reducing(&mut self) -> bool {
        let before = self.num_tets();
        let ec = self.edge_classes();
        for members in ec.members.iter().filter(|m| m.len() == 4) {
            let (t, e) = members[0];
            let (a, b) = EDGES[e];
            for f in (0..4).filter(|&v| v != a && v != b) {
                let mut trial = self.clone();
                let Ok(created) = trial.move_2_3(t, f) else { continue };
                let label = |v: usize| (0..4).filter(|&w| w != f).position(|w| w == v).unwrap() as u8;
                let (la, lb) = (label(a), label(b));
                let Some(&(u, l)) = created.iter().find(|(_, l)| l.contains(&la) && l.contains(&lb)) else { continue };
                let pa = l.iter().position(|&x| x == la).unwrap();
                let pb = l.iter().position(|&x| x == lb).unwrap();
                if trial.move_3_2(u, pa, pb).is_err() {
                    continue;
                }
                greedy(&mut trial);
                if trial.num_tets() < before {
                    *self = trial;
                    return true;
                }
            }
        }
        false
    }
}

/// Removes the vertices with spherical links (above and below the diagram)
/// using 2-3, 3-2 and 4-1 moves.
///
/// Edges at the vertex correspond to vertices of its link. Degree-3 edges are
/// removed by 3-2 moves and degree-2 edges by a 2-3/3-2 pair; otherwise a
/// link edge at the lowest-degree link vertex of degree at least 4 is flipped
/// towards its highest-degree neighbour. Once the vertex lies in four
/// tetrahedra a 4-1 move deletes it.
pub fn remove_finite_vertices<R: Rng>(tri: &mut Triangulation, rng: &mut R) -> Result<(), TriangulationError> {
    // Short bounded attempts with fresh randomness beat one long random walk.
    for k in 0..ATTEMPTS {
        let mut work = tri.clone();
        if attempt_removal(&mut work, rng, 1 + k / 6).is_ok() {
            simplify(&mut work);
            *tri = work;
            return Ok(());
        }
    }
    Err(TriangulationError::FiniteVertices)
}

const ATTEMPTS: usize = 30;

fn attempt_removal<R: Rng>(tri: &mut Triangulation, rng: &mut R, scale: usize) -> Result<(), TriangulationError> {
    let cap = (1 + scale) * tri.tets.len() + 16;
    let budget = scale * (40 + 10 * tri.tets.len());
    let mut best = finite_size(tri);
    let mut stalled = 0;
    for _ in 0..budget {
        if tri.tets.len() > cap {
            break;
        }
        let size = finite_size(tri);
        if size.0 == 0 {
            return Ok(());
        }
        if size < best {
            best = size;
            stalled = 0;
        } else {
            stalled += 1;
        }
        let vc = tri.vertex_classes();
        let v = smallest_finite(tri, &vc);
        let members = vc.members[v].clone();
        if stalled > 40 {
            // Shake the star of the vertex loose.
            for _ in 0..3 {
                let &(t, _) = members.choose(rng).unwrap();
                let _ = tri.move_2_3(t, rng.gen_range(0..4));
            }
            stalled = 0;
            best = finite_size(tri);
            continue;
        }
        if members.len() == 4 {
            let (t, w) = members[0];
            if tri.move_4_1(t, w).is_ok() {
                continue;
            }
            // A four-triangle link that is not a tetrahedron boundary becomes
            // one after a single flip.
            if let Some(next) = flip_to_tetrahedral(tri, &members) {
                *tri = next;
                continue;
            }
        }
        // Accept a reducing move only if the vertex link really shrinks.
        if members.len() > 4 {
            let mut trial = tri.clone();
            if trial.try_3_2_where(Some(v), |t| finite_size(t) < size) {
                *tri = trial;
                continue;
            }
            let mut trial = tri.clone();
            if trial.try_remove_degree_two(Some(v)) && finite_size(&trial) < size {
                *tri = trial;
                continue;
            }
        }
        let ec = tri.edge_classes();
        let deg = |t: usize, a: usize, b: usize| ec.members[ec.of[t][super::edge_index(a, b)]].len();
        // (degree of x, -degree of y, tet, face) for faces V-x-y.
        let mut options: Vec<(usize, isize, usize, usize)> = Vec::new();
        for &(t, w) in &members {
            for x in (0..4).filter(|&x| x != w) {
                let dx = deg(t, w, x);
                if dx < 4 {
                    continue;
                }
                for y in (0..4).filter(|&y| y != w && y != x) {
                    let f = 6 - w - x - y;
                    options.push((dx, -(deg(t, w, y) as isize), t, f));
                }
            }
        }
        options.shuffle(rng);
        options.sort_by_key(|o| (o.0, o.1));
        if !options.iter().any(|&(_, _, t, f)| tri.move_2_3(t, f).is_ok()) {
            let &(t, w) = members.choose(rng).unwrap();
            let f = (0..4).filter(|&f| f != w).collect::<Vec<_>>()[rng.gen_range(0..3)];
            let _ = tri.move_2_3(t, f);
        }
    }
    Err(TriangulationError::FiniteVertices)
}

/// The finite vertex class lying in the fewest tetrahedra.
fn smallest_finite(tri: &Triangulation, vc: &super::Classes) -> usize {
    let finite = tri.finite_vertex_classes();
    *finite.iter().min_by_key(|&&v| (vc.members[v].len(), v)).expect("a finite vertex")
}

/// (number of finite vertices, tets at the smallest one): decreases
/// lexicographically as the vertices are removed.
fn finite_size(tri: &Triangulation) -> (usize, usize) {
    let f = tri.finite_vertex_classes();
    let vc = tri.vertex_classes();
    (f.len(), f.iter().map(|&v| vc.members[v].len()).min().unwrap_or(0))
}

fn flip_to_tetrahedral(tri: &Triangulation, members: &[(usize, usize)]) -> Option<Triangulation> {
    for &(t, w) in members {
        for f in (0..4).filter(|&f| f != w) {
            let mut trial = tri.clone();
            if trial.move_2_3(t, f).is_err() {
                continue;
            }
            let v = trial.finite_vertex_classes();
            let vc = trial.vertex_classes();
            for &c in &v {
                let m = &vc.members[c];
                if m.len() == 4 {
                    let mut done = trial.clone();
                    if done.move_4_1(m[0].0, m[0].1).is_ok() {
                        return Some(done);
                    }
                }
            }
        }
    }
    None
}

/// Greedy 3-2 moves until none applies. A degree-2 edge is eliminated only
/// when that opens up a further 3-2 move, so every round loses a tetrahedron.
pub fn simplify(tri: &mut Triangulation) {
    loop {
        greedy(tri);
        if !tri.try_4_4_reducing() {
            break;
        }
    }
}

/// Repeats short random walks of 2-3 moves followed by `simplify`, keeping
/// the smallest triangulation seen. Stops after `patience` walks in a row
/// without improvement.
pub fn simplify_randomized<R: Rng>(tri: &mut Triangulation, rng: &mut R, patience: usize) {
    simplify(tri);
    let mut idle = 0;
    let mut k = 0;
    while idle < patience {
        let mut u = tri.clone();
        randomize(&mut u, rng, 1 + k % 12);
        simplify(&mut u);
        k += 1;
        if u.num_tets() < tri.num_tets() {
            *tri = u;
            idle = 0;
        } else {
            idle += 1;
        }
    }
}

fn greedy(tri: &mut Triangulation) {
    while tri.try_3_2(None) || tri.try_remove_degree_two_where(None, |t| t.try_3_2(None)) {}
}

/// Applies `count` random 2-3 moves.
pub fn randomize<R: Rng>(tri: &mut Triangulation, rng: &mut R, count: usize) {
    let mut done = 0;
    let mut attempts = 0;
    while done < count && attempts < 50 * count.max(1) {
        attempts += 1;
        let t = rng.gen_range(0..tri.tets.len());
        let f = rng.gen_range(0..4);
        if tri.move_2_3(t, f).is_ok() {
            done += 1;
        }
    }
}
