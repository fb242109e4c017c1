use serde::Serialize;

use super::{intersection_number, Curve, Triangulation};

/// Combinatorial sanity data for a triangulation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CombinatoricsReport {
    pub tetrahedra: usize,
    pub edges: usize,
    pub gluings_involutive: bool,
    pub oriented: bool,
    /// Euler characteristic of each vertex link (0 for a cusp torus, 2 for a
    /// finite vertex).
    pub vertex_links: Vec<i64>,
    pub curves_connected: bool,
    /// Meridian-longitude intersection number per cusp.
    pub intersections: Vec<i64>,
}

impl CombinatoricsReport {
    /// All gluings consistent, every vertex a torus cusp, and each peripheral
    /// pair meeting once.
    pub fn ok(&self) -> bool {
        self.gluings_involutive
            && self.oriented
            && self.curves_connected
            && self.vertex_links.iter().all(|&x| x == 0)
            && self.edges == self.tetrahedra
            && self.intersections.iter().all(|&i| i == 1)
    }
}

pub fn check_combinatorics(tri: &Triangulation) -> CombinatoricsReport {
    let mut involutive = true;
    let mut oriented = true;
    for (t, tet) in tri.tets.iter().enumerate() {
        for f in 0..4 {
            let p = tet.gluing[f];
            let u = tet.neighbor[f];
            let g = p.apply(f);
            let back = &tri.tets[u];
            if !p.is_valid() || back.neighbor[g] != t || back.gluing[g] != p.inverse() {
                involutive = false;
            }
            if p.sign() != -1 {
                oriented = false;
            }
        }
    }
    let curves_connected = tri
        .peripheral
        .iter()
        .all(|p| tri.validate_curve(&p.meridian).is_ok() && tri.validate_curve(&p.blackboard).is_ok());
    let intersections = if curves_connected {
        tri.peripheral.iter().map(|p| intersection_number(tri, &p.meridian, &p.blackboard)).collect()
    } else {
        Vec::new()
    };
    CombinatoricsReport {
        tetrahedra: tri.tets.len(),
        edges: tri.edge_classes().len(),
        gluings_involutive: involutive,
        oriented,
        vertex_links: tri.vertex_link_euler(),
        curves_connected,
        intersections,
    }
}

const PRIME: i64 = 2_147_483_647;

fn rank_mod_p(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<i64>> = rows.iter().map(|r| r.iter().map(|&x| x.rem_euclid(PRIME)).collect()).collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| m[r][c] != 0) else { continue };
        m.swap(rank, p);
        let inv = pow_mod(m[rank][c], PRIME - 2);
        for r in 0..m.len() {
            if r != rank && m[r][c] != 0 {
                let k = m[r][c] * inv % PRIME;
                for j in c..cols {
                    m[r][j] = (m[r][j] - k * m[rank][j]).rem_euclid(PRIME);
                }
            }
        }
        rank += 1;
    }
    rank
}

fn pow_mod(mut b: i64, mut e: i64) -> i64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % PRIME;
        }
        b = b * b % PRIME;
        e >>= 1;
    }
    r
}

impl Triangulation {
    /// Faces as dual edges: index of the glued face pair and the sign of
    /// crossing it from `(t, f)`.
    fn dual_edges(&self) -> (std::collections::HashMap<(usize, usize), (usize, i64)>, usize) {
        let mut map = std::collections::HashMap::new();
        let mut n = 0;
        for (t, tet) in self.tets.iter().enumerate() {
            for f in 0..4 {
                if map.contains_key(&(t, f)) {
                    continue;
                }
                let other = (tet.neighbor[f], tet.gluing[f].apply(f));
                map.insert((t, f), (n, 1));
                if other != (t, f) {
                    map.insert(other, (n, -1));
                }
                n += 1;
            }
        }
        (map, n)
    }

    /// Homology class of a curve as a 1-chain of the dual complex.
    pub fn curve_chain(&self, c: &Curve) -> Vec<i64> {
        let (map, n) = self.dual_edges();
        let mut v = vec![0; n];
        for p in &c.0 {
            let (i, s) = map[&(p.tet, p.out_face as usize)];
            v[i] += s;
        }
        v
    }

    /// Boundaries of the dual 2-cells: the faces met walking around each edge.
    fn dual_boundaries(&self) -> Vec<Vec<i64>> {
        let (map, n) = self.dual_edges();
        let ec = self.edge_classes();
        ec.members
            .iter()
            .map(|m| {
                let mut v = vec![0; n];
                let (t0, e0) = m[0];
                let (a0, b0) = super::EDGES[e0];
                let (mut t, mut a, mut b) = (t0, a0, b0);
                // Leave through the face opposite the smaller remaining vertex.
                let mut f = (0..4).find(|&x| x != a && x != b).unwrap();
                for _ in 0..=m.len() {
                    let (i, s) = map[&(t, f)];
                    v[i] += s;
                    let p = self.tets[t].gluing[f];
                    let u = self.tets[t].neighbor[f];
                    let entry = p.apply(f);
                    let (na, nb) = (p.apply(a), p.apply(b));
                    t = u;
                    a = na;
                    b = nb;
                    f = (0..4).find(|&x| x != a && x != b && x != entry).unwrap();
                    if t == t0 && [a, b] == [a0, b0] && f == (0..4).find(|&x| x != a0 && x != b0).unwrap() {
                        break;
                    }
                }
                v
            })
            .collect()
    }

    /// Checks in the homology of the exterior that the meridians are
    /// independent and that each Seifert longitude equals
    /// `Σ_j lk(i, j) μ_j`.
    pub fn peripheral_homology_ok(&self, lk: &[Vec<i64>]) -> bool {
        let bnd = self.dual_boundaries();
        let base = rank_mod_p(&bnd);
        let mer: Vec<Vec<i64>> = self.peripheral.iter().map(|p| self.curve_chain(&p.meridian)).collect();
        let mut with_mer = bnd.clone();
        with_mer.extend(mer.iter().cloned());
        if rank_mod_p(&with_mer) != base + mer.len() {
            return false;
        }
        self.peripheral.iter().enumerate().all(|(i, p)| {
            let mut v = self.curve_chain(&p.blackboard);
            for (j, m) in mer.iter().enumerate() {
                let k = if i == j { p.framing_shift } else { -lk[i][j] };
                for (x, y) in v.iter_mut().zip(m) {
                    *x += k * y;
                }
            }
            let mut rows = bnd.clone();
            rows.push(v);
            rank_mod_p(&rows) == base
        })
    }
}
