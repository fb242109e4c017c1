use serde::{Deserialize, Serialize};

use super::{Triangulation, TriangulationError};

/// One arc of a normal curve: it crosses the cusp triangle at `vertex` of
/// `tet`, entering through the side on face `in_face` and leaving through
/// the side on face `out_face` (faces named by their opposite vertex).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Passage {
    pub tet: usize,
    pub vertex: u8,
    pub in_face: u8,
    pub out_face: u8,
}

impl Passage {
    /// The corner cut off by the arc.
    pub fn corner(&self) -> usize {
        6 - (self.vertex + self.in_face + self.out_face) as usize
    }
}

/// A closed normal curve on a cusp torus, as a cyclic list of passages.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Curve(pub Vec<Passage>);

impl Curve {
    pub fn reversed(&self) -> Curve {
        Curve(
            self.0
                .iter()
                .rev()
                .map(|p| Passage { in_face: p.out_face, out_face: p.in_face, ..*p })
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Peripheral system of one cusp. The Seifert longitude is
/// `blackboard + framing_shift · meridian`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Peripheral {
    pub meridian: Curve,
    pub blackboard: Curve,
    pub framing_shift: i64,
}

impl Triangulation {
    /// Checks that consecutive passages are glued to each other.
    pub fn validate_curve(&self, c: &Curve) -> Result<(), TriangulationError> {
        let bad = |m: String| Err(TriangulationError::BrokenCurve(m));
        if c.0.is_empty() {
            return bad("empty curve".into());
        }
        for (i, p) in c.0.iter().enumerate() {
            let (v, a, b) = (p.vertex, p.in_face, p.out_face);
            if p.tet >= self.tets.len() || v > 3 || a > 3 || b > 3 || v == a || v == b || a == b {
                return bad(format!("passage {i} is malformed: {p:?}"));
            }
            let q = &c.0[(i + 1) % c.0.len()];
            let t = &self.tets[p.tet];
            let g = t.gluing[b as usize];
            if q.tet != t.neighbor[b as usize] || q.vertex as usize != g.apply(v as usize) || q.in_face as usize != g.apply(b as usize) {
                return bad(format!("passages {i} and {} do not connect", (i + 1) % c.0.len()));
            }
        }
        Ok(())
    }

    /// Whether the cusp triangle at `v` of `t` lists its corners `a, b`
    /// counterclockwise in that order.
    pub(crate) fn ccw(a: usize, b: usize, v: usize) -> bool {
        let c = 6 - a - b - v;
        super::Perm([v as u8, a as u8, b as u8, c as u8]).sign() > 0
    }
}

/// Algebraic intersection number of two curves on the same cusp.
///
/// `alpha` is read as a path in the dual graph of the cusp triangulation and
/// `beta` is pushed onto the corners it cuts off, so it runs along triangle
/// sides; crossings happen only on sides.
pub fn intersection_number(tri: &Triangulation, alpha: &Curve, beta: &Curve) -> i64 {
    use std::collections::HashMap;
    // Signed crossings of alpha through each side, keyed by the triangle it
    // leaves and the side: +1 for leaving, -1 for entering.
    let mut cross: HashMap<(usize, u8, u8), i64> = HashMap::new();
    for p in &alpha.0 {
        *cross.entry((p.tet, p.vertex, p.out_face)).or_default() += 1;
        *cross.entry((p.tet, p.vertex, p.in_face)).or_default() -= 1;
    }
    let n = beta.0.len();
    let mut total = 0i64;
    for i in 0..n {
        let p = beta.0[i];
        let q = beta.0[(i + 1) % n];
        let w = p.corner();
        // Corner of the next triangle seen from this one.
        let back = tri.tets[p.tet].gluing[p.out_face as usize].inverse();
        let w_next = back.apply(q.corner());
        if w_next == w {
            continue;
        }
        debug_assert_eq!(w_next, p.in_face as usize);
        // beta runs along side `out_face` from corner w to corner in_face.
        let along_ccw = Triangulation::ccw(w, w_next, p.vertex as usize);
        let c = cross.get(&(p.tet, p.vertex, p.out_face)).copied().unwrap_or(0);
        total += if along_ccw { c } else { -c };
    }
    total
}
