use std::collections::BTreeMap;

use super::{Arc, LinkDiagram};

/// One side of a face: an arc and whether the boundary walk follows its
/// orientation. The face lies to the left of the walk.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FaceSide {
    pub arc: Arc,
    pub forward: bool,
}

/// A complementary region of the diagram, walked counterclockwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    pub sides: Vec<FaceSide>,
    /// `(crossing, pos_in, pos_out)` for each corner, `corners[k]` following `sides[k]`.
    pub corners: Vec<(usize, usize, usize)>,
}

impl Face {
    pub fn contains_arc(&self, a: Arc) -> bool {
        self.sides.iter().any(|s| s.arc == a)
    }

    pub fn has_side(&self, side: FaceSide) -> bool {
        self.sides.contains(&side)
    }
}

/// Other occurrence of the arc at `(crossing, pos)`.
pub(crate) fn partner_map(d: &LinkDiagram) -> BTreeMap<(usize, usize), (usize, usize)> {
    let mut occ: BTreeMap<Arc, Vec<(usize, usize)>> = BTreeMap::new();
    for (i, c) in d.crossings().iter().enumerate() {
        for (pos, &a) in c.strands.iter().enumerate() {
            occ.entry(a).or_default().push((i, pos));
        }
    }
    let mut m = BTreeMap::new();
    for v in occ.values() {
        m.insert(v[0], v[1]);
        m.insert(v[1], v[0]);
    }
    m
}

/// Enumerates faces by entering a crossing at position `j` and leaving through
/// `(j + 3) % 4`. A connected diagram with `c > 0` crossings has `c + 2` faces.
pub(crate) fn faces(d: &LinkDiagram) -> Vec<Face> {
    let partner = partner_map(d);
    let cs = d.crossings();
    let mut used = vec![[false; 4]; cs.len()];
    let mut out = Vec::new();
    for start_x in 0..cs.len() {
        for start_pos in 0..4 {
            if used[start_x][start_pos] {
                continue;
            }
            let mut face = Face { sides: Vec::new(), corners: Vec::new() };
            // Leave (x, pos) along its arc.
            let (mut x, mut pos) = (start_x, start_pos);
            loop {
                used[x][pos] = true;
                let c = &cs[x];
                face.sides.push(FaceSide { arc: c.strands[pos], forward: !c.is_incoming(pos) });
                let (y, k) = partner[&(x, pos)];
                let out_pos = (k + 3) % 4;
                face.corners.push((y, k, out_pos));
                x = y;
                pos = out_pos;
                if (x, pos) == (start_x, start_pos) {
                    break;
                }
            }
            out.push(face);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use crate::diagram::parse_pd;

    #[test]
    fn face_count_is_c_plus_two() {
        for src in [
            "PD[X[1,4,2,3],X[3,2,4,1]]",
            "PD[X[1,5,2,4],X[3,1,4,6],X[5,3,6,2]]",
            "PD[X[6,1,7,2],X[10,7,5,8],X[4,5,1,6],X[2,10,3,9],X[8,4,9,3]]",
        ] {
            let d = parse_pd(src).unwrap();
            let f = d.faces();
            assert_eq!(f.len(), d.num_crossings() + 2, "{src}");
            let sides: usize = f.iter().map(|f| f.sides.len()).sum();
            assert_eq!(sides, 4 * d.num_crossings());
        }
    }
}
