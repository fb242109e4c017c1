use super::{Curve, Passage, Perm, Peripheral, Tet, Triangulation, TriangulationError};
use crate::diagram::{Crossing, LinkDiagram};

/// Tet `T(x, k)` sits in the quadrant of crossing `x` between PD positions
/// `k` and `k + 1`. Its vertices are 0 = the point above the diagram,
/// 1 = the point below, 2 = the strand at position `k`, 3 = the strand at
/// position `k + 1`. Edge 23 is the crossing arc, shared by all four tets of
/// the crossing.
fn tet(x: usize, k: usize) -> usize {
    4 * x + k % 4
}

/// Face of a quadrant tet shared with the neighbouring quadrant across
/// position `pos`: the upper face (opposite vertex 1) across an under-strand,
/// the lower face (opposite vertex 0) across an over-strand.
fn b_face(pos: usize) -> u8 {
    if Crossing::is_over(pos % 4) {
        0
    } else {
        1
    }
}

const SWAP23: Perm = Perm([0, 1, 3, 2]);

/// Builds the 4c-tetrahedron decomposition of the exterior of a connected
/// diagram with c crossings, with two finite vertices above and below the
/// projection plane, together with meridian and blackboard longitude curves
/// for every component.
pub fn triangulate_diagram(d: &LinkDiagram) -> Result<Triangulation, TriangulationError> {
    if d.num_crossings() == 0 || !d.loops().is_empty() {
        return Err(TriangulationError::NoCrossings);
    }
    if d.has_pending_boxes() {
        return Err(crate::diagram::DiagramError::BoxesPending.into());
    }
    if !d.is_connected() {
        return Err(TriangulationError::Disconnected);
    }
    let c = d.num_crossings();
    let blank = Tet { neighbor: [0; 4], gluing: [Perm::IDENTITY; 4] };
    let mut tri = Triangulation { tets: vec![blank; 4 * c], peripheral: Vec::new() };

    for x in 0..c {
        // Quadrants k (even) and k + 1 share the over-strand at position k + 1;
        // quadrants k and k - 1 share the under-strand at position k.
        for k in [0usize, 2] {
            tri.glue(tet(x, k), 0, tet(x, k + 1), SWAP23);
            tri.glue(tet(x, k), 1, tet(x, k + 3), SWAP23);
        }
    }
    let ends = d.arc_ends();
    for e in ends.values() {
        let (x, k) = (e.tail.crossing, e.tail.pos);
        let (y, j) = (e.head.crossing, e.head.pos);
        tri.glue(tet(x, k), 3, tet(y, j + 3), SWAP23);
        tri.glue(tet(y, j), 3, tet(x, k + 3), SWAP23);
    }

    let comp_of = d.component_of();
    for (i, arcs) in d.components().iter().enumerate() {
        let s = arcs
            .iter()
            .find(|a| {
                let e = &ends[a];
                Crossing::is_over(e.tail.pos) != Crossing::is_over(e.head.pos)
            })
            .ok_or(TriangulationError::SplitComponent(i))?;
        let e = &ends[s];
        let (x1, e1) = (e.tail.crossing, e.tail.pos);
        let (x2, e2) = (e.head.crossing, e.head.pos);
        let p = |t, v, i, o| Passage { tet: t, vertex: v, in_face: i, out_face: o };
        let mut meridian = Curve(vec![
            p(tet(x1, e1), 2, b_face(e1), 3),
            p(tet(x2, e2 + 3), 3, 2, b_face(e2)),
            p(tet(x2, e2), 2, b_face(e2), 3),
            p(tet(x1, e1 + 3), 3, 2, b_face(e1)),
        ]);
        if Crossing::is_over(e2) {
            meridian = meridian.reversed();
        }

        let mut bb = Vec::with_capacity(2 * arcs.len());
        for a in arcs {
            let e = &ends[a];
            let (x1, e1) = (e.tail.crossing, e.tail.pos);
            let (x2, e2) = (e.head.crossing, e.head.pos);
            bb.push(p(tet(x1, e1), 2, b_face(e1 + 1), 3));
            bb.push(p(tet(x2, e2 + 3), 3, 2, b_face(e2 + 3)));
        }
        debug_assert!(arcs.iter().all(|a| comp_of[a] == i));
        let writhe = d.writhe(i)?;
        tri.peripheral.push(Peripheral { meridian, blackboard: Curve(bb), framing_shift: -writhe });
    }
    Ok(tri)
}
