use super::{Arc, Crossing, DiagramError, FaceSide, LinkDiagram};

/// Replaces the twist box `id` by `2|n|` crossings.
///
/// The box is realised in the face to the left of its first arc if that face
/// also touches the second arc, otherwise in the face to its right. Original
/// arc labels survive on the tail side of each strand; every other piece gets
/// a fresh label above the current maximum.
pub fn instantiate_twists(d: &LinkDiagram, id: &str, n: i64) -> Result<LinkDiagram, DiagramError> {
    let idx = d
        .twist_boxes()
        .iter()
        .position(|b| b.id == id)
        .ok_or_else(|| DiagramError::UnknownBox(id.to_string()))?;
    let tb = d.twist_boxes()[idx].clone();
    let mut boxes = d.twist_boxes().to_vec();
    boxes.remove(idx);
    let mut crossings = d.crossings().to_vec();
    if n == 0 {
        return finish(d, crossings, boxes);
    }
    let bad = |msg: &str| DiagramError::BadBox { id: id.to_string(), msg: msg.to_string() };
    let (p, q) = tb.strand_pair;
    let ends = d.arc_ends();
    if !ends.contains_key(&p) || !ends.contains_key(&q) {
        return Err(bad("twist boxes on crossingless loops are not supported"));
    }

    let (p_walk_fwd, q_walk_fwd) = chart(d, p, q).map_err(bad)?;

    // Local chart: p on the left wall walked downward, q on the right wall
    // walked upward, the face in between.
    let p_up = !p_walk_fwd;
    let q_up = q_walk_fwd;
    let geometric = tb.handedness as i64 * n.signum() * if p_up == q_up { 1 } else { -1 };
    let m = 2 * n.unsigned_abs() as usize;

    let mut fresh = d.max_arc();
    let mut pieces = |orig: Arc, up: bool| -> Vec<Arc> {
        let new: Vec<Arc> = (1..=m as Arc).map(|k| fresh + k).collect();
        fresh += m as Arc;
        if up {
            std::iter::once(orig).chain(new).collect()
        } else {
            new.into_iter().chain(std::iter::once(orig)).collect()
        }
    };
    let pp = pieces(p, p_up);
    let qp = pieces(q, q_up);
    // The head end of each original arc now sees the far piece.
    for (orig, v, up) in [(p, &pp, p_up), (q, &qp, q_up)] {
        let h = ends[&orig].head;
        crossings[h.crossing].strands[h.pos] = if up { v[m] } else { v[0] };
    }

    // strand 0 = p, 1 = q; `left` is the strand currently in the left slot.
    let strands = [(&pp, p_up), (&qp, q_up)];
    let mut left = 0usize;
    for k in 0..m {
        let right = 1 - left;
        let (lp, lup) = strands[left];
        let (rp, rup) = strands[right];
        // Counterclockwise from NE: NE, NW, SW, SE.
        let ne = lp[k + 1];
        let nw = rp[k + 1];
        let sw = lp[k];
        let se = rp[k];
        let ring = [ne, nw, sw, se];
        // Under strand and the ring index of its incoming end.
        let start = if geometric > 0 {
            if rup {
                3
            } else {
                1
            }
        } else if lup {
            2
        } else {
            0
        };
        let strands4 = [ring[start], ring[(start + 1) % 4], ring[(start + 2) % 4], ring[(start + 3) % 4]];
        // Over strand enters at the ring slot opposite its exit.
        let over_is_left = geometric > 0;
        let over_in_ring = match (over_is_left, if over_is_left { lup } else { rup }) {
            (true, true) => 2,
            (true, false) => 0,
            (false, true) => 3,
            (false, false) => 1,
        };
        let over_in_pos = (over_in_ring + 4 - start) % 4;
        let sign = if over_in_pos == 3 { 1 } else { -1 };
        debug_assert_eq!(sign as i64, tb.handedness as i64 * n.signum());
        crossings.push(Crossing { strands: strands4, sign });
        left = right;
    }
    finish(d, crossings, boxes)
}

/// Directions of the face walk along `p` and `q` in the face that hosts a
/// twist region between them.
fn chart(d: &LinkDiagram, p: Arc, q: Arc) -> Result<(bool, bool), &'static str> {
    let faces = d.faces();
    let pick = [true, false].iter().find_map(|&fwd| {
        faces
            .iter()
            .find(|f| f.has_side(FaceSide { arc: p, forward: fwd }) && f.contains_arc(q))
            .map(|f| (fwd, f))
    });
    let (p_walk_fwd, face) = pick.ok_or("strands do not share a face")?;
    let q_walk_fwd = face.sides.iter().find(|s| s.arc == q).unwrap().forward;
    Ok((p_walk_fwd, q_walk_fwd))
}

fn finish(d: &LinkDiagram, crossings: Vec<Crossing>, boxes: Vec<super::TwistBox>) -> Result<LinkDiagram, DiagramError> {
    let out = LinkDiagram::from_crossings(crossings, d.loops().to_vec(), boxes)?;
    Ok(match d.name() {
        Some(n) => out.with_name(n),
        None => out,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::parse_pd;

    #[test]
    fn zero_twists_only_drops_the_box() {
        let d = parse_pd("PD[X[1,4,2,3],X[3,2,4,1],T[g,1,3,1]]").unwrap();
        let e = instantiate_twists(&d, "g", 0).unwrap();
        assert_eq!(e.crossings(), d.crossings());
        assert!(!e.has_pending_boxes());
    }

    #[test]
    fn twist_changes_linking_by_n() {
        let d = parse_pd("PD[X[1,4,2,3],X[3,2,4,1],T[g,1,3,1]]").unwrap();
        let base = instantiate_twists(&d, "g", 0).unwrap().linking_number(0, 1).unwrap();
        for n in [-3i64, -1, 1, 2] {
            let e = instantiate_twists(&d, "g", n).unwrap();
            assert_eq!(e.num_crossings(), 2 + 2 * n.unsigned_abs() as usize);
            assert_eq!(e.linking_number(0, 1).unwrap(), base + n);
            let twist_signs: Vec<i8> = e.crossings()[2..].iter().map(|c| c.sign).collect();
            assert!(twist_signs.iter().all(|&s| s as i64 == n.signum()));
            assert!(e.arcs().contains(&1) && e.arcs().contains(&3));
        }
    }

    #[test]
    fn unknown_box() {
        let d = parse_pd("PD[X[1,4,2,3],X[3,2,4,1]]").unwrap();
        assert_eq!(instantiate_twists(&d, "h", 1), Err(DiagramError::UnknownBox("h".into())));
    }
}
