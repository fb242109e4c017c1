use super::{Arc, Crossing, DiagramError, LinkDiagram};

/// PD diagram of the closure of a braid on `strands` strands.
///
/// Letters are `±i` for the generator exchanging positions `i` and `i + 1`
/// (1-based); `+i` gives a positive crossing. With `belt`, an extra
/// unknotted component encircles all strands below the braid, linking each
/// strand once positively. Strands meeting no crossing become free loops.
pub fn braid_closure(strands: usize, word: &[i32], belt: bool) -> Result<LinkDiagram, DiagramError> {
    let bad = |msg: String| DiagramError::Parse { offset: 0, msg };
    if strands == 0 {
        return Err(bad("braid needs at least one strand".into()));
    }
    let mut next: Arc = 0;
    let mut fresh = || {
        next += 1;
        next
    };
    let bottom: Vec<Arc> = (0..strands).map(|_| fresh()).collect();
    let mut cur = bottom.clone();
    let mut crossings: Vec<Crossing> = Vec::new();
    let mut touched = vec![false; strands];

    if belt {
        // Front pass goes east over each strand, back pass goes west under.
        let first = fresh();
        let mut b = first;
        for j in 0..strands {
            let (s_in, s_out, b_out) = (cur[j], fresh(), fresh());
            crossings.push(Crossing { strands: [s_in, b_out, s_out, b], sign: 1 });
            cur[j] = s_out;
            b = b_out;
            touched[j] = true;
        }
        for j in (0..strands).rev() {
            let s_in = cur[j];
            let s_out = fresh();
            let b_out = if j == 0 { first } else { fresh() };
            crossings.push(Crossing { strands: [b, s_out, b_out, s_in], sign: 1 });
            cur[j] = s_out;
            b = b_out;
        }
    }

    for &g in word {
        let i = g.unsigned_abs() as usize;
        if g == 0 || i >= strands {
            return Err(bad(format!("generator {g} out of range for {strands} strands")));
        }
        let (l, r) = (i - 1, i);
        let (sw, se) = (cur[l], cur[r]);
        let (nw, ne) = (fresh(), fresh());
        let c = if g > 0 {
            Crossing { strands: [se, ne, nw, sw], sign: 1 }
        } else {
            Crossing { strands: [sw, se, ne, nw], sign: -1 }
        };
        crossings.push(c);
        // Left strand moves right and vice versa.
        cur[r] = ne;
        cur[l] = nw;
        touched[l] = true;
        touched[r] = true;
    }

    // Close up: the top label at each position becomes the bottom label.
    let mut loops = Vec::new();
    for j in 0..strands {
        if !touched[j] {
            loops.push(bottom[j]);
            continue;
        }
        let (top, bot) = (cur[j], bottom[j]);
        for c in crossings.iter_mut() {
            for s in c.strands.iter_mut() {
                if *s == top {
                    *s = bot;
                }
            }
        }
    }
    LinkDiagram::from_crossings(crossings, loops, Vec::new())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::parse_pd;

    #[test]
    fn trefoil_closure() {
        let d = braid_closure(2, &[1, 1, 1], false).unwrap();
        assert_eq!(d.num_components(), 1);
        assert_eq!(d.writhe(0).unwrap(), 3);
        assert_eq!(d.faces().len(), 5);
        assert_eq!(parse_pd(&d.to_string()).unwrap(), d);
    }

    #[test]
    fn belt_links_every_strand() {
        let d = braid_closure(3, &[1, -2], true).unwrap();
        assert_eq!(d.num_components(), 2);
        let lks: Vec<i64> = (1..2).map(|j| d.linking_number(0, j).unwrap()).collect();
        assert_eq!(lks, vec![3]);
        assert_eq!(d.faces().len(), d.num_crossings() + 2);
        assert_eq!(parse_pd(&d.to_string()).unwrap(), d);
    }
}
