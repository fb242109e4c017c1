//! Oriented link diagrams given by PD codes, with optional two-strand twist boxes.
//!
//! PD convention: every crossing is a 4-tuple of arc labels listed
//! counterclockwise, starting at the incoming under-strand. Positions 0 and 2
//! carry the under-strand (0 in, 2 out), positions 1 and 3 the over-strand.
//!
//! ```text
//!            2 (under, out)
//!                 |
//!   3 ----------- | ----------> 1      over-strand from 3 to 1: sign +1
//!                 |                    over-strand from 1 to 3: sign -1
//!            0 (under, in)
//! ```

mod braid;
mod faces;
mod pd;
mod twist;

pub use braid::braid_closure;
pub use faces::{Face, FaceSide};
pub use pd::{parse_pd, parse_pd_json, DiagramJson};
pub use twist::instantiate_twists;

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Arc label as it appears in a PD code.
pub type Arc = u32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagramError {
    #[error("parse error at offset {offset}: {msg}")]
    Parse { offset: usize, msg: String },
    #[error("arc {arc} is used {count} times (expected exactly 2)")]
    ArcCount { arc: Arc, count: usize },
    #[error("arc {arc} cannot be oriented consistently (crossing {crossing})")]
    Orientation { arc: Arc, crossing: usize },
    #[error("component through arc {arc} does not close up")]
    OpenComponent { arc: Arc },
    #[error("unknown twist box `{0}`")]
    UnknownBox(String),
    #[error("duplicate twist box `{0}`")]
    DuplicateBox(String),
    #[error("twist box `{id}`: {msg}")]
    BadBox { id: String, msg: String },
    #[error("diagram still has uninstantiated twist boxes")]
    BoxesPending,
    #[error("component {0} crosses itself")]
    SelfCrossing(usize),
    #[error("component index {0} out of range")]
    NoSuchComponent(usize),
    #[error("linking number needs two distinct components (got {0} twice)")]
    SameComponent(usize),
}

/// One crossing: arc labels in PD order plus the derived sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Crossing {
    pub strands: [Arc; 4],
    pub sign: i8,
}

impl Crossing {
    /// Position (1 or 3) at which the over-strand enters.
    pub fn over_in(&self) -> usize {
        if self.sign > 0 {
            3
        } else {
            1
        }
    }

    pub fn over_out(&self) -> usize {
        4 - self.over_in()
    }

    pub fn is_over(pos: usize) -> bool {
        pos % 2 == 1
    }

    /// Whether the strand at `pos` is entering the crossing.
    pub fn is_incoming(&self, pos: usize) -> bool {
        pos == 0 || pos == self.over_in()
    }

    /// The position on the same strand across the crossing.
    pub fn through(pos: usize) -> usize {
        (pos + 2) % 4
    }
}

/// A two-strand twist region with an integer parameter left symbolic until
/// [`instantiate_twists`] is called.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TwistBox {
    pub id: String,
    pub strand_pair: (Arc, Arc),
    /// Sign of every crossing produced for a positive parameter.
    pub handedness: i8,
}

/// Where an arc starts or ends: crossing index and PD position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Endpoint {
    pub crossing: usize,
    pub pos: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ArcEnds {
    pub tail: Endpoint,
    pub head: Endpoint,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkDiagram {
    crossings: Vec<Crossing>,
    loops: Vec<Arc>,
    twist_boxes: Vec<TwistBox>,
    /// Arcs of each component in the order met when travelling along it,
    /// starting from the smallest label. Components are sorted by that label.
    components: Vec<Vec<Arc>>,
    name: Option<String>,
}

impl LinkDiagram {
    /// Builds a diagram from raw PD tuples, deriving every crossing sign from
    /// the arc incidences.
    pub fn from_pd_tuples(
        tuples: &[[Arc; 4]],
        loops: &[Arc],
        boxes: Vec<TwistBox>,
    ) -> Result<Self, DiagramError> {
        let signs = orient(tuples, loops)?;
        let crossings = tuples
            .iter()
            .zip(signs)
            .map(|(&strands, sign)| Crossing { strands, sign })
            .collect();
        Self::from_crossings(crossings, loops.to_vec(), boxes)
    }

    /// Builds a diagram from crossings whose signs are already known.
    pub(crate) fn from_crossings(
        crossings: Vec<Crossing>,
        mut loops: Vec<Arc>,
        twist_boxes: Vec<TwistBox>,
    ) -> Result<Self, DiagramError> {
        loops.sort_unstable();
        let mut d = LinkDiagram {
            crossings,
            loops,
            twist_boxes,
            components: Vec::new(),
            name: None,
        };
        d.components = d.trace_components()?;
        d.check_boxes()?;
        Ok(d)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn loops(&self) -> &[Arc] {
        &self.loops
    }

    pub fn twist_boxes(&self) -> &[TwistBox] {
        &self.twist_boxes
    }

    pub fn components(&self) -> &[Vec<Arc>] {
        &self.components
    }

    pub fn num_components(&self) -> usize {
        self.components.len()
    }

    pub fn num_crossings(&self) -> usize {
        self.crossings.len()
    }

    pub fn arcs(&self) -> BTreeSet<Arc> {
        self.components.iter().flatten().copied().collect()
    }

    pub fn max_arc(&self) -> Arc {
        self.arcs().into_iter().next_back().unwrap_or(0)
    }

    /// Component index of every arc.
    pub fn component_of(&self) -> BTreeMap<Arc, usize> {
        let mut map = BTreeMap::new();
        for (i, comp) in self.components.iter().enumerate() {
            for &a in comp {
                map.insert(a, i);
            }
        }
        map
    }

    /// Tail and head endpoint of every arc that touches a crossing.
    pub fn arc_ends(&self) -> BTreeMap<Arc, ArcEnds> {
        let mut tails = BTreeMap::new();
        let mut heads = BTreeMap::new();
        for (i, c) in self.crossings.iter().enumerate() {
            for pos in 0..4 {
                let e = Endpoint { crossing: i, pos };
                if c.is_incoming(pos) {
                    heads.insert(c.strands[pos], e);
                } else {
                    tails.insert(c.strands[pos], e);
                }
            }
        }
        tails
            .into_iter()
            .map(|(a, tail)| (a, ArcEnds { tail, head: heads[&a] }))
            .collect()
    }

    pub fn has_pending_boxes(&self) -> bool {
        !self.twist_boxes.is_empty()
    }

    fn check_component(&self, i: usize) -> Result<(), DiagramError> {
        if i >= self.components.len() {
            return Err(DiagramError::NoSuchComponent(i));
        }
        Ok(())
    }

    /// Half the signed count of crossings between components `i` and `j`.
    pub fn linking_number(&self, i: usize, j: usize) -> Result<i64, DiagramError> {
        self.check_component(i)?;
        self.check_component(j)?;
        if i == j {
            return Err(DiagramError::SameComponent(i));
        }
        if self.has_pending_boxes() {
            return Err(DiagramError::BoxesPending);
        }
        let comp = self.component_of();
        let mut sum = 0i64;
        for c in &self.crossings {
            let under = comp[&c.strands[0]];
            let over = comp[&c.strands[1]];
            if (under == i && over == j) || (under == j && over == i) {
                sum += c.sign as i64;
            }
        }
        debug_assert!(sum % 2 == 0, "odd crossing count between two closed components");
        Ok(sum / 2)
    }

    /// Signed count of self-crossings of component `i`.
    pub fn writhe(&self, i: usize) -> Result<i64, DiagramError> {
        self.check_component(i)?;
        if self.has_pending_boxes() {
            return Err(DiagramError::BoxesPending);
        }
        let comp = self.component_of();
        Ok(self
            .crossings
            .iter()
            .filter(|c| comp[&c.strands[0]] == i && comp[&c.strands[1]] == i)
            .map(|c| c.sign as i64)
            .sum())
    }

    /// Reverses the orientation of component `i`.
    ///
    /// Where the component is the under-strand the tuple is rotated so it
    /// still starts at the incoming under-arc; where it is the over-strand
    /// the crossing sign flips. A component that never passes under anything
    /// has its labels re-ordered so that parsing recovers the new orientation.
    pub fn reverse_component(&self, i: usize) -> Result<LinkDiagram, DiagramError> {
        self.check_component(i)?;
        let comp = self.component_of();
        let mine = |a: Arc| comp.get(&a) == Some(&i);
        let mut crossings = self.crossings.clone();
        let mut passes_under = false;
        for c in crossings.iter_mut() {
            let under_mine = mine(c.strands[0]);
            let over_mine = mine(c.strands[1]);
            if under_mine {
                passes_under = true;
                let s = c.strands;
                c.strands = [s[2], s[3], s[0], s[1]];
            }
            // Rotating by two swaps the roles of positions 1 and 3, which
            // flips the sign exactly when only one strand is reversed.
            if under_mine != over_mine {
                c.sign = -c.sign;
            }
        }
        if !passes_under && !self.crossings.is_empty() {
            let arcs = &self.components[i];
            let mut sorted: Vec<Arc> = arcs.clone();
            sorted.sort_unstable();
            // Traversal order reversed, then labelled increasingly.
            let mut rev: Vec<Arc> = arcs.iter().rev().copied().collect();
            rev.rotate_right(1);
            let relabel: BTreeMap<Arc, Arc> = rev.into_iter().zip(sorted).collect();
            for c in crossings.iter_mut() {
                for s in c.strands.iter_mut() {
                    if let Some(&n) = relabel.get(s) {
                        *s = n;
                    }
                }
            }
        }
        let mut d = LinkDiagram::from_crossings(crossings, self.loops.clone(), self.twist_boxes.clone())?;
        d.name = self.name.clone();
        Ok(d)
    }

    /// Removes component `i`, which must have no self-crossings. Returns the
    /// new diagram and the relabelling applied to surviving arcs (the outgoing
    /// arc at each removed crossing is merged into the incoming one).
    pub fn delete_component(&self, i: usize) -> Result<(LinkDiagram, BTreeMap<Arc, Arc>), DiagramError> {
        self.check_component(i)?;
        let comp = self.component_of();
        if self.crossings.iter().any(|c| comp[&c.strands[0]] == i && comp[&c.strands[1]] == i) {
            return Err(DiagramError::SelfCrossing(i));
        }
        let mut relabel: BTreeMap<Arc, Arc> = BTreeMap::new();
        let resolve = |m: &BTreeMap<Arc, Arc>, mut a: Arc| {
            while let Some(&b) = m.get(&a) {
                a = b;
            }
            a
        };
        let mut kept = Vec::new();
        let mut dropped = Vec::new();
        for c in &self.crossings {
            if comp[&c.strands[0]] == i || comp[&c.strands[1]] == i {
                dropped.push(*c);
            } else {
                kept.push(*c);
            }
        }
        let mut loops: Vec<Arc> = self.loops.iter().copied().filter(|&l| comp[&l] != i).collect();
        for c in dropped {
            let (pin, pout) = if comp[&c.strands[0]] == i {
                (c.strands[c.over_in()], c.strands[c.over_out()])
            } else {
                (c.strands[0], c.strands[2])
            };
            let (pin, pout) = (resolve(&relabel, pin), resolve(&relabel, pout));
            if pin == pout {
                loops.push(pin);
            } else {
                relabel.insert(pout, pin);
            }
        }
        for c in kept.iter_mut() {
            for s in c.strands.iter_mut() {
                *s = resolve(&relabel, *s);
            }
        }
        let full: BTreeMap<Arc, Arc> = comp
            .keys()
            .filter(|a| comp[a] != i)
            .map(|&a| (a, resolve(&relabel, a)))
            .collect();
        // A loop may have been recorded before a later merge renamed it.
        let mut loops: Vec<Arc> = loops.into_iter().map(|l| resolve(&relabel, l)).collect();
        loops.sort_unstable();
        loops.dedup();
        let boxes = self
            .twist_boxes
            .iter()
            .map(|b| TwistBox { strand_pair: (full[&b.strand_pair.0], full[&b.strand_pair.1]), ..b.clone() })
            .collect();
        let mut d = LinkDiagram::from_crossings(kept, loops, boxes)?;
        d.name = self.name.clone();
        Ok((d, full))
    }

    /// Faces of the (connected, crossed) diagram; see [`faces`].
    pub fn faces(&self) -> Vec<Face> {
        faces::faces(self)
    }

    /// Whether the underlying 4-valent graph is connected and every
    /// component has a crossing.
    pub fn is_connected(&self) -> bool {
        if self.crossings.is_empty() || !self.loops.is_empty() {
            return self.crossings.is_empty() && self.loops.len() <= 1;
        }
        let n = self.crossings.len();
        let mut at: BTreeMap<Arc, Vec<usize>> = BTreeMap::new();
        for (i, c) in self.crossings.iter().enumerate() {
            for &a in &c.strands {
                at.entry(a).or_default().push(i);
            }
        }
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(i) = queue.pop_front() {
            for a in &self.crossings[i].strands {
                for &j in &at[a] {
                    if !seen[j] {
                        seen[j] = true;
                        queue.push_back(j);
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    fn trace_components(&self) -> Result<Vec<Vec<Arc>>, DiagramError> {
        let mut count: BTreeMap<Arc, usize> = BTreeMap::new();
        for c in &self.crossings {
            for &a in &c.strands {
                *count.entry(a).or_default() += 1;
            }
        }
        for (&a, &n) in &count {
            if n != 2 {
                return Err(DiagramError::ArcCount { arc: a, count: n });
            }
        }
        for &l in &self.loops {
            if count.contains_key(&l) {
                return Err(DiagramError::ArcCount { arc: l, count: count[&l] + 1 });
            }
        }
        let mut next: BTreeMap<Arc, Arc> = BTreeMap::new();
        let mut tails: BTreeMap<Arc, usize> = BTreeMap::new();
        for (ci, c) in self.crossings.iter().enumerate() {
            for pos in 0..4 {
                if c.is_incoming(pos) {
                    if next.insert(c.strands[pos], c.strands[Crossing::through(pos)]).is_some() {
                        return Err(DiagramError::Orientation { arc: c.strands[pos], crossing: ci });
                    }
                } else if tails.insert(c.strands[pos], ci).is_some() {
                    return Err(DiagramError::Orientation { arc: c.strands[pos], crossing: ci });
                }
            }
        }
        let mut comps: Vec<Vec<Arc>> = Vec::new();
        let mut used = BTreeSet::new();
        for &start in count.keys() {
            if used.contains(&start) {
                continue;
            }
            let mut comp = vec![start];
            used.insert(start);
            let mut a = start;
            loop {
                let n = *next.get(&a).ok_or(DiagramError::OpenComponent { arc: a })?;
                if n == start {
                    break;
                }
                if !used.insert(n) {
                    return Err(DiagramError::OpenComponent { arc: n });
                }
                comp.push(n);
                a = n;
            }
            comps.push(comp);
        }
        for &l in &self.loops {
            comps.push(vec![l]);
        }
        comps.sort_by_key(|c| *c.iter().min().unwrap());
        Ok(comps)
    }

    fn check_boxes(&self) -> Result<(), DiagramError> {
        let arcs = self.arcs();
        let mut ids = BTreeSet::new();
        for b in &self.twist_boxes {
            if !ids.insert(b.id.clone()) {
                return Err(DiagramError::DuplicateBox(b.id.clone()));
            }
            let (p, q) = b.strand_pair;
            if p == q {
                return Err(DiagramError::BadBox { id: b.id.clone(), msg: "both strands are the same arc".into() });
            }
            for a in [p, q] {
                if !arcs.contains(&a) {
                    return Err(DiagramError::BadBox { id: b.id.clone(), msg: format!("arc {a} not in diagram") });
                }
            }
            if b.handedness != 1 && b.handedness != -1 {
                return Err(DiagramError::BadBox { id: b.id.clone(), msg: "handedness must be +1 or -1".into() });
            }
        }
        Ok(())
    }
}

/// Derives crossing signs from the arc incidences of raw PD tuples.
fn orient(tuples: &[[Arc; 4]], loops: &[Arc]) -> Result<Vec<i8>, DiagramError> {
    let mut occ: BTreeMap<Arc, Vec<(usize, usize)>> = BTreeMap::new();
    for (i, t) in tuples.iter().enumerate() {
        for (pos, &a) in t.iter().enumerate() {
            occ.entry(a).or_default().push((i, pos));
        }
    }
    for (&a, v) in &occ {
        if v.len() != 2 {
            return Err(DiagramError::ArcCount { arc: a, count: v.len() });
        }
    }
    for &l in loops {
        if occ.contains_key(&l) {
            return Err(DiagramError::ArcCount { arc: l, count: occ[&l].len() + 1 });
        }
    }
    // incoming[i][pos]: Some(true) if that occurrence is the head of its arc.
    let mut incoming: Vec<[Option<bool>; 4]> = vec![[Some(true), None, Some(false), None]; tuples.len()];
    let mut queue: VecDeque<(usize, usize)> = VecDeque::new();
    for i in 0..tuples.len() {
        queue.push_back((i, 0));
        queue.push_back((i, 2));
    }
    let mut next_seed = 0usize;
    loop {
        while let Some((i, pos)) = queue.pop_front() {
            let val = incoming[i][pos].unwrap();
            let a = tuples[i][pos];
            let (j, q) = *occ[&a].iter().find(|&&o| o != (i, pos)).unwrap_or(&(i, pos));
            let mut implied = vec![((j, q), !val)];
            if Crossing::is_over(pos) {
                implied.push(((i, 4 - pos), !val));
            }
            for ((j, q), v) in implied {
                match incoming[j][q] {
                    Some(existing) if existing != v => {
                        return Err(DiagramError::Orientation { arc: tuples[j][q], crossing: j })
                    }
                    Some(_) => {}
                    None => {
                        incoming[j][q] = Some(v);
                        queue.push_back((j, q));
                    }
                }
            }
        }
        // Components that never pass under anything: orient by label order.
        while next_seed < tuples.len() && incoming[next_seed][1].is_some() {
            next_seed += 1;
        }
        if next_seed == tuples.len() {
            break;
        }
        let t = tuples[next_seed];
        let (b, d) = (t[1], t[3]);
        let d_in = if b == d + 1 {
            true
        } else if d == b + 1 {
            false
        } else {
            d > b
        };
        incoming[next_seed][3] = Some(d_in);
        queue.push_back((next_seed, 3));
    }
    Ok(incoming
        .iter()
        .map(|inc| if inc[3] == Some(true) { 1 } else { -1 })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn hopf() -> LinkDiagram {
        parse_pd("PD[X[1,4,2,3],X[3,2,4,1]]").unwrap()
    }

    #[test]
    fn hopf_components_and_signs() {
        let d = hopf();
        assert_eq!(d.num_components(), 2);
        assert_eq!(d.num_crossings(), 2);
        assert_eq!(d.components(), &[vec![1, 2], vec![3, 4]]);
        let lk = d.linking_number(0, 1).unwrap();
        assert_eq!(lk.abs(), 1);
        assert_eq!(d.linking_number(1, 0).unwrap(), lk);
    }

    #[test]
    fn self_linking_rejected() {
        assert_eq!(hopf().linking_number(1, 1), Err(DiagramError::SameComponent(1)));
        assert!(matches!(hopf().writhe(5), Err(DiagramError::NoSuchComponent(5))));
    }

    #[test]
    fn reverse_negates_lk_and_is_involutive() {
        let d = hopf();
        let r = d.reverse_component(0).unwrap();
        assert_eq!(r.linking_number(0, 1).unwrap(), -d.linking_number(0, 1).unwrap());
        assert_eq!(r.reverse_component(0).unwrap(), d);
    }

    #[test]
    fn arc_used_three_times_is_reported() {
        let err = LinkDiagram::from_pd_tuples(&[[1, 1, 2, 1]], &[], vec![]).unwrap_err();
        assert_eq!(err, DiagramError::ArcCount { arc: 1, count: 3 });
    }

    #[test]
    fn unknot_loop() {
        let d = parse_pd("PD[O[1]]").unwrap();
        assert_eq!(d.num_components(), 1);
        assert_eq!(d.num_crossings(), 0);
        assert_eq!(d.writhe(0).unwrap(), 0);
    }
}
