//! Rational surgery on framed links in S³: slopes, linking matrices, first
//! homology via Smith normal form, Rolfsen twists and JSJ comparison.

mod jsj;
mod slope;
mod snf;

pub use jsj::{assemble, distinct_by_volume, Gluing, JsjAssembly, Piece, PieceGeometry, Verdict};
pub use slope::{Coefficient, Slope};
pub use snf::{det, smith_normal_form, verify as verify_smith, AbelianGroup, Matrix, SmithForm};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::{instantiate_twists, Arc, Crossing, DiagramError, Endpoint, LinkDiagram, TwistBox};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SurgeryError {
    #[error("bad slope `{0}`")]
    BadSlope(String),
    #[error("integer overflow in exact arithmetic")]
    Overflow,
    #[error("matrix rows have different lengths")]
    Shape,
    #[error("Smith form check failed: {0}")]
    SmithCheck(String),
    #[error("{got} coefficients for {expected} components")]
    Length { expected: usize, got: usize },
    #[error("component index {0} out of range")]
    NoSuchComponent(usize),
    #[error("component {0} is unfilled")]
    Unfilled(usize),
    #[error("component {0} is not a marked round unknot")]
    NotMarked(usize),
    #[error("components must be distinct")]
    NotDistinct,
    #[error("diagram still has twist boxes; instantiate them first")]
    BoxesPending,
    #[error("gluing matrix has determinant {0}, expected ±1")]
    NotUnimodular(i64),
    #[error("boundary torus {torus} of piece `{piece}` is glued twice")]
    TorusReused { piece: String, torus: usize },
    #[error("piece `{piece}` has no boundary torus {torus}")]
    NoSuchTorus { piece: String, torus: usize },
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

/// A link diagram with one surgery coefficient per component.
///
/// Coefficients are measured against the Seifert framing. A component may
/// carry a mark: two arcs, on other components, that it encircles. Marked
/// components can be twisted away with [`rolfsen_twist`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FramedLink {
    diagram: LinkDiagram,
    coefficients: Vec<Coefficient>,
    marks: Vec<Option<(Arc, Arc)>>,
}

/// Off-diagonal linking numbers with the slopes kept symbolically on the diagonal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkingMatrix {
    pub lk: Vec<Vec<i64>>,
    pub diagonal: Vec<Coefficient>,
}

impl FramedLink {
    pub fn new(diagram: LinkDiagram, coefficients: Vec<Coefficient>) -> Result<Self, SurgeryError> {
        if diagram.has_pending_boxes() {
            return Err(SurgeryError::BoxesPending);
        }
        if coefficients.len() != diagram.num_components() {
            return Err(SurgeryError::Length { expected: diagram.num_components(), got: coefficients.len() });
        }
        let marks = vec![None; coefficients.len()];
        Ok(FramedLink { diagram, coefficients, marks })
    }

    /// Marks component `u` as a round unknot encircling arcs `p` and `q`.
    pub fn with_mark(mut self, u: usize, p: Arc, q: Arc) -> Result<Self, SurgeryError> {
        self.check(u)?;
        let comp = self.diagram.component_of();
        for a in [p, q] {
            match comp.get(&a) {
                Some(&c) if c != u => {}
                _ => return Err(SurgeryError::NotMarked(u)),
            }
        }
        if self.diagram.writhe(u)? != 0 || !encircles(&self.diagram, u, p, q) {
            return Err(SurgeryError::NotMarked(u));
        }
        self.marks[u] = Some((p, q));
        Ok(self)
    }

    pub fn diagram(&self) -> &LinkDiagram {
        &self.diagram
    }

    pub fn coefficients(&self) -> &[Coefficient] {
        &self.coefficients
    }

    pub fn mark(&self, u: usize) -> Option<(Arc, Arc)> {
        self.marks.get(u).copied().flatten()
    }

    pub fn num_components(&self) -> usize {
        self.coefficients.len()
    }

    fn check(&self, i: usize) -> Result<(), SurgeryError> {
        if i >= self.coefficients.len() {
            return Err(SurgeryError::NoSuchComponent(i));
        }
        Ok(())
    }

    pub fn lk(&self, i: usize, j: usize) -> Result<i64, SurgeryError> {
        Ok(self.diagram.linking_number(i, j)?)
    }

    pub fn linking_matrix(&self) -> LinkingMatrix {
        let n = self.num_components();
        let lk = (0..n)
            .map(|i| (0..n).map(|j| if i == j { 0 } else { self.diagram.linking_number(i, j).unwrap() }).collect())
            .collect();
        LinkingMatrix { lk, diagonal: self.coefficients.clone() }
    }

    /// Relation matrix: one row `p_i e_i + q_i Σ_j lk(i,j) e_j` per filled component.
    pub fn relation_matrix(&self) -> Vec<Vec<i64>> {
        let m = self.linking_matrix();
        let n = self.num_components();
        self.coefficients
            .iter()
            .enumerate()
            .filter_map(|(i, c)| c.slope().map(|s| (i, s)))
            .map(|(i, s)| (0..n).map(|j| if i == j { s.p() } else { s.q() * m.lk[i][j] }).collect())
            .collect()
    }

    /// First homology of the surgered manifold (unfilled components stay cusps).
    pub fn first_homology(&self) -> Result<AbelianGroup, SurgeryError> {
        AbelianGroup::cokernel(&self.relation_matrix(), self.num_components())
    }

    /// Reorders components: new component `k` is old component `perm[k]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<RelabelledLink, SurgeryError> {
        let n = self.num_components();
        let mut seen = vec![false; n];
        if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true)) {
            return Err(SurgeryError::Length { expected: n, got: perm.len() });
        }
        let m = self.linking_matrix();
        Ok(RelabelledLink {
            lk: perm.iter().map(|&i| perm.iter().map(|&j| m.lk[i][j]).collect()).collect(),
            coefficients: perm.iter().map(|&i| self.coefficients[i]).collect(),
        })
    }

    pub fn reversed(&self, i: usize) -> Result<FramedLink, SurgeryError> {
        self.check(i)?;
        let diagram = self.diagram.reverse_component(i)?;
        Ok(FramedLink { diagram, coefficients: self.coefficients.clone(), marks: self.marks.clone() })
    }
}

/// Linking data detached from a diagram, used to test order independence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelabelledLink {
    pub lk: Vec<Vec<i64>>,
    pub coefficients: Vec<Coefficient>,
}

impl RelabelledLink {
    pub fn first_homology(&self) -> Result<AbelianGroup, SurgeryError> {
        let n = self.coefficients.len();
        let rows: Vec<Vec<i64>> = self
            .coefficients
            .iter()
            .enumerate()
            .filter_map(|(i, c)| c.slope().map(|s| (i, s)))
            .map(|(i, s)| (0..n).map(|j| if i == j { s.p() } else { s.q() * self.lk[i][j] }).collect())
            .collect();
        AbelianGroup::cokernel(&rows, n)
    }
}

/// Whether `u` is drawn as a round loop around `p` and `q`: four crossings,
/// met along `u` as over, over, under, under up to rotation, with `p` and `q`
/// each passing under `u` once and over it once.
fn encircles(d: &LinkDiagram, u: usize, p: Arc, q: Arc) -> bool {
    let comp = d.component_of();
    let ends = d.arc_ends();
    let mut over_along_u = Vec::new();
    for &a in &d.components()[u] {
        let Some(e) = ends.get(&a) else { return false };
        let c = &d.crossings()[e.head.crossing];
        if c.strands.iter().all(|s| comp[s] == u) {
            return false;
        }
        over_along_u.push(Crossing::is_over(e.head.pos));
    }
    if over_along_u.len() != 4 {
        return false;
    }
    let runs = (0..4).filter(|&k| over_along_u[k] != over_along_u[(k + 1) % 4]).count();
    if runs != 2 {
        return false;
    }
    [p, q].iter().all(|a| {
        let e = ends[a];
        let x = |pt: Endpoint| &d.crossings()[pt.crossing];
        let other_is_u = |pt: Endpoint| x(pt).strands.iter().any(|s| comp[s] == u);
        other_is_u(e.tail) && other_is_u(e.head) && Crossing::is_over(e.tail.pos) != Crossing::is_over(e.head.pos)
    })
}

/// Applies `t` right-handed full twists to the strands encircled by `u`.
///
/// The slope of `u` goes from `p/q` to `p/(q + t·p)`, every other slope
/// `p_i/q_i` to `(p_i + t·q_i·lk(u,i)²)/q_i`, and linking numbers change by
/// `t·lk(u,i)·lk(u,j)` through the inserted crossings. When `u` ends up with
/// slope `1/0` it is deleted. So `-1/n` surgery on `u` equals `n` right-handed
/// twists with `u` removed.
pub fn rolfsen_twist(fl: &FramedLink, u: usize, t: i64) -> Result<FramedLink, SurgeryError> {
    fl.check(u)?;
    let su = fl.coefficients[u].slope().ok_or(SurgeryError::Unfilled(u))?;
    let n = fl.num_components();
    let lk_u: Vec<i64> = (0..n).map(|i| if i == u { 0 } else { fl.lk(u, i).unwrap() }).collect();
    let mut coefficients = fl.coefficients.clone();
    for (i, c) in coefficients.iter_mut().enumerate() {
        if i == u {
            *c = Slope::new(su.p(), su.q() + t * su.p())?.into();
        } else if let Coefficient::Filled(s) = c {
            *s = Slope::new(s.p() + t * s.q() * lk_u[i] * lk_u[i], s.q())?;
        }
    }
    let mut diagram = fl.diagram.clone();
    let mut marks = fl.marks.clone();
    if t != 0 {
        let (p, q) = fl.mark(u).ok_or(SurgeryError::NotMarked(u))?;
        // Orientation through the spanning disk of `u`, which the planar
        // directions of `p` and `q` need not reflect.
        let comp = diagram.component_of();
        let (i, j) = (comp[&p], comp[&q]);
        let parallel = if i == j { lk_u[i].abs() == 2 } else { lk_u[i] * lk_u[j] == 1 };
        let n_box = if parallel { t } else { -t };
        let tb = TwistBox { id: "__rolfsen".into(), strand_pair: (p, q), handedness: 1 };
        let with_box = LinkDiagram::from_pd_tuples(
            &diagram.crossings().iter().map(|c| c.strands).collect::<Vec<_>>(),
            diagram.loops(),
            vec![tb],
        )?;
        diagram = instantiate_twists(&with_box, "__rolfsen", n_box)?;
        if let Some(name) = fl.diagram.name() {
            diagram = diagram.with_name(name);
        }
    }
    if coefficients[u] == Coefficient::Filled(Slope::INFINITY) {
        // Remember one arc per surviving component to recover the order.
        let reps: Vec<Arc> = fl.diagram.components().iter().map(|c| c[0]).collect();
        let (d, relabel) = diagram.delete_component(u)?;
        let comp = d.component_of();
        let mut slots: Vec<(usize, Coefficient, Option<(Arc, Arc)>)> = (0..n)
            .filter(|&i| i != u)
            .map(|i| {
                let m = marks[i].map(|(p, q)| (relabel[&p], relabel[&q]));
                (comp[&relabel[&reps[i]]], coefficients[i], m)
            })
            .collect();
        slots.sort_by_key(|s| s.0);
        diagram = d;
        coefficients = slots.iter().map(|s| s.1).collect();
        marks = slots.iter().map(|s| s.2).collect();
    }
    let out = FramedLink { diagram, coefficients, marks };
    Ok(out)
}

/// Homotopy data of `target` in the solid torus rebuilt by 0-filling `core`
/// inside the exterior of `meridian_unknot`: `(lk(core, target),
/// lk(meridian_unknot, target), is_core)` with `is_core` iff the class is a
/// generator, i.e. `|b| = 1`.
pub fn core_homotopy_class(
    fl: &FramedLink,
    target: usize,
    core: usize,
    meridian_unknot: usize,
) -> Result<(i64, i64, bool), SurgeryError> {
    for i in [target, core, meridian_unknot] {
        fl.check(i)?;
    }
    if target == core || target == meridian_unknot || core == meridian_unknot {
        return Err(SurgeryError::NotDistinct);
    }
    let a = fl.lk(core, target)?;
    let b = fl.lk(meridian_unknot, target)?;
    Ok((a, b, b.abs() == 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::parse_pd;

    fn slope(s: &str) -> Coefficient {
        s.parse().unwrap()
    }

    #[test]
    fn unknot_lens_spaces() {
        let d = parse_pd("PD[O[1]]").unwrap();
        for (p, q, want) in [(5, 1, "Z/5"), (0, 1, "Z"), (-7, 3, "Z/7"), (1, 0, "0")] {
            let fl = FramedLink::new(d.clone(), vec![Slope::new(p, q).unwrap().into()]).unwrap();
            assert_eq!(fl.first_homology().unwrap().to_string(), want);
        }
    }

    #[test]
    fn hopf_matrix_and_homology() {
        let d = parse_pd("PD[X[1,3,2,4],X[3,1,4,2]]").unwrap();
        let fl = FramedLink::new(d, vec![slope("0"), slope("0")]).unwrap();
        assert_eq!(fl.linking_matrix().lk, vec![vec![0, 1], vec![1, 0]]);
        assert!(fl.first_homology().unwrap().is_trivial());
        let half = FramedLink::new(fl.diagram().clone(), vec![slope("3"), slope("*")]).unwrap();
        assert_eq!(half.first_homology().unwrap().to_string(), "Z");
    }

    #[test]
    fn core_class_needs_distinct_components() {
        let d = parse_pd("PD[X[1,3,2,4],X[3,1,4,2],O[5]]").unwrap();
        let fl = FramedLink::new(d, vec![slope("0"), slope("0"), slope("*")]).unwrap();
        assert_eq!(core_homotopy_class(&fl, 2, 0, 1).unwrap(), (0, 0, false));
        assert_eq!(core_homotopy_class(&fl, 0, 0, 1), Err(SurgeryError::NotDistinct));
    }

    #[test]
    fn blow_down_around_two_parallel_strands() {
        let d = crate::diagram::braid_closure(2, &[1], true).unwrap();
        let k = d.component_of()[&1];
        let u = 1 - k;
        let mut coeffs = vec![slope("0"); 2];
        coeffs[u] = slope("-1");
        let fl = FramedLink::new(d.clone(), coeffs.clone()).unwrap().with_mark(u, 4, 6).unwrap();
        // Arcs outside the belt are not encircled by it.
        assert!(FramedLink::new(d, coeffs).unwrap().with_mark(u, 1, 2).is_err());
        assert_eq!(fl.lk(u, k).unwrap(), 2);
        let before = fl.first_homology().unwrap();
        let after = rolfsen_twist(&fl, u, 1).unwrap();
        assert_eq!(after.num_components(), 1);
        assert_eq!(after.coefficients(), &[slope("4")]);
        assert_eq!(after.first_homology().unwrap(), before);
        assert_eq!(before.to_string(), "Z/4");
    }
}
