use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::GeometryError;
use crate::triangulation::{edge_index, Curve, Triangulation, EDGES, EDGE_SHAPE};

/// What to do with one cusp.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Filling {
    Complete,
    /// Fill along `p·μ + q·λ`, with λ the Seifert longitude.
    Slope { p: i64, q: i64 },
}

impl Filling {
    pub fn slope(p: i64, q: i64) -> Filling {
        Filling::Slope { p, q }
    }
}

impl std::fmt::Display for Filling {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Filling::Complete => write!(f, "*"),
            Filling::Slope { p, q } => write!(f, "{p}/{q}"),
        }
    }
}

/// `Σ a·log z_t + b·log(1 - z_t) + k·iπ`, stored as `t -> (a, b)` and `k`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LogForm {
    pub terms: BTreeMap<usize, (i64, i64)>,
    pub pi_count: i64,
}

impl LogForm {
    /// Adds `sign` times the log of shape parameter `which` of tet `t`:
    /// 0 for z, 1 for 1/(1-z), 2 for 1 - 1/z.
    fn add_shape(&mut self, t: usize, which: usize, sign: i64) {
        let e = self.terms.entry(t).or_default();
        match which {
            0 => e.0 += sign,
            1 => e.1 -= sign,
            _ => {
                e.0 -= sign;
                e.1 += sign;
                self.pi_count += sign;
            }
        }
    }

    fn add_scaled(&mut self, other: &LogForm, k: i64) {
        for (&t, &(a, b)) in &other.terms {
            let e = self.terms.entry(t).or_default();
            e.0 += k * a;
            e.1 += k * b;
        }
        self.pi_count += k * other.pi_count;
    }

    fn scaled(&self, k: i64) -> LogForm {
        let mut out = LogForm::default();
        out.add_scaled(self, k);
        out
    }

    pub fn eval(&self, log_z: &[Complex64], log_1mz: &[Complex64]) -> Complex64 {
        let mut s = Complex64::new(0.0, PI * self.pi_count as f64);
        for (&t, &(a, b)) in &self.terms {
            s += log_z[t] * a as f64 + log_1mz[t] * b as f64;
        }
        s
    }

    /// Partial derivatives with respect to `log z_t`.
    pub fn gradient_into(&self, z: &[Complex64], row: &mut [Complex64]) {
        for (&t, &(a, b)) in &self.terms {
            row[t] += a as f64 - b as f64 * z[t] / (1.0 - z[t]);
        }
    }
}

/// A row `form = target` of the gluing system.
#[derive(Debug, Clone, PartialEq)]
pub struct Equation {
    pub form: LogForm,
    pub target: Complex64,
}

impl Equation {
    pub fn defect(&self, log_z: &[Complex64], log_1mz: &[Complex64]) -> Complex64 {
        self.form.eval(log_z, log_1mz) - self.target
    }
}

/// Edge, completeness and filling equations of an ideal triangulation.
#[derive(Debug, Clone)]
pub struct GluingSystem {
    pub triangulation: Triangulation,
    pub fillings: Vec<Filling>,
    /// One equation per edge class, all equal to 2πi.
    pub edges: Vec<Equation>,
    /// Edge classes left out of the square subsystem, one per cusp.
    pub dropped: Vec<usize>,
    /// Log-holonomy of meridian and Seifert longitude per cusp.
    pub holonomy: Vec<(LogForm, LogForm)>,
    /// Cusp equations, one per cusp.
    pub cusp_equations: Vec<Equation>,
}

/// Log-holonomy of a curve: each passage contributes the log of the shape
/// on the edge at the corner it cuts, positive when it turns counterclockwise.
pub fn curve_holonomy(c: &Curve) -> LogForm {
    let mut f = LogForm::default();
    for p in &c.0 {
        let (v, a, b) = (p.vertex as usize, p.in_face as usize, p.out_face as usize);
        let w = p.corner();
        let sign = if Triangulation::ccw(a, b, v) { -1 } else { 1 };
        f.add_shape(p.tet, EDGE_SHAPE[edge_index(v, w)], sign);
    }
    f
}

fn augment(i: usize, incident: &[Vec<usize>], owner: &mut [Option<usize>], seen: &mut [bool]) -> bool {
    for &e in &incident[i] {
        if seen[e] {
            continue;
        }
        seen[e] = true;
        if owner[e].is_none() || augment(owner[e].unwrap(), incident, owner, seen) {
            owner[e] = Some(i);
            return true;
        }
    }
    false
}

pub fn build_system(t: &Triangulation, fillings: &[Filling]) -> Result<GluingSystem, GeometryError> {
    if !t.is_ideal() {
        return Err(GeometryError::NotIdeal);
    }
    let cusps = t.peripheral.len();
    if fillings.len() != cusps {
        return Err(GeometryError::FillingCount { expected: cusps, got: fillings.len() });
    }
    for f in fillings {
        if let Filling::Slope { p, q } = *f {
            if num_integer::Integer::gcd(&p, &q) != 1 {
                return Err(GeometryError::BadSlope { p, q });
            }
        }
    }
    let two_pi_i = Complex64::new(0.0, 2.0 * PI);
    let ec = t.edge_classes();
    let vc = t.vertex_classes();
    let edges: Vec<Equation> = ec
        .members
        .iter()
        .map(|m| {
            let mut form = LogForm::default();
            for &(tet, e) in m {
                form.add_shape(tet, EDGE_SHAPE[e], 1);
            }
            Equation { form, target: two_pi_i }
        })
        .collect();

    // One dropped edge class per cusp, distinct and incident to that cusp.
    // Matched by augmenting paths, trying higher-indexed classes first.
    let incident: Vec<Vec<usize>> = (0..cusps)
        .map(|i| {
            let cv = t.cusp_vertex_class(i, &vc);
            (0..ec.len())
                .rev()
                .filter(|&e| {
                    ec.members[e].iter().any(|&(tet, k)| {
                        let (a, b) = EDGES[k];
                        vc.of[tet][a] == cv || vc.of[tet][b] == cv
                    })
                })
                .collect()
        })
        .collect();
    let mut owner: Vec<Option<usize>> = vec![None; ec.len()];
    for i in 0..cusps {
        let mut seen = vec![false; ec.len()];
        if !augment(i, &incident, &mut owner, &mut seen) {
            return Err(GeometryError::NoDroppableEdges(i));
        }
    }
    let mut dropped = vec![0; cusps];
    for (e, o) in owner.iter().enumerate() {
        if let Some(i) = o {
            dropped[*i] = e;
        }
    }

    let holonomy: Vec<(LogForm, LogForm)> = t
        .peripheral
        .iter()
        .map(|p| {
            let mu = curve_holonomy(&p.meridian);
            let mut la = curve_holonomy(&p.blackboard);
            la.add_scaled(&mu, p.framing_shift);
            (mu, la)
        })
        .collect();
    let cusp_equations = holonomy
        .iter()
        .zip(fillings)
        .map(|((mu, la), f)| match *f {
            Filling::Complete => Equation { form: mu.clone(), target: Complex64::new(0.0, 0.0) },
            Filling::Slope { p, q } => {
                let mut form = mu.scaled(p);
                form.add_scaled(la, q);
                Equation { form, target: two_pi_i }
            }
        })
        .collect();
    let sys = GluingSystem { triangulation: t.clone(), fillings: fillings.to_vec(), edges, dropped, holonomy, cusp_equations };
    debug_assert_eq!(sys.rows().len(), sys.num_unknowns());
    Ok(sys)
}

impl GluingSystem {
    pub fn num_unknowns(&self) -> usize {
        self.triangulation.num_tets()
    }

    pub fn num_cusps(&self) -> usize {
        self.fillings.len()
    }

    /// The square subsystem: kept edge equations, then one equation per cusp.
    pub fn rows(&self) -> Vec<&Equation> {
        self.edges
            .iter()
            .enumerate()
            .filter(|(i, _)| !self.dropped.contains(i))
            .map(|(_, e)| e)
            .chain(self.cusp_equations.iter())
            .collect()
    }

    /// Every equation, including the dropped edge equations.
    pub fn all_equations(&self) -> impl Iterator<Item = &Equation> {
        self.edges.iter().chain(self.cusp_equations.iter())
    }

    /// Same system with a different choice of dropped edge equations.
    pub fn with_dropped(&self, dropped: Vec<usize>) -> Result<GluingSystem, GeometryError> {
        if dropped.len() != self.num_cusps() || dropped.iter().any(|&e| e >= self.edges.len()) {
            return Err(GeometryError::Singular);
        }
        let mut s = self.clone();
        s.dropped = dropped;
        Ok(s)
    }

    /// Defects of the square subsystem.
    pub fn values(&self, log_z: &[Complex64], log_1mz: &[Complex64]) -> Vec<Complex64> {
        self.rows().iter().map(|e| e.defect(log_z, log_1mz)).collect()
    }

    /// Largest defect over all equations.
    pub fn residual(&self, log_z: &[Complex64], log_1mz: &[Complex64]) -> f64 {
        self.all_equations().map(|e| e.defect(log_z, log_1mz).norm()).fold(0.0, f64::max)
    }

    /// Jacobian of the square subsystem with respect to `log z`, row-major.
    pub fn jacobian(&self, z: &[Complex64]) -> Vec<Vec<Complex64>> {
        let n = self.num_unknowns();
        self.rows()
            .iter()
            .map(|e| {
                let mut row = vec![Complex64::new(0.0, 0.0); n];
                e.form.gradient_into(z, &mut row);
                row
            })
            .collect()
    }
}
