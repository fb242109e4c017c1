use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::equations::{Filling, GluingSystem};
use super::shapes::{continue_log_1mz, ShapeAssignment};
use super::{bloch_wigner, GeometryError, SolverConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Classification {
    /// Every tetrahedron positively oriented.
    Geometric,
    /// Converged with some negatively oriented tetrahedra.
    Nongeometric,
    /// Converged with a flat tetrahedron or a shape at 0, 1 or ∞.
    Degenerate,
    Failed,
}

impl std::fmt::Display for Classification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Classification::Geometric => "GEOMETRIC",
            Classification::Nongeometric => "NONGEOMETRIC",
            Classification::Degenerate => "DEGENERATE",
            Classification::Failed => "FAILED",
        })
    }
}

#[derive(Debug, Clone)]
pub enum Initial {
    /// All shapes exp(iπ/3).
    Default,
    Shapes(ShapeAssignment),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HyperbolicSolution {
    pub shapes: ShapeAssignment,
    pub residual: f64,
    pub classification: Classification,
    pub volume: Option<f64>,
    /// Modulus of each complete cusp; `None` for filled cusps.
    pub cusp_shapes: Vec<Option<Complex64>>,
    pub iterations: usize,
    /// Residual after every accepted step, starting with the initial one.
    pub trace: Vec<f64>,
}

impl HyperbolicSolution {
    pub fn is_solved(&self) -> bool {
        self.classification != Classification::Failed
    }
}

/// Deforms a solution of the complete structure into a solution of `sys`.
///
/// Each filled cusp equation `p·u + q·v = 2πi` is replaced by
/// `p·u + q·v = 2πi·s`; `s` walks from 0, where `complete` solves it, to 1.
pub fn solve_by_continuation(sys: &GluingSystem, complete: &ShapeAssignment, cfg: &SolverConfig) -> HyperbolicSolution {
    track(sys, complete, cfg, |scaled, s| {
        for (eq, f) in scaled.cusp_equations.iter_mut().zip(&sys.fillings) {
            if matches!(f, Filling::Slope { .. }) {
                eq.target = Complex64::new(0.0, 2.0 * std::f64::consts::PI * s);
            }
        }
    })
}

/// Follows solutions of `deform(s)` from `s = 0`, solved by `start`, to
/// `s = 1`, halving the step whenever Newton fails to follow.
fn track(
    sys: &GluingSystem,
    start: &ShapeAssignment,
    cfg: &SolverConfig,
    deform: impl Fn(&mut GluingSystem, f64),
) -> HyperbolicSolution {
    let mut deformed = sys.clone();
    let mut shapes = start.clone();
    let mut trace = Vec::new();
    let mut iterations = 0;
    let (mut s, mut h) = (0.0f64, 0.25f64);
    while s < 1.0 {
        let next = (s + h).min(1.0);
        deform(&mut deformed, next);
        let (z, res, it, _) = iterate(&deformed, &shapes, cfg);
        iterations += it;
        let flat = z.z.iter().any(|w| w.im.abs() < cfg.flat || w.norm() > 1.0 / cfg.degeneracy);
        if res < cfg.tolerance && !flat {
            (shapes, s) = (z, next);
            trace.push(res);
            h *= 1.5;
        } else {
            h *= 0.5;
            if h < 1e-4 {
                break;
            }
        }
    }
    let (shapes, res, it, tail) = iterate(sys, &shapes, cfg);
    trace.extend(tail);
    finish(sys, shapes, res, iterations + it, trace, cfg)
}

/// Damped Newton iteration with seeded random restarts on failure.
pub fn solve(sys: &GluingSystem, initial: Initial, cfg: &SolverConfig) -> HyperbolicSolution {
    let n = sys.num_unknowns();
    let start = match initial {
        Initial::Default => ShapeAssignment::regular(n),
        Initial::Shapes(s) => s,
    };
    let mut best = newton(sys, &start, cfg);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for _ in 0..cfg.restarts {
        if best.is_solved() {
            break;
        }
        let z = (0..n)
            .map(|_| Complex64::from_polar(rng.gen_range(0.6..1.6), rng.gen_range(0.5..2.6)))
            .collect();
        let sol = newton(sys, &ShapeAssignment::principal(z), cfg);
        if sol.is_solved() || sol.residual < best.residual {
            let trace = [best.trace.clone(), sol.trace.clone()].concat();
            best = HyperbolicSolution { trace, ..sol };
        }
    }
    best
}

fn newton(sys: &GluingSystem, start: &ShapeAssignment, cfg: &SolverConfig) -> HyperbolicSolution {
    let (shapes, res, iterations, trace) = iterate(sys, start, cfg);
    finish(sys, shapes, res, iterations, trace, cfg)
}

fn iterate(sys: &GluingSystem, start: &ShapeAssignment, cfg: &SolverConfig) -> (ShapeAssignment, f64, usize, Vec<f64>) {
    let n = sys.num_unknowns();
    let mut lz = start.log_z();
    let mut l1 = start.log_1mz();
    let mut z: Vec<Complex64> = start.z.clone();
    let mut res = sys.residual(&lz, &l1);
    let mut trace = vec![res];
    let mut iterations = 0;
    while res >= cfg.tolerance && iterations < cfg.max_iterations {
        iterations += 1;
        let Some(step) = newton_step(sys, &z, &lz, &l1) else { break };
        let mut scale = 1.0;
        let mut accepted = false;
        for _ in 0..=cfg.max_halvings {
            let lz2: Vec<Complex64> = (0..n).map(|t| lz[t] + step[t] * scale).collect();
            let z2: Vec<Complex64> = lz2.iter().map(|w| w.exp()).collect();
            let degenerate = z2.iter().any(|z| !z.is_finite() || z.norm() < cfg.degeneracy || (1.0 - z).norm() < cfg.degeneracy);
            if !degenerate {
                let l12: Vec<Complex64> = (0..n).map(|t| continue_log_1mz(z2[t], l1[t])).collect();
                let r2 = sys.residual(&lz2, &l12);
                if r2 < res {
                    (lz, l1, z, res) = (lz2, l12, z2, r2);
                    accepted = true;
                    break;
                }
            }
            scale *= 0.5;
        }
        if !accepted {
            break;
        }
        trace.push(res);
    }
    (ShapeAssignment::from_logs(&lz, &l1), res, iterations, trace)
}

fn finish(
    sys: &GluingSystem,
    shapes: ShapeAssignment,
    res: f64,
    iterations: usize,
    trace: Vec<f64>,
    cfg: &SolverConfig,
) -> HyperbolicSolution {
    // Log branches may drift during iteration; only principal logarithms
    // describe a structure, so the defect is measured again with those.
    let shapes = ShapeAssignment::principal(shapes.z);
    let principal = sys.residual(&shapes.log_z(), &shapes.log_1mz());
    let res = if principal.is_nan() { principal } else { res.max(principal) };
    let classification = classify(&shapes, res, cfg);
    let solved = classification != Classification::Failed;
    let volume = solved.then(|| shapes.z.iter().map(|&z| bloch_wigner(z)).sum());
    let cusp_shapes = if classification == Classification::Geometric {
        (0..sys.num_cusps()).map(|c| cusp_modulus(sys, &shapes, c).ok()).collect()
    } else {
        vec![None; sys.num_cusps()]
    };
    HyperbolicSolution { shapes, residual: res, classification, volume, cusp_shapes, iterations, trace }
}

fn newton_step(sys: &GluingSystem, z: &[Complex64], lz: &[Complex64], l1: &[Complex64]) -> Option<Vec<Complex64>> {
    let n = z.len();
    let j = DMatrix::from_row_iterator(n, n, sys.jacobian(z).into_iter().flatten());
    let f = DVector::from_vec(sys.values(lz, l1));
    let step = j.lu().solve(&(-f))?;
    step.iter().all(|s| s.is_finite()).then(|| step.iter().copied().collect())
}

fn classify(s: &ShapeAssignment, residual: f64, cfg: &SolverConfig) -> Classification {
    if residual.is_nan() || residual >= cfg.tolerance {
        return Classification::Failed;
    }
    let degenerate = s.z.iter().any(|z| {
        z.norm() < cfg.degeneracy || (1.0 - z).norm() < cfg.degeneracy || z.norm() > 1.0 / cfg.degeneracy || z.im.abs() < cfg.flat
    });
    if degenerate {
        Classification::Degenerate
    } else if s.z.iter().all(|z| z.im > 0.0) {
        Classification::Geometric
    } else {
        Classification::Nongeometric
    }
}

/// Derivative of the longitude log-holonomy with respect to the meridian
/// log-holonomy along the deformation keeping every other equation fixed.
/// At a complete cusp this is the ratio of the longitude and meridian
/// translations.
pub(crate) fn cusp_modulus(sys: &GluingSystem, s: &ShapeAssignment, cusp: usize) -> Result<Complex64, GeometryError> {
    if cusp >= sys.num_cusps() {
        return Err(GeometryError::NoSuchCusp(cusp));
    }
    if sys.fillings[cusp] != Filling::Complete {
        return Err(GeometryError::FilledCusp(cusp));
    }
    let n = sys.num_unknowns();
    let j = DMatrix::from_row_iterator(n, n, sys.jacobian(&s.z).into_iter().flatten());
    let row = n - sys.num_cusps() + cusp;
    let mut e = DVector::from_element(n, Complex64::new(0.0, 0.0));
    e[row] = Complex64::new(1.0, 0.0);
    let dx = j.lu().solve(&e).ok_or(GeometryError::Singular)?;
    let mut grad = vec![Complex64::new(0.0, 0.0); n];
    sys.holonomy[cusp].1.gradient_into(&s.z, &mut grad);
    Ok(grad.iter().zip(dx.iter()).map(|(g, d)| g * d).sum())
}
