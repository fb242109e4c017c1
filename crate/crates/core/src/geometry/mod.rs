//! Hyperbolic structures on ideal triangulations: gluing and filling
//! equations, a damped Newton solver, volumes, cusp shapes and sweeps.

mod dilog;
mod equations;
mod newton;
mod pipeline;
mod shapes;
mod sweep;

pub use dilog::{bloch_wigner, catalan, li2, lobachevsky};
pub use equations::{build_system, curve_holonomy, Equation, Filling, GluingSystem, LogForm};
pub use newton::{solve, solve_by_continuation, Classification, HyperbolicSolution, Initial};
pub use pipeline::{ideal_triangulation, solve_diagram, solve_with_retries, triangulation_seed, Solved};
pub use shapes::ShapeAssignment;
pub use sweep::{fill_sweep, fill_sweep_diagram, round15, sig15, Affine, SlopeFamily, SweepReport, SweepRow, SweepVerdict};

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("triangulation has finite vertices")]
    NotIdeal,
    #[error("expected {expected} fillings, got {got}")]
    FillingCount { expected: usize, got: usize },
    #[error("slope {p}/{q} is not a pair of coprime integers")]
    BadSlope { p: i64, q: i64 },
    #[error("cusp {0} is filled")]
    FilledCusp(usize),
    #[error("no cusp {0}")]
    NoSuchCusp(usize),
    #[error("solution is not geometric")]
    NotGeometric,
    #[error("no solution: residual {0:e}")]
    Unsolved(f64),
    #[error("singular Jacobian")]
    Singular,
    #[error("no edge equation can be dropped for cusp {0}")]
    NoDroppableEdges(usize),
    #[error("malformed slope family `{0}`")]
    BadFamily(String),
    #[error(transparent)]
    Triangulation(#[from] crate::triangulation::TriangulationError),
}

/// Numerical thresholds shared by the solver and the comparisons.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Smallest allowed |z| and |1 - z|.
    pub degeneracy: f64,
    /// Shapes with |Im z| below this count as flat.
    pub flat: f64,
    pub max_halvings: u32,
    pub restarts: u32,
    pub seed: u64,
    /// Random retriangulations tried when a solve is not geometric.
    pub retriangulations: usize,
    /// Further triangulations built from the diagram with other seeds when
    /// the retriangulations of the first one give no geometric solution.
    pub fresh_triangulations: usize,
    /// Agreement required between volumes checked against exact values.
    pub volume_tolerance: f64,
    /// Agreement required for volumes quoted to 15 digits from elsewhere.
    pub quoted_volume_tolerance: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            tolerance: 1e-12,
            max_iterations: 100,
            degeneracy: 1e-8,
            flat: 1e-10,
            max_halvings: 20,
            restarts: 5,
            seed: 0x5eed,
            retriangulations: 12,
            fresh_triangulations: 4,
            volume_tolerance: 1e-9,
            quoted_volume_tolerance: 1e-6,
        }
    }
}

/// Sum of Bloch–Wigner values; negatively oriented tetrahedra count negatively.
pub fn volume(sol: &HyperbolicSolution) -> Result<f64, GeometryError> {
    sol.volume.ok_or(GeometryError::Unsolved(sol.residual))
}

/// Modulus of a complete cusp of a geometric solution.
pub fn cusp_shape(sys: &GluingSystem, sol: &HyperbolicSolution, cusp: usize) -> Result<Complex64, GeometryError> {
    if sys.fillings.get(cusp).is_some_and(|f| *f != Filling::Complete) {
        return Err(GeometryError::FilledCusp(cusp));
    }
    if sol.classification != Classification::Geometric {
        return Err(GeometryError::NotGeometric);
    }
    newton::cusp_modulus(sys, &sol.shapes, cusp)
}
