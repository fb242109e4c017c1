use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{build_system, solve, solve_by_continuation, Classification, Filling, GeometryError, GluingSystem, HyperbolicSolution, Initial, SolverConfig};
use crate::diagram::LinkDiagram;
use crate::triangulation::{randomize, remove_finite_vertices, simplify, simplify_randomized, triangulate_diagram, Triangulation, TriangulationError};

/// Ideal triangulation of the exterior of `d`, with the polar vertices of the
/// octahedral decomposition removed, then shrunk by randomized simplification.
pub fn ideal_triangulation(d: &LinkDiagram, seed: u64) -> Result<Triangulation, TriangulationError> {
    let mut t = triangulate_diagram(d)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    remove_finite_vertices(&mut t, &mut rng)?;
    simplify_randomized(&mut t, &mut rng, 24);
    Ok(t)
}

/// A solution together with the triangulation and system it solves.
#[derive(Debug, Clone)]
pub struct Solved {
    pub system: GluingSystem,
    pub solution: HyperbolicSolution,
    /// Number of triangulations tried.
    pub attempts: usize,
}

impl Solved {
    pub fn triangulation(&self) -> &Triangulation {
        &self.system.triangulation
    }
}

pub(crate) fn rank(s: &HyperbolicSolution) -> (u8, f64) {
    let class = match s.classification {
        Classification::Geometric => 0,
        Classification::Nongeometric => 1,
        Classification::Degenerate => 2,
        Classification::Failed => 3,
    };
    (class, s.residual)
}

/// Solves on `tri`, then on randomly retriangulated copies until a geometric
/// solution appears or `retriangulations` copies have been tried. Returns the
/// best solution seen.
pub fn solve_with_retries(
    tri: &Triangulation,
    fillings: &[Filling],
    initial: Option<&HyperbolicSolution>,
    cfg: &SolverConfig,
    retriangulations: usize,
) -> Result<Solved, GeometryError> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut best: Option<Solved> = None;
    for attempt in 0..=retriangulations {
        let t = if attempt == 0 {
            tri.clone()
        } else {
            let mut t = tri.clone();
            randomize(&mut t, &mut rng, 2 + attempt);
            simplify(&mut t);
            t
        };
        let system = build_system(&t, fillings)?;
        let init = match initial {
            Some(s) if attempt == 0 && s.shapes.len() == t.num_tets() => Initial::Shapes(s.shapes.clone()),
            _ => Initial::Default,
        };
        let mut solution = solve(&system, init, cfg);
        let filled = fillings.iter().any(|f| matches!(f, Filling::Slope { .. }));
        if filled && solution.classification != Classification::Geometric {
            let complete = match initial {
                Some(s) if attempt == 0 && s.shapes.len() == t.num_tets() => Some(s.clone()),
                _ => {
                    let all = vec![Filling::Complete; fillings.len()];
                    Some(solve(&build_system(&t, &all)?, Initial::Default, cfg)).filter(|s| s.is_solved())
                }
            };
            if let Some(c) = complete {
                let cont = solve_by_continuation(&system, &c.shapes, cfg);
                if rank(&cont) < rank(&solution) {
                    solution = cont;
                }
            }
        }
        let better = best.as_ref().is_none_or(|b| rank(&solution) < rank(&b.solution));
        if better {
            best = Some(Solved { system, solution, attempts: attempt + 1 });
        }
        let b = best.as_mut().expect("set above");
        b.attempts = attempt + 1;
        if b.solution.classification == Classification::Geometric {
            break;
        }
    }
    Ok(best.expect("at least one attempt"))
}

/// Seed of the `k`-th triangulation built from a diagram.
pub fn triangulation_seed(cfg: &SolverConfig, k: usize) -> u64 {
    cfg.seed.wrapping_add(0x9e37_79b9_7f4a_7c15u64.wrapping_mul(k as u64))
}

/// Triangulates `d` and solves with the given fillings, building fresh
/// triangulations from other seeds until one gives a geometric solution.
pub fn solve_diagram(d: &LinkDiagram, fillings: &[Filling], cfg: &SolverConfig) -> Result<Solved, GeometryError> {
    let mut best: Option<Solved> = None;
    for k in 0..=cfg.fresh_triangulations {
        let t = ideal_triangulation(d, triangulation_seed(cfg, k))?;
        let s = solve_with_retries(&t, fillings, None, cfg, cfg.retriangulations)?;
        let attempts = best.as_ref().map_or(0, |b| b.attempts) + s.attempts;
        if best.as_ref().is_none_or(|b| rank(&s.solution) < rank(&b.solution)) {
            best = Some(s);
        }
        let b = best.as_mut().expect("set above");
        b.attempts = attempts;
        if b.solution.classification == Classification::Geometric {
            break;
        }
    }
    Ok(best.expect("at least one triangulation"))
}
