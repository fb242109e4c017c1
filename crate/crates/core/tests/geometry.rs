mod common;

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use surgerylab::diagram::LinkDiagram;
use surgerylab::geometry::*;

use common::{fixture, lobachevsky_fourier, CATALAN};

fn cfg() -> SolverConfig {
    SolverConfig::default()
}

fn random_shape(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::from_polar(rng.gen_range(0.3..3.0), rng.gen_range(0.1..3.0))
}

#[test]
fn bloch_wigner_identities() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..1000 {
        let z = Complex64::new(rng.gen_range(-4.0..4.0), rng.gen_range(-4.0..4.0));
        assert!((bloch_wigner(z) + bloch_wigner(1.0 - z)).abs() < 1e-12, "{z}");
        assert!((bloch_wigner(z.conj()) + bloch_wigner(z)).abs() < 1e-12, "{z}");
    }
}

#[test]
fn lobachevsky_matches_fourier_series() {
    for k in 1..12 {
        let t = k as f64 * PI / 12.0;
        assert!((lobachevsky(t) - lobachevsky_fourier(t)).abs() < 1e-10, "θ = {t}");
    }
    assert!((catalan() - CATALAN).abs() < 1e-14);
}

#[test]
fn regular_tetrahedron_volume() {
    let z = Complex64::from_polar(1.0, PI / 3.0);
    assert!((bloch_wigner(z) - 3.0 * lobachevsky_fourier(PI / 3.0)).abs() < 1e-10);
}

fn central_difference_check(d: &LinkDiagram, fillings: &[Filling], points: usize) {
    let t = ideal_triangulation(d, 1).unwrap();
    let sys = build_system(&t, fillings).unwrap();
    let n = sys.num_unknowns();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let h = 1e-6;
    for _ in 0..points {
        let s = ShapeAssignment::principal((0..n).map(|_| random_shape(&mut rng)).collect());
        let lz = s.log_z();
        let jac = sys.jacobian(&s.z);
        let at = |w: &[Complex64]| {
            let l1: Vec<Complex64> = w.iter().map(|w| (1.0 - w.exp()).ln()).collect();
            sys.values(w, &l1)
        };
        for col in 0..n {
            let mut plus = lz.clone();
            let mut minus = lz.clone();
            plus[col] += h;
            minus[col] -= h;
            let (fp, fm) = (at(&plus), at(&minus));
            for row in 0..n {
                let numeric = (fp[row] - fm[row]) / (2.0 * h);
                let analytic = jac[row][col];
                let rel = (numeric - analytic).norm() / analytic.norm().max(1.0);
                assert!(rel < 1e-6, "row {row} col {col}: {numeric} vs {analytic}");
            }
        }
    }
}

#[test]
fn jacobian_matches_central_differences() {
    central_difference_check(&fixture("figure_eight"), &[Filling::Complete], 50);
    central_difference_check(&fixture("figure_eight"), &[Filling::slope(5, 1)], 50);
    central_difference_check(&fixture("whitehead"), &[Filling::Complete; 2], 50);
    central_difference_check(&fixture("whitehead"), &[Filling::slope(-1, 3), Filling::Complete], 50);
}

#[test]
fn figure_eight_complete() {
    let s = solve_diagram(&fixture("figure_eight"), &[Filling::Complete], &cfg()).unwrap();
    assert_eq!(s.solution.classification, Classification::Geometric);
    let v = s.solution.volume.unwrap();
    assert!((v - 6.0 * lobachevsky_fourier(PI / 3.0)).abs() < 1e-9, "{v}");
    // Cusp shape of the figure-eight is 2√3 i up to the lattice action.
    let m = s.solution.cusp_shapes[0].unwrap();
    assert!((m.im.abs() - 2.0 * 3f64.sqrt()).abs() < 1e-9, "{m}");
}

#[test]
fn newton_trace_decreases() {
    let t = ideal_triangulation(&fixture("whitehead"), 0).unwrap();
    for f in [[Filling::Complete; 2], [Filling::slope(-1, 1), Filling::Complete]] {
        let sys = build_system(&t, &f).unwrap();
        let cfg = SolverConfig { restarts: 0, ..cfg() };
        let s = solve(&sys, Initial::Default, &cfg);
        assert!(s.trace.windows(2).all(|w| w[1] < w[0]), "{:?}", s.trace);
        assert!(s.residual >= *s.trace.last().unwrap());
    }
}

#[test]
fn figure_eight_integer_fillings_stay_below_complete_volume() {
    let complete = 6.0 * lobachevsky_fourier(PI / 3.0);
    let t = ideal_triangulation(&fixture("figure_eight"), 0).unwrap();
    let mut last = 0.0;
    for p in 5..=12 {
        let s = solve_with_retries(&t, &[Filling::slope(p, 1)], None, &cfg(), 12).unwrap();
        assert_eq!(s.solution.classification, Classification::Geometric, "p = {p}");
        let v = s.solution.volume.unwrap();
        assert!(v < complete && v > last, "p = {p}: {v}");
        last = v;
    }
}

#[test]
fn whitehead_complete_is_four_catalan() {
    let s = solve_diagram(&fixture("whitehead"), &[Filling::Complete; 2], &cfg()).unwrap();
    assert_eq!(s.solution.classification, Classification::Geometric);
    assert!((s.solution.volume.unwrap() - 4.0 * CATALAN).abs() < 1e-9);
}

/// Renames every arc by a random bijection and shuffles the crossing list.
fn relabel(d: &LinkDiagram, rng: &mut ChaCha8Rng) -> LinkDiagram {
    let arcs: Vec<_> = d.arcs().into_iter().collect();
    let mut image = arcs.clone();
    for i in (1..image.len()).rev() {
        image.swap(i, rng.gen_range(0..=i));
    }
    let map = |a| image[arcs.iter().position(|&b| b == a).unwrap()] + 100;
    let mut tuples: Vec<[_; 4]> = d.crossings().iter().map(|c| c.strands.map(map)).collect();
    for i in (1..tuples.len()).rev() {
        tuples.swap(i, rng.gen_range(0..=i));
    }
    LinkDiagram::from_pd_tuples(&tuples, &[], vec![]).unwrap()
}

#[test]
fn volume_is_invariant_under_relabeling() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for (name, cusps, want) in [("figure_eight", 1, 6.0 * lobachevsky_fourier(PI / 3.0)), ("whitehead", 2, 4.0 * CATALAN)] {
        let d = fixture(name);
        for _ in 0..4 {
            let e = relabel(&d, &mut rng);
            let s = solve_diagram(&e, &vec![Filling::Complete; cusps], &cfg()).unwrap();
            assert!((s.solution.volume.unwrap() - want).abs() < 1e-9, "{name}");
        }
    }
}

#[test]
fn volume_is_invariant_under_dropped_edge_choice() {
    let d = fixture("whitehead");
    let t = ideal_triangulation(&d, 0).unwrap();
    let fillings = [Filling::slope(-1, 2), Filling::Complete];
    let Solved { system: base, solution: reference, .. } = solve_with_retries(&t, &fillings, None, &cfg(), 12).unwrap();
    let v0 = reference.volume.unwrap();
    let e = base.edges.len();
    let mut solved = 0;
    for a in 0..e {
        for b in 0..e {
            if a == b {
                continue;
            }
            let Ok(sys) = base.with_dropped(vec![a, b]) else { continue };
            let s = solve(&sys, Initial::Shapes(reference.shapes.clone()), &cfg());
            if s.is_solved() {
                solved += 1;
                assert!((s.volume.unwrap() - v0).abs() < 1e-9, "dropped {a},{b}");
                // Dropped rows still hold at the solution.
                assert!(s.residual < 1e-12);
            }
        }
    }
    assert!(solved >= 2, "only {solved} choices solved");
}
