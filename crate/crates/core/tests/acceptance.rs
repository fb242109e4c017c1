//! One line per acceptance criterion. Quarantined criteria are printed but
//! only decide the exit status under `--include-ignored` or `--ignored`.

mod common;

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use surgerylab::diagram::{braid_closure, parse_pd, LinkDiagram};
use surgerylab::geometry::*;
use surgerylab::surgery::*;

use common::{fixture, CATALAN};

const QUOTED_X: f64 = 29.6209311377130;
const QUOTED_Y: f64 = 30.3314052251137;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn slope(p: i64, q: i64) -> Coefficient {
    Slope::new(p, q).unwrap().into()
}

fn star() -> Coefficient {
    "*".parse().unwrap()
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let v = f();
    (v, t.elapsed())
}

fn homology_suite() -> Outcome {
    let (bad, dt) = timed(|| {
        let d = parse_pd("PD[O[1]]").unwrap();
        let mut bad = Vec::new();
        for p in -20i64..=20 {
            for q in 0..=5i64 {
                if p.gcd(&q) != 1 {
                    continue;
                }
                let h = FramedLink::new(d.clone(), vec![slope(p, q)]).unwrap().first_homology().unwrap();
                let want = match p.abs() {
                    0 => "Z".to_string(),
                    1 => "0".to_string(),
                    n => format!("Z/{n}"),
                };
                if h.to_string() != want {
                    bad.push(format!("{p}/{q}: {h}"));
                }
            }
        }
        bad
    });
    outcome(bad.is_empty() && dt < Duration::from_secs(1), format!("{} mismatches, {dt:.2?} (< 1 s)", bad.len()))
}

fn move_invariance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xa11);
    let (mut links, mut twisted, mut failures) = (0, 0, Vec::new());
    while twisted < 250 {
        let strands = rng.gen_range(2..=3usize);
        let len = rng.gen_range(1..=12 - 2 * strands);
        let word: Vec<i32> = (0..len)
            .map(|_| rng.gen_range(1..strands as i32) * if rng.gen_bool(0.5) { 1 } else { -1 })
            .collect();
        let d = braid_closure(strands, &word, true).unwrap();
        let n = d.num_components();
        let coeffs: Vec<Coefficient> = (0..n)
            .map(|_| {
                let (p, q) = (rng.gen_range(-6i64..=6), rng.gen_range(1i64..=3));
                let g = p.gcd(&q).max(1);
                slope(p / g, q / g)
            })
            .collect();
        let fl = FramedLink::new(d.clone(), coeffs).unwrap();
        let h = fl.first_homology().unwrap();
        links += 1;
        let mut perm: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            perm.swap(i, rng.gen_range(0..=i));
        }
        if fl.permuted(&perm).unwrap().first_homology().unwrap() != h {
            failures.push(format!("permutation of {word:?}"));
        }
        let r = rng.gen_range(0..n);
        if fl.reversed(r).unwrap().first_homology().unwrap() != h {
            failures.push(format!("reversal of {word:?}"));
        }
        if strands == 2 {
            let belt = d.component_of()[&3];
            let t = rng.gen_range(-3i64..=3);
            let after = rolfsen_twist(&fl.with_mark(belt, 4, 6).unwrap(), belt, t).unwrap();
            twisted += 1;
            if after.first_homology().unwrap() != h {
                failures.push(format!("twist {t} on {word:?}"));
            }
        }
    }
    outcome(failures.is_empty(), format!("{links} links, {twisted} Rolfsen twists, {} failures", failures.len()))
}

fn smith_forms() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5f);
    let cases = 500;
    let mut bad = 0;
    for _ in 0..cases {
        let (r, c) = (rng.gen_range(1..=8), rng.gen_range(1..=8));
        let m: Vec<Vec<i64>> = (0..r).map(|_| (0..c).map(|_| rng.gen_range(-20..=20)).collect()).collect();
        let ok = smith_normal_form(&m).map(|sf| verify_smith(&m, &sf).is_ok()).unwrap_or(false);
        bad += !ok as usize;
    }
    outcome(bad == 0, format!("{cases} random matrices, {bad} failures"))
}

fn figure_eight() -> Outcome {
    let cfg = SolverConfig::default();
    let (s, dt) = timed(|| solve_diagram(&fixture("figure_eight"), &[Filling::Complete], &cfg).unwrap());
    let want = 6.0 * lobachevsky(PI / 3.0);
    let v = s.solution.volume.unwrap_or(f64::NAN);
    let pass = s.solution.classification == Classification::Geometric
        && (v - want).abs() < 1e-9
        && dt < Duration::from_secs(1);
    outcome(pass, format!("{} vol {v:.12} vs 6Λ(π/3) {want:.12}, {dt:.2?} (< 1 s)", s.solution.classification))
}

fn whitehead() -> Outcome {
    let cfg = SolverConfig::default();
    let ((complete, sweep), dt) = timed(|| {
        let d = fixture("whitehead");
        let complete = solve_diagram(&d, &[Filling::Complete; 2], &cfg).unwrap();
        let t = ideal_triangulation(&d, cfg.seed).unwrap();
        let fam = SlopeFamily::parse("-1/n").unwrap();
        let sweep = fill_sweep(&t, 0, &fam, 1..=10, &[Filling::Complete; 2], &cfg, 0.0).unwrap();
        (complete, sweep)
    });
    let v = complete.solution.volume.unwrap_or(f64::NAN);
    let vols: Vec<f64> = sweep.rows.iter().map(|r| r.volume.unwrap_or(f64::NAN)).collect();
    let geometric = sweep.rows.iter().all(|r| r.classification == Classification::Geometric);
    let increasing = vols.windows(2).all(|w| w[1] > w[0]);
    let below = vols.iter().all(|&x| x < v);
    let pass = (v - 4.0 * CATALAN).abs() < 1e-9 && geometric && increasing && below && dt < Duration::from_secs(10);
    outcome(
        pass,
        format!(
            "vol {v:.12} vs 4G {:.12}; n=1..10 geometric={geometric} increasing={increasing} below={below}; {dt:.2?} (< 10 s)",
            4.0 * CATALAN
        ),
    )
}

fn jacobian_points(d: &LinkDiagram, fillings: &[Filling], rng: &mut ChaCha8Rng) -> (usize, f64) {
    let t = ideal_triangulation(d, 0).unwrap();
    let sys = build_system(&t, fillings).unwrap();
    let n = sys.num_unknowns();
    let h = 1e-6;
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let z: Vec<Complex64> = (0..n).map(|_| Complex64::from_polar(rng.gen_range(0.3..3.0), rng.gen_range(0.1..3.0))).collect();
        let s = ShapeAssignment::principal(z);
        let lz = s.log_z();
        let jac = sys.jacobian(&s.z);
        let at = |w: &[Complex64]| {
            let l1: Vec<Complex64> = w.iter().map(|w| (1.0 - w.exp()).ln()).collect();
            sys.values(w, &l1)
        };
        for col in 0..n {
            let (mut p, mut m) = (lz.clone(), lz.clone());
            p[col] += h;
            m[col] -= h;
            let (fp, fm) = (at(&p), at(&m));
            for row in 0..n {
                let num = (fp[row] - fm[row]) / (2.0 * h);
                worst = worst.max((num - jac[row][col]).norm() / jac[row][col].norm().max(1.0));
            }
        }
    }
    (50, worst)
}

fn jacobian() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x1ac);
    let cases: [(&str, Vec<Filling>); 3] = [
        ("figure_eight", vec![Filling::Complete]),
        ("whitehead", vec![Filling::Complete; 2]),
        ("whitehead", vec![Filling::slope(-1, 4), Filling::Complete]),
    ];
    let mut worst: f64 = 0.0;
    let mut points = 0;
    for (name, f) in &cases {
        let (k, w) = jacobian_points(&fixture(name), f, &mut rng);
        points += k;
        worst = worst.max(w);
    }
    outcome(worst < 1e-6, format!("{points} points, worst relative error {worst:.1e} (< 1e-6)"))
}

fn dilog_identities() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xd1);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let z = Complex64::new(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0));
        worst = worst.max((bloch_wigner(z) + bloch_wigner(1.0 - z)).abs());
        worst = worst.max((bloch_wigner(z.conj()) + bloch_wigner(z)).abs());
    }
    outcome(worst < 1e-12, format!("1000 samples, worst defect {worst:.1e} (< 1e-12)"))
}

/// Sweep of `-1/n` on gamma with component `zero` 0-filled.
fn lbar_limit(zero: usize) -> (SweepReport, f64) {
    let cfg = SolverConfig::default();
    let d = fixture("lbar_unverified");
    let mut fillings = vec![Filling::Complete; 4];
    fillings[zero] = Filling::slope(0, 1);
    let fam = SlopeFamily::parse("-1/n").unwrap();
    let r = fill_sweep_diagram(&d, 0, &fam, 1..=8, &fillings, &cfg, 1e-9).unwrap();
    let v = r.complete_volume.unwrap_or(f64::NAN);
    (r, v)
}

fn quoted_volumes() -> Outcome {
    let (rx, x) = lbar_limit(1);
    let (ry, y) = lbar_limit(2);
    let usable = |r: &SweepReport| r.complete_classification != Classification::Failed;
    let pass = usable(&rx) && usable(&ry) && (x - QUOTED_X).abs() < 1e-4 && (y - QUOTED_Y).abs() < 1e-4;
    outcome(
        pass,
        format!(
            "stand-in L̄: X limit {x:.10} ({}) vs {QUOTED_X}, Y limit {y:.10} ({}) vs {QUOTED_Y}, tol 1e-4",
            rx.complete_classification, ry.complete_classification
        ),
    )
}

fn homotopy_certificate() -> Outcome {
    let d = fixture("lbar_unverified");
    let mut got = Vec::new();
    for n in 0..=5 {
        let fl = FramedLink::new(d.clone(), vec![slope(-1, n), star(), slope(0, 1), star()])
            .and_then(|f| f.with_mark(0, 9, 13))
            .and_then(|f| rolfsen_twist(&f, 0, n))
            .and_then(|f| core_homotopy_class(&f, 0, 1, 2));
        got.push(fl.ok());
    }
    let pass = got.iter().all(|c| *c == Some((1, 1, true)));
    outcome(pass, format!("stand-in L̄, n = 0..5: {got:?}"))
}

fn jsj_verdicts() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x15);
    let tol = 1e-9;
    let mut bad = 0;
    let asm = |v: &[f64]| assemble(v.iter().map(|&x| Piece::hyperbolic("h", x, 0)).collect(), vec![]).unwrap();
    for _ in 0..100 {
        let v0: Vec<f64> = (0..rng.gen_range(0..4)).map(|_| rng.gen_range(0.5..40.0)).collect();
        let a = rng.gen_range(0.5..40.0);
        let b = if rng.gen_bool(0.5) { a } else { a + rng.gen_range(2.0 * tol..2.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 } };
        let x = asm(&[v0.clone(), vec![a]].concat());
        let y = asm(&[vec![b], v0].concat());
        let want = if (a - b).abs() > tol { Verdict::Distinct } else { Verdict::Inconclusive };
        bad += (distinct_by_volume(&x, &y, tol) != want) as usize;
    }
    outcome(bad == 0, format!("100 random multisets, {bad} wrong verdicts"))
}

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let strict = args.iter().any(|a| a == "--include-ignored" || a == "--ignored");
    if args.iter().any(|a| a == "--list") {
        return;
    }
    let criteria: [(&str, bool, fn() -> Outcome); 10] = [
        ("unknot surgery homology", false, homology_suite),
        ("homology move invariance", false, move_invariance),
        ("smith normal form certificates", false, smith_forms),
        ("figure-eight volume", false, figure_eight),
        ("whitehead volume and -1/n sweep", false, whitehead),
        ("jacobian vs central differences", false, jacobian),
        ("bloch-wigner identities", false, dilog_identities),
        ("quoted L̄ filling volumes", true, quoted_volumes),
        ("homotopy certificate", false, homotopy_certificate),
        ("volume verdicts", false, jsj_verdicts),
    ];
    let mut failed = 0;
    for (name, quarantined, check) in criteria {
        let o = check();
        let tag = if o.pass { "PASS" } else { "FAIL" };
        let q = if quarantined { " [quarantined]" } else { "" };
        println!("{tag} {name}{q}: {}", o.detail);
        if !o.pass && (!quarantined || strict) {
            failed += 1;
        }
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
