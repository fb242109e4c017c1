mod common;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use surgerylab::diagram::{braid_closure, parse_pd};
use surgerylab::geometry::{solve_diagram, Filling, SolverConfig};
use surgerylab::surgery::*;

use common::fixture;

fn c(p: i64, q: i64) -> Coefficient {
    Slope::new(p, q).unwrap().into()
}

#[test]
fn unknot_surgeries_are_lens_spaces() {
    let d = parse_pd("PD[O[1]]").unwrap();
    for p in -20i64..=20 {
        for q in 0..=5i64 {
            if p.gcd(&q) != 1 {
                continue;
            }
            let h = FramedLink::new(d.clone(), vec![c(p, q)]).unwrap().first_homology().unwrap();
            match p.abs() {
                0 => assert_eq!(h, AbelianGroup::free(1)),
                1 => assert!(h.is_trivial()),
                n => assert_eq!(h.order(), Some(n as u64), "{p}/{q}: {h}"),
            }
        }
    }
}

fn int_matrix(max_dim: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(|(r, k)| prop::collection::vec(prop::collection::vec(-30i64..=30, k), r))
}

fn mul(a: &Matrix, b: &Matrix) -> Matrix {
    a.iter().map(|row| (0..b[0].len()).map(|j| row.iter().zip(b).map(|(x, r)| x * &r[j]).sum()).collect()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn smith_form_certifies_itself(m in int_matrix(7)) {
        let sf = smith_normal_form(&m).unwrap();
        let a: Matrix = m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        prop_assert_eq!(mul(&mul(&sf.u, &a), &sf.v), sf.d.clone());
        prop_assert!(det(&sf.u).abs().is_one());
        prop_assert!(det(&sf.v).abs().is_one());
        let f = sf.invariant_factors();
        prop_assert!(f.windows(2).all(|w| (&w[1] % &w[0]).is_zero()));
        prop_assert!(verify_smith(&m, &sf).is_ok());
    }
}

/// Word for a closed 2- or 3-braid with a belt, plus raw slopes.
fn framed_link() -> impl Strategy<Value = (usize, Vec<i32>, Vec<(i64, i64)>)> {
    (2usize..=3).prop_flat_map(|s| {
        let letter = prop_oneof![1i32..s as i32, -(s as i32 - 1)..0];
        let max = 12 - 2 * s;
        (Just(s), prop::collection::vec(letter, 1..=max), prop::collection::vec((-6i64..=6, 1i64..=3), 4))
    })
}

fn coefficients(n: usize, raw: &[(i64, i64)]) -> Vec<Coefficient> {
    raw.iter()
        .take(n)
        .map(|&(p, q)| {
            let g = p.gcd(&q).max(1);
            c(p / g, q / g)
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn homology_survives_kirby_moves((strands, word, raw) in framed_link(), t in -3i64..=3) {
        let d = braid_closure(strands, &word, true).unwrap();
        prop_assert!(d.num_crossings() <= 12);
        let n = d.num_components();
        let fl = FramedLink::new(d.clone(), coefficients(n, &raw)).unwrap();
        let h = fl.first_homology().unwrap();

        let mut perm: Vec<usize> = (0..n).collect();
        perm.rotate_left(1);
        prop_assert_eq!(&fl.permuted(&perm).unwrap().first_homology().unwrap(), &h);
        for i in 0..n {
            prop_assert_eq!(&fl.reversed(i).unwrap().first_homology().unwrap(), &h);
        }

        if strands == 2 {
            // Arcs 4 and 6 run between the front and back passes of the belt.
            let belt = d.component_of()[&3];
            let marked = fl.with_mark(belt, 4, 6).unwrap();
            let twisted = rolfsen_twist(&marked, belt, t).unwrap();
            prop_assert_eq!(twisted.first_homology().unwrap(), h);
        }
    }
}

#[test]
fn blow_down_matches_twist_knot_fillings() {
    // Volume of -1/n filling on the Whitehead link against the complete
    // volume of the knot obtained by blowing the same component down.
    let cfg = SolverConfig::default();
    let d = fixture("whitehead");
    for n in 1..=3 {
        let filled = solve_diagram(&d, &[Filling::slope(-1, n), Filling::Complete], &cfg).unwrap();
        let fl = FramedLink::new(d.clone(), vec![c(-1, n), "*".parse().unwrap()]).unwrap().with_mark(0, 5, 9).unwrap();
        let knot = rolfsen_twist(&fl, 0, n).unwrap();
        assert_eq!(knot.num_components(), 1);
        let complete = solve_diagram(knot.diagram(), &[Filling::Complete], &cfg).unwrap();
        let (a, b) = (filled.solution.volume.unwrap(), complete.solution.volume.unwrap());
        assert!((a - b).abs() < 1e-9, "n = {n}: {a} vs {b}");
    }
}

#[test]
fn lbar_core_class() {
    let d = fixture("lbar_unverified");
    let star: Coefficient = "*".parse().unwrap();
    for n in 0..=5 {
        let fl = FramedLink::new(d.clone(), vec![c(-1, n), star, c(0, 1), star]).unwrap().with_mark(0, 9, 13).unwrap();
        let blown = rolfsen_twist(&fl, 0, n).unwrap();
        assert_eq!(blown.num_components(), 3);
        let (a, b, core) = core_homotopy_class(&blown, 0, 1, 2).unwrap();
        assert_eq!((a, b, core), (1, 1, true), "n = {n}");
    }
}

fn hyperbolic(vols: &[f64]) -> JsjAssembly {
    let pieces = vols.iter().enumerate().map(|(i, &v)| Piece::hyperbolic(format!("p{i}"), v, 0)).collect();
    assemble(pieces, vec![]).unwrap()
}

#[test]
fn volume_verdicts_on_random_multisets() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
    let tol = 1e-9;
    for _ in 0..100 {
        let k = rng.gen_range(0..4);
        let v0: Vec<f64> = (0..k).map(|_| rng.gen_range(1.0..20.0)).collect();
        let a = rng.gen_range(1.0..20.0);
        let b = if rng.gen_bool(0.5) { a } else { a + rng.gen_range(2.0 * tol..1.0) };
        let x = hyperbolic(&[v0.clone(), vec![a]].concat());
        let mut y = [v0.clone(), vec![b]].concat();
        y.reverse();
        let y = hyperbolic(&y);
        let want = if (a - b).abs() > tol { Verdict::Distinct } else { Verdict::Inconclusive };
        assert_eq!(distinct_by_volume(&x, &y, tol), want);
        assert_eq!(distinct_by_volume(&y, &x, tol), want);
    }
}
