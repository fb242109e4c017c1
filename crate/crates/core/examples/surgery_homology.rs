//! First homology of surgeries, and a Rolfsen twist that blows down an unknot.
//!
//! cargo run --example surgery_homology

use surgerylab::diagram::{braid_closure, parse_pd};
use surgerylab::surgery::{rolfsen_twist, Coefficient, FramedLink};

fn coeffs(s: &[&str]) -> Vec<Coefficient> {
    s.iter().map(|c| c.parse().unwrap()).collect()
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let unknot = parse_pd("PD[O[1]]")?;
    for c in ["5", "-7/3", "0", "1"] {
        let fl = FramedLink::new(unknot.clone(), coeffs(&[c]))?;
        println!("unknot({c}): H1 = {}", fl.first_homology()?);
    }

    let hopf = parse_pd("PD[X[1,4,2,3],X[3,2,4,1]]")?;
    let fl = FramedLink::new(hopf, coeffs(&["2", "3"]))?;
    println!("hopf(2, 3): linking matrix {:?}, H1 = {}", fl.linking_matrix().lk, fl.first_homology()?);

    // A -1 framed belt around the two strands of a closed 2-braid; arcs 4
    // and 6 are the strands inside the belt.
    let d = braid_closure(2, &[1, 1, 1], true)?;
    let belt = d.component_of()[&3];
    let mut c = coeffs(&["0", "0"]);
    c[belt] = "-1".parse()?;
    let fl = FramedLink::new(d, c)?.with_mark(belt, 4, 6)?;
    let down = rolfsen_twist(&fl, belt, 1)?;
    println!(
        "blow-down: {} -> {} components, coefficients {:?}, H1 {} = {}",
        fl.num_components(),
        down.num_components(),
        down.coefficients().iter().map(ToString::to_string).collect::<Vec<_>>(),
        fl.first_homology()?,
        down.first_homology()?
    );
    Ok(())
}
