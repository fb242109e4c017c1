//! Parse PD codes, read off linking numbers and writhe, and expand a twist box.
//!
//! cargo run --example diagram_basics

use surgerylab::diagram::{braid_closure, instantiate_twists, parse_pd};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let trefoil = parse_pd("PD[X[1,5,2,4],X[3,1,4,6],X[5,3,6,2]]")?;
    println!("trefoil: {} crossings, writhe {}", trefoil.num_crossings(), trefoil.writhe(0)?);

    let whitehead = parse_pd("PD[X[8,1,9,4],X[5,1,6,2],X[2,12,3,5],X[3,10,4,9],X[7,11,8,10],X[11,7,12,6]]")?;
    println!(
        "whitehead: {} components, lk = {}, faces = {}",
        whitehead.num_components(),
        whitehead.linking_number(0, 1)?,
        whitehead.faces().len()
    );

    // A Hopf link with a twist box between its two components.
    let boxed = parse_pd("PD[X[1,4,2,3],X[3,2,4,1],T[g,1,3,1]]")?;
    for n in [-2, 0, 3] {
        let d = instantiate_twists(&boxed, "g", n)?;
        println!("box g with n = {n:>2}: {} crossings, lk = {}", d.num_crossings(), d.linking_number(0, 1)?);
    }

    let closure = braid_closure(3, &[1, -2, 1, -2], true)?;
    println!("closed 3-braid with belt: {} components, {} crossings", closure.num_components(), closure.num_crossings());
    Ok(())
}
