//! Telling manifolds apart by the volumes of their JSJ pieces.
//!
//! cargo run --example compare_assemblies

use surgerylab::surgery::{assemble, distinct_by_volume, Gluing, Piece};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let glue = |a, b| Gluing { a, torus_a: 0, b, torus_b: 0, matrix: [[0, 1], [1, 0]] };
    let x = assemble(vec![Piece::hyperbolic("figure-eight", 2.029883212819307, 1), Piece::seifert("cable space", 2)], vec![glue(0, 1)])?;
    let y = assemble(vec![Piece::seifert("cable space", 2), Piece::hyperbolic("5_2", 2.828122088330783, 1)], vec![glue(1, 0)])?;
    let z = assemble(vec![Piece::hyperbolic("figure-eight", 2.029883212819307, 1), Piece::seifert("torus knot", 1)], vec![glue(0, 1)])?;
    for tol in [1e-9, 1.0] {
        println!("tol {tol}: x vs y {}, x vs z {}", distinct_by_volume(&x, &y, tol), distinct_by_volume(&x, &z, tol));
    }
    Ok(())
}
