//! Octahedral triangulation of a link exterior, before and after removing
//! the two finite vertices.
//!
//! cargo run --example triangulate [path/to/diagram.json]

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use surgerylab::diagram::parse_pd_json;
use surgerylab::triangulation::{check_combinatorics, remove_finite_vertices, simplify, triangulate_diagram};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args().nth(1).unwrap_or_else(|| format!("{}/data/whitehead.json", env!("CARGO_MANIFEST_DIR")));
    let d = parse_pd_json(&std::fs::read_to_string(&path)?)?;
    let mut t = triangulate_diagram(&d)?;
    let r = check_combinatorics(&t);
    println!("raw: {} tetrahedra, {} edges, vertex links {:?}", r.tetrahedra, r.edges, r.vertex_links);

    remove_finite_vertices(&mut t, &mut ChaCha8Rng::seed_from_u64(0))?;
    simplify(&mut t);
    let r = check_combinatorics(&t);
    println!(
        "ideal: {} tetrahedra, {} edges, vertex links {:?}, meridian·longitude {:?}, ok = {}",
        r.tetrahedra,
        r.edges,
        r.vertex_links,
        r.intersections,
        r.ok()
    );
    Ok(())
}
