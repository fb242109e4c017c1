//! Dehn filling sweep: -1/n on one cusp of the Whitehead link gives the
//! twist knots, whose volumes climb towards the link's volume.
//!
//! cargo run --example twist_knot_sweep

use surgerylab::diagram::parse_pd_json;
use surgerylab::geometry::{fill_sweep_diagram, Filling, SlopeFamily, SolverConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = format!("{}/data/whitehead.json", env!("CARGO_MANIFEST_DIR"));
    let d = parse_pd_json(&std::fs::read_to_string(path)?)?;
    let family = SlopeFamily::parse("-1/n")?;
    let r = fill_sweep_diagram(&d, 0, &family, 1..=12, &[Filling::Complete; 2], &SolverConfig::default(), 1e-9)?;
    println!("complete: {:?}", r.complete_volume);
    print!("{}", r.to_csv());
    println!("{}", r.verdict_line());
    Ok(())
}
