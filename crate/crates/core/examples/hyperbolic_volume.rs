//! Complete hyperbolic structures: volumes and cusp shapes of the
//! figure-eight knot and the Whitehead link, checked against closed forms.
//!
//! cargo run --example hyperbolic_volume

use std::f64::consts::PI;

use surgerylab::diagram::parse_pd_json;
use surgerylab::geometry::{catalan, lobachevsky, solve_diagram, Filling, SolverConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = SolverConfig::default();
    let cases = [("figure_eight", 1, 6.0 * lobachevsky(PI / 3.0)), ("whitehead", 2, 4.0 * catalan())];
    for (name, cusps, exact) in cases {
        let path = format!("{}/data/{name}.json", env!("CARGO_MANIFEST_DIR"));
        let d = parse_pd_json(&std::fs::read_to_string(path)?)?;
        let s = solve_diagram(&d, &vec![Filling::Complete; cusps], &cfg)?;
        let v = s.solution.volume.unwrap_or(f64::NAN);
        println!("{name}: {} tetrahedra, {}", s.triangulation().num_tets(), s.solution.classification);
        println!("  volume {v:.15} (closed form {exact:.15}, diff {:.1e})", (v - exact).abs());
        for (i, m) in s.solution.cusp_shapes.iter().enumerate() {
            if let Some(m) = m {
                println!("  cusp {i} shape {:.10} {:+.10}i", m.re, m.im);
            }
        }
    }
    Ok(())
}
