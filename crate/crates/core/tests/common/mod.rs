#![allow(dead_code)]

use surgerylab::diagram::{parse_pd_json, LinkDiagram};

pub fn fixture(name: &str) -> LinkDiagram {
    let path = format!("{}/data/{name}.json", env!("CARGO_MANIFEST_DIR"));
    parse_pd_json(&std::fs::read_to_string(&path).unwrap()).unwrap()
}

/// Catalan's constant, from its decimal expansion.
pub const CATALAN: f64 = 0.915_965_594_177_219;

/// Λ(θ) = ½ Σ sin(2kθ)/k², partial sum to 200000 terms.
pub fn lobachevsky_fourier(theta: f64) -> f64 {
    let n = 200_000;
    let mut s = 0.0;
    for k in (1..=n).rev() {
        let k = k as f64;
        s += (2.0 * k * theta).sin() / (k * k);
    }
    0.5 * s
}
