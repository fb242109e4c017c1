use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::SurgeryError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PieceGeometry {
    Hyperbolic { volume: f64 },
    SeifertFibered,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Piece {
    pub label: String,
    pub geometry: PieceGeometry,
    pub boundary_tori: usize,
}

impl Piece {
    pub fn hyperbolic(label: impl Into<String>, volume: f64, boundary_tori: usize) -> Self {
        Piece { label: label.into(), geometry: PieceGeometry::Hyperbolic { volume }, boundary_tori }
    }

    pub fn seifert(label: impl Into<String>, boundary_tori: usize) -> Self {
        Piece { label: label.into(), geometry: PieceGeometry::SeifertFibered, boundary_tori }
    }

    pub fn volume(&self) -> Option<f64> {
        match self.geometry {
            PieceGeometry::Hyperbolic { volume } => Some(volume),
            PieceGeometry::SeifertFibered => None,
        }
    }
}

/// Identifies torus `torus_a` of piece `a` with torus `torus_b` of piece `b`;
/// `matrix` acts on (meridian, longitude) homology of the torus.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gluing {
    pub a: usize,
    pub torus_a: usize,
    pub b: usize,
    pub torus_b: usize,
    pub matrix: [[i64; 2]; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JsjAssembly {
    pieces: Vec<Piece>,
    gluings: Vec<Gluing>,
}

impl JsjAssembly {
    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn gluings(&self) -> &[Gluing] {
        &self.gluings
    }

    /// Hyperbolic volumes in increasing order.
    pub fn volumes(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.pieces.iter().filter_map(Piece::volume).collect();
        v.sort_by(f64::total_cmp);
        v
    }
}

pub fn assemble(pieces: Vec<Piece>, gluings: Vec<Gluing>) -> Result<JsjAssembly, SurgeryError> {
    let mut used = BTreeSet::new();
    for g in &gluings {
        let [[a, b], [c, d]] = g.matrix;
        let det = a * d - b * c;
        if det.abs() != 1 {
            return Err(SurgeryError::NotUnimodular(det));
        }
        for (p, t) in [(g.a, g.torus_a), (g.b, g.torus_b)] {
            let piece = pieces.get(p).ok_or(SurgeryError::NoSuchComponent(p))?;
            if t >= piece.boundary_tori {
                return Err(SurgeryError::NoSuchTorus { piece: piece.label.clone(), torus: t });
            }
            if !used.insert((p, t)) {
                return Err(SurgeryError::TorusReused { piece: piece.label.clone(), torus: t });
            }
        }
    }
    Ok(JsjAssembly { pieces, gluings })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Distinct,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Distinct => "DISTINCT",
            Verdict::Inconclusive => "INCONCLUSIVE",
        })
    }
}

/// Different piece counts, or sorted hyperbolic volumes differing by more
/// than `tol` somewhere, certify non-homeomorphic manifolds. Anything else is
/// inconclusive.
pub fn distinct_by_volume(a1: &JsjAssembly, a2: &JsjAssembly, tol: f64) -> Verdict {
    let (v1, v2) = (a1.volumes(), a2.volumes());
    if a1.pieces.len() != a2.pieces.len() || v1.len() != v2.len() {
        return Verdict::Distinct;
    }
    if v1.iter().zip(&v2).any(|(x, y)| (x - y).abs() > tol) {
        Verdict::Distinct
    } else {
        Verdict::Inconclusive
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        let two = || vec![Piece::hyperbolic("a", 2.0, 1), Piece::seifert("b", 1)];
        let g = |m| Gluing { a: 0, torus_a: 0, b: 1, torus_b: 0, matrix: m };
        assert!(assemble(two(), vec![g([[0, 1], [1, 0]])]).is_ok());
        assert_eq!(assemble(two(), vec![g([[2, 0], [0, 1]])]), Err(SurgeryError::NotUnimodular(2)));
        let twice = vec![g([[1, 0], [0, 1]]), g([[1, 0], [0, 1]])];
        assert!(matches!(assemble(two(), twice), Err(SurgeryError::TorusReused { .. })));
    }

    #[test]
    fn verdicts() {
        let one = assemble(vec![Piece::hyperbolic("k", 2.0299, 1)], vec![]).unwrap();
        let two = assemble(vec![Piece::hyperbolic("k", 2.0299, 1), Piece::hyperbolic("w", 3.6639, 2)], vec![]).unwrap();
        assert_eq!(distinct_by_volume(&one, &one, 1e-6), Verdict::Inconclusive);
        assert_eq!(distinct_by_volume(&one, &two, 1e-6), Verdict::Distinct);
        assert_eq!(distinct_by_volume(&two, &one, 1e-6), Verdict::Distinct);
    }
}
