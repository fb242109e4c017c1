use serde::{Deserialize, Serialize};

use super::{Peripheral, Triangulation};

/// Serializable dump: per tet, neighbours and gluing permutations per face.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriangulationJson {
    pub tetrahedra: Vec<TetJson>,
    pub peripheral: Vec<Peripheral>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TetJson {
    pub neighbors: [usize; 4],
    pub gluings: [[u8; 4]; 4],
    pub edge_classes: [usize; 6],
    pub vertex_classes: [usize; 4],
}

impl From<&Triangulation> for TriangulationJson {
    fn from(t: &Triangulation) -> Self {
        let ec = t.edge_classes();
        let vc = t.vertex_classes();
        TriangulationJson {
            tetrahedra: t
                .tets
                .iter()
                .enumerate()
                .map(|(i, tet)| TetJson {
                    neighbors: tet.neighbor,
                    gluings: tet.gluing.map(|p| p.0),
                    edge_classes: [0, 1, 2, 3, 4, 5].map(|e| ec.of[i][e]),
                    vertex_classes: [0, 1, 2, 3].map(|v| vc.of[i][v]),
                })
                .collect(),
            peripheral: t.peripheral.clone(),
        }
    }
}

impl Triangulation {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&TriangulationJson::from(self)).expect("triangulation serializes")
    }
}
