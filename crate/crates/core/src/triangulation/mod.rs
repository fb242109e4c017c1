//! Ideal triangulations of link exteriors built from diagrams.

mod check;
mod json;
mod moves;
mod octahedral;
mod perm;
mod peripheral;
mod simplify;

pub use check::{check_combinatorics, CombinatoricsReport};
pub use json::TriangulationJson;
pub use octahedral::triangulate_diagram;
pub use perm::{face_vertices, Perm};
pub use peripheral::{intersection_number, Curve, Passage, Peripheral};
pub use simplify::{randomize, remove_finite_vertices, simplify, simplify_randomized};

use petgraph::unionfind::UnionFind;
use thiserror::Error;

use crate::diagram::DiagramError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TriangulationError {
    #[error("diagram has no crossings")]
    NoCrossings,
    #[error("diagram is not connected")]
    Disconnected,
    #[error("component {0} is split or unlinked from the diagram (no over-to-under arc)")]
    SplitComponent(usize),
    #[error("move is not applicable: {0}")]
    BadMove(String),
    #[error("could not remove finite vertices")]
    FiniteVertices,
    #[error("peripheral curve is broken: {0}")]
    BrokenCurve(String),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

/// Vertex pairs of the six edges, indexed 0..6.
pub const EDGES: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

pub fn edge_index(a: usize, b: usize) -> usize {
    let (a, b) = if a < b { (a, b) } else { (b, a) };
    EDGES.iter().position(|&e| e == (a, b)).expect("distinct vertices")
}

/// Which shape parameter sits on each edge: 0 for `z` (edges 01, 23), 1 for
/// `1/(1-z)` (02, 13), 2 for `1 - 1/z` (03, 12).
pub const EDGE_SHAPE: [usize; 6] = [0, 1, 2, 2, 1, 0];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tet {
    pub neighbor: [usize; 4],
    /// `gluing[f]` maps this tet's vertices to the neighbor's across face `f`.
    pub gluing: [Perm; 4],
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Triangulation {
    pub tets: Vec<Tet>,
    /// Peripheral curves, one entry per link component (cusp).
    pub peripheral: Vec<Peripheral>,
}

/// Equivalence classes of (tet, local index) pairs.
#[derive(Debug, Clone)]
pub struct Classes {
    pub of: Vec<Vec<usize>>,
    pub members: Vec<Vec<(usize, usize)>>,
}

impl Classes {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    fn from_union(n_tets: usize, width: usize, uf: &UnionFind<usize>) -> Classes {
        let mut id = vec![usize::MAX; n_tets * width];
        let mut members: Vec<Vec<(usize, usize)>> = Vec::new();
        let mut of = vec![vec![0; width]; n_tets];
        for t in 0..n_tets {
            for k in 0..width {
                let r = uf.find(t * width + k);
                if id[r] == usize::MAX {
                    id[r] = members.len();
                    members.push(Vec::new());
                }
                of[t][k] = id[r];
                members[id[r]].push((t, k));
            }
        }
        Classes { of, members }
    }
}

impl Triangulation {
    pub fn num_tets(&self) -> usize {
        self.tets.len()
    }

    pub fn glue(&mut self, t: usize, f: usize, u: usize, p: Perm) {
        let g = p.apply(f);
        self.tets[t].neighbor[f] = u;
        self.tets[t].gluing[f] = p;
        self.tets[u].neighbor[g] = t;
        self.tets[u].gluing[g] = p.inverse();
    }

    pub fn edge_classes(&self) -> Classes {
        let n = self.tets.len();
        let mut uf = UnionFind::new(n * 6);
        for (t, tet) in self.tets.iter().enumerate() {
            for (e, &(a, b)) in EDGES.iter().enumerate() {
                for f in 0..4 {
                    if f == a || f == b {
                        continue;
                    }
                    let p = tet.gluing[f];
                    uf.union(t * 6 + e, tet.neighbor[f] * 6 + edge_index(p.apply(a), p.apply(b)));
                }
            }
        }
        Classes::from_union(n, 6, &uf)
    }

    pub fn vertex_classes(&self) -> Classes {
        let n = self.tets.len();
        let mut uf = UnionFind::new(n * 4);
        for (t, tet) in self.tets.iter().enumerate() {
            for v in 0..4 {
                for f in (0..4).filter(|&f| f != v) {
                    uf.union(t * 4 + v, tet.neighbor[f] * 4 + tet.gluing[f].apply(v));
                }
            }
        }
        Classes::from_union(n, 4, &uf)
    }

    /// Euler characteristic of the link of every vertex class.
    pub fn vertex_link_euler(&self) -> Vec<i64> {
        let n = self.tets.len();
        let vc = self.vertex_classes();
        // Ends of edges: (t, v, w) with v != w, index t*16 + v*4 + w.
        let mut uf = UnionFind::new(n * 16);
        for (t, tet) in self.tets.iter().enumerate() {
            for v in 0..4 {
                for w in (0..4).filter(|&w| w != v) {
                    for f in (0..4).filter(|&f| f != v && f != w) {
                        let p = tet.gluing[f];
                        uf.union(t * 16 + v * 4 + w, tet.neighbor[f] * 16 + p.apply(v) * 4 + p.apply(w));
                    }
                }
            }
        }
        let mut link_vertices = vec![std::collections::BTreeSet::new(); vc.len()];
        let mut triangles = vec![0i64; vc.len()];
        for t in 0..n {
            for v in 0..4 {
                triangles[vc.of[t][v]] += 1;
                for w in (0..4).filter(|&w| w != v) {
                    link_vertices[vc.of[t][v]].insert(uf.find(t * 16 + v * 4 + w));
                }
            }
        }
        (0..vc.len()).map(|c| link_vertices[c].len() as i64 - triangles[c] / 2).collect()
    }

    /// Vertex classes whose links are spheres.
    pub fn finite_vertex_classes(&self) -> Vec<usize> {
        self.vertex_link_euler().iter().enumerate().filter(|(_, &x)| x == 2).map(|(i, _)| i).collect()
    }

    pub fn is_ideal(&self) -> bool {
        self.vertex_link_euler().iter().all(|&x| x == 0)
    }

    /// Vertex class of the cusp carrying component `i`'s peripheral curves.
    pub fn cusp_vertex_class(&self, i: usize, vc: &Classes) -> usize {
        let p = &self.peripheral[i].meridian.0[0];
        vc.of[p.tet][p.vertex as usize]
    }
}
