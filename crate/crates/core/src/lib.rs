//! Framed-link surgery toolkit: PD diagrams with twist boxes, surgery
//! homology and Rolfsen twists, octahedral ideal triangulations of link
//! complements, and Newton solving of hyperbolic gluing equations with Dehn
//! filling.

pub mod diagram;
pub mod surgery;
pub mod triangulation;
pub mod geometry;
pub mod cli;
