//! Invariants of bipartite graphs on the torus and of affine permutations.

pub mod affine;
pub mod cli;
pub mod cyclic;
pub mod fence;
pub mod geom;
pub mod oracle;
pub mod straighten;
pub mod synth;
pub mod torusgraph;
