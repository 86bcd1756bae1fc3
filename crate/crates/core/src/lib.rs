//! Symbolic motivic zeta functions, Milnor fibers and the convolution
//! product on the monodromic Grothendieck ring, with finite-field
//! realizations and truncated-arc enumeration used to cross-check them.

pub mod ff;
pub mod gring;
pub mod convolution;
pub mod expr;
pub mod series;
pub mod arcspaces;
pub mod resolution;
pub mod gammatools;
pub mod sampling;
pub mod cli;
