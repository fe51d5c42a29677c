//! K-rings of quasitoric manifolds from polytope and characteristic data.

pub mod bott;
pub mod charmap;
pub mod cli;
pub mod format;
pub mod intlinalg;
pub mod kring;
pub mod polyring;
pub mod polytope;
