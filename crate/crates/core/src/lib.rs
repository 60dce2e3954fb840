//! Mumford–Tate tori of CM abelian varieties: reflex data, character
//! lattices, ℓ-adic bounds and a finite-level torus oracle.

pub mod arith;
pub mod bounds;
pub mod citation;
pub mod cm;
pub mod group;
pub mod lattice;
pub mod rational;
pub mod family;
pub mod torus;
