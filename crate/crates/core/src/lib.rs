//! Meridional inertia and ramification for finite-index subgroups of knot groups.

pub mod cli;
pub mod cohomology;
pub mod coset;
pub mod error;
pub mod harness;
pub mod linalg;
pub mod parse;
pub mod perm;
pub mod presentation;
pub mod ramification;
pub mod schreier;
pub mod wirtinger;
pub mod word;

pub use error::{Error, Result};
