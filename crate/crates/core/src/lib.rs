//! Deflatability analysis for principal permutation classes.
//!
//! A permutation class is *deflatable* when its simple permutations all lie in
//! a proper subclass. This crate provides the machinery needed to study that
//! property for classes `Av(π)`:
//!
//! * [`perm`]: the permutation type, pattern containment, symmetries,
//!   one-point insertion, bonds and inflation;
//! * [`decomposition`]: intervals, simplicity, sum/skew components and the
//!   substitution decomposition;
//! * [`class`]: avoidance classes, generating-tree enumeration and shading
//!   grids;
//! * [`deflate`]: embedding into indecomposables, interval-breaking
//!   extensions, extension to simples and the principal-class classifier;
//! * [`witness`]: bond certificates, witness search and the inflation family
//!   of deflatable classes.
//!
//! ```
//! use deflate_core::{class::PermClass, perm::Permutation, witness::bond_certificate};
//!
//! let class = PermClass::principal("251364".parse().unwrap());
//! let witness: Permutation = "25173486".parse().unwrap();
//! let cert = bond_certificate(&witness, &class).unwrap().expect("certified");
//! assert_eq!(cert.bond.left_pos, 5);
//! ```

pub mod class;
pub mod decomposition;
pub mod deflate;
pub mod error;
pub mod perm;
pub mod witness;

pub use error::{Error, Result};
pub use perm::{Permutation, Slot, Symmetry};
