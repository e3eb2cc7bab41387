//! Tools for fixed-template promise constraint satisfaction problems: local
//! consistency, the Sherali-Adams hierarchy over exact rationals, polymorphism
//! and minion computations, a template analyzer, random sparse instances and
//! approximate graph coloring.

pub mod analyzer;
pub mod bench;
pub mod cli;
pub mod coloring;
pub mod consistency;
pub mod error;
pub mod format;
pub mod hom;
pub mod polymorphisms;
pub mod random_instances;
pub mod rat;
pub mod ratlp;
pub mod seed;
pub mod sherali_adams;
pub mod structure;

pub use error::{Error, Result};
pub use structure::{Elem, Relation, Signature, Structure};
