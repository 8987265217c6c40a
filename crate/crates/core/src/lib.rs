//! Joint cokernels cok(A + p·x_i·I) of matrices over the p-adic integers.
//!
//! Arithmetic is exact modulo p^K. The crate covers normal forms and
//! matrix-polynomial reductions ([`padic`]), module types and counting
//! formulas ([`module_types`]), realizability predicates ([`realizability`]),
//! explicit constructions ([`synthesis`]), random ensembles ([`random_models`]),
//! element-level group enumeration ([`group_lattice`]) and exhaustive
//! ground-truth scans ([`oracle`]).

pub mod error;
pub mod group_lattice;
pub mod module_types;
pub mod oracle;
pub mod padic;
pub mod random_models;
pub mod realizability;
pub mod synthesis;

pub use error::{Error, Result};
