//! Computable largeness notions over concrete ground structures.
//!
//! The crate is organised bottom-up:
//!
//! - [`structures`]: exact arithmetic, canonical enumerations and principal
//!   subgroups of `Z`, `Z/nZ`, `Z[x]` and free semigroups.
//! - [`largeness`]: membership oracles ([`SetSpec`]), finite sums and
//!   products, and exhaustive window-scale IP_r* certification.
//! - [`constructions`]: the constructive arguments (pigeonhole blocks,
//!   avoiding sequences, J-set witnesses, D-sets and dilation products),
//!   each returning a re-checkable certificate.
//! - [`density`]: Følner-window densities with exact rationals.
//!
//! Exhaustive searches run on rayon when the `parallel` feature is enabled
//! and always report the least result in their deterministic scan order.

pub mod certificate;
pub mod config;
pub mod constructions;
pub mod density;
pub mod error;
pub mod largeness;
pub mod par;
pub mod sieve;
pub mod structures;

pub use certificate::Certificate;
pub use config::{Guards, SearchConfig};
pub use error::{Error, Result};
pub use largeness::{SetSpec, WindowVerdict};
pub use par::Exec;
pub use structures::{Element, FiniteSequence, GroundStructure, IndexSet, Poly, SubgroupSpec};
