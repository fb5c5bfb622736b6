//! Contractible subgraphs of directed graphs.
//!
//! Graphs have a finite core whose edges may carry the multiplicity `ω`, plus
//! eventually periodic rays. Given a set `G⁰` of core vertices the crate decides
//! whether the complement can be contracted away ([`check_theorem`],
//! [`check_proposition`]), performs the contraction ([`contract`]), and provides
//! the moves that produce or consume such graphs ([`moves`]). Two invariants
//! that a valid contraction must preserve are available as oracles: the family
//! of saturated hereditary vertex sets ([`ideals`]) and the K-groups of finite
//! graphs ([`ktheory`]).
//!
//! ```
//! use contractible::{contract, fixtures, Mode, VertexSet};
//!
//! let g = fixtures::tree(3);
//! let c = contract(&g, &VertexSet::from_core(["v", "w"]), Mode::Checked).unwrap();
//! assert_eq!(c.graph.edges().next().unwrap().2, 4.into());
//! ```

pub mod cli;
pub mod conditions;
pub mod contraction;
pub mod dot;
pub mod error;
pub mod fixtures;
pub mod graph;
pub mod ideals;
pub mod io;
pub mod ktheory;
pub mod moves;
pub mod multiplicity;
pub mod path;
pub mod random;

pub use conditions::{check_proposition, check_theorem, induced_t, ContractionVerdict, Violation};
pub use contraction::{ck_expand, contract, enumerate_bv, ContractedGraph, Mode, PathFamily};
pub use error::{Error, Result};
pub use graph::{Graph, GraphBuilder, RaySpec, RayState, VertexRef, VertexSet};
pub use ideals::{check_fullness, closure_sh, enumerate_sh, SHFamily};
pub use ktheory::{k_theory, smith_normal_form, IntMatrix, KInvariants};
pub use multiplicity::{Multiplicity, Omega};
pub use path::{Cycle, Path};
