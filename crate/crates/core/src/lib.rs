//! Exact computations with topological right-angled Artin groups `A_Γ(φ)` and
//! finite balls in their generalised universal Salvetti complexes.
//!
//! The crate is organised bottom-up:
//!
//! * [`graph`]: simplicial graphs, cliques, chordality.
//! * [`model`]: computable models of `φ: O -> U`.
//! * [`raag`]: canonical words in `A_Γ`.
//! * [`elements`]: canonical elements of `A_Γ(φ)`.
//! * [`salvetti`]: cube balls, apartments, intersections, pockets, links.
//! * [`homology`]: integral cellular homology and sublevel complexes.
//! * [`qcalc`]: graded rational dimension bookkeeping.

pub mod elements;
pub mod error;
pub mod graph;
pub mod homology;
pub mod model;
pub mod qcalc;
pub mod raag;
pub mod salvetti;
pub mod suites;

pub use elements::{Element, Engine, EngineKind, Sym};
pub use error::{Error, Result};
pub use graph::Graph;
pub use homology::{CellComplex, ChainComplex, HomologyResult};
pub use model::{BaseModel, Latitude, NPair, UElem};
pub use raag::{ArtinWord, Letter, NormalWord, Raag};
pub use qcalc::{DimValue, GradedDim};
pub use salvetti::{build_ball, BallCaps, CubeBall};
