//! Decision procedures for property (T) and virtual indicability of
//! `Out(A_Γ)` for right-angled Artin groups `A_Γ`.

pub mod decision;
pub mod error;
pub mod graph_core;
pub mod homo_rep;
pub mod indicability_pipeline;
pub mod linalg;
pub mod principality;
pub mod raag_words;
pub mod standard_rep;
pub mod vset;

pub use error::{Error, Result};
pub use graph_core::{domination_data, ClassKind, DominationData, SimplicialGraph};
pub use vset::VertexSet;
