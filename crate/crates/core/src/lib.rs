//! Digraph-defined external difference families over finite groups.

pub mod constructions;
pub mod diffcore;
pub mod digraphs;
pub mod equivalence;
pub mod error;
pub mod family_file;
pub mod groups;
pub mod search;

pub use constructions::{ConstructionResult, NonCedfCertificate};
pub use diffcore::{
    verify_h_edf, DifferenceMultiset, DisjointMode, SetFamily, Variant, VerificationReport, VerifyOptions,
};
pub use digraphs::LabelledDigraph;
pub use equivalence::{cedf_equivalent, EquivalenceOptions, EquivalenceWitness};
pub use error::{Error, Result};
pub use family_file::{emit_family_file, parse_family_file, FamilyFile};
pub use groups::{FieldTable, Group, GroupElement, GroupSpec};
pub use search::{search_h_edf, SearchCertificate, SearchOptions, SymmetryBreaking};
