//! Cayley-Dickson multiplication tables and the finite geometry they induce.
//!
//! The crate builds the doubled algebras over the canonical basis, reads the
//! distinguished unit triples off their tables, models the resulting binary
//! projective spaces, carves out the nested binomial configurations, and
//! enumerates their geometric hyperplanes and Veldkamp spaces — together
//! with the machinery (configuration validation, combinatorial
//! Grassmannians, a certified isomorphism search) needed to verify every
//! census and correspondence mechanically.

pub mod algebra;
pub mod export;
pub mod geometry;
pub mod incidence;
pub mod veldkamp;
pub mod verify;

pub use algebra::{basis_conjugate, basis_product, CdElement, MultTable, SignedUnit};
pub use geometry::{
    configuration, distinguished_lines, pg_model, stratify, Line, LineClass, Stratification,
};
pub use incidence::{
    count_pasch, grassmannian, isomorphic, ConfigParams, IncidenceStructure, IsomorphismWitness,
};
pub use veldkamp::{
    check_nesting, classify_hyperplane, enumerate_hyperplanes, veldkamp_space,
    verify_fine_structure, Composition, Hyperplane, VeldkampSpace,
};
pub use verify::{verify_level, VerificationReport, VerifyOptions};

/// Any error the pipeline can produce.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Algebra(#[from] algebra::AlgebraError),
    #[error(transparent)]
    Geometry(#[from] geometry::GeometryError),
    #[error(transparent)]
    Incidence(#[from] incidence::IncidenceError),
    #[error(transparent)]
    Veldkamp(#[from] veldkamp::VeldkampError),
    #[error(transparent)]
    Export(#[from] export::ExportError),
}
