//! Combinatorial models of (m-)cluster categories of type A.
//!
//! - [`quiver`]: quivers, translation quivers, validation, components, DOT/JSON export
//! - [`iso`]: isomorphism search for translation quivers
//! - [`polygon`]: diagonals and m-diagonals, the quivers `gamma(n, m)`, angulations
//! - [`power`]: sectional paths, m-th powers and their components
//! - [`orbit`]: `ZA_k`, its shift, orbit quivers and component classification
//! - [`mutation`]: exchange matrices, seeds, cluster variables
//! - [`checks`]: the named verification checks behind `quiverkit verify`

pub mod checks;
pub mod error;
pub mod iso;
pub mod mutation;
pub mod orbit;
pub mod polygon;
pub mod power;
pub mod quiver;

pub use error::{QuiverError, Result};
pub use iso::{iso_translation_quivers, iso_translation_quivers_with, VertexBijection};
pub use orbit::{
    classify_components, orbit_quiver, AutoEq, ComponentReport, OrbitQuiver, ZAVertex, ZA,
};
pub use polygon::{
    crossing, enumerate_angulations, gamma, is_m_diagonal, row_of, Diagonal, Polygon, Row,
};
pub use power::{decompose, is_sectional, power, principal_component, Path, PowerQuiver};
pub use quiver::{Quiver, TranslationQuiver, ValidationResult, VertexId, Violation};

/// Version tag written at the top level of every JSON document.
pub const SCHEMA: &str = "quiverkit/1";

/// Environment variable overriding [`Limits::vertex_cap`].
pub const CAP_ENV: &str = "QUIVERKIT_CAP";

/// Size caps for the searches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest quiver accepted by isomorphism search and power builders.
    pub vertex_cap: usize,
    /// Largest polygon whose angulations are enumerated.
    pub angulation_polygon_cap: u32,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            vertex_cap: 5000,
            angulation_polygon_cap: 16,
        }
    }
}

impl Limits {
    /// Defaults, with the vertex cap taken from `QUIVERKIT_CAP` when set.
    pub fn from_env() -> std::result::Result<Self, QuiverError> {
        let mut limits = Limits::default();
        if let Ok(raw) = std::env::var(CAP_ENV) {
            let cap: usize = raw.trim().parse().map_err(|_| {
                QuiverError::InvalidArgument(format!("{CAP_ENV}={raw:?} is not a positive integer"))
            })?;
            if cap == 0 {
                return Err(QuiverError::InvalidArgument(format!(
                    "{CAP_ENV} must be positive"
                )));
            }
            limits.vertex_cap = cap;
        }
        Ok(limits)
    }
}
