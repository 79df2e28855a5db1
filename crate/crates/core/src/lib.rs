//! Spherical tilings by congruent quadrangles over pseudo-double wheels.
//!
//! The crate enumerates quadrangulations of the sphere, decorates them with
//! edge-length and angle labels, decides the resulting exact linear systems,
//! rejects configurations through forbidden length patterns and tile
//! inequalities, and realizes surviving charts numerically on the unit
//! sphere. Angles are measured in units of π radians at every interface.

pub mod chart;
pub mod classify;
pub mod error;
pub mod feasibility;
pub mod geom;
pub mod io;
pub mod linear;
pub mod map;
pub mod patterns;
pub mod planar_code;
pub mod quadgen;
pub mod svg;

pub use error::{ChartError, GeomError, MapError, PatternError};
pub use map::{Angle, Automorphism, CanonicalCode, Dart, EdgeId, EdgeKind, PlanarMap, Vertex};
