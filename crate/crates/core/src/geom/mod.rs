//! Numeric spherical geometry: tiles, realizations and the geometric
//! rejection arguments.

pub mod lemma;
pub mod realize;
pub mod sphere;
pub mod tile;

pub use lemma::{convex_lemma_check, lune_disequality_check, reject_q, LemmaVerdict, LuneVerdict, QBranch, QRejection};
pub use realize::{closing_angles, realize_chart, RealizeOptions, SphericalTiling};
pub use tile::{solve_tile, Convexity, SphericalQuadrangle};
