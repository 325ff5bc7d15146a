//! Toral linked twist maps and three-rod braids: homological entropy
//! bounds, exact material-line stretching, unstable-manifold slopes, and
//! detection of secondary folds.

pub mod braid;
pub mod config;
pub mod entropy;
pub mod error;
pub mod kinks;
pub mod linalg;
pub mod ltm;
pub mod manifold;
pub mod polyline;

pub use error::{Error, Result};
pub use linalg::{Mat2, Vec2};
pub use ltm::{LtmParams, Region, Rotation, TorusPoint, EPS_SING};
pub use polyline::Polyline;
