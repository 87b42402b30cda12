//! Planar inverse magnetic billiards.
//!
//! A particle moves in straight lines inside a table and along anticlockwise
//! circles of Larmor radius `mu` outside it. The crate builds the return map
//! on the boundary, its exact derivative, and the trace-based linear stability
//! of periodic orbits, together with closed-form constructions of the
//! periodic families that admit them.

pub mod boundary;
pub mod cli;
pub mod collision;
pub mod dd;
pub mod error;
pub mod families;
pub mod geometry;
pub mod imb_map;
pub mod quad;
pub mod roots;
pub mod rotation;
pub mod stability;

pub use boundary::{Curve, CurveSpec, Frame, ImplicitField};
pub use error::{ImbError, Result};
pub use geometry::{v2, Mat2, Vec2};
pub use imb_map::{PhasePoint, StepData};

pub use stability::{StabilityClass, StabilityVerdict, TwoPeriodicParams};
