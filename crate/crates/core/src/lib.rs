//! Beta-transformations with a Pisot unit base: exact expansions, natural
//! extension domains, Rauzy-type tiles and their tiling property, and sofic
//! codings.

#![allow(clippy::needless_range_loop)]

pub mod betamap;
pub mod numfield;
pub mod sofic;
pub mod tiling;

pub use numfield::{CBall, FieldError, HPoint, PisotField, QBeta, Slot};
