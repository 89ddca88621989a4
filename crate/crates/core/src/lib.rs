//! Hankel determinants of Fisher-Hartwig symbols over the scaled Hermite and
//! Laguerre weights.

pub mod asymptotics;
pub mod bruteforce;
pub mod contour;
pub mod duality;
pub mod ensembles;
pub mod error;
pub mod hankel_oracle;
pub mod io;
pub mod mc;
pub mod numerics;
pub mod selfcheck;
pub mod study;

pub use error::{Error, Result};
