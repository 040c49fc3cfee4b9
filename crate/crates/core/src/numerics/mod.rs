//! Numerical building blocks shared by the analytic modules.

pub mod em;
pub mod quad;
pub mod regress;
pub mod special;
pub mod sum;
pub mod trig;

pub use sum::{Neumaier, NeumaierC};
