//! de Branges spaces ℋ𝒞(A, μ) realized as weighted Cauchy transforms
//! f = A·Σ a_n μ_n^{1/2}/(z − t_n), with certificates for indivisible intervals
//! in their subspace chains.

pub mod atomize;
pub mod canonical;
pub mod chain;
pub mod construct;
pub mod entire;
pub mod error;
pub mod measure;
pub mod numerics;
pub mod par;
pub mod space;

pub use error::{Error, Result};
pub use num_complex::Complex64;
