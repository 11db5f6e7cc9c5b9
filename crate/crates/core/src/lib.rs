//! Relative entropy, factor maps and relatively maximal measures on
//! shifts of finite type.

pub mod error;
pub mod factor;
pub mod gallery;
pub mod graph;
pub mod hidden;
pub mod joining;
pub mod linalg;
pub mod measures;
pub mod rational;
pub mod relmax;
pub mod rng;
pub mod sft;
pub mod text;

pub use error::{Error, Result};
pub use factor::FactorCode;
pub use measures::{MarkovMeasure, Measure, PeriodicMeasure};
pub use sft::{PeriodicOrbit, Sft, Word};
