//! Exact engine for cluster X-varieties: Laurent arithmetic, seeds and
//! mutation, tropical points, the polygon model, laminations, special
//! completions and the punctured-torus boundary action.

pub mod completion;
pub mod error;
pub mod lamination;
pub mod laurent;
pub mod polygon;
pub mod seed;
pub mod torus;
pub mod tropical;

pub use error::{Error, Result};
