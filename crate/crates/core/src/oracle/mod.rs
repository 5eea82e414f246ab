//! Independent ground truth for validating the isolator: exact Sturm
//! counting and numeric complex roots.
//!
//! Nothing in here is used by the isolator itself.

pub mod mp;
mod roots;
mod sturm;

pub use roots::{complex_roots, RootSet};
pub use sturm::{sturm_count, sturm_count_closed, sturm_isolate, SturmSequence};
