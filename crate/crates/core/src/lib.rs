//! Witnessed many-one reductions between Σ⁰₂ problems, run on finitely
//! described instances and checked against exact ground truth.

pub mod catalog;
pub mod coding;
pub mod error;
pub mod family;
pub mod file;
pub mod generic;
pub mod harness;
pub mod instance;
pub mod problems;
pub mod reduction;
pub mod stream;
pub mod subobject;
pub mod verify;
pub mod witness;

pub use error::{Error, Result};
pub use instance::{Instance, Value};
pub use problems::{Catalog, Problem, ProblemRef};
pub use reduction::{Reduction, ReductionRef};
pub use stream::StreamHandle;
pub use witness::Witness;
