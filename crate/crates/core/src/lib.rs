pub mod cli;
pub mod code;
pub mod dial;
pub mod eaqec;
pub mod field;
pub mod grs;
pub mod matrix;

pub use code::{CodeError, HullKind, HullReport, LinearCode, WeightVector};
pub use dial::{dial_galois_hull, dial_hull, reduce_hull, DialError, DialResult, LambdaSource};
pub use eaqec::{EaqecError, EaqecParams};
pub use field::{FieldElement, FieldError, FieldSpec};
pub use grs::{GrsError, GrsSpec};
pub use matrix::{FieldMatrix, MatrixError};
