// `!(x > 0.0)` is how NaN gets rejected along with the rest; index loops
// mirror the formulas they implement.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod cli;
pub mod error;
pub mod gft_kernels;
pub mod groups;
pub mod lie_core;
pub mod policy;
pub mod quadrature;
pub mod specfun;
pub mod verify;

pub use error::{Error, Result};
pub use policy::TruncationPolicy;
