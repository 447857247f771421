//! Exact kernel for noncommutative formal group law computations over the
//! free associative algebra on `Z1, Z2, ...`.

pub mod bfk;
pub mod error;
pub mod fgl;
pub mod freealg;
pub mod hur;
pub mod int;
pub mod rewrite;
pub mod symfun;
pub mod tlaurent;

pub use error::{Error, Result};
pub use freealg::{FreePoly, Word};
pub use int::Int;
