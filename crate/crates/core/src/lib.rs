//! High-precision spectra of `-psi'' - (iz)^N psi = E psi` from a truncated
//! double power series in `z` and `E`.

mod error;
pub mod io;
pub mod nodes;
pub mod observables;
pub mod precision;
pub mod quadrature;
pub mod quantize;
pub mod series;
pub mod wedges;

pub use error::{Error, ParseError, Result};
