//! Exact and characteristic-based solutions of scalar conservation laws
//! `u_t + F(u)_x = 0` with non-convex flux.

pub mod bezier;
pub mod characteristics;
pub mod cli;
pub mod envelope;
pub mod error;
pub mod flux;
pub mod io;
pub mod projection;
pub mod quadrature;
pub mod roots;
pub mod solver;

pub use error::{Error, Result};
pub use flux::{FluxFunction, FluxSpec};
