//! Exact computations around formal connections with a double pole.
//!
//! Everything here works over the rationals, viewed inside `Q_p` through the
//! p-adic valuation. The crate is `no_std` and only needs `alloc`; file
//! formats, reports and the command-line front end live in the `qsplit`
//! crate.
//!
//! Layout:
//!
//! - [`scalar`]: exact rationals, p-adic valuation, residues mod `p^m`.
//! - [`series`] and [`newton`]: truncated power series in `tau`, Newton
//!   polygons, log-decay and slope certificates.
//! - [`matrix`], [`poly`]: dense exact linear algebra used everywhere else.
//! - [`connection`]: series matrices, connection germs `tau^2 d/dtau + A`,
//!   covariant derivatives and gauge transformations.
//! - [`splitting`]: eigenprojectors, block splitting, extension of
//!   endomorphisms across a simple pole, divisibility checks.
//! - [`ring`]: small quantum cohomology rings and their degree-slice
//!   connections.
//! - [`reference`]: closed-form reference series and bundled example data.
//! - [`cyclic`]: cochains of `B(Z/p^m)`, equivariant complexes, cup
//!   products, restriction, tensor-power classes.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod connection;
pub mod cyclic;
mod error;
pub mod matrix;
pub mod newton;
pub mod poly;
pub mod reference;
pub mod ring;
pub mod scalar;
pub mod series;
pub mod splitting;

pub use connection::{ConnectionGerm, Convention, SeriesMatrix};
pub use error::{Error, Result};
pub use matrix::Matrix;
pub use scalar::{PrimeContext, Scalar, Valuation};
pub use series::TruncatedSeries;
