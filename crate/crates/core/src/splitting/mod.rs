//! Splitting a connection along the generalized eigenspaces of `A^0`,
//! extending endomorphisms across a simple pole, and p-adic checks of the
//! resulting series.

mod block;
mod eigen;
mod extend;
mod verify;

pub use block::{block_split, block_split_with, DiagonalNormalization, SplittingResult};
pub use eigen::{generalized_eigenprojectors, EigenData, EigenDifference};
pub use extend::{extend_endomorphism, ResonanceReport, ResonanceStatus};
pub use verify::{mod_p_reduction_degree, verify_divisibility, DivisibilityReport, EntryFailure, ModPDegree};
