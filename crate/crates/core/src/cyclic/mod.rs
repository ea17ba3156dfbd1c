//! Cochains of `B(Z/p^m)` and equivariant cochains with coefficients.
//!
//! Everything uses the two-periodic resolution, so a cochain of total
//! degree `D` with coefficients in a complex `V` has components
//! `t^i v` with `v` in `V^(D - 2i)` and `t^i theta v` with `v` in
//! `V^(D - 2i - 1)`. The differential is
//!
//! ```text
//! D(t^i v)       =  t^i dv       + t^i theta (sigma - 1) v
//! D(t^i theta v) = -t^i theta dv + t^(i+1) (1 + sigma + ... + sigma^(p^m - 1)) v
//! ```
//!
//! Coefficients are integers; cohomology is read over the p-adic integers
//! (only p-power torsion is reported).

mod bgamma;
mod complex;
mod cup;
mod intmat;
mod tensor;
mod tower;

use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::One;

pub use bgamma::{bgamma_cohomology, bgamma_cup, bgamma_restrict, BGammaCochain, Level};
pub use complex::{equivariant_cohomology, restrict_coefficients, Component, EquivariantCochain, EquivariantComplex, GradedComplex};
pub use cup::{coefficient_cup, tensor_product};
pub use intmat::{smith_normal_form, IntMatrix, SmithForm};
pub use tensor::{tensor_power, tensor_power_class, MAX_TENSOR_BASE, MAX_TENSOR_POWER};
pub use tower::{inverse_limit_tower, Tower, TowerLevel};

/// A finitely generated module over the p-adic integers `R`:
/// `R^free_rank` plus cyclic torsion summands `R/q` (each `q` a power of `p`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct ModuleDescription {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl ModuleDescription {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn free(rank: usize) -> Self {
        ModuleDescription { free_rank: rank, torsion: Vec::new() }
    }

    pub fn cyclic(order: BigInt) -> Self {
        if order.is_one() {
            return Self::zero();
        }
        ModuleDescription { free_rank: 0, torsion: alloc::vec![order] }
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }
}

impl fmt::Display for ModuleDescription {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push(alloc::string::String::from("R")),
            r => parts.push(alloc::format!("R^{r}")),
        }
        for q in &self.torsion {
            parts.push(alloc::format!("R/{q}"));
        }
        f.write_str(&parts.join(" + "))
    }
}
