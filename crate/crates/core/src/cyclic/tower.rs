use alloc::format;
use alloc::vec::Vec;
use core::ops::RangeInclusive;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;

use super::bgamma::{bgamma_cohomology, bgamma_restrict, BGammaCochain, Level};
use super::ModuleDescription;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TowerLevel {
    pub level: Level,
    pub group: ModuleDescription,
    /// A cocycle generating the group, when it is nonzero.
    pub generator: Option<BGammaCochain>,
}

/// The system `H^degree(B(Z/p^m))` over a range of `m`, linked by restriction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tower {
    pub p: u64,
    pub degree: i64,
    pub levels: Vec<TowerLevel>,
    /// Each restriction sends the generator one level up to a generator
    /// one level down (so it is the surjective quotient map).
    pub maps_verified: bool,
    pub limit: ModuleDescription,
}

pub fn inverse_limit_tower(p: u64, degree: i64, m_range: RangeInclusive<u32>) -> Result<Tower> {
    if m_range.is_empty() {
        return Err(Error::PreconditionViolated(format!("empty range {}..={}", m_range.start(), m_range.end())));
    }
    let mut levels = Vec::new();
    for m in m_range {
        let level = Level::new(p, m)?;
        let group = bgamma_cohomology(level, degree..=degree).remove(0).1;
        let generator = (!group.is_zero()).then(|| BGammaCochain::monomial(level, degree, 1)).transpose()?;
        levels.push(TowerLevel { level, group, generator });
    }
    let mut maps_verified = true;
    for pair in levels.windows(2) {
        let (lower, upper) = (&pair[0], &pair[1]);
        maps_verified &= match (&upper.generator, &lower.generator) {
            (Some(g), Some(_)) => {
                let image = bgamma_restrict(g)?;
                image.is_cocycle() && generates(&image, lower)
            }
            (None, None) => true,
            _ => false,
        };
    }
    if let (Some(top), Some(bottom)) = (levels.last(), levels.first()) {
        // restricting all the way down agrees with the single quotient map
        if let Some(g) = &top.generator {
            let mut x = g.clone();
            for _ in 1..levels.len() {
                x = bgamma_restrict(&x)?;
            }
            maps_verified &= generates(&x, bottom);
        }
    }
    let limit = if degree >= 0 && degree % 2 == 0 { ModuleDescription::free(1) } else { ModuleDescription::zero() };
    Ok(Tower { p, degree, levels, maps_verified, limit })
}

/// `x` represents a generator of the cyclic group at `target`.
fn generates(x: &BGammaCochain, target: &TowerLevel) -> bool {
    let Ok(class) = x.class() else { return false };
    let Some(c) = class.get(&x.terms().map(|(d, _)| d).next().unwrap_or(0)) else {
        return false;
    };
    if class.len() != 1 {
        return false;
    }
    match target.group.torsion.first() {
        Some(order) => c.gcd(order).is_one(),
        None => c == &BigInt::one() || c == &-BigInt::one(),
    }
}
