//! Mixed volumes of lattice polytopes, by inclusion–exclusion over Minkowski
//! sums and by fine mixed cells of a random lifting.

mod cells;
mod lp;

pub use cells::{mixed_cells, MixedCell, MixedSubdivision, LIFTING_ATTEMPTS, LIFTING_RANGE};
pub(crate) use cells::lifted_value;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{MonomialSupport, RandomSeed};
use crate::polytope::{factorial, LatticePolytope};

/// Above this dimension inclusion–exclusion gets slow.
pub const DESK_DIMENSION: usize = 6;

/// `MVol(K₁,…,K_d) = Σ_{∅≠S⊆[d]} (−1)^{d−|S|} Vol(Σ_{i∈S} Kᵢ)`, normalized so
/// that `d` standard simplices give 1.
pub fn mixed_volume_ie(polytopes: &[LatticePolytope]) -> Result<u64> {
    let d = polytopes.len();
    if d == 0 {
        return Err(Error::EmptySystem);
    }
    if let Some(p) = polytopes.iter().find(|p| p.dim() != d) {
        return Err(Error::CountMismatch {
            expected: p.dim(),
            found: d,
        });
    }
    if d > DESK_DIMENSION {
        log::warn!("inclusion-exclusion over 2^{d} Minkowski sums");
    }
    let signed: BigInt = (1u64..1 << d)
        .into_par_iter()
        .map(|mask| {
            let mut members = (0..d).filter(|i| mask >> i & 1 == 1);
            let first = members.next().expect("nonempty subset");
            let sum = members.fold(polytopes[first].clone(), |acc, i| {
                acc.minkowski_sum(&polytopes[i]).expect("ambient dimensions checked")
            });
            let v = sum.normalized_volume().clone();
            if (d - mask.count_ones() as usize).is_multiple_of(2) {
                v
            } else {
                -v
            }
        })
        .reduce(BigInt::zero, |a, b| a + b);
    let (q, r) = signed.div_rem(&factorial(d));
    if !r.is_zero() || q.is_negative() {
        return Err(Error::Internal(format!("inclusion-exclusion produced {signed}/{d}!")));
    }
    q.to_u64()
        .ok_or_else(|| Error::Internal(format!("mixed volume {q} exceeds 64 bits")))
}

/// Both engines on the same input; any disagreement is an internal error.
#[derive(Clone, Debug)]
pub struct CrossCheck {
    pub mixed_volume: u64,
    pub subdivision: MixedSubdivision,
}

pub fn mixed_volume_cross_check(
    polytopes: &[LatticePolytope],
    supports: &[MonomialSupport],
    seed: RandomSeed,
) -> Result<CrossCheck> {
    if polytopes.len() != supports.len() {
        return Err(Error::CountMismatch {
            expected: polytopes.len(),
            found: supports.len(),
        });
    }
    let ie = mixed_volume_ie(polytopes)?;
    let subdivision = mixed_cells(supports, seed)?;
    if subdivision.total != ie {
        return Err(Error::Internal(format!(
            "mixed volume engines disagree: inclusion-exclusion {ie}, mixed cells {} (lifting seed {})",
            subdivision.total, subdivision.lifting_seed.0
        )));
    }
    Ok(CrossCheck {
        mixed_volume: ie,
        subdivision,
    })
}

/// Convex hulls of the supports.
pub fn support_polytopes(supports: &[MonomialSupport]) -> Result<Vec<LatticePolytope>> {
    supports.iter().map(|s| LatticePolytope::new(s.dim(), s.points())).collect()
}
