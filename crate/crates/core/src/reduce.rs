//! The three reduction strategies under study.
//!
//! * [`reduce_sequential`]: single-accumulator fold, the Θ(n) baseline.
//! * [`reduce_pairwise`]: the classic tree reduction that halves the
//!   problem each step, charged 4 time units per level.
//! * [`reduce_tensor`]: the tiled hierarchy. Every level packs the data
//!   into m²-element groups, sums each group with the two-step MMA pair,
//!   and recurses on the group results until one value remains. Each level
//!   is charged 5 units regardless of how many groups it holds, because
//!   the groups run in parallel.
//!
//! Group reductions within a level are independent (they write disjoint
//! output slots), so results do not depend on group execution order; the
//! level boundary is the only synchronization point.

use crate::cost::{levels_needed, CostLedger, OpClass};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::tile::{load_group, mma_reduce_group};

/// One level of the tiled hierarchy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelPlan {
    /// Elements entering this level.
    pub input_size: usize,
    /// Groups of m² elements, the last one possibly padded.
    pub group_count: usize,
    /// Zero-filled slots in the trailing group.
    pub padded_slots: usize,
}

/// The full level structure for reducing `n` elements with m×m tiles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionPlan {
    n: usize,
    m: usize,
    levels: Vec<LevelPlan>,
}

impl ReductionPlan {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn levels(&self) -> &[LevelPlan] {
        &self.levels
    }

    pub fn total_levels(&self) -> u64 {
        self.levels.len() as u64
    }

    /// Groups across all levels; each one costs two MMA operations.
    pub fn total_groups(&self) -> u64 {
        self.levels.iter().map(|l| l.group_count as u64).sum()
    }
}

/// Partition `n` elements into levels of m²-sized groups. Zero or one
/// element needs no level at all; anything else shrinks by a factor of m²
/// (with a padded trailing group) per level until one value remains.
pub fn partition(n: usize, m: usize) -> Result<ReductionPlan> {
    if m < 2 {
        return Err(Error::InvalidTileDim { m });
    }
    let group = m * m;
    let mut levels = Vec::new();
    let mut size = n;
    while size > 1 {
        let group_count = size.div_ceil(group);
        levels.push(LevelPlan {
            input_size: size,
            group_count,
            padded_slots: group_count * group - size,
        });
        size = group_count;
    }
    debug_assert_eq!(levels.len() as u64, levels_needed(n, group));
    Ok(ReductionPlan { n, m, levels })
}

/// Left-to-right fold with a single accumulator. Empty input sums to zero.
pub fn reduce_sequential<S: Scalar>(xs: &[S]) -> S {
    xs.iter().fold(S::zero(), |acc, x| acc + x.clone())
}

/// Classic tree reduction: each step folds the upper half onto the lower
/// half, `x[i] = x[i] + x[i + ⌈size/2⌉]`. Charges per level the model's
/// four units: two element reads, one add, one store.
pub fn reduce_pairwise<S: Scalar>(xs: &[S], ledger: &mut CostLedger) -> S {
    if xs.is_empty() {
        return S::zero();
    }
    let mut buf = xs.to_vec();
    let mut size = buf.len();
    while size > 1 {
        let half = size.div_ceil(2);
        for i in 0..size - half {
            // move both operands out instead of cloning them; the upper
            // slot is dead after this level anyway
            let hi = std::mem::replace(&mut buf[i + half], S::zero());
            let lo = std::mem::replace(&mut buf[i], S::zero());
            buf[i] = lo + hi;
        }
        size = half;
        ledger.charge(OpClass::CoalescedRead);
        ledger.charge(OpClass::CoalescedRead);
        ledger.charge(OpClass::ClassicAdd);
        ledger.charge(OpClass::ClassicStore);
    }
    buf.swap_remove(0)
}

/// The tiled hierarchy. Per level, every group is loaded, reduced with the
/// two-step MMA pair and written to the next level's array. Each group
/// runs against its own worker ledger; workers of one level merge as
/// parallel (they execute simultaneously), and levels merge sequentially,
/// so a level contributes read + tile load + 2 MMA + result write = 5
/// units to the total no matter how many groups it holds.
pub fn reduce_tensor<S: Scalar>(xs: &[S], m: usize, ledger: &mut CostLedger) -> Result<S> {
    let plan = partition(xs.len(), m)?;
    if xs.is_empty() {
        return Ok(S::zero());
    }
    if xs.len() == 1 {
        return Ok(xs[0].clone());
    }
    let w = ledger.noncoalesced_penalty();
    let mut current = xs.to_vec();
    for level in plan.levels() {
        let mut next = Vec::with_capacity(level.group_count);
        let mut level_ledger = CostLedger::with_penalty(w);
        for g in 0..level.group_count {
            let mut worker = CostLedger::with_penalty(w);
            let tile = load_group(&current, g * m * m, m, &mut worker);
            let value = mma_reduce_group(&tile, &mut worker);
            worker.charge(OpClass::TileRw); // write the group result back
            next.push(value);
            level_ledger.merge_parallel(&worker);
        }
        ledger.merge_sequential(&level_ledger);
        current = next;
    }
    Ok(current.swap_remove(0))
}
