//! Simulated time accounting and closed-form step predictions.
//!
//! The machine model charges four kinds of parallel operations:
//!
//! * coalesced global-memory read/write: 1 unit of time
//! * non-coalesced read/write: `w` units (configurable penalty)
//! * a tile multiply-accumulate: 1 cycle
//! * simultaneous read/write of tile registers: 1 unit
//!
//! A [`CostLedger`] keeps two kinds of counters. *Step* counters measure
//! the critical path: operations of one class issued simultaneously by a
//! parallel phase count once, and [`CostLedger::total_time`] is their
//! weighted sum. *Work* tallies count every operation issued. Ledgers of
//! workers that ran side by side combine with
//! [`CostLedger::merge_parallel`] (steps take the maximum, work adds);
//! consecutive phases combine with [`CostLedger::merge_sequential`]
//! (everything adds). Running each worker against its own ledger and
//! merging keeps the accounting deterministic under any execution order.

use std::ops::Mul;

use crate::error::{Error, Result};

/// Default penalty, in time units, for a non-coalesced memory access.
/// None of the reductions in this crate incur it; it exists so the model
/// is complete and the "never incurred" claim is checkable.
pub const DEFAULT_NONCOALESCED_PENALTY: u64 = 32;

/// Operation classes the machine model distinguishes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OpClass {
    CoalescedRead,
    NoncoalescedRead,
    /// Read or write of tile registers, including pulling a result out.
    TileRw,
    /// One m×m multiply-accumulate issued to a tile unit.
    MmaCycle,
    /// One pairwise-reduction addition step.
    ClassicAdd,
    /// One pairwise-reduction store step.
    ClassicStore,
}

/// Running account of simulated cost for one worker or one whole run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CostLedger {
    coalesced_reads: u64,
    noncoalesced_reads: u64,
    tile_rw: u64,
    mma_cycles: u64,
    classic_add_steps: u64,
    classic_store_steps: u64,
    /// Total MMA operations issued (work, not critical path).
    mma_ops: u64,
    noncoalesced_penalty: u64,
}

impl CostLedger {
    pub fn new() -> Self {
        Self::with_penalty(DEFAULT_NONCOALESCED_PENALTY)
    }

    /// Ledger with a specific non-coalesced access penalty `w`.
    pub fn with_penalty(noncoalesced_penalty: u64) -> Self {
        Self {
            coalesced_reads: 0,
            noncoalesced_reads: 0,
            tile_rw: 0,
            mma_cycles: 0,
            classic_add_steps: 0,
            classic_store_steps: 0,
            mma_ops: 0,
            noncoalesced_penalty,
        }
    }

    /// Record one operation of the given class.
    pub fn charge(&mut self, class: OpClass) {
        match class {
            OpClass::CoalescedRead => self.coalesced_reads += 1,
            OpClass::NoncoalescedRead => self.noncoalesced_reads += 1,
            OpClass::TileRw => self.tile_rw += 1,
            OpClass::MmaCycle => {
                self.mma_cycles += 1;
                self.mma_ops += 1;
            }
            OpClass::ClassicAdd => self.classic_add_steps += 1,
            OpClass::ClassicStore => self.classic_store_steps += 1,
        }
    }

    /// Weighted sum of the step counters: the simulated time in units.
    pub fn total_time(&self) -> u64 {
        self.coalesced_reads
            + self.noncoalesced_reads * self.noncoalesced_penalty
            + self.tile_rw
            + self.mma_cycles
            + self.classic_add_steps
            + self.classic_store_steps
    }

    /// Fold in a worker that ran in parallel with the workers already
    /// merged: step counters take the per-class maximum (the phases line
    /// up), work tallies add.
    pub fn merge_parallel(&mut self, other: &CostLedger) {
        debug_assert_eq!(self.noncoalesced_penalty, other.noncoalesced_penalty);
        self.coalesced_reads = self.coalesced_reads.max(other.coalesced_reads);
        self.noncoalesced_reads = self.noncoalesced_reads.max(other.noncoalesced_reads);
        self.tile_rw = self.tile_rw.max(other.tile_rw);
        self.mma_cycles = self.mma_cycles.max(other.mma_cycles);
        self.classic_add_steps = self.classic_add_steps.max(other.classic_add_steps);
        self.classic_store_steps = self.classic_store_steps.max(other.classic_store_steps);
        self.mma_ops += other.mma_ops;
    }

    /// Fold in a phase that ran after everything already merged.
    pub fn merge_sequential(&mut self, other: &CostLedger) {
        debug_assert_eq!(self.noncoalesced_penalty, other.noncoalesced_penalty);
        self.coalesced_reads += other.coalesced_reads;
        self.noncoalesced_reads += other.noncoalesced_reads;
        self.tile_rw += other.tile_rw;
        self.mma_cycles += other.mma_cycles;
        self.classic_add_steps += other.classic_add_steps;
        self.classic_store_steps += other.classic_store_steps;
        self.mma_ops += other.mma_ops;
    }

    pub fn coalesced_reads(&self) -> u64 {
        self.coalesced_reads
    }

    pub fn noncoalesced_reads(&self) -> u64 {
        self.noncoalesced_reads
    }

    pub fn tile_rw(&self) -> u64 {
        self.tile_rw
    }

    /// MMA steps on the critical path.
    pub fn mma_cycles(&self) -> u64 {
        self.mma_cycles
    }

    pub fn classic_add_steps(&self) -> u64 {
        self.classic_add_steps
    }

    pub fn classic_store_steps(&self) -> u64 {
        self.classic_store_steps
    }

    /// Total MMA operations issued across all workers.
    pub fn mma_ops(&self) -> u64 {
        self.mma_ops
    }

    pub fn noncoalesced_penalty(&self) -> u64 {
        self.noncoalesced_penalty
    }
}

impl Default for CostLedger {
    fn default() -> Self {
        Self::new()
    }
}

// ---------------------------------------------------------------------------
// Closed forms
// ---------------------------------------------------------------------------

/// Which closed form produced a prediction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CostFormula {
    /// 4 units per halving level: `4·⌈log2 n⌉`.
    ClassicPairwise,
    /// 5 units per m²-shrinking level: `5·⌈log_{m²} n⌉`.
    TensorMma,
}

impl CostFormula {
    pub fn id(self) -> &'static str {
        match self {
            CostFormula::ClassicPairwise => "classic-4log2",
            CostFormula::TensorMma => "tensor-5logm2",
        }
    }
}

/// A predicted step count together with the inputs that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CostPrediction {
    pub n: u64,
    pub m: Option<u64>,
    pub processors: Option<u64>,
    pub steps: u64,
    pub formula: CostFormula,
}

/// Number of shrink-by-`factor` levels (with ceilings) needed to bring
/// `n` elements down to one: `⌈log_factor(n)⌉` for n ≥ 2, zero for n ≤ 1.
pub fn levels_needed(n: usize, factor: usize) -> u64 {
    assert!(factor >= 2, "shrink factor must be at least 2");
    let mut size = n;
    let mut levels = 0;
    while size > 1 {
        size = size.div_ceil(factor);
        levels += 1;
    }
    levels
}

/// Steps for the classic pairwise reduction: 4 units per halving level.
pub fn predict_classic(n: usize) -> Result<CostPrediction> {
    if n < 2 {
        return Err(Error::ProblemTooSmall { n });
    }
    Ok(CostPrediction {
        n: n as u64,
        m: None,
        processors: None,
        steps: 4 * levels_needed(n, 2),
        formula: CostFormula::ClassicPairwise,
    })
}

/// Steps for the tiled MMA reduction: 5 units per level, each level
/// shrinking the problem by m².
pub fn predict_tensor(n: usize, m: usize) -> Result<CostPrediction> {
    if m < 2 {
        return Err(Error::InvalidTileDim { m });
    }
    if n < 2 {
        return Err(Error::ProblemTooSmall { n });
    }
    Ok(CostPrediction {
        n: n as u64,
        m: Some(m as u64),
        processors: None,
        steps: 5 * levels_needed(n, m * m),
        formula: CostFormula::TensorMma,
    })
}

/// Predicted speedup of the tiled reduction over the pairwise one,
/// `(4/5)·log2(m²)`. Independent of the problem size.
pub fn speedup(m: usize) -> Result<f64> {
    if m < 2 {
        return Err(Error::InvalidTileDim { m });
    }
    let m2 = m * m;
    // log2 of a power of two must come out exact so the headline ratios
    // (3.2 for m=4, 6.4 for m=16) are bit-exact.
    let log2_m2 = if m2.is_power_of_two() {
        m2.trailing_zeros() as f64
    } else {
        (m2 as f64).log2()
    };
    Ok(4.0 / 5.0 * log2_m2)
}

/// Parallel cost `steps · processors`. Generic so callers can evaluate it
/// in exact arithmetic as well as in floats.
pub fn parallel_cost<T: Mul<Output = T>>(steps: T, processors: T) -> T {
    steps * processors
}

/// Brent's bound on parallel time for the reduction: `n/p + log2(n)`,
/// instantiating the sequential work as `n` and the span as `log2(n)`.
pub fn brent_bound(n: f64, processors: f64) -> f64 {
    n / processors + n.log2()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    #[test]
    fn charge_and_total_time() {
        let mut ledger = CostLedger::new();
        ledger.charge(OpClass::MmaCycle);
        assert_eq!(ledger.mma_cycles(), 1);
        assert_eq!(ledger.mma_ops(), 1);
        assert_eq!(ledger.total_time(), 1);

        let mut ledger = CostLedger::with_penalty(32);
        ledger.charge(OpClass::NoncoalescedRead);
        assert_eq!(ledger.total_time(), 32);
    }

    #[test]
    fn one_tensor_level_is_five_units() {
        let mut ledger = CostLedger::new();
        ledger.charge(OpClass::CoalescedRead);
        ledger.charge(OpClass::TileRw);
        ledger.charge(OpClass::MmaCycle);
        ledger.charge(OpClass::MmaCycle);
        ledger.charge(OpClass::TileRw);
        assert_eq!(ledger.total_time(), 5);
    }

    #[test]
    fn parallel_merge_takes_max_steps_and_sums_work() {
        let mut level = CostLedger::new();
        for _ in 0..8 {
            let mut worker = CostLedger::new();
            worker.charge(OpClass::CoalescedRead);
            worker.charge(OpClass::TileRw);
            worker.charge(OpClass::MmaCycle);
            worker.charge(OpClass::MmaCycle);
            worker.charge(OpClass::TileRw);
            level.merge_parallel(&worker);
        }
        assert_eq!(level.total_time(), 5);
        assert_eq!(level.mma_ops(), 16);

        let mut run = CostLedger::new();
        run.merge_sequential(&level);
        run.merge_sequential(&level);
        assert_eq!(run.total_time(), 10);
        assert_eq!(run.mma_ops(), 32);
    }

    #[test]
    fn classic_prediction_closed_form() {
        assert_eq!(predict_classic(2).unwrap().steps, 4);
        assert_eq!(predict_classic(16).unwrap().steps, 16);
        assert_eq!(predict_classic(65536).unwrap().steps, 64);
        // ceiling on non-powers
        assert_eq!(predict_classic(5).unwrap().steps, 12);
        assert_eq!(predict_classic(1), Err(Error::ProblemTooSmall { n: 1 }));
    }

    #[test]
    fn tensor_prediction_closed_form() {
        assert_eq!(predict_tensor(256, 16).unwrap().steps, 5);
        assert_eq!(predict_tensor(65536, 16).unwrap().steps, 10);
        assert_eq!(predict_tensor(16, 2).unwrap().steps, 10);
        assert_eq!(predict_tensor(257, 16).unwrap().steps, 10);
        assert_eq!(predict_tensor(4, 1), Err(Error::InvalidTileDim { m: 1 }));
        assert_eq!(predict_tensor(0, 4), Err(Error::ProblemTooSmall { n: 0 }));
    }

    #[test]
    fn speedup_headline_values_are_exact() {
        assert_eq!(speedup(4).unwrap(), 3.2);
        assert_eq!(speedup(16).unwrap(), 6.4);
        assert_eq!(speedup(2).unwrap(), 1.6);
        assert!(speedup(2).unwrap() > 1.0);
        assert_eq!(speedup(1), Err(Error::InvalidTileDim { m: 1 }));
    }

    #[test]
    fn parallel_cost_and_brent_bound() {
        assert_eq!(parallel_cost(1u64, 1u64), 1);
        assert_eq!(parallel_cost(10u64, 103u64), 1030);
        assert_eq!(parallel_cost(10.0, 512.0), 5120.0);

        assert_eq!(brent_bound(2.0, 1.0), 3.0);
        assert_eq!(brent_bound(1024.0, 1024.0), 11.0);
        // with p = ⌈n / log2 n⌉ processors the bound stays within 2·log2 n
        assert!(brent_bound(1024.0, 103.0) <= 20.0);
    }

    #[test]
    fn parallel_cost_exact_brent_schedule_is_two_n() {
        // steps 2·log2(n), processors n/log2(n), evaluated exactly
        for j in [4u32, 10, 20] {
            let n = BigInt::from(1u64 << j);
            let steps = BigRational::from_integer(BigInt::from(2 * j));
            let procs = BigRational::new(n.clone(), BigInt::from(j));
            let cost = parallel_cost(steps, procs);
            assert_eq!(cost, BigRational::from_integer(2 * n));
        }
    }

    #[test]
    fn levels_needed_matches_ceil_log() {
        assert_eq!(levels_needed(0, 4), 0);
        assert_eq!(levels_needed(1, 4), 0);
        assert_eq!(levels_needed(2, 4), 1);
        assert_eq!(levels_needed(4, 4), 1);
        assert_eq!(levels_needed(5, 4), 2);
        assert_eq!(levels_needed(1024, 4), 5);
    }
}
