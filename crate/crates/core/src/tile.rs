//! Square tiles and the one-cycle multiply-accumulate primitive.
//!
//! A tile unit exposes a single operation, `D = A × B + C` on m×m tiles,
//! charged at one cycle. Summing a group of m² elements takes two of them:
//! multiplying the loaded tile by an all-ones tile replicates each row sum
//! down its row, and multiplying an all-ones tile by that result replicates
//! the grand total into every entry, so any entry (we read (0,0)) is the
//! group's sum.

use std::ops::Index;

use crate::cost::{CostLedger, OpClass};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// An m×m tile of scalars, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct MatTile<S> {
    dim: usize,
    entries: Vec<S>,
}

impl<S: Scalar> MatTile<S> {
    /// Build a tile from `dim * dim` row-major entries.
    pub fn from_entries(dim: usize, entries: Vec<S>) -> Self {
        assert!(dim >= 2, "tile dimension must be at least 2");
        assert_eq!(entries.len(), dim * dim, "tile needs dim*dim entries");
        Self { dim, entries }
    }

    /// The all-zeros tile, the additive identity operand.
    pub fn zeros(dim: usize) -> Self {
        Self::from_entries(dim, vec![S::zero(); dim * dim])
    }

    /// The all-ones tile, the summation operand.
    pub fn ones(dim: usize) -> Self {
        Self::from_entries(dim, vec![S::one(); dim * dim])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[S] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> &S {
        &self.entries[row * self.dim + col]
    }
}

impl<S: Scalar> Index<(usize, usize)> for MatTile<S> {
    type Output = S;

    fn index(&self, (row, col): (usize, usize)) -> &S {
        self.get(row, col)
    }
}

/// One tile multiply-accumulate, `D[i][j] = Σ_k A[i][k]·B[k][j] + C[i][j]`.
///
/// Each element is a chain of [`Scalar::fma`] steps starting from the
/// accumulator entry, folded left to right over `k`; that fixes the
/// floating-point association. Charges one MMA cycle to the ledger.
///
/// When every column of B (and of C) is the same, as with the all-ones
/// summation operand, the chains for one row's entries are the
/// same fma sequence on the same values, so one column is computed and
/// cloned across. Likewise for identical rows of A. This changes nothing
/// observable: the replicated entries are what the chains would produce.
pub fn mma<S: Scalar>(
    a: &MatTile<S>,
    b: &MatTile<S>,
    c: &MatTile<S>,
    ledger: &mut CostLedger,
) -> Result<MatTile<S>> {
    let dim = a.dim();
    for other in [b.dim(), c.dim()] {
        if other != dim {
            return Err(Error::DimensionMismatch {
                left: dim,
                right: other,
            });
        }
    }
    let cols_replicated = columns_identical(b) && columns_identical(c);
    let rows_replicated = rows_identical(a) && rows_identical(c);
    let unique_rows = if rows_replicated { 1 } else { dim };
    let unique_cols = if cols_replicated { 1 } else { dim };

    let mut unique = Vec::with_capacity(unique_rows * unique_cols);
    for i in 0..unique_rows {
        for j in 0..unique_cols {
            let mut acc = c[(i, j)].clone();
            for k in 0..dim {
                acc = S::fma(&a[(i, k)], &b[(k, j)], &acc);
            }
            unique.push(acc);
        }
    }

    let mut out = Vec::with_capacity(dim * dim);
    for i in 0..dim {
        for j in 0..dim {
            let src_i = if rows_replicated { 0 } else { i };
            let src_j = if cols_replicated { 0 } else { j };
            out.push(unique[src_i * unique_cols + src_j].clone());
        }
    }
    ledger.charge(OpClass::MmaCycle);
    Ok(MatTile::from_entries(dim, out))
}

fn columns_identical<S: Scalar>(tile: &MatTile<S>) -> bool {
    let dim = tile.dim();
    (0..dim).all(|k| (1..dim).all(|j| tile[(k, j)] == tile[(k, 0)]))
}

fn rows_identical<S: Scalar>(tile: &MatTile<S>) -> bool {
    let dim = tile.dim();
    (1..dim).all(|i| (0..dim).all(|k| tile[(i, k)] == tile[(0, k)]))
}

/// Fill a tile row-major from `xs[offset..offset + dim²]`, padding slots
/// past the end of the input with zeros (the additive identity, so padded
/// groups keep their sum). Charges one coalesced read for the data and one
/// tile write for loading it; padding is generated, not read.
pub fn load_group<S: Scalar>(
    xs: &[S],
    offset: usize,
    dim: usize,
    ledger: &mut CostLedger,
) -> MatTile<S> {
    let mut entries = Vec::with_capacity(dim * dim);
    for idx in offset..offset + dim * dim {
        entries.push(xs.get(idx).cloned().unwrap_or_else(S::zero));
    }
    ledger.charge(OpClass::CoalescedRead);
    ledger.charge(OpClass::TileRw);
    MatTile::from_entries(dim, entries)
}

/// Reduce one loaded group to its sum with the two-step MMA pair,
/// charging exactly two MMA cycles. In the exact regime the result equals
/// the exact sum of the group's entries.
pub fn mma_reduce_group<S: Scalar>(group: &MatTile<S>, ledger: &mut CostLedger) -> S {
    let dim = group.dim();
    let ones = MatTile::ones(dim);
    let zeros = MatTile::zeros(dim);
    let row_sums = mma(group, &ones, &zeros, ledger).expect("operands share the group dimension");
    let total = mma(&ones, &row_sums, &zeros, ledger).expect("operands share the group dimension");
    total[(0, 0)].clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::exact_sum;
    use num_rational::BigRational;

    fn tile_of(dim: usize, vals: &[i64]) -> MatTile<BigRational> {
        MatTile::from_entries(
            dim,
            vals.iter()
                .map(|&v| <BigRational as Scalar>::quantize(v as f64))
                .collect(),
        )
    }

    fn as_i64s(tile: &MatTile<BigRational>) -> Vec<i64> {
        tile.entries()
            .iter()
            .map(|e| e.approx_f64() as i64)
            .collect()
    }

    #[test]
    fn mma_row_sums_replicate_across_columns() {
        let mut ledger = CostLedger::new();
        let a = tile_of(2, &[1, 2, 3, 4]);
        let d = mma(&a, &MatTile::ones(2), &MatTile::zeros(2), &mut ledger).unwrap();
        assert_eq!(as_i64s(&d), vec![3, 3, 7, 7]);
        assert_eq!(ledger.mma_cycles(), 1);
    }

    #[test]
    fn mma_zero_a_passes_accumulator_through() {
        let mut ledger = CostLedger::new();
        let b = tile_of(2, &[5, 6, 7, 8]);
        let c = tile_of(2, &[1, 2, 3, 4]);
        let d = mma(&MatTile::zeros(2), &b, &c, &mut ledger).unwrap();
        assert_eq!(d, c);
    }

    #[test]
    fn mma_ones_times_row_sums_gives_column_totals() {
        let mut ledger = CostLedger::new();
        let d = tile_of(2, &[3, 3, 7, 7]);
        let total = mma(&MatTile::ones(2), &d, &MatTile::zeros(2), &mut ledger).unwrap();
        assert_eq!(as_i64s(&total), vec![10, 10, 10, 10]);
    }

    #[test]
    fn mma_rejects_dimension_mismatch() {
        let mut ledger = CostLedger::new();
        let a: MatTile<f64> = MatTile::ones(2);
        let b: MatTile<f64> = MatTile::ones(3);
        let err = mma(&a, &b, &MatTile::zeros(2), &mut ledger).unwrap_err();
        assert_eq!(err, Error::DimensionMismatch { left: 2, right: 3 });
        assert_eq!(ledger.mma_cycles(), 0);
    }

    #[test]
    fn mma_general_operands_hand_matrix() {
        // nothing replicated in any operand, so no entry sharing applies
        let mut ledger = CostLedger::new();
        let a = MatTile::from_entries(2, vec![1.0f64, 2.0, 3.0, 4.0]);
        let b = MatTile::from_entries(2, vec![5.0, 6.0, 7.0, 8.0]);
        let c = MatTile::from_entries(2, vec![10.0, 20.0, 30.0, 40.0]);
        let d = mma(&a, &b, &c, &mut ledger).unwrap();
        // [1 2; 3 4] * [5 6; 7 8] = [19 22; 43 50]
        assert_eq!(d.entries(), &[29.0, 42.0, 73.0, 90.0]);
    }

    #[test]
    fn mma_ones_b_with_distinct_accumulator_rows() {
        // B is all ones but C is not replicated, so the full path runs;
        // D[i][j] = row_sum(A, i) + C[i][j] in exact integer arithmetic
        let mut ledger = CostLedger::new();
        let a = MatTile::from_entries(2, vec![1.0f64, 2.0, 3.0, 4.0]);
        let c = MatTile::from_entries(2, vec![100.0, 200.0, 300.0, 400.0]);
        let d = mma(&a, &MatTile::ones(2), &c, &mut ledger).unwrap();
        assert_eq!(d.entries(), &[103.0, 203.0, 307.0, 407.0]);
    }

    #[test]
    fn load_group_layouts_and_padding() {
        let xs: Vec<f64> = (1..=6).map(f64::from).collect();
        let mut ledger = CostLedger::new();

        let head = load_group(&xs, 0, 2, &mut ledger);
        assert_eq!(head.entries(), &[1.0, 2.0, 3.0, 4.0]);

        let tail = load_group(&xs, 4, 2, &mut ledger);
        assert_eq!(tail.entries(), &[5.0, 6.0, 0.0, 0.0]);

        let wide: Vec<f64> = (1..=16).map(f64::from).collect();
        let second = load_group(&wide, 4, 2, &mut ledger);
        assert_eq!(second.entries(), &[5.0, 6.0, 7.0, 8.0]);

        assert_eq!(ledger.coalesced_reads(), 3);
        assert_eq!(ledger.tile_rw(), 3);
    }

    #[test]
    fn group_reduction_hand_cases() {
        let mut ledger = CostLedger::new();
        assert_eq!(
            mma_reduce_group(&tile_of(2, &[1, 2, 3, 4]), &mut ledger).approx_f64(),
            10.0
        );
        assert_eq!(
            mma_reduce_group(&MatTile::<f64>::zeros(3), &mut CostLedger::new()),
            0.0
        );
        assert_eq!(
            mma_reduce_group(&tile_of(2, &[5, 6, 0, 0]), &mut CostLedger::new()).approx_f64(),
            11.0
        );
        assert_eq!(ledger.mma_cycles(), 2);
        assert_eq!(ledger.mma_ops(), 2);
    }

    #[test]
    fn group_reduction_matches_exact_sum() {
        let vals: Vec<f64> = (1..=16).map(|v| f64::from(v) * 0.25).collect();
        let tile = MatTile::from_entries(
            4,
            vals.iter()
                .map(|&v| <BigRational as Scalar>::quantize(v))
                .collect(),
        );
        let mut ledger = CostLedger::new();
        let reduced = mma_reduce_group(&tile, &mut ledger);
        assert_eq!(reduced, exact_sum(vals.iter()));
    }
}
