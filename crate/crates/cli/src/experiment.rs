//! Experiment execution: run the three reduction strategies over the
//! configured grid, measure everything against the exact oracle, and
//! compare simulated ledgers with the closed-form predictions.

use mma_reduce::cost::{predict_classic, predict_tensor, speedup, CostLedger};
use mma_reduce::reduce::{partition, reduce_pairwise, reduce_sequential, reduce_tensor};
use mma_reduce::{compensated_sum, exact_sum, BigRational, MixedF16, Scalar, StrictF16};
use num_traits::{Signed, ToPrimitive, Zero};

use crate::config::{ConfigError, ExperimentConfig, Mode, Policy};
use crate::dist::generate;
use crate::report::{Algorithm, ExperimentReport, ReportRow};

/// Absolute and relative error of a result against the exact oracle,
/// both computed in rational arithmetic before conversion for display.
/// Non-finite results report infinite error; a zero oracle leaves the
/// relative error undefined (NaN) unless the absolute error is zero too.
fn error_terms<S: Scalar>(result: &S, oracle: &BigRational) -> (f64, f64) {
    match result.to_rational() {
        None => (f64::INFINITY, f64::INFINITY),
        Some(r) => {
            let diff = (r - oracle).abs();
            if diff.is_zero() {
                return (0.0, 0.0);
            }
            let abs = ToPrimitive::to_f64(&diff).unwrap_or(f64::INFINITY);
            let rel = if oracle.is_zero() {
                f64::NAN
            } else {
                ToPrimitive::to_f64(&(diff / oracle.abs())).unwrap_or(f64::INFINITY)
            };
            (abs, rel)
        }
    }
}

/// The simulated and predicted steps for the sequential baseline: the
/// model does not break the Θ(n) loop into charged phases, so both sides
/// are pinned to n (one unit per element) and always agree.
fn sequential_steps(n: usize) -> u64 {
    n as u64
}

struct CellOutput {
    rows: Vec<ReportRow>,
}

/// Run every strategy of one (n, m) cell in the scalar regime `S`.
fn run_cell<S: Scalar>(
    inputs: &[f64],
    oracle: &BigRational,
    n: usize,
    m: usize,
    w: u64,
    with_compensated: bool,
) -> CellOutput {
    let xs: Vec<S> = inputs.iter().map(|&v| S::quantize(v)).collect();

    let sequential = reduce_sequential(&xs);

    let mut pairwise_ledger = CostLedger::with_penalty(w);
    let pairwise = reduce_pairwise(&xs, &mut pairwise_ledger);

    let mut tensor_ledger = CostLedger::with_penalty(w);
    let tensor = reduce_tensor(&xs, m, &mut tensor_ledger).expect("tile dimension validated");
    let plan = partition(n, m).expect("tile dimension validated");

    let pred_classic = if n >= 2 {
        predict_classic(n).expect("n >= 2").steps
    } else {
        0
    };
    let pred_tensor = if n >= 2 {
        predict_tensor(n, m).expect("validated").steps
    } else {
        0
    };
    let speedup_pred = speedup(m).expect("tile dimension validated");
    let speedup_obs = if tensor_ledger.total_time() > 0 {
        pairwise_ledger.total_time() as f64 / tensor_ledger.total_time() as f64
    } else {
        0.0
    };

    let row = |algorithm: Algorithm, result: &S, sim: u64, pred: u64, levels: u64, mma: u64| {
        let (abs_err, rel_err) = error_terms(result, oracle);
        ReportRow {
            n,
            m,
            algorithm,
            mode: S::MODE,
            policy: S::POLICY,
            result: result.approx_f64(),
            oracle: oracle.approx_f64(),
            abs_err,
            rel_err,
            sim_steps: sim,
            pred_steps: pred,
            matches: sim == pred,
            speedup_obs,
            speedup_pred,
            levels,
            mma_cycles: mma,
        }
    };

    let mut rows = vec![
        row(
            Algorithm::Sequential,
            &sequential,
            sequential_steps(n),
            sequential_steps(n),
            0,
            0,
        ),
        row(
            Algorithm::Pairwise,
            &pairwise,
            pairwise_ledger.total_time(),
            pred_classic,
            mma_reduce::cost::levels_needed(n, 2),
            0,
        ),
        row(
            Algorithm::Tensor,
            &tensor,
            tensor_ledger.total_time(),
            pred_tensor,
            plan.total_levels(),
            tensor_ledger.mma_ops(),
        ),
    ];
    if with_compensated {
        let kahan = compensated_sum(&xs);
        rows.push(row(Algorithm::Compensated, &kahan, 0, 0, 0, 0));
    }
    CellOutput { rows }
}

/// Run the configured grid in the configured regime.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport, ConfigError> {
    config.validate()?;
    let mut report = ExperimentReport::default();
    for &n in &config.n_list {
        let inputs = generate(config.dist, config.seed, n);
        let oracle = exact_sum(inputs.iter());
        for &m in &config.m_list {
            let cell = match (config.mode, config.policy) {
                (Mode::Exact, _) => run_cell::<BigRational>(
                    &inputs,
                    &oracle,
                    n,
                    m,
                    config.noncoalesced_penalty,
                    false,
                ),
                (Mode::Fp64, _) => {
                    run_cell::<f64>(&inputs, &oracle, n, m, config.noncoalesced_penalty, false)
                }
                (Mode::Fp32, _) => {
                    run_cell::<f32>(&inputs, &oracle, n, m, config.noncoalesced_penalty, false)
                }
                (Mode::Mixed, Policy::Fp32Acc) => {
                    run_cell::<MixedF16>(&inputs, &oracle, n, m, config.noncoalesced_penalty, false)
                }
                (Mode::Mixed, Policy::StrictFp16) => run_cell::<StrictF16>(
                    &inputs,
                    &oracle,
                    n,
                    m,
                    config.noncoalesced_penalty,
                    false,
                ),
            };
            report.rows.extend(cell.rows);
        }
    }
    report.sort_rows();
    Ok(report)
}

/// Precision sweep: for each (n, m) of the grid, measure the tiled
/// reduction under both mixed-precision policies against binary32
/// baselines (pairwise, naive fold, compensated fold), all relative to the
/// exact oracle. Rejects the exact mode, which has nothing to sweep.
pub fn precision_sweep(config: &ExperimentConfig) -> Result<ExperimentReport, ConfigError> {
    config.validate()?;
    if config.mode == Mode::Exact {
        return Err(ConfigError::SweepNeedsFloatingMode);
    }
    let w = config.noncoalesced_penalty;
    let mut report = ExperimentReport::default();
    for &n in &config.n_list {
        let inputs = generate(config.dist, config.seed, n);
        let oracle = exact_sum(inputs.iter());
        for &m in &config.m_list {
            // tiled reduction in both mixed policies
            let mixed = run_cell::<MixedF16>(&inputs, &oracle, n, m, w, false);
            let strict = run_cell::<StrictF16>(&inputs, &oracle, n, m, w, false);
            report.rows.extend(
                mixed
                    .rows
                    .into_iter()
                    .filter(|r| r.algorithm == Algorithm::Tensor),
            );
            report.rows.extend(
                strict
                    .rows
                    .into_iter()
                    .filter(|r| r.algorithm == Algorithm::Tensor),
            );
            // binary32 baselines: pairwise tree, naive fold, compensated fold
            let fp32 = run_cell::<f32>(&inputs, &oracle, n, m, w, true);
            report.rows.extend(
                fp32.rows
                    .into_iter()
                    .filter(|r| r.algorithm != Algorithm::Tensor),
            );
        }
    }
    report.sort_rows();
    Ok(report)
}
