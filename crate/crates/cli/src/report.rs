//! Report rows and their CSV / JSON serialization.
//!
//! Both formats carry exactly the same fields in the same order. Numbers
//! are written with Rust's shortest round-trip formatting; non-finite
//! values appear as `inf` / `-inf` / `NaN` (quoted in JSON, where bare
//! non-finite numbers do not exist).

use std::fmt;

/// Reduction strategy a row describes. The ordinal drives row ordering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Algorithm {
    Sequential,
    Pairwise,
    Tensor,
    Compensated,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Sequential => "sequential",
            Algorithm::Pairwise => "pairwise",
            Algorithm::Tensor => "tensor",
            Algorithm::Compensated => "compensated",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One (n, m, algorithm) result.
///
/// `rel_err` is the precision loss as a fraction of the oracle magnitude
/// (multiply by 100 for percent); rows with a zero oracle and a nonzero
/// absolute error report `rel_err` as NaN, since the ratio is undefined
/// there and `abs_err` carries the information.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub n: usize,
    pub m: usize,
    pub algorithm: Algorithm,
    pub mode: &'static str,
    pub policy: &'static str,
    pub result: f64,
    pub oracle: f64,
    pub abs_err: f64,
    pub rel_err: f64,
    pub sim_steps: u64,
    pub pred_steps: u64,
    pub matches: bool,
    pub speedup_obs: f64,
    pub speedup_pred: f64,
    pub levels: u64,
    pub mma_cycles: u64,
}

/// All rows of one run, ordered by (n, m, algorithm).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ExperimentReport {
    pub rows: Vec<ReportRow>,
}

impl ExperimentReport {
    pub fn sort_rows(&mut self) {
        self.rows.sort_by_key(|r| (r.n, r.m, r.algorithm));
    }
}

pub const CSV_HEADER: &str = "n,m,algorithm,mode,policy,result,oracle,abs_err,rel_err,\
sim_steps,pred_steps,match,speedup_obs,speedup_pred,levels,mma_cycles";

/// Shortest round-trip decimal form; `inf` / `-inf` / `NaN` for the rest.
fn num(v: f64) -> String {
    format!("{v}")
}

/// JSON value for a float: a bare number when finite, a string otherwise.
fn json_num(v: f64) -> String {
    if v.is_finite() {
        format!("{v}")
    } else {
        format!("\"{v}\"")
    }
}

pub fn to_csv(report: &ExperimentReport) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in &report.rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
            r.n,
            r.m,
            r.algorithm,
            r.mode,
            r.policy,
            num(r.result),
            num(r.oracle),
            num(r.abs_err),
            num(r.rel_err),
            r.sim_steps,
            r.pred_steps,
            r.matches,
            num(r.speedup_obs),
            num(r.speedup_pred),
            r.levels,
            r.mma_cycles,
        ));
    }
    out
}

pub fn to_json(report: &ExperimentReport) -> String {
    let mut out = String::from("[\n");
    for (i, r) in report.rows.iter().enumerate() {
        out.push_str(&format!(
            "  {{\"n\": {}, \"m\": {}, \"algorithm\": \"{}\", \"mode\": \"{}\", \
\"policy\": \"{}\", \"result\": {}, \"oracle\": {}, \"abs_err\": {}, \"rel_err\": {}, \
\"sim_steps\": {}, \"pred_steps\": {}, \"match\": {}, \"speedup_obs\": {}, \
\"speedup_pred\": {}, \"levels\": {}, \"mma_cycles\": {}}}{}\n",
            r.n,
            r.m,
            r.algorithm,
            r.mode,
            r.policy,
            json_num(r.result),
            json_num(r.oracle),
            json_num(r.abs_err),
            json_num(r.rel_err),
            r.sim_steps,
            r.pred_steps,
            r.matches,
            json_num(r.speedup_obs),
            json_num(r.speedup_pred),
            r.levels,
            r.mma_cycles,
            if i + 1 == report.rows.len() { "" } else { "," },
        ));
    }
    out.push_str("]\n");
    out
}

/// Serialize in the requested format.
pub fn emit_report(report: &ExperimentReport, format: crate::config::OutputFormat) -> String {
    match format {
        crate::config::OutputFormat::Csv => to_csv(report),
        crate::config::OutputFormat::Json => to_json(report),
    }
}

/// Gate checks: exact rows must carry zero error, and wherever the problem
/// size is an exact power of the level shrink factor, the simulated ledger
/// must equal the closed form. Returns human-readable violations.
pub fn check_report(report: &ExperimentReport) -> Vec<String> {
    let mut violations = Vec::new();
    for r in &report.rows {
        if r.mode == "exact" && r.abs_err != 0.0 {
            violations.push(format!(
                "exact-mode row (n={}, m={}, {}) has nonzero error {}",
                r.n, r.m, r.algorithm, r.abs_err
            ));
        }
        let power_size = match r.algorithm {
            Algorithm::Pairwise => is_power_of(r.n, 2),
            Algorithm::Tensor => is_power_of(r.n, r.m * r.m),
            Algorithm::Sequential | Algorithm::Compensated => false,
        };
        if power_size && !r.matches {
            violations.push(format!(
                "power-size row (n={}, m={}, {}) simulated {} != predicted {}",
                r.n, r.m, r.algorithm, r.sim_steps, r.pred_steps
            ));
        }
    }
    violations
}

fn is_power_of(n: usize, base: usize) -> bool {
    if base < 2 {
        return false;
    }
    let mut v = base;
    while v < n {
        match v.checked_mul(base) {
            Some(next) => v = next,
            None => return false,
        }
    }
    v == n
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::OutputFormat;

    fn sample_row() -> ReportRow {
        ReportRow {
            n: 65536,
            m: 16,
            algorithm: Algorithm::Tensor,
            mode: "exact",
            policy: "none",
            result: 65536.0,
            oracle: 65536.0,
            abs_err: 0.0,
            rel_err: 0.0,
            sim_steps: 10,
            pred_steps: 10,
            matches: true,
            speedup_obs: 6.4,
            speedup_pred: 6.4,
            levels: 2,
            mma_cycles: 514,
        }
    }

    #[test]
    fn empty_report_is_just_the_header() {
        let csv = to_csv(&ExperimentReport::default());
        assert_eq!(csv, format!("{CSV_HEADER}\n"));
        assert_eq!(CSV_HEADER.split(',').count(), 16);
    }

    #[test]
    fn one_row_has_sixteen_fields() {
        let report = ExperimentReport {
            rows: vec![sample_row()],
        };
        let csv = to_csv(&report);
        let mut lines = csv.lines();
        lines.next();
        let data = lines.next().unwrap();
        assert_eq!(data.split(',').count(), 16);
        assert!(
            data.starts_with("65536,16,tensor,exact,none,65536,65536,0,0,10,10,true,6.4,6.4,2,514")
        );
    }

    #[test]
    fn non_finite_values_are_quoted_in_json_only() {
        let mut row = sample_row();
        row.result = f64::INFINITY;
        row.abs_err = f64::NAN;
        let report = ExperimentReport { rows: vec![row] };
        assert!(to_csv(&report).contains(",inf,"));
        assert!(to_json(&report).contains("\"result\": \"inf\""));
        assert!(to_json(&report).contains("\"abs_err\": \"NaN\""));
    }

    #[test]
    fn emit_matches_format() {
        let report = ExperimentReport {
            rows: vec![sample_row()],
        };
        assert!(emit_report(&report, OutputFormat::Csv).starts_with("n,m,"));
        assert!(emit_report(&report, OutputFormat::Json).starts_with("[\n"));
    }

    #[test]
    fn check_flags_exact_error_and_power_mismatch() {
        let good = ExperimentReport {
            rows: vec![sample_row()],
        };
        assert!(check_report(&good).is_empty());

        let mut bad_exact = sample_row();
        bad_exact.abs_err = 0.5;
        let mut bad_match = sample_row();
        bad_match.mode = "fp32";
        bad_match.matches = false;
        bad_match.sim_steps = 11;
        let report = ExperimentReport {
            rows: vec![bad_exact, bad_match],
        };
        let violations = check_report(&report);
        assert_eq!(violations.len(), 2);
        assert!(violations[0].contains("nonzero error"));
        assert!(violations[1].contains("simulated 11 != predicted 10"));
    }

    #[test]
    fn power_detection() {
        assert!(is_power_of(256, 256));
        assert!(is_power_of(65536, 256));
        assert!(is_power_of(65536, 2));
        assert!(!is_power_of(65537, 2));
        assert!(!is_power_of(192, 16));
        // n below the base is not a positive power of it
        assert!(!is_power_of(8, 16));
    }
}
