//! Run reports (one JSON document per run) and flat CSV emission.
//!
//! Every number in a report traces back to a library operation; the only
//! field that varies between identical runs is `wall_clock_seconds`. CSV
//! files are written with full round-trip float precision so re-runs are
//! byte-identical.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::Result;

/// Full round-trip float formatting; stable across runs and platforms.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.17e}")
}

/// Join a cylinder word's symbols for a CSV cell.
pub fn fmt_word(word: &[usize]) -> String {
    word.iter().map(|s| s.to_string()).collect::<Vec<_>>().join("-")
}

/// Write one CSV file under `dir` and return its path.
pub fn write_csv(dir: &Path, name: &str, header: &str, rows: &[String]) -> Result<PathBuf> {
    let path = dir.join(name);
    let mut text = String::with_capacity(header.len() + 1 + rows.len() * 32);
    text.push_str(header);
    text.push('\n');
    for row in rows {
        text.push_str(row);
        text.push('\n');
    }
    fs::write(&path, text)?;
    Ok(path)
}

/// One hard pass/fail check recorded by the runner.
#[derive(Clone, Debug, Serialize)]
pub struct Assertion {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConditionsSection {
    pub h1_summable: bool,
    pub h2_variation: bool,
    pub h_star_bounded_above: bool,
    pub s1_positive: bool,
    pub s2_ratio_finite: bool,
    pub all_hold: bool,
    pub sup_phi: f64,
    pub inf_phi: f64,
    pub log_m: Vec<f64>,
    pub log_big_m: Vec<f64>,
    pub truncation_caveat: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct BipSection {
    pub holds: bool,
    pub images_ok: bool,
    pub preimages_ok: bool,
    pub image_witnesses: Vec<(usize, usize)>,
    pub preimage_witnesses: Vec<(usize, usize)>,
    pub omega_bi_weight: f64,
    pub omega_bp_weight: f64,
    pub truncation: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct PressureSection {
    /// Estimated relative Gurevič pressure.
    pub value: f64,
    /// Spread of the last difference quotients (Cauchy gap).
    pub gap: f64,
    pub n_max: usize,
    pub anchor: usize,
    pub omega_star: Vec<usize>,
    pub return_times: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DivergenceSection {
    pub log_s: f64,
    pub divergent: bool,
    pub log_term_ratio: f64,
    pub log_tail_bound: f64,
    pub partial_sums: usize,
    pub last_log_partial_sum: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct LambdaRow {
    pub state: usize,
    pub log_lambda: f64,
    pub log_lambda_norm: f64,
    pub lambda: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct LambdaSection {
    pub log_pressure: f64,
    pub quotient_gap: f64,
    /// Base average of log λ′; zero in exact arithmetic.
    pub avg_log_lambda_norm: f64,
    pub rows: Vec<LambdaRow>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SandwichSection {
    pub checks: usize,
    pub min_lower_margin: f64,
    pub min_upper_margin: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConformalSection {
    pub method: String,
    pub depth: usize,
    pub cylinders: usize,
    pub residual_max: f64,
    pub residual_state: usize,
    pub residual_pair: (usize, usize),
    /// Per-state total variation between the two constructions.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tv_series_vs_dual: Option<Vec<f64>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct EigenSection {
    pub sweeps: usize,
    pub residual: f64,
    pub log_lambda_re: Vec<f64>,
    /// Max gap between the series eigenvalue and the duality re-estimate.
    pub lambda_pair_gap: f64,
    pub h_min: f64,
    pub h_max: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct GibbsSection {
    pub state: usize,
    pub word_len: usize,
    pub words_checked: usize,
    pub sampled: bool,
    pub min_ratio: f64,
    pub max_ratio: f64,
    pub bound_lo: f64,
    pub bound_hi: f64,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct RecurrenceSection {
    pub script_n: usize,
    pub min: f64,
    pub max: f64,
    pub trend: f64,
    pub points: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExactnessSection {
    pub n_max: usize,
    pub final_deviation: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub log_rate: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct MatrixPfSection {
    pub log_lambda: Vec<f64>,
    pub average_log_lambda: f64,
    pub sweeps: usize,
    pub residual: f64,
    pub restart_gap: f64,
    pub backward_final: f64,
    pub bip_holds: bool,
    pub i_bi: Vec<Vec<usize>>,
    pub i_bp: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct StationarySection {
    pub pi: Vec<Vec<f64>>,
    pub restart_gap: f64,
    /// Max violation of π^ω P^ω = π^{θω}.
    pub defect: f64,
    pub backward_final: f64,
}

/// The per-run JSON document.
#[derive(Clone, Debug, Default, Serialize)]
pub struct RunReport {
    pub subcommand: String,
    pub name: String,
    pub config_digest: String,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub conditions: Option<ConditionsSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bip: Option<BipSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pressure: Option<PressureSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub divergence: Option<Vec<DivergenceSection>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<LambdaSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sandwich: Option<SandwichSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub conformal: Option<ConformalSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eigenfunction: Option<EigenSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gibbs: Option<Vec<GibbsSection>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub recurrence: Option<RecurrenceSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exactness: Option<ExactnessSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matrix_pf: Option<MatrixPfSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stationary: Option<StationarySection>,
    pub assertions: Vec<Assertion>,
    /// File names written alongside the report.
    pub outputs: Vec<String>,
    /// The only field allowed to differ between identical runs.
    pub wall_clock_seconds: f64,
}

impl RunReport {
    pub fn new(subcommand: &str, name: &str, config_digest: String, seed: u64) -> Self {
        RunReport {
            subcommand: subcommand.to_string(),
            name: name.to_string(),
            config_digest,
            seed,
            ..RunReport::default()
        }
    }

    /// Record one hard check.
    pub fn record(&mut self, name: &str, passed: bool, detail: String) {
        self.assertions.push(Assertion { name: name.to_string(), passed, detail });
    }

    pub fn first_failure(&self) -> Option<&Assertion> {
        self.assertions.iter().find(|a| !a.passed)
    }

    /// Note an output file (by file name) produced during the run.
    pub fn note_output(&mut self, path: &Path) {
        if let Some(name) = path.file_name().and_then(|n| n.to_str()) {
            self.outputs.push(name.to_string());
        }
    }

    /// Write `report.json` under `dir` and return its path.
    pub fn write(&self, dir: &Path) -> Result<PathBuf> {
        let path = dir.join("report.json");
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        fs::write(&path, text)?;
        Ok(path)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip_through_the_csv_format() {
        for &x in &[std::f64::consts::LN_2, 1e-300, -0.0, 17.25, 1.0 + f64::EPSILON] {
            let text = fmt_f64(x);
            let back: f64 = text.parse().unwrap();
            assert_eq!(back.to_bits(), x.to_bits(), "{text}");
        }
    }

    #[test]
    fn words_join_with_dashes() {
        assert_eq!(fmt_word(&[0]), "0");
        assert_eq!(fmt_word(&[1, 0, 12]), "1-0-12");
    }

    #[test]
    fn csv_files_have_exact_bytes() {
        let dir = tempfile::tempdir().unwrap();
        let path = write_csv(
            dir.path(),
            "t.csv",
            "n,deviation",
            &["1,0.5".to_string(), "2,0.25".to_string()],
        )
        .unwrap();
        let text = fs::read_to_string(path).unwrap();
        assert_eq!(text, "n,deviation\n1,0.5\n2,0.25\n");
    }

    #[test]
    fn reports_write_and_track_failures() {
        let dir = tempfile::tempdir().unwrap();
        let mut report = RunReport::new("pressure", "FS2", "abc".into(), 7);
        report.record("gap", true, "ok".into());
        report.record("cross", false, "off by 1".into());
        assert_eq!(report.first_failure().unwrap().name, "cross");
        let path = report.write(dir.path()).unwrap();
        let text = fs::read_to_string(path).unwrap();
        assert!(text.contains("\"subcommand\": \"pressure\""));
        assert!(text.contains("\"passed\": false"));
        assert!(!text.contains("\"conditions\""));
    }
}
