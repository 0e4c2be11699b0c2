//! Experiment configuration: the JSON schema, builders for the core types,
//! and the built-in fixtures.
//!
//! A config is a single JSON document (see `schema/config.schema.json`).
//! Every randomized step draws from `run.seed`, so a config determines its
//! outputs exactly.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::base::BaseSystem;
use crate::error::{Error, Result};
use crate::matrix::MatrixCocycle;
use crate::potential::{PotTable, Potential};
use crate::shift::{AdjacencyRule, Alphabet, BipCertificate, RandomShift};

/// Names accepted by [`fixture`], in the order they are documented.
pub const FIXTURE_NAMES: [&str; 8] =
    ["FS2", "FS2-BERNOULLI", "GM", "GEO", "P2", "P2-STOCHASTIC", "DS3", "NOBIP"];

/// Top-level experiment description.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub name: String,
    pub base: BaseSpec,
    pub shift: ShiftSpec,
    pub potential: PotentialSpec,
    /// Big-images/preimages certificate; `check-bip` and the recurrence
    /// diagnostics need one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateSpec>,
    /// Nonnegative matrices indexed by base state; enables `matrix-pf` and
    /// `stationary`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrices: Option<Vec<Vec<Vec<f64>>>>,
    #[serde(default)]
    pub run: RunSpec,
    #[serde(default)]
    pub output: OutputSpec,
}

/// Base dynamics over the finite probability space of environments.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BaseSpec {
    pub mode: BaseMode,
    /// Period of the cyclic rotation (mode `cyclic`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub period: Option<usize>,
    /// Environment labels along one sampled orbit (mode `sampled_path`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<usize>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BaseMode {
    Cyclic,
    SampledPath,
}

/// Fiber alphabet and adjacency data.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShiftSpec {
    pub alphabet: AlphabetKind,
    /// Alphabet sizes per environment label (finite alphabets only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sizes: Option<Vec<usize>>,
    pub rule: RuleSpec,
    /// Truncation level L for countable alphabets: symbols 0..L survive.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation: Option<usize>,
    /// Recorded mass bound for the discarded tail; metadata only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon_tail: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlphabetKind {
    Finite,
    Countable,
}

/// Adjacency source. `explicit` matrices are indexed by environment label.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RuleSpec {
    Explicit { matrices: Vec<Vec<Vec<u8>>> },
    Full,
    Band { width: usize },
    Renewal,
}

/// Potential data. `kappa`/`r` override the built-in Hölder envelope; table
/// potentials must bring their own.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PotentialSpec {
    pub kind: PotentialKind,
    /// Symbol weights for `bernoulli`: φ(w) = log probs\[w₀\].
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probs: Option<Vec<f64>>,
    /// Entrywise-positive matrices for `matrix_log` (defaults to the
    /// top-level `matrices`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrices: Option<Vec<Vec<Vec<f64>>>>,
    /// Word length read by a `tables` potential.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
    /// One value table per base state (`tables` only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<TableSpec>>,
    /// Variation envelope scale per base state: V_n(φ^ω) ≤ κ_ω rⁿ.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<Vec<f64>>,
    /// Variation envelope ratio, in (0, 1).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PotentialKind {
    Zero,
    Bernoulli,
    Geometric,
    MatrixLog,
    Tables,
}

/// One state's value table. Exactly one field must be present and its shape
/// must match the declared depth.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d1: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d2: Option<Vec<Vec<f64>>>,
    /// Sparse table: list of (word, value) pairs, all words of the depth.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dk: Option<Vec<(Vec<usize>, f64)>>,
}

/// Big-images/preimages certificate: state sets and per-state symbol families.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateSpec {
    pub omega_bi: Vec<usize>,
    pub omega_bp: Vec<usize>,
    /// Image family per base state (read on Ω_bi).
    pub i_bi: Vec<Vec<usize>>,
    /// Preimage family per base state (read on Ω_bp).
    pub i_bp: Vec<Vec<usize>>,
}

/// Run parameters shared by all subcommands. Defaults are sized for the
/// shipped fixtures.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunSpec {
    /// Anchor symbol a for Gurevič partition functions.
    pub target: usize,
    /// Partition-table horizon for pressure, divergence, and recurrence.
    pub n_max: usize,
    /// Truncation order of the power series Σ sⁿ𝒵ₙ.
    pub series_n_max: usize,
    /// Schedule length: radii s_j = (1 − 2^{−j})e^{−P̂} for j = 1..=j_max.
    pub j_max: usize,
    /// Difference quotients averaged by the pressure estimator.
    pub q: usize,
    /// Mixing-time cap defining the inducing set Ω*.
    pub omega_star_cap: usize,
    /// Hard bound on the pressure gap; null records without enforcing.
    pub gap_tol: Option<f64>,
    /// Cylinder depth of the dual fixed-point measure.
    pub dual_depth: usize,
    /// Total-variation step tolerance for fixed-point sweeps.
    pub dual_tol: f64,
    /// Sweep cap for every fixed-point iteration.
    pub max_sweeps: usize,
    /// Gibbs battery checks word lengths 2..=gibbs_max_len.
    pub gibbs_max_len: usize,
    /// Exhaustive-enumeration cap; beyond it the Gibbs battery samples.
    pub sample_cap: u64,
    /// Seed for every randomized step.
    pub seed: u64,
    /// Search horizon for recurrence times and mixing diagnostics.
    pub horizon: usize,
    /// Iterate count for the operator-convergence deviation series.
    pub exactness_n_max: usize,
    /// Length of the backward-product deviation series.
    pub backward_n_max: usize,
    pub tolerances: Tolerances,
}

impl Default for RunSpec {
    fn default() -> Self {
        RunSpec {
            target: 0,
            n_max: 60,
            series_n_max: 600_000,
            j_max: 16,
            q: 5,
            omega_star_cap: 8,
            gap_tol: Some(1e-6),
            dual_depth: 2,
            dual_tol: 1e-10,
            max_sweeps: 100_000,
            gibbs_max_len: 10,
            sample_cap: 100_000,
            seed: 0,
            horizon: 40,
            exactness_n_max: 100,
            backward_n_max: 200,
            tolerances: Tolerances::default(),
        }
    }
}

/// Hard assertion tolerances enforced by the runner.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    /// Max conformality residual of the reported measure.
    pub conformality: f64,
    /// Per-state total-variation agreement of the two measure constructions.
    pub tv_agree: f64,
    /// Agreement between the series eigenvalue and its duality re-estimate.
    pub lambda_pair: f64,
    /// Entrywise agreement between seeded power-iteration restarts.
    pub restart_agree: f64,
    /// Stationarity defect of the reported distribution.
    pub stationary_agree: f64,
    /// Agreement between matrix-cocycle log λ averages and the pressure.
    pub pressure_cross: f64,
    /// Final backward-product deviation from the rank-one limit.
    pub rank_one: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            conformality: 1e-6,
            tv_agree: 1e-6,
            lambda_pair: 1e-8,
            restart_agree: 1e-8,
            stationary_agree: 1e-8,
            pressure_cross: 1e-4,
            rank_one: 1e-6,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSpec {
    /// Output directory; the CLI `--out` flag overrides it.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dir: Option<String>,
}

impl ExperimentConfig {
    /// Load a config from a JSON file.
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }

    /// SHA-256 of the canonical JSON serialization; stable across re-runs.
    pub fn digest(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("config serializes");
        let mut hasher = Sha256::new();
        hasher.update(&bytes);
        let out = hasher.finalize();
        out.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn build_base(&self) -> Result<BaseSystem> {
        match self.base.mode {
            BaseMode::Cyclic => {
                if self.base.labels.is_some() {
                    return Err(Error::Config("a cyclic base takes no labels".into()));
                }
                let p = self
                    .base
                    .period
                    .ok_or_else(|| Error::Config("cyclic base needs a period".into()))?;
                if p == 0 {
                    return Err(Error::Config("base period must be positive".into()));
                }
                Ok(BaseSystem::cyclic(p))
            }
            BaseMode::SampledPath => {
                if self.base.period.is_some() {
                    return Err(Error::Config("a sampled path takes no period".into()));
                }
                let labels = self
                    .base
                    .labels
                    .clone()
                    .ok_or_else(|| Error::Config("sampled path needs labels".into()))?;
                if labels.is_empty() {
                    return Err(Error::Config("sampled path needs at least one label".into()));
                }
                Ok(BaseSystem::sampled_path(labels))
            }
        }
    }

    pub fn build_shift(&self) -> Result<RandomShift> {
        let base = self.build_base()?;
        let rule = match &self.shift.rule {
            RuleSpec::Explicit { matrices } => {
                let mats = matrices
                    .iter()
                    .map(|m| m.iter().map(|row| row.iter().map(|&e| e != 0).collect()).collect())
                    .collect();
                AdjacencyRule::Explicit(mats)
            }
            RuleSpec::Full => AdjacencyRule::Full,
            RuleSpec::Band { width } => AdjacencyRule::Band { width: *width },
            RuleSpec::Renewal => AdjacencyRule::Renewal,
        };
        match self.shift.alphabet {
            AlphabetKind::Finite => {
                if self.shift.truncation.is_some() {
                    return Err(Error::Config(
                        "truncation applies to countable alphabets only".into(),
                    ));
                }
                let sizes = self
                    .shift
                    .sizes
                    .clone()
                    .ok_or_else(|| Error::Config("finite alphabet needs sizes".into()))?;
                RandomShift::new(base, Alphabet::Finite(sizes), rule, 0)
            }
            AlphabetKind::Countable => {
                if self.shift.sizes.is_some() {
                    return Err(Error::Config(
                        "sizes apply to finite alphabets only".into(),
                    ));
                }
                let l = self
                    .shift
                    .truncation
                    .ok_or_else(|| Error::Config("countable alphabet needs a truncation".into()))?;
                RandomShift::new(base, Alphabet::Countable, rule, l)
            }
        }
    }

    pub fn build_potential(&self, shift: &RandomShift) -> Result<Potential> {
        let spec = &self.potential;
        let forbid = |set: bool, field: &str, kind: &str| -> Result<()> {
            if set {
                Err(Error::Config(format!("potential field `{field}` is not used by `{kind}`")))
            } else {
                Ok(())
            }
        };
        let pot = match spec.kind {
            PotentialKind::Zero => {
                forbid(spec.probs.is_some(), "probs", "zero")?;
                forbid(spec.matrices.is_some(), "matrices", "zero")?;
                forbid(spec.values.is_some(), "values", "zero")?;
                Potential::zero(shift)
            }
            PotentialKind::Bernoulli => {
                forbid(spec.matrices.is_some(), "matrices", "bernoulli")?;
                forbid(spec.values.is_some(), "values", "bernoulli")?;
                let probs = spec
                    .probs
                    .as_ref()
                    .ok_or_else(|| Error::Config("bernoulli potential needs probs".into()))?;
                Potential::bernoulli(shift, probs)?
            }
            PotentialKind::Geometric => {
                forbid(spec.probs.is_some(), "probs", "geometric")?;
                forbid(spec.matrices.is_some(), "matrices", "geometric")?;
                forbid(spec.values.is_some(), "values", "geometric")?;
                Potential::geometric(shift)
            }
            PotentialKind::MatrixLog => {
                forbid(spec.probs.is_some(), "probs", "matrix_log")?;
                forbid(spec.values.is_some(), "values", "matrix_log")?;
                let mats = spec.matrices.as_ref().or(self.matrices.as_ref()).ok_or_else(|| {
                    Error::Config("matrix_log potential needs matrices".into())
                })?;
                Potential::matrix_log(shift, mats)?
            }
            PotentialKind::Tables => {
                forbid(spec.probs.is_some(), "probs", "tables")?;
                forbid(spec.matrices.is_some(), "matrices", "tables")?;
                let depth = spec
                    .depth
                    .ok_or_else(|| Error::Config("tables potential needs a depth".into()))?;
                let values = spec
                    .values
                    .as_ref()
                    .ok_or_else(|| Error::Config("tables potential needs values".into()))?;
                let kappa = spec.kappa.clone().ok_or_else(|| {
                    Error::Config("tables potential needs an explicit kappa envelope".into())
                })?;
                let r = spec.r.ok_or_else(|| {
                    Error::Config("tables potential needs an explicit envelope ratio r".into())
                })?;
                let tables =
                    values.iter().map(|t| t.to_table(depth)).collect::<Result<Vec<_>>>()?;
                return Potential::from_tables(tables, kappa, r);
            }
        };
        match (spec.kappa.clone(), spec.r) {
            (Some(kappa), Some(r)) => pot.with_envelope(kappa, r),
            (None, None) => Ok(pot),
            _ => Err(Error::Config("kappa and r must be given together".into())),
        }
    }

    pub fn build_certificate(&self, shift: &RandomShift) -> Result<Option<BipCertificate>> {
        let Some(spec) = &self.certificate else { return Ok(None) };
        let n = shift.base().len();
        for (field, states) in [("omega_bi", &spec.omega_bi), ("omega_bp", &spec.omega_bp)] {
            if let Some(&s) = states.iter().find(|&&s| s >= n) {
                return Err(Error::Config(format!("certificate {field} state {s} out of range")));
            }
        }
        for (field, fams) in [("i_bi", &spec.i_bi), ("i_bp", &spec.i_bp)] {
            if fams.len() != n {
                return Err(Error::Config(format!(
                    "certificate {field} needs one family per base state ({n})"
                )));
            }
        }
        Ok(Some(BipCertificate {
            omega_bi: crate::base::StateSet::from_indices(n, &spec.omega_bi),
            omega_bp: crate::base::StateSet::from_indices(n, &spec.omega_bp),
            i_bi: spec.i_bi.clone(),
            i_bp: spec.i_bp.clone(),
        }))
    }

    pub fn build_cocycle(&self) -> Result<Option<MatrixCocycle>> {
        match &self.matrices {
            None => Ok(None),
            Some(mats) => Ok(Some(MatrixCocycle::new(self.build_base()?, mats.clone())?)),
        }
    }
}

impl TableSpec {
    fn to_table(&self, depth: usize) -> Result<PotTable> {
        match (self.d1.as_ref(), self.d2.as_ref(), self.dk.as_ref()) {
            (Some(v), None, None) => {
                if depth != 1 {
                    return Err(Error::Config("d1 table declared at depth != 1".into()));
                }
                Ok(PotTable::D1(v.clone()))
            }
            (None, Some(m), None) => {
                if depth != 2 {
                    return Err(Error::Config("d2 table declared at depth != 2".into()));
                }
                Ok(PotTable::D2(m.clone()))
            }
            (None, None, Some(pairs)) => {
                let mut map = BTreeMap::new();
                for (word, value) in pairs {
                    if word.len() != depth {
                        return Err(Error::Config(format!(
                            "table word {word:?} does not have depth {depth}"
                        )));
                    }
                    if map.insert(word.clone(), *value).is_some() {
                        return Err(Error::Config(format!("duplicate table word {word:?}")));
                    }
                }
                Ok(PotTable::Dk(map))
            }
            _ => Err(Error::Config("each table needs exactly one of d1, d2, dk".into())),
        }
    }
}

fn finite_shift(period: usize, sizes: Vec<usize>, rule: RuleSpec) -> (BaseSpec, ShiftSpec) {
    (
        BaseSpec { mode: BaseMode::Cyclic, period: Some(period), labels: None },
        ShiftSpec {
            alphabet: AlphabetKind::Finite,
            sizes: Some(sizes),
            rule,
            truncation: None,
            epsilon_tail: None,
        },
    )
}

fn potential_of(kind: PotentialKind) -> PotentialSpec {
    PotentialSpec {
        kind,
        probs: None,
        matrices: None,
        depth: None,
        values: None,
        kappa: None,
        r: None,
    }
}

fn uniform_cert(n: usize, i_bi: Vec<usize>, i_bp: Vec<usize>) -> CertificateSpec {
    CertificateSpec {
        omega_bi: (0..n).collect(),
        omega_bp: (0..n).collect(),
        i_bi: vec![i_bi; n],
        i_bp: vec![i_bp; n],
    }
}

/// Built-in experiment, by (case-insensitive) name.
///
/// - `FS2`: full shift on two symbols, φ ≡ 0.
/// - `FS2-BERNOULLI`: full shift on two symbols, φ(w) = log p_{w₀} with
///   p = (0.3, 0.7).
/// - `GM`: golden-mean shift, adjacency [[1,1],[1,0]], φ ≡ 0.
/// - `GEO`: full shift on a countable alphabet truncated at L = 20,
///   φ(w) = −(w₀+1)·log 2.
/// - `P2`: period-2 environment alternating [[1,1],[1,0]] and [[1,1],[0,1]],
///   φ ≡ 0.
/// - `P2-STOCHASTIC`: period-2 environment of row-stochastic matrices with
///   φ = log of the entries.
/// - `DS3`: period-2 environment of 3×3 doubly stochastic matrices,
///   φ = log of the entries.
/// - `NOBIP`: band shift j ∈ {i, i+1} on a countable alphabet — its
///   certificate fails on purpose.
pub fn fixture(name: &str) -> Result<ExperimentConfig> {
    let key = name.trim().to_ascii_uppercase().replace('_', "-");
    let config = match key.as_str() {
        "FS2" => {
            let (base, shift) = finite_shift(1, vec![2], RuleSpec::Full);
            ExperimentConfig {
                name: "FS2".into(),
                base,
                shift,
                potential: potential_of(PotentialKind::Zero),
                certificate: Some(uniform_cert(1, vec![0], vec![0])),
                matrices: Some(vec![vec![vec![1.0, 1.0], vec![1.0, 1.0]]]),
                run: RunSpec::default(),
                output: OutputSpec::default(),
            }
        }
        "FS2-BERNOULLI" => {
            let (base, shift) = finite_shift(1, vec![2], RuleSpec::Full);
            let mut potential = potential_of(PotentialKind::Bernoulli);
            potential.probs = Some(vec![0.3, 0.7]);
            ExperimentConfig {
                name: "FS2-BERNOULLI".into(),
                base,
                shift,
                potential,
                certificate: Some(uniform_cert(1, vec![0], vec![0])),
                matrices: Some(vec![vec![vec![0.3, 0.7], vec![0.3, 0.7]]]),
                run: RunSpec::default(),
                output: OutputSpec::default(),
            }
        }
        "GM" => {
            let adjacency = vec![vec![vec![1, 1], vec![1, 0]]];
            let (base, shift) =
                finite_shift(1, vec![2], RuleSpec::Explicit { matrices: adjacency });
            ExperimentConfig {
                name: "GM".into(),
                base,
                shift,
                potential: potential_of(PotentialKind::Zero),
                certificate: Some(uniform_cert(1, vec![0], vec![0])),
                matrices: Some(vec![vec![vec![1.0, 1.0], vec![1.0, 0.0]]]),
                run: RunSpec::default(),
                output: OutputSpec::default(),
            }
        }
        "GEO" => ExperimentConfig {
            name: "GEO".into(),
            base: BaseSpec { mode: BaseMode::Cyclic, period: Some(1), labels: None },
            shift: ShiftSpec {
                alphabet: AlphabetKind::Countable,
                sizes: None,
                rule: RuleSpec::Full,
                truncation: Some(20),
                epsilon_tail: Some((2.0f64).powi(-20)),
            },
            potential: potential_of(PotentialKind::Geometric),
            certificate: Some(uniform_cert(1, vec![0], vec![0])),
            matrices: None,
            run: RunSpec::default(),
            output: OutputSpec::default(),
        },
        "P2" => {
            let adjacency = vec![
                vec![vec![1, 1], vec![1, 0]],
                vec![vec![1, 1], vec![0, 1]],
            ];
            let (base, shift) =
                finite_shift(2, vec![2, 2], RuleSpec::Explicit { matrices: adjacency });
            ExperimentConfig {
                name: "P2".into(),
                base,
                shift,
                potential: potential_of(PotentialKind::Zero),
                certificate: Some(CertificateSpec {
                    omega_bi: vec![0, 1],
                    omega_bp: vec![0, 1],
                    i_bi: vec![vec![1], vec![0]],
                    i_bp: vec![vec![0], vec![0]],
                }),
                matrices: Some(vec![
                    vec![vec![1.0, 1.0], vec![1.0, 0.0]],
                    vec![vec![1.0, 1.0], vec![0.0, 1.0]],
                ]),
                run: RunSpec::default(),
                output: OutputSpec::default(),
            }
        }
        "P2-STOCHASTIC" => {
            let (base, shift) = finite_shift(2, vec![2, 2], RuleSpec::Full);
            let mut potential = potential_of(PotentialKind::MatrixLog);
            // κ·r dominates the one-step variations log 9 and log(7/3).
            potential.kappa = Some(vec![4.4, 1.7]);
            potential.r = Some(0.5);
            ExperimentConfig {
                name: "P2-STOCHASTIC".into(),
                base,
                shift,
                potential,
                certificate: Some(uniform_cert(2, vec![0], vec![0])),
                matrices: Some(vec![
                    vec![vec![0.9, 0.1], vec![0.2, 0.8]],
                    vec![vec![0.5, 0.5], vec![0.3, 0.7]],
                ]),
                run: RunSpec::default(),
                output: OutputSpec::default(),
            }
        }
        "DS3" => {
            let (base, shift) = finite_shift(2, vec![3, 3], RuleSpec::Full);
            let mut potential = potential_of(PotentialKind::MatrixLog);
            // κ·r dominates the one-step variations log 2.5 and log 3.
            potential.kappa = Some(vec![1.9, 2.2]);
            potential.r = Some(0.5);
            ExperimentConfig {
                name: "DS3".into(),
                base,
                shift,
                potential,
                certificate: Some(uniform_cert(2, vec![0], vec![0])),
                matrices: Some(vec![
                    vec![vec![0.5, 0.3, 0.2], vec![0.2, 0.5, 0.3], vec![0.3, 0.2, 0.5]],
                    vec![vec![0.6, 0.2, 0.2], vec![0.2, 0.6, 0.2], vec![0.2, 0.2, 0.6]],
                ]),
                run: RunSpec::default(),
                output: OutputSpec::default(),
            }
        }
        "NOBIP" => ExperimentConfig {
            name: "NOBIP".into(),
            base: BaseSpec { mode: BaseMode::Cyclic, period: Some(1), labels: None },
            shift: ShiftSpec {
                alphabet: AlphabetKind::Countable,
                sizes: None,
                rule: RuleSpec::Band { width: 1 },
                truncation: Some(16),
                epsilon_tail: None,
            },
            potential: potential_of(PotentialKind::Geometric),
            certificate: Some(uniform_cert(1, vec![0, 1, 2], vec![0, 1, 2])),
            matrices: None,
            run: RunSpec::default(),
            output: OutputSpec::default(),
        },
        _ => return Err(Error::UnknownFixture(name.to_string())),
    };
    Ok(config)
}
