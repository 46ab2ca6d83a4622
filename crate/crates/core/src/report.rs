//! JSON reports shared by the command-line tool and the C interface.

use serde::Serialize;
use serde_json::Value;

use crate::complement::{
    classify_family, classify_pair, decide_finite, perturb_stability_probe, DecayMetric, Decision, Label, LevelDims,
    PairClass, TruncationFamily,
};
use crate::error::Result;
use crate::hardy::example_pair;
use crate::pairs::{analyze, difference_product_check, DifferenceProductReport, ProjectionPair};
use crate::substrate::{MatrixJson, TolerancePolicy};

#[derive(Clone, Debug, Serialize)]
pub struct DecaySummary {
    pub score: f64,
    pub stabilized: bool,
}

impl From<&DecayMetric> for DecaySummary {
    fn from(d: &DecayMetric) -> Self {
        DecaySummary {
            score: d.score,
            stabilized: d.stabilized,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CertificateJson {
    pub z: MatrixJson,
    pub z_dim: usize,
    pub residual_s: f64,
    pub residual_t: f64,
    pub dist_ps: f64,
    pub dist_pt: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct AnalysisJson {
    pub n: usize,
    pub rank_p: usize,
    pub rank_q: usize,
    pub d_11: usize,
    pub d_00: usize,
    pub d_10: usize,
    pub d_01: usize,
    pub generic_dim: usize,
    pub angles: Vec<f64>,
    pub reconstruction_residual: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProbeJson {
    pub seed: u64,
    pub radius: f64,
    pub trials: usize,
    pub success_fraction: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct AnalyzeReport {
    pub label: Label,
    pub index: Option<i64>,
    pub dims_per_level: Vec<LevelDims>,
    pub decay: Option<DecaySummary>,
    pub certificate: Option<CertificateJson>,
    pub distances: Value,
    pub reason: Option<String>,
    pub analysis: AnalysisJson,
    pub spectral: DifferenceProductReport,
    pub probe: Option<ProbeJson>,
    pub seed: u64,
}

impl AnalyzeReport {
    pub fn has_complement(&self) -> bool {
        self.certificate.is_some()
    }
}

/// Probe settings for [`analyze_report`].
#[derive(Clone, Copy, Debug)]
pub struct ProbeConfig {
    pub seed: u64,
    pub trials: usize,
    /// `None` picks half of `min(1 - dist_ps, 1 - dist_pt)`.
    pub radius: Option<f64>,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        ProbeConfig {
            seed: 0,
            trials: 16,
            radius: None,
        }
    }
}

/// Five-space analysis, spectral relations, complement decision and stability probe of one pair.
pub fn analyze_report(pair: &ProjectionPair, policy: &TolerancePolicy, probe: &ProbeConfig) -> Result<AnalyzeReport> {
    let a = analyze(pair, policy)?;
    let class: PairClass = classify_pair(pair, policy)?;
    let spectral = difference_product_check(pair, policy)?;
    let decision = decide_finite(pair, policy)?;
    let mut distances = serde_json::json!({ "p_q": pair.distance() });
    let (certificate, reason, probe_json) = match decision {
        Decision::Certificate(c) => {
            distances["p_witness"] = c.dist_ps.into();
            distances["witness_q"] = c.dist_pt.into();
            let radius = probe.radius.unwrap_or(0.5 * (1.0 - c.dist_ps).min(1.0 - c.dist_pt));
            let frac = perturb_stability_probe(pair, radius, probe.trials, probe.seed, policy)?;
            let cj = CertificateJson {
                z: MatrixJson::from_matrix(&c.z.basis),
                z_dim: c.z.dim(),
                residual_s: c.residual_s,
                residual_t: c.residual_t,
                dist_ps: c.dist_ps,
                dist_pt: c.dist_pt,
            };
            (
                Some(cj),
                None,
                Some(ProbeJson {
                    seed: probe.seed,
                    radius,
                    trials: probe.trials,
                    success_fraction: frac,
                }),
            )
        }
        Decision::NoComplement { reason } => (None, Some(reason), None),
    };
    Ok(AnalyzeReport {
        label: class.label,
        index: class.index,
        dims_per_level: class.dims_per_level,
        decay: None,
        certificate,
        distances,
        reason,
        analysis: AnalysisJson {
            n: a.n,
            rank_p: pair.rank_p(),
            rank_q: pair.rank_q(),
            d_11: a.d11,
            d_00: a.d00,
            d_10: a.d10,
            d_01: a.d01,
            generic_dim: a.generic_dim(),
            angles: a.angles.clone(),
            reconstruction_residual: a.reconstruction_residual,
        },
        spectral,
        probe: probe_json,
        seed: probe.seed,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassifyReport {
    pub label: Label,
    pub index: Option<i64>,
    pub dims_per_level: Vec<LevelDims>,
    pub decay: Option<DecaySummary>,
    pub certificate: Option<CertificateJson>,
    pub distances: Value,
    pub example: Option<String>,
    pub params: Value,
    pub levels: Vec<usize>,
    pub expected: Option<Label>,
    pub diagnostics: Value,
}

/// Classifies a family and packages the per-level diagnostics.
pub fn classify_report(
    family: &TruncationFamily,
    example: Option<&str>,
    params: Value,
    expected: Option<Label>,
    policy: &TolerancePolicy,
) -> Result<ClassifyReport> {
    let class = classify_family(family, policy)?;
    let dist: Vec<f64> = family.pairs()?.iter().map(|p| p.distance()).collect();
    Ok(ClassifyReport {
        label: class.label.clone(),
        index: class.index,
        dims_per_level: class.dims_per_level.clone(),
        decay: class.decay.as_ref().map(DecaySummary::from),
        certificate: None,
        distances: serde_json::json!({ "p_q_per_level": dist }),
        example: example.map(str::to_string),
        params,
        levels: family.levels.clone(),
        expected,
        diagnostics: serde_json::json!({
            "a0": class.decay,
            "ps_tperp": class.decay_ps_tperp,
            "pt_sperp": class.decay_pt_sperp,
        }),
    })
}

/// Classifies a registered example.
pub fn classify_example(
    name: &str,
    params: &Value,
    levels: &[usize],
    policy: &TolerancePolicy,
) -> Result<ClassifyReport> {
    let ex = example_pair(name, params, levels)?;
    classify_report(
        &ex.family,
        Some(name),
        ex.params.clone(),
        Some(ex.expected.clone()),
        policy,
    )
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serialization");
    s.push('\n');
    s
}
