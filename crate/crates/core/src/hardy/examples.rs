//! Registry of truncation families with their expected classification.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::operators::{subspace_fh2, HardyTruncation};
use super::symbol::{winding_index, Symbol, WindingMethod};
use crate::complement::{Label, TruncationFamily};
use crate::error::{Error, Result};
use crate::geodesics::{example51_family, Example51Params};
use crate::pairs::ProjectionPair;
use crate::substrate::{complement_orth, CMatrix, Subspace, TolerancePolicy, C64};

/// Names accepted by [`example_pair`].
pub const EXAMPLE_NAMES: [&str; 8] = [
    "sarason",
    "inner_distinct",
    "koosis_like",
    "codivisible_blaschke",
    "arc_odd",
    "blaschke_odd",
    "timefreq",
    "example51",
];

pub const DEFAULT_LEVELS: [usize; 3] = [32, 64, 128];

/// A family together with the label it is expected to receive.
#[derive(Clone, Debug)]
pub struct ExampleFamily {
    pub name: String,
    pub params: Value,
    pub family: TruncationFamily,
    pub expected: Label,
}

/// One registry entry for listings.
#[derive(Clone, Debug, Serialize)]
pub struct ExampleInfo {
    pub name: &'static str,
    pub level: &'static str,
    pub defaults: Value,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SarasonParams {
    pub f: Symbol,
    pub g: Symbol,
}

impl Default for SarasonParams {
    fn default() -> Self {
        SarasonParams {
            f: Symbol::monomial(1),
            g: Symbol::monomial(2),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct InnerDistinctParams {
    /// Boundary point where the zeros of `f` accumulate.
    pub point_f: C64,
    /// Boundary point where the zeros of `g` accumulate.
    pub point_g: C64,
}

impl Default for InnerDistinctParams {
    fn default() -> Self {
        InnerDistinctParams {
            point_f: C64::from(1.0),
            point_g: C64::from(-1.0),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct KoosisParams {
    /// Mass of the singular inner factor at `z = 1`.
    pub mass: f64,
    /// Half-width in radians of the excluded neighbourhood of `z = 1`.
    pub exclusion: f64,
}

impl Default for KoosisParams {
    fn default() -> Self {
        KoosisParams {
            mass: 1.0,
            exclusion: 0.05,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CodivisibleParams {
    /// Number of zeros of `g` with no partner among the zeros of `f`.
    pub n: usize,
    /// Zeros of `f`.
    pub zeros: Vec<C64>,
    /// Offset between each zero of `f` and its partner zero of `g`.
    pub offset: C64,
}

impl Default for CodivisibleParams {
    fn default() -> Self {
        CodivisibleParams {
            n: 2,
            zeros: vec![
                C64::new(0.5, 0.0),
                C64::new(-0.4, 0.3),
                C64::new(0.1, -0.6),
                C64::new(-0.2, -0.2),
            ],
            offset: C64::new(0.02, 0.0),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ArcOddParams {
    /// Length of the arc `[0, T)`.
    pub arc_length: f64,
}

impl Default for ArcOddParams {
    fn default() -> Self {
        ArcOddParams { arc_length: PI }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BlaschkeOddMode {
    /// Zeros `b_j = 1 - 2^{-j}`.
    Disjoint,
    /// Zeros `±b_j`.
    Symmetric,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BlaschkeOddParams {
    pub mode: BlaschkeOddMode,
}

impl Default for BlaschkeOddParams {
    fn default() -> Self {
        BlaschkeOddParams {
            mode: BlaschkeOddMode::Disjoint,
        }
    }
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TimefreqParams {
    /// Pair `S_I` with the complement of the band-limited space instead of the space itself.
    pub complement: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Example51FamilyParams {
    pub t: f64,
    pub compact: bool,
}

impl Default for Example51FamilyParams {
    fn default() -> Self {
        Example51FamilyParams { t: 0.25, compact: true }
    }
}

pub fn list_examples() -> Vec<ExampleInfo> {
    vec![
        ExampleInfo {
            name: "sarason",
            level: "Fourier window -N..N",
            defaults: (serde_json::to_value(SarasonParams::default()).unwrap()),
        },
        ExampleInfo {
            name: "inner_distinct",
            level: "Fourier window -N..N; floor(log2 N) - 2 zeros per function",
            defaults: (serde_json::to_value(InnerDistinctParams::default()).unwrap()),
        },
        ExampleInfo {
            name: "koosis_like",
            level: "Fourier window -N..N; floor(log2 N) - 2 real zeros of g",
            defaults: (serde_json::to_value(KoosisParams::default()).unwrap()),
        },
        ExampleInfo {
            name: "codivisible_blaschke",
            level: "Fourier window -N..N",
            defaults: (serde_json::to_value(CodivisibleParams::default()).unwrap()),
        },
        ExampleInfo {
            name: "arc_odd",
            level: "2N equispaced points on the circle",
            defaults: (serde_json::to_value(ArcOddParams::default()).unwrap()),
        },
        ExampleInfo {
            name: "blaschke_odd",
            level: "Hardy window 0..N; floor(log2 N) - 2 zeros",
            defaults: (serde_json::to_value(BlaschkeOddParams::default()).unwrap()),
        },
        ExampleInfo {
            name: "timefreq",
            level: "windows of half-width p = round(log2 N) on round(2π(p + 1/2)²) points",
            defaults: (serde_json::to_value(TimefreqParams::default()).unwrap()),
        },
        ExampleInfo {
            name: "example51",
            level: "n_L = N, ambient 2N",
            defaults: (serde_json::to_value(Example51FamilyParams::default()).unwrap()),
        },
    ]
}

fn parse<T: for<'de> Deserialize<'de> + Serialize>(params: &Value) -> Result<(T, Value)> {
    let p: T = if params.is_null() {
        serde_json::from_value(Value::Object(Default::default()))
    } else {
        serde_json::from_value(params.clone())
    }
    .map_err(|e| Error::BadParams(e.to_string()))?;
    let normalized = serde_json::to_value(&p).expect("parameters serialize");
    Ok((p, normalized))
}

/// Number of zeros used at level `n` by the growing-sequence surrogates.
pub fn zeros_at_level(n: usize) -> usize {
    let lg = usize::BITS - 1 - n.max(1).leading_zeros();
    (lg as usize).saturating_sub(2).max(1)
}

fn accumulating_zeros(point: C64, count: usize) -> Vec<C64> {
    (1..=count).map(|j| point * (1.0 - 0.5_f64.powi(j as i32))).collect()
}

fn symbol_index(s: &Symbol) -> Result<i64> {
    winding_index(s, WindingMethod::Rational)
        .or_else(|_| winding_index(s, WindingMethod::Fourier))
        .or_else(|_| winding_index(s, WindingMethod::Harmonic))
}

fn fh2_pair(f: &Symbol, g: &Symbol, trunc: HardyTruncation) -> Result<ProjectionPair> {
    let policy = TolerancePolicy::default();
    let s = subspace_fh2(f, &trunc, &policy)?;
    let t = subspace_fh2(g, &trunc, &policy)?;
    ProjectionPair::from_subspaces(s, t)
}

/// Arc subspace and odd subspace on `2N` equispaced points.
pub fn arc_odd_pair(n: usize, arc_length: f64) -> Result<ProjectionPair> {
    let m = 2 * n;
    let arc: Vec<usize> = (0..m)
        .filter(|&j| 2.0 * PI * (j as f64) / (m as f64) < arc_length)
        .collect();
    let s = Subspace::coordinate(m, &arc);
    let mut odd = CMatrix::zeros(m, n);
    let r = std::f64::consts::FRAC_1_SQRT_2;
    for j in 0..n {
        odd[(j, j)] = C64::from(r);
        odd[(j + n, j)] = C64::from(-r);
    }
    ProjectionPair::from_subspaces(s, Subspace::from_orthonormal(odd))
}

/// Half-width of the time and frequency windows at level `n`.
pub fn timefreq_half_width(n: usize) -> usize {
    (n.max(2) as f64).log2().round() as usize
}

/// Number of points of the discrete circle at level `n`.
pub fn timefreq_points(n: usize) -> usize {
    let p = timefreq_half_width(n) as f64;
    (2.0 * PI * (p + 0.5).powi(2)).round() as usize
}

/// Time-limited and band-limited subspaces of `ℂ^M` with windows `-p..=p`.
pub fn timefreq_subspaces(n: usize) -> (Subspace, Subspace) {
    let p = timefreq_half_width(n) as i64;
    let m = timefreq_points(n);
    let window: Vec<i64> = (-p..=p).collect();
    let idx: Vec<usize> = window.iter().map(|&j| j.rem_euclid(m as i64) as usize).collect();
    let s = Subspace::coordinate(m, &idx);
    let scale = 1.0 / (m as f64).sqrt();
    let mut t = CMatrix::zeros(m, window.len());
    for (c, &k) in window.iter().enumerate() {
        for j in 0..m {
            t[(j, c)] = C64::from_polar(scale, 2.0 * PI * (k * j as i64) as f64 / m as f64);
        }
    }
    (s, Subspace::from_orthonormal(t))
}

/// Builds the named family at the given levels.
pub fn example_pair(name: &str, params: &Value, levels: &[usize]) -> Result<ExampleFamily> {
    let levels = levels.to_vec();
    let (family, expected, normalized) = match name {
        "sarason" => {
            let (p, v): (SarasonParams, _) = parse(params)?;
            p.f.validate()?;
            p.g.validate()?;
            let n = symbol_index(&p.g)? - symbol_index(&p.f)?;
            let expected = if n == 0 { Label::DeltaInf } else { Label::Gamma1(n) };
            let fam = TruncationFamily::new(levels, move |lvl| fh2_pair(&p.f, &p.g, HardyTruncation::l2(lvl)))?;
            (fam, expected, v)
        }
        "inner_distinct" => {
            let (p, v): (InnerDistinctParams, _) = parse(params)?;
            if (p.point_f.norm() - 1.0).abs() > 1e-12 || (p.point_g.norm() - 1.0).abs() > 1e-12 {
                return Err(Error::BadParams(
                    "accumulation points must lie on the unit circle".into(),
                ));
            }
            if (p.point_f - p.point_g).norm() < 1e-9 {
                return Err(Error::BadParams("accumulation points must be distinct".into()));
            }
            let fam = TruncationFamily::new(levels, move |lvl| {
                let k = zeros_at_level(lvl);
                let f = Symbol::blaschke(accumulating_zeros(p.point_f, k));
                let g = Symbol::blaschke(accumulating_zeros(p.point_g, k));
                fh2_pair(&f, &g, HardyTruncation::l2(lvl))
            })?;
            (fam, Label::DeltaInf, v)
        }
        "koosis_like" => {
            let (p, v): (KoosisParams, _) = parse(params)?;
            if p.mass <= 0.0 || p.exclusion <= 0.0 || p.exclusion >= PI {
                return Err(Error::BadParams("mass must be positive and exclusion in (0, π)".into()));
            }
            let fam = TruncationFamily::new(levels, move |lvl| {
                let f = Symbol::SingularInner {
                    mass: p.mass,
                    exclusion: p.exclusion,
                };
                let g = Symbol::blaschke(accumulating_zeros(C64::from(1.0), zeros_at_level(lvl)));
                fh2_pair(&f, &g, HardyTruncation::l2(lvl))
            })?;
            (fam, Label::GammaInfRight, v)
        }
        "codivisible_blaschke" => {
            let (p, v): (CodivisibleParams, _) = parse(params)?;
            let f_zeros = p.zeros.clone();
            let mut g_zeros: Vec<C64> = f_zeros.iter().map(|a| a + p.offset).collect();
            for j in 0..p.n {
                let ang = 2.0 * PI * (j as f64 + 0.5) / (p.n as f64).max(1.0);
                g_zeros.push(C64::from_polar(0.3 + 0.1 * j as f64 / (p.n as f64).max(1.0), ang));
            }
            let all: Vec<C64> = f_zeros.iter().chain(&g_zeros).copied().collect();
            if all.iter().any(|a| a.norm() >= 0.9) {
                return Err(Error::BadParams("zeros must have modulus below 0.9".into()));
            }
            for (i, a) in all.iter().enumerate() {
                if all[..i].iter().any(|b| (a - b).norm() < 1e-6) {
                    return Err(Error::DuplicateZeros);
                }
            }
            let f = Symbol::blaschke(f_zeros);
            let g = Symbol::blaschke(g_zeros);
            let expected = if p.n == 0 {
                Label::DeltaInf
            } else {
                Label::Gamma1(p.n as i64)
            };
            let fam = TruncationFamily::new(levels, move |lvl| fh2_pair(&f, &g, HardyTruncation::l2(lvl)))?;
            (fam, expected, v)
        }
        "arc_odd" => {
            let (p, v): (ArcOddParams, _) = parse(params)?;
            if !(p.arc_length > 0.0 && p.arc_length <= PI) {
                return Err(Error::BadParams("arc_length must lie in (0, π]".into()));
            }
            let fam = TruncationFamily::new(levels, move |lvl| arc_odd_pair(lvl, p.arc_length))?;
            (fam, Label::DeltaInf, v)
        }
        "blaschke_odd" => {
            let (p, v): (BlaschkeOddParams, _) = parse(params)?;
            let fam = TruncationFamily::new(levels, move |lvl| {
                let trunc = HardyTruncation::h2(lvl);
                let base = accumulating_zeros(C64::from(1.0), zeros_at_level(lvl));
                let zeros = match p.mode {
                    BlaschkeOddMode::Disjoint => base,
                    BlaschkeOddMode::Symmetric => base.iter().flat_map(|&b| [b, -b]).collect(),
                };
                let s = subspace_fh2(&Symbol::blaschke(zeros), &trunc, &TolerancePolicy::default())?;
                let odd: Vec<usize> = (0..trunc.dim()).filter(|i| i % 2 == 1).collect();
                ProjectionPair::from_subspaces(s, Subspace::coordinate(trunc.dim(), &odd))
            })?;
            (fam, Label::DeltaInf, v)
        }
        "timefreq" => {
            let (p, v): (TimefreqParams, _) = parse(params)?;
            let complement = p.complement;
            let fam = TruncationFamily::new(levels, move |lvl| {
                let (s, t) = timefreq_subspaces(lvl);
                let t = if complement { complement_orth(&t) } else { t };
                ProjectionPair::from_subspaces(s, t)
            })?;
            let expected = if complement {
                Label::GammaInfLeft
            } else {
                Label::DeltaInf
            };
            (fam, expected, v)
        }
        "example51" => {
            let (p, v): (Example51FamilyParams, _) = parse(params)?;
            if !(p.t > -0.5 && p.t < 0.5) {
                return Err(Error::BadParams("t must lie in (-1/2, 1/2)".into()));
            }
            let expected = if p.compact || p.t == 0.0 {
                Label::GammaInfLeft
            } else {
                Label::DeltaInf
            };
            let fam = TruncationFamily::new(levels, move |lvl| {
                example51_family(&Example51Params::standard(lvl, p.compact, p.t))
            })?;
            (fam, expected, v)
        }
        other => return Err(Error::UnknownExample(other.to_string())),
    };
    Ok(ExampleFamily {
        name: name.to_string(),
        params: normalized,
        family,
        expected,
    })
}
