//! Heuristic classification of truncation families into the components of the
//! space of pairs.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::pairs::{analyze, Dims, PairAnalysis, ProjectionPair};
use crate::substrate::{complement_orth, singular_values, TolerancePolicy};

/// Component label of a pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Label {
    /// Finite-dimensional pair of equal rank `i` and corank `j`.
    DeltaFin(usize, usize),
    DeltaInf,
    /// Finite-dimensional pair of different ranks.
    GammaRank,
    /// Compact generic part with index `n ≠ 0`.
    Gamma1(i64),
    /// `S ∩ T⊥` finite, `S⊥ ∩ T` infinite.
    GammaInfLeft,
    /// `S ∩ T⊥` infinite, `S⊥ ∩ T` finite.
    GammaInfRight,
    Undetermined,
}

impl Label {
    /// True for labels on the side where a common complement exists.
    pub fn is_delta(&self) -> bool {
        matches!(self, Label::DeltaFin(..) | Label::DeltaInf)
    }

    pub fn is_gamma(&self) -> bool {
        matches!(
            self,
            Label::GammaRank | Label::Gamma1(_) | Label::GammaInfLeft | Label::GammaInfRight
        )
    }

    /// Label of the swapped pair `(Q, P)`.
    pub fn swapped(&self) -> Label {
        match self {
            Label::DeltaFin(i, j) => Label::DeltaFin(*i, *j),
            Label::Gamma1(n) => Label::Gamma1(-n),
            Label::GammaInfLeft => Label::GammaInfRight,
            Label::GammaInfRight => Label::GammaInfLeft,
            other => other.clone(),
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::DeltaFin(i, j) => write!(f, "Delta_fin({i},{j})"),
            Label::DeltaInf => write!(f, "Delta_inf"),
            Label::GammaRank => write!(f, "Gamma_rank"),
            Label::Gamma1(n) => write!(f, "Gamma_1({n})"),
            Label::GammaInfLeft => write!(f, "Gamma_inf_left"),
            Label::GammaInfRight => write!(f, "Gamma_inf_right"),
            Label::Undetermined => write!(f, "Undetermined"),
        }
    }
}

impl FromStr for Label {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("unknown label `{s}`"));
        let inner = |prefix: &str| s.strip_prefix(prefix).and_then(|r| r.strip_suffix(')'));
        match s {
            "Delta_inf" => return Ok(Label::DeltaInf),
            "Gamma_rank" => return Ok(Label::GammaRank),
            "Gamma_inf_left" => return Ok(Label::GammaInfLeft),
            "Gamma_inf_right" => return Ok(Label::GammaInfRight),
            "Undetermined" => return Ok(Label::Undetermined),
            _ => {}
        }
        if let Some(r) = inner("Gamma_1(") {
            return r.trim().parse().map(Label::Gamma1).map_err(|_| bad());
        }
        if let Some(r) = inner("Delta_fin(") {
            let mut it = r.split(',').map(|x| x.trim().parse::<usize>());
            if let (Some(Ok(i)), Some(Ok(j)), None) = (it.next(), it.next(), it.next()) {
                return Ok(Label::DeltaFin(i, j));
            }
        }
        Err(bad())
    }
}

impl Serialize for Label {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Label {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Cauchy threshold for stabilization across the two largest levels.
pub const CAUCHY_TOL: f64 = 1e-3;
/// Values below this count as decayed.
pub const DECAY_LEVEL: f64 = 1e-2;
/// Threshold for the mass counted by the score.
pub const MASS_LEVEL: f64 = 0.1;
/// Minimal fraction of values above [`MASS_LEVEL`] for non-compact-like behaviour.
pub const MASS_FRACTION: f64 = 0.05;
/// Relative floor below which a singular value is treated as zero.
pub const ZERO_FLOOR: f64 = 1e-10;

/// Finite-truncation surrogate for compactness of an operator observed through
/// its singular values at increasing levels.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayMetric {
    /// Fraction of nonzero singular values above `0.1` at the largest level.
    pub score: f64,
    /// `|σ_k(last) - σ_k(previous)| ≤ 10⁻³` for every `k`.
    pub stabilized: bool,
    /// The number of values above `10⁻²` is the same at the two largest levels.
    pub decays: bool,
    pub compact_like: bool,
    pub noncompact_like: bool,
}

fn mass_fraction(list: &[f64]) -> f64 {
    let top = list.iter().copied().fold(1.0, f64::max);
    let nonzero = list.iter().filter(|&&x| x > ZERO_FLOOR * top).count();
    if nonzero == 0 {
        return 0.0;
    }
    list.iter().filter(|&&x| x > MASS_LEVEL).count() as f64 / nonzero as f64
}

/// Evaluates the decay surrogate on one list of singular values per level,
/// ordered by increasing level. Lists are sorted internally.
pub fn decay_metric(levels: &[Vec<f64>]) -> Result<DecayMetric> {
    if levels.len() < 3 {
        return Err(Error::InsufficientLevels {
            needed: 3,
            got: levels.len(),
        });
    }
    let sorted: Vec<Vec<f64>> = levels
        .iter()
        .map(|l| {
            let mut v = l.clone();
            v.sort_by(|a, b| b.total_cmp(a));
            v
        })
        .collect();
    let last = &sorted[sorted.len() - 1];
    let prev = &sorted[sorted.len() - 2];
    let len = last.len().max(prev.len());
    let at = |v: &Vec<f64>, k: usize| v.get(k).copied().unwrap_or(0.0);
    let stabilized = (0..len).all(|k| (at(last, k) - at(prev, k)).abs() <= CAUCHY_TOL);
    let big = |v: &Vec<f64>| v.iter().filter(|&&x| x >= DECAY_LEVEL).count();
    let decays = big(last) == big(prev);
    let compact_like = stabilized && decays;
    let noncompact_like = !compact_like && sorted.iter().all(|l| mass_fraction(l) >= MASS_FRACTION);
    Ok(DecayMetric {
        score: mass_fraction(last),
        stabilized,
        decays,
        compact_like,
        noncompact_like,
    })
}

type Generator = dyn Fn(usize) -> Result<ProjectionPair> + Send + Sync;

/// Finite surrogates of an infinite-dimensional pair at increasing levels.
#[derive(Clone)]
pub struct TruncationFamily {
    pub levels: Vec<usize>,
    generator: Arc<Generator>,
}

impl fmt::Debug for TruncationFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TruncationFamily")
            .field("levels", &self.levels)
            .finish()
    }
}

impl TruncationFamily {
    pub fn new(
        levels: Vec<usize>,
        generator: impl Fn(usize) -> Result<ProjectionPair> + Send + Sync + 'static,
    ) -> Result<Self> {
        if levels.len() < 3 {
            return Err(Error::InsufficientLevels {
                needed: 3,
                got: levels.len(),
            });
        }
        if levels.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::BadParams("levels must be strictly increasing".into()));
        }
        Ok(TruncationFamily {
            levels,
            generator: Arc::new(generator),
        })
    }

    pub fn pair_at(&self, level: usize) -> Result<ProjectionPair> {
        (self.generator)(level)
    }

    /// Pairs at every level, generated in parallel and returned in level order.
    pub fn pairs(&self) -> Result<Vec<ProjectionPair>> {
        self.levels.par_iter().map(|&n| self.pair_at(n)).collect()
    }

    /// The family of swapped pairs `(Q, P)`.
    pub fn swapped(&self) -> Self {
        let g = self.generator.clone();
        TruncationFamily {
            levels: self.levels.clone(),
            generator: Arc::new(move |n| g(n).map(|p| p.swapped())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelDims {
    pub level: usize,
    pub ambient: usize,
    #[serde(flatten)]
    pub dims: Dims,
}

/// Classification result with the diagnostics that produced it.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PairClass {
    pub label: Label,
    /// `d10 - d01` at the largest level when both dimensions stabilized.
    pub index: Option<i64>,
    pub dims_per_level: Vec<LevelDims>,
    /// Decay of the singular values of `A₀ = (P - Q)|_{H₀}`.
    pub decay: Option<DecayMetric>,
    /// Decay of the singular values of `P_S P_T⊥`.
    pub decay_ps_tperp: Option<DecayMetric>,
    /// Decay of the singular values of `P_T P_S⊥`.
    pub decay_pt_sperp: Option<DecayMetric>,
}

/// Singular values of `P_S P_T⊥` and `P_T P_S⊥`.
pub fn product_singular_values(pair: &ProjectionPair) -> (Vec<f64>, Vec<f64>) {
    let s = pair.s();
    let t = pair.t();
    let s_perp = complement_orth(s);
    let t_perp = complement_orth(t);
    (
        singular_values(&(s.basis.adjoint() * &t_perp.basis)),
        singular_values(&(t.basis.adjoint() * &s_perp.basis)),
    )
}

/// Label of a single finite-dimensional pair.
pub fn classify_pair(pair: &ProjectionPair, policy: &TolerancePolicy) -> Result<PairClass> {
    let a = analyze(pair, policy)?;
    let n = pair.n();
    let label = if pair.rank_p() == pair.rank_q() {
        Label::DeltaFin(pair.rank_p(), n - pair.rank_p())
    } else {
        Label::GammaRank
    };
    Ok(PairClass {
        label,
        index: Some(a.d10 as i64 - a.d01 as i64),
        dims_per_level: vec![LevelDims {
            level: n,
            ambient: n,
            dims: a.dims(),
        }],
        decay: None,
        decay_ps_tperp: None,
        decay_pt_sperp: None,
    })
}

fn stable(series: &[usize]) -> bool {
    let k = series.len();
    series[k - 1] == series[k - 2]
}

fn growing(series: &[usize]) -> bool {
    series.windows(2).all(|w| w[1] >= w[0]) && series[series.len() - 1] > series[series.len() - 2]
}

struct LevelData {
    analysis: PairAnalysis,
    ambient: usize,
    ps_tperp: Vec<f64>,
    pt_sperp: Vec<f64>,
}

/// Classifies a truncation family from the growth of `dim S ∩ T⊥`,
/// `dim S⊥ ∩ T` and the decay of the generic part across levels.
pub fn classify_family(family: &TruncationFamily, policy: &TolerancePolicy) -> Result<PairClass> {
    let data: Vec<LevelData> = family
        .levels
        .par_iter()
        .map(|&level| {
            let pair = family.pair_at(level)?;
            let analysis = analyze(&pair, policy)?;
            let (ps_tperp, pt_sperp) = product_singular_values(&pair);
            Ok(LevelData {
                analysis,
                ambient: pair.n(),
                ps_tperp,
                pt_sperp,
            })
        })
        .collect::<Result<_>>()?;

    let d10: Vec<usize> = data.iter().map(|d| d.analysis.d10).collect();
    let d01: Vec<usize> = data.iter().map(|d| d.analysis.d01).collect();
    let a0 = decay_metric(&data.iter().map(|d| d.analysis.a0_singular_values()).collect::<Vec<_>>())?;
    let left = decay_metric(&data.iter().map(|d| d.ps_tperp.clone()).collect::<Vec<_>>())?;
    let right = decay_metric(&data.iter().map(|d| d.pt_sperp.clone()).collect::<Vec<_>>())?;

    let last = data.len() - 1;
    let mut index = None;
    let label = match (stable(&d10), stable(&d01), growing(&d10), growing(&d01)) {
        (true, true, _, _) => {
            let n = d10[last] as i64 - d01[last] as i64;
            index = Some(n);
            if n == 0 || a0.noncompact_like {
                Label::DeltaInf
            } else if a0.compact_like {
                Label::Gamma1(n)
            } else {
                Label::Undetermined
            }
        }
        (true, false, _, true) => {
            if a0.compact_like && left.compact_like {
                Label::GammaInfLeft
            } else if a0.noncompact_like {
                Label::DeltaInf
            } else {
                Label::Undetermined
            }
        }
        (false, true, true, _) => {
            if a0.compact_like && right.compact_like {
                Label::GammaInfRight
            } else if a0.noncompact_like {
                Label::DeltaInf
            } else {
                Label::Undetermined
            }
        }
        (_, _, true, true) => Label::DeltaInf,
        _ => Label::Undetermined,
    };

    let dims_per_level = family
        .levels
        .iter()
        .zip(&data)
        .map(|(&level, d)| LevelDims {
            level,
            ambient: d.ambient,
            dims: d.analysis.dims(),
        })
        .collect();
    Ok(PairClass {
        label,
        index,
        dims_per_level,
        decay: Some(a0),
        decay_ps_tperp: Some(left),
        decay_pt_sperp: Some(right),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn label_round_trip() {
        for l in [
            Label::DeltaFin(3, 4),
            Label::DeltaInf,
            Label::GammaRank,
            Label::Gamma1(-2),
            Label::GammaInfLeft,
            Label::GammaInfRight,
            Label::Undetermined,
        ] {
            assert_eq!(l.to_string().parse::<Label>().unwrap(), l);
        }
        assert!("Gamma_2(1)".parse::<Label>().is_err());
    }

    #[test]
    fn decay_of_zero_spectra() {
        let m = decay_metric(&[vec![0.0; 4], vec![0.0; 8], vec![0.0; 16]]).unwrap();
        assert_eq!(m.score, 0.0);
        assert!(m.compact_like && !m.noncompact_like);
    }

    #[test]
    fn decay_of_identity_like_spectra() {
        let m = decay_metric(&[vec![1.0; 4], vec![1.0; 8], vec![1.0; 16]]).unwrap();
        assert_eq!(m.score, 1.0);
        assert!(!m.compact_like && m.noncompact_like);
    }

    #[test]
    fn decay_of_geometric_spectra() {
        let lists: Vec<Vec<f64>> = [8usize, 16, 32]
            .iter()
            .map(|&n| (0..n).map(|k| 0.5_f64.powi(k as i32)).collect())
            .collect();
        let m = decay_metric(&lists).unwrap();
        assert!(m.score < 0.15, "score {}", m.score);
        assert!(m.compact_like);
    }

    #[test]
    fn too_few_levels() {
        assert!(matches!(
            decay_metric(&[vec![], vec![]]),
            Err(Error::InsufficientLevels { .. })
        ));
    }
}
