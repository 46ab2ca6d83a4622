//! Common complements: certificates in finite dimensions, the balance
//! criterion, the `P - Q` criterion and approximation by pairs with a complement.

mod classify;

pub use classify::{
    classify_family, classify_pair, decay_metric, product_singular_values, DecayMetric, Label, LevelDims, PairClass,
    TruncationFamily, CAUCHY_TOL, DECAY_LEVEL, MASS_FRACTION, MASS_LEVEL,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geodesics::{geodesic_eval, geodesic_log};
use crate::pairs::{analyze, spectral_counts, ProjectionPair, SpectralCounts, UNIT_TOL};
use crate::random::{random_near_identity, rng};
use crate::substrate::{complement_orth, herm_eig, hstack, singular_values, CMatrix, Subspace, TolerancePolicy, C64};

/// Subspace `Z` with `S ∔ Z = T ∔ Z = ℂⁿ`, witnessed by a projection close to both.
#[derive(Clone, Debug)]
pub struct ComplementCertificate {
    pub z: Subspace,
    pub witness_projection: CMatrix,
    /// Smallest singular value of `[basis_S | basis_Z]`.
    pub residual_s: f64,
    /// Smallest singular value of `[basis_T | basis_Z]`.
    pub residual_t: f64,
    pub dist_ps: f64,
    pub dist_pt: f64,
}

#[derive(Clone, Debug)]
pub enum Decision {
    Certificate(ComplementCertificate),
    NoComplement { reason: String },
}

impl Decision {
    pub fn certificate(&self) -> Option<&ComplementCertificate> {
        match self {
            Decision::Certificate(c) => Some(c),
            Decision::NoComplement { .. } => None,
        }
    }
}

/// Smallest singular value of the concatenated bases; positive iff `a ∔ b = ℂⁿ`
/// when the dimensions add up to `n`.
pub fn direct_sum_residual(a: &Subspace, b: &Subspace) -> f64 {
    let m = hstack(&[&a.basis, &b.basis]);
    if m.ncols() != m.nrows() {
        return 0.0;
    }
    singular_values(&m).last().copied().unwrap_or(1.0)
}

fn herm_norm(m: &CMatrix) -> Result<f64> {
    let (vals, _) = herm_eig(m)?;
    Ok(vals.iter().map(|v| v.abs()).fold(0.0, f64::max))
}

/// Midpoint of the geodesic from `P` to `Q`.
pub fn giol_witness(pair: &ProjectionPair, policy: &TolerancePolicy) -> Result<CMatrix> {
    let log = geodesic_log(pair, policy)?;
    geodesic_eval(&log, 0.5)
}

/// Decides whether the ranges of a finite-dimensional pair have a common complement.
pub fn decide_finite(pair: &ProjectionPair, policy: &TolerancePolicy) -> Result<Decision> {
    if pair.rank_p() != pair.rank_q() {
        return Ok(Decision::NoComplement {
            reason: format!("rank-mismatch: rank P = {}, rank Q = {}", pair.rank_p(), pair.rank_q()),
        });
    }
    let witness = giol_witness(pair, policy)?;
    let range = Subspace::range_of_projection(&witness)?;
    let z = complement_orth(&range);
    let n = pair.n();
    if z.dim() + pair.rank_p() != n {
        return Err(Error::CertificateFailed(format!(
            "witness rank {} differs from rank P = {}",
            range.dim(),
            pair.rank_p()
        )));
    }
    let residual_s = direct_sum_residual(pair.s(), &z);
    let residual_t = direct_sum_residual(pair.t(), &z);
    let dist_ps = herm_norm(&(&pair.p - &witness))?;
    let dist_pt = herm_norm(&(&witness - &pair.q))?;
    if residual_s <= policy.residual_tol || residual_t <= policy.residual_tol {
        return Err(Error::CertificateFailed(format!(
            "direct-sum residuals {residual_s:.3e}, {residual_t:.3e}"
        )));
    }
    if dist_ps >= 1.0 || dist_pt >= 1.0 {
        return Err(Error::CertificateFailed(format!(
            "witness distances {dist_ps:.6}, {dist_pt:.6}"
        )));
    }
    Ok(Decision::Certificate(ComplementCertificate {
        z,
        witness_projection: witness,
        residual_s,
        residual_t,
        dist_ps,
        dist_pt,
    }))
}

/// Re-checks a certificate from scratch against a pair.
pub fn verify_certificate(pair: &ProjectionPair, cert: &ComplementCertificate, policy: &TolerancePolicy) -> bool {
    let n = pair.n();
    cert.z.dim() + pair.rank_p() == n
        && cert.z.dim() + pair.rank_q() == n
        && direct_sum_residual(pair.s(), &cert.z) > policy.residual_tol
        && direct_sum_residual(pair.t(), &cert.z) > policy.residual_tol
}

pub const DEFAULT_EPS_GRID: [f64; 4] = [0.5, 0.1, 0.01, 0.001];

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BalanceReport {
    pub counts: Vec<SpectralCounts>,
    pub balanced_all: bool,
    pub rank_equal: bool,
    /// In finite dimensions balance at every level coincides with equal ranks.
    pub consistent: bool,
    /// `dim S ∩ T⊥ ≠ dim S⊥ ∩ T`.
    pub dims_unequal: bool,
}

/// Evaluates the balance `dim N(G) + dim E_S = dim N(G*) + dim E_T` on a grid of levels.
pub fn lauzon_treil_decide(pair: &ProjectionPair, eps_grid: &[f64], policy: &TolerancePolicy) -> Result<BalanceReport> {
    let counts = eps_grid
        .iter()
        .map(|&e| spectral_counts(pair, e, policy))
        .collect::<Result<Vec<_>>>()?;
    let balanced_all = counts.iter().all(|c| c.balanced);
    let rank_equal = pair.rank_p() == pair.rank_q();
    let dims_unequal = counts.first().map(|c| c.dim_ng != c.dim_ng_star).unwrap_or(false);
    Ok(BalanceReport {
        counts,
        balanced_all,
        rank_equal,
        consistent: balanced_all == rank_equal,
        dims_unequal,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GammaDifferenceReport {
    pub dim_a_plus_one: usize,
    pub dim_a_minus_one: usize,
    pub dims_unequal: bool,
    /// Singular values of `A₀`, the restriction of `P - Q` to the generic part.
    pub a0_singular_values: Vec<f64>,
    /// Always true for a single finite pair; families use [`decay_metric`].
    pub a0_compact: bool,
    pub no_common_complement: bool,
    pub ps_tperp_singular_values: Vec<f64>,
    pub pt_sperp_singular_values: Vec<f64>,
}

/// Evaluates `dim N(A - 1) ≠ dim N(A + 1)` and the generic part of `A = P - Q`.
pub fn gamma_difference_criterion(pair: &ProjectionPair, policy: &TolerancePolicy) -> Result<GammaDifferenceReport> {
    let a = &pair.p - &pair.q;
    let (vals, _) = herm_eig(&a)?;
    let dim_a_plus_one = vals.iter().filter(|&&x| x >= 1.0 - UNIT_TOL).count();
    let dim_a_minus_one = vals.iter().filter(|&&x| x <= -1.0 + UNIT_TOL).count();
    let an = analyze(pair, policy)?;
    let b = an.generic_basis();
    let a0 = b.adjoint() * &a * &b;
    let (ps, pt) = product_singular_values(pair);
    let dims_unequal = dim_a_plus_one != dim_a_minus_one;
    Ok(GammaDifferenceReport {
        dim_a_plus_one,
        dim_a_minus_one,
        dims_unequal,
        a0_singular_values: singular_values(&a0),
        a0_compact: true,
        no_common_complement: dims_unequal,
        ps_tperp_singular_values: ps,
        pt_sperp_singular_values: pt,
    })
}

fn check_eps(eps: f64) -> Result<()> {
    if eps > 0.0 && eps < std::f64::consts::FRAC_PI_4 {
        Ok(())
    } else {
        Err(Error::BadParams(format!("eps must lie in (0, π/4), got {eps}")))
    }
}

/// Returns `(P, Q_ε)` where every generic principal angle below `2ε` is
/// replaced by `ε` and the others are kept.
pub fn delta_approximation(pair: &ProjectionPair, eps: f64, policy: &TolerancePolicy) -> Result<ProjectionPair> {
    check_eps(eps)?;
    let a = analyze(pair, policy)?;
    if a.angles.is_empty() {
        return Err(Error::NoGenericPart);
    }
    let mut q = pair.q.clone();
    for (i, &th) in a.angles.iter().enumerate() {
        if th >= 2.0 * eps {
            continue;
        }
        let s = a.generic_s.column(i).into_owned();
        let w = a.generic_w.column(i).into_owned();
        let old = &s * C64::from(th.cos()) + &w * C64::from(th.sin());
        let new = &s * C64::from(eps.cos()) + &w * C64::from(eps.sin());
        q += &new * new.adjoint() - &old * old.adjoint();
    }
    ProjectionPair::new(pair.p.clone(), q)
}

/// Variant for pairs with `S ∩ T ≠ 0` and `S⊥ ∩ T⊥ ≠ 0`: rotates `T` by `ε`
/// from a vector of `S ∩ T` towards a vector of `S⊥ ∩ T⊥`, for as many
/// vectors as both spaces allow.
pub fn delta_approximation_paired(pair: &ProjectionPair, eps: f64, policy: &TolerancePolicy) -> Result<ProjectionPair> {
    check_eps(eps)?;
    let a = analyze(pair, policy)?;
    let m = a.d11.min(a.d00);
    if m == 0 {
        return Err(Error::BadParams("both S ∩ T and S⊥ ∩ T⊥ must be nonzero".into()));
    }
    let mut q = pair.q.clone();
    for j in 0..m {
        let b = a.b11.basis.column(j).into_owned();
        let c = a.b00.basis.column(j).into_owned();
        let rotated = &b * C64::from(eps.cos()) + &c * C64::from(eps.sin());
        q += &rotated * rotated.adjoint() - &b * b.adjoint();
    }
    ProjectionPair::new(pair.p.clone(), q)
}

/// Fraction of random joint perturbations `(U₁PU₁*, U₂QU₂*)` with
/// `‖U_i - 1‖ < radius` that still admit a certificate.
pub fn perturb_stability_probe(
    pair: &ProjectionPair,
    radius: f64,
    trials: usize,
    seed: u64,
    policy: &TolerancePolicy,
) -> Result<f64> {
    if decide_finite(pair, policy)?.certificate().is_none() {
        return Err(Error::BadParams("pair has no certificate to perturb".into()));
    }
    if trials == 0 {
        return Ok(1.0);
    }
    let mut r = rng(seed);
    let n = pair.n();
    let mut ok = 0usize;
    for _ in 0..trials {
        let u1 = random_near_identity(n, radius, &mut r);
        let u2 = random_near_identity(n, radius, &mut r);
        let s = Subspace::from_orthonormal(&u1 * &pair.s().basis);
        let t = Subspace::from_orthonormal(&u2 * &pair.t().basis);
        let perturbed = ProjectionPair::from_subspaces(s, t)?;
        if let Ok(Decision::Certificate(_)) = decide_finite(&perturbed, policy) {
            ok += 1;
        }
    }
    Ok(ok as f64 / trials as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_line_complement() {
        let s = Subspace::coordinate(2, &[0]);
        let pair = ProjectionPair::from_subspaces(s.clone(), s).unwrap();
        let d = decide_finite(&pair, &TolerancePolicy::default()).unwrap();
        let c = d.certificate().unwrap();
        assert!((c.z.projection() - Subspace::coordinate(2, &[1]).projection()).norm() < 1e-13);
        assert!((c.residual_s - 1.0).abs() < 1e-13 && (c.residual_t - 1.0).abs() < 1e-13);
    }

    #[test]
    fn rank_mismatch_has_no_complement() {
        let pair =
            ProjectionPair::from_subspaces(Subspace::coordinate(3, &[0]), Subspace::coordinate(3, &[1, 2])).unwrap();
        assert!(matches!(
            decide_finite(&pair, &TolerancePolicy::default()).unwrap(),
            Decision::NoComplement { .. }
        ));
        assert!(perturb_stability_probe(&pair, 0.1, 4, 1, &TolerancePolicy::default()).is_err());
    }

    #[test]
    fn delta_approximation_needs_generic_part() {
        let pair =
            ProjectionPair::from_subspaces(Subspace::coordinate(2, &[0]), Subspace::coordinate(2, &[1])).unwrap();
        assert!(matches!(
            delta_approximation(&pair, 0.01, &TolerancePolicy::default()),
            Err(Error::NoGenericPart)
        ));
    }
}
