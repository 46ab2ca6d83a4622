//! Geodesics of the Grassmann manifold, the co-diagonal logarithm and the
//! restricted-Grassmannian index.

use serde::{Deserialize, Serialize};

use crate::complement::{decay_metric, DecayMetric, TruncationFamily};
use crate::error::{Error, Result};
use crate::pairs::{analyze, ProjectionPair};
use crate::substrate::{herm_eig, matfun_herm, op_norm, CMatrix, TolerancePolicy, C64, I};

/// Hermitian `Z`, co-diagonal with respect to `P`, such that `e^{iZ} P e^{-iZ} = Q`.
#[derive(Clone, Debug)]
pub struct GeodesicLog {
    pub p: CMatrix,
    pub z: CMatrix,
    /// `‖Z‖`, the largest principal angle involved.
    pub max_angle: f64,
}

fn add_rotation(z: &mut CMatrix, s: &nalgebra::DVector<C64>, w: &nalgebra::DVector<C64>, theta: f64) {
    let sw = s * w.adjoint();
    let m = (&sw * I - sw.adjoint() * I) * C64::from(theta);
    *z += m;
}

/// Logarithm of the pair: rotates each generic `s_i` onto `t_i` and pairs the
/// bases of `S ∩ T⊥` and `S⊥ ∩ T` column by column at angle `π/2`.
pub fn geodesic_log(pair: &ProjectionPair, policy: &TolerancePolicy) -> Result<GeodesicLog> {
    let a = analyze(pair, policy)?;
    if a.d10 != a.d01 {
        return Err(Error::NoGeodesic { d10: a.d10, d01: a.d01 });
    }
    let n = pair.n();
    let mut z = CMatrix::zeros(n, n);
    let mut max_angle: f64 = 0.0;
    for (i, &th) in a.angles.iter().enumerate() {
        let s = a.generic_s.column(i).into_owned();
        let w = a.generic_w.column(i).into_owned();
        add_rotation(&mut z, &s, &w, th);
        max_angle = max_angle.max(th);
    }
    for j in 0..a.d10 {
        let s = a.b10.basis.column(j).into_owned();
        let w = a.b01.basis.column(j).into_owned();
        add_rotation(&mut z, &s, &w, std::f64::consts::FRAC_PI_2);
        max_angle = std::f64::consts::FRAC_PI_2;
    }
    Ok(GeodesicLog {
        p: pair.p.clone(),
        z,
        max_angle,
    })
}

/// `δ(t) = e^{itZ} P e^{-itZ}`.
pub fn geodesic_eval(log: &GeodesicLog, t: f64) -> Result<CMatrix> {
    let u = matfun_herm(&log.z, |x| (I * (t * x)).exp())?;
    Ok(&u * &log.p * u.adjoint())
}

/// Norms of the diagonal blocks `PZP` and `P⊥ZP⊥`; both vanish for a co-diagonal `Z`.
pub fn codiagonal_defect(log: &GeodesicLog) -> f64 {
    let n = log.p.nrows();
    let pc = CMatrix::identity(n, n) - &log.p;
    op_norm(&(&log.p * &log.z * &log.p)) + op_norm(&(&pc * &log.z * &pc))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeodesicSample {
    pub t: f64,
    pub distance: f64,
    /// `sin(t · ‖Z‖)`.
    pub predicted_distance: f64,
    pub idempotency_residual: f64,
}

/// Samples the geodesic on a uniform grid of `[0, 1]`. The endpoint `t = 1` is
/// dropped when `‖P - Q‖ ≥ 1`, where the geodesic is no longer unique.
pub fn midpoint_distance_check(
    pair: &ProjectionPair,
    samples: usize,
    policy: &TolerancePolicy,
) -> Result<Vec<GeodesicSample>> {
    if samples < 2 {
        return Err(Error::BadParams("at least two samples are required".into()));
    }
    let log = geodesic_log(pair, policy)?;
    let far = pair.distance() >= 1.0 - 1e-12;
    let mut out = Vec::with_capacity(samples);
    for k in 0..samples {
        let t = k as f64 / (samples - 1) as f64;
        if far && k == samples - 1 {
            break;
        }
        let d = geodesic_eval(&log, t)?;
        let (vals, _) = herm_eig(&(&pair.p - &d))?;
        let distance = vals.iter().map(|v| v.abs()).fold(0.0, f64::max);
        out.push(GeodesicSample {
            t,
            distance,
            predicted_distance: (t * log.max_angle).sin(),
            idempotency_residual: (&d * &d - &d).norm(),
        });
    }
    Ok(out)
}

/// Unitary `U = e^{iZ}` carrying `S` onto `T`, for `‖P - Q‖ < 1`.
#[derive(Clone, Debug)]
pub struct UnitaryBetween {
    pub u: CMatrix,
    pub distance: f64,
    /// `‖U - 1‖`.
    pub deviation: f64,
    /// `2 sin(arcsin(‖P - Q‖) / 2)`.
    pub predicted_deviation: f64,
}

pub fn unitary_between(pair: &ProjectionPair, policy: &TolerancePolicy) -> Result<UnitaryBetween> {
    let distance = pair.distance();
    if distance >= 1.0 - 1e-12 {
        return Err(Error::TooFar(distance));
    }
    let log = geodesic_log(pair, policy)?;
    let u = matfun_herm(&log.z, |x| (I * x).exp())?;
    let n = pair.n();
    let deviation = op_norm(&(&u - CMatrix::identity(n, n)));
    let predicted_deviation = 2.0 * (distance.asin() / 2.0).sin();
    if (deviation - predicted_deviation).abs() > 1e-6 {
        return Err(Error::CertificateFailed(format!(
            "‖U - 1‖ = {deviation:.9} but the distance formula gives {predicted_deviation:.9}"
        )));
    }
    Ok(UnitaryBetween {
        u,
        distance,
        deviation,
        predicted_deviation,
    })
}

/// Parameters of the two-curve family built on `L ⊕ L`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Example51Params {
    pub n_l: usize,
    /// Diagonal of `Z`, one entry per basis vector of `L`, each in `(0, π/2)`.
    pub z_spectrum: Vec<f64>,
    /// `c` is the projection onto the first `c_rank` basis vectors.
    pub c_rank: usize,
    pub t: f64,
}

impl Example51Params {
    /// `c_rank = n_l / 2`; `Z` equals `0.7` on `R(c)`. On `N(c)` the spectrum
    /// either approaches `π/2` geometrically (`compact = true`, so that
    /// `π/2 - Z` is compact there) or spreads over `[0.3, 1.0]`.
    pub fn standard(n_l: usize, compact: bool, t: f64) -> Self {
        let c_rank = n_l / 2;
        let m = n_l - c_rank;
        let mut z = vec![0.7; c_rank];
        for k in 0..m {
            let v = if compact {
                std::f64::consts::FRAC_PI_2 - 0.5 * 0.5_f64.powi(k as i32)
            } else if m == 1 {
                0.3
            } else {
                0.3 + 0.7 * k as f64 / (m - 1) as f64
            };
            z.push(v);
        }
        Example51Params {
            n_l,
            z_spectrum: z,
            c_rank,
            t,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n_l == 0 {
            return Err(Error::BadParams("n_l must be positive".into()));
        }
        if self.z_spectrum.len() != self.n_l {
            return Err(Error::BadParams(format!(
                "z_spectrum has {} entries, expected {}",
                self.z_spectrum.len(),
                self.n_l
            )));
        }
        if self.c_rank > self.n_l {
            return Err(Error::BadParams("c_rank exceeds n_l".into()));
        }
        if self
            .z_spectrum
            .iter()
            .any(|&z| !(z > 0.0 && z < std::f64::consts::FRAC_PI_2))
        {
            return Err(Error::BadParams("z_spectrum must lie in (0, π/2)".into()));
        }
        if !(self.t > -0.5 && self.t < 0.5) {
            return Err(Error::BadParams("t must lie in (-1/2, 1/2)".into()));
        }
        Ok(())
    }

    fn c_diag(&self) -> Vec<f64> {
        (0..self.n_l).map(|i| if i < self.c_rank { 1.0 } else { 0.0 }).collect()
    }

    /// `P₀ = diag(1, 0)` and `Q₀ = diag(1, c)`.
    pub fn base_pair(&self) -> (CMatrix, CMatrix) {
        let n = self.n_l;
        let c = self.c_diag();
        let mut p0 = CMatrix::zeros(2 * n, 2 * n);
        let mut q0 = CMatrix::zeros(2 * n, 2 * n);
        for i in 0..n {
            p0[(i, i)] = C64::from(1.0);
            q0[(i, i)] = C64::from(1.0);
            q0[(n + i, n + i)] = C64::from(c[i]);
        }
        (p0, q0)
    }

    /// Anti-Hermitian generators `X` and `Y`.
    pub fn generators(&self) -> (CMatrix, CMatrix) {
        let n = self.n_l;
        let c = self.c_diag();
        let mut x = CMatrix::zeros(2 * n, 2 * n);
        let mut y = CMatrix::zeros(2 * n, 2 * n);
        let h = std::f64::consts::FRAC_PI_2;
        for i in 0..n {
            x[(i, n + i)] = C64::from(-self.z_spectrum[i]);
            x[(n + i, i)] = C64::from(self.z_spectrum[i]);
            y[(i, n + i)] = C64::from(-h * (1.0 - c[i]));
            y[(n + i, i)] = C64::from(h * (1.0 - c[i]));
        }
        (x, y)
    }

    /// Internal name `Θ_t = t(π/2 c⊥ - Z)`; its nonzero values on `N(c)` are the
    /// generic principal angles of `(P_t, Q_t)` up to sign.
    pub fn theta_t(&self) -> Vec<f64> {
        let h = std::f64::consts::FRAC_PI_2;
        let c = self.c_diag();
        (0..self.n_l)
            .map(|i| self.t * (h * (1.0 - c[i]) - self.z_spectrum[i]))
            .collect()
    }
}

/// `e^{τA}` for anti-Hermitian `A`.
fn exp_skew(a: &CMatrix, tau: f64) -> Result<CMatrix> {
    let h = a * I;
    matfun_herm(&h, |x| (-I * (tau * x)).exp())
}

/// The pair `(P_t, Q_t) = (e^{tX} P₀ e^{-tX}, e^{tY} Q₀ e^{-tY})` from the
/// closed-form cos/sin blocks.
pub fn example51_family(params: &Example51Params) -> Result<ProjectionPair> {
    params.validate()?;
    let n = params.n_l;
    let t = params.t;
    let c = params.c_diag();
    let h = std::f64::consts::FRAC_PI_2;
    let (sy, cy) = (h * t).sin_cos();
    for (ci, z) in c.iter().zip(&params.z_spectrum) {
        if *ci == 0.0 {
            let prod = (h * t).tan() * (t * z).tan();
            if (1.0 - prod).abs() < 1e-12 {
                return Err(Error::BadParams("tangent condition violated".into()));
            }
        }
    }
    let mut p = CMatrix::zeros(2 * n, 2 * n);
    let mut q = CMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        let (s, co) = (t * params.z_spectrum[i]).sin_cos();
        p[(i, i)] = C64::from(co * co);
        p[(i, n + i)] = C64::from(co * s);
        p[(n + i, i)] = C64::from(co * s);
        p[(n + i, n + i)] = C64::from(s * s);
        let cp = 1.0 - c[i];
        q[(i, i)] = C64::from(c[i] + cy * cy * cp);
        q[(i, n + i)] = C64::from(cy * sy * cp);
        q[(n + i, i)] = C64::from(cy * sy * cp);
        q[(n + i, n + i)] = C64::from(c[i] + sy * sy * cp);
    }
    ProjectionPair::new(p, q)
}

/// The pair `(P_t, Q_t)` computed by exponentiating the generators.
pub fn example51_by_exponentials(params: &Example51Params) -> Result<(CMatrix, CMatrix)> {
    params.validate()?;
    let (p0, q0) = params.base_pair();
    let (x, y) = params.generators();
    let ex = exp_skew(&x, params.t)?;
    let ey = exp_skew(&y, params.t)?;
    Ok((&ex * &p0 * ex.adjoint(), &ey * &q0 * ey.adjoint()))
}

/// `δᵗ(s) = (e^{2stX} e^{-tX} P₀ e^{tX} e^{-2stX}, e^{2stY} e^{-tY} Q₀ e^{tY} e^{-2stY})`.
pub fn example51_curve(params: &Example51Params, s: f64) -> Result<(CMatrix, CMatrix)> {
    params.validate()?;
    let (p0, q0) = params.base_pair();
    let (x, y) = params.generators();
    let t = params.t;
    let ux = exp_skew(&x, 2.0 * s * t)? * exp_skew(&x, -t)?;
    let uy = exp_skew(&y, 2.0 * s * t)? * exp_skew(&y, -t)?;
    Ok((&ux * &p0 * ux.adjoint(), &uy * &q0 * uy.adjoint()))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RestrictedIndexReport {
    /// Index of the pair `(P, P₊)`.
    pub k: i64,
    /// Decay of the singular values of `P - P₊` across the levels of a family.
    pub offdiag_decay: Option<DecayMetric>,
}

/// Index of `P` relative to `P₊`, optionally with compactness diagnostics of
/// `P - P₊` along a family whose pairs are `(P, P₊)` at each level.
pub fn restricted_index(
    p: &CMatrix,
    p_plus: &CMatrix,
    family: Option<&TruncationFamily>,
    policy: &TolerancePolicy,
) -> Result<RestrictedIndexReport> {
    let pair = ProjectionPair::new(p.clone(), p_plus.clone())?;
    let a = analyze(&pair, policy)?;
    let k = a.d10 as i64 - a.d01 as i64;
    let offdiag_decay = match family {
        Some(f) => {
            let lists = f
                .pairs()?
                .iter()
                .map(|pr| crate::substrate::singular_values(&(&pr.p - &pr.q)))
                .collect::<Vec<_>>();
            Some(decay_metric(&lists)?)
        }
        None => None,
    };
    Ok(RestrictedIndexReport { k, offdiag_decay })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Prop52Report {
    /// Indices of `p1, q1, p2, q2` relative to `P₊`.
    pub k: [i64; 4],
    pub index_pair1: i64,
    pub index_pair2: i64,
    /// `index(p1, q1) = k(p1) - k(q1)` and the same for the second pair.
    pub additivity_ok: bool,
    /// Side predicted for each pair: `Delta` for equal indices, `Gamma_1(n)` otherwise.
    pub predicted: [String; 2],
}

pub fn prop52_check(
    p1: &CMatrix,
    q1: &CMatrix,
    p2: &CMatrix,
    q2: &CMatrix,
    p_plus: &CMatrix,
    policy: &TolerancePolicy,
) -> Result<Prop52Report> {
    let idx = |a: &CMatrix, b: &CMatrix| -> Result<i64> {
        let pair = ProjectionPair::new(a.clone(), b.clone())?;
        let an = analyze(&pair, policy)?;
        Ok(an.d10 as i64 - an.d01 as i64)
    };
    let k = [idx(p1, p_plus)?, idx(q1, p_plus)?, idx(p2, p_plus)?, idx(q2, p_plus)?];
    let i1 = idx(p1, q1)?;
    let i2 = idx(p2, q2)?;
    let label = |n: i64| {
        if n == 0 {
            "Delta".to_string()
        } else {
            format!("Gamma_1({n})")
        }
    };
    Ok(Prop52Report {
        k,
        index_pair1: i1,
        index_pair2: i2,
        additivity_ok: i1 == k[0] - k[1] && i2 == k[2] - k[3],
        predicted: [label(k[0] - k[1]), label(k[2] - k[3])],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::substrate::Subspace;

    fn line_pair(theta: f64) -> ProjectionPair {
        let s = Subspace::coordinate(2, &[0]);
        let mut b = CMatrix::zeros(2, 1);
        b[(0, 0)] = C64::from(theta.cos());
        b[(1, 0)] = C64::from(theta.sin());
        ProjectionPair::from_subspaces(s, Subspace::from_orthonormal(b)).unwrap()
    }

    #[test]
    fn log_round_trip_for_line() {
        let pair = line_pair(0.9);
        let log = geodesic_log(&pair, &TolerancePolicy::default()).unwrap();
        let q = geodesic_eval(&log, 1.0).unwrap();
        assert!((q - &pair.q).norm() < 1e-13);
        assert!(codiagonal_defect(&log) < 1e-13);
    }

    #[test]
    fn orthogonal_lines_log_has_norm_half_pi() {
        let pair = line_pair(std::f64::consts::FRAC_PI_2);
        let log = geodesic_log(&pair, &TolerancePolicy::default()).unwrap();
        assert!((op_norm(&log.z) - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
        assert!((geodesic_eval(&log, 1.0).unwrap() - &pair.q).norm() < 1e-12);
    }

    #[test]
    fn rank_mismatch_has_no_geodesic() {
        let pair =
            ProjectionPair::from_subspaces(Subspace::coordinate(3, &[0, 1]), Subspace::coordinate(3, &[2])).unwrap();
        assert!(matches!(
            geodesic_log(&pair, &TolerancePolicy::default()),
            Err(Error::NoGeodesic { d10: 2, d01: 1 })
        ));
    }

    #[test]
    fn unitary_at_quarter_pi() {
        let pair = line_pair(std::f64::consts::FRAC_PI_4);
        let u = unitary_between(&pair, &TolerancePolicy::default()).unwrap();
        assert!((u.deviation - 2.0 * (std::f64::consts::PI / 8.0).sin()).abs() < 1e-12);
    }

    #[test]
    fn unitary_too_far() {
        let pair = line_pair(std::f64::consts::FRAC_PI_2);
        assert!(matches!(
            unitary_between(&pair, &TolerancePolicy::default()),
            Err(Error::TooFar(_))
        ));
    }

    #[test]
    fn example51_closed_form_matches_exponentials() {
        let params = Example51Params::standard(6, false, 0.3);
        let pair = example51_family(&params).unwrap();
        let (p, q) = example51_by_exponentials(&params).unwrap();
        assert!((p - &pair.p).norm() < 1e-12);
        assert!((q - &pair.q).norm() < 1e-12);
    }

    #[test]
    fn example51_rejects_bad_t() {
        let params = Example51Params::standard(4, false, 0.5);
        assert!(matches!(example51_family(&params), Err(Error::BadParams(_))));
    }
}
