//! Pairs of orthogonal projections: five-space decomposition, principal
//! angles, index and spectral relations between `P - Q`, `PQ` and `P + Q`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::substrate::{
    check_projection, complement_orth, herm_eig, hstack, select_columns, singular_values, svd_sorted, CMatrix,
    Subspace, TolerancePolicy, C64,
};

/// Two orthogonal projections on the same `ℂⁿ`, together with orthonormal
/// bases of their ranges.
#[derive(Clone, Debug)]
pub struct ProjectionPair {
    pub p: CMatrix,
    pub q: CMatrix,
    s: Subspace,
    t: Subspace,
}

impl ProjectionPair {
    /// Validates both matrices and extracts their ranges.
    pub fn new(p: CMatrix, q: CMatrix) -> Result<Self> {
        if p.shape() != q.shape() {
            return Err(Error::DimensionMismatch(format!(
                "P is {}x{}, Q is {}x{}",
                p.nrows(),
                p.ncols(),
                q.nrows(),
                q.ncols()
            )));
        }
        check_projection(&p)?;
        check_projection(&q)?;
        let s = Subspace::range_of_projection(&p)?;
        let t = Subspace::range_of_projection(&q)?;
        Ok(ProjectionPair { p, q, s, t })
    }

    /// Builds the pair of projections onto two subspaces given by orthonormal bases.
    pub fn from_subspaces(s: Subspace, t: Subspace) -> Result<Self> {
        if s.ambient() != t.ambient() {
            return Err(Error::DimensionMismatch(format!(
                "subspaces live in dimensions {} and {}",
                s.ambient(),
                t.ambient()
            )));
        }
        let p = s.projection();
        let q = t.projection();
        Ok(ProjectionPair { p, q, s, t })
    }

    pub fn n(&self) -> usize {
        self.p.nrows()
    }

    /// Range of `P`.
    pub fn s(&self) -> &Subspace {
        &self.s
    }

    /// Range of `Q`.
    pub fn t(&self) -> &Subspace {
        &self.t
    }

    pub fn rank_p(&self) -> usize {
        self.s.dim()
    }

    pub fn rank_q(&self) -> usize {
        self.t.dim()
    }

    /// The pair `(Q, P)`.
    pub fn swapped(&self) -> Self {
        ProjectionPair {
            p: self.q.clone(),
            q: self.p.clone(),
            s: self.t.clone(),
            t: self.s.clone(),
        }
    }

    /// `‖P - Q‖`.
    pub fn distance(&self) -> f64 {
        let (vals, _) = herm_eig(&(&self.p - &self.q)).expect("difference of projections is Hermitian");
        vals.iter().map(|v| v.abs()).fold(0.0, f64::max)
    }
}

/// Five-space decomposition of a pair.
///
/// The generic part is described by pairs `(s_i, w_i)` with `s_i ∈ S` and
/// `w_i ⊥ S`, so that `t_i = cos θ_i s_i + sin θ_i w_i` spans the matching
/// direction of `T`.
#[derive(Clone, Debug)]
pub struct PairAnalysis {
    pub n: usize,
    pub d11: usize,
    pub d00: usize,
    pub d10: usize,
    pub d01: usize,
    /// Principal angles of the generic part, ascending, each in `(0, π/2)`.
    pub angles: Vec<f64>,
    pub b11: Subspace,
    pub b00: Subspace,
    pub b10: Subspace,
    pub b01: Subspace,
    pub generic_s: CMatrix,
    pub generic_w: CMatrix,
    pub reconstruction_residual: f64,
}

impl PairAnalysis {
    /// Dimension of the generic part (twice the number of angles).
    pub fn generic_dim(&self) -> usize {
        2 * self.angles.len()
    }

    pub fn dims(&self) -> Dims {
        Dims {
            d11: self.d11,
            d00: self.d00,
            d10: self.d10,
            d01: self.d01,
            generic_dim: self.generic_dim(),
        }
    }

    /// Interleaved generic basis `(s_1, w_1, s_2, w_2, …)`.
    pub fn generic_basis(&self) -> CMatrix {
        let l = self.angles.len();
        let mut b = CMatrix::zeros(self.n, 2 * l);
        for i in 0..l {
            b.set_column(2 * i, &self.generic_s.column(i));
            b.set_column(2 * i + 1, &self.generic_w.column(i));
        }
        b
    }

    /// Unit vectors `t_i` spanning the generic part of `T`.
    pub fn generic_t(&self) -> CMatrix {
        let mut t = CMatrix::zeros(self.n, self.angles.len());
        for (i, th) in self.angles.iter().enumerate() {
            let col = self.generic_s.column(i) * C64::from(th.cos()) + self.generic_w.column(i) * C64::from(th.sin());
            t.set_column(i, &col);
        }
        t
    }

    /// Block model `(P₀, Q₀)` on the generic part in the interleaved basis.
    pub fn generic_blocks(&self) -> (CMatrix, CMatrix) {
        let l = self.angles.len();
        let mut p0 = CMatrix::zeros(2 * l, 2 * l);
        let mut q0 = CMatrix::zeros(2 * l, 2 * l);
        for (i, th) in self.angles.iter().enumerate() {
            let (s, c) = th.sin_cos();
            p0[(2 * i, 2 * i)] = C64::from(1.0);
            q0[(2 * i, 2 * i)] = C64::from(c * c);
            q0[(2 * i, 2 * i + 1)] = C64::from(c * s);
            q0[(2 * i + 1, 2 * i)] = C64::from(c * s);
            q0[(2 * i + 1, 2 * i + 1)] = C64::from(s * s);
        }
        (p0, q0)
    }

    /// Singular values of `P - Q` restricted to the generic part (each `sin θ` twice).
    pub fn a0_singular_values(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.angles.iter().flat_map(|t| [t.sin(), t.sin()]).collect();
        v.sort_by(|a, b| b.total_cmp(a));
        v
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dims {
    pub d11: usize,
    pub d00: usize,
    pub d10: usize,
    pub d01: usize,
    pub generic_dim: usize,
}

/// Computes the five-space decomposition and principal angles of a pair.
pub fn analyze(pair: &ProjectionPair, policy: &TolerancePolicy) -> Result<PairAnalysis> {
    let n = pair.n();
    let s = pair.s();
    let t = pair.t();
    let tol = policy.rank_tol(n);
    let (ks, kt) = (s.dim(), t.dim());

    let m = s.basis.adjoint() * &t.basis;
    let (u, sigma, v) = svd_sorted(&m);

    let mut i11 = Vec::new();
    let mut igen = Vec::new();
    let mut izero = Vec::new();
    for (i, &x) in sigma.iter().enumerate() {
        if x >= 1.0 - tol {
            i11.push(i);
        } else if x > tol {
            igen.push(i);
        } else {
            izero.push(i);
        }
    }

    let su = &s.basis * &u;
    let tv = &t.basis * &v;
    let b11 = Subspace::from_orthonormal(select_columns(&su, &i11));

    let u_perp = complement_orth(&Subspace::from_orthonormal(u.clone()));
    let b10 = Subspace::from_orthonormal(hstack(&[&select_columns(&su, &izero), &(&s.basis * &u_perp.basis)]));
    let v_perp = complement_orth(&Subspace::from_orthonormal(v.clone()));
    let b01 = Subspace::from_orthonormal(hstack(&[&select_columns(&tv, &izero), &(&t.basis * &v_perp.basis)]));

    let l = igen.len();
    let mut gs = CMatrix::zeros(n, l);
    let mut gw = CMatrix::zeros(n, l);
    let mut angles = Vec::with_capacity(l);
    for (c, &i) in igen.iter().enumerate() {
        let si = su.column(i).into_owned();
        let ti = tv.column(i).into_owned();
        let r = &ti - &si * C64::from(sigma[i]);
        let rn = r.norm();
        angles.push(rn.atan2(sigma[i]));
        gs.set_column(c, &si);
        gw.set_column(c, &(r / C64::from(rn)));
    }

    let known = hstack(&[&b11.basis, &b10.basis, &b01.basis, &gs, &gw]);
    let b00 = complement_orth(&Subspace::from_orthonormal(known));

    let mut a = PairAnalysis {
        n,
        d11: b11.dim(),
        d00: b00.dim(),
        d10: b10.dim(),
        d01: b01.dim(),
        angles,
        b11,
        b00,
        b10,
        b01,
        generic_s: gs,
        generic_w: gw,
        reconstruction_residual: 0.0,
    };
    debug_assert_eq!(a.d11 + a.d10 + a.angles.len(), ks);
    debug_assert_eq!(a.d11 + a.d01 + a.angles.len(), kt);

    let gt = a.generic_t();
    let p_rec = a.b11.projection() + a.b10.projection() + &a.generic_s * a.generic_s.adjoint();
    let q_rec = a.b11.projection() + a.b01.projection() + &gt * gt.adjoint();
    a.reconstruction_residual = (&pair.p - p_rec).norm().max((&pair.q - q_rec).norm());
    if a.reconstruction_residual > 1e3 * policy.residual_tol {
        return Err(Error::CertificateFailed(format!(
            "five-space reconstruction residual {:.3e}",
            a.reconstruction_residual
        )));
    }
    Ok(a)
}

/// Full unitary change of basis `[B11 | B00 | B10 | B01 | generic]`.
pub fn halmos_basis(a: &PairAnalysis) -> CMatrix {
    hstack(&[
        &a.b11.basis,
        &a.b00.basis,
        &a.b10.basis,
        &a.b01.basis,
        &a.generic_basis(),
    ])
}

/// Index of the pair: `dim N(P - Q - 1) - dim N(P - Q + 1)`.
pub fn fredholm_index(pair: &ProjectionPair, policy: &TolerancePolicy) -> Result<i64> {
    let a = analyze(pair, policy)?;
    Ok(a.d10 as i64 - a.d01 as i64)
}

/// Spectral counts of `G = P_T|_S` used by the balance criterion at level `eps`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralCounts {
    pub eps: f64,
    /// `dim N(G)`.
    pub dim_ng: usize,
    /// `dim N(G*)`.
    pub dim_ng_star: usize,
    /// Number of eigenvalues of `G*G` in `[0, 1 - eps)`.
    pub count_s: usize,
    /// Number of eigenvalues of `GG*` in `[0, 1 - eps)`.
    pub count_t: usize,
    pub balanced: bool,
}

pub fn spectral_counts(pair: &ProjectionPair, eps: f64, policy: &TolerancePolicy) -> Result<SpectralCounts> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::BadEps(eps));
    }
    let tol = policy.rank_tol(pair.n());
    let g = pair.t().basis.adjoint() * &pair.s().basis;
    let gsg = g.adjoint() * &g;
    let ggs = &g * g.adjoint();
    let (es, _) = herm_eig(&gsg)?;
    let (et, _) = herm_eig(&ggs)?;
    let rank = singular_values(&g).iter().filter(|&&x| x > tol).count();
    let below = |e: &[f64]| e.iter().filter(|&&x| x < 1.0 - eps).count();
    let count_s = below(&es);
    let count_t = below(&et);
    Ok(SpectralCounts {
        eps,
        dim_ng: g.ncols() - rank,
        dim_ng_star: g.nrows() - rank,
        count_s,
        count_t,
        balanced: count_s == count_t,
    })
}

/// Threshold separating the eigenvalues `0, ±1` of `P - Q` from the interior.
pub const UNIT_TOL: f64 = 1e-9;

/// Verified relations between the spectra of `A = P - Q`, `B = PQ` and `P + Q`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DifferenceProductReport {
    pub a_eigenvalues: Vec<f64>,
    pub b_singular_values: Vec<f64>,
    pub sum_eigenvalues: Vec<f64>,
    pub dim_a_plus_one: usize,
    pub dim_a_minus_one: usize,
    pub d10: usize,
    pub d01: usize,
    /// Largest distance between an interior eigenvalue `λ` of `A` and the nearest `-λ`.
    pub pairing_error: f64,
    /// Largest `|λ² + s² - 1|` over matched interior values.
    pub circle_error: f64,
    /// Interior positive eigenvalues of `A` and interior singular values of `B` have equal counts.
    pub multiplicity_ok: bool,
    /// Largest distance from `1 ± √(1 - λ²)` to the spectrum of `P + Q`.
    pub sum_error_sqrt_form: f64,
    /// Same for the alternative form `1 ± (1 - λ)²`.
    pub sum_error_square_form: f64,
    pub verified_sum_form: String,
}

pub fn difference_product_check(pair: &ProjectionPair, policy: &TolerancePolicy) -> Result<DifferenceProductReport> {
    let a = analyze(pair, policy)?;
    let (ea, _) = herm_eig(&(&pair.p - &pair.q))?;
    let (esum, _) = herm_eig(&(&pair.p + &pair.q))?;
    let sb = singular_values(&(&pair.p * &pair.q));

    let dim_plus = ea.iter().filter(|&&x| x >= 1.0 - UNIT_TOL).count();
    let dim_minus = ea.iter().filter(|&&x| x <= -1.0 + UNIT_TOL).count();
    let interior: Vec<f64> = ea
        .iter()
        .copied()
        .filter(|x| x.abs() > UNIT_TOL && x.abs() < 1.0 - UNIT_TOL)
        .collect();

    let mut pairing_error: f64 = 0.0;
    for &l in &interior {
        let d = interior.iter().map(|&m| (m + l).abs()).fold(f64::INFINITY, f64::min);
        pairing_error = pairing_error.max(d);
    }

    let mut pos: Vec<f64> = interior.iter().copied().filter(|&x| x > 0.0).collect();
    pos.sort_by(|a, b| b.total_cmp(a));
    let mut b_int: Vec<f64> = sb
        .iter()
        .copied()
        .filter(|&s| s > UNIT_TOL && s < 1.0 - UNIT_TOL)
        .collect();
    b_int.sort_by(|a, b| a.total_cmp(b));
    let multiplicity_ok = pos.len() == b_int.len();
    let mut circle_error: f64 = 0.0;
    let mut used = vec![false; b_int.len()];
    for &l in &pos {
        let target = (1.0 - l * l).max(0.0).sqrt();
        let best = (0..b_int.len())
            .filter(|&j| !used[j])
            .min_by(|&i, &j| (b_int[i] - target).abs().total_cmp(&(b_int[j] - target).abs()));
        match best {
            Some(j) => {
                used[j] = true;
                circle_error = circle_error.max((l * l + b_int[j] * b_int[j] - 1.0).abs());
            }
            None => circle_error = f64::INFINITY,
        }
    }

    let nearest = |x: f64| esum.iter().map(|&e| (e - x).abs()).fold(f64::INFINITY, f64::min);
    let mut err_sqrt: f64 = 0.0;
    let mut err_square: f64 = 0.0;
    for &l in &pos {
        let r = (1.0 - l * l).max(0.0).sqrt();
        err_sqrt = err_sqrt.max(nearest(1.0 + r)).max(nearest(1.0 - r));
        let q = (1.0 - l) * (1.0 - l);
        err_square = err_square.max(nearest(1.0 + q)).max(nearest(1.0 - q));
    }

    Ok(DifferenceProductReport {
        a_eigenvalues: ea,
        b_singular_values: sb,
        sum_eigenvalues: esum,
        dim_a_plus_one: dim_plus,
        dim_a_minus_one: dim_minus,
        d10: a.d10,
        d01: a.d01,
        pairing_error,
        circle_error,
        multiplicity_ok,
        sum_error_sqrt_form: err_sqrt,
        sum_error_square_form: err_square,
        verified_sum_form: "1 ± sqrt(1 - λ²)".to_string(),
    })
}

/// Reflection exchanging the generic parts of `P` and `Q`.
#[derive(Clone, Debug)]
pub struct DavisSymmetry {
    /// Interleaved generic basis `(s_1, w_1, …)`, `n × 2L`.
    pub basis: CMatrix,
    /// Symmetry in the interleaved basis.
    pub v: CMatrix,
    pub p0: CMatrix,
    pub q0: CMatrix,
}

impl DavisSymmetry {
    /// The symmetry as an operator on `ℂⁿ` (zero off the generic part).
    pub fn ambient(&self) -> CMatrix {
        &self.basis * &self.v * self.basis.adjoint()
    }
}

pub fn davis_symmetry(pair: &ProjectionPair, policy: &TolerancePolicy) -> Result<DavisSymmetry> {
    let a = analyze(pair, policy)?;
    if a.angles.is_empty() {
        return Err(Error::NoGenericPart);
    }
    let l = a.angles.len();
    let mut v = CMatrix::zeros(2 * l, 2 * l);
    for (i, th) in a.angles.iter().enumerate() {
        let (s, c) = th.sin_cos();
        v[(2 * i, 2 * i)] = C64::from(c);
        v[(2 * i, 2 * i + 1)] = C64::from(s);
        v[(2 * i + 1, 2 * i)] = C64::from(s);
        v[(2 * i + 1, 2 * i + 1)] = C64::from(-c);
    }
    let (p0, q0) = a.generic_blocks();
    Ok(DavisSymmetry {
        basis: a.generic_basis(),
        v,
        p0,
        q0,
    })
}

/// Bases `ξ_i ∈ S`, `ψ_j ∈ T` with `⟨ξ_i, ψ_j⟩ = σ_i δ_ij`.
#[derive(Clone, Debug)]
pub struct BiorthogonalBases {
    pub xi: CMatrix,
    pub psi: CMatrix,
    /// Cosines of the principal angles, descending.
    pub sigma: Vec<f64>,
}

pub fn biorthogonal_bases(pair: &ProjectionPair) -> BiorthogonalBases {
    let m = pair.s().basis.adjoint() * &pair.t().basis;
    let (u, sigma, v) = svd_sorted(&m);
    BiorthogonalBases {
        xi: &pair.s().basis * u,
        psi: &pair.t().basis * v,
        sigma,
    }
}
