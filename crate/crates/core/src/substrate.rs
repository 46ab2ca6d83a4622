//! Dense complex linear algebra used by every other module.
//!
//! Matrices are `nalgebra::DMatrix<Complex64>`. Subspaces are carried as
//! orthonormal column bases, and every rank decision goes through a
//! [`TolerancePolicy`].

use std::path::Path;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;

pub const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
pub const ONE: C64 = C64 { re: 1.0, im: 0.0 };
pub const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Absolute tolerance used when checking Hermitian symmetry.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Tolerance on `‖P² - P‖` for a matrix to count as a projection.
pub const IDEMPOTENT_TOL: f64 = 1e-9;

/// Numerical thresholds for rank decisions and certificate checks.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TolerancePolicy {
    /// Relative rank threshold. `None` means `100 · n · ε` for ambient dimension `n`.
    pub rank_rel_tol: Option<f64>,
    /// Residual threshold used when verifying reconstructions and certificates.
    pub residual_tol: f64,
}

impl Default for TolerancePolicy {
    fn default() -> Self {
        TolerancePolicy {
            rank_rel_tol: None,
            residual_tol: 1e-8,
        }
    }
}

impl TolerancePolicy {
    pub fn with_rank_tol(tol: f64) -> Self {
        TolerancePolicy {
            rank_rel_tol: Some(tol),
            ..Default::default()
        }
    }

    /// Rank threshold for an ambient space of dimension `n`.
    pub fn rank_tol(&self, n: usize) -> f64 {
        self.rank_rel_tol.unwrap_or(100.0 * n.max(1) as f64 * f64::EPSILON)
    }
}

/// A subspace of `ℂⁿ` stored as an `n × k` matrix with orthonormal columns.
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace {
    pub basis: CMatrix,
}

impl Subspace {
    /// Wraps a basis that is already orthonormal.
    pub fn from_orthonormal(basis: CMatrix) -> Self {
        Subspace { basis }
    }

    pub fn zero(n: usize) -> Self {
        Subspace {
            basis: CMatrix::zeros(n, 0),
        }
    }

    pub fn full(n: usize) -> Self {
        Subspace {
            basis: CMatrix::identity(n, n),
        }
    }

    /// Span of the given coordinate vectors.
    pub fn coordinate(n: usize, indices: &[usize]) -> Self {
        let mut b = CMatrix::zeros(n, indices.len());
        for (c, &i) in indices.iter().enumerate() {
            b[(i, c)] = ONE;
        }
        Subspace { basis: b }
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn ambient(&self) -> usize {
        self.basis.nrows()
    }

    /// Orthogonal projection onto the subspace.
    pub fn projection(&self) -> CMatrix {
        &self.basis * self.basis.adjoint()
    }

    /// Range of an orthogonal projection: eigenvectors with eigenvalue above one half.
    pub fn range_of_projection(p: &CMatrix) -> Result<Self> {
        let (vals, vecs) = herm_eig(p)?;
        let cols: Vec<usize> = (0..vals.len()).filter(|&i| vals[i] > 0.5).collect();
        Ok(Subspace {
            basis: select_columns(&vecs, &cols),
        })
    }

    /// Orthogonal complement in the ambient space.
    pub fn complement(&self) -> Self {
        complement_orth(self)
    }

    /// Distance from `v` to the subspace.
    pub fn residual(&self, v: &CMatrix) -> f64 {
        let proj = &self.basis * (self.basis.adjoint() * v);
        (v - proj).norm()
    }
}

/// Copies the listed columns into a new matrix.
pub fn select_columns(m: &CMatrix, cols: &[usize]) -> CMatrix {
    let mut out = CMatrix::zeros(m.nrows(), cols.len());
    for (c, &j) in cols.iter().enumerate() {
        out.set_column(c, &m.column(j));
    }
    out
}

/// Concatenates matrices with the same row count side by side.
pub fn hstack(parts: &[&CMatrix]) -> CMatrix {
    let rows = parts.first().map(|m| m.nrows()).unwrap_or(0);
    let cols = parts.iter().map(|m| m.ncols()).sum();
    let mut out = CMatrix::zeros(rows, cols);
    let mut c = 0;
    for m in parts {
        assert_eq!(m.nrows(), rows, "hstack row mismatch");
        out.view_mut((0, c), (rows, m.ncols())).copy_from(*m);
        c += m.ncols();
    }
    out
}

pub fn is_finite(m: &CMatrix) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

pub fn check_finite(m: &CMatrix) -> Result<()> {
    if is_finite(m) {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}

/// Largest entrywise modulus of `m - mᴴ`.
pub fn hermitian_defect(m: &CMatrix) -> f64 {
    if m.nrows() != m.ncols() {
        return f64::INFINITY;
    }
    (m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Singular values in descending order.
pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    svd_sorted(m).1
}

/// Spectral norm.
pub fn op_norm(m: &CMatrix) -> f64 {
    singular_values(m).first().copied().unwrap_or(0.0)
}

/// Thin SVD with singular values sorted in descending order: `(U, σ, V)` with `m = U diag(σ) Vᴴ`.
pub fn svd_sorted(m: &CMatrix) -> (CMatrix, Vec<f64>, CMatrix) {
    let (r, c) = m.shape();
    if r.min(c) == 0 {
        return (CMatrix::zeros(r, 0), Vec::new(), CMatrix::zeros(c, 0));
    }
    if r < c {
        let (u, s, v) = jacobi_svd(&m.adjoint());
        return (v, s, u);
    }
    jacobi_svd(m)
}

const JACOBI_MAX_SWEEPS: usize = 80;

/// One-sided Jacobi SVD of a tall matrix (`rows >= cols`), singular values descending.
fn jacobi_svd(m: &CMatrix) -> (CMatrix, Vec<f64>, CMatrix) {
    let (r, c) = m.shape();
    let mut a = m.clone();
    let mut v = CMatrix::identity(c, c);
    let eps = f64::EPSILON;
    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..c {
            for q in p + 1..c {
                let alpha = a.column(p).norm_squared();
                let beta = a.column(q).norm_squared();
                let gamma = a.column(p).dotc(&a.column(q));
                let g = gamma.norm();
                if g == 0.0 || g <= eps * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = cs * t;
                for mat in [&mut a, &mut v] {
                    for i in 0..mat.nrows() {
                        let xp = mat[(i, p)];
                        let xq = mat[(i, q)] * phase.conj();
                        mat[(i, p)] = xp * cs - xq * sn;
                        mat[(i, q)] = xp * sn + xq * cs;
                    }
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let norms: Vec<f64> = (0..c).map(|j| a.column(j).norm()).collect();
    let mut order: Vec<usize> = (0..c).collect();
    order.sort_by(|&x, &y| norms[y].total_cmp(&norms[x]));
    let sigma: Vec<f64> = order.iter().map(|&j| norms[j]).collect();
    let v = select_columns(&v, &order);
    let mut u = CMatrix::zeros(r, c);
    let mut next_unit = 0;
    for (k, &j) in order.iter().enumerate() {
        let mut col = if norms[j] > 0.0 {
            a.column(j) / C64::from(norms[j])
        } else {
            nalgebra::DVector::zeros(r)
        };
        loop {
            for i in 0..k {
                let proj = u.column(i).dotc(&col);
                col -= u.column(i) * proj;
            }
            let nrm = col.norm();
            if nrm > 0.5 {
                col /= C64::from(nrm);
                break;
            }
            col = nalgebra::DVector::zeros(r);
            col[next_unit] = ONE;
            next_unit += 1;
        }
        u.set_column(k, &col);
    }
    (u, sigma, v)
}

/// Orthonormal basis of the column space, discarding singular values below
/// `rank_tol · max(1, σ_max)`.
pub fn orthonormalize(m: &CMatrix, policy: &TolerancePolicy) -> Subspace {
    let n = m.nrows();
    if m.ncols() == 0 || n == 0 {
        return Subspace::zero(n);
    }
    let (u, s, _) = svd_sorted(m);
    let cut = policy.rank_tol(n) * s[0].max(1.0);
    let keep: Vec<usize> = (0..s.len()).filter(|&i| s[i] > cut).collect();
    Subspace {
        basis: select_columns(&u, &keep),
    }
}

/// Intersection of two subspaces: directions whose principal angle is zero up to tolerance.
pub fn intersect(a: &Subspace, b: &Subspace, policy: &TolerancePolicy) -> Subspace {
    let n = a.ambient();
    if a.dim() == 0 || b.dim() == 0 {
        return Subspace::zero(n);
    }
    let g = a.basis.adjoint() * &b.basis;
    let (u, s, _) = svd_sorted(&g);
    let tol = policy.rank_tol(n);
    let keep: Vec<usize> = (0..s.len()).filter(|&i| s[i] >= 1.0 - tol).collect();
    let raw = &a.basis * select_columns(&u, &keep);
    orthonormalize(&raw, policy)
}

/// Orthonormal basis of the orthogonal complement.
pub fn complement_orth(a: &Subspace) -> Subspace {
    let n = a.ambient();
    if a.dim() == 0 {
        return Subspace::full(n);
    }
    if a.dim() == n {
        return Subspace::zero(n);
    }
    let c = CMatrix::identity(n, n) - a.projection();
    let (vals, vecs) = herm_eig_unchecked(&c);
    let cols: Vec<usize> = (0..n).filter(|&i| vals[i] > 0.5).collect();
    Subspace {
        basis: select_columns(&vecs, &cols),
    }
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
pub fn herm_eig(h: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    if h.nrows() != h.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} is not square",
            h.nrows(),
            h.ncols()
        )));
    }
    check_finite(h)?;
    let defect = hermitian_defect(h);
    let scale = h.iter().map(|z| z.norm()).fold(1.0, f64::max);
    if defect > HERMITIAN_TOL * scale {
        return Err(Error::NotHermitian(defect));
    }
    Ok(herm_eig_unchecked(h))
}

fn herm_eig_unchecked(h: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = h.nrows();
    if n == 0 {
        return (Vec::new(), CMatrix::zeros(0, 0));
    }
    let sym = (h + h.adjoint()).scale(0.5);
    let eig = SymmetricEigen::new(sym);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let vals = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    (vals, select_columns(&eig.eigenvectors, &order))
}

/// `f(h)` for Hermitian `h` through its spectral decomposition.
pub fn matfun_herm(h: &CMatrix, f: impl Fn(f64) -> C64) -> Result<CMatrix> {
    let (vals, vecs) = herm_eig(h)?;
    let mut scaled = vecs.clone();
    for (j, &v) in vals.iter().enumerate() {
        let fv = f(v);
        scaled.column_mut(j).scale_mut_complex(fv);
    }
    Ok(scaled * vecs.adjoint())
}

trait ScaleComplex {
    fn scale_mut_complex(&mut self, z: C64);
}

impl<S> ScaleComplex for nalgebra::Matrix<C64, nalgebra::Dyn, nalgebra::U1, S>
where
    S: nalgebra::StorageMut<C64, nalgebra::Dyn, nalgebra::U1>,
{
    fn scale_mut_complex(&mut self, z: C64) {
        for x in self.iter_mut() {
            *x *= z;
        }
    }
}

/// Checks that `p` is an orthogonal projection within the library tolerances.
pub fn check_projection(p: &CMatrix) -> Result<()> {
    if p.nrows() != p.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} is not square",
            p.nrows(),
            p.ncols()
        )));
    }
    check_finite(p)?;
    let herm = hermitian_defect(p);
    if herm > HERMITIAN_TOL {
        return Err(Error::NotHermitian(herm));
    }
    let idem = (p * p - p).norm();
    if idem > IDEMPOTENT_TOL {
        return Err(Error::NotProjection(idem));
    }
    Ok(())
}

/// JSON layout of a matrix: row-major `[re, im]` pairs.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<[f64; 2]>,
}

impl MatrixJson {
    pub fn from_matrix(m: &CMatrix) -> Self {
        let mut data = Vec::with_capacity(m.len());
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                let z = m[(i, j)];
                data.push([z.re, z.im]);
            }
        }
        MatrixJson {
            rows: m.nrows(),
            cols: m.ncols(),
            data,
        }
    }

    pub fn to_matrix(&self) -> Result<CMatrix> {
        if self.data.len() != self.rows * self.cols {
            return Err(Error::Parse(format!(
                "expected {} entries for a {}x{} matrix, found {}",
                self.rows * self.cols,
                self.rows,
                self.cols,
                self.data.len()
            )));
        }
        let m = CMatrix::from_fn(self.rows, self.cols, |i, j| {
            let [re, im] = self.data[i * self.cols + j];
            C64::new(re, im)
        });
        check_finite(&m)?;
        Ok(m)
    }
}

pub fn matrix_to_json(m: &CMatrix) -> String {
    serde_json::to_string(&MatrixJson::from_matrix(m)).expect("matrix serialization")
}

pub fn matrix_from_json(s: &str) -> Result<CMatrix> {
    let mj: MatrixJson = serde_json::from_str(s)?;
    mj.to_matrix()
}

pub fn read_matrix(path: &Path) -> Result<CMatrix> {
    let text = std::fs::read_to_string(path)?;
    matrix_from_json(&text)
}

pub fn write_matrix(path: &Path, m: &CMatrix) -> Result<()> {
    std::fs::write(path, matrix_to_json(m))?;
    Ok(())
}
