#![allow(dead_code)]

use grasspair::pairs::ProjectionPair;
use grasspair::substrate::{CMatrix, C64};
use nalgebra::DMatrix;

/// Numerical rank from a plain SVD with cutoff `1e-8 · max(1, σ_max)`.
pub fn rank(m: &CMatrix) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let sv = m.clone().svd(false, false).singular_values;
    let top = sv.iter().cloned().fold(0.0, f64::max).max(1.0);
    sv.iter().filter(|&&s| s > 1e-8 * top).count()
}

/// Corner dimensions `(d11, d00, d10, d01)` by rank counting on the raw bases.
pub fn brute_force_dims(pair: &ProjectionPair) -> (usize, usize, usize, usize) {
    let s = &pair.s().basis;
    let t = &pair.t().basis;
    let n = pair.n();
    let (ks, kt) = (s.ncols(), t.ncols());
    let mut st = DMatrix::zeros(n, ks + kt);
    st.view_mut((0, 0), (n, ks)).copy_from(s);
    st.view_mut((0, ks), (n, kt)).copy_from(t);
    let r_union = rank(&st);
    let r_cross = rank(&(t.adjoint() * s));
    (ks + kt - r_union, n - r_union, ks - r_cross, kt - r_cross)
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn eigs(h: &CMatrix) -> Vec<f64> {
    let mut v: Vec<f64> = h.clone().symmetric_eigen().eigenvalues.iter().cloned().collect();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}
