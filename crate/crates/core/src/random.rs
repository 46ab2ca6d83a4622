//! Seeded generators for unitaries, projections and pairs with prescribed structure.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::pairs::ProjectionPair;
use crate::substrate::{matfun_herm, op_norm, CMatrix, Subspace, C64, I};

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian_matrix(rows: usize, cols: usize, rng: &mut SeededRng) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
    })
}

/// Haar-distributed unitary from the QR factorization of a complex Gaussian matrix.
pub fn random_unitary(n: usize, rng: &mut SeededRng) -> CMatrix {
    let g = gaussian_matrix(n, n, rng);
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::from(1.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Random `k`-dimensional subspace of `ℂⁿ`.
pub fn random_subspace(n: usize, k: usize, rng: &mut SeededRng) -> Subspace {
    let u = random_unitary(n, rng);
    Subspace::from_orthonormal(u.columns(0, k).into_owned())
}

pub fn random_pair(n: usize, ks: usize, kt: usize, rng: &mut SeededRng) -> ProjectionPair {
    let s = random_subspace(n, ks, rng);
    let t = random_subspace(n, kt, rng);
    ProjectionPair::from_subspaces(s, t).expect("subspaces share the ambient space")
}

pub fn random_hermitian(n: usize, rng: &mut SeededRng) -> CMatrix {
    let g = gaussian_matrix(n, n, rng);
    (&g + g.adjoint()).scale(0.5)
}

/// Random unitary `U = e^{iH}` with `‖U - 1‖ < radius`.
pub fn random_near_identity(n: usize, radius: f64, rng: &mut SeededRng) -> CMatrix {
    if radius <= 0.0 || n == 0 {
        return CMatrix::identity(n, n);
    }
    let h = random_hermitian(n, rng);
    let nrm = op_norm(&h);
    let max_angle = 2.0 * (radius.min(2.0) / 2.0).asin();
    let scale = if nrm > 0.0 {
        rng.random::<f64>() * max_angle / nrm
    } else {
        0.0
    };
    let h = h.scale(scale);
    matfun_herm(&h, |x| (I * x).exp()).expect("scaled Hermitian matrix")
}

/// Prescribed five-space structure for [`structured_pair`].
#[derive(Clone, Debug, PartialEq)]
pub struct PairShape {
    pub d11: usize,
    pub d00: usize,
    pub d10: usize,
    pub d01: usize,
    pub angles: Vec<f64>,
}

impl PairShape {
    pub fn n(&self) -> usize {
        self.d11 + self.d00 + self.d10 + self.d01 + 2 * self.angles.len()
    }

    /// Random shape in dimension `n` with angles drawn from `[0.05, π/2 - 0.05]`.
    pub fn random(n: usize, rng: &mut SeededRng) -> Self {
        let l = rng.random_range(0..=n / 2);
        let mut rest = n - 2 * l;
        let mut take = |rng: &mut SeededRng| {
            let x = rng.random_range(0..=rest);
            rest -= x;
            x
        };
        let d11 = take(rng);
        let d10 = take(rng);
        let d01 = take(rng);
        let d00 = rest;
        let angles = (0..l)
            .map(|_| rng.random_range(0.05..std::f64::consts::FRAC_PI_2 - 0.05))
            .collect();
        PairShape {
            d11,
            d00,
            d10,
            d01,
            angles,
        }
    }
}

/// Pair with exactly the given five-space structure, in a random orthonormal frame.
pub fn structured_pair(shape: &PairShape, rng: &mut SeededRng) -> ProjectionPair {
    let n = shape.n();
    let w = random_unitary(n, rng);
    let l = shape.angles.len();
    let mut s_cols = Vec::new();
    let mut t_cols = Vec::new();
    let mut c = 0;
    for _ in 0..shape.d11 {
        s_cols.push(w.column(c).into_owned());
        t_cols.push(w.column(c).into_owned());
        c += 1;
    }
    for _ in 0..shape.d10 {
        s_cols.push(w.column(c).into_owned());
        c += 1;
    }
    for _ in 0..shape.d01 {
        t_cols.push(w.column(c).into_owned());
        c += 1;
    }
    for k in 0..l {
        let a = w.column(c).into_owned();
        let b = w.column(c + 1).into_owned();
        let (sn, cs) = shape.angles[k].sin_cos();
        t_cols.push(&a * C64::from(cs) + &b * C64::from(sn));
        s_cols.push(a);
        c += 2;
    }
    let to_sub = |cols: &[nalgebra::DVector<C64>]| {
        let mut m = CMatrix::zeros(n, cols.len());
        for (j, v) in cols.iter().enumerate() {
            m.set_column(j, v);
        }
        Subspace::from_orthonormal(m)
    };
    ProjectionPair::from_subspaces(to_sub(&s_cols), to_sub(&t_cols)).expect("same ambient space")
}
