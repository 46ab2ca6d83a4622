//! Truncated multiplication, Toeplitz and Hankel operators and truncated
//! shift-invariant subspaces in a Fourier window.

use serde::{Deserialize, Serialize};

use super::symbol::{
    blaschke_factor, default_grid, fourier_coefficients, sample_symbol, Coefficients, InnerData, Symbol,
};
use crate::complement::{decay_metric, DecayMetric};
use crate::error::{Error, Result};
use crate::substrate::{
    complement_orth, herm_eig, orthonormalize, select_columns, singular_values, CMatrix, Subspace, TolerancePolicy, C64,
};

/// Window of Fourier modes `lo..=hi` used as the ambient space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HardyTruncation {
    pub n_modes: usize,
    /// `false`: modes `-N..=N` (a window of `L²`); `true`: modes `0..=N` (a window of `H²`).
    pub hardy_only: bool,
}

impl HardyTruncation {
    /// Window `-N..=N` of `L²`, ambient dimension `2N + 1`.
    pub fn l2(n_modes: usize) -> Self {
        HardyTruncation {
            n_modes,
            hardy_only: false,
        }
    }

    /// Window `0..=N` of `H²`, ambient dimension `N + 1`.
    pub fn h2(n_modes: usize) -> Self {
        HardyTruncation {
            n_modes,
            hardy_only: true,
        }
    }

    pub fn lo(&self) -> i64 {
        if self.hardy_only {
            0
        } else {
            -(self.n_modes as i64)
        }
    }

    pub fn hi(&self) -> i64 {
        self.n_modes as i64
    }

    pub fn dim(&self) -> usize {
        (self.hi() - self.lo() + 1) as usize
    }

    pub fn index_of(&self, mode: i64) -> Option<usize> {
        (mode >= self.lo() && mode <= self.hi()).then(|| (mode - self.lo()) as usize)
    }

    pub fn modes(&self) -> impl Iterator<Item = i64> {
        self.lo()..=self.hi()
    }

    /// Span of the modes `from..=hi` inside the window.
    pub fn modes_from(&self, from: i64) -> Subspace {
        let idx: Vec<usize> = (from.max(self.lo())..=self.hi())
            .filter_map(|m| self.index_of(m))
            .collect();
        Subspace::coordinate(self.dim(), &idx)
    }

    /// Span of the nonnegative modes.
    pub fn hardy_subspace(&self) -> Subspace {
        self.modes_from(0)
    }

    /// Riesz projection onto the nonnegative modes.
    pub fn riesz(&self) -> CMatrix {
        self.hardy_subspace().projection()
    }
}

fn laurent(c: &Coefficients, rows: impl Iterator<Item = i64>, cols: impl Iterator<Item = i64>) -> CMatrix {
    let r: Vec<i64> = rows.collect();
    let k: Vec<i64> = cols.collect();
    CMatrix::from_fn(r.len(), k.len(), |i, j| c.get(r[i] - k[j]))
}

fn coefficients_for(s: &Symbol, n_modes: usize) -> Result<Coefficients> {
    fourier_coefficients(s, default_grid(n_modes))
}

/// Multiplication by `s` compressed to the modes `-N..=N`: entry `(m, n) = ŝ(m - n)`.
pub fn multiplication_truncation(s: &Symbol, trunc: &HardyTruncation) -> Result<CMatrix> {
    let c = coefficients_for(s, trunc.n_modes)?;
    Ok(laurent(&c, trunc.modes(), trunc.modes()))
}

/// `T_s` on the modes `0..=N`.
pub fn toeplitz_truncation(s: &Symbol, n_modes: usize) -> Result<CMatrix> {
    let c = coefficients_for(s, n_modes)?;
    let n = n_modes as i64;
    Ok(laurent(&c, 0..=n, 0..=n))
}

/// `H_s = P₋ M_s` from the modes `0..=N` to the modes `-N..=-1`; row `i` is mode `-N + i`.
pub fn hankel_truncation(s: &Symbol, n_modes: usize) -> Result<CMatrix> {
    let c = coefficients_for(s, n_modes)?;
    let n = n_modes as i64;
    Ok(laurent(&c, -n..=-1, 0..=n))
}

fn check_invertible(s: &Symbol, grid: usize) -> Result<Vec<C64>> {
    let v = sample_symbol(s, grid)?;
    let top = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let low = v.iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min);
    if top == 0.0 || low < 1e-8 * top {
        return Err(Error::NotInvertibleSymbol(low));
    }
    Ok(v)
}

/// Samples of the unimodular part `f / h`, where `h` is outer with `|h| = |f|`.
fn unimodular_part(samples: &[C64]) -> Vec<C64> {
    let logs: Vec<C64> = samples.iter().map(|z| C64::from(z.norm().ln())).collect();
    let c = Coefficients::from_samples(&logs);
    let g = samples.len();
    let b = c.band();
    let mut analytic = vec![C64::from(0.0); g];
    analytic[0] = c.get(0);
    for n in 1..=b {
        analytic[n as usize] = c.get(n) * 2.0;
    }
    let mut buf = analytic;
    rustfft::FftPlanner::new().plan_fft_inverse(g).process(&mut buf);
    samples.iter().zip(buf).map(|(f, lh)| f / lh.exp()).collect()
}

/// Szegő kernel `k_a` (and its derivatives in `ā` for repeated zeros) placed on
/// the modes `shift..=hi` of the window.
fn kernel_vectors(zeros: &[C64], shift: i64, trunc: &HardyTruncation) -> CMatrix {
    let mut groups: Vec<(C64, usize)> = Vec::new();
    for &a in zeros {
        match groups.iter_mut().find(|(b, _)| *b == a) {
            Some(g) => g.1 += 1,
            None => groups.push((a, 1)),
        }
    }
    let total: usize = groups.iter().map(|g| g.1).sum();
    let mut m = CMatrix::zeros(trunc.dim(), total);
    let mut col = 0;
    for (a, mult) in groups {
        for d in 0..mult {
            for mode in shift.max(trunc.lo())..=trunc.hi() {
                let n = mode - shift;
                if n < d as i64 {
                    continue;
                }
                let falling: f64 = (0..d).map(|i| (n - i as i64) as f64).product();
                let v = a.conj().powu((n - d as i64) as u32) * falling;
                m[(trunc.index_of(mode).unwrap(), col)] = v;
            }
            col += 1;
        }
    }
    m
}

fn model_route(data: &InnerData, trunc: &HardyTruncation, policy: &TolerancePolicy) -> Subspace {
    let n = trunc.dim();
    let base = trunc.modes_from(data.shift);
    if data.zeros.is_empty() || base.dim() == 0 {
        return base;
    }
    let kernels = kernel_vectors(&data.zeros, data.shift, trunc);
    let local = base.basis.adjoint() * &kernels;
    let k = orthonormalize(&local, policy);
    let rest = complement_orth(&k);
    let basis = &base.basis * rest.basis;
    debug_assert_eq!(basis.nrows(), n);
    Subspace::from_orthonormal(basis)
}

/// Range of the compression of `P_{uH²}` to the window, thresholded at one half.
fn compressed_route(u: &[C64], trunc: &HardyTruncation) -> Result<Subspace> {
    let c = Coefficients::from_samples(u);
    let band = c.band().min(4 * trunc.dim() as i64 + 64);
    let hi = trunc.hi();
    let cols: Vec<i64> = (0..=hi + band).collect();
    let rows: Vec<i64> = trunc.modes().collect();
    let m = CMatrix::from_fn(rows.len(), cols.len(), |i, j| c.get(rows[i] - cols[j]));
    let comp = &m * m.adjoint();
    let (vals, vecs) = herm_eig(&comp)?;
    let keep: Vec<usize> = (0..vals.len()).filter(|&i| vals[i] > 0.5).collect();
    Ok(Subspace::from_orthonormal(select_columns(&vecs, &keep)))
}

/// Truncation of `sH²` to the window.
///
/// When the unimodular part of `s` is `χ_m B` with `B` a finite Blaschke
/// product, the result is the span of the modes `m..=N` minus the truncated
/// Szegő kernels of the zeros of `B`, so the dimension is exactly
/// `N + 1 - m - #zeros` (clipped to the window). Otherwise the outer factor is
/// divided out and the compression of `P_{uH²}` to the window is thresholded at
/// one half.
pub fn subspace_fh2(s: &Symbol, trunc: &HardyTruncation, policy: &TolerancePolicy) -> Result<Subspace> {
    let grid = default_grid(trunc.n_modes);
    let samples = check_invertible(s, grid)?;
    if let Some(data) = s.inner_data() {
        return Ok(model_route(&data, trunc, policy));
    }
    let dev = samples.iter().map(|z| (z.norm() - 1.0).abs()).fold(0.0, f64::max);
    let u = if dev < 1e-12 {
        samples
    } else {
        unimodular_part(&samples)
    };
    compressed_route(&u, trunc)
}

/// Truncated model space `K_B = H² ⊖ BH²` with diagnostics.
#[derive(Clone, Debug)]
pub struct ModelSpace {
    pub subspace: Subspace,
    /// `min_i Π_{j≠i} |(a_i - a_j)/(1 - ā_j a_i)|`.
    pub separation: f64,
    /// Largest `‖P_K v‖ / ‖v‖` over the clipped vectors `v = Bχ_k`, `0 ≤ k ≤ N/2`.
    pub orthogonality_residual: f64,
    /// Distance of the basis from the complement of the truncated `BH²`.
    pub containment_residual: f64,
}

pub fn separation_constant(zeros: &[C64]) -> f64 {
    let mut best = f64::INFINITY;
    for (i, &a) in zeros.iter().enumerate() {
        let mut p = 1.0;
        for (j, &b) in zeros.iter().enumerate() {
            if i != j {
                p *= ((a - b) / (C64::from(1.0) - b.conj() * a)).norm();
            }
        }
        best = best.min(p);
    }
    if zeros.len() < 2 {
        1.0
    } else {
        best
    }
}

/// Span of the truncated Szegő kernels `k_a(z) = Σ āⁿ zⁿ` on the modes `0..=N`.
pub fn model_space(zeros: &[C64], trunc: &HardyTruncation, policy: &TolerancePolicy) -> Result<ModelSpace> {
    if zeros.iter().any(|a| a.norm() >= 1.0) {
        return Err(Error::BadParams("zeros must lie in the open disk".into()));
    }
    for (i, a) in zeros.iter().enumerate() {
        if zeros[..i].contains(a) {
            return Err(Error::DuplicateZeros);
        }
    }
    let kernels = kernel_vectors(zeros, 0, trunc);
    let subspace = orthonormalize(&kernels, policy);

    let b = Symbol::blaschke(zeros.to_vec());
    let c = coefficients_for(&b, trunc.n_modes)?;
    let mut orth: f64 = 0.0;
    for k in 0..=(trunc.n_modes as i64 / 2) {
        let v = CMatrix::from_fn(trunc.dim(), 1, |i, _| c.get(trunc.lo() + i as i64 - k));
        let nv = v.norm();
        if nv > 0.0 {
            let proj = &subspace.basis * (subspace.basis.adjoint() * &v);
            orth = orth.max(proj.norm() / nv);
        }
    }
    let bh2 = subspace_fh2(&b, trunc, policy)?;
    let containment = (bh2.basis.adjoint() * &subspace.basis).norm();
    Ok(ModelSpace {
        subspace,
        separation: separation_constant(zeros),
        orthogonality_residual: orth,
        containment_residual: containment,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HartmanReport {
    pub levels: Vec<usize>,
    pub singular_values: Vec<Vec<f64>>,
    pub decay: DecayMetric,
}

/// Decay of the singular values of truncated Hankel operators across levels.
pub fn hartman_diagnostic(s: &Symbol, levels: &[usize]) -> Result<HartmanReport> {
    let sv = levels
        .iter()
        .map(|&n| hankel_truncation(s, n).map(|h| singular_values(&h)))
        .collect::<Result<Vec<_>>>()?;
    let decay = decay_metric(&sv)?;
    Ok(HartmanReport {
        levels: levels.to_vec(),
        singular_values: sv,
        decay,
    })
}

/// `|b(e^{it})| - 1` over a grid, for checking Blaschke evaluation.
pub fn blaschke_modulus_defect(zeros: &[C64], grid: usize) -> f64 {
    (0..grid)
        .map(|k| {
            let z = C64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / grid as f64);
            let v: C64 = zeros.iter().map(|&a| blaschke_factor(a, z)).product();
            (v.norm() - 1.0).abs()
        })
        .fold(0.0, f64::max)
}
