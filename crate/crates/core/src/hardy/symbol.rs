//! Symbols on the unit circle: evaluation, Fourier coefficients and winding numbers.

use std::f64::consts::PI;

use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::substrate::C64;

/// A function on the unit circle.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Symbol {
    /// `χ_n(z) = zⁿ`.
    Monomial {
        n: i64,
    },
    /// Trigonometric polynomial `Σ ĉ_n zⁿ`.
    Fourier {
        coeffs: Vec<(i64, C64)>,
    },
    /// `scale · Π (z - z_i)^{m_i} / Π (z - p_j)^{k_j}`.
    Rational {
        scale: C64,
        zeros: Vec<(C64, u32)>,
        poles: Vec<(C64, u32)>,
    },
    /// Finite Blaschke product `Π (ā/|a|)(a - z)/(1 - āz)`, with the factor `z` for `a = 0`.
    Blaschke {
        zeros: Vec<C64>,
    },
    /// Indicator of the arc `{e^{it} : t0 ≤ t < t1}`.
    ArcIndicator {
        t0: f64,
        t1: f64,
    },
    /// `exp(mass (z + 1)/(z - 1))`, set to `1` within `exclusion` radians of `z = 1`.
    SingularInner {
        mass: f64,
        exclusion: f64,
    },
    Product {
        factors: Vec<Symbol>,
    },
    Sum {
        terms: Vec<Symbol>,
    },
    Conj {
        inner: Box<Symbol>,
    },
}

/// Tolerance for deciding that a point lies on the unit circle.
const CIRCLE_TOL: f64 = 1e-12;

pub fn blaschke_factor(a: C64, z: C64) -> C64 {
    if a.norm() == 0.0 {
        return z;
    }
    (a.conj() / a.norm()) * (a - z) / (C64::from(1.0) - a.conj() * z)
}

impl Symbol {
    pub fn monomial(n: i64) -> Self {
        Symbol::Monomial { n }
    }

    pub fn blaschke(zeros: Vec<C64>) -> Self {
        Symbol::Blaschke { zeros }
    }

    pub fn product(factors: Vec<Symbol>) -> Self {
        Symbol::Product { factors }
    }

    pub fn conj(self) -> Self {
        Symbol::Conj { inner: Box::new(self) }
    }

    /// Checks representation invariants.
    pub fn validate(&self) -> Result<()> {
        match self {
            Symbol::Blaschke { zeros } => {
                if zeros.iter().any(|a| a.norm() >= 1.0) {
                    return Err(Error::BadParams("Blaschke zeros must lie in the open disk".into()));
                }
            }
            Symbol::Rational { poles, .. } => {
                if poles.iter().any(|(p, _)| (p.norm() - 1.0).abs() < CIRCLE_TOL) {
                    return Err(Error::PoleOnCircle);
                }
            }
            Symbol::SingularInner { mass, exclusion } => {
                if *mass < 0.0 || *exclusion < 0.0 {
                    return Err(Error::BadParams("singular inner parameters must be nonnegative".into()));
                }
            }
            Symbol::Product { factors } => factors.iter().try_for_each(|f| f.validate())?,
            Symbol::Sum { terms } => terms.iter().try_for_each(|f| f.validate())?,
            Symbol::Conj { inner } => inner.validate()?,
            Symbol::Monomial { .. } | Symbol::Fourier { .. } | Symbol::ArcIndicator { .. } => {}
        }
        Ok(())
    }

    /// Value at `e^{it}`.
    pub fn eval_angle(&self, t: f64) -> C64 {
        let z = C64::from_polar(1.0, t);
        match self {
            Symbol::Monomial { n } => C64::from_polar(1.0, *n as f64 * t),
            Symbol::Fourier { coeffs } => coeffs
                .iter()
                .map(|(n, c)| c * C64::from_polar(1.0, *n as f64 * t))
                .sum(),
            Symbol::Rational { scale, zeros, poles } => {
                let mut v = *scale;
                for (a, m) in zeros {
                    v *= (z - a).powu(*m);
                }
                for (p, m) in poles {
                    v /= (z - p).powu(*m);
                }
                v
            }
            Symbol::Blaschke { zeros } => zeros.iter().map(|&a| blaschke_factor(a, z)).product(),
            Symbol::ArcIndicator { t0, t1 } => {
                let tt = t.rem_euclid(2.0 * PI);
                let inside = if t0 <= t1 {
                    tt >= *t0 && tt < *t1
                } else {
                    tt >= *t0 || tt < *t1
                };
                C64::from(if inside { 1.0 } else { 0.0 })
            }
            Symbol::SingularInner { mass, exclusion } => {
                let tt = (t + PI).rem_euclid(2.0 * PI) - PI;
                if tt.abs() <= *exclusion || tt == 0.0 {
                    C64::from(1.0)
                } else {
                    // (z + 1)/(z - 1) = -i cot(t/2) on the circle
                    C64::from_polar(1.0, -mass / (tt / 2.0).tan())
                }
            }
            Symbol::Product { factors } => factors.iter().map(|f| f.eval_angle(t)).product(),
            Symbol::Sum { terms } => terms.iter().map(|f| f.eval_angle(t)).sum(),
            Symbol::Conj { inner } => inner.eval_angle(t).conj(),
        }
    }

    fn has_circle_pole(&self) -> bool {
        match self {
            Symbol::Rational { poles, .. } => poles.iter().any(|(p, _)| (p.norm() - 1.0).abs() < CIRCLE_TOL),
            Symbol::Product { factors } => factors.iter().any(|f| f.has_circle_pole()),
            Symbol::Sum { terms } => terms.iter().any(|f| f.has_circle_pole()),
            Symbol::Conj { inner } => inner.has_circle_pole(),
            _ => false,
        }
    }

    /// Inner-factor data `χ_shift · B_zeros` when the unimodular part of the
    /// symbol is a monomial times a finite Blaschke product.
    pub fn inner_data(&self) -> Option<InnerData> {
        match self {
            Symbol::Monomial { n } => Some(InnerData {
                shift: *n,
                zeros: Vec::new(),
            }),
            Symbol::Fourier { coeffs } => {
                let nz: Vec<_> = coeffs.iter().filter(|(_, c)| c.norm() > 0.0).collect();
                match nz.as_slice() {
                    [(n, _)] => Some(InnerData {
                        shift: *n,
                        zeros: Vec::new(),
                    }),
                    _ => None,
                }
            }
            Symbol::Blaschke { zeros } => {
                let mut d = InnerData {
                    shift: 0,
                    zeros: Vec::new(),
                };
                for &a in zeros {
                    d.push_zero(a);
                }
                Some(d)
            }
            Symbol::Rational { scale, zeros, poles } => {
                if scale.norm() == 0.0 {
                    return None;
                }
                let mut d = InnerData {
                    shift: 0,
                    zeros: Vec::new(),
                };
                for &(a, m) in zeros {
                    if (a.norm() - 1.0).abs() < CIRCLE_TOL {
                        return None;
                    }
                    if a.norm() < 1.0 {
                        for _ in 0..m {
                            d.push_zero(a);
                        }
                    }
                }
                for &(p, m) in poles {
                    if p.norm() == 0.0 {
                        d.shift -= m as i64;
                    } else if p.norm() < 1.0 {
                        return None;
                    }
                }
                Some(d)
            }
            Symbol::Product { factors } => {
                let mut d = InnerData {
                    shift: 0,
                    zeros: Vec::new(),
                };
                for f in factors {
                    let e = f.inner_data()?;
                    d.shift += e.shift;
                    d.zeros.extend(e.zeros);
                }
                Some(d)
            }
            Symbol::Conj { inner } => match inner.as_ref() {
                Symbol::Monomial { n } => Some(InnerData {
                    shift: -n,
                    zeros: Vec::new(),
                }),
                _ => None,
            },
            Symbol::Sum { .. } | Symbol::ArcIndicator { .. } | Symbol::SingularInner { .. } => None,
        }
    }
}

/// Unimodular part `χ_shift · Π b_{a}` over nonzero zeros `a` (with repetition).
#[derive(Clone, Debug, PartialEq)]
pub struct InnerData {
    pub shift: i64,
    pub zeros: Vec<C64>,
}

impl InnerData {
    fn push_zero(&mut self, a: C64) {
        if a.norm() == 0.0 {
            self.shift += 1;
        } else {
            self.zeros.push(a);
        }
    }
}

fn check_grid(grid_size: usize) -> Result<()> {
    if grid_size < 4 || !grid_size.is_power_of_two() {
        return Err(Error::BadParams(format!(
            "grid size {grid_size} must be a power of two ≥ 4"
        )));
    }
    Ok(())
}

/// Values at `e^{2πik/G}`, `k = 0..G`.
pub fn sample_symbol(s: &Symbol, grid_size: usize) -> Result<Vec<C64>> {
    check_grid(grid_size)?;
    if s.has_circle_pole() {
        return Err(Error::PoleOnCircle);
    }
    s.validate()?;
    Ok((0..grid_size)
        .map(|k| s.eval_angle(2.0 * PI * k as f64 / grid_size as f64))
        .collect())
}

/// Fourier coefficients from samples, indexed by `n ∈ (-G/2, G/2]`.
#[derive(Clone, Debug)]
pub struct Coefficients {
    data: Vec<C64>,
}

impl Coefficients {
    pub fn from_samples(samples: &[C64]) -> Self {
        let g = samples.len();
        let mut buf = samples.to_vec();
        FftPlanner::new().plan_fft_forward(g).process(&mut buf);
        let scale = 1.0 / g as f64;
        for x in buf.iter_mut() {
            *x *= scale;
        }
        Coefficients { data: buf }
    }

    pub fn grid(&self) -> usize {
        self.data.len()
    }

    /// Largest usable frequency.
    pub fn band(&self) -> i64 {
        self.data.len() as i64 / 2 - 1
    }

    pub fn get(&self, n: i64) -> C64 {
        if n.abs() > self.band() {
            return C64::from(0.0);
        }
        let g = self.data.len() as i64;
        self.data[n.rem_euclid(g) as usize]
    }

    /// Samples of `Σ ĉ_n r^{|n|} e^{int}` on the grid.
    pub fn harmonic_samples(&self, r: f64) -> Vec<C64> {
        let g = self.data.len();
        let b = self.band();
        let mut buf = vec![C64::from(0.0); g];
        for n in -b..=b {
            buf[n.rem_euclid(g as i64) as usize] = self.get(n) * r.powi(n.unsigned_abs() as i32);
        }
        FftPlanner::new().plan_fft_inverse(g).process(&mut buf);
        buf
    }
}

pub fn fourier_coefficients(s: &Symbol, grid_size: usize) -> Result<Coefficients> {
    Ok(Coefficients::from_samples(&sample_symbol(s, grid_size)?))
}

/// Default grid for coefficient computations at truncation `n_modes`.
pub fn default_grid(n_modes: usize) -> usize {
    (8 * (2 * n_modes + 1)).next_power_of_two().max(4096)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WindingMethod {
    /// `Σ n |ĉ_n|²` for unimodular symbols.
    Fourier,
    /// Zeros minus poles in the disk.
    Rational,
    /// Winding of the harmonic extension on a circle of radius close to one.
    Harmonic,
}

const WINDING_GRID: usize = 1 << 14;
const HARMONIC_RADIUS: f64 = 0.995;

/// Index of an invertible symbol, counted as the winding number of its curve
/// (so `χ_n ↦ n`).
pub fn winding_index(s: &Symbol, method: WindingMethod) -> Result<i64> {
    match method {
        WindingMethod::Rational => rational_index(s),
        WindingMethod::Fourier => {
            let v = sample_symbol(s, WINDING_GRID)?;
            let dev = v.iter().map(|z| (z.norm() - 1.0).abs()).fold(0.0, f64::max);
            if dev > 1e-6 {
                return Err(Error::MethodInapplicable("fourier".into()));
            }
            let c = Coefficients::from_samples(&v);
            let b = c.band();
            let x: f64 = (-b..=b).map(|n| n as f64 * c.get(n).norm_sqr()).sum();
            round_index(x)
        }
        WindingMethod::Harmonic => {
            let c = fourier_coefficients(s, WINDING_GRID)?;
            let h = c.harmonic_samples(HARMONIC_RADIUS);
            curve_winding(&h)
        }
    }
}

fn round_index(x: f64) -> Result<i64> {
    let r = x.round();
    if (x - r).abs() > 1e-3 {
        return Err(Error::WindingIllConditioned(format!("non-integer value {x:.6}")));
    }
    Ok(r as i64)
}

/// Winding number about the origin of a closed sampled curve.
pub fn curve_winding(values: &[C64]) -> Result<i64> {
    let top = values.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let low = values.iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min);
    if top == 0.0 || low < 1e-6 * top.max(1.0) {
        return Err(Error::WindingIllConditioned(format!(
            "curve passes within {low:.3e} of the origin"
        )));
    }
    let n = values.len();
    let mut total = 0.0;
    for k in 0..n {
        let step = (values[(k + 1) % n] / values[k]).arg();
        if step.abs() > 0.75 * PI {
            return Err(Error::WindingIllConditioned("grid too coarse for the curve".into()));
        }
        total += step;
    }
    round_index(total / (2.0 * PI))
}

fn rational_index(s: &Symbol) -> Result<i64> {
    match s {
        Symbol::Monomial { n } => Ok(*n),
        Symbol::Blaschke { zeros } => {
            s.validate()?;
            Ok(zeros.len() as i64)
        }
        Symbol::Rational { zeros, poles, .. } => {
            if poles.iter().any(|(p, _)| (p.norm() - 1.0).abs() < CIRCLE_TOL) {
                return Err(Error::PoleOnCircle);
            }
            if zeros.iter().any(|(a, _)| (a.norm() - 1.0).abs() < CIRCLE_TOL) {
                return Err(Error::WindingIllConditioned("zero on the unit circle".into()));
            }
            let z: i64 = zeros
                .iter()
                .filter(|(a, _)| a.norm() < 1.0)
                .map(|(_, m)| *m as i64)
                .sum();
            let p: i64 = poles
                .iter()
                .filter(|(a, _)| a.norm() < 1.0)
                .map(|(_, m)| *m as i64)
                .sum();
            Ok(z - p)
        }
        Symbol::Fourier { coeffs } => {
            let nz: Vec<_> = coeffs.iter().filter(|(_, c)| c.norm() > 0.0).collect();
            match nz.as_slice() {
                [(n, _)] => Ok(*n),
                _ => Err(Error::MethodInapplicable("rational".into())),
            }
        }
        Symbol::Product { factors } => factors.iter().map(rational_index).sum(),
        Symbol::Conj { inner } => rational_index(inner).map(|k| -k),
        _ => Err(Error::MethodInapplicable("rational".into())),
    }
}
