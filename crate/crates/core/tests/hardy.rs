mod common;

use std::f64::consts::{PI, TAU};

use common::max_abs;
use grasspair::geodesics::restricted_index;
use grasspair::hardy::*;
use grasspair::substrate::{CMatrix, TolerancePolicy, C64};
use proptest::prelude::*;

fn tol() -> TolerancePolicy {
    TolerancePolicy::default()
}

fn trig(coeffs: &[(i64, f64, f64)]) -> Symbol {
    Symbol::Fourier {
        coeffs: coeffs.iter().map(|&(n, re, im)| (n, C64::new(re, im))).collect(),
    }
}

fn disk_point(r: f64, t: f64) -> C64 {
    C64::from_polar(r, t)
}

#[test]
fn fourier_coefficients_match_direct_quadrature() {
    let s = Symbol::blaschke(vec![C64::new(0.3, 0.2), C64::new(-0.5, 0.1)]);
    let g = 1024;
    let c = fourier_coefficients(&s, g).unwrap();
    for n in -4i64..=6 {
        let direct: C64 = (0..g)
            .map(|k| {
                let t = 2.0 * PI * k as f64 / g as f64;
                s.eval_angle(t) * C64::from_polar(1.0, -(n as f64) * t)
            })
            .sum::<C64>()
            / g as f64;
        assert!((c.get(n) - direct).norm() < 1e-12, "n = {n}");
    }
}

#[test]
fn semicommutator_equals_hankel_product() {
    let f = trig(&[(-2, 0.3, 0.1), (0, 1.0, 0.0), (1, -0.4, 0.2), (3, 0.2, 0.0)]);
    let g = trig(&[(-1, 0.5, 0.0), (0, 0.2, -0.3), (2, 0.7, 0.1)]);
    let fg = Symbol::product(vec![f.clone(), g.clone()]);
    let n = 24;
    let lhs = toeplitz_truncation(&fg, n).unwrap()
        - toeplitz_truncation(&f, n).unwrap() * toeplitz_truncation(&g, n).unwrap();
    let rhs = hankel_truncation(&f.clone().conj(), n).unwrap().adjoint() * hankel_truncation(&g, n).unwrap();
    // Truncation only disturbs the last few rows and columns.
    let k = n - 4;
    let diff = (lhs - rhs).view((0, 0), (k, k)).into_owned();
    assert!(max_abs(&diff) < 1e-12);
}

#[test]
fn toeplitz_of_monomial_is_a_shift() {
    let t = toeplitz_truncation(&Symbol::monomial(2), 6).unwrap();
    let want = CMatrix::from_fn(7, 7, |i, j| {
        if i == j + 2 {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    assert!(max_abs(&(t - want)) < 1e-13);
}

#[test]
fn winding_of_monomials_by_fourier_formula() {
    for n in -8..=8 {
        assert_eq!(winding_index(&Symbol::monomial(n), WindingMethod::Fourier).unwrap(), n);
    }
}

#[test]
fn rational_winding_counts_zeros_minus_poles() {
    let f = Symbol::Rational {
        scale: C64::new(1.0, 0.0),
        zeros: vec![(C64::new(0.0, 0.0), 2)],
        poles: vec![(C64::new(2.0, 0.0), 1)],
    };
    assert_eq!(winding_index(&f, WindingMethod::Rational).unwrap(), 2);
    assert_eq!(winding_index(&f, WindingMethod::Harmonic).unwrap(), 2);
    let g = Symbol::Rational {
        scale: C64::new(1.0, 0.0),
        zeros: vec![(C64::new(0.2, 0.1), 1)],
        poles: vec![(C64::new(-0.3, 0.0), 2), (C64::new(0.0, 3.0), 1)],
    };
    assert_eq!(winding_index(&g, WindingMethod::Rational).unwrap(), -1);
    assert_eq!(winding_index(&g, WindingMethod::Harmonic).unwrap(), -1);
}

#[test]
fn restricted_index_of_shifted_hardy_space() {
    let n_modes = 32;
    let trunc = HardyTruncation::l2(n_modes);
    let p_plus = trunc.riesz();
    for n in -4i64..=4 {
        let p = subspace_fh2(&Symbol::monomial(n), &trunc, &tol()).unwrap().projection();
        assert_eq!(restricted_index(&p, &p_plus, None, &tol()).unwrap().k, -n, "n = {n}");
    }
}

#[test]
fn model_space_residuals_shrink_with_truncation() {
    let zeros = vec![C64::new(0.5, 0.0), C64::new(-0.2, 0.6), C64::new(0.1, -0.7)];
    let coarse = model_space(&zeros, &HardyTruncation::h2(16), &tol()).unwrap();
    let fine = model_space(&zeros, &HardyTruncation::h2(64), &tol()).unwrap();
    assert_eq!(fine.subspace.dim(), zeros.len());
    assert!(fine.orthogonality_residual < 1e-6);
    assert!(fine.orthogonality_residual <= coarse.orthogonality_residual + 1e-12);
    assert!(fine.containment_residual < 1e-8);
}

#[test]
fn separation_of_two_points_is_pseudo_hyperbolic_distance() {
    let (a, b) = (C64::new(0.4, 0.1), C64::new(-0.3, 0.5));
    let rho = ((a - b) / (C64::new(1.0, 0.0) - b.conj() * a)).norm();
    assert!((separation_constant(&[a, b]) - rho).abs() < 1e-14);
}

#[test]
fn blaschke_range_is_orthogonal_to_szego_kernel() {
    let a = C64::new(0.3, -0.4);
    let trunc = HardyTruncation::h2(48);
    let range = subspace_fh2(&Symbol::blaschke(vec![a]), &trunc, &tol()).unwrap();
    let k = nalgebra::DVector::from_iterator(trunc.dim(), trunc.modes().map(|m| a.conj().powi(m as i32)));
    let proj = range.basis.adjoint() * &k;
    assert!(proj.norm() / k.norm() < 1e-10);
}

#[test]
fn hankel_decay_separates_continuous_and_jump_symbols() {
    let smooth = trig(&[(-3, 0.2, 0.0), (0, 1.0, 0.0), (2, 0.5, 0.5)]);
    let jump = Symbol::ArcIndicator { t0: 0.0, t1: PI };
    let levels = [16, 32, 64];
    let s = hartman_diagnostic(&smooth, &levels).unwrap();
    assert!(s.decay.compact_like);
    assert_eq!(s.singular_values[2].iter().filter(|&&x| x > 1e-10).count(), 3);
    let j = hartman_diagnostic(&jump, &levels).unwrap();
    assert!(!j.decay.compact_like);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn blaschke_products_are_unimodular(rs in prop::collection::vec((0.0f64..0.9, 0.0f64..TAU), 1..6)) {
        let zeros: Vec<C64> = rs.iter().map(|&(r, t)| disk_point(r, t)).collect();
        prop_assert!(blaschke_modulus_defect(&zeros, 1024) < 1e-12);
    }

    #[test]
    fn winding_methods_agree_and_add(
        a in prop::collection::vec((0.0f64..0.8, 0.0f64..TAU), 0..4),
        b in prop::collection::vec((0.0f64..0.8, 0.0f64..TAU), 0..4),
        shift in -3i64..=3,
    ) {
        let za: Vec<C64> = a.iter().map(|&(r, t)| disk_point(r, t)).collect();
        let zb: Vec<C64> = b.iter().map(|&(r, t)| disk_point(r, t)).collect();
        let f = Symbol::product(vec![Symbol::blaschke(za.clone()), Symbol::monomial(shift)]);
        let g = Symbol::blaschke(zb.clone());
        let wf = winding_index(&f, WindingMethod::Fourier).unwrap();
        prop_assert_eq!(wf, za.len() as i64 + shift);
        let wh = winding_index(&g, WindingMethod::Harmonic).unwrap();
        prop_assert_eq!(wh, zb.len() as i64);
        let fg = Symbol::product(vec![f.clone(), g.clone()]);
        prop_assert_eq!(winding_index(&fg, WindingMethod::Fourier).unwrap(), wf + wh);
        prop_assert_eq!(winding_index(&f.conj(), WindingMethod::Fourier).unwrap(), -wf);
    }
}
