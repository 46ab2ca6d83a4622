mod common;

use common::{c, eigs, max_abs};
use grasspair::complement::*;
use grasspair::geodesics::*;
use grasspair::pairs::*;
use grasspair::random::{random_pair, rng, structured_pair, PairShape};
use grasspair::substrate::{CMatrix, Subspace, TolerancePolicy};
use grasspair::Error;

fn tol() -> TolerancePolicy {
    TolerancePolicy::default()
}

fn line_pair(theta: f64) -> ProjectionPair {
    let s = CMatrix::from_column_slice(2, 1, &[c(1.0), c(0.0)]);
    let t = CMatrix::from_column_slice(2, 1, &[c(theta.cos()), c(theta.sin())]);
    ProjectionPair::from_subspaces(Subspace::from_orthonormal(s), Subspace::from_orthonormal(t)).unwrap()
}

#[test]
fn orthogonal_lines_have_midpoint_at_forty_five_degrees() {
    let pair = line_pair(std::f64::consts::FRAC_PI_2);
    assert!((pair.distance() - 1.0).abs() < 1e-14);
    let cert = decide_finite(&pair, &tol()).unwrap();
    let cert = cert.certificate().expect("orthogonal lines have a complement");
    let want = std::f64::consts::FRAC_PI_4.sin();
    assert!((cert.dist_ps - want).abs() < 1e-6 && (cert.dist_pt - want).abs() < 1e-6);
}

#[test]
fn line_pair_geodesic_rotates_uniformly() {
    let theta = 0.9;
    let pair = line_pair(theta);
    let samples = midpoint_distance_check(&pair, 5, &tol()).unwrap();
    for s in samples {
        assert!((s.distance - (s.t * theta).sin()).abs() < 1e-12);
        assert!(s.idempotency_residual < 1e-12);
    }
}

#[test]
fn geodesic_generator_is_codiagonal() {
    let mut r = rng(5);
    let shape = PairShape {
        d11: 1,
        d00: 2,
        d10: 2,
        d01: 2,
        angles: vec![0.3, 1.1],
    };
    let pair = structured_pair(&shape, &mut r);
    let log = geodesic_log(&pair, &tol()).unwrap();
    assert!(codiagonal_defect(&log) < 1e-10);
    assert!((log.max_angle - std::f64::consts::FRAC_PI_2).abs() < 1e-10);
    let end = geodesic_eval(&log, 1.0).unwrap();
    assert!(max_abs(&(end - &pair.q)) < 1e-9);
}

#[test]
fn unbalanced_pair_has_no_geodesic() {
    let pair = random_pair(6, 3, 2, &mut rng(1));
    assert!(matches!(
        geodesic_log(&pair, &tol()),
        Err(Error::NoGeodesic { d10: 1, d01: 0 })
    ));
}

#[test]
fn unitary_between_matches_distance_formula() {
    let mut r = rng(11);
    for _ in 0..20 {
        let pair = random_pair(6, 3, 3, &mut r);
        let ub = unitary_between(&pair, &tol()).unwrap();
        assert!((ub.deviation - ub.predicted_deviation).abs() < 1e-9);
        assert!(max_abs(&(&ub.u * &pair.p * ub.u.adjoint() - &pair.q)) < 1e-9);
    }
    assert!(matches!(
        unitary_between(&line_pair(std::f64::consts::FRAC_PI_2), &tol()),
        Err(Error::TooFar(_))
    ));
}

#[test]
fn biorthogonal_bases_pair_up() {
    let pair = random_pair(7, 3, 3, &mut rng(2));
    let b = biorthogonal_bases(&pair);
    let cross = b.xi.adjoint() * &b.psi;
    let want = CMatrix::from_fn(cross.nrows(), cross.ncols(), |i, j| {
        if i == j {
            c(b.sigma[i])
        } else {
            c(0.0)
        }
    });
    assert!(max_abs(&(cross - want)) < 1e-10);
}

#[test]
fn certificate_survives_small_perturbations() {
    let pair = random_pair(8, 4, 4, &mut rng(3));
    let frac = perturb_stability_probe(&pair, 0.05, 16, 9, &tol()).unwrap();
    assert_eq!(frac, 1.0);
    assert_eq!(frac, perturb_stability_probe(&pair, 0.05, 16, 9, &tol()).unwrap());
}

#[test]
fn rank_mismatch_reason_is_reported() {
    let pair = random_pair(5, 3, 1, &mut rng(4));
    match decide_finite(&pair, &tol()).unwrap() {
        Decision::NoComplement { reason } => assert!(reason.starts_with("rank-mismatch")),
        Decision::Certificate(_) => panic!("ranks differ"),
    }
}

#[test]
fn balance_and_difference_criteria_agree() {
    let mut r = rng(6);
    for n in 1..=9 {
        for _ in 0..10 {
            let shape = PairShape::random(n, &mut r);
            let pair = structured_pair(&shape, &mut r);
            let lt = lauzon_treil_decide(&pair, &DEFAULT_EPS_GRID, &tol()).unwrap();
            let gd = gamma_difference_criterion(&pair, &tol()).unwrap();
            assert_eq!(lt.dims_unequal, gd.dims_unequal);
            assert_eq!(gd.dims_unequal, shape.d10 != shape.d01);
            assert!(lt.consistent);
        }
    }
}

#[test]
fn delta_approximation_lifts_small_angles() {
    let shape = PairShape {
        d11: 0,
        d00: 0,
        d10: 0,
        d01: 0,
        angles: vec![0.01, 0.05, 1.0],
    };
    let pair = structured_pair(&shape, &mut rng(8));
    let eps = 0.1;
    let approx = delta_approximation(&pair, eps, &tol()).unwrap();
    let a = analyze(&approx, &tol()).unwrap();
    let want = [eps, eps, 1.0];
    for (g, w) in a.angles.iter().zip(want) {
        assert!((g - w).abs() < 1e-9);
    }
    assert!(max_abs(&(&approx.q - &pair.q)) < 2.0 * (2.0 * eps).sin());
    assert!(matches!(
        delta_approximation(&pair, 1.0, &tol()),
        Err(Error::BadParams(_))
    ));
}

#[test]
fn paired_delta_approximation_removes_trivial_parts() {
    let shape = PairShape {
        d11: 2,
        d00: 3,
        d10: 0,
        d01: 0,
        angles: vec![],
    };
    let pair = structured_pair(&shape, &mut rng(10));
    let approx = delta_approximation_paired(&pair, 0.05, &tol()).unwrap();
    let a = analyze(&approx, &tol()).unwrap();
    assert_eq!((a.d11, a.d00, a.angles.len()), (0, 1, 2));
}

#[test]
fn sum_spectrum_follows_square_root_form() {
    let pair = random_pair(6, 3, 2, &mut rng(12));
    let diff = eigs(&(&pair.p - &pair.q));
    let sum = eigs(&(&pair.p + &pair.q));
    for l in diff.iter().filter(|l| **l > 1e-6 && **l < 1.0 - 1e-6) {
        let r = (1.0 - l * l).sqrt();
        for target in [1.0 + r, 1.0 - r] {
            assert!(sum.iter().any(|x| (x - target).abs() < 1e-8));
        }
    }
    let rep = difference_product_check(&pair, &tol()).unwrap();
    assert_eq!(rep.verified_sum_form, "1 ± sqrt(1 - λ²)");
}

#[test]
fn example51_family_matches_exponential_construction() {
    for compact in [true, false] {
        let params = Example51Params::standard(8, compact, 0.3);
        let pair = example51_family(&params).unwrap();
        let (p, q) = example51_by_exponentials(&params).unwrap();
        assert!(max_abs(&(p - &pair.p)) < 1e-10);
        assert!(max_abs(&(q - &pair.q)) < 1e-10);
        let (p0, q0) = params.base_pair();
        let (mp, mq) = example51_curve(&params, 0.5).unwrap();
        assert!(max_abs(&(mp - p0)) < 1e-10 && max_abs(&(mq - q0)) < 1e-10);
    }
}

#[test]
fn index_is_additive_relative_to_reference() {
    let mut r = rng(13);
    let n = 8;
    let p_plus = random_pair(n, 4, 4, &mut r).p;
    let projs: Vec<CMatrix> = [3, 5, 4, 4].iter().map(|&k| random_pair(n, k, k, &mut r).p).collect();
    let rep = prop52_check(&projs[0], &projs[1], &projs[2], &projs[3], &p_plus, &tol()).unwrap();
    assert!(rep.additivity_ok);
    assert_eq!(rep.index_pair1, -2);
    assert_eq!(rep.predicted[1], "Delta");
}
