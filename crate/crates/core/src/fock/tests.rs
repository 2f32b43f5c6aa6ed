use super::*;
use crate::params::DetectionScheme;
use approx::assert_relative_eq;
use core::f64::consts::PI;

fn params(omega: f64, mu: f64, scheme: DetectionScheme) -> ModelParams {
    ModelParams::new(omega, mu, 0.3, 0.05, scheme).unwrap()
}

#[test]
fn ladder_matrices_literal() {
    let (a, a_dag, h) = build_operators(2, 1.0);
    let s2 = 2.0f64.sqrt();
    assert_eq!(a[(0, 1)], C64::new(1.0, 0.0));
    assert_eq!(a[(1, 2)], C64::new(s2, 0.0));
    for &(i, j) in &[(0, 0), (1, 0), (2, 0), (1, 1), (2, 1), (0, 2), (2, 2)] {
        assert_eq!(a[(i, j)], C64::new(0.0, 0.0));
    }
    assert_eq!(a_dag[(1, 0)], C64::new(1.0, 0.0));
    assert_eq!(a_dag[(2, 1)], C64::new(s2, 0.0));
    // number operator diagonal and H/hbar = omega (n + 1/2)
    let n_op = a_dag.matmul(&a);
    for k in 0..3 {
        assert!((n_op[(k, k)] - C64::new(k as f64, 0.0)).norm() < 1e-15);
        assert!((h[(k, k)] - C64::new(k as f64 + 0.5, 0.0)).norm() < 1e-15);
    }
}

#[test]
fn commutator_corner_defect() {
    let cutoff = 12;
    let (a, a_dag, _) = build_operators(cutoff, 1.0);
    let comm = a.matmul(&a_dag).sub(&a_dag.matmul(&a));
    for k in 0..cutoff {
        assert!((comm[(k, k)] - C64::new(1.0, 0.0)).norm() < 1e-14);
    }
    // the truncation corner: [a, a^dag]_{NN} = -N
    assert!((comm[(cutoff, cutoff)] - C64::new(-(cutoff as f64), 0.0)).norm() < 1e-12);
}

#[test]
fn coherent_vector_poissonian() {
    let v = coherent_vector(C64::new(1.0, 0.0), 30);
    assert!((v.norm() - 1.0).abs() < 1e-12);
    // amplitudes e^{-1/2} / sqrt(n!)
    let mut fact = 1.0;
    for n in 0..6 {
        if n > 0 {
            fact *= n as f64;
        }
        let expect = (-0.5f64).exp() / fact.sqrt();
        assert_relative_eq!(v.amplitudes()[n].re, expect, max_relative = 1e-12);
    }
    let m = posterior_moments(&v).unwrap();
    assert_relative_eq!(m.mean_x, 1.0, epsilon = 1e-12);
    assert!((m.dx - 0.5).abs() < 1e-12 && (m.dy - 0.5).abs() < 1e-12);
    // <n> = 1
    let (a, a_dag, _) = build_operators(30, 1.0);
    let n_op = a_dag.matmul(&a);
    let en = posterior_expectation(&v, &n_op).unwrap();
    assert_relative_eq!(en.re, 1.0, epsilon = 1e-12);
}

#[test]
fn squeezed_coherent_construction() {
    // xi = 0, alpha = 0 -> vacuum
    let v = build_squeezed_coherent(&SqueezeParam::vacuum(), C64::new(0.0, 0.0), 16).unwrap();
    assert!((v.amplitudes()[0] - C64::new(1.0, 0.0)).norm() < 1e-14);
    assert!((v.norm() - 1.0).abs() < 1e-12);

    // xi = 0, alpha = 1 -> coherent
    let v = build_squeezed_coherent(&SqueezeParam::vacuum(), C64::new(1.0, 0.0), 30).unwrap();
    let c = coherent_vector(C64::new(1.0, 0.0), 30);
    assert!(v.sub(&c).norm() < 1e-12);

    // squeezed vacuum rho = 0.5: <n> = sinh^2(0.5), odd amplitudes zero
    let xi = SqueezeParam::new(0.5, 0.0).unwrap();
    let v = build_squeezed_coherent(&xi, C64::new(0.0, 0.0), 40).unwrap();
    assert!((v.norm() - 1.0).abs() < 1e-10);
    let (a, a_dag, _) = build_operators(40, 1.0);
    let n_op = a_dag.matmul(&a);
    let en = posterior_expectation(&v, &n_op).unwrap();
    assert_relative_eq!(en.re, 0.2715403174076219, max_relative = 1e-10);
    for n in (1..40).step_by(2) {
        assert!(v.amplitudes()[n].norm() < 1e-15, "odd amplitude {n}");
    }
}

#[test]
fn two_constructions_agree() {
    for &(rho, theta, re, im, cutoff) in &[
        (0.3, 0.0, 0.5, 0.0, 48),
        (0.8, 1.2, 0.4, -0.3, 100),
        (1.5, -2.0, 0.2, 0.1, 230),
    ] {
        let xi = SqueezeParam::new(rho, theta).unwrap();
        let alpha = C64::new(re, im);
        let normal = build_squeezed_coherent(&xi, alpha, cutoff).unwrap();
        let via_exp = build_squeezed_coherent_expm(&xi, alpha, cutoff).unwrap();
        let diff = normal.sub(&via_exp).norm();
        assert!(diff < 1e-8, "rho={rho}: constructions differ by {diff}");
        assert!((normal.norm() - 1.0).abs() < 1e-10);
    }
}

#[test]
fn tail_gate_rejects_small_cutoff() {
    let xi = SqueezeParam::new(2.0, 0.0).unwrap();
    match build_squeezed_coherent(&xi, C64::new(0.0, 0.0), 30) {
        Err(Error::CutoffTooSmall { tail_mass, .. }) => assert!(tail_mass > 1e-10),
        other => panic!("expected CutoffTooSmall, got {other:?}"),
    }
    assert!(matches!(
        build_squeezed_coherent(&SqueezeParam::vacuum(), C64::new(0.0, 0.0), 4),
        Err(Error::InvalidParameter { .. })
    ));
}

#[test]
fn bogoliubov_identities() {
    // identity operator at xi = 0
    let dev = bogoliubov_check(&SqueezeParam::vacuum(), 24).unwrap();
    assert!(dev < 1e-12, "dev = {dev}");

    let xi = SqueezeParam::new(0.5, 0.0).unwrap();
    let dev60 = bogoliubov_check(&xi, 60).unwrap();
    assert!(dev60 < 1e-8, "dev at 60 = {dev60}");
    let dev40 = bogoliubov_check(&xi, 40).unwrap();
    assert!(dev60 <= dev40 + 1e-12, "no improvement: {dev40} -> {dev60}");

    let xi = SqueezeParam::new(0.5, 0.9).unwrap();
    let dev = bogoliubov_check(&xi, 60).unwrap();
    assert!(dev < 1e-7, "dev = {dev}");
}

#[test]
fn sde_step_vacuum_and_identity() {
    let p = params(1.0, 0.1, DetectionScheme::DoubleHeterodyne);
    let vac = FockVector::basis_state(16, 0);
    let dt = 1e-3;
    // a |0> = 0: only the zero-point phase acts
    let out = sde_step(&vac, C64::new(0.05, -0.02), dt, 0.0, &p).unwrap();
    assert!((out.amplitudes()[0] - C64::new(1.0, -0.5 * p.omega * dt)).norm() < 1e-15);
    for n in 1..=16 {
        assert_eq!(out.amplitudes()[n], C64::new(0.0, 0.0));
    }
    // dt -> 0 with dQ = 0 is the identity to O(dt)
    let psi = coherent_vector(C64::new(0.8, 0.1), 16);
    let out = sde_step(&psi, C64::new(0.0, 0.0), 1e-9, 0.5, &p).unwrap();
    assert!(out.sub(&psi).norm() < 1e-8);
}

#[test]
fn posterior_expectation_examples() {
    let (a, a_dag, _) = build_operators(20, 1.0);
    let n_op = a_dag.matmul(&a);
    let vac = FockVector::basis_state(20, 0);
    assert_eq!(posterior_expectation(&vac, &n_op).unwrap(), C64::new(0.0, 0.0));

    let x_op = a.add(&a_dag).scale(C64::new(0.5, 0.0));
    let coh = coherent_vector(C64::new(1.0, 0.0), 20);
    assert_relative_eq!(
        posterior_expectation(&coh, &x_op).unwrap().re,
        1.0,
        epsilon = 1e-10
    );

    // normalization invariance
    let scaled = coh.scale(C64::new(2.0, 0.0));
    let e1 = posterior_expectation(&coh, &n_op).unwrap();
    let e2 = posterior_expectation(&scaled, &n_op).unwrap();
    assert!((e1 - e2).norm() < 1e-13);

    let zero = FockVector::zeros(20);
    assert!(matches!(
        posterior_expectation(&zero, &n_op),
        Err(Error::ZeroNorm)
    ));
}

#[test]
fn lindblad_vacuum_stationary() {
    let p = params(1.0, 1.0, DetectionScheme::DoubleHeterodyne);
    let vac = DensityMatrix::from_pure(&FockVector::basis_state(12, 0)).unwrap();
    let out = lindblad_evolve(&vac, 1.0, 1e-3, &p).unwrap();
    let dev: f64 = out
        .matrix()
        .data()
        .iter()
        .zip(vac.matrix().data())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    assert!(dev < 1e-12, "vacuum moved by {dev}");
}

#[test]
fn lindblad_preserves_coherent() {
    // |alpha0><alpha0| stays coherent with alpha(t) = alpha0 e^{-(i omega + mu/2) t}
    let p = params(1.0, 1.0, DetectionScheme::DoubleHeterodyne);
    let alpha0 = C64::new(1.0, 0.0);
    let rho0 = DensityMatrix::from_pure(&coherent_vector(alpha0, 24)).unwrap();
    let t_end = 1.0 / p.mu;
    let rho = lindblad_evolve(&rho0, t_end, 2e-4, &p).unwrap();
    rho.validate().unwrap();
    let alpha_t = alpha0 * C64::from_polar((-0.5 * p.mu * t_end).exp(), -p.omega * t_end);
    let target = coherent_vector(alpha_t, 24);
    let fid = rho.fidelity_with_pure(&target).unwrap();
    assert!(fid >= 1.0 - 1e-6, "fidelity = {fid}");
}

#[test]
fn lindblad_degrades_squeezed_coherent() {
    // purity of an initially squeezed coherent state drops below 1 - 1e-3
    // by t = 0.5 / mu: the family is not preserved unconditionally.
    let p = params(1.0, 1.0, DetectionScheme::DoubleHeterodyne);
    let xi = SqueezeParam::new(0.5, 0.0).unwrap();
    let psi0 = build_squeezed_coherent(&xi, C64::new(0.5, 0.0), 30).unwrap();
    let rho0 = DensityMatrix::from_pure(&psi0).unwrap();
    assert!((rho0.purity() - 1.0).abs() < 1e-9);
    let rho = lindblad_evolve(&rho0, 0.5 / p.mu, 2e-4, &p).unwrap();
    let purity = rho.purity();
    assert!(purity < 1.0 - 1e-3, "purity = {purity}");
}

#[test]
fn fit_round_trips_family_members() {
    let xi = SqueezeParam::new(0.5, 0.0).unwrap();
    let alpha = C64::new(0.3, 0.1);
    let psi = build_squeezed_coherent(&xi, alpha, 40).unwrap();
    let fit = fit_squeezed_coherent(&psi).unwrap();
    assert!(fit.gaussian);
    assert!((fit.xi.rho() - 0.5).abs() < 1e-6);
    assert!((fit.xi.theta()).abs() < 1e-6);
    assert!((fit.alpha - alpha).norm() < 1e-6);
    assert!(fit.fidelity >= 1.0 - 1e-9);

    // scale invariance: the fit sees only the normalized state
    let fit2 = fit_squeezed_coherent(&psi.scale(C64::new(0.0, 3.0))).unwrap();
    assert!((fit2.alpha - alpha).norm() < 1e-6);

    let vac = FockVector::basis_state(20, 0);
    let fit = fit_squeezed_coherent(&vac).unwrap();
    assert!(fit.gaussian);
    assert_eq!(fit.xi.rho(), 0.0);
    assert!((fit.alpha).norm() < 1e-12);
    assert!((fit.fidelity - 1.0).abs() < 1e-12);
}

#[test]
fn fit_flags_fock_one() {
    // |1> is as far from the family as a coarse grid search can reach:
    // every member has overlap below 0.75.
    let mut grid_max: f64 = 0.0;
    for i in 0..=8 {
        let rho = 0.15 * i as f64;
        for j in 0..8 {
            let theta = PI / 4.0 * j as f64;
            let xi = SqueezeParam::new(rho, theta).unwrap();
            for re in -4..=4 {
                for im in -4..=4 {
                    let alpha = C64::new(0.25 * re as f64, 0.25 * im as f64);
                    // a loose tail tolerance is fine: the overlap only
                    // needs ~1e-6 accuracy against a 0.75 bound
                    let member =
                        build_squeezed_coherent_tol(&xi, alpha, 96, 1e-6).unwrap();
                    grid_max = grid_max.max(member.amplitudes()[1].norm_sqr());
                }
            }
        }
    }
    assert!(grid_max <= 0.75, "grid max = {grid_max}");

    let one = FockVector::basis_state(40, 1);
    let fit = fit_squeezed_coherent(&one).unwrap();
    assert!(!fit.gaussian, "|1> must be flagged non-Gaussian");
    assert!(fit.fidelity <= 0.75, "fidelity = {}", fit.fidelity);
}

#[test]
fn density_matrix_validate_catches_defects() {
    let psi = coherent_vector(C64::new(0.5, 0.2), 12);
    let rho = DensityMatrix::from_pure(&psi).unwrap();
    rho.validate().unwrap();

    let mut bad = rho.clone();
    bad.scale(1.1);
    assert!(bad.validate().is_err());
}

#[test]
fn assemble_record_matches_pieces() {
    let xi = SqueezeParam::new(0.4, 0.2).unwrap();
    let r = SqueezedCoherentRecord {
        l: C64::new(0.8, -0.3),
        squeeze: xi,
        alpha: C64::new(0.2, 0.5),
    };
    let v = assemble_record(&r, 40).unwrap();
    assert_relative_eq!(v.norm_sqr(), r.norm2(), max_relative = 1e-9);
}
