// reference values are kept at the precision they were computed to
#![allow(clippy::excessive_precision)]

use approx::assert_abs_diff_eq;
use hes_core::fock::{
    self, even_coherent, inner, mode_dim_for, odd_coherent, partial_trace, tensor, DensityMatrix,
    StateVector,
};
use hes_core::protocols::spin_bell_state;
use hes_core::{Complex64, SpinBellLabel};
use proptest::prelude::*;

/// Poisson tail by plain linear-domain summation of `e^{-μ} μ^n / n!`,
/// summed forward from `n = dim` rather than as `1 − head`.
fn poisson_tail_oracle(z: f64, dim: usize) -> f64 {
    let mu = z * z;
    let mut p = (-mu).exp();
    for k in 1..=dim {
        p *= mu / k as f64;
    }
    let mut tail = 0.0;
    for n in dim..dim + 2000 {
        tail += p;
        p *= mu / (n + 1) as f64;
    }
    tail
}

fn brute_mode_dim(z: f64, tol: f64) -> usize {
    let mut d = 4;
    while poisson_tail_oracle(z, d) >= tol {
        d += 2;
    }
    d
}

#[test]
fn mode_dim_matches_brute_force_tail() {
    // frozen from the oracle above and a 40-digit cross-check
    assert_eq!(brute_mode_dim(1.0, 1e-12), 16);
    assert_eq!(mode_dim_for(1.0, 1e-12).unwrap(), 16);
    assert_eq!(mode_dim_for(3.0, 1e-12).unwrap(), 38);
    for (z, d) in [
        (0.1, 6),
        (0.5, 12),
        (1.0, 18),
        (2.0, 28),
        (3.0, 42),
        (5.0, 74),
    ] {
        assert_eq!(mode_dim_for(z, 1e-14).unwrap(), d, "z = {z}");
        assert_eq!(brute_mode_dim(z, 1e-14), d, "oracle z = {z}");
    }
}

#[test]
fn mode_dim_is_minimal() {
    for z in [0.3, 1.0, 1.7, 2.5] {
        let d = mode_dim_for(z, 1e-12).unwrap();
        assert!(poisson_tail_oracle(z, d) < 1e-12);
        if d > 4 {
            assert!(poisson_tail_oracle(z, d - 2) >= 1e-12);
        }
    }
}

#[test]
fn cat_vacuum_amplitudes_match_closed_form() {
    let dim = mode_dim_for(1.0, 1e-14).unwrap();
    let e = even_coherent(1.0, dim).unwrap();
    let o = odd_coherent(1.0, dim).unwrap();
    // (cosh 1)^{-1/2}, (sinh 1)^{-1/2}
    assert_abs_diff_eq!(e.amps()[0].re, 0.805_018_182_194_592_05, epsilon = 1e-14);
    assert_abs_diff_eq!(o.amps()[1].re, 0.922_452_236_291_571_65, epsilon = 1e-14);
    assert_abs_diff_eq!(e.amps()[0].re, 1.0f64.cosh().powf(-0.5), epsilon = 1e-14);
    assert_abs_diff_eq!(o.amps()[1].re, 1.0f64.sinh().powf(-0.5), epsilon = 1e-14);
}

#[test]
fn cat_amplitudes_match_direct_series() {
    let z: f64 = 1.3;
    let dim = mode_dim_for(z, 1e-14).unwrap();
    let e = even_coherent(z, dim).unwrap();
    let o = odd_coherent(z, dim).unwrap();
    let mut fact = 1.0f64;
    for n in 0..dim {
        if n > 0 {
            fact *= n as f64;
        }
        let raw = z.powi(n as i32) / fact.sqrt();
        if n % 2 == 0 {
            assert_abs_diff_eq!(e.amps()[n].re, raw / (z * z).cosh().sqrt(), epsilon = 1e-13);
            assert_eq!(o.amps()[n].norm(), 0.0);
        } else {
            assert_abs_diff_eq!(o.amps()[n].re, raw / (z * z).sinh().sqrt(), epsilon = 1e-13);
            assert_eq!(e.amps()[n].norm(), 0.0);
        }
    }
    assert!(e.truncation_residual() < 1e-12);
}

#[test]
fn bell_state_reduces_to_maximally_mixed() {
    let phi = spin_bell_state(SpinBellLabel::PhiPlus);
    for keep in [0, 1] {
        let rho = partial_trace(&phi, &[keep]).unwrap();
        let half = DensityMatrix::new(
            rho.space().clone(),
            nalgebra::DMatrix::from_diagonal_element(2, 2, Complex64::from(0.5)),
        )
        .unwrap();
        assert!(rho.max_abs_diff(&half).unwrap() < 1e-15);
    }
}

#[test]
fn partial_trace_keeps_space_order() {
    let s = tensor(
        &tensor(&StateVector::up(), &StateVector::fock(4, 3).unwrap()),
        &StateVector::down(),
    );
    let rho = partial_trace(&s, &[2, 0]).unwrap();
    assert_eq!(rho.space().to_string(), "qubit ⊗ qubit");
    // |↑↓⟩ has flat index 1
    assert_abs_diff_eq!(rho.matrix()[(1, 1)].re, 1.0, epsilon = 1e-15);
}

fn arb_z() -> impl Strategy<Value = f64> {
    0.0f64..2.5
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cats_are_normalized_and_orthogonal(z in arb_z()) {
        let dim = fock::adaptive_dim(z).unwrap();
        let e = even_coherent(z, dim).unwrap();
        let o = odd_coherent(z, dim).unwrap();
        prop_assert!((e.norm() - 1.0).abs() < 1e-12);
        prop_assert!((o.norm() - 1.0).abs() < 1e-12);
        prop_assert!((inner(&e, &e).unwrap().re - 1.0).abs() < 1e-12);
        prop_assert!(inner(&e, &o).unwrap().norm() < 1e-14);
    }

    #[test]
    fn product_roundtrip_through_partial_trace(
        z in arb_z(),
        a in -1.0f64..1.0, b in -1.0f64..1.0, c in -1.0f64..1.0, d in -1.0f64..1.0,
    ) {
        prop_assume!(a * a + b * b + c * c + d * d > 1e-3);
        let q = StateVector::new(
            hes_core::SpaceDescriptor::qubit(),
            nalgebra::DVector::from_vec(vec![Complex64::new(a, b), Complex64::new(c, d)]),
        ).unwrap();
        let dim = fock::adaptive_dim(z).unwrap();
        let m = StateVector::superpose(&[
            (Complex64::new(0.6, 0.0), &even_coherent(z, dim).unwrap()),
            (Complex64::new(0.0, 0.8), &odd_coherent(z, dim).unwrap()),
        ]).unwrap();
        let joint = tensor(&q, &m);
        prop_assert!((joint.norm() - 1.0).abs() < 1e-12);

        let rho_q = partial_trace(&joint, &[0]).unwrap();
        prop_assert!(rho_q.max_abs_diff(&DensityMatrix::pure(&q)).unwrap() < 1e-10);
        prop_assert!((rho_q.trace() - 1.0).abs() < 1e-12);
        let rho_m = partial_trace(&joint, &[1]).unwrap();
        prop_assert!((rho_m.trace() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn inner_is_conjugate_symmetric(z1 in arb_z(), z2 in arb_z()) {
        let dim = 40;
        let a = StateVector::superpose(&[
            (Complex64::new(0.3, 0.4), &even_coherent(z1, dim).unwrap()),
            (Complex64::new(0.5, -0.2), &odd_coherent(z1, dim).unwrap()),
        ]).unwrap();
        let b = StateVector::superpose(&[
            (Complex64::new(0.1, 0.0), &even_coherent(z2, dim).unwrap()),
            (Complex64::new(0.0, 0.9), &odd_coherent(z2, dim).unwrap()),
        ]).unwrap();
        let ab = inner(&a, &b).unwrap();
        let ba = inner(&b, &a).unwrap();
        prop_assert!((ab - ba.conj()).norm() < 1e-15);
    }
}
