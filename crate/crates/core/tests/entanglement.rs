use std::f64::consts::FRAC_1_SQRT_2;

use approx::assert_abs_diff_eq;
use hes_core::entanglement::{
    entanglement_entropy, entropy_from_reduced, schmidt_coefficients, Bipartition,
};
use hes_core::fock::{adaptive_dim, even_coherent, tensor, StateVector};
use hes_core::protocols::{hes_state, parity_bell_state, spin_bell_state};
use hes_core::{Complex64, HesLabel, ParityBellLabel, SpinBellLabel};
use proptest::prelude::*;

const ZS: [f64; 4] = [0.1, 0.5, 1.0, 2.0];

fn assert_one_ebit(state: &StateVector) {
    let cut = Bipartition::first(2).unwrap();
    let spec = schmidt_coefficients(state, &cut).unwrap();
    assert_eq!(spec.rank(1e-10), 2);
    assert_abs_diff_eq!(spec.coefficients[0], FRAC_1_SQRT_2, epsilon = 1e-10);
    assert_abs_diff_eq!(spec.coefficients[1], FRAC_1_SQRT_2, epsilon = 1e-10);
    assert_abs_diff_eq!(
        entanglement_entropy(state, &cut).unwrap(),
        1.0,
        epsilon = 1e-10
    );
    assert_abs_diff_eq!(
        entropy_from_reduced(state, &cut).unwrap(),
        1.0,
        epsilon = 1e-10
    );
    assert_abs_diff_eq!(
        entanglement_entropy(state, &cut.swapped()).unwrap(),
        1.0,
        epsilon = 1e-10
    );
}

#[test]
fn hybrid_bell_states_carry_one_ebit() {
    for z in ZS {
        let dim = adaptive_dim(z).unwrap();
        for label in HesLabel::ALL {
            assert_one_ebit(&hes_state(label, z, dim).unwrap());
        }
    }
}

#[test]
fn parity_bell_states_carry_one_ebit() {
    for z in ZS {
        for zp in ZS {
            let dim = adaptive_dim(z.max(zp)).unwrap();
            for label in ParityBellLabel::ALL {
                assert_one_ebit(&parity_bell_state(label, z, zp, dim).unwrap());
            }
        }
    }
}

#[test]
fn two_qubit_bell_states_carry_one_ebit() {
    for label in SpinBellLabel::ALL {
        assert_one_ebit(&spin_bell_state(label));
    }
}

#[test]
fn product_state_has_zero_entropy() {
    let s = tensor(&StateVector::down(), &even_coherent(1.0, 18).unwrap());
    let cut = Bipartition::first(2).unwrap();
    assert!(entanglement_entropy(&s, &cut).unwrap().abs() < 1e-12);
    assert_eq!(schmidt_coefficients(&s, &cut).unwrap().rank(1e-10), 1);
}

#[test]
fn invalid_cuts_are_rejected() {
    assert!(Bipartition::new(&[], 2).is_err());
    assert!(Bipartition::new(&[0, 1], 2).is_err());
    assert!(Bipartition::new(&[0, 0], 3).is_err());
    assert!(Bipartition::new(&[3], 3).is_err());
    let s = spin_bell_state(SpinBellLabel::PsiMinus);
    assert!(entanglement_entropy(&s, &Bipartition::first(3).unwrap()).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// `cos t |↑⟩|z⟩_e + sin t |↓⟩|z⟩_o` has entropy `h(cos² t)`.
    #[test]
    fn partially_entangled_entropy_matches_binary_entropy(t in 0.0f64..1.5, z in 0.1f64..2.0) {
        let dim = adaptive_dim(z).unwrap();
        let e = hes_state(HesLabel::PhiPlus, z, dim).unwrap();
        let m = hes_state(HesLabel::PhiMinus, z, dim).unwrap();
        let (c, s) = (t.cos(), t.sin());
        // φ± = (|↑e⟩ ± |↓o⟩)/√2, so these weights isolate the two branches
        let state = StateVector::superpose(&[
            (Complex64::from((c + s) * FRAC_1_SQRT_2), &e),
            (Complex64::from((c - s) * FRAC_1_SQRT_2), &m),
        ]).unwrap();
        let p = c * c;
        let h = |x: f64| if x <= 0.0 { 0.0 } else { -x * x.log2() };
        let expected = h(p) + h(1.0 - p);
        let cut = Bipartition::first(2).unwrap();
        let a = entanglement_entropy(&state, &cut).unwrap();
        let b = entropy_from_reduced(&state, &cut).unwrap();
        prop_assert!((a - expected).abs() < 1e-9);
        prop_assert!((a - b).abs() < 1e-9);
        prop_assert!((a - entanglement_entropy(&state, &cut.swapped()).unwrap()).abs() < 1e-12);
    }
}
