//! Labels of the three Bell-type bases and the Pauli-class corrections that
//! relate them.
//!
//! Every basis is built the same way from a pair of logical codewords
//! (`|↑⟩/|↓⟩`, `|z⟩_e/|z⟩_o`): `Φ± = |00⟩ ± |11⟩`, `Ψ± = |01⟩ ± |10⟩`.
//! Writing each label as `(I ⊗ P)|Φ⁺⟩` assigns it a Pauli class `P`, and
//! the teleportation correction for an (outcome, channel) pair is the
//! product of the two classes.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::HesError;

/// Correction applied after a Bell-type measurement. On a qubit these are
/// the Pauli matrices; on a mode they are the pseudospin operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Correction {
    Identity,
    Z,
    X,
    Y,
}

impl Correction {
    /// Product in the Klein four-group (phases dropped).
    pub fn compose(self, other: Correction) -> Correction {
        use Correction::*;
        match (self, other) {
            (Identity, c) | (c, Identity) => c,
            (a, b) if a == b => Identity,
            (Z, X) | (X, Z) => Y,
            (Z, Y) | (Y, Z) => X,
            (X, Y) | (Y, X) => Z,
            _ => unreachable!(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Correction::Identity => "identity",
            Correction::Z => "z",
            Correction::X => "x",
            Correction::Y => "y",
        }
    }
}

impl fmt::Display for Correction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Which codeword pairing and relative sign a Bell-type state carries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct BellShape {
    /// `true` for `|00⟩ ± |11⟩`, `false` for `|01⟩ ± |10⟩`.
    pub same: bool,
    pub sign: f64,
}

/// Strips decoration so that `Φ⁺`, `φ̃⁺`, `phi+`, `Phi_plus` all parse.
fn normalize_label(s: &str) -> String {
    let mut out = String::new();
    for ch in s.chars() {
        match ch {
            '\u{0303}' | '~' | ' ' | '_' => {}
            'φ' | 'Φ' | 'ϕ' => out.push_str("phi"),
            'ψ' | 'Ψ' => out.push_str("psi"),
            '⁺' => out.push('+'),
            '⁻' | '−' => out.push('-'),
            c => out.extend(c.to_lowercase()),
        }
    }
    out.replace("plus", "+")
        .replace("minus", "-")
        .replace("tilde", "")
}

macro_rules! bell_label {
    ($(#[$meta:meta])* $name:ident, [$pp:expr, $pm:expr, $sp:expr, $sm:expr]) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
        #[serde(rename_all = "snake_case")]
        pub enum $name {
            PhiPlus,
            PhiMinus,
            PsiPlus,
            PsiMinus,
        }

        impl $name {
            /// Sampling and reporting order.
            pub const ALL: [$name; 4] = [
                $name::PhiPlus,
                $name::PhiMinus,
                $name::PsiPlus,
                $name::PsiMinus,
            ];

            pub fn index(self) -> usize {
                self as usize
            }

            pub fn pauli(self) -> Correction {
                match self {
                    $name::PhiPlus => Correction::Identity,
                    $name::PhiMinus => Correction::Z,
                    $name::PsiPlus => Correction::X,
                    $name::PsiMinus => Correction::Y,
                }
            }

            pub fn from_pauli(p: Correction) -> Self {
                match p {
                    Correction::Identity => $name::PhiPlus,
                    Correction::Z => $name::PhiMinus,
                    Correction::X => $name::PsiPlus,
                    Correction::Y => $name::PsiMinus,
                }
            }

            pub(crate) fn shape(self) -> BellShape {
                match self {
                    $name::PhiPlus => BellShape { same: true, sign: 1.0 },
                    $name::PhiMinus => BellShape { same: true, sign: -1.0 },
                    $name::PsiPlus => BellShape { same: false, sign: 1.0 },
                    $name::PsiMinus => BellShape { same: false, sign: -1.0 },
                }
            }

            /// Snake-case key used in machine-readable output.
            pub fn key(self) -> &'static str {
                match self {
                    $name::PhiPlus => "phi_plus",
                    $name::PhiMinus => "phi_minus",
                    $name::PsiPlus => "psi_plus",
                    $name::PsiMinus => "psi_minus",
                }
            }

            pub fn symbol(self) -> &'static str {
                [$pp, $pm, $sp, $sm][self as usize]
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.symbol())
            }
        }

        impl FromStr for $name {
            type Err = HesError;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                match normalize_label(s).as_str() {
                    "phi+" => Ok($name::PhiPlus),
                    "phi-" => Ok($name::PhiMinus),
                    "psi+" => Ok($name::PsiPlus),
                    "psi-" => Ok($name::PsiMinus),
                    _ => Err(HesError::UnknownLabel(s.to_string())),
                }
            }
        }
    };
}

bell_label!(
    /// Two-qubit Bell basis `Φ±, Ψ±`.
    SpinBellLabel,
    ["Φ⁺", "Φ⁻", "Ψ⁺", "Ψ⁻"]
);

bell_label!(
    /// Hybrid qubit–mode Bell basis `φ±(z), ψ±(z)`.
    HesLabel,
    ["φ⁺", "φ⁻", "ψ⁺", "ψ⁻"]
);

bell_label!(
    /// Two-mode parity Bell basis `φ̃±(z, z′), ψ̃±(z, z′)`.
    ParityBellLabel,
    ["φ̃⁺", "φ̃⁻", "ψ̃⁺", "ψ̃⁻"]
);

impl SpinBellLabel {
    /// Parity Bell state paired with this outcome in entanglement swapping.
    pub fn paired_parity(self) -> ParityBellLabel {
        ParityBellLabel::from_pauli(self.pauli())
    }
}
