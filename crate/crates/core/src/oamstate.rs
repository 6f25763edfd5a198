//! Charge-basis superpositions and the logical qubit layer on top of them.
//!
//! A beam's transverse state is a finite superposition `Σ_l c_l |l⟩` over
//! topological charges. The logical encoding follows the gate convention:
//! charge 0 is `|0⟩`; for the control qubit `|1⟩` is charge +1, while for
//! target and signal beams `|1⟩` may be represented by +1 or −1 depending on
//! the gate's hologram arrangement (both decode to logical 1). The ±1 → 1
//! "fold" is where that sign ambiguity is collapsed, and the logical
//! Hadamard acts after the fold.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lgmode::MAX_CHARGE;

use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;

/// Coefficients with modulus below this are dropped when states are built or
/// transformed.
pub const PRUNE_TOL: f64 = 1e-15;

/// Tolerance used by the logical fold to decide whether a ±1 component is
/// genuinely occupied.
const FOLD_TOL: f64 = 1e-12;

/// Which physical beam a state describes. Pump beams carry no logical
/// encoding; the other roles do.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    /// Probe beam P3: the control qubit.
    Control,
    /// Pump beam P2: the target qubit.
    Target,
    /// Emitted signal beam S: the transformed target qubit.
    Signal,
    /// Pump beam P1: classical drive, no logical meaning.
    Pump,
}

/// Maps logical bits to physical charges.
///
/// The control-qubit `|1⟩` is always charge +1; the target-side `|1⟩`
/// representative is ±1 depending on the gate's wiring.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LogicalConvention {
    target_one_l: i32,
}

impl LogicalConvention {
    /// Creates a convention; the target `|1⟩` representative must be ±1.
    pub fn new(target_one_l: i32) -> Result<Self> {
        if target_one_l != 1 && target_one_l != -1 {
            return Err(Error::InvalidParameter {
                what: "target |1> representative",
                detail: format!("{target_one_l}: must be +1 or -1"),
            });
        }
        Ok(Self { target_one_l })
    }

    /// Convention with the target `|1⟩` at charge +1.
    pub fn target_plus() -> Self {
        Self { target_one_l: 1 }
    }

    /// Convention with the target `|1⟩` at charge −1.
    pub fn target_minus() -> Self {
        Self { target_one_l: -1 }
    }

    /// The target-side `|1⟩` charge.
    pub fn target_one_l(&self) -> i32 {
        self.target_one_l
    }

    /// Physical charge representing logical `|1⟩` for a given beam role.
    pub fn one_charge(&self, role: Role) -> Result<i32> {
        match role {
            Role::Control => Ok(1),
            Role::Target | Role::Signal => Ok(self.target_one_l),
            Role::Pump => Err(Error::InvalidParameter {
                what: "role",
                detail: "pump beams carry no logical encoding".into(),
            }),
        }
    }
}

impl Default for LogicalConvention {
    fn default() -> Self {
        Self::target_plus()
    }
}

/// A finite superposition over topological charges, tagged with the beam
/// role it describes.
///
/// Charges are held in a sorted map so iteration order — and everything
/// derived from it — is deterministic. All charges satisfy |l| ≤ 8 and
/// coefficients are finite and non-negligible by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct OamSuperposition {
    role: Role,
    coeffs: BTreeMap<i32, Complex64>,
}

impl OamSuperposition {
    /// A single basis charge with unit amplitude.
    pub fn basis(role: Role, l: i32) -> Result<Self> {
        Self::from_coeffs(role, &[(l, Complex64::new(1.0, 0.0))])
    }

    /// Builds a state from `(charge, amplitude)` pairs.
    ///
    /// Repeated charges accumulate. Amplitudes with modulus below
    /// [`PRUNE_TOL`] are dropped; a state that ends up empty is rejected, as
    /// is any charge beyond |l| ≤ 8 or a non-finite amplitude. The state is
    /// *not* normalized — call [`OamSuperposition::normalized`] when unit
    /// norm is required.
    pub fn from_coeffs(role: Role, pairs: &[(i32, Complex64)]) -> Result<Self> {
        let mut coeffs: BTreeMap<i32, Complex64> = BTreeMap::new();
        for &(l, c) in pairs {
            if l.abs() > MAX_CHARGE {
                return Err(Error::ChargeOutOfRange { l });
            }
            if !c.re.is_finite() || !c.im.is_finite() {
                return Err(Error::NonFinite {
                    what: "state amplitude",
                });
            }
            *coeffs.entry(l).or_insert(Complex64::new(0.0, 0.0)) += c;
        }
        coeffs.retain(|_, c| c.norm() >= PRUNE_TOL);
        if coeffs.is_empty() {
            return Err(Error::EmptyState);
        }
        Ok(Self { role, coeffs })
    }

    /// The beam role this state is tagged with.
    pub fn role(&self) -> Role {
        self.role
    }

    /// Same coefficients, different role tag.
    pub fn with_role(mut self, role: Role) -> Self {
        self.role = role;
        self
    }

    /// Number of occupied charges.
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    /// True when no charge is occupied (cannot happen for constructed
    /// states; exists for completeness of the container API).
    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Occupied charges, ascending.
    pub fn charges(&self) -> Vec<i32> {
        self.coeffs.keys().copied().collect()
    }

    /// Amplitude at a charge (zero when absent).
    pub fn coeff(&self, l: i32) -> Complex64 {
        self.coeffs.get(&l).copied().unwrap_or(Complex64::new(0.0, 0.0))
    }

    /// Iterates `(charge, amplitude)` in ascending charge order.
    pub fn iter(&self) -> impl Iterator<Item = (i32, Complex64)> + '_ {
        self.coeffs.iter().map(|(&l, &c)| (l, c))
    }

    /// Total squared norm `Σ |c_l|²`.
    pub fn norm_sqr(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm_sqr()).sum()
    }

    /// Returns the state scaled to unit norm; a zero-norm state is an error.
    pub fn normalized(mut self) -> Result<Self> {
        let norm = self.norm_sqr().sqrt();
        if !norm.is_finite() || norm < PRUNE_TOL {
            return Err(Error::ZeroNorm);
        }
        for c in self.coeffs.values_mut() {
            *c /= norm;
        }
        Ok(self)
    }

    /// Returns the state with every amplitude multiplied by `k`.
    pub fn scaled(&self, k: Complex64) -> Result<Self> {
        let pairs: Vec<_> = self.iter().map(|(l, c)| (l, c * k)).collect();
        Self::from_coeffs(self.role, &pairs)
    }
}

/// Encodes a classical bit as a physical charge for the given beam role.
pub fn encode_logical(bit: u8, role: Role, convention: &LogicalConvention) -> Result<OamSuperposition> {
    // Reject non-logical roles even for bit 0, where the charge would not
    // depend on the convention: a pump carries no logical value.
    let one = convention.one_charge(role)?;
    let l = match bit {
        0 => 0,
        1 => one,
        _ => {
            return Err(Error::InvalidParameter {
                what: "logical bit",
                detail: format!("{bit}: must be 0 or 1"),
            })
        }
    };
    OamSuperposition::basis(role, l)
}

/// Decodes a physical charge to a logical bit: 0 → 0, ±1 → 1, otherwise the
/// charge has left the computational alphabet.
pub fn decode_l(l: i32) -> Result<u8> {
    match l {
        0 => Ok(0),
        1 | -1 => Ok(1),
        _ => Err(Error::OutOfAlphabet { l }),
    }
}

/// Folds a state onto logical amplitudes `(a_0, a_1)`.
///
/// Charge 0 feeds `a_0`; the single occupied ±1 representative feeds `a_1`.
/// A state with weight in *both* +1 and −1 has no well-defined fold and is
/// rejected, as is any charge outside the alphabet.
pub fn logical_amplitudes(state: &OamSuperposition) -> Result<(Complex64, Complex64)> {
    for l in state.charges() {
        if l.abs() > 1 {
            return Err(Error::OutOfAlphabet { l });
        }
    }
    let plus = state.coeff(1);
    let minus = state.coeff(-1);
    if plus.norm() > FOLD_TOL && minus.norm() > FOLD_TOL {
        return Err(Error::AmbiguousFold);
    }
    Ok((state.coeff(0), plus + minus))
}

/// Logical Hadamard: acts on the folded amplitudes and re-encodes the `|1⟩`
/// component at the convention's representative for the state's role.
///
/// `H|0⟩ = (|0⟩+|1⟩)/√2`, `H|1⟩ = (|0⟩−|1⟩)/√2`; applying it twice returns
/// the original state.
pub fn hadamard(state: &OamSuperposition, convention: &LogicalConvention) -> Result<OamSuperposition> {
    let (a0, a1) = logical_amplitudes(state)?;
    let one = convention.one_charge(state.role())?;
    let b0 = (a0 + a1) * FRAC_1_SQRT_2;
    let b1 = (a0 - a1) * FRAC_1_SQRT_2;
    OamSuperposition::from_coeffs(state.role(), &[(0, b0), (one, b1)])
}

/// Squared overlap `|⟨a|b⟩|²` of two charge-basis states.
///
/// Global phases drop out; the result is clamped to [0, 1] against rounding.
pub fn fidelity(a: &OamSuperposition, b: &OamSuperposition) -> f64 {
    let mut inner = Complex64::new(0.0, 0.0);
    for (l, ca) in a.iter() {
        inner += ca.conj() * b.coeff(l);
    }
    inner.norm_sqr().clamp(0.0, 1.0)
}
