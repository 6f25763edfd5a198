//! Non-degenerate four-wave mixing as a map between charge superpositions.
//!
//! The third-order polarization couples two pumps and a probe into a signal
//! field `E_S ∝ χ⁽³⁾ · E_P1 · E_P2 · E_P3*`. Because each azimuthal factor
//! `exp(i l φ)` multiplies — and the probe enters conjugated — the emitted
//! charge obeys
//!
//! ```text
//! l_S = l_P1 + l_P2 − l_P3
//! ```
//!
//! and the map is linear in the P2 (target) state but *antilinear* in the
//! P3 (probe/control) state. Distinct charge pairs that land on the same
//! output charge interfere coherently.
//!
//! [`fwm_transform`] returns the emitted state renormalized to a unit
//! post-selected photon, together with an event-probability weight: the raw
//! squared norm of the signal field times the configured conversion
//! efficiency.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::oamstate::{OamSuperposition, Role};

use std::collections::BTreeMap;

/// Mixing parameters: coupling, pump-1 drive and conversion efficiency.
#[derive(Debug, Clone, PartialEq)]
pub struct FwmConfig {
    chi3: Complex64,
    pump1: OamSuperposition,
    efficiency: f64,
}

impl FwmConfig {
    /// Creates a config.
    ///
    /// The pump-1 drive must occupy a single charge (it is a classical beam
    /// with one hologram-set value), `chi3` must be finite and nonzero, and
    /// the efficiency must lie in (0, 1].
    pub fn new(chi3: Complex64, pump1: OamSuperposition, efficiency: f64) -> Result<Self> {
        if !chi3.re.is_finite() || !chi3.im.is_finite() {
            return Err(Error::NonFinite { what: "chi3" });
        }
        if chi3.norm() == 0.0 {
            return Err(Error::InvalidParameter {
                what: "chi3",
                detail: "coupling must be nonzero".into(),
            });
        }
        if pump1.len() != 1 {
            return Err(Error::InvalidParameter {
                what: "pump-1 state",
                detail: format!(
                    "must occupy exactly one charge, found {:?}",
                    pump1.charges()
                ),
            });
        }
        if !efficiency.is_finite() || efficiency <= 0.0 || efficiency > 1.0 {
            return Err(Error::InvalidParameter {
                what: "efficiency",
                detail: format!("{efficiency}: must lie in (0, 1]"),
            });
        }
        Ok(Self {
            chi3,
            pump1: pump1.with_role(Role::Pump),
            efficiency,
        })
    }

    /// Unit-coupling, unit-efficiency config with a unit pump at charge `l`.
    pub fn with_pump_charge(l: i32) -> Result<Self> {
        Self::new(
            Complex64::new(1.0, 0.0),
            OamSuperposition::basis(Role::Pump, l)?,
            1.0,
        )
    }

    /// Coupling constant χ⁽³⁾.
    pub fn chi3(&self) -> Complex64 {
        self.chi3
    }

    /// The single pump-1 charge.
    pub fn pump_charge(&self) -> i32 {
        self.pump1.charges()[0]
    }

    /// Complex pump-1 amplitude.
    pub fn pump_amplitude(&self) -> Complex64 {
        self.pump1.coeff(self.pump_charge())
    }

    /// Conversion efficiency in (0, 1].
    pub fn efficiency(&self) -> f64 {
        self.efficiency
    }
}

/// Charge-conservation rule of the mixing process.
pub fn signal_l(l_p1: i32, l_p2: i32, l_p3: i32) -> i32 {
    l_p1 + l_p2 - l_p3
}

/// Raw signal field before renormalization: for every charge pair the term
/// `χ⁽³⁾ · c_P1 · c_P2 · conj(c_P3)` is accumulated at `l_P1 + l_P2 − l_P3`.
///
/// This is the form in which the map's linearity (in P2) and antilinearity
/// (in P3) hold exactly; [`fwm_transform`] renormalizes it.
pub fn fwm_signal_field(
    config: &FwmConfig,
    p2: &OamSuperposition,
    p3: &OamSuperposition,
) -> Result<BTreeMap<i32, Complex64>> {
    let l1 = config.pump_charge();
    let drive = config.chi3 * config.pump_amplitude();
    let mut raw: BTreeMap<i32, Complex64> = BTreeMap::new();
    for (l2, c2) in p2.iter() {
        for (l3, c3) in p3.iter() {
            let l = signal_l(l1, l2, l3);
            *raw.entry(l).or_insert(Complex64::new(0.0, 0.0)) += drive * c2 * c3.conj();
        }
    }
    Ok(raw)
}

/// Result of one mixing event.
#[derive(Debug, Clone, PartialEq)]
pub struct FwmOutcome {
    /// Emitted signal state, renormalized to a unit post-selected photon.
    pub state: OamSuperposition,
    /// Event-probability weight: raw squared norm of the signal field times
    /// the conversion efficiency.
    pub weight: f64,
}

/// Renormalizes a raw signal map into a unit state, returning the state and
/// the raw squared norm. Shared by [`fwm_transform`] and the gate applier.
pub(crate) fn normalize_signal(
    raw: BTreeMap<i32, Complex64>,
) -> Result<(OamSuperposition, f64)> {
    let raw_norm_sqr: f64 = raw.values().map(|c| c.norm_sqr()).sum();
    let pairs: Vec<_> = raw.into_iter().collect();
    let state = OamSuperposition::from_coeffs(Role::Signal, &pairs)
        .map_err(|e| match e {
            Error::EmptyState => Error::ZeroNorm,
            other => other,
        })?
        .normalized()?;
    Ok((state, raw_norm_sqr))
}

/// Applies the mixing process to target (P2) and probe (P3) states.
///
/// With normalized basis-state inputs and unit coupling the emitted state is
/// a unit-modulus basis state and the weight equals the efficiency. Complete
/// destructive interference of the signal field is an error — no photon is
/// emitted to post-select on.
pub fn fwm_transform(
    config: &FwmConfig,
    p2: &OamSuperposition,
    p3: &OamSuperposition,
) -> Result<FwmOutcome> {
    let raw = fwm_signal_field(config, p2, p3)?;
    let (state, raw_norm_sqr) = normalize_signal(raw)?;
    Ok(FwmOutcome {
        state,
        weight: raw_norm_sqr * config.efficiency(),
    })
}
