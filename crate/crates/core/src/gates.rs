//! Gate constructions: the optical wiring that turns the mixing process into
//! two-qubit logic.
//!
//! A gate is a wiring plan ([`GateSetup`]): a pump-charge policy, ordered
//! element chains on each arm, routing tags for every beam, and the logical
//! convention callers encode with. Holograms shift charge, mirrors negate
//! it, and the remaining elements act only on polarization or frequency
//! tags. Combined with the emission rule `l_S = l_P1 + l_P2 − l_P3`, four
//! wirings realize the four one-bit functions (signal laws written in
//! mixer-side charges):
//!
//! | gate   | pump        | probe arm      | target arm | signal law             |
//! |--------|-------------|----------------|------------|------------------------|
//! | I      | probe + 0   | —              | —          | `l_S = l_P2`           |
//! | NOT    | probe − 1   | —              | —          | `l_S = l_P2 − 1`       |
//! | CNOT   | fixed 0     | hologram −1, mirror | hologram +1 | `l_S = l_P2 − l_P3` |
//! | Z-CNOT | fixed +1    | —              | mirror     | `l_S = l_P2 − l_P3 + 1`|
//!
//! [`apply_gate`] runs the chains, resolves the pump, performs the mixing
//! and checks the emitted charge stays decodable; [`truth_table`] enumerates
//! the four logical basis inputs; [`validate_setup`] audits polarization and
//! frequency routing plus charge bookkeeping, reporting violations instead
//! of failing.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fwm::{fwm_signal_field, normalize_signal, signal_l, FwmConfig};
use crate::lgmode::MAX_CHARGE;
use crate::oamstate::{
    encode_logical, logical_amplitudes, LogicalConvention, OamSuperposition, Role,
};

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

/// Linear polarization of a beam.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarization {
    /// Horizontal.
    H,
    /// Vertical.
    V,
}

impl Polarization {
    /// The orthogonal polarization.
    pub fn orthogonal(self) -> Self {
        match self {
            Polarization::H => Polarization::V,
            Polarization::V => Polarization::H,
        }
    }
}

impl fmt::Display for Polarization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Polarization::H => write!(f, "H"),
            Polarization::V => write!(f, "V"),
        }
    }
}

/// Routing tag of a beam: polarization plus an abstract frequency channel.
///
/// Channels are relative labels — two beams interact degenerately exactly
/// when their channels coincide. Frequency-shifting elements add to the
/// channel index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BeamTag {
    /// Linear polarization.
    pub polarization: Polarization,
    /// Relative frequency-channel index.
    pub frequency_channel: i32,
}

impl BeamTag {
    /// Convenience constructor.
    pub fn new(polarization: Polarization, frequency_channel: i32) -> Self {
        Self {
            polarization,
            frequency_channel,
        }
    }
}

/// Optical arm an element is mounted on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Arm {
    /// The first pump beam (classical drive).
    Pump1,
    /// The target-qubit beam (second pump, P2).
    Target,
    /// The probe beam carrying the control qubit (P3).
    Probe,
}

impl fmt::Display for Arm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Arm::Pump1 => write!(f, "pump-1"),
            Arm::Target => write!(f, "target"),
            Arm::Probe => write!(f, "probe"),
        }
    }
}

/// What an optical element does to the beam passing through it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElementKind {
    /// Hologram adding `shift` to every charge.
    Cgh {
        /// Charge added to every component.
        shift: i32,
    },
    /// Mirror reflection: negates every charge.
    Mirror,
    /// Beam splitter: routing only, no charge or tag action here.
    BeamSplitter,
    /// Polarizing beam splitter: routing by polarization, no state action.
    PolarizingBeamSplitter,
    /// Half-wave plate: flips the polarization tag.
    HalfWavePlate,
    /// Acousto-optic modulator: shifts the frequency channel.
    Aom {
        /// Channels added to the beam's frequency index.
        channel_shift: i32,
    },
}

/// Maximum hologram charge step available on the bench.
pub const MAX_CGH_SHIFT: i32 = 2;

/// One element mounted on a specific arm.
///
/// Constructors validate physical limits (hologram shifts are at most
/// [`MAX_CGH_SHIFT`] in magnitude); the arm records where the element
/// belongs so [`validate_setup`] can flag chains assembled from the wrong
/// bench position.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OpticalElement {
    kind: ElementKind,
    arm: Arm,
}

impl OpticalElement {
    /// Hologram with the given charge shift.
    ///
    /// # Errors
    ///
    /// Rejects `|shift| > MAX_CGH_SHIFT`.
    pub fn cgh(arm: Arm, shift: i32) -> Result<Self> {
        if shift.abs() > MAX_CGH_SHIFT {
            return Err(Error::InvalidParameter {
                what: "hologram shift",
                detail: format!("{shift}: available holograms span ±{MAX_CGH_SHIFT}"),
            });
        }
        Ok(Self {
            kind: ElementKind::Cgh { shift },
            arm,
        })
    }

    /// Charge-negating mirror.
    pub fn mirror(arm: Arm) -> Self {
        Self {
            kind: ElementKind::Mirror,
            arm,
        }
    }

    /// Non-polarizing beam splitter (routing only).
    pub fn beam_splitter(arm: Arm) -> Self {
        Self {
            kind: ElementKind::BeamSplitter,
            arm,
        }
    }

    /// Polarizing beam splitter (routing only).
    pub fn polarizing_bs(arm: Arm) -> Self {
        Self {
            kind: ElementKind::PolarizingBeamSplitter,
            arm,
        }
    }

    /// Half-wave plate flipping the polarization tag.
    pub fn half_wave_plate(arm: Arm) -> Self {
        Self {
            kind: ElementKind::HalfWavePlate,
            arm,
        }
    }

    /// Frequency shifter adding `channel_shift` channels.
    pub fn aom(arm: Arm, channel_shift: i32) -> Self {
        Self {
            kind: ElementKind::Aom { channel_shift },
            arm,
        }
    }

    /// The element's action.
    pub fn kind(&self) -> ElementKind {
        self.kind
    }

    /// The arm this element is mounted on.
    pub fn arm(&self) -> Arm {
        self.arm
    }
}

/// Applies one element to a charge superposition.
///
/// Holograms shift every charge, mirrors negate every charge; all other
/// kinds leave the state untouched (they act on routing tags, handled by
/// [`tag_after_chain`]).
///
/// # Errors
///
/// A shifted charge leaving the sanity band `|l| ≤ 8` is reported as
/// out-of-range.
pub fn element_apply(
    element: &OpticalElement,
    state: &OamSuperposition,
) -> Result<OamSuperposition> {
    match element.kind {
        ElementKind::Cgh { shift } => {
            let pairs: Vec<_> = state.iter().map(|(l, c)| (l + shift, c)).collect();
            OamSuperposition::from_coeffs(state.role(), &pairs)
        }
        ElementKind::Mirror => {
            let pairs: Vec<_> = state.iter().map(|(l, c)| (-l, c)).collect();
            OamSuperposition::from_coeffs(state.role(), &pairs)
        }
        _ => Ok(state.clone()),
    }
}

/// Runs a state through an element chain in order.
pub fn chain_apply(chain: &[OpticalElement], state: &OamSuperposition) -> Result<OamSuperposition> {
    let mut current = state.clone();
    for element in chain {
        current = element_apply(element, &current)?;
    }
    Ok(current)
}

/// Tracks a single charge through a chain (same bookkeeping as
/// [`chain_apply`], without building states).
fn charge_through(chain: &[OpticalElement], l: i32) -> Result<i32> {
    let mut current = l;
    for element in chain {
        current = match element.kind {
            ElementKind::Cgh { shift } => current + shift,
            ElementKind::Mirror => -current,
            _ => current,
        };
        if current.abs() > MAX_CHARGE {
            return Err(Error::ChargeOutOfRange { l: current });
        }
    }
    Ok(current)
}

/// Routing tag after a chain: half-wave plates flip polarization, frequency
/// shifters move the channel; charge elements leave tags alone.
pub fn tag_after_chain(chain: &[OpticalElement], tag: BeamTag) -> BeamTag {
    let mut current = tag;
    for element in chain {
        match element.kind {
            ElementKind::HalfWavePlate => {
                current.polarization = current.polarization.orthogonal();
            }
            ElementKind::Aom { channel_shift } => {
                current.frequency_channel += channel_shift;
            }
            _ => {}
        }
    }
    current
}

/// How the pump-1 charge is chosen for a mixing event.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PumpPolicy {
    /// Pump hologram set once to a fixed charge.
    Fixed(i32),
    /// Pump charge tracks the probe's mixer-side charge plus an offset
    /// (pump and probe prepared from the same source).
    FollowsProbe {
        /// Charge added to the probe's mixer-side charge.
        offset: i32,
    },
}

impl PumpPolicy {
    /// Pump charge for a probe arriving at the mixer with charge
    /// `probe_mixer_l`.
    pub fn resolve(&self, probe_mixer_l: i32) -> i32 {
        match *self {
            PumpPolicy::Fixed(l) => l,
            PumpPolicy::FollowsProbe { offset } => probe_mixer_l + offset,
        }
    }
}

/// The four one-bit logic functions realized by the wirings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GateKind {
    /// Identity: target unchanged.
    I,
    /// Bit flip: target inverted regardless of control.
    Not,
    /// Controlled NOT: target flips when the control is 1.
    Cnot,
    /// Zero-controlled NOT: target flips when the control is 0.
    ZCnot,
}

impl GateKind {
    /// All four kinds, in truth-table order.
    pub fn all() -> [GateKind; 4] {
        [GateKind::I, GateKind::Not, GateKind::Cnot, GateKind::ZCnot]
    }

    /// Canonical display name.
    pub fn name(&self) -> &'static str {
        match self {
            GateKind::I => "I",
            GateKind::Not => "NOT",
            GateKind::Cnot => "CNOT",
            GateKind::ZCnot => "Z-CNOT",
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GateKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let folded: String = s
            .chars()
            .filter(|c| !matches!(c, '-' | '_' | ' '))
            .collect::<String>()
            .to_ascii_lowercase();
        match folded.as_str() {
            "i" | "identity" => Ok(GateKind::I),
            "not" => Ok(GateKind::Not),
            "cnot" => Ok(GateKind::Cnot),
            "zcnot" => Ok(GateKind::ZCnot),
            _ => Err(Error::InvalidParameter {
                what: "gate name",
                detail: format!("{s:?}: expected I, NOT, CNOT or Z-CNOT"),
            }),
        }
    }
}

/// Complete wiring plan for one gate.
///
/// Fields are public: a setup is a description of bench wiring, not an
/// invariant-carrying value, and [`validate_setup`] exists precisely to
/// audit arbitrary (including deliberately broken) configurations.
#[derive(Debug, Clone, PartialEq)]
pub struct GateSetup {
    /// Which logic function this wiring is meant to realize.
    pub kind: GateKind,
    /// How the pump-1 charge is chosen.
    pub pump_policy: PumpPolicy,
    /// Elements on the pump-1 arm (tag actions only for the canonical
    /// gates — this is where the frequency shifter sits when pump and probe
    /// share a source).
    pub p1_chain: Vec<OpticalElement>,
    /// Elements the target passes through before the mixer.
    pub p2_chain: Vec<OpticalElement>,
    /// Elements the probe passes through before the mixer.
    pub p3_chain: Vec<OpticalElement>,
    /// Encoding convention for the target qubit (the control always encodes
    /// 1 at charge +1).
    pub target_convention: LogicalConvention,
    /// Routing tag of the pump-1 beam at the source.
    pub p1_tag: BeamTag,
    /// Routing tag of the target beam at the source.
    pub p2_tag: BeamTag,
    /// Routing tag of the probe beam at the source.
    pub p3_tag: BeamTag,
}

impl GateSetup {
    /// Charge carrying logical target 1 at the mixer, i.e. the encoding
    /// charge pushed through the target arm's chain. A mirror on that arm
    /// flips the sign (encode at +1, mix at −1); a hologram shifts the whole
    /// alphabet.
    ///
    /// # Errors
    ///
    /// Propagates chain bookkeeping errors (charge leaving `|l| ≤ 8`).
    pub fn target_one_at_mixer(&self) -> Result<i32> {
        charge_through(&self.p2_chain, self.target_convention.one_charge(Role::Target)?)
    }

    /// Derived routing tag of the emitted signal: polarization orthogonal to
    /// the probe beam as wired (phase matching separates them on the output
    /// splitter), frequency channel from energy conservation over the
    /// effective channels, `ch_S = ch_P1 + ch_P2 − ch_P3`.
    pub fn signal_tag(&self) -> BeamTag {
        let p1 = tag_after_chain(&self.p1_chain, self.p1_tag);
        let p2 = tag_after_chain(&self.p2_chain, self.p2_tag);
        let p3 = tag_after_chain(&self.p3_chain, self.p3_tag);
        BeamTag {
            polarization: self.p3_tag.polarization.orthogonal(),
            frequency_channel: p1.frequency_channel + p2.frequency_channel
                - p3.frequency_channel,
        }
    }
}

/// Canonical wiring for each gate kind.
///
/// The I and NOT gates derive pump and probe from one source (same tag),
/// made non-degenerate by a frequency shifter on the pump arm, and use a
/// pump hologram slaved to the probe charge. CNOT and Z-CNOT pin the pump
/// charge and move the logic into probe/target chains.
pub fn build_gate(kind: GateKind) -> GateSetup {
    let shared_source = |policy: PumpPolicy, kind: GateKind| GateSetup {
        kind,
        pump_policy: policy,
        p1_chain: vec![OpticalElement::aom(Arm::Pump1, 1)],
        p2_chain: Vec::new(),
        p3_chain: Vec::new(),
        target_convention: LogicalConvention::target_plus(),
        p1_tag: BeamTag::new(Polarization::V, 0),
        p2_tag: BeamTag::new(Polarization::H, 2),
        p3_tag: BeamTag::new(Polarization::V, 0),
    };
    match kind {
        GateKind::I => shared_source(PumpPolicy::FollowsProbe { offset: 0 }, kind),
        GateKind::Not => shared_source(PumpPolicy::FollowsProbe { offset: -1 }, kind),
        GateKind::Cnot => GateSetup {
            kind,
            pump_policy: PumpPolicy::Fixed(0),
            p1_chain: Vec::new(),
            p2_chain: vec![OpticalElement::cgh(Arm::Target, 1).expect("shift within range")],
            p3_chain: vec![
                OpticalElement::cgh(Arm::Probe, -1).expect("shift within range"),
                OpticalElement::mirror(Arm::Probe),
            ],
            target_convention: LogicalConvention::target_minus(),
            p1_tag: BeamTag::new(Polarization::H, 1),
            p2_tag: BeamTag::new(Polarization::V, 2),
            p3_tag: BeamTag::new(Polarization::H, 0),
        },
        GateKind::ZCnot => GateSetup {
            kind,
            pump_policy: PumpPolicy::Fixed(1),
            p1_chain: Vec::new(),
            p2_chain: vec![OpticalElement::mirror(Arm::Target)],
            p3_chain: Vec::new(),
            target_convention: LogicalConvention::target_plus(),
            p1_tag: BeamTag::new(Polarization::H, 1),
            p2_tag: BeamTag::new(Polarization::V, 2),
            p3_tag: BeamTag::new(Polarization::H, 0),
        },
    }
}

/// NOT-gate variant with the pump one charge *above* the probe
/// (`l_S = l_P2 + 1`). Requires encoding target 1 at charge −1 so outputs
/// stay in the alphabet; the default [`build_gate`] NOT uses offset −1
/// instead.
pub fn raising_not_gate() -> GateSetup {
    let mut setup = build_gate(GateKind::Not);
    setup.pump_policy = PumpPolicy::FollowsProbe { offset: 1 };
    setup.target_convention = LogicalConvention::target_minus();
    setup
}

/// Mixing-strength parameters for gate application.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FwmParams {
    /// Third-order coupling (finite, nonzero).
    pub chi3: Complex64,
    /// Conversion efficiency in (0, 1].
    pub efficiency: f64,
}

impl Default for FwmParams {
    fn default() -> Self {
        Self {
            chi3: Complex64::new(1.0, 0.0),
            efficiency: 1.0,
        }
    }
}

/// Result of applying a gate.
#[derive(Debug, Clone, PartialEq)]
pub struct GateOutput {
    /// Emitted signal state, renormalized to a unit photon.
    pub state: OamSuperposition,
    /// Event-probability weight (raw squared norm × efficiency).
    pub weight: f64,
    /// Set when the control entered as a superposition. The mixing process
    /// is antilinear in the probe, so superposed control *coefficients* are
    /// conjugated on the way through — physically honest for a single
    /// mixing event, but not the linear two-qubit gate action, which
    /// interferes control branches only downstream of the mixer. Callers
    /// building algorithmic pipelines should expand control branches
    /// themselves and recombine linearly.
    pub superposed_control: bool,
}

/// Applies a gate with default mixing strength. See [`apply_gate_with`].
///
/// # Errors
///
/// As [`apply_gate_with`].
pub fn apply_gate(
    setup: &GateSetup,
    control: &OamSuperposition,
    target: &OamSuperposition,
) -> Result<GateOutput> {
    apply_gate_with(setup, control, target, &FwmParams::default())
}

/// Runs `control` and `target` through the setup's chains, resolves the pump
/// policy per probe charge, performs the mixing, and renormalizes.
///
/// The control must live in the control alphabet {0, +1}; the target may use
/// the full one-photon alphabet {−1, 0, +1} regardless of its encoding
/// convention (both charge signs fold to logical 1). A superposed control is
/// accepted but routed through the antilinear mixing map and flagged on the
/// output — see [`GateOutput::superposed_control`].
///
/// # Errors
///
/// Out-of-alphabet inputs, invalid mixing parameters, a fully cancelled
/// signal field, or an emitted charge outside the alphabet (a wiring error:
/// the hologram set cannot represent the result).
pub fn apply_gate_with(
    setup: &GateSetup,
    control: &OamSuperposition,
    target: &OamSuperposition,
    params: &FwmParams,
) -> Result<GateOutput> {
    for l in control.charges() {
        if !(l == 0 || l == 1) {
            return Err(Error::OutOfAlphabet { l });
        }
    }
    for l in target.charges() {
        if l.abs() > 1 {
            return Err(Error::OutOfAlphabet { l });
        }
    }
    let p2_mixer = chain_apply(&setup.p2_chain, target)?;
    let p3_mixer = chain_apply(&setup.p3_chain, control)?;
    let superposed = control.len() > 1;

    let mut raw: BTreeMap<i32, Complex64> = BTreeMap::new();
    for (l3, c3) in p3_mixer.iter() {
        let pump_l = setup.pump_policy.resolve(l3);
        let config = FwmConfig::new(
            params.chi3,
            OamSuperposition::basis(Role::Pump, pump_l)?,
            params.efficiency,
        )?;
        let probe = OamSuperposition::basis(Role::Control, l3)?;
        for (l, term) in fwm_signal_field(&config, &p2_mixer, &probe)? {
            *raw.entry(l).or_insert(Complex64::new(0.0, 0.0)) += c3.conj() * term;
        }
    }

    let (state, raw_norm_sqr) = normalize_signal(raw)?;
    for l in state.charges() {
        if l.abs() > 1 {
            return Err(Error::Wiring {
                gate: setup.kind.name(),
                detail: format!("emitted charge {l} falls outside the logical alphabet"),
            });
        }
    }
    Ok(GateOutput {
        state,
        weight: raw_norm_sqr * params.efficiency,
        superposed_control: superposed,
    })
}

/// One row of a gate's logical truth table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruthRow {
    /// Control bit fed in.
    pub control: u8,
    /// Target bit fed in.
    pub target_in: u8,
    /// Decoded output bit.
    pub target_out: u8,
    /// Probability of the decoded bit (1 for ideal wirings).
    pub probability: f64,
}

/// Enumerates the four logical basis inputs through [`apply_gate`] and
/// decodes each output, in the order (0,0), (0,1), (1,0), (1,1).
///
/// # Errors
///
/// Propagates application and decoding failures.
pub fn truth_table(setup: &GateSetup) -> Result<[TruthRow; 4]> {
    let conv = setup.target_convention;
    let mut rows = Vec::with_capacity(4);
    for (c, t) in [(0u8, 0u8), (0, 1), (1, 0), (1, 1)] {
        let control = encode_logical(c, Role::Control, &conv)?;
        let target = encode_logical(t, Role::Target, &conv)?;
        let output = apply_gate(setup, &control, &target)?;
        let (a0, a1) = logical_amplitudes(&output.state)?;
        let (target_out, probability) = if a1.norm_sqr() > a0.norm_sqr() {
            (1, a1.norm_sqr())
        } else {
            (0, a0.norm_sqr())
        };
        rows.push(TruthRow {
            control: c,
            target_in: t,
            target_out,
            probability,
        });
    }
    Ok(rows.try_into().expect("exactly four rows"))
}

/// A routing or bookkeeping problem found by [`validate_setup`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// An element sits in a chain for a different arm than it is mounted on.
    MisplacedElement {
        /// Arm the chain belongs to.
        expected: Arm,
        /// Arm the element is mounted on.
        found: Arm,
        /// Position in the chain.
        index: usize,
    },
    /// The two pump beams share a polarization (they must be orthogonal).
    PumpPolarizationsParallel,
    /// The probe beam's polarization is crossed with pump 1 (they must be
    /// parallel for phase matching).
    ProbePolarizationCrossed,
    /// The derived signal polarization is no longer orthogonal to the probe
    /// as it arrives at the mixer, so the output splitter cannot separate
    /// them.
    SignalPolarizationClash,
    /// Pump 1 and probe arrive frequency-degenerate, so they cannot be
    /// driven independently.
    DegeneratePumpProbeFrequency,
    /// A logical basis input emits a charge the alphabet cannot decode.
    UndecodableOutput {
        /// Control bit of the offending input.
        control: u8,
        /// Target bit of the offending input.
        target: u8,
        /// Emitted charge.
        signal_l: i32,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::MisplacedElement {
                expected,
                found,
                index,
            } => write!(
                f,
                "element {index} in the {expected} chain is mounted on the {found} arm"
            ),
            Violation::PumpPolarizationsParallel => {
                write!(f, "pump beams share a polarization; they must be orthogonal")
            }
            Violation::ProbePolarizationCrossed => {
                write!(f, "probe polarization crossed with pump 1; they must be parallel")
            }
            Violation::SignalPolarizationClash => {
                write!(f, "signal polarization no longer orthogonal to the probe")
            }
            Violation::DegeneratePumpProbeFrequency => {
                write!(f, "degenerate pump/probe frequency")
            }
            Violation::UndecodableOutput {
                control,
                target,
                signal_l,
            } => write!(
                f,
                "output charge outside alphabet: input ({control}, {target}) emits charge {signal_l}"
            ),
        }
    }
}

/// Audits a wiring plan without applying it: arm placement, polarization
/// orthogonality of the pumps, probe/pump-1 parallelism, signal/probe
/// separability, pump/probe non-degeneracy, and decodability of all four
/// logical basis inputs. Returns every violation found; an empty list means
/// the setup is sound.
pub fn validate_setup(setup: &GateSetup) -> Vec<Violation> {
    let mut violations = Vec::new();

    let chains = [
        (Arm::Pump1, &setup.p1_chain),
        (Arm::Target, &setup.p2_chain),
        (Arm::Probe, &setup.p3_chain),
    ];
    for (arm, chain) in chains {
        for (index, element) in chain.iter().enumerate() {
            if element.arm() != arm {
                violations.push(Violation::MisplacedElement {
                    expected: arm,
                    found: element.arm(),
                    index,
                });
            }
        }
    }

    let p1 = tag_after_chain(&setup.p1_chain, setup.p1_tag);
    let p2 = tag_after_chain(&setup.p2_chain, setup.p2_tag);
    let p3 = tag_after_chain(&setup.p3_chain, setup.p3_tag);
    if p1.polarization == p2.polarization {
        violations.push(Violation::PumpPolarizationsParallel);
    }
    if p3.polarization != p1.polarization {
        violations.push(Violation::ProbePolarizationCrossed);
    }
    if setup.signal_tag().polarization == p3.polarization {
        violations.push(Violation::SignalPolarizationClash);
    }
    if p1.frequency_channel == p3.frequency_channel {
        violations.push(Violation::DegeneratePumpProbeFrequency);
    }

    let one_target = match setup.target_convention.one_charge(Role::Target) {
        Ok(l) => l,
        Err(_) => 1,
    };
    for (c, t) in [(0u8, 0u8), (0, 1), (1, 0), (1, 1)] {
        let lc = if c == 0 { 0 } else { 1 };
        let lt = if t == 0 { 0 } else { one_target };
        let traced = charge_through(&setup.p3_chain, lc).and_then(|l3| {
            charge_through(&setup.p2_chain, lt)
                .map(|l2| signal_l(setup.pump_policy.resolve(l3), l2, l3))
        });
        match traced {
            Ok(ls) if ls.abs() <= 1 => {}
            Ok(ls) => violations.push(Violation::UndecodableOutput {
                control: c,
                target: t,
                signal_l: ls,
            }),
            Err(Error::ChargeOutOfRange { l }) => violations.push(Violation::UndecodableOutput {
                control: c,
                target: t,
                signal_l: l,
            }),
            Err(_) => unreachable!("chain tracing only fails on charge range"),
        }
    }

    violations
}
