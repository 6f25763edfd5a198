//! Laguerre-Gaussian (LG) modes: amplitudes, grid sampling and overlaps.
//!
//! The normalized LG mode of radial index `p` and topological charge `l` at
//! cylindrical coordinates `(r, φ, z)` is
//!
//! ```text
//! LG_p^l = sqrt(2 p! / (π (p+|l|)!)) · (1/w(z)) · (r√2/w(z))^|l|
//!          · exp(−r²/w(z)²) · L_p^|l|(2r²/w(z)²)
//!          · exp(i k₀ r² z / (2(z² + z_R²)))      — wavefront curvature
//!          · exp(−i (2p+|l|+1) · atan(z/z_R))      — Gouy phase
//!          · exp(i l φ)                            — azimuthal charge
//! ```
//!
//! with beam radius `w(z) = w₀ √(1 + (z/z_R)²)`. The modes are orthonormal
//! under `∫∫ conj(a)·b · r dr dφ`, which this module approximates with a
//! midpoint rule on a centered square grid (no sample ever falls on the
//! phase-singular axis because the grid size is even).
//!
//! The pipeline fixes the radial index at `p = 0`; the associated Laguerre
//! recurrence is still exposed (and tested) for the general case.
//!
//! Grid sampling is the crate's hot loop. With the default `parallel`
//! feature rows are filled concurrently via rayon; each row is computed
//! independently and written into its own slot, so the result is bitwise
//! identical to the sequential fallback.

use num_complex::Complex64;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::oamstate::OamSuperposition;

use std::f64::consts::{PI, SQRT_2};

/// Sanity bound on |l|: charges beyond this are rejected everywhere.
pub const MAX_CHARGE: i32 = 8;

/// Gaussian-beam geometry: waist, Rayleigh range and wavenumber.
///
/// Lengths are expressed in waist units by default (`w₀ = 1`, `z_R = 1`,
/// `k₀ = 2π·10`, i.e. a wavelength of w₀/10).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamParams {
    waist_w0: f64,
    rayleigh_zr: f64,
    wavenumber_k0: f64,
}

impl BeamParams {
    /// Creates beam parameters, rejecting non-finite or non-positive values.
    pub fn new(waist_w0: f64, rayleigh_zr: f64, wavenumber_k0: f64) -> Result<Self> {
        for (what, v) in [
            ("beam waist w0", waist_w0),
            ("Rayleigh range zR", rayleigh_zr),
            ("wavenumber k0", wavenumber_k0),
        ] {
            if !v.is_finite() {
                return Err(Error::NonFinite { what });
            }
            if v <= 0.0 {
                return Err(Error::InvalidParameter {
                    what,
                    detail: format!("{v} must be > 0"),
                });
            }
        }
        Ok(Self {
            waist_w0,
            rayleigh_zr,
            wavenumber_k0,
        })
    }

    /// Beam waist `w₀`.
    pub fn waist_w0(&self) -> f64 {
        self.waist_w0
    }

    /// Rayleigh range `z_R`.
    pub fn rayleigh_zr(&self) -> f64 {
        self.rayleigh_zr
    }

    /// Wavenumber `k₀`.
    pub fn wavenumber_k0(&self) -> f64 {
        self.wavenumber_k0
    }

    /// Beam radius `w(z) = w₀ √(1 + (z/z_R)²)`.
    pub fn beam_radius(&self, z: f64) -> f64 {
        let zr = z / self.rayleigh_zr;
        self.waist_w0 * (1.0 + zr * zr).sqrt()
    }
}

impl Default for BeamParams {
    fn default() -> Self {
        Self {
            waist_w0: 1.0,
            rayleigh_zr: 1.0,
            wavenumber_k0: 2.0 * PI * 10.0,
        }
    }
}

/// Mode indices `(l, p)` of an LG beam.
///
/// The pipeline runs entirely at radial index `p = 0`; constructing any other
/// `p` is rejected so a stray radial index cannot silently change the physics.
/// Charges are clamped to the [`MAX_CHARGE`] sanity bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModeIndex {
    l: i32,
    p: u32,
}

impl ModeIndex {
    /// Creates a mode index, enforcing `|l| ≤ 8` and `p = 0`.
    pub fn new(l: i32, p: u32) -> Result<Self> {
        if l.abs() > MAX_CHARGE {
            return Err(Error::ChargeOutOfRange { l });
        }
        if p != 0 {
            return Err(Error::InvalidParameter {
                what: "radial index p",
                detail: format!("{p}: the pipeline fixes p = 0"),
            });
        }
        Ok(Self { l, p })
    }

    /// Topological charge `l`.
    pub fn l(&self) -> i32 {
        self.l
    }

    /// Radial index `p` (always 0).
    pub fn p(&self) -> u32 {
        self.p
    }
}

/// Associated Laguerre polynomial `L_p^α(x)` by the standard two-term
/// recurrence `k·L_k = (2k−1+α−x)·L_{k−1} − (k−1+α)·L_{k−2}`.
pub fn laguerre(p: u32, alpha: u32, x: f64) -> f64 {
    let a = alpha as f64;
    match p {
        0 => 1.0,
        _ => {
            let mut prev = 1.0; // L_0
            let mut cur = 1.0 + a - x; // L_1
            for k in 2..=p {
                let kf = k as f64;
                let next = ((2.0 * kf - 1.0 + a - x) * cur - (kf - 1.0 + a) * prev) / kf;
                prev = cur;
                cur = next;
            }
            cur
        }
    }
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// Complex LG mode amplitude at cylindrical coordinates `(r, φ, z)`.
///
/// Normalized so that `∫∫ |LG|² r dr dφ = 1` in any transverse plane.
///
/// # Panics
///
/// Panics if `r` is negative or if `r`, `phi` or `z` is not finite; those are
/// programmer errors, not data errors.
pub fn lg_amplitude(beam: &BeamParams, mode: ModeIndex, r: f64, phi: f64, z: f64) -> Complex64 {
    assert!(r.is_finite() && r >= 0.0, "radius must be finite and >= 0, got {r}");
    assert!(phi.is_finite(), "azimuth must be finite, got {phi}");
    assert!(z.is_finite(), "axial position must be finite, got {z}");

    let a = mode.l.unsigned_abs();
    let w = beam.beam_radius(z);
    let zr = beam.rayleigh_zr;
    let norm = (2.0 * factorial(mode.p) / (PI * factorial(mode.p + a))).sqrt();
    let x = 2.0 * r * r / (w * w);
    let radial = norm / w
        * (r * SQRT_2 / w).powi(a as i32)
        * (-r * r / (w * w)).exp()
        * laguerre(mode.p, a, x);

    let curvature = beam.wavenumber_k0 * r * r * z / (2.0 * (z * z + zr * zr));
    let gouy = -f64::from(2 * mode.p + a + 1) * (z / zr).atan();
    let azimuthal = f64::from(mode.l) * phi;

    radial * Complex64::cis(curvature + gouy + azimuthal)
}

/// Square sampling window: `n × n` pixels covering `±extent` beam waists in
/// the transverse plane at axial position `z`.
///
/// The grid is centered: pixel `i` sits at `(i − (n−1)/2) · (2·extent/n)`
/// waist units, so an even `n` never samples the `r = 0` phase singularity
/// and the coordinates negate exactly under index reflection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    n: usize,
    extent: f64,
    z: f64,
}

impl GridSpec {
    /// Creates a grid spec; `n` must be even and ≥ 16, `extent` positive.
    pub fn new(n: usize, extent: f64, z: f64) -> Result<Self> {
        if n < 16 || n % 2 != 0 {
            return Err(Error::InvalidParameter {
                what: "grid size n",
                detail: format!("{n}: must be even and >= 16"),
            });
        }
        if !extent.is_finite() {
            return Err(Error::NonFinite { what: "grid extent" });
        }
        if extent <= 0.0 {
            return Err(Error::InvalidParameter {
                what: "grid extent",
                detail: format!("{extent} must be > 0"),
            });
        }
        if !z.is_finite() {
            return Err(Error::NonFinite { what: "grid plane z" });
        }
        Ok(Self { n, extent, z })
    }

    /// Pixels per side.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Half-width of the window in waist units.
    pub fn extent(&self) -> f64 {
        self.extent
    }

    /// Axial position of the sampling plane.
    pub fn z(&self) -> f64 {
        self.z
    }

    /// Pixel pitch in waist units.
    pub fn step(&self) -> f64 {
        2.0 * self.extent / self.n as f64
    }

    /// Centered coordinate of pixel `idx` in waist units.
    ///
    /// Computed as `(idx − (n−1)/2) · step` so that `coord(i)` and
    /// `coord(n−1−i)` are exact floating-point negations of each other.
    pub fn coord(&self, idx: usize) -> f64 {
        (idx as f64 - (self.n as f64 - 1.0) / 2.0) * self.step()
    }
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            n: 512,
            extent: 6.0,
            z: 0.0,
        }
    }
}

/// Complex field samples on a [`GridSpec`] window, stored row-major.
///
/// Row index follows the x axis and column index the y axis, with
/// `φ = atan2(y, x)`; flipping the charge sign of the sampled state is then
/// exactly a reflection of the columns.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldGrid {
    spec: GridSpec,
    /// Physical pixel pitch (`step · w₀`) the samples were taken with.
    pitch: f64,
    samples: Vec<Complex64>,
}

impl FieldGrid {
    /// Wraps raw samples (row-major, length `n²`) taken on `spec` with `beam`.
    pub fn from_samples(spec: GridSpec, beam: &BeamParams, samples: Vec<Complex64>) -> Result<Self> {
        if samples.len() != spec.n() * spec.n() {
            return Err(Error::GridMismatch {
                detail: format!(
                    "sample buffer holds {} values, spec wants {}",
                    samples.len(),
                    spec.n() * spec.n()
                ),
            });
        }
        Ok(Self {
            spec,
            pitch: spec.step() * beam.waist_w0(),
            samples,
        })
    }

    /// The sampling window.
    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    /// Pixels per side.
    pub fn n(&self) -> usize {
        self.spec.n
    }

    /// Physical pixel pitch.
    pub fn pitch(&self) -> f64 {
        self.pitch
    }

    /// All samples, row-major.
    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    /// Sample at (row, col) = (x index, y index).
    pub fn sample(&self, row: usize, col: usize) -> Complex64 {
        self.samples[row * self.spec.n + col]
    }
}

/// Evaluates one output row of the superposed field.
///
/// Terms are accumulated in ascending `|l|` order with each ±l pair summed
/// as a unit. Negating every charge and every azimuth together then permutes
/// only the operands of two-term additions, so a charge-mirrored state
/// evaluated on the reflected column is bitwise identical — the basis of the
/// renderer's exact mirror-symmetry guarantee.
fn fill_row(
    modes: &[(ModeIndex, Complex64)],
    beam: &BeamParams,
    spec: &GridSpec,
    row: usize,
    out: &mut [Complex64],
) {
    let w0 = beam.waist_w0();
    let x = spec.coord(row) * w0;
    for (col, slot) in out.iter_mut().enumerate() {
        let y = spec.coord(col) * w0;
        let r = x.hypot(y);
        let phi = y.atan2(x);
        let mut acc = Complex64::new(0.0, 0.0);
        let mut i = 0;
        while i < modes.len() {
            let (mode, c) = modes[i];
            let term = c * lg_amplitude(beam, mode, r, phi, spec.z());
            let paired = i + 1 < modes.len() && modes[i + 1].0.l() == -mode.l();
            if paired {
                let (mate, cm) = modes[i + 1];
                let mate_term = cm * lg_amplitude(beam, mate, r, phi, spec.z());
                acc += term + mate_term;
                i += 2;
            } else {
                acc += term;
                i += 1;
            }
        }
        *slot = acc;
    }
}

/// Modes sorted by (|l|, l) so ±l partners are adjacent for the paired
/// accumulation in [`fill_row`].
fn mode_list(state: &OamSuperposition) -> Vec<(ModeIndex, Complex64)> {
    let mut modes: Vec<_> = state
        .iter()
        .map(|(l, c)| {
            let mode = ModeIndex::new(l, 0).expect("state invariant guarantees |l| <= 8");
            (mode, c)
        })
        .collect();
    modes.sort_by_key(|(mode, _)| (mode.l().abs(), mode.l()));
    modes
}

/// Sequential reference fill; the public entry point uses it when the
/// `parallel` feature is off, and the parallel path must match it bitwise
/// (tests compare the two directly).
#[cfg(any(not(feature = "parallel"), test))]
fn sample_rows_seq(
    modes: &[(ModeIndex, Complex64)],
    beam: &BeamParams,
    spec: &GridSpec,
    samples: &mut [Complex64],
) {
    let n = spec.n();
    for (row, chunk) in samples.chunks_mut(n).enumerate() {
        fill_row(modes, beam, spec, row, chunk);
    }
}

/// Samples a charge superposition as a complex field on a grid.
///
/// Each pixel holds `Σ_l c_l · LG_0^l(r, φ, z)` evaluated at the pixel
/// center; the map is linear in the state's coefficients. Deterministic:
/// identical inputs give bitwise-identical grids regardless of thread count.
pub fn sample_field(state: &OamSuperposition, beam: &BeamParams, spec: &GridSpec) -> FieldGrid {
    let modes = mode_list(state);
    let n = spec.n();
    let mut samples = vec![Complex64::new(0.0, 0.0); n * n];

    #[cfg(feature = "parallel")]
    samples
        .par_chunks_mut(n)
        .enumerate()
        .for_each(|(row, chunk)| fill_row(&modes, beam, spec, row, chunk));

    #[cfg(not(feature = "parallel"))]
    sample_rows_seq(&modes, beam, spec, &mut samples);

    FieldGrid {
        spec: *spec,
        pitch: spec.step() * beam.waist_w0(),
        samples,
    }
}

/// Discrete inner product `⟨a|b⟩ = Σ conj(a)·b · ΔA` over matching grids.
///
/// Approximates the continuous overlap integral by the midpoint rule; on the
/// default window it reproduces LG orthonormality to better than 1e-6.
pub fn overlap(a: &FieldGrid, b: &FieldGrid) -> Result<Complex64> {
    if a.spec != b.spec {
        return Err(Error::GridMismatch {
            detail: format!("specs differ: {:?} vs {:?}", a.spec, b.spec),
        });
    }
    if a.pitch != b.pitch {
        return Err(Error::GridMismatch {
            detail: format!("pixel pitch differs: {} vs {}", a.pitch, b.pitch),
        });
    }
    let sum: Complex64 = a
        .samples
        .iter()
        .zip(&b.samples)
        .map(|(x, y)| x.conj() * y)
        .sum();
    Ok(sum * (a.pitch * a.pitch))
}

/// Projects a sampled field onto one LG basis mode: `⟨LG_p^l | field⟩`.
///
/// For a normalized input field, `|result|²` is the detection probability in
/// that mode. The basis mode is sampled on the field's own grid with the
/// supplied beam; a beam that disagrees with the one the field was sampled
/// with surfaces as a pitch mismatch.
pub fn project_onto_lg(field: &FieldGrid, mode: ModeIndex, beam: &BeamParams) -> Result<Complex64> {
    let basis = OamSuperposition::basis(crate::oamstate::Role::Signal, mode.l())?;
    let mode_grid = sample_field(&basis, beam, &field.spec);
    overlap(&mode_grid, field)
}
