//! Continuum-quadrature oracles for the mode family, independent of the
//! grid sampler.
//!
//! The discrete Gram-matrix checks elsewhere ride on `sample_field` +
//! `overlap`; everything here instead integrates `lg_amplitude` directly in
//! polar coordinates with midpoint rules, so a normalization or phase bug in
//! the mode formula cannot hide behind a matching bug in the grid code.

use num_complex::Complex64;
use std::f64::consts::PI;
use vortexgate_core::lgmode::{lg_amplitude, BeamParams, ModeIndex};

/// Midpoint quadrature of `f(r, φ) · r` over `r ∈ (0, r_max)`, `φ ∈ (0, 2π)`.
fn polar_integral<F>(r_max: f64, radial_steps: usize, azimuthal_steps: usize, f: F) -> Complex64
where
    F: Fn(f64, f64) -> Complex64,
{
    let dr = r_max / radial_steps as f64;
    let dphi = 2.0 * PI / azimuthal_steps as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..radial_steps {
        let r = (i as f64 + 0.5) * dr;
        let mut ring = Complex64::new(0.0, 0.0);
        for j in 0..azimuthal_steps {
            let phi = (j as f64 + 0.5) * dphi;
            ring += f(r, phi);
        }
        acc += ring * r;
    }
    acc * dr * dphi
}

/// Every mode in the computational neighbourhood carries unit power, at the
/// waist and one Rayleigh range downstream.
#[test]
fn modes_are_unit_normalized_under_polar_quadrature() {
    let beam = BeamParams::default();
    for z in [0.0, beam.rayleigh_zr()] {
        // Integrating to 6 beam radii leaves a tail below e⁻⁷² of the power;
        // the fine radial mesh keeps the midpoint-rule error a couple of
        // orders under the 1e-9 assertion.
        let r_max = 6.0 * beam.beam_radius(z);
        for l in -2..=2 {
            let mode = ModeIndex::new(l, 0).unwrap();
            let norm = polar_integral(r_max, 150_000, 8, |r, phi| {
                let a = lg_amplitude(&beam, mode, r, phi, z);
                Complex64::new(a.norm_sqr(), 0.0)
            });
            assert!(
                (norm.re - 1.0).abs() < 1e-9,
                "l = {l}, z = {z}: power {} should be 1",
                norm.re
            );
            assert_eq!(norm.im, 0.0);
        }
    }
}

/// Distinct charges are orthogonal: the azimuthal factor alone kills the
/// cross integral, which the quadrature sees without being told.
#[test]
fn distinct_charges_are_orthogonal_under_polar_quadrature() {
    let beam = BeamParams::default();
    for z in [0.0, beam.rayleigh_zr()] {
        let r_max = 8.0 * beam.beam_radius(z);
        for la in -2..=2i32 {
            for lb in (la + 1)..=2 {
                let ma = ModeIndex::new(la, 0).unwrap();
                let mb = ModeIndex::new(lb, 0).unwrap();
                let cross = polar_integral(r_max, 2_000, 256, |r, phi| {
                    lg_amplitude(&beam, ma, r, phi, z).conj()
                        * lg_amplitude(&beam, mb, r, phi, z)
                });
                assert!(
                    cross.norm() < 1e-9,
                    "⟨{la}|{lb}⟩ at z = {z}: |{cross}| should vanish"
                );
            }
        }
    }
}

/// The quadrature also pins the waist-plane peak of the unit-charge ring:
/// intensity `2/(π e)` at `r = 1/√2` (waist units), from maximizing
/// `(2/π)·2r²·e^(−2r²)`.
#[test]
fn ring_peak_intensity_matches_the_closed_form() {
    let beam = BeamParams::default();
    let mode = ModeIndex::new(1, 0).unwrap();
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let peak = lg_amplitude(&beam, mode, r, 0.3, 0.0).norm_sqr();
    let expected = 2.0 / (PI * std::f64::consts::E);
    assert!(
        (peak - expected).abs() < 1e-12,
        "ring peak {peak} vs {expected}"
    );

    // And slightly off the ring the intensity drops on both sides.
    for dr in [-0.05, 0.05] {
        let off = lg_amplitude(&beam, mode, r + dr, 0.3, 0.0).norm_sqr();
        assert!(off < peak, "intensity must fall away from the ring");
    }
}
