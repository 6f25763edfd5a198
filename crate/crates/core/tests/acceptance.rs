//! Acceptance gate for the simulation library.
//!
//! Each test covers one acceptance criterion end to end and prints a single
//! `ACCEPTANCE <n> <name>: PASS` (or `FAIL`) line; run with
//! `cargo test -p vortexgate-core --test acceptance -- --nocapture` to see
//! the lines. Tolerances are fixed constants, written next to the checks
//! they guard.

use num_complex::Complex64;
use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::time::Instant;
use vortexgate_core::deutsch::{
    oracle_classify, run_deutsch, run_deutsch_with, target_factor, testing_state, RunOptions,
    Stage, Verdict,
};
use vortexgate_core::fwm::{fwm_signal_field, fwm_transform, FwmConfig};
use vortexgate_core::gates::{apply_gate, build_gate, truth_table, FwmParams, GateKind};
use vortexgate_core::lgmode::{overlap, sample_field, project_onto_lg, BeamParams, GridSpec, ModeIndex};
use vortexgate_core::oamstate::{fidelity, OamSuperposition, Role};
use vortexgate_core::render::{classify, pattern_stats, render_state, PatternClass, AZIMUTHAL_BINS};

/// Exact-identity tolerance for probabilities and amplitudes.
const TOL_PROB: f64 = 1e-9;
/// Fidelity floor for state-level comparisons.
const TOL_FIDELITY: f64 = 1e-12;
/// Grid-discretization tolerance for mode overlaps.
const TOL_GRAM: f64 = 1e-6;
/// Relative tolerance on the measured ring radius.
const TOL_RING: f64 = 0.01;
/// Floor on the squared grid projection of a basis readout state.
const TOL_PROJECTION: f64 = 1e-3;
/// Production grid used for imaging checks.
const GRID_N: usize = 512;
const GRID_EXTENT: f64 = 6.0;

macro_rules! check {
    ($cond:expr, $($arg:tt)+) => {
        if !$cond {
            return Err(format!($($arg)+));
        }
    };
}

fn criterion(n: u32, name: &str, body: impl FnOnce() -> Result<(), String>) {
    match body() {
        Ok(()) => println!("ACCEPTANCE {n} {name}: PASS"),
        Err(msg) => {
            println!("ACCEPTANCE {n} {name}: FAIL — {msg}");
            panic!("acceptance criterion {n} ({name}) failed: {msg}");
        }
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Angular distance on the circle, in [0, π].
fn ang_dist(a: f64, b: f64) -> f64 {
    let mut d = (a - b).rem_euclid(2.0 * PI);
    if d > PI {
        d = 2.0 * PI - d;
    }
    d
}

/// All four wirings reproduce their logic truth tables deterministically,
/// with unit decoded probability, in under a second.
#[test]
fn criterion_1_logic_truth_tables() {
    criterion(1, "logic truth tables", || {
        let started = Instant::now();
        for kind in GateKind::all() {
            let expected = |control: u8, target: u8| -> u8 {
                match kind {
                    GateKind::I => target,
                    GateKind::Not => target ^ 1,
                    GateKind::Cnot => target ^ control,
                    GateKind::ZCnot => target ^ control ^ 1,
                }
            };
            let rows = truth_table(&build_gate(kind)).map_err(|e| e.to_string())?;
            check!(rows.len() == 4, "{kind}: expected 4 rows");
            for row in rows {
                let want = expected(row.control, row.target_in);
                check!(
                    row.target_out == want,
                    "{kind}: ({}, {}) decoded {} instead of {want}",
                    row.control,
                    row.target_in,
                    row.target_out
                );
                check!(
                    (row.probability - 1.0).abs() < TOL_PROB,
                    "{kind}: ({}, {}) probability {} not within {TOL_PROB} of 1",
                    row.control,
                    row.target_in,
                    row.probability
                );
            }
        }
        let elapsed = started.elapsed();
        check!(
            elapsed.as_secs_f64() < 1.0,
            "16 rows took {elapsed:?}, budget is 1 s"
        );
        Ok(())
    });
}

/// A swept target superposition rides through the controlled wiring intact:
/// control 0 keeps α|0⟩+β|1⟩, control 1 returns α|1⟩+β|0⟩, at fidelity
/// 1 − 1e-12 across a 17-point sweep of mixing angles. The comparison is in
/// the logical basis — the encoding rule assigns both ±1 charges to |1⟩, and
/// the wiring is free to emit either.
#[test]
fn criterion_2_target_superposition_transport() {
    criterion(2, "target superposition transport", || {
        let setup = build_gate(GateKind::Cnot);
        let conv = setup.target_convention;
        let one = conv.one_charge(Role::Target).map_err(|e| e.to_string())?;
        for k in 0..=16 {
            let angle = k as f64 * PI / 16.0;
            let (alpha, beta) = (angle.cos(), angle.sin());
            let target = OamSuperposition::from_coeffs(
                Role::Target,
                &[(0, c(alpha, 0.0)), (one, c(beta, 0.0))],
            )
            .map_err(|e| e.to_string())?;
            for control_bit in [0u8, 1] {
                let control = vortexgate_core::oamstate::encode_logical(
                    control_bit,
                    Role::Control,
                    &conv,
                )
                .map_err(|e| e.to_string())?;
                let out = apply_gate(&setup, &control, &target).map_err(|e| e.to_string())?;
                let (a0, a1) = vortexgate_core::oamstate::logical_amplitudes(&out.state)
                    .map_err(|e| e.to_string())?;
                let (e0, e1) = if control_bit == 0 {
                    (alpha, beta)
                } else {
                    (beta, alpha)
                };
                let fid = (a0 * e0 + a1 * e1).norm_sqr()
                    / (a0.norm_sqr() + a1.norm_sqr());
                check!(
                    fid >= 1.0 - TOL_FIDELITY,
                    "k = {k}, control {control_bit}: logical fidelity {fid}"
                );
            }
        }
        Ok(())
    });
}

/// One run per wiring settles constant-versus-balanced: the verdict matches
/// the classical oracle, the winning readout probability is 1, the product
/// state's overall sign alternates (+, −, +, −), and the target factor
/// always comes out as the odd superposition.
#[test]
fn criterion_3_algorithm_discrimination() {
    criterion(3, "algorithm discrimination", || {
        let expected_signs = [1i32, -1, 1, -1];
        for (kind, want_sign) in GateKind::all().into_iter().zip(expected_signs) {
            let result = run_deutsch(kind).map_err(|e| e.to_string())?;
            let want_verdict = match kind {
                GateKind::I | GateKind::Not => Verdict::Constant,
                GateKind::Cnot | GateKind::ZCnot => Verdict::Balanced,
            };
            check!(
                result.verdict == want_verdict,
                "{kind}: verdict {} instead of {want_verdict}",
                result.verdict
            );
            let classical = oracle_classify(kind).map_err(|e| e.to_string())?;
            check!(
                result.verdict == classical,
                "{kind}: quantum verdict {} disagrees with the classical oracle {classical}",
                result.verdict
            );
            let winner = match result.verdict {
                Verdict::Constant => result.p0,
                Verdict::Balanced => result.p1,
            };
            check!(
                (winner - 1.0).abs() < TOL_PROB,
                "{kind}: winning probability {winner}"
            );
            check!(
                result.global_sign == want_sign,
                "{kind}: sign {} instead of {want_sign}",
                result.global_sign
            );
            let factor = target_factor(&result).map_err(|e| e.to_string())?;
            let one = build_gate(kind)
                .target_convention
                .one_charge(Role::Target)
                .map_err(|e| e.to_string())?;
            let odd = OamSuperposition::from_coeffs(
                Role::Target,
                &[(0, c(FRAC_1_SQRT_2, 0.0)), (one, c(-FRAC_1_SQRT_2, 0.0))],
            )
            .map_err(|e| e.to_string())?;
            let fid = fidelity(&factor, &odd);
            check!(
                fid >= 1.0 - TOL_FIDELITY,
                "{kind}: target factor fidelity {fid}"
            );
        }
        Ok(())
    });
}

/// The computational mode family is orthonormal on the production grid at
/// the waist and one Rayleigh range out, to 1e-6, in under 30 seconds.
#[test]
fn criterion_4_mode_orthonormality_on_the_grid() {
    criterion(4, "mode orthonormality on the grid", || {
        let started = Instant::now();
        let beam = BeamParams::default();
        for z in [0.0, beam.rayleigh_zr()] {
            let spec = GridSpec::new(GRID_N, GRID_EXTENT, z).map_err(|e| e.to_string())?;
            let fields: Vec<_> = (-2..=2i32)
                .map(|l| {
                    let state = OamSuperposition::basis(Role::Signal, l)?;
                    Ok(sample_field(&state, &beam, &spec))
                })
                .collect::<Result<_, vortexgate_core::Error>>()
                .map_err(|e| e.to_string())?;
            for (i, fa) in fields.iter().enumerate() {
                for (j, fb) in fields.iter().enumerate() {
                    let ov = overlap(fa, fb).map_err(|e| e.to_string())?;
                    if i == j {
                        check!(
                            (ov - 1.0).norm() < TOL_GRAM,
                            "z = {z}: ⟨{i}|{i}⟩ = {ov} strays from 1"
                        );
                    } else {
                        check!(
                            ov.norm() < TOL_GRAM,
                            "z = {z}: ⟨{i}|{j}⟩ = {ov} should vanish"
                        );
                    }
                }
            }
        }
        let elapsed = started.elapsed();
        check!(
            elapsed.as_secs_f64() < 30.0,
            "Gram matrices took {elapsed:?}, budget is 30 s"
        );
        Ok(())
    });
}

/// Images carry the readout: charge 0 photographs as a bright-centered
/// spot, a pure charge as a dark-cored ring at the analytic radius,
/// constant and balanced mid-run states as lobes half a turn apart, and
/// the final readout state projects onto its nominal mode on the grid.
#[test]
fn criterion_5_pattern_readout() {
    criterion(5, "pattern readout", || {
        let beam = BeamParams::default();
        let spec = GridSpec::new(GRID_N, GRID_EXTENT, 0.0).map_err(|e| e.to_string())?;

        let spot = OamSuperposition::basis(Role::Signal, 0).map_err(|e| e.to_string())?;
        let stats =
            pattern_stats(&render_state(&spot, &beam, &spec).map_err(|e| e.to_string())?)
                .map_err(|e| e.to_string())?;
        check!(
            stats.center_intensity_ratio > 0.99,
            "charge 0 center ratio {}",
            stats.center_intensity_ratio
        );
        check!(
            classify(&stats) == PatternClass::Gaussian,
            "charge 0 classified {:?}",
            classify(&stats)
        );

        let ring = OamSuperposition::basis(Role::Signal, 1).map_err(|e| e.to_string())?;
        let stats =
            pattern_stats(&render_state(&ring, &beam, &spec).map_err(|e| e.to_string())?)
                .map_err(|e| e.to_string())?;
        check!(
            stats.center_intensity_ratio < 0.01,
            "charge 1 center ratio {}",
            stats.center_intensity_ratio
        );
        let expected_radius = FRAC_1_SQRT_2;
        check!(
            (stats.ring_radius - expected_radius).abs() < TOL_RING * expected_radius,
            "ring radius {} vs {expected_radius}",
            stats.ring_radius
        );
        check!(
            classify(&stats) == PatternClass::Doughnut,
            "charge 1 classified {:?}",
            classify(&stats)
        );

        // Mid-run readout: constant and balanced lobes sit half a turn apart.
        let constant_run = run_deutsch(GateKind::Not).map_err(|e| e.to_string())?;
        let balanced_run = run_deutsch(GateKind::Cnot).map_err(|e| e.to_string())?;
        let mut azimuths = Vec::new();
        for run in [&constant_run, &balanced_run] {
            let mid = testing_state(run, Stage::Psi2).map_err(|e| e.to_string())?;
            let stats =
                pattern_stats(&render_state(&mid, &beam, &spec).map_err(|e| e.to_string())?)
                    .map_err(|e| e.to_string())?;
            check!(
                classify(&stats) == PatternClass::Interference,
                "mid-run state classified {:?}",
                classify(&stats)
            );
            azimuths.push(stats.azimuth_of_max);
        }
        let separation = ang_dist(azimuths[0], azimuths[1]);
        let bin = 2.0 * PI / AZIMUTHAL_BINS as f64;
        check!(
            (separation - PI).abs() <= 2.0 * bin,
            "lobe separation {separation} not within two bins of π"
        );

        // Final readout basis states keep ≥ 99.9% of their power in the
        // nominal mode on the grid.
        for kind in GateKind::all() {
            let result = run_deutsch(kind).map_err(|e| e.to_string())?;
            let readout = testing_state(&result, Stage::Psi3).map_err(|e| e.to_string())?;
            let charges = readout.charges();
            check!(
                charges.len() == 1,
                "{kind}: final readout spans charges {charges:?}"
            );
            let mode = ModeIndex::new(charges[0], 0).map_err(|e| e.to_string())?;
            let field = sample_field(&readout, &beam, &spec);
            let proj = project_onto_lg(&field, mode, &beam).map_err(|e| e.to_string())?;
            check!(
                proj.norm_sqr() >= 1.0 - TOL_PROJECTION,
                "{kind}: grid projection {} onto charge {}",
                proj.norm_sqr(),
                charges[0]
            );
        }
        Ok(())
    });
}

/// The mixer conserves topological charge across all 125 basis triples in
/// the working range, is linear in the converted beam and antilinear in the
/// de-excited one.
#[test]
fn criterion_6_charge_conservation_and_linearity() {
    criterion(6, "charge conservation and linearity", || {
        for l1 in -2..=2i32 {
            let config = FwmConfig::with_pump_charge(l1).map_err(|e| e.to_string())?;
            for l2 in -2..=2i32 {
                for l3 in -2..=2i32 {
                    let p2 = OamSuperposition::basis(Role::Target, l2).map_err(|e| e.to_string())?;
                    let p3 = OamSuperposition::basis(Role::Control, l3).map_err(|e| e.to_string())?;
                    let out = fwm_transform(&config, &p2, &p3).map_err(|e| e.to_string())?;
                    let want = l1 + l2 - l3;
                    check!(
                        out.state.charges() == vec![want],
                        "({l1}, {l2}, {l3}): emitted {:?} instead of {want}",
                        out.state.charges()
                    );
                    check!(
                        (out.weight - 1.0).abs() < TOL_FIDELITY,
                        "({l1}, {l2}, {l3}): weight {}",
                        out.weight
                    );
                }
            }
        }

        // Linearity in the converted beam: F(a·x + b·y) = a·F(x) + b·F(y).
        let config = FwmConfig::with_pump_charge(1).map_err(|e| e.to_string())?;
        let (a, b) = (c(0.3, -0.4), c(0.2, 0.9));
        let x = OamSuperposition::basis(Role::Target, 0).map_err(|e| e.to_string())?;
        let y = OamSuperposition::basis(Role::Target, 2).map_err(|e| e.to_string())?;
        let mixed = OamSuperposition::from_coeffs(Role::Target, &[(0, a), (2, b)])
            .map_err(|e| e.to_string())?;
        let probe = OamSuperposition::from_coeffs(
            Role::Target,
            &[(-1, c(FRAC_1_SQRT_2, 0.0)), (1, c(0.0, FRAC_1_SQRT_2))],
        )
        .map_err(|e| e.to_string())?;
        let f_mixed = fwm_signal_field(&config, &mixed, &probe).map_err(|e| e.to_string())?;
        let f_x = fwm_signal_field(&config, &x, &probe).map_err(|e| e.to_string())?;
        let f_y = fwm_signal_field(&config, &y, &probe).map_err(|e| e.to_string())?;
        for (l, v) in &f_mixed {
            let combined = a * f_x.get(l).copied().unwrap_or(c(0.0, 0.0))
                + b * f_y.get(l).copied().unwrap_or(c(0.0, 0.0));
            check!(
                (v - combined).norm() < TOL_FIDELITY,
                "linearity at charge {l}: {v} vs {combined}"
            );
        }

        // Antilinearity in the de-excited beam: F(x, e^{iθ}·w) = e^{−iθ}·F(x, w).
        let theta = 0.7f64;
        let turned = probe
            .scaled(Complex64::cis(theta))
            .map_err(|e| e.to_string())?;
        let f_turned = fwm_signal_field(&config, &mixed, &turned).map_err(|e| e.to_string())?;
        for (l, v) in &f_mixed {
            let expected = v * Complex64::cis(-theta);
            let got = f_turned.get(l).copied().unwrap_or(c(0.0, 0.0));
            check!(
                (got - expected).norm() < TOL_FIDELITY,
                "antilinearity at charge {l}: {got} vs {expected}"
            );
        }
        Ok(())
    });
}

/// Conversion efficiency rescales event weights linearly and leaves every
/// emitted state bitwise untouched, from a single mixing event up through a
/// full algorithm run.
#[test]
fn criterion_7_efficiency_scaling() {
    criterion(7, "efficiency scaling", || {
        let pump = OamSuperposition::basis(Role::Pump, 1).map_err(|e| e.to_string())?;
        let p2 = OamSuperposition::from_coeffs(Role::Target, &[(0, c(0.6, 0.0)), (1, c(0.0, 0.8))])
            .map_err(|e| e.to_string())?;
        let p3 = OamSuperposition::from_coeffs(
            Role::Target,
            &[(-1, c(FRAC_1_SQRT_2, 0.0)), (0, c(-FRAC_1_SQRT_2, 0.0))],
        )
        .map_err(|e| e.to_string())?;
        let full = FwmConfig::new(c(1.0, 0.0), pump.clone(), 1.0).map_err(|e| e.to_string())?;
        let quarter = FwmConfig::new(c(1.0, 0.0), pump, 0.25).map_err(|e| e.to_string())?;
        let out_full = fwm_transform(&full, &p2, &p3).map_err(|e| e.to_string())?;
        let out_quarter = fwm_transform(&quarter, &p2, &p3).map_err(|e| e.to_string())?;
        check!(
            out_quarter.weight.to_bits() == (0.25 * out_full.weight).to_bits(),
            "weights {} vs 0.25 × {}",
            out_quarter.weight,
            out_full.weight
        );
        for (l, v) in out_full.state.iter() {
            let w = out_quarter.state.coeff(l);
            check!(
                v.re.to_bits() == w.re.to_bits() && v.im.to_bits() == w.im.to_bits(),
                "state coefficient at charge {l} moved: {v} vs {w}"
            );
        }
        check!(
            out_full.state.len() == out_quarter.state.len(),
            "state support changed"
        );

        // Full-pipeline invariance: probabilities and snapshots are bitwise
        // stable, only the event weight rescales.
        for kind in GateKind::all() {
            let plain = run_deutsch(kind).map_err(|e| e.to_string())?;
            let lossy = run_deutsch_with(
                kind,
                &RunOptions {
                    fwm: FwmParams {
                        chi3: c(1.0, 0.0),
                        efficiency: 0.25,
                    },
                },
            )
            .map_err(|e| e.to_string())?;
            check!(
                plain.p0.to_bits() == lossy.p0.to_bits()
                    && plain.p1.to_bits() == lossy.p1.to_bits(),
                "{kind}: readout probabilities moved under loss"
            );
            check!(
                lossy.event_weight.to_bits() == (0.25 * plain.event_weight).to_bits(),
                "{kind}: event weight {} vs 0.25 × {}",
                lossy.event_weight,
                plain.event_weight
            );
            check!(
                (lossy.p1_scaled - lossy.p1 * lossy.event_weight).abs() < TOL_FIDELITY,
                "{kind}: scaled probability inconsistent"
            );
        }
        Ok(())
    });
}
