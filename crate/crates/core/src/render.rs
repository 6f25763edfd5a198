//! Intensity readout: turning charge superpositions into the patterns an
//! experiment photographs, plus statistics that tell those patterns apart.
//!
//! Three pattern families matter here:
//!
//! * a pure charge-0 state photographs as a centered Gaussian spot,
//! * a pure ±1 state as an azimuthally uniform doughnut with a dark core
//!   (peak intensity on the ring `r = w/√2` at the waist),
//! * an equal two-charge interference `(|0⟩ + e^{iθ}|±1⟩)/√2` as a single
//!   off-axis lobe sitting at azimuth `∓θ` (with the `exp(ilφ)` sign
//!   convention used throughout this crate).
//!
//! [`pattern_stats`] reduces a grid to four scale-invariant numbers —
//! center-intensity ratio, ring radius, intensity-centroid azimuth and
//! azimuthal anisotropy — and [`classify`] thresholds them into the three
//! classes. Rendering inherits the sampler's determinism guarantees:
//! identical states give bitwise-identical grids, and mirroring a state's
//! charges reflects the image columns bit-for-bit.
//!
//! Grids serialize to 16-bit binary PGM (quantization error ~1.5e-5 of full
//! scale, far below every test tolerance here) and to full-precision CSV;
//! both formats round-trip exactly through the provided readers.

use crate::error::{Error, Result};
use crate::lgmode::{sample_field, BeamParams, GridSpec};
use crate::oamstate::OamSuperposition;

use std::f64::consts::PI;
use std::fs;
use std::io::Write;
use std::path::Path;

/// Number of azimuthal bins used by [`pattern_stats`].
pub const AZIMUTHAL_BINS: usize = 64;

/// A non-negative intensity map on a sampling window.
#[derive(Debug, Clone, PartialEq)]
pub struct RealGrid {
    spec: GridSpec,
    values: Vec<f64>,
    max: f64,
}

impl RealGrid {
    /// Wraps row-major values (length `n²`, finite, ≥ 0) on a window.
    ///
    /// # Errors
    ///
    /// Wrong buffer size, negative or non-finite entries.
    pub fn from_values(spec: GridSpec, values: Vec<f64>) -> Result<Self> {
        if values.len() != spec.n() * spec.n() {
            return Err(Error::GridMismatch {
                detail: format!(
                    "value buffer holds {} entries, spec wants {}",
                    values.len(),
                    spec.n() * spec.n()
                ),
            });
        }
        let mut max = 0.0f64;
        for &v in &values {
            if !v.is_finite() {
                return Err(Error::NonFinite {
                    what: "intensity value",
                });
            }
            if v < 0.0 {
                return Err(Error::InvalidParameter {
                    what: "intensity value",
                    detail: format!("{v}: intensities are non-negative"),
                });
            }
            if v > max {
                max = v;
            }
        }
        Ok(Self { spec, values, max })
    }

    /// The sampling window.
    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    /// All values, row-major.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Value at (row, col) = (x index, y index).
    pub fn value(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.spec.n() + col]
    }

    /// Largest value on the grid.
    pub fn max(&self) -> f64 {
        self.max
    }
}

/// Samples a state's intensity `|field|²` on a window.
///
/// All downstream statistics are scale-invariant, so the state's norm only
/// sets the recorded maximum; callers rendering physical probabilities
/// should pass normalized states.
pub fn render_state(
    state: &OamSuperposition,
    beam: &BeamParams,
    spec: &GridSpec,
) -> Result<RealGrid> {
    let field = sample_field(state, beam, spec);
    let values: Vec<f64> = field.samples().iter().map(|c| c.norm_sqr()).collect();
    RealGrid::from_values(*spec, values)
}

/// Scale-invariant summary of an intensity pattern.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PatternStats {
    /// Mean of the four central pixels over the grid maximum, in [0, 1].
    pub center_intensity_ratio: f64,
    /// Radius (waist units) of the azimuthally-averaged profile's peak,
    /// refined to sub-pixel precision.
    pub ring_radius: f64,
    /// Azimuth of the intensity centroid, in (−π, π].
    pub azimuth_of_max: f64,
    /// `1 − min/max` over occupied azimuthal bins on the annulus through
    /// the brightest pixel, in [0, 1].
    pub anisotropy: f64,
}

/// Pattern families distinguished by the readout.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PatternClass {
    /// Bright center: charge-0 spot.
    Gaussian,
    /// Dark core with an azimuthally uniform ring.
    Doughnut,
    /// Single off-axis lobe from a two-charge superposition.
    Interference,
    /// None of the above.
    Unclassified,
}

/// Computes the four pattern statistics of a grid.
///
/// The radial profile is averaged in one-pixel-wide bins and its peak
/// refined by a parabolic fit; the anisotropy scan uses
/// [`AZIMUTHAL_BINS`] bins on an annulus two pixels either side of the
/// brightest pixel's radius.
///
/// # Errors
///
/// An identically-zero grid has no pattern to measure.
pub fn pattern_stats(grid: &RealGrid) -> Result<PatternStats> {
    let spec = grid.spec();
    let n = spec.n();
    let max = grid.max();
    if max <= 0.0 {
        return Err(Error::DegenerateGrid);
    }
    let step = spec.step();

    let half = n / 2;
    let center_sum: f64 = [
        (half - 1, half - 1),
        (half - 1, half),
        (half, half - 1),
        (half, half),
    ]
    .iter()
    .map(|&(r, c)| grid.value(r, c))
    .sum();
    let center_intensity_ratio = center_sum / 4.0 / max;

    let radial_bins = (n as f64 * std::f64::consts::SQRT_2 / 2.0).ceil() as usize + 2;
    let mut radial_sum = vec![0.0f64; radial_bins];
    let mut radial_count = vec![0usize; radial_bins];
    let mut sx = 0.0f64;
    let mut sy = 0.0f64;
    let mut peak_value = f64::NEG_INFINITY;
    let mut peak_radius = 0.0f64;
    for row in 0..n {
        let x = spec.coord(row);
        for col in 0..n {
            let y = spec.coord(col);
            let v = grid.value(row, col);
            let r = x.hypot(y);
            let bin = (r / step) as usize;
            if bin < radial_bins {
                radial_sum[bin] += v;
                radial_count[bin] += 1;
            }
            sx += v * x;
            sy += v * y;
            if v > peak_value {
                peak_value = v;
                peak_radius = r;
            }
        }
    }

    let mean_at = |bin: usize| -> Option<f64> {
        (bin < radial_bins && radial_count[bin] > 0).then(|| radial_sum[bin] / radial_count[bin] as f64)
    };
    let mut best_bin = 0;
    let mut best_mean = f64::NEG_INFINITY;
    for bin in 0..radial_bins {
        if let Some(mean) = mean_at(bin) {
            if mean > best_mean {
                best_mean = mean;
                best_bin = bin;
            }
        }
    }
    let mut offset = 0.0;
    if best_bin > 0 {
        if let (Some(lo), Some(hi)) = (mean_at(best_bin - 1), mean_at(best_bin + 1)) {
            let denom = lo - 2.0 * best_mean + hi;
            if denom.abs() > f64::EPSILON * best_mean.abs() {
                offset = (0.5 * (lo - hi) / denom).clamp(-0.5, 0.5);
            }
        }
    }
    let ring_radius = (best_bin as f64 + 0.5 + offset) * step;

    let mut azimuth_of_max = sy.atan2(sx);
    if azimuth_of_max <= -PI {
        azimuth_of_max += 2.0 * PI;
    }

    let mut bin_sum = [0.0f64; AZIMUTHAL_BINS];
    let mut bin_count = [0usize; AZIMUTHAL_BINS];
    for row in 0..n {
        let x = spec.coord(row);
        for col in 0..n {
            let y = spec.coord(col);
            let r = x.hypot(y);
            if (r - peak_radius).abs() <= 2.0 * step {
                let phi = y.atan2(x);
                let idx =
                    (((phi + PI) / (2.0 * PI) * AZIMUTHAL_BINS as f64) as usize).min(AZIMUTHAL_BINS - 1);
                bin_sum[idx] += grid.value(row, col);
                bin_count[idx] += 1;
            }
        }
    }
    let mut ring_min = f64::INFINITY;
    let mut ring_max = f64::NEG_INFINITY;
    for idx in 0..AZIMUTHAL_BINS {
        if bin_count[idx] > 0 {
            let mean = bin_sum[idx] / bin_count[idx] as f64;
            ring_min = ring_min.min(mean);
            ring_max = ring_max.max(mean);
        }
    }
    let anisotropy = if ring_max > 0.0 {
        1.0 - ring_min / ring_max
    } else {
        0.0
    };

    Ok(PatternStats {
        center_intensity_ratio,
        ring_radius,
        azimuth_of_max,
        anisotropy,
    })
}

/// Thresholds statistics into a pattern family, most specific first:
/// a bright center (ratio > 0.9) reads as Gaussian; a dark center
/// (ratio < 0.05) with a uniform ring (anisotropy < 0.1) as a doughnut;
/// strong azimuthal contrast (anisotropy > 0.5) as interference.
pub fn classify(stats: &PatternStats) -> PatternClass {
    if stats.center_intensity_ratio > 0.9 {
        PatternClass::Gaussian
    } else if stats.center_intensity_ratio < 0.05 && stats.anisotropy < 0.1 {
        PatternClass::Doughnut
    } else if stats.anisotropy > 0.5 {
        PatternClass::Interference
    } else {
        PatternClass::Unclassified
    }
}

/// Writes 16-bit big-endian binary PGM to a writer: header
/// `P5\n# max=<max> extent=<extent> z=<z>\n<n> <n>\n65535\n`, then `n²`
/// pixels scaled linearly so `max` maps to 65535. The comment line records
/// everything needed to reconstruct physical values and the window.
///
/// # Errors
///
/// Propagates writer failures.
pub fn write_pgm_to<W: Write>(
    mut writer: W,
    n: usize,
    values: &[f64],
    max: f64,
    extent: f64,
    z: f64,
) -> std::io::Result<()> {
    write!(writer, "P5\n# max={max} extent={extent} z={z}\n{n} {n}\n65535\n")?;
    let mut data = Vec::with_capacity(values.len() * 2);
    for &v in values {
        let q = if max > 0.0 {
            (v / max * 65535.0).round() as u16
        } else {
            0
        };
        data.extend_from_slice(&q.to_be_bytes());
    }
    writer.write_all(&data)
}

/// Writes a grid as 16-bit PGM. See [`write_pgm_to`] for the format.
///
/// # Errors
///
/// IO failures carry the path.
pub fn write_pgm(grid: &RealGrid, path: &Path) -> Result<()> {
    let file = fs::File::create(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    write_pgm_to(
        std::io::BufWriter::new(file),
        grid.spec().n(),
        grid.values(),
        grid.max(),
        grid.spec().extent(),
        grid.spec().z(),
    )
    .map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Reads a PGM written by [`write_pgm`], reconstructing physical values
/// from the recorded maximum. Writing the result again reproduces the file
/// byte for byte.
///
/// # Errors
///
/// IO failures carry the path; structural problems (wrong magic, missing
/// metadata, truncated data) are reported as malformed.
pub fn read_pgm(path: &Path) -> Result<RealGrid> {
    let bytes = fs::read(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut offset = 0usize;
    let mut lines = Vec::new();
    for _ in 0..4 {
        let end = bytes[offset..]
            .iter()
            .position(|&b| b == b'\n')
            .ok_or_else(|| Error::MalformedGrid {
                detail: "header truncated".into(),
            })?;
        let line = std::str::from_utf8(&bytes[offset..offset + end]).map_err(|_| {
            Error::MalformedGrid {
                detail: "header is not UTF-8".into(),
            }
        })?;
        lines.push(line.to_string());
        offset += end + 1;
    }
    if lines[0] != "P5" {
        return Err(Error::MalformedGrid {
            detail: format!("magic {:?}, expected \"P5\"", lines[0]),
        });
    }
    let mut max = None;
    let mut extent = None;
    let mut z = None;
    let comment = lines[1]
        .strip_prefix("# ")
        .ok_or_else(|| Error::MalformedGrid {
            detail: "missing metadata comment".into(),
        })?;
    for field in comment.split_whitespace() {
        let (key, value) = field.split_once('=').ok_or_else(|| Error::MalformedGrid {
            detail: format!("metadata field {field:?} is not key=value"),
        })?;
        let parsed: f64 = value.parse().map_err(|_| Error::MalformedGrid {
            detail: format!("metadata value {value:?} is not a number"),
        })?;
        match key {
            "max" => max = Some(parsed),
            "extent" => extent = Some(parsed),
            "z" => z = Some(parsed),
            _ => {
                return Err(Error::MalformedGrid {
                    detail: format!("unknown metadata key {key:?}"),
                })
            }
        }
    }
    let (max, extent, z) = match (max, extent, z) {
        (Some(m), Some(e), Some(z)) => (m, e, z),
        _ => {
            return Err(Error::MalformedGrid {
                detail: "metadata must record max, extent and z".into(),
            })
        }
    };
    let dims: Vec<&str> = lines[2].split_whitespace().collect();
    if dims.len() != 2 || dims[0] != dims[1] {
        return Err(Error::MalformedGrid {
            detail: format!("dimensions {:?} are not square", lines[2]),
        });
    }
    let n: usize = dims[0].parse().map_err(|_| Error::MalformedGrid {
        detail: format!("dimension {:?} is not an integer", dims[0]),
    })?;
    if lines[3] != "65535" {
        return Err(Error::MalformedGrid {
            detail: format!("depth {:?}, expected 16-bit (65535)", lines[3]),
        });
    }
    let data = &bytes[offset..];
    if data.len() != n * n * 2 {
        return Err(Error::MalformedGrid {
            detail: format!("{} data bytes for {n}×{n} 16-bit pixels", data.len()),
        });
    }
    let values: Vec<f64> = data
        .chunks_exact(2)
        .map(|pair| {
            let q = u16::from_be_bytes([pair[0], pair[1]]);
            f64::from(q) / 65535.0 * max
        })
        .collect();
    RealGrid::from_values(GridSpec::new(n, extent, z)?, values)
}

/// Writes row-major CSV to a writer: one grid row per line, comma
/// separators, `\n` line ends, values in shortest round-trip decimal form.
///
/// # Errors
///
/// Propagates writer failures.
pub fn write_csv_to<W: Write>(mut writer: W, n: usize, values: &[f64]) -> std::io::Result<()> {
    for row in values.chunks(n) {
        for (col, v) in row.iter().enumerate() {
            if col > 0 {
                writer.write_all(b",")?;
            }
            write!(writer, "{v}")?;
        }
        writer.write_all(b"\n")?;
    }
    Ok(())
}

/// Writes a grid as CSV. See [`write_csv_to`] for the format.
///
/// # Errors
///
/// IO failures carry the path.
pub fn write_csv(grid: &RealGrid, path: &Path) -> Result<()> {
    let file = fs::File::create(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    write_csv_to(std::io::BufWriter::new(file), grid.spec().n(), grid.values()).map_err(|source| {
        Error::Io {
            path: path.to_path_buf(),
            source,
        }
    })
}

/// Reads a CSV written by [`write_csv`]. Values parse back to the exact
/// floats that were written.
///
/// # Errors
///
/// IO failures carry the path; ragged rows or unparsable cells are
/// malformed.
pub fn read_csv(path: &Path) -> Result<Vec<Vec<f64>>> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (line_no, line) in text.lines().enumerate() {
        let mut row = Vec::new();
        for cell in line.split(',') {
            let v: f64 = cell.trim().parse().map_err(|_| Error::MalformedGrid {
                detail: format!("line {}: cell {cell:?} is not a number", line_no + 1),
            })?;
            row.push(v);
        }
        if let Some(first) = rows.first() {
            if row.len() != first.len() {
                return Err(Error::MalformedGrid {
                    detail: format!(
                        "line {}: {} cells, expected {}",
                        line_no + 1,
                        row.len(),
                        first.len()
                    ),
                });
            }
        }
        rows.push(row);
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oamstate::Role;
    use num_complex::Complex64;
    use proptest::prelude::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn basis(l: i32) -> OamSuperposition {
        OamSuperposition::basis(Role::Signal, l).unwrap()
    }

    fn equal_pair(l: i32, phase: f64) -> OamSuperposition {
        OamSuperposition::from_coeffs(
            Role::Signal,
            &[
                (0, c(FRAC_1_SQRT_2, 0.0)),
                (l, Complex64::cis(phase) * FRAC_1_SQRT_2),
            ],
        )
        .unwrap()
    }

    fn test_spec(n: usize) -> GridSpec {
        GridSpec::new(n, 4.0, 0.0).unwrap()
    }

    /// Angular distance on the circle.
    fn ang_dist(a: f64, b: f64) -> f64 {
        let mut d = (a - b).rem_euclid(2.0 * PI);
        if d > PI {
            d = 2.0 * PI - d;
        }
        d
    }

    const TWO_BINS: f64 = 2.0 * 2.0 * PI / AZIMUTHAL_BINS as f64;

    #[test]
    fn fundamental_spot_is_gaussian() {
        let beam = BeamParams::default();
        let grid = render_state(&basis(0), &beam, &test_spec(128)).unwrap();
        let stats = pattern_stats(&grid).unwrap();
        assert!(stats.center_intensity_ratio > 0.99, "{stats:?}");
        assert_eq!(classify(&stats), PatternClass::Gaussian);
    }

    #[test]
    fn vortex_ring_sits_at_the_analytic_radius() {
        let beam = BeamParams::default();
        let grid = render_state(&basis(1), &beam, &GridSpec::new(256, 4.0, 0.0).unwrap()).unwrap();
        let stats = pattern_stats(&grid).unwrap();
        assert!(stats.center_intensity_ratio < 0.01, "{stats:?}");
        let expected = FRAC_1_SQRT_2;
        assert!(
            (stats.ring_radius - expected).abs() < 0.01 * expected,
            "ring at {}, expected {expected}",
            stats.ring_radius
        );
        assert!(stats.anisotropy < 0.1, "{stats:?}");
        assert_eq!(classify(&stats), PatternClass::Doughnut);
    }

    #[test]
    fn interference_lobe_sits_opposite_the_relative_phase() {
        let beam = BeamParams::default();
        let spec = test_spec(128);
        let two_degrees = 2.0f64.to_radians();

        let plus = pattern_stats(&render_state(&equal_pair(1, 0.0), &beam, &spec).unwrap()).unwrap();
        assert!(plus.anisotropy > 0.9, "{plus:?}");
        assert!(ang_dist(plus.azimuth_of_max, 0.0) < two_degrees, "{plus:?}");
        assert_eq!(classify(&plus), PatternClass::Interference);

        let minus =
            pattern_stats(&render_state(&equal_pair(1, PI), &beam, &spec).unwrap()).unwrap();
        assert!(ang_dist(minus.azimuth_of_max, PI) < two_degrees, "{minus:?}");
    }

    /// The two mid-pipeline readout patterns — equal interference with +1
    /// versus with −1 (minus sign) — point in opposite directions.
    #[test]
    fn readout_classes_are_separated_by_half_a_turn() {
        let beam = BeamParams::default();
        let spec = test_spec(128);
        let constant_like = equal_pair(1, 0.0);
        let balanced_like = OamSuperposition::from_coeffs(
            Role::Signal,
            &[(0, c(FRAC_1_SQRT_2, 0.0)), (-1, c(-FRAC_1_SQRT_2, 0.0))],
        )
        .unwrap();
        let a = pattern_stats(&render_state(&constant_like, &beam, &spec).unwrap()).unwrap();
        let b = pattern_stats(&render_state(&balanced_like, &beam, &spec).unwrap()).unwrap();
        assert!(
            (ang_dist(a.azimuth_of_max, b.azimuth_of_max) - PI).abs() < TWO_BINS,
            "{} vs {}",
            a.azimuth_of_max,
            b.azimuth_of_max
        );
    }

    #[test]
    fn charge_mirror_reflects_columns_bitwise() {
        let beam = BeamParams::default();
        let spec = test_spec(32);
        let state = OamSuperposition::from_coeffs(
            Role::Signal,
            &[(-1, c(0.3, 0.1)), (0, c(0.5, -0.2)), (1, c(0.4, 0.6))],
        )
        .unwrap()
        .normalized()
        .unwrap();
        let mirrored_pairs: Vec<_> = state.iter().map(|(l, v)| (-l, v)).collect();
        let mirrored = OamSuperposition::from_coeffs(Role::Signal, &mirrored_pairs).unwrap();

        let original = render_state(&state, &beam, &spec).unwrap();
        let reflected = render_state(&mirrored, &beam, &spec).unwrap();
        let n = spec.n();
        for row in 0..n {
            for col in 0..n {
                assert_eq!(
                    reflected.value(row, col).to_bits(),
                    original.value(row, n - 1 - col).to_bits(),
                    "pixel ({row}, {col})"
                );
            }
        }
    }

    #[test]
    fn global_phase_leaves_the_image_unchanged() {
        let beam = BeamParams::default();
        let spec = test_spec(64);
        let state = equal_pair(1, 1.1);
        let base = render_state(&state, &beam, &spec).unwrap();

        let negated = state.scaled(c(-1.0, 0.0)).unwrap();
        let flipped = render_state(&negated, &beam, &spec).unwrap();
        assert_eq!(base, flipped, "sign flips are exact");

        let rotated = state.scaled(Complex64::cis(0.7)).unwrap();
        let turned = render_state(&rotated, &beam, &spec).unwrap();
        for (a, b) in base.values().iter().zip(turned.values()) {
            assert!((a - b).abs() <= 1e-12 * base.max(), "{a} vs {b}");
        }
    }

    #[test]
    fn degenerate_and_invalid_grids_are_rejected() {
        let spec = test_spec(16);
        let zeros = RealGrid::from_values(spec, vec![0.0; 256]).unwrap();
        assert!(matches!(pattern_stats(&zeros), Err(Error::DegenerateGrid)));
        assert!(RealGrid::from_values(spec, vec![0.0; 17]).is_err());
        let mut bad = vec![0.0; 256];
        bad[3] = -1.0;
        assert!(RealGrid::from_values(spec, bad.clone()).is_err());
        bad[3] = f64::NAN;
        assert!(RealGrid::from_values(spec, bad).is_err());
    }

    #[test]
    fn classify_threshold_table() {
        let mk = |center: f64, aniso: f64| PatternStats {
            center_intensity_ratio: center,
            ring_radius: 0.7,
            azimuth_of_max: 0.0,
            anisotropy: aniso,
        };
        assert_eq!(classify(&mk(0.95, 0.3)), PatternClass::Gaussian);
        assert_eq!(classify(&mk(0.04, 0.05)), PatternClass::Doughnut);
        assert_eq!(classify(&mk(0.5, 0.7)), PatternClass::Interference);
        assert_eq!(classify(&mk(0.5, 0.3)), PatternClass::Unclassified);
    }

    #[test]
    fn pgm_quantization_by_hand() {
        let mut bytes = Vec::new();
        write_pgm_to(&mut bytes, 2, &[0.0, 1.0, 1.0, 0.0], 1.0, 1.0, 0.0).unwrap();
        let header = b"P5\n# max=1 extent=1 z=0\n2 2\n65535\n";
        assert_eq!(&bytes[..header.len()], header);
        assert_eq!(
            &bytes[header.len()..],
            &[0x00, 0x00, 0xFF, 0xFF, 0xFF, 0xFF, 0x00, 0x00]
        );
    }

    #[test]
    fn csv_layout_by_hand() {
        let mut bytes = Vec::new();
        write_csv_to(&mut bytes, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap();
        assert_eq!(bytes, b"0,1\n1,0\n");
    }

    #[test]
    fn pgm_round_trips_byte_for_byte() {
        let beam = BeamParams::default();
        let grid = render_state(&basis(1), &beam, &test_spec(32)).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ring.pgm");
        write_pgm(&grid, &path).unwrap();
        let first = fs::read(&path).unwrap();

        let reread = read_pgm(&path).unwrap();
        assert_eq!(reread.spec(), grid.spec());
        assert_eq!(reread.max(), grid.max(), "peak pixel survives exactly");
        let again = dir.path().join("ring2.pgm");
        write_pgm(&reread, &again).unwrap();
        let second = fs::read(&again).unwrap();
        assert_eq!(first, second);
    }

    #[test]
    fn csv_round_trips_bit_for_bit() {
        let beam = BeamParams::default();
        let grid = render_state(&equal_pair(1, 0.4), &beam, &test_spec(32)).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("lobe.csv");
        write_csv(&grid, &path).unwrap();
        let rows = read_csv(&path).unwrap();
        assert_eq!(rows.len(), 32);
        for (row_idx, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), 32);
            for (col_idx, v) in row.iter().enumerate() {
                assert_eq!(
                    v.to_bits(),
                    grid.value(row_idx, col_idx).to_bits(),
                    "cell ({row_idx}, {col_idx})"
                );
            }
        }
    }

    #[test]
    fn malformed_pgm_inputs_are_reported() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.pgm");
        fs::write(&path, b"P2\n# max=1 extent=1 z=0\n2 2\n65535\n").unwrap();
        assert!(matches!(read_pgm(&path), Err(Error::MalformedGrid { .. })));
        fs::write(&path, b"P5\n# max=1 extent=1 z=0\n2 2\n65535\nxx").unwrap();
        assert!(matches!(read_pgm(&path), Err(Error::MalformedGrid { .. })));
        assert!(matches!(
            read_pgm(&dir.path().join("absent.pgm")),
            Err(Error::Io { .. })
        ));
    }

    #[test]
    fn malformed_csv_inputs_are_reported() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.csv");
        fs::write(&path, "0,1\n1\n").unwrap();
        assert!(matches!(read_csv(&path), Err(Error::MalformedGrid { .. })));
        fs::write(&path, "0,x\n").unwrap();
        assert!(matches!(read_csv(&path), Err(Error::MalformedGrid { .. })));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        /// Rotating the relative phase of an equal two-charge superposition
        /// rotates the lobe by the opposite angle.
        #[test]
        fn lobe_tracks_the_relative_phase(theta in -3.0f64..3.0) {
            let beam = BeamParams::default();
            let spec = test_spec(64);
            let base = pattern_stats(&render_state(&equal_pair(1, 0.0), &beam, &spec).unwrap()).unwrap();
            let turned = pattern_stats(&render_state(&equal_pair(1, theta), &beam, &spec).unwrap()).unwrap();
            let shift = ang_dist(turned.azimuth_of_max - base.azimuth_of_max, -theta);
            prop_assert!(shift < TWO_BINS, "lobe shift off by {shift}");
        }
    }
}
