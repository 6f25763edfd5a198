//! Line-oriented `key = value` run configuration with `[section]` headers.
//!
//! Sections `beam`, `grid`, `fwm` and `output` mirror the library's
//! parameter groups; `gate`, `target_one_l` and `seed` live at the top
//! level. Absent keys fall back to the library defaults, duplicate keys
//! resolve last-wins with a warning, and every rejection carries the line
//! number it came from. [`RunConfig::to_text`] emits a canonical form that
//! reparses to an equal config.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use vortexgate_core::gates::GateKind;
use vortexgate_core::lgmode::{BeamParams, GridSpec};

/// File formats the CLI can emit for grids.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    /// 16-bit binary PGM image.
    Pgm,
    /// Full-precision CSV.
    Csv,
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Pgm => "pgm",
            OutputFormat::Csv => "csv",
        })
    }
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "pgm" => Ok(OutputFormat::Pgm),
            "csv" => Ok(OutputFormat::Csv),
            other => Err(format!("unknown format {other:?}: expected pgm or csv")),
        }
    }
}

/// Extension used for files of this format.
impl OutputFormat {
    /// File extension (without the dot).
    pub fn extension(self) -> &'static str {
        match self {
            OutputFormat::Pgm => "pgm",
            OutputFormat::Csv => "csv",
        }
    }
}

/// Everything a command needs to execute: wiring choice, beam and grid
/// geometry, mixing parameters and output routing.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    /// Wiring to run (default I).
    pub gate: GateKind,
    /// Beam geometry.
    pub beam: BeamParams,
    /// Sampling window.
    pub grid: GridSpec,
    /// Optional physical charge demanded for logical target |1⟩ (±1); the
    /// chosen wiring must agree.
    pub target_one_l: Option<i32>,
    /// Third-order coupling strength.
    pub chi3: f64,
    /// Conversion efficiency in (0, 1].
    pub efficiency: f64,
    /// Output directory (overridable by flag and environment).
    pub out_dir: Option<PathBuf>,
    /// Grid file formats to emit.
    pub formats: Vec<OutputFormat>,
    /// Reserved for future stochastic extensions; the core is deterministic
    /// and never reads it.
    pub seed: Option<u64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            gate: GateKind::I,
            beam: BeamParams::default(),
            grid: GridSpec::default(),
            target_one_l: None,
            chi3: 1.0,
            efficiency: 1.0,
            out_dir: None,
            formats: vec![OutputFormat::Pgm],
            seed: None,
        }
    }
}

impl RunConfig {
    /// Canonical serialization; [`parse_config`] reads it back to an equal
    /// config. Optional keys are omitted when unset. Currently exercised by
    /// the round-trip tests only; no subcommand prints configs.
    #[cfg_attr(not(test), allow(dead_code))]
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("gate = {}\n", self.gate));
        if let Some(l) = self.target_one_l {
            out.push_str(&format!("target_one_l = {l}\n"));
        }
        if let Some(seed) = self.seed {
            out.push_str(&format!("seed = {seed}\n"));
        }
        out.push_str("\n[beam]\n");
        out.push_str(&format!("w0 = {}\n", self.beam.waist_w0()));
        out.push_str(&format!("zR = {}\n", self.beam.rayleigh_zr()));
        out.push_str(&format!("k0 = {}\n", self.beam.wavenumber_k0()));
        out.push_str("\n[grid]\n");
        out.push_str(&format!("n = {}\n", self.grid.n()));
        out.push_str(&format!("extent = {}\n", self.grid.extent()));
        out.push_str(&format!("z = {}\n", self.grid.z()));
        out.push_str("\n[fwm]\n");
        out.push_str(&format!("chi3 = {}\n", self.chi3));
        out.push_str(&format!("efficiency = {}\n", self.efficiency));
        out.push_str("\n[output]\n");
        if let Some(dir) = &self.out_dir {
            out.push_str(&format!("dir = {}\n", dir.display()));
        }
        let formats: Vec<String> = self.formats.iter().map(|f| f.to_string()).collect();
        out.push_str(&format!("formats = {}\n", formats.join(",")));
        out
    }
}

/// A rejected config line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    /// 1-based line number of the offending line.
    pub line: usize,
    /// What was wrong with it.
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Section {
    Global,
    Beam,
    Grid,
    Fwm,
    Output,
}

/// Mutable parse state: every value remembers the line that set it so
/// duplicate-key warnings can cite both.
struct Builder {
    gate: Option<(GateKind, usize)>,
    target_one_l: Option<(i32, usize)>,
    seed: Option<(u64, usize)>,
    w0: Option<(f64, usize)>,
    zr: Option<(f64, usize)>,
    k0: Option<(f64, usize)>,
    n: Option<(usize, usize)>,
    extent: Option<(f64, usize)>,
    z: Option<(f64, usize)>,
    chi3: Option<(f64, usize)>,
    efficiency: Option<(f64, usize)>,
    dir: Option<(PathBuf, usize)>,
    formats: Option<(Vec<OutputFormat>, usize)>,
}

fn err(line: usize, message: impl Into<String>) -> ConfigError {
    ConfigError {
        line,
        message: message.into(),
    }
}

fn parse_f64(value: &str, key: &str, line: usize) -> Result<f64, ConfigError> {
    value
        .parse::<f64>()
        .map_err(|_| err(line, format!("{key}: {value:?} is not a number")))
}

/// Records the duplicate-key warning when a key is set twice.
fn note_dup<T>(
    slot: &Option<(T, usize)>,
    key: &str,
    line: usize,
    warnings: &mut Vec<String>,
) {
    if let Some((_, prev)) = slot {
        warnings.push(format!(
            "line {line}: duplicate key '{key}' overrides line {prev}"
        ));
    }
}

/// Parses configuration text into a [`RunConfig`] and duplicate-key
/// warnings.
///
/// # Errors
///
/// Unknown sections or keys, malformed numbers, and values violating the
/// library invariants are rejected with their line number.
pub fn parse_config(text: &str) -> Result<(RunConfig, Vec<String>), ConfigError> {
    let mut section = Section::Global;
    let mut warnings = Vec::new();
    let mut b = Builder {
        gate: None,
        target_one_l: None,
        seed: None,
        w0: None,
        zr: None,
        k0: None,
        n: None,
        extent: None,
        z: None,
        chi3: None,
        efficiency: None,
        dir: None,
        formats: None,
    };

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        if let Some(name) = trimmed.strip_prefix('[') {
            let name = name
                .strip_suffix(']')
                .ok_or_else(|| err(line, format!("unterminated section header {trimmed:?}")))?;
            section = match name.trim() {
                "beam" => Section::Beam,
                "grid" => Section::Grid,
                "fwm" => Section::Fwm,
                "output" => Section::Output,
                other => {
                    return Err(err(
                        line,
                        format!("unknown section {other:?}: expected beam, grid, fwm or output"),
                    ))
                }
            };
            continue;
        }
        let (key, value) = trimmed
            .split_once('=')
            .ok_or_else(|| err(line, format!("expected 'key = value', got {trimmed:?}")))?;
        let key = key.trim();
        let value = value.trim();

        match (section, key) {
            (Section::Global, "gate") => {
                note_dup(&b.gate, key, line, &mut warnings);
                let kind = value
                    .parse::<GateKind>()
                    .map_err(|e| err(line, e.to_string()))?;
                b.gate = Some((kind, line));
            }
            (Section::Global, "target_one_l") => {
                note_dup(&b.target_one_l, key, line, &mut warnings);
                let l = value
                    .parse::<i32>()
                    .map_err(|_| err(line, format!("target_one_l: {value:?} is not an integer")))?;
                if l != 1 && l != -1 {
                    return Err(err(line, format!("target_one_l must be +1 or -1, got {l}")));
                }
                b.target_one_l = Some((l, line));
            }
            (Section::Global, "seed") => {
                note_dup(&b.seed, key, line, &mut warnings);
                let seed = value
                    .parse::<u64>()
                    .map_err(|_| err(line, format!("seed: {value:?} is not an unsigned integer")))?;
                b.seed = Some((seed, line));
            }
            (Section::Beam, "w0") => {
                note_dup(&b.w0, key, line, &mut warnings);
                let v = parse_f64(value, key, line)?;
                if !v.is_finite() || v <= 0.0 {
                    return Err(err(line, format!("w0 must be positive and finite, got {v}")));
                }
                b.w0 = Some((v, line));
            }
            (Section::Beam, "zR") => {
                note_dup(&b.zr, key, line, &mut warnings);
                let v = parse_f64(value, key, line)?;
                if !v.is_finite() || v <= 0.0 {
                    return Err(err(line, format!("zR must be positive and finite, got {v}")));
                }
                b.zr = Some((v, line));
            }
            (Section::Beam, "k0") => {
                note_dup(&b.k0, key, line, &mut warnings);
                let v = parse_f64(value, key, line)?;
                if !v.is_finite() || v <= 0.0 {
                    return Err(err(line, format!("k0 must be positive and finite, got {v}")));
                }
                b.k0 = Some((v, line));
            }
            (Section::Grid, "n") => {
                note_dup(&b.n, key, line, &mut warnings);
                let v = value
                    .parse::<usize>()
                    .map_err(|_| err(line, format!("n: {value:?} is not an unsigned integer")))?;
                if v < 16 || v % 2 != 0 {
                    return Err(err(line, format!("n must be even and at least 16, got {v}")));
                }
                b.n = Some((v, line));
            }
            (Section::Grid, "extent") => {
                note_dup(&b.extent, key, line, &mut warnings);
                let v = parse_f64(value, key, line)?;
                if !v.is_finite() || v <= 0.0 {
                    return Err(err(
                        line,
                        format!("extent must be positive and finite, got {v}"),
                    ));
                }
                b.extent = Some((v, line));
            }
            (Section::Grid, "z") => {
                note_dup(&b.z, key, line, &mut warnings);
                let v = parse_f64(value, key, line)?;
                if !v.is_finite() {
                    return Err(err(line, format!("z must be finite, got {v}")));
                }
                b.z = Some((v, line));
            }
            (Section::Fwm, "chi3") => {
                note_dup(&b.chi3, key, line, &mut warnings);
                let v = parse_f64(value, key, line)?;
                if !v.is_finite() || v == 0.0 {
                    return Err(err(line, format!("chi3 must be finite and nonzero, got {v}")));
                }
                b.chi3 = Some((v, line));
            }
            (Section::Fwm, "efficiency") => {
                note_dup(&b.efficiency, key, line, &mut warnings);
                let v = parse_f64(value, key, line)?;
                if !v.is_finite() || v <= 0.0 || v > 1.0 {
                    return Err(err(line, "efficiency out of (0,1]".to_string()));
                }
                b.efficiency = Some((v, line));
            }
            (Section::Output, "dir") => {
                note_dup(&b.dir, key, line, &mut warnings);
                if value.is_empty() {
                    return Err(err(line, "dir must not be empty"));
                }
                b.dir = Some((PathBuf::from(value), line));
            }
            (Section::Output, "formats") => {
                note_dup(&b.formats, key, line, &mut warnings);
                let mut formats = Vec::new();
                for part in value.split(',') {
                    let fmt = part
                        .parse::<OutputFormat>()
                        .map_err(|e| err(line, e))?;
                    if !formats.contains(&fmt) {
                        formats.push(fmt);
                    }
                }
                if formats.is_empty() {
                    return Err(err(line, "formats must list at least one of pgm, csv"));
                }
                b.formats = Some((formats, line));
            }
            (_, key) => {
                let section_name = match section {
                    Section::Global => "top level".to_string(),
                    Section::Beam => "section [beam]".to_string(),
                    Section::Grid => "section [grid]".to_string(),
                    Section::Fwm => "section [fwm]".to_string(),
                    Section::Output => "section [output]".to_string(),
                };
                return Err(err(line, format!("unknown key {key:?} in {section_name}")));
            }
        }
    }

    let defaults = RunConfig::default();
    let beam = BeamParams::new(
        b.w0.map_or(defaults.beam.waist_w0(), |(v, _)| v),
        b.zr.map_or(defaults.beam.rayleigh_zr(), |(v, _)| v),
        b.k0.map_or(defaults.beam.wavenumber_k0(), |(v, _)| v),
    )
    .expect("beam values validated per key");
    let grid = GridSpec::new(
        b.n.map_or(defaults.grid.n(), |(v, _)| v),
        b.extent.map_or(defaults.grid.extent(), |(v, _)| v),
        b.z.map_or(defaults.grid.z(), |(v, _)| v),
    )
    .expect("grid values validated per key");

    Ok((
        RunConfig {
            gate: b.gate.map_or(defaults.gate, |(v, _)| v),
            beam,
            grid,
            target_one_l: b.target_one_l.map(|(v, _)| v),
            chi3: b.chi3.map_or(defaults.chi3, |(v, _)| v),
            efficiency: b.efficiency.map_or(defaults.efficiency, |(v, _)| v),
            out_dir: b.dir.map(|(v, _)| v),
            formats: b.formats.map_or(defaults.formats, |(v, _)| v),
            seed: b.seed.map(|(v, _)| v),
        },
        warnings,
    ))
}
