//! `vortexgate`: command-line driver for the charge-qubit gate simulator.
//!
//! Subcommands: `gate-table` prints a wiring's truth table and validation
//! report, `run` executes the full constant-versus-balanced algorithm and
//! writes the result record plus readout images, `render` images an
//! arbitrary charge superposition, and `project` measures a state's overlap
//! with one mode on the grid. Exit codes: 0 success, 1 invalid values, 2
//! IO or config-parse failure. All numeric output is fixed-width and every
//! command is deterministic — identical inputs give byte-identical output.

mod config;
mod json;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_complex::Complex64;

use config::{parse_config, OutputFormat, RunConfig};
use json::Json;
use vortexgate_core::deutsch::{
    run_deutsch_with, testing_state, DeutschResult, RunOptions, Stage,
};
use vortexgate_core::gates::{build_gate, truth_table, validate_setup, FwmParams, GateKind};
use vortexgate_core::lgmode::{project_onto_lg, sample_field, ModeIndex};
use vortexgate_core::oamstate::{OamSuperposition, Role};
use vortexgate_core::render::{
    classify, pattern_stats, render_state, write_csv, write_pgm, PatternClass, RealGrid,
};
use vortexgate_core::Error as CoreError;

/// Environment variable naming the output directory; a `--out` flag beats
/// it, and it beats the config file's `[output] dir`.
const OUT_DIR_ENV: &str = "VORTEXGATE_OUT_DIR";

#[derive(Parser)]
#[command(
    name = "vortexgate",
    version,
    about = "Simulate charge-encoded photonic logic driven by nonlinear mixing"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print a wiring's 4-row truth table and validation report.
    #[command(name = "gate-table")]
    GateTable {
        /// Wiring name: I, NOT, CNOT or Z-CNOT.
        kind: String,
    },
    /// Run the constant-versus-balanced algorithm; write the result record
    /// and the mid-run and final readout images.
    Run {
        /// Config file path (defaults apply when omitted).
        #[arg(long)]
        config: Option<PathBuf>,
        /// Wiring override (beats the config's `gate`).
        #[arg(long)]
        gate: Option<String>,
        /// Output directory (beats the environment and the config).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render a charge superposition to an image or CSV grid.
    Render {
        /// State as comma-separated `l:re:im` components, e.g.
        /// `0:0.7071:0,1:0:0.7071`; normalized before rendering.
        #[arg(long, allow_hyphen_values = true)]
        state: String,
        /// Config file path (defaults apply when omitted).
        #[arg(long)]
        config: Option<PathBuf>,
        /// Output format: pgm (default) or csv.
        #[arg(long)]
        format: Option<String>,
        /// Output directory (beats the environment and the config).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the squared grid projection of a state onto one mode.
    Project {
        /// State as comma-separated `l:re:im` components; normalized first.
        #[arg(long, allow_hyphen_values = true)]
        state: String,
        /// Topological charge of the analysis mode.
        #[arg(long, allow_hyphen_values = true)]
        l: i32,
        /// Config file path (defaults apply when omitted).
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

/// Failures split by exit code: invalid values exit 1, IO and config
/// parsing exit 2.
enum CliError {
    Validation(String),
    Io(String),
}

type CliResult<T> = Result<T, CliError>;

impl CliError {
    fn from_core(e: CoreError) -> Self {
        match e {
            CoreError::Io { .. } | CoreError::MalformedGrid { .. } => CliError::Io(e.to_string()),
            other => CliError::Validation(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::GateTable { kind } => cmd_gate_table(&kind),
        Command::Run { config, gate, out } => cmd_run(config.as_deref(), gate.as_deref(), out),
        Command::Render {
            state,
            config,
            format,
            out,
        } => cmd_render(&state, config.as_deref(), format.as_deref(), out),
        Command::Project { state, l, config } => cmd_project(&state, l, config.as_deref()),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

/// Reads and parses the config file, or returns defaults when no path is
/// given. Duplicate-key warnings go to the error stream.
fn load_config(path: Option<&Path>) -> CliResult<RunConfig> {
    let Some(path) = path else {
        return Ok(RunConfig::default());
    };
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("config {}: {e}", path.display())))?;
    let (config, warnings) = parse_config(&text)
        .map_err(|e| CliError::Io(format!("config {}: {e}", path.display())))?;
    for warning in warnings {
        eprintln!("warning: config {}: {warning}", path.display());
    }
    Ok(config)
}

fn parse_gate(name: &str) -> CliResult<GateKind> {
    name.parse::<GateKind>()
        .map_err(|e| CliError::Validation(e.to_string()))
}

/// Parses a `l:re:im,...` coefficient list and normalizes it.
fn parse_state(spec: &str) -> CliResult<OamSuperposition> {
    let mut pairs = Vec::new();
    for part in spec.split(',') {
        let fields: Vec<&str> = part.split(':').collect();
        if fields.len() != 3 {
            return Err(CliError::Validation(format!(
                "state component {part:?} is not of the form l:re:im"
            )));
        }
        let l: i32 = fields[0].trim().parse().map_err(|_| {
            CliError::Validation(format!("state charge {:?} is not an integer", fields[0]))
        })?;
        let re: f64 = fields[1].trim().parse().map_err(|_| {
            CliError::Validation(format!("state amplitude {:?} is not a number", fields[1]))
        })?;
        let im: f64 = fields[2].trim().parse().map_err(|_| {
            CliError::Validation(format!("state amplitude {:?} is not a number", fields[2]))
        })?;
        pairs.push((l, Complex64::new(re, im)));
    }
    OamSuperposition::from_coeffs(Role::Signal, &pairs)
        .and_then(|s| s.normalized())
        .map_err(CliError::from_core)
}

/// Resolves the output directory: `--out` beats the environment variable,
/// which beats the config file; the working directory is the fallback.
fn resolve_out_dir(flag: Option<PathBuf>, config: &RunConfig) -> PathBuf {
    if let Some(dir) = flag {
        return dir;
    }
    if let Some(dir) = std::env::var_os(OUT_DIR_ENV) {
        if !dir.is_empty() {
            return PathBuf::from(dir);
        }
    }
    config
        .out_dir
        .clone()
        .unwrap_or_else(|| PathBuf::from("."))
}

fn ensure_dir(dir: &Path) -> CliResult<()> {
    fs::create_dir_all(dir)
        .map_err(|e| CliError::Io(format!("creating {}: {e}", dir.display())))
}

/// Writes a grid in one format next to its siblings; returns the path.
fn write_grid(grid: &RealGrid, dir: &Path, stem: &str, format: OutputFormat) -> CliResult<PathBuf> {
    let path = dir.join(format!("{stem}.{}", format.extension()));
    match format {
        OutputFormat::Pgm => write_pgm(grid, &path),
        OutputFormat::Csv => write_csv(grid, &path),
    }
    .map_err(CliError::from_core)?;
    Ok(path)
}

fn class_label(class: PatternClass) -> &'static str {
    match class {
        PatternClass::Gaussian => "gaussian",
        PatternClass::Doughnut => "doughnut",
        PatternClass::Interference => "interference",
        PatternClass::Unclassified => "unclassified",
    }
}

fn cmd_gate_table(kind: &str) -> CliResult<()> {
    let kind = parse_gate(kind)?;
    let setup = build_gate(kind);
    let violations = validate_setup(&setup);
    println!("gate: {kind}");
    if violations.is_empty() {
        println!("validation: clean");
    } else {
        println!("validation: {} violation(s)", violations.len());
        for violation in &violations {
            println!("  - {violation}");
        }
    }
    let rows = truth_table(&setup).map_err(CliError::from_core)?;
    println!("c t | out  probability");
    for row in rows {
        println!(
            "{} {} |  {}   {:.12}",
            row.control, row.target_in, row.target_out, row.probability
        );
    }
    Ok(())
}

fn complex_json(c: Complex64) -> Json {
    Json::Arr(vec![Json::Num(c.re), Json::Num(c.im)])
}

fn stage_json(logical: &[[Complex64; 2]; 2]) -> Json {
    Json::Arr(
        logical
            .iter()
            .map(|row| Json::Arr(row.iter().map(|&c| complex_json(c)).collect()))
            .collect(),
    )
}

/// Builds the structured result record: verdict, probabilities, sign and
/// the logical amplitudes of each pipeline stage, keys sorted.
fn result_record(result: &DeutschResult) -> Json {
    Json::obj([
        ("event_weight", Json::Num(result.event_weight)),
        ("gate", Json::Str(result.gate.to_string())),
        ("global_sign", Json::Int(i64::from(result.global_sign))),
        ("p0", Json::Num(result.p0)),
        ("p0_scaled", Json::Num(result.p0_scaled)),
        ("p1", Json::Num(result.p1)),
        ("p1_scaled", Json::Num(result.p1_scaled)),
        (
            "stages",
            Json::obj([
                ("psi1", stage_json(&result.psi1.logical)),
                ("psi2", stage_json(&result.psi2.logical)),
                ("psi3", stage_json(&result.psi3.logical)),
            ]),
        ),
        ("verdict", Json::Str(result.verdict.to_string())),
        (
            "warnings",
            Json::Arr(result.warnings.iter().cloned().map(Json::Str).collect()),
        ),
    ])
}

fn cmd_run(
    config_path: Option<&Path>,
    gate_flag: Option<&str>,
    out_flag: Option<PathBuf>,
) -> CliResult<()> {
    let config = load_config(config_path)?;
    let kind = match gate_flag {
        Some(name) => parse_gate(name)?,
        None => config.gate,
    };
    if let Some(wanted) = config.target_one_l {
        let canonical = build_gate(kind)
            .target_convention
            .one_charge(Role::Target)
            .map_err(CliError::from_core)?;
        if wanted != canonical {
            return Err(CliError::Validation(format!(
                "target_one_l = {wanted} is incompatible with the {kind} wiring, which encodes target |1⟩ at {canonical}"
            )));
        }
    }

    let options = RunOptions {
        fwm: FwmParams {
            chi3: Complex64::new(config.chi3, 0.0),
            efficiency: config.efficiency,
        },
    };
    let result = run_deutsch_with(kind, &options).map_err(CliError::from_core)?;

    let dir = resolve_out_dir(out_flag, &config);
    ensure_dir(&dir)?;
    let record_path = dir.join("result.json");
    fs::write(&record_path, result_record(&result).render())
        .map_err(|e| CliError::Io(format!("writing {}: {e}", record_path.display())))?;

    let sign = if result.global_sign >= 0 { "+1" } else { "-1" };
    println!("gate: {}", result.gate);
    println!("verdict: {}", result.verdict);
    println!("p0: {:.12}", result.p0);
    println!("p1: {:.12}", result.p1);
    println!("sign: {sign}");
    println!("event weight: {:.12}", result.event_weight);
    for warning in &result.warnings {
        eprintln!("warning: {warning}");
    }
    println!("wrote: {}", record_path.display());

    for (stage, stem) in [(Stage::Psi2, "psi2_testing"), (Stage::Psi3, "psi3_testing")] {
        let state = testing_state(&result, stage).map_err(CliError::from_core)?;
        let grid = render_state(&state, &config.beam, &config.grid).map_err(CliError::from_core)?;
        for &format in &config.formats {
            let path = write_grid(&grid, &dir, stem, format)?;
            println!("wrote: {}", path.display());
        }
    }
    Ok(())
}

fn cmd_render(
    state_spec: &str,
    config_path: Option<&Path>,
    format_flag: Option<&str>,
    out_flag: Option<PathBuf>,
) -> CliResult<()> {
    let config = load_config(config_path)?;
    let state = parse_state(state_spec)?;
    let format = match format_flag {
        Some(name) => name
            .parse::<OutputFormat>()
            .map_err(CliError::Validation)?,
        None => OutputFormat::Pgm,
    };
    let grid = render_state(&state, &config.beam, &config.grid).map_err(CliError::from_core)?;
    let stats = pattern_stats(&grid).map_err(CliError::from_core)?;
    println!("class: {}", class_label(classify(&stats)));
    println!("center ratio: {:.12}", stats.center_intensity_ratio);
    println!("ring radius: {:.12}", stats.ring_radius);
    println!("azimuth: {:.12}", stats.azimuth_of_max);
    println!("anisotropy: {:.12}", stats.anisotropy);

    let dir = resolve_out_dir(out_flag, &config);
    ensure_dir(&dir)?;
    let path = write_grid(&grid, &dir, "render", format)?;
    println!("wrote: {}", path.display());
    Ok(())
}

fn cmd_project(state_spec: &str, l: i32, config_path: Option<&Path>) -> CliResult<()> {
    let config = load_config(config_path)?;
    let state = parse_state(state_spec)?;
    let mode = ModeIndex::new(l, 0).map_err(CliError::from_core)?;
    let field = sample_field(&state, &config.beam, &config.grid);
    let projection = project_onto_lg(&field, mode, &config.beam).map_err(CliError::from_core)?;
    println!("{:.12}", projection.norm_sqr());
    Ok(())
}
