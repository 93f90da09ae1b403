//! Run configuration: a TOML file, overridden field by field by CLI flags.
//!
//! ```toml
//! mode = "survival"            # optional; the CLI subcommand wins
//!
//! [state]
//! n = [1, 0, 0]
//! r = [1, 0, 0]
//! l = [1, 0, 0]
//! initial_level = 1            # or: initial_amplitudes = [[re, im], ...]
//!
//! [coupling]                   # exactly one of: gamma pair, beams, chi
//! gamma1 = 1.0
//! gamma2 = 1.0
//! # chi = 10.0
//! # [coupling.beam_a]          rabi_frequency, lamb_dicke, phase (default π/2)
//! # [coupling.beam_b]
//!
//! [time]
//! t_max = 12.566370614359172   # in 1/ω(0) units
//! samples = 1001
//!
//! [indicators]
//! epsilon = 0.01
//! order_threshold = 0.5
//!
//! [sweep]
//! chi_max = 3.0
//! chi_step = 0.01
//!
//! [figures]
//! fig1_chi = [0.0, 1.0, 5.0, 10.0]
//! fig23_chi_max = 3.0
//! fig4_chi_max = 5.0
//! chi_step = 0.01
//!
//! [validate]
//! seed = 0
//! cases = 100
//!
//! [output]
//! path = "out"
//! ```

use std::f64::consts::TAU;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_complex::Complex64 as C64;
use serde::Deserialize;
use thiserror::Error;

use crate::dynamics::{build_block, classify_block, BlockSystem, Level, VibronicState};
use crate::fock::{CouplingConstants, LaserDrive, ModeVector, SidebandPattern};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{path}:{line}:{column}: {message}")]
    Parse {
        path: String,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("cannot read {path}: {source}")]
    Read {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("invalid value for `{field}`: {message}")]
    Field {
        field: &'static str,
        message: String,
    },

    #[error("ambiguous coupling: {0}")]
    Ambiguous(String),

    #[error(transparent)]
    Model(#[from] crate::Error),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Evolve,
    Survival,
    Indicators,
    Sweep,
    Figures,
    Validate,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Mode::Evolve => "evolve",
            Mode::Survival => "survival",
            Mode::Indicators => "indicators",
            Mode::Sweep => "sweep",
            Mode::Figures => "figures",
            Mode::Validate => "validate",
        };
        f.write_str(s)
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "evolve" => Mode::Evolve,
            "survival" => Mode::Survival,
            "indicators" => Mode::Indicators,
            "sweep" => Mode::Sweep,
            "figures" => Mode::Figures,
            "validate" => Mode::Validate,
            other => return Err(format!("unknown mode {other:?}")),
        })
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    mode: Option<Mode>,
    #[serde(default)]
    state: StateSection,
    #[serde(default)]
    coupling: CouplingSection,
    #[serde(default)]
    time: TimeSection,
    #[serde(default)]
    indicators: IndicatorSection,
    #[serde(default)]
    sweep: SweepSection,
    #[serde(default)]
    figures: FigureSection,
    #[serde(default)]
    validate: ValidateSection,
    #[serde(default)]
    output: OutputSection,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct StateSection {
    n: Option<ModeVector>,
    r: Option<ModeVector>,
    l: Option<ModeVector>,
    initial_level: Option<u8>,
    initial_amplitudes: Option<Vec<[f64; 2]>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct CouplingSection {
    gamma1: Option<f64>,
    gamma2: Option<f64>,
    chi: Option<f64>,
    beam_a: Option<LaserDrive>,
    beam_b: Option<LaserDrive>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct TimeSection {
    t_max: Option<f64>,
    samples: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct IndicatorSection {
    epsilon: Option<f64>,
    order_threshold: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct SweepSection {
    chi_max: Option<f64>,
    chi_step: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FigureSection {
    fig1_chi: Option<Vec<f64>>,
    fig23_chi_max: Option<f64>,
    fig4_chi_max: Option<f64>,
    chi_step: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ValidateSection {
    seed: Option<u64>,
    cases: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct OutputSection {
    path: Option<PathBuf>,
}

/// Values given on the command line. Every field mirrors a file field and
/// wins over it.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub chi: Option<f64>,
    pub gamma1: Option<f64>,
    pub gamma2: Option<f64>,
    pub n: Option<ModeVector>,
    pub r: Option<ModeVector>,
    pub l: Option<ModeVector>,
    pub initial_level: Option<u8>,
    pub t_max: Option<f64>,
    pub samples: Option<usize>,
    pub epsilon: Option<f64>,
    pub order_threshold: Option<f64>,
    pub chi_max: Option<f64>,
    pub chi_step: Option<f64>,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub cases: Option<usize>,
}

/// Where the couplings come from.
#[derive(Clone, Debug, PartialEq)]
pub enum CouplingSource {
    Gammas(CouplingConstants),
    Drives {
        a: LaserDrive,
        b: LaserDrive,
    },
    /// |χ| given directly; |α| is taken as the energy unit.
    Chi(f64),
}

#[derive(Clone, Debug, PartialEq)]
pub enum InitialState {
    Level(Level),
    Amplitudes(Vec<C64>),
}

/// Sampling window in 1/ω(0) units.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TimeGrid {
    pub t_max: f64,
    pub samples: usize,
}

impl TimeGrid {
    /// `samples` points from 0 to `t_max` inclusive.
    pub fn points(&self) -> Vec<f64> {
        let last = (self.samples - 1) as f64;
        (0..self.samples)
            .map(|k| self.t_max * k as f64 / last)
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FigureSettings {
    pub fig1_chi: Vec<f64>,
    pub fig23_chi_max: f64,
    pub fig4_chi_max: f64,
    pub chi_step: f64,
}

impl Default for FigureSettings {
    fn default() -> Self {
        FigureSettings {
            fig1_chi: vec![0.0, 1.0, 5.0, 10.0],
            fig23_chi_max: 3.0,
            fig4_chi_max: 5.0,
            chi_step: 0.01,
        }
    }
}

pub const DEFAULT_N: ModeVector = ModeVector::new(1, 0, 0);
pub const DEFAULT_R: ModeVector = ModeVector::new(1, 0, 0);
pub const DEFAULT_L: ModeVector = ModeVector::new(0, 0, 0);
/// Two reference periods 2·T_p(0) = 4π in 1/ω(0) units.
pub const DEFAULT_T_MAX: f64 = 2.0 * TAU;
pub const DEFAULT_SAMPLES: usize = 1001;
pub const DEFAULT_EPSILON: f64 = 0.01;
pub const DEFAULT_SWEEP_CHI_MAX: f64 = 3.0;
pub const DEFAULT_SWEEP_CHI_STEP: f64 = 0.01;
pub const DEFAULT_SEED: u64 = 0;
pub const DEFAULT_CASES: usize = 100;

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub mode: Mode,
    pub n: ModeVector,
    pub pattern: SidebandPattern,
    pub coupling: CouplingSource,
    pub initial: InitialState,
    pub time: TimeGrid,
    pub epsilon: f64,
    pub order_threshold: f64,
    pub sweep_chi_max: f64,
    pub sweep_chi_step: f64,
    pub figures: FigureSettings,
    pub seed: u64,
    pub cases: usize,
    pub output: Option<PathBuf>,
}

impl RunConfig {
    /// The block seeded by |n,1⟩. With a χ override the couplings are α = 1,
    /// β = χ and the block must be three-dimensional.
    pub fn block(&self) -> Result<BlockSystem, ConfigError> {
        match &self.coupling {
            CouplingSource::Gammas(g) => Ok(build_block(&self.n, &self.pattern, g)?),
            CouplingSource::Drives { a, b } => {
                let g = CouplingConstants::from_drives(a, b)?;
                Ok(build_block(&self.n, &self.pattern, &g)?)
            }
            CouplingSource::Chi(chi) => {
                let shape = classify_block(&self.n, &self.pattern);
                if shape.dimension() != 3 {
                    return Err(ConfigError::Field {
                        field: "chi",
                        message: format!(
                            "a chi override needs a three-level block, but n={} with r={}, l={} gives dimension {}",
                            self.n,
                            self.pattern.r,
                            self.pattern.l,
                            shape.dimension()
                        ),
                    });
                }
                Ok(BlockSystem::from_couplings(
                    shape.basis().to_vec(),
                    Some(C64::new(1.0, 0.0)),
                    Some(C64::new(*chi, 0.0)),
                )?)
            }
        }
    }

    /// (|χ|, |α|) for the indicator modes.
    pub fn chi_and_alpha(&self) -> Result<(f64, f64), ConfigError> {
        if let CouplingSource::Chi(chi) = self.coupling {
            return Ok((chi, 1.0));
        }
        let block = self.block()?;
        let chi = block.chi().map_err(|e| ConfigError::Field {
            field: "coupling",
            message: format!("indicators need a coupled three-level block: {e}"),
        })?;
        let alpha = block.alpha().map(|a| a.norm()).unwrap_or(0.0);
        Ok((chi.norm(), alpha))
    }

    /// Initial state over the block's basis.
    pub fn initial_state(&self, dimension: usize) -> Result<VibronicState, ConfigError> {
        let state = match &self.initial {
            InitialState::Level(level) => VibronicState::basis_state(dimension, *level),
            InitialState::Amplitudes(a) => {
                if a.len() != dimension {
                    return Err(ConfigError::Field {
                        field: "state.initial_amplitudes",
                        message: format!(
                            "block has dimension {dimension}, got {} amplitudes",
                            a.len()
                        ),
                    });
                }
                VibronicState::normalized(a.clone())
            }
        };
        state.map_err(|e| ConfigError::Field {
            field: "state",
            message: e.to_string(),
        })
    }
}

fn parse_error(path: &Path, text: &str, err: &toml::de::Error) -> ConfigError {
    let (line, column) = match err.span() {
        Some(span) => {
            let before = &text[..span.start.min(text.len())];
            let line = before.matches('\n').count() + 1;
            let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
            (line, column)
        }
        None => (0, 0),
    };
    ConfigError::Parse {
        path: path.display().to_string(),
        line,
        column,
        message: err.message().to_string(),
    }
}

/// Parses a configuration file's text. `path` is only used in diagnostics.
fn parse_file(path: &Path, text: &str) -> Result<FileConfig, ConfigError> {
    toml::from_str(text).map_err(|e| parse_error(path, text, &e))
}

/// Builds a validated [`RunConfig`] for `mode` from an optional file and the
/// command-line overrides.
pub fn load_config(
    mode: Mode,
    path: Option<&Path>,
    flags: &Overrides,
) -> Result<RunConfig, ConfigError> {
    let file = match path {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|source| ConfigError::Read {
                path: p.display().to_string(),
                source,
            })?;
            parse_file(p, &text)?
        }
        None => FileConfig::default(),
    };
    resolve(mode, file, flags)
}

/// Like [`load_config`] with the file content given as a string.
pub fn load_config_str(
    mode: Mode,
    text: &str,
    flags: &Overrides,
) -> Result<RunConfig, ConfigError> {
    let file = parse_file(Path::new("<inline>"), text)?;
    resolve(mode, file, flags)
}

fn resolve(mode: Mode, file: FileConfig, flags: &Overrides) -> Result<RunConfig, ConfigError> {
    // A file `mode` is informational; the requested mode wins.
    let _ = file.mode;

    let coupling = resolve_coupling(file.coupling, flags)?;

    let n = flags.n.or(file.state.n).unwrap_or(DEFAULT_N);
    let r = flags.r.or(file.state.r).unwrap_or(DEFAULT_R);
    let l = flags.l.or(file.state.l).unwrap_or(DEFAULT_L);

    let initial = match (
        flags.initial_level,
        file.state.initial_level,
        file.state.initial_amplitudes,
    ) {
        (Some(level), _, _) | (None, Some(level), None) => {
            InitialState::Level(Level::from_number(level).ok_or_else(|| ConfigError::Field {
                field: "initial_level",
                message: format!("expected 1, 2 or 3, got {level}"),
            })?)
        }
        (None, None, Some(amps)) => {
            InitialState::Amplitudes(amps.iter().map(|[re, im]| C64::new(*re, *im)).collect())
        }
        (None, Some(_), Some(_)) => {
            return Err(ConfigError::Field {
                field: "state",
                message: "give either initial_level or initial_amplitudes, not both".into(),
            })
        }
        (None, None, None) => InitialState::Level(Level::One),
    };

    let time = TimeGrid {
        t_max: flags.t_max.or(file.time.t_max).unwrap_or(DEFAULT_T_MAX),
        samples: flags
            .samples
            .or(file.time.samples)
            .unwrap_or(DEFAULT_SAMPLES),
    };
    if !(time.t_max > 0.0 && time.t_max.is_finite()) {
        return Err(ConfigError::Field {
            field: "t_max",
            message: format!("must be positive, got {}", time.t_max),
        });
    }
    if time.samples < 2 {
        return Err(ConfigError::Field {
            field: "samples",
            message: format!("need at least 2 samples, got {}", time.samples),
        });
    }

    let epsilon = flags
        .epsilon
        .or(file.indicators.epsilon)
        .unwrap_or(DEFAULT_EPSILON);
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(ConfigError::Field {
            field: "epsilon",
            message: format!("must be positive, got {epsilon}"),
        });
    }
    let order_threshold = flags
        .order_threshold
        .or(file.indicators.order_threshold)
        .unwrap_or(crate::indicators::DEFAULT_ORDER_THRESHOLD);
    if !(order_threshold > 0.0 && order_threshold <= 1.0) {
        return Err(ConfigError::Field {
            field: "order_threshold",
            message: format!("must lie in (0, 1], got {order_threshold}"),
        });
    }

    let sweep_chi_max = flags
        .chi_max
        .or(file.sweep.chi_max)
        .unwrap_or(DEFAULT_SWEEP_CHI_MAX);
    let sweep_chi_step = flags
        .chi_step
        .or(file.sweep.chi_step)
        .unwrap_or(DEFAULT_SWEEP_CHI_STEP);
    check_grid("sweep", sweep_chi_max, sweep_chi_step)?;

    let defaults = FigureSettings::default();
    let figures = FigureSettings {
        fig1_chi: file.figures.fig1_chi.unwrap_or(defaults.fig1_chi),
        fig23_chi_max: file.figures.fig23_chi_max.unwrap_or(defaults.fig23_chi_max),
        fig4_chi_max: file.figures.fig4_chi_max.unwrap_or(defaults.fig4_chi_max),
        chi_step: flags
            .chi_step
            .or(file.figures.chi_step)
            .unwrap_or(defaults.chi_step),
    };
    check_grid("figures", figures.fig23_chi_max, figures.chi_step)?;
    check_grid("figures", figures.fig4_chi_max, figures.chi_step)?;
    if figures.fig1_chi.is_empty()
        || figures
            .fig1_chi
            .iter()
            .any(|c| !(c.is_finite() && *c >= 0.0))
    {
        return Err(ConfigError::Field {
            field: "figures.fig1_chi",
            message: "need a non-empty list of non-negative values".into(),
        });
    }

    let cases = flags.cases.or(file.validate.cases).unwrap_or(DEFAULT_CASES);
    if cases == 0 {
        return Err(ConfigError::Field {
            field: "cases",
            message: "need at least one validation case".into(),
        });
    }

    Ok(RunConfig {
        mode,
        n,
        pattern: SidebandPattern::new(r, l),
        coupling,
        initial,
        time,
        epsilon,
        order_threshold,
        sweep_chi_max,
        sweep_chi_step,
        figures,
        seed: flags.seed.or(file.validate.seed).unwrap_or(DEFAULT_SEED),
        cases,
        output: flags.out.clone().or(file.output.path),
    })
}

fn check_grid(field: &'static str, max: f64, step: f64) -> Result<(), ConfigError> {
    if !(max >= 0.0 && max.is_finite() && step > 0.0 && step.is_finite()) {
        return Err(ConfigError::Field {
            field,
            message: format!("chi grid needs max >= 0 and step > 0, got max={max}, step={step}"),
        });
    }
    Ok(())
}

/// Flags of one coupling kind replace whatever kind the file chose; within
/// a layer, more than one kind is an ambiguity error.
fn resolve_coupling(
    file: CouplingSection,
    flags: &Overrides,
) -> Result<CouplingSource, ConfigError> {
    let file_kinds = [
        file.gamma1.is_some() || file.gamma2.is_some(),
        file.beam_a.is_some() || file.beam_b.is_some(),
        file.chi.is_some(),
    ];
    if file_kinds.iter().filter(|&&k| k).count() > 1 {
        return Err(ConfigError::Ambiguous(
            "the file sets more than one of {gamma1/gamma2, beam_a/beam_b, chi}".into(),
        ));
    }
    let flag_gamma = flags.gamma1.is_some() || flags.gamma2.is_some();
    if flag_gamma && flags.chi.is_some() {
        return Err(ConfigError::Ambiguous(
            "both --chi and --gamma1/--gamma2 given".into(),
        ));
    }

    if let Some(chi) = flags.chi {
        return chi_source(chi);
    }
    if flag_gamma {
        let g1 = flags.gamma1.or(file.gamma1);
        let g2 = flags.gamma2.or(file.gamma2);
        return gamma_source(g1, g2);
    }
    if let Some(chi) = file.chi {
        return chi_source(chi);
    }
    match (file.beam_a, file.beam_b) {
        (Some(a), Some(b)) => {
            a.validate()?;
            b.validate()?;
            return Ok(CouplingSource::Drives { a, b });
        }
        (None, None) => {}
        _ => {
            return Err(ConfigError::Field {
                field: "coupling",
                message: "both beam_a and beam_b are required".into(),
            })
        }
    }
    if file.gamma1.is_some() || file.gamma2.is_some() {
        return gamma_source(file.gamma1, file.gamma2);
    }
    Ok(CouplingSource::Gammas(CouplingConstants::real(1.0, 1.0)?))
}

fn chi_source(chi: f64) -> Result<CouplingSource, ConfigError> {
    if !(chi >= 0.0 && chi.is_finite()) {
        return Err(ConfigError::Field {
            field: "chi",
            message: format!("must be a finite non-negative number, got {chi}"),
        });
    }
    Ok(CouplingSource::Chi(chi))
}

fn gamma_source(g1: Option<f64>, g2: Option<f64>) -> Result<CouplingSource, ConfigError> {
    match (g1, g2) {
        (Some(g1), Some(g2)) => Ok(CouplingSource::Gammas(CouplingConstants::real(g1, g2)?)),
        _ => Err(ConfigError::Field {
            field: "coupling",
            message: "both gamma1 and gamma2 are required".into(),
        }),
    }
}
