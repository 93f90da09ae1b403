use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ion_zeno::commands;
use ion_zeno::config::{load_config, ConfigError, Mode, Overrides, RunConfig};
use ion_zeno::csv::Table;
use ion_zeno::figures::{run_figures, write_figures};
use ion_zeno::fock::ModeVector;
use ion_zeno::validate::run_validation;

const EXIT_CONFIG: u8 = 1;
const EXIT_VALIDATION: u8 = 2;
const EXIT_IO: u8 = 3;

/// Exact dynamics and Zeno indicators of a sideband-driven three-level trapped ion.
#[derive(Parser, Debug)]
#[command(name = "ion-zeno", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Level occupations and amplitudes of the configured state over time.
    Evolve(Common),
    /// Survival probability of |n,1> against the chi = 0 reference.
    Survival(Common),
    /// All Zeno indicators for one configuration.
    Indicators(Common),
    /// Indicators over a grid of |chi|.
    Sweep(Common),
    /// Data for the four figures (fig1.csv .. fig4.csv) in --out.
    Figures(Common),
    /// Cross-check closed forms against independent numerics.
    Validate(Common),
}

#[derive(Args, Debug)]
struct Common {
    /// TOML run configuration; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    chi: Option<f64>,
    #[arg(long)]
    gamma1: Option<f64>,
    #[arg(long)]
    gamma2: Option<f64>,
    /// Initial occupations, e.g. 1,0,0.
    #[arg(long)]
    n: Option<ModeVector>,
    /// Quanta removed on the 1 -> 2 transition.
    #[arg(long)]
    r: Option<ModeVector>,
    /// Quanta removed on the 2 -> 3 transition.
    #[arg(long)]
    l: Option<ModeVector>,
    /// Initial electronic level (1, 2 or 3).
    #[arg(long)]
    initial_level: Option<u8>,
    /// End of the time window in 1/omega(0) units.
    #[arg(long)]
    t_max: Option<f64>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    order_threshold: Option<f64>,
    #[arg(long)]
    chi_max: Option<f64>,
    #[arg(long)]
    chi_step: Option<f64>,
    /// Output file (a directory for `figures`); stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Random seed (validate only).
    #[arg(long)]
    seed: Option<u64>,
    /// Number of random cases (validate only).
    #[arg(long)]
    cases: Option<usize>,
}

impl Common {
    fn overrides(&self) -> Overrides {
        Overrides {
            chi: self.chi,
            gamma1: self.gamma1,
            gamma2: self.gamma2,
            n: self.n,
            r: self.r,
            l: self.l,
            initial_level: self.initial_level,
            t_max: self.t_max,
            samples: self.samples,
            epsilon: self.epsilon,
            order_threshold: self.order_threshold,
            chi_max: self.chi_max,
            chi_step: self.chi_step,
            out: self.out.clone(),
            seed: self.seed,
            cases: self.cases,
        }
    }
}

enum Failure {
    Config(ConfigError),
    Validation,
    Io(io::Error),
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

fn emit(table: &Table, config: &RunConfig) -> io::Result<()> {
    match &config.output {
        Some(path) => {
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                fs::create_dir_all(parent)?;
            }
            table.write_to(BufWriter::new(fs::File::create(path)?))
        }
        None => table.write_to(io::stdout().lock()),
    }
}

fn run(mode: Mode, common: &Common) -> Result<(), Failure> {
    let config = load_config(mode, common.config.as_deref(), &common.overrides())?;
    match mode {
        Mode::Evolve => emit(&commands::evolve_table(&config)?, &config)?,
        Mode::Survival => emit(&commands::survival_table(&config)?, &config)?,
        Mode::Indicators => emit(&commands::indicators_table(&config)?, &config)?,
        Mode::Sweep => emit(&commands::sweep_table(&config)?, &config)?,
        Mode::Figures => {
            let tables = run_figures(&config)?;
            let dir = config.output.clone().unwrap_or_else(|| PathBuf::from("."));
            for path in write_figures(&dir, &tables)? {
                eprintln!("wrote {}", path.display());
            }
        }
        Mode::Validate => {
            let report = run_validation(config.seed, config.cases);
            let mut out = io::stdout().lock();
            writeln!(out, "{report}")?;
            if !report.passed() {
                return Err(Failure::Validation);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // Malformed flags are configuration errors, not validation failures.
            return if e.use_stderr() {
                ExitCode::from(EXIT_CONFIG)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let (mode, common) = match &cli.command {
        Command::Evolve(c) => (Mode::Evolve, c),
        Command::Survival(c) => (Mode::Survival, c),
        Command::Indicators(c) => (Mode::Indicators, c),
        Command::Sweep(c) => (Mode::Sweep, c),
        Command::Figures(c) => (Mode::Figures, c),
        Command::Validate(c) => (Mode::Validate, c),
    };
    match run(mode, common) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_CONFIG)
        }
        Err(Failure::Validation) => ExitCode::from(EXIT_VALIDATION),
        Err(Failure::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(Failure::Io(e)) => {
            eprintln!("I/O error: {e}");
            ExitCode::from(EXIT_IO)
        }
    }
}
