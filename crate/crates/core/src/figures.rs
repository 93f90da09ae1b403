//! Data behind the four published plots: survival curves for a set of |χ|
//! (fig1), m(χ) (fig2), t_m(χ) (fig3) and P̄(χ) (fig4).

use std::fs;
use std::io::{self, BufWriter};
use std::path::{Path, PathBuf};

use crate::config::{ConfigError, RunConfig};
use crate::csv::Table;
use crate::dynamics::survival_probability;
use crate::indicators::{chi_grid, mean_survival, min_survival, time_of_min};

const TIME_UNITS: &str = "units: hbar = 1; t_scaled in 1/omega(0), omega(0) = |alpha|/hbar";
const CHI_UNITS: &str = "units: chi dimensionless; probabilities dimensionless";
const T_M_UNITS: &str = "units: t_m_scaled in 1/omega(0), omega(0) = |alpha|/hbar";

#[derive(Clone, Debug, PartialEq)]
pub struct FigureTables {
    pub fig1: Table,
    pub fig2: Table,
    pub fig3: Table,
    pub fig4: Table,
}

impl FigureTables {
    pub fn named(&self) -> [(&'static str, &Table); 4] {
        [
            ("fig1.csv", &self.fig1),
            ("fig2.csv", &self.fig2),
            ("fig3.csv", &self.fig3),
            ("fig4.csv", &self.fig4),
        ]
    }
}

/// Builds all four tables. Times are in 1/ω(0) units, where the survival
/// curve of |χ| oscillates at angular frequency √(1+|χ|²).
pub fn run_figures(config: &RunConfig) -> Result<FigureTables, ConfigError> {
    let settings = &config.figures;

    let header: Vec<String> = std::iter::once("t_scaled".to_string())
        .chain(settings.fig1_chi.iter().map(|chi| format!("P_chi{chi}")))
        .collect();
    let mut fig1 = Table::with_header(TIME_UNITS, header);
    for t in config.time.points() {
        let row: Vec<f64> = std::iter::once(t)
            .chain(
                settings
                    .fig1_chi
                    .iter()
                    .map(|&chi| survival_probability(chi, (1.0 + chi * chi).sqrt(), t)),
            )
            .collect();
        fig1.push(&row);
    }

    let mut fig2 = Table::new(CHI_UNITS, &["chi", "m"]);
    let mut fig3 = Table::new(T_M_UNITS, &["chi", "t_m_scaled"]);
    for chi in chi_grid(settings.fig23_chi_max, settings.chi_step)? {
        fig2.push(&[chi, min_survival(chi)]);
        // With |α| = 1 the raw time is already in 1/ω(0) units.
        fig3.push(&[chi, time_of_min(1.0, chi)?]);
    }

    let mut fig4 = Table::new(CHI_UNITS, &["chi", "P_mean"]);
    for chi in chi_grid(settings.fig4_chi_max, settings.chi_step)? {
        fig4.push(&[chi, mean_survival(chi)]);
    }

    Ok(FigureTables {
        fig1,
        fig2,
        fig3,
        fig4,
    })
}

/// Writes fig1.csv … fig4.csv into `dir`, creating it if needed.
pub fn write_figures(dir: &Path, tables: &FigureTables) -> io::Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    for (name, table) in tables.named() {
        let path = dir.join(name);
        table.write_to(BufWriter::new(fs::File::create(&path)?))?;
        written.push(path);
    }
    Ok(written)
}
