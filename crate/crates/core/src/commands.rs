//! Tables produced by the `evolve`, `survival`, `indicators` and `sweep`
//! subcommands.

use crate::config::{ConfigError, RunConfig};
use crate::csv::Table;
use crate::dynamics::{
    level_probabilities, propagate_analytic, survival_probability, BlockSystem, Level,
    VibronicState,
};
use crate::indicators::{self, chi_grid, IndicatorReport};
use crate::HBAR;

pub const SCALED_UNITS: &str =
    "units: hbar = 1; t_scaled and *_scaled columns in 1/omega(0), omega(0) = |alpha|/hbar; *_raw columns in internal time units";

/// ω(0) for a block, or 1/ħ when level 1 is decoupled (times then stay in
/// internal units).
fn time_scale(block: &BlockSystem) -> (f64, &'static str) {
    match block.alpha() {
        Some(a) if a.norm() > 0.0 => (a.norm() / HBAR, SCALED_UNITS),
        _ => (
            1.0 / HBAR,
            "units: hbar = 1; alpha = 0 so t_scaled is in internal time units",
        ),
    }
}

/// Level occupations and amplitudes of the configured initial state over the
/// time grid.
pub fn evolve_table(config: &RunConfig) -> Result<Table, ConfigError> {
    let block = config.block()?;
    let initial = config.initial_state(block.dimension())?;
    let (w0, units) = time_scale(&block);
    let mut table = Table::new(
        units,
        &[
            "t_scaled", "P1", "P2", "P3", "re1", "im1", "re2", "im2", "re3", "im3",
        ],
    );
    for t_scaled in config.time.points() {
        let state = propagate_analytic(&block, &initial, t_scaled / w0)?;
        let p = level_probabilities(&state);
        let mut cells: Vec<Option<f64>> = vec![Some(t_scaled), Some(p[0]), Some(p[1]), Some(p[2])];
        for k in 0..3 {
            match state.amplitudes().get(k) {
                Some(c) => cells.extend([Some(c.re), Some(c.im)]),
                None => cells.extend([None, None]),
            }
        }
        table.push_cells(cells);
    }
    Ok(table)
}

/// Survival probability of |n,1⟩: closed form, χ = 0 reference, and the
/// value obtained by propagating the block state.
pub fn survival_table(config: &RunConfig) -> Result<Table, ConfigError> {
    let (chi, alpha) = config.chi_and_alpha()?;
    let block = config.block()?;
    let initial = VibronicState::basis_state(block.dimension(), Level::One)?;
    let w0 = alpha / HBAR;
    let omega = indicators::rabi_frequency(alpha, chi);
    let mut table = Table::new(
        SCALED_UNITS,
        &["t_scaled", "P_chi", "P_ref", "P_propagated", "advantage"],
    );
    for t_scaled in config.time.points() {
        let t = t_scaled / w0;
        let evolved = propagate_analytic(&block, &initial, t)?;
        table.push(&[
            t_scaled,
            survival_probability(chi, omega, t),
            survival_probability(0.0, w0, t),
            initial.inner(&evolved).norm_sqr(),
            indicators::survival_advantage(chi, alpha, t),
        ]);
    }
    Ok(table)
}

const REPORT_COLUMNS: [&str; 16] = [
    "chi",
    "omega_scaled",
    "T_p_raw",
    "T_p_scaled",
    "m",
    "t_m_raw",
    "t_m_scaled",
    "P_mean",
    "P2_mean",
    "P3_mean",
    "epsilon",
    "S_scaled",
    "S_over_T_p",
    "t_chi_scaled",
    "t_chi_over_T_p",
    "gqze_present",
];

fn report_row(r: &IndicatorReport) -> Vec<Option<f64>> {
    let w0 = r.omega0();
    vec![
        Some(r.chi),
        Some(r.omega / w0),
        Some(r.poincare_time),
        Some(r.scaled(r.poincare_time)),
        Some(r.min_survival),
        Some(r.time_of_min),
        Some(r.scaled(r.time_of_min)),
        Some(r.mean_survival),
        Some(r.mean_level2),
        Some(r.mean_level3),
        Some(r.epsilon),
        Some(r.scaled(r.sub_threshold)),
        Some(r.sub_threshold / r.poincare_time),
        r.zeno.map(|z| r.scaled(z.t_chi)),
        r.zeno.map(|z| z.ratio),
        Some(if r.zeno.is_some_and(|z| z.present) {
            1.0
        } else {
            0.0
        }),
    ]
}

pub fn reports_table(reports: &[IndicatorReport]) -> Table {
    let mut table = Table::new(SCALED_UNITS, &REPORT_COLUMNS);
    for r in reports {
        table.push_cells(report_row(r));
    }
    table
}

/// All indicators for the configured block or χ override.
pub fn indicators_table(config: &RunConfig) -> Result<Table, ConfigError> {
    let (chi, alpha) = config.chi_and_alpha()?;
    let report = indicators::indicator_report(chi, config.epsilon, alpha, config.order_threshold)?;
    Ok(reports_table(&[report]))
}

/// Indicators over χ = 0, step, …, chi_max. |α| comes from the configured
/// block when it has one, otherwise it is the energy unit.
pub fn sweep_table(config: &RunConfig) -> Result<Table, ConfigError> {
    let alpha = config.chi_and_alpha().map(|(_, a)| a).unwrap_or(1.0);
    let alpha = if alpha > 0.0 { alpha } else { 1.0 };
    let chis = chi_grid(config.sweep_chi_max, config.sweep_chi_step)?;
    let reports =
        indicators::chi_sweep_with_threshold(&chis, config.epsilon, alpha, config.order_threshold)?;
    Ok(reports_table(&reports))
}
