//! Zeno indicators for the three-level block started in |n,1⟩.
//!
//! Everything here depends on the couplings only through |α| and |χ| = |β/α|.
//! Times are raw internal times (ħ = 1); multiply by ω(0) = |α|/ħ for the
//! scaled times written by the CLI.
//!
//! The minimum time t_m is not differentiable at |χ| = 1, where two minima
//! and the maximum between them of P^χ(t) coalesce at ωt = π.

use std::f64::consts::{PI, TAU};

use rayon::prelude::*;

use crate::dynamics::survival_probability;
use crate::error::{Error, Result};
use crate::HBAR;

/// Default fraction of T_p(χ) the Zeno interval must reach.
pub const DEFAULT_ORDER_THRESHOLD: f64 = 0.5;

/// Grid resolution per period used by [`gqze_interval`].
pub const CROSSING_GRID_PER_PERIOD: usize = 10_000;

fn check_alpha(alpha: f64) -> Result<f64> {
    let alpha = alpha.abs();
    if alpha == 0.0 {
        return Err(Error::DegenerateCoupling);
    }
    if !alpha.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "|alpha| must be finite, got {alpha}"
        )));
    }
    Ok(alpha)
}

fn check_chi(chi: f64) -> Result<f64> {
    if !chi.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "|chi| must be finite, got {chi}"
        )));
    }
    Ok(chi.abs())
}

/// ω(χ) = (|α|/ħ)√(1+|χ|²).
pub fn rabi_frequency(alpha: f64, chi: f64) -> f64 {
    alpha.abs() / HBAR * (1.0 + chi * chi).sqrt()
}

/// T_p(χ) = 2πħ/(|α|√(1+|χ|²)).
pub fn poincare_time(alpha: f64, chi: f64) -> Result<f64> {
    let alpha = check_alpha(alpha)?;
    let chi = check_chi(chi)?;
    Ok(TAU / rabi_frequency(alpha, chi))
}

/// m(χ): 0 for |χ| ≤ 1, ((|χ|²-1)/(|χ|²+1))² above.
pub fn min_survival(chi: f64) -> f64 {
    let c2 = chi * chi;
    if c2 <= 1.0 {
        0.0
    } else {
        ((c2 - 1.0) / (c2 + 1.0)).powi(2)
    }
}

/// First time at which P^χ(t) reaches m(χ).
pub fn time_of_min(alpha: f64, chi: f64) -> Result<f64> {
    let alpha = check_alpha(alpha)?;
    let chi = check_chi(chi)?;
    let c2 = chi * chi;
    let phase = if c2 <= 1.0 { (-c2).acos() } else { PI };
    Ok(phase / rabi_frequency(alpha, chi))
}

/// P̄(χ) = (|χ|⁴ + ½)/(1+|χ|²)², the period average of P^χ(t).
pub fn mean_survival(chi: f64) -> f64 {
    let c2 = chi * chi;
    (c2 * c2 + 0.5) / ((1.0 + c2) * (1.0 + c2))
}

/// Period averages (P̄, P̄₂, P̄₃) of the three level occupations from |n,1⟩.
///
/// |c₂|² = sin²ωt/(1+χ²) averages to 1/(2(1+χ²)); |c₃|² = χ²(1-cos ωt)²/(1+χ²)²
/// averages to (3/2)χ²/(1+χ²)².
pub fn mean_level_probabilities(chi: f64) -> [f64; 3] {
    let c2 = chi * chi;
    let s = 1.0 + c2;
    [mean_survival(chi), 0.5 / s, 1.5 * c2 / (s * s)]
}

/// S(χ, ε): total time within one period [0, T_p] where P^χ(t) < P̄(χ) - ε.
///
/// P^χ < p holds exactly when cos ωt lies strictly between
/// -√p(1+χ²) - χ² and √p(1+χ²) - χ²; each such cos-window (a, b) ⊂ [-1, 1]
/// is occupied for 2(arccos a - arccos b) of phase per period. For |χ| < 1
/// both roots can fall inside [-1, 1].
pub fn sub_threshold_measure(chi: f64, epsilon: f64, alpha: f64) -> Result<f64> {
    let alpha = check_alpha(alpha)?;
    let chi = check_chi(chi)?;
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "epsilon must be positive and finite, got {epsilon}"
        )));
    }
    let threshold = mean_survival(chi) - epsilon;
    if threshold <= 0.0 {
        return Ok(0.0);
    }
    let c2 = chi * chi;
    let reach = threshold.sqrt() * (1.0 + c2);
    let upper = (reach - c2).min(1.0);
    let lower = (-reach - c2).max(-1.0);
    if upper <= lower {
        return Ok(0.0);
    }
    let phase = 2.0 * (lower.acos() - upper.acos());
    Ok(phase / rabi_frequency(alpha, chi))
}

/// sin u - sin(su)/s for s = √(1+χ²), accurate to relative rounding at
/// small u where the leading terms cancel.
fn sine_mismatch(u: f64, chi: f64) -> f64 {
    let s = (1.0 + chi * chi).sqrt();
    if (s * u).abs() >= 0.5 {
        return u.sin() - (s * u).sin() / s;
    }
    // Σ_k (-1)^k u^{2k+1}/(2k+1)! (1 - s^{2k}); the k = 0 term vanishes.
    let log_s2 = (chi * chi).ln_1p();
    let mut power = u; // u^{2k+1}/(2k+1)!
    let mut total = 0.0;
    for k in 1..40 {
        let kf = k as f64;
        power *= -u * u / ((2.0 * kf) * (2.0 * kf + 1.0));
        let term = power * -(kf * log_s2).exp_m1();
        total += term;
        if term.abs() <= f64::EPSILON * total.abs() {
            break;
        }
    }
    total
}

/// P^χ(t) - P⁰(t) with both curves sharing ω(0) = |α|/ħ.
///
/// Written as (A - B)(A + B) with A - B = 2(sin u - sin(su)/s)(sin u + sin(su)/s),
/// u = ω(0)t/2, so the fourth-order advantage χ²(ω(0)t)⁴/12 near t = 0 is not
/// lost to cancellation.
pub fn survival_advantage(chi: f64, alpha: f64, t: f64) -> f64 {
    let chi = chi.abs();
    let w0 = alpha.abs() / HBAR;
    let s = (1.0 + chi * chi).sqrt();
    let u = w0 * t / 2.0;
    let a = (chi * chi + (s * w0 * t).cos()) / (1.0 + chi * chi);
    let b = (w0 * t).cos();
    let diff = 2.0 * sine_mismatch(u, chi) * (u.sin() + (s * u).sin() / s);
    diff * (a + b)
}

/// Interval [0, t_χ] on which P^χ(t) > P⁰(t).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ZenoInterval {
    /// First crossing time t_χ > 0.
    pub t_chi: f64,
    /// t_χ / T_p(χ).
    pub ratio: f64,
    /// True when the ratio reaches the requested order threshold.
    pub present: bool,
}

/// Locates the first crossing t_χ of P^χ and P⁰ after t = 0.
///
/// The advantage is scanned on a grid of [`CROSSING_GRID_PER_PERIOD`] points
/// per T_p(χ) over (0, T_p(0)/2], where P⁰ returns to 1 so a crossing always
/// exists, then refined by bisection. Returns `None` for χ = 0, where the two
/// curves coincide.
pub fn gqze_interval(chi: f64, alpha: f64, order_threshold: f64) -> Result<Option<ZenoInterval>> {
    let alpha = check_alpha(alpha)?;
    let chi = check_chi(chi)?;
    if !(order_threshold > 0.0 && order_threshold <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "order threshold must lie in (0, 1], got {order_threshold}"
        )));
    }
    if chi == 0.0 {
        return Ok(None);
    }
    let period = poincare_time(alpha, chi)?;
    let reference_period = poincare_time(alpha, 0.0)?;
    let step = period.min(reference_period) / CROSSING_GRID_PER_PERIOD as f64;
    let horizon = reference_period / 2.0;
    let advantage = |t: f64| survival_advantage(chi, alpha, t);

    let mut k = 1usize;
    let (mut lo, mut hi) = loop {
        let t = (k as f64 * step).min(horizon);
        if advantage(t) <= 0.0 || t >= horizon {
            break ((k - 1) as f64 * step, t);
        }
        k += 1;
    };
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if advantage(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let t_chi = hi;
    let ratio = t_chi / period;
    Ok(Some(ZenoInterval {
        t_chi,
        ratio,
        present: ratio >= order_threshold,
    }))
}

/// All indicators for one |χ|.
#[derive(Clone, Debug, PartialEq)]
pub struct IndicatorReport {
    pub chi: f64,
    /// |α| the raw times refer to.
    pub alpha: f64,
    pub omega: f64,
    pub poincare_time: f64,
    pub min_survival: f64,
    pub time_of_min: f64,
    pub mean_survival: f64,
    pub mean_level2: f64,
    pub mean_level3: f64,
    pub epsilon: f64,
    pub sub_threshold: f64,
    pub zeno: Option<ZenoInterval>,
}

impl IndicatorReport {
    /// ω(0) = |α|/ħ, the scale of all reported times.
    pub fn omega0(&self) -> f64 {
        self.alpha / HBAR
    }

    /// Converts a raw time to 1/ω(0) units.
    pub fn scaled(&self, t: f64) -> f64 {
        t * self.omega0()
    }
}

pub fn indicator_report(
    chi: f64,
    epsilon: f64,
    alpha: f64,
    order_threshold: f64,
) -> Result<IndicatorReport> {
    let alpha = check_alpha(alpha)?;
    let chi = check_chi(chi)?;
    let [mean, mean2, mean3] = mean_level_probabilities(chi);
    Ok(IndicatorReport {
        chi,
        alpha,
        omega: rabi_frequency(alpha, chi),
        poincare_time: poincare_time(alpha, chi)?,
        min_survival: min_survival(chi),
        time_of_min: time_of_min(alpha, chi)?,
        mean_survival: mean,
        mean_level2: mean2,
        mean_level3: mean3,
        epsilon,
        sub_threshold: sub_threshold_measure(chi, epsilon, alpha)?,
        zeno: gqze_interval(chi, alpha, order_threshold)?,
    })
}

/// One report per χ value, in input order, with the default order threshold.
pub fn chi_sweep(chi_values: &[f64], epsilon: f64, alpha: f64) -> Result<Vec<IndicatorReport>> {
    chi_sweep_with_threshold(chi_values, epsilon, alpha, DEFAULT_ORDER_THRESHOLD)
}

pub fn chi_sweep_with_threshold(
    chi_values: &[f64],
    epsilon: f64,
    alpha: f64,
    order_threshold: f64,
) -> Result<Vec<IndicatorReport>> {
    chi_values
        .par_iter()
        .map(|&chi| indicator_report(chi, epsilon, alpha, order_threshold))
        .collect()
}

/// Values k·step for k = 0, 1, … up to `max`, without accumulating rounding.
pub fn chi_grid(max: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0 && step.is_finite() && max >= 0.0 && max.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "chi grid needs max >= 0 and step > 0, got max={max}, step={step}"
        )));
    }
    let count = (max / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|k| k as f64 * step).collect())
}

/// Grid and quadrature evaluations of the survival curve over one period,
/// used to cross-check the closed forms. All functions work in the phase
/// θ = ωt ∈ [0, 2π].
pub mod numeric {
    use super::*;

    fn survival_at_phase(chi: f64, theta: f64) -> f64 {
        survival_probability(chi, 1.0, theta)
    }

    /// Minimum of P over `intervals + 1` equally spaced phases and the phase
    /// of its first occurrence.
    ///
    /// Two grid minima count as the same value when they differ by less than
    /// the discretization floor (2π/intervals)², so the earlier of two
    /// symmetric minima is reported.
    pub fn grid_minimum(chi: f64, intervals: usize) -> (f64, f64) {
        let h = TAU / intervals as f64;
        let values: Vec<f64> = (0..=intervals)
            .map(|k| survival_at_phase(chi, k as f64 * h))
            .collect();
        let global = values.iter().copied().fold(f64::INFINITY, f64::min);
        let floor = h * h;
        let first = (1..intervals)
            .find(|&k| {
                values[k] <= values[k - 1]
                    && values[k] <= values[k + 1]
                    && values[k] <= global + floor
            })
            .unwrap_or_else(|| values.iter().position(|&v| v == global).unwrap_or(0));
        (global, first as f64 * h)
    }

    /// Trapezoidal average of P over one period.
    pub fn trapezoid_mean(chi: f64, panels: usize) -> f64 {
        let h = TAU / panels as f64;
        let interior: f64 = (1..panels)
            .map(|k| survival_at_phase(chi, k as f64 * h))
            .sum();
        let ends = 0.5 * (survival_at_phase(chi, 0.0) + survival_at_phase(chi, TAU));
        (interior + ends) / panels as f64
    }

    /// Fraction of one period where P < P̄ - ε, by the midpoint rule.
    pub fn grid_sub_threshold_fraction(chi: f64, epsilon: f64, intervals: usize) -> f64 {
        let h = TAU / intervals as f64;
        let threshold = mean_survival(chi) - epsilon;
        let below = (0..intervals)
            .filter(|&k| survival_at_phase(chi, (k as f64 + 0.5) * h) < threshold)
            .count();
        below as f64 / intervals as f64
    }
}
