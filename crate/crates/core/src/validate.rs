//! Self-check harness behind the `validate` subcommand: random blocks are
//! propagated by the closed-form and eigendecomposition routes and compared,
//! and the indicator closed forms are compared with grid and quadrature
//! evaluations of the survival curve.

use std::f64::consts::TAU;
use std::fmt;

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dynamics::{
    build_block, level_probabilities, propagate_analytic, propagate_oracle, survival_probability,
    BlockSystem, Level, VibronicState,
};
use crate::error::Result;
use crate::fock::{factorial_ratio_root, CouplingConstants, ModeVector, SidebandPattern};
use crate::indicators::{self, numeric};

pub type Propagator = fn(&BlockSystem, &VibronicState, f64) -> Result<VibronicState>;

pub const AMPLITUDE_TOLERANCE: f64 = 1e-10;
pub const NORM_TOLERANCE: f64 = 1e-12;
pub const SURVIVAL_TOLERANCE: f64 = 1e-12;
pub const MIN_TOLERANCE: f64 = 1e-6;
pub const MEAN_TOLERANCE: f64 = 1e-8;
/// Grid resolution of the indicator cross-checks, per period.
pub const GRID_SAMPLES: usize = 100_000;
/// Largest |χ| drawn for random blocks.
pub const MAX_CHI: f64 = 20.0;

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub cases: usize,
    pub max_deviation: f64,
    pub tolerance: f64,
}

impl Check {
    fn new(name: &'static str, tolerance: f64) -> Self {
        Check {
            name,
            cases: 0,
            max_deviation: 0.0,
            tolerance,
        }
    }

    fn record(&mut self, deviation: f64) {
        self.cases += 1;
        // NaN must fail the check.
        if deviation.is_nan() || deviation > self.max_deviation {
            self.max_deviation = if deviation.is_nan() {
                f64::INFINITY
            } else {
                deviation
            };
        }
    }

    pub fn passed(&self) -> bool {
        self.cases > 0 && self.max_deviation <= self.tolerance
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ValidationReport {
    pub seed: u64,
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "validation (seed {})", self.seed)?;
        for c in &self.checks {
            writeln!(
                f,
                "  [{}] {:<28} cases={:<6} max_dev={:.3e} tol={:.0e}",
                if c.passed() { "PASS" } else { "FAIL" },
                c.name,
                c.cases,
                c.max_deviation,
                c.tolerance
            )?;
        }
        write!(
            f,
            "{}",
            if self.passed() {
                "all checks passed"
            } else {
                "validation FAILED"
            }
        )
    }
}

/// A random block together with the state and time it is tested at.
#[derive(Clone, Debug)]
pub struct RandomCase {
    pub n: ModeVector,
    pub pattern: SidebandPattern,
    pub block: BlockSystem,
    pub initial: VibronicState,
    pub t: f64,
}

fn random_triple<R: Rng>(rng: &mut R, max: u32) -> ModeVector {
    ModeVector::new(
        rng.gen_range(0..=max),
        rng.gen_range(0..=max),
        rng.gen_range(0..=max),
    )
}

fn random_phase<R: Rng>(rng: &mut R) -> C64 {
    C64::from_polar(1.0, rng.gen_range(0.0..TAU))
}

/// Draws a block of the requested dimension with |χ| uniform in [0, MAX_CHI]
/// (three-level blocks), a random normalized state and t ∈ [-3T, 3T] where T
/// is the block period.
pub fn random_case<R: Rng>(rng: &mut R, dimension: usize) -> RandomCase {
    let r = random_triple(rng, 2);
    let l = random_triple(rng, 2);
    let extra = random_triple(rng, 2);
    let mut n = ModeVector::new(
        r.0[0] + extra.0[0],
        r.0[1] + extra.0[1],
        r.0[2] + extra.0[2],
    );
    let mut l = l;
    let mut r = r;
    match dimension {
        1 => {
            let axis = rng.gen_range(0..3);
            r.0[axis] = n.0[axis] + 1 + rng.gen_range(0..2);
        }
        2 => {
            let axis = rng.gen_range(0..3);
            l.0[axis] = extra.0[axis] + 1 + rng.gen_range(0..2);
        }
        _ => {
            for i in 0..3 {
                n.0[i] += l.0[i];
            }
        }
    }
    let pattern = SidebandPattern::new(r, l);

    let alpha_mag = rng.gen_range(0.2..2.0);
    let gamma1 = match factorial_ratio_root(&n, &r) {
        Ok(root) => random_phase(rng) * (alpha_mag / root),
        Err(_) => random_phase(rng) * alpha_mag,
    };
    let chi = rng.gen_range(0.0..MAX_CHI);
    let gamma2 = match n.checked_sub(&r).and_then(|m| factorial_ratio_root(&m, &l)) {
        Ok(root) => random_phase(rng) * (chi * alpha_mag / root),
        Err(_) => random_phase(rng) * rng.gen_range(0.0..2.0),
    };
    let couplings = CouplingConstants::new(gamma1, gamma2).expect("finite couplings");
    let block = build_block(&n, &pattern, &couplings).expect("small occupations cannot overflow");

    let amplitudes: Vec<C64> = (0..block.dimension())
        .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let initial = VibronicState::normalized(amplitudes)
        .unwrap_or_else(|_| VibronicState::basis_state(block.dimension(), Level::One).unwrap());

    let period = if block.omega() > 0.0 {
        TAU / block.omega()
    } else {
        1.0
    };
    let t = rng.gen_range(-3.0 * period..3.0 * period);
    RandomCase {
        n,
        pattern,
        block,
        initial,
        t,
    }
}

/// Dimension of the k-th random case: mostly three-level blocks, with every
/// tenth two-level and every twenty-fifth one-level.
pub fn case_dimension(k: usize) -> usize {
    if k % 25 == 24 {
        1
    } else if k % 10 == 9 {
        2
    } else {
        3
    }
}

pub fn run_validation(seed: u64, cases: usize) -> ValidationReport {
    run_validation_with(seed, cases, propagate_analytic)
}

/// Runs every check with `analytic` standing in for the closed-form
/// propagator.
pub fn run_validation_with(seed: u64, cases: usize, analytic: Propagator) -> ValidationReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut oracle = Check::new("oracle equivalence", AMPLITUDE_TOLERANCE);
    let mut unitarity = Check::new("unitarity", NORM_TOLERANCE);
    let mut periodicity = Check::new("periodicity", AMPLITUDE_TOLERANCE);
    let mut reversibility = Check::new("reversibility", AMPLITUDE_TOLERANCE);
    let mut survival = Check::new("survival reduction", SURVIVAL_TOLERANCE);
    let mut rabi = Check::new("two-level Rabi limit", SURVIVAL_TOLERANCE);

    let fail = f64::INFINITY;
    for k in 0..cases {
        let case = random_case(&mut rng, case_dimension(k));
        let block = &case.block;
        let t = case.t;

        let fast = analytic(block, &case.initial, t);
        let slow = propagate_oracle(block, &case.initial, t);
        let (fast, slow) = match (fast, slow) {
            (Ok(a), Ok(b)) => (a, b),
            _ => {
                oracle.record(fail);
                continue;
            }
        };
        oracle.record(fast.max_deviation(&slow));
        unitarity.record((fast.norm_sqr().sqrt() - 1.0).abs());

        if block.omega() > 0.0 {
            let period = TAU / block.omega();
            let later =
                analytic(block, &case.initial, t + period).map_or(fail, |s| s.max_deviation(&fast));
            periodicity.record(later);
        }
        let back = analytic(block, &fast, -t).map_or(fail, |s| s.max_deviation(&case.initial));
        reversibility.record(back);

        let start =
            VibronicState::basis_state(block.dimension(), Level::One).expect("level 1 exists");
        let evolved = match analytic(block, &start, t) {
            Ok(s) => s,
            Err(_) => {
                survival.record(fail);
                continue;
            }
        };
        let p1 = level_probabilities(&evolved)[0];
        match (block.dimension(), block.chi()) {
            (3, Ok(chi)) => {
                survival.record(
                    (start.inner(&evolved).norm_sqr()
                        - survival_probability(chi.norm(), block.omega(), t))
                    .abs(),
                );
            }
            (2, _) => {
                let alpha = block.alpha().map_or(0.0, |a| a.norm());
                rabi.record((p1 - (alpha * t).cos().powi(2)).abs());
            }
            _ => {}
        }
    }

    let mut checks = vec![
        oracle,
        unitarity,
        periodicity,
        reversibility,
        survival,
        rabi,
    ];
    checks.extend(indicator_checks());
    ValidationReport { seed, checks }
}

/// Closed-form indicators against grid and quadrature over one period.
fn indicator_checks() -> Vec<Check> {
    let mut minimum = Check::new("m(chi) vs grid", MIN_TOLERANCE);
    let mut argmin = Check::new("t_m(chi) vs grid (steps)", 1.0);
    let mut mean = Check::new("mean survival vs quadrature", MEAN_TOLERANCE);
    let mut measure = Check::new("S(chi,eps) vs grid (T_p)", 1e-4);
    let mut normalization = Check::new("mean level normalization", 1e-12);

    let chis: Vec<f64> = (0..=16)
        .map(|k| 10f64.powf(-2.0 + 0.25 * k as f64))
        .collect();
    let step = TAU / GRID_SAMPLES as f64;
    for &chi in &chis {
        let (grid_min, grid_phase) = numeric::grid_minimum(chi, GRID_SAMPLES);
        minimum.record((grid_min - indicators::min_survival(chi)).abs());
        let closed_phase =
            indicators::time_of_min(1.0, chi).unwrap() * indicators::rabi_frequency(1.0, chi);
        argmin.record((grid_phase - closed_phase).abs() / step);
        mean.record(
            (numeric::trapezoid_mean(chi, GRID_SAMPLES) - indicators::mean_survival(chi)).abs(),
        );
        normalization.record(
            (indicators::mean_level_probabilities(chi)
                .iter()
                .sum::<f64>()
                - 1.0)
                .abs(),
        );
    }
    for &chi in &[0.0, 0.3, 0.7, 1.0, 2.0, 5.0] {
        for &eps in &[0.01, 0.05, 0.2] {
            let period = indicators::poincare_time(1.0, chi).unwrap();
            let closed = indicators::sub_threshold_measure(chi, eps, 1.0).unwrap() / period;
            let grid = numeric::grid_sub_threshold_fraction(chi, eps, GRID_SAMPLES);
            measure.record((closed - grid).abs());
        }
    }
    vec![minimum, argmin, mean, measure, normalization]
}
