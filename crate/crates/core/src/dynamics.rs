//! Invariant blocks of the sideband Hamiltonian
//!
//! ```text
//! H₁ = γ₁ a^r |2⟩⟨1| + γ₂ a^l |3⟩⟨2| + h.c.
//! ```
//!
//! and their exact propagation in the interaction picture. H₁ only connects
//! the chain |n,1⟩ → |n-r,2⟩ → |n-r-l,3⟩, so every Fock state seeds a block
//! of dimension 1, 2 or 3 whose Hamiltonian is
//!
//! ```text
//! [ 0   α   0 ]
//! [ α*  0   β ]
//! [ 0   β*  0 ]
//! ```
//!
//! (truncated to the leading 1×1 or 2×2 corner for smaller blocks). Two
//! independent propagators are provided: [`propagate_analytic`] evaluates the
//! closed-form evolution of each basis state, [`propagate_oracle`] builds
//! U(t) = Σ e^{-iλt}|v⟩⟨v| from the explicit eigensystem {0, ±ε̃}.
//! Lab-frame phases from the free Hamiltonian are not tracked; every
//! observable computed here is picture-independent.

use std::fmt;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::fock::{coupling_alpha, coupling_beta, CouplingConstants, ModeVector, SidebandPattern};
use crate::HBAR;

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
const ONE: C64 = C64 { re: 1.0, im: 0.0 };

/// Tolerance on Σ|c|² accepted by [`VibronicState::new`].
pub const NORM_TOLERANCE: f64 = 1e-12;

/// Internal electronic level σ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Level {
    One,
    Two,
    Three,
}

impl Level {
    pub const ALL: [Level; 3] = [Level::One, Level::Two, Level::Three];

    /// 0-based position in a block's basis.
    pub fn index(self) -> usize {
        match self {
            Level::One => 0,
            Level::Two => 1,
            Level::Three => 2,
        }
    }

    pub fn number(self) -> u8 {
        self.index() as u8 + 1
    }

    pub fn from_number(sigma: u8) -> Option<Level> {
        match sigma {
            1 => Some(Level::One),
            2 => Some(Level::Two),
            3 => Some(Level::Three),
            _ => None,
        }
    }
}

/// A vibronic basis ket |n, σ⟩.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BasisLabel {
    pub modes: ModeVector,
    pub level: Level,
}

impl fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [x, y, z] = self.modes.0;
        write!(f, "|{x},{y},{z};{}>", self.level.number())
    }
}

/// Dimension and basis of the block seeded by |n,1⟩.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockShape {
    basis: Vec<BasisLabel>,
}

impl BlockShape {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BasisLabel] {
        &self.basis
    }
}

/// Follows the chain |n,1⟩, |n-r,2⟩, |n-r-l,3⟩ up to the first state with a
/// negative occupation.
pub fn classify_block(n: &ModeVector, pattern: &SidebandPattern) -> BlockShape {
    let mut basis = vec![BasisLabel {
        modes: *n,
        level: Level::One,
    }];
    if let Ok(middle) = n.checked_sub(&pattern.r) {
        basis.push(BasisLabel {
            modes: middle,
            level: Level::Two,
        });
        if let Ok(last) = middle.checked_sub(&pattern.l) {
            basis.push(BasisLabel {
                modes: last,
                level: Level::Three,
            });
        }
    }
    BlockShape { basis }
}

/// An invariant block of H₁ with its couplings.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockSystem {
    basis: Vec<BasisLabel>,
    alpha: Option<C64>,
    beta: Option<C64>,
}

impl BlockSystem {
    /// Block with explicit couplings, bypassing the Fock algebra. The basis
    /// dimension must match the couplings given: α for dimension ≥ 2, β for
    /// dimension 3.
    pub fn from_couplings(
        basis: Vec<BasisLabel>,
        alpha: Option<C64>,
        beta: Option<C64>,
    ) -> Result<Self> {
        let ok = match basis.len() {
            1 => alpha.is_none() && beta.is_none(),
            2 => alpha.is_some() && beta.is_none(),
            3 => alpha.is_some() && beta.is_some(),
            _ => false,
        };
        if !ok {
            return Err(Error::InvalidParameter(format!(
                "a block of dimension {} cannot carry alpha={alpha:?}, beta={beta:?}",
                basis.len()
            )));
        }
        Ok(BlockSystem { basis, alpha, beta })
    }

    /// A three-level block on placeholder labels, for studies that only fix
    /// α and β.
    pub fn three_level(alpha: C64, beta: C64) -> Self {
        let basis = Level::ALL
            .iter()
            .map(|&level| BasisLabel {
                modes: ModeVector::ZERO,
                level,
            })
            .collect();
        BlockSystem {
            basis,
            alpha: Some(alpha),
            beta: Some(beta),
        }
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BasisLabel] {
        &self.basis
    }

    pub fn alpha(&self) -> Option<C64> {
        self.alpha
    }

    pub fn beta(&self) -> Option<C64> {
        self.beta
    }

    fn alpha_or_zero(&self) -> C64 {
        self.alpha.unwrap_or(ZERO)
    }

    fn beta_or_zero(&self) -> C64 {
        self.beta.unwrap_or(ZERO)
    }

    /// ε̃ = √(|α|² + |β|²), absent couplings counted as zero.
    pub fn epsilon_tilde(&self) -> f64 {
        (self.alpha_or_zero().norm_sqr() + self.beta_or_zero().norm_sqr()).sqrt()
    }

    /// Rabi angular frequency ω = ε̃/ħ.
    pub fn omega(&self) -> f64 {
        self.epsilon_tilde() / HBAR
    }

    /// True when level 1 is decoupled, so that survival indicators are undefined.
    pub fn is_degenerate(&self) -> bool {
        self.alpha_or_zero().norm_sqr() == 0.0
    }

    /// χ = β/α for a three-level block.
    pub fn chi(&self) -> Result<C64> {
        if self.dimension() != 3 {
            return Err(Error::InvalidParameter(format!(
                "chi is defined for three-level blocks, this block has dimension {}",
                self.dimension()
            )));
        }
        crate::fock::chi_ratio(self.alpha_or_zero(), self.beta_or_zero())
    }

    /// Block Hamiltonian as a dense matrix of size `dimension`.
    pub fn hamiltonian(&self) -> Vec<Vec<C64>> {
        let full = [
            [ZERO, self.alpha_or_zero(), ZERO],
            [self.alpha_or_zero().conj(), ZERO, self.beta_or_zero()],
            [ZERO, self.beta_or_zero().conj(), ZERO],
        ];
        let d = self.dimension();
        full[..d].iter().map(|row| row[..d].to_vec()).collect()
    }
}

/// Builds the block seeded by |n,1⟩, with α and β for the transitions that
/// exist. Truncation never fails; only overflow of the matrix elements does.
pub fn build_block(
    n: &ModeVector,
    pattern: &SidebandPattern,
    couplings: &CouplingConstants,
) -> Result<BlockSystem> {
    let shape = classify_block(n, pattern);
    let alpha = match shape.dimension() {
        1 => None,
        _ => Some(coupling_alpha(couplings.gamma1, n, &pattern.r)?),
    };
    let beta = match shape.dimension() {
        3 => Some(coupling_beta(couplings.gamma2, n, &pattern.r, &pattern.l)?),
        _ => None,
    };
    Ok(BlockSystem {
        basis: shape.basis,
        alpha,
        beta,
    })
}

/// Complex amplitudes over a block's basis.
#[derive(Clone, Debug, PartialEq)]
pub struct VibronicState {
    amplitudes: Vec<C64>,
}

impl VibronicState {
    /// Accepts amplitudes whose squared norm is 1 within [`NORM_TOLERANCE`].
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.is_empty() || amplitudes.len() > 3 {
            return Err(Error::InvalidParameter(format!(
                "a block state has 1 to 3 amplitudes, got {}",
                amplitudes.len()
            )));
        }
        let state = VibronicState { amplitudes };
        let deviation = (state.norm_sqr() - 1.0).abs();
        if deviation.is_nan() || deviation > NORM_TOLERANCE {
            return Err(Error::InvalidParameter(format!(
                "state is not normalized: |norm^2 - 1| = {deviation:e}"
            )));
        }
        Ok(state)
    }

    /// Rescales arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(amplitudes: Vec<C64>) -> Result<Self> {
        let norm = amplitudes.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::InvalidParameter(
                "cannot normalize a zero state".into(),
            ));
        }
        Self::new(amplitudes.into_iter().map(|c| c / norm).collect())
    }

    /// The basis state at position `level` in a block of size `dimension`.
    pub fn basis_state(dimension: usize, level: Level) -> Result<Self> {
        if level.index() >= dimension || dimension > 3 {
            return Err(Error::InvalidParameter(format!(
                "level {} is not part of a block of dimension {dimension}",
                level.number()
            )));
        }
        let mut amplitudes = vec![ZERO; dimension];
        amplitudes[level.index()] = ONE;
        Ok(VibronicState { amplitudes })
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn dimension(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm_sqr()).sum()
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &VibronicState) -> C64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Largest |aᵢ - bᵢ| over the amplitudes.
    pub fn max_deviation(&self, other: &VibronicState) -> f64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

fn check_dimensions(block: &BlockSystem, state: &VibronicState) -> Result<()> {
    if block.dimension() != state.dimension() {
        return Err(Error::DimensionMismatch {
            state: state.dimension(),
            block: block.dimension(),
        });
    }
    Ok(())
}

fn apply(matrix: &[[C64; 3]; 3], state: &VibronicState) -> VibronicState {
    let d = state.dimension();
    let amplitudes = (0..d)
        .map(|i| (0..d).map(|j| matrix[i][j] * state.amplitudes[j]).sum())
        .collect();
    VibronicState { amplitudes }
}

/// Closed-form evolution operator of a block, column k being the image of
/// the k-th basis state. Dimension-2 blocks use the three-level formulas
/// with β = 0 restricted to the leading 2×2 corner.
pub fn analytic_evolution(block: &BlockSystem, t: f64) -> [[C64; 3]; 3] {
    let mut u = [[ZERO; 3]; 3];
    let eps = block.epsilon_tilde();
    if block.dimension() == 1 || eps == 0.0 || t == 0.0 {
        for (i, row) in u.iter_mut().enumerate() {
            row[i] = ONE;
        }
        return u;
    }
    let a = block.alpha_or_zero();
    let b = block.beta_or_zero();
    let (a2, b2, e2) = (a.norm_sqr(), b.norm_sqr(), eps * eps);
    let wt = block.omega() * t;
    let (sin, cos) = wt.sin_cos();
    let mi = C64::new(0.0, -1.0);

    // |n,1⟩
    u[0][0] = C64::from((b2 + a2 * cos) / e2);
    u[1][0] = mi * a.conj() / eps * sin;
    u[2][0] = a.conj() * b.conj() / e2 * (cos - 1.0);
    // |n-r,2⟩
    u[0][1] = mi * a / eps * sin;
    u[1][1] = C64::from(cos);
    u[2][1] = mi * b.conj() / eps * sin;
    // |n-r-l,3⟩
    u[0][2] = a * b / e2 * (cos - 1.0);
    u[1][2] = mi * b / eps * sin;
    u[2][2] = C64::from((a2 + b2 * cos) / e2);
    u
}

/// Propagates `initial` for time `t` (any sign) with the closed-form
/// evolution of each basis state.
pub fn propagate_analytic(
    block: &BlockSystem,
    initial: &VibronicState,
    t: f64,
) -> Result<VibronicState> {
    check_dimensions(block, initial)?;
    Ok(apply(&analytic_evolution(block, t), initial))
}

/// Orthonormal eigenpairs of the block Hamiltonian embedded in 3×3 form.
///
/// For ε̃ > 0 the eigenvalues are 0 and ±ε̃ with eigenvectors
/// (β, 0, -α*)/ε̃ and (α, ±ε̃, β*)/(√2 ε̃).
pub fn eigensystem(block: &BlockSystem) -> [(f64, [C64; 3]); 3] {
    let eps = block.epsilon_tilde();
    if eps == 0.0 {
        return [
            (0.0, [ONE, ZERO, ZERO]),
            (0.0, [ZERO, ONE, ZERO]),
            (0.0, [ZERO, ZERO, ONE]),
        ];
    }
    let a = block.alpha_or_zero();
    let b = block.beta_or_zero();
    let s = std::f64::consts::SQRT_2 * eps;
    [
        (0.0, [b / eps, ZERO, -a.conj() / eps]),
        (eps, [a / s, C64::from(eps / s), b.conj() / s]),
        (-eps, [a / s, C64::from(-eps / s), b.conj() / s]),
    ]
}

/// Propagates by exact exponentiation, U(t) = Σ_k e^{-iλ_k t/ħ} v_k v_k†.
///
/// Smaller blocks are embedded in 3×3 form with the missing couplings set to
/// zero; the padding amplitudes stay exactly zero.
pub fn propagate_oracle(
    block: &BlockSystem,
    initial: &VibronicState,
    t: f64,
) -> Result<VibronicState> {
    check_dimensions(block, initial)?;
    if block.dimension() == 1 {
        return Ok(initial.clone());
    }
    let mut u = [[ZERO; 3]; 3];
    for (lambda, v) in eigensystem(block) {
        let phase = C64::from_polar(1.0, -lambda * t / HBAR);
        for i in 0..3 {
            for j in 0..3 {
                u[i][j] += phase * v[i] * v[j].conj();
            }
        }
    }
    Ok(apply(&u, initial))
}

/// P^χ(t) = ((|χ|² + cos ωt)/(|χ|² + 1))², the probability of remaining in
/// |n,1⟩.
pub fn survival_probability(chi: f64, omega: f64, t: f64) -> f64 {
    let c2 = chi * chi;
    let amplitude = (c2 + (omega * t).cos()) / (c2 + 1.0);
    amplitude * amplitude
}

/// Occupations (P₁, P₂, P₃) of the three electronic levels; levels absent
/// from the block report 0.
pub fn level_probabilities(state: &VibronicState) -> [f64; 3] {
    let mut out = [0.0; 3];
    for (slot, c) in out.iter_mut().zip(state.amplitudes()) {
        *slot = c.norm_sqr();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};

    fn mv(x: u32, y: u32, z: u32) -> ModeVector {
        ModeVector::new(x, y, z)
    }

    #[test]
    fn classification_examples() {
        let p = SidebandPattern::new(mv(1, 0, 0), mv(0, 0, 0));
        let b = classify_block(&mv(0, 0, 0), &p);
        assert_eq!(b.dimension(), 1);
        assert_eq!(b.basis()[0].to_string(), "|0,0,0;1>");

        let p = SidebandPattern::new(mv(1, 0, 0), mv(1, 0, 0));
        assert_eq!(classify_block(&mv(1, 0, 0), &p).dimension(), 2);

        let p = SidebandPattern::new(mv(1, 0, 0), mv(1, 1, 1));
        let b = classify_block(&mv(2, 1, 1), &p);
        assert_eq!(b.dimension(), 3);
        assert_eq!(
            b.basis()[2],
            BasisLabel {
                modes: mv(0, 0, 0),
                level: Level::Three
            }
        );
    }

    #[test]
    fn build_block_example() {
        let p = SidebandPattern::new(mv(1, 0, 0), mv(0, 0, 0));
        let g = CouplingConstants::real(1.0, 1.0).unwrap();
        let block = build_block(&mv(1, 0, 0), &p, &g).unwrap();
        assert_eq!(block.dimension(), 3);
        assert_eq!(block.alpha(), Some(ONE));
        assert_eq!(block.beta(), Some(ONE));
        assert!((block.chi().unwrap() - ONE).norm() < 1e-15);
        assert!((block.omega() - SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn decoupled_level_one_is_degenerate() {
        let p = SidebandPattern::new(mv(1, 0, 0), mv(0, 0, 0));
        let g = CouplingConstants::real(0.0, 1.0).unwrap();
        let block = build_block(&mv(1, 0, 0), &p, &g).unwrap();
        assert!(block.is_degenerate());
        assert_eq!(block.chi(), Err(Error::DegenerateCoupling));
    }

    #[test]
    fn one_dimensional_block_is_stationary() {
        let p = SidebandPattern::new(mv(2, 0, 0), mv(0, 0, 0));
        let g = CouplingConstants::real(1.0, 1.0).unwrap();
        let block = build_block(&mv(1, 0, 0), &p, &g).unwrap();
        assert_eq!(block.dimension(), 1);
        assert_eq!(block.epsilon_tilde(), 0.0);
        assert_eq!(block.omega(), 0.0);
        let s = VibronicState::basis_state(1, Level::One).unwrap();
        assert_eq!(propagate_analytic(&block, &s, 3.7).unwrap(), s);
        assert_eq!(propagate_oracle(&block, &s, 3.7).unwrap(), s);
    }

    #[test]
    fn identity_at_zero_time() {
        let block = BlockSystem::three_level(C64::new(0.4, 0.3), C64::new(-1.2, 0.5));
        let s = VibronicState::normalized(vec![
            C64::new(0.3, 0.1),
            C64::new(-0.2, 0.7),
            C64::new(0.5, 0.0),
        ])
        .unwrap();
        assert_eq!(propagate_analytic(&block, &s, 0.0).unwrap(), s);
        assert!(propagate_oracle(&block, &s, 0.0).unwrap().max_deviation(&s) < 1e-15);
    }

    #[test]
    fn middle_level_splits_evenly_at_quarter_period() {
        let block = BlockSystem::three_level(ONE, ONE);
        let s = VibronicState::basis_state(3, Level::Two).unwrap();
        let t = FRAC_PI_2 / block.omega();
        let p = level_probabilities(&propagate_analytic(&block, &s, t).unwrap());
        assert!((p[0] - 0.5).abs() < 1e-15);
        assert!(p[1].abs() < 1e-15);
        assert!((p[2] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn survival_examples() {
        assert!(survival_probability(0.0, 1.0, FRAC_PI_2) < 1e-30);
        assert!(survival_probability(1.0, 1.0, PI) < 1e-30);
        assert!((survival_probability(3.0, 1.0, PI) - 0.64).abs() < 1e-15);
    }

    #[test]
    fn level_one_population_at_half_period() {
        let chi = 2.5_f64;
        let block = BlockSystem::three_level(ONE, C64::from(chi));
        let s = VibronicState::basis_state(3, Level::One).unwrap();
        let out = propagate_analytic(&block, &s, PI / block.omega()).unwrap();
        let p = level_probabilities(&out);
        let c2 = chi * chi;
        assert!((p[0] - ((c2 - 1.0) / (c2 + 1.0)).powi(2)).abs() < 1e-14);
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let block = BlockSystem::three_level(ONE, ONE);
        let s = VibronicState::basis_state(2, Level::One).unwrap();
        assert_eq!(
            propagate_analytic(&block, &s, 1.0),
            Err(Error::DimensionMismatch { state: 2, block: 3 })
        );
    }

    #[test]
    fn state_validation() {
        assert!(VibronicState::new(vec![ONE, ONE]).is_err());
        assert!(VibronicState::new(vec![]).is_err());
        assert!(VibronicState::normalized(vec![ZERO, ZERO]).is_err());
        assert!(VibronicState::basis_state(2, Level::Three).is_err());
        let s = VibronicState::normalized(vec![ONE, ONE]).unwrap();
        assert!((s.norm_sqr() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn from_couplings_checks_shape() {
        let basis = classify_block(
            &mv(1, 0, 0),
            &SidebandPattern::new(mv(1, 0, 0), mv(1, 0, 0)),
        )
        .basis()
        .to_vec();
        assert!(BlockSystem::from_couplings(basis.clone(), Some(ONE), None).is_ok());
        assert!(BlockSystem::from_couplings(basis, Some(ONE), Some(ONE)).is_err());
    }
}
