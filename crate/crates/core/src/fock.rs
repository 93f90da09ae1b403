//! Fock-state ladder algebra for the three motional modes and the effective
//! sideband couplings in the Lamb-Dicke regime.
//!
//! Matrix elements of mode monomials `a_x^p_x a_y^p_y a_z^p_z` are evaluated
//! as products of square roots of falling factors, never through explicit
//! factorials. A single-mode falling factorial `n!/(n-d)!` is exact to f64
//! rounding for all `n <= 170`; beyond that the square-root product keeps the
//! result finite for much larger occupations, and any non-finite result is
//! reported as [`Error::Overflow`].

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::HBAR;

/// Phonon occupations `(n_x, n_y, n_z)` of the three trap modes.
///
/// The same triple type carries sideband orders (`r`, `l`) and monomial
/// exponents, which are also non-negative per mode.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ModeVector(pub [u32; 3]);

impl ModeVector {
    pub const ZERO: ModeVector = ModeVector([0, 0, 0]);

    pub const fn new(x: u32, y: u32, z: u32) -> Self {
        ModeVector([x, y, z])
    }

    pub fn components(&self) -> [u32; 3] {
        self.0
    }

    /// Component-wise `self - d`; fails when any occupation would go negative.
    pub fn checked_sub(&self, d: &ModeVector) -> Result<ModeVector> {
        let mut out = [0u32; 3];
        for (i, slot) in out.iter_mut().enumerate() {
            *slot = self.0[i]
                .checked_sub(d.0[i])
                .ok_or(Error::InvalidSubspace { n: *self, d: *d })?;
        }
        Ok(ModeVector(out))
    }

    /// True when every component of `self` is at least the matching one of `d`.
    pub fn dominates(&self, d: &ModeVector) -> bool {
        self.0.iter().zip(d.0.iter()).all(|(n, d)| n >= d)
    }

    pub fn total(&self) -> u64 {
        self.0.iter().map(|&c| c as u64).sum()
    }
}

impl fmt::Display for ModeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.0[0], self.0[1], self.0[2])
    }
}

impl FromStr for ModeVector {
    type Err = String;

    /// Parses `"x,y,z"`, optionally wrapped in parentheses.
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let trimmed = s.trim().trim_start_matches('(').trim_end_matches(')');
        let parts: Vec<&str> = trimmed.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(format!(
                "expected three comma-separated integers, got {s:?}"
            ));
        }
        let mut out = [0u32; 3];
        for (slot, p) in out.iter_mut().zip(&parts) {
            *slot = p
                .parse()
                .map_err(|_| format!("{p:?} is not a non-negative integer"))?;
        }
        Ok(ModeVector(out))
    }
}

impl From<[u32; 3]> for ModeVector {
    fn from(v: [u32; 3]) -> Self {
        ModeVector(v)
    }
}

/// Phonon exchange of the two driven transitions: `r` quanta are removed
/// going 1 → 2, `l` quanta going 2 → 3.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SidebandPattern {
    pub r: ModeVector,
    pub l: ModeVector,
}

impl SidebandPattern {
    pub const fn new(r: ModeVector, l: ModeVector) -> Self {
        SidebandPattern { r, l }
    }

    /// Both lasers on the first red sideband, along x and y respectively.
    pub const fn first_red_xy() -> Self {
        SidebandPattern {
            r: ModeVector::new(1, 0, 0),
            l: ModeVector::new(0, 1, 0),
        }
    }
}

/// One laser beam as seen by the ion.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LaserDrive {
    /// Rabi frequency Ω (angular frequency units).
    pub rabi_frequency: f64,
    /// Lamb-Dicke parameter η.
    pub lamb_dicke: f64,
    /// Initial phase φ in radians.
    #[serde(default = "default_phase")]
    pub phase: f64,
}

fn default_phase() -> f64 {
    std::f64::consts::FRAC_PI_2
}

impl LaserDrive {
    pub fn new(rabi_frequency: f64, lamb_dicke: f64, phase: f64) -> Result<Self> {
        let drive = LaserDrive {
            rabi_frequency,
            lamb_dicke,
            phase,
        };
        drive.validate()?;
        Ok(drive)
    }

    /// A drive with φ = π/2, the phase that makes the coupling real.
    pub fn with_real_coupling(rabi_frequency: f64, lamb_dicke: f64) -> Result<Self> {
        Self::new(rabi_frequency, lamb_dicke, default_phase())
    }

    pub fn validate(&self) -> Result<()> {
        if !self.rabi_frequency.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "rabi frequency must be finite, got {}",
                self.rabi_frequency
            )));
        }
        if !(self.lamb_dicke >= 0.0 && self.lamb_dicke.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "Lamb-Dicke parameter must be finite and >= 0, got {}",
                self.lamb_dicke
            )));
        }
        if !self.phase.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "phase must be finite, got {}",
                self.phase
            )));
        }
        Ok(())
    }

    /// First-sideband coupling ħΩ e^{-η²/2} e^{iφ} (iη), the j = 0 term of
    /// the sideband series. Equals [`effective_gamma`] when φ = π/2.
    pub fn coupling(&self) -> C64 {
        let magnitude = HBAR * self.rabi_frequency * (-self.lamb_dicke.powi(2) / 2.0).exp();
        magnitude * C64::from_polar(1.0, self.phase) * C64::new(0.0, self.lamb_dicke)
    }
}

/// Trap and beam parameters fixing the Lamb-Dicke parameter η = k·√(ħ/(2Mω₀)).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrapParams {
    trap_frequency: f64,
    ion_mass: f64,
    wave_number: f64,
}

impl TrapParams {
    /// Trap frequency and mass must be strictly positive; the wave number
    /// may be zero (no momentum kick).
    pub fn new(trap_frequency: f64, ion_mass: f64, wave_number: f64) -> Result<Self> {
        let positive = |v: f64| v > 0.0 && v.is_finite();
        if !positive(trap_frequency) || !positive(ion_mass) {
            return Err(Error::InvalidParameter(format!(
                "trap frequency and ion mass must be positive, got {trap_frequency} and {ion_mass}"
            )));
        }
        if !(wave_number >= 0.0 && wave_number.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "wave number must be finite and >= 0, got {wave_number}"
            )));
        }
        Ok(TrapParams {
            trap_frequency,
            ion_mass,
            wave_number,
        })
    }

    pub fn trap_frequency(&self) -> f64 {
        self.trap_frequency
    }

    pub fn ion_mass(&self) -> f64 {
        self.ion_mass
    }

    pub fn wave_number(&self) -> f64 {
        self.wave_number
    }

    /// Ground-state spatial spread √(ħ/(2Mω₀)).
    pub fn spatial_spread(&self) -> f64 {
        (HBAR / (2.0 * self.ion_mass * self.trap_frequency)).sqrt()
    }
}

/// Effective couplings γ₁ (1 ↔ 2) and γ₂ (2 ↔ 3).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CouplingConstants {
    pub gamma1: C64,
    pub gamma2: C64,
}

impl CouplingConstants {
    pub fn new(gamma1: C64, gamma2: C64) -> Result<Self> {
        let finite = |g: C64| g.re.is_finite() && g.im.is_finite();
        if !finite(gamma1) || !finite(gamma2) {
            return Err(Error::InvalidParameter(format!(
                "couplings must be finite, got {gamma1} and {gamma2}"
            )));
        }
        Ok(CouplingConstants { gamma1, gamma2 })
    }

    pub fn real(gamma1: f64, gamma2: f64) -> Result<Self> {
        Self::new(C64::new(gamma1, 0.0), C64::new(gamma2, 0.0))
    }

    /// Couplings produced by beam `a` on 1 ↔ 2 and beam `b` on 2 ↔ 3.
    pub fn from_drives(a: &LaserDrive, b: &LaserDrive) -> Result<Self> {
        a.validate()?;
        b.validate()?;
        Self::new(a.coupling(), b.coupling())
    }

    pub fn is_zero(&self) -> bool {
        self.gamma1 == C64::new(0.0, 0.0) && self.gamma2 == C64::new(0.0, 0.0)
    }
}

/// √(n (n-1) ··· (n-d+1)) for one mode, as a product of square roots.
fn falling_root(n: u32, d: u32) -> f64 {
    ((n - d)..n).map(|k| (k as f64 + 1.0).sqrt()).product()
}

/// √(∏ᵢ nᵢ!/(nᵢ-dᵢ)!), the modulus of ⟨n-d| a^d |n⟩.
pub fn factorial_ratio_root(n: &ModeVector, d: &ModeVector) -> Result<f64> {
    n.checked_sub(d)?;
    let value: f64 = (0..3).map(|i| falling_root(n.0[i], d.0[i])).product();
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Overflow { n: *n, d: *d })
    }
}

/// α = ⟨n,1|H₁|n-r,2⟩ = γ₁ √(∏ nᵢ!/(nᵢ-rᵢ)!).
pub fn coupling_alpha(gamma1: C64, n: &ModeVector, r: &ModeVector) -> Result<C64> {
    Ok(gamma1 * factorial_ratio_root(n, r)?)
}

/// β = ⟨n-r,2|H₁|n-r-l,3⟩ = γ₂ √(∏ (nᵢ-rᵢ)!/(nᵢ-rᵢ-lᵢ)!).
pub fn coupling_beta(gamma2: C64, n: &ModeVector, r: &ModeVector, l: &ModeVector) -> Result<C64> {
    let middle = n.checked_sub(r)?;
    Ok(gamma2 * factorial_ratio_root(&middle, l)?)
}

/// χ = β/α.
pub fn chi_ratio(alpha: C64, beta: C64) -> Result<C64> {
    if alpha.norm_sqr() == 0.0 {
        return Err(Error::DegenerateCoupling);
    }
    Ok(beta / alpha)
}

/// η = k·√(ħ/(2Mω₀)).
pub fn lamb_dicke_eta(trap: &TrapParams) -> f64 {
    trap.wave_number * trap.spatial_spread()
}

/// γ = -ħΩ e^{-η²/2} η, the real first-sideband coupling at φ = π/2.
pub fn effective_gamma(rabi_frequency: f64, eta: f64) -> f64 {
    -HBAR * rabi_frequency * (-eta * eta / 2.0).exp() * eta
}

/// Modulus of the j-th term of the single-mode sideband series between
/// `|n⟩` and `|n+1⟩`: η^{2j+1}/(j!(j+1)!) · ⟨n+1| a^j (a†)^{j+1} |n⟩.
///
/// The j = 0 term is the Lamb-Dicke coupling element η√(n+1); the ratio of
/// higher terms to it bounds the truncation error of the linear model.
pub fn sideband_series_term(eta: f64, j: u32, n: u32) -> f64 {
    // (a†)^{j+1}|n⟩ = √((n+j+1)!/n!) |n+j+1⟩, then a^j lowers to |n+1⟩.
    let top = n + j + 1;
    let element = falling_root(top, j + 1) * falling_root(top, j);
    let denominator: f64 =
        (1..=j).map(f64::from).product::<f64>() * (1..=j + 1).map(f64::from).product::<f64>();
    eta.powi(2 * j as i32 + 1) / denominator * element
}
