//! Dimensional layer: maps a bound particle (mass, binding energy, horizon
//! radius) onto the dimensionless coupling of the model, and compares the
//! resulting entropy bound with the holographic area bound.
//!
//! Chain of definitions:
//!
//! * decay constant `κ = √(2 m |E|)/ħ` (evanescent tail of a bound state)
//! * Planck units `ℓ_P = √(ħG/c³)`, `m_P = √(ħc/G)`
//! * `γ = κ ℓ_P`, `λ = κ R x₀`
//! * `η = γ²/(3π) = (2/3π) · m|E| / (m_P² c²)`
//!
//! `η` is exactly the ratio of the model's leading entropy bound at the
//! boundary, `(κR)²/3`, to the holographic bound `A/(4ℓ_P²)` with `A = 4πR²`.
//! The radius cancels, so `η < 1` (any particle far below the Planck mass
//! scale) means the model bound is the stronger statement at every radius.

use crate::entropy::{self, BoundVariant};
use crate::model::{EvalMode, ModelError, ModelParams, Normalization, LAMBDA_KERNEL_CAP};
use serde::Serialize;
use std::f64::consts::PI;
use std::path::Path;
use thiserror::Error;

/// 1 eV in joules (exact since the 2019 SI redefinition).
pub const EV_JOULES: f64 = 1.602_176_634e-19;

/// Environment variable consulted by [`load_constants`] for a constants
/// override file.
pub const CONSTANTS_ENV_VAR: &str = "ENTLAB_CONSTANTS";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PhysicsError {
    #[error("{name} must be positive and finite, got {value}")]
    BadInput { name: &'static str, value: f64 },
    #[error("constant {name} must be positive and finite, got {value}")]
    BadConstant { name: String, value: f64 },
    #[error("cannot read constants file {path}: {message}")]
    ConstantsIo { path: String, message: String },
    #[error("constants file line {line}: {message}")]
    ConstantsParse { line: usize, message: String },
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// The three dimensional inputs everything else derives from.
/// Defaults are CODATA 2018 SI values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhysicalConstants {
    /// Reduced Planck constant, J·s.
    pub hbar: f64,
    /// Newton constant, m³·kg⁻¹·s⁻².
    pub g_newton: f64,
    /// Speed of light, m/s.
    pub c: f64,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        PhysicalConstants {
            hbar: 1.054_571_817e-34,
            g_newton: 6.674_30e-11,
            c: 299_792_458.0,
        }
    }
}

impl PhysicalConstants {
    /// `ℓ_P = √(ħG/c³)`, meters.
    pub fn planck_length(&self) -> f64 {
        (self.hbar * self.g_newton / self.c.powi(3)).sqrt()
    }

    /// `m_P = √(ħc/G)`, kilograms.
    pub fn planck_mass(&self) -> f64 {
        (self.hbar * self.c / self.g_newton).sqrt()
    }

    /// Reads `key = value` overrides (keys `hbar`, `G`, `c`; `#` comments,
    /// blank lines allowed). Unlisted keys keep their defaults.
    pub fn from_file(path: &Path) -> Result<Self, PhysicsError> {
        let text = std::fs::read_to_string(path).map_err(|e| PhysicsError::ConstantsIo {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        Self::parse(&text)
    }

    /// The parsing half of [`from_file`], line numbers starting at 1.
    pub fn parse(text: &str) -> Result<Self, PhysicsError> {
        let mut constants = PhysicalConstants::default();
        let mut seen = [false; 3];
        for (index, raw_line) in text.lines().enumerate() {
            let line = index + 1;
            let content = raw_line.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let Some((key, value)) = content.split_once('=') else {
                return Err(PhysicsError::ConstantsParse {
                    line,
                    message: format!("expected key = value, got {content:?}"),
                });
            };
            let key = key.trim();
            let value: f64 = value
                .trim()
                .parse()
                .map_err(|_| PhysicsError::ConstantsParse {
                    line,
                    message: format!("invalid number {:?} for key {key:?}", value.trim()),
                })?;
            let slot = match key {
                "hbar" => 0,
                "G" => 1,
                "c" => 2,
                _ => {
                    return Err(PhysicsError::ConstantsParse {
                        line,
                        message: format!("unknown key {key:?} (expected hbar, G, or c)"),
                    })
                }
            };
            if seen[slot] {
                return Err(PhysicsError::ConstantsParse {
                    line,
                    message: format!("duplicate key {key:?}"),
                });
            }
            seen[slot] = true;
            match slot {
                0 => constants.hbar = value,
                1 => constants.g_newton = value,
                _ => constants.c = value,
            }
        }
        constants.validate()?;
        Ok(constants)
    }

    fn validate(&self) -> Result<(), PhysicsError> {
        for (name, value) in [("hbar", self.hbar), ("G", self.g_newton), ("c", self.c)] {
            if !(value.is_finite() && value > 0.0) {
                return Err(PhysicsError::BadConstant {
                    name: name.to_string(),
                    value,
                });
            }
        }
        Ok(())
    }
}

/// Constants from the file named by `ENTLAB_CONSTANTS`, or CODATA defaults
/// when the variable is unset.
pub fn load_constants() -> Result<PhysicalConstants, PhysicsError> {
    match std::env::var_os(CONSTANTS_ENV_VAR) {
        Some(path) => PhysicalConstants::from_file(Path::new(&path)),
        None => Ok(PhysicalConstants::default()),
    }
}

/// A dimensional configuration mapped onto the model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhysicalScenario {
    /// Particle mass, kg.
    pub mass: f64,
    /// Binding energy magnitude, J.
    pub energy_abs: f64,
    /// Boundary radius, m.
    pub radius: f64,
    /// Observer position as a fraction of the radius.
    pub x0: f64,
    /// Decay constant `√(2 m |E|)/ħ`, 1/m.
    pub kappa: f64,
    /// `κ ℓ_P`, dimensionless.
    pub gamma: f64,
    /// Model coupling at the observer, `κ R x₀`.
    pub lambda: f64,
    /// Entropy-to-holographic-bound ratio `γ²/(3π)`.
    pub eta: f64,
    /// Boundary area `4πR²`, m².
    pub area: f64,
    /// Whether `λ` is within the kernel-stage cap (quadrature and Nyström
    /// machinery); the closed-form bounds work regardless.
    pub kernel_computable: bool,
}

impl PhysicalScenario {
    /// Model parameters with the full boundary coupling `κR` and the
    /// observer fraction carried separately, so `lambda_eff() = λ`.
    pub fn model_params(&self) -> Result<ModelParams, ModelError> {
        ModelParams::new(self.kappa * self.radius, self.x0)
    }
}

/// Builds the dimensionless coupling for a particle of mass `mass` bound by
/// `energy_abs` inside radius `radius`, observed from `x0 · radius`.
pub fn build_scenario(
    mass: f64,
    energy_abs: f64,
    radius: f64,
    x0: f64,
    constants: &PhysicalConstants,
) -> Result<PhysicalScenario, PhysicsError> {
    for (name, value) in [
        ("mass", mass),
        ("energy_abs", energy_abs),
        ("radius", radius),
    ] {
        if !(value.is_finite() && value > 0.0) {
            return Err(PhysicsError::BadInput { name, value });
        }
    }
    if !(x0.is_finite() && x0 > 0.0 && x0 <= 1.0) {
        return Err(PhysicsError::BadInput {
            name: "x0",
            value: x0,
        });
    }
    constants.validate()?;
    let kappa = (2.0 * mass * energy_abs).sqrt() / constants.hbar;
    let gamma = kappa * constants.planck_length();
    let lambda = kappa * radius * x0;
    let eta = gamma * gamma / (3.0 * PI);
    Ok(PhysicalScenario {
        mass,
        energy_abs,
        radius,
        x0,
        kappa,
        gamma,
        lambda,
        eta,
        area: 4.0 * PI * radius * radius,
        kernel_computable: lambda <= LAMBDA_KERNEL_CAP,
    })
}

/// The same configuration expressed in Planck units: `γ` and `R/ℓ_P` pin
/// everything dimensionless without touching SI constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GeometricScenario {
    pub gamma: f64,
    pub r_over_lp: f64,
    pub x0: f64,
    /// `γ · (R/ℓ_P) · x₀`.
    pub lambda: f64,
    /// `γ²/(3π)`.
    pub eta: f64,
    /// `A/(4ℓ_P²) = π (R/ℓ_P)²`.
    pub s_holographic: f64,
    /// `η · A/(4ℓ_P²) = (γ R/ℓ_P)²/3`.
    pub s_model_bound: f64,
    pub stronger_than_holographic: bool,
    pub kernel_computable: bool,
}

pub fn build_geometric(
    gamma: f64,
    r_over_lp: f64,
    x0: f64,
) -> Result<GeometricScenario, PhysicsError> {
    for (name, value) in [("gamma", gamma), ("r_over_lp", r_over_lp)] {
        if !(value.is_finite() && value > 0.0) {
            return Err(PhysicsError::BadInput { name, value });
        }
    }
    if !(x0.is_finite() && x0 > 0.0 && x0 <= 1.0) {
        return Err(PhysicsError::BadInput {
            name: "x0",
            value: x0,
        });
    }
    let lambda = gamma * r_over_lp * x0;
    let eta = gamma * gamma / (3.0 * PI);
    let s_holographic = PI * r_over_lp * r_over_lp;
    Ok(GeometricScenario {
        gamma,
        r_over_lp,
        x0,
        lambda,
        eta,
        s_holographic,
        s_model_bound: eta * s_holographic,
        stronger_than_holographic: eta < 1.0,
        kernel_computable: lambda <= LAMBDA_KERNEL_CAP,
    })
}

/// Model bound vs holographic bound for a dimensional scenario.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HolographicReport {
    /// `4πR²`, m².
    pub area: f64,
    /// `A/(4ℓ_P²)`.
    pub s_holographic: f64,
    /// `η · A/(4ℓ_P²)`.
    pub s_model_bound: f64,
    /// `s_model_bound / s_holographic`, radius-independent.
    pub eta: f64,
    pub stronger_than_holographic: bool,
    /// Independent route to the same number: the leading entropy estimate
    /// `λ²/3` evaluated at the boundary (`x₀ = 1`), which must equal
    /// `s_model_bound` to rounding.
    pub s_leading_at_boundary: f64,
}

pub fn holographic_report(
    scenario: &PhysicalScenario,
    constants: &PhysicalConstants,
) -> Result<HolographicReport, PhysicsError> {
    let lp = constants.planck_length();
    let s_holographic = scenario.area / (4.0 * lp * lp);
    let s_model_bound = scenario.eta * s_holographic;
    let boundary_params = ModelParams::new(scenario.kappa * scenario.radius, 1.0)?;
    let boundary_norm = Normalization::compute(&boundary_params, EvalMode::Asymptotic, 1e-10)?;
    let s_leading_at_boundary =
        entropy::bound(BoundVariant::Leading, &boundary_params, &boundary_norm).value;
    Ok(HolographicReport {
        area: scenario.area,
        s_holographic,
        s_model_bound,
        eta: scenario.eta,
        stronger_than_holographic: scenario.eta < 1.0,
        s_leading_at_boundary,
    })
}
