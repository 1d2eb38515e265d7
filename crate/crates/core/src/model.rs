//! The two-region model and its reduced density kernels.
//!
//! State: `ψ(x, y) = C e^{-λ y / x}` on `x ∈ (0, 1]` (inner region A) and
//! `y ∈ [1, ∞)` (outer region B), radial measure `4π u² du` on each side. An
//! observer position `x₀ ∈ (0, 1]` rescales the coupling: every evaluation
//! uses `λ_eff = x₀ λ`.
//!
//! All quantities are carried as logarithms. `C²` grows like `e^{2λ}` and the
//! kernels decay like `e^{-2λ}`, so linear-domain floats die near `λ ≈ 350`
//! while the log forms stay exact up to the supported `λ = 10⁴` and beyond.
//!
//! Closed forms used here (elementary antiderivatives of the defining
//! integrals, cross-checked against direct quadrature in the test suite):
//!
//! * `∫₁^∞ y² e^{-cy} dy = e^{-c}(c² + 2c + 2)/c³`
//! * `∫₀¹ x^m e^{-c/x} dx = E_{m+2}(c)`
//! * normalization: `16π² C² I(λ) = 1` with
//!   `I(λ) = E₅(a)/a + 2E₆(a)/a² + 2E₇(a)/a³`, `a = 2λ`
//! * region A kernel: `ρ_A(x, x') = 4π C² e^{-b}(b² + 2b + 2)/b³`,
//!   `b = λ(x + x')/(x x')`
//! * region B kernel: `ρ_B(y, y') = 4π C² E₄(λ(y + y'))`
//!
//! Large-λ forms (used in [`EvalMode::Asymptotic`]) replace
//! `(c² + 2c + 2)/c³ → 1/c` and `E₄(s) → e^{-s}/s`, giving
//! `C² ≈ λ² e^{2λ}/(4π²)`.

use crate::quadrature::{self, QuadratureError};
use crate::specfun::{ExpnValue, SpecFunError};
use serde::Serialize;
use thiserror::Error;

/// Largest `λ_eff` the kernel-level machinery is vetted for (quadrature seeds,
/// Nyström resolution). Physics-scale values (`λ ~ 10¹⁰`) are served by the
/// closed-form bounds instead.
pub const LAMBDA_KERNEL_CAP: f64 = 1e4;

pub(crate) const LOG_4PI: f64 = 2.531_024_246_969_291;
pub(crate) const LOG_16PI2: f64 = 5.062_048_493_938_582;
const LOG_4PI2: f64 = 3.675_754_132_818_691;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("lambda must be positive and finite, got {lambda}")]
    BadLambda { lambda: f64 },
    #[error("observer position x0 must lie in (0, 1], got {x0}")]
    BadObserver { x0: f64 },
    #[error("inner-region coordinate must lie in (0, 1], got {value}")]
    OutsideRegionA { value: f64 },
    #[error("outer-region coordinate must be >= 1, got {value}")]
    OutsideRegionB { value: f64 },
    #[error("normalization quadrature failed: {0}")]
    Quadrature(#[from] QuadratureError),
    #[error("exponential-integral evaluation failed: {0}")]
    SpecFun(#[from] SpecFunError),
}

/// Model inputs: coupling `λ` and observer position `x₀`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelParams {
    lambda: f64,
    x0: f64,
}

impl ModelParams {
    pub fn new(lambda: f64, x0: f64) -> Result<Self, ModelError> {
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(ModelError::BadLambda { lambda });
        }
        if !(x0.is_finite() && x0 > 0.0 && x0 <= 1.0) {
            return Err(ModelError::BadObserver { x0 });
        }
        Ok(ModelParams { lambda, x0 })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn x0(&self) -> f64 {
        self.x0
    }

    /// The coupling every kernel actually sees: `x₀ · λ`.
    pub fn lambda_eff(&self) -> f64 {
        self.x0 * self.lambda
    }
}

/// Exact closed forms vs. leading large-λ asymptotics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EvalMode {
    Exact,
    Asymptotic,
}

/// The two radial regions: A is `(0, 1]`, B is `[1, ∞)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Region {
    A,
    B,
}

/// `log C²`, tagged with the mode that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Normalization {
    log_c2: f64,
    mode: EvalMode,
}

impl Normalization {
    /// Solves `16π² C² I(λ_eff) = 1` (exact) or applies the leading-order
    /// form `C² = λ² e^{2λ}/(4π²)` (asymptotic). The exact route integrates
    /// the defining double integral (reduced to one dimension by the
    /// elementary `y` antiderivative) with the adaptive scheme at `tol`.
    pub fn compute(params: &ModelParams, mode: EvalMode, tol: f64) -> Result<Self, ModelError> {
        let lambda = params.lambda_eff();
        let log_c2 = match mode {
            EvalMode::Asymptotic => asymptotic_log_c2(lambda),
            EvalMode::Exact => -LOG_16PI2 - quadrature_log_norm_integral(lambda, tol)?,
        };
        Ok(Normalization { log_c2, mode })
    }

    pub fn log_c2(&self) -> f64 {
        self.log_c2
    }

    pub fn mode(&self) -> EvalMode {
        self.mode
    }
}

fn asymptotic_log_c2(lambda_eff: f64) -> f64 {
    2.0 * lambda_eff.ln() + 2.0 * lambda_eff - LOG_4PI2
}

/// `log I(λ_eff)` through the E-ladder:
/// `I = E₅(a)/a + 2E₆(a)/a² + 2E₇(a)/a³`, `a = 2λ_eff`.
///
/// Scaled combination, no under/overflow at any supported λ.
pub fn closed_form_norm_integral(lambda_eff: f64) -> Result<f64, ModelError> {
    if !(lambda_eff.is_finite() && lambda_eff > 0.0) {
        return Err(ModelError::BadLambda { lambda: lambda_eff });
    }
    let a = 2.0 * lambda_eff;
    let e5 = ExpnValue::compute(5, a)?;
    let e6 = ExpnValue::compute(6, a)?;
    let e7 = ExpnValue::compute(7, a)?;
    let scaled_sum = e5.log_scaled().exp() / a
        + 2.0 * e6.log_scaled().exp() / (a * a)
        + 2.0 * e7.log_scaled().exp() / (a * a * a);
    Ok(-a + scaled_sum.ln())
}

/// `log I(λ)` by adaptive quadrature of the shifted integrand
/// `x² e^{-a(1/x - 1)} (c² + 2c + 2)/c³`, `c = a/x`, which peaks at `x = 1`
/// with unit exponential scale. Breakpoints seed the width-`1/a` layer.
fn quadrature_log_norm_integral(lambda_eff: f64, tol: f64) -> Result<f64, QuadratureError> {
    let a = 2.0 * lambda_eff;
    let integrand = move |x: f64| {
        if x <= 0.0 {
            return 0.0;
        }
        let c = a / x;
        let shifted = (a - c).exp(); // e^{-c} shifted by the peak value e^{-a}
        if shifted == 0.0 {
            return 0.0;
        }
        x * x * shifted * ((c * c + 2.0 * c + 2.0) / (c * c * c))
    };
    let breaks = boundary_layer_breaks_inner(a);
    let shifted_integral = quadrature::integrate_finite_seeded(integrand, 0.0, 1.0, &breaks, tol)?;
    Ok(-a + shifted_integral.value.ln())
}

/// Subdivision seeds `x = 1 - k/scale` for a feature of width `1/scale` at
/// the inner edge `x = 1`.
pub(crate) fn boundary_layer_breaks_inner(scale: f64) -> Vec<f64> {
    [1.0, 4.0, 16.0, 64.0, 256.0]
        .iter()
        .map(|k| 1.0 - k / scale)
        .filter(|x| *x > 1e-3 && *x < 1.0 - 1e-12)
        .collect()
}

/// Subdivision seeds `y = 1 + k/scale` for the outer region.
pub(crate) fn boundary_layer_breaks_outer(scale: f64) -> Vec<f64> {
    [1.0, 4.0, 16.0, 64.0, 256.0]
        .iter()
        .map(|k| 1.0 + k / scale)
        .collect()
}

/// `log ψ(x, y) = ½ log C² − λ_eff y/x`.
pub fn log_psi(
    x: f64,
    y: f64,
    params: &ModelParams,
    norm: &Normalization,
) -> Result<f64, ModelError> {
    check_region_a(x)?;
    check_region_b(y)?;
    Ok(0.5 * norm.log_c2() - params.lambda_eff() * y / x)
}

/// One kernel evaluation, in log space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelEval {
    pub log_value: f64,
    pub region: Region,
    pub mode: EvalMode,
}

/// Inner-region reduced kernel `ρ_A(x, x')`, log value.
///
/// Exact: `log 4π + log C² − b + log(b² + 2b + 2) − 3 log b`.
/// Asymptotic: `log 4π + log C² − log λ + log(x x'/(x + x')) − b`.
/// Symmetric under `x ↔ x'` bit-for-bit (commutative `+`/`*` only).
pub fn rho_a(
    x: f64,
    x_prime: f64,
    params: &ModelParams,
    norm: &Normalization,
    mode: EvalMode,
) -> Result<KernelEval, ModelError> {
    check_region_a(x)?;
    check_region_a(x_prime)?;
    let lambda = params.lambda_eff();
    let b = lambda * (x + x_prime) / (x * x_prime);
    let log_value = match mode {
        EvalMode::Exact => {
            LOG_4PI + norm.log_c2() - b + (b * b + 2.0 * b + 2.0).ln() - 3.0 * b.ln()
        }
        EvalMode::Asymptotic => {
            LOG_4PI + norm.log_c2() - lambda.ln() + (x * x_prime / (x + x_prime)).ln() - b
        }
    };
    Ok(KernelEval {
        log_value,
        region: Region::A,
        mode,
    })
}

/// Outer-region reduced kernel `ρ_B(y, y')`, log value.
///
/// Exact: `log 4π + log C² + log E₄(s)`, `s = λ(y + y')`.
/// Asymptotic: `log 4π + log C² − s − log s`.
pub fn rho_b(
    y: f64,
    y_prime: f64,
    params: &ModelParams,
    norm: &Normalization,
    mode: EvalMode,
) -> Result<KernelEval, ModelError> {
    check_region_b(y)?;
    check_region_b(y_prime)?;
    let s = params.lambda_eff() * (y + y_prime);
    let log_value = match mode {
        EvalMode::Exact => LOG_4PI + norm.log_c2() + ExpnValue::compute(4, s)?.log_value(),
        EvalMode::Asymptotic => LOG_4PI + norm.log_c2() - s - s.ln(),
    };
    Ok(KernelEval {
        log_value,
        region: Region::B,
        mode,
    })
}

/// Radial probability density `p(u) = 4π u² ρ(u, u)`; integrates to 1 over
/// the region when the normalization is exact.
pub fn radial_prob(
    region: Region,
    u: f64,
    params: &ModelParams,
    norm: &Normalization,
    mode: EvalMode,
) -> Result<f64, ModelError> {
    Ok(log_radial_prob(region, u, params, norm, mode)?.exp())
}

/// `log p(u)`; `-inf`-free for in-domain `u > 0`, underflow-safe to exploit.
pub fn log_radial_prob(
    region: Region,
    u: f64,
    params: &ModelParams,
    norm: &Normalization,
    mode: EvalMode,
) -> Result<f64, ModelError> {
    let kernel = match region {
        Region::A => rho_a(u, u, params, norm, mode)?,
        Region::B => rho_b(u, u, params, norm, mode)?,
    };
    Ok(LOG_4PI + 2.0 * u.ln() + kernel.log_value)
}

fn check_region_a(x: f64) -> Result<(), ModelError> {
    if !(x.is_finite() && x > 0.0 && x <= 1.0) {
        return Err(ModelError::OutsideRegionA { value: x });
    }
    Ok(())
}

fn check_region_b(y: f64) -> Result<(), ModelError> {
    if !(y.is_finite() && y >= 1.0) {
        return Err(ModelError::OutsideRegionB { value: y });
    }
    Ok(())
}

#[cfg(test)]
#[allow(clippy::excessive_precision)] // reference values keep their full digits
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn params(lambda: f64) -> ModelParams {
        ModelParams::new(lambda, 1.0).unwrap()
    }

    // log C² (exact), 40-digit arbitrary-precision references through the
    // E-ladder closed form.
    const LOG_C2_EXACT: &[(f64, f64)] = &[
        (0.5, -3.8318085505479899),
        (5.0, 9.741119008106286),
        (10.0, 21.04890094006928),
        (20.0, 42.38220183468767),
        (30.0, 63.17270269077612),
        (50.0, 104.17682481528124),
        (100.0, 205.54920946932509),
        (1000.0, 2010.1412525612295),
        (10000.0, 20014.745076572395),
    ];

    #[test]
    fn closed_form_norm_integral_matches_references() {
        for &(lambda, reference) in LOG_C2_EXACT {
            let log_i = closed_form_norm_integral(lambda).unwrap();
            let log_c2 = -LOG_16PI2 - log_i;
            assert_relative_eq!(log_c2, reference, max_relative = 1e-13);
        }
    }

    #[test]
    fn exact_normalization_agrees_with_closed_form() {
        // Two routes to log C²: adaptive quadrature of the defining integral
        // vs the E-ladder. Independent up to the shared e^{-c} antiderivative.
        for &(lambda, _) in LOG_C2_EXACT {
            let p = params(lambda);
            let norm = Normalization::compute(&p, EvalMode::Exact, 1e-12).unwrap();
            let closed = -LOG_16PI2 - closed_form_norm_integral(lambda).unwrap();
            assert_relative_eq!(norm.log_c2(), closed, max_relative = 1e-11);
        }
    }

    #[test]
    fn asymptotic_normalization_form() {
        let p = params(50.0);
        let norm = Normalization::compute(&p, EvalMode::Asymptotic, 1e-10).unwrap();
        let expected = 2.0 * 50.0f64.ln() + 100.0 - (4.0 * std::f64::consts::PI.powi(2)).ln();
        assert_relative_eq!(norm.log_c2(), expected, epsilon = 1e-12);
    }

    #[test]
    fn exact_asym_ratio_shrinks_and_stays_in_band() {
        // exp(log_c2_exact − log_c2_asym) → 1 from above; at λ = 50 the ratio
        // must lie in [0.9, 1.1]. The measured 1/λ coefficient is pinned in
        // the integration suite.
        let mut previous = f64::INFINITY;
        for &lambda in &[10.0, 20.0, 50.0, 100.0] {
            let p = params(lambda);
            let exact = Normalization::compute(&p, EvalMode::Exact, 1e-12).unwrap();
            let asym = Normalization::compute(&p, EvalMode::Asymptotic, 1e-12).unwrap();
            let ratio = (exact.log_c2() - asym.log_c2()).exp();
            assert!(ratio > 1.0 && ratio < previous);
            if lambda == 50.0 {
                assert!(ratio > 0.9 && ratio < 1.1);
            }
            previous = ratio;
        }
    }

    #[test]
    fn observer_position_rescales_lambda() {
        let p = ModelParams::new(10.0, 0.5).unwrap();
        assert_eq!(p.lambda_eff(), 5.0);
        let half = Normalization::compute(&p, EvalMode::Exact, 1e-12).unwrap();
        let direct = Normalization::compute(&params(5.0), EvalMode::Exact, 1e-12).unwrap();
        assert_eq!(half.log_c2().to_bits(), direct.log_c2().to_bits());
        let k_half = rho_a(0.7, 0.9, &p, &half, EvalMode::Exact).unwrap();
        let k_direct = rho_a(0.7, 0.9, &params(5.0), &direct, EvalMode::Exact).unwrap();
        assert_eq!(k_half.log_value.to_bits(), k_direct.log_value.to_bits());
    }

    #[test]
    fn kernel_spot_values() {
        // 40-digit references, exact normalization.
        let cases = [
            (5.0, 0.16840902082669634, -0.34820275443616052),
            (10.0, 0.6840382484542955, 0.4083941660925431),
        ];
        for (lambda, log_rho_a_11, log_rho_b_11) in cases {
            let p = params(lambda);
            let norm = Normalization::compute(&p, EvalMode::Exact, 1e-13).unwrap();
            let a11 = rho_a(1.0, 1.0, &p, &norm, EvalMode::Exact).unwrap();
            let b11 = rho_b(1.0, 1.0, &p, &norm, EvalMode::Exact).unwrap();
            assert_relative_eq!(a11.log_value, log_rho_a_11, epsilon = 1e-10);
            assert_relative_eq!(b11.log_value, log_rho_b_11, epsilon = 1e-10);
        }
        let p = params(5.0);
        let norm = Normalization::compute(&p, EvalMode::Exact, 1e-13).unwrap();
        let a = rho_a(0.7, 0.9, &p, &norm, EvalMode::Exact).unwrap();
        let b = rho_b(1.1, 1.3, &p, &norm, EvalMode::Exact).unwrap();
        assert_relative_eq!(a.log_value, -2.810825498377189, epsilon = 1e-10);
        assert_relative_eq!(b.log_value, -2.4860379268266974, epsilon = 1e-10);
    }

    #[test]
    fn kernels_are_bitwise_symmetric() {
        let p = params(7.5);
        let norm = Normalization::compute(&p, EvalMode::Exact, 1e-10).unwrap();
        for mode in [EvalMode::Exact, EvalMode::Asymptotic] {
            for (x, xp) in [(0.3, 0.9), (0.123456, 0.654321), (1.0, 0.017)] {
                let forward = rho_a(x, xp, &p, &norm, mode).unwrap();
                let backward = rho_a(xp, x, &p, &norm, mode).unwrap();
                assert_eq!(forward.log_value.to_bits(), backward.log_value.to_bits());
            }
            for (y, yp) in [(1.0, 2.5), (1.25, 9.75), (3.0, 3.0)] {
                let forward = rho_b(y, yp, &p, &norm, mode).unwrap();
                let backward = rho_b(yp, y, &p, &norm, mode).unwrap();
                assert_eq!(forward.log_value.to_bits(), backward.log_value.to_bits());
            }
        }
    }

    #[test]
    fn exact_to_asymptotic_diagonal_ratio() {
        // Same normalization in both kernels ⇒ ratio is (b² + 2b + 2)/b²,
        // b = 2λ: the measured size of the dropped polynomial correction.
        let p = params(10.0);
        let norm = Normalization::compute(&p, EvalMode::Exact, 1e-12).unwrap();
        let exact = rho_a(1.0, 1.0, &p, &norm, EvalMode::Exact).unwrap();
        let asym = rho_a(1.0, 1.0, &p, &norm, EvalMode::Asymptotic).unwrap();
        let ratio = (exact.log_value - asym.log_value).exp();
        let b = 20.0f64;
        assert_relative_eq!(
            ratio,
            (b * b + 2.0 * b + 2.0) / (b * b),
            max_relative = 1e-12
        );
        assert_relative_eq!(ratio, 1.105, max_relative = 1e-12);
    }

    #[test]
    fn asymptotic_radial_prob_closed_form() {
        // With the asymptotic normalization, p_A(x) = 2λ x³ e^{2λ(1-1/x)}.
        let p = params(25.0);
        let norm = Normalization::compute(&p, EvalMode::Asymptotic, 1e-10).unwrap();
        for x in [0.6, 0.85, 1.0] {
            let value = radial_prob(Region::A, x, &p, &norm, EvalMode::Asymptotic).unwrap();
            let expected = 2.0 * 25.0 * x.powi(3) * (50.0 * (1.0 - 1.0 / x)).exp();
            assert_relative_eq!(value, expected, max_relative = 1e-12);
        }
        let at_edge = radial_prob(Region::A, 1.0, &p, &norm, EvalMode::Asymptotic).unwrap();
        assert_relative_eq!(at_edge, 50.0, max_relative = 1e-12);
    }

    #[test]
    fn log_psi_linear_in_y_over_x() {
        let p = params(3.0);
        let norm = Normalization::compute(&p, EvalMode::Exact, 1e-10).unwrap();
        let v = log_psi(0.5, 2.0, &p, &norm).unwrap();
        assert_relative_eq!(v, 0.5 * norm.log_c2() - 3.0 * 4.0, epsilon = 1e-12);
        assert!(log_psi(0.0, 2.0, &p, &norm).is_err());
        assert!(log_psi(0.5, 0.5, &p, &norm).is_err());
    }

    #[test]
    fn domain_validation() {
        assert!(ModelParams::new(0.0, 1.0).is_err());
        assert!(ModelParams::new(-2.0, 1.0).is_err());
        assert!(ModelParams::new(f64::INFINITY, 1.0).is_err());
        assert!(ModelParams::new(1.0, 0.0).is_err());
        assert!(ModelParams::new(1.0, 1.5).is_err());
        let p = params(4.0);
        let norm = Normalization::compute(&p, EvalMode::Exact, 1e-10).unwrap();
        assert!(rho_a(1.2, 0.5, &p, &norm, EvalMode::Exact).is_err());
        assert!(rho_b(0.9, 1.5, &p, &norm, EvalMode::Exact).is_err());
        assert!(matches!(
            rho_a(-0.1, 0.5, &p, &norm, EvalMode::Exact),
            Err(ModelError::OutsideRegionA { .. })
        ));
    }

    #[test]
    fn deep_coupling_stays_finite_in_log_space() {
        let p = params(1e4);
        let norm = Normalization::compute(&p, EvalMode::Exact, 1e-11).unwrap();
        assert!(norm.log_c2().is_finite());
        let k = rho_a(0.5, 0.5, &p, &norm, EvalMode::Exact).unwrap();
        assert!(k.log_value.is_finite());
        let boundary = rho_b(1.0, 1.0, &p, &norm, EvalMode::Exact).unwrap();
        // At the boundary the e^{2λ} and e^{-2λ} factors cancel, leaving
        // ρ_B(1,1) → λ/(2π) for large λ.
        assert_relative_eq!(
            boundary.log_value.exp(),
            1e4 / (2.0 * std::f64::consts::PI),
            max_relative = 1e-3
        );
        // Deeper into the tail the linear-domain value underflows while the
        // log stays informative.
        let tail = rho_b(2.0, 2.0, &p, &norm, EvalMode::Exact).unwrap();
        assert!(tail.log_value < -19000.0);
        assert_eq!(tail.log_value.exp(), 0.0);
    }
}
