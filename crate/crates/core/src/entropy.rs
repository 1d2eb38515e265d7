//! Entanglement entropies of the reduced kernels, two independent ways, plus
//! the closed-form large-λ bounds.
//!
//! * **Diagonal route**: `S = −∫ 4π u² ρ(u, u) · log ρ(u, u) du` over the
//!   region, by adaptive quadrature (or a fixed Gauss-Legendre rule, kept as
//!   an independent cross-check scheme). This is a differential entropy of
//!   the radial profile; it can legitimately be negative once the profile
//!   concentrates (width `~1/λ` near `u = 1`), which happens for `λ ≳ 17`.
//! * **Spectral route**: Nyström discretization `M = D^{1/2} K D^{1/2}` with
//!   `D = diag(w_i · 4π u_i²)` on Gauss-Legendre nodes, symmetric
//!   eigensolve, `S = −Σ p_k log p_k`. The eigenvalues approximate the
//!   squared Schmidt coefficients, so the two regions must agree.
//!
//! The bounds descend from the closed-form normalization:
//! `S_bound = 16π² C² e^{-2λ} [ 1/3 − (1/λ)(a·(log 4π C²  − log λ) + b) ]`
//! with `a = 1/8`, `b = −(1 + 4 log 2)/32`, which at leading order in `1/λ`
//! collapses to `λ²/3`.

use crate::linalg::{self, LinalgError};
use crate::model::{
    self, EvalMode, KernelEval, ModelError, ModelParams, Normalization, Region, LAMBDA_KERNEL_CAP,
};
use crate::quadrature::{self, NodeSet, QuadratureError};
use serde::Serialize;
use std::f64::consts::{LN_2, PI};
use thiserror::Error;

/// `a` in the subleading correction `1 − (12/λ)(a log(λ/π) + b)`.
pub const SUBLEADING_LOG_COEFF: f64 = 0.125;

/// `b = −(1 + 4 log 2)/32` in the subleading correction.
pub const SUBLEADING_CONST_COEFF: f64 = -(1.0 + 4.0 * LN_2) / 32.0;

/// Eigenvalues in `[EIG_CLIP_FLOOR, 0)` are treated as discretization noise
/// and clipped to zero; anything below is a hard failure.
pub const EIG_CLIP_FLOOR: f64 = -1e-10;

/// Jacobi eigensolve is O(n³) per sweep; past this the dense route is the
/// wrong tool.
pub const MAX_NYSTROM_NODES: usize = 800;

/// Version tag for serialized [`EntropyReport`]s.
pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EntropyError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("entropy quadrature failed: {0}")]
    Quadrature(#[from] QuadratureError),
    #[error("eigensolve failed: {0}")]
    Linalg(#[from] LinalgError),
    #[error("node count {n} outside 1..={MAX_NYSTROM_NODES}")]
    BadNodeCount { n: usize },
    #[error(
        "coupling {lambda_eff} exceeds the kernel-stage cap {LAMBDA_KERNEL_CAP}; \
         use the closed-form bounds at this scale"
    )]
    CouplingTooLarge { lambda_eff: f64 },
    #[error("outer-region truncation tail is exp({log_tail}); need below exp({log_required})")]
    TruncationTail { log_tail: f64, log_required: f64 },
    #[error("discretized kernel is not positive semidefinite: eigenvalue {eigenvalue}")]
    NotPositiveSemidefinite { eigenvalue: f64 },
}

/// Diagonal-route entropy with quadrature diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntropyResult {
    pub value: f64,
    pub region: Region,
    pub mode: EvalMode,
    pub quad_error: f64,
    pub evaluations: usize,
}

/// `S = −∫ p(u) log ρ(u, u) du` by adaptive quadrature, with subdivision
/// seeds covering the width-`1/(2λ)` layer at `u = 1`.
pub fn diagonal_entropy(
    region: Region,
    params: &ModelParams,
    norm: &Normalization,
    mode: EvalMode,
    tol: f64,
) -> Result<EntropyResult, EntropyError> {
    check_kernel_stage(params)?;
    let scale = 2.0 * params.lambda_eff();
    let p = *params;
    let n = *norm;
    let f = move |u: f64| diagonal_integrand(region, u, &p, &n, mode);
    let quad = match region {
        Region::A => quadrature::integrate_finite_seeded(
            f,
            0.0,
            1.0,
            &model::boundary_layer_breaks_inner(scale),
            tol,
        )?,
        Region::B => quadrature::integrate_semiinf_seeded(
            f,
            1.0,
            &model::boundary_layer_breaks_outer(scale),
            tol,
        )?,
    };
    Ok(EntropyResult {
        value: quad.value,
        region,
        mode,
        quad_error: quad.error_estimate,
        evaluations: quad.evaluations,
    })
}

/// Same integral on a fixed Gauss-Legendre rule (order `n`); the outer region
/// is truncated at [`region_b_y_max`] after checking the analytic tail bound.
/// Kept deliberately independent of the adaptive path so the two schemes
/// cross-validate each other.
pub fn diagonal_entropy_fixed_order(
    region: Region,
    n: usize,
    params: &ModelParams,
    norm: &Normalization,
    mode: EvalMode,
) -> Result<f64, EntropyError> {
    check_kernel_stage(params)?;
    check_node_count(n)?;
    let nodes = region_nodes(region, n, params, norm)?;
    let mut sum = 0.0;
    for (&u, &w) in nodes.nodes.iter().zip(nodes.weights.iter()) {
        sum += w * diagonal_integrand(region, u, params, norm, mode);
    }
    if !sum.is_finite() {
        return Err(EntropyError::Quadrature(
            QuadratureError::NonFiniteIntegrand { at: f64::NAN },
        ));
    }
    Ok(sum)
}

/// `−p(u) · log ρ(u, u)`, with the underflow of `p` taken as an exact zero
/// (the true contribution is `≲ p·|log p|`, far below any tolerance in use).
fn diagonal_integrand(
    region: Region,
    u: f64,
    params: &ModelParams,
    norm: &Normalization,
    mode: EvalMode,
) -> f64 {
    let kernel: Result<KernelEval, ModelError> = match region {
        Region::A => model::rho_a(u, u, params, norm, mode),
        Region::B => model::rho_b(u, u, params, norm, mode),
    };
    let Ok(kernel) = kernel else {
        return f64::NAN; // surfaces as NonFiniteIntegrand with the location
    };
    let log_p = model::LOG_4PI + 2.0 * u.ln() + kernel.log_value;
    let p = log_p.exp();
    if p == 0.0 {
        return 0.0;
    }
    -(p * kernel.log_value)
}

/// Truncation point for the outer region: `1 + (40/λ) max(1, log λ)` puts
/// the analytic tail bound far below 1e-12 for every supported coupling.
pub fn region_b_y_max(lambda_eff: f64) -> f64 {
    1.0 + (40.0 / lambda_eff) * lambda_eff.ln().max(1.0)
}

/// Log of an upper bound on the discarded outer mass
/// `∫_Y^∞ 4π y² ρ_B(y, y) dy`, from `E₄(s) ≤ e^{-s}/s`:
/// `tail ≤ 16π² C² e^{-2λY}(1 + 2λY)/(2λ)³`.
pub fn region_b_log_tail_bound(params: &ModelParams, norm: &Normalization, y_max: f64) -> f64 {
    let two_lambda = 2.0 * params.lambda_eff();
    model::LOG_16PI2 + norm.log_c2() - 3.0 * two_lambda.ln() - two_lambda * y_max
        + (1.0 + two_lambda * y_max).ln()
}

const LOG_TAIL_REQUIRED: f64 = -27.631_021_115_928_547; // ln(1e-12)

/// Symmetrized Nyström discretization of one region's kernel.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NystromMatrix {
    region: Region,
    mode: EvalMode,
    n: usize,
    nodes: Vec<f64>,
    data: Vec<f64>,
}

impl NystromMatrix {
    pub fn region(&self) -> Region {
        self.region
    }

    pub fn mode(&self) -> EvalMode {
        self.mode
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Row-major entries; symmetric bit-for-bit by construction.
    pub fn data(&self) -> &[f64] {
        &self.data
    }

    /// Discrete trace, which approximates the region's total probability.
    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.data[i * self.n + i]).sum()
    }

    /// Eigenvalues in descending order.
    pub fn eigenvalues(&self) -> Result<Vec<f64>, EntropyError> {
        Ok(linalg::symmetric_eigenvalues(self.data.clone(), self.n)?)
    }
}

/// Builds `M_ij = √(w_i μ_i) ρ(u_i, u_j) √(w_j μ_j)`, `μ = 4π u²`, on `n`
/// Gauss-Legendre nodes. The inner region uses `[0, 1]`; the outer region
/// uses `[1, y_max]` and fails loudly if the truncated tail is not
/// negligible.
pub fn nystrom_matrix(
    region: Region,
    n: usize,
    params: &ModelParams,
    norm: &Normalization,
    mode: EvalMode,
) -> Result<NystromMatrix, EntropyError> {
    check_kernel_stage(params)?;
    check_node_count(n)?;
    let nodes = region_nodes(region, n, params, norm)?;
    let factors: Vec<f64> = nodes
        .nodes
        .iter()
        .zip(nodes.weights.iter())
        .map(|(&u, &w)| (w * 4.0 * PI * u * u).sqrt())
        .collect();
    let mut data = vec![0.0; n * n];
    for i in 0..n {
        for j in i..n {
            let kernel = match region {
                Region::A => model::rho_a(nodes.nodes[i], nodes.nodes[j], params, norm, mode)?,
                Region::B => model::rho_b(nodes.nodes[i], nodes.nodes[j], params, norm, mode)?,
            };
            let entry = factors[i] * factors[j] * kernel.log_value.exp();
            data[i * n + j] = entry;
            data[j * n + i] = entry;
        }
    }
    Ok(NystromMatrix {
        region,
        mode,
        n,
        nodes: nodes.nodes,
        data,
    })
}

fn region_nodes(
    region: Region,
    n: usize,
    params: &ModelParams,
    norm: &Normalization,
) -> Result<NodeSet, EntropyError> {
    match region {
        Region::A => Ok(quadrature::gauss_legendre(n, 0.0, 1.0)),
        Region::B => {
            let y_max = region_b_y_max(params.lambda_eff());
            let log_tail = region_b_log_tail_bound(params, norm, y_max);
            if log_tail >= LOG_TAIL_REQUIRED {
                return Err(EntropyError::TruncationTail {
                    log_tail,
                    log_required: LOG_TAIL_REQUIRED,
                });
            }
            Ok(quadrature::gauss_legendre(n, 1.0, y_max))
        }
    }
}

/// Spectral-route entropy and its eigenvalue diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralResult {
    /// Descending; the squared-Schmidt-coefficient approximations.
    pub eigenvalues: Vec<f64>,
    pub entropy: f64,
    /// Total magnitude of small negatives clipped to zero.
    pub discarded_negative_mass: f64,
    pub region: Region,
    pub mode: EvalMode,
}

/// Eigendecomposes the Nyström matrix and returns `S = −Σ p log p`.
pub fn spectral_entropy(
    region: Region,
    n: usize,
    params: &ModelParams,
    norm: &Normalization,
    mode: EvalMode,
) -> Result<SpectralResult, EntropyError> {
    spectral_from_matrix(&nystrom_matrix(region, n, params, norm, mode)?)
}

/// The eigenvalue half of [`spectral_entropy`], reusable when the caller
/// already holds the matrix.
pub fn spectral_from_matrix(matrix: &NystromMatrix) -> Result<SpectralResult, EntropyError> {
    let raw = matrix.eigenvalues()?;
    let mut eigenvalues = Vec::with_capacity(raw.len());
    let mut discarded = 0.0;
    for &p in &raw {
        if p < EIG_CLIP_FLOOR {
            return Err(EntropyError::NotPositiveSemidefinite { eigenvalue: p });
        }
        if p < 0.0 {
            discarded += -p;
            eigenvalues.push(0.0);
        } else {
            eigenvalues.push(p);
        }
    }
    let mut entropy = 0.0;
    for &p in &eigenvalues {
        if p > 0.0 {
            entropy -= p * p.ln();
        }
    }
    // Rounding can leave a −1e-18 residue when one eigenvalue dominates.
    entropy = entropy.max(0.0);
    Ok(SpectralResult {
        eigenvalues,
        entropy,
        discarded_negative_mass: discarded,
        region: matrix.region(),
        mode: matrix.mode(),
    })
}

/// The three nested large-λ entropy estimates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundVariant {
    /// Full prefactor `16π² C² e^{-2λ}` with the `1/λ` correction; honors
    /// whichever normalization it is given.
    Intermediate,
    /// `(λ²/3)(1 − (12/λ)(a log(λ/π) + b))`.
    Subleading,
    /// `λ²/3`.
    Leading,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundResult {
    pub value: f64,
    pub variant: BoundVariant,
    pub lambda_eff: f64,
    /// Whether `λ_eff` is above [`asymptotic_regime_min_lambda`]; below it
    /// the `1/λ` correction changes sign and the estimates lose meaning.
    pub in_asymptotic_regime: bool,
}

/// Closed-form entropy estimate. `Intermediate` reads `log C²` off `norm`
/// (so it can be driven by either the exact or the asymptotic
/// normalization); the other two depend on `λ_eff` alone.
pub fn bound(variant: BoundVariant, params: &ModelParams, norm: &Normalization) -> BoundResult {
    let lambda = params.lambda_eff();
    let a = SUBLEADING_LOG_COEFF;
    let b = SUBLEADING_CONST_COEFF;
    let value = match variant {
        BoundVariant::Leading => lambda * lambda / 3.0,
        BoundVariant::Subleading => {
            lambda * lambda / 3.0 * (1.0 - (12.0 / lambda) * (a * (lambda / PI).ln() + b))
        }
        BoundVariant::Intermediate => {
            let prefactor = (model::LOG_16PI2 + norm.log_c2() - 2.0 * lambda).exp();
            let correction = a * (model::LOG_4PI + norm.log_c2() - lambda.ln()) + b;
            prefactor * (1.0 / 3.0 - correction / lambda)
        }
    };
    BoundResult {
        value,
        variant,
        lambda_eff: lambda,
        in_asymptotic_regime: lambda >= asymptotic_regime_min_lambda(),
    }
}

/// `λ = π e^{-b/a}`: where the subleading correction factor crosses zero.
pub fn asymptotic_regime_min_lambda() -> f64 {
    PI * (-SUBLEADING_CONST_COEFF / SUBLEADING_LOG_COEFF).exp()
}

/// Everything computed for one parameter point, serialization-ready.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntropyReport {
    pub schema_version: u32,
    pub lambda: f64,
    pub x0: f64,
    pub lambda_eff: f64,
    pub mode: EvalMode,
    pub tol: f64,
    pub spectral_nodes: Option<usize>,
    pub log_c2: f64,
    pub diagonal_entropy_a: Option<f64>,
    pub diagonal_entropy_b: Option<f64>,
    /// `|S_A − S_B|` of the diagonal route, when both sides computed.
    pub diagonal_gap: Option<f64>,
    pub spectral_entropy_a: Option<f64>,
    pub spectral_entropy_b: Option<f64>,
    pub discarded_negative_mass: Option<f64>,
    pub bound_intermediate: f64,
    pub bound_subleading: f64,
    pub bound_leading: f64,
    pub in_asymptotic_regime: bool,
    pub flags: Vec<String>,
    pub errors: Vec<String>,
}

/// Runs the full stack at one parameter point. Bound values always compute;
/// kernel-stage quantities (diagonal, spectral) are attempted and their
/// failures collected into `errors` rather than aborting the report.
pub fn entropy_report(
    params: &ModelParams,
    mode: EvalMode,
    tol: f64,
    spectral_nodes: Option<usize>,
) -> Result<EntropyReport, EntropyError> {
    let norm = Normalization::compute(params, mode, tol)?;
    let intermediate = bound(BoundVariant::Intermediate, params, &norm);
    let subleading = bound(BoundVariant::Subleading, params, &norm);
    let leading = bound(BoundVariant::Leading, params, &norm);

    let mut flags = Vec::new();
    let mut errors = Vec::new();
    if !intermediate.in_asymptotic_regime {
        flags.push(format!(
            "coupling below asymptotic regime threshold {:.6}",
            asymptotic_regime_min_lambda()
        ));
    }

    let mut diagonal_entropy_a = None;
    let mut diagonal_entropy_b = None;
    let mut spectral_entropy_a = None;
    let mut spectral_entropy_b = None;
    let mut discarded_negative_mass: Option<f64> = None;

    if params.lambda_eff() > LAMBDA_KERNEL_CAP {
        flags.push(format!(
            "kernel-stage quantities skipped: coupling exceeds cap {LAMBDA_KERNEL_CAP}"
        ));
    } else {
        for (region, slot) in [
            (Region::A, &mut diagonal_entropy_a),
            (Region::B, &mut diagonal_entropy_b),
        ] {
            match diagonal_entropy(region, params, &norm, mode, tol) {
                Ok(r) => *slot = Some(r.value),
                Err(e) => errors.push(format!("diagonal entropy {region:?}: {e}")),
            }
        }
        if let Some(n) = spectral_nodes {
            for (region, slot) in [
                (Region::A, &mut spectral_entropy_a),
                (Region::B, &mut spectral_entropy_b),
            ] {
                match spectral_entropy(region, n, params, &norm, mode) {
                    Ok(r) => {
                        *slot = Some(r.entropy);
                        let worst = discarded_negative_mass
                            .unwrap_or(0.0)
                            .max(r.discarded_negative_mass);
                        discarded_negative_mass = Some(worst);
                    }
                    Err(e) => errors.push(format!("spectral entropy {region:?}: {e}")),
                }
            }
        }
    }

    for (region, value) in [("A", diagonal_entropy_a), ("B", diagonal_entropy_b)] {
        if value.is_some_and(|v| v < 0.0) {
            flags.push(format!(
                "diagonal (differential) entropy negative in region {region}"
            ));
        }
    }

    let diagonal_gap = match (diagonal_entropy_a, diagonal_entropy_b) {
        (Some(a), Some(b)) => Some((a - b).abs()),
        _ => None,
    };

    Ok(EntropyReport {
        schema_version: REPORT_SCHEMA_VERSION,
        lambda: params.lambda(),
        x0: params.x0(),
        lambda_eff: params.lambda_eff(),
        mode,
        tol,
        spectral_nodes,
        log_c2: norm.log_c2(),
        diagonal_entropy_a,
        diagonal_entropy_b,
        diagonal_gap,
        spectral_entropy_a,
        spectral_entropy_b,
        discarded_negative_mass,
        bound_intermediate: intermediate.value,
        bound_subleading: subleading.value,
        bound_leading: leading.value,
        in_asymptotic_regime: intermediate.in_asymptotic_regime,
        flags,
        errors,
    })
}

fn check_kernel_stage(params: &ModelParams) -> Result<(), EntropyError> {
    if params.lambda_eff() > LAMBDA_KERNEL_CAP {
        return Err(EntropyError::CouplingTooLarge {
            lambda_eff: params.lambda_eff(),
        });
    }
    Ok(())
}

fn check_node_count(n: usize) -> Result<(), EntropyError> {
    if n == 0 || n > MAX_NYSTROM_NODES {
        return Err(EntropyError::BadNodeCount { n });
    }
    Ok(())
}
