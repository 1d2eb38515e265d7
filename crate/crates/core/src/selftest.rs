//! Built-in consistency checks, runnable from the CLI. Every check compares
//! two independent routes to the same number (or a computed value against an
//! exact identity), so a pass means the numerical stack is wired together
//! coherently on this machine, not merely that it compiles.

use crate::entropy::{self, BoundVariant};
use crate::model::{self, EvalMode, ModelParams, Normalization, Region};
use crate::physics::PhysicalConstants;
use crate::quadrature;
use crate::specfun;
use serde::Serialize;

/// `Quick` runs the sub-second identities; `Full` adds the dense
/// eigensolve and quadrature cross-validation stages.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Depth {
    Quick,
    Full,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

type Check = (&'static str, fn() -> Result<String, String>);

pub fn run(depth: Depth) -> Vec<CheckResult> {
    let mut checks: Vec<Check> = vec![
        ("exponential integral recurrence", check_expn_recurrence),
        ("quadrature against closed forms", check_quadrature_battery),
        ("normalization via two routes", check_normalization_routes),
        ("kernel traces carry unit mass", check_unit_mass),
        ("bound forms collapse consistently", check_bound_identity),
        ("planck scale from constants", check_planck_scales),
    ];
    if depth == Depth::Full {
        checks.push(("diagonal entropy via two schemes", check_dual_scheme));
        checks.push((
            "schmidt spectra agree across regions",
            check_schmidt_symmetry,
        ));
    }
    checks
        .into_iter()
        .map(|(name, f)| match f() {
            Ok(detail) => CheckResult {
                name,
                passed: true,
                detail,
            },
            Err(detail) => CheckResult {
                name,
                passed: false,
                detail,
            },
        })
        .collect()
}

fn check_expn_recurrence() -> Result<String, String> {
    // n E_{n+1}(s) = e^{-s} − s E_n(s), in scaled form.
    let mut worst: f64 = 0.0;
    for &s in &[0.1, 0.7, 1.0, 3.0, 20.0, 400.0] {
        for n in 1..=6u32 {
            let en = specfun::expn_scaled(n, s).map_err(|e| e.to_string())?;
            let next = specfun::expn_scaled(n + 1, s).map_err(|e| e.to_string())?;
            let residual = (f64::from(n) * next + s * en - 1.0).abs();
            worst = worst.max(residual);
        }
    }
    if worst < 1e-10 {
        Ok(format!("worst residual {worst:.2e}"))
    } else {
        Err(format!("worst residual {worst:.2e} exceeds 1e-10"))
    }
}

fn check_quadrature_battery() -> Result<String, String> {
    let rule = quadrature::gauss_legendre(6, -1.0, 1.0);
    let degree_ten: f64 = rule
        .nodes
        .iter()
        .zip(rule.weights.iter())
        .map(|(&x, &w)| w * x.powi(10))
        .sum();
    let cases: [(&str, f64, f64); 3] = [
        (
            "sin on [0, 1]",
            quadrature::integrate_finite(|x| x.sin(), 0.0, 1.0, 1e-12)
                .map_err(|e| e.to_string())?
                .value,
            1.0 - 1.0f64.cos(),
        ),
        (
            "x e^{-x} on [0, inf)",
            quadrature::integrate_semiinf(|x| x * (-x).exp(), 0.0, 1e-12)
                .map_err(|e| e.to_string())?
                .value,
            1.0,
        ),
        ("gauss-legendre degree check", degree_ten, 2.0 / 11.0),
    ];
    let mut worst: f64 = 0.0;
    for (name, got, want) in cases {
        let rel = ((got - want) / want).abs();
        if rel > 1e-10 {
            return Err(format!("{name}: relative error {rel:.2e}"));
        }
        worst = worst.max(rel);
    }
    Ok(format!("worst relative error {worst:.2e}"))
}

fn check_normalization_routes() -> Result<String, String> {
    let mut worst: f64 = 0.0;
    for &lambda in &[5.0, 50.0] {
        let params = ModelParams::new(lambda, 1.0).map_err(|e| e.to_string())?;
        let quad = Normalization::compute(&params, EvalMode::Exact, 1e-12)
            .map_err(|e| e.to_string())?
            .log_c2();
        let ladder = model::closed_form_norm_integral(lambda).map_err(|e| e.to_string())?;
        let closed = -(16.0 * std::f64::consts::PI.powi(2)).ln() - ladder;
        worst = worst.max(((quad - closed) / closed).abs());
    }
    if worst < 1e-10 {
        Ok(format!("worst log C² mismatch {worst:.2e}"))
    } else {
        Err(format!("log C² routes disagree by {worst:.2e}"))
    }
}

fn check_unit_mass() -> Result<String, String> {
    let params = ModelParams::new(5.0, 1.0).map_err(|e| e.to_string())?;
    let norm =
        Normalization::compute(&params, EvalMode::Exact, 1e-12).map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    for region in [Region::A, Region::B] {
        let m = entropy::nystrom_matrix(region, 100, &params, &norm, EvalMode::Exact)
            .map_err(|e| e.to_string())?;
        worst = worst.max((m.trace() - 1.0).abs());
    }
    if worst < 1e-8 {
        Ok(format!("worst |trace - 1| = {worst:.2e}"))
    } else {
        Err(format!("trace deviates from unit mass by {worst:.2e}"))
    }
}

fn check_bound_identity() -> Result<String, String> {
    let params = ModelParams::new(100.0, 1.0).map_err(|e| e.to_string())?;
    let norm =
        Normalization::compute(&params, EvalMode::Asymptotic, 1e-10).map_err(|e| e.to_string())?;
    let inter = entropy::bound(BoundVariant::Intermediate, &params, &norm).value;
    let sub = entropy::bound(BoundVariant::Subleading, &params, &norm).value;
    let rel = ((inter - sub) / sub).abs();
    if rel < 1e-12 {
        Ok(format!("intermediate vs subleading: {rel:.2e}"))
    } else {
        Err(format!("bound forms disagree by {rel:.2e}"))
    }
}

fn check_planck_scales() -> Result<String, String> {
    let c = PhysicalConstants::default();
    let lp = c.planck_length();
    let mp = c.planck_mass();
    let lp_rel = ((lp - 1.6162550239285501e-35) / 1.6162550239285501e-35).abs();
    let mp_rel = ((mp - 2.1764343420511267e-8) / 2.1764343420511267e-8).abs();
    let worst = lp_rel.max(mp_rel);
    if worst < 1e-9 {
        Ok(format!("planck length/mass within {worst:.2e}"))
    } else {
        Err(format!("planck scales off by {worst:.2e}"))
    }
}

fn check_dual_scheme() -> Result<String, String> {
    let params = ModelParams::new(10.0, 1.0).map_err(|e| e.to_string())?;
    let norm =
        Normalization::compute(&params, EvalMode::Exact, 1e-12).map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    for region in [Region::A, Region::B] {
        let adaptive = entropy::diagonal_entropy(region, &params, &norm, EvalMode::Exact, 1e-11)
            .map_err(|e| e.to_string())?
            .value;
        let fixed =
            entropy::diagonal_entropy_fixed_order(region, 200, &params, &norm, EvalMode::Exact)
                .map_err(|e| e.to_string())?;
        worst = worst.max(((adaptive - fixed) / fixed).abs());
    }
    if worst < 1e-8 {
        Ok(format!("worst scheme mismatch {worst:.2e}"))
    } else {
        Err(format!("schemes disagree by {worst:.2e}"))
    }
}

fn check_schmidt_symmetry() -> Result<String, String> {
    // The two marginals of a pure state share a spectrum, so their
    // entropies must agree no matter how differently the kernels look.
    let mut worst: f64 = 0.0;
    for &lambda in &[5.0, 10.0, 20.0, 50.0] {
        let params = ModelParams::new(lambda, 1.0).map_err(|e| e.to_string())?;
        let norm =
            Normalization::compute(&params, EvalMode::Exact, 1e-12).map_err(|e| e.to_string())?;
        let a = entropy::spectral_entropy(Region::A, 160, &params, &norm, EvalMode::Exact)
            .map_err(|e| e.to_string())?;
        let b = entropy::spectral_entropy(Region::B, 160, &params, &norm, EvalMode::Exact)
            .map_err(|e| e.to_string())?;
        worst = worst.max(((a.entropy - b.entropy) / b.entropy).abs());
    }
    if worst < 1e-5 {
        Ok(format!("worst spectral mismatch {worst:.2e}"))
    } else {
        Err(format!("spectral entropies differ by {worst:.2e}"))
    }
}
