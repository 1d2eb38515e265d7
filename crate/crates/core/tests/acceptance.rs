//! Acceptance gate: every release-level requirement, one test per criterion,
//! each emitting a single machine-greppable line
//!
//!   ACCEPTANCE Cn (label): PASS|FAIL: clause details
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines
//! for passing criteria too (the harness hides captured stdout otherwise).
//!
//! Clauses are asserted exactly as stated, at the stated tolerances. A
//! criterion whose stated envelope the mathematics cannot meet fails here
//! honestly rather than being loosened; the FAIL line carries the measured
//! values so the gap is quantified, not hidden.

#![allow(clippy::excessive_precision)] // reference values keep their full digits

use entlab_core::entropy::{self, BoundVariant};
use entlab_core::fitting;
use entlab_core::model::{EvalMode, ModelParams, Normalization, Region};
use entlab_core::physics::{self, PhysicalConstants, EV_JOULES};
use entlab_core::quadrature;
use entlab_core::specfun;

fn criterion(tag: &str, label: &str, clauses: &[(bool, String)]) {
    let passed = clauses.iter().all(|(ok, _)| *ok);
    let detail = clauses
        .iter()
        .map(|(ok, d)| format!("[{}] {d}", if *ok { "ok" } else { "FAILED" }))
        .collect::<Vec<_>>()
        .join("; ");
    let verdict = if passed { "PASS" } else { "FAIL" };
    let line = format!("ACCEPTANCE {tag} ({label}): {verdict}: {detail}");
    println!("{line}");
    assert!(passed, "{line}");
}

fn exact_setup(lambda: f64) -> (ModelParams, Normalization) {
    let params = ModelParams::new(lambda, 1.0).unwrap();
    let norm = Normalization::compute(&params, EvalMode::Exact, 1e-13).unwrap();
    (params, norm)
}

#[test]
fn c1_normalization_approach_rate() {
    let lambdas = [10.0, 20.0, 50.0, 100.0];
    let mut ratios = Vec::new();
    for &lambda in &lambdas {
        let params = ModelParams::new(lambda, 1.0).unwrap();
        let exact = Normalization::compute(&params, EvalMode::Exact, 1e-13).unwrap();
        let asym = Normalization::compute(&params, EvalMode::Asymptotic, 1e-13).unwrap();
        ratios.push((exact.log_c2() - asym.log_c2()).exp());
    }
    let monotone_toward_one =
        ratios.windows(2).all(|w| w[0] > w[1]) && ratios.iter().all(|r| *r > 1.0);
    let envelope_ok = lambdas
        .iter()
        .zip(ratios.iter())
        .all(|(&lambda, &r)| (r - 1.0).abs() < 0.5 / lambda);
    let measured = lambdas
        .iter()
        .zip(ratios.iter())
        .map(|(&l, &r)| format!("λ={l}: ratio-1={:.5} vs 0.5/λ={:.5}", r - 1.0, 0.5 / l))
        .collect::<Vec<_>>()
        .join(", ");
    criterion(
        "C1",
        "normalization approach rate",
        &[
            (
                monotone_toward_one,
                format!("ratio decreases monotonically toward 1: {ratios:?}"),
            ),
            (
                envelope_ok,
                format!("|ratio - 1| < 0.5/λ at each point: {measured}"),
            ),
        ],
    );
}

#[test]
fn c2_reduced_matrix_properties() {
    let mut worst_trace: f64 = 0.0;
    let mut symmetric = true;
    let mut min_eig = f64::INFINITY;
    for &lambda in &[5.0, 10.0, 20.0] {
        let (params, norm) = exact_setup(lambda);
        for region in [Region::A, Region::B] {
            let m = entropy::nystrom_matrix(region, 200, &params, &norm, EvalMode::Exact).unwrap();
            worst_trace = worst_trace.max((m.trace() - 1.0).abs());
            let n = m.size();
            for i in 0..n {
                for j in (i + 1)..n {
                    if m.data()[i * n + j].to_bits() != m.data()[j * n + i].to_bits() {
                        symmetric = false;
                    }
                }
            }
            let eigenvalues = m.eigenvalues().unwrap();
            min_eig = min_eig.min(eigenvalues.iter().copied().fold(f64::INFINITY, f64::min));
        }
    }
    criterion(
        "C2",
        "reduced matrix properties",
        &[
            (
                worst_trace < 1e-8,
                format!("unit trace within 1e-8: worst |trace-1| = {worst_trace:.2e}"),
            ),
            (symmetric, "kernel matrices bitwise symmetric".to_string()),
            (
                min_eig >= -1e-10,
                format!("eigenvalues >= -1e-10: min = {min_eig:.2e}"),
            ),
        ],
    );
}

#[test]
fn c3_schmidt_symmetry() {
    let mut worst_rel: f64 = 0.0;
    let mut worst_tail = f64::NEG_INFINITY;
    for &lambda in &[5.0, 10.0, 20.0] {
        let (params, norm) = exact_setup(lambda);
        let y_max = entropy::region_b_y_max(params.lambda_eff());
        worst_tail = worst_tail.max(entropy::region_b_log_tail_bound(&params, &norm, y_max));
        let a = entropy::spectral_entropy(Region::A, 200, &params, &norm, EvalMode::Exact)
            .unwrap()
            .entropy;
        let b = entropy::spectral_entropy(Region::B, 200, &params, &norm, EvalMode::Exact)
            .unwrap()
            .entropy;
        worst_rel = worst_rel.max(((a - b) / b).abs());
    }
    let tail_limit = 1e-12f64.ln();
    criterion(
        "C3",
        "schmidt symmetry of spectral entropies",
        &[
            (
                worst_rel < 1e-5,
                format!("S_A vs S_B relative gap < 1e-5 at n=200: worst = {worst_rel:.2e}"),
            ),
            (
                worst_tail < tail_limit,
                format!(
                    "outer truncation tail mass < 1e-12: worst log bound = {worst_tail:.1} (limit {tail_limit:.1})"
                ),
            ),
        ],
    );
}

#[test]
fn c4_diagonal_gap_convergence() {
    // Regression pins frozen from 40-digit quadrature after the adaptive and
    // fixed-order schemes were verified to agree.
    let pins = [
        (10.0, 0.5215214486987756),
        (20.0, 0.27765158212378986),
        (50.0, 0.11608032711488968),
        (100.0, 0.058986565520404876),
    ];
    let mut gaps = Vec::new();
    let mut worst_pin: f64 = 0.0;
    for (lambda, reference) in pins {
        let (params, norm) = exact_setup(lambda);
        let a = entropy::diagonal_entropy(Region::A, &params, &norm, EvalMode::Exact, 1e-11)
            .unwrap()
            .value;
        let b = entropy::diagonal_entropy(Region::B, &params, &norm, EvalMode::Exact, 1e-11)
            .unwrap()
            .value;
        let gap = (a - b).abs();
        gaps.push(gap);
        worst_pin = worst_pin.max(((gap - reference) / reference).abs());
    }
    let (params, norm) = exact_setup(10.0);
    let mut worst_scheme: f64 = 0.0;
    for region in [Region::A, Region::B] {
        let adaptive = entropy::diagonal_entropy(region, &params, &norm, EvalMode::Exact, 1e-11)
            .unwrap()
            .value;
        let fixed =
            entropy::diagonal_entropy_fixed_order(region, 200, &params, &norm, EvalMode::Exact)
                .unwrap();
        worst_scheme = worst_scheme.max(((adaptive - fixed) / fixed).abs());
    }
    criterion(
        "C4",
        "diagonal entropy gap convergence",
        &[
            (
                gaps.windows(2).all(|w| w[0] > w[1]),
                format!("|S_A - S_B| monotone decreasing: {gaps:?}"),
            ),
            (
                worst_pin < 1e-8,
                format!("pinned regression values reproduced: worst rel = {worst_pin:.2e}"),
            ),
            (
                worst_scheme < 1e-8,
                format!("dual-scheme agreement at λ=10: worst rel = {worst_scheme:.2e}"),
            ),
        ],
    );
}

#[test]
fn c5_bound_chain() {
    let mut ordering = true;
    let mut ordering_detail = Vec::new();
    for &lambda in &[5.0, 10.0, 20.0, 50.0] {
        let (params, norm) = exact_setup(lambda);
        let s_a = entropy::diagonal_entropy(Region::A, &params, &norm, EvalMode::Exact, 1e-11)
            .unwrap()
            .value;
        let inter = entropy::bound(BoundVariant::Intermediate, &params, &norm).value;
        if s_a > inter {
            ordering = false;
        }
        ordering_detail.push(format!("λ={lambda}: S_A={s_a:.4} <= bound={inter:.4}"));
    }
    let mut worst_identity: f64 = 0.0;
    for &lambda in &[10.0, 30.0, 100.0, 300.0] {
        let params = ModelParams::new(lambda, 1.0).unwrap();
        let asym = Normalization::compute(&params, EvalMode::Asymptotic, 1e-12).unwrap();
        let inter = entropy::bound(BoundVariant::Intermediate, &params, &asym).value;
        let sub = entropy::bound(BoundVariant::Subleading, &params, &asym).value;
        worst_identity = worst_identity.max(((inter - sub) / sub).abs());
    }
    let (p30, n30) = exact_setup(30.0);
    let sub30 = entropy::bound(BoundVariant::Subleading, &p30, &n30).value;
    let sub30_rel = ((sub30 - 280.30019527120783) / 280.30019527120783).abs();
    let mut leading_exact = true;
    for &lambda in &[7.0, 30.0, 1e4, 2.5e9] {
        let params = ModelParams::new(lambda, 1.0).unwrap();
        let norm = Normalization::compute(&params, EvalMode::Asymptotic, 1e-12).unwrap();
        if entropy::bound(BoundVariant::Leading, &params, &norm).value != lambda * lambda / 3.0 {
            leading_exact = false;
        }
    }
    criterion(
        "C5",
        "bound chain",
        &[
            (ordering, format!("S_A below intermediate bound: {}", ordering_detail.join(", "))),
            (
                worst_identity < 1e-12,
                format!(
                    "intermediate form reproduces subleading under asymptotic C²: worst rel = {worst_identity:.2e}"
                ),
            ),
            (
                sub30_rel < 1e-13,
                format!("subleading at λ=30 matches 15-digit reference: rel = {sub30_rel:.2e}"),
            ),
            (leading_exact, "leading bound equals λ²/3 exactly".to_string()),
        ],
    );
}

#[test]
fn c6_area_law_slopes() {
    // 21 log-spaced couplings across one decade.
    let lambdas: Vec<f64> = (0..21)
        .map(|i| 100.0 * 10f64.powf(i as f64 / 20.0))
        .collect();
    let leading: Vec<f64> = lambdas.iter().map(|&l| l * l / 3.0).collect();
    let subleading: Vec<f64> = lambdas
        .iter()
        .map(|&l| {
            let params = ModelParams::new(l, 1.0).unwrap();
            let norm = Normalization::compute(&params, EvalMode::Asymptotic, 1e-12).unwrap();
            entropy::bound(BoundVariant::Subleading, &params, &norm).value
        })
        .collect();
    let leading_fit = fitting::log_log_fit(&lambdas, &leading).unwrap();
    let subleading_fit = fitting::log_log_fit(&lambdas, &subleading).unwrap();
    let leading_dev = (leading_fit.slope - 2.0).abs();
    criterion(
        "C6",
        "area law slopes",
        &[
            (
                leading_dev < 1e-12,
                format!("leading bound log-log slope = 2 within 1e-12: dev = {leading_dev:.2e}"),
            ),
            (
                (1.9..=2.0).contains(&subleading_fit.slope),
                format!(
                    "subleading slope within [1.9, 2.0] over λ ∈ [100, 1000]: measured = {:.5}",
                    subleading_fit.slope
                ),
            ),
        ],
    );
}

struct SplitMix64(u64);

impl SplitMix64 {
    fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    fn log_uniform(&mut self, lo: f64, hi: f64) -> f64 {
        (lo.ln() + self.unit() * (hi.ln() - lo.ln())).exp()
    }
}

#[test]
fn c7_holographic_comparison() {
    let constants = PhysicalConstants::default();
    let electron =
        physics::build_scenario(9.1093837015e-31, 13.6 * EV_JOULES, 1.0, 1.0, &constants).unwrap();
    let eta_rel = ((electron.eta - 9.9e-51) / 9.9e-51).abs();
    let kappa_rel = ((electron.kappa - 1.89e10) / 1.89e10).abs();
    let gamma_rel = ((electron.gamma - 3.05e-25) / 3.05e-25).abs();
    let three_sig_figs = eta_rel < 5e-3 && kappa_rel < 5e-3 && gamma_rel < 5e-3;

    let mut rng = SplitMix64(0x5eed_cafe_f00d_0001);
    let mut worst_identity: f64 = 0.0;
    let lp = constants.planck_length();
    for _ in 0..100 {
        let mass = rng.log_uniform(1e-31, 1e-20);
        let energy = rng.log_uniform(1e-22, 1e-10);
        let radius = rng.log_uniform(1e-10, 1e3);
        let x0 = 1.0 - rng.unit();
        let dimensional = physics::build_scenario(mass, energy, radius, x0, &constants).unwrap();
        let geometric = physics::build_geometric(dimensional.gamma, radius / lp, x0).unwrap();
        worst_identity = worst_identity
            .max(((geometric.eta - dimensional.eta) / dimensional.eta).abs())
            .max(((geometric.lambda - dimensional.lambda) / dimensional.lambda).abs());
    }
    criterion(
        "C7",
        "holographic comparison",
        &[
            (
                three_sig_figs,
                format!(
                    "electron scenario to 3 significant figures: η = {:.4e} (expect ~9.9e-51), κ = {:.4e}, γ = {:.4e}",
                    electron.eta, electron.kappa, electron.gamma
                ),
            ),
            (electron.eta < 1.0, "η < 1 flag set".to_string()),
            (
                worst_identity < 1e-12,
                format!(
                    "geometric and dimensional routes agree over 100 seeded scenarios: worst rel = {worst_identity:.2e}"
                ),
            ),
        ],
    );
}

#[test]
fn c8_numerical_infrastructure() {
    // Scaled-form recurrence n Ê_{n+1}(s) = 1 − s Ê_n(s) across the grid.
    let mut worst_residual: f64 = 0.0;
    for &s in &[0.1, 0.5, 1.0, 2.0, 5.0, 20.0, 100.0, 2e4] {
        for n in 1..=6u32 {
            let en = specfun::expn_scaled(n, s).unwrap();
            let next = specfun::expn_scaled(n + 1, s).unwrap();
            worst_residual = worst_residual.max((f64::from(n) * next + s * en - 1.0).abs());
        }
    }

    // Gauss-Legendre exactness through degree 2n-1.
    let mut worst_gl: f64 = 0.0;
    for n in 1..=20usize {
        let rule = quadrature::gauss_legendre(n, -1.0, 1.0);
        for degree in 0..=(2 * n - 1) {
            let got: f64 = rule
                .nodes
                .iter()
                .zip(rule.weights.iter())
                .map(|(&x, &w)| w * x.powi(degree as i32))
                .sum();
            let want = if degree % 2 == 0 {
                2.0 / (degree as f64 + 1.0)
            } else {
                0.0
            };
            worst_gl = worst_gl.max((got - want).abs());
        }
    }

    // Ten closed-form integrals at a requested tolerance of 1e-12.
    let tol = 1e-12;
    let e = std::f64::consts::E;
    let pi = std::f64::consts::PI;
    let battery: [(f64, f64); 10] = [
        (
            quadrature::integrate_finite(|x| x.sin(), 0.0, 1.0, tol)
                .unwrap()
                .value,
            1.0 - 1.0f64.cos(),
        ),
        (
            quadrature::integrate_finite(|x| x.exp(), 0.0, 1.0, tol)
                .unwrap()
                .value,
            e - 1.0,
        ),
        (
            quadrature::integrate_finite(|x| 1.0 / (1.0 + x * x), 0.0, 1.0, tol)
                .unwrap()
                .value,
            pi / 4.0,
        ),
        (
            quadrature::integrate_finite(|x| (1.0 + x).ln(), 0.0, 1.0, tol)
                .unwrap()
                .value,
            2.0 * 2.0f64.ln() - 1.0,
        ),
        (
            quadrature::integrate_finite(
                |x| if x > 0.0 { (-20.0 / x).exp() } else { 0.0 },
                0.0,
                1.0,
                tol,
            )
            .unwrap()
            .value,
            9.404856430858149e-11,
        ),
        (
            quadrature::integrate_semiinf(|t| (-5.0 * t).exp() / t.powi(4), 1.0, tol)
                .unwrap()
                .value,
            7.829808450774252e-4,
        ),
        (
            quadrature::integrate_semiinf(|x| x * x * (-2.0 * x).exp(), 0.0, tol)
                .unwrap()
                .value,
            0.25,
        ),
        (
            quadrature::integrate_semiinf(|x| (-x * x).exp(), 0.0, tol)
                .unwrap()
                .value,
            pi.sqrt() / 2.0,
        ),
        (
            quadrature::integrate_semiinf(|x| x * (-x).exp(), 0.0, tol)
                .unwrap()
                .value,
            1.0,
        ),
        (
            quadrature::integrate_finite(|x| x.cos(), 0.0, 1.0, tol)
                .unwrap()
                .value,
            1.0f64.sin(),
        ),
    ];
    let mut worst_battery: f64 = 0.0;
    let mut battery_ok = true;
    for (got, want) in battery {
        let err = (got - want).abs();
        if err > tol.max(tol * want.abs()) {
            battery_ok = false;
        }
        worst_battery = worst_battery.max(err);
    }

    criterion(
        "C8",
        "numerical infrastructure",
        &[
            (
                worst_residual < 1e-10,
                format!("recurrence residuals < 1e-10: worst = {worst_residual:.2e}"),
            ),
            (
                worst_gl < 1e-12,
                format!(
                    "gauss-legendre exact through degree 2n-1, n <= 20: worst = {worst_gl:.2e}"
                ),
            ),
            (
                battery_ok,
                format!(
                    "10 closed-form integrals at tol 1e-12: worst abs error = {worst_battery:.2e}"
                ),
            ),
        ],
    );
}
