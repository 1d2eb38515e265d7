//! Numerical laboratory for the entanglement entropy of a two-region bound
//! state.
//!
//! The model: a particle trapped inside a unit-radius boundary with an
//! exponentially decaying tail outside, `ψ(x, y) = C e^{-λ y / x}` with the
//! inner coordinate `x ∈ (0, 1]` and the outer coordinate `y ∈ [1, ∞)`,
//! both weighted by the radial measure `4π u² du`. Tracing out either side
//! leaves a one-dimensional reduced kernel whose spectrum gives the
//! entanglement entropy between the regions; the crate computes that
//! entropy several independent ways and compares the closed-form large-λ
//! estimates with the holographic area bound once λ is tied back to a
//! physical decay constant.
//!
//! Layers, bottom to top:
//!
//! * [`specfun`]: generalized exponential integrals `E_n(s)`, the special
//!   function everything reduces to, with a scaled form `e^s E_n(s)` that
//!   survives arbitrarily large arguments.
//! * [`quadrature`]: Gauss-Legendre rules and a globally adaptive
//!   Gauss-Kronrod integrator for finite and semi-infinite intervals.
//! * [`linalg`]: dense symmetric eigenvalues by cyclic Jacobi rotations.
//! * [`model`]: parameters, log-domain normalization, and the two reduced
//!   kernels `ρ_A`, `ρ_B`.
//! * [`entropy`]: diagonal and spectral entanglement entropies plus the
//!   closed-form `λ²/3`-family bounds.
//! * [`physics`]: SI constants, the map from (mass, energy, radius) to λ,
//!   and the holographic comparison.
//! * [`fitting`], [`selftest`]: scan regression helpers and built-in
//!   consistency checks.
//!
//! Numerical conventions: everything is `f64`, entropies are in nats, and
//! quantities spanning thousands of orders of magnitude are carried as
//! natural logarithms.

pub mod entropy;
pub mod fitting;
pub mod linalg;
pub mod model;
pub mod physics;
pub mod quadrature;
pub mod selftest;
pub mod specfun;

pub use entropy::{
    bound, diagonal_entropy, entropy_report, nystrom_matrix, spectral_entropy, BoundResult,
    BoundVariant, EntropyError, EntropyReport, EntropyResult, SpectralResult,
};
pub use model::{
    EvalMode, KernelEval, ModelError, ModelParams, Normalization, Region, LAMBDA_KERNEL_CAP,
};
pub use physics::{
    build_geometric, build_scenario, holographic_report, GeometricScenario, HolographicReport,
    PhysicalConstants, PhysicalScenario, PhysicsError,
};
pub use quadrature::{QuadratureError, QuadratureResult};
pub use specfun::{expn, expn_scaled, ExpnValue, SpecFunError};
