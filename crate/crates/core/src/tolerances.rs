//! Pinned numerical thresholds shared by the unit tests, the verification
//! suites and the CLI.

/// Guarded eigen-relation residual.
pub const RELATION_RESIDUAL: f64 = 1e-8;
/// Quadrature eigenket residual.
pub const QUADRATURE_RESIDUAL: f64 = 1e-7;
/// Equality of two exponent triples `(c, w, F)`.
pub const EXACT_FORM: f64 = 1e-14;
/// Minimum fidelity gap between `|η,θ⟩` and a mode-mixed `|η⟩`.
pub const NOT_ROTATED_GAP: f64 = 0.01;
/// Bogoliubov unitarity identities.
pub const UNITARITY: f64 = 1e-11;
/// `SΩSᵀ = Ω`.
pub const SYMPLECTIC: f64 = 1e-12;
/// Closed-form variance against the covariance oracle.
pub const VARIANCE_CLOSED: f64 = 1e-12;
/// Closed-form variance against truncated Fock numerics (relative).
pub const VARIANCE_FOCK: f64 = 1e-6;
/// Largest λ for Fock-basis variance checks.
pub const VARIANCE_FOCK_MAX_LAMBDA: f64 = 0.5;
/// Slack allowed below `e^{2λ}` in the P-variance inequality.
pub const VARIANCE_BOUND_SLACK: f64 = 1e-12;
/// Relative distance between `U|η,θ⟩` and `μ⁻¹|η/μ,θ⟩`.
pub const SQUEEZE_ACTION: f64 = 1e-6;
/// Guarded operator identities for the squeezer.
pub const FACTORIZATION: f64 = 1e-8;
/// Diagonal of the completeness sum, relative to 1.
pub const COMPLETENESS_DIAGONAL: f64 = 0.05;
/// Off-diagonal of the completeness sum.
pub const COMPLETENESS_OFF_DIAGONAL: f64 = 5e-2;
/// Change of the completeness deviation when the grid step is halved.
pub const GRID_CONVERGENCE: f64 = 1e-3;
/// Relative tolerance for the `1/sin2θ` ratio of the unweighted sum.
pub const WEIGHT_RATIO: f64 = 0.05;
/// Normalized fidelity of the large-λ asymptotic state.
pub const ASYMPTOTIC_FIDELITY: f64 = 0.999;

pub const DEFAULT_CUTOFF: usize = 48;
pub const DEFAULT_GUARD: usize = 8;
/// Extra Fock levels carried internally when applying the squeezer.
pub const LEAKAGE_PAD: usize = 32;
