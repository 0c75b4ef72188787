//! Named suites of experiments over configurable parameter grids. Every
//! experiment returns a report; numerical errors become failing metrics.

use std::f64::consts::{FRAC_PI_4, PI};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::report::{Bound, ExperimentKind, ExperimentReport};
use super::{completeness_scan, orthogonality_scan, GridSpec};
use crate::exponent::{ComplexLabel, GaussianKet};
use crate::phase_space::symplectic_of_u;
use crate::squeezer::{
    apply_u_exact, asymptotic_fidelity, balanced_factorization_gap, bs_output_two_squeezed,
    bs_output_via_splitter, build_u_fock, diagonalize_m, guarded_unitarity_gap, matrix_m,
    squeeze_action_check, unitarity_check, variance_closed_form, variance_fock,
    variance_phase_space, SqueezeParams,
};
use crate::states::{make_eta_state, make_eta_theta_state, verify_eta_theta_relations, verify_not_rotated};
use crate::tolerances::*;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Relations,
    Unitarity,
    Variances,
    Squeeze,
    Completeness,
    Orthogonality,
    Asymptotics,
    Properties,
    All,
}

impl Suite {
    pub const NAMES: [&'static str; 9] = [
        "relations",
        "unitarity",
        "variances",
        "squeeze",
        "completeness",
        "orthogonality",
        "asymptotics",
        "properties",
        "all",
    ];
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "relations" => Suite::Relations,
            "unitarity" => Suite::Unitarity,
            "variances" => Suite::Variances,
            "squeeze" => Suite::Squeeze,
            "completeness" => Suite::Completeness,
            "orthogonality" => Suite::Orthogonality,
            "asymptotics" => Suite::Asymptotics,
            "properties" => Suite::Properties,
            "all" => Suite::All,
            other => {
                return Err(Error::InvalidParameter(format!(
                    "unknown suite {other:?}; expected one of {}",
                    Suite::NAMES.join(", ")
                )))
            }
        })
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let i = *self as usize;
        f.write_str(Suite::NAMES[i])
    }
}

/// Parameter grids for every experiment. Defaults are the acceptance grids.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub thetas: Vec<f64>,
    /// Values taken by each of the real labels `η₁, η₂`.
    pub eta_components: Vec<f64>,
    pub cutoff: usize,
    pub guard: usize,
    pub not_rotated_cutoff: usize,
    pub lambdas: Vec<f64>,
    pub variance_cutoff: usize,
    pub squeeze_eta: [f64; 2],
    pub squeeze_lambda: f64,
    pub squeeze_thetas: Vec<f64>,
    pub squeeze_cutoff: usize,
    pub squeeze_guard: usize,
    pub factorization_lambda: f64,
    pub factorization_theta: f64,
    pub factorization_cutoff: usize,
    pub factorization_guard: usize,
    pub completeness_thetas: Vec<f64>,
    pub grid_radius: f64,
    pub grid_step: f64,
    pub completeness_cutoff: usize,
    pub completeness_subspace: usize,
    pub orthogonality_thetas: Vec<f64>,
    /// Complex label pairs `[re, im, re′, im′]`.
    pub orthogonality_pairs: Vec<[f64; 4]>,
    pub orthogonality_cutoffs: Vec<usize>,
    pub asymptotic_lambdas: Vec<f64>,
    pub asymptotic_theta: f64,
    pub asymptotic_cutoff: usize,
    pub seed: u64,
    pub property_samples: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            thetas: vec![PI / 8.0, PI / 6.0, FRAC_PI_4, PI / 3.0, 3.0 * PI / 8.0],
            eta_components: vec![-1.0, -0.5, 0.0, 0.5, 1.0],
            cutoff: DEFAULT_CUTOFF,
            guard: DEFAULT_GUARD,
            not_rotated_cutoff: 40,
            lambdas: (1..=10).map(|k| k as f64 / 10.0).collect(),
            variance_cutoff: DEFAULT_CUTOFF,
            squeeze_eta: [0.5, 0.0],
            squeeze_lambda: 0.2,
            squeeze_thetas: vec![PI / 6.0, PI / 3.0],
            squeeze_cutoff: 56,
            squeeze_guard: 10,
            factorization_lambda: 0.3,
            factorization_theta: PI / 3.0,
            factorization_cutoff: DEFAULT_CUTOFF,
            factorization_guard: 10,
            completeness_thetas: vec![PI / 6.0, FRAC_PI_4, PI / 3.0],
            grid_radius: 4.0,
            grid_step: 0.25,
            completeness_cutoff: 24,
            completeness_subspace: 4,
            orthogonality_thetas: vec![PI / 6.0, PI / 3.0],
            orthogonality_pairs: vec![
                [0.0, 0.0, 0.5, 0.0],
                [0.0, 0.0, 0.0, 0.5],
                [0.5, 0.5, -0.5, 0.5],
                [0.0, 0.0, 1.0, 0.0],
            ],
            orthogonality_cutoffs: vec![24, 40, 56],
            asymptotic_lambdas: vec![1.0, 2.0, 3.0],
            asymptotic_theta: PI / 3.0,
            asymptotic_cutoff: DEFAULT_CUTOFF,
            seed: 0,
            property_samples: 64,
        }
    }
}

impl SuiteConfig {
    /// All `(η₁, η₂)` grid labels.
    pub fn eta_grid(&self) -> Vec<ComplexLabel> {
        let c = &self.eta_components;
        c.iter().flat_map(|&a| c.iter().map(move |&b| ComplexLabel::from_quadratures(a, b))).collect()
    }
}

fn is_balanced(theta: f64) -> bool {
    (theta - FRAC_PI_4).abs() < crate::ANGLE_EPS
}

/// Folds a fallible computation into a report: on error the metric is NaN,
/// so its bound fails, and the message is kept as a parameter.
fn record(r: &mut ExperimentReport, key: &str, bound: Bound, value: Result<f64>) {
    match value {
        Ok(v) => r.bounded(key, v, bound),
        Err(e) => {
            r.failed(key, bound);
            r.params.insert(format!("error_{key}"), e.to_string().into());
        }
    }
}

fn max_of(values: impl IntoIterator<Item = Result<f64>>) -> Result<f64> {
    values.into_iter().try_fold(0.0f64, |m, v| Ok(m.max(v?)))
}

fn min_of(values: impl IntoIterator<Item = Result<f64>>) -> Result<f64> {
    values.into_iter().try_fold(f64::INFINITY, |m, v| Ok(m.min(v?)))
}

pub fn relations_experiment(cfg: &SuiteConfig) -> ExperimentReport {
    let mut r = ExperimentReport::new(ExperimentKind::Relations)
        .param("thetas", cfg.thetas.clone())
        .param("eta_components", cfg.eta_components.clone())
        .param("cutoff", cfg.cutoff)
        .param("guard", cfg.guard);
    let mut general = Ok(0.0f64);
    let mut balanced = Ok(0.0f64);
    for &theta in &cfg.thetas {
        for eta in cfg.eta_grid() {
            match verify_eta_theta_relations(eta, theta, cfg.cutoff, cfg.guard) {
                Ok(rep) => {
                    for (name, v) in &rep.residuals {
                        let is_eta = ["a1_minus_a2dag", "a2_minus_a1dag", "x_difference", "p_sum"].contains(&name.as_str());
                        let slot = if is_eta { &mut balanced } else { &mut general };
                        if let Ok(m) = slot {
                            *m = m.max(*v);
                        }
                    }
                }
                Err(e) => general = Err(e),
            }
        }
    }
    record(&mut r, "max_residual", Bound::Below(RELATION_RESIDUAL), general);
    if cfg.thetas.iter().any(|&t| is_balanced(t)) {
        record(&mut r, "max_balanced_residual", Bound::Below(RELATION_RESIDUAL), balanced);
    }
    r.finish()
}

pub fn reduction_experiment(cfg: &SuiteConfig) -> ExperimentReport {
    let mut r = ExperimentReport::new(ExperimentKind::Reduction).param("eta_components", cfg.eta_components.clone());
    let v = max_of(
        cfg.eta_grid()
            .into_iter()
            .map(|eta| Ok(make_eta_theta_state(eta, FRAC_PI_4)?.max_coefficient_diff(&make_eta_state(eta)))),
    );
    record(&mut r, "max_coefficient_diff", Bound::Below(EXACT_FORM), v);
    r.finish()
}

pub fn not_rotated_experiment(cfg: &SuiteConfig) -> ExperimentReport {
    let mut gaps = Vec::new();
    for &theta in cfg.thetas.iter().filter(|&&t| !is_balanced(t)) {
        for eta in cfg.eta_grid().into_iter().filter(|e| e.eta() != C64::new(0.0, 0.0)) {
            gaps.push(verify_not_rotated(eta, theta, cfg.not_rotated_cutoff));
        }
    }
    let mut r = ExperimentReport::new(ExperimentKind::NotRotated)
        .param("thetas", cfg.thetas.clone())
        .param("cutoff", cfg.not_rotated_cutoff)
        .param("points", gaps.len());
    record(&mut r, "min_gap", Bound::Above(NOT_ROTATED_GAP), min_of(gaps));
    r.finish()
}

pub fn unitarity_experiment(cfg: &SuiteConfig) -> ExperimentReport {
    let mut r = ExperimentReport::new(ExperimentKind::Unitarity)
        .param("lambdas", cfg.lambdas.clone())
        .param("thetas", cfg.thetas.clone());
    let grid: Vec<(f64, f64)> = cfg.lambdas.iter().flat_map(|&l| cfg.thetas.iter().map(move |&t| (l, t))).collect();
    let params = |(l, t): (f64, f64)| SqueezeParams::new(l, t);
    record(&mut r, "max_unitarity_deviation", Bound::Below(UNITARITY), max_of(grid.iter().map(|&g| Ok(unitarity_check(&params(g)?)))));
    record(
        &mut r,
        "max_symplectic_error",
        Bound::Below(SYMPLECTIC),
        max_of(grid.iter().map(|&(l, t)| Ok(symplectic_of_u(l, t)?.symplectic_error()))),
    );
    record(
        &mut r,
        "max_diagonalization_error",
        Bound::Below(1e-12),
        max_of(grid.iter().map(|&g| {
            let p = params(g)?;
            let m = matrix_m(&p).map(|v| C64::new(v, 0.0));
            Ok((diagonalize_m(&p).reconstruct(&p) - m).norm())
        })),
    );
    record(
        &mut r,
        "max_log_exp_error",
        Bound::Below(1e-12),
        max_of(grid.iter().map(|&g| {
            let p = params(g)?;
            let lm = diagonalize_m(&p).log_m.map(|v| C64::new(v, 0.0));
            let e = crate::fock::matrix::expm(&nalgebra::DMatrix::from_iterator(2, 2, lm.iter().copied()));
            let m = matrix_m(&p);
            Ok((0..2).flat_map(|i| (0..2).map(move |j| (i, j))).map(|(i, j)| (e[(i, j)].re - m[(i, j)]).abs().max(e[(i, j)].im.abs())).fold(0.0, f64::max))
        })),
    );
    record(
        &mut r,
        "max_determinant_error",
        Bound::Below(1e-12),
        max_of(grid.iter().map(|&g| {
            let p = params(g)?;
            Ok((matrix_m(&p).determinant() - (2.0 * p.theta).sin().powi(2) / p.s).abs())
        })),
    );
    r.finish()
}

pub fn variances_experiment(cfg: &SuiteConfig) -> ExperimentReport {
    let mut r = ExperimentReport::new(ExperimentKind::Variances)
        .param("lambdas", cfg.lambdas.clone())
        .param("thetas", cfg.thetas.clone())
        .param("fock_cutoff", cfg.variance_cutoff)
        .param("fock_max_lambda", VARIANCE_FOCK_MAX_LAMBDA);
    let grid: Vec<(f64, f64)> = cfg.lambdas.iter().flat_map(|&l| cfg.thetas.iter().map(move |&t| (l, t))).collect();
    let closed = |l: f64, t: f64| -> Result<(f64, f64)> { Ok(variance_closed_form(&SqueezeParams::new(l, t)?)) };

    record(
        &mut r,
        "max_closed_vs_phase_space",
        Bound::Below(VARIANCE_CLOSED),
        max_of(grid.iter().map(|&(l, t)| {
            let (x, p) = closed(l, t)?;
            let (xs, ps) = variance_phase_space(&SqueezeParams::new(l, t)?)?;
            Ok((x - xs).abs().max((p - ps).abs()))
        })),
    );
    record(
        &mut r,
        "max_closed_vs_fock_relative",
        Bound::Below(VARIANCE_FOCK),
        max_of(grid.iter().filter(|(l, _)| *l <= VARIANCE_FOCK_MAX_LAMBDA + 1e-12).map(|&(l, t)| {
            let (x, p) = closed(l, t)?;
            let (xf, pf) = variance_fock(&SqueezeParams::new(l, t)?, cfg.variance_cutoff)?;
            Ok(((x - xf) / x).abs().max(((p - pf) / p).abs()))
        })),
    );
    record(
        &mut r,
        "max_balanced_error",
        Bound::Below(VARIANCE_CLOSED),
        max_of(cfg.lambdas.iter().map(|&l| {
            let (x, p) = closed(l, FRAC_PI_4)?;
            Ok((x - (-2.0 * l).exp()).abs().max((p - (2.0 * l).exp()).abs()))
        })),
    );
    let gap = |l: f64, t: f64| -> Result<f64> { Ok(closed(l, t)?.1 - (2.0 * l).exp()) };
    record(
        &mut r,
        "min_p_bound_gap",
        Bound::AtLeast(-VARIANCE_BOUND_SLACK),
        min_of(grid.iter().map(|&(l, t)| gap(l, t))),
    );
    let off: Vec<_> = grid.iter().filter(|(l, t)| !is_balanced(*t) && *l != 0.0).collect();
    if !off.is_empty() {
        record(&mut r, "min_p_bound_gap_unbalanced", Bound::Above(0.0), min_of(off.iter().map(|&&(l, t)| gap(l, t))));
    }
    r.finish()
}

pub fn squeeze_action_experiment(cfg: &SuiteConfig) -> ExperimentReport {
    let eta = ComplexLabel::new(C64::new(cfg.squeeze_eta[0], cfg.squeeze_eta[1]));
    let mut r = ExperimentReport::new(ExperimentKind::SqueezeAction)
        .param("eta", cfg.squeeze_eta.to_vec())
        .param("lambda", cfg.squeeze_lambda)
        .param("thetas", cfg.squeeze_thetas.clone())
        .param("cutoff", cfg.squeeze_cutoff)
        .param("guard", cfg.squeeze_guard)
        .param("pad", LEAKAGE_PAD);
    let reports: Vec<_> = cfg
        .squeeze_thetas
        .iter()
        .map(|&t| squeeze_action_check(eta, &SqueezeParams::new(cfg.squeeze_lambda, t)?, cfg.squeeze_cutoff, cfg.squeeze_guard))
        .collect();
    record(&mut r, "max_fock_distance", Bound::Below(SQUEEZE_ACTION), max_of(reports.iter().map(|x| x.clone().map(|x| x.fock_distance))));
    record(&mut r, "max_exponent_discrepancy", Bound::Below(EXACT_FORM), max_of(reports.into_iter().map(|x| x.map(|x| x.exponent_discrepancy))));
    r.finish()
}

pub fn factorization_experiment(cfg: &SuiteConfig) -> ExperimentReport {
    let mut r = ExperimentReport::new(ExperimentKind::Factorization)
        .param("lambda", cfg.factorization_lambda)
        .param("theta", cfg.factorization_theta)
        .param("cutoff", cfg.factorization_cutoff)
        .param("guard", cfg.factorization_guard)
        .param("pad", LEAKAGE_PAD);
    record(
        &mut r,
        "balanced_vs_two_mode_squeezer",
        Bound::Below(FACTORIZATION),
        balanced_factorization_gap(cfg.factorization_lambda, cfg.factorization_cutoff, cfg.factorization_guard),
    );
    let gap = SqueezeParams::new(cfg.factorization_lambda, cfg.factorization_theta)
        .and_then(|p| build_u_fock(&p, cfg.factorization_cutoff))
        .and_then(|op| guarded_unitarity_gap(&op, cfg.factorization_guard));
    record(&mut r, "unitarity_gap", Bound::Below(FACTORIZATION), gap);
    r.finish()
}

fn errored(kind: ExperimentKind, key: &str, bound: Bound, e: Error) -> ExperimentReport {
    let mut r = ExperimentReport::new(kind).param("error", e.to_string());
    r.failed(key, bound);
    r.finish()
}

pub fn completeness_experiments(cfg: &SuiteConfig) -> Vec<ExperimentReport> {
    cfg.completeness_thetas
        .iter()
        .map(|&t| {
            GridSpec::new(cfg.grid_radius, cfg.grid_step, t, cfg.completeness_cutoff, cfg.completeness_subspace)
                .and_then(|g| completeness_scan(&g))
                .unwrap_or_else(|e| errored(ExperimentKind::Completeness, "diagonal_deviation", Bound::Below(COMPLETENESS_DIAGONAL), e))
        })
        .collect()
}

pub fn orthogonality_experiments(cfg: &SuiteConfig) -> Vec<ExperimentReport> {
    let pairs: Vec<_> = cfg
        .orthogonality_pairs
        .iter()
        .map(|p| (ComplexLabel::new(C64::new(p[0], p[1])), ComplexLabel::new(C64::new(p[2], p[3]))))
        .collect();
    cfg.orthogonality_thetas
        .iter()
        .map(|&t| {
            orthogonality_scan(t, &pairs, &cfg.orthogonality_cutoffs)
                .unwrap_or_else(|e| errored(ExperimentKind::Orthogonality, "max_successive_ratio", Bound::Below(1.0), e))
        })
        .collect()
}

pub fn asymptotics_experiment(cfg: &SuiteConfig) -> ExperimentReport {
    let mut r = ExperimentReport::new(ExperimentKind::Asymptotics)
        .param("lambdas", cfg.asymptotic_lambdas.clone())
        .param("theta", cfg.asymptotic_theta)
        .param("cutoff", cfg.asymptotic_cutoff);
    record(
        &mut r,
        "splitter_route_diff",
        Bound::Below(EXACT_FORM),
        max_of(cfg.asymptotic_lambdas.iter().map(|&l| {
            Ok(bs_output_two_squeezed(l, cfg.asymptotic_theta)?.max_coefficient_diff(&bs_output_via_splitter(l, cfg.asymptotic_theta)?))
        })),
    );
    let fids: Result<Vec<f64>> = cfg
        .asymptotic_lambdas
        .iter()
        .map(|&l| asymptotic_fidelity(l, cfg.asymptotic_theta, cfg.asymptotic_cutoff))
        .collect();
    match fids {
        Ok(f) => {
            for (l, v) in cfg.asymptotic_lambdas.iter().zip(&f) {
                r.metric(format!("fidelity_lambda_{l}"), *v);
            }
            if let Some(last) = f.last() {
                r.bounded("fidelity_at_largest_lambda", *last, Bound::Above(ASYMPTOTIC_FIDELITY));
            }
            let step = f.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
            if f.len() > 1 {
                r.bounded("min_fidelity_increment", step, Bound::Above(0.0));
            }
        }
        Err(e) => record(&mut r, "fidelity_at_largest_lambda", Bound::Above(ASYMPTOTIC_FIDELITY), Err(e)),
    }
    r.finish()
}

/// Randomized spot checks at seeded `(λ, θ, η)` samples.
pub fn properties_experiment(cfg: &SuiteConfig) -> ExperimentReport {
    let mut r = ExperimentReport::new(ExperimentKind::Properties)
        .param("seed", cfg.seed)
        .param("samples", cfg.property_samples);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let samples: Vec<(f64, f64, C64)> = (0..cfg.property_samples)
        .map(|_| {
            let l = rng.gen_range(-1.0..1.0);
            let t = rng.gen_range(0.05..(PI / 2.0 - 0.05));
            let eta = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            (l, t, eta)
        })
        .collect();
    record(
        &mut r,
        "max_unitarity_deviation",
        Bound::Below(UNITARITY),
        max_of(samples.iter().map(|&(l, t, _)| Ok(unitarity_check(&SqueezeParams::new(l, t)?)))),
    );
    record(
        &mut r,
        "max_symplectic_error",
        Bound::Below(SYMPLECTIC),
        max_of(samples.iter().map(|&(l, t, _)| Ok(symplectic_of_u(l, t)?.symplectic_error()))),
    );
    record(
        &mut r,
        "max_variance_mismatch",
        Bound::Below(VARIANCE_CLOSED * 10.0),
        max_of(samples.iter().map(|&(l, t, _)| {
            let p = SqueezeParams::new(l, t)?;
            let (x, pp) = variance_closed_form(&p);
            let (xs, ps) = variance_phase_space(&p)?;
            Ok(((x - xs) / x).abs().max(((pp - ps) / pp).abs()))
        })),
    );
    record(
        &mut r,
        "max_exact_squeeze_discrepancy",
        Bound::Below(1e-12),
        max_of(samples.iter().map(|&(l, t, eta)| {
            let p = SqueezeParams::new(l, t)?;
            let eta = ComplexLabel::new(eta);
            let out = GaussianKet::from_exponent(apply_u_exact(&p, make_eta_theta_state(eta, t)?.exponent())?)?;
            let tgt = make_eta_theta_state(eta.scaled(1.0 / p.mu), t)?.exponent().scaled((1.0 / p.mu).into());
            Ok(out.max_coefficient_diff(&GaussianKet::from_exponent(tgt)?))
        })),
    );
    r.finish()
}

/// All experiments of a suite, in a fixed order.
pub fn run_suite(suite: Suite, cfg: &SuiteConfig) -> Vec<ExperimentReport> {
    match suite {
        Suite::Relations => vec![relations_experiment(cfg), reduction_experiment(cfg), not_rotated_experiment(cfg)],
        Suite::Unitarity => vec![unitarity_experiment(cfg)],
        Suite::Variances => vec![variances_experiment(cfg)],
        Suite::Squeeze => vec![squeeze_action_experiment(cfg), factorization_experiment(cfg)],
        Suite::Completeness => completeness_experiments(cfg),
        Suite::Orthogonality => orthogonality_experiments(cfg),
        Suite::Asymptotics => vec![asymptotics_experiment(cfg)],
        Suite::Properties => vec![properties_experiment(cfg)],
        Suite::All => [
            Suite::Relations,
            Suite::Unitarity,
            Suite::Variances,
            Suite::Squeeze,
            Suite::Completeness,
            Suite::Orthogonality,
            Suite::Asymptotics,
            Suite::Properties,
        ]
        .into_iter()
        .flat_map(|s| run_suite(s, cfg))
        .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> SuiteConfig {
        SuiteConfig {
            thetas: vec![PI / 6.0, FRAC_PI_4],
            eta_components: vec![0.0, 0.5],
            cutoff: 20,
            guard: 6,
            not_rotated_cutoff: 20,
            lambdas: vec![0.2, 0.6],
            variance_cutoff: 20,
            property_samples: 8,
            ..SuiteConfig::default()
        }
    }

    #[test]
    fn suite_names_round_trip() {
        for name in Suite::NAMES {
            assert_eq!(name.parse::<Suite>().unwrap().to_string(), name);
        }
        assert!("bogus".parse::<Suite>().is_err());
    }

    #[test]
    fn default_grid_sizes() {
        let c = SuiteConfig::default();
        assert_eq!(c.eta_grid().len(), 25);
        assert_eq!(c.lambdas.len(), 10);
        assert!((c.lambdas[9] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn small_suites_pass() {
        let c = small();
        for e in [relations_experiment(&c), reduction_experiment(&c), not_rotated_experiment(&c), unitarity_experiment(&c), variances_experiment(&c), properties_experiment(&c)] {
            assert!(e.pass, "{:?}", e.violations());
        }
    }

    #[test]
    fn errors_become_failing_metrics() {
        let c = SuiteConfig { thetas: vec![0.0], ..small() };
        let r = unitarity_experiment(&c);
        assert!(!r.pass);
        assert!(r.metrics["max_unitarity_deviation"].is_nan());
        assert!(r.params.contains_key("error_max_unitarity_deviation"));
    }

    #[test]
    fn properties_are_seeded() {
        let a = properties_experiment(&small());
        let b = properties_experiment(&small());
        assert_eq!(a.metrics, b.metrics);
        let c = properties_experiment(&SuiteConfig { seed: 9, ..small() });
        assert_ne!(a.metrics, c.metrics);
    }
}
