//! Named two-mode states and the checks of their defining relations.
//!
//! `|η⟩` is the common eigenket of `X₁ − X₂` and `P₁ + P₂`; `|η,θ⟩` is the
//! output of the asymmetric beam splitter fed with a momentum eigenket in mode
//! 1 and a position eigenket in mode 2, displaced in mode 1 by `η`.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_4, PI};

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::exponent::{
    apply_beamsplitter, apply_displacement, scale, splitter_matrix, tensor, ComplexLabel, Exponent,
    GaussianKet, Mat2, Mode, Sym2,
};
use crate::fock::{eigen_residual, expand_exponent, fock_expand, BosonPoly};
use crate::tolerances::RELATION_RESIDUAL;
use crate::{check_theta, Error, Result, ANGLE_EPS};

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

/// Amplitudes of a lossless two-port: `b₁ = t a₁ + r′ a₂`, `b₂ = r a₁ + t′ a₂`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScatteringMatrix {
    pub t: C64,
    pub r: C64,
    pub t_prime: C64,
    pub r_prime: C64,
}

impl ScatteringMatrix {
    pub fn new(t: C64, r: C64, t_prime: C64, r_prime: C64) -> Self {
        ScatteringMatrix { t, r, t_prime, r_prime }
    }

    /// The reciprocal splitter `exp[θ(a₁†a₂ − a₂†a₁)]`.
    pub fn of_splitter(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self::new(c.into(), s.into(), c.into(), (-s).into())
    }

    /// Largest violation among the five reciprocity relations.
    pub fn reciprocity_violation(&self) -> f64 {
        let ScatteringMatrix { t, r, t_prime, r_prime } = *self;
        [
            (r_prime.norm() - r.norm()).abs(),
            (t_prime.norm() - t.norm()).abs(),
            (r.norm_sqr() + t.norm_sqr() - 1.0).abs(),
            (r.conj() * t_prime + r_prime * t.conj()).norm(),
            (r.conj() * t + r_prime * t_prime.conj()).norm(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

pub fn check_scattering_matrix(sm: &ScatteringMatrix) -> bool {
    sm.reciprocity_violation() <= 1e-12
}

/// `|η⟩ = exp(−|η|²/2 + ηa₁† − η*a₂† + a₁†a₂†)|00⟩`.
pub fn make_eta_state(eta: ComplexLabel) -> GaussianKet {
    let e = eta.eta();
    GaussianKet::new(
        (-0.5 * e.norm_sqr()).exp().into(),
        [e, -e.conj()],
        Sym2::real(0.0, 1.0, 0.0),
    )
    .expect("valid delta-normalized ket")
}

/// `|η,θ⟩` in closed form.
pub fn make_eta_theta_state(eta: ComplexLabel, theta: f64) -> Result<GaussianKet> {
    check_theta(theta)?;
    let e = eta.eta();
    let ec = e.conj();
    let (s2, c2) = (2.0 * theta).sin_cos();
    GaussianKet::new(
        (-0.5 * e.norm_sqr() + 0.5 * ec * ec * c2).exp(),
        [e - ec * c2, -ec * s2],
        Sym2::real(c2, s2, -c2),
    )
}

/// Position eigenket `|x⟩` of one mode.
pub fn make_x_eigenket(x: f64, mode: Mode) -> GaussianKet {
    single_mode(mode, PI.powf(-0.25) * (-0.5 * x * x).exp(), C64::new(2f64.sqrt() * x, 0.0), -1.0)
}

/// Momentum eigenket `|p⟩` of one mode.
pub fn make_p_eigenket(p: f64, mode: Mode) -> GaussianKet {
    single_mode(mode, PI.powf(-0.25) * (-0.5 * p * p).exp(), C64::new(0.0, 2f64.sqrt() * p), 1.0)
}

fn single_mode(mode: Mode, c: f64, w: C64, f: f64) -> GaussianKet {
    let (w, f) = match mode {
        Mode::One => ([w, ZERO], Sym2::real(f, 0.0, 0.0)),
        Mode::Two => ([ZERO, w], Sym2::real(0.0, 0.0, f)),
    };
    GaussianKet::new(c.into(), w, f).expect("valid delta-normalized ket")
}

/// `|η,θ⟩` built by the physical route: splitter on `|p=0⟩₁|x=0⟩₂`, then a
/// mode-1 displacement. The eigenkets carry `π^{-1/4}` each, which the closed
/// form drops; the factor `√π` restores it.
pub fn eta_theta_via_beamsplitter(eta: ComplexLabel, theta: f64) -> Result<GaussianKet> {
    check_theta(theta)?;
    let inputs = tensor(&make_p_eigenket(0.0, Mode::One), &make_x_eigenket(0.0, Mode::Two))?;
    let mixed = scale(&apply_beamsplitter(&inputs, theta), PI.sqrt().into())?;
    Ok(apply_displacement(&mixed, Mode::One, eta))
}

/// An operator relation `O|ψ⟩ = λ|ψ⟩`.
#[derive(Clone, Debug)]
pub struct Relation {
    pub name: &'static str,
    pub op: BosonPoly,
    pub eigenvalue: C64,
}

fn a1() -> BosonPoly {
    BosonPoly::a(Mode::One)
}
fn a2() -> BosonPoly {
    BosonPoly::a(Mode::Two)
}
fn ad1() -> BosonPoly {
    BosonPoly::adag(Mode::One)
}
fn ad2() -> BosonPoly {
    BosonPoly::adag(Mode::Two)
}

/// Relations satisfied by `|η,θ⟩`.
pub fn eta_theta_relations(eta: ComplexLabel, theta: f64) -> Result<Vec<Relation>> {
    check_theta(theta)?;
    let e = eta.eta();
    let ec = e.conj();
    let (s2, c2) = (2.0 * theta).sin_cos();
    let t = theta.tan();
    Ok(vec![
        Relation { name: "a1", op: a1() - ad2() * s2 - ad1() * c2, eigenvalue: e - ec * c2 },
        Relation { name: "a2", op: a2() - ad1() * s2 + ad2() * c2, eigenvalue: -ec * s2 },
        Relation { name: "a_mix_sin", op: a1() * s2 - a2() * c2 - ad2(), eigenvalue: e * s2 },
        Relation { name: "a_mix_cos", op: a1() * c2 + a2() * s2 - ad1(), eigenvalue: e * c2 - ec },
        Relation {
            name: "x_weighted",
            op: BosonPoly::x(Mode::Two) - BosonPoly::x(Mode::One) * t,
            eigenvalue: (-eta.eta1() * t).into(),
        },
        Relation {
            name: "p_weighted",
            op: BosonPoly::p(Mode::One) + BosonPoly::p(Mode::Two) * t,
            eigenvalue: eta.eta2().into(),
        },
    ])
}

/// Relations satisfied by `|η⟩`.
pub fn eta_relations(eta: ComplexLabel) -> Vec<Relation> {
    let e = eta.eta();
    vec![
        Relation { name: "a1_minus_a2dag", op: a1() - ad2(), eigenvalue: e },
        Relation { name: "a2_minus_a1dag", op: a2() - ad1(), eigenvalue: -e.conj() },
        Relation {
            name: "x_difference",
            op: BosonPoly::x(Mode::One) - BosonPoly::x(Mode::Two),
            eigenvalue: eta.eta1().into(),
        },
        Relation {
            name: "p_sum",
            op: BosonPoly::p(Mode::One) + BosonPoly::p(Mode::Two),
            eigenvalue: eta.eta2().into(),
        },
    ]
}

/// Guarded relative residuals of the defining relations of `|η,θ⟩`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub eta: [f64; 2],
    pub theta: f64,
    pub cutoff: usize,
    pub guard: usize,
    pub residuals: BTreeMap<String, f64>,
    pub pass: bool,
}

impl ResidualReport {
    pub fn max_residual(&self) -> f64 {
        self.residuals.values().copied().fold(0.0, f64::max)
    }
}

fn is_balanced(theta: f64) -> bool {
    (theta - FRAC_PI_4).abs() < ANGLE_EPS
}

/// Residuals of all six `|η,θ⟩` relations; at θ = π/4 the `|η⟩` relations
/// are added since the two states coincide.
pub fn verify_eta_theta_relations(
    eta: ComplexLabel,
    theta: f64,
    cutoff: usize,
    guard: usize,
) -> Result<ResidualReport> {
    let mut relations = eta_theta_relations(eta, theta)?;
    if is_balanced(theta) {
        relations.extend(eta_relations(eta));
    }
    let psi = fock_expand(&make_eta_theta_state(eta, theta)?, cutoff);
    let mut residuals = BTreeMap::new();
    for rel in &relations {
        residuals.insert(rel.name.to_string(), eigen_residual(&rel.op, &psi, rel.eigenvalue, guard)?);
    }
    let pass = residuals.values().all(|r| *r < RELATION_RESIDUAL);
    Ok(ResidualReport { eta: [eta.eta().re, eta.eta().im], theta, cutoff, guard, residuals, pass })
}

/// Mode mixings of `|η⟩` compared against `|η,θ⟩`, as creation-operator
/// substitution matrices: the splitter `exp[θ(a₁†a₂ − a₂†a₁)]` and its inverse,
/// and the non-unitary `exp[θ(a₁†a₂ + a₂†a₁)]`.
pub fn mixing_candidates(theta: f64) -> [(&'static str, Mat2); 3] {
    let (ch, sh) = (C64::new(theta.cosh(), 0.0), C64::new(theta.sinh(), 0.0));
    [
        ("splitter_minus", splitter_matrix(-theta)),
        ("splitter_plus", splitter_matrix(theta)),
        ("hyperbolic", Mat2::new(ch, sh, sh, ch)),
    ]
}

/// `1 − max F` over [`mixing_candidates`], with `F` the fidelity of truncated,
/// renormalized vectors.
pub fn verify_not_rotated(eta: ComplexLabel, theta: f64, cutoff: usize) -> Result<f64> {
    check_theta(theta)?;
    if is_balanced(theta) {
        return Err(Error::InvalidParameter("θ = π/4 is excluded: the states coincide".into()));
    }
    if eta.eta() == ZERO {
        return Err(Error::InvalidParameter("η = 0 is excluded".into()));
    }
    let target = fock_expand(&make_eta_theta_state(eta, theta)?, cutoff);
    let eta_ket = *make_eta_state(eta).exponent();
    let mut best = 0.0f64;
    for (_, r) in mixing_candidates(theta) {
        let mixed: Exponent = eta_ket.substitute_creation(&r);
        best = best.max(expand_exponent(&mixed, cutoff).fidelity(&target)?);
    }
    Ok(1.0 - best)
}
