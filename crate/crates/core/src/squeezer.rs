//! The θ-dependent two-mode squeezer `U(λ, θ)`, which maps
//! `|η,θ⟩ → μ⁻¹|η/μ,θ⟩` with `μ = e^λ`.
//!
//! In normal order, with `c = coshλ`, `s = sinhλ`, `c₂ = cos2θ`, `s₂ = sin2θ`
//! and `S = c² − c₂²`,
//!
//! ```text
//! U = (s₂/√S) · exp[(s²c₂/2S)(a₁†² − a₂†²) + (s c s₂/S) a₁†a₂†]
//!             · exp(a†·lnM·a)
//!             · exp[(s²c₂/2S)(a₁² − a₂²) − (s c s₂/S) a₁a₂]
//! ```
//!
//! The middle factor is the passive transformation whose mode matrix is `M`.

use nalgebra::{Matrix2, Vector4};
use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::exponent::{Exponent, GaussianKet, Mat2, Sym2};
use crate::fock::{
    exp_series_apply, expand_exponent, expectation, fock_expand, BlockExp, BosonPoly, Charge,
    FockVector,
};
use crate::phase_space::{evolve, p_sum, quad_variance, symplectic_of_u, x_sum, GaussianState};
use crate::states::make_eta_theta_state;
use crate::tolerances::LEAKAGE_PAD;
use crate::exponent::{ComplexLabel, Mode};
use crate::{check_theta, Error, Result};

pub type RealMat2 = Matrix2<f64>;

/// Smallest cutoff accepted by [`build_u_fock`].
pub const MIN_CUTOFF: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SqueezeParams {
    pub lambda: f64,
    pub mu: f64,
    pub theta: f64,
    /// `cosh²λ − cos²2θ`
    pub s: f64,
    /// `coshλ·sin2θ + i·sinhλ·cos2θ`
    pub alpha: C64,
    /// `arg α`
    pub phi: f64,
}

impl SqueezeParams {
    pub fn new(lambda: f64, theta: f64) -> Result<Self> {
        check_theta(theta)?;
        if !lambda.is_finite() {
            return Err(Error::InvalidParameter(format!("λ must be finite, got {lambda}")));
        }
        let (ch, sh) = (lambda.cosh(), lambda.sinh());
        let (s2, c2) = (2.0 * theta).sin_cos();
        let alpha = C64::new(ch * s2, sh * c2);
        Ok(SqueezeParams {
            lambda,
            mu: lambda.exp(),
            theta,
            s: ch * ch - c2 * c2,
            alpha,
            phi: alpha.im.atan2(alpha.re),
        })
    }

    fn trig(&self) -> (f64, f64, f64, f64) {
        let (s2, c2) = (2.0 * self.theta).sin_cos();
        (self.lambda.cosh(), self.lambda.sinh(), c2, s2)
    }

    /// Coefficients `(s²c₂/S, s c s₂/S)` shared by the outer factors.
    fn outer(&self) -> (f64, f64) {
        let (c, s, c2, s2) = self.trig();
        (s * s * c2 / self.s, s * c * s2 / self.s)
    }

    /// `s₂/√S`.
    pub fn prefactor(&self) -> f64 {
        (2.0 * self.theta).sin() / self.s.sqrt()
    }
}

pub fn matrix_m(p: &SqueezeParams) -> RealMat2 {
    let (c, s, c2, s2) = p.trig();
    RealMat2::new(c * s2, s * c2, -s * c2, c * s2) * (s2 / p.s)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Diagonalization {
    pub alpha: C64,
    pub alpha_conj: C64,
    pub phi: f64,
    pub log_m: RealMat2,
}

impl Diagonalization {
    /// `V·diag(α, ᾱ)·V′·(s₂/S)` with `V = ½[[1, i],[i, 1]]`, `V′ = [[1, −i],[−i, 1]]`.
    pub fn reconstruct(&self, p: &SqueezeParams) -> Mat2 {
        let h = C64::new(0.5, 0.0);
        let ih = C64::new(0.0, 0.5);
        let one = C64::new(1.0, 0.0);
        let mi = C64::new(0.0, -1.0);
        let v = Mat2::new(h, ih, ih, h);
        let vp = Mat2::new(one, mi, mi, one);
        let d = Mat2::new(self.alpha, C64::new(0.0, 0.0), C64::new(0.0, 0.0), self.alpha_conj);
        v * d * vp * C64::new((2.0 * p.theta).sin() / p.s, 0.0)
    }
}

/// `M = (s₂/√S)·R(φ)`, so `ln M = [[ln(s₂/√S), φ],[−φ, ln(s₂/√S)]]`.
pub fn diagonalize_m(p: &SqueezeParams) -> Diagonalization {
    let l = p.prefactor().ln();
    Diagonalization {
        alpha: p.alpha,
        alpha_conj: p.alpha.conj(),
        phi: p.phi,
        log_m: RealMat2::new(l, p.phi, -p.phi, l),
    }
}

/// `U a U⁻¹ = M⁻¹(a − K a†)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Bogoliubov {
    pub m_inv: RealMat2,
    pub k: RealMat2,
}

impl Bogoliubov {
    pub fn m_inv_k(&self) -> RealMat2 {
        self.m_inv * self.k
    }

    /// `M⁻¹M̃⁻¹`.
    pub fn m_inv_m_inv_t(&self) -> RealMat2 {
        self.m_inv * self.m_inv.transpose()
    }
}

pub fn bogoliubov(p: &SqueezeParams) -> Bogoliubov {
    let (c, s, c2, s2) = p.trig();
    let cot = c2 / s2;
    Bogoliubov {
        m_inv: RealMat2::new(c, -cot * s, cot * s, c),
        k: RealMat2::new(s * c2, c * s2, c * s2, -s * c2) * (s / p.s),
    }
}

/// Larger of `max|M⁻¹KM̃⁻¹ − M⁻¹(M⁻¹K)ᵀ|` and `max|M⁻¹M̃⁻¹ − (M⁻¹K)(M⁻¹K)ᵀ − I|`.
pub fn unitarity_check(p: &SqueezeParams) -> f64 {
    let b = bogoliubov(p);
    let mk = b.m_inv_k();
    let first = b.m_inv * b.k * b.m_inv.transpose() - b.m_inv * mk.transpose();
    let second = b.m_inv_m_inv_t() - mk * mk.transpose() - RealMat2::identity();
    first.abs().max().max(second.abs().max())
}

fn ad(m: Mode) -> BosonPoly {
    BosonPoly::adag(m)
}

fn an(m: Mode) -> BosonPoly {
    BosonPoly::a(m)
}

/// Creation-quadratic generator of the left factor.
fn creation_generator(p: &SqueezeParams) -> BosonPoly {
    let (d, x) = p.outer();
    (ad(Mode::One) * ad(Mode::One) - ad(Mode::Two) * ad(Mode::Two)) * (0.5 * d)
        + ad(Mode::One) * ad(Mode::Two) * x
}

/// Annihilation-quadratic generator of the right factor.
fn annihilation_generator(p: &SqueezeParams) -> BosonPoly {
    let (d, x) = p.outer();
    (an(Mode::One) * an(Mode::One) - an(Mode::Two) * an(Mode::Two)) * (0.5 * d)
        - an(Mode::One) * an(Mode::Two) * x
}

/// `a†·lnM·a`.
fn passive_generator(p: &SqueezeParams) -> BosonPoly {
    let lm = diagonalize_m(p).log_m;
    let mut g = BosonPoly::zero();
    for (i, mi) in [Mode::One, Mode::Two].into_iter().enumerate() {
        for (j, mj) in [Mode::One, Mode::Two].into_iter().enumerate() {
            if lm[(i, j)] != 0.0 {
                g = g + ad(mi) * an(mj) * lm[(i, j)];
            }
        }
    }
    g
}

/// `U` on the truncated space, applied factor by factor on a padded working
/// box of `cutoff + pad` levels so that truncation leakage stays outside the
/// reported box.
#[derive(Debug)]
pub struct SqueezeOperator {
    params: SqueezeParams,
    cutoff: usize,
    working: usize,
    creation: BosonPoly,
    annihilation: BosonPoly,
    middle: BlockExp,
}

pub fn build_u_fock(p: &SqueezeParams, cutoff: usize) -> Result<SqueezeOperator> {
    SqueezeOperator::with_pad(p, cutoff, LEAKAGE_PAD)
}

impl SqueezeOperator {
    pub fn with_pad(p: &SqueezeParams, cutoff: usize, pad: usize) -> Result<Self> {
        if cutoff < MIN_CUTOFF {
            return Err(Error::InvalidParameter(format!(
                "squeezer needs cutoff ≥ {MIN_CUTOFF}, got {cutoff}"
            )));
        }
        let working = cutoff + pad;
        Ok(SqueezeOperator {
            params: *p,
            cutoff,
            working,
            creation: creation_generator(p),
            annihilation: annihilation_generator(p),
            middle: BlockExp::new(passive_generator(p), Charge::Total, working)?,
        })
    }

    pub fn params(&self) -> &SqueezeParams {
        &self.params
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn working_cutoff(&self) -> usize {
        self.working
    }

    fn max_order(&self) -> usize {
        2 * self.working + 8
    }

    fn lift(&self, v: &FockVector) -> Result<FockVector> {
        if v.cutoff() == self.working {
            Ok(v.clone())
        } else if v.cutoff() == self.cutoff {
            v.embed(self.working)
        } else {
            Err(Error::CutoffMismatch { left: self.cutoff, right: v.cutoff() })
        }
    }

    /// `U v` on the working box. `v` may be given at the reported cutoff
    /// (zero-padded) or at the working cutoff.
    pub fn apply_working(&self, v: &FockVector) -> Result<FockVector> {
        let x = self.lift(v)?;
        let x = exp_series_apply(&self.annihilation, &x, self.max_order())?;
        let x = self.middle.apply(&x)?;
        let x = exp_series_apply(&self.creation, &x, self.max_order())?;
        Ok(x.scaled(self.params.prefactor().into()))
    }

    /// `U† v` on the working box.
    pub fn apply_adjoint_working(&self, v: &FockVector) -> Result<FockVector> {
        let x = self.lift(v)?;
        let x = exp_series_apply(&self.creation.adjoint(), &x, self.max_order())?;
        let x = self.middle.apply_adjoint(&x)?;
        let x = exp_series_apply(&self.annihilation.adjoint(), &x, self.max_order())?;
        Ok(x.scaled(self.params.prefactor().into()))
    }

    /// `U v`, restricted to the reported box.
    pub fn apply(&self, v: &FockVector) -> Result<FockVector> {
        self.apply_working(v)?.restrict(self.cutoff)
    }

    /// `U† v`, restricted to the reported box.
    pub fn apply_adjoint(&self, v: &FockVector) -> Result<FockVector> {
        self.apply_adjoint_working(v)?.restrict(self.cutoff)
    }

    /// `U` on a ket expanded at the working cutoff.
    pub fn apply_ket(&self, ket: &GaussianKet) -> Result<FockVector> {
        self.apply(&fock_expand(ket, self.working))
    }

    /// Dense matrix on the reported box, one column per basis state.
    pub fn to_matrix(&self) -> Result<crate::fock::OperatorMatrix> {
        let dim = (self.cutoff + 1) * (self.cutoff + 1);
        let mut m = nalgebra::DMatrix::<C64>::zeros(dim, dim);
        for n1 in 0..=self.cutoff {
            for n2 in 0..=self.cutoff {
                let col = self.apply(&FockVector::basis(self.cutoff, n1, n2)?)?;
                let j = crate::fock::vector::index(self.cutoff, n1, n2);
                m.column_mut(j).copy_from_slice(col.amplitudes());
            }
        }
        crate::fock::OperatorMatrix::new(self.cutoff, m)
    }
}

/// Largest entry deviation of `U U†` from the identity on basis states with
/// `n₁ + n₂ ≤ cutoff − guard`.
pub fn guarded_unitarity_gap(op: &SqueezeOperator, guard: usize) -> Result<f64> {
    let n = op.cutoff();
    let keep = n.checked_sub(guard).ok_or_else(|| Error::InvalidParameter("guard above cutoff".into()))?;
    let mut worst = 0.0f64;
    for n1 in 0..=keep {
        for n2 in 0..=keep - n1 {
            let e = FockVector::basis(n, n1, n2)?;
            let out = op.apply(&op.apply_adjoint_working(&e)?)?;
            let diff = out.sub(&e)?.project_total(keep);
            worst = worst.max(diff.amplitudes().iter().map(|z| z.norm()).fold(0.0, f64::max));
        }
    }
    Ok(worst)
}

/// `exp[λ(a₁†a₂† − a₁a₂)]` by block exponentials over `n₁ − n₂` on a padded box.
#[derive(Debug)]
pub struct TwoModeSqueezer {
    cutoff: usize,
    working: usize,
    op: BlockExp,
}

impl TwoModeSqueezer {
    pub fn new(lambda: f64, cutoff: usize, pad: usize) -> Result<Self> {
        let g = (ad(Mode::One) * ad(Mode::Two) - an(Mode::One) * an(Mode::Two)) * lambda;
        let working = cutoff + pad;
        Ok(TwoModeSqueezer { cutoff, working, op: BlockExp::new(g, Charge::Difference, working)? })
    }

    pub fn apply(&self, v: &FockVector) -> Result<FockVector> {
        self.op.apply(&v.embed(self.working)?)?.restrict(self.cutoff)
    }
}

/// Largest guarded entry deviation between `U(λ, π/4)` and the two-mode squeezer.
pub fn balanced_factorization_gap(lambda: f64, cutoff: usize, guard: usize) -> Result<f64> {
    let p = SqueezeParams::new(lambda, std::f64::consts::FRAC_PI_4)?;
    let u = build_u_fock(&p, cutoff)?;
    let s2 = TwoModeSqueezer::new(lambda, cutoff, LEAKAGE_PAD)?;
    let keep = cutoff - guard;
    let mut worst = 0.0f64;
    for n1 in 0..=keep {
        for n2 in 0..=keep - n1 {
            let e = FockVector::basis(cutoff, n1, n2)?;
            let d = u.apply(&e)?.sub(&s2.apply(&e)?)?.project_total(keep);
            worst = worst.max(d.amplitudes().iter().map(|z| z.norm()).fold(0.0, f64::max));
        }
    }
    Ok(worst)
}

/// `U·e` computed exactly in exponent form.
pub fn apply_u_exact(p: &SqueezeParams, e: &Exponent) -> Result<Exponent> {
    let (d, x) = p.outer();
    let m = matrix_m(p).map(|v| C64::new(v, 0.0));
    let right = e.contract_annihilation(&Sym2::real(d, -x, -d))?;
    let middle = right.substitute_creation(&m.transpose());
    Ok(middle.add_creation(&Sym2::real(d, x, -d)).scaled(p.prefactor().into()))
}

/// `U†·e` computed exactly in exponent form.
pub fn apply_u_adjoint_exact(p: &SqueezeParams, e: &Exponent) -> Result<Exponent> {
    let (d, x) = p.outer();
    let m = matrix_m(p).map(|v| C64::new(v, 0.0));
    let right = e.contract_annihilation(&Sym2::real(d, x, -d))?;
    let middle = right.substitute_creation(&m);
    Ok(middle.add_creation(&Sym2::real(d, -x, -d)).scaled(p.prefactor().into()))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SqueezeActionReport {
    /// Guarded relative distance between `U|η,θ⟩` and `μ⁻¹|η/μ,θ⟩` in the Fock box.
    pub fock_distance: f64,
    /// Largest `(c, w, F)` difference of the same two kets in exponent form.
    pub exponent_discrepancy: f64,
}

pub fn squeeze_action_check(
    eta: ComplexLabel,
    p: &SqueezeParams,
    cutoff: usize,
    guard: usize,
) -> Result<SqueezeActionReport> {
    let ket = make_eta_theta_state(eta, p.theta)?;
    let target = GaussianKet::from_exponent(
        make_eta_theta_state(eta.scaled(1.0 / p.mu), p.theta)?.exponent().scaled((1.0 / p.mu).into()),
    )?;
    let exact = GaussianKet::from_exponent(apply_u_exact(p, ket.exponent())?)?;

    let op = build_u_fock(p, cutoff)?;
    let out = op.apply_ket(&ket)?;
    let tgt = fock_expand(&target, cutoff);
    let keep = cutoff - guard;
    let denom = tgt.project_total(keep).norm();
    if !(denom > 1e-300) {
        return Err(Error::ZeroNorm { norm: denom });
    }
    Ok(SqueezeActionReport {
        fock_distance: out.sub(&tgt)?.project_total(keep).norm() / denom,
        exponent_discrepancy: exact.max_coefficient_diff(&target),
    })
}

/// `U⁻¹|00⟩`.
pub fn squeezed_vacuum(p: &SqueezeParams) -> GaussianKet {
    let (_, s, c2, s2) = p.trig();
    let d = s * s * c2 / p.s;
    let off = -s2 * (2.0 * p.lambda).sinh() / (2.0 * p.s);
    GaussianKet::new(p.prefactor().into(), [C64::new(0.0, 0.0); 2], Sym2::real(d, off, -d))
        .expect("squeezed vacuum is normalizable")
}

/// `(Var(X₁+X₂), Var(P₁+P₂))` of the squeezed vacuum.
pub fn variance_closed_form(p: &SqueezeParams) -> (f64, f64) {
    let (c, s, _, _) = p.trig();
    let (t, ct) = (p.theta.tan(), 1.0 / p.theta.tan());
    let base = c * c + 0.5 * s * s * (t * t + ct * ct);
    let cross = 0.5 * (2.0 * p.lambda).sinh() * (t + ct);
    (base - cross, base + cross)
}

/// Same variances from the covariance oracle.
pub fn variance_phase_space(p: &SqueezeParams) -> Result<(f64, f64)> {
    let st = evolve(&GaussianState::vacuum(), &symplectic_of_u(p.lambda, p.theta)?);
    Ok((quad_variance(&st, &x_sum()), quad_variance(&st, &p_sum())))
}

fn fock_variance(op: &BosonPoly, v: &FockVector) -> Result<f64> {
    let mean = expectation(op, v)?.re;
    Ok(expectation(&(op.clone() * op.clone()), v)?.re - mean * mean)
}

/// Same variances from `U†|00⟩` computed in the truncated Fock space.
pub fn variance_fock(p: &SqueezeParams, cutoff: usize) -> Result<(f64, f64)> {
    let op = build_u_fock(p, cutoff)?;
    let v = op.apply_adjoint(&FockVector::basis(cutoff, 0, 0)?)?;
    let xs = BosonPoly::x(Mode::One) + BosonPoly::x(Mode::Two);
    let ps = BosonPoly::p(Mode::One) + BosonPoly::p(Mode::Two);
    Ok((fock_variance(&xs, &v)?, fock_variance(&ps, &v)?))
}

/// Quadrature coefficient vectors `(X₁+X₂, P₁+P₂)`.
pub fn variance_coefficients() -> (Vector4<f64>, Vector4<f64>) {
    (x_sum(), p_sum())
}

/// Large-λ approximation of `U|00⟩` (up to normalization).
pub fn asymptotic_state(p: &SqueezeParams) -> GaussianKet {
    let (_, _, c2, s2) = p.trig();
    let t = p.lambda.tanh();
    GaussianKet::new(C64::new(1.0, 0.0), [C64::new(0.0, 0.0); 2], Sym2::real(t * t * c2, t * s2, -t * t * c2))
        .expect("asymptotic state is normalizable")
}

/// Splitter output for oppositely squeezed single-mode vacua, closed form.
pub fn bs_output_two_squeezed(lambda: f64, theta: f64) -> Result<GaussianKet> {
    check_theta(theta)?;
    let (s2, c2) = (2.0 * theta).sin_cos();
    let t = lambda.tanh();
    GaussianKet::new(
        (1.0 / lambda.cosh()).into(),
        [C64::new(0.0, 0.0); 2],
        Sym2::real(t * c2, t * s2, -t * c2),
    )
}

/// The same state through the splitter acting on `e^{±(tanhλ/2)a†²}|0⟩`.
pub fn bs_output_via_splitter(lambda: f64, theta: f64) -> Result<GaussianKet> {
    check_theta(theta)?;
    let t = lambda.tanh();
    let amp = C64::new((1.0 / lambda.cosh()).sqrt(), 0.0);
    let zero = [C64::new(0.0, 0.0); 2];
    let one = GaussianKet::new(amp, zero, Sym2::real(t, 0.0, 0.0))?;
    let two = GaussianKet::new(amp, zero, Sym2::real(0.0, 0.0, -t))?;
    Ok(crate::exponent::apply_beamsplitter(&crate::exponent::tensor(&one, &two)?, theta))
}

/// Fidelity of the truncated, renormalized asymptotic and splitter-output states.
pub fn asymptotic_fidelity(lambda: f64, theta: f64, cutoff: usize) -> Result<f64> {
    let p = SqueezeParams::new(lambda, theta)?;
    let a = expand_exponent(asymptotic_state(&p).exponent(), cutoff);
    let b = expand_exponent(bs_output_two_squeezed(lambda, theta)?.exponent(), cutoff);
    a.fidelity(&b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponent::overlap;
    use crate::fock::matrix::expm;
    use crate::states::make_eta_state;
    use approx::assert_abs_diff_eq;
    use nalgebra::DMatrix;
    use std::f64::consts::{FRAC_PI_4, PI};

    fn p(l: f64, t: f64) -> SqueezeParams {
        SqueezeParams::new(l, t).unwrap()
    }

    #[test]
    fn parameter_invariants() {
        let q = p(0.3, PI / 3.0);
        assert_abs_diff_eq!(q.s, 0.3f64.cosh().powi(2) - 0.25, epsilon = 1e-15);
        assert_abs_diff_eq!(q.s, 0.842_732_6, epsilon = 5e-8);
        assert_abs_diff_eq!(q.alpha.norm_sqr(), q.s, epsilon = 1e-12);
        assert_abs_diff_eq!(q.phi, -0.1666, epsilon = 5e-5);
        assert!(SqueezeParams::new(0.3, PI / 2.0).is_err());
    }

    #[test]
    fn m_limits() {
        assert_abs_diff_eq!((matrix_m(&p(0.0, 0.4)) - RealMat2::identity()).abs().max(), 0.0, epsilon = 1e-15);
        let m = matrix_m(&p(0.8, FRAC_PI_4));
        assert_abs_diff_eq!((m - RealMat2::identity() / 0.8f64.cosh()).abs().max(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn diagonalization_reconstructs_m() {
        for (l, t) in [(0.3, PI / 3.0), (0.7, PI / 5.0), (1.0, PI / 12.0)] {
            let q = p(l, t);
            let d = diagonalize_m(&q);
            let m = matrix_m(&q).map(|v| C64::new(v, 0.0));
            assert!((d.reconstruct(&q) - m).norm() < 1e-12);
            let lm = DMatrix::from_fn(2, 2, |i, j| C64::new(d.log_m[(i, j)], 0.0));
            let e = expm(&lm);
            for i in 0..2 {
                for j in 0..2 {
                    assert_abs_diff_eq!((e[(i, j)] - m[(i, j)]).norm(), 0.0, epsilon = 1e-12);
                }
            }
            assert_abs_diff_eq!(matrix_m(&q).determinant(), (2.0 * t).sin().powi(2) / q.s, epsilon = 1e-12);
        }
        let d = diagonalize_m(&p(0.0, 0.9));
        assert_eq!(d.phi, 0.0);
        assert!(d.log_m.abs().max() < 1e-15);
    }

    #[test]
    fn bogoliubov_identities() {
        let b = bogoliubov(&p(0.0, 0.6));
        assert_abs_diff_eq!((b.m_inv - RealMat2::identity()).abs().max(), 0.0, epsilon = 1e-15);
        assert_eq!(b.k, RealMat2::zeros());
        let q = p(0.7, PI / 5.0);
        let b = bogoliubov(&q);
        assert_eq!(b.k, b.k.transpose());
        let (s, s2) = (0.7f64.sinh(), (2.0 * PI / 5.0).sin());
        let off = RealMat2::new(0.0, s / s2, s / s2, 0.0);
        assert_abs_diff_eq!((b.m_inv_k() - off).abs().max(), 0.0, epsilon = 1e-12);
        let diag = RealMat2::identity() * (1.0 + (s / s2).powi(2));
        assert_abs_diff_eq!((b.m_inv_m_inv_t() - diag).abs().max(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!((b.m_inv * matrix_m(&q) - RealMat2::identity()).abs().max(), 0.0, epsilon = 1e-12);
        assert!(unitarity_check(&q) < 1e-12);
        assert_eq!(unitarity_check(&p(0.0, 0.3)), 0.0);
    }

    #[test]
    fn bogoliubov_matches_quadrature_map() {
        // U a U⁻¹ = A a + B a† with A = M⁻¹, B = −M⁻¹K, turned into quadrature rows
        let q = p(0.45, 0.5);
        let b = bogoliubov(&q);
        let a = b.m_inv;
        let bb = -b.m_inv_k();
        let sym = symplectic_of_u(q.lambda, q.theta).unwrap().s;
        // X_i = (a_i + a_i†)/√2 → row: X coefficients (A + B), P coefficients 0 for real A, B
        for i in 0..2 {
            for j in 0..2 {
                assert_abs_diff_eq!(sym[(2 * i, 2 * j)], a[(i, j)] + bb[(i, j)], epsilon = 1e-12);
                assert_abs_diff_eq!(sym[(2 * i + 1, 2 * j + 1)], a[(i, j)] - bb[(i, j)], epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn exact_route_squeezes_eta_theta() {
        for (l, t) in [(0.2, PI / 3.0), (0.5, PI / 6.0), (-0.3, 1.1)] {
            let q = p(l, t);
            let eta = ComplexLabel::new(C64::new(0.5, -0.2));
            let out = apply_u_exact(&q, make_eta_theta_state(eta, t).unwrap().exponent()).unwrap();
            let tgt = make_eta_theta_state(eta.scaled(1.0 / q.mu), t).unwrap();
            let tgt = tgt.exponent().scaled((1.0 / q.mu).into());
            let g = GaussianKet::from_exponent(out).unwrap();
            assert!(g.max_coefficient_diff(&GaussianKet::from_exponent(tgt).unwrap()) < 1e-13);
        }
    }

    #[test]
    fn squeezed_vacuum_sign_convention() {
        let q = p(0.4, 0.6);
        let vac = crate::exponent::make_vacuum();
        let back = apply_u_adjoint_exact(&q, vac.exponent()).unwrap();
        let sv = squeezed_vacuum(&q);
        assert!(GaussianKet::from_exponent(back).unwrap().max_coefficient_diff(&sv) < 1e-14);
        assert!(sv.f().off.re < 0.0);
        // U|00⟩ is the same family at −λ
        let fwd = GaussianKet::from_exponent(apply_u_exact(&q, vac.exponent()).unwrap()).unwrap();
        assert!(fwd.max_coefficient_diff(&squeezed_vacuum(&p(-0.4, 0.6))) < 1e-14);
        assert_abs_diff_eq!(overlap(&sv, &sv).unwrap().re, 1.0, epsilon = 1e-13);
    }

    #[test]
    fn squeezed_vacuum_limits() {
        let v = squeezed_vacuum(&p(0.0, 0.7));
        assert!(v.max_coefficient_diff(&crate::exponent::make_vacuum()) < 1e-15);
        let l: f64 = 0.6;
        let v = squeezed_vacuum(&p(l, FRAC_PI_4));
        assert_abs_diff_eq!(v.f().off.re, -l.tanh(), epsilon = 1e-15);
        assert_abs_diff_eq!(v.f().d1.re, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(v.c().re, 1.0 / l.cosh(), epsilon = 1e-15);
        let m = GaussianState::from_ket(&squeezed_vacuum(&p(0.3, 1.0))).unwrap();
        assert!(m.mean.abs().max() < 1e-12);
    }

    #[test]
    fn exact_round_trip() {
        let q = p(0.3, 0.5);
        let k = GaussianKet::new(
            C64::new(0.9, 0.1),
            [C64::new(0.2, 0.1), C64::new(-0.1, 0.3)],
            Sym2::new(C64::new(0.1, 0.05), C64::new(0.2, 0.0), C64::new(-0.1, 0.1)),
        )
        .unwrap();
        let there = apply_u_exact(&q, k.exponent()).unwrap();
        let back = GaussianKet::from_exponent(apply_u_adjoint_exact(&q, &there).unwrap()).unwrap();
        assert!(back.max_coefficient_diff(&k) < 1e-13);
    }

    #[test]
    fn variances() {
        let q = p(0.3, PI / 3.0);
        let (x, pp) = variance_closed_form(&q);
        let (xs, ps) = variance_phase_space(&q).unwrap();
        assert_abs_diff_eq!(x, xs, epsilon = 1e-12);
        assert_abs_diff_eq!(pp, ps, epsilon = 1e-12);
        let l: f64 = 0.7;
        let (x, pp) = variance_closed_form(&p(l, FRAC_PI_4));
        assert_abs_diff_eq!(x, (-2.0 * l).exp(), epsilon = 1e-12);
        assert_abs_diff_eq!(pp, (2.0 * l).exp(), epsilon = 1e-12);
        // moments of the exact squeezed vacuum agree as well
        let st = GaussianState::from_ket(&squeezed_vacuum(&q)).unwrap();
        assert_abs_diff_eq!(quad_variance(&st, &x_sum()), xs, epsilon = 1e-12);
        assert_abs_diff_eq!(quad_variance(&st, &p_sum()), ps, epsilon = 1e-12);
    }

    #[test]
    fn fock_variances() {
        let q = p(0.3, PI / 3.0);
        let (x, pp) = variance_closed_form(&q);
        let (xf, pf) = variance_fock(&q, 24).unwrap();
        assert!(((xf - x) / x).abs() < 1e-6 && ((pf - pp) / pp).abs() < 1e-6);
    }

    #[test]
    fn identity_at_zero_lambda() {
        let op = build_u_fock(&p(0.0, 0.8), 16).unwrap();
        assert!(guarded_unitarity_gap(&op, 4).unwrap() < 1e-12);
        let e = FockVector::basis(16, 3, 2).unwrap();
        assert!(op.apply(&e).unwrap().sub(&e).unwrap().norm() < 1e-12);
        assert!(build_u_fock(&p(0.1, 0.8), 15).is_err());
    }

    #[test]
    fn small_box_operator_properties() {
        let q = p(0.3, PI / 3.0);
        let op = build_u_fock(&q, 16).unwrap();
        assert!(guarded_unitarity_gap(&op, 6).unwrap() < 1e-8);
        let m = op.to_matrix().unwrap();
        let e = FockVector::basis(16, 1, 2).unwrap();
        assert!(m.apply(&e).unwrap().sub(&op.apply(&e).unwrap()).unwrap().norm() < 1e-14);
        // Fock and exponent routes agree on a normalizable input
        let vac = crate::exponent::make_vacuum();
        let exact = fock_expand(&GaussianKet::from_exponent(apply_u_exact(&q, vac.exponent()).unwrap()).unwrap(), 16);
        assert!(op.apply(&FockVector::basis(16, 0, 0).unwrap()).unwrap().sub(&exact).unwrap().project_total(10).norm() < 1e-10);
    }

    #[test]
    fn balanced_case_is_two_mode_squeezer() {
        assert!(balanced_factorization_gap(0.4, 16, 4).unwrap() < 1e-8);
        let q = p(0.4, FRAC_PI_4);
        let eta = ComplexLabel::new(C64::new(0.3, 0.1));
        let out = apply_u_exact(&q, make_eta_state(eta).exponent()).unwrap();
        let tgt = make_eta_state(eta.scaled(1.0 / q.mu)).exponent().scaled((1.0 / q.mu).into());
        let d = GaussianKet::from_exponent(out).unwrap().max_coefficient_diff(&GaussianKet::from_exponent(tgt).unwrap());
        assert!(d < 1e-14);
    }

    #[test]
    fn squeeze_action_small_box() {
        let q = p(0.2, PI / 3.0);
        let r = squeeze_action_check(ComplexLabel::new(C64::new(0.5, 0.0)), &q, 24, 8).unwrap();
        assert!(r.exponent_discrepancy < 1e-14);
        assert!(r.fock_distance < 1e-6, "{}", r.fock_distance);
        let r0 = squeeze_action_check(ComplexLabel::new(C64::new(0.5, 0.0)), &p(0.0, 1.0), 24, 8).unwrap();
        assert!(r0.fock_distance < 1e-12 && r0.exponent_discrepancy < 1e-15);
    }

    #[test]
    fn splitter_output_routes_agree() {
        for (l, t) in [(1.0, PI / 3.0), (0.4, 0.3)] {
            let a = bs_output_two_squeezed(l, t).unwrap();
            let b = bs_output_via_splitter(l, t).unwrap();
            assert!(a.max_coefficient_diff(&b) < 1e-14);
        }
        let vac = crate::exponent::make_vacuum();
        assert!(bs_output_two_squeezed(0.0, 0.5).unwrap().max_coefficient_diff(&vac) < 1e-15);
        assert!(asymptotic_state(&p(0.0, 0.5)).max_coefficient_diff(&vac) < 1e-15);
    }
}
