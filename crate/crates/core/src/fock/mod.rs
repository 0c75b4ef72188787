//! Truncated two-mode Fock numerics.
//!
//! Vectors live in the box `0 ≤ n₁, n₂ ≤ N`. Operators come in three flavours:
//! ladder polynomials applied term by term ([`BosonPoly`]), dense matrices
//! ([`OperatorMatrix`]) and block-diagonal exponentials ([`BlockExp`]). All
//! three follow truncated-matrix semantics, so they agree with each other
//! exactly, cutoff artifacts included.

pub mod blocks;
pub mod matrix;
pub mod poly;
pub mod vector;

pub use blocks::{BlockExp, Charge};
pub use matrix::{expm, ladder_matrix, quadrature_matrix, OperatorMatrix, Quadrature};
pub use poly::{BosonPoly, Ladder, LadderKind};
pub use vector::FockVector;

use num_complex::Complex64 as C64;

use crate::exponent::{Exponent, GaussianKet};
use crate::{Error, Result};

/// Anything that maps truncated vectors to truncated vectors.
pub trait FockOperator {
    fn apply_to(&self, v: &FockVector) -> Result<FockVector>;
}

impl FockOperator for BosonPoly {
    fn apply_to(&self, v: &FockVector) -> Result<FockVector> {
        Ok(self.apply(v))
    }
}

impl FockOperator for OperatorMatrix {
    fn apply_to(&self, v: &FockVector) -> Result<FockVector> {
        self.apply(v)
    }
}

impl FockOperator for BlockExp {
    fn apply_to(&self, v: &FockVector) -> Result<FockVector> {
        self.apply(v)
    }
}

/// Fock amplitudes of a ket, exact inside the box.
pub fn fock_expand(ket: &GaussianKet, cutoff: usize) -> FockVector {
    expand_exponent(ket.exponent(), cutoff)
}

/// Amplitudes of `c·exp(w·a† + ½a†ᵀFa†)|00⟩` from the recurrence
/// `√(n₁+1) ψ(n₁+1, n₂) = w₁ψ + F₁₁√n₁ ψ(n₁−1, n₂) + F₁₂√n₂ ψ(n₁, n₂−1)`,
/// seeded along `n₁ = 0` by its mode-2 analogue.
pub fn expand_exponent(e: &Exponent, cutoff: usize) -> FockVector {
    let n = cutoff;
    let mut v = FockVector::zeros(n);
    let sq: Vec<f64> = (0..=n + 1).map(|k| (k as f64).sqrt()).collect();
    let [w1, w2] = e.w;
    let (f11, f12, f22) = (e.f.d1, e.f.off, e.f.d2);
    v.set(0, 0, e.c);
    for n2 in 0..n {
        let mut x = w2 * v.get(0, n2);
        if n2 > 0 {
            x += f22 * sq[n2] * v.get(0, n2 - 1);
        }
        v.set(0, n2 + 1, x / sq[n2 + 1]);
    }
    for n1 in 0..n {
        for n2 in 0..=n {
            let mut x = w1 * v.get(n1, n2);
            if n1 > 0 {
                x += f11 * sq[n1] * v.get(n1 - 1, n2);
            }
            if n2 > 0 {
                x += f12 * sq[n2] * v.get(n1, n2 - 1);
            }
            v.set(n1 + 1, n2, x / sq[n1 + 1]);
        }
    }
    v
}

/// Normalized expectation `⟨ψ|O|ψ⟩ / ⟨ψ|ψ⟩`.
pub fn expectation<O: FockOperator + ?Sized>(op: &O, state: &FockVector) -> Result<C64> {
    let n = state.norm_sqr();
    if !(n > 1e-300) {
        return Err(Error::ZeroNorm { norm: n.sqrt() });
    }
    Ok(state.inner(&op.apply_to(state)?)? / n)
}

/// Guarded relative residual `‖P(O − λ)ψ‖ / ‖Pψ‖`, with `P` projecting onto
/// total photon number `≤ N − guard`.
pub fn eigen_residual<O: FockOperator + ?Sized>(
    op: &O,
    state: &FockVector,
    eigenvalue: C64,
    guard: usize,
) -> Result<f64> {
    let vector = residual_vector(op, state, eigenvalue, guard)?;
    let keep = state.cutoff() - guard;
    let denom = state.project_total(keep).norm();
    if !(denom > 1e-300) {
        return Err(Error::ZeroNorm { norm: denom });
    }
    Ok(vector.norm() / denom)
}

/// The projected vector `P(O − λ)ψ` behind [`eigen_residual`].
pub fn residual_vector<O: FockOperator + ?Sized>(
    op: &O,
    state: &FockVector,
    eigenvalue: C64,
    guard: usize,
) -> Result<FockVector> {
    if guard >= state.cutoff() {
        return Err(Error::InvalidParameter(format!(
            "guard {guard} must be below cutoff {}",
            state.cutoff()
        )));
    }
    let r = op.apply_to(state)?.axpy(-eigenvalue, state)?;
    Ok(r.project_total(state.cutoff() - guard))
}

/// `exp(G)v` by its Taylor series, stopping once a term falls below `1e-16` of
/// the running sum. Exact for generators that only raise the photon number.
pub fn exp_series_apply(generator: &BosonPoly, v: &FockVector, max_order: usize) -> Result<FockVector> {
    let mut sum = v.clone();
    let mut term = v.clone();
    let mut tail = term.norm();
    for k in 1..=max_order {
        term = generator.apply(&term).scaled(C64::new(1.0 / k as f64, 0.0));
        sum = sum.axpy(C64::new(1.0, 0.0), &term)?;
        tail = term.norm();
        if tail == 0.0 || tail < 1e-16 * sum.norm() {
            return Ok(sum);
        }
    }
    Err(Error::NonConvergentSeries { order: max_order, tail })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponent::{
        apply_beamsplitter, apply_displacement, make_vacuum, ComplexLabel, Mode, Sym2,
    };
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn quadratic_generator(e: &Exponent) -> BosonPoly {
        let ad1 = || BosonPoly::adag(Mode::One);
        let ad2 = || BosonPoly::adag(Mode::Two);
        ad1() * e.w[0]
            + ad2() * e.w[1]
            + ad1() * ad1() * (e.f.d1 * 0.5)
            + ad1() * ad2() * e.f.off
            + ad2() * ad2() * (e.f.d2 * 0.5)
    }

    /// Oracle: the exponential series of the raising generator on the vacuum.
    fn series_oracle(e: &Exponent, cutoff: usize) -> FockVector {
        let vac = FockVector::basis(cutoff, 0, 0).unwrap();
        exp_series_apply(&quadratic_generator(e), &vac, 4 * cutoff + 8).unwrap().scaled(e.c)
    }

    #[test]
    fn vacuum_expands_to_delta() {
        let v = fock_expand(&make_vacuum(), 5);
        assert_eq!(v, FockVector::basis(5, 0, 0).unwrap());
    }

    #[test]
    fn tmsv_amplitudes() {
        let lambda: f64 = 0.6;
        let t = lambda.tanh();
        let sech = 1.0 / lambda.cosh();
        let ket = GaussianKet::new(c(sech, 0.0), [c(0.0, 0.0); 2], Sym2::real(0.0, t, 0.0)).unwrap();
        let v = fock_expand(&ket, 20);
        for n1 in 0..=20 {
            for n2 in 0..=20 {
                let expect = if n1 == n2 { sech * t.powi(n1 as i32) } else { 0.0 };
                assert_abs_diff_eq!((v.get(n1, n2) - c(expect, 0.0)).norm(), 0.0, epsilon = 1e-15);
            }
        }
        let oracle = series_oracle(ket.exponent(), 20);
        assert!(v.sub(&oracle).unwrap().norm() < 1e-14);
    }

    #[test]
    fn general_exponent_matches_series() {
        let e = Exponent::new(
            c(0.7, 0.2),
            [c(0.3, -0.1), c(-0.2, 0.4)],
            Sym2::new(c(-0.5, 0.1), c(0.6, 0.2), c(0.3, -0.3)),
        );
        let v = expand_exponent(&e, 30);
        let oracle = series_oracle(&e, 30);
        assert!(v.sub(&oracle).unwrap().norm() < 1e-12 * oracle.norm());
    }

    #[test]
    fn coherent_state_matches_displacement_series() {
        // exp(αa₁† − α*a₁)|00⟩ on the truncated space, series of the truncated generator
        let alpha = c(0.3, 0.1);
        let n = 40;
        let gen = BosonPoly::adag(Mode::One) * alpha - BosonPoly::a(Mode::One) * alpha.conj();
        let oracle = exp_series_apply(&gen, &FockVector::basis(n, 0, 0).unwrap(), 200).unwrap();
        let ket = apply_displacement(&make_vacuum(), Mode::One, ComplexLabel::new(alpha));
        let v = fock_expand(&ket, n);
        assert!(v.sub(&oracle).unwrap().norm() < 1e-12);
    }

    #[test]
    fn displacement_of_squeezed_ket_matches_generator_exponential() {
        let ket = GaussianKet::new(
            c(0.8, 0.0),
            [c(0.1, 0.2), c(-0.3, 0.0)],
            Sym2::new(c(0.3, 0.1), c(-0.2, 0.1), c(0.1, -0.2)),
        )
        .unwrap();
        let eta = c(0.25, -0.15);
        let n = 40;
        let gen = BosonPoly::adag(Mode::Two) * eta - BosonPoly::a(Mode::Two) * eta.conj();
        let oracle = exp_series_apply(&gen, &fock_expand(&ket, n), 400).unwrap();
        let exact = fock_expand(&apply_displacement(&ket, Mode::Two, eta.into()), n);
        let keep = n - 12;
        let diff = oracle.sub(&exact).unwrap().project_total(keep).norm();
        assert!(diff < 1e-10, "diff {diff}");
    }

    #[test]
    fn beamsplitter_matches_block_expm_oracle() {
        let angle = std::f64::consts::PI / 8.0;
        let n = 30;
        let ket = GaussianKet::new(
            c(0.9, 0.1),
            [c(0.2, 0.1), c(0.1, -0.3)],
            Sym2::new(c(0.2, 0.1), c(0.3, -0.1), c(-0.25, 0.05)),
        )
        .unwrap();
        // exp[angle(a₂†a₁ − a₁†a₂)] conserves n₁ + n₂, so box truncation is exact
        let gen = (BosonPoly::adag(Mode::Two) * BosonPoly::a(Mode::One)
            - BosonPoly::adag(Mode::One) * BosonPoly::a(Mode::Two))
            * angle;
        let op = BlockExp::new(gen, Charge::Total, n).unwrap();
        let oracle = op.apply(&fock_expand(&ket, n)).unwrap();
        let exact = fock_expand(&apply_beamsplitter(&ket, angle), n);
        // shells above N are cut asymmetrically by the box; compare inside the triangle
        let diff = oracle.sub(&exact).unwrap().project_total(n).norm();
        assert!(diff < 1e-10, "diff {diff}");
    }

    #[test]
    fn expectation_of_number_in_tmsv() {
        let lambda: f64 = 0.5;
        let ket = GaussianKet::new(
            c(1.0 / lambda.cosh(), 0.0),
            [c(0.0, 0.0); 2],
            Sym2::real(0.0, lambda.tanh(), 0.0),
        )
        .unwrap();
        let v = fock_expand(&ket, 40);
        let n1 = expectation(&BosonPoly::number(Mode::One), &v).unwrap();
        assert_abs_diff_eq!(n1.re, lambda.sinh().powi(2), epsilon = 1e-8);
        let vac = fock_expand(&make_vacuum(), 4);
        assert_eq!(expectation(&BosonPoly::number(Mode::One), &vac).unwrap(), c(0.0, 0.0));
        let x = quadrature_matrix(Mode::Two, Quadrature::X, 40).unwrap();
        assert!(expectation(&x, &v).unwrap().im.abs() < 1e-15);
        assert!(expectation(&x, &FockVector::zeros(40)).is_err());
    }

    #[test]
    fn vacuum_is_annihilated() {
        let vac = fock_expand(&make_vacuum(), 8);
        let r = eigen_residual(&BosonPoly::a(Mode::One), &vac, c(0.0, 0.0), 2).unwrap();
        assert_eq!(r, 0.0);
        assert!(eigen_residual(&BosonPoly::a(Mode::One), &vac, c(0.0, 0.0), 8).is_err());
    }

    #[test]
    fn norm_converges_with_cutoff() {
        let ket = GaussianKet::new(
            c(1.0, 0.0),
            [c(0.3, 0.1), c(-0.2, 0.0)],
            Sym2::new(c(0.3, 0.15), c(0.4, -0.1), c(-0.2, 0.1)),
        )
        .unwrap();
        assert!(ket.f().max_singular_value() <= 0.6);
        let n40 = fock_expand(&ket, 40).norm();
        let n60 = fock_expand(&ket, 60).norm();
        assert!((n60 - n40).abs() < 1e-8);
    }

    #[test]
    fn single_mode_squeezing_at_0p8_still_leaks_at_40() {
        // the box tail of e^{0.4 a₁†²}|0⟩ decays like 0.64^{N/2}; N = 40 is not enough
        let ket = GaussianKet::new(c(1.0, 0.0), [c(0.0, 0.0); 2], Sym2::real(0.8, 0.0, 0.0)).unwrap();
        let gap = fock_expand(&ket, 60).norm() - fock_expand(&ket, 40).norm();
        assert!(gap > 1e-5);
    }

    #[test]
    fn creation_series_reports_nonconvergence() {
        let v = FockVector::basis(10, 0, 0).unwrap();
        let gen = BosonPoly::adag(Mode::One) * 3.0;
        assert!(matches!(
            exp_series_apply(&gen, &v, 3),
            Err(Error::NonConvergentSeries { order: 3, .. })
        ));
    }

    #[test]
    fn splitter_commutes_with_total_number() {
        let n = 7;
        let gen = (BosonPoly::adag(Mode::Two) * BosonPoly::a(Mode::One)
            - BosonPoly::adag(Mode::One) * BosonPoly::a(Mode::Two))
            * 0.9;
        let b = OperatorMatrix::from_poly(&gen, n).expm();
        let total = OperatorMatrix::from_poly(&(BosonPoly::number(Mode::One) + BosonPoly::number(Mode::Two)), n);
        assert!(b.commutator(&total).unwrap().max_abs() < 1e-10);
    }
}
