//! Exact calculus on two-mode kets of Gaussian-exponent form
//!
//! ```text
//! c · exp(w₁a₁† + w₂a₂† + ½F₁₁a₁†² + F₁₂a₁†a₂† + ½F₂₂a₂†²)|00⟩
//! ```
//!
//! The family is closed under displacements, passive mode mixing, quadratic
//! creation/annihilation squeezers and inner products, so every ket used by the
//! crate (vacuum, quadrature eigenkets, `|η⟩`, `|η,θ⟩`, squeezed vacua) is
//! carried exactly by the triple `(c, w, F)`.

use std::f64::consts::SQRT_2;

use nalgebra::{Matrix2, Vector2};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub type Mat2 = Matrix2<C64>;
pub type Vec2 = Vector2<C64>;

/// Largest singular value within this distance of 1 marks a delta-normalized ket.
pub const DELTA_SV_TOL: f64 = 1e-9;

/// `|det(I − F̄_bra F_ket)|` below this makes an overlap divergent.
pub const DIVERGENT_DET_TOL: f64 = 1e-12;

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
const ONE: C64 = C64 { re: 1.0, im: 0.0 };

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    One,
    Two,
}

impl Mode {
    pub fn index(self) -> usize {
        match self {
            Mode::One => 0,
            Mode::Two => 1,
        }
    }

    pub fn other(self) -> Mode {
        match self {
            Mode::One => Mode::Two,
            Mode::Two => Mode::One,
        }
    }

    /// Modes are numbered 1 and 2.
    pub fn from_number(n: usize) -> Result<Mode> {
        match n {
            1 => Ok(Mode::One),
            2 => Ok(Mode::Two),
            _ => Err(Error::InvalidParameter(format!("mode must be 1 or 2, got {n}"))),
        }
    }
}

/// The complex label `η = (η₁ + iη₂)/√2` of the entangled kets.
///
/// Only `η` is stored, so the quadrature pair is always consistent with it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComplexLabel(C64);

impl ComplexLabel {
    pub fn new(eta: C64) -> Self {
        ComplexLabel(eta)
    }

    pub fn from_quadratures(eta1: f64, eta2: f64) -> Self {
        ComplexLabel(C64::new(eta1, eta2) / SQRT_2)
    }

    pub fn eta(self) -> C64 {
        self.0
    }

    /// Eigenvalue of `X₁ − X₂` on `|η⟩`.
    pub fn eta1(self) -> f64 {
        SQRT_2 * self.0.re
    }

    /// Eigenvalue of `P₁ + P₂` on `|η⟩`.
    pub fn eta2(self) -> f64 {
        SQRT_2 * self.0.im
    }

    pub fn scaled(self, k: f64) -> Self {
        ComplexLabel(self.0 * k)
    }
}

impl From<C64> for ComplexLabel {
    fn from(eta: C64) -> Self {
        ComplexLabel(eta)
    }
}

/// Complex symmetric 2×2 matrix; symmetry holds by construction.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sym2 {
    pub d1: C64,
    pub off: C64,
    pub d2: C64,
}

impl Sym2 {
    pub const ZERO: Sym2 = Sym2 { d1: ZERO, off: ZERO, d2: ZERO };

    pub fn new(d1: C64, off: C64, d2: C64) -> Self {
        Sym2 { d1, off, d2 }
    }

    pub fn real(d1: f64, off: f64, d2: f64) -> Self {
        Sym2::new(d1.into(), off.into(), d2.into())
    }

    /// Symmetric part of a general matrix.
    pub fn symmetrize(m: &Mat2) -> Self {
        Sym2::new(m[(0, 0)], (m[(0, 1)] + m[(1, 0)]) * 0.5, m[(1, 1)])
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        match (i, j) {
            (0, 0) => self.d1,
            (1, 1) => self.d2,
            _ => self.off,
        }
    }

    pub fn to_mat(&self) -> Mat2 {
        Mat2::new(self.d1, self.off, self.off, self.d2)
    }

    pub fn scale(&self, k: C64) -> Self {
        Sym2::new(self.d1 * k, self.off * k, self.d2 * k)
    }

    pub fn add(&self, other: &Sym2) -> Self {
        Sym2::new(self.d1 + other.d1, self.off + other.off, self.d2 + other.d2)
    }

    pub fn is_finite(&self) -> bool {
        [self.d1, self.off, self.d2].iter().all(|z| z.is_finite())
    }

    /// Largest singular value, from the eigenvalues of `F†F`.
    pub fn max_singular_value(&self) -> f64 {
        let a = self.d1.norm_sqr() + self.off.norm_sqr();
        let b = self.off.norm_sqr() + self.d2.norm_sqr();
        let det = (self.d1 * self.d2 - self.off * self.off).norm_sqr();
        let half = 0.5 * (a + b);
        (half + (half * half - det).max(0.0).sqrt()).sqrt()
    }

    /// `Rᵀ F R`.
    pub fn congruence(&self, r: &Mat2) -> Sym2 {
        Sym2::symmetrize(&(r.transpose() * self.to_mat() * r))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum NormalizationClass {
    Normalizable,
    DeltaNormalized,
}

/// Unvalidated exponent triple `(c, w, F)`.
///
/// Intermediate results (for instance a hyperbolic mode mixing of `|η⟩`) may
/// leave the bounded family; they stay representable here and can still be
/// expanded in a truncated Fock basis.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Exponent {
    pub c: C64,
    pub w: [C64; 2],
    pub f: Sym2,
}

impl Exponent {
    pub fn new(c: C64, w: [C64; 2], f: Sym2) -> Self {
        Exponent { c, w, f }
    }

    pub fn w_vec(&self) -> Vec2 {
        Vec2::new(self.w[0], self.w[1])
    }

    pub fn scaled(&self, k: C64) -> Exponent {
        Exponent { c: self.c * k, ..*self }
    }

    /// Substitutes `a_i† → Σ_j R_ij a_j†` inside the exponent.
    ///
    /// Any operator `V` with `V|00⟩ = |00⟩` and `V a† V⁻¹ = R a†` acts this way.
    pub fn substitute_creation(&self, r: &Mat2) -> Exponent {
        let w = r.transpose() * self.w_vec();
        Exponent { c: self.c, w: [w[0], w[1]], f: self.f.congruence(r) }
    }

    /// Applies the displacement `exp(η a_m† − η* a_m)`.
    pub fn displaced(&self, mode: Mode, eta: C64) -> Exponent {
        let m = mode.index();
        let ec = eta.conj();
        let mut w = self.w;
        for (j, wj) in w.iter_mut().enumerate() {
            *wj -= ec * self.f.get(m, j);
        }
        w[m] += eta;
        let log_c = -0.5 * eta.norm_sqr() - ec * self.w[m] + 0.5 * ec * ec * self.f.get(m, m);
        Exponent { c: self.c * log_c.exp(), w, f: self.f }
    }

    /// Multiplies by `exp(½ a†ᵀ K a†)`.
    pub fn add_creation(&self, k: &Sym2) -> Exponent {
        Exponent { f: self.f.add(k), ..*self }
    }

    /// Applies `exp(½ aᵀ L a)`, contracting the annihilators into the exponent.
    pub fn contract_annihilation(&self, l: &Sym2) -> Result<Exponent> {
        let lm = l.to_mat();
        let fm = self.f.to_mat();
        let i_lf = Mat2::identity() - lm * fm;
        let det = i_lf.determinant();
        if det.norm() < DIVERGENT_DET_TOL {
            return Err(Error::DivergentOverlap { det: det.norm() });
        }
        let inv = (Mat2::identity() - fm * lm)
            .try_inverse()
            .ok_or(Error::DivergentOverlap { det: det.norm() })?;
        let w = self.w_vec();
        let new_w = inv * w;
        let new_f = Sym2::symmetrize(&(inv * fm));
        let quad = (w.transpose() * lm * inv * w)[(0, 0)];
        let c = self.c * (0.5 * quad).exp() / sqrt_det(&i_lf);
        Ok(Exponent { c, w: [new_w[0], new_w[1]], f: new_f })
    }
}

/// An exact two-mode ket `c·exp(w·a† + ½ a†ᵀF a†)|00⟩` with validated
/// normalization class.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GaussianKet {
    #[serde(flatten)]
    exponent: Exponent,
    class: NormalizationClass,
}

impl GaussianKet {
    pub fn new(c: C64, w: [C64; 2], f: Sym2) -> Result<Self> {
        Self::from_exponent(Exponent::new(c, w, f))
    }

    pub fn from_exponent(exponent: Exponent) -> Result<Self> {
        let Exponent { c, w, f } = exponent;
        if !c.is_finite() || !w.iter().all(|z| z.is_finite()) || !f.is_finite() {
            return Err(Error::InvalidKet("non-finite coefficient".into()));
        }
        if c == ZERO {
            return Err(Error::InvalidKet("prefactor is zero".into()));
        }
        let sv = f.max_singular_value();
        let class = if sv < 1.0 - DELTA_SV_TOL {
            NormalizationClass::Normalizable
        } else if (sv - 1.0).abs() <= DELTA_SV_TOL {
            NormalizationClass::DeltaNormalized
        } else {
            return Err(Error::InvalidKet(format!(
                "largest singular value of F is {sv}, above 1 (unbounded)"
            )));
        };
        Ok(GaussianKet { exponent, class })
    }

    pub fn c(&self) -> C64 {
        self.exponent.c
    }

    pub fn w(&self) -> [C64; 2] {
        self.exponent.w
    }

    pub fn f(&self) -> Sym2 {
        self.exponent.f
    }

    pub fn class(&self) -> NormalizationClass {
        self.class
    }

    pub fn exponent(&self) -> &Exponent {
        &self.exponent
    }

    /// Largest componentwise distance between the `(c, w, F)` of two kets.
    pub fn max_coefficient_diff(&self, other: &GaussianKet) -> f64 {
        let a = self.exponent;
        let b = other.exponent;
        [
            a.c - b.c,
            a.w[0] - b.w[0],
            a.w[1] - b.w[1],
            a.f.d1 - b.f.d1,
            a.f.off - b.f.off,
            a.f.d2 - b.f.d2,
        ]
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
    }
}

/// The two-mode vacuum `|00⟩`.
pub fn make_vacuum() -> GaussianKet {
    GaussianKet {
        exponent: Exponent::new(ONE, [ZERO; 2], Sym2::ZERO),
        class: NormalizationClass::Normalizable,
    }
}

/// `D_mode(η)·ket`; the quadratic part is untouched and `w`, `c` absorb the shift.
pub fn apply_displacement(ket: &GaussianKet, mode: Mode, eta: ComplexLabel) -> GaussianKet {
    GaussianKet {
        exponent: ket.exponent.displaced(mode, eta.eta()),
        class: ket.class,
    }
}

/// Creation-operator mixing of the beam splitter with angle `angle`:
/// `a₁† → a₁†cos + a₂†sin`, `a₂† → a₂†cos − a₁†sin`.
pub fn splitter_matrix(angle: f64) -> Mat2 {
    let (s, c) = angle.sin_cos();
    Mat2::new(c.into(), s.into(), (-s).into(), c.into())
}

/// Applies the beam splitter `exp(−2i·angle·J_y)`, `J_y = (a₁†a₂ − a₂†a₁)/2i`,
/// which mixes creation operators by [`splitter_matrix`].
pub fn apply_beamsplitter(ket: &GaussianKet, angle: f64) -> GaussianKet {
    GaussianKet {
        exponent: ket.exponent.substitute_creation(&splitter_matrix(angle)),
        class: ket.class,
    }
}

/// The reciprocal splitter `B = exp[θ(a₁†a₂ − a₂†a₁)]`, i.e. the canonical one
/// at angle `−θ`. Its scattering amplitudes are `t = cos θ`, `r = sin θ`.
pub fn apply_splitter_b(ket: &GaussianKet, theta: f64) -> GaussianKet {
    apply_beamsplitter(ket, -theta)
}

/// Multiplies the prefactor by a nonzero complex factor.
pub fn scale(ket: &GaussianKet, factor: C64) -> Result<GaussianKet> {
    if factor == ZERO || !factor.is_finite() {
        return Err(Error::ZeroFactor);
    }
    Ok(GaussianKet { exponent: ket.exponent.scaled(factor), class: ket.class })
}

fn support(e: &Exponent) -> [bool; 2] {
    let cross = e.f.off != ZERO;
    [
        cross || e.w[0] != ZERO || e.f.d1 != ZERO,
        cross || e.w[1] != ZERO || e.f.d2 != ZERO,
    ]
}

/// Tensor product of two kets acting on different modes.
pub fn tensor(a: &GaussianKet, b: &GaussianKet) -> Result<GaussianKet> {
    let (sa, sb) = (support(&a.exponent), support(&b.exponent));
    if (sa[0] && sb[0]) || (sa[1] && sb[1]) {
        return Err(Error::InvalidParameter("tensor factors must act on disjoint modes".into()));
    }
    let (ea, eb) = (a.exponent, b.exponent);
    GaussianKet::new(
        ea.c * eb.c,
        [ea.w[0] + eb.w[0], ea.w[1] + eb.w[1]],
        ea.f.add(&eb.f),
    )
}

/// `√det(m)` as the product of principal roots of the eigenvalues of `m`.
///
/// Continuous whenever both eigenvalues stay in the right half-plane, which is
/// the case for `I − AB` with `‖A‖, ‖B‖ ≤ 1`.
pub(crate) fn sqrt_det(m: &Mat2) -> C64 {
    let tr = m[(0, 0)] + m[(1, 1)];
    let det = m.determinant();
    let disc = (tr * tr * 0.25 - det).sqrt();
    let (p, q) = (tr * 0.5 + disc, tr * 0.5 - disc);
    let (big, small) = if p.norm() >= q.norm() { (p, q) } else { (q, p) };
    if big == ZERO {
        return ZERO;
    }
    let small = if small.norm() < 1e-8 * big.norm() { det / big } else { small };
    big.sqrt() * small.sqrt()
}

/// Exact inner product `⟨bra|ket⟩`.
///
/// With `A = F̄_bra`, `B = F_ket`, `u = w̄_bra`, `v = w_ket` the vacuum contraction is
/// `det(I − AB)^{-1/2} exp(½uᵀB(I−AB)⁻¹u + uᵀ(I−BA)⁻¹v + ½vᵀA(I−BA)⁻¹v)`,
/// the two-mode form of the complex Gaussian integral in [`gaussian_integral`].
pub fn overlap(bra: &GaussianKet, ket: &GaussianKet) -> Result<C64> {
    exponent_overlap(&bra.exponent, &ket.exponent)
}

pub(crate) fn exponent_overlap(bra: &Exponent, ket: &Exponent) -> Result<C64> {
    let a = bra.f.to_mat().map(|z| z.conj());
    let b = ket.f.to_mat();
    let u = bra.w_vec().map(|z| z.conj());
    let v = ket.w_vec();
    let i_ab = Mat2::identity() - a * b;
    let i_ba = Mat2::identity() - b * a;
    let det = i_ab.determinant();
    if det.norm() < DIVERGENT_DET_TOL {
        return Err(Error::DivergentOverlap { det: det.norm() });
    }
    let div = || Error::DivergentOverlap { det: det.norm() };
    let inv_ab = i_ab.try_inverse().ok_or_else(div)?;
    let inv_ba = i_ba.try_inverse().ok_or_else(div)?;
    let e = 0.5 * (u.transpose() * b * inv_ab * u)[(0, 0)]
        + (u.transpose() * inv_ba * v)[(0, 0)]
        + 0.5 * (v.transpose() * a * inv_ba * v)[(0, 0)];
    Ok(bra.c.conj() * ket.c * e.exp() / sqrt_det(&i_ab))
}

/// `∫d²z/π exp(ζ|z|² + ξz + ηz* + fz² + gz*²) = (ζ² − 4fg)^{-1/2} exp[(−ζξη + ξ²g + η²f)/(ζ² − 4fg)]`.
///
/// Errors with [`Error::DivergentOverlap`] unless one of the two convergence
/// conditions `Re(ζ ± (f+g)) < 0`, `Re[(ζ² − 4fg)/(ζ ± (f+g))] < 0` holds.
pub fn gaussian_integral(zeta: C64, xi: C64, eta: C64, f: C64, g: C64) -> Result<C64> {
    let d = zeta * zeta - 4.0 * f * g;
    let converges = |sign: f64| {
        let s = zeta + (f + g) * sign;
        s.re < 0.0 && (d / s).re < 0.0
    };
    if !(converges(1.0) || converges(-1.0)) || d.norm() < DIVERGENT_DET_TOL {
        return Err(Error::DivergentOverlap { det: d.norm() });
    }
    Ok(((-zeta * xi * eta + xi * xi * g + eta * eta * f) / d).exp() / d.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn random_ket(params: [f64; 10], max_sv: f64) -> GaussianKet {
        let f = Sym2::new(c(params[0], params[1]), c(params[2], params[3]), c(params[4], params[5]));
        let sv = f.max_singular_value();
        let f = if sv > 0.0 { f.scale((max_sv / sv * 0.999).min(1.0).into()) } else { f };
        GaussianKet::new(
            c(1.0 + params[6].abs(), params[7]),
            [c(params[8], params[9]), c(params[9], -params[8])],
            f,
        )
        .unwrap()
    }

    #[test]
    fn vacuum_is_trivial() {
        let v = make_vacuum();
        assert_eq!(v.c(), ONE);
        assert_eq!(v.w(), [ZERO; 2]);
        assert_eq!(v.f(), Sym2::ZERO);
        assert_eq!(v.class(), NormalizationClass::Normalizable);
        assert_abs_diff_eq!(overlap(&v, &v).unwrap().re, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn label_quadratures_are_consistent() {
        let l = ComplexLabel::from_quadratures(1.0, -0.5);
        assert_abs_diff_eq!(l.eta1(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(l.eta2(), -0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(l.eta().re, 1.0 / SQRT_2, epsilon = 1e-15);
    }

    #[test]
    fn classification() {
        let delta = GaussianKet::new(ONE, [ZERO; 2], Sym2::real(0.0, 1.0, 0.0)).unwrap();
        assert_eq!(delta.class(), NormalizationClass::DeltaNormalized);
        let tmsv = GaussianKet::new(ONE, [ZERO; 2], Sym2::real(0.0, 0.5, 0.0)).unwrap();
        assert_eq!(tmsv.class(), NormalizationClass::Normalizable);
        assert!(GaussianKet::new(ONE, [ZERO; 2], Sym2::real(1.2, 0.0, 0.0)).is_err());
        assert!(GaussianKet::new(ZERO, [ZERO; 2], Sym2::ZERO).is_err());
    }

    #[test]
    fn zero_displacement_is_identity() {
        let k = random_ket([0.3, 0.1, -0.2, 0.4, 0.1, 0.0, 0.5, 0.2, 0.3, -0.1], 0.7);
        let d = apply_displacement(&k, Mode::One, ComplexLabel::new(ZERO));
        assert_eq!(d.max_coefficient_diff(&k), 0.0);
    }

    #[test]
    fn displacement_of_vacuum_is_coherent() {
        let alpha = c(0.3, 0.1);
        let k = apply_displacement(&make_vacuum(), Mode::Two, alpha.into());
        assert_abs_diff_eq!(k.c().re, (-0.5 * alpha.norm_sqr()).exp(), epsilon = 1e-15);
        assert_eq!(k.w(), [ZERO, alpha]);
    }

    #[test]
    fn splitter_keeps_vacuum() {
        let v = apply_beamsplitter(&make_vacuum(), 0.7);
        assert!(v.max_coefficient_diff(&make_vacuum()) < 1e-16);
    }

    #[test]
    fn splitter_on_opposite_squeezers_gives_eta_zero_exponent() {
        // |p=0⟩₁ has F₁₁ = +1, |x=0⟩₂ has F₂₂ = −1
        let theta = PI / 3.0;
        let input = GaussianKet::new(ONE, [ZERO; 2], Sym2::real(1.0, 0.0, -1.0)).unwrap();
        let out = apply_beamsplitter(&input, theta);
        let (s2, c2) = (2.0 * theta).sin_cos();
        assert_abs_diff_eq!(out.f().d1.re, c2, epsilon = 1e-15);
        assert_abs_diff_eq!(out.f().off.re, s2, epsilon = 1e-15);
        assert_abs_diff_eq!(out.f().d2.re, -c2, epsilon = 1e-15);
        assert_eq!(out.class(), NormalizationClass::DeltaNormalized);
    }

    #[test]
    fn scale_rules() {
        let k = random_ket([0.1, 0.0, 0.2, 0.1, -0.1, 0.0, 0.2, 0.0, 0.1, 0.2], 0.5);
        assert_eq!(scale(&k, ONE).unwrap(), k);
        let n = overlap(&k, &k).unwrap();
        let k2 = scale(&k, c(2.0, 0.0)).unwrap();
        assert_abs_diff_eq!(overlap(&k2, &k2).unwrap().re, 4.0 * n.re, epsilon = 1e-12);
        let kp = scale(&k, C64::from_polar(1.0, 0.8)).unwrap();
        assert_abs_diff_eq!(overlap(&kp, &kp).unwrap().re, n.re, epsilon = 1e-12);
        assert_eq!(scale(&k, ZERO), Err(Error::ZeroFactor));
    }

    #[test]
    fn tmsv_is_normalized() {
        // oracle: Σ sech²λ tanh²ⁿλ
        let lambda: f64 = 0.8;
        let t = lambda.tanh();
        let k = GaussianKet::new((1.0 / lambda.cosh()).into(), [ZERO; 2], Sym2::real(0.0, t, 0.0)).unwrap();
        let series: f64 = (0..400).map(|n| t.powi(2 * n) / lambda.cosh().powi(2)).sum();
        assert_abs_diff_eq!(overlap(&k, &k).unwrap().re, series, epsilon = 1e-13);
        assert_abs_diff_eq!(series, 1.0, epsilon = 1e-13);
    }

    #[test]
    fn delta_self_overlap_diverges() {
        let k = GaussianKet::new(ONE, [c(0.2, 0.1), ZERO], Sym2::real(0.0, 1.0, 0.0)).unwrap();
        assert!(matches!(overlap(&k, &k), Err(Error::DivergentOverlap { .. })));
    }

    #[test]
    fn single_mode_overlap_matches_gaussian_integral() {
        // ⟨0|e^{ua + ½Aa²} e^{va† + ½Ba†²}|0⟩ = ∫d²z/π e^{−|z|² + uz + vz* + ½Az² + ½Bz*²}
        let (u, a_, v, b_) = (c(0.3, -0.2), c(0.4, 0.1), c(-0.1, 0.5), c(0.2, -0.3));
        let bra = GaussianKet::new(ONE, [u.conj(), ZERO], Sym2::new(a_.conj(), ZERO, ZERO)).unwrap();
        let ket = GaussianKet::new(ONE, [v, ZERO], Sym2::new(b_, ZERO, ZERO)).unwrap();
        let exact = overlap(&bra, &ket).unwrap();
        let integral = gaussian_integral(c(-1.0, 0.0), u, v, a_ * 0.5, b_ * 0.5).unwrap();
        assert_abs_diff_eq!((exact - integral).norm(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn two_mode_overlap_by_sequential_integration() {
        // Integrate z₁ then z₂ with the one-dimensional formula; the z₁ step leaves a
        // Gaussian in z₂ whose coefficients are read off by finite differences of
        // the log of the first-stage result (exact for a quadratic exponent).
        let bra = random_ket([0.2, 0.1, 0.1, -0.2, -0.1, 0.1, 0.3, 0.1, 0.2, -0.1], 0.5);
        let ket = random_ket([-0.1, 0.2, 0.2, 0.1, 0.1, -0.2, 0.1, -0.3, -0.1, 0.2], 0.5);
        let a = bra.f().to_mat().map(|z| z.conj());
        let b = ket.f().to_mat();
        let u = bra.exponent().w_vec().map(|z| z.conj());
        let v = ket.exponent().w_vec();
        let stage1 = |z2: C64, z2c: C64| {
            gaussian_integral(
                c(-1.0, 0.0),
                u[0] + a[(0, 1)] * z2,
                v[0] + b[(0, 1)] * z2c,
                a[(0, 0)] * 0.5,
                b[(0, 0)] * 0.5,
            )
            .unwrap()
                * (u[1] * z2 + v[1] * z2c + 0.5 * a[(1, 1)] * z2 * z2 + 0.5 * b[(1, 1)] * z2c * z2c).exp()
        };
        // log stage1 = κ + p z + q z̄ + r z z̄ + s z² + t z̄² (z, z̄ independent)
        let l = |x: C64, y: C64| stage1(x, y).ln();
        let h = 1e-3;
        let l00 = l(ZERO, ZERO);
        let p = (l(c(h, 0.0), ZERO) - l(c(-h, 0.0), ZERO)) / (2.0 * h);
        let q = (l(ZERO, c(h, 0.0)) - l(ZERO, c(-h, 0.0))) / (2.0 * h);
        let s = (l(c(h, 0.0), ZERO) + l(c(-h, 0.0), ZERO) - 2.0 * l00) / (2.0 * h * h);
        let t = (l(ZERO, c(h, 0.0)) + l(ZERO, c(-h, 0.0)) - 2.0 * l00) / (2.0 * h * h);
        let r = (l(c(h, 0.0), c(h, 0.0)) - l(c(h, 0.0), c(-h, 0.0)) - l(c(-h, 0.0), c(h, 0.0))
            + l(c(-h, 0.0), c(-h, 0.0)))
            / (4.0 * h * h);
        let stage2 = gaussian_integral(c(-1.0, 0.0) + r, p, q, s, t).unwrap() * l00.exp();
        let exact = overlap(&bra, &ket).unwrap() / (bra.c().conj() * ket.c());
        assert_abs_diff_eq!((exact - stage2).norm(), 0.0, epsilon = 1e-6);
    }

    #[test]
    fn divergent_gaussian_integral_is_rejected() {
        assert!(gaussian_integral(c(1.0, 0.0), ZERO, ZERO, ZERO, ZERO).is_err());
    }

    #[test]
    fn tensor_requires_disjoint_modes() {
        let a = GaussianKet::new(ONE, [c(0.1, 0.0), ZERO], Sym2::real(0.3, 0.0, 0.0)).unwrap();
        let b = GaussianKet::new(ONE, [ZERO, c(0.2, 0.0)], Sym2::real(0.0, 0.0, -0.3)).unwrap();
        let ab = tensor(&a, &b).unwrap();
        assert_eq!(ab.f(), Sym2::real(0.3, 0.0, -0.3));
        assert!(tensor(&a, &a).is_err());
    }

    #[test]
    fn annihilation_contraction_single_mode() {
        // e^{(l/2)a²} e^{(f/2)a†²}|0⟩: amplitude on |0⟩ is (1 − lf)^{-1/2}
        let e = Exponent::new(ONE, [ZERO; 2], Sym2::real(0.5, 0.0, 0.0));
        let out = e.contract_annihilation(&Sym2::real(0.4, 0.0, 0.0)).unwrap();
        assert_abs_diff_eq!(out.c.re, 1.0 / (1.0f64 - 0.2).sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(out.f.d1.re, 0.5 / 0.8, epsilon = 1e-15);
    }

    fn arb_params() -> impl Strategy<Value = [f64; 10]> {
        proptest::array::uniform10(-0.6f64..0.6)
    }

    proptest! {
        #[test]
        fn splitter_round_trip(p in arb_params(), angle in -3.0f64..3.0) {
            let k = random_ket(p, 0.9);
            let back = apply_beamsplitter(&apply_beamsplitter(&k, angle), -angle);
            prop_assert!(back.max_coefficient_diff(&k) < 1e-14);
        }

        #[test]
        fn overlap_is_conjugate_symmetric(p in arb_params(), q in arb_params()) {
            let a = random_ket(p, 0.8);
            let b = random_ket(q, 0.8);
            let ab = overlap(&a, &b).unwrap();
            let ba = overlap(&b, &a).unwrap();
            prop_assert!((ab - ba.conj()).norm() < 1e-12 * (1.0 + ab.norm()));
        }

        #[test]
        fn self_overlap_is_positive(p in arb_params()) {
            let a = random_ket(p, 0.9);
            let n = overlap(&a, &a).unwrap();
            prop_assert!(n.re > 0.0 && n.re.is_finite());
            prop_assert!(n.im.abs() < 1e-12 * n.re);
        }

        #[test]
        fn operations_keep_f_symmetric_and_class(p in arb_params(), angle in -3.0f64..3.0, er in -1.0f64..1.0, ei in -1.0f64..1.0) {
            let k = random_ket(p, 0.9);
            let out = apply_displacement(&apply_beamsplitter(&k, angle), Mode::Two, c(er, ei).into());
            let m = out.f().to_mat();
            prop_assert_eq!(m[(0, 1)], m[(1, 0)]);
            prop_assert_eq!(out.class(), k.class());
            prop_assert!((out.f().max_singular_value() - k.f().max_singular_value()).abs() < 1e-12);
        }
    }
}
