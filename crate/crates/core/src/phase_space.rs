//! Gaussian phase-space oracle in quadrature order `(X₁, P₁, X₂, P₂)`.
//!
//! Units follow `X = (a + a†)/√2`, so the vacuum covariance is `I/2`.
//! A [`SymplecticMap`] stores the Heisenberg rows `V q V⁻¹ = S q + d` of a
//! Gaussian unitary `V`; [`evolve`] returns the moments of `V⁻¹|ψ⟩`.

use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::{Matrix2, Matrix4, SymmetricEigen, Vector2, Vector4};
use num_complex::Complex64 as C64;

use crate::exponent::{GaussianKet, NormalizationClass};
use crate::{check_theta, Error, Result};

/// Block-diagonal symplectic form.
pub fn omega() -> Matrix4<f64> {
    let mut w = Matrix4::zeros();
    w[(0, 1)] = 1.0;
    w[(1, 0)] = -1.0;
    w[(2, 3)] = 1.0;
    w[(3, 2)] = -1.0;
    w
}

#[derive(Clone, Debug, PartialEq)]
pub struct GaussianState {
    pub mean: Vector4<f64>,
    pub cov: Matrix4<f64>,
}

impl GaussianState {
    pub fn vacuum() -> Self {
        GaussianState { mean: Vector4::zeros(), cov: Matrix4::identity() * 0.5 }
    }

    /// Validates symmetry and the uncertainty relation `cov + iΩ/2 ≥ 0`.
    pub fn new(mean: Vector4<f64>, cov: Matrix4<f64>) -> Result<Self> {
        let asym = (cov - cov.transpose()).abs().max();
        if asym > 1e-12 * (1.0 + cov.abs().max()) {
            return Err(Error::InvalidParameter(format!("covariance not symmetric ({asym:.3e})")));
        }
        let s = GaussianState { mean, cov };
        let low = s.uncertainty_min_eigenvalue();
        if low < -1e-10 {
            return Err(Error::InvalidParameter(format!("uncertainty relation violated ({low:.3e})")));
        }
        Ok(s)
    }

    /// Smallest eigenvalue of the Hermitian matrix `cov + iΩ/2`.
    pub fn uncertainty_min_eigenvalue(&self) -> f64 {
        let w = omega();
        let h = Matrix4::<C64>::from_fn(|i, j| C64::new(self.cov[(i, j)], 0.5 * w[(i, j)]));
        SymmetricEigen::new(h).eigenvalues.min()
    }

    /// Moments of a normalizable exponent-form ket.
    ///
    /// The mean `α = ⟨a⟩` solves `α = w + Fα*`. Centred second moments follow
    /// from `a|φ⟩ = F a†|φ⟩`: `N = ⟨a†a⟩` solves `N = F*(I + Nᵀ)F` and
    /// `⟨a_i a_j⟩ = F_ij + (FN)_ji`.
    pub fn from_ket(ket: &GaussianKet) -> Result<Self> {
        if ket.class() != NormalizationClass::Normalizable {
            return Err(Error::InvalidKet("phase-space moments need a normalizable ket".into()));
        }
        let f = ket.f().to_mat();
        let fc = f.map(|z| z.conj());
        let w = ket.w();

        let mut sys = Matrix4::<C64>::identity();
        for i in 0..2 {
            for j in 0..2 {
                sys[(i, 2 + j)] = -f[(i, j)];
                sys[(2 + i, j)] = -fc[(i, j)];
            }
        }
        let rhs = Vector4::new(w[0], w[1], w[0].conj(), w[1].conj());
        let sol = sys.lu().solve(&rhs).ok_or_else(|| Error::InvalidKet("singular mean system".into()))?;
        let alpha = Vector2::new(sol[0], sol[1]);

        // N_ij − Σ_kl F*_ik N_lk F_lj = (F*F)_ij, unknowns ordered (0,0),(0,1),(1,0),(1,1)
        let mut lin = Matrix4::<C64>::identity();
        let ff = fc * f;
        let mut rhs = Vector4::<C64>::zeros();
        for i in 0..2 {
            for j in 0..2 {
                let row = 2 * i + j;
                rhs[row] = ff[(i, j)];
                for k in 0..2 {
                    for l in 0..2 {
                        lin[(row, 2 * l + k)] -= fc[(i, k)] * f[(l, j)];
                    }
                }
            }
        }
        let nv = lin.lu().solve(&rhs).ok_or_else(|| Error::InvalidKet("singular moment system".into()))?;
        let n = Matrix2::new(nv[0], nv[1], nv[2], nv[3]);
        let fn_ = f * n;
        let a = Matrix2::from_fn(|i, j| f[(i, j)] + fn_[(j, i)]);

        // moments ⟨b_u b_v⟩ for b = (a₁, a₂, a₁†, a₂†)
        let mut g = Matrix4::<C64>::zeros();
        for i in 0..2 {
            for j in 0..2 {
                let delta = if i == j { 1.0 } else { 0.0 };
                g[(i, j)] = a[(i, j)];
                g[(i, 2 + j)] = n[(j, i)] + delta;
                g[(2 + i, j)] = n[(i, j)];
                g[(2 + i, 2 + j)] = a[(i, j)].conj();
            }
        }
        let t = quadrature_transform();
        let cov = (t * g * t.transpose()).map(|z| z.re);
        let cov = (cov + cov.transpose()) * 0.5;
        let b = Vector4::new(alpha[0], alpha[1], alpha[0].conj(), alpha[1].conj());
        let mean = (t * b).map(|z| z.re);
        GaussianState::new(mean, cov)
    }
}

/// Rows express `(X₁, P₁, X₂, P₂)` in `(a₁, a₂, a₁†, a₂†)`.
fn quadrature_transform() -> Matrix4<C64> {
    let r = C64::new(FRAC_1_SQRT_2, 0.0);
    let i = C64::new(0.0, FRAC_1_SQRT_2);
    let z = C64::new(0.0, 0.0);
    Matrix4::new(
        r, z, r, z, //
        -i, z, i, z, //
        z, r, z, r, //
        z, -i, z, i,
    )
}

#[derive(Clone, Debug, PartialEq)]
pub struct SymplecticMap {
    pub s: Matrix4<f64>,
    pub d: Vector4<f64>,
}

impl SymplecticMap {
    pub fn identity() -> Self {
        SymplecticMap { s: Matrix4::identity(), d: Vector4::zeros() }
    }

    /// `max |SΩSᵀ − Ω|`.
    pub fn symplectic_error(&self) -> f64 {
        let w = omega();
        (self.s * w * self.s.transpose() - w).abs().max()
    }

    pub fn is_symplectic(&self, tol: f64) -> bool {
        self.symplectic_error() <= tol
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &SymplecticMap) -> SymplecticMap {
        SymplecticMap { s: self.s * other.s, d: self.s * other.d + self.d }
    }
}

/// The beam splitter `exp[θ(a₂†a₁ − a₁†a₂)]`: both quadrature pairs rotate by θ,
/// `X₁ → X₁cosθ + X₂sinθ`, `X₂ → X₂cosθ − X₁sinθ`.
pub fn symplectic_of_beamsplitter(theta: f64) -> SymplecticMap {
    let (s, c) = theta.sin_cos();
    let m = Matrix4::new(
        c, 0.0, s, 0.0, //
        0.0, c, 0.0, s, //
        -s, 0.0, c, 0.0, //
        0.0, -s, 0.0, c,
    );
    SymplecticMap { s: m, d: Vector4::zeros() }
}

/// Quadrature action of the θ-dependent squeezer `U(λ, θ)`:
/// `X₁ → X₁coshλ − X₂cotθ sinhλ`, `P₁ → P₁coshλ + P₂tanθ sinhλ`,
/// `X₂ → X₂coshλ − X₁tanθ sinhλ`, `P₂ → P₂coshλ + P₁cotθ sinhλ`.
pub fn symplectic_of_u(lambda: f64, theta: f64) -> Result<SymplecticMap> {
    check_theta(theta)?;
    let (c, s) = (lambda.cosh(), lambda.sinh());
    let (t, ct) = (theta.tan(), 1.0 / theta.tan());
    let m = Matrix4::new(
        c, 0.0, -s * ct, 0.0, //
        0.0, c, 0.0, s * t, //
        -s * t, 0.0, c, 0.0, //
        0.0, s * ct, 0.0, c,
    );
    Ok(SymplecticMap { s: m, d: Vector4::zeros() })
}

pub fn evolve(state: &GaussianState, map: &SymplecticMap) -> GaussianState {
    GaussianState {
        mean: map.s * state.mean + map.d,
        cov: map.s * state.cov * map.s.transpose(),
    }
}

/// `Var(Σ cᵢqᵢ) = cᵀ·cov·c`.
pub fn quad_variance(state: &GaussianState, coeffs: &Vector4<f64>) -> f64 {
    (coeffs.transpose() * state.cov * coeffs)[(0, 0)]
}

pub fn quad_mean(state: &GaussianState, coeffs: &Vector4<f64>) -> f64 {
    coeffs.dot(&state.mean)
}

/// `X₁ + X₂`.
pub fn x_sum() -> Vector4<f64> {
    Vector4::new(1.0, 0.0, 1.0, 0.0)
}

/// `P₁ + P₂`.
pub fn p_sum() -> Vector4<f64> {
    Vector4::new(0.0, 1.0, 0.0, 1.0)
}
