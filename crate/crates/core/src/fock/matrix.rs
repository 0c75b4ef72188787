use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use super::poly::{BosonPoly, LadderKind};
use super::vector::{occupations, FockVector};
use crate::exponent::Mode;
use crate::{Error, Result};

/// Taylor terms below this fraction of the running sum end the series.
pub const EXPM_SERIES_TOL: f64 = 1e-14;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Quadrature {
    X,
    P,
}

/// Dense operator on the truncated two-mode space, dimension `(N+1)²`.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrix {
    cutoff: usize,
    m: DMatrix<C64>,
}

impl OperatorMatrix {
    pub fn new(cutoff: usize, m: DMatrix<C64>) -> Result<Self> {
        let dim = (cutoff + 1) * (cutoff + 1);
        if m.nrows() != dim || m.ncols() != dim {
            return Err(Error::InvalidParameter(format!(
                "matrix is {}x{}, cutoff {cutoff} needs {dim}x{dim}",
                m.nrows(),
                m.ncols()
            )));
        }
        Ok(OperatorMatrix { cutoff, m })
    }

    pub fn identity(cutoff: usize) -> Self {
        let dim = (cutoff + 1) * (cutoff + 1);
        OperatorMatrix { cutoff, m: DMatrix::identity(dim, dim) }
    }

    /// Truncated matrix of a ladder polynomial.
    pub fn from_poly(poly: &BosonPoly, cutoff: usize) -> Self {
        let dim = (cutoff + 1) * (cutoff + 1);
        let mut m = DMatrix::zeros(dim, dim);
        for j in 0..dim {
            let (n1, n2) = occupations(cutoff, j);
            for (i, z) in poly.basis_action(n1, n2, cutoff) {
                m[(i, j)] += z;
            }
        }
        OperatorMatrix { cutoff, m }
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.m
    }

    fn check(&self, cutoff: usize) -> Result<()> {
        if self.cutoff != cutoff {
            return Err(Error::CutoffMismatch { left: self.cutoff, right: cutoff });
        }
        Ok(())
    }

    pub fn apply(&self, v: &FockVector) -> Result<FockVector> {
        self.check(v.cutoff())?;
        let x = DVector::from_column_slice(v.amplitudes());
        FockVector::from_amplitudes(self.cutoff, (&self.m * x).as_slice().to_vec())
    }

    pub fn mul(&self, other: &OperatorMatrix) -> Result<OperatorMatrix> {
        self.check(other.cutoff)?;
        Ok(OperatorMatrix { cutoff: self.cutoff, m: &self.m * &other.m })
    }

    pub fn add(&self, other: &OperatorMatrix) -> Result<OperatorMatrix> {
        self.check(other.cutoff)?;
        Ok(OperatorMatrix { cutoff: self.cutoff, m: &self.m + &other.m })
    }

    pub fn sub(&self, other: &OperatorMatrix) -> Result<OperatorMatrix> {
        self.check(other.cutoff)?;
        Ok(OperatorMatrix { cutoff: self.cutoff, m: &self.m - &other.m })
    }

    pub fn scaled(&self, k: C64) -> OperatorMatrix {
        OperatorMatrix { cutoff: self.cutoff, m: &self.m * k }
    }

    pub fn adjoint(&self) -> OperatorMatrix {
        OperatorMatrix { cutoff: self.cutoff, m: self.m.adjoint() }
    }

    /// `[self, other]`.
    pub fn commutator(&self, other: &OperatorMatrix) -> Result<OperatorMatrix> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    pub fn max_abs(&self) -> f64 {
        self.m.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        (&self.m - self.m.adjoint()).iter().all(|z| z.norm() <= tol)
    }

    pub fn expm(&self) -> OperatorMatrix {
        OperatorMatrix { cutoff: self.cutoff, m: expm(&self.m) }
    }

    /// Largest entry of `self − other` restricted to rows and columns with
    /// `n₁ + n₂ ≤ max_total`.
    pub fn guarded_distance(&self, other: &OperatorMatrix, max_total: usize) -> Result<f64> {
        self.check(other.cutoff)?;
        let keep: Vec<usize> = (0..self.m.nrows())
            .filter(|&i| {
                let (a, b) = occupations(self.cutoff, i);
                a + b <= max_total
            })
            .collect();
        let mut worst = 0.0f64;
        for &i in &keep {
            for &j in &keep {
                worst = worst.max((self.m[(i, j)] - other.m[(i, j)]).norm());
            }
        }
        Ok(worst)
    }
}

/// Truncated `a_mode` or `a_mode†`.
pub fn ladder_matrix(mode: Mode, kind: LadderKind, cutoff: usize) -> Result<OperatorMatrix> {
    if cutoff < 1 {
        return Err(Error::InvalidParameter("cutoff must be at least 1".into()));
    }
    Ok(OperatorMatrix::from_poly(&BosonPoly::ladder(mode, kind), cutoff))
}

/// Truncated `X_mode` or `P_mode`.
pub fn quadrature_matrix(mode: Mode, kind: Quadrature, cutoff: usize) -> Result<OperatorMatrix> {
    if cutoff < 1 {
        return Err(Error::InvalidParameter("cutoff must be at least 1".into()));
    }
    let poly = match kind {
        Quadrature::X => BosonPoly::x(mode),
        Quadrature::P => BosonPoly::p(mode),
    };
    Ok(OperatorMatrix::from_poly(&poly, cutoff))
}

fn one_norm(m: &DMatrix<C64>) -> f64 {
    m.column_iter().map(|c| c.iter().map(|z| z.norm()).sum::<f64>()).fold(0.0, f64::max)
}

/// Matrix exponential by scaling and squaring with a Taylor core.
pub fn expm(m: &DMatrix<C64>) -> DMatrix<C64> {
    let n = m.nrows();
    let norm = one_norm(m);
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as i32 } else { 0 };
    let a = m * C64::new(0.5f64.powi(squarings), 0.0);
    let mut sum = DMatrix::<C64>::identity(n, n);
    let mut term = DMatrix::<C64>::identity(n, n);
    for k in 1..64 {
        term = &term * &a * C64::new(1.0 / k as f64, 0.0);
        sum += &term;
        if one_norm(&term) <= EXPM_SERIES_TOL * one_norm(&sum) {
            break;
        }
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}
