//! Polynomials in the ladder operators, applied to truncated vectors.
//!
//! A word of ladder operators maps a number state to a single number state, so
//! each monomial is applied as a shift with a `√n` coefficient. Applying the
//! letters one at a time and dropping anything pushed past the cutoff
//! reproduces the product of truncated matrices exactly.

use std::f64::consts::FRAC_1_SQRT_2;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64 as C64;

use super::vector::{index, occupations, FockVector};
use crate::exponent::Mode;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LadderKind {
    Annihilate,
    Create,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Ladder {
    pub mode: Mode,
    pub kind: LadderKind,
}

impl Ladder {
    fn adjoint(self) -> Ladder {
        let kind = match self.kind {
            LadderKind::Annihilate => LadderKind::Create,
            LadderKind::Create => LadderKind::Annihilate,
        };
        Ladder { mode: self.mode, kind }
    }

    /// Net change of `(n₁, n₂)`.
    fn shift(self) -> (i64, i64) {
        let d = match self.kind {
            LadderKind::Annihilate => -1,
            LadderKind::Create => 1,
        };
        match self.mode {
            Mode::One => (d, 0),
            Mode::Two => (0, d),
        }
    }
}

/// Linear combination of words in `a₁, a₂, a₁†, a₂†`; words are written left to
/// right and act right to left.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct BosonPoly {
    terms: Vec<(C64, Vec<Ladder>)>,
}

impl BosonPoly {
    pub fn zero() -> Self {
        BosonPoly::default()
    }

    pub fn scalar(z: C64) -> Self {
        BosonPoly { terms: vec![(z, Vec::new())] }
    }

    pub fn identity() -> Self {
        Self::scalar(C64::new(1.0, 0.0))
    }

    pub fn ladder(mode: Mode, kind: LadderKind) -> Self {
        BosonPoly { terms: vec![(C64::new(1.0, 0.0), vec![Ladder { mode, kind }])] }
    }

    pub fn a(mode: Mode) -> Self {
        Self::ladder(mode, LadderKind::Annihilate)
    }

    pub fn adag(mode: Mode) -> Self {
        Self::ladder(mode, LadderKind::Create)
    }

    /// `X = (a + a†)/√2`.
    pub fn x(mode: Mode) -> Self {
        (Self::a(mode) + Self::adag(mode)) * FRAC_1_SQRT_2
    }

    /// `P = (a − a†)/(√2 i)`.
    pub fn p(mode: Mode) -> Self {
        (Self::a(mode) - Self::adag(mode)) * C64::new(0.0, -FRAC_1_SQRT_2)
    }

    pub fn number(mode: Mode) -> Self {
        Self::adag(mode) * Self::a(mode)
    }

    pub fn terms(&self) -> &[(C64, Vec<Ladder>)] {
        &self.terms
    }

    pub fn adjoint(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(z, w)| (z.conj(), w.iter().rev().map(|l| l.adjoint()).collect()))
            .collect();
        BosonPoly { terms }
    }

    /// Net `(Δn₁, Δn₂)` of every term.
    pub fn term_shifts(&self) -> Vec<(i64, i64)> {
        self.terms
            .iter()
            .map(|(_, w)| {
                w.iter().fold((0, 0), |(a, b), l| {
                    let (da, db) = l.shift();
                    (a + da, b + db)
                })
            })
            .collect()
    }

    /// Image of `|n₁, n₂⟩` under a single word, or `None` if truncated away.
    fn word_on_basis(word: &[Ladder], n1: usize, n2: usize, cutoff: usize) -> Option<(usize, usize, f64)> {
        let (mut m1, mut m2, mut amp) = (n1, n2, 1.0f64);
        for l in word.iter().rev() {
            let n = match l.mode {
                Mode::One => &mut m1,
                Mode::Two => &mut m2,
            };
            match l.kind {
                LadderKind::Annihilate => {
                    if *n == 0 {
                        return None;
                    }
                    amp *= (*n as f64).sqrt();
                    *n -= 1;
                }
                LadderKind::Create => {
                    if *n == cutoff {
                        return None;
                    }
                    *n += 1;
                    amp *= (*n as f64).sqrt();
                }
            }
        }
        Some((m1, m2, amp))
    }

    /// Column `|n₁, n₂⟩` of the truncated matrix as sparse `(index, value)` pairs.
    pub fn basis_action(&self, n1: usize, n2: usize, cutoff: usize) -> Vec<(usize, C64)> {
        let mut out: Vec<(usize, C64)> = Vec::new();
        for (z, word) in &self.terms {
            if let Some((m1, m2, amp)) = Self::word_on_basis(word, n1, n2, cutoff) {
                let i = index(cutoff, m1, m2);
                match out.iter_mut().find(|(j, _)| *j == i) {
                    Some((_, v)) => *v += z * amp,
                    None => out.push((i, z * amp)),
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &FockVector) -> FockVector {
        let cutoff = v.cutoff();
        let mut out = FockVector::zeros(cutoff);
        let dst = out.amplitudes_mut();
        for (z, word) in &self.terms {
            for (i, x) in v.amplitudes().iter().enumerate() {
                if *x == C64::new(0.0, 0.0) {
                    continue;
                }
                let (n1, n2) = occupations(cutoff, i);
                if let Some((m1, m2, amp)) = Self::word_on_basis(word, n1, n2, cutoff) {
                    dst[index(cutoff, m1, m2)] += z * x * amp;
                }
            }
        }
        out
    }
}

impl Add for BosonPoly {
    type Output = BosonPoly;
    fn add(mut self, rhs: BosonPoly) -> BosonPoly {
        self.terms.extend(rhs.terms);
        self
    }
}

impl Neg for BosonPoly {
    type Output = BosonPoly;
    fn neg(self) -> BosonPoly {
        self * -1.0
    }
}

impl Sub for BosonPoly {
    type Output = BosonPoly;
    fn sub(self, rhs: BosonPoly) -> BosonPoly {
        self + (-rhs)
    }
}

impl Mul for BosonPoly {
    type Output = BosonPoly;
    fn mul(self, rhs: BosonPoly) -> BosonPoly {
        let mut terms = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for (za, wa) in &self.terms {
            for (zb, wb) in &rhs.terms {
                let mut w = wa.clone();
                w.extend_from_slice(wb);
                terms.push((za * zb, w));
            }
        }
        BosonPoly { terms }
    }
}

impl Mul<C64> for BosonPoly {
    type Output = BosonPoly;
    fn mul(mut self, k: C64) -> BosonPoly {
        for (z, _) in &mut self.terms {
            *z *= k;
        }
        self
    }
}

impl Mul<f64> for BosonPoly {
    type Output = BosonPoly;
    fn mul(self, k: f64) -> BosonPoly {
        self * C64::new(k, 0.0)
    }
}
