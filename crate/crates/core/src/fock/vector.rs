use num_complex::Complex64 as C64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{Error, Result};

/// Amplitudes `ψ(n₁, n₂)` for `0 ≤ nᵢ ≤ cutoff`, stored row-major in `(n₁, n₂)`.
#[derive(Clone, Debug, PartialEq)]
pub struct FockVector {
    cutoff: usize,
    amps: Vec<C64>,
}

#[inline]
pub fn index(cutoff: usize, n1: usize, n2: usize) -> usize {
    n1 * (cutoff + 1) + n2
}

#[inline]
pub fn occupations(cutoff: usize, idx: usize) -> (usize, usize) {
    (idx / (cutoff + 1), idx % (cutoff + 1))
}

impl FockVector {
    pub fn zeros(cutoff: usize) -> Self {
        FockVector { cutoff, amps: vec![C64::new(0.0, 0.0); (cutoff + 1) * (cutoff + 1)] }
    }

    pub fn basis(cutoff: usize, n1: usize, n2: usize) -> Result<Self> {
        if n1 > cutoff || n2 > cutoff {
            return Err(Error::InvalidParameter(format!(
                "basis state ({n1},{n2}) outside cutoff {cutoff}"
            )));
        }
        let mut v = Self::zeros(cutoff);
        v.amps[index(cutoff, n1, n2)] = C64::new(1.0, 0.0);
        Ok(v)
    }

    pub fn from_amplitudes(cutoff: usize, amps: Vec<C64>) -> Result<Self> {
        let dim = (cutoff + 1) * (cutoff + 1);
        if amps.len() != dim {
            return Err(Error::InvalidParameter(format!(
                "expected {dim} amplitudes for cutoff {cutoff}, got {}",
                amps.len()
            )));
        }
        if !amps.iter().all(|z| z.is_finite()) {
            return Err(Error::InvalidParameter("non-finite amplitude".into()));
        }
        Ok(FockVector { cutoff, amps })
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [C64] {
        &mut self.amps
    }

    pub fn get(&self, n1: usize, n2: usize) -> C64 {
        self.amps[index(self.cutoff, n1, n2)]
    }

    pub fn set(&mut self, n1: usize, n2: usize, value: C64) {
        let i = index(self.cutoff, n1, n2);
        self.amps[i] = value;
    }

    fn check(&self, other: &FockVector) -> Result<()> {
        if self.cutoff != other.cutoff {
            return Err(Error::CutoffMismatch { left: self.cutoff, right: other.cutoff });
        }
        Ok(())
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &FockVector) -> Result<C64> {
        self.check(other)?;
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn normalized(&self) -> Result<FockVector> {
        let n = self.norm();
        if !(n > 1e-300) {
            return Err(Error::ZeroNorm { norm: n });
        }
        Ok(self.scaled(C64::new(1.0 / n, 0.0)))
    }

    pub fn scaled(&self, k: C64) -> FockVector {
        FockVector { cutoff: self.cutoff, amps: self.amps.iter().map(|z| z * k).collect() }
    }

    /// `self + k·other`.
    pub fn axpy(&self, k: C64, other: &FockVector) -> Result<FockVector> {
        self.check(other)?;
        let amps = self.amps.iter().zip(&other.amps).map(|(a, b)| a + k * b).collect();
        Ok(FockVector { cutoff: self.cutoff, amps })
    }

    pub fn sub(&self, other: &FockVector) -> Result<FockVector> {
        self.axpy(C64::new(-1.0, 0.0), other)
    }

    /// Zeroes every component with `n₁ + n₂ > max_total`.
    pub fn project_total(&self, max_total: usize) -> FockVector {
        let mut out = self.clone();
        for (i, z) in out.amps.iter_mut().enumerate() {
            let (n1, n2) = occupations(self.cutoff, i);
            if n1 + n2 > max_total {
                *z = C64::new(0.0, 0.0);
            }
        }
        out
    }

    /// Drops components beyond a smaller cutoff.
    pub fn restrict(&self, cutoff: usize) -> Result<FockVector> {
        if cutoff > self.cutoff {
            return Err(Error::CutoffMismatch { left: self.cutoff, right: cutoff });
        }
        let mut out = FockVector::zeros(cutoff);
        for n1 in 0..=cutoff {
            for n2 in 0..=cutoff {
                out.set(n1, n2, self.get(n1, n2));
            }
        }
        Ok(out)
    }

    /// Zero-pads to a larger cutoff.
    pub fn embed(&self, cutoff: usize) -> Result<FockVector> {
        if cutoff < self.cutoff {
            return Err(Error::CutoffMismatch { left: self.cutoff, right: cutoff });
        }
        let mut out = FockVector::zeros(cutoff);
        for n1 in 0..=self.cutoff {
            for n2 in 0..=self.cutoff {
                out.set(n1, n2, self.get(n1, n2));
            }
        }
        Ok(out)
    }

    /// `|⟨u|v⟩|² / (⟨u|u⟩⟨v|v⟩)`.
    pub fn fidelity(&self, other: &FockVector) -> Result<f64> {
        let (nu, nv) = (self.norm_sqr(), other.norm_sqr());
        if !(nu > 1e-300 && nv > 1e-300) {
            return Err(Error::ZeroNorm { norm: nu.min(nv) });
        }
        Ok(self.inner(other)?.norm_sqr() / (nu * nv))
    }
}

#[derive(Serialize, Deserialize)]
struct FockVectorJson {
    cutoff: usize,
    amplitudes: Vec<[f64; 2]>,
}

impl Serialize for FockVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FockVectorJson {
            cutoff: self.cutoff,
            amplitudes: self.amps.iter().map(|z| [z.re, z.im]).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FockVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = FockVectorJson::deserialize(d)?;
        let amps = raw.amplitudes.iter().map(|[re, im]| C64::new(*re, *im)).collect();
        FockVector::from_amplitudes(raw.cutoff, amps).map_err(serde::de::Error::custom)
    }
}
