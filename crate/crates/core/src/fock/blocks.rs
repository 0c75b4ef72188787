//! Exponentials of charge-conserving generators, one dense block per charge.
//!
//! Passive two-mode generators conserve `n₁ + n₂` and the two-mode squeezer
//! conserves `n₁ − n₂`. The truncated generator matrix is then block diagonal,
//! so its exponential is the direct sum of small block exponentials. Blocks are
//! built on first use; a vector supported on few shells touches few blocks.

use std::sync::OnceLock;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use super::matrix::expm;
use super::poly::BosonPoly;
use super::vector::{index, FockVector};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Charge {
    /// `n₁ + n₂`
    Total,
    /// `n₁ − n₂`
    Difference,
}

impl Charge {
    fn block_of(self, cutoff: usize, n1: usize, n2: usize) -> usize {
        match self {
            Charge::Total => n1 + n2,
            Charge::Difference => n1 + cutoff - n2,
        }
    }

    fn conserved_by(self, shift: (i64, i64)) -> bool {
        match self {
            Charge::Total => shift.0 + shift.1 == 0,
            Charge::Difference => shift.0 == shift.1,
        }
    }
}

#[derive(Debug)]
struct Block {
    states: Vec<usize>,
    exp: DMatrix<C64>,
}

/// `exp(G)` on the truncated space for a generator `G` conserving a charge.
#[derive(Debug)]
pub struct BlockExp {
    cutoff: usize,
    charge: Charge,
    generator: BosonPoly,
    members: Vec<Vec<usize>>,
    blocks: Vec<OnceLock<Block>>,
}

impl BlockExp {
    pub fn new(generator: BosonPoly, charge: Charge, cutoff: usize) -> Result<Self> {
        if !generator.term_shifts().into_iter().all(|s| charge.conserved_by(s)) {
            return Err(Error::InvalidParameter(format!(
                "generator does not conserve the {charge:?} charge"
            )));
        }
        let mut members = vec![Vec::new(); 2 * cutoff + 1];
        for n1 in 0..=cutoff {
            for n2 in 0..=cutoff {
                members[charge.block_of(cutoff, n1, n2)].push(index(cutoff, n1, n2));
            }
        }
        let blocks = (0..members.len()).map(|_| OnceLock::new()).collect();
        Ok(BlockExp { cutoff, charge, generator, members, blocks })
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn charge(&self) -> Charge {
        self.charge
    }

    fn block(&self, b: usize) -> &Block {
        self.blocks[b].get_or_init(|| {
            let states = self.members[b].clone();
            let n = states.len();
            let mut g = DMatrix::<C64>::zeros(n, n);
            let stride = self.cutoff + 1;
            for (j, &s) in states.iter().enumerate() {
                for (i_full, z) in self.generator.basis_action(s / stride, s % stride, self.cutoff) {
                    let i = states.binary_search(&i_full).expect("charge conserved");
                    g[(i, j)] += z;
                }
            }
            Block { states, exp: expm(&g) }
        })
    }

    fn apply_with(&self, v: &FockVector, adjoint: bool) -> Result<FockVector> {
        if v.cutoff() != self.cutoff {
            return Err(Error::CutoffMismatch { left: self.cutoff, right: v.cutoff() });
        }
        let mut out = FockVector::zeros(self.cutoff);
        let src = v.amplitudes();
        for b in 0..self.members.len() {
            if self.members[b].iter().all(|&s| src[s] == C64::new(0.0, 0.0)) {
                continue;
            }
            let blk = self.block(b);
            let x = DVector::from_iterator(blk.states.len(), blk.states.iter().map(|&s| src[s]));
            let y = if adjoint { blk.exp.ad_mul(&x) } else { &blk.exp * &x };
            let dst = out.amplitudes_mut();
            for (k, &s) in blk.states.iter().enumerate() {
                dst[s] = y[k];
            }
        }
        Ok(out)
    }

    pub fn apply(&self, v: &FockVector) -> Result<FockVector> {
        self.apply_with(v, false)
    }

    pub fn apply_adjoint(&self, v: &FockVector) -> Result<FockVector> {
        self.apply_with(v, true)
    }
}
