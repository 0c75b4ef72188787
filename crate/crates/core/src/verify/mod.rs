//! Representation-level experiments: the weighted resolution of identity of
//! `{|η,θ⟩}`, delta-like orthogonality across a cutoff ladder, and the suite
//! runner that collects every check into one report.

pub mod report;
pub mod suites;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::exponent::ComplexLabel;
use crate::fock::{fock_expand, vector::index, FockVector};
use crate::states::make_eta_theta_state;
use crate::tolerances::{
    COMPLETENESS_DIAGONAL, COMPLETENESS_OFF_DIAGONAL, GRID_CONVERGENCE, WEIGHT_RATIO,
};
use crate::{check_theta, Error, Result};

pub use report::{assemble_report, Bound, ExperimentKind, ExperimentReport, SuiteReport};
pub use suites::{run_suite, Suite, SuiteConfig};

/// Square lattice `η = h(k₁ + i k₂)`, `|kᵢ| ≤ R/h`, each node the midpoint of
/// an `h × h` cell.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub radius: f64,
    pub spacing: f64,
    pub theta: f64,
    pub cutoff: usize,
    /// Probed subspace is `n₁ + n₂ ≤ subspace`.
    pub subspace: usize,
}

impl GridSpec {
    pub fn new(radius: f64, spacing: f64, theta: f64, cutoff: usize, subspace: usize) -> Result<Self> {
        check_theta(theta)?;
        if !(radius > 0.0 && spacing > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidParameter(format!("grid needs R > 0 and h > 0, got R={radius} h={spacing}")));
        }
        let steps = radius / spacing;
        if (steps - steps.round()).abs() > 1e-9 {
            return Err(Error::InvalidParameter(format!("R/h = {steps} is not an integer")));
        }
        if subspace > cutoff {
            return Err(Error::InvalidParameter("subspace exceeds cutoff".into()));
        }
        Ok(GridSpec { radius, spacing, theta, cutoff, subspace })
    }

    /// Acceptance defaults at the given angle.
    pub fn standard(theta: f64) -> Result<Self> {
        GridSpec::new(4.0, 0.25, theta, 24, 4)
    }

    pub fn steps(&self) -> i64 {
        (self.radius / self.spacing).round() as i64
    }

    pub fn halved(&self) -> Self {
        GridSpec { spacing: self.spacing / 2.0, ..*self }
    }

    /// Grid labels in fixed row-major order.
    pub fn points(&self) -> impl Iterator<Item = ComplexLabel> + '_ {
        let k = self.steps();
        let h = self.spacing;
        (-k..=k).flat_map(move |i| (-k..=k).map(move |j| ComplexLabel::new(C64::new(i as f64 * h, j as f64 * h))))
    }

    pub fn len(&self) -> usize {
        let n = (2 * self.steps() + 1) as usize;
        n * n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn weight(&self) -> f64 {
        (2.0 * self.theta).sin() * self.spacing * self.spacing / std::f64::consts::PI
    }
}

/// Basis states `(n₁, n₂)` with `n₁ + n₂ ≤ max_total`, ordered by Fock index.
pub fn low_subspace(cutoff: usize, max_total: usize) -> Vec<(usize, usize)> {
    let mut v: Vec<(usize, usize)> = (0..=max_total.min(cutoff))
        .flat_map(|n1| (0..=(max_total - n1).min(cutoff)).map(move |n2| (n1, n2)))
        .collect();
    v.sort_by_key(|&(a, b)| index(cutoff, a, b));
    v
}

fn project(v: &FockVector, sub: &[(usize, usize)]) -> Vec<C64> {
    sub.iter().map(|&(a, b)| v.get(a, b)).collect()
}

/// `Σ_grid w·P|η,θ⟩⟨η,θ|P` on the low subspace, for per-point weight `w`.
/// Accumulation follows the fixed grid order.
pub fn completeness_matrix(g: &GridSpec, weight: f64) -> Result<DMatrix<C64>> {
    let sub = low_subspace(g.cutoff, g.subspace);
    let d = sub.len();
    let mut m = DMatrix::<C64>::zeros(d, d);
    for eta in g.points() {
        let v = project(&fock_expand(&make_eta_theta_state(eta, g.theta)?, g.cutoff), &sub);
        for j in 0..d {
            let cj = v[j].conj() * weight;
            for i in 0..d {
                m[(i, j)] += v[i] * cj;
            }
        }
    }
    Ok(m)
}

/// Half-plane split of the diagonal, `Re η > 0` against `Re η < 0`.
fn reflection_asymmetry(g: &GridSpec) -> Result<f64> {
    let sub = low_subspace(g.cutoff, g.subspace);
    let mut plus = vec![0.0; sub.len()];
    let mut minus = vec![0.0; sub.len()];
    for eta in g.points() {
        let re = eta.eta().re;
        if re == 0.0 {
            continue;
        }
        let v = project(&fock_expand(&make_eta_theta_state(eta, g.theta)?, g.cutoff), &sub);
        let target = if re > 0.0 { &mut plus } else { &mut minus };
        for (t, z) in target.iter_mut().zip(&v) {
            *t += z.norm_sqr() * g.weight();
        }
    }
    Ok(plus.iter().zip(&minus).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Deviation {
    pub diagonal: f64,
    pub off_diagonal: f64,
}

impl Deviation {
    pub fn of(m: &DMatrix<C64>) -> Self {
        let mut diagonal = 0.0f64;
        let mut off_diagonal = 0.0f64;
        for j in 0..m.ncols() {
            for i in 0..m.nrows() {
                if i == j {
                    diagonal = diagonal.max((m[(i, i)] - 1.0).norm());
                } else {
                    off_diagonal = off_diagonal.max(m[(i, j)].norm());
                }
            }
        }
        Deviation { diagonal, off_diagonal }
    }

    pub fn max(&self) -> f64 {
        self.diagonal.max(self.off_diagonal)
    }
}

pub fn min_eigenvalue(m: &DMatrix<C64>) -> f64 {
    m.clone().symmetric_eigen().eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
}

fn hermiticity(m: &DMatrix<C64>) -> f64 {
    (m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Change of the completeness deviation when `h` is halved; `GridTooCoarse`
/// when it exceeds the convergence tolerance.
pub fn grid_convergence(g: &GridSpec) -> Result<f64> {
    let coarse = Deviation::of(&completeness_matrix(g, g.weight())?).max();
    let fine = g.halved();
    let change = (Deviation::of(&completeness_matrix(&fine, fine.weight())?).max() - coarse).abs();
    if change > GRID_CONVERGENCE {
        Err(Error::GridTooCoarse { change })
    } else {
        Ok(change)
    }
}

fn is_balanced(theta: f64) -> bool {
    (theta - std::f64::consts::FRAC_PI_4).abs() < crate::ANGLE_EPS
}

/// Weighted completeness on the low subspace, with the grid-halving ladder and
/// the unweighted control.
pub fn completeness_scan(g: &GridSpec) -> Result<ExperimentReport> {
    let weighted = completeness_matrix(g, g.weight())?;
    let dev = Deviation::of(&weighted);
    let fine = g.halved();
    let fine_dev = Deviation::of(&completeness_matrix(&fine, fine.weight())?);
    let sin2 = (2.0 * g.theta).sin();

    let mut r = ExperimentReport::new(ExperimentKind::Completeness)
        .param("theta", g.theta)
        .param("radius", g.radius)
        .param("spacing", g.spacing)
        .param("cutoff", g.cutoff)
        .param("subspace", g.subspace)
        .param("points", g.len());
    r.bounded("diagonal_deviation", dev.diagonal, Bound::Below(COMPLETENESS_DIAGONAL));
    r.bounded("off_diagonal_max", dev.off_diagonal, Bound::Below(COMPLETENESS_OFF_DIAGONAL));
    r.bounded("grid_change", (fine_dev.max() - dev.max()).abs(), Bound::Below(GRID_CONVERGENCE));
    r.metric("fine_diagonal_deviation", fine_dev.diagonal);
    r.bounded("min_eigenvalue", min_eigenvalue(&weighted), Bound::AtLeast(-1e-10));
    r.bounded("hermiticity", hermiticity(&weighted), Bound::Below(1e-12));
    r.metric("reflection_asymmetry", reflection_asymmetry(g)?);

    // Dropping sin2θ divides the weight by sin2θ, so the diagonal scales by 1/sin2θ.
    let mean_diag = |m: &DMatrix<C64>| m.diagonal().iter().map(|z| z.re).sum::<f64>() / m.nrows() as f64;
    let unweighted = &weighted / C64::new(sin2, 0.0);
    let ratio = mean_diag(&unweighted) / mean_diag(&weighted);
    r.bounded("unweighted_ratio_error", (ratio * sin2 - 1.0).abs(), Bound::Below(WEIGHT_RATIO));
    if !is_balanced(g.theta) {
        r.bounded(
            "unweighted_diagonal_deviation",
            Deviation::of(&unweighted).diagonal,
            Bound::AtLeast(COMPLETENESS_DIAGONAL),
        );
    }
    Ok(r.finish())
}

/// `|⟨b|a⟩|/(‖a‖‖b‖)` of truncated expansions.
pub fn normalized_overlap(a: ComplexLabel, b: ComplexLabel, theta: f64, cutoff: usize) -> Result<f64> {
    let va = fock_expand(&make_eta_theta_state(a, theta)?, cutoff);
    let vb = fock_expand(&make_eta_theta_state(b, theta)?, cutoff);
    let n = (va.norm_sqr() * vb.norm_sqr()).sqrt();
    if !(n > 0.0) {
        return Err(Error::ZeroNorm { norm: n });
    }
    Ok(vb.inner(&va)?.norm() / n)
}

/// `sin2θ/π · Σ h²⟨η′,θ|η,θ⟩` over a square of half-width `radius` around η,
/// with the truncated kets scaled to the norm of the probe. Tends to a constant
/// as the cutoff grows if the overlap is delta-like with weight `π/sin2θ`.
fn near_diagonal_mass(eta: ComplexLabel, theta: f64, cutoff: usize, radius: f64, h: f64) -> Result<f64> {
    let probe = fock_expand(&make_eta_theta_state(eta, theta)?, cutoff);
    let k = (radius / h).round() as i64;
    let mut acc = C64::new(0.0, 0.0);
    for i in -k..=k {
        for j in -k..=k {
            let e = ComplexLabel::new(eta.eta() + C64::new(i as f64 * h, j as f64 * h));
            let v = fock_expand(&make_eta_theta_state(e, theta)?, cutoff);
            acc += v.inner(&probe)?;
        }
    }
    Ok((acc * h * h).norm() * (2.0 * theta).sin() / (std::f64::consts::PI * probe.norm_sqr()))
}

/// Normalized cross-overlaps of `|η,θ⟩` pairs across a cutoff ladder.
pub fn orthogonality_scan(
    theta: f64,
    pairs: &[(ComplexLabel, ComplexLabel)],
    cutoffs: &[usize],
) -> Result<ExperimentReport> {
    check_theta(theta)?;
    if pairs.iter().any(|(a, b)| a == b) {
        return Err(Error::InvalidParameter("orthogonality pairs need η′ ≠ η".into()));
    }
    let mut r = ExperimentReport::new(ExperimentKind::Orthogonality)
        .param("theta", theta)
        .param("cutoffs", cutoffs.to_vec())
        .param(
            "pairs",
            pairs
                .iter()
                .map(|(a, b)| vec![a.eta().re, a.eta().im, b.eta().re, b.eta().im])
                .collect::<Vec<_>>(),
        );
    let sin2 = (2.0 * theta).sin();
    let mut worst_ratio = 0.0f64;
    for (p, (a, b)) in pairs.iter().enumerate() {
        let mut prev: Option<f64> = None;
        for &n in cutoffs {
            let ov = normalized_overlap(*a, *b, theta, n)?;
            r.metric(format!("pair{p}_overlap_n{n:02}"), ov);
            r.metric(format!("pair{p}_weighted_difference_n{n:02}"), sin2 * (a.eta() - b.eta()).norm() * ov);
            if let Some(q) = prev {
                worst_ratio = worst_ratio.max(ov / q);
            }
            prev = Some(ov);
        }
    }
    // Strict decrease at every rung means every ratio is below one.
    r.bounded("max_successive_ratio", worst_ratio, Bound::Below(1.0));
    for &n in cutoffs {
        r.metric(format!("near_diagonal_mass_n{n:02}"), near_diagonal_mass(pairs[0].0, theta, n, 1.0, 0.25)?);
    }
    Ok(r.finish())
}
