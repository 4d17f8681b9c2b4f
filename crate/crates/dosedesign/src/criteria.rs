//! Information matrices, the Bayesian D-criterion, sensitivity functions,
//! and the equivalence-theorem certificate.
//!
//! For a composite design `ξ = (ξ_1, …, ξ_M, μ)` the information matrix is
//!
//! ```text
//! M(ξ, θ) = Σ_i λ_i Σ_j w_{ij} h_i(d_{ij}, θ) h_i(d_{ij}, θ)ᵀ,
//! ```
//!
//! with `h_i` the `1/σ_i`-scaled gradient of group `i`'s mean curve. Designs
//! are ranked by `Φ_π(ξ) = Σ_t p_t · log det M(ξ, θ_t)` over a discrete
//! prior. A design maximizes `Φ_π` iff the `M` sensitivity functions
//!
//! ```text
//! τ_i(d) = Σ_t p_t · h_i(d, θ_t)ᵀ M(ξ, θ_t)⁻¹ h_i(d, θ_t) − m
//! ```
//!
//! are `≤ 0` everywhere on `[0, d_max^{(i)}]`, with equality at every
//! support point; [`check_equivalence`] tests this on a grid with
//! golden-section refinement of each local maximum.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};

use crate::design::{CompositeDesign, Design, DiscretePrior, FullParameterVector, ParameterStructure};
use crate::models::{gradient_group, gradient_individual, ModelKind};
use crate::{Error, Result};

/// Determinants at or below this are treated as zero (`Φ` contribution −∞).
pub const DET_FLOOR: f64 = 1e-300;

/// A symmetric positive-semidefinite information matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct InfoMatrix {
    matrix: DMatrix<f64>,
}

impl InfoMatrix {
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// `log det`, or `None` when the matrix is singular — determinant at or
    /// below [`DET_FLOOR`], or numerically rank-deficient.
    ///
    /// Cholesky first; borderline semidefinite matrices fall back to a
    /// symmetric eigendecomposition. Either way a relative rank test runs:
    /// an exactly rank-deficient matrix assembled in floating point carries
    /// a rounding-noise pivot rather than an exact zero, so tiny pivots are
    /// judged against the largest one, not against zero.
    pub fn log_det(&self) -> Option<f64> {
        let floor = DET_FLOOR.ln();
        let n = self.dim() as f64;
        if let Some(ch) = Cholesky::new(self.matrix.clone()) {
            let l = ch.l_dirty();
            let pivots: Vec<f64> = (0..self.dim()).map(|i| l[(i, i)]).collect();
            let largest = pivots.iter().copied().fold(0.0, f64::max);
            if pivots
                .iter()
                .any(|&p| p <= largest * (n * f64::EPSILON).sqrt())
            {
                return None;
            }
            let ld = 2.0 * pivots.iter().map(|p| p.ln()).sum::<f64>();
            return (ld.is_finite() && ld > floor).then_some(ld);
        }
        let eigenvalues = self.matrix.clone().symmetric_eigen().eigenvalues;
        let largest = eigenvalues.iter().copied().fold(0.0, f64::max);
        let mut ld = 0.0;
        for &lambda in eigenvalues.iter() {
            if lambda <= largest * n * f64::EPSILON {
                return None;
            }
            ld += lambda.ln();
        }
        (ld.is_finite() && ld > floor).then_some(ld)
    }
}

fn accumulate_outer(matrix: &mut DMatrix<f64>, h: &[f64], coeff: f64) {
    for r in 0..h.len() {
        if h[r] == 0.0 {
            continue;
        }
        let hr = coeff * h[r];
        for c in 0..h.len() {
            matrix[(r, c)] += hr * h[c];
        }
    }
}

/// `3×3` information matrix `Σ_j w_j h̃(d_j) h̃(d_j)ᵀ` of a single-group
/// design.
pub fn info_matrix_individual(
    kind: ModelKind,
    design: &Design,
    theta: &[f64; 3],
    sigma2: f64,
) -> Result<InfoMatrix> {
    let mut matrix = DMatrix::zeros(3, 3);
    for (d, w) in design.iter() {
        let h = gradient_individual(kind, d, theta, sigma2)?;
        accumulate_outer(&mut matrix, &h, w);
    }
    Ok(InfoMatrix { matrix })
}

/// `m×m` information matrix of a composite design,
/// `Σ_i λ_i Σ_j w_{ij} h_i h_iᵀ`.
pub fn info_matrix_composite(
    s: &ParameterStructure,
    xi: &CompositeDesign,
    theta: &FullParameterVector,
) -> Result<InfoMatrix> {
    if xi.num_groups() != s.num_groups() {
        return Err(Error::Dimension(format!(
            "design has {} groups, structure has {}",
            xi.num_groups(),
            s.num_groups()
        )));
    }
    let m = s.m();
    let mut matrix = DMatrix::zeros(m, m);
    for (i, (group, &lambda)) in xi
        .groups()
        .iter()
        .zip(xi.allocation().lambdas())
        .enumerate()
    {
        if lambda == 0.0 {
            continue;
        }
        for (d, w) in group.iter() {
            let h = gradient_group(s, i, d, theta)?;
            accumulate_outer(&mut matrix, &h, lambda * w);
        }
    }
    Ok(InfoMatrix { matrix })
}

fn validated_atoms(
    s: &ParameterStructure,
    prior: &DiscretePrior,
) -> Result<Vec<FullParameterVector>> {
    if prior.dim() != s.m() {
        return Err(Error::Dimension(format!(
            "prior atoms have dimension {}, structure needs m = {}",
            prior.dim(),
            s.m()
        )));
    }
    prior
        .atoms()
        .iter()
        .map(|atom| FullParameterVector::from_atom(s, atom))
        .collect()
}

/// The Bayesian D-criterion `Φ_π(ξ) = Σ_t p_t · log det M(ξ, θ_t)`.
///
/// Returns `-∞` (a value, not an error) when any prior atom's determinant
/// falls at or below [`DET_FLOOR`]; a Dirac prior yields the locally
/// D-optimal criterion `log det M(ξ, θ)`.
pub fn bayes_logdet(
    s: &ParameterStructure,
    xi: &CompositeDesign,
    prior: &DiscretePrior,
) -> Result<f64> {
    let thetas = validated_atoms(s, prior)?;
    let mut phi = 0.0;
    for (theta, &p) in thetas.iter().zip(prior.probs()) {
        match info_matrix_composite(s, xi, theta)?.log_det() {
            Some(ld) => phi += p * ld,
            None => return Ok(f64::NEG_INFINITY),
        }
    }
    Ok(phi)
}

/// Prior-averaged inverse-information factors of one design, reused across
/// many sensitivity evaluations.
struct TauContext {
    thetas: Vec<FullParameterVector>,
    probs: Vec<f64>,
    factors: Vec<Cholesky<f64, Dyn>>,
    m: usize,
}

impl TauContext {
    fn new(s: &ParameterStructure, xi: &CompositeDesign, prior: &DiscretePrior) -> Result<Self> {
        let thetas = validated_atoms(s, prior)?;
        let mut factors = Vec::with_capacity(thetas.len());
        for theta in &thetas {
            let info = info_matrix_composite(s, xi, theta)?;
            let factor = Cholesky::new(info.matrix.clone()).ok_or_else(|| {
                Error::Singular(format!(
                    "information matrix not positive definite at prior atom {:?}",
                    theta.as_slice()
                ))
            })?;
            factors.push(factor);
        }
        Ok(TauContext {
            probs: prior.probs().to_vec(),
            thetas,
            factors,
            m: s.m(),
        })
    }

    fn tau(&self, s: &ParameterStructure, group_index: usize, d: f64) -> Result<f64> {
        let mut value = 0.0;
        for ((theta, factor), &p) in self.thetas.iter().zip(&self.factors).zip(&self.probs) {
            let h = DVector::from_vec(gradient_group(s, group_index, d, theta)?);
            let solved = factor.solve(&h);
            value += p * h.dot(&solved);
        }
        Ok(value - self.m as f64)
    }
}

/// Sensitivity function `τ_i(d)` of a design at one dose of group `i`.
///
/// Errors if the information matrix is singular at any prior atom.
pub fn tau(
    s: &ParameterStructure,
    xi: &CompositeDesign,
    prior: &DiscretePrior,
    group_index: usize,
    d: f64,
) -> Result<f64> {
    TauContext::new(s, xi, prior)?.tau(s, group_index, d)
}

/// Certificate outcome of [`check_equivalence`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Certified,
    Refuted,
}

/// Sampled sensitivity curves and the refined worst violation.
#[derive(Debug, Clone)]
pub struct EquivalenceReport {
    /// Per group, the sampled `(dose, τ_i(dose))` curve.
    pub curves: Vec<Vec<(f64, f64)>>,
    /// Largest τ value found after refinement (negative when certified
    /// strictly).
    pub max_violation: f64,
    /// Group attaining the maximum.
    pub worst_group: usize,
    /// Dose attaining the maximum.
    pub worst_dose: f64,
    /// `Certified` iff `max_violation ≤ tolerance`.
    pub verdict: Verdict,
    pub tolerance: f64,
}

fn golden_section_max(
    mut f: impl FnMut(f64) -> Result<f64>,
    mut a: f64,
    mut b: f64,
) -> Result<(f64, f64)> {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    for _ in 0..90 {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d)?;
        }
        if b - a < 1e-13 {
            break;
        }
    }
    Ok(if fc >= fd { (c, fc) } else { (d, fd) })
}

/// Equivalence-theorem check: samples each group's `τ_i` on a uniform grid
/// over `[0, d_max^{(i)}]`, refines every local maximum by golden-section
/// ascent within its bracketing cell, and compares the worst value against
/// `tolerance`.
pub fn check_equivalence(
    s: &ParameterStructure,
    xi: &CompositeDesign,
    prior: &DiscretePrior,
    grid_points_per_group: usize,
    tolerance: f64,
) -> Result<EquivalenceReport> {
    if grid_points_per_group < 2 {
        return Err(Error::invalid(
            "equivalence check",
            format!("grid needs ≥ 2 points, got {grid_points_per_group}"),
        ));
    }
    if !(tolerance.is_finite() && tolerance > 0.0) {
        return Err(Error::invalid(
            "equivalence check",
            format!("tolerance must be > 0, got {tolerance}"),
        ));
    }
    let ctx = TauContext::new(s, xi, prior)?;

    let mut curves = Vec::with_capacity(s.num_groups());
    let mut max_violation = f64::NEG_INFINITY;
    let mut worst_group = 0;
    let mut worst_dose = 0.0;

    for (i, space) in s.spaces().iter().enumerate() {
        let n = grid_points_per_group;
        let step = space.d_max() / (n - 1) as f64;
        let mut curve = Vec::with_capacity(n);
        for j in 0..n {
            let d = if j + 1 == n { space.d_max() } else { j as f64 * step };
            curve.push((d, ctx.tau(s, i, d)?));
        }

        for j in 0..n {
            let left_ok = j == 0 || curve[j].1 >= curve[j - 1].1;
            let right_ok = j + 1 == n || curve[j].1 >= curve[j + 1].1;
            if !(left_ok && right_ok) {
                continue;
            }
            let lo = curve[j.saturating_sub(1)].0;
            let hi = curve[(j + 1).min(n - 1)].0;
            let (d_ref, t_ref) = if lo < hi {
                golden_section_max(|d| ctx.tau(s, i, d), lo, hi)?
            } else {
                curve[j]
            };
            let (d_best, t_best) = if t_ref >= curve[j].1 {
                (d_ref, t_ref)
            } else {
                curve[j]
            };
            if t_best > max_violation {
                max_violation = t_best;
                worst_group = i;
                worst_dose = d_best;
            }
        }
        curves.push(curve);
    }

    let verdict = if max_violation <= tolerance {
        Verdict::Certified
    } else {
        Verdict::Refuted
    };
    Ok(EquivalenceReport {
        curves,
        max_violation,
        worst_group,
        worst_dose,
        verdict,
        tolerance,
    })
}

/// D-efficiency `(det M(ξ, θ) / det M(reference, θ))^{1/m}` of a design
/// against a locally D-optimal reference for the same `θ`.
///
/// A singular candidate has efficiency 0; a singular reference is an error.
pub fn d_efficiency(
    s: &ParameterStructure,
    xi: &CompositeDesign,
    theta: &FullParameterVector,
    reference: &CompositeDesign,
) -> Result<f64> {
    let ld_ref = info_matrix_composite(s, reference, theta)?
        .log_det()
        .ok_or_else(|| Error::Singular("reference design is singular".into()))?;
    match info_matrix_composite(s, xi, theta)?.log_det() {
        None => Ok(0.0),
        Some(ld) => Ok(((ld - ld_ref) / s.m() as f64).exp()),
    }
}
