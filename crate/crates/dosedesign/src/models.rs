//! Mean curves and parameter gradients for the three dose-response families.
//!
//! Every family is written as `f(d) = θ0 + θ1·g(d, θ2)` with a base curve
//! `g` vanishing at `d = 0`:
//!
//! ```text
//! Emax:          g(d, θ2) = d / (θ2 + d)
//! exponential:   g(d, θ2) = exp(d/θ2) − 1
//! linear-in-log: g(d, θ2) = log(d/θ2 + 1)
//! ```
//!
//! Gradients are the true partial derivatives `∂f/∂θ` scaled by `1/σ`, laid
//! out common block first, then group blocks, with exact zeros outside the
//! evaluated group's block. Because `g(0, θ2) = ∂g/∂θ2(0, θ2) = 0`, every
//! non-location coordinate of a gradient vanishes at `d = 0`.

use crate::design::{FullParameterVector, ParameterStructure, SharingMode};
use crate::{Error, Result};

/// The three supported model families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelKind {
    Emax,
    Exponential,
    LinearInLog,
}

impl std::fmt::Display for ModelKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ModelKind::Emax => "emax",
            ModelKind::Exponential => "exponential",
            ModelKind::LinearInLog => "linlog",
        })
    }
}

impl ModelKind {
    pub const ALL: [ModelKind; 3] = [
        ModelKind::Emax,
        ModelKind::Exponential,
        ModelKind::LinearInLog,
    ];
}

fn check_dose_shape(kind: ModelKind, d: f64, theta2: f64) -> Result<()> {
    if !(theta2.is_finite() && theta2 > 0.0) {
        return Err(Error::Parameter(format!(
            "θ2 must be > 0 for the {kind} model, got {theta2}"
        )));
    }
    if !(d.is_finite() && d >= 0.0) {
        return Err(Error::Parameter(format!("dose must be ≥ 0, got {d}")));
    }
    Ok(())
}

/// Base curve `g(d, θ2)`; `expm1`/`ln_1p` keep small `d/θ2` accurate.
pub(crate) fn base_curve(kind: ModelKind, d: f64, theta2: f64) -> f64 {
    let x = d / theta2;
    match kind {
        ModelKind::Emax => d / (theta2 + d),
        ModelKind::Exponential => x.exp_m1(),
        ModelKind::LinearInLog => x.ln_1p(),
    }
}

/// Shape partial `∂g/∂θ2(d, θ2)`.
pub(crate) fn base_curve_shape_partial(kind: ModelKind, d: f64, theta2: f64) -> f64 {
    match kind {
        ModelKind::Emax => -d / ((theta2 + d) * (theta2 + d)),
        ModelKind::Exponential => -(d / (theta2 * theta2)) * (d / theta2).exp(),
        ModelKind::LinearInLog => -d / (theta2 * (d + theta2)),
    }
}

/// Evaluates `f(d) = θ0 + θ1·g(d, θ2)` for `theta = (θ0, θ1, θ2)`.
pub fn eval_regression(kind: ModelKind, d: f64, theta: &[f64; 3]) -> Result<f64> {
    let [theta0, theta1, theta2] = *theta;
    check_dose_shape(kind, d, theta2)?;
    let value = theta0 + theta1 * base_curve(kind, d, theta2);
    if !value.is_finite() {
        return Err(Error::Overflow {
            kind,
            dose: d,
            theta2,
        });
    }
    Ok(value)
}

/// Gradient `(1/σ)·(∂f/∂θ0, ∂f/∂θ1, ∂f/∂θ2)` of the single-group model.
pub fn gradient_individual(
    kind: ModelKind,
    d: f64,
    theta: &[f64; 3],
    sigma2: f64,
) -> Result<[f64; 3]> {
    let [_, theta1, theta2] = *theta;
    check_dose_shape(kind, d, theta2)?;
    if !(sigma2.is_finite() && sigma2 > 0.0) {
        return Err(Error::Parameter(format!("σ² must be > 0, got {sigma2}")));
    }
    let inv_sigma = 1.0 / sigma2.sqrt();
    let g = base_curve(kind, d, theta2);
    let dg = base_curve_shape_partial(kind, d, theta2);
    let grad = [inv_sigma, g * inv_sigma, theta1 * dg * inv_sigma];
    if grad.iter().any(|x| !x.is_finite()) {
        return Err(Error::Overflow {
            kind,
            dose: d,
            theta2,
        });
    }
    Ok(grad)
}

/// Gradient of group `i`'s mean curve with respect to the full parameter
/// vector, scaled by `1/σ_i`: length `m`, common-parameter partials in the
/// leading `p` slots, group-`i` partials in its block, exact zeros elsewhere.
pub fn gradient_group(
    s: &ParameterStructure,
    group_index: usize,
    d: f64,
    theta: &FullParameterVector,
) -> Result<Vec<f64>> {
    let m = s.m();
    if group_index >= s.num_groups() {
        return Err(Error::Dimension(format!(
            "group index {group_index} out of range for {} groups",
            s.num_groups()
        )));
    }
    if theta.len() != m {
        return Err(Error::Dimension(format!(
            "parameter vector has length {}, structure needs m = {m}",
            theta.len()
        )));
    }
    let gp = s.group_params(theta, group_index);
    check_dose_shape(s.kind(), d, gp.shape)?;
    let inv_sigma = 1.0 / s.sigma2()[group_index].sqrt();
    let g = base_curve(s.kind(), d, gp.shape);
    let dg = base_curve_shape_partial(s.kind(), d, gp.shape);

    let mut grad = vec![0.0; m];
    match s.sharing() {
        SharingMode::Individual => {
            grad[0] = inv_sigma;
            grad[1] = g * inv_sigma;
            grad[2] = gp.scale * dg * inv_sigma;
        }
        SharingMode::CommonLocation => {
            grad[0] = inv_sigma;
            let block = s.group_block(group_index);
            grad[block.start] = g * inv_sigma;
            grad[block.start + 1] = gp.scale * dg * inv_sigma;
        }
        SharingMode::CommonLocationScale => {
            grad[0] = inv_sigma;
            grad[1] = g * inv_sigma;
            let block = s.group_block(group_index);
            grad[block.start] = gp.scale * dg * inv_sigma;
        }
    }
    if grad.iter().any(|x| !x.is_finite()) {
        return Err(Error::Overflow {
            kind: s.kind(),
            dose: d,
            theta2: gp.shape,
        });
    }
    Ok(grad)
}
