//! Fixtures and numerical helpers shared by the integration suites.
//!
//! The worked example used throughout: two administration-frequency groups
//! sharing location and scale under an Emax model on `[0, 1]`, unit
//! variances, and independent five-atom uniform priors on the two shape
//! parameters. The `printed_*` designs carry the rounded digits of the
//! published solution for this problem; the tabulated efficiencies below
//! are the published 5 × 5 grids for both designs.

#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use dosedesign::models::eval_regression;
use dosedesign::{
    product_prior, AllocationMeasure, CompositeDesign, Design, DesignSpace, DiscretePrior,
    FullParameterVector, ModelKind, ParameterStructure, SharingMode,
};

pub const KINDS: [ModelKind; 3] = [
    ModelKind::Emax,
    ModelKind::Exponential,
    ModelKind::LinearInLog,
];

pub const SHARINGS: [SharingMode; 3] = [
    SharingMode::Individual,
    SharingMode::CommonLocation,
    SharingMode::CommonLocationScale,
];

pub fn rng(seed: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}

pub const THETA2_GROUP1: [f64; 5] = [0.20, 0.275, 0.35, 0.425, 0.50];
pub const THETA2_GROUP2: [f64; 5] = [0.60, 0.675, 0.75, 0.825, 0.90];

pub fn worked_structure() -> ParameterStructure {
    let space = DesignSpace::new(1.0).unwrap();
    ParameterStructure::common_location_scale(
        ModelKind::Emax,
        vec![space, space],
        vec![1.0, 1.0],
    )
    .unwrap()
}

pub fn worked_shape_priors() -> [DiscretePrior; 2] {
    [
        DiscretePrior::uniform_on(&THETA2_GROUP1).unwrap(),
        DiscretePrior::uniform_on(&THETA2_GROUP2).unwrap(),
    ]
}

pub fn worked_full_prior() -> DiscretePrior {
    let [p1, p2] = worked_shape_priors();
    product_prior(&[
        DiscretePrior::dirac(vec![0.0]),
        DiscretePrior::dirac(vec![1.0]),
        p1,
        p2,
    ])
    .unwrap()
}

/// The saturated reference design exactly as its digits were printed:
/// interior point 0.1984207, auxiliary point 0.742427, case A allocation.
pub fn printed_saturated_design() -> CompositeDesign {
    CompositeDesign::new(
        vec![
            Design::uniform(vec![0.0, 0.1984207, 1.0]).unwrap(),
            Design::singleton(0.742427).unwrap(),
        ],
        AllocationMeasure::new(vec![0.75, 0.25]).unwrap(),
    )
    .unwrap()
}

/// The unrestricted Bayesian optimum exactly as its digits were printed.
pub fn printed_bayes_design() -> CompositeDesign {
    CompositeDesign::new(
        vec![
            Design::new(vec![0.19982, 1.0], vec![0.50148, 0.49852]).unwrap(),
            Design::new(
                vec![0.0, 0.56386, 1.0],
                vec![0.48649, 0.26260, 0.25091],
            )
            .unwrap(),
        ],
        AllocationMeasure::new(vec![0.48691, 0.51309]).unwrap(),
    )
    .unwrap()
}

/// Tabulated efficiencies (percent) of the printed saturated design:
/// rows θ2⁽²⁾ over `THETA2_GROUP2`, columns θ2⁽¹⁾ over `THETA2_GROUP1`.
pub const TABULATED_EFF_SATURATED: [[f64; 5]; 5] = [
    [97.52, 99.20, 98.68, 96.94, 94.25],
    [97.96, 99.65, 99.50, 98.26, 96.23],
    [98.07, 99.76, 99.81, 98.91, 97.37],
    [97.94, 99.62, 99.77, 99.10, 97.90],
    [97.62, 99.30, 99.51, 98.97, 98.02],
];

/// Tabulated efficiencies (percent) of the printed Bayesian optimum, same
/// layout.
pub const TABULATED_EFF_BAYES: [[f64; 5]; 5] = [
    [97.31, 99.39, 99.41, 98.38, 96.59],
    [97.58, 99.59, 99.88, 99.22, 97.95],
    [97.58, 99.53, 99.94, 99.52, 98.60],
    [97.40, 99.30, 99.74, 99.46, 98.78],
    [97.07, 98.93, 99.38, 99.16, 98.63],
];

/// Central-difference gradient of group `i`'s mean curve with respect to
/// the full parameter vector, scaled by `1/σ_i` to match
/// [`dosedesign::models::gradient_group`].
pub fn fd_gradient(
    s: &ParameterStructure,
    group: usize,
    d: f64,
    theta: &FullParameterVector,
) -> Vec<f64> {
    let eval = |coords: Vec<f64>| -> f64 {
        let fv = FullParameterVector::new(s, coords).unwrap();
        let gp = s.group_params(&fv, group);
        eval_regression(s.kind(), d, &[gp.location, gp.scale, gp.shape]).unwrap()
    };
    let inv_sigma = 1.0 / s.sigma2()[group].sqrt();
    let base = theta.as_slice().to_vec();
    let mut grad = Vec::with_capacity(base.len());
    for c in 0..base.len() {
        let h = 1e-5 * base[c].abs().max(1.0);
        let mut plus = base.clone();
        plus[c] += h;
        let mut minus = base.clone();
        minus[c] -= h;
        grad.push((eval(plus) - eval(minus)) / (2.0 * h) * inv_sigma);
    }
    grad
}

/// A shape value that keeps the model well-conditioned in double
/// precision on `[0, d_max]`: the exponential mean grows like
/// `e^{d/θ2}`, so its θ2 stays within `[0.3, 1.5]·d_max`.
pub fn random_theta2(rng: &mut ChaCha8Rng, kind: ModelKind, d_max: f64) -> f64 {
    let (lo, hi) = match kind {
        ModelKind::Exponential => (0.3, 1.5),
        ModelKind::Emax | ModelKind::LinearInLog => (0.05, 1.5),
    };
    d_max * rng.random_range(lo..hi)
}

/// Random scalar prior with `n` distinct well-conditioned atoms.
pub fn random_shape_prior(
    rng: &mut ChaCha8Rng,
    kind: ModelKind,
    d_max: f64,
    n: usize,
) -> DiscretePrior {
    let mut atoms: Vec<f64> = (0..n).map(|_| random_theta2(rng, kind, d_max)).collect();
    atoms.sort_by(f64::total_cmp);
    atoms.dedup_by(|a, b| (*a - *b).abs() < 1e-6);
    let mut probs: Vec<f64> = atoms.iter().map(|_| rng.random_range(0.1..1.0)).collect();
    let total: f64 = probs.iter().sum();
    for p in &mut probs {
        *p /= total;
    }
    DiscretePrior::scalar(&atoms, &probs).unwrap()
}

/// Random structure plus a matching full parameter vector, spanning all
/// model kinds and sharing modes (2–3 groups for the shared modes).
pub fn random_instance(seed: u64) -> (ParameterStructure, FullParameterVector) {
    let mut r = rng(seed);
    let kind = KINDS[r.random_range(0..3)];
    let sharing = SHARINGS[r.random_range(0..3)];
    random_instance_of(&mut r, kind, sharing)
}

/// As [`random_instance`], with the kind and sharing mode pinned.
pub fn random_instance_of(
    r: &mut ChaCha8Rng,
    kind: ModelKind,
    sharing: SharingMode,
) -> (ParameterStructure, FullParameterVector) {
    let num_groups = if sharing == SharingMode::Individual {
        1
    } else {
        r.random_range(2..4usize)
    };
    let d_maxes: Vec<f64> = (0..num_groups).map(|_| r.random_range(0.5..5.0)).collect();
    let spaces: Vec<DesignSpace> = d_maxes
        .iter()
        .map(|&d| DesignSpace::new(d).unwrap())
        .collect();
    let sigma2: Vec<f64> = (0..num_groups).map(|_| r.random_range(0.3..4.0)).collect();
    let s = match sharing {
        SharingMode::Individual => {
            ParameterStructure::individual(kind, spaces[0], sigma2[0]).unwrap()
        }
        SharingMode::CommonLocation => {
            ParameterStructure::common_location(kind, spaces, sigma2).unwrap()
        }
        SharingMode::CommonLocationScale => {
            ParameterStructure::common_location_scale(kind, spaces, sigma2).unwrap()
        }
    };

    let signed_scale = |r: &mut ChaCha8Rng| -> f64 {
        let mag = r.random_range(0.5..3.0);
        if r.random::<bool>() {
            mag
        } else {
            -mag
        }
    };
    let mut coords = vec![r.random_range(-2.0..2.0)];
    match sharing {
        SharingMode::Individual => {
            coords.push(signed_scale(r));
            coords.push(random_theta2(r, kind, d_maxes[0]));
        }
        SharingMode::CommonLocation => {
            for &d in &d_maxes {
                coords.push(signed_scale(r));
                coords.push(random_theta2(r, kind, d));
            }
        }
        SharingMode::CommonLocationScale => {
            coords.push(signed_scale(r));
            for &d in &d_maxes {
                coords.push(random_theta2(r, kind, d));
            }
        }
    }
    let theta = FullParameterVector::new(&s, coords).unwrap();
    (s, theta)
}
