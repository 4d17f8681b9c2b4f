//! Domain types shared by every solver: design spaces, designs, allocation
//! measures, discrete priors, and parameter-sharing structures.
//!
//! A design `ξ̃ = {d_1, …, d_k; w_1, …, w_k}` is a finitely supported
//! probability measure on a dose interval `[0, d_max]`. For `M` groups the
//! composite design `ξ = (ξ_1, …, ξ_M, μ)` carries one design per group plus
//! an allocation measure `μ = (λ_1, …, λ_M)`.
//!
//! Full parameter vectors follow a fixed ordering: the common block
//! `θ_1` first, then the group blocks `θ_2^{(1)}, …, θ_2^{(M)}`. The three
//! sharing modes instantiate this as
//!
//! ```text
//! individual:            (θ0, θ1, θ2)                         m = 3
//! common location:       (θ0, θ1^{(1)}, θ2^{(1)}, …)          m = 1 + 2M
//! common location+scale: (θ0, θ1, θ2^{(1)}, …, θ2^{(M)})      m = 2 + M
//! ```
//!
//! where θ0 is the placebo effect (location), θ1 the maximal-effect scale,
//! and θ2 the strictly positive model-specific shape (the ED50 for Emax).

use crate::models::ModelKind;
use crate::{Error, Result};

/// Doses closer than this are merged during design normalization, to avoid
/// rank-deficiency from numerically duplicate support points.
pub const DOSE_MERGE_TOL: f64 = 1e-10;

/// Tolerance on probability sums (design weights, allocations, priors).
pub const PROB_SUM_TOL: f64 = 1e-12;

/// The closed dose interval `[0, d_max]` available to one group.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DesignSpace {
    d_max: f64,
}

impl DesignSpace {
    pub fn new(d_max: f64) -> Result<Self> {
        if !(d_max.is_finite() && d_max > 0.0) {
            return Err(Error::invalid(
                "design space",
                format!("d_max must be a positive real, got {d_max}"),
            ));
        }
        Ok(DesignSpace { d_max })
    }

    pub fn d_max(&self) -> f64 {
        self.d_max
    }

    pub fn contains(&self, d: f64) -> bool {
        d.is_finite() && (0.0..=self.d_max).contains(&d)
    }
}

/// An approximate design: strictly increasing support points with positive
/// weights summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct Design {
    points: Vec<f64>,
    weights: Vec<f64>,
}

impl Design {
    /// Builds a design from dose/weight pairs.
    ///
    /// Pairs are sorted by dose and doses equal within [`DOSE_MERGE_TOL`] are
    /// merged with their weights summed; the first dose of a merged run is
    /// kept. After normalization the weights must be in `(0, 1]` and sum to
    /// one within [`PROB_SUM_TOL`].
    pub fn new(points: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::invalid("design", "no support points"));
        }
        if points.len() != weights.len() {
            return Err(Error::invalid(
                "design",
                format!("{} points but {} weights", points.len(), weights.len()),
            ));
        }
        for (j, (&d, &w)) in points.iter().zip(&weights).enumerate() {
            if !d.is_finite() || d < 0.0 {
                return Err(Error::invalid(
                    "design",
                    format!("point {j} is {d}, expected a finite dose ≥ 0"),
                ));
            }
            if !w.is_finite() || w <= 0.0 || w > 1.0 {
                return Err(Error::invalid(
                    "design",
                    format!("weight {j} is {w}, expected in (0, 1]"),
                ));
            }
        }

        let mut pairs: Vec<(f64, f64)> = points.into_iter().zip(weights).collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));

        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(pairs.len());
        for (d, w) in pairs {
            match merged.last_mut() {
                Some(last) if d - last.0 <= DOSE_MERGE_TOL => last.1 += w,
                _ => merged.push((d, w)),
            }
        }

        let sum: f64 = merged.iter().map(|p| p.1).sum();
        if (sum - 1.0).abs() > PROB_SUM_TOL {
            return Err(Error::invalid(
                "design",
                format!("weights sum to {sum}, expected 1 within {PROB_SUM_TOL}"),
            ));
        }

        let (points, weights) = merged.into_iter().unzip();
        Ok(Design { points, weights })
    }

    /// Equal weights `1/k` on the given points.
    pub fn uniform(points: Vec<f64>) -> Result<Self> {
        let w = 1.0 / points.len() as f64;
        let weights = vec![w; points.len()];
        Design::new(points, weights)
    }

    /// A single dose with weight one.
    pub fn singleton(point: f64) -> Result<Self> {
        Design::new(vec![point], vec![1.0])
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.points.iter().copied().zip(self.weights.iter().copied())
    }
}

/// The proportion of the total sample size assigned to each group.
#[derive(Debug, Clone, PartialEq)]
pub struct AllocationMeasure {
    lambdas: Vec<f64>,
}

impl AllocationMeasure {
    pub fn new(lambdas: Vec<f64>) -> Result<Self> {
        if lambdas.is_empty() {
            return Err(Error::invalid("allocation", "no groups"));
        }
        for (i, &l) in lambdas.iter().enumerate() {
            if !l.is_finite() || !(0.0..=1.0).contains(&l) {
                return Err(Error::invalid(
                    "allocation",
                    format!("λ_{i} is {l}, expected in [0, 1]"),
                ));
            }
        }
        let sum: f64 = lambdas.iter().sum();
        if (sum - 1.0).abs() > PROB_SUM_TOL {
            return Err(Error::invalid(
                "allocation",
                format!("allocations sum to {sum}, expected 1 within {PROB_SUM_TOL}"),
            ));
        }
        Ok(AllocationMeasure { lambdas })
    }

    pub fn uniform(m: usize) -> Result<Self> {
        AllocationMeasure::new(vec![1.0 / m as f64; m])
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }
}

/// One design per group together with the allocation between groups.
#[derive(Debug, Clone, PartialEq)]
pub struct CompositeDesign {
    groups: Vec<Design>,
    allocation: AllocationMeasure,
}

impl CompositeDesign {
    pub fn new(groups: Vec<Design>, allocation: AllocationMeasure) -> Result<Self> {
        if groups.is_empty() {
            return Err(Error::invalid("composite design", "no groups"));
        }
        if groups.len() != allocation.lambdas().len() {
            return Err(Error::invalid(
                "composite design",
                format!(
                    "{} groups but {} allocation entries",
                    groups.len(),
                    allocation.lambdas().len()
                ),
            ));
        }
        Ok(CompositeDesign { groups, allocation })
    }

    /// Wraps a single-group design with allocation `(1)`.
    pub fn single(design: Design) -> Self {
        CompositeDesign {
            groups: vec![design],
            allocation: AllocationMeasure {
                lambdas: vec![1.0],
            },
        }
    }

    pub fn groups(&self) -> &[Design] {
        &self.groups
    }

    pub fn allocation(&self) -> &AllocationMeasure {
        &self.allocation
    }

    pub fn num_groups(&self) -> usize {
        self.groups.len()
    }

    /// Total number of support points across all groups.
    pub fn total_support(&self) -> usize {
        self.groups.iter().map(Design::len).sum()
    }
}

/// A finitely supported prior: parameter vectors with positive probabilities
/// summing to one. A Dirac prior is the single-atom case.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscretePrior {
    atoms: Vec<Vec<f64>>,
    probs: Vec<f64>,
}

impl DiscretePrior {
    pub fn new(atoms: Vec<Vec<f64>>, probs: Vec<f64>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::invalid("prior", "no atoms"));
        }
        if atoms.len() != probs.len() {
            return Err(Error::invalid(
                "prior",
                format!("{} atoms but {} probabilities", atoms.len(), probs.len()),
            ));
        }
        let dim = atoms[0].len();
        if dim == 0 {
            return Err(Error::invalid("prior", "zero-dimensional atoms"));
        }
        for (t, atom) in atoms.iter().enumerate() {
            if atom.len() != dim {
                return Err(Error::invalid(
                    "prior",
                    format!("atom {t} has dimension {}, expected {dim}", atom.len()),
                ));
            }
            if atom.iter().any(|x| !x.is_finite()) {
                return Err(Error::invalid("prior", format!("atom {t} is not finite")));
            }
        }
        for (t, &p) in probs.iter().enumerate() {
            if !p.is_finite() || p <= 0.0 {
                return Err(Error::invalid(
                    "prior",
                    format!("probability {t} is {p}, expected > 0"),
                ));
            }
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > PROB_SUM_TOL {
            return Err(Error::invalid(
                "prior",
                format!("probabilities sum to {sum}, expected 1 within {PROB_SUM_TOL}"),
            ));
        }
        Ok(DiscretePrior { atoms, probs })
    }

    /// Point mass at a single parameter vector.
    pub fn dirac(atom: Vec<f64>) -> Self {
        DiscretePrior {
            atoms: vec![atom],
            probs: vec![1.0],
        }
    }

    /// Uniform distribution on scalar values (one-dimensional atoms).
    pub fn uniform_on(values: &[f64]) -> Result<Self> {
        let p = 1.0 / values.len() as f64;
        DiscretePrior::new(
            values.iter().map(|&v| vec![v]).collect(),
            vec![p; values.len()],
        )
    }

    /// Scalar-valued prior with explicit probabilities.
    pub fn scalar(values: &[f64], probs: &[f64]) -> Result<Self> {
        DiscretePrior::new(values.iter().map(|&v| vec![v]).collect(), probs.to_vec())
    }

    pub fn atoms(&self) -> &[Vec<f64>] {
        &self.atoms
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Dimension of every atom.
    pub fn dim(&self) -> usize {
        self.atoms[0].len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[f64], f64)> + '_ {
        self.atoms
            .iter()
            .map(Vec::as_slice)
            .zip(self.probs.iter().copied())
    }

    /// Projects the prior onto one coordinate, merging values equal within
    /// `1e-12` and summing their probabilities.
    pub fn marginal(&self, coord: usize) -> Result<DiscretePrior> {
        if coord >= self.dim() {
            return Err(Error::Dimension(format!(
                "marginal coordinate {coord} out of range for dimension {}",
                self.dim()
            )));
        }
        let mut pairs: Vec<(f64, f64)> = self
            .atoms
            .iter()
            .zip(&self.probs)
            .map(|(a, &p)| (a[coord], p))
            .collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut merged: Vec<(f64, f64)> = Vec::new();
        for (v, p) in pairs {
            match merged.last_mut() {
                Some(last) if v - last.0 <= 1e-12 => last.1 += p,
                _ => merged.push((v, p)),
            }
        }
        let (values, probs): (Vec<f64>, Vec<f64>) = merged.into_iter().unzip();
        DiscretePrior::new(values.into_iter().map(|v| vec![v]).collect(), probs)
    }
}

/// Cartesian product of independent marginals: atoms are concatenations,
/// probabilities multiply. The first marginal varies slowest.
pub fn product_prior(marginals: &[DiscretePrior]) -> Result<DiscretePrior> {
    if marginals.is_empty() {
        return Err(Error::invalid("prior", "empty marginal list"));
    }
    let mut atoms: Vec<Vec<f64>> = vec![Vec::new()];
    let mut probs: Vec<f64> = vec![1.0];
    for marginal in marginals {
        let mut next_atoms = Vec::with_capacity(atoms.len() * marginal.len());
        let mut next_probs = Vec::with_capacity(atoms.len() * marginal.len());
        for (atom, p) in atoms.iter().zip(&probs) {
            for (factor, q) in marginal.iter() {
                let mut combined = atom.clone();
                combined.extend_from_slice(factor);
                next_atoms.push(combined);
                next_probs.push(p * q);
            }
        }
        atoms = next_atoms;
        probs = next_probs;
    }
    // Renormalization is deliberately omitted: products of valid marginals
    // stay within the 1e-12 sum tolerance checked by the constructor.
    DiscretePrior::new(atoms, probs)
}

/// How parameters are shared across administration-frequency groups.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SharingMode {
    /// One group, all three parameters its own (`m = 3`).
    Individual,
    /// Groups share the placebo effect θ0 only (`p = 1`, `q = 2`).
    CommonLocation,
    /// Groups share placebo effect and scale (θ0, θ1) (`p = 2`, `q = 1`).
    CommonLocationScale,
}

/// Model kind, sharing mode, group count, and per-group dose spaces and
/// noise variances; fixes the dimension `m = p + qM` of the full parameter
/// vector and of every information matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ParameterStructure {
    kind: ModelKind,
    sharing: SharingMode,
    spaces: Vec<DesignSpace>,
    sigma2: Vec<f64>,
}

impl ParameterStructure {
    /// Single-group structure: `m = 3`.
    pub fn individual(kind: ModelKind, space: DesignSpace, sigma2: f64) -> Result<Self> {
        Self::build(kind, SharingMode::Individual, vec![space], vec![sigma2])
    }

    /// `M ≥ 2` groups sharing the location parameter θ0.
    pub fn common_location(
        kind: ModelKind,
        spaces: Vec<DesignSpace>,
        sigma2: Vec<f64>,
    ) -> Result<Self> {
        Self::build(kind, SharingMode::CommonLocation, spaces, sigma2)
    }

    /// `M ≥ 2` groups sharing location and scale (θ0, θ1).
    pub fn common_location_scale(
        kind: ModelKind,
        spaces: Vec<DesignSpace>,
        sigma2: Vec<f64>,
    ) -> Result<Self> {
        Self::build(kind, SharingMode::CommonLocationScale, spaces, sigma2)
    }

    fn build(
        kind: ModelKind,
        sharing: SharingMode,
        spaces: Vec<DesignSpace>,
        sigma2: Vec<f64>,
    ) -> Result<Self> {
        if spaces.is_empty() {
            return Err(Error::invalid("structure", "no groups"));
        }
        if spaces.len() != sigma2.len() {
            return Err(Error::invalid(
                "structure",
                format!("{} spaces but {} variances", spaces.len(), sigma2.len()),
            ));
        }
        match sharing {
            SharingMode::Individual if spaces.len() != 1 => {
                return Err(Error::invalid(
                    "structure",
                    "individual sharing requires exactly one group",
                ));
            }
            SharingMode::CommonLocation | SharingMode::CommonLocationScale
                if spaces.len() < 2 =>
            {
                return Err(Error::invalid(
                    "structure",
                    "shared-parameter structures require at least two groups",
                ));
            }
            _ => {}
        }
        for (i, &s2) in sigma2.iter().enumerate() {
            if !s2.is_finite() || s2 <= 0.0 {
                return Err(Error::invalid(
                    "structure",
                    format!("σ²_{i} is {s2}, expected > 0"),
                ));
            }
        }
        Ok(ParameterStructure {
            kind,
            sharing,
            spaces,
            sigma2,
        })
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn sharing(&self) -> SharingMode {
        self.sharing
    }

    pub fn num_groups(&self) -> usize {
        self.spaces.len()
    }

    pub fn spaces(&self) -> &[DesignSpace] {
        &self.spaces
    }

    pub fn sigma2(&self) -> &[f64] {
        &self.sigma2
    }

    /// Number of common parameters.
    pub fn p(&self) -> usize {
        match self.sharing {
            SharingMode::Individual => 3,
            SharingMode::CommonLocation => 1,
            SharingMode::CommonLocationScale => 2,
        }
    }

    /// Number of group-specific parameters.
    pub fn q(&self) -> usize {
        match self.sharing {
            SharingMode::Individual => 0,
            SharingMode::CommonLocation => 2,
            SharingMode::CommonLocationScale => 1,
        }
    }

    /// Total parameter count `m = p + qM`.
    pub fn m(&self) -> usize {
        self.p() + self.q() * self.num_groups()
    }

    /// Index range of group `i`'s block in a full parameter vector.
    pub(crate) fn group_block(&self, i: usize) -> std::ops::Range<usize> {
        let q = self.q();
        let start = self.p() + q * i;
        start..start + q
    }

    /// Index of group `i`'s shape parameter θ2 in a full parameter vector.
    pub fn shape_index(&self, i: usize) -> usize {
        match self.sharing {
            SharingMode::Individual => 2,
            SharingMode::CommonLocation => 2 + 2 * i,
            SharingMode::CommonLocationScale => 2 + i,
        }
    }

    /// The effective `(θ0, θ1, θ2)` triple seen by group `i`.
    pub fn group_params(&self, theta: &FullParameterVector, i: usize) -> GroupParams {
        let t = theta.as_slice();
        match self.sharing {
            SharingMode::Individual => GroupParams {
                location: t[0],
                scale: t[1],
                shape: t[2],
            },
            SharingMode::CommonLocation => GroupParams {
                location: t[0],
                scale: t[1 + 2 * i],
                shape: t[2 + 2 * i],
            },
            SharingMode::CommonLocationScale => GroupParams {
                location: t[0],
                scale: t[1],
                shape: t[2 + i],
            },
        }
    }
}

/// The location/scale/shape triple governing one group's mean curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupParams {
    pub location: f64,
    pub scale: f64,
    pub shape: f64,
}

/// A point in the full parameter space: common block first, then the group
/// blocks, with every shape parameter strictly positive.
#[derive(Debug, Clone, PartialEq)]
pub struct FullParameterVector {
    theta: Vec<f64>,
}

impl FullParameterVector {
    pub fn new(s: &ParameterStructure, theta: Vec<f64>) -> Result<Self> {
        if theta.len() != s.m() {
            return Err(Error::Dimension(format!(
                "parameter vector has length {}, structure needs m = {}",
                theta.len(),
                s.m()
            )));
        }
        if theta.iter().any(|x| !x.is_finite()) {
            return Err(Error::Parameter("non-finite parameter".into()));
        }
        for i in 0..s.num_groups() {
            let shape = theta[s.shape_index(i)];
            if shape <= 0.0 {
                return Err(Error::Parameter(format!(
                    "shape parameter of group {i} is {shape}, expected > 0"
                )));
            }
        }
        Ok(FullParameterVector { theta })
    }

    /// Wraps a prior atom, validating against the structure.
    pub fn from_atom(s: &ParameterStructure, atom: &[f64]) -> Result<Self> {
        FullParameterVector::new(s, atom.to_vec())
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.theta
    }

    pub fn len(&self) -> usize {
        self.theta.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// Outcome of [`validate_design`]: an empty findings list means valid.
#[derive(Debug, Clone, Default)]
pub struct ValidationReport {
    pub findings: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.findings.is_empty()
    }
}

/// Checks a composite design against a structure: group count, dose bounds,
/// weight and allocation sums. With `require_saturated` the total support
/// must equal `m` (the saturated class).
pub fn validate_design(
    design: &CompositeDesign,
    s: &ParameterStructure,
    require_saturated: bool,
) -> ValidationReport {
    let mut findings = Vec::new();
    if design.num_groups() != s.num_groups() {
        findings.push(format!(
            "design has {} groups, structure has {}",
            design.num_groups(),
            s.num_groups()
        ));
        return ValidationReport { findings };
    }
    for (i, (group, space)) in design.groups().iter().zip(s.spaces()).enumerate() {
        for (j, (d, _)) in group.iter().enumerate() {
            if !space.contains(d) {
                findings.push(format!(
                    "group {i} point {j}: dose {d} outside [0, {}]",
                    space.d_max()
                ));
            }
        }
        for (j, w) in group.points().windows(2).enumerate() {
            if w[1] <= w[0] {
                findings.push(format!(
                    "group {i}: points {j} and {} not strictly increasing",
                    j + 1
                ));
            }
        }
        let sum: f64 = group.weights().iter().sum();
        if (sum - 1.0).abs() > PROB_SUM_TOL {
            findings.push(format!("group {i}: weights sum to {sum}"));
        }
    }
    let lambda_sum: f64 = design.allocation().lambdas().iter().sum();
    if (lambda_sum - 1.0).abs() > PROB_SUM_TOL {
        findings.push(format!("allocations sum to {lambda_sum}"));
    }
    if require_saturated && design.total_support() != s.m() {
        findings.push(format!(
            "total support {} differs from m = {} (not saturated)",
            design.total_support(),
            s.m()
        ));
    }
    ValidationReport { findings }
}
