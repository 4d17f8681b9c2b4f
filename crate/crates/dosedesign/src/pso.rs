//! Particle-swarm search over composite designs.
//!
//! A particle encodes, per group, `K = max_points_per_group` candidate
//! doses and `K` weight scores, followed by one allocation score per
//! group (`2KM + M` coordinates in all). Scores pass through a softmax, so
//! every position decodes to a valid design; doses are clamped to
//! `[0, d_max]` and scores to `±30`. Decoding prunes weights below
//! `weight_floor`, merges doses closer than `1e-4·d_max`, and
//! renormalizes — support points the swarm stops using fall away instead
//! of lingering with vanishing mass.
//!
//! The search runs `restarts` independent swarms under constriction
//! dynamics
//!
//! ```text
//! v ← χ·(v + c1·r1·(pbest − x) + c2·r2·(gbest − x)),   x ← x + v
//! ```
//!
//! with one particle in the first restart seeded at the saturated-design
//! solution whenever the construction applies — later restarts start from
//! scratch so they are free to leave that basin — and the final answer
//! never falls below that solution's criterion value. All randomness comes
//! from a single ChaCha8 stream, so a given seed reproduces the run
//! exactly.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::criteria::bayes_logdet;
use crate::design::{
    AllocationMeasure, CompositeDesign, Design, DiscretePrior, ParameterStructure,
};
use crate::saturated::case_selection_for_prior;
use crate::{Error, Result};

/// Hard bound on weight and allocation scores; softmax is flat far beyond
/// this, so wider bounds only slow convergence.
const SCORE_BOUND: f64 = 30.0;

/// Doses closer than this fraction of `d_max` merge during decoding.
const MERGE_FACTOR: f64 = 1e-4;

/// Tuning knobs for [`optimize`]. There is deliberately no `Default`: the
/// seed must be chosen explicitly. `with_seed` supplies standard
/// constriction coefficients and search sizes.
#[derive(Debug, Clone)]
pub struct PsoConfig {
    pub swarm_size: usize,
    pub iterations: usize,
    pub restarts: usize,
    pub max_points_per_group: usize,
    pub chi: f64,
    pub c1: f64,
    pub c2: f64,
    pub weight_floor: f64,
    pub seed: u64,
}

impl PsoConfig {
    pub fn with_seed(seed: u64) -> Self {
        PsoConfig {
            swarm_size: 60,
            iterations: 500,
            restarts: 4,
            max_points_per_group: 6,
            chi: 0.7298,
            c1: 1.49618,
            c2: 1.49618,
            weight_floor: 0.01,
            seed,
        }
    }

    /// Search-space dimension for a given structure: `2KM + M`.
    pub fn dim(&self, s: &ParameterStructure) -> usize {
        let m_groups = s.num_groups();
        2 * self.max_points_per_group * m_groups + m_groups
    }

    fn validate(&self) -> Result<()> {
        if self.swarm_size < 2 {
            return Err(Error::invalid("pso config", "swarm_size must be ≥ 2"));
        }
        if self.iterations == 0 || self.restarts == 0 {
            return Err(Error::invalid(
                "pso config",
                "iterations and restarts must be ≥ 1",
            ));
        }
        if self.max_points_per_group == 0 {
            return Err(Error::invalid(
                "pso config",
                "max_points_per_group must be ≥ 1",
            ));
        }
        for (name, v) in [("chi", self.chi), ("c1", self.c1), ("c2", self.c2)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::invalid(
                    "pso config",
                    format!("{name} must be a positive real, got {v}"),
                ));
            }
        }
        if self.chi >= 1.0 {
            return Err(Error::invalid(
                "pso config",
                "chi must be < 1 for the dynamics to contract",
            ));
        }
        if !(self.weight_floor >= 0.0 && self.weight_floor < 0.5) {
            return Err(Error::invalid(
                "pso config",
                format!("weight_floor must lie in [0, 0.5), got {}", self.weight_floor),
            ));
        }
        Ok(())
    }
}

/// Result of a swarm run: the best design found, its criterion value, and
/// the best-so-far value after each iteration (`restarts × iterations`
/// entries, nondecreasing).
#[derive(Debug, Clone)]
pub struct PsoOutcome {
    pub design: CompositeDesign,
    pub phi: f64,
    pub trace: Vec<f64>,
}

fn softmax(scores: &[f64]) -> Vec<f64> {
    let max = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = scores.iter().map(|&x| (x - max).exp()).collect();
    let sum: f64 = exps.iter().sum();
    exps.into_iter().map(|e| e / sum).collect()
}

/// Maps a position vector to the composite design it represents. Total for
/// any in-bounds position; the only error is a dimension mismatch.
pub fn decode(
    position: &[f64],
    s: &ParameterStructure,
    cfg: &PsoConfig,
) -> Result<CompositeDesign> {
    let k = cfg.max_points_per_group;
    let m_groups = s.num_groups();
    if position.len() != cfg.dim(s) {
        return Err(Error::Dimension(format!(
            "position has length {}, expected {}",
            position.len(),
            cfg.dim(s)
        )));
    }

    let mut groups = Vec::with_capacity(m_groups);
    for i in 0..m_groups {
        let d_max = s.spaces()[i].d_max();
        let base = 2 * k * i;
        let doses = &position[base..base + k];
        let scores = &position[base + k..base + 2 * k];
        let clamped: Vec<f64> = scores
            .iter()
            .map(|&x| x.clamp(-SCORE_BOUND, SCORE_BOUND))
            .collect();
        let weights = softmax(&clamped);

        let mut pairs: Vec<(f64, f64)> = doses
            .iter()
            .map(|&d| d.clamp(0.0, d_max))
            .zip(weights)
            .collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));

        // Starved slots drop out before any merging, so a slot parked on
        // top of an active dose cannot leak weight into it.
        let live: Vec<(f64, f64)> = if pairs.iter().any(|&(_, w)| w >= cfg.weight_floor) {
            pairs
                .iter()
                .copied()
                .filter(|&(_, w)| w >= cfg.weight_floor)
                .collect()
        } else {
            // Everything fell below the floor (possible only for extreme
            // score spreads); keep the heaviest point.
            let best = pairs
                .iter()
                .copied()
                .max_by(|a, b| a.1.total_cmp(&b.1))
                .unwrap();
            vec![best]
        };

        // Merge onto the first dose of each run, accumulating weight.
        let tol = MERGE_FACTOR * d_max;
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(k);
        for (d, w) in live {
            match merged.last_mut() {
                Some((kept, acc)) if d - *kept <= tol => *acc += w,
                _ => merged.push((d, w)),
            }
        }

        let total: f64 = merged.iter().map(|&(_, w)| w).sum();
        let (points, weights): (Vec<f64>, Vec<f64>) =
            merged.into_iter().map(|(d, w)| (d, w / total)).unzip();
        groups.push(Design::new(points, weights)?);
    }

    let alloc_scores: Vec<f64> = position[2 * k * m_groups..]
        .iter()
        .map(|&x| x.clamp(-SCORE_BOUND, SCORE_BOUND))
        .collect();
    let allocation = AllocationMeasure::new(softmax(&alloc_scores))?;
    CompositeDesign::new(groups, allocation)
}

/// Pad score for unused slots when encoding a design: low enough that the
/// padded points decode below any sensible `weight_floor` and vanish, mild
/// enough that a swarm particle near the encoding can still wake the slot
/// up. `-SCORE_BOUND` here would make the encoded design an attractor that
/// permanently starves every spare support point.
const PAD_SCORE: f64 = -5.0;

/// Inverse of [`decode`] up to softmax gauge: `None` when some group uses
/// more than `max_points_per_group` support points. Public so callers can
/// seed a run with designs of their own.
pub fn encode(xi: &CompositeDesign, s: &ParameterStructure, cfg: &PsoConfig) -> Option<Vec<f64>> {
    let k = cfg.max_points_per_group;
    if xi.groups().iter().any(|g| g.len() > k) {
        return None;
    }
    let mut position = Vec::with_capacity(cfg.dim(s));
    for (i, group) in xi.groups().iter().enumerate() {
        let d_max = s.spaces()[i].d_max();
        position.extend(group.points());
        position.extend(std::iter::repeat(d_max).take(k - group.len()));
        position.extend(group.weights().iter().map(|&w| w.ln().max(-SCORE_BOUND)));
        position.extend(std::iter::repeat(PAD_SCORE).take(k - group.len()));
    }
    position.extend(
        xi.allocation()
            .lambdas()
            .iter()
            .map(|&l| l.ln().max(-SCORE_BOUND)),
    );
    Some(position)
}

struct SlotBounds {
    lo: f64,
    hi: f64,
    init_lo: f64,
    init_hi: f64,
}

fn slot_bounds(s: &ParameterStructure, cfg: &PsoConfig) -> Vec<SlotBounds> {
    let k = cfg.max_points_per_group;
    let mut bounds = Vec::with_capacity(cfg.dim(s));
    let score = || SlotBounds {
        lo: -SCORE_BOUND,
        hi: SCORE_BOUND,
        init_lo: -1.0,
        init_hi: 1.0,
    };
    for space in s.spaces() {
        let d_max = space.d_max();
        for _ in 0..k {
            bounds.push(SlotBounds {
                lo: 0.0,
                hi: d_max,
                init_lo: 0.0,
                init_hi: d_max,
            });
        }
        for _ in 0..k {
            bounds.push(score());
        }
    }
    for _ in 0..s.num_groups() {
        bounds.push(score());
    }
    bounds
}

/// Maximizes the prior-averaged log-determinant over composite designs.
///
/// Deterministic for a fixed `(s, prior, cfg)`; the returned value never
/// falls below the saturated construction's when that construction applies
/// to the structure.
pub fn optimize(
    s: &ParameterStructure,
    prior: &DiscretePrior,
    cfg: &PsoConfig,
) -> Result<PsoOutcome> {
    cfg.validate()?;
    let dim = cfg.dim(s);
    let bounds = slot_bounds(s, cfg);

    // Seed the search with the saturated solution where the closed-form
    // construction applies; it also floors the final answer.
    let saturated = case_selection_for_prior(s, prior).ok();
    let mut best_design = None;
    let mut best_phi = f64::NEG_INFINITY;
    if let Some(sol) = &saturated {
        let phi = bayes_logdet(s, &sol.design, prior)?;
        best_design = Some(sol.design.clone());
        best_phi = phi;
    }
    let injected = saturated
        .as_ref()
        .and_then(|sol| encode(&sol.design, s, cfg));

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let n = cfg.swarm_size;
    let mut trace = Vec::with_capacity(cfg.restarts * cfg.iterations);

    let fitness = |position: &[f64]| -> Result<f64> {
        let xi = decode(position, s, cfg)?;
        bayes_logdet(s, &xi, prior)
    };

    for restart in 0..cfg.restarts {
        let mut positions: Vec<Vec<f64>> = (0..n)
            .map(|_| {
                bounds
                    .iter()
                    .map(|b| b.init_lo + rng.random::<f64>() * (b.init_hi - b.init_lo))
                    .collect()
            })
            .collect();
        if restart == 0 {
            if let Some(seed_pos) = &injected {
                positions[0].copy_from_slice(seed_pos);
            }
        }
        let mut velocities = vec![vec![0.0; dim]; n];

        let mut pbest = positions.clone();
        let mut pbest_phi = Vec::with_capacity(n);
        for p in &positions {
            pbest_phi.push(fitness(p)?);
        }

        let mut gbest_idx = 0;
        for (i, &phi) in pbest_phi.iter().enumerate() {
            if phi > pbest_phi[gbest_idx] {
                gbest_idx = i;
            }
        }
        let mut gbest = pbest[gbest_idx].clone();
        let mut gbest_phi = pbest_phi[gbest_idx];
        if gbest_phi > best_phi {
            best_phi = gbest_phi;
            best_design = Some(decode(&gbest, s, cfg)?);
        }
        if restart == 0 && gbest_phi == f64::NEG_INFINITY {
            return Err(Error::SwarmInfeasible(format!(
                "every initial particle decodes to a singular design; \
                 max_points_per_group = {} may leave fewer than m = {} support points",
                cfg.max_points_per_group,
                s.m()
            )));
        }

        for _ in 0..cfg.iterations {
            for p in 0..n {
                for d in 0..dim {
                    let r1 = rng.random::<f64>();
                    let r2 = rng.random::<f64>();
                    let v = cfg.chi
                        * (velocities[p][d]
                            + cfg.c1 * r1 * (pbest[p][d] - positions[p][d])
                            + cfg.c2 * r2 * (gbest[d] - positions[p][d]));
                    velocities[p][d] = v;
                    positions[p][d] = (positions[p][d] + v).clamp(bounds[d].lo, bounds[d].hi);
                }
            }
            for p in 0..n {
                let phi = fitness(&positions[p])?;
                if phi > pbest_phi[p] {
                    pbest_phi[p] = phi;
                    pbest[p].copy_from_slice(&positions[p]);
                    if phi > gbest_phi {
                        gbest_phi = phi;
                        gbest.copy_from_slice(&positions[p]);
                    }
                }
            }
            if gbest_phi > best_phi {
                best_phi = gbest_phi;
                best_design = Some(decode(&gbest, s, cfg)?);
            }
            trace.push(best_phi);
        }
    }

    Ok(PsoOutcome {
        design: best_design.expect("feasibility established after first restart"),
        phi: best_phi,
        trace,
    })
}
