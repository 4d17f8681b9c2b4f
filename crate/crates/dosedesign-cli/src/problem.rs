//! Problem files: the TOML description of a design problem, and its
//! translation into a parameter structure plus priors.
//!
//! ```toml
//! model = "emax"                    # or "exponential", "linlog"
//! sharing = "common_location_scale" # or "individual", "common_location"
//!
//! [[groups]]
//! d_max = 1.0
//! sigma2 = 1.0
//! prior = { uniform_on = [0.2, 0.35, 0.5] }
//! ```
//!
//! Optional top-level `prior_location` / `prior_scale` distributions default
//! to point masses at 0 and 1; the optimal design does not depend on them.

use serde::Deserialize;

use dosedesign::{
    product_prior, DesignSpace, DiscretePrior, ModelKind, ParameterStructure, SharingMode,
};

use crate::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub model: String,
    pub sharing: String,
    #[serde(default)]
    pub prior_location: Option<PriorSpec>,
    #[serde(default)]
    pub prior_scale: Option<PriorSpec>,
    pub groups: Vec<GroupSpec>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpec {
    pub d_max: f64,
    pub sigma2: f64,
    pub prior: PriorSpec,
}

/// One discrete distribution, written as exactly one of three forms:
/// `{ dirac = x }`, `{ uniform_on = [...] }`, or
/// `{ atoms = [...], probs = [...] }`.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PriorSpec {
    #[serde(default)]
    dirac: Option<f64>,
    #[serde(default)]
    uniform_on: Option<Vec<f64>>,
    #[serde(default)]
    atoms: Option<Vec<f64>>,
    #[serde(default)]
    probs: Option<Vec<f64>>,
}

impl PriorSpec {
    pub fn build(&self, context: &str) -> Result<DiscretePrior, CliError> {
        let forms = [
            self.dirac.is_some(),
            self.uniform_on.is_some(),
            self.atoms.is_some() || self.probs.is_some(),
        ];
        if forms.iter().filter(|&&f| f).count() != 1 {
            return Err(CliError::Input(format!(
                "{context}: specify exactly one of `dirac`, `uniform_on`, or `atoms` + `probs`"
            )));
        }
        if let Some(x) = self.dirac {
            return Ok(DiscretePrior::dirac(vec![x]));
        }
        if let Some(values) = &self.uniform_on {
            return DiscretePrior::uniform_on(values)
                .map_err(|e| CliError::Input(format!("{context}: {e}")));
        }
        match (&self.atoms, &self.probs) {
            (Some(atoms), Some(probs)) => DiscretePrior::scalar(atoms, probs)
                .map_err(|e| CliError::Input(format!("{context}: {e}"))),
            (Some(_), None) => Err(CliError::Input(format!(
                "{context}: `atoms` given without `probs`"
            ))),
            _ => Err(CliError::Input(format!(
                "{context}: `probs` given without `atoms`"
            ))),
        }
    }
}

/// A fully assembled problem: the structure, the per-group shape priors,
/// the location/scale priors, and the joint prior over all `m` coordinates.
pub struct Problem {
    pub structure: ParameterStructure,
    pub shape_priors: Vec<DiscretePrior>,
    pub prior_location: DiscretePrior,
    pub prior_scale: DiscretePrior,
    pub full_prior: DiscretePrior,
}

pub fn parse_model(name: &str) -> Result<ModelKind, CliError> {
    match name {
        "emax" => Ok(ModelKind::Emax),
        "exponential" => Ok(ModelKind::Exponential),
        "linlog" => Ok(ModelKind::LinearInLog),
        other => Err(CliError::Input(format!(
            "unknown model {other:?}; expected \"emax\", \"exponential\", or \"linlog\""
        ))),
    }
}

fn parse_sharing(name: &str) -> Result<SharingMode, CliError> {
    match name {
        "individual" => Ok(SharingMode::Individual),
        "common_location" => Ok(SharingMode::CommonLocation),
        "common_location_scale" => Ok(SharingMode::CommonLocationScale),
        other => Err(CliError::Input(format!(
            "unknown sharing {other:?}; expected \"individual\", \"common_location\", \
             or \"common_location_scale\""
        ))),
    }
}

impl ProblemFile {
    pub fn load(path: &std::path::Path) -> Result<Problem, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
        let file: ProblemFile = toml::from_str(&text)
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        file.assemble()
    }

    pub fn assemble(&self) -> Result<Problem, CliError> {
        let kind = parse_model(&self.model)?;
        let sharing = parse_sharing(&self.sharing)?;
        if self.groups.is_empty() {
            return Err(CliError::Input("at least one [[groups]] entry is required".into()));
        }

        let mut spaces = Vec::with_capacity(self.groups.len());
        let mut sigma2 = Vec::with_capacity(self.groups.len());
        let mut shape_priors = Vec::with_capacity(self.groups.len());
        for (i, g) in self.groups.iter().enumerate() {
            let n = i + 1;
            spaces.push(
                DesignSpace::new(g.d_max)
                    .map_err(|e| CliError::Input(format!("group {n}: {e}")))?,
            );
            sigma2.push(g.sigma2);
            shape_priors.push(g.prior.build(&format!("group {n} prior"))?);
        }

        let structure = match sharing {
            SharingMode::Individual => {
                if self.groups.len() != 1 {
                    return Err(CliError::Input(format!(
                        "sharing = \"individual\" takes exactly one [[groups]] entry, got {}",
                        self.groups.len()
                    )));
                }
                ParameterStructure::individual(kind, spaces[0], sigma2[0])
            }
            SharingMode::CommonLocation => {
                ParameterStructure::common_location(kind, spaces, sigma2)
            }
            SharingMode::CommonLocationScale => {
                ParameterStructure::common_location_scale(kind, spaces, sigma2)
            }
        }
        .map_err(|e| CliError::Input(e.to_string()))?;

        let prior_location = match &self.prior_location {
            Some(spec) => spec.build("prior_location")?,
            None => DiscretePrior::dirac(vec![0.0]),
        };
        let prior_scale = match &self.prior_scale {
            Some(spec) => spec.build("prior_scale")?,
            None => DiscretePrior::dirac(vec![1.0]),
        };

        // Factor order follows the full parameter layout of the structure.
        let mut factors = vec![prior_location.clone()];
        match sharing {
            SharingMode::Individual => {
                factors.push(prior_scale.clone());
                factors.push(shape_priors[0].clone());
            }
            SharingMode::CommonLocation => {
                for prior in &shape_priors {
                    factors.push(prior_scale.clone());
                    factors.push(prior.clone());
                }
            }
            SharingMode::CommonLocationScale => {
                factors.push(prior_scale.clone());
                factors.extend(shape_priors.iter().cloned());
            }
        }
        let full_prior =
            product_prior(&factors).map_err(|e| CliError::Input(e.to_string()))?;

        Ok(Problem {
            structure,
            shape_priors,
            prior_location,
            prior_scale,
            full_prior,
        })
    }
}
