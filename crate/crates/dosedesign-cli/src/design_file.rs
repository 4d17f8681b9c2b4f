//! Design files: full-precision TOML serialization of a composite design,
//! optionally annotated with how it was obtained.

use serde::{Deserialize, Serialize};

use dosedesign::{AllocationMeasure, CompositeDesign, Design};

use crate::CliError;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DesignFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub case: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub interior_points: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residuals: Option<Vec<f64>>,
    pub group_designs: Vec<GroupDesignFile>,
    pub allocation: AllocationFile,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupDesignFile {
    pub points: Vec<f64>,
    pub weights: Vec<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AllocationFile {
    pub lambdas: Vec<f64>,
}

impl DesignFile {
    pub fn from_design(xi: &CompositeDesign) -> Self {
        DesignFile {
            phi: None,
            mode: None,
            case: None,
            interior_points: None,
            residuals: None,
            group_designs: xi
                .groups()
                .iter()
                .map(|g| GroupDesignFile {
                    points: g.points().to_vec(),
                    weights: g.weights().to_vec(),
                })
                .collect(),
            allocation: AllocationFile {
                lambdas: xi.allocation().lambdas().to_vec(),
            },
        }
    }

    pub fn to_design(&self) -> Result<CompositeDesign, CliError> {
        let mut groups = Vec::with_capacity(self.group_designs.len());
        for (i, g) in self.group_designs.iter().enumerate() {
            groups.push(
                Design::new(g.points.clone(), g.weights.clone()).map_err(|e| {
                    CliError::Input(format!("group_designs entry {}: {e}", i + 1))
                })?,
            );
        }
        let allocation = AllocationMeasure::new(self.allocation.lambdas.clone())
            .map_err(|e| CliError::Input(format!("allocation: {e}")))?;
        CompositeDesign::new(groups, allocation).map_err(|e| CliError::Input(e.to_string()))
    }

    pub fn load(path: &std::path::Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
    }

    pub fn save(&self, path: &std::path::Path) -> Result<(), CliError> {
        let text = toml::to_string_pretty(self)
            .map_err(|e| CliError::Input(format!("cannot serialize design: {e}")))?;
        std::fs::write(path, text)
            .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))
    }
}
