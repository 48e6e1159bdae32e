//! The model document: a single JSON file carrying the state space, one row
//! descriptor per state, and a set of named gambles. Documents round-trip
//! losslessly through serialization.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use imc_core::{Gamble, RowCredalSet, StateSpace, UpperTransitionOperator};

use crate::CliError;

/// Current schema version; bumped on incompatible format changes.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ModelDocument {
    pub version: u32,
    pub states: Vec<String>,
    pub rows: BTreeMap<String, RowSpec>,
    #[serde(default)]
    pub gambles: BTreeMap<String, Vec<f64>>,
}

/// Serialized form of one credal row; numeric payloads are indexed by the
/// declared state ordering.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum RowSpec {
    Precise { p: Vec<f64> },
    Vertices { vertices: Vec<Vec<f64>> },
    Intervals { lower: Vec<f64>, upper: Vec<f64> },
    Vacuous,
}

impl RowSpec {
    fn to_row(&self) -> RowCredalSet {
        match self {
            RowSpec::Precise { p } => RowCredalSet::Precise(p.clone()),
            RowSpec::Vertices { vertices } => RowCredalSet::Vertices(vertices.clone()),
            RowSpec::Intervals { lower, upper } => {
                RowCredalSet::Intervals { lower: lower.clone(), upper: upper.clone() }
            }
            RowSpec::Vacuous => RowCredalSet::Vacuous,
        }
    }

    pub fn from_row(row: &RowCredalSet) -> Self {
        match row {
            RowCredalSet::Precise(p) => RowSpec::Precise { p: p.clone() },
            RowCredalSet::Vertices(vs) => RowSpec::Vertices { vertices: vs.clone() },
            RowCredalSet::Intervals { lower, upper } => {
                RowSpec::Intervals { lower: lower.clone(), upper: upper.clone() }
            }
            RowCredalSet::Vacuous => RowSpec::Vacuous,
        }
    }
}

/// A parsed and validated model: the operator plus its named gambles.
#[derive(Debug)]
pub struct LoadedModel {
    pub document: ModelDocument,
    pub operator: UpperTransitionOperator,
    pub gambles: BTreeMap<String, Gamble>,
}

impl LoadedModel {
    pub fn gamble(&self, name: &str) -> Result<&Gamble, CliError> {
        self.gambles
            .get(name)
            .ok_or_else(|| CliError::UnknownGamble(name.to_string()))
    }
}

impl ModelDocument {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(CliError::Parse)
    }

    pub fn to_json_string(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("document serializes");
        out.push('\n');
        out
    }

    /// Validates the document and builds the operator and gambles.
    pub fn build(&self) -> Result<LoadedModel, CliError> {
        if self.version != SCHEMA_VERSION {
            return Err(CliError::Validation(format!(
                "unsupported schema version {} (expected {SCHEMA_VERSION})",
                self.version
            )));
        }
        let space = StateSpace::new(self.states.clone()).map_err(CliError::Model)?;
        for name in self.rows.keys() {
            if !self.states.iter().any(|s| s == name) {
                return Err(CliError::Validation(format!(
                    "row for `{name}` does not match any declared state"
                )));
            }
        }
        let rows: Vec<RowCredalSet> = self
            .states
            .iter()
            .map(|state| {
                self.rows
                    .get(state)
                    .map(RowSpec::to_row)
                    .ok_or_else(|| CliError::Validation(format!("state `{state}` has no row")))
            })
            .collect::<Result<_, _>>()?;
        let operator = UpperTransitionOperator::new(space, rows).map_err(CliError::Model)?;

        let mut gambles = BTreeMap::new();
        for (name, values) in &self.gambles {
            if values.len() != self.states.len() {
                return Err(CliError::Validation(format!(
                    "gamble `{name}` has {} entries for {} states",
                    values.len(),
                    self.states.len()
                )));
            }
            let gamble = Gamble::new(values.clone())
                .map_err(|e| CliError::Validation(format!("gamble `{name}`: {e}")))?;
            gambles.insert(name.clone(), gamble);
        }

        Ok(LoadedModel { document: self.clone(), operator, gambles })
    }
}

/// Reads, parses, and validates a model file.
pub fn load_model(path: &Path) -> Result<LoadedModel, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
    ModelDocument::parse(&text)?.build()
}
