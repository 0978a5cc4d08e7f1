//! Group input parsing: catalog shorthands, inline JSON, or a JSON file.
//!
//! JSON forms: `{"name": .., "mult_table": [[..]]}`,
//! `{"permutations": [[..]]}`, `{"product": [spec, ..]}`, `{"catalog": ".."}`.

use doublecat_core::catalog::{catalog, GroupData};
use doublecat_core::group::FiniteGroup;
use serde::Deserialize;
use std::sync::Arc;

use crate::CliError;

#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum GroupSpec {
    Catalog {
        catalog: String,
    },
    Product {
        product: Vec<GroupSpec>,
        name: Option<String>,
    },
    Table {
        mult_table: Vec<Vec<usize>>,
        name: Option<String>,
    },
    Permutations {
        permutations: Vec<Vec<usize>>,
        name: Option<String>,
    },
}

impl GroupSpec {
    pub fn build(&self) -> Result<GroupData, CliError> {
        match self {
            GroupSpec::Catalog { catalog: name } => {
                catalog(name).map_err(|e| CliError::input(e.to_string()))
            }
            GroupSpec::Table { mult_table, name } => {
                let group = FiniteGroup::from_mult_table(mult_table).map_err(CliError::group)?;
                Ok(GroupData::new(
                    name.clone().unwrap_or_else(|| "table".to_string()),
                    Arc::new(group),
                ))
            }
            GroupSpec::Permutations { permutations, name } => {
                let group =
                    FiniteGroup::from_permutations(permutations).map_err(CliError::group)?;
                Ok(GroupData::new(
                    name.clone().unwrap_or_else(|| "permutation-group".to_string()),
                    Arc::new(group),
                ))
            }
            GroupSpec::Product { product, name } => {
                let factors = product
                    .iter()
                    .map(|spec| spec.build().map(|d| d.group))
                    .collect::<Result<Vec<_>, _>>()?;
                GroupData::from_product(
                    name.clone().unwrap_or_else(|| "product".to_string()),
                    &factors,
                )
                .map_err(CliError::group)
            }
        }
    }
}

/// Accepts `catalog:NAME`, inline JSON, or a path to a JSON file.
pub fn parse_group_arg(arg: &str) -> Result<GroupData, CliError> {
    if let Some(name) = arg.strip_prefix("catalog:") {
        return catalog(name).map_err(|e| CliError::input(e.to_string()));
    }
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg)
            .map_err(|e| CliError::input(format!("cannot read group file `{arg}`: {e}")))?
    };
    let spec: GroupSpec = serde_json::from_str(&text)
        .map_err(|e| CliError::input(format!("malformed group spec: {e}")))?;
    spec.build()
}
