//! Weight-sequence reports: structural conditions and the
//! quasianalyticity diagnostic.

use hsgeo::weights::{check_conditions, quasianalytic_diagnostic};

use crate::emit::Body;
use crate::failure::CliResult;
use crate::scenario::Loaded;

use super::json_body;

pub fn classify(loaded: &Loaded) -> CliResult<Body> {
    let ws = loaded.scenario.weights()?;
    json_body(&check_conditions(&ws))
}

pub fn qa(loaded: &Loaded) -> CliResult<Body> {
    let ws = loaded.scenario.weights()?;
    json_body(&quasianalytic_diagnostic(&ws)?)
}
