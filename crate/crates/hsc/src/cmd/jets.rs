//! Jet arithmetic: composition, reversion, the geometric majorant
//! envelope, and the partition-sum bound fit.

use hsgeo::jets::{majorant_series, partition_bound_check, Jet};

use crate::emit::{Body, Cell, CsvDoc};
use crate::failure::CliResult;
use crate::scenario::Loaded;

use super::json_body;

fn jet_csv(jet: &Jet<f64>) -> Body {
    let rows = (0..=jet.degree())
        .map(|k| vec![Cell::Int(k as i64), Cell::Float(jet.coeff(k))])
        .collect();
    Body::Csv(CsvDoc {
        notes: vec![("base_point", Cell::Float(jet.value()))],
        columns: &["k", "a_k"],
        rows,
    })
}

pub fn compose(loaded: &Loaded) -> CliResult<Body> {
    let f = loaded.scenario.jet("f", &loaded.base_dir)?;
    let g = loaded.scenario.jet("g", &loaded.base_dir)?;
    Ok(jet_csv(&f.compose(&g)?))
}

pub fn invert(loaded: &Loaded) -> CliResult<Body> {
    let f = loaded.scenario.jet("f", &loaded.base_dir)?;
    Ok(jet_csv(&f.invert()?))
}

pub fn majorant(loaded: &Loaded) -> CliResult<Body> {
    let sc = &loaded.scenario;
    let report = majorant_series(
        sc.float("a")?,
        sc.float("c")?,
        sc.float("rho")?,
        &sc.weights()?,
        sc.count("n")?,
    )?;
    json_body(&report)
}

pub fn fdbbound(loaded: &Loaded) -> CliResult<Body> {
    let sc = &loaded.scenario;
    let report = partition_bound_check(sc.float("a")?, &sc.weights()?, sc.count("gamma_max")?)?;
    json_body(&report)
}
