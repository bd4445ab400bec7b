//! Scenario files: one JSON object per invocation, carrying the inputs
//! the invoked command needs. Keys irrelevant to a command are rejected
//! only when they are not scenario keys at all, so one scenario can be
//! shared by related commands (a geodesic file also drives `hs blowup`).
//!
//! Function inputs (`f`, `g`, `phi0`, `phi1`, `u0`) are descriptor
//! objects like `{"kind":"gaussian_bump","amp":0.5,"center":0,"width":1}`
//! sampled on `window` at spacing `h`. Jet inputs are either an inline
//! object `{"coeffs":[0,1,1]}` (base point optional, default 0) or a
//! string path to a CSV with rows `k,a_k`. Weight sequences come from a
//! `generator` object such as `{"kind":"gevrey","s":2.0,"kmax":200}`.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use serde_json::Value;

use hsgeo::jets::Jet;
use hsgeo::spaces::{ClassTag, DecayClaim, Descriptor, GridFunction};
use hsgeo::weights::{GeneratorSpec, WeightSequence};

use crate::failure::{CliResult, Failure};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    /// Optional dotted command name; must match the invoked command.
    pub command: Option<String>,
    /// Artifact path; stdout when absent and no --out is given.
    pub out: Option<PathBuf>,
    pub window: Option<(f64, f64)>,
    /// Grid spacing for sampled functions.
    pub h: Option<f64>,
    pub dt: Option<f64>,
    pub t: Option<f64>,
    pub t_grid: Option<Vec<f64>>,
    pub t_final: Option<f64>,
    pub snapshots: Option<usize>,
    /// Decay claim override for every sampled function in the scenario.
    pub claim: Option<DecayClaim>,
    pub f: Option<Value>,
    pub g: Option<Value>,
    pub phi0: Option<Value>,
    pub phi1: Option<Value>,
    pub u0: Option<Value>,
    pub field: Option<hsgeo::diffeo::VectorField>,
    pub generator: Option<GeneratorSpec>,
    pub poly_generator: Option<GeneratorSpec>,
    pub a: Option<f64>,
    pub c: Option<f64>,
    pub rho: Option<f64>,
    pub n: Option<usize>,
    pub gamma_max: Option<usize>,
    pub p: Option<f64>,
    pub q: Option<f64>,
    pub alpha_max: Option<usize>,
    pub k_max: Option<usize>,
    pub n_max: Option<usize>,
    pub class: Option<ClassTag>,
    pub radius: Option<f64>,
    pub kmax: Option<usize>,
    pub pmax: Option<usize>,
    pub rho_grid: Option<Vec<f64>>,
}

/// A parsed scenario together with its canonical parameter echo (the
/// file's object minus `command` and `out`), used for provenance.
#[derive(Debug)]
pub struct Loaded {
    pub scenario: Scenario,
    pub parameters: Value,
    /// Directory of the scenario file; relative input paths resolve here.
    pub base_dir: PathBuf,
}

pub fn load(path: &Path) -> CliResult<Loaded> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::io(format!("cannot read scenario {}: {e}", path.display())))?;
    let raw: Value = serde_json::from_str(&text)?;
    let scenario: Scenario = serde_json::from_value(raw.clone())?;
    let parameters = match raw {
        Value::Object(mut map) => {
            map.remove("command");
            map.remove("out");
            Value::Object(map)
        }
        _ => return Err(Failure::parse("scenario must be a JSON object".into())),
    };
    let base_dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .map(Path::to_path_buf)
        .unwrap_or_else(|| PathBuf::from("."));
    Ok(Loaded {
        scenario,
        parameters,
        base_dir,
    })
}

fn missing(key: &str) -> Failure {
    Failure::validation(format!("scenario key '{key}' is required for this command"))
}

impl Scenario {
    pub fn window(&self) -> CliResult<(f64, f64)> {
        self.window.ok_or_else(|| missing("window"))
    }

    pub fn step(&self) -> CliResult<f64> {
        self.h.ok_or_else(|| missing("h"))
    }

    pub fn float(&self, key: &str) -> CliResult<f64> {
        let v = match key {
            "a" => self.a,
            "c" => self.c,
            "rho" => self.rho,
            "p" => self.p,
            "q" => self.q,
            "t" => self.t,
            "t_final" => self.t_final,
            "dt" => self.dt,
            "radius" => self.radius,
            _ => None,
        };
        v.ok_or_else(|| missing(key))
    }

    pub fn count(&self, key: &str) -> CliResult<usize> {
        let v = match key {
            "n" => self.n,
            "n_max" => self.n_max,
            "k_max" => self.k_max,
            "gamma_max" => self.gamma_max,
            _ => None,
        };
        v.ok_or_else(|| missing(key))
    }

    pub fn weights(&self) -> CliResult<WeightSequence> {
        let spec = self.generator.as_ref().ok_or_else(|| missing("generator"))?;
        Ok(WeightSequence::make(spec)?)
    }

    pub fn poly_weights(&self) -> CliResult<WeightSequence> {
        let spec = self
            .poly_generator
            .as_ref()
            .ok_or_else(|| missing("poly_generator"))?;
        Ok(WeightSequence::make(spec)?)
    }

    fn descriptor(&self, key: &str, value: &Value) -> CliResult<Descriptor> {
        serde_json::from_value(value.clone()).map_err(|e| {
            Failure::validation(format!("scenario key '{key}' is not a function descriptor: {e}"))
        })
    }

    /// Samples the descriptor under `key` on the scenario grid, with the
    /// decay claim taken from the scenario or defaulted by shape.
    pub fn grid(&self, key: &str, value: &Value) -> CliResult<GridFunction> {
        let descriptor = self.descriptor(key, value)?;
        let claim = self.claim.unwrap_or_else(|| default_claim(&descriptor));
        Ok(GridFunction::from_descriptor(
            descriptor,
            self.window()?,
            self.step()?,
            claim,
        )?)
    }

    pub fn required_grid(&self, key: &str) -> CliResult<GridFunction> {
        let value = match key {
            "f" => self.f.as_ref(),
            "g" => self.g.as_ref(),
            "phi0" => self.phi0.as_ref(),
            "phi1" => self.phi1.as_ref(),
            "u0" => self.u0.as_ref(),
            _ => None,
        };
        self.grid(key, value.ok_or_else(|| missing(key))?)
    }

    pub fn jet(&self, key: &str, base_dir: &Path) -> CliResult<Jet<f64>> {
        let value = match key {
            "f" => self.f.as_ref(),
            "g" => self.g.as_ref(),
            _ => None,
        };
        match value.ok_or_else(|| missing(key))? {
            Value::String(rel) => jet_from_csv(&base_dir.join(rel)),
            inline => {
                let input: JetInput = serde_json::from_value(inline.clone()).map_err(|e| {
                    Failure::validation(format!("scenario key '{key}' is not a jet: {e}"))
                })?;
                Ok(Jet::new(input.base, input.coeffs)?)
            }
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct JetInput {
    #[serde(default)]
    base: f64,
    coeffs: Vec<f64>,
}

/// The strongest claim each analytic shape supports on a generic window.
fn default_claim(descriptor: &Descriptor) -> DecayClaim {
    match descriptor {
        Descriptor::Zero | Descriptor::CompactBump { .. } => DecayClaim::D,
        Descriptor::GaussianBump { .. } => DecayClaim::S,
        Descriptor::Sine | Descriptor::HarmonicTrain { .. } | Descriptor::ThetaSeries { .. } => {
            DecayClaim::B
        }
    }
}

/// Reads a jet from CSV rows `k,a_k`, in order from `k = 0`. Blank
/// lines, `#` comments, and a `k,a_k` header row are skipped.
fn jet_from_csv(path: &Path) -> CliResult<Jet<f64>> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::io(format!("cannot read jet {}: {e}", path.display())))?;
    let mut coeffs = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || line == "k,a_k" {
            continue;
        }
        let (k_text, a_text) = line
            .split_once(',')
            .ok_or_else(|| Failure::validation(format!("jet row '{line}' is not 'k,a_k'")))?;
        let k: usize = k_text
            .trim()
            .parse()
            .map_err(|_| Failure::validation(format!("jet row '{line}' has a bad order")))?;
        let a: f64 = a_text
            .trim()
            .parse()
            .map_err(|_| Failure::validation(format!("jet row '{line}' has a bad coefficient")))?;
        if k != coeffs.len() {
            return Err(Failure::validation(format!(
                "jet rows must be consecutive from k = 0; found k = {k} at position {}",
                coeffs.len()
            )));
        }
        coeffs.push(a);
    }
    Ok(Jet::new(0.0, coeffs)?)
}
