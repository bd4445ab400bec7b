//! One handler per command; each turns a loaded scenario into a report
//! body. The dotted names here are the same ones scenarios may carry in
//! their `command` key.

mod diffeo;
mod hs;
mod jets;
mod patho;
mod spaces;
mod weights;

use serde::Serialize;

use crate::emit::Body;
use crate::failure::{CliResult, Failure};
use crate::scenario::Loaded;

fn json_body(report: &impl Serialize) -> CliResult<Body> {
    Ok(Body::Json(serde_json::to_value(report)?))
}

pub const COMMANDS: [&str; 21] = [
    "weights.classify",
    "weights.qa",
    "jets.compose",
    "jets.invert",
    "jets.majorant",
    "jets.fdbbound",
    "spaces.seminorm",
    "spaces.diagnose",
    "spaces.inclusions",
    "diffeo.compose",
    "diffeo.invert",
    "diffeo.conjugate",
    "diffeo.evolve",
    "hs.rt",
    "hs.geodesic",
    "hs.distance",
    "hs.shift",
    "hs.blowup",
    "hs.validate",
    "patho.lemma157",
    "patho.halflie",
    "patho.mu",
];

pub fn dispatch(command: &str, loaded: &Loaded) -> CliResult<Body> {
    match command {
        "weights.classify" => weights::classify(loaded),
        "weights.qa" => weights::qa(loaded),
        "jets.compose" => jets::compose(loaded),
        "jets.invert" => jets::invert(loaded),
        "jets.majorant" => jets::majorant(loaded),
        "jets.fdbbound" => jets::fdbbound(loaded),
        "spaces.seminorm" => spaces::seminorm(loaded),
        "spaces.diagnose" => spaces::diagnose(loaded),
        "spaces.inclusions" => spaces::inclusions(loaded),
        "diffeo.compose" => diffeo::compose(loaded),
        "diffeo.invert" => diffeo::invert(loaded),
        "diffeo.conjugate" => diffeo::conjugate(loaded),
        "diffeo.evolve" => diffeo::evolve(loaded),
        "hs.rt" => hs::rt(loaded),
        "hs.geodesic" => hs::geodesic(loaded),
        "hs.distance" => hs::distance(loaded),
        "hs.shift" => hs::shift(loaded),
        "hs.blowup" => hs::blowup(loaded),
        "hs.validate" => hs::validate(loaded),
        "patho.lemma157" => patho::lemma157(loaded),
        "patho.halflie" => patho::halflie(loaded),
        "patho.mu" => patho::mu(loaded),
        other => Err(Failure::usage(format!("unknown command '{other}'"))),
    }
}
