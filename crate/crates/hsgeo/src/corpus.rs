//! Seeded random corpora shared by the test suite and the CLI.
//!
//! All draws run through a counter-based generator keyed by a single seed
//! and a per-corpus stream, so every corpus is reproducible on its own:
//! regenerating stream 3 never depends on whether stream 2 was consumed.
//! The seed comes from the `HSC_SEED` environment variable when set.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::diffeo::Diffeo;
use crate::error::{Error, Result};
use crate::hs::HsDiffeo;
use crate::spaces::{DecayClaim, Descriptor, GridFunction};

/// Seed used when `HSC_SEED` is unset.
pub const DEFAULT_SEED: u64 = 0x4853_4353_4545_4431;

/// Stream ids for the named corpora, shared by tests and the CLI so both
/// see byte-identical draws.
pub mod streams {
    /// Round-trip corpus for the coordinate transform.
    pub const HS_ROUND_TRIP: u64 = 1;
    /// Endpoint pairs for distance and shift checks.
    pub const HS_PAIRS: u64 = 2;
    /// Triples for the group-axiom checks.
    pub const GROUP_TRIPLES: u64 = 3;
}

/// Parses a seed string: decimal or `0x`-prefixed hex.
pub fn parse_seed(raw: &str) -> Result<u64> {
    let raw = raw.trim();
    let parsed = if let Some(hex) = raw.strip_prefix("0x").or_else(|| raw.strip_prefix("0X")) {
        u64::from_str_radix(hex, 16)
    } else {
        raw.parse()
    };
    parsed.map_err(|_| {
        Error::Domain(format!(
            "seed must be a u64 in decimal or 0x hex form, got {raw:?}"
        ))
    })
}

/// Reads `HSC_SEED`, falling back to [`DEFAULT_SEED`] when unset.
pub fn env_seed() -> Result<u64> {
    match std::env::var("HSC_SEED") {
        Err(std::env::VarError::NotPresent) => Ok(DEFAULT_SEED),
        Err(e) => Err(Error::Domain(format!("HSC_SEED is not readable: {e}"))),
        Ok(raw) => parse_seed(&raw),
    }
}

/// Generator for one corpus stream.
pub fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// Parameters of one drawn compact perturbation `amp chi((x - center)/width)`.
#[derive(Debug, Clone, Copy)]
pub struct BumpDraw {
    pub amp: f64,
    pub center: f64,
    pub width: f64,
}

impl BumpDraw {
    pub fn descriptor(self) -> Descriptor {
        Descriptor::CompactBump {
            amp: self.amp,
            center: self.center,
            width: self.width,
        }
    }

    pub fn grid(self, window: (f64, f64), step: f64) -> Result<GridFunction> {
        GridFunction::from_descriptor(self.descriptor(), window, step, DecayClaim::D)
    }
}

/// Draws a bump whose support stays `margin` inside the window. With
/// `amp_max <= 0.4` the slope of `x -> x + bump(x)` stays above 0.27, so
/// the perturbation is a group element with room to spare.
pub fn draw_bump(rng: &mut ChaCha8Rng, window: (f64, f64), margin: f64, amp_max: f64) -> BumpDraw {
    let width = rng.gen_range(1.2..2.4);
    let center = rng.gen_range(window.0 + margin + width..window.1 - margin - width);
    let amp = rng.gen_range(-amp_max..amp_max);
    BumpDraw { amp, center, width }
}

/// Corpus of compactly perturbed diffeomorphisms of the grid line.
pub fn diffeo_corpus(
    rng: &mut ChaCha8Rng,
    count: usize,
    window: (f64, f64),
    step: f64,
) -> Result<Vec<Diffeo>> {
    (0..count)
        .map(|_| Diffeo::new(draw_bump(rng, window, 1.0, 0.25).grid(window, step)?))
        .collect()
}

/// Corpus of group elements for the coordinate-transform checks.
pub fn hs_corpus(
    rng: &mut ChaCha8Rng,
    count: usize,
    window: (f64, f64),
    step: f64,
) -> Result<Vec<HsDiffeo>> {
    (0..count)
        .map(|_| HsDiffeo::new(draw_bump(rng, window, 1.0, 0.25).grid(window, step)?))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seed_strings_parse_both_radixes() {
        assert_eq!(parse_seed("42").unwrap(), 42);
        assert_eq!(parse_seed(" 0x2a ").unwrap(), 42);
        assert_eq!(parse_seed("0X2A").unwrap(), 42);
        assert!(parse_seed("forty-two").is_err());
        assert!(parse_seed("-3").is_err());
        assert!(parse_seed("0x").is_err());
    }

    #[test]
    fn streams_replay_independently() {
        let a: Vec<f64> = {
            let mut r = rng(7, streams::HS_PAIRS);
            (0..8).map(|_| r.gen::<f64>()).collect()
        };
        let b: Vec<f64> = {
            let mut r = rng(7, streams::HS_PAIRS);
            (0..8).map(|_| r.gen::<f64>()).collect()
        };
        assert_eq!(a, b);
        let other: Vec<f64> = {
            let mut r = rng(7, streams::GROUP_TRIPLES);
            (0..8).map(|_| r.gen::<f64>()).collect()
        };
        assert_ne!(a, other);
        let reseeded: Vec<f64> = {
            let mut r = rng(8, streams::HS_PAIRS);
            (0..8).map(|_| r.gen::<f64>()).collect()
        };
        assert_ne!(a, reseeded);
    }

    #[test]
    fn drawn_corpora_are_valid_group_elements() {
        let window = (-8.0, 8.0);
        let mut r = rng(DEFAULT_SEED, streams::HS_ROUND_TRIP);
        let phis = hs_corpus(&mut r, 10, window, 1e-3).unwrap();
        assert_eq!(phis.len(), 10);
        for phi in &phis {
            assert!(phi.in_group());
            assert!(phi.derivative_floor() > 0.27, "{}", phi.derivative_floor());
        }

        let mut r = rng(DEFAULT_SEED, streams::GROUP_TRIPLES);
        let fs = diffeo_corpus(&mut r, 6, window, 1e-3).unwrap();
        for f in &fs {
            assert!(f.witness() > 0.0);
        }
        // At least one draw should flip the amplitude sign.
        let signs: Vec<bool> = fs
            .iter()
            .map(|f| f.perturbation().samples().iter().sum::<f64>() > 0.0)
            .collect();
        assert!(signs.iter().any(|s| *s) && signs.iter().any(|s| !*s));
    }
}
