//! Geodesics of the right-invariant homogeneous H^1 metric on
//! diffeomorphism groups of the real line, together with the analytic
//! machinery needed to reason about them: weight sequences for
//! ultradifferentiable regularity classes, truncated jet arithmetic with
//! majorant bounds, seminorm evaluation on decaying function spaces, grid
//! diffeomorphism group operations, the square-root coordinate transform
//! with its explicit geodesics and blow-up analysis, and the bump-train
//! counterexamples that separate the half-Lie settings from the smooth one.
//!
//! The crate is organized by subject:
//!
//! * [`weights`] — weight sequences `M_k` in the log domain, growth and
//!   quasianalyticity diagnostics.
//! * [`jets`] — truncated Taylor jets over `f64` or exact rationals,
//!   composition, reversion, and the majorant series controlling them.
//! * [`spaces`] — grid functions with decay-class tags, analytic
//!   descriptors with derivative oracles, seminorms, and embedding checks.
//! * [`diffeo`] — compactly perturbed diffeomorphisms of the line:
//!   composition, inversion, conjugation, and flows of vector fields.
//! * [`hs`] — the square-root coordinate transform, explicit geodesics,
//!   geodesic distance, the shift functional, blow-up of the monoid
//!   continuation, and an independent PDE cross-check.
//! * [`patho`] — bump trains and the divergence bookkeeping for the
//!   half-Lie counterexamples, plus the `mu`-sequence asymptotics.
//! * [`corpus`] — seeded random test corpora shared by tests and the CLI.

pub mod corpus;
pub mod diffeo;
pub mod error;
pub mod hs;
pub mod jets;
pub mod numerics;
pub mod patho;
pub mod spaces;
pub mod weights;

pub use error::{Error, Result};
