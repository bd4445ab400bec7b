//! Function spaces on uniform one-dimensional grids.
//!
//! A [`GridFunction`] couples samples on a uniform window with an optional
//! analytic descriptor. When a descriptor is present, derivatives come
//! from closed-form oracles; plain sampled data falls back to
//! finite-difference stencils whose rounding-noise amplification is
//! tracked and refused once it could contaminate the result. Each grid
//! function also carries a decay-class claim that is validated at
//! construction, so downstream seminorm and embedding routines can trust
//! boundary smallness instead of re-checking it.

mod descriptor;
mod inclusion;
mod seminorm;

pub use descriptor::{
    chi, chi_cumulative, chi_derivative, chi_l1, train_amp, train_rate, Descriptor,
    ORACLE_KMAX,
};
pub use inclusion::{inclusion_report, InclusionReport, WeightedBoundRow};
pub use seminorm::{
    class_diagnostic, seminorm, ClassSweep, ClassTag, SeminormQuery, SeminormReport, Witness,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{centered_stencil, fornberg_weights};

/// Relative boundary smallness demanded of decaying claims.
pub const BOUNDARY_DECAY_TOL: f64 = 1e-8;

/// Decay behaviour the caller claims for a grid function. Validated at
/// construction: decaying claims must hold on the sampled window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum DecayClaim {
    /// No decay claimed; only sup-type queries are meaningful.
    None,
    /// Bounded with all derivatives (sup norms finite).
    B,
    /// Integrable with exponent `p` (boundary must be negligible).
    W { p: f64 },
    /// Rapid decay: polynomial weights stay bounded.
    S,
    /// Compactly supported inside the window.
    D,
}

/// Where samples came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case")]
pub enum Source {
    /// Raw samples; derivatives use finite differences.
    Sampled,
    /// Analytic descriptor with derivative oracles, scaled by `scale`.
    Analytic { descriptor: Descriptor, scale: f64 },
}

/// Samples of a function on the uniform grid `x_i = xmin + i h`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GridFunction {
    window: (f64, f64),
    step: f64,
    samples: Vec<f64>,
    source: Source,
    claim: DecayClaim,
    /// Recorded compact support, when the claim or descriptor provides one.
    support: Option<(f64, f64)>,
}

/// Derivative samples plus the rounding-noise floor of how they were made.
#[derive(Debug, Clone)]
pub struct DerivativeGrid {
    pub values: Vec<f64>,
    /// Absolute noise floor: `eps * max|sample| * sum|weights|` for the
    /// worst stencil used (machine epsilon scale for oracle output).
    pub noise_floor: f64,
}

fn grid_count(window: (f64, f64), step: f64) -> Result<usize> {
    let (a, b) = window;
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(Error::Domain(format!("bad window [{a}, {b}]")));
    }
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::Domain(format!("bad step {step}")));
    }
    let span = b - a;
    let intervals = span / step;
    let n = intervals.round();
    if n < 1.0 || (intervals - n).abs() > 32.0 * f64::EPSILON * intervals.max(1.0) {
        return Err(Error::Domain(format!(
            "step {step} does not tile window [{a}, {b}]: {intervals} intervals"
        )));
    }
    Ok(n as usize + 1)
}

impl GridFunction {
    /// Builds a grid function by sampling an analytic descriptor.
    pub fn from_descriptor(
        descriptor: Descriptor,
        window: (f64, f64),
        step: f64,
        claim: DecayClaim,
    ) -> Result<Self> {
        descriptor.validate()?;
        let n = grid_count(window, step)?;
        let samples = descriptor.sample(window.0, step, n);
        let support = descriptor.support();
        if claim == DecayClaim::D {
            match support {
                Some((lo, hi)) => {
                    if lo < window.0 || hi > window.1 {
                        return Err(Error::Domain(format!(
                            "compact support [{lo}, {hi}] exceeds window [{}, {}]",
                            window.0, window.1
                        )));
                    }
                }
                None => {
                    return Err(Error::Domain(
                        "descriptor has no compact support, cannot claim class D".into(),
                    ))
                }
            }
        }
        let gf = GridFunction {
            window,
            step,
            samples,
            source: Source::Analytic {
                descriptor,
                scale: 1.0,
            },
            claim,
            support,
        };
        gf.validate_claim()?;
        Ok(gf)
    }

    /// Wraps externally produced samples. Derivatives will use finite
    /// differences, with precision refusal when stencil noise bites.
    pub fn from_samples(
        window: (f64, f64),
        step: f64,
        samples: Vec<f64>,
        claim: DecayClaim,
    ) -> Result<Self> {
        let n = grid_count(window, step)?;
        if samples.len() != n {
            return Err(Error::Domain(format!(
                "window [{}, {}] with step {step} needs {n} samples, got {}",
                window.0,
                window.1,
                samples.len()
            )));
        }
        if samples.iter().any(|s| !s.is_finite()) {
            return Err(Error::Domain("samples must be finite".into()));
        }
        let support = if claim == DecayClaim::D {
            let first = samples.iter().position(|&s| s != 0.0);
            match first {
                None => Some((window.0, window.0)),
                Some(i) => {
                    let j = samples.iter().rposition(|&s| s != 0.0).expect("nonempty");
                    if i == 0 || j + 1 == samples.len() {
                        return Err(Error::Domain(
                            "class D claim needs vanishing samples at both window ends".into(),
                        ));
                    }
                    Some((window.0 + i as f64 * step, window.0 + j as f64 * step))
                }
            }
        } else {
            None
        };
        let gf = GridFunction {
            window,
            step,
            samples,
            source: Source::Sampled,
            claim,
            support,
        };
        gf.validate_claim()?;
        Ok(gf)
    }

    fn validate_claim(&self) -> Result<()> {
        match self.claim {
            DecayClaim::None | DecayClaim::B => Ok(()),
            DecayClaim::W { p } if !(p.is_finite() && p >= 1.0) => Err(Error::Domain(format!(
                "claim W needs integrability exponent p >= 1, got {p}"
            ))),
            DecayClaim::W { .. } | DecayClaim::S => {
                let peak = self.peak();
                let boundary = self.boundary_magnitude();
                if peak > 0.0 && boundary > BOUNDARY_DECAY_TOL * peak {
                    return Err(Error::Domain(format!(
                        "window too small for claimed decay: boundary magnitude {boundary:.3e} \
                         exceeds {BOUNDARY_DECAY_TOL:.0e} of peak {peak:.3e}"
                    )));
                }
                Ok(())
            }
            DecayClaim::D => {
                let (lo, hi) = self.support.expect("class D records support");
                for (i, &s) in self.samples.iter().enumerate() {
                    let x = self.x(i);
                    if (x < lo || x > hi) && s != 0.0 {
                        return Err(Error::Domain(format!(
                            "class D claim violated: sample {s:.3e} at x = {x} outside \
                             recorded support [{lo}, {hi}]"
                        )));
                    }
                }
                Ok(())
            }
        }
    }

    pub fn window(&self) -> (f64, f64) {
        self.window
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn x(&self, i: usize) -> f64 {
        self.window.0 + i as f64 * self.step
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn claim(&self) -> DecayClaim {
        self.claim
    }

    pub fn source(&self) -> &Source {
        &self.source
    }

    pub fn support(&self) -> Option<(f64, f64)> {
        self.support
    }

    pub fn peak(&self) -> f64 {
        self.samples.iter().fold(0.0f64, |m, s| m.max(s.abs()))
    }

    pub fn boundary_magnitude(&self) -> f64 {
        match self.samples.as_slice() {
            [] => 0.0,
            [first, .., last] => first.abs().max(last.abs()),
            [only] => only.abs(),
        }
    }

    /// Same grid, samples multiplied by `lambda`. Analytic sources keep
    /// their oracle (the scale rides along), so homogeneity is exact.
    pub fn scaled(&self, lambda: f64) -> GridFunction {
        let mut out = self.clone();
        for s in &mut out.samples {
            *s *= lambda;
        }
        if let Source::Analytic { scale, .. } = &mut out.source {
            *scale *= lambda;
        }
        out
    }

    /// Samples of the `k`-th derivative on the full grid.
    ///
    /// Analytic sources evaluate their oracle. Sampled sources apply
    /// fourth-order stencils (centered inside, one-sided of the same
    /// width at the edges) and report the worst-case noise floor; callers
    /// enforce their own trust threshold against it.
    pub fn derivative_grid(&self, k: usize) -> Result<DerivativeGrid> {
        match &self.source {
            Source::Analytic { descriptor, scale } => {
                let mut values = Vec::with_capacity(self.len());
                for i in 0..self.len() {
                    values.push(scale * descriptor.derivative(k, self.x(i))?);
                }
                let peak = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
                Ok(DerivativeGrid {
                    values,
                    noise_floor: f64::EPSILON * peak,
                })
            }
            Source::Sampled => self.fd_grid(k),
        }
    }

    fn fd_grid(&self, k: usize) -> Result<DerivativeGrid> {
        if k == 0 {
            return Ok(DerivativeGrid {
                values: self.samples.clone(),
                noise_floor: f64::EPSILON * self.peak(),
            });
        }
        let n = self.len();
        let npts = 2 * k.div_ceil(2) + 3;
        if n < npts {
            return Err(Error::Domain(format!(
                "grid of {n} samples is too short for an order-{k} stencil ({npts} points)"
            )));
        }
        let h = self.step;
        let (offsets, interior_w) = centered_stencil(k, h);
        let half = offsets.len() / 2;
        let mut worst_sum_abs: f64 = interior_w.iter().map(|w| w.abs()).sum();
        let mut values = vec![0.0; n];
        for i in 0..n {
            if i >= half && i + half < n {
                let mut acc = 0.0;
                for (o, w) in offsets.iter().zip(&interior_w) {
                    acc += w * self.samples[(i as i64 + o) as usize];
                }
                values[i] = acc;
            } else {
                // Edge node: one-sided stencil of the same width.
                let start = i.saturating_sub(half).min(n - npts);
                let xs: Vec<f64> =
                    (0..npts).map(|j| (start + j) as f64 * h - i as f64 * h).collect();
                let w = fornberg_weights(0.0, &xs, k).swap_remove(k);
                let sum_abs: f64 = w.iter().map(|x| x.abs()).sum();
                worst_sum_abs = worst_sum_abs.max(sum_abs);
                let mut acc = 0.0;
                for (j, wj) in w.iter().enumerate() {
                    acc += wj * self.samples[start + j];
                }
                values[i] = acc;
            }
        }
        Ok(DerivativeGrid {
            values,
            noise_floor: f64::EPSILON * self.peak() * worst_sum_abs,
        })
    }
}
