//! Weighted seminorms over grid functions.
//!
//! Four families share one entry point: sup-type quotients over derivative
//! orders (with or without a compact-support demand), integral quotients
//! in `L^p`, and doubly indexed quotients with polynomial weights. Every
//! result names the witness index where the supremum was attained and is
//! explicitly truncation-tagged: values are computed from finitely many
//! derivative orders on a finite window. Integrals over the line are
//! truncated to the window; when the decay claim supplies a rate, the
//! report carries a bound on what the truncation can hide.
//!
//! Finite-difference inputs are refused (`Error::Precision`) whenever the
//! stencil noise floor exceeds [`FD_TRUST_TOL`] of that derivative's
//! signal scale; `max_trustworthy_order` in the numerics layer tells a
//! caller in advance how deep a given grid step can go.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{simpson, LogFactorial};
use crate::weights::WeightSequence;

use super::{DecayClaim, DerivativeGrid, GridFunction, Source};

/// Largest noise-to-signal ratio tolerated from finite differences.
pub const FD_TRUST_TOL: f64 = 1e-6;

const DEFAULT_KMAX: usize = 12;
const DEFAULT_PMAX: usize = 8;
const KMAX_LIMIT: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassTag {
    /// Bounded family: sup over derivative orders and points.
    B,
    /// Integral family: `L^p` norms across derivative orders.
    W,
    /// Polynomially weighted family with two weight sequences.
    S,
    /// Compactly supported variant of the bounded family.
    D,
}

fn default_kmax() -> usize {
    DEFAULT_KMAX
}

fn default_pmax() -> usize {
    DEFAULT_PMAX
}

/// One seminorm request. `radius` is the geometric scale applied per
/// derivative order; `p` is the integrability exponent (class W only);
/// `poly_weights` feeds the polynomial index (class S only).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SeminormQuery {
    pub class: ClassTag,
    pub radius: f64,
    #[serde(default)]
    pub p: Option<f64>,
    #[serde(default = "default_kmax")]
    pub kmax: usize,
    #[serde(default = "default_pmax")]
    pub pmax: usize,
    pub weights: WeightSequence,
    #[serde(default)]
    pub poly_weights: Option<WeightSequence>,
}

impl SeminormQuery {
    pub fn b(radius: f64, weights: WeightSequence) -> Self {
        SeminormQuery {
            class: ClassTag::B,
            radius,
            p: None,
            kmax: DEFAULT_KMAX,
            pmax: DEFAULT_PMAX,
            weights,
            poly_weights: None,
        }
    }

    pub fn w(radius: f64, p: f64, weights: WeightSequence) -> Self {
        SeminormQuery {
            class: ClassTag::W,
            p: Some(p),
            ..SeminormQuery::b(radius, weights)
        }
    }

    pub fn s(radius: f64, weights: WeightSequence, poly_weights: WeightSequence) -> Self {
        SeminormQuery {
            class: ClassTag::S,
            poly_weights: Some(poly_weights),
            ..SeminormQuery::b(radius, weights)
        }
    }

    pub fn d(radius: f64, weights: WeightSequence) -> Self {
        SeminormQuery {
            class: ClassTag::D,
            ..SeminormQuery::b(radius, weights)
        }
    }

    pub fn with_kmax(mut self, kmax: usize) -> Self {
        self.kmax = kmax;
        self
    }

    pub fn with_pmax(mut self, pmax: usize) -> Self {
        self.pmax = pmax;
        self
    }

    fn validate(&self, f: &GridFunction) -> Result<()> {
        if !(self.radius > 0.0 && self.radius.is_finite()) {
            return Err(Error::Domain(format!("radius must be positive, got {}", self.radius)));
        }
        if self.kmax == 0 || self.kmax > KMAX_LIMIT {
            return Err(Error::Domain(format!(
                "kmax must lie in 1..={KMAX_LIMIT}, got {}",
                self.kmax
            )));
        }
        if self.weights.kmax() < self.kmax {
            return Err(Error::Domain(format!(
                "weight table stops at k = {}, query needs {}",
                self.weights.kmax(),
                self.kmax
            )));
        }
        match self.class {
            ClassTag::W => match self.p {
                Some(p) if p >= 1.0 && p.is_finite() => Ok(()),
                other => Err(Error::Domain(format!(
                    "class W needs a finite exponent p >= 1, got {other:?}"
                ))),
            },
            ClassTag::S => {
                let l = self.poly_weights.as_ref().ok_or_else(|| {
                    Error::Domain("class S needs the polynomial weight sequence".into())
                })?;
                if l.kmax() < self.pmax {
                    return Err(Error::Domain(format!(
                        "polynomial weight table stops at {}, query needs {}",
                        l.kmax(),
                        self.pmax
                    )));
                }
                Ok(())
            }
            ClassTag::D => {
                if f.claim() != DecayClaim::D {
                    return Err(Error::Domain(
                        "class D seminorm needs a grid function with a class D claim".into(),
                    ));
                }
                Ok(())
            }
            ClassTag::B => Ok(()),
        }
    }
}

/// Index at which a seminorm supremum was attained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "witness", rename_all = "snake_case")]
pub enum Witness {
    /// Sup quotient: derivative order and point.
    Point { k: usize, x: f64 },
    /// Weighted sup: polynomial index, derivative order, point.
    WeightedPoint { p: usize, q: usize, x: f64 },
    /// Integral quotient: derivative order.
    Integral { k: usize },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SeminormReport {
    pub value: f64,
    pub witness: Witness,
    /// Derivative truncation actually used.
    pub kmax_used: usize,
    /// Polynomial-index truncation (weighted classes only).
    pub pmax_used: Option<usize>,
    pub boundary_magnitude: f64,
    /// Bound on quotient mass the window truncation can hide, when the
    /// decay claim provides a rate (integral classes only).
    pub tail_bound: Option<f64>,
    /// Worst finite-difference noise floor encountered (sampled sources).
    pub fd_noise: Option<f64>,
}

struct GateTracker {
    sampled: bool,
    worst: f64,
}

impl GateTracker {
    fn new(f: &GridFunction) -> Self {
        GateTracker {
            sampled: matches!(f.source(), Source::Sampled),
            worst: 0.0,
        }
    }

    /// Refuses derivative grids whose noise floor reaches the signal.
    fn admit(&mut self, k: usize, grid: &DerivativeGrid) -> Result<()> {
        if !self.sampled {
            return Ok(());
        }
        self.worst = self.worst.max(grid.noise_floor);
        let signal = grid.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if signal > 0.0 && grid.noise_floor > FD_TRUST_TOL * signal {
            return Err(Error::Precision(format!(
                "order-{k} stencil noise {:.3e} exceeds {FD_TRUST_TOL:.0e} of signal {signal:.3e}; \
                 coarsen the grid or lower kmax",
                grid.noise_floor
            )));
        }
        Ok(())
    }

    fn report(&self) -> Option<f64> {
        self.sampled.then_some(self.worst)
    }
}

/// Evaluates the seminorm described by `query` on `f`, returning the
/// value together with the witness where the supremum was attained.
pub fn seminorm(f: &GridFunction, query: &SeminormQuery) -> Result<SeminormReport> {
    query.validate(f)?;
    let lfact = LogFactorial::up_to(query.kmax.max(query.pmax));
    let mut gate = GateTracker::new(f);
    let report = match query.class {
        ClassTag::B | ClassTag::D => sup_quotient(f, query, &lfact, &mut gate)?,
        ClassTag::W => integral_quotient(f, query, &lfact, &mut gate)?,
        ClassTag::S => weighted_sup(f, query, &lfact, &mut gate)?,
    };
    Ok(SeminormReport {
        fd_noise: gate.report(),
        ..report
    })
}

/// Relative slack under which two quotients count as tied. Sampling a
/// smooth function misses its true supremum by about `(h/2)^2 / 2` times
/// the local curvature, so differences of that size between derivative
/// orders are grid artifacts; the witness then goes to the lowest order.
fn tie_slack(step: f64) -> f64 {
    (step * step).min(1e-3)
}

fn sup_quotient(
    f: &GridFunction,
    query: &SeminormQuery,
    lfact: &LogFactorial,
    gate: &mut GateTracker,
) -> Result<SeminormReport> {
    let log_r = query.radius.ln();
    let mut per_order: Vec<(f64, f64)> = Vec::with_capacity(query.kmax + 1);
    for k in 0..=query.kmax {
        let grid = f.derivative_grid(k)?;
        gate.admit(k, &grid)?;
        let denom_log = k as f64 * log_r + lfact.get(k) + query.weights.log_value(k);
        let inv = (-denom_log).exp();
        let mut best_k = f64::NEG_INFINITY;
        let mut arg_x = f.x(0);
        for (i, v) in grid.values.iter().enumerate() {
            let quotient = v.abs() * inv;
            if quotient > best_k {
                best_k = quotient;
                arg_x = f.x(i);
            }
        }
        per_order.push((best_k, arg_x));
    }
    let best = per_order.iter().fold(0.0f64, |m, (q, _)| m.max(*q));
    let cutoff = best * (1.0 - tie_slack(f.step()));
    let (k, &(_, x)) = per_order
        .iter()
        .enumerate()
        .find(|(_, (q, _))| *q >= cutoff)
        .expect("some order attains the maximum");
    Ok(SeminormReport {
        value: best,
        witness: Witness::Point { k, x },
        kmax_used: query.kmax,
        pmax_used: None,
        boundary_magnitude: f.boundary_magnitude(),
        tail_bound: None,
        fd_noise: None,
    })
}

fn integral_quotient(
    f: &GridFunction,
    query: &SeminormQuery,
    lfact: &LogFactorial,
    gate: &mut GateTracker,
) -> Result<SeminormReport> {
    let p = query.p.expect("validated");
    let log_r = query.radius.ln();
    let (x_lo, x_hi) = f.window();
    let mut best = f64::NEG_INFINITY;
    let mut witness = Witness::Integral { k: 0 };
    let mut tail_best: Option<f64> = match f.claim() {
        DecayClaim::D => Some(0.0),
        DecayClaim::S => Some(0.0),
        _ => None,
    };
    for k in 0..=query.kmax {
        let grid = f.derivative_grid(k)?;
        gate.admit(k, &grid)?;
        let integrand: Vec<f64> = grid.values.iter().map(|v| v.abs().powf(p)).collect();
        let norm = simpson(&integrand, f.step()).powf(1.0 / p);
        let denom_log = k as f64 * log_r + lfact.get(k) + query.weights.log_value(k);
        let quotient = norm * (-denom_log).exp();
        if quotient > best {
            best = quotient;
            witness = Witness::Integral { k };
        }
        if f.claim() == DecayClaim::S {
            // Extrapolate the claimed quadratic decay from the boundary
            // samples: |f^(k)(x)| <= G (1+|x|)^-2 beyond the window, so the
            // missing mass is bounded in closed form.
            let n = grid.values.len();
            let g_lo = grid.values[0].abs() * (1.0 + x_lo.abs()).powi(2);
            let g_hi = grid.values[n - 1].abs() * (1.0 + x_hi.abs()).powi(2);
            let side = |g: f64, x: f64| {
                g.powf(p) * (1.0 + x.abs()).powf(1.0 - 2.0 * p) / (2.0 * p - 1.0)
            };
            let tail = (side(g_lo, x_lo) + side(g_hi, x_hi)).powf(1.0 / p) * (-denom_log).exp();
            tail_best = Some(tail_best.unwrap_or(0.0).max(tail));
        }
    }
    Ok(SeminormReport {
        value: best.max(0.0),
        witness,
        kmax_used: query.kmax,
        pmax_used: None,
        boundary_magnitude: f.boundary_magnitude(),
        tail_bound: tail_best,
        fd_noise: None,
    })
}

fn weighted_sup(
    f: &GridFunction,
    query: &SeminormQuery,
    lfact: &LogFactorial,
    gate: &mut GateTracker,
) -> Result<SeminormReport> {
    let poly = query.poly_weights.as_ref().expect("validated");
    let log_r = query.radius.ln();
    // Per (derivative order, polynomial index) maxima, in the preference
    // order for tie-breaking: lowest derivative order, then lowest index.
    let mut per_pair: Vec<(usize, usize, f64, f64)> = Vec::new();
    for q_ord in 0..=query.kmax {
        let grid = f.derivative_grid(q_ord)?;
        gate.admit(q_ord, &grid)?;
        for p_idx in 0..=query.pmax {
            let denom_log = (p_idx + q_ord) as f64 * log_r
                + lfact.get(p_idx)
                + lfact.get(q_ord)
                + poly.log_value(p_idx)
                + query.weights.log_value(q_ord);
            let inv = (-denom_log).exp();
            let mut best_pair = f64::NEG_INFINITY;
            let mut arg_x = f.x(0);
            for (i, v) in grid.values.iter().enumerate() {
                let weight = if p_idx == 0 {
                    1.0
                } else {
                    (1.0 + f.x(i).abs()).powi(p_idx as i32)
                };
                let quotient = weight * v.abs() * inv;
                if quotient > best_pair {
                    best_pair = quotient;
                    arg_x = f.x(i);
                }
            }
            per_pair.push((q_ord, p_idx, best_pair, arg_x));
        }
    }
    let best = per_pair.iter().fold(0.0f64, |m, (_, _, q, _)| m.max(*q));
    let cutoff = best * (1.0 - tie_slack(f.step()));
    let &(q_ord, p_idx, _, x) = per_pair
        .iter()
        .find(|(_, _, q, _)| *q >= cutoff)
        .expect("some pair attains the maximum");
    Ok(SeminormReport {
        value: best,
        witness: Witness::WeightedPoint {
            p: p_idx,
            q: q_ord,
            x,
        },
        kmax_used: query.kmax,
        pmax_used: Some(query.pmax),
        boundary_magnitude: f.boundary_magnitude(),
        tail_bound: None,
        fd_noise: None,
    })
}

/// Seminorm values across a radius sweep, with compatibility verdicts.
///
/// Quotients shrink as the radius grows, so the sweep must be
/// nonincreasing; `monotone_nonincreasing` records that check. A radius
/// whose supremum is attained strictly below the derivative truncation is
/// marked `interior`: the quotient profile has turned over and the
/// truncated value is trustworthy. The verdicts summarize those marks:
/// membership for *some* radius versus *every tested* radius.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClassSweep {
    pub radii: Vec<f64>,
    pub values: Vec<f64>,
    pub witnesses: Vec<Witness>,
    /// Supremum attained below the truncation order, per radius.
    pub interior: Vec<bool>,
    pub monotone_nonincreasing: bool,
    /// Finite at some tested radius (union-style membership).
    pub roumieu_compatible: bool,
    /// Finite at every tested radius (intersection-style membership).
    pub beurling_compatible: bool,
    pub kmax_used: usize,
}

pub fn class_diagnostic(
    f: &GridFunction,
    template: &SeminormQuery,
    radii: &[f64],
) -> Result<ClassSweep> {
    if radii.is_empty() {
        return Err(Error::Domain("radius sweep needs at least one radius".into()));
    }
    if radii.windows(2).any(|w| w[0] >= w[1]) || radii[0] <= 0.0 {
        return Err(Error::Domain("radii must be positive and ascending".into()));
    }
    let mut values = Vec::with_capacity(radii.len());
    let mut witnesses = Vec::with_capacity(radii.len());
    let mut interior = Vec::with_capacity(radii.len());
    for &r in radii {
        let mut query = template.clone();
        query.radius = r;
        let report = seminorm(f, &query)?;
        let order = match report.witness {
            Witness::Point { k, .. } | Witness::Integral { k } => k,
            Witness::WeightedPoint { q, .. } => q,
        };
        interior.push(order < template.kmax);
        values.push(report.value);
        witnesses.push(report.witness);
    }
    let monotone = values
        .windows(2)
        .all(|w| w[1] <= w[0] * (1.0 + 1e-9) + f64::MIN_POSITIVE);
    Ok(ClassSweep {
        radii: radii.to_vec(),
        values,
        witnesses: witnesses.clone(),
        interior: interior.clone(),
        monotone_nonincreasing: monotone,
        roumieu_compatible: interior.iter().any(|&b| b),
        beurling_compatible: interior.iter().all(|&b| b),
        kmax_used: template.kmax,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::Descriptor;

    fn wide_sine() -> GridFunction {
        let d = Descriptor::Sine {
            amp: 1.0,
            freq: 1.0,
            phase: 0.0,
        };
        GridFunction::from_descriptor(d, (-10.0, 10.0), 1e-3, DecayClaim::B).unwrap()
    }

    fn gaussian(window: (f64, f64), step: f64) -> GridFunction {
        let d = Descriptor::GaussianBump {
            amp: 1.0,
            center: 0.0,
            width: 1.0,
        };
        GridFunction::from_descriptor(d, window, step, DecayClaim::S).unwrap()
    }

    fn unit_bump() -> GridFunction {
        let d = Descriptor::CompactBump {
            amp: 1.0,
            center: 0.0,
            width: 1.0,
        };
        GridFunction::from_descriptor(d, (-2.0, 2.0), 1e-3, DecayClaim::D).unwrap()
    }

    #[test]
    fn sine_sup_quotient_is_one_at_order_zero() {
        let m = WeightSequence::constant_one(12).unwrap();
        let q = SeminormQuery::b(1.0, m);
        let report = seminorm(&wide_sine(), &q).unwrap();
        assert!((report.value - 1.0).abs() < 1e-6, "{}", report.value);
        match report.witness {
            Witness::Point { k, .. } => assert_eq!(k, 0),
            other => panic!("unexpected witness {other:?}"),
        }
    }

    #[test]
    fn zero_function_has_zero_seminorm_in_every_class() {
        let z = GridFunction::from_descriptor(
            Descriptor::Zero,
            (-1.0, 1.0),
            0.01,
            DecayClaim::D,
        )
        .unwrap();
        let m = WeightSequence::gevrey(2.0, 12).unwrap();
        let l = WeightSequence::constant_one(12).unwrap();
        for q in [
            SeminormQuery::b(1.0, m.clone()),
            SeminormQuery::w(1.0, 2.0, m.clone()),
            SeminormQuery::s(1.0, m.clone(), l),
            SeminormQuery::d(1.0, m.clone()),
        ] {
            let report = seminorm(&z, &q).unwrap();
            assert_eq!(report.value, 0.0);
        }
    }

    #[test]
    fn gaussian_integral_quotient_matches_closed_form() {
        // For exp(-x^2) the L^2 norms of the function and its first
        // derivative coincide at (pi/2)^(1/4), and both quotients tie for
        // the supremum; later orders decay under the factorial weights.
        let f = gaussian((-8.0, 8.0), 0.02);
        let m = WeightSequence::gevrey(2.0, 12).unwrap();
        let q = SeminormQuery::w(1.0, 2.0, m).with_kmax(10);
        let report = seminorm(&f, &q).unwrap();
        let expected = (std::f64::consts::PI / 2.0).powf(0.25);
        assert!(
            (report.value - expected).abs() < 1e-6 * expected,
            "{} vs {expected}",
            report.value
        );
        match report.witness {
            Witness::Integral { k } => assert!(k <= 1, "witness order {k}"),
            other => panic!("unexpected witness {other:?}"),
        }
        assert!(report.tail_bound.unwrap() < 1e-20);
    }

    #[test]
    fn finite_difference_path_reproduces_oracle_seminorm() {
        let f = gaussian((-8.0, 8.0), 0.02);
        let sampled = GridFunction::from_samples(
            f.window(),
            f.step(),
            f.samples().to_vec(),
            DecayClaim::S,
        )
        .unwrap();
        let m = WeightSequence::gevrey(2.0, 12).unwrap();
        let oracle = seminorm(&f, &SeminormQuery::w(1.0, 2.0, m.clone()).with_kmax(10)).unwrap();
        let fd = seminorm(&sampled, &SeminormQuery::w(1.0, 2.0, m).with_kmax(4)).unwrap();
        let rel = (oracle.value - fd.value).abs() / oracle.value;
        assert!(rel < 1e-6, "oracle {} vs fd {}", oracle.value, fd.value);
        assert!(fd.fd_noise.unwrap() > 0.0);
    }

    #[test]
    fn fine_grid_high_order_finite_differences_are_refused() {
        let f = gaussian((-8.0, 8.0), 1e-3);
        let sampled = GridFunction::from_samples(
            f.window(),
            f.step(),
            f.samples().to_vec(),
            DecayClaim::S,
        )
        .unwrap();
        let m = WeightSequence::gevrey(2.0, 12).unwrap();
        let err = seminorm(&sampled, &SeminormQuery::b(1.0, m).with_kmax(8)).unwrap_err();
        assert!(matches!(err, Error::Precision(_)), "{err}");
    }

    #[test]
    fn weighted_class_penalizes_distance_from_origin() {
        let f = gaussian((-10.0, 10.0), 0.01);
        let m = WeightSequence::gevrey(2.0, 12).unwrap();
        let l = WeightSequence::constant_one(12).unwrap();
        let q = SeminormQuery::s(4.0, m, l).with_kmax(6).with_pmax(6);
        let report = seminorm(&f, &q).unwrap();
        assert!(report.value.is_finite() && report.value > 0.0);
        match report.witness {
            Witness::WeightedPoint { q, .. } => assert!(q <= 2),
            other => panic!("unexpected witness {other:?}"),
        }
        assert_eq!(report.pmax_used, Some(6));
    }

    #[test]
    fn homogeneity_under_scaling() {
        let f = unit_bump();
        let m = WeightSequence::gevrey(2.0, 12).unwrap();
        let q = SeminormQuery::b(1.0, m);
        let base = seminorm(&f, &q).unwrap().value;
        for lambda in [-2.0, 0.0, 0.5] {
            let scaled = seminorm(&f.scaled(lambda), &q).unwrap().value;
            assert!(
                (scaled - lambda.abs() * base).abs() <= 1e-12 * base.max(1.0),
                "lambda {lambda}: {scaled} vs {}",
                lambda.abs() * base
            );
        }
    }

    #[test]
    fn class_d_demands_the_matching_claim() {
        let f = gaussian((-8.0, 8.0), 0.02);
        let m = WeightSequence::gevrey(2.0, 12).unwrap();
        let err = seminorm(&f, &SeminormQuery::d(1.0, m)).unwrap_err();
        assert!(matches!(err, Error::Domain(_)), "{err}");
    }

    #[test]
    fn radius_sweep_is_monotone_and_classifies_the_bump() {
        let f = unit_bump();
        // Factorial-square weights admit the bump once the radius clears
        // the template's growth constant: every tested radius above it has
        // an interior supremum.
        let m2 = WeightSequence::gevrey(2.0, 12).unwrap();
        let sweep =
            class_diagnostic(&f, &SeminormQuery::d(1.0, m2.clone()), &[4.0, 6.0, 8.0, 12.0])
                .unwrap();
        assert!(sweep.monotone_nonincreasing, "{:?}", sweep.values);
        assert!(sweep.beurling_compatible, "{:?}", sweep.interior);
        // Across small radii the quotients are still climbing at the
        // truncation order: union-style membership only.
        let sweep =
            class_diagnostic(&f, &SeminormQuery::d(1.0, m2), &[0.5, 1.0, 2.0, 4.0]).unwrap();
        assert!(sweep.monotone_nonincreasing);
        assert!(sweep.roumieu_compatible, "{:?}", sweep.interior);
        assert!(!sweep.beurling_compatible, "{:?}", sweep.interior);
        // Constant-one weights (the analytic class) reject it outright.
        let m1 = WeightSequence::constant_one(12).unwrap();
        let sweep =
            class_diagnostic(&f, &SeminormQuery::d(1.0, m1), &[0.5, 1.0, 2.0, 4.0]).unwrap();
        assert!(sweep.monotone_nonincreasing);
        assert!(!sweep.roumieu_compatible, "{:?}", sweep.interior);
    }

    #[test]
    fn integral_quotients_respect_the_window_hoelder_bound() {
        // ||g||_{L^2[a,b]} <= (b-a)^{1/2} sup|g| applied per derivative
        // order forces the same bound between the integral-class and
        // sup-class seminorms over identical weights.
        let f = unit_bump();
        let m = WeightSequence::gevrey(2.0, 12).unwrap();
        let w2 = seminorm(&f, &SeminormQuery::w(1.0, 2.0, m.clone())).unwrap().value;
        let b = seminorm(&f, &SeminormQuery::b(1.0, m)).unwrap().value;
        let (lo, hi) = f.window();
        assert!(
            w2 <= (hi - lo).sqrt() * b * (1.0 + 1e-12),
            "w2 = {w2}, bound = {}",
            (hi - lo).sqrt() * b
        );
    }

    #[test]
    fn entire_function_is_compatible_at_every_radius() {
        let f = wide_sine();
        let m = WeightSequence::constant_one(12).unwrap();
        let sweep =
            class_diagnostic(&f, &SeminormQuery::b(1.0, m), &[0.25, 0.5, 1.0, 2.0]).unwrap();
        assert!(sweep.monotone_nonincreasing);
        assert!(sweep.beurling_compatible);
        assert!(sweep.roumieu_compatible);
    }
}
