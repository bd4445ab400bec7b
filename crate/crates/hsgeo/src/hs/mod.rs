//! Geodesics of the right-invariant H^1-type metric on maps of the line
//! written as identity plus a decaying perturbation.
//!
//! The square-root slope substitution `gamma = 2 (sqrt(1 + f') - 1)` sends
//! the geodesic flow to straight lines in a flat L^2 space, so two-point
//! and initial-value geodesics reduce to affine interpolation of the
//! transformed coordinate followed by a prefix integral back. The module
//! carries the transform pair, distance (computed along two independent
//! routes and cross-checked), the right-end shift a geodesic picks up when
//! it leaves the zero-end-value subgroup, blow-up detection with the
//! continuation into the monoid of monotone maps, and a finite-difference
//! integrator for the velocity form of the flow that serves as an
//! independent oracle (see [`pde`]).
//!
//! Blow-up happens exactly where the transformed coordinate reaches -2,
//! i.e. where the slope of the map touches zero; past that parameter the
//! straight line still integrates back to a monotone, surjective map, just
//! no longer an invertible one, and everything downstream flags the result
//! instead of failing.

mod pde;

pub use pde::{compare_with_line, pde_oracle, PdeRun};

use serde::{Deserialize, Serialize};

use crate::diffeo::{meet_claims, sampled_grid};
use crate::error::{Error, Result};
use crate::numerics::{cumulative_simpson, simpson};
use crate::spaces::{DecayClaim, GridFunction};

/// Transformed coordinates at or below `-2 + BLOWUP_TOL` count as touching
/// the monoid boundary.
pub const BLOWUP_TOL: f64 = 1e-10;

/// Slopes `1 + f'` above `-DERIV_CLAMP` are treated as exact zeros so that
/// round-off at a genuine boundary touch never produces a negative number
/// under the square root.
pub const DERIV_CLAMP: f64 = 1e-14;

/// A perturbation (or tangent) must vanish at its anchor to this fraction
/// of its peak.
pub const ANCHOR_DECAY_TOL: f64 = 1e-8;

/// Agreement demanded of the two independent distance quadratures.
pub const DISTANCE_ROUTE_TOL: f64 = 1e-8;

/// Relative agreement demanded of the closed-form and measured shift, and
/// the gate on the end-value constraint of the shift's endpoints.
pub const SHIFT_TOL: f64 = 1e-6;

/// Where the prefix integral that rebuilds a map from its transformed
/// coordinate is anchored: at the left window edge (the numerical
/// surrogate of minus infinity) or at a chosen grid node.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum BasepointRule {
    LeftInfinity,
    FixedPoint { x0: f64 },
}

/// A monotone map `x + f(x)` with `f` vanishing at its anchor.
///
/// `derivative_floor` is the infimum of `1 + f'` over the grid; it is
/// strictly positive for invertible maps (`in_group`) and zero for
/// boundary or continued monoid elements. Maps built by [`r_inverse`] and
/// the geodesic constructors carry their slope grid exactly (the
/// integrand of the reconstruction), not a finite-difference estimate.
#[derive(Debug, Clone)]
pub struct HsDiffeo {
    f: GridFunction,
    deriv: Vec<f64>,
    derivative_floor: f64,
    in_group: bool,
    basepoint: BasepointRule,
    notes: Vec<String>,
}

impl HsDiffeo {
    /// Wraps a perturbation anchored at the left window edge.
    pub fn new(f: GridFunction) -> Result<Self> {
        Self::with_basepoint(f, BasepointRule::LeftInfinity)
    }

    /// The identity map on the given grid.
    pub fn identity(window: (f64, f64), step: f64) -> Result<Self> {
        let n = ((window.1 - window.0) / step).round() as usize + 1;
        let zeros = vec![0.0; n];
        Self::new(GridFunction::from_samples(
            window,
            step,
            zeros,
            DecayClaim::D,
        )?)
    }

    /// Wraps a perturbation anchored by the given rule. The sample at the
    /// anchor must vanish to [`ANCHOR_DECAY_TOL`] of the peak, and the
    /// slope `1 + f'` may not be negative beyond [`DERIV_CLAMP`].
    pub fn with_basepoint(f: GridFunction, basepoint: BasepointRule) -> Result<Self> {
        let anchor_value = match basepoint {
            BasepointRule::LeftInfinity => f.samples()[0],
            BasepointRule::FixedPoint { x0 } => {
                let j = anchor_node(f.window(), f.step(), f.len(), x0)?;
                f.samples()[j]
            }
        };
        let scale = f.peak();
        if anchor_value.abs() > ANCHOR_DECAY_TOL * scale {
            return Err(Error::Domain(format!(
                "the perturbation must vanish at its anchor: |f| = {:.3e} there \
                 against peak {scale:.3e}",
                anchor_value.abs()
            )));
        }
        let deriv = f.derivative_grid(1)?.values;
        let mut floor = f64::INFINITY;
        for (i, &d) in deriv.iter().enumerate() {
            let mut v = 1.0 + d;
            if v < 0.0 {
                if v >= -DERIV_CLAMP {
                    v = 0.0;
                } else {
                    return Err(Error::Domain(format!(
                        "slope 1 + f' = {v:.3e} < 0 at x = {:.6}; not a monotone map",
                        f.x(i)
                    )));
                }
            }
            floor = floor.min(v);
        }
        let in_group = floor > 0.0;
        Ok(HsDiffeo {
            f,
            deriv,
            derivative_floor: floor,
            in_group,
            basepoint,
            notes: Vec::new(),
        })
    }

    pub fn perturbation(&self) -> &GridFunction {
        &self.f
    }

    /// Nodal values of `f'`.
    pub fn deriv(&self) -> &[f64] {
        &self.deriv
    }

    /// Infimum of `1 + f'` over the grid (clamped at zero).
    pub fn derivative_floor(&self) -> f64 {
        self.derivative_floor
    }

    /// Whether the map is invertible (slope strictly positive) rather than
    /// a monoid element.
    pub fn in_group(&self) -> bool {
        self.in_group
    }

    pub fn basepoint(&self) -> BasepointRule {
        self.basepoint
    }

    pub fn notes(&self) -> &[String] {
        &self.notes
    }
}

/// The transformed coordinate of a map: a grid function with values in
/// `[-2, inf)`, together with its floor and the anchoring rule it was
/// produced under.
#[derive(Debug, Clone)]
pub struct RCoord {
    gamma: GridFunction,
    floor: f64,
    basepoint: BasepointRule,
    notes: Vec<String>,
}

impl RCoord {
    /// Wraps a coordinate grid, rejecting values below the -2 floor
    /// (beyond round-off). Lines that cross the floor belong to
    /// [`blowup_monoid`], not here.
    pub fn new(gamma: GridFunction, basepoint: BasepointRule) -> Result<Self> {
        let mut floor = f64::INFINITY;
        for &g in gamma.samples() {
            floor = floor.min(g);
        }
        if floor < -2.0 {
            if floor >= -2.0 - 1e-12 {
                floor = -2.0;
            } else {
                return Err(Error::Domain(format!(
                    "coordinate reaches {floor:.9} below the -2 floor; use the \
                     blow-up continuation for lines that cross it"
                )));
            }
        }
        Ok(RCoord {
            gamma,
            floor,
            basepoint,
            notes: Vec::new(),
        })
    }

    pub fn gamma(&self) -> &GridFunction {
        &self.gamma
    }

    /// Infimum of the coordinate over the grid (at least -2).
    pub fn floor(&self) -> f64 {
        self.floor
    }

    pub fn basepoint(&self) -> BasepointRule {
        self.basepoint
    }

    pub fn notes(&self) -> &[String] {
        &self.notes
    }

    /// Whether the coordinate stays strictly above the boundary, i.e. maps
    /// back to an invertible element.
    pub fn in_group_image(&self) -> bool {
        self.floor > -2.0 + BLOWUP_TOL
    }

    /// Leftmost point where the coordinate touches the -2 boundary, if it
    /// does anywhere on the grid.
    pub fn first_contact(&self) -> Option<f64> {
        locate_first_contact(self.gamma.samples(), self.gamma.window(), self.gamma.step())
    }
}

/// Leftmost boundary touch of a sampled coordinate, refined by linear
/// interpolation across the crossing cell.
fn locate_first_contact(gamma: &[f64], window: (f64, f64), step: f64) -> Option<f64> {
    let hit = gamma.iter().position(|&g| g <= -2.0 + BLOWUP_TOL)?;
    if hit == 0 {
        return Some(window.0);
    }
    let g_prev = gamma[hit - 1];
    let g_hit = gamma[hit];
    let x_prev = window.0 + (hit - 1) as f64 * step;
    if g_hit >= g_prev {
        return Some(x_prev + step);
    }
    let frac = (-2.0 - g_prev) / (g_hit - g_prev);
    Some(x_prev + step * frac.clamp(0.0, 1.0))
}

fn anchor_node(window: (f64, f64), step: f64, n: usize, x0: f64) -> Result<usize> {
    let t = (x0 - window.0) / step;
    let j = t.round();
    if (t - j).abs() > 1e-9 * t.abs().max(1.0) || j < 0.0 || j > (n - 1) as f64 {
        return Err(Error::Domain(format!(
            "basepoint x0 = {x0} is not a grid node of [{}, {}] at step {step}",
            window.0, window.1
        )));
    }
    Ok(j as usize)
}

fn peak_abs(values: &[f64]) -> f64 {
    values.iter().fold(0.0f64, |a, &v| a.max(v.abs()))
}

fn require_group(phi: &HsDiffeo, what: &str) -> Result<()> {
    if !phi.in_group {
        return Err(Error::Domain(format!(
            "{what} must be invertible (derivative floor {:.3e})",
            phi.derivative_floor
        )));
    }
    Ok(())
}

fn same_grid(a: &HsDiffeo, b: &HsDiffeo) -> Result<()> {
    if a.f.window() != b.f.window() || a.f.step() != b.f.step() || a.f.len() != b.f.len() {
        return Err(Error::GridMismatch(format!(
            "maps live on different grids: {:?} at step {} vs {:?} at step {}",
            a.f.window(),
            a.f.step(),
            b.f.window(),
            b.f.step()
        )));
    }
    if a.basepoint != b.basepoint {
        return Err(Error::Domain(
            "maps use different basepoint rules".to_string(),
        ));
    }
    Ok(())
}

/// The coordinate of a map: `gamma = 2 (sqrt(1 + f') - 1)` pointwise, with
/// the floor computed from the map's derivative floor. Slopes inside the
/// round-off clamp count as exact boundary touches.
pub fn r_transform(phi: &HsDiffeo) -> Result<RCoord> {
    let f = phi.perturbation();
    let n = f.len();
    let mut g = Vec::with_capacity(n);
    for i in 0..n {
        let mut v = 1.0 + phi.deriv[i];
        if v < 0.0 {
            if v >= -DERIV_CLAMP {
                v = 0.0;
            } else {
                return Err(Error::Domain(format!(
                    "slope 1 + f' = {v:.3e} < 0 at x = {:.6}",
                    f.x(i)
                )));
            }
        }
        g.push(2.0 * (v.sqrt() - 1.0));
    }
    let mut notes = Vec::new();
    let grid = sampled_grid(f.window(), f.step(), g, f.claim(), &mut notes)?;
    Ok(RCoord {
        gamma: grid,
        floor: 2.0 * (phi.derivative_floor.sqrt() - 1.0),
        basepoint: phi.basepoint,
        notes,
    })
}

/// The map with coordinate `gamma`: `x + quarter prefix integral of
/// gamma (gamma + 4)` from the anchor. The slope grid of the result is the
/// integrand itself, so transforming back reproduces `gamma` to round-off.
pub fn r_inverse(rc: &RCoord) -> Result<HsDiffeo> {
    integrate_gamma(
        rc.gamma.samples(),
        rc.gamma.window(),
        rc.gamma.step(),
        rc.gamma.claim(),
        rc.basepoint,
    )
}

/// Prefix-integrates a coordinate line back to a map. Shared by
/// [`r_inverse`], the geodesic constructors, and the monoid continuation
/// (which feeds coordinates below -2; the reconstruction stays monotone
/// because the integrand is bounded below by -1 for every real value).
fn integrate_gamma(
    gamma: &[f64],
    window: (f64, f64),
    step: f64,
    claim: DecayClaim,
    basepoint: BasepointRule,
) -> Result<HsDiffeo> {
    let n = gamma.len();
    let mut w = Vec::with_capacity(n);
    let mut gamma_floor = f64::INFINITY;
    for &g in gamma {
        gamma_floor = gamma_floor.min(g);
        w.push(0.25 * g * (g + 4.0));
    }
    let mut notes = Vec::new();
    let edge = w[0].abs();
    match claim {
        DecayClaim::D => {}
        DecayClaim::S | DecayClaim::W { .. } => {
            let tail = edge * (1.0 + window.0.abs());
            if tail > 0.0 {
                notes.push(format!(
                    "left-tail contribution to the prefix integral bounded by {tail:.3e} \
                     (quadratic decay model from the edge value {edge:.3e})"
                ));
            }
        }
        DecayClaim::B | DecayClaim::None => {
            let peak = peak_abs(&w);
            if edge > ANCHOR_DECAY_TOL * peak.max(f64::MIN_POSITIVE) {
                return Err(Error::Domain(format!(
                    "cannot bound the left tail: the integrand is {edge:.3e} at the left \
                     edge against peak {peak:.3e} and the claim {claim:?} gives no \
                     integrable model; widen the window or strengthen the claim"
                )));
            }
        }
    }
    let prefix = cumulative_simpson(&w, step);
    let offset = match basepoint {
        BasepointRule::LeftInfinity => 0.0,
        BasepointRule::FixedPoint { x0 } => {
            let j = anchor_node(window, step, n, x0)?;
            prefix[j]
        }
    };
    let f: Vec<f64> = prefix.iter().map(|p| p - offset).collect();
    for i in 1..n {
        let rise = step + (f[i] - f[i - 1]);
        if rise < -step * 1e-9 - 1e-12 {
            return Err(Error::Invariant(format!(
                "reconstructed map loses monotonicity near x = {:.6} (cell rise \
                 {rise:.3e}); refine the grid",
                window.0 + i as f64 * step
            )));
        }
    }
    let span = (window.1 + f[n - 1]) - (window.0 + f[0]);
    if !(span >= 0.0) {
        return Err(Error::Invariant(format!(
            "reconstructed map fails to span its window image: total rise {span:.3e}"
        )));
    }
    let grid = sampled_grid(window, step, f, DecayClaim::B, &mut notes)?;
    let half_slope = 1.0 + 0.5 * gamma_floor;
    let derivative_floor = if gamma_floor <= -2.0 {
        0.0
    } else {
        half_slope * half_slope
    };
    Ok(HsDiffeo {
        f: grid,
        deriv: w,
        derivative_floor,
        in_group: gamma_floor > -2.0 + BLOWUP_TOL,
        basepoint,
        notes,
    })
}

/// Point `t` on the unique geodesic through two invertible maps on the
/// same grid: affine interpolation of the coordinates followed by the
/// prefix integral back. Parameters outside the blow-up interval come
/// back flagged as monoid elements (with a note), never as errors.
///
/// Support localization is enforced: wherever both endpoint coordinates
/// vanish to threshold, the interpolant must too.
pub fn geodesic_bvp(phi0: &HsDiffeo, phi1: &HsDiffeo, t: f64) -> Result<HsDiffeo> {
    require_group(phi0, "geodesic endpoint")?;
    require_group(phi1, "geodesic endpoint")?;
    same_grid(phi0, phi1)?;
    if !t.is_finite() {
        return Err(Error::Domain("geodesic parameter must be finite".to_string()));
    }
    let g0 = r_transform(phi0)?;
    let g1 = r_transform(phi1)?;
    let a = g0.gamma.samples();
    let b = g1.gamma.samples();
    let n = a.len();
    let mut gt = Vec::with_capacity(n);
    for i in 0..n {
        gt.push((1.0 - t) * a[i] + t * b[i]);
    }
    let thr = 1e-10 * peak_abs(a).max(peak_abs(b)).max(1.0);
    let spread = (1.0 - t).abs() + t.abs() + 1.0;
    for i in 0..n {
        if a[i].abs() <= thr && b[i].abs() <= thr && gt[i].abs() > spread * thr {
            return Err(Error::Invariant(format!(
                "support localization failed at x = {:.6}: interpolant {:.3e} where \
                 both endpoint coordinates are below {thr:.3e}",
                phi0.f.x(i),
                gt[i].abs()
            )));
        }
    }
    let claim = meet_claims(g0.gamma.claim(), g1.gamma.claim());
    let mut out = integrate_gamma(&gt, phi0.f.window(), phi0.f.step(), claim, phi0.basepoint)?;
    if !out.in_group {
        let floor = gt.iter().fold(f64::INFINITY, |m, &v| m.min(v));
        out.notes.push(format!(
            "outside the group at t = {t}: coordinate floor {floor:.6e} (monoid element)"
        ));
    }
    Ok(out)
}

/// Point `t` on the geodesic shot from an invertible map with initial
/// velocity `h` (a perturbation-class tangent on the same grid): the
/// coordinate moves along `gamma_0 + t h' / (1 + gamma_0 / 2)`, the
/// pointwise derivative of the transform at the base map.
pub fn geodesic_ivp(phi0: &HsDiffeo, h: &GridFunction, t: f64) -> Result<HsDiffeo> {
    require_group(phi0, "initial point")?;
    if h.window() != phi0.f.window() || h.step() != phi0.f.step() || h.len() != phi0.f.len() {
        return Err(Error::GridMismatch(
            "tangent grid differs from the map grid".to_string(),
        ));
    }
    let hpk = h.peak();
    if hpk > 0.0 && h.samples()[0].abs() > ANCHOR_DECAY_TOL * hpk {
        return Err(Error::Domain(format!(
            "tangent must vanish at the left edge: |h| = {:.3e} against peak {hpk:.3e}",
            h.samples()[0].abs()
        )));
    }
    if !t.is_finite() {
        return Err(Error::Domain("geodesic parameter must be finite".to_string()));
    }
    let hp = h.derivative_grid(1)?.values;
    let g0 = r_transform(phi0)?;
    let a = g0.gamma.samples();
    let n = a.len();
    let mut gt = Vec::with_capacity(n);
    for i in 0..n {
        let sqrt_slope = 1.0 + 0.5 * a[i];
        gt.push(a[i] + t * hp[i] / sqrt_slope);
    }
    let claim = meet_claims(g0.gamma.claim(), h.claim());
    let mut out = integrate_gamma(&gt, phi0.f.window(), phi0.f.step(), claim, phi0.basepoint)?;
    if !out.in_group {
        let floor = gt.iter().fold(f64::INFINITY, |m, &v| m.min(v));
        out.notes.push(format!(
            "outside the group at t = {t}: coordinate floor {floor:.6e} (monoid element)"
        ));
    }
    Ok(out)
}

/// Geodesic distance between two invertible maps, with both quadrature
/// routes exposed: directly from the slopes, and as the flat norm of the
/// coordinate difference. The two are algebraically identical; their
/// numerical gap is asserted below [`DISTANCE_ROUTE_TOL`].
#[derive(Debug, Clone, Copy, Serialize)]
pub struct DistanceReport {
    pub value: f64,
    /// `integral of 4 (sqrt(1 + f1') - sqrt(1 + f0'))^2`.
    pub direct_sq: f64,
    /// `integral of (gamma_1 - gamma_0)^2`.
    pub rcoord_sq: f64,
    pub relative_gap: f64,
}

pub fn distance(phi0: &HsDiffeo, phi1: &HsDiffeo) -> Result<DistanceReport> {
    require_group(phi0, "distance argument")?;
    require_group(phi1, "distance argument")?;
    same_grid(phi0, phi1)?;
    let n = phi0.f.len();
    let step = phi0.f.step();
    let mut direct = Vec::with_capacity(n);
    for i in 0..n {
        let d = (1.0 + phi1.deriv[i]).max(0.0).sqrt() - (1.0 + phi0.deriv[i]).max(0.0).sqrt();
        direct.push(4.0 * d * d);
    }
    let peak = peak_abs(&direct);
    let edge = direct[0].max(direct[n - 1]);
    if peak > 0.0 && edge > ANCHOR_DECAY_TOL * peak {
        return Err(Error::Domain(format!(
            "window too small: the distance integrand is {edge:.3e} at an edge \
             against peak {peak:.3e}"
        )));
    }
    let g0 = r_transform(phi0)?;
    let g1 = r_transform(phi1)?;
    let a = g0.gamma.samples();
    let b = g1.gamma.samples();
    let mut flat = Vec::with_capacity(n);
    for i in 0..n {
        let d = b[i] - a[i];
        flat.push(d * d);
    }
    let direct_sq = simpson(&direct, step);
    let rcoord_sq = simpson(&flat, step);
    let scale = direct_sq.abs().max(rcoord_sq.abs());
    let relative_gap = if scale > 0.0 {
        (direct_sq - rcoord_sq).abs() / scale
    } else {
        0.0
    };
    if relative_gap > DISTANCE_ROUTE_TOL {
        return Err(Error::Invariant(format!(
            "the two distance quadratures disagree: {direct_sq:.12e} vs {rcoord_sq:.12e} \
             (relative gap {relative_gap:.3e})"
        )));
    }
    Ok(DistanceReport {
        value: direct_sq.max(0.0).sqrt(),
        direct_sq,
        rcoord_sq,
        relative_gap,
    })
}

/// Right-end shift of a two-point geodesic: the closed form
/// `(t^2 - t)/4` times the squared flat norm of the coordinate difference,
/// against the directly measured end value of the reconstructed
/// perturbation. The endpoints must satisfy the zero-end-value constraint
/// `integral of gamma (gamma + 4) = 0` to [`SHIFT_TOL`] of its absolute
/// scale.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ShiftReport {
    pub closed_form: f64,
    /// Right window edge value of the geodesic's perturbation.
    pub measured: f64,
    /// Squared flat norm of the coordinate difference.
    pub delta_r_norm_sq: f64,
    /// End-value constraint integrals of the two endpoints.
    pub constraint_residuals: (f64, f64),
    /// Parameters where the interpolating line's end value vanishes, i.e.
    /// where the geodesic meets the zero-end-value subgroup (at most two
    /// solutions of a quadratic; reported, not asserted).
    pub group_crossings: Option<(f64, f64)>,
}

pub fn shift_r(phi0: &HsDiffeo, phi1: &HsDiffeo, t: f64) -> Result<ShiftReport> {
    require_group(phi0, "shift endpoint")?;
    require_group(phi1, "shift endpoint")?;
    same_grid(phi0, phi1)?;
    let g0 = r_transform(phi0)?;
    let g1 = r_transform(phi1)?;
    let a = g0.gamma.samples();
    let b = g1.gamma.samples();
    let n = a.len();
    let step = phi0.f.step();
    let constraint = |g: &[f64]| -> (f64, f64) {
        let val: Vec<f64> = g.iter().map(|&v| v * (v + 4.0)).collect();
        let scl: Vec<f64> = g.iter().map(|&v| v.abs() * (v.abs() + 4.0)).collect();
        (simpson(&val, step), simpson(&scl, step))
    };
    let (c0, s0) = constraint(a);
    let (c1, s1) = constraint(b);
    for (which, c, s) in [("first", c0, s0), ("second", c1, s1)] {
        if c.abs() > SHIFT_TOL * s.max(f64::MIN_POSITIVE) {
            return Err(Error::Domain(format!(
                "end-value constraint fails for the {which} map: integral {c:.3e} \
                 against scale {s:.3e}; calibrate the endpoints"
            )));
        }
    }
    let mut diff_sq = Vec::with_capacity(n);
    for i in 0..n {
        let d = b[i] - a[i];
        diff_sq.push(d * d);
    }
    let delta_r_norm_sq = simpson(&diff_sq, step);
    let closed_form = 0.25 * (t * t - t) * delta_r_norm_sq;
    let path = geodesic_bvp(phi0, phi1, t)?;
    let measured = *path.f.samples().last().unwrap();
    let allowance = 0.25 * ((1.0 - t).abs() * c0.abs() + t.abs() * c1.abs())
        + SHIFT_TOL * closed_form.abs()
        + 1e-9 * (delta_r_norm_sq + 1.0);
    if (measured - closed_form).abs() > allowance {
        return Err(Error::Invariant(format!(
            "shift mismatch at t = {t}: closed form {closed_form:.12e}, measured end \
             value {measured:.12e}, allowance {allowance:.3e}"
        )));
    }
    let e0 = 0.25 * c0;
    let e1 = 0.25 * c1;
    let qa = 0.25 * delta_r_norm_sq;
    let group_crossings = quadratic_roots(qa, e1 - e0 - qa, e0);
    Ok(ShiftReport {
        closed_form,
        measured,
        delta_r_norm_sq,
        constraint_residuals: (c0, c1),
        group_crossings,
    })
}

/// Real roots of `a t^2 + b t + c`, smallest first, in the numerically
/// stable form; `None` when the leading coefficient vanishes or the
/// discriminant is negative.
fn quadratic_roots(a: f64, b: f64, c: f64) -> Option<(f64, f64)> {
    if a == 0.0 || !a.is_finite() {
        return None;
    }
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return None;
    }
    let sgn = if b >= 0.0 { 1.0 } else { -1.0 };
    let q = -0.5 * (b + sgn * disc.sqrt());
    let (r1, r2) = if q == 0.0 {
        (0.0, 0.0)
    } else {
        (q / a, c / q)
    };
    Some(if r1 <= r2 { (r1, r2) } else { (r2, r1) })
}

/// How the coordinate line of [`blowup_monoid`] is determined: through a
/// second invertible map, or shot along a tangent at the base map.
pub enum GeodesicSpec<'a> {
    Endpoint(&'a HsDiffeo),
    Tangent(&'a GridFunction),
}

/// A coordinate line `gamma_base + t gamma_dir` with its open interval of
/// parameters that stay strictly above the -2 floor at every node, and a
/// sampler for the (possibly continued) map at any parameter.
#[derive(Debug, Clone)]
pub struct MonoidContinuation {
    gamma_base: Vec<f64>,
    gamma_dir: Vec<f64>,
    window: (f64, f64),
    step: f64,
    claim: DecayClaim,
    basepoint: BasepointRule,
    t_lo: f64,
    t_hi: f64,
}

/// The map at one parameter of a coordinate line, with the boundary
/// diagnostics: the coordinate floor, whether the map is still
/// invertible, and the leftmost boundary touch when it is not.
#[derive(Debug, Clone)]
pub struct MonoidPoint {
    pub phi: HsDiffeo,
    pub in_group: bool,
    pub gamma_floor: f64,
    pub first_contact: Option<f64>,
}

/// Builds the coordinate line through `phi0` determined by `spec` and
/// intersects the per-node affine constraints `gamma(t) > -2` into the
/// open interval where the line stays in the invertible range. Outside
/// the interval [`MonoidContinuation::at`] still reconstructs a map; it is
/// monotone and spans its window image, just not invertible.
pub fn blowup_monoid(phi0: &HsDiffeo, spec: GeodesicSpec) -> Result<MonoidContinuation> {
    require_group(phi0, "base point")?;
    let g0 = r_transform(phi0)?;
    let base = g0.gamma.samples().to_vec();
    let (dir, claim) = match spec {
        GeodesicSpec::Endpoint(phi1) => {
            require_group(phi1, "second endpoint")?;
            same_grid(phi0, phi1)?;
            let g1 = r_transform(phi1)?;
            let d: Vec<f64> = g1
                .gamma
                .samples()
                .iter()
                .zip(&base)
                .map(|(&b, &a)| b - a)
                .collect();
            (d, meet_claims(g0.gamma.claim(), g1.gamma.claim()))
        }
        GeodesicSpec::Tangent(h) => {
            if h.window() != phi0.f.window()
                || h.step() != phi0.f.step()
                || h.len() != phi0.f.len()
            {
                return Err(Error::GridMismatch(
                    "tangent grid differs from the map grid".to_string(),
                ));
            }
            let hpk = h.peak();
            if hpk > 0.0 && h.samples()[0].abs() > ANCHOR_DECAY_TOL * hpk {
                return Err(Error::Domain(format!(
                    "tangent must vanish at the left edge: |h| = {:.3e} against \
                     peak {hpk:.3e}",
                    h.samples()[0].abs()
                )));
            }
            let hp = h.derivative_grid(1)?;
            // Slopes below the finite-difference noise floor are exact
            // zeros for interval purposes: a constant plateau must not
            // generate spurious finite bounds out of rounding residue.
            let clamp = 8.0 * hp.noise_floor;
            let d: Vec<f64> = hp
                .values
                .iter()
                .zip(&base)
                .map(|(&p, &a)| {
                    if p.abs() <= clamp {
                        0.0
                    } else {
                        p / (1.0 + 0.5 * a)
                    }
                })
                .collect();
            (d, meet_claims(g0.gamma.claim(), h.claim()))
        }
    };
    let mut t_lo = f64::NEG_INFINITY;
    let mut t_hi = f64::INFINITY;
    for i in 0..base.len() {
        let margin = base[i] + 2.0;
        let slope = dir[i];
        if slope > 0.0 {
            t_lo = t_lo.max(-margin / slope);
        } else if slope < 0.0 {
            t_hi = t_hi.min(-margin / slope);
        }
    }
    Ok(MonoidContinuation {
        gamma_base: base,
        gamma_dir: dir,
        window: phi0.f.window(),
        step: phi0.f.step(),
        claim,
        basepoint: phi0.basepoint,
        t_lo,
        t_hi,
    })
}

impl MonoidContinuation {
    /// Open parameter interval on which the line stays strictly above the
    /// -2 floor at every grid node; either end may be infinite.
    pub fn interval(&self) -> (f64, f64) {
        (self.t_lo, self.t_hi)
    }

    /// Reconstructs the map at parameter `t`, continued past the interval
    /// when necessary.
    pub fn at(&self, t: f64) -> Result<MonoidPoint> {
        if !t.is_finite() {
            return Err(Error::Domain("parameter must be finite".to_string()));
        }
        let n = self.gamma_base.len();
        let mut g = Vec::with_capacity(n);
        let mut floor = f64::INFINITY;
        for i in 0..n {
            let v = self.gamma_base[i] + t * self.gamma_dir[i];
            floor = floor.min(v);
            g.push(v);
        }
        let mut phi = integrate_gamma(&g, self.window, self.step, self.claim, self.basepoint)?;
        let first_contact = if floor <= -2.0 + BLOWUP_TOL {
            locate_first_contact(&g, self.window, self.step)
        } else {
            None
        };
        if !phi.in_group {
            phi.notes.push(format!(
                "outside the group at t = {t}: coordinate floor {floor:.6e}"
            ));
        }
        Ok(MonoidPoint {
            in_group: phi.in_group,
            gamma_floor: floor,
            first_contact,
            phi,
        })
    }
}
