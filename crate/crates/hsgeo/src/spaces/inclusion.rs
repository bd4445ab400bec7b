//! Quantitative embedding checks between the weighted classes, specialized
//! to one dimension.
//!
//! Three inequalities are verified numerically on a concrete grid
//! function, each as a measured left-hand side against an explicit
//! right-hand side with its constant:
//!
//! 1. an `L^p` bound on derivatives through a polynomially weighted sup,
//!    with constant `(integral of (1+|x|)^{-2p})^{1/p} = (2/(2p-1))^{1/p}`;
//! 2. a sup bound through the Sobolev norm of order `floor(1/p) + 1`
//!    (constant reported as the measured ratio, not claimed sharp);
//! 3. the interpolation inequality
//!    `||f||_q <= ||f||_p^(p/q) ||f||_inf^(1-p/q)`, which holds with
//!    constant one.
//!
//! Ratios are `lhs / rhs`; a value at most one (up to quadrature slack)
//! means the inequality held. The zero function reports ratio zero.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::simpson;

use super::{GridFunction, BOUNDARY_DECAY_TOL};

/// One derivative order of the weighted-sup bound.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WeightedBoundRow {
    pub alpha: usize,
    /// `||f^(alpha)||_{L^p}` over the window.
    pub lhs: f64,
    /// `C * sup (1+|x|)^2 |f^(alpha)|`.
    pub rhs: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InclusionReport {
    pub p: f64,
    pub q: f64,
    /// `(2/(2p-1))^{1/p}`: the exact weight integral constant.
    pub weight_constant: f64,
    pub weighted_rows: Vec<WeightedBoundRow>,
    /// Sobolev order `floor(1/p) + 1` used in the sup bound.
    pub sobolev_order: usize,
    pub sup_value: f64,
    /// Sum of `||f^(j)||_{L^p}` for `j` up to the Sobolev order.
    pub sobolev_norm: f64,
    pub sobolev_ratio: f64,
    pub interpolation_lhs: f64,
    pub interpolation_rhs: f64,
    pub interpolation_ratio: f64,
    pub boundary_magnitude: f64,
}

fn ratio(lhs: f64, rhs: f64) -> f64 {
    if rhs == 0.0 {
        if lhs == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        lhs / rhs
    }
}

fn lp_norm(values: &[f64], h: f64, p: f64) -> f64 {
    let integrand: Vec<f64> = values.iter().map(|v| v.abs().powf(p)).collect();
    simpson(&integrand, h).max(0.0).powf(1.0 / p)
}

/// Measures the three embedding inequalities on `f` for exponents
/// `1 <= p < q`, with the weighted-sup bound checked for derivative
/// orders `0..=alpha_max`.
pub fn inclusion_report(
    f: &GridFunction,
    p: f64,
    q: f64,
    alpha_max: usize,
) -> Result<InclusionReport> {
    if !(p >= 1.0 && p.is_finite() && q > p && q.is_finite()) {
        return Err(Error::Domain(format!(
            "need finite exponents 1 <= p < q, got p = {p}, q = {q}"
        )));
    }
    if alpha_max > 6 {
        return Err(Error::Domain(format!(
            "weighted bound supports derivative orders <= 6, got {alpha_max}"
        )));
    }
    let peak = f.peak();
    let boundary = f.boundary_magnitude();
    if peak > 0.0 && boundary > BOUNDARY_DECAY_TOL * peak {
        return Err(Error::Domain(format!(
            "boundary magnitude {boundary:.3e} exceeds {BOUNDARY_DECAY_TOL:.0e} of peak \
             {peak:.3e}; the window truncation would contaminate the integrals"
        )));
    }

    let h = f.step();
    let weight_constant = (2.0 / (2.0 * p - 1.0)).powf(1.0 / p);
    let mut weighted_rows = Vec::with_capacity(alpha_max + 1);
    for alpha in 0..=alpha_max {
        let grid = f.derivative_grid(alpha)?;
        let lhs = lp_norm(&grid.values, h, p);
        let weighted_sup = grid
            .values
            .iter()
            .enumerate()
            .map(|(i, v)| (1.0 + f.x(i).abs()).powi(2) * v.abs())
            .fold(0.0f64, f64::max);
        let rhs = weight_constant * weighted_sup;
        weighted_rows.push(WeightedBoundRow {
            alpha,
            lhs,
            rhs,
            ratio: ratio(lhs, rhs),
        });
    }

    let sobolev_order = (1.0 / p).floor() as usize + 1;
    let mut sobolev_norm = 0.0;
    for j in 0..=sobolev_order {
        let grid = f.derivative_grid(j)?;
        sobolev_norm += lp_norm(&grid.values, h, p);
    }
    let sup_value = peak;

    let lp = lp_norm(f.samples(), h, p);
    let lq = lp_norm(f.samples(), h, q);
    let interpolation_rhs = lp.powf(p / q) * sup_value.powf(1.0 - p / q);

    Ok(InclusionReport {
        p,
        q,
        weight_constant,
        weighted_rows,
        sobolev_order,
        sup_value,
        sobolev_norm,
        sobolev_ratio: ratio(sup_value, sobolev_norm),
        interpolation_lhs: lq,
        interpolation_rhs,
        interpolation_ratio: ratio(lq, interpolation_rhs),
        boundary_magnitude: boundary,
    })
}
