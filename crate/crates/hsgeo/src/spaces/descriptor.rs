//! Analytic function descriptors with derivative oracles.
//!
//! Every descriptor can evaluate itself and its derivatives to moderate
//! order in closed form, which is what lets seminorm code avoid finite
//! differences when the input is analytic. The compact bump template is
//! `chi(u) = exp(1 - 1/(1 - u^2))` on (-1, 1), normalized to unit peak;
//! its derivatives are `N_k(u) (1-u^2)^{-2k} chi(u)` for polynomials
//! `N_k` built by a simple recursion.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::HermiteGrid;

/// Highest derivative order the oracles support.
pub const ORACLE_KMAX: usize = 24;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Descriptor {
    Zero,
    GaussianBump { amp: f64, center: f64, width: f64 },
    CompactBump { amp: f64, center: f64, width: f64 },
    Sine { amp: f64, freq: f64, phase: f64 },
    /// Bump train `sum_n (1/n) chi(lambda_n (x - 2n))`, `n <= n_max`.
    /// The wire tag keeps the scenario-schema name.
    #[serde(rename = "lemma157")]
    HarmonicTrain { n_max: usize },
    /// Antiderivative from 0 of the same bump train.
    ThetaSeries { n_max: usize },
}

/// Scale factor of the n-th train bump. The growth law is logarithmic;
/// it is clamped at 1 so every bump support `[2n - 1/l, 2n + 1/l]` stays
/// inside `(2n-1, 2n+1)` and the supports are pairwise disjoint, which the
/// per-bump norm identities rely on. The clamp only affects n <= 2.
pub fn train_rate(n: usize) -> f64 {
    (n as f64).ln().max(1.0)
}

/// Amplitude of the n-th train bump.
pub fn train_amp(n: usize) -> f64 {
    1.0 / n as f64
}

const CHI_TABLE_LEN: usize = 1 << 15;

fn chi_raw(u: f64) -> f64 {
    if u.abs() >= 1.0 {
        0.0
    } else {
        (1.0 - 1.0 / (1.0 - u * u)).exp()
    }
}

struct ChiDerivatives {
    /// `polys[k]` holds `N_k` with `chi^(k)(u) = N_k(u) (1-u^2)^{-2k} chi(u)`.
    polys: Vec<Vec<f64>>,
}

fn poly_derive(p: &[f64]) -> Vec<f64> {
    if p.len() <= 1 {
        return vec![0.0];
    }
    (1..p.len()).map(|i| i as f64 * p[i]).collect()
}

fn poly_mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_add(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] += y;
    }
    out
}

fn poly_eval(p: &[f64], x: f64) -> f64 {
    let mut acc = 0.0;
    for c in p.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

fn chi_derivative_polys() -> &'static ChiDerivatives {
    static CELL: OnceLock<ChiDerivatives> = OnceLock::new();
    CELL.get_or_init(|| {
        // N_{k+1} = N_k' (1-u^2)^2 + (4k u (1-u^2) - 2u) N_k, N_0 = 1.
        let one_minus_sq = vec![1.0, 0.0, -1.0];
        let sq = poly_mul(&one_minus_sq, &one_minus_sq);
        let mut polys = vec![vec![1.0]];
        for k in 0..ORACLE_KMAX {
            let nk = &polys[k];
            let lead = poly_mul(&poly_derive(nk), &sq);
            let mut factor = poly_mul(&[0.0, 4.0 * k as f64], &one_minus_sq);
            factor = poly_add(&factor, &[0.0, -2.0]);
            polys.push(poly_add(&lead, &poly_mul(&factor, nk)));
        }
        ChiDerivatives { polys }
    })
}

/// Unit-peak compact bump on (-1, 1).
pub fn chi(u: f64) -> f64 {
    chi_raw(u)
}

/// `chi^(k)(u)`; identically zero outside (-1, 1).
pub fn chi_derivative(k: usize, u: f64) -> f64 {
    if u.abs() >= 1.0 {
        return 0.0;
    }
    if k == 0 {
        return chi_raw(u);
    }
    let polys = &chi_derivative_polys().polys;
    let nk = &polys[k];
    let denom = (1.0 - u * u).powi(2 * k as i32);
    poly_eval(nk, u) / denom * chi_raw(u)
}

struct ChiTable {
    h: f64,
    cum: Vec<f64>,
    vals: Vec<f64>,
}

fn chi_cumulative_table() -> &'static ChiTable {
    static CELL: OnceLock<ChiTable> = OnceLock::new();
    CELL.get_or_init(|| {
        let n = CHI_TABLE_LEN;
        let h = 2.0 / n as f64;
        let vals: Vec<f64> = (0..=n).map(|i| chi_raw(-1.0 + i as f64 * h)).collect();
        let cum = crate::numerics::cumulative_simpson(&vals, h);
        ChiTable { h, cum, vals }
    })
}

/// `X(u) = integral of chi over [-1, u]`, clamped outside [-1, 1].
pub fn chi_cumulative(u: f64) -> f64 {
    let table = chi_cumulative_table();
    if u <= -1.0 {
        0.0
    } else if u >= 1.0 {
        chi_l1()
    } else {
        // Slopes of the antiderivative are exactly chi, so the Hermite
        // interpolant is fourth-order with no estimated derivatives.
        HermiteGrid::new(-1.0, table.h, &table.cum, &table.vals).eval(u)
    }
}

/// Total mass of the unit-peak bump.
pub fn chi_l1() -> f64 {
    *chi_cumulative_table().cum.last().expect("nonempty table")
}

impl Descriptor {
    pub fn validate(&self) -> Result<()> {
        match self {
            Descriptor::Zero => Ok(()),
            Descriptor::GaussianBump { amp, center, width }
            | Descriptor::CompactBump { amp, center, width } => {
                if !amp.is_finite() || !center.is_finite() || !(*width > 0.0) {
                    return Err(Error::Domain(format!(
                        "bump descriptor needs finite amp/center and width > 0, got {self:?}"
                    )));
                }
                Ok(())
            }
            Descriptor::Sine { amp, freq, phase } => {
                if !amp.is_finite() || !freq.is_finite() || !phase.is_finite() {
                    return Err(Error::Domain("sine descriptor needs finite fields".into()));
                }
                Ok(())
            }
            Descriptor::HarmonicTrain { n_max } | Descriptor::ThetaSeries { n_max } => {
                if *n_max == 0 {
                    return Err(Error::Domain("bump train needs n_max >= 1".into()));
                }
                Ok(())
            }
        }
    }

    /// Compact support interval, when there is one.
    pub fn support(&self) -> Option<(f64, f64)> {
        match self {
            Descriptor::Zero => Some((0.0, 0.0)),
            Descriptor::CompactBump { center, width, .. } => {
                Some((center - width, center + width))
            }
            Descriptor::HarmonicTrain { n_max } => {
                Some((2.0 - 1.0 / train_rate(1), 2.0 * *n_max as f64 + 1.0 / train_rate(*n_max)))
            }
            _ => None,
        }
    }

    pub fn value(&self, x: f64) -> f64 {
        match self {
            Descriptor::Zero => 0.0,
            Descriptor::GaussianBump { amp, center, width } => {
                let u = (x - center) / width;
                amp * (-u * u).exp()
            }
            Descriptor::CompactBump { amp, center, width } => {
                amp * chi_raw((x - center) / width)
            }
            Descriptor::Sine { amp, freq, phase } => amp * (freq * x + phase).sin(),
            Descriptor::HarmonicTrain { n_max } => train_value(*n_max, x),
            Descriptor::ThetaSeries { n_max } => theta_value(*n_max, x),
        }
    }

    /// `k`-th derivative at `x`; `k = 0` is the value.
    pub fn derivative(&self, k: usize, x: f64) -> Result<f64> {
        if k > ORACLE_KMAX {
            return Err(Error::Domain(format!(
                "derivative oracle supports order <= {ORACLE_KMAX}, got {k}"
            )));
        }
        Ok(match self {
            Descriptor::Zero => 0.0,
            Descriptor::GaussianBump { amp, center, width } => {
                let u = (x - center) / width;
                // d^k/dx^k e^{-u^2} = (-1/w)^k H_k(u) e^{-u^2} via the
                // recursion H_{k+1} = 2u H_k - 2k H_{k-1}.
                let mut h_prev = 0.0;
                let mut h = 1.0;
                for j in 0..k {
                    let next = 2.0 * u * h - 2.0 * j as f64 * h_prev;
                    h_prev = h;
                    h = next;
                }
                amp * (-1.0 / width).powi(k as i32) * h * (-u * u).exp()
            }
            Descriptor::CompactBump { amp, center, width } => {
                amp * width.powi(-(k as i32)) * chi_derivative(k, (x - center) / width)
            }
            Descriptor::Sine { amp, freq, phase } => {
                amp * freq.powi(k as i32)
                    * (freq * x + phase + k as f64 * std::f64::consts::FRAC_PI_2).sin()
            }
            Descriptor::HarmonicTrain { n_max } => train_derivative(*n_max, k, x),
            Descriptor::ThetaSeries { n_max } => {
                if k == 0 {
                    theta_value(*n_max, x)
                } else {
                    train_derivative(*n_max, k - 1, x)
                }
            }
        })
    }

    /// Samples the descriptor on a uniform grid. For the antiderivative
    /// train this runs in one ascending pass instead of per-point sums.
    pub fn sample(&self, x0: f64, step: f64, n: usize) -> Vec<f64> {
        match self {
            Descriptor::ThetaSeries { n_max } => {
                let mut out = Vec::with_capacity(n);
                let mut idx = 1usize;
                let mut acc = 0.0;
                for i in 0..n {
                    let x = x0 + i as f64 * step;
                    while idx <= *n_max && 2.0 * idx as f64 + 1.0 / train_rate(idx) <= x {
                        acc += train_amp(idx) * chi_l1() / train_rate(idx);
                        idx += 1;
                    }
                    let partial = if idx <= *n_max {
                        let l = train_rate(idx);
                        train_amp(idx) / l * chi_cumulative(l * (x - 2.0 * idx as f64))
                    } else {
                        0.0
                    };
                    out.push(acc + partial);
                }
                out
            }
            _ => (0..n).map(|i| self.value(x0 + i as f64 * step)).collect(),
        }
    }
}

/// Index of the only train bump whose support can contain `x` (supports
/// are disjoint), if any.
fn train_bump_at(n_max: usize, x: f64) -> Option<usize> {
    let n = (x / 2.0).round();
    if n < 1.0 || n > n_max as f64 {
        return None;
    }
    let n = n as usize;
    let u = train_rate(n) * (x - 2.0 * n as f64);
    if u.abs() < 1.0 {
        Some(n)
    } else {
        None
    }
}

fn train_value(n_max: usize, x: f64) -> f64 {
    match train_bump_at(n_max, x) {
        Some(n) => train_amp(n) * chi_raw(train_rate(n) * (x - 2.0 * n as f64)),
        None => 0.0,
    }
}

fn train_derivative(n_max: usize, k: usize, x: f64) -> f64 {
    match train_bump_at(n_max, x) {
        Some(n) => {
            let l = train_rate(n);
            train_amp(n) * l.powi(k as i32) * chi_derivative(k, l * (x - 2.0 * n as f64))
        }
        None => 0.0,
    }
}

fn theta_value(n_max: usize, x: f64) -> f64 {
    let mut acc = 0.0;
    for n in 1..=n_max {
        let l = train_rate(n);
        if 2.0 * n as f64 + 1.0 / l <= x {
            acc += train_amp(n) * chi_l1() / l;
        } else {
            acc += train_amp(n) / l * chi_cumulative(l * (x - 2.0 * n as f64));
            break;
        }
    }
    acc
}
