//! Majorant series for compositional inversion.
//!
//! For positive parameters `A, C, rho` and a log-convex weight sequence,
//! the polynomial `psi_N(t) = C A sum_{j=2}^N (rho^{j-1} M_{j-1} / j) t^j`
//! generates a power series `g_N` solving `g_N(s) = A s + psi_N(g_N(s))`.
//! Its coefficients are positive and obey the explicit envelope
//! `i c_i < A (4A(CA+1)rho)^{i-1} M_{i-1}`, which is what makes `g_N` a
//! coefficient-wise dominator for inverses of germs whose derivative data
//! sit below the `psi` coefficients.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::weights::WeightSequence;

use super::fdb;
use super::{Jet, Scalar};

#[derive(Debug, Clone, Serialize)]
pub struct BoundMargin {
    pub i: usize,
    /// `i * c_i`.
    pub lhs: f64,
    /// `A (4A(CA+1)rho)^{i-1} M_{i-1}`.
    pub rhs: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct MajorantSeries {
    pub a: f64,
    pub c: f64,
    pub rho: f64,
    pub n: usize,
    /// Coefficients of `psi_N` on `t^0..t^N` (the first two are zero).
    pub psi_coeffs: Vec<f64>,
    /// Coefficients `c_1..c_N` of `g_N`.
    pub g_coeffs: Vec<f64>,
    /// Envelope check per degree `2..=N`.
    pub margins: Vec<BoundMargin>,
}

/// Builds `psi_N` and `g_N` and verifies the coefficient envelope.
///
/// An envelope violation is reported as an invariant failure: the bound is
/// a theorem for log-convex weights, so a breach means a bug, not bad
/// input.
pub fn majorant_series(
    a: f64,
    c: f64,
    rho: f64,
    m: &WeightSequence,
    n: usize,
) -> Result<MajorantSeries> {
    if !(a > 0.0 && c > 0.0 && rho > 0.0) || !(a.is_finite() && c.is_finite() && rho.is_finite())
    {
        return Err(Error::Domain(format!(
            "majorant parameters must be finite and positive, got A={a}, C={c}, rho={rho}"
        )));
    }
    if n < 2 {
        return Err(Error::Domain(format!("majorant degree must be >= 2, got {n}")));
    }
    if m.kmax() < n - 1 {
        return Err(Error::Domain(format!(
            "weight sequence truncated at {} but degree {n} needs M_{}",
            m.kmax(),
            n - 1
        )));
    }
    if !crate::weights::is_log_convex(m) {
        return Err(Error::Domain(
            "majorant series requires a log-convex weight sequence".into(),
        ));
    }

    let mut psi = vec![0.0f64; n + 1];
    for (j, slot) in psi.iter_mut().enumerate().skip(2) {
        *slot = c * a * rho.powi(j as i32 - 1) * m.value(j - 1) / j as f64;
    }

    let g = solve_fixed_point(&a, &psi, n);

    let growth = 4.0 * a * (c * a + 1.0) * rho;
    let mut margins = Vec::with_capacity(n - 1);
    let mut violation = None;
    for i in 2..=n {
        let lhs = i as f64 * g[i];
        let rhs = a * growth.powi(i as i32 - 1) * m.value(i - 1);
        if !(g[i] > 0.0) || lhs >= rhs {
            violation = Some((i, lhs, rhs));
        }
        margins.push(BoundMargin { i, lhs, rhs });
    }
    if let Some((i, lhs, rhs)) = violation {
        return Err(Error::Invariant(format!(
            "majorant envelope breached at i={i}: {lhs} !< {rhs}"
        )));
    }

    Ok(MajorantSeries {
        a,
        c,
        rho,
        n,
        psi_coeffs: psi,
        g_coeffs: g[1..].to_vec(),
        margins,
    })
}

/// Fixed point `g = A s + psi(g)` by iteration; the degree-i coefficient
/// stabilizes after i rounds, matching the reversion scheme.
fn solve_fixed_point<S: Scalar>(a: &S, psi: &[S], n: usize) -> Vec<S> {
    let mut g = vec![S::zero(); n + 1];
    g[1] = a.clone();
    for _ in 0..n {
        let mut next = fdb::compose_series(psi, &g, n);
        next[1] = next[1].clone() + a.clone();
        g = next;
    }
    g
}

/// Exact-rational envelope margins: `(i, i*c_i, A(4A(CA+1)rho)^{i-1} M_{i-1})`
/// for `2 <= i <= n`, computed without any floating rounding.
///
/// `m_values[k]` must hold the exact `M_k` for `k <= n - 1`.
pub fn majorant_margins_exact(
    a: &BigRational,
    c: &BigRational,
    rho: &BigRational,
    m_values: &[BigRational],
    n: usize,
) -> Result<Vec<(usize, BigRational, BigRational)>> {
    let zero = BigRational::from_integer(BigInt::from(0));
    if !(a > &zero && c > &zero && rho > &zero) || n < 2 || m_values.len() < n {
        return Err(Error::Domain(
            "exact majorant needs positive parameters, degree >= 2, and M_0..M_{n-1}".into(),
        ));
    }
    let mut psi = vec![zero.clone(); n + 1];
    for (j, slot) in psi.iter_mut().enumerate().skip(2) {
        let mut pow = BigRational::from_integer(BigInt::from(1));
        for _ in 0..j - 1 {
            pow *= rho.clone();
        }
        *slot = c.clone() * a.clone() * pow * m_values[j - 1].clone()
            / BigRational::from_integer(BigInt::from(j as i64));
    }
    let g = solve_fixed_point(a, &psi, n);

    let four = BigRational::from_integer(BigInt::from(4));
    let one = BigRational::from_integer(BigInt::from(1));
    let growth = four * a.clone() * (c.clone() * a.clone() + one) * rho.clone();
    let mut margins = Vec::with_capacity(n - 1);
    for (i, gi) in g.iter().enumerate().take(n + 1).skip(2) {
        let lhs = BigRational::from_integer(BigInt::from(i as i64)) * gi.clone();
        let mut pow = BigRational::from_integer(BigInt::from(1));
        for _ in 0..i - 1 {
            pow *= growth.clone();
        }
        let rhs = a.clone() * pow * m_values[i - 1].clone();
        margins.push((i, lhs, rhs));
    }
    Ok(margins)
}

impl MajorantSeries {
    /// `c_i` of `g_N` for `1 <= i <= N`.
    pub fn g_coeff(&self, i: usize) -> f64 {
        self.g_coeffs[i - 1]
    }

    /// Checks coefficient-wise domination `|jet_i| <= c_i` for all degrees
    /// both sides cover.
    pub fn dominates(&self, jet: &Jet<f64>) -> bool {
        (1..=jet.degree().min(self.n))
            .all(|i| jet.coeff(i).abs() <= self.g_coeff(i) * (1.0 + 1e-12))
    }
}
