//! Series-level composition kernels and the partition-sum bound check.
//!
//! Coefficient slices here are raw truncated power series `a[0..=d]`; the
//! germ bookkeeping (base points, alignment) lives in [`super::Jet`].

use crate::numerics::{fit_line, partitions, LogFactorial};
use crate::weights::WeightSequence;

use super::scalar::Scalar;

/// Degree up to which composition uses explicit partition enumeration.
/// Beyond it the partition count grows quickly and the Horner kernel,
/// which is algebraically identical, takes over.
pub const PARTITION_CAP: usize = 20;

/// Truncated product of two series of common length.
pub(crate) fn mul_trunc<S: Scalar>(a: &[S], b: &[S], degree: usize) -> Vec<S> {
    let mut out = vec![S::zero(); degree + 1];
    for (i, ai) in a.iter().enumerate().take(degree + 1) {
        if *ai == S::zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate().take(degree + 1 - i) {
            out[i + j] = out[i + j].clone() + ai.clone() * bj.clone();
        }
    }
    out
}

/// Composition `outer(inner(x))` truncated at `degree`; `inner[0]` must be
/// zero. Dispatches between the partition and Horner kernels.
pub(crate) fn compose_series<S: Scalar>(outer: &[S], inner: &[S], degree: usize) -> Vec<S> {
    debug_assert!(inner[0] == S::zero());
    if degree <= PARTITION_CAP {
        compose_series_partitions(outer, inner, degree)
    } else {
        compose_series_horner(outer, inner, degree)
    }
}

/// Bell-polynomial form: the degree-n coefficient of `outer ∘ inner` is a
/// sum over integer partitions of n. A partition with distinct parts `d_i`
/// of multiplicities `k_i` and `alpha = sum k_i` parts in total contributes
/// `alpha!/(k_1! ... k_l!) * outer[alpha] * prod inner[d_i]^{k_i}`.
pub(crate) fn compose_series_partitions<S: Scalar>(
    outer: &[S],
    inner: &[S],
    degree: usize,
) -> Vec<S> {
    let mut out = vec![S::zero(); degree + 1];
    out[0] = outer[0].clone();
    for n in 1..=degree {
        let mut acc = S::zero();
        for part in partitions(n) {
            let alpha: usize = part.iter().map(|(_, m)| m).sum();
            if alpha >= outer.len() || outer[alpha] == S::zero() {
                continue;
            }
            let mut term = S::from_integer(multinomial_i64(alpha, &part)) * outer[alpha].clone();
            for (p, m) in &part {
                for _ in 0..*m {
                    term = term * inner[*p].clone();
                }
            }
            acc = acc + term;
        }
        out[n] = acc;
    }
    out
}

/// `alpha! / (k_1! ... k_l!)` for a partition given as (part, multiplicity)
/// pairs; fits i64 for alpha <= 20.
fn multinomial_i64(alpha: usize, part: &[(usize, usize)]) -> i64 {
    let mut num: i64 = 1;
    for f in 2..=alpha as i64 {
        num *= f;
    }
    for (_, m) in part {
        for f in 2..=*m as i64 {
            num /= f;
        }
    }
    num
}

/// Horner evaluation of the outer series at the inner series.
pub(crate) fn compose_series_horner<S: Scalar>(
    outer: &[S],
    inner: &[S],
    degree: usize,
) -> Vec<S> {
    let mut out = vec![S::zero(); degree + 1];
    out[0] = outer[degree.min(outer.len() - 1)].clone();
    for k in (0..degree.min(outer.len() - 1)).rev() {
        out = mul_trunc(&out, inner, degree);
        out[0] = out[0].clone() + outer[k].clone();
    }
    out
}

/// Partition sum controlling composed derivative growth: for a target
/// order `gamma`, sums `alpha!/(k_1!...k_l!) * A^alpha * M_alpha *
/// prod M_{d_i}^{k_i}` over all partitions of `gamma`. Order 0 is the
/// bare identity term `M_0 = 1`.
pub fn partition_sum_lhs(a: f64, m: &WeightSequence, gamma: usize) -> f64 {
    if gamma == 0 {
        return 1.0;
    }
    let lf = LogFactorial::up_to(gamma);
    let mut total = 0.0;
    for part in partitions(gamma) {
        let alpha: usize = part.iter().map(|(_, mu)| mu).sum();
        let mut log_multinomial = lf.get(alpha);
        for (_, mu) in &part {
            log_multinomial -= lf.get(*mu);
        }
        let mut log_term =
            log_multinomial + alpha as f64 * a.ln() + m.log_value(alpha);
        for (p, mu) in &part {
            log_term += *mu as f64 * m.log_value(*p);
        }
        total += log_term.exp();
    }
    total
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct PartitionBoundFit {
    pub a: f64,
    /// Prefactor such that `LHS <= b * c^gamma * M_gamma` for every
    /// computed gamma.
    pub b: f64,
    /// Fitted geometric rate.
    pub c: f64,
    /// Per-gamma values of `LHS / M_gamma`.
    pub normalized: Vec<f64>,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct PartitionBoundReport {
    pub gamma_max: usize,
    pub fits: Vec<PartitionBoundFit>,
    /// Whether the fitted rate decreases along the decreasing-A sweep.
    pub c_decreasing: bool,
}

/// Computes the partition sums for `gamma <= gamma_max` and fits the
/// geometric envelope `B * C^gamma * M_gamma`, for `A` and a decreasing
/// sweep `A/10, A/100, A/1000`. The fitted rate must shrink as `A` does.
pub fn partition_bound_check(
    a: f64,
    m: &WeightSequence,
    gamma_max: usize,
) -> crate::Result<PartitionBoundReport> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(crate::Error::Domain(format!(
            "partition bound needs a finite A > 0, got {a}"
        )));
    }
    if gamma_max < 2 || gamma_max > 40 {
        return Err(crate::Error::Domain(format!(
            "partition bound supports 2 <= gamma_max <= 40, got {gamma_max}"
        )));
    }
    if m.kmax() < gamma_max {
        return Err(crate::Error::Domain(format!(
            "weight sequence truncated at {} but gamma_max = {gamma_max}",
            m.kmax()
        )));
    }
    if !crate::weights::satisfies_partition_bound(m) {
        return Err(crate::Error::Domain(
            "partition bound check requires a sequence with the partition inequality".into(),
        ));
    }
    let mut fits = Vec::new();
    for scale in [1.0, 0.1, 0.01, 0.001] {
        let a_cur = a * scale;
        let log_norm: Vec<f64> = (1..=gamma_max)
            .map(|g| partition_sum_lhs(a_cur, m, g).ln() - m.log_value(g))
            .collect();
        let xs: Vec<f64> = (1..=gamma_max).map(|g| g as f64).collect();
        let (log_c, mut log_b) = fit_line(&xs, &log_norm);
        // Inflate the prefactor so the envelope is a genuine upper bound.
        for (g, ln) in xs.iter().zip(&log_norm) {
            log_b = log_b.max(ln - log_c * g);
        }
        fits.push(PartitionBoundFit {
            a: a_cur,
            b: log_b.exp(),
            c: log_c.exp(),
            normalized: log_norm.iter().map(|v| v.exp()).collect(),
        });
    }
    let c_decreasing = fits.windows(2).all(|w| w[1].c < w[0].c);
    Ok(PartitionBoundReport {
        gamma_max,
        fits,
        c_decreasing,
    })
}
