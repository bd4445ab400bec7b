//! Weight sequences `M_k` for ultradifferentiable regularity classes.
//!
//! All arithmetic happens on `log M_k`: the interesting sequences grow
//! factorially fast, and quotients such as `(M_{j+k} / (M_j M_k))^{1/(j+k)}`
//! are differences and rescalings of logs. Sequences are normalized so
//! that `M_0 = 1 <= M_1`.
//!
//! Boundedness and convergence verdicts are computed from a finite
//! truncation, so they are *trend verdicts*: a least-squares slope over the
//! tail of the truncation, tagged as truncation-based in every report.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{fit_line, partitions, LogFactorial};

/// Comparison slack for log-domain inequality checks. The sequences of
/// interest satisfy their inequalities with margins that are either exactly
/// zero (constant sequences) or far above rounding noise; the slack only
/// absorbs accumulated rounding in long log-factorial sums.
const LOG_SLACK: f64 = 1e-10;

/// Trend-fit threshold: a tail slope within `DELTA` of zero counts as
/// bounded, and a term-decay slope below `-1 - DELTA` counts as a
/// convergent series.
const DELTA: f64 = 0.05;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GeneratorSpec {
    /// `M_k = (k!)^(s-1)`, `s >= 1`.
    Gevrey { s: f64, kmax: usize },
    /// `M_k = 1`.
    ConstantOne { kmax: usize },
    /// Explicit positive values, `values[0] = 1`, `values[1] >= 1`.
    Explicit { values: Vec<f64> },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WeightSequence {
    log_values: Vec<f64>,
    generator: GeneratorSpec,
}

impl WeightSequence {
    /// Builds a sequence from a generator description.
    ///
    /// Gevrey logs are accumulated as partial sums of `log j` so that no
    /// factorial is ever materialized; `kmax` up to 10^4 stays exact to
    /// machine precision.
    pub fn make(spec: &GeneratorSpec) -> Result<WeightSequence> {
        match spec {
            GeneratorSpec::Gevrey { s, kmax } => {
                if !s.is_finite() || *s < 1.0 {
                    return Err(Error::Domain(format!(
                        "gevrey index must satisfy s >= 1, got {s}"
                    )));
                }
                Self::check_kmax(*kmax)?;
                let lf = LogFactorial::up_to(*kmax);
                let log_values = (0..=*kmax).map(|k| (s - 1.0) * lf.get(k)).collect();
                Ok(WeightSequence {
                    log_values,
                    generator: spec.clone(),
                })
            }
            GeneratorSpec::ConstantOne { kmax } => {
                Self::check_kmax(*kmax)?;
                Ok(WeightSequence {
                    log_values: vec![0.0; *kmax + 1],
                    generator: spec.clone(),
                })
            }
            GeneratorSpec::Explicit { values } => {
                Self::check_kmax(values.len().saturating_sub(1))?;
                if values.iter().any(|v| !v.is_finite() || *v <= 0.0) {
                    return Err(Error::Domain(
                        "explicit weight values must be finite and positive".into(),
                    ));
                }
                if values[0] != 1.0 {
                    return Err(Error::Domain(format!(
                        "weight sequences are normalized to M_0 = 1, got {}",
                        values[0]
                    )));
                }
                if values[1] < 1.0 {
                    return Err(Error::Domain(format!(
                        "weight sequences require M_1 >= 1, got {}",
                        values[1]
                    )));
                }
                Ok(WeightSequence {
                    log_values: values.iter().map(|v| v.ln()).collect(),
                    generator: spec.clone(),
                })
            }
        }
    }

    fn check_kmax(kmax: usize) -> Result<()> {
        if kmax < 8 {
            return Err(Error::Domain(format!(
                "weight sequences need kmax >= 8 to support the diagnostics, got {kmax}"
            )));
        }
        Ok(())
    }

    pub fn gevrey(s: f64, kmax: usize) -> Result<WeightSequence> {
        Self::make(&GeneratorSpec::Gevrey { s, kmax })
    }

    pub fn constant_one(kmax: usize) -> Result<WeightSequence> {
        Self::make(&GeneratorSpec::ConstantOne { kmax })
    }

    pub fn kmax(&self) -> usize {
        self.log_values.len() - 1
    }

    /// `log M_k`.
    pub fn log_value(&self, k: usize) -> f64 {
        self.log_values[k]
    }

    /// `M_k` (may overflow to infinity for huge `k`; prefer `log_value`).
    pub fn value(&self, k: usize) -> f64 {
        self.log_values[k].exp()
    }

    pub fn generator(&self) -> &GeneratorSpec {
        &self.generator
    }
}

/// A boundedness verdict obtained from a tail trend fit, never from the
/// truncation alone.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum TrendVerdict {
    Bounded,
    Unbounded,
}

/// Tail-trend fit summary: least squares of a quantity against `log k`
/// over the last half of the truncation.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct TailTrend {
    pub slope: f64,
    pub intercept: f64,
    /// First `k` included in the fit window.
    pub window_start: usize,
}

fn tail_trend(values: &[(usize, f64)]) -> TailTrend {
    let start = values.len() / 2;
    let xs: Vec<f64> = values[start..].iter().map(|(k, _)| (*k as f64).ln()).collect();
    let ys: Vec<f64> = values[start..].iter().map(|(_, v)| *v).collect();
    let (slope, intercept) = fit_line(&xs, &ys);
    TailTrend {
        slope,
        intercept,
        window_start: values[start].0,
    }
}

/// Report of the structural conditions a weight sequence can satisfy.
///
/// Booleans are checked over the whole truncation; constants are running
/// suprema over the truncation; `*_verdict` fields are tail-trend verdicts
/// and therefore truncation-based.
#[derive(Debug, Clone, Serialize)]
pub struct ConditionsReport {
    pub kmax: usize,
    pub truncation_based: bool,
    /// `M_k^2 <= M_{k-1} M_{k+1}`.
    pub log_convex: bool,
    /// `k! M_k` log-convex.
    pub weakly_log_convex: bool,
    /// `M_k >= 1` and nondecreasing, with `M_0 = 1`.
    pub nondecreasing_from_one: bool,
    /// `M_k^{1/k}` nondecreasing (meaningful when log-convex).
    pub roots_nondecreasing: bool,
    /// `M_j M_k <= M_{j+k}` for all `j + k <= kmax`.
    pub supermultiplicative: bool,
    /// Composition bound `M_1^j M_k >= M_j M_{a_1} ... M_{a_j}` over all
    /// compositions of `k <= 10` into positive parts.
    pub composition_bound: bool,
    /// Partition bound `M_1^k M_n >= M_k M_1^{k_1} ... M_n^{k_n}` over all
    /// partitions of `n <= 8` (`k` the number of parts).
    pub partition_bound: bool,
    /// Running sup of `(M_{k+1}/M_k)^{1/k}`.
    pub derivation_closed_constant: f64,
    pub derivation_closed_verdict: TrendVerdict,
    pub derivation_closed_trend: TailTrend,
    /// Running sup of `(M_{j+k}/(M_j M_k))^{1/(j+k)}`.
    pub moderate_growth_constant: f64,
    pub moderate_growth_verdict: TrendVerdict,
    pub moderate_growth_trend: TailTrend,
    /// `(k+j)! M_{k+j} <= C^{j(k+j)} k! M_k` with the measured constant,
    /// checked for all `j, k <= kmax/2`.
    pub factorial_ratio_bound: bool,
    pub factorial_ratio_constant: f64,
    /// `M_k^{1/k} -> infinity` (trend verdict).
    pub beurling_eligible: bool,
    pub beurling_trend: TailTrend,
    /// Normalized, nondecreasing, log-convex, moderate growth bounded.
    pub hypothesis_bundle: bool,
}

/// Log-convexity alone, cheap enough for preconditions of other modules.
pub fn is_log_convex(ws: &WeightSequence) -> bool {
    let lg = &ws.log_values;
    (1..ws.kmax()).all(|k| {
        2.0 * lg[k] <= lg[k - 1] + lg[k + 1] + LOG_SLACK * (1.0 + lg[k].abs())
    })
}

/// The partition bound alone (brute force over partitions of n <= 8).
pub fn satisfies_partition_bound(ws: &WeightSequence) -> bool {
    let lg = &ws.log_values;
    for n in 1..=ws.kmax().min(8) {
        for part in partitions(n) {
            let k: usize = part.iter().map(|(_, m)| m).sum();
            let rhs: f64 = lg[k] + part.iter().map(|(p, m)| *m as f64 * lg[*p]).sum::<f64>();
            if (k as f64) * lg[1] + lg[n] < rhs - LOG_SLACK * (1.0 + lg[n].abs()) {
                return false;
            }
        }
    }
    true
}

/// Checks the structural conditions on the truncation.
pub fn check_conditions(ws: &WeightSequence) -> ConditionsReport {
    let kmax = ws.kmax();
    let lg = &ws.log_values;
    let lf = LogFactorial::up_to(kmax);
    let slack = |k: usize| LOG_SLACK * (1.0 + lg[k].abs());

    let log_convex = is_log_convex(ws);
    let weakly_log_convex = (1..kmax).all(|k| {
        let n = |i: usize| lf.get(i) + lg[i];
        2.0 * n(k) <= n(k - 1) + n(k + 1) + slack(k) + LOG_SLACK * (1.0 + lf.get(k))
    });
    let nondecreasing_from_one =
        lg[0] == 0.0 && (0..kmax).all(|k| lg[k] <= lg[k + 1] + slack(k));
    let roots_nondecreasing = (1..kmax)
        .all(|k| lg[k] / k as f64 <= lg[k + 1] / (k + 1) as f64 + slack(k) / k as f64);
    let supermultiplicative = {
        let mut ok = true;
        'outer: for j in 1..kmax {
            for k in j..=kmax - j {
                if lg[j] + lg[k] > lg[j + k] + slack(j + k) {
                    ok = false;
                    break 'outer;
                }
            }
        }
        ok
    };

    // Composition bound, brute-forced for k <= 10.
    let composition_bound = {
        let mut ok = true;
        'comp: for k in 1..=kmax.min(10) {
            for alpha in crate::numerics::compositions(k) {
                let j = alpha.len();
                let rhs: f64 = lg[j] + alpha.iter().map(|&a| lg[a]).sum::<f64>();
                if (j as f64) * lg[1] + lg[k] < rhs - slack(k) {
                    ok = false;
                    break 'comp;
                }
            }
        }
        ok
    };

    // Partition bound for n <= 8.
    let partition_bound = satisfies_partition_bound(ws);

    // Derivation closedness: running sup of (M_{k+1}/M_k)^{1/k}.
    let der_seq: Vec<(usize, f64)> = (1..kmax)
        .map(|k| (k, (lg[k + 1] - lg[k]) / k as f64))
        .collect();
    let derivation_closed_constant = der_seq
        .iter()
        .map(|(_, v)| *v)
        .fold(f64::NEG_INFINITY, f64::max)
        .exp();
    let derivation_closed_trend = tail_trend(&der_seq);
    let derivation_closed_verdict = if derivation_closed_trend.slope <= DELTA {
        TrendVerdict::Bounded
    } else {
        TrendVerdict::Unbounded
    };

    // Moderate growth: running sup over pairs, tracked per total degree.
    let mut diag: Vec<(usize, f64)> = Vec::with_capacity(kmax.saturating_sub(1));
    let mut mg_log_sup = f64::NEG_INFINITY;
    for n in 2..=kmax {
        let mut best = f64::NEG_INFINITY;
        for j in 1..n {
            let q = (lg[n] - lg[j] - lg[n - j]) / n as f64;
            if q > best {
                best = q;
            }
        }
        mg_log_sup = mg_log_sup.max(best);
        diag.push((n, best));
    }
    let moderate_growth_constant = mg_log_sup.exp();
    let moderate_growth_trend = tail_trend(&diag);
    let moderate_growth_verdict = if moderate_growth_trend.slope <= DELTA {
        TrendVerdict::Bounded
    } else {
        TrendVerdict::Unbounded
    };

    // Factorial-ratio bound with the measured constant for N_k = k! M_k.
    let n_log = |i: usize| lf.get(i) + lg[i];
    let mut c9_log = n_log(1) - n_log(0);
    for k in 1..kmax {
        c9_log = c9_log.max((n_log(k + 1) - n_log(k)) / k as f64);
    }
    let c9_log = c9_log.max(0.0);
    let factorial_ratio_constant = c9_log.exp();
    let half = kmax / 2;
    let mut factorial_ratio_bound = true;
    'ratio: for k in 0..=half {
        for j in 1..=half.min(kmax - k) {
            let lhs = n_log(k + j) - n_log(k);
            let bound = (j * (k + j)) as f64 * c9_log;
            if lhs > bound + slack(k + j) + LOG_SLACK * (1.0 + lf.get(k + j)) {
                factorial_ratio_bound = false;
                break 'ratio;
            }
        }
    }

    // Beurling eligibility: M_k^{1/k} -> infinity.
    let root_seq: Vec<(usize, f64)> = (1..=kmax).map(|k| (k, lg[k] / k as f64)).collect();
    let beurling_trend = tail_trend(&root_seq);
    let beurling_eligible = beurling_trend.slope >= DELTA;

    let hypothesis_bundle = nondecreasing_from_one
        && log_convex
        && moderate_growth_verdict == TrendVerdict::Bounded;

    ConditionsReport {
        kmax,
        truncation_based: true,
        log_convex,
        weakly_log_convex,
        nondecreasing_from_one,
        roots_nondecreasing,
        supermultiplicative,
        composition_bound,
        partition_bound,
        derivation_closed_constant,
        derivation_closed_verdict,
        derivation_closed_trend,
        moderate_growth_constant,
        moderate_growth_verdict,
        moderate_growth_trend,
        factorial_ratio_bound,
        factorial_ratio_constant,
        beurling_eligible,
        beurling_trend,
        hypothesis_bundle,
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum QaVerdict {
    /// The defining series diverges.
    Quasianalytic,
    /// The defining series converges.
    NonQuasianalytic,
}

/// Quasianalyticity diagnostic: partial sums of `(k! M_k)^{-1/k}` and a
/// trend verdict on their convergence.
#[derive(Debug, Clone, Serialize)]
pub struct QaDiagnostic {
    pub kmax: usize,
    pub truncation_based: bool,
    pub verdict: QaVerdict,
    /// Tail trend of `log term_k` against `log k`; slope <= -1 - delta
    /// means a convergent series.
    pub term_trend: TailTrend,
    /// Fit of the partial sums `S_K` against `log K` over the tail; for a
    /// logarithmically divergent series the slope is the density constant.
    pub partial_sum_trend: TailTrend,
    /// Partial sums at decade checkpoints (and at `kmax`).
    pub partial_sum_checkpoints: Vec<(usize, f64)>,
    /// Final partial sum `S_kmax`.
    pub total: f64,
    /// `(S_kmax - S_50) / S_kmax`: fraction of the truncated mass beyond
    /// `k = 50`.
    pub tail_fraction_beyond_50: f64,
    /// Running sup of `(M_{k+1}/M_k) * sum_{l >= k} M_l / ((l+1) M_{l+1})`,
    /// the strong-non-quasianalyticity functional (finite truncation).
    pub strong_nqa_sup: f64,
    pub strong_nqa_verdict: TrendVerdict,
    #[serde(skip)]
    pub terms: Vec<f64>,
    #[serde(skip)]
    pub partial_sums: Vec<f64>,
}

/// Runs the quasianalyticity diagnostic.
///
/// Requires weak log-convexity (`k! M_k` log-convex), which makes the
/// series comparison meaningful.
pub fn quasianalytic_diagnostic(ws: &WeightSequence) -> Result<QaDiagnostic> {
    let conditions = check_conditions(ws);
    if !conditions.weakly_log_convex {
        return Err(Error::Domain(
            "quasianalyticity diagnostic requires a weakly log-convex sequence".into(),
        ));
    }
    let kmax = ws.kmax();
    let lf = LogFactorial::up_to(kmax);
    let lg = &ws.log_values;

    let mut terms = Vec::with_capacity(kmax);
    let mut partial_sums = Vec::with_capacity(kmax);
    let mut s = 0.0;
    for k in 1..=kmax {
        let t = (-(lf.get(k) + lg[k]) / k as f64).exp();
        terms.push(t);
        s += t;
        partial_sums.push(s);
    }

    let log_terms: Vec<(usize, f64)> = (1..=kmax).map(|k| (k, terms[k - 1].ln())).collect();
    let term_trend = tail_trend(&log_terms);
    let verdict = if term_trend.slope <= -1.0 - DELTA {
        QaVerdict::NonQuasianalytic
    } else {
        QaVerdict::Quasianalytic
    };

    let sum_seq: Vec<(usize, f64)> = (1..=kmax).map(|k| (k, partial_sums[k - 1])).collect();
    let partial_sum_trend = tail_trend(&sum_seq);

    let mut checkpoints = Vec::new();
    let mut cp = 10;
    while cp < kmax {
        checkpoints.push((cp, partial_sums[cp - 1]));
        cp *= 10;
    }
    checkpoints.push((kmax, partial_sums[kmax - 1]));

    let tail_fraction_beyond_50 = if kmax > 50 {
        (s - partial_sums[49]) / s
    } else {
        0.0
    };

    // Strong non-quasianalyticity functional. `suffix[k]` holds
    // `sum_{l=k}^{kmax-1} M_l / ((l+1) M_{l+1})`, so the sum truncated at
    // `N` is `suffix[k] - suffix[N]`. The verdict watches how the sup over
    // `k < N` grows as the truncation length `N` grows: a convergent inner
    // series makes it level off, a divergent one makes it climb like the
    // series itself.
    let mut suffix = vec![0.0; kmax + 1];
    for k in (0..kmax).rev() {
        suffix[k] = suffix[k + 1] + (lg[k] - lg[k + 1]).exp() / (k + 1) as f64;
    }
    let sup_at = |n: usize| -> f64 {
        (0..n)
            .map(|k| (lg[k + 1] - lg[k]).exp() * (suffix[k] - suffix[n]))
            .fold(f64::NEG_INFINITY, f64::max)
    };
    let strong_sup = sup_at(kmax);
    let samples = 48.min(kmax / 2);
    let sup_growth: Vec<(usize, f64)> = (0..samples)
        .map(|i| {
            let n = kmax / 2 + (kmax - kmax / 2) * (i + 1) / samples;
            (n, sup_at(n))
        })
        .collect();
    let strong_trend = tail_trend(&sup_growth);
    let strong_nqa_verdict = if strong_trend.slope <= DELTA {
        TrendVerdict::Bounded
    } else {
        TrendVerdict::Unbounded
    };

    Ok(QaDiagnostic {
        kmax,
        truncation_based: true,
        verdict,
        term_trend,
        partial_sum_trend,
        partial_sum_checkpoints: checkpoints,
        total: s,
        tail_fraction_beyond_50,
        strong_nqa_sup: strong_sup,
        strong_nqa_verdict,
        terms,
        partial_sums,
    })
}
