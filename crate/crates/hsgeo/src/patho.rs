//! Counterexample bump trains and factorial node asymptotics.
//!
//! Every train here sums dilated copies of the compact template `chi` at
//! centers `2n`, with supports kept pairwise disjoint so that L^p masses
//! split per summand. Three constructions are provided: the dilated
//! harmonic train, whose derivative-norm table has exactly one divergent
//! corner (`k = 1`, `p = 1`) reachable only through windowed growth; the
//! product of a sparse selection train against the primitive of the dense
//! harmonic one, whose windowed mass grows linearly in the number of
//! selected indices while the companion product term stays bounded; and
//! the node sequence `mu_k = 2^k sqrt(k!) M_k`, whose normalized roots
//! shrink to zero while `k` times them grows without bound.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{harmonic, simpson_fn, LogFactorial};
use crate::spaces::{chi, chi_cumulative, chi_derivative, chi_l1, train_amp, train_rate, ORACLE_KMAX};
use crate::weights::{check_conditions, WeightSequence};

/// Simpson intervals used for each per-summand integral.
const BUMP_PANELS: usize = 1024;

/// Default window ladder: windows are `[-1, 2N + 1]` for these `N`.
pub const WINDOW_SCHEDULE: [usize; 3] = [100, 1_000, 10_000];

/// Disjointly supported sum `sum_{n=1..n_max} a_n chi(l_n (x - 2n))`.
///
/// Summand `n` lives on `[2n - 1/l_n, 2n + 1/l_n]`; construction rejects
/// rate vectors whose neighboring supports overlap (touching is fine, the
/// template vanishes at its edges).
#[derive(Debug, Clone)]
pub struct BumpTrain {
    amps: Vec<f64>,
    rates: Vec<f64>,
    /// `prefix_mass[n] = sum_{m<=n} a_m ||chi||_1 / l_m`.
    prefix_mass: Vec<f64>,
}

impl BumpTrain {
    pub fn new(amps: Vec<f64>, rates: Vec<f64>) -> Result<Self> {
        if amps.is_empty() || amps.len() != rates.len() {
            return Err(Error::Domain(format!(
                "bump train needs matching nonempty amplitude/rate vectors, got {} and {}",
                amps.len(),
                rates.len()
            )));
        }
        for (i, (a, l)) in amps.iter().zip(&rates).enumerate() {
            if !a.is_finite() || *a < 0.0 || !l.is_finite() || !(*l > 0.0) {
                return Err(Error::Domain(format!(
                    "bump train summand {} needs a finite amplitude >= 0 and rate > 0, \
                     got amplitude {a} and rate {l}",
                    i + 1
                )));
            }
        }
        for n in 1..rates.len() {
            let spill = 1.0 / rates[n - 1] + 1.0 / rates[n];
            if spill > 2.0 + 1e-12 {
                return Err(Error::Domain(format!(
                    "bump train summands {n} and {} overlap: half-widths {:.6} and {:.6} \
                     exceed the center spacing 2",
                    n + 1,
                    1.0 / rates[n - 1],
                    1.0 / rates[n]
                )));
            }
        }
        let mut prefix_mass = Vec::with_capacity(amps.len() + 1);
        prefix_mass.push(0.0);
        let mut acc = 0.0;
        for (a, l) in amps.iter().zip(&rates) {
            acc += a * chi_l1() / l;
            prefix_mass.push(acc);
        }
        Ok(BumpTrain { amps, rates, prefix_mass })
    }

    /// Amplitudes `1/n` with dilations `max(ln n, 1)`. The rate clamp keeps
    /// every support inside `[2n - 1, 2n + 1]`, which the per-summand norm
    /// identities need; it only changes `n <= 2`.
    pub fn dilated_harmonic(n_max: usize) -> Result<Self> {
        Self::new(
            (1..=n_max).map(train_amp).collect(),
            (1..=n_max).map(train_rate).collect(),
        )
    }

    /// Undilated train: summand `n` is `amps[n-1] * chi(x - 2n)`.
    pub fn unit_rate(amps: Vec<f64>) -> Result<Self> {
        let rates = vec![1.0; amps.len()];
        Self::new(amps, rates)
    }

    /// Undilated train with amplitudes `1/n`.
    pub fn harmonic_train(n_max: usize) -> Result<Self> {
        Self::unit_rate((1..=n_max).map(train_amp).collect())
    }

    /// Undilated train whose amplitude is `1/k` at `n = ceil(e^k)` and zero
    /// elsewhere, so amplitude times `ln n` never drops below 1 on the
    /// selected indices.
    pub fn log_selection(n_max: usize) -> Result<Self> {
        let mut amps = vec![0.0; n_max];
        for (i, n) in selected_indices(n_max).into_iter().enumerate() {
            amps[n - 1] = 1.0 / (i + 1) as f64;
        }
        Self::unit_rate(amps)
    }

    pub fn n_max(&self) -> usize {
        self.amps.len()
    }

    /// Amplitude of summand `n` (1-based).
    pub fn amp(&self, n: usize) -> f64 {
        self.amps[n - 1]
    }

    /// Dilation rate of summand `n` (1-based).
    pub fn rate(&self, n: usize) -> f64 {
        self.rates[n - 1]
    }

    /// Support interval of summand `n`.
    pub fn bump_support(&self, n: usize) -> (f64, f64) {
        let c = 2.0 * n as f64;
        let w = 1.0 / self.rates[n - 1];
        (c - w, c + w)
    }

    /// Full mass of summand `n`: `a_n ||chi||_1 / l_n`.
    pub fn bump_mass(&self, n: usize) -> f64 {
        self.prefix_mass[n] - self.prefix_mass[n - 1]
    }

    pub fn total_mass(&self) -> f64 {
        *self.prefix_mass.last().expect("nonempty prefix table")
    }

    /// Count of summands whose support lies entirely left of `x`. Right
    /// edges increase strictly, so a binary search suffices.
    fn passed(&self, x: f64) -> usize {
        let (mut lo, mut hi) = (0usize, self.amps.len());
        while lo < hi {
            let mid = (lo + hi + 1) / 2;
            let right = 2.0 * mid as f64 + 1.0 / self.rates[mid - 1];
            if right <= x {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        lo
    }

    /// The summand whose support contains `x`, if any.
    fn bump_at(&self, x: f64) -> Option<usize> {
        let n = self.passed(x) + 1;
        if n <= self.amps.len() && x > self.bump_support(n).0 {
            Some(n)
        } else {
            None
        }
    }

    pub fn value(&self, x: f64) -> f64 {
        match self.bump_at(x) {
            Some(n) => self.amps[n - 1] * chi(self.rates[n - 1] * (x - 2.0 * n as f64)),
            None => 0.0,
        }
    }

    /// `k`-th derivative at `x`; `k = 0` is the value.
    pub fn derivative(&self, k: usize, x: f64) -> Result<f64> {
        if k > ORACLE_KMAX {
            return Err(Error::Domain(format!(
                "derivative oracle supports order <= {ORACLE_KMAX}, got {k}"
            )));
        }
        Ok(self.derivative_raw(k, x))
    }

    fn derivative_raw(&self, k: usize, x: f64) -> f64 {
        match self.bump_at(x) {
            Some(n) => {
                let l = self.rates[n - 1];
                self.amps[n - 1] * l.powi(k as i32) * chi_derivative(k, l * (x - 2.0 * n as f64))
            }
            None => 0.0,
        }
    }

    /// Running integral of the train from the left. All trains built by
    /// the constructors here are supported right of 0, so this equals the
    /// primitive vanishing at 0.
    pub fn primitive(&self, x: f64) -> f64 {
        let passed = self.passed(x);
        let mut acc = self.prefix_mass[passed];
        let n = passed + 1;
        if n <= self.amps.len() {
            let (left, _) = self.bump_support(n);
            if x > left {
                let l = self.rates[n - 1];
                acc += self.amps[n - 1] / l * chi_cumulative(l * (x - 2.0 * n as f64));
            }
        }
        acc
    }
}

/// Indices `n = ceil(e^k)` for `k = 1, 2, ...` that fit below `n_max`.
pub fn selected_indices(n_max: usize) -> Vec<usize> {
    let mut out = Vec::new();
    for k in 1u32.. {
        let n = f64::from(k).exp().ceil() as usize;
        if n > n_max {
            break;
        }
        out.push(n);
    }
    out
}

/// `integral over [-1, 1] of |chi^{(k)}|^p` by composite Simpson.
fn chi_power_mass(k: usize, p: f64) -> f64 {
    simpson_fn(|u| chi_derivative(k, u).abs().powf(p), -1.0, 1.0, 20_000)
}

/// One `(k, p)` cell of the derivative-norm table.
#[derive(Debug, Clone, Serialize)]
pub struct NormRow {
    pub k: usize,
    pub p: f64,
    /// `(||chi^{(k)}||_p^p sum_n a_n^p l_n^{kp-1})^{1/p}` over the train.
    pub series_value: f64,
    /// Per-summand composite Simpson quadrature of the same norm.
    pub quadrature_value: f64,
    pub rel_gap: f64,
}

/// Derivative-norm table of the dilated harmonic train on its window,
/// plus the windowed L^1 size of the first derivative against the
/// harmonic reference `||chi'||_1 H_{n_max}`.
#[derive(Debug, Clone, Serialize)]
pub struct TrainNormTable {
    pub n_max: usize,
    pub window: (f64, f64),
    pub rows: Vec<NormRow>,
    pub deriv_l1_quadrature: f64,
    pub deriv_l1_reference: f64,
    pub deriv_l1_rel_gap: f64,
}

/// Tabulates `||train^{(k)}||_{L^p}` for `k <= k_max` over the window
/// `[-1, 2 n_max + 1]`, by the per-summand closed series and independently
/// by quadrature. The undilated L^1 size of the first derivative grows
/// like the harmonic numbers and is reported alongside; it is the one
/// divergent corner of the table, so `p > 1` is required here.
pub fn train_norm_table(p: f64, n_max: usize, k_max: usize) -> Result<TrainNormTable> {
    if !p.is_finite() || !(p > 1.0) {
        return Err(Error::Domain(format!("norm table needs finite p > 1, got {p}")));
    }
    if n_max == 0 {
        return Err(Error::Domain("norm table needs n_max >= 1".into()));
    }
    if k_max > ORACLE_KMAX {
        return Err(Error::Domain(format!(
            "norm table supports k_max <= {ORACLE_KMAX}, got {k_max}"
        )));
    }
    let train = BumpTrain::dilated_harmonic(n_max)?;
    let mut rows = Vec::with_capacity(k_max + 1);
    for k in 0..=k_max {
        let template_mass = chi_power_mass(k, p);
        let mut series_pp = 0.0;
        let mut quad_pp = 0.0;
        for n in 1..=n_max {
            let (a, l) = (train.amp(n), train.rate(n));
            series_pp += a.powf(p) * l.powf(k as f64 * p - 1.0) * template_mass;
            let (lo, hi) = train.bump_support(n);
            let c = 2.0 * n as f64;
            let scale = a * l.powi(k as i32);
            quad_pp += simpson_fn(
                |x| (scale * chi_derivative(k, l * (x - c))).abs().powf(p),
                lo,
                hi,
                BUMP_PANELS,
            );
        }
        let series_value = series_pp.powf(1.0 / p);
        let quadrature_value = quad_pp.powf(1.0 / p);
        rows.push(NormRow {
            k,
            p,
            series_value,
            quadrature_value,
            rel_gap: (series_value - quadrature_value).abs() / series_value,
        });
    }
    let mut l1 = 0.0;
    for n in 1..=n_max {
        let (lo, hi) = train.bump_support(n);
        let c = 2.0 * n as f64;
        let (a, l) = (train.amp(n), train.rate(n));
        l1 += simpson_fn(|x| (a * l * chi_derivative(1, l * (x - c))).abs(), lo, hi, BUMP_PANELS);
    }
    let reference = chi_power_mass(1, 1.0) * harmonic(n_max);
    Ok(TrainNormTable {
        n_max,
        window: (-1.0, 2.0 * n_max as f64 + 1.0),
        rows,
        deriv_l1_quadrature: l1,
        deriv_l1_reference: reference,
        deriv_l1_rel_gap: (l1 - reference).abs() / reference,
    })
}

/// Windowed masses of the two product terms on one window of the ladder.
#[derive(Debug, Clone, Serialize)]
pub struct DivergenceRow {
    pub n_window: usize,
    pub right_edge: f64,
    /// Number of selected indices inside the window.
    pub selected_count: usize,
    /// `int |phi_b' * primitive(phi_a)|^p` over the window.
    pub term1_mass: f64,
    /// `int |phi_b * phi_a|^p` over the window.
    pub term2_mass: f64,
}

/// Growth report for the two product terms that control the mixed
/// derivative of a composed perturbation.
#[derive(Debug, Clone, Serialize)]
pub struct DivergenceReport {
    pub p: f64,
    pub n_max: usize,
    pub rows: Vec<DivergenceRow>,
    /// Least-squares slope through the origin of term-1 mass against the
    /// selected count.
    pub fitted_slope: f64,
    /// Analytic per-index floor `||chi||_1^p ||chi'||_p^p`: amplitude
    /// times the primitive's level clears `||chi||_1` at every selected
    /// index, so each one contributes at least this much.
    pub per_index_floor: f64,
    /// Worst gap between the quadrature prefix integral of the dense
    /// train at `2n + 1` and `||chi||_1 H_n`, over the checked `n`.
    pub primitive_max_gap: f64,
}

/// Measures `phi_b'(x) * theta(x)` and `phi_b(x) * phi_a(x)` over the
/// window ladder `[-1, 2N + 1]`, `N` from [`WINDOW_SCHEDULE`] capped by
/// `n_max`. Here `phi_a` is the dense undilated harmonic train, `theta`
/// its primitive, and `phi_b` the sparse selection train; the first
/// product gains at least a fixed mass per selected index, the second
/// stays bounded.
pub fn halflie_divergence(p: f64, n_max: usize) -> Result<DivergenceReport> {
    if !p.is_finite() || !(p > 1.0) {
        return Err(Error::Domain(format!(
            "divergence report needs finite p > 1, got {p}"
        )));
    }
    if n_max < WINDOW_SCHEDULE[0] {
        return Err(Error::Domain(format!(
            "window ladder starts at N = {}, got n_max = {n_max}",
            WINDOW_SCHEDULE[0]
        )));
    }
    let dense = BumpTrain::harmonic_train(n_max)?;
    let sparse = BumpTrain::log_selection(n_max)?;
    let selected = selected_indices(n_max);

    let per_bump: Vec<(usize, f64, f64)> = selected
        .iter()
        .map(|&n| {
            let (lo, hi) = sparse.bump_support(n);
            let t1 = simpson_fn(
                |x| (sparse.derivative_raw(1, x) * dense.primitive(x)).abs().powf(p),
                lo,
                hi,
                BUMP_PANELS,
            );
            let t2 = simpson_fn(
                |x| (sparse.value(x) * dense.value(x)).abs().powf(p),
                lo,
                hi,
                BUMP_PANELS,
            );
            (n, t1, t2)
        })
        .collect();

    let windows: Vec<usize> = WINDOW_SCHEDULE.iter().copied().filter(|&nw| nw <= n_max).collect();
    let rows: Vec<DivergenceRow> = windows
        .iter()
        .map(|&nw| {
            let inside = per_bump.iter().filter(|(n, _, _)| *n <= nw);
            let (mut count, mut t1, mut t2) = (0usize, 0.0, 0.0);
            for (_, a, b) in inside {
                count += 1;
                t1 += a;
                t2 += b;
            }
            DivergenceRow {
                n_window: nw,
                right_edge: 2.0 * nw as f64 + 1.0,
                selected_count: count,
                term1_mass: t1,
                term2_mass: t2,
            }
        })
        .collect();

    let (mut xy, mut xx) = (0.0, 0.0);
    for row in &rows {
        let k = row.selected_count as f64;
        xy += k * row.term1_mass;
        xx += k * k;
    }

    // Prefix quadrature of the dense train against its closed masses,
    // checked at the window edges and a few small prefixes.
    let mut checkpoints: Vec<usize> = windows.clone();
    checkpoints.extend([1, 2, 3, 5, 10, 55].iter().filter(|&&n| n <= n_max));
    checkpoints.sort_unstable();
    checkpoints.dedup();
    let deepest = *checkpoints.last().expect("nonempty checkpoint list");
    let mut acc = 0.0;
    let mut primitive_max_gap = 0.0f64;
    for n in 1..=deepest {
        let (lo, hi) = dense.bump_support(n);
        acc += simpson_fn(|x| dense.value(x), lo, hi, BUMP_PANELS);
        if checkpoints.contains(&n) {
            primitive_max_gap = primitive_max_gap.max((acc - chi_l1() * harmonic(n)).abs());
        }
    }

    Ok(DivergenceReport {
        p,
        n_max,
        rows,
        fitted_slope: xy / xx,
        per_index_floor: chi_l1().powf(p) * chi_power_mass(1, p),
        primitive_max_gap,
    })
}

/// One row of the node-asymptotics report.
#[derive(Debug, Clone, Serialize)]
pub struct MuRow {
    pub k: usize,
    /// `ln mu_k` with `mu_k = 2^k sqrt(k!) M_k`.
    pub log_mu: f64,
    /// `r_k = (mu_k / (k! M_k))^{1/k}`, evaluated in the log domain.
    pub r: f64,
    pub k_r: f64,
}

/// Node asymptotics for `mu_k = 2^k sqrt(k!) M_k`.
#[derive(Debug, Clone, Serialize)]
pub struct MuReport {
    pub k_max: usize,
    pub rows: Vec<MuRow>,
    /// Smallest `ln(mu_{k+1} - mu_k)` seen; `>= 0` means unit spacing.
    pub min_log_spacing: f64,
}

/// The same `r_k` without any weight sequence: the `M_k` cancel, leaving
/// `2 exp(-ln(k!) / (2k))`.
pub fn r_closed_form(k: usize) -> f64 {
    2.0 * (-libm::lgamma((k + 1) as f64) / (2.0 * k as f64)).exp()
}

/// Computes, entirely in the log domain, the normalized roots
/// `r_k = (mu_k / (k! M_k))^{1/k}` and `k r_k` for `k <= k_max`, and
/// checks that `r_k` strictly decreases, `k r_k` strictly increases, and
/// consecutive nodes stay at least 1 apart. A violation is an invariant
/// error; the weight sequence must satisfy the full hypothesis bundle and
/// extend one index past `k_max`.
pub fn mu_asymptotics(weights: &WeightSequence, k_max: usize) -> Result<MuReport> {
    if k_max < 1 {
        return Err(Error::Domain("node asymptotics need k_max >= 1".into()));
    }
    if weights.kmax() <= k_max {
        return Err(Error::Domain(format!(
            "weight sequence is truncated at {}, but the spacing check needs index {}",
            weights.kmax(),
            k_max + 1
        )));
    }
    if !check_conditions(weights).hypothesis_bundle {
        return Err(Error::Domain(
            "node asymptotics need the hypothesis bundle: normalized, nondecreasing, \
             log-convex, bounded moderate growth"
                .into(),
        ));
    }
    let lf = LogFactorial::up_to(k_max + 1);
    let log_mu =
        |k: usize| k as f64 * std::f64::consts::LN_2 + 0.5 * lf.get(k) + weights.log_value(k);

    let mut rows = Vec::with_capacity(k_max);
    let mut prev_r = f64::INFINITY;
    let mut prev_kr = 0.0;
    for k in 1..=k_max {
        let lm = log_mu(k);
        let r = ((lm - lf.get(k) - weights.log_value(k)) / k as f64).exp();
        let k_r = k as f64 * r;
        if r >= prev_r {
            return Err(Error::Invariant(format!(
                "normalized root failed to decrease at k = {k}: {r} after {prev_r}"
            )));
        }
        if k_r <= prev_kr {
            return Err(Error::Invariant(format!(
                "scaled root failed to increase at k = {k}: {k_r} after {prev_kr}"
            )));
        }
        prev_r = r;
        prev_kr = k_r;
        rows.push(MuRow { k, log_mu: lm, r, k_r });
    }

    let mut min_log_spacing = f64::INFINITY;
    for k in 0..=k_max {
        let (a, b) = (log_mu(k), log_mu(k + 1));
        if b <= a {
            return Err(Error::Invariant(format!(
                "nodes failed to increase at k = {k}: ln mu goes {a} -> {b}"
            )));
        }
        // ln(mu_{k+1} - mu_k) without leaving the log domain.
        let spacing = b + (-((a - b).exp())).ln_1p();
        if spacing < -1e-9 {
            return Err(Error::Invariant(format!(
                "node spacing dropped below 1 at k = {k}: ln(mu_{{k+1}} - mu_k) = {spacing:.3e}"
            )));
        }
        min_log_spacing = min_log_spacing.min(spacing);
    }

    Ok(MuReport { k_max, rows, min_log_spacing })
}
