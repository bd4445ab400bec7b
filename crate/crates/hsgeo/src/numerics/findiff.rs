//! Centered finite differences of fourth order with explicit noise
//! accounting.
//!
//! Weights come from the Fornberg recursion, so any derivative order is
//! available from one routine. Every evaluation also returns a stability
//! estimate: the rounding noise a stencil amplifies grows like
//! `eps * max|f| * sum|w| / h^k`, and callers are expected to refuse
//! results where that estimate is not far below the signal.

/// Fornberg weights for derivatives `0..=m` at evaluation point `z` on
/// nodes `xs`. `result[k][j]` multiplies `f(xs[j])` in the `k`-th
/// derivative approximation.
pub fn fornberg_weights(z: f64, xs: &[f64], m: usize) -> Vec<Vec<f64>> {
    let n = xs.len();
    assert!(n > m, "need more nodes than the derivative order");
    let mut c = vec![vec![0.0; n]; m + 1];
    let mut c1 = 1.0;
    let mut c4 = xs[0] - z;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = xs[i] - z;
        for j in 0..i {
            let c3 = xs[i] - xs[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i] = c1 * (k as f64 * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][j] = (c4 * c[k][j] - k as f64 * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    c
}

/// Symmetric stencil offsets (in units of `h`) for the `k`-th derivative
/// at fourth-order accuracy.
pub fn centered_offsets(k: usize) -> Vec<i64> {
    let npts = 2 * k.div_ceil(2) + 3;
    let half = (npts / 2) as i64;
    (-half..=half).collect()
}

/// Weights (already scaled by `h^{-k}`) for the fourth-order centered
/// stencil of the `k`-th derivative on a grid of spacing `h`.
pub fn centered_stencil(k: usize, h: f64) -> (Vec<i64>, Vec<f64>) {
    let offsets = centered_offsets(k);
    let xs: Vec<f64> = offsets.iter().map(|&o| o as f64 * h).collect();
    let weights = fornberg_weights(0.0, &xs, k).swap_remove(k);
    (offsets, weights)
}

/// Rounding-noise diagnostics for a stencil application.
#[derive(Debug, Clone, Copy)]
pub struct StencilStability {
    /// `eps * max|f sample| * sum|w|`: absolute noise floor of the result.
    pub noise_estimate: f64,
    /// Sum of absolute scaled weights.
    pub sum_abs_weights: f64,
}

impl StencilStability {
    /// True when the noise floor stays below `rel_tol` of the signal scale.
    pub fn trustworthy(&self, signal_scale: f64, rel_tol: f64) -> bool {
        self.noise_estimate <= rel_tol * signal_scale.abs()
    }
}

/// `k`-th derivative of a callable at `x` by the fourth-order centered
/// stencil with spacing `h`.
pub fn fd_derivative(f: impl Fn(f64) -> f64, x: f64, k: usize, h: f64) -> (f64, StencilStability) {
    if k == 0 {
        let v = f(x);
        return (
            v,
            StencilStability {
                noise_estimate: f64::EPSILON * v.abs(),
                sum_abs_weights: 1.0,
            },
        );
    }
    let (offsets, weights) = centered_stencil(k, h);
    let mut value = 0.0;
    let mut max_sample = 0.0f64;
    let mut sum_abs = 0.0;
    for (o, w) in offsets.iter().zip(&weights) {
        let s = f(x + *o as f64 * h);
        max_sample = max_sample.max(s.abs());
        sum_abs += w.abs();
        value += w * s;
    }
    let stability = StencilStability {
        noise_estimate: f64::EPSILON * max_sample * sum_abs,
        sum_abs_weights: sum_abs,
    };
    (value, stability)
}

/// One Richardson step over the fourth-order stencil: combines spacings
/// `h` and `h/2` to cancel the leading error term (sixth-order accurate).
pub fn fd_derivative_refined(
    f: impl Fn(f64) -> f64,
    x: f64,
    k: usize,
    h: f64,
) -> (f64, StencilStability) {
    let (coarse, _) = fd_derivative(&f, x, k, h);
    let (fine, stab) = fd_derivative(&f, x, k, h / 2.0);
    let value = (16.0 * fine - coarse) / 15.0;
    (
        value,
        StencilStability {
            noise_estimate: stab.noise_estimate * 17.0 / 15.0,
            sum_abs_weights: stab.sum_abs_weights,
        },
    )
}

/// Largest derivative order that stays trustworthy on a grid of spacing
/// `h`: the order `k` where amplified rounding noise `eps / h^k` first
/// exceeds `rel_tol` of a unit-scale signal.
pub fn max_trustworthy_order(h: f64, rel_tol: f64) -> usize {
    let mut k = 0;
    loop {
        let (_, w) = centered_stencil(k + 1, h);
        let sum_abs: f64 = w.iter().map(|x| x.abs()).sum();
        if f64::EPSILON * sum_abs > rel_tol {
            return k;
        }
        k += 1;
        if k > 32 {
            return k;
        }
    }
}
