//! Composite Simpson quadrature (plain and cumulative) and 16-point
//! Gauss-Legendre for short smooth integrals.

/// Composite Simpson rule over uniformly spaced `values` with step `h`.
///
/// Handles any number of intervals: full pairs use the 1-4-1 rule and a
/// trailing odd interval triple is closed with the 3/8 rule, keeping the
/// composite error at fourth order throughout. A single interval falls
/// back to the trapezoid rule.
pub fn simpson(values: &[f64], h: f64) -> f64 {
    let n = values.len().saturating_sub(1);
    match n {
        0 => 0.0,
        1 => 0.5 * h * (values[0] + values[1]),
        _ => {
            let mut total = 0.0;
            let pairs_end = if n % 2 == 0 { n } else { n - 3 };
            let mut i = 0;
            while i < pairs_end {
                total += h / 3.0 * (values[i] + 4.0 * values[i + 1] + values[i + 2]);
                i += 2;
            }
            if n % 2 != 0 {
                let j = n - 3;
                total += 3.0 * h / 8.0
                    * (values[j] + 3.0 * values[j + 1] + 3.0 * values[j + 2] + values[j + 3]);
            }
            total
        }
    }
}

/// Composite Simpson rule for a callable on `[a, b]` with `n` intervals.
pub fn simpson_fn(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    assert!(n >= 1);
    let h = (b - a) / n as f64;
    let values: Vec<f64> = (0..=n).map(|i| f(a + i as f64 * h)).collect();
    simpson(&values, h)
}

/// Cumulative Simpson integral: returns `F` with `F[0] = 0` and
/// `F[i] = integral of the sampled function from x_0 to x_i`.
///
/// Even nodes close a 1-4-1 pair; odd nodes use the three-point
/// interpolatory half-pair rule `h/12 * (5 f_i + 8 f_{i+1} - f_{i+2})`,
/// which integrates quadratics exactly and keeps every prefix fourth-order
/// accurate.
pub fn cumulative_simpson(values: &[f64], h: f64) -> Vec<f64> {
    let n = values.len();
    let mut out = vec![0.0; n];
    if n < 2 {
        return out;
    }
    if n == 2 {
        out[1] = 0.5 * h * (values[0] + values[1]);
        return out;
    }
    let mut i = 0;
    while i + 2 < n {
        out[i + 1] = out[i] + h / 12.0 * (5.0 * values[i] + 8.0 * values[i + 1] - values[i + 2]);
        out[i + 2] = out[i] + h / 3.0 * (values[i] + 4.0 * values[i + 1] + values[i + 2]);
        i += 2;
    }
    if i + 1 < n {
        // Trailing odd node: mirror of the half-pair rule on the last triple.
        out[i + 1] =
            out[i] + h / 12.0 * (-values[i - 1] + 8.0 * values[i] + 5.0 * values[i + 1]);
    }
    out
}

const GL16_NODES: [f64; 8] = [
    0.095_012_509_837_637_44,
    0.281_603_550_779_258_9,
    0.458_016_777_657_227_4,
    0.617_876_244_402_643_7,
    0.755_404_408_355_003_0,
    0.865_631_202_387_831_7,
    0.944_575_023_073_232_6,
    0.989_400_934_991_649_9,
];

const GL16_WEIGHTS: [f64; 8] = [
    0.189_450_610_455_068_5,
    0.182_603_415_044_923_6,
    0.169_156_519_395_002_5,
    0.149_595_988_816_576_7,
    0.124_628_971_255_533_9,
    0.095_158_511_682_492_78,
    0.062_253_523_938_647_89,
    0.027_152_459_411_754_09,
];

/// 16-point Gauss-Legendre quadrature of `f` over `[a, b]` (exact for
/// polynomials through degree 31).
pub fn gauss_legendre_16(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut total = 0.0;
    for i in 0..8 {
        let dx = half * GL16_NODES[i];
        total += GL16_WEIGHTS[i] * (f(mid - dx) + f(mid + dx));
    }
    half * total
}
