//! Least-squares line fits used by the trend diagnostics.

/// Ordinary least squares fit `y = slope * x + intercept`.
///
/// Returns `(slope, intercept)`. Panics on fewer than two points or a
/// degenerate abscissa spread, which would make any trend meaningless.
pub fn fit_line(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    assert_eq!(xs.len(), ys.len());
    assert!(xs.len() >= 2, "trend fit needs at least two points");
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    assert!(sxx > 0.0, "degenerate abscissae in trend fit");
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_exact_line() {
        let xs: Vec<f64> = (0..10).map(|i| i as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|x| -1.5 * x + 4.0).collect();
        let (s, b) = fit_line(&xs, &ys);
        assert!((s + 1.5).abs() < 1e-14);
        assert!((b - 4.0).abs() < 1e-13);
    }
}
