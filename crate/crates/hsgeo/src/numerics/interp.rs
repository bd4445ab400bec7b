//! Cubic Hermite interpolation on uniform grids with a monotonicity guard.
//!
//! When nodal derivatives are supplied by the caller (the usual case here:
//! constructions carry their derivatives), the interpolant is the plain
//! cubic Hermite and converges at fourth order. Cells whose Hermite data
//! would break monotonicity of monotone samples are adjusted in the
//! Fritsch-Carlson manner, which only triggers on under-resolved data.
//! Without derivatives, slopes are estimated by the Fritsch-Butland
//! harmonic-mean rule, giving the classical shape-preserving interpolant.

/// Interpolant over `f` (and derivative `d`) samples on the uniform grid
/// `x_i = x0 + i h`.
#[derive(Debug, Clone)]
pub struct HermiteGrid<'a> {
    x0: f64,
    h: f64,
    f: &'a [f64],
    d: &'a [f64],
}

impl<'a> HermiteGrid<'a> {
    pub fn new(x0: f64, h: f64, f: &'a [f64], d: &'a [f64]) -> Self {
        assert_eq!(f.len(), d.len());
        assert!(f.len() >= 2);
        assert!(h > 0.0);
        HermiteGrid { x0, h, f, d }
    }

    fn cell(&self, x: f64) -> (usize, f64) {
        let n = self.f.len();
        let t = (x - self.x0) / self.h;
        let i = (t.floor() as isize).clamp(0, n as isize - 2) as usize;
        let u = t - i as f64;
        (i, u)
    }

    /// Nodal slopes for cell `i`, guarded so that monotone cell data stays
    /// monotone under interpolation.
    fn guarded_slopes(&self, i: usize) -> (f64, f64) {
        let delta = (self.f[i + 1] - self.f[i]) / self.h;
        let (mut d0, mut d1) = (self.d[i], self.d[i + 1]);
        if delta == 0.0 {
            return (d0, d1);
        }
        let alpha = d0 / delta;
        let beta = d1 / delta;
        if alpha < 0.0 || beta < 0.0 {
            // Sign disagreement: genuine extremum inside the cell, leave it.
            return (d0, d1);
        }
        let r2 = alpha * alpha + beta * beta;
        if r2 > 9.0 {
            let tau = 3.0 / r2.sqrt();
            d0 = tau * alpha * delta;
            d1 = tau * beta * delta;
        }
        (d0, d1)
    }

    pub fn eval(&self, x: f64) -> f64 {
        let (i, u) = self.cell(x);
        let (d0, d1) = self.guarded_slopes(i);
        let (f0, f1) = (self.f[i], self.f[i + 1]);
        let h = self.h;
        let h00 = (1.0 + 2.0 * u) * (1.0 - u) * (1.0 - u);
        let h10 = u * (1.0 - u) * (1.0 - u);
        let h01 = u * u * (3.0 - 2.0 * u);
        let h11 = u * u * (u - 1.0);
        h00 * f0 + h10 * h * d0 + h01 * f1 + h11 * h * d1
    }

    pub fn eval_deriv(&self, x: f64) -> f64 {
        let (i, u) = self.cell(x);
        let (d0, d1) = self.guarded_slopes(i);
        let (f0, f1) = (self.f[i], self.f[i + 1]);
        let h = self.h;
        let dh00 = 6.0 * u * (u - 1.0);
        let dh10 = (1.0 - u) * (1.0 - 3.0 * u);
        let dh01 = -dh00;
        let dh11 = u * (3.0 * u - 2.0);
        (dh00 * f0 + dh01 * f1) / h + dh10 * d0 + dh11 * d1
    }
}

/// Fritsch-Butland slope estimates for samples without derivative data.
pub fn shape_preserving_slopes(f: &[f64], h: f64) -> Vec<f64> {
    let n = f.len();
    assert!(n >= 2);
    let mut d = vec![0.0; n];
    let delta: Vec<f64> = (0..n - 1).map(|i| (f[i + 1] - f[i]) / h).collect();
    d[0] = delta[0];
    d[n - 1] = delta[n - 2];
    for i in 1..n - 1 {
        let (a, b) = (delta[i - 1], delta[i]);
        if a * b > 0.0 {
            // Weighted harmonic mean (uniform spacing weights 1/2, 1/2).
            d[i] = 2.0 * a * b / (a + b);
        } else {
            d[i] = 0.0;
        }
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hermite_reproduces_cubics_exactly() {
        let h = 0.25;
        let xs: Vec<f64> = (0..9).map(|i| i as f64 * h).collect();
        let f: Vec<f64> = xs.iter().map(|&x| x.powi(3) - x + 0.5).collect();
        let d: Vec<f64> = xs.iter().map(|&x| 3.0 * x * x - 1.0).collect();
        let spline = HermiteGrid::new(0.0, h, &f, &d);
        for j in 0..40 {
            let x = 0.05 * j as f64;
            let exact = x.powi(3) - x + 0.5;
            assert!((spline.eval(x) - exact).abs() < 1e-13);
            let dexact = 3.0 * x * x - 1.0;
            assert!((spline.eval_deriv(x) - dexact).abs() < 1e-12);
        }
    }

    #[test]
    fn hermite_with_true_derivatives_is_fourth_order() {
        let errs: Vec<f64> = [0.02f64, 0.01]
            .iter()
            .map(|&h| {
                let n = (2.0 / h) as usize;
                let f: Vec<f64> = (0..=n).map(|i| (i as f64 * h).sin()).collect();
                let d: Vec<f64> = (0..=n).map(|i| (i as f64 * h).cos()).collect();
                let spline = HermiteGrid::new(0.0, h, &f, &d);
                (0..200)
                    .map(|j| {
                        let x = 0.005 + j as f64 * 0.0097;
                        (spline.eval(x) - x.sin()).abs()
                    })
                    .fold(0.0f64, f64::max)
            })
            .collect();
        let order = (errs[0] / errs[1]).log2();
        assert!(order > 3.5, "observed order {order}");
    }

    #[test]
    fn monotone_data_stays_monotone() {
        // A step-like profile whose plain cubic interpolant overshoots.
        let f = [0.0, 0.0, 0.0, 0.1, 4.0, 8.0, 8.0, 8.0];
        let h = 1.0;
        let d = shape_preserving_slopes(&f, h);
        let spline = HermiteGrid::new(0.0, h, &f, &d);
        let mut prev = spline.eval(0.0);
        for j in 1..=700 {
            let x = j as f64 * 0.01;
            let v = spline.eval(x);
            assert!(v >= prev - 1e-12, "dip at x = {x}");
            assert!((-1e-12..=8.0 + 1e-12).contains(&v), "overshoot at x = {x}");
            prev = v;
        }
    }
}
