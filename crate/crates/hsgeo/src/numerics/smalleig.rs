//! Eigenvalues of small symmetric positive semidefinite matrices by
//! explicit characteristic-polynomial roots, for dimensions up to 4,
//! plus the determinant and operator-norm helpers built on them.

use crate::error::{Error, Result};

/// Determinant by cofactor-free Gaussian elimination with partial
/// pivoting, `n <= 4`, row-major `a` of length `n*n`.
pub fn det_small(a: &[f64], n: usize) -> f64 {
    assert!(n >= 1 && n <= 4 && a.len() == n * n);
    let mut m = a.to_vec();
    let mut det = 1.0;
    for col in 0..n {
        let mut pivot = col;
        for row in col + 1..n {
            if m[row * n + col].abs() > m[pivot * n + col].abs() {
                pivot = row;
            }
        }
        if m[pivot * n + col] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            for k in 0..n {
                m.swap(col * n + k, pivot * n + k);
            }
            det = -det;
        }
        let d = m[col * n + col];
        det *= d;
        for row in col + 1..n {
            let factor = m[row * n + col] / d;
            for k in col..n {
                m[row * n + k] -= factor * m[col * n + k];
            }
        }
    }
    det
}

/// Coefficients `c_1..c_n` of `det(lambda I - A) = lambda^n + c_1
/// lambda^(n-1) + ... + c_n` by the Faddeev-LeVerrier recursion.
fn char_poly(a: &[f64], n: usize) -> Vec<f64> {
    let mut coeffs = Vec::with_capacity(n);
    let mut m = vec![0.0; n * n]; // M_0 = 0
    for k in 1..=n {
        // M_k = A * (M_{k-1} + c_{k-1} I); with c_0 treated via the
        // identity initialization below.
        let mut prev = m.clone();
        if k == 1 {
            for i in 0..n {
                prev[i * n + i] = 1.0;
            }
        }
        let mut next = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                let mut s = 0.0;
                for t in 0..n {
                    s += a[i * n + t] * prev[t * n + j];
                }
                next[i * n + j] = s;
            }
        }
        let trace: f64 = (0..n).map(|i| next[i * n + i]).sum();
        let c = -trace / k as f64;
        coeffs.push(c);
        for i in 0..n {
            next[i * n + i] += c;
        }
        m = next;
    }
    coeffs
}

fn poly_eval(coeffs: &[f64], x: f64) -> (f64, f64) {
    // p(x) = x^n + c1 x^(n-1) + ... + cn and its derivative.
    let mut p = 1.0;
    let mut dp = 0.0;
    for c in coeffs {
        dp = dp * x + p;
        p = p * x + c;
    }
    (p, dp)
}

fn newton_polish(coeffs: &[f64], mut x: f64) -> f64 {
    for _ in 0..4 {
        let (p, dp) = poly_eval(coeffs, x);
        if dp.abs() > 0.0 {
            let step = p / dp;
            if step.is_finite() {
                x -= step;
            }
        }
    }
    x
}

/// Real roots of a depressed cubic `t^3 + p t + q` with all-real spectrum.
fn depressed_cubic_roots(p: f64, q: f64) -> [f64; 3] {
    if p.abs() < 1e-300 {
        let t = -q.cbrt();
        return [t, t, t];
    }
    let m = 2.0 * (-p / 3.0).max(0.0).sqrt();
    if m == 0.0 {
        let t = -q.cbrt();
        return [t, t, t];
    }
    let arg = (3.0 * q / (p * m)).clamp(-1.0, 1.0);
    let theta = arg.acos() / 3.0;
    let tau = 2.0 * std::f64::consts::PI / 3.0;
    [
        m * theta.cos(),
        m * (theta - tau).cos(),
        m * (theta + tau).cos(),
    ]
}

/// Eigenvalues (ascending) of a symmetric positive semidefinite matrix,
/// `n <= 4`, computed from explicit characteristic-polynomial roots and
/// polished by Newton iterations on the polynomial.
pub fn sym_psd_eigenvalues(a: &[f64], n: usize) -> Vec<f64> {
    assert!(n >= 1 && n <= 4 && a.len() == n * n);
    let coeffs = char_poly(a, n);
    let mut roots: Vec<f64> = match n {
        1 => vec![-coeffs[0]],
        2 => {
            let (b, c) = (coeffs[0], coeffs[1]);
            let disc = (b * b - 4.0 * c).max(0.0).sqrt();
            vec![(-b - disc) / 2.0, (-b + disc) / 2.0]
        }
        3 => {
            let (b, c, d) = (coeffs[0], coeffs[1], coeffs[2]);
            let p = c - b * b / 3.0;
            let q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
            depressed_cubic_roots(p, q)
                .iter()
                .map(|t| t - b / 3.0)
                .collect()
        }
        4 => {
            let (a3, a2, a1, a0) = (coeffs[0], coeffs[1], coeffs[2], coeffs[3]);
            // Depress with lambda = y - a3/4.
            let e = a3 / 4.0;
            let p = a2 - 6.0 * e * e;
            let q = a1 - 2.0 * a2 * e + 8.0 * e * e * e;
            let r = a0 - a1 * e + a2 * e * e - 3.0 * e * e * e * e;
            let ys: Vec<f64> = if q.abs() < 1e-12 * (1.0 + p.abs() + r.abs()) {
                // Biquadratic.
                let disc = (p * p - 4.0 * r).max(0.0).sqrt();
                let z1 = ((-p + disc) / 2.0).max(0.0).sqrt();
                let z2 = ((-p - disc) / 2.0).max(0.0).sqrt();
                vec![z1, -z1, z2, -z2]
            } else {
                // Ferrari: real root w > 0 of
                // 8 w^3 + 8 p w^2 + (2 p^2 - 8 r) w - q^2 = 0.
                let cb = p;
                let cc = (2.0 * p * p - 8.0 * r) / 8.0;
                let cd = -q * q / 8.0;
                let dp = cc - cb * cb / 3.0;
                let dq = 2.0 * cb * cb * cb / 27.0 - cb * cc / 3.0 + cd;
                let w = depressed_cubic_roots(dp, dq)
                    .iter()
                    .map(|t| t - cb / 3.0)
                    .fold(f64::NEG_INFINITY, f64::max);
                let w = w.max(1e-300);
                let s = (2.0 * w).sqrt();
                let t0 = p / 2.0 + w;
                let shift = q / (2.0 * s);
                let mut ys = Vec::with_capacity(4);
                for (sgn, cterm) in [(1.0, t0 - shift), (-1.0, t0 + shift)] {
                    // y^2 + sgn s y + cterm = 0.
                    let disc = (s * s - 4.0 * cterm).max(0.0).sqrt();
                    ys.push((-sgn * s + disc) / 2.0);
                    ys.push((-sgn * s - disc) / 2.0);
                }
                ys
            };
            ys.iter().map(|y| y - e).collect()
        }
        _ => unreachable!(),
    };
    for root in roots.iter_mut() {
        *root = newton_polish(&coeffs, *root).max(0.0);
    }
    roots.sort_by(|x, y| x.partial_cmp(y).unwrap());
    roots
}

/// Operator norm data for a real square matrix `a` (row-major, `n <= 4`):
/// `(norm, inv_norm, det)` with norms spectral (largest/smallest singular
/// value). Errors when the determinant magnitude falls below `det_floor`.
pub fn op_norm_bounds(a: &[f64], n: usize, det_floor: f64) -> Result<(f64, f64, f64)> {
    let det = det_small(a, n);
    if det.abs() < det_floor {
        return Err(Error::IllConditioned(format!(
            "matrix determinant {det:e} below floor {det_floor:e}"
        )));
    }
    // Gram matrix A^T A.
    let mut gram = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            let mut s = 0.0;
            for t in 0..n {
                s += a[t * n + i] * a[t * n + j];
            }
            gram[i * n + j] = s;
        }
    }
    let eig = sym_psd_eigenvalues(&gram, n);
    let smin2 = eig[0];
    let smax2 = eig[n - 1];
    if smin2 <= 0.0 {
        return Err(Error::IllConditioned(
            "smallest singular value underflowed to zero".into(),
        ));
    }
    Ok((smax2.sqrt(), 1.0 / smin2.sqrt(), det))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinants_of_small_matrices() {
        assert!((det_small(&[3.0], 1) - 3.0).abs() < 1e-15);
        assert!((det_small(&[1.0, 2.0, 3.0, 4.0], 2) + 2.0).abs() < 1e-14);
        let a4 = [
            2.0, 0.0, 1.0, 0.0, //
            0.0, 3.0, 0.0, 1.0, //
            1.0, 0.0, 2.0, 0.0, //
            0.0, 1.0, 0.0, 3.0,
        ];
        // Block determinant: (2*2-1)*(3*3-1) = 3*8 = 24.
        assert!((det_small(&a4, 4) - 24.0).abs() < 1e-12);
    }

    #[test]
    fn eigenvalues_of_diagonal_and_conjugated_matrices() {
        let d = [4.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 9.0];
        let eig = sym_psd_eigenvalues(&d, 3);
        assert!((eig[0] - 1.0).abs() < 1e-12);
        assert!((eig[1] - 4.0).abs() < 1e-12);
        assert!((eig[2] - 9.0).abs() < 1e-12);

        // Symmetric 4x4 with known spectrum via trace/det cross-checks.
        let s = [
            5.0, 1.0, 0.5, 0.0, //
            1.0, 4.0, 0.0, 0.2, //
            0.5, 0.0, 3.0, 0.1, //
            0.0, 0.2, 0.1, 2.0,
        ];
        let eig = sym_psd_eigenvalues(&s, 4);
        let trace: f64 = eig.iter().sum();
        assert!((trace - 14.0).abs() < 1e-9, "trace {trace}");
        let prod: f64 = eig.iter().product();
        assert!(
            (prod - det_small(&s, 4)).abs() < 1e-8 * prod.abs(),
            "prod {prod} vs det {}",
            det_small(&s, 4)
        );
        for pair in eig.windows(2) {
            assert!(pair[0] <= pair[1]);
        }
    }

    #[test]
    fn op_norms_of_scaled_rotation() {
        // Rotation scaled by 2: both singular values 2.
        let c = (0.3f64).cos();
        let s = (0.3f64).sin();
        let a = [2.0 * c, -2.0 * s, 2.0 * s, 2.0 * c];
        let (norm, inv_norm, det) = op_norm_bounds(&a, 2, 1e-12).unwrap();
        assert!((norm - 2.0).abs() < 1e-12);
        assert!((inv_norm - 0.5).abs() < 1e-12);
        assert!((det - 4.0).abs() < 1e-12);
    }

    #[test]
    fn singular_matrix_is_rejected() {
        let a = [1.0, 2.0, 2.0, 4.0];
        assert!(op_norm_bounds(&a, 2, 1e-12).is_err());
    }
}
