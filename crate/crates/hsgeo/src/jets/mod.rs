//! Truncated univariate Taylor jets: composition by partition enumeration,
//! compositional inversion by fixed-point iteration, majorant series with
//! coefficient certificates, and the partition-sum growth check.
//!
//! A [`Jet`] is a germ: a base point `b` and coefficients `a_0..a_N` of
//! `f(b + t) = sum a_k t^k`, so `a_k = f^(k)(b)/k!`. Arithmetic is generic
//! over [`Scalar`], instantiated at `f64` for numerics and at
//! `num_rational::BigRational` for exact cross-checks.

mod fdb;
mod majorant;
mod scalar;

pub use fdb::{
    partition_bound_check, partition_sum_lhs, PartitionBoundFit, PartitionBoundReport,
    PARTITION_CAP,
};
pub use majorant::{majorant_margins_exact, majorant_series, BoundMargin, MajorantSeries};
pub use scalar::Scalar;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Jet<S> {
    base_point: S,
    coeffs: Vec<S>,
}

impl<S: Scalar> Jet<S> {
    /// A jet needs degree >= 1 and finite coefficients.
    pub fn new(base_point: S, coeffs: Vec<S>) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::Domain(format!(
                "a jet needs degree >= 1, got {} coefficients",
                coeffs.len()
            )));
        }
        if !base_point.is_finite_scalar() || coeffs.iter().any(|c| !c.is_finite_scalar()) {
            return Err(Error::Domain("jet coefficients must be finite".into()));
        }
        Ok(Jet { base_point, coeffs })
    }

    /// The identity germ at `b`: `id(b + t) = b + t`.
    pub fn identity_at(b: S, degree: usize) -> Self {
        let mut coeffs = vec![S::zero(); degree + 1];
        coeffs[0] = b.clone();
        coeffs[1] = S::one();
        Jet {
            base_point: b,
            coeffs,
        }
    }

    pub fn identity(degree: usize) -> Self {
        Self::identity_at(S::zero(), degree)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn base_point(&self) -> &S {
        &self.base_point
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &S {
        &self.coeffs[k]
    }

    /// Value of the germ at its base point (`a_0`).
    pub fn value(&self) -> &S {
        &self.coeffs[0]
    }

    /// Evaluates the truncated polynomial at offset `t` from the base point.
    pub fn eval_offset(&self, t: &S) -> S {
        let mut acc = self.coeffs[self.degree()].clone();
        for k in (0..self.degree()).rev() {
            acc = acc * t.clone() + self.coeffs[k].clone();
        }
        acc
    }

    /// Composition `self ∘ inner`, valid when the inner germ's value equals
    /// this jet's base point (the caller aligns germs; there is no
    /// automatic re-centering). Degrees must match.
    pub fn compose(&self, inner: &Jet<S>) -> Result<Jet<S>> {
        if self.degree() != inner.degree() {
            return Err(Error::JetMismatch(format!(
                "compose needs a common degree, got {} and {}",
                self.degree(),
                inner.degree()
            )));
        }
        if inner.value() != &self.base_point {
            return Err(Error::JetMismatch(
                "inner germ value must equal the outer base point".into(),
            ));
        }
        let mut delta = inner.coeffs.clone();
        delta[0] = S::zero();
        let coeffs = fdb::compose_series(&self.coeffs, &delta, self.degree());
        Ok(Jet {
            base_point: inner.base_point.clone(),
            coeffs,
        })
    }

    /// Compositional inverse of a normalized germ (`a_0 = 0`, `a_1 != 0`),
    /// as the germ of `f^{-1}` at `f(b) = 0`; its value is `b`.
    ///
    /// Solved by the fixed-point iteration `h <- T s + phi(h)` with
    /// `T = 1/a_1` and `phi(u) = -T sum_{k>=2} a_k u^k`; the degree-i
    /// coefficient stabilizes after i iterations.
    pub fn invert(&self) -> Result<Jet<S>> {
        if self.coeffs[0] != S::zero() {
            return Err(Error::JetMismatch(
                "inversion needs a normalized germ with zero value".into(),
            ));
        }
        if self.coeffs[1] == S::zero() {
            return Err(Error::SingularGerm(
                "reversion needs a nonzero linear coefficient".into(),
            ));
        }
        let degree = self.degree();
        let t = S::one() / self.coeffs[1].clone();
        let mut phi = vec![S::zero(); degree + 1];
        for k in 2..=degree {
            phi[k] = -(t.clone() * self.coeffs[k].clone());
        }
        let mut h = vec![S::zero(); degree + 1];
        h[1] = t.clone();
        for _ in 0..degree {
            let mut next = fdb::compose_series(&phi, &h, degree);
            next[1] = next[1].clone() + t.clone();
            h = next;
        }
        h[0] = self.base_point.clone();
        Ok(Jet {
            base_point: S::zero(),
            coeffs: h,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use rand::{Rng, SeedableRng};

    fn rjet(coeffs: &[i64]) -> Jet<BigRational> {
        Jet::new(
            BigRational::from_integer(BigInt::from(0)),
            coeffs
                .iter()
                .map(|&n| BigRational::from_integer(BigInt::from(n)))
                .collect(),
        )
        .unwrap()
    }

    fn rvec(coeffs: &[i64]) -> Vec<BigRational> {
        coeffs
            .iter()
            .map(|&n| BigRational::from_integer(BigInt::from(n)))
            .collect()
    }

    #[test]
    fn compose_with_identity_is_identity_on_jets() {
        let f = rjet(&[3, 1, 4, 1, 5]);
        let id = Jet::identity(4);
        assert_eq!(f.compose(&id).unwrap(), f);
    }

    #[test]
    fn squaring_after_shift_expands_correctly() {
        // f(y) = y^2 composed with g(x) = x + x^2 gives x^2 + 2x^3 + x^4.
        let f = rjet(&[0, 0, 1, 0, 0]);
        let g = rjet(&[0, 1, 1, 0, 0]);
        let h = f.compose(&g).unwrap();
        assert_eq!(h.coeffs(), rvec(&[0, 0, 1, 2, 1]).as_slice());
    }

    #[test]
    fn compose_matches_brute_force_expansion() {
        // Naive oracle: expand f(g(x)) by repeated full polynomial
        // multiplication without truncation, then read the low-order part.
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x6a65_7431);
        for _ in 0..12 {
            let deg = 8;
            let fc: Vec<i64> = (0..=deg).map(|_| rng.gen_range(-5..=5)).collect();
            let mut gc: Vec<i64> = (0..=deg).map(|_| rng.gen_range(-5..=5)).collect();
            gc[0] = 0;
            let f = rjet(&fc);
            let g = rjet(&gc);
            let jet = f.compose(&g).unwrap();

            let mut full = vec![BigRational::from_integer(BigInt::from(0)); 1];
            full[0] = BigRational::from_integer(BigInt::from(fc[deg]));
            for k in (0..deg).rev() {
                // full = full * g + f_k, untruncated.
                let mut prod =
                    vec![BigRational::from_integer(BigInt::from(0)); full.len() + deg];
                for (i, a) in full.iter().enumerate() {
                    for (j, b) in gc.iter().enumerate() {
                        prod[i + j] +=
                            a.clone() * BigRational::from_integer(BigInt::from(*b));
                    }
                }
                prod[0] += BigRational::from_integer(BigInt::from(fc[k]));
                full = prod;
            }
            for n in 0..=deg {
                assert_eq!(jet.coeff(n), &full[n], "degree {n}");
            }
        }
    }

    #[test]
    fn compose_is_associative_in_rationals() {
        let f = rjet(&[0, 2, -1, 3, 0, 1, 0]);
        let g = rjet(&[0, 1, 1, -2, 0, 0, 4]);
        let h = rjet(&[0, 3, 0, 1, -1, 0, 2]);
        let left = f.compose(&g.compose(&h).unwrap()).unwrap();
        let right = f.compose(&g).unwrap().compose(&h).unwrap();
        assert_eq!(left, right);
    }

    #[test]
    fn partition_and_horner_kernels_agree() {
        let outer = rvec(&[2, 3, -1, 0, 5, -2, 1, 4, 0, -3, 1]);
        let inner = rvec(&[0, 1, -2, 3, 0, 1, -1, 0, 2, 1, -1]);
        let a = fdb::compose_series_partitions(&outer, &inner, 10);
        let b = fdb::compose_series_horner(&outer, &inner, 10);
        assert_eq!(a, b);
    }

    #[test]
    fn reversion_of_quadratic_gives_signed_catalan_numbers() {
        let mut coeffs = vec![0i64; 13];
        coeffs[1] = 1;
        coeffs[2] = 1;
        let f = rjet(&coeffs);
        let inv = f.invert().unwrap();
        let catalan: [i64; 13] = [
            0, 1, -1, 2, -5, 14, -42, 132, -429, 1430, -4862, 16796, -58786,
        ];
        assert_eq!(inv.coeffs(), rvec(&catalan).as_slice());
        let back = f.compose(&inv).unwrap();
        assert_eq!(back, Jet::identity(12));
    }

    #[test]
    fn reversion_special_cases() {
        let id: Jet<BigRational> = Jet::identity(5);
        assert_eq!(id.invert().unwrap(), id);

        let double = rjet(&[0, 2, 0, 0]);
        let half = double.invert().unwrap();
        assert_eq!(
            half.coeffs()[1],
            BigRational::new(BigInt::from(1), BigInt::from(2))
        );
        assert_eq!(half.coeffs()[2], BigRational::from_integer(BigInt::from(0)));
        assert_eq!(half.coeffs()[3], BigRational::from_integer(BigInt::from(0)));
    }

    #[test]
    fn reversion_round_trip_in_floats() {
        let f = Jet::new(0.0, vec![0.0, 1.3, -0.4, 0.25, 0.1, -0.05, 0.02, 0.01, 0.0])
            .unwrap();
        let inv = f.invert().unwrap();
        let back = f.compose(&inv).unwrap();
        let id: Jet<f64> = Jet::identity(8);
        for k in 0..=8 {
            assert!(
                (back.coeff(k) - id.coeff(k)).abs() < 1e-12,
                "k = {k}: {}",
                back.coeff(k)
            );
        }
    }

    #[test]
    fn errors_on_bad_germs() {
        let f = rjet(&[1, 1, 0]);
        assert!(f.invert().is_err());
        let g = rjet(&[0, 0, 1]);
        assert!(matches!(g.invert(), Err(Error::SingularGerm(_))));
        let a = rjet(&[0, 1, 0]);
        let b = rjet(&[0, 1, 0, 0]);
        assert!(a.compose(&b).is_err());
        let misaligned = rjet(&[5, 1, 0]);
        assert!(a.compose(&misaligned).is_err());
    }

    #[test]
    fn partition_sum_small_cases() {
        use crate::weights::WeightSequence;
        let m1 = WeightSequence::constant_one(8).unwrap();
        assert_eq!(partition_sum_lhs(1.0, &m1, 0), 1.0);
        // Order 1 has the single partition {1}: A * M_1 * M_1.
        assert_eq!(partition_sum_lhs(1.0, &m1, 1), 1.0);
        // Order 2: partitions {2} and {1,1} give A M_1 M_2 + A^2 M_2 M_1^2.
        let got = partition_sum_lhs(1.0, &m1, 2);
        assert!((got - 2.0).abs() < 1e-12, "{got}");
    }

    #[test]
    fn partition_bound_rate_decreases_with_a() {
        use crate::weights::WeightSequence;
        // For M = 1 the partition sum telescopes to A(1+A)^{gamma-1}
        // exactly, so the fitted rate is 1 + A: strictly decreasing along
        // the sweep and never below 1.
        let m1 = WeightSequence::constant_one(24).unwrap();
        let report = partition_bound_check(1.0, &m1, 20).unwrap();
        assert!(report.c_decreasing, "rates: {:?}",
            report.fits.iter().map(|f| f.c).collect::<Vec<_>>());
        for fit in &report.fits {
            assert!(
                (fit.c - (1.0 + fit.a)).abs() < 1e-6 * (1.0 + fit.a),
                "A={}: rate {} vs 1+A",
                fit.a,
                fit.c
            );
        }
        // Factorial weights: the rate still drops on the first decade.
        let m = WeightSequence::gevrey(2.0, 40).unwrap();
        let report = partition_bound_check(1.0, &m, 20).unwrap();
        assert!(report.fits[1].c < report.fits[0].c);
        // The envelope really bounds every normalized value.
        for fit in &report.fits {
            for (g, v) in fit.normalized.iter().enumerate() {
                let bound = fit.b * fit.c.powi(g as i32 + 1);
                assert!(*v <= bound * (1.0 + 1e-9), "gamma {} of A={}", g + 1, fit.a);
            }
        }
    }
}
