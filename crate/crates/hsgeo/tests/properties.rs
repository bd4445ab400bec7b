//! Randomized invariants over the core operations: these complement the
//! deterministic unit tests with draws across whole parameter ranges.

use proptest::prelude::*;

use hsgeo::corpus::parse_seed;
use hsgeo::diffeo::{compose, invert, Diffeo};
use hsgeo::hs::{distance, r_inverse, r_transform, HsDiffeo};
use hsgeo::jets::Jet;
use hsgeo::numerics::simpson_fn;
use hsgeo::patho::BumpTrain;
use hsgeo::spaces::{chi_derivative, DecayClaim, Descriptor, GridFunction};
use hsgeo::weights::{check_conditions, WeightSequence};

fn sup_gap(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .fold(0.0f64, |m, (&x, &y)| m.max((x - y).abs()))
}

fn bump_grid(amp: f64, center: f64, width: f64) -> GridFunction {
    // The tolerances below are second order in the step, so they are tied
    // to this resolution.
    GridFunction::from_descriptor(
        Descriptor::CompactBump { amp, center, width },
        (-6.0, 6.0),
        1e-3,
        DecayClaim::D,
    )
    .expect("bump inside the window")
}

/// Normalized germ at 0 with a unit-scale linear coefficient.
fn normalized_jet(lin: f64, rest: Vec<f64>) -> Jet<f64> {
    let mut coeffs = vec![0.0, lin];
    coeffs.extend(rest);
    Jet::new(0.0, coeffs).expect("finite coefficients")
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gevrey_sequences_satisfy_the_hypothesis_bundle(s in 1.0f64..2.0) {
        let ws = WeightSequence::gevrey(s, 64).unwrap();
        let report = check_conditions(&ws);
        prop_assert!(report.log_convex);
        prop_assert!(report.nondecreasing_from_one);
        prop_assert!(report.hypothesis_bundle, "bundle fails at s = {s}");
        for k in 0..=64 {
            prop_assert!(ws.log_value(k).is_finite());
        }
    }

    #[test]
    fn jet_reversion_composes_to_the_identity(
        lin in prop_oneof![0.5f64..2.0, -2.0f64..-0.5],
        rest in prop::collection::vec(-1.0f64..1.0, 2..8),
    ) {
        let f = normalized_jet(lin, rest);
        let inv = f.invert().unwrap();
        let round = f.compose(&inv).unwrap();
        prop_assert!((round.coeff(1) - 1.0).abs() < 1e-9);
        for k in 2..=round.degree() {
            prop_assert!(
                round.coeff(k).abs() < 1e-6,
                "degree {k} residual {}",
                round.coeff(k)
            );
        }
    }

    #[test]
    fn jet_composition_is_associative(
        a in prop::collection::vec(-1.0f64..1.0, 4..7),
        b in prop::collection::vec(-1.0f64..1.0, 4..7),
        c in prop::collection::vec(-1.0f64..1.0, 4..7),
    ) {
        let degree = a.len().min(b.len()).min(c.len());
        let jet = |v: &[f64]| {
            let mut coeffs = vec![0.0];
            coeffs.extend(&v[..degree]);
            Jet::new(0.0, coeffs).unwrap()
        };
        let (f, g, h) = (jet(&a), jet(&b), jet(&c));
        let left = f.compose(&g).unwrap().compose(&h).unwrap();
        let right = f.compose(&g.compose(&h).unwrap()).unwrap();
        for k in 0..=degree {
            let scale = left.coeff(k).abs().max(right.coeff(k).abs()).max(1.0);
            prop_assert!(
                (left.coeff(k) - right.coeff(k)).abs() < 1e-10 * scale,
                "degree {k}: {} vs {}",
                left.coeff(k),
                right.coeff(k)
            );
        }
    }

    #[test]
    fn chi_derivatives_alternate_parity(k in 0usize..=8, u in -0.999f64..0.999) {
        let plus = chi_derivative(k, u);
        let minus = chi_derivative(k, -u);
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let scale = plus.abs().max(minus.abs()).max(1e-308);
        prop_assert!(
            (minus - sign * plus).abs() <= 1e-9 * scale,
            "k = {k}, u = {u}: {minus} vs {}",
            sign * plus
        );
    }

    #[test]
    fn simpson_integrates_cubics_exactly(
        c0 in -2.0f64..2.0,
        c1 in -2.0f64..2.0,
        c2 in -2.0f64..2.0,
        c3 in -2.0f64..2.0,
        a in -3.0f64..3.0,
        len in 0.5f64..3.0,
    ) {
        let b = a + len;
        let f = |x: f64| c0 + x * (c1 + x * (c2 + x * c3));
        let primitive = |x: f64| {
            x * (c0 + x * (c1 / 2.0 + x * (c2 / 3.0 + x * c3 / 4.0)))
        };
        let exact = primitive(b) - primitive(a);
        let quad = simpson_fn(f, a, b, 64);
        prop_assert!(
            (quad - exact).abs() < 1e-10 * (exact.abs() + 1.0),
            "{quad} vs {exact}"
        );
    }

    #[test]
    fn seed_strings_round_trip(seed in any::<u64>()) {
        prop_assert_eq!(parse_seed(&seed.to_string()).unwrap(), seed);
        prop_assert_eq!(parse_seed(&format!("0x{seed:x}")).unwrap(), seed);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn bump_train_lookup_matches_the_naive_sum(
        n_max in 1usize..=40,
        k in 0usize..=3,
        offset in -2.0f64..4.0,
    ) {
        let train = BumpTrain::dilated_harmonic(n_max).unwrap();
        let probe = offset + 2.0 * (n_max / 2) as f64;
        let naive: f64 = (1..=n_max)
            .map(|n| {
                let l = train.rate(n);
                train.amp(n)
                    * l.powi(k as i32)
                    * chi_derivative(k, l * (probe - 2.0 * n as f64))
            })
            .sum();
        prop_assert_eq!(train.derivative(k, probe).unwrap(), naive);
        // The running integral never decreases.
        prop_assert!(train.primitive(probe) <= train.primitive(probe + 0.7));
    }

    #[test]
    fn diffeo_inversion_cancels_composition(
        amp in -0.25f64..0.25,
        center in -2.0f64..2.0,
        width in 1.2f64..2.0,
    ) {
        let f = Diffeo::new(bump_grid(amp, center, width)).unwrap();
        prop_assert!(f.witness() > 0.0);
        let inv = invert(&f).unwrap();
        prop_assert!(inv.residual < 1e-10);
        let round = compose(&f, &inv.diffeo).unwrap();
        let unit = round
            .perturbation()
            .samples()
            .iter()
            .fold(0.0f64, |m, &s| m.max(s.abs()));
        prop_assert!(unit < 1e-8, "round-trip sup {unit:.3e}");
    }

    #[test]
    fn coordinate_round_trip_and_self_distance(
        amp in -0.25f64..0.25,
        center in -2.0f64..2.0,
        width in 1.2f64..2.0,
    ) {
        let phi = HsDiffeo::new(bump_grid(amp, center, width)).unwrap();
        let rc = r_transform(&phi).unwrap();
        let back = r_inverse(&rc).unwrap();
        let gap = sup_gap(
            back.perturbation().samples(),
            phi.perturbation().samples(),
        );
        prop_assert!(gap < 1e-9, "round-trip sup {gap:.3e}");

        let rep = distance(&phi, &phi).unwrap();
        prop_assert_eq!(rep.value, 0.0);
        prop_assert!(rep.relative_gap < 1e-8);
    }
}
