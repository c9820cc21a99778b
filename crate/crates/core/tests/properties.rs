use num_complex::Complex;
use proptest::prelude::*;

use ifs_fourier::classify::CriterionResult;
use ifs_fourier::grid_ifs::{grid_stats, rectangle_measure, render_raster, xi_profile, attractor_dimension};
use ifs_fourier::kaczmarz::{
    expand_1d, expand_2d_oriented, frame_diagnostics, sample_1d, sample_2d, CoefficientRule, GramSource,
};
use ifs_fourier::measures::{
    classify_marginal, discretize_grid, discretize_marginal, discretize_slice, kakutani_affinity, project_marginal,
    slice_measure, DigitStream,
};
use ifs_fourier::moments::{discrete_transform, marginal_transform};
use ifs_fourier::*;

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn cis(t: f64) -> Complex<f64> {
    let a = 2.0 * std::f64::consts::PI * (t - t.floor());
    Complex::new(a.cos(), a.sin())
}

fn normalized(raw: &[i64]) -> Vec<Rational> {
    let total: i64 = raw.iter().sum();
    raw.iter().map(|&w| q(w, total)).collect()
}

fn with_positive(mut raw: Vec<i64>) -> Vec<i64> {
    if raw.iter().all(|&w| w == 0) {
        raw[0] = 1;
    }
    raw
}

/// Grids of 2..=4 rows and columns; about a third of the cells are empty.
fn specs() -> impl Strategy<Value = Grid> {
    (2usize..=4, 2usize..=4).prop_flat_map(|(rows, cols)| {
        prop::collection::vec(prop_oneof![1 => Just(0i64), 2 => 1i64..=5], rows * cols).prop_map(move |raw| {
            let raw = with_positive(raw);
            let kept = raw.iter().map(|&w| w > 0).collect();
            GridSpec::new(rows, cols, kept, normalized(&raw)).expect("valid")
        })
    })
}

fn marginals() -> impl Strategy<Value = Marginal> {
    (2usize..=5).prop_flat_map(|base| {
        prop::collection::vec(0i64..=4, base)
            .prop_map(move |raw| MarginalIfs::new(base, normalized(&with_positive(raw))).expect("valid"))
    })
}

fn digits(mut index: u64, base: usize, depth: usize) -> Vec<usize> {
    let mut word = vec![0; depth];
    for slot in word.iter_mut().rev() {
        *slot = (index % base as u64) as usize;
        index /= base as u64;
    }
    word
}

/// A trigonometric polynomial with small integer frequencies.
fn trig() -> impl Strategy<Value = Vec<(i64, i64, f64, f64)>> {
    prop::collection::vec((-3i64..=3, -3i64..=3, -1.0f64..1.0, -1.0f64..1.0), 1..4)
}

fn eval(terms: &[(i64, i64, f64, f64)], x: f64, y: f64) -> Complex<f64> {
    terms.iter().map(|&(a, b, re, im)| Complex::new(re, im) * cis(a as f64 * x + b as f64 * y)).sum()
}

fn find<'a>(trace: &'a [CriterionResult], label: &str) -> &'a CriterionResult {
    trace.iter().find(|c| c.label() == label).expect("criterion present")
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn rectangle_additivity(spec in specs(), seed in any::<u64>(), depth in 0usize..3) {
        let (n, m) = (spec.cols(), spec.rows());
        let xs: Vec<usize> = (0..depth).map(|k| ((seed >> (4 * k)) as usize) % n).collect();
        let ys: Vec<usize> = (0..depth).map(|k| ((seed >> (4 * k + 2)) as usize) % m).collect();
        let parent = AdicRectangle::new(xs, ys).unwrap();
        let whole = rectangle_measure(&spec, &parent).unwrap();
        let mut sum = q(0, 1);
        for i in 0..n {
            for j in 0..m {
                sum += rectangle_measure(&spec, &parent.child(i, j)).unwrap();
            }
        }
        prop_assert_eq!(sum, whole);
    }

    #[test]
    fn raster_aggregation(spec in specs(), k in 1usize..3) {
        let fine = render_raster(&spec, k + 1, &Budget::default()).unwrap();
        let coarse = render_raster(&spec, k, &Budget::default()).unwrap();
        let folded = fine.aggregate(spec.cols(), spec.rows());
        prop_assert_eq!(folded.values(), coarse.values());
    }

    #[test]
    fn transpose_swaps_stats(spec in specs()) {
        let a = grid_stats(&spec);
        let b = grid_stats(&spec.transpose());
        prop_assert_eq!(&a.gamma1, &b.gamma2);
        prop_assert_eq!(&a.gamma2, &b.gamma1);
        prop_assert_eq!(a.xi1, b.xi2);
        prop_assert_eq!(a.xi2, b.xi1);
    }

    #[test]
    fn xi_monotone_and_gamma_bound(spec in specs()) {
        let stats = grid_stats(&spec);
        for counts in [&stats.row_counts, &stats.col_counts] {
            let values: Vec<f64> = (1..=100).map(|i| xi_profile(counts, 0.02 * i as f64)).collect();
            prop_assert!(values.windows(2).all(|w| w[1] <= w[0] + 1e-12));
        }
        let gamma1: f64 = stats.gamma1.to_real();
        let gamma2: f64 = stats.gamma2.to_real();
        prop_assert!(1.0 / stats.xi1.unwrap() <= gamma1 + 1e-12);
        prop_assert!(1.0 / stats.xi2.unwrap() <= gamma2 + 1e-12);
    }

    #[test]
    fn marginal_weights_sum_to_one(spec in specs()) {
        for axis in [Axis::X, Axis::Y] {
            let total = project_marginal(&spec, axis).weights().iter().fold(q(0, 1), |a, w| a + w);
            prop_assert_eq!(total, q(1, 1));
        }
    }

    #[test]
    fn class_ignores_digit_order(marg in marginals(), shift in 0usize..5) {
        let mut w = marg.weights().to_vec();
        w.reverse();
        let len = w.len();
        w.rotate_left(shift % len);
        let permuted = MarginalIfs::new(marg.base(), w).unwrap();
        prop_assert_eq!(classify_marginal(&marg), classify_marginal(&permuted));
    }

    #[test]
    fn affinity_bounded_by_one(a in marginals(), b in marginals()) {
        let self_affinity: f64 = kakutani_affinity(a.weights(), a.weights()).unwrap();
        prop_assert!((self_affinity - 1.0).abs() <= 1e-12);
        if a.base() == b.base() {
            if let Ok(rho) = kakutani_affinity::<f64, _>(a.weights(), b.weights()) {
                prop_assert!(rho <= 1.0 + 1e-12);
                if a.weights() != b.weights() {
                    prop_assert!(rho < 1.0);
                }
            }
        }
    }

    #[test]
    fn discretization_marginals(spec in specs(), depth in 1usize..4) {
        let dm = discretize_grid(&spec, depth, &Budget::default()).unwrap();
        let x = discretize_marginal(&project_marginal(&spec, Axis::X), depth, &Budget::default()).unwrap();
        let y = discretize_marginal(&project_marginal(&spec, Axis::Y), depth, &Budget::default()).unwrap();
        prop_assert_eq!(dm.x_marginal().atoms, x.atoms);
        prop_assert_eq!(dm.y_marginal().atoms, y.atoms);
    }

    #[test]
    fn discretization_slices(spec in specs(), depth in 1usize..4) {
        let dm = discretize_grid(&spec, depth, &Budget::default()).unwrap();
        // The tail past `depth` does not affect the discretized slice; repeat a supported row.
        let tail = dm.y_words()[0] as usize % spec.rows();
        for y in dm.y_words() {
            let stream = DigitStream::new(digits(y, spec.rows(), depth), vec![tail]);
            let slice = slice_measure(&spec, &stream).unwrap();
            let shadow = discretize_slice(&slice, depth, &Budget::default()).unwrap();
            prop_assert_eq!(dm.conditional_x(y).unwrap().atoms, shadow.atoms);
        }
    }

    #[test]
    fn classification_transposes(spec in specs()) {
        let a = classify_grid(&spec);
        let b = classify_grid(&spec.transpose());
        prop_assert_eq!(a.verdict, b.verdict);
        prop_assert_eq!(a.slice_direction.swapped(), b.slice_direction);
        for (x, y) in [("ThmA(x)", "ThmA(y)"), ("CorA_col", "CorA_row"), ("FullGrid_x", "FullGrid_y")] {
            prop_assert_eq!(find(&a.trace, x).satisfied, find(&b.trace, y).satisfied);
            prop_assert_eq!(find(&a.trace, y).satisfied, find(&b.trace, x).satisfied);
        }
    }

    #[test]
    fn gamma_criterion_implies_dimension_chain(spec in specs()) {
        let report = classify_grid(&spec);
        if find(&report.trace, "CorA_col").satisfied {
            let gamma1: f64 = grid_stats(&spec).gamma1.to_real();
            let alpha = -gamma1.ln() / (spec.cols() as f64).ln();
            let dim: f64 = attractor_dimension(&spec);
            prop_assert!(alpha <= dim + 1e-9 && dim < alpha + 1.0 + 1e-9);
        }
    }

    #[test]
    fn transform_certificate(marg in marginals(), k in -40i64..40, depth in 1usize..7) {
        let eps = 1e-9;
        let v = marginal_transform::<f64, _>(&marg, k, eps).unwrap();
        let dm = discretize_marginal(&marg, depth, &Budget::default()).unwrap();
        let d: Complex<f64> = discrete_transform(&dm, k);
        let slack = 2.0 * std::f64::consts::PI * k.abs() as f64 * (marg.base() as f64).powi(-(depth as i32));
        prop_assert!((v.value - d).norm() <= eps + slack + 1e-12);
        prop_assert!(v.value.norm() <= 1.0 + v.error_bound + 1e-15);
        let w = marginal_transform::<f64, _>(&marg, -k, eps).unwrap();
        prop_assert!((w.value - v.value.conj()).norm() <= 1e-14);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 32, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn kaczmarz_1d_monotone_and_linear(marg in marginals(), f in trig(), g in trig(), re in -2.0f64..2.0, im in -2.0f64..2.0) {
        let dm = discretize_marginal(&marg, 4, &Budget::default()).unwrap();
        let lambda = Complex::new(re, im);
        let fs = sample_1d(&dm, |x| eval(&f, x, 0.0));
        let gs = sample_1d(&dm, |x| eval(&g, x, 0.0));
        let hs: Vec<Complex<f64>> = fs.iter().zip(&gs).map(|(a, b)| a + lambda * b).collect();
        let ef = expand_1d(&dm, GramSource::Discrete, &fs, 12).unwrap();
        let eg = expand_1d(&dm, GramSource::Discrete, &gs, 12).unwrap();
        let eh = expand_1d(&dm, GramSource::Discrete, &hs, 12).unwrap();
        for ((a, b), c) in ef.coefficients.iter().zip(&eg.coefficients).zip(&eh.coefficients) {
            prop_assert!((a + lambda * b - c).norm() <= 1e-10);
        }
        let report = frame_diagnostics(&ef, 1e-9);
        prop_assert!(report.residual_monotone);
        prop_assert!(report.energy <= report.norm_sq * (1.0 + 1e-9) + 1e-12);
    }

    #[test]
    fn orthonormal_collapse(base in 2usize..5, terms in prop::collection::vec((0i64..8, -1.0f64..1.0, -1.0f64..1.0), 1..5)) {
        let dm = discretize_marginal(&MarginalIfs::new(base, vec![q(1, base as i64); base]).unwrap(), 3, &Budget::default()).unwrap();
        let f = sample_1d(&dm, |x| terms.iter().map(|&(k, re, im)| Complex::new(re, im) * cis(k as f64 * x)).sum());
        let e = expand_1d(&dm, GramSource::Discrete, &f, 8).unwrap();
        for (n, c) in e.coefficients.iter().enumerate() {
            let want: Complex<f64> = terms.iter().filter(|t| t.0 == n as i64).map(|t| Complex::new(t.1, t.2)).sum();
            prop_assert!((c - want).norm() <= 1e-12);
        }
    }

    #[test]
    fn kaczmarz_2d_linear(spec in specs(), f in trig(), g in trig(), re in -2.0f64..2.0) {
        let dm = discretize_grid(&spec, 2, &Budget::default()).unwrap();
        let fs = sample_2d(&dm, |x, y| eval(&f, x, y));
        let gs = sample_2d(&dm, |x, y| eval(&g, x, y));
        let hs: Vec<Complex<f64>> = fs.iter().zip(&gs).map(|(a, b)| a + b * re).collect();
        let run = |s: &[Complex<f64>]| {
            expand_2d_oriented(&spec, SeriesType::SingMarg, s, 6, 5, 2, CoefficientRule::Auxiliary, &Budget::default()).unwrap()
        };
        let (ef, eg, eh) = (run(&fs), run(&gs), run(&hs));
        for ((ra, rb), rc) in ef.coefficients.iter().zip(&eg.coefficients).zip(&eh.coefficients) {
            for ((a, b), c) in ra.iter().zip(rb).zip(rc) {
                prop_assert!((a + b * re - c).norm() <= 1e-10);
            }
        }
    }

    #[test]
    fn kaczmarz_2d_residual_rule_monotone(spec in specs(), f in trig()) {
        let dm = discretize_grid(&spec, 2, &Budget::default()).unwrap();
        let fs = sample_2d(&dm, |x, y| eval(&f, x, y));
        let e = expand_2d_oriented(&spec, SeriesType::SingMarg, &fs, 10, 6, 2, CoefficientRule::ResidualCorrected, &Budget::default())
            .unwrap();
        let report = frame_diagnostics(&e, 1e-6);
        prop_assert!(report.residual_monotone, "step up {}", report.residual_max_increase);
        prop_assert!(report.passed());
    }
}
