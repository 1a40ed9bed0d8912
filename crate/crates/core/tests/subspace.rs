use nalgebra::DMatrix;
use proptest::prelude::*;

use pisubspace::models::{
    EvaluationRecord, HartmannModel, ModelFunction, ParameterSpace, RidgeProfile, SyntheticRidge,
};
use pisubspace::seeding::{stream, Purpose};
use pisubspace::subspace::{
    activity_identity_check, bootstrap_spectrum, eigendecompose, estimate_c_from_samples,
    estimate_c_monte_carlo, estimate_c_quadrature, gap_bound, sample_count_heuristic,
    select_dimension, subspace_distance, GradientSampleSet, Provenance, Selection,
};
use rand::Rng;

fn random_matrix(m: usize, r: usize, seed: u64) -> DMatrix<f64> {
    let mut rng = stream(seed, Purpose::RidgeTrain, 1);
    DMatrix::from_fn(m, r, |_, _| rng.random_range(-1.0..1.0))
}

fn set_from_gradients(grads: &[Vec<f64>]) -> GradientSampleSet {
    let m = grads[0].len();
    let records = grads
        .iter()
        .map(|g| EvaluationRecord {
            x_normalized: vec![0.0; m],
            x_physical: vec![1.0; m],
            f: 0.0,
            grad: g.clone(),
        })
        .collect();
    GradientSampleSet::new(
        ParameterSpace::standard(m),
        records,
        Provenance::external("test"),
    )
    .unwrap()
}

#[test]
fn hartmann_quadrature_structure() {
    let model = HartmannModel::u_avg();
    let c = estimate_c_quadrature(&model, 11, false).unwrap();
    let s = c.spectrum().unwrap();
    assert!(s.eigenvalues[2].abs() / s.eigenvalues[0] < 1e-10);
    assert!(s.eigenvectors[(1, 0)].abs() < 1e-12 && s.eigenvectors[(1, 1)].abs() < 1e-12);
    let sub = select_dimension(&s, Selection::LargestGap { max_n: 4 }).unwrap();
    assert_eq!(sub.n, 2);
    // PSD, symmetry, trace identity
    assert!(*s.eigenvalues.last().unwrap() >= -1e-12 * s.eigenvalues[0]);
    assert_eq!(c.matrix, c.matrix.transpose());
    let sum: f64 = s.eigenvalues.iter().sum();
    assert!((c.matrix.trace() - c.mean_sq_grad).abs() < 1e-10 * c.mean_sq_grad);
    assert!((sum - c.mean_sq_grad).abs() < 1e-10 * c.mean_sq_grad);
    // eigenpairs and orthonormality
    let w = &s.eigenvectors;
    let lam = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(s.eigenvalues.clone()));
    assert!((&c.matrix * w - w * lam).amax() < 1e-10 * s.eigenvalues[0]);
    assert!((w.transpose() * w - DMatrix::identity(5, 5)).amax() < 1e-12);
}

#[test]
fn hartmann_monte_carlo_keeps_two_dimensional_ridge() {
    let (c, set) = estimate_c_monte_carlo(&HartmannModel::u_avg(), 500, 42).unwrap();
    let s = c.spectrum().unwrap();
    assert_eq!(set.len(), 500);
    assert!(s.eigenvalues[2].abs() / s.eigenvalues[0] < 1e-10);
}

#[test]
fn monte_carlo_is_independent_of_thread_count() {
    let model = HartmannModel::b_ind();
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| estimate_c_monte_carlo(&model, 5000, 9).unwrap())
    };
    let (a, sa) = run(1);
    let (b, sb) = run(4);
    assert_eq!(a.matrix, b.matrix);
    assert_eq!(sa, sb);
    let (ba, bb) = (
        bootstrap_spectrum(&sa, 50, 1).unwrap().1,
        rayon::ThreadPoolBuilder::new()
            .num_threads(3)
            .build()
            .unwrap()
            .install(|| bootstrap_spectrum(&sb, 50, 1).unwrap().1),
    );
    assert_eq!(ba, bb);
}

#[test]
fn union_of_halves_averages_estimates() {
    let model = SyntheticRidge::new(random_matrix(4, 2, 3), RidgeProfile::Exponential).unwrap();
    let set = GradientSampleSet::draw(&model, 30, 5).unwrap();
    let (left, right) = set.records.split_at(10);
    let part = |r: &[EvaluationRecord]| {
        let s =
            GradientSampleSet::new(set.space.clone(), r.to_vec(), set.provenance.clone()).unwrap();
        estimate_c_from_samples(&s).unwrap().matrix
    };
    let combined = (part(left) * 10.0 + part(right) * 20.0) / 30.0;
    let full = estimate_c_from_samples(&set).unwrap().matrix;
    assert!((combined - &full).amax() < 1e-13 * full.amax());
}

#[test]
fn ridge_rank_and_span_under_quadrature() {
    for r in [1, 2, 3] {
        let a = random_matrix(5, r, 10 + r as u64);
        let model = SyntheticRidge::new(a.clone(), RidgeProfile::SineSum).unwrap();
        let s = estimate_c_quadrature(&model, 6, false)
            .unwrap()
            .spectrum()
            .unwrap();
        assert!(s.eigenvalues[r].abs() / s.eigenvalues[0] < 1e-12, "r = {r}");
        let d = subspace_distance(&s.w1(r), &a.qr().q()).unwrap();
        assert!(d < 1e-8, "r = {r}: {d}");
    }
}

#[test]
fn rank_one_ridge_monte_carlo_recovers_direction_with_few_samples() {
    let a = random_matrix(5, 1, 2);
    let model = SyntheticRidge::new(a.clone(), RidgeProfile::SumOfSquares).unwrap();
    let (c, _) = estimate_c_monte_carlo(&model, 10, 3).unwrap();
    let d = subspace_distance(&c.spectrum().unwrap().w1(1), &a.qr().q()).unwrap();
    assert!(d < 1e-8);
}

#[test]
fn linear_model_has_outer_product_spectrum() {
    let a = [0.5, -1.0, 2.0];
    let model =
        SyntheticRidge::new(DMatrix::from_column_slice(3, 1, &a), RidgeProfile::Linear).unwrap();
    let s = estimate_c_quadrature(&model, 3, false)
        .unwrap()
        .spectrum()
        .unwrap();
    assert!((s.eigenvalues[0] - 5.25).abs() < 1e-14);
}

#[test]
fn gap_bound_holds_with_realized_error() {
    let a = random_matrix(5, 2, 77);
    let model = SyntheticRidge::new(a, RidgeProfile::SineSum).unwrap();
    // add a weak third direction so the bound is not trivial
    let truth_c = estimate_c_quadrature(&model, 8, false).unwrap();
    let truth = truth_c.spectrum().unwrap();
    for seed in 0..20 {
        let (c, _) = estimate_c_monte_carlo(&model, 100, seed).unwrap();
        let s = c.spectrum().unwrap();
        let err = &c.matrix - &truth_c.matrix;
        let delta = err.clone().symmetric_eigen().eigenvalues.amax() / truth.eigenvalues[0];
        for n in 1..=2 {
            let bound = gap_bound(&truth.eigenvalues, n, delta).unwrap();
            let dist = subspace_distance(&s.w1(n), &truth.w1(n)).unwrap();
            assert!(dist <= bound, "seed {seed}, n {n}: {dist} > {bound}");
        }
    }
}

#[test]
fn activity_identity_for_ridges() {
    let model = SyntheticRidge::new(random_matrix(4, 1, 4), RidgeProfile::Exponential).unwrap();
    let s = estimate_c_quadrature(&model, 7, false)
        .unwrap()
        .spectrum()
        .unwrap();
    let r = activity_identity_check(&model, &s, 1, 7).unwrap();
    assert!(r.inactive_integral < 1e-12 * s.eigenvalues[0]);
    assert!(r.max_residual() < 1e-12);
    let full = activity_identity_check(&model, &s, 4, 7).unwrap();
    assert_eq!(full.inactive_integral, 0.0);
    assert_eq!(full.inactive_eigensum, 0.0);
}

#[test]
fn bootstrap_of_identical_samples_is_degenerate() {
    let set = set_from_gradients(&vec![vec![1.0, 2.0, -1.0]; 20]);
    let (s, b) = bootstrap_spectrum(&set, 30, 1).unwrap();
    for (iv, l) in b.eigenvalues.iter().zip(&s.eigenvalues) {
        assert_eq!((iv.min, iv.max, iv.lower, iv.upper), (*l, *l, *l, *l));
    }
    assert!(b.distances.iter().all(|d| d.max < 1e-12));
    assert!(bootstrap_spectrum(&set, 0, 1).is_err());
    let one = set_from_gradients(&[vec![1.0, 2.0, 3.0]]);
    assert!(bootstrap_spectrum(&one, 10, 1).is_err());
}

#[test]
fn bootstrap_width_shrinks_with_sample_count() {
    let model = SyntheticRidge::new(random_matrix(4, 1, 8), RidgeProfile::SumOfSquares).unwrap();
    let width = |count| {
        let s = GradientSampleSet::draw(&model, count, 1).unwrap();
        bootstrap_spectrum(&s, 200, 2).unwrap().1.eigenvalues[0].width()
    };
    assert!(width(50) > width(500));
}

#[test]
fn heuristic_is_monotone() {
    let mut prev = 0;
    for k in 1..5 {
        let v = sample_count_heuristic(k, 5, 4.0).unwrap();
        assert!(v >= prev);
        prev = v;
    }
    assert!(
        sample_count_heuristic(2, 10, 4.0).unwrap() >= sample_count_heuristic(2, 5, 4.0).unwrap()
    );
    assert!(
        sample_count_heuristic(2, 5, 8.0).unwrap() >= sample_count_heuristic(2, 5, 4.0).unwrap()
    );
}

fn orthogonal(m: usize, seed: u64) -> DMatrix<f64> {
    random_matrix(m, m, seed).qr().q()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn orthogonal_invariance(seed in 0u64..1000) {
        let m = 4;
        let mut rng = stream(seed, Purpose::Bootstrap, 0);
        let grads: Vec<Vec<f64>> = (0..12).map(|_| (0..m).map(|_| rng.random_range(-1.0..1.0)).collect()).collect();
        let q = orthogonal(m, seed + 1);
        let rotated: Vec<Vec<f64>> = grads
            .iter()
            .map(|g| (&q * nalgebra::DVector::from_column_slice(g)).as_slice().to_vec())
            .collect();
        let c = estimate_c_from_samples(&set_from_gradients(&grads)).unwrap();
        let cq = estimate_c_from_samples(&set_from_gradients(&rotated)).unwrap();
        prop_assert!((&q * &c.matrix * q.transpose() - &cq.matrix).amax() < 1e-12);
        let (s, sq) = (c.spectrum().unwrap(), cq.spectrum().unwrap());
        for (a, b) in s.eigenvalues.iter().zip(&sq.eigenvalues) {
            prop_assert!((a - b).abs() < 1e-12 * s.eigenvalues[0]);
        }
        for n in 1..m {
            prop_assume!(s.eigenvalues[n - 1] - s.eigenvalues[n] > 1e-6);
            let d = subspace_distance(&(&q * s.w1(n)), &sq.w1(n)).unwrap();
            prop_assert!(d < 1e-8);
        }
    }

    #[test]
    fn partition_identity(seed in 0u64..1000, n in 0usize..=4) {
        let model = SyntheticRidge::new(random_matrix(4, 2, seed), RidgeProfile::SineSum).unwrap();
        let (c, _) = estimate_c_monte_carlo(&model, 20, seed).unwrap();
        let s = eigendecompose(&c.matrix).unwrap();
        let head: f64 = s.eigenvalues[..n].iter().sum();
        let tail: f64 = s.eigenvalues[n..].iter().sum();
        let total: f64 = s.eigenvalues.iter().sum();
        prop_assert!((head + tail - total).abs() <= 4.0 * f64::EPSILON * total.abs());
        prop_assert!((total - c.matrix.trace()).abs() < 1e-10 * c.matrix.trace());
    }

    #[test]
    fn eigenvectors_follow_sign_rule(seed in 0u64..1000) {
        let mut rng = stream(seed, Purpose::Bootstrap, 9);
        let b = DMatrix::from_fn(5, 5, |_, _| rng.random_range(-1.0..1.0));
        let s = eigendecompose(&(b.transpose() * &b)).unwrap();
        for j in 0..5 {
            let col = s.eigenvectors.column(j);
            let max = col.iter().fold(0.0f64, |a, x| a.max(x.abs()));
            let first = col.iter().position(|x| x.abs() >= max * (1.0 - 1e-12)).unwrap();
            prop_assert!(col[first] > 0.0);
        }
        for w in s.eigenvalues.windows(2) {
            prop_assert!(w[0] >= w[1]);
        }
    }
}

#[test]
fn model_space_dimensions_agree() {
    let m = HartmannModel::u_avg();
    assert_eq!(m.dim(), 5);
}
