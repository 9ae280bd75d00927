mod common;

use common::*;
use ndarray::{array, Array1, Array2};
use sparsepath::bregman::{gradient_of, group_norms};
use sparsepath::glm::{BinomialModel, LinearModel};
use sparsepath::graphical::GgmModel;
use sparsepath::linalg::{gram_spectral_norm, power_iteration};
use sparsepath::*;

#[test]
fn constant_gradient_recursion_enters_at_eleventh_step() {
    // Oracle: the recursion from the origin with gradient −2 until entry.
    let (kappa, alpha) = (10.0, 0.05);
    let mut z = 0.0f64;
    let mut first = None;
    for k in 1..=20 {
        let theta = kappa * (z.abs() - 1.0).max(0.0) * z.signum();
        let grad = theta - 2.0;
        z -= alpha * grad;
        if first.is_none() && z > 1.0 {
            first = Some(k);
        }
        assert!((z - 0.1 * k as f64).abs() < 1e-12 || first.is_some());
    }
    assert_eq!(first, Some(11));

    let model = LinearModel::new(array![[1.0]], array![2.0], false).unwrap();
    let groups = GroupIndex::singletons(1);
    let mut lb = LinearizedBregman::new(&model, &groups, kappa, alpha).unwrap();
    assert_eq!(lb.t0(), 0.5);
    assert_eq!(lb.state().theta[0], 0.0);
    lb.step().unwrap();
    let s = lb.state();
    assert!((s.t - 11.0 * alpha).abs() < 1e-15);
    assert!((s.z[0] - 1.1).abs() < 1e-12);
    assert!((s.theta[0] - 1.0).abs() < 1e-11);
    assert_eq!(lb.entry_times()[0], Some(s.t));
}

#[test]
fn first_entry_hand_example() {
    let model: LinearModel<f64> = LinearModel::new(array![[1.0], [-1.0]], array![2.0, 0.0], false).unwrap();
    let e = first_entry_time(&model, &GroupIndex::singletons(1)).unwrap();
    assert!((e.t0 - 1.0).abs() < 1e-15);
    assert!((e.z0[0] - 1.0).abs() < 1e-15);
    assert!((e.null_gradient[0] + 1.0).abs() < 1e-15);
}

#[test]
fn null_response_is_degenerate() {
    let x = array![[1.0, 2.0], [3.0, -1.0], [0.5, 0.0]];
    let model = LinearModel::new(x, array![4.0, 4.0, 4.0], true).unwrap();
    let groups = GroupIndex::singletons(2);
    assert!(matches!(
        first_entry_time(&model, &groups),
        Err(Error::DegenerateProblem(_))
    ));
    assert!(matches!(
        run_lb(&model, &groups, &PathConfig::new(10.0)),
        Err(Error::DegenerateProblem(_))
    ));
}

#[test]
fn binomial_balanced_entry_time() {
    let mut r = rng(3);
    let n = 40;
    let mut x = gaussian_matrix(&mut r, n, 3);
    for mut c in x.columns_mut() {
        let m = c.mean().unwrap();
        c.mapv_inplace(|v| v - m);
    }
    let y = Array1::from_shape_fn(n, |i| if i % 2 == 0 { 1.0 } else { -1.0 });
    let model = BinomialModel::new(x.clone(), y.clone(), true).unwrap();
    let e = first_entry_time(&model, &GroupIndex::singletons(3)).unwrap();
    assert!(e.theta0[0].abs() < 1e-15);
    let corr = x.t().dot(&y) / n as f64;
    let cmax = corr.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    assert!((e.t0 - 2.0 / cmax).abs() < 1e-12 * e.t0);
    // the analytic null gradient agrees with finite differences
    let th0 = e.theta0.clone();
    let fd = fd_gradient(|th| model.loss(th0.view(), th.view()), &Array1::zeros(3), 1e-6);
    assert!(rel_err(e.null_gradient.view(), fd.view()) < 1e-6);
}

#[test]
fn first_entry_clamps_to_unit_norm() {
    let mut r = rng(8);
    for _ in 0..50 {
        let x = gaussian_matrix(&mut r, 15, 6);
        let y = gaussian_vector(&mut r, 15);
        let model = LinearModel::new(x, y, true).unwrap();
        let groups = GroupIndex::from_labels(&[0, 0, 1, 2, 2, 2]);
        let e = first_entry_time(&model, &groups).unwrap();
        let norms = group_norms(e.z0.view(), &groups);
        let max = norms.iter().fold(0.0f64, |m, v| m.max(*v));
        assert!(max <= 1.0 && max > 1.0 - 1e-14);
        assert!(shrinkage(e.z0.view(), &groups).unwrap().iter().all(|v| *v == 0.0));
    }
}

#[test]
fn default_alpha_unit_gram() {
    let s2 = 2f64.sqrt();
    let x = array![[s2, 0.0], [0.0, s2]];
    let model = LinearModel::new(x, array![1.0, 2.0], false).unwrap();
    assert!((model.curvature_bound() - 1.0).abs() < 1e-12);
    assert!((default_alpha(&model, 10.0) - 0.1).abs() < 1e-12);
    let a = default_alpha(&model, 7.0);
    assert!((default_alpha(&model, 14.0) - a / 2.0).abs() < 1e-15);
}

#[test]
fn power_iteration_matches_eigensolver() {
    let mut r = rng(21);
    for _ in 0..10 {
        let x = gaussian_matrix(&mut r, 20, 5);
        let est = gram_spectral_norm(x.view(), false);
        let g = to_na(x.view());
        let s = g.transpose() * &g / 20.0;
        let eig = s.symmetric_eigen().eigenvalues.max();
        assert!((est - eig).abs() < 1e-6 * eig, "{est} vs {eig}");
        let sm = x.t().dot(&x) / 20.0;
        let est2 = power_iteration(5, |v| sm.dot(&v));
        assert!((est2 - eig).abs() < 1e-6 * eig);
    }
}

#[test]
fn tlist_resolution() {
    let c = PathConfig::new(1.0).with_grid(3, 100.0);
    let tl: Vec<f64> = resolve_tlist(1.0, &c);
    assert_eq!(tl.len(), 3);
    assert!((tl[1] - 10.0).abs() < 1e-12);
    assert_eq!(tl[0], 1.0);
    assert_eq!(tl[2], 100.0);
    let c = PathConfig::new(1.0).with_tlist(vec![0.3, 0.7, 5.0]);
    assert_eq!(resolve_tlist(2.0, &c), vec![0.3, 0.7, 5.0]);
    let tl = resolve_tlist(0.37, &PathConfig::new(1.0));
    assert_eq!(tl.len(), 100);
    let q = 100f64.powf(1.0 / 99.0);
    for w in tl.windows(2) {
        assert!((w[1] / w[0] - q).abs() < 1e-12);
    }
}

#[test]
fn interpolation_at_shrinkage_boundary() {
    let groups = GroupIndex::singletons(1);
    let state = |k, t, z: f64| BregmanState {
        k,
        t,
        z: array![z],
        theta: array![5.0 * (z - 1.0).max(0.0)],
        theta0: Array1::zeros(0),
    };
    let it = vec![state(0, 1.0, 0.8), state(1, 2.0, 1.2)];
    let p = interpolate_path(&it, &[1.0, 1.5, 2.0], 5.0, &groups).unwrap();
    assert_eq!(p.theta[0][0], 0.0);
    assert_eq!(p.theta[1][0], 0.0);
    assert!((p.theta[2][0] - 1.0).abs() < 1e-12);
    assert!(matches!(
        interpolate_path(&it, &[2.5], 5.0, &groups),
        Err(Error::OutOfRange { .. })
    ));
}

#[test]
fn interpolation_tracks_refined_grid() {
    let mut r = rng(5);
    let x = gaussian_matrix(&mut r, 30, 4);
    let y = gaussian_vector(&mut r, 30);
    let model = LinearModel::new(x, y, true).unwrap();
    let groups = GroupIndex::singletons(4);
    let kappa = 20.0;
    let alpha = default_alpha(&model, kappa);
    let t0 = first_entry_time(&model, &groups).unwrap().t0;
    let tlist: Vec<f64> = (0..25).map(|i| t0 * (1.0 + 0.173 * i as f64)).collect();
    let coarse = run_lb(&model, &groups, &PathConfig::new(kappa).with_alpha(alpha).with_tlist(tlist.clone())).unwrap();
    let fine = run_lb(&model, &groups, &PathConfig::new(kappa).with_alpha(alpha / 2.0).with_tlist(tlist)).unwrap();
    let scale = fine.theta.iter().flat_map(|t| t.iter()).fold(1.0f64, |m, v| m.max(v.abs()));
    for (a, b) in coarse.theta.iter().zip(fine.theta.iter()) {
        let d = (a - b).iter().fold(0.0f64, |m, v| m.max(v.abs()));
        assert!(d < 5.0 * kappa * alpha * scale, "{d}");
    }
}

#[test]
fn stored_iterates_are_returned_on_grid_hits() {
    let mut r = rng(13);
    let x = gaussian_matrix(&mut r, 20, 3);
    let y = gaussian_vector(&mut r, 20);
    let model = LinearModel::new(x, y, false).unwrap();
    let groups = GroupIndex::singletons(3);
    let mut lb = LinearizedBregman::new(&model, &groups, 10.0, 0.01).unwrap();
    let mut states = vec![lb.state().clone()];
    for _ in 0..200 {
        lb.step().unwrap();
        states.push(lb.state().clone());
    }
    let tl: Vec<f64> = states.iter().step_by(20).map(|s| s.t).collect();
    let p = interpolate_path(&states, &tl, 10.0, &groups).unwrap();
    for (i, s) in states.iter().step_by(20).enumerate() {
        assert_eq!(p.theta[i], s.theta);
    }
}

#[test]
fn iterate_invariants_and_clock() {
    let mut r = rng(17);
    let x = gaussian_matrix(&mut r, 25, 6);
    let y = gaussian_vector(&mut r, 25);
    let model = LinearModel::new(x, y, true).unwrap();
    let groups = GroupIndex::from_labels(&[0, 0, 1, 1, 2, 3]);
    let kappa = 15.0;
    let alpha = default_alpha(&model, kappa);
    let mut lb = LinearizedBregman::new(&model, &groups, kappa, alpha).unwrap();
    let t0 = lb.t0();
    for k in 1..=2000usize {
        lb.step().unwrap();
        let s = lb.state();
        assert_eq!(s.k, k);
        assert_eq!(s.t, t0 + k as f64 * alpha);
        let expect = shrinkage(s.z.view(), &groups).unwrap() * kappa;
        assert!((&expect - &s.theta).iter().all(|v| v.abs() <= 1e-12 * kappa));
        for (g, norm) in group_norms(s.z.view(), &groups).into_iter().enumerate() {
            let active = groups.members(g).iter().any(|&j| s.theta[j] != 0.0);
            assert_eq!(active, norm > 1.0);
        }
    }
}

#[test]
fn path_snapshots_follow_tlist() {
    let mut r = rng(2);
    let x = gaussian_matrix(&mut r, 30, 5);
    let y = gaussian_vector(&mut r, 30);
    let model = LinearModel::new(x, y, true).unwrap();
    let groups = GroupIndex::singletons(5);
    let path = run_lb(&model, &groups, &PathConfig::new(30.0).with_grid(20, 50.0)).unwrap();
    assert_eq!(path.times, resolve_tlist(path.t0, &PathConfig::new(30.0).with_grid(20, 50.0)));
    assert!(path.final_state.t >= *path.times.last().unwrap());
    assert!(path.final_state.t - path.alpha < *path.times.last().unwrap());
    assert!(path.theta[0].iter().all(|v| *v == 0.0));
    assert!(path.loss.iter().all(|l| l.is_finite()));
    // points before t0 sit on the null segment
    let early = run_lb(&model, &groups, &PathConfig::new(30.0).with_tlist(vec![path.t0 / 2.0, path.t0 * 3.0])).unwrap();
    assert!(early.theta[0].iter().all(|v| *v == 0.0));
    assert_eq!(early.theta0[0], path.theta0[0]);
}

#[test]
fn overdetermined_noiseless_reaches_least_squares() {
    let mut r = rng(99);
    let x = gaussian_matrix(&mut r, 50, 5);
    let beta = array![1.0, -2.0, 0.5, 0.0, 3.0];
    let y = x.dot(&beta);
    let oracle = least_squares(x.view(), y.view());
    let model = LinearModel::new(x, y, false).unwrap();
    let groups = GroupIndex::singletons(5);
    let config = PathConfig::new(10.0).with_grid(10, 1000.0);
    let path = run_lb(&model, &groups, &config).unwrap();
    let last = path.theta.last().unwrap();
    assert!(rel_err(last.view(), oracle.view()) < 1e-3);
    let (_, g) = gradient_of(&model, Array1::zeros(0).view(), path.final_state.theta.view());
    assert!(g.iter().all(|v| v.abs() < 1e-4));
}

#[test]
fn single_precision_path() {
    let x: Array2<f32> = array![[1.0, 0.5], [0.0, 1.0], [2.0, -1.0], [1.0, 1.0]];
    let y: Array1<f32> = array![1.0, 2.0, 0.5, 3.0];
    let model = LinearModel::new(x, y, true).unwrap();
    let path: SolutionPath32 = run_lb(&model, &GroupIndex::singletons(2), &PathConfig32::new(10.0).with_grid(10, 10.0)).unwrap();
    assert_eq!(path.len(), 10);
    assert!(path.theta.iter().all(|t| t.iter().all(|v| v.is_finite())));
    assert!(path.theta.last().unwrap().iter().any(|v| *v != 0.0));
}

#[test]
fn oversized_step_diverges_with_error() {
    let mut r = rng(4);
    let x = gaussian_matrix(&mut r, 20, 3);
    let y = gaussian_vector(&mut r, 20);
    let model = LinearModel::new(x, y, false).unwrap();
    let groups = GroupIndex::singletons(3);
    let alpha = 50.0 * default_alpha(&model, 10.0);
    let t0 = first_entry_time(&model, &groups).unwrap().t0;
    let config = PathConfig::new(10.0).with_alpha(alpha).with_tlist(vec![t0 + 10_000.0 * alpha]);
    match run_lb(&model, &groups, &config) {
        Err(Error::NumericalDivergence { iteration, .. }) => assert!(iteration > 0),
        other => panic!("expected divergence, got {other:?}"),
    }
}

#[test]
fn ggm_diagonal_leaving_domain_is_reported() {
    let mut r = rng(6);
    let x = gaussian_matrix(&mut r, 40, 4);
    let model = GgmModel::from_data(x.view()).unwrap();
    let groups = GroupIndex::singletons(6);
    let alpha = 200.0 * default_alpha(&model, 5.0);
    let t0 = first_entry_time(&model, &groups).unwrap().t0;
    let config = PathConfig::new(5.0).with_alpha(alpha).with_tlist(vec![t0 + 5000.0 * alpha]);
    let err = run_lb(&model, &groups, &config).unwrap_err();
    assert!(err.is_numerical(), "{err:?}");
}

#[test]
fn invalid_configs_rejected() {
    let model = LinearModel::new(array![[1.0], [2.0]], array![1.0, 0.0], false).unwrap();
    let g = GroupIndex::singletons(1);
    for c in [
        PathConfig::new(0.0),
        PathConfig::new(1.0).with_alpha(-1.0),
        PathConfig::new(1.0).with_tlist(vec![2.0, 1.0]),
        PathConfig::new(1.0).with_grid(0, 10.0),
        PathConfig::new(1.0).with_grid(5, 1.0),
    ] {
        assert!(matches!(run_lb(&model, &g, &c), Err(Error::InvalidArgument(_))));
    }
    assert!(matches!(
        run_lb(&model, &GroupIndex::singletons(2), &PathConfig::new(1.0)),
        Err(Error::DimensionMismatch { .. })
    ));
}
