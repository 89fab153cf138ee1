mod common;

use common::*;
use credal::io::euclidean_distances;
use credal::multiview::mecmdd_criterion;
use credal::{
    ecmdd_fit, mecmdd_fit, AttributeData, CredalPartition, DissimilarityMatrix, FocalKind, FocalSpec, Init,
    MecmddParams, MultiViewDissimilarity, Prototypes, SolverParams, ViewWeights, WeightVariant,
};
use ndarray::Array2;
use proptest::prelude::*;

fn constant(n: usize, value: f64) -> DissimilarityMatrix {
    DissimilarityMatrix::new(Array2::from_shape_fn((n, n), |(i, j)| if i == j { 0.0 } else { value })).unwrap()
}

/// Two groups of `n / 2` points jittered around centers six units apart.
fn two_groups(n: usize, seed: u64) -> AttributeData {
    let jitter = uniform(n, 2, seed);
    AttributeData::new(Array2::from_shape_fn((n, 2), |(i, q)| {
        let center = if q == 0 && i >= n / 2 { 6.0 } else { 0.0 };
        center + 0.2 * jitter.x()[[i, q]]
    }))
    .unwrap()
}

fn view_medoids(p: &CredalPartition) -> &Vec<Vec<usize>> {
    match p.prototypes() {
        Some(Prototypes::ViewMedoids(m)) => m,
        other => panic!("expected view medoids, got {other:?}"),
    }
}

#[test]
fn one_view_reduces_to_ecmdd() {
    for seed in 0..6 {
        let d = euclidean_distances(&blobs(25, 2, 3, 40 + seed), false);
        let params = SolverParams { seed, delta: 3.0, ..SolverParams::default() };
        let mv = MultiViewDissimilarity::new(vec![d.clone()]).unwrap();
        let single = ecmdd_fit(&d, 3, &params).unwrap();
        for variant in [WeightVariant::Rwg, WeightVariant::Rwl] {
            let multi = mecmdd_fit(&mv, 3, &params, &MecmddParams { s: 2.0, variant }).unwrap();
            assert!(max_diff(single.mass(), multi.mass()) < 1e-12);
            let Some(Prototypes::Medoids(m)) = single.prototypes() else { panic!() };
            assert_eq!(&view_medoids(&multi)[0], m);
        }
    }
}

#[test]
fn one_view_with_own_delta_reduces_to_ecmdd() {
    let d = euclidean_distances(&blobs(20, 2, 2, 3), true);
    let init = Some(Init::Medoids(vec![4, 15]));
    let params = SolverParams { init: init.clone(), ..SolverParams::default() };
    let mv = MultiViewDissimilarity::new(vec![d.clone()]).unwrap().with_deltas(vec![2.5]).unwrap();
    let multi = mecmdd_fit(&mv, 2, &params, &MecmddParams::default()).unwrap();
    let single = ecmdd_fit(&d, 2, &SolverParams { delta: 2.5, ..params }).unwrap();
    assert!(max_diff(single.mass(), multi.mass()) < 1e-12);
}

#[test]
fn permuting_views_permutes_weight_columns() {
    for seed in 0..4 {
        let x = blobs(18, 3, 2, seed);
        let views = vec![
            euclidean_distances(&x, false),
            euclidean_distances(&uniform(18, 2, 100 + seed), false),
            euclidean_distances(&x, true),
        ];
        let order = [2, 0, 1];
        let params = SolverParams { seed, ..SolverParams::default() };
        let deltas = vec![4.0, 5.0, 6.0];
        for variant in [WeightVariant::Rwg, WeightVariant::Rwl] {
            let mp = MecmddParams { s: 2.0, variant };
            let a = MultiViewDissimilarity::new(views.clone()).unwrap().with_deltas(deltas.clone()).unwrap();
            let b = MultiViewDissimilarity::new(order.iter().map(|&l| views[l].clone()).collect())
                .unwrap()
                .with_deltas(order.iter().map(|&l| deltas[l]).collect())
                .unwrap();
            let pa = mecmdd_fit(&a, 2, &params, &mp).unwrap();
            let pb = mecmdd_fit(&b, 2, &params, &mp).unwrap();
            assert!(max_diff(pa.mass(), pb.mass()) < 1e-9);
            let (la, lb) = (&pa.view_weights().unwrap().lambda, &pb.view_weights().unwrap().lambda);
            for (ra, rb) in la.iter().zip(lb) {
                for (new, &old) in order.iter().enumerate() {
                    assert!((ra[old] - rb[new]).abs() < 1e-9);
                }
            }
            for (new, &old) in order.iter().enumerate() {
                assert_eq!(view_medoids(&pa)[old], view_medoids(&pb)[new]);
            }
        }
    }
}

/// Criterion at the returned masses and medoids with the weight row `row`
/// replaced by `(t, 1 - t)`.
fn criterion_with_row(
    mv: &MultiViewDissimilarity,
    p: &CredalPartition,
    params: &SolverParams,
    row: usize,
    t: f64,
) -> f64 {
    let mut w = p.view_weights().unwrap().clone();
    w.lambda[row] = vec![t, 1.0 - t];
    mecmdd_criterion(mv, p.focal(), view_medoids(p), &w, p.mass(), params)
}

fn grid_minimum(mv: &MultiViewDissimilarity, p: &CredalPartition, params: &SolverParams, row: usize) -> (f64, f64) {
    (0..=2000)
        .map(|k| {
            let t = k as f64 / 2000.0;
            (t, criterion_with_row(mv, p, params, row, t))
        })
        .fold((f64::NAN, f64::INFINITY), |best, cur| if cur.1 < best.1 { cur } else { best })
}

#[test]
fn returned_weights_beat_a_grid_search() {
    for seed in 0..5 {
        let x = blobs(14, 2, 2, 60 + seed);
        let mv = MultiViewDissimilarity::new(vec![
            euclidean_distances(&x, false),
            euclidean_distances(&uniform(14, 2, seed), false),
        ])
        .unwrap();
        let params = SolverParams { seed, epsi: 1e-10, maxit: 2000, ..SolverParams::default() };
        for variant in [WeightVariant::Rwg, WeightVariant::Rwl] {
            let p = mecmdd_fit(&mv, 2, &params, &MecmddParams { s: 2.0, variant }).unwrap();
            let w: &ViewWeights = p.view_weights().unwrap();
            for row in 0..w.lambda.len() {
                let at = criterion_with_row(&mv, &p, &params, row, w.lambda[row][0]);
                let (t, best) = grid_minimum(&mv, &p, &params, row);
                assert!(at <= best + 1e-9 * best.abs(), "{variant:?} row {row}: {at} vs grid {best}");
                assert!((t - w.lambda[row][0]).abs() <= 1e-3, "{variant:?} row {row}: {t} vs {}", w.lambda[row][0]);
            }
        }
    }
}

#[test]
fn constant_noise_view_gets_the_smaller_weight() {
    for seed in 0..10 {
        let structured = euclidean_distances(&two_groups(10, seed), false);
        let mean = structured.as_array().sum() / 90.0;
        let mv = MultiViewDissimilarity::new(vec![structured, constant(10, mean)]).unwrap();
        let params = SolverParams { seed, ntrials: 10, ..SolverParams::default() };
        let p = mecmdd_fit(&mv, 2, &params, &MecmddParams::default()).unwrap();
        let lambda = &p.view_weights().unwrap().lambda[0];
        assert!(lambda[0] > lambda[1], "seed {seed}: {lambda:?}");

        // the grid agrees on which view matters
        let (t, _) = grid_minimum(&mv, &p, &params, 0);
        assert!(t > 0.5);
    }
}

#[test]
fn view_weights_lie_on_the_simplex() {
    let x = blobs(20, 2, 3, 5);
    let mv = MultiViewDissimilarity::new(vec![
        euclidean_distances(&x, false),
        euclidean_distances(&x, true),
        constant(20, 1.0),
    ])
    .unwrap();
    for variant in [WeightVariant::Rwg, WeightVariant::Rwl] {
        let p = mecmdd_fit(&mv, 3, &SolverParams::default(), &MecmddParams { s: 1.5, variant }).unwrap();
        let w = p.view_weights().unwrap();
        let rows = if variant == WeightVariant::Rwg { 1 } else { p.focal().len() - 1 };
        assert_eq!(w.lambda.len(), rows);
        for row in &w.lambda {
            assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-9);
            assert!(row.iter().all(|&v| v >= 0.0));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn mecmdd_descends_and_stays_stochastic(
        seed in 0u64..1000,
        n in 4usize..30,
        c in 1usize..4,
        views in 1usize..4,
        s in 1.2f64..4.0,
        rwl in any::<bool>(),
        kind in prop_oneof![Just(FocalKind::Full), Just(FocalKind::Simple)],
    ) {
        let mv = MultiViewDissimilarity::new(
            (0..views).map(|l| euclidean_distances(&uniform(n, 2, seed * 7 + l as u64), l % 2 == 0)).collect(),
        )
        .unwrap();
        let variant = if rwl { WeightVariant::Rwl } else { WeightVariant::Rwg };
        let params = SolverParams { focal: FocalSpec::new(kind), seed, ..SolverParams::default() };
        let p = mecmdd_fit(&mv, c, &params, &MecmddParams { s, variant }).unwrap();
        assert_descent(&p);
        assert_row_stochastic(&p);
        for m in view_medoids(&p) {
            let mut sorted = m.clone();
            sorted.sort_unstable();
            sorted.dedup();
            prop_assert_eq!(sorted.len(), c);
        }
    }
}
