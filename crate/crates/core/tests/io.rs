mod common;

use std::io::Write;

use common::*;
use credal::io::{
    euclidean_distances, load_bundled, load_csv, load_dissimilarity, mismatch_distances, pca_project, DatasetSchema,
    FeatureKind, LabelColumn,
};
use credal::{ecm_fit, read_json, write_json, AttributeData, CategoricalData, Error, SolverParams};
use ndarray::{Array2, Axis};
use proptest::prelude::*;
use rand::Rng;

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
fn jacobi_eigenvalues(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let p = a.len();
    for _ in 0..100 {
        let off: f64 = (0..p)
            .flat_map(|i| (0..p).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j].powi(2))
            .sum();
        if off < 1e-26 {
            break;
        }
        for k in 0..p {
            for l in k + 1..p {
                if a[k][l].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[l][l] - a[k][k]) / (2.0 * a[k][l]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let (c, s) = (1.0 / (t * t + 1.0).sqrt(), t / (t * t + 1.0).sqrt());
                for row in a.iter_mut() {
                    let (ark, arl) = (row[k], row[l]);
                    row[k] = c * ark - s * arl;
                    row[l] = s * ark + c * arl;
                }
                #[allow(clippy::needless_range_loop)]
                for r in 0..p {
                    let (akr, alr) = (a[k][r], a[l][r]);
                    a[k][r] = c * akr - s * alr;
                    a[l][r] = s * akr + c * alr;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..p).map(|i| a[i][i]).collect();
    ev.sort_by(|x, y| y.total_cmp(x));
    ev
}

fn covariance(x: &AttributeData) -> Vec<Vec<f64>> {
    let (n, p) = (x.n(), x.p());
    let means: Vec<f64> = (0..p).map(|q| x.x().column(q).sum() / n as f64).collect();
    (0..p)
        .map(|a| {
            (0..p)
                .map(|b| {
                    (0..n).map(|i| (x.x()[[i, a]] - means[a]) * (x.x()[[i, b]] - means[b])).sum::<f64>()
                        / (n - 1) as f64
                })
                .collect()
        })
        .collect()
}

#[test]
fn iris_leading_components_explain_most_variance() {
    let iris = load_bundled("iris").unwrap();
    let x = iris.attributes().unwrap();
    let proj = pca_project(x, 2, false).unwrap();
    let ev = jacobi_eigenvalues(covariance(x));
    let total: f64 = ev.iter().sum();
    for (share, value) in proj.explained.iter().zip(&ev) {
        assert!((share - value / total).abs() < 1e-9, "{share} vs {}", value / total);
    }
    assert!(proj.explained[0] + proj.explained[1] > 0.95);
    let gram = proj.axes.t().dot(&proj.axes);
    assert!(max_diff(&gram, &Array2::eye(2)) < 1e-12);
}

#[test]
fn full_pca_is_a_rigid_motion() {
    for seed in 0..5 {
        let x = uniform(25, 3, seed);
        let proj = pca_project(&x, 3, false).unwrap();
        let scored = AttributeData::new(proj.scores.clone()).unwrap();
        let before = euclidean_distances(&x, false);
        let after = euclidean_distances(&scored, false);
        assert!(max_diff(before.as_array(), after.as_array()) < 1e-10);
        for k in 0..3 {
            let col = proj.scores.column(k);
            assert!(col.sum().abs() < 1e-10);
        }
    }
}

#[test]
fn standardized_pca_rejects_constant_columns() {
    let x = AttributeData::new(ndarray::array![[1.0, 2.0], [1.0, 3.0], [1.0, 5.0]]).unwrap();
    assert!(pca_project(&x, 1, false).is_ok());
    assert!(matches!(pca_project(&x, 1, true), Err(Error::InvalidData(_))));
}

#[test]
fn blank_cells_are_reported_with_their_row() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "a,b,label\n1,2,x\n3,,y\n5,6,x").unwrap();
    let schema = DatasetSchema::default();
    match load_csv(f.path(), &schema) {
        Err(Error::MissingValue { row, .. }) => assert_eq!(row, 2),
        other => panic!("expected a missing value, got {other:?}"),
    }
}

#[test]
fn csv_files_load_with_their_labels() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "a;b;kind\n1;2;x\n3;4;y\n5;6;x").unwrap();
    let schema =
        DatasetSchema { delimiter: b';', label: LabelColumn::Named("kind".into()), ..DatasetSchema::default() };
    let d = load_csv(f.path(), &schema).unwrap();
    assert_eq!(d.attributes().unwrap().x(), &ndarray::array![[1.0, 2.0], [3.0, 4.0], [5.0, 6.0]]);
    let (codes, levels) = d.label_codes().unwrap();
    assert_eq!(codes, vec![0, 1, 0]);
    assert_eq!(levels, vec!["x".to_string(), "y".to_string()]);

    let mut g = tempfile::NamedTempFile::new().unwrap();
    writeln!(g, "red,s\nblue,m\nred,m").unwrap();
    let schema = DatasetSchema {
        has_header: false,
        label: LabelColumn::None,
        kind: FeatureKind::Categorical,
        ..DatasetSchema::default()
    };
    let c = load_csv(g.path(), &schema).unwrap();
    assert_eq!(c.categorical().unwrap().cardinalities(), &[2, 2]);
}

#[test]
fn dissimilarity_files_round_trip() {
    let d = euclidean_distances(&uniform(6, 2, 4), false);
    let mut f = tempfile::NamedTempFile::new().unwrap();
    for row in d.as_array().rows() {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:?}")).collect();
        writeln!(f, "{}", cells.join(",")).unwrap();
    }
    let back = load_dissimilarity(f.path(), b',').unwrap();
    assert_eq!(back.as_array(), d.as_array());
}

#[test]
fn partitions_round_trip_through_files() {
    let x = blobs(20, 2, 3, 1);
    let p = ecm_fit(&x, 3, &SolverParams::default()).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.json");
    write_json(&p, &path).unwrap();
    let back = read_json(&path).unwrap();
    assert_eq!(back.mass(), p.mass());
    assert_eq!(back.criterion(), p.criterion());
    assert_eq!(back.prototypes(), p.prototypes());
    assert!(read_json(&dir.path().join("absent.json")).is_err());
}

#[test]
fn bundled_datasets_have_the_expected_shape() {
    let iris = load_bundled("iris").unwrap();
    assert_eq!((iris.n(), iris.attributes().unwrap().p()), (150, 4));
    assert_eq!(iris.label_codes().unwrap().1.len(), 3);
    let four = load_bundled("fourclass").unwrap();
    assert_eq!(four.attributes().unwrap().p(), 2);
    assert!(load_bundled("nope").is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn euclidean_distances_match_a_naive_loop(seed in 0u64..10_000, n in 1usize..20, p in 1usize..5, squared in any::<bool>()) {
        let x = uniform(n, p, seed);
        let d = euclidean_distances(&x, squared);
        for i in 0..n {
            for j in 0..n {
                let s: f64 = (0..p).map(|q| (x.x()[[i, q]] - x.x()[[j, q]]).powi(2)).sum();
                let expected = if squared { s } else { s.sqrt() };
                prop_assert!((d.get(i, j) - expected).abs() <= 1e-12 * expected.max(1.0));
            }
        }
    }

    #[test]
    fn mismatch_distances_count_disagreements(seed in 0u64..10_000, n in 1usize..20) {
        let cards = [2usize, 3, 5];
        let mut r = rng(seed);
        let codes = Array2::from_shape_fn((n, 3), |(_, q)| r.random_range(0..cards[q]));
        let data = CategoricalData::new(codes.clone(), cards.to_vec()).unwrap();
        let d = mismatch_distances(&data);
        for i in 0..n {
            for j in 0..n {
                let count = codes.index_axis(Axis(0), i).iter().zip(codes.index_axis(Axis(0), j)).filter(|(a, b)| a != b).count();
                prop_assert_eq!(d.get(i, j), count as f64);
            }
        }
    }
}
