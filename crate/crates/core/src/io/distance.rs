use ndarray::Array2;

use crate::data::{AttributeData, CategoricalData, DissimilarityMatrix};

/// Pairwise Euclidean distances, or their squares when `squared` is set.
pub fn euclidean_distances(x: &AttributeData, squared: bool) -> DissimilarityMatrix {
    let n = x.n();
    let mut d = Array2::zeros((n, n));
    for i in 0..n {
        for j in i + 1..n {
            let s: f64 = x.row(i).iter().zip(x.row(j)).map(|(a, b)| (a - b) * (a - b)).sum();
            let v = if squared { s } else { s.sqrt() };
            d[[i, j]] = v;
            d[[j, i]] = v;
        }
    }
    DissimilarityMatrix::new(d).expect("distances are symmetric and nonnegative")
}

/// Number of attributes on which two objects differ.
pub fn mismatch_distances(data: &CategoricalData) -> DissimilarityMatrix {
    let n = data.n();
    let codes = data.codes();
    let mut d = Array2::zeros((n, n));
    for i in 0..n {
        for j in i + 1..n {
            let v = codes.row(i).iter().zip(codes.row(j)).filter(|(a, b)| a != b).count() as f64;
            d[[i, j]] = v;
            d[[j, i]] = v;
        }
    }
    DissimilarityMatrix::new(d).expect("mismatch counts are symmetric and nonnegative")
}
