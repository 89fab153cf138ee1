#![allow(dead_code)]

use credal::{AttributeData, CredalPartition, FocalMatrix};
use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `n` points around `c` random centers in `[0, 10]^p`.
pub fn blobs(n: usize, p: usize, c: usize, seed: u64) -> AttributeData {
    let mut r = rng(seed);
    let centers: Vec<Vec<f64>> = (0..c).map(|_| (0..p).map(|_| r.random_range(0.0..10.0)).collect()).collect();
    let x = Array2::from_shape_fn((n, p), |(i, q)| centers[i % c][q] + r.random_range(-1.0..1.0));
    AttributeData::new(x).unwrap()
}

pub fn uniform(n: usize, p: usize, seed: u64) -> AttributeData {
    let mut r = rng(seed);
    AttributeData::new(Array2::from_shape_fn((n, p), |_| r.random_range(-5.0..5.0))).unwrap()
}

pub fn assert_row_stochastic(p: &CredalPartition) {
    for (i, row) in p.mass().rows().into_iter().enumerate() {
        assert!(row.iter().all(|&v| v >= 0.0), "negative mass in row {i}");
        assert!((row.sum() - 1.0).abs() <= 1e-9, "row {i} sums to {}", row.sum());
    }
}

pub fn assert_descent(p: &CredalPartition) {
    for (t, w) in p.diagnostics().history.windows(2).enumerate() {
        assert!(w[1] <= w[0] + 1e-9 * w[0].abs(), "criterion rose at sweep {}: {} -> {}", t + 1, w[0], w[1]);
    }
}

/// Checks that no single-row move of size `eps` between two focal sets
/// lowers `objective`.
pub fn assert_mass_optimal(mass: &Array2<f64>, eps: f64, objective: impl Fn(&Array2<f64>) -> f64) {
    let base = objective(mass);
    let f = mass.ncols();
    for i in 0..mass.nrows() {
        for a in 0..f {
            for b in 0..f {
                if a == b || mass[[i, b]] < eps {
                    continue;
                }
                let mut m = mass.clone();
                m[[i, a]] += eps;
                m[[i, b]] -= eps;
                let j = objective(&m);
                assert!(j >= base - 1e-12 * base.abs(), "row {i}: moving mass {b}->{a} lowers J {base} -> {j}");
            }
        }
    }
}

pub fn max_diff(a: &Array2<f64>, b: &Array2<f64>) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Focal sets with mass on a singleton, as 0-based cluster per object.
pub fn argmax_singletons(p: &CredalPartition) -> Vec<Option<usize>> {
    let focal: &FocalMatrix = p.focal();
    (0..p.n())
        .map(|i| {
            let s = focal.set(p.argmax_focal(i));
            (s.cardinality() == 1).then(|| s.members().next().unwrap())
        })
        .collect()
}
