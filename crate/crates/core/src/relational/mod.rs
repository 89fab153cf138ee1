//! Solvers over dissimilarity matrices.

pub(crate) mod ecmdd;
mod recm;

pub(crate) use ecmdd::check_medoid_init;
pub use ecmdd::{ecmdd_criterion, ecmdd_distances, ecmdd_fit};
pub use recm::recm_fit;

use ndarray::Array2;

use crate::focal::FocalMatrix;

/// `w_ik = Σ_{j: ω_k ∈ A_j} |A_j|^(α-1) m_ij^β`, the weight of object `i` in
/// the update of cluster `k`'s prototype.
pub(crate) fn cluster_weights(mass: &Array2<f64>, focal: &FocalMatrix, alpha: f64, beta: f64) -> Array2<f64> {
    let mut w = Array2::zeros((mass.nrows(), focal.c()));
    for (j, set) in focal.nonempty() {
        let coef = (set.cardinality() as f64).powf(alpha - 1.0);
        for i in 0..mass.nrows() {
            let mb = mass[[i, j]].powf(beta);
            if mb == 0.0 {
                continue;
            }
            for k in set.members() {
                w[[i, k]] += coef * mb;
            }
        }
    }
    w
}
