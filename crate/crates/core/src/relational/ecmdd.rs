//! Evidential c-medoids.

use ndarray::Array2;

use crate::data::DissimilarityMatrix;
use crate::error::{Error, Result};
use crate::focal::FocalMatrix;
use crate::partition::{CredalPartition, Prototypes};
use crate::solver::{
    alternate, assign_medoids, best_of_trials, check_clusters, finish, sample_distinct, Init, MassUpdate, Prototype,
    SolverParams, Trial,
};

use super::cluster_weights;

/// `τ(i, A_j)`: mean dissimilarity of object `i` to the medoids of the
/// clusters in `A_j`. Column 0 is zero.
pub fn ecmdd_distances(d: &DissimilarityMatrix, medoids: &[usize], focal: &FocalMatrix) -> Array2<f64> {
    let n = d.n();
    let mut out = Array2::zeros((n, focal.len()));
    for (j, set) in focal.nonempty() {
        let card = set.cardinality() as f64;
        for i in 0..n {
            out[[i, j]] = set.members().map(|k| d.get(i, medoids[k])).sum::<f64>() / card;
        }
    }
    out
}

/// Cost of choosing object `l` as medoid of cluster `k`, for fixed masses.
pub(crate) fn medoid_costs(d: &Array2<f64>, weights: &Array2<f64>) -> Array2<f64> {
    weights.t().dot(d)
}

struct Medoids<'a> {
    d: &'a DissimilarityMatrix,
    focal: &'a FocalMatrix,
    alpha: f64,
    beta: f64,
    medoids: Vec<usize>,
}

impl Prototype for Medoids<'_> {
    fn distances(&mut self) -> Array2<f64> {
        ecmdd_distances(self.d, &self.medoids, self.focal)
    }

    fn refit(&mut self, mass: &Array2<f64>, _iteration: usize) -> Result<()> {
        let w = cluster_weights(mass, self.focal, self.alpha, self.beta);
        self.medoids = assign_medoids(&medoid_costs(self.d.as_array(), &w), &self.medoids);
        Ok(())
    }
}

pub(crate) fn check_medoid_init(params: &SolverParams, n: usize, c: usize) -> Result<()> {
    match &params.init {
        Some(Init::Medoids(idx)) => {
            let mut sorted = idx.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if idx.len() != c || sorted.len() != c || idx.iter().any(|&i| i >= n) {
                return Err(Error::ShapeMismatch(format!("expected {c} distinct initial medoids below {n}")));
            }
            Ok(())
        }
        Some(_) => Err(Error::param("init", "medoid solvers take initial medoids only")),
        None => Ok(()),
    }
}

fn run_trial(
    d: &DissimilarityMatrix,
    focal: &FocalMatrix,
    upd: &MassUpdate,
    params: &SolverParams,
    seed: u64,
) -> Result<Trial<Vec<usize>>> {
    let medoids = match &params.init {
        Some(Init::Medoids(idx)) => idx.clone(),
        _ => sample_distinct(d.n(), focal.c(), seed, |a, b| d.get(a, b) == 0.0),
    };
    let block = Medoids { d, focal, alpha: params.alpha, beta: params.beta, medoids };
    alternate(block, upd, params, "ecmdd", seed).map(|t| t.map(|b| b.medoids))
}

/// Evidential c-medoids. Dissimilarities enter the criterion linearly and
/// need not be metric.
pub fn ecmdd_fit(d: &DissimilarityMatrix, c: usize, params: &SolverParams) -> Result<CredalPartition> {
    params.validate()?;
    check_clusters(c, d.n())?;
    check_medoid_init(params, d.n(), c)?;
    let focal = params.focal.build(c)?;
    let upd = MassUpdate::new(&focal, params.alpha, params.beta, params.delta * params.delta);
    let best = best_of_trials(params.effective_trials(), params.seed, |seed| run_trial(d, &focal, &upd, params, seed))?;
    let medoids = best.state.clone();
    Ok(finish(best, focal, "ecmdd", params.echo_with(c, []), params.seed)?
        .with_prototypes(Prototypes::Medoids(medoids)))
}

/// ECMdd objective at the given medoids and masses.
pub fn ecmdd_criterion(
    d: &DissimilarityMatrix,
    focal: &FocalMatrix,
    medoids: &[usize],
    mass: &Array2<f64>,
    params: &SolverParams,
) -> f64 {
    let upd = MassUpdate::new(focal, params.alpha, params.beta, params.delta * params.delta);
    upd.objective(ecmdd_distances(d, medoids, focal).view(), mass)
}
