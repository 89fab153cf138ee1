//! Relational evidential c-means.
//!
//! Each singleton prototype is an affine combination `v_k = Σ_i W_ki x_i` of
//! the (unobserved) objects, so squared distances to focal-set prototypes
//! follow from the dissimilarities alone:
//! `d²(i, v̄_j) = (τ a_j)_i - ½ a_jᵀ τ a_j` with `a_j = Σ_{k∈A_j} W_k / |A_j|`.

use ndarray::Array2;

use crate::data::DissimilarityMatrix;
use crate::error::{Error, Result};
use crate::focal::FocalMatrix;
use crate::partition::{CredalPartition, Prototypes};
use crate::solver::{
    alternate, best_of_trials, check_clusters, finish, sample_distinct, solve_prototypes, Init, MassUpdate, Prototype,
    SolverParams, Trial,
};

use super::cluster_weights;

/// Implicit squared distances more negative than this are counted as clamped.
const CLAMP_TOLERANCE: f64 = 1e-9;

struct Weights<'a> {
    tau: &'a Array2<f64>,
    focal: &'a FocalMatrix,
    /// `f × c` focal-set averaging matrix.
    average: Array2<f64>,
    alpha: f64,
    beta: f64,
    w: Array2<f64>,
    /// Clamped distances over every evaluation so far.
    clamped: usize,
}

impl<'a> Weights<'a> {
    fn new(tau: &'a Array2<f64>, focal: &'a FocalMatrix, alpha: f64, beta: f64) -> Self {
        let mut average = Array2::zeros((focal.len(), focal.c()));
        for (j, set) in focal.nonempty() {
            for k in set.members() {
                average[[j, k]] = 1.0 / set.cardinality() as f64;
            }
        }
        Self { tau, focal, average, alpha, beta, w: Array2::zeros((0, 0)), clamped: 0 }
    }

    fn solve(&self, mass: &Array2<f64>, iteration: usize) -> Result<Array2<f64>> {
        let c = self.focal.c();
        let mut h = Array2::zeros((c, c));
        for (j, set) in self.focal.nonempty() {
            let coef = (set.cardinality() as f64).powf(self.alpha - 2.0);
            let total: f64 = mass.column(j).iter().map(|m| m.powf(self.beta)).sum();
            for k in set.members() {
                for l in set.members() {
                    h[[k, l]] += coef * total;
                }
            }
        }
        let b = cluster_weights(mass, self.focal, self.alpha, self.beta).reversed_axes();
        solve_prototypes(&h, &b, iteration)
    }
}

impl Prototype for Weights<'_> {
    fn distances(&mut self) -> Array2<f64> {
        let a = self.average.dot(&self.w);
        let ta = self.tau.dot(&a.t());
        let mut d = Array2::zeros(ta.raw_dim());
        for (j, _) in self.focal.nonempty() {
            let half_q = 0.5 * a.row(j).dot(&ta.column(j));
            for i in 0..d.nrows() {
                let v = ta[[i, j]] - half_q;
                if v < -CLAMP_TOLERANCE {
                    self.clamped += 1;
                }
                d[[i, j]] = v.max(0.0);
            }
        }
        d
    }

    fn refit(&mut self, mass: &Array2<f64>, iteration: usize) -> Result<()> {
        self.w = self.solve(mass, iteration)?;
        Ok(())
    }
}

fn run_trial(
    d: &DissimilarityMatrix,
    focal: &FocalMatrix,
    upd: &MassUpdate,
    params: &SolverParams,
    seed: u64,
) -> Result<Trial<(Array2<f64>, usize)>> {
    let n = d.n();
    let c = focal.c();
    let mut block = Weights::new(d.as_array(), focal, params.alpha, params.beta);
    let one_hot = |idx: &[usize]| {
        let mut w = Array2::zeros((c, n));
        for (k, &i) in idx.iter().enumerate() {
            w[[k, i]] = 1.0;
        }
        w
    };
    block.w = match &params.init {
        Some(Init::Mass(m0)) => block.solve(m0, 0)?,
        Some(Init::Medoids(idx)) => one_hot(idx),
        Some(Init::Prototypes(_)) => {
            return Err(Error::param("init", "relational data takes initial objects or masses, not prototypes"))
        }
        None => one_hot(&sample_distinct(n, c, seed, |a, b| d.get(a, b) == 0.0)),
    };
    let trial = alternate(block, upd, params, "recm", seed)?;
    if trial.state.clamped > 0 {
        log::warn!("recm seed {seed}: {} negative implicit distances clamped to zero", trial.state.clamped);
    }
    Ok(trial.map(|b| (b.w, b.clamped)))
}

/// Relational evidential c-means, exact for squared Euclidean dissimilarities.
/// Initial masses go in `params.init` as [`Init::Mass`].
pub fn recm_fit(d: &DissimilarityMatrix, c: usize, params: &SolverParams) -> Result<CredalPartition> {
    params.validate()?;
    check_clusters(c, d.n())?;
    let focal = params.focal.build(c)?;
    match &params.init {
        Some(Init::Mass(m)) if m.dim() != (d.n(), focal.len()) => {
            return Err(Error::ShapeMismatch(format!(
                "initial masses are {:?}, expected ({}, {})",
                m.dim(),
                d.n(),
                focal.len()
            )))
        }
        Some(Init::Medoids(idx)) if idx.len() != c || idx.iter().any(|&i| i >= d.n()) => {
            return Err(Error::ShapeMismatch(format!("expected {c} initial objects below {}", d.n())))
        }
        _ => {}
    }
    let upd = MassUpdate::new(&focal, params.alpha, params.beta, params.delta * params.delta);
    let best = best_of_trials(params.effective_trials(), params.seed, |seed| run_trial(d, &focal, &upd, params, seed))?;
    let (w, clamped) = best.state.clone();
    let p = finish(best, focal, "recm", params.echo_with(c, []), params.seed)?;
    let mut diagnostics = p.diagnostics().clone();
    diagnostics.clamped_distances = clamped;
    Ok(p.with_diagnostics(diagnostics)
        .with_prototypes(Prototypes::Weights(w.rows().into_iter().map(|r| r.to_vec()).collect())))
}
