//! Multi-view evidential c-medoids with adaptive view weights.

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::data::DissimilarityMatrix;
use crate::error::{Error, Result};
use crate::focal::FocalMatrix;
use crate::partition::{CredalPartition, Prototypes, ViewWeights, WeightVariant};
use crate::relational::ecmdd_distances;
use crate::solver::{
    alternate, assign_medoids, best_of_trials, check_clusters, finish, sample_distinct, Init, MassUpdate, Prototype,
    SolverParams, Trial,
};

/// Several dissimilarity views of the same objects.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiViewDissimilarity {
    views: Vec<DissimilarityMatrix>,
    deltas: Option<Vec<f64>>,
}

impl MultiViewDissimilarity {
    pub fn new(views: Vec<DissimilarityMatrix>) -> Result<Self> {
        let Some(first) = views.first() else {
            return Err(Error::InvalidData("at least one view is required".into()));
        };
        let n = first.n();
        if let Some(l) = views.iter().position(|v| v.n() != n) {
            return Err(Error::ShapeMismatch(format!(
                "view {} has {} objects but view 1 has {n}",
                l + 1,
                views[l].n()
            )));
        }
        Ok(Self { views, deltas: None })
    }

    /// Per-view outlier distances; without them every view uses the solver's `delta`.
    pub fn with_deltas(mut self, deltas: Vec<f64>) -> Result<Self> {
        if deltas.len() != self.views.len() {
            return Err(Error::ShapeMismatch(format!("{} deltas for {} views", deltas.len(), self.views.len())));
        }
        if let Some(d) = deltas.iter().find(|d| !(d.is_finite() && **d > 0.0)) {
            return Err(Error::param("delta", format!("every view delta must be > 0, got {d}")));
        }
        self.deltas = Some(deltas);
        Ok(self)
    }

    pub fn views(&self) -> &[DissimilarityMatrix] {
        &self.views
    }

    pub fn n(&self) -> usize {
        self.views[0].n()
    }

    pub fn p(&self) -> usize {
        self.views.len()
    }

    pub fn deltas(&self, default: f64) -> Vec<f64> {
        self.deltas.clone().unwrap_or_else(|| vec![default; self.p()])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MecmddParams {
    /// View-weight exponent, must exceed 1.
    pub s: f64,
    pub variant: WeightVariant,
}

impl Default for MecmddParams {
    fn default() -> Self {
        Self { s: 2.0, variant: WeightVariant::Rwg }
    }
}

/// Minimizer of `Σ_l λ_l^s e_l` on the simplex. Views with `e_l = 0` share
/// the whole weight when there are any.
pub fn simplex_weights(e: &[f64], s: f64) -> Vec<f64> {
    let zeros = e.iter().filter(|&&v| v <= 0.0).count();
    if zeros > 0 {
        let share = 1.0 / zeros as f64;
        return e.iter().map(|&v| if v <= 0.0 { share } else { 0.0 }).collect();
    }
    let exponent = -1.0 / (s - 1.0);
    let logs: Vec<f64> = e.iter().map(|v| exponent * v.ln()).collect();
    let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let w: Vec<f64> = logs.iter().map(|l| (l - top).exp()).collect();
    let total: f64 = w.iter().sum();
    w.into_iter().map(|v| v / total).collect()
}

struct Block<'a> {
    mv: &'a MultiViewDissimilarity,
    focal: &'a FocalMatrix,
    alpha: f64,
    beta: f64,
    s: f64,
    variant: WeightVariant,
    /// `medoids[l][k]`.
    medoids: Vec<Vec<usize>>,
    /// One row (RWG) or one row per nonempty focal set (RWL).
    lambda: Vec<Vec<f64>>,
    /// Per-view `n × f` distances at the current medoids.
    per_view: Vec<Array2<f64>>,
}

impl Block<'_> {
    fn lambda_row(&self, j: usize) -> &[f64] {
        match self.variant {
            WeightVariant::Rwg => &self.lambda[0],
            WeightVariant::Rwl => &self.lambda[j - 1],
        }
    }

    fn refresh_views(&mut self) {
        self.per_view =
            self.mv.views().iter().zip(&self.medoids).map(|(d, m)| ecmdd_distances(d, m, self.focal)).collect();
    }

    /// `E_jl = Σ_i |A_j|^α m_ij^β τ_l(i, A_j)`, one row per nonempty set.
    fn view_errors(&self, mass: &Array2<f64>) -> Vec<Vec<f64>> {
        self.focal
            .nonempty()
            .map(|(j, set)| {
                let ca = (set.cardinality() as f64).powf(self.alpha);
                self.per_view
                    .iter()
                    .map(|tau| {
                        (0..mass.nrows())
                            .map(|i| {
                                let m = mass[[i, j]];
                                if m > 0.0 {
                                    ca * m.powf(self.beta) * tau[[i, j]]
                                } else {
                                    0.0
                                }
                            })
                            .sum()
                    })
                    .collect()
            })
            .collect()
    }
}

impl Prototype for Block<'_> {
    fn distances(&mut self) -> Array2<f64> {
        if self.per_view.is_empty() {
            self.refresh_views();
        }
        let (n, f) = self.per_view[0].dim();
        let mut out = Array2::zeros((n, f));
        for (j, _) in self.focal.nonempty() {
            let lam: Vec<f64> = self.lambda_row(j).iter().map(|w| w.powf(self.s)).collect();
            for i in 0..n {
                out[[i, j]] = self.per_view.iter().zip(&lam).map(|(t, w)| w * t[[i, j]]).sum();
            }
        }
        out
    }

    fn refit(&mut self, mass: &Array2<f64>, _iteration: usize) -> Result<()> {
        let n = mass.nrows();
        let c = self.focal.c();
        for l in 0..self.mv.p() {
            let mut w = Array2::<f64>::zeros((n, c));
            for (j, set) in self.focal.nonempty() {
                let coef = (set.cardinality() as f64).powf(self.alpha - 1.0) * self.lambda_row(j)[l].powf(self.s);
                for i in 0..n {
                    let mb = mass[[i, j]].powf(self.beta);
                    for k in set.members() {
                        w[[i, k]] += coef * mb;
                    }
                }
            }
            let cost = w.t().dot(self.mv.views()[l].as_array());
            self.medoids[l] = assign_medoids(&cost, &self.medoids[l]);
        }
        self.refresh_views();
        let errors = self.view_errors(mass);
        self.lambda = match self.variant {
            WeightVariant::Rwl => errors.iter().map(|e| simplex_weights(e, self.s)).collect(),
            WeightVariant::Rwg => {
                let total: Vec<f64> = (0..self.mv.p()).map(|l| errors.iter().map(|e| e[l]).sum()).collect();
                vec![simplex_weights(&total, self.s)]
            }
        };
        Ok(())
    }
}

type MultiState = (Vec<Vec<usize>>, Vec<Vec<f64>>);

fn run_trial(
    mv: &MultiViewDissimilarity,
    focal: &FocalMatrix,
    upd: &MassUpdate,
    params: &SolverParams,
    mp: &MecmddParams,
    seed: u64,
) -> Result<Trial<MultiState>> {
    let p = mv.p();
    let start = match &params.init {
        Some(Init::Medoids(idx)) => idx.clone(),
        _ => {
            sample_distinct(mv.n(), focal.c(), seed, |a, b| mv.views().iter().map(|d| d.get(a, b)).sum::<f64>() == 0.0)
        }
    };
    let rows = match mp.variant {
        WeightVariant::Rwg => 1,
        WeightVariant::Rwl => focal.len() - 1,
    };
    let block = Block {
        mv,
        focal,
        alpha: params.alpha,
        beta: params.beta,
        s: mp.s,
        variant: mp.variant,
        medoids: vec![start; p],
        lambda: vec![vec![1.0 / p as f64; p]; rows],
        per_view: Vec::new(),
    };
    alternate(block, upd, params, "mecmdd", seed).map(|t| t.map(|b| (b.medoids, b.lambda)))
}

/// Multi-view evidential c-medoids. Every view keeps its own medoids; views
/// are weighted globally (RWG) or per focal set (RWL).
pub fn mecmdd_fit(
    mv: &MultiViewDissimilarity,
    c: usize,
    params: &SolverParams,
    mp: &MecmddParams,
) -> Result<CredalPartition> {
    params.validate()?;
    if !(mp.s.is_finite() && mp.s > 1.0) {
        return Err(Error::param("s", format!("must be > 1, got {}", mp.s)));
    }
    check_clusters(c, mv.n())?;
    crate::relational::check_medoid_init(params, mv.n(), c)?;
    let focal = params.focal.build(c)?;
    let deltas = mv.deltas(params.delta);
    let empty_cost: f64 = deltas.iter().map(|d| d * d).sum();
    let upd = MassUpdate::new(&focal, params.alpha, params.beta, empty_cost);
    let best =
        best_of_trials(params.effective_trials(), params.seed, |seed| run_trial(mv, &focal, &upd, params, mp, seed))?;
    let (medoids, lambda) = best.state.clone();
    let echo = params.echo_with(
        c,
        [
            ("s", mp.s.into()),
            ("variant", serde_json::to_value(mp.variant).expect("variant serializes")),
            ("view_deltas", deltas.clone().into()),
        ],
    );
    Ok(finish(best, focal, "mecmdd", echo, params.seed)?
        .with_prototypes(Prototypes::ViewMedoids(medoids))
        .with_view_weights(ViewWeights { variant: mp.variant, s: mp.s, lambda }))
}

/// MECMdd objective at the given per-view medoids, weights and masses.
pub fn mecmdd_criterion(
    mv: &MultiViewDissimilarity,
    focal: &FocalMatrix,
    medoids: &[Vec<usize>],
    weights: &ViewWeights,
    mass: &Array2<f64>,
    params: &SolverParams,
) -> f64 {
    let empty_cost: f64 = mv.deltas(params.delta).iter().map(|d| d * d).sum();
    let upd = MassUpdate::new(focal, params.alpha, params.beta, empty_cost);
    let mut block = Block {
        mv,
        focal,
        alpha: params.alpha,
        beta: params.beta,
        s: weights.s,
        variant: weights.variant,
        medoids: medoids.to_vec(),
        lambda: weights.lambda.clone(),
        per_view: Vec::new(),
    };
    upd.objective(block.distances().view(), mass)
}
