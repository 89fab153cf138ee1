//! Evidential c-means for categorical attributes.

use ndarray::Array2;

use crate::data::CategoricalData;
use crate::error::{Error, Result};
use crate::focal::FocalMatrix;
use crate::partition::{CredalPartition, Prototypes};
use crate::solver::{
    alternate, best_of_trials, check_clusters, finish, sample_distinct, Init, MassUpdate, Prototype, SolverParams,
    Trial,
};

/// `profiles[k][q][t]`: weight of category `t` of attribute `q` in cluster `k`.
pub type Profiles = Vec<Vec<Vec<f64>>>;

/// Mismatch distance of every object to every focal set:
/// `d_ij = Σ_q (1 - p̄_jq(code_iq))` with `p̄_j` the mean profile of the
/// clusters in set `j`. Column 0 is zero.
pub fn categorical_distances(data: &CategoricalData, profiles: &Profiles, focal: &FocalMatrix) -> Array2<f64> {
    let n = data.n();
    let p = data.p() as f64;
    let codes = data.codes();
    let mut agree = Array2::<f64>::zeros((n, focal.c()));
    for i in 0..n {
        for (k, prof) in profiles.iter().enumerate() {
            agree[[i, k]] = prof.iter().enumerate().map(|(q, pq)| pq[codes[[i, q]]]).sum();
        }
    }
    let mut d = Array2::zeros((n, focal.len()));
    for (j, set) in focal.nonempty() {
        let card = set.cardinality() as f64;
        for i in 0..n {
            let s: f64 = set.members().map(|k| agree[[i, k]]).sum();
            d[[i, j]] = (p - s / card).max(0.0);
        }
    }
    d
}

/// Profiles minimizing the criterion for fixed masses: one-hot on the
/// category with the largest weighted count, lowest category on ties.
fn update_profiles(data: &CategoricalData, mass: &Array2<f64>, focal: &FocalMatrix, alpha: f64, beta: f64) -> Profiles {
    let c = focal.c();
    let mut w = Array2::<f64>::zeros((data.n(), c));
    for (j, set) in focal.nonempty() {
        let coef = (set.cardinality() as f64).powf(alpha - 1.0);
        for i in 0..data.n() {
            let mb = mass[[i, j]].powf(beta);
            for k in set.members() {
                w[[i, k]] += coef * mb;
            }
        }
    }
    (0..c)
        .map(|k| {
            data.cardinalities()
                .iter()
                .enumerate()
                .map(|(q, &card)| {
                    let mut counts = vec![0.0; card];
                    for i in 0..data.n() {
                        counts[data.codes()[[i, q]]] += w[[i, k]];
                    }
                    let best = crate::partition::argmax(counts.iter().copied());
                    one_hot(card, best)
                })
                .collect()
        })
        .collect()
}

fn one_hot(len: usize, at: usize) -> Vec<f64> {
    let mut v = vec![0.0; len];
    v[at] = 1.0;
    v
}

fn profiles_of_rows(data: &CategoricalData, rows: &[usize]) -> Profiles {
    rows.iter()
        .map(|&i| {
            data.cardinalities().iter().enumerate().map(|(q, &card)| one_hot(card, data.codes()[[i, q]])).collect()
        })
        .collect()
}

struct ProfileBlock<'a> {
    data: &'a CategoricalData,
    focal: &'a FocalMatrix,
    alpha: f64,
    beta: f64,
    profiles: Profiles,
}

impl Prototype for ProfileBlock<'_> {
    fn distances(&mut self) -> Array2<f64> {
        categorical_distances(self.data, &self.profiles, self.focal)
    }

    fn refit(&mut self, mass: &Array2<f64>, _iteration: usize) -> Result<()> {
        self.profiles = update_profiles(self.data, mass, self.focal, self.alpha, self.beta);
        Ok(())
    }
}

fn run_trial(
    data: &CategoricalData,
    focal: &FocalMatrix,
    upd: &MassUpdate,
    params: &SolverParams,
    seed: u64,
) -> Result<Trial<Profiles>> {
    let profiles = match &params.init {
        Some(Init::Mass(m0)) => update_profiles(data, m0, focal, params.alpha, params.beta),
        Some(Init::Medoids(idx)) => profiles_of_rows(data, idx),
        Some(Init::Prototypes(_)) => {
            return Err(Error::param("init", "categorical data takes initial rows or masses, not prototypes"))
        }
        None => {
            let codes = data.codes();
            let idx = sample_distinct(data.n(), focal.c(), seed, |a, b| codes.row(a) == codes.row(b));
            profiles_of_rows(data, &idx)
        }
    };
    let block = ProfileBlock { data, focal, alpha: params.alpha, beta: params.beta, profiles };
    alternate(block, upd, params, "catecm", seed).map(|t| t.map(|b| b.profiles))
}

/// Evidential c-means on categorical attributes with a mismatch distance.
pub fn catecm_fit(data: &CategoricalData, c: usize, params: &SolverParams) -> Result<CredalPartition> {
    params.validate()?;
    check_clusters(c, data.n())?;
    let focal = params.focal.build(c)?;
    match &params.init {
        Some(Init::Mass(m)) if m.dim() != (data.n(), focal.len()) => {
            return Err(Error::ShapeMismatch(format!(
                "initial masses are {:?}, expected ({}, {})",
                m.dim(),
                data.n(),
                focal.len()
            )))
        }
        Some(Init::Medoids(idx)) if idx.len() != c || idx.iter().any(|&i| i >= data.n()) => {
            return Err(Error::ShapeMismatch(format!("expected {c} initial rows below {}", data.n())))
        }
        _ => {}
    }
    let upd = MassUpdate::new(&focal, params.alpha, params.beta, params.delta * params.delta);
    let best =
        best_of_trials(params.effective_trials(), params.seed, |seed| run_trial(data, &focal, &upd, params, seed))?;
    let profiles = best.state.clone();
    Ok(finish(best, focal, "catecm", params.echo_with(c, []), params.seed)?
        .with_prototypes(Prototypes::Profiles(profiles)))
}

/// CatECM objective at the given profiles and masses.
pub fn catecm_criterion(
    data: &CategoricalData,
    focal: &FocalMatrix,
    profiles: &Profiles,
    mass: &Array2<f64>,
    params: &SolverParams,
) -> f64 {
    let upd = MassUpdate::new(focal, params.alpha, params.beta, params.delta * params.delta);
    upd.objective(categorical_distances(data, profiles, focal).view(), mass)
}
