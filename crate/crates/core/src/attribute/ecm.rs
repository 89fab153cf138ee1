//! Evidential c-means and its credal c-means variant.

use ndarray::{Array2, ArrayView1};

use crate::data::AttributeData;
use crate::error::{Error, Result};
use crate::focal::{FocalMatrix, FocalSet};
use crate::partition::{CredalPartition, Prototypes};
use crate::solver::{
    alternate, best_of_trials, check_clusters, finish, sample_distinct, solve_prototypes, Init, MassUpdate, Prototype,
    SolverParams, Trial,
};

/// Prototypes and distances of an attribute partition.
#[derive(Debug, Clone, PartialEq)]
pub struct EcmState {
    /// `c × p` singleton prototypes.
    pub v: Array2<f64>,
    /// `f × p` focal-set prototypes; row 0 (the empty set) is zero.
    pub vbar: Array2<f64>,
    /// `n × f` squared distances to `vbar`; column 0 is zero.
    pub d2: Array2<f64>,
    pub mass: Array2<f64>,
}

impl EcmState {
    /// Rebuilds the state of a partition returned by [`ecm_fit`] or [`ccm_fit`].
    pub fn from_partition(x: &AttributeData, partition: &CredalPartition) -> Result<Self> {
        let Some(Prototypes::Centers(rows)) = partition.prototypes() else {
            return Err(Error::InvalidData("partition has no attribute prototypes".into()));
        };
        let v = centers_from_rows(rows, x.p())?;
        let focal = partition.focal();
        let vbar = meta_prototypes(&v, focal);
        let d2 = squared_distances(x, &vbar, focal);
        Ok(Self { v, vbar, d2, mass: partition.mass().clone() })
    }
}

fn centers_from_rows(rows: &[Vec<f64>], p: usize) -> Result<Array2<f64>> {
    if rows.iter().any(|r| r.len() != p) {
        return Err(Error::ShapeMismatch(format!("prototypes do not have {p} features")));
    }
    let flat: Vec<f64> = rows.iter().flatten().copied().collect();
    Ok(Array2::from_shape_vec((rows.len(), p), flat).expect("row lengths checked"))
}

/// Row `j` is the mean of the singleton prototypes in focal set `j`.
pub fn meta_prototypes(v: &Array2<f64>, focal: &FocalMatrix) -> Array2<f64> {
    let mut vbar = Array2::zeros((focal.len(), v.ncols()));
    for (j, set) in focal.nonempty() {
        let mut row = vbar.row_mut(j);
        for k in set.members() {
            row += &v.row(k);
        }
        row /= set.cardinality() as f64;
    }
    vbar
}

fn sq_dist(a: ArrayView1<'_, f64>, b: ArrayView1<'_, f64>) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn squared_distances(x: &AttributeData, vbar: &Array2<f64>, focal: &FocalMatrix) -> Array2<f64> {
    let mut d2 = Array2::zeros((x.n(), focal.len()));
    for i in 0..x.n() {
        for (j, _) in focal.nonempty() {
            d2[[i, j]] = sq_dist(x.row(i), vbar.row(j));
        }
    }
    d2
}

/// Credal c-means distance of one object to focal set `set`:
/// `(Σ_{k∈A} d_ik² + γ d_iA²) / (|A| + γ)`. `d2_singletons` is indexed by cluster.
pub fn ccm_distance(d2_singletons: &[f64], d2_center: f64, set: FocalSet, gamma: f64) -> f64 {
    let spread: f64 = set.members().map(|k| d2_singletons[k]).sum();
    (spread + gamma * d2_center) / (set.cardinality() as f64 + gamma)
}

#[derive(Debug, Clone, Copy)]
enum Metric {
    Ecm,
    Ccm { gamma: f64 },
}

impl Metric {
    fn name(self) -> &'static str {
        match self {
            Metric::Ecm => "ecm",
            Metric::Ccm { .. } => "ccm",
        }
    }

    fn distances(self, x: &AttributeData, v: &Array2<f64>, focal: &FocalMatrix) -> Array2<f64> {
        let vbar = meta_prototypes(v, focal);
        let d2 = squared_distances(x, &vbar, focal);
        let Metric::Ccm { gamma } = self else {
            return d2;
        };
        let mut out = d2.clone();
        let mut ds = vec![0.0; focal.c()];
        for i in 0..x.n() {
            for (k, d) in ds.iter_mut().enumerate() {
                *d = sq_dist(x.row(i), v.row(k));
            }
            for (j, set) in focal.nonempty() {
                out[[i, j]] = ccm_distance(&ds, d2[[i, j]], set, gamma);
            }
        }
        out
    }

    /// Coefficients of the linear system whose solution minimizes the
    /// criterion over the singleton prototypes with masses fixed.
    fn center_system(
        self,
        x: &AttributeData,
        mass: &Array2<f64>,
        focal: &FocalMatrix,
        alpha: f64,
        beta: f64,
    ) -> (Array2<f64>, Array2<f64>) {
        let c = focal.c();
        let mut h = Array2::zeros((c, c));
        let mut b = Array2::zeros((c, x.p()));
        for (j, set) in focal.nonempty() {
            let card = set.cardinality() as f64;
            let members: Vec<usize> = set.members().collect();
            let (pair_coef, diag_coef, rhs_coef) = match self {
                Metric::Ecm => (card.powf(alpha - 2.0), 0.0, card.powf(alpha - 1.0)),
                Metric::Ccm { gamma } => {
                    let w = card.powf(alpha) / (card + gamma);
                    (w * gamma / (card * card), w, w * (1.0 + gamma / card))
                }
            };
            let mut total = 0.0;
            for i in 0..x.n() {
                let mb = mass[[i, j]].powf(beta);
                if mb == 0.0 {
                    continue;
                }
                total += mb;
                for &l in &members {
                    let mut row = b.row_mut(l);
                    row.scaled_add(rhs_coef * mb, &x.row(i));
                }
            }
            for &l in &members {
                h[[l, l]] += diag_coef * total;
                for &k in &members {
                    h[[l, k]] += pair_coef * total;
                }
            }
        }
        (h, b)
    }
}

struct Centers<'a> {
    x: &'a AttributeData,
    focal: &'a FocalMatrix,
    metric: Metric,
    alpha: f64,
    beta: f64,
    v: Array2<f64>,
}

impl Centers<'_> {
    fn solve(&self, mass: &Array2<f64>, iteration: usize) -> Result<Array2<f64>> {
        let (h, b) = self.metric.center_system(self.x, mass, self.focal, self.alpha, self.beta);
        solve_prototypes(&h, &b, iteration)
    }
}

impl Prototype for Centers<'_> {
    fn distances(&mut self) -> Array2<f64> {
        self.metric.distances(self.x, &self.v, self.focal)
    }

    fn refit(&mut self, mass: &Array2<f64>, iteration: usize) -> Result<()> {
        self.v = self.solve(mass, iteration)?;
        Ok(())
    }
}

fn run_trial(
    x: &AttributeData,
    focal: &FocalMatrix,
    upd: &MassUpdate,
    params: &SolverParams,
    metric: Metric,
    seed: u64,
) -> Result<Trial<Array2<f64>>> {
    let mut centers = Centers { x, focal, metric, alpha: params.alpha, beta: params.beta, v: Array2::zeros((0, 0)) };
    centers.v = match &params.init {
        Some(Init::Prototypes(g)) => g.clone(),
        Some(Init::Mass(m0)) => centers.solve(m0, 0)?,
        Some(Init::Medoids(idx)) => x.x().select(ndarray::Axis(0), idx),
        None => {
            let idx = sample_distinct(x.n(), focal.c(), seed, |a, b| x.row(a) == x.row(b));
            x.x().select(ndarray::Axis(0), &idx)
        }
    };
    alternate(centers, upd, params, metric.name(), seed).map(|t| t.map(|c| c.v))
}

fn check_init(params: &SolverParams, n: usize, c: usize, p: usize, f: usize) -> Result<()> {
    match &params.init {
        Some(Init::Prototypes(g)) if g.dim() != (c, p) => {
            Err(Error::ShapeMismatch(format!("initial prototypes are {:?}, expected ({c}, {p})", g.dim())))
        }
        Some(Init::Prototypes(g)) if g.iter().any(|v| !v.is_finite()) => {
            Err(Error::InvalidData("initial prototypes are not finite".into()))
        }
        Some(Init::Mass(m)) if m.dim() != (n, f) => {
            Err(Error::ShapeMismatch(format!("initial masses are {:?}, expected ({n}, {f})", m.dim())))
        }
        Some(Init::Medoids(idx)) if idx.len() != c || idx.iter().any(|&i| i >= n) => {
            Err(Error::ShapeMismatch(format!("expected {c} initial rows below {n}")))
        }
        _ => Ok(()),
    }
}

fn fit(x: &AttributeData, c: usize, params: &SolverParams, metric: Metric) -> Result<CredalPartition> {
    params.validate()?;
    check_clusters(c, x.n())?;
    let focal = params.focal.build(c)?;
    check_init(params, x.n(), c, x.p(), focal.len())?;
    let upd = MassUpdate::new(&focal, params.alpha, params.beta, params.delta * params.delta);
    let best = best_of_trials(params.effective_trials(), params.seed, |seed| {
        run_trial(x, &focal, &upd, params, metric, seed)
    })?;
    let centers = best.state.rows().into_iter().map(|r| r.to_vec()).collect();
    finish(best, focal, metric.name(), params.echo_with(c, []), params.seed)
        .map(|p| p.with_prototypes(Prototypes::Centers(centers)))
}

/// Evidential c-means on attribute data.
pub fn ecm_fit(x: &AttributeData, c: usize, params: &SolverParams) -> Result<CredalPartition> {
    fit(x, c, params, Metric::Ecm)
}

/// Credal c-means: ECM with meta-cluster distances that also account for the
/// spread of the member clusters.
pub fn ccm_fit(x: &AttributeData, c: usize, params: &SolverParams) -> Result<CredalPartition> {
    fit(x, c, params, Metric::Ccm { gamma: params.gamma })
}

fn criterion(
    x: &AttributeData,
    focal: &FocalMatrix,
    v: &Array2<f64>,
    mass: &Array2<f64>,
    params: &SolverParams,
    metric: Metric,
) -> f64 {
    let upd = MassUpdate::new(focal, params.alpha, params.beta, params.delta * params.delta);
    upd.objective(metric.distances(x, v, focal).view(), mass)
}

/// ECM objective at singleton prototypes `v` and masses `mass`.
pub fn ecm_criterion(
    x: &AttributeData,
    focal: &FocalMatrix,
    v: &Array2<f64>,
    mass: &Array2<f64>,
    params: &SolverParams,
) -> f64 {
    criterion(x, focal, v, mass, params, Metric::Ecm)
}

/// CCM objective at singleton prototypes `v` and masses `mass`.
pub fn ccm_criterion(
    x: &AttributeData,
    focal: &FocalMatrix,
    v: &Array2<f64>,
    mass: &Array2<f64>,
    params: &SolverParams,
) -> f64 {
    criterion(x, focal, v, mass, params, Metric::Ccm { gamma: params.gamma })
}
