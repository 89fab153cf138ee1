//! Machinery shared by every alternating-optimization solver.

use nalgebra::DMatrix;
use ndarray::{Array2, ArrayView2};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::focal::{FocalMatrix, FocalSpec};
use crate::partition::{CredalPartition, Diagnostics};

/// Distances below this count as zero in the mass update.
pub const ZERO_DISTANCE: f64 = 1e-12;

/// Initial state supplied by the caller instead of seeded sampling.
#[derive(Debug, Clone, PartialEq)]
pub enum Init {
    /// `c × p` singleton prototypes (attribute solvers).
    Prototypes(Array2<f64>),
    /// `n × f` initial masses (RECM).
    Mass(Array2<f64>),
    /// `c` object indices (medoid solvers).
    Medoids(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolverParams {
    /// Cardinality exponent.
    pub alpha: f64,
    /// Mass exponent, must exceed 1.
    pub beta: f64,
    /// Distance to the empty set.
    pub delta: f64,
    /// Meta-cluster weight of the credal c-means distance.
    pub gamma: f64,
    pub ntrials: usize,
    pub maxit: usize,
    /// Stop once no mass moves by more than this between sweeps.
    pub epsi: f64,
    pub seed: u64,
    pub focal: FocalSpec,
    #[serde(skip)]
    pub init: Option<Init>,
}

impl Default for SolverParams {
    fn default() -> Self {
        Self {
            alpha: 1.0,
            beta: 2.0,
            delta: 10.0,
            gamma: 1.0,
            ntrials: 1,
            maxit: 500,
            epsi: 1e-3,
            seed: 0,
            focal: FocalSpec::default(),
            init: None,
        }
    }
}

impl SolverParams {
    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64| v.is_finite() && v > 0.0;
        if !(self.alpha.is_finite() && self.alpha >= 0.0) {
            return Err(Error::param("alpha", format!("must be finite and >= 0, got {}", self.alpha)));
        }
        if !(self.beta.is_finite() && self.beta > 1.0) {
            return Err(Error::param("beta", format!("must be > 1, got {}", self.beta)));
        }
        if !positive(self.delta) {
            return Err(Error::param("delta", format!("must be > 0, got {}", self.delta)));
        }
        if !(self.gamma.is_finite() && self.gamma >= 0.0) {
            return Err(Error::param("gamma", format!("must be finite and >= 0, got {}", self.gamma)));
        }
        if self.ntrials == 0 {
            return Err(Error::param("ntrials", "must be at least 1"));
        }
        if self.maxit == 0 {
            return Err(Error::param("maxit", "must be at least 1"));
        }
        if !positive(self.epsi) {
            return Err(Error::param("epsi", format!("must be > 0, got {}", self.epsi)));
        }
        Ok(())
    }

    /// Number of trials actually run: an explicit init fixes a single start.
    pub(crate) fn effective_trials(&self) -> usize {
        if self.init.is_some() {
            1
        } else {
            self.ntrials
        }
    }

    /// Parameters as recorded in a partition, with `c` and solver-specific extras.
    pub(crate) fn echo_with<'a>(
        &self,
        c: usize,
        extra: impl IntoIterator<Item = (&'a str, serde_json::Value)>,
    ) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("parameters serialize");
        let map = v.as_object_mut().expect("parameters are an object");
        map.insert("c".into(), c.into());
        map.insert("init".into(), self.init.is_some().into());
        for (k, val) in extra {
            map.insert(k.into(), val);
        }
        v
    }
}

pub(crate) fn check_clusters(c: usize, n: usize) -> Result<()> {
    if c == 0 {
        return Err(Error::param("c", "at least one cluster is required"));
    }
    if c > n {
        return Err(Error::TooManyClusters { c, n });
    }
    Ok(())
}

/// Closed-form mass update shared by the c-means family. Distance arrays are
/// `n × f` with column 0 (the empty set) ignored.
pub(crate) struct MassUpdate {
    /// `|A_j|^α`, entry 0 unused.
    card_alpha: Vec<f64>,
    empty_cost: f64,
    beta: f64,
}

impl MassUpdate {
    pub fn new(focal: &FocalMatrix, alpha: f64, beta: f64, empty_cost: f64) -> Self {
        let card_alpha = focal
            .sets()
            .iter()
            .map(|s| if s.is_empty() { 0.0 } else { (s.cardinality() as f64).powf(alpha) })
            .collect();
        Self { card_alpha, empty_cost, beta }
    }

    /// `m_ij ∝ (|A_j|^α d_ij)^{-1/(β-1)}`, normalized together with the
    /// empty-set term. Objects at zero distance from some focal sets share
    /// their mass uniformly among those sets.
    pub fn update(&self, dist: ArrayView2<'_, f64>, mass: &mut Array2<f64>) {
        let f = self.card_alpha.len();
        let exponent = -1.0 / (self.beta - 1.0);
        let empty_log = exponent * self.empty_cost.ln();
        let mut logs = vec![0.0; f];
        for (d, mut m) in dist.rows().into_iter().zip(mass.rows_mut()) {
            let zeros = (1..f).filter(|&j| d[j] < ZERO_DISTANCE).count();
            if zeros > 0 {
                let share = 1.0 / zeros as f64;
                m[0] = 0.0;
                for j in 1..f {
                    m[j] = if d[j] < ZERO_DISTANCE { share } else { 0.0 };
                }
                continue;
            }
            logs[0] = empty_log;
            for j in 1..f {
                logs[j] = exponent * (self.card_alpha[j] * d[j]).ln();
            }
            let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let mut total = 0.0;
            for j in 0..f {
                let v = (logs[j] - top).exp();
                m[j] = v;
                total += v;
            }
            m.mapv_inplace(|v| v / total);
        }
    }

    pub fn objective(&self, dist: ArrayView2<'_, f64>, mass: &Array2<f64>) -> f64 {
        let f = self.card_alpha.len();
        let mut fit = 0.0;
        let mut empty = 0.0;
        for (d, m) in dist.rows().into_iter().zip(mass.rows()) {
            for j in 1..f {
                if m[j] > 0.0 {
                    fit += self.card_alpha[j] * m[j].powf(self.beta) * d[j];
                }
            }
            if m[0] > 0.0 {
                empty += m[0].powf(self.beta);
            }
        }
        fit + self.empty_cost * empty
    }
}

pub(crate) fn max_abs_change(a: &Array2<f64>, b: &Array2<f64>) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// `c` object indices drawn without replacement from a seeded shuffle,
/// skipping objects that duplicate one already drawn while enough distinct
/// objects remain.
pub(crate) fn sample_distinct(n: usize, c: usize, seed: u64, same: impl Fn(usize, usize) -> bool) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let mut picked: Vec<usize> = Vec::with_capacity(c);
    let mut skipped = Vec::new();
    for &i in &order {
        if picked.len() == c {
            break;
        }
        if picked.iter().any(|&p| same(p, i)) {
            skipped.push(i);
        } else {
            picked.push(i);
        }
    }
    picked.extend(skipped.into_iter().take(c - picked.len()));
    picked
}

/// Output of one trial of an alternating solver.
#[derive(Debug, Clone)]
pub(crate) struct Trial<S> {
    pub mass: Array2<f64>,
    pub criterion: f64,
    pub history: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    pub state: S,
}

impl<S> Trial<S> {
    pub fn map<T>(self, f: impl FnOnce(S) -> T) -> Trial<T> {
        Trial {
            mass: self.mass,
            criterion: self.criterion,
            history: self.history,
            iterations: self.iterations,
            converged: self.converged,
            state: f(self.state),
        }
    }
}

/// Runs trial `t` with seed `seed + t` (possibly in parallel) and keeps the
/// lowest criterion, ties going to the earliest trial. Any failing trial
/// fails the whole fit, reporting the earliest failure.
pub(crate) fn best_of_trials<S: Send>(
    ntrials: usize,
    seed: u64,
    run: impl Fn(u64) -> Result<Trial<S>> + Sync,
) -> Result<Trial<S>> {
    let results: Vec<Result<Trial<S>>> =
        (0..ntrials as u64).into_par_iter().map(|t| run(seed.wrapping_add(t))).collect();
    let mut best: Option<Trial<S>> = None;
    for r in results {
        let trial = r?;
        if best.as_ref().is_none_or(|b| trial.criterion < b.criterion) {
            best = Some(trial);
        }
    }
    Ok(best.expect("at least one trial"))
}

/// The prototype block of an alternating solver.
pub(crate) trait Prototype {
    /// `n × f` distances to the focal sets; column 0 is ignored.
    fn distances(&mut self) -> Array2<f64>;
    /// Minimizes the criterion over this block with the masses fixed.
    fn refit(&mut self, mass: &Array2<f64>, iteration: usize) -> Result<()>;
}

/// Alternates exact mass and prototype updates until no mass moves by more
/// than `epsi` or `maxit` sweeps have run, then refreshes the masses once
/// more so they are optimal for the returned prototypes.
pub(crate) fn alternate<P: Prototype>(
    mut proto: P,
    upd: &MassUpdate,
    params: &SolverParams,
    method: &str,
    seed: u64,
) -> Result<Trial<P>> {
    let mut dist = proto.distances();
    let mut mass = Array2::zeros(dist.raw_dim());
    let mut history = Vec::new();
    let mut converged = false;
    let mut iterations = 0;
    for it in 1..=params.maxit {
        iterations = it;
        let mut next = Array2::zeros(mass.raw_dim());
        upd.update(dist.view(), &mut next);
        let change = if it == 1 { f64::INFINITY } else { max_abs_change(&mass, &next) };
        proto.refit(&next, it)?;
        dist = proto.distances();
        mass = next;
        let j = upd.objective(dist.view(), &mass);
        log::debug!("{method} seed {seed} iteration {it}: J = {j}");
        history.push(j);
        if change < params.epsi {
            converged = true;
            break;
        }
    }
    upd.update(dist.view(), &mut mass);
    let criterion = upd.objective(dist.view(), &mass);
    history.push(criterion);
    Ok(Trial { mass, criterion, history, iterations, converged, state: proto })
}

/// Wraps the retained trial into a partition.
pub(crate) fn finish<S>(
    trial: Trial<S>,
    focal: FocalMatrix,
    method: &str,
    params: serde_json::Value,
    seed: u64,
) -> Result<CredalPartition> {
    let diagnostics = Diagnostics {
        iterations: trial.iterations,
        converged: trial.converged,
        clamped_distances: 0,
        history: trial.history,
    };
    Ok(CredalPartition::new(trial.mass, focal, method)?
        .with_criterion(trial.criterion)
        .with_params(params)
        .with_seed(seed)
        .with_diagnostics(diagnostics))
}

/// Solves `h · v = b` for the singleton prototypes, refusing numerically
/// singular systems.
pub(crate) fn solve_prototypes(h: &Array2<f64>, b: &Array2<f64>, iteration: usize) -> Result<Array2<f64>> {
    let c = h.nrows();
    let q = b.ncols();
    let hm = DMatrix::from_fn(c, c, |r, k| h[[r, k]]);
    let bm = DMatrix::from_fn(c, q, |r, k| b[[r, k]]);
    let sv = hm.clone().singular_values();
    let max = sv.max();
    let min = sv.min();
    let condition = if min > 0.0 { max / min } else { f64::INFINITY };
    if !condition.is_finite() || condition > 1e14 {
        return Err(Error::SingularSystem { iteration, condition });
    }
    let sol = hm.lu().solve(&bm).ok_or(Error::SingularSystem { iteration, condition })?;
    Ok(Array2::from_shape_fn((c, q), |(r, k)| sol[(r, k)]))
}

/// Picks one distinct medoid per cluster minimizing `Σ_k cost[k][medoid_k]`.
///
/// Independent per-cluster minima (lowest index on ties) are used when they
/// are already distinct; otherwise the assignment problem is solved exactly.
/// The current medoids are kept if the candidate is not at least as good.
pub(crate) fn assign_medoids(cost: &Array2<f64>, current: &[usize]) -> Vec<usize> {
    let c = cost.nrows();
    let total = |m: &[usize]| -> f64 { m.iter().enumerate().map(|(k, &l)| cost[[k, l]]).sum() };
    let independent: Vec<usize> = (0..c)
        .map(|k| {
            let row = cost.row(k);
            let mut best = 0;
            for (l, &v) in row.iter().enumerate() {
                if v < row[best] {
                    best = l;
                }
            }
            best
        })
        .collect();
    let mut distinct = independent.clone();
    distinct.sort_unstable();
    distinct.dedup();
    let candidate = if distinct.len() == c { independent } else { hungarian(cost) };
    if current.len() == c && total(&candidate) > total(current) {
        current.to_vec()
    } else {
        candidate
    }
}

/// Minimum-cost assignment of `c` rows to distinct columns of a `c × n`
/// matrix (`c ≤ n`), shortest augmenting paths with potentials.
fn hungarian(cost: &Array2<f64>) -> Vec<usize> {
    let (rows, cols) = cost.dim();
    debug_assert!(rows <= cols);
    let inf = f64::INFINITY;
    // 1-based arrays; index 0 is the virtual root.
    let mut u = vec![0.0; rows + 1];
    let mut v = vec![0.0; cols + 1];
    let mut owner = vec![0usize; cols + 1];
    let mut way = vec![0usize; cols + 1];
    for r in 1..=rows {
        owner[0] = r;
        let mut j0 = 0;
        let mut minv = vec![inf; cols + 1];
        let mut used = vec![false; cols + 1];
        loop {
            used[j0] = true;
            let i0 = owner[j0];
            let mut delta = inf;
            let mut j1 = 0;
            for j in 1..=cols {
                if !used[j] {
                    let cur = cost[[i0 - 1, j - 1]] - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=cols {
                if used[j] {
                    u[owner[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if owner[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            owner[j0] = owner[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut assignment = vec![0; rows];
    for j in 1..=cols {
        if owner[j] != 0 {
            assignment[owner[j] - 1] = j - 1;
        }
    }
    assignment
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::focal::{make_focal_matrix, FocalKind};
    use ndarray::array;

    #[test]
    fn default_params_validate() {
        SolverParams::default().validate().unwrap();
        let bad = SolverParams { beta: 1.0, ..SolverParams::default() };
        assert!(bad.validate().is_err());
        let bad = SolverParams { delta: 0.0, ..SolverParams::default() };
        assert!(bad.validate().is_err());
        let bad = SolverParams { ntrials: 0, ..SolverParams::default() };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn mass_update_matches_closed_form() {
        let focal = make_focal_matrix(2, FocalKind::Simple, None, true).unwrap();
        let upd = MassUpdate::new(&focal, 1.0, 2.0, 4.0);
        let dist = array![[0.0, 1.0, 4.0, 2.0]];
        let mut m = Array2::zeros((1, 4));
        upd.update(dist.view(), &mut m);
        // weights (|A| d)^-1 = 1, 1/4, 1/4 and 1/δ² = 1/4
        let t = [0.25, 1.0, 0.25, 0.25];
        let s: f64 = t.iter().sum();
        for j in 0..4 {
            assert!((m[[0, j]] - t[j] / s).abs() < 1e-15);
        }
    }

    #[test]
    fn zero_distance_mass_is_shared() {
        let focal = make_focal_matrix(2, FocalKind::Simple, None, true).unwrap();
        let upd = MassUpdate::new(&focal, 1.0, 2.0, 100.0);
        let mut m = Array2::zeros((1, 4));
        upd.update(array![[0.0, 0.0, 3.0, 0.0]].view(), &mut m);
        assert_eq!(m.row(0).to_vec(), vec![0.0, 0.5, 0.0, 0.5]);
    }

    #[test]
    fn extreme_exponents_stay_finite() {
        let focal = make_focal_matrix(2, FocalKind::Simple, None, true).unwrap();
        let upd = MassUpdate::new(&focal, 1.0, 1.001, 1e6);
        let mut m = Array2::zeros((1, 4));
        upd.update(array![[0.0, 1e-10, 1e3, 5.0]].view(), &mut m);
        assert!(m.iter().all(|v| v.is_finite()));
        assert!((m.sum() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sampling_is_deterministic_and_distinct() {
        let a = sample_distinct(10, 4, 3, |x, y| x == y);
        assert_eq!(a, sample_distinct(10, 4, 3, |x, y| x == y));
        let mut s = a.clone();
        s.sort();
        s.dedup();
        assert_eq!(s.len(), 4);
    }

    #[test]
    fn sampling_avoids_duplicate_values() {
        // objects 0..5 share one value, 5..10 another
        let group = |i: usize| i / 5;
        for seed in 0..20 {
            let s = sample_distinct(10, 2, seed, |a, b| group(a) == group(b));
            assert_ne!(group(s[0]), group(s[1]));
        }
    }

    #[test]
    fn medoid_assignment_prefers_independent_minima() {
        let cost = array![[3.0, 1.0, 2.0], [0.5, 4.0, 1.0]];
        assert_eq!(assign_medoids(&cost, &[0, 1]), vec![1, 0]);
    }

    #[test]
    fn medoid_assignment_resolves_conflicts_exactly() {
        let cost = array![[1.0, 2.0, 9.0, 9.0], [1.0, 5.0, 3.0, 9.0], [1.0, 9.0, 9.0, 4.0]];
        let got = assign_medoids(&cost, &[1, 2, 3]);
        let mut best = f64::INFINITY;
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    if a != b && b != c && a != c {
                        best = best.min(cost[[0, a]] + cost[[1, b]] + cost[[2, c]]);
                    }
                }
            }
        }
        let total: f64 = got.iter().enumerate().map(|(k, &l)| cost[[k, l]]).sum();
        assert_eq!(total, best);
    }

    #[test]
    fn singular_systems_are_reported() {
        let h = array![[1.0, 1.0], [1.0, 1.0]];
        let b = array![[1.0], [2.0]];
        assert!(matches!(solve_prototypes(&h, &b, 4), Err(Error::SingularSystem { iteration: 4, .. })));
        let h = array![[2.0, 0.0], [0.0, 4.0]];
        let v = solve_prototypes(&h, &b, 1).unwrap();
        assert!((v[[0, 0]] - 0.5).abs() < 1e-15 && (v[[1, 0]] - 0.5).abs() < 1e-15);
    }
}
