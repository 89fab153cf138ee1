use ndarray::{Array2, ArrayView1};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::focal::FocalMatrix;

/// Rows farther than this from summing to one are rejected.
pub const ROW_SUM_TOLERANCE: f64 = 1e-6;

/// Rows closer than this to summing to one are kept as given.
const RENORMALIZE_ABOVE: f64 = 1e-12;

/// Cluster representatives returned by a solver.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Prototypes {
    /// `c × p` singleton centers.
    Centers(Vec<Vec<f64>>),
    /// `c × n` object weights defining implicit centers (relational data).
    Weights(Vec<Vec<f64>>),
    /// One object index per cluster.
    Medoids(Vec<usize>),
    /// One medoid list per view.
    ViewMedoids(Vec<Vec<usize>>),
    /// `profiles[k][q][t]`: weight of category `t` of attribute `q` in cluster `k`.
    Profiles(Vec<Vec<Vec<f64>>>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightVariant {
    /// One weight vector shared by every focal set.
    Rwg,
    /// One weight vector per nonempty focal set.
    Rwl,
}

impl std::str::FromStr for WeightVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "rwg" => Ok(WeightVariant::Rwg),
            "rwl" => Ok(WeightVariant::Rwl),
            other => Err(Error::param("variant", format!("unknown variant `{other}` (expected rwg or rwl)"))),
        }
    }
}

/// View weights of a multi-view partition. Each row lies on the simplex.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ViewWeights {
    pub variant: WeightVariant,
    pub s: f64,
    /// `1 × p` for RWG, one row per nonempty focal set for RWL.
    pub lambda: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub iterations: usize,
    pub converged: bool,
    /// Implicit squared distances below `-1e-9` clamped to zero, summed over
    /// every sweep of the retained trial.
    #[serde(default, skip_serializing_if = "is_zero")]
    pub clamped_distances: usize,
    /// Criterion after every sweep of the retained trial.
    #[serde(skip)]
    pub history: Vec<f64>,
}

fn is_zero(v: &usize) -> bool {
    *v == 0
}

/// A credal partition: one mass function per object over the sets of a
/// [`FocalMatrix`]. Column 0 of `mass` is always the empty set.
#[derive(Debug, Clone, PartialEq)]
pub struct CredalPartition {
    mass: Array2<f64>,
    focal: FocalMatrix,
    method: String,
    criterion: f64,
    params: serde_json::Value,
    prototypes: Option<Prototypes>,
    view_weights: Option<ViewWeights>,
    seed: Option<u64>,
    diagnostics: Diagnostics,
}

impl CredalPartition {
    /// Validates `mass` against `focal`. Rows within [`ROW_SUM_TOLERANCE`] of
    /// one are renormalized unless already within `1e-12`, and round-off
    /// negatives above `-1e-12` are zeroed.
    pub fn new(mut mass: Array2<f64>, focal: FocalMatrix, method: impl Into<String>) -> Result<Self> {
        if mass.ncols() != focal.len() {
            return Err(Error::ShapeMismatch(format!(
                "mass has {} columns but there are {} focal sets",
                mass.ncols(),
                focal.len()
            )));
        }
        for (i, mut row) in mass.rows_mut().into_iter().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                if !v.is_finite() {
                    return Err(Error::NonFinite { row: i, col: j });
                }
                if *v < 0.0 {
                    if *v < -1e-12 {
                        return Err(Error::NegativeMass { row: i, col: j, value: *v });
                    }
                    *v = 0.0;
                }
            }
            let sum: f64 = row.sum();
            if (sum - 1.0).abs() > ROW_SUM_TOLERANCE {
                return Err(Error::RowSum { row: i, sum });
            }
            if (sum - 1.0).abs() > RENORMALIZE_ABOVE {
                row.mapv_inplace(|v| v / sum);
            }
        }
        Ok(Self {
            mass,
            focal,
            method: method.into(),
            criterion: f64::NAN,
            params: serde_json::Value::Null,
            prototypes: None,
            view_weights: None,
            seed: None,
            diagnostics: Diagnostics::default(),
        })
    }

    pub fn with_criterion(mut self, criterion: f64) -> Self {
        self.criterion = criterion;
        self
    }

    pub fn with_params(mut self, params: serde_json::Value) -> Self {
        self.params = params;
        self
    }

    pub fn with_prototypes(mut self, prototypes: Prototypes) -> Self {
        self.prototypes = Some(prototypes);
        self
    }

    pub fn with_view_weights(mut self, weights: ViewWeights) -> Self {
        self.view_weights = Some(weights);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn with_diagnostics(mut self, diagnostics: Diagnostics) -> Self {
        self.diagnostics = diagnostics;
        self
    }

    pub fn mass(&self) -> &Array2<f64> {
        &self.mass
    }

    pub fn mass_row(&self, i: usize) -> ArrayView1<'_, f64> {
        self.mass.row(i)
    }

    pub fn focal(&self) -> &FocalMatrix {
        &self.focal
    }

    pub fn n(&self) -> usize {
        self.mass.nrows()
    }

    pub fn c(&self) -> usize {
        self.focal.c()
    }

    pub fn method(&self) -> &str {
        &self.method
    }

    /// Final objective value; NaN when the partition was not produced by a solver.
    pub fn criterion(&self) -> f64 {
        self.criterion
    }

    pub fn params(&self) -> &serde_json::Value {
        &self.params
    }

    pub fn prototypes(&self) -> Option<&Prototypes> {
        self.prototypes.as_ref()
    }

    pub fn view_weights(&self) -> Option<&ViewWeights> {
        self.view_weights.as_ref()
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn diagnostics(&self) -> &Diagnostics {
        &self.diagnostics
    }

    /// Index of the focal set with maximum mass for object `i`, ties to the
    /// lowest row.
    pub fn argmax_focal(&self, i: usize) -> usize {
        argmax(self.mass.row(i).iter().copied())
    }
}

/// First index of the maximum.
pub(crate) fn argmax(values: impl Iterator<Item = f64>) -> usize {
    let mut best = 0;
    let mut best_value = f64::NEG_INFINITY;
    for (i, v) in values.enumerate() {
        if v > best_value {
            best = i;
            best_value = v;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::focal::{make_focal_matrix, FocalKind};
    use ndarray::array;

    fn simple2() -> FocalMatrix {
        make_focal_matrix(2, FocalKind::Simple, None, true).unwrap()
    }

    #[test]
    fn renormalizes_small_drift() {
        let p = CredalPartition::new(array![[0.0, 0.5, 0.5 + 5e-7, 0.0]], simple2(), "test").unwrap();
        assert!((p.mass().row(0).sum() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_large_drift() {
        let err = CredalPartition::new(array![[0.0, 0.5, 0.6, 0.0]], simple2(), "test").unwrap_err();
        assert!(matches!(err, Error::RowSum { row: 0, .. }));
    }

    #[test]
    fn rejects_shape_mismatch() {
        assert!(matches!(CredalPartition::new(array![[0.5, 0.5]], simple2(), "test"), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn rejects_negative_and_nan() {
        assert!(CredalPartition::new(array![[-0.1, 0.6, 0.5, 0.0]], simple2(), "t").is_err());
        assert!(CredalPartition::new(array![[f64::NAN, 0.5, 0.5, 0.0]], simple2(), "t").is_err());
    }

    #[test]
    fn argmax_ties_to_lowest() {
        let p = CredalPartition::new(array![[0.0, 0.4, 0.4, 0.2]], simple2(), "t").unwrap();
        assert_eq!(p.argmax_focal(0), 1);
    }
}
