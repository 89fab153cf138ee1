//! Validated inputs for the solvers.

use ndarray::{Array2, ArrayView1};

use crate::error::{Error, Result};

/// Tolerance for symmetry and the zero diagonal of a dissimilarity matrix.
pub const SYMMETRY_TOLERANCE: f64 = 1e-9;

/// `n × p` numeric feature matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct AttributeData {
    x: Array2<f64>,
    columns: Vec<String>,
}

impl AttributeData {
    pub fn new(x: Array2<f64>) -> Result<Self> {
        if x.ncols() == 0 {
            return Err(Error::InvalidData("no feature columns".into()));
        }
        if let Some(((row, col), _)) = x.indexed_iter().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFinite { row, col });
        }
        let columns = (1..=x.ncols()).map(|k| format!("x{k}")).collect();
        Ok(Self { x, columns })
    }

    pub fn with_columns(mut self, columns: Vec<String>) -> Result<Self> {
        if columns.len() != self.p() {
            return Err(Error::ShapeMismatch(format!("{} column names for {} features", columns.len(), self.p())));
        }
        self.columns = columns;
        Ok(self)
    }

    pub fn x(&self) -> &Array2<f64> {
        &self.x
    }

    pub fn row(&self, i: usize) -> ArrayView1<'_, f64> {
        self.x.row(i)
    }

    pub fn n(&self) -> usize {
        self.x.nrows()
    }

    pub fn p(&self) -> usize {
        self.x.ncols()
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    /// Rows in the given order.
    pub fn select(&self, rows: &[usize]) -> Self {
        Self { x: self.x.select(ndarray::Axis(0), rows), columns: self.columns.clone() }
    }
}

/// `n × p` integer-coded categorical attributes.
#[derive(Debug, Clone, PartialEq)]
pub struct CategoricalData {
    codes: Array2<usize>,
    cardinalities: Vec<usize>,
    levels: Vec<Vec<String>>,
    columns: Vec<String>,
}

impl CategoricalData {
    pub fn new(codes: Array2<usize>, cardinalities: Vec<usize>) -> Result<Self> {
        if codes.ncols() == 0 {
            return Err(Error::InvalidData("no categorical attributes".into()));
        }
        if cardinalities.len() != codes.ncols() {
            return Err(Error::ShapeMismatch(format!(
                "{} cardinalities for {} attributes",
                cardinalities.len(),
                codes.ncols()
            )));
        }
        if let Some(q) = cardinalities.iter().position(|&k| k == 0) {
            return Err(Error::InvalidData(format!("attribute {q} has no categories")));
        }
        for ((i, q), &v) in codes.indexed_iter() {
            if v >= cardinalities[q] {
                return Err(Error::InvalidData(format!(
                    "code {v} at row {i}, attribute {q} exceeds cardinality {}",
                    cardinalities[q]
                )));
            }
        }
        let levels = cardinalities.iter().map(|&k| (0..k).map(|t| t.to_string()).collect()).collect();
        let columns = (1..=codes.ncols()).map(|k| format!("a{k}")).collect();
        Ok(Self { codes, cardinalities, levels, columns })
    }

    /// Attaches the original category names (`levels[q][t]`) and column names.
    pub fn with_names(mut self, columns: Vec<String>, levels: Vec<Vec<String>>) -> Result<Self> {
        if columns.len() != self.p()
            || levels.len() != self.p()
            || levels.iter().zip(&self.cardinalities).any(|(l, &k)| l.len() != k)
        {
            return Err(Error::ShapeMismatch("category names do not match the codes".into()));
        }
        self.columns = columns;
        self.levels = levels;
        Ok(self)
    }

    pub fn codes(&self) -> &Array2<usize> {
        &self.codes
    }

    pub fn cardinalities(&self) -> &[usize] {
        &self.cardinalities
    }

    pub fn levels(&self) -> &[Vec<String>] {
        &self.levels
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn n(&self) -> usize {
        self.codes.nrows()
    }

    pub fn p(&self) -> usize {
        self.codes.ncols()
    }
}

/// Symmetric, nonnegative `n × n` dissimilarities with a zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct DissimilarityMatrix {
    d: Array2<f64>,
}

impl DissimilarityMatrix {
    /// Validates `d`. Entries within [`SYMMETRY_TOLERANCE`] of symmetric are
    /// averaged and a near-zero diagonal is set to exactly zero.
    pub fn new(mut d: Array2<f64>) -> Result<Self> {
        let n = d.nrows();
        if d.ncols() != n {
            return Err(Error::InvalidDissimilarity(format!("matrix is {}×{}, not square", n, d.ncols())));
        }
        for ((row, col), v) in d.indexed_iter() {
            if !v.is_finite() {
                return Err(Error::NonFinite { row, col });
            }
            if *v < 0.0 {
                return Err(Error::InvalidDissimilarity(format!("negative entry {v} at ({row}, {col})")));
            }
        }
        for i in 0..n {
            if d[[i, i]].abs() > SYMMETRY_TOLERANCE {
                return Err(Error::InvalidDissimilarity(format!("nonzero diagonal {} at {i}", d[[i, i]])));
            }
            d[[i, i]] = 0.0;
            for j in i + 1..n {
                let (a, b) = (d[[i, j]], d[[j, i]]);
                if (a - b).abs() > SYMMETRY_TOLERANCE {
                    return Err(Error::InvalidDissimilarity(format!(
                        "asymmetric entries ({i}, {j}) = {a} and ({j}, {i}) = {b}"
                    )));
                }
                let m = 0.5 * (a + b);
                d[[i, j]] = m;
                d[[j, i]] = m;
            }
        }
        Ok(Self { d })
    }

    pub fn n(&self) -> usize {
        self.d.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.d[[i, j]]
    }

    pub fn as_array(&self) -> &Array2<f64> {
        &self.d
    }

    pub fn scaled(&self, s: f64) -> Result<Self> {
        if !(s.is_finite() && s > 0.0) {
            return Err(Error::param("scale", format!("must be > 0, got {s}")));
        }
        Ok(Self { d: self.d.mapv(|v| v * s) })
    }

    /// Rows and columns in the given order.
    pub fn select(&self, idx: &[usize]) -> Self {
        let d = Array2::from_shape_fn((idx.len(), idx.len()), |(a, b)| self.d[[idx[a], idx[b]]]);
        Self { d }
    }
}
