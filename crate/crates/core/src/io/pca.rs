use nalgebra::{DMatrix, SymmetricEigen};
use ndarray::Array2;

use crate::data::AttributeData;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Projection {
    /// `n × dims` coordinates.
    pub scores: Array2<f64>,
    /// `p × dims` unit principal axes.
    pub axes: Array2<f64>,
    /// Share of the total variance along each axis.
    pub explained: Vec<f64>,
}

/// Projects the centered (optionally standardized) data onto its leading
/// principal axes. Each axis is oriented so its largest-magnitude loading is
/// positive.
pub fn pca_project(x: &AttributeData, dims: usize, normalize: bool) -> Result<Projection> {
    let (n, p) = (x.n(), x.p());
    if n < 2 {
        return Err(Error::InvalidData("PCA needs at least two objects".into()));
    }
    if dims == 0 || dims > p {
        return Err(Error::param("dims", format!("must be in 1..={p}, got {dims}")));
    }
    let mut z = x.x().clone();
    for (q, mut col) in z.columns_mut().into_iter().enumerate() {
        let mean = col.sum() / n as f64;
        col.mapv_inplace(|v| v - mean);
        if normalize {
            let sd = (col.iter().map(|v| v * v).sum::<f64>() / (n - 1) as f64).sqrt();
            if sd == 0.0 {
                return Err(Error::InvalidData(format!(
                    "column `{}` has zero variance and cannot be standardized",
                    x.columns()[q]
                )));
            }
            col.mapv_inplace(|v| v / sd);
        }
    }
    let cov = z.t().dot(&z) / (n - 1) as f64;
    let eig = SymmetricEigen::new(DMatrix::from_fn(p, p, |a, b| cov[[a, b]]));
    let mut order: Vec<usize> = (0..p).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]).then(a.cmp(&b)));
    let total: f64 = eig.eigenvalues.iter().map(|v| v.max(0.0)).sum();
    let mut axes = Array2::zeros((p, dims));
    let mut explained = Vec::with_capacity(dims);
    for (k, &e) in order.iter().take(dims).enumerate() {
        let v = eig.eigenvectors.column(e);
        let mut lead = 0;
        for q in 1..p {
            if v[q].abs() > v[lead].abs() {
                lead = q;
            }
        }
        let sign = if v[lead] < 0.0 { -1.0 } else { 1.0 };
        for q in 0..p {
            axes[[q, k]] = sign * v[q];
        }
        let lambda = eig.eigenvalues[e].max(0.0);
        explained.push(if total > 0.0 { lambda / total } else { 0.0 });
    }
    Ok(Projection { scores: z.dot(&axes), axes, explained })
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn projection_of_a_line() {
        let x = AttributeData::new(array![[0.0, 0.0], [1.0, 1.0], [2.0, 2.0]]).unwrap();
        let p = pca_project(&x, 1, false).unwrap();
        assert!((p.explained[0] - 1.0).abs() < 1e-12);
        let s = 2f64.sqrt();
        for (got, want) in p.scores.column(0).iter().zip([-s, 0.0, s]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_variance_column_cannot_be_standardized() {
        let x = AttributeData::new(array![[1.0, 5.0], [2.0, 5.0], [3.0, 5.0]]).unwrap();
        assert!(pca_project(&x, 2, false).is_ok());
        let err = pca_project(&x, 2, true).unwrap_err().to_string();
        assert!(err.contains("x2"), "{err}");
    }

    #[test]
    fn dims_are_checked() {
        let x = AttributeData::new(array![[1.0, 5.0], [2.0, 6.0]]).unwrap();
        assert!(pca_project(&x, 3, false).is_err());
        assert!(pca_project(&x, 0, false).is_err());
    }
}
