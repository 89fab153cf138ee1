//! Imprecision and agreement measures for credal partitions.

use ndarray::{Array2, ArrayView1};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::focal::FocalMatrix;
use crate::partition::CredalPartition;

/// Average nonspecificity in bits: `m(A)·log2|A|` per focal set, with the
/// empty set charged `log2 c`.
pub fn nonspecificity_bits(partition: &CredalPartition) -> f64 {
    let focal = partition.focal();
    let log_c = (focal.c() as f64).log2();
    let weights: Vec<f64> =
        focal.sets().iter().map(|s| if s.is_empty() { log_c } else { (s.cardinality() as f64).log2() }).collect();
    let n = partition.n();
    if n == 0 {
        return 0.0;
    }
    let total: f64 =
        partition.mass().rows().into_iter().map(|row| row.iter().zip(&weights).map(|(m, w)| m * w).sum::<f64>()).sum();
    total / n as f64
}

/// Nonspecificity scaled to `[0, 1]` by `log2 c`; zero for a one-cluster frame.
pub fn nonspecificity(partition: &CredalPartition) -> f64 {
    let c = partition.c();
    if c < 2 {
        return 0.0;
    }
    nonspecificity_bits(partition) / (c as f64).log2()
}

/// Relational representation of a credal partition.
#[derive(Debug, Clone, PartialEq)]
pub struct PairwiseMass {
    /// Mass of "at least one object is an outlier".
    pub me: Array2<f64>,
    /// Mass of "both objects are in the same single cluster".
    pub m1: Array2<f64>,
    /// Mass of "the objects are in disjoint groups of clusters".
    pub m0: Array2<f64>,
}

impl PairwiseMass {
    pub fn ignorance(&self) -> Array2<f64> {
        let mut ign = Array2::ones(self.me.raw_dim());
        ign -= &self.me;
        ign -= &self.m1;
        ign -= &self.m0;
        ign
    }
}

/// Precomputed focal-pair structure shared by every object pair.
struct PairTable {
    singletons: Vec<usize>,
    disjoint: Vec<(usize, usize)>,
}

impl PairTable {
    fn new(focal: &FocalMatrix) -> Self {
        let singletons = (0..focal.c()).map(|k| focal.singleton_index(k)).collect();
        let mut disjoint = Vec::new();
        for (a, sa) in focal.nonempty() {
            for (b, sb) in focal.nonempty() {
                if !sa.intersects(sb) {
                    disjoint.push((a, b));
                }
            }
        }
        Self { singletons, disjoint }
    }

    /// `(M_e, M_1, M_0)` for one pair of mass rows.
    fn pair(&self, mi: ArrayView1<'_, f64>, mj: ArrayView1<'_, f64>) -> (f64, f64, f64) {
        let me = mi[0] + mj[0] - mi[0] * mj[0];
        let m1 = self.singletons.iter().map(|&s| mi[s] * mj[s]).sum();
        let m0 = self.disjoint.iter().map(|&(a, b)| mi[a] * mj[b]).sum();
        (me, m1, m0)
    }
}

pub fn pairwise_mass(partition: &CredalPartition) -> PairwiseMass {
    let table = PairTable::new(partition.focal());
    let n = partition.n();
    let mut out = PairwiseMass { me: Array2::zeros((n, n)), m1: Array2::zeros((n, n)), m0: Array2::zeros((n, n)) };
    for i in 0..n {
        for j in i..n {
            let (me, m1, m0) = table.pair(partition.mass_row(i), partition.mass_row(j));
            for (mat, v) in [(&mut out.me, me), (&mut out.m1, m1), (&mut out.m0, m0)] {
                mat[[i, j]] = v;
                mat[[j, i]] = v;
            }
        }
    }
    out
}

/// How a pair's "same cluster" degree is read off its relational masses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RiType {
    /// `M_1`: committed support for "same cluster".
    #[default]
    Belief,
    /// `1 - M_0 - M_e`: absence of support against "same cluster".
    Plausibility,
}

impl std::str::FromStr for RiType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "belief" | "bel" => Ok(RiType::Belief),
            "plausibility" | "pl" => Ok(RiType::Plausibility),
            other => Err(Error::param("type", format!("unknown type `{other}` (expected belief or plausibility)"))),
        }
    }
}

/// Rand index between two credal partitions of the same objects. The frames
/// may differ in size.
pub fn credal_ri(p1: &CredalPartition, p2: &CredalPartition, kind: RiType) -> Result<f64> {
    let n = p1.n();
    if p2.n() != n {
        return Err(Error::ShapeMismatch(format!("partitions cover {} and {} objects", n, p2.n())));
    }
    if n < 2 {
        return Err(Error::ShapeMismatch("the Rand index needs at least two objects".into()));
    }
    let t1 = PairTable::new(p1.focal());
    let t2 = PairTable::new(p2.focal());
    let degree = |(me, m1, m0): (f64, f64, f64)| match kind {
        RiType::Belief => m1,
        RiType::Plausibility => 1.0 - m0 - me,
    };
    let mut agreement = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            let q1 = degree(t1.pair(p1.mass_row(i), p1.mass_row(j)));
            let q2 = degree(t2.pair(p2.mass_row(i), p2.mass_row(j)));
            agreement += 1.0 - (q1 - q2).abs();
        }
    }
    Ok(agreement * 2.0 / (n as f64 * (n as f64 - 1.0)))
}
