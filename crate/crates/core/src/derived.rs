//! Quantities derived from a credal partition: belief and plausibility
//! tables, pignistic probabilities, hard and rough partitions, and the
//! summary record.

use std::fmt;

use ndarray::{Array2, ArrayView1};

use crate::error::{Error, Result};
use crate::focal::FocalMatrix;
use crate::metrics;
use crate::partition::{argmax, CredalPartition, Diagnostics, Prototypes, ViewWeights};

/// Crisp assignment of every object to one cluster.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HardPartition {
    c: usize,
    labels: Vec<usize>,
}

impl HardPartition {
    /// `labels` are 0-based cluster indices.
    pub fn new(c: usize, labels: Vec<usize>) -> Result<Self> {
        if let Some((i, &k)) = labels.iter().enumerate().find(|(_, &k)| k >= c) {
            return Err(Error::param("labels", format!("object {i} has label {k}, frame has {c} clusters")));
        }
        Ok(Self { c, labels })
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn c(&self) -> usize {
        self.c
    }

    /// `n × c` indicator matrix `u_ik`.
    pub fn indicator(&self) -> Array2<u8> {
        let mut u = Array2::zeros((self.labels.len(), self.c));
        for (i, &k) in self.labels.iter().enumerate() {
            u[[i, k]] = 1;
        }
        u
    }

    /// The credal partition putting all mass of each object on its cluster.
    pub fn to_credal(&self, focal: &FocalMatrix) -> Result<CredalPartition> {
        if focal.c() != self.c {
            return Err(Error::ShapeMismatch(format!(
                "hard partition has {} clusters, focal matrix {}",
                self.c,
                focal.c()
            )));
        }
        let mut mass = Array2::zeros((self.labels.len(), focal.len()));
        for (i, &k) in self.labels.iter().enumerate() {
            mass[[i, focal.singleton_index(k)]] = 1.0;
        }
        CredalPartition::new(mass, focal.clone(), "hard")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Plausibility {
    /// `n × f`.
    pub pl: Array2<f64>,
    /// `n × c` plausibility of each singleton.
    pub contour: Array2<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DerivedOutputs {
    pub bel: Array2<f64>,
    pub pl: Array2<f64>,
    pub contour: Array2<f64>,
    /// Pignistic probabilities; all-zero for objects whose whole mass is on the empty set.
    pub betp: Array2<f64>,
    pub y_pl: HardPartition,
    pub y_bel: HardPartition,
    pub y_betp: HardPartition,
    pub argmax_focal: Vec<usize>,
    pub lower_approx: Vec<Vec<usize>>,
    pub upper_approx: Vec<Vec<usize>>,
    pub outliers: Vec<usize>,
    pub nonspecificity: f64,
}

/// `Bel_i(A_j)`: mass of the nonempty focal sets included in `A_j`.
pub fn belief(partition: &CredalPartition) -> Array2<f64> {
    let focal = partition.focal();
    let mass = partition.mass();
    let mut bel = Array2::zeros(mass.raw_dim());
    for (j, a) in focal.nonempty() {
        let included: Vec<usize> = focal.nonempty().filter(|(_, b)| b.is_subset_of(a)).map(|(l, _)| l).collect();
        for i in 0..mass.nrows() {
            bel[[i, j]] = included.iter().map(|&l| mass[[i, l]]).sum();
        }
    }
    bel
}

/// `Pl_i(A_j)`: mass of the focal sets meeting `A_j`, plus the contour
/// function on singletons.
pub fn plausibility(partition: &CredalPartition) -> Plausibility {
    let focal = partition.focal();
    let mass = partition.mass();
    let mut pl = Array2::zeros(mass.raw_dim());
    for (j, a) in focal.nonempty() {
        let meeting: Vec<usize> = focal.nonempty().filter(|(_, b)| b.intersects(a)).map(|(l, _)| l).collect();
        for i in 0..mass.nrows() {
            pl[[i, j]] = meeting.iter().map(|&l| mass[[i, l]]).sum();
        }
    }
    let c = focal.c();
    let mut contour = Array2::zeros((mass.nrows(), c));
    for k in 0..c {
        contour.column_mut(k).assign(&pl.column(focal.singleton_index(k)));
    }
    Plausibility { pl, contour }
}

fn pignistic_row(row: ArrayView1<'_, f64>, focal: &FocalMatrix, out: &mut [f64]) -> bool {
    let conflict = row[0];
    if 1.0 - conflict <= 1e-12 {
        out.iter_mut().for_each(|v| *v = 0.0);
        return false;
    }
    out.iter_mut().for_each(|v| *v = 0.0);
    for (j, set) in focal.nonempty() {
        let share = row[j] / set.cardinality() as f64;
        for k in set.members() {
            out[k] += share;
        }
    }
    let kept: f64 = row.iter().skip(1).sum();
    out.iter_mut().for_each(|v| *v /= kept);
    true
}

/// Pignistic transform, conditioned on the object not being an outlier.
pub fn pignistic(partition: &CredalPartition) -> Result<Array2<f64>> {
    let focal = partition.focal();
    let mut betp = Array2::zeros((partition.n(), focal.c()));
    for (i, mut out) in betp.rows_mut().into_iter().enumerate() {
        let slice = out.as_slice_mut().expect("standard layout");
        if !pignistic_row(partition.mass_row(i), focal, slice) {
            return Err(Error::UndefinedPignistic { object: i });
        }
    }
    Ok(betp)
}

/// Optional solver outputs attached by [`extract_mass`].
#[derive(Debug, Clone, Default)]
pub struct PartitionExtras {
    pub params: Option<serde_json::Value>,
    pub prototypes: Option<Prototypes>,
    pub view_weights: Option<ViewWeights>,
    pub seed: Option<u64>,
    pub diagnostics: Option<Diagnostics>,
}

/// Assembles a credal partition from a raw mass matrix and derives every
/// secondary output from it.
pub fn extract_mass(
    mass: Array2<f64>,
    focal: FocalMatrix,
    method: &str,
    criterion: f64,
    extras: PartitionExtras,
) -> Result<(CredalPartition, DerivedOutputs)> {
    let mut partition = CredalPartition::new(mass, focal, method)?.with_criterion(criterion);
    if let Some(params) = extras.params {
        partition = partition.with_params(params);
    }
    if let Some(prototypes) = extras.prototypes {
        partition = partition.with_prototypes(prototypes);
    }
    if let Some(weights) = extras.view_weights {
        partition = partition.with_view_weights(weights);
    }
    if let Some(seed) = extras.seed {
        partition = partition.with_seed(seed);
    }
    if let Some(diagnostics) = extras.diagnostics {
        partition = partition.with_diagnostics(diagnostics);
    }
    let derived = derive(&partition);
    Ok((partition, derived))
}

pub fn derive(partition: &CredalPartition) -> DerivedOutputs {
    let focal = partition.focal();
    let (n, c) = (partition.n(), focal.c());
    let bel = belief(partition);
    let Plausibility { pl, contour } = plausibility(partition);

    let mut betp = Array2::zeros((n, c));
    for (i, mut out) in betp.rows_mut().into_iter().enumerate() {
        pignistic_row(partition.mass_row(i), focal, out.as_slice_mut().expect("standard layout"));
    }

    let singleton_cols: Vec<usize> = (0..c).map(|k| focal.singleton_index(k)).collect();
    let y_pl = (0..n).map(|i| argmax(contour.row(i).iter().copied())).collect();
    let y_bel = (0..n).map(|i| argmax(singleton_cols.iter().map(|&j| bel[[i, j]]))).collect();
    let y_betp = (0..n).map(|i| argmax(betp.row(i).iter().copied())).collect();

    let argmax_focal: Vec<usize> = (0..n).map(|i| partition.argmax_focal(i)).collect();
    let mut lower_approx = vec![Vec::new(); c];
    let mut upper_approx = vec![Vec::new(); c];
    let mut outliers = Vec::new();
    for (i, &j) in argmax_focal.iter().enumerate() {
        let set = focal.set(j);
        if set.is_empty() {
            outliers.push(i);
            continue;
        }
        for k in set.members() {
            upper_approx[k].push(i);
        }
        if set.cardinality() == 1 {
            lower_approx[set.members().next().unwrap()].push(i);
        }
    }

    DerivedOutputs {
        bel,
        pl,
        contour,
        betp,
        y_pl: HardPartition { c, labels: y_pl },
        y_bel: HardPartition { c, labels: y_bel },
        y_betp: HardPartition { c, labels: y_betp },
        argmax_focal,
        lower_approx,
        upper_approx,
        outliers,
        nonspecificity: metrics::nonspecificity(partition),
    }
}

/// The basic facts about a credal partition, as printed by `summary`.
#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub c: usize,
    pub n: usize,
    pub method: String,
    pub focal: Vec<Vec<u8>>,
    pub criterion: f64,
    pub nonspecificity: f64,
    pub prototypes: Option<Prototypes>,
    pub outliers: usize,
}

pub fn summarize(partition: &CredalPartition) -> Summary {
    let outliers = (0..partition.n()).filter(|&i| partition.argmax_focal(i) == 0).count();
    Summary {
        c: partition.c(),
        n: partition.n(),
        method: partition.method().to_string(),
        focal: partition.focal().rows(),
        criterion: partition.criterion(),
        nonspecificity: metrics::nonspecificity(partition),
        prototypes: partition.prototypes().cloned(),
        outliers,
    }
}

fn write_matrix<T: fmt::Display>(f: &mut fmt::Formatter<'_>, rows: &[Vec<T>]) -> fmt::Result {
    for (r, row) in rows.iter().enumerate() {
        let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
        let open = if r == 0 { "[[" } else { " [" };
        let close = if r + 1 == rows.len() { "]]" } else { "]" };
        writeln!(f, "{open}{}{close}", cells.join(" "))?;
    }
    Ok(())
}

struct Fixed(f64);

impl fmt::Display for Fixed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.8}", self.0)
    }
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "------ Credal partition ------")?;
        writeln!(f, "{} classes,", self.c)?;
        writeln!(f, "{} objects", self.n)?;
        writeln!(f, "Generated by {}", self.method)?;
        writeln!(f, "Focal sets:")?;
        write_matrix(f, &self.focal)?;
        writeln!(f, "Value of the criterion = {:.2}", self.criterion)?;
        writeln!(f, "Nonspecificity = {:.2}", self.nonspecificity)?;
        match &self.prototypes {
            Some(Prototypes::Centers(rows)) => {
                writeln!(f, "Prototypes:")?;
                let rows: Vec<Vec<Fixed>> = rows.iter().map(|r| r.iter().map(|&v| Fixed(v)).collect()).collect();
                write_matrix(f, &rows)?;
            }
            Some(Prototypes::Medoids(ids)) => {
                let ids: Vec<String> = ids.iter().map(ToString::to_string).collect();
                writeln!(f, "Medoids (object indices): [{}]", ids.join(" "))?;
            }
            Some(Prototypes::ViewMedoids(views)) => {
                writeln!(f, "Medoids per view (object indices):")?;
                write_matrix(f, views)?;
            }
            Some(Prototypes::Weights(_)) => {
                writeln!(f, "Prototypes: implicit (object weights)")?;
            }
            Some(Prototypes::Profiles(profiles)) => {
                writeln!(f, "Prototypes (modal category per attribute):")?;
                let modes: Vec<Vec<usize>> =
                    profiles.iter().map(|k| k.iter().map(|q| argmax(q.iter().copied())).collect()).collect();
                write_matrix(f, &modes)?;
            }
            None => {}
        }
        writeln!(f, "Number of outliers = {}", self.outliers)
    }
}
