//! Evidential clustering: credal partitions, the solvers that produce them,
//! and the measures used to read and compare them.

pub mod attribute;
pub mod data;
pub mod derived;
pub mod document;
pub mod error;
pub mod focal;
pub mod io;
pub mod metrics;
pub mod multiview;
pub mod partition;
pub mod relational;
pub mod solver;

pub use attribute::{catecm_fit, ccm_fit, ecm_fit, EcmState};
pub use data::{AttributeData, CategoricalData, DissimilarityMatrix};
pub use derived::{derive, extract_mass, summarize, DerivedOutputs, HardPartition, Summary};
pub use document::{from_json, read_json, to_json, write_json, CredalDocument};
pub use error::{Error, Result};
pub use focal::{make_focal_matrix, FocalKind, FocalMatrix, FocalSet, FocalSpec, FrameSpec};
pub use metrics::{credal_ri, nonspecificity, nonspecificity_bits, pairwise_mass, PairwiseMass, RiType};
pub use multiview::{mecmdd_fit, MecmddParams, MultiViewDissimilarity};
pub use partition::{CredalPartition, Diagnostics, Prototypes, ViewWeights, WeightVariant};
pub use relational::{ecmdd_fit, recm_fit};
pub use solver::{Init, SolverParams};
