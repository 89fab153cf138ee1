//! Reading datasets, building dissimilarities and projecting for plots.

mod bundled;
mod distance;
mod pca;
mod table;

pub use bundled::{bundled_csv, load_bundled, BUNDLED};
pub use distance::{euclidean_distances, mismatch_distances};
pub use pca::{pca_project, Projection};
pub use table::{
    load_csv, load_dissimilarity, parse_csv, parse_dissimilarity, Dataset, DatasetSchema, FeatureKind, Features,
    LabelColumn,
};
