use crate::error::{Error, Result};

use super::table::{parse_csv, Dataset, DatasetSchema, LabelColumn};

pub const BUNDLED: [&str; 2] = ["iris", "fourclass"];

const IRIS: &str = include_str!("../../data/iris.csv");
const FOURCLASS: &str = include_str!("../../data/fourclass.csv");

/// Raw CSV text of a bundled dataset.
pub fn bundled_csv(name: &str) -> Result<&'static str> {
    match name {
        "iris" => Ok(IRIS),
        "fourclass" => Ok(FOURCLASS),
        other => Err(Error::UnknownDataset { name: other.to_string(), available: BUNDLED.join(", ") }),
    }
}

/// `iris`: 150 flowers, 4 measurements, species labels.
/// `fourclass`: 400 points in the plane, 4 class labels.
pub fn load_bundled(name: &str) -> Result<Dataset> {
    let label = match name {
        "iris" => "species",
        _ => "y",
    };
    let schema = DatasetSchema { label: LabelColumn::Named(label.into()), ..DatasetSchema::default() };
    parse_csv(bundled_csv(name)?.as_bytes(), &schema)
}
