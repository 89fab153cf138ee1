use std::io::Read;
use std::path::Path;

use ndarray::Array2;

use crate::data::{AttributeData, CategoricalData, DissimilarityMatrix};
use crate::error::{Error, Result};

/// Which column, if any, holds class labels rather than features.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum LabelColumn {
    None,
    Named(String),
    /// 0-based column index.
    Index(usize),
    /// The single non-numeric column of an otherwise numeric table.
    #[default]
    Auto,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FeatureKind {
    /// Numeric when every feature cell parses, categorical when none does.
    #[default]
    Auto,
    Numeric,
    Categorical,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DatasetSchema {
    pub has_header: bool,
    pub delimiter: u8,
    pub label: LabelColumn,
    pub kind: FeatureKind,
}

impl Default for DatasetSchema {
    fn default() -> Self {
        Self { has_header: true, delimiter: b',', label: LabelColumn::Auto, kind: FeatureKind::Auto }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Features {
    Numeric(AttributeData),
    Categorical(CategoricalData),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub features: Features,
    pub labels: Option<Vec<String>>,
    pub label_name: Option<String>,
}

impl Dataset {
    pub fn n(&self) -> usize {
        match &self.features {
            Features::Numeric(x) => x.n(),
            Features::Categorical(x) => x.n(),
        }
    }

    pub fn attributes(&self) -> Result<&AttributeData> {
        match &self.features {
            Features::Numeric(x) => Ok(x),
            Features::Categorical(_) => Err(Error::InvalidData("expected numeric features, found categorical".into())),
        }
    }

    pub fn categorical(&self) -> Result<&CategoricalData> {
        match &self.features {
            Features::Categorical(x) => Ok(x),
            Features::Numeric(_) => Err(Error::InvalidData("expected categorical features, found numeric".into())),
        }
    }

    /// Labels coded `0..k` in order of first appearance, with their names.
    pub fn label_codes(&self) -> Option<(Vec<usize>, Vec<String>)> {
        self.labels.as_ref().map(|l| code_column(l.iter().map(String::as_str)))
    }
}

fn code_column<'a>(cells: impl Iterator<Item = &'a str>) -> (Vec<usize>, Vec<String>) {
    let mut levels: Vec<String> = Vec::new();
    let codes = cells
        .map(|v| match levels.iter().position(|l| l == v) {
            Some(k) => k,
            None => {
                levels.push(v.to_string());
                levels.len() - 1
            }
        })
        .collect();
    (codes, levels)
}

fn is_missing(cell: &str) -> bool {
    cell.is_empty() || cell.eq_ignore_ascii_case("na") || cell.eq_ignore_ascii_case("nan")
}

fn parse_number(cell: &str) -> Option<f64> {
    cell.parse::<f64>().ok().filter(|v| v.is_finite())
}

fn read_table(reader: impl Read, has_header: bool, delimiter: u8) -> Result<(Vec<String>, Vec<Vec<String>>)> {
    let mut rdr =
        csv::ReaderBuilder::new().has_headers(has_header).delimiter(delimiter).trim(csv::Trim::All).from_reader(reader);
    let header: Vec<String> = if has_header { rdr.headers()?.iter().map(str::to_string).collect() } else { Vec::new() };
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        rows.push(rec.iter().map(str::to_string).collect::<Vec<_>>());
    }
    let width = rows.first().map_or(header.len(), Vec::len);
    let header = if has_header { header } else { (1..=width).map(|k| format!("V{k}")).collect() };
    Ok((header, rows))
}

/// Parses a delimited table into features and optional labels.
/// Row numbers in errors count data rows from 1.
pub fn parse_csv(reader: impl Read, schema: &DatasetSchema) -> Result<Dataset> {
    let (header, rows) = read_table(reader, schema.has_header, schema.delimiter)?;
    if rows.is_empty() {
        return Err(Error::InvalidData("no data rows".into()));
    }
    let width = header.len();
    for (i, row) in rows.iter().enumerate() {
        for (q, cell) in row.iter().enumerate() {
            if is_missing(cell) {
                return Err(Error::MissingValue { row: i + 1, column: header[q].clone() });
            }
        }
    }
    let numeric_col = |q: usize| rows.iter().all(|r| parse_number(&r[q]).is_some());
    let label = match &schema.label {
        LabelColumn::None => None,
        LabelColumn::Index(q) if *q < width => Some(*q),
        LabelColumn::Index(q) => {
            return Err(Error::InvalidData(format!("label column {q} is out of range ({width} columns)")))
        }
        LabelColumn::Named(name) => Some(
            header
                .iter()
                .position(|h| h == name)
                .ok_or_else(|| Error::InvalidData(format!("no column named `{name}`")))?,
        ),
        LabelColumn::Auto => {
            let text: Vec<usize> = (0..width).filter(|&q| !numeric_col(q)).collect();
            (text.len() == 1 && width > 1 && schema.kind != FeatureKind::Categorical).then(|| text[0])
        }
    };
    let feature_cols: Vec<usize> = (0..width).filter(|&q| Some(q) != label).collect();
    if feature_cols.is_empty() {
        return Err(Error::InvalidData("no feature columns".into()));
    }
    let names: Vec<String> = feature_cols.iter().map(|&q| header[q].clone()).collect();
    let kind = match schema.kind {
        FeatureKind::Auto => {
            let numeric: Vec<bool> = feature_cols.iter().map(|&q| numeric_col(q)).collect();
            if numeric.iter().all(|&b| b) {
                FeatureKind::Numeric
            } else if numeric.iter().all(|&b| !b) {
                FeatureKind::Categorical
            } else {
                let q = feature_cols[numeric.iter().position(|&b| !b).expect("some column is not numeric")];
                let (i, cell) = rows
                    .iter()
                    .enumerate()
                    .find(|(_, r)| parse_number(&r[q]).is_none())
                    .map(|(i, r)| (i + 1, r[q].clone()))
                    .expect("column is not numeric");
                return Err(Error::Parse { row: i, column: header[q].clone(), value: cell });
            }
        }
        k => k,
    };
    let n = rows.len();
    let features = match kind {
        FeatureKind::Categorical => {
            let mut codes = Array2::zeros((n, feature_cols.len()));
            let mut levels = Vec::with_capacity(feature_cols.len());
            for (a, &q) in feature_cols.iter().enumerate() {
                let (col, lv) = code_column(rows.iter().map(|r| r[q].as_str()));
                for (i, v) in col.into_iter().enumerate() {
                    codes[[i, a]] = v;
                }
                levels.push(lv);
            }
            let cards = levels.iter().map(Vec::len).collect();
            Features::Categorical(CategoricalData::new(codes, cards)?.with_names(names, levels)?)
        }
        _ => {
            let mut x = Array2::zeros((n, feature_cols.len()));
            for (i, row) in rows.iter().enumerate() {
                for (a, &q) in feature_cols.iter().enumerate() {
                    x[[i, a]] = parse_number(&row[q]).ok_or_else(|| Error::Parse {
                        row: i + 1,
                        column: header[q].clone(),
                        value: row[q].clone(),
                    })?;
                }
            }
            Features::Numeric(AttributeData::new(x)?.with_columns(names)?)
        }
    };
    Ok(Dataset {
        features,
        labels: label.map(|q| rows.iter().map(|r| r[q].clone()).collect()),
        label_name: label.map(|q| header[q].clone()),
    })
}

pub fn load_csv(path: &Path, schema: &DatasetSchema) -> Result<Dataset> {
    let file = std::fs::File::open(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
    parse_csv(std::io::BufReader::new(file), schema)
}

/// Parses a square dissimilarity table. A header row and/or an index column
/// are detected and dropped.
pub fn parse_dissimilarity(reader: impl Read, delimiter: u8) -> Result<DissimilarityMatrix> {
    let (_, mut rows) = read_table(reader, false, delimiter)?;
    if rows.is_empty() {
        return Err(Error::InvalidDissimilarity("empty table".into()));
    }
    let numeric = |cell: &str| parse_number(cell).is_some();
    let mut drop_row = rows[0].iter().skip(1).any(|c| !numeric(c));
    let mut drop_col = rows.iter().skip(1).any(|r| !numeric(&r[0]));
    let body_rows = rows.len() - usize::from(drop_row);
    let body_cols = rows[0].len() - usize::from(drop_col);
    if body_rows == body_cols + 1 && !drop_row {
        drop_row = true;
    } else if body_cols == body_rows + 1 && !drop_col {
        drop_col = true;
    } else if body_rows == body_cols && !drop_row && !drop_col && rows.len() > 2 {
        // fully numeric table whose first row and column may be labels
        let as_is = to_matrix(&rows, false, false).and_then(DissimilarityMatrix::new);
        if as_is.is_err() {
            if let Ok(m) = to_matrix(&rows, true, true).and_then(DissimilarityMatrix::new) {
                return Ok(m);
            }
        }
        return as_is;
    }
    if drop_row {
        rows.remove(0);
    }
    DissimilarityMatrix::new(to_matrix(&rows, false, drop_col)?)
}

fn to_matrix(rows: &[Vec<String>], skip_row: bool, skip_col: bool) -> Result<Array2<f64>> {
    let rows = &rows[usize::from(skip_row)..];
    let n = rows.len();
    let off = usize::from(skip_col);
    let mut d = Array2::zeros((n, n));
    for (i, r) in rows.iter().enumerate() {
        if r.len() - off != n {
            return Err(Error::InvalidDissimilarity(format!(
                "row {} has {} values, expected {n}",
                i + 1,
                r.len() - off
            )));
        }
        for j in 0..n {
            let cell = &r[j + off];
            if is_missing(cell) {
                return Err(Error::MissingValue { row: i + 1, column: (j + 1).to_string() });
            }
            d[[i, j]] = parse_number(cell).ok_or_else(|| Error::Parse {
                row: i + 1,
                column: (j + 1).to_string(),
                value: cell.clone(),
            })?;
        }
    }
    Ok(d)
}

pub fn load_dissimilarity(path: &Path, delimiter: u8) -> Result<DissimilarityMatrix> {
    let file = std::fs::File::open(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
    parse_dissimilarity(std::io::BufReader::new(file), delimiter)
}
