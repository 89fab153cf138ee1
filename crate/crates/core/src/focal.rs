//! Frames of discernment and focal-set matrices.
//!
//! A focal set is stored as a bitmask over the clusters, bit `k` standing for
//! cluster `ω_{k+1}`. Focal matrices always list their sets in ascending mask
//! order, which is binary counting with `ω_1` as the least-significant bit:
//! for `c = 3` and all subsets this gives
//! `[000, 100, 010, 110, 001, 101, 011, 111]`.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest frame size representable by [`FocalSet`].
pub const MAX_CLUSTERS: usize = 31;

/// Largest frame size accepted when enumerating all `2^c` subsets.
pub const MAX_FULL_CLUSTERS: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrameSpec {
    c: usize,
    labels: Option<Vec<String>>,
}

impl FrameSpec {
    pub fn new(c: usize) -> Result<Self> {
        if c == 0 {
            return Err(Error::param("c", "at least one cluster is required"));
        }
        if c > MAX_CLUSTERS {
            return Err(Error::param("c", format!("at most {MAX_CLUSTERS} clusters are supported")));
        }
        Ok(Self { c, labels: None })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.c {
            return Err(Error::param("labels", format!("expected {} labels, got {}", self.c, labels.len())));
        }
        let unique: BTreeSet<&String> = labels.iter().collect();
        if unique.len() != labels.len() {
            return Err(Error::param("labels", "cluster labels must be distinct"));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn c(&self) -> usize {
        self.c
    }

    /// Display name of cluster `k` (0-based), defaulting to `ω{k+1}`.
    pub fn label(&self, k: usize) -> String {
        match &self.labels {
            Some(labels) => labels[k].clone(),
            None => format!("ω{}", k + 1),
        }
    }
}

/// A subset of the frame, as a bitmask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FocalSet(u32);

impl FocalSet {
    pub const EMPTY: FocalSet = FocalSet(0);

    pub fn from_mask(mask: u32) -> Self {
        FocalSet(mask)
    }

    pub fn singleton(k: usize) -> Self {
        FocalSet(1 << k)
    }

    pub fn omega(c: usize) -> Self {
        FocalSet(((1u64 << c) - 1) as u32)
    }

    pub fn from_members(members: &[usize]) -> Self {
        FocalSet(members.iter().fold(0, |acc, &k| acc | (1 << k)))
    }

    pub fn mask(self) -> u32 {
        self.0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn cardinality(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, k: usize) -> bool {
        self.0 & (1 << k) != 0
    }

    pub fn is_subset_of(self, other: FocalSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn intersects(self, other: FocalSet) -> bool {
        self.0 & other.0 != 0
    }

    pub fn complement(self, c: usize) -> FocalSet {
        FocalSet(!self.0 & FocalSet::omega(c).0)
    }

    /// 0-based cluster indices in ascending order.
    pub fn members(self) -> impl Iterator<Item = usize> {
        let mask = self.0;
        (0..32).filter(move |k| mask & (1 << k) != 0)
    }
}

/// Renders as a 1-based set, e.g. `{1,3}` or `{}`.
impl fmt::Display for FocalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.members().map(|k| (k + 1).to_string()).collect();
        write!(f, "{{{}}}", items.join(","))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum FocalKind {
    /// Every subset of the frame.
    #[default]
    Full,
    /// Empty set, singletons and the whole frame.
    Simple,
    /// Empty set, singletons, pairs and the whole frame.
    Pairs,
}

impl std::str::FromStr for FocalKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(FocalKind::Full),
            "simple" => Ok(FocalKind::Simple),
            "pairs" => Ok(FocalKind::Pairs),
            other => Err(Error::param("focal", format!("unknown kind `{other}` (expected full, simple or pairs)"))),
        }
    }
}

/// Recipe for a focal matrix; solvers build it once `c` is known.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FocalSpec {
    pub kind: FocalKind,
    /// 1-based cluster pairs, only used with [`FocalKind::Pairs`].
    pub pairs: Option<Vec<(usize, usize)>>,
    pub include_omega: bool,
}

impl Default for FocalSpec {
    fn default() -> Self {
        Self { kind: FocalKind::Full, pairs: None, include_omega: true }
    }
}

impl FocalSpec {
    pub fn new(kind: FocalKind) -> Self {
        Self { kind, ..Self::default() }
    }

    pub fn without_omega(mut self) -> Self {
        self.include_omega = false;
        self
    }

    pub fn build(&self, c: usize) -> Result<FocalMatrix> {
        make_focal_matrix(c, self.kind, self.pairs.as_deref(), self.include_omega)
    }
}

/// The ordered list of candidate focal sets of a credal partition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FocalMatrix {
    c: usize,
    sets: Vec<FocalSet>,
}

pub fn make_focal_matrix(
    c: usize,
    kind: FocalKind,
    pairs: Option<&[(usize, usize)]>,
    include_omega: bool,
) -> Result<FocalMatrix> {
    FrameSpec::new(c)?;
    let mut sets: BTreeSet<FocalSet> = BTreeSet::new();
    match kind {
        FocalKind::Full => {
            if c > MAX_FULL_CLUSTERS {
                return Err(Error::param("c", format!("full focal sets support at most {MAX_FULL_CLUSTERS} clusters")));
            }
            sets.extend((0..1u32 << c).map(FocalSet));
        }
        FocalKind::Simple | FocalKind::Pairs => {
            sets.insert(FocalSet::EMPTY);
            sets.extend((0..c).map(FocalSet::singleton));
            if kind == FocalKind::Pairs {
                match pairs {
                    Some(list) => {
                        let mut seen = BTreeSet::new();
                        for &(a, b) in list {
                            if a == 0 || b == 0 || a > c || b > c || a == b {
                                return Err(Error::InvalidFocal(format!(
                                    "pair ({a},{b}) must hold two distinct indices in 1..={c}"
                                )));
                            }
                            let set = FocalSet::from_members(&[a - 1, b - 1]);
                            if !seen.insert(set) {
                                return Err(Error::InvalidFocal(format!("duplicate pair ({a},{b})")));
                            }
                            sets.insert(set);
                        }
                    }
                    None => {
                        for a in 0..c {
                            for b in a + 1..c {
                                sets.insert(FocalSet::from_members(&[a, b]));
                            }
                        }
                    }
                }
            }
            if include_omega {
                sets.insert(FocalSet::omega(c));
            }
        }
    }
    if kind == FocalKind::Full && !include_omega && c > 1 {
        sets.remove(&FocalSet::omega(c));
    }
    Ok(FocalMatrix { c, sets: sets.into_iter().collect() })
}

impl FocalMatrix {
    /// Builds a focal matrix from explicit sets, checking every invariant.
    pub fn from_sets(c: usize, sets: Vec<FocalSet>) -> Result<Self> {
        FrameSpec::new(c)?;
        let omega = FocalSet::omega(c);
        if sets.first() != Some(&FocalSet::EMPTY) {
            return Err(Error::InvalidFocal("first focal set must be the empty set".into()));
        }
        for w in sets.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::InvalidFocal(
                    "focal sets must be distinct and in canonical (binary counting) order".into(),
                ));
            }
        }
        if let Some(bad) = sets.iter().find(|s| !s.is_subset_of(omega)) {
            return Err(Error::InvalidFocal(format!("set {bad} lies outside a frame of {c} clusters")));
        }
        for k in 0..c {
            if !sets.contains(&FocalSet::singleton(k)) {
                return Err(Error::InvalidFocal(format!("singleton {{{}}} is missing", k + 1)));
            }
        }
        Ok(Self { c, sets })
    }

    /// Builds a focal matrix from 0/1 rows (the persisted form).
    pub fn from_rows(rows: &[Vec<u8>]) -> Result<Self> {
        let c = rows.first().map(Vec::len).ok_or_else(|| Error::InvalidFocal("no focal sets".into()))?;
        let mut sets = Vec::with_capacity(rows.len());
        for (j, row) in rows.iter().enumerate() {
            if row.len() != c {
                return Err(Error::InvalidFocal(format!("row {j} has {} entries, expected {c}", row.len())));
            }
            let mut mask = 0u32;
            for (k, &v) in row.iter().enumerate() {
                match v {
                    0 => {}
                    1 => mask |= 1 << k,
                    other => return Err(Error::InvalidFocal(format!("row {j} holds {other}, expected 0 or 1"))),
                }
            }
            sets.push(FocalSet(mask));
        }
        Self::from_sets(c, sets)
    }

    pub fn c(&self) -> usize {
        self.c
    }

    /// Number of focal sets `f`, the empty set included.
    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn sets(&self) -> &[FocalSet] {
        &self.sets
    }

    pub fn set(&self, j: usize) -> FocalSet {
        self.sets[j]
    }

    pub fn index_of(&self, set: FocalSet) -> Option<usize> {
        self.sets.binary_search(&set).ok()
    }

    pub fn singleton_index(&self, k: usize) -> usize {
        self.index_of(FocalSet::singleton(k)).expect("focal matrix invariant: every singleton is present")
    }

    pub fn cardinalities(&self) -> Vec<usize> {
        self.sets.iter().map(|s| s.cardinality()).collect()
    }

    /// `(j, set)` for every nonempty focal set, in row order.
    pub fn nonempty(&self) -> impl Iterator<Item = (usize, FocalSet)> + '_ {
        self.sets.iter().copied().enumerate().filter(|(_, s)| !s.is_empty())
    }

    /// Row view: entry `(j, k)` is 1 iff `ω_{k+1}` belongs to set `j`.
    pub fn rows(&self) -> Vec<Vec<u8>> {
        self.sets.iter().map(|s| (0..self.c).map(|k| s.contains(k) as u8).collect()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_c3_matches_binary_counting() {
        let f = make_focal_matrix(3, FocalKind::Full, None, true).unwrap();
        let rows = f.rows();
        let expected: Vec<Vec<u8>> = vec![
            vec![0, 0, 0],
            vec![1, 0, 0],
            vec![0, 1, 0],
            vec![1, 1, 0],
            vec![0, 0, 1],
            vec![1, 0, 1],
            vec![0, 1, 1],
            vec![1, 1, 1],
        ];
        assert_eq!(rows, expected);
    }

    #[test]
    fn simple_c2() {
        let f = make_focal_matrix(2, FocalKind::Simple, None, true).unwrap();
        let masks: Vec<u32> = f.sets().iter().map(|s| s.mask()).collect();
        assert_eq!(masks, vec![0, 1, 2, 3]);
    }

    #[test]
    fn simple_without_omega_c1_keeps_singleton() {
        let f = make_focal_matrix(1, FocalKind::Simple, None, false).unwrap();
        assert_eq!(f.len(), 2);
        let f = make_focal_matrix(1, FocalKind::Full, None, false).unwrap();
        assert_eq!(f.len(), 2);
    }

    #[test]
    fn pairs_c4_count() {
        let f = make_focal_matrix(4, FocalKind::Pairs, None, true).unwrap();
        assert_eq!(f.len(), 4 + 2 + 6);
        let f = make_focal_matrix(4, FocalKind::Pairs, None, false).unwrap();
        assert_eq!(f.len(), 4 + 1 + 6);
    }

    #[test]
    fn supplied_pairs() {
        let f = make_focal_matrix(4, FocalKind::Pairs, Some(&[(1, 2), (3, 4)]), true).unwrap();
        assert_eq!(f.len(), 1 + 4 + 2 + 1);
        assert!(f.index_of(FocalSet::from_members(&[0, 1])).is_some());
        assert!(f.index_of(FocalSet::from_members(&[0, 2])).is_none());
    }

    #[test]
    fn bad_pairs_rejected() {
        assert!(make_focal_matrix(3, FocalKind::Pairs, Some(&[(1, 4)]), true).is_err());
        assert!(make_focal_matrix(3, FocalKind::Pairs, Some(&[(2, 2)]), true).is_err());
        assert!(make_focal_matrix(3, FocalKind::Pairs, Some(&[(0, 1)]), true).is_err());
        assert!(make_focal_matrix(3, FocalKind::Pairs, Some(&[(1, 2), (2, 1)]), true).is_err());
    }

    #[test]
    fn full_without_omega_drops_last_row() {
        let f = make_focal_matrix(3, FocalKind::Full, None, false).unwrap();
        assert_eq!(f.len(), 7);
        assert!(f.index_of(FocalSet::omega(3)).is_none());
    }

    #[test]
    fn zero_clusters_rejected() {
        assert!(make_focal_matrix(0, FocalKind::Simple, None, true).is_err());
    }

    #[test]
    fn rows_round_trip() {
        let f = make_focal_matrix(4, FocalKind::Pairs, None, true).unwrap();
        assert_eq!(FocalMatrix::from_rows(&f.rows()).unwrap(), f);
    }

    #[test]
    fn from_rows_rejects_bad_order_and_missing_singletons() {
        assert!(FocalMatrix::from_rows(&[vec![0, 0], vec![0, 1], vec![1, 0]]).is_err());
        assert!(FocalMatrix::from_rows(&[vec![0, 0], vec![1, 0], vec![1, 1]]).is_err());
        assert!(FocalMatrix::from_rows(&[vec![1, 0], vec![0, 1]]).is_err());
        assert!(FocalMatrix::from_rows(&[vec![0, 0], vec![1, 0], vec![0, 2]]).is_err());
    }

    #[test]
    fn display_is_one_based() {
        assert_eq!(FocalSet::from_members(&[0, 2]).to_string(), "{1,3}");
        assert_eq!(FocalSet::EMPTY.to_string(), "{}");
    }

    #[test]
    fn frame_labels_must_be_distinct() {
        let frame = FrameSpec::new(2).unwrap();
        assert!(frame.clone().with_labels(vec!["a".into(), "a".into()]).is_err());
        assert!(frame.clone().with_labels(vec!["a".into()]).is_err());
        let frame = frame.with_labels(vec!["a".into(), "b".into()]).unwrap();
        assert_eq!(frame.label(1), "b");
    }
}
