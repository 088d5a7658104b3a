//! Entanglement conditions on collective moments and the associated
//! squeezing parameters.
//!
//! Every condition is stored in the orientation `lhs ≥ rhs`; its margin is
//! `lhs − rhs`, so a negative margin signals entanglement.

mod coordinate_free;
mod mapped;
mod optimal;
mod ppt;
mod squeezing;
mod two_body;

use std::fmt;
use std::str::FromStr;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::error::SpinSqError;
use crate::spin::Axis;

pub use coordinate_free::evaluate_coordinate_free;
pub use mapped::{
    kc05e_qubit, mapped_criteria, mapped_qubit_condition, planar_constant, planar_records, qudkcl_record,
    MappedMoments,
};
pub use optimal::{
    betosp_record, evaluate_optimal_set, isoin_record, optimal_records, rearranged_margins, ssij_record,
    symmsatin_record, twovar_record, Rearranged,
};
pub use ppt::{
    all_bipartitions, any_npt, one_vs_rest, ppt_bipartitions, ppt_two_body, symmetric_weight, CutResult,
    PptReport, TwoBodyPpt,
};
pub use squeezing::{squeezing_parameters, xi_sj_from_identity, Param, SqueezingReport};
pub use two_body::{dicke_local_moment, two_body_criterion};

/// Relative size of the negative margin below which a condition counts as
/// violated. The scale is `max(1, |lhs|, |rhs|)`.
pub const VIOLATION_TOL: f64 = 1e-12;

/// Relative size of `|margin|` below which a satisfied condition is
/// reported as saturated.
pub const SATURATION_TOL: f64 = 1e-9;

/// One evaluated condition `lhs ≥ rhs`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub name: String,
    /// Axis assignment such as `"k=x,l=y,m=z"`, or a plane or subset label.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub axes: Option<String>,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub violated: bool,
    pub saturated: bool,
}

impl Record {
    pub fn new(name: impl Into<String>, axes: Option<String>, lhs: f64, rhs: f64) -> Self {
        let margin = lhs - rhs;
        let scale = 1f64.max(lhs.abs()).max(rhs.abs());
        let violated = margin < -VIOLATION_TOL * scale;
        let saturated = !violated && margin.abs() <= SATURATION_TOL * scale;
        Self {
            name: name.into(),
            axes,
            lhs,
            rhs,
            margin,
            violated,
            saturated,
        }
    }
}

/// A named collection of [`Record`]s with an overall verdict.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CriteriaReport {
    pub entangled: bool,
    pub criteria: IndexMap<String, Record>,
}

impl CriteriaReport {
    pub fn from_records(records: impl IntoIterator<Item = Record>) -> Self {
        let mut out = Self::default();
        for r in records {
            out.push(r);
        }
        out
    }

    pub fn push(&mut self, record: Record) {
        self.entangled |= record.violated;
        self.criteria.insert(record.name.clone(), record);
    }

    pub fn get(&self, name: &str) -> Option<&Record> {
        self.criteria.get(name)
    }

    /// Panics with the list of known names if `name` is absent.
    pub fn record(&self, name: &str) -> &Record {
        self.criteria.get(name).unwrap_or_else(|| {
            panic!(
                "no record '{name}'; have {:?}",
                self.criteria.keys().collect::<Vec<_>>()
            )
        })
    }

    pub fn records(&self) -> impl Iterator<Item = &Record> {
        self.criteria.values()
    }

    pub fn violated(&self) -> impl Iterator<Item = &Record> {
        self.criteria.values().filter(|r| r.violated)
    }

    pub fn len(&self) -> usize {
        self.criteria.len()
    }

    pub fn is_empty(&self) -> bool {
        self.criteria.is_empty()
    }

    pub fn merge(&mut self, other: CriteriaReport) {
        for r in other.criteria.into_values() {
            self.push(r);
        }
    }
}

/// A subset `I ⊆ {x, y, z}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IndexSubset(u8);

impl IndexSubset {
    pub const EMPTY: IndexSubset = IndexSubset(0);
    pub const FULL: IndexSubset = IndexSubset(0b111);

    pub fn all() -> impl Iterator<Item = IndexSubset> {
        (0u8..8).map(IndexSubset)
    }

    pub fn from_axes(axes: &[Axis]) -> Self {
        IndexSubset(axes.iter().fold(0, |acc, a| acc | (1 << a.index())))
    }

    pub fn contains(self, a: Axis) -> bool {
        self.0 & (1 << a.index()) != 0
    }

    pub fn members(self) -> impl Iterator<Item = Axis> {
        Axis::ALL.into_iter().filter(move |&a| self.contains(a))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for IndexSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("empty");
        }
        for a in self.members() {
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

impl FromStr for IndexSubset {
    type Err = SpinSqError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "empty" || s.is_empty() {
            return Ok(IndexSubset::EMPTY);
        }
        let mut axes = Vec::new();
        for ch in s.chars() {
            axes.push(ch.to_string().parse::<Axis>()?);
        }
        Ok(IndexSubset::from_axes(&axes))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn record_orientation_and_flags() {
        let r = Record::new("a", None, 1.0, 2.0);
        assert!(r.violated && r.margin == -1.0);
        let s = Record::new("b", None, 5.0, 5.0 + 1e-14);
        assert!(!s.violated && s.saturated);
        let t = Record::new("c", None, 3.0, 1.0);
        assert!(!t.violated && !t.saturated);
    }

    #[test]
    fn report_tracks_entanglement() {
        let mut rep = CriteriaReport::default();
        rep.push(Record::new("a", None, 1.0, 0.0));
        assert!(!rep.entangled);
        rep.push(Record::new("b", None, 0.0, 1.0));
        assert!(rep.entangled);
        let json = serde_json::to_value(&rep).unwrap();
        assert_eq!(json["criteria"]["b"]["violated"], true);
    }

    #[test]
    fn subsets_round_trip() {
        let names: Vec<String> = IndexSubset::all().map(|s| s.to_string()).collect();
        assert_eq!(names, ["empty", "x", "y", "xy", "z", "xz", "yz", "xyz"]);
        for s in IndexSubset::all() {
            assert_eq!(s.to_string().parse::<IndexSubset>().unwrap(), s);
        }
    }
}
