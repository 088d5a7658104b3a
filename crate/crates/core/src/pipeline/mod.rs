//! Threshold scans, tabulated reference values, full per-state analysis
//! and the command-line front end.

mod cli;
mod scan;
mod statespec;
mod table1;

use serde::Serialize;

use crate::criteria::{self, CriteriaReport, IndexSubset, PptReport, SqueezingReport, TwoBodyPpt};
use crate::error::Result;
use crate::moments::{raw_moments, reduced_states, MomentSet};
use crate::polytope::{self, FacetMargins};
use crate::spin::{single_particle_report, Axis, Frame, SingleParticleReport};
use crate::states::QuantumState;

pub use cli::{run, run_with};
pub use scan::{
    moment_report, noise_threshold, noise_threshold_with, temperature_threshold_with, temperature_thresholds,
    Criterion, ScanOptions, ScanResult, TemperatureScan, MAX_BISECTIONS,
};
pub use statespec::{parse_vertex, StateSpec, STATE_NAMES};
pub use table1::{closed_form, table1, table1_rows, Collective, Table1Row, TABLE1_CASES};

/// Version of every JSON document written by the command line.
pub const SCHEMA_VERSION: u32 = 1;

/// Largest dimension for which `analyze` checks every bipartition.
pub const PPT_DIM_LIMIT: usize = 1024;

#[derive(Debug, Clone, Serialize)]
pub struct AnalysisReport {
    pub moments: MomentSet,
    pub criteria: CriteriaReport,
    /// One report per squeezed axis `k = x, y, z`.
    pub squeezing: Vec<SqueezingReport>,
    pub polytope: FacetMargins,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub single_particle: Option<SingleParticleReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ppt: Option<PptReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub two_body_ppt: Option<TwoBodyPpt>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalysisOptions {
    pub witness_samples: usize,
    pub seed: u64,
    pub ppt_dim_limit: usize,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        Self {
            witness_samples: 200,
            seed: 0,
            ppt_dim_limit: PPT_DIM_LIMIT,
        }
    }
}

/// Everything the crate evaluates for one state in the canonical frame.
pub fn analyze(state: &QuantumState, opts: &AnalysisOptions) -> Result<AnalysisReport> {
    let raw = raw_moments(state)?;
    let frame = Frame::canonical();
    let moments = raw.moment_set(&frame);
    let mut crit = criteria::evaluate_optimal_set(&moments);
    crit.merge(criteria::evaluate_coordinate_free(&raw.matrices(&frame)));
    crit.merge(criteria::mapped_criteria(&moments));

    let shape = state.shape();
    let (single_particle, two_body_ppt) = if shape.n() >= 2 {
        let r = reduced_states(state)?;
        for s in IndexSubset::all() {
            crit.push(criteria::two_body_criterion(&r, s)?);
        }
        let sp = single_particle_report(&r.rho_av1, &frame)?;
        (Some(sp), Some(criteria::ppt_two_body(&r, opts.witness_samples.max(1), opts.seed)?))
    } else {
        (single_particle_report(&state.density(), &frame).ok(), None)
    };
    let ppt = if shape.n() >= 2 && shape.dim() <= opts.ppt_dim_limit {
        Some(criteria::ppt_bipartitions(state, &criteria::all_bipartitions(shape.n()))?)
    } else {
        None
    };
    Ok(AnalysisReport {
        squeezing: Axis::ALL.iter().map(|&k| criteria::squeezing_parameters(&moments, k)).collect(),
        polytope: polytope::membership(&moments),
        criteria: crit,
        moments,
        single_particle,
        ppt,
        two_body_ppt,
    })
}
