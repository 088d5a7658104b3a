use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Result, SpinSqError};
use crate::linalg::{self, c, CMat, Layout, C64};
use crate::moments::{swap_sites, ReducedStates};
use crate::states::QuantumState;

/// Partial-transpose eigenvalues below this count as negative.
pub const NPT_TOL: f64 = 1e-9;

/// Weight outside the symmetric two-particle subspace up to which the
/// sampled witness is considered meaningful.
const SYMMETRIC_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CutResult {
    /// Sites whose indices are transposed.
    pub sites: Vec<usize>,
    pub min_eigenvalue: f64,
    pub npt: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PptReport {
    pub cuts: Vec<CutResult>,
    pub any_npt: bool,
}

/// One side of every bipartition, each listed once.
pub fn all_bipartitions(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for mask in 1u32..(1 << n) - 1 {
        let size = mask.count_ones() as usize;
        if 2 * size > n || (2 * size == n && mask & 1 == 0) {
            continue;
        }
        out.push((0..n).filter(|&s| mask & (1 << s) != 0).collect());
    }
    out.sort_by_key(|s: &Vec<usize>| (s.len(), s.clone()));
    out
}

/// The `N` cuts separating one particle from the rest.
pub fn one_vs_rest(n: usize) -> Vec<Vec<usize>> {
    (0..n).map(|s| vec![s]).collect()
}

pub fn ppt_bipartitions(state: &QuantumState, cuts: &[Vec<usize>]) -> Result<PptReport> {
    let n = state.shape().n();
    for cut in cuts {
        if cut.is_empty() || cut.len() >= n || cut.iter().any(|&s| s >= n) {
            return Err(SpinSqError::InvalidArgument(format!(
                "{cut:?} is not one side of a bipartition of {n} particles"
            )));
        }
    }
    let rho = state.density();
    let layout = state.shape().layout();
    let cuts: Vec<CutResult> = cuts
        .iter()
        .map(|sites| {
            let min = linalg::min_eigenvalue(&layout.partial_transpose(&rho, sites));
            CutResult {
                sites: sites.clone(),
                min_eigenvalue: min,
                npt: min < -NPT_TOL,
            }
        })
        .collect();
    let any_npt = cuts.iter().any(|r| r.npt);
    Ok(PptReport { cuts, any_npt })
}

/// Whether any bipartition has a non-positive partial transpose. Same
/// verdict as [`ppt_bipartitions`] without computing every spectrum.
pub fn any_npt(state: &QuantumState) -> Result<bool> {
    let rho = state.density();
    let layout = state.shape().layout();
    Ok(all_bipartitions(state.shape().n())
        .iter()
        .any(|sites| !linalg::min_eigenvalue_at_least(&layout.partial_transpose(&rho, sites), NPT_TOL)))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwoBodyPpt {
    pub min_eigenvalue: f64,
    pub npt: bool,
    pub samples: usize,
    /// Smallest sampled `<A⊗A> − <A⊗1>²` over random Hermitian `A`.
    pub witness_min: f64,
    /// Weight of the averaged two-body state on the symmetric subspace.
    pub symmetric_weight: f64,
    /// The sampled witness bounds the partial transpose only for states
    /// supported on the symmetric subspace.
    pub witness_applicable: bool,
}

/// `Tr(ρ P_sym)` for a two-site state of local dimension `d`.
pub fn symmetric_weight(rho2: &CMat, d: usize) -> f64 {
    let swapped_trace: C64 = (0..d * d).map(|i| rho2[((i % d) * d + i / d, i)]).sum();
    0.5 * (1.0 + swapped_trace.re)
}

pub fn ppt_two_body(r: &ReducedStates, samples: usize, seed: u64) -> Result<TwoBodyPpt> {
    if samples == 0 {
        return Err(SpinSqError::InvalidArgument("at least one sample is needed".into()));
    }
    let d = r.shape.d();
    let rho = &r.rho_av2;
    let layout = Layout::new(d, 2);
    let min = linalg::min_eigenvalue(&layout.partial_transpose(rho, &[1]));
    debug_assert!(linalg::max_abs(&(swap_sites(rho, d) - rho)) < 1e-9);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let id = CMat::identity(d, d);
    let mut witness_min = f64::INFINITY;
    for _ in 0..samples {
        let g = CMat::from_fn(d, d, |_, _| {
            C64::new(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng))
        });
        let a = (&g + g.adjoint()) * c(0.5);
        let aa = linalg::trace(&(rho * a.kronecker(&a))).re;
        let a1 = linalg::trace(&(rho * a.kronecker(&id))).re;
        witness_min = witness_min.min(aa - a1 * a1);
    }
    let weight = symmetric_weight(rho, d);
    Ok(TwoBodyPpt {
        min_eigenvalue: min,
        npt: min < -NPT_TOL,
        samples,
        witness_min,
        symmetric_weight: weight,
        witness_applicable: 1.0 - weight < SYMMETRIC_TOL,
    })
}
