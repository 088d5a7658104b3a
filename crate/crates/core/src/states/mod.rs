//! Ensembles of N spin-j particles, their collective operators and the
//! named states used throughout the crate.

mod named;
mod operators;
mod serial;

use std::sync::OnceLock;

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SpinSqError};
use crate::linalg::{self, c, CMat, CVec, Layout, SparseOp, C64};
use crate::spin::{self, HalfInt};

pub use named::*;
pub use operators::{collective_component, collective_operator, CollectiveOps};

/// Default cap on the total Hilbert-space dimension `d^N`.
pub const DEFAULT_GUARD_DIM: usize = 1 << 16;

/// Environment variable that overrides [`DEFAULT_GUARD_DIM`].
pub const GUARD_ENV: &str = "SPINSQ_GUARD_DIM";

/// The guard in effect when none is given explicitly.
pub fn default_guard() -> usize {
    static GUARD: OnceLock<usize> = OnceLock::new();
    *GUARD.get_or_init(|| {
        std::env::var(GUARD_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .unwrap_or(DEFAULT_GUARD_DIM)
    })
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct EnsembleShape {
    #[serde(rename = "N")]
    n: usize,
    #[serde(rename = "two_j")]
    j: HalfInt,
    #[serde(skip, default = "default_guard")]
    guard: usize,
}

impl PartialEq for EnsembleShape {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.j == other.j
    }
}

impl Eq for EnsembleShape {}

impl EnsembleShape {
    pub fn new(n: usize, j: HalfInt) -> Result<Self> {
        Self::with_guard(n, j, default_guard())
    }

    pub fn with_guard(n: usize, j: HalfInt, guard: usize) -> Result<Self> {
        if n == 0 {
            return Err(SpinSqError::InvalidArgument(
                "particle number must be at least 1".into(),
            ));
        }
        let j = HalfInt::spin(j.twice())?;
        let d = j.twice() as u128 + 1;
        let dim = d.checked_pow(n as u32).unwrap_or(u128::MAX);
        if dim > guard as u128 {
            return Err(SpinSqError::Capacity { dim, guard });
        }
        Ok(Self { n, j, guard })
    }

    /// Shorthand for tests and examples: `2j` given as an integer.
    pub fn of(n: usize, twice_j: i32) -> Result<Self> {
        Self::new(n, HalfInt::from_twice(twice_j))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn j(&self) -> HalfInt {
        self.j
    }

    /// `j` as a float.
    pub fn jv(&self) -> f64 {
        self.j.value()
    }

    pub fn n_f(&self) -> f64 {
        self.n as f64
    }

    pub fn d(&self) -> usize {
        self.j.twice() as usize + 1
    }

    pub fn dim(&self) -> usize {
        self.d().pow(self.n as u32)
    }

    pub fn guard(&self) -> usize {
        self.guard
    }

    pub fn layout(&self) -> Layout {
        Layout::new(self.d(), self.n)
    }

    /// `N j`, the maximal collective spin.
    pub fn max_spin(&self) -> f64 {
        self.n_f() * self.jv()
    }

    pub(crate) fn revalidate(self) -> Result<Self> {
        Self::with_guard(self.n, self.j, self.guard)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum StateRepr {
    Pure(CVec),
    Mixed(CMat),
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState {
    shape: EnsembleShape,
    repr: StateRepr,
}

impl QuantumState {
    pub fn pure(shape: EnsembleShape, psi: CVec) -> Result<Self> {
        if psi.len() != shape.dim() {
            return Err(SpinSqError::ShapeMismatch(format!(
                "vector of length {} for an ensemble of dimension {}",
                psi.len(),
                shape.dim()
            )));
        }
        let norm = psi.norm();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(SpinSqError::InvalidState(format!(
                "pure state has norm {norm}, expected 1"
            )));
        }
        Ok(Self {
            shape,
            repr: StateRepr::Pure(psi),
        })
    }

    /// Normalizes before validating.
    pub fn pure_normalized(shape: EnsembleShape, psi: CVec) -> Result<Self> {
        let norm = psi.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(SpinSqError::InvalidState("zero vector".into()));
        }
        Self::pure(shape, psi / c(norm))
    }

    pub fn mixed(shape: EnsembleShape, rho: CMat) -> Result<Self> {
        if rho.nrows() != shape.dim() || rho.ncols() != shape.dim() {
            return Err(SpinSqError::ShapeMismatch(format!(
                "{}x{} matrix for an ensemble of dimension {}",
                rho.nrows(),
                rho.ncols(),
                shape.dim()
            )));
        }
        spin::check_density(&rho, 1e-10)?;
        Ok(Self {
            shape,
            repr: StateRepr::Mixed(rho),
        })
    }

    /// For matrices that are valid by construction (mixtures of valid states).
    pub(crate) fn mixed_unchecked(shape: EnsembleShape, rho: CMat) -> Self {
        debug_assert_eq!(rho.nrows(), shape.dim());
        Self {
            shape,
            repr: StateRepr::Mixed(rho),
        }
    }

    pub(crate) fn pure_unchecked(shape: EnsembleShape, psi: CVec) -> Self {
        debug_assert_eq!(psi.len(), shape.dim());
        Self {
            shape,
            repr: StateRepr::Pure(psi),
        }
    }

    pub fn shape(&self) -> &EnsembleShape {
        &self.shape
    }

    pub fn repr(&self) -> &StateRepr {
        &self.repr
    }

    pub fn is_pure(&self) -> bool {
        matches!(self.repr, StateRepr::Pure(_))
    }

    pub fn density(&self) -> CMat {
        match &self.repr {
            StateRepr::Pure(psi) => linalg::outer(psi),
            StateRepr::Mixed(rho) => rho.clone(),
        }
    }

    pub fn into_density(self) -> CMat {
        match self.repr {
            StateRepr::Pure(psi) => linalg::outer(&psi),
            StateRepr::Mixed(rho) => rho,
        }
    }

    /// `<A>` for a Hermitian sparse operator.
    pub fn expect(&self, a: &SparseOp) -> f64 {
        match &self.repr {
            StateRepr::Pure(psi) => linalg::expect_pure(psi, a).re,
            StateRepr::Mixed(rho) => linalg::expect_mixed(rho, a).re,
        }
    }

    /// `<A B>`.
    pub fn expect_product(&self, a: &SparseOp, b: &SparseOp) -> C64 {
        match &self.repr {
            StateRepr::Pure(psi) => {
                let apsi = linalg::sparse_matvec(a, psi);
                let bpsi = linalg::sparse_matvec(b, psi);
                // <ψ|A B|ψ> = <A†ψ|Bψ> and A is Hermitian
                apsi.dotc(&bpsi)
            }
            StateRepr::Mixed(rho) => {
                let b_rho = linalg::sparse_dense(b, rho);
                linalg::trace_sparse_dense(a, &b_rho)
            }
        }
    }

    /// Expectation of a dense operator.
    pub fn expect_dense(&self, a: &CMat) -> C64 {
        match &self.repr {
            StateRepr::Pure(psi) => psi.dotc(&(a * psi)),
            StateRepr::Mixed(rho) => rho
                .iter()
                .zip(a.transpose().iter())
                .map(|(r, x)| r * x)
                .sum(),
        }
    }

    /// `u^{⊗N} ρ u^{⊗N†}` for a single-particle unitary `u`.
    pub fn conjugate_local(&self, u: &CMat) -> Self {
        let layout = self.shape.layout();
        let repr = match &self.repr {
            StateRepr::Pure(psi) => {
                let mut out = psi.clone();
                layout.apply_all_sites(out.as_mut_slice(), u);
                StateRepr::Pure(out)
            }
            StateRepr::Mixed(rho) => StateRepr::Mixed(layout.conjugate_all_sites(rho, u)),
        };
        Self {
            shape: self.shape,
            repr,
        }
    }

    /// Global rotation `exp(-iθ n·J)`.
    pub fn rotated(&self, axis: &Vector3<f64>, theta: f64) -> Result<Self> {
        spin::check_unit(axis)?;
        let ops = spin::SpinOperators::new(self.shape.j)?;
        Ok(self.conjugate_local(&ops.rotation(axis, theta)))
    }

    /// Reduced density matrix on the listed sites, in the given order.
    pub fn reduced(&self, keep: &[usize]) -> CMat {
        let layout = self.shape.layout();
        match &self.repr {
            StateRepr::Pure(psi) => layout.partial_trace_pure(psi, keep),
            StateRepr::Mixed(rho) => layout.partial_trace(rho, keep),
        }
    }

    /// `w·self + (1−w)·other`.
    pub fn mix(&self, other: &QuantumState, w: f64) -> Result<Self> {
        if self.shape != other.shape {
            return Err(SpinSqError::ShapeMismatch("mixing states of different ensembles".into()));
        }
        if !(0.0..=1.0).contains(&w) {
            return Err(SpinSqError::InvalidArgument(format!("mixing weight {w} not in [0, 1]")));
        }
        let rho = self.density() * c(w) + other.density() * c(1.0 - w);
        Ok(Self::mixed_unchecked(self.shape, rho))
    }

    /// Re-checks the representation invariants.
    pub fn validate(&self) -> Result<()> {
        match &self.repr {
            StateRepr::Pure(psi) => Self::pure(self.shape, psi.clone()).map(|_| ()),
            StateRepr::Mixed(rho) => spin::check_density(rho, 1e-10),
        }
    }

    pub fn trace_distance(&self, other: &QuantumState) -> f64 {
        linalg::trace_distance(&self.density(), &other.density())
    }
}
