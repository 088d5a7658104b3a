use std::fmt;
use std::str::FromStr;

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use super::operators::CollectiveOps;
use super::{EnsembleShape, QuantumState};
use crate::error::{Result, SpinSqError};
use crate::linalg::{self, c, CMat, CVec, SparseOp, ONE, ZERO};
use crate::spin::{self, Axis, HalfInt, SpinOperators};

/// Eigenvalues below this are treated as zero when extracting null spaces
/// and ground spaces.
const NULL_TOL: f64 = 1e-9;

/// Product of `N` identical spin coherent states along `direction`.
pub fn coherent_ensemble(shape: EnsembleShape, direction: &Vector3<f64>) -> Result<QuantumState> {
    let single = spin::spin_coherent_state(shape.j(), direction)?;
    let factors = vec![single; shape.n()];
    Ok(QuantumState::pure_unchecked(shape, linalg::kron_vecs(&factors)))
}

/// Product state `(√α |1⟩ + √(1−α) |0⟩)^{⊗N}` of spin-1 particles.
pub fn psi_alpha(n: usize, alpha: f64) -> Result<QuantumState> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(SpinSqError::InvalidArgument(format!("alpha = {alpha} not in [0, 1]")));
    }
    let shape = EnsembleShape::of(n, 2)?;
    let mut single = CVec::zeros(3);
    single[0] = c(alpha.sqrt());
    single[1] = c((1.0 - alpha).sqrt());
    Ok(QuantumState::pure_unchecked(shape, linalg::kron_vecs(&vec![single; n])))
}

/// Checks that `lambda` (as `2λ_z`) labels a maximal-spin Dicke state.
pub fn check_dicke_label(shape: &EnsembleShape, lambda: HalfInt) -> Result<()> {
    let top = shape.n() as i64 * shape.j().twice() as i64;
    let l = lambda.twice() as i64;
    if l.abs() > top {
        return Err(SpinSqError::InvalidArgument(format!(
            "|λ_z| = {lambda} exceeds N j = {}",
            HalfInt::from_twice(top as i32)
        )));
    }
    if (top - l) % 2 != 0 {
        return Err(SpinSqError::InvalidArgument(format!(
            "λ_z = {lambda} has the wrong parity for N = {}, j = {}",
            shape.n(),
            shape.j()
        )));
    }
    Ok(())
}

/// Symmetric Dicke state `|Nj, λ_z⟩`, obtained by lowering the fully
/// polarized product state.
pub fn dicke_state(shape: EnsembleShape, lambda: HalfInt) -> Result<QuantumState> {
    check_dicke_label(&shape, lambda)?;
    let ops = CollectiveOps::for_shape(&shape)?;
    let steps = (shape.n() as i64 * shape.j().twice() as i64 - lambda.twice() as i64) / 2;
    let mut psi = CVec::zeros(shape.dim());
    psi[0] = ONE;
    for _ in 0..steps {
        psi = linalg::sparse_matvec(&ops.lowering, &psi);
        let norm = psi.norm();
        psi /= c(norm);
    }
    Ok(QuantumState::pure_unchecked(shape, psi))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SingletVariant {
    /// Qubit singlets on neighbouring pairs `(0,1), (2,3), …`.
    PairProduct,
    /// Permutation average of [`SingletVariant::PairProduct`].
    PermutationInvariant,
    /// The symmetric two-qutrit singlet.
    Spin1Pair,
    /// Normalized projector onto the null space of `J²`.
    Projector,
}

impl SingletVariant {
    /// A sensible variant for the given ensemble.
    pub fn default_for(shape: &EnsembleShape) -> Self {
        if shape.j().twice() == 1 && shape.n() % 2 == 0 {
            SingletVariant::PermutationInvariant
        } else if shape.j().twice() == 2 && shape.n() == 2 {
            SingletVariant::Spin1Pair
        } else {
            SingletVariant::Projector
        }
    }
}

impl fmt::Display for SingletVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SingletVariant::PairProduct => "pair_product",
            SingletVariant::PermutationInvariant => "permutation_invariant",
            SingletVariant::Spin1Pair => "spin1_pair",
            SingletVariant::Projector => "projector",
        })
    }
}

impl FromStr for SingletVariant {
    type Err = SpinSqError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pair_product" | "pairs" => Ok(SingletVariant::PairProduct),
            "permutation_invariant" | "pi" => Ok(SingletVariant::PermutationInvariant),
            "spin1_pair" => Ok(SingletVariant::Spin1Pair),
            "projector" => Ok(SingletVariant::Projector),
            other => Err(SpinSqError::Parse(format!("unknown singlet variant '{other}'"))),
        }
    }
}

/// Largest `N` for which the permutation-invariant singlet is built by
/// summing over all `N!` permutations.
const EXPLICIT_PERMUTATION_MAX_N: usize = 6;

pub fn singlet_state(shape: EnsembleShape, variant: SingletVariant) -> Result<QuantumState> {
    let qubit_even = shape.j().twice() == 1 && shape.n() % 2 == 0;
    match variant {
        SingletVariant::PairProduct => {
            if !qubit_even {
                return Err(SpinSqError::InvalidArgument(
                    "pair_product singlet needs j = 1/2 and even N".into(),
                ));
            }
            Ok(QuantumState::pure_unchecked(shape, pair_product_vector(shape.n())))
        }
        SingletVariant::PermutationInvariant => {
            if !qubit_even {
                return Err(SpinSqError::InvalidArgument(
                    "permutation_invariant singlet needs j = 1/2 and even N".into(),
                ));
            }
            if shape.n() <= EXPLICIT_PERMUTATION_MAX_N {
                Ok(QuantumState::mixed_unchecked(shape, permutation_average(&shape)))
            } else {
                singlet_projector(shape)
            }
        }
        SingletVariant::Spin1Pair => {
            if shape.j().twice() != 2 || shape.n() != 2 {
                return Err(SpinSqError::InvalidArgument(
                    "spin1_pair singlet needs j = 1 and N = 2".into(),
                ));
            }
            let mut psi = CVec::zeros(9);
            let s = 1.0 / 3f64.sqrt();
            // basis index = 3·(m_1 digit) + (m_2 digit), digits 0,1,2 ↔ m = 1,0,−1
            psi[2] = c(s);
            psi[4] = c(-s);
            psi[6] = c(s);
            Ok(QuantumState::pure_unchecked(shape, psi))
        }
        SingletVariant::Projector => singlet_projector(shape),
    }
}

fn pair_product_vector(n: usize) -> CVec {
    let s = 1.0 / 2f64.sqrt();
    let pair = CVec::from_vec(vec![ZERO, c(s), c(-s), ZERO]);
    linalg::kron_vecs(&vec![pair; n / 2])
}

fn permutation_average(shape: &EnsembleShape) -> CMat {
    let layout = shape.layout();
    let psi = pair_product_vector(shape.n());
    let perms = permutations(shape.n());
    let mut rho = CMat::zeros(shape.dim(), shape.dim());
    let mut permuted = CVec::zeros(shape.dim());
    for perm in &perms {
        let map = layout.permutation_matrix_indices(perm);
        for (idx, &target) in map.iter().enumerate() {
            permuted[target] = psi[idx];
        }
        rho += linalg::outer(&permuted);
    }
    rho / c(perms.len() as f64)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn extend(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for k in 0..used.len() {
            if !used[k] {
                used[k] = true;
                prefix.push(k);
                extend(prefix, used, out);
                prefix.pop();
                used[k] = false;
            }
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::with_capacity(n), &mut vec![false; n], &mut out);
    out
}

/// Orthonormal basis of the `J² = 0` subspace, as columns.
pub fn singlet_subspace(shape: &EnsembleShape) -> Result<CMat> {
    let ops = CollectiveOps::for_shape(shape)?;
    let layout = shape.layout();
    let twice_j = shape.j().twice() as i64;
    // A vector has J² = 0 iff it lies in the M = 0 sector and J₊ annihilates it.
    let sector: Vec<usize> = (0..shape.dim())
        .filter(|&idx| {
            let twice_m: i64 = layout
                .digits(idx)
                .iter()
                .map(|&k| twice_j - 2 * k as i64)
                .sum();
            twice_m == 0
        })
        .collect();
    if sector.is_empty() {
        return Err(SpinSqError::InvalidArgument(format!(
            "no singlet exists for N = {}, j = {}",
            shape.n(),
            shape.j()
        )));
    }
    let position: std::collections::HashMap<usize, usize> =
        sector.iter().enumerate().map(|(p, &i)| (i, p)).collect();
    let s = sector.len();
    let mut a = CMat::zeros(shape.dim(), s);
    for (row, col, v) in ops.raising.triplet_iter() {
        if let Some(&p) = position.get(&col) {
            a[(row, p)] += *v;
        }
    }
    let gram = a.adjoint() * &a;
    let (vals, vecs) = linalg::hermitian_eigh(&gram);
    let null: Vec<usize> = (0..s).filter(|&k| vals[k].abs() < NULL_TOL).collect();
    if null.is_empty() {
        return Err(SpinSqError::InvalidArgument(format!(
            "no singlet exists for N = {}, j = {}",
            shape.n(),
            shape.j()
        )));
    }
    let mut basis = CMat::zeros(shape.dim(), null.len());
    for (out_col, &k) in null.iter().enumerate() {
        for (p, &idx) in sector.iter().enumerate() {
            basis[(idx, out_col)] = vecs[(p, k)];
        }
    }
    Ok(basis)
}

fn singlet_projector(shape: EnsembleShape) -> Result<QuantumState> {
    let basis = singlet_subspace(&shape)?;
    let rank = basis.ncols() as f64;
    let rho = &basis * basis.adjoint() / c(rank);
    Ok(QuantumState::mixed_unchecked(shape, rho))
}

/// `exp(−H/T) / Tr`, with the exponent shifted by the ground energy.
pub fn thermal_state(shape: EnsembleShape, h: &CMat, temperature: f64) -> Result<QuantumState> {
    if !(temperature > 0.0) || !temperature.is_finite() {
        return Err(SpinSqError::InvalidArgument(format!(
            "temperature must be positive and finite, got {temperature}"
        )));
    }
    check_hamiltonian(&shape, h)?;
    let (vals, vecs) = linalg::hermitian_eigh(h);
    let e0 = vals[0];
    let weights: Vec<f64> = vals.iter().map(|e| (-(e - e0) / temperature).exp()).collect();
    let z: f64 = weights.iter().sum();
    let mut rho = CMat::zeros(shape.dim(), shape.dim());
    for (k, w) in weights.iter().enumerate() {
        let v = vecs.column(k);
        rho += v * v.adjoint() * c(w / z);
    }
    Ok(QuantumState::mixed_unchecked(shape, rho))
}

/// Equal mixture over the ground space of `h` (eigenvalues within `tol`
/// of the minimum), together with the ground-space dimension.
pub fn ground_space_state(shape: EnsembleShape, h: &CMat, tol: f64) -> Result<(QuantumState, usize)> {
    check_hamiltonian(&shape, h)?;
    let (vals, vecs) = linalg::hermitian_eigh(h);
    let e0 = vals[0];
    let ground: Vec<usize> = (0..vals.len()).filter(|&k| vals[k] - e0 <= tol).collect();
    let mut rho = CMat::zeros(shape.dim(), shape.dim());
    for &k in &ground {
        let v = vecs.column(k);
        rho += v * v.adjoint();
    }
    rho /= c(ground.len() as f64);
    Ok((QuantumState::mixed_unchecked(shape, rho), ground.len()))
}

/// One pure vector of the ground space (the lowest eigenvector).
pub fn ground_state_vector(shape: EnsembleShape, h: &CMat) -> Result<QuantumState> {
    check_hamiltonian(&shape, h)?;
    let (_, vecs) = linalg::hermitian_eigh(h);
    Ok(QuantumState::pure_unchecked(shape, vecs.column(0).into_owned()))
}

fn check_hamiltonian(shape: &EnsembleShape, h: &CMat) -> Result<()> {
    if h.nrows() != shape.dim() || h.ncols() != shape.dim() {
        return Err(SpinSqError::ShapeMismatch(format!(
            "{}x{} Hamiltonian for an ensemble of dimension {}",
            h.nrows(),
            h.ncols(),
            shape.dim()
        )));
    }
    let defect = linalg::hermiticity_defect(h);
    if defect > 1e-10 {
        return Err(SpinSqError::InvalidArgument(format!(
            "Hamiltonian is not Hermitian (defect {defect:e})"
        )));
    }
    Ok(())
}

fn squared(a: &SparseOp) -> CMat {
    linalg::sparse_dense(a, &linalg::sparse_to_dense(a))
}

/// `J_x² + J_y² + J_z²`.
pub fn total_spin_squared(shape: &EnsembleShape) -> Result<CMat> {
    let ops = CollectiveOps::for_shape(shape)?;
    Ok(Axis::ALL.iter().map(|&a| squared(ops.axis(a))).fold(
        CMat::zeros(shape.dim(), shape.dim()),
        |acc, m| acc + m,
    ))
}

/// `J_x² + J_z²/4 + 3J_z/4`.
pub fn h5_hamiltonian(shape: &EnsembleShape) -> Result<CMat> {
    let ops = CollectiveOps::for_shape(shape)?;
    let jz = linalg::sparse_to_dense(ops.axis(Axis::Z));
    Ok(squared(ops.axis(Axis::X)) + squared(ops.axis(Axis::Z)) * c(0.25) + jz * c(0.75))
}

pub fn completely_mixed(shape: EnsembleShape) -> QuantumState {
    let d = shape.dim();
    QuantumState::mixed_unchecked(shape, CMat::identity(d, d) / c(d as f64))
}

/// `(1−p)ρ + p·1/D`.
pub fn mix_with_white_noise(state: &QuantumState, p: f64) -> Result<QuantumState> {
    if !(0.0..=1.0).contains(&p) {
        return Err(SpinSqError::InvalidArgument(format!("noise weight {p} not in [0, 1]")));
    }
    if p == 0.0 {
        return Ok(state.clone());
    }
    completely_mixed(*state.shape()).mix(state, p)
}

/// Uniform average of `exp(−iφ n·J) ρ exp(iφ n·J)` over `φ = 2πk/steps`.
pub fn rotated_average(state: &QuantumState, axis: &Vector3<f64>, steps: usize) -> Result<QuantumState> {
    if steps < 2 {
        return Err(SpinSqError::InvalidArgument(format!("steps must be at least 2, got {steps}")));
    }
    spin::check_unit(axis)?;
    let shape = *state.shape();
    let ops = SpinOperators::new(shape.j())?;
    let rho = state.density();
    let layout = shape.layout();
    let mut acc = CMat::zeros(shape.dim(), shape.dim());
    for k in 0..steps {
        let phi = 2.0 * std::f64::consts::PI * k as f64 / steps as f64;
        let u = ops.rotation(axis, phi);
        acc += layout.conjugate_all_sites(&rho, &u);
    }
    Ok(QuantumState::mixed_unchecked(shape, acc / c(steps as f64)))
}

/// Target mean spin for the separable states realizing the polytope vertices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtremalSpec {
    pub shape: EnsembleShape,
    pub jvec: Vector3<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Vertex {
    A(Axis),
    B(Axis),
    BPrime(Axis),
}

impl Vertex {
    pub fn axis(self) -> Axis {
        match self {
            Vertex::A(a) | Vertex::B(a) | Vertex::BPrime(a) => a,
        }
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Vertex::A(a) => write!(f, "A_{a}"),
            Vertex::B(a) => write!(f, "B_{a}"),
            Vertex::BPrime(a) => write!(f, "Bprime_{a}"),
        }
    }
}

/// Derived scalars of an [`ExtremalSpec`] for one axis `k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtremalParams {
    pub kappa: f64,
    /// `c_k`, the length of the `k` component of the two coherent directions.
    pub c: f64,
    /// Weight of the `+` direction.
    pub p: f64,
    /// `N p`.
    pub np: f64,
    /// `⌊N p⌋` and `N p − ⌊N p⌋`.
    pub m: usize,
    pub eps: f64,
    pub plus: Vector3<f64>,
    pub minus: Vector3<f64>,
}

/// Tolerance for treating `N p` as an integer.
const INTEGER_TOL: f64 = 1e-9;

impl ExtremalSpec {
    pub fn new(shape: EnsembleShape, jvec: Vector3<f64>) -> Result<Self> {
        let big_j = shape.max_spin();
        if jvec.norm() > big_j * (1.0 + 1e-12) {
            return Err(SpinSqError::InvalidArgument(format!(
                "|J| = {} exceeds N j = {big_j}",
                jvec.norm()
            )));
        }
        Ok(Self { shape, jvec })
    }

    pub fn params(&self, k: Axis) -> ExtremalParams {
        let n = self.shape.n_f();
        let big_j = self.shape.max_spin();
        let (l, m) = k.others();
        let jl = self.jvec[l.index()] / big_j;
        let jm = self.jvec[m.index()] / big_j;
        let jk = self.jvec[k.index()] / big_j;
        let c2 = (1.0 - jl * jl - jm * jm).max(0.0);
        let cx = c2.sqrt();
        let p = if cx < 1e-12 {
            0.5
        } else {
            (0.5 * (1.0 + jk / cx)).clamp(0.0, 1.0)
        };
        let mut plus = Vector3::zeros();
        plus[k.index()] = cx;
        plus[l.index()] = jl;
        plus[m.index()] = jm;
        let mut minus = plus;
        minus[k.index()] = -cx;
        let np = n * p;
        let mut m_floor = np.floor();
        if np - m_floor > 1.0 - INTEGER_TOL {
            m_floor += 1.0;
        }
        let eps = (np - m_floor).max(0.0);
        ExtremalParams {
            kappa: (n - 1.0) / n,
            c: cx,
            p,
            np,
            m: m_floor as usize,
            eps: if eps < INTEGER_TOL { 0.0 } else { eps },
            plus: safe_unit(plus),
            minus: safe_unit(minus),
        }
    }
}

fn safe_unit(v: Vector3<f64>) -> Vector3<f64> {
    let n = v.norm();
    if n == 0.0 {
        Vector3::z()
    } else {
        v / n
    }
}

/// Separable state whose modified second moments sit at (or, for
/// `BPrime`, near) the requested vertex.
pub fn extremal_state(spec: &ExtremalSpec, which: Vertex) -> Result<QuantumState> {
    let shape = spec.shape;
    let prm = spec.params(which.axis());
    let ops = SpinOperators::new(shape.j())?;
    let up = spin::coherent_from_ops(&ops, &prm.plus)?;
    let down = spin::coherent_from_ops(&ops, &prm.minus)?;
    let n = shape.n();
    let product = |m: usize| -> CVec {
        let mut factors = vec![up.clone(); m];
        factors.extend(std::iter::repeat(down.clone()).take(n - m));
        linalg::kron_vecs(&factors)
    };
    match which {
        Vertex::A(_) => {
            let plus = linalg::outer(&product(n)) * c(prm.p);
            let minus = linalg::outer(&product(0)) * c(1.0 - prm.p);
            Ok(QuantumState::mixed_unchecked(shape, plus + minus))
        }
        Vertex::B(_) => {
            if prm.eps != 0.0 {
                return Err(SpinSqError::InvalidArgument(format!(
                    "N p = {} is not an integer; request the Bprime vertex instead",
                    prm.np
                )));
            }
            Ok(QuantumState::pure_unchecked(shape, product(prm.m)))
        }
        Vertex::BPrime(_) => {
            if prm.eps == 0.0 {
                return Ok(QuantumState::pure_unchecked(shape, product(prm.m)));
            }
            let lower = linalg::outer(&product(prm.m)) * c(1.0 - prm.eps);
            let upper = linalg::outer(&product(prm.m + 1)) * c(prm.eps);
            Ok(QuantumState::mixed_unchecked(shape, lower + upper))
        }
    }
}
