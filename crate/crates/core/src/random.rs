//! Random states and frames for sweeps and property checks.

use nalgebra::{Quaternion, UnitQuaternion, Vector3};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::Result;
use crate::linalg::{self, c, CMat, CVec, C64};
use crate::spin::{Frame, HalfInt};
use crate::states::{self, EnsembleShape, QuantumState};

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    StandardNormal.sample(rng)
}

fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(gaussian(rng), gaussian(rng))
}

pub fn random_unit<R: Rng + ?Sized>(rng: &mut R) -> Vector3<f64> {
    loop {
        let v = Vector3::new(gaussian(rng), gaussian(rng), gaussian(rng));
        let n = v.norm();
        if n > 1e-9 {
            return v / n;
        }
    }
}

/// Uniformly distributed proper rotation, returned as a frame.
pub fn random_frame<R: Rng + ?Sized>(rng: &mut R) -> Frame {
    let q = UnitQuaternion::from_quaternion(Quaternion::new(
        gaussian(rng),
        gaussian(rng),
        gaussian(rng),
        gaussian(rng),
    ));
    Frame::from_columns(q.to_rotation_matrix().matrix()).expect("rotation matrices are orthonormal")
}

/// Haar-random normalized vector of length `dim`.
pub fn random_vector<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CVec {
    let v = CVec::from_fn(dim, |_, _| complex_gaussian(rng));
    let n = v.norm();
    v / c(n)
}

pub fn random_pure<R: Rng + ?Sized>(shape: EnsembleShape, rng: &mut R) -> Result<QuantumState> {
    QuantumState::pure(shape, random_vector(shape.dim(), rng))
}

/// `G G† / Tr` with a `dim × rank` Gaussian `G`.
pub fn random_density<R: Rng + ?Sized>(dim: usize, rank: usize, rng: &mut R) -> CMat {
    let g = CMat::from_fn(dim, rank.max(1), |_, _| complex_gaussian(rng));
    let rho = &g * g.adjoint();
    let tr = linalg::trace(&rho).re;
    rho / c(tr)
}

pub fn random_mixed<R: Rng + ?Sized>(shape: EnsembleShape, rank: usize, rng: &mut R) -> Result<QuantumState> {
    QuantumState::mixed(shape, random_density(shape.dim(), rank, rng))
}

/// Pure or mixed with equal odds; mixed states get a random rank.
pub fn random_state<R: Rng + ?Sized>(shape: EnsembleShape, rng: &mut R) -> Result<QuantumState> {
    if rng.random_bool(0.5) {
        random_pure(shape, rng)
    } else {
        let rank = rng.random_range(1..=shape.dim().min(8));
        random_mixed(shape, rank, rng)
    }
}

/// Product of independent Haar-random single-particle states.
pub fn random_product<R: Rng + ?Sized>(shape: EnsembleShape, rng: &mut R) -> Result<QuantumState> {
    let factors: Vec<CVec> = (0..shape.n()).map(|_| random_vector(shape.d(), rng)).collect();
    QuantumState::pure(shape, linalg::kron_vecs(&factors))
}

/// Mixture of `terms` random product states with random weights.
pub fn random_separable<R: Rng + ?Sized>(
    shape: EnsembleShape,
    terms: usize,
    rng: &mut R,
) -> Result<QuantumState> {
    let weights: Vec<f64> = (0..terms.max(1)).map(|_| rng.random::<f64>() + 1e-3).collect();
    let total: f64 = weights.iter().sum();
    let mut rho = CMat::zeros(shape.dim(), shape.dim());
    for w in weights {
        let factors: Vec<CVec> = (0..shape.n()).map(|_| random_vector(shape.d(), rng)).collect();
        rho += linalg::outer(&linalg::kron_vecs(&factors)) * c(w / total);
    }
    QuantumState::mixed(shape, rho)
}

/// Random superposition of the symmetric Dicke states.
pub fn random_symmetric_pure<R: Rng + ?Sized>(shape: EnsembleShape, rng: &mut R) -> Result<QuantumState> {
    let top = shape.n() as i32 * shape.j().twice();
    let mut psi = CVec::zeros(shape.dim());
    for twice_lambda in (-top..=top).step_by(2) {
        let dicke = states::dicke_state(shape, HalfInt::from_twice(twice_lambda))?;
        if let states::StateRepr::Pure(v) = dicke.repr() {
            psi += v * complex_gaussian(rng);
        }
    }
    QuantumState::pure_normalized(shape, psi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn frames_are_proper_rotations() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let r = random_frame(&mut rng).rows();
            assert!((r.determinant() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn states_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let s = EnsembleShape::of(3, 1).unwrap();
        random_separable(s, 6, &mut rng).unwrap().validate().unwrap();
        random_state(s, &mut rng).unwrap().validate().unwrap();
        random_product(s, &mut rng).unwrap().validate().unwrap();
        let sym = random_symmetric_pure(s, &mut rng).unwrap();
        let perm = s.layout().permutation_matrix_indices(&[1, 0, 2]);
        let rho = sym.density();
        for (i, &pi) in perm.iter().enumerate() {
            for (k, &pk) in perm.iter().enumerate() {
                assert!((rho[(pi, pk)] - rho[(i, k)]).norm() < 1e-12);
            }
        }
    }
}
