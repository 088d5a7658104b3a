//! First, second and modified second moments of the collective spin, the
//! moment matrices built from them, and averaged few-body reduced states.

use nalgebra::{Matrix3, Vector3};
use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;

use crate::error::{Result, SpinSqError};
use crate::linalg::{self, c, CMat};
use crate::spin::{Axis, Frame, NematicTensor, SpinOperators};
use crate::states::{CollectiveOps, EnsembleShape, QuantumState, StateRepr};

/// Frame-independent raw data from which every moment in every frame
/// follows: the mean spin, `C_kl = ½<J_k J_l + J_l J_k>` and the summed local
/// moments `L_kl = Σ_n ½<j_k j_l + j_l j_k>^{(n)}`, all in canonical axes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RawMoments {
    pub shape: EnsembleShape,
    pub jvec: Vector3<f64>,
    pub corr: Matrix3<f64>,
    pub local: Matrix3<f64>,
}

pub fn raw_moments(state: &QuantumState) -> Result<RawMoments> {
    let shape = *state.shape();
    let ops = CollectiveOps::for_shape(&shape)?;
    let mut jvec = Vector3::zeros();
    let mut corr = Matrix3::zeros();
    let mut local = Matrix3::zeros();
    match state.repr() {
        StateRepr::Pure(psi) => {
            let images: Vec<_> = Axis::ALL
                .iter()
                .map(|&a| linalg::sparse_matvec(ops.axis(a), psi))
                .collect();
            for k in 0..3 {
                jvec[k] = psi.dotc(&images[k]).re;
                for l in 0..3 {
                    corr[(k, l)] = images[k].dotc(&images[l]).re;
                }
            }
        }
        StateRepr::Mixed(rho) => {
            let images: Vec<CMat> = Axis::ALL
                .iter()
                .map(|&a| linalg::sparse_dense(ops.axis(a), rho))
                .collect();
            for k in 0..3 {
                jvec[k] = linalg::trace(&images[k]).re;
                for l in 0..3 {
                    corr[(k, l)] = linalg::trace_sparse_dense(ops.axis(Axis::from_index(k)), &images[l]).re;
                }
            }
        }
    }
    for k in 0..3 {
        for l in k..3 {
            let v = state.expect(&ops.local[k][l]);
            local[(k, l)] = v;
            local[(l, k)] = v;
        }
    }
    let corr = (corr + corr.transpose()) * 0.5;
    Ok(RawMoments {
        shape,
        jvec,
        corr,
        local,
    })
}

impl RawMoments {
    pub fn moment_set(&self, frame: &Frame) -> MomentSet {
        let jvec = frame.transform_vector(&self.jvec);
        let corr = frame.transform_tensor(&self.corr);
        let local = frame.transform_tensor(&self.local);
        MomentSet::from_parts(self.shape, *frame, jvec, corr.diagonal(), local.diagonal())
    }

    pub fn matrices(&self, frame: &Frame) -> MomentMatrices {
        let n = self.shape.n_f();
        let jvec = frame.transform_vector(&self.jvec);
        let corr = frame.transform_tensor(&self.corr);
        let gamma = corr - jvec * jvec.transpose();
        let nematic = NematicTensor::from_second_moments(&(self.local / n), self.shape.j()).in_frame(frame);
        let x = gamma * (n - 1.0) + corr - nematic.q * (n * n);
        MomentMatrices {
            shape: self.shape,
            frame: *frame,
            jvec,
            c: corr,
            gamma,
            q: nematic,
            x,
        }
    }
}

/// Mean spin, true and modified second moments, and (modified) variances
/// along the three axes of a frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentSet {
    pub shape: EnsembleShape,
    pub frame: Frame,
    pub jvec: Vector3<f64>,
    /// `<J_l²>`.
    pub k: Vector3<f64>,
    /// `Σ_n <(j_l^{(n)})²>`.
    pub m: Vector3<f64>,
    /// `K − M`.
    pub ktilde: Vector3<f64>,
    /// `<J_l²> − <J_l>²`.
    pub var: Vector3<f64>,
    /// `K̃_l − <J_l>²`.
    pub var_tilde: Vector3<f64>,
}

impl MomentSet {
    pub fn from_parts(
        shape: EnsembleShape,
        frame: Frame,
        jvec: Vector3<f64>,
        k: Vector3<f64>,
        m: Vector3<f64>,
    ) -> Self {
        let ktilde = k - m;
        let sq = jvec.component_mul(&jvec);
        Self {
            shape,
            frame,
            jvec,
            k,
            m,
            ktilde,
            var: k - sq,
            var_tilde: ktilde - sq,
        }
    }

    /// Reconstructs the set from `J` and `K̃` alone, assigning the local
    /// moments the isotropic value `N j(j+1)/3`. Every criterion depends
    /// on `J` and `K̃` only, so reports built from this are exact.
    pub fn from_modified(shape: EnsembleShape, jvec: Vector3<f64>, ktilde: Vector3<f64>) -> Self {
        let jv = shape.jv();
        let m = Vector3::repeat(shape.n_f() * jv * (jv + 1.0) / 3.0);
        Self::from_parts(shape, Frame::canonical(), jvec, ktilde + m, m)
    }

    pub fn j(&self, a: Axis) -> f64 {
        self.jvec[a.index()]
    }

    pub fn kt(&self, a: Axis) -> f64 {
        self.ktilde[a.index()]
    }

    pub fn vt(&self, a: Axis) -> f64 {
        self.var_tilde[a.index()]
    }

    pub fn v(&self, a: Axis) -> f64 {
        self.var[a.index()]
    }

    /// `Σ_l <J_l²> − (Σ_l <J̃_l²> + N j(j+1))`, zero for physical states.
    pub fn sum_rule_defect(&self) -> f64 {
        let jv = self.shape.jv();
        self.k.sum() - (self.ktilde.sum() + self.shape.n_f() * jv * (jv + 1.0))
    }
}

impl Serialize for MomentSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(21))?;
        map.serialize_entry("N", &self.shape.n())?;
        map.serialize_entry("two_j", &self.shape.j().twice())?;
        map.serialize_entry("frame", &self.frame.to_rows_array())?;
        let groups: [(&str, &Vector3<f64>); 6] = [
            ("J", &self.jvec),
            ("K", &self.k),
            ("M", &self.m),
            ("Ktilde", &self.ktilde),
            ("var", &self.var),
            ("var_tilde", &self.var_tilde),
        ];
        for (name, v) in groups {
            for a in Axis::ALL {
                map.serialize_entry(&format!("{name}_{a}"), &v[a.index()])?;
            }
        }
        map.end()
    }
}

pub fn moment_set(state: &QuantumState) -> Result<MomentSet> {
    Ok(raw_moments(state)?.moment_set(&Frame::canonical()))
}

pub fn moment_set_in(state: &QuantumState, frame: &Frame) -> Result<MomentSet> {
    Ok(raw_moments(state)?.moment_set(frame))
}

/// Correlation, covariance and nematic matrices plus
/// `X = (N−1)γ + C − N²Q`, all expressed in `frame`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentMatrices {
    pub shape: EnsembleShape,
    pub frame: Frame,
    pub jvec: Vector3<f64>,
    pub c: Matrix3<f64>,
    pub gamma: Matrix3<f64>,
    pub q: NematicTensor,
    pub x: Matrix3<f64>,
}

impl MomentMatrices {
    pub fn q0(&self) -> f64 {
        self.q.q0
    }

    pub fn x_eigenvalues(&self) -> Vector3<f64> {
        let mut ev = self.x.symmetric_eigenvalues();
        ev.as_mut_slice().sort_by(|a, b| a.total_cmp(b));
        ev
    }
}

pub fn moment_matrices(state: &QuantumState, frame: &Frame) -> Result<MomentMatrices> {
    Ok(raw_moments(state)?.matrices(frame))
}

/// One- and two-body states averaged over particles and ordered pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedStates {
    pub shape: EnsembleShape,
    pub rho_av1: CMat,
    pub rho_av2: CMat,
    /// `<j_l ⊗ j_l>_av2`.
    pub corr: Vector3<f64>,
    /// `<j_l ⊗ 1>_av2`.
    pub mean: Vector3<f64>,
    /// `Σ_l <j_l ⊗ j_l>_av2`.
    pub sigma: f64,
}

pub fn reduced_states(state: &QuantumState) -> Result<ReducedStates> {
    let shape = *state.shape();
    let n = shape.n();
    if n < 2 {
        return Err(SpinSqError::InvalidArgument(
            "two-body averages need at least two particles".into(),
        ));
    }
    let d = shape.d();
    let mut rho_av1 = CMat::zeros(d, d);
    for site in 0..n {
        rho_av1 += state.reduced(&[site]);
    }
    rho_av1 /= c(n as f64);

    let mut pairs = CMat::zeros(d * d, d * d);
    for a in 0..n {
        for b in (a + 1)..n {
            pairs += state.reduced(&[a, b]);
        }
    }
    let swapped = swap_sites(&pairs, d);
    let rho_av2 = (pairs + swapped) / c((n * (n - 1)) as f64);

    let ops = SpinOperators::new(shape.j())?;
    let id = CMat::identity(d, d);
    let mut corr = Vector3::zeros();
    let mut mean = Vector3::zeros();
    for a in Axis::ALL {
        let jl = ops.axis(a);
        let both = jl.kronecker(jl);
        let first = jl.kronecker(&id);
        corr[a.index()] = linalg::trace(&(&rho_av2 * both)).re;
        mean[a.index()] = linalg::trace(&(&rho_av2 * first)).re;
    }
    Ok(ReducedStates {
        shape,
        rho_av1,
        rho_av2,
        corr,
        mean,
        sigma: corr.sum(),
    })
}

/// `S ρ S` with `S` the swap of two `d`-level sites.
pub fn swap_sites(rho: &CMat, d: usize) -> CMat {
    let swap = |i: usize| (i % d) * d + i / d;
    CMat::from_fn(d * d, d * d, |r, col| rho[(swap(r), swap(col))])
}

impl ReducedStates {
    /// `<J̃_l²> = N(N−1)<j_l ⊗ j_l>_av2`.
    pub fn ktilde(&self) -> Vector3<f64> {
        let n = self.shape.n_f();
        self.corr * (n * (n - 1.0))
    }

    /// `(Δ̃J_l)² = N(N−1)<j_l ⊗ j_l>_av2 − N²<j_l ⊗ 1>²_av2`.
    pub fn var_tilde(&self) -> Vector3<f64> {
        let n = self.shape.n_f();
        self.ktilde() - self.mean.component_mul(&self.mean) * (n * n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin::HalfInt;
    use crate::states::{self, SingletVariant};

    fn close(a: &Vector3<f64>, b: &Vector3<f64>, tol: f64) -> bool {
        (a - b).norm() < tol
    }

    #[test]
    fn completely_mixed_moments() {
        let s = EnsembleShape::of(3, 2).unwrap();
        let m = moment_set(&states::completely_mixed(s)).unwrap();
        assert!(close(&m.ktilde, &Vector3::zeros(), 1e-12));
        assert!(close(&m.k, &Vector3::repeat(2.0), 1e-12));
        assert!(close(&m.m, &Vector3::repeat(2.0), 1e-12));
        assert!(m.sum_rule_defect().abs() < 1e-12);
    }

    #[test]
    fn singlet_second_moments_vanish() {
        let s = EnsembleShape::of(4, 1).unwrap();
        let m = moment_set(&states::singlet_state(s, SingletVariant::PairProduct).unwrap()).unwrap();
        assert!(close(&m.k, &Vector3::zeros(), 1e-12));
        assert!(close(&m.jvec, &Vector3::zeros(), 1e-12));
    }

    #[test]
    fn spin1_singlet_matrices_are_zero() {
        let s = EnsembleShape::of(2, 2).unwrap();
        let st = states::singlet_state(s, SingletVariant::Spin1Pair).unwrap();
        let mm = moment_matrices(&st, &Frame::canonical()).unwrap();
        assert!(mm.c.norm() < 1e-12 && mm.gamma.norm() < 1e-12);
        assert!(mm.q.q.norm() < 1e-12 && mm.x.norm() < 1e-12);
    }

    #[test]
    fn pure_and_mixed_paths_agree() {
        let s = EnsembleShape::of(3, 2).unwrap();
        let psi = crate::linalg::CVec::from_fn(27, |i, _| crate::linalg::C64::new((i as f64).sin(), (0.3 * i as f64).cos()));
        let pure = QuantumState::pure_normalized(s, psi).unwrap();
        let mixed = QuantumState::mixed(s, pure.density()).unwrap();
        let a = raw_moments(&pure).unwrap();
        let b = raw_moments(&mixed).unwrap();
        assert!((a.corr - b.corr).norm() < 1e-10);
        assert!((a.local - b.local).norm() < 1e-10);
        assert!((a.jvec - b.jvec).norm() < 1e-10);
    }

    #[test]
    fn qubit_singlet_two_body_values() {
        let s = EnsembleShape::of(2, 1).unwrap();
        let st = states::singlet_state(s, SingletVariant::PairProduct).unwrap();
        let r = reduced_states(&st).unwrap();
        assert!(close(&r.corr, &Vector3::repeat(-0.25), 1e-12));
        assert!((r.sigma + 0.75).abs() < 1e-12);
        assert!(reduced_states(&states::completely_mixed(EnsembleShape::of(1, 1).unwrap())).is_err());
    }

    #[test]
    fn two_body_ktilde_matches() {
        let s = EnsembleShape::of(3, 3).unwrap();
        let st = states::dicke_state(s, HalfInt::from_twice(1)).unwrap();
        let m = moment_set(&st).unwrap();
        let r = reduced_states(&st).unwrap();
        assert!(close(&m.ktilde, &r.ktilde(), 1e-9));
        assert!(close(&m.var_tilde, &r.var_tilde(), 1e-9));
        let pt = crate::linalg::Layout::new(4, 2).partial_trace(&r.rho_av2, &[0]);
        assert!(crate::linalg::max_abs(&(pt - &r.rho_av1)) < 1e-10);
    }

    #[test]
    fn serializes_flat() {
        let s = EnsembleShape::of(2, 1).unwrap();
        let m = moment_set(&states::completely_mixed(s)).unwrap();
        let v = serde_json::to_value(m).unwrap();
        let obj = v.as_object().unwrap();
        assert_eq!(obj.len(), 21);
        assert_eq!(obj["N"], 2);
        assert!(obj.contains_key("var_tilde_z") && obj.contains_key("Ktilde_x"));
    }
}
