//! Single-particle spin-j algebra.
//!
//! Matrices are written in the `j_z` eigenbasis with eigenvalues in
//! descending order `j, j-1, ..., -j`.

use std::fmt;
use std::str::FromStr;

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Result, SpinSqError};
use crate::linalg::{self, c, CMat, CVec, C64, ZERO};

/// Largest `2j` accepted when building single-particle operators.
pub const MAX_TWICE_SPIN: i32 = 200;

/// A half-integer stored as twice its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HalfInt {
    twice: i32,
}

impl HalfInt {
    pub const fn from_twice(twice: i32) -> Self {
        Self { twice }
    }

    /// A spin quantum number, `j ≥ 1/2`.
    pub fn spin(twice: i32) -> Result<Self> {
        if twice < 1 {
            return Err(SpinSqError::InvalidSpin(format!(
                "j must be at least 1/2, got {}",
                HalfInt::from_twice(twice)
            )));
        }
        if twice > MAX_TWICE_SPIN {
            return Err(SpinSqError::InvalidSpin(format!(
                "2j = {twice} exceeds the supported maximum {MAX_TWICE_SPIN}"
            )));
        }
        Ok(Self { twice })
    }

    pub fn half() -> Self {
        Self { twice: 1 }
    }

    pub fn twice(self) -> i32 {
        self.twice
    }

    pub fn value(self) -> f64 {
        self.twice as f64 / 2.0
    }

    pub fn is_integer(self) -> bool {
        self.twice % 2 == 0
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.twice % 2 == 0 {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

impl FromStr for HalfInt {
    type Err = SpinSqError;

    /// Accepts `3/2`, `1.5`, `-1/2` or `2`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || SpinSqError::Parse(format!("not a half-integer: {s:?}"));
        if let Some((num, den)) = s.split_once('/') {
            let num: i32 = num.trim().parse().map_err(|_| bad())?;
            let den: i32 = den.trim().parse().map_err(|_| bad())?;
            return match den {
                1 => Ok(Self::from_twice(2 * num)),
                2 => Ok(Self::from_twice(num)),
                _ => Err(bad()),
            };
        }
        let x: f64 = s.parse().map_err(|_| bad())?;
        let twice = (2.0 * x).round();
        if (2.0 * x - twice).abs() > 1e-9 {
            return Err(bad());
        }
        Ok(Self::from_twice(twice as i32))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Axis {
        Self::ALL[i % 3]
    }

    pub fn name(self) -> &'static str {
        match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        }
    }

    /// The other two axes in cyclic order: `x -> (y, z)`, `y -> (z, x)`, `z -> (x, y)`.
    pub fn others(self) -> (Axis, Axis) {
        let i = self.index();
        (Axis::from_index(i + 1), Axis::from_index(i + 2))
    }

    pub fn unit(self) -> Vector3<f64> {
        let mut v = Vector3::zeros();
        v[self.index()] = 1.0;
        v
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Axis {
    type Err = SpinSqError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "x" | "X" => Ok(Axis::X),
            "y" | "Y" => Ok(Axis::Y),
            "z" | "Z" => Ok(Axis::Z),
            other => Err(SpinSqError::Parse(format!("unknown axis {other:?}"))),
        }
    }
}

/// Right- or left-handed orthonormal triad; `axes[k]` replaces the k-th
/// canonical axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frame {
    axes: [Vector3<f64>; 3],
}

impl Frame {
    pub fn canonical() -> Self {
        Self {
            axes: [Axis::X.unit(), Axis::Y.unit(), Axis::Z.unit()],
        }
    }

    pub fn new(a: Vector3<f64>, b: Vector3<f64>, c: Vector3<f64>) -> Result<Self> {
        let axes = [a, b, c];
        for (i, u) in axes.iter().enumerate() {
            for (k, v) in axes.iter().enumerate() {
                let expected = if i == k { 1.0 } else { 0.0 };
                if (u.dot(v) - expected).abs() > 1e-10 {
                    return Err(SpinSqError::BadFrame(format!(
                        "axis {i} · axis {k} = {:.3e}",
                        u.dot(v)
                    )));
                }
            }
        }
        Ok(Self { axes })
    }

    /// Frame whose axes are the columns of an orthogonal matrix.
    pub fn from_columns(r: &Matrix3<f64>) -> Result<Self> {
        Self::new(
            r.column(0).into_owned(),
            r.column(1).into_owned(),
            r.column(2).into_owned(),
        )
    }

    pub fn axis(&self, a: Axis) -> Vector3<f64> {
        self.axes[a.index()]
    }

    pub fn axes(&self) -> &[Vector3<f64>; 3] {
        &self.axes
    }

    /// Matrix with the frame axes as rows; maps canonical components to
    /// frame components.
    pub fn rows(&self) -> Matrix3<f64> {
        Matrix3::from_rows(&[
            self.axes[0].transpose(),
            self.axes[1].transpose(),
            self.axes[2].transpose(),
        ])
    }

    /// Tensor components `T'_{ab} = a^T T b` in this frame.
    pub fn transform_tensor(&self, t: &Matrix3<f64>) -> Matrix3<f64> {
        let r = self.rows();
        r * t * r.transpose()
    }

    pub fn transform_vector(&self, v: &Vector3<f64>) -> Vector3<f64> {
        self.rows() * v
    }

    pub fn to_rows_array(&self) -> [[f64; 3]; 3] {
        self.axes.map(|a| [a[0], a[1], a[2]])
    }

    pub fn is_canonical(&self) -> bool {
        *self == Self::canonical()
    }
}

impl Default for Frame {
    fn default() -> Self {
        Self::canonical()
    }
}

pub fn check_unit(n: &Vector3<f64>) -> Result<()> {
    let norm = n.norm();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(SpinSqError::NotUnit { norm });
    }
    Ok(())
}

/// `jx, jy, jz` for one spin-j particle.
#[derive(Debug, Clone)]
pub struct SpinOperators {
    pub j: HalfInt,
    pub jx: CMat,
    pub jy: CMat,
    pub jz: CMat,
}

impl SpinOperators {
    pub fn new(j: HalfInt) -> Result<Self> {
        let j = HalfInt::spin(j.twice())?;
        let d = j.twice() as usize + 1;
        let jv = j.value();
        let m = |k: usize| jv - k as f64;
        let mut jz = CMat::zeros(d, d);
        let mut jplus = CMat::zeros(d, d);
        for k in 0..d {
            jz[(k, k)] = c(m(k));
            if k > 0 {
                // j+ |m_k> = sqrt(j(j+1) - m_k(m_k+1)) |m_k + 1>, and m_{k-1} = m_k + 1
                let mk = m(k);
                jplus[(k - 1, k)] = c((jv * (jv + 1.0) - mk * (mk + 1.0)).sqrt());
            }
        }
        let jminus = jplus.adjoint();
        let jx = (&jplus + &jminus) * c(0.5);
        let jy = (&jplus - &jminus) * C64::new(0.0, -0.5);
        Ok(Self { j, jx, jy, jz })
    }

    pub fn dim(&self) -> usize {
        self.jz.nrows()
    }

    pub fn axis(&self, a: Axis) -> &CMat {
        match a {
            Axis::X => &self.jx,
            Axis::Y => &self.jy,
            Axis::Z => &self.jz,
        }
    }

    /// `n · j`.
    pub fn component(&self, n: &Vector3<f64>) -> CMat {
        &self.jx * c(n[0]) + &self.jy * c(n[1]) + &self.jz * c(n[2])
    }

    pub fn raising(&self) -> CMat {
        &self.jx + &self.jy * linalg::I
    }

    pub fn lowering(&self) -> CMat {
        &self.jx - &self.jy * linalg::I
    }

    /// `exp(-i θ u·j)` for a unit rotation axis `u`.
    pub fn rotation(&self, u: &Vector3<f64>, theta: f64) -> CMat {
        linalg::unitary_from_generator(&self.component(u), theta)
    }

    /// A rotation `U` with `U† (to·j) U = from·j`, i.e. it carries a spin
    /// pointing along `from` to one pointing along `to`.
    pub fn aligning_rotation(&self, from: &Vector3<f64>, to: &Vector3<f64>) -> Result<CMat> {
        check_unit(from)?;
        check_unit(to)?;
        let cross = from.cross(to);
        let cos = from.dot(to).clamp(-1.0, 1.0);
        if cross.norm() < 1e-12 {
            if cos > 0.0 {
                return Ok(CMat::identity(self.dim(), self.dim()));
            }
            let helper = if from[0].abs() < 0.9 { Axis::X.unit() } else { Axis::Y.unit() };
            let perp = from.cross(&helper).normalize();
            return Ok(self.rotation(&perp, std::f64::consts::PI));
        }
        let axis = cross.normalize();
        Ok(self.rotation(&axis, cos.acos()))
    }

    pub fn expect(&self, rho: &CMat) -> Vector3<f64> {
        Vector3::new(
            linalg::trace(&(rho * &self.jx)).re,
            linalg::trace(&(rho * &self.jy)).re,
            linalg::trace(&(rho * &self.jz)).re,
        )
    }
}

pub fn spin_operators(j: HalfInt) -> Result<SpinOperators> {
    SpinOperators::new(j)
}

/// Highest-weight `jz` eigenstate rotated to point along `direction`.
pub fn spin_coherent_state(j: HalfInt, direction: &Vector3<f64>) -> Result<CVec> {
    let ops = SpinOperators::new(j)?;
    coherent_from_ops(&ops, direction)
}

pub(crate) fn coherent_from_ops(ops: &SpinOperators, direction: &Vector3<f64>) -> Result<CVec> {
    check_unit(direction)?;
    let mut top = CVec::from_element(ops.dim(), ZERO);
    top[0] = c(1.0);
    let u = ops.aligning_rotation(&Axis::Z.unit(), direction)?;
    Ok(u * top)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochVector {
    pub r: [f64; 3],
}

impl BlochVector {
    pub fn length(&self) -> f64 {
        self.r.iter().map(|x| x * x).sum::<f64>().sqrt()
    }
}

/// Traceless symmetric part of the averaged local second moments.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NematicTensor {
    pub q: Matrix3<f64>,
    pub q0: f64,
}

impl NematicTensor {
    /// From the symmetrized local second-moment matrix `½<j_k j_l + j_l j_k>`.
    pub fn from_second_moments(s: &Matrix3<f64>, j: HalfInt) -> Self {
        let jv = j.value();
        let q0 = jv * (jv + 1.0) / 3.0;
        Self {
            q: s - Matrix3::identity() * q0,
            q0,
        }
    }

    pub fn from_density(rho: &CMat, ops: &SpinOperators) -> Self {
        let mut s = Matrix3::zeros();
        for a in Axis::ALL {
            for b in Axis::ALL {
                let ab = ops.axis(a) * ops.axis(b);
                s[(a.index(), b.index())] = linalg::trace(&(rho * ab)).re;
            }
        }
        let sym = (s + s.transpose()) * 0.5;
        Self::from_second_moments(&sym, ops.j)
    }

    /// `<j_n²>` for a unit vector `n`.
    pub fn second_moment(&self, n: &Vector3<f64>) -> f64 {
        (n.transpose() * (self.q + Matrix3::identity() * self.q0) * n)[(0, 0)]
    }

    pub fn in_frame(&self, frame: &Frame) -> Self {
        Self {
            q: frame.transform_tensor(&self.q),
            q0: self.q0,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SingleParticleReport {
    pub bloch: BlochVector,
    pub nematic: NematicTensor,
    /// Absent when the transverse mean spin vanishes.
    pub xi_sj_av1: Option<f64>,
}

/// Bloch vector, nematic tensor and single-particle squeezing of an averaged
/// one-body state. `frame.axis(X)` is the squeezing direction; the other two
/// axes span the transverse plane.
pub fn single_particle_report(rho_av1: &CMat, frame: &Frame) -> Result<SingleParticleReport> {
    let d = rho_av1.nrows();
    if d < 2 || rho_av1.ncols() != d {
        return Err(SpinSqError::InvalidState(format!(
            "one-body matrix must be square with d ≥ 2, got {}x{}",
            rho_av1.nrows(),
            rho_av1.ncols()
        )));
    }
    check_density(rho_av1, 1e-10)?;
    let j = HalfInt::spin(d as i32 - 1)?;
    let ops = SpinOperators::new(j)?;
    let mean = ops.expect(rho_av1);
    let jv = j.value();
    let bloch = BlochVector {
        r: [mean[0] / jv, mean[1] / jv, mean[2] / jv],
    };
    let nematic = NematicTensor::from_density(rho_av1, &ops);
    let [n, p1, p2] = *frame.axes();
    let var_n = nematic.second_moment(&n) - n.dot(&mean).powi(2);
    let denom = p1.dot(&mean).powi(2) + p2.dot(&mean).powi(2);
    let xi_sj_av1 = (denom > 1e-14).then(|| 2.0 * jv * var_n / denom);
    Ok(SingleParticleReport {
        bloch,
        nematic,
        xi_sj_av1,
    })
}

/// Checks Hermiticity, unit trace and positivity.
pub fn check_density(rho: &CMat, tol: f64) -> Result<()> {
    let herm = linalg::hermiticity_defect(rho);
    if herm > tol {
        return Err(SpinSqError::InvalidState(format!(
            "matrix is not Hermitian (defect {herm:.3e})"
        )));
    }
    let tr = linalg::trace(rho);
    if (tr.re - 1.0).abs() > tol || tr.im.abs() > tol {
        return Err(SpinSqError::InvalidState(format!("trace is {tr}, expected 1")));
    }
    if !linalg::min_eigenvalue_at_least(rho, 1e-9) {
        let min = linalg::min_eigenvalue(rho);
        return Err(SpinSqError::InvalidState(format!(
            "smallest eigenvalue {min:.3e} is negative"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs;
    use approx::assert_abs_diff_eq;

    fn levi_civita(a: usize, b: usize, c: usize) -> f64 {
        match (a, b, c) {
            (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
            (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
            _ => 0.0,
        }
    }

    #[test]
    fn qubit_jz_is_half_pauli() {
        let ops = spin_operators(HalfInt::half()).unwrap();
        assert_abs_diff_eq!(ops.jz[(0, 0)].re, 0.5);
        assert_abs_diff_eq!(ops.jz[(1, 1)].re, -0.5);
    }

    #[test]
    fn spin_one_jx_entries() {
        let ops = spin_operators(HalfInt::from_twice(2)).unwrap();
        let s = 1.0 / 2f64.sqrt();
        assert_abs_diff_eq!(ops.jx[(0, 1)].re, s, epsilon = 1e-15);
        assert_abs_diff_eq!(ops.jx[(1, 2)].re, s, epsilon = 1e-15);
        assert_abs_diff_eq!(ops.jx[(1, 0)].re, s, epsilon = 1e-15);
    }

    #[test]
    fn algebra_holds_up_to_five_halves() {
        for twice in 1..=5 {
            let ops = spin_operators(HalfInt::from_twice(twice)).unwrap();
            let d = ops.dim();
            let jv = twice as f64 / 2.0;
            let casimir = &ops.jx * &ops.jx + &ops.jy * &ops.jy + &ops.jz * &ops.jz;
            let expected = CMat::identity(d, d) * c(jv * (jv + 1.0));
            assert!(max_abs(&(casimir - expected)) < 1e-12);
            for a in Axis::ALL {
                assert!(linalg::hermiticity_defect(ops.axis(a)) < 1e-12);
                for b in Axis::ALL {
                    let comm = ops.axis(a) * ops.axis(b) - ops.axis(b) * ops.axis(a);
                    let mut rhs = CMat::zeros(d, d);
                    for cc in Axis::ALL {
                        let eps = levi_civita(a.index(), b.index(), cc.index());
                        if eps != 0.0 {
                            rhs += ops.axis(cc) * C64::new(0.0, eps);
                        }
                    }
                    assert!(max_abs(&(comm - rhs)) < 1e-12);
                }
            }
        }
    }

    #[test]
    fn three_halves_casimir() {
        let ops = spin_operators("3/2".parse().unwrap()).unwrap();
        let casimir = &ops.jx * &ops.jx + &ops.jy * &ops.jy + &ops.jz * &ops.jz;
        assert!(max_abs(&(casimir - CMat::identity(4, 4) * c(3.75))) < 1e-12);
    }

    #[test]
    fn rejects_nonpositive_spin() {
        assert!(spin_operators(HalfInt::from_twice(0)).is_err());
        assert!(spin_operators(HalfInt::from_twice(-1)).is_err());
    }

    #[test]
    fn coherent_states() {
        let up = spin_coherent_state(HalfInt::half(), &Axis::Z.unit()).unwrap();
        assert_abs_diff_eq!(up[0].norm(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(up[1].norm(), 0.0, epsilon = 1e-12);

        let ops = spin_operators(HalfInt::from_twice(2)).unwrap();
        let psi = spin_coherent_state(ops.j, &Axis::X.unit()).unwrap();
        let mean = ops.expect(&linalg::outer(&psi));
        assert_abs_diff_eq!(mean[0], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(mean[1], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(mean[2], 0.0, epsilon = 1e-12);
    }

    #[test]
    fn tilted_coherent_state_matches_explicit_rotation() {
        // oracle: exp(-iθ jy) (1,0,0) with cos θ = 0.8, built from the
        // closed-form spin-1 Wigner small-d matrix column d^1_{m,1}(θ)
        let n = Vector3::new(0.6, 0.0, 0.8);
        let psi = spin_coherent_state(HalfInt::from_twice(2), &n).unwrap();
        let (cos, sin) = (0.8f64, 0.6f64);
        let expected = [(1.0 + cos) / 2.0, sin / 2f64.sqrt(), (1.0 - cos) / 2.0];
        for (k, e) in expected.iter().enumerate() {
            assert_abs_diff_eq!(psi[k].re, *e, epsilon = 1e-12);
            assert_abs_diff_eq!(psi[k].im, 0.0, epsilon = 1e-12);
        }
        let ops = spin_operators(HalfInt::from_twice(2)).unwrap();
        let mean = ops.expect(&linalg::outer(&psi));
        assert_abs_diff_eq!(mean.norm(), 1.0, epsilon = 1e-10);
    }

    #[test]
    fn rejects_non_unit_direction() {
        let err = spin_coherent_state(HalfInt::half(), &Vector3::new(1.0, 1.0, 0.0));
        assert!(matches!(err, Err(SpinSqError::NotUnit { .. })));
    }

    #[test]
    fn antiparallel_alignment() {
        let ops = spin_operators(HalfInt::from_twice(3)).unwrap();
        let psi = coherent_from_ops(&ops, &(-Axis::Z.unit())).unwrap();
        let mean = ops.expect(&linalg::outer(&psi));
        assert_abs_diff_eq!(mean[2], -1.5, epsilon = 1e-12);
    }

    #[test]
    fn isotropic_state_has_zero_nematic_tensor() {
        let ops = spin_operators(HalfInt::from_twice(2)).unwrap();
        let rho = CMat::identity(3, 3) * c(1.0 / 3.0);
        let rep = single_particle_report(&rho, &Frame::canonical()).unwrap();
        assert!(rep.nematic.q.abs().max() < 1e-12);
        assert!(rep.bloch.length() < 1e-12);
        assert!(rep.xi_sj_av1.is_none());
        let _ = ops;
    }

    #[test]
    fn m_zero_state_of_spin_one() {
        let mut rho = CMat::zeros(3, 3);
        rho[(1, 1)] = c(1.0);
        let frame = Frame::new(Axis::Z.unit(), Axis::X.unit(), Axis::Y.unit()).unwrap();
        let rep = single_particle_report(&rho, &frame).unwrap();
        // <jz²> = 0, so Q_zz = 0 - 2/3
        assert_abs_diff_eq!(rep.nematic.q[(2, 2)], -2.0 / 3.0, epsilon = 1e-12);
        assert!(rep.xi_sj_av1.is_none());
    }

    #[test]
    fn qubit_nematic_tensor_vanishes() {
        let psi = spin_coherent_state(HalfInt::half(), &Vector3::new(0.0, 0.6, 0.8)).unwrap();
        let rep = single_particle_report(&linalg::outer(&psi), &Frame::canonical()).unwrap();
        assert!(rep.nematic.q.abs().max() < 1e-12);
    }

    #[test]
    fn report_rejects_bad_inputs() {
        let rho = CMat::identity(3, 3);
        assert!(single_particle_report(&rho, &Frame::canonical()).is_err());
        assert!(Frame::new(Axis::X.unit(), Axis::X.unit(), Axis::Z.unit()).is_err());
    }

    #[test]
    fn half_int_parsing() {
        assert_eq!("3/2".parse::<HalfInt>().unwrap().twice(), 3);
        assert_eq!("1.5".parse::<HalfInt>().unwrap().twice(), 3);
        assert_eq!("2".parse::<HalfInt>().unwrap().twice(), 4);
        assert_eq!("-1/2".parse::<HalfInt>().unwrap().twice(), -1);
        assert!("1/3".parse::<HalfInt>().is_err());
        assert!("0.3".parse::<HalfInt>().is_err());
        assert_eq!(HalfInt::from_twice(3).to_string(), "3/2");
    }
}
