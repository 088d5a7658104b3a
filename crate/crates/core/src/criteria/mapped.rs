use nalgebra::Vector3;

use super::{CriteriaReport, Record};
use crate::error::{Result, SpinSqError};
use crate::moments::MomentSet;
use crate::spin::Axis;

/// First and modified second moments rescaled to qubit units:
/// `<J_l>/(2j)` and `<J̃_l²>/(4j²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MappedMoments {
    pub n: f64,
    pub jvec: Vector3<f64>,
    pub ktilde: Vector3<f64>,
}

impl MappedMoments {
    pub fn from_moments(m: &MomentSet) -> Self {
        let j = m.shape.jv();
        Self {
            n: m.shape.n_f(),
            jvec: m.jvec / (2.0 * j),
            ktilde: m.ktilde / (4.0 * j * j),
        }
    }

    /// `<J̃_l²> − <J_l>²` in qubit units.
    pub fn var_tilde(&self, a: Axis) -> f64 {
        self.ktilde[a.index()] - self.jvec[a.index()].powi(2)
    }
}

/// Applies a separability condition for qubits, given as `(lhs, rhs)` with
/// `lhs ≥ rhs` for separable states, to spin-j moments.
pub fn mapped_qubit_condition(
    m: &MomentSet,
    name: impl Into<String>,
    axes: Option<String>,
    condition: impl Fn(&MappedMoments) -> (f64, f64),
) -> Record {
    let (lhs, rhs) = condition(&MappedMoments::from_moments(m));
    Record::new(name, axes, lhs, rhs)
}

/// Qubit form `N(N−1)/4 ≥ √((K̃_l + K̃_k)² + (N−1)²<J_n>²) − K̃_n`.
pub fn kc05e_qubit(q: &MappedMoments, n_axis: Axis) -> (f64, f64) {
    let (k, l) = n_axis.others();
    let n = q.n;
    let kt = |a: Axis| q.ktilde[a.index()];
    let root = ((kt(l) + kt(k)).powi(2) + (n - 1.0).powi(2) * q.jvec[n_axis.index()].powi(2)).sqrt();
    (n * (n - 1.0) / 4.0, root - kt(n_axis))
}

/// `N(N−1)j² ≥ √((K̃_l + K̃_k)² + 4(N−1)²j²<J_n>²) − K̃_n`.
pub fn qudkcl_record(m: &MomentSet, n_axis: Axis) -> Record {
    let n = m.shape.n_f();
    let j = m.shape.jv();
    let (k, l) = n_axis.others();
    let root = ((m.kt(l) + m.kt(k)).powi(2) + 4.0 * (n - 1.0).powi(2) * j * j * m.j(n_axis).powi(2)).sqrt();
    Record::new(
        format!("qudkcl_{n_axis}"),
        Some(format!("n={n_axis}")),
        n * (n - 1.0) * j * j,
        root - m.kt(n_axis),
    )
}

fn plane_label(third: Axis) -> String {
    let (k, l) = third.others();
    format!("{k}{l}")
}

/// `(Δ̃J_k)² + (Δ̃J_l)² ≥ −Nj²` for the plane orthogonal to `third`.
fn planarjj_record(m: &MomentSet, third: Axis) -> Record {
    let (k, l) = third.others();
    let n = m.shape.n_f();
    let j = m.shape.jv();
    let plane = plane_label(third);
    Record::new(format!("planarjj_{plane}"), Some(plane), m.vt(k) + m.vt(l), -n * j * j)
}

/// `N [(Δ̃J_k)² + Nj²] ≥ <J_l>² + <J_m>²`, the spin-j form of the original
/// squeezing condition.
fn xi_s_mapped_record(m: &MomentSet, k: Axis) -> Record {
    let (l, mm) = k.others();
    let n = m.shape.n_f();
    let j = m.shape.jv();
    Record::new(
        format!("xi_s_mapped_{k}"),
        Some(format!("k={k},l={l},m={mm}")),
        n * (m.vt(k) + n * j * j),
        m.j(l).powi(2) + m.j(mm).powi(2),
    )
}

/// Constant `C_j` of the planar variance bound, known for `j ∈ {1/2, 1}`.
pub fn planar_constant(twice_j: i32) -> Result<f64> {
    match twice_j {
        1 => Ok(0.25),
        2 => Ok(7.0 / 16.0),
        t => Err(SpinSqError::Unsupported(format!(
            "no planar-squeezing constant is available for j = {}",
            crate::spin::HalfInt::from_twice(t)
        ))),
    }
}

/// `(ΔJ_k)² + (ΔJ_l)² ≥ N C_j` for the three coordinate planes.
pub fn planar_records(m: &MomentSet) -> Result<Vec<Record>> {
    let c = planar_constant(m.shape.j().twice())?;
    let n = m.shape.n_f();
    Ok(Axis::ALL
        .iter()
        .map(|&third| {
            let (k, l) = third.others();
            let plane = plane_label(third);
            Record::new(format!("planar_{plane}"), Some(plane), m.v(k) + m.v(l), n * c)
        })
        .collect())
}

/// Conditions carried over from qubits: the two-body-entanglement bound,
/// the planar bound in modified variances, the original squeezing
/// condition, and the planar variance bound where its constant is known.
pub fn mapped_criteria(m: &MomentSet) -> CriteriaReport {
    let mut rep = CriteriaReport::default();
    for a in Axis::ALL {
        rep.push(qudkcl_record(m, a));
    }
    for a in Axis::ALL {
        rep.push(planarjj_record(m, a));
    }
    for a in Axis::ALL {
        rep.push(xi_s_mapped_record(m, a));
    }
    if let Ok(records) = planar_records(m) {
        for r in records {
            rep.push(r);
        }
    }
    rep
}
