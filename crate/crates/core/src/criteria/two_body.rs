use super::{IndexSubset, Record};
use crate::error::{Result, SpinSqError};
use crate::moments::ReducedStates;
use crate::spin::HalfInt;
use crate::states::{check_dicke_label, EnsembleShape};

/// `N Σ_{l∈I} (<j_l⊗j_l> − <j_l⊗1>²) ≥ Σ − j²` on the averaged two-body
/// state. Its margin times `N(N−1)` is the margin of the subset form.
pub fn two_body_criterion(r: &ReducedStates, subset: IndexSubset) -> Result<Record> {
    if r.shape.n() < 2 {
        return Err(SpinSqError::InvalidArgument(
            "the two-body form needs at least two particles".into(),
        ));
    }
    let n = r.shape.n_f();
    let j = r.shape.jv();
    let lhs: f64 = subset
        .members()
        .map(|a| r.corr[a.index()] - r.mean[a.index()].powi(2))
        .sum::<f64>()
        * n;
    Ok(Record::new(format!("tq_{subset}"), Some(subset.to_string()), lhs, r.sigma - j * j))
}

/// `Σ_n <(j_z^{(n)})²>` in the symmetric Dicke state `|Nj, λ_z⟩`:
/// `N(N−1)j²/(2jN−1) + (2j−1)λ_z²/(2Nj−1)`.
pub fn dicke_local_moment(n: usize, j: HalfInt, lambda: HalfInt) -> Result<f64> {
    let shape = EnsembleShape::with_guard(n, j, usize::MAX)?;
    check_dicke_label(&shape, lambda)?;
    let nf = n as f64;
    let jv = j.value();
    let l = lambda.value();
    let two_nj_minus_1 = 2.0 * nf * jv - 1.0;
    if two_nj_minus_1 == 0.0 {
        // a single spin-1/2: the local moment is j²
        return Ok(jv * jv);
    }
    Ok(nf * (nf - 1.0) * jv * jv / two_nj_minus_1 + (2.0 * jv - 1.0) * l * l / two_nj_minus_1)
}
