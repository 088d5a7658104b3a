use super::{CriteriaReport, Record};
use crate::moments::MomentMatrices;

/// The four conditions written with traces and extreme eigenvalues, so no
/// choice of axes is involved.
pub fn evaluate_coordinate_free(mm: &MomentMatrices) -> CriteriaReport {
    let n = mm.shape.n_f();
    let j = mm.shape.jv();
    let nj1 = n * j * (n * j + 1.0);
    let tr_c = mm.c.trace();
    let tr_g = mm.gamma.trace();
    let q0_term = n * n * mm.q0();
    let ev = mm.x_eigenvalues();
    CriteriaReport::from_records([
        Record::new("symmsatin_ci", None, nj1, tr_c),
        Record::new("isoin_ci", None, tr_g, n * j),
        Record::new("betosp_ci", None, ev[0], tr_c - nj1 + q0_term),
        Record::new(
            "twovar_ci",
            None,
            (n - 1.0) * tr_g - n * (n - 1.0) * j + q0_term,
            ev[2],
        ),
    ])
}
