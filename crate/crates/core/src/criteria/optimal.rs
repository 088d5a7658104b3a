use super::{CriteriaReport, IndexSubset, Record};
use crate::moments::MomentSet;
use crate::spin::Axis;

fn consts(m: &MomentSet) -> (f64, f64) {
    (m.shape.n_f(), m.shape.jv())
}

/// `Σ_l <J_l²> ≤ Nj(Nj+1)`.
pub fn symmsatin_record(m: &MomentSet) -> Record {
    let (n, j) = consts(m);
    Record::new("symmsatin", None, n * j * (n * j + 1.0), m.k.sum())
}

/// `Σ_l (ΔJ_l)² ≥ Nj`.
pub fn isoin_record(m: &MomentSet) -> Record {
    let (n, j) = consts(m);
    Record::new("isoin", None, m.var.sum(), n * j)
}

/// `(N−1)(Δ̃J_k)² ≥ <J̃_l²> + <J̃_m²> − N(N−1)j²`.
pub fn betosp_record(m: &MomentSet, k: Axis) -> Record {
    let (n, j) = consts(m);
    let (l, mm) = k.others();
    Record::new(
        format!("betosp_{k}"),
        Some(format!("k={k},l={l},m={mm}")),
        (n - 1.0) * m.vt(k),
        m.kt(l) + m.kt(mm) - n * (n - 1.0) * j * j,
    )
}

/// `(N−1)[(Δ̃J_k)² + (Δ̃J_l)²] ≥ <J̃_m²> − N(N−1)j²`, labelled by `m`.
pub fn twovar_record(m: &MomentSet, third: Axis) -> Record {
    let (n, j) = consts(m);
    let (k, l) = third.others();
    Record::new(
        format!("twovar_{third}"),
        Some(format!("k={k},l={l},m={third}")),
        (n - 1.0) * (m.vt(k) + m.vt(l)),
        m.kt(third) - n * (n - 1.0) * j * j,
    )
}

/// `(N−1) Σ_{l∈I} (Δ̃J_l)² − Σ_{l∉I} <J̃_l²> ≥ −N(N−1)j²`.
pub fn ssij_record(m: &MomentSet, subset: IndexSubset) -> Record {
    let (n, j) = consts(m);
    let inside: f64 = subset.members().map(|a| m.vt(a)).sum();
    let outside: f64 = Axis::ALL
        .iter()
        .filter(|&&a| !subset.contains(a))
        .map(|&a| m.kt(a))
        .sum();
    Record::new(
        format!("ssij_{subset}"),
        Some(subset.to_string()),
        (n - 1.0) * inside - outside,
        -n * (n - 1.0) * j * j,
    )
}

/// The eight records of the optimal set, in a fixed order.
pub fn optimal_records(m: &MomentSet) -> Vec<Record> {
    let mut out = vec![symmsatin_record(m), isoin_record(m)];
    out.extend(Axis::ALL.iter().map(|&k| betosp_record(m, k)));
    out.extend(Axis::ALL.iter().map(|&a| twovar_record(m, a)));
    out
}

/// The optimal set followed by the subset form for all eight `I`.
pub fn evaluate_optimal_set(m: &MomentSet) -> CriteriaReport {
    let named = optimal_records(m);
    let subsets: Vec<Record> = IndexSubset::all().map(|s| ssij_record(m, s)).collect();
    debug_assert!(subset_forms_agree(m, &named, &subsets));
    CriteriaReport::from_records(named.into_iter().chain(subsets))
}

/// The subset form reproduces each named inequality: `∅` is `symmsatin`,
/// `{k}` is `betosp_k`, `{k,l}` is `twovar_m`, and `{x,y,z}` is `isoin`
/// scaled by `N − 1`.
fn subset_forms_agree(m: &MomentSet, named: &[Record], subsets: &[Record]) -> bool {
    let n = m.shape.n_f();
    let find = |name: &str| named.iter().find(|r| r.name == name).map(|r| r.margin);
    let scale = 1.0 + m.k.abs().sum() * n;
    subsets.iter().enumerate().all(|(bits, rec)| {
        let subset = IndexSubset::all().nth(bits).unwrap();
        let expected = match subset.len() {
            0 => find("symmsatin").unwrap(),
            1 => find(&format!("betosp_{}", subset.members().next().unwrap())).unwrap(),
            2 => {
                let third = Axis::ALL.into_iter().find(|&a| !subset.contains(a)).unwrap();
                find(&format!("twovar_{third}")).unwrap()
            }
            _ => (n - 1.0) * find("isoin").unwrap(),
        };
        (rec.margin - expected).abs() <= 1e-9 * scale
    })
}

/// Margins of the forms that use true second moments and a single `M_l`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rearranged {
    /// `Nj(Nj+1) − [Σ<J_l²> − N(ΔJ_k)² − <J_k>² + N M_k]`, equal to the
    /// one-variance margin.
    pub betosp_total: f64,
    /// `(N−1)(ΔJ_k)² − N M_k + Nj(Nj+1) − <J_l²> − <J_m²>`, equal to the
    /// one-variance margin.
    pub betosp_single_m: f64,
    /// `(N−1)[(ΔJ_k)² + (ΔJ_l)²] − N(N−1)j − <J_m²> + N M_m`, equal to the
    /// two-variance margin.
    pub twovar_single_m: f64,
    /// `(ΔJ_k)² + (ΔJ_l)² − Nj − <J_m²>/(N−1) + N M_m/(N−1)`, the
    /// two-variance margin divided by `N − 1`.
    pub twovar_planar_form: f64,
}

/// Alternative forms for the one-variance condition with variance axis `k`
/// and the two-variance condition with third axis `k`.
pub fn rearranged_margins(m: &MomentSet, k: Axis) -> Rearranged {
    let (n, j) = consts(m);
    let (l, mm) = k.others();
    let nj1 = n * j * (n * j + 1.0);
    let mk = m.m[k.index()];
    let kk = |a: Axis| m.k[a.index()];
    let betosp_total = nj1 - (m.k.sum() - n * m.v(k) - m.j(k).powi(2) + n * mk);
    let betosp_single_m = (n - 1.0) * m.v(k) - n * mk + nj1 - kk(l) - kk(mm);
    let twovar_single_m = (n - 1.0) * (m.v(l) + m.v(mm)) - n * (n - 1.0) * j - kk(k) + n * mk;
    let twovar_planar_form = m.v(l) + m.v(mm) - n * j - kk(k) / (n - 1.0) + n * mk / (n - 1.0);
    Rearranged {
        betosp_total,
        betosp_single_m,
        twovar_single_m,
        twovar_planar_form,
    }
}
