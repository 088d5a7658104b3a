use serde::{Deserialize, Serialize};

use crate::moments::MomentSet;
use crate::spin::Axis;

/// Numerators and denominators this close to zero are rounding noise.
const ROUNDING: f64 = 1e-10;

/// A squeezing parameter that may be undefined for the given moments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Param {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub absent_reason: Option<String>,
    /// Numerator minus denominator, and the larger of 1 and their sizes.
    #[serde(skip)]
    excess: (f64, f64),
}

impl Param {
    fn ratio(num: f64, den: f64, what: &str) -> Self {
        if den <= ROUNDING {
            Param::absent(format!("{what} is {den:e}, not positive"))
        } else if num < -ROUNDING * (1.0 + den) {
            Param::absent(format!("numerator is negative ({num:e})"))
        } else {
            let num = num.max(0.0);
            Self {
                value: Some(num / den),
                absent_reason: None,
                excess: (num - den, 1f64.max(num).max(den)),
            }
        }
    }

    fn absent(reason: String) -> Self {
        Self {
            value: None,
            absent_reason: Some(reason),
            excess: (0.0, 1.0),
        }
    }

    /// `value < 1` beyond rounding, i.e. entanglement is signalled. Decided
    /// as numerator < denominator with the tolerance of the inequality
    /// records, so a small denominator does not amplify rounding.
    pub fn below_one(&self) -> bool {
        self.value.is_some() && self.excess.0 < -1e-12 * self.excess.1
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SqueezingReport {
    /// Squeezed axis `k`; `l` and `m` follow cyclically.
    pub k: Axis,
    pub l: Axis,
    pub m: Axis,
    /// `N (ΔJ_k)² / (<J_l>² + <J_m>²)`.
    pub xi_s2: Param,
    /// `N [(Δ̃J_k)² + Nj²] / (<J_l>² + <J_m>²)`.
    pub xi_sj2: Param,
    /// `(N−1)[(Δ̃J_k)² + Nj²] / (<J̃_l²> + <J̃_m²>)`.
    pub xi_os2: Param,
    /// `Σ_l (ΔJ_l)² / (Nj)`.
    pub xi_singlet2: Param,
    /// `(N−1)[(Δ̃J_k)² + (Δ̃J_l)² + Nj²] / <J̃_m²>`.
    pub xi_planar2: Param,
}

/// All five parameters with `k` as the squeezed (or, for the planar
/// parameter, first in-plane) axis.
pub fn squeezing_parameters(ms: &MomentSet, k: Axis) -> SqueezingReport {
    let n = ms.shape.n_f();
    let j = ms.shape.jv();
    let (l, m) = k.others();
    let transverse = ms.j(l).powi(2) + ms.j(m).powi(2);
    let tilde_num = ms.vt(k) + n * j * j;
    // A tiny transverse spin from rounding must not yield a huge value.
    let transverse_den = if transverse <= 1e-14 * (1.0 + n * n * j * j) { 0.0 } else { transverse };
    SqueezingReport {
        k,
        l,
        m,
        xi_s2: Param::ratio(n * ms.v(k).max(0.0), transverse_den, "<J_l>² + <J_m>²"),
        xi_sj2: Param::ratio(n * tilde_num, transverse_den, "<J_l>² + <J_m>²"),
        xi_os2: Param::ratio((n - 1.0) * tilde_num, ms.kt(l) + ms.kt(m), "<J̃_l²> + <J̃_m²>"),
        xi_singlet2: Param::ratio(ms.var.sum().max(0.0), n * j, "Nj"),
        xi_planar2: Param::ratio(
            (n - 1.0) * (ms.vt(k) + ms.vt(l) + n * j * j),
            ms.kt(m),
            "<J̃_m²>",
        ),
    }
}

/// Right-hand side of the self-consistent rewriting
/// `ξ² = N [(Δ̃J_k)² + Nj² − j(j+1) ξ²] / (<J_l>² + <J_m>² − Nj(j+1))`,
/// evaluated at a given `ξ²`. `None` when the denominator vanishes.
pub fn xi_sj_from_identity(ms: &MomentSet, k: Axis, xi_sj2: f64) -> Option<f64> {
    let n = ms.shape.n_f();
    let j = ms.shape.jv();
    let (l, m) = k.others();
    let den = ms.j(l).powi(2) + ms.j(m).powi(2) - n * j * (j + 1.0);
    if den.abs() < 1e-12 {
        return None;
    }
    Some(n * (ms.vt(k) + n * j * j - j * (j + 1.0) * xi_sj2) / den)
}
