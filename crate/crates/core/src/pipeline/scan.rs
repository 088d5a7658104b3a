//! Bisection of entanglement verdicts along one-parameter state families.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::criteria::{self, CriteriaReport};
use crate::error::{Result, SpinSqError};
use crate::linalg::CMat;
use crate::moments::raw_moments;
use crate::spin::Frame;
use crate::states::{self, EnsembleShape, QuantumState};

/// Iteration cap for every bisection.
pub const MAX_BISECTIONS: usize = 60;

/// Which verdict a scan follows.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Criterion {
    /// A moment-based record by exact name (`betosp_z`), or every record of
    /// a family (`betosp` covers `betosp_x`, `betosp_y`, `betosp_z`).
    Named(String),
    /// Any moment-based record.
    AnyMoment,
    /// A non-positive partial transpose for some bipartition.
    AnyNpt,
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Criterion::Named(n) => f.write_str(n),
            Criterion::AnyMoment => f.write_str("any"),
            Criterion::AnyNpt => f.write_str("npt"),
        }
    }
}

impl FromStr for Criterion {
    type Err = SpinSqError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "" => Err(SpinSqError::Parse("empty criterion name".into())),
            "any" => Ok(Criterion::AnyMoment),
            "npt" | "ppt" => Ok(Criterion::AnyNpt),
            name => Ok(Criterion::Named(name.to_string())),
        }
    }
}

/// Optimal set, coordinate-free forms and the conditions carried over from
/// qubits, all in the canonical frame.
pub fn moment_report(state: &QuantumState) -> Result<CriteriaReport> {
    let raw = raw_moments(state)?;
    let frame = Frame::canonical();
    let ms = raw.moment_set(&frame);
    let mut rep = criteria::evaluate_optimal_set(&ms);
    rep.merge(criteria::evaluate_coordinate_free(&raw.matrices(&frame)));
    rep.merge(criteria::mapped_criteria(&ms));
    Ok(rep)
}

impl Criterion {
    /// `true` when the state is flagged as entangled.
    pub fn verdict(&self, state: &QuantumState) -> Result<bool> {
        match self {
            Criterion::AnyNpt => criteria::any_npt(state),
            Criterion::AnyMoment => Ok(moment_report(state)?.entangled),
            Criterion::Named(name) => {
                let rep = moment_report(state)?;
                let prefix = format!("{name}_");
                let mut hits = rep
                    .criteria
                    .values()
                    .filter(|r| r.name == *name || r.name.starts_with(&prefix))
                    .peekable();
                if hits.peek().is_none() {
                    return Err(SpinSqError::InvalidArgument(format!(
                        "unknown criterion '{name}'; known: {}",
                        rep.criteria.keys().cloned().collect::<Vec<_>>().join(", ")
                    )));
                }
                Ok(hits.any(|r| r.violated))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanResult {
    /// `p_n` or `T`.
    pub parameter: String,
    pub criterion: String,
    /// Final interval `[entangled side, separable side]`; absent when the
    /// verdict never flips.
    pub bracket: Option<[f64; 2]>,
    pub threshold: Option<f64>,
    /// Half-width of the final bracket.
    pub tolerance: f64,
    pub evaluations: usize,
    /// Verdicts at the two ends of the scanned range.
    pub endpoint_verdicts: [bool; 2],
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanOptions {
    /// Interior grid points evaluated before bisecting; they locate the flip
    /// and check that the verdict changes only once.
    pub grid: usize,
    pub parallel: bool,
    pub tol: f64,
}

impl ScanOptions {
    pub fn noise() -> Self {
        Self {
            grid: 8,
            parallel: true,
            tol: 1e-6,
        }
    }

    pub fn temperature() -> Self {
        Self {
            grid: 8,
            parallel: true,
            tol: 1e-3,
        }
    }
}

enum Shape {
    /// Verdict flips once from entangled to separable.
    Flip(f64, f64),
    Constant,
}

/// Evaluates the verdict on the grid and checks that it changes at most
/// once, from entangled to separable, across the range.
fn locate<F>(f: &F, lo: f64, hi: f64, opts: &ScanOptions, evals: &mut usize) -> Result<(Shape, [bool; 2])>
where
    F: Fn(f64) -> Result<bool> + Sync,
{
    let n = opts.grid + 2;
    let points: Vec<f64> = (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect();
    let verdicts: Vec<bool> = if opts.parallel {
        points.par_iter().map(|&p| f(p)).collect::<Result<_>>()?
    } else {
        points.iter().map(|&p| f(p)).collect::<Result<_>>()?
    };
    *evals += n;
    let ends = [verdicts[0], verdicts[n - 1]];
    for w in 0..n - 1 {
        if !verdicts[w] && verdicts[w + 1] {
            return Err(SpinSqError::NonMonotone {
                lo_param: points[w],
                lo_verdict: false,
                hi_param: points[w + 1],
                hi_verdict: true,
            });
        }
    }
    match verdicts.iter().position(|v| !v) {
        Some(0) | None => Ok((Shape::Constant, ends)),
        Some(k) => Ok((Shape::Flip(points[k - 1], points[k]), ends)),
    }
}

fn bisect<F>(f: &F, mut lo: f64, mut hi: f64, tol: f64, evals: &mut usize) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<bool>,
{
    let mut iterations = 0;
    while (hi - lo) / 2.0 > tol && iterations < MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        if f(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
        *evals += 1;
        iterations += 1;
    }
    Ok((lo, hi))
}

fn scan<F>(f: F, lo: f64, hi: f64, opts: &ScanOptions, parameter: &str, criterion: &Criterion) -> Result<ScanResult>
where
    F: Fn(f64) -> Result<bool> + Sync,
{
    let mut evals = 0;
    let (shape, ends) = locate(&f, lo, hi, opts, &mut evals)?;
    let (bracket, threshold, tolerance) = match shape {
        Shape::Constant => (None, None, 0.0),
        Shape::Flip(a, b) => {
            let (a, b) = bisect(&f, a, b, opts.tol, &mut evals)?;
            (Some([a, b]), Some(0.5 * (a + b)), 0.5 * (b - a))
        }
    };
    Ok(ScanResult {
        parameter: parameter.into(),
        criterion: criterion.to_string(),
        bracket,
        threshold,
        tolerance,
        evaluations: evals,
        endpoint_verdicts: ends,
    })
}

/// Largest white-noise weight `p_n` at which `(1−p_n)ρ + p_n 1/D` is still
/// flagged, to within `opts.tol`.
pub fn noise_threshold_with(state: &QuantumState, criterion: &Criterion, opts: &ScanOptions) -> Result<ScanResult> {
    let f = |p: f64| criterion.verdict(&states::mix_with_white_noise(state, p)?);
    scan(f, 0.0, 1.0, opts, "p_n", criterion)
}

pub fn noise_threshold(state: &QuantumState, criterion: &Criterion) -> Result<ScanResult> {
    noise_threshold_with(state, criterion, &ScanOptions::noise())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TemperatureScan {
    /// Where the three-variance condition stops detecting the thermal state.
    pub t_s: ScanResult,
    /// Where every partial transpose becomes positive.
    pub t_ppt: ScanResult,
}

pub fn temperature_threshold_with(
    h: &CMat,
    shape: EnsembleShape,
    range: (f64, f64),
    criterion: &Criterion,
    opts: &ScanOptions,
) -> Result<ScanResult> {
    let (lo, hi) = range;
    if !(lo > 0.0 && hi > lo) {
        return Err(SpinSqError::InvalidArgument(format!(
            "temperature range [{lo}, {hi}] must be positive and increasing"
        )));
    }
    let f = |t: f64| criterion.verdict(&states::thermal_state(shape, h, t)?);
    let res = scan(f, lo, hi, opts, "T", criterion)?;
    if res.threshold.is_none() {
        return Err(SpinSqError::Bracket {
            criterion: criterion.to_string(),
            lo,
            hi,
        });
    }
    Ok(res)
}

/// `T_s` for the three-variance condition and `T_ppt` for the partial
/// transposes of the thermal family `exp(−H/T)`.
pub fn temperature_thresholds(h: &CMat, shape: EnsembleShape, range: (f64, f64)) -> Result<TemperatureScan> {
    let opts = ScanOptions::temperature();
    Ok(TemperatureScan {
        t_s: temperature_threshold_with(h, shape, range, &Criterion::Named("isoin".into()), &opts)?,
        t_ppt: temperature_threshold_with(h, shape, range, &Criterion::AnyNpt, &opts)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin::HalfInt;
    use crate::states::SingletVariant;
    use nalgebra::Vector3;

    #[test]
    fn qubit_singlet_threshold() {
        let s = EnsembleShape::of(2, 1).unwrap();
        let st = states::singlet_state(s, SingletVariant::PairProduct).unwrap();
        let r = noise_threshold(&st, &"isoin".parse().unwrap()).unwrap();
        assert!((r.threshold.unwrap() - 2.0 / 3.0).abs() < 1e-6);
        assert_eq!(r.endpoint_verdicts, [true, false]);
        let [a, b] = r.bracket.unwrap();
        assert!(b - a <= 2e-6);
    }

    #[test]
    fn dicke_family_threshold() {
        let s = EnsembleShape::of(2, 2).unwrap();
        let st = states::dicke_state(s, HalfInt::from_twice(0)).unwrap();
        let r = noise_threshold(&st, &"betosp".parse().unwrap()).unwrap();
        assert!((r.threshold.unwrap() - 0.4).abs() < 1e-6);
    }

    #[test]
    fn coherent_has_no_threshold() {
        let s = EnsembleShape::of(3, 1).unwrap();
        let st = states::coherent_ensemble(s, &Vector3::z()).unwrap();
        let r = noise_threshold(&st, &Criterion::AnyMoment).unwrap();
        assert!(r.threshold.is_none() && r.bracket.is_none());
    }

    #[test]
    fn serial_and_parallel_agree() {
        let s = EnsembleShape::of(3, 2).unwrap();
        let st = states::dicke_state(s, HalfInt::from_twice(0)).unwrap();
        let c: Criterion = "betosp_z".parse().unwrap();
        let mut opts = ScanOptions::noise();
        let par = noise_threshold_with(&st, &c, &opts).unwrap();
        opts.parallel = false;
        assert_eq!(par, noise_threshold_with(&st, &c, &opts).unwrap());
        assert!((par.threshold.unwrap() - 3.0 / 8.0).abs() < 1e-6);
    }

    #[test]
    fn unknown_criterion_is_rejected() {
        let s = EnsembleShape::of(2, 1).unwrap();
        let st = states::completely_mixed(s);
        assert!(Criterion::Named("nope".into()).verdict(&st).is_err());
    }

    #[test]
    fn missing_bracket_is_an_error() {
        let s = EnsembleShape::of(2, 1).unwrap();
        let h = states::total_spin_squared(&s).unwrap();
        let e = temperature_threshold_with(&h, s, (50.0, 60.0), &Criterion::AnyNpt, &ScanOptions::temperature());
        assert!(matches!(e, Err(SpinSqError::Bracket { .. })));
    }
}
