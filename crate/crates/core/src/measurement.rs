//! Simulated population readout: rotate every particle so the chosen axis
//! becomes `z`, then count how many particles land in each `j_z` level.

use std::io::Write;

use nalgebra::Vector3;
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SpinSqError};
use crate::moments::MomentSet;
use crate::spin::{Axis, Frame, HalfInt, SpinOperators};
use crate::states::{EnsembleShape, QuantumState, StateRepr};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasurementRecord {
    pub axis: Axis,
    pub n: usize,
    pub twice_j: i32,
    pub shots: usize,
    pub seed: u64,
    /// `counts[shot][c]` is the number of particles found with
    /// `j_z = −j + c` after the rotation.
    pub counts: Vec<Vec<u32>>,
}

impl MeasurementRecord {
    /// Outcome values `−j, −j+1, …, j` labelling the columns.
    pub fn outcomes(&self) -> Vec<f64> {
        let j = HalfInt::from_twice(self.twice_j).value();
        (0..=self.twice_j as usize).map(|c| c as f64 - j).collect()
    }

    /// `Σ_χ N_χ χ` for one shot.
    pub fn total_projection(&self, shot: usize) -> f64 {
        self.outcomes().iter().zip(&self.counts[shot]).map(|(x, &k)| x * k as f64).sum()
    }

    /// `Σ_χ N_χ χ²` for one shot.
    pub fn local_square_sum(&self, shot: usize) -> f64 {
        self.outcomes().iter().zip(&self.counts[shot]).map(|(x, &k)| x * x * k as f64).sum()
    }

    /// One row per shot, one column per outcome.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let err = |e: csv::Error| SpinSqError::InvalidArgument(format!("writing CSV failed: {e}"));
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["shot".to_string()];
        header.extend(self.outcomes().iter().map(|x| format!("N[{}]", HalfInt::from_twice((2.0 * x) as i32))));
        w.write_record(&header).map_err(err)?;
        for (i, row) in self.counts.iter().enumerate() {
            let mut rec = vec![i.to_string()];
            rec.extend(row.iter().map(u32::to_string));
            w.write_record(&rec).map_err(err)?;
        }
        w.flush().map_err(|e| SpinSqError::InvalidArgument(format!("writing CSV failed: {e}")))
    }
}

/// Probabilities of the `D` joint product-basis outcomes after rotating
/// `axis` onto `z` at every site.
pub fn outcome_distribution(state: &QuantumState, axis: Axis) -> Result<Vec<f64>> {
    let shape = state.shape();
    let ops = SpinOperators::new(shape.j())?;
    let u = ops.aligning_rotation(&axis.unit(), &Vector3::z())?;
    let layout = shape.layout();
    let probs = match state.repr() {
        StateRepr::Pure(psi) => {
            let mut v = psi.clone();
            layout.apply_all_sites(v.as_mut_slice(), &u);
            v.iter().map(|a| a.norm_sqr()).collect()
        }
        StateRepr::Mixed(rho) => {
            let r = layout.conjugate_all_sites(rho, &u);
            r.diagonal().iter().map(|z| z.re.max(0.0)).collect()
        }
    };
    Ok(probs)
}

fn axis_rng(seed: u64, axis: Axis) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(axis.index() as u64);
    rng
}

pub fn simulate_population_measurement(
    state: &QuantumState,
    axis: Axis,
    shots: usize,
    seed: u64,
) -> Result<MeasurementRecord> {
    if shots == 0 {
        return Err(SpinSqError::InvalidArgument("shots must be at least 1".into()));
    }
    let shape = state.shape();
    let probs = outcome_distribution(state, axis)?;
    let dist = WeightedIndex::new(&probs)
        .map_err(|e| SpinSqError::InvalidState(format!("outcome distribution is unusable: {e}")))?;
    let layout = shape.layout();
    let d = shape.d();
    let mut rng = axis_rng(seed, axis);
    let counts = (0..shots)
        .map(|_| {
            let idx = dist.sample(&mut rng);
            let mut row = vec![0u32; d];
            // basis index 0 is m = +j, column 0 is χ = −j
            for digit in layout.digits(idx) {
                row[d - 1 - digit] += 1;
            }
            row
        })
        .collect();
    Ok(MeasurementRecord {
        axis,
        n: shape.n(),
        twice_j: shape.j().twice(),
        shots,
        seed,
        counts,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub stderr: f64,
}

impl Estimate {
    fn from_samples(x: &[f64]) -> Self {
        let n = x.len() as f64;
        let mean = x.iter().sum::<f64>() / n;
        let var = x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
        Self {
            value: mean,
            stderr: (var / n).sqrt(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimatedMoments {
    pub n: usize,
    pub twice_j: i32,
    pub shots: usize,
    /// Indexed by axis.
    pub jvec: [Estimate; 3],
    pub k: [Estimate; 3],
    pub m: [Estimate; 3],
    /// Estimated directly from the per-shot `(Σχ N_χ)² − Σ N_χ χ²`.
    pub ktilde: [Estimate; 3],
}

impl EstimatedMoments {
    pub fn from_records(records: &[MeasurementRecord; 3]) -> Result<Self> {
        let first = &records[0];
        let shots = first.shots;
        if shots < 2 {
            return Err(SpinSqError::InvalidArgument("at least two shots are needed".into()));
        }
        for (a, r) in Axis::ALL.iter().zip(records) {
            if r.axis != *a || r.shots != shots || r.n != first.n || r.twice_j != first.twice_j {
                return Err(SpinSqError::ShapeMismatch(
                    "records must cover x, y, z with equal shots and shape".into(),
                ));
            }
        }
        let mut out = Self {
            n: first.n,
            twice_j: first.twice_j,
            shots,
            jvec: [Estimate { value: 0.0, stderr: 0.0 }; 3],
            k: [Estimate { value: 0.0, stderr: 0.0 }; 3],
            m: [Estimate { value: 0.0, stderr: 0.0 }; 3],
            ktilde: [Estimate { value: 0.0, stderr: 0.0 }; 3],
        };
        for (i, r) in records.iter().enumerate() {
            let s: Vec<f64> = (0..shots).map(|t| r.total_projection(t)).collect();
            let m: Vec<f64> = (0..shots).map(|t| r.local_square_sum(t)).collect();
            let s2: Vec<f64> = s.iter().map(|v| v * v).collect();
            let kt: Vec<f64> = s2.iter().zip(&m).map(|(a, b)| a - b).collect();
            out.jvec[i] = Estimate::from_samples(&s);
            out.k[i] = Estimate::from_samples(&s2);
            out.m[i] = Estimate::from_samples(&m);
            out.ktilde[i] = Estimate::from_samples(&kt);
        }
        Ok(out)
    }

    /// Point estimates as a moment set in the canonical frame.
    pub fn to_moment_set(&self) -> Result<MomentSet> {
        let shape = EnsembleShape::with_guard(self.n, HalfInt::spin(self.twice_j)?, usize::MAX)?;
        let v = |e: &[Estimate; 3]| Vector3::new(e[0].value, e[1].value, e[2].value);
        Ok(MomentSet::from_parts(shape, Frame::canonical(), v(&self.jvec), v(&self.k), v(&self.m)))
    }
}

/// Measures along x, y and z with `shots` each; each axis draws from its
/// own stream of the seeded generator.
pub fn estimate_moment_set(state: &QuantumState, shots: usize, seed: u64) -> Result<EstimatedMoments> {
    if shots < 2 {
        return Err(SpinSqError::InvalidArgument("at least two shots are needed".into()));
    }
    let records = [
        simulate_population_measurement(state, Axis::X, shots, seed)?,
        simulate_population_measurement(state, Axis::Y, shots, seed)?,
        simulate_population_measurement(state, Axis::Z, shots, seed)?,
    ];
    EstimatedMoments::from_records(&records)
}
