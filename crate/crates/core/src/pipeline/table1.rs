//! First moments, second moments and local second moments of the singlet,
//! the completely mixed state and the symmetric Dicke state, computed from
//! constructed states and from closed forms.

use nalgebra::Vector3;
use serde::Serialize;

use crate::error::Result;
use crate::moments::moment_set;
use crate::spin::HalfInt;
use crate::states::{self, EnsembleShape, SingletVariant};

/// `(2j, N)` pairs reproduced by default.
pub const TABLE1_CASES: [(i32, usize); 3] = [(1, 4), (2, 2), (2, 3)];

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Collective {
    pub j: [f64; 3],
    pub k: [f64; 3],
    pub m: [f64; 3],
}

impl Collective {
    fn max_abs_diff(&self, o: &Collective) -> f64 {
        self.j
            .iter()
            .chain(&self.k)
            .chain(&self.m)
            .zip(o.j.iter().chain(&o.k).chain(&o.m))
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table1Row {
    pub state: String,
    pub j: String,
    #[serde(rename = "N")]
    pub n: usize,
    pub closed_form: Collective,
    pub computed: Collective,
    pub max_abs_deviation: f64,
}

/// Closed-form values for `state ∈ {singlet, completely_mixed, dicke}`.
pub fn closed_form(state: &str, n: usize, j: HalfInt) -> Option<Collective> {
    let nf = n as f64;
    let jv = j.value();
    let iso = nf * jv * (jv + 1.0) / 3.0;
    match state {
        "singlet" => Some(Collective {
            j: [0.0; 3],
            k: [0.0; 3],
            m: [iso; 3],
        }),
        "completely_mixed" => Some(Collective {
            j: [0.0; 3],
            k: [iso; 3],
            m: [iso; 3],
        }),
        "dicke" => {
            let kxy = nf * jv * (nf * jv + 1.0) / 2.0;
            let mz = nf * (nf - 1.0) * jv * jv / (2.0 * jv * nf - 1.0);
            let mxy = nf * jv * (jv + 1.0) / 2.0 - nf * (nf - 1.0) * jv * jv / (4.0 * jv * nf - 2.0);
            Some(Collective {
                j: [0.0; 3],
                k: [kxy, kxy, 0.0],
                m: [mxy, mxy, mz],
            })
        }
        _ => None,
    }
}

fn collective(j: Vector3<f64>, k: Vector3<f64>, m: Vector3<f64>) -> Collective {
    Collective {
        j: j.into(),
        k: k.into(),
        m: m.into(),
    }
}

/// The three rows for one `(j, N)`. The Dicke row uses `λ_z = 0` and is
/// skipped when `Nj` is not an integer.
pub fn table1_rows(shape: EnsembleShape) -> Result<Vec<Table1Row>> {
    let mut built = vec![
        ("singlet", states::singlet_state(shape, SingletVariant::default_for(&shape))?),
        ("completely_mixed", states::completely_mixed(shape)),
    ];
    if (shape.n() as i32 * shape.j().twice()) % 2 == 0 {
        built.push(("dicke", states::dicke_state(shape, HalfInt::from_twice(0))?));
    }
    built
        .into_iter()
        .map(|(name, st)| {
            let m = moment_set(&st)?;
            let computed = collective(m.jvec, m.k, m.m);
            let closed = closed_form(name, shape.n(), shape.j()).expect("known row");
            Ok(Table1Row {
                state: name.to_string(),
                j: shape.j().to_string(),
                n: shape.n(),
                max_abs_deviation: computed.max_abs_diff(&closed),
                closed_form: closed,
                computed,
            })
        })
        .collect()
}

pub fn table1(cases: &[(i32, usize)], guard: usize) -> Result<Vec<Table1Row>> {
    let mut rows = Vec::new();
    for &(twice_j, n) in cases {
        rows.extend(table1_rows(EnsembleShape::with_guard(n, HalfInt::spin(twice_j)?, guard)?)?);
    }
    Ok(rows)
}
