//! The region of `(<J̃_x²>, <J̃_y²>, <J̃_z²>)` allowed for separable states
//! at fixed mean spin, described by its four facet families and six
//! closed-form vertices.

use std::io::Write;

use nalgebra::Vector3;
use serde::Serialize;

use crate::criteria::{betosp_record, isoin_record, symmsatin_record, twovar_record, Record};
use crate::error::{Result, SpinSqError};
use crate::moments::MomentSet;
use crate::spin::Axis;
use crate::states::EnsembleShape;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PolytopeVertices {
    #[serde(skip)]
    pub shape: EnsembleShape,
    pub jvec: Vector3<f64>,
    pub kappa: f64,
    /// Indexed by axis.
    pub a: [Vector3<f64>; 3],
    pub b: [Vector3<f64>; 3],
}

impl PolytopeVertices {
    pub fn vertex(&self, name: &str) -> Option<Vector3<f64>> {
        let (kind, axis) = name.split_once('_')?;
        let a: Axis = axis.parse().ok()?;
        match kind {
            "A" => Some(self.a[a.index()]),
            "B" => Some(self.b[a.index()]),
            _ => None,
        }
    }

    /// `(name, point)` for all six vertices, `A_x..A_z` first.
    pub fn labelled(&self) -> Vec<(String, Vector3<f64>)> {
        let mut out: Vec<_> = Axis::ALL.iter().map(|a| (format!("A_{a}"), self.a[a.index()])).collect();
        out.extend(Axis::ALL.iter().map(|a| (format!("B_{a}"), self.b[a.index()])));
        out
    }
}

pub fn vertices(shape: EnsembleShape, jvec: Vector3<f64>) -> Result<PolytopeVertices> {
    let big_j = shape.max_spin();
    if jvec.norm() > big_j * (1.0 + 1e-12) {
        return Err(SpinSqError::InvalidArgument(format!(
            "|J| = {} exceeds N j = {big_j}",
            jvec.norm()
        )));
    }
    let n = shape.n_f();
    let j = shape.jv();
    let kappa = (n - 1.0) / n;
    let sq = jvec.map(|v| v * v);
    let mut a = [Vector3::zeros(); 3];
    let mut b = [Vector3::zeros(); 3];
    for k in Axis::ALL {
        let (l, m) = k.others();
        let rest = sq[l.index()] + sq[m.index()];
        let mut base = Vector3::zeros();
        base[l.index()] = kappa * sq[l.index()];
        base[m.index()] = kappa * sq[m.index()];
        let mut av = base;
        av[k.index()] = n * (n - 1.0) * j * j - kappa * rest;
        let mut bv = base;
        bv[k.index()] = sq[k.index()] + rest / n - n * j * j;
        a[k.index()] = av;
        b[k.index()] = bv;
    }
    Ok(PolytopeVertices {
        shape,
        jvec,
        kappa,
        a,
        b,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Facet {
    /// Vertices spanning the facet, e.g. `B_x-A_y-A_z`.
    pub name: String,
    /// Name of the matching condition in the criteria report.
    pub criterion: String,
    pub margin: f64,
    pub violated: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FacetMargins {
    pub facets: Vec<Facet>,
    pub inside: bool,
    /// Facet with the most negative margin among the violated ones.
    pub nearest_violated: Option<String>,
}

impl FacetMargins {
    pub fn get(&self, name: &str) -> Option<&Facet> {
        self.facets.iter().find(|f| f.name == name)
    }
}

/// The eight facets as vertex triples, in the order of [`membership`].
pub fn facet_triangles() -> Vec<(String, [(char, Axis); 3])> {
    let mut out = vec![
        ("A_x-A_y-A_z".to_string(), [('A', Axis::X), ('A', Axis::Y), ('A', Axis::Z)]),
        ("B_x-B_y-B_z".to_string(), [('B', Axis::X), ('B', Axis::Y), ('B', Axis::Z)]),
    ];
    for k in Axis::ALL {
        let (l, m) = k.others();
        out.push((format!("B_{k}-A_{l}-A_{m}"), [('B', k), ('A', l), ('A', m)]));
    }
    for third in Axis::ALL {
        let (k, l) = third.others();
        out.push((format!("B_{k}-B_{l}-A_{third}"), [('B', k), ('B', l), ('A', third)]));
    }
    out
}

pub fn membership(m: &MomentSet) -> FacetMargins {
    let mut records: Vec<Record> = vec![symmsatin_record(m), isoin_record(m)];
    records.extend(Axis::ALL.iter().map(|&k| betosp_record(m, k)));
    records.extend(Axis::ALL.iter().map(|&t| twovar_record(m, t)));
    let facets: Vec<Facet> = facet_triangles()
        .into_iter()
        .zip(records)
        .map(|((name, _), r)| Facet {
            name,
            criterion: r.name,
            margin: r.margin,
            violated: r.violated,
        })
        .collect();
    let nearest_violated = facets
        .iter()
        .filter(|f| f.violated)
        .min_by(|a, b| a.margin.total_cmp(&b.margin))
        .map(|f| f.name.clone());
    FacetMargins {
        inside: nearest_violated.is_none(),
        facets,
        nearest_violated,
    }
}

/// Points on every facet triangle from a barycentric grid with
/// `resolution` subdivisions per edge.
pub fn facet_mesh(v: &PolytopeVertices, resolution: usize) -> Vec<(String, Vector3<f64>)> {
    let r = resolution.max(1);
    let mut out = Vec::new();
    for (name, corners) in facet_triangles() {
        let pts = corners.map(|(kind, a)| if kind == 'A' { v.a[a.index()] } else { v.b[a.index()] });
        for i in 0..=r {
            for j in 0..=r - i {
                let (u, w) = (i as f64 / r as f64, j as f64 / r as f64);
                out.push((name.clone(), pts[0] * (1.0 - u - w) + pts[1] * u + pts[2] * w));
            }
        }
    }
    out
}

/// Writes `kind,name,x,y,z` rows: the six vertices, then the mesh.
pub fn write_csv<W: Write>(v: &PolytopeVertices, resolution: usize, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| SpinSqError::InvalidArgument(format!("writing CSV failed: {e}"));
    w.write_record(["kind", "name", "x", "y", "z"]).map_err(io)?;
    for (name, p) in v.labelled() {
        w.write_record(["vertex", &name, &p[0].to_string(), &p[1].to_string(), &p[2].to_string()])
            .map_err(io)?;
    }
    for (name, p) in facet_mesh(v, resolution) {
        w.write_record(["mesh", &name, &p[0].to_string(), &p[1].to_string(), &p[2].to_string()])
            .map_err(io)?;
    }
    w.flush().map_err(|e| SpinSqError::InvalidArgument(format!("writing CSV failed: {e}")))?;
    Ok(())
}
