use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use nalgebra::Vector3;

use super::EnsembleShape;
use crate::error::Result;
use crate::linalg::{self, c, CMat, Layout, SparseOp, C64};
use crate::spin::{Axis, SpinOperators};

/// Collective operators of one ensemble shape, in sparse form.
#[derive(Debug)]
pub struct CollectiveOps {
    pub single: SpinOperators,
    /// `J_x, J_y, J_z`.
    pub j: [SparseOp; 3],
    /// `J_-`.
    pub lowering: SparseOp,
    /// `J_+`.
    pub raising: SparseOp,
    /// `Σ_n ½ (j_k j_l + j_l j_k)^{(n)}`, indexed `[k][l]`.
    pub local: [[SparseOp; 3]; 3],
}

impl CollectiveOps {
    fn build(shape: &EnsembleShape) -> Result<Self> {
        let single = SpinOperators::new(shape.j())?;
        let layout = shape.layout();
        let j = [
            embed_sum(&layout, &single.jx),
            embed_sum(&layout, &single.jy),
            embed_sum(&layout, &single.jz),
        ];
        let lowering = embed_sum(&layout, &single.lowering());
        let raising = embed_sum(&layout, &single.raising());
        let local = std::array::from_fn(|k| {
            std::array::from_fn(|l| {
                let a = single.axis(Axis::from_index(k));
                let b = single.axis(Axis::from_index(l));
                let sym = (a * b + b * a) * c(0.5);
                embed_sum(&layout, &sym)
            })
        });
        Ok(Self {
            single,
            j,
            lowering,
            raising,
            local,
        })
    }

    pub fn axis(&self, a: Axis) -> &SparseOp {
        &self.j[a.index()]
    }
}

/// `Σ_n op^{(n)}` with identity padding on the other sites.
pub(crate) fn embed_sum(layout: &Layout, op: &CMat) -> SparseOp {
    let d = layout.d;
    let dim = layout.dim();
    let mut triplets: Vec<(usize, usize, C64)> = Vec::with_capacity(dim * layout.n * d);
    for col in 0..dim {
        for site in 0..layout.n {
            let stride = layout.stride(site);
            let b = layout.digit(col, site);
            let base = col - b * stride;
            for a in 0..d {
                let v = op[(a, b)];
                if v.norm() > 0.0 {
                    triplets.push((base + a * stride, col, v));
                }
            }
        }
    }
    linalg::sparse_from_triplets(dim, &triplets)
}

type Cache = RwLock<HashMap<(usize, i32), Arc<CollectiveOps>>>;

fn cache() -> &'static Cache {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

impl CollectiveOps {
    /// Shared, lazily built operators for `shape`. Results do not depend on
    /// which thread populated the cache.
    pub fn for_shape(shape: &EnsembleShape) -> Result<Arc<CollectiveOps>> {
        let shape = shape.revalidate()?;
        let key = (shape.n(), shape.j().twice());
        if let Some(ops) = cache().read().expect("operator cache poisoned").get(&key) {
            return Ok(Arc::clone(ops));
        }
        let built = Arc::new(CollectiveOps::build(&shape)?);
        let mut guard = cache().write().expect("operator cache poisoned");
        Ok(Arc::clone(guard.entry(key).or_insert(built)))
    }
}

/// `J_l = Σ_n j_l^{(n)}`.
pub fn collective_operator(shape: &EnsembleShape, axis: Axis) -> Result<SparseOp> {
    Ok(CollectiveOps::for_shape(shape)?.axis(axis).clone())
}

/// `n · J` as a dense matrix.
pub fn collective_component(shape: &EnsembleShape, n: &Vector3<f64>) -> Result<CMat> {
    let ops = CollectiveOps::for_shape(shape)?;
    let mut out = CMat::zeros(shape.dim(), shape.dim());
    for a in Axis::ALL {
        let w = n[a.index()];
        if w != 0.0 {
            out += linalg::sparse_to_dense(ops.axis(a)) * c(w);
        }
    }
    Ok(out)
}
