//! Dense and sparse complex linear algebra shared by the rest of the crate.
//!
//! Many-body basis convention: site 0 is the most significant digit, so the
//! basis index of a product `|k_0 k_1 ... k_{N-1}>` is `sum_n k_n d^(N-1-n)`.
//! Local index `k = 0` is the highest-weight state `m = j`.

use nalgebra::{DMatrix, DVector};
use nalgebra_sparse::{CooMatrix, CsrMatrix};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;
pub type SparseOp = CsrMatrix<C64>;

pub const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
pub const ONE: C64 = C64 { re: 1.0, im: 0.0 };
pub const I: C64 = C64 { re: 0.0, im: 1.0 };

pub fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// Eigendecomposition of a Hermitian matrix with eigenvalues sorted ascending.
pub fn hermitian_eigh(m: &CMat) -> (Vec<f64>, CMat) {
    let eig = m.clone().symmetric_eigen();
    let n = eig.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = CMat::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    (values, vectors)
}

/// Eigenvalues only, ascending.
pub fn hermitian_eigenvalues(m: &CMat) -> Vec<f64> {
    let mut v: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

pub fn min_eigenvalue(m: &CMat) -> f64 {
    hermitian_eigenvalues(m)[0]
}

/// Whether the smallest eigenvalue of a Hermitian matrix is at least `-tol`,
/// decided by the smallest eigenvalue only when a Cholesky factorisation of
/// `m + tol·1` fails.
pub fn min_eigenvalue_at_least(m: &CMat, tol: f64) -> bool {
    positive_definite(m, tol) || min_eigenvalue(m) >= -tol
}

/// Cholesky factorisation of `m + shift·1` that stops at the first pivot
/// that is not positive. Reads the lower triangle only.
fn positive_definite(m: &CMat, shift: f64) -> bool {
    let n = m.nrows();
    // row-major lower factor
    let mut l = vec![C64::new(0.0, 0.0); n * n];
    for i in 0..n {
        for k in 0..=i {
            let (ri, rk) = (&l[i * n..i * n + k], &l[k * n..k * n + k]);
            let dot: C64 = ri.iter().zip(rk).map(|(a, b)| a * b.conj()).sum();
            if i == k {
                let d = m[(i, i)].re + shift - dot.re;
                if d <= 0.0 {
                    return false;
                }
                l[i * n + i] = C64::new(d.sqrt(), 0.0);
            } else {
                l[i * n + k] = (m[(i, k)] - dot) / l[k * n + k].re;
            }
        }
    }
    true
}

/// `V f(Λ) V†` for a Hermitian matrix.
pub fn spectral_apply(m: &CMat, f: impl Fn(f64) -> C64) -> CMat {
    let (vals, vecs) = hermitian_eigh(m);
    let mut scaled = vecs.clone();
    for (k, &v) in vals.iter().enumerate() {
        let fk = f(v);
        scaled.column_mut(k).iter_mut().for_each(|x| *x *= fk);
    }
    scaled * vecs.adjoint()
}

/// `exp(-i θ G)` for Hermitian `G`.
pub fn unitary_from_generator(g: &CMat, theta: f64) -> CMat {
    spectral_apply(g, |lambda| C64::from_polar(1.0, -theta * lambda))
}

pub fn hermiticity_defect(m: &CMat) -> f64 {
    (m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn trace(m: &CMat) -> C64 {
    m.diagonal().iter().sum()
}

/// `½ ‖a − b‖₁` for Hermitian `a`, `b`.
pub fn trace_distance(a: &CMat, b: &CMat) -> f64 {
    0.5 * hermitian_eigenvalues(&(a - b)).iter().map(|x| x.abs()).sum::<f64>()
}

pub fn outer(psi: &CVec) -> CMat {
    psi * psi.adjoint()
}

pub fn kron_all(factors: &[CMat]) -> CMat {
    let mut iter = factors.iter();
    let first = iter.next().expect("at least one factor").clone();
    iter.fold(first, |acc, f| acc.kronecker(f))
}

pub fn kron_vecs(factors: &[CVec]) -> CVec {
    let mut iter = factors.iter();
    let first = iter.next().expect("at least one factor").clone();
    iter.fold(first, |acc, f| acc.kronecker(f))
}

/// `tr(ρ A)` for sparse `A`.
pub fn expect_mixed(rho: &CMat, a: &SparseOp) -> C64 {
    a.triplet_iter().map(|(i, k, v)| *v * rho[(k, i)]).sum()
}

/// `<ψ|A|ψ>` for sparse `A`.
pub fn expect_pure(psi: &CVec, a: &SparseOp) -> C64 {
    a.triplet_iter().map(|(i, k, v)| psi[i].conj() * *v * psi[k]).sum()
}

pub fn sparse_matvec(a: &SparseOp, v: &CVec) -> CVec {
    let mut out = CVec::zeros(a.nrows());
    for (i, k, val) in a.triplet_iter() {
        out[i] += *val * v[k];
    }
    out
}

/// `A·M` for sparse `A` and dense `M`.
pub fn sparse_dense(a: &SparseOp, m: &CMat) -> CMat {
    let mut out = CMat::zeros(a.nrows(), m.ncols());
    for (i, k, val) in a.triplet_iter() {
        for col in 0..m.ncols() {
            out[(i, col)] += *val * m[(k, col)];
        }
    }
    out
}

/// `tr(A Y)` for sparse `A` and dense `Y`.
pub fn trace_sparse_dense(a: &SparseOp, y: &CMat) -> C64 {
    a.triplet_iter().map(|(i, k, v)| *v * y[(k, i)]).sum()
}

pub fn sparse_from_triplets(dim: usize, triplets: &[(usize, usize, C64)]) -> SparseOp {
    let mut coo = CooMatrix::new(dim, dim);
    for &(r, c, v) in triplets {
        if v.norm() > 0.0 {
            coo.push(r, c, v);
        }
    }
    CsrMatrix::from(&coo)
}

pub fn sparse_to_dense(a: &SparseOp) -> CMat {
    let mut out = CMat::zeros(a.nrows(), a.ncols());
    for (i, k, v) in a.triplet_iter() {
        out[(i, k)] += *v;
    }
    out
}

/// Digit layout of an `n`-site register with local dimension `d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Layout {
    pub d: usize,
    pub n: usize,
}

impl Layout {
    pub fn new(d: usize, n: usize) -> Self {
        Self { d, n }
    }

    pub fn dim(&self) -> usize {
        self.d.pow(self.n as u32)
    }

    pub fn stride(&self, site: usize) -> usize {
        self.d.pow((self.n - 1 - site) as u32)
    }

    pub fn digit(&self, index: usize, site: usize) -> usize {
        (index / self.stride(site)) % self.d
    }

    pub fn digits(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.n];
        for site in (0..self.n).rev() {
            out[site] = index % self.d;
            index /= self.d;
        }
        out
    }

    pub fn index(&self, digits: &[usize]) -> usize {
        digits.iter().fold(0, |acc, &k| acc * self.d + k)
    }

    /// `(u acting on `site`) · v` in place.
    pub fn apply_site(&self, v: &mut [C64], u: &CMat, site: usize) {
        let d = self.d;
        let stride = self.stride(site);
        let block = stride * d;
        let mut buf = vec![ZERO; d];
        for base in (0..v.len()).step_by(block) {
            for off in 0..stride {
                for (a, slot) in buf.iter_mut().enumerate() {
                    *slot = v[base + off + a * stride];
                }
                for a in 0..d {
                    let mut acc = ZERO;
                    for (b, x) in buf.iter().enumerate() {
                        acc += u[(a, b)] * x;
                    }
                    v[base + off + a * stride] = acc;
                }
            }
        }
    }

    /// `u^{⊗N} v`.
    pub fn apply_all_sites(&self, v: &mut [C64], u: &CMat) {
        for site in 0..self.n {
            self.apply_site(v, u, site);
        }
    }

    /// `u^{⊗N} ρ u^{⊗N†}`.
    pub fn conjugate_all_sites(&self, rho: &CMat, u: &CMat) -> CMat {
        let left = self.left_multiply_all(rho, u);
        let left_adj = left.adjoint();
        // u ρ u† = u (u ρ)†  since ρ is Hermitian
        self.left_multiply_all(&left_adj, u)
    }

    fn left_multiply_all(&self, m: &CMat, u: &CMat) -> CMat {
        let mut out = m.clone();
        for mut col in out.column_iter_mut() {
            let slice = col.as_mut_slice();
            self.apply_all_sites(slice, u);
        }
        out
    }

    /// Reduced density matrix on `keep` (in the given order) of a dense state.
    pub fn partial_trace(&self, rho: &CMat, keep: &[usize]) -> CMat {
        let (kept, traced) = self.split_indices(keep);
        let kd = kept.len();
        let mut out = CMat::zeros(kd, kd);
        for (a, row_a) in kept.iter().enumerate() {
            for (b, row_b) in kept.iter().enumerate() {
                let mut acc = ZERO;
                for &t in &traced {
                    acc += rho[(row_a + t, row_b + t)];
                }
                out[(a, b)] = acc;
            }
        }
        out
    }

    /// Reduced density matrix on `keep` of a pure state.
    pub fn partial_trace_pure(&self, psi: &CVec, keep: &[usize]) -> CMat {
        let (kept, traced) = self.split_indices(keep);
        let kd = kept.len();
        let mut out = CMat::zeros(kd, kd);
        for &t in &traced {
            for (a, ia) in kept.iter().enumerate() {
                let xa = psi[ia + t];
                if xa.norm_sqr() == 0.0 {
                    continue;
                }
                for (b, ib) in kept.iter().enumerate() {
                    out[(a, b)] += xa * psi[ib + t].conj();
                }
            }
        }
        out
    }

    /// Offsets contributed by kept-site configurations (in `keep` order) and
    /// by traced-site configurations; a full index is the sum of one of each.
    fn split_indices(&self, keep: &[usize]) -> (Vec<usize>, Vec<usize>) {
        let traced_sites: Vec<usize> = (0..self.n).filter(|s| !keep.contains(s)).collect();
        (
            self.offsets(keep),
            self.offsets(&traced_sites),
        )
    }

    fn offsets(&self, sites: &[usize]) -> Vec<usize> {
        let count = self.d.pow(sites.len() as u32);
        (0..count)
            .map(|cfg| {
                let sub = Layout::new(self.d, sites.len());
                sites
                    .iter()
                    .enumerate()
                    .map(|(pos, &site)| sub.digit(cfg, pos) * self.stride(site))
                    .sum()
            })
            .collect()
    }

    /// Partial transpose on the listed sites.
    pub fn partial_transpose(&self, rho: &CMat, sites: &[usize]) -> CMat {
        let dim = self.dim();
        let mut out = CMat::zeros(dim, dim);
        for r in 0..dim {
            for col in 0..dim {
                let (mut r2, mut c2) = (r, col);
                for &s in sites {
                    let st = self.stride(s);
                    let dr = (r / st) % self.d;
                    let dc = (col / st) % self.d;
                    r2 = r2 - dr * st + dc * st;
                    c2 = c2 - dc * st + dr * st;
                }
                out[(r2, c2)] = rho[(r, col)];
            }
        }
        out
    }

    /// Permutes sites: output site `k` holds input site `perm[k]`.
    pub fn permutation_matrix_indices(&self, perm: &[usize]) -> Vec<usize> {
        (0..self.dim())
            .map(|idx| {
                let digits = self.digits(idx);
                let permuted: Vec<usize> = perm.iter().map(|&p| digits[p]).collect();
                self.index(&permuted)
            })
            .collect()
    }
}
