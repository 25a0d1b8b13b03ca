//! Rank-d truncated SVD of a sparse matrix.
//!
//! Small matrices go through a dense decomposition. Larger ones use randomized
//! subspace iteration: a Gaussian test matrix with `d + oversampling` columns,
//! `power_iters` rounds of `A Aᵀ` with re-orthonormalization, then an exact
//! decomposition of the projected problem.

use nalgebra::{DMatrix, SymmetricEigen, QR};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::tfidf::SparseMatrix;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SvdMethod {
    /// Dense below `exact_limit` entries, randomized above.
    Auto,
    Exact,
    Randomized,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SvdOptions {
    pub method: SvdMethod,
    pub oversampling: usize,
    pub power_iters: usize,
    pub exact_limit: usize,
}

impl Default for SvdOptions {
    fn default() -> Self {
        SvdOptions {
            method: SvdMethod::Auto,
            oversampling: 10,
            power_iters: 2,
            exact_limit: 250_000,
        }
    }
}

/// `A ≈ U diag(sigma) Vᵀ` with `U: m × d`, `V: n × d`, `sigma` descending.
/// Components beyond the numerical rank are zero.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedSvd {
    pub u: DMatrix<f64>,
    pub sigma: Vec<f64>,
    pub v: DMatrix<f64>,
    pub rank: usize,
}

impl TruncatedSvd {
    pub fn reconstruct(&self) -> DMatrix<f64> {
        let mut us = self.u.clone();
        for (j, s) in self.sigma.iter().enumerate() {
            us.column_mut(j).scale_mut(*s);
        }
        us * self.v.transpose()
    }
}

pub fn truncated_svd(a: &SparseMatrix, d: usize, seed: u64, opts: &SvdOptions) -> Result<TruncatedSvd> {
    if d < 1 {
        return Err(Error::invalid("SVD dimension must be at least 1"));
    }
    let (m, n) = (a.nrows(), a.ncols());
    if m == 0 || n == 0 {
        return Ok(assemble(m, n, d, Vec::new(), &DMatrix::zeros(m, 0), &DMatrix::zeros(n, 0)));
    }
    let exact = match opts.method {
        SvdMethod::Exact => true,
        SvdMethod::Randomized => false,
        SvdMethod::Auto => m * n <= opts.exact_limit,
    };
    if exact {
        Ok(exact_svd(a, d))
    } else {
        Ok(randomized_svd(a, d, seed, opts))
    }
}

fn exact_svd(a: &SparseMatrix, d: usize) -> TruncatedSvd {
    let (m, n) = (a.nrows(), a.ncols());
    let svd = a.to_dense().svd(true, true);
    let u = svd.u.expect("u requested");
    let v = svd.v_t.expect("v requested").transpose();
    let sigma: Vec<f64> = svd.singular_values.iter().copied().collect();
    assemble(m, n, d, sigma, &u, &v)
}

fn orthonormalize(y: DMatrix<f64>) -> DMatrix<f64> {
    QR::new(y).q()
}

fn randomized_svd(a: &SparseMatrix, d: usize, seed: u64, opts: &SvdOptions) -> TruncatedSvd {
    let (m, n) = (a.nrows(), a.ncols());
    let l = (d + opts.oversampling).min(m).min(n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let omega = DMatrix::from_fn(n, l, |_, _| StandardNormal.sample(&mut rng));
    let mut q = orthonormalize(a.mul_dense(&omega));
    for _ in 0..opts.power_iters {
        let z = orthonormalize(a.tr_mul_dense(&q));
        q = orthonormalize(a.mul_dense(&z));
    }
    // Bᵀ = Aᵀ Q is n × l; B Bᵀ is the small l × l Gram matrix.
    let bt = a.tr_mul_dense(&q);
    let gram = bt.transpose() * &bt;
    let eig = SymmetricEigen::new(gram);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let k = order.len();
    let mut sigma = Vec::with_capacity(k);
    let mut ub = DMatrix::zeros(k, k);
    for (c, &i) in order.iter().enumerate() {
        sigma.push(eig.eigenvalues[i].max(0.0).sqrt());
        ub.set_column(c, &eig.eigenvectors.column(i));
    }
    let u = &q * &ub;
    let mut v = &bt * &ub;
    for (c, s) in sigma.iter().enumerate() {
        if *s > 0.0 {
            v.column_mut(c).unscale_mut(*s);
        }
    }
    assemble(m, n, d, sigma, &u, &v)
}

/// Keeps the leading `d` components, zeroing those below the rank tolerance
/// and padding with zeros when fewer than `d` exist.
fn assemble(m: usize, n: usize, d: usize, sigma: Vec<f64>, u: &DMatrix<f64>, v: &DMatrix<f64>) -> TruncatedSvd {
    let smax = sigma.first().copied().unwrap_or(0.0);
    let tol = smax * (m.max(n) as f64) * f64::EPSILON;
    let mut out_u = DMatrix::zeros(m, d);
    let mut out_v = DMatrix::zeros(n, d);
    let mut out_s = vec![0.0; d];
    let mut rank = 0;
    for (j, &s) in sigma.iter().enumerate().take(d) {
        if s <= tol || s == 0.0 {
            break;
        }
        out_s[j] = s;
        out_u.set_column(j, &u.column(j));
        out_v.set_column(j, &v.column(j));
        rank += 1;
    }
    TruncatedSvd {
        u: out_u,
        sigma: out_s,
        v: out_v,
        rank,
    }
}
