//! Small linear-algebra layer: dense symmetric eigensystems, a symmetric CSR
//! matrix, and Krylov (Lanczos) propagation for the sparse case.

mod dense;
mod krylov;
mod sparse;

pub use dense::EigenSystem;
pub use krylov::{expm_apply, KrylovOptions};
pub use sparse::SymmetricCsr;

use num_complex::Complex64;

pub fn norm_sqr(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

pub fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Euclidean distance between two state vectors.
pub fn distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt()
}
