//! Spectra, parity blocks, and non-normality probes for Toeplitz matrices.

use ndarray::{Array2, ArrayView2};
use num_complex::Complex64;

use crate::eigen;
use crate::error::{Error, Result};
use crate::svd;
use crate::toeplitz::ToeplitzMatrix;

/// Eigenvalues of one operator, canonically sorted (real part, then
/// imaginary part), with the matrix metadata carried along.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub eigenvalues: Vec<Complex64>,
    pub k: u32,
    pub label: String,
}

/// All eigenvalues of the matrix.
pub fn eigenvalues(mat: &ToeplitzMatrix) -> Result<Spectrum> {
    let eigenvalues = eigenvalues_of(mat.entries().view())?;
    Ok(Spectrum {
        eigenvalues,
        k: mat.k(),
        label: mat.label().to_string(),
    })
}

/// Eigenvalues of an arbitrary square complex matrix, canonically sorted.
pub fn eigenvalues_of(matrix: ArrayView2<Complex64>) -> Result<Vec<Complex64>> {
    eigen::dense_eigenvalues(matrix)
}

/// Restrict a parity-preserving matrix to its even-index and odd-index
/// invariant subspaces.
///
/// Requires every shift in the matrix band structure to be even; the union of
/// the two block spectra is then the full spectrum.
pub fn parity_blocks(mat: &ToeplitzMatrix) -> Result<(Array2<Complex64>, Array2<Complex64>)> {
    if let Some(odd) = mat.shift_set().iter().find(|d| (*d % 2) != 0) {
        return Err(Error::NotParityPreserving(*odd));
    }
    let n = mat.size();
    let even: Vec<usize> = (0..n).step_by(2).collect();
    let odd: Vec<usize> = (1..n).step_by(2).collect();
    let extract = |idx: &[usize]| {
        Array2::from_shape_fn((idx.len(), idx.len()), |(r, c)| {
            mat.entries()[[idx[r], idx[c]]]
        })
    };
    Ok((extract(&even), extract(&odd)))
}

/// Resolvent norm `1 / sigma_min(mat - lambda I)`, with `+inf` as the
/// sentinel when the smallest singular value underflows to zero.
pub fn resolvent_norm(mat: &ToeplitzMatrix, lambda: Complex64) -> f64 {
    let n = mat.size();
    let mut shifted = mat.entries().clone();
    for d in 0..n {
        shifted[[d, d]] -= lambda;
    }
    let sv = svd::singular_values(shifted.view());
    let sigma_min = sv.first().copied().unwrap_or(0.0);
    let inv = 1.0 / sigma_min;
    if sigma_min == 0.0 || !inv.is_finite() {
        f64::INFINITY
    } else {
        inv
    }
}

/// Frobenius norm of the p-th matrix power, by repeated multiplication.
pub fn power_norm(mat: &ToeplitzMatrix, p: u32) -> f64 {
    let n = mat.size();
    if p == 0 {
        return (n as f64).sqrt();
    }
    let base = mat.entries();
    let mut acc = base.clone();
    for _ in 1..p {
        acc = acc.dot(base);
    }
    acc.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}
