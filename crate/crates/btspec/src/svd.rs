//! Singular values by one-sided Jacobi rotations on columns.
//!
//! Columns are rotated in pairs until they are numerically orthogonal; the
//! singular values are then the column norms. Slower than bidiagonalization
//! but simple and accurate: small singular values come out with high relative
//! accuracy, which is what resolvent-norm probes of very non-normal matrices
//! need.

use ndarray::ArrayView2;
use num_complex::Complex64;

const MAX_SWEEPS: usize = 60;
const ORTHO_TOL: f64 = 1e-14;

/// All singular values of a rectangular complex matrix, ascending.
pub(crate) fn singular_values(a: ArrayView2<Complex64>) -> Vec<f64> {
    let rows = a.nrows();
    let cols = a.ncols();
    let mut c: Vec<Vec<Complex64>> = (0..cols)
        .map(|j| (0..rows).map(|i| a[[i, j]]).collect())
        .collect();
    for _ in 0..MAX_SWEEPS {
        let mut max_off = 0.0f64;
        for p in 0..cols.saturating_sub(1) {
            for q in p + 1..cols {
                let mut gpp = 0.0;
                let mut gqq = 0.0;
                let mut gpq = Complex64::ZERO;
                for i in 0..rows {
                    gpp += c[p][i].norm_sqr();
                    gqq += c[q][i].norm_sqr();
                    gpq += c[p][i].conj() * c[q][i];
                }
                if gpp == 0.0 || gqq == 0.0 {
                    continue;
                }
                let rel = gpq.norm() / (gpp * gqq).sqrt();
                if rel <= ORTHO_TOL {
                    continue;
                }
                max_off = max_off.max(rel);
                // rotation diagonalizing the 2x2 Gram block
                let phase = gpq / gpq.norm();
                let tau = (gqq - gpp) / (2.0 * gpq.norm());
                let t = if tau == 0.0 {
                    1.0
                } else {
                    tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt())
                };
                let cos = 1.0 / (1.0 + t * t).sqrt();
                let sin = phase * (cos * t);
                for i in 0..rows {
                    let x = c[p][i];
                    let y = c[q][i];
                    c[p][i] = cos * x - sin.conj() * y;
                    c[q][i] = sin * x + cos * y;
                }
            }
        }
        if max_off <= ORTHO_TOL {
            break;
        }
    }
    let mut sv: Vec<f64> = c
        .iter()
        .map(|col| col.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    sv.sort_by(f64::total_cmp);
    sv
}
