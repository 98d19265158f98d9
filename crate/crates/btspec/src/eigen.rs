//! Dense complex eigenvalues: Householder Hessenberg reduction followed by a
//! single-shift QR iteration with Wilkinson shifts.
//!
//! Before reducing, the matrix is conjugated by a fixed unitary (two
//! pseudo-random Householder reflectors from a hard-coded seed). The spectrum
//! is untouched, but the working matrix becomes dense and generic, so the
//! computed eigenvalues of defective inputs land where backward stability
//! puts them: on the eps-pseudospectrum of the operator rather than on an
//! artifact of a special banded presentation. The rotation is deterministic,
//! so repeated runs produce identical output.

use ndarray::{Array2, ArrayView2};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Total QR iteration budget per matrix, in units of the dimension.
const MAX_TOTAL_ITERATIONS_PER_DIM: usize = 40;
/// Exceptional-shift cadence when a window stagnates.
const EXCEPTIONAL_SHIFT_PERIOD: usize = 20;

struct SplitMix(u64);

impl SplitMix {
    fn next_unit(&mut self) -> f64 {
        self.0 = self
            .0
            .wrapping_mul(6_364_136_223_846_793_005)
            .wrapping_add(1_442_695_040_888_963_407);
        ((self.0 >> 11) as f64) / (1u64 << 53) as f64 - 0.5
    }
}

/// Conjugate `h` by two fixed Householder reflectors.
fn apply_generic_rotation(h: &mut Array2<Complex64>) {
    let n = h.nrows();
    if n < 2 {
        return;
    }
    let mut rng = SplitMix(0x5eed_0b5e_c0de_0001);
    for _ in 0..2 {
        let mut v: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(rng.next_unit(), rng.next_unit()))
            .collect();
        let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        for x in &mut v {
            *x /= norm;
        }
        // rows: h -= 2 v (v^H h)
        for j in 0..n {
            let mut w = Complex64::ZERO;
            for i in 0..n {
                w += v[i].conj() * h[[i, j]];
            }
            let w2 = 2.0 * w;
            for i in 0..n {
                h[[i, j]] -= v[i] * w2;
            }
        }
        // columns: h -= 2 (h v) v^H
        for i in 0..n {
            let mut u = Complex64::ZERO;
            for j in 0..n {
                u += h[[i, j]] * v[j];
            }
            let u2 = 2.0 * u;
            for j in 0..n {
                h[[i, j]] -= u2 * v[j].conj();
            }
        }
    }
}

fn hessenberg_in_place(h: &mut Array2<Complex64>) {
    let n = h.nrows();
    if n < 3 {
        return;
    }
    let mut v = vec![Complex64::ZERO; n];
    for c in 0..n - 2 {
        let norm_x = (c + 1..n).map(|i| h[[i, c]].norm_sqr()).sum::<f64>().sqrt();
        if norm_x == 0.0 {
            continue;
        }
        let x0 = h[[c + 1, c]];
        let alpha = if x0 == Complex64::ZERO {
            Complex64::new(-norm_x, 0.0)
        } else {
            -(x0 / x0.norm()) * norm_x
        };
        for i in c + 1..n {
            v[i] = h[[i, c]];
        }
        v[c + 1] -= alpha;
        let vnorm = (c + 1..n).map(|i| v[i].norm_sqr()).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            continue;
        }
        for i in c + 1..n {
            v[i] /= vnorm;
        }
        // left: rows c+1..n over columns c..n
        for j in c..n {
            let mut w = Complex64::ZERO;
            for i in c + 1..n {
                w += v[i].conj() * h[[i, j]];
            }
            let w2 = 2.0 * w;
            for i in c + 1..n {
                h[[i, j]] -= v[i] * w2;
            }
        }
        // right: columns c+1..n over all rows
        for i in 0..n {
            let mut u = Complex64::ZERO;
            for j in c + 1..n {
                u += h[[i, j]] * v[j];
            }
            let u2 = 2.0 * u;
            for j in c + 1..n {
                h[[i, j]] -= u2 * v[j].conj();
            }
        }
        h[[c + 1, c]] = alpha;
        for i in c + 2..n {
            h[[i, c]] = Complex64::ZERO;
        }
    }
}

/// Eigenvalue of the trailing 2x2 block closest to its bottom-right entry.
fn wilkinson_shift(h: &Array2<Complex64>, hi: usize) -> Complex64 {
    let a = h[[hi - 2, hi - 2]];
    let b = h[[hi - 2, hi - 1]];
    let c = h[[hi - 1, hi - 2]];
    let d = h[[hi - 1, hi - 1]];
    let tr = a + d;
    let det = a * d - b * c;
    let disc = (tr * tr - 4.0 * det).sqrt();
    let r1 = 0.5 * (tr + disc);
    let r2 = 0.5 * (tr - disc);
    if (r1 - d).norm() <= (r2 - d).norm() {
        r1
    } else {
        r2
    }
}

/// One implicit single-shift QR step on the Hessenberg window [lo, hi).
fn qr_step(h: &mut Array2<Complex64>, lo: usize, hi: usize, shift: Complex64) {
    let trace = std::env::var_os("BTSPEC_EIG_TRACE").is_some() && hi - lo == 2;
    if trace {
        eprintln!(
            "  qr2 shift={shift} block=[[{}, {}],[{}, {}]]",
            h[[lo, lo]],
            h[[lo, lo + 1]],
            h[[lo + 1, lo]],
            h[[lo + 1, lo + 1]]
        );
    }
    for i in lo..hi {
        h[[i, i]] -= shift;
    }
    let mut rotations = Vec::with_capacity(hi - lo - 1);
    for i in lo..hi - 1 {
        let a = h[[i, i]];
        let b = h[[i + 1, i]];
        let r = (a.norm_sqr() + b.norm_sqr()).sqrt();
        let (c, s) = if r == 0.0 {
            (Complex64::ONE, Complex64::ZERO)
        } else {
            (a / r, b / r)
        };
        // rows i, i+1: G^H = [[conj(c), conj(s)], [-s, c]]
        for j in i..hi {
            let x = h[[i, j]];
            let y = h[[i + 1, j]];
            h[[i, j]] = c.conj() * x + s.conj() * y;
            h[[i + 1, j]] = -s * x + c * y;
        }
        rotations.push((c, s));
    }
    for (idx, (c, s)) in rotations.iter().enumerate() {
        let i = lo + idx;
        // columns i, i+1: right-multiply by G = [[c, -conj(s)], [s, conj(c)]]
        let row_end = (i + 2).min(hi - 1);
        for r in lo..=row_end {
            let x = h[[r, i]];
            let y = h[[r, i + 1]];
            h[[r, i]] = x * c + y * s;
            h[[r, i + 1]] = -x * s.conj() + y * c.conj();
        }
    }
    for i in lo..hi {
        h[[i, i]] += shift;
    }
}

/// All eigenvalues of a square complex matrix, sorted by real part with ties
/// broken by imaginary part.
pub(crate) fn dense_eigenvalues(a: ArrayView2<Complex64>) -> Result<Vec<Complex64>> {
    let n = a.nrows();
    if n != a.ncols() {
        return Err(Error::InvalidArgument(format!(
            "matrix must be square, got {} x {}",
            n,
            a.ncols()
        )));
    }
    if a.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(Error::InvalidArgument(
            "matrix entries must be finite".into(),
        ));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    if n == 1 {
        return Ok(vec![a[[0, 0]]]);
    }
    let mut h = a.to_owned();
    apply_generic_rotation(&mut h);
    hessenberg_in_place(&mut h);

    let scale = h.iter().map(|v| v.norm()).fold(0.0f64, f64::max);
    let eps = f64::EPSILON;
    let mut eig = Vec::with_capacity(n);
    let mut hi = n;
    let mut window_iterations = 0usize;
    let mut total_iterations = 0usize;
    while hi > 0 {
        if hi == 1 {
            eig.push(h[[0, 0]]);
            break;
        }
        // deflation scan from the bottom
        let mut lo = hi - 1;
        let mut deflated_at_bottom = false;
        loop {
            let mut thr = eps * (h[[lo - 1, lo - 1]].norm() + h[[lo, lo]].norm());
            if thr == 0.0 {
                thr = eps * scale;
            }
            if h[[lo, lo - 1]].norm() <= thr {
                h[[lo, lo - 1]] = Complex64::ZERO;
                if lo == hi - 1 {
                    deflated_at_bottom = true;
                }
                break;
            }
            if lo == 1 {
                lo = 0;
                break;
            }
            lo -= 1;
        }
        if deflated_at_bottom {
            eig.push(h[[hi - 1, hi - 1]]);
            hi -= 1;
            window_iterations = 0;
            continue;
        }
        window_iterations += 1;
        total_iterations += 1;
        if std::env::var_os("BTSPEC_EIG_TRACE").is_some() {
            let subs: Vec<String> = (1..hi)
                .map(|i| format!("{:.2e}", h[[i, i - 1]].norm()))
                .collect();
            eprintln!("it={total_iterations} lo={lo} hi={hi} sub=[{}]", subs.join(","));
        }
        if total_iterations > MAX_TOTAL_ITERATIONS_PER_DIM * n {
            return Err(Error::NumericalFailure);
        }
        let shift = if window_iterations % EXCEPTIONAL_SHIFT_PERIOD == 0 {
            1.5 * h[[hi - 1, hi - 2]]
        } else {
            wilkinson_shift(&h, hi)
        };
        qr_step(&mut h, lo, hi, shift);
    }
    if eig.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(Error::NumericalFailure);
    }
    sort_canonical(&mut eig);
    Ok(eig)
}

/// Canonical spectrum ordering: by real part, ties by imaginary part.
pub(crate) fn sort_canonical(values: &mut [Complex64]) {
    values.sort_by(|a, b| {
        a.re.total_cmp(&b.re).then_with(|| a.im.total_cmp(&b.im))
    });
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::Array2;

    fn lcg_matrix(n: usize, seed: u64) -> Array2<Complex64> {
        let mut rng = SplitMix(seed);
        Array2::from_shape_fn((n, n), |_| Complex64::new(rng.next_unit(), rng.next_unit()))
    }

    fn lu_determinant(a: &Array2<Complex64>) -> Complex64 {
        let n = a.nrows();
        let mut m = a.clone();
        let mut det = Complex64::ONE;
        for c in 0..n {
            let (pivot_row, pivot) = (c..n)
                .map(|r| (r, m[[r, c]]))
                .max_by(|x, y| x.1.norm().total_cmp(&y.1.norm()))
                .unwrap();
            if pivot.norm() == 0.0 {
                return Complex64::ZERO;
            }
            if pivot_row != c {
                for j in 0..n {
                    let tmp = m[[c, j]];
                    m[[c, j]] = m[[pivot_row, j]];
                    m[[pivot_row, j]] = tmp;
                }
                det = -det;
            }
            det *= m[[c, c]];
            for r in c + 1..n {
                let factor = m[[r, c]] / m[[c, c]];
                for j in c..n {
                    let sub = factor * m[[c, j]];
                    m[[r, j]] -= sub;
                }
            }
        }
        det
    }

    #[test]
    fn diagonal_matrix_is_exact() {
        let n = 101;
        let mut a = Array2::<Complex64>::zeros((n, n));
        for l in 0..n {
            a[[l, l]] = Complex64::new((2.0 * l as f64 - 100.0) / 100.0, 0.0);
        }
        let eig = dense_eigenvalues(a.view()).unwrap();
        for (l, v) in eig.iter().enumerate() {
            let want = (2.0 * l as f64 - 100.0) / 100.0;
            assert!((v.re - want).abs() <= 1e-12, "l={l}: {v}");
            assert!(v.im.abs() <= 1e-12);
        }
    }

    #[test]
    fn random_matrix_trace_and_determinant() {
        for (n, seed) in [(12usize, 7u64), (37, 99)] {
            let a = lcg_matrix(n, seed);
            let eig = dense_eigenvalues(a.view()).unwrap();
            let trace: Complex64 = (0..n).map(|i| a[[i, i]]).sum();
            let eig_sum: Complex64 = eig.iter().sum();
            assert!(
                (trace - eig_sum).norm() < 1e-10 * n as f64,
                "trace mismatch: {trace} vs {eig_sum}"
            );
            let det = lu_determinant(&a);
            let eig_prod: Complex64 = eig.iter().product();
            assert!(
                (det - eig_prod).norm() < 1e-9 * det.norm().max(1.0),
                "determinant mismatch: {det} vs {eig_prod}"
            );
        }
    }

    #[test]
    fn hermitian_matrix_has_real_spectrum() {
        let n = 24;
        let g = lcg_matrix(n, 5);
        let mut a = Array2::<Complex64>::zeros((n, n));
        for i in 0..n {
            for j in 0..n {
                a[[i, j]] = 0.5 * (g[[i, j]] + g[[j, i]].conj());
            }
        }
        let eig = dense_eigenvalues(a.view()).unwrap();
        for v in &eig {
            assert!(v.im.abs() <= 1e-12, "nonreal eigenvalue {v}");
        }
    }

    #[test]
    fn known_two_by_two_block() {
        // [[-1, 0.2i], [0.2i, 1]] has eigenvalues +/- sqrt(0.96)
        let mut a = Array2::<Complex64>::zeros((2, 2));
        a[[0, 0]] = Complex64::new(-1.0, 0.0);
        a[[0, 1]] = Complex64::new(0.0, 0.2);
        a[[1, 0]] = Complex64::new(0.0, 0.2);
        a[[1, 1]] = Complex64::new(1.0, 0.0);
        let eig = dense_eigenvalues(a.view()).unwrap();
        let want = 0.96f64.sqrt();
        assert!((eig[0] - Complex64::new(-want, 0.0)).norm() < 1e-14);
        assert!((eig[1] - Complex64::new(want, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn rejects_non_square_and_non_finite() {
        let a = Array2::<Complex64>::zeros((2, 3));
        assert!(dense_eigenvalues(a.view()).is_err());
        let mut b = Array2::<Complex64>::zeros((2, 2));
        b[[0, 1]] = Complex64::new(f64::NAN, 0.0);
        assert!(dense_eigenvalues(b.view()).is_err());
    }
}
