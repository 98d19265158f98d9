//! Matching approximate quantization solutions against exact spectra and
//! fitting convergence orders in the degree.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::assignment::min_cost_assignment;
use crate::bohr_sommerfeld::{bs_spectrum, Variant};
use crate::error::{Error, Result};
use crate::spectra::eigenvalues;
use crate::toeplitz::{operator_matrix, OperatorFamily};

/// Width multiplier for the approximate list, absorbing boundary drift.
const WINDOW_SLACK: f64 = 1.05;
/// Seeds can never leave this half-width (contour validity).
const MAX_WINDOW: f64 = 0.9;

/// One matched (exact, approximate) eigenvalue pair.
#[derive(Debug, Clone, Copy)]
pub struct MatchedPair {
    pub exact: Complex64,
    pub approx: Complex64,
    pub distance: f64,
}

/// Statistics of a minimum-distance matching.
#[derive(Debug, Clone)]
pub struct MatchStats {
    /// Pairs sorted by the exact value (real part, then imaginary part).
    pub pairs: Vec<MatchedPair>,
    pub max_error: f64,
    pub mean_error: f64,
}

/// Matching plus the window bookkeeping of a full pipeline run.
#[derive(Debug, Clone)]
pub struct ComparisonReport {
    pub pairs: Vec<MatchedPair>,
    pub max_error: f64,
    pub mean_error: f64,
    pub exact_count_in_window: usize,
    pub bs_count_in_window: usize,
    pub k: u32,
    pub epsilon: f64,
    pub variant: Variant,
    pub window: f64,
}

/// Minimum-total-distance one-to-one matching of each exact eigenvalue to a
/// distinct approximation.
pub fn match_spectra(exact: &[Complex64], approx: &[Complex64]) -> Result<MatchStats> {
    if exact.is_empty() || approx.is_empty() {
        return Err(Error::InvalidArgument(
            "matching requires nonempty eigenvalue lists".into(),
        ));
    }
    if exact.len() > approx.len() {
        return Err(Error::CountMismatch {
            exact: exact.len(),
            approx: approx.len(),
        });
    }
    let cost: Vec<Vec<f64>> = exact
        .iter()
        .map(|e| approx.iter().map(|a| (e - a).norm()).collect())
        .collect();
    let assigned = min_cost_assignment(&cost);
    let mut pairs: Vec<MatchedPair> = exact
        .iter()
        .zip(&assigned)
        .map(|(e, &col)| MatchedPair {
            exact: *e,
            approx: approx[col],
            distance: (e - approx[col]).norm(),
        })
        .collect();
    pairs.sort_by(|a, b| {
        a.exact
            .re
            .total_cmp(&b.exact.re)
            .then_with(|| a.exact.im.total_cmp(&b.exact.im))
    });
    let max_error = pairs.iter().map(|p| p.distance).fold(0.0, f64::max);
    let mean_error = pairs.iter().map(|p| p.distance).sum::<f64>() / pairs.len() as f64;
    Ok(MatchStats {
        pairs,
        max_error,
        mean_error,
    })
}

/// Run the full pipeline at one degree: exact spectrum of the operator family
/// backing `variant` (T for principal, S for the half-form rule), windowed on
/// `|Re lambda| <= window`, matched against the quantization sweep computed
/// on a 5% wider seed window.
pub fn compare_operator(
    k: u32,
    epsilon: f64,
    variant: Variant,
    window: f64,
    quad_tol: f64,
) -> Result<ComparisonReport> {
    if !(window > 0.0 && window <= MAX_WINDOW) {
        return Err(Error::InvalidArgument(format!(
            "window must lie in (0, {MAX_WINDOW}], got {window}"
        )));
    }
    let family = match variant {
        Variant::Principal => OperatorFamily::T,
        Variant::HalfForm => OperatorFamily::S,
    };
    let spectrum = eigenvalues(&operator_matrix(family, k, epsilon)?)?;
    let exact: Vec<Complex64> = spectrum
        .eigenvalues
        .iter()
        .copied()
        .filter(|v| v.re.abs() <= window)
        .collect();
    let sweep = bs_spectrum(
        k,
        epsilon,
        variant,
        (WINDOW_SLACK * window).min(MAX_WINDOW),
        quad_tol,
    )?;
    let approx: Vec<Complex64> = sweep.solutions.iter().map(|s| s.lambda).collect();
    let bs_count_in_window = approx.iter().filter(|v| v.re.abs() <= window).count();
    let stats = match_spectra(&exact, &approx)?;
    Ok(ComparisonReport {
        pairs: stats.pairs,
        max_error: stats.max_error,
        mean_error: stats.mean_error,
        exact_count_in_window: exact.len(),
        bs_count_in_window,
        k,
        epsilon,
        variant,
        window,
    })
}

/// Max-error table over degrees plus the fitted log-log slope.
#[derive(Debug, Clone)]
pub struct ConvergenceStudy {
    pub table: Vec<(u32, f64)>,
    pub slope: f64,
}

/// Least-squares slope of `log(err)` against `log(k)`.
pub fn convergence_slope(table: &[(u32, f64)]) -> f64 {
    let n = table.len() as f64;
    let xs: Vec<f64> = table.iter().map(|(k, _)| (*k as f64).ln()).collect();
    let ys: Vec<f64> = table.iter().map(|(_, e)| e.ln()).collect();
    let x_mean = xs.iter().sum::<f64>() / n;
    let y_mean = ys.iter().sum::<f64>() / n;
    let cov: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (x - x_mean) * (y - y_mean))
        .sum();
    let var: f64 = xs.iter().map(|x| (x - x_mean) * (x - x_mean)).sum();
    cov / var
}

/// Run [`compare_operator`] over strictly increasing degrees (window 0.8) and
/// fit the convergence order.
pub fn convergence_study(
    ks: &[u32],
    epsilon: f64,
    variant: Variant,
    quad_tol: f64,
) -> Result<ConvergenceStudy> {
    if ks.len() < 3 {
        return Err(Error::InvalidArgument(
            "convergence study needs at least 3 degrees".into(),
        ));
    }
    if ks.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument(
            "degrees must be strictly increasing".into(),
        ));
    }
    let errors: Vec<Result<f64>> = ks
        .par_iter()
        .map(|&k| compare_operator(k, epsilon, variant, 0.8, quad_tol).map(|r| r.max_error))
        .collect();
    let mut table = Vec::with_capacity(ks.len());
    for (&k, err) in ks.iter().zip(errors) {
        table.push((k, err?));
    }
    let slope = convergence_slope(&table);
    Ok(ConvergenceStudy { table, slope })
}
