//! Covariant Toeplitz matrices on the quantum spaces of the sphere.
//!
//! The degree-k quantum space has orthonormal basis
//! `e_l = sqrt((k+1) * C(k,l) / (2*pi)) * z^l`, `0 <= l <= k`, and the
//! projector kernel is `(k+1)/(2*pi) * (1 + z*wbar)^k / (1 + |w|^2)^(k+2)`.
//! For a rational symbol term `c * z^a * wbar^b / (1 + z*wbar)^m` the operator
//! maps `e_l` to a multiple of `e_(a+l-b)`; the weight comes out of the radial
//! Beta integral in [`closed_form_integral`] plus the basis renormalization,
//! and collapses to
//!
//! ```text
//! M[a+l-b, l] = c * C(k-m, l-b) / sqrt(C(k,l) * C(k,a+l-b)).
//! ```
//!
//! [`toeplitz_quadrature_oracle`] instead evaluates the defining integral by
//! brute-force numerical quadrature and recovers the matrix column through a
//! discrete Fourier fit in z. It shares no formula with the closed form and
//! serves as its independent check.

use std::collections::BTreeSet;
use std::f64::consts::PI;

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::symbol::{StandardSymbol, SymbolExpr};

/// Convergence target for the oracle's internal radial refinement.
const ORACLE_INNER_TOL: f64 = 1e-11;
/// Entry-level agreement the oracle must reach before giving up.
const ORACLE_ACCEPT_TOL: f64 = 1e-8;
/// Radial cutoff ceiling; keeps powers of (1+t) inside f64 range.
const ORACLE_MAX_CUTOFF: f64 = 1e15;

// Lanczos approximation (g = 7, 9 terms); accurate to ~1e-15 relative for
// positive arguments, which covers every factorial this crate needs.
const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Natural log of the Gamma function for x > 0.
pub(crate) fn ln_gamma(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    let mut acc = LANCZOS_COEF[0];
    for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc += c / (x - 1.0 + i as f64);
    }
    let t = x + LANCZOS_G - 0.5;
    0.5 * (2.0 * PI).ln() + (x - 0.5) * t.ln() - t + acc.ln()
}

/// ln(n!)
pub(crate) fn ln_factorial(n: u32) -> f64 {
    ln_gamma(n as f64 + 1.0)
}

/// ln C(n, r) for 0 <= r <= n.
pub(crate) fn ln_binomial(n: u32, r: u32) -> f64 {
    debug_assert!(r <= n);
    ln_factorial(n) - ln_factorial(r) - ln_factorial(n - r)
}

/// Closed form of the radial/angular integral
/// `int_C w^alpha wbar^beta (1 + z*wbar)^gamma / (1 + |w|^2)^delta |dw ^ dwbar|`.
///
/// Returns the pair `(coefficient, zpower)` of the resulting monomial
/// `coefficient * z^zpower`. The angular integration forces
/// `zpower = alpha - beta`; outside `beta <= alpha <= beta + gamma` the
/// integral vanishes and `(0.0, 0)` is returned. The coefficient is
/// `2*pi * C(gamma, alpha-beta) * alpha! * (delta-alpha-2)! / (delta-1)!`,
/// evaluated through log-gamma so degrees up to a few hundred stay finite.
pub fn closed_form_integral(alpha: u32, beta: u32, gamma: u32, delta: u32) -> Result<(f64, i64)> {
    let degree_sum = alpha as i64 + beta as i64 + gamma as i64;
    let bound = 2 * (delta as i64 - 1);
    if degree_sum >= bound {
        return Err(Error::DivergentIntegral { degree_sum, bound });
    }
    if alpha < beta || alpha - beta > gamma {
        return Ok((0.0, 0));
    }
    // Convergence plus the angular constraint give alpha <= delta - 2.
    let ln = ln_binomial(gamma, alpha - beta) + ln_factorial(alpha)
        + ln_factorial(delta - alpha - 2)
        - ln_factorial(delta - 1);
    Ok((2.0 * PI * ln.exp(), alpha as i64 - beta as i64))
}

/// Dense matrix of a quantized symbol in the orthonormal basis `e_0..e_k`.
#[derive(Debug, Clone)]
pub struct ToeplitzMatrix {
    k: u32,
    entries: Array2<Complex64>,
    label: String,
    shift_set: BTreeSet<i64>,
}

impl ToeplitzMatrix {
    fn from_entries(k: u32, entries: Array2<Complex64>, label: String) -> Self {
        let mut shift_set = BTreeSet::new();
        for ((row, col), v) in entries.indexed_iter() {
            if *v != Complex64::ZERO {
                shift_set.insert(row as i64 - col as i64);
            }
        }
        Self {
            k,
            entries,
            label,
            shift_set,
        }
    }

    /// Basis degree; the matrix is `(k+1) x (k+1)`.
    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn size(&self) -> usize {
        self.k as usize + 1
    }

    pub fn entries(&self) -> &Array2<Complex64> {
        &self.entries
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Offsets d with some nonzero coupling `e_l -> e_(l+d)`.
    pub fn shift_set(&self) -> &BTreeSet<i64> {
        &self.shift_set
    }

    /// Largest entrywise deviation from the conjugate transpose.
    pub fn hermitian_defect(&self) -> f64 {
        let n = self.size();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                worst = worst.max((self.entries[[i, j]] - self.entries[[j, i]].conj()).norm());
            }
        }
        worst
    }
}

fn check_degree(expr: &SymbolExpr, k: u32) -> Result<()> {
    if k < 1 {
        return Err(Error::InvalidArgument("degree k must be >= 1".into()));
    }
    let required = expr.max_denom_pow();
    if k < required {
        return Err(Error::DegreeTooSmall { k, required });
    }
    Ok(())
}

/// Quantize a symbol at degree k using the closed-form entry weights.
pub fn toeplitz_matrix(expr: &SymbolExpr, k: u32) -> Result<ToeplitzMatrix> {
    check_degree(expr, k)?;
    let n = k as usize + 1;
    let mut entries = Array2::<Complex64>::zeros((n, n));
    for term in expr.terms() {
        let gamma = k - term.denom_pow;
        let delta = k + 2;
        for l in 0..=k {
            let (coeff, zpower) = closed_form_integral(l, term.wbar_pow, gamma, delta)?;
            if coeff == 0.0 {
                continue;
            }
            let row = term.z_pow as i64 + zpower;
            if row < 0 || row > k as i64 {
                // couplings leaving the quantum space are dropped
                continue;
            }
            let j = row as u32;
            // The closed-form weight (k+1)/(2*pi) * coeff * N_l/N_j collapses
            // to C(gamma, l-b) / sqrt(C(k,l) * C(k,j)); evaluating it as one
            // fused exponential keeps the log-space cancellations exact (the
            // constant symbol quantizes to the bitwise identity matrix).
            let weight = (ln_binomial(gamma, l - term.wbar_pow)
                - 0.5 * ln_binomial(k, l)
                - 0.5 * ln_binomial(k, j))
            .exp();
            entries[[j as usize, l as usize]] += term.coeff * weight;
        }
    }
    Ok(ToeplitzMatrix::from_entries(k, entries, expr.to_string()))
}

/// Operator families assembled from the named symbols.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorFamily {
    /// `T_k = quantize(x3) + i*eps*quantize(x1^2)`, size k+1.
    T,
    /// Size-k variant at degree k-1 whose normalized subprincipal symbol
    /// vanishes: `(1 - 1/k) quantize(x3) + i*eps*(1 - 3/k) quantize(x1^2) + i*eps/k`.
    S,
    /// The nilpotent raising operator, size k+1.
    Ladder,
}

impl OperatorFamily {
    pub fn name(&self) -> &'static str {
        match self {
            OperatorFamily::T => "T",
            OperatorFamily::S => "S",
            OperatorFamily::Ladder => "ladder",
        }
    }
}

/// Assemble one of the operator families at degree parameter k.
pub fn operator_matrix(family: OperatorFamily, k: u32, epsilon: f64) -> Result<ToeplitzMatrix> {
    if !epsilon.is_finite() {
        return Err(Error::InvalidArgument("epsilon must be finite".into()));
    }
    let i_eps = Complex64::new(0.0, epsilon);
    match family {
        OperatorFamily::T => {
            if k < 2 {
                return Err(Error::DegreeTooSmall { k, required: 2 });
            }
            let x3 = toeplitz_matrix(&SymbolExpr::named(StandardSymbol::X3), k)?;
            let x1sq = toeplitz_matrix(&SymbolExpr::named(StandardSymbol::X1Squared), k)?;
            let entries = x3.entries() + &x1sq.entries().mapv(|v| v * i_eps);
            Ok(ToeplitzMatrix::from_entries(
                k,
                entries,
                format!("T(k={k}, eps={epsilon})"),
            ))
        }
        OperatorFamily::S => {
            if k < 3 {
                return Err(Error::DegreeTooSmall { k, required: 3 });
            }
            let kf = k as f64;
            let x3 = toeplitz_matrix(&SymbolExpr::named(StandardSymbol::X3), k - 1)?;
            let x1sq = toeplitz_matrix(&SymbolExpr::named(StandardSymbol::X1Squared), k - 1)?;
            let mut entries = x3.entries().mapv(|v| v * (1.0 - 1.0 / kf))
                + &x1sq.entries().mapv(|v| v * i_eps * (1.0 - 3.0 / kf));
            for d in 0..k as usize {
                entries[[d, d]] += i_eps / kf;
            }
            Ok(ToeplitzMatrix::from_entries(
                k - 1,
                entries,
                format!("S(k={k}, eps={epsilon})"),
            ))
        }
        OperatorFamily::Ladder => {
            if k < 2 {
                return Err(Error::DegreeTooSmall { k, required: 2 });
            }
            let ladder = toeplitz_matrix(&SymbolExpr::named(StandardSymbol::Ladder), k)?;
            Ok(ToeplitzMatrix::from_entries(
                k,
                ladder.entries().clone(),
                format!("ladder(k={k})"),
            ))
        }
    }
}

// ---------------------------------------------------------------------------
// Quadrature oracle
// ---------------------------------------------------------------------------

/// Angular factors reused across radii and z samples for one (l, b, gamma).
struct AngularTable {
    /// `rot_i^l * conj(rot_i)^b` at the trapezoid angles.
    monomial: Vec<Complex64>,
    /// `conj(rot_i)`.
    rot_conj: Vec<Complex64>,
}

impl AngularTable {
    fn new(l: u32, b: u32, gamma: u32) -> Self {
        // exact for trig polynomials of degree < n_phi
        let n_phi = 2 * (l + b + gamma) as usize + 8;
        let mut monomial = Vec::with_capacity(n_phi);
        let mut rot_conj = Vec::with_capacity(n_phi);
        for i in 0..n_phi {
            let phi = 2.0 * PI * i as f64 / n_phi as f64;
            let rot = Complex64::from_polar(1.0, phi);
            monomial.push(rot.powi(l as i32) * rot.conj().powi(b as i32));
            rot_conj.push(rot.conj());
        }
        Self { monomial, rot_conj }
    }

    /// Angular trapezoid of the integrand at squared radius t.
    fn profile(&self, t: f64, z: Complex64, lb_sum: u32, gamma: u32, delta: u32) -> Complex64 {
        let s = t.sqrt();
        let radial = s.powi(lb_sum as i32) / (1.0 + t).powi(delta as i32);
        if radial == 0.0 {
            return Complex64::ZERO;
        }
        let mut acc = Complex64::ZERO;
        for (mono, rc) in self.monomial.iter().zip(&self.rot_conj) {
            let kernel_pow = (Complex64::ONE + z * s * rc).powi(gamma as i32);
            acc += mono * kernel_pow;
        }
        acc * (radial * 2.0 * PI / self.monomial.len() as f64)
    }
}

/// Radial integral over t in [0, cutoff], log-compressed via u = ln(1+t) and
/// refined by doubling with Richardson extrapolation on the trapezoid values.
fn radial_integral(
    table: &AngularTable,
    z: Complex64,
    l: u32,
    b: u32,
    gamma: u32,
    delta: u32,
    cutoff: f64,
    max_panels: usize,
) -> Result<Complex64> {
    let u_max = (1.0 + cutoff).ln();
    let f = |u: f64| {
        let t = u.exp_m1();
        table.profile(t, z, l + b, gamma, delta) * (t + 1.0)
    };
    let mut panels = 8usize;
    let mut h = u_max / panels as f64;
    let mut trap = {
        let mut acc = 0.5 * (f(0.0) + f(u_max));
        for i in 1..panels {
            acc += f(h * i as f64);
        }
        acc * h
    };
    let mut prev_row = vec![trap];
    let mut last_delta = f64::INFINITY;
    while panels < max_panels {
        panels *= 2;
        h *= 0.5;
        let mut odd = Complex64::ZERO;
        for i in (1..panels).step_by(2) {
            odd += f(h * i as f64);
        }
        trap = 0.5 * prev_row[0] + h * odd;
        let mut row = vec![trap];
        let mut pow4 = 1.0;
        for m in 1..=prev_row.len() {
            pow4 *= 4.0;
            let extrapolated = row[m - 1] + (row[m - 1] - prev_row[m - 1]) / (pow4 - 1.0);
            row.push(extrapolated);
        }
        last_delta = (*row.last().unwrap() - *prev_row.last().unwrap()).norm();
        if row.len() >= 4 && last_delta <= ORACLE_INNER_TOL {
            return Ok(*row.last().unwrap());
        }
        prev_row = row;
    }
    if last_delta <= ORACLE_ACCEPT_TOL {
        return Ok(*prev_row.last().unwrap());
    }
    Err(Error::QuadratureNotConverged {
        last_delta,
        tol: ORACLE_ACCEPT_TOL,
        nodes: panels + 1,
    })
}

/// Cutoff such that the discarded tail of the surviving angular harmonic is
/// below 1e-13: the profile decays like `t^(l - delta)`, so
/// `tail(T) <= C * T^(l-delta+1) / (delta-l-1)` with
/// `C = 2*pi * C(gamma, l-b)`.
fn auto_cutoff(l: u32, b: u32, gamma: u32, delta: u32) -> f64 {
    if l < b || l - b > gamma {
        return 100.0; // harmonic dies; only float noise is integrated
    }
    let decay = (delta - l - 1) as f64;
    let ln_c = (2.0 * PI).ln() + ln_binomial(gamma, l - b);
    let cutoff = ((ln_c - (1e-13 * decay).ln()) / decay).exp();
    cutoff.clamp(100.0, ORACLE_MAX_CUTOFF)
}

/// Quantize a symbol by direct numerical evaluation of the projector
/// integral, without the closed-form weights.
///
/// For each term and each basis column the 2D integral is done in polar
/// coordinates (trapezoid in angle, adaptive in radius after `t = rho^2`),
/// evaluated at unit-circle z samples, and the output polynomial is read off
/// by an exact discrete Fourier fit. Intended for small degrees (`k <= 16`)
/// as the independent cross-check of [`toeplitz_matrix`].
pub fn toeplitz_quadrature_oracle(
    expr: &SymbolExpr,
    k: u32,
    radial_cutoff: Option<f64>,
    max_radial_panels: Option<usize>,
) -> Result<ToeplitzMatrix> {
    if k > 16 {
        return Err(Error::InvalidArgument(format!(
            "quadrature oracle is limited to k <= 16, got k = {k}"
        )));
    }
    check_degree(expr, k)?;
    if let Some(c) = radial_cutoff {
        if !(c > 0.0) {
            return Err(Error::InvalidArgument("radial cutoff must be positive".into()));
        }
    }
    if let Some(n) = max_radial_panels {
        if n < 16 {
            return Err(Error::InvalidArgument("node cap must be at least 16".into()));
        }
    }
    let max_panels = max_radial_panels.unwrap_or(1 << 14);
    let n = k as usize + 1;
    let mut entries = Array2::<Complex64>::zeros((n, n));
    for term in expr.terms() {
        let gamma = k - term.denom_pow;
        let delta = k + 2;
        // enough z samples to resolve every power the term can produce
        let n_z = (k.max(term.z_pow + gamma) + 2) as usize;
        let z_samples: Vec<Complex64> = (0..n_z)
            .map(|r| Complex64::from_polar(1.0, 2.0 * PI * r as f64 / n_z as f64))
            .collect();
        for l in 0..=k {
            let degree_sum = l as i64 + term.wbar_pow as i64 + gamma as i64;
            let bound = 2 * (delta as i64 - 1);
            if degree_sum >= bound {
                return Err(Error::DivergentIntegral { degree_sum, bound });
            }
            let table = AngularTable::new(l, term.wbar_pow, gamma);
            let cutoff =
                radial_cutoff.unwrap_or_else(|| auto_cutoff(l, term.wbar_pow, gamma, delta));
            let mut samples = Vec::with_capacity(n_z);
            for &z in &z_samples {
                let integral = radial_integral(
                    &table,
                    z,
                    l,
                    term.wbar_pow,
                    gamma,
                    delta,
                    cutoff,
                    max_panels,
                )?;
                let scale = (k as f64 + 1.0) / (2.0 * PI);
                samples.push(term.coeff * z.powi(term.z_pow as i32) * integral * scale);
            }
            // discrete Fourier fit: coefficient of z^j over the sample circle
            for j in 0..=k as usize {
                let mut c_j = Complex64::ZERO;
                for (r, g) in samples.iter().enumerate() {
                    let w = Complex64::from_polar(
                        1.0,
                        -2.0 * PI * (j * r % n_z) as f64 / n_z as f64,
                    );
                    c_j += g * w;
                }
                c_j /= n_z as f64;
                if c_j.norm() <= 1e-12 {
                    continue;
                }
                let reweight = (0.5 * (ln_binomial(k, l) - ln_binomial(k, j as u32))).exp();
                entries[[j, l as usize]] += c_j * reweight;
            }
        }
    }
    Ok(ToeplitzMatrix::from_entries(
        k,
        entries,
        format!("quadrature[{expr}]"),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbol::StandardSymbol as Sym;

    const TAU: f64 = 2.0 * PI;

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    /// Independent quadrature of the lemma integrand for small parameters:
    /// angular trapezoid plus a fine radial Simpson mesh in t, fitted against
    /// z over a sample circle to extract the monomial.
    fn integral_fit_oracle(alpha: u32, beta: u32, gamma: u32, delta: u32) -> (f64, i64) {
        let radius = 0.7;
        let n_z = (alpha + gamma + 3) as usize;
        let n_phi = 2 * (alpha + beta + gamma) as usize + 9;
        let cutoff = 2e4_f64;
        let panels = 1 << 17;
        let u_max = (1.0 + cutoff).ln();
        let h = u_max / panels as f64;
        let mut samples = Vec::new();
        for r in 0..n_z {
            let z = Complex64::from_polar(radius, TAU * r as f64 / n_z as f64);
            let f = |u: f64| {
                let t = u.exp_m1();
                let s = t.sqrt();
                let mut acc = Complex64::ZERO;
                for i in 0..n_phi {
                    let rot = Complex64::from_polar(1.0, TAU * i as f64 / n_phi as f64);
                    let w = s * rot;
                    acc += w.powi(alpha as i32)
                        * w.conj().powi(beta as i32)
                        * (Complex64::ONE + z * w.conj()).powi(gamma as i32);
                }
                acc / n_phi as f64 * TAU / (1.0 + t).powi(delta as i32) * (t + 1.0)
            };
            // composite Simpson in u
            let mut acc = f(0.0) + f(u_max);
            for i in 1..panels {
                let w = if i % 2 == 1 { 4.0 } else { 2.0 };
                acc += w * f(h * i as f64);
            }
            samples.push(acc * h / 3.0);
        }
        // Fourier fit and dominant-power extraction
        let mut best = (0usize, 0.0f64, Complex64::ZERO);
        for p in 0..n_z {
            let mut c = Complex64::ZERO;
            for (r, g) in samples.iter().enumerate() {
                c += g * Complex64::from_polar(1.0, -TAU * (p * r % n_z) as f64 / n_z as f64);
            }
            c /= n_z as f64;
            let coeff = c / radius.powi(p as i32);
            if coeff.norm() > best.1 {
                best = (p, coeff.norm(), coeff);
            }
        }
        if best.1 < 1e-9 {
            (0.0, 0)
        } else {
            (best.2.re, best.0 as i64)
        }
    }

    #[test]
    fn closed_form_against_quadrature_fit() {
        // (0,0,0,3) -> (pi, 0)
        let (c, p) = closed_form_integral(0, 0, 0, 3).unwrap();
        assert_close(c, PI, 1e-12);
        assert_eq!(p, 0);
        let (qc, qp) = integral_fit_oracle(0, 0, 0, 3);
        assert_close(c, qc, 1e-8);
        assert_eq!(p, qp);

        // (1,0,2,5) -> (pi/3, 1)
        let (c, p) = closed_form_integral(1, 0, 2, 5).unwrap();
        assert_close(c, PI / 3.0, 1e-12);
        assert_eq!(p, 1);
        let (qc, qp) = integral_fit_oracle(1, 0, 2, 5);
        assert_close(c, qc, 1e-8);
        assert_eq!(p, qp);

        // (0,2,1,6) -> vanishing angular integral
        let (c, p) = closed_form_integral(0, 2, 1, 6).unwrap();
        assert_eq!((c, p), (0.0, 0));
        let (qc, _) = integral_fit_oracle(0, 2, 1, 6);
        assert!(qc.abs() < 1e-9);
    }

    #[test]
    fn closed_form_divergence() {
        match closed_form_integral(2, 1, 1, 3) {
            Err(Error::DivergentIntegral { degree_sum, bound }) => {
                assert_eq!((degree_sum, bound), (4, 4));
            }
            other => panic!("expected DivergentIntegral, got {other:?}"),
        }
    }

    #[test]
    fn closed_form_large_degree_finite() {
        let (c, p) = closed_form_integral(250, 250, 0, 502).unwrap();
        assert!(c.is_finite() && c > 0.0);
        assert_eq!(p, 0);
    }

    #[test]
    fn x3_matrix_is_diagonal() {
        let m = toeplitz_matrix(&SymbolExpr::named(Sym::X3), 4).unwrap();
        let expected = [-1.0, -0.5, 0.0, 0.5, 1.0];
        for (l, want) in expected.iter().enumerate() {
            assert_close(m.entries()[[l, l]].re, *want, 1e-14);
            assert!(m.entries()[[l, l]].im.abs() < 1e-16);
        }
        assert_eq!(m.shift_set().iter().copied().collect::<Vec<_>>(), vec![0]);
    }

    #[test]
    fn x3_diagonal_entries_large_k() {
        // log-gamma differences at this size quantize around 1e-13
        let k = 100;
        let m = toeplitz_matrix(&SymbolExpr::named(Sym::X3), k).unwrap();
        for l in 0..=k as usize {
            let want = (2.0 * l as f64 - k as f64) / k as f64;
            assert_close(m.entries()[[l, l]].re, want, 5e-13);
        }
    }

    #[test]
    fn x1sq_matrix_small_case() {
        let m = toeplitz_matrix(&SymbolExpr::named(Sym::X1Squared), 2).unwrap();
        let want = [[0.0, 0.0, 1.0], [0.0, 1.0, 0.0], [1.0, 0.0, 0.0]];
        for i in 0..3 {
            for j in 0..3 {
                assert_close(m.entries()[[i, j]].re, want[i][j], 1e-14);
                assert!(m.entries()[[i, j]].im.abs() < 1e-16);
            }
        }
    }

    #[test]
    fn x1sq_matches_pentadiagonal_weights() {
        let k = 30u32;
        let m = toeplitz_matrix(&SymbolExpr::named(Sym::X1Squared), k).unwrap();
        let kf = k as f64;
        let denom = kf * (kf - 1.0);
        for l in 0..=k {
            let lf = l as f64;
            assert_close(
                m.entries()[[l as usize, l as usize]].re,
                2.0 * lf * (kf - lf) / denom,
                1e-13,
            );
            if l + 2 <= k {
                let up = ((lf + 1.0) * (lf + 2.0) * (kf - lf) * (kf - lf - 1.0)).sqrt() / denom;
                assert_close(m.entries()[[l as usize + 2, l as usize]].re, up, 1e-13);
                assert_close(m.entries()[[l as usize, l as usize + 2]].re, up, 1e-13);
            }
        }
        let shifts: Vec<i64> = m.shift_set().iter().copied().collect();
        assert_eq!(shifts, vec![-2, 0, 2]);
    }

    #[test]
    fn one_quantizes_to_identity() {
        let m = toeplitz_matrix(&SymbolExpr::named(Sym::One), 7).unwrap();
        for i in 0..8 {
            for j in 0..8 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert_close(m.entries()[[i, j]].re, want, 1e-13);
            }
        }
    }

    #[test]
    fn ladder_is_single_band(){
        let k = 5u32;
        let m = toeplitz_matrix(&SymbolExpr::named(Sym::Ladder), k).unwrap();
        let shifts: Vec<i64> = m.shift_set().iter().copied().collect();
        assert_eq!(shifts, vec![1]);
        for l in 0..k {
            let want = 2.0 / k as f64 * ((l as f64 + 1.0) * (k - l) as f64).sqrt();
            assert_close(m.entries()[[l as usize + 1, l as usize]].re, want, 1e-14);
        }
    }

    #[test]
    fn hermiticity_is_structural() {
        for k in [10u32, 50, 200] {
            let x3 = toeplitz_matrix(&SymbolExpr::named(Sym::X3), k).unwrap();
            let x1sq = toeplitz_matrix(&SymbolExpr::named(Sym::X1Squared), k).unwrap();
            assert!(x3.hermitian_defect() <= 1e-13);
            assert!(x1sq.hermitian_defect() <= 1e-13);
        }
    }

    #[test]
    fn degree_too_small() {
        let x1sq = SymbolExpr::named(Sym::X1Squared);
        match toeplitz_matrix(&x1sq, 1) {
            Err(Error::DegreeTooSmall { k: 1, required: 2 }) => {}
            other => panic!("expected DegreeTooSmall, got {other:?}"),
        }
    }

    #[test]
    fn quantization_is_linear() {
        let k = 9;
        let f = SymbolExpr::named(Sym::X3);
        let g = SymbolExpr::named(Sym::X1Squared);
        let alpha = Complex64::new(0.3, -1.2);
        let beta = Complex64::new(-2.0, 0.7);
        let combined = toeplitz_matrix(&f.scaled(alpha).add(&g.scaled(beta)), k).unwrap();
        let mf = toeplitz_matrix(&f, k).unwrap();
        let mg = toeplitz_matrix(&g, k).unwrap();
        for i in 0..=k as usize {
            for j in 0..=k as usize {
                let want = alpha * mf.entries()[[i, j]] + beta * mg.entries()[[i, j]];
                assert!((combined.entries()[[i, j]] - want).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn operator_t_small_case() {
        let t = operator_matrix(OperatorFamily::T, 2, 0.2).unwrap();
        let e = t.entries();
        assert!((e[[0, 0]] - Complex64::new(-1.0, 0.0)).norm() < 1e-14);
        assert!((e[[1, 1]] - Complex64::new(0.0, 0.2)).norm() < 1e-14);
        assert!((e[[2, 2]] - Complex64::new(1.0, 0.0)).norm() < 1e-14);
        assert!((e[[0, 2]] - Complex64::new(0.0, 0.2)).norm() < 1e-14);
        assert!((e[[2, 0]] - Complex64::new(0.0, 0.2)).norm() < 1e-14);
        assert!(e[[0, 1]].norm() < 1e-16 && e[[1, 0]].norm() < 1e-16);
    }

    #[test]
    fn operator_t_at_zero_eps_is_x3() {
        let t = operator_matrix(OperatorFamily::T, 13, 0.0).unwrap();
        let x3 = toeplitz_matrix(&SymbolExpr::named(Sym::X3), 13).unwrap();
        for i in 0..14 {
            for j in 0..14 {
                assert!((t.entries()[[i, j]] - x3.entries()[[i, j]]).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn operator_s_at_zero_eps_has_shifted_diagonal() {
        let k = 12u32;
        let s = operator_matrix(OperatorFamily::S, k, 0.0).unwrap();
        assert_eq!(s.size(), k as usize);
        for l in 0..k as usize {
            let want = (2.0 * l as f64 + 1.0 - k as f64) / k as f64;
            assert_close(s.entries()[[l, l]].re, want, 1e-14);
        }
    }

    #[test]
    fn operator_s_needs_k_three() {
        match operator_matrix(OperatorFamily::S, 2, 0.1) {
            Err(Error::DegreeTooSmall { k: 2, required: 3 }) => {}
            other => panic!("expected DegreeTooSmall, got {other:?}"),
        }
    }

    #[test]
    fn oracle_matches_closed_form_spot_checks() {
        for (sym, k) in [(Sym::X3, 3u32), (Sym::One, 2), (Sym::X1Squared, 8)] {
            let expr = SymbolExpr::named(sym);
            let closed = toeplitz_matrix(&expr, k).unwrap();
            let quad = toeplitz_quadrature_oracle(&expr, k, None, None).unwrap();
            let mut worst = 0.0f64;
            for i in 0..=k as usize {
                for j in 0..=k as usize {
                    worst = worst.max((closed.entries()[[i, j]] - quad.entries()[[i, j]]).norm());
                }
            }
            assert!(worst <= 1e-8, "{} k={k}: worst {worst:e}", expr);
        }
    }

    #[test]
    fn oracle_rejects_large_degree() {
        let expr = SymbolExpr::named(Sym::X3);
        assert!(matches!(
            toeplitz_quadrature_oracle(&expr, 17, None, None),
            Err(Error::InvalidArgument(_))
        ));
    }
}
