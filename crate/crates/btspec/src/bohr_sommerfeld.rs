//! Bohr-Sommerfeld quantization: solving `I(lambda, eps) = target` for the
//! approximate eigenvalues.
//!
//! Two rules are supported at degree k:
//!
//! * principal: `I(lambda) = 2 pi j / k`,
//! * half-form corrected: `I(lambda) + pi / k = 2 pi j / k`, i.e. the target
//!   `(2j - 1) pi / k`; the level circles of the height function carry
//!   half-form index 1, so the correction is a constant `pi` shift.
//!
//! At `eps = 0` the action is `pi (1 + lambda)`, so the solutions are exactly
//! the unperturbed eigenvalues `(2j - k)/k` resp. `(2j - 1 - k)/k`; those
//! values seed a Newton iteration that is carried to the requested `eps` by a
//! four-step continuation, re-solving at each intermediate perturbation.

use std::fmt;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::action::{action_derivative, action_integral, ActionOptions, DEFAULT_QUAD_TOL};
use crate::error::{Error, Result};

/// Seeds must satisfy |lambda0| <= this; outside it the contour radius
/// degenerates towards the poles of the height function.
const SEED_WINDOW: f64 = 0.9;
/// Number of continuation stages from eps = 0 to the requested eps.
const CONTINUATION_STAGES: usize = 4;
/// Newton residual target on |I - target|.
const RESIDUAL_TOL: f64 = 1e-10;
/// Newton iteration cap per continuation stage.
const MAX_NEWTON_ITERATIONS: usize = 50;

/// Which quantization rule to solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    Principal,
    HalfForm,
}

impl Variant {
    pub fn name(&self) -> &'static str {
        match self {
            Variant::Principal => "principal",
            Variant::HalfForm => "halfform",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One converged quantization condition.
#[derive(Debug, Clone)]
pub struct BsSolution {
    pub j: u32,
    pub variant: Variant,
    pub lambda: Complex64,
    pub iterations: usize,
    pub final_residual: f64,
    pub k: u32,
    pub epsilon: f64,
    /// Set when the converged value drifted outside 1.05x the seed window
    /// requested from [`bs_spectrum`].
    pub drifted: bool,
}

/// Unperturbed solution used as the Newton seed.
pub fn seed(k: u32, j: u32, variant: Variant) -> f64 {
    match variant {
        Variant::Principal => (2.0 * j as f64 - k as f64) / k as f64,
        Variant::HalfForm => (2.0 * j as f64 - 1.0 - k as f64) / k as f64,
    }
}

/// Quantized action target for index j.
pub fn target(k: u32, j: u32, variant: Variant) -> f64 {
    use std::f64::consts::PI;
    match variant {
        Variant::Principal => 2.0 * PI * j as f64 / k as f64,
        Variant::HalfForm => (2.0 * j as f64 - 1.0) * PI / k as f64,
    }
}

/// Solve the quantization condition for one index j.
pub fn bs_solve(k: u32, epsilon: f64, j: u32, variant: Variant, quad_tol: f64) -> Result<BsSolution> {
    if k == 0 {
        return Err(Error::InvalidArgument("degree k must be positive".into()));
    }
    if !epsilon.is_finite() || !(quad_tol > 0.0) {
        return Err(Error::InvalidArgument(
            "epsilon must be finite and quad_tol positive".into(),
        ));
    }
    let lambda0 = seed(k, j, variant);
    if lambda0.abs() > SEED_WINDOW {
        return Err(Error::WindowViolation(format!(
            "seed {lambda0} for j = {j} lies outside |lambda| <= {SEED_WINDOW}"
        )));
    }
    let goal = target(k, j, variant);
    let opts = ActionOptions {
        tol: quad_tol,
        ..Default::default()
    };
    let mut lambda = Complex64::new(lambda0, 0.0);
    let mut iterations = 0usize;
    let mut final_residual = f64::INFINITY;
    let stages: Vec<f64> = if epsilon == 0.0 {
        vec![0.0]
    } else {
        (1..=CONTINUATION_STAGES)
            .map(|s| epsilon * s as f64 / CONTINUATION_STAGES as f64)
            .collect()
    };
    for eps_stage in stages {
        let mut converged = false;
        for _ in 0..MAX_NEWTON_ITERATIONS {
            let residual = action_integral(lambda, eps_stage, opts)?.value
                - Complex64::new(goal, 0.0);
            final_residual = residual.norm();
            if final_residual <= RESIDUAL_TOL {
                converged = true;
                break;
            }
            iterations += 1;
            let slope = action_derivative(lambda, eps_stage)?;
            lambda -= residual / slope;
        }
        if !converged {
            return Err(Error::NonConvergence(format!(
                "j = {j}, eps stage {eps_stage}: residual {final_residual:.3e} after {MAX_NEWTON_ITERATIONS} iterations"
            )));
        }
    }
    Ok(BsSolution {
        j,
        variant,
        lambda,
        iterations,
        final_residual,
        k,
        epsilon,
        drifted: false,
    })
}

/// The quantization conditions swept over a seed window.
#[derive(Debug, Clone)]
pub struct BsSpectrum {
    /// Converged solutions sorted by real part (ties by imaginary part).
    pub solutions: Vec<BsSolution>,
    /// Indices whose Newton iteration failed, with the reason; failures are
    /// reported here rather than aborting the sweep.
    pub failures: Vec<(u32, Error)>,
}

/// Solve every index whose seed lands in `|lambda0| <= window_half_width`.
pub fn bs_spectrum(
    k: u32,
    epsilon: f64,
    variant: Variant,
    window_half_width: f64,
    quad_tol: f64,
) -> Result<BsSpectrum> {
    if !(window_half_width > 0.0 && window_half_width <= SEED_WINDOW) {
        return Err(Error::InvalidArgument(format!(
            "window half-width must lie in (0, {SEED_WINDOW}], got {window_half_width}"
        )));
    }
    if k == 0 {
        return Err(Error::InvalidArgument("degree k must be positive".into()));
    }
    let indices: Vec<u32> = (0..=k + 1)
        .filter(|&j| seed(k, j, variant).abs() <= window_half_width)
        .collect();
    let mut outcomes: Vec<(u32, Result<BsSolution>)> = indices
        .into_par_iter()
        .map(|j| (j, bs_solve(k, epsilon, j, variant, quad_tol)))
        .collect();
    outcomes.sort_by_key(|(j, _)| *j);
    let mut solutions = Vec::new();
    let mut failures = Vec::new();
    for (j, outcome) in outcomes {
        match outcome {
            Ok(mut sol) => {
                sol.drifted = sol.lambda.re.abs() > 1.05 * window_half_width;
                solutions.push(sol);
            }
            Err(e) => failures.push((j, e)),
        }
    }
    solutions.sort_by(|a, b| {
        a.lambda
            .re
            .total_cmp(&b.lambda.re)
            .then_with(|| a.lambda.im.total_cmp(&b.lambda.im))
    });
    Ok(BsSpectrum {
        solutions,
        failures,
    })
}

/// Convenience wrapper using [`DEFAULT_QUAD_TOL`].
pub fn bs_spectrum_default(
    k: u32,
    epsilon: f64,
    variant: Variant,
    window_half_width: f64,
) -> Result<BsSpectrum> {
    bs_spectrum(k, epsilon, variant, window_half_width, DEFAULT_QUAD_TOL)
}
