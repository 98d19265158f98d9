//! The complexified action on level sets of the perturbed height symbol.
//!
//! The symbol family is `p(z, wbar) = x3 + i*eps*x1^2` extended off the
//! diagonal:
//!
//! ```text
//! p(z, wbar) = (z*wbar - 1)/(1 + z*wbar) + i*eps*(z + wbar)^2/(1 + z*wbar)^2.
//! ```
//!
//! Clearing denominators, `p = lambda` is a quadratic in `wbar` with
//! z-dependent coefficients
//!
//! ```text
//! A = (1 - lambda) z^2 + i*eps,
//! B = 2 z (i*eps - lambda),
//! C = i*eps z^2 - 1 - lambda,
//! ```
//!
//! (back-substitution into `p = lambda` pins the factor of `z` in `B`; see
//! [`level_residual`], which is the arbiter for these coefficients). The
//! action integrates the primitive
//! `alpha = i (z d(wbar) - wbar dz) / (2 (1 + z*wbar))` over the loop
//! `z = rho e^{i theta}`, `wbar = wbar_plus(z)`, where `wbar_plus` is the
//! quadratic root that continues `conj(z)` from `eps = 0`, and
//! `rho0 = sqrt((1 + Re lambda)/(1 - Re lambda))` puts the loop on the real
//! level circle at `eps = 0`. Any nearby radius gives the same value because
//! the restriction of `alpha` to the level set is closed; that invariance is
//! tested, and lets the contour follow only `Re lambda` while Newton moves
//! `lambda` through the complex plane.
//!
//! At `eps = 0` everything is exact: `wbar_plus = (1 + lambda)/((1 - lambda) z)`,
//! the integrand is constant in `theta`, and the action is
//! `pi (1 + lambda)` -- the area of the spherical cap below `lambda`.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default quadrature tolerance used across the solver pipeline.
pub const DEFAULT_QUAD_TOL: f64 = 1e-12;

/// First trapezoid resolution on the contour.
const CONTOUR_START_NODES: usize = 64;
/// Hard cap on contour nodes before giving up.
const CONTOUR_MAX_NODES: usize = 65536;
/// Steps of the eps-homotopy used to seed the branch at a fresh point.
const HOMOTOPY_STEPS: usize = 16;
/// Leading-coefficient threshold below which the second root escapes to
/// infinity.
const LEADING_TOL: f64 = 1e-13;
/// Relative discriminant threshold for declaring a branch pinch.
const PINCH_TOL: f64 = 1e-13;

/// The quadratic in `wbar` cutting out the complex level set `p = lambda`.
#[derive(Debug, Clone, Copy)]
pub struct LevelQuadratic {
    pub lambda: Complex64,
    pub epsilon: f64,
}

impl LevelQuadratic {
    pub fn new(lambda: Complex64, epsilon: f64) -> Self {
        Self { lambda, epsilon }
    }

    /// Coefficients (A, B, C) of `A wbar^2 + B wbar + C = 0` at this z.
    pub fn coefficients(&self, z: Complex64) -> (Complex64, Complex64, Complex64) {
        let lam = self.lambda;
        let i_eps = Complex64::new(0.0, self.epsilon);
        let a = (Complex64::ONE - lam) * z * z + i_eps;
        let b = 2.0 * z * (i_eps - lam);
        let c = i_eps * z * z - Complex64::ONE - lam;
        (a, b, c)
    }

    /// z-derivatives (A', B', C') of the coefficients.
    pub fn derivative_coefficients(&self, z: Complex64) -> (Complex64, Complex64, Complex64) {
        let lam = self.lambda;
        let i_eps = Complex64::new(0.0, self.epsilon);
        (
            2.0 * (Complex64::ONE - lam) * z,
            2.0 * (i_eps - lam),
            2.0 * i_eps * z,
        )
    }

    /// Both roots of the quadratic at this z, in no particular order.
    pub fn roots(&self, z: Complex64) -> Result<(Complex64, Complex64)> {
        let (a, b, c) = self.coefficients(z);
        if a.norm() <= LEADING_TOL {
            return Err(Error::RootAtInfinity { z });
        }
        let disc = b * b - 4.0 * a * c;
        if disc.norm() <= PINCH_TOL * (a.norm_sqr() + b.norm_sqr() + c.norm_sqr()) {
            return Err(Error::BranchPinch { z });
        }
        let d = disc.sqrt();
        let q = if (b + d).norm() >= (b - d).norm() {
            -0.5 * (b + d)
        } else {
            -0.5 * (b - d)
        };
        if q.norm() == 0.0 {
            // b and d both vanish: symmetric roots
            let r = (-c / a).sqrt();
            return Ok((r, -r));
        }
        Ok((q / a, c / q))
    }
}

/// Defect `p(z, wbar) - lambda` evaluated from the rational expression; the
/// independent check that a candidate `wbar` sits on the level set.
pub fn level_residual(
    z: Complex64,
    wbar: Complex64,
    lambda: Complex64,
    epsilon: f64,
) -> Result<Complex64> {
    let denom = Complex64::ONE + z * wbar;
    if denom.norm() < 1e-14 {
        return Err(Error::PoleOnLocus { z });
    }
    let i_eps = Complex64::new(0.0, epsilon);
    let zw = z * wbar;
    let s = z + wbar;
    Ok((zw - Complex64::ONE) / denom + i_eps * s * s / (denom * denom) - lambda)
}

/// The level-set root that continues `conj(z)` from the unperturbed symbol.
///
/// With a `hint` this picks the root nearer the hint (branch tracking along a
/// contour). Without one it runs a homotopy in epsilon from 0 in
/// [`HOMOTOPY_STEPS`] equal steps, starting from the root nearest `conj(z)`
/// and following the nearest root at each step.
pub fn wbar_plus(
    z: Complex64,
    lambda: Complex64,
    epsilon: f64,
    hint: Option<Complex64>,
) -> Result<Complex64> {
    let nearest = |target: Complex64, roots: (Complex64, Complex64)| {
        if (roots.0 - target).norm() <= (roots.1 - target).norm() {
            roots.0
        } else {
            roots.1
        }
    };
    if let Some(h) = hint {
        let quad = LevelQuadratic::new(lambda, epsilon);
        return Ok(nearest(h, quad.roots(z)?));
    }
    let mut w = z.conj();
    for step in 0..=HOMOTOPY_STEPS {
        let eps_step = epsilon * step as f64 / HOMOTOPY_STEPS as f64;
        let quad = LevelQuadratic::new(lambda, eps_step);
        w = nearest(w, quad.roots(z)?);
    }
    Ok(w)
}

/// Options for [`action_integral`].
#[derive(Debug, Clone, Copy)]
pub struct ActionOptions {
    /// Stop once successive node doublings agree to this tolerance.
    pub tol: f64,
    /// Contour radius as a multiple of the natural radius `rho0`.
    pub radius_scale: f64,
}

impl Default for ActionOptions {
    fn default() -> Self {
        Self {
            tol: DEFAULT_QUAD_TOL,
            radius_scale: 1.0,
        }
    }
}

/// An action value together with its quadrature diagnostics.
#[derive(Debug, Clone, Copy)]
pub struct ActionResult {
    pub value: Complex64,
    pub nodes_used: usize,
    pub last_delta: f64,
    pub contour_radius: f64,
}

fn contour_sum(
    quad: &LevelQuadratic,
    rho: f64,
    nodes: usize,
    lambda: Complex64,
    epsilon: f64,
) -> Result<Complex64> {
    let mut acc = Complex64::ZERO;
    let mut w_prev: Option<Complex64> = None;
    for i in 0..nodes {
        let theta = 2.0 * std::f64::consts::PI * i as f64 / nodes as f64;
        let z = Complex64::from_polar(rho, theta);
        let w = wbar_plus(z, lambda, epsilon, w_prev)?;
        w_prev = Some(w);
        let (a, b, _) = quad.coefficients(z);
        let (da, db, dc) = quad.derivative_coefficients(z);
        let dw = -(da * w * w + db * w + dc) / (2.0 * a * w + b);
        let denom = Complex64::ONE + z * w;
        if denom.norm() < 1e-14 {
            return Err(Error::PoleOnLocus { z });
        }
        acc += -z * (z * dw - w) / (2.0 * denom);
    }
    Ok(acc * Complex64::new(2.0 * std::f64::consts::PI / nodes as f64, 0.0))
}

/// Action of the level set of `lambda`, by the periodic trapezoid rule with
/// node doubling and branch tracking along the contour.
pub fn action_integral(
    lambda: Complex64,
    epsilon: f64,
    opts: ActionOptions,
) -> Result<ActionResult> {
    if !lambda.re.is_finite() || !lambda.im.is_finite() || !epsilon.is_finite() {
        return Err(Error::InvalidArgument("lambda and epsilon must be finite".into()));
    }
    if lambda.re.abs() >= 1.0 {
        return Err(Error::WindowViolation(format!(
            "Re(lambda) = {} outside the open window (-1, 1)",
            lambda.re
        )));
    }
    if !(opts.tol > 0.0) || !(opts.radius_scale > 0.0) {
        return Err(Error::InvalidArgument(
            "tolerance and radius scale must be positive".into(),
        ));
    }
    let rho0 = ((1.0 + lambda.re) / (1.0 - lambda.re)).sqrt();
    let rho = opts.radius_scale * rho0;
    let quad = LevelQuadratic::new(lambda, epsilon);
    let mut nodes = CONTOUR_START_NODES;
    let mut prev = contour_sum(&quad, rho, nodes, lambda, epsilon)?;
    let mut last_delta = f64::INFINITY;
    while nodes < CONTOUR_MAX_NODES {
        nodes *= 2;
        let value = contour_sum(&quad, rho, nodes, lambda, epsilon)?;
        last_delta = (value - prev).norm();
        if last_delta <= opts.tol {
            return Ok(ActionResult {
                value,
                nodes_used: nodes,
                last_delta,
                contour_radius: rho,
            });
        }
        prev = value;
    }
    Err(Error::QuadratureNotConverged {
        last_delta,
        tol: opts.tol,
        nodes,
    })
}

/// d(action)/d(lambda) by a central difference with a real step
/// `h = 1e-6 (1 + |lambda|)`; the action is holomorphic, so the direction of
/// the step does not matter (tested via the imaginary-step stencil).
pub fn action_derivative(lambda: Complex64, epsilon: f64) -> Result<Complex64> {
    let h = 1e-6 * (1.0 + lambda.norm());
    let step = Complex64::new(h, 0.0);
    let plus = action_integral(lambda + step, epsilon, ActionOptions::default())?;
    let minus = action_integral(lambda - step, epsilon, ActionOptions::default())?;
    Ok((plus.value - minus.value) / (2.0 * h))
}
