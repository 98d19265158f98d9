//! Rational symbols on the sphere.
//!
//! A symbol is stored through its holomorphic extension off the diagonal: a
//! finite sum of terms `c * z^a * wbar^b / (1 + z*wbar)^m`. Restricting to
//! `wbar = conj(z)` recovers the function on the sphere in the stereographic
//! chart; keeping `z` and `wbar` independent is what the covariant
//! quantization integrals and the complex level sets need.
//!
//! The named constructors cover the operators built elsewhere in the crate:
//!
//! * `x3 = (z*wbar - 1) / (1 + z*wbar)`, the height coordinate,
//! * `x1^2 = (z + wbar)^2 / (1 + z*wbar)^2`, the squared equatorial coordinate,
//! * `ladder = 2z / (1 + z*wbar)`, the raising symbol `x1 + i*x2`,
//! * `one`, the constant symbol.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// One monomial term `coeff * z^z_pow * wbar^wbar_pow / (1 + z*wbar)^denom_pow`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymbolTerm {
    pub coeff: Complex64,
    pub z_pow: u32,
    pub wbar_pow: u32,
    pub denom_pow: u32,
}

impl SymbolTerm {
    pub fn new(coeff: Complex64, z_pow: u32, wbar_pow: u32, denom_pow: u32) -> Result<Self> {
        if !coeff.re.is_finite() || !coeff.im.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "symbol coefficient must be finite, got {coeff}"
            )));
        }
        Ok(Self {
            coeff,
            z_pow,
            wbar_pow,
            denom_pow,
        })
    }

    fn key(&self) -> (u32, u32, u32) {
        (self.z_pow, self.wbar_pow, self.denom_pow)
    }
}

/// A finite sum of [`SymbolTerm`]s in canonical form: terms with equal powers
/// are merged and zero coefficients dropped. The empty sum is the zero symbol.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolExpr {
    terms: Vec<SymbolTerm>,
    name: Option<String>,
}

/// The symbols used by the operator families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StandardSymbol {
    X3,
    X1Squared,
    Ladder,
    One,
}

impl StandardSymbol {
    pub fn name(&self) -> &'static str {
        match self {
            StandardSymbol::X3 => "x3",
            StandardSymbol::X1Squared => "x1sq",
            StandardSymbol::Ladder => "ladder",
            StandardSymbol::One => "one",
        }
    }
}

fn canonicalize(terms: Vec<SymbolTerm>) -> Vec<SymbolTerm> {
    let mut merged: BTreeMap<(u32, u32, u32), Complex64> = BTreeMap::new();
    for t in terms {
        *merged.entry(t.key()).or_insert(Complex64::ZERO) += t.coeff;
    }
    merged
        .into_iter()
        .filter(|(_, c)| *c != Complex64::ZERO)
        .map(|((a, b, m), c)| SymbolTerm {
            coeff: c,
            z_pow: a,
            wbar_pow: b,
            denom_pow: m,
        })
        .collect()
}

impl SymbolExpr {
    pub fn new(terms: Vec<SymbolTerm>) -> Self {
        Self {
            terms: canonicalize(terms),
            name: None,
        }
    }

    pub fn zero() -> Self {
        Self {
            terms: Vec::new(),
            name: None,
        }
    }

    /// Build one of the named symbols with its exact term set.
    pub fn named(which: StandardSymbol) -> Self {
        let one = Complex64::ONE;
        let terms = match which {
            // (z*wbar - 1) / (1 + z*wbar)
            StandardSymbol::X3 => vec![
                SymbolTerm::new(one, 1, 1, 1).unwrap(),
                SymbolTerm::new(-one, 0, 0, 1).unwrap(),
            ],
            // (z + wbar)^2 / (1 + z*wbar)^2 expanded
            StandardSymbol::X1Squared => vec![
                SymbolTerm::new(one, 2, 0, 2).unwrap(),
                SymbolTerm::new(2.0 * one, 1, 1, 2).unwrap(),
                SymbolTerm::new(one, 0, 2, 2).unwrap(),
            ],
            // 2z / (1 + z*wbar), the raising symbol
            StandardSymbol::Ladder => vec![SymbolTerm::new(2.0 * one, 1, 0, 1).unwrap()],
            StandardSymbol::One => vec![SymbolTerm::new(one, 0, 0, 0).unwrap()],
        };
        Self {
            terms: canonicalize(terms),
            name: Some(which.name().to_string()),
        }
    }

    pub fn terms(&self) -> &[SymbolTerm] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest denominator power over all terms; the smallest usable degree k.
    pub fn max_denom_pow(&self) -> u32 {
        self.terms.iter().map(|t| t.denom_pow).max().unwrap_or(0)
    }

    /// Whether the symbol is real-valued on the sphere: invariant under the
    /// flip `(a, b, coeff) -> (b, a, conj(coeff))`.
    pub fn is_real_on_sphere(&self) -> bool {
        let flipped: Vec<SymbolTerm> = self
            .terms
            .iter()
            .map(|t| SymbolTerm {
                coeff: t.coeff.conj(),
                z_pow: t.wbar_pow,
                wbar_pow: t.z_pow,
                denom_pow: t.denom_pow,
            })
            .collect();
        canonicalize(flipped) == self.terms
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| SymbolTerm {
                coeff: factor * t.coeff,
                ..*t
            })
            .collect();
        Self {
            terms: canonicalize(terms),
            name: None,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        terms.extend_from_slice(&other.terms);
        Self {
            terms: canonicalize(terms),
            name: None,
        }
    }
}

impl fmt::Display for SymbolExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(name) = &self.name {
            return write!(f, "{name}");
        }
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|t| {
                format!(
                    "({})*z^{}*wbar^{}/(1+z*wbar)^{}",
                    t.coeff, t.z_pow, t.wbar_pow, t.denom_pow
                )
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
