//! Coefficient seminorms and numerical probes of continuity, filtration and
//! the classical limit.
//!
//! Completions are never built; every probe works on finite polynomials.

mod probes;
mod report;

pub use probes::*;
pub use report::{digest, fnv1a, ProbeCase, ProbeReport};

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::monomial::MultiIndex;
use crate::poly::Polynomial;
use crate::scalar::Scalar;

/// A seminorm on polynomials, given by its monomial weights.
#[derive(Debug, Clone, PartialEq)]
pub enum NormSpec {
    /// `‖f‖_ρ = Σ |f_L| ρ^L`.
    Rho(Vec<f64>),
    /// `Σ |f_L| C^{|L|} (|L|!)^R`.
    TR { c: f64, r: f64 },
    /// `Σ |f_L| C^{|L|²}`.
    MacGyver { c: f64 },
    /// The order `o(f)`; not a seminorm, but useful through `2^{-o}`.
    Adic,
}

impl NormSpec {
    pub fn rho(rho: Vec<f64>) -> Result<Self> {
        if rho.is_empty() || rho.iter().any(|r| !(*r > 0.0 && r.is_finite())) {
            return Err(Error::InvalidNorm("rho entries must be positive".into()));
        }
        Ok(Self::Rho(rho))
    }

    pub fn uniform_rho(dim: usize, c: f64) -> Result<Self> {
        Self::rho(alloc::vec![c; dim])
    }

    pub fn tr(c: f64, r: f64) -> Result<Self> {
        if !(c > 0.0 && r >= 0.0 && c.is_finite() && r.is_finite()) {
            return Err(Error::InvalidNorm("T_R needs C > 0 and R >= 0".into()));
        }
        Ok(Self::TR { c, r })
    }

    pub fn macgyver(c: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::InvalidNorm("MacGyver norm needs C > 0".into()));
        }
        Ok(Self::MacGyver { c })
    }

    /// The weight of `x^L`; `None` for the adic kind.
    pub fn weight(&self, l: &MultiIndex) -> Option<f64> {
        let n = l.degree();
        match self {
            Self::Rho(rho) => Some(
                rho.iter().zip(l.exponents()).map(|(r, &e)| powu(*r, e as u64)).product(),
            ),
            Self::TR { c, r } => {
                let fact: f64 = (1..=n).map(|k| k as f64).product();
                Some(powu(*c, n as u64) * libm::pow(fact, *r))
            }
            Self::MacGyver { c } => Some(powu(*c, n as u64 * n as u64)),
            Self::Adic => None,
        }
    }

    /// The seminorm of `f`, or `o(f)` (infinite for zero) for the adic kind.
    pub fn seminorm<S: Scalar>(&self, f: &Polynomial<S>) -> Result<f64> {
        if let Self::Rho(rho) = self {
            if rho.len() != f.dim() {
                return Err(Error::DimensionMismatch { left: rho.len(), right: f.dim() });
            }
        }
        if let Self::Adic = self {
            return Ok(adic_order(f).map_or(f64::INFINITY, |o| o as f64));
        }
        Ok(f.terms().iter().map(|(l, c)| c.magnitude() * self.weight(l).expect("weighted kind")).sum())
    }
}

pub(crate) fn powu(x: f64, e: u64) -> f64 {
    libm::pow(x, e as f64)
}

/// Convenience wrapper for [`NormSpec::seminorm`].
pub fn seminorm<S: Scalar>(f: &Polynomial<S>, spec: &NormSpec) -> Result<f64> {
    spec.seminorm(f)
}

/// The lowest total degree with a nonzero coefficient.
pub fn adic_order<S: Scalar>(f: &Polynomial<S>) -> Option<u32> {
    f.min_degree()
}

/// `d_m(f, g) = 2^{-o(f-g)}`, zero when `f = g`.
pub fn adic_distance<S: Scalar>(f: &Polynomial<S>, g: &Polynomial<S>) -> Result<f64> {
    let diff = f.checked_sub(g)?;
    Ok(adic_order(&diff).map_or(0.0, |o| libm::pow(2.0, -(o as f64))))
}
