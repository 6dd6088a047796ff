use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;

use super::report::{digest, ProbeCase, ProbeReport};
use super::{adic_order, powu, NormSpec};
use crate::catalog::symmetrized_star;
use crate::error::{Error, Result};
use crate::monomial::MultiIndex;
use crate::params::{rational_from_f64, Evaluation};
use crate::poisson::{poisson_bracket, PoissonStructure};
use crate::poly::Polynomial;
use crate::reduction::{star_by_reduction, PhiTable, StarProduct};
use crate::scalar::{CRational, Complex64, Scalar, TruncSeries};

/// Relative slack granted to floating-point inequality cases.
pub const INEQUALITY_SLACK: f64 = 1e-10;

fn pair_digest<S: Scalar>(tag: &str, f: &Polynomial<S>, g: &Polynomial<S>) -> u64 {
    digest([tag, &f.format(true), &g.format(true)])
}

/// `ℏ` as an exact evaluation point.
pub fn at_hbar(hbar: f64) -> Result<Evaluation> {
    rational_from_f64(hbar)
        .map(|r| Evaluation::Point(CRational::real(r)))
        .ok_or_else(|| Error::InvalidNorm(format!("hbar {hbar} is not finite")))
}

/// Checks `o(f ⋆ g) ≥ o(f) + o(g)` on every sample pair.
pub fn degree_filtration_check<S: Scalar>(
    star: &dyn StarProduct<S>,
    samples: &[(Polynomial<S>, Polynomial<S>)],
) -> Result<ProbeReport> {
    let mut cases = Vec::with_capacity(samples.len());
    for (f, g) in samples {
        let id = pair_digest("filtration", f, g);
        let (Some(of), Some(og)) = (adic_order(f), adic_order(g)) else {
            cases.push(ProbeCase::new(id, 0.0, 0.0, 0.0));
            continue;
        };
        let need = (of + og) as f64;
        // a vanishing product has infinite order and satisfies the bound
        let got = adic_order(&star.star(f, g)?).map_or(need, |o| o as f64);
        // lhs ≤ rhs form: the required order must not exceed the output order
        cases.push(ProbeCase::new(id, need, got, 0.0));
    }
    Ok(ProbeReport::from_cases("degree_filtration", cases))
}

/// `‖f ⋆ g‖_ρ ≤ ‖f‖_ρ ‖g‖_ρ` per sample.
pub fn submultiplicativity_probe<S: Scalar>(
    star: &dyn StarProduct<S>,
    rho: &NormSpec,
    samples: &[(Polynomial<S>, Polynomial<S>)],
) -> Result<ProbeReport> {
    if !matches!(rho, NormSpec::Rho(_)) {
        return Err(Error::InvalidNorm("submultiplicativity needs a rho norm".into()));
    }
    let mut cases = Vec::with_capacity(samples.len());
    for (f, g) in samples {
        let lhs = rho.seminorm(&star.star(f, g)?)?;
        let rhs = rho.seminorm(f)? * rho.seminorm(g)?;
        cases.push(ProbeCase::new(pair_digest("submult", f, g), lhs, rhs, INEQUALITY_SLACK * rhs.max(1.0)));
    }
    Ok(ProbeReport::from_cases("submultiplicativity", cases))
}

/// Constants of the MacGyver continuity estimate. Values below 1 are raised
/// to 1, which keeps the estimate valid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MacGyverConstants {
    pub c: f64,
    pub alpha: f64,
    pub beta: f64,
    pub q: f64,
}

impl MacGyverConstants {
    /// `C′ = (Q^α C^{β²})²`.
    pub fn c_prime(&self) -> f64 {
        let (q, a, b) = (self.q.max(1.0), self.alpha.max(1.0), self.beta.max(1.0));
        let base = libm::pow(q, a) * libm::pow(self.c, b * b);
        base * base
    }
}

/// Inequality cases and hypothesis cases, kept apart so a violated
/// hypothesis is not mistaken for a broken estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct MacGyverReport {
    pub inequality: ProbeReport,
    pub hypotheses: ProbeReport,
}

impl MacGyverReport {
    pub fn pass(&self) -> bool {
        self.inequality.pass && self.hypotheses.pass
    }
}

/// Verifies `‖f ⋆ g‖_C ≤ ‖f‖_{C′} ‖g‖_{C′}` on the samples, and for every
/// pair of monomials in their supports that `x^K ⋆ x^L` needs at most
/// `α(|K|+|L|)²` reduction sweeps and has order at most `β(|K|+|L|)`.
pub fn macgyver_continuity_probe<S: Scalar>(
    phi: &PhiTable<S>,
    constants: &MacGyverConstants,
    samples: &[(Polynomial<S>, Polynomial<S>)],
) -> Result<MacGyverReport> {
    if !(constants.c >= 1.0) {
        return Err(Error::InvalidNorm("MacGyver probe needs C >= 1".into()));
    }
    let norm = NormSpec::macgyver(constants.c)?;
    let wide = NormSpec::macgyver(constants.c_prime())?;
    let (alpha, beta) = (constants.alpha.max(1.0), constants.beta.max(1.0));
    let mut inequality = Vec::new();
    let mut pairs = BTreeSet::new();
    for (f, g) in samples {
        let lhs = norm.seminorm(&star_by_reduction(f, g, phi)?.result)?;
        let rhs = wide.seminorm(f)? * wide.seminorm(g)?;
        inequality.push(ProbeCase::new(pair_digest("macgyver", f, g), lhs, rhs, INEQUALITY_SLACK * rhs.max(1.0)));
        for k in f.terms().keys() {
            for l in g.terms().keys() {
                pairs.insert((k.clone(), l.clone()));
            }
        }
    }
    let mut hypotheses = Vec::new();
    for (k, l) in pairs {
        let d = phi.dim();
        let x = Polynomial::monomial(d, phi.kind(), k.clone(), S::one());
        let y = Polynomial::monomial(d, phi.kind(), l.clone(), S::one());
        let trace = star_by_reduction(&x, &y, phi)?;
        let n = (k.degree() + l.degree()) as f64;
        let tag = format!("{k:?}{l:?}");
        hypotheses.push(ProbeCase::new(digest(["count", &tag]), trace.passes as f64, alpha * n * n, 0.0));
        let order = trace.result.max_degree().unwrap_or(0) as f64;
        hypotheses.push(ProbeCase::new(digest(["order", &tag]), order, beta * n, 0.0));
    }
    Ok(MacGyverReport {
        inequality: ProbeReport::from_cases("macgyver_continuity", inequality),
        hypotheses: ProbeReport::from_cases("macgyver_hypotheses", hypotheses),
    })
}

/// Geometric `ℏ` values from `10⁻¹` down to `10⁻⁶`, 11 points.
pub fn default_hbar_sequence() -> Vec<f64> {
    (0..11).map(|k| libm::pow(10.0, -1.0 - 0.5 * k as f64)).collect()
}

/// Result of [`classical_limit_probe`].
#[derive(Debug, Clone, PartialEq)]
pub struct LimitReport {
    pub report: ProbeReport,
    /// `(ℏ_k, residual_k)` in input order.
    pub residuals: Vec<(f64, f64)>,
    /// Fitted exponent `p` in `residual ≈ A ℏ^p`, two significant digits;
    /// `None` when every residual is at roundoff level.
    pub order: Option<f64>,
    pub constant: f64,
    /// Bound applied to the last residual.
    pub tolerance: f64,
    /// `‖f‖_ρ ‖g‖_ρ`.
    pub scale: f64,
}

/// Tracks `‖Δ_{f,g}(ℏ) − {f,g}‖_ρ` along a sequence decreasing to zero,
/// with `Δ_{f,g}(ℏ) = (f ⋆_ℏ g − g ⋆_ℏ f)/(iℏ)`.
///
/// Passes when the residuals do not grow and the last one is at most
/// `10 ℏ_min A` for the fitted `A ℏ^p`.
pub fn classical_limit_probe(
    family: &dyn Fn(f64) -> Result<Box<dyn StarProduct<Complex64>>>,
    eta: &PoissonStructure<Complex64>,
    f: &Polynomial<Complex64>,
    g: &Polynomial<Complex64>,
    hbars: &[f64],
    rho: &NormSpec,
) -> Result<LimitReport> {
    if hbars.is_empty() || hbars.iter().any(|h| !(*h > 0.0)) {
        return Err(Error::InvalidNorm("hbar sequence must be positive and non-empty".into()));
    }
    let bracket = poisson_bracket(eta, f, g)?;
    let scale = (rho.seminorm(f)? * rho.seminorm(g)?).max(f64::MIN_POSITIVE);
    let mut residuals = Vec::with_capacity(hbars.len());
    for &h in hbars {
        let star = family(h)?;
        let commutator = star.star(f, g)?.checked_sub(&star.star(g, f)?)?;
        let delta = commutator.scale(&Complex64::new(0.0, -1.0 / h));
        residuals.push((h, rho.seminorm(&delta.checked_sub(&bracket)?)?));
    }
    // commutators lose about 64 ulps of the product size, amplified by 1/ℏ
    let floor = |h: f64| (1e-12f64).max(64.0 * f64::EPSILON / h) * scale;
    let fit: Vec<(f64, f64)> = residuals
        .iter()
        .filter(|(h, r)| *r > floor(*h))
        .map(|(h, r)| (libm::log(*h), libm::log(*r)))
        .collect();
    let (order, constant) = if fit.len() >= 2 {
        let (p, ln_a) = least_squares(&fit);
        (Some(round_sig(p, 2)), libm::exp(ln_a))
    } else {
        (None, 0.0)
    };
    let h_min = hbars.iter().copied().fold(f64::INFINITY, f64::min);
    let tolerance = if order.is_some() { 10.0 * h_min * constant } else { 0.0 };
    let mut cases = Vec::with_capacity(residuals.len() + 1);
    let base = pair_digest("limit", f, g);
    let mut prev = f64::INFINITY;
    for (k, &(h, r)) in residuals.iter().enumerate() {
        let bound = if prev.is_finite() { prev } else { r };
        let id = digest([base.to_string().as_str(), &format!("{k}"), &format!("{h:e}")]);
        cases.push(ProbeCase::new(id, r, bound, 1e-6 * bound + floor(h)));
        prev = r;
    }
    let last = residuals.last().map(|p| p.1).unwrap_or(0.0);
    let h_last = residuals.last().map(|p| p.0).unwrap_or(h_min);
    cases.push(ProbeCase::new(digest([base.to_string().as_str(), "final"]), last, tolerance, floor(h_last)));
    let mut report = ProbeReport::from_cases("classical_limit", cases);
    if let Some(p) = order {
        report = report.with_note(format!("empirical order {p}"));
    }
    Ok(LimitReport { report, residuals, order, constant, tolerance, scale })
}

fn least_squares(points: &[(f64, f64)]) -> (f64, f64) {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

pub(crate) fn round_sig(x: f64, sig: i32) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    let e = libm::floor(libm::log10(libm::fabs(x))) as i32;
    let factor = libm::pow(10.0, (sig - 1 - e) as f64);
    libm::round(x * factor) / factor
}

/// The coefficients `B_0, …, B_n` of `f ⋆ g = Σ tⁿ B_n(f, g)`.
pub fn star_series_coefficients<C: Scalar>(
    f: &Polynomial<C>,
    g: &Polynomial<C>,
    phi: &PhiTable<TruncSeries<C>>,
    n: usize,
) -> Result<Vec<Polynomial<C>>> {
    let lift = |p: &Polynomial<C>| p.map_coeffs(|c| TruncSeries::constant(c.clone()));
    let product = star_by_reduction(&lift(f), &lift(g), phi)?.result;
    for c in product.terms().values() {
        if c.order().is_some_and(|o| o < n) {
            return Err(Error::Unsupported(format!("B_{n} lies beyond the truncation order")));
        }
    }
    Ok((0..=n).map(|k| product.map_coeffs(|c| c.coeff(k))).collect())
}

/// `B_1(f, g) − B_1(g, f)`.
pub fn first_order_antisymmetrization<C: Scalar>(
    f: &Polynomial<C>,
    g: &Polynomial<C>,
    phi: &PhiTable<TruncSeries<C>>,
) -> Result<Polynomial<C>> {
    let fg = star_series_coefficients(f, g, phi, 1)?;
    let gf = star_series_coefficients(g, f, phi, 1)?;
    fg[1].checked_sub(&gf[1])
}

/// `(a; x)_∞ = Π_{k≥0} (1 − a x^k)` for `0 ≤ x < 1`, stopped once the
/// remaining factors change the product by less than `1e-12` relative.
pub fn q_pochhammer(a: f64, x: f64) -> f64 {
    assert!((0.0..1.0).contains(&x), "q-Pochhammer needs 0 <= x < 1");
    let mut acc = 1.0;
    let mut term = a;
    while libm::fabs(term) / (1.0 - x) > 1e-12 * libm::fabs(acc).max(f64::MIN_POSITIVE) || term == a {
        acc *= 1.0 - term;
        term *= x;
        if term == 0.0 {
            break;
        }
    }
    acc
}

/// A bound `C_Λ` with `|Λ_ℏ(K, L)| ≤ C_Λ` for all `K, L`, valid when
/// `|q(ℏ)| ≠ 1`: `C_a² / c_a` with `a = min(|q|, 1/|q|)`,
/// `C_a = (−a;a)_∞/(a;a)_∞^d` and `c_a = (a;a)_∞/(−a;a)_∞^d`.
pub fn lambda_constant(q_abs: f64, dim: usize) -> Result<f64> {
    if !(q_abs > 0.0 && q_abs.is_finite()) || libm::fabs(q_abs - 1.0) < 1e-12 {
        return Err(Error::InvalidNorm("C_Lambda needs 0 < |q| != 1".into()));
    }
    let a = if q_abs < 1.0 { q_abs } else { 1.0 / q_abs };
    let plus = q_pochhammer(-a, a);
    let minus = q_pochhammer(a, a);
    let d = dim as f64;
    let upper = plus / libm::pow(minus, d);
    let lower = minus / libm::pow(plus, d);
    Ok(upper * upper / lower)
}

/// `‖x^K ⋆̂ x^L‖_ρ ≤ C_Λ d^{|K|+|L|} ‖x^K‖_ρ ‖x^L‖_ρ` for the symmetrized
/// log-canonical product at a fixed `q` off the unit circle.
pub fn symmetrized_lambda_probe(
    q: Complex64,
    rho: &NormSpec,
    pairs: &[(MultiIndex, MultiIndex)],
) -> Result<ProbeReport> {
    let NormSpec::Rho(r) = rho else {
        return Err(Error::InvalidNorm("C_Lambda probe needs a rho norm".into()));
    };
    let d = r.len();
    let c_lambda = lambda_constant(q.norm(), d)?;
    let mut cases = Vec::with_capacity(pairs.len());
    for (k, l) in pairs {
        let product = symmetrized_star(k, l, &q)?;
        let lhs = rho.seminorm(&product)?;
        let weight = |m: &MultiIndex| rho.weight(m).expect("rho weight");
        let rhs = c_lambda * powu(d as f64, (k.degree() + l.degree()) as u64) * weight(k) * weight(l);
        let id = digest(["lambda", &format!("{k:?}{l:?}{q}")]);
        cases.push(ProbeCase::new(id, lhs, rhs, INEQUALITY_SLACK * rhs.max(1.0)));
    }
    Ok(ProbeReport::from_cases("symmetrized_lambda", cases)
        .with_note(format!("C_Lambda = {}", crate::scalar::format_sig(c_lambda, 6))))
}

/// A constant `C ≥ 1` with `|λ̃_m(w, s)| ≤ C` at one parameter value:
/// `max(1, 2 |p − 1| / |q r^N − 1|)`. Requires `|q| ≤ 1` and `|r| = 1`.
pub fn nonquadratic_lambda_bound(p: Complex64, q: Complex64, r: Complex64, n: u32) -> Result<f64> {
    if q.norm() > 1.0 + 1e-12 || libm::fabs(r.norm() - 1.0) > 1e-12 {
        return Err(Error::InvalidNorm("needs |q| <= 1 and |r| = 1".into()));
    }
    let num = (p - Complex64::new(1.0, 0.0)).norm();
    let den = (q * r.powu(n) - Complex64::new(1.0, 0.0)).norm();
    if den < 1e-12 {
        if num < 1e-12 {
            return Ok(1.0);
        }
        return Err(Error::Pole { rule: "(p-1)/(q r^N - 1)".into() });
    }
    Ok((2.0 * num / den).max(1.0))
}

/// `‖f ⋆ g‖_ρ ≤ ‖f‖_{ρ′} ‖g‖_{ρ′}` with `ρ = (ϱ, ϱ, ϱ)`, `ϱ ≥ 1` and
/// `ρ′ = 2Cϱ^{N+1}` in every slot.
pub fn nonquadratic_rho_prime_probe(
    star: &dyn StarProduct<Complex64>,
    varrho: f64,
    n: u32,
    c: f64,
    samples: &[(Polynomial<Complex64>, Polynomial<Complex64>)],
) -> Result<ProbeReport> {
    if !(varrho >= 1.0) || !(c >= 1.0) {
        return Err(Error::InvalidNorm("needs varrho >= 1 and C >= 1".into()));
    }
    let rho = NormSpec::uniform_rho(star.dim(), varrho)?;
    let wide = NormSpec::uniform_rho(star.dim(), 2.0 * c * powu(varrho, n as u64 + 1))?;
    let mut cases = Vec::with_capacity(samples.len());
    for (f, g) in samples {
        let lhs = rho.seminorm(&star.star(f, g)?)?;
        let rhs = wide.seminorm(f)? * wide.seminorm(g)?;
        cases.push(ProbeCase::new(pair_digest("rho_prime", f, g), lhs, rhs, INEQUALITY_SLACK * rhs.max(1.0)));
    }
    Ok(ProbeReport::from_cases("nonquadratic_rho_prime", cases))
}
