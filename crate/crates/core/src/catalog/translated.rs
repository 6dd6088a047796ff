//! Pull-back of a star product along the translation `x_i ↦ x_i + c_i`.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::monomial::MultiIndex;
use crate::poly::{GeneratorKind, Polynomial};
use crate::poisson::PoissonStructure;
use crate::reduction::{star_by_reduction, PhiTable, ReductionStar, StarProduct};
use crate::scalar::Scalar;

/// The algebra automorphism `T(x_i) = x_i + c_i` (or its inverse).
pub fn translate<S: Scalar>(f: &Polynomial<S>, c: &[S], inverse: bool) -> Result<Polynomial<S>> {
    if c.len() != f.dim() {
        return Err(Error::DimensionMismatch { left: f.dim(), right: c.len() });
    }
    let images: Vec<_> = (0..f.dim())
        .map(|i| {
            let shift = if inverse { c[i].negate() } else { c[i].clone() };
            let mut g = Polynomial::generator(f.dim(), f.kind(), i);
            g.add_term(MultiIndex::zero(f.dim()), shift);
            g
        })
        .collect();
    f.compose(&images)
}

/// `φ′(x_j x_i) = T(φ(x_j x_i))`: the combinatorial table of the
/// translated product.
pub fn translated_table<S: Scalar>(phi: &PhiTable<S>, c: &[S]) -> Result<PhiTable<S>> {
    phi.map_tails(|t| translate(t, c, false))
}

/// Brackets transported the same way.
pub fn translated_poisson<S: Scalar>(eta: &PoissonStructure<S>, c: &[S]) -> Result<PoissonStructure<S>> {
    eta.map_brackets(|b| translate(b, c, false))
}

/// `f ⋆′ g = T(T⁻¹f ⋆ T⁻¹g)`.
pub fn translated_star<S: Scalar>(
    f: &Polynomial<S>,
    g: &Polynomial<S>,
    phi: &PhiTable<S>,
    c: &[S],
) -> Result<Polynomial<S>> {
    let a = translate(f, c, true)?;
    let b = translate(g, c, true)?;
    translate(&star_by_reduction(&a, &b, phi)?.result, c, false)
}

/// Product handle computing `T(T⁻¹f ⋆ T⁻¹g)` directly.
#[derive(Debug, Clone)]
pub struct Translated<S: Scalar> {
    pub base: ReductionStar<S>,
    pub shift: Vec<S>,
}

impl<S: Scalar> StarProduct<S> for Translated<S> {
    fn dim(&self) -> usize {
        self.base.phi.dim()
    }
    fn kind(&self) -> GeneratorKind {
        self.base.phi.kind()
    }
    fn star_monomials(&self, k: &MultiIndex, l: &MultiIndex) -> Result<Polynomial<S>> {
        let d = self.dim();
        let f = Polynomial::monomial(d, self.kind(), k.clone(), S::one());
        let g = Polynomial::monomial(d, self.kind(), l.clone(), S::one());
        self.star(&f, &g)
    }
    fn star(&self, f: &Polynomial<S>, g: &Polynomial<S>) -> Result<Polynomial<S>> {
        translated_star(f, g, &self.base.phi, &self.shift)
    }
}
