//! First-order data of a star product: the Poisson bracket.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::poly::{GeneratorKind, Polynomial};
use crate::reduction::PhiTable;
use crate::scalar::{vanishes, Scalar, TruncSeries};

/// Brackets `{x_j, x_i}` for 0-based `i < j`; the rest follows by
/// antisymmetry and the Leibniz rule.
#[derive(Debug, Clone, PartialEq)]
pub struct PoissonStructure<S: Scalar> {
    dim: usize,
    kind: GeneratorKind,
    brackets: BTreeMap<(usize, usize), Polynomial<S>>,
}

impl<S: Scalar> PoissonStructure<S> {
    pub fn zero(dim: usize, kind: GeneratorKind) -> Self {
        Self { dim, kind, brackets: BTreeMap::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> GeneratorKind {
        self.kind
    }

    /// Sets `{x_j, x_i}` for 0-based `i < j`.
    pub fn set(&mut self, i: usize, j: usize, value: Polynomial<S>) -> Result<()> {
        if i >= j || j >= self.dim {
            return Err(Error::InvalidTable(alloc::format!("bracket pair ({}, {})", i + 1, j + 1)));
        }
        if value.dim() != self.dim {
            return Err(Error::DimensionMismatch { left: self.dim, right: value.dim() });
        }
        if value.is_zero() {
            self.brackets.remove(&(i, j));
        } else {
            self.brackets.insert((i, j), value.with_kind(self.kind));
        }
        Ok(())
    }

    pub fn with(mut self, i: usize, j: usize, value: Polynomial<S>) -> Result<Self> {
        self.set(i, j, value)?;
        Ok(self)
    }

    /// `{x_j, x_i}` for 0-based `i < j`.
    pub fn get(&self, i: usize, j: usize) -> Polynomial<S> {
        self.brackets.get(&(i, j)).cloned().unwrap_or_else(|| Polynomial::zero(self.dim, self.kind))
    }

    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize), &Polynomial<S>)> {
        self.brackets.iter().map(|(k, v)| (*k, v))
    }

    pub fn map_coeffs<T: Scalar>(&self, f: impl Fn(&S) -> T) -> PoissonStructure<T> {
        PoissonStructure {
            dim: self.dim,
            kind: self.kind,
            brackets: self
                .brackets
                .iter()
                .map(|(k, p)| (*k, p.map_coeffs(&f)))
                .filter(|(_, p)| !p.is_zero())
                .collect(),
        }
    }

    pub fn map_brackets(&self, f: impl Fn(&Polynomial<S>) -> Result<Polynomial<S>>) -> Result<Self> {
        let mut out = Self::zero(self.dim, self.kind);
        for ((i, j), p) in &self.brackets {
            out.set(*i, *j, f(p)?)?;
        }
        Ok(out)
    }
}

/// `{x_j, x_i} = (1/i)·[t¹]φ(x_j x_i)`.
pub fn poisson_from_phi<C: Scalar>(phi: &PhiTable<TruncSeries<C>>) -> PoissonStructure<C> {
    let minus_i = C::imag_unit().negate();
    let mut out = PoissonStructure::zero(phi.dim(), phi.kind());
    for ((i, j), tail) in phi.tails() {
        let first = tail.map_coeffs(|c| c.coeff(1).times(&minus_i));
        out.set(i, j, first).expect("pair taken from a valid table");
    }
    out
}

/// `{f, g} = Σ_{i<j} {x_j,x_i} (∂_j f ∂_i g − ∂_i f ∂_j g)`.
pub fn poisson_bracket<S: Scalar>(
    eta: &PoissonStructure<S>,
    f: &Polynomial<S>,
    g: &Polynomial<S>,
) -> Result<Polynomial<S>> {
    let mut out = Polynomial::zero(eta.dim, eta.kind);
    if f.dim() != eta.dim || g.dim() != eta.dim {
        return Err(Error::DimensionMismatch { left: eta.dim, right: f.dim().max(g.dim()) });
    }
    let f = f.with_kind(eta.kind);
    let g = g.with_kind(eta.kind);
    let df: Vec<_> = (0..eta.dim).map(|i| f.partial(i)).collect();
    let dg: Vec<_> = (0..eta.dim).map(|i| g.partial(i)).collect();
    for ((i, j), b) in &eta.brackets {
        let w = &(&df[*j] * &dg[*i]) - &(&df[*i] * &dg[*j]);
        if !w.is_zero() {
            out = &out + &(b * &w);
        }
    }
    Ok(out)
}

/// The Jacobiator `{x_i,{x_j,x_k}} + {x_j,{x_k,x_i}} + {x_k,{x_i,x_j}}` for
/// every triple `i < j < k` (1-based in the output).
pub fn jacobiators<S: Scalar>(eta: &PoissonStructure<S>) -> Vec<((usize, usize, usize), Polynomial<S>)> {
    let d = eta.dim;
    let x = |i| Polynomial::generator(d, eta.kind, i);
    let br = |a: &Polynomial<S>, b: &Polynomial<S>| poisson_bracket(eta, a, b).expect("same dimension");
    let mut out = Vec::new();
    for i in 0..d {
        for j in i + 1..d {
            for k in j + 1..d {
                let (a, b, c) = (x(i), x(j), x(k));
                let total = &(&br(&a, &br(&b, &c)) + &br(&b, &br(&c, &a))) + &br(&c, &br(&a, &b));
                out.push(((i + 1, j + 1, k + 1), total));
            }
        }
    }
    out
}

/// True iff every Jacobiator vanishes (within `tol` for float rings).
pub fn jacobi_check<S: Scalar>(eta: &PoissonStructure<S>, tol: f64) -> bool {
    jacobiators(eta).iter().all(|(_, p)| vanishes(p.terms().values(), tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monomial::MultiIndex;
    use crate::scalar::CRational;
    use alloc::vec;

    type P = Polynomial<CRational>;

    fn x(d: usize, i: usize) -> P {
        P::generator(d, GeneratorKind::X, i)
    }

    #[test]
    fn log_canonical_brackets() {
        let eta = PoissonStructure::zero(2, GeneratorKind::X).with(0, 1, &x(2, 0) * &x(2, 1)).unwrap();
        assert_eq!(poisson_bracket(&eta, &x(2, 1), &x(2, 0)).unwrap(), &x(2, 0) * &x(2, 1));
        let f = &x(2, 1) * &x(2, 1);
        let expected = P::monomial(2, GeneratorKind::X, MultiIndex::new(vec![1, 2]), CRational::from_i64(2));
        assert_eq!(poisson_bracket(&eta, &f, &x(2, 0)).unwrap(), expected);
        assert!(poisson_bracket(&eta, &f, &f).unwrap().is_zero());
        assert!(jacobi_check(&eta, 0.0));
    }

    #[test]
    fn broken_jacobi_identity() {
        let eta = PoissonStructure::zero(3, GeneratorKind::X)
            .with(0, 1, x(3, 1))
            .unwrap()
            .with(1, 2, x(3, 2))
            .unwrap();
        let jac = jacobiators(&eta);
        assert_eq!(jac.len(), 1);
        assert_eq!(jac[0].1, -&x(3, 2));
        assert!(!jacobi_check(&eta, 0.0));
        assert!(jacobi_check(&PoissonStructure::<CRational>::zero(3, GeneratorKind::X), 0.0));
    }
}
