//! Deformed evaluation functionals on Wick coordinates, their Gram matrices,
//! the rescale-and-reverse isomorphism `Ψ_ℏ` and finite GNS data.
//!
//! The Wick product here is `w^K ⋆_ℏ w^L = e^{−ℏ Σ_{i<j} K_j L_i} w^{K+L}`.
//! Exact computations use `v = e^{ℏ/2}` as a ring element (for instance the
//! indeterminate of [`RationalQ`](crate::scalar::RationalQ)), so every
//! exponential that occurs is an integer power of `v`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

pub use nalgebra::DMatrix;
use rand::Rng;

use crate::catalog::Direction;
use crate::error::{Error, Result};
use crate::monomial::MultiIndex;
use crate::poly::{GeneratorKind, Polynomial};
use crate::sample::ChaCha8Rng;
use crate::scalar::{Complex64, Scalar};
use crate::topology::{digest, ProbeCase, ProbeReport};

/// Default relative tolerance of [`psd_check`].
pub const PSD_TOLERANCE: f64 = 1e-9;
/// Eigenvalues above this fraction of the largest survive the GNS quotient.
pub const RANK_TOLERANCE: f64 = 1e-10;

/// A point of the antidiagonal set `z_i = conj(z_{d+1−i})`.
#[derive(Debug, Clone, PartialEq)]
pub struct WickPoint<S: Scalar>(Vec<S>);

impl<S: Scalar> WickPoint<S> {
    pub fn new(z: Vec<S>) -> Result<Self> {
        let d = z.len();
        if d == 0 {
            return Err(Error::InvalidState("empty point".into()));
        }
        let scale = z.iter().map(Scalar::magnitude).fold(1.0, f64::max);
        for i in 0..d {
            let gap = z[i].minus(&z[d - 1 - i].conj());
            let ok = if S::EXACT { gap.is_zero() } else { gap.magnitude() <= 1e-12 * scale };
            if !ok {
                return Err(Error::InvalidState(format!("z_{} is not the conjugate of z_{}", i + 1, d - i)));
            }
        }
        Ok(Self(z))
    }

    pub fn origin(dim: usize) -> Self {
        Self(alloc::vec![S::zero(); dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[S] {
        &self.0
    }

    /// `z̄`, again antidiagonal.
    pub fn conj(&self) -> Self {
        Self(self.0.iter().map(Scalar::conj).collect())
    }

    /// `z^K`.
    pub fn power(&self, k: &MultiIndex) -> S {
        let mut acc = S::one();
        for (z, &e) in self.0.iter().zip(k.exponents()) {
            if e > 0 {
                acc = acc.times(&z.pow(e as u64));
            }
        }
        acc
    }
}

impl WickPoint<Complex64> {
    /// Random point: free coordinates uniform in the square of half-width
    /// `radius`, the middle one (odd `d`) real.
    pub fn random(rng: &mut ChaCha8Rng, dim: usize, radius: f64) -> Self {
        let mut z = alloc::vec![Complex64::new(0.0, 0.0); dim];
        for i in 0..dim.div_ceil(2) {
            let re = rng.random_range(-radius..=radius);
            let im = if i == dim - 1 - i { 0.0 } else { rng.random_range(-radius..=radius) };
            z[i] = Complex64::new(re, im);
            z[dim - 1 - i] = z[i].conj();
        }
        Self(z)
    }
}

/// Which closed form a state uses; `ℏ = 0` counts as nonpositive.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Nonpositive,
    Positive,
}

impl Branch {
    pub fn of(hbar: f64) -> Self {
        if hbar > 0.0 {
            Self::Positive
        } else {
            Self::Nonpositive
        }
    }
}

/// `m_ij = min{i−1, j−1, d−i, d−j}` (1-based), stored 0-based.
pub fn m_matrix(dim: usize) -> Vec<Vec<u32>> {
    (0..dim)
        .map(|i| (0..dim).map(|j| i.min(j).min(dim - 1 - i).min(dim - 1 - j) as u32).collect())
        .collect()
}

/// The deformed evaluation `δ_z^ℏ`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateFunctional<S: Scalar> {
    z: WickPoint<S>,
    v: S,
    branch: Branch,
    m: Vec<Vec<u32>>,
}

impl<S: Scalar> StateFunctional<S> {
    /// A state with `v = e^{ℏ/2}` given as a ring element and the branch
    /// chosen by the caller.
    pub fn with_parameter(z: WickPoint<S>, v: S, branch: Branch) -> Result<Self> {
        if v.inv().is_none() {
            return Err(Error::InvalidState("e^{hbar/2} must be invertible".into()));
        }
        let m = m_matrix(z.dim());
        Ok(Self { z, v, branch, m })
    }

    pub fn point(&self) -> &WickPoint<S> {
        &self.z
    }

    pub fn dim(&self) -> usize {
        self.z.dim()
    }

    pub fn branch(&self) -> Branch {
        self.branch
    }

    pub fn m(&self) -> &[Vec<u32>] {
        &self.m
    }

    /// `e^{ℏ/2}`.
    pub fn v(&self) -> &S {
        &self.v
    }

    /// `q = e^{−ℏ}` of the Wick product.
    pub fn q(&self) -> S {
        self.v.powi(-2).expect("v is a unit")
    }

    /// The exponent of `v` in `δ(w^K) = z^K v^e`.
    pub fn exponent(&self, k: &MultiIndex) -> i64 {
        let e = k.exponents();
        let mut quad = 0i64;
        for i in 0..e.len() {
            for j in 0..e.len() {
                quad += self.m[i][j] as i64 * e[i] as i64 * e[j] as i64;
            }
        }
        match self.branch {
            Branch::Nonpositive => -quad,
            Branch::Positive => 2 * k.pair_sum() as i64 + quad,
        }
    }

    /// `δ_z^ℏ(w^K)`.
    pub fn delta_eval(&self, k: &MultiIndex) -> S {
        let zk = self.z.power(k);
        if zk.is_zero() {
            return zk;
        }
        zk.times(&self.v.powi(self.exponent(k)).expect("v is a unit"))
    }

    /// `δ_z^ℏ` extended linearly.
    pub fn apply(&self, f: &Polynomial<S>) -> S {
        f.terms().iter().fold(S::zero(), |acc, (k, c)| acc.plus(&c.times(&self.delta_eval(k))))
    }

    /// The plain evaluation `f(z)`.
    pub fn evaluate(&self, f: &Polynomial<S>) -> S {
        f.terms().iter().fold(S::zero(), |acc, (k, c)| acc.plus(&c.times(&self.z.power(k))))
    }

    /// The Wick product of this state's `ℏ`.
    pub fn star(&self, f: &Polynomial<S>, g: &Polynomial<S>) -> Polynomial<S> {
        wick_product(f, g, &self.q())
    }

    /// `M_{K,L} = δ((w^K)* ⋆ w^L) = e^{−ℏ Σ_{i<j} K∨_j L_i} δ(w^{K∨+L})` on
    /// the basis `|K| ≤ D`.
    pub fn gram_matrix(&self, degree: u32) -> (Vec<MultiIndex>, Vec<Vec<S>>) {
        self.gram_with(degree, |j| self.delta_eval(j))
    }

    /// The same recipe with plain evaluation in place of `δ_z^ℏ`.
    pub fn undeformed_gram_matrix(&self, degree: u32) -> (Vec<MultiIndex>, Vec<Vec<S>>) {
        self.gram_with(degree, |j| self.z.power(j))
    }

    fn gram_with(&self, degree: u32, eval: impl Fn(&MultiIndex) -> S) -> (Vec<MultiIndex>, Vec<Vec<S>>) {
        let basis = MultiIndex::all_up_to(self.dim(), degree);
        let q = self.q();
        let rows = basis
            .iter()
            .map(|k| {
                let kv = k.reversed();
                basis.iter().map(|l| q.pow(kv.crossing(l)).times(&eval(&kv.add(l)))).collect()
            })
            .collect();
        (basis, rows)
    }
}

impl StateFunctional<Complex64> {
    pub fn new(z: WickPoint<Complex64>, hbar: f64) -> Result<Self> {
        if !hbar.is_finite() {
            return Err(Error::InvalidState("hbar must be finite".into()));
        }
        Self::with_parameter(z, Complex64::new(libm::exp(hbar / 2.0), 0.0), Branch::of(hbar))
    }

    /// `ln |δ(w^K)|`, safe where the value itself would overflow.
    pub fn log_abs_delta(&self, k: &MultiIndex) -> f64 {
        let mut acc = 0.0;
        for (z, &e) in self.z.coords().iter().zip(k.exponents()) {
            if e > 0 {
                acc += e as f64 * libm::log(z.norm());
            }
        }
        acc + self.exponent(k) as f64 * libm::log(self.v.norm())
    }

    pub fn gram(&self, degree: u32) -> (Vec<MultiIndex>, DMatrix<Complex64>) {
        let (basis, rows) = self.gram_matrix(degree);
        (basis, to_matrix(&rows))
    }
}

/// `f ⋆ g` for `w^K ⋆ w^L = q^{Σ_{i<j} K_j L_i} w^{K+L}`.
pub fn wick_product<S: Scalar>(f: &Polynomial<S>, g: &Polynomial<S>, q: &S) -> Polynomial<S> {
    let mut out = Polynomial::zero(f.dim(), GeneratorKind::W);
    for (k, a) in f.terms() {
        for (l, b) in g.terms() {
            out.add_term(k.add(l), a.times(b).times(&q.pow(k.crossing(l))));
        }
    }
    out
}

pub fn to_matrix(rows: &[Vec<Complex64>]) -> DMatrix<Complex64> {
    let n = rows.len();
    DMatrix::from_fn(n, n, |i, j| rows[i][j])
}

/// `δ_z((1 − w_j/z_j)* ⋆_ℏ (1 − w_j/z_j))` with plain evaluation `δ_z`;
/// equals `e^{−ℏ} − 1`. `j` is 1-based with `1 ≤ j ≤ ⌊d/2⌋`.
pub fn nonpositivity_witness(z: &WickPoint<Complex64>, hbar: f64, j: usize) -> Result<Complex64> {
    let d = z.dim();
    if j == 0 || j > d / 2 {
        return Err(Error::InvalidState(format!("witness index {j} outside 1..={}", d / 2)));
    }
    let zj = z.coords()[j - 1];
    if zj.norm() == 0.0 {
        return Err(Error::InvalidState(format!("z_{j} vanishes")));
    }
    let one = Polynomial::one(d, GeneratorKind::W);
    let wj = Polynomial::generator(d, GeneratorKind::W, j - 1);
    let f = &one - &wj.scale(&zj.inv());
    let q = Complex64::new(libm::exp(-hbar), 0.0);
    let square = wick_product(&f.conjugate(), &f, &q);
    Ok(square.eval(z.coords()))
}

/// `Ψ_ℏ(w^K) = e^{ℏ Σ_{i<j} K_i K_j} w^{K∨}` with `v = e^{ℏ/2}`; the inverse
/// uses `e^{−ℏ Σ_{i<j} K_i K_j}`.
pub fn psi_map<S: Scalar>(f: &Polynomial<S>, v: &S, direction: Direction) -> Result<Polynomial<S>> {
    if f.kind() != GeneratorKind::W {
        return Err(Error::KindMismatch);
    }
    let sign = match direction {
        Direction::Forward => 2,
        Direction::Inverse => -2,
    };
    let mut out = Polynomial::zero(f.dim(), GeneratorKind::W);
    for (k, c) in f.terms() {
        let factor = v.powi(sign * k.pair_sum() as i64).ok_or(Error::NotInvertible)?;
        out.add_term(k.reversed(), c.times(&factor));
    }
    Ok(out)
}

/// Outcome of [`psd_check`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsdCheck {
    pub pass: bool,
    pub min_eigenvalue: f64,
    /// Largest eigenvalue magnitude.
    pub scale: f64,
}

/// Eigenvalues (ascending) and matching eigenvector columns.
pub fn hermitian_eigen(m: &DMatrix<Complex64>) -> (Vec<f64>, DMatrix<Complex64>) {
    let eig = m.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(m.nrows(), order.len(), |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

fn hermitian_deviation(m: &DMatrix<Complex64>) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Passes iff the smallest eigenvalue is at least `−tol · scale`.
pub fn psd_check(m: &DMatrix<Complex64>, tol: f64) -> Result<PsdCheck> {
    if m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch { left: m.nrows(), right: m.ncols() });
    }
    let entry_scale = m.iter().map(|c| c.norm()).fold(1.0, f64::max);
    let deviation = hermitian_deviation(m);
    if deviation > 1e-12 * entry_scale {
        return Err(Error::NonHermitian { deviation });
    }
    if m.nrows() == 0 {
        return Ok(PsdCheck { pass: true, min_eigenvalue: 0.0, scale: 0.0 });
    }
    let (values, _) = hermitian_eigen(m);
    let min_eigenvalue = values[0];
    let scale = values.iter().map(|v| v.abs()).fold(0.0, f64::max);
    Ok(PsdCheck { pass: min_eigenvalue >= -tol * scale, min_eigenvalue, scale })
}

/// `V_ij = e^{−ijℏ}`, `0 ≤ i, j ≤ n`, for `ℏ ≤ 0`: checks positivity and
/// `det V = Π_{i<j} (e^{−jℏ} − e^{−iℏ})` to relative `1e-8`.
pub fn vandermonde_psd_check(hbar: f64, n: usize) -> Result<bool> {
    if hbar > 0.0 {
        return Err(Error::InvalidState("Vandermonde check needs hbar <= 0".into()));
    }
    if n > 12 {
        return Err(Error::SizeGuard(format!("n = {n} exceeds 12")));
    }
    let size = n + 1;
    let v = DMatrix::from_fn(size, size, |i, j| libm::exp(-((i * j) as f64) * hbar));
    let complex = v.map(|x| Complex64::new(x, 0.0));
    let psd = psd_check(&complex, PSD_TOLERANCE)?.pass;
    let mut product = 1.0;
    for j in 0..size {
        for i in 0..j {
            product *= libm::exp(-(j as f64) * hbar) - libm::exp(-(i as f64) * hbar);
        }
    }
    let det = v.determinant();
    // at ℏ = 0 the product vanishes and the matrix is all ones
    let det_ok = if product == 0.0 { det.abs() <= 1e-8 } else { (det - product).abs() <= 1e-8 * product.abs() };
    Ok(psd && det_ok)
}

/// A finite GNS picture of `δ_z^ℏ` on polynomials of degree `≤ D`.
#[derive(Debug, Clone)]
pub struct GnsData {
    pub degree: u32,
    pub basis: Vec<MultiIndex>,
    pub gram: DMatrix<Complex64>,
    /// Gram eigenvalues, ascending.
    pub eigenvalues: Vec<f64>,
    pub rank: usize,
    /// Columns: coefficient vectors orthonormal for `⟨f, g⟩ = δ(f* ⋆ g)`,
    /// spanning the quotient by null vectors.
    pub quotient: DMatrix<Complex64>,
    /// The same for the degree `≤ D − 1` subspace.
    pub domain: DMatrix<Complex64>,
    /// `π(w_i)` from the `domain` basis to the `quotient` basis.
    pub operators: Vec<DMatrix<Complex64>>,
    pub warning: Option<String>,
}

/// Orthonormal quotient basis of the Gram restricted to `keep`, embedded
/// back into the full coefficient space.
fn quotient_basis(gram: &DMatrix<Complex64>, keep: &[usize]) -> (Vec<f64>, DMatrix<Complex64>, Option<String>) {
    let n = gram.nrows();
    let sub = DMatrix::from_fn(keep.len(), keep.len(), |i, j| gram[(keep[i], keep[j])]);
    let (values, vectors) = hermitian_eigen(&sub);
    let top = values.last().copied().unwrap_or(0.0).max(0.0);
    let cut = RANK_TOLERANCE * top;
    let retained: Vec<usize> = (0..values.len()).filter(|&i| values[i] > cut && values[i] > 0.0).collect();
    let ambiguous = values.iter().any(|&v| v > cut / 10.0 && v < cut * 10.0);
    let warning = ambiguous.then(|| format!("rank tolerance {cut:e} sits within a factor 10 of an eigenvalue"));
    let basis = DMatrix::from_fn(n, retained.len(), |r, c| {
        match keep.iter().position(|&k| k == r) {
            Some(p) => vectors[(p, retained[c])] / Complex64::new(libm::sqrt(values[retained[c]]), 0.0),
            None => Complex64::new(0.0, 0.0),
        }
    });
    (values, basis, warning)
}

/// Matrix of `f ↦ a ⋆ f` on the basis, for columns of degree `≤ D − deg a`
/// (other columns left zero).
fn left_multiplication(
    state: &StateFunctional<Complex64>,
    basis: &[MultiIndex],
    a: &Polynomial<Complex64>,
    degree: u32,
) -> DMatrix<Complex64> {
    let n = basis.len();
    let reach = degree.saturating_sub(a.max_degree().unwrap_or(0));
    let mut m = DMatrix::from_element(n, n, Complex64::new(0.0, 0.0));
    for (col, l) in basis.iter().enumerate() {
        if l.degree() > reach {
            continue;
        }
        let w = Polynomial::monomial(state.dim(), GeneratorKind::W, l.clone(), Complex64::new(1.0, 0.0));
        for (k, c) in state.star(a, &w).terms() {
            let row = basis.binary_search(k).expect("product stays in the truncation");
            m[(row, col)] += *c;
        }
    }
    m
}

/// Builds the quotient and the generator representations.
pub fn gns_build(state: &StateFunctional<Complex64>, degree: u32) -> Result<GnsData> {
    let (basis, gram) = state.gram(degree);
    let check = psd_check(&gram, PSD_TOLERANCE)?;
    if !check.pass {
        return Err(Error::NotPositive { min_eigenvalue: check.min_eigenvalue });
    }
    let all: Vec<usize> = (0..basis.len()).collect();
    let (eigenvalues, quotient, warning) = quotient_basis(&gram, &all);
    let lower: Vec<usize> = (0..basis.len()).filter(|&i| basis[i].degree() < degree.max(1)).collect();
    let (_, domain, _) = quotient_basis(&gram, &lower);
    let operators = (0..state.dim())
        .map(|i| {
            let w = Polynomial::generator(state.dim(), GeneratorKind::W, i);
            let a = left_multiplication(state, &basis, &w, degree);
            quotient.adjoint() * &gram * a * &domain
        })
        .collect();
    Ok(GnsData { degree, basis, rank: quotient.ncols(), gram, eigenvalues, quotient, domain, operators, warning })
}

impl GnsData {
    /// `max |⟨π(a)f, g⟩ − ⟨f, π(a*)g⟩|` over orthonormal `f, g` from the
    /// quotient of polynomials of degree `≤ D − deg a`.
    pub fn adjoint_residual(&self, state: &StateFunctional<Complex64>, a: &Polynomial<Complex64>) -> Result<f64> {
        let k = a.max_degree().unwrap_or(0);
        if k > self.degree {
            return Err(Error::InvalidState("multiplier degree exceeds the truncation".into()));
        }
        let keep: Vec<usize> = (0..self.basis.len()).filter(|&i| self.basis[i].degree() <= self.degree - k).collect();
        let (_, f, _) = quotient_basis(&self.gram, &keep);
        let left = left_multiplication(state, &self.basis, a, self.degree);
        let right = left_multiplication(state, &self.basis, &a.conjugate(), self.degree);
        let lhs = (&left * &f).adjoint() * &self.gram * &f;
        let rhs = f.adjoint() * &self.gram * (&right * &f);
        Ok((lhs - rhs).iter().map(|c| c.norm()).fold(0.0, f64::max))
    }
}

/// Outcome of [`point_separation_probe`].
#[derive(Debug, Clone, PartialEq)]
pub struct Separation {
    pub separated: bool,
    pub witness: Option<WickPoint<Complex64>>,
    pub value: Complex64,
}

/// Looks for `z` with `|δ_z^ℏ(f)| > tol`: first a tensor grid over
/// `{−1, −1/2, 1/2, 1}` in the free coordinates, then 100 random points.
pub fn point_separation_probe(
    f: &Polynomial<Complex64>,
    hbar: f64,
    rng: &mut ChaCha8Rng,
    tol: f64,
) -> Result<Separation> {
    if f.is_zero() {
        return Err(Error::InvalidState("point separation needs f != 0".into()));
    }
    let d = f.dim();
    let free = d.div_ceil(2);
    let grid = [-1.0, -0.5, 0.5, 1.0];
    let mut candidates = Vec::new();
    for mut idx in 0..grid.len().pow(free as u32) {
        let mut z = alloc::vec![Complex64::new(0.0, 0.0); d];
        for i in 0..free {
            z[i] = Complex64::new(grid[idx % grid.len()], 0.0);
            z[d - 1 - i] = z[i];
            idx /= grid.len();
        }
        candidates.push(WickPoint(z));
    }
    for _ in 0..100 {
        candidates.push(WickPoint::random(rng, d, 1.0));
    }
    for z in candidates {
        let value = StateFunctional::new(z.clone(), hbar)?.apply(f);
        if value.norm() > tol {
            return Ok(Separation { separated: true, witness: Some(z), value });
        }
    }
    Ok(Separation { separated: false, witness: None, value: Complex64::new(0.0, 0.0) })
}

/// `|δ_z^ℏ(w^K)| ≤ (c e^{dℏ})^{|K|²}` with `c = max(1, |z_i|)`, all
/// `|K| ≤ max_degree`, compared in log space.
pub fn state_macgyver_bound(state: &StateFunctional<Complex64>, hbar: f64, max_degree: u32) -> ProbeReport {
    let d = state.dim();
    let c = state.point().coords().iter().map(|z| z.norm()).fold(1.0, f64::max);
    let ln_base = libm::log(c) + d as f64 * hbar;
    let cases = MultiIndex::all_up_to(d, max_degree)
        .into_iter()
        .map(|k| {
            let n = k.degree() as f64;
            let id = digest(["state_bound", &format!("{k:?}")]);
            ProbeCase::new(id, state.log_abs_delta(&k), n * n * ln_base, 1e-12 * (1.0 + n * n * ln_base.abs()))
        })
        .collect();
    ProbeReport::from_cases("state_macgyver_bound", cases)
}

/// `ln( |δ_z^ℏ(w_j^k w̄_j^k)| / ‖w_j^k w̄_j^k‖_ρ )` with `w̄_j = w_{d+1−j}`
/// (`j` 1-based).
pub fn log_growth_ratio(state: &StateFunctional<Complex64>, j: usize, k: u32, rho: &[f64]) -> f64 {
    let d = state.dim();
    let mut e = alloc::vec![0u32; d];
    e[j - 1] += k;
    e[d - j] += k;
    let m = MultiIndex::new(e);
    let ln_norm: f64 = rho.iter().zip(m.exponents()).map(|(r, &x)| x as f64 * libm::log(*r)).sum();
    state.log_abs_delta(&m) - ln_norm
}

/// The first `k ≤ k_max` where the ratio of [`log_growth_ratio`] exceeds
/// `threshold`.
pub fn unbounded_ratio_probe(
    state: &StateFunctional<Complex64>,
    j: usize,
    rho: &[f64],
    threshold: f64,
    k_max: u32,
) -> Option<u32> {
    let target = libm::log(threshold);
    (1..=k_max).find(|&k| log_growth_ratio(state, j, k, rho) > target)
}
