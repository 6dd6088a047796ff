use proptest::prelude::*;
use starprod_core::params::{Evaluation, ParamRule, ParamScalar};
use starprod_core::parse::parse_poly;
use starprod_core::sample::{self, ChaCha8Rng, Sample};
use starprod_core::scalar::{CRational, Complex64, RationalQ, Scalar, TruncSeries, UPoly};
use starprod_core::{GeneratorKind, MultiIndex, Polynomial};

fn series(rng: &mut ChaCha8Rng) -> TruncSeries<CRational> {
    TruncSeries::new((0..4).map(|_| CRational::sample(rng)).collect(), 5)
}

fn rational_q(rng: &mut ChaCha8Rng) -> RationalQ {
    let num = UPoly::new((0..3).map(|_| CRational::sample(rng)).collect());
    loop {
        let den = UPoly::new((0..2).map(|_| CRational::sample(rng)).collect());
        if let Some(r) = RationalQ::from_parts(num.clone(), den) {
            return r;
        }
    }
}

fn close(a: &Complex64, b: &Complex64) -> bool {
    let scale = a.norm().max(b.norm()).max(1.0);
    (a - b).norm() <= 1e-12 * scale
}

fn ring_axioms<S: Scalar>(a: &S, b: &S, c: &S, eq: impl Fn(&S, &S) -> bool) {
    assert!(eq(&a.plus(b), &b.plus(a)));
    assert!(eq(&a.times(b), &b.times(a)));
    assert!(eq(&a.plus(b).plus(c), &a.plus(&b.plus(c))));
    assert!(eq(&a.times(b).times(c), &a.times(&b.times(c))));
    assert!(eq(&a.times(&b.plus(c)), &a.times(b).plus(&a.times(c))));
    assert!(eq(&a.plus(&S::zero()), a));
    assert!(eq(&a.times(&S::one()), a));
    assert!(eq(&a.plus(&a.negate()), &S::zero()));
    assert!(eq(&a.minus(b), &a.plus(&b.negate())));
    assert!(eq(&a.conj().conj(), a));
    assert!(eq(&a.times(b).conj(), &a.conj().times(&b.conj())));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exact_rational_ring(seed in any::<u64>()) {
        let mut r = sample::rng(seed);
        let (a, b, c) = (CRational::sample(&mut r), CRational::sample(&mut r), CRational::sample(&mut r));
        ring_axioms(&a, &b, &c, |x, y| x == y);
        if let Some(inv) = a.inv() {
            prop_assert!(a.times(&inv).is_one());
        }
    }

    #[test]
    fn complex_float_ring(seed in any::<u64>()) {
        let mut r = sample::rng(seed);
        let (a, b, c) = (Complex64::sample(&mut r), Complex64::sample(&mut r), Complex64::sample(&mut r));
        ring_axioms(&a, &b, &c, close);
    }

    #[test]
    fn series_ring(seed in any::<u64>()) {
        let mut r = sample::rng(seed);
        let (a, b, c) = (series(&mut r), series(&mut r), series(&mut r));
        ring_axioms(&a, &b, &c, |x, y| x == y);
    }

    #[test]
    fn rational_function_ring(seed in any::<u64>()) {
        let mut r = sample::rng(seed);
        let (a, b, c) = (rational_q(&mut r), rational_q(&mut r), rational_q(&mut r));
        ring_axioms(&a, &b, &c, |x, y| x == y);
    }

    #[test]
    fn polynomial_conjugation(seed in any::<u64>(), d in 1usize..4) {
        let mut r = sample::rng(seed);
        for kind in [GeneratorKind::X, GeneratorKind::W] {
            let f: Polynomial<CRational> = sample::polynomial(&mut r, d, kind, 4, 5);
            let g: Polynomial<CRational> = sample::polynomial(&mut r, d, kind, 4, 5);
            prop_assert_eq!(f.conjugate().conjugate(), f.clone());
            prop_assert_eq!((&f * &g).conjugate(), &f.conjugate() * &g.conjugate());
        }
    }
}

#[test]
fn real_coordinates_conjugate_coefficients_only() {
    let f: Polynomial<CRational> = parse_poly("(1+2i)*x1*x2^2", 2, GeneratorKind::X).unwrap();
    let expected: Polynomial<CRational> = parse_poly("(1-2i)*x1*x2^2", 2, GeneratorKind::X).unwrap();
    assert_eq!(f.conjugate(), expected);
}

#[test]
fn wick_coordinates_reverse_under_conjugation() {
    let f: Polynomial<CRational> = parse_poly("(1+2i)*w1*w2^2", 3, GeneratorKind::W).unwrap();
    let expected: Polynomial<CRational> = parse_poly("(1-2i)*w2^2*w3", 3, GeneratorKind::W).unwrap();
    assert_eq!(f.conjugate(), expected);
}

#[test]
fn exp_i_and_affine_share_first_order() {
    let at = Evaluation::Series(4);
    let e: TruncSeries<CRational> = ParamScalar::realize(&ParamRule::ExpI, &at).unwrap();
    let a: TruncSeries<CRational> = ParamScalar::realize(&ParamRule::Affine, &at).unwrap();
    assert_eq!(e.coeff(0), CRational::one());
    assert_eq!(e.coeff(1), CRational::i());
    assert_eq!(e.truncated(1), a.truncated(1));
    assert_ne!(e, a);
}

#[test]
fn parse_format_round_trip_corpus() {
    let mut r = sample::rng(20261014);
    for n in 0..1000 {
        let d = 1 + n % 4;
        let kind = if n % 2 == 0 { GeneratorKind::X } else { GeneratorKind::W };
        let f: Polynomial<CRational> = sample::polynomial(&mut r, d, kind, 5, 6);
        let back: Polynomial<CRational> = parse_poly(&f.format(false), d, kind).unwrap();
        assert_eq!(back, f, "{}", f.format(false));
        let g: Polynomial<Complex64> = sample::polynomial(&mut r, d, kind, 5, 6);
        let back: Polynomial<Complex64> = parse_poly(&g.format(true), d, kind).unwrap();
        assert_eq!(back, g, "{}", g.format(true));
    }
}

#[test]
fn degree_bookkeeping() {
    let f: Polynomial<CRational> = parse_poly("x1 + 3*x1^2*x2^3", 2, GeneratorKind::X).unwrap();
    assert_eq!(f.min_degree(), Some(1));
    assert_eq!(f.max_degree(), Some(5));
    assert_eq!(f.homogeneous_part(5).len(), 1);
    assert_eq!(f.coeff(&MultiIndex::new(vec![2, 3])), CRational::from_i64(3));
    assert!(Polynomial::<CRational>::zero(2, GeneratorKind::X).min_degree().is_none());
}
