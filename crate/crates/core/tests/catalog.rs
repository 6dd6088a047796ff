use proptest::prelude::*;
use starprod_core::catalog::{
    equivalence_t, log_canonical_star, log_canonical_table, nonquadratic_star, nonquadratic_table, q_multinomial,
    quantum_weyl_star, sigma_oracle_star, symmetrized_star, translated_poisson, translated_star, wick_involution_condition,
    wick_star, Catalog, Direction, LogCanonical, NonquadraticParams, SymmetrizedLogCanonical,
};
use starprod_core::error::Error;
use starprod_core::params::{Evaluation, ParameterCatalog};
use starprod_core::parse::parse_poly;
use starprod_core::poisson::poisson_bracket;
use starprod_core::reduction::{check_overlaps, star_by_reduction, PhiTable, ReductionStar, StarProduct};
use starprod_core::sample;
use starprod_core::scalar::{CRational, RationalQ, Scalar, TruncSeries};
use starprod_core::{GeneratorKind, MultiIndex, Polynomial};

fn mono<S: Scalar>(k: &MultiIndex) -> Polynomial<S> {
    Polynomial::monomial(k.dim(), GeneratorKind::X, k.clone(), S::one())
}

fn cr(text: &str) -> CRational {
    parse_poly::<CRational>(text, 1, GeneratorKind::X).unwrap().coeff(&MultiIndex::zero(1))
}

#[test]
fn log_canonical_examples() {
    let q = RationalQ::q();
    let k = MultiIndex::new(vec![0, 1, 1]);
    let l = MultiIndex::new(vec![1, 1, 0]);
    let expected = Polynomial::monomial(3, GeneratorKind::X, MultiIndex::new(vec![1, 2, 1]), q.pow(3));
    assert_eq!(log_canonical_star(&k, &l, &q).unwrap(), expected);
    assert_eq!(star_by_reduction(&mono(&k), &mono(&l), &log_canonical_table(3, GeneratorKind::X, &q)).unwrap().result, expected);
    assert_eq!(log_canonical_star(&k, &MultiIndex::zero(3), &q).unwrap(), mono(&k));
    let w = wick_star(&MultiIndex::new(vec![0, 1]), &MultiIndex::new(vec![1, 0]), &q).unwrap();
    assert_eq!(w, Polynomial::monomial(2, GeneratorKind::W, MultiIndex::new(vec![1, 1]), q));
}

#[test]
fn oracle_equivalence_on_small_monomials() {
    let params = NonquadraticParams { p: cr("2"), q: cr("1/2"), r: cr("3"), n: 2 };
    let phi = nonquadratic_table(&params, &params.r.inv().unwrap());
    let q = RationalQ::q();
    let lc = log_canonical_table(2, GeneratorKind::X, &q);
    for k in MultiIndex::all_up_to(3, 3) {
        for l in MultiIndex::all_up_to(3, 3) {
            let e = |m: &MultiIndex| [m.get(0), m.get(1), m.get(2)];
            let closed = nonquadratic_star(e(&k), e(&l), &params).unwrap();
            assert_eq!(closed, star_by_reduction(&mono(&k), &mono(&l), &phi).unwrap().result, "{k} {l}");
        }
    }
    for k in MultiIndex::all_up_to(2, 4) {
        for l in MultiIndex::all_up_to(2, 4) {
            let closed = log_canonical_star(&k, &l, &q).unwrap();
            assert_eq!(closed, star_by_reduction(&mono(&k), &mono(&l), &lc).unwrap().result);
        }
    }
}

#[test]
fn quantum_weyl_generator_relations() {
    let (p, q) = (cr("1+1/4i"), cr("3/5+4/5i"));
    let zy = quantum_weyl_star([0, 1], [1, 0], &p, &q).unwrap();
    let expected = parse_poly::<CRational>("(3/5+4/5i)*x1*x2 + 1/4i", 2, GeneratorKind::X).unwrap();
    assert_eq!(zy, expected);
    assert_eq!(quantum_weyl_star([1, 0], [0, 1], &p, &q).unwrap(), parse_poly("x1*x2", 2, GeneratorKind::X).unwrap());
    let weyl = quantum_weyl_star([0, 1], [1, 0], &p, &CRational::one()).unwrap();
    assert_eq!(weyl, parse_poly("x1*x2 + 1/4i", 2, GeneratorKind::X).unwrap());
}

#[test]
fn nonquadratic_generator_products() {
    let params = NonquadraticParams { p: cr("2"), q: cr("1/2"), r: cr("3"), n: 2 };
    let zy = nonquadratic_star([0, 0, 1], [0, 1, 0], &params).unwrap();
    assert_eq!(zy, parse_poly("1/2*x2*x3 + x1^2", 3, GeneratorKind::X).unwrap());
    let yx = nonquadratic_star([0, 1, 0], [1, 0, 0], &params).unwrap();
    assert_eq!(yx, parse_poly("3*x1*x2", 3, GeneratorKind::X).unwrap());
}

#[test]
fn broken_nonquadratic_control_names_the_difference() {
    let (p, q, r, s) = (cr("2"), cr("1/2"), cr("3"), cr("5"));
    for n in 0..3u32 {
        let params = NonquadraticParams { p: p.clone(), q: q.clone(), r: r.clone(), n };
        let report = check_overlaps(&nonquadratic_table(&params, &s)).unwrap();
        assert!(!report.ok);
        let coeff = p.minus(&CRational::one()).times(&r.times(&s).minus(&CRational::one()));
        let expected = Polynomial::monomial(3, GeneratorKind::X, MultiIndex::new(vec![n + 1, 0, 0]), coeff);
        assert_eq!(report.failures[0].difference, expected, "N={n}");
        assert!(check_overlaps(&nonquadratic_table(&params, &r.inv().unwrap())).unwrap().ok);
    }
}

#[test]
fn q_multinomials_have_positive_integer_coefficients() {
    let q = RationalQ::q();
    for d in 1..=3 {
        for k in MultiIndex::all_up_to(d, 6) {
            let m = q_multinomial(&k, &q);
            assert!(m.is_polynomial());
            let coeffs = m.numer().coeffs();
            assert_eq!(coeffs[0], CRational::one(), "{k}");
            for c in coeffs {
                assert!(c.is_real() && c.re.is_integer() && c.re >= num_rational::BigRational::from_integer(0.into()));
            }
            // evaluating at q = 1 recovers the ordinary multinomial
            let classical = starprod_core::catalog::multinomial(&k);
            assert_eq!(m.eval(&CRational::one()).unwrap(), CRational::real(num_rational::BigRational::from_integer(classical)));
        }
    }
}

#[test]
fn q_multinomial_inversion_identity() {
    let q = RationalQ::q();
    let q_inv = q.inv().unwrap();
    for d in 1..=3 {
        for k in MultiIndex::all_up_to(d, 6) {
            let n = k.degree() as u64;
            let squares: u64 = k.exponents().iter().map(|&e| (e as u64) * (e as u64)).sum();
            let lhs = q_multinomial(&k, &q);
            let rhs = q.pow((n * n - squares) / 2).times(&q_multinomial(&k, &q_inv));
            assert_eq!(lhs, rhs, "{k}");
        }
    }
}

#[test]
fn symmetrized_generator_coefficients() {
    let q = RationalQ::q();
    let (x1, x2) = (MultiIndex::unit(2, 0), MultiIndex::unit(2, 1));
    let xy = MultiIndex::new(vec![1, 1]);
    let one_plus_q = RationalQ::one().plus(&q);
    let two = RationalQ::from_i64(2);
    assert_eq!(symmetrized_star(&x1, &x2, &q).unwrap().coeff(&xy), two.div(&one_plus_q).unwrap());
    assert_eq!(symmetrized_star(&x2, &x1, &q).unwrap().coeff(&xy), two.times(&q).div(&one_plus_q).unwrap());
    assert_eq!(symmetrized_star(&xy, &MultiIndex::zero(2), &q).unwrap(), mono(&xy));
}

#[test]
fn symmetrized_pole_at_minus_one() {
    let err = symmetrized_star(&MultiIndex::unit(2, 0), &MultiIndex::unit(2, 1), &CRational::from_i64(-1)).unwrap_err();
    assert_eq!(err, Error::PoleAtRootOfUnity { order: 2 });
}

#[test]
fn symmetrized_product_is_associative_as_rational_functions() {
    let q = RationalQ::q();
    let star = SymmetrizedLogCanonical { dim: 2, q: q.clone() };
    let basis = MultiIndex::all_up_to(2, 3);
    for a in &basis {
        for b in &basis {
            let ab = star.star_monomials(a, b).unwrap();
            for c in &basis {
                let left = star.star(&ab, &mono(c)).unwrap();
                let right = star.star(&mono(a), &star.star_monomials(b, c).unwrap()).unwrap();
                assert_eq!(left, right, "{a} {b} {c}");
            }
        }
    }
    let star3 = SymmetrizedLogCanonical { dim: 3, q };
    let basis = MultiIndex::all_up_to(3, 2);
    for a in &basis {
        for b in &basis {
            for c in &basis {
                let left = star3.star(&star3.star_monomials(a, b).unwrap(), &mono(c)).unwrap();
                let right = star3.star(&mono(a), &star3.star_monomials(b, c).unwrap()).unwrap();
                assert_eq!(left, right);
            }
        }
    }
}

#[test]
fn sigma_oracle_agrees_on_low_degrees() {
    for q in [cr("2"), cr("-1/3"), cr("3/5+4/5i")] {
        let phi = log_canonical_table(3, GeneratorKind::X, &q);
        for k in MultiIndex::all_up_to(3, 2) {
            for l in MultiIndex::all_up_to(3, 2) {
                assert_eq!(sigma_oracle_star(&k, &l, &phi).unwrap(), symmetrized_star(&k, &l, &q).unwrap());
            }
        }
    }
}

#[test]
fn equivalence_transform_intertwines() {
    let q = cr("2/3");
    let lc = LogCanonical { dim: 2, kind: GeneratorKind::X, q: q.clone() };
    let sym = SymmetrizedLogCanonical { dim: 2, q: q.clone() };
    let xy = MultiIndex::new(vec![1, 1]);
    let t = equivalence_t(&mono::<CRational>(&xy), &q, Direction::Forward).unwrap();
    assert_eq!(t.coeff(&xy), cr("5/6"));
    let mut rng = sample::rng(8);
    for _ in 0..20 {
        let f: Polynomial<CRational> = sample::polynomial(&mut rng, 2, GeneratorKind::X, 3, 3);
        let g: Polynomial<CRational> = sample::polynomial(&mut rng, 2, GeneratorKind::X, 3, 3);
        let tf = equivalence_t(&f, &q, Direction::Forward).unwrap();
        let tg = equivalence_t(&g, &q, Direction::Forward).unwrap();
        let pulled = equivalence_t(&lc.star(&tf, &tg).unwrap(), &q, Direction::Inverse).unwrap();
        assert_eq!(pulled, sym.star(&f, &g).unwrap());
        assert_eq!(equivalence_t(&tf, &q, Direction::Inverse).unwrap(), f);
    }
}

#[test]
fn wick_involution_condition_examples() {
    let real = log_canonical_table(3, GeneratorKind::W, &cr("1/2"));
    assert!(wick_involution_condition(&real).unwrap());
    assert!(wick_involution_condition(&PhiTable::<CRational>::new(3, GeneratorKind::W)).unwrap());
    let q = TruncSeries::polynomial(vec![CRational::one(), CRational::from_i64(-1), CRational::i()]);
    assert!(!wick_involution_condition(&log_canonical_table(2, GeneratorKind::W, &q)).unwrap());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn wick_product_is_star_compatible_for_real_q(seed in any::<u64>()) {
        let mut rng = sample::rng(seed);
        let star = ReductionStar::new(log_canonical_table(3, GeneratorKind::W, &cr("-2/7")));
        let f: Polynomial<CRational> = sample::polynomial(&mut rng, 3, GeneratorKind::W, 3, 3);
        let g: Polynomial<CRational> = sample::polynomial(&mut rng, 3, GeneratorKind::W, 3, 3);
        let lhs = star.star(&f, &g).unwrap().conjugate();
        let rhs = star.star(&g.conjugate(), &f.conjugate()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn symmetrized_product_is_hermitian_on_the_unit_circle(seed in any::<u64>()) {
        let mut rng = sample::rng(seed);
        let star = SymmetrizedLogCanonical { dim: 3, q: cr("3/5+4/5i") };
        let f: Polynomial<CRational> = sample::polynomial(&mut rng, 3, GeneratorKind::X, 3, 3);
        let g: Polynomial<CRational> = sample::polynomial(&mut rng, 3, GeneratorKind::X, 3, 3);
        let lhs = star.star(&f, &g).unwrap().conjugate();
        let rhs = star.star(&g.conjugate(), &f.conjugate()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn translated_products_are_associative(seed in any::<u64>()) {
        let mut rng = sample::rng(seed);
        let phi = log_canonical_table(2, GeneratorKind::X, &cr("3"));
        let c = [cr("1"), cr("-1")];
        let (f, g, h): (Polynomial<CRational>, Polynomial<CRational>, Polynomial<CRational>) = (
            sample::polynomial(&mut rng, 2, GeneratorKind::X, 3, 2),
            sample::polynomial(&mut rng, 2, GeneratorKind::X, 3, 2),
            sample::polynomial(&mut rng, 2, GeneratorKind::X, 3, 2),
        );
        let left = translated_star(&translated_star(&f, &g, &phi, &c).unwrap(), &h, &phi, &c).unwrap();
        let right = translated_star(&f, &translated_star(&g, &h, &phi, &c).unwrap(), &phi, &c).unwrap();
        prop_assert_eq!(left, right);
    }
}

#[test]
fn translated_bracket_example() {
    let cat = Catalog::from_text("log_canonical", Some(2), &ParameterCatalog::new()).unwrap();
    let eta = cat.poisson::<CRational>(2).unwrap();
    let c = [cr("2/3"), cr("-5")];
    let shifted = translated_poisson(&eta, &c).unwrap();
    let x = |s: &str| parse_poly::<CRational>(s, 2, GeneratorKind::X).unwrap();
    let expected = x("x1*x2 - 5*x1 + 2/3*x2 - 10/3");
    assert_eq!(poisson_bracket(&shifted, &x("x2"), &x("x1")).unwrap(), expected);
    let translated = Catalog::from_text("translated{c=(2/3,-5)}", None, &ParameterCatalog::new()).unwrap();
    assert_eq!(translated.poisson::<CRational>(2).unwrap(), shifted);
    let zero = [CRational::zero(), CRational::zero()];
    let phi = log_canonical_table(2, GeneratorKind::X, &cr("3"));
    assert_eq!(translated_star(&x("x2"), &x("x1"), &phi, &zero).unwrap(), star_by_reduction(&x("x2"), &x("x1"), &phi).unwrap().result);
}

#[test]
fn closed_forms_match_engines_for_every_catalog() {
    let at = Evaluation::Point(CRational::ratio(1, 2));
    let bindings = ParameterCatalog::parse_bindings("q=constant:(3/5+4/5i)").unwrap();
    for (id, d) in [("log_canonical", 3), ("translated{c=(1,-1)}", 2)] {
        let cat = Catalog::from_text(id, Some(d), &bindings).unwrap();
        let closed = cat.closed_form::<CRational>(&at).unwrap();
        let engine = cat.engine::<CRational>(&at).unwrap();
        for k in MultiIndex::all_up_to(d, 3) {
            for l in MultiIndex::all_up_to(d, 2) {
                assert_eq!(closed.star_monomials(&k, &l).unwrap(), engine.star_monomials(&k, &l).unwrap(), "{id}");
            }
        }
    }
}
