use proptest::prelude::*;
use starprod_core::catalog::Catalog;
use starprod_core::params::{Evaluation, ParamScalar, ParameterCatalog};
use starprod_core::parse::parse_poly;
use starprod_core::poisson::{jacobi_check, jacobiators, poisson_bracket, poisson_from_phi, PoissonStructure};
use starprod_core::reduction::{
    check_overlaps, star_by_reduction, star_by_reduction_with, PhiTable, ReductionOptions, Strategy,
};
use starprod_core::sample::{self, Sample};
use starprod_core::scalar::{CRational, RationalQ, Scalar, TruncSeries};
use starprod_core::topology::first_order_antisymmetrization;
use starprod_core::{GeneratorKind, MultiIndex, Polynomial};

type Series = TruncSeries<CRational>;

/// Exact evaluated tables; parameters are constants so they stay rational.
fn exact_tables() -> Vec<(String, PhiTable<CRational>)> {
    let point = Evaluation::Point(CRational::ratio(1, 3));
    let specs = [
        ("log_canonical", 3, "q=constant:(3/5+4/5i)"),
        ("wick_log_canonical", 3, "q=constant:1/2"),
        ("nonquadratic{N=0}", 3, "p=constant:2,q=constant:1/2,r=constant:3"),
        ("nonquadratic{N=1}", 3, "p=constant:(1+i),q=constant:2,r=constant:-1/2"),
        ("nonquadratic{N=2}", 3, "p=constant:3,q=constant:(1/2-i),r=constant:2"),
        ("quantum_weyl{lambda=1}", 2, "p=constant:(1+i),q=constant:(3/5+4/5i)"),
        ("translated{c=(1,-1)}", 2, "q=constant:2"),
    ];
    specs
        .iter()
        .map(|(id, d, params)| {
            let cat = Catalog::from_text(id, Some(*d), &ParameterCatalog::parse_bindings(params).unwrap()).unwrap();
            (id.to_string(), cat.table::<CRational>(&point).unwrap().unwrap())
        })
        .collect()
}

fn series_table(id: &str, d: usize, n: usize) -> PhiTable<Series> {
    let cat = Catalog::from_text(id, Some(d), &ParameterCatalog::new()).unwrap();
    cat.table::<Series>(&Evaluation::Series(n)).unwrap().unwrap()
}

fn sample_series(rng: &mut sample::ChaCha8Rng, d: usize, kind: GeneratorKind, max_degree: u32, n: usize) -> Polynomial<Series> {
    let f: Polynomial<CRational> = sample::polynomial(rng, d, kind, max_degree, 3);
    let mut out = Polynomial::zero(d, kind);
    for (k, c) in f.terms() {
        out.add_term(k.clone(), TruncSeries::new(vec![c.clone(), CRational::sample(rng)], n));
    }
    out
}

fn star<S: Scalar>(f: &Polynomial<S>, g: &Polynomial<S>, phi: &PhiTable<S>) -> Polynomial<S> {
    star_by_reduction(f, g, phi).unwrap().result
}

#[test]
fn every_catalog_table_passes_its_overlap_check() {
    for (id, phi) in exact_tables() {
        assert!(check_overlaps(&phi).unwrap().ok, "{id}");
    }
}

#[test]
fn leftmost_and_rightmost_strategies_agree() {
    let mut rng = sample::rng(5);
    let left = ReductionOptions { strategy: Strategy::Leftmost, ..Default::default() };
    for (id, phi) in exact_tables() {
        for _ in 0..6 {
            let f: Polynomial<CRational> = sample::polynomial(&mut rng, phi.dim(), phi.kind(), 5, 3);
            let g: Polynomial<CRational> = sample::polynomial(&mut rng, phi.dim(), phi.kind(), 5, 3);
            let a = star_by_reduction(&f, &g, &phi).unwrap().result;
            let b = star_by_reduction_with(&f, &g, &phi, &left).unwrap().result;
            assert_eq!(a, b, "{id}: {f} * {g}");
        }
    }
}

#[test]
fn associativity_in_exact_evaluated_mode() {
    let mut rng = sample::rng(11);
    for (id, phi) in exact_tables() {
        for _ in 0..3 {
            let f: Polynomial<CRational> = sample::homogeneous(&mut rng, phi.dim(), phi.kind(), 2, 2);
            let g: Polynomial<CRational> = sample::polynomial(&mut rng, phi.dim(), phi.kind(), 6, 2);
            let h: Polynomial<CRational> = sample::polynomial(&mut rng, phi.dim(), phi.kind(), 6, 2);
            let left = star(&star(&f, &g, &phi), &h, &phi);
            let right = star(&f, &star(&g, &h, &phi), &phi);
            assert_eq!(left, right, "{id}");
        }
    }
}

#[test]
fn associativity_in_series_mode() {
    let mut rng = sample::rng(12);
    let n = 4;
    for (id, d) in [("log_canonical", 3), ("wick_log_canonical", 3), ("nonquadratic{N=1}", 3), ("quantum_weyl", 2)] {
        let phi = series_table(id, d, n);
        assert!(phi.starts_at_order_one());
        for _ in 0..4 {
            let f = sample_series(&mut rng, d, phi.kind(), 4, n);
            let g = sample_series(&mut rng, d, phi.kind(), 4, n);
            let h = sample_series(&mut rng, d, phi.kind(), 4, n);
            let left = star(&star(&f, &g, &phi), &h, &phi);
            let right = star(&f, &star(&g, &h, &phi), &phi);
            assert_eq!(left, right, "{id}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn unit_law(seed in any::<u64>(), which in 0usize..7) {
        let (_, phi) = exact_tables().swap_remove(which);
        let mut rng = sample::rng(seed);
        let f: Polynomial<CRational> = sample::polynomial(&mut rng, phi.dim(), phi.kind(), 4, 4);
        let one = Polynomial::one(phi.dim(), phi.kind());
        prop_assert_eq!(star(&one, &f, &phi), f.clone());
        prop_assert_eq!(star(&f, &one, &phi), f);
    }
}

#[test]
fn reduction_count_equals_crossing_number() {
    let q = RationalQ::q();
    let formal = Catalog::from_text("log_canonical", Some(2), &ParameterCatalog::new())
        .unwrap()
        .table::<RationalQ>(&Evaluation::Point(CRational::zero()))
        .unwrap()
        .unwrap();
    // at ℏ = 0 the tail vanishes; the count is still the number of swaps
    let formal_q = starprod_core::catalog::log_canonical_table(2, GeneratorKind::X, &q);
    for phi in [formal, formal_q] {
        for k in MultiIndex::all_up_to(2, 6) {
            for l in MultiIndex::all_up_to(2, 6) {
                let f = Polynomial::monomial(2, GeneratorKind::X, k.clone(), RationalQ::one());
                let g = Polynomial::monomial(2, GeneratorKind::X, l.clone(), RationalQ::one());
                assert_eq!(star_by_reduction(&f, &g, &phi).unwrap().reduction_count, k.crossing(&l));
            }
        }
    }
    let phi3 = starprod_core::catalog::log_canonical_table(3, GeneratorKind::X, &CRational::from_i64(2));
    for k in MultiIndex::all_up_to(3, 6) {
        for l in MultiIndex::all_up_to(3, 6) {
            let f = Polynomial::monomial(3, GeneratorKind::X, k.clone(), CRational::one());
            let g = Polynomial::monomial(3, GeneratorKind::X, l.clone(), CRational::one());
            let trace = star_by_reduction(&f, &g, &phi3).unwrap();
            assert_eq!(trace.reduction_count, k.crossing(&l));
            let expected = Polynomial::monomial(3, GeneratorKind::X, k.add(&l), CRational::from_i64(2).pow(k.crossing(&l)));
            assert_eq!(trace.result, expected);
        }
    }
}

#[test]
fn first_order_antisymmetrization_is_i_times_the_bracket() {
    let mut rng = sample::rng(3);
    for (id, d) in [
        ("log_canonical", 3),
        ("wick_log_canonical", 3),
        ("nonquadratic{N=2}", 3),
        ("quantum_weyl", 2),
        ("translated{c=(1,-1)}", 2),
    ] {
        let phi = series_table(id, d, 2);
        let eta = poisson_from_phi(&phi);
        for _ in 0..10 {
            let f: Polynomial<CRational> = sample::polynomial(&mut rng, d, phi.kind(), 3, 3);
            let g: Polynomial<CRational> = sample::polynomial(&mut rng, d, phi.kind(), 3, 3);
            let anti = first_order_antisymmetrization(&f, &g, &phi).unwrap();
            let bracket = poisson_bracket(&eta, &f, &g).unwrap().scale(&CRational::i());
            assert_eq!(anti, bracket, "{id}");
        }
    }
}

#[test]
fn log_canonical_bracket_example() {
    let eta: PoissonStructure<CRational> = Catalog::from_text("log_canonical", Some(2), &ParameterCatalog::new())
        .unwrap()
        .poisson(2)
        .unwrap();
    let x = |s: &str| parse_poly::<CRational>(s, 2, GeneratorKind::X).unwrap();
    assert_eq!(poisson_bracket(&eta, &x("x2"), &x("x1")).unwrap(), x("x1*x2"));
    assert_eq!(poisson_bracket(&eta, &x("x2^2"), &x("x1")).unwrap(), x("2*x1*x2^2"));
    assert!(jacobi_check(&eta, 0.0));
}

#[test]
fn a_bracket_violating_jacobi_is_reported() {
    let x = |s: &str| parse_poly::<CRational>(s, 3, GeneratorKind::X).unwrap();
    let eta = PoissonStructure::zero(3, GeneratorKind::X).with(0, 1, x("x2")).unwrap().with(1, 2, x("x3")).unwrap();
    assert_eq!(poisson_bracket(&eta, &x("x2"), &x("x1")).unwrap(), x("x2"));
    assert!(poisson_bracket(&eta, &x("x3"), &x("x1")).unwrap().is_zero());
    let jac = jacobiators(&eta);
    assert_eq!(jac, vec![((1, 2, 3), x("-x3"))]);
    assert!(!jacobi_check(&eta, 0.0));
}

#[test]
fn nonquadratic_tables_give_vanishing_jacobiators() {
    for n in 0..3 {
        let eta: PoissonStructure<CRational> =
            Catalog::from_text(&format!("nonquadratic{{N={n}}}"), None, &ParameterCatalog::new()).unwrap().poisson(2).unwrap();
        assert!(jacobi_check(&eta, 0.0), "N={n}");
    }
}

#[test]
fn exp_neg_series_coefficients() {
    let at = Evaluation::Series(3);
    let q: Series = ParamScalar::realize(&starprod_core::params::ParamRule::ExpNeg, &at).unwrap();
    assert_eq!(q.coeff(1), CRational::from_i64(-1));
    assert_eq!(q.coeff(2), CRational::ratio(1, 2));
}
