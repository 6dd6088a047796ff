use starprod_core::catalog::Direction;
use starprod_core::sample::{self, ChaCha8Rng};
use starprod_core::scalar::{CRational, Complex64, RationalQ, Scalar};
use starprod_core::states::*;
use starprod_core::{GeneratorKind, MultiIndex, Polynomial};

fn random_state(rng: &mut ChaCha8Rng, d: usize, hbar: f64) -> StateFunctional<Complex64> {
    StateFunctional::new(WickPoint::random(rng, d, 1.2), hbar).unwrap()
}

#[test]
fn deformed_gram_matrices_are_positive_for_both_signs() {
    let mut rng = sample::rng(17);
    for d in 2..=4 {
        for degree in 1..=(if d == 4 { 3 } else { 4 }) {
            for hbar in [-1.0, -0.1, 0.0, 0.1, 1.0] {
                for _ in 0..3 {
                    let state = random_state(&mut rng, d, hbar);
                    let check = psd_check(&state.gram(degree).1, PSD_TOLERANCE).unwrap();
                    assert!(check.pass, "d={d} D={degree} hbar={hbar}: {check:?}");
                }
            }
        }
    }
}

#[test]
fn undeformed_evaluation_is_not_positive_for_positive_hbar() {
    let mut rng = sample::rng(18);
    for d in 2..=4 {
        for _ in 0..5 {
            let state = random_state(&mut rng, d, 0.7);
            let gram = to_matrix(&state.undeformed_gram_matrix(2).1);
            let check = psd_check(&gram, PSD_TOLERANCE).unwrap();
            assert!(!check.pass, "d={d}");
            let witness = nonpositivity_witness(state.point(), 0.7, 1).unwrap();
            assert!((witness - Complex64::new((-0.7f64).exp() - 1.0, 0.0)).norm() < 1e-12);
        }
    }
    // for ħ ≤ 0 the same witness is harmless
    let z = WickPoint::new(vec![Complex64::new(0.3, 0.4), Complex64::new(0.3, -0.4)]).unwrap();
    assert!(nonpositivity_witness(&z, -0.5, 1).unwrap().re > 0.0);
    assert!(nonpositivity_witness(&z, 0.5, 2).is_err());
}

#[test]
fn vandermonde_determinants() {
    for hbar in [0.0, -0.3, -2.0] {
        for n in 1..6 {
            assert!(vandermonde_psd_check(hbar, n).unwrap());
        }
    }
    assert!(vandermonde_psd_check(0.5, 3).is_err());
}

fn exact_point(d: usize) -> WickPoint<RationalQ> {
    let coords = [CRational::complex(1, 2, 2, 1), CRational::complex(-3, 1, 1, 3), CRational::ratio(2, 1)];
    let mut z = vec![RationalQ::zero(); d];
    for i in 0..d.div_ceil(2) {
        let c = if i == d - 1 - i { CRational::ratio(-5, 4) } else { coords[i].clone() };
        z[i] = RationalQ::from_crational(&c);
        z[d - 1 - i] = RationalQ::from_crational(&c.conj());
    }
    WickPoint::new(z).unwrap()
}

fn w(d: usize, k: &MultiIndex) -> Polynomial<RationalQ> {
    Polynomial::monomial(d, GeneratorKind::W, k.clone(), RationalQ::one())
}

#[test]
fn psi_intertwines_products_and_involutions_exactly() {
    // v = e^{ħ/2} is the indeterminate; ⋆_ħ has q = v^{-2}, ⋆_{-ħ} has q = v^2
    let v = RationalQ::q();
    let q_plus = v.powi(-2).unwrap();
    let q_minus = v.pow(2);
    for d in 2..=3 {
        let basis = MultiIndex::all_up_to(d, 5);
        for k in &basis {
            let psi_k = psi_map(&w(d, k), &v, Direction::Forward).unwrap();
            let star_k = w(d, k).conjugate();
            assert_eq!(psi_map(&star_k, &v, Direction::Forward).unwrap(), psi_k.conjugate());
            assert_eq!(psi_map(&psi_k, &v, Direction::Inverse).unwrap(), w(d, k));
            for l in basis.iter().filter(|l| l.degree() + k.degree() <= 7) {
                let lhs = psi_map(&wick_product(&w(d, k), &w(d, l), &q_plus), &v, Direction::Forward).unwrap();
                let psi_l = psi_map(&w(d, l), &v, Direction::Forward).unwrap();
                assert_eq!(lhs, wick_product(&psi_k, &psi_l, &q_minus), "{k} {l}");
            }
        }
    }
}

#[test]
fn pulled_back_state_identity_holds_exactly() {
    let v = RationalQ::q();
    let v_inv = v.inv().unwrap();
    for d in 2..=4 {
        let z = exact_point(d);
        for (branch, mirror) in [(Branch::Positive, Branch::Nonpositive), (Branch::Nonpositive, Branch::Positive)] {
            let state = StateFunctional::with_parameter(z.clone(), v.clone(), branch).unwrap();
            let partner = StateFunctional::with_parameter(z.conj(), v_inv.clone(), mirror).unwrap();
            for k in MultiIndex::all_up_to(d, 6) {
                let pulled = partner.apply(&psi_map(&w(d, &k), &v, Direction::Forward).unwrap());
                assert_eq!(state.delta_eval(&k), pulled, "d={d} {k}");
            }
        }
    }
}

#[test]
fn gns_adjoint_relation() {
    let mut rng = sample::rng(19);
    for hbar in [-0.8, 0.0, 0.6] {
        for _ in 0..4 {
            let state = random_state(&mut rng, 2, hbar);
            let gns = gns_build(&state, 3).unwrap();
            assert!(gns.rank >= 1 && gns.rank <= gns.basis.len());
            for i in 0..2 {
                let a = Polynomial::generator(2, GeneratorKind::W, i);
                assert!(gns.adjoint_residual(&state, &a).unwrap() <= 1e-8);
            }
            let a: Polynomial<Complex64> = sample::polynomial(&mut rng, 2, GeneratorKind::W, 2, 3);
            assert!(gns.adjoint_residual(&state, &a).unwrap() <= 1e-8);
        }
    }
}

#[test]
fn gns_builds_where_plain_evaluation_is_indefinite() {
    // the deformed state is positive even though plain evaluation is not
    let z = WickPoint::new(vec![Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)]).unwrap();
    let state = StateFunctional::new(z, 0.5).unwrap();
    assert!(gns_build(&state, 2).is_ok());
    let m = to_matrix(&state.undeformed_gram_matrix(1).1);
    assert!(!psd_check(&m, PSD_TOLERANCE).unwrap().pass);
}

#[test]
fn growth_dichotomy() {
    let mut rng = sample::rng(20);
    for d in 2..=4 {
        for hbar in [0.3, 1.0] {
            let state = random_state(&mut rng, d, hbar);
            assert!(state_macgyver_bound(&state, hbar, 10).pass);
        }
        let state = StateFunctional::new(WickPoint::random(&mut rng, d, 1.0), 1.0).unwrap();
        let k = unbounded_ratio_probe(&state, 1, &vec![1.0; d], 1e6, 40);
        assert!(k.is_some(), "d={d}");
        // for ħ ≤ 0 the ratio stays bounded by the point's size
        let flat = StateFunctional::new(state.point().clone(), -1.0).unwrap();
        assert!(unbounded_ratio_probe(&flat, 1, &vec![1.5; d], 1e6, 40).is_none());
    }
}

#[test]
fn states_separate_polynomials() {
    let mut rng = sample::rng(21);
    for hbar in [-1.0, 0.0, 0.5] {
        for d in 2..=3 {
            let f: Polynomial<Complex64> = sample::polynomial(&mut rng, d, GeneratorKind::W, 3, 3);
            let sep = point_separation_probe(&f, hbar, &mut rng, 1e-9).unwrap();
            assert!(sep.separated);
            assert!(sep.witness.is_some());
        }
    }
    let zero = Polynomial::<Complex64>::zero(2, GeneratorKind::W);
    assert!(point_separation_probe(&zero, 0.1, &mut rng, 1e-9).is_err());
}
