use std::sync::Arc;

use super::*;
use crate::algebra::{Field, PrimeField, Rationals};
use crate::ideals::{Ideal, RingContext};
use crate::invariants::{find_minimal_reduction, hilbert_data, reduction_data, rho_nu_sequences, LocalSetup, Options};
use crate::io::dsl::{parse_poly, parse_polys};

fn ideal<F: Field>(c: &Arc<RingContext<F>>, s: &str) -> Ideal<F> {
    Ideal::new(c.clone(), parse_polys(c.ring(), s).unwrap()).unwrap()
}

fn five_quadrics<F: Field>(field: F) -> (Arc<RingContext<F>>, LocalSetup<F>, Ideal<F>) {
    let c = RingContext::polynomial(field, &["x", "y", "z"]).unwrap();
    let i = ideal(&c, "-x^2+y^2, -y^2+z^2, x*y, y*z, z*x");
    let j = ideal(&c, "-x^2+y^2, -y^2+z^2, x*y");
    let m = Ideal::maximal(c.clone());
    let s = LocalSetup::new(i, Some(m), 11, Options::default()).unwrap();
    (c, s, j)
}

fn check_five_quadrics<F: Field>(field: F) {
    let (c, s, j) = five_quadrics(field);
    let red = reduction_data(&s, j, 10).unwrap();
    assert_eq!(red.r, 2);
    let amm = amm_check(&s, &red, 8, None).unwrap();
    assert_eq!(amm.k_length, 1);
    assert!(amm.almost_minimal);
    assert_eq!(amm.mu, 5);
    assert_eq!(amm.colength, 5);
    assert_eq!(amm.mu_residual, 0);
    let ladder = laddered_one_check(&s, &red, &amm).unwrap();
    assert_eq!(ladder[0], 1);
    assert_eq!(*ladder.last().unwrap(), 0);

    let pres = fiber_presentation(&s).unwrap();
    assert_eq!(pres.target.nvars(), 5);
    for (_, a, b) in presentation_series_check(&s, &pres, 4).unwrap() {
        assert_eq!(a, b);
    }
    let sop = sop_images(&pres, &red).unwrap();
    let report = depth_by_sop(&pres, &sop, 1, 4).unwrap();
    assert_eq!(report.depth, 1);
    assert!(report.certified);
    assert!(report.singles.iter().all(|&b| b));
    assert!(report.pairs.iter().all(|p| !p.regular));

    // (−x²+y²)F : (−y²+z²)F contains y²z² − x²z², which is not in (−x²+y²)F
    let w = pres.lift(&parse_poly(c.ring(), "y^2*z^2 - x^2*z^2").unwrap()).unwrap();
    let base = pres.ideal_with(&sop[..1]).unwrap();
    let colon = base.colon_poly(&sop[1]).unwrap();
    assert!(colon.contains(&w).unwrap());
    assert!(!base.contains(&w).unwrap());
    assert!(!colon.ideal_eq(&base).unwrap());

    let depth = depth_report(&s, &red, 4).unwrap();
    assert_eq!(depth.exact_fiber_depth, Some(1));
    assert!(depth.fiber_depth_positive);
    assert!(!depth.graded_depth_positive);
    assert!(depth.graded_h0[0] > 0);
}

#[test]
fn five_quadrics_prime_field() {
    check_five_quadrics(PrimeField::default());
}

#[test]
fn five_quadrics_rationals() {
    check_five_quadrics(Rationals);
}

#[test]
fn minimal_multiplicity_of_square() {
    let c = RingContext::polynomial(Rationals, &["x", "y"]).unwrap();
    let m = Ideal::maximal(c.clone());
    let i = ideal(&c, "x^2, x*y, y^2");
    let s = LocalSetup::new(i.clone(), Some(m), 1, Options::default()).unwrap();
    let red = reduction_data(&s, ideal(&c, "x^2, y^2"), 10).unwrap();
    let amm = amm_check(&s, &red, 4, None).unwrap();
    assert!(amm.minimal_multiplicity);
    assert!(laddered_one_check(&s, &red, &amm).is_err());
    let classical = s.with_k(None).unwrap();
    let amm_r = amm_check(&classical, &red, 4, None).unwrap();
    assert_eq!(amm_r.k_length, 1);
}

#[test]
fn polynomial_fiber_cones() {
    let c = RingContext::polynomial(Rationals, &["x", "y"]).unwrap();
    let m = Ideal::maximal(c.clone());
    let s = LocalSetup::new(m.clone(), Some(m.clone()), 1, Options::default()).unwrap();
    let pres = fiber_presentation(&s).unwrap();
    assert!(pres.kernel.is_zero().unwrap());
    let vars: Vec<_> = (0..2).map(|k| pres.target.ring().var(k)).collect();
    assert_eq!(depth_by_sop(&pres, &vars, 1, 2).unwrap().depth, 2);

    let p = ideal(&c, "x^2, y^2");
    let s = LocalSetup::new(p, Some(m.clone()), 1, Options::default()).unwrap();
    assert!(fiber_presentation(&s).unwrap().kernel.is_zero().unwrap());

    let mixed = ideal(&c, "x^2, y^3, x*y^2");
    let s = LocalSetup::new(mixed, Some(m), 1, Options::default()).unwrap();
    assert!(matches!(
        fiber_presentation(&s),
        Err(crate::AlgebraError::Unsupported(_))
    ));
}

#[test]
fn bounds_on_small_instances() {
    let c = RingContext::polynomial(PrimeField::default(), &["x", "y"]).unwrap();
    let m = Ideal::maximal(c.clone());
    for gens in ["x^2, y^2", "x^2, x*y, y^2", "x^4, x^3*y, x*y^3, y^4", "x^3, x^2*y, y^3"] {
        let i = ideal(&c, gens);
        for k in [None, Some(m.clone())] {
            let s = LocalSetup::new(i.clone(), k, 3, Options::default()).unwrap();
            let red = find_minimal_reduction(&s, 20, 8).unwrap();
            let hd = hilbert_data(&s).unwrap();
            let seqs = rho_nu_sequences(&s, &red, hd.g(0), None).unwrap();
            let audit = audit_bounds(&s, &red, &hd, &seqs).unwrap();
            assert_eq!(audit.violations().count(), 0);
            assert!(audit.get("rossi").unwrap().hypotheses_verified());
        }
    }
}

#[test]
fn h0_of_parameter_ideal_vanishes() {
    let c = RingContext::polynomial(Rationals, &["x", "y"]).unwrap();
    let m = Ideal::maximal(c.clone());
    let p = ideal(&c, "x^2, y^3");
    let s = LocalSetup::new(p.clone(), Some(m), 1, Options::default()).unwrap();
    let red = reduction_data(&s, p, 5).unwrap();
    assert!(h0_pieces(&s, &red, 5).unwrap().iter().all(|&x| x == 0));
}

#[test]
fn series_of_maximal_ideal() {
    // I = m = K in k[x,y]: λ(R/m^{n+1}) = (n+1)(n+2)/2 and the closed form
    // with e0 = 1, s = 0 is (1 + (1−1−1)t + t)/(1−t)^3 = 1/(1−t)^3
    let c = RingContext::polynomial(Rationals, &["x", "y"]).unwrap();
    let m = Ideal::maximal(c.clone());
    let s = LocalSetup::new(m.clone(), Some(m.clone()), 1, Options::default()).unwrap();
    let red = reduction_data(&s, m.clone(), 5).unwrap();
    assert_eq!(red.s, 0);
    let rk = 1;
    let coeffs = expand_rational(&[rk, 1 - 1 - rk + 1], 3, 7);
    let table: Vec<i64> = (0..=7).map(|n| (n + 1) * (n + 2) / 2).collect();
    assert_eq!(coeffs, table);
    let amm = amm_check(&s, &red, 1, None).unwrap();
    assert!(amm.minimal_multiplicity);
    let rep = series(&s, &red, &amm, None).unwrap();
    assert_eq!(rep.n_max, 7);
    assert_eq!(rep.hilbert.iter().map(|&x| x as i64).collect::<Vec<_>>(), table);
    assert!(rep.closed_form.is_none());
}

#[test]
fn one_dimensional_series() {
    // R = k[x,y]/(x^2 - y^2 ... ) style complete intersection with d = 1
    let c = RingContext::new(
        PrimeField::default(),
        vec!["x".into(), "y".into()],
        parse_polys(
            &crate::algebra::PolyRing::new(
                PrimeField::default(),
                vec!["x".into(), "y".into()],
                crate::algebra::MonomialOrder::DegRevLex,
            )
            .unwrap(),
            "x^3 - y^3",
        )
        .unwrap(),
    )
    .unwrap();
    let m = Ideal::maximal(c.clone());
    let s = LocalSetup::new(m.clone(), Some(m.clone()), 5, Options::default()).unwrap();
    let red = find_minimal_reduction(&s, 10, 8).unwrap();
    let e0 = hilbert_data(&s.with_k(None).unwrap()).unwrap().g(0);
    assert_eq!(e0, 3);
    let amm = amm_check(&s, &red, e0, None).unwrap();
    let rep = series(&s, &red, &amm, None).unwrap();
    if amm.almost_minimal {
        assert!(rep.closed_form.unwrap().matches);
    }
}
