//! Frozen reference values: closed forms evaluated independently of the
//! code paths under test, and the explicit values for Sym^m.

mod common;

use rug::{Float, Rational};

use common::{abs_diff, tol};
use cusp_torsion::defects::{self, CohomologyDims, CuspCharacter};
use cusp_torsion::kostant::{build_sym_power_rep, decompose, exterior_complex};
use cusp_torsion::repdata::{is_strongly_acyclic, lambda_ladder, weyl_dim, Flavor, HighestWeight};
use cusp_torsion::scalar::Qi;
use cusp_torsion::{dim3, modeldet, rtorsion, PrecisionContext};

fn ctx() -> PrecisionContext {
    PrecisionContext::default()
}

fn phi(c: &PrecisionContext) -> Float {
    (c.int(5).sqrt() + 1u32) / 2u32
}

fn q(v: i64) -> Rational {
    Rational::from(v)
}

#[test]
fn sym_power_ladder() {
    let l = lambda_ladder(&HighestWeight::sym_power(4));
    assert_eq!(l.values(), &[q(3), q(2), q(-3)]);
    assert_eq!(*l.lam_plus(), 2);
    for m in 1..20 {
        assert!(is_strongly_acyclic(&HighestWeight::sym_power(m)));
    }
    let hw = HighestWeight::from_ints(5, Flavor::SO0, &[2, 1, 1]).unwrap();
    assert_eq!(lambda_ladder(&hw).values(), &[q(4), q(2), q(1), q(-2), q(-4)]);
    // dim Sym^m = m+1
    for m in 0..12u32 {
        assert_eq!(weyl_dim(&HighestWeight::sym_power(m)).unwrap(), m + 1);
    }
}

#[test]
fn sym_power_kostant_data() {
    let c = ctx();
    let cx = exterior_complex(&build_sym_power_rep(2)).unwrap();
    let l0 = cx.laplacian(0);
    let diag: Vec<Qi> = (0..3).map(|i| l0[(i, i)].clone()).collect();
    assert_eq!(diag, vec![Qi::from_int(4), Qi::from_int(4), Qi::from_int(0)]);
    let hd = decompose(&build_sym_power_rep(4), &c).unwrap();
    assert_eq!(hd.dims, vec![1, 2, 1]);
    assert_eq!(
        hd.weights,
        vec![vec![(q(3), 1)], vec![(q(2), 1), (q(-2), 1)], vec![(q(-3), 1)]]
    );
    for m in 1..=6u32 {
        let hd = decompose(&build_sym_power_rep(m), &c).unwrap();
        assert_eq!(hd.vqab.len(), 2 * m as usize);
        for j in 0..m {
            let b2 = q(2 * (j as i64 + 1) * (m - j) as i64);
            let a0 = Rational::from((2 * j as i64 - m as i64 + 2, 2));
            let a1 = Rational::from((2 * j as i64 - m as i64, 2));
            assert!(hd
                .vqab
                .iter()
                .any(|e| e.q == 0 && e.a == a0 && e.b2.as_exact() == Some(&b2) && e.mult == 1));
            assert!(hd
                .vqab
                .iter()
                .any(|e| e.q == 1 && e.a == a1 && e.b2.as_exact() == Some(&b2) && e.mult == 1));
        }
    }
}

#[test]
fn model_constants() {
    let c = ctx();
    let t = tol(&c, 8);
    assert_eq!(modeldet::c_b_exact(&q(2)).unwrap().rat, Rational::from((4, 3)));
    assert_eq!(modeldet::c_b_exact(&q(1)).unwrap().rat, 2);
    let half = modeldet::c_b_exact(&Rational::from((1, 2))).unwrap();
    assert_eq!((half.rat, half.pi_pow), (q(1), 1));
    assert!(
        abs_diff(
            &modeldet::c_b(&Rational::from((3, 2)), &c).unwrap(),
            &(c.pi() / 2u32)
        ) < t
    );
    // Δ(a): det = c_|a| / (2|a|)^sign(a)
    let ld = modeldet::logdet_delta(&q(1), &c).unwrap();
    assert!(abs_diff(&ld, &c.int(1).ln()) < t);
    assert!(modeldet::logdet_delta(&q(0), &c).is_err());
    let s = modeldet::logdet_shifted_diff(&c.int(3), &c.int(4), &c).unwrap();
    assert!(abs_diff(&s, &(c.int(2).ln() * -2i32)) < t);
    let s = modeldet::logdet_shifted_diff(&c.int(1), &c.int(1), &c).unwrap();
    assert!(abs_diff(&s, &((c.int(2).sqrt() + 1u32).ln() * -2i32)) < t);
    let z = modeldet::zeta_diff_numeric(&c.int(3), &c.int(4), &c).unwrap();
    assert!(abs_diff(&z, &(c.int(2).ln() * 2u32)) < c.ten_pow_neg(6));
    assert!(modeldet::zeta_diff_numeric(&c.zero(), &c.int(1), &c)
        .unwrap()
        .is_zero());
}

#[test]
fn defect_pieces_for_m2() {
    let c = ctx();
    let t = tol(&c, 8);
    let r = defects::sym_power_report(2, 1, &c).unwrap();
    let log = |n: i64, d: i64| c.rational(&Rational::from((n, d))).ln();
    assert!(abs_diff(&r.alpha, &(log(4, 1) * 2u32)) < t);
    assert!(abs_diff(&r.beta, &(phi(&c).ln() * 2u32)) < t);
    assert!(abs_diff(r.a_term.as_ref().unwrap(), &log(32, 3)) < t);
    assert!(abs_diff(r.b_term.as_ref().unwrap(), &(phi(&c).ln() * 2u32)) < t);
    assert!(abs_diff(r.fp_ratio.as_ref().unwrap(), &log(2, 3)) < t);
    let expect = -(log(4, 1) + phi(&c).ln());
    assert!(abs_diff(&r.total_defect, &expect) < t);
    // κ(α+β) = κ(A+B) − fp holds, the half-weighted comparison does not
    assert!(r.consistency_residual().unwrap().abs() < t);
    assert!(r.half_weight_residual().unwrap().abs() > 1);
    // B(2) = 2 log φ, and the d=3 closed form agrees
    assert!(abs_diff(&dim3::b_m(2, &c).unwrap(), &(phi(&c).ln() * 2u32)) < t);
    let d3 = dim3::defect_dim3(2, 1, &c).unwrap();
    assert!(abs_diff(&d3.defect, &(log(4, 1) + phi(&c).ln())) < t);
    assert!(d3.cross_check_residual < t);
    let d0 = dim3::defect_dim3(2, 0, &c).unwrap();
    assert!(d0.total.is_zero() && !d0.defect.is_zero());
    let fp4 = defects::sym_power_report(4, 2, &c).unwrap().fp_ratio.unwrap();
    let c3 = modeldet::ln_c_b(&q(3), &c).unwrap();
    let c2 = modeldet::ln_c_b(&q(2), &c).unwrap();
    assert!(abs_diff(&fp4, &((c3 - c2) * 2u32)) < t);
}

#[test]
fn trivial_bundle_is_rejected() {
    let c = ctx();
    assert!(defects::sym_power_report(0, 1, &c).is_err());
    let dims = CohomologyDims::new(vec![1, 2, 1], 1, 1).unwrap();
    let l = lambda_ladder(&HighestWeight::sym_power(0));
    assert!(defects::alpha(&l, &dims, &c).is_err());
    let scan = defects::defect_growth_scan(0..=3, &c).unwrap();
    assert_eq!(scan.rows.iter().map(|r| r.m).collect::<Vec<_>>(), vec![1, 2, 3]);
    assert_eq!(scan.skipped.len(), 1);
}

#[test]
fn assembly_and_gluing() {
    let c = ctx();
    let t = tol(&c, 8);
    let r = defects::sym_power_report(2, 1, &c).unwrap();
    let x = c.float(0.75);
    let lt = defects::assemble_log_t(&x, &c.zero(), &r);
    assert!(abs_diff(&lt, &Float::with_val(c.bits(), &x + &r.total_defect)) < t);
    assert_eq!(defects::cusp_count(&[]), 0);
    use CuspCharacter::*;
    assert_eq!(defects::cusp_count(&[Trivial, Nontrivial, Trivial]), 2);
    assert_eq!(defects::cusp_count(&[Nontrivial, Nontrivial]), 0);
    let tau = c.float(1.5);
    let glued = rtorsion::milnor_glue(&tau, &c.int(1), true, &c).unwrap();
    assert!(abs_diff(&glued, &c.float(2.25)) < t);
    let g = rtorsion::milnor_glue(&c.int(3), &c.int(2), false, &c).unwrap();
    assert!(abs_diff(&g, &c.float(4.5)) < t);
    assert!(rtorsion::milnor_glue(&c.int(3), &c.int(2), true, &c).is_err());
}

#[test]
fn cusp_formula_for_m2() {
    let c = ctx();
    let t = tol(&c, 8);
    let hw = HighestWeight::sym_power(2);
    let ladder = lambda_ladder(&hw);
    let dims = CohomologyDims::new(vec![1, 2, 1], 1, 1).unwrap();
    let vqab = dim3::sym_power_vqab(2).unwrap();
    let lz = c.float(0.5);
    let zero = c.zero();
    let v = defects::cusp_torsion_ff2(&lz, 1, &ladder, &dims, &vqab, Some(&zero), 1, &zero, &c).unwrap();
    let r = defects::sym_power_report(2, 1, &c).unwrap();
    // −½logτ_Z − (α+β)/2 − ¼(log 2 + log 2), the λ⁺ = 1 term vanishing
    let expect = -(lz.clone() / 2u32) - r.c_rho.clone() - c.int(2).ln() / 2u32;
    assert!(abs_diff(&v, &expect) < t);
    let cn = c.float(0.3);
    let vol = c.int(2);
    let v2 = defects::cusp_torsion_ff2(&lz, 1, &ladder, &dims, &vqab, Some(&cn), 3, &vol, &c).unwrap();
    assert!(abs_diff(&(v2 - &v), &(cn * 6u32)) < t);
    assert!(defects::cusp_torsion_ff2(&lz, 1, &ladder, &dims, &vqab, None, 1, &zero, &c).is_err());
}

#[test]
fn three_dimensional_products() {
    let c = ctx();
    let t = tol(&c, 10);
    let b1 = dim3::b_ell(1, &c).unwrap();
    assert!(abs_diff(&b1, &((c.int(5).sqrt() - 1u32) / 8u32)) < t);
    assert!(dim3::b_vs_b_check(1, &c).unwrap() < t);
    assert!(dim3::b_vs_b_check(2, &c).unwrap() < t);
    let c1 = dim3::c_ell(1, &c).unwrap();
    let s5 = c.int(5).sqrt();
    let expect = Float::with_val(c.bits(), (s5.clone() + 1u32) / (s5 + 2u32)).sqrt() / 4u32;
    assert!(abs_diff(&c1, &expect) < t);
    assert!(dim3::verify_int6b(2, &c).unwrap().is_zero());
    for l in 1..=100 {
        assert!(dim3::b_ell(l, &c).unwrap() > 0);
    }
    // at 16 digits the identity still holds to 1e-12
    let low = PrecisionContext::new(16).unwrap();
    assert!(dim3::verify_int6b(20, &low).unwrap() < 1e-12);
}

#[test]
fn torsion_hand_computations() {
    use cusp_torsion::matrix::Mat;
    let c = Rational::from((7, 3));
    let cx = rtorsion::BasedComplex::<Rational>::new(
        vec![1, 1],
        vec![Mat::from_rows(vec![vec![c.clone()]], &()).unwrap()],
        vec![None, None],
        &(),
    )
    .unwrap();
    assert_eq!(rtorsion::torsion(&cx).unwrap(), c);
    let zero = rtorsion::BasedComplex::<Rational>::new(
        vec![2, 1],
        vec![Mat::zeros(1, 2, &())],
        vec![Some(Mat::identity(2, &())), Some(Mat::identity(1, &()))],
        &(),
    )
    .unwrap();
    assert_eq!(rtorsion::torsion(&zero).unwrap(), 1);
    let les = rtorsion::LesData::new(vec![0, 1, 1, 0], vec![0, 2, 2, 0], &ctx()).unwrap();
    let rep = rtorsion::mv_torsion_check(&les).unwrap();
    assert!((rep.torsion - 1u32).abs() < 1e-40);
}

#[test]
fn van_est_examples() {
    let one = Qi::from_int(1);
    let r = rtorsion::vanest_compare(3, [one.clone(), Qi::i()], [Qi::from_int(-1), one.clone()]).unwrap();
    assert_eq!(r.group_dims, vec![0, 0, 0]);
    assert_eq!(r.kostant_dims, vec![1, 2, 1]);
    assert_eq!(r.note, "acyclic, van Est not applicable");
    let t = rtorsion::vanest_compare(3, [one.clone(), Qi::i()], [one.clone(), one.clone()]).unwrap();
    assert_eq!(t.group_dims, t.kostant_dims);
    assert!(t.consistent && t.twist_trivial);
}
