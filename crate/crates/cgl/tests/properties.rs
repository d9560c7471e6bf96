//! Randomized property tests. The seed is fixed by default and can be
//! overridden with the CGL_PROPTEST_SEED environment variable; it is printed
//! so any failure is reproducible.

use num_bigint::BigInt;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestError, TestRng, TestRunner};

use cgl::cgl_verify::verify_cgl;
use cgl::char_lattice::{relation_lattice, torus_membership};
use cgl::cgl_verify::is_diag_automorphism;
use cgl::pbw::{Exp, PBWPoly};
use cgl::presentation::{catalog, Presentation};
use cgl::prime_seq::compute_prime_sequence;
use cgl::quantum_torus::{decompose_exponent, in_delta_set, Torus};
use cgl::scalars::{IntPoly, MonomialScalar, RatFunc};

fn runner() -> TestRunner {
    let seed: u64 = std::env::var("CGL_PROPTEST_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(0);
    eprintln!("property-test seed = {}", seed);
    let mut bytes = [0u8; 32];
    bytes[..8].copy_from_slice(&seed.to_le_bytes());
    TestRunner::new_with_rng(
        Config { cases: 48, failure_persistence: None, ..Config::default() },
        TestRng::from_seed(RngAlgorithm::ChaCha, &bytes),
    )
}

fn check<S: Strategy>(strategy: S, f: impl Fn(S::Value) -> Result<(), TestCaseError>) {
    match runner().run(&strategy, f) {
        Ok(()) => {}
        Err(TestError::Fail(reason, value)) => {
            panic!("property failed: {} (rerun with the printed seed); input {:?}", reason, value)
        }
        Err(TestError::Abort(reason)) => panic!("property aborted: {}", reason),
    }
}

fn int_poly() -> impl Strategy<Value = IntPoly> {
    proptest::collection::vec(-4i64..=4, 0..3)
        .prop_map(|v| IntPoly::new(v.into_iter().map(BigInt::from).collect()))
}

fn rat_func() -> impl Strategy<Value = RatFunc> {
    (int_poly(), int_poly()).prop_map(|(n, d)| {
        let d = if d.is_zero() { IntPoly::one() } else { d };
        RatFunc::new(n, d).unwrap()
    })
}

fn nonzero_rat_func() -> impl Strategy<Value = RatFunc> {
    rat_func().prop_map(|r| if r.is_zero() { RatFunc::one() } else { r })
}

/// Random polynomial with nonnegative exponents and small coefficients.
fn pbw_poly(n: usize) -> impl Strategy<Value = PBWPoly> {
    proptest::collection::vec(
        (proptest::collection::vec(0i64..=2, n), -3i64..=3, 0i64..=1),
        1..3,
    )
    .prop_map(move |terms| {
        let mut p = PBWPoly::zero(n);
        for (e, c, qe) in terms {
            if c != 0 {
                p.add_term(Exp(e), RatFunc::from_int(c).mul_q_power(qe));
            }
        }
        p
    })
}

trait QPow {
    fn mul_q_power(self, e: i64) -> RatFunc;
}
impl QPow for RatFunc {
    fn mul_q_power(self, e: i64) -> RatFunc {
        &self * &MonomialScalar::q(e).to_ratfunc()
    }
}

#[test]
fn rat_func_field_axioms() {
    check((rat_func(), rat_func(), rat_func()), |(a, b, c)| {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&(&a - &b) + &b, a.clone());
        Ok(())
    });
    check(nonzero_rat_func(), |a| {
        prop_assert_eq!(&a * &a.inv().unwrap(), RatFunc::one());
        Ok(())
    });
}

#[test]
fn pbw_multiplication_associativity() {
    for name in ["example_3_2(1)", "quantum_matrices_2x2"] {
        let p = catalog(name).unwrap();
        let n = p.n;
        check((pbw_poly(n), pbw_poly(n), pbw_poly(n)), move |(a, b, c)| {
            let ab_c = p.ore.mul(&p.ore.mul(&a, &b).unwrap(), &c).unwrap();
            let a_bc = p.ore.mul(&a, &p.ore.mul(&b, &c).unwrap()).unwrap();
            prop_assert_eq!(ab_c, a_bc);
            Ok(())
        });
    }
}

#[test]
fn sigma_delta_commutation() {
    // sigma_k delta_k = lambda_k delta_k sigma_k on random polynomials
    for name in ["example_3_2(2)", "quantum_matrices_2x2", "uqplus_sl3"] {
        let p = catalog(name).unwrap();
        let cert = verify_cgl(&p);
        let n = p.n;
        check(pbw_poly(n), move |a| {
            for k in 0..n {
                if (0..k).all(|j| p.ore.delta_is_zero(k, j)) {
                    continue;
                }
                let lam = &cert.witnesses[k].as_ref().unwrap().eigenvalue;
                // delta_k is only defined below level k: project the input
                let mut a = {
                    let mut out = PBWPoly::zero(n);
                    for (e, c) in &a.terms {
                        let mut e = e.clone();
                        for i in k..n {
                            e.0[i] = 0;
                        }
                        out.add_term(e, c.clone());
                    }
                    out
                };
                if a.is_zero() {
                    a = PBWPoly::one(n);
                }
                let lhs = p.ore.apply_sigma(k, &p.ore.apply_delta(k, &a).unwrap(), 1);
                let rhs = p
                    .ore
                    .apply_delta(k, &p.ore.apply_sigma(k, &a, 1))
                    .unwrap()
                    .scale(&lam.to_ratfunc());
                prop_assert_eq!(lhs, rhs);
            }
            Ok(())
        });
    }
}

#[test]
fn leading_term_is_multiplicative() {
    for name in ["example_3_2(1)", "quantum_matrices_2x2", "uqplus_sl3"] {
        let p = catalog(name).unwrap();
        let n = p.n;
        check((pbw_poly(n), pbw_poly(n)), move |(a, b)| {
            prop_assume!(!a.is_zero() && !b.is_zero());
            let prod = p.ore.mul(&a, &b).unwrap();
            let (la, _) = a.leading_term().unwrap();
            let (lb, _) = b.leading_term().unwrap();
            let (lp, cp) = prod.leading_term().unwrap();
            prop_assert_eq!(lp.clone(), la.add(lb));
            prop_assert!(!cp.is_zero());
            Ok(())
        });
    }
}

#[test]
fn bicharacter_consistency() {
    let (p, cert) = {
        let p = catalog("quantum_matrices_2x2").unwrap();
        let c = verify_cgl(&p);
        (p, c)
    };
    let seq = compute_prime_sequence(&p, &cert).unwrap();
    let t = Torus::from_sequence(&seq);
    let n = p.n;
    let exps = proptest::collection::vec(-3i64..=3, n).prop_map(Exp);
    check((exps.clone(), exps.clone(), exps), move |(f, g, h)| {
        let sum = g.add(&h);
        let lhs = t.bicharacter(&f, &sum);
        let rhs = t.bicharacter(&f, &g).mul(&t.bicharacter(&f, &h));
        prop_assert_eq!(lhs, rhs);
        // associativity of monomial multiplication
        let yf = cgl::quantum_torus::Laurent::monomial(n, f, RatFunc::one());
        let yg = cgl::quantum_torus::Laurent::monomial(n, g, RatFunc::one());
        let yh = cgl::quantum_torus::Laurent::monomial(n, h, RatFunc::one());
        prop_assert_eq!(t.mul(&t.mul(&yf, &yg), &yh), t.mul(&yf, &t.mul(&yg, &yh)));
        Ok(())
    });
}

#[test]
fn truncation_coherence() {
    // the prime sequence of a truncated presentation matches the prefix of
    // the full sequence
    let p = catalog("quantum_matrices_2x2").unwrap();
    let cert = verify_cgl(&p);
    let seq = compute_prime_sequence(&p, &cert).unwrap();
    check(1usize..=4, move |m| {
        let pt = p.truncate(m);
        let ct = verify_cgl(&pt);
        prop_assert!(ct.is_cgl());
        let st = compute_prime_sequence(&pt, &ct).unwrap();
        for k in 0..m {
            let full: Vec<(Vec<i64>, RatFunc)> = seq.y[k]
                .terms
                .iter()
                .map(|(e, c)| (e.0[..m].to_vec(), c.clone()))
                .collect();
            let trunc: Vec<(Vec<i64>, RatFunc)> =
                st.y[k].terms.iter().map(|(e, c)| (e.0.clone(), c.clone())).collect();
            prop_assert_eq!(full, trunc);
        }
        Ok(())
    });
}

#[test]
fn decomposition_uniqueness() {
    // random nonnegative exponents decompose and recompose exactly, with the
    // distinguished part in the index set
    for name in ["example_3_2(2)", "quantum_matrices_2x2", "uqplus_sl3"] {
        let p = catalog(name).unwrap();
        let cert = verify_cgl(&p);
        let seq = compute_prime_sequence(&p, &cert).unwrap();
        let n = p.n;
        check(proptest::collection::vec(0i64..=6, n).prop_map(Exp), move |f| {
            let (g, c) = decompose_exponent(&f, &seq);
            prop_assert!(in_delta_set(&g, &seq));
            for k in 0..n {
                prop_assert_eq!(BigInt::from(f.0[k]), BigInt::from(g.0[k]) + &c[seq.mu[k]]);
            }
            Ok(())
        });
    }
}

#[test]
fn membership_agrees_with_automorphism_check() {
    for name in ["example_3_2(1)", "quantum_matrices_2x2", "uqplus_sl3"] {
        let p: Presentation = catalog(name).unwrap();
        let l = relation_lattice(&p).unwrap();
        let n = p.n;
        let tuples = proptest::collection::vec((prop::bool::ANY, -3i64..=3), n).prop_map(|v| {
            v.into_iter()
                .map(|(neg, e)| {
                    let s = MonomialScalar::q(e);
                    if neg {
                        s.mul(&MonomialScalar::int_q(-1, 0))
                    } else {
                        s
                    }
                })
                .collect::<Vec<_>>()
        });
        check(tuples, move |psi| {
            prop_assert_eq!(torus_membership(&psi, &l), is_diag_automorphism(&psi, &p));
            Ok(())
        });
    }
}
