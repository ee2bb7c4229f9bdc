use std::f64::consts::PI;

use ckl_core::catalog::{all_examples, honeycomb, lattice};
use ckl_core::kasteleyn::{assign_kasteleyn_signs, char_poly};
use ckl_core::laurent::LaurentPoly2;
use ckl_core::mahler::{mahler_jensen, mahler_jensen_default, mahler_quadrature, ronkin};
use ckl_core::spanning_tree::temperley_lift;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn smyth() -> LaurentPoly2 {
    LaurentPoly2::from_real(&[(1, 0, 1.0), (0, 1, 1.0), (0, 0, -1.0)])
}

fn honeycomb_poly() -> LaurentPoly2 {
    let g = honeycomb();
    char_poly(&g, &assign_kasteleyn_signs(&g).unwrap()).unwrap()
}

#[test]
fn linear_polynomial_by_both_methods() {
    let j = mahler_jensen(&smyth(), 128, 1e-12).unwrap();
    let q = mahler_quadrature(&smyth(), 512).unwrap();
    assert!((j.value - 0.3230659).abs() < 1e-7);
    assert!((j.value - q.value).abs() < 1e-6, "{j:?} {q:?}");
}

#[test]
fn honeycomb_methods_agree() {
    let p = honeycomb_poly();
    let (j, q) = (mahler_jensen_default(&p).unwrap(), mahler_quadrature(&p, 256).unwrap());
    assert!((j.value - q.value).abs() < 1e-6);
}

#[test]
fn four_eight_eight_by_quadrature() {
    let g = temperley_lift(&lattice("4.8.8").unwrap()).unwrap();
    let p = char_poly(&g, &assign_kasteleyn_signs(&g).unwrap()).unwrap();
    let q = mahler_quadrature(&p, 256).unwrap();
    assert!((2.0 * PI * q.value - 19.7715323218).abs() < 1e-6, "{q:?}");
}

#[test]
fn methods_agree_on_every_catalog_polynomial() {
    for ex in all_examples() {
        let g = ex.dimer_graph().unwrap();
        let p = char_poly(&g, &assign_kasteleyn_signs(&g).unwrap()).unwrap();
        let (j, q) = (mahler_jensen_default(&p).unwrap(), mahler_quadrature(&p, 256).unwrap());
        assert!((j.value - q.value).abs() <= 1e-5, "{}: {} vs {}", ex.name, j.value, q.value);
        assert!(q.error_estimate < 1e-5 && j.error_estimate < 1e-8, "{}", ex.name);
    }
}

#[test]
fn monomial_ronkin_and_mahler_identity() {
    let z = LaurentPoly2::from_real(&[(1, 0, 1.0)]);
    assert!((ronkin(&z, -1.3, 2.0, 16).unwrap() + 1.3).abs() < 1e-13);
    let p = honeycomb_poly();
    let m = mahler_jensen_default(&p).unwrap().value;
    assert!((ronkin(&p, 0.0, 0.0, 256).unwrap() - m).abs() < 1e-6);
}

#[test]
fn honeycomb_ronkin_is_midpoint_convex() {
    let p = honeycomb_poly();
    let f = |x: f64, y: f64| ronkin(&p, x, y, 128).unwrap();
    let (a, b, c) = (f(-1.0, 0.0), f(0.0, 0.0), f(1.0, 0.0));
    assert!(b <= 0.5 * (a + c) + 1e-6, "{a} {b} {c}");
    let mut rng = StdRng::seed_from_u64(20);
    for _ in 0..20 {
        let (x0, y0, x1, y1) =
            (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let mid = f(0.5 * (x0 + x1), 0.5 * (y0 + y1));
        assert!(mid <= 0.5 * (f(x0, y0) + f(x1, y1)) + 1e-6);
    }
}

fn poly_from(coeffs: &[(i64, i64, f64, f64)]) -> LaurentPoly2 {
    LaurentPoly2::from_terms(coeffs.iter().map(|&(i, j, re, im)| ((i, j), Complex64::new(re, im))))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn monomial_and_conjugation_invariance(
        terms in prop::collection::vec((-2i64..3, -2i64..3, -2.0f64..2.0, -2.0f64..2.0), 2..7),
        a in -4i64..5,
        b in -4i64..5,
    ) {
        let p = poly_from(&terms);
        prop_assume!(p.len() >= 2 && p.max_abs_coeff() > 0.1);
        let m = mahler_jensen(&p, 64, 1e-11).unwrap().value;
        let shifted = mahler_jensen(&p.shift(a, b), 64, 1e-11).unwrap().value;
        let conj = mahler_jensen(&p.conjugate(), 64, 1e-11).unwrap().value;
        prop_assert!((m - shifted).abs() < 1e-8, "{} vs {}", m, shifted);
        prop_assert!((m - conj).abs() < 1e-8, "{} vs {}", m, conj);
    }
}
